//! Dual-path check of the reduction theorem: the Berezin oracle (exact
//! nilpotent expansion, no derivatives) against the symbolic reduction
//! operator applied to the profile restricted to the radial point.

use super::{
    berezin_oracle_matrix, berezin_oracle_vector, eigen_profile_jet, matrix_profiles,
    radial_profile_jet, vector_profiles, SuiteConfig,
};
use crate::operators::{
    build_matrix_operator_14, build_matrix_operator_22, build_matrix_operator_41,
    build_vector_d_cs, RadialOperator, VectorFlavor, DEGENERACY_FLOOR,
};
use crate::parallel;
use crate::report::VerificationReport;
use crate::superspace::MatrixSymmetry;
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// One dual-path case.
#[derive(Clone, Debug)]
pub enum Case {
    Vector {
        flavor: VectorFlavor,
        p: usize,
        l: usize,
        profile_idx: usize,
    },
    Matrix {
        symmetry: MatrixSymmetry,
        profile_idx: usize,
        psi: f64,
    },
}

fn flavor_name(f: VectorFlavor) -> &'static str {
    match f {
        VectorFlavor::Real => "real",
        VectorFlavor::Complex => "complex",
        VectorFlavor::Quaternion => "quaternion",
    }
}

/// Default case grid: real p<=4 L<=3, complex p<=3 L<=3, quaternion p<=2
/// L<=2; the five small matrix symmetries; three profiles; the Wick sweep
/// on the matrix cases.
pub fn default_grid(cfg: &SuiteConfig) -> Vec<Case> {
    let mut cases = Vec::new();
    let lmax = cfg.max_l;
    for (flavor, pmax, lcap) in [
        (VectorFlavor::Real, 4, lmax.min(3)),
        (VectorFlavor::Complex, 3, lmax.min(3)),
        (VectorFlavor::Quaternion, 2, lmax.min(2)),
    ] {
        for p in 1..=pmax {
            for l in 1..=lcap {
                for profile_idx in 0..3 {
                    cases.push(Case::Vector {
                        flavor,
                        p,
                        l,
                        profile_idx,
                    });
                }
            }
        }
    }
    let symmetries = [
        MatrixSymmetry::U { k1: 1, k2: 1 },
        MatrixSymmetry::U { k1: 2, k2: 1 },
        MatrixSymmetry::U { k1: 1, k2: 2 },
        MatrixSymmetry::UOSpPlus { k1: 1, k2: 1 },
        MatrixSymmetry::UOSpPlus { k1: 2, k2: 1 },
    ];
    for &symmetry in &symmetries {
        for &psi in &cfg.psi_sweep {
            for profile_idx in 0..3 {
                cases.push(Case::Matrix {
                    symmetry,
                    profile_idx,
                    psi,
                });
            }
        }
    }
    cases
}

/// Reduction operator of a matrix symmetry class.
pub fn matrix_operator(symmetry: MatrixSymmetry) -> Result<RadialOperator> {
    let (k1, k2) = symmetry.eigen_counts();
    match symmetry {
        MatrixSymmetry::U { .. } => build_matrix_operator_22(k1, k2),
        MatrixSymmetry::UOSpPlus { .. } => build_matrix_operator_14(k1, k2),
        MatrixSymmetry::UOSpMinus { .. } => build_matrix_operator_41(k1, k2),
    }
}

fn run_case(case: &Case, cfg: &SuiteConfig, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi_default = std::f64::consts::FRAC_PI_2;
    let mut report = match case {
        Case::Vector {
            flavor,
            p,
            l,
            profile_idx,
        } => {
            let profiles = vector_profiles();
            let profile = &profiles[*profile_idx];
            let dims = flavor.commuting_dims(*p);
            let mut body: Vec<f64> = (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm: f64 = body.iter().map(|x| x * x).sum::<f64>().sqrt();
            let target = rng.gen_range(0.6..1.6);
            for x in body.iter_mut() {
                *x *= target / norm.max(1e-9);
            }
            let r = body.iter().map(|x| x * x).sum::<f64>().sqrt();
            let lhs = berezin_oracle_vector(profile, *flavor, *p, *l, body)?;
            let op = build_vector_d_cs(*flavor, *p, *l)?;
            let jet = radial_profile_jet(profile, r, op.max_order())?;
            let rhs = op.apply_jet(&jet, &[r], psi_default, DEGENERACY_FLOOR)?;
            VerificationReport::new(
                "theorem1",
                vec![
                    ("kind".into(), "vector".into()),
                    ("flavor".into(), flavor_name(*flavor).into()),
                    ("p".into(), p.to_string()),
                    ("L".into(), l.to_string()),
                    ("profile".into(), profile.label().into()),
                ],
                lhs,
                rhs,
                cfg.rel_tol,
                true,
            )
        }
        Case::Matrix {
            symmetry,
            profile_idx,
            psi,
        } => {
            let (k1, k2) = symmetry.eigen_counts();
            let profiles = matrix_profiles(k1 + k2);
            let profile = &profiles[*profile_idx];
            // eigenvalues with comfortable gaps
            let mut point = Vec::with_capacity(k1 + k2);
            let mut next = rng.gen_range(-1.2..-0.8);
            for _ in 0..(k1 + k2) {
                point.push(next);
                next += rng.gen_range(0.35..0.9);
            }
            let (s1, s2) = point.split_at(k1);
            let lhs = berezin_oracle_matrix(profile, *symmetry, s1, s2, *psi)?;
            let op = matrix_operator(*symmetry)?;
            let jet = eigen_profile_jet(*symmetry, profile, &point, *psi, op.max_order())?;
            let rhs = op.apply_jet(&jet, &point, *psi, DEGENERACY_FLOOR)?;
            VerificationReport::new(
                "theorem1",
                vec![
                    ("kind".into(), "matrix".into()),
                    ("symmetry".into(), symmetry.label()),
                    ("psi".into(), format!("{psi:.6}")),
                    ("profile".into(), profile.label().into()),
                ],
                lhs,
                rhs,
                cfg.rel_tol,
                true,
            )
        }
    };
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Run the dual-path suite over the default grid.
pub fn run(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let cases: Vec<(usize, Case)> = default_grid(cfg).into_iter().enumerate().collect();
    parallel::map_collect(&cases, |(i, case)| {
        run_case(case, cfg, cfg.seed.wrapping_add(*i as u64)).unwrap_or_else(|e| {
            let mut r = VerificationReport::new(
                "theorem1",
                vec![("error".into(), e.to_string())],
                num_complex::Complex64::default(),
                num_complex::Complex64::new(f64::NAN, 0.0),
                cfg.rel_tol,
                true,
            );
            r.pass = false;
            r
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u11_dual_path_single_case() {
        let cfg = SuiteConfig::default();
        let case = Case::Matrix {
            symmetry: MatrixSymmetry::U { k1: 1, k2: 1 },
            profile_idx: 0,
            psi: std::f64::consts::FRAC_PI_2,
        };
        let r = run_case(&case, &cfg, 4).unwrap();
        assert!(r.pass, "deviation {:e}", r.rel_deviation());
    }

    #[test]
    fn real_vector_dual_path_single_case() {
        let cfg = SuiteConfig::default();
        let case = Case::Vector {
            flavor: VectorFlavor::Real,
            p: 2,
            l: 1,
            profile_idx: 0,
        };
        let r = run_case(&case, &cfg, 5).unwrap();
        assert!(r.pass, "deviation {:e}", r.rel_deviation());
    }

    #[test]
    fn uosp_plus_21_dual_path_single_case() {
        let cfg = SuiteConfig::default();
        let case = Case::Matrix {
            symmetry: MatrixSymmetry::UOSpPlus { k1: 2, k2: 1 },
            profile_idx: 1,
            psi: std::f64::consts::FRAC_PI_3,
        };
        let r = run_case(&case, &cfg, 6).unwrap();
        assert!(r.pass, "deviation {:e}", r.rel_deviation());
    }

    #[test]
    fn quaternion_vector_dual_path_single_case() {
        let cfg = SuiteConfig::default();
        let case = Case::Vector {
            flavor: VectorFlavor::Quaternion,
            p: 1,
            l: 1,
            profile_idx: 2,
        };
        let r = run_case(&case, &cfg, 7).unwrap();
        assert!(r.pass, "deviation {:e}", r.rel_deviation());
    }
}
