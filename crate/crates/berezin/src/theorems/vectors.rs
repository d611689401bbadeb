//! Quadrature verification of the supervector integral theorems: the full
//! commuting integral of the Berezin-reduced invariant function against the
//! printed case tables (boundary value at zero, reduced-dimension integral,
//! or derivative at zero).

use super::{berezin_oracle_vector, GaussLegendre, SuiteConfig};
use crate::jets::{InvariantProfile, Jet};
use crate::operators::VectorFlavor;
use crate::report::VerificationReport;
use crate::Result;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::time::Instant;

/// Surface area of the unit sphere in `d` dimensions.
fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d)
}

/// Gamma(d/2) for integer `d >= 1`.
fn gamma_half(d: usize) -> f64 {
    if d % 2 == 0 {
        let k = d / 2;
        (1..k).map(|i| i as f64).product::<f64>().max(1.0)
    } else {
        // Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
        let k = (d - 1) / 2;
        let mut v = PI.sqrt();
        for i in 0..k {
            v *= i as f64 + 0.5;
        }
        v
    }
}

/// m-th derivative of the profile at the given invariant value.
fn profile_derivative(profile: &dyn InvariantProfile, at: Complex64, m: usize) -> Result<Complex64> {
    let u = Jet::variable(1, m, 0, at);
    let jet = profile.eval_jet(&[u])?;
    Ok(jet.partial(&[m as u8]))
}

/// Radial quadrature panels reaching far enough for unit-rate Gaussians.
fn radial_panels() -> Vec<f64> {
    vec![0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 11.0]
}

/// Full-space integral of the Berezin oracle over the commuting variables,
/// reduced to one radial dimension by invariance.
fn lhs_radial(
    profile: &dyn InvariantProfile,
    flavor: VectorFlavor,
    p: usize,
    l: usize,
    gl: &GaussLegendre,
) -> Result<Complex64> {
    let d = flavor.commuting_dims(p);
    let area = sphere_area(d);
    let panels = radial_panels();
    let mut poles: Option<crate::Error> = None;
    let value = gl.integrate_panels(&panels, |r| {
        let mut body = vec![0.0; d];
        body[0] = r;
        match berezin_oracle_vector(profile, flavor, p, l, body) {
            Ok(v) => v * r.powi(d as i32 - 1),
            Err(e) => {
                poles = Some(e);
                Complex64::default()
            }
        }
    });
    if let Some(e) = poles {
        return Err(e);
    }
    Ok(value * area)
}

/// Reduced-dimension integral `∫_{R^{d'}} q(|x|^2) d[x]` by the same radial
/// trick.
fn reduced_gaussian_integral(
    profile: &dyn InvariantProfile,
    d: usize,
    gl: &GaussLegendre,
) -> Result<Complex64> {
    let area = sphere_area(d);
    let panels = radial_panels();
    let mut err = None;
    let value = gl.integrate_panels(&panels, |r| {
        match profile.eval_value(&[Complex64::new(r * r, 0.0)]) {
            Ok(v) => v * r.powi(d as i32 - 1),
            Err(e) => {
                err = Some(e);
                Complex64::default()
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(value * area)
}

/// Printed right-hand side of the vector theorems.
fn printed_rhs(
    profile: &dyn InvariantProfile,
    flavor: VectorFlavor,
    p: usize,
    l: usize,
    gl: &GaussLegendre,
) -> Result<(Complex64, &'static str)> {
    let i = Complex64::new(0.0, 1.0);
    match flavor {
        VectorFlavor::Real => {
            if p < 2 * l {
                if p % 2 == 0 {
                    // i^p ((1/(pi r)) d/dr)^m f at r = 0, m = L - p/2
                    let m = l - p / 2;
                    let q = profile_derivative(profile, Complex64::default(), m)?;
                    Ok((
                        i.powu(p as u32) * PI.powi(-(m as i32)) * 2f64.powi(m as i32) * q,
                        "boundary-derivative",
                    ))
                } else {
                    let m = l - (p - 1) / 2;
                    let mut err = None;
                    let line = gl.integrate_panels(&radial_panels(), |x| {
                        match profile_derivative(profile, Complex64::new(x * x, 0.0), m) {
                            Ok(v) => v,
                            Err(e) => {
                                err = Some(e);
                                Complex64::default()
                            }
                        }
                    });
                    if let Some(e) = err {
                        return Err(e);
                    }
                    // even integrand: double the half-line
                    let v = i.powu(p as u32 - 1) / PI
                        * PI.powi(-(m as i32))
                        * 2f64.powi(m as i32)
                        * 2.0
                        * line;
                    Ok((v, "line-integral"))
                }
            } else if p == 2 * l {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                Ok((
                    profile.eval_value(&[Complex64::default()])? * sign,
                    "value-at-zero",
                ))
            } else {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                let red = reduced_gaussian_integral(profile, p - 2 * l, gl)?;
                Ok((red * sign, "reduced-integral"))
            }
        }
        VectorFlavor::Complex => {
            let half = Complex64::new(-0.5, 0.0).powu(l as u32);
            if p < l {
                let m = l - p;
                let q = profile_derivative(profile, Complex64::default(), m)?;
                let sgn = if p % 2 == 0 { 1.0 } else { -1.0 };
                Ok((
                    half * sgn * PI.powi(-(m as i32)) * 2f64.powi(m as i32) * q,
                    "boundary-derivative",
                ))
            } else if p == l {
                Ok((
                    half * profile.eval_value(&[Complex64::default()])?,
                    "value-at-zero",
                ))
            } else {
                let red = reduced_gaussian_integral(profile, 2 * (p - l), gl)?;
                Ok((half * red, "reduced-integral"))
            }
        }
        VectorFlavor::Quaternion => {
            let pref = 4f64.powi(-(l as i32));
            if p < l {
                let m = 2 * (l - p);
                let q = profile_derivative(profile, Complex64::default(), m)?;
                Ok((
                    q * pref * PI.powi(-(m as i32)) * 2f64.powi(m as i32),
                    "boundary-derivative",
                ))
            } else if p == l {
                Ok((
                    profile.eval_value(&[Complex64::default()])? * pref,
                    "value-at-zero",
                ))
            } else {
                let red = reduced_gaussian_integral(profile, 4 * (p - l), gl)?;
                Ok((red * pref, "reduced-integral"))
            }
        }
    }
}

/// Verify one vector-theorem case at absolute tolerance.
pub fn verify_vector_theorem(
    flavor: VectorFlavor,
    p: usize,
    l: usize,
    profile: &dyn InvariantProfile,
    profile_label: &str,
    abs_tol: f64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let gl = GaussLegendre::new(48);
    let lhs = lhs_radial(profile, flavor, p, l, &gl)?;
    let (rhs, case_kind) = printed_rhs(profile, flavor, p, l, &gl)?;
    let flavor_name = match flavor {
        VectorFlavor::Real => "real",
        VectorFlavor::Complex => "complex",
        VectorFlavor::Quaternion => "quaternion",
    };
    let mut report = VerificationReport::new(
        "vector-theorem",
        vec![
            ("flavor".into(), flavor_name.into()),
            ("p".into(), p.to_string()),
            ("L".into(), l.to_string()),
            ("case".into(), case_kind.into()),
            ("profile".into(), profile_label.into()),
        ],
        lhs,
        rhs,
        abs_tol,
        false,
    );
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Default vector-theorem grid.
pub fn run(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    let abs_tol = 1e-6;
    let profiles = super::vector_profiles();
    let mut cases: Vec<(VectorFlavor, usize, usize)> = vec![
        (VectorFlavor::Real, 2, 1),
        (VectorFlavor::Real, 2, 2),
        (VectorFlavor::Real, 1, 2),
        (VectorFlavor::Real, 3, 1),
        (VectorFlavor::Real, 4, 1),
        (VectorFlavor::Complex, 1, 1),
        (VectorFlavor::Complex, 2, 2),
        (VectorFlavor::Complex, 2, 1),
        (VectorFlavor::Quaternion, 1, 1),
    ];
    if cfg.max_l < 2 {
        cases.retain(|(_, _, l)| *l <= cfg.max_l);
    }
    let jobs: Vec<((VectorFlavor, usize, usize), usize)> = cases
        .into_iter()
        .flat_map(|c| (0..profiles.len()).map(move |i| (c, i)))
        .collect();
    crate::parallel::map_collect(&jobs, |((flavor, p, l), pi)| {
        let profile = &profiles[*pi];
        verify_vector_theorem(*flavor, *p, *l, profile, profile.label(), abs_tol)
            .unwrap_or_else(|e| {
                let mut r = VerificationReport::new(
                    "vector-theorem",
                    vec![("error".into(), e.to_string())],
                    Complex64::default(),
                    Complex64::new(f64::NAN, 0.0),
                    abs_tol,
                    false,
                );
                r.pass = false;
                r
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorems::vector_profiles;

    #[test]
    fn real_p2_l1_gaussian_value_at_zero() {
        // p = 2L: the integral collapses to (-1)^L f(0) = -1 for exp(-u)
        let profiles = vector_profiles();
        let r = verify_vector_theorem(
            VectorFlavor::Real,
            2,
            1,
            &profiles[0],
            profiles[0].label(),
            1e-6,
        )
        .unwrap();
        assert!(r.pass, "dev {:e}", r.abs_deviation());
        assert!((r.rhs.re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_p1_l1_gaussian() {
        // p = L: (-1/2)^L f(0) = -1/2
        let profiles = vector_profiles();
        let r = verify_vector_theorem(
            VectorFlavor::Complex,
            1,
            1,
            &profiles[0],
            profiles[0].label(),
            1e-6,
        )
        .unwrap();
        assert!(r.pass, "dev {:e}", r.abs_deviation());
        assert!((r.rhs.re + 0.5).abs() < 1e-12);
    }

    #[test]
    fn quaternion_p1_l1_gaussian() {
        // p = L: 4^{-L} f(0) = 1/4
        let profiles = vector_profiles();
        let r = verify_vector_theorem(
            VectorFlavor::Quaternion,
            1,
            1,
            &profiles[0],
            profiles[0].label(),
            1e-6,
        )
        .unwrap();
        assert!(r.pass, "dev {:e}", r.abs_deviation());
        assert!((r.rhs.re - 0.25).abs() < 1e-12);
    }
}
