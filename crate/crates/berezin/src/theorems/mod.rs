//! The verification harness: brute-force Berezin oracles, quadrature over
//! the commuting variables, and executable checks of the dimensional-
//! reduction identities for supervectors, supermatrices, and the
//! one-variable no-go family.

pub mod appendix_a;
pub mod matrices;
pub mod quadrature;
pub mod theorem1;
pub mod vectors;

pub use quadrature::{
    integrate_commuting, tanh_sinh_real_line, GaussHermite, GaussLegendre, Quadrature,
    QuadratureConfig, Scheme,
};

use crate::error::Error;
use crate::jets::{compose_primitive, InvariantProfile, Jet, SmoothPrimitive};
use crate::operators::VectorFlavor;
use crate::superspace::{
    invariant_superfunction_matrix, invariant_superfunction_vector, MatrixSymmetry, SuperMatrix,
    SuperVector, WickRotation,
};
use crate::Result;
use num_complex::Complex64;

/// Polynomial × Gaussian test profile in `arity` invariants:
/// `(Σ c Π u_j^{e_j}) · exp(-Σ rates_j u_j)`. Smooth in the invariants, so
/// it satisfies the orthosymplectic admissibility condition automatically.
#[derive(Clone, Debug)]
pub struct GaussianPoly {
    arity: usize,
    rates: Vec<Complex64>,
    poly: Vec<(Vec<u8>, Complex64)>,
    label: String,
}

impl GaussianPoly {
    pub fn new(rates: Vec<f64>, poly: Vec<(Vec<u8>, f64)>, label: impl Into<String>) -> Self {
        let arity = rates.len();
        Self {
            arity,
            rates: rates.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
            poly: poly
                .into_iter()
                .map(|(e, c)| (e, Complex64::new(c, 0.0)))
                .collect(),
            label: label.into(),
        }
    }

    /// Rescale every invariant by `lambda` (tests the scaling covariance of
    /// the identities).
    pub fn rescaled(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        out.rates = self.rates.iter().map(|r| r * lambda).collect();
        out.poly = self
            .poly
            .iter()
            .map(|(e, c)| {
                let deg: u32 = e.iter().map(|&x| x as u32).sum();
                (e.clone(), c * lambda.powi(deg as i32))
            })
            .collect();
        out.label = format!("{}*scaled({lambda})", self.label);
        out
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl InvariantProfile for GaussianPoly {
    fn arity(&self) -> usize {
        self.arity
    }

    fn eval_jet(&self, args: &[Jet]) -> Result<Jet> {
        if args.len() != self.arity {
            return Err(Error::Usage(format!(
                "profile expects {} arguments, got {}",
                self.arity,
                args.len()
            )));
        }
        let vars = args[0].vars();
        let order = args[0].order();
        let mut expo = Jet::constant(vars, order, Complex64::default());
        for (r, u) in self.rates.iter().zip(args) {
            expo = expo.add(&u.scale(-r))?;
        }
        let gauss = compose_primitive(SmoothPrimitive::Exp, &expo)?;
        let mut p = Jet::constant(vars, order, Complex64::default());
        for (exps, c) in &self.poly {
            let mut term = Jet::constant(vars, order, *c);
            for (j, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&args[j])?;
                }
            }
            p = p.add(&term)?;
        }
        gauss.mul(&p)
    }
}

/// Three default univariate profiles for the supervector checks.
pub fn vector_profiles() -> Vec<GaussianPoly> {
    vec![
        GaussianPoly::new(vec![1.0], vec![(vec![0], 1.0)], "exp(-u)"),
        GaussianPoly::new(
            vec![0.7],
            vec![(vec![0], 1.0), (vec![1], 1.0)],
            "(1+u)exp(-0.7u)",
        ),
        GaussianPoly::new(
            vec![1.3],
            vec![(vec![0], 1.0), (vec![1], -0.5), (vec![2], 0.25)],
            "(1-u/2+u^2/4)exp(-1.3u)",
        ),
    ]
}

/// Three default matrix profiles in `m` power-sum invariants; the Gaussian
/// factor sits on the quadratic invariant so the eigenvalue integrals
/// converge for every Wick angle in the admissible band.
pub fn matrix_profiles(m: usize) -> Vec<GaussianPoly> {
    assert!(m >= 2);
    let e = |j: usize, v: u8| {
        let mut idx = vec![0u8; m];
        idx[j] = v;
        idx
    };
    let mut rates0 = vec![0.0; m];
    rates0[1] = 1.0;
    let mut rates1 = vec![0.0; m];
    rates1[1] = 0.8;
    let mut rates2 = vec![0.0; m];
    rates2[1] = 1.2;
    vec![
        GaussianPoly::new(rates0, vec![(vec![0; m], 1.0)], "exp(-u2)"),
        GaussianPoly::new(
            rates1,
            vec![(vec![0; m], 1.0), (e(0, 1), 0.5), (e(0, 2), 0.25)],
            "(1+u1/2+u1^2/4)exp(-0.8u2)",
        ),
        GaussianPoly::new(
            rates2,
            vec![(vec![0; m], 1.0), (e(1, 1), -0.3)],
            "(1-0.3u2)exp(-1.2u2)",
        ),
    ]
}

/// Berezin oracle on a supermatrix at a radial body point: lift the profile
/// through the exact nilpotent expansion and read the normalised top
/// Grassmann coefficient. Entirely derivative-free on the operator side.
pub fn berezin_oracle_matrix(
    profile: &dyn InvariantProfile,
    symmetry: MatrixSymmetry,
    s1: &[f64],
    s2: &[f64],
    psi: f64,
) -> Result<Complex64> {
    let m = SuperMatrix::from_radial(symmetry, s1, s2, WickRotation::new(psi)?)?;
    let lifted = invariant_superfunction_matrix(profile, &m)?;
    Ok(lifted.berezin_integral_all())
}

/// Berezin oracle on a supervector with the given body coordinates.
pub fn berezin_oracle_vector(
    profile: &dyn InvariantProfile,
    flavor: VectorFlavor,
    num_even: usize,
    num_odd: usize,
    body: Vec<f64>,
) -> Result<Complex64> {
    let v = SuperVector::new(flavor, num_even, num_odd, body)?;
    let lifted = invariant_superfunction_vector(profile, &v)?;
    Ok(lifted.berezin_integral_all())
}

/// Power-sum invariants of the radial point as jets over the eigenvalue
/// coordinates: `u_j = Σ s_{n1}^j - d_f Σ (ω s_{m2})^j` with the fermion
/// eigenvalue multiplicity `d_f` of the family.
pub fn invariant_jets(
    symmetry: MatrixSymmetry,
    point: &[f64],
    psi: f64,
    order: usize,
) -> Result<Vec<Jet>> {
    let (k1, k2) = symmetry.eigen_counts();
    if point.len() != k1 + k2 {
        return Err(Error::Usage("point length != k1 + k2".into()));
    }
    let (mult_b, mult_f) = match symmetry {
        MatrixSymmetry::U { .. } => (1.0, 1.0),
        MatrixSymmetry::UOSpPlus { .. } => (1.0, 2.0),
        MatrixSymmetry::UOSpMinus { .. } => (2.0, 1.0),
    };
    let vars = k1 + k2;
    let omega = Complex64::from_polar(1.0, psi);
    let coords: Vec<Jet> = (0..vars)
        .map(|i| Jet::variable(vars, order, i, Complex64::new(point[i], 0.0)))
        .collect();
    let mut out = Vec::with_capacity(vars);
    for j in 1..=(k1 + k2) {
        let mut u = Jet::constant(vars, order, Complex64::default());
        for coord in coords.iter().take(k1) {
            u = u.add(&coord.powi(j)?.scale(Complex64::new(mult_b, 0.0)))?;
        }
        for m in 0..k2 {
            let rot = coords[k1 + m].scale(omega);
            u = u.sub(&rot.powi(j)?.scale(Complex64::new(mult_f, 0.0)))?;
        }
        out.push(u);
    }
    Ok(out)
}

/// Jet of `f(s) = profile(invariants(s))` at an eigenvalue point; this is
/// what the reduction operators differentiate.
pub fn eigen_profile_jet(
    symmetry: MatrixSymmetry,
    profile: &dyn InvariantProfile,
    point: &[f64],
    psi: f64,
    order: usize,
) -> Result<Jet> {
    let invs = invariant_jets(symmetry, point, psi, order)?;
    profile.eval_jet(&invs)
}

/// Jet of `f(r) = profile(r^2)` in the single radial variable.
pub fn radial_profile_jet(profile: &dyn InvariantProfile, r: f64, order: usize) -> Result<Jet> {
    let rj = Jet::variable(1, order, 0, Complex64::new(r, 0.0));
    let u = rj.mul(&rj)?;
    profile.eval_jet(&[u])
}

/// Shared configuration of the verification suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub psi_sweep: Vec<f64>,
    pub rel_tol: f64,
    pub quad_points: usize,
    pub seed: u64,
    pub max_l: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            psi_sweep: vec![
                std::f64::consts::FRAC_PI_3,
                std::f64::consts::FRAC_PI_2,
                2.0 * std::f64::consts::FRAC_PI_3,
            ],
            rel_tol: 1e-9,
            quad_points: 80,
            seed: 20090115,
            max_l: 3,
        }
    }
}
