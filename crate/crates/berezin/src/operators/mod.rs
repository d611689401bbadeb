//! Symbolic radial differential operators over eigenvalue variables: finite
//! sums of (rational coefficient) × (mixed partial derivative), with exact
//! coefficient arithmetic so operator identities can be asserted term by
//! term, not merely pointwise.

mod builders;
mod iad;

pub use builders::*;
pub use iad::{binomial_operator_sum, iad_power, IadAlgebra};

use crate::error::Error;
use crate::jets::Jet;
use crate::symbolic::{Poly, RationalFunction};
use crate::Result;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Default floor under which a coefficient denominator counts as degenerate.
pub const DEGENERACY_FLOOR: f64 = 1e-6;

/// A linear differential operator `Σ c_α(s) ∂^α` over a fixed variable
/// roster, with exact rational-function coefficients.
#[derive(Clone, Debug)]
pub struct RadialOperator {
    names: Arc<Vec<String>>,
    terms: BTreeMap<Vec<u8>, RationalFunction>,
}

impl RadialOperator {
    pub fn zero(names: Arc<Vec<String>>) -> Self {
        Self {
            names,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(names: Arc<Vec<String>>) -> Self {
        let n = names.len();
        let mut op = Self::zero(names);
        op.insert(vec![0; n], RationalFunction::one(n));
        op
    }

    pub fn from_term(names: Arc<Vec<String>>, alpha: Vec<u8>, coeff: RationalFunction) -> Self {
        let mut op = Self::zero(names);
        op.insert(alpha, coeff);
        op
    }

    pub fn names(&self) -> &Arc<Vec<String>> {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, alpha: Vec<u8>, coeff: RationalFunction) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&alpha) {
            Some(old) => {
                let s = old.add(&coeff);
                if !s.is_zero() {
                    self.terms.insert(alpha, s);
                }
            }
            None => {
                self.terms.insert(alpha, coeff);
            }
        }
    }

    fn check_roster(&self, other: &Self) -> Result<()> {
        if self.names != other.names && *self.names != *other.names {
            return Err(Error::MismatchedAlgebra(format!(
                "operator rosters differ: {:?} vs {:?}",
                self.names, other.names
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_roster(other).expect("roster mismatch");
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.insert(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            names: self.names.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale_rf(&self, f: &RationalFunction) -> Self {
        let mut out = Self::zero(self.names.clone());
        for (a, c) in &self.terms {
            out.insert(a.clone(), c.mul(f));
        }
        out
    }

    /// Operator product with the generalised Leibniz rule applied to the
    /// right operand's coefficients.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_roster(other)?;
        let n = self.nvars();
        let mut out = Self::zero(self.names.clone());
        for (alpha, c1) in &self.terms {
            for (beta, c2) in &other.terms {
                for gamma in sub_indices(alpha) {
                    // ∂^{alpha-gamma} c2
                    let mut dc = c2.clone();
                    let mut binom = 1i64;
                    for v in 0..n {
                        let k = alpha[v] - gamma[v];
                        for _ in 0..k {
                            dc = dc.derivative(v);
                        }
                        binom *= binomial(alpha[v] as i64, gamma[v] as i64);
                    }
                    if dc.is_zero() {
                        continue;
                    }
                    let coeff = c1
                        .mul(&dc)
                        .scale(&crate::ring::GaussianRational::from_int(binom));
                    let idx: Vec<u8> = gamma.iter().zip(beta).map(|(g, b)| g + b).collect();
                    out.insert(idx, coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn compose_pow(&self, n: usize) -> Result<Self> {
        let mut out = Self::identity(self.names.clone());
        for _ in 0..n {
            out = out.compose(self)?;
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.compose(other)?.sub(&other.compose(self)?))
    }

    /// Highest total derivative order present.
    pub fn max_order(&self) -> usize {
        self.terms
            .keys()
            .map(|a| a.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Term-by-term symbolic equality (canonical multi-indices, coefficient
    /// equality by cross-multiplication).
    pub fn eq_symbolic(&self, other: &Self) -> bool {
        if self.names.len() != other.names.len() {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        let n = self.nvars();
        let zero = RationalFunction::zero(n);
        for k in keys {
            let a = self.terms.get(k).unwrap_or(&zero);
            let b = other.terms.get(k).unwrap_or(&zero);
            if !a.equivalent(b) {
                return false;
            }
        }
        true
    }

    /// Apply to a jet expanded at `point` (order must cover the operator).
    pub fn apply_jet(&self, f: &Jet, point: &[f64], psi: f64, floor: f64) -> Result<Complex64> {
        if f.vars() != self.nvars() {
            return Err(Error::Usage(format!(
                "jet has {} variables, operator {}",
                f.vars(),
                self.nvars()
            )));
        }
        if f.order() < self.max_order() {
            return Err(Error::Usage(format!(
                "jet order {} below operator order {}",
                f.order(),
                self.max_order()
            )));
        }
        let omega = Complex64::from_polar(1.0, psi);
        let cpoint: Vec<Complex64> = point.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut sum = Complex64::default();
        for (alpha, coeff) in &self.terms {
            let c = coeff.eval(&cpoint, omega, floor, &self.names)?;
            sum += c * f.partial(alpha);
        }
        Ok(sum)
    }

    /// Apply to a function given as a jet factory at the point.
    pub fn apply<F>(&self, f: F, point: &[f64], psi: f64, floor: f64) -> Result<Complex64>
    where
        F: Fn(&[f64], usize) -> Result<Jet>,
    {
        let jet = f(point, self.max_order())?;
        self.apply_jet(&jet, point, psi, floor)
    }

    /// Relabel variables: `map[i] = (target, sign_flip, omega_shift)` sends
    /// variable `i` to `± ω^k · x_target` and the corresponding derivative to
    /// `(± ω^k)^{-1} ∂_target`. `overall` scales the whole operator by an
    /// extra `± ω^k` factor per use below.
    pub fn substitute_vars(
        &self,
        new_names: Arc<Vec<String>>,
        map: &[(usize, bool, i32)],
    ) -> Self {
        let n = new_names.len();
        let mut out = RadialOperator::zero(new_names);
        for (alpha, coeff) in &self.terms {
            // derivative transforms inversely
            let mut idx = vec![0u8; n];
            let mut extra_omega: i32 = 0;
            let mut extra_sign = false;
            for (i, &a) in alpha.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let (tgt, flip, om) = map[i];
                idx[tgt] += a;
                extra_omega -= om * a as i32;
                if flip && a % 2 == 1 {
                    extra_sign = !extra_sign;
                }
            }
            let num = substitute_poly(&coeff.num, n, map);
            let den = substitute_poly(&coeff.den, n, map);
            let mut rf = RationalFunction::new(num, den);
            let mut factor = Poly::omega(n, extra_omega);
            if extra_sign {
                factor = factor.neg();
            }
            rf = rf.mul(&RationalFunction::from_poly(factor));
            out.insert(idx, rf);
        }
        out
    }

    /// Human-readable term list.
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (alpha, coeff) in &self.terms {
            out.push_str("  [");
            out.push_str(&coeff.format_with(&self.names));
            out.push_str("] ");
            let mut any = false;
            for (v, &a) in alpha.iter().enumerate() {
                if a > 0 {
                    any = true;
                    if a == 1 {
                        out.push_str(&format!("∂_{} ", self.names[v]));
                    } else {
                        out.push_str(&format!("∂_{}^{} ", self.names[v], a));
                    }
                }
            }
            if !any {
                out.push_str("1 ");
            }
            out.push('\n');
        }
        out
    }

    /// Machine-readable dump with stable ordering.
    pub fn json_dump(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(alpha, coeff)| {
                serde_json::json!({
                    "partial": alpha,
                    "num": coeff.num.format_with(&self.names),
                    "den": coeff.den.format_with(&self.names),
                })
            })
            .collect();
        serde_json::json!({
            "vars": self.names.as_ref(),
            "terms": terms,
        })
    }
}

fn substitute_poly(p: &Poly, n: usize, map: &[(usize, bool, i32)]) -> Poly {
    // rebuild monomial by monomial
    let mut out = Poly::zero(n);
    let one = Poly::one(n);
    let _ = &one;
    for (m, c) in poly_terms(p) {
        let mut mono = Poly::constant(n, c);
        let mut omega_shift = m.omega;
        if m.pi != 0 {
            mono = mono.mul(&Poly::pi_pow(n, m.pi));
        }
        let mut sign = false;
        for (i, &e) in m.vars.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (tgt, flip, om) = map[i];
            for _ in 0..e {
                mono = mono.mul(&Poly::var(n, tgt));
            }
            omega_shift += om * e as i32;
            if flip && e % 2 == 1 {
                sign = !sign;
            }
        }
        if omega_shift != 0 {
            mono = mono.mul(&Poly::omega(n, omega_shift));
        }
        if sign {
            mono = mono.neg();
        }
        out = out.add(&mono);
    }
    out
}

// Poly does not expose its term map; go through a tiny accessor here.
fn poly_terms(p: &Poly) -> Vec<(crate::symbolic::Monomial, crate::ring::GaussianRational)> {
    p.terms_vec()
}

/// All componentwise sub-indices `gamma <= alpha`.
fn sub_indices(alpha: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..=a {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r = 1i64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
