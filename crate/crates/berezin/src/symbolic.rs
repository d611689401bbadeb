//! Exact multivariate polynomials and rational functions used as operator
//! coefficients.
//!
//! Coefficients are Gaussian rationals. Two opaque symbols are carried along
//! with Laurent exponents: `ω` stands for the Wick-rotation phase (its
//! conjugate is `ω^{-1}`), and `π` keeps measure prefactors exact. Everything
//! is exact until [`RationalFunction::eval`].

use crate::error::Error;
use crate::ring::GaussianRational;
use crate::Result;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Exponent data of one monomial: `ω^omega · π^pi · Π x_i^{vars[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub omega: i32,
    pub pi: i32,
    pub vars: Vec<u8>,
}

impl Monomial {
    fn unit(nvars: usize) -> Self {
        Self {
            omega: 0,
            pi: 0,
            vars: vec![0; nvars],
        }
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            omega: self.omega + other.omega,
            pi: self.pi + other.pi,
            vars: self
                .vars
                .iter()
                .zip(&other.vars)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Sparse multivariate polynomial over Gaussian rationals with the two
/// Laurent symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::from_int(1))
    }

    pub fn int(nvars: usize, v: i64) -> Self {
        Self::constant(nvars, GaussianRational::from_int(v))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::unit(nvars);
        m.vars[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(m, GaussianRational::from_int(1));
        p
    }

    /// `ω^k`.
    pub fn omega(nvars: usize, k: i32) -> Self {
        let mut m = Monomial::unit(nvars);
        m.omega = k;
        let mut p = Self::zero(nvars);
        p.terms.insert(m, GaussianRational::from_int(1));
        p
    }

    /// `π^k`.
    pub fn pi_pow(nvars: usize, k: i32) -> Self {
        let mut m = Monomial::unit(nvars);
        m.pi = k;
        let mut p = Self::zero(nvars);
        p.terms.insert(m, GaussianRational::from_int(1));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.vars[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.vars[var] = e - 1;
            out.insert(m2, c.clone() * GaussianRational::from_int(e as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Complex64], omega: Complex64) -> Complex64 {
        let mut sum = Complex64::default();
        for (m, c) in &self.terms {
            let mut v = c.to_complex();
            v *= omega.powi(m.omega);
            v *= Complex64::new(std::f64::consts::PI, 0.0).powi(m.pi);
            for (i, &e) in m.vars.iter().enumerate() {
                if e > 0 {
                    v *= point[i].powu(e as u32);
                }
            }
            sum += v;
        }
        sum
    }

    /// Leading (largest) monomial coefficient under the derived ordering.
    fn leading_coeff(&self) -> Option<GaussianRational> {
        self.terms.iter().next_back().map(|(_, c)| c.clone())
    }

    /// Term list in canonical order.
    pub fn terms_vec(&self) -> Vec<(Monomial, GaussianRational)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }

    /// Evaluate into a jet over the roster's coordinate jets.
    pub fn eval_jet(&self, coords: &[crate::jets::Jet], omega: Complex64) -> crate::jets::Jet {
        use crate::jets::Jet;
        let vars = coords[0].vars();
        let order = coords[0].order();
        let mut sum = Jet::constant(vars, order, Complex64::default());
        for (m, c) in &self.terms {
            let mut v = c.to_complex();
            v *= omega.powi(m.omega);
            v *= Complex64::new(std::f64::consts::PI, 0.0).powi(m.pi);
            let mut term = Jet::constant(vars, order, v);
            for (i, &e) in m.vars.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&coords[i]).expect("same jet space");
                }
            }
            sum = sum.add(&term).expect("same jet space");
        }
        sum
    }

    /// Render with caller-supplied variable names.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let _ = write!(out, "{}", c);
            if m.omega != 0 {
                let _ = write!(out, "·ω^{}", m.omega);
            }
            if m.pi != 0 {
                let _ = write!(out, "·π^{}", m.pi);
            }
            for (v, &e) in m.vars.iter().enumerate() {
                if e == 1 {
                    let _ = write!(out, "·{}", names[v]);
                } else if e > 1 {
                    let _ = write!(out, "·{}^{}", names[v], e);
                }
            }
        }
        out
    }
}

/// Quotient of two polynomials, normalised so the denominator's leading
/// coefficient is one. Equality is decided by cross-multiplication, so no
/// multivariate gcd is needed.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut rf = Self { num, den };
        rf.normalise();
        rf
    }

    pub fn zero(nvars: usize) -> Self {
        Self {
            num: Poly::zero(nvars),
            den: Poly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self {
            num: Poly::one(nvars),
            den: Poly::one(nvars),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        Self {
            num: p,
            den: Poly::one(n),
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalise(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.num.nvars());
            return;
        }
        if let Some(lc) = self.den.leading_coeff() {
            if let Some(inv) = lc.inv() {
                self.num = self.num.scale(&inv);
                self.den = self.den.scale(&inv);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        // cheap special case: identical denominators
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        Self::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    pub fn derivative(&self, var: usize) -> Self {
        let n = self.num.derivative(var).mul(&self.den);
        let d = self.num.mul(&self.den.derivative(var));
        Self::new(n.sub(&d), self.den.mul(&self.den))
    }

    /// Structural equality as rational functions (cross-multiplied).
    pub fn equivalent(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Evaluate at a numeric point with `ω = e^{iψ}`; errors when the
    /// denominator is within `floor` of zero.
    pub fn eval(
        &self,
        point: &[Complex64],
        omega: Complex64,
        floor: f64,
        names: &[String],
    ) -> Result<Complex64> {
        let d = self.den.eval(point, omega);
        if d.norm() < floor {
            return Err(Error::DegeneratePoint {
                denominator: self.den.format_with(names),
                value: d.norm(),
                point: format!("{point:?}"),
            });
        }
        Ok(self.num.eval(point, omega) / d)
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.den == Poly::one(self.den.nvars()) {
            self.num.format_with(names)
        } else {
            format!(
                "[{}] / [{}]",
                self.num.format_with(names),
                self.den.format_with(names)
            )
        }
    }

    /// Evaluate into a jet (numerator jet times the reciprocal of the
    /// denominator jet); errors when the denominator value is singular.
    pub fn eval_jet(
        &self,
        coords: &[crate::jets::Jet],
        omega: Complex64,
    ) -> Result<crate::jets::Jet> {
        use crate::jets::{compose_primitive, SmoothPrimitive};
        let num = self.num.eval_jet(coords, omega);
        let den = self.den.eval_jet(coords, omega);
        let inv = compose_primitive(SmoothPrimitive::Pow(-1.0), &den)?;
        num.mul(&inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn poly_arithmetic_and_eval() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.mul(&x).add(&y.scale(&GaussianRational::from_int(3)));
        let v = p.eval(
            &[Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0)],
            Complex64::new(0.0, 1.0),
        );
        assert_eq!(v, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn omega_conjugate_via_negative_power() {
        let w = Poly::omega(1, 1);
        let wbar = Poly::omega(1, -1);
        let prod = w.mul(&wbar);
        assert_eq!(prod, Poly::one(1));
    }

    #[test]
    fn rational_equivalence_cross_multiplied() {
        // (x^2 - 1)/(x - 1) == (x + 1)/1
        let x = Poly::var(1, 0);
        let a = RationalFunction::new(
            x.mul(&x).sub(&Poly::one(1)),
            x.sub(&Poly::one(1)),
        );
        let b = RationalFunction::from_poly(x.add(&Poly::one(1)));
        assert!(a.equivalent(&b));
        assert!(!a.equivalent(&RationalFunction::from_poly(x.clone())));
    }

    #[test]
    fn quotient_rule() {
        // d/dx (1/x) = -1/x^2
        let x = Poly::var(1, 0);
        let inv = RationalFunction::new(Poly::one(1), x.clone());
        let d = inv.derivative(0);
        let expect = RationalFunction::new(Poly::int(1, -1), x.mul(&x));
        assert!(d.equivalent(&expect));
    }

    #[test]
    fn degenerate_eval_reports_denominator() {
        let x = Poly::var(1, 0);
        let inv = RationalFunction::new(Poly::one(1), x);
        let err = inv
            .eval(&[Complex64::default()], Complex64::new(1.0, 0.0), 1e-6, &names(1))
            .unwrap_err();
        match err {
            Error::DegeneratePoint { .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }
}
