//! Truncated multivariate Taylor (jet) arithmetic.
//!
//! Jets carry the coefficients `∂^α f / α!` of a smooth function at a base
//! point up to a fixed total order. They feed exact mixed partials to the
//! radial differential operators and drive the nilpotent expansion of smooth
//! profiles into Grassmann directions. Tables are dense over all multi-index
//! ranks `|α| <= K`; problem sizes stay tiny (≤ 6 variables, K ≤ 12).

use crate::error::Error;
use crate::grassmann::Multivector;
use crate::ring::ScalarRing;
use crate::Result;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Shared index tables for jets of a given (variables, order) shape.
#[derive(Debug)]
pub struct JetSpace {
    vars: usize,
    order: usize,
    indices: Vec<Vec<u8>>,
    rank: HashMap<Vec<u8>, usize>,
}

impl JetSpace {
    fn build(vars: usize, order: usize) -> Self {
        let mut indices = Vec::new();
        let mut cur = vec![0u8; vars];
        enumerate(&mut indices, &mut cur, 0, order as u8);
        indices.sort_by_key(|a| (a.iter().map(|&x| x as u32).sum::<u32>(), a.clone()));
        let rank = indices
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        Self {
            vars,
            order,
            indices,
            rank,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn index(&self, rank: usize) -> &[u8] {
        &self.indices[rank]
    }

    pub fn rank_of(&self, alpha: &[u8]) -> Option<usize> {
        self.rank.get(alpha).copied()
    }
}

fn enumerate(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, var: usize, budget: u8) {
    if var == cur.len() {
        out.push(cur.clone());
        return;
    }
    for v in 0..=budget {
        cur[var] = v;
        enumerate(out, cur, var + 1, budget - v);
    }
    cur[var] = 0;
}

static SPACES: Lazy<Mutex<HashMap<(usize, usize), Arc<JetSpace>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn jet_space(vars: usize, order: usize) -> Arc<JetSpace> {
    let mut map = SPACES.lock().unwrap();
    map.entry((vars, order))
        .or_insert_with(|| Arc::new(JetSpace::build(vars, order)))
        .clone()
}

/// Truncated Taylor expansion of a smooth function at a base point.
#[derive(Clone, Debug)]
pub struct Jet {
    space: Arc<JetSpace>,
    coeffs: Vec<Complex64>,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.space.vars == other.space.vars
            && self.space.order == other.space.order
            && self.coeffs == other.coeffs
    }
}

impl Jet {
    pub fn constant(vars: usize, order: usize, value: Complex64) -> Self {
        let space = jet_space(vars, order);
        let mut coeffs = vec![Complex64::default(); space.len()];
        coeffs[0] = value;
        Self { space, coeffs }
    }

    /// Jet of the `var`-th coordinate function at `value`.
    pub fn variable(vars: usize, order: usize, var: usize, value: Complex64) -> Self {
        assert!(var < vars);
        let mut jet = Self::constant(vars, order, value);
        if order >= 1 {
            let mut alpha = vec![0u8; vars];
            alpha[var] = 1;
            let r = jet.space.rank_of(&alpha).unwrap();
            jet.coeffs[r] = Complex64::new(1.0, 0.0);
        }
        jet
    }

    pub fn vars(&self) -> usize {
        self.space.vars
    }

    pub fn order(&self) -> usize {
        self.space.order
    }

    /// Value at the base point (the α = 0 coefficient).
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Taylor coefficient `∂^α f / α!`.
    pub fn coeff(&self, alpha: &[u8]) -> Complex64 {
        match self.space.rank_of(alpha) {
            Some(r) => self.coeffs[r],
            None => Complex64::default(),
        }
    }

    /// Mixed partial derivative `∂^α f` (coefficient times `α!`).
    pub fn partial(&self, alpha: &[u8]) -> Complex64 {
        let mut fact = 1.0f64;
        for &a in alpha {
            for k in 1..=a as u64 {
                fact *= k as f64;
            }
        }
        self.coeff(alpha) * fact
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.space.vars != other.space.vars || self.space.order != other.space.order {
            return Err(Error::Usage(format!(
                "jet shape mismatch: ({}, {}) vs ({}, {})",
                self.space.vars, self.space.order, other.space.vars, other.space.order
            )));
        }
        if self.value() != other.value() {
            // Same shape, different base point is fine for *coefficients*
            // arithmetic only when the caller tracks bases; we do not enforce
            // base equality here because jets never store the base point of
            // the ambient coordinates, only the expansion data.
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            space: self.space.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            space: self.space.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    /// Truncated product; the Leibniz rule holds exactly at every retained
    /// order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let space = &self.space;
        let order = space.order as u32;
        let mut coeffs = vec![Complex64::default(); space.len()];
        for (ra, alpha) in space.indices.iter().enumerate() {
            let ca = self.coeffs[ra];
            if ca == Complex64::default() {
                continue;
            }
            let da: u32 = alpha.iter().map(|&x| x as u32).sum();
            for (rb, beta) in space.indices.iter().enumerate() {
                let db: u32 = beta.iter().map(|&x| x as u32).sum();
                if da + db > order {
                    continue;
                }
                let cb = other.coeffs[rb];
                if cb == Complex64::default() {
                    continue;
                }
                let sum: Vec<u8> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
                let r = space.rank_of(&sum).unwrap();
                coeffs[r] += ca * cb;
            }
        }
        Ok(Self {
            space: space.clone(),
            coeffs,
        })
    }

    pub fn powi(&self, n: usize) -> Result<Self> {
        let mut out = Jet::constant(self.vars(), self.order(), Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}

/// Smooth scalar primitives with derivative recurrences, composable onto
/// jets through their univariate Taylor coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SmoothPrimitive {
    Exp,
    Ln,
    Sqrt,
    /// `u^a` for real exponent `a`.
    Pow(f64),
    Sin,
    Cos,
    /// Bessel function of the first kind, order zero, `J0(0) = 1`.
    BesselJ0,
}

impl SmoothPrimitive {
    /// Taylor coefficients `p^{(k)}(u0)/k!` for `k <= order`.
    pub fn univariate_coeffs(&self, u0: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let n = order + 1;
        let mut c = vec![Complex64::default(); n];
        match self {
            SmoothPrimitive::Exp => {
                let e = u0.exp();
                let mut fact = 1.0;
                for (k, ck) in c.iter_mut().enumerate() {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    *ck = e / fact;
                }
            }
            SmoothPrimitive::Ln => {
                if u0.norm() < 1e-13 {
                    return Err(Error::SingularInput("ln expanded at 0".into()));
                }
                c[0] = u0.ln();
                for k in 1..n {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    c[k] = sign / (k as f64 * u0.powu(k as u32));
                }
            }
            SmoothPrimitive::Sqrt => {
                return SmoothPrimitive::Pow(0.5).univariate_coeffs(u0, order);
            }
            SmoothPrimitive::Pow(a) => {
                if u0.norm() < 1e-13 && (a.fract() != 0.0 || *a < order as f64) {
                    return Err(Error::SingularInput(format!("pow({a}) expanded at 0")));
                }
                c[0] = u0.powf(*a);
                for k in 0..order {
                    c[k + 1] = c[k] * (a - k as f64) / ((k as f64 + 1.0) * u0);
                }
            }
            SmoothPrimitive::Sin => {
                let (s, co) = (u0.sin(), u0.cos());
                let cycle = [s, co, -s, -co];
                let mut fact = 1.0;
                for (k, ck) in c.iter_mut().enumerate() {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    *ck = cycle[k % 4] / fact;
                }
            }
            SmoothPrimitive::Cos => {
                let (s, co) = (u0.sin(), u0.cos());
                let cycle = [co, -s, -co, s];
                let mut fact = 1.0;
                for (k, ck) in c.iter_mut().enumerate() {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    *ck = cycle[k % 4] / fact;
                }
            }
            SmoothPrimitive::BesselJ0 => {
                if u0.norm() < 1e-12 {
                    // even power series around the origin
                    let mut term = Complex64::new(1.0, 0.0);
                    for m in 0..=(order / 2) {
                        if m > 0 {
                            term *= -1.0 / (4.0 * (m * m) as f64);
                        }
                        c[2 * m] = term;
                    }
                } else {
                    // away from 0: u J'' + J' + u J = 0 gives a three-term
                    // recurrence for the shifted Taylor coefficients
                    c[0] = bessel_j0(u0);
                    if order >= 1 {
                        c[1] = -bessel_j1(u0);
                    }
                    for m in 0..n.saturating_sub(2) {
                        let prev = if m == 0 { Complex64::default() } else { c[m - 1] };
                        let num = ((m as f64 + 1.0) * (m as f64 + 1.0)) * c[m + 1]
                            + u0 * c[m]
                            + prev;
                        c[m + 2] = -num / (u0 * ((m + 2) * (m + 1)) as f64);
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn eval(&self, u0: Complex64) -> Result<Complex64> {
        Ok(self.univariate_coeffs(u0, 0)?[0])
    }
}

/// `J0` by power series; accurate to ~1e-12 for |z| up to ~12.
pub fn bessel_j0(z: Complex64) -> Complex64 {
    let q = z * z * 0.25;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for m in 1..80 {
        term *= -q / ((m * m) as f64);
        sum += term;
        if term.norm() < 1e-17 * sum.norm().max(1.0) {
            break;
        }
    }
    sum
}

/// `J1` by power series.
pub fn bessel_j1(z: Complex64) -> Complex64 {
    let q = z * z * 0.25;
    let mut term = z * 0.5;
    let mut sum = term;
    for m in 1..80 {
        term *= -q / ((m * (m + 1)) as f64);
        sum += term;
        if term.norm() < 1e-17 * sum.norm().max(1.0) {
            break;
        }
    }
    sum
}

/// Composition `p ∘ u` through the primitive's univariate coefficients and
/// Horner evaluation in the deviation `u - u(base)`.
pub fn compose_primitive(p: SmoothPrimitive, u: &Jet) -> Result<Jet> {
    let order = u.order();
    let c = p.univariate_coeffs(u.value(), order)?;
    let delta = u.sub(&Jet::constant(u.vars(), order, u.value()))?;
    let mut out = Jet::constant(u.vars(), order, c[order]);
    for k in (0..order).rev() {
        out = out.mul(&delta)?;
        out = out.add(&Jet::constant(u.vars(), order, c[k]))?;
    }
    Ok(out)
}

/// Smooth profile of several invariants, evaluated on jets of its arguments.
pub trait InvariantProfile: Sync + Send {
    fn arity(&self) -> usize;
    fn eval_jet(&self, args: &[Jet]) -> Result<Jet>;

    fn eval_value(&self, args: &[Complex64]) -> Result<Complex64> {
        let jets: Vec<Jet> = args
            .iter()
            .map(|&v| Jet::constant(args.len(), 0, v))
            .collect();
        Ok(self.eval_jet(&jets)?.value())
    }
}

impl<F> InvariantProfile for (usize, F)
where
    F: Fn(&[Jet]) -> Result<Jet> + Sync + Send,
{
    fn arity(&self) -> usize {
        self.0
    }
    fn eval_jet(&self, args: &[Jet]) -> Result<Jet> {
        (self.1)(args)
    }
}

/// Expand a smooth profile of `v` invariants around scalar bases into even
/// nilpotent directions.
///
/// Returns `Σ_α (∂^α p)(base)/α! · Π nil_i^{α_i}`, an exact finite sum: each
/// `nil_i` must be even with zero body, so the series stops at the nilpotency
/// degree. `max_degree` bounds the jet order and must cover that degree.
pub fn nilpotent_expand(
    profile: &dyn InvariantProfile,
    base: &[Complex64],
    nil: &[Multivector<Complex64>],
    max_degree: usize,
) -> Result<Multivector<Complex64>> {
    if profile.arity() != base.len() || base.len() != nil.len() {
        return Err(Error::Usage(
            "profile arity, base length, and nilpotent parts must agree".into(),
        ));
    }
    let pairs = nil
        .first()
        .map(|m| m.num_pairs())
        .ok_or_else(|| Error::Usage("at least one invariant required".into()))?;
    for m in nil {
        if !m.has_zero_body() {
            return Err(Error::Usage(
                "nilpotent direction has a nonzero body".into(),
            ));
        }
        if !m.is_even() {
            return Err(Error::Usage("nilpotent direction must be even".into()));
        }
    }
    let v = base.len();
    let jets: Vec<Jet> = (0..v)
        .map(|i| Jet::variable(v, max_degree, i, base[i]))
        .collect();
    let pjet = profile.eval_jet(&jets)?;

    // powers of each nilpotent part, truncated at the first vanishing one
    let mut powers: Vec<Vec<Multivector<Complex64>>> = Vec::with_capacity(v);
    for m in nil {
        let mut ps = vec![Multivector::one(pairs)];
        for k in 1..=max_degree {
            let next = ps[k - 1].multiply(m)?;
            let stop = next.is_zero();
            ps.push(next);
            if stop {
                break;
            }
        }
        powers.push(ps);
    }

    let space = jet_space(v, max_degree);
    let mut out = Multivector::zero(pairs);
    'outer: for r in 0..space.len() {
        let alpha = space.index(r);
        let c = pjet.coeffs[r];
        if c == Complex64::default() {
            continue;
        }
        let mut prod = Multivector::one(pairs);
        for (i, &a) in alpha.iter().enumerate() {
            let a = a as usize;
            if a >= powers[i].len() {
                continue 'outer; // that power already vanished
            }
            if a == 0 {
                continue;
            }
            prod = prod.multiply(&powers[i][a])?;
            if prod.is_zero() {
                continue 'outer;
            }
        }
        out = out.add(&prod.scale(&c));
    }
    Ok(out)
}

// Jets form a scalar ring (used when Grassmann coefficients must carry
// Taylor data). A zero-variable jet acts as a plain scalar and broadcasts
// against any shape.
impl ScalarRing for Jet {
    fn zero() -> Self {
        Jet::constant(0, 0, Complex64::default())
    }
    fn one() -> Self {
        Jet::constant(0, 0, Complex64::new(1.0, 0.0))
    }
    fn add(&self, other: &Self) -> Self {
        match broadcast(self, other) {
            (a, b) => a.add(&b).expect("broadcast shapes agree"),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        let (a, b) = broadcast(self, other);
        a.sub(&b).expect("broadcast shapes agree")
    }
    fn mul(&self, other: &Self) -> Self {
        let (a, b) = broadcast(self, other);
        a.mul(&b).expect("broadcast shapes agree")
    }
    fn neg(&self) -> Self {
        Jet::neg(self)
    }
    fn is_negligible(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.norm() < crate::ring::FLOAT_PRUNE_EPS)
    }
    fn from_i64(v: i64) -> Self {
        Jet::constant(0, 0, Complex64::new(v as f64, 0.0))
    }
}

fn broadcast(a: &Jet, b: &Jet) -> (Jet, Jet) {
    if a.vars() == b.vars() && a.order() == b.order() {
        (a.clone(), b.clone())
    } else if a.vars() == 0 {
        (Jet::constant(b.vars(), b.order(), a.value()), b.clone())
    } else if b.vars() == 0 {
        (a.clone(), Jet::constant(a.vars(), a.order(), b.value()))
    } else {
        panic!("incompatible jet shapes in ring arithmetic");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn square_of_coordinate_jet() {
        let x = Jet::variable(1, 2, 0, c(2.0));
        let sq = x.mul(&x).unwrap();
        assert_eq!(sq.coeff(&[0]), c(4.0));
        assert_eq!(sq.coeff(&[1]), c(4.0));
        assert_eq!(sq.coeff(&[2]), c(1.0));
    }

    #[test]
    fn addition_commutes_and_associates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let space = jet_space(2, 3);
        let rand_jet = |rng: &mut ChaCha8Rng| {
            let coeffs = (0..space.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            Jet {
                space: space.clone(),
                coeffs,
            }
        };
        for _ in 0..10 {
            let a = rand_jet(&mut rng);
            let b = rand_jet(&mut rng);
            let d = rand_jet(&mut rng);
            assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            assert_eq!(
                a.add(&b).unwrap().add(&d).unwrap(),
                a.add(&b.add(&d).unwrap()).unwrap()
            );
        }
    }

    /// Central finite differences of f at `base` for |alpha| <= 2.
    fn fd_partial(
        f: &dyn Fn(&[f64]) -> f64,
        base: &[f64],
        alpha: &[u8],
        h: f64,
    ) -> f64 {
        let total: u8 = alpha.iter().sum();
        match total {
            0 => f(base),
            1 => {
                let i = alpha.iter().position(|&a| a == 1).unwrap();
                let mut up = base.to_vec();
                let mut dn = base.to_vec();
                up[i] += h;
                dn[i] -= h;
                (f(&up) - f(&dn)) / (2.0 * h)
            }
            2 => {
                if let Some(i) = alpha.iter().position(|&a| a == 2) {
                    let mut up = base.to_vec();
                    let mut dn = base.to_vec();
                    up[i] += h;
                    dn[i] -= h;
                    (f(&up) - 2.0 * f(base) + f(&dn)) / (h * h)
                } else {
                    let i = alpha.iter().position(|&a| a == 1).unwrap();
                    let j = i + 1 + alpha[i + 1..].iter().position(|&a| a == 1).unwrap();
                    let mut pp = base.to_vec();
                    let mut pm = base.to_vec();
                    let mut mp = base.to_vec();
                    let mut mm = base.to_vec();
                    pp[i] += h;
                    pp[j] += h;
                    pm[i] += h;
                    pm[j] -= h;
                    mp[i] -= h;
                    mp[j] += h;
                    mm[i] -= h;
                    mm[j] -= h;
                    (f(&pp) - f(&pm) - f(&mp) + f(&mm)) / (4.0 * h * h)
                }
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn product_matches_finite_differences() {
        // f = (x + 2y^2) * exp(x y), jets vs central differences.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let bx = rng.gen_range(-0.8..0.8);
            let by = rng.gen_range(-0.8..0.8);
            let x = Jet::variable(2, 2, 0, c(bx));
            let y = Jet::variable(2, 2, 1, c(by));
            let poly = x.add(&y.mul(&y).unwrap().scale(c(2.0))).unwrap();
            let expo = compose_primitive(SmoothPrimitive::Exp, &x.mul(&y).unwrap()).unwrap();
            let jet = poly.mul(&expo).unwrap();
            let f = |p: &[f64]| (p[0] + 2.0 * p[1] * p[1]) * (p[0] * p[1]).exp();
            let space = jet_space(2, 2);
            for r in 0..space.len() {
                let alpha = space.index(r).to_vec();
                let exact = jet.partial(&alpha).re;
                let approx = fd_partial(&f, &[bx, by], &alpha, 1e-4);
                let scale = exact.abs().max(1.0);
                assert!(
                    (exact - approx).abs() / scale < 1e-5,
                    "alpha {alpha:?}: {exact} vs {approx}"
                );
            }
        }
    }

    #[test]
    fn compose_examples() {
        // exp of the zero jet is the constant 1
        let z = Jet::constant(1, 3, c(0.0));
        let e = compose_primitive(SmoothPrimitive::Exp, &z).unwrap();
        assert_eq!(e.value(), c(1.0));
        assert_eq!(e.coeff(&[1]), c(0.0));

        // J0 normalisation at the origin
        let j = compose_primitive(SmoothPrimitive::BesselJ0, &z).unwrap();
        assert_eq!(j.value(), c(1.0));

        // sqrt(r^2) reproduces the jet of r at r = 1.3
        let r = Jet::variable(1, 4, 0, c(1.3));
        let r2 = r.mul(&r).unwrap();
        let back = compose_primitive(SmoothPrimitive::Sqrt, &r2).unwrap();
        for k in 0..=4u8 {
            let d = (back.coeff(&[k]) - r.coeff(&[k])).norm();
            assert!(d < 1e-12, "k={k} dev={d:e}");
        }
    }

    #[test]
    fn chain_rule_exact_for_polynomials() {
        // p(u) = u^3 - 2u, q(x) = 1 + x + x^2 at x = 0.7; compose vs direct.
        let x = Jet::variable(1, 5, 0, c(0.7));
        let q = Jet::constant(1, 5, c(1.0))
            .add(&x)
            .unwrap()
            .add(&x.mul(&x).unwrap())
            .unwrap();
        let p_of_q = q.powi(3).unwrap().sub(&q.scale(c(2.0))).unwrap();
        // direct: evaluate the composite polynomial coefficients through
        // repeated jet arithmetic on x only
        let direct = {
            let q2 = x.mul(&x).unwrap();
            let qq = Jet::constant(1, 5, c(1.0)).add(&x).unwrap().add(&q2).unwrap();
            qq.powi(3).unwrap().sub(&qq.scale(c(2.0))).unwrap()
        };
        for k in 0..=5u8 {
            assert!((p_of_q.coeff(&[k]) - direct.coeff(&[k])).norm() < 1e-13);
        }
    }

    #[test]
    fn bessel_coeffs_match_finite_differences() {
        let u = Jet::variable(1, 3, 0, c(1.7));
        let j = compose_primitive(SmoothPrimitive::BesselJ0, &u).unwrap();
        let f = |p: &[f64]| bessel_j0(c(p[0])).re;
        for k in 1..=2u8 {
            let exact = j.partial(&[k]).re;
            let approx = fd_partial(&f, &[1.7], &[k], 1e-4);
            assert!((exact - approx).abs() < 1e-6, "k={k}");
        }
    }

    #[test]
    fn nilpotent_expand_examples() {
        use crate::grassmann::GeneratorId;
        type Mv = Multivector<Complex64>;

        // p(u) = u, base x^2, nil 2 eta* eta
        let l = 1;
        let bilinear = Mv::generator(l, GeneratorId::starred(1))
            .multiply(&Mv::generator(l, GeneratorId::plain(1)))
            .unwrap();
        let nil = bilinear.scale(&c(2.0));
        let ident = (1usize, |args: &[Jet]| Ok(args[0].clone()));
        let out = nilpotent_expand(&ident, &[c(2.25)], &[nil.clone()], 2).unwrap();
        assert_eq!(out.project_body(), c(2.25));
        assert_eq!(out.coefficient(0b11), c(2.0));

        // p(u) = exp(-u), base 0, nil eta* eta: 1 - eta* eta, integral -1/(2 pi)
        let gauss = (1usize, |args: &[Jet]| {
            compose_primitive(SmoothPrimitive::Exp, &args[0].neg())
        });
        let out = nilpotent_expand(&gauss, &[c(0.0)], &[bilinear.clone()], 2).unwrap();
        assert_eq!(out.project_body(), c(1.0));
        assert_eq!(out.coefficient(0b11), c(-1.0));
        let integral = out.berezin_integral_all();
        assert!((integral.re + 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);

        // p(u) = u^2 with the L = 2 vector invariant: top term matches the
        // brute-force square of (x^2 + 2 eta1* eta1 + 2 eta2* eta2)
        let l = 2;
        let b1 = Mv::generator(l, GeneratorId::starred(1))
            .multiply(&Mv::generator(l, GeneratorId::plain(1)))
            .unwrap()
            .scale(&c(2.0));
        let b2 = Mv::generator(l, GeneratorId::starred(2))
            .multiply(&Mv::generator(l, GeneratorId::plain(2)))
            .unwrap()
            .scale(&c(2.0));
        let nil = b1.add(&b2);
        let x2 = 1.21;
        let square = (1usize, |args: &[Jet]| args[0].mul(&args[0]));
        let out = nilpotent_expand(&square, &[c(x2)], &[nil.clone()], 3).unwrap();
        let brute = Mv::scalar(l, c(x2)).add(&nil);
        let brute_sq = brute.multiply(&brute).unwrap();
        assert!((out.top_component() - brute_sq.top_component()).norm() < 1e-12);
        // body re-extraction is exact
        assert_eq!(out.project_body(), c(x2 * x2));
    }

    #[test]
    fn nilpotent_expand_rejects_nonzero_body() {
        let nil = Multivector::<Complex64>::one(1);
        let ident = (1usize, |args: &[Jet]| Ok(args[0].clone()));
        assert!(nilpotent_expand(&ident, &[c(0.0)], &[nil], 2).is_err());
    }

    #[test]
    fn jet_ring_smoke() {
        // Multivector over the jet ring: scalar broadcast works.
        type MvJ = Multivector<Jet>;
        let x = Jet::variable(1, 2, 0, c(1.5));
        let mv = MvJ::scalar(1, x.clone());
        let doubled = mv.scale(&<Jet as ScalarRing>::from_i64(2));
        assert_eq!(doubled.project_body().value(), c(3.0));
    }
}
