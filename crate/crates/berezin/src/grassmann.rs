//! Complex Grassmann algebra on `L` pairs of generators with Berezin
//! integration and left Grassmann derivatives.
//!
//! Generators are ordered canonically as
//! `eta_1* < eta_1 < eta_2* < eta_2 < ...` and every monomial is stored as a
//! bitmask over that order, so the stored coefficient of a subset *is* the
//! power-series component of the superfunction in that ordering. All signs
//! follow from permutation parity when products are brought back to canonical
//! order.

use crate::error::Error;
use crate::ring::ScalarRing;
use crate::Result;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

/// One Grassmann generator: the `pair_index`-th pair, starred or not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorId {
    /// 1-based pair index.
    pub pair_index: usize,
    /// `true` for the conjugate generator of the pair.
    pub starred: bool,
}

impl GeneratorId {
    pub fn starred(pair_index: usize) -> Self {
        Self {
            pair_index,
            starred: true,
        }
    }

    pub fn plain(pair_index: usize) -> Self {
        Self {
            pair_index,
            starred: false,
        }
    }

    /// Position in the canonical generator order (0-based bit index).
    pub fn bit(&self) -> u32 {
        let base = 2 * (self.pair_index as u32 - 1);
        if self.starred {
            base
        } else {
            base + 1
        }
    }
}

/// Element of the Grassmann algebra on `num_pairs` generator pairs with
/// coefficients in the scalar ring `R`.
///
/// Invariant: no stored coefficient is negligible in `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector<R: ScalarRing> {
    num_pairs: usize,
    terms: BTreeMap<u32, R>,
}

/// Sign incurred when concatenating two canonical monomials and re-sorting:
/// each generator of `b` crosses every generator of `a` above it.
fn merge_sign(a: u32, b: u32) -> i32 {
    let mut crossings = 0u32;
    let mut bb = b;
    while bb != 0 {
        let bit = bb.trailing_zeros();
        crossings += (a >> (bit + 1)).count_ones();
        bb &= bb - 1;
    }
    if crossings % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<R: ScalarRing> Multivector<R> {
    pub fn zero(num_pairs: usize) -> Self {
        Self {
            num_pairs,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(num_pairs: usize, c: R) -> Self {
        let mut mv = Self::zero(num_pairs);
        mv.set_term(0, c);
        mv
    }

    pub fn one(num_pairs: usize) -> Self {
        Self::scalar(num_pairs, R::one())
    }

    /// A single generator as a multivector.
    pub fn generator(num_pairs: usize, g: GeneratorId) -> Self {
        assert!(
            g.pair_index >= 1 && g.pair_index <= num_pairs,
            "generator pair index out of range"
        );
        let mut mv = Self::zero(num_pairs);
        mv.set_term(1 << g.bit(), R::one());
        mv
    }

    /// A monomial given by its generator subset mask, with coefficient `c`.
    pub fn monomial(num_pairs: usize, mask: u32, c: R) -> Self {
        assert!(mask < (1u32 << (2 * num_pairs)));
        let mut mv = Self::zero(num_pairs);
        mv.set_term(mask, c);
        mv
    }

    pub fn num_pairs(&self) -> usize {
        self.num_pairs
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &R)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coefficient(&self, mask: u32) -> R {
        self.terms.get(&mask).cloned().unwrap_or_else(R::zero)
    }

    fn set_term(&mut self, mask: u32, c: R) {
        if !c.is_negligible() {
            self.terms.insert(mask, c);
        }
    }

    fn add_term(&mut self, mask: u32, c: R) {
        let cur = self.terms.remove(&mask);
        let next = match cur {
            Some(old) => old.add(&c),
            None => c,
        };
        if !next.is_negligible() {
            self.terms.insert(mask, next);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.num_pairs != other.num_pairs {
            return Err(Error::MismatchedAlgebra(format!(
                "operands over {} and {} generator pairs",
                self.num_pairs, other.num_pairs
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("mismatched algebras");
        let mut out = self.clone();
        for (mask, c) in &other.terms {
            out.add_term(*mask, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.num_pairs);
        for (mask, c) in &self.terms {
            out.set_term(*mask, c.neg());
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(self.num_pairs);
        for (mask, v) in &self.terms {
            let p = v.mul(c);
            if !p.is_negligible() {
                out.set_term(*mask, p);
            }
        }
        out
    }

    /// Graded associative product. Squares of generators vanish through the
    /// mask intersection test; every surviving merge carries the permutation
    /// sign back to canonical order.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.num_pairs);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let mut c = ca.mul(cb);
                if merge_sign(*ma, *mb) < 0 {
                    c = c.neg();
                }
                out.add_term(ma | mb, c);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: usize) -> Result<Self> {
        let mut out = Self::one(self.num_pairs);
        for _ in 0..n {
            out = out.multiply(self)?;
        }
        Ok(out)
    }

    /// Left derivative with respect to generator `g`: terms not containing
    /// `g` are killed, `g` is moved to the front of the remaining ones and
    /// removed.
    pub fn grassmann_derivative(&self, g: GeneratorId) -> Self {
        let bit = g.bit();
        let mut out = Self::zero(self.num_pairs);
        for (mask, c) in &self.terms {
            if mask & (1 << bit) == 0 {
                continue;
            }
            let below = (mask & ((1u32 << bit) - 1)).count_ones();
            let c = if below % 2 == 0 { c.clone() } else { c.neg() };
            out.set_term(mask & !(1 << bit), c);
        }
        out
    }

    /// Left multiplication by generator `g`.
    pub fn left_mul_generator(&self, g: GeneratorId) -> Self {
        let gen = Self::generator(self.num_pairs, g);
        gen.multiply(self).expect("same algebra")
    }

    /// The component `f_{j1 j2}` of the canonical power-series representation
    /// (ordered monomials `(eta_n*)^{j1n} (eta_n)^{j2n}`, ascending `n`).
    pub fn project_component(&self, j1: &[u8], j2: &[u8]) -> R {
        assert_eq!(j1.len(), self.num_pairs);
        assert_eq!(j2.len(), self.num_pairs);
        self.coefficient(component_mask(j1, j2))
    }

    /// Body projector: the Grassmann-free component.
    pub fn project_body(&self) -> R {
        self.coefficient(0)
    }

    /// Everything but the body.
    pub fn soul(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&0);
        out
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_zero_body(&self) -> bool {
        !self.terms.contains_key(&0)
    }

    /// Raw coefficient of the full canonical top monomial
    /// `eta_1* eta_1 ... eta_L* eta_L` (the Berezin integral in units of the
    /// `(2 pi)^{-L}` measure normalisation).
    pub fn top_component(&self) -> R {
        let full: u32 = (1u32 << (2 * self.num_pairs)) - 1;
        self.coefficient(full)
    }
}

/// `(2 pi)^{-L}` prefactor of the full Berezin integral for `L` pairs.
pub fn berezin_norm(num_pairs: usize) -> f64 {
    (2.0 * PI).powi(-(num_pairs as i32))
}

impl Multivector<Complex64> {
    /// Berezin integral over all generators: `(2 pi)^{-L}` times the top
    /// coefficient in canonical order. The orientation is fixed so the
    /// one-pair dimensional-reduction identity holds verbatim.
    pub fn berezin_integral_all(&self) -> Complex64 {
        self.top_component() * berezin_norm(self.num_pairs)
    }
}

fn component_mask(j1: &[u8], j2: &[u8]) -> u32 {
    let mut mask = 0u32;
    for n in 0..j1.len() {
        if j1[n] != 0 {
            mask |= 1 << GeneratorId::starred(n + 1).bit();
        }
        if j2[n] != 0 {
            mask |= 1 << GeneratorId::plain(n + 1).bit();
        }
    }
    mask
}

/// Printed sign exponent of the component-extraction identity as it appears
/// in the source derivation.
pub fn j_sign_printed(j1: &[u8], j2: &[u8]) -> u32 {
    let l = j1.len();
    let mut j = 0u32;
    for n in 0..l {
        j += ((1 - j1[n]) * j2[n]) as u32;
    }
    j + j_cross(j1, j2)
}

/// Corrected sign exponent: the per-pair term is `j1(1-j2)` rather than
/// `(1-j1)j2`. Brute-force verified against the projector on every component
/// for L <= 3; the printed per-pair term fails on odd components.
pub fn j_sign_corrected(j1: &[u8], j2: &[u8]) -> u32 {
    let l = j1.len();
    let mut j = 0u32;
    for n in 0..l {
        j += (j1[n] * (1 - j2[n])) as u32;
    }
    j + j_cross(j1, j2)
}

fn j_cross(j1: &[u8], j2: &[u8]) -> u32 {
    let l = j1.len();
    let mut j = 0u32;
    for n in 0..l {
        for m in (n + 1)..l {
            j += ((j1[n] + j2[n]) * (j1[m] + j2[m])) as u32;
        }
    }
    j
}

/// Brute-force component extraction: multiply by the complementary monomial,
/// apply the pairwise second-derivative projector, take the body. Returns the
/// value *without* any sign prefactor so callers can test candidate sign
/// rules against [`Multivector::project_component`].
pub fn component_via_projector<R: ScalarRing>(a: &Multivector<R>, j1: &[u8], j2: &[u8]) -> R {
    let l = a.num_pairs();
    let mut mult = Multivector::one(l);
    for n in 0..l {
        if j1[n] == 0 {
            mult = mult
                .multiply(&Multivector::generator(l, GeneratorId::starred(n + 1)))
                .unwrap();
        }
        if j2[n] == 0 {
            mult = mult
                .multiply(&Multivector::generator(l, GeneratorId::plain(n + 1)))
                .unwrap();
        }
    }
    let mut v = mult.multiply(a).unwrap();
    for n in 1..=l {
        // conjugate derivative first, then the plain one; this order makes
        // the body projector act as the identity on Grassmann-free values
        v = v
            .grassmann_derivative(GeneratorId::starred(n))
            .grassmann_derivative(GeneratorId::plain(n));
    }
    v.project_body()
}

impl<R: ScalarRing + fmt::Display> fmt::Display for Multivector<R> {
    /// Debug dump: one line per term, `+ coeff · η*_i … η_j` in canonical
    /// order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (mask, c) in &self.terms {
            write!(f, "+ {} ", c)?;
            if *mask == 0 {
                writeln!(f, "· 1")?;
                continue;
            }
            write!(f, "·")?;
            for bit in 0..(2 * self.num_pairs as u32) {
                if mask & (1 << bit) != 0 {
                    let pair = bit / 2 + 1;
                    if bit % 2 == 0 {
                        write!(f, " η*_{}", pair)?;
                    } else {
                        write!(f, " η_{}", pair)?;
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::GaussianRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Mv = Multivector<GaussianRational>;

    fn eta(l: usize, n: usize) -> Mv {
        Mv::generator(l, GeneratorId::plain(n))
    }

    fn eta_star(l: usize, n: usize) -> Mv {
        Mv::generator(l, GeneratorId::starred(n))
    }

    fn random_mv(rng: &mut ChaCha8Rng, l: usize) -> Mv {
        let mut mv = Mv::zero(l);
        for mask in 0..(1u32 << (2 * l)) {
            if rng.gen_bool(0.7) {
                let c = GaussianRational::new(
                    num::BigRational::new(rng.gen_range(-9i64..=9).into(), 1.into()),
                    num::BigRational::new(rng.gen_range(-9i64..=9).into(), 1.into()),
                );
                if !c.is_zero() {
                    mv = mv.add(&Mv::monomial(l, mask, c));
                }
            }
        }
        mv
    }

    #[test]
    fn generator_squares_vanish() {
        let e = eta(1, 1);
        assert!(e.multiply(&e).unwrap().is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let l = 1;
        let a = eta(l, 1).multiply(&eta_star(l, 1)).unwrap();
        let b = eta_star(l, 1).multiply(&eta(l, 1)).unwrap();
        assert_eq!(a, b.neg());
    }

    #[test]
    fn even_elements_commute_and_expand() {
        // (1 + eta1* eta1)(1 + eta2* eta2)
        let l = 2;
        let one = Mv::one(l);
        let a = one.add(&eta_star(l, 1).multiply(&eta(l, 1)).unwrap());
        let b = one.add(&eta_star(l, 2).multiply(&eta(l, 2)).unwrap());
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        assert_eq!(ab, ba);
        // 1 + eta1*eta1 + eta2*eta2 + eta1*eta1 eta2*eta2
        assert_eq!(ab.coefficient(0), GaussianRational::from_int(1));
        assert_eq!(ab.coefficient(0b0011), GaussianRational::from_int(1));
        assert_eq!(ab.coefficient(0b1100), GaussianRational::from_int(1));
        assert_eq!(ab.coefficient(0b1111), GaussianRational::from_int(1));
        assert_eq!(ab.terms().count(), 4);
    }

    #[test]
    fn derivative_examples() {
        let l = 1;
        // d/d eta (eta) = 1
        assert_eq!(eta(l, 1).grassmann_derivative(GeneratorId::plain(1)), Mv::one(l));
        // d/d eta (eta* eta) = -eta*
        let m = eta_star(l, 1).multiply(&eta(l, 1)).unwrap();
        assert_eq!(
            m.grassmann_derivative(GeneratorId::plain(1)),
            eta_star(l, 1).neg()
        );
    }

    #[test]
    fn derivative_operator_identity_on_random_inputs() {
        // d/dg (g f) + g (d/dg f) = f for every generator g, exact ring.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for l in 1..=3usize {
            for _ in 0..34 {
                let f = random_mv(&mut rng, l);
                for n in 1..=l {
                    for g in [GeneratorId::plain(n), GeneratorId::starred(n)] {
                        let lhs = f
                            .left_mul_generator(g)
                            .grassmann_derivative(g)
                            .add(&f.grassmann_derivative(g).left_mul_generator(g));
                        assert_eq!(lhs, f, "identity failed at L={l} g={g:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn projection_examples() {
        let l = 1;
        let three = GaussianRational::from_int(3);
        let a = Mv::one(l).add(&eta_star(l, 1).multiply(&eta(l, 1)).unwrap().scale(&three));
        assert_eq!(a.project_component(&[0], &[0]), GaussianRational::from_int(1));
        assert_eq!(a.project_component(&[1], &[1]), three);
        // purely even input has no odd components
        assert_eq!(a.project_component(&[1], &[0]), GaussianRational::zero_val());
        assert_eq!(a.project_body(), GaussianRational::from_int(1));
    }

    #[test]
    fn component_sign_rule_brute_force() {
        // The corrected J reproduces every component; the printed J fails on
        // odd ones. Checked exhaustively over (j1, j2) for L <= 3.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut printed_fails = 0usize;
        for l in 1..=3usize {
            for _ in 0..8 {
                let a = random_mv(&mut rng, l);
                for code in 0..(1u32 << (2 * l)) {
                    let j1: Vec<u8> = (0..l).map(|n| ((code >> (2 * n)) & 1) as u8).collect();
                    let j2: Vec<u8> =
                        (0..l).map(|n| ((code >> (2 * n + 1)) & 1) as u8).collect();
                    let direct = a.project_component(&j1, &j2);
                    let raw = component_via_projector(&a, &j1, &j2);
                    let corrected = if j_sign_corrected(&j1, &j2) % 2 == 0 {
                        raw.clone()
                    } else {
                        raw.neg()
                    };
                    assert_eq!(direct, corrected, "L={l} j1={j1:?} j2={j2:?}");
                    let printed = if j_sign_printed(&j1, &j2) % 2 == 0 {
                        raw.clone()
                    } else {
                        raw.neg()
                    };
                    if printed != direct {
                        printed_fails += 1;
                    }
                }
            }
        }
        assert!(printed_fails > 0, "expected the printed sign rule to differ");
    }

    #[test]
    fn resolution_of_identity() {
        // Reassembling all components reproduces the input exactly.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for l in 1..=3usize {
            let a = random_mv(&mut rng, l);
            let mut rebuilt = Mv::zero(l);
            for code in 0..(1u32 << (2 * l)) {
                let j1: Vec<u8> = (0..l).map(|n| ((code >> (2 * n)) & 1) as u8).collect();
                let j2: Vec<u8> = (0..l).map(|n| ((code >> (2 * n + 1)) & 1) as u8).collect();
                let c = a.project_component(&j1, &j2);
                let mut mono = Mv::one(l);
                for n in 0..l {
                    if j1[n] != 0 {
                        mono = mono.multiply(&eta_star(l, n + 1)).unwrap();
                    }
                    if j2[n] != 0 {
                        mono = mono.multiply(&eta(l, n + 1)).unwrap();
                    }
                }
                rebuilt = rebuilt.add(&mono.scale(&c));
            }
            assert_eq!(rebuilt, a);
        }
    }

    #[test]
    fn body_projector_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_mv(&mut rng, 2);
        let body = a.project_body();
        let projected = Mv::scalar(2, body.clone());
        assert_eq!(projected.project_body(), body);
    }

    #[test]
    fn berezin_examples() {
        use num_complex::Complex64;
        let l = 1;
        let one = Multivector::<Complex64>::one(l);
        let bilinear = Multivector::<Complex64>::generator(l, GeneratorId::starred(1))
            .multiply(&Multivector::generator(l, GeneratorId::plain(1)))
            .unwrap();
        // integral of (1 + eta* eta) = 1/(2 pi)
        let v = one.add(&bilinear).berezin_integral_all();
        assert!((v.re - 1.0 / (2.0 * PI)).abs() < 1e-15 && v.im.abs() < 1e-16);
        // integral of a scalar vanishes
        assert_eq!(one.berezin_integral_all(), Complex64::new(0.0, 0.0));
        // integral of (x^2 + 2 eta* eta) = 1/pi regardless of x
        let x2 = Multivector::<Complex64>::scalar(l, Complex64::new(1.69, 0.0));
        let v = x2
            .add(&bilinear.scale(&Complex64::new(2.0, 0.0)))
            .berezin_integral_all();
        assert!((v.re - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn berezin_linearity_in_body_scalar() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = random_mv(&mut rng, 2);
        let c = GaussianRational::from_ratio(7, 3);
        let scaled = a.scale(&c);
        assert_eq!(scaled.top_component(), a.top_component().mul(&c));
    }

    #[test]
    fn multiplication_bilinear_and_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let a = random_mv(&mut rng, 2);
            let b = random_mv(&mut rng, 2);
            let c = random_mv(&mut rng, 2);
            let left = a.multiply(&b.add(&c)).unwrap();
            let right = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap());
            assert_eq!(left, right);
            let assoc_l = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let assoc_r = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            assert_eq!(assoc_l, assoc_r);
        }
    }

    #[test]
    fn odd_monomials_anticommute() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let l = 3;
        for _ in 0..50 {
            let ma = 1u32 << rng.gen_range(0..(2 * l));
            let mb = 1u32 << rng.gen_range(0..(2 * l));
            let u = Mv::monomial(l, ma, GaussianRational::from_int(1));
            let v = Mv::monomial(l, mb, GaussianRational::from_int(1));
            let uv = u.multiply(&v).unwrap();
            let vu = v.multiply(&u).unwrap();
            assert_eq!(uv, vu.neg());
        }
    }

    #[test]
    fn mismatched_algebras_error() {
        let a = Mv::one(1);
        let b = Mv::one(2);
        assert!(a.multiply(&b).is_err());
    }

    impl GaussianRational {
        fn zero_val() -> Self {
            <Self as ScalarRing>::zero()
        }
    }
}
