//! Coefficient rings underneath the Grassmann algebra.
//!
//! Three rings are used in practice: `Complex64` for the numerical engine,
//! [`GaussianRational`] for exact property tests and symbolic coefficients,
//! and [`crate::jets::Jet`] when Grassmann coefficients must carry Taylor
//! data.

use num::{BigRational, FromPrimitive, One, Signed, Zero};
use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Commutative coefficient ring with an (exact or tolerance-based) zero test.
pub trait ScalarRing: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Whether the value should be pruned from sparse term maps.
    fn is_negligible(&self) -> bool;
    fn from_i64(v: i64) -> Self;
}

/// Absolute pruning threshold for floating-point rings.
pub const FLOAT_PRUNE_EPS: f64 = 1e-14;

impl ScalarRing for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_negligible(&self) -> bool {
        self.re.abs() < FLOAT_PRUNE_EPS && self.im.abs() < FLOAT_PRUNE_EPS
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

/// Exact complex rational `re + i*im` with arbitrary-precision components.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        Self {
            re: BigRational::from_i64(v).unwrap(),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self {
            re: BigRational::new(num.into(), den.into()),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Self {
            re: &self.re / &norm,
            im: -&self.im / &norm,
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Good enough for desk-scale numerators/denominators; fall back to a
    // string round-trip when the parts exceed i128.
    let num = r.numer();
    let den = r.denom();
    match (i128::try_from(num.clone()), i128::try_from(den.clone())) {
        (Ok(n), Ok(d)) => n as f64 / d as f64,
        _ => {
            let n: f64 = num.to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = den.to_string().parse().unwrap_or(f64::NAN);
            n / d
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "({}{}i)", self.re, self.im)
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl ScalarRing for GaussianRational {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn one() -> Self {
        Self {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
    fn add(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        Self::from_int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_rational_field_ops() {
        let a = GaussianRational::from_ratio(3, 4);
        let b = GaussianRational::i();
        let prod = a.clone() * b.clone();
        assert_eq!(prod.re, BigRational::zero());
        assert_eq!(prod.im, BigRational::new(3.into(), 4.into()));
        let inv = prod.inv().unwrap();
        assert_eq!(prod * inv, GaussianRational::one_val());
    }

    impl GaussianRational {
        fn one_val() -> Self {
            <Self as ScalarRing>::one()
        }
    }
}
