//! The commutator-rearrangement power `IAd[A,B]^L(1)` and the binomial sum
//! it rearranges. Both are generic over anything with an associative product,
//! so the identity can be exercised on complex matrices as well as on the
//! radial operators themselves.

use super::RadialOperator;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Minimal associative-algebra surface for the rearrangement identity.
pub trait IadAlgebra: Clone {
    fn compose_with(&self, other: &Self) -> Self;
    fn add_with(&self, other: &Self) -> Self;
    fn sub_with(&self, other: &Self) -> Self;
    fn identity_like(&self) -> Self;
}

impl IadAlgebra for DMatrix<Complex64> {
    fn compose_with(&self, other: &Self) -> Self {
        self * other
    }
    fn add_with(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_with(&self, other: &Self) -> Self {
        self - other
    }
    fn identity_like(&self) -> Self {
        DMatrix::identity(self.nrows(), self.ncols())
    }
}

impl IadAlgebra for RadialOperator {
    fn compose_with(&self, other: &Self) -> Self {
        self.compose(other).expect("roster mismatch")
    }
    fn add_with(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_with(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn identity_like(&self) -> Self {
        RadialOperator::identity(self.names().clone())
    }
}

/// `IAd[A,B]^L(1)` with `IAd[A,B](H) = [A,H] + HB`, iterated from the
/// identity.
pub fn iad_power<T: IadAlgebra>(a: &T, b: &T, l: usize) -> T {
    let mut h = a.identity_like();
    for _ in 0..l {
        let comm = a.compose_with(&h).sub_with(&h.compose_with(a));
        h = comm.add_with(&h.compose_with(b));
    }
    h
}

/// `Σ_n binom(L,n) A^{L-n} (B-A)^n`, evaluated directly.
pub fn binomial_operator_sum<T: IadAlgebra>(a: &T, b: &T, l: usize) -> T {
    let d = b.sub_with(a);
    let mut sum: Option<T> = None;
    for n in 0..=l {
        let mut term = a.identity_like();
        for _ in 0..(l - n) {
            term = term.compose_with(a);
        }
        for _ in 0..n {
            term = term.compose_with(&d);
        }
        let mut c = 1i64;
        for i in 0..n as i64 {
            c = c * (l as i64 - i) / (i + 1);
        }
        let mut scaled = term.clone();
        for _ in 1..c {
            scaled = scaled.add_with(&term);
        }
        sum = Some(match sum {
            None => scaled,
            Some(s) => s.add_with(&scaled),
        });
    }
    sum.expect("l >= 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
        DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn iad_base_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 4);
        let b = random_matrix(&mut rng, 4);
        // L = 0 is the identity
        let h0 = iad_power(&a, &b, 0);
        assert_eq!(h0, DMatrix::identity(4, 4));
        // L = 1 gives B
        let h1 = iad_power(&a, &b, 1);
        assert!((&h1 - &b).norm() < 1e-14);
    }

    #[test]
    fn iad_equals_binomial_sum_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 5);
            let b = random_matrix(&mut rng, 5);
            for l in 0..=6 {
                let lhs = iad_power(&a, &b, l);
                let rhs = binomial_operator_sum(&a, &b, l);
                let scale = rhs.norm().max(1.0);
                assert!(
                    (&lhs - &rhs).norm() / scale < 1e-12,
                    "L={l} deviation {}",
                    (&lhs - &rhs).norm() / scale
                );
            }
        }
    }
}
