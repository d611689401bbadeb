//! Concrete flat superspaces: supervectors over the three division algebras
//! and supermatrices with unitary or orthosymplectic form invariance, with
//! multivector entries, Wick rotation, invariant construction, supertraces,
//! and the superdeterminant.

use crate::error::Error;
use crate::grassmann::{GeneratorId, Multivector};
use crate::jets::{nilpotent_expand, InvariantProfile};
use crate::operators::VectorFlavor;
use crate::Result;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type Mv = Multivector<Complex64>;

/// Diagonal constant metric: weights on commuting coordinates and Grassmann
/// pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    pub g: Vec<f64>,
    pub h: Vec<Complex64>,
}

impl Metric {
    /// Flavor presets: `g_n = h_m = 1` (real), `g_n = 1, h_m = 1/2`
    /// (complex), `g_n = 2, h_m = 1` (quaternion).
    pub fn preset(flavor: VectorFlavor, p: usize, l: usize) -> Self {
        let (g, h) = match flavor {
            VectorFlavor::Real => (1.0, 1.0),
            VectorFlavor::Complex => (1.0, 0.5),
            VectorFlavor::Quaternion => (2.0, 1.0),
        };
        Metric {
            g: vec![g; flavor.commuting_dims(p)],
            h: vec![Complex64::new(h, 0.0); flavor.pairs(l)],
        }
    }
}

/// Wick-rotation phase `e^{i psi}` with `psi` strictly inside `(0, pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WickRotation {
    psi: f64,
}

impl WickRotation {
    pub fn new(psi: f64) -> Result<Self> {
        if psi <= 0.0 || psi >= std::f64::consts::PI {
            return Err(Error::Usage(format!(
                "Wick angle {psi} outside the open interval (0, pi)"
            )));
        }
        Ok(Self { psi })
    }

    pub fn angle(&self) -> f64 {
        self.psi
    }

    pub fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.psi)
    }

    pub fn half_phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.psi / 2.0)
    }
}

/// Supervector with real commuting coordinates and canonical generator odd
/// parts, in one of the three flavors.
#[derive(Clone, Debug)]
pub struct SuperVector {
    pub flavor: VectorFlavor,
    /// Number of even entries (division-algebra units).
    pub num_even: usize,
    /// Number of odd entries (division-algebra units).
    pub num_odd: usize,
    /// Real coordinates of the body, length `flavor.commuting_dims(p)`.
    pub body: Vec<f64>,
}

impl SuperVector {
    pub fn new(
        flavor: VectorFlavor,
        num_even: usize,
        num_odd: usize,
        body: Vec<f64>,
    ) -> Result<Self> {
        if body.len() != flavor.commuting_dims(num_even) {
            return Err(Error::Usage(format!(
                "flavor expects {} real coordinates, got {}",
                flavor.commuting_dims(num_even),
                body.len()
            )));
        }
        Ok(Self {
            flavor,
            num_even,
            num_odd,
            body,
        })
    }

    pub fn pairs(&self) -> usize {
        self.flavor.pairs(self.num_odd)
    }

    pub fn body_norm2(&self) -> f64 {
        self.body.iter().map(|x| x * x).sum()
    }

    /// The squared invariant length as an even multivector: body norm plus
    /// the metric-weighted Grassmann bilinear.
    pub fn length_invariant(&self, metric: &Metric) -> Result<Mv> {
        let preset = Metric::preset(self.flavor, self.num_even, self.num_odd);
        if *metric != preset {
            return Err(Error::Usage(
                "metric does not match the flavor preset".into(),
            ));
        }
        Ok(self.length_invariant_preset())
    }

    /// Same with the preset metric applied implicitly.
    pub fn length_invariant_preset(&self) -> Mv {
        let pairs = self.pairs();
        let coeff = Complex64::new(self.flavor.invariant_pair_coeff(), 0.0);
        let mut inv = Mv::scalar(pairs.max(1), Complex64::new(self.body_norm2(), 0.0));
        for n in 1..=pairs {
            let bilinear = Mv::generator(pairs, GeneratorId::starred(n))
                .multiply(&Mv::generator(pairs, GeneratorId::plain(n)))
                .expect("same algebra");
            inv = inv.add(&bilinear.scale(&coeff));
        }
        inv
    }
}

/// Supermatrix symmetry classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixSymmetry {
    /// Unitary-symmetric `(k1/k2)` supermatrices.
    U { k1: usize, k2: usize },
    /// Orthosymplectic, boson block real symmetric, fermion block quaternion.
    UOSpPlus { k1: usize, k2: usize },
    /// Orthosymplectic, boson block quaternion, fermion block real symmetric.
    UOSpMinus { k1: usize, k2: usize },
}

impl MatrixSymmetry {
    pub fn block_sizes(&self) -> (usize, usize) {
        match *self {
            MatrixSymmetry::U { k1, k2 } => (k1, k2),
            MatrixSymmetry::UOSpPlus { k1, k2 } => (k1, 2 * k2),
            MatrixSymmetry::UOSpMinus { k1, k2 } => (2 * k1, k2),
        }
    }

    pub fn eigen_counts(&self) -> (usize, usize) {
        match *self {
            MatrixSymmetry::U { k1, k2 }
            | MatrixSymmetry::UOSpPlus { k1, k2 }
            | MatrixSymmetry::UOSpMinus { k1, k2 } => (k1, k2),
        }
    }

    pub fn dim(&self) -> usize {
        let (b, f) = self.block_sizes();
        b + f
    }

    pub fn pairs(&self) -> usize {
        let (k1, k2) = self.eigen_counts();
        k1 * k2
    }

    /// Scale applied to each raw generator inside the odd blocks; fixes the
    /// Grassmann-measure normalisation so that Berezin integration matches
    /// the printed reduction operators. The orthosymplectic families carry
    /// doubled pair weights `h_m`, absorbed here as `1/sqrt(2)` per entry.
    pub fn odd_entry_scale(&self) -> f64 {
        match self {
            MatrixSymmetry::U { .. } => 1.0,
            _ => std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            MatrixSymmetry::U { k1, k2 } => format!("U({k1}/{k2})"),
            MatrixSymmetry::UOSpPlus { k1, k2 } => format!("UOSp+({k1}/{})", 2 * k2),
            MatrixSymmetry::UOSpMinus { k1, k2 } => format!("UOSp-({}/{k2})", 2 * k1),
        }
    }
}

/// Square matrix with multivector entries and a fixed block grading.
#[derive(Clone, Debug)]
pub struct SuperMatrix {
    pub symmetry: MatrixSymmetry,
    pub wick: WickRotation,
    dim: usize,
    pairs: usize,
    entries: Vec<Mv>,
}

impl SuperMatrix {
    /// Supermatrix at a radial point: diagonal block bodies from the
    /// eigenvalues, full Grassmann odd blocks, Wick phases in place.
    pub fn from_radial(
        symmetry: MatrixSymmetry,
        s1: &[f64],
        s2: &[f64],
        wick: WickRotation,
    ) -> Result<Self> {
        let (k1, k2) = symmetry.eigen_counts();
        if s1.len() != k1 || s2.len() != k2 {
            return Err(Error::Usage(format!(
                "expected {k1} boson and {k2} fermion eigenvalues, got {} and {}",
                s1.len(),
                s2.len()
            )));
        }
        let dim = symmetry.dim();
        let pairs = symmetry.pairs();
        let np = pairs.max(1);
        let zero = Mv::zero(np);
        let mut entries = vec![zero; dim * dim];
        let phase = wick.phase();
        let half = wick.half_phase();
        let scale = Complex64::new(symmetry.odd_entry_scale(), 0.0) * half;
        let sc = |v: Complex64| Mv::scalar(np, v);
        let gen_p = |pair: usize| Mv::generator(np, GeneratorId::plain(pair)).scale(&scale);
        let gen_s = |pair: usize| Mv::generator(np, GeneratorId::starred(pair)).scale(&scale);
        match symmetry {
            MatrixSymmetry::U { k1, k2 } => {
                for n in 0..k1 {
                    entries[n * dim + n] = sc(Complex64::new(s1[n], 0.0));
                }
                for m in 0..k2 {
                    let i = k1 + m;
                    entries[i * dim + i] = sc(phase * s2[m]);
                }
                for n in 0..k1 {
                    for m in 0..k2 {
                        let pair = n * k2 + m + 1;
                        entries[n * dim + (k1 + m)] = gen_s(pair);
                        entries[(k1 + m) * dim + n] = gen_p(pair);
                    }
                }
            }
            MatrixSymmetry::UOSpPlus { k1, k2 } => {
                for n in 0..k1 {
                    entries[n * dim + n] = sc(Complex64::new(s1[n], 0.0));
                }
                for m in 0..k2 {
                    let v = sc(phase * s2[m]);
                    let i = k1 + m;
                    let j = k1 + k2 + m;
                    entries[i * dim + i] = v.clone();
                    entries[j * dim + j] = v;
                }
                for n in 0..k1 {
                    for m in 0..k2 {
                        let pair = n * k2 + m + 1;
                        entries[n * dim + (k1 + m)] = gen_p(pair);
                        entries[n * dim + (k1 + k2 + m)] = gen_s(pair);
                        entries[(k1 + m) * dim + n] = gen_s(pair).neg();
                        entries[(k1 + k2 + m) * dim + n] = gen_p(pair);
                    }
                }
            }
            MatrixSymmetry::UOSpMinus { .. } => {
                return Err(Error::Usage(
                    "radial construction for the UOSp- representation is not \
                     supported; its reduction operator comes from the duality \
                     substitution"
                        .into(),
                ));
            }
        }
        Ok(Self {
            symmetry,
            wick,
            dim,
            pairs: np,
            entries,
        })
    }

    /// Matrix from explicit entries (tests); `pairs` is the ambient pair
    /// count of the entries.
    pub fn from_entries(
        symmetry: MatrixSymmetry,
        wick: WickRotation,
        pairs: usize,
        entries: Vec<Mv>,
    ) -> Result<Self> {
        let dim = symmetry.dim();
        if entries.len() != dim * dim {
            return Err(Error::Usage("entry count does not match dimension".into()));
        }
        Ok(Self {
            symmetry,
            wick,
            dim,
            pairs,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn entry(&self, r: usize, c: usize) -> &Mv {
        &self.entries[r * self.dim + c]
    }

    fn boson_dim(&self) -> usize {
        self.symmetry.block_sizes().0
    }

    pub fn matmul(&self, other: &Self) -> Result<Vec<Mv>> {
        if self.dim != other.dim {
            return Err(Error::Usage("dimension mismatch".into()));
        }
        mat_mul(&self.entries, &other.entries, self.dim, self.dim, self.dim)
    }

    fn power_entries(&self, j: usize) -> Result<Vec<Mv>> {
        let d = self.dim;
        let mut acc = identity_mv(d, self.pairs);
        for _ in 0..j {
            acc = mat_mul(&acc, &self.entries, d, d, d)?;
        }
        Ok(acc)
    }

    /// Supertrace of the `j`-th power: boson-block trace minus fermion-block
    /// trace. Always even.
    pub fn supertrace_power(&self, j: usize) -> Result<Mv> {
        if j == 0 {
            return Err(Error::Usage("supertrace power must be >= 1".into()));
        }
        let pw = self.power_entries(j)?;
        let d = self.dim;
        let bd = self.boson_dim();
        let mut s = Mv::zero(self.pairs);
        for i in 0..d {
            let e = &pw[i * d + i];
            s = if i < bd { s.add(e) } else { s.sub(e) };
        }
        Ok(s)
    }

    pub fn supertrace(&self) -> Result<Mv> {
        self.supertrace_power(1)
    }

    /// Power-sum invariants `Str S^j`, `j = 1 ..= k1 + k2`.
    pub fn invariants(&self) -> Result<Vec<Mv>> {
        let (k1, k2) = self.symmetry.eigen_counts();
        (1..=(k1 + k2)).map(|j| self.supertrace_power(j)).collect()
    }

    /// Superdeterminant via the Schur complement of the fermion block:
    /// `det(A - B D^{-1} C) / det(D)`. Both diagonal blocks need invertible
    /// bodies.
    pub fn superdeterminant(&self) -> Result<Mv> {
        let bd = self.boson_dim();
        let fd = self.dim - bd;
        let a = self.block(0, 0, bd, bd);
        let b = self.block(0, bd, bd, fd);
        let c = self.block(bd, 0, fd, bd);
        let d = self.block(bd, bd, fd, fd);
        let d_inv = invert_even_matrix(&d, fd, self.pairs)?;
        let bdc = mat_mul(&mat_mul(&b, &d_inv, bd, fd, fd)?, &c, bd, fd, bd)?;
        let schur: Vec<Mv> = a.iter().zip(&bdc).map(|(x, y)| x.sub(y)).collect();
        let det_top = determinant(&schur, bd)?;
        let det_d = determinant(&d, fd)?;
        let det_d_inv = even_inverse(&det_d, self.pairs)?;
        det_top.multiply(&det_d_inv)
    }

    fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Vec<Mv> {
        let mut out = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                out.push(self.entry(r0 + r, c0 + c).clone());
            }
        }
        out
    }
}

fn mat_mul(a: &[Mv], b: &[Mv], n: usize, k: usize, m: usize) -> Result<Vec<Mv>> {
    let pairs = a.first().map(|e| e.num_pairs()).unwrap_or(1);
    let mut out = vec![Mv::zero(pairs); n * m];
    for r in 0..n {
        for c in 0..m {
            let mut s = Mv::zero(pairs);
            for j in 0..k {
                s = s.add(&a[r * k + j].multiply(&b[j * m + c])?);
            }
            out[r * m + c] = s;
        }
    }
    Ok(out)
}

/// Inverse of an even multivector with invertible body, through the
/// terminating Neumann series of its soul.
pub fn even_inverse(e: &Mv, pairs: usize) -> Result<Mv> {
    let body = e.project_body();
    if body.norm() < 1e-12 {
        return Err(Error::SingularInput(
            "even multivector has no invertible body".into(),
        ));
    }
    let inv_body = Complex64::new(1.0, 0.0) / body;
    let n = e.soul().scale(&inv_body);
    let mut sum = Mv::one(pairs);
    let mut term = Mv::one(pairs);
    for _ in 0..(2 * pairs + 1) {
        term = term.multiply(&n)?.neg();
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    Ok(sum.scale(&inv_body))
}

/// Inverse of a square matrix of even multivectors with invertible body,
/// through a matrix Neumann series around the numeric body inverse.
fn invert_even_matrix(m: &[Mv], n: usize, pairs: usize) -> Result<Vec<Mv>> {
    let body = DMatrix::from_fn(n, n, |r, c| m[r * n + c].project_body());
    let body_inv = body
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularInput("block body is not invertible".into()))?;
    let body_inv_mv: Vec<Mv> = (0..n * n)
        .map(|i| Mv::scalar(pairs, body_inv[(i / n, i % n)]))
        .collect();
    let soul: Vec<Mv> = (0..n * n).map(|i| m[i].soul()).collect();
    let nmat = mat_mul(&body_inv_mv, &soul, n, n, n)?;
    let mut sum = identity_mv(n, pairs);
    let mut term = identity_mv(n, pairs);
    for _ in 0..(2 * pairs + 1) {
        term = mat_mul(&term, &nmat, n, n, n)?;
        for e in term.iter_mut() {
            *e = e.neg();
        }
        if term.iter().all(|e| e.is_zero()) {
            break;
        }
        for (s, t) in sum.iter_mut().zip(&term) {
            *s = s.add(t);
        }
    }
    mat_mul(&sum, &body_inv_mv, n, n, n)
}

fn identity_mv(n: usize, pairs: usize) -> Vec<Mv> {
    (0..n * n)
        .map(|i| {
            if i / n == i % n {
                Mv::one(pairs)
            } else {
                Mv::zero(pairs)
            }
        })
        .collect()
}

/// Determinant of a matrix of commuting (even) multivectors by the Leibniz
/// permutation sum; fine at the block sizes used here.
pub fn determinant(m: &[Mv], n: usize) -> Result<Mv> {
    let pairs = m.first().map(|e| e.num_pairs()).unwrap_or(1);
    if n == 0 {
        return Ok(Mv::one(pairs));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Mv::zero(pairs);
    permute(&mut perm, 0, &mut |p, even| {
        let mut prod = Mv::one(pairs);
        for (r, &c) in p.iter().enumerate() {
            prod = prod.multiply(&m[r * n + c]).expect("same algebra");
        }
        out = if even { out.add(&prod) } else { out.sub(&prod) };
    });
    Ok(out)
}

fn permute<F: FnMut(&[usize], bool)>(p: &mut Vec<usize>, k: usize, f: &mut F) {
    let n = p.len();
    if k == n {
        let mut inv = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        f(p, inv % 2 == 0);
        return;
    }
    for i in k..n {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Lift a smooth profile of the power-sum invariants onto the supermatrix:
/// exact nilpotent expansion around the body invariants.
pub fn invariant_superfunction_matrix(
    profile: &dyn InvariantProfile,
    s: &SuperMatrix,
) -> Result<Mv> {
    let invs = s.invariants()?;
    if profile.arity() != invs.len() {
        return Err(Error::Usage(format!(
            "profile takes {} invariants, matrix provides {}",
            profile.arity(),
            invs.len()
        )));
    }
    let bases: Vec<Complex64> = invs.iter().map(|u| u.project_body()).collect();
    let nils: Vec<Mv> = invs.iter().map(|u| u.soul()).collect();
    nilpotent_expand(profile, &bases, &nils, s.pairs())
}

/// Same for a supervector: single invariant, the squared length.
pub fn invariant_superfunction_vector(
    profile: &dyn InvariantProfile,
    v: &SuperVector,
) -> Result<Mv> {
    if profile.arity() != 1 {
        return Err(Error::Usage("vector profiles take one invariant".into()));
    }
    let inv = v.length_invariant_preset();
    let base = [inv.project_body()];
    let nil = [inv.soul()];
    nilpotent_expand(profile, &base, &nil, v.pairs().max(1))
}

/// Eigenvalue evaluation point of a supermatrix family.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EigenvaluePoint {
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub psi: f64,
}

impl EigenvaluePoint {
    /// Check all pairwise gaps within each block against the floor.
    pub fn check_gaps(&self, floor: f64) -> Result<()> {
        for block in [&self.s1, &self.s2] {
            for i in 0..block.len() {
                for j in (i + 1)..block.len() {
                    if (block[i] - block[j]).abs() < floor {
                        return Err(Error::DegeneratePoint {
                            denominator: "eigenvalue gap".into(),
                            value: (block[i] - block[j]).abs(),
                            point: format!("{:?} {:?}", self.s1, self.s2),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Roster-ordered coordinates (boson block then fermion block).
    pub fn coords(&self) -> Vec<f64> {
        self.s1.iter().chain(self.s2.iter()).copied().collect()
    }
}

/// Serialisable description of a radial supermatrix (block-structured; the
/// odd blocks are implied by the symmetry class).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuperMatrixSpec {
    pub symmetry: String,
    pub k1: usize,
    pub k2: usize,
    pub psi: f64,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
}

impl SuperMatrixSpec {
    pub fn symmetry_enum(&self) -> Result<MatrixSymmetry> {
        match self.symmetry.as_str() {
            "u" => Ok(MatrixSymmetry::U {
                k1: self.k1,
                k2: self.k2,
            }),
            "uosp+" => Ok(MatrixSymmetry::UOSpPlus {
                k1: self.k1,
                k2: self.k2,
            }),
            "uosp-" => Ok(MatrixSymmetry::UOSpMinus {
                k1: self.k1,
                k2: self.k2,
            }),
            other => Err(Error::Config(format!("unknown symmetry `{other}`"))),
        }
    }

    pub fn build(&self) -> Result<SuperMatrix> {
        let sym = self.symmetry_enum()?;
        SuperMatrix::from_radial(sym, &self.s1, &self.s2, WickRotation::new(self.psi)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::{compose_primitive, Jet, SmoothPrimitive};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn wick(psi: f64) -> WickRotation {
        WickRotation::new(psi).unwrap()
    }

    #[test]
    fn real_vector_length_invariant() {
        let v = SuperVector::new(VectorFlavor::Real, 1, 1, vec![1.0]).unwrap();
        let inv = v
            .length_invariant(&Metric::preset(VectorFlavor::Real, 1, 1))
            .unwrap();
        assert_eq!(inv.project_body(), Complex64::new(1.0, 0.0));
        assert_eq!(inv.coefficient(0b11), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn zero_vector_invariant_is_nilpotent_only() {
        let v = SuperVector::new(VectorFlavor::Real, 1, 1, vec![0.0]).unwrap();
        assert_eq!(
            v.length_invariant_preset().project_body(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn complex_vector_length_invariant() {
        // p = L = 1: |z|^2 + alpha* alpha
        let v = SuperVector::new(VectorFlavor::Complex, 1, 1, vec![0.6, 0.8]).unwrap();
        let inv = v.length_invariant_preset();
        assert!((inv.project_body().re - 1.0).abs() < 1e-15);
        assert_eq!(inv.coefficient(0b11), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn metric_mismatch_is_rejected() {
        let v = SuperVector::new(VectorFlavor::Complex, 1, 1, vec![0.6, 0.8]).unwrap();
        let wrong = Metric::preset(VectorFlavor::Real, 2, 1);
        assert!(v.length_invariant(&wrong).is_err());
    }

    #[test]
    fn body_rotation_leaves_invariant_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let body: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v = SuperVector::new(VectorFlavor::Real, 4, 2, body.clone()).unwrap();
        let before = v.length_invariant_preset();
        let mut rotated = body;
        for _ in 0..5 {
            let i = rng.gen_range(0..4);
            let mut j = rng.gen_range(0..4);
            if j == i {
                j = (j + 1) % 4;
            }
            let t = rng.gen_range(0.0..2.0 * PI);
            let (xi, xj) = (rotated[i], rotated[j]);
            rotated[i] = t.cos() * xi - t.sin() * xj;
            rotated[j] = t.sin() * xi + t.cos() * xj;
        }
        let v2 = SuperVector::new(VectorFlavor::Real, 4, 2, rotated).unwrap();
        let after = v2.length_invariant_preset();
        assert!(
            (before.project_body() - after.project_body()).norm() < 1e-12,
            "rotation must preserve the body norm"
        );
        assert_eq!(format!("{:?}", before.soul()), format!("{:?}", after.soul()));
    }

    #[test]
    fn supertrace_of_diagonal_u11() {
        let s = SuperMatrix::from_radial(
            MatrixSymmetry::U { k1: 1, k2: 1 },
            &[1.5],
            &[0.7],
            wick(FRAC_PI_2),
        )
        .unwrap();
        let phase = Complex64::from_polar(1.0, FRAC_PI_2);
        let str1 = s.supertrace().unwrap().project_body();
        assert!((str1 - (Complex64::new(1.5, 0.0) - phase * 0.7)).norm() < 1e-14);
        let str2 = s.supertrace_power(2).unwrap().project_body();
        let expect = Complex64::new(1.5 * 1.5, 0.0) - (phase * 0.7).powu(2);
        assert!((str2 - expect).norm() < 1e-14);
    }

    #[test]
    fn supertrace_power_two_grassmann_term_matches_hand_expansion() {
        // U(1/1): Str S^2 = s1^2 - (w s2)^2 + 2 w eta* eta
        let psi = 1.1;
        let s = SuperMatrix::from_radial(
            MatrixSymmetry::U { k1: 1, k2: 1 },
            &[0.9],
            &[-0.4],
            wick(psi),
        )
        .unwrap();
        let w = Complex64::from_polar(1.0, psi);
        let str2 = s.supertrace_power(2).unwrap();
        let body = Complex64::new(0.81, 0.0) - (w * (-0.4)).powu(2);
        assert!((str2.project_body() - body).norm() < 1e-14);
        assert!((str2.coefficient(0b11) - 2.0 * w).norm() < 1e-14);
        assert!(str2.is_even());
    }

    #[test]
    fn supertrace_cyclicity_on_random_graded_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let sym = MatrixSymmetry::U { k1: 2, k2: 1 };
        let pairs = 3;
        let dim = sym.dim();
        let bd = 2;
        let mut rand_graded = |rng: &mut ChaCha8Rng| {
            let entries: Vec<Mv> = (0..dim * dim)
                .map(|i| {
                    let (r, c) = (i / dim, i % dim);
                    let odd = (r < bd) != (c < bd);
                    let mut mv = Mv::zero(pairs);
                    for mask in 0..(1u32 << (2 * pairs)) {
                        let is_odd_mask = mask.count_ones() % 2 == 1;
                        if is_odd_mask == odd && rng.gen_bool(0.3) {
                            mv = mv.add(&Mv::monomial(
                                pairs,
                                mask,
                                Complex64::new(
                                    rng.gen_range(-1.0..1.0),
                                    rng.gen_range(-1.0..1.0),
                                ),
                            ));
                        }
                    }
                    mv
                })
                .collect();
            SuperMatrix::from_entries(sym, wick(FRAC_PI_2), pairs, entries).unwrap()
        };
        for _ in 0..5 {
            let a = rand_graded(&mut rng);
            let b = rand_graded(&mut rng);
            let ab = a.matmul(&b).unwrap();
            let ba = b.matmul(&a).unwrap();
            let str_of = |m: &[Mv]| {
                let mut s = Mv::zero(pairs);
                for i in 0..dim {
                    let e = &m[i * dim + i];
                    s = if i < bd { s.add(e) } else { s.sub(e) };
                }
                s
            };
            let d = str_of(&ab).sub(&str_of(&ba));
            for (_, c) in d.terms() {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn superdeterminant_diagonal_examples() {
        let psi = FRAC_PI_2;
        let s = SuperMatrix::from_radial(
            MatrixSymmetry::U { k1: 1, k2: 1 },
            &[2.0],
            &[1.0],
            wick(psi),
        )
        .unwrap();
        // kill the odd blocks to make it exactly diagonal
        let diag = SuperMatrix::from_entries(
            s.symmetry,
            s.wick,
            s.pairs(),
            (0..s.dim() * s.dim())
                .map(|i| {
                    if i / s.dim() == i % s.dim() {
                        s.entries[i].clone()
                    } else {
                        Mv::zero(s.pairs())
                    }
                })
                .collect(),
        )
        .unwrap();
        let sdet = diag.superdeterminant().unwrap().project_body();
        let expect = Complex64::new(2.0, 0.0) / Complex64::from_polar(1.0, psi);
        assert!((sdet - expect).norm() < 1e-13);

        // Sdet(1) = 1
        let ident = SuperMatrix::from_entries(
            s.symmetry,
            s.wick,
            s.pairs(),
            identity_mv(2, s.pairs()),
        )
        .unwrap();
        let one = ident.superdeterminant().unwrap();
        assert!((one.project_body() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(one.soul().is_zero());
    }

    #[test]
    fn superdeterminant_inverse_power_against_brute_force() {
        // k1 = k2 = 1, N = 3: Schur form vs the swapped Schur identity
        let psi = 1.2;
        let s = SuperMatrix::from_radial(
            MatrixSymmetry::U { k1: 1, k2: 1 },
            &[1.3],
            &[0.8],
            wick(psi),
        )
        .unwrap();
        let sdet = s.superdeterminant().unwrap();
        let a = s.entry(0, 0).clone();
        let b = s.entry(0, 1).clone();
        let c = s.entry(1, 0).clone();
        let d = s.entry(1, 1).clone();
        let a_inv = even_inverse(&a, s.pairs()).unwrap();
        let alt_den = d.sub(&c.multiply(&a_inv).unwrap().multiply(&b).unwrap());
        let alt = a
            .multiply(&even_inverse(&alt_den, s.pairs()).unwrap())
            .unwrap();
        let diff = sdet.sub(&alt);
        for (_, coeff) in diff.terms() {
            assert!(coeff.norm() < 1e-13);
        }
        // Sdet^{-3} through the even inverse agrees with the inverse of the cube
        let inv = even_inverse(&sdet, s.pairs()).unwrap();
        let p3 = inv.pow(3).unwrap();
        let direct = even_inverse(&sdet.pow(3).unwrap(), s.pairs()).unwrap();
        let diff = p3.sub(&direct);
        for (_, coeff) in diff.terms() {
            assert!(coeff.norm() < 1e-12);
        }
    }

    #[test]
    fn invariant_superfunction_restricts_to_profile() {
        let psi = FRAC_PI_2;
        let s = SuperMatrix::from_radial(
            MatrixSymmetry::U { k1: 1, k2: 1 },
            &[0.4],
            &[-0.9],
            wick(psi),
        )
        .unwrap();
        let profile = (2usize, |args: &[Jet]| {
            compose_primitive(SmoothPrimitive::Exp, &args[1].neg())
        });
        let lifted = invariant_superfunction_matrix(&profile, &s).unwrap();
        let u2 = s.supertrace_power(2).unwrap().project_body();
        let expect = (-u2).exp();
        assert!((lifted.project_body() - expect).norm() < 1e-13);
    }

    #[test]
    fn wick_limit_reduces_to_plain_hermitian_structure() {
        // psi -> 0+ continuation: phases collapse to 1 structurally
        let s = SuperMatrix::from_radial(
            MatrixSymmetry::U { k1: 1, k2: 1 },
            &[1.0],
            &[2.0],
            wick(1e-9),
        )
        .unwrap();
        assert!((s.entry(1, 1).project_body() - Complex64::new(2.0, 0.0)).norm() < 1e-8);
        let off = s.entry(1, 0).coefficient(0b10);
        assert!((off - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn eigenvalue_point_gap_check() {
        let pt = EigenvaluePoint {
            s1: vec![0.5, 0.5 + 1e-8],
            s2: vec![0.0],
            psi: FRAC_PI_2,
        };
        assert!(pt.check_gaps(1e-6).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let spec = SuperMatrixSpec {
            symmetry: "u".into(),
            k1: 2,
            k2: 1,
            psi: FRAC_PI_2,
            s1: vec![0.3, -0.8],
            s2: vec![0.1],
        };
        let json = serde_json::to_string(&spec).unwrap();
        let back: SuperMatrixSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        assert!(back.build().is_ok());
    }
}
