//! Constructors for the radial operators: the generic binomial-sum reduction
//! of Berezin integration, the closed vector forms, the supermatrix families,
//! their first-order factorisation, and the Hamiltonian forms.

use super::{binomial_operator_sum, RadialOperator};
use crate::ring::GaussianRational;
use crate::symbolic::{Poly, RationalFunction};
use crate::Result;
use std::sync::Arc;

/// Vector-space flavors: which division algebra the supervector lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VectorFlavor {
    Real,
    Complex,
    Quaternion,
}

impl VectorFlavor {
    /// Real commuting dimensions contributed by `p` even entries.
    pub fn commuting_dims(&self, p: usize) -> usize {
        match self {
            VectorFlavor::Real => p,
            VectorFlavor::Complex => 2 * p,
            VectorFlavor::Quaternion => 4 * p,
        }
    }

    /// Grassmann pairs contributed by `l` odd entries.
    pub fn pairs(&self, l: usize) -> usize {
        match self {
            VectorFlavor::Quaternion => 2 * l,
            _ => l,
        }
    }

    /// Metric weight `g` on each commuting coordinate.
    pub fn g_weight(&self) -> i64 {
        match self {
            VectorFlavor::Quaternion => 2,
            _ => 1,
        }
    }

    /// Coefficient of each `eta* eta` bilinear inside the length invariant.
    pub fn invariant_pair_coeff(&self) -> f64 {
        match self {
            VectorFlavor::Real => 2.0,
            _ => 1.0,
        }
    }

    /// Per-pair shift `c/h` entering the radial superspace Laplacian.
    fn per_pair_shift(&self) -> i64 {
        match self {
            VectorFlavor::Quaternion => 1,
            _ => 2,
        }
    }

    /// Product of the metric weights `h_m` over all pairs, as an exact
    /// rational (phase-free for the vector flavors).
    fn h_product(&self, pairs: usize) -> GaussianRational {
        match self {
            VectorFlavor::Complex => GaussianRational::from_ratio(1, 1i64 << pairs),
            _ => GaussianRational::from_int(1),
        }
    }
}

pub fn vector_roster() -> Arc<Vec<String>> {
    Arc::new(vec!["r".to_string()])
}

pub fn matrix_roster(k1: usize, k2: usize) -> Arc<Vec<String>> {
    let mut names = Vec::with_capacity(k1 + k2);
    for n in 1..=k1 {
        names.push(format!("s{n}1"));
    }
    for m in 1..=k2 {
        names.push(format!("s{m}2"));
    }
    Arc::new(names)
}

fn rf_int(n: usize, v: i64) -> RationalFunction {
    RationalFunction::from_poly(Poly::int(n, v))
}

fn rf_ratio(n: usize, p: i64, q: i64) -> RationalFunction {
    RationalFunction::new(Poly::int(n, p), Poly::int(n, q))
}

/// `1 / (x_a - ω^k x_b)`.
fn rf_inv_pair(n: usize, a: usize, b: usize, omega_pow: i32) -> RationalFunction {
    let den = Poly::var(n, a).sub(&Poly::omega(n, omega_pow).mul(&Poly::var(n, b)));
    RationalFunction::new(Poly::one(n), den)
}

/// `numerator / (x_a - x_b)`.
fn rf_over_diff(n: usize, num: Poly, a: usize, b: usize) -> RationalFunction {
    RationalFunction::new(num, Poly::var(n, a).sub(&Poly::var(n, b)))
}

fn unit_idx(n: usize, var: usize, order: u8) -> Vec<u8> {
    let mut idx = vec![0u8; n];
    idx[var] = order;
    idx
}

/// Generic reduction operator: `pref · Σ_n binom(L,n) Δ_C^{L-n} (-Δ_{S,r})^n`
/// with the `1/(L! (4π)^L)` measure constant folded in.
pub fn build_d_cs(
    delta_c: &RadialOperator,
    delta_s_r: &RadialOperator,
    pairs: usize,
    h_product: RationalFunction,
) -> Result<RadialOperator> {
    let n = delta_c.nvars();
    // A = Δ_C, B = Δ_C - Δ_{S,r} so that (B - A)^n = (-Δ_{S,r})^n
    let b = delta_c.sub(delta_s_r);
    let sum = binomial_operator_sum(delta_c, &b, pairs);
    let mut fact = 1i64;
    for k in 2..=pairs as i64 {
        fact *= k;
    }
    let measure = RationalFunction::new(
        Poly::pi_pow(n, -(pairs as i32)),
        Poly::int(n, fact * (1i64 << (2 * pairs))),
    );
    Ok(sum.scale_rf(&measure.mul(&h_product)))
}

/// Radial part of the flat Laplacian for a vector flavor with `p` even
/// entries: `(1/g)(∂_r² + (d-1)/r ∂_r)`.
pub fn vector_delta_c(flavor: VectorFlavor, p: usize) -> RadialOperator {
    let names = vector_roster();
    let d = flavor.commuting_dims(p) as i64;
    let g = flavor.g_weight();
    let mut op = RadialOperator::from_term(names.clone(), vec![2], rf_ratio(1, 1, g));
    if d != 1 {
        op = op.add(&RadialOperator::from_term(
            names,
            vec![1],
            RationalFunction::new(
                Poly::int(1, d - 1),
                Poly::int(1, g).mul(&Poly::var(1, 0)),
            ),
        ));
    }
    op
}

/// Radial part of the superspace Laplacian: the flat part minus the
/// Grassmann-sector shift `(Σ c_m/h_m)(1/r)∂_r`.
pub fn vector_delta_s_r(flavor: VectorFlavor, p: usize, l: usize) -> RadialOperator {
    let names = vector_roster();
    let shift = flavor.per_pair_shift() * flavor.pairs(l) as i64;
    vector_delta_c(flavor, p).sub(&RadialOperator::from_term(
        names,
        vec![1],
        RationalFunction::new(Poly::int(1, shift), Poly::var(1, 0)),
    ))
}

/// Full reduction operator for a supervector flavor.
pub fn build_vector_d_cs(flavor: VectorFlavor, p: usize, l: usize) -> Result<RadialOperator> {
    let pairs = flavor.pairs(l);
    let dc = vector_delta_c(flavor, p);
    let ds = vector_delta_s_r(flavor, p, l);
    build_d_cs(
        &dc,
        &ds,
        pairs,
        RationalFunction::from_poly(Poly::constant(1, flavor.h_product(pairs))),
    )
}

/// Closed-form vector operator: a power of `(1/r)∂_r` with the flavor's
/// measure constant.
pub fn closed_vector_operator(flavor: VectorFlavor, l: usize) -> RadialOperator {
    let t = RadialOperator::from_term(
        vector_roster(),
        vec![1],
        RationalFunction::new(Poly::one(1), Poly::var(1, 0)),
    );
    let (pow, inv4): (usize, bool) = match flavor {
        VectorFlavor::Real => (l, false),
        VectorFlavor::Complex => (l, true),
        VectorFlavor::Quaternion => (2 * l, true),
    };
    let tl = t.compose_pow(pow).expect("single-variable composition");
    let denom = if inv4 { 1i64 << (2 * pow) } else { 1i64 << pow };
    let pref = RationalFunction::new(Poly::pi_pow(1, -(pow as i32)), Poly::int(1, denom));
    tl.scale_rf(&pref)
}

/// Supermatrix symmetry families, labelled by the Dyson index of the
/// boson-boson block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixFamily {
    /// Unitary: both blocks Hermitian.
    U,
    /// Boson block real symmetric, fermion block quaternion self-adjoint.
    UOSpPlus,
    /// Boson block quaternion self-adjoint, fermion block real symmetric.
    UOSpMinus,
}

impl MatrixFamily {
    pub fn beta(&self) -> usize {
        match self {
            MatrixFamily::U => 2,
            MatrixFamily::UOSpPlus => 1,
            MatrixFamily::UOSpMinus => 4,
        }
    }
}

fn gamma(beta: usize) -> i64 {
    if beta == 4 {
        2
    } else {
        1
    }
}

/// Radial Laplacian on one ordinary eigenvalue block.
/// beta=1: `Σ∂² + Σ 1/(s_j-s_m) ∂_j`; beta=2 doubles the interaction;
/// beta=4: `(1/2)Σ∂² + Σ 2/(s_j-s_m) ∂_j`.
fn block_laplacian(
    names: Arc<Vec<String>>,
    vars: &[usize],
    beta: usize,
) -> RadialOperator {
    let n = names.len();
    let (lead_num, lead_den, inter) = match beta {
        1 => (1, 1, 1),
        2 => (1, 1, 2),
        4 => (1, 2, 2),
        _ => panic!("unsupported block beta {beta}"),
    };
    let mut op = RadialOperator::zero(names.clone());
    for &j in vars {
        op = op.add(&RadialOperator::from_term(
            names.clone(),
            unit_idx(n, j, 2),
            rf_ratio(n, lead_num, lead_den),
        ));
        for &m in vars {
            if m == j {
                continue;
            }
            op = op.add(&RadialOperator::from_term(
                names.clone(),
                unit_idx(n, j, 1),
                rf_over_diff(n, Poly::int(n, inter), j, m),
            ));
        }
    }
    op
}

/// Flat (radial) commuting operator `Δ_C` of a supermatrix family:
/// boson-block Laplacian minus `ω^{-2}` times the fermion-block one.
pub fn matrix_delta_c(family: MatrixFamily, k1: usize, k2: usize) -> RadialOperator {
    let names = matrix_roster(k1, k2);
    let n = names.len();
    let b1: Vec<usize> = (0..k1).collect();
    let b2: Vec<usize> = (k1..k1 + k2).collect();
    let (beta1, beta2) = match family {
        MatrixFamily::U => (2, 2),
        MatrixFamily::UOSpPlus => (1, 4),
        MatrixFamily::UOSpMinus => (4, 1),
    };
    let l1 = block_laplacian(names.clone(), &b1, beta1);
    let l2 = block_laplacian(names.clone(), &b2, beta2);
    let rot = RationalFunction::from_poly(Poly::omega(n, -2));
    l1.sub(&l2.scale_rf(&rot))
}

/// The first-order mixed part `Δ_C - Δ_{S,r}`: a sum over boson-fermion
/// eigenvalue pairings of `(a ∂_{n1} + b ω^{-1} ∂_{m2}) / (s_{n1} - ω s_{m2})`
/// with `(a, b) = (2, 2)` for the unitary family and `(2, 1)` for UOSp+.
pub fn matrix_mixed_part(family: MatrixFamily, k1: usize, k2: usize) -> RadialOperator {
    let names = matrix_roster(k1, k2);
    let n = names.len();
    let (a, b) = match family {
        MatrixFamily::U => (2i64, 2i64),
        MatrixFamily::UOSpPlus => (2, 1),
        MatrixFamily::UOSpMinus => panic!("UOSp- operators come from the duality substitution"),
    };
    let mut op = RadialOperator::zero(names.clone());
    for n1 in 0..k1 {
        for m2 in k1..k1 + k2 {
            let inv = rf_inv_pair(n, n1, m2, 1);
            op = op.add(&RadialOperator::from_term(
                names.clone(),
                unit_idx(n, n1, 1),
                inv.scale(&GaussianRational::from_int(a)),
            ));
            let phase = RationalFunction::from_poly(Poly::omega(n, -1));
            op = op.add(&RadialOperator::from_term(
                names.clone(),
                unit_idx(n, m2, 1),
                inv.mul(&phase).scale(&GaussianRational::from_int(b)),
            ));
        }
    }
    op
}

/// Radial superspace Laplacian of the family.
pub fn matrix_delta_s_r(family: MatrixFamily, k1: usize, k2: usize) -> RadialOperator {
    matrix_delta_c(family, k1, k2).sub(&matrix_mixed_part(family, k1, k2))
}

fn matrix_prefactor(nvars: usize, pairs: usize) -> RationalFunction {
    RationalFunction::from_poly(Poly::omega(nvars, pairs as i32))
}

/// Reduction operator for unitary-symmetric supermatrices.
pub fn build_matrix_operator_22(k1: usize, k2: usize) -> Result<RadialOperator> {
    let pairs = k1 * k2;
    let dc = matrix_delta_c(MatrixFamily::U, k1, k2);
    let ds = matrix_delta_s_r(MatrixFamily::U, k1, k2);
    let pref = matrix_prefactor(k1 + k2, pairs);
    build_d_cs(&dc, &ds, pairs, pref)
}

/// Reduction operator for UOSp+-symmetric supermatrices.
pub fn build_matrix_operator_14(k1: usize, k2: usize) -> Result<RadialOperator> {
    let pairs = k1 * k2;
    let dc = matrix_delta_c(MatrixFamily::UOSpPlus, k1, k2);
    let ds = matrix_delta_s_r(MatrixFamily::UOSpPlus, k1, k2);
    let pref = matrix_prefactor(k1 + k2, pairs);
    build_d_cs(&dc, &ds, pairs, pref)
}

/// Reduction operator for UOSp--symmetric supermatrices, obtained from the
/// UOSp+ one through the eigenvalue duality `s~ = diag(-ω s_2, -s_1)` times
/// `(-1)^{k1 k2}`.
pub fn build_matrix_operator_41(k1: usize, k2: usize) -> Result<RadialOperator> {
    // tilde system: UOSp+ with (k2 bosons, k1 fermions)
    let tilde = build_matrix_operator_14(k2, k1)?;
    let names = matrix_roster(k1, k2);
    // tilde boson m (0..k2)  -> -ω s_{m2}   (slot k1 + m)
    // tilde fermion n (0..k1) -> -ω^{-1} s_{n1} (slot n)
    let mut map = Vec::with_capacity(k1 + k2);
    for m in 0..k2 {
        map.push((k1 + m, true, 1));
    }
    for n in 0..k1 {
        map.push((n, true, -1));
    }
    let substituted = tilde.substitute_vars(names.clone(), &map);
    let sign = if (k1 * k2) % 2 == 1 { -1 } else { 1 };
    Ok(substituted.scale_rf(&rf_int(k1 + k2, sign)))
}

// ---------------------------------------------------------------------------
// printed closed forms, used as golden references in tests
// ---------------------------------------------------------------------------

/// `(1/2π) (1/r) ∂_r`.
pub fn printed_vector_l1() -> RadialOperator {
    closed_vector_operator(VectorFlavor::Real, 1)
}

/// `(1/2π)² ((1/r²)∂_r² - (1/r³)∂_r)`.
pub fn printed_vector_l2() -> RadialOperator {
    let names = vector_roster();
    let r = Poly::var(1, 0);
    let pi2 = Poly::pi_pow(1, -2);
    let c2 = RationalFunction::new(pi2.clone(), Poly::int(1, 4).mul(&r.mul(&r)));
    let c1 = RationalFunction::new(
        pi2.neg(),
        Poly::int(1, 4).mul(&r.mul(&r).mul(&r)),
    );
    RadialOperator::from_term(names.clone(), vec![2], c2)
        .add(&RadialOperator::from_term(names, vec![1], c1))
}

/// `(ω/2π) (s_1 - ω s_2)^{-1} (∂_1 + ω^{-1} ∂_2)`.
pub fn printed_u11() -> RadialOperator {
    let names = matrix_roster(1, 1);
    let n = 2;
    let inv = rf_inv_pair(n, 0, 1, 1);
    let pref = RationalFunction::new(
        Poly::omega(n, 1).mul(&Poly::pi_pow(n, -1)),
        Poly::int(n, 2),
    );
    let d1 = RadialOperator::from_term(names.clone(), vec![1, 0], inv.clone());
    let d2 = RadialOperator::from_term(
        names,
        vec![0, 1],
        inv.mul(&RationalFunction::from_poly(Poly::omega(n, -1))),
    );
    d1.add(&d2).scale_rf(&pref)
}

/// `(ω/4π) (s_1 - ω s_2)^{-1} (2 ∂_1 + ω^{-1} ∂_2)`.
pub fn printed_uosp_plus_11() -> RadialOperator {
    let names = matrix_roster(1, 1);
    let n = 2;
    let inv = rf_inv_pair(n, 0, 1, 1);
    let pref = RationalFunction::new(
        Poly::omega(n, 1).mul(&Poly::pi_pow(n, -1)),
        Poly::int(n, 4),
    );
    let d1 = RadialOperator::from_term(
        names.clone(),
        vec![1, 0],
        inv.scale(&GaussianRational::from_int(2)),
    );
    let d2 = RadialOperator::from_term(
        names,
        vec![0, 1],
        inv.mul(&RationalFunction::from_poly(Poly::omega(n, -1))),
    );
    d1.add(&d2).scale_rf(&pref)
}

/// The two-term bracketed UOSp+ operator for two boson and one fermion
/// eigenvalues.
pub fn printed_uosp_plus_21() -> RadialOperator {
    let names = matrix_roster(2, 1);
    let n = 3;
    // F_j = 2 ∂_{sj1} + ω^{-1} ∂_{s2}
    let factor = |j: usize| {
        RadialOperator::from_term(
            names.clone(),
            unit_idx(n, j, 1),
            rf_int(n, 2),
        )
        .add(&RadialOperator::from_term(
            names.clone(),
            unit_idx(n, 2, 1),
            RationalFunction::from_poly(Poly::omega(n, -1)),
        ))
    };
    let mult = |j: usize| {
        RadialOperator::from_term(names.clone(), vec![0; n], rf_inv_pair(n, j, 2, 1))
    };
    let term_a = factor(0)
        .compose(&mult(1))
        .unwrap()
        .compose(&factor(1))
        .unwrap();
    let term_b = factor(1)
        .compose(&mult(0))
        .unwrap()
        .compose(&factor(0))
        .unwrap();
    let bracket = term_a.sub(&term_b);
    let pref = RationalFunction::new(
        Poly::omega(n, 2).mul(&Poly::pi_pow(n, -2)),
        Poly::int(n, 4).mul(&Poly::var(n, 0).sub(&Poly::var(n, 1))),
    );
    bracket.scale_rf(&pref)
}

// ---------------------------------------------------------------------------
// first-order factor structure and Hamiltonian forms
// ---------------------------------------------------------------------------

/// `Str ∂²/∂s²`: `γ(β) Σ ∂²_{n1} - γ(4/β) ω^{-2} Σ ∂²_{m2}`.
pub fn str_dd(family: MatrixFamily, k1: usize, k2: usize) -> RadialOperator {
    let names = matrix_roster(k1, k2);
    let n = k1 + k2;
    let beta = family.beta();
    let g1 = gamma(beta);
    let g2 = gamma(4 / beta);
    let mut op = RadialOperator::zero(names.clone());
    for j in 0..k1 {
        op = op.add(&RadialOperator::from_term(
            names.clone(),
            unit_idx(n, j, 2),
            rf_int(n, g1),
        ));
    }
    for j in k1..k1 + k2 {
        op = op.add(&RadialOperator::from_term(
            names.clone(),
            unit_idx(n, j, 2),
            RationalFunction::from_poly(Poly::omega(n, -2).scale(&GaussianRational::from_int(-g2))),
        ));
    }
    op
}

/// Every first-order factor of the family, normalised so each one satisfies
/// the commutator identity `[Str ∂², D] = -2 D²` with [`str_dd`]:
/// boson-boson pairs carry `γ(β)`, fermion-fermion pairs carry
/// `-γ(4/β) ω^{-2}`, and mixed pairs read
/// `(γ(β) ∂_{n1} + γ(4/β) ω^{-1} ∂_{m2}) / (s_{n1} - ω s_{m2})`.
pub fn first_order_factors(family: MatrixFamily, k1: usize, k2: usize) -> Vec<RadialOperator> {
    let names = matrix_roster(k1, k2);
    let n = k1 + k2;
    let beta = family.beta();
    let g1 = gamma(beta);
    let g2 = gamma(4 / beta);
    let mut out = Vec::new();
    // same-block, boson-boson
    for a in 0..k1 {
        for b in (a + 1)..k1 {
            let inv = rf_over_diff(n, Poly::int(n, g1), a, b);
            out.push(
                RadialOperator::from_term(names.clone(), unit_idx(n, a, 1), inv.clone()).add(
                    &RadialOperator::from_term(names.clone(), unit_idx(n, b, 1), inv.neg()),
                ),
            );
        }
    }
    // same-block, fermion-fermion
    for a in k1..k1 + k2 {
        for b in (a + 1)..k1 + k2 {
            let w = Poly::omega(n, -2).scale(&GaussianRational::from_int(-g2));
            let inv = rf_over_diff(n, w, a, b);
            out.push(
                RadialOperator::from_term(names.clone(), unit_idx(n, a, 1), inv.clone()).add(
                    &RadialOperator::from_term(names.clone(), unit_idx(n, b, 1), inv.neg()),
                ),
            );
        }
    }
    // mixed
    for a in 0..k1 {
        for b in k1..k1 + k2 {
            let inv = rf_inv_pair(n, a, b, 1);
            out.push(
                RadialOperator::from_term(
                    names.clone(),
                    unit_idx(n, a, 1),
                    inv.scale(&GaussianRational::from_int(g1)),
                )
                .add(&RadialOperator::from_term(
                    names.clone(),
                    unit_idx(n, b, 1),
                    inv.mul(&RationalFunction::from_poly(
                        Poly::omega(n, -1).scale(&GaussianRational::from_int(g2)),
                    )),
                )),
            );
        }
    }
    out
}

/// Hamiltonian form of the beta=1 block Laplacian:
/// `Σ∂² + (1/2) Σ_{m<n} (s_n - s_m)^{-2}`.
pub fn hamiltonian_1(names: Arc<Vec<String>>, vars: &[usize]) -> RadialOperator {
    let n = names.len();
    let mut op = RadialOperator::zero(names.clone());
    for &j in vars {
        op = op.add(&RadialOperator::from_term(
            names.clone(),
            unit_idx(n, j, 2),
            rf_int(n, 1),
        ));
    }
    for (i, &a) in vars.iter().enumerate() {
        for &b in &vars[i + 1..] {
            let diff = Poly::var(n, a).sub(&Poly::var(n, b));
            op = op.add(&RadialOperator::from_term(
                names.clone(),
                vec![0; n],
                RationalFunction::new(Poly::one(n), diff.mul(&diff).mul(&Poly::int(n, 2))),
            ));
        }
    }
    op
}

/// Hamiltonian form of the beta=4 block Laplacian:
/// `(1/2)Σ∂² - 2 Σ_{m<n} (s_n - s_m)^{-2}`.
pub fn hamiltonian_4(names: Arc<Vec<String>>, vars: &[usize]) -> RadialOperator {
    let n = names.len();
    let mut op = RadialOperator::zero(names.clone());
    for &j in vars {
        op = op.add(&RadialOperator::from_term(
            names.clone(),
            unit_idx(n, j, 2),
            rf_ratio(n, 1, 2),
        ));
    }
    for (i, &a) in vars.iter().enumerate() {
        for &b in &vars[i + 1..] {
            let diff = Poly::var(n, a).sub(&Poly::var(n, b));
            op = op.add(&RadialOperator::from_term(
                names.clone(),
                vec![0; n],
                RationalFunction::new(Poly::int(n, -2), diff.mul(&diff)),
            ));
        }
    }
    op
}

/// Hamiltonian form of the UOSp+ superspace Laplacian:
/// `H^{(1)}_{s1} - ω^{-2} H^{(4)}_{s2} - Σ (s_{m1} - ω s_{n2})^{-2}`.
pub fn hamiltonian_14(k1: usize, k2: usize) -> RadialOperator {
    let names = matrix_roster(k1, k2);
    let n = k1 + k2;
    let b1: Vec<usize> = (0..k1).collect();
    let b2: Vec<usize> = (k1..k1 + k2).collect();
    let mut op = hamiltonian_1(names.clone(), &b1).sub(
        &hamiltonian_4(names.clone(), &b2)
            .scale_rf(&RationalFunction::from_poly(Poly::omega(n, -2))),
    );
    for a in 0..k1 {
        for b in k1..k1 + k2 {
            let w = Poly::var(n, a).sub(&Poly::omega(n, 1).mul(&Poly::var(n, b)));
            op = op.add(&RadialOperator::from_term(
                names.clone(),
                vec![0; n],
                RationalFunction::new(Poly::int(n, -1), w.mul(&w)),
            ));
        }
    }
    op
}

/// Hamiltonian form of the unitary superspace Laplacian:
/// the plain `Str ∂²` (no interaction terms survive for beta = 2 blocks of
/// the sizes used here; the general conjugation is exercised through
/// [`str_dd`] in tests).
pub fn berezinian_22(k1: usize, k2: usize) -> RationalFunction {
    // B^{(2,2)} = Δ²(s1) Δ²(ω s2) / V², as an exact rational function
    let n = k1 + k2;
    let mut num = Poly::one(n);
    for a in 0..k1 {
        for b in (a + 1)..k1 {
            let d = Poly::var(n, a).sub(&Poly::var(n, b));
            num = num.mul(&d).mul(&d);
        }
    }
    for a in k1..k1 + k2 {
        for b in (a + 1)..k1 + k2 {
            let d = Poly::omega(n, 1).mul(&Poly::var(n, a).sub(&Poly::var(n, b)));
            num = num.mul(&d).mul(&d);
        }
    }
    let mut den = Poly::one(n);
    for a in 0..k1 {
        for b in k1..k1 + k2 {
            let d = Poly::var(n, a).sub(&Poly::omega(n, 1).mul(&Poly::var(n, b)));
            den = den.mul(&d).mul(&d);
        }
    }
    RationalFunction::new(num, den)
}

/// `B^{(1,4)} = Δ(s1) Δ⁴(ω s2) / V²`.
pub fn berezinian_14(k1: usize, k2: usize) -> RationalFunction {
    let n = k1 + k2;
    let mut num = Poly::one(n);
    for a in 0..k1 {
        for b in (a + 1)..k1 {
            num = num.mul(&Poly::var(n, a).sub(&Poly::var(n, b)));
        }
    }
    for a in k1..k1 + k2 {
        for b in (a + 1)..k1 + k2 {
            let d = Poly::omega(n, 1).mul(&Poly::var(n, a).sub(&Poly::var(n, b)));
            let d2 = d.mul(&d);
            num = num.mul(&d2).mul(&d2);
        }
    }
    let mut den = Poly::one(n);
    for a in 0..k1 {
        for b in k1..k1 + k2 {
            let d = Poly::var(n, a).sub(&Poly::omega(n, 1).mul(&Poly::var(n, b)));
            den = den.mul(&d).mul(&d);
        }
    }
    RationalFunction::new(num, den)
}
