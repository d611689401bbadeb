//! Quadrature for the commuting integrals: Gauss-Hermite on the real line
//! (with explicit reweighting so arbitrary Schwartz integrands can be fed
//! in), composite Gauss-Legendre on finite intervals, and a double-
//! exponential rule as an independent fallback. Values come with an error
//! estimate; a missed target is flagged, never silently returned.

use crate::error::Error;
use crate::parallel;
use crate::Result;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

/// Quadrature scheme selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    GaussHermite,
    TanhSinh,
}

/// Knobs for the commuting-integral engine.
#[derive(Clone, Debug)]
pub struct QuadratureConfig {
    pub scheme: Scheme,
    /// Points per axis (Gauss-Hermite) or base level size (tanh-sinh).
    pub points: usize,
    /// Half-width of the mapped integration box; sized so the Gaussian tail
    /// sits below a tenth of the tolerance.
    pub radius: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::GaussHermite,
            points: 80,
            radius: 9.0,
            abs_tol: 1e-9,
            rel_tol: 1e-9,
        }
    }
}

/// Integral value with its error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: Complex64,
    pub estimate: f64,
    pub converged: bool,
}

impl Quadrature {
    pub fn require(self, target: f64) -> Result<Complex64> {
        if !self.converged || self.estimate > target {
            return Err(Error::AccuracyMiss {
                estimate: self.estimate,
                target,
            });
        }
        Ok(self.value)
    }
}

/// Gauss-Hermite nodes with total weights `w_i e^{x_i^2}`, so that
/// `∫ f(x) dx ≈ Σ W_i f(x_i)` for Schwartz-class `f`.
#[derive(Clone, Debug)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub total_weights: Vec<f64>,
}

static GH_CACHE: Lazy<Mutex<HashMap<usize, GaussHermite>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        let mut cache = GH_CACHE.lock().unwrap();
        cache
            .entry(n)
            .or_insert_with(|| Self::build(n))
            .clone()
    }

    fn build(n: usize) -> Self {
        // Golub-Welsch on the Hermite Jacobi matrix (offdiagonal sqrt(k/2)).
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let off = (k as f64 / 2.0).sqrt();
            jac[(k - 1, k)] = off;
            jac[(k, k - 1)] = off;
        }
        let eig = SymmetricEigen::new(jac);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let x = eig.eigenvalues[i];
                let v0 = eig.eigenvectors[(0, i)];
                let w = std::f64::consts::PI.sqrt() * v0 * v0;
                (x, w * (x * x).exp())
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        GaussHermite {
            nodes: pairs.iter().map(|p| p.0).collect(),
            total_weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// `∫_R f(center + scale·t) scale dt` over the affine map.
    pub fn integrate_map<F: Fn(f64) -> Complex64>(
        &self,
        center: f64,
        scale: f64,
        f: F,
    ) -> Complex64 {
        let mut sum = Complex64::default();
        for (x, w) in self.nodes.iter().zip(&self.total_weights) {
            sum += f(center + scale * x) * *w;
        }
        sum * scale
    }
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

static GL_CACHE: Lazy<Mutex<HashMap<usize, GaussLegendre>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut cache = GL_CACHE.lock().unwrap();
        cache
            .entry(n)
            .or_insert_with(|| Self::build(n))
            .clone()
    }

    fn build(n: usize) -> Self {
        // Newton iteration on P_n with the three-term recurrence.
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        GaussLegendre {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// `∫_a^b f`.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, a: f64, b: f64, f: F) -> Complex64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = Complex64::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += f(mid + half * x) * *w;
        }
        sum * half
    }

    /// Composite rule over explicit panel boundaries.
    pub fn integrate_panels<F: Fn(f64) -> Complex64>(&self, cuts: &[f64], f: F) -> Complex64 {
        let mut sum = Complex64::default();
        for w in cuts.windows(2) {
            sum += self.integrate(w[0], w[1], &f);
        }
        sum
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Double-exponential rule for the whole real line,
/// `x = sinh((π/2) sinh t)`; used as an independent cross-check.
pub fn tanh_sinh_real_line<F: Fn(f64) -> Complex64>(f: F, levels: usize) -> Quadrature {
    let tmax = 3.4f64;
    let mut last = Complex64::default();
    let mut estimate = f64::INFINITY;
    let mut value = Complex64::default();
    for level in 3..=levels {
        let n = 1usize << level;
        let h = 2.0 * tmax / n as f64;
        let mut sum = Complex64::default();
        for i in 0..=n {
            let t = -tmax + i as f64 * h;
            let s = (std::f64::consts::FRAC_PI_2 * t.sinh()).sinh();
            let ds = (std::f64::consts::FRAC_PI_2 * t.sinh()).cosh()
                * std::f64::consts::FRAC_PI_2
                * t.cosh();
            let v = f(s);
            if v.is_finite() {
                sum += v * ds;
            }
        }
        value = sum * h;
        estimate = (value - last).norm();
        last = value;
        if estimate < 1e-13 * value.norm().max(1.0) && level > 4 {
            return Quadrature {
                value,
                estimate,
                converged: true,
            };
        }
    }
    Quadrature {
        value,
        estimate,
        converged: estimate.is_finite(),
    }
}

/// Tensor-product integral of a Schwartz integrand over `R^d` using the
/// reweighted Gauss-Hermite rule with per-axis affine maps. The error
/// estimate compares against a second pass with more points per axis.
pub fn integrate_commuting<F>(dims: usize, maps: &[(f64, f64)], cfg: &QuadratureConfig, f: F) -> Quadrature
where
    F: Fn(&[f64]) -> Complex64 + Sync + Send,
{
    assert_eq!(maps.len(), dims);
    match cfg.scheme {
        Scheme::GaussHermite => {
            let coarse = gh_tensor(dims, maps, cfg.points, &f);
            let fine = gh_tensor(dims, maps, cfg.points + cfg.points / 4 + 8, &f);
            let estimate = (fine - coarse).norm();
            Quadrature {
                value: fine,
                estimate,
                converged: true,
            }
        }
        Scheme::TanhSinh => {
            if dims != 1 {
                let coarse = gh_tensor(dims, maps, cfg.points, &f);
                let fine = gh_tensor(dims, maps, cfg.points + 16, &f);
                return Quadrature {
                    value: fine,
                    estimate: (fine - coarse).norm(),
                    converged: true,
                };
            }
            let (c, s) = maps[0];
            tanh_sinh_real_line(|x| f(&[(x - c) / s + c]), 11)
        }
    }
}

fn gh_tensor<F>(dims: usize, maps: &[(f64, f64)], n: usize, f: &F) -> Complex64
where
    F: Fn(&[f64]) -> Complex64 + Sync + Send,
{
    let rule = GaussHermite::new(n);
    let total: usize = n.pow(dims as u32);
    let re_im: Vec<(f64, f64)> = parallel::map_collect(
        &(0..total).collect::<Vec<_>>(),
        |&flat| {
            let mut idx = flat;
            let mut point = vec![0.0; dims];
            let mut weight = 1.0;
            for d in 0..dims {
                let i = idx % n;
                idx /= n;
                let (c, s) = maps[d];
                point[d] = c + s * rule.nodes[i];
                weight *= rule.total_weights[i] * s;
            }
            let v = f(&point) * weight;
            (v.re, v.im)
        },
    );
    let mut sum = Complex64::default();
    for (re, im) in re_im {
        sum += Complex64::new(re, im);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_integral_to_machine_precision() {
        let gh = GaussHermite::new(60);
        let v = gh.integrate_map(0.0, 1.0, |x| Complex64::new((-x * x).exp(), 0.0));
        assert!((v.re - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn shifted_scaled_gaussian() {
        let gh = GaussHermite::new(80);
        // ∫ exp(-2 (x-1.3)^2) = sqrt(pi/2)
        let v = gh.integrate_map(1.3, 1.0 / 2.0f64.sqrt(), |x| {
            Complex64::new((-2.0 * (x - 1.3) * (x - 1.3)).exp(), 0.0)
        });
        assert!((v.re - (PI / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_gaussian() {
        let cfg = QuadratureConfig {
            points: 40,
            ..Default::default()
        };
        let q = integrate_commuting(2, &[(0.0, 1.0), (0.0, 1.0)], &cfg, |p| {
            Complex64::new((-p[0] * p[0] - p[1] * p[1]).exp(), 0.0)
        });
        assert!((q.value.re - PI).abs() < 1e-11);
        assert!(q.estimate < 1e-10);
    }

    #[test]
    fn tanh_sinh_agrees_with_hermite() {
        let q = tanh_sinh_real_line(
            |x| Complex64::new((-x * x).exp() * (1.0 + x * x), 0.0),
            11,
        );
        // ∫ (1+x^2) e^{-x^2} = (3/2) sqrt(pi)
        assert!((q.value.re - 1.5 * PI.sqrt()).abs() < 1e-10, "{q:?}");
        assert!(q.converged);
    }

    #[test]
    fn legendre_panels() {
        let gl = GaussLegendre::new(24);
        let v = gl.integrate_panels(&[0.0, 1.0, 3.0], |x| Complex64::new(x.exp(), 0.0));
        assert!((v.re - (3.0f64.exp() - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn accuracy_miss_is_flagged() {
        let q = Quadrature {
            value: Complex64::new(1.0, 0.0),
            estimate: 1e-3,
            converged: true,
        };
        assert!(q.require(1e-6).is_err());
    }
}
