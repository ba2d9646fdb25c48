//! Orthogonal polynomials, ball volumes, and quadrature primitives.
//!
//! Everything downstream (profile expansions, Radon and cosine transforms,
//! Berg kernels) reduces to weighted one-dimensional integrals against the
//! weight (1 - t^2)^((n-3)/2) and to the dimension-n Legendre polynomials
//! P_k^n, i.e. Gegenbauer polynomials normalized so that P_k^n(1) = 1.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use statrs::function::gamma::gamma;
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// Volume of the i-dimensional Euclidean unit ball.
pub fn kappa(i: usize) -> f64 {
    kappa_ext(i as i64).expect("nonnegative index is always valid")
}

/// Kappa extended by Gamma continuation to index -1 (kappa_{-1} = 1/pi).
///
/// Indices below -1 hit a Gamma pole and are rejected rather than silently
/// evaluated to zero.
pub fn kappa_ext(i: i64) -> Result<f64> {
    if i < -1 {
        return Err(Error::KappaRange(i));
    }
    let x = i as f64;
    Ok(std::f64::consts::PI.powf(x / 2.0) / gamma(x / 2.0 + 1.0))
}

/// Surface area of the j-sphere S^j, computed as (j+1) * kappa_{j+1}.
pub fn omega(j: usize) -> f64 {
    (j as f64 + 1.0) * kappa(j + 1)
}

/// Dimension of the space of spherical harmonics of degree k on S^{n-1}.
pub fn harmonic_dim(n: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    // (2k + n - 2)/k * binom(k + n - 3, n - 2): the short-product form
    // stays finite at degrees where the gamma route would overflow
    let mut b = 1.0;
    for j in 1..=(n - 2) {
        b *= (k as f64 - 1.0 + j as f64) / j as f64;
    }
    (2.0 * k as f64 + n as f64 - 2.0) / k as f64 * b
}

/// Raw Gegenbauer polynomial C_k^lambda(t) by the three-term recurrence.
fn gegenbauer(lambda: f64, k: usize, t: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0 * lambda * t,
        _ => {
            let mut cm2 = 1.0;
            let mut cm1 = 2.0 * lambda * t;
            let mut c = cm1;
            for j in 2..=k {
                let jf = j as f64;
                c = (2.0 * (jf + lambda - 1.0) * t * cm1 - (jf + 2.0 * lambda - 2.0) * cm2) / jf;
                cm2 = cm1;
                cm1 = c;
            }
            c
        }
    }
}

fn gegenbauer_at_one(lambda: f64, k: usize) -> f64 {
    // C_k^lambda(1) = prod_{j=1..k} (j + 2 lambda - 1)/j
    let mut v = 1.0;
    for j in 1..=k {
        let jf = j as f64;
        v *= (jf + 2.0 * lambda - 1.0) / jf;
    }
    v
}

/// Dimension-n Legendre polynomial P_k^n(t), normalized so P_k^n(1) = 1.
/// At n = 2 the recurrence degenerates to the Chebyshev one, giving
/// P_k^2 = T_k as required for circle harmonics.
pub fn legendre_nd(n: usize, k: usize, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    // Normalized recurrence, stable for |t| <= 1:
    //   p_k = 2(k+lambda-1)/(k+2lambda-1) t p_{k-1} - (k-1)/(k+2lambda-1) p_{k-2}
    Ok(match k {
        0 => 1.0,
        1 => t,
        _ => {
            let mut pm2 = 1.0;
            let mut pm1 = t;
            let mut p = t;
            for j in 2..=k {
                let jf = j as f64;
                let d = jf + 2.0 * lambda - 1.0;
                p = (2.0 * (jf + lambda - 1.0) * t * pm1 - (jf - 1.0) * pm2) / d;
                pm2 = pm1;
                pm1 = p;
            }
            p
        }
    })
}

/// First derivative of P_k^n with respect to t.
pub fn legendre_nd_d1(n: usize, k: usize, t: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    if k == 0 {
        return Ok(0.0);
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    // d/dt C_k^lambda = 2 lambda C_{k-1}^{lambda+1}
    Ok(2.0 * lambda * gegenbauer(lambda + 1.0, k - 1, t) / gegenbauer_at_one(lambda, k))
}

/// Second derivative of P_k^n with respect to t.
pub fn legendre_nd_d2(n: usize, k: usize, t: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    if k < 2 {
        return Ok(0.0);
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    Ok(4.0 * lambda * (lambda + 1.0) * gegenbauer(lambda + 2.0, k - 2, t)
        / gegenbauer_at_one(lambda, k))
}

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-t)^alpha (1+t)^beta.
///
/// Nodes and weights come from the Golub-Welsch eigenvalue method applied
/// to the symmetric Jacobi companion matrix.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl QuadratureRule {
    pub fn gauss_jacobi(alpha: f64, beta: f64, m: usize) -> Result<Self> {
        if alpha <= -1.0 || !alpha.is_finite() {
            return Err(Error::InvalidWeightExponent(alpha));
        }
        if beta <= -1.0 || !beta.is_finite() {
            return Err(Error::InvalidWeightExponent(beta));
        }
        if m == 0 {
            return Err(Error::EmptyRule);
        }
        if m == 1 {
            let mu0 = moment_zero(alpha, beta);
            let node = (beta - alpha) / (alpha + beta + 2.0);
            return Ok(Self {
                nodes: vec![node],
                weights: vec![mu0],
                alpha,
                beta,
            });
        }
        let mut mat = DMatrix::<f64>::zeros(m, m);
        let mut diag = (beta - alpha) / (2.0 + alpha + beta);
        for idx in 0..m - 1 {
            let j = idx as f64 + 1.0;
            let denom = 2.0 * j + alpha + beta;
            // at j = 1 the factors (j + alpha + beta) and (denom - 1) cancel;
            // the reduced form avoids 0/0 when alpha + beta = -1
            let off = if idx == 0 {
                2.0 / denom * ((1.0 + alpha) * (1.0 + beta) / (denom + 1.0)).sqrt()
            } else {
                2.0 / denom
                    * (j * (j + alpha) * (j + beta) * (j + alpha + beta)
                        / ((denom + 1.0) * (denom - 1.0)))
                        .sqrt()
            };
            mat[(idx, idx)] = diag;
            mat[(idx, idx + 1)] = off;
            mat[(idx + 1, idx)] = off;
            diag = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
        }
        mat[(m - 1, m - 1)] = diag;

        let eigen = mat.symmetric_eigen();
        let mu0 = moment_zero(alpha, beta);
        let mut pairs: Vec<(f64, f64)> = (0..m)
            .map(|j| {
                let node = eigen.eigenvalues[j];
                let first = eigen.eigenvectors[(0, j)];
                (node, mu0 * first * first)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            alpha,
            beta,
        })
    }

    /// Symmetric rule for the weight (1 - t^2)^alpha.
    pub fn gegenbauer_weight(alpha: f64, m: usize) -> Result<Self> {
        Self::gauss_jacobi(alpha, alpha, m)
    }

    /// Integrates f against the rule's weight over [-1, 1].
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// mu_0 = int_{-1}^{1} (1-t)^alpha (1+t)^beta dt = 2^{a+b+1} B(a+1, b+1).
fn moment_zero(alpha: f64, beta: f64) -> f64 {
    2f64.powf(alpha + beta + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0)
        / gamma(alpha + beta + 2.0)
}

fn rule_cache() -> &'static Mutex<HashMap<(u64, u64, usize), QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64, usize), QuadratureRule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized symmetric Gauss-Jacobi rule; rules are immutable once built.
pub fn cached_rule(alpha: f64, beta: f64, m: usize) -> Result<QuadratureRule> {
    let key = (alpha.to_bits(), beta.to_bits(), m);
    if let Some(r) = rule_cache().lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let rule = QuadratureRule::gauss_jacobi(alpha, beta, m)?;
    rule_cache().lock().unwrap().insert(key, rule.clone());
    Ok(rule)
}

/// Integral of kernel(t) P_k^n(t) (1-t^2)^((n-3)/2) over [-1, 1], with the
/// interval split at 0 so kernels with a kink there keep spectral accuracy.
/// The surface weight is folded into the integrand; valid for n >= 3.
fn weighted_projection(n: usize, k: usize, kernel: &dyn Fn(f64) -> f64, m: usize) -> Result<f64> {
    let alpha = (n as f64 - 3.0) / 2.0;
    let half_scale = 2f64.powf(-alpha) * 0.5;
    let mut total = 0.0;
    // Right half [0, 1]: the (1-t)^alpha factor sits in the Jacobi weight,
    // the smooth (1+t)^alpha factor goes into the integrand.
    let right = cached_rule(alpha, 0.0, m)?;
    for (&x, &w) in right.nodes.iter().zip(&right.weights) {
        let t = (x + 1.0) / 2.0;
        total += w * half_scale * kernel(t) * legendre_nd(n, k, t)? * (1.0 + t).powf(alpha);
    }
    // Left half [-1, 0], mirrored.
    let left = cached_rule(0.0, alpha, m)?;
    for (&x, &w) in left.nodes.iter().zip(&left.weights) {
        let t = (x - 1.0) / 2.0;
        total += w * half_scale * kernel(t) * legendre_nd(n, k, t)? * (1.0 - t).powf(alpha);
    }
    Ok(total)
}

/// Funk-Hecke multiplier of a zonal kernel against degree-k harmonics,
/// in the probability-measure convention:
///
///   m_k = (omega_{n-2} / omega_{n-1}) int kernel(t) P_k^n(t) (1-t^2)^((n-3)/2) dt
///
/// Refines the quadrature until two successive levels agree.
pub fn funk_hecke(n: usize, k: usize, kernel: impl Fn(f64) -> f64) -> Result<f64> {
    funk_hecke_with(n, k, kernel, 128)
}

pub fn funk_hecke_with(
    n: usize,
    k: usize,
    kernel: impl Fn(f64) -> f64,
    base_points: usize,
) -> Result<f64> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    let norm = omega(n - 2) / omega(n - 1);
    let tol = 1e-10;
    let mut m = base_points.max(16);
    let mut prev = norm * weighted_projection(n, k, &kernel, m)?;
    for _ in 0..4 {
        m *= 2;
        let next = norm * weighted_projection(n, k, &kernel, m)?;
        let residual = (next - prev).abs();
        if residual <= tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    let next = norm * weighted_projection(n, k, &kernel, 2 * m)?;
    let residual = (next - prev).abs();
    if residual <= tol * next.abs().max(1.0) {
        Ok(next)
    } else {
        Err(Error::QuadratureNonConvergent {
            residual,
            tolerance: tol,
        })
    }
}

/// funk_hecke(n, k, P_k^n): the self-multiplier, equal to 1/dim of the
/// degree-k harmonic space. Used to convert between zonal expansion
/// coefficients and Funk-Hecke multipliers.
pub fn fh_norm(n: usize, k: usize) -> f64 {
    1.0 / harmonic_dim(n, k)
}
