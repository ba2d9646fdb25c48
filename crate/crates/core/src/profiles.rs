//! One-variable representations of invariant objects on the sphere and on
//! Grassmannians.
//!
//! A zonal function on S^{n-1} is stored by its coefficients in the basis
//! P_k^n. An SO(n-1)-invariant function on Gr_{i,n} is stored by its
//! coefficients in the basis q^{(i)}_{2k} = R_{1,i} P^n_{2k}, as a function
//! of the invariant parameter s = |P_E u0|. With this (unrenormalized)
//! basis every upward Radon transform is the identity on coefficients.

use crate::error::{Error, Result};
use crate::specfun::{
    self, cached_rule, fh_norm, funk_hecke_with, kappa, legendre_nd, omega,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Band-limited zonal function on S^{n-1}, coefficients in the P_k^n basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZonalProfile {
    pub n: usize,
    pub coeffs: Vec<f64>,
    pub parity: Parity,
}

/// Values of P_0^n .. P_kmax^n at t by a single running recurrence.
pub fn legendre_seq(n: usize, kmax: usize, t: f64) -> Vec<f64> {
    let lambda = (n as f64 - 2.0) / 2.0;
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax == 0 {
        return out;
    }
    out.push(t);
    for j in 2..=kmax {
        let jf = j as f64;
        let d = jf + 2.0 * lambda - 1.0;
        let p = (2.0 * (jf + lambda - 1.0) * t * out[j - 1] - (jf - 1.0) * out[j - 2]) / d;
        out.push(p);
    }
    out
}

fn detect_parity(coeffs: &[f64]) -> Parity {
    let tol = 1e-14;
    let has_even = coeffs.iter().step_by(2).any(|&c| c.abs() > tol);
    let has_odd = coeffs.iter().skip(1).step_by(2).any(|&c| c.abs() > tol);
    match (has_even, has_odd) {
        (true, false) | (false, false) => Parity::Even,
        (false, true) => Parity::Odd,
        (true, true) => Parity::Mixed,
    }
}

impl ZonalProfile {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        let parity = detect_parity(&coeffs);
        Ok(Self { n, coeffs, parity })
    }

    pub fn zero(n: usize, kmax: usize) -> Self {
        Self {
            n,
            coeffs: vec![0.0; kmax + 1],
            parity: Parity::Even,
        }
    }

    pub fn kmax(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Pointwise value: sum of a_k P_k^n(t).
    pub fn eval(&self, t: f64) -> f64 {
        let basis = legendre_seq(self.n, self.kmax(), t);
        self.coeffs.iter().zip(&basis).map(|(a, p)| a * p).sum()
    }

    /// Abel-smoothed value: sum of a_k r^k P_k^n(t). Used for kernels that
    /// are merely L^1 (the Berg functions), where plain truncation Gibbses.
    pub fn eval_abel(&self, t: f64, r: f64) -> f64 {
        let basis = legendre_seq(self.n, self.kmax(), t);
        let mut rk = 1.0;
        let mut acc = 0.0;
        for (a, p) in self.coeffs.iter().zip(&basis) {
            acc += a * rk * p;
            rk *= r;
        }
        acc
    }

    /// Projects a function on [-1,1] onto the degree-<=kmax zonal basis
    /// under the surface weight (1-t^2)^((n-3)/2).
    pub fn expand(n: usize, f: impl Fn(f64) -> f64, kmax: usize) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let m = funk_hecke_with(n, k, &f, 128)?;
            coeffs.push(m / fh_norm(n, k));
        }
        Self::new(n, coeffs)
    }

    /// Ratio of the last coefficient to the largest. Above ~1e-6 the band
    /// limit is too small for the input.
    pub fn tail_ratio(&self) -> f64 {
        let max = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if max == 0.0 {
            return 0.0;
        }
        let tail = self
            .coeffs
            .iter()
            .rev()
            .take(2)
            .fold(0.0f64, |m, c| m.max(c.abs()));
        tail / max
    }

    /// Re-expands the same function of t in the dimension-m Legendre basis.
    /// Exact for band-limited inputs (the bases span the same polynomials).
    pub fn to_dimension(&self, m: usize) -> Result<Self> {
        if m == self.n {
            return Ok(self.clone());
        }
        let kmax = self.kmax();
        let rule = cached_rule((m as f64 - 3.0) / 2.0, (m as f64 - 3.0) / 2.0, kmax + 8)?;
        let mut coeffs = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            let num: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&t, &w)| w * self.eval(t) * legendre_nd(m, k, t).unwrap())
                .sum();
            let den = (omega(m - 1) / omega(m - 2)) * fh_norm(m, k);
            coeffs.push(num / den);
        }
        Self::new(m, coeffs)
    }

    pub fn even_part(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k % 2 == 1 {
                *c = 0.0;
            }
        }
        Self {
            n: self.n,
            coeffs,
            parity: Parity::Even,
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity == Parity::Even
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        for a in &mut out.coeffs {
            *a *= c;
        }
        out
    }
}

/// Band-limited SO(n-1)-invariant function on Gr_{i,n}; coeffs[k] is the
/// coefficient of q^{(i)}_{2k} in the variable s = |P_E u0|.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrassProfile {
    pub n: usize,
    pub i: usize,
    pub coeffs: Vec<f64>,
}

impl GrassProfile {
    pub fn new(n: usize, i: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        if i == 0 || i >= n {
            return Err(Error::DegreeOutOfRange {
                what: "Grassmannian index",
                n,
                i,
                range: "1..=n-1",
            });
        }
        Ok(Self { n, i, coeffs })
    }

    pub fn zero(n: usize, i: usize, count: usize) -> Self {
        Self {
            n,
            i,
            coeffs: vec![0.0; count],
        }
    }

    /// Highest harmonic degree present (2 * (len - 1)).
    pub fn degree_max(&self) -> usize {
        2 * self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &b)| b * grass_basis_q(self.n, self.i, k, s))
            .sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        for b in &mut out.coeffs {
            *b *= c;
        }
        out
    }
}

/// A named diagonal operator: harmonic degree k -> multiplier.
#[derive(Debug, Clone)]
pub struct MultiplierSeq {
    pub name: String,
    pub n: usize,
    pub values: Vec<f64>,
}

/// q^{(i)}_{2k}(s) = (omega_{i-2}/omega_{i-1}) int P^n_{2k}(s tau)
/// (1-tau^2)^((i-3)/2) dtau for i >= 2; the identity P^n_{2k}(s) for i = 1.
pub fn grass_basis_q(n: usize, i: usize, k: usize, s: f64) -> f64 {
    if i == 1 {
        return legendre_nd(n, 2 * k, s).unwrap();
    }
    let m = (k + 4).max(48);
    let rule = cached_rule((i as f64 - 3.0) / 2.0, (i as f64 - 3.0) / 2.0, m).unwrap();
    let norm = omega(i - 2) / omega(i - 1);
    norm * rule.integrate(|tau| legendre_nd(n, 2 * k, s * tau).unwrap())
}

fn beta_fn(a: f64, b: f64) -> f64 {
    gamma(a) * gamma(b) / gamma(a + b)
}

/// Quadrature for the invariant distribution of s = |P_E u0| on Gr_{i,n}:
/// s^2 follows a Beta(i/2, (n-i)/2) law. Returns (node, weight) pairs on
/// [0,1] whose weights sum to 1.
pub fn grass_quadrature(n: usize, i: usize, m: usize) -> Result<Vec<(f64, f64)>> {
    grass_quadrature_shifted(n, i, m, 0.0)
}

/// Same as `grass_quadrature` but with an extra factor (1-s^2)^extra folded
/// into the weight (still normalized against the plain Beta constant), so
/// integrands with a sqrt(1-s^2) singularity stay spectrally accurate.
pub fn grass_quadrature_shifted(
    n: usize,
    i: usize,
    m: usize,
    extra: f64,
) -> Result<Vec<(f64, f64)>> {
    let a = i as f64 / 2.0;
    let b = (n - i) as f64 / 2.0;
    let alpha = b - 1.0 + extra; // exponent at (1-x), x = 2 s^2 - 1
    let beta = a - 1.0;
    let rule = cached_rule(alpha, beta, m)?;
    let scale = 2f64.powf(-(alpha + beta + 1.0)) / beta_fn(a, b);
    Ok(rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| ((0.5 * (x + 1.0)).sqrt(), w * scale))
        .collect())
}

fn norm_cache() -> &'static Mutex<HashMap<(usize, usize, usize), f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Squared norm of q^{(i)}_{2k} under the invariant probability measure.
pub fn grass_norm_sq(n: usize, i: usize, k: usize) -> f64 {
    if let Some(&v) = norm_cache().lock().unwrap().get(&(n, i, k)) {
        return v;
    }
    let quad = grass_quadrature(n, i, 2 * k + 8).expect("valid beta weights");
    let v: f64 = quad
        .iter()
        .map(|&(s, w)| {
            let q = grass_basis_q(n, i, k, s);
            w * q * q
        })
        .sum();
    norm_cache().lock().unwrap().insert((n, i, k), v);
    v
}

/// Projects a function of s onto the q^{(i)} basis under the invariant
/// measure. `count` is the number of even-degree coefficients kept.
pub fn expand_grass(
    n: usize,
    i: usize,
    f: impl Fn(f64) -> f64,
    count: usize,
) -> Result<GrassProfile> {
    let quad = grass_quadrature(n, i, 2 * count + 16)?;
    let samples: Vec<(f64, f64)> = quad.iter().map(|&(s, w)| (f(s), w)).collect();
    let mut coeffs = Vec::with_capacity(count);
    for k in 0..count {
        let num: f64 = quad
            .iter()
            .zip(&samples)
            .map(|(&(s, _), &(fv, w))| w * fv * grass_basis_q(n, i, k, s))
            .sum();
        coeffs.push(num / grass_norm_sq(n, i, k));
    }
    GrassProfile::new(n, i, coeffs)
}

/// Projection of s -> sqrt(1 - s^2) * f(s) onto the q^{(i)} basis for a
/// smooth f. The square-root factor is folded into the quadrature weight,
/// so polynomial f is projected exactly.
pub fn expand_grass_sqrt(
    n: usize,
    i: usize,
    f: impl Fn(f64) -> f64,
    count: usize,
) -> Result<GrassProfile> {
    let quad = grass_quadrature_shifted(n, i, 2 * count + 16, 0.5)?;
    let samples: Vec<f64> = quad.iter().map(|&(s, _)| f(s)).collect();
    let mut coeffs = Vec::with_capacity(count);
    for k in 0..count {
        let num: f64 = quad
            .iter()
            .zip(&samples)
            .map(|(&(s, w), &fv)| w * fv * grass_basis_q(n, i, k, s))
            .sum();
        coeffs.push(num / grass_norm_sq(n, i, k));
    }
    GrassProfile::new(n, i, coeffs)
}

/// Expansion of sqrt(1 - s^2) in the q^{(i)} basis (the support profile of
/// a disk in the orthogonal complement). Uses a quadrature rule with the
/// square-root factor folded into the weight.
pub fn disk_profile(n: usize, i: usize, count: usize) -> Result<GrassProfile> {
    let quad = grass_quadrature_shifted(n, i, 2 * count + 16, 0.5)?;
    let mut coeffs = Vec::with_capacity(count);
    for k in 0..count {
        let num: f64 = quad
            .iter()
            .map(|&(s, w)| w * grass_basis_q(n, i, k, s))
            .sum();
        coeffs.push(num / grass_norm_sq(n, i, k));
    }
    GrassProfile::new(n, i, coeffs)
}

/// Multiplier of the classical spherical Radon transform (average over the
/// great subsphere orthogonal to a point) on degree-k harmonics: P_k^n(0).
pub fn radon_sphere_multiplier(n: usize, k: usize) -> f64 {
    legendre_nd(n, k, 0.0).unwrap()
}

/// Hat-duality for the hyperplane Grassmannian: an even zonal g on S^{n-1}
/// and the Gr_{n-1,n} profile s -> g(sqrt(1-s^2)) carry the same data.
/// In coefficients, b_k = a_{2k} / P^n_{2k}(0).
pub fn zonal_to_hyperplane(g: &ZonalProfile) -> Result<GrassProfile> {
    if !g.is_even() {
        return Err(Error::Invalid(
            "hyperplane hat-duality needs an even zonal profile".into(),
        ));
    }
    let n = g.n;
    let count = g.kmax() / 2 + 1;
    let mut coeffs = Vec::with_capacity(count);
    for k in 0..count {
        let a = g.coeffs.get(2 * k).copied().unwrap_or(0.0);
        coeffs.push(a / radon_sphere_multiplier(n, 2 * k));
    }
    GrassProfile::new(n, n - 1, coeffs)
}

/// Inverse of `zonal_to_hyperplane`.
pub fn hyperplane_to_zonal(p: &GrassProfile) -> Result<ZonalProfile> {
    if p.i != p.n - 1 {
        return Err(Error::Mismatch(format!(
            "expected a Gr_{{n-1,n}} profile, got i = {}",
            p.i
        )));
    }
    let mut coeffs = vec![0.0; 2 * p.coeffs.len().saturating_sub(1) + 1];
    for (k, &b) in p.coeffs.iter().enumerate() {
        coeffs[2 * k] = b * radon_sphere_multiplier(p.n, 2 * k);
    }
    ZonalProfile::new(p.n, coeffs)
}

/// Sphere-side S(O(i) x O(n-i))-invariant profile, a function of
/// r = |P_ebar u|. Hat-duality is the identity on the one-variable data,
/// so this wraps the same coefficients as the Grassmannian profile.
#[derive(Debug, Clone)]
pub struct SphereInvariantProfile(pub GrassProfile);

impl SphereInvariantProfile {
    pub fn eval(&self, r: f64) -> f64 {
        self.0.eval(r)
    }
}

/// Hat duality: reinterpret a Grassmannian profile as the sphere-side
/// invariant function of r = |P_ebar u| (involution).
pub fn hat_dual(p: &GrassProfile) -> SphereInvariantProfile {
    SphereInvariantProfile(p.clone())
}

pub fn hat_dual_inv(p: &SphereInvariantProfile) -> GrassProfile {
    p.0.clone()
}

/// Draws s = |P_E u0| for a Haar-random i-subspace E of R^n. The subspace
/// comes from orthonormalizing an n x i Gaussian frame; s is the norm of the
/// first row of the resulting orthonormal basis.
pub fn haar_subspace_param(n: usize, i: usize, rng: &mut impl Rng) -> f64 {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(i);
    for _ in 0..i {
        let mut v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        for c in &cols {
            let d: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= d * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    cols.iter().map(|c| c[0] * c[0]).sum::<f64>().sqrt()
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller; keeps the dependency surface to `rand` alone.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Volume kappa_i of the unit i-ball, re-exported here because profile
/// normalizations use it constantly.
pub fn ball_volume(i: usize) -> f64 {
    kappa(i)
}

pub use specfun::funk_hecke;
