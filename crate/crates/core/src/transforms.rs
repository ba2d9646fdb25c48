//! The intertwining transforms: cosine and Radon transforms on
//! Grassmannians, the box operators and Berg convolution kernels, and the
//! orthogonal-complement (perp) map. All of them act diagonally on the
//! even-degree coefficient tower, so each reduces to a multiplier table
//! plus, for the explicit-kernel Radon routes, a one-dimensional integral.

use crate::error::{Error, Result};
use crate::profiles::{
    expand_grass, grass_norm_sq, legendre_seq, GrassProfile, MultiplierSeq, ZonalProfile,
};
use crate::specfun::{cached_rule, fh_norm, funk_hecke, kappa, legendre_nd, omega};
use statrs::function::gamma::gamma;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Tags for the diagonal operators exposed through the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformTag {
    Cosine(usize),
    RadonUp(usize, usize),
    RadonDown(usize, usize),
    Box(usize),
    BergConv(usize),
    Perp,
    InverseOf(std::boxed::Box<TransformTag>),
}

fn c1_cache() -> &'static Mutex<HashMap<(usize, usize), f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Spherical cosine multiplier c^1_k: the Funk-Hecke multiplier of |t|.
/// Zero for odd k.
pub fn spherical_cosine_multiplier(n: usize, k: usize) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    if let Some(&v) = c1_cache().lock().unwrap().get(&(n, k)) {
        return v;
    }
    let v = funk_hecke(n, k, |t: f64| t.abs()).expect("smooth on each half interval");
    c1_cache().lock().unwrap().insert((n, k), v);
    v
}

fn binom(n: usize, i: usize) -> f64 {
    gamma(n as f64 + 1.0) / (gamma(i as f64 + 1.0) * gamma((n - i) as f64 + 1.0))
}

/// The constant relating c^i to c^1: n kappa_i kappa_{n-i} / (2 kappa_{n-1})
/// divided by binom(n, i).
pub fn cosine_scale(n: usize, i: usize) -> f64 {
    n as f64 * kappa(i) * kappa(n - i) / (2.0 * kappa(n - 1)) / binom(n, i)
}

/// Cosine transform multiplier c^i_k on Gr_{i,n}. Nonzero for every even k.
pub fn cosine_multiplier(n: usize, i: usize, k: usize) -> f64 {
    cosine_scale(n, i) * spherical_cosine_multiplier(n, k)
}

/// Multiplier of the operator box_j = Delta_S/(j-1) + 1 on degree-k
/// harmonics of S^{j-1}: 1 - k(k+j-2)/(j-1). Zero exactly at k = 1.
pub fn box_multiplier(j: usize, k: usize) -> Result<f64> {
    if j < 2 {
        return Err(Error::DegreeOutOfRange {
            what: "box operator",
            n: j,
            i: j,
            range: "2..",
        });
    }
    let j = j as f64;
    let k = k as f64;
    Ok(1.0 - k * (k + j - 2.0) / (j - 1.0))
}

/// Zonal profile of the Berg function zeta_j in the dimension-j basis.
/// Its S^{j-1} Funk-Hecke multipliers are 1/box_j(k) for k != 1 and 0 at
/// k = 1. The coefficients grow with k for j > 4 (zeta_j is only L^1), so
/// pointwise evaluation should go through `ZonalProfile::eval_abel`.
pub fn berg_zeta(j: usize, kmax: usize) -> Result<ZonalProfile> {
    if j < 2 {
        return Err(Error::DegreeOutOfRange {
            what: "Berg function",
            n: j,
            i: j,
            range: "2..",
        });
    }
    // Berg's zeta_j lives on S^{j-1}; the basis needs dimension >= 3.
    let dim = j.max(3);
    let mut coeffs = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        if k == 1 {
            coeffs.push(0.0);
        } else {
            coeffs.push(1.0 / (box_multiplier(j, k)? * fh_norm(dim, k)));
        }
    }
    ZonalProfile::new(dim, coeffs)
}

fn berg_mult_cache() -> &'static Mutex<HashMap<(usize, usize, usize), f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Multiplier on degree-k harmonics of S^{n-1} of the Berg convolution
/// operator F_{zeta_j} (surface-measure convolution against the genuine
/// L^1-normalized Berg kernel of dimension j). Reduces to 1/box_j(k) when
/// j = n, so InverseOf(BergConv(n)) realizes the elliptic operator box_n.
///
/// Computed spectrally: expanding (1-t^2)^((n-j)/2) P_k^n in the
/// dimension-j basis turns the weighted integral against zeta_j into a sum
/// of the known dimension-j multipliers 1/box_j(m). The inner products are
/// exact Gauss-Jacobi integrals, so the only error is the fast-decaying
/// tail of that expansion (finite when n - j is even). The normalization
/// converting the dimension-j eigenvalues to the S^{n-1} convolution
/// convention is omega_{n-1} / omega_{j-1}.
pub fn berg_conv_multiplier(n: usize, j: usize, k: usize) -> Result<f64> {
    if j < 2 || j > n {
        return Err(Error::DegreeOutOfRange {
            what: "Berg convolution",
            n,
            i: j,
            range: "2..=n",
        });
    }
    if k == 1 {
        return Ok(0.0);
    }
    if j == n {
        return Ok(1.0 / box_multiplier(n, k)?);
    }
    let key = (n, j, k);
    if let Some(&v) = berg_mult_cache().lock().unwrap().get(&key) {
        return Ok(v);
    }
    let mut mmax = 2 * k + 2 * n + 16;
    let mut prev = berg_conv_partial(n, j, k, mmax)?;
    loop {
        mmax *= 2;
        let next = berg_conv_partial(n, j, k, mmax)?;
        if (next - prev).abs() <= 1e-13 * next.abs().max(1.0) || mmax > 400 {
            berg_mult_cache().lock().unwrap().insert(key, next);
            return Ok(next);
        }
        prev = next;
    }
}

fn berg_conv_partial(n: usize, j: usize, k: usize, mmax: usize) -> Result<f64> {
    // I_{k,m} = int P_k^n P_m^j (1-t^2)^((n-3)/2) dt, exact under the rule.
    let rule = cached_rule((n as f64 - 3.0) / 2.0, (n as f64 - 3.0) / 2.0, (k + mmax) / 2 + 8)?;
    let pk: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&t| legendre_nd(n, k, t).unwrap())
        .collect();
    let mut sum = 0.0;
    for m in (k % 2..=mmax).step_by(2) {
        if m == 1 {
            continue;
        }
        let i_km: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .zip(&pk)
            .map(|((&t, &w), &p)| w * p * legendre_nd(j, m, t).unwrap())
            .sum();
        sum += i_km / (fh_norm(j, m) * box_multiplier(j, m)?);
    }
    Ok(omega(n - 2) / omega(j - 1) * sum)
}

/// Builds the multiplier table for a tag, for degrees 0..=kmax.
///
/// InverseOf is only constructible when the forward multipliers are nonzero
/// at every even degree in range; zero entries at odd degrees (or at k = 1
/// for the box/Berg family) are kept as zero and guarded at application.
pub fn multiplier_seq(tag: &TransformTag, n: usize, kmax: usize) -> Result<MultiplierSeq> {
    let values: Vec<f64> = match tag {
        TransformTag::Cosine(i) => {
            check_index(n, *i)?;
            (0..=kmax).map(|k| cosine_multiplier(n, *i, k)).collect()
        }
        TransformTag::RadonUp(i, j) => {
            check_index(n, *i)?;
            check_index(n, *j)?;
            if i >= j {
                return Err(Error::Invalid("RadonUp needs i < j".into()));
            }
            vec![1.0; kmax + 1]
        }
        TransformTag::RadonDown(j, i) => {
            check_index(n, *i)?;
            check_index(n, *j)?;
            if i >= j {
                return Err(Error::Invalid("RadonDown needs target i < source j".into()));
            }
            (0..=kmax)
                .map(|k| {
                    if k % 2 == 1 {
                        0.0
                    } else {
                        grass_norm_sq(n, *j, k / 2) / grass_norm_sq(n, *i, k / 2)
                    }
                })
                .collect()
        }
        TransformTag::Box(j) => (0..=kmax)
            .map(|k| box_multiplier(*j, k))
            .collect::<Result<_>>()?,
        TransformTag::BergConv(j) => (0..=kmax)
            .map(|k| berg_conv_multiplier(n, *j, k))
            .collect::<Result<_>>()?,
        TransformTag::Perp => {
            return Err(Error::Invalid(
                "perp is not diagonal in the coefficient basis; use transforms::perp".into(),
            ))
        }
        TransformTag::InverseOf(inner) => {
            let fwd = multiplier_seq(inner, n, kmax)?;
            let mut cond_min = f64::INFINITY;
            let mut cond_max = 0.0f64;
            let mut values = Vec::with_capacity(kmax + 1);
            for (k, &v) in fwd.values.iter().enumerate() {
                let forced_zero = k % 2 == 1 || (k == 1)
                    || matches!(**inner, TransformTag::Box(_) | TransformTag::BergConv(_))
                        && k == 1;
                if v == 0.0 {
                    if k % 2 == 0 && k != 1 && !forced_zero {
                        return Err(Error::SingularOperator {
                            name: format!("{:?}", inner),
                            k,
                            value: v,
                        });
                    }
                    values.push(0.0);
                } else {
                    values.push(1.0 / v);
                    cond_min = cond_min.min(v.abs());
                    cond_max = cond_max.max(v.abs());
                }
            }
            let cond = cond_max / cond_min;
            if cond > 1e10 {
                return Err(Error::IllConditioned {
                    name: format!("{:?}", inner),
                    cond,
                });
            }
            return Ok(MultiplierSeq {
                name: format!("inverse of {:?}", inner),
                n,
                values,
            });
        }
    };
    Ok(MultiplierSeq {
        name: format!("{:?}", tag),
        n,
        values,
    })
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::DegreeOutOfRange {
            what: "Grassmannian index",
            n,
            i,
            range: "1..=n-1",
        });
    }
    Ok(())
}

/// Coefficient-wise product on a zonal profile. Degrees where the
/// multiplier table carries an exact zero coming from an inverse are
/// guarded by the caller keeping those coefficients at zero.
pub fn apply_multiplier_zonal(p: &ZonalProfile, seq: &MultiplierSeq) -> Result<ZonalProfile> {
    if p.n != seq.n {
        return Err(Error::Mismatch(format!(
            "profile dimension {} vs multiplier dimension {}",
            p.n, seq.n
        )));
    }
    if p.coeffs.len() > seq.values.len() {
        return Err(Error::BandLimitMismatch {
            left: p.coeffs.len() - 1,
            right: seq.values.len() - 1,
        });
    }
    let coeffs = p
        .coeffs
        .iter()
        .zip(&seq.values)
        .map(|(a, m)| a * m)
        .collect();
    ZonalProfile::new(p.n, coeffs)
}

/// Coefficient-wise product on a Grassmannian profile (even degrees only).
pub fn apply_multiplier_grass(p: &GrassProfile, seq: &MultiplierSeq) -> Result<GrassProfile> {
    if p.n != seq.n {
        return Err(Error::Mismatch(format!(
            "profile dimension {} vs multiplier dimension {}",
            p.n, seq.n
        )));
    }
    if p.degree_max() + 1 > seq.values.len() {
        return Err(Error::BandLimitMismatch {
            left: p.degree_max(),
            right: seq.values.len().saturating_sub(1),
        });
    }
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, b)| b * seq.values[2 * k])
        .collect();
    GrassProfile::new(p.n, p.i, coeffs)
}

/// Upward Radon transform R_{i,j}, i < j: the identity on coefficients in
/// the unrenormalized q basis.
pub fn radon_up(p: &GrassProfile, j: usize) -> Result<GrassProfile> {
    check_index(p.n, j)?;
    if j <= p.i {
        return Err(Error::Invalid(format!(
            "radon_up needs a target index above {}, got {}",
            p.i, j
        )));
    }
    GrassProfile::new(p.n, j, p.coeffs.clone())
}

/// Downward Radon transform R_{j,i}, i < j: degree-2k coefficients scale by
/// the norm ratio ||q^(j)_2k||^2 / ||q^(i)_2k||^2 (adjointness of R).
pub fn radon_down(p: &GrassProfile, i: usize) -> Result<GrassProfile> {
    check_index(p.n, i)?;
    if i >= p.i {
        return Err(Error::Invalid(format!(
            "radon_down needs a target index below {}, got {}",
            p.i, i
        )));
    }
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, b)| b * grass_norm_sq(p.n, p.i, k) / grass_norm_sq(p.n, i, k))
        .collect();
    GrassProfile::new(p.n, i, coeffs)
}

/// Explicit-kernel realization of R_{n-1,i} applied to an even zonal g:
///
///   (R_{n-1,i} g)(s) = (omega_{n-i-2}/omega_{n-i-1})
///                      int g(sqrt(1-s^2) tau) (1-tau^2)^((n-i-3)/2) dtau
///
/// averaging g over the hyperplane normals orthogonal to the base subspace.
/// For i = n-1 this degenerates to the two-point average g(sqrt(1-s^2)).
pub fn radon_sphere_kernel(n: usize, i: usize, g: &ZonalProfile) -> Result<GrassProfile> {
    if g.n != n {
        return Err(Error::Mismatch(format!("profile dim {} vs n {}", g.n, n)));
    }
    if !g.is_even() {
        return Err(Error::Invalid(
            "explicit-kernel Radon transform needs an even zonal profile".into(),
        ));
    }
    check_index(n, i)?;
    let count = g.kmax() / 2 + 1;
    if i == n - 1 {
        return expand_grass(n, i, |s| g.eval((1.0 - s * s).sqrt()), count);
    }
    let alpha = (n - i) as f64 / 2.0 - 1.5;
    let rule = cached_rule(alpha, alpha, g.kmax() + 16)?;
    let norm = omega(n - i - 2) / omega(n - i - 1);
    expand_grass(
        n,
        i,
        |s| {
            let c = (1.0 - s * s).max(0.0).sqrt();
            norm * rule.integrate(|tau| g.eval(c * tau))
        },
        count,
    )
}

/// Orthogonal-complement map on invariant profiles: s -> p(sqrt(1-s^2)),
/// re-expanded in the q^(n-i) basis. An involution up to truncation.
pub fn perp(p: &GrassProfile) -> Result<GrassProfile> {
    let target = p.n - p.i;
    check_index(p.n, target)?;
    expand_grass(
        p.n,
        target,
        |s| p.eval((1.0 - s * s).max(0.0).sqrt()),
        p.coeffs.len(),
    )
}

/// Sup-norm defect of the commutation relation
/// R_{i,j} C_i = (i!(n-i)! k_i k_{n-i} / j!(n-j)! k_j k_{n-j}) C_j R_{i,j}.
pub fn commutation_defect(n: usize, i: usize, j: usize, p: &GrassProfile) -> Result<f64> {
    if p.i != i || p.n != n {
        return Err(Error::Mismatch("profile indices disagree".into()));
    }
    let kmax = p.degree_max();
    let ci = multiplier_seq(&TransformTag::Cosine(i), n, kmax)?;
    let cj = multiplier_seq(&TransformTag::Cosine(j), n, kmax)?;
    let lhs = radon_up(&apply_multiplier_grass(p, &ci)?, j)?;
    let factor = fact(i) * fact(n - i) * kappa(i) * kappa(n - i)
        / (fact(j) * fact(n - j) * kappa(j) * kappa(n - j));
    let rhs = apply_multiplier_grass(&radon_up(p, j)?, &cj)?.scale(factor);
    let mut sup = 0.0f64;
    for idx in 0..=200 {
        let s = idx as f64 / 200.0;
        sup = sup.max((lhs.eval(s) - rhs.eval(s)).abs());
    }
    Ok(sup)
}

fn fact(m: usize) -> f64 {
    (1..=m).map(|x| x as f64).product::<f64>().max(1.0)
}

/// Re-expands a zonal profile given in dimension g.n into the dimension-n
/// basis. Exact for band-limited profiles.
pub fn zonal_change_dimension(g: &ZonalProfile, n: usize) -> Result<ZonalProfile> {
    g.to_dimension(n)
}

/// Zonal profile on S^{n-1} of the genuine L^1-normalized Berg kernel
/// zeta_j, expanded in the P_k^n basis: surface-measure convolution
/// against this profile has exactly the berg_conv_multiplier eigenvalues.
pub fn berg_zeta_in_dimension(n: usize, j: usize, kmax: usize) -> Result<ZonalProfile> {
    let surface = omega(n - 1);
    let mut coeffs = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        coeffs.push(berg_conv_multiplier(n, j, k)? / (surface * fh_norm(n, k)));
    }
    ZonalProfile::new(n, coeffs)
}

/// Evaluates a zonal profile on a grid; helper shared by the defect checks.
pub fn sup_norm_diff(a: &ZonalProfile, b: &ZonalProfile, points: usize) -> f64 {
    let kmax = a.kmax().max(b.kmax());
    let mut sup = 0.0f64;
    for idx in 0..=points {
        let t = -1.0 + 2.0 * idx as f64 / points as f64;
        let basis_a = legendre_seq(a.n, kmax, t);
        let va: f64 = a.coeffs.iter().zip(&basis_a).map(|(c, p)| c * p).sum();
        let basis_b = legendre_seq(b.n, kmax, t);
        let vb: f64 = b.coeffs.iter().zip(&basis_b).map(|(c, p)| c * p).sum();
        sup = sup.max((va - vb).abs());
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cosine_ground_truth() {
        assert_abs_diff_eq!(cosine_multiplier(3, 1, 0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(cosine_multiplier(3, 1, 2), 0.125, epsilon = 1e-12);
        // n = 3, i = 2: the scaling constant evaluates to 1
        for k in [0usize, 2, 4, 6] {
            assert_abs_diff_eq!(
                cosine_multiplier(3, 2, k),
                cosine_multiplier(3, 1, k),
                epsilon = 1e-13
            );
        }
        assert_abs_diff_eq!(cosine_multiplier(4, 1, 1), 0.0);
    }

    #[test]
    fn cosine_multipliers_do_not_vanish() {
        for n in 3..=5 {
            for i in 1..n {
                for k in (0..=16).step_by(2) {
                    assert!(
                        cosine_multiplier(n, i, k).abs() > 1e-12,
                        "c^{i}_{k} vanished at n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn box_multipliers() {
        assert_abs_diff_eq!(box_multiplier(3, 0).unwrap(), 1.0);
        assert_abs_diff_eq!(box_multiplier(5, 1).unwrap(), 0.0);
        assert_abs_diff_eq!(box_multiplier(3, 2).unwrap(), -2.0);
    }

    #[test]
    fn berg_zeta_multipliers_in_own_dimension() {
        for j in [3usize, 4, 5] {
            let z = berg_zeta(j, 12).unwrap();
            for k in [0usize, 2, 3, 4] {
                let m = funk_hecke(j, k, |t| z.eval(t)).unwrap();
                assert_abs_diff_eq!(
                    m,
                    1.0 / box_multiplier(j, k).unwrap(),
                    epsilon = 1e-9
                );
            }
            let m1 = funk_hecke(j, 1, |t| z.eval(t)).unwrap();
            assert_abs_diff_eq!(m1, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn berg_conv_reduces_to_box_inverse_when_j_equals_n() {
        for k in [0usize, 2, 3, 5] {
            assert_abs_diff_eq!(
                berg_conv_multiplier(4, 4, k).unwrap(),
                1.0 / box_multiplier(4, k).unwrap(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn berg_conv_in_higher_dimension_matches_quadrature() {
        // Cross-check the spectral route against direct quadrature of the
        // truncated zeta_j profile re-expanded in dimension n.
        let n = 5;
        let j = 3;
        let z = berg_zeta_in_dimension(n, j, 16).unwrap();
        for k in [0usize, 2, 4] {
            let direct = z.coeffs[k] * fh_norm(n, k) * omega(n - 1);
            assert_abs_diff_eq!(
                berg_conv_multiplier(n, j, k).unwrap(),
                direct,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn radon_up_and_down_roundtrip_scales_by_norm_ratio() {
        let p = GrassProfile::new(5, 1, vec![1.0, 0.5, -0.25, 0.1]).unwrap();
        let up = radon_up(&p, 3).unwrap();
        assert_eq!(up.coeffs, p.coeffs);
        let down = radon_down(&up, 1).unwrap();
        for (k, (&a, &b)) in p.coeffs.iter().zip(&down.coeffs).enumerate() {
            let ratio = grass_norm_sq(5, 3, k) / grass_norm_sq(5, 1, k);
            assert_abs_diff_eq!(b, a * ratio, epsilon = 1e-12);
            assert!(ratio > 0.0);
        }
    }

    #[test]
    fn explicit_kernel_matches_norm_ratio_route() {
        // R_{n-1,i} of an even zonal profile, two independent routes.
        let n = 4;
        let g = ZonalProfile::new(n, vec![0.8, 0.0, -0.35, 0.0, 0.12, 0.0, 0.02]).unwrap();
        let hyper = crate::profiles::zonal_to_hyperplane(&g).unwrap();
        for i in [1usize, 2] {
            let kernel_route = radon_sphere_kernel(n, i, &g).unwrap();
            let ratio_route = if i == n - 1 {
                hyper.clone()
            } else {
                radon_down(&hyper, i).unwrap()
            };
            for (a, b) in kernel_route.coeffs.iter().zip(&ratio_route.coeffs) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn perp_is_involution() {
        let p = GrassProfile::new(5, 2, vec![0.9, -0.2, 0.07, 0.01]).unwrap();
        let q = perp(&p).unwrap();
        assert_eq!(q.i, 3);
        let back = perp(&q).unwrap();
        for (a, b) in p.coeffs.iter().zip(&back.coeffs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn perp_intertwines_radon() {
        // (R_{i,j} f)^perp = R_{n-i,n-j} f^perp
        let n = 5;
        let p = GrassProfile::new(n, 1, vec![0.6, 0.3, -0.1]).unwrap();
        let lhs = perp(&radon_up(&p, 2).unwrap()).unwrap();
        let rhs = radon_down(&perp(&p).unwrap(), 3).unwrap();
        for (a, b) in lhs.coeffs.iter().zip(&rhs.coeffs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-7);
        }
    }

    #[test]
    fn commutation_defect_small() {
        let p = GrassProfile::new(4, 1, vec![0.35, -0.6, 0.22, 0.05]).unwrap();
        assert!(commutation_defect(4, 1, 2, &p).unwrap() <= 1e-8);
        let c = GrassProfile::new(5, 2, vec![1.0]).unwrap();
        assert!(commutation_defect(5, 2, 3, &c).unwrap() <= 1e-12);
    }

    #[test]
    fn inverse_guards() {
        let seq = multiplier_seq(
            &TransformTag::InverseOf(std::boxed::Box::new(TransformTag::Cosine(1))),
            3,
            8,
        )
        .unwrap();
        let p = ZonalProfile::expand(3, |t| t.abs(), 8).unwrap();
        let forward = multiplier_seq(&TransformTag::Cosine(1), 3, 8).unwrap();
        let roundtrip =
            apply_multiplier_zonal(&apply_multiplier_zonal(&p, &forward).unwrap(), &seq).unwrap();
        for (a, b) in p.coeffs.iter().zip(&roundtrip.coeffs).step_by(2) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }

    #[test]
    fn box_inverse_composition_is_identity_off_linear() {
        let n = 4;
        let kmax = 12;
        let boxn = multiplier_seq(&TransformTag::Box(n), n, kmax).unwrap();
        let fzeta = multiplier_seq(&TransformTag::BergConv(n), n, kmax).unwrap();
        let mut p = ZonalProfile::expand(n, |t| 0.3 + 0.5 * t * t - 0.2 * t.powi(4), kmax).unwrap();
        p.coeffs[1] = 0.0;
        let out = apply_multiplier_zonal(&apply_multiplier_zonal(&p, &boxn).unwrap(), &fzeta)
            .unwrap();
        for (a, b) in p.coeffs.iter().zip(&out.coeffs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }
}
