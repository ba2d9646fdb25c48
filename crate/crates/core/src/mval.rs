//! Even Minkowski valuation representations and the conversions between
//! them: generating function (sphere-side even zonal kernel paired with
//! area measures), spherical Crofton measure (invariant profile on the
//! Grassmannian), and Klain body support function. All conversions reduce
//! to diagonal multiplier pipelines on the shared coefficient tower.

use crate::bodies::{area_measure, is_truncated_support_function, AreaMeasure, ConvexBody};
use crate::error::{Error, Result};
use crate::profiles::{
    expand_grass, expand_grass_sqrt, hyperplane_to_zonal, zonal_to_hyperplane, GrassProfile,
    ZonalProfile,
};
use crate::specfun::{kappa, kappa_ext};
use crate::transforms::{
    apply_multiplier_grass, apply_multiplier_zonal, berg_zeta_in_dimension,
    multiplier_seq, radon_down, TransformTag,
};
use statrs::function::gamma::gamma;

fn binom(n: usize, i: usize) -> f64 {
    gamma(n as f64 + 1.0) / (gamma(i as f64 + 1.0) * gamma((n - i) as f64 + 1.0))
}

/// A kernel with a closed form, carried alongside the spectral expansion
/// so pairings with atomic measures stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactKernel {
    /// t -> c |t|
    ScaledAbs(f64),
}

#[derive(Debug, Clone)]
pub enum Rep {
    Generating {
        profile: ZonalProfile,
        exact: Option<ExactKernel>,
    },
    Crofton(GrassProfile),
    Klain(GrassProfile),
}

/// An even, translation-invariant, SO(n)-equivariant Minkowski valuation
/// of degree i, in one of its three interchangeable representations.
#[derive(Debug, Clone)]
pub struct ValuationRep {
    pub n: usize,
    pub i: usize,
    pub rep: Rep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// Projection body operator of degree i: kernel |t| / 2.
    Pi,
    /// Even part of the mean section operator M_j (degree n + 1 - j).
    MeanSection(usize),
    /// The degree-1 valuation J with h(JK, .) = S_1(K, .) * berg kernel.
    SteinerJ,
}

fn check_degree(n: usize, i: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    if i == 0 || i >= n {
        return Err(Error::DegreeOutOfRange {
            what: "valuation degree",
            n,
            i,
            range: "1..=n-1",
        });
    }
    Ok(())
}

impl ValuationRep {
    pub fn generating(n: usize, i: usize, profile: ZonalProfile) -> Result<Self> {
        check_degree(n, i)?;
        if profile.n != n {
            return Err(Error::Mismatch("profile dimension".into()));
        }
        if !profile.is_even() {
            return Err(Error::Invalid("generating function must be even".into()));
        }
        Ok(ValuationRep {
            n,
            i,
            rep: Rep::Generating {
                profile,
                exact: None,
            },
        })
    }

    pub fn crofton(n: usize, i: usize, profile: GrassProfile) -> Result<Self> {
        check_degree(n, i)?;
        if profile.n != n || profile.i != i {
            return Err(Error::Mismatch("Crofton profile indices".into()));
        }
        Ok(ValuationRep {
            n,
            i,
            rep: Rep::Crofton(profile),
        })
    }

    pub fn klain(n: usize, i: usize, profile: GrassProfile) -> Result<Self> {
        check_degree(n, i)?;
        if profile.n != n || profile.i != i {
            return Err(Error::Mismatch("Klain profile indices".into()));
        }
        Ok(ValuationRep {
            n,
            i,
            rep: Rep::Klain(profile),
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        let rep = match &self.rep {
            Rep::Generating { profile, exact } => Rep::Generating {
                profile: profile.scale(c),
                exact: exact.map(|ExactKernel::ScaledAbs(a)| ExactKernel::ScaledAbs(a * c)),
            },
            Rep::Crofton(p) => Rep::Crofton(p.scale(c)),
            Rep::Klain(p) => Rep::Klain(p.scale(c)),
        };
        ValuationRep { rep, ..self.clone() }
    }

    pub fn rep_name(&self) -> &'static str {
        match self.rep {
            Rep::Generating { .. } => "generating",
            Rep::Crofton(_) => "crofton",
            Rep::Klain(_) => "klain",
        }
    }
}

/// Constant q_{n,j} of the mean section operator:
/// (j-1)/(2 pi (n+1-j)) * k_{j-1} k_{j-2} k_{n-j} / (k_{j-3} k_{n-2}),
/// with kappa continued to negative index at j = 2.
pub fn mean_section_constant(n: usize, j: usize) -> Result<f64> {
    if j < 2 || j > n {
        return Err(Error::DegreeOutOfRange {
            what: "mean section index",
            n,
            i: j,
            range: "2..=n",
        });
    }
    Ok((j as f64 - 1.0) / (2.0 * std::f64::consts::PI * (n + 1 - j) as f64)
        * kappa(j - 1)
        * kappa(j - 2)
        * kappa(n - j)
        / (kappa_ext(j as i64 - 3)? * kappa(n - 2)))
}

pub fn builtin(which: Builtin, n: usize, kmax: usize) -> Result<ValuationRep> {
    match which {
        Builtin::Pi => Err(Error::Invalid(
            "projection body operator needs a degree; use builtin_pi".into(),
        )),
        Builtin::MeanSection(j) => {
            let degree = n + 1 - j;
            check_degree(n, degree)?;
            let q = mean_section_constant(n, j)?;
            let profile = berg_zeta_in_dimension(n, j, kmax)?.even_part().scale(q);
            ValuationRep::generating(n, degree, profile)
        }
        Builtin::SteinerJ => {
            let profile = berg_zeta_in_dimension(n, n, kmax)?.even_part();
            ValuationRep::generating(n, 1, profile)
        }
    }
}

/// Projection body operator Pi_i: generating kernel |t| / 2, carried with
/// its closed form so polytope evaluations are exact.
pub fn builtin_pi(n: usize, i: usize, kmax: usize) -> Result<ValuationRep> {
    check_degree(n, i)?;
    let profile = ZonalProfile::expand(n, |t| 0.5 * t.abs(), kmax)?;
    Ok(ValuationRep {
        n,
        i,
        rep: Rep::Generating {
            profile,
            exact: Some(ExactKernel::ScaledAbs(0.5)),
        },
    })
}

/// h(Phi K, u) = integral of g(u . v) against S_i(K, dv).
pub fn evaluate(v: &ValuationRep, body: &ConvexBody, u: &[f64]) -> Result<f64> {
    let Rep::Generating { profile, exact } = &v.rep else {
        return Err(Error::Invalid(format!(
            "evaluate needs the generating form, got {}",
            v.rep_name()
        )));
    };
    if body.dim() != v.n {
        return Err(Error::Mismatch("body dimension".into()));
    }
    let m = area_measure(body, v.i)?;
    pair_with_measure(profile, *exact, &m, u)
}

pub(crate) fn pair_with_measure(
    profile: &ZonalProfile,
    exact: Option<ExactKernel>,
    m: &AreaMeasure,
    u: &[f64],
) -> Result<f64> {
    match exact {
        Some(ExactKernel::ScaledAbs(c)) => m.pair_scaled_abs(c, u),
        None => m.pair(profile, u),
    }
}

/// Spherical Crofton measure from the generating function:
/// mu-hat = (2 k_{n-1} / k_i) R_{n-1,i} C_{n-1}^{-1} g. The inverse cosine
/// transform and the Radon step are both diagonal here; the explicit
/// 1-D kernel realization of R_{n-1,i} is kept as a cross-check
/// (transforms::radon_sphere_kernel).
pub fn to_crofton(v: &ValuationRep) -> Result<ValuationRep> {
    let (n, i) = (v.n, v.i);
    match &v.rep {
        Rep::Crofton(_) => Ok(v.clone()),
        Rep::Klain(p) => {
            let inv = multiplier_seq(
                &TransformTag::InverseOf(Box::new(TransformTag::Cosine(i))),
                n,
                p.degree_max(),
            )?;
            ValuationRep::crofton(n, i, apply_multiplier_grass(p, &inv)?)
        }
        Rep::Generating { profile, .. } => {
            let inv = multiplier_seq(
                &TransformTag::InverseOf(Box::new(TransformTag::Cosine(n - 1))),
                n,
                profile.kmax(),
            )?;
            let smoothed = apply_multiplier_zonal(profile, &inv)?;
            let hyper = zonal_to_hyperplane(&smoothed)?;
            let down = if i == n - 1 {
                hyper
            } else {
                radon_down(&hyper, i)?
            };
            ValuationRep::crofton(n, i, down.scale(2.0 * kappa(n - 1) / kappa(i)))
        }
    }
}

/// Generating function from the Crofton measure: invert the diagonal
/// R_{n-1,i}, apply C_{n-1}, scale by k_i / (2 k_{n-1}).
pub fn to_generating(v: &ValuationRep) -> Result<ValuationRep> {
    let (n, i) = (v.n, v.i);
    match &v.rep {
        Rep::Generating { .. } => Ok(v.clone()),
        Rep::Klain(_) => to_generating(&to_crofton(v)?),
        Rep::Crofton(p) => {
            // inverse of radon_down(n-1 -> i): divide by the norm ratios
            let lifted = if i == n - 1 {
                p.clone()
            } else {
                let coeffs = p
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, b)| {
                        b * crate::profiles::grass_norm_sq(n, i, k)
                            / crate::profiles::grass_norm_sq(n, n - 1, k)
                    })
                    .collect();
                GrassProfile::new(n, n - 1, coeffs)?
            };
            let zonal = hyperplane_to_zonal(&lifted)?;
            let cos = multiplier_seq(&TransformTag::Cosine(n - 1), n, zonal.kmax())?;
            let g = apply_multiplier_zonal(&zonal, &cos)?.scale(kappa(i) / (2.0 * kappa(n - 1)));
            ValuationRep::generating(n, i, g)
        }
    }
}

/// Klain body support function h(M, .) as an invariant profile in
/// r = |P_ebar u|: the cosine transform of the Crofton measure.
pub fn to_klain(v: &ValuationRep) -> Result<ValuationRep> {
    let (n, i) = (v.n, v.i);
    match &v.rep {
        Rep::Klain(_) => Ok(v.clone()),
        Rep::Crofton(p) => {
            let cos = multiplier_seq(&TransformTag::Cosine(i), n, p.degree_max())?;
            ValuationRep::klain(n, i, apply_multiplier_grass(p, &cos)?)
        }
        Rep::Generating { .. } => to_klain(&to_crofton(v)?),
    }
}

/// Oracle route to the Klain profile: M = Phi_i K_ebar, so h(M, u) is the
/// pairing of the generating kernel with the uniform i-th area measure of
/// the unit subspace cube, evaluated along u(r) = r a + sqrt(1-r^2) b with
/// a in ebar, b orthogonal.
pub fn klain_body_direct(v: &ValuationRep) -> Result<GrassProfile> {
    let (n, i) = (v.n, v.i);
    let Rep::Generating { profile, exact } = &v.rep else {
        return Err(Error::Invalid("klain_body_direct needs the generating form".into()));
    };
    let cube = ConvexBody::SubspaceCube { n, i };
    let m = area_measure(&cube, i)?;
    let count = profile.kmax() / 2 + 1;
    let failed = std::cell::Cell::new(false);
    let sample = |r: f64| {
        let r = r.clamp(0.0, 1.0);
        let mut u = vec![0.0; n];
        u[0] = r;
        u[n - 1] = (1.0 - r * r).sqrt();
        match pair_with_measure(profile, *exact, &m, &u) {
            Ok(x) => x,
            Err(_) => {
                failed.set(true);
                0.0
            }
        }
    };
    // With the exact |t| kernel the pairing carries a sqrt(1 - r^2) factor
    // (the orthogonal component of u), which a plain quadrature projection
    // resolves only algebraically; fold it into the weight instead.
    let out = if exact.is_some() {
        expand_grass_sqrt(
            n,
            i,
            |r| sample(r) / (1.0 - r * r).max(f64::EPSILON).sqrt(),
            count,
        )
    } else {
        expand_grass(n, i, sample, count)
    };
    if failed.get() {
        return Err(Error::Invalid("pairing failed inside klain_body_direct".into()));
    }
    out
}

/// Convexity test of the Klain profile along a great circle through the
/// distinguished subspace and its complement (support-function test with
/// truncation-aware tolerance). Returns (acceptable, margin).
pub fn klain_support_margin(v: &ValuationRep) -> Result<(bool, f64)> {
    let Rep::Klain(p) = &v.rep else {
        return Err(Error::Invalid("klain_support_margin needs the Klain form".into()));
    };
    // p(|t|) is a polynomial in t^2, so the zonal re-expansion is exact
    let g = ZonalProfile::expand(p.n, |t| p.eval(t.abs()), 2 * p.degree_max().max(1))?;
    is_truncated_support_function(&g)
}

/// Expected Klain profile of Pi_i: R sqrt(1 - r^2) with
/// R = (1/2) * mass * mean of |tau| on S^{n-i-1}.
pub fn pi_klain_radius(n: usize, i: usize) -> f64 {
    let mass = n as f64 * kappa(n - i) / binom(n, i);
    let d = n - i;
    let abs_mean = if d == 1 {
        1.0
    } else {
        crate::specfun::omega(d - 2) / crate::specfun::omega(d - 1) * 2.0 / (d as f64 - 1.0)
    };
    0.5 * mass * abs_mean
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{projection_volume, unit_cube};
    use crate::profiles::disk_profile;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_even(n: usize, kmax: usize, rng: &mut ChaCha8Rng) -> ZonalProfile {
        let coeffs = (0..=kmax)
            .map(|k| {
                if k % 2 == 1 {
                    0.0
                } else {
                    rng.gen_range(-1.0..1.0) / (1.0 + (k * k) as f64)
                }
            })
            .collect();
        ZonalProfile::new(n, coeffs).unwrap()
    }

    #[test]
    fn pi_coefficients() {
        let v = builtin_pi(3, 2, 8).unwrap();
        let Rep::Generating { profile, .. } = &v.rep else {
            unreachable!()
        };
        assert_abs_diff_eq!(profile.coeffs[0], 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(profile.coeffs[2], 5.0 / 16.0, epsilon = 1e-12);
    }

    #[test]
    fn mean_section_constants() {
        assert_abs_diff_eq!(
            mean_section_constant(4, 3).unwrap(),
            2.0 / std::f64::consts::PI,
            epsilon = 1e-14
        );
        // q_{n,2} = 1/(n-1) via the continued kappa_{-1} = 1/pi
        assert_abs_diff_eq!(mean_section_constant(4, 2).unwrap(), 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn cube_evaluation_is_projection_volume() {
        let v = builtin_pi(3, 2, 16).unwrap();
        let cube = unit_cube();
        let ConvexBody::Polytope { vertices } = &cube else {
            unreachable!()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let mut u = [0.0f64; 3];
            loop {
                for x in &mut u {
                    *x = rng.gen_range(-1.0..1.0);
                }
                let s: f64 = u.iter().map(|x| x * x).sum();
                if s > 0.1 && s < 1.0 {
                    let s = s.sqrt();
                    u.iter_mut().for_each(|x| *x /= s);
                    break;
                }
            }
            assert_abs_diff_eq!(
                evaluate(&v, &cube, &u).unwrap(),
                projection_volume(vertices, &u).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn ball_evaluation_is_constant() {
        let v = builtin_pi(4, 2, 16).unwrap();
        let ball = ConvexBody::Ball { n: 4, radius: 1.0 };
        let h0 = evaluate(&v, &ball, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let h1 = evaluate(&v, &ball, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(h0, h1, epsilon = 1e-10);
        assert!(h0 > 0.0);
    }

    #[test]
    fn conversion_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (n, i) in [(3usize, 1usize), (4, 2), (5, 3)] {
            let g = random_even(n, 16, &mut rng);
            let v = ValuationRep::generating(n, i, g.clone()).unwrap();
            let back = to_generating(&to_crofton(&v).unwrap()).unwrap();
            let Rep::Generating { profile, .. } = &back.rep else {
                unreachable!()
            };
            for (a, b) in g.coeffs.iter().zip(&profile.coeffs) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn klain_triangle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, i) in [(3usize, 2usize), (4, 1), (4, 3), (5, 2)] {
            let g = random_even(n, 16, &mut rng);
            let v = ValuationRep::generating(n, i, g).unwrap();
            let via_crofton = to_klain(&v).unwrap();
            let Rep::Klain(p1) = &via_crofton.rep else {
                unreachable!()
            };
            let direct = klain_body_direct(&v).unwrap();
            for (a, b) in p1.coeffs.iter().zip(&direct.coeffs) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn pi_klain_body_is_a_disk() {
        for (n, i) in [(3usize, 1usize), (3, 2), (4, 2)] {
            let v = builtin_pi(n, i, 24).unwrap();
            let k = to_klain(&v).unwrap();
            let Rep::Klain(p) = &k.rep else { unreachable!() };
            let expected = disk_profile(n, i, p.coeffs.len())
                .unwrap()
                .scale(pi_klain_radius(n, i));
            for (a, b) in p.coeffs.iter().zip(&expected.coeffs) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn constant_generating_gives_constant_klain() {
        let n = 4;
        let i = 2;
        let c = 0.7;
        let g = ZonalProfile::new(n, vec![c]).unwrap();
        let v = ValuationRep::generating(n, i, g).unwrap();
        let direct = klain_body_direct(&v).unwrap();
        let expected = c * n as f64 * kappa(n - i) / binom(n, i);
        assert_abs_diff_eq!(direct.coeffs[0], expected, epsilon = 1e-10);
        for b in &direct.coeffs[1..] {
            assert_abs_diff_eq!(*b, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn steiner_j_has_no_linear_component() {
        let v = builtin(Builtin::SteinerJ, 4, 12).unwrap();
        let Rep::Generating { profile, .. } = &v.rep else {
            unreachable!()
        };
        assert_abs_diff_eq!(profile.coeffs[1], 0.0);
        assert_eq!(v.i, 1);
    }

    #[test]
    fn klain_support_margin_of_pi() {
        // the Klain body of Pi_2 in R^3 is a segment; its corner profile
        // passes the truncation-aware support test
        let v = to_klain(&builtin_pi(3, 2, 24).unwrap()).unwrap();
        let (ok, margin) = klain_support_margin(&v).unwrap();
        assert!(ok, "margin {margin}");
    }
}
