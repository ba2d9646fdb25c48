//! Hard Lefschetz operators on even Minkowski valuations: the derivation
//! Lambda (degree i -> i-1, Steiner derivative at the ball), the
//! integration L (degree i -> i+1, hyperplane-section average), and the
//! Alesker-Fourier transform F (degree i -> n-i). All are diagonal
//! multiplier pipelines on the representations of `mval`.

use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::mval::{evaluate, Rep, ValuationRep};
use crate::profiles::grass_norm_sq;
use crate::specfun::{kappa, kappa_ext};
use crate::transforms::{
    apply_multiplier_zonal, multiplier_seq, perp, radon_down, radon_up, TransformTag,
};

/// Bookkeeping record emitted alongside every operator application.
#[derive(Debug, Clone)]
pub struct OperatorReport {
    pub op: &'static str,
    pub rep: &'static str,
    pub degree_in: usize,
    pub degree_out: usize,
    /// scalar constant applied on top of the structural transform
    pub constant: f64,
}

fn fact(m: usize) -> f64 {
    (1..=m).map(|x| x as f64).product()
}

/// Derivation Lambda: d/dt at 0 of K -> Phi(K + tB), degree i -> i-1.
pub fn lambda_op(v: &ValuationRep) -> Result<(ValuationRep, OperatorReport)> {
    let (n, i) = (v.n, v.i);
    if i < 2 {
        return Err(Error::DegreeOutOfRange {
            what: "Lambda operand degree",
            n,
            i,
            range: "2..=n-1",
        });
    }
    let (out, constant) = match &v.rep {
        Rep::Generating { .. } => {
            let scaled = v.scale(i as f64);
            (
                ValuationRep {
                    i: i - 1,
                    ..scaled
                },
                i as f64,
            )
        }
        Rep::Crofton(p) => {
            let c = i as f64 * kappa(i) / kappa(i - 1);
            (
                ValuationRep::crofton(n, i - 1, radon_down(p, i - 1)?.scale(c))?,
                c,
            )
        }
        Rep::Klain(p) => {
            let c = (n - i + 1) as f64 * kappa(n - i + 1) / kappa(n - i);
            (
                ValuationRep::klain(n, i - 1, radon_down(p, i - 1)?.scale(c))?,
                c,
            )
        }
    };
    let report = OperatorReport {
        op: "lambda",
        rep: v.rep_name(),
        degree_in: i,
        degree_out: i - 1,
        constant,
    };
    Ok((out, report))
}

/// Integration operator L, degree i -> i+1.
///
/// Crofton and Klain branches use the upward Radon transform (identity on
/// coefficients) with their scalar constants. The generating branch is the
/// composite R_{n-1,i+1}^{-1} R_{i,i+1} R_{n-1,i}, which collapses to the
/// diagonal norm-ratio multiplier N_{i+1,k} / N_{i,k}.
pub fn l_op(v: &ValuationRep) -> Result<(ValuationRep, OperatorReport)> {
    let (n, i) = (v.n, v.i);
    if i > n - 2 {
        return Err(Error::DegreeOutOfRange {
            what: "L operand degree",
            n,
            i,
            range: "1..=n-2",
        });
    }
    let (out, constant) = match &v.rep {
        Rep::Crofton(p) => {
            let c = (n - i) as f64 * kappa(n - i) / (2.0 * kappa(n - i - 1));
            (
                ValuationRep::crofton(n, i + 1, radon_up(p, i + 1)?.scale(c))?,
                c,
            )
        }
        Rep::Klain(p) => {
            let c = (i + 1) as f64 * kappa(i + 1) / (2.0 * kappa(i));
            (
                ValuationRep::klain(n, i + 1, radon_up(p, i + 1)?.scale(c))?,
                c,
            )
        }
        Rep::Generating { profile, .. } => {
            let c = (n - i) as f64 * kappa(i + 1) * kappa(n - i)
                / (2.0 * kappa(i) * kappa(n - i - 1));
            if !profile.is_even() {
                return Err(Error::Invalid(
                    "generating-branch L needs an even profile".into(),
                ));
            }
            let coeffs = profile
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    if k % 2 == 1 {
                        0.0
                    } else {
                        a * c * grass_norm_sq(n, i + 1, k / 2) / grass_norm_sq(n, i, k / 2)
                    }
                })
                .collect();
            (
                ValuationRep::generating(
                    n,
                    i + 1,
                    crate::profiles::ZonalProfile::new(n, coeffs)?,
                )?,
                c,
            )
        }
    };
    let report = OperatorReport {
        op: "l",
        rep: v.rep_name(),
        degree_in: i,
        degree_out: i + 1,
        constant,
    };
    Ok((out, report))
}

/// Constant c_{n,i} of the Berg-kernel form of L:
/// i (n-i-1)(n-i+1) k_{n-i-2}^2 k_{n-i+1} k_i
///   / (2 (n-i)(i+1) k_{n-i-3} k_{n-i}^2 k_{i-1}),
/// with kappa continued to index -1 when n - i = 2.
pub fn l_berg_constant(n: usize, i: usize) -> Result<f64> {
    let ni = n - i;
    Ok(
        (i * (ni - 1) * (ni + 1)) as f64 * kappa(ni - 2).powi(2) * kappa(ni + 1) * kappa(i)
            / (2.0 * (ni * (i + 1)) as f64
                * kappa_ext(ni as i64 - 3)?
                * kappa(ni).powi(2)
                * kappa(i - 1)),
    )
}

/// L on the generating function via Berg convolution kernels
/// (works for profiles with zero linear component, even or not):
/// invert the dimension-(n-i+1) Berg transform, apply the
/// dimension-(n-i) one, scale by c_{n,i}.
pub fn l_op_berg(v: &ValuationRep) -> Result<(ValuationRep, OperatorReport)> {
    let (n, i) = (v.n, v.i);
    if i > n - 2 {
        return Err(Error::DegreeOutOfRange {
            what: "L operand degree",
            n,
            i,
            range: "1..=n-2",
        });
    }
    let Rep::Generating { profile, .. } = &v.rep else {
        return Err(Error::Invalid("l_op_berg needs the generating form".into()));
    };
    if profile.coeffs.len() > 1 && profile.coeffs[1].abs() > 1e-12 {
        return Err(Error::Invalid(
            "l_op_berg needs a zero linear component".into(),
        ));
    }
    let kmax = profile.kmax();
    let inv = multiplier_seq(
        &TransformTag::InverseOf(Box::new(TransformTag::BergConv(n - i + 1))),
        n,
        kmax,
    )?;
    let fwd = multiplier_seq(&TransformTag::BergConv(n - i), n, kmax)?;
    let c = l_berg_constant(n, i)?;
    let out = apply_multiplier_zonal(&apply_multiplier_zonal(profile, &inv)?, &fwd)?.scale(c);
    let out = ValuationRep {
        n,
        i: i + 1,
        rep: Rep::Generating {
            profile: out,
            exact: None,
        },
    };
    let report = OperatorReport {
        op: "l-berg",
        rep: "generating",
        degree_in: i,
        degree_out: i + 1,
        constant: c,
    };
    Ok((out, report))
}

/// Alesker-Fourier transform on the Klain representation: the profile of
/// the degree-(n-i) transform is the orthogonal-complement reflection of
/// the degree-i profile. An involution.
pub fn fourier_op(v: &ValuationRep) -> Result<(ValuationRep, OperatorReport)> {
    let (n, i) = (v.n, v.i);
    let Rep::Klain(p) = &v.rep else {
        return Err(Error::Invalid("fourier_op needs the Klain form".into()));
    };
    let out = ValuationRep::klain(n, n - i, perp(p)?)?;
    let report = OperatorReport {
        op: "fourier",
        rep: "klain",
        degree_in: i,
        degree_out: n - i,
        constant: 1.0,
    };
    Ok((out, report))
}

/// Finite-difference realization of Lambda: one-sided second-order
/// difference of t -> h(Phi(K + tB), u) at t = 0 (outer parallel bodies
/// only, so no inner-body subtleties).
pub fn lambda_steiner_oracle(
    v: &ValuationRep,
    body: &ConvexBody,
    u: &[f64],
    h_step: f64,
) -> Result<f64> {
    let at = |t: f64| -> Result<f64> {
        if t == 0.0 {
            evaluate(v, body, u)
        } else {
            evaluate(
                v,
                &ConvexBody::BallSum {
                    base: Box::new(body.clone()),
                    t,
                },
                u,
            )
        }
    };
    let f0 = at(0.0)?;
    let f1 = at(h_step)?;
    let f2 = at(2.0 * h_step)?;
    Ok((-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h_step))
}

/// Constant of the i-fold L-iterate law for the first mean section
/// operator: n! k_n / (2^i (n-i)! k_{n-i}).
pub fn l_iterate_meansection(n: usize, i: usize) -> Result<f64> {
    if i > n - 2 {
        return Err(Error::DegreeOutOfRange {
            what: "L iterate count",
            n,
            i,
            range: "0..=n-2",
        });
    }
    Ok(fact(n) * kappa(n) / (2f64.powi(i as i32) * fact(n - i) * kappa(n - i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mval::{builtin, builtin_pi, to_klain, Builtin};
    use crate::profiles::ZonalProfile;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lambda_iterates_on_projection_bodies() {
        // Lambda^{n-1-i} Pi_{n-1} = ((n-1)!/i!) Pi_i, exact coefficients
        let n = 5;
        for i in 1..=3usize {
            let mut v = builtin_pi(n, n - 1, 12).unwrap();
            while v.i > i {
                v = lambda_op(&v).unwrap().0;
            }
            let expect = builtin_pi(n, i, 12).unwrap();
            let factor = fact(n - 1) / fact(i);
            let (Rep::Generating { profile: got, .. }, Rep::Generating { profile: want, .. }) =
                (&v.rep, &expect.rep)
            else {
                unreachable!()
            };
            for (a, b) in got.coeffs.iter().zip(&want.coeffs) {
                assert_abs_diff_eq!(*a, factor * b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn lambda_commutes_with_conversion() {
        let v = builtin_pi(4, 2, 16).unwrap();
        let route1 = to_klain(&lambda_op(&v).unwrap().0).unwrap();
        let route2 = lambda_op(&to_klain(&v).unwrap()).unwrap().0;
        let (Rep::Klain(p1), Rep::Klain(p2)) = (&route1.rep, &route2.rep) else {
            unreachable!()
        };
        for (a, b) in p1.coeffs.iter().zip(&p2.coeffs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }

    #[test]
    fn l_crofton_constant_example() {
        // n = 3, i = 1: (n-i) kappa_{n-i} / (2 kappa_{n-i-1}) = pi/2
        let p = crate::profiles::GrassProfile::new(3, 1, vec![1.0]).unwrap();
        let v = ValuationRep::crofton(3, 1, p).unwrap();
        let (_, report) = l_op(&v).unwrap();
        assert_abs_diff_eq!(report.constant, std::f64::consts::PI / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn l_generating_matches_berg_pipeline() {
        for (n, i) in [(4usize, 1usize), (4, 2), (5, 2)] {
            let mut coeffs = vec![0.0; 17];
            for (k, c) in coeffs.iter_mut().enumerate() {
                if k % 2 == 0 {
                    *c = 0.7 / (1.0 + (k * k * k) as f64);
                }
            }
            let g = ZonalProfile::new(n, coeffs).unwrap();
            let v = ValuationRep::generating(n, i, g).unwrap();
            let direct = l_op(&v).unwrap().0;
            let berg = l_op_berg(&v).unwrap().0;
            let (Rep::Generating { profile: a, .. }, Rep::Generating { profile: b, .. }) =
                (&direct.rep, &berg.rep)
            else {
                unreachable!()
            };
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-5);
            }
        }
    }

    #[test]
    fn mean_section_recursion() {
        // L M_j = (j kappa_j / 2 kappa_{j-1}) M_{j-1} on even parts
        let n = 4;
        let j = 4; // degree n + 1 - j = 1
        let v = builtin(Builtin::MeanSection(j), n, 16).unwrap();
        let stepped = l_op_berg(&v).unwrap().0;
        let expect = builtin(Builtin::MeanSection(j - 1), n, 16).unwrap();
        let c = j as f64 * kappa(j) / (2.0 * kappa(j - 1));
        let (Rep::Generating { profile: a, .. }, Rep::Generating { profile: b, .. }) =
            (&stepped.rep, &expect.rep)
        else {
            unreachable!()
        };
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert_abs_diff_eq!(*x, c * y, epsilon = 1e-5 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn fourier_is_involution_and_links_lambda_to_l() {
        let v = to_klain(&builtin_pi(4, 2, 16).unwrap()).unwrap();
        let twice = fourier_op(&fourier_op(&v).unwrap().0).unwrap().0;
        let (Rep::Klain(p0), Rep::Klain(p2)) = (&v.rep, &twice.rep) else {
            unreachable!()
        };
        for (a, b) in p0.coeffs.iter().zip(&p2.coeffs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
        // F Lambda = 2 L F
        let lhs = fourier_op(&lambda_op(&v).unwrap().0).unwrap().0;
        let rhs = l_op(&fourier_op(&v).unwrap().0).unwrap().0.scale(2.0);
        assert_eq!(lhs.i, rhs.i);
        let (Rep::Klain(pl), Rep::Klain(pr)) = (&lhs.rep, &rhs.rep) else {
            unreachable!()
        };
        for (a, b) in pl.coeffs.iter().zip(&pr.coeffs) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-6);
        }
    }

    #[test]
    fn steiner_oracle_matches_lambda() {
        let v = builtin_pi(3, 2, 16).unwrap();
        let cube = crate::bodies::unit_cube();
        let u = [1.0, 0.0, 0.0];
        let fd = lambda_steiner_oracle(&v, &cube, &u, 1e-3).unwrap();
        let exact = evaluate(&lambda_op(&v).unwrap().0, &cube, &u).unwrap();
        assert_abs_diff_eq!(fd, exact, epsilon = 1e-5);

        let ball = ConvexBody::Ball { n: 3, radius: 1.0 };
        let fd = lambda_steiner_oracle(&v, &ball, &[0.0, 0.0, 1.0], 1e-3).unwrap();
        let exact = evaluate(&lambda_op(&v).unwrap().0, &ball, &[0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(fd, exact, epsilon = 1e-8);
    }

    #[test]
    fn iterate_constants() {
        assert_abs_diff_eq!(l_iterate_meansection(3, 0).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l_iterate_meansection(3, 1).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn l_iterate_reaches_mean_section() {
        // L^i J = (n! k_n / 2^i (n-i)! k_{n-i}) M_{n-i} at (n, i) = (4, 1)
        let n = 4;
        let mut v = builtin(Builtin::SteinerJ, n, 16).unwrap();
        v = l_op_berg(&v).unwrap().0;
        let expect = builtin(Builtin::MeanSection(n - 1), n, 16).unwrap();
        let c = l_iterate_meansection(n, 1).unwrap();
        let (Rep::Generating { profile: a, .. }, Rep::Generating { profile: b, .. }) =
            (&v.rep, &expect.rep)
        else {
            unreachable!()
        };
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert_abs_diff_eq!(*x, c * y, epsilon = 1e-5 * (1.0 + y.abs()));
        }
    }
}
