//! Convex bodies at desk scale: support functions, low-order area
//! measures, and projection volumes for the body classes the valuation
//! machinery is exercised on (polytopes in R^3, balls, zonal smooth
//! bodies, lower-dimensional cubes, and outer parallel bodies).
//!
//! Conventions: the distinguished subspace e-bar of index i is the span of
//! the first i coordinates; zonal bodies and densities use the e_1 axis.

use crate::error::{Error, Result};
use crate::profiles::{legendre_seq, ZonalProfile};
use crate::specfun::{cached_rule, fh_norm, kappa, legendre_nd, omega};
use statrs::function::gamma::gamma;

fn binom(n: usize, i: usize) -> f64 {
    gamma(n as f64 + 1.0) / (gamma(i as f64 + 1.0) * gamma((n - i) as f64 + 1.0))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn check_unit(u: &[f64]) -> Result<()> {
    if (norm(u) - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid(format!(
            "direction must be a unit vector, |u| = {}",
            norm(u)
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub enum ConvexBody {
    /// Convex hull of a vertex list (area measures implemented for n = 3).
    Polytope { vertices: Vec<Vec<f64>> },
    Ball { n: usize, radius: f64 },
    /// Body of revolution about e_1 with support function p(e_1 . u).
    ZonalSmooth { profile: ZonalProfile },
    /// Unit i-volume cube inside the distinguished subspace e-bar.
    SubspaceCube { n: usize, i: usize },
    /// Outer parallel body: base + t * unit ball.
    BallSum { base: Box<ConvexBody>, t: f64 },
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope { vertices } => vertices.first().map_or(0, Vec::len),
            ConvexBody::Ball { n, .. } => *n,
            ConvexBody::ZonalSmooth { profile } => profile.n,
            ConvexBody::SubspaceCube { n, .. } => *n,
            ConvexBody::BallSum { base, .. } => base.dim(),
        }
    }

    /// h(K, u) = max { u.x : x in K }.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        check_unit(u)?;
        match self {
            ConvexBody::Polytope { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::Invalid("empty vertex list".into()));
                }
                Ok(vertices
                    .iter()
                    .map(|v| dot(v, u))
                    .fold(f64::NEG_INFINITY, f64::max))
            }
            ConvexBody::Ball { radius, .. } => Ok(*radius),
            ConvexBody::ZonalSmooth { profile } => Ok(profile.eval(u[0])),
            ConvexBody::SubspaceCube { i, .. } => {
                // cube [-1/2, 1/2]^i x {0}
                Ok(u[..*i].iter().map(|x| 0.5 * x.abs()).sum())
            }
            ConvexBody::BallSum { base, t } => Ok(base.support(u)? + t),
        }
    }
}

/// One great-circle arc of normals carried by an edge: directions
/// cos(theta) e1 + sin(theta) e2 for theta in [theta0, theta1], with a
/// measure density in mass per radian.
#[derive(Debug, Clone)]
pub struct Arc {
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    pub theta0: f64,
    pub theta1: f64,
    pub density: f64,
}

#[derive(Debug, Clone)]
pub enum AreaMeasure {
    Atomic { n: usize, atoms: Vec<(Vec<f64>, f64)> },
    UniformSphere { n: usize, mass: f64 },
    /// Uniform on the unit sphere of the orthogonal complement of the
    /// distinguished i-dimensional subspace.
    UniformSubsphere { n: usize, i: usize, mass: f64 },
    /// Density against the (unnormalized) spherical Lebesgue measure,
    /// zonal about e_1.
    ZonalDensity { density: ZonalProfile },
    EdgeArcs { n: usize, arcs: Vec<Arc> },
    Combo(Vec<(f64, AreaMeasure)>),
}

impl AreaMeasure {
    pub fn dim(&self) -> usize {
        match self {
            AreaMeasure::Atomic { n, .. }
            | AreaMeasure::UniformSphere { n, .. }
            | AreaMeasure::UniformSubsphere { n, .. }
            | AreaMeasure::EdgeArcs { n, .. } => *n,
            AreaMeasure::ZonalDensity { density } => density.n,
            AreaMeasure::Combo(parts) => parts.first().map_or(0, |(_, m)| m.dim()),
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            AreaMeasure::Atomic { atoms, .. } => atoms.iter().map(|(_, m)| m).sum(),
            AreaMeasure::UniformSphere { mass, .. } => *mass,
            AreaMeasure::UniformSubsphere { mass, .. } => *mass,
            AreaMeasure::ZonalDensity { density } => omega(density.n - 1) * density.coeffs[0],
            AreaMeasure::EdgeArcs { arcs, .. } => arcs
                .iter()
                .map(|a| a.density * (a.theta1 - a.theta0))
                .sum(),
            AreaMeasure::Combo(parts) => parts.iter().map(|(c, m)| c * m.total_mass()).sum(),
        }
    }

    /// Integral of v -> f(u . v) against the measure.
    ///
    /// Uniform-sphere and zonal variants need the kernel coefficients, so
    /// `f` is passed together with its zonal expansion; atomic and arc
    /// variants use `f` directly.
    pub fn pair(&self, g: &ZonalProfile, u: &[f64]) -> Result<f64> {
        self.pair_fn(&|t| g.eval(t), Some(g), u)
    }

    /// Integral of v -> f(u . v) for a raw kernel; the uniform and zonal
    /// variants expand f on demand.
    pub fn pair_kernel(&self, f: &dyn Fn(f64) -> f64, u: &[f64]) -> Result<f64> {
        self.pair_fn(f, None, u)
    }

    fn pair_fn(&self, f: &dyn Fn(f64) -> f64, g: Option<&ZonalProfile>, u: &[f64]) -> Result<f64> {
        check_unit(u)?;
        let n = self.dim();
        match self {
            AreaMeasure::Atomic { atoms, .. } => {
                Ok(atoms.iter().map(|(v, m)| m * f(dot(u, v))).sum())
            }
            AreaMeasure::UniformSphere { mass, .. } => {
                Ok(mass * sphere_average(n, f, g)?)
            }
            AreaMeasure::UniformSubsphere { i, mass, .. } => {
                let rho = norm(&u[*i..]).min(1.0);
                Ok(mass * subsphere_average(n - i, rho, f)?)
            }
            AreaMeasure::ZonalDensity { density } => {
                let gp;
                let g = match g {
                    Some(g) => g,
                    None => {
                        gp = ZonalProfile::expand(n, f, density.kmax().max(32))?;
                        &gp
                    }
                };
                if g.n != n {
                    return Err(Error::Mismatch("kernel dimension".into()));
                }
                let kmax = density.kmax().min(g.kmax());
                let basis = legendre_seq(n, kmax, u[0]);
                let mut sum = 0.0;
                for k in 0..=kmax {
                    sum += density.coeffs[k] * g.coeffs[k] * fh_norm(n, k) * basis[k];
                }
                Ok(omega(n - 1) * sum)
            }
            AreaMeasure::EdgeArcs { arcs, .. } => {
                // enough nodes to resolve band-limited kernels over a full
                // circle of normals (trig degree up to ~60)
                let rule = cached_rule(0.0, 0.0, 160)?;
                let mut total = 0.0;
                for a in arcs {
                    let (c1, c2) = (dot(u, &a.e1), dot(u, &a.e2));
                    let mid = 0.5 * (a.theta0 + a.theta1);
                    let half = 0.5 * (a.theta1 - a.theta0);
                    total += a.density
                        * half
                        * rule.integrate(|x| {
                            let th = mid + half * x;
                            f(c1 * th.cos() + c2 * th.sin())
                        });
                }
                Ok(total)
            }
            AreaMeasure::Combo(parts) => {
                let mut total = 0.0;
                for (c, m) in parts {
                    total += c * m.pair_fn(f, g, u)?;
                }
                Ok(total)
            }
        }
    }

    /// Exact integral of v -> c |u . v| against the measure: finite sums
    /// for atoms, closed-form antiderivatives on arcs, and the closed-form
    /// mean of |t| on spheres. No quadrature error anywhere.
    pub fn pair_scaled_abs(&self, c: f64, u: &[f64]) -> Result<f64> {
        check_unit(u)?;
        let n = self.dim();
        match self {
            AreaMeasure::Atomic { atoms, .. } => {
                Ok(c * atoms.iter().map(|(v, m)| m * dot(u, v).abs()).sum::<f64>())
            }
            AreaMeasure::UniformSphere { mass, .. } => Ok(c * mass * abs_mean(n)),
            AreaMeasure::UniformSubsphere { i, mass, .. } => {
                let rho = norm(&u[*i..]).min(1.0);
                Ok(c * mass * rho * abs_mean(n - i))
            }
            AreaMeasure::ZonalDensity { density } => {
                let kmax = density.kmax();
                let basis = legendre_seq(n, kmax, u[0]);
                let mut sum = 0.0;
                for k in 0..=kmax {
                    sum += density.coeffs[k]
                        * crate::transforms::spherical_cosine_multiplier(n, k)
                        * basis[k];
                }
                Ok(c * omega(n - 1) * sum)
            }
            AreaMeasure::EdgeArcs { arcs, .. } => {
                let mut total = 0.0;
                for a in arcs {
                    let (c1, c2) = (dot(u, &a.e1), dot(u, &a.e2));
                    let amp = c1.hypot(c2);
                    if amp < 1e-300 {
                        continue;
                    }
                    let phi = c2.atan2(c1);
                    total +=
                        a.density * amp * (abs_cos_primitive(a.theta1 - phi)
                            - abs_cos_primitive(a.theta0 - phi));
                }
                Ok(c * total)
            }
            AreaMeasure::Combo(parts) => {
                let mut total = 0.0;
                for (co, m) in parts {
                    total += co * m.pair_scaled_abs(c, u)?;
                }
                Ok(total)
            }
        }
    }
}

/// Average of f(u . v) over v uniform on S^{n-1} (independent of u).
fn sphere_average(n: usize, f: &dyn Fn(f64) -> f64, g: Option<&ZonalProfile>) -> Result<f64> {
    if let Some(g) = g {
        return Ok(g.coeffs[0]);
    }
    let rule = cached_rule((n as f64 - 3.0) / 2.0, (n as f64 - 3.0) / 2.0, 96)?;
    Ok(omega(n - 2) / omega(n - 1) * rule.integrate(f))
}

/// Average of f(rho tau) over tau = u . v with v uniform on S^{d-1}.
fn subsphere_average(d: usize, rho: f64, f: &dyn Fn(f64) -> f64) -> Result<f64> {
    if d == 1 {
        return Ok(0.5 * (f(rho) + f(-rho)));
    }
    let rule = cached_rule((d as f64 - 3.0) / 2.0, (d as f64 - 3.0) / 2.0, 96)?;
    Ok(omega(d - 2) / omega(d - 1) * rule.integrate(|tau| f(rho * tau)))
}

/// Mean of |u . v| over v uniform on S^{d-1}.
fn abs_mean(d: usize) -> f64 {
    if d == 1 {
        1.0
    } else {
        omega(d - 2) / omega(d - 1) * 2.0 / (d as f64 - 1.0)
    }
}

/// Antiderivative of x -> |cos x|, continuous and increasing on all of R.
fn abs_cos_primitive(x: f64) -> f64 {
    let m = ((x + std::f64::consts::FRAC_PI_2) / std::f64::consts::PI).floor();
    2.0 * m + (x - m * std::f64::consts::PI).sin()
}

/// Area measure S_i(K, .) for the supported (body, order) pairs. Order 0
/// is allowed (spherical Lebesgue measure, any body) because the Steiner
/// combination for outer parallel bodies needs it.
pub fn area_measure(body: &ConvexBody, i: usize) -> Result<AreaMeasure> {
    let n = body.dim();
    if i >= n {
        return Err(Error::DegreeOutOfRange {
            what: "area measure order",
            n,
            i,
            range: "0..=n-1",
        });
    }
    if i == 0 {
        return Ok(AreaMeasure::UniformSphere {
            n,
            mass: n as f64 * kappa(n),
        });
    }
    match body {
        ConvexBody::Ball { n, radius } => Ok(AreaMeasure::UniformSphere {
            n: *n,
            mass: radius.powi(i as i32) * *n as f64 * kappa(*n),
        }),
        ConvexBody::ZonalSmooth { profile } => {
            if i != 1 {
                return Err(Error::Capability(format!(
                    "area measure of order {i} for a zonal smooth body (only order 1 is implemented)"
                )));
            }
            // S_1(K, .) is the elliptic operator Delta_S/(n-1) + 1 applied
            // to the support function, diagonal on the zonal expansion
            let coeffs = profile
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| Ok(a * crate::transforms::box_multiplier(n, k)?))
                .collect::<Result<Vec<f64>>>()?;
            Ok(AreaMeasure::ZonalDensity {
                density: ZonalProfile::new(n, coeffs)?,
            })
        }
        ConvexBody::SubspaceCube { n, i: dim_cube } => {
            if i != *dim_cube {
                return Err(Error::Capability(format!(
                    "area measure of order {i} for a {dim_cube}-dimensional subspace cube"
                )));
            }
            Ok(AreaMeasure::UniformSubsphere {
                n: *n,
                i: *dim_cube,
                mass: *n as f64 * kappa(n - i) / binom(*n, i),
            })
        }
        ConvexBody::BallSum { base, t } => {
            // S_i(K + tB, .) = sum_j t^{i-j} C(i, j) S_j(K, .)
            let mut parts = Vec::with_capacity(i + 1);
            for j in 0..=i {
                parts.push((t.powi((i - j) as i32) * binom(i, j), area_measure(base, j)?));
            }
            Ok(AreaMeasure::Combo(parts))
        }
        ConvexBody::Polytope { vertices } => polytope_area_measure(vertices, i),
    }
}

fn polytope_area_measure(vertices: &[Vec<f64>], i: usize) -> Result<AreaMeasure> {
    let n = vertices.first().map_or(0, Vec::len);
    if n != 3 {
        return Err(Error::Capability(format!(
            "polytope area measures are implemented for n = 3 only, got n = {n}"
        )));
    }
    match affine_rank(vertices) {
        1 => {
            // segment: S_2 vanishes, S_1 is uniform on the equator circle
            // orthogonal to the segment with total pi * length
            let (len, dir) = segment_extent(vertices);
            match i {
                2 => Ok(AreaMeasure::Atomic { n, atoms: vec![] }),
                1 => {
                    let (e1, e2) = orthonormal_complement(&dir);
                    Ok(AreaMeasure::EdgeArcs {
                        n,
                        arcs: vec![Arc {
                            e1,
                            e2,
                            theta0: 0.0,
                            theta1: 2.0 * std::f64::consts::PI,
                            density: len / 2.0,
                        }],
                    })
                }
                _ => unreachable!(),
            }
        }
        3 => {
            let hull = Hull3::build(vertices)?;
            match i {
                2 => {
                    let atoms = hull
                        .facets
                        .iter()
                        .map(|f| (f.normal.to_vec(), f.area))
                        .collect();
                    Ok(AreaMeasure::Atomic { n, atoms })
                }
                1 => {
                    // each edge carries a quarter-circle-type normal arc of
                    // length = exterior angle, density = edge length / 2
                    let arcs = hull
                        .edges
                        .iter()
                        .map(|e| {
                            let gamma = dot(&e.n1, &e.n2).clamp(-1.0, 1.0).acos();
                            let mut e2: Vec<f64> = e
                                .n2
                                .iter()
                                .zip(&e.n1)
                                .map(|(b, a)| b - dot(&e.n2, &e.n1) * a)
                                .collect();
                            let s = norm(&e2);
                            e2.iter_mut().for_each(|x| *x /= s);
                            Arc {
                                e1: e.n1.clone(),
                                e2,
                                theta0: 0.0,
                                theta1: gamma,
                                density: e.length / 2.0,
                            }
                        })
                        .collect();
                    Ok(AreaMeasure::EdgeArcs { n, arcs })
                }
                _ => unreachable!(),
            }
        }
        r => Err(Error::Capability(format!(
            "polytope of affine rank {r} (only segments and full-dimensional bodies)"
        ))),
    }
}

/// vol_{n-1}(K | u^perp) = (1/2) sum over facets of area * |u . normal|.
pub fn projection_volume(vertices: &[Vec<f64>], u: &[f64]) -> Result<f64> {
    check_unit(u)?;
    let hull = Hull3::build(vertices)?;
    Ok(0.5
        * hull
            .facets
            .iter()
            .map(|f| f.area * dot(&f.normal, u).abs())
            .sum::<f64>())
}

/// Zonal convexity test for a profile of revolution: along a meridian with
/// t = cos(theta), h(theta) = p(t) must satisfy h + h'' >= 0 in the
/// distributional sense (corners contribute nonnegative atoms).
///
/// The pointwise value of h + h'' for a truncated series oscillates wildly
/// near corners, so the test uses the Fejer mean: restrict to the meridian
/// trig series, damp coefficient m by (1 - m/(K+1)), and evaluate
/// sum (1 - m^2) c_m cos(m theta). Because the Fejer kernel is
/// nonnegative, this is >= 0 pointwise for every genuine support function
/// of revolution, truncated or not. Returns the minimal value over a grid.
pub fn support_function_margin(p: &ZonalProfile) -> Result<f64> {
    let n = p.n;
    let kmax = p.kmax();
    // meridian restriction f(theta) = p(cos theta) is a cosine polynomial
    // of degree kmax; trapezoid sums of this length recover it exactly
    let samples = 8 * (kmax + 1);
    let mut c = vec![0.0; kmax + 1];
    for j in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / samples as f64;
        let mut f = 0.0;
        for (k, a) in p.coeffs.iter().enumerate() {
            f += a * legendre_nd(n, k, theta.cos())?;
        }
        for (m, cm) in c.iter_mut().enumerate() {
            *cm += f * (m as f64 * theta).cos();
        }
    }
    for (m, cm) in c.iter_mut().enumerate() {
        *cm *= if m == 0 { 1.0 } else { 2.0 } / samples as f64;
    }
    let mut margin = f64::INFINITY;
    for idx in 0..=1440 {
        let theta = std::f64::consts::PI * idx as f64 / 1440.0;
        let mut val = 0.0;
        for (m, cm) in c.iter().enumerate() {
            let fejer = 1.0 - m as f64 / (kmax + 1) as f64;
            val += fejer * (1.0 - (m * m) as f64) * cm * (m as f64 * theta).cos();
        }
        margin = margin.min(val);
    }
    Ok(margin)
}

/// Truncation allowance for the margin test: the smoothed h + h'' of a
/// truncated genuine support function can dip below zero by roughly the
/// (1 + k^2)-weighted mass of the discarded tail, estimated here from the
/// top quarter of the kept band. Exactly band-limited profiles get no
/// allowance beyond rounding.
pub fn support_margin_tolerance(p: &ZonalProfile) -> f64 {
    let scale = p.coeffs.iter().map(|a| a.abs()).sum::<f64>().max(1e-300);
    // effective band: trailing numerically-zero coefficients don't count
    let keff = p
        .coeffs
        .iter()
        .rposition(|a| a.abs() > 1e-12 * scale)
        .unwrap_or(0);
    let cutoff = 3 * keff / 4;
    let tail: f64 = p.coeffs[..=keff]
        .iter()
        .enumerate()
        .skip(cutoff + 1)
        .map(|(k, a)| a.abs() * (1.0 + (k * k) as f64))
        .sum();
    1e-8 * scale + 2.0 * tail
}

/// Strict test: margin must be nonnegative up to rounding. Profiles that
/// are truncations of corner-bearing support functions (e.g. |t|) fail
/// this; use `is_truncated_support_function` for those.
pub fn is_support_function(p: &ZonalProfile) -> Result<(bool, f64)> {
    let margin = support_function_margin(p)?;
    let scale = p.coeffs.iter().map(|a| a.abs()).sum::<f64>().max(1e-300);
    Ok((margin >= -1e-8 * scale, margin))
}

/// Truncation-aware test: accepts margins down to the allowance implied by
/// the profile's own top-band coefficient mass.
pub fn is_truncated_support_function(p: &ZonalProfile) -> Result<(bool, f64)> {
    let margin = support_function_margin(p)?;
    Ok((margin >= -support_margin_tolerance(p), margin))
}

fn affine_rank(vertices: &[Vec<f64>]) -> usize {
    let base = &vertices[0];
    let diffs: Vec<Vec<f64>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    // Gram-Schmidt with a scale-aware tolerance
    let scale = diffs.iter().map(|d| norm(d)).fold(0.0f64, f64::max).max(1e-30);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for d in diffs {
        let mut r = d.clone();
        for b in &basis {
            let c = dot(&r, b);
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        if norm(&r) > 1e-9 * scale {
            let s = norm(&r);
            r.iter_mut().for_each(|x| *x /= s);
            basis.push(r);
        }
    }
    basis.len()
}

fn segment_extent(vertices: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let mut best = (0.0, vertices[0].clone(), vertices[0].clone());
    for a in vertices {
        for b in vertices {
            let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            if d > best.0 {
                best = (d, a.clone(), b.clone());
            }
        }
    }
    let len = best.0.sqrt();
    let dir: Vec<f64> = best
        .1
        .iter()
        .zip(&best.2)
        .map(|(a, b)| (a - b) / len)
        .collect();
    (len, dir)
}

fn orthonormal_complement(d: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pick = if d[0].abs() < 0.9 {
        vec![1.0, 0.0, 0.0]
    } else {
        vec![0.0, 1.0, 0.0]
    };
    let mut e1: Vec<f64> = pick
        .iter()
        .zip(d)
        .map(|(p, x)| p - dot(&pick, d) * x)
        .collect();
    let s = norm(&e1);
    e1.iter_mut().for_each(|x| *x /= s);
    let e2 = cross(d, &e1);
    (e1, e2)
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

struct Facet {
    normal: Vec<f64>,
    area: f64,
    /// vertex indices in cyclic order
    ring: Vec<usize>,
}

struct Edge {
    n1: Vec<f64>,
    n2: Vec<f64>,
    length: f64,
}

struct Hull3 {
    facets: Vec<Facet>,
    edges: Vec<Edge>,
}

impl Hull3 {
    /// Facet enumeration by supporting-plane search over vertex triples;
    /// coplanar vertices are merged into one facet (tolerance 1e-9). Fine
    /// for desk-scale vertex counts.
    fn build(raw: &[Vec<f64>]) -> Result<Self> {
        if raw.iter().any(|v| v.len() != 3) {
            return Err(Error::Capability("convex hull needs n = 3".into()));
        }
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        for v in raw {
            if !vertices
                .iter()
                .any(|w| w.iter().zip(v).all(|(a, b)| (a - b).abs() < 1e-12))
            {
                vertices.push(v.clone());
            }
        }
        if affine_rank(&vertices) != 3 {
            return Err(Error::Capability(
                "degenerate polytope has no facet structure".into(),
            ));
        }
        let scale = vertices
            .iter()
            .map(|v| norm(v))
            .fold(0.0f64, f64::max)
            .max(1.0);
        let tol = 1e-9 * scale;
        let m = vertices.len();
        let mut normals: Vec<(Vec<f64>, f64)> = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let ab: Vec<f64> = (0..3).map(|d| vertices[b][d] - vertices[a][d]).collect();
                    let ac: Vec<f64> = (0..3).map(|d| vertices[c][d] - vertices[a][d]).collect();
                    let mut nrm = cross(&ab, &ac);
                    let s = norm(&nrm);
                    if s < 1e-12 * scale * scale {
                        continue;
                    }
                    nrm.iter_mut().for_each(|x| *x /= s);
                    let offs: Vec<f64> = vertices.iter().map(|v| dot(v, &nrm)).collect();
                    let h0 = dot(&vertices[a], &nrm);
                    let above = offs.iter().any(|&o| o > h0 + tol);
                    let below = offs.iter().any(|&o| o < h0 - tol);
                    let (outward, h) = if !above {
                        (nrm, h0)
                    } else if !below {
                        (nrm.iter().map(|x| -x).collect(), -h0)
                    } else {
                        continue;
                    };
                    if !normals
                        .iter()
                        .any(|(w, hh)| dot(w, &outward) > 1.0 - 1e-9 && (hh - h).abs() < tol)
                    {
                        normals.push((outward, h));
                    }
                }
            }
        }
        let mut facets = Vec::new();
        for (nrm, h) in &normals {
            let members: Vec<usize> = (0..m)
                .filter(|&v| (dot(&vertices[v], nrm) - h).abs() < tol)
                .collect();
            if members.len() < 3 {
                continue;
            }
            // order the facet vertices around their centroid
            let centroid: Vec<f64> = (0..3)
                .map(|d| members.iter().map(|&v| vertices[v][d]).sum::<f64>() / members.len() as f64)
                .collect();
            let (e1, e2) = orthonormal_complement(nrm);
            let mut ring: Vec<(f64, usize)> = members
                .iter()
                .map(|&v| {
                    let d: Vec<f64> = (0..3).map(|j| vertices[v][j] - centroid[j]).collect();
                    (dot(&d, &e2).atan2(dot(&d, &e1)), v)
                })
                .collect();
            ring.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let ring: Vec<usize> = ring.into_iter().map(|(_, v)| v).collect();
            let mut area2 = vec![0.0; 3];
            for w in 0..ring.len() {
                let p = &vertices[ring[w]];
                let q = &vertices[ring[(w + 1) % ring.len()]];
                let c = cross(p, q);
                area2.iter_mut().zip(&c).for_each(|(x, y)| *x += y);
            }
            let mut area = 0.5 * dot(&area2, nrm);
            if area < 0.0 {
                area = -area;
            }
            facets.push(Facet {
                normal: nrm.clone(),
                area,
                ring,
            });
        }
        // edges: vertex pairs adjacent in exactly two facet rings
        let mut edge_map: HashMapEdge = std::collections::HashMap::new();
        for (fi, f) in facets.iter().enumerate() {
            for w in 0..f.ring.len() {
                let a = f.ring[w];
                let b = f.ring[(w + 1) % f.ring.len()];
                let key = (a.min(b), a.max(b));
                edge_map.entry(key).or_default().push(fi);
            }
        }
        let mut edges = Vec::new();
        for ((a, b), fs) in &edge_map {
            if fs.len() != 2 {
                continue;
            }
            let length: f64 = (0..3)
                .map(|d| (vertices[*a][d] - vertices[*b][d]).powi(2))
                .sum::<f64>()
                .sqrt();
            edges.push(Edge {
                n1: facets[fs[0]].normal.clone(),
                n2: facets[fs[1]].normal.clone(),
                length,
            });
        }
        Ok(Hull3 { facets, edges })
    }
}

type HashMapEdge = std::collections::HashMap<(usize, usize), Vec<usize>>;

/// Unit cube [0,1]^3.
pub fn unit_cube() -> ConvexBody {
    let mut vertices = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                vertices.push(vec![x as f64, y as f64, z as f64]);
            }
        }
    }
    ConvexBody::Polytope { vertices }
}

/// Direct geometric decomposition of the surface area measure of a
/// 3-polytope's outer parallel body K + tB: translated facets, cylindrical
/// bands over the edges (density length * t per radian), and spherical
/// caps summing to t^2 times the full sphere. Independent cross-check for
/// the Steiner combination of `area_measure`.
pub fn sausage_surface_measure(vertices: &[Vec<f64>], t: f64) -> Result<AreaMeasure> {
    let facets = polytope_area_measure(vertices, 2)?;
    let arcs = match polytope_area_measure(vertices, 1)? {
        AreaMeasure::EdgeArcs { arcs, .. } => arcs
            .into_iter()
            .map(|a| Arc {
                density: 2.0 * t * a.density,
                ..a
            })
            .collect(),
        _ => unreachable!(),
    };
    Ok(AreaMeasure::Combo(vec![
        (1.0, facets),
        (1.0, AreaMeasure::EdgeArcs { n: 3, arcs }),
        (
            t * t,
            AreaMeasure::UniformSphere {
                n: 3,
                mass: 3.0 * kappa(3),
            },
        ),
    ]))
}

/// Total-mass law: S_i(K, S^{n-1}) = n C(n,i)^{-1} kappa_{n-i} V_i(K).
pub fn expected_total_mass(n: usize, i: usize, intrinsic_volume: f64) -> f64 {
    n as f64 * kappa(n - i) / binom(n, i) * intrinsic_volume
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn support_basics() {
        let cube = unit_cube();
        assert_abs_diff_eq!(cube.support(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        let ball = ConvexBody::Ball { n: 3, radius: 2.0 };
        assert_abs_diff_eq!(ball.support(&[0.0, 1.0, 0.0]).unwrap(), 2.0);
        let sum = ConvexBody::BallSum {
            base: Box::new(unit_cube()),
            t: 0.5,
        };
        assert_abs_diff_eq!(sum.support(&[1.0, 0.0, 0.0]).unwrap(), 1.5);
    }

    #[test]
    fn cube_facets() {
        let m = area_measure(&unit_cube(), 2).unwrap();
        let AreaMeasure::Atomic { atoms, .. } = &m else {
            panic!("expected atoms")
        };
        assert_eq!(atoms.len(), 6);
        for (_, mass) in atoms {
            assert_abs_diff_eq!(*mass, 1.0, epsilon = 1e-12);
        }
        // centroid condition: facet normals close up
        for d in 0..3 {
            let c: f64 = atoms.iter().map(|(v, m)| m * v[d]).sum();
            assert_abs_diff_eq!(c, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn cube_first_order_measure() {
        let m = area_measure(&unit_cube(), 1).unwrap();
        let AreaMeasure::EdgeArcs { arcs, .. } = &m else {
            panic!("expected arcs")
        };
        assert_eq!(arcs.len(), 12);
        for a in arcs {
            assert_abs_diff_eq!(a.theta1 - a.theta0, PI / 2.0, epsilon = 1e-9);
            assert_abs_diff_eq!(a.density, 0.5, epsilon = 1e-12);
        }
        // V_1(unit cube) = 3
        assert_abs_diff_eq!(m.total_mass(), expected_total_mass(3, 1, 3.0), epsilon = 1e-9);
        assert_abs_diff_eq!(m.total_mass(), 3.0 * PI, epsilon = 1e-9);
    }

    #[test]
    fn segment_measure() {
        let seg = ConvexBody::Polytope {
            vertices: vec![vec![0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]],
        };
        let m = area_measure(&seg, 1).unwrap();
        assert_abs_diff_eq!(m.total_mass(), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(area_measure(&seg, 2).unwrap().total_mass(), 0.0);
    }

    #[test]
    fn ball_measures() {
        let b = ConvexBody::Ball { n: 3, radius: 1.0 };
        let m = area_measure(&b, 1).unwrap();
        assert_abs_diff_eq!(m.total_mass(), 4.0 * PI, epsilon = 1e-12);
        let m2 = area_measure(&ConvexBody::Ball { n: 3, radius: 2.0 }, 2).unwrap();
        assert_abs_diff_eq!(m2.total_mass(), 16.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn total_mass_laws() {
        // V_i(rB): C(n,i) kappa_n / kappa_{n-i} r^i
        for (n, i, r) in [(3usize, 1usize, 1.5f64), (4, 2, 0.7), (5, 3, 1.0)] {
            let vi = binom(n, i) * kappa(n) / kappa(n - i) * r.powi(i as i32);
            let m = area_measure(&ConvexBody::Ball { n, radius: r }, i).unwrap();
            assert_abs_diff_eq!(m.total_mass(), expected_total_mass(n, i, vi), epsilon = 1e-10);
        }
        // subspace cube has unit i-volume, V_i = 1
        let m = area_measure(&ConvexBody::SubspaceCube { n: 4, i: 2 }, 2).unwrap();
        assert_abs_diff_eq!(m.total_mass(), expected_total_mass(4, 2, 1.0), epsilon = 1e-12);
    }

    #[test]
    fn zonal_first_order() {
        // ball as a zonal body: h = 1, S_1 density constant 1
        let b = ConvexBody::ZonalSmooth {
            profile: ZonalProfile::new(3, vec![1.0]).unwrap(),
        };
        let m = area_measure(&b, 1).unwrap();
        assert_abs_diff_eq!(m.total_mass(), 4.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn projection_volumes_of_cube() {
        let cube = unit_cube();
        let ConvexBody::Polytope { vertices } = &cube else {
            unreachable!()
        };
        assert_abs_diff_eq!(
            projection_volume(vertices, &[1.0, 0.0, 0.0]).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let s = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(
            projection_volume(vertices, &[s, s, s]).unwrap(),
            3f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn steiner_combo_matches_sausage() {
        let cube = unit_cube();
        let ConvexBody::Polytope { vertices } = cube.clone() else {
            unreachable!()
        };
        for &t in &[0.1, 0.5, 1.0] {
            let combo = area_measure(
                &ConvexBody::BallSum {
                    base: Box::new(cube.clone()),
                    t,
                },
                2,
            )
            .unwrap();
            let direct = sausage_surface_measure(&vertices, t).unwrap();
            assert_abs_diff_eq!(combo.total_mass(), direct.total_mass(), epsilon = 1e-9);
            let g = ZonalProfile::new(3, vec![0.4, 0.0, 0.3, 0.0, -0.1]).unwrap();
            for u in [[1.0, 0.0, 0.0], [0.6, 0.8, 0.0], [0.36, 0.48, 0.8]] {
                assert_abs_diff_eq!(
                    combo.pair(&g, &u).unwrap(),
                    direct.pair(&g, &u).unwrap(),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn abs_pairing_matches_quadrature_pairing() {
        let m = area_measure(&unit_cube(), 1).unwrap();
        let u = [0.36, 0.48, 0.8];
        let exact = m.pair_scaled_abs(1.0, &u).unwrap();
        // spectral route through a long |t| expansion converges slowly,
        // so compare against dense numerical arc integration instead
        let mut total = 0.0;
        let AreaMeasure::EdgeArcs { arcs, .. } = &m else {
            unreachable!()
        };
        for a in arcs {
            let (c1, c2) = (
                u.iter().zip(&a.e1).map(|(x, y)| x * y).sum::<f64>(),
                u.iter().zip(&a.e2).map(|(x, y)| x * y).sum::<f64>(),
            );
            let steps = 20000;
            let h = (a.theta1 - a.theta0) / steps as f64;
            for w in 0..steps {
                let th = a.theta0 + (w as f64 + 0.5) * h;
                total += a.density * h * (c1 * th.cos() + c2 * th.sin()).abs();
            }
        }
        assert_abs_diff_eq!(exact, total, epsilon = 1e-6);
    }

    #[test]
    fn support_margins() {
        let ball = ZonalProfile::new(3, vec![1.0]).unwrap();
        let (ok, margin) = is_support_function(&ball).unwrap();
        assert!(ok);
        assert_abs_diff_eq!(margin, 1.0, epsilon = 1e-12);
        // h(theta) = cos^2(theta) fails convexity near the equator
        let tsq = ZonalProfile::expand(3, |t| t * t, 4).unwrap();
        let (ok, margin) = is_support_function(&tsq).unwrap();
        assert!(!ok);
        assert!(margin < -0.1);
        // truncated |t| is the support function of a hull of two segments;
        // the truncation-aware test accepts it despite the corner
        let seg = ZonalProfile::expand(3, |t| t.abs(), 16).unwrap();
        let (ok, margin) = is_truncated_support_function(&seg).unwrap();
        assert!(ok, "margin {margin}");
        let (strict_ok, _) = is_support_function(&seg).unwrap();
        assert!(!strict_ok);
    }

    #[test]
    fn unsupported_pairs_are_capability_errors() {
        let cube4 = ConvexBody::Polytope {
            vertices: vec![vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0]],
        };
        assert!(matches!(
            area_measure(&cube4, 1),
            Err(Error::Capability(_))
        ));
        let sc = ConvexBody::SubspaceCube { n: 4, i: 2 };
        assert!(matches!(area_measure(&sc, 1), Err(Error::Capability(_))));
    }
}
