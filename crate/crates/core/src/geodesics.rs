//! Closed-form normal geodesics on `S^{2n+1}` (contact) and `S^{4n+3}` (quaternionic).
//!
//! A geodesic is the great circle through `p` with velocity `v`, twisted by the
//! fiber action: `γ(t) = γ_R(t) · exp(-t A(v))`, where `A(v)` collects the
//! moments `c_a = <v, V^a(p)>`. In the contact case the twist is complex
//! multiplication by `e^{-itc}`; in the quaternionic case it is right
//! multiplication by the unit quaternion `exp(-t(c1 i + c2 j + c3 k))`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::poly::{int, rational_to_f64, Rational};
use crate::algebra::quaternion::{quat_exp, Quaternion};
use crate::error::{Error, Result};
use crate::frames::{self, SphereFrame, SPHERE_TOL};
use crate::linalg::{axpy, central_diff4, check_unit, dist, dot, norm, scale, sub};
use crate::report::Check;

/// Step of the fourth-order central differences used by the diagnostics.
pub const FD_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    /// `S^{2n+1}` with the Hopf circle action.
    Contact { n: usize },
    /// `S^{4n+3}` with the right `Sp(1)` action.
    Quaternionic { n: usize },
}

impl Space {
    pub fn ambient_dim(self) -> usize {
        match self {
            Space::Contact { n } => 2 * n + 2,
            Space::Quaternionic { n } => 4 * n + 4,
        }
    }

    pub fn sphere_dim(self) -> usize {
        self.ambient_dim() - 1
    }

    pub fn vertical_rank(self) -> usize {
        match self {
            Space::Contact { .. } => 1,
            Space::Quaternionic { .. } => 3,
        }
    }

    /// Short tag used on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            Space::Contact { .. } => "s2n1",
            Space::Quaternionic { .. } => "s4n3",
        }
    }

    pub fn frame(self) -> Result<SphereFrame> {
        match self {
            Space::Contact { n } => frames::build_contact_frame(n as i64),
            Space::Quaternionic { n } => frames::build_quaternionic_frame(n as i64),
        }
    }

    /// Vertical fields at `p`, evaluated directly from the index maps.
    pub fn vertical_at(self, p: &[f64]) -> Vec<Vec<f64>> {
        match self {
            Space::Contact { .. } => {
                let mut v = vec![0.0; p.len()];
                for k in 0..p.len() / 2 {
                    v[2 * k] = -p[2 * k + 1];
                    v[2 * k + 1] = p[2 * k];
                }
                vec![v]
            }
            Space::Quaternionic { .. } => [Quaternion::I, Quaternion::J, Quaternion::K]
                .iter()
                .map(|&u| {
                    let mut v = vec![0.0; p.len()];
                    for k in 0..p.len() / 4 {
                        let q = Quaternion::from_slice(&p[4 * k..4 * k + 4]) * u;
                        v[4 * k..4 * k + 4].copy_from_slice(&q.to_array());
                    }
                    v
                })
                .collect(),
        }
    }

    pub fn moments(self, p: &[f64], v: &[f64]) -> Vec<f64> {
        self.vertical_at(p).iter().map(|va| dot(v, va)).collect()
    }
}

/// Initial data of a geodesic; the moments are cached at construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSpec {
    pub space: Space,
    pub p: Vec<f64>,
    pub v: Vec<f64>,
    pub moments: Vec<f64>,
}

impl GeodesicSpec {
    pub fn new(space: Space, p: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let d = space.ambient_dim();
        for x in [&p, &v] {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: x.len() });
            }
        }
        check_unit(&p, SPHERE_TOL)?;
        let inner = dot(&p, &v);
        if inner.abs() > SPHERE_TOL * norm(&v).max(1.0) {
            return Err(Error::NotTangent { inner });
        }
        let moments = space.moments(&p, &v);
        Ok(GeodesicSpec { space, p, v, moments })
    }

    pub fn speed_riemannian(&self) -> f64 {
        norm(&self.v)
    }

    /// `sqrt(|v|^2 - sum c_a^2)`, the constant sub-Riemannian speed.
    pub fn sr_speed(&self) -> f64 {
        let m2: f64 = self.moments.iter().map(|c| c * c).sum();
        (dot(&self.v, &self.v) - m2).max(0.0).sqrt()
    }

    /// Sub-Riemannian length over `[0, t]`.
    pub fn length(&self, t: f64) -> f64 {
        self.sr_speed() * t.abs()
    }

    pub fn point_at(&self, t: f64) -> Vec<f64> {
        let g = great_circle_unchecked(&self.p, &self.v, t);
        self.twist(&g, t)
    }

    /// Analytic velocity of the closed form.
    pub fn velocity_at(&self, t: f64) -> Vec<f64> {
        let nv = norm(&self.v);
        let (g, gd) = if nv == 0.0 {
            (self.p.clone(), vec![0.0; self.p.len()])
        } else {
            let (s, c) = (nv * t).sin_cos();
            let mut g = scale(&self.p, c);
            axpy(&mut g, s / nv, &self.v);
            let mut gd = scale(&self.p, -nv * s);
            axpy(&mut gd, c, &self.v);
            (g, gd)
        };
        match self.space {
            Space::Contact { .. } => {
                let c = self.moments[0];
                // e^{-itc} (γ̇_R - i c γ_R)
                let mut w = gd.clone();
                for k in 0..g.len() / 2 {
                    w[2 * k] += c * g[2 * k + 1];
                    w[2 * k + 1] -= c * g[2 * k];
                }
                rotate_complex(&w, -c * t)
            }
            Space::Quaternionic { .. } => {
                let [c1, c2, c3] = [self.moments[0], self.moments[1], self.moments[2]];
                let q = quat_exp(-t * c1, -t * c2, -t * c3);
                let a = Quaternion::new(0.0, c1, c2, c3);
                let qd = q * (-a);
                let mut out = vec![0.0; g.len()];
                for k in 0..g.len() / 4 {
                    let gk = Quaternion::from_slice(&g[4 * k..4 * k + 4]);
                    let gdk = Quaternion::from_slice(&gd[4 * k..4 * k + 4]);
                    let val = gdk * q + gk * qd;
                    out[4 * k..4 * k + 4].copy_from_slice(&val.to_array());
                }
                out
            }
        }
    }

    fn twist(&self, g: &[f64], t: f64) -> Vec<f64> {
        match self.space {
            Space::Contact { .. } => rotate_complex(g, -self.moments[0] * t),
            Space::Quaternionic { .. } => {
                let q = quat_exp(-t * self.moments[0], -t * self.moments[1], -t * self.moments[2]);
                right_multiply(g, q)
            }
        }
    }

    /// Residuals `<γ̇(t), V^a(γ(t))>` from fourth-order central differences.
    pub fn horizontality_fd(&self, t: f64, h: f64) -> (Vec<f64>, Vec<f64>) {
        let f = |s: f64| self.point_at(s);
        let gd = central_diff4(&f, t, h);
        let g = self.point_at(t);
        let res = self.space.vertical_at(&g).iter().map(|va| dot(&gd, va)).collect();
        (gd, res)
    }
}

/// Multiplies each complex coordinate `x_k + i y_k` by `e^{iθ}`.
pub fn rotate_complex(z: &[f64], theta: f64) -> Vec<f64> {
    let (s, c) = theta.sin_cos();
    let mut out = vec![0.0; z.len()];
    for k in 0..z.len() / 2 {
        let (a, b) = (z[2 * k], z[2 * k + 1]);
        out[2 * k] = c * a - s * b;
        out[2 * k + 1] = s * a + c * b;
    }
    out
}

/// Right-multiplies each quaternionic block by `q`.
pub fn right_multiply(x: &[f64], q: Quaternion) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for k in 0..x.len() / 4 {
        let r = Quaternion::from_slice(&x[4 * k..4 * k + 4]) * q;
        out[4 * k..4 * k + 4].copy_from_slice(&r.to_array());
    }
    out
}

fn great_circle_unchecked(p: &[f64], v: &[f64], t: f64) -> Vec<f64> {
    let nv = norm(v);
    if nv == 0.0 {
        return p.to_vec();
    }
    let (s, c) = (nv * t).sin_cos();
    let mut g = scale(p, c);
    axpy(&mut g, s / nv, v);
    g
}

/// `p cos(|v|t) + (v/|v|) sin(|v|t)`.
pub fn great_circle(p: &[f64], v: &[f64], t: f64) -> Result<Vec<f64>> {
    if p.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: v.len() });
    }
    if norm(v) == 0.0 {
        return Err(Error::ZeroVelocity);
    }
    let inner = dot(p, v);
    if inner.abs() > SPHERE_TOL * norm(v).max(1.0) {
        return Err(Error::NotTangent { inner });
    }
    Ok(great_circle_unchecked(p, v, t))
}

pub fn geodesic_contact(spec: &GeodesicSpec, t: f64) -> Result<Vec<f64>> {
    match spec.space {
        Space::Contact { .. } => Ok(spec.point_at(t)),
        _ => Err(Error::WrongSpace("contact geodesic on a quaternionic sphere".into())),
    }
}

pub fn geodesic_quaternionic(spec: &GeodesicSpec, t: f64) -> Result<Vec<f64>> {
    match spec.space {
        Space::Quaternionic { .. } => Ok(spec.point_at(t)),
        _ => Err(Error::WrongSpace("quaternionic geodesic on a contact sphere".into())),
    }
}

/// `<γ̇_R(t), γ_R(t)>_H - i <v, V>` for the contact great circle, as `(re, im)`.
pub fn hermitian_residual(spec: &GeodesicSpec, t: f64) -> Result<(f64, f64)> {
    if !matches!(spec.space, Space::Contact { .. }) {
        return Err(Error::WrongSpace("hermitian identity is stated for contact spheres".into()));
    }
    let f = |s: f64| great_circle_unchecked(&spec.p, &spec.v, s);
    let gd = central_diff4(&f, t, FD_STEP);
    let g = f(t);
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..g.len() / 2 {
        // ż * conj(z)
        let (a, b) = (gd[2 * k], gd[2 * k + 1]);
        let (x, y) = (g[2 * k], g[2 * k + 1]);
        re += a * x + b * y;
        im += b * x - a * y;
    }
    Ok((re, im - spec.moments[0]))
}

/// Sampled geodesic with finite-difference diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct Trace {
    pub spec: GeodesicSpec,
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    /// `|γ̇(t)|` per sample.
    pub speed: Vec<f64>,
    /// `<γ̇(t), V^a(γ(t))>` per sample and vertical field.
    pub horizontality: Vec<Vec<f64>>,
}

impl Trace {
    pub fn generate(spec: &GeodesicSpec, times: &[f64]) -> Self {
        let rows: Vec<(Vec<f64>, f64, Vec<f64>)> = times
            .par_iter()
            .map(|&t| {
                let (gd, res) = spec.horizontality_fd(t, FD_STEP);
                (spec.point_at(t), norm(&gd), res)
            })
            .collect();
        let mut trace = Trace {
            spec: spec.clone(),
            times: times.to_vec(),
            points: Vec::with_capacity(rows.len()),
            speed: Vec::with_capacity(rows.len()),
            horizontality: Vec::with_capacity(rows.len()),
        };
        for (p, s, h) in rows {
            trace.points.push(p);
            trace.speed.push(s);
            trace.horizontality.push(h);
        }
        trace
    }

    pub fn max_horizontality(&self) -> f64 {
        self.horizontality.iter().flatten().fold(0.0, |m: f64, r| m.max(r.abs()))
    }

    /// `max | |γ̇|^2 + sum c_a^2 - |v|^2 |`.
    pub fn max_pythagoras_defect(&self) -> f64 {
        let m2: f64 = self.spec.moments.iter().map(|c| c * c).sum();
        let v2 = dot(&self.spec.v, &self.spec.v);
        self.speed.iter().fold(0.0, |m: f64, s| m.max((s * s + m2 - v2).abs()))
    }

    pub fn max_norm_defect(&self) -> f64 {
        self.points.iter().fold(0.0, |m: f64, p| m.max((norm(p) - 1.0).abs()))
    }
}

/// Curvature `λ = <v, V_2>` of an arc-length contact geodesic on `S^3`.
pub fn curvature_s3(spec: &GeodesicSpec) -> Result<f64> {
    if spec.space != (Space::Contact { n: 1 }) {
        return Err(Error::WrongSpace("curvature is defined on S^3".into()));
    }
    let c = spec.moments[0];
    let defect = dot(&spec.v, &spec.v) - (1.0 + c * c);
    if defect.abs() > 1e-9 {
        return Err(Error::NotArcLength { defect });
    }
    Ok(c)
}

/// `max_t |∇_γ̇ γ̇ + 2λ J(γ̇)|` with second-order central differences of step `h`.
///
/// `∇_γ̇ γ̇` is the tangential part of the second difference quotient and
/// `J(f_X X + f_Y Y) = -f_Y X + f_X Y` in the global frame of `S^3`.
pub fn verify_curvature_ode_s3(spec: &GeodesicSpec, samples: &[f64], h: f64) -> Result<f64> {
    let lambda = curvature_s3(spec)?;
    let frame = frames::s3_frame();
    let res = samples
        .iter()
        .map(|&t| {
            let g = spec.point_at(t);
            let gp = spec.point_at(t + h);
            let gm = spec.point_at(t - h);
            let vel: Vec<f64> = gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
            let mut acc: Vec<f64> = (0..g.len()).map(|i| (gp[i] - 2.0 * g[i] + gm[i]) / (h * h)).collect();
            let radial = dot(&acc, &g);
            axpy(&mut acc, -radial, &g);
            let x = frame.x.eval(&g);
            let y = frame.y.eval(&g);
            let (fx, fy) = (dot(&vel, &x), dot(&vel, &y));
            let mut j = scale(&x, -fy);
            axpy(&mut j, fx, &y);
            axpy(&mut acc, 2.0 * lambda, &j);
            norm(&acc)
        })
        .fold(0.0, f64::max);
    Ok(res)
}

/// Outcome of the exact closedness test on `S^{2n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContactClosedness {
    pub closed: bool,
    /// Minimal `k` with `γ(kπ/|v|) = γ(0)`.
    pub k: Option<u64>,
    /// `kπ/|v|` for the arc-length normalization `|v|^2 = 1 + λ^2`.
    pub period: Option<f64>,
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

/// Closed iff `λ/sqrt(1+λ^2)` is rational, i.e. iff `1+λ^2` is a rational square.
///
/// With `s = |v| = sqrt(1+λ^2)` and `r = λ/s`, the curve returns at
/// `T = kπ/s` exactly when `(-1)^k e^{-iπkr} = 1`, i.e. when `k(1-r)/2` is an integer.
pub fn is_closed_contact(lambda: &Rational) -> ContactClosedness {
    let one = Rational::one();
    let Some(s) = rational_sqrt(&(&one + lambda * lambda)) else {
        return ContactClosedness { closed: false, k: None, period: None };
    };
    let r = lambda / &s;
    let half = (&one - &r) / int(2);
    let k = half.denom().clone();
    let k_u64: u64 = k.try_into().unwrap_or(u64::MAX);
    let period = k_u64 as f64 * std::f64::consts::PI / rational_to_f64(&s);
    ContactClosedness { closed: true, k: Some(k_u64), period: Some(period) }
}

/// `coeff * sqrt(radicand)` with a squarefree radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub coeff: Rational,
    pub radicand: BigInt,
}

impl Surd {
    pub fn rational(q: Rational) -> Self {
        Surd { coeff: q, radicand: BigInt::one() }
    }

    pub fn new(coeff: Rational, radicand: u64) -> Result<Self> {
        if radicand == 0 {
            return Ok(Surd::rational(Rational::zero()));
        }
        let mut rad = radicand;
        let mut outside: u64 = 1;
        let mut f = 2u64;
        while f * f <= rad {
            while rad.is_multiple_of(f * f) {
                rad /= f * f;
                outside *= f;
            }
            f += 1;
        }
        Ok(Surd { coeff: coeff * Rational::from_integer(outside.into()), radicand: rad.into() })
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero() || self.radicand.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * rational_to_f64(&Rational::from_integer(self.radicand.clone())).sqrt()
    }
}

/// Exact data for the printed quaternionic closedness criterion.
#[derive(Clone, Debug)]
pub struct ExactQuaternionicData {
    pub moments: [Surd; 3],
    pub speed_squared: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuaternionicClosedness {
    /// `c_a/|v|^2 ∈ Q` for all `a`; `None` when no exact data was supplied.
    pub criterion: Option<bool>,
    pub numeric_closed: bool,
    pub numeric_period: Option<f64>,
    pub t_max: f64,
}

/// Reports the printed criterion and an independent numeric orbit search side by side.
pub fn is_closed_quaternionic(
    spec: &GeodesicSpec,
    exact: Option<&ExactQuaternionicData>,
    t_max: f64,
) -> Result<QuaternionicClosedness> {
    if !matches!(spec.space, Space::Quaternionic { .. }) {
        return Err(Error::WrongSpace("quaternionic closedness on a contact sphere".into()));
    }
    let criterion = match exact {
        None => None,
        Some(data) => {
            for (s, c) in data.moments.iter().zip(&spec.moments) {
                if (s.to_f64() - c).abs() > 1e-9 {
                    return Err(Error::InvalidArgument("exact moments disagree with the numeric moments".into()));
                }
            }
            if (rational_to_f64(&data.speed_squared) - dot(&spec.v, &spec.v)).abs() > 1e-9 {
                return Err(Error::InvalidArgument("exact |v|^2 disagrees with the numeric velocity".into()));
            }
            if data.speed_squared.is_zero() {
                return Err(Error::ZeroVelocity);
            }
            Some(data.moments.iter().all(Surd::is_rational))
        }
    };
    let period = find_return_time(spec, t_max, 1e-8)?;
    Ok(QuaternionicClosedness { criterion, numeric_closed: period.is_some(), numeric_period: period, t_max })
}

/// Smallest `T in (0, t_max]` with `|γ(T) - γ(0)| <= tol`, searched numerically.
///
/// Critical points of `|γ(t) - p|^2` are located as sign changes of
/// `<γ̇(t), γ(t) - p>` on a fine grid and refined by bisection.
pub fn find_return_time(spec: &GeodesicSpec, t_max: f64, tol: f64) -> Result<Option<f64>> {
    let nv = norm(&spec.v);
    if nv == 0.0 {
        return Err(Error::ZeroVelocity);
    }
    let mbound: f64 = spec.moments.iter().map(|c| c * c).sum::<f64>().sqrt();
    let omega = nv + mbound;
    let dt = 0.02 / omega;
    let g = |t: f64| dot(&spec.velocity_at(t), &sub(&spec.point_at(t), &spec.p));
    let mut t0 = dt;
    let mut g0 = g(t0);
    while t0 < t_max {
        let t1 = (t0 + dt).min(t_max);
        let g1 = g(t1);
        if g0 < 0.0 && g1 >= 0.0 {
            let (mut a, mut b) = (t0, t1);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if g(m) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            let t = 0.5 * (a + b);
            if dist(&spec.point_at(t), &spec.p) <= tol {
                return Ok(Some(t));
            }
        }
        t0 = t1;
        g0 = g1;
    }
    Ok(None)
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let one_side = |x: &[Vec<f64>], y: &[Vec<f64>]| {
        x.par_iter()
            .map(|p| y.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min))
            .reduce(|| 0.0, f64::max)
    };
    one_side(a, b).max(one_side(b, a))
}

/// Exact closedness identities.
pub fn checks() -> Vec<Check> {
    const M: &str = "geodesics";
    let loc = "closedness of contact geodesics";
    let mut out = Vec::new();
    let c0 = is_closed_contact(&int(0));
    out.push(Check::exact(M, loc, "λ = 0 closed, k = 2 (period 2π)", c0.closed && c0.k == Some(2), ""));
    let c34 = is_closed_contact(&crate::algebra::poly::rat(3, 4));
    out.push(Check::exact(M, loc, "λ = 3/4 closed, k = 5 (period 4π)", c34.closed && c34.k == Some(5), ""));
    let c1 = is_closed_contact(&int(1));
    out.push(Check::exact(M, loc, "λ = 1 not closed (1/sqrt 2 irrational)", !c1.closed, ""));

    let spec = GeodesicSpec::new(Space::Contact { n: 1 }, vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.75, 1.0, 0.0])
        .expect("valid spec");
    let back = dist(&spec.point_at(4.0 * std::f64::consts::PI), &spec.p);
    out.push(Check::numeric(M, loc, "λ = 3/4 orbit returns at T = 4π", back <= 1e-9, format!("|γ(4π) - p| = {back:.2e}")));
    let lam = curvature_s3(&spec).unwrap_or(f64::NAN);
    out.push(Check::numeric(M, "curvature of S^3 geodesics", "λ = <v, V_2> = 3/4", (lam - 0.75).abs() < 1e-15, ""));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;
    use crate::linalg::linspace;
    use std::f64::consts::PI;

    fn s3() -> Space {
        Space::Contact { n: 1 }
    }

    #[test]
    fn great_circle_examples() {
        let p = [1.0, 0.0, 0.0, 0.0];
        let v = [0.0, 0.0, 1.0, 0.0];
        assert_eq!(great_circle(&p, &v, 0.0).unwrap(), p.to_vec());
        let g = great_circle(&p, &v, PI / 2.0).unwrap();
        assert!(dist(&g, &[0.0, 0.0, 1.0, 0.0]) < 1e-15);
        let g = great_circle(&p, &[0.0, 0.0, 2.0, 0.0], PI / 2.0).unwrap();
        assert!(dist(&g, &[-1.0, 0.0, 0.0, 0.0]) < 1e-15);
        assert_eq!(great_circle(&p, &[0.0; 4], 1.0), Err(Error::ZeroVelocity));
        assert!(matches!(great_circle(&p, &[1.0, 0.0, 0.0, 0.0], 1.0), Err(Error::NotTangent { .. })));
    }

    #[test]
    fn horizontal_spec_is_great_circle() {
        let spec = GeodesicSpec::new(s3(), vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.3, 0.4]).unwrap();
        assert_eq!(spec.moments, vec![0.0]);
        for t in linspace(0.0, 5.0, 20) {
            let g = great_circle(&spec.p, &spec.v, t).unwrap();
            assert!(dist(&g, &spec.point_at(t)) < 1e-15);
        }
        assert_eq!(spec.point_at(0.0), spec.p);
    }

    #[test]
    fn unit_speed_example_on_s3() {
        let spec = GeodesicSpec::new(s3(), vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let trace = Trace::generate(&spec, &linspace(0.0, 10.0, 1000));
        assert!(trace.speed.iter().all(|s| (s - 1.0).abs() < 1e-10));
        assert!(trace.max_horizontality() <= 1e-10);
        assert!(trace.max_norm_defect() < 1e-9);
    }

    #[test]
    fn analytic_velocity_matches_differences() {
        let specs = [
            GeodesicSpec::new(s3(), vec![0.5, 0.5, 0.5, 0.5], vec![0.5, -0.5, 0.3, -0.3]).unwrap(),
            GeodesicSpec::new(
                Space::Quaternionic { n: 1 },
                vec![0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0],
                vec![0.1, -0.3, 0.2, 0.0, 0.4, 0.5, -0.2, 0.3],
            )
            .unwrap(),
        ];
        for spec in specs {
            for t in [0.0, 0.7, 3.1] {
                let f = |s: f64| spec.point_at(s);
                let fd = central_diff4(&f, t, 1e-3);
                assert!(dist(&fd, &spec.velocity_at(t)) < 1e-10);
            }
        }
    }

    #[test]
    fn quaternionic_zero_moments_is_great_circle() {
        let p = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let v = vec![0.0, 0.0, 0.0, 0.0, 0.6, 0.0, 0.8, 0.0];
        let spec = GeodesicSpec::new(Space::Quaternionic { n: 1 }, p.clone(), v.clone()).unwrap();
        assert_eq!(spec.moments, vec![0.0; 3]);
        for t in linspace(0.0, 4.0, 9) {
            assert!(dist(&geodesic_quaternionic(&spec, t).unwrap(), &great_circle(&p, &v, t).unwrap()) < 1e-15);
        }
        assert!(geodesic_contact(&spec, 1.0).is_err());
    }

    #[test]
    fn curvature_examples() {
        let spec = GeodesicSpec::new(s3(), vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.75, 1.0, 0.0]).unwrap();
        assert_eq!(curvature_s3(&spec).unwrap(), 0.75);
        let flat = GeodesicSpec::new(s3(), vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.6, 0.8]).unwrap();
        assert_eq!(curvature_s3(&flat).unwrap(), 0.0);
        let bad = GeodesicSpec::new(s3(), vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.75, 2.0, 0.0]).unwrap();
        assert!(matches!(curvature_s3(&bad), Err(Error::NotArcLength { .. })));
    }

    #[test]
    fn curvature_ode_residuals() {
        let samples = linspace(0.0, 10.0, 200);
        let flat = GeodesicSpec::new(s3(), vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.6, 0.8]).unwrap();
        assert!(verify_curvature_ode_s3(&flat, &samples, 1e-4).unwrap() <= 1e-6);
        let spec = GeodesicSpec::new(s3(), vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(verify_curvature_ode_s3(&spec, &samples, 1e-4).unwrap() <= 1e-6);
        let r1 = verify_curvature_ode_s3(&spec, &samples, 1e-2).unwrap();
        let r2 = verify_curvature_ode_s3(&spec, &samples, 2e-2).unwrap();
        assert!((r2 / r1 - 4.0).abs() < 0.1, "ratio {}", r2 / r1);
    }

    /// Brute-force orbit oracle: smallest k <= k_max with γ(kπ/|v|) = p.
    fn orbit_k(spec: &GeodesicSpec, k_max: u64, tol: f64) -> Option<u64> {
        let nv = norm(&spec.v);
        (1..=k_max).find(|&k| dist(&spec.point_at(k as f64 * PI / nv), &spec.p) <= tol)
    }

    #[test]
    fn exact_closedness_agrees_with_orbit_search() {
        let p = vec![1.0, 0.0, 0.0, 0.0];
        for (num, den) in [(0i64, 1i64), (3, 4), (-3, 4), (4, 3), (5, 12), (12, 5), (8, 15), (7, 24)] {
            let lam = rat(num, den);
            let res = is_closed_contact(&lam);
            assert!(res.closed);
            let l = num as f64 / den as f64;
            let spec = GeodesicSpec::new(s3(), p.clone(), vec![0.0, l, 1.0, 0.0]).unwrap();
            assert_eq!(orbit_k(&spec, 40, 1e-9), res.k, "λ = {num}/{den}");
            let t = res.period.unwrap();
            assert!(dist(&spec.point_at(t), &spec.p) < 1e-9);
        }
        let c = is_closed_contact(&rat(3, 4));
        assert_eq!(c.k, Some(5));
        assert!((c.period.unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!(!is_closed_contact(&int(1)).closed);
        assert!(!is_closed_contact(&rat(1, 2)).closed);
    }

    #[test]
    fn hermitian_identity() {
        let spec = GeodesicSpec::new(
            Space::Contact { n: 2 },
            vec![0.6, 0.0, 0.0, 0.8, 0.0, 0.0],
            vec![0.0, 0.5, 0.3, 0.0, -0.2, 0.7],
        )
        .unwrap();
        for t in linspace(0.0, 6.0, 50) {
            let (re, im) = hermitian_residual(&spec, t).unwrap();
            assert!(re.abs() < 1e-10 && im.abs() < 1e-10);
        }
    }

    #[test]
    fn surd_rationality() {
        assert!(Surd::new(rat(1, 2), 4).unwrap().is_rational());
        assert!(!Surd::new(rat(1, 2), 8).unwrap().is_rational());
        assert_eq!(Surd::new(int(1), 8).unwrap().radicand, BigInt::from(2));
        assert!(Surd::new(int(0), 2).unwrap().is_rational());
    }

    #[test]
    fn quaternionic_horizontal_orbit_closes() {
        let p = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let v = vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
        let spec = GeodesicSpec::new(Space::Quaternionic { n: 1 }, p, v).unwrap();
        let exact = ExactQuaternionicData {
            moments: [Surd::rational(int(0)), Surd::rational(int(0)), Surd::rational(int(0))],
            speed_squared: int(1),
        };
        let r = is_closed_quaternionic(&spec, Some(&exact), 20.0).unwrap();
        assert_eq!(r.criterion, Some(true));
        assert!(r.numeric_closed);
        assert!((r.numeric_period.unwrap() - 2.0 * PI).abs() < 1e-7);
    }

    #[test]
    fn real_multiples_trace_the_same_circle() {
        let p = vec![1.0, 0.0, 0.0, 0.0];
        let a = GeodesicSpec::new(s3(), p.clone(), vec![0.0, 0.0, 0.6, 0.8]).unwrap();
        let b = GeodesicSpec::new(s3(), p.clone(), vec![0.0, 0.0, -1.2, -1.6]).unwrap();
        let ts = linspace(0.0, 2.0 * PI, 2001);
        let pa: Vec<_> = ts.iter().map(|&t| a.point_at(t)).collect();
        let tb: Vec<f64> = ts.iter().map(|t| t / 2.0).collect();
        let pb: Vec<_> = tb.iter().map(|&t| b.point_at(t)).collect();
        assert!(hausdorff_distance(&pa, &pb) < 1e-8);
        let c = GeodesicSpec::new(s3(), p, vec![0.0, 0.0, -0.8, 0.6]).unwrap();
        let pc: Vec<_> = ts.iter().map(|&t| c.point_at(t)).collect();
        assert!(hausdorff_distance(&pa, &pc) > 0.1);
    }

    #[test]
    fn checks_pass() {
        for c in checks() {
            assert!(c.status.passed(), "{}", c.identity);
        }
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            GeodesicSpec::new(s3(), vec![1.0, 0.0, 0.0], vec![0.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            GeodesicSpec::new(s3(), vec![1.1, 0.0, 0.0, 0.0], vec![0.0; 4]),
            Err(Error::OffSphere { .. })
        ));
        assert!(matches!(
            GeodesicSpec::new(s3(), vec![1.0, 0.0, 0.0, 0.0], vec![0.1, 1.0, 0.0, 0.0]),
            Err(Error::NotTangent { .. })
        ));
    }

    #[test]
    fn numeric_vertical_fields_match_polynomial_frames() {
        let p = [0.1, -0.3, 0.5, 0.2, 0.4, -0.1, 0.3, 0.58];
        for space in [Space::Contact { n: 3 }, Space::Quaternionic { n: 1 }] {
            let poly = space.frame().unwrap().vertical_at(&p);
            let num = space.vertical_at(&p);
            for (a, b) in poly.iter().zip(&num) {
                assert!(dist(a, b) < 1e-15);
            }
        }
    }
}
