//! The quaternionic H-type group `H^1 = R^4 ⊕ R^3`.
//!
//! Coordinates are `(x1..x4, zI, zJ, zK)`. The left-invariant frame
//! `X1..X4, ZI, ZJ, ZK` is declared orthonormal; the Levi-Civita connection
//! is derived from its structure constants by the Koszul formula, and the
//! geodesic equation `∇_γ̇ γ̇ = 2 Σ λ_r J_r(γ̇)` reduces to `u̇ = 2Λu` on the
//! horizontal coefficients `u`.

use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::field::{lie_bracket, PolyVectorField};
use crate::algebra::poly::{int, rat, rational_to_f64, Monomial, Poly, Rational, Variables};
use crate::error::{Error, Result};
use crate::linalg::{gauss_legendre5, grid_derivative, simpson};
use crate::report::Check;

/// The matrices `I, J, K` representing the quaternion units.
pub const QUATERNION_MATRICES: [[[i64; 4]; 4]; 3] = [
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
];

pub const FRAME_NAMES: [&str; 7] = ["X1", "X2", "X3", "X4", "ZI", "ZJ", "ZK"];
pub const VERTICAL_NAMES: [&str; 3] = ["I", "J", "K"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HTypePoint {
    pub x: [f64; 4],
    pub z: [f64; 3],
}

impl HTypePoint {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn inverse(&self) -> Self {
        HTypePoint { x: self.x.map(|v| -v), z: self.z.map(|v| -v) }
    }
}

fn half_form(m: &[[i64; 4]; 4], left: &[f64; 4], right: &[f64; 4]) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            acc += left[i] * m[i][j] as f64 * right[j];
        }
    }
    0.5 * acc
}

/// `(x, z)(x', z') = (x + x', z_r + z'_r + ½ x'^T M_r x)`.
pub fn group_mul(a: &HTypePoint, b: &HTypePoint) -> HTypePoint {
    let mut out = HTypePoint::default();
    for i in 0..4 {
        out.x[i] = a.x[i] + b.x[i];
    }
    for r in 0..3 {
        out.z[r] = a.z[r] + b.z[r] + half_form(&QUATERNION_MATRICES[r], &b.x, &a.x);
    }
    out
}

/// The group law on polynomial coordinates, used for symbolic checks.
pub fn group_mul_poly(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    assert!(a.len() == 7 && b.len() == 7);
    let half = rat(1, 2);
    let mut out: Vec<Poly> = (0..4).map(|i| &a[i] + &b[i]).collect();
    for m in &QUATERNION_MATRICES {
        let r = out.len() - 4;
        let mut z = &a[4 + r] + &b[4 + r];
        for i in 0..4 {
            for j in 0..4 {
                if m[i][j] != 0 {
                    z = &z + &(&b[i] * &a[j]).scale(&(&half * int(m[i][j])));
                }
            }
        }
        out.push(z);
    }
    out
}

pub fn htype_vars() -> Variables {
    Variables::new(["x1", "x2", "x3", "x4", "zI", "zJ", "zK"])
}

/// `X_a = d/dx_a + ½ Σ_r (M_r x)_a d/dz_r` and `Z_r = d/dz_r`.
pub fn build_htype_frame() -> Vec<PolyVectorField> {
    let vars = htype_vars();
    let mut out = Vec::with_capacity(7);
    for a in 0..4 {
        let mut coeffs: Vec<Poly> = (0..7).map(|_| Poly::zero(&vars)).collect();
        coeffs[a] = Poly::one(&vars);
        for (r, m) in QUATERNION_MATRICES.iter().enumerate() {
            let mut p = Poly::zero(&vars);
            for (j, &e) in m[a].iter().enumerate() {
                if e != 0 {
                    p.add_term(Monomial::var(7, j), rat(e, 2));
                }
            }
            coeffs[4 + r] = p;
        }
        out.push(PolyVectorField::new(coeffs).expect("seven coefficients"));
    }
    for r in 0..3 {
        let mut coeffs: Vec<Poly> = (0..7).map(|_| Poly::zero(&vars)).collect();
        coeffs[4 + r] = Poly::one(&vars);
        out.push(PolyVectorField::new(coeffs).expect("seven coefficients"));
    }
    out
}

/// Coefficients of `field` in the frame, which must be constant.
pub fn frame_decompose(frame: &[PolyVectorField], field: &PolyVectorField) -> Result<Vec<Rational>> {
    let mut rest = field.clone();
    let mut out = vec![Rational::zero(); 7];
    for a in 0..4 {
        let c = &field.coefficients()[a];
        if c.degree().unwrap_or(0) > 0 {
            return Err(Error::InvalidArgument(format!("non-constant frame coefficient {c}")));
        }
        out[a] = c.coeff(&Monomial::one(7));
        rest = rest.sub(&frame[a].scale(&out[a]))?;
    }
    for r in 0..3 {
        let c = &rest.coefficients()[4 + r];
        if c.degree().unwrap_or(0) > 0 {
            return Err(Error::InvalidArgument(format!("non-constant frame coefficient {c}")));
        }
        out[4 + r] = c.coeff(&Monomial::one(7));
    }
    Ok(out)
}

/// `c[i][j][k]` with `[E_i, E_j] = Σ_k c[i][j][k] E_k`.
pub fn structure_constants(frame: &[PolyVectorField]) -> Result<Vec<Vec<Vec<Rational>>>> {
    let mut c = vec![vec![vec![Rational::zero(); 7]; 7]; 7];
    for i in 0..7 {
        for j in 0..7 {
            c[i][j] = frame_decompose(frame, &lie_bracket(&frame[i], &frame[j])?)?;
        }
    }
    Ok(c)
}

/// `<∇_{E_i} E_j, E_k> = ½(c_ijk - c_jki + c_kij)` for a left-invariant orthonormal frame.
pub fn levi_civita(c: &[Vec<Vec<Rational>>]) -> Vec<Vec<Vec<Rational>>> {
    let n = c.len();
    let half = rat(1, 2);
    let mut out = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i][j][k] = &half * (&c[i][j][k] - &c[j][k][i] + &c[k][i][j]);
            }
        }
    }
    out
}

/// `∇_{X_a} Z_r` as `(X_b, numerator, denominator)`, in the published form.
const PRINTED_CONNECTION: [[(usize, i64, i64); 3]; 4] = [
    [(1, 1, 2), (3, -1, 2), (2, -1, 2)],
    [(0, -1, 2), (2, -1, 2), (3, 1, 2)],
    [(3, 1, 2), (1, 1, 2), (0, 1, 2)],
    [(2, -1, 2), (0, 1, 2), (1, -1, 2)],
];

fn nabla() -> Result<Vec<Vec<Vec<Rational>>>> {
    Ok(levi_civita(&structure_constants(&build_htype_frame())?))
}

/// `table[a][r]` holds the frame coefficients of `∇_{X_a} Z_r`.
///
/// Derived from the Koszul formula and compared with the published identities;
/// any disagreement is an error.
pub fn connection_table() -> Result<Vec<Vec<Vec<Rational>>>> {
    let nab = nabla()?;
    let mut table = vec![vec![Vec::new(); 3]; 4];
    for a in 0..4 {
        for r in 0..3 {
            let derived = nab[a][4 + r].clone();
            let (b, num, den) = PRINTED_CONNECTION[a][r];
            let mut printed = vec![Rational::zero(); 7];
            printed[b] = rat(num, den);
            if derived != printed {
                return Err(Error::ConnectionMismatch(format!(
                    "∇_{} Z_{}: derived {:?}, printed {}/{} {}",
                    FRAME_NAMES[a],
                    VERTICAL_NAMES[r],
                    derived.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                    num,
                    den,
                    FRAME_NAMES[b]
                )));
            }
            table[a][r] = derived;
        }
    }
    Ok(table)
}

/// `∇_{X_a} X_b` has no horizontal part and is antisymmetric in `(a, b)`,
/// so `Σ u_a u_b ∇_{X_a} X_b = 0` for every `u`.
pub fn horizontal_connection_reduces() -> Result<bool> {
    let nab = nabla()?;
    for a in 0..4 {
        for b in 0..4 {
            if nab[a][b][..4].iter().any(|q| !q.is_zero()) {
                return Ok(false);
            }
            if (0..7).any(|k| &nab[a][b][k] + &nab[b][a][k] != Rational::zero()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `J_r(X) = 2∇_X Z_r` as exact 4×4 matrices on horizontal coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct JStructure {
    pub exact: [Vec<Vec<Rational>>; 3],
    pub j: [[[f64; 4]; 4]; 3],
}

impl JStructure {
    pub fn new() -> Result<Self> {
        let table = connection_table()?;
        let two = int(2);
        let mut exact: [Vec<Vec<Rational>>; 3] = Default::default();
        let mut j = [[[0.0; 4]; 4]; 3];
        for r in 0..3 {
            let mut m = vec![vec![Rational::zero(); 4]; 4];
            for a in 0..4 {
                for b in 0..4 {
                    // column a is the image of X_a
                    m[b][a] = &two * &table[a][r][b];
                    j[r][b][a] = rational_to_f64(&m[b][a]);
                }
            }
            exact[r] = m;
        }
        Ok(JStructure { exact, j })
    }

    pub fn apply(&self, r: usize, u: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (b, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|a| self.j[r][b][a] * u[a]).sum();
        }
        out
    }

    /// `Σ λ_r J_r`.
    pub fn combine(&self, lambda: &[f64; 3]) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for r in 0..3 {
            for b in 0..4 {
                for a in 0..4 {
                    out[b][a] += lambda[r] * self.j[r][b][a];
                }
            }
        }
        out
    }

    /// Exact identities: `J_r^2 = -1`, `J_r^T = -J_r`, `J_r J_s = -J_s J_r` for `r != s`.
    pub fn identities(&self) -> [(String, bool); 3] {
        let mul = |a: &[Vec<Rational>], b: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
            (0..4)
                .map(|i| (0..4).map(|k| (0..4).map(|j| &a[i][j] * &b[j][k]).sum()).collect())
                .collect()
        };
        let neg_id: Vec<Vec<Rational>> =
            (0..4).map(|i| (0..4).map(|k| if i == k { -Rational::one() } else { Rational::zero() }).collect()).collect();
        let square = (0..3).all(|r| mul(&self.exact[r], &self.exact[r]) == neg_id);
        let skew = (0..3).all(|r| (0..4).all(|i| (0..4).all(|k| self.exact[r][i][k] == -&self.exact[r][k][i])));
        let anti = (0..3).all(|r| {
            (0..3).filter(|&s| s != r).all(|s| {
                let a = mul(&self.exact[r], &self.exact[s]);
                let b = mul(&self.exact[s], &self.exact[r]);
                (0..4).all(|i| (0..4).all(|k| a[i][k] == -&b[i][k]))
            })
        });
        [
            ("J_r^2 = -Id".to_string(), square),
            ("J_r^T = -J_r".to_string(), skew),
            ("J_r J_s = -J_s J_r (r != s)".to_string(), anti),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HTypeState {
    pub point: HTypePoint,
    /// Coefficients of `γ̇` in `X1..X4`.
    pub u: [f64; 4],
    pub lambda: [f64; 3],
}

/// Samples of a horizontal curve on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x: Vec<[f64; 4]>,
    pub z: Vec<[f64; 3]>,
    pub u: Vec<[f64; 4]>,
}

impl Trajectory {
    pub fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn speed(&self, i: usize) -> f64 {
        self.u[i].iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Max over samples and all eleven components.
    pub fn max_discrepancy(&self, other: &Trajectory) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.len().min(other.len()) {
            for k in 0..4 {
                m = m.max((self.x[i][k] - other.x[i][k]).abs());
                m = m.max((self.u[i][k] - other.u[i][k]).abs());
            }
            for k in 0..3 {
                m = m.max((self.z[i][k] - other.z[i][k]).abs());
            }
        }
        m
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicRun {
    pub state: HTypeState,
    pub rk4: Trajectory,
    pub closed: Trajectory,
    pub max_discrepancy: f64,
}

/// A vector field along a trajectory, as frame coefficients `(X1..X4, ZI, ZJ, ZK)`.
pub type FieldAlong = Vec<[f64; 7]>;

/// Numeric data extracted once from the exact frame and connection.
#[derive(Clone, Debug)]
pub struct HTypeModel {
    /// `zcoef[r][a][i]`: coefficient of `x_i` in the `d/dz_r` slot of `X_a`.
    zcoef: [[[f64; 4]; 4]; 3],
    pub j: JStructure,
    /// `nabla_hh[a][b][k] = <∇_{X_a} X_b, E_k>`.
    nabla_hh: [[[f64; 7]; 4]; 4],
}

static MODEL: OnceLock<HTypeModel> = OnceLock::new();

impl HTypeModel {
    pub fn new() -> Result<Self> {
        let frame = build_htype_frame();
        let mut zcoef = [[[0.0; 4]; 4]; 3];
        for r in 0..3 {
            for a in 0..4 {
                for i in 0..4 {
                    zcoef[r][a][i] = rational_to_f64(&frame[a].coefficients()[4 + r].coeff(&Monomial::var(7, i)));
                }
            }
        }
        let j = JStructure::new()?;
        let nab = nabla()?;
        let mut nabla_hh = [[[0.0; 7]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for k in 0..7 {
                    nabla_hh[a][b][k] = rational_to_f64(&nab[a][b][k]);
                }
            }
        }
        Ok(HTypeModel { zcoef, j, nabla_hh })
    }

    pub fn shared() -> &'static HTypeModel {
        MODEL.get_or_init(|| HTypeModel::new().expect("connection table matches"))
    }

    /// `ż_r = Σ_a u_a (X_a)_{z_r}(x)`.
    pub fn zdot(&self, x: &[f64; 4], u: &[f64; 4]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (r, o) in out.iter_mut().enumerate() {
            for a in 0..4 {
                for i in 0..4 {
                    *o += u[a] * self.zcoef[r][a][i] * x[i];
                }
            }
        }
        out
    }

    fn rhs(&self, lam: &[[f64; 4]; 4], s: &[f64; 11]) -> [f64; 11] {
        let x = [s[0], s[1], s[2], s[3]];
        let u = [s[7], s[8], s[9], s[10]];
        let zd = self.zdot(&x, &u);
        let mut out = [0.0; 11];
        out[..4].copy_from_slice(&u);
        out[4..7].copy_from_slice(&zd);
        for b in 0..4 {
            out[7 + b] = 2.0 * (0..4).map(|a| lam[b][a] * u[a]).sum::<f64>();
        }
        out
    }

    fn grid(horizon: f64, h: f64) -> Result<Vec<f64>> {
        if !(h > 0.0 && horizon > 0.0) {
            return Err(Error::InvalidArgument(format!("step and horizon must be positive (h = {h}, T = {horizon})")));
        }
        let n = ((horizon / h) - 1e-9).ceil().max(1.0) as usize;
        Ok((0..=n).map(|k| horizon * k as f64 / n as f64).collect())
    }

    /// Classical RK4 on `(x, z, u)`.
    pub fn integrate_rk4(&self, state: &HTypeState, horizon: f64, h: f64) -> Result<Trajectory> {
        let times = Self::grid(horizon, h)?;
        let dt = times[1] - times[0];
        let lam = self.j.combine(&state.lambda);
        let mut s = [0.0; 11];
        s[..4].copy_from_slice(&state.point.x);
        s[4..7].copy_from_slice(&state.point.z);
        s[7..].copy_from_slice(&state.u);
        let mut traj = Trajectory { times: times.clone(), x: Vec::new(), z: Vec::new(), u: Vec::new() };
        let push = |traj: &mut Trajectory, s: &[f64; 11]| {
            traj.x.push([s[0], s[1], s[2], s[3]]);
            traj.z.push([s[4], s[5], s[6]]);
            traj.u.push([s[7], s[8], s[9], s[10]]);
        };
        push(&mut traj, &s);
        let add = |a: &[f64; 11], k: &[f64; 11], c: f64| -> [f64; 11] { std::array::from_fn(|i| a[i] + c * k[i]) };
        for _ in 1..times.len() {
            let k1 = self.rhs(&lam, &s);
            let k2 = self.rhs(&lam, &add(&s, &k1, dt / 2.0));
            let k3 = self.rhs(&lam, &add(&s, &k2, dt / 2.0));
            let k4 = self.rhs(&lam, &add(&s, &k3, dt));
            s = std::array::from_fn(|i| s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
            push(&mut traj, &s);
        }
        Ok(traj)
    }

    /// `u(t) = exp(2tΛ)u0 = cos(2|λ|t)u0 + sin(2|λ|t)Λu0/|λ|`, valid since `Λ^2 = -|λ|^2`.
    pub fn closed_form_u(&self, state: &HTypeState, t: f64) -> ([f64; 4], [f64; 4]) {
        let lam = self.j.combine(&state.lambda);
        let w = state.lambda.iter().map(|l| l * l).sum::<f64>().sqrt();
        let lu: [f64; 4] = std::array::from_fn(|b| (0..4).map(|a| lam[b][a] * state.u[a]).sum());
        if w == 0.0 {
            let x = std::array::from_fn(|k| state.point.x[k] + t * state.u[k]);
            return (state.u, x);
        }
        let (s, c) = (2.0 * w * t).sin_cos();
        let u = std::array::from_fn(|k| c * state.u[k] + s * lu[k] / w);
        let x = std::array::from_fn(|k| state.point.x[k] + s / (2.0 * w) * state.u[k] + (1.0 - c) / (2.0 * w * w) * lu[k]);
        (u, x)
    }

    /// Closed-form `u` and `x`; `z` by five-point Gauss-Legendre on each grid interval.
    pub fn closed_form(&self, state: &HTypeState, times: &[f64]) -> Trajectory {
        let mut traj = Trajectory { times: times.to_vec(), x: Vec::new(), z: Vec::new(), u: Vec::new() };
        let mut z = state.point.z;
        let mut prev = times[0];
        for &t in times {
            for (r, zr) in z.iter_mut().enumerate() {
                *zr += gauss_legendre5(
                    |s| {
                        let (u, x) = self.closed_form_u(state, s);
                        self.zdot(&x, &u)[r]
                    },
                    prev,
                    t,
                );
            }
            prev = t;
            let (u, x) = self.closed_form_u(state, t);
            traj.u.push(u);
            traj.x.push(x);
            traj.z.push(z);
        }
        traj
    }

    pub fn integrate_geodesic(&self, state: &HTypeState, horizon: f64, h: f64) -> Result<GeodesicRun> {
        let rk4 = self.integrate_rk4(state, horizon, h)?;
        let closed = self.closed_form(state, &rk4.times);
        let max_discrepancy = rk4.max_discrepancy(&closed);
        Ok(GeodesicRun { state: *state, rk4, closed, max_discrepancy })
    }

    /// Frame coefficients of `∇_γ̇ γ̇ = Σ u̇_a X_a + Σ u_a u_b ∇_{X_a} X_b`.
    pub fn covariant_acceleration(&self, traj: &Trajectory) -> FieldAlong {
        let h = traj.step();
        let udot: Vec<Vec<f64>> =
            (0..4).map(|a| grid_derivative(&traj.u.iter().map(|u| u[a]).collect::<Vec<_>>(), h)).collect();
        (0..traj.len())
            .map(|i| {
                let u = &traj.u[i];
                let mut out = [0.0; 7];
                for a in 0..4 {
                    out[a] = udot[a][i];
                }
                for a in 0..4 {
                    for b in 0..4 {
                        for (k, o) in out.iter_mut().enumerate() {
                            *o += u[a] * u[b] * self.nabla_hh[a][b][k];
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// `-∫ <∇_γ̇ γ̇, W>` by composite Simpson on the trajectory grid.
    pub fn first_variation(&self, traj: &Trajectory, w: &[[f64; 7]]) -> Result<f64> {
        if w.len() != traj.len() {
            return Err(Error::DimensionMismatch { expected: traj.len(), found: w.len() });
        }
        for end in [&w[0], &w[w.len() - 1]] {
            let n = end.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 1e-10 {
                return Err(Error::Inadmissible(format!("field does not vanish at an endpoint (|W| = {n:e})")));
            }
        }
        let defect = (0..traj.len()).map(|i| (traj.speed(i) - 1.0).abs()).fold(0.0, f64::max);
        if defect > 1e-6 {
            return Err(Error::InvalidArgument(format!("trajectory is not arc-length parameterized (defect {defect:e})")));
        }
        let acc = self.covariant_acceleration(traj);
        let integrand: Vec<f64> =
            acc.iter().zip(w).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect();
        Ok(-simpson(&integrand, traj.step()))
    }

    /// `W_H = Σ f_r J_r(γ̇)`, `<W, Z_r>(s) = 2∫_0^s f_r`.
    pub fn build_admissible_field(&self, traj: &Trajectory, f: [&dyn Fn(f64) -> f64; 3]) -> Result<FieldAlong> {
        let t0 = traj.times[0];
        let t1 = traj.times[traj.len() - 1];
        let mut moments = vec![[0.0; 3]; traj.len()];
        for r in 0..3 {
            for end in [t0, t1] {
                if f[r](end).abs() > 1e-10 {
                    return Err(Error::Inadmissible(format!("f_{} does not vanish at s = {end}", VERTICAL_NAMES[r])));
                }
            }
            let mut acc = 0.0;
            for i in 1..traj.len() {
                acc += gauss_legendre5(f[r], traj.times[i - 1], traj.times[i]);
                moments[i][r] = 2.0 * acc;
            }
            if acc.abs() > 1e-10 {
                return Err(Error::Inadmissible(format!("f_{} has nonzero mean ({acc:e})", VERTICAL_NAMES[r])));
            }
        }
        Ok((0..traj.len())
            .map(|i| {
                let s = traj.times[i];
                let mut w = [0.0; 7];
                for r in 0..3 {
                    let ju = self.j.apply(r, &traj.u[i]);
                    let fr = f[r](s);
                    for a in 0..4 {
                        w[a] += fr * ju[a];
                    }
                    w[4 + r] = moments[i][r];
                }
                w
            })
            .collect())
    }

    /// `max |d/ds <W, Z_r> - 2 <W_H, J_r(γ̇)>|`.
    pub fn admissibility_residual(&self, traj: &Trajectory, w: &[[f64; 7]]) -> f64 {
        let h = traj.step();
        let mut m: f64 = 0.0;
        for r in 0..3 {
            let d = grid_derivative(&w.iter().map(|v| v[4 + r]).collect::<Vec<_>>(), h);
            for i in 0..traj.len() {
                let ju = self.j.apply(r, &traj.u[i]);
                let rhs: f64 = 2.0 * (0..4).map(|a| w[i][a] * ju[a]).sum::<f64>();
                m = m.max((d[i] - rhs).abs());
            }
        }
        m
    }

    /// `sin(πs/T) J_r(γ̇)`: vanishes at the endpoints but violates admissibility when `λ_r != 0`.
    pub fn sine_control_field(&self, traj: &Trajectory, r: usize) -> FieldAlong {
        let t1 = traj.times[traj.len() - 1];
        (0..traj.len())
            .map(|i| {
                let s = (std::f64::consts::PI * traj.times[i] / t1).sin();
                let ju = self.j.apply(r, &traj.u[i]);
                let mut w = [0.0; 7];
                for a in 0..4 {
                    w[a] = s * ju[a];
                }
                w
            })
            .collect()
    }

    /// Max vertical frame component of `γ̇`, from differences of `(x, z)`.
    pub fn horizontality_defect(&self, traj: &Trajectory) -> f64 {
        let h = traj.step();
        let xd: Vec<Vec<f64>> = (0..4).map(|k| grid_derivative(&traj.x.iter().map(|v| v[k]).collect::<Vec<_>>(), h)).collect();
        let zd: Vec<Vec<f64>> = (0..3).map(|k| grid_derivative(&traj.z.iter().map(|v| v[k]).collect::<Vec<_>>(), h)).collect();
        let mut m: f64 = 0.0;
        for i in 0..traj.len() {
            let xdot = [xd[0][i], xd[1][i], xd[2][i], xd[3][i]];
            let expect = self.zdot(&traj.x[i], &xdot);
            for r in 0..3 {
                m = m.max((zd[r][i] - expect[r]).abs());
            }
        }
        m
    }
}

pub fn integrate_geodesic(state: &HTypeState, horizon: f64, h: f64) -> Result<GeodesicRun> {
    HTypeModel::shared().integrate_geodesic(state, horizon, h)
}

/// Exact check that every `X_a` is invariant under left translations:
/// `dL_g X_a(h) = X_a(g h)` as polynomials in both `g` and `h`.
pub fn left_invariance_holds() -> bool {
    let names: Vec<String> = ["a1", "a2", "a3", "a4", "cI", "cJ", "cK"]
        .iter()
        .chain(["x1", "x2", "x3", "x4", "zI", "zJ", "zK"].iter())
        .map(|s| s.to_string())
        .collect();
    let big = Variables::new(names);
    let g: Vec<Poly> = (0..7).map(|i| Poly::var(&big, i)).collect();
    let h: Vec<Poly> = (7..14).map(|i| Poly::var(&big, i)).collect();
    let translated = group_mul_poly(&g, &h);
    let index_map: Vec<usize> = (7..14).collect();
    build_htype_frame().iter().take(4).all(|xa| {
        let at_h: Vec<Poly> = xa.coefficients().iter().map(|c| c.embed(&big, &index_map)).collect();
        (0..7).all(|k| {
            let mut push = Poly::zero(&big);
            for i in 0..7 {
                push = &push + &(&translated[k].derivative(7 + i) * &at_h[i]);
            }
            push == xa.coefficients()[k].compose(&translated)
        })
    })
}

/// The published bracket relations, as `(a, b, sign, r)` for `[X_a, X_b] = sign Z_r`.
pub const BRACKET_TABLE: [(usize, usize, i64, usize); 6] =
    [(0, 1, -1, 0), (2, 3, -1, 0), (1, 2, 1, 1), (0, 3, 1, 1), (0, 2, 1, 2), (3, 1, 1, 2)];

pub fn checks() -> Vec<Check> {
    const M: &str = "htype";
    let mut out = Vec::new();
    let frame = build_htype_frame();
    let loc = "H^1 commutator relations";
    for &(a, b, s, r) in &BRACKET_TABLE {
        let ok = lie_bracket(&frame[a], &frame[b]).map(|br| br == frame[4 + r].scale(&int(s))).unwrap_or(false);
        let sign = if s < 0 { "-" } else { "" };
        out.push(Check::exact(
            M,
            loc,
            format!("[{}, {}] = {sign}{}", FRAME_NAMES[a], FRAME_NAMES[b], FRAME_NAMES[4 + r]),
            ok,
            "",
        ));
    }
    let mut vanishing = 0;
    let mut all_zero = true;
    for i in 0..7 {
        for j in (i + 1)..7 {
            let listed = BRACKET_TABLE.iter().any(|&(a, b, _, _)| (a, b) == (i, j) || (b, a) == (i, j));
            if !listed {
                vanishing += 1;
                all_zero &= lie_bracket(&frame[i], &frame[j]).map(|br| br.is_zero()).unwrap_or(false);
            }
        }
    }
    out.push(Check::exact(M, loc, "remaining brackets vanish", all_zero, format!("{vanishing} pairs")));
    out.push(Check::exact(M, "H^1 frame", "X_a left-invariant under the group law", left_invariance_holds(), "symbolic in g and h"));
    let e1 = HTypePoint { x: [1.0, 0.0, 0.0, 0.0], z: [0.0; 3] };
    let e2 = HTypePoint { x: [0.0, 1.0, 0.0, 0.0], z: [0.0; 3] };
    let d = group_mul(&e1, &e2).z[0] - group_mul(&e2, &e1).z[0];
    out.push(Check::exact(M, "H^1 group law", "(e1 e2).zI - (e2 e1).zI = -1", d == -1.0, ""));
    let table = connection_table();
    out.push(Check::exact(
        M,
        "H^1 Levi-Civita connection",
        "Koszul-derived ∇_{X_a} Z_r equals the published table",
        table.is_ok(),
        table.err().map(|e| e.to_string()).unwrap_or_default(),
    ));
    out.push(Check::exact(
        M,
        "H^1 Levi-Civita connection",
        "∇_{X_a} X_b vertical and antisymmetric",
        horizontal_connection_reduces().unwrap_or(false),
        "",
    ));
    if let Ok(js) = JStructure::new() {
        for (name, ok) in js.identities() {
            out.push(Check::exact(M, "H^1 almost complex structures", name, ok, ""));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm, loglog_slope};
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn point() -> impl Strategy<Value = HTypePoint> {
        (prop::array::uniform4(-3.0..3.0f64), prop::array::uniform3(-3.0..3.0f64)).prop_map(|(x, z)| HTypePoint { x, z })
    }

    proptest! {
        #[test]
        fn group_axioms(a in point(), b in point(), c in point()) {
            let e = HTypePoint::identity();
            prop_assert_eq!(group_mul(&a, &e), a);
            let inv = group_mul(&a, &a.inverse());
            for v in inv.x.iter().chain(&inv.z) {
                prop_assert!(v.abs() < 1e-12);
            }
            let l = group_mul(&group_mul(&a, &b), &c);
            let r = group_mul(&a, &group_mul(&b, &c));
            for (p, q) in l.x.iter().chain(&l.z).zip(r.x.iter().chain(&r.z)) {
                prop_assert!((p - q).abs() < 1e-10);
            }
        }

        #[test]
        fn j_structures_are_orthonormal(u in prop::array::uniform4(-2.0..2.0f64)) {
            let js = &HTypeModel::shared().j;
            let n2: f64 = u.iter().map(|v| v * v).sum();
            for r in 0..3 {
                for s in 0..3 {
                    let a = js.apply(r, &u);
                    let b = js.apply(s, &u);
                    let ip: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
                    let want = if r == s { n2 } else { 0.0 };
                    prop_assert!((ip - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bracket_sign_convention() {
        let e1 = HTypePoint { x: [1.0, 0.0, 0.0, 0.0], z: [0.0; 3] };
        let e2 = HTypePoint { x: [0.0, 1.0, 0.0, 0.0], z: [0.0; 3] };
        assert_eq!(group_mul(&e1, &e2).z[0] - group_mul(&e2, &e1).z[0], -1.0);
    }

    #[test]
    fn frame_matches_published_coefficients() {
        let f = build_htype_frame();
        // X1 = d/dx1 + ½(x2 d/dzI - x4 d/dzJ - x3 d/dzK)
        let c = f[0].coefficients();
        assert_eq!(c[4].coeff(&Monomial::var(7, 1)), rat(1, 2));
        assert_eq!(c[5].coeff(&Monomial::var(7, 3)), rat(-1, 2));
        assert_eq!(c[6].coeff(&Monomial::var(7, 2)), rat(-1, 2));
        // X3 = d/dx3 + ½(x4 d/dzI + x2 d/dzJ + x1 d/dzK)
        let c = f[2].coefficients();
        assert_eq!(c[4].coeff(&Monomial::var(7, 3)), rat(1, 2));
        assert_eq!(c[5].coeff(&Monomial::var(7, 1)), rat(1, 2));
        assert_eq!(c[6].coeff(&Monomial::var(7, 0)), rat(1, 2));
    }

    #[test]
    fn all_checks_pass() {
        for c in checks() {
            assert!(c.status.passed(), "{}: {}", c.identity, c.detail);
        }
    }

    #[test]
    fn connection_examples() {
        let t = connection_table().unwrap();
        assert_eq!(t[0][0][1], rat(1, 2));
        assert_eq!(t[3][2][1], rat(-1, 2));
        for a in 0..4 {
            for r in 0..3 {
                assert!(t[a][r][4..].iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn straight_line_when_lambda_vanishes() {
        let state = HTypeState { point: HTypePoint::identity(), u: [0.6, 0.0, 0.8, 0.0], lambda: [0.0; 3] };
        let run = integrate_geodesic(&state, 2.0, 0.01).unwrap();
        for (t, x) in run.closed.times.iter().zip(&run.closed.x) {
            assert!((x[0] - 0.6 * t).abs() < 1e-14 && (x[2] - 0.8 * t).abs() < 1e-14);
        }
        assert!(run.max_discrepancy < 1e-12);
    }

    #[test]
    fn closed_form_is_the_matrix_exponential() {
        let model = HTypeModel::shared();
        let state = HTypeState { point: HTypePoint::identity(), u: [0.5, 0.5, -0.5, 0.5], lambda: [0.3, -0.7, 0.2] };
        let lam = model.j.combine(&state.lambda);
        let m = DMatrix::from_fn(4, 4, |i, j| lam[i][j]);
        for t in [0.3, 2.0, 7.5] {
            let e = expm(&(m.clone() * (2.0 * t)));
            let want = e * nalgebra::DVector::from_row_slice(&state.u);
            let (u, _) = model.closed_form_u(&state, t);
            for k in 0..4 {
                assert!((u[k] - want[k]).abs() < 1e-12);
            }
            let n: f64 = u.iter().map(|v| v * v).sum();
            assert!((n - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rk4_matches_closed_form() {
        let state = HTypeState { point: HTypePoint::identity(), u: [1.0, 0.0, 0.0, 0.0], lambda: [1.0, 0.0, 0.0] };
        let run = integrate_geodesic(&state, 10.0, 1e-3).unwrap();
        assert!(run.max_discrepancy <= 1e-6, "{}", run.max_discrepancy);
        let model = HTypeModel::shared();
        assert!(model.horizontality_defect(&run.rk4) <= 1e-8);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let model = HTypeModel::shared();
        let state = HTypeState { point: HTypePoint::identity(), u: [1.0, 0.0, 0.0, 0.0], lambda: [1.0, 0.0, 0.0] };
        let hs = [0.2, 0.1, 0.05, 0.025, 0.0125];
        let errs: Vec<f64> = hs.iter().map(|&h| model.integrate_geodesic(&state, 10.0, h).unwrap().max_discrepancy).collect();
        let slope = loglog_slope(&hs, &errs);
        assert!((slope - 4.0).abs() <= 0.3, "slope {slope}");
    }

    #[test]
    fn first_variation_of_solutions() {
        let model = HTypeModel::shared();
        let horizon = 10.0;
        let state = HTypeState { point: HTypePoint::identity(), u: [0.5, 0.5, 0.5, 0.5], lambda: [0.8, 0.0, 0.3] };
        let traj = model.integrate_rk4(&state, horizon, 1e-3).unwrap();
        let zero = vec![[0.0; 7]; traj.len()];
        assert_eq!(model.first_variation(&traj, &zero).unwrap(), 0.0);

        let f1 = |s: f64| (2.0 * std::f64::consts::PI * s / horizon).sin();
        let f0 = |_s: f64| 0.0;
        let w = model.build_admissible_field(&traj, [&f1, &f0, &f0]).unwrap();
        assert!(model.admissibility_residual(&traj, &w) <= 1e-8);
        assert!(w[w.len() - 1][4].abs() < 1e-10);
        assert!(model.first_variation(&traj, &w).unwrap().abs() <= 1e-6);

        let control = model.sine_control_field(&traj, 0);
        let fv = model.first_variation(&traj, &control).unwrap();
        let want = -4.0 * 0.8 * horizon / std::f64::consts::PI;
        assert!((fv - want).abs() < 1e-6, "{fv} vs {want}");
        assert!(model.admissibility_residual(&traj, &control) > 0.1);
    }

    #[test]
    fn geodesic_curvature_constancy() {
        let model = HTypeModel::shared();
        let state = HTypeState { point: HTypePoint::identity(), u: [0.0, 0.6, 0.0, 0.8], lambda: [0.1, -0.4, 0.25] };
        let traj = model.integrate_rk4(&state, 5.0, 1e-3).unwrap();
        let acc = model.covariant_acceleration(&traj);
        for (i, a) in acc.iter().enumerate() {
            for r in 0..3 {
                let ju = model.j.apply(r, &traj.u[i]);
                let ip: f64 = (0..4).map(|k| a[k] * ju[k]).sum();
                assert!((ip - 2.0 * state.lambda[r]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let model = HTypeModel::shared();
        let state = HTypeState { point: HTypePoint::identity(), u: [1.0, 0.0, 0.0, 0.0], lambda: [1.0, 0.0, 0.0] };
        assert!(model.integrate_rk4(&state, 1.0, 0.0).is_err());
        assert!(model.integrate_rk4(&state, -1.0, 0.1).is_err());
        let traj = model.integrate_rk4(&state, 1.0, 0.01).unwrap();
        let mut w = vec![[0.0; 7]; traj.len()];
        w[0][0] = 1e-3;
        assert!(matches!(model.first_variation(&traj, &w), Err(Error::Inadmissible(_))));
        let one = |_s: f64| 1.0;
        let zero = |_s: f64| 0.0;
        assert!(model.build_admissible_field(&traj, [&one, &zero, &zero]).is_err());
        let bump = |s: f64| (std::f64::consts::PI * s).sin();
        assert!(model.build_admissible_field(&traj, [&bump, &zero, &zero]).is_err());
    }
}
