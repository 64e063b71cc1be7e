//! Two-point boundary problems solved by shooting along the closed-form geodesics.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::SPHERE_TOL;
use crate::geodesics::{GeodesicSpec, Space};
use crate::linalg::{axpy, check_unit, dist, dot, orthonormal_complement};

/// Step of the finite-difference Jacobian.
pub const JACOBIAN_STEP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingProblem {
    pub space: Space,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub horizon: f64,
}

impl ShootingProblem {
    pub fn new(space: Space, p: Vec<f64>, q: Vec<f64>, horizon: f64) -> Result<Self> {
        let d = space.ambient_dim();
        for x in [&p, &q] {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: x.len() });
            }
            check_unit(x, SPHERE_TOL)?;
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
        }
        Ok(ShootingProblem { space, p, q, horizon })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    pub max_iters: usize,
    /// Acceptance threshold on the squared endpoint residual.
    pub tol: f64,
    pub n_starts: usize,
    pub seed: u64,
    /// Ambient initial velocities tried before the random starts.
    #[serde(default)]
    pub extra_starts: Vec<Vec<f64>>,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig { max_iters: 200, tol: 1e-10, n_starts: 64, seed: 0, extra_starts: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootingSolution {
    pub spec: GeodesicSpec,
    /// `|γ(T) - q|`.
    pub residual: f64,
    pub length: f64,
    /// Index of the start that produced this solution.
    pub start: usize,
}

/// `γ(T)` for the geodesic with initial data `spec`.
pub fn endpoint_map(spec: &GeodesicSpec, horizon: f64) -> Vec<f64> {
    spec.point_at(horizon)
}

struct Shooter<'a> {
    problem: &'a ShootingProblem,
    basis: Vec<Vec<f64>>,
}

impl Shooter<'_> {
    fn velocity(&self, x: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.problem.p.len()];
        for (c, b) in x.iter().zip(&self.basis) {
            axpy(&mut v, *c, b);
        }
        v
    }

    fn spec(&self, x: &[f64]) -> GeodesicSpec {
        let v = self.velocity(x);
        let moments = self.problem.space.moments(&self.problem.p, &v);
        GeodesicSpec { space: self.problem.space, p: self.problem.p.clone(), v, moments }
    }

    fn residual(&self, x: &[f64]) -> DVector<f64> {
        let end = endpoint_map(&self.spec(x), self.problem.horizon);
        DVector::from_iterator(end.len(), end.iter().zip(&self.problem.q).map(|(a, b)| a - b))
    }

    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let m = self.problem.p.len();
        let mut jac = DMatrix::zeros(m, x.len());
        let mut xp = x.to_vec();
        for j in 0..x.len() {
            xp[j] = x[j] + JACOBIAN_STEP;
            let rp = self.residual(&xp);
            xp[j] = x[j] - JACOBIAN_STEP;
            let rm = self.residual(&xp);
            xp[j] = x[j];
            jac.set_column(j, &((rp - rm) / (2.0 * JACOBIAN_STEP)));
        }
        jac
    }

    /// Levenberg-Marquardt; returns the final parameters and squared residual.
    fn run(&self, mut x: Vec<f64>, max_iters: usize) -> (Vec<f64>, f64) {
        let mut r = self.residual(&x);
        let mut cost = r.norm_squared();
        let mut mu = 1e-3;
        for _ in 0..max_iters {
            if cost < 1e-28 {
                break;
            }
            let jac = self.jacobian(&x);
            let jtj = jac.transpose() * &jac;
            let g = jac.transpose() * &r;
            let mut improved = false;
            for _ in 0..30 {
                let mut a = jtj.clone();
                for i in 0..a.nrows() {
                    a[(i, i)] += mu * (1.0 + jtj[(i, i)]);
                }
                let Some(step) = a.lu().solve(&(-&g)) else {
                    mu *= 10.0;
                    continue;
                };
                let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                let rt = self.residual(&trial);
                let ct = rt.norm_squared();
                if ct < cost {
                    x = trial;
                    r = rt;
                    cost = ct;
                    mu = (mu / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        (x, cost)
    }
}

/// Multistart Levenberg-Marquardt on `|γ_v(T) - q|^2` over `v in T_p S`.
///
/// Starts are drawn sequentially from a seeded generator, solved in parallel
/// and merged in start order, so the output depends only on the seed.
pub fn solve(problem: &ShootingProblem, config: &ShootingConfig) -> Vec<ShootingSolution> {
    let d = problem.p.len();
    let basis = orthonormal_complement(std::slice::from_ref(&problem.p), d);
    let shooter = Shooter { problem, basis };

    let mut starts: Vec<Vec<f64>> = config
        .extra_starts
        .iter()
        .filter(|v| v.len() == d)
        .map(|v| shooter.basis.iter().map(|b| dot(v, b)).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let normal = Normal::new(0.0, std::f64::consts::PI / problem.horizon).expect("finite scale");
    for _ in 0..config.n_starts {
        starts.push((0..d - 1).map(|_| normal.sample(&mut rng)).collect());
    }

    let runs: Vec<(Vec<f64>, f64)> = starts.into_par_iter().map(|x0| shooter.run(x0, config.max_iters)).collect();

    let mut out: Vec<ShootingSolution> = Vec::new();
    for (i, (x, cost)) in runs.into_iter().enumerate() {
        // NaN costs are rejected too
        if cost.is_nan() || cost > config.tol {
            continue;
        }
        let spec = shooter.spec(&x);
        if out.iter().any(|s| dist(&s.spec.v, &spec.v) <= 1e-6) {
            continue;
        }
        let length = spec.length(problem.horizon);
        out.push(ShootingSolution { residual: cost.sqrt(), length, spec, start: i });
    }
    out.sort_by(|a, b| a.length.total_cmp(&b.length).then(a.start.cmp(&b.start)));
    out
}
