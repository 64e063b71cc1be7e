//! Multistart shooting to a point on the same Hopf fiber.

use std::f64::consts::PI;

use srsphere::geodesics::{rotate_complex, Space};
use srsphere::shooting::{solve, ShootingConfig, ShootingProblem};

fn main() -> srsphere::Result<()> {
    let p = vec![1.0, 0.0, 0.0, 0.0];
    let q = rotate_complex(&p, PI / 2.0);
    let problem = ShootingProblem::new(Space::Contact { n: 1 }, p, q, 1.0)?;
    let sols = solve(&problem, &ShootingConfig { n_starts: 32, seed: 1, ..Default::default() });
    println!("{} distinct solutions", sols.len());
    for s in sols.iter().take(5) {
        println!("length {:.6}  c = {:+.6}  residual {:.1e}  start {}", s.length, s.spec.moments[0], s.residual, s.start);
    }
    Ok(())
}
