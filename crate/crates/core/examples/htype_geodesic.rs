//! H-type geodesics: RK4 against the closed form and the first variation test.

use std::f64::consts::PI;

use srsphere::htype::{HTypeModel, HTypePoint, HTypeState};

fn main() -> srsphere::Result<()> {
    let model = HTypeModel::shared();
    let state = HTypeState { point: HTypePoint::identity(), u: [1.0, 0.0, 0.0, 0.0], lambda: [0.5, 0.0, 0.0] };
    let horizon = 10.0;
    let run = model.integrate_geodesic(&state, horizon, 1e-3)?;
    println!("max |RK4 - closed form| = {:.2e}", run.max_discrepancy);
    let end = run.rk4.len() - 1;
    println!("x(T) = {:?}", run.rk4.x[end]);
    println!("z(T) = {:?}", run.rk4.z[end]);

    let bump = |s: f64| (2.0 * PI * s / horizon).sin();
    let zero = |_s: f64| 0.0;
    let w = model.build_admissible_field(&run.rk4, [&bump, &zero, &zero])?;
    println!("first variation along an admissible field {:.2e}", model.first_variation(&run.rk4, &w)?);

    let control = model.sine_control_field(&run.rk4, 0);
    println!("first variation along the control field {:.4}", model.first_variation(&run.rk4, &control)?);
    Ok(())
}
