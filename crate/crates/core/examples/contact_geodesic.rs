//! A closed contact geodesic on S^3: λ = 3/4 closes after k = 5 half-turns at T = 4π.

use std::f64::consts::PI;

use srsphere::algebra::poly::rat;
use srsphere::geodesics::{is_closed_contact, GeodesicSpec, Space, Trace};
use srsphere::linalg::{dist, linspace};

fn main() -> srsphere::Result<()> {
    let spec = GeodesicSpec::new(Space::Contact { n: 1 }, vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.75, 1.0, 0.0])?;
    println!("moment c = {}, |v| = {}", spec.moments[0], spec.speed_riemannian());

    let verdict = is_closed_contact(&rat(3, 4));
    println!("closed: {} k = {:?} period = {:?}", verdict.closed, verdict.k, verdict.period);
    println!("not closed for λ = 1: {}", !is_closed_contact(&rat(1, 1)).closed);

    let trace = Trace::generate(&spec, &linspace(0.0, 4.0 * PI, 400));
    println!("max horizontality residual {:.2e}", trace.max_horizontality());
    println!("max |γ'|^2 + c^2 - |v|^2 {:.2e}", trace.max_pythagoras_defect());
    println!("|γ(4π) - p| = {:.2e}", dist(&spec.point_at(4.0 * PI), &spec.p));
    Ok(())
}
