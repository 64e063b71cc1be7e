//! Geodesics on S^7 twisted by the right Sp(1) action, with both closedness tests.

use srsphere::algebra::poly::{int, rat};
use srsphere::geodesics::{is_closed_quaternionic, ExactQuaternionicData, GeodesicSpec, Space, Surd, Trace};
use srsphere::linalg::linspace;

fn run(label: &str, vertical: (f64, i64, i64), speed_squared: (i64, i64)) -> srsphere::Result<()> {
    let p = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    let v = vec![0.0, vertical.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    let spec = GeodesicSpec::new(Space::Quaternionic { n: 1 }, p, v)?;
    println!("{label}: moments {:?}", spec.moments);

    let trace = Trace::generate(&spec, &linspace(0.0, 10.0, 500));
    println!("  max horizontality residual {:.2e}", trace.max_horizontality());

    let sign = if spec.moments[0] < 0.0 { -1 } else { 1 };
    let exact = ExactQuaternionicData {
        moments: [Surd::rational(rat(sign * vertical.1, vertical.2)), Surd::rational(int(0)), Surd::rational(int(0))],
        speed_squared: rat(speed_squared.0, speed_squared.1),
    };
    let report = is_closed_quaternionic(&spec, Some(&exact), 60.0)?;
    println!("  printed criterion {:?}", report.criterion);
    println!("  numeric orbit search: closed {} period {:?}", report.numeric_closed, report.numeric_period);
    Ok(())
}

fn main() -> srsphere::Result<()> {
    // |v|^2 = 2: c/|v|^2 is rational but c/|v| = 1/sqrt(2) is not, and the orbit never returns
    run("moment 1, |v|^2 = 2", (1.0, 1, 1), (2, 1))?;
    // |v| = 5/4: both ratios rational
    run("moment 3/4, |v| = 5/4", (0.75, 3, 4), (25, 16))?;
    Ok(())
}
