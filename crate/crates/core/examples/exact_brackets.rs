//! Exact Lie brackets of the sphere frames and the sphere reduction.

use srsphere::algebra::field::lie_bracket;
use srsphere::algebra::poly::{int, Poly};
use srsphere::algebra::sphere::reduce_mod_sphere;
use srsphere::frames::{ambient_vars, build_quaternionic_frame, s3_frame};

fn main() -> srsphere::Result<()> {
    let q = build_quaternionic_frame(1)?;
    let v = &q.vertical;
    println!("V1 = {}", v[0]);
    println!("[V1, V2] = {}", lie_bracket(&v[0], &v[1])?);
    println!("[V1, V2] == 2 V3: {}", lie_bracket(&v[0], &v[1])? == v[2].scale(&int(2)));

    let s3 = s3_frame();
    let xy = lie_bracket(&s3.x, &s3.y)?;
    println!("on S^3, [X, Y] = {} V", xy.is_multiple_of(&s3.v).expect("vertical"));

    let vars = ambient_vars(4);
    let x0 = Poly::var(&vars, 0);
    let f = &(&x0 * &x0) * &x0;
    println!("x0^3 mod r^2 - 1 = {}", reduce_mod_sphere(&f));
    Ok(())
}
