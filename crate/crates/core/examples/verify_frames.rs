//! Prints the certificate table of the frame identities.

use srsphere::frames;
use srsphere::report::render_table;

fn main() {
    let checks = frames::checks();
    print!("{}", render_table(&checks));
    let failed = checks.iter().filter(|c| !c.status.passed()).count();
    println!("{} checks, {failed} failed", checks.len());
}
