//! Per-degree sub-Laplacian spectra with exact multiplicities.

use srsphere::subelliptic::{spectrum, SubSpace};

fn main() -> srsphere::Result<()> {
    for (space, degree) in [(SubSpace::S3, 4), (SubSpace::S7, 3)] {
        let report = spectrum(space, degree)?;
        println!("{space:?}, quotient dimension {}", report.dimension);
        for b in &report.blocks {
            let eig: Vec<String> = b.sublaplacian.iter().map(|e| format!("{} (x{})", e.value, e.multiplicity)).collect();
            println!(
                "  degree {}: Δ_sR {}; Laplace-Beltrami {} Id ({})",
                b.degree,
                eig.join(", "),
                b.laplace_beltrami,
                if b.certified && b.laplace_beltrami_exact { "certified" } else { "NOT certified" }
            );
        }
    }
    Ok(())
}
