//! The sub-Laplacian symbol in Hopf coordinates on S^7.

use srsphere::subelliptic::hopf::{chart_report, from_ambient, symbol_matrix, to_ambient};

fn main() -> srsphere::Result<()> {
    let angles = [0.3, -1.0, 2.2, 0.5, 0.7, 1.1, 0.6];
    let x = to_ambient(&angles);
    println!("ambient point {x:.4?}");
    println!("round trip {:.4?}", from_ambient(&x)?);
    let r = chart_report(&angles)?;
    println!("X1 pushforward defect {:.2e}", r.x1_pushforward);
    println!("symbol vs printed h1..h4 {:.2e}, full matrix {:.2e}", r.h_diagonal, r.full_symbol);
    println!("rank {} of 7, smallest eigenvalue {:.2e}", r.rank, r.min_eigenvalue);
    println!("symbol{:.4}", symbol_matrix(&angles)?);
    Ok(())
}
