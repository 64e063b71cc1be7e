//! The commutation certificate on S^7 and the heat factorization it implies.

use srsphere::subelliptic::{commutation_certificate, heat_factorization};

fn main() -> srsphere::Result<()> {
    let cert = commutation_certificate(3)?;
    println!(
        "[M(Δ_sR), M(X1^2)] = 0 on dimension {}: {}; control |[M(Δ_sR), M(X2^2)]|_F = {:.3}",
        cert.dimension, cert.matrix_commutator_zero, cert.control_x2_norm
    );
    println!("ambient commutator vanishes before reduction: {}", cert.ambient_commutator_zero);
    for t in [0.1, 0.5, 2.0] {
        let h = heat_factorization(t, 3)?;
        println!(
            "t = {t}: split {:.2e}, against Laplace-Beltrami {:.2e}",
            h.split_discrepancy, h.laplace_beltrami_discrepancy
        );
    }
    Ok(())
}
