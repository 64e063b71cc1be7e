//! Hopf coordinates `(ξ1..ξ4, η1, η2, ψ)` on `S^7`:
//!
//! ```text
//! x0 + i x1 = e^{iξ1} cos η1 cos ψ
//! x2 + i x3 = e^{iξ2} sin η1 cos ψ
//! x4 + i x5 = e^{iξ3} cos η2 sin ψ
//! x6 + i x7 = e^{iξ4} sin η2 sin ψ
//! ```

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::algebra::field::PolyVectorField;
use crate::error::{Error, Result};
use crate::frames::s7_fields;

/// Smallest admissible `|sin|`, `|cos|` of `η1, η2, ψ`.
pub const CHART_TOL: f64 = 1e-6;

/// Angles in the order `ξ1, ξ2, ξ3, ξ4, η1, η2, ψ`.
pub type HopfAngles = [f64; 7];

pub fn check_interior(a: &HopfAngles) -> Result<()> {
    let factor = [a[4], a[5], a[6]]
        .iter()
        .flat_map(|t| [t.sin().abs(), t.cos().abs()])
        .fold(f64::INFINITY, f64::min);
    if factor < CHART_TOL {
        return Err(Error::ChartBoundary { factor });
    }
    Ok(())
}

fn moduli(a: &HopfAngles) -> [f64; 4] {
    let (s1, c1) = a[4].sin_cos();
    let (s2, c2) = a[5].sin_cos();
    let (sp, cp) = a[6].sin_cos();
    [c1 * cp, s1 * cp, c2 * sp, s2 * sp]
}

pub fn to_ambient(a: &HopfAngles) -> [f64; 8] {
    let rho = moduli(a);
    let mut x = [0.0; 8];
    for k in 0..4 {
        let (s, c) = a[k].sin_cos();
        x[2 * k] = rho[k] * c;
        x[2 * k + 1] = rho[k] * s;
    }
    x
}

pub fn from_ambient(x: &[f64]) -> Result<HopfAngles> {
    if x.len() != 8 {
        return Err(Error::DimensionMismatch { expected: 8, found: x.len() });
    }
    let rho: Vec<f64> = (0..4).map(|k| x[2 * k].hypot(x[2 * k + 1])).collect();
    let mut a = [0.0; 7];
    for k in 0..4 {
        a[k] = x[2 * k + 1].atan2(x[2 * k]);
    }
    a[4] = rho[1].atan2(rho[0]);
    a[5] = rho[3].atan2(rho[2]);
    a[6] = rho[2].hypot(rho[3]).atan2(rho[0].hypot(rho[1]));
    check_interior(&a)?;
    Ok(a)
}

/// `∂x/∂(angles)` as an 8×7 matrix.
pub fn jacobian(a: &HopfAngles) -> DMatrix<f64> {
    let (s1, c1) = a[4].sin_cos();
    let (s2, c2) = a[5].sin_cos();
    let (sp, cp) = a[6].sin_cos();
    let rho = moduli(a);
    // derivatives of the moduli with respect to η1, η2, ψ
    let d_eta1 = [-s1 * cp, c1 * cp, 0.0, 0.0];
    let d_eta2 = [0.0, 0.0, -s2 * sp, c2 * sp];
    let d_psi = [-c1 * sp, -s1 * sp, c2 * cp, s2 * cp];
    let mut j = DMatrix::zeros(8, 7);
    for k in 0..4 {
        let (s, c) = a[k].sin_cos();
        j[(2 * k, k)] = -rho[k] * s;
        j[(2 * k + 1, k)] = rho[k] * c;
        for (col, d) in [(4, &d_eta1), (5, &d_eta2), (6, &d_psi)] {
            j[(2 * k, col)] = d[k] * c;
            j[(2 * k + 1, col)] = d[k] * s;
        }
    }
    j
}

/// Angle components of a tangent field at a chart point.
pub fn pushforward(a: &HopfAngles, field: &PolyVectorField) -> Result<[f64; 7]> {
    check_interior(a)?;
    let x = to_ambient(a);
    let w = DVector::from_vec(field.eval(&x));
    let j = jacobian(a);
    let jt = j.transpose();
    let c = (&jt * &j).lu().solve(&(jt * w)).ok_or(Error::ChartBoundary { factor: 0.0 })?;
    Ok(std::array::from_fn(|i| c[i]))
}

/// Symbol of `Σ_{a=2}^{7} X_a^2` in angle coordinates: `Σ c_a c_a^T`.
pub fn symbol_matrix(a: &HopfAngles) -> Result<DMatrix<f64>> {
    let fields = s7_fields();
    let mut m = DMatrix::zeros(7, 7);
    for f in &fields[1..] {
        let c = DVector::from_row_slice(&pushforward(a, f)?);
        m += &c * c.transpose();
    }
    Ok(m)
}

/// The diagonal coefficients `h1..h4` in their published trigonometric form.
pub fn h_coefficients(eta1: f64, eta2: f64, psi: f64) -> [f64; 4] {
    let sec2 = |t: f64| 1.0 / t.cos().powi(2);
    let csc2 = |t: f64| 1.0 / t.sin().powi(2);
    let c = f64::cos;
    let h1 = -sec2(eta1) * sec2(psi) / 8.0
        * (-6.0 + 2.0 * c(2.0 * eta1) + c(2.0 * (eta1 - psi)) + 2.0 * c(2.0 * psi) + c(2.0 * (eta1 + psi)));
    let h2 = csc2(eta1) * sec2(psi) / 8.0
        * (6.0 + 2.0 * c(2.0 * eta1) + c(2.0 * (eta1 - psi)) - 2.0 * c(2.0 * psi) + c(2.0 * (eta1 + psi)));
    let h3 = sec2(eta2) * csc2(psi) / 8.0
        * (6.0 - 2.0 * c(2.0 * eta2) + c(2.0 * (eta2 - psi)) + 2.0 * c(2.0 * psi) + c(2.0 * (eta2 + psi)));
    let h4 = -csc2(eta2) * csc2(psi) / 8.0
        * (-6.0 - 2.0 * c(2.0 * eta2) + c(2.0 * (eta2 - psi)) - 2.0 * c(2.0 * psi) + c(2.0 * (eta2 + psi)));
    [h1, h2, h3, h4]
}

/// The full published symbol matrix at a chart point.
pub fn published_symbol(a: &HopfAngles) -> DMatrix<f64> {
    let h = h_coefficients(a[4], a[5], a[6]);
    let mut m = DMatrix::zeros(7, 7);
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = if i == j { h[i] } else { -1.0 };
        }
    }
    m[(4, 4)] = 1.0 / a[6].cos().powi(2);
    m[(5, 5)] = 1.0 / a[6].sin().powi(2);
    m[(6, 6)] = 1.0;
    m
}

/// Discrepancies of the chart identities at one point.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct ChartReport {
    /// `|X1_* - (1,1,1,1,0,0,0)|_inf`.
    pub x1_pushforward: f64,
    /// Max difference of the symbol diagonal against `h1..h4`.
    pub h_diagonal: f64,
    /// Max difference over the whole matrix against the published display.
    pub full_symbol: f64,
    /// Smallest symbol eigenvalue and numerical rank.
    pub min_eigenvalue: f64,
    pub rank: usize,
}

pub fn chart_report(a: &HopfAngles) -> Result<ChartReport> {
    let x1 = pushforward(a, &s7_fields()[0])?;
    let want = [1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0];
    let x1_pushforward = x1.iter().zip(&want).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let sym = symbol_matrix(a)?;
    let printed = published_symbol(a);
    let h_diagonal = (0..4).map(|i| (sym[(i, i)] - printed[(i, i)]).abs()).fold(0.0, f64::max);
    let full_symbol = (&sym - &printed).amax();
    let eig = SymmetricEigen::new(sym.clone()).eigenvalues;
    let scale = sym.amax().max(1.0);
    let min_eigenvalue = eig.min();
    let rank = eig.iter().filter(|e| **e > 1e-9 * scale).count();
    Ok(ChartReport { x1_pushforward, h_diagonal, full_symbol, min_eigenvalue, rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_interior(rng: &mut ChaCha8Rng) -> HopfAngles {
        let mut a = [0.0; 7];
        for v in a.iter_mut().take(4) {
            *v = rng.random_range(-3.0..3.0);
        }
        for v in a.iter_mut().skip(4) {
            *v = rng.random_range(0.1..1.47);
        }
        a
    }

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = random_interior(&mut rng);
            let x = to_ambient(&a);
            let n: f64 = x.iter().map(|v| v * v).sum();
            assert!((n - 1.0).abs() < 1e-14);
            let b = from_ambient(&x).unwrap();
            let y = to_ambient(&b);
            for (p, q) in x.iter().zip(&y) {
                assert!((p - q).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn boundary_is_rejected() {
        let mut x = [0.0; 8];
        x[0] = 1.0;
        assert!(matches!(from_ambient(&x), Err(Error::ChartBoundary { .. })));
        assert!(check_interior(&[0.0, 0.0, 0.0, 0.0, 0.5, 0.5, 1e-8]).is_err());
    }

    #[test]
    fn jacobian_matches_differences() {
        let a = [0.3, -1.2, 2.0, 0.7, 0.4, 1.1, 0.8];
        let j = jacobian(&a);
        let h = 1e-6;
        for col in 0..7 {
            let mut p = a;
            p[col] += h;
            let mut m = a;
            m[col] -= h;
            let (xp, xm) = (to_ambient(&p), to_ambient(&m));
            for row in 0..8 {
                assert!(((xp[row] - xm[row]) / (2.0 * h) - j[(row, col)]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn chart_identities_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_interior(&mut rng);
            let r = chart_report(&a).unwrap();
            assert!(r.x1_pushforward <= 1e-9);
            assert!(r.h_diagonal <= 1e-9);
            assert!(r.full_symbol <= 1e-9);
            assert_eq!(r.rank, 6);
            assert!(r.min_eigenvalue >= -1e-9);
        }
    }

    #[test]
    fn h_is_independent_of_xi() {
        let a = [0.1, 0.2, 0.3, 0.4, 0.6, 0.9, 0.5];
        let mut b = a;
        for v in b.iter_mut().take(4) {
            *v += 1.7;
        }
        let (sa, sb) = (symbol_matrix(&a).unwrap(), symbol_matrix(&b).unwrap());
        assert!((sa - sb).amax() < 1e-12);
    }
}
