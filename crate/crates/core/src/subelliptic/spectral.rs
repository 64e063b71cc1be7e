//! Spectra and heat semigroups of the quotient-space matrices.

use std::collections::BTreeMap;

use nalgebra::linalg::Schur;
use serde::Serialize;

use crate::algebra::poly::{int, Rational};
use crate::error::{Error, Result};
use crate::frames::ambient_vars;
use crate::linalg::expm;

use super::quotient::{exact_rank, operator_matrix, OperatorMatrix, QuotientBasis};
use super::{build_laplace_beltrami, build_sublaplacian, build_vertical_square, SubSpace};

#[derive(Clone, Debug, Serialize)]
pub struct HeatReport {
    pub t: f64,
    pub degree: u32,
    pub dimension: usize,
    /// `|exp(-t(A+B)) - exp(-tA) exp(-tB)|_F` with `A = -M(Δ_sR)`, `B = -M(X1^2)`.
    pub split_discrepancy: f64,
    /// `|exp(-tL) - exp(-tA) exp(-tB)|_F` with `L = -M(Δ_{S^7})` assembled independently.
    pub laplace_beltrami_discrepancy: f64,
    /// `M(Δ_{S^7}) = M(Δ_sR) + M(X1^2)` exactly.
    pub decomposition_exact: bool,
}

struct S7Matrices {
    basis: QuotientBasis,
    lap: OperatorMatrix,
    x1sq: OperatorMatrix,
    lb: OperatorMatrix,
}

fn s7_matrices(degree: u32) -> Result<S7Matrices> {
    let basis = QuotientBasis::new(&ambient_vars(8), degree);
    let lap = operator_matrix(&build_sublaplacian(SubSpace::S7), &basis)?;
    let x1sq = operator_matrix(&build_vertical_square(SubSpace::S7), &basis)?;
    let lb = operator_matrix(&build_laplace_beltrami(SubSpace::S7), &basis)?;
    Ok(S7Matrices { basis, lap, x1sq, lb })
}

pub fn heat_factorization(t: f64, degree: u32) -> Result<HeatReport> {
    if !(t > 0.0 && t.is_finite()) || degree < 1 {
        return Err(Error::InvalidArgument(format!("heat needs t > 0 and degree >= 1 (t = {t}, degree = {degree})")));
    }
    let m = s7_matrices(degree)?;
    let decomposition_exact = m.lb == m.lap.add(&m.x1sq);
    let a = -m.lap.to_dense();
    let b = -m.x1sq.to_dense();
    let l = -m.lb.to_dense();
    let product = expm(&(&a * -t)) * expm(&(&b * -t));
    let split_discrepancy = (expm(&((&a + &b) * -t)) - &product).norm();
    let laplace_beltrami_discrepancy = (expm(&(&l * -t)) - &product).norm();
    Ok(HeatReport { t, degree, dimension: m.basis.len(), split_discrepancy, laplace_beltrami_discrepancy, decomposition_exact })
}

/// Exact decomposition and the scalar Laplace-Beltrami blocks `-k(k+6) Id`.
pub fn decomposition_and_harmonics(degree: u32) -> Result<(bool, Vec<(u32, bool)>)> {
    let m = s7_matrices(degree)?;
    let decomp = m.lb == m.lap.add(&m.x1sq);
    let blocks = (0..=degree)
        .map(|k| (k, m.lb.block(m.basis.block(k)).is_scalar(&int(-SubSpace::S7.harmonic_eigenvalue(k)))))
        .collect();
    Ok((decomp, blocks))
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Eigenvalue {
    pub value: i64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockSpectrum {
    pub degree: u32,
    pub dimension: usize,
    /// Eigenvalues of the sub-Laplacian on the block, each multiplicity an exact nullity.
    pub sublaplacian: Vec<Eigenvalue>,
    /// Multiplicities add up to the block dimension.
    pub certified: bool,
    /// Largest distance of a floating-point eigenvalue from its integer.
    pub numeric_deviation: f64,
    /// The Laplace-Beltrami block equals this multiple of the identity.
    pub laplace_beltrami: i64,
    pub laplace_beltrami_exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub space: SubSpace,
    pub degree: u32,
    pub dimension: usize,
    pub blocks: Vec<BlockSpectrum>,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.blocks.iter().all(|b| b.certified && b.laplace_beltrami_exact)
    }
}

fn certify_block(block: &OperatorMatrix) -> (Vec<Eigenvalue>, bool, f64) {
    let n = block.dim();
    if n == 0 {
        return (Vec::new(), true, 0.0);
    }
    // uncapped Schur stalls on the degenerate blocks
    let Some(schur) = Schur::try_new(block.to_dense(), 1e-12, 100 * n * n) else {
        return (Vec::new(), false, f64::INFINITY);
    };
    let eig = schur.complex_eigenvalues();
    let mut candidates: BTreeMap<i64, ()> = BTreeMap::new();
    let mut deviation: f64 = 0.0;
    for z in eig.iter() {
        let r = z.re.round();
        deviation = deviation.max((z.re - r).abs().max(z.im.abs()));
        candidates.insert(r as i64, ());
    }
    let dense = block.to_dense_exact();
    let mut out = Vec::new();
    let mut total = 0;
    for &mu in candidates.keys() {
        let mut shifted = dense.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= Rational::from_integer(mu.into());
        }
        let nullity = n - exact_rank(shifted);
        if nullity > 0 {
            out.push(Eigenvalue { value: mu, multiplicity: nullity });
            total += nullity;
        }
    }
    (out, total == n, deviation)
}

/// Per-degree spectra of the sub-Laplacian with exact multiplicities.
pub fn spectrum(space: SubSpace, degree: u32) -> Result<SpectrumReport> {
    let basis = QuotientBasis::new(&ambient_vars(space.ambient_dim()), degree);
    let lap = operator_matrix(&build_sublaplacian(space), &basis)?;
    let lb = operator_matrix(&build_laplace_beltrami(space), &basis)?;
    let blocks = (0..=degree)
        .map(|k| {
            let range = basis.block(k);
            let (sublaplacian, certified, numeric_deviation) = certify_block(&lap.block(range.clone()));
            let c = -space.harmonic_eigenvalue(k);
            BlockSpectrum {
                degree: k,
                dimension: range.len(),
                sublaplacian,
                certified,
                numeric_deviation,
                laplace_beltrami: c,
                laplace_beltrami_exact: lb.block(range).is_scalar(&int(c)),
            }
        })
        .collect();
    Ok(SpectrumReport { space, degree, dimension: basis.len(), blocks })
}
