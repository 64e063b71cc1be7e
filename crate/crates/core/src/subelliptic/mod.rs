//! Intrinsic sub-Laplacians on `S^3` and `S^7`, their exact matrices on
//! polynomial quotient spaces, the commutation `[Δ_sR, X1^2] = 0` and the heat
//! factorization `e^{-tΔ} = e^{-tΔ_sR} e^{-tX1^2}`.

pub mod hopf;
pub mod quotient;
pub mod spectral;

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::field::{lie_bracket, PolyVectorField};
use crate::algebra::operator::{operator_apply, DiffOperator};
use crate::algebra::poly::{int, Poly};
use crate::algebra::sphere::reduce_mod_sphere;
use crate::error::{Error, Result};
use crate::frames::{s3_frame, s7_fields};
use crate::report::Check;

pub use hopf::{chart_report, h_coefficients, symbol_matrix, ChartReport, HopfAngles};
pub use quotient::{exact_rank, operator_matrix, OperatorMatrix, QuotientBasis};
pub use spectral::{heat_factorization, spectrum, HeatReport, SpectrumReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubSpace {
    S3,
    S7,
}

impl SubSpace {
    pub fn ambient_dim(self) -> usize {
        match self {
            SubSpace::S3 => 4,
            SubSpace::S7 => 8,
        }
    }

    /// Horizontal frame, vertical field, and the full orthonormal frame.
    pub fn frame(self) -> (Vec<PolyVectorField>, PolyVectorField, Vec<PolyVectorField>) {
        match self {
            SubSpace::S3 => {
                let f = s3_frame();
                (vec![f.x.clone(), f.y.clone()], f.v.clone(), vec![f.x, f.y, f.v])
            }
            SubSpace::S7 => {
                let f = s7_fields();
                (f[1..].to_vec(), f[0].clone(), f)
            }
        }
    }

    /// `k(k + dim - 1)`: minus the Laplace-Beltrami eigenvalue on degree-`k` harmonics.
    pub fn harmonic_eigenvalue(self, k: u32) -> i64 {
        let k = i64::from(k);
        k * (k + self.ambient_dim() as i64 - 2)
    }
}

/// `Σ X_a^2` over the horizontal frame.
pub fn build_sublaplacian(space: SubSpace) -> DiffOperator {
    DiffOperator::sum_of_squares(&space.frame().0).expect("nonempty frame")
}

/// `Σ X_a^2` over the full frame, the Laplace-Beltrami operator of the round sphere.
pub fn build_laplace_beltrami(space: SubSpace) -> DiffOperator {
    DiffOperator::sum_of_squares(&space.frame().2).expect("nonempty frame")
}

/// Square of the vertical field (`X1^2` on `S^7`, `V^2` on `S^3`).
pub fn build_vertical_square(space: SubSpace) -> DiffOperator {
    DiffOperator::square(&space.frame().1)
}

/// `Σ_s dX_s([X_r, X_s]) = Σ_s <X_s, [X_r, X_s]>` reduced mod the sphere, per horizontal `X_r`.
pub fn popp_corrections(space: SubSpace) -> Result<Vec<Poly>> {
    let (hor, _, full) = space.frame();
    hor.iter()
        .map(|xr| {
            let mut acc = Poly::zero(xr.vars());
            for xs in &full {
                acc = &acc + &xs.dot(&lie_bracket(xr, xs)?)?;
            }
            Ok(reduce_mod_sphere(&acc))
        })
        .collect()
}

/// `Σ_r (X_r^2 + g_r X_r)` with the divergence corrections `g_r` of the Popp volume.
pub fn sublaplacian_via_popp(space: SubSpace) -> Result<DiffOperator> {
    let (hor, _, _) = space.frame();
    let corr = popp_corrections(space)?;
    let mut op = DiffOperator::zero(hor[0].vars());
    for (xr, g) in hor.iter().zip(&corr) {
        op.push(int(1), vec![xr.clone(), xr.clone()])?;
        if !g.is_zero() {
            op.push(int(1), vec![xr.times(g)])?;
        }
    }
    Ok(op)
}

/// Exact evidence for `[Δ_sR, X1^2] = 0` on `S^7` up to a degree.
#[derive(Clone, Debug, Serialize)]
pub struct CommutationReport {
    pub degree: u32,
    pub dimension: usize,
    /// `M(Δ_sR) M(X1^2) - M(X1^2) M(Δ_sR) = 0`.
    pub matrix_commutator_zero: bool,
    /// `reduce([Δ_sR, X1^2] m) = 0` for every basis monomial `m`.
    pub monomials_checked: usize,
    pub monomial_failures: usize,
    /// Frobenius norm of the control commutator with `X2^2`; nonzero when the certificate has teeth.
    pub control_x2_norm: f64,
    /// Max coefficient of `[Δ_sR, X1^2] m` before reduction, over the basis.
    pub ambient_residual: String,
    pub ambient_commutator_zero: bool,
}

impl CommutationReport {
    pub fn passed(&self) -> bool {
        self.matrix_commutator_zero && self.monomial_failures == 0 && self.control_x2_norm > 0.0
    }
}

pub fn commutation_certificate(degree: u32) -> Result<CommutationReport> {
    if degree < 2 {
        return Err(Error::InvalidArgument(format!("commutation certificate needs degree >= 2, got {degree}")));
    }
    let space = SubSpace::S7;
    let fields = s7_fields();
    let basis = QuotientBasis::new(fields[0].vars(), degree);
    let lap = build_sublaplacian(space);
    let x1sq = build_vertical_square(space);
    let x2sq = DiffOperator::square(&fields[1]);
    let m_lap = operator_matrix(&lap, &basis)?;
    let m_x1 = operator_matrix(&x1sq, &basis)?;
    let m_x2 = operator_matrix(&x2sq, &basis)?;
    let matrix_commutator_zero = m_lap.commutator(&m_x1).is_zero();
    let control_x2_norm = m_lap.commutator(&m_x2).frobenius();

    let comm = lap.commutator(&x1sq)?;
    let images: Vec<Poly> =
        (0..basis.len()).into_par_iter().map(|j| operator_apply(&comm, &basis.poly(j))).collect::<Result<_>>()?;
    let monomial_failures = images.par_iter().filter(|p| !reduce_mod_sphere(p).is_zero()).count();
    let ambient_max = images.iter().map(Poly::max_abs_coeff).max().unwrap_or_else(|| int(0));
    Ok(CommutationReport {
        degree,
        dimension: basis.len(),
        matrix_commutator_zero,
        monomials_checked: basis.len(),
        monomial_failures,
        control_x2_norm,
        ambient_commutator_zero: images.iter().all(Poly::is_zero),
        ambient_residual: ambient_max.to_string(),
    })
}

/// Exact identities of the sub-Laplacian suite.
pub fn checks() -> Vec<Check> {
    const M: &str = "subelliptic";
    let mut out = Vec::new();

    let s3 = s3_frame();
    let loc3 = "S^3 contact frame";
    match lie_bracket(&s3.x, &s3.y) {
        Ok(br) => {
            let ok = br == s3.v.scale(&int(2));
            let detail = match br.is_multiple_of(&s3.v) {
                Some(c) => format!("computed [X,Y] = {c}V with [A,B]_i = A(B_i) - B(A_i)"),
                None => "bracket is not a multiple of V".into(),
            };
            out.push(Check::exact(M, loc3, "[X, Y] = 2V", ok, detail));
        }
        Err(e) => out.push(Check::exact(M, loc3, "[X, Y] = 2V", false, e.to_string())),
    }

    let orth = crate::frames::s7_bracket_orthogonality().unwrap_or_default();
    let bad: Vec<String> = orth.iter().filter(|(_, ok)| !ok).map(|((a, b), _)| format!("({a},{b})")).collect();
    out.push(Check::exact(
        M,
        "S^7 Popp volume: orthogonal brackets",
        "<X_b, [X_a, X_b]> = 0 mod r^2 - 1, a = 2..7, b = 1..7",
        bad.is_empty() && orth.len() == 42,
        if bad.is_empty() { format!("{} pairs", orth.len()) } else { bad.join(" ") },
    ));

    for (space, name, want) in [(SubSpace::S7, "S^7", -6), (SubSpace::S3, "S^3", -2)] {
        let lap = build_sublaplacian(space);
        let vars = lap.vars().clone();
        let x0 = Poly::var(&vars, 0);
        let ok = operator_apply(&lap, &x0).map(|p| p == x0.scale(&int(want))).unwrap_or(false);
        out.push(Check::exact(M, &format!("{name} sub-Laplacian"), format!("Δ_sR x0 = {want} x0"), ok, ""));
        let one = operator_apply(&lap, &Poly::one(&vars)).map(|p| p.is_zero()).unwrap_or(false);
        out.push(Check::exact(M, &format!("{name} sub-Laplacian"), "Δ_sR 1 = 0", one, ""));
    }

    for (space, name) in [(SubSpace::S7, "S^7"), (SubSpace::S3, "S^3")] {
        let res = (|| -> Result<bool> {
            let basis = QuotientBasis::new(&crate::frames::ambient_vars(space.ambient_dim()), 3);
            let a = operator_matrix(&sublaplacian_via_popp(space)?, &basis)?;
            let b = operator_matrix(&build_sublaplacian(space), &basis)?;
            Ok(a == b)
        })();
        out.push(Check::exact(
            M,
            &format!("{name} Popp divergence formula"),
            "Popp form ≡ sum of squares on degree <= 3 mod r^2 - 1",
            res.clone().unwrap_or(false),
            res.err().map(|e| e.to_string()).unwrap_or_default(),
        ));
    }

    let basis1 = QuotientBasis::new(&crate::frames::ambient_vars(8), 1);
    let block = basis1.block(1);
    for (op, name, c) in [
        (build_sublaplacian(SubSpace::S7), "Δ_sR", -6),
        (build_vertical_square(SubSpace::S7), "X1^2", -1),
        (build_laplace_beltrami(SubSpace::S7), "Δ_{S^7}", -7),
    ] {
        let ok = operator_matrix(&op, &basis1).map(|m| m.block(block.clone()).is_scalar(&int(c))).unwrap_or(false);
        out.push(Check::exact(M, "S^7 operator matrices", format!("{name} on degree 1 = {c} Id"), ok, ""));
    }

    match commutation_certificate(3) {
        Ok(rep) => {
            let loc = "S^7 commutation theorem";
            out.push(Check::exact(M, loc, "M(Δ_sR) M(X1^2) = M(X1^2) M(Δ_sR), degree <= 3", rep.matrix_commutator_zero, format!("dim {}", rep.dimension)));
            out.push(Check::exact(
                M,
                loc,
                "reduce([Δ_sR, X1^2] m) = 0 for every basis monomial, degree <= 3",
                rep.monomial_failures == 0,
                format!("{} monomials", rep.monomials_checked),
            ));
            out.push(Check::exact(
                M,
                loc,
                "control: [M(Δ_sR), M(X2^2)] != 0",
                rep.control_x2_norm > 0.0,
                format!("|.|_F = {:.6e}; ambient commutator zero: {}", rep.control_x2_norm, rep.ambient_commutator_zero),
            ));
        }
        Err(e) => out.push(Check::exact(M, "S^7 commutation theorem", "commutation certificate", false, e.to_string())),
    }

    match spectral::decomposition_and_harmonics(3) {
        Ok((decomp, harmonics)) => {
            out.push(Check::exact(M, "S^7 heat factorization", "M(Δ_{S^7}) = M(Δ_sR) + M(X1^2), degree <= 3", decomp, ""));
            for (k, ok) in harmonics {
                out.push(Check::exact(
                    M,
                    "S^7 Laplace-Beltrami spectrum",
                    format!("degree-{k} block of M(Δ_{{S^7}}) = {} Id", -SubSpace::S7.harmonic_eigenvalue(k)),
                    ok,
                    "",
                ));
            }
        }
        Err(e) => out.push(Check::exact(M, "S^7 heat factorization", "operator decomposition", false, e.to_string())),
    }
    out
}

/// Tolerance of the heat factorization discrepancies.
pub const HEAT_TOL: f64 = 1e-8;

/// Exact checks plus the numeric heat factorization and Hopf chart identities.
pub fn certificate_suite() -> Vec<Check> {
    const M: &str = "subelliptic";
    let mut out = checks();
    let loc = "S^7 heat factorization";
    match heat_factorization(0.5, 3) {
        Ok(h) => {
            out.push(Check::numeric(
                M,
                loc,
                "|e^{-t(A+B)} - e^{-tA} e^{-tB}|_F <= 1e-8, t = 0.5, degree 3",
                h.split_discrepancy <= HEAT_TOL,
                format!("{:.3e}", h.split_discrepancy),
            ));
            out.push(Check::numeric(
                M,
                loc,
                "|e^{-tΔ_{S^7}} - e^{-tA} e^{-tB}|_F <= 1e-8, t = 0.5, degree 3",
                h.laplace_beltrami_discrepancy <= HEAT_TOL,
                format!("{:.3e}", h.laplace_beltrami_discrepancy),
            ));
        }
        Err(e) => out.push(Check::numeric(M, loc, "heat factorization", false, e.to_string())),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst = ChartReport::default();
    let mut err = None;
    for _ in 0..100 {
        let mut a = [0.0; 7];
        for v in a.iter_mut().take(4) {
            *v = rng.random_range(-PI..PI);
        }
        for v in a.iter_mut().skip(4) {
            *v = rng.random_range(0.05..FRAC_PI_2 - 0.05);
        }
        match chart_report(&a) {
            Ok(r) => {
                worst.x1_pushforward = worst.x1_pushforward.max(r.x1_pushforward);
                worst.h_diagonal = worst.h_diagonal.max(r.h_diagonal);
                worst.full_symbol = worst.full_symbol.max(r.full_symbol);
            }
            Err(e) => err = Some(e.to_string()),
        }
    }
    let loc = "S^7 Hopf coordinates";
    let detail = |v: f64| err.clone().unwrap_or_else(|| format!("max {v:.3e} over 100 points"));
    out.push(Check::numeric(M, loc, "X1 = d/dξ1 + d/dξ2 + d/dξ3 + d/dξ4", err.is_none() && worst.x1_pushforward <= 1e-9, detail(worst.x1_pushforward)));
    out.push(Check::numeric(M, loc, "symbol diagonal = h1..h4", err.is_none() && worst.h_diagonal <= 1e-9, detail(worst.h_diagonal)));
    out.push(Check::numeric(M, loc, "full symbol matrix", err.is_none() && worst.full_symbol <= 1e-9, detail(worst.full_symbol)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::ambient_vars;
    use proptest::prelude::*;

    #[test]
    fn sublaplacian_examples() {
        let lap = build_sublaplacian(SubSpace::S7);
        let v = lap.vars().clone();
        assert_eq!(lap.apply(&Poly::var(&v, 0)).unwrap(), Poly::var(&v, 0).scale(&int(-6)));
        let lap3 = build_sublaplacian(SubSpace::S3);
        let v3 = lap3.vars().clone();
        assert_eq!(lap3.apply(&Poly::var(&v3, 0)).unwrap(), Poly::var(&v3, 0).scale(&int(-2)));
        assert!(lap.apply(&Poly::one(&v)).unwrap().is_zero());
    }

    #[test]
    fn popp_corrections_vanish() {
        for space in [SubSpace::S3, SubSpace::S7] {
            assert!(popp_corrections(space).unwrap().iter().all(Poly::is_zero));
            let op = sublaplacian_via_popp(space).unwrap();
            assert!(op.apply(&Poly::one(op.vars())).unwrap().is_zero());
        }
    }

    #[test]
    fn degree_one_blocks() {
        let basis = QuotientBasis::new(&ambient_vars(8), 1);
        let lap = operator_matrix(&build_sublaplacian(SubSpace::S7), &basis).unwrap();
        let x1 = operator_matrix(&build_vertical_square(SubSpace::S7), &basis).unwrap();
        let lb = operator_matrix(&build_laplace_beltrami(SubSpace::S7), &basis).unwrap();
        assert!(lap.block(basis.block(1)).is_scalar(&int(-6)));
        assert!(lap.block(basis.block(0)).is_scalar(&int(0)));
        assert!(x1.block(basis.block(1)).is_scalar(&int(-1)));
        assert!(lb.block(basis.block(1)).is_scalar(&int(-7)));
    }

    #[test]
    fn commutation_at_degree_three() {
        let rep = commutation_certificate(3).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.control_x2_norm > 0.0);
        assert!(commutation_certificate(1).is_err());
    }

    #[test]
    fn matrices_are_degree_filtered() {
        let basis = QuotientBasis::new(&ambient_vars(8), 3);
        let m = operator_matrix(&build_sublaplacian(SubSpace::S7), &basis).unwrap();
        assert!(m.is_degree_filtered(&basis));
    }

    fn small_poly(v: &crate::algebra::poly::Variables, coeffs: &[i64]) -> Poly {
        // dense quadratic in the first three variables plus a cubic tail
        let mut p = Poly::zero(v);
        let mons: [&[u16]; 6] = [&[1, 0, 0], &[2, 0, 0], &[0, 1, 1], &[1, 1, 0], &[3, 0, 0], &[1, 0, 2]];
        for (c, e) in coeffs.iter().zip(mons) {
            let mut exps = vec![0u16; v.len()];
            exps[..3].copy_from_slice(e);
            p.add_term(crate::algebra::poly::Monomial::from_exponents(&exps), int(*c));
        }
        p
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn matrices_do_not_depend_on_the_representative(
            f in prop::collection::vec(-5i64..5, 6),
            h in prop::collection::vec(-5i64..5, 6),
        ) {
            let v = ambient_vars(8);
            let lap = build_sublaplacian(SubSpace::S7);
            let fp = small_poly(&v, &f);
            let ideal = &Poly::radius_squared(&v) - &Poly::one(&v);
            let gp = &fp + &(&ideal * &small_poly(&v, &h));
            let a = reduce_mod_sphere(&lap.apply(&fp).unwrap());
            let b = reduce_mod_sphere(&lap.apply(&gp).unwrap());
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn s3_bracket_convention_is_reported() {
        let checks = checks();
        let c = checks.iter().find(|c| c.identity == "[X, Y] = 2V").unwrap();
        assert!(!c.status.passed());
        assert!(c.detail.contains("-2V"));
    }
}
