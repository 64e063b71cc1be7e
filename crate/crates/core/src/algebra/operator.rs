//! Linear differential operators built from compositions of polynomial vector fields.

use crate::algebra::field::{apply_derivation, PolyVectorField};
use crate::algebra::poly::{int, Poly, Rational, Variables};
use crate::error::{Error, Result};
use num_traits::One;

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTerm {
    pub coeff: Rational,
    /// Applied right to left: `factors = [A, B]` acts as `A(B(f))`.
    pub factors: Vec<PolyVectorField>,
}

/// `sum_k c_k * F_{k,1} F_{k,2} ... F_{k,m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator {
    vars: Variables,
    terms: Vec<OperatorTerm>,
}

impl DiffOperator {
    pub fn zero(vars: &Variables) -> Self {
        DiffOperator { vars: vars.clone(), terms: Vec::new() }
    }

    pub fn push(&mut self, coeff: Rational, factors: Vec<PolyVectorField>) -> Result<()> {
        for f in &factors {
            if f.vars() != &self.vars {
                return Err(Error::DimensionMismatch { expected: self.vars.len(), found: f.dim() });
            }
        }
        self.terms.push(OperatorTerm { coeff, factors });
        Ok(())
    }

    /// `sum_a F_a^2`.
    pub fn sum_of_squares(fields: &[PolyVectorField]) -> Result<Self> {
        let vars = fields
            .first()
            .map(|f| f.vars().clone())
            .ok_or_else(|| Error::InvalidArgument("empty field list".into()))?;
        let mut op = DiffOperator::zero(&vars);
        for f in fields {
            op.push(Rational::one(), vec![f.clone(), f.clone()])?;
        }
        Ok(op)
    }

    /// `X^2` for a single field.
    pub fn square(field: &PolyVectorField) -> Self {
        Self::sum_of_squares(std::slice::from_ref(field)).expect("single field")
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    /// Longest composition length.
    pub fn order(&self) -> usize {
        self.terms.iter().map(|t| t.factors.len()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        DiffOperator {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| OperatorTerm { coeff: &t.coeff * c, factors: t.factors.clone() })
                .collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        let mut out = DiffOperator::zero(&self.vars);
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                out.terms.push(OperatorTerm { coeff: &a.coeff * &b.coeff, factors });
            }
        }
        Ok(out)
    }

    /// `self ∘ other - other ∘ self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.add(&other.compose(self)?.scale(&int(-1)))
    }

    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        operator_apply(self, f)
    }
}

/// Applies every term by nested derivations and sums the results exactly.
pub fn operator_apply(d: &DiffOperator, f: &Poly) -> Result<Poly> {
    if d.vars() != f.vars() {
        return Err(Error::DimensionMismatch { expected: d.vars().len(), found: f.nvars() });
    }
    let mut acc = Poly::zero(f.vars());
    for term in &d.terms {
        let mut g = f.clone();
        for field in term.factors.iter().rev() {
            g = apply_derivation(field, &g)?;
            if g.is_zero() {
                break;
            }
        }
        acc = &acc + &g.scale(&term.coeff);
    }
    Ok(acc)
}
