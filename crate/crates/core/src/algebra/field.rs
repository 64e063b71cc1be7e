//! Polynomial vector fields acting as derivations.

use std::fmt;

use crate::algebra::poly::{Monomial, Poly, Rational, Variables};
use crate::error::{Error, Result};
use num_traits::Zero;

/// `sum_i coefficients[i] * d/dx_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    vars: Variables,
    coefficients: Vec<Poly>,
}

impl PolyVectorField {
    pub fn new(coefficients: Vec<Poly>) -> Result<Self> {
        let first = coefficients
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty vector field".into()))?;
        let vars = first.vars().clone();
        if coefficients.len() != vars.len() {
            return Err(Error::DimensionMismatch {
                expected: vars.len(),
                found: coefficients.len(),
            });
        }
        if coefficients.iter().any(|c| c.vars() != &vars) {
            return Err(Error::VariableMismatch);
        }
        Ok(PolyVectorField { vars, coefficients })
    }

    pub fn zero(vars: &Variables) -> Self {
        PolyVectorField {
            vars: vars.clone(),
            coefficients: (0..vars.len()).map(|_| Poly::zero(vars)).collect(),
        }
    }

    /// Field with linear coefficients; `rows[i]` lists `(c, j)` pairs for `c * x_j` in the `d/dx_i` slot.
    pub fn linear(vars: &Variables, rows: &[&[(i64, usize)]]) -> Self {
        assert_eq!(rows.len(), vars.len());
        PolyVectorField {
            vars: vars.clone(),
            coefficients: rows.iter().map(|r| Poly::linear(vars, r)).collect(),
        }
    }

    /// Linear field `x -> A x` from an integer matrix.
    pub fn from_matrix(vars: &Variables, a: &[Vec<i64>]) -> Self {
        let n = vars.len();
        assert_eq!(a.len(), n);
        let coefficients = a
            .iter()
            .map(|row| {
                let terms: Vec<(i64, usize)> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| (c, j))
                    .collect();
                Poly::linear(vars, &terms)
            })
            .collect();
        PolyVectorField { vars: vars.clone(), coefficients }
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Poly] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Poly::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyVectorField {
            vars: self.vars.clone(),
            coefficients: self.coefficients.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiplies every coefficient by the function `g`.
    pub fn times(&self, g: &Poly) -> Self {
        PolyVectorField {
            vars: self.vars.clone(),
            coefficients: self.coefficients.iter().map(|p| p * g).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(PolyVectorField {
            vars: self.vars.clone(),
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&crate::algebra::poly::int(-1)))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }

    /// Value of the field at a numeric point.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.eval_f64(x)).collect()
    }

    /// Pointwise Euclidean inner product of coefficient vectors, as a polynomial.
    pub fn dot(&self, other: &Self) -> Result<Poly> {
        self.check(other)?;
        let mut acc = Poly::zero(&self.vars);
        for (a, b) in self.coefficients.iter().zip(&other.coefficients) {
            acc = &acc + &(a * b);
        }
        Ok(acc)
    }

    /// `<X(x), x>` as a polynomial: the radial component of the field.
    pub fn radial(&self) -> Poly {
        let mut acc = Poly::zero(&self.vars);
        for (i, c) in self.coefficients.iter().enumerate() {
            acc.add_scaled_product(&Rational::from_integer(1.into()), &Monomial::var(self.dim(), i), c);
        }
        acc
    }

    /// True when all coefficients are constant multiples of one field.
    pub fn is_multiple_of(&self, other: &Self) -> Option<Rational> {
        let mut ratio: Option<Rational> = None;
        for (a, b) in self.coefficients.iter().zip(&other.coefficients) {
            if b.is_zero() {
                if !a.is_zero() {
                    return None;
                }
                continue;
            }
            let (mb, cb) = b.leading().expect("nonzero");
            let r = a.coeff(mb) / cb;
            if &b.scale(&r) != a {
                return None;
            }
            match &ratio {
                Some(q) if q != &r => return None,
                _ => ratio = Some(r),
            }
        }
        Some(ratio.unwrap_or_else(Rational::zero))
    }
}

impl fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) d/d{}", self.vars.names()[i])?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `X(f) = sum_i X_i * df/dx_i`.
pub fn apply_derivation(x: &PolyVectorField, f: &Poly) -> Result<Poly> {
    if x.vars() != f.vars() {
        return Err(if x.dim() != f.nvars() {
            Error::DimensionMismatch { expected: x.dim(), found: f.nvars() }
        } else {
            Error::VariableMismatch
        });
    }
    let n = x.dim();
    let mut out = Poly::zero(f.vars());
    for (m, c) in f.terms() {
        for i in 0..n {
            let e = m.exponents()[i];
            if e == 0 || x.coefficients[i].is_zero() {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            let dm = Monomial::from_exponents(&exps);
            let dc = c * Rational::from_integer(i64::from(e).into());
            out.add_scaled_product(&dc, &dm, &x.coefficients[i]);
        }
    }
    Ok(out)
}

/// `[X, Y]_i = X(Y_i) - Y(X_i)`.
pub fn lie_bracket(x: &PolyVectorField, y: &PolyVectorField) -> Result<PolyVectorField> {
    x.check(y)?;
    let coefficients = x
        .coefficients
        .iter()
        .zip(&y.coefficients)
        .map(|(xi, yi)| Ok(&apply_derivation(x, yi)? - &apply_derivation(y, xi)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyVectorField { vars: x.vars.clone(), coefficients })
}

/// Sum of squared coefficient magnitudes, useful as a nonzero witness.
pub fn coefficient_mass(x: &PolyVectorField) -> Rational {
    let mut acc = Rational::zero();
    for c in &x.coefficients {
        for (_, a) in c.terms() {
            acc += a * a;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::int;

    #[test]
    fn zero_field_kills_everything() {
        let v = Variables::indexed("x", 3);
        let f = &Poly::var(&v, 0) * &Poly::var(&v, 1);
        assert!(apply_derivation(&PolyVectorField::zero(&v), &f).unwrap().is_zero());
    }

    #[test]
    fn rotation_generator_acts_on_coordinates() {
        let v = Variables::indexed("x", 2);
        // -x1 d/dx0 + x0 d/dx1
        let r = PolyVectorField::linear(&v, &[&[(-1, 1)], &[(1, 0)]]);
        let out = apply_derivation(&r, &Poly::var(&v, 0)).unwrap();
        assert_eq!(out, Poly::var(&v, 1).scale(&int(-1)));
        assert!(apply_derivation(&r, &Poly::radius_squared(&v)).unwrap().is_zero());
    }

    #[test]
    fn mismatched_variables_rejected() {
        let a = Variables::indexed("x", 2);
        let b = Variables::indexed("x", 3);
        let r = PolyVectorField::zero(&a);
        assert!(matches!(
            apply_derivation(&r, &Poly::var(&b, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
        let c = Variables::indexed("y", 2);
        assert_eq!(apply_derivation(&r, &Poly::var(&c, 0)), Err(Error::VariableMismatch));
        assert!(lie_bracket(&r, &PolyVectorField::zero(&b)).is_err());
    }

    #[test]
    fn bracket_is_antisymmetric() {
        let v = Variables::indexed("x", 3);
        let a = PolyVectorField::linear(&v, &[&[(-1, 1)], &[(1, 0)], &[]]);
        let b = PolyVectorField::linear(&v, &[&[(-1, 2)], &[], &[(1, 0)]]);
        assert!(lie_bracket(&a, &a).unwrap().is_zero());
        let ab = lie_bracket(&a, &b).unwrap();
        let ba = lie_bracket(&b, &a).unwrap();
        assert_eq!(ab, ba.scale(&int(-1)));
        assert!(!ab.is_zero());
    }
}
