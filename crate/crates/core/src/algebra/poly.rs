//! Exact multivariate polynomials with arbitrary-precision rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order with `x0` the largest variable, so two polynomials are
//! equal exactly when their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

pub type Rational = BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => q.to_f64().unwrap_or(f64::NAN),
    }
}

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// The monomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered list of coordinate names shared by polynomials over the same space.
#[derive(Clone, Debug)]
pub struct Variables(Arc<Vec<String>>);

impl Variables {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Variables(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    /// `prefix0, prefix1, ...`
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Self::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }
}

impl PartialEq for Variables {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Variables {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: Variables,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(vars: &Variables) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Variables, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(vars: &Variables) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(vars: &Variables, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i), Rational::one())
    }

    pub fn monomial(vars: &Variables, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), vars.len(), "monomial arity does not match variables");
        let mut p = Self::zero(vars);
        p.add_term(m, c);
        p
    }

    /// Builds `sum_k c_k x_{i_k}` from integer coefficients.
    pub fn linear(vars: &Variables, terms: &[(i64, usize)]) -> Self {
        let mut p = Self::zero(vars);
        for &(c, i) in terms {
            p.add_term(Monomial::var(vars.len(), i), int(c));
        }
        p
    }

    /// `sum_i x_i^2`.
    pub fn radius_squared(vars: &Variables) -> Self {
        let mut p = Self::zero(vars);
        for i in 0..vars.len() {
            let mut m = Monomial::one(vars.len());
            m.0[i] = 2;
            p.add_term(m, Rational::one());
        }
        p
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading term under graded lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Poly) {
        assert!(self.vars == other.vars, "polynomials over different variable lists");
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Adds `c * m * other` into `self`.
    pub fn add_scaled_product(&mut self, c: &Rational, m: &Monomial, other: &Poly) {
        self.check_vars(other);
        for (m2, a) in &other.terms {
            self.add_term(m.mul(m2), c * a);
        }
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * int(i64::from(e)));
        }
        out
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono: f64 = m
                    .0
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.powi(i32::from(e)))
                    .product();
                rational_to_f64(c) * mono
            })
            .sum()
    }

    pub fn eval_rational(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (&e, xi) in m.0.iter().zip(x) {
                for _ in 0..e {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(&self.vars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes `x_i -> images[i]`; the result lives over the images' variables.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars());
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(u32::from(e));
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Re-expresses the polynomial over a variable list that extends this one.
    pub fn embed(&self, target: &Variables, index_map: &[usize]) -> Poly {
        assert_eq!(index_map.len(), self.nvars());
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = Monomial::one(target.len());
            for (i, &e) in m.0.iter().enumerate() {
                m2.0[index_map[i]] += e;
            }
            out.add_term(m2, c.clone());
        }
        out
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_vars(rhs);
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_scaled_product(c, m, rhs);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&int(-1))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let a = c.abs();
            let is_const = m.degree() == 0;
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.vars.names()[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars3() -> Variables {
        Variables::indexed("x", 3)
    }

    #[test]
    fn grlex_orders_by_degree_then_x0() {
        let a = Monomial::from_exponents(&[0, 0, 2]);
        let b = Monomial::from_exponents(&[1, 0, 0]);
        let c = Monomial::from_exponents(&[1, 1, 0]);
        let d = Monomial::from_exponents(&[2, 0, 0]);
        assert!(b < a);
        assert!(a < c);
        assert!(c < d);
    }

    #[test]
    fn cancellation_removes_terms() {
        let v = vars3();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let s = &(&x + &y) - &x;
        assert_eq!(s, y);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn product_and_derivative() {
        let v = vars3();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &(&x * &x) - &(&y * &y));
        assert_eq!(p.derivative(0), x.scale(&int(2)));
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn compose_substitutes() {
        let v = vars3();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let z = Poly::var(&v, 2);
        let p = &x * &y;
        let q = p.compose(&[&y + &z, z.clone(), x.clone()]);
        assert_eq!(q, &(&y * &z) + &(&z * &z));
    }

    #[test]
    fn display_is_readable() {
        let v = vars3();
        let p = &Poly::var(&v, 0).scale(&rat(-1, 2)) + &Poly::one(&v);
        assert_eq!(p.to_string(), "-1/2*x0 + 1");
    }
}
