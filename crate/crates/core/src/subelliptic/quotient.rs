//! Exact matrices of differential operators on polynomials modulo `r^2 - 1`.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::operator::{operator_apply, DiffOperator};
use crate::algebra::poly::{rational_to_f64, Monomial, Poly, Rational, Variables};
use crate::algebra::sphere::reduce_mod_sphere;
use crate::error::{Error, Result};

/// Monomials with `deg_{x0} <= 1` and total degree `<= d`, ordered by degree.
///
/// These are exactly the normal forms produced by [`reduce_mod_sphere`].
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    vars: Variables,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

fn compositions(n: usize, total: u32, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
    if prefix.len() == n - 1 {
        let mut e = prefix.clone();
        e.push(total as u16);
        out.push(e);
        return;
    }
    for k in 0..=total {
        prefix.push(k as u16);
        compositions(n, total - k, prefix, out);
        prefix.pop();
    }
}

impl QuotientBasis {
    pub fn new(vars: &Variables, degree: u32) -> Self {
        let n = vars.len();
        let mut monomials = Vec::new();
        for k in 0..=degree {
            let mut exps = Vec::new();
            compositions(n, k, &mut Vec::new(), &mut exps);
            let mut level: Vec<Monomial> =
                exps.into_iter().filter(|e| e[0] <= 1).map(|e| Monomial::from_exponents(&e)).collect();
            level.sort();
            monomials.extend(level);
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        QuotientBasis { vars: vars.clone(), degree, monomials, index }
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index range of the monomials of degree exactly `k`.
    pub fn block(&self, k: u32) -> std::ops::Range<usize> {
        let start = self.monomials.iter().position(|m| m.degree() >= k).unwrap_or(self.len());
        let end = self.monomials.iter().position(|m| m.degree() > k).unwrap_or(self.len());
        start..end
    }

    /// Coordinates of a reduced polynomial.
    pub fn expand(&self, p: &Poly) -> Result<Vec<(usize, Rational)>> {
        p.terms()
            .map(|(m, c)| {
                self.index_of(m)
                    .map(|i| (i, c.clone()))
                    .ok_or_else(|| Error::InvalidArgument(format!("monomial of degree {} leaves the basis", m.degree())))
            })
            .collect()
    }

    pub fn poly(&self, i: usize) -> Poly {
        Poly::monomial(&self.vars, self.monomials[i].clone(), Rational::from_integer(1.into()))
    }
}

/// Sparse exact matrix; `columns[j]` lists the nonzero `(row, value)` pairs of column `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    columns: Vec<Vec<(usize, Rational)>>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix { dim, columns: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix { dim, columns: (0..dim).map(|j| vec![(j, Rational::from_integer(1.into()))]).collect() }
    }

    fn from_maps(dim: usize, cols: Vec<BTreeMap<usize, Rational>>) -> Self {
        OperatorMatrix {
            dim,
            columns: cols.into_iter().map(|c| c.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.columns[j].iter().find(|(r, _)| *r == i).map(|(_, v)| v.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.lin_comb(other, &Rational::from_integer(1.into()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.lin_comb(other, &Rational::from_integer((-1).into()))
    }

    fn lin_comb(&self, other: &Self, c: &Rational) -> Self {
        assert_eq!(self.dim, other.dim);
        let cols = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut m: BTreeMap<usize, Rational> = a.iter().cloned().collect();
                for (i, v) in b {
                    *m.entry(*i).or_insert_with(Rational::zero) += v * c;
                }
                m
            })
            .collect();
        Self::from_maps(self.dim, cols)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        OperatorMatrix {
            dim: self.dim,
            columns: self.columns.iter().map(|col| col.iter().map(|(i, v)| (*i, v * c)).collect()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let cols = other
            .columns
            .par_iter()
            .map(|bcol| {
                let mut m: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, bv) in bcol {
                    for (i, av) in &self.columns[*k] {
                        *m.entry(*i).or_insert_with(Rational::zero) += av * bv;
                    }
                }
                m
            })
            .collect();
        Self::from_maps(self.dim, cols)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Exact sum of squared entries.
    pub fn frobenius_squared(&self) -> Rational {
        self.columns.iter().flatten().map(|(_, v)| v * v).sum()
    }

    pub fn frobenius(&self) -> f64 {
        rational_to_f64(&self.frobenius_squared()).sqrt()
    }

    pub fn max_abs(&self) -> Rational {
        self.columns.iter().flatten().map(|(_, v)| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// Square sub-block on an index range.
    pub fn block(&self, range: std::ops::Range<usize>) -> Self {
        let cols = self.columns[range.clone()]
            .iter()
            .map(|c| c.iter().filter(|(i, _)| range.contains(i)).map(|(i, v)| (i - range.start, v.clone())).collect())
            .collect();
        OperatorMatrix { dim: range.len(), columns: cols }
    }

    /// True when no entry sits in a row of higher degree than its column.
    pub fn is_degree_filtered(&self, basis: &QuotientBasis) -> bool {
        let m = basis.monomials();
        self.columns.iter().enumerate().all(|(j, c)| c.iter().all(|(i, _)| m[*i].degree() <= m[j].degree()))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                out[(*i, j)] = rational_to_f64(v);
            }
        }
        out
    }

    pub fn to_dense_exact(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.dim]; self.dim];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    /// `self == c * Id` exactly.
    pub fn is_scalar(&self, c: &Rational) -> bool {
        self.columns.iter().enumerate().all(|(j, col)| {
            if c.is_zero() {
                col.is_empty()
            } else {
                col.len() == 1 && col[0].0 == j && &col[0].1 == c
            }
        })
    }
}

/// Column `j` is `reduce_mod_sphere(D(m_j))` in the basis.
pub fn operator_matrix(d: &DiffOperator, basis: &QuotientBasis) -> Result<OperatorMatrix> {
    if d.vars() != basis.vars() {
        return Err(Error::VariableMismatch);
    }
    let cols = (0..basis.len())
        .into_par_iter()
        .map(|j| {
            let image = reduce_mod_sphere(&operator_apply(d, &basis.poly(j))?);
            Ok(basis.expand(&image)?.into_iter().collect::<BTreeMap<_, _>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorMatrix::from_maps(basis.len(), cols))
}

/// Rank over `Q` by fraction-based Gaussian elimination.
pub fn exact_rank(a: Vec<Vec<Rational>>) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a
        .into_iter()
        .map(|row| {
            let den = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&den / v.denom())).collect()
        })
        .collect();
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let prow = &head[rank];
        let pivot = prow[c].clone();
        // fraction-free elimination: every division below is exact
        tail.par_iter_mut().for_each(|row| {
            let f = row[c].clone();
            for k in c..cols {
                let v = &pivot * &row[k] - &f * &prow[k];
                row[k] = v / &prev;
            }
        });
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{int, rat};
    use crate::frames::ambient_vars;

    #[test]
    fn basis_dimensions() {
        let v8 = ambient_vars(8);
        let dims: Vec<usize> = (0..=4).map(|d| QuotientBasis::new(&v8, d).len()).collect();
        assert_eq!(dims, vec![1, 9, 44, 156, 450]);
        let b = QuotientBasis::new(&v8, 3);
        assert_eq!(b.block(2).len(), 35);
        assert_eq!(b.block(3).len(), 112);
        let v4 = ambient_vars(4);
        assert_eq!(QuotientBasis::new(&v4, 2).len(), 1 + 4 + 9);
    }

    #[test]
    fn basis_is_the_set_of_normal_forms() {
        let v = ambient_vars(4);
        let b = QuotientBasis::new(&v, 3);
        for m in b.monomials() {
            let p = Poly::monomial(&v, m.clone(), int(1));
            assert_eq!(reduce_mod_sphere(&p), p);
        }
    }

    #[test]
    fn sparse_algebra() {
        let id = OperatorMatrix::identity(3);
        let two = id.scale(&int(2));
        assert!(two.mul(&id).sub(&two).is_zero());
        assert!(two.is_scalar(&int(2)));
        assert_eq!(two.frobenius_squared(), int(12));
        assert!(two.commutator(&id).is_zero());
    }

    #[test]
    fn rank_examples() {
        let m = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)], vec![int(0), int(1), rat(1, 2)]];
        assert_eq!(exact_rank(m), 2);
        assert_eq!(exact_rank(vec![vec![int(0); 3]; 3]), 0);
        let id: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| int((i == j) as i64)).collect()).collect();
        assert_eq!(exact_rank(id), 4);
    }
}
