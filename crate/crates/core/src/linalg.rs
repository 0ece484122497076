//! Dense linear algebra over `ℚ(z)` and `ℚ[z]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::ext::Ext;
use crate::scalar::{Polynomial, RationalFunction};

/// A column vector over `ℚ(z)`.
pub type Vector = Vec<RationalFunction>;

/// Dense polynomial over `ℤ`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn zero() -> Self {
        IntPoly(Vec::new())
    }

    fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    fn trimmed(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        IntPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::trimmed(out)
    }

    fn add_assign(&mut self, rhs: &Self, negate: bool) {
        if self.0.len() < rhs.0.len() {
            self.0.resize(rhs.0.len(), BigInt::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            if negate {
                *a -= b;
            } else {
                *a += b;
            }
        }
        let c = std::mem::take(&mut self.0);
        *self = Self::trimmed(c);
    }

    fn neg(&self) -> Self {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Quotient of a division known to be exact in `ℤ[z]`.
    fn div_exact(&self, d: &Self) -> Self {
        if d.0.len() == 1 && d.0[0].is_one() {
            return self.clone();
        }
        let mut rem = self.0.clone();
        let dl = d.0.len();
        if rem.len() < dl {
            debug_assert!(self.is_zero());
            return Self::zero();
        }
        let lead = &d.0[dl - 1];
        let mut q = vec![BigInt::zero(); rem.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dl - 1] / lead;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    rem[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        debug_assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        Self::trimmed(q)
    }
}

/// A column `entries / (c·z^d)` with entries in `ℤ[z]` and `c` a nonzero
/// polynomial with `c(0) ≠ 0`. Valuations of determinants ignore `c`.
#[derive(Clone, Debug)]
pub(crate) struct PolyColumn {
    pub entries: Vec<IntPoly>,
    pub denominator_valuation: i64,
}

impl PolyColumn {
    pub fn new(column: &[RationalFunction]) -> Self {
        let mut lcm = Polynomial::one();
        for e in column {
            let d = e.denominator();
            if !d.is_one() {
                let g = lcm.gcd(d);
                lcm = &lcm * &d.div_exact(&g);
            }
        }
        let rational: Vec<Polynomial> = column
            .iter()
            .map(|e| e.numerator() * &lcm.div_exact(e.denominator()))
            .collect();
        let common = rational
            .iter()
            .flat_map(|p| p.coeffs())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let entries = rational
            .iter()
            .map(|p| {
                IntPoly::trimmed(
                    p.coeffs()
                        .iter()
                        .map(|c| c.numer() * (&common / c.denom()))
                        .collect(),
                )
            })
            .collect();
        PolyColumn {
            entries,
            denominator_valuation: lcm.valuation().unwrap() as i64,
        }
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix given by rows.
fn det_bareiss(mut a: Vec<Vec<IntPoly>>) -> IntPoly {
    let n = a.len();
    if n == 0 {
        return IntPoly::one();
    }
    let mut negate = false;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return IntPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let mut t = a[i][j].mul(&a[k][k]);
                t.add_assign(&a[i][k].mul(&a[k][j]), true);
                a[i][j] = t.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    if negate {
        a[n - 1][n - 1].neg()
    } else {
        a[n - 1][n - 1].clone()
    }
}

fn rows_of(
    columns: &[&PolyColumn],
    skip_row: Option<usize>,
    skip_col: Option<usize>,
) -> Vec<Vec<IntPoly>> {
    let n = columns.len();
    (0..n)
        .filter(|&r| Some(r) != skip_row)
        .map(|r| {
            columns
                .iter()
                .enumerate()
                .filter(|&(c, _)| Some(c) != skip_col)
                .map(|(_, col)| col.entries[r].clone())
                .collect()
        })
        .collect()
}

fn denominator_sum(columns: &[&PolyColumn]) -> i64 {
    columns.iter().map(|c| c.denominator_valuation).sum()
}

/// `v(det[columns])`.
pub(crate) fn det_valuation(columns: &[&PolyColumn]) -> Ext<i64> {
    match det_bareiss(rows_of(columns, None, None)).valuation() {
        Some(v) => Ext::Finite(v as i64 - denominator_sum(columns)),
        None => Ext::Infinity,
    }
}

/// For every column `i` and position `pos`, the difference
/// `v(det M_{B ∪ i ∖ B[pos]}) − v(det M_B)`, `None` when the exchanged
/// family is singular. By Cramer's rule the exchanged determinant is the
/// dot product of column `i` with column `pos` of the cofactor matrix of
/// `M_B`. Returns `None` when `basis` is singular.
pub(crate) fn exchange_valuations(
    basis: &[&PolyColumn],
    columns: &[PolyColumn],
) -> Option<Vec<Vec<Option<i64>>>> {
    let n = basis.len();
    let det = det_bareiss(rows_of(basis, None, None));
    let vdet = det.valuation()? as i64;
    let cofactors: Vec<Vec<IntPoly>> = (0..n)
        .map(|pos| {
            (0..n)
                .map(|r| {
                    let minor = det_bareiss(rows_of(basis, Some(r), Some(pos)));
                    if (r + pos) % 2 == 1 {
                        minor.neg()
                    } else {
                        minor
                    }
                })
                .collect()
        })
        .collect();
    Some(
        columns
            .iter()
            .map(|col| {
                (0..n)
                    .map(|pos| {
                        let mut s = IntPoly::zero();
                        for (r, c) in cofactors[pos].iter().enumerate() {
                            s.add_assign(&col.entries[r].mul(c), false);
                        }
                        let v = s.valuation()? as i64;
                        Some(
                            v - col.denominator_valuation - vdet + basis[pos].denominator_valuation,
                        )
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Greedy selection of linearly independent columns in index order.
pub(crate) fn independent_columns(columns: &[Vector], rows: usize) -> Vec<usize> {
    // Reduced copies of accepted columns, each with its pivot row.
    let mut reduced: Vec<(usize, Vector)> = Vec::new();
    let mut picked = Vec::new();
    for (idx, col) in columns.iter().enumerate() {
        if picked.len() == rows {
            break;
        }
        let mut v = col.clone();
        for (pivot, r) in &reduced {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] / &r[*pivot];
                for i in 0..rows {
                    if !r[i].is_zero() {
                        v[i] = &v[i] - &(&f * &r[i]);
                    }
                }
            }
        }
        if let Some(pivot) = v.iter().position(|e| !e.is_zero()) {
            reduced.push((pivot, v));
            picked.push(idx);
        }
    }
    picked
}
