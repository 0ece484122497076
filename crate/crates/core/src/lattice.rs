//! Lattices over the valuation ring `𝒪 = {f ∈ ℚ(z) : v(f) ≥ 0}`.
//!
//! A lattice is given by generators `z^{-u_i} v_i`; [`dvr_reduce`] turns them
//! into an `𝒪`-basis by Gaussian elimination over the discrete valuation
//! ring, and [`LatticeBasis::valuation`] evaluates
//! `v_λ(x) = max{k : x ∈ z^k λ}`. These two operations are the lattice-side
//! oracle against which tropical projections are checked.

use crate::ext::Ext;
use crate::linalg::Vector;
use crate::scalar::RationalFunction;
use crate::{Error, Result};

/// Vectors `v_i` with integer exponents `u_i`, generating `Σ 𝒪·z^{-u_i} v_i`.
#[derive(Clone, Debug)]
pub struct GeneratorFamily {
    vectors: Vec<Vector>,
    exponents: Vec<i64>,
}

impl GeneratorFamily {
    pub fn new(vectors: Vec<Vector>, exponents: Vec<i64>) -> Result<Self> {
        if vectors.len() != exponents.len() {
            return Err(Error::DimensionMismatch {
                expected: vectors.len(),
                found: exponents.len(),
            });
        }
        if let Some(n) = vectors.first().map(Vec::len) {
            if let Some(bad) = vectors.iter().find(|v| v.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: bad.len(),
                });
            }
        }
        Ok(GeneratorFamily { vectors, exponents })
    }

    /// All exponents zero.
    pub fn unscaled(vectors: Vec<Vector>) -> Result<Self> {
        let exponents = vec![0; vectors.len()];
        Self::new(vectors, exponents)
    }

    pub fn dimension(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// The actual generators `z^{-u_i} v_i`.
    pub fn scaled_vectors(&self) -> impl Iterator<Item = Vector> + '_ {
        self.vectors
            .iter()
            .zip(&self.exponents)
            .map(|(v, &u)| v.iter().map(|e| e.mul_z_pow(-u)).collect())
    }
}

/// An `𝒪`-basis in valuation-echelon form.
///
/// Column `t` is zero in the pivot rows of columns `0..t`, so coordinates
/// are obtained by forward substitution along `pivot_rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    columns: Vec<Vector>,
    pivot_rows: Vec<usize>,
}

/// `𝒪`-basis of the lattice generated by `family`.
///
/// Each step pivots on an entry of minimal valuation among the remaining
/// rows and columns (ties: lowest row, then lowest column) and clears its
/// row in the other columns with multipliers of valuation ≥ 0, which are
/// unimodular over `𝒪`.
pub fn dvr_reduce(family: &GeneratorFamily) -> Result<LatticeBasis> {
    let n = family.dimension();
    let mut remaining: Vec<Vector> = family
        .scaled_vectors()
        .filter(|v| v.iter().any(|e| !e.is_zero()))
        .collect();
    let mut row_free = vec![true; n];
    let mut columns = Vec::with_capacity(n);
    let mut pivot_rows = Vec::with_capacity(n);

    for step in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for row in (0..n).filter(|&r| row_free[r]) {
            for (ci, col) in remaining.iter().enumerate() {
                if let Ext::Finite(v) = col[row].valuation() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, row, ci));
                    }
                }
            }
        }
        let Some((_, row, ci)) = best else {
            return Err(Error::RankDeficient {
                rank: step,
                expected: n,
            });
        };
        let pivot = remaining.remove(ci);
        let pivot_inv = pivot[row].inv()?;
        for col in remaining.iter_mut() {
            if col[row].is_zero() {
                continue;
            }
            let f = &col[row] * &pivot_inv;
            debug_assert!(f.valuation() >= Ext::Finite(0));
            for (e, p) in col.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *e = &*e - &(&f * p);
                }
            }
        }
        remaining.retain(|v| v.iter().any(|e| !e.is_zero()));
        row_free[row] = false;
        columns.push(pivot);
        pivot_rows.push(row);
    }
    debug_assert!(remaining.is_empty());
    Ok(LatticeBasis {
        columns,
        pivot_rows,
    })
}

impl LatticeBasis {
    /// The standard lattice `𝒪^n`.
    pub fn standard(n: usize) -> Self {
        let columns = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        if i == j {
                            RationalFunction::one()
                        } else {
                            RationalFunction::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        LatticeBasis {
            columns,
            pivot_rows: (0..n).collect(),
        }
    }

    /// Lattice spanned over `𝒪` by `n` independent columns.
    pub fn from_basis(columns: Vec<Vector>) -> Result<Self> {
        let n = columns.len();
        let family = GeneratorFamily::unscaled(columns)?;
        if family.dimension() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: family.dimension(),
            });
        }
        dvr_reduce(&family)
    }

    pub fn dimension(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    /// Coordinates of `x` in this basis over `ℚ(z)`.
    pub fn coordinates(&self, x: &[RationalFunction]) -> Result<Vec<RationalFunction>> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        let mut rest = x.to_vec();
        let mut coords = Vec::with_capacity(self.columns.len());
        for (col, &row) in self.columns.iter().zip(&self.pivot_rows) {
            let c = rest[row].checked_div(&col[row])?;
            if !c.is_zero() {
                for (e, p) in rest.iter_mut().zip(col) {
                    if !p.is_zero() {
                        *e = &*e - &(&c * p);
                    }
                }
            }
            coords.push(c);
        }
        debug_assert!(rest.iter().all(RationalFunction::is_zero));
        Ok(coords)
    }

    /// `v_λ(x) = max{k ∈ ℤ : x ∈ z^k λ}`, infinite exactly for `x = 0`.
    pub fn valuation(&self, x: &[RationalFunction]) -> Result<Ext<i64>> {
        Ok(self
            .coordinates(x)?
            .iter()
            .map(RationalFunction::valuation)
            .min()
            .unwrap_or(Ext::Infinity))
    }

    pub fn contains(&self, x: &[RationalFunction]) -> Result<bool> {
        Ok(self.valuation(x)? >= Ext::Finite(0))
    }

    pub fn is_sublattice_of(&self, other: &LatticeBasis) -> Result<bool> {
        for col in &self.columns {
            if !other.contains(col)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of the generated lattices (mutual inclusion).
    pub fn same_lattice(&self, other: &LatticeBasis) -> Result<bool> {
        Ok(self.is_sublattice_of(other)? && other.is_sublattice_of(self)?)
    }

    /// Basis of `z^k λ`.
    pub fn scaled(&self, k: i64) -> LatticeBasis {
        LatticeBasis {
            columns: self
                .columns
                .iter()
                .map(|c| c.iter().map(|e| e.mul_z_pow(k)).collect())
                .collect(),
            pivot_rows: self.pivot_rows.clone(),
        }
    }
}
