//! Linear differential systems at `z = 0` and their Gérard-Levelt membrane.
//!
//! Systems are stored in θ-form `θX = B·X` with `θ = z·d/dz`. The membrane
//! is spanned by the columns of `[A₀ | A₁ | … | Aₙ]` where `A₀ = I` and
//! `A_{j+1} = θ(A_j) + B·A_j`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::ext::{Ext, Tropical};
use crate::linalg::Vector;
use crate::scalar::RationalFunction;
use crate::tropical::TropicalPoint;
use crate::{Error, Result};

/// Square matrix over `ℚ(z)`, stored by rows.
pub type Matrix = Vec<Vec<RationalFunction>>;

/// Convention of an input matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemForm {
    /// `dX/dz = A·X`
    DDz,
    /// `θX = B·X`
    Theta,
}

/// An `n × n` system in θ-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemMatrix {
    rows: Matrix,
}

fn check_square(rows: &Matrix) -> Result<usize> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Document("empty matrix".into()));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NonSquare {
                row: i,
                found: r.len(),
                expected: n,
            });
        }
    }
    Ok(n)
}

impl SystemMatrix {
    pub fn from_theta(rows: Matrix) -> Result<Self> {
        check_square(&rows)?;
        Ok(SystemMatrix { rows })
    }

    /// From `dX/dz = A·X`; stored as `B = z·A`.
    pub fn from_d_dz(rows: Matrix) -> Result<Self> {
        check_square(&rows)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|e| e.mul_z_pow(1)).collect())
            .collect();
        Ok(SystemMatrix { rows })
    }

    pub fn new(form: SystemForm, rows: Matrix) -> Result<Self> {
        match form {
            SystemForm::DDz => Self::from_d_dz(rows),
            SystemForm::Theta => Self::from_theta(rows),
        }
    }

    pub fn zero(n: usize) -> Self {
        SystemMatrix {
            rows: vec![vec![RationalFunction::zero(); n]; n],
        }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// θ-form matrix `B`.
    pub fn theta_matrix(&self) -> &Matrix {
        &self.rows
    }

    /// `max(0, max_{i,j} −v(B_ij))`.
    pub fn poincare_rank(&self) -> u64 {
        self.rows
            .iter()
            .flatten()
            .filter_map(|e| e.valuation().finite())
            .map(|v| (-v).max(0) as u64)
            .max()
            .unwrap_or(0)
    }

    /// `A₀ = I, A_{j+1} = θ(A_j) + B·A_j` for `j < n`.
    pub fn iterated_matrices(&self) -> Vec<Matrix> {
        let n = self.dimension();
        let mut out = Vec::with_capacity(n + 1);
        out.push(identity(n));
        for _ in 0..n {
            let prev = out.last().unwrap();
            let mut next = theta_matrix(prev);
            let prod = mat_mul(&self.rows, prev);
            for (r, pr) in next.iter_mut().zip(prod) {
                for (e, p) in r.iter_mut().zip(pr) {
                    *e = &*e + &p;
                }
            }
            out.push(next);
        }
        out
    }

    pub fn membrane(&self) -> MembraneData {
        MembraneData::new(self)
    }
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        RationalFunction::one()
                    } else {
                        RationalFunction::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn theta_matrix(m: &Matrix) -> Matrix {
    m.iter()
        .map(|r| r.iter().map(RationalFunction::theta).collect())
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = RationalFunction::zero();
                    for (k, aik) in a[i].iter().enumerate() {
                        if !aik.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(aik * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Columns of `M = [A₀ | … | Aₙ]` with zero columns set aside.
///
/// Column `c` of `M` belongs to block `c / n`, i.e. it is column `c % n` of
/// `A_{c / n}`. Only the nonzero ("active") columns enter the matroid.
#[derive(Clone, Debug)]
pub struct MembraneData {
    n: usize,
    columns: Vec<Vector>,
    active: Vec<usize>,
    col_valuations: Vec<i64>,
}

impl MembraneData {
    pub fn new(system: &SystemMatrix) -> Self {
        let n = system.dimension();
        let mut columns = Vec::with_capacity(n * (n + 1));
        for a in system.iterated_matrices() {
            columns.extend((0..n).map(|j| a.iter().map(|row| row[j].clone()).collect::<Vector>()));
        }
        let mut active = Vec::new();
        let mut col_valuations = Vec::new();
        for (c, col) in columns.iter().enumerate() {
            if let Ext::Finite(v) = col.iter().map(RationalFunction::valuation).min().unwrap() {
                active.push(c);
                col_valuations.push(v);
            }
        }
        MembraneData {
            n,
            columns,
            active,
            col_valuations,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// All `n(n+1)` columns of `M`, zero columns included.
    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    /// Indices into [`columns`](Self::columns) of the nonzero columns.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn active_columns(&self) -> Vec<Vector> {
        self.active
            .iter()
            .map(|&c| self.columns[c].clone())
            .collect()
    }

    /// `v_λ` of each active column for the standard lattice: its minimal entry valuation.
    pub fn col_valuations(&self) -> &[i64] {
        &self.col_valuations
    }

    /// Derivative order of column `c` of `M`.
    pub fn block_of(&self, c: usize) -> usize {
        c / self.n
    }

    /// Valuations of the active columns in block `j`, in column order.
    pub fn block_valuations(&self, j: usize) -> Vec<i64> {
        self.active
            .iter()
            .zip(&self.col_valuations)
            .filter(|(&c, _)| self.block_of(c) == j)
            .map(|(_, &v)| v)
            .collect()
    }

    /// Lattice point `u^ℓ_k` of `F^ℓ_k(λ)` on the active columns: `−k·j` in
    /// blocks `j ≤ ℓ`, the column valuation in blocks `j > ℓ`.
    pub fn membrane_point(&self, ell: usize, k: &BigRational) -> Result<MembranePoint> {
        if ell > self.n {
            return Err(Error::InvalidArgument(format!(
                "ℓ = {ell} exceeds the dimension {}",
                self.n
            )));
        }
        if k.is_negative() {
            return Err(Error::InvalidArgument(format!("k = {k} is negative")));
        }
        let coords = self
            .active
            .iter()
            .zip(&self.col_valuations)
            .map(|(&c, &v)| {
                let j = self.block_of(c);
                let x = if j <= ell {
                    if k.is_zero() {
                        BigRational::zero()
                    } else {
                        -k * BigRational::from_integer(j.into())
                    }
                } else {
                    BigRational::from_integer(v.into())
                };
                Tropical::Finite(x)
            })
            .collect();
        Ok(MembranePoint {
            coords: TropicalPoint::new(coords),
            ell,
            k: k.clone(),
        })
    }
}

/// A point `u^ℓ_k` of the Gérard-Levelt membrane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembranePoint {
    pub coords: TropicalPoint,
    pub ell: usize,
    pub k: BigRational,
}
