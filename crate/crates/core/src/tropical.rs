//! The tropical linear space `L_p` of a valuated matroid and the
//! nearest-point projection onto it.
//!
//! `L_p` is the set of `x` such that for every `(n+1)`-subset `τ` the minimum
//! of `p(τ ∖ τ_i) + x_{τ_i}` is attained at least twice. The projection
//! `π(x)` is the coordinatewise least point of `L_p` above `x`.
//!
//! [`project`] computes it from an `x`-minimal basis `B`: coordinates in `B`
//! are kept, and every other coordinate `i` becomes the minimum of
//! `p(B ∪ i ∖ u) − p(B) + x_u` over the at most `n` elements `u` of the
//! fundamental circuit of `B` and `i`. [`project_blue`] and [`project_red`]
//! are the classical enumerative formulas, kept as reference oracles for
//! small instances.

use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;

use crate::ext::{Ext, Tropical};
use crate::vmatroid::{exchange, ValuatedMatroid};
use crate::{Error, Result};

/// Largest number of subsets the enumerative oracles agree to scan.
pub const ORACLE_LIMIT: u128 = 100_000;

/// A point of `(ℚ ∪ {∞})^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalPoint(Vec<Tropical>);

impl TropicalPoint {
    pub fn new(coords: Vec<Tropical>) -> Self {
        TropicalPoint(coords)
    }

    pub fn from_finite(coords: Vec<BigRational>) -> Self {
        TropicalPoint(coords.into_iter().map(Ext::Finite).collect())
    }

    pub fn coords(&self) -> &[Tropical] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The coordinates as rationals, or the index of the first infinite one.
    pub fn to_finite(&self) -> Result<Vec<BigRational>> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, c)| c.as_finite().cloned().ok_or(Error::InfiniteCoordinate(i)))
            .collect()
    }

    /// Coordinatewise `≥`.
    pub fn dominates(&self, other: &TropicalPoint) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

impl fmt::Display for TropicalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(", "))
    }
}

fn check_len(p: &ValuatedMatroid, x: &TropicalPoint) -> Result<Vec<BigRational>> {
    if x.len() != p.ground_size() {
        return Err(Error::DimensionMismatch {
            expected: p.ground_size(),
            found: x.len(),
        });
    }
    x.to_finite()
}

/// Nearest-point projection of `x` onto `L_p`.
pub fn project(p: &ValuatedMatroid, x: &TropicalPoint) -> Result<TropicalPoint> {
    let xs = check_len(p, x)?;
    let b = p.minimal_basis(&xs)?;
    project_from_basis(p, &xs, &b)
}

/// As [`project`], starting the basis descent from `start`.
pub fn project_from(
    p: &ValuatedMatroid,
    x: &TropicalPoint,
    start: &[usize],
) -> Result<(TropicalPoint, Vec<usize>)> {
    let xs = check_len(p, x)?;
    let b = p.minimal_basis_from(&xs, start)?;
    Ok((project_from_basis(p, &xs, &b)?, b))
}

/// Projection read off a basis `B` that is `x`-minimal; minimality is not
/// verified.
pub fn project_from_basis(
    p: &ValuatedMatroid,
    x: &[BigRational],
    basis: &[usize],
) -> Result<TropicalPoint> {
    let t = p.exchange_table(basis)?;
    let b = &t.basis;
    let coords = (0..p.ground_size())
        .map(|i| {
            if b.contains(&i) {
                return Ext::Finite(x[i].clone());
            }
            b.iter()
                .enumerate()
                .filter_map(|(pos, &u)| p.delta(&t, i, pos).map(|d| d + &x[u]))
                .min()
                .into()
        })
        .collect();
    Ok(TropicalPoint(coords))
}

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    (0..k as u128).fold(1, |acc, i| acc * (m as u128 - i) / (i + 1))
}

fn guard(m: usize, k: usize) -> Result<()> {
    let c = binomial(m, k);
    if c > ORACLE_LIMIT {
        return Err(Error::TooLarge(c));
    }
    Ok(())
}

/// Blue Rule: `w_i = min_σ max_{j ∉ σ} p(σ ∪ i) − p(σ ∪ j) + x_j` over
/// `(n−1)`-subsets `σ`. Subsets with `σ ∪ i` dependent contribute nothing;
/// terms with `σ ∪ j` dependent are `−∞` and drop out of the maximum.
pub fn project_blue(p: &ValuatedMatroid, x: &TropicalPoint) -> Result<TropicalPoint> {
    let xs = check_len(p, x)?;
    let (m, n) = (p.ground_size(), p.rank());
    guard(m, n - 1)?;
    let sigmas: Vec<Vec<usize>> = (0..m).combinations(n - 1).collect();
    let coords = (0..m)
        .map(|i| {
            sigmas
                .iter()
                .filter_map(|sigma| {
                    let with = |e: usize| {
                        let mut s = sigma.clone();
                        s.push(e);
                        p.value(&s)
                    };
                    let Ext::Finite(pi) = with(i) else {
                        return None;
                    };
                    (0..m)
                        .filter(|j| !sigma.contains(j))
                        .filter_map(|j| with(j).finite().map(|pj| &pi - pj + &xs[j]))
                        .max()
                })
                .min()
                .into()
        })
        .collect();
    Ok(TropicalPoint(coords))
}

/// Red Rule: for every `(n+1)`-subset `τ` whose minimum of
/// `p(τ ∖ τ_i) + x_{τ_i}` is attained once, at `τ_i`, raise `x_{τ_i}` by at
/// least the gap to the second smallest value.
pub fn project_red(p: &ValuatedMatroid, x: &TropicalPoint) -> Result<TropicalPoint> {
    let xs = check_len(p, x)?;
    let (m, n) = (p.ground_size(), p.rank());
    guard(m, n + 1)?;
    let mut raise: Vec<Tropical> = vec![Ext::Finite(BigRational::from_integer(0.into())); m];
    for tau in (0..m).combinations(n + 1) {
        let vals = circuit_values(p, &tau, &xs);
        let mut order: Vec<usize> = (0..vals.len()).collect();
        order.sort_by(|&a, &b| vals[a].cmp(&vals[b]));
        let (lo, hi) = (&vals[order[0]], &vals[order[1]]);
        let Ext::Finite(lo) = lo else {
            continue;
        };
        if hi.as_finite() == Some(lo) {
            continue;
        }
        let gap = hi.clone() - lo.clone();
        let e = tau[order[0]];
        if gap > raise[e] {
            raise[e] = gap;
        }
    }
    Ok(TropicalPoint(
        xs.into_iter().zip(raise).map(|(xi, r)| r + xi).collect(),
    ))
}

/// `p(τ ∖ τ_i) + x_{τ_i}` for each position `i` of `τ`.
fn circuit_values(p: &ValuatedMatroid, tau: &[usize], x: &[BigRational]) -> Vec<Tropical> {
    tau.iter()
        .map(|&e| {
            let rest: Vec<usize> = tau.iter().copied().filter(|&t| t != e).collect();
            p.value(&rest) + x[e].clone()
        })
        .collect()
}

/// Membership in `L_p`, decided as `π(x) = x`.
pub fn in_linear_space(p: &ValuatedMatroid, x: &TropicalPoint) -> Result<bool> {
    Ok(&project(p, x)? == x)
}

/// Membership in `L_p` straight from the definition, scanning all
/// `(n+1)`-subsets. Accepts infinite coordinates.
pub fn in_linear_space_direct(p: &ValuatedMatroid, x: &TropicalPoint) -> Result<bool> {
    let (m, n) = (p.ground_size(), p.rank());
    if x.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: x.len(),
        });
    }
    guard(m, n + 1)?;
    Ok((0..m).combinations(n + 1).all(|tau| {
        let vals: Vec<Tropical> = tau
            .iter()
            .map(|&e| {
                let rest: Vec<usize> = tau.iter().copied().filter(|&t| t != e).collect();
                p.value(&rest) + x.0[e].clone()
            })
            .collect();
        let min = vals.iter().min().unwrap();
        !min.is_finite() || vals.iter().filter(|v| *v == min).count() >= 2
    }))
}

/// Support of the fundamental circuit of `B` and `i`, read from the exchange table.
pub fn fundamental_circuit_support(
    p: &ValuatedMatroid,
    basis: &[usize],
    i: usize,
) -> Result<Vec<usize>> {
    let t = p.exchange_table(basis)?;
    let mut support: Vec<usize> = t
        .basis
        .iter()
        .enumerate()
        .filter(|&(pos, _)| t.deltas[i][pos].is_some())
        .map(|(_, &u)| u)
        .collect();
    if !t.basis.contains(&i) {
        support.push(i);
        support.sort_unstable();
    }
    debug_assert!(support
        .iter()
        .all(|&u| u == i || p.is_basis(&exchange(&t.basis, u, i))));
    Ok(support)
}
