//! True Poincaré rank and Katz rank by comparing projections of membrane points.
//!
//! The saturated lattices `F^n_k(λ)` and `F^{n−1}_k(λ)` coincide exactly when
//! `π(u^n_k) = π(u^{n−1}_k)`. The true Poincaré rank is the least integer `k`
//! where this happens, the Katz rank the least `k ∈ (1/N)ℕ` with
//! `N = lcm(1, …, n)`. Both scans stop at the Poincaré rank at the latest.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::connection::{MembraneData, SystemMatrix};
use crate::tropical::{project_from, TropicalPoint};
use crate::vmatroid::ValuatedMatroid;
use crate::{Error, Result};

/// One equality test `π(u^n_k) = π(u^{n−1}_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub k: BigRational,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub poincare: u64,
    pub true_poincare: u64,
    pub katz: BigRational,
    pub n: usize,
    pub m_active: usize,
    /// Every scanned `k` with its verdict, in increasing `k`.
    pub witnesses: Vec<Witness>,
}

/// `lcm(1, …, n)`.
pub fn ramification_index(n: usize) -> u64 {
    (1..=n as u64).fold(1, |acc, i| acc.lcm(&i))
}

/// Membrane, matroid and verdict cache of one system.
///
/// The matroid and its memoized determinant valuations are built once; each
/// scanned `k` only changes the point being projected.
pub struct RankAnalysis {
    membrane: MembraneData,
    matroid: ValuatedMatroid,
    poincare: u64,
    verdicts: BTreeMap<BigRational, bool>,
    hint: Vec<usize>,
}

impl RankAnalysis {
    pub fn new(system: &SystemMatrix) -> Self {
        let membrane = system.membrane();
        let matroid = ValuatedMatroid::from_membrane(&membrane);
        let hint = matroid.initial_basis();
        RankAnalysis {
            membrane,
            matroid,
            poincare: system.poincare_rank(),
            verdicts: BTreeMap::new(),
            hint,
        }
    }

    pub fn membrane(&self) -> &MembraneData {
        &self.membrane
    }

    pub fn matroid(&self) -> &ValuatedMatroid {
        &self.matroid
    }

    pub fn poincare_rank(&self) -> u64 {
        self.poincare
    }

    /// `π(u^ℓ_k)`.
    pub fn projection(&mut self, ell: usize, k: &BigRational) -> Result<TropicalPoint> {
        let u = self.membrane.membrane_point(ell, k)?;
        let (w, b) = project_from(&self.matroid, &u.coords, &self.hint)?;
        self.hint = b;
        Ok(w)
    }

    /// Whether `F^n_k(λ) = F^{n−1}_k(λ)`, i.e. `π(u^n_k) = π(u^{n−1}_k)`.
    pub fn is_stable_at(&mut self, k: &BigRational) -> Result<bool> {
        if let Some(&v) = self.verdicts.get(k) {
            return Ok(v);
        }
        let n = self.membrane.dimension();
        let top = self.projection(n, k)?;
        let below = self.projection(n - 1, k)?;
        let equal = top == below;
        log::debug!(
            "k = {k}: projections {}",
            if equal { "agree" } else { "differ" }
        );
        self.verdicts.insert(k.clone(), equal);
        Ok(equal)
    }

    fn first_stable(&mut self, denominator: u64) -> Result<BigRational> {
        let den = BigInt::from(denominator);
        for step in 0..=self.poincare * denominator {
            let k = BigRational::new(BigInt::from(step), den.clone());
            if self.is_stable_at(&k)? {
                return Ok(k);
            }
        }
        Err(Error::Unstabilized(self.poincare))
    }

    /// Least `k ∈ ℕ` with equal projections.
    pub fn true_poincare_rank(&mut self) -> Result<u64> {
        let k = self.first_stable(1)?;
        Ok(k.to_integer()
            .try_into()
            .expect("bounded by the Poincaré rank"))
    }

    /// Least `k ∈ (1/N)ℕ` with equal projections, `N = lcm(1, …, n)`.
    pub fn katz_rank(&mut self) -> Result<BigRational> {
        let n = self.membrane.dimension();
        self.first_stable(ramification_index(n))
    }

    pub fn witnesses(&self) -> Vec<Witness> {
        self.verdicts
            .iter()
            .map(|(k, &equal)| Witness {
                k: k.clone(),
                equal,
            })
            .collect()
    }

    pub fn report(&mut self) -> Result<RankReport> {
        let katz = self.katz_rank()?;
        let true_poincare = self.true_poincare_rank()?;
        debug_assert!(katz <= BigRational::from_integer(true_poincare.into()));
        debug_assert!(true_poincare <= self.poincare);
        debug_assert!(
            katz.is_zero() || katz.ceil() == BigRational::from_integer(true_poincare.into())
        );
        Ok(RankReport {
            poincare: self.poincare,
            true_poincare,
            katz,
            n: self.membrane.dimension(),
            m_active: self.membrane.active().len(),
            witnesses: self.witnesses(),
        })
    }
}

pub fn true_poincare_rank(system: &SystemMatrix) -> Result<u64> {
    RankAnalysis::new(system).true_poincare_rank()
}

pub fn katz_rank(system: &SystemMatrix) -> Result<BigRational> {
    RankAnalysis::new(system).katz_rank()
}

pub fn rank_report(system: &SystemMatrix) -> Result<RankReport> {
    RankAnalysis::new(system).report()
}
