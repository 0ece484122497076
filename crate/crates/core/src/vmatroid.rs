//! Valuated matroids of rank `n` on the ground set `{0, …, m−1}`.
//!
//! A realized matroid evaluates `p(ω) = v(det M_ω)` exactly and memoizes the
//! result. Shifting by `x` gives `p_x(B) = p(B) − Σ_{b∈B} x_b`; scaling by a
//! positive integer `N` gives `N·p`. Both are cheap views sharing the memo.
//!
//! For a basis `B`, the exchange values `p(B ∪ i ∖ u) − p(B)` are the
//! coordinates of the fundamental circuit `X(B, i)`. On realized matroids they
//! come from the cofactor matrix of `M_B`: by Cramer's rule the exchanged
//! determinant is the dot product of column `i` with a cofactor column.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connection::MembraneData;
use crate::ext::{Ext, Tropical};
use crate::linalg::{self, PolyColumn, Vector};
use crate::{Error, Result};

enum Source {
    Realized(Vec<PolyColumn>),
    Table(HashMap<Vec<usize>, BigRational>),
}

/// Exchange values for one basis, unscaled and unshifted.
///
/// `deltas[i][pos] = p(B ∪ i ∖ B[pos]) − p(B)`, `None` standing for `∞`.
pub(crate) struct ExchangeTable {
    pub basis: Vec<usize>,
    pub deltas: Vec<Vec<Option<BigRational>>>,
}

struct Inner {
    m: usize,
    n: usize,
    source: Source,
    memo: Mutex<HashMap<Vec<usize>, Tropical>>,
    exchange: Mutex<HashMap<Vec<usize>, Arc<ExchangeTable>>>,
    initial: OnceLock<Vec<usize>>,
}

/// A valuated matroid together with an optional scale and shift.
#[derive(Clone)]
pub struct ValuatedMatroid {
    inner: Arc<Inner>,
    scale: BigInt,
    shift: Option<Arc<Vec<BigRational>>>,
}

impl fmt::Debug for ValuatedMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValuatedMatroid")
            .field("m", &self.inner.m)
            .field("n", &self.inner.n)
            .field(
                "realized",
                &matches!(self.inner.source, Source::Realized(_)),
            )
            .field("scale", &self.scale)
            .field("shifted", &self.shift.is_some())
            .finish()
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Sorted copy of `subset` if it has `n` distinct elements below `m`.
fn canonical(subset: &[usize], m: usize, n: usize) -> Option<Vec<usize>> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    (s.len() == n && s.iter().all(|&e| e < m)).then_some(s)
}

/// `B ∪ {add} ∖ {remove}`, sorted.
pub(crate) fn exchange(basis: &[usize], remove: usize, add: usize) -> Vec<usize> {
    let mut out: Vec<usize> = basis.iter().copied().filter(|&b| b != remove).collect();
    out.push(add);
    out.sort_unstable();
    out
}

impl ValuatedMatroid {
    fn from_source(m: usize, n: usize, source: Source) -> Self {
        ValuatedMatroid {
            inner: Arc::new(Inner {
                m,
                n,
                source,
                memo: Mutex::new(HashMap::new()),
                exchange: Mutex::new(HashMap::new()),
                initial: OnceLock::new(),
            }),
            scale: BigInt::one(),
            shift: None,
        }
    }

    /// Matroid of `p(ω) = v(det[columns_ω])` for `m` columns of length `n`.
    pub fn realize(columns: Vec<Vector>) -> Result<Self> {
        let m = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let independent = linalg::independent_columns(&columns, n);
        if independent.len() < n || n == 0 {
            return Err(Error::RankDeficient {
                rank: independent.len(),
                expected: n,
            });
        }
        let poly = columns.iter().map(|c| PolyColumn::new(c)).collect();
        let vm = Self::from_source(m, n, Source::Realized(poly));
        let _ = vm.inner.initial.set(independent);
        Ok(vm)
    }

    /// Matroid of the active membrane columns; its ground set is indexed
    /// like [`MembraneData::active`].
    pub fn from_membrane(md: &MembraneData) -> Self {
        Self::realize(md.active_columns()).expect("membrane columns contain the identity block")
    }

    /// Matroid given by an explicit table; subsets absent from it are
    /// non-bases. No axiom check is performed.
    pub fn from_values(
        m: usize,
        n: usize,
        values: impl IntoIterator<Item = (Vec<usize>, BigRational)>,
    ) -> Result<Self> {
        let mut table = HashMap::new();
        for (subset, v) in values {
            let key = canonical(&subset, m, n).ok_or_else(|| {
                Error::InvalidArgument(format!("{subset:?} is not an {n}-subset of [{m}]"))
            })?;
            table.insert(key, v);
        }
        if table.is_empty() {
            return Err(Error::RankDeficient {
                rank: 0,
                expected: n,
            });
        }
        Ok(Self::from_source(m, n, Source::Table(table)))
    }

    pub fn ground_size(&self) -> usize {
        self.inner.m
    }

    pub fn rank(&self) -> usize {
        self.inner.n
    }

    pub fn is_realized(&self) -> bool {
        matches!(self.inner.source, Source::Realized(_))
    }

    /// Shift currently applied, if any.
    pub fn shift_vector(&self) -> Option<&[BigRational]> {
        self.shift.as_deref().map(Vec::as_slice)
    }

    /// Raw `p(ω)` before scale and shift.
    fn raw_value(&self, key: &[usize]) -> Tropical {
        if let Some(v) = self.inner.memo.lock().unwrap().get(key) {
            return v.clone();
        }
        let v = match &self.inner.source {
            Source::Realized(poly) => {
                let cols: Vec<&PolyColumn> = key.iter().map(|&i| &poly[i]).collect();
                linalg::det_valuation(&cols).map(int)
            }
            Source::Table(t) => t.get(key).cloned().into(),
        };
        self.inner
            .memo
            .lock()
            .unwrap()
            .insert(key.to_vec(), v.clone());
        v
    }

    fn shift_sum(&self, subset: &[usize]) -> BigRational {
        match &self.shift {
            Some(x) => subset.iter().map(|&i| &x[i]).sum(),
            None => BigRational::zero(),
        }
    }

    /// `p(ω)` for any subset: `∞` unless `ω` is an `n`-set of distinct elements
    /// that is a basis.
    pub fn value(&self, subset: &[usize]) -> Tropical {
        let Some(key) = canonical(subset, self.inner.m, self.inner.n) else {
            return Ext::Infinity;
        };
        let raw = self.raw_value(&key);
        let scale = BigRational::from_integer(self.scale.clone());
        raw.map(|v| v * scale - self.shift_sum(&key))
    }

    pub fn is_basis(&self, subset: &[usize]) -> bool {
        self.value(subset).is_finite()
    }

    /// `p_x`; shifts compose additively.
    pub fn shift(&self, x: &[BigRational]) -> Result<Self> {
        if x.len() != self.inner.m {
            return Err(Error::DimensionMismatch {
                expected: self.inner.m,
                found: x.len(),
            });
        }
        let shift = match &self.shift {
            Some(y) => y.iter().zip(x).map(|(a, b)| a + b).collect(),
            None => x.to_vec(),
        };
        Ok(ValuatedMatroid {
            inner: Arc::clone(&self.inner),
            scale: self.scale.clone(),
            shift: Some(Arc::new(shift)),
        })
    }

    /// `N·p` for a positive integer `N`.
    pub fn scaled(&self, factor: u32) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidArgument(
                "scale factor must be positive".into(),
            ));
        }
        let f = BigRational::from_integer(factor.into());
        Ok(ValuatedMatroid {
            inner: Arc::clone(&self.inner),
            scale: &self.scale * BigInt::from(factor),
            shift: self
                .shift
                .as_ref()
                .map(|x| Arc::new(x.iter().map(|v| v * &f).collect())),
        })
    }

    /// Some basis, independent of scale and shift.
    pub fn initial_basis(&self) -> Vec<usize> {
        self.inner
            .initial
            .get_or_init(|| {
                (0..self.inner.m)
                    .combinations(self.inner.n)
                    .find(|c| self.raw_value(c).is_finite())
                    .expect("a valuated matroid has a basis")
            })
            .clone()
    }

    /// All bases, in lexicographic order.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        (0..self.inner.m)
            .combinations(self.inner.n)
            .filter(|c| self.is_basis(c))
            .collect()
    }

    pub(crate) fn exchange_table(&self, basis: &[usize]) -> Result<Arc<ExchangeTable>> {
        let key = canonical(basis, self.inner.m, self.inner.n)
            .ok_or_else(|| Error::NotABasis(basis.to_vec()))?;
        if let Some(t) = self.inner.exchange.lock().unwrap().get(&key) {
            return Ok(Arc::clone(t));
        }
        let m = self.inner.m;
        let deltas = match &self.inner.source {
            Source::Realized(poly) => {
                let b: Vec<&PolyColumn> = key.iter().map(|&i| &poly[i]).collect();
                linalg::exchange_valuations(&b, poly)
                    .ok_or_else(|| Error::NotABasis(key.clone()))?
                    .into_iter()
                    .map(|row| row.into_iter().map(|d| d.map(int)).collect())
                    .collect()
            }
            Source::Table(_) => {
                let Ext::Finite(pb) = self.raw_value(&key) else {
                    return Err(Error::NotABasis(key));
                };
                (0..m)
                    .map(|i| {
                        key.iter()
                            .map(|&u| {
                                if key.contains(&i) {
                                    (i == u).then(BigRational::zero)
                                } else {
                                    self.raw_value(&exchange(&key, u, i))
                                        .finite()
                                        .map(|v| v - &pb)
                                }
                            })
                            .collect()
                    })
                    .collect()
            }
        };
        let table = Arc::new(ExchangeTable {
            basis: key.clone(),
            deltas,
        });
        self.inner
            .exchange
            .lock()
            .unwrap()
            .insert(key, Arc::clone(&table));
        Ok(table)
    }

    /// `p(B ∪ i ∖ B[pos]) − p(B)` with this matroid's scale and shift.
    pub(crate) fn delta(&self, t: &ExchangeTable, i: usize, pos: usize) -> Option<BigRational> {
        let d = t.deltas[i][pos].as_ref()?;
        let mut d = d * BigRational::from_integer(self.scale.clone());
        if let Some(x) = &self.shift {
            d = d - &x[i] + &x[t.basis[pos]];
        }
        Some(d)
    }

    /// The exchange values `p(B ∪ i ∖ u) − p(B)` for all `i` and `u ∈ B`,
    /// through the fast path. Entry `[i][pos]` refers to `u = B[pos]`.
    pub fn exchange_values(&self, basis: &[usize]) -> Result<Vec<Vec<Tropical>>> {
        let t = self.exchange_table(basis)?;
        Ok((0..self.inner.m)
            .map(|i| {
                (0..self.inner.n)
                    .map(|pos| self.delta(&t, i, pos).into())
                    .collect()
            })
            .collect())
    }

    fn checked_basis(&self, basis: &[usize]) -> Result<(Vec<usize>, BigRational)> {
        let key = canonical(basis, self.inner.m, self.inner.n)
            .ok_or_else(|| Error::NotABasis(basis.to_vec()))?;
        match self.value(&key) {
            Ext::Finite(v) => Ok((key, v)),
            Ext::Infinity => Err(Error::NotABasis(key)),
        }
    }

    /// `X(B, v)_u = p(B ∪ v ∖ u) − p(B)`, normalized to minimum 0 unless an
    /// anchor `(c, value)` pins coordinate `c`.
    pub fn fundamental_circuit(
        &self,
        basis: &[usize],
        v: usize,
        anchor: Option<(usize, BigRational)>,
    ) -> Result<Circuit> {
        let (b, pb) = self.checked_basis(basis)?;
        if v >= self.inner.m || b.contains(&v) {
            return Err(Error::ElementPlacement {
                element: v,
                inside: true,
            });
        }
        let values = (0..self.inner.m)
            .map(|u| {
                if u == v {
                    Ext::Finite(BigRational::zero())
                } else if b.contains(&u) {
                    self.value(&exchange(&b, u, v)) - pb.clone()
                } else {
                    Ext::Infinity
                }
            })
            .collect();
        Circuit { values }.normalize_with(anchor)
    }

    /// `X*(B, v)_u = p(B ∪ u ∖ v) − p(B)` for `v ∈ B`, normalized like circuits.
    pub fn fundamental_cocircuit(
        &self,
        basis: &[usize],
        v: usize,
        anchor: Option<(usize, BigRational)>,
    ) -> Result<Circuit> {
        let (b, pb) = self.checked_basis(basis)?;
        if !b.contains(&v) {
            return Err(Error::ElementPlacement {
                element: v,
                inside: false,
            });
        }
        let values = (0..self.inner.m)
            .map(|u| {
                if u == v {
                    Ext::Finite(BigRational::zero())
                } else if b.contains(&u) {
                    Ext::Infinity
                } else {
                    self.value(&exchange(&b, v, u)) - pb.clone()
                }
            })
            .collect();
        Circuit { values }.normalize_with(anchor)
    }

    /// A basis minimizing `p_x`, by single-exchange descent from the initial basis.
    pub fn minimal_basis(&self, x: &[BigRational]) -> Result<Vec<usize>> {
        self.minimal_basis_from(x, &self.initial_basis())
    }

    /// Exchange descent from `start`: apply the first strictly improving swap
    /// `B → B ∪ v ∖ u` in `(u, v)` order until none is left. A local optimum
    /// of a valuated matroid is a global one.
    pub fn minimal_basis_from(&self, x: &[BigRational], start: &[usize]) -> Result<Vec<usize>> {
        if x.len() != self.inner.m {
            return Err(Error::DimensionMismatch {
                expected: self.inner.m,
                found: x.len(),
            });
        }
        let (mut b, _) = self.checked_basis(start)?;
        let mut steps = 0usize;
        'descent: loop {
            let t = self.exchange_table(&b)?;
            for (pos, &u) in b.iter().enumerate() {
                for v in 0..self.inner.m {
                    if b.contains(&v) {
                        continue;
                    }
                    if let Some(d) = self.delta(&t, v, pos) {
                        if (d - &x[v] + &x[u]).is_negative() {
                            b = exchange(&b, u, v);
                            steps += 1;
                            continue 'descent;
                        }
                    }
                }
            }
            log::trace!("minimal basis {b:?} after {steps} exchanges");
            return Ok(b);
        }
    }

    /// Sample basis pairs and check the exchange axiom
    /// `p(B) + p(B') ≥ p(B ∪ v ∖ u) + p(B' ∪ u ∖ v)` for some `v ∈ B' ∖ B`.
    pub fn check_exchange_axiom(&self, samples: usize, seed: u64) -> AxiomReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = AxiomReport::default();
        let mut pool: Option<Vec<Vec<usize>>> = None;
        for _ in 0..samples {
            let b1 = self.sample_basis(&mut rng, &mut pool);
            let b2 = self.sample_basis(&mut rng, &mut pool);
            let only_b1: Vec<usize> = b1.iter().copied().filter(|e| !b2.contains(e)).collect();
            let Some(&u) = only_b1.choose(&mut rng) else {
                report.trivial += 1;
                continue;
            };
            report.checked += 1;
            let lhs = self.value(&b1) + self.value(&b2);
            let ok = b2.iter().filter(|e| !b1.contains(e)).any(|&v| {
                let rhs = self.value(&exchange(&b1, u, v)) + self.value(&exchange(&b2, v, u));
                lhs >= rhs
            });
            if !ok {
                report.violations.push(AxiomViolation {
                    basis: b1,
                    other: b2,
                    element: u,
                });
            }
        }
        report
    }

    /// `count` bases drawn uniformly at random, with replacement.
    pub fn sample_bases(&self, count: usize, seed: u64) -> Vec<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool = None;
        (0..count)
            .map(|_| self.sample_basis(&mut rng, &mut pool))
            .collect()
    }

    fn sample_basis(&self, rng: &mut ChaCha8Rng, pool: &mut Option<Vec<Vec<usize>>>) -> Vec<usize> {
        let m = self.inner.m;
        let n = self.inner.n;
        if pool.is_none() {
            let ground: Vec<usize> = (0..m).collect();
            for _ in 0..64 {
                let mut c: Vec<usize> = ground.choose_multiple(rng, n).copied().collect();
                c.sort_unstable();
                if self.is_basis(&c) {
                    return c;
                }
            }
            *pool = Some(self.bases());
        }
        let all = pool.as_ref().unwrap();
        all[rng.gen_range(0..all.len())].clone()
    }
}

/// A valuated circuit or cocircuit; coordinates outside the support are `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    values: Vec<Tropical>,
}

impl Circuit {
    pub fn new(values: Vec<Tropical>) -> Self {
        Circuit { values }
    }

    pub fn values(&self) -> &[Tropical] {
        &self.values
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i].is_finite())
            .collect()
    }

    /// Indices attaining the minimum finite coordinate.
    pub fn minimizers(&self) -> Vec<usize> {
        let Some(min) = self.values.iter().min().filter(|v| v.is_finite()) else {
            return Vec::new();
        };
        (0..self.values.len())
            .filter(|&i| &self.values[i] == min)
            .collect()
    }

    /// Add `c` to every finite coordinate.
    pub fn translate(&self, c: &BigRational) -> Circuit {
        Circuit {
            values: self.values.iter().map(|v| v.clone() + c.clone()).collect(),
        }
    }

    /// Coordinatewise sum with an arbitrary vector.
    pub fn add_vector(&self, x: &[BigRational]) -> Circuit {
        Circuit {
            values: self
                .values
                .iter()
                .zip(x)
                .map(|(v, xi)| v.clone() + xi.clone())
                .collect(),
        }
    }

    /// Representative with minimal finite coordinate 0.
    pub fn normalized(&self) -> Circuit {
        match self.values.iter().min() {
            Some(Ext::Finite(min)) => self.translate(&-min.clone()),
            _ => self.clone(),
        }
    }

    /// Representative with coordinate `c` equal to `value`.
    pub fn anchored(&self, c: usize, value: &BigRational) -> Result<Circuit> {
        match self.values.get(c) {
            Some(Ext::Finite(cur)) => Ok(self.translate(&(value - cur))),
            _ => Err(Error::InvalidArgument(format!(
                "anchor {c} is outside the support"
            ))),
        }
    }

    fn normalize_with(self, anchor: Option<(usize, BigRational)>) -> Result<Circuit> {
        match anchor {
            Some((c, value)) => self.anchored(c, &value),
            None => Ok(self.normalized()),
        }
    }

    /// Equality up to an additive constant on the common support.
    pub fn equivalent(&self, other: &Circuit) -> bool {
        self.normalized() == other.normalized()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub basis: Vec<usize>,
    pub other: Vec<usize>,
    pub element: usize,
}

/// Outcome of [`ValuatedMatroid::check_exchange_axiom`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    /// Pairs for which the axiom was evaluated.
    pub checked: usize,
    /// Pairs with `B ⊆ B'`, where the axiom is vacuous.
    pub trivial: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}
