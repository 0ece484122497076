//! Random instances and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use katzrank::connection::SystemMatrix;
use katzrank::ext::Ext;
use katzrank::lattice::{dvr_reduce, GeneratorFamily, LatticeBasis};
use katzrank::scalar::RationalFunction;
use katzrank::tropical::TropicalPoint;
use katzrank::vmatroid::{Circuit, ValuatedMatroid};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Column = Vec<RationalFunction>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    q(n, 1)
}

pub fn mono(c: i64, e: i64) -> RationalFunction {
    RationalFunction::monomial(qi(c), e)
}

/// Zero with probability 1/5, otherwise a sum of one or two monomials with
/// exponents in `lo..=hi`.
pub fn random_entry(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> RationalFunction {
    if rng.gen_ratio(1, 5) {
        return RationalFunction::zero();
    }
    let mut acc = RationalFunction::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        acc = &acc + &mono(c, rng.gen_range(lo..=hi));
    }
    acc
}

/// `m` nonzero columns of length `n` spanning `ℚ(z)^n`. Some columns are parallel
/// copies of earlier ones so that ties and dependent pairs show up.
pub fn random_columns(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<Column> {
    loop {
        let mut cols: Vec<Column> = Vec::with_capacity(m);
        for _ in 0..m {
            if !cols.is_empty() && rng.gen_ratio(1, 6) {
                let src = cols[rng.gen_range(0..cols.len())].clone();
                let f = mono(rng.gen_range(1..=2), rng.gen_range(-1..=1));
                cols.push(src.iter().map(|e| e * &f).collect());
            } else {
                let col: Column = loop {
                    let c: Column = (0..n).map(|_| random_entry(rng, -3, 3)).collect();
                    if c.iter().any(|e| !e.is_zero()) {
                        break c;
                    }
                };
                cols.push(col);
            }
        }
        if ValuatedMatroid::realize(cols.clone()).is_ok() {
            return cols;
        }
    }
}

pub fn random_matroid(rng: &mut ChaCha8Rng, max_m: usize, max_n: usize) -> ValuatedMatroid {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(n + 1..=max_m.max(n + 1));
    ValuatedMatroid::realize(random_columns(rng, m, n)).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, m: usize, bound: i64) -> Vec<BigRational> {
    (0..m).map(|_| qi(rng.gen_range(-bound..=bound))).collect()
}

/// A θ-form system of dimension `1..=max_n` with entry exponents in `-2..=1`.
pub fn random_system(rng: &mut ChaCha8Rng, max_n: usize) -> SystemMatrix {
    let n = rng.gen_range(1..=max_n);
    let rows = (0..n)
        .map(|_| (0..n).map(|_| random_entry(rng, -2, 1)).collect())
        .collect();
    SystemMatrix::from_theta(rows).unwrap()
}

pub fn finite(p: &TropicalPoint) -> Vec<BigRational> {
    p.to_finite().expect("finite point")
}

/// Minimum of `p_x` over all `n`-subsets, with every subset attaining it.
pub fn exhaustive_minimum(
    p: &ValuatedMatroid,
    x: &[BigRational],
) -> (BigRational, Vec<Vec<usize>>) {
    let px = p.shift(x).unwrap();
    let mut best: Option<BigRational> = None;
    let mut argmin = Vec::new();
    for b in (0..p.ground_size()).combinations(p.rank()) {
        let Ext::Finite(v) = px.value(&b) else {
            continue;
        };
        match &best {
            Some(cur) if &v > cur => {}
            Some(cur) if &v == cur => argmin.push(b),
            _ => {
                best = Some(v);
                argmin = vec![b];
            }
        }
    }
    (best.expect("some basis"), argmin)
}

/// Every circuit of `p`, one representative per support, found by
/// enumerating fundamental circuits of all bases.
pub fn all_circuits(p: &ValuatedMatroid) -> Vec<Circuit> {
    let mut out: Vec<Circuit> = Vec::new();
    for b in p.bases() {
        for v in (0..p.ground_size()).filter(|v| !b.contains(v)) {
            let c = p.fundamental_circuit(&b, v, None).unwrap();
            if !out.iter().any(|o| o.support() == c.support()) {
                out.push(c);
            }
        }
    }
    out
}

pub fn all_cocircuits(p: &ValuatedMatroid) -> Vec<Circuit> {
    let mut out: Vec<Circuit> = Vec::new();
    for b in p.bases() {
        for &v in &b {
            let c = p.fundamental_cocircuit(&b, v, None).unwrap();
            if !out.iter().any(|o| o.support() == c.support()) {
                out.push(c);
            }
        }
    }
    out
}

/// `∇_k v = z^k (θv + Bv)` for an integer `k`.
fn nabla_k(b: &[Vec<RationalFunction>], k: i64, v: &Column) -> Column {
    (0..v.len())
        .map(|r| {
            let bv = (0..v.len()).fold(RationalFunction::zero(), |acc, c| {
                &acc + &(&b[r][c] * &v[c])
            });
            (&v[r].theta() + &bv).mul_z_pow(k)
        })
        .collect()
}

/// `F^ℓ_k(λ) = λ + ∇_k λ + … + ∇_k^ℓ λ` for the standard lattice `λ`,
/// generated by the vectors `∇_k^j e_i`.
pub fn saturated_lattice(system: &SystemMatrix, ell: usize, k: i64) -> LatticeBasis {
    let n = system.dimension();
    let b = system.theta_matrix();
    let mut family = Vec::new();
    for i in 0..n {
        let mut v: Column = (0..n)
            .map(|r| {
                if r == i {
                    RationalFunction::one()
                } else {
                    RationalFunction::zero()
                }
            })
            .collect();
        family.push(v.clone());
        for _ in 0..ell {
            v = nabla_k(b, k, &v);
            family.push(v.clone());
        }
    }
    dvr_reduce(&GeneratorFamily::unscaled(family).unwrap()).unwrap()
}

/// The lattice `Σ 𝒪 z^{−u_i} v_i` of a membrane point with integer coordinates.
pub fn membrane_lattice(columns: &[Column], u: &TropicalPoint) -> LatticeBasis {
    let exps = finite(u)
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            i64::try_from(c.to_integer()).unwrap()
        })
        .collect();
    dvr_reduce(&GeneratorFamily::new(columns.to_vec(), exps).unwrap()).unwrap()
}

/// Determinant by cofactor expansion along the first column, over `ℚ(z)`.
pub fn det_laplace(cols: &[Column]) -> RationalFunction {
    let n = cols.len();
    if n == 1 {
        return cols[0][0].clone();
    }
    let mut acc = RationalFunction::zero();
    for r in 0..n {
        if cols[0][r].is_zero() {
            continue;
        }
        let minor: Vec<Column> = cols[1..]
            .iter()
            .map(|c| {
                c.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != r)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = &cols[0][r] * &det_laplace(&minor);
        acc = if r % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}
