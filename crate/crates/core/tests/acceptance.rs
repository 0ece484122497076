//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use katzrank::connection::SystemMatrix;
use katzrank::ext::Ext;
use katzrank::io::parse_document;
use katzrank::ranks::{rank_report, RankAnalysis};
use katzrank::tropical::{project, project_blue, project_from_basis, project_red, TropicalPoint};
use katzrank::vmatroid::ValuatedMatroid;
use num_rational::BigRational;
use rand::Rng;

const EXAMPLE: &str = include_str!("../data/irregular-4x4.json");

/// Random realized matroids (n ≤ 3, m ≤ 6) with an integer point in [−5, 5]^m.
struct Instance {
    p: ValuatedMatroid,
    x: Vec<BigRational>,
}

fn corpus(count: u64, salt: u64, max_m: usize, max_n: usize) -> Vec<Instance> {
    (0..count)
        .map(|seed| {
            let mut rng = rng(salt + seed);
            let p = random_matroid(&mut rng, max_m, max_n);
            let x = random_point(&mut rng, p.ground_size(), 5);
            Instance { p, x }
        })
        .collect()
}

fn point(x: &[BigRational]) -> TropicalPoint {
    TropicalPoint::from_finite(x.to_vec())
}

fn add_constant(x: &[BigRational], c: &BigRational) -> Vec<BigRational> {
    x.iter().map(|v| v + c).collect()
}

fn scale(x: &[BigRational], n: u32) -> Vec<BigRational> {
    x.iter().map(|v| v * qi(n.into())).collect()
}

/// `Ok(detail)` on success, `Err(reason)` on failure.
type Outcome = Result<String, String>;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(failures: usize, total: usize, what: &str) -> Outcome {
    if failures == 0 {
        Ok(format!("{total} {what}, 0 failures"))
    } else {
        Err(format!("{failures} of {total} {what} failed"))
    }
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let system = parse_document(EXAMPLE).map_err(|e| e.to_string())?;
    let r = rank_report(&system).map_err(|e| e.to_string())?;
    let block = system.membrane().block_valuations(4);
    let elapsed = start.elapsed();
    let got = format!(
        "poincare={} true={} katz={} block 4 valuations {:?} in {:.2?}",
        r.poincare, r.true_poincare, r.katz, block, elapsed
    );
    let ok = r.poincare == 2
        && r.true_poincare == 2
        && r.katz == q(3, 2)
        && block == [-6, -5, -5, -6]
        && elapsed < Duration::from_secs(60);
    if ok {
        Ok(got)
    } else {
        Err(got)
    }
}

fn projection_threshold() -> Outcome {
    let system = parse_document(EXAMPLE).map_err(|e| e.to_string())?;
    let mut a = RankAnalysis::new(&system);
    let mut wrong = Vec::new();
    for step in 0..=24 {
        let k = q(step, 12);
        let equal = a.is_stable_at(&k).map_err(|e| e.to_string())?;
        if equal != (k >= q(3, 2)) {
            wrong.push(k.to_string());
        }
    }
    if wrong.is_empty() {
        Ok("25 values of k, equality exactly for k >= 3/2".into())
    } else {
        Err(format!("wrong verdict at k in {wrong:?}"))
    }
}

fn oracle_equivalence(corpus: &[Instance]) -> Outcome {
    let mut failures = 0;
    let mut moved = 0;
    for i in corpus {
        let x = point(&i.x);
        let w = project(&i.p, &x).unwrap();
        moved += usize::from(w != x);
        let agree = project_blue(&i.p, &x).unwrap() == w && project_red(&i.p, &x).unwrap() == w;
        failures += usize::from(!agree);
    }
    ensure(
        failures,
        corpus.len(),
        &format!("instances ({moved} points outside the linear space)"),
    )
}

fn projection_laws(corpus: &[Instance]) -> Outcome {
    let mut rng = rng(4);
    let mut failures = 0;
    let mut checks = 0;
    for i in corpus {
        let w = project(&i.p, &point(&i.x)).unwrap();
        let wf = finite(&w);
        let mut ok = w.dominates(&point(&i.x)) && project(&i.p, &w).unwrap() == w;
        for _ in 0..20 {
            let c = q(rng.gen_range(-40..=40), rng.gen_range(1..=7));
            let shifted = project(&i.p, &point(&add_constant(&i.x, &c))).unwrap();
            ok &= shifted == point(&add_constant(&wf, &c));
        }
        for n in [2u32, 3, 12] {
            let scaled = project(&i.p.scaled(n).unwrap(), &point(&scale(&i.x, n))).unwrap();
            ok &= scaled == point(&scale(&wf, n));
        }
        checks += 1;
        failures += usize::from(!ok);
    }
    ensure(
        failures,
        checks,
        "instances (order, idempotence, 20 translations, 3 scalings)",
    )
}

fn minimal_bases() -> Outcome {
    let instances = corpus(200, 50_000, 8, 4);
    let failures = instances
        .iter()
        .filter(|i| {
            let (best, tied) = exhaustive_minimum(&i.p, &i.x);
            let b = i.p.minimal_basis(&i.x).unwrap();
            let value_ok = i.p.shift(&i.x).unwrap().value(&b) == Ext::Finite(best);
            let w = project_from_basis(&i.p, &i.x, &b).unwrap();
            let ties_ok = tied
                .iter()
                .all(|t| project_from_basis(&i.p, &i.x, t).unwrap() == w);
            !(value_ok && ties_ok)
        })
        .count();
    ensure(failures, instances.len(), "instances (m <= 8, n <= 4)")
}

fn minimal_element_characterizations() -> Outcome {
    let instances = corpus(120, 60_000, 6, 3);
    let mut failures = 0;
    let mut elements = 0;
    for i in &instances {
        let px = i.p.shift(&i.x).unwrap();
        let (_, minimal) = exhaustive_minimum(&i.p, &i.x);
        let circuits = all_circuits(&px);
        let cocircuits = all_cocircuits(&px);
        let mut ok = true;
        for u in 0..i.p.ground_size() {
            let a = minimal.iter().any(|b| b.contains(&u));
            let b = circuits.iter().all(|c| c.minimizers() != [u]);
            let c = cocircuits.iter().any(|c| c.minimizers().contains(&u));
            ok &= a == b && b == c;
            elements += 1;
        }
        let w = finite(&project(&i.p, &point(&i.x)).unwrap());
        ok &= all_circuits(&i.p)
            .iter()
            .all(|c| c.add_vector(&w).minimizers().len() >= 2);
        failures += usize::from(!ok);
    }
    ensure(
        failures,
        instances.len(),
        &format!("instances ({elements} elements)"),
    )
}

fn lattice_cross_oracle() -> Outcome {
    let mut failures = 0;
    let systems = 100;
    for seed in 0..systems {
        let mut rng = rng(70_000 + seed);
        let system = random_system(&mut rng, 3);
        let n = system.dimension();
        let membrane = system.membrane();
        let cols = membrane.active_columns();
        let p = ValuatedMatroid::from_membrane(&membrane);
        let ell = rng.gen_range(0..=n);
        let k = qi(rng.gen_range(0..=3));
        let mut ok = true;
        let mut projections = Vec::new();
        let mut lattices = Vec::new();
        for l in [ell, n, n - 1] {
            let u = membrane.membrane_point(l, &k).unwrap().coords;
            let w = project(&p, &u).unwrap();
            let lattice = membrane_lattice(&cols, &u);
            if l == ell {
                ok &= cols
                    .iter()
                    .enumerate()
                    .all(|(i, v)| w.coords()[i] == lattice.valuation(v).unwrap().map(qi));
            }
            projections.push(w);
            lattices.push(lattice);
        }
        ok &= (projections[1] == projections[2]) == lattices[1].same_lattice(&lattices[2]).unwrap();
        failures += usize::from(!ok);
    }
    ensure(failures, systems as usize, "random systems")
}

fn regular_systems() -> Outcome {
    let mut seen = Vec::new();
    for n in 1..=3 {
        let r = rank_report(&SystemMatrix::zero(n)).map_err(|e| e.to_string())?;
        seen.push((r.poincare, r.true_poincare, r.katz.clone()));
    }
    let gauge = SystemMatrix::from_theta(vec![
        vec![mono(0, 0), mono(3, -3)],
        vec![mono(0, 0), mono(0, 0)],
    ])
    .unwrap();
    let r = rank_report(&gauge).map_err(|e| e.to_string())?;
    let zeros_ok = seen.iter().all(|t| *t == (0, 0, qi(0)));
    let gauge_ok = (r.poincare, r.true_poincare, r.katz.clone()) == (3, 0, qi(0));
    let detail = format!(
        "zero systems of size 1..=3 give (0, 0, 0), gauge example gives ({}, {}, {})",
        r.poincare, r.true_poincare, r.katz
    );
    if zeros_ok && gauge_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn scalar_euler_family() -> Outcome {
    let mut wrong = Vec::new();
    for c in [q(1, 1), q(-2, 1), q(5, 3)] {
        for p in 1..=3i64 {
            let b = katzrank::scalar::RationalFunction::monomial(c.clone(), -p);
            let system = SystemMatrix::from_theta(vec![vec![b]]).unwrap();
            let r = rank_report(&system).map_err(|e| e.to_string())?;
            if r.true_poincare != p as u64 || r.katz != qi(p) {
                wrong.push(format!("c={c} p={p}: ({}, {})", r.true_poincare, r.katz));
            }
        }
    }
    if wrong.is_empty() {
        Ok("9 equations, true rank = Katz rank = p".into())
    } else {
        Err(wrong.join("; "))
    }
}

fn exchange_axiom(corpus: &[Instance]) -> Outcome {
    let system = parse_document(EXAMPLE).map_err(|e| e.to_string())?;
    let example = ValuatedMatroid::from_membrane(&system.membrane());
    let matroids: Vec<&ValuatedMatroid> = corpus.iter().map(|i| &i.p).chain([&example]).collect();
    let failures = matroids
        .iter()
        .enumerate()
        .filter(|(seed, p)| !p.check_exchange_axiom(1000, *seed as u64).is_valid())
        .count();
    ensure(failures, matroids.len(), "matroids x 1000 samples")
}

fn main() -> ExitCode {
    let shared = corpus(200, 0, 6, 3);
    let criteria: Vec<Criterion> = vec![
        ("worked 4x4 example", Box::new(worked_example)),
        ("projection threshold", Box::new(projection_threshold)),
        (
            "oracle equivalence",
            Box::new(|| oracle_equivalence(&shared)),
        ),
        ("projection laws", Box::new(|| projection_laws(&shared))),
        ("minimal basis", Box::new(minimal_bases)),
        (
            "minimal-element characterizations",
            Box::new(minimal_element_characterizations),
        ),
        ("lattice cross-oracle", Box::new(lattice_cross_oracle)),
        ("regular systems", Box::new(regular_systems)),
        ("scalar Euler family", Box::new(scalar_euler_family)),
        ("exchange axiom", Box::new(|| exchange_axiom(&shared))),
    ];
    let mut failed = 0;
    for (number, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let detail = outcome.unwrap_or_else(|e| e);
        println!(
            "{status} criterion {:>2} {name}: {detail} [{:.1?}]",
            number + 1,
            start.elapsed()
        );
        failed += usize::from(status == "FAIL");
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
