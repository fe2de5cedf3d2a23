//! Quick invariant suite behind `fjlt selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chaining::{chain_dimension, ChainingRequest, CoveringModel};
use crate::experiments::{
    adversarial_vector, coordinate_tail_exact, flatten_tail, random_unit, FlattenMode, VectorKind,
};
use crate::fjlt::io::{deserialize_plan, serialize_plan};
use crate::fjlt::FjltPlan;
use crate::fourwise::CodeMatrix;
use crate::hadamard::{fwht_inplace, hadamard_entry};
use crate::Result;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = (&'static str, fn() -> Result<(bool, String)>);

const CHECKS: [Check; 8] = [
    ("hadamard-dense-oracle", hadamard_oracle),
    ("code-balance", code_balance),
    ("code-fast-vs-dense", code_fast_vs_dense),
    ("code-2to4-probe", code_probe),
    ("flatten-ones-d16", flatten_ones),
    ("hoeffding-dominance", hoeffding),
    ("chain-arithmetic", chain_arithmetic),
    ("plan-round-trip", plan_round_trip),
];

pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, check)| match check() {
            Ok((passed, detail)) => CheckOutcome { name, passed, detail },
            Err(e) => CheckOutcome { name, passed: false, detail: e.to_string() },
        })
        .collect()
}

fn hadamard_oracle() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for p in 0..=6 {
        let d = 1 << p;
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            fwht_inplace(&mut e)?;
            for (i, v) in e.iter().enumerate() {
                worst = worst.max((v - hadamard_entry(i, j, d)?).abs());
            }
        }
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:e}")))
}

fn code_balance() -> Result<(bool, String)> {
    for (k, d) in [(4, 32), (5, 128), (8, 128), (4, 64)] {
        let b = CodeMatrix::build(k, d)?;
        for rows in four_subsets(k) {
            if b.verify_balance(rows)?.iter().any(|&c| c != d as u64 / 16) {
                return Ok((false, format!("k={k} d={d} rows {rows:?} unbalanced")));
            }
        }
    }
    Ok((true, "all counts equal d/16".into()))
}

pub(crate) fn four_subsets(k: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

fn code_fast_vs_dense() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst = 0.0f64;
    for (k, d) in [(4, 32), (8, 128)] {
        let b = CodeMatrix::build(k, d)?;
        for _ in 0..10 {
            let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let fast = b.apply(&y)?;
            for (r, f) in fast.iter().enumerate() {
                let mut naive = 0.0;
                for (c, v) in y.iter().enumerate() {
                    naive += b.sign(r, c)? as f64 * b.scale() * v;
                }
                worst = worst.max((f - naive).abs());
            }
        }
    }
    Ok((worst <= 1e-10, format!("max deviation {worst:e}")))
}

fn code_probe() -> Result<(bool, String)> {
    let b = CodeMatrix::build(8, 128)?;
    let probe = b.norm_2to4_probe(1000, 0)?;
    let bound = b.norm_2to4_bound();
    Ok((probe <= bound + 1e-9, format!("probe {probe:.6} vs bound {bound:.6}")))
}

fn flatten_ones() -> Result<(bool, String)> {
    let x = adversarial_vector(VectorKind::Ones, 16, 0)?;
    let dist = flatten_tail(&x, FlattenMode::exhaustive())?;
    let hits = dist.count_at_least(2.0);
    Ok((hits == 32 && dist.total() == 65536, format!("{hits}/65536 patterns reach ||HD'x||_4 = 1")))
}

fn hoeffding() -> Result<(bool, String)> {
    let grid: Vec<f64> = (1..=20).map(|i| i as f64 * 0.15).collect();
    for s in 0..5 {
        let x = random_unit(12, s, 0);
        let tail = coordinate_tail_exact(&x, &grid)?;
        if tail.probabilities().iter().zip(tail.hoeffding_bounds()).any(|(p, b)| *p > b) {
            return Ok((false, format!("bound violated for seed {s}")));
        }
    }
    Ok((true, "exact tails below 2exp(-t^2/2)".into()))
}

fn chain_arithmetic() -> Result<(bool, String)> {
    let single = chain_dimension(&ChainingRequest::new(CoveringModel::Finite { n: 1 }, 0.5, 0.5))?;
    let unit = chain_dimension(&ChainingRequest::new(
        CoveringModel::Explicit { ln_n: vec![1.0], saturate: true },
        0.5,
        (-1.0f64).exp(),
    ))?;
    Ok((single.k == 10 && unit.k == 144, format!("k = {} and {}", single.k, unit.k)))
}

fn plan_round_trip() -> Result<(bool, String)> {
    let plan = FjltPlan::new(128, 8, 12345)?;
    let back = deserialize_plan(&serialize_plan(&plan))?;
    Ok((back == plan, "serialized plan reloads identically".into()))
}
