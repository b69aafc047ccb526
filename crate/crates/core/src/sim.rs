//! Monte-Carlo simulation of the promotion walk and the right-factor statistic
//! behind the convergence bound.

use crate::error::{Error, Result};
use crate::linext::{hat_promotion, ExtensionTable, LinearExtension};
use crate::poset::{Poset, DEFAULT_CAP};
use crate::rational::to_f64;
use crate::stationary::{
    check_bound_applies, convergence_bound, stationary_distribution_capped, ProbabilityVector,
};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const GENERATOR: &str = "ChaCha8Rng::seed_from_u64(seed), stream = trial index";

fn label_distribution(x: &ProbabilityVector) -> WeightedIndex<f64> {
    WeightedIndex::new(x.to_f64()).expect("parameters are positive")
}

/// One step: draw `k` with probability `x_k` and apply `∂̂_k`.
pub fn step<R: Rng>(
    p: &Poset,
    pi: &LinearExtension,
    x: &ProbabilityVector,
    rng: &mut R,
) -> Result<LinearExtension> {
    if x.n() != p.n() {
        return Err(Error::Dimension {
            expected: p.n(),
            got: x.n(),
        });
    }
    let k = label_distribution(x).sample(rng) + 1;
    step_with_label(p, pi, k)
}

/// The step taken when label `k` is drawn.
pub fn step_with_label(p: &Poset, pi: &LinearExtension, k: usize) -> Result<LinearExtension> {
    hat_promotion(p, pi, k)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimEntry {
    pub extension: LinearExtension,
    pub count: u64,
    pub empirical: f64,
    pub stationary: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub steps: u64,
    pub trials: u64,
    pub seed: u64,
    pub generator: &'static str,
    pub start: LinearExtension,
    pub distribution: Vec<SimEntry>,
    pub tv_to_stationary: f64,
    /// `None` when the bound does not apply to the poset.
    pub chernoff_bound: Option<f64>,
}

/// `trials` independent walks of `steps` steps from the lexicographically
/// least extension. Trial `t` draws from its own stream `t` of the seeded
/// generator, so the report depends only on the arguments.
pub fn simulate(
    p: &Poset,
    x: &ProbabilityVector,
    steps: u64,
    trials: u64,
    seed: u64,
) -> Result<SimReport> {
    if trials == 0 {
        return Err(Error::Range("trials must be at least 1".into()));
    }
    let stationary = stationary_distribution_capped(p, x, DEFAULT_CAP)?;
    let table = ExtensionTable::build_capped(p, DEFAULT_CAP)?;
    let labels = label_distribution(x);

    let mut counts = vec![0u64; table.len()];
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        let mut s = 0usize;
        for _ in 0..steps {
            s = table.hat[s][labels.sample(&mut rng)];
        }
        counts[s] += 1;
    }

    let distribution: Vec<SimEntry> = table
        .extensions
        .iter()
        .zip(&counts)
        .zip(&stationary.weights)
        .map(|((e, &count), w)| SimEntry {
            extension: e.clone(),
            count,
            empirical: count as f64 / trials as f64,
            stationary: to_f64(w),
        })
        .collect();
    let empirical: Vec<f64> = distribution.iter().map(|e| e.empirical).collect();
    let target: Vec<f64> = distribution.iter().map(|e| e.stationary).collect();
    let tv = tv_distance(&empirical, &target)?;
    let chernoff_bound = check_bound_applies(p)
        .ok()
        .map(|_| convergence_bound(p.n(), &x.min(), steps).value);
    Ok(SimReport {
        steps,
        trials,
        seed,
        generator: GENERATOR,
        start: table.extensions[0].clone(),
        distribution,
        tv_to_stationary: tv,
        chernoff_bound,
    })
}

/// `½ Σ |d1_i − d2_i|`.
pub fn tv_distance(d1: &[f64], d2: &[f64]) -> Result<f64> {
    if d1.len() != d2.len() {
        return Err(Error::Dimension {
            expected: d1.len(),
            got: d2.len(),
        });
    }
    Ok(0.5 * d1.iter().zip(d2).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// The monoid element `∂̂_{k_m} ⋯ ∂̂_{k_1}`: `k_1` acts first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidWord(Vec<usize>);

impl MonoidWord {
    pub fn new(p: &Poset, labels: Vec<usize>) -> Result<MonoidWord> {
        if let Some(&k) = labels.iter().find(|&&k| k == 0 || k > p.n()) {
            return Err(Error::Range(format!("generator {k} outside 1..={}", p.n())));
        }
        Ok(MonoidWord(labels))
    }

    pub fn identity() -> MonoidWord {
        MonoidWord(Vec::new())
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    /// `∂̂_k · self`.
    pub fn then(&self, k: usize) -> MonoidWord {
        let mut w = self.0.clone();
        w.push(k);
        MonoidWord(w)
    }

    pub fn apply(&self, p: &Poset, pi: &LinearExtension) -> Result<LinearExtension> {
        let mut cur = pi.clone();
        for &k in &self.0 {
            cur = hat_promotion(p, &cur, k)?;
        }
        Ok(cur)
    }

    fn apply_index(&self, table: &ExtensionTable, s: usize) -> usize {
        self.0.iter().fold(s, |s, &k| table.hat[s][k - 1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rfactor {
    /// Longest common suffix of all images.
    pub suffix: Vec<usize>,
    /// `n − |suffix|`; zero exactly when the word acts as a constant map.
    pub u: usize,
}

pub fn rfactor(p: &Poset, w: &MonoidWord) -> Result<Rfactor> {
    let table = ExtensionTable::build_capped(p, DEFAULT_CAP)?;
    Ok(rfactor_in(&table, p.n(), w))
}

pub fn rfactor_in(table: &ExtensionTable, n: usize, w: &MonoidWord) -> Rfactor {
    let images: Vec<&[usize]> = (0..table.len())
        .map(|s| table.extensions[w.apply_index(table, s)].word())
        .collect();
    let first = images[0];
    let mut len = 0;
    while len < n
        && images
            .iter()
            .all(|im| im[n - 1 - len] == first[n - 1 - len])
    {
        len += 1;
    }
    Rfactor {
        suffix: first[n - len..].to_vec(),
        u: n - len,
    }
}

/// Extends `w` by `∂̂_k` for a maximal `k` outside its right factor until the
/// word acts as a constant map. Each extension shrinks `u`, which needs a
/// single `F ⊕ L` component or a forest.
pub fn greedy_constant_word(p: &Poset, start: &MonoidWord) -> Result<MonoidWord> {
    check_bound_applies(p)?;
    let table = ExtensionTable::build_capped(p, DEFAULT_CAP)?;
    let mut w = start.clone();
    loop {
        let r = rfactor_in(&table, p.n(), &w);
        if r.u == 0 {
            return Ok(w);
        }
        let k = maximal_outside(p, &r.suffix);
        w = w.then(k);
    }
}

/// Some maximal element of `P` minus the given labels.
pub fn maximal_outside(p: &Poset, taken: &[usize]) -> usize {
    let rest: Vec<usize> = (1..=p.n()).filter(|k| !taken.contains(k)).collect();
    *rest
        .iter()
        .find(|&&k| rest.iter().all(|&j| !p.lt(k, j)))
        .expect("a nonempty poset has a maximal element")
}
