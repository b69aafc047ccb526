#![allow(dead_code)]

use num_rational::BigRational;
use promotion::gen::{random_class_poset, random_forest, with_extension_cap};
use promotion::poset::{parse_poset, Poset};
use promotion::stationary::ProbabilityVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn forest_plus_ladder() -> Poset {
    parse_poset(6, &[(1, 2), (2, 4), (3, 4), (4, 5), (4, 6)]).unwrap()
}

pub fn ladder_2x2() -> Poset {
    parse_poset(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap()
}

pub fn completed_forest() -> Poset {
    parse_poset(6, &[(1, 2), (2, 4), (3, 4), (4, 5), (5, 6)]).unwrap()
}

pub fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

pub fn forest(seed: u64, n: usize, max_ext: u128) -> Poset {
    with_extension_cap(&mut rng(seed), max_ext, |r| random_forest(r, n))
}

pub fn class_poset(seed: u64, n: usize, max_ext: u128) -> Poset {
    with_extension_cap(&mut rng(seed), max_ext, |r| random_class_poset(r, n))
}

/// An arbitrary poset: a random relation on labels `i < j`, closed
/// transitively, given to the parser by its covers.
pub fn any_poset(seed: u64, n: usize) -> Poset {
    let mut r = rng(seed);
    let density = r.gen_range(0.0..0.6);
    let mut lt = vec![vec![false; n + 1]; n + 1];
    for i in 1..=n {
        for j in i + 1..=n {
            lt[i][j] = r.gen_bool(density);
        }
    }
    for k in 1..=n {
        for i in 1..=n {
            for j in 1..=n {
                if lt[i][k] && lt[k][j] {
                    lt[i][j] = true;
                }
            }
        }
    }
    let mut covers = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if lt[i][j] && !(1..=n).any(|k| lt[i][k] && lt[k][j]) {
                covers.push((i, j));
            }
        }
    }
    parse_poset(n, &covers).unwrap()
}

pub fn random_x(r: &mut ChaCha8Rng, n: usize) -> ProbabilityVector {
    let a: Vec<u64> = (0..n).map(|_| r.gen_range(1..=50)).collect();
    ProbabilityVector::from_weights(&a).unwrap()
}

/// A randomly relabeled ladder with `levels` levels of width one or two.
pub fn random_ladder(seed: u64, levels: usize) -> Poset {
    use rand::seq::SliceRandom;
    let mut r = rng(seed);
    let mut p: Option<Poset> = None;
    for _ in 0..levels {
        let level = Poset::antichain(r.gen_range(1..=2));
        p = Some(match p {
            None => level,
            Some(q) => q.ordinal_sum(&level),
        });
    }
    let p = p.expect("at least one level");
    let mut perm: Vec<usize> = (1..=p.n()).collect();
    perm.shuffle(&mut r);
    p.relabel(&perm)
}
