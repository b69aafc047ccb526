//! The lattice of upsets ordered by inclusion, its Möbius function and the
//! derangement numbers attached to every node.

use super::{bit, mask_labels, Poset, DEFAULT_CAP};
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

#[derive(Clone, Debug)]
pub struct UpsetLattice {
    /// Upsets as masks, sorted by size and then lexicographically by label list.
    pub nodes: Vec<u64>,
    /// `(i, j)` when `nodes[j]` covers `nodes[i]`, i.e. adds exactly one element.
    pub inclusion_covers: Vec<(usize, usize)>,
    /// Number of maximal chains of the interval `[node, 1̂]`.
    pub chains_to_top: Vec<u128>,
    /// Derangement number `d_S` of every node.
    pub derangement: Vec<i64>,
    index: HashMap<u64, usize>,
}

fn node_order(a: u64, b: u64) -> Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| mask_labels(a).cmp(&mask_labels(b)))
}

pub fn upset_lattice(p: &Poset) -> Result<UpsetLattice> {
    UpsetLattice::build(p, DEFAULT_CAP)
}

impl UpsetLattice {
    pub fn build(p: &Poset, cap: usize) -> Result<UpsetLattice> {
        let nodes = enumerate_upsets(p, cap)?;
        let index: HashMap<u64, usize> = nodes.iter().enumerate().map(|(i, &m)| (m, i)).collect();

        let mut inclusion_covers = Vec::new();
        for (i, &s) in nodes.iter().enumerate() {
            for x in 1..=p.n() {
                if s & bit(x) == 0 && p.above_mask(x) & !s == 0 {
                    inclusion_covers.push((i, index[&(s | bit(x))]));
                }
            }
        }
        inclusion_covers.sort_unstable();

        // Maximal chains from each node up to the top, filled from the top down.
        let mut chains_to_top = vec![0u128; nodes.len()];
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        for &(i, j) in &inclusion_covers {
            up[i].push(j);
        }
        for i in (0..nodes.len()).rev() {
            chains_to_top[i] = if up[i].is_empty() {
                1
            } else {
                up[i].iter().map(|&j| chains_to_top[j]).sum()
            };
        }

        let mut lattice = UpsetLattice {
            nodes,
            inclusion_covers,
            chains_to_top,
            derangement: Vec::new(),
            index,
        };
        lattice.derangement = (0..lattice.nodes.len())
            .map(|i| {
                lattice
                    .mobius_row(i)
                    .into_iter()
                    .map(|(j, mu)| mu as i128 * lattice.chains_to_top[j] as i128)
                    .sum::<i128>() as i64
            })
            .collect();
        Ok(lattice)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn labels(&self, i: usize) -> Vec<usize> {
        mask_labels(self.nodes[i])
    }

    pub fn derangement_of(&self, mask: u64) -> Option<i64> {
        self.index_of(mask).map(|i| self.derangement[i])
    }

    /// `μ(S, T)` for every node `T ⊇ S`, by the recursion
    /// `μ(S,S) = 1`, `μ(S,T) = -Σ_{S ⊆ R ⊊ T} μ(S,R)`.
    pub fn mobius_row(&self, i: usize) -> Vec<(usize, i64)> {
        let s = self.nodes[i];
        let interval: Vec<usize> = (i..self.nodes.len())
            .filter(|&j| self.nodes[j] & s == s)
            .collect();
        let mut mu: Vec<i64> = Vec::with_capacity(interval.len());
        for (t, &j) in interval.iter().enumerate() {
            if t == 0 {
                mu.push(1);
                continue;
            }
            let tj = self.nodes[j];
            let mut acc = 0i64;
            for (r, &k) in interval[..t].iter().enumerate() {
                let rk = self.nodes[k];
                if rk != tj && rk & tj == rk {
                    acc += mu[r];
                }
            }
            mu.push(-acc);
        }
        interval.into_iter().zip(mu).collect()
    }
}

fn enumerate_upsets(p: &Poset, cap: usize) -> Result<Vec<u64>> {
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(0);
    let mut frontier = vec![0u64];
    while let Some(s) = frontier.pop() {
        for x in 1..=p.n() {
            if s & bit(x) == 0 && p.above_mask(x) & !s == 0 {
                let t = s | bit(x);
                if seen.insert(t) {
                    if seen.len() > cap {
                        return Err(Error::Capacity {
                            what: "number of upsets",
                            cap,
                        });
                    }
                    frontier.push(t);
                }
            }
        }
    }
    let mut nodes: Vec<u64> = seen.into_iter().collect();
    nodes.sort_by(|&a, &b| node_order(a, b));
    Ok(nodes)
}

/// Number of linear extensions of a naturally labeled poset with no fixed point,
/// i.e. words with `π_i ≠ i` for every position. The empty poset counts 1.
pub fn poset_derangements(p: &Poset) -> Result<u128> {
    if !p.is_naturally_labeled() {
        return Err(Error::NotNatural);
    }
    let mut memo = HashMap::new();
    Ok(count_fixed_point_free(p, 0, &mut memo))
}

fn count_fixed_point_free(p: &Poset, placed: u64, memo: &mut HashMap<u64, u128>) -> u128 {
    if placed == p.full_mask() {
        return 1;
    }
    if let Some(&c) = memo.get(&placed) {
        return c;
    }
    let position = placed.count_ones() as usize + 1;
    let mut total = 0u128;
    for a in 1..=p.n() {
        if a != position && placed & bit(a) == 0 && p.below_mask(a) & !placed == 0 {
            total += count_fixed_point_free(p, placed | bit(a), memo);
        }
    }
    memo.insert(placed, total);
    total
}
