//! Finite posets on the labels `1..=n`.
//!
//! A [`Poset`] is stored as its Hasse diagram plus the strict order relation as
//! bitmasks (`below[i]` holds every `j` with `j ≺ i`). Labels are 1-based in the
//! public API and 0-based in the masks.

mod classify;
mod format;
mod lattice;

pub use classify::{
    breakable_pairs, chain_completion, classify, ladder_levels, ComponentShape, Level,
    StructureClass, StructureTag,
};
pub use format::{parse_json, parse_poset_file, parse_text, PosetJson};
pub use lattice::{poset_derangements, upset_lattice, UpsetLattice};

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

/// Default cap on the number of upsets and of linear extensions.
pub const DEFAULT_CAP: usize = 5000;

/// Largest supported ground set; the order relation lives in `u64` masks.
pub const MAX_ELEMENTS: usize = 64;

#[inline]
pub(crate) fn bit(label: usize) -> u64 {
    1u64 << (label - 1)
}

/// Labels (1-based) contained in a mask, ascending.
pub fn mask_labels(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let t = m.trailing_zeros() as usize;
        out.push(t + 1);
        m &= m - 1;
    }
    out
}

/// Mask of a set of labels.
pub fn labels_mask(labels: &[usize]) -> u64 {
    labels.iter().fold(0u64, |m, &l| m | bit(l))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    below: Vec<u64>,
    above: Vec<u64>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.covers)
    }
}

/// Validates a cover list and builds the poset.
///
/// Redundant covers (implied by transitivity) and duplicates are rejected rather
/// than dropped, so that the input is always exactly a Hasse diagram.
pub fn parse_poset(n: usize, covers: &[(usize, usize)]) -> Result<Poset> {
    if n == 0 {
        return Err(Error::Range("a poset needs at least one element".into()));
    }
    if n > MAX_ELEMENTS {
        return Err(Error::Range(format!("n = {n} exceeds {MAX_ELEMENTS}")));
    }
    let mut seen = BTreeSet::new();
    for &(a, b) in covers {
        for l in [a, b] {
            if l == 0 || l > n {
                return Err(Error::Range(format!("label {l} not in 1..={n}")));
            }
        }
        if a == b {
            return Err(Error::Cycle(a));
        }
        if !seen.insert((a, b)) {
            return Err(Error::RedundantCover(a, b));
        }
    }

    // Kahn's algorithm gives a topological order or exposes a cycle.
    let mut indeg = vec![0usize; n + 1];
    let mut succ = vec![Vec::new(); n + 1];
    for &(a, b) in covers {
        indeg[b] += 1;
        succ[a].push(b);
    }
    let mut queue: Vec<usize> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop() {
        order.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    if order.len() < n {
        let stuck = (1..=n).find(|&v| indeg[v] > 0).unwrap_or(1);
        return Err(Error::Cycle(stuck));
    }

    let mut below = vec![0u64; n];
    for &v in &order {
        for &(a, b) in covers {
            if b == v {
                below[v - 1] |= below[a - 1] | bit(a);
            }
        }
    }
    let above = transpose(&below, n);
    for &(a, b) in covers {
        if above[a - 1] & below[b - 1] != 0 {
            return Err(Error::RedundantCover(a, b));
        }
    }
    let mut covers = covers.to_vec();
    covers.sort_unstable();
    Ok(Poset {
        n,
        covers,
        below,
        above,
    })
}

fn transpose(below: &[u64], n: usize) -> Vec<u64> {
    let mut above = vec![0u64; n];
    for b in 1..=n {
        for a in mask_labels(below[b - 1]) {
            above[a - 1] |= bit(b);
        }
    }
    above
}

impl Poset {
    /// Builds a poset from a strict order relation given as `below` masks.
    /// The relation must already be transitive and acyclic.
    pub(crate) fn from_below(below: Vec<u64>) -> Poset {
        let n = below.len();
        let above = transpose(&below, n);
        let mut covers = Vec::new();
        for b in 1..=n {
            for a in mask_labels(below[b - 1]) {
                if above[a - 1] & below[b - 1] == 0 {
                    covers.push((a, b));
                }
            }
        }
        covers.sort_unstable();
        Poset {
            n,
            covers,
            below,
            above,
        }
    }

    /// The poset with no elements.
    pub fn empty() -> Poset {
        Poset::from_below(Vec::new())
    }

    pub fn chain(n: usize) -> Poset {
        let below = (0..n).map(|i| (1u64 << i) - 1).collect();
        Poset::from_below(below)
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_below(vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Strict down-set of `a` as a mask.
    pub fn below_mask(&self, a: usize) -> u64 {
        self.below[a - 1]
    }

    /// Strict up-set of `a` as a mask.
    pub fn above_mask(&self, a: usize) -> u64 {
        self.above[a - 1]
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// `a ≺ b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.below[b - 1] & bit(a) != 0
    }

    /// `a ⪯ b`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.lt(b, a)
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.covers.binary_search(&(a, b)).is_ok()
    }

    pub fn upper_covers(&self, a: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|c| c.0 == a)
            .map(|c| c.1)
            .collect()
    }

    pub fn lower_covers(&self, b: usize) -> Vec<usize> {
        self.covers
            .iter()
            .filter(|c| c.1 == b)
            .map(|c| c.0)
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (1..=self.n).filter(|&a| self.above[a - 1] == 0).collect()
    }

    /// True iff `a ≺ b` implies `a < b`, i.e. the identity word is a linear extension.
    pub fn is_naturally_labeled(&self) -> bool {
        self.covers.iter().all(|&(a, b)| a < b)
    }

    /// Every element has at most one upper cover.
    pub fn is_rooted_forest(&self) -> bool {
        let mut up = vec![0usize; self.n + 1];
        for &(a, _) in &self.covers {
            up[a] += 1;
            if up[a] > 1 {
                return false;
            }
        }
        true
    }

    /// Every element has at most one upper and at most one lower cover.
    pub fn is_union_of_chains(&self) -> bool {
        let mut up = vec![0usize; self.n + 1];
        let mut down = vec![0usize; self.n + 1];
        for &(a, b) in &self.covers {
            up[a] += 1;
            down[b] += 1;
        }
        up.iter().all(|&c| c <= 1) && down.iter().all(|&c| c <= 1)
    }

    /// Connected components of the comparability graph, each sorted, ordered by
    /// smallest label.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n + 1];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for start in 1..=self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let nb = self.below[v - 1] | self.above[v - 1];
                for w in mask_labels(nb) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn component_mask(&self, a: usize) -> u64 {
        let mut mask = bit(a);
        let mut frontier = mask;
        while frontier != 0 {
            let mut next = 0u64;
            for v in mask_labels(frontier) {
                next |= self.below[v - 1] | self.above[v - 1];
            }
            frontier = next & !mask;
            mask |= next;
        }
        mask
    }

    /// Is `mask` an upset (closed upwards)?
    pub fn is_upset(&self, mask: u64) -> bool {
        mask_labels(mask)
            .into_iter()
            .all(|a| self.above[a - 1] & !mask == 0)
    }

    /// Removes the single relation `a ≺ b` for a cover `(a,b)`.
    ///
    /// Nothing lies strictly between `a` and `b`, so the remaining relation is
    /// still transitive; for a breakable pair this turns `… ⊕ a ⊕ b ⊕ …` into
    /// `… ⊕ {a,b} ⊕ …`.
    pub fn break_cover(&self, a: usize, b: usize) -> Result<Poset> {
        if a == 0 || b == 0 || a > self.n || b > self.n || !self.is_cover(a, b) {
            return Err(Error::Pair(a, b));
        }
        let mut below = self.below.clone();
        below[b - 1] &= !bit(a);
        Ok(Poset::from_below(below))
    }

    /// Induced subposet on `labels`, relabeled `1..=k` preserving numeric order.
    pub fn induced(&self, mask: u64) -> Poset {
        let keep = mask_labels(mask);
        let mut new_label = vec![0usize; self.n + 1];
        for (i, &l) in keep.iter().enumerate() {
            new_label[l] = i + 1;
        }
        let below = keep
            .iter()
            .map(|&l| {
                mask_labels(self.below[l - 1] & mask)
                    .into_iter()
                    .fold(0u64, |m, x| m | bit(new_label[x]))
            })
            .collect();
        Poset::from_below(below)
    }

    /// Applies a relabeling `label ↦ perm[label-1]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        assert_eq!(perm.len(), self.n);
        let mut below = vec![0u64; self.n];
        for b in 1..=self.n {
            below[perm[b - 1] - 1] = mask_labels(self.below[b - 1])
                .into_iter()
                .fold(0u64, |m, a| m | bit(perm[a - 1]));
        }
        Poset::from_below(below)
    }

    /// Ordinal sum `self ⊕ other`; `other`'s labels are shifted by `self.n()`.
    pub fn ordinal_sum(&self, other: &Poset) -> Poset {
        let n = self.n;
        let all_self = self.full_mask();
        let mut below = self.below.clone();
        for b in 0..other.n {
            below.push((other.below[b] << n) | all_self);
        }
        Poset::from_below(below)
    }

    /// Disjoint union `self + other`; `other`'s labels are shifted by `self.n()`.
    pub fn disjoint_sum(&self, other: &Poset) -> Poset {
        let n = self.n;
        let mut below = self.below.clone();
        below.extend(other.below.iter().map(|m| m << n));
        Poset::from_below(below)
    }

    /// Number of linear extensions, by dynamic programming over down-sets.
    pub fn count_linear_extensions(&self) -> u128 {
        let mut memo = std::collections::HashMap::new();
        self.count_from(0, &mut memo)
    }

    fn count_from(&self, placed: u64, memo: &mut std::collections::HashMap<u64, u128>) -> u128 {
        if placed == self.full_mask() {
            return 1;
        }
        if let Some(&c) = memo.get(&placed) {
            return c;
        }
        let mut total = 0u128;
        for a in 1..=self.n {
            if placed & bit(a) == 0 && self.below[a - 1] & !placed == 0 {
                total += self.count_from(placed | bit(a), memo);
            }
        }
        memo.insert(placed, total);
        total
    }
}
