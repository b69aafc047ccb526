//! Seeded random posets from the supported families, for tests and sweeps.

use crate::poset::{bit, Poset};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random rooted forest on `n` elements with a random labeling.
pub fn random_forest<R: Rng>(rng: &mut R, n: usize) -> Poset {
    let mut below = vec![0u64; n];
    // Element i picks a parent among 0..i, or starts a new tree.
    let mut parent = vec![None; n];
    for i in 1..n {
        if !rng.gen_bool(0.2) {
            parent[i] = Some(rng.gen_range(0..i));
        }
    }
    for i in (0..n).rev() {
        let mut q = parent[i];
        while let Some(j) = q {
            below[j] |= 1 << i;
            q = parent[j];
        }
    }
    relabel_randomly(rng, below)
}

/// A random poset whose components are each `forest ⊕ ladder`.
pub fn random_class_poset<R: Rng>(rng: &mut R, n: usize) -> Poset {
    let comps = rng.gen_range(1..=n.clamp(1, 3));
    let mut sizes = vec![1usize; comps];
    for _ in comps..n {
        let c = rng.gen_range(0..comps);
        sizes[c] += 1;
    }
    let mut below = vec![0u64; n];
    let mut offset = 0;
    for size in sizes {
        let ladder_len = rng.gen_range(0..=size);
        let forest_len = size - ladder_len;
        let forest: Vec<usize> = (offset..offset + forest_len).collect();
        // Forest part: parents point to earlier indices.
        let mut parent = vec![None; forest_len];
        for i in 1..forest_len {
            if ladder_len > 0 && rng.gen_bool(0.3) {
                continue;
            }
            parent[i] = Some(rng.gen_range(0..i));
        }
        for i in 0..forest_len {
            let mut q = parent[i];
            while let Some(j) = q {
                below[forest[j]] |= 1 << forest[i];
                q = parent[j];
            }
        }
        // Ladder part: levels of size one or two stacked on top of the forest.
        let mut under: u64 = forest.iter().fold(0, |m, &i| m | 1 << i);
        let mut idx = offset + forest_len;
        let end = offset + size;
        while idx < end {
            let width = if idx + 1 < end && rng.gen_bool(0.5) {
                2
            } else {
                1
            };
            let mut level = 0u64;
            for e in idx..idx + width {
                below[e] = under;
                level |= 1 << e;
            }
            under |= level;
            idx += width;
        }
        offset = end;
    }
    relabel_randomly(rng, below)
}

/// Applies a uniformly random relabeling to 0-based `below` masks.
fn relabel_randomly<R: Rng>(rng: &mut R, below: Vec<u64>) -> Poset {
    let n = below.len();
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    let mut out = vec![0u64; n];
    for (i, mask) in below.into_iter().enumerate() {
        let mut m = 0u64;
        for j in 0..n {
            if mask >> j & 1 == 1 {
                m |= bit(perm[j]);
            }
        }
        out[perm[i] - 1] = m;
    }
    Poset::from_below(out)
}

/// Draws posets with `make` until one has at most `max_extensions` linear extensions.
pub fn with_extension_cap<R: Rng>(
    rng: &mut R,
    max_extensions: u128,
    mut make: impl FnMut(&mut R) -> Poset,
) -> Poset {
    loop {
        let p = make(rng);
        if p.count_linear_extensions() <= max_extensions {
            return p;
        }
    }
}
