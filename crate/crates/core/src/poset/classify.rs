//! Structural classification: rooted forests, unions of chains, ladders and
//! ordinal sums `F ⊕ L` of a forest and a ladder per component.

use super::{bit, labels_mask, mask_labels, Poset};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructureTag {
    RootedForest,
    UnionOfChains,
    Ladder,
    ForestLadderSum,
    Other,
}

/// One level of a ladder: an antichain of size one or two. Pairs keep `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    Single(usize),
    Pair(usize, usize),
}

impl Level {
    pub fn pair(x: usize, y: usize) -> Level {
        Level::Pair(x.min(y), x.max(y))
    }

    pub fn elements(&self) -> Vec<usize> {
        match *self {
            Level::Single(a) => vec![a],
            Level::Pair(a, b) => vec![a, b],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Level::Single(_) => 1,
            Level::Pair(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: usize) -> bool {
        match *self {
            Level::Single(a) => a == x,
            Level::Pair(a, b) => a == x || b == x,
        }
    }
}

/// A connected component written as `forest ⊕ ladder`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentShape {
    pub elements: Vec<usize>,
    pub forest: Vec<usize>,
    /// Ladder levels from bottom to top.
    pub ladder: Vec<Level>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureClass {
    pub tag: StructureTag,
    /// Per-component decomposition, ordered by smallest label; empty for `Other`.
    pub components: Vec<ComponentShape>,
    /// Level list when the whole poset is a ladder.
    pub levels: Option<Vec<Level>>,
}

impl StructureClass {
    pub fn in_class(&self) -> bool {
        self.tag != StructureTag::Other
    }

    /// Every size-two ladder level across all components.
    pub fn pair_levels(&self) -> Vec<(usize, usize)> {
        self.components
            .iter()
            .flat_map(|c| c.ladder.iter())
            .filter_map(|l| match *l {
                Level::Pair(a, b) => Some((a, b)),
                Level::Single(_) => None,
            })
            .collect()
    }
}

/// Peels levels from the top of `mask` while the current maximal elements form
/// an antichain of size at most two lying above everything left below them.
/// Returns the peeled levels (bottom to top) and the remainder.
fn peel_ladder(p: &Poset, mask: u64) -> (Vec<Level>, u64) {
    let mut rest = mask;
    let mut levels = Vec::new();
    while rest != 0 {
        let top: Vec<usize> = mask_labels(rest)
            .into_iter()
            .filter(|&a| p.above_mask(a) & rest == 0)
            .collect();
        if top.len() > 2 {
            break;
        }
        let below_all = top.iter().fold(rest, |m, &t| m & p.below_mask(t));
        let remainder = rest & !labels_mask(&top);
        if below_all != remainder {
            break;
        }
        levels.push(match top[..] {
            [a] => Level::Single(a),
            [a, b] => Level::pair(a, b),
            _ => unreachable!(),
        });
        rest = remainder;
    }
    levels.reverse();
    (levels, rest)
}

/// Ladder levels (bottom to top) if the whole poset is an ordinal sum of
/// antichains of size one or two.
pub fn ladder_levels(p: &Poset) -> Option<Vec<Level>> {
    if p.n() == 0 {
        return None;
    }
    let (levels, rest) = peel_ladder(p, p.full_mask());
    (rest == 0).then_some(levels)
}

fn is_forest_within(p: &Poset, mask: u64) -> bool {
    mask_labels(mask).into_iter().all(|a| {
        p.upper_covers(a)
            .into_iter()
            .filter(|&b| mask & bit(b) != 0)
            .count()
            <= 1
    })
}

fn decompose(p: &Poset) -> Option<Vec<ComponentShape>> {
    let mut shapes = Vec::new();
    for comp in p.components() {
        let mask = labels_mask(&comp);
        let (ladder, forest) = peel_ladder(p, mask);
        if !is_forest_within(p, forest) {
            return None;
        }
        shapes.push(ComponentShape {
            elements: comp,
            forest: mask_labels(forest),
            ladder,
        });
    }
    Some(shapes)
}

pub fn classify(p: &Poset) -> StructureClass {
    let Some(components) = decompose(p) else {
        return StructureClass {
            tag: StructureTag::Other,
            components: Vec::new(),
            levels: None,
        };
    };
    let levels = ladder_levels(p);
    let tag = if p.is_union_of_chains() {
        StructureTag::UnionOfChains
    } else if p.is_rooted_forest() {
        StructureTag::RootedForest
    } else if levels.is_some() {
        StructureTag::Ladder
    } else {
        StructureTag::ForestLadderSum
    };
    StructureClass {
        tag,
        components,
        levels: if tag == StructureTag::Ladder {
            levels
        } else {
            None
        },
    }
}

/// Cover pairs `(a,b)` whose component is an ordinal sum `Q' ⊕ a ⊕ b ⊕ Q''`:
/// every other element of the component is strictly below `a` or strictly above `b`.
pub fn breakable_pairs(p: &Poset) -> BTreeSet<(usize, usize)> {
    p.covers()
        .iter()
        .copied()
        .filter(|&(a, b)| {
            let rest = p.component_mask(a) & !bit(a) & !bit(b);
            rest & !(p.below_mask(a) | p.above_mask(b)) == 0
        })
        .collect()
}

/// Replaces every size-two ladder level `{a,b}` (`a < b`) by the chain `a ≺ b`.
///
/// Returns the resulting rooted forest together with the covers to break,
/// bottom to top within each component and components by smallest label.
/// A rooted forest is returned unchanged with an empty list.
pub fn chain_completion(p: &Poset) -> Result<(Poset, Vec<(usize, usize)>)> {
    let class = classify(p);
    if !class.in_class() {
        return Err(Error::Class(
            "not a union of forest ⊕ ladder components".into(),
        ));
    }
    if p.is_rooted_forest() {
        return Ok((p.clone(), Vec::new()));
    }
    let breaks = class.pair_levels();
    let mut below: Vec<u64> = (1..=p.n()).map(|a| p.below_mask(a)).collect();
    for &(a, b) in &breaks {
        below[b - 1] |= bit(a);
    }
    let completed = Poset::from_below(below);
    debug_assert!(completed.is_rooted_forest());
    Ok((completed, breaks))
}
