//! Linear extensions and the promotion operators acting on them.

use crate::error::{Error, Result};
use crate::poset::{bit, classify, Level, Poset, StructureClass, DEFAULT_CAP};
use serde::{Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;

/// A word `π₁…π_n` listing every label once, compatible with the order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearExtension(Vec<usize>);

impl LinearExtension {
    pub fn new(p: &Poset, word: Vec<usize>) -> Result<LinearExtension> {
        if word.len() != p.n() {
            return Err(Error::Dimension {
                expected: p.n(),
                got: word.len(),
            });
        }
        let mut placed = 0u64;
        for &l in &word {
            if l == 0 || l > p.n() || placed & bit(l) != 0 {
                return Err(Error::Range(format!(
                    "{word:?} is not a permutation of 1..={}",
                    p.n()
                )));
            }
            if p.below_mask(l) & !placed != 0 {
                return Err(Error::Range(format!(
                    "{word:?} places {l} before an element below it"
                )));
            }
            placed |= bit(l);
        }
        Ok(LinearExtension(word))
    }

    /// Parses `"312465"` (one digit per letter) or `"3 1 2 4 6 5"`.
    pub fn parse(p: &Poset, s: &str) -> Result<LinearExtension> {
        let s = s.trim();
        let word: Vec<usize> = if s.contains(char::is_whitespace) || s.contains(',') {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad letter `{t}`")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad letter `{c}`")))
                })
                .collect::<Result<_>>()?
        };
        LinearExtension::new(p, word)
    }

    pub(crate) fn from_vec(word: Vec<usize>) -> LinearExtension {
        LinearExtension(word)
    }

    pub fn word(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based position of label `k`.
    pub fn position_of(&self, k: usize) -> Option<usize> {
        self.0.iter().position(|&l| l == k).map(|i| i + 1)
    }

    /// Letter at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }
}

impl fmt::Display for LinearExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.len() > 9 { " " } else { "" };
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

impl Serialize for LinearExtension {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All linear extensions in lexicographic order, capped at [`DEFAULT_CAP`].
pub fn linear_extensions(p: &Poset) -> Result<Vec<LinearExtension>> {
    linear_extensions_capped(p, DEFAULT_CAP)
}

pub fn linear_extensions_capped(p: &Poset, cap: usize) -> Result<Vec<LinearExtension>> {
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(p.n());
    extend(p, 0, &mut word, &mut out, cap)?;
    Ok(out)
}

fn extend(
    p: &Poset,
    placed: u64,
    word: &mut Vec<usize>,
    out: &mut Vec<LinearExtension>,
    cap: usize,
) -> Result<()> {
    if word.len() == p.n() {
        if out.len() == cap {
            return Err(Error::Capacity {
                what: "number of linear extensions",
                cap,
            });
        }
        out.push(LinearExtension(word.clone()));
        return Ok(());
    }
    for a in 1..=p.n() {
        if placed & bit(a) == 0 && p.below_mask(a) & !placed == 0 {
            word.push(a);
            extend(p, placed | bit(a), word, out, cap)?;
            word.pop();
        }
    }
    Ok(())
}

fn check_position(i: usize, max: usize) -> Result<()> {
    if i == 0 || i > max {
        Err(Error::Position { pos: i, max })
    } else {
        Ok(())
    }
}

/// `τ_i`: swaps positions `i` and `i+1` when the letters are incomparable.
pub fn tau(p: &Poset, pi: &LinearExtension, i: usize) -> Result<LinearExtension> {
    check_position(i, p.n().saturating_sub(1))?;
    let mut w = pi.0.clone();
    tau_in_place(p, &mut w, i);
    Ok(LinearExtension(w))
}

fn tau_in_place(p: &Poset, w: &mut [usize], i: usize) {
    if !p.comparable(w[i - 1], w[i]) {
        w.swap(i - 1, i);
    }
}

/// `∂_i = τ_{n-1} ⋯ τ_{i+1} τ_i`, with `τ_i` applied first.
pub fn promotion(p: &Poset, pi: &LinearExtension, i: usize) -> Result<LinearExtension> {
    check_position(i, p.n())?;
    let mut w = pi.0.clone();
    for j in i..p.n() {
        tau_in_place(p, &mut w, j);
    }
    Ok(LinearExtension(w))
}

/// `∂̂_k`: promotion at the position currently holding `k`.
pub fn hat_promotion(p: &Poset, pi: &LinearExtension, k: usize) -> Result<LinearExtension> {
    let i = pi
        .position_of(k)
        .ok_or_else(|| Error::Range(format!("label {k} not in 1..={}", p.n())))?;
    promotion(p, pi, i)
}

/// The closed-form description of `∂̂_k` for forest ⊕ ladder components.
pub struct DirectPromoter<'a> {
    poset: &'a Poset,
    class: StructureClass,
    /// `component_of[label]` indexes `class.components`.
    component_of: Vec<usize>,
}

impl<'a> DirectPromoter<'a> {
    pub fn new(p: &'a Poset) -> Result<DirectPromoter<'a>> {
        let class = classify(p);
        if !class.in_class() {
            return Err(Error::Class(
                "not a union of forest ⊕ ladder components".into(),
            ));
        }
        let mut component_of = vec![0; p.n() + 1];
        for (c, shape) in class.components.iter().enumerate() {
            for &l in &shape.elements {
                component_of[l] = c;
            }
        }
        Ok(DirectPromoter {
            poset: p,
            class,
            component_of,
        })
    }

    /// Move `k` to the end, then refill the slots of the letters `⪰ k` going up
    /// from `k`, writing each two-element level in the opposite order to `π`.
    pub fn apply(&self, pi: &LinearExtension, k: usize) -> Result<LinearExtension> {
        let p = self.poset;
        let pos = pi
            .position_of(k)
            .ok_or_else(|| Error::Range(format!("label {k} not in 1..={}", p.n())))?;
        let shape = &self.class.components[self.component_of[k]];

        let mut seq = Vec::new();
        let first_level = match shape.ladder.iter().position(|l| l.contains(k)) {
            Some(t) => {
                seq.push(k);
                t + 1
            }
            None => {
                let mut chain: Vec<usize> = shape
                    .forest
                    .iter()
                    .copied()
                    .filter(|&j| p.le(k, j))
                    .collect();
                chain.sort_by_key(|&j| p.below_mask(j).count_ones());
                seq.extend(chain);
                0
            }
        };
        for level in &shape.ladder[first_level..] {
            match *level {
                Level::Single(a) => seq.push(a),
                Level::Pair(a, b) => {
                    if pi.position_of(a) < pi.position_of(b) {
                        seq.extend([b, a]);
                    } else {
                        seq.extend([a, b]);
                    }
                }
            }
        }

        let mut w: Vec<usize> = pi.0.clone();
        w.remove(pos - 1);
        w.push(k);
        let mut next = seq.into_iter();
        for slot in w.iter_mut() {
            if p.le(k, *slot) {
                *slot = next.next().expect("slot count matches the upset of k");
            }
        }
        Ok(LinearExtension(w))
    }
}

pub fn hat_promotion_direct(p: &Poset, pi: &LinearExtension, k: usize) -> Result<LinearExtension> {
    DirectPromoter::new(p)?.apply(pi, k)
}

/// Extensions in lexicographic order with their index and the `∂̂_k` table.
#[derive(Clone, Debug)]
pub struct ExtensionTable {
    pub extensions: Vec<LinearExtension>,
    pub index: HashMap<LinearExtension, usize>,
    /// `hat[s][k-1]` is the index of `∂̂_k` applied to extension `s`.
    pub hat: Vec<Vec<usize>>,
}

impl ExtensionTable {
    pub fn build(p: &Poset) -> Result<ExtensionTable> {
        Self::build_capped(p, DEFAULT_CAP)
    }

    pub fn build_capped(p: &Poset, cap: usize) -> Result<ExtensionTable> {
        let extensions = linear_extensions_capped(p, cap)?;
        let index: HashMap<LinearExtension, usize> = extensions
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let hat = extensions
            .iter()
            .map(|e| {
                (1..=p.n())
                    .map(|k| index[&hat_promotion(p, e, k).expect("k is a letter of e")])
                    .collect()
            })
            .collect();
        Ok(ExtensionTable {
            extensions,
            index,
            hat,
        })
    }

    pub fn len(&self) -> usize {
        self.extensions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extensions.is_empty()
    }
}

/// One edge `(source, target, label)` per extension and position, indices
/// into the lexicographic list of extensions.
pub fn promotion_graph(p: &Poset) -> Result<Vec<(usize, usize, usize)>> {
    let table = ExtensionTable::build(p)?;
    Ok(graph_from_table(&table))
}

pub fn graph_from_table(table: &ExtensionTable) -> Vec<(usize, usize, usize)> {
    let mut edges = Vec::new();
    for (s, e) in table.extensions.iter().enumerate() {
        for &k in e.word() {
            edges.push((s, table.hat[s][k - 1], k));
        }
    }
    edges
}
