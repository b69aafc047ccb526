//! Symbolic spectra of promotion transition matrices.
//!
//! Four engines: rooted forests (upset lattice derangement numbers), unions of
//! chains (poset derangements), ladders (explicit eigenvectors) and the
//! edge-break recursion that reaches every `forest ⊕ ladder` component.

mod ladder;
mod multiset;

pub use ladder::{ladder_eigensystem, LadderEigenPair};
pub use multiset::EigenvalueMultiset;

use crate::error::{Error, Result};
use crate::poset::{
    bit, breakable_pairs, chain_completion, parse_poset, poset_derangements, upset_lattice, Poset,
};
use crate::symmat::LinearForm;
use std::fmt;

/// `x_S` with multiplicity `d_S` for every upset `S` of a rooted forest.
pub fn forest_spectrum(p: &Poset) -> Result<EigenvalueMultiset> {
    if !p.is_rooted_forest() {
        return Err(Error::Class("not a rooted forest".into()));
    }
    let lattice = upset_lattice(p)?;
    let mut spec = EigenvalueMultiset::new(p.n());
    for (i, &s) in lattice.nodes.iter().enumerate() {
        let d = lattice.derangement[i];
        if d > 0 {
            spec.insert(form_of_mask(p.n(), s), d as usize);
        }
    }
    Ok(spec)
}

/// `x_S` with multiplicity `𝔡_{P∖S}` for a union of chains labeled
/// consecutively within each chain.
pub fn chain_union_spectrum(p: &Poset) -> Result<EigenvalueMultiset> {
    if !p.is_union_of_chains() {
        return Err(Error::Class("not a union of chains".into()));
    }
    check_consecutive_chains(p)?;
    let lattice = upset_lattice(p)?;
    let mut spec = EigenvalueMultiset::new(p.n());
    for &s in &lattice.nodes {
        let rest = p.induced(p.full_mask() & !s);
        let d = poset_derangements(&rest)?;
        if d > 0 {
            spec.insert(form_of_mask(p.n(), s), d as usize);
        }
    }
    Ok(spec)
}

fn check_consecutive_chains(p: &Poset) -> Result<()> {
    for comp in p.components() {
        let (lo, hi) = (comp[0], comp[comp.len() - 1]);
        if hi - lo + 1 != comp.len() || (lo..hi).any(|a| !p.is_cover(a, a + 1)) {
            return Err(Error::Labeling(format!("chain {comp:?}")));
        }
    }
    Ok(())
}

fn is_consecutive_chain_union(p: &Poset) -> bool {
    p.is_union_of_chains() && check_consecutive_chains(p).is_ok()
}

fn form_of_mask(n: usize, mask: u64) -> LinearForm {
    LinearForm::sum_of(n, (1..=n).filter(|&k| mask & bit(k) != 0))
}

/// Which clause of the upset property failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum UpsetCondition {
    /// `x_a` present forces `x_b` present with the same coefficient.
    A,
    /// `x_b` present without `x_a` forbids every `x_k` with `k ≺ a`.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct UpsetViolation {
    pub value: LinearForm,
    pub pair: (usize, usize),
    pub condition: UpsetCondition,
}

impl fmt::Display for UpsetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violates condition ({}) for pair ({},{})",
            self.value,
            match self.condition {
                UpsetCondition::A => "a",
                UpsetCondition::B => "b",
            },
            self.pair.0,
            self.pair.1
        )
    }
}

fn pair_violation(value: &LinearForm, p: &Poset, (a, b): (usize, usize)) -> Option<UpsetCondition> {
    let (ca, cb) = (value.coeff(a), value.coeff(b));
    if ca != 0 && cb != ca {
        return Some(UpsetCondition::A);
    }
    if ca == 0 && cb != 0 && (1..=p.n()).any(|k| p.lt(k, a) && value.contains(k)) {
        return Some(UpsetCondition::B);
    }
    None
}

/// Every (eigenvalue, breakable pair) combination failing the upset property.
pub fn check_upset_property(spec: &EigenvalueMultiset, p: &Poset) -> Vec<UpsetViolation> {
    let pairs = breakable_pairs(p);
    let mut out = Vec::new();
    for value in spec.values() {
        for &pair in &pairs {
            if let Some(condition) = pair_violation(value, p, pair) {
                out.push(UpsetViolation {
                    value: value.clone(),
                    pair,
                    condition,
                });
            }
        }
    }
    out
}

/// Spectrum of `P ∖ {a ≺ b}` from the spectrum of `P`.
///
/// Each eigenvalue `x` of multiplicity `m` yields `x` and a partner, both with
/// multiplicity `m`. Order relations are those of `P`.
pub fn break_edge_spectrum(
    spec: &EigenvalueMultiset,
    p: &Poset,
    (a, b): (usize, usize),
) -> Result<EigenvalueMultiset> {
    if !breakable_pairs(p).contains(&(a, b)) {
        return Err(Error::Pair(a, b));
    }
    if spec.n_vars() != p.n() {
        return Err(Error::Dimension {
            expected: p.n(),
            got: spec.n_vars(),
        });
    }
    if let Some(v) = check_upset_property(spec, p).into_iter().next() {
        return Err(Error::UpsetProperty(v.to_string()));
    }
    let mut out = EigenvalueMultiset::new(p.n());
    for (value, m) in spec.iter() {
        let (ca, cb) = (value.coeff(a), value.coeff(b));
        let partner = if (ca == 0) == (cb == 0) {
            let far = value.restrict(|k| !p.le(k, b));
            let low = value.restrict(|k| p.lt(k, a));
            far - low
        } else {
            let mut f = value.clone();
            f.set_coeff(b, 0);
            f.set_coeff(a, cb);
            f
        };
        out.insert(value.clone(), m);
        out.insert(partner, m);
    }
    Ok(out)
}

/// Folds [`break_edge_spectrum`] over `breaks`, starting from `spec` of `start`.
/// Returns the final spectrum and poset.
pub fn fold_breaks(
    spec: EigenvalueMultiset,
    start: &Poset,
    breaks: &[(usize, usize)],
) -> Result<(EigenvalueMultiset, Poset)> {
    let mut spec = spec;
    let mut q = start.clone();
    for &(a, b) in breaks {
        spec = break_edge_spectrum(&spec, &q, (a, b))?;
        q = q.break_cover(a, b)?;
    }
    Ok((spec, q))
}

/// Spectrum of any poset whose components are `forest ⊕ ladder`, via chain
/// completion, a base engine and the edge-break recursion.
pub fn forest_ladder_spectrum(p: &Poset) -> Result<EigenvalueMultiset> {
    let (completion, breaks) = chain_completion(p)?;
    forest_ladder_spectrum_with(p, &completion, &breaks)
}

/// As [`forest_ladder_spectrum`], with the breaks applied in the given order.
/// `order` must be a permutation of the break list of the chain completion.
pub fn forest_ladder_spectrum_ordered(p: &Poset, order: &[usize]) -> Result<EigenvalueMultiset> {
    let (completion, breaks) = chain_completion(p)?;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..breaks.len()).collect::<Vec<_>>() {
        return Err(Error::Range(format!(
            "break order must permute 0..{}",
            breaks.len()
        )));
    }
    let permuted: Vec<(usize, usize)> = order.iter().map(|&i| breaks[i]).collect();
    forest_ladder_spectrum_with(p, &completion, &permuted)
}

fn forest_ladder_spectrum_with(
    p: &Poset,
    completion: &Poset,
    breaks: &[(usize, usize)],
) -> Result<EigenvalueMultiset> {
    let base = if is_consecutive_chain_union(completion) {
        chain_union_spectrum(completion)?
    } else {
        forest_spectrum(completion)?
    };
    let (spec, end) = fold_breaks(base, completion, breaks)?;
    debug_assert_eq!(&end, p);
    Ok(spec)
}

/// Derangement numbers `d_0..=d_m` of the symmetric groups.
pub fn derangement_numbers(m: usize) -> Vec<u128> {
    let mut d = vec![1u128, 0];
    for j in 2..=m {
        let next = (j as u128 - 1) * (d[j - 1] + d[j - 2]);
        d.push(next);
    }
    d.truncate(m + 1);
    d
}

pub const MAX_AK_A2: usize = 12;

/// `(A_k ⊕ A_2)` with the relation `k ≺ k+1` removed, on labels `1..=k+2`.
pub fn ak_a2_minus_edge_poset(k: usize) -> Result<Poset> {
    if !(1..=MAX_AK_A2).contains(&k) {
        return Err(Error::Range(format!("k = {k} outside 1..={MAX_AK_A2}")));
    }
    let mut covers = Vec::new();
    for i in 1..=k {
        if i != k {
            covers.push((i, k + 1));
        }
        covers.push((i, k + 2));
    }
    parse_poset(k + 2, &covers)
}

/// Closed-form spectrum of [`ak_a2_minus_edge_poset`].
pub fn ak_a2_minus_edge_spectrum(k: usize) -> Result<EigenvalueMultiset> {
    if !(1..=MAX_AK_A2).contains(&k) {
        return Err(Error::Range(format!("k = {k} outside 1..={MAX_AK_A2}")));
    }
    let n = k + 2;
    let d = derangement_numbers(k);
    let mut spec = EigenvalueMultiset::new(n);
    let factorial: u128 = (1..k as u128).product();
    spec.insert(LinearForm::var(n, k + 2), factorial as usize);
    for u in 0u64..1 << k {
        let size = u.count_ones() as usize;
        let xu = form_of_mask(n, u);
        let top = xu.clone() + LinearForm::sum_of(n, [k + 1, k + 2]);
        spec.insert(top, d[k - size] as usize);
        if u >> (k - 1) & 1 == 0 {
            assert!(k >= size + 1);
            spec.insert(-xu, (d[k - size] + d[k - size - 1]) as usize);
        }
    }
    Ok(spec)
}
