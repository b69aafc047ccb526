//! Stationary weights, the closed-form partition function and convergence bounds.

use crate::error::{Error, Result};
use crate::linext::{ExtensionTable, LinearExtension};
use crate::poset::{classify, Poset, StructureTag, DEFAULT_CAP};
use crate::rational::{fmt_q, serialize_q, serialize_q_vec, to_f64};
use crate::symmat::LinearForm;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Strictly positive parameters `x_1..x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityVector {
    x: Vec<BigRational>,
}

impl ProbabilityVector {
    /// Requires every entry positive and the entries to sum to 1.
    pub fn new(x: Vec<BigRational>) -> Result<ProbabilityVector> {
        check_positive(&x)?;
        let total: BigRational = x.iter().sum();
        if !total.is_one() {
            return Err(Error::Range(format!(
                "parameters sum to {}, not 1",
                fmt_q(&total)
            )));
        }
        Ok(ProbabilityVector { x })
    }

    /// Divides positive weights by their sum.
    pub fn normalized(x: Vec<BigRational>) -> Result<ProbabilityVector> {
        check_positive(&x)?;
        let total: BigRational = x.iter().sum();
        Ok(ProbabilityVector {
            x: x.into_iter().map(|v| v / &total).collect(),
        })
    }

    /// Positive integer weights, normalized.
    pub fn from_weights(a: &[u64]) -> Result<ProbabilityVector> {
        Self::normalized(
            a.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn uniform(n: usize) -> ProbabilityVector {
        let v = BigRational::new(BigInt::one(), BigInt::from(n));
        ProbabilityVector { x: vec![v; n] }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[BigRational] {
        &self.x
    }

    /// `p_x = min_i x_i`.
    pub fn min(&self) -> BigRational {
        self.x
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.x.iter().map(to_f64).collect()
    }

    fn check_len(&self, p: &Poset) -> Result<()> {
        if self.n() == p.n() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: p.n(),
                got: self.n(),
            })
        }
    }
}

fn check_positive(x: &[BigRational]) -> Result<()> {
    match x.iter().position(|v| !v.is_positive()) {
        Some(i) => Err(Error::NonPositive(i + 1)),
        None => Ok(()),
    }
}

/// `w(π) = ∏_i 1/(x_{π_1} + ⋯ + x_{π_i})`, unnormalized.
pub fn stationary_weight(pi: &LinearExtension, x: &ProbabilityVector) -> BigRational {
    let mut prefix = BigRational::zero();
    let mut denom = BigRational::one();
    for &k in pi.word() {
        prefix += &x.x[k - 1];
        denom *= &prefix;
    }
    denom.recip()
}

/// `Σ_{s ⪯ i} x_s`-style forms making up the closed-form partition function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionFactors {
    /// `x_{⪯i}` for `i = 1..n`.
    pub downsets: Vec<LinearForm>,
    /// `(x_{⪯a ∪ b}, x_{⪯a} + x_{⪯b})` for every two-element ladder level `{a,b}`.
    pub pair_ratios: Vec<(LinearForm, LinearForm)>,
}

impl PartitionFactors {
    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        let mut z = BigRational::one();
        for f in &self.downsets {
            z *= f.eval(x);
        }
        for (num, den) in &self.pair_ratios {
            z *= num.eval(x) / den.eval(x);
        }
        z
    }
}

fn downset_form(p: &Poset, i: usize) -> LinearForm {
    LinearForm::sum_of(p.n(), (1..=p.n()).filter(|&s| p.le(s, i)))
}

pub fn partition_factors(p: &Poset) -> Result<PartitionFactors> {
    let class = classify(p);
    if !class.in_class() {
        return Err(Error::Class(
            "partition function needs forest ⊕ ladder components".into(),
        ));
    }
    let n = p.n();
    let downsets = (1..=n).map(|i| downset_form(p, i)).collect();
    let pair_ratios = class
        .pair_levels()
        .into_iter()
        .map(|(a, b)| {
            let union = LinearForm::sum_of(n, (1..=n).filter(|&s| p.le(s, a) || p.le(s, b)));
            (union, downset_form(p, a) + downset_form(p, b))
        })
        .collect();
    Ok(PartitionFactors {
        downsets,
        pair_ratios,
    })
}

/// `Z_P` with `Σ_π w(π) Z_P = 1`, from the product formula.
pub fn partition_function(p: &Poset, x: &ProbabilityVector) -> Result<BigRational> {
    x.check_len(p)?;
    Ok(partition_factors(p)?.eval(&x.x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StationaryReport {
    pub extensions: Vec<LinearExtension>,
    /// `w′(π) = w(π) Z_P`, aligned with `extensions`.
    #[serde(serialize_with = "serialize_q_vec")]
    pub weights: Vec<BigRational>,
    #[serde(serialize_with = "serialize_q")]
    pub partition: BigRational,
    /// Whether `partition` came from the product formula rather than `1/Σ w`.
    pub closed_form: bool,
}

impl StationaryReport {
    pub fn total(&self) -> BigRational {
        self.weights.iter().sum()
    }
}

pub fn stationary_distribution(p: &Poset, x: &ProbabilityVector) -> Result<StationaryReport> {
    stationary_distribution_capped(p, x, DEFAULT_CAP)
}

pub fn stationary_distribution_capped(
    p: &Poset,
    x: &ProbabilityVector,
    cap: usize,
) -> Result<StationaryReport> {
    x.check_len(p)?;
    let extensions = crate::linext::linear_extensions_capped(p, cap)?;
    Ok(report_for(p, extensions, x))
}

fn report_for(
    p: &Poset,
    extensions: Vec<LinearExtension>,
    x: &ProbabilityVector,
) -> StationaryReport {
    let raw: Vec<BigRational> = extensions.iter().map(|e| stationary_weight(e, x)).collect();
    let (partition, closed_form) = match partition_factors(p) {
        Ok(f) => (f.eval(&x.x), true),
        Err(_) => (raw.iter().sum::<BigRational>().recip(), false),
    };
    let weights = raw.into_iter().map(|w| w * &partition).collect();
    StationaryReport {
        extensions,
        weights,
        partition,
        closed_form,
    }
}

/// `w′ · M^P(x)` computed through the promotion table, one term per edge.
pub fn left_apply_transition(
    table: &ExtensionTable,
    w: &[BigRational],
    x: &ProbabilityVector,
) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); table.len()];
    for (s, row) in table.hat.iter().enumerate() {
        if w[s].is_zero() {
            continue;
        }
        for (k0, &t) in row.iter().enumerate() {
            out[t] += &w[s] * &x.x[k0];
        }
    }
    out
}

/// Exact check of `w′ M^P(x) = w′`.
pub fn is_stationary(
    table: &ExtensionTable,
    report: &StationaryReport,
    x: &ProbabilityVector,
) -> bool {
    report.extensions == table.extensions
        && left_apply_transition(table, &report.weights, x) == report.weights
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceBound {
    pub value: f64,
    /// `k ≥ (n−1)/p_x`; outside the range the value is the vacuous 1.
    pub in_range: bool,
}

/// `exp(−(k p_x − (n−1))² / (2 k p_x))` for `k ≥ (n−1)/p_x`.
pub fn convergence_bound(n: usize, p_x: &BigRational, k: u64) -> ConvergenceBound {
    let kp = p_x * BigRational::from_integer(BigInt::from(k));
    let m = BigRational::from_integer(BigInt::from(n.saturating_sub(1)));
    if kp < m || kp.is_zero() {
        return ConvergenceBound {
            value: 1.0,
            in_range: false,
        };
    }
    let gap = &kp - &m;
    let exponent = &gap * &gap / (BigRational::from_integer(2.into()) * &kp);
    ConvergenceBound {
        value: (-to_f64(&exponent)).exp(),
        in_range: true,
    }
}

/// `2(n + c − 1)/p_x`.
pub fn mixing_time_bound(n: usize, p_x: &BigRational, c: f64) -> f64 {
    2.0 * (n as f64 + c - 1.0) / to_f64(p_x)
}

/// The bounds hold for `F ⊕ L` with one component; multi-component rooted
/// forests are also accepted.
pub fn check_bound_applies(p: &Poset) -> Result<()> {
    let class = classify(p);
    if class.tag == StructureTag::Other {
        return Err(Error::Class("outside the forest ⊕ ladder class".into()));
    }
    if p.is_rooted_forest() || class.components.len() <= 1 {
        Ok(())
    } else {
        Err(Error::Class(
            "convergence bound needs a single forest ⊕ ladder component".into(),
        ))
    }
}

pub fn poset_convergence_bound(
    p: &Poset,
    x: &ProbabilityVector,
    k: u64,
) -> Result<ConvergenceBound> {
    check_bound_applies(p)?;
    x.check_len(p)?;
    Ok(convergence_bound(p.n(), &x.min(), k))
}

pub fn poset_mixing_time_bound(p: &Poset, x: &ProbabilityVector, c: f64) -> Result<f64> {
    check_bound_applies(p)?;
    x.check_len(p)?;
    if c.is_nan() || c <= 0.0 {
        return Err(Error::Range(format!("c = {c} must be positive")));
    }
    Ok(mixing_time_bound(p.n(), &x.min(), c))
}
