//! Independent check of predicted spectra against the exact characteristic
//! polynomial of the transition matrix at rational sample points.
//!
//! At a point `x = a/D` with positive integers `a` and `D = Σ a_i`, the matrix
//! `A = Σ a_k G_k = D·M(x)` is integral and its eigenvalues are the predicted
//! forms evaluated at `a`. Comparing `det(μI − A)` with `∏ (μ − s(a))^m` as
//! integer polynomials is the same as comparing the characteristic polynomial
//! of `M(x)` with `∏ (λ − s(x))^m`.

use crate::error::{Error, Result};
use crate::linext::ExtensionTable;
use crate::poset::{Poset, DEFAULT_CAP};
use crate::rational::fmt_q;
use crate::spectra::EigenvalueMultiset;
use crate::stationary::ProbabilityVector;
use crate::symmat::{int_char_poly, int_poly_from_roots, LinearForm};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

pub const CERTIFICATION_NOTE: &str =
    "sampling-based: agreement at finitely many points; a mismatch is a definite refutation";

/// `x_i = a_i / Σ a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplePoint {
    pub numerators: Vec<u64>,
}

impl SamplePoint {
    pub fn denominator(&self) -> u64 {
        self.numerators.iter().sum()
    }

    pub fn x(&self) -> ProbabilityVector {
        ProbabilityVector::from_weights(&self.numerators).expect("numerators are positive")
    }

    pub fn display_x(&self) -> Vec<String> {
        self.x().x().iter().map(fmt_q).collect()
    }
}

/// `count` points with distinct numerators from `1..=3n` drawn from the seeded
/// generator, followed by the all-equal point.
pub fn sample_points(n: usize, count: usize, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<SamplePoint> = (0..count)
        .map(|_| SamplePoint {
            numerators: sample(&mut rng, 3 * n, n)
                .into_iter()
                .map(|v| v as u64 + 1)
                .collect(),
        })
        .collect();
    out.push(SamplePoint {
        numerators: vec![1; n],
    });
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    /// Index into the report's sample list.
    pub sample: usize,
    /// Power of `λ` in `det(λI − M(x))`.
    pub coefficient: usize,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub extensions: usize,
    pub samples: Vec<Vec<String>>,
    pub verdict: Verdict,
    pub first_discrepancy: Option<Discrepancy>,
    pub note: &'static str,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_discrepancy {
            None => write!(
                f,
                "PASS ({} points, {} extensions; {})",
                self.samples.len(),
                self.extensions,
                self.note
            ),
            Some(d) => write!(
                f,
                "FAIL at x = ({}): coefficient of λ^{} expected {} got {}",
                self.samples[d.sample].join(", "),
                d.coefficient,
                d.expected,
                d.got
            ),
        }
    }
}

/// `D·M(a/D)` from the promotion table: entry `(π, ∂̂_k π)` gains `a_k`.
fn integer_matrix(table: &ExtensionTable, a: &[u64]) -> Vec<Vec<i64>> {
    let n = table.len();
    let mut m = vec![vec![0i64; n]; n];
    for (s, row) in table.hat.iter().enumerate() {
        for (k0, &t) in row.iter().enumerate() {
            m[s][t] += a[k0] as i64;
        }
    }
    m
}

fn predicted_poly(spec: &EigenvalueMultiset, a: &[u64]) -> Vec<BigInt> {
    let a: Vec<i64> = a.iter().map(|&v| v as i64).collect();
    let roots: Vec<(BigInt, usize)> = spec
        .iter()
        .map(|(f, m)| (BigInt::from(f.eval_int(&a)), m))
        .collect();
    int_poly_from_roots(roots.iter().map(|(r, m)| (r, *m)))
}

/// `c_k / D^{N−k}` as the coefficient of `λ^k` for `M(x)`.
fn rescale(c: &BigInt, d: u64, n: usize, k: usize) -> String {
    let scale = num_traits::pow(BigInt::from(d), n - k);
    fmt_q(&BigRational::new(c.clone(), scale))
}

pub fn verify_spectrum(
    p: &Poset,
    predicted: &EigenvalueMultiset,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    verify_spectrum_capped(p, predicted, samples, seed, DEFAULT_CAP)
}

pub fn verify_spectrum_capped(
    p: &Poset,
    predicted: &EigenvalueMultiset,
    samples: usize,
    seed: u64,
    cap: usize,
) -> Result<VerificationReport> {
    if predicted.n_vars() != p.n() {
        return Err(Error::Dimension {
            expected: p.n(),
            got: predicted.n_vars(),
        });
    }
    let table = ExtensionTable::build_capped(p, cap)?;
    predicted.check_total(table.len())?;
    let points = sample_points(p.n(), samples, seed);
    verify_at(&table, predicted, &points)
}

/// Verifies at explicit points; each point is checked on its own thread.
pub fn verify_at(
    table: &ExtensionTable,
    predicted: &EigenvalueMultiset,
    points: &[SamplePoint],
) -> Result<VerificationReport> {
    predicted.check_total(table.len())?;
    let n = table.len();
    let mismatches: Vec<Option<Discrepancy>> = std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .iter()
            .enumerate()
            .map(|(i, pt)| {
                scope.spawn(move || {
                    let got = int_char_poly(&integer_matrix(table, &pt.numerators));
                    let expected = predicted_poly(predicted, &pt.numerators);
                    let d = pt.denominator();
                    (0..=n)
                        .find(|&k| got[k] != expected[k])
                        .map(|k| Discrepancy {
                            sample: i,
                            coefficient: k,
                            expected: rescale(&expected[k], d, n, k),
                            got: rescale(&got[k], d, n, k),
                        })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread panicked"))
            .collect()
    });
    let first_discrepancy = mismatches.into_iter().flatten().next();
    Ok(VerificationReport {
        extensions: n,
        samples: points.iter().map(|p| p.display_x()).collect(),
        verdict: if first_discrepancy.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        first_discrepancy,
        note: CERTIFICATION_NOTE,
    })
}

pub const MAX_EXPLORE_ELEMENTS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplorationReport {
    pub extensions: usize,
    /// Eigenvalues decoded at the probe point; `None` when some root is not a
    /// `{−1,0,1}` form.
    pub candidate: Option<EigenvalueMultiset>,
    /// Degree of the part of the characteristic polynomial left unexplained.
    pub unexplained_degree: usize,
    pub verification: Option<VerificationReport>,
    pub note: &'static str,
}

pub const EXPLORATION_NOTE: &str =
    "advisory: candidate forms restricted to coefficients in {-1,0,1}, confirmed only by sampling";

/// Searches for a spectrum of linear forms with coefficients in `{−1,0,1}`.
///
/// At the probe point `a_k = 3^{k−1}` every such form takes a distinct integer
/// value, so the integer roots of the characteristic polynomial name the
/// candidate forms. A complete candidate is then checked at sample points.
pub fn explore_factorization(p: &Poset, samples: usize, seed: u64) -> Result<ExplorationReport> {
    let n = p.n();
    if n > MAX_EXPLORE_ELEMENTS {
        return Err(Error::Capacity {
            what: "elements for exploration",
            cap: MAX_EXPLORE_ELEMENTS,
        });
    }
    let table = ExtensionTable::build_capped(p, DEFAULT_CAP)?;
    let probe: Vec<u64> = (0..n as u32).map(|k| 3u64.pow(k)).collect();
    let mut poly = int_char_poly(&integer_matrix(&table, &probe));
    let half = (3i64.pow(n as u32) - 1) / 2;

    let mut candidate = EigenvalueMultiset::new(n);
    for v in -half..=half {
        let r = BigInt::from(v);
        while poly.len() > 1 {
            match divide_root(&poly, &r) {
                Some(q) => {
                    poly = q;
                    candidate.insert(decode_ternary(n, v), 1);
                }
                None => break,
            }
        }
    }
    let unexplained_degree = poly.len() - 1;
    let (candidate, verification) = if unexplained_degree == 0 {
        let points = sample_points(n, samples, seed);
        let report = verify_at(&table, &candidate, &points)?;
        (Some(candidate), Some(report))
    } else {
        (None, None)
    };
    Ok(ExplorationReport {
        extensions: table.len(),
        candidate,
        unexplained_degree,
        verification,
        note: EXPLORATION_NOTE,
    })
}

/// Quotient by `(μ − r)` when it divides exactly.
fn divide_root(c: &[BigInt], r: &BigInt) -> Option<Vec<BigInt>> {
    let deg = c.len() - 1;
    let mut q = vec![BigInt::zero(); deg];
    let mut acc = BigInt::zero();
    for k in (1..=deg).rev() {
        acc = &acc * r + &c[k];
        q[k - 1] = acc.clone();
    }
    let rem = acc * r + &c[0];
    rem.is_zero().then_some(q)
}

/// The form `Σ ε_k x_k` with `Σ ε_k 3^{k−1} = v`, `ε_k ∈ {−1,0,1}`.
fn decode_ternary(n: usize, mut v: i64) -> LinearForm {
    let mut coeffs = vec![0i64; n];
    for c in coeffs.iter_mut() {
        let mut d = v.rem_euclid(3);
        if d == 2 {
            d = -1;
        }
        *c = d;
        v = (v - d) / 3;
    }
    debug_assert_eq!(v, 0);
    LinearForm::from_coeffs(coeffs)
}

/// `det(λI − M(x))` at an exact rational point, via the integer scaling.
pub fn char_poly_at(p: &Poset, x: &ProbabilityVector) -> Result<Vec<BigRational>> {
    if x.n() != p.n() {
        return Err(Error::Dimension {
            expected: p.n(),
            got: x.n(),
        });
    }
    let table = ExtensionTable::build_capped(p, DEFAULT_CAP)?;
    let lcm = x.x().iter().fold(BigInt::one(), |l, v| {
        num_integer::Integer::lcm(&l, v.denom())
    });
    let a: Vec<BigInt> = x.x().iter().map(|v| (v * &lcm).to_integer()).collect();
    let n = table.len();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (s, row) in table.hat.iter().enumerate() {
        for (k0, &t) in row.iter().enumerate() {
            m[s][t] += &a[k0];
        }
    }
    let c = crate::symmat::big_char_poly(&m);
    Ok(c.into_iter()
        .enumerate()
        .map(|(k, ck)| BigRational::new(ck, num_traits::pow(lcm.clone(), n - k)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::parse_poset;
    use crate::spectra::forest_spectrum;

    fn ladder_2x2() -> Poset {
        parse_poset(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap()
    }

    fn spec_of(n: usize, items: &[(&str, usize)]) -> EigenvalueMultiset {
        let mut s = EigenvalueMultiset::new(n);
        for &(v, m) in items {
            s.insert(LinearForm::parse(v, n).unwrap(), m);
        }
        s
    }

    #[test]
    fn ternary_decoding() {
        assert_eq!(decode_ternary(3, 0).to_string(), "0");
        assert_eq!(decode_ternary(3, 13).to_string(), "x1+x2+x3");
        assert_eq!(decode_ternary(3, -13).to_string(), "-x1-x2-x3");
        assert_eq!(decode_ternary(3, 8).to_string(), "-x1+x3");
    }

    #[test]
    fn points() {
        let pts = sample_points(4, 3, 5);
        assert_eq!(pts.len(), 4);
        for pt in &pts[..3] {
            let mut v = pt.numerators.clone();
            v.sort_unstable();
            v.dedup();
            assert_eq!(v.len(), 4);
            assert!(v.iter().all(|&a| (1..=12).contains(&a)));
        }
        assert_eq!(pts[3].numerators, vec![1; 4]);
        assert_eq!(sample_points(4, 3, 5), pts);
    }

    #[test]
    fn ladder_pass_and_fail() {
        let good = spec_of(
            4,
            &[("x1+x2+x3+x4", 1), ("0", 1), ("x3+x4", 1), ("-x1-x2", 1)],
        );
        let r = verify_spectrum(&ladder_2x2(), &good, 3, 1).unwrap();
        assert!(r.passed(), "{r}");
        let bad = spec_of(
            4,
            &[("x1+x2+x3+x4", 1), ("0", 1), ("x2+x4", 1), ("-x1-x2", 1)],
        );
        let r = verify_spectrum(&ladder_2x2(), &bad, 3, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.to_string().starts_with("FAIL"));
        let short = spec_of(4, &[("0", 1)]);
        assert!(matches!(
            verify_spectrum(&ladder_2x2(), &short, 3, 1),
            Err(Error::Multiplicity {
                expected: 4,
                got: 1
            })
        ));
    }

    #[test]
    fn exploration() {
        let r = explore_factorization(&ladder_2x2(), 2, 3).unwrap();
        let expected = spec_of(
            4,
            &[("x1+x2+x3+x4", 1), ("0", 1), ("x3+x4", 1), ("-x1-x2", 1)],
        );
        assert_eq!(r.candidate, Some(expected));
        assert!(r.verification.unwrap().passed());
        let forest = parse_poset(5, &[(1, 3), (2, 3), (3, 5), (4, 5)]).unwrap();
        let r = explore_factorization(&forest, 2, 3).unwrap();
        assert_eq!(r.candidate, Some(forest_spectrum(&forest).unwrap()));
    }

    #[test]
    fn rational_char_poly() {
        let c = char_poly_at(&Poset::antichain(2), &ProbabilityVector::uniform(2)).unwrap();
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(c, vec![q(0, 1), q(-1, 1), q(1, 1)]);
    }
}
