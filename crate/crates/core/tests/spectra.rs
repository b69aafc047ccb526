mod common;

use common::*;
use num_rational::BigRational;
use num_traits::Zero;
use promotion::error::Error;
use promotion::poset::{chain_completion, Poset};
use promotion::spectra::{
    ak_a2_minus_edge_poset, ak_a2_minus_edge_spectrum, break_edge_spectrum, chain_union_spectrum,
    check_upset_property, forest_ladder_spectrum, forest_ladder_spectrum_ordered, forest_spectrum,
    ladder_eigensystem, EigenvalueMultiset, UpsetCondition,
};
use promotion::symmat::{evaluate, ladder_matrix, transition_matrix, LinearForm, RationalMatrix};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn form(s: &str, n: usize) -> LinearForm {
    LinearForm::parse(s, n).unwrap()
}

fn multiset(n: usize, values: &[(&str, usize)]) -> EigenvalueMultiset {
    let mut m = EigenvalueMultiset::new(n);
    for (v, k) in values {
        m.insert(form(v, n), *k);
    }
    m
}

fn ladder_values(p: &Poset) -> EigenvalueMultiset {
    let mut m = EigenvalueMultiset::new(p.n());
    for pair in ladder_eigensystem(p).unwrap() {
        m.insert(pair.value, 1);
    }
    m
}

fn chain_union(seed: u64, n: usize) -> Poset {
    let mut r = rng(seed);
    let mut left = n;
    let mut p: Option<Poset> = None;
    while left > 0 {
        let len = r.gen_range(1..=left);
        left -= len;
        let c = Poset::chain(len);
        p = Some(match p {
            None => c,
            Some(q) => q.disjoint_sum(&c),
        });
    }
    p.unwrap()
}

#[test]
fn forest_examples() {
    assert_eq!(
        forest_spectrum(&completed_forest()).unwrap(),
        multiset(
            6,
            &[
                ("x4+x5+x6", 1),
                ("x2+x4+x5+x6", 1),
                ("x1+x2+x3+x4+x5+x6", 1)
            ]
        )
    );
    assert_eq!(
        forest_spectrum(&Poset::antichain(2)).unwrap(),
        multiset(2, &[("x1+x2", 1), ("0", 1)])
    );
    assert_eq!(
        forest_spectrum(&Poset::chain(4)).unwrap(),
        multiset(4, &[("x1+x2+x3+x4", 1)])
    );
}

#[test]
fn chain_union_examples() {
    let p = Poset::chain(4).disjoint_sum(&Poset::chain(1));
    assert_eq!(
        chain_union_spectrum(&p).unwrap(),
        multiset(
            5,
            &[
                ("0", 1),
                ("x4", 1),
                ("x3+x4", 1),
                ("x2+x3+x4", 1),
                ("x1+x2+x3+x4+x5", 1)
            ]
        )
    );
    for n in 1..=6 {
        let a = Poset::antichain(n);
        assert_eq!(
            chain_union_spectrum(&a).unwrap(),
            forest_spectrum(&a).unwrap()
        );
    }
    let bad = Poset::chain(3)
        .relabel(&[1, 3, 2])
        .disjoint_sum(&Poset::chain(1));
    assert!(matches!(
        chain_union_spectrum(&bad),
        Err(Error::Labeling(_))
    ));
}

#[test]
fn ladder_examples() {
    let a2 = Poset::antichain(2);
    let pairs = ladder_eigensystem(&a2).unwrap();
    assert_eq!(pairs.len(), 2);
    assert_eq!(ladder_values(&a2), multiset(2, &[("x1+x2", 1), ("0", 1)]));
    assert_eq!(
        ladder_values(&ladder_2x2()),
        multiset(
            4,
            &[("x1+x2+x3+x4", 1), ("0", 1), ("x3+x4", 1), ("-x1-x2", 1)]
        )
    );
    assert_eq!(
        forest_ladder_spectrum(&ladder_2x2()).unwrap(),
        ladder_values(&ladder_2x2())
    );
}

#[test]
fn upset_property_checks() {
    let p = completed_forest();
    let s = forest_spectrum(&p).unwrap();
    let p1 = p.break_cover(5, 6).unwrap();
    let s1 = break_edge_spectrum(&s, &p, (5, 6)).unwrap();
    assert!(check_upset_property(&s1, &p1).is_empty());

    let bad = multiset(6, &[("x6-x4", 1)]);
    let v = check_upset_property(&bad, &p);
    assert!(v
        .iter()
        .any(|v| v.pair == (5, 6) && v.condition == UpsetCondition::B));
    assert!(matches!(
        break_edge_spectrum(&bad, &p, (5, 6)),
        Err(Error::UpsetProperty(_))
    ));

    let mut r = rng(17);
    for _ in 0..50 {
        let n = r.gen_range(1..=8);
        let f = forest(r.gen(), n, u128::MAX);
        assert!(check_upset_property(&forest_spectrum(&f).unwrap(), &f).is_empty());
    }
}

#[test]
fn edge_family() {
    assert_eq!(
        ak_a2_minus_edge_spectrum(1).unwrap(),
        multiset(3, &[("x1+x2+x3", 1), ("0", 1), ("x3", 1)])
    );
    for k in 1..=4 {
        let p = ak_a2_minus_edge_poset(k).unwrap();
        let s = ak_a2_minus_edge_spectrum(k).unwrap();
        assert_eq!(s.total() as u128, p.count_linear_extensions());
    }
}

#[test]
fn forest_plus_ladder_pipeline() {
    let s = forest_ladder_spectrum(&forest_plus_ladder()).unwrap();
    assert_eq!(s.total(), 6);
    let r = promotion::oracle::verify_spectrum(&forest_plus_ladder(), &s, 3, 11).unwrap();
    assert!(r.passed(), "{r}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn totals_and_coefficients(seed in any::<u64>(), n in 1usize..=8) {
        let p = class_poset(seed, n, 5000);
        let s = forest_ladder_spectrum(&p).unwrap();
        prop_assert_eq!(s.total() as u128, p.count_linear_extensions());
        prop_assert!(s.max_abs_coeff() <= 1);
        let f = forest(seed, n, 5000);
        let s = forest_spectrum(&f).unwrap();
        prop_assert_eq!(s.total() as u128, f.count_linear_extensions());
        prop_assert!(s.max_abs_coeff() <= 1);
        prop_assert_eq!(forest_ladder_spectrum(&f).unwrap(), s);
    }

    #[test]
    fn forest_and_chain_engines_agree(seed in any::<u64>(), n in 1usize..=8) {
        let p = chain_union(seed, n);
        prop_assert_eq!(chain_union_spectrum(&p).unwrap(), forest_spectrum(&p).unwrap());
    }

    #[test]
    fn ladder_engines_agree(seed in any::<u64>(), levels in 1usize..=4) {
        let p = random_ladder(seed, levels);
        prop_assert_eq!(ladder_values(&p), forest_ladder_spectrum(&p).unwrap());
    }

    #[test]
    fn break_order_is_irrelevant(seed in any::<u64>(), n in 2usize..=7) {
        let p = class_poset(seed, n, u128::MAX);
        let (_, breaks) = chain_completion(&p).unwrap();
        let base = forest_ladder_spectrum(&p).unwrap();
        let mut order: Vec<usize> = (0..breaks.len()).collect();
        let mut r = rng(seed ^ 0x5eed);
        for _ in 0..4 {
            order.shuffle(&mut r);
            prop_assert_eq!(&forest_ladder_spectrum_ordered(&p, &order).unwrap(), &base);
        }
    }

    #[test]
    fn ladder_eigenvectors(seed in any::<u64>(), levels in 1usize..=4) {
        let p = random_ladder(seed, levels);
        let n = p.n();
        let pairs = ladder_eigensystem(&p).unwrap();
        let basis = ladder_matrix(&p).unwrap();
        let m = transition_matrix(&p).unwrap().in_basis(basis.basis()).unwrap();
        let mut r = rng(seed);
        for _ in 0..3 {
            let x = random_x(&mut r, n);
            let mx = evaluate(&m, x.x()).unwrap();
            for pair in &pairs {
                let v: Vec<BigRational> = pair.vector.iter().map(|f| f.eval(x.x())).collect();
                let c = pair.value.eval(x.x());
                let mv = mx.right_apply(&v).unwrap();
                for (a, b) in mv.iter().zip(&v) {
                    prop_assert_eq!(a.clone(), b * &c);
                }
            }
        }
        let x = random_x(&mut r, n);
        let dim = pairs.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            for pair in &pairs {
                entries.push(pair.vector[row].eval(x.x()));
            }
        }
        let v = RationalMatrix::new(dim, entries).unwrap();
        prop_assert!(!v.char_poly().coeffs()[0].is_zero());
    }
}
