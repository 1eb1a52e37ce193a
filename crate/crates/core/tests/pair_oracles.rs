//! Coset counts by brute-force enumeration, against the library's canonical keys.

use heckex::bs::{BsElem, BsPair};
use heckex::pair::{gamma_index, HeckePair};
use heckex::perm::{Perm, PermPair};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Number of classes of `items` under `same`, by pairwise comparison.
fn classes<T>(items: &[T], same: impl Fn(&T, &T) -> bool) -> usize {
    let mut reps: Vec<&T> = Vec::new();
    for x in items {
        if !reps.iter().any(|r| same(r, x)) {
            reps.push(x);
        }
    }
    reps.len()
}

/// In BS(1,m) with Γ = {(j,0)}: x⁻¹y ∈ Γ iff it has k = 0 and integral t.
fn in_gamma(g: &BsElem) -> bool {
    g.k == 0 && g.t.is_integer()
}

/// L and R of `g` from Γ-translates `(j,0)·g·(j',0)`, |j|,|j'| ≤ 8.
fn bs_counts(p: &BsPair, g: &BsElem) -> (usize, usize) {
    let mut elems = Vec::new();
    for j in -8..=8 {
        for j2 in -8..=8 {
            elems.push(p.mul(&p.mul(&BsElem::int(j, 0), g), &BsElem::int(j2, 0)));
        }
    }
    let left = classes(&elems, |a, b| in_gamma(&p.mul(&p.inv(a), b)));
    let right = classes(&elems, |a, b| in_gamma(&p.mul(a, &p.inv(b))));
    (left, right)
}

fn bs_elem() -> impl Strategy<Value = BsElem> {
    (-12i64..=12, 0u32..=2, -2i64..=2).prop_map(|(a, e, k)| BsElem::new(q(a, 2i64.pow(e)), k))
}

#[test]
fn bs_coset_examples() {
    let p = BsPair::new(2).unwrap();
    assert_eq!(p.coset_key(&BsElem::int(5, 1), p.gamma()), BsElem::int(1, 1));
    assert_eq!(p.coset_key(&BsElem::int(0, 0), p.gamma()), BsElem::int(0, 0));
    let a = BsElem::int(0, 1);
    assert_eq!(p.dcoset_left_cosets(&a), vec![BsElem::int(0, 1), BsElem::int(1, 1)]);
    assert_eq!(p.left_count(&a), BigInt::from(2));
    assert_eq!(p.right_count(&a), BigInt::from(1));
    assert_eq!(p.delta(&a), q(2, 1));
    assert_eq!(p.delta(&p.inv(&a)), q(1, 2));
    assert_eq!(bs_counts(&p, &a), (2, 1));
    // With Γ^g = Γ ∩ gΓg⁻¹ the index is L(g), not 1.
    assert_eq!(gamma_index(&p, &a).unwrap(), BigInt::from(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bs_counts_match_enumeration(g in bs_elem()) {
        let p = BsPair::new(2).unwrap();
        let (l, r) = bs_counts(&p, &g);
        prop_assert_eq!(p.left_count(&g), BigInt::from(l));
        prop_assert_eq!(p.right_count(&g), BigInt::from(r));
        prop_assert_eq!(p.delta(&g), q(l as i64, r as i64));
        prop_assert_eq!(gamma_index(&p, &g).unwrap(), BigInt::from(l));
    }

    #[test]
    fn bs_delta_is_a_homomorphism(g in bs_elem(), h in bs_elem()) {
        let p = BsPair::new(3).unwrap();
        prop_assert_eq!(p.delta(&p.mul(&g, &h)), p.delta(&g) * p.delta(&h));
    }

    #[test]
    fn bs_keys_are_canonical(g in bs_elem(), j in -20i64..=20, j2 in -20i64..=20) {
        let p = BsPair::new(2).unwrap();
        let moved = p.mul(&g, &BsElem::int(j, 0));
        prop_assert_eq!(p.coset_key(&moved, p.gamma()), p.coset_key(&g, p.gamma()));
        let both = p.mul(&BsElem::int(j2, 0), &moved);
        prop_assert_eq!(p.dcoset_key(&both), p.dcoset_key(&g));
    }
}

fn perm_counts(p: &PermPair, g: &Perm) -> (usize, usize) {
    let gam: Vec<Perm> = p.elements().unwrap().iter().filter(|x| p.contains(p.gamma(), x)).cloned().collect();
    let mut dc = Vec::new();
    for a in &gam {
        for b in &gam {
            dc.push(p.mul(&p.mul(a, g), b));
        }
    }
    let left = classes(&dc, |a, b| p.contains(p.gamma(), &p.mul(&p.inv(a), b)));
    let right = classes(&dc, |a, b| p.contains(p.gamma(), &p.mul(a, &p.inv(b))));
    (left, right)
}

#[test]
fn permutation_counts_match_enumeration() {
    for p in [PermPair::s3(), PermPair::s4(), PermPair::symmetric_point_stabilizer(5)] {
        for g in p.elements().unwrap() {
            let (l, r) = perm_counts(&p, g);
            assert_eq!(p.left_count(g), BigInt::from(l));
            assert_eq!(p.right_count(g), BigInt::from(r));
            assert_eq!(gamma_index(&p, g).unwrap(), BigInt::from(l));
            assert_eq!(l, r, "finite pairs are unimodular");
        }
    }
}

#[test]
fn s3_double_cosets() {
    let p = PermPair::s3();
    let ds = p.dcosets().unwrap();
    assert_eq!(ds.len(), 2);
    let t = Perm::from_cycles(3, &[&[1, 3]]);
    assert_eq!(p.left_count(&t), BigInt::from(2));
    // Γ(1 3)Γ holds the four elements outside Γ.
    let outside = p.elements().unwrap().iter().filter(|x| !p.contains(p.gamma(), x)).count();
    assert_eq!(outside, 4);
    assert!(p.elements().unwrap().iter().filter(|x| !p.contains(p.gamma(), x)).all(|x| p.dcoset_key(x) == p.dcoset_key(&t)));
}

#[test]
fn s4_over_s3_has_two_double_cosets() {
    let p = PermPair::s4();
    let ds = p.dcosets().unwrap();
    assert_eq!(ds.len(), 2);
    let t = Perm::from_cycles(4, &[&[3, 4]]);
    assert_eq!(p.left_count(&t), BigInt::from(3));
    // Γ ∩ (3 4)Γ(3 4)⁻¹ fixes 3 and 4.
    assert_eq!(p.index(p.gamma(), p.gamma_g(&t)).unwrap(), BigInt::from(3));
}
