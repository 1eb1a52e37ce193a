//! Hecke convolution, involution and ρ against their defining coset sums, evaluated
//! element by element.

use std::collections::BTreeMap;

use heckex::bs::{BsElem, BsPair};
use heckex::hecke::{self, HeckeElement};
use heckex::pair::{HeckePair, Rng};
use heckex::perm::PermPair;
use heckex::random::{self, Coeffs};
use heckex::rep::Cosets;
use heckex::scalars::RadScalar;
use proptest::prelude::*;
use rand::SeedableRng;

/// `(f₁*f₂)(g) = Σ_{hΓ ∈ G/Γ} f₁(h) f₂(h⁻¹g)` over explicit coset representatives.
fn convolve_by_cosets<P: HeckePair>(p: &P, reps: &[P::Elem], a: &HeckeElement<P::Elem>, b: &HeckeElement<P::Elem>, g: &P::Elem) -> RadScalar {
    let mut s = RadScalar::zero();
    for h in reps {
        s += &(&hecke::value(p, a, h) * &hecke::value(p, b, &p.mul(&p.inv(h), g)));
    }
    s
}

fn finite_pairs() -> Vec<PermPair> {
    vec![PermPair::s3(), PermPair::s4()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convolution_matches_coset_sums(seed in any::<u64>()) {
        let mut rng = Rng::seed_from_u64(seed);
        for p in finite_pairs() {
            let ds = p.dcosets().unwrap();
            let reps = p.cosets(p.gamma()).unwrap();
            let a = random::hecke(&p, &ds, 3, Coeffs::Gauss, &mut rng);
            let b = random::hecke(&p, &ds, 3, Coeffs::Gauss, &mut rng);
            let ab = hecke::convolve(&p, &a, &b);
            for g in p.elements().unwrap() {
                prop_assert_eq!(hecke::value(&p, &ab, g), convolve_by_cosets(&p, &reps, &a, &b, g));
            }
        }
    }

    #[test]
    fn star_matches_definition(seed in any::<u64>()) {
        let mut rng = Rng::seed_from_u64(seed);
        for p in finite_pairs() {
            let ds = p.dcosets().unwrap();
            let a = random::hecke(&p, &ds, 3, Coeffs::Gauss, &mut rng);
            let s = hecke::star(&p, &a);
            for g in p.elements().unwrap() {
                let want = &RadScalar::from_rational(p.delta(&p.inv(g))) * &hecke::value(&p, &a, &p.inv(g)).conj();
                prop_assert_eq!(hecke::value(&p, &s, g), want);
            }
        }
    }

    /// `(ρ(f)δ_r)(sΓ) = Δ(s⁻¹r)^{1/2} f(s⁻¹r)`, entry by entry, against `rho_full`.
    #[test]
    fn rho_matrix_matches_formula(seed in any::<u64>()) {
        let mut rng = Rng::seed_from_u64(seed);
        for p in finite_pairs() {
            let ds = p.dcosets().unwrap();
            let cos = Cosets::of(&p).unwrap();
            let f = random::hecke(&p, &ds, 2, Coeffs::Gauss, &mut rng);
            let m = hecke::rho_full(&p, &f).unwrap();
            for (j, r) in cos.reps.iter().enumerate() {
                for (i, s) in cos.reps.iter().enumerate() {
                    let x = p.mul(&p.inv(s), r);
                    let want = &p.sqrt_delta(&x) * &hecke::value(&p, &f, &x);
                    prop_assert_eq!(m.get(i, j), want);
                }
            }
        }
    }

    /// On BS(1,2) ρ(f)δ_r is finitely supported; its support and values follow the formula.
    #[test]
    fn bs_rho_matches_formula(seed in any::<u64>()) {
        let mut rng = Rng::seed_from_u64(seed);
        let p = BsPair::new(2).unwrap();
        let ds: Vec<BsElem> = [(0, 0), (0, 1), (0, -1), (1, 1), (0, 2), (0, -2)].iter().map(|&(t, k)| p.dcoset_key(&BsElem::int(t, k))).collect();
        let f = random::hecke(&p, &ds, 3, Coeffs::Integer, &mut rng);
        let r = p.random_elem(&mut rng);
        let img = hecke::rho_apply(&p, &f, &hecke::delta_vec(&p, &r));
        // Candidate cosets sΓ = r·x⁻¹Γ for x in the left cosets of each support double coset.
        let mut want: BTreeMap<BsElem, RadScalar> = BTreeMap::new();
        for d in f.terms().keys() {
            for x in p.dcoset_left_cosets(d) {
                for j in 0..4 {
                    let xs = p.mul(&x, &BsElem::int(j, 0));
                    let s = p.coset_key(&p.mul(&r, &p.inv(&xs)), p.gamma());
                    let y = p.mul(&p.inv(&s), &r);
                    let v = &p.sqrt_delta(&y) * &hecke::value(&p, &f, &y);
                    if !v.is_zero() {
                        want.insert(s, v);
                    }
                }
            }
        }
        prop_assert_eq!(img, want);
    }
}

#[test]
fn t1_squared_in_s3() {
    let p = PermPair::s3();
    let t = hecke::basis(&p, &heckex::perm::Perm::from_cycles(3, &[&[1, 3]]));
    let want = hecke::unit(&p).scale(&RadScalar::from_int(2)).add(&t);
    assert_eq!(hecke::convolve(&p, &t, &t), want);
}

#[test]
fn bs_star_of_stable_letter() {
    let p = BsPair::new(2).unwrap();
    let t = hecke::basis(&p, &BsElem::int(0, 1));
    let want = hecke::basis(&p, &BsElem::int(0, -1)).scale(&RadScalar::from_int(2));
    assert_eq!(hecke::star(&p, &t), want);
    // Coefficient of the identity in T*T is L((0,1)) times the involution weight.
    let tt = hecke::convolve(&p, &hecke::star(&p, &t), &t);
    assert_eq!(hecke::value(&p, &tt, &p.identity()), RadScalar::from_int(2));
}

#[test]
fn rho_window_flags_escapes() {
    let p = BsPair::new(2).unwrap();
    let f = hecke::basis(&p, &BsElem::int(0, 1));
    let mut basis = Vec::new();
    for k in -2..=2 {
        for t in 0..4 {
            basis.push(p.coset_key(&BsElem::int(t, k), p.gamma()));
        }
    }
    basis.sort();
    basis.dedup();
    let r = hecke::rho_matrix(&p, &f, &basis);
    assert!(!r.escaped.is_empty());
}

#[test]
fn l1_norm_of_basis_element_is_left_count() {
    for p in finite_pairs() {
        for d in p.dcosets().unwrap() {
            let n = hecke::l1_norm(&p, &hecke::basis(&p, &d));
            assert_eq!(n.as_rational().unwrap(), num_rational::BigRational::from_integer(p.left_count(&d)));
        }
    }
}
