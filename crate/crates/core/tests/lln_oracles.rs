//! Brute-force evaluation of the LLN algebra on X × G for finite pairs with X = G.

use heckex::bs::{BsElem, BsPair};
use heckex::bundle::{Setting, TrivialLine};
use heckex::hecke::CosetVector;
use heckex::pair::{HeckePair, Rng};
use heckex::perm::PermPair;
use heckex::random::{self, Coeffs, Pools};
use heckex::scalars::RadScalar;
use proptest::prelude::*;
use rand::SeedableRng;

type S = Setting<PermPair, TrivialLine>;

fn grid(s: &S) -> Vec<(heckex::perm::Perm, heckex::perm::Perm)> {
    let els = s.pair.elements().unwrap().to_vec();
    els.iter().flat_map(|x| els.iter().map(move |g| (x.clone(), g.clone()))).collect()
}

fn check(s: &S, seed: u64) -> Result<(), TestCaseError> {
    let p = &s.pair;
    let mut rng = Rng::seed_from_u64(seed);
    let pools = Pools::finite(s).unwrap();
    let reps = p.cosets(p.gamma()).unwrap();
    let f1 = random::lln(s, &pools, 4, Coeffs::Gauss, &mut rng);
    let f2 = random::lln(s, &pools, 4, Coeffs::Gauss, &mut rng);
    let prod = s.lln_mul(&f1, &f2);
    let star = s.lln_star(&f1);
    for (x, g) in grid(s) {
        // Σ_{hΓ} f₁(x,h) f₂(xh, h⁻¹g)
        let mut want = RadScalar::zero();
        for h in &reps {
            want += s.lln_eval(&f1, &x, h) * s.lln_eval(&f2, &p.mul(&x, h), &p.mul(&p.inv(h), &g));
        }
        prop_assert_eq!(s.lln_eval(&prod, &x, &g), want);
        prop_assert_eq!(s.lln_eval(&star, &x, &g), s.lln_eval(&f1, &p.mul(&x, &g), &p.inv(&g)).conj());
    }

    // π_x(f)δ_{hΓ} = Σ_{gΓ} f(xg, g⁻¹h) δ_{gΓ}
    for x in p.elements().unwrap() {
        for h in &reps {
            let v: CosetVector<_> = [(h.clone(), RadScalar::one())].into_iter().collect();
            let got = s.pi_x_apply(x, &f1, &v);
            for g in &reps {
                let want = s.lln_eval(&f1, &p.mul(x, g), &p.mul(&p.inv(g), h));
                let have = got.get(g).cloned().unwrap_or_else(RadScalar::zero);
                prop_assert_eq!(have, want);
            }
        }
    }

    // Φ(f)(x,g) = f(gΓ)(x) on a unimodular pair, and Φ⁻¹Φ = id.
    let f = random::crossed(s, &pools, 3, 2, Coeffs::Gauss, &mut rng);
    let phi = s.phi(&f).unwrap();
    for (x, g) in grid(s) {
        let v = s.eval(&s.xp_eval(&f, &g).unwrap(), &x);
        prop_assert_eq!(s.lln_eval(&phi, &x, &g), v[0].clone());
    }
    prop_assert_eq!(s.phi_inv(&phi).unwrap(), f);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn s3_brute_force(seed in any::<u64>()) {
        check(&Setting::new(PermPair::s3(), TrivialLine), seed)?;
    }

    #[test]
    fn s4_brute_force(seed in any::<u64>()) {
        check(&Setting::new(PermPair::s4(), TrivialLine), seed)?;
    }
}

#[test]
fn phi_of_unit_is_gamma_diagonal_indicator() {
    let s = Setting::new(PermPair::s4(), TrivialLine);
    let p = &s.pair;
    let phi = s.phi(&s.xp_unit().unwrap()).unwrap();
    for (x, g) in grid(&s) {
        let want = if p.contains(p.gamma(), &g) { RadScalar::one() } else { RadScalar::zero() };
        assert_eq!(s.lln_eval(&phi, &x, &g), want);
    }
}

#[test]
fn phi_weight_on_bs_squares_to_modular_function() {
    let s = Setting::new(BsPair::new(2).unwrap(), TrivialLine);
    let x = BsElem::int(3, -1);
    for (g, d) in [(BsElem::int(0, 1), 2), (BsElem::int(5, 2), 4), (BsElem::int(0, 0), 1)] {
        let f = s.spanning(vec![RadScalar::one()], &x, &g).unwrap();
        let w = s.lln_eval(&s.phi(&f).unwrap(), &x, &g);
        assert_eq!(&w * &w, RadScalar::from_int(d));
        assert!(w.to_complex().re > 0.0);
    }
    let g = BsElem::int(0, -1);
    let f = s.spanning(vec![RadScalar::one()], &x, &g).unwrap();
    let w = s.lln_eval(&s.phi(&f).unwrap(), &x, &g);
    assert_eq!(RadScalar::from_int(2) * &w * &w, RadScalar::one());
}
