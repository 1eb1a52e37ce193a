//! Sections as equivariant functions on the arrows of the bundle, multiplied by plain groupoid
//! convolution; crossed-product elements as functions on G/Γ with values of that kind.

use std::collections::BTreeMap;

use heckex::bundle::{Bundle, Fiber, Sec, Setting, TrivialLine};
use heckex::crossed::Xp;
use heckex::eq::{self, EqBundle};
use heckex::pair::{HeckePair, Rng};
use heckex::perm::PermPair;
use heckex::random::{self, Coeffs, Pools};
use heckex::scalars::RadScalar;
use proptest::prelude::*;
use rand::SeedableRng;

type Func<A> = BTreeMap<A, Fiber>;

fn add_fiber(into: &mut Fiber, v: &Fiber) {
    if into.is_empty() {
        *into = v.clone();
    } else {
        for (a, b) in into.iter_mut().zip(v) {
            *a += b;
        }
    }
}

fn tidy<A: Ord>(f: Func<A>) -> Func<A> {
    f.into_iter().filter(|(_, v)| !v.iter().all(RadScalar::is_zero)).collect()
}

fn as_function<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, f: &Sec<P, B>) -> Func<B::Arrow> {
    let arrows = s.bundle.arrows(&s.pair).unwrap();
    tidy(arrows.into_iter().map(|z| {
        let v = s.eval(f, &z);
        (z, v)
    }).collect())
}

/// `(F*G)(z) = Σ_{xy=z} F(x)G(y)`.
fn convolve<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, f: &Func<B::Arrow>, g: &Func<B::Arrow>) -> Func<B::Arrow> {
    let (p, b) = (&s.pair, &s.bundle);
    let mut out: Func<B::Arrow> = BTreeMap::new();
    for (x, a) in f {
        for (y, c) in g {
            if let Some(z) = b.compose(p, x, y) {
                add_fiber(out.entry(z).or_default(), &b.fiber_mul(p, x, y, a, c));
            }
        }
    }
    tidy(out)
}

fn star_fn<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, f: &Func<B::Arrow>) -> Func<B::Arrow> {
    let (p, b) = (&s.pair, &s.bundle);
    tidy(f.iter().map(|(x, a)| (b.inverse(p, x), b.fiber_star(p, x, a))).collect())
}

/// `ᾱ_h(F)(z) = α_h(F(z·h))`.
fn alpha_bar<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, h: &P::Elem, f: &Func<B::Arrow>) -> Func<B::Arrow> {
    let (p, b) = (&s.pair, &s.bundle);
    let hi = p.inv(h);
    tidy(f.iter().map(|(x, a)| (b.act(p, x, &hi), b.alpha(p, h, x, a))).collect())
}

fn scale_fn<A: Ord + Clone>(f: &Func<A>, c: &RadScalar) -> Func<A> {
    tidy(f.iter().map(|(x, a)| (x.clone(), a.iter().map(|v| v * c).collect())).collect())
}

fn xp_function<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, f: &Xp<P, B>) -> BTreeMap<P::Elem, Func<B::Arrow>> {
    let p = &s.pair;
    p.cosets(p.gamma()).unwrap().into_iter().map(|g| {
        let v = as_function(s, &s.xp_eval(f, &g).unwrap());
        (g, v)
    }).collect()
}

/// `(f₁*f₂)(gΓ) = Σ_{hΓ} f₁(hΓ) ᾱ_h(f₂(h⁻¹gΓ))`.
fn xp_mul_oracle<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, f1: &Xp<P, B>, f2: &Xp<P, B>) -> BTreeMap<P::Elem, Func<B::Arrow>> {
    let p = &s.pair;
    let reps = p.cosets(p.gamma()).unwrap();
    let mut out = BTreeMap::new();
    for g in &reps {
        let mut acc: Func<B::Arrow> = BTreeMap::new();
        for h in &reps {
            let a = as_function(s, &s.xp_eval(f1, h).unwrap());
            let b = as_function(s, &s.xp_eval(f2, &p.mul(&p.inv(h), g)).unwrap());
            for (z, v) in convolve(s, &a, &alpha_bar(s, h, &b)) {
                add_fiber(acc.entry(z).or_default(), &v);
            }
        }
        out.insert(g.clone(), tidy(acc));
    }
    out
}

/// `(f*)(gΓ) = Δ(g⁻¹) ᾱ_g(f(g⁻¹Γ))*`.
fn xp_star_oracle<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, f: &Xp<P, B>) -> BTreeMap<P::Elem, Func<B::Arrow>> {
    let p = &s.pair;
    p.cosets(p.gamma()).unwrap().into_iter().map(|g| {
        let v = as_function(s, &s.xp_eval(f, &p.inv(&g)).unwrap());
        let d = RadScalar::from_rational(p.delta(&p.inv(&g)));
        let w = scale_fn(&star_fn(s, &alpha_bar(s, &g, &v)), &d);
        (g, w)
    }).collect()
}

fn check_setting<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, seed: u64) -> Result<(), TestCaseError> {
    let mut rng = Rng::seed_from_u64(seed);
    let pools = Pools::finite(s).unwrap();
    let p = &s.pair;
    // Section level, at Γ and at a deeper level.
    let mut subs = vec![p.gamma()];
    subs.extend(p.trivial_sub());
    for h in subs {
        let f = random::section(s, &pools, h, 3, Coeffs::Gauss, &mut rng);
        let g = random::section(s, &pools, h, 3, Coeffs::Gauss, &mut rng);
        let (ff, gf) = (as_function(s, &f), as_function(s, &g));
        prop_assert_eq!(as_function(s, &s.mul(&f, &g).unwrap()), convolve(s, &ff, &gf));
        prop_assert_eq!(as_function(s, &s.star(&f)), star_fn(s, &ff));
        if let Some(l) = p.trivial_sub() {
            prop_assert_eq!(as_function(s, &s.embed(&f, l).unwrap()), ff.clone());
        }
    }
    let f1 = random::crossed(s, &pools, 2, 2, Coeffs::Gauss, &mut rng);
    let f2 = random::crossed(s, &pools, 2, 2, Coeffs::Gauss, &mut rng);
    prop_assert_eq!(xp_function(s, &s.xp_mul(&f1, &f2).unwrap()), xp_mul_oracle(s, &f1, &f2));
    prop_assert_eq!(xp_function(s, &s.xp_star(&f1).unwrap()), xp_star_oracle(s, &f1));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn s3_trivial_line(seed in any::<u64>()) {
        check_setting(&Setting::new(PermPair::s3(), TrivialLine), seed)?;
    }

    #[test]
    fn s4_trivial_line(seed in any::<u64>()) {
        check_setting(&Setting::new(PermPair::s4(), TrivialLine), seed)?;
    }

    #[test]
    fn s3_group_algebra_bundle(seed in any::<u64>()) {
        let p = PermPair::s3();
        let alg = eq::group_algebra(&p).unwrap();
        check_setting(&Setting::new(p, EqBundle::new(alg)), seed)?;
    }
}

#[test]
fn hecke_multiplier_on_matrix_unit_expands_over_two_cosets() {
    use heckex::crossed::Operand;
    use heckex::perm::Perm;
    let s = Setting::new(PermPair::s3(), TrivialLine);
    let p = &s.pair;
    let e = p.identity();
    let t = s.matrix_unit(&e, &e).unwrap();
    let g = Perm::from_cycles(3, &[&[1, 3]]);
    let u = heckex::hecke::basis(p, &g);
    let prod = s.product(Operand::Hecke(&u), Operand::Elem(&t)).unwrap();
    // Γ(1 3)Γ·T_{Γ,Γ} = Σ_{hΓ ⊆ Γ(1 3)Γ} T_{hΓ,Γ}.
    let mut want = heckex::crossed::Crossed::zero();
    for h in p.dcoset_left_cosets(&g) {
        want = want.add(&s.matrix_unit(&h, &e).unwrap());
    }
    assert_eq!(p.dcoset_left_cosets(&g).len(), 2);
    assert_eq!(prod, want);
}
