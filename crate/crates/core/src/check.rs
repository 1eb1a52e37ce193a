//! Property suites over concrete instances, and the JSON report they feed.

use std::fmt::Display;
use std::sync::atomic::{AtomicU64, Ordering};

use num_rational::BigRational;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::bundle::{Bundle, Sec, Setting};
use crate::crossed::{Operand, Xp};
use crate::eq::{self, EqBundle, Quotient};
use crate::hecke::{self, Norm};
use crate::matrix::Matrix;
use crate::pair::{gamma_index, HeckePair, Rng};
use crate::random::{self, Coeffs, Pools};
use crate::rep::{self, CovariantPair, Cosets, FiniteRep, PiK};
use crate::scalars::RadScalar;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Tolerance for the numeric (floating-point) comparisons. Exact checks ignore it.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

pub fn set_tolerance(t: f64) {
    TOLERANCE_BITS.store(t.to_bits(), Ordering::Relaxed);
}

/// One checked property: how many instances were tried and the first failure, if any.
#[derive(Clone, Debug)]
pub struct Property {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub detail: Option<String>,
    pub counterexample: Option<Value>,
}

impl Property {
    pub fn new(name: &str) -> Self {
        Property { name: name.into(), checked: 0, failed: 0, detail: None, counterexample: None }
    }

    pub fn check(&mut self, ok: bool, ce: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(ce());
            }
        }
    }

    /// Unwraps `r`, recording an error as a failed instance.
    pub fn ok<T, E: Display>(&mut self, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checked += 1;
                self.failed += 1;
                self.detail.get_or_insert_with(|| e.to_string());
                None
            }
        }
    }

    pub fn note(&mut self, d: String) {
        self.detail = Some(d);
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "passed": self.passed(),
            "checked": self.checked,
            "failed": self.failed,
        });
        if let Some(d) = &self.detail {
            v["detail"] = json!(d);
        }
        if let Some(c) = &self.counterexample {
            v["counterexample"] = c.clone();
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct Suite {
    pub name: String,
    pub instance: String,
    pub properties: Vec<Property>,
}

impl Suite {
    pub fn new(name: &str, instance: String, properties: Vec<Property>) -> Self {
        Suite { name: name.into(), instance, properties }
    }

    pub fn passed(&self) -> bool {
        self.properties.iter().all(Property::passed)
    }

    pub fn failures(&self) -> Vec<&Property> {
        self.properties.iter().filter(|p| !p.passed()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "instance": self.instance,
            "passed": self.passed(),
            "properties": self.properties.iter().map(Property::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub seed: u64,
    pub suites: Vec<Suite>,
}

impl Report {
    pub fn new(seed: u64, mut suites: Vec<Suite>) -> Self {
        suites.sort_by(|a, b| (&a.name, &a.instance).cmp(&(&b.name, &b.instance)));
        Report { seed, suites }
    }

    pub fn passed(&self) -> bool {
        self.suites.iter().all(Suite::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": "1",
            "seed": self.seed,
            "passed": self.passed(),
            "suites": self.suites.iter().map(Suite::to_json).collect::<Vec<_>>(),
        })
    }
}

/// A per-suite RNG so results do not depend on scheduling.
pub fn suite_rng(seed: u64, stream: u64) -> Rng {
    let mut r = Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn q_le(a: &Norm, b: &Norm) -> bool {
    match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => x <= y,
        _ => a.value <= b.value + tolerance() * (1.0 + b.value),
    }
}

fn n_eq(a: &Norm, b: &Norm) -> bool {
    match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => x == y,
        _ => (a.value - b.value).abs() <= tolerance() * (1.0 + b.value),
    }
}

fn norm_product(a: &Norm, b: &Norm) -> Norm {
    Norm {
        exact: match (&a.exact, &b.exact) {
            (Some(x), Some(y)) => Some(x * y),
            _ => None,
        },
        value: a.value * b.value,
    }
}

// ---------------------------------------------------------------------------------------------
// Hecke pairs and the Hecke algebra

pub fn pair_suite<P: HeckePair>(p: &P, samples: usize, rng: &mut Rng) -> Suite {
    let mut mult = Property::new("delta-multiplicative");
    let mut lr = Property::new("left-count-equals-right-count-of-inverse");
    let mut inv = Property::new("delta-inverse-and-gamma");
    for _ in 0..samples {
        let g = p.random_elem(rng);
        let h = p.random_elem(rng);
        let ce = || json!({"g": p.elem_to_json(&g), "h": p.elem_to_json(&h)});
        mult.check(p.delta(&p.mul(&g, &h)) == p.delta(&g) * p.delta(&h), ce);
        // R(g⁻¹) counted as right cosets: [Γ : Γ ∩ gΓg⁻¹].
        if let Some(r) = lr.ok(gamma_index(p, &g)) {
            lr.check(p.left_count(&g) == r, || json!({"g": p.elem_to_json(&g)}));
        }
        let gam = p.random_in(p.gamma(), rng);
        let one = BigRational::from_integer(1.into());
        inv.check(p.delta(&p.inv(&g)) == p.delta(&g).recip() && p.delta(&gam) == one, || {
            json!({"g": p.elem_to_json(&g), "gamma": p.elem_to_json(&gam)})
        });
    }
    Suite::new("pair", p.describe(), vec![mult, lr, inv])
}

pub fn hecke_suite<P: HeckePair>(p: &P, dcosets: &[P::Elem], samples: usize, rng: &mut Rng) -> Suite {
    let mut assoc = Property::new("associativity");
    let mut anti = Property::new("star-anti-multiplicative");
    let mut invol = Property::new("star-involutive");
    let mut clin = Property::new("star-conjugate-linear");
    let mut unit = Property::new("unit");
    let mut rho_hom = Property::new("rho-star-homomorphism");
    let mut rho_faith = Property::new("rho-faithful");
    let one = hecke::unit(p);
    for _ in 0..samples {
        let f1 = random::hecke(p, dcosets, 3, Coeffs::Gauss, rng);
        let f2 = random::hecke(p, dcosets, 3, Coeffs::Gauss, rng);
        let f3 = random::hecke(p, dcosets, 3, Coeffs::Gauss, rng);
        let ce = || json!({"a": hecke::to_json(p, &f1), "b": hecke::to_json(p, &f2), "c": hecke::to_json(p, &f3)});
        let f12 = hecke::convolve(p, &f1, &f2);
        assoc.check(hecke::convolve(p, &f12, &f3) == hecke::convolve(p, &f1, &hecke::convolve(p, &f2, &f3)), ce);
        anti.check(
            hecke::star(p, &f12) == hecke::convolve(p, &hecke::star(p, &f2), &hecke::star(p, &f1)),
            ce,
        );
        invol.check(hecke::star(p, &hecke::star(p, &f1)) == f1, ce);
        let c = random::scalar(Coeffs::Gauss, rng);
        clin.check(hecke::star(p, &f1.scale(&c)) == hecke::star(p, &f1).scale(&c.conj()), ce);
        unit.check(hecke::convolve(p, &one, &f1) == f1 && hecke::convolve(p, &f1, &one) == f1, ce);

        // ρ on coset vectors, valid for infinite G/Γ as well.
        let r = p.random_elem(rng);
        let dr = hecke::delta_vec(p, &r);
        let lhs = hecke::rho_apply(p, &f12, &dr);
        let rhs = hecke::rho_apply(p, &f1, &hecke::rho_apply(p, &f2, &dr));
        let mut adj_ok = true;
        let img = hecke::rho_apply(p, &f1, &dr);
        let f1s = hecke::star(p, &f1);
        for (b, v) in &img {
            let back = hecke::rho_apply(p, &f1s, &hecke::delta_vec(p, b));
            let w = back.get(&p.coset_key(&r, p.gamma())).cloned().unwrap_or_else(RadScalar::zero);
            adj_ok &= *v == w.conj();
        }
        rho_hom.check(lhs == rhs && adj_ok, || json!({"a": hecke::to_json(p, &f1), "b": hecke::to_json(p, &f2), "coset": p.elem_to_json(&r)}));
        let rec = hecke::reconstruct_from_rho(p, &hecke::rho_apply(p, &f1, &hecke::delta_vec(p, &p.identity())));
        rho_faith.check(rec == f1, || json!({"a": hecke::to_json(p, &f1)}));
    }
    // On finite backends ρ is checked on the full basis as matrices.
    if let Some(ds) = p.dcosets() {
        let mats: Vec<Matrix> = ds.iter().filter_map(|d| rho_hom.ok(hecke::rho_full(p, &hecke::basis(p, d)))).collect();
        for (i, a) in ds.iter().enumerate() {
            let ta = hecke::basis(p, a);
            let sa = rho_hom.ok(hecke::rho_full(p, &hecke::star(p, &ta)));
            rho_hom.check(sa.as_ref() == Some(&mats[i].adjoint()), || json!({"a": p.elem_to_json(a)}));
            for (j, b) in ds.iter().enumerate() {
                let prod = rho_hom.ok(hecke::rho_full(p, &hecke::convolve(p, &ta, &hecke::basis(p, b))));
                rho_hom.check(prod == Some(mats[i].mul(&mats[j])), || json!({"a": p.elem_to_json(a), "b": p.elem_to_json(b)}));
            }
        }
        let n = mats.first().map_or(0, |m| m.rows() * m.cols());
        let rank = Matrix::from_rows(n, &mats.iter().map(Matrix::flatten).collect::<Vec<_>>()).rank(tolerance());
        rho_faith.check(rank == ds.len(), || json!({"rank": rank, "dcosets": ds.len()}));
    }
    Suite::new("hecke", p.describe(), vec![assoc, anti, invol, clin, unit, rho_hom, rho_faith])
}

// ---------------------------------------------------------------------------------------------
// Sections and embeddings

/// Embedding properties for a chain `L ⊆ K ⊆ H`.
pub fn embedding_suite<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    (h, k, l): (P::Sub, P::Sub, P::Sub),
    samples: usize,
    rng: &mut Rng,
) -> Suite {
    let mut hom = Property::new("embedding-multiplicative");
    let mut star = Property::new("embedding-star");
    let mut inj = Property::new("embedding-injective");
    let mut tri = Property::new("embedding-transitive");
    let mut mult = Property::new("multiplier-compatibility");
    let mut dl = Property::new("direct-limit-product");
    for _ in 0..samples {
        let f = random::nonzero_section(s, pools, h, 3, Coeffs::Gauss, rng);
        let g = random::section(s, pools, h, 3, Coeffs::Gauss, rng);
        let gk = random::section(s, pools, k, 3, Coeffs::Gauss, rng);
        let conj = s.pair.random_elem(rng);
        let ce = || json!({"f": s.section_to_json(&f), "g": s.section_to_json(&g), "gk": s.section_to_json(&gk)});
        let step = || -> Result<[bool; 6], crate::bundle::BundleError> {
            let ef = s.embed(&f, k)?;
            let eg = s.embed(&g, k)?;
            let hom_ok = s.embed(&s.mul(&f, &g)?, k)? == s.mul(&ef, &eg)?;
            let star_ok = s.embed(&s.star(&f), k)? == s.star(&ef);
            let inj_ok = !ef.is_zero() && s.descend(&ef, h)? == f;
            let tri_ok = s.embed(&ef, l)? == s.embed(&f, l)?;
            let mult_ok = s.mul(&f, &gk)? == s.mul(&ef, &gk)?;
            // D(𝒜) product of f over H and a conjugated section against the product over L.
            let c = s.act(&conj, &gk);
            let d = s.dl_mul(&f, &c)?;
            let bottom = s.pair.meet(l, c.sub);
            let dl_ok = s.embed(&d, bottom)? == s.mul(&s.embed(&f, bottom)?, &s.embed(&c, bottom)?)?;
            Ok([hom_ok, star_ok, inj_ok, tri_ok, mult_ok, dl_ok])
        };
        if let Some(r) = hom.ok(step()) {
            for (prop, ok) in [&mut hom, &mut star, &mut inj, &mut tri, &mut mult, &mut dl].into_iter().zip(r) {
                prop.check(ok, ce);
            }
        }
    }
    Suite::new("embeddings", describe(s), vec![hom, star, inj, tri, mult, dl])
}

/// `‖π(f)‖ ≤ ‖π^K(f)‖`, π^K as a *-representation, and the aggregated-vector identity.
pub fn pik_suite<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    (h, k): (P::Sub, P::Sub),
    samples: usize,
    rng: &mut Rng,
) -> Suite {
    let mut ineq = Property::new("norm-inequality");
    let mut hom = Property::new("pi-K-star-representation");
    let mut lemma = Property::new("aggregated-vector-identity");
    let Some(pi) = ineq.ok(FiniteRep::regular(s, h)) else {
        return Suite::new("pi-K", describe(s), vec![ineq]);
    };
    let Some(pik) = ineq.ok(PiK::new(s, &pi, h, k)) else {
        return Suite::new("pi-K", describe(s), vec![ineq]);
    };
    let mut slack = f64::INFINITY;
    for _ in 0..samples {
        let f = random::section(s, pools, h, 3, Coeffs::Gauss, rng);
        let (Some(a), Some(b)) = (ineq.ok(pi.apply(s, &f)), ineq.ok(pik.apply(s, &f))) else { continue };
        let (na, nb) = (a.op_norm(), b.op_norm());
        slack = slack.min(nb - na);
        ineq.check(na <= nb + tolerance(), || json!({"f": s.section_to_json(&f), "norm_pi": na, "norm_piK": nb}));

        let x = random::section(s, pools, k, 2, Coeffs::Gauss, rng);
        let y = random::section(s, pools, k, 2, Coeffs::Gauss, rng);
        let r = (|| -> Result<bool, crate::bundle::BundleError> {
            let px = pik.apply(s, &x)?;
            let prod = pik.apply(s, &s.mul(&x, &y)?)? == px.mul(&pik.apply(s, &y)?);
            let adj = pik.apply(s, &s.star(&x))? == px.adjoint();
            Ok(prod && adj)
        })();
        if let Some(ok) = hom.ok(r) {
            hom.check(ok, || json!({"x": s.section_to_json(&x), "y": s.section_to_json(&y)}));
        }
    }
    ineq.note(format!("smallest slack ‖π^K(f)‖ − ‖π(f)‖ = {slack:.3e}"));
    if let Some(reps) = s.orbit_reps(h) {
        for x in reps {
            let a = random::fiber(s.bundle.dim(&s.pair, &x), Coeffs::Gauss, rng);
            if let Some(ok) = lemma.ok(pik.check_lemma(s, &a, &x)) {
                lemma.check(ok, || json!({"arrow": s.bundle.arrow_to_json(&s.pair, &x)}));
            }
        }
    }
    Suite::new("pi-K", describe(s), vec![ineq, hom, lemma])
}

fn describe<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>) -> String {
    format!("{}; {}", s.pair.describe(), s.bundle.describe())
}

// ---------------------------------------------------------------------------------------------
// Crossed product

pub fn crossed_suite<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    triples: usize,
    singles: usize,
    rng: &mut Rng,
) -> Suite {
    let p = &s.pair;
    let mut assoc = Property::new("associativity");
    let mut anti = Property::new("star-anti-multiplicative");
    let mut invol = Property::new("star-involutive");
    let mut unit = Property::new("unit");
    let mut idem = Property::new("expectation-idempotent");
    let mut pos = Property::new("expectation-positive");
    let mut bimod = Property::new("expectation-bimodule");
    let mut faith = Property::new("expectation-faithful");
    let mut coeff = Property::new("coefficients-determine-element");
    let mut span = Property::new("spanning-decomposition");
    let mut mults = Property::new("hecke-multipliers");
    let xj = |f: &Xp<P, B>| s.xp_to_json(f);
    let one = if p.is_finite() { s.xp_unit().ok() } else { None };

    for _ in 0..triples {
        let f1 = random::crossed(s, pools, 2, 2, Coeffs::Gauss, rng);
        let f2 = random::crossed(s, pools, 2, 2, Coeffs::Gauss, rng);
        let f3 = random::crossed(s, pools, 2, 2, Coeffs::Gauss, rng);
        let ce = || json!({"a": xj(&f1), "b": xj(&f2), "c": xj(&f3)});
        let r = (|| -> Result<[bool; 3], crate::bundle::BundleError> {
            let f12 = s.xp_mul(&f1, &f2)?;
            let a = s.xp_mul(&f12, &f3)? == s.xp_mul(&f1, &s.xp_mul(&f2, &f3)?)?;
            let b = s.xp_star(&f12)? == s.xp_mul(&s.xp_star(&f2)?, &s.xp_star(&f1)?)?;
            let c = s.xp_star(&s.xp_star(&f1)?)? == f1;
            Ok([a, b, c])
        })();
        if let Some(r) = assoc.ok(r) {
            assoc.check(r[0], ce);
            anti.check(r[1], ce);
            invol.check(r[2], ce);
        }
        if let Some(u) = &one {
            let ok = s.xp_mul(u, &f1).ok() == Some(f1.clone()) && s.xp_mul(&f1, u).ok() == Some(f1.clone());
            unit.check(ok, || json!({"a": xj(&f1)}));
        }
    }
    if one.is_none() {
        unit.check(true, || Value::Null);
        unit.note("no unit for infinite X; skipped".into());
    }

    let e = p.identity();
    let gam = p.gamma();
    for _ in 0..singles {
        let f = random::nonzero_crossed(s, pools, 2, 2, Coeffs::Gauss, rng);
        let a = random::section(s, pools, gam, 2, Coeffs::Gauss, rng);
        let ce = || json!({"f": xj(&f), "a": s.section_to_json(&a)});
        let r = (|| -> Result<[bool; 6], crate::bundle::BundleError> {
            let ef = s.expectation(&f, &e)?;
            let idem_ok = s.expectation(&s.xp_from_section(&ef)?, &e)? == ef;
            let ff = s.xp_mul(&s.xp_star(&f)?, &f)?;
            let eff = s.expectation(&ff, &e)?;
            let terms = s.positivity_terms(&f)?;
            let pos_ok = s.sum_of_squares(&terms)? == eff;
            let xa = s.xp_from_section(&a)?;
            let left = s.expectation(&s.xp_mul(&xa, &f)?, &e)? == s.mul(&a, &ef)?;
            let right = s.expectation(&s.xp_mul(&f, &xa)?, &e)? == s.mul(&ef, &a)?;
            let faith_ok = !eff.is_zero();
            let mut rebuilt = crate::crossed::Crossed::zero();
            for c in f.terms().keys() {
                rebuilt = rebuilt.add(&s.xp_from_value(c, s.expectation(&f, c)?)?);
            }
            let mut spanned = crate::crossed::Crossed::zero();
            for (a, x, c) in s.spanning_decomposition(&f) {
                spanned = spanned.add(&s.spanning(a, &x, &c)?);
            }
            Ok([idem_ok, pos_ok, left && right, faith_ok, rebuilt == f, spanned == f])
        })();
        if let Some(r) = idem.ok(r) {
            for (prop, ok) in [&mut idem, &mut pos, &mut bimod, &mut faith, &mut coeff, &mut span].into_iter().zip(r) {
                prop.check(ok, ce);
            }
        }
        if s.bundle.units(p).is_some() || s.bundle.is_line() {
            let g = pools.dcosets.choose(rng).expect("nonempty");
            let u = hecke::basis(p, g);
            let r = (|| -> Result<bool, crate::bundle::BundleError> {
                let l = s.product(Operand::Hecke(&u), Operand::Elem(&f))? == s.hecke_left_direct(g, &f)?;
                let r = s.product(Operand::Elem(&f), Operand::Hecke(&u))? == s.hecke_right_direct(&f, g)?;
                let id = s.product(Operand::Hecke(&hecke::unit(p)), Operand::Elem(&f))? == f;
                Ok(l && r && id)
            })();
            if let Some(ok) = mults.ok(r) {
                mults.check(ok, || json!({"f": xj(&f), "g": p.elem_to_json(g)}));
            }
        }
    }
    Suite::new(
        "crossed",
        describe(s),
        vec![assoc, anti, invol, unit, idem, pos, bimod, faith, coeff, span, mults],
    )
}

/// The covariance identity for the multiplier embeddings, with both sides built as crossed-product elements,
/// on every `(ΓgΓ, xΓ, ΓsΓ)` of a finite trivial-line instance over `X = G`.
pub fn covariance_elements<P: HeckePair, B: Bundle<P, Arrow = P::Elem>>(s: &Setting<P, B>) -> Property {
    let p = &s.pair;
    let mut prop = Property::new("covariance-identity-elements");
    let (Some(ds), Some(cos)) = (p.dcosets(), p.cosets(p.gamma())) else {
        prop.ok::<(), _>(Err("needs a finite backend"));
        return prop;
    };
    let ind = |x: &P::Elem| s.xp_from_section(&s.unit_at(x, p.gamma())?);
    for g in &ds {
        let ug = hecke::basis(p, g);
        for x in &cos {
            for t in &ds {
                let ut = hecke::basis(p, t);
                let r = (|| -> Result<bool, crate::bundle::BundleError> {
                    let lhs = s.product(Operand::Hecke(&ug), Operand::Elem(&ind(x)?))?;
                    let lhs = s.product(Operand::Elem(&lhs), Operand::Hecke(&ut))?;
                    let mut rhs = crate::crossed::Crossed::zero();
                    for u in p.dcoset_left_cosets(&p.inv(g)) {
                        for v in p.dcoset_left_cosets(t) {
                            let mid = hecke::basis(p, &p.mul(&p.inv(&u), &v));
                            let a = s.product(Operand::Elem(&ind(&p.mul(x, &u))?), Operand::Hecke(&mid))?;
                            rhs = rhs.add(&s.xp_mul(&a, &ind(&p.mul(x, &v))?)?);
                        }
                    }
                    Ok(lhs == rhs)
                })();
                if let Some(ok) = prop.ok(r) {
                    prop.check(ok, || json!({"g": p.elem_to_json(g), "x": p.elem_to_json(x), "s": p.elem_to_json(t)}));
                }
            }
        }
    }
    prop
}

// ---------------------------------------------------------------------------------------------
// Regular representation and norms

pub fn regular_suite<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    samples: usize,
    rng: &mut Rng,
) -> Suite {
    let p = &s.pair;
    let mut hom = Property::new("integrated-form-multiplicative");
    let mut adj = Property::new("integrated-form-adjoint");
    let mut routes = Property::new("integrated-form-routes-agree");
    let mut restr = Property::new("restriction-is-pi-alpha");
    let mut sigma = Property::new("sigma-compression");
    let mut faith = Property::new("faithful-reconstruction");
    let mut nondeg = Property::new("nondegenerate");
    let mut ueq = Property::new("unitary-equivalence");
    let Some(pi) = hom.ok(FiniteRep::faithful(s)) else {
        return Suite::new("regular", describe(s), vec![hom]);
    };
    if let Some(ok) = nondeg.ok(pi.is_nondegenerate(s)) {
        nondeg.check(ok, || Value::Null);
    }
    // *-property of π on its own basis: the fiber bases must be orthonormal.
    let cos = match Cosets::of(p) {
        Ok(c) => c,
        Err(e) => {
            hom.ok::<(), _>(Err(e));
            return Suite::new("regular", describe(s), vec![hom]);
        }
    };
    let xj = |f: &Xp<P, B>| s.xp_to_json(f);
    for i in 0..samples {
        let f1 = random::crossed(s, pools, 2, 2, Coeffs::Gauss, rng);
        let f2 = random::crossed(s, pools, 2, 2, Coeffs::Gauss, rng);
        let a = random::section(s, pools, p.gamma(), 2, Coeffs::Gauss, rng);
        let ce = || json!({"a": xj(&f1), "b": xj(&f2), "section": s.section_to_json(&a)});
        let r = (|| -> Result<[bool; 5], crate::bundle::BundleError> {
            let m1 = rep::integrated_form(s, &pi, &f1)?;
            let m2 = rep::integrated_form(s, &pi, &f2)?;
            let h = rep::integrated_form(s, &pi, &s.xp_mul(&f1, &f2)?)? == m1.mul(&m2);
            let ad = rep::integrated_form(s, &pi, &s.xp_star(&f1)?)? == m1.adjoint();
            let rt = rep::integrated_form_by_spanning(s, &pi, &f1)? == m1;
            let rs = rep::integrated_form(s, &pi, &s.xp_from_section(&a)?)? == rep::pi_alpha(s, &pi, &a)?;
            let fa = rep::reconstruct(s, &pi, &m1)? == f1;
            Ok([h, ad, rt, rs, fa])
        })();
        if let Some(r) = hom.ok(r) {
            for (prop, ok) in [&mut hom, &mut adj, &mut routes, &mut restr, &mut faith].into_iter().zip(r) {
                prop.check(ok, ce);
            }
        }
        // σ-compressions on every coset pair, with shifted representatives.
        if i < 4 {
            for g in &cos.reps {
                for h in &cos.reps {
                    let g2 = p.mul(g, &p.random_in(p.gamma(), rng));
                    if let Some((l, r)) = sigma.ok(rep::sigma_compress(s, &pi, &f1, &g2, h)) {
                        sigma.check(l == r, || json!({"f": xj(&f1), "g": p.elem_to_json(&g2), "h": p.elem_to_json(h)}));
                    }
                }
            }
        }
        if i < 4 {
            let u = rep::random_unitary(pi.dim(), rng);
            let w = Matrix::identity(cos.len()).kron(&u);
            let conj = pi.clone().conjugate(u.clone());
            let r = (|| -> Result<bool, crate::bundle::BundleError> {
                let m = rep::integrated_form(s, &pi, &f1)?;
                let mc = rep::integrated_form(s, &conj, &f1)?;
                Ok(mc == w.mul(&m).mul(&w.adjoint()) && w.adjoint().mul(&mc).mul(&w) == m)
            })();
            if let Some(ok) = ueq.ok(r) {
                ueq.check(ok, || json!({"f": xj(&f1)}));
            }
        }
    }
    Suite::new("regular", describe(s), vec![hom, adj, routes, restr, sigma, faith, nondeg, ueq])
}

/// Operator norm of `π(f)` under a faithful representation: the C*-norm on D(𝒜).
pub fn section_norm<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, pi: &FiniteRep<P, B>, f: &Sec<P, B>) -> f64 {
    pi.apply(s, f).map(|m| m.op_norm()).unwrap_or(f64::NAN)
}

pub fn norm_suite<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    samples: usize,
    rng: &mut Rng,
) -> Suite {
    let p = &s.pair;
    let mut unit = Property::new("unit-norm");
    let mut restr = Property::new("restriction-norm");
    let mut bound = Property::new("expectation-bound");
    let Some(pi) = unit.ok(FiniteRep::faithful(s)) else {
        return Suite::new("norms", describe(s), vec![unit]);
    };
    if let Some(one) = unit.ok(s.xp_unit()) {
        if let Some(n) = unit.ok(rep::reduced_norm(s, &pi, &one)) {
            unit.check((n - 1.0).abs() <= tolerance(), || json!({"norm": n}));
        }
    }
    let cos = p.cosets(p.gamma()).unwrap_or_default();
    let mut worst_dev = 0.0_f64;
    let mut worst_slack = f64::INFINITY;
    for _ in 0..samples {
        let a = random::section(s, pools, p.gamma(), 3, Coeffs::Gauss, rng);
        if let Some(xa) = restr.ok(s.xp_from_section(&a)) {
            if let Some(n) = restr.ok(rep::reduced_norm(s, &pi, &xa)) {
                let m = section_norm(s, &pi, &a);
                worst_dev = worst_dev.max((n - m).abs());
                restr.check((n - m).abs() <= tolerance(), || json!({"section": s.section_to_json(&a), "reduced": n, "faithful": m}));
            }
        }
        let f = random::crossed(s, pools, 3, 2, Coeffs::Gauss, rng);
        let Some(rn) = bound.ok(rep::reduced_norm(s, &pi, &f)) else { continue };
        for g in &cos {
            let Some(e) = bound.ok(s.expectation(&f, g)) else { continue };
            let lhs = section_norm(s, &pi, &e);
            let rhs = p.inv_sqrt_delta(g).to_complex().re * rn;
            worst_slack = worst_slack.min(rhs - lhs);
            bound.check(lhs <= rhs + tolerance(), || json!({"f": s.xp_to_json(&f), "g": p.elem_to_json(g), "lhs": lhs, "rhs": rhs}));
        }
    }
    restr.note(format!("largest deviation {worst_dev:.3e}"));
    bound.note(format!("smallest slack {worst_slack:.3e}"));
    Suite::new("norms", describe(s), vec![unit, restr, bound])
}

// ---------------------------------------------------------------------------------------------
// LLN algebra and Φ

pub fn lln_suite<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    samples: usize,
    rng: &mut Rng,
) -> Suite {
    let p = &s.pair;
    let b = &s.bundle;
    let mut phi_mul = Property::new("phi-multiplicative");
    let mut phi_star = Property::new("phi-star");
    let mut phi_bij = Property::new("phi-bijective");
    let mut assoc = Property::new("lln-associativity");
    let mut anti = Property::new("lln-star-anti-multiplicative");
    let mut ind = Property::new("phi-of-spanning-element");
    let mut pix = Property::new("pi-x-is-integrated-evaluation");
    let mut pistar = Property::new("pi-x-star");
    let mut sup = Property::new("sup-norm-equals-reduced-norm");
    let xj = |f: &Xp<P, B>| s.xp_to_json(f);
    for _ in 0..samples {
        let f1 = random::crossed(s, pools, 2, 2, Coeffs::Gauss, rng);
        let f2 = random::crossed(s, pools, 2, 2, Coeffs::Gauss, rng);
        let ce = || json!({"a": xj(&f1), "b": xj(&f2)});
        let r = (|| -> Result<[bool; 3], crate::bundle::BundleError> {
            let (p1, p2) = (s.phi(&f1)?, s.phi(&f2)?);
            let m = s.phi(&s.xp_mul(&f1, &f2)?)? == s.lln_mul(&p1, &p2);
            let st = s.phi(&s.xp_star(&f1)?)? == s.lln_star(&p1);
            let bij = s.phi_inv(&p1)? == f1;
            Ok([m, st, bij])
        })();
        if let Some(r) = phi_mul.ok(r) {
            phi_mul.check(r[0], ce);
            phi_star.check(r[1], ce);
            phi_bij.check(r[2], ce);
        }
        let l1 = random::lln(s, pools, 3, Coeffs::Gauss, rng);
        let l2 = random::lln(s, pools, 3, Coeffs::Gauss, rng);
        let l3 = random::lln(s, pools, 3, Coeffs::Gauss, rng);
        let lce = || json!({"a": s.lln_to_json(&l1), "b": s.lln_to_json(&l2), "c": s.lln_to_json(&l3)});
        let l12 = s.lln_mul(&l1, &l2);
        assoc.check(s.lln_mul(&l12, &l3) == s.lln_mul(&l1, &s.lln_mul(&l2, &l3)), lce);
        anti.check(s.lln_star(&l12) == s.lln_mul(&s.lln_star(&l2), &s.lln_star(&l1)), lce);
        if let Some(back) = phi_bij.ok(s.phi_inv(&l1)) {
            phi_bij.check(s.phi(&back).ok() == Some(l1.clone()), lce);
        }

        // Φ(Δ(g)^{-1/2} 1_{xΓ} * ΓgΓ * 1_{xgΓ}) = 1_{[(x,g)]}, with the left side built from products.
        let x = pools.arrows.choose(rng).expect("nonempty").clone();
        let g = p.mul(&p.random_in(p.gamma(), rng), pools.dcosets.choose(rng).expect("nonempty"));
        let r = (|| -> Result<bool, crate::bundle::BundleError> {
            let left = s.xp_from_section(&s.unit_at(&x, p.gamma())?)?;
            let right = s.xp_from_section(&s.unit_at(&b.act(p, &x, &g), p.gamma())?)?;
            let u = hecke::basis(p, &g);
            let e = s.xp_mul(&s.product(Operand::Elem(&left), Operand::Hecke(&u))?, &right)?;
            Ok(s.phi(&e.scale(&p.inv_sqrt_delta(&g)))? == s.lln_indicator(&x, &g))
        })();
        if let Some(ok) = ind.ok(r) {
            ind.check(ok, || json!({"x": b.arrow_to_json(p, &x), "g": p.elem_to_json(&g)}));
        }
    }

    // Finite instances: π_x against the integrated evaluation representation, and norms.
    if let (Some(points), Ok(cos)) = (b.units(p), Cosets::of(p)) {
        let faithful = FiniteRep::faithful(s);
        for _ in 0..samples.min(20) {
            let f = random::crossed(s, pools, 3, 2, Coeffs::Gauss, rng);
            let Some(ff) = pix.ok(s.phi(&f)) else { continue };
            let fs = s.lln_star(&ff);
            let mut best = 0.0_f64;
            for x in &points {
                let mx = pi_x_matrix(s, x, &ff, &cos);
                let Some(ev) = pix.ok(FiniteRep::eval(s, x.clone())) else { continue };
                if let Some(m) = pix.ok(rep::integrated_form(s, &ev, &f)) {
                    pix.check(m == mx, || json!({"f": xj(&f), "x": b.arrow_to_json(p, x)}));
                }
                pistar.check(pi_x_matrix(s, x, &fs, &cos) == mx.adjoint(), || json!({"f": xj(&f)}));
                best = best.max(mx.op_norm());
            }
            if let Ok(pi) = &faithful {
                if let Some(rn) = sup.ok(rep::reduced_norm(s, pi, &f)) {
                    sup.check((best - rn).abs() <= tolerance(), || json!({"f": xj(&f), "sup": best, "reduced": rn}));
                }
            }
        }
    }
    let mut props = vec![phi_mul, phi_star, phi_bij, assoc, anti, ind];
    for extra in [pix, pistar, sup] {
        if extra.checked > 0 {
            props.push(extra);
        }
    }
    Suite::new("lln", describe(s), props)
}

/// Matrix of `π_x(F)` on `ℓ²(G/Γ)` in the order of `cos`.
pub fn pi_x_matrix<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    x: &B::Arrow,
    f: &crate::lln::LlnOf<P, B>,
    cos: &Cosets<P::Elem>,
) -> Matrix {
    let p = &s.pair;
    let n = cos.len();
    let mut m = Matrix::zeros(n, n);
    for (j, h) in cos.reps.iter().enumerate() {
        for (g, c) in s.pi_x_apply(x, f, &hecke::delta_vec(p, h)) {
            m.set(cos.index(p, &g), j, c);
        }
    }
    m
}

// ---------------------------------------------------------------------------------------------
// Matrix units and covariant pairs

pub fn svn_suite<P: HeckePair, B: Bundle<P, Arrow = P::Elem>>(s: &Setting<P, B>, rng: &mut Rng) -> Suite {
    let p = &s.pair;
    let mut rel = Property::new("matrix-unit-relations");
    let mut adj = Property::new("matrix-unit-adjoint");
    let mut sum = Property::new("matrix-units-sum-to-unit");
    let mut img = Property::new("elementary-images");
    let mut rank = Property::new("full-matrix-algebra");
    let mut l1 = Property::new("matrix-unit-l1-norm");
    let mut std = Property::new("covariance-identity-standard-pair");
    let mut conj = Property::new("covariance-identity-amplified-conjugates");
    let mut bad = Property::new("corrupted-pairs-rejected");
    let mut ueq = Property::new("unitary-equivalence-of-pairs");
    let Some(cos) = rel.ok(Cosets::of(p)) else {
        return Suite::new("svn", describe(s), vec![rel]);
    };
    let n = cos.len();
    let mut ts = Vec::new();
    for g in &cos.reps {
        let mut row = Vec::new();
        for h in &cos.reps {
            match rel.ok(s.matrix_unit(g, h)) {
                Some(t) => row.push(t),
                None => return Suite::new("svn", describe(s), vec![rel]),
            }
        }
        ts.push(row);
    }
    let e = |i: usize, j: usize| {
        let mut m = Matrix::zeros(n, n);
        m.set(i, j, RadScalar::one());
        m
    };
    let mut total = crate::crossed::Crossed::zero();
    for i in 0..n {
        total = total.add(&ts[i][i]);
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let want = if j == k { ts[i][l].clone() } else { crate::crossed::Crossed::zero() };
                    if let Some(prod) = rel.ok(s.xp_mul(&ts[i][j], &ts[k][l])) {
                        rel.check(prod == want, || json!({"T1": [i, j], "T2": [k, l]}));
                    }
                }
            }
            if let Some(st) = adj.ok(s.xp_star(&ts[i][j])) {
                adj.check(st == ts[j][i], || json!({"T": [i, j]}));
            }
            let norm = s.xp_l1_norm(&ts[i][j], |sec| s.sup_norm(sec));
            let want = BigRational::from_integer(p.left_count(&p.mul(&p.inv(&cos.reps[i]), &cos.reps[j])));
            l1.check(norm.as_rational() == Some(want), || json!({"T": [i, j]}));
        }
    }
    if let Some(u) = sum.ok(s.xp_unit()) {
        sum.check(total == u, || Value::Null);
    }

    let standard = rel.ok(CovariantPair::standard(p));
    let ev = FiniteRep::eval(s, p.identity());
    let mut images = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let a = ev.as_ref().ok().and_then(|ev| rep::integrated_form(s, ev, &ts[i][j]).ok());
            let b = standard.as_ref().and_then(|c| c.integrate_unit(p, &cos.reps[i], &cos.reps[j]).ok());
            img.check(a.as_ref() == Some(&e(i, j)) && b.as_ref() == Some(&e(i, j)), || json!({"T": [i, j]}));
            if let Some(a) = a {
                images.push(a.flatten());
            }
        }
    }
    let r = Matrix::from_rows(n * n, &images).rank_exact();
    rank.check(r == Some(n * n), || json!({"rank": r, "expected": n * n}));
    rank.note(format!("exact rank {r:?} of {}", n * n));

    if let Some(c) = &standard {
        if let Some(rep) = std.ok(c.check(p)) {
            std.check(rep.holds(), || json!({"max_deviation": rep.max_deviation}));
        }
        for m in 1..=3 {
            let amp = c.amplify(m);
            let u = rep::random_unitary(amp.dim, rng);
            let cp = amp.conjugate(&u);
            if let Some(rep) = conj.ok(cp.check(p)) {
                conj.check(rep.holds(), || json!({"amplification": m, "max_deviation": rep.max_deviation}));
            }
            // Integrated images of the T's are again matrix units, summing to the identity.
            let mut units = Vec::new();
            for g in &cos.reps {
                let mut row = Vec::new();
                for h in &cos.reps {
                    row.extend(conj.ok(cp.integrate_unit(p, g, h)));
                }
                units.push(row);
            }
            let mut id = Matrix::zeros(cp.dim, cp.dim);
            for i in 0..n {
                id = id.add(&units[i][i]);
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let want = if j == k { units[i][l].clone() } else { Matrix::zeros(cp.dim, cp.dim) };
                            conj.check(units[i][j].mul(&units[k][l]) == want, || json!({"amplification": m, "T1": [i, j], "T2": [k, l]}));
                        }
                    }
                    conj.check(units[i][j].adjoint() == units[j][i], || json!({"amplification": m, "T": [i, j]}));
                }
            }
            conj.check(id == Matrix::identity(cp.dim), || json!({"amplification": m}));
            // Conjugation intertwines the integrated forms in both directions.
            for (i, g) in cos.reps.iter().enumerate() {
                for (j, h) in cos.reps.iter().enumerate() {
                    let (Some(x), Some(y)) = (ueq.ok(amp.integrate_unit(p, g, h)), ueq.ok(cp.integrate_unit(p, g, h))) else { continue };
                    let ok = y == u.mul(&x).mul(&u.adjoint()) && u.adjoint().mul(&y).mul(&u) == x;
                    ueq.check(ok, || json!({"amplification": m, "T": [i, j]}));
                }
            }
            for _ in 0..3 {
                let broken = cp.corrupt(rng);
                if let Some(rep) = bad.ok(broken.check(p)) {
                    bad.check(!rep.holds(), || json!({"amplification": m}));
                }
            }
        }
    }
    let elems = covariance_elements(s);
    Suite::new("svn", describe(s), vec![rel, adj, sum, img, rank, l1, std, conj, bad, ueq, elems])
}

/// Matrix-unit relations on a window of cosets of an infinite pair, where
/// `T*_{gΓ,hΓ} = Δ(g⁻¹h) T_{hΓ,gΓ}`.
pub fn svn_window<P: HeckePair, B: Bundle<P, Arrow = P::Elem>>(s: &Setting<P, B>, window: &[P::Elem]) -> Suite {
    let p = &s.pair;
    let mut rel = Property::new("matrix-unit-relations");
    let mut adj = Property::new("matrix-unit-adjoint");
    let n = window.len();
    let mut ts = vec![Vec::new(); n];
    for (i, g) in window.iter().enumerate() {
        for h in window {
            match rel.ok(s.matrix_unit(g, h)) {
                Some(t) => ts[i].push(t),
                None => return Suite::new("svn-window", describe(s), vec![rel]),
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let same = p.same_coset(&window[j], &window[k], p.gamma());
                    let want = if same { ts[i][l].clone() } else { crate::crossed::Crossed::zero() };
                    if let Some(prod) = rel.ok(s.xp_mul(&ts[i][j], &ts[k][l])) {
                        rel.check(prod == want, || json!({"T1": [i, j], "T2": [k, l]}));
                    }
                }
            }
            let d = RadScalar::from_rational(p.delta(&p.mul(&p.inv(&window[i]), &window[j])));
            if let Some(st) = adj.ok(s.xp_star(&ts[i][j])) {
                adj.check(st == ts[j][i].scale(&d), || json!({"T": [i, j]}));
            }
        }
    }
    Suite::new("svn-window", describe(s), vec![rel, adj])
}

// ---------------------------------------------------------------------------------------------
// Bundle axioms and the graded construction

/// Groupoid and Fell-bundle axioms plus the action laws, exhaustively on basis vectors.
pub fn bundle_axioms<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>) -> Vec<Property> {
    let p = &s.pair;
    let b = &s.bundle;
    let mut gpd = Property::new("groupoid-axioms");
    let mut fell = Property::new("fell-axioms");
    let mut act = Property::new("action-laws");
    let mut free = Property::new("action-free");
    let (Some(arrows), Some(els)) = (b.arrows(p), p.elements().map(<[_]>::to_vec)) else {
        gpd.ok::<(), _>(Err("needs a finite groupoid"));
        return vec![gpd];
    };
    let aj = |x: &B::Arrow| b.arrow_to_json(p, x);
    let basis = |x: &B::Arrow| -> Vec<Vec<RadScalar>> {
        let d = b.dim(p, x);
        (0..d)
            .map(|i| {
                let mut v = vec![RadScalar::zero(); d];
                v[i] = RadScalar::one();
                v
            })
            .collect()
    };
    for x in &arrows {
        let xi = b.inverse(p, x);
        gpd.check(
            b.source(p, &xi) == b.range(p, x)
                && b.range(p, &xi) == b.source(p, x)
                && b.compose(p, x, &xi) == Some(b.range(p, x))
                && b.compose(p, &xi, x) == Some(b.source(p, x)),
            || json!({"x": aj(x)}),
        );
        for a in basis(x) {
            fell.check(b.fiber_star(p, &xi, &b.fiber_star(p, x, &a)) == a, || json!({"x": aj(x)}));
        }
        for y in &arrows {
            let xy = b.compose(p, x, y);
            let composable = b.source(p, x) == b.range(p, y);
            gpd.check(xy.is_some() == composable, || json!({"x": aj(x), "y": aj(y)}));
            let Some(xy) = xy else { continue };
            gpd.check(b.source(p, &xy) == b.source(p, y) && b.range(p, &xy) == b.range(p, x), || json!({"x": aj(x), "y": aj(y)}));
            for a in basis(x) {
                for c in basis(y) {
                    let ac = b.fiber_mul(p, x, y, &a, &c);
                    let lhs = b.fiber_star(p, &xy, &ac);
                    let rhs = b.fiber_mul(p, &b.inverse(p, y), &b.inverse(p, x), &b.fiber_star(p, y, &c), &b.fiber_star(p, x, &a));
                    fell.check(lhs == rhs, || json!({"x": aj(x), "y": aj(y)}));
                }
            }
            for z in &arrows {
                let Some(yz) = b.compose(p, y, z) else { continue };
                for a in basis(x) {
                    for c in basis(y) {
                        for d in basis(z) {
                            let l = b.fiber_mul(p, &xy, z, &b.fiber_mul(p, x, y, &a, &c), &d);
                            let r = b.fiber_mul(p, x, &yz, &a, &b.fiber_mul(p, y, z, &c, &d));
                            fell.check(l == r, || json!({"x": aj(x), "y": aj(y), "z": aj(z)}));
                        }
                    }
                }
            }
        }
    }
    for g in &els {
        let gi = p.inv(g);
        for x in &arrows {
            let xg = b.act(p, x, g);
            free.check(xg != *x || p.is_identity(g), || json!({"x": aj(x), "g": p.elem_to_json(g)}));
            act.check(
                b.source(p, &xg) == b.act(p, &b.source(p, x), g) && b.range(p, &xg) == b.act(p, &b.range(p, x), g),
                || json!({"x": aj(x), "g": p.elem_to_json(g)}),
            );
            let xgi = b.act(p, x, &gi);
            for a in basis(x) {
                let ga = b.alpha(p, g, x, &a);
                act.check(
                    b.fiber_star(p, &xgi, &ga) == b.alpha(p, g, &b.inverse(p, x), &b.fiber_star(p, x, &a)),
                    || json!({"x": aj(x), "g": p.elem_to_json(g)}),
                );
                for h in &els {
                    let hi = p.inv(h);
                    let lhs = b.alpha(p, g, &b.act(p, x, &hi), &b.alpha(p, h, x, &a));
                    act.check(lhs == b.alpha(p, &p.mul(g, h), x, &a), || json!({"x": aj(x), "g": p.elem_to_json(g), "h": p.elem_to_json(h)}));
                }
            }
            for y in &arrows {
                let Some(xy) = b.compose(p, x, y) else { continue };
                let yg = b.act(p, y, g);
                act.check(b.compose(p, &xg, &yg) == Some(b.act(p, &xy, g)), || json!({"x": aj(x), "y": aj(y)}));
                let ygi = b.act(p, y, &gi);
                for a in basis(x) {
                    for c in basis(y) {
                        let lhs = b.alpha(p, g, &xy, &b.fiber_mul(p, x, y, &a, &c));
                        let rhs = b.fiber_mul(p, &xgi, &ygi, &b.alpha(p, g, x, &a), &b.alpha(p, g, y, &c));
                        act.check(lhs == rhs, || json!({"x": aj(x), "y": aj(y), "g": p.elem_to_json(g)}));
                    }
                }
            }
        }
    }
    vec![gpd, fell, act, free]
}

/// The identification of the orbit bundle (ℬ×G)/H with the directly built ℬ×G/H.
pub fn orbit_vs_direct<P: HeckePair>(s: &Setting<P, EqBundle<P::Elem>>, h: P::Sub) -> Property {
    let p = &s.pair;
    let b = &s.bundle;
    let mut prop = Property::new("orbit-bundle-is-direct-quotient");
    let q = Quotient { pair: p, algebra: &b.algebra, sub: h };
    let (Some(reps), Some(direct)) = (s.orbit_reps(h), q.arrows()) else {
        prop.ok::<(), _>(Err("needs a finite backend"));
        return prop;
    };
    // ι((s,t)H) = (s, tH).
    let iota = |x: &(P::Elem, P::Elem)| (x.0.clone(), p.coset_key(&x.1, h));
    let mut image: Vec<_> = reps.iter().map(iota).collect();
    image.sort();
    image.dedup();
    let mut direct_sorted = direct.clone();
    direct_sorted.sort();
    prop.check(image.len() == reps.len() && image == direct_sorted, || json!({"orbits": reps.len(), "direct": direct.len()}));
    let aj = |x: &(P::Elem, P::Elem)| <EqBundle<P::Elem> as Bundle<P>>::arrow_to_json(b, p, x);
    for x in &reps {
        let dim = b.algebra.dim(&x.0);
        for i in 0..dim {
            let mut a = vec![RadScalar::zero(); dim];
            a[i] = RadScalar::one();
            let Some(sx) = prop.ok(s.single(a.clone(), x, h)) else { continue };
            // Involution.
            let st = s.star(&sx);
            let xi = q.inverse(&iota(x));
            let want = q.fiber_star(&iota(x), &a);
            let got = st.terms().iter().next().map(|(y, v)| (iota(y), v.clone()));
            prop.check(got == Some((xi, want)), || json!({"x": aj(x)}));
            for y in &reps {
                let dy = b.algebra.dim(&y.0);
                for j in 0..dy {
                    let mut c = vec![RadScalar::zero(); dy];
                    c[j] = RadScalar::one();
                    let Some(sy) = prop.ok(s.single(c.clone(), y, h)) else { continue };
                    let Some(prod) = prop.ok(s.mul(&sx, &sy)) else { continue };
                    let direct = q.compose(&iota(x), &iota(y));
                    let ok = match (&direct, prod.terms().iter().next()) {
                        (None, None) => true,
                        (None, Some((_, v))) => v.iter().all(RadScalar::is_zero),
                        (Some(d), Some((z, v))) => {
                            prod.terms().len() == 1 && iota(z) == *d && *v == q.fiber_mul(&iota(x), &iota(y), &a, &c)
                        }
                        (Some(_), None) => q.fiber_mul(&iota(x), &iota(y), &a, &c).iter().all(RadScalar::is_zero),
                    };
                    prop.check(ok, || json!({"x": aj(x), "y": aj(y)}));
                }
            }
        }
    }
    prop
}

pub fn eq_suite<P: HeckePair>(s: &Setting<P, EqBundle<P::Elem>>, triples: usize, singles: usize, rng: &mut Rng) -> Vec<Suite> {
    let p = &s.pair;
    let mut alg = Property::new("graded-algebra-axioms");
    let r = s.bundle.algebra.verify(p);
    alg.check(r.is_ok(), || json!({"error": r.clone().err()}));
    let mut props = vec![alg];
    props.extend(bundle_axioms(s));
    let mut dual = Property::new("dual-action-law");
    let arrows = s.bundle.arrows(p).unwrap_or_default();
    let els = p.elements().map(<[_]>::to_vec).unwrap_or_default();
    for x in &arrows {
        let a = random::fiber(s.bundle.algebra.dim(&x.0), Coeffs::Gauss, rng);
        let (y, b) = eq::dual_action(p, &p.identity(), x, &a);
        dual.check(y == *x && b == a, || Value::Null);
        for g in &els {
            let (xg, ag) = eq::dual_action(p, g, x, &a);
            dual.check(
                ag == <EqBundle<P::Elem> as Bundle<P>>::alpha(&s.bundle, p, g, x, &a) && xg == <EqBundle<P::Elem> as Bundle<P>>::act(&s.bundle, p, x, &p.inv(g)),
                || Value::Null,
            );
            for h in &els {
                let (y1, b1) = eq::dual_action(p, h, x, &a);
                let (y2, b2) = eq::dual_action(p, g, &y1, &b1);
                let (y3, b3) = eq::dual_action(p, &p.mul(g, h), x, &a);
                dual.check(y2 == y3 && b2 == b3, || Value::Null);
            }
        }
    }
    props.push(dual);
    let mut subs = vec![p.gamma()];
    subs.extend(p.trivial_sub());
    subs.extend(p.normal_core());
    for c in p.dcosets().unwrap_or_default() {
        subs.push(p.gamma_g(&c));
    }
    subs.sort();
    subs.dedup();
    let mut ovd = Property::new("orbit-bundle-is-direct-quotient");
    for h in subs {
        let one = orbit_vs_direct(s, h);
        ovd.checked += one.checked;
        ovd.failed += one.failed;
        if ovd.counterexample.is_none() {
            ovd.counterexample = one.counterexample;
        }
        if ovd.detail.is_none() {
            ovd.detail = one.detail;
        }
    }
    props.push(ovd);
    let mut out = vec![Suite::new("eq-bundle", describe(s), props)];
    if let Some(pools) = Pools::finite(s) {
        out.push(crossed_suite(s, &pools, triples, singles, rng));
    }
    out
}

// ---------------------------------------------------------------------------------------------
// L¹ norms

/// The fiber norm used in ‖·‖_{τ,L¹}: exact sup norm for line bundles, otherwise the norm of a
/// faithful representation.
pub fn fiber_norm<P: HeckePair, B: Bundle<P>>(s: &Setting<P, B>, pi: Option<&FiniteRep<P, B>>, f: &Sec<P, B>) -> Norm {
    if s.bundle.is_line() {
        return s.sup_norm(f);
    }
    Norm { exact: None, value: pi.map_or(f64::NAN, |pi| section_norm(s, pi, f)) }
}

pub fn l1_suite<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    samples: usize,
    rng: &mut Rng,
) -> Suite {
    let p = &s.pair;
    let mut hsub = Property::new("hecke-l1-submultiplicative");
    let mut hstar = Property::new("hecke-l1-star-invariant");
    let mut xsub = Property::new("crossed-l1-submultiplicative");
    let mut xstar = Property::new("crossed-l1-star-invariant");
    let mut exact = 0usize;
    let pi = if s.bundle.is_line() { None } else { FiniteRep::faithful(s).ok() };
    let fnorm = |f: &Sec<P, B>| fiber_norm(s, pi.as_ref(), f);
    for _ in 0..samples {
        let a = random::hecke(p, &pools.dcosets, 3, Coeffs::Integer, rng);
        let b = random::hecke(p, &pools.dcosets, 3, Coeffs::Integer, rng);
        let ce = || json!({"a": hecke::to_json(p, &a), "b": hecke::to_json(p, &b)});
        let (na, nb) = (hecke::l1_norm(p, &a), hecke::l1_norm(p, &b));
        let nab = hecke::l1_norm(p, &hecke::convolve(p, &a, &b));
        hsub.check(q_le(&nab, &norm_product(&na, &nb)), ce);
        hstar.check(n_eq(&hecke::l1_norm(p, &hecke::star(p, &a)), &na), ce);

        let f = random::crossed(s, pools, 2, 2, Coeffs::Integer, rng);
        let g = random::crossed(s, pools, 2, 2, Coeffs::Integer, rng);
        let xce = || json!({"a": s.xp_to_json(&f), "b": s.xp_to_json(&g)});
        let (nf, ng) = (s.xp_l1_norm(&f, fnorm), s.xp_l1_norm(&g, fnorm));
        if let Some(fg) = xsub.ok(s.xp_mul(&f, &g)) {
            let nfg = s.xp_l1_norm(&fg, fnorm);
            if nfg.as_rational().is_some() && nf.as_rational().is_some() {
                exact += 1;
            }
            xsub.check(q_le(&nfg, &norm_product(&nf, &ng)), xce);
        }
        if let Some(fs) = xstar.ok(s.xp_star(&f)) {
            xstar.check(n_eq(&s.xp_l1_norm(&fs, fnorm), &nf), xce);
        }
    }
    xsub.note(format!("{exact} of {samples} comparisons exact"));
    Suite::new("l1", describe(s), vec![hsub, hstar, xsub, xstar])
}
