//! The *-algebraic crossed product C_c(𝒜/Γ) ×ᵅ G/Γ.
//!
//! An element is an equivariant map `gΓ ↦ f(gΓ) ∈ C_c(𝒜/Γ^g)`; only the value at the canonical
//! representative of each double coset is stored and the rest follows from
//! `f(γgΓ) = ᾱ_γ(f(gΓ))`.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::bundle::{Bundle, BundleError, Fiber, Sec, Section, Setting};
use crate::hecke::{HeckeElement, Norm};
use crate::pair::{HeckePair, PairError};
use crate::scalars::RadScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossed<A: Ord, E: Ord, S> {
    terms: BTreeMap<E, Section<A, S>>,
}

pub type Xp<P, B> = Crossed<<B as Bundle<P>>::Arrow, <P as HeckePair>::Elem, <P as HeckePair>::Sub>;

impl<A: Ord + Clone, E: Ord + Clone, S: Copy + PartialEq + std::fmt::Debug> Crossed<A, E, S> {
    pub fn zero() -> Self {
        Crossed { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<E, Section<A, S>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: E, s: Section<A, S>) {
        if s.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, s);
        }
    }

    pub fn scale(&self, c: &RadScalar) -> Self {
        let mut out = Self::zero();
        for (k, s) in &self.terms {
            out.insert(k.clone(), s.scale(c));
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, s) in &o.terms {
            let v = match out.terms.get(k) {
                Some(cur) => cur.add(s),
                None => s.clone(),
            };
            out.insert(k.clone(), v);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&RadScalar::from_int(-1)))
    }
}

/// One side of a product: a crossed-product element or a Hecke algebra multiplier.
pub enum Operand<'a, P: HeckePair, B: Bundle<P>> {
    Elem(&'a Xp<P, B>),
    Hecke(&'a HeckeElement<P::Elem>),
}

enum Val<P: HeckePair, B: Bundle<P>> {
    Sec(Sec<P, B>),
    Scalar(RadScalar),
}

impl<P: HeckePair, B: Bundle<P>> Setting<P, B> {
    /// `f(hΓ)` as a section over `Γ^h`.
    pub fn xp_eval(&self, f: &Xp<P, B>, h: &P::Elem) -> Result<Sec<P, B>, BundleError> {
        let p = &self.pair;
        let c = p.dcoset_key(h);
        match f.terms.get(&c) {
            None => Ok(Section::zero(p.gamma_g(h))),
            Some(s) => {
                let gam = p
                    .gamma_transporter(&c, h)
                    .ok_or_else(|| BundleError::Invalid(format!("no Γ-transporter to {}", p.format_elem(h))))?;
                Ok(self.act(&gam, s))
            }
        }
    }

    /// `E_{gΓ}(f) = f(gΓ)`.
    pub fn expectation(&self, f: &Xp<P, B>, g: &P::Elem) -> Result<Sec<P, B>, BundleError> {
        self.xp_eval(f, g)
    }

    /// The element supported on `ΓgΓ` with value `s` at `gΓ`; `s` must live over `Γ^g`.
    pub fn xp_from_value(&self, g: &P::Elem, s: Sec<P, B>) -> Result<Xp<P, B>, BundleError> {
        let p = &self.pair;
        if s.sub != p.gamma_g(g) {
            return Err(BundleError::Invalid("value must be a section over Γ^g".into()));
        }
        let c = p.dcoset_key(g);
        let gam = p.gamma_transporter(&c, g).ok_or(PairError::NotContained)?;
        let mut out = Crossed::zero();
        out.insert(c, self.act(&p.inv(&gam), &s));
        Ok(out)
    }

    /// `C_c(𝒜/Γ)` inside the crossed product.
    pub fn xp_from_section(&self, s: &Sec<P, B>) -> Result<Xp<P, B>, BundleError> {
        self.xp_from_value(&self.pair.identity(), s.clone())
    }

    /// `[a]_{xΓ} * ΓgΓ * 1_{s(x)gΓ}`: supported on `ΓgΓ` with value `[a]_{xΓ^g}` at `gΓ`.
    pub fn spanning(&self, a: Fiber, x: &B::Arrow, g: &P::Elem) -> Result<Xp<P, B>, BundleError> {
        let s = self.single(a, x, self.pair.gamma_g(g))?;
        self.xp_from_value(g, s)
    }

    /// `T_{gΓ,hΓ} = 1_{gΓ} * Γg⁻¹hΓ * 1_{hΓ}` for the trivial line bundle over `G`.
    pub fn matrix_unit(&self, g: &P::Elem, h: &P::Elem) -> Result<Xp<P, B>, BundleError>
    where
        B: Bundle<P, Arrow = P::Elem>,
    {
        let p = &self.pair;
        self.spanning(vec![RadScalar::one()], g, &p.mul(&p.inv(g), h))
    }

    /// Unit of the crossed product for finite unital bundles.
    pub fn xp_unit(&self) -> Result<Xp<P, B>, BundleError> {
        self.xp_from_section(&self.unit(self.pair.gamma())?)
    }

    fn left_values(&self, op: &Operand<'_, P, B>) -> Result<Vec<(P::Elem, Val<P, B>)>, BundleError> {
        let p = &self.pair;
        let mut out = Vec::new();
        match op {
            Operand::Elem(f) => {
                for c in f.terms.keys() {
                    for h in p.dcoset_left_cosets(c) {
                        let v = self.xp_eval(f, &h)?;
                        out.push((h, Val::Sec(v)));
                    }
                }
            }
            Operand::Hecke(f) => {
                for (d, c) in f.terms() {
                    for h in p.dcoset_left_cosets(d) {
                        out.push((h, Val::Scalar(c.clone())));
                    }
                }
            }
        }
        Ok(out)
    }

    fn support_keys(op: &Operand<'_, P, B>) -> BTreeSet<P::Elem> {
        match op {
            Operand::Elem(f) => f.terms.keys().cloned().collect(),
            Operand::Hecke(f) => f.terms().keys().cloned().collect(),
        }
    }

    fn value_at(&self, op: &Operand<'_, P, B>, k: &P::Elem) -> Result<Val<P, B>, BundleError> {
        Ok(match op {
            Operand::Elem(f) => Val::Sec(self.xp_eval(f, k)?),
            Operand::Hecke(f) => Val::Scalar(crate::hecke::value(&self.pair, f, k)),
        })
    }

    /// Sums sections from various levels and returns the result over `Γ^g`.
    fn collect_at(&self, g: &P::Elem, parts: Vec<Sec<P, B>>) -> Result<Sec<P, B>, BundleError> {
        let p = &self.pair;
        let target = p.gamma_g(g);
        let m = parts.iter().fold(target, |acc, s| p.meet(acc, s.sub));
        let mut sum = Section::zero(m);
        for s in &parts {
            if !s.is_zero() {
                sum = sum.add(&self.embed(s, m)?);
            }
        }
        self.descend(&sum, target)
    }

    /// `(f₁*f₂)(gΓ) = Σ_{[h]∈G/Γ} f₁(hΓ) ᾱ_h(f₂(h⁻¹gΓ))`, where either side may be a Hecke multiplier.
    pub fn product(&self, left: Operand<'_, P, B>, right: Operand<'_, P, B>) -> Result<Xp<P, B>, BundleError> {
        if matches!((&left, &right), (Operand::Hecke(_), Operand::Hecke(_))) {
            return Err(BundleError::Invalid("use the Hecke convolution for two Hecke elements".into()));
        }
        let p = &self.pair;
        let lv = self.left_values(&left)?;
        let rkeys = Self::support_keys(&right);
        let mut rcosets = Vec::new();
        for d in &rkeys {
            rcosets.extend(p.dcoset_left_cosets(d));
        }
        let mut candidates = BTreeSet::new();
        for (h, _) in &lv {
            for k in &rcosets {
                candidates.insert(p.dcoset_key(&p.mul(h, k)));
            }
        }
        let mut out = Crossed::zero();
        for g in candidates {
            let mut parts = Vec::new();
            for (h, v1) in &lv {
                let k = p.mul(&p.inv(h), &g);
                if !rkeys.contains(&p.dcoset_key(&k)) {
                    continue;
                }
                let v2 = self.value_at(&right, &k)?;
                let term = match (v1, v2) {
                    (Val::Sec(a), Val::Sec(b)) => self.dl_mul(a, &self.act(h, &b))?,
                    (Val::Sec(a), Val::Scalar(c)) => a.scale(&c),
                    (Val::Scalar(c), Val::Sec(b)) => self.act(h, &b).scale(c),
                    (Val::Scalar(_), Val::Scalar(_)) => unreachable!("excluded above"),
                };
                parts.push(term);
            }
            let s = self.collect_at(&g, parts)?;
            out.insert(g, s);
        }
        Ok(out)
    }

    pub fn xp_mul(&self, f1: &Xp<P, B>, f2: &Xp<P, B>) -> Result<Xp<P, B>, BundleError> {
        self.product(Operand::Elem(f1), Operand::Elem(f2))
    }

    /// `(f*)(gΓ) = Δ(g⁻¹) ᾱ_g(f(g⁻¹Γ))*`.
    pub fn xp_star(&self, f: &Xp<P, B>) -> Result<Xp<P, B>, BundleError> {
        let p = &self.pair;
        let mut out = Crossed::zero();
        for c in f.terms.keys() {
            let g = p.dcoset_key(&p.inv(c));
            let v = self.xp_eval(f, &p.inv(&g))?;
            let s = self.star(&self.act(&g, &v));
            let w = RadScalar::from_rational(p.delta(&g).recip());
            out.insert(g, s.scale(&w));
        }
        Ok(out)
    }

    /// `ΓgΓ · f` computed directly: `(U f)(kΓ) = Σ_{hΓ ⊆ ΓgΓ} ᾱ_h(f(h⁻¹kΓ))`.
    pub fn hecke_left_direct(&self, g: &P::Elem, f: &Xp<P, B>) -> Result<Xp<P, B>, BundleError> {
        let p = &self.pair;
        let hs = p.dcoset_left_cosets(g);
        let mut keys = BTreeSet::new();
        for h in &hs {
            for c in f.terms.keys() {
                for k in p.dcoset_left_cosets(c) {
                    keys.insert(p.dcoset_key(&p.mul(h, &k)));
                }
            }
        }
        let mut out = Crossed::zero();
        for k in keys {
            let mut parts = Vec::new();
            for h in &hs {
                parts.push(self.act(h, &self.xp_eval(f, &p.mul(&p.inv(h), &k))?));
            }
            out.insert(k.clone(), self.collect_at(&k, parts)?);
        }
        Ok(out)
    }

    /// `f · ΓgΓ` computed directly: `(f U)(kΓ) = Σ_{hΓ : h⁻¹k ∈ ΓgΓ} f(hΓ)`.
    pub fn hecke_right_direct(&self, f: &Xp<P, B>, g: &P::Elem) -> Result<Xp<P, B>, BundleError> {
        let p = &self.pair;
        let dg = p.dcoset_key(g);
        let gs = p.dcoset_left_cosets(g);
        let mut keys = BTreeSet::new();
        let mut lv = Vec::new();
        for c in f.terms.keys() {
            for h in p.dcoset_left_cosets(c) {
                for t in &gs {
                    keys.insert(p.dcoset_key(&p.mul(&h, t)));
                }
                lv.push(h);
            }
        }
        let mut out = Crossed::zero();
        for k in keys {
            let mut parts = Vec::new();
            for h in &lv {
                if p.dcoset_key(&p.mul(&p.inv(h), &k)) == dg {
                    parts.push(self.xp_eval(f, h)?);
                }
            }
            out.insert(k.clone(), self.collect_at(&k, parts)?);
        }
        Ok(out)
    }

    /// `E_Γ(f**f)` expanded as `Σ c_h* c_h` with `c_h = Δ(h⁻¹)^{1/2} ᾱ_h(f(h⁻¹Γ))`.
    pub fn positivity_terms(&self, f: &Xp<P, B>) -> Result<Vec<Sec<P, B>>, BundleError> {
        let p = &self.pair;
        let mut out = Vec::new();
        for c in f.terms.keys() {
            for h in p.dcoset_left_cosets(&p.inv(c)) {
                let hi = p.inv(&h);
                let v = self.act(&h, &self.xp_eval(f, &hi)?);
                out.push(v.scale(&p.sqrt_delta(&hi)));
            }
        }
        Ok(out)
    }

    /// `Σ c*c` of the given terms, over `Γ`.
    pub fn sum_of_squares(&self, cs: &[Sec<P, B>]) -> Result<Sec<P, B>, BundleError> {
        let parts = cs
            .iter()
            .map(|c| self.dl_mul(&self.star(c), c))
            .collect::<Result<Vec<_>, _>>()?;
        self.collect_at(&self.pair.identity(), parts)
    }

    /// `f = Σ [a]_{xΓ} * ΓcΓ * 1_{s(x)cΓ}` over the stored terms.
    pub fn spanning_decomposition(&self, f: &Xp<P, B>) -> Vec<(Fiber, B::Arrow, P::Elem)> {
        let mut out = Vec::new();
        for (c, s) in &f.terms {
            for (x, a) in s.terms() {
                out.push((a.clone(), x.clone(), c.clone()));
            }
        }
        out
    }

    /// `‖f‖_{τ,L¹} = Σ L(g)‖f(gΓ)‖_τ` over double cosets.
    pub fn xp_l1_norm<F>(&self, f: &Xp<P, B>, fiber_norm: F) -> Norm
    where
        F: Fn(&Sec<P, B>) -> Norm,
    {
        let p = &self.pair;
        let mut n = Norm::zero();
        for (c, s) in &f.terms {
            let m = fiber_norm(s);
            n.add_weighted(m.exact, m.value, &p.left_count(c));
        }
        n
    }

    pub fn xp_to_json(&self, f: &Xp<P, B>) -> Value {
        Value::Array(
            f.terms
                .iter()
                .map(|(c, s)| json!({"dcoset": self.pair.elem_to_json(c), "section": self.section_to_json(s)}))
                .collect(),
        )
    }

    /// Parses `[{"dcoset", "section"}]`; the section is the value at the given representative.
    pub fn xp_from_json(&self, v: &Value) -> Result<Xp<P, B>, String> {
        let items = v.as_array().ok_or_else(|| format!("expected a crossed element array, got {v}"))?;
        let mut out = Crossed::zero();
        for it in items {
            let g = self
                .pair
                .elem_from_json(it.get("dcoset").ok_or("missing \"dcoset\"")?)
                .map_err(|e| e.to_string())?;
            let mut sv = it.get("section").ok_or("missing \"section\"")?.clone();
            if matches!(sv.get("subgroup"), None | Some(Value::Null)) {
                let tag = self.pair.tag(self.pair.gamma_g(&g)).ok_or("Γ^g has no tag")?;
                sv["subgroup"] = Value::Array(tag.iter().map(|t| self.pair.elem_to_json(t)).collect());
            }
            let s = self.section_from_json(&sv)?;
            let term = self.xp_from_value(&g, s).map_err(|e| e.to_string())?;
            out = out.add(&term);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::TrivialLine;
    use crate::hecke;
    use crate::perm::{Perm, PermPair};

    fn s3() -> Setting<PermPair, TrivialLine> {
        Setting::new(PermPair::s3(), TrivialLine)
    }

    #[test]
    fn matrix_units_multiply() {
        let s = s3();
        let cos = s.pair.cosets(s.pair.gamma()).unwrap();
        for g in &cos {
            for h in &cos {
                let t = s.matrix_unit(g, h).unwrap();
                assert_eq!(s.xp_star(&t).unwrap(), s.matrix_unit(h, g).unwrap());
                for k in &cos {
                    for l in &cos {
                        let prod = s.xp_mul(&t, &s.matrix_unit(k, l).unwrap()).unwrap();
                        if h == k {
                            assert_eq!(prod, s.matrix_unit(g, l).unwrap());
                        } else {
                            assert!(prod.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unit_is_neutral() {
        let s = s3();
        let one = s.xp_unit().unwrap();
        let t = s.matrix_unit(&s.pair.identity(), &Perm::from_cycles(3, &[&[1, 3]])).unwrap();
        assert_eq!(s.xp_mul(&one, &t).unwrap(), t);
        assert_eq!(s.xp_mul(&t, &one).unwrap(), t);
        assert_eq!(s.xp_star(&one).unwrap(), one);
    }

    #[test]
    fn eval_uses_transporter() {
        let s = s3();
        let p = &s.pair;
        let g = Perm::from_cycles(3, &[&[1, 3]]);
        let f = s.spanning(vec![RadScalar::one()], &p.identity(), &g).unwrap();
        let t12 = Perm::from_cycles(3, &[&[1, 2]]);
        let at = s.xp_eval(&f, &p.mul(&t12, &g)).unwrap();
        let want = s.act(&t12, &s.xp_eval(&f, &g).unwrap());
        assert_eq!(at, want);
    }

    #[test]
    fn hecke_multipliers_match_direct_formulas() {
        let s = s3();
        let p = &s.pair;
        let g = Perm::from_cycles(3, &[&[1, 3]]);
        let f = s.spanning(vec![RadScalar::from_int(2)], &Perm::from_cycles(3, &[&[2, 3]]), &g).unwrap();
        let u = hecke::basis(p, &g);
        assert_eq!(s.product(Operand::Hecke(&u), Operand::Elem(&f)).unwrap(), s.hecke_left_direct(&g, &f).unwrap());
        assert_eq!(s.product(Operand::Elem(&f), Operand::Hecke(&u)).unwrap(), s.hecke_right_direct(&f, &g).unwrap());
        let id = hecke::unit(p);
        assert_eq!(s.product(Operand::Hecke(&id), Operand::Elem(&f)).unwrap(), f);
    }
}
