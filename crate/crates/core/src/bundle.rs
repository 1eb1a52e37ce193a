//! Fell bundles over discrete groupoids with a free right action of the Hecke pair's group,
//! their orbit bundles 𝒜/H and section algebras C_c(𝒜/H), and the embeddings
//! C_c(𝒜/H) → C_c(𝒜/K) that make up the direct limit D(𝒜).
//!
//! Conventions: the point action is on the right, `x ↦ x·g`, and `α_g` maps the fiber over `x`
//! to the fiber over `x·g⁻¹`. A section over `H` stores, for each orbit `xH`, the fiber element
//! at the canonical orbit representative.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde_json::{json, Value};
use thiserror::Error;

use crate::json::{vector_from_json, vector_to_json};
use crate::pair::{HeckePair, PairError};
use crate::scalars::RadScalar;

pub type Fiber = Vec<RadScalar>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error("the action is not free")]
    NotFree,
    #[error("fiber has dimension {got}, expected {want}")]
    Dimension { got: usize, want: usize },
    #[error("section is not invariant under the coarser subgroup")]
    NotInvariant,
    #[error("fibers are not unital")]
    NonUnital,
    #[error("{0}")]
    Invalid(String),
}

/// A Fell bundle over a discrete groupoid together with a free right action of `P`'s group.
pub trait Bundle<P: HeckePair>: Send + Sync {
    type Arrow: Clone + Ord + Hash + Debug + Send + Sync;

    fn describe(&self) -> String;

    fn source(&self, p: &P, x: &Self::Arrow) -> Self::Arrow;
    fn range(&self, p: &P, x: &Self::Arrow) -> Self::Arrow;
    fn inverse(&self, p: &P, x: &Self::Arrow) -> Self::Arrow;
    /// `x·y`, defined iff `s(x) = r(y)`.
    fn compose(&self, p: &P, x: &Self::Arrow, y: &Self::Arrow) -> Option<Self::Arrow>;
    /// Right point action `x·g`.
    fn act(&self, p: &P, x: &Self::Arrow, g: &P::Elem) -> Self::Arrow;

    fn dim(&self, p: &P, x: &Self::Arrow) -> usize;
    /// `α_g : 𝒜_x → 𝒜_{x·g⁻¹}`.
    fn alpha(&self, p: &P, g: &P::Elem, x: &Self::Arrow, a: &[RadScalar]) -> Fiber;
    /// `𝒜_x × 𝒜_y → 𝒜_{xy}` for composable `x, y`.
    fn fiber_mul(&self, p: &P, x: &Self::Arrow, y: &Self::Arrow, a: &[RadScalar], b: &[RadScalar]) -> Fiber;
    /// `𝒜_x → 𝒜_{x⁻¹}`, conjugate linear.
    fn fiber_star(&self, p: &P, x: &Self::Arrow, a: &[RadScalar]) -> Fiber;
    /// Unit of the fiber over a unit `u`, if the fiber is unital.
    fn fiber_unit(&self, p: &P, u: &Self::Arrow) -> Option<Fiber>;

    /// Canonical representative of `xH` and the `k ∈ H` with `x = rep·k`.
    fn orbit_rep(&self, p: &P, x: &Self::Arrow, h: P::Sub) -> (Self::Arrow, P::Elem);
    /// The unique `g` with `u·g = v`, if any (free action).
    fn transporter(&self, p: &P, u: &Self::Arrow, v: &Self::Arrow) -> Option<P::Elem>;

    /// All arrows, when the groupoid is finite.
    fn arrows(&self, p: &P) -> Option<Vec<Self::Arrow>>;
    /// All units, when finite.
    fn units(&self, p: &P) -> Option<Vec<Self::Arrow>>;
    /// `true` when the groupoid has only units and every fiber is ℂ with trivial action.
    fn is_line(&self) -> bool;
    fn is_free(&self) -> bool {
        true
    }

    fn arrow_to_json(&self, p: &P, x: &Self::Arrow) -> Value;
    fn arrow_from_json(&self, p: &P, v: &Value) -> Result<Self::Arrow, String>;
}

/// The trivial line bundle over the set `X = G`, acted on by right translation.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialLine;

impl<P: HeckePair> Bundle<P> for TrivialLine {
    type Arrow = P::Elem;

    fn describe(&self) -> String {
        "trivial line bundle over G with right translation".into()
    }

    fn source(&self, _p: &P, x: &P::Elem) -> P::Elem {
        x.clone()
    }

    fn range(&self, _p: &P, x: &P::Elem) -> P::Elem {
        x.clone()
    }

    fn inverse(&self, _p: &P, x: &P::Elem) -> P::Elem {
        x.clone()
    }

    fn compose(&self, _p: &P, x: &P::Elem, y: &P::Elem) -> Option<P::Elem> {
        (x == y).then(|| x.clone())
    }

    fn act(&self, p: &P, x: &P::Elem, g: &P::Elem) -> P::Elem {
        p.mul(x, g)
    }

    fn dim(&self, _p: &P, _x: &P::Elem) -> usize {
        1
    }

    fn alpha(&self, _p: &P, _g: &P::Elem, _x: &P::Elem, a: &[RadScalar]) -> Fiber {
        a.to_vec()
    }

    fn fiber_mul(&self, _p: &P, _x: &P::Elem, _y: &P::Elem, a: &[RadScalar], b: &[RadScalar]) -> Fiber {
        vec![&a[0] * &b[0]]
    }

    fn fiber_star(&self, _p: &P, _x: &P::Elem, a: &[RadScalar]) -> Fiber {
        vec![a[0].conj()]
    }

    fn fiber_unit(&self, _p: &P, _u: &P::Elem) -> Option<Fiber> {
        Some(vec![RadScalar::one()])
    }

    fn orbit_rep(&self, p: &P, x: &P::Elem, h: P::Sub) -> (P::Elem, P::Elem) {
        let rep = p.coset_key(x, h);
        let k = p.mul(&p.inv(&rep), x);
        (rep, k)
    }

    fn transporter(&self, p: &P, u: &P::Elem, v: &P::Elem) -> Option<P::Elem> {
        Some(p.mul(&p.inv(u), v))
    }

    fn arrows(&self, p: &P) -> Option<Vec<P::Elem>> {
        p.elements().map(<[_]>::to_vec)
    }

    fn units(&self, p: &P) -> Option<Vec<P::Elem>> {
        self.arrows(p)
    }

    fn is_line(&self) -> bool {
        true
    }

    fn arrow_to_json(&self, p: &P, x: &P::Elem) -> Value {
        p.elem_to_json(x)
    }

    fn arrow_from_json(&self, p: &P, v: &Value) -> Result<P::Elem, String> {
        p.elem_from_json(v).map_err(|e| e.to_string())
    }
}

/// An element of C_c(𝒜/H): fiber elements stored at canonical orbit representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section<A: Ord, S> {
    pub sub: S,
    terms: BTreeMap<A, Fiber>,
}

impl<A: Ord + Clone, S: Copy> Section<A, S> {
    pub fn zero(sub: S) -> Self {
        Section { sub, terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<A, Fiber> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_rep(&mut self, rep: A, v: Fiber) {
        if v.iter().all(RadScalar::is_zero) {
            return;
        }
        match self.terms.get_mut(&rep) {
            None => {
                self.terms.insert(rep, v);
            }
            Some(cur) => {
                for (c, x) in cur.iter_mut().zip(v) {
                    *c += x;
                }
                if cur.iter().all(RadScalar::is_zero) {
                    self.terms.remove(&rep);
                }
            }
        }
    }

    pub fn scale(&self, c: &RadScalar) -> Self {
        let mut out = Section::zero(self.sub);
        for (x, v) in &self.terms {
            out.add_rep(x.clone(), v.iter().map(|a| a * c).collect());
        }
        out
    }

    /// Sum of two sections over the same subgroup.
    pub fn add(&self, o: &Self) -> Self
    where
        S: PartialEq + Debug,
    {
        assert_eq!(self.sub, o.sub, "sections live over different subgroups");
        let mut out = self.clone();
        for (x, v) in &o.terms {
            out.add_rep(x.clone(), v.clone());
        }
        out
    }
}

pub type Sec<P, B> = Section<<B as Bundle<P>>::Arrow, <P as HeckePair>::Sub>;

/// A Hecke pair together with a bundle it acts on.
pub struct Setting<P, B> {
    pub pair: P,
    pub bundle: B,
}

impl<P: HeckePair, B: Bundle<P>> Setting<P, B> {
    pub fn new(pair: P, bundle: B) -> Self {
        Setting { pair, bundle }
    }

    fn check_dim(&self, x: &B::Arrow, a: &[RadScalar]) -> Result<(), BundleError> {
        let want = self.bundle.dim(&self.pair, x);
        if a.len() != want {
            return Err(BundleError::Dimension { got: a.len(), want });
        }
        Ok(())
    }

    fn rep_value(&self, x: &B::Arrow, a: Fiber, h: P::Sub) -> (B::Arrow, Fiber) {
        let (rep, k) = self.bundle.orbit_rep(&self.pair, x, h);
        let v = self.bundle.alpha(&self.pair, &k, x, &a);
        (rep, v)
    }

    /// `[a]_{xH}`.
    pub fn single(&self, a: Fiber, x: &B::Arrow, h: P::Sub) -> Result<Sec<P, B>, BundleError> {
        self.check_dim(x, &a)?;
        let mut s = Section::zero(h);
        let (rep, v) = self.rep_value(x, a, h);
        s.add_rep(rep, v);
        Ok(s)
    }

    /// Adds `[a]_{xH}` into `s` (with `H = s.sub`).
    pub fn push(&self, s: &mut Sec<P, B>, a: Fiber, x: &B::Arrow) {
        let (rep, v) = self.rep_value(x, a, s.sub);
        s.add_rep(rep, v);
    }

    /// `1_{uH}` for a unit `u`.
    pub fn unit_at(&self, u: &B::Arrow, h: P::Sub) -> Result<Sec<P, B>, BundleError> {
        let one = self.bundle.fiber_unit(&self.pair, u).ok_or(BundleError::NonUnital)?;
        self.single(one, u, h)
    }

    /// Unit of C_c(𝒜/H), for finite unital bundles.
    pub fn unit(&self, h: P::Sub) -> Result<Sec<P, B>, BundleError> {
        let units = self.bundle.units(&self.pair).ok_or(PairError::NotFinite)?;
        let mut s = Section::zero(h);
        for u in units {
            let (rep, _) = self.bundle.orbit_rep(&self.pair, &u, h);
            if rep == u {
                let one = self.bundle.fiber_unit(&self.pair, &u).ok_or(BundleError::NonUnital)?;
                s.add_rep(u, one);
            }
        }
        Ok(s)
    }

    /// The fiber element of the section at an arbitrary arrow `z`.
    pub fn eval(&self, s: &Sec<P, B>, z: &B::Arrow) -> Fiber {
        let (rep, k) = self.bundle.orbit_rep(&self.pair, z, s.sub);
        match s.terms.get(&rep) {
            Some(v) => self.bundle.alpha(&self.pair, &self.pair.inv(&k), &rep, v),
            None => vec![RadScalar::zero(); self.bundle.dim(&self.pair, z)],
        }
    }

    /// Canonical representative of the orbit `(x·h̃·y)H` when `xH·yH` is defined.
    pub fn orbit_compose(&self, x: &B::Arrow, y: &B::Arrow, h: P::Sub) -> Option<B::Arrow> {
        let p = &self.pair;
        let b = &self.bundle;
        let ht = b.transporter(p, &b.source(p, x), &b.range(p, y))?;
        if !p.contains(h, &ht) {
            return None;
        }
        let z = b.compose(p, &b.act(p, x, &ht), y)?;
        Some(b.orbit_rep(p, &z, h).0)
    }

    /// `[a]_{xH}[b]_{yK} = [α_{h̃⁻¹}(a)b]_{x h̃ y K}` for `K ⊆ H`.
    pub fn mul(&self, f: &Sec<P, B>, g: &Sec<P, B>) -> Result<Sec<P, B>, BundleError> {
        let p = &self.pair;
        let b = &self.bundle;
        if !p.is_subgroup_of(g.sub, f.sub) {
            return Err(PairError::NotContained.into());
        }
        let mut out = Section::zero(g.sub);
        for (x, a) in &f.terms {
            let sx = b.source(p, x);
            for (y, c) in &g.terms {
                let Some(ht) = b.transporter(p, &sx, &b.range(p, y)) else { continue };
                if !p.contains(f.sub, &ht) {
                    continue;
                }
                let xh = b.act(p, x, &ht);
                let Some(z) = b.compose(p, &xh, y) else { continue };
                let a2 = b.alpha(p, &p.inv(&ht), x, a);
                let v = b.fiber_mul(p, &xh, y, &a2, c);
                self.push(&mut out, v, &z);
            }
        }
        Ok(out)
    }

    /// `[a]_{xH}* = [a*]_{x⁻¹H}`.
    pub fn star(&self, f: &Sec<P, B>) -> Sec<P, B> {
        let p = &self.pair;
        let b = &self.bundle;
        let mut out = Section::zero(f.sub);
        for (x, a) in &f.terms {
            let v = b.fiber_star(p, x, a);
            self.push(&mut out, v, &b.inverse(p, x));
        }
        out
    }

    /// `Φ_{H→K}[a]_{xH} = Σ_{[h]∈H/K} [α_{h⁻¹}(a)]_{xhK}`.
    pub fn embed(&self, f: &Sec<P, B>, k: P::Sub) -> Result<Sec<P, B>, BundleError> {
        let p = &self.pair;
        let b = &self.bundle;
        if !b.is_free() {
            return Err(BundleError::NotFree);
        }
        if k == f.sub {
            return Ok(f.clone());
        }
        let hs = p.transversal(f.sub, k)?;
        let mut out = Section::zero(k);
        for (x, a) in &f.terms {
            for h in &hs {
                let v = b.alpha(p, &p.inv(h), x, a);
                self.push(&mut out, v, &b.act(p, x, h));
            }
        }
        Ok(out)
    }

    /// `ᾱ_g[a]_{xH} = [α_g(a)]_{xg⁻¹, gHg⁻¹}`.
    pub fn act(&self, g: &P::Elem, f: &Sec<P, B>) -> Sec<P, B> {
        let p = &self.pair;
        let b = &self.bundle;
        let gi = p.inv(g);
        let mut out = Section::zero(p.conj_sub(g, f.sub));
        for (x, a) in &f.terms {
            let v = b.alpha(p, g, x, a);
            self.push(&mut out, v, &b.act(p, x, &gi));
        }
        out
    }

    /// The section over `H ⊇ f.sub` whose embedding is `f`, if there is one.
    pub fn descend(&self, f: &Sec<P, B>, h: P::Sub) -> Result<Sec<P, B>, BundleError> {
        let p = &self.pair;
        if !p.is_subgroup_of(f.sub, h) {
            return Err(PairError::NotContained.into());
        }
        if f.sub == h {
            return Ok(f.clone());
        }
        let mut out = Section::zero(h);
        for z in f.terms.keys() {
            let (rep, _) = self.bundle.orbit_rep(p, z, h);
            if !out.terms.contains_key(&rep) {
                let v = self.eval(f, &rep);
                out.add_rep(rep, v);
            }
        }
        if self.embed(&out, f.sub)? != *f {
            return Err(BundleError::NotInvariant);
        }
        Ok(out)
    }

    /// Both sections pushed into C_c(𝒜/(H₁∩H₂)).
    pub fn normalize(&self, f1: &Sec<P, B>, f2: &Sec<P, B>) -> Result<(Sec<P, B>, Sec<P, B>), BundleError> {
        let m = self.pair.meet(f1.sub, f2.sub);
        Ok((self.embed(f1, m)?, self.embed(f2, m)?))
    }

    /// Product in D(𝒜), computed over the meet of the two subgroups.
    pub fn dl_mul(&self, f1: &Sec<P, B>, f2: &Sec<P, B>) -> Result<Sec<P, B>, BundleError> {
        if self.pair.is_subgroup_of(f2.sub, f1.sub) {
            return self.mul(f1, f2);
        }
        let (a, b) = self.normalize(f1, f2)?;
        self.mul(&a, &b)
    }

    pub fn dl_add(&self, f1: &Sec<P, B>, f2: &Sec<P, B>) -> Result<Sec<P, B>, BundleError> {
        let (a, b) = self.normalize(f1, f2)?;
        Ok(a.add(&b))
    }

    /// Equality in D(𝒜).
    pub fn dl_eq(&self, f1: &Sec<P, B>, f2: &Sec<P, B>) -> Result<bool, BundleError> {
        if f1.sub == f2.sub {
            return Ok(f1 == f2);
        }
        let (a, b) = self.normalize(f1, f2)?;
        Ok(a == b)
    }

    /// Sup-norm of a section of the trivial line bundle: exact when all moduli are rational.
    pub fn sup_norm(&self, f: &Sec<P, B>) -> crate::hecke::Norm {
        let mut value = 0.0_f64;
        let mut best: Option<num_rational::BigRational> = Some(num_rational::BigRational::from_integer(0.into()));
        for v in f.terms.values() {
            for a in v {
                value = value.max(a.to_complex().norm());
                best = match (best, a.abs_exact().and_then(|m| m.as_rational())) {
                    (Some(b), Some(m)) => Some(if m > b { m } else { b }),
                    _ => None,
                };
            }
        }
        crate::hecke::Norm { exact: best.map(RadScalar::from_rational), value }
    }

    /// All canonical orbit representatives of `X/H`, for finite groupoids.
    pub fn orbit_reps(&self, h: P::Sub) -> Option<Vec<B::Arrow>> {
        let mut reps: Vec<B::Arrow> = self
            .bundle
            .arrows(&self.pair)?
            .iter()
            .map(|x| self.bundle.orbit_rep(&self.pair, x, h).0)
            .collect();
        reps.sort();
        reps.dedup();
        Some(reps)
    }

    /// Unit orbit representatives of `X⁰/H`.
    pub fn unit_orbit_reps(&self, h: P::Sub) -> Option<Vec<B::Arrow>> {
        let mut reps: Vec<B::Arrow> = self
            .bundle
            .units(&self.pair)?
            .iter()
            .map(|x| self.bundle.orbit_rep(&self.pair, x, h).0)
            .collect();
        reps.sort();
        reps.dedup();
        Some(reps)
    }

    pub fn section_to_json(&self, f: &Sec<P, B>) -> Value {
        let p = &self.pair;
        json!({
            "subgroup": p.tag(f.sub).map(|t| Value::Array(t.iter().map(|g| p.elem_to_json(g)).collect())),
            "terms": f.terms.iter().map(|(x, a)| json!({
                "arrow": self.bundle.arrow_to_json(p, x),
                "value": vector_to_json(a),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn section_from_json(&self, v: &Value) -> Result<Sec<P, B>, String> {
        let p = &self.pair;
        let h = match v.get("subgroup") {
            None | Some(Value::Null) => p.gamma(),
            Some(Value::Array(conj)) => {
                let gs = conj
                    .iter()
                    .map(|c| p.elem_from_json(c).map_err(|e| e.to_string()))
                    .collect::<Result<Vec<_>, _>>()?;
                p.sub_from_tag(&gs)
            }
            Some(other) => return Err(format!("bad subgroup tag {other}")),
        };
        let mut s = Section::zero(h);
        for t in v.get("terms").and_then(Value::as_array).ok_or("missing \"terms\" array")? {
            let x = self.bundle.arrow_from_json(p, t.get("arrow").ok_or("missing \"arrow\"")?)?;
            let a = vector_from_json(t.get("value").ok_or("missing \"value\"")?)?;
            self.check_dim(&x, &a).map_err(|e| e.to_string())?;
            self.push(&mut s, a, &x);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bs::{BsElem, BsPair};
    use crate::perm::{Perm, PermPair};

    fn one() -> Fiber {
        vec![RadScalar::one()]
    }

    #[test]
    fn orthogonal_idempotents() {
        let s = Setting::new(PermPair::s3(), TrivialLine);
        let g = s.pair.gamma();
        let u = Perm::from_cycles(3, &[&[1, 3]]);
        let a = s.single(one(), &u, g).unwrap();
        let b = s.single(one(), &s.pair.identity(), g).unwrap();
        assert_eq!(s.mul(&a, &a).unwrap(), a);
        assert!(s.mul(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn s4_embedding_has_three_terms() {
        let s = Setting::new(PermPair::s4(), TrivialLine);
        let p = &s.pair;
        let c = Perm::from_cycles(4, &[&[3, 4]]);
        let k = p.gamma_g(&c);
        let f = s.single(one(), &p.identity(), p.gamma()).unwrap();
        let e = s.embed(&f, k).unwrap();
        assert_eq!(e.terms().len(), 3);
        assert_eq!(s.descend(&e, p.gamma()).unwrap(), f);
    }

    #[test]
    fn action_moves_orbit_and_subgroup() {
        let s = Setting::new(PermPair::s3(), TrivialLine);
        let p = &s.pair;
        let g = Perm::from_cycles(3, &[&[1, 2, 3]]);
        let x = Perm::from_cycles(3, &[&[2, 3]]);
        let f = s.single(one(), &x, p.gamma()).unwrap();
        let moved = s.act(&g, &f);
        let want = s.single(one(), &p.mul(&x, &p.inv(&g)), p.conj_sub(&g, p.gamma())).unwrap();
        assert_eq!(moved, want);
        assert_eq!(s.act(&p.identity(), &f), f);
    }

    #[test]
    fn bs_sections_embed_and_descend() {
        let s = Setting::new(BsPair::new(2).unwrap(), TrivialLine);
        let f = s.single(one(), &BsElem::int(3, 1), 0).unwrap();
        let e = s.embed(&f, 2).unwrap();
        assert_eq!(e.terms().len(), 4);
        assert_eq!(s.descend(&e, 0).unwrap(), f);
        assert_eq!(s.eval(&f, &BsElem::int(7, 1)), one());
    }
}
