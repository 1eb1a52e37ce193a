//! The algebra C_c(X ×_Γ G/Γ) of (Γ×Γ)-invariant functions on `X × G`, its representations
//! `π_x` on ℓ²(G/Γ), and the isomorphism Φ with the crossed product of a trivial line bundle.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::bundle::{Bundle, BundleError, Setting};
use crate::crossed::{Crossed, Xp};
use crate::hecke::{add_into, CosetVector};
use crate::json::{scalar_from_json, scalar_to_json};
use crate::pair::HeckePair;
use crate::scalars::RadScalar;

/// A finitely supported (Γ×Γ)-invariant function, stored by canonical orbit key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lln<X: Ord, E: Ord> {
    terms: BTreeMap<(X, E), RadScalar>,
}

pub type LlnOf<P, B> = Lln<<B as Bundle<P>>::Arrow, <P as HeckePair>::Elem>;

impl<X: Ord + Clone, E: Ord + Clone> Lln<X, E> {
    pub fn zero() -> Self {
        Lln { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<(X, E), RadScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &RadScalar) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            add_into(&mut out.terms, k.clone(), v * c);
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            add_into(&mut out.terms, k.clone(), v.clone());
        }
        out
    }
}

impl<P: HeckePair, B: Bundle<P>> Setting<P, B> {
    fn require_line(&self) -> Result<(), BundleError> {
        if self.bundle.is_line() {
            Ok(())
        } else {
            Err(BundleError::Invalid("the LLN algebra is defined for trivial line bundles".into()))
        }
    }

    /// Canonical key of the orbit of `(x, g)` under `(x,g)(γ₁,γ₂) = (xγ₁, γ₁⁻¹gγ₂)`.
    pub fn lln_key(&self, x: &B::Arrow, g: &P::Elem) -> (B::Arrow, P::Elem) {
        let p = &self.pair;
        let (rep, k) = self.bundle.orbit_rep(p, x, p.gamma());
        (rep, p.coset_key(&p.mul(&k, g), p.gamma()))
    }

    /// `1_{[(x,g)]}`.
    pub fn lln_indicator(&self, x: &B::Arrow, g: &P::Elem) -> LlnOf<P, B> {
        let mut out = Lln::zero();
        out.terms.insert(self.lln_key(x, g), RadScalar::one());
        out
    }

    pub fn lln_eval(&self, f: &LlnOf<P, B>, x: &B::Arrow, g: &P::Elem) -> RadScalar {
        f.terms.get(&self.lln_key(x, g)).cloned().unwrap_or_else(RadScalar::zero)
    }

    /// `(f₁*f₂)(x,g) = Σ_{[h]∈G/Γ} f₁(x,h) f₂(xh, h⁻¹g)`.
    pub fn lln_mul(&self, f1: &LlnOf<P, B>, f2: &LlnOf<P, B>) -> LlnOf<P, B> {
        let p = &self.pair;
        let b = &self.bundle;
        let mut out = Lln::zero();
        for ((x, h), a) in &f1.terms {
            let xh = b.act(p, x, h);
            for ((y, k), c) in &f2.terms {
                let Some(t) = b.transporter(p, &y.clone(), &xh) else { continue };
                // xh = y·t with t ∈ Γ, so (xh, h⁻¹g) ~ (y, t h⁻¹ g) and g ∈ h t⁻¹ k Γ.
                if !p.contains(p.gamma(), &t) {
                    continue;
                }
                let g = p.mul(&p.mul(h, &p.inv(&t)), k);
                add_into(&mut out.terms, self.lln_key(x, &g), a * c);
            }
        }
        out
    }

    /// `f*(x,g) = conj f(xg, g⁻¹)`.
    pub fn lln_star(&self, f: &LlnOf<P, B>) -> LlnOf<P, B> {
        let p = &self.pair;
        let mut out = Lln::zero();
        for ((y, k), a) in &f.terms {
            let x = self.bundle.act(p, y, k);
            add_into(&mut out.terms, self.lln_key(&x, &p.inv(k)), a.conj());
        }
        out
    }

    /// `π_x(f)δ_{hΓ} = Σ_{g∈G/Γ} f(xg, g⁻¹h) δ_{gΓ}`.
    pub fn pi_x_apply(&self, x: &B::Arrow, f: &LlnOf<P, B>, v: &CosetVector<P::Elem>) -> CosetVector<P::Elem> {
        let p = &self.pair;
        let gam = p.gamma();
        let ys: BTreeSet<&B::Arrow> = f.terms.keys().map(|(y, _)| y).collect();
        let mut out = BTreeMap::new();
        for y in ys {
            let Some(g) = self.bundle.transporter(p, x, y) else { continue };
            let gk = p.coset_key(&g, gam);
            for (h, c) in v {
                let val = self.lln_eval(f, y, &p.mul(&p.inv(&g), h));
                if !val.is_zero() {
                    add_into(&mut out, gk.clone(), &val * c);
                }
            }
        }
        out
    }

    /// `Φ(f)(x,g) = Δ(g)^{1/2} f(gΓ)(x)`.
    pub fn phi(&self, f: &Xp<P, B>) -> Result<LlnOf<P, B>, BundleError> {
        self.require_line()?;
        let p = &self.pair;
        let mut out = Lln::zero();
        for (c, s) in f.terms() {
            let w = p.sqrt_delta(c);
            for (x, a) in s.terms() {
                add_into(&mut out.terms, self.lln_key(x, c), &a[0] * &w);
            }
        }
        Ok(out)
    }

    /// `Φ⁻¹(F)(gΓ) = x ↦ Δ(g)^{-1/2} F(x,g)`.
    pub fn phi_inv(&self, f: &LlnOf<P, B>) -> Result<Xp<P, B>, BundleError> {
        self.require_line()?;
        let p = &self.pair;
        let mut out = Crossed::zero();
        for ((x, g), a) in &f.terms {
            let v = a * &p.inv_sqrt_delta(g);
            out = out.add(&self.spanning(vec![v], x, g)?);
        }
        Ok(out)
    }

    pub fn lln_to_json(&self, f: &LlnOf<P, B>) -> Value {
        let p = &self.pair;
        Value::Array(
            f.terms
                .iter()
                .map(|((x, g), a)| {
                    json!({"point": self.bundle.arrow_to_json(p, x), "g": p.elem_to_json(g), "value": scalar_to_json(a)})
                })
                .collect(),
        )
    }

    pub fn lln_from_json(&self, v: &Value) -> Result<LlnOf<P, B>, String> {
        let p = &self.pair;
        let items = v.as_array().ok_or("expected an array of {point, g, value}")?;
        let mut out = Lln::zero();
        for it in items {
            let x = self.bundle.arrow_from_json(p, it.get("point").ok_or("missing \"point\"")?)?;
            let g = p.elem_from_json(it.get("g").ok_or("missing \"g\"")?).map_err(|e| e.to_string())?;
            let a = scalar_from_json(it.get("value").ok_or("missing \"value\"")?)?;
            add_into(&mut out.terms, self.lln_key(&x, &g), a);
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

    #[test]
    fn phi_of_normalized_spanning_element_is_indicator() {
        let s = Setting::new(PermPair::s3(), TrivialLine);
        let p = &s.pair;
        let g = Perm::from_cycles(3, &[&[1, 3]]);
        let x = Perm::from_cycles(3, &[&[2, 3]]);
        let left = s.xp_from_section(&s.unit_at(&x, p.gamma()).unwrap()).unwrap();
        let right = s.xp_from_section(&s.unit_at(&p.mul(&x, &g), p.gamma()).unwrap()).unwrap();
        let u = hecke::basis(p, &g);
        let mid = s.product(crate::crossed::Operand::Elem(&left), crate::crossed::Operand::Hecke(&u)).unwrap();
        let e = s.xp_mul(&mid, &right).unwrap();
        assert_eq!(s.phi(&e.scale(&p.inv_sqrt_delta(&g))).unwrap(), s.lln_indicator(&x, &g));
        assert_eq!(s.phi_inv(&s.phi(&e).unwrap()).unwrap(), e);
    }

    #[test]
    fn star_is_involutive() {
        let s = Setting::new(PermPair::s3(), TrivialLine);
        let f = s
            .lln_indicator(&Perm::from_cycles(3, &[&[1, 2, 3]]), &Perm::from_cycles(3, &[&[1, 3]]))
            .scale(&RadScalar::i());
        assert_eq!(s.lln_star(&s.lln_star(&f)), f);
    }
}
