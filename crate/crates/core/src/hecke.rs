//! The Hecke algebra ℋ(G,Γ) and its right regular representation on ℓ²(G/Γ).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::json::{scalar_from_json, scalar_to_json};
use crate::matrix::Matrix;
use crate::pair::{HeckePair, PairError};
use crate::scalars::RadScalar;

/// Finitely supported function on `Γ\G/Γ`, keyed by canonical double-coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement<E: Ord> {
    terms: BTreeMap<E, RadScalar>,
}

/// Finitely supported vector in ℓ²(G/Γ), keyed by canonical left-coset representatives.
pub type CosetVector<E> = BTreeMap<E, RadScalar>;

pub(crate) fn add_into<K: Ord>(m: &mut BTreeMap<K, RadScalar>, k: K, v: RadScalar) {
    if v.is_zero() {
        return;
    }
    match m.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl<E: Ord + Clone> HeckeElement<E> {
    pub fn zero() -> Self {
        HeckeElement { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<E, RadScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &E) -> RadScalar {
        self.terms.get(key).cloned().unwrap_or_else(RadScalar::zero)
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

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&RadScalar::from_int(-1)))
    }
}

/// `1_Γ`, the unit of ℋ(G,Γ).
pub fn unit<P: HeckePair>(p: &P) -> HeckeElement<P::Elem> {
    basis(p, &p.identity())
}

/// `1_{ΓgΓ}`.
pub fn basis<P: HeckePair>(p: &P, g: &P::Elem) -> HeckeElement<P::Elem> {
    from_terms(p, [(g.clone(), RadScalar::one())])
}

/// Builds an element from arbitrary representatives, summing duplicates.
pub fn from_terms<P, I>(p: &P, it: I) -> HeckeElement<P::Elem>
where
    P: HeckePair,
    I: IntoIterator<Item = (P::Elem, RadScalar)>,
{
    let mut terms = BTreeMap::new();
    for (g, c) in it {
        add_into(&mut terms, p.dcoset_key(&g), c);
    }
    HeckeElement { terms }
}

/// `f(ΓgΓ)` for an arbitrary representative `g`.
pub fn value<P: HeckePair>(p: &P, f: &HeckeElement<P::Elem>, g: &P::Elem) -> RadScalar {
    f.get(&p.dcoset_key(g))
}

/// Left cosets `hΓ` contained in the support of `f`, with `f(ΓhΓ)`.
fn support_cosets<P: HeckePair>(p: &P, f: &HeckeElement<P::Elem>) -> Vec<(P::Elem, RadScalar)> {
    let mut out = Vec::new();
    for (d, c) in &f.terms {
        for h in p.dcoset_left_cosets(d) {
            out.push((h, c.clone()));
        }
    }
    out
}

/// `(f₁*f₂)(ΓgΓ) = Σ_{hΓ} f₁(ΓhΓ) f₂(Γh⁻¹gΓ)`, with `h` restricted to `supp f₁`.
pub fn convolve<P: HeckePair>(
    p: &P,
    f1: &HeckeElement<P::Elem>,
    f2: &HeckeElement<P::Elem>,
) -> HeckeElement<P::Elem> {
    let left = support_cosets(p, f1);
    let right = support_cosets(p, f2);
    let mut candidates = BTreeSet::new();
    for (h, _) in &left {
        for (k, _) in &right {
            candidates.insert(p.dcoset_key(&p.mul(h, k)));
        }
    }
    let mut out = BTreeMap::new();
    for g in candidates {
        let mut acc = RadScalar::zero();
        for (h, c) in &left {
            let v = f2.terms.get(&p.dcoset_key(&p.mul(&p.inv(h), &g)));
            if let Some(v) = v {
                acc += c * v;
            }
        }
        add_into(&mut out, g, acc);
    }
    HeckeElement { terms: out }
}

/// `f*(ΓgΓ) = Δ(g⁻¹)·conj f(Γg⁻¹Γ)`.
pub fn star<P: HeckePair>(p: &P, f: &HeckeElement<P::Elem>) -> HeckeElement<P::Elem> {
    let mut out = BTreeMap::new();
    for (d, c) in &f.terms {
        let g = p.inv(d);
        let w = RadScalar::from_rational(p.delta(&g).recip());
        add_into(&mut out, p.dcoset_key(&g), c.conj() * w);
    }
    HeckeElement { terms: out }
}

/// An L¹-type norm: exact when every modulus involved is exact, always with a float value.
#[derive(Clone, Debug)]
pub struct Norm {
    pub exact: Option<RadScalar>,
    pub value: f64,
}

impl Norm {
    pub fn zero() -> Self {
        Norm { exact: Some(RadScalar::zero()), value: 0.0 }
    }

    pub fn add_weighted(&mut self, abs: Option<RadScalar>, abs_f: f64, w: &BigInt) {
        let wf: f64 = num_traits::ToPrimitive::to_f64(w).unwrap_or(f64::INFINITY);
        self.value += abs_f * wf;
        self.exact = match (self.exact.take(), abs) {
            (Some(s), Some(a)) => Some(s + a.scale(&BigRational::from_integer(w.clone()))),
            _ => None,
        };
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.exact.as_ref().and_then(RadScalar::as_rational)
    }
}

/// `‖f‖_{L¹} = Σ |f(ΓgΓ)| L(g)`.
pub fn l1_norm<P: HeckePair>(p: &P, f: &HeckeElement<P::Elem>) -> Norm {
    let mut n = Norm::zero();
    for (d, c) in &f.terms {
        n.add_weighted(c.abs_exact(), c.to_complex().norm(), &p.left_count(d));
    }
    n
}

/// `ρ(ΓdΓ)δ_{rΓ} = Δ(d)^{1/2} Σ_{tΓ ⊆ Γd⁻¹Γ} δ_{rtΓ}`, extended linearly.
pub fn rho_apply<P: HeckePair>(
    p: &P,
    f: &HeckeElement<P::Elem>,
    v: &CosetVector<P::Elem>,
) -> CosetVector<P::Elem> {
    let gam = p.gamma();
    let mut out = BTreeMap::new();
    for (d, c) in &f.terms {
        let w = c * &p.sqrt_delta(d);
        let ts = p.dcoset_left_cosets(&p.inv(d));
        for (r, x) in v {
            let wx = &w * x;
            for t in &ts {
                add_into(&mut out, p.coset_key(&p.mul(r, t), gam), wx.clone());
            }
        }
    }
    out
}

/// `δ_{rΓ}`.
pub fn delta_vec<P: HeckePair>(p: &P, r: &P::Elem) -> CosetVector<P::Elem> {
    BTreeMap::from([(p.coset_key(r, p.gamma()), RadScalar::one())])
}

/// Matrix of ρ(f) on `span(basis)` plus the coset keys the image escapes to.
pub struct RhoMatrix<E> {
    pub matrix: Matrix,
    pub escaped: BTreeSet<E>,
}

pub fn rho_matrix<P: HeckePair>(p: &P, f: &HeckeElement<P::Elem>, basis: &[P::Elem]) -> RhoMatrix<P::Elem> {
    let gam = p.gamma();
    let keys: Vec<P::Elem> = basis.iter().map(|b| p.coset_key(b, gam)).collect();
    let pos: BTreeMap<&P::Elem, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let n = keys.len();
    let mut m = Matrix::zeros(n, n);
    let mut escaped = BTreeSet::new();
    for (j, k) in keys.iter().enumerate() {
        for (row, c) in rho_apply(p, f, &delta_vec(p, k)) {
            match pos.get(&row) {
                Some(&i) => m.set(i, j, c),
                None => {
                    escaped.insert(row);
                }
            }
        }
    }
    RhoMatrix { matrix: m, escaped }
}

/// ρ(f) on all of ℓ²(G/Γ), for finite backends.
pub fn rho_full<P: HeckePair>(p: &P, f: &HeckeElement<P::Elem>) -> Result<Matrix, PairError> {
    let cosets = p.cosets(p.gamma()).ok_or(PairError::NotFinite)?;
    Ok(rho_matrix(p, f, &cosets).matrix)
}

/// Recovers `f` from `ρ(f)δ_Γ`: the coefficient at `d⁻¹Γ` is `Δ(d)^{1/2} f(ΓdΓ)`.
pub fn reconstruct_from_rho<P: HeckePair>(p: &P, image: &CosetVector<P::Elem>) -> HeckeElement<P::Elem> {
    let gam = p.gamma();
    let mut seen = BTreeSet::new();
    let mut terms = BTreeMap::new();
    for r in image.keys() {
        let d = p.dcoset_key(&p.inv(r));
        if !seen.insert(d.clone()) {
            continue;
        }
        let at = p.coset_key(&p.inv(&d), gam);
        if let Some(c) = image.get(&at) {
            add_into(&mut terms, d.clone(), c * &p.inv_sqrt_delta(&d));
        }
    }
    HeckeElement { terms }
}

pub fn to_json<P: HeckePair>(p: &P, f: &HeckeElement<P::Elem>) -> Value {
    Value::Array(
        f.terms
            .iter()
            .map(|(d, c)| json!({"dcoset": p.elem_to_json(d), "value": scalar_to_json(c)}))
            .collect(),
    )
}

pub fn from_json<P: HeckePair>(p: &P, v: &Value) -> Result<HeckeElement<P::Elem>, String> {
    let items = v.as_array().ok_or_else(|| format!("expected a Hecke element array, got {v}"))?;
    let mut terms = Vec::with_capacity(items.len());
    for it in items {
        let d = it.get("dcoset").ok_or("missing \"dcoset\"")?;
        let g = p.elem_from_json(d).map_err(|e| e.to_string())?;
        let c = scalar_from_json(it.get("value").ok_or("missing \"value\"")?)?;
        terms.push((g, c));
    }
    Ok(from_terms(p, terms))
}

pub fn vector_to_json<P: HeckePair>(p: &P, v: &CosetVector<P::Elem>) -> Value {
    Value::Array(
        v.iter()
            .map(|(k, c)| json!({"coset": p.elem_to_json(k), "value": scalar_to_json(c)}))
            .collect(),
    )
}

pub fn vector_from_json<P: HeckePair>(p: &P, v: &Value) -> Result<CosetVector<P::Elem>, String> {
    let items = v.as_array().ok_or_else(|| format!("expected a coset vector array, got {v}"))?;
    let mut out = BTreeMap::new();
    for it in items {
        let g = p
            .elem_from_json(it.get("coset").ok_or("missing \"coset\"")?)
            .map_err(|e| e.to_string())?;
        let c = scalar_from_json(it.get("value").ok_or("missing \"value\"")?)?;
        add_into(&mut out, p.coset_key(&g, p.gamma()), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bs::{BsElem, BsPair};
    use crate::perm::{Perm, PermPair};

    fn t13() -> Perm {
        Perm::from_cycles(3, &[&[1, 3]])
    }

    #[test]
    fn s3_t1_squared() {
        let p = PermPair::s3();
        let t = basis(&p, &t13());
        let tt = convolve(&p, &t, &t);
        let want = unit(&p).scale(&RadScalar::from_int(2)).add(&t);
        assert_eq!(tt, want);
    }

    #[test]
    fn unit_is_neutral_and_star_fixes_it() {
        let p = PermPair::s3();
        let t = basis(&p, &t13()).scale(&RadScalar::from_frac(3, 5));
        assert_eq!(convolve(&p, &unit(&p), &t), t);
        assert_eq!(convolve(&p, &t, &unit(&p)), t);
        assert_eq!(star(&p, &unit(&p)), unit(&p));
    }

    #[test]
    fn s3_l1_values() {
        let p = PermPair::s3();
        let t = basis(&p, &t13());
        assert_eq!(l1_norm(&p, &unit(&p)).as_rational(), Some(BigRational::from_integer(1.into())));
        assert_eq!(l1_norm(&p, &t).as_rational(), Some(BigRational::from_integer(2.into())));
        let f = unit(&p).scale(&RadScalar::from_int(3)).add(&t);
        assert_eq!(l1_norm(&p, &f).as_rational(), Some(BigRational::from_integer(5.into())));
    }

    #[test]
    fn s3_rho_of_t1() {
        let p = PermPair::s3();
        let out = rho_apply(&p, &basis(&p, &t13()), &delta_vec(&p, &p.identity()));
        let mut want = delta_vec(&p, &t13());
        want.extend(delta_vec(&p, &Perm::from_cycles(3, &[&[2, 3]])));
        assert_eq!(out, want);
        let m = rho_full(&p, &basis(&p, &t13())).unwrap();
        for i in 0..3 {
            assert!(m.get(i, i).is_zero());
        }
    }

    #[test]
    fn bs_star_scales_by_delta() {
        let p = BsPair::new(2).unwrap();
        let t = basis(&p, &BsElem::int(0, 1));
        let s = star(&p, &t);
        assert_eq!(s, basis(&p, &BsElem::int(0, -1)).scale(&RadScalar::from_int(2)));
        assert_eq!(star(&p, &s), t);
    }

    #[test]
    fn bs_window_escapes() {
        let p = BsPair::new(2).unwrap();
        let mut basis_keys = Vec::new();
        for k in -2..=2 {
            for t in 0..4 {
                basis_keys.push(p.coset_key(&BsElem::int(t, k), 0));
            }
        }
        basis_keys.sort();
        basis_keys.dedup();
        let r = rho_matrix(&p, &basis(&p, &BsElem::int(0, 1)), &basis_keys);
        assert!(!r.escaped.is_empty());
    }
}
