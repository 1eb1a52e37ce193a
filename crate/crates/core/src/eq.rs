//! Graded *-algebras, the bundle ℬ×G over the groupoid G×G with its dual action, and the
//! quotients ℬ×G/H.
//!
//! Arrows are pairs `(s,t)` with `r(s,t) = (e,st)`, `s(s,t) = (e,t)` and
//! `(s,tr)(t,r) = (st,r)`; the fiber over `(s,t)` is the component `B_s`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::bundle::{Bundle, Fiber};
use crate::json::{vector_from_json, vector_to_json};
use crate::matrix::Matrix;
use crate::pair::HeckePair;
use crate::scalars::RadScalar;

#[derive(Clone, Debug)]
struct Component {
    dim: usize,
    /// `a* = S · conj(a)`, a `dim(B_{s⁻¹}) × dim(B_s)` matrix.
    star: Matrix,
}

/// A finite-dimensional *-algebra graded by the group of a finite Hecke pair.
#[derive(Clone, Debug)]
pub struct GradedAlgebra<E: Ord> {
    comps: BTreeMap<E, Component>,
    /// `mult[(s,t)][i][j]` is the product of basis vectors `i ∈ B_s`, `j ∈ B_t` in `B_{st}`.
    mult: BTreeMap<(E, E), Vec<Vec<Fiber>>>,
    unit: Option<Fiber>,
}

impl<E: Ord + Clone> GradedAlgebra<E> {
    pub fn dim(&self, s: &E) -> usize {
        self.comps.get(s).map_or(0, |c| c.dim)
    }

    pub fn unit(&self) -> Option<&Fiber> {
        self.unit.as_ref()
    }

    pub fn total_dim(&self) -> usize {
        self.comps.values().map(|c| c.dim).sum()
    }

    pub fn grades(&self) -> impl Iterator<Item = &E> {
        self.comps.keys()
    }
}

impl<E: Ord + Clone + std::fmt::Debug> GradedAlgebra<E> {
    /// Product `B_s × B_t → B_{st}`.
    pub fn mul<P: HeckePair<Elem = E>>(&self, p: &P, s: &E, t: &E, a: &[RadScalar], b: &[RadScalar]) -> Fiber {
        let st = p.mul(s, t);
        let n = self.dim(&st);
        let mut out = vec![RadScalar::zero(); n];
        let Some(table) = self.mult.get(&(s.clone(), t.clone())) else { return out };
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, v) in table[i][j].iter().enumerate() {
                    if !v.is_zero() {
                        out[k] += &c * v;
                    }
                }
            }
        }
        out
    }

    /// Involution `B_s → B_{s⁻¹}`.
    pub fn star<P: HeckePair<Elem = E>>(&self, p: &P, s: &E, a: &[RadScalar]) -> Fiber {
        let n = self.dim(&p.inv(s));
        let Some(c) = self.comps.get(s) else { return vec![RadScalar::zero(); n] };
        let mut out = vec![RadScalar::zero(); n];
        for (i, j, v) in c.star.entries() {
            out[i] += v * &a[j].conj();
        }
        out
    }

    /// Checks grading, associativity, and the involution axioms on all basis elements.
    pub fn verify<P: HeckePair<Elem = E>>(&self, p: &P) -> Result<(), String> {
        let grades: Vec<E> = self.comps.keys().cloned().collect();
        let basis = |s: &E, i: usize| {
            let mut v = vec![RadScalar::zero(); self.dim(s)];
            v[i] = RadScalar::one();
            v
        };
        for s in &grades {
            let si = p.inv(s);
            for i in 0..self.dim(s) {
                let e = basis(s, i);
                let back = self.star(p, &si, &self.star(p, s, &e));
                if back != e {
                    return Err(format!("star is not involutive on B_{s:?}[{i}]"));
                }
            }
            for t in &grades {
                for i in 0..self.dim(s) {
                    for j in 0..self.dim(t) {
                        let (a, b) = (basis(s, i), basis(t, j));
                        let ab = self.mul(p, s, t, &a, &b);
                        let lhs = self.star(p, &p.mul(s, t), &ab);
                        let rhs = self.mul(p, &p.inv(t), &si, &self.star(p, t, &b), &self.star(p, s, &a));
                        if lhs != rhs {
                            return Err(format!("(ab)* ≠ b*a* for B_{s:?}[{i}], B_{t:?}[{j}]"));
                        }
                        for u in &grades {
                            for k in 0..self.dim(u) {
                                let c = basis(u, k);
                                let l = self.mul(p, &p.mul(s, t), u, &ab, &c);
                                let r = self.mul(p, s, &p.mul(t, u), &a, &self.mul(p, t, u, &b, &c));
                                if l != r {
                                    return Err(format!("product is not associative at ({s:?},{t:?},{u:?})"));
                                }
                            }
                        }
                    }
                }
            }
        }
        if let Some(one) = &self.unit {
            let e = p.identity();
            for s in &grades {
                for i in 0..self.dim(s) {
                    let a = basis(s, i);
                    if self.mul(p, &e, s, one, &a) != a || self.mul(p, s, &e, &a, one) != a {
                        return Err(format!("unit fails on B_{s:?}[{i}]"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// ℂ[G] graded by G, with orthonormal basis `δ_s`.
pub fn group_algebra<P: HeckePair>(p: &P) -> Result<GradedAlgebra<P::Elem>, String> {
    let els = p.elements().ok_or("group algebra needs a finite group")?.to_vec();
    let mut comps = BTreeMap::new();
    let mut mult = BTreeMap::new();
    for s in &els {
        let mut star = Matrix::zeros(1, 1);
        star.set(0, 0, RadScalar::one());
        comps.insert(s.clone(), Component { dim: 1, star });
        for t in &els {
            mult.insert((s.clone(), t.clone()), vec![vec![vec![RadScalar::one()]]]);
        }
    }
    Ok(GradedAlgebra { comps, mult, unit: Some(vec![RadScalar::one()]) })
}

/// ℂ sitting in degree `e` only; every other component is zero.
pub fn scalars_in_degree_e<P: HeckePair>(p: &P) -> GradedAlgebra<P::Elem> {
    let e = p.identity();
    let mut star = Matrix::zeros(1, 1);
    star.set(0, 0, RadScalar::one());
    GradedAlgebra {
        comps: BTreeMap::from([(e.clone(), Component { dim: 1, star })]),
        mult: BTreeMap::from([((e.clone(), e), vec![vec![vec![RadScalar::one()]]])]),
        unit: Some(vec![RadScalar::one()]),
    }
}

/// `M₂(ℂ)` in degree `e`, with matrix units `E₁₁, E₁₂, E₂₁, E₂₂` as basis.
pub fn matrix_algebra<P: HeckePair>(p: &P, n: usize) -> GradedAlgebra<P::Elem> {
    let e = p.identity();
    let d = n * n;
    let idx = |i: usize, j: usize| i * n + j;
    let mut star = Matrix::zeros(d, d);
    let mut table = vec![vec![vec![RadScalar::zero(); d]; d]; d];
    for i in 0..n {
        for j in 0..n {
            star.set(idx(j, i), idx(i, j), RadScalar::one());
            for l in 0..n {
                table[idx(i, j)][idx(j, l)][idx(i, l)] = RadScalar::one();
            }
        }
    }
    let mut unit = vec![RadScalar::zero(); d];
    for i in 0..n {
        unit[idx(i, i)] = RadScalar::one();
    }
    GradedAlgebra {
        comps: BTreeMap::from([(e.clone(), Component { dim: d, star })]),
        mult: BTreeMap::from([((e.clone(), e), table)]),
        unit: Some(unit),
    }
}

/// Parses `{"components":[{"g","basis"|"dim","mult"|"mult-table":[{"h","table"}],"star"}],"unit"?}`.
pub fn algebra_from_json<P: HeckePair>(p: &P, v: &Value) -> Result<GradedAlgebra<P::Elem>, String> {
    let comps_v = v.get("components").and_then(Value::as_array).ok_or("missing \"components\" array")?;
    let mut comps = BTreeMap::new();
    let mut raw = Vec::new();
    for c in comps_v {
        let g = p.elem_from_json(c.get("g").ok_or("component without \"g\"")?).map_err(|e| e.to_string())?;
        let dim = match (c.get("basis").and_then(Value::as_array), c.get("dim").and_then(Value::as_u64)) {
            (Some(b), _) => b.len(),
            (None, Some(d)) => d as usize,
            (None, None) => return Err("component needs \"basis\" or \"dim\"".into()),
        };
        if comps.contains_key(&g) {
            return Err(format!("duplicate component {}", p.format_elem(&g)));
        }
        comps.insert(g.clone(), Component { dim, star: Matrix::zeros(0, 0) });
        raw.push((g, c));
    }
    let dim = |s: &P::Elem| comps.get(s).map_or(0, |c: &Component| c.dim);
    let mut mult = BTreeMap::new();
    let mut stars = Vec::new();
    for (g, c) in &raw {
        let gi = p.inv(g);
        let sm = c.get("star").and_then(Value::as_array).ok_or("component without \"star\"")?;
        if sm.len() != dim(&gi) {
            return Err(format!("star of {} must have {} rows", p.format_elem(g), dim(&gi)));
        }
        let mut star = Matrix::zeros(dim(&gi), dim(g));
        for (i, row) in sm.iter().enumerate() {
            let row = vector_from_json(row)?;
            if row.len() != dim(g) {
                return Err(format!("star row of {} has wrong length", p.format_elem(g)));
            }
            for (j, x) in row.into_iter().enumerate() {
                star.set(i, j, x);
            }
        }
        stars.push((g.clone(), star));
        let mults = c.get("mult").or_else(|| c.get("mult-table")).and_then(Value::as_array);
        for m in mults.map(Vec::as_slice).unwrap_or(&[]) {
            let h = p.elem_from_json(m.get("h").ok_or("mult entry without \"h\"")?).map_err(|e| e.to_string())?;
            let gh = p.mul(g, &h);
            let rows = m.get("table").and_then(Value::as_array).ok_or("mult entry without \"table\"")?;
            if rows.len() != dim(g) {
                return Err("multiplication table has wrong row count".into());
            }
            let mut table = Vec::new();
            for r in rows {
                let cols = r.as_array().ok_or("table row must be an array")?;
                if cols.len() != dim(&h) {
                    return Err("multiplication table has wrong column count".into());
                }
                let mut trow = Vec::new();
                for c in cols {
                    let v = vector_from_json(c)?;
                    if v.len() != dim(&gh) {
                        return Err(format!("product lands outside B_{}", p.format_elem(&gh)));
                    }
                    trow.push(v);
                }
                table.push(trow);
            }
            mult.insert((g.clone(), h), table);
        }
    }
    for (g, s) in stars {
        comps.get_mut(&g).expect("known component").star = s;
    }
    let unit = match v.get("unit") {
        None | Some(Value::Null) => None,
        Some(u) => Some(vector_from_json(u)?),
    };
    Ok(GradedAlgebra { comps, mult, unit })
}

pub fn algebra_to_json<P: HeckePair>(p: &P, b: &GradedAlgebra<P::Elem>) -> Value {
    let comps: Vec<Value> = b
        .comps
        .iter()
        .map(|(g, c)| {
            let mult: Vec<Value> = b
                .mult
                .iter()
                .filter(|((s, _), _)| s == g)
                .map(|((_, h), t)| {
                    json!({
                        "h": p.elem_to_json(h),
                        "table": t.iter().map(|r| r.iter().map(|v| vector_to_json(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let star: Vec<Value> = (0..c.star.rows())
                .map(|i| vector_to_json(&(0..c.star.cols()).map(|j| c.star.get(i, j)).collect::<Vec<_>>()))
                .collect();
            json!({
                "g": p.elem_to_json(g),
                "basis": (0..c.dim).map(|i| format!("b{i}")).collect::<Vec<_>>(),
                "mult": mult,
                "star": star,
            })
        })
        .collect();
    let mut v = json!({"components": comps});
    if let Some(u) = &b.unit {
        v["unit"] = vector_to_json(u);
    }
    v
}

/// The bundle ℬ×G over G×G with point action `(s,t)g = (s,tg)` and dual action
/// `δ̂_g(a_s,t) = (a_s,tg⁻¹)`.
#[derive(Clone, Debug)]
pub struct EqBundle<E: Ord> {
    pub algebra: GradedAlgebra<E>,
}

impl<E: Ord> EqBundle<E> {
    pub fn new(algebra: GradedAlgebra<E>) -> Self {
        EqBundle { algebra }
    }
}

impl<P: HeckePair> Bundle<P> for EqBundle<P::Elem> {
    type Arrow = (P::Elem, P::Elem);

    fn describe(&self) -> String {
        format!("bundle B×G from a graded algebra of dimension {}", self.algebra.total_dim())
    }

    fn source(&self, p: &P, x: &Self::Arrow) -> Self::Arrow {
        (p.identity(), x.1.clone())
    }

    fn range(&self, p: &P, x: &Self::Arrow) -> Self::Arrow {
        (p.identity(), p.mul(&x.0, &x.1))
    }

    fn inverse(&self, p: &P, x: &Self::Arrow) -> Self::Arrow {
        (p.inv(&x.0), p.mul(&x.0, &x.1))
    }

    fn compose(&self, p: &P, x: &Self::Arrow, y: &Self::Arrow) -> Option<Self::Arrow> {
        (x.1 == p.mul(&y.0, &y.1)).then(|| (p.mul(&x.0, &y.0), y.1.clone()))
    }

    fn act(&self, p: &P, x: &Self::Arrow, g: &P::Elem) -> Self::Arrow {
        (x.0.clone(), p.mul(&x.1, g))
    }

    fn dim(&self, _p: &P, x: &Self::Arrow) -> usize {
        self.algebra.dim(&x.0)
    }

    fn alpha(&self, _p: &P, _g: &P::Elem, _x: &Self::Arrow, a: &[RadScalar]) -> Fiber {
        a.to_vec()
    }

    fn fiber_mul(&self, p: &P, x: &Self::Arrow, y: &Self::Arrow, a: &[RadScalar], b: &[RadScalar]) -> Fiber {
        self.algebra.mul(p, &x.0, &y.0, a, b)
    }

    fn fiber_star(&self, p: &P, x: &Self::Arrow, a: &[RadScalar]) -> Fiber {
        self.algebra.star(p, &x.0, a)
    }

    fn fiber_unit(&self, _p: &P, _u: &Self::Arrow) -> Option<Fiber> {
        self.algebra.unit.clone()
    }

    fn orbit_rep(&self, p: &P, x: &Self::Arrow, h: P::Sub) -> (Self::Arrow, P::Elem) {
        let rep = p.coset_key(&x.1, h);
        let k = p.mul(&p.inv(&rep), &x.1);
        ((x.0.clone(), rep), k)
    }

    fn transporter(&self, p: &P, u: &Self::Arrow, v: &Self::Arrow) -> Option<P::Elem> {
        (u.0 == v.0).then(|| p.mul(&p.inv(&u.1), &v.1))
    }

    fn arrows(&self, p: &P) -> Option<Vec<Self::Arrow>> {
        let els = p.elements()?;
        Some(els.iter().flat_map(|s| els.iter().map(move |t| (s.clone(), t.clone()))).collect())
    }

    fn units(&self, p: &P) -> Option<Vec<Self::Arrow>> {
        let e = p.identity();
        Some(p.elements()?.iter().map(|t| (e.clone(), t.clone())).collect())
    }

    fn is_line(&self) -> bool {
        false
    }

    fn arrow_to_json(&self, p: &P, x: &Self::Arrow) -> Value {
        json!([p.elem_to_json(&x.0), p.elem_to_json(&x.1)])
    }

    fn arrow_from_json(&self, p: &P, v: &Value) -> Result<Self::Arrow, String> {
        match v.as_array().map(Vec::as_slice) {
            Some([s, t]) => Ok((
                p.elem_from_json(s).map_err(|e| e.to_string())?,
                p.elem_from_json(t).map_err(|e| e.to_string())?,
            )),
            _ => Err(format!("arrow must be a pair [s, t], got {v}")),
        }
    }
}

/// Dual action on a fiber element: `δ̂_g(a_s, t) = (a_s, tg⁻¹)`.
pub fn dual_action<P: HeckePair>(
    p: &P,
    g: &P::Elem,
    x: &(P::Elem, P::Elem),
    a: &[RadScalar],
) -> ((P::Elem, P::Elem), Fiber) {
    ((x.0.clone(), p.mul(&x.1, &p.inv(g))), a.to_vec())
}

/// The directly constructed bundle ℬ×G/H: arrows `(s, tH)`, `(b_s,trH)(c_t,rH) = ((bc)_{st},rH)`.
pub struct Quotient<'a, P: HeckePair> {
    pub pair: &'a P,
    pub algebra: &'a GradedAlgebra<P::Elem>,
    pub sub: P::Sub,
}

impl<'a, P: HeckePair> Quotient<'a, P> {
    pub fn arrows(&self) -> Option<Vec<(P::Elem, P::Elem)>> {
        let els = self.pair.elements()?;
        let cosets = self.pair.cosets(self.sub)?;
        Some(els.iter().flat_map(|s| cosets.iter().map(move |c| (s.clone(), c.clone()))).collect())
    }

    /// `(s, aH)·(t, bH)`, defined iff `aH = t·bH`.
    pub fn compose(&self, x: &(P::Elem, P::Elem), y: &(P::Elem, P::Elem)) -> Option<(P::Elem, P::Elem)> {
        let p = self.pair;
        p.same_coset(&x.1, &p.mul(&y.0, &y.1), self.sub)
            .then(|| (p.mul(&x.0, &y.0), y.1.clone()))
    }

    pub fn inverse(&self, x: &(P::Elem, P::Elem)) -> (P::Elem, P::Elem) {
        let p = self.pair;
        (p.inv(&x.0), p.coset_key(&p.mul(&x.0, &x.1), self.sub))
    }

    pub fn fiber_mul(&self, x: &(P::Elem, P::Elem), y: &(P::Elem, P::Elem), a: &[RadScalar], b: &[RadScalar]) -> Fiber {
        self.algebra.mul(self.pair, &x.0, &y.0, a, b)
    }

    pub fn fiber_star(&self, x: &(P::Elem, P::Elem), a: &[RadScalar]) -> Fiber {
        self.algebra.star(self.pair, &x.0, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{Perm, PermPair};

    fn z2() -> PermPair {
        let c = Perm::from_cycles(2, &[&[1, 2]]);
        PermPair::new(2, vec![c], vec![]).unwrap()
    }

    #[test]
    fn presets_verify() {
        let p = z2();
        group_algebra(&p).unwrap().verify(&p).unwrap();
        scalars_in_degree_e(&p).verify(&p).unwrap();
        let t = PermPair::new(1, vec![], vec![]).unwrap();
        let m2 = matrix_algebra(&t, 2);
        m2.verify(&t).unwrap();
        assert_eq!(m2.total_dim(), 4);
    }

    #[test]
    fn z2_product_display() {
        let p = z2();
        let b = EqBundle::new(group_algebra(&p).unwrap());
        let c = Perm::from_cycles(2, &[&[1, 2]]);
        let e = p.identity();
        // (c, c·r)(c, r) = (e, r)
        let x = (c.clone(), p.mul(&c, &e));
        let y = (c.clone(), e.clone());
        let z = b.compose(&p, &x, &y).unwrap();
        assert_eq!(z, (e.clone(), e.clone()));
        let one = vec![RadScalar::one()];
        assert_eq!(b.fiber_mul(&p, &x, &y, &one, &one), one);
    }

    #[test]
    fn json_roundtrip() {
        let p = PermPair::s3();
        let a = group_algebra(&p).unwrap();
        let v = algebra_to_json(&p, &a);
        let back = algebra_from_json(&p, &v).unwrap();
        assert_eq!(algebra_to_json(&p, &back), v);
        back.verify(&p).unwrap();
    }
}
