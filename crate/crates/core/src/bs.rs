//! The Baumslag–Solitar group BS(1,m) = ℤ[1/m] ⋊ ℤ with Γ = ℤ × {0}.
//!
//! Every subgroup met here is `m^j ℤ × {0}`, so a subgroup is just the exponent `j`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng as _;
use serde_json::{json, Value};

use crate::json::{parse_rational, rational_to_string};
use crate::pair::{HeckePair, PairError, Rng};

/// `(t, k)` with `t ∈ ℤ[1/m]`; product `(t₁,k₁)(t₂,k₂) = (t₁ + m^{k₁}t₂, k₁+k₂)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BsElem {
    pub t: BigRational,
    pub k: i64,
}

impl BsElem {
    pub fn new(t: BigRational, k: i64) -> Self {
        BsElem { t, k }
    }

    pub fn int(t: i64, k: i64) -> Self {
        BsElem {
            t: BigRational::from_integer(t.into()),
            k,
        }
    }
}

impl Ord for BsElem {
    fn cmp(&self, o: &Self) -> Ordering {
        self.k.cmp(&o.k).then_with(|| self.t.cmp(&o.t))
    }
}

impl PartialOrd for BsElem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for BsElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.t, self.k)
    }
}

impl fmt::Debug for BsElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Subgroup `m^j ℤ × {0}`.
pub type BsSub = i64;

pub struct BsPair {
    m: u32,
}

/// Largest coset enumeration we are willing to materialize.
const MAX_COSETS: u64 = 1 << 20;

impl BsPair {
    pub fn new(m: u32) -> Result<Self, PairError> {
        if m < 2 {
            return Err(PairError::BadElement(format!("BS(1,{m}) needs m ≥ 2")));
        }
        Ok(BsPair { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `m^e` as a rational, any sign of `e`.
    pub fn pow(&self, e: i64) -> BigRational {
        let b = BigInt::from(self.m).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            BigRational::from_integer(b)
        } else {
            BigRational::new(BigInt::one(), b)
        }
    }

    /// `t mod L` into `[0, L)`.
    fn reduce(t: &BigRational, l: &BigRational) -> BigRational {
        let q = (t / l).floor();
        t - q * l
    }

    fn is_m_adic(&self, t: &BigRational) -> bool {
        let mut d = t.denom().clone();
        let m = BigInt::from(self.m);
        loop {
            if d.is_one() {
                return true;
            }
            let g = d.gcd(&m);
            if g.is_one() {
                return false;
            }
            d /= g;
        }
    }
}

impl HeckePair for BsPair {
    type Elem = BsElem;
    type Sub = BsSub;

    fn describe(&self) -> String {
        format!("Baumslag-Solitar group BS(1,{}) with Γ = ℤ", self.m)
    }

    fn identity(&self) -> BsElem {
        BsElem::int(0, 0)
    }

    fn mul(&self, a: &BsElem, b: &BsElem) -> BsElem {
        BsElem {
            t: &a.t + self.pow(a.k) * &b.t,
            k: a.k + b.k,
        }
    }

    fn inv(&self, a: &BsElem) -> BsElem {
        BsElem {
            t: -(self.pow(-a.k) * &a.t),
            k: -a.k,
        }
    }

    fn gamma(&self) -> BsSub {
        0
    }

    fn contains(&self, h: BsSub, g: &BsElem) -> bool {
        g.k == 0 && (&g.t / self.pow(h)).is_integer()
    }

    fn conj_sub(&self, g: &BsElem, h: BsSub) -> BsSub {
        // (t,k)(s,0)(t,k)⁻¹ = (m^k s, 0)
        h + g.k
    }

    fn meet(&self, a: BsSub, b: BsSub) -> BsSub {
        a.max(b)
    }

    fn is_subgroup_of(&self, k: BsSub, h: BsSub) -> bool {
        k >= h
    }

    fn index(&self, h: BsSub, k: BsSub) -> Result<BigInt, PairError> {
        if k < h {
            return Err(PairError::NotContained);
        }
        Ok(BigInt::from(self.m).pow((k - h) as u32))
    }

    fn transversal(&self, h: BsSub, k: BsSub) -> Result<Vec<BsElem>, PairError> {
        let n = self.index(h, k)?;
        let n = n.to_u64().filter(|&n| n <= MAX_COSETS).ok_or(PairError::InfiniteIndex)?;
        let step = self.pow(h);
        Ok((0..n)
            .map(|a| BsElem {
                t: &step * BigRational::from_integer(a.into()),
                k: 0,
            })
            .collect())
    }

    fn coset_key(&self, g: &BsElem, h: BsSub) -> BsElem {
        // (t,k)(s,0) = (t + m^k s, k): reduce t modulo m^{k+h} ℤ
        BsElem {
            t: Self::reduce(&g.t, &self.pow(g.k + h)),
            k: g.k,
        }
    }

    fn dcoset_key(&self, g: &BsElem) -> BsElem {
        // ℤ + m^k ℤ = m^{min(k,0)} ℤ
        BsElem {
            t: Self::reduce(&g.t, &self.pow(g.k.min(0))),
            k: g.k,
        }
    }

    fn dcoset_left_cosets(&self, g: &BsElem) -> Vec<BsElem> {
        let d = self.dcoset_key(g);
        if d.k <= 0 {
            return vec![self.coset_key(&d, 0)];
        }
        let n = BigInt::from(self.m).pow(d.k as u32);
        let n = n.to_u64().filter(|&n| n <= MAX_COSETS).expect("too many cosets to list");
        let mut v: Vec<BsElem> = (0..n)
            .map(|a| self.coset_key(&BsElem::new(&d.t + BigRational::from_integer(a.into()), d.k), 0))
            .collect();
        v.sort();
        v
    }

    fn left_count(&self, g: &BsElem) -> BigInt {
        if g.k > 0 {
            BigInt::from(self.m).pow(g.k as u32)
        } else {
            BigInt::one()
        }
    }

    fn gamma_transporter(&self, from: &BsElem, to: &BsElem) -> Option<BsElem> {
        if from.k != to.k {
            return None;
        }
        let diff = &to.t - &from.t;
        if from.k >= 0 {
            // (a + t, k)Γ = (t', k)Γ with a = t' − t ∈ ℤ
            diff.is_integer().then(|| BsElem::new(diff, 0))
        } else {
            self.contains(from.k, &BsElem::new(diff, 0)).then(|| self.identity())
        }
    }

    fn tag(&self, h: BsSub) -> Option<Vec<BsElem>> {
        if h == 0 {
            Some(vec![])
        } else {
            Some(vec![BsElem::int(0, h)])
        }
    }

    fn elements(&self) -> Option<&[BsElem]> {
        None
    }

    fn sub_elements(&self, _h: BsSub) -> Option<Vec<BsElem>> {
        None
    }

    fn trivial_sub(&self) -> Option<BsSub> {
        None
    }

    fn normal_core(&self) -> Option<BsSub> {
        None
    }

    fn cosets(&self, _h: BsSub) -> Option<Vec<BsElem>> {
        None
    }

    fn dcosets(&self) -> Option<Vec<BsElem>> {
        None
    }

    fn random_elem(&self, rng: &mut Rng) -> BsElem {
        let a: i64 = rng.random_range(-6..=6);
        let e: i64 = rng.random_range(0..=2);
        let k: i64 = rng.random_range(-2..=2);
        BsElem::new(BigRational::from_integer(a.into()) * self.pow(-e), k)
    }

    fn random_in(&self, h: BsSub, rng: &mut Rng) -> BsElem {
        let a: i64 = rng.random_range(-6..=6);
        BsElem::new(BigRational::from_integer(a.into()) * self.pow(h), 0)
    }

    fn elem_to_json(&self, g: &BsElem) -> Value {
        json!({"t": rational_to_string(&g.t), "k": g.k})
    }

    fn elem_from_json(&self, v: &Value) -> Result<BsElem, PairError> {
        let t = v
            .get("t")
            .ok_or_else(|| PairError::BadElement(format!("missing \"t\" in {v}")))?;
        let t = match t {
            Value::String(s) => parse_rational(s).map_err(PairError::BadElement)?,
            Value::Number(n) => BigRational::from_integer(
                n.as_i64().ok_or_else(|| PairError::BadElement(n.to_string()))?.into(),
            ),
            _ => return Err(PairError::BadElement(t.to_string())),
        };
        let k = v
            .get("k")
            .and_then(Value::as_i64)
            .ok_or_else(|| PairError::BadElement(format!("missing integer \"k\" in {v}")))?;
        if !self.is_m_adic(&t) {
            return Err(PairError::BadElement(format!("{t} is not in ℤ[1/{}]", self.m)));
        }
        Ok(BsElem::new(t, k))
    }

    fn format_elem(&self, g: &BsElem) -> String {
        g.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_laws_on_generators() {
        let p = BsPair::new(2).unwrap();
        let a = BsElem::int(1, 0);
        let b = BsElem::int(0, 1);
        let ab = p.mul(&a, &b);
        assert_eq!(p.mul(&ab, &p.inv(&ab)), p.identity());
        // b a b⁻¹ = a²
        assert_eq!(p.mul(&p.mul(&b, &a), &p.inv(&b)), BsElem::int(2, 0));
    }

    #[test]
    fn coset_of_five_one() {
        let p = BsPair::new(2).unwrap();
        assert_eq!(p.coset_key(&BsElem::int(5, 1), 0), BsElem::int(1, 1));
        assert_eq!(p.coset_key(&p.identity(), 0), p.identity());
    }

    #[test]
    fn parse_rejects_non_dyadic() {
        let p = BsPair::new(2).unwrap();
        assert!(p.elem_from_json(&json!({"t": "1/3", "k": 0})).is_err());
        assert!(p.elem_from_json(&json!({"t": "3/8", "k": -1})).is_ok());
    }
}
