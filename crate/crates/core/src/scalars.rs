//! Exact scalars: Gaussian rationals extended by square roots of positive rationals.
//!
//! A [`RadScalar`] is a finite sum `Σ (re + im·i)·√r` over squarefree radicands `r ≥ 1`,
//! kept in a canonical sparse form so that equality is structural.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("square root of a non-positive rational {0}")]
    NonPositive(String),
    #[error("radicand {0} does not fit in 64 bits")]
    RadicandOverflow(String),
    #[error("division by a zero or multi-term scalar")]
    NotInvertible,
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Gauss {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gauss {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gauss { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add_assign(&mut self, o: &Gauss) {
        self.re += &o.re;
        self.im += &o.im;
    }

    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, q: &BigRational) -> Gauss {
        Gauss {
            re: &self.re * q,
            im: &self.im * q,
        }
    }

    fn conj(&self) -> Gauss {
        Gauss {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    fn norm2(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// Exact complex scalar `Σ (re + im·i)·√r`.
///
/// Terms are sorted by radicand and no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RadScalar {
    terms: Vec<(u64, Gauss)>,
}

/// Splits `n` as `a²·r` with `r` squarefree.
pub fn square_split(n: u64) -> (u64, u64) {
    assert!(n > 0, "square_split of zero");
    let mut rest = n;
    let mut sq = 1u64;
    let mut rad = 1u64;
    // Strip primes up to the cube root; what is left has at most two prime factors.
    let mut p = 2u64;
    while p.saturating_mul(p).saturating_mul(p) <= n && rest > 1 {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            sq *= p.pow(e / 2);
            if e % 2 == 1 {
                rad *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let s = rest.isqrt();
        if s * s == rest {
            sq *= s;
        } else {
            rad *= rest;
        }
    }
    (sq, rad)
}

fn big_to_u64(x: &BigInt) -> Result<u64, ScalarError> {
    x.to_u64()
        .ok_or_else(|| ScalarError::RadicandOverflow(x.to_string()))
}

impl RadScalar {
    pub fn zero() -> Self {
        RadScalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::from_gauss(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_gauss(q, BigRational::zero())
    }

    pub fn from_gauss(re: BigRational, im: BigRational) -> Self {
        Self::from_term(1, Gauss { re, im })
    }

    /// `c·√r`; a non-squarefree `r` is normalized.
    pub fn from_term(r: u64, c: Gauss) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let (a, rad) = square_split(r);
        let c = if a == 1 {
            c
        } else {
            c.scale(&BigRational::from_integer(BigInt::from(a)))
        };
        RadScalar {
            terms: vec![(rad, c)],
        }
    }

    fn from_map(map: BTreeMap<u64, Gauss>) -> Self {
        RadScalar {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Builds a scalar from arbitrary `(radicand, coefficient)` terms.
    pub fn from_terms<I: IntoIterator<Item = (u64, Gauss)>>(it: I) -> Self {
        it.into_iter()
            .fold(Self::zero(), |acc, (r, c)| acc + Self::from_term(r, c))
    }

    pub fn terms(&self) -> &[(u64, Gauss)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(1, c)] if c.im.is_zero() => Some(c.re.clone()),
            _ => None,
        }
    }

    /// The value as a Gaussian rational, if it is one.
    pub fn as_gauss(&self) -> Option<Gauss> {
        match self.terms.as_slice() {
            [] => Some(Gauss::default()),
            [(1, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn conj(&self) -> Self {
        RadScalar {
            terms: self.terms.iter().map(|(r, c)| (*r, c.conj())).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RadScalar {
            terms: self.terms.iter().map(|(r, c)| (*r, c.scale(q))).collect(),
        }
    }

    /// `|a|²`, exact.
    pub fn abs2(&self) -> Self {
        self * &self.conj()
    }

    /// `|a|` exactly, when `a` is a single term (then `|a| = √(|c|²·r)`).
    pub fn abs_exact(&self) -> Option<Self> {
        match self.terms.as_slice() {
            [] => Some(Self::zero()),
            [(r, c)] => {
                let q = c.norm2() * BigRational::from_integer(BigInt::from(*r));
                sqrt_pos_rational(&q).ok()
            }
            _ => None,
        }
    }

    /// Inverse of a single-term scalar.
    pub fn inv_single(&self) -> Result<Self, ScalarError> {
        match self.terms.as_slice() {
            [(r, c)] => {
                // 1/(c√r) = conj(c)·√r / (|c|²·r)
                let den = c.norm2() * BigRational::from_integer(BigInt::from(*r));
                let coef = c.conj().scale(&den.recip());
                Ok(RadScalar {
                    terms: vec![(*r, coef)],
                })
            }
            _ => Err(ScalarError::NotInvertible),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (r, c) in &self.terms {
            let s = (*r as f64).sqrt();
            z += Complex64::new(
                c.re.to_f64().unwrap_or(f64::NAN) * s,
                c.im.to_f64().unwrap_or(f64::NAN) * s,
            );
        }
        z
    }

    /// Sign of a real rational value; `None` when irrational or non-real.
    pub fn rational_cmp_zero(&self) -> Option<Ordering> {
        self.as_rational().map(|q| q.cmp(&BigRational::zero()))
    }
}

/// `√q` for a positive rational `q`, as `(a/q')·√r` with `r` squarefree.
pub fn sqrt_pos_rational(q: &BigRational) -> Result<RadScalar, ScalarError> {
    if !q.is_positive() {
        return Err(ScalarError::NonPositive(q.to_string()));
    }
    let p = big_to_u64(q.numer())?;
    let d = big_to_u64(q.denom())?;
    // √(p/d) = √p·√d / d
    let (a, r1) = square_split(p);
    let (b, r2) = square_split(d);
    let g = r1.gcd(&r2);
    let rad = (r1 / g)
        .checked_mul(r2 / g)
        .ok_or_else(|| ScalarError::RadicandOverflow(format!("{r1}*{r2}")))?;
    let coef = BigRational::new(
        BigInt::from(a) * BigInt::from(b) * BigInt::from(g),
        BigInt::from(d),
    );
    Ok(RadScalar::from_term(rad, Gauss::new(coef, BigRational::zero())))
}

impl<'a> Add<&'a RadScalar> for &'a RadScalar {
    type Output = RadScalar;
    fn add(self, o: &RadScalar) -> RadScalar {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let take = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let mut c = self.terms[i].1.clone();
                    c.add_assign(&o.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        RadScalar { terms: out }
    }
}

impl<'a> Mul<&'a RadScalar> for &'a RadScalar {
    type Output = RadScalar;
    fn mul(self, o: &RadScalar) -> RadScalar {
        if self.is_zero() || o.is_zero() {
            return RadScalar::zero();
        }
        if let ([(1, a)], [(r, b)]) | ([(r, b)], [(1, a)]) = (self.terms.as_slice(), o.terms.as_slice()) {
            let c = a.mul(b);
            return if c.is_zero() {
                RadScalar::zero()
            } else {
                RadScalar {
                    terms: vec![(*r, c)],
                }
            };
        }
        let mut acc: BTreeMap<u64, Gauss> = BTreeMap::new();
        for (r, a) in &self.terms {
            for (s, b) in &o.terms {
                let g = r.gcd(s);
                let rad = (r / g)
                    .checked_mul(s / g)
                    .expect("radicand overflow in product");
                let mut c = a.mul(b);
                if g != 1 {
                    c = c.scale(&BigRational::from_integer(BigInt::from(g)));
                }
                acc.entry(rad).or_default().add_assign(&c);
            }
        }
        RadScalar::from_map(acc)
    }
}

impl Neg for &RadScalar {
    type Output = RadScalar;
    fn neg(self) -> RadScalar {
        RadScalar {
            terms: self
                .terms
                .iter()
                .map(|(r, c)| {
                    (
                        *r,
                        Gauss {
                            re: -&c.re,
                            im: -&c.im,
                        },
                    )
                })
                .collect(),
        }
    }
}

impl<'a> Sub<&'a RadScalar> for &'a RadScalar {
    type Output = RadScalar;
    fn sub(self, o: &RadScalar) -> RadScalar {
        self + &(-o)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<RadScalar> for RadScalar {
            type Output = RadScalar;
            fn $m(self, o: RadScalar) -> RadScalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a RadScalar> for RadScalar {
            type Output = RadScalar;
            fn $m(self, o: &RadScalar) -> RadScalar {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for RadScalar {
    type Output = RadScalar;
    fn neg(self) -> RadScalar {
        -&self
    }
}

impl AddAssign<&RadScalar> for RadScalar {
    fn add_assign(&mut self, o: &RadScalar) {
        *self = &*self + o;
    }
}

impl AddAssign for RadScalar {
    fn add_assign(&mut self, o: RadScalar) {
        *self = &*self + &o;
    }
}

impl SubAssign<&RadScalar> for RadScalar {
    fn sub_assign(&mut self, o: &RadScalar) {
        *self = &*self - o;
    }
}

impl std::iter::Sum for RadScalar {
    fn sum<I: Iterator<Item = RadScalar>>(it: I) -> RadScalar {
        it.fold(RadScalar::zero(), |a, b| a + b)
    }
}

impl From<i64> for RadScalar {
    fn from(n: i64) -> Self {
        RadScalar::from_int(n)
    }
}

impl From<BigRational> for RadScalar {
    fn from(q: BigRational) -> Self {
        RadScalar::from_rational(q)
    }
}

fn fmt_gauss(c: &Gauss) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => c.re.to_string(),
        (true, false) => format!("{}i", c.im),
        (false, false) => {
            if c.im.is_negative() {
                format!("({}-{}i)", c.re, -&c.im)
            } else {
                format!("({}+{}i)", c.re, c.im)
            }
        }
    }
}

impl fmt::Display for RadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| {
                if *r == 1 {
                    fmt_gauss(c)
                } else if c.im.is_zero() && c.re.is_one() {
                    format!("√{r}")
                } else {
                    format!("{}·√{}", fmt_gauss(c), r)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn sqrt(n: i64) -> RadScalar {
        sqrt_pos_rational(&q(n, 1)).unwrap()
    }

    #[test]
    fn like_radicands_add() {
        assert_eq!(sqrt(2) + sqrt(2), RadScalar::from_int(2) * sqrt(2));
        assert!((sqrt(2) - sqrt(2)).is_zero());
        let a = RadScalar::from_gauss(q(1, 2), q(1, 1));
        let b = RadScalar::from_gauss(q(1, 2), q(-1, 1));
        assert_eq!(a + b, RadScalar::one());
    }

    #[test]
    fn radicand_products() {
        assert_eq!(sqrt(2) * sqrt(2), RadScalar::from_int(2));
        assert_eq!(sqrt(2) * sqrt(3), sqrt(6));
        assert_eq!(sqrt(6) * sqrt(10), RadScalar::from_int(2) * sqrt(15));
    }

    #[test]
    fn conjugation() {
        let a = RadScalar::i() * sqrt(2);
        assert_eq!(a.conj(), -(RadScalar::i() * sqrt(2)));
        assert_eq!(RadScalar::from_int(3).conj(), RadScalar::from_int(3));
        let b = RadScalar::from_gauss(q(1, 1), q(1, 1)) + RadScalar::i() * sqrt(3);
        let c = RadScalar::from_gauss(q(1, 1), q(-1, 1)) - RadScalar::i() * sqrt(3);
        assert_eq!(b.conj(), c);
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_pos_rational(&q(4, 9)).unwrap(), RadScalar::from_frac(2, 3));
        assert_eq!(sqrt_pos_rational(&q(2, 1)).unwrap(), sqrt(2));
        assert_eq!(
            sqrt_pos_rational(&q(1, 2)).unwrap(),
            RadScalar::from_frac(1, 2) * sqrt(2)
        );
        assert!(sqrt_pos_rational(&q(0, 1)).is_err());
        assert!(sqrt_pos_rational(&q(-3, 1)).is_err());
    }

    #[test]
    fn complex_values() {
        let z = sqrt(2).to_complex();
        assert!((z.re - std::f64::consts::SQRT_2).abs() < 1e-15 && z.im == 0.0);
        assert_eq!(RadScalar::zero().to_complex(), Complex64::new(0.0, 0.0));
        let w = RadScalar::from_gauss(q(1, 1), q(1, 1)).to_complex();
        assert_eq!(w, Complex64::new(1.0, 1.0));
    }

    #[test]
    fn square_split_handles_large_prime_squares() {
        assert_eq!(square_split(1), (1, 1));
        assert_eq!(square_split(72), (6, 2));
        let p = 1_000_003u64;
        assert_eq!(square_split(p * p), (p, 1));
        assert_eq!(square_split(p * 999_983), (1, p * 999_983));
    }

    #[test]
    fn single_term_inverse() {
        let a = RadScalar::from_gauss(q(1, 1), q(2, 1)) * sqrt(3);
        assert_eq!(&a * &a.inv_single().unwrap(), RadScalar::one());
        assert!((sqrt(2) + sqrt(3)).inv_single().is_err());
    }
}
