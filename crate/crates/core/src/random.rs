//! Seeded random elements for the property suites.

use rand::seq::IndexedRandom;
use rand::Rng as _;

use crate::bundle::{Bundle, Fiber, Sec, Section, Setting};
use crate::crossed::{Crossed, Xp};
use crate::hecke::{self, HeckeElement};
use crate::lln::{Lln, LlnOf};
use crate::pair::{HeckePair, Rng};
use crate::scalars::RadScalar;

/// Which scalars to draw coefficients from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coeffs {
    /// Integers in `[-3, 3]`.
    Integer,
    /// Gaussian integers `a + bi`, `a ∈ [-3, 3]`, `b ∈ [-2, 2]`.
    Gauss,
}

pub fn scalar(c: Coeffs, rng: &mut Rng) -> RadScalar {
    let re = RadScalar::from_int(rng.random_range(-3..=3));
    match c {
        Coeffs::Integer => re,
        Coeffs::Gauss => re + RadScalar::from_int(rng.random_range(-2..=2)) * RadScalar::i(),
    }
}

fn nonzero_scalar(c: Coeffs, rng: &mut Rng) -> RadScalar {
    loop {
        let s = scalar(c, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn fiber(dim: usize, c: Coeffs, rng: &mut Rng) -> Fiber {
    let mut v: Fiber = (0..dim).map(|_| scalar(c, rng)).collect();
    if dim > 0 && v.iter().all(RadScalar::is_zero) {
        let i = rng.random_range(0..dim);
        v[i] = nonzero_scalar(c, rng);
    }
    v
}

/// Arrows and double-coset keys to draw from. Finite settings use everything; infinite ones
/// are given explicit pools.
pub struct Pools<P: HeckePair, B: Bundle<P>> {
    pub arrows: Vec<B::Arrow>,
    pub dcosets: Vec<P::Elem>,
}

impl<P: HeckePair, B: Bundle<P>> Clone for Pools<P, B> {
    fn clone(&self) -> Self {
        Pools { arrows: self.arrows.clone(), dcosets: self.dcosets.clone() }
    }
}

impl<P: HeckePair, B: Bundle<P>> Pools<P, B> {
    pub fn finite(s: &Setting<P, B>) -> Option<Self> {
        Some(Pools { arrows: s.bundle.arrows(&s.pair)?, dcosets: s.pair.dcosets()? })
    }

    /// Pools for the trivial line bundle over an infinite group: `n` random elements and their
    /// double cosets.
    pub fn sampled(s: &Setting<P, B>, n: usize, rng: &mut Rng) -> Self
    where
        B: Bundle<P, Arrow = P::Elem>,
    {
        let p = &s.pair;
        let arrows: Vec<P::Elem> = (0..n).map(|_| p.random_elem(rng)).collect();
        let mut dcosets: Vec<P::Elem> = arrows.iter().map(|g| p.dcoset_key(g)).collect();
        dcosets.push(p.identity());
        dcosets.sort();
        dcosets.dedup();
        Pools { arrows, dcosets }
    }
}

/// A section over `h` with up to `terms` random terms.
pub fn section<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    h: P::Sub,
    terms: usize,
    c: Coeffs,
    rng: &mut Rng,
) -> Sec<P, B> {
    let mut out = Section::zero(h);
    for _ in 0..terms.max(1) {
        let x = pools.arrows.choose(rng).expect("nonempty arrow pool");
        let a = fiber(s.bundle.dim(&s.pair, x), c, rng);
        s.push(&mut out, a, x);
    }
    out
}

pub fn nonzero_section<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    h: P::Sub,
    terms: usize,
    c: Coeffs,
    rng: &mut Rng,
) -> Sec<P, B> {
    loop {
        let f = section(s, pools, h, terms, c, rng);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn hecke<P: HeckePair>(p: &P, dcosets: &[P::Elem], terms: usize, c: Coeffs, rng: &mut Rng) -> HeckeElement<P::Elem> {
    let it: Vec<(P::Elem, RadScalar)> =
        (0..terms.max(1)).map(|_| (dcosets.choose(rng).expect("nonempty").clone(), nonzero_scalar(c, rng))).collect();
    hecke::from_terms(p, it)
}

/// A crossed-product element on up to `keys` double cosets, each value with up to `terms` terms.
pub fn crossed<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    keys: usize,
    terms: usize,
    c: Coeffs,
    rng: &mut Rng,
) -> Xp<P, B> {
    let mut out = Crossed::zero();
    for _ in 0..keys.max(1) {
        let g = pools.dcosets.choose(rng).expect("nonempty dcoset pool");
        let v = section(s, pools, s.pair.gamma_g(g), terms, c, rng);
        out = out.add(&s.xp_from_value(g, v).expect("value lives over Γ^g"));
    }
    out
}

pub fn nonzero_crossed<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    keys: usize,
    terms: usize,
    c: Coeffs,
    rng: &mut Rng,
) -> Xp<P, B> {
    loop {
        let f = crossed(s, pools, keys, terms, c, rng);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn lln<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pools: &Pools<P, B>,
    terms: usize,
    c: Coeffs,
    rng: &mut Rng,
) -> LlnOf<P, B> {
    let mut out = Lln::zero();
    for _ in 0..terms.max(1) {
        let x = pools.arrows.choose(rng).expect("nonempty arrow pool");
        let g = pools.dcosets.choose(rng).expect("nonempty dcoset pool");
        let gam = s.pair.random_in(s.pair.gamma(), rng);
        let g = s.pair.mul(&gam, g);
        out = out.add(&s.lln_indicator(x, &g).scale(&nonzero_scalar(c, rng)));
    }
    out
}
