//! Hecke pairs: group backends with a distinguished Hecke subgroup Γ.
//!
//! A backend knows how to multiply, canonicalize left cosets `gH` and double cosets `ΓgΓ`,
//! and manipulate subgroups in the lattice 𝒞 of finite intersections of conjugates of Γ.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;

use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use thiserror::Error;

use crate::scalars::{sqrt_pos_rational, RadScalar};

pub type Rng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("group has more than {0} elements")]
    TooLarge(usize),
    #[error("subgroup is not contained in the other")]
    NotContained,
    #[error("index is infinite")]
    InfiniteIndex,
    #[error("invalid element: {0}")]
    BadElement(String),
    #[error("operation needs a finite backend")]
    NotFinite,
    #[error("unknown subgroup: {0}")]
    BadSubgroup(String),
}

/// A group together with a Hecke subgroup Γ.
pub trait HeckePair: Send + Sync {
    type Elem: Clone + Ord + Hash + Debug + Send + Sync;
    /// Handle to a subgroup; equal handles denote equal subgroups.
    type Sub: Copy + Ord + Hash + Debug + Send + Sync;

    fn describe(&self) -> String;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn gamma(&self) -> Self::Sub;
    fn contains(&self, h: Self::Sub, g: &Self::Elem) -> bool;
    /// `gHg⁻¹`.
    fn conj_sub(&self, g: &Self::Elem, h: Self::Sub) -> Self::Sub;
    fn meet(&self, a: Self::Sub, b: Self::Sub) -> Self::Sub;
    /// `K ⊆ H`.
    fn is_subgroup_of(&self, k: Self::Sub, h: Self::Sub) -> bool;
    /// `[H : K]` for `K ⊆ H`.
    fn index(&self, h: Self::Sub, k: Self::Sub) -> Result<BigInt, PairError>;
    /// Canonical representatives `h ∈ H` of the left cosets `hK` in `H/K`.
    fn transversal(&self, h: Self::Sub, k: Self::Sub) -> Result<Vec<Self::Elem>, PairError>;

    /// Canonical representative of `gH`.
    fn coset_key(&self, g: &Self::Elem, h: Self::Sub) -> Self::Elem;
    /// Canonical representative of `ΓgΓ`.
    fn dcoset_key(&self, g: &Self::Elem) -> Self::Elem;
    /// Canonical keys of the left cosets `hΓ ⊆ ΓgΓ`, sorted.
    fn dcoset_left_cosets(&self, g: &Self::Elem) -> Vec<Self::Elem>;
    /// `L(g) = |ΓgΓ/Γ|`.
    fn left_count(&self, g: &Self::Elem) -> BigInt {
        BigInt::from(self.dcoset_left_cosets(g).len())
    }
    /// Some `γ ∈ Γ` with `γ·from·Γ = to·Γ`, if `from` and `to` share a double coset.
    fn gamma_transporter(&self, from: &Self::Elem, to: &Self::Elem) -> Option<Self::Elem>;

    /// Conjugator list `g₁,…,gₙ` with `H = ∩ gᵢΓgᵢ⁻¹`; empty for Γ. `None` if `H ∉ 𝒞`.
    fn tag(&self, h: Self::Sub) -> Option<Vec<Self::Elem>>;
    fn sub_from_tag(&self, conj: &[Self::Elem]) -> Self::Sub {
        let g = self.gamma();
        match conj.split_first() {
            None => g,
            Some((first, rest)) => rest.iter().fold(self.conj_sub(first, g), |acc, c| {
                self.meet(acc, self.conj_sub(c, g))
            }),
        }
    }

    /// All elements, for finite backends.
    fn elements(&self) -> Option<&[Self::Elem]>;
    fn sub_elements(&self, h: Self::Sub) -> Option<Vec<Self::Elem>>;
    fn sub_order(&self, h: Self::Sub) -> Option<usize> {
        self.sub_elements(h).map(|v| v.len())
    }
    fn trivial_sub(&self) -> Option<Self::Sub>;
    /// Intersection of all conjugates of Γ.
    fn normal_core(&self) -> Option<Self::Sub>;
    /// Canonical representatives of `G/H`, sorted.
    fn cosets(&self, h: Self::Sub) -> Option<Vec<Self::Elem>>;
    /// Canonical representatives of `Γ\G/Γ`, sorted.
    fn dcosets(&self) -> Option<Vec<Self::Elem>>;

    fn random_elem(&self, rng: &mut Rng) -> Self::Elem;
    fn random_in(&self, h: Self::Sub, rng: &mut Rng) -> Self::Elem;

    fn elem_to_json(&self, g: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem, PairError>;
    fn format_elem(&self, g: &Self::Elem) -> String;

    // Derived quantities.

    fn is_finite(&self) -> bool {
        self.elements().is_some()
    }

    /// `R(g) = L(g⁻¹)`.
    fn right_count(&self, g: &Self::Elem) -> BigInt {
        self.left_count(&self.inv(g))
    }

    /// `Δ(g) = L(g)/R(g)`.
    fn delta(&self, g: &Self::Elem) -> BigRational {
        BigRational::new(self.left_count(g), self.right_count(g))
    }

    fn sqrt_delta(&self, g: &Self::Elem) -> RadScalar {
        sqrt_pos_rational(&self.delta(g)).expect("Δ is positive")
    }

    /// `Δ(g)^{-1/2}`.
    fn inv_sqrt_delta(&self, g: &Self::Elem) -> RadScalar {
        sqrt_pos_rational(&self.delta(g).recip()).expect("Δ is positive")
    }

    /// `Γ^g = Γ ∩ gΓg⁻¹`.
    fn gamma_g(&self, g: &Self::Elem) -> Self::Sub {
        let gam = self.gamma();
        self.meet(gam, self.conj_sub(g, gam))
    }

    fn is_identity(&self, g: &Self::Elem) -> bool {
        *g == self.identity()
    }

    fn same_coset(&self, a: &Self::Elem, b: &Self::Elem, h: Self::Sub) -> bool {
        self.coset_key(a, h) == self.coset_key(b, h)
    }
}

/// `[Γ : Γ^g]`, the coset-count-independent route to `L(g)`.
pub fn gamma_index<P: HeckePair>(p: &P, g: &P::Elem) -> Result<BigInt, PairError> {
    p.index(p.gamma(), p.gamma_g(g))
}

/// Stabilizer of `x` under a right action, by exhaustive search on a finite backend.
pub fn stabilizer<P, X, F>(p: &P, x: &X, act: F) -> Result<Vec<P::Elem>, PairError>
where
    P: HeckePair,
    X: PartialEq,
    F: Fn(&X, &P::Elem) -> X,
{
    let els = p.elements().ok_or(PairError::NotFinite)?;
    Ok(els.iter().filter(|g| act(x, g) == *x).cloned().collect())
}

/// Stabilizer for a free action: always trivial, no search needed.
pub fn free_stabilizer<P: HeckePair>(p: &P) -> Vec<P::Elem> {
    vec![p.identity()]
}

/// `true` if `Δ ≡ 1` is guaranteed (finite backends).
pub fn unimodular<P: HeckePair>(p: &P) -> bool {
    p.is_finite()
}

