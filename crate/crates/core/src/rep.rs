//! Finite-dimensional representations: π on D(𝒜), π_α, 1⊗ρ, the integrated form of the regular
//! covariant representation, σ-compressions, π^K, and covariant pairs of C₀(G/Γ) and ℋ(G,Γ).
//!
//! Tensor products `ℋ ⊗ ℓ²(I)` are indexed `i·dim(ℋ) + k`, with `i` the coset/orbit index.

use std::collections::BTreeMap;

use rand::Rng as _;

use crate::bundle::{Bundle, BundleError, Sec, Section, Setting};
use crate::crossed::Xp;
use crate::hecke::{self, HeckeElement};
use crate::matrix::Matrix;
use crate::pair::{HeckePair, PairError, Rng};
use crate::scalars::RadScalar;

/// A representation of D(𝒜) on a finite-dimensional space.
#[derive(Debug)]
pub enum FiniteRep<P: HeckePair, B: Bundle<P>> {
    /// Left multiplication on C_c(𝒜/L) with the fiber bases taken orthonormal. Acts on sections
    /// over any `H ⊇ L` through the embedding.
    Regular { level: P::Sub, basis: Vec<(B::Arrow, usize)>, index: BTreeMap<B::Arrow, usize> },
    /// `φ_x(f) = f(x)` on a trivial line bundle.
    Eval { x: B::Arrow },
    /// `π ⊗ 1_m`.
    Amplified { base: Box<FiniteRep<P, B>>, m: usize },
    /// `U π(·) U*`.
    Conjugated { base: Box<FiniteRep<P, B>>, u: Matrix },
}

impl<P: HeckePair, B: Bundle<P>> Clone for FiniteRep<P, B> {
    fn clone(&self) -> Self {
        match self {
            FiniteRep::Regular { level, basis, index } => {
                FiniteRep::Regular { level: *level, basis: basis.clone(), index: index.clone() }
            }
            FiniteRep::Eval { x } => FiniteRep::Eval { x: x.clone() },
            FiniteRep::Amplified { base, m } => FiniteRep::Amplified { base: base.clone(), m: *m },
            FiniteRep::Conjugated { base, u } => FiniteRep::Conjugated { base: base.clone(), u: u.clone() },
        }
    }
}

impl<P: HeckePair, B: Bundle<P>> FiniteRep<P, B> {
    pub fn regular(s: &Setting<P, B>, level: P::Sub) -> Result<Self, BundleError> {
        let reps = s.orbit_reps(level).ok_or(PairError::NotFinite)?;
        let mut basis = Vec::new();
        let mut index = BTreeMap::new();
        for x in reps {
            index.insert(x.clone(), basis.len());
            for i in 0..s.bundle.dim(&s.pair, &x) {
                basis.push((x.clone(), i));
            }
        }
        Ok(FiniteRep::Regular { level, basis, index })
    }

    /// Regular representation at the normal core, which is faithful on D(𝒜) for unital bundles.
    pub fn faithful(s: &Setting<P, B>) -> Result<Self, BundleError> {
        let n = s.pair.normal_core().ok_or(PairError::NotFinite)?;
        Self::regular(s, n)
    }

    pub fn eval(s: &Setting<P, B>, x: B::Arrow) -> Result<Self, BundleError> {
        if !s.bundle.is_line() {
            return Err(BundleError::Invalid("evaluation representations need a trivial line bundle".into()));
        }
        Ok(FiniteRep::Eval { x })
    }

    pub fn amplify(self, m: usize) -> Self {
        FiniteRep::Amplified { base: Box::new(self), m }
    }

    pub fn conjugate(self, u: Matrix) -> Self {
        FiniteRep::Conjugated { base: Box::new(self), u }
    }

    pub fn dim(&self) -> usize {
        match self {
            FiniteRep::Regular { basis, .. } => basis.len(),
            FiniteRep::Eval { .. } => 1,
            FiniteRep::Amplified { base, m } => base.dim() * m,
            FiniteRep::Conjugated { base, .. } => base.dim(),
        }
    }

    pub fn apply(&self, s: &Setting<P, B>, f: &Sec<P, B>) -> Result<Matrix, BundleError> {
        match self {
            FiniteRep::Regular { level, basis, index } => {
                let g = s.embed(f, *level)?;
                let n = basis.len();
                let mut m = Matrix::zeros(n, n);
                for (j, (x, i)) in basis.iter().enumerate() {
                    let mut a = vec![RadScalar::zero(); s.bundle.dim(&s.pair, x)];
                    a[*i] = RadScalar::one();
                    let e = s.single(a, x, *level)?;
                    let img = s.mul(&g, &e)?;
                    for (y, v) in img.terms() {
                        let base = index[y];
                        for (k, c) in v.iter().enumerate() {
                            m.set(base + k, j, c.clone());
                        }
                    }
                }
                Ok(m)
            }
            FiniteRep::Eval { x } => {
                let mut m = Matrix::zeros(1, 1);
                m.set(0, 0, s.eval(f, x)[0].clone());
                Ok(m)
            }
            FiniteRep::Amplified { base, m } => Ok(base.apply(s, f)?.kron(&Matrix::identity(*m))),
            FiniteRep::Conjugated { base, u } => Ok(u.mul(&base.apply(s, f)?).mul(&u.adjoint())),
        }
    }

    /// Reads back a section over `h` from `π(f)`, for the regular representation of a unital bundle.
    pub fn recover(&self, s: &Setting<P, B>, image: &Matrix, h: P::Sub) -> Result<Sec<P, B>, BundleError> {
        let FiniteRep::Regular { level, basis, index } = self else {
            return Err(BundleError::Invalid("only the regular representation can be inverted".into()));
        };
        let one = s.unit(*level)?;
        let mut v = vec![RadScalar::zero(); basis.len()];
        for (x, a) in one.terms() {
            for (k, c) in a.iter().enumerate() {
                v[index[x] + k] = c.clone();
            }
        }
        let mut out = Section::zero(*level);
        let mut fiber: BTreeMap<B::Arrow, Vec<RadScalar>> = BTreeMap::new();
        for (row, (x, k)) in basis.iter().enumerate() {
            let mut acc = RadScalar::zero();
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    acc += &image.get(row, j) * vj;
                }
            }
            let e = fiber.entry(x.clone()).or_insert_with(|| vec![RadScalar::zero(); s.bundle.dim(&s.pair, x)]);
            e[*k] = acc;
        }
        for (x, a) in fiber {
            if a.iter().any(|c| !c.is_zero()) {
                s.push(&mut out, a, &x);
            }
        }
        s.descend(&out, h)
    }

    /// `π(1)` has full rank.
    pub fn is_nondegenerate(&self, s: &Setting<P, B>) -> Result<bool, BundleError> {
        let one = s.unit(s.pair.gamma())?;
        Ok(self.apply(s, &one)?.rank(1e-9) == self.dim())
    }
}

/// Coset representatives of `G/Γ` and the lookup from coset keys to their index.
pub struct Cosets<E> {
    pub reps: Vec<E>,
    pos: BTreeMap<E, usize>,
}

impl<E: Ord + Clone> Cosets<E> {
    pub fn of<P: HeckePair<Elem = E>>(p: &P) -> Result<Self, PairError> {
        let reps = p.cosets(p.gamma()).ok_or(PairError::NotFinite)?;
        let pos = reps.iter().enumerate().map(|(i, r)| (p.coset_key(r, p.gamma()), i)).collect();
        Ok(Cosets { reps, pos })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn index<P: HeckePair<Elem = E>>(&self, p: &P, g: &E) -> usize {
        self.pos[&p.coset_key(g, p.gamma())]
    }
}

/// `π_α(f)(ξ⊗δ_{hΓ}) = π(ᾱ_h(f))ξ ⊗ δ_{hΓ}`.
pub fn pi_alpha<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pi: &FiniteRep<P, B>,
    f: &Sec<P, B>,
) -> Result<Matrix, BundleError> {
    let cos = Cosets::of(&s.pair)?;
    let d = pi.dim();
    let mut m = Matrix::zeros(d * cos.len(), d * cos.len());
    for (i, h) in cos.reps.iter().enumerate() {
        m.add_block(i * d, i * d, &pi.apply(s, &s.act(h, f))?);
    }
    Ok(m)
}

/// `1 ⊗ ρ(f)`.
pub fn one_tensor_rho<P: HeckePair>(p: &P, f: &HeckeElement<P::Elem>, d: usize) -> Result<Matrix, PairError> {
    Ok(hecke::rho_full(p, f)?.kron(&Matrix::identity(d)))
}

/// `[π_α×(1⊗ρ)](f)`: block `(gΓ, hΓ)` is `Δ(g⁻¹h)^{1/2} π(ᾱ_g(f(g⁻¹hΓ)))`.
pub fn integrated_form<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pi: &FiniteRep<P, B>,
    f: &Xp<P, B>,
) -> Result<Matrix, BundleError> {
    let p = &s.pair;
    let cos = Cosets::of(p)?;
    let d = pi.dim();
    let mut m = Matrix::zeros(d * cos.len(), d * cos.len());
    for (i, g) in cos.reps.iter().enumerate() {
        for (j, h) in cos.reps.iter().enumerate() {
            let k = p.mul(&p.inv(g), h);
            if !f.terms().contains_key(&p.dcoset_key(&k)) {
                continue;
            }
            let v = s.act(g, &s.xp_eval(f, &k)?);
            let block = pi.apply(s, &v)?.scale(&p.sqrt_delta(&k));
            m.add_block(i * d, j * d, &block);
        }
    }
    Ok(m)
}

/// The integrated form computed from the spanning decomposition
/// `f = Σ [a]_{xΓ} * ΓcΓ * 1_{s(x)cΓ}` as `Σ π_α([a]_{xΓ}) (1⊗ρ)(ΓcΓ) π_α(1_{s(x)cΓ})`.
pub fn integrated_form_by_spanning<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pi: &FiniteRep<P, B>,
    f: &Xp<P, B>,
) -> Result<Matrix, BundleError> {
    let p = &s.pair;
    let b = &s.bundle;
    let cos = Cosets::of(p)?;
    let n = pi.dim() * cos.len();
    let mut m = Matrix::zeros(n, n);
    for (a, x, c) in s.spanning_decomposition(f) {
        let left = pi_alpha(s, pi, &s.single(a, &x, p.gamma())?)?;
        let mid = one_tensor_rho(p, &hecke::basis(p, &c), pi.dim())?;
        let u = b.act(p, &b.source(p, &x), &c);
        let right = pi_alpha(s, pi, &s.unit_at(&u, p.gamma())?)?;
        m = m.add(&left.mul(&mid).mul(&right));
    }
    Ok(m)
}

/// `σ*_{gΓ} M σ_{hΓ}`: the `(gΓ, hΓ)` block of an operator on `ℋ ⊗ ℓ²(G/Γ)`.
pub fn compress<P: HeckePair>(p: &P, m: &Matrix, d: usize, g: &P::Elem, h: &P::Elem) -> Result<Matrix, PairError> {
    let cos = Cosets::of(p)?;
    Ok(m.block(cos.index(p, g) * d, cos.index(p, h) * d, d, d))
}

/// Both sides of `σ*_g [π×(1⊗ρ)](f) σ_h = Δ(g⁻¹h)^{1/2} π(ᾱ_g(E_{g⁻¹hΓ}(f)))`; the left side
/// comes from the spanning route so the two are computed independently.
pub fn sigma_compress<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pi: &FiniteRep<P, B>,
    f: &Xp<P, B>,
    g: &P::Elem,
    h: &P::Elem,
) -> Result<(Matrix, Matrix), BundleError> {
    let p = &s.pair;
    let full = integrated_form_by_spanning(s, pi, f)?;
    let lhs = compress(p, &full, pi.dim(), g, h)?;
    let k = p.mul(&p.inv(g), h);
    let e = s.expectation(f, &k)?;
    let rhs = pi.apply(s, &s.act(g, &e))?.scale(&p.sqrt_delta(&k));
    Ok((lhs, rhs))
}

/// Recovers `f` from the `gΓ = Γ` block row of its integrated form under a regular `π`.
pub fn reconstruct<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pi: &FiniteRep<P, B>,
    image: &Matrix,
) -> Result<Xp<P, B>, BundleError> {
    let p = &s.pair;
    let d = pi.dim();
    let dcosets = p.dcosets().ok_or(PairError::NotFinite)?;
    let mut out = crate::crossed::Crossed::zero();
    let e = p.identity();
    for c in dcosets {
        let block = compress(p, image, d, &e, &c)?;
        if block.is_zero() {
            continue;
        }
        let v = pi.recover(s, &block.scale(&p.inv_sqrt_delta(&c)), p.gamma_g(&c))?;
        out = out.add(&s.xp_from_value(&c, v)?);
    }
    Ok(out)
}

/// Operator norm of the integrated form.
pub fn reduced_norm<P: HeckePair, B: Bundle<P>>(
    s: &Setting<P, B>,
    pi: &FiniteRep<P, B>,
    f: &Xp<P, B>,
) -> Result<f64, BundleError> {
    Ok(integrated_form(s, pi, f)?.op_norm())
}

/// `π^K` for a representation `π` of C_c(𝒜/H), acting on `ℋ ⊗ ℓ²(X⁰/K)`.
pub struct PiK<'a, P: HeckePair, B: Bundle<P>> {
    pub pi: &'a FiniteRep<P, B>,
    pub h: P::Sub,
    pub k: P::Sub,
    units: Vec<B::Arrow>,
    pos: BTreeMap<B::Arrow, usize>,
}

impl<'a, P: HeckePair, B: Bundle<P>> PiK<'a, P, B> {
    pub fn new(s: &Setting<P, B>, pi: &'a FiniteRep<P, B>, h: P::Sub, k: P::Sub) -> Result<Self, BundleError> {
        if !s.pair.is_subgroup_of(k, h) {
            return Err(PairError::NotContained.into());
        }
        let units = s.unit_orbit_reps(k).ok_or(PairError::NotFinite)?;
        let pos = units.iter().enumerate().map(|(i, u)| (u.clone(), i)).collect();
        Ok(PiK { pi, h, k, units, pos })
    }

    pub fn dim(&self) -> usize {
        self.pi.dim() * self.units.len()
    }

    fn orbit_index(&self, s: &Setting<P, B>, u: &B::Arrow) -> usize {
        self.pos[&s.bundle.orbit_rep(&s.pair, u, self.k).0]
    }

    /// `π^K([a]_{xK})(ξ⊗δ_{uK}) = π([a]_{xH})ξ ⊗ δ_{r(x)K}` when `uK = s(x)K`.
    pub fn apply(&self, s: &Setting<P, B>, f: &Sec<P, B>) -> Result<Matrix, BundleError> {
        let p = &s.pair;
        let b = &s.bundle;
        let f = s.embed(f, self.k)?;
        let d = self.pi.dim();
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (x, a) in f.terms() {
            let img = self.pi.apply(s, &s.single(a.clone(), x, self.h)?)?;
            let col = self.orbit_index(s, &b.source(p, x));
            let row = self.orbit_index(s, &b.range(p, x));
            m.add_block(row * d, col * d, &img);
        }
        Ok(m)
    }

    /// `δ_{uH} = Σ_{[h]∈H/K} δ_{uhK}` as a column vector in `ℓ²(X⁰/K)`.
    pub fn delta_uh(&self, s: &Setting<P, B>, u: &B::Arrow) -> Result<Vec<RadScalar>, BundleError> {
        let mut v = vec![RadScalar::zero(); self.units.len()];
        for t in s.pair.transversal(self.h, self.k)? {
            v[self.orbit_index(s, &s.bundle.act(&s.pair, u, &t))] += RadScalar::one();
        }
        Ok(v)
    }

    /// Checks `π^K([a]_{xH})(ξ⊗δ_{uH}) = π([a]_{xH})ξ ⊗ δ_{r(x)H}` (or 0 when `uH ≠ s(x)H`) for
    /// every basis vector `ξ` and every unit `u`.
    pub fn check_lemma(&self, s: &Setting<P, B>, a: &[RadScalar], x: &B::Arrow) -> Result<bool, BundleError> {
        let p = &s.pair;
        let b = &s.bundle;
        let sec = s.single(a.to_vec(), x, self.h)?;
        let lhs_op = self.apply(s, &sec)?;
        let pix = self.pi.apply(s, &sec)?;
        let d = self.pi.dim();
        let sx = b.orbit_rep(p, &b.source(p, x), self.h).0;
        let hunits = s.unit_orbit_reps(self.h).ok_or(PairError::NotFinite)?;
        for u in &hunits {
            let du = column(&self.delta_uh(s, u)?);
            let want_zero = b.orbit_rep(p, u, self.h).0 != sx;
            let target = if want_zero {
                Matrix::zeros(self.dim(), d)
            } else {
                column(&self.delta_uh(s, &b.range(p, x))?).kron(&pix)
            };
            if lhs_op.mul(&du.kron(&Matrix::identity(d))) != target {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn column(v: &[RadScalar]) -> Matrix {
    let mut m = Matrix::zeros(v.len(), 1);
    for (i, c) in v.iter().enumerate() {
        m.set(i, 0, c.clone());
    }
    m
}

/// A pair of representations of C₀(G/Γ) (by its coset indicators) and ℋ(G,Γ) (by its double
/// coset basis) on the same space.
#[derive(Clone, Debug)]
pub struct CovariantPair<E: Ord> {
    pub dim: usize,
    /// `π(1_{gΓ})`, indexed like `Cosets::reps`.
    pub pi: Vec<Matrix>,
    /// `μ(ΓgΓ)` by canonical double coset key.
    pub mu: BTreeMap<E, Matrix>,
}

impl<E: Ord + Clone> CovariantPair<E> {
    /// `(M, ρ)` on `ℓ²(G/Γ)`.
    pub fn standard<P: HeckePair<Elem = E>>(p: &P) -> Result<Self, PairError> {
        let cos = Cosets::of(p)?;
        let n = cos.len();
        let pi = (0..n)
            .map(|i| {
                let mut m = Matrix::zeros(n, n);
                m.set(i, i, RadScalar::one());
                m
            })
            .collect();
        let mut mu = BTreeMap::new();
        for d in p.dcosets().ok_or(PairError::NotFinite)? {
            mu.insert(d.clone(), hecke::rho_full(p, &hecke::basis(p, &d))?);
        }
        Ok(CovariantPair { dim: n, pi, mu })
    }

    /// `(1⊗π, 1⊗μ)` on `ℂ^m ⊗ ℋ`.
    pub fn amplify(&self, m: usize) -> Self {
        let id = Matrix::identity(m);
        CovariantPair {
            dim: self.dim * m,
            pi: self.pi.iter().map(|x| id.kron(x)).collect(),
            mu: self.mu.iter().map(|(k, x)| (k.clone(), id.kron(x))).collect(),
        }
    }

    pub fn conjugate(&self, u: &Matrix) -> Self {
        let ua = u.adjoint();
        let c = |x: &Matrix| u.mul(x).mul(&ua);
        CovariantPair {
            dim: self.dim,
            pi: self.pi.iter().map(c).collect(),
            mu: self.mu.iter().map(|(k, x)| (k.clone(), c(x))).collect(),
        }
    }

    fn mu_of<P: HeckePair<Elem = E>>(&self, p: &P, g: &E) -> &Matrix {
        &self.mu[&p.dcoset_key(g)]
    }

    /// Both sides of `μ(ΓgΓ)π(1_{xΓ})μ(ΓsΓ) = Σ_{u,v} π(1_{xuΓ}) μ(Γu⁻¹vΓ) π(1_{xvΓ})`.
    pub fn covariance_sides<P: HeckePair<Elem = E>>(&self, p: &P, g: &E, x: &E, s: &E) -> Result<(Matrix, Matrix), PairError> {
        let cos = Cosets::of(p)?;
        let pix = |y: &E| &self.pi[cos.index(p, y)];
        let lhs = self.mu_of(p, g).mul(pix(x)).mul(self.mu_of(p, s));
        let mut rhs = Matrix::zeros(self.dim, self.dim);
        for u in p.dcoset_left_cosets(&p.inv(g)) {
            let xu = p.mul(x, &u);
            for v in p.dcoset_left_cosets(s) {
                let xv = p.mul(x, &v);
                let mid = self.mu_of(p, &p.mul(&p.inv(&u), &v));
                rhs = rhs.add(&pix(&xu).mul(mid).mul(pix(&xv)));
            }
        }
        Ok((lhs, rhs))
    }

    /// Largest entrywise deviation in the covariance identity over all `(g, x, s)`; `None` if every instance is exact.
    pub fn check<P: HeckePair<Elem = E>>(&self, p: &P) -> Result<CovariantReport, PairError> {
        let cos = Cosets::of(p)?;
        let ds = p.dcosets().ok_or(PairError::NotFinite)?;
        let mut report = CovariantReport { checked: 0, failures: 0, max_deviation: 0.0 };
        for g in &ds {
            for x in &cos.reps {
                for s in &ds {
                    let (l, r) = self.covariance_sides(p, g, x, s)?;
                    report.checked += 1;
                    if l != r {
                        report.failures += 1;
                        report.max_deviation = report.max_deviation.max(l.max_abs_diff(&r));
                    }
                }
            }
        }
        Ok(report)
    }

    /// `(π×μ)(T_{gΓ,hΓ}) = π(1_{gΓ}) μ(Γg⁻¹hΓ) π(1_{hΓ})`.
    pub fn integrate_unit<P: HeckePair<Elem = E>>(&self, p: &P, g: &E, h: &E) -> Result<Matrix, PairError> {
        let cos = Cosets::of(p)?;
        let mid = self.mu_of(p, &p.mul(&p.inv(g), h));
        Ok(self.pi[cos.index(p, g)].mul(mid).mul(&self.pi[cos.index(p, h)]))
    }

    /// Swaps two distinct entries of one `μ` matrix, producing a pair that should fail the covariance identity.
    pub fn corrupt(&self, rng: &mut Rng) -> Self {
        let mut out = self.clone();
        let keys: Vec<E> = out.mu.keys().cloned().collect();
        for _ in 0..64 {
            let k = &keys[rng.random_range(0..keys.len())];
            let m = out.mu.get_mut(k).expect("key exists");
            let n = m.rows();
            let (a, b) = ((rng.random_range(0..n), rng.random_range(0..n)), (rng.random_range(0..n), rng.random_range(0..n)));
            let (va, vb) = (m.get(a.0, a.1), m.get(b.0, b.1));
            if va != vb {
                m.set(a.0, a.1, vb);
                m.set(b.0, b.1, va);
                return out;
            }
        }
        // Fallback: perturb a single entry.
        let k = &keys[0];
        let m = out.mu.get_mut(k).expect("key exists");
        m.add_at(0, 0, &RadScalar::one());
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CovariantReport {
    pub checked: usize,
    pub failures: usize,
    pub max_deviation: f64,
}

impl CovariantReport {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }
}

const PYTHAGOREAN: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// A random unitary with Gaussian-rational entries: a product of rational Givens rotations,
/// a permutation, and phases in `{±1, ±i}`.
pub fn random_unitary(n: usize, rng: &mut Rng) -> Matrix {
    let mut u = Matrix::identity(n);
    if n == 0 {
        return u;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let phases = [RadScalar::one(), RadScalar::i(), RadScalar::from_int(-1), -RadScalar::i()];
    let mut d = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        d.set(i, j, phases[rng.random_range(0..4)].clone());
    }
    u = u.mul(&d);
    for _ in 0..n.min(6) {
        if n < 2 {
            break;
        }
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let (a, b, c) = PYTHAGOREAN[rng.random_range(0..PYTHAGOREAN.len())];
        let cs = RadScalar::from_frac(a, c);
        let sn = RadScalar::from_frac(b, c);
        let mut gv = Matrix::identity(n);
        gv.set(i, i, cs.clone());
        gv.set(j, j, cs);
        gv.set(i, j, -sn.clone());
        gv.set(j, i, sn);
        u = gv.mul(&u);
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::TrivialLine;
    use crate::perm::{Perm, PermPair};
    use rand::SeedableRng;

    fn s3() -> Setting<PermPair, TrivialLine> {
        Setting::new(PermPair::s3(), TrivialLine)
    }

    #[test]
    fn matrix_units_go_to_elementary_matrices() {
        let s = s3();
        let p = &s.pair;
        let pi = FiniteRep::eval(&s, p.identity()).unwrap();
        let cos = Cosets::of(p).unwrap();
        for (i, g) in cos.reps.iter().enumerate() {
            for (j, h) in cos.reps.iter().enumerate() {
                let t = s.matrix_unit(g, h).unwrap();
                let m = integrated_form(&s, &pi, &t).unwrap();
                let mut want = Matrix::zeros(3, 3);
                want.set(i, j, RadScalar::one());
                assert_eq!(m, want);
                assert_eq!(integrated_form_by_spanning(&s, &pi, &t).unwrap(), want);
            }
        }
    }

    #[test]
    fn standard_pair_is_covariant_and_corruption_is_caught() {
        let p = PermPair::s3();
        let c = CovariantPair::standard(&p).unwrap();
        assert!(c.check(&p).unwrap().holds());
        let mut rng = Rng::seed_from_u64(7);
        let u = random_unitary(6, &mut rng);
        assert_eq!(u.mul(&u.adjoint()), Matrix::identity(6));
        assert!(c.amplify(2).conjugate(&u).check(&p).unwrap().holds());
        assert!(!c.corrupt(&mut rng).check(&p).unwrap().holds());
    }

    #[test]
    fn regular_rep_reconstructs() {
        let s = s3();
        let pi = FiniteRep::faithful(&s).unwrap();
        let g = Perm::from_cycles(3, &[&[1, 3]]);
        let f = s
            .spanning(vec![RadScalar::from_int(3)], &Perm::from_cycles(3, &[&[2, 3]]), &g)
            .unwrap()
            .add(&s.xp_unit().unwrap());
        let m = integrated_form(&s, &pi, &f).unwrap();
        assert_eq!(reconstruct(&s, &pi, &m).unwrap(), f);
        assert_eq!(m, integrated_form_by_spanning(&s, &pi, &f).unwrap());
        assert!(pi.is_nondegenerate(&s).unwrap());
    }
}
