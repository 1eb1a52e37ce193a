//! Finite permutation groups, enumerated exhaustively.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use rand::Rng as _;
use serde_json::Value;
use smallvec::SmallVec;

use crate::pair::{HeckePair, PairError, Rng};

/// Elements beyond this count are refused.
pub const MAX_ORDER: usize = 50_000;

/// A permutation of `{0,…,n-1}` stored as its image array; ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(pub SmallVec<[u8; 12]>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// From a 1-based image array.
    pub fn from_images(img: &[usize]) -> Result<Self, PairError> {
        let n = img.len();
        if n > 255 {
            return Err(PairError::BadPermutation("degree above 255".into()));
        }
        let mut seen = vec![false; n];
        let mut out = SmallVec::new();
        for &i in img {
            if i == 0 || i > n || seen[i - 1] {
                return Err(PairError::BadPermutation(format!("{img:?}")));
            }
            seen[i - 1] = true;
            out.push((i - 1) as u8);
        }
        Ok(Perm(out))
    }

    /// From disjoint cycles over `1..=n`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut img: Vec<usize> = (1..=n).collect();
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                img[a - 1] = c[(k + 1) % c.len()];
            }
        }
        Perm::from_images(&img).expect("valid cycles")
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize + 1).collect()
    }

    /// `(a·b)(i) = a(b(i))`.
    pub fn compose(&self, b: &Perm) -> Perm {
        Perm(b.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out: SmallVec<[u8; 12]> = SmallVec::from_elem(0, self.0.len());
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        Perm(out)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut c = vec![s + 1];
            seen[s] = true;
            let mut j = self.0[s] as usize;
            while j != s {
                seen[j] = true;
                c.push(j + 1);
                j = self.0[j] as usize;
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.cycles();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let s: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Subgroup handle: an index into the pair's interner.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PermSub(u32);

struct SubData {
    members: Vec<u32>,
    mask: Vec<bool>,
    coset_rep: OnceLock<Vec<u32>>,
}

#[derive(Default)]
struct Interner {
    subs: Vec<Arc<SubData>>,
    by_members: HashMap<Vec<u32>, u32>,
}

/// A finite permutation group `G` with subgroup Γ.
pub struct PermPair {
    degree: usize,
    generators: Vec<Perm>,
    gamma_generators: Vec<Perm>,
    elems: Vec<Perm>,
    index: HashMap<Perm, u32>,
    interner: RwLock<Interner>,
    gamma: PermSub,
    dcoset_rep: Vec<u32>,
    dcoset_cosets: HashMap<u32, Vec<u32>>,
    conj_cache: Mutex<HashMap<(u32, PermSub), PermSub>>,
    meet_cache: Mutex<HashMap<(PermSub, PermSub), PermSub>>,
}

fn closure(degree: usize, gens: &[Perm]) -> Result<Vec<Perm>, PairError> {
    let id = Perm::identity(degree);
    let mut seen: HashMap<Perm, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.compose(s);
            if !seen.contains_key(&h) {
                if seen.len() >= MAX_ORDER {
                    return Err(PairError::TooLarge(MAX_ORDER));
                }
                seen.insert(h.clone(), ());
                queue.push_back(h);
            }
        }
    }
    let mut v: Vec<Perm> = seen.into_keys().collect();
    v.sort();
    Ok(v)
}

impl PermPair {
    pub fn new(degree: usize, generators: Vec<Perm>, gamma_generators: Vec<Perm>) -> Result<Self, PairError> {
        for g in generators.iter().chain(&gamma_generators) {
            if g.degree() != degree {
                return Err(PairError::BadPermutation(format!(
                    "{g} has degree {} instead of {degree}",
                    g.degree()
                )));
            }
        }
        let elems = closure(degree, &generators)?;
        let index: HashMap<Perm, u32> = elems.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let gamma_elems = closure(degree, &gamma_generators)?;
        let mut gamma_idx = Vec::with_capacity(gamma_elems.len());
        for g in &gamma_elems {
            match index.get(g) {
                Some(&i) => gamma_idx.push(i),
                None => {
                    return Err(PairError::BadPermutation(format!("Γ element {g} is not in G")));
                }
            }
        }
        let mut pair = PermPair {
            degree,
            generators,
            gamma_generators,
            elems,
            index,
            interner: RwLock::new(Interner::default()),
            gamma: PermSub(0),
            dcoset_rep: Vec::new(),
            dcoset_cosets: HashMap::new(),
            conj_cache: Mutex::new(HashMap::new()),
            meet_cache: Mutex::new(HashMap::new()),
        };
        pair.gamma = pair.intern(gamma_idx);
        pair.build_dcosets();
        Ok(pair)
    }

    /// `S_n` with Γ the stabilizer of the point `n`.
    pub fn symmetric_point_stabilizer(n: usize) -> Self {
        let gens = symmetric_generators(n);
        let gam = if n >= 2 { symmetric_generators(n - 1).into_iter().map(|p| extend(&p, n)).collect() } else { vec![] };
        PermPair::new(n, gens, gam).expect("valid symmetric group")
    }

    /// `S₃` with `Γ = ⟨(1 2)⟩`.
    pub fn s3() -> Self {
        PermPair::new(
            3,
            symmetric_generators(3),
            vec![Perm::from_cycles(3, &[&[1, 2]])],
        )
        .expect("valid pair")
    }

    /// `S₄` with `Γ ≅ S₃` the stabilizer of 4.
    pub fn s4() -> Self {
        Self::symmetric_point_stabilizer(4)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn gamma_generators(&self) -> &[Perm] {
        &self.gamma_generators
    }

    fn idx(&self, g: &Perm) -> u32 {
        *self.index.get(g).unwrap_or_else(|| panic!("{g} is not in the group"))
    }

    fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.idx(&self.elems[a as usize].compose(&self.elems[b as usize]))
    }

    fn data(&self, h: PermSub) -> Arc<SubData> {
        self.interner.read().unwrap().subs[h.0 as usize].clone()
    }

    fn intern(&self, mut members: Vec<u32>) -> PermSub {
        members.sort_unstable();
        members.dedup();
        if let Some(&i) = self.interner.read().unwrap().by_members.get(&members) {
            return PermSub(i);
        }
        let mut w = self.interner.write().unwrap();
        if let Some(&i) = w.by_members.get(&members) {
            return PermSub(i);
        }
        let mut mask = vec![false; self.elems.len()];
        for &m in &members {
            mask[m as usize] = true;
        }
        let id = w.subs.len() as u32;
        w.subs.push(Arc::new(SubData {
            members: members.clone(),
            mask,
            coset_rep: OnceLock::new(),
        }));
        w.by_members.insert(members, id);
        PermSub(id)
    }

    /// Interns the subgroup generated by the given elements.
    pub fn subgroup_generated(&self, gens: &[Perm]) -> Result<PermSub, PairError> {
        let els = closure(self.degree, gens)?;
        let mut idx = Vec::with_capacity(els.len());
        for e in &els {
            idx.push(*self.index.get(e).ok_or_else(|| PairError::BadElement(e.to_string()))?);
        }
        Ok(self.intern(idx))
    }

    fn coset_table(&self, h: PermSub) -> Arc<SubData> {
        let d = self.data(h);
        d.coset_rep.get_or_init(|| {
            let n = self.elems.len();
            let mut rep = vec![u32::MAX; n];
            for i in 0..n as u32 {
                if rep[i as usize] != u32::MAX {
                    continue;
                }
                let orbit: Vec<u32> = d.members.iter().map(|&m| self.mul_idx(i, m)).collect();
                let min = *orbit.iter().min().expect("nonempty coset");
                for o in orbit {
                    rep[o as usize] = min;
                }
            }
            rep
        });
        d
    }

    fn coset_idx(&self, g: u32, h: PermSub) -> u32 {
        self.coset_table(h).coset_rep.get().expect("initialized")[g as usize]
    }

    fn build_dcosets(&mut self) {
        let n = self.elems.len();
        let gamma = self.data(self.gamma);
        let mut rep = vec![u32::MAX; n];
        let mut lcosets = HashMap::new();
        for i in 0..n as u32 {
            if rep[i as usize] != u32::MAX {
                continue;
            }
            let mut cosets: Vec<u32> = gamma
                .members
                .iter()
                .map(|&g| self.coset_idx(self.mul_idx(g, i), self.gamma))
                .collect();
            cosets.sort_unstable();
            cosets.dedup();
            let mut members = Vec::new();
            for &c in &cosets {
                for &m in &gamma.members {
                    members.push(self.mul_idx(c, m));
                }
            }
            let min = *members.iter().min().expect("nonempty");
            for m in members {
                rep[m as usize] = min;
            }
            lcosets.insert(min, cosets);
        }
        self.dcoset_rep = rep;
        self.dcoset_cosets = lcosets;
    }

    fn elements_of(&self, h: PermSub) -> Vec<Perm> {
        self.data(h).members.iter().map(|&i| self.elems[i as usize].clone()).collect()
    }
}

fn symmetric_generators(n: usize) -> Vec<Perm> {
    if n < 2 {
        return vec![];
    }
    let t = Perm::from_cycles(n, &[&[1, 2]]);
    if n == 2 {
        return vec![t];
    }
    let cyc: Vec<usize> = (1..=n).collect();
    vec![t, Perm::from_cycles(n, &[&cyc])]
}

fn extend(p: &Perm, n: usize) -> Perm {
    let mut v = p.0.clone();
    while v.len() < n {
        v.push(v.len() as u8);
    }
    Perm(v)
}

impl HeckePair for PermPair {
    type Elem = Perm;
    type Sub = PermSub;

    fn describe(&self) -> String {
        format!(
            "permutation group of degree {} and order {}, Γ of order {}",
            self.degree,
            self.elems.len(),
            self.data(self.gamma).members.len()
        )
    }

    fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        a.compose(b)
    }

    fn inv(&self, a: &Perm) -> Perm {
        a.inverse()
    }

    fn gamma(&self) -> PermSub {
        self.gamma
    }

    fn contains(&self, h: PermSub, g: &Perm) -> bool {
        match self.index.get(g) {
            Some(&i) => self.data(h).mask[i as usize],
            None => false,
        }
    }

    fn conj_sub(&self, g: &Perm, h: PermSub) -> PermSub {
        let gi = self.idx(g);
        let key = (gi, h);
        if let Some(&s) = self.conj_cache.lock().unwrap().get(&key) {
            return s;
        }
        let ginv = self.idx(&g.inverse());
        let members: Vec<u32> = self.data(h).members.iter().map(|&m| self.mul_idx(self.mul_idx(gi, m), ginv)).collect();
        let s = self.intern(members);
        self.conj_cache.lock().unwrap().insert(key, s);
        s
    }

    fn meet(&self, a: PermSub, b: PermSub) -> PermSub {
        if a == b {
            return a;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&s) = self.meet_cache.lock().unwrap().get(&key) {
            return s;
        }
        let (da, db) = (self.data(a), self.data(b));
        let members: Vec<u32> = da.members.iter().copied().filter(|&m| db.mask[m as usize]).collect();
        let s = self.intern(members);
        self.meet_cache.lock().unwrap().insert(key, s);
        s
    }

    fn is_subgroup_of(&self, k: PermSub, h: PermSub) -> bool {
        let (dk, dh) = (self.data(k), self.data(h));
        dk.members.iter().all(|&m| dh.mask[m as usize])
    }

    fn index(&self, h: PermSub, k: PermSub) -> Result<BigInt, PairError> {
        if !self.is_subgroup_of(k, h) {
            return Err(PairError::NotContained);
        }
        Ok(BigInt::from(self.data(h).members.len() / self.data(k).members.len()))
    }

    fn transversal(&self, h: PermSub, k: PermSub) -> Result<Vec<Perm>, PairError> {
        if !self.is_subgroup_of(k, h) {
            return Err(PairError::NotContained);
        }
        let mut reps: Vec<u32> = self.data(h).members.iter().map(|&m| self.coset_idx(m, k)).collect();
        reps.sort_unstable();
        reps.dedup();
        Ok(reps.into_iter().map(|i| self.elems[i as usize].clone()).collect())
    }

    fn coset_key(&self, g: &Perm, h: PermSub) -> Perm {
        self.elems[self.coset_idx(self.idx(g), h) as usize].clone()
    }

    fn dcoset_key(&self, g: &Perm) -> Perm {
        self.elems[self.dcoset_rep[self.idx(g) as usize] as usize].clone()
    }

    fn dcoset_left_cosets(&self, g: &Perm) -> Vec<Perm> {
        let r = self.dcoset_rep[self.idx(g) as usize];
        self.dcoset_cosets[&r].iter().map(|&i| self.elems[i as usize].clone()).collect()
    }

    fn gamma_transporter(&self, from: &Perm, to: &Perm) -> Option<Perm> {
        let f = self.idx(from);
        let target = self.coset_idx(self.idx(to), self.gamma);
        self.data(self.gamma)
            .members
            .iter()
            .find(|&&m| self.coset_idx(self.mul_idx(m, f), self.gamma) == target)
            .map(|&m| self.elems[m as usize].clone())
    }

    fn tag(&self, h: PermSub) -> Option<Vec<Perm>> {
        if h == self.gamma {
            return Some(vec![]);
        }
        // Greedy over conjugates containing H, in coset order; deterministic per subgroup.
        let mut running: Option<PermSub> = None;
        let mut tag = Vec::new();
        for c in self.cosets(self.gamma).expect("finite") {
            let conj = self.conj_sub(&c, self.gamma);
            if !self.is_subgroup_of(h, conj) {
                continue;
            }
            if let Some(r) = running {
                if self.is_subgroup_of(r, conj) {
                    continue;
                }
            }
            running = Some(match running {
                None => conj,
                Some(r) => self.meet(r, conj),
            });
            tag.push(c);
            if running == Some(h) {
                return Some(tag);
            }
        }
        None
    }

    fn elements(&self) -> Option<&[Perm]> {
        Some(&self.elems)
    }

    fn sub_elements(&self, h: PermSub) -> Option<Vec<Perm>> {
        Some(self.elements_of(h))
    }

    fn trivial_sub(&self) -> Option<PermSub> {
        Some(self.intern(vec![self.idx(&self.identity())]))
    }

    fn normal_core(&self) -> Option<PermSub> {
        let mut core = self.gamma;
        for c in self.cosets(self.gamma).expect("finite") {
            core = self.meet(core, self.conj_sub(&c, self.gamma));
        }
        Some(core)
    }

    fn cosets(&self, h: PermSub) -> Option<Vec<Perm>> {
        let t = self.coset_table(h);
        let rep = t.coset_rep.get().expect("initialized");
        let mut v: Vec<u32> = rep.clone();
        v.sort_unstable();
        v.dedup();
        Some(v.into_iter().map(|i| self.elems[i as usize].clone()).collect())
    }

    fn dcosets(&self) -> Option<Vec<Perm>> {
        let mut v: Vec<u32> = self.dcoset_cosets.keys().copied().collect();
        v.sort_unstable();
        Some(v.into_iter().map(|i| self.elems[i as usize].clone()).collect())
    }

    fn random_elem(&self, rng: &mut Rng) -> Perm {
        self.elems[rng.random_range(0..self.elems.len())].clone()
    }

    fn random_in(&self, h: PermSub, rng: &mut Rng) -> Perm {
        let d = self.data(h);
        self.elems[d.members[rng.random_range(0..d.members.len())] as usize].clone()
    }

    fn elem_to_json(&self, g: &Perm) -> Value {
        Value::from(g.images())
    }

    fn elem_from_json(&self, v: &Value) -> Result<Perm, PairError> {
        let arr = v
            .as_array()
            .ok_or_else(|| PairError::BadElement(format!("expected an image array, got {v}")))?;
        let img: Option<Vec<usize>> = arr.iter().map(|x| x.as_u64().map(|n| n as usize)).collect();
        let img = img.ok_or_else(|| PairError::BadElement(v.to_string()))?;
        if img.len() != self.degree {
            return Err(PairError::BadElement(format!("{v} does not have degree {}", self.degree)));
        }
        let p = Perm::from_images(&img)?;
        if !self.index.contains_key(&p) {
            return Err(PairError::BadElement(format!("{p} is not in G")));
        }
        Ok(p)
    }

    fn format_elem(&self, g: &Perm) -> String {
        g.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_right_to_left() {
        let a = Perm::from_cycles(3, &[&[1, 2]]);
        let b = Perm::from_cycles(3, &[&[1, 3]]);
        // (1 2)(1 3) sends 1 -> 3 -> 3, 3 -> 1 -> 2
        assert_eq!(a.compose(&b), Perm::from_cycles(3, &[&[1, 3, 2]]));
        assert_eq!(a.compose(&b).to_string(), "(1 3 2)");
    }

    #[test]
    fn orders() {
        let p = PermPair::s4();
        assert_eq!(p.elements().unwrap().len(), 24);
        assert_eq!(p.sub_order(p.gamma()), Some(6));
        assert_eq!(p.dcosets().unwrap().len(), 2);
    }

    #[test]
    fn rejects_wrong_degree() {
        let g = Perm::from_cycles(3, &[&[1, 2]]);
        assert!(PermPair::new(4, vec![g], vec![]).is_err());
        assert!(Perm::from_images(&[1, 1, 2]).is_err());
    }

    #[test]
    fn gamma_tag_is_empty_and_roundtrips() {
        let p = PermPair::s4();
        assert_eq!(p.tag(p.gamma()), Some(vec![]));
        let g = Perm::from_cycles(4, &[&[3, 4]]);
        let h = p.gamma_g(&g);
        let t = p.tag(h).unwrap();
        assert_eq!(p.sub_from_tag(&t), h);
        assert!(p.tag(p.trivial_sub().unwrap()).is_some());
    }
}
