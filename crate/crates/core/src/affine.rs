//! The shifted level-k action `⋆` of the affine Weyl group on weights.
//!
//! `w ⋆ λ = w(λ + ρ) − ρ`, where `w` acts on `λ + ρ` by the affine Weyl group
//! at level `m = k + h^∨`: the simple reflections `s_1..s_l` fix the walls
//! `⟨x, α_i^∨⟩ = 0` and `s_0` fixes `⟨x, θ^∨⟩ = m`.
//!
//! Words are stored in application order: the word `[a, b]` sends `λ` to
//! `s_b ⋆ (s_a ⋆ λ)`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result, RootSystem, Weight, WeightMap};

/// Bit `i` set means generator `s_i` is included.
pub type GenMask = u64;

/// Mask with the bits `0..=rank` set.
pub fn all_generators(rank: usize) -> GenMask {
    (1u64 << (rank + 1)) - 1
}

/// The linear generators `s_1..s_l`.
pub fn finite_generators(rank: usize) -> GenMask {
    all_generators(rank) & !1
}

/// A non-empty subset of `{0, ..., l}` naming a face of the alcove.
///
/// The associated parabolic subgroup `W_I` is generated by the `s_i` with
/// `i ∉ I`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceIndex(u64);

impl FaceIndex {
    pub fn new(members: &[usize], rank: usize) -> Result<Self> {
        if members.is_empty() || members.iter().any(|&i| i > rank) {
            return Err(Error::BadFace { rank });
        }
        Ok(FaceIndex(members.iter().fold(0, |acc, &i| acc | (1 << i))))
    }

    pub fn singleton(i: usize) -> Self {
        FaceIndex(1 << i)
    }

    pub fn full(rank: usize) -> Self {
        FaceIndex(all_generators(rank))
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    /// Ascending.
    pub fn members(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.0 & (1 << i) != 0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Homological degree `|I| − 1`.
    pub fn degree(&self) -> usize {
        self.len() - 1
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn with(&self, i: usize) -> FaceIndex {
        FaceIndex(self.0 | (1 << i))
    }

    /// `None` when removing `i` would leave the empty set.
    pub fn without(&self, i: usize) -> Option<FaceIndex> {
        let bits = self.0 & !(1 << i);
        (bits != 0).then_some(FaceIndex(bits))
    }

    /// Number of members smaller than `i`.
    pub fn position(&self, i: usize) -> usize {
        (self.0 & ((1u64 << i) - 1)).count_ones() as usize
    }

    /// Generators of `W_I`.
    pub fn generators(&self, rank: usize) -> GenMask {
        all_generators(rank) & !self.0
    }

    pub fn check(&self, rank: usize) -> Result<()> {
        if self.0 == 0 || self.0 & !all_generators(rank) != 0 {
            Err(Error::BadFace { rank })
        } else {
            Ok(())
        }
    }

    /// Every non-empty subset of `{0..=rank}` with exactly `size` members.
    pub fn all_of_size(rank: usize, size: usize) -> Vec<FaceIndex> {
        (1..=all_generators(rank)).filter(|b| b.count_ones() as usize == size).map(FaceIndex).collect()
    }
}

impl fmt::Display for FaceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, i) in self.members().into_iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FaceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for FaceIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut bits = 0u64;
        for t in s.split(',') {
            let i: usize = t.trim().parse().map_err(|_| Error::Parse(alloc::format!("bad face member `{t}`")))?;
            if i >= 63 {
                return Err(Error::Parse(alloc::format!("face member {i} out of range")));
            }
            bits |= 1 << i;
        }
        Ok(FaceIndex(bits))
    }
}

/// A word in the generators `s_0..s_l`, in application order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AffineWord(pub Vec<usize>);

impl AffineWord {
    pub fn identity() -> Self {
        AffineWord(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(-1)^len`.
    pub fn sign(&self) -> i64 {
        if self.0.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The inverse element: the same letters in reverse order.
    pub fn inverse(&self) -> AffineWord {
        AffineWord(self.0.iter().rev().copied().collect())
    }

    pub fn check(&self, rank: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i > rank) {
            Some(&index) => Err(Error::BadGenerator { index, rank }),
            None => Ok(()),
        }
    }
}

/// `e` for the identity, otherwise comma-joined letters.
impl fmt::Display for AffineWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AffineWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for AffineWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(AffineWord::identity());
        }
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(alloc::format!("bad letter `{t}`"))))
            .collect::<Result<Vec<_>>>()
            .map(AffineWord)
    }
}

/// Outcome of moving a weight into the closed alcove of a parabolic subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    /// `(-1)^length`, or 0 when `rep` lies on a wall.
    pub sign: i64,
    pub rep: Weight,
    pub word: AffineWord,
    pub length: usize,
}

/// Result of [`StarContext::length_between`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthBetween {
    Finite(usize),
    /// The two weights lie in different orbits.
    Infinite,
    /// Same orbit, but no word of length at most `cap` was found.
    Undetermined { cap: usize },
}

/// A finite subgroup generated by some of the `s_i`, stored as affine maps
/// `λ ↦ Mλ + b` on Dynkin labels.
#[derive(Clone, Debug)]
pub struct Subgroup {
    rank: usize,
    elements: Vec<SubgroupElement>,
}

#[derive(Clone, Debug)]
struct SubgroupElement {
    matrix: Vec<i64>,
    shift: Vec<i64>,
    word: AffineWord,
}

impl Subgroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements as reduced words with signs, shortest first.
    pub fn words(&self) -> impl Iterator<Item = (&AffineWord, i64)> + '_ {
        self.elements.iter().map(|e| (&e.word, e.word.sign()))
    }

    /// `w ⋆ λ` for the `idx`-th element.
    pub fn apply(&self, idx: usize, w: &Weight) -> Weight {
        let e = &self.elements[idx];
        let l = self.rank;
        (0..l)
            .map(|i| e.shift[i] + (0..l).map(|j| e.matrix[i * l + j] * w[j]).sum::<i64>())
            .collect::<Vec<i64>>()
            .into()
    }

    pub fn sign(&self, idx: usize) -> i64 {
        self.elements[idx].word.sign()
    }
}

/// Default bound on the size of enumerated subgroups and orbits.
pub const DEFAULT_GROUP_LIMIT: usize = 2_000_000;

/// A root system together with a level.
#[derive(Clone, Copy, Debug)]
pub struct StarContext<'a> {
    rs: &'a RootSystem,
    level: u32,
    shifted: i64,
}

impl<'a> StarContext<'a> {
    pub fn new(rs: &'a RootSystem, level: u32) -> Self {
        StarContext { rs, level, shifted: level as i64 + rs.dual_coxeter() }
    }

    pub fn rs(&self) -> &'a RootSystem {
        self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `m = k + h^∨`.
    pub fn shifted_level(&self) -> i64 {
        self.shifted
    }

    fn check_generator(&self, i: usize) -> Result<()> {
        if i > self.rank() {
            Err(Error::BadGenerator { index: i, rank: self.rank() })
        } else {
            Ok(())
        }
    }

    /// How far `λ + ρ` lies beyond the wall of generator `i`: positive means
    /// the wall is violated, zero means `λ` lies on it.
    fn excess(&self, i: usize, w: &Weight) -> i64 {
        if i == 0 {
            self.rs.theta_pairing(w) - self.level as i64 - 1
        } else {
            -(w[i - 1] + 1)
        }
    }

    pub(crate) fn reflect(&self, i: usize, w: &Weight) -> Weight {
        let mut out = w.clone();
        if i == 0 {
            out.add_scaled(-self.excess(0, w), self.rs.highest_root());
        } else {
            out.add_scaled(-(w[i - 1] + 1), self.rs.simple_root(i));
        }
        out
    }

    /// `s_i ⋆ λ`.
    pub fn star_reflect(&self, i: usize, w: &Weight) -> Result<Weight> {
        self.rs.check_rank(w)?;
        self.check_generator(i)?;
        Ok(self.reflect(i, w))
    }

    /// `s_i ⋆ λ = λ`.
    pub fn is_fixed(&self, i: usize, w: &Weight) -> bool {
        self.excess(i, w) == 0
    }

    /// Applies the letters of `word` in order.
    pub fn apply_word(&self, word: &AffineWord, w: &Weight) -> Result<Weight> {
        self.rs.check_rank(w)?;
        word.check(self.rank())?;
        Ok(word.letters().iter().fold(w.clone(), |x, &i| self.reflect(i, &x)))
    }

    /// `λ ∈ 𝔄_k`, i.e. `λ + ρ` lies in the open alcove.
    pub fn in_alcove(&self, w: &Weight) -> bool {
        w.is_dominant() && self.rs.theta_pairing(w) <= self.level as i64
    }

    /// Moves `λ` into the closed fundamental alcove by greedy wall repair.
    pub fn reduce_to_alcove(&self, w: &Weight) -> ReductionResult {
        self.reduce_in(w, all_generators(self.rank()))
    }

    /// Like [`Self::reduce_to_alcove`] for the subgroup generated by `gens`.
    ///
    /// Repeatedly reflects across the smallest-index violated wall. Each step
    /// crosses exactly one hyperplane separating the point from the target
    /// chamber, so the word is reduced and its length is minimal. The result
    /// is the unique `gens`-dominant point of the orbit.
    pub fn reduce_in(&self, w: &Weight, gens: GenMask) -> ReductionResult {
        let l = self.rank();
        let mut x = w.clone();
        let mut word = Vec::new();
        'outer: loop {
            for i in 0..=l {
                if gens & (1 << i) != 0 && self.excess(i, &x) > 0 {
                    x = self.reflect(i, &x);
                    word.push(i);
                    continue 'outer;
                }
            }
            break;
        }
        let on_wall = (0..=l).any(|i| gens & (1 << i) != 0 && self.excess(i, &x) == 0);
        let length = word.len();
        let sign = if on_wall {
            0
        } else if length % 2 == 0 {
            1
        } else {
            -1
        };
        ReductionResult { sign, rep: x, word: AffineWord(word), length }
    }

    /// Minimal length of `w ∈ W_aff` with `w ⋆ λ` in the closed alcove.
    pub fn length_of_weight(&self, w: &Weight) -> usize {
        self.reduce_to_alcove(w).length
    }

    /// Minimal length of a word taking `λ` to `μ`, by breadth-first search.
    pub fn length_between(&self, a: &Weight, b: &Weight, cap: usize) -> Result<LengthBetween> {
        self.rs.check_rank(a)?;
        self.rs.check_rank(b)?;
        let mut seen: BTreeSet<Weight> = BTreeSet::new();
        seen.insert(a.clone());
        let mut layer = vec![a.clone()];
        for d in 0..=cap {
            if layer.iter().any(|x| x == b) {
                return Ok(LengthBetween::Finite(d));
            }
            if d == cap {
                break;
            }
            let mut next = Vec::new();
            for x in &layer {
                for i in 0..=self.rank() {
                    let y = self.reflect(i, x);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            layer = next;
        }
        if self.reduce_to_alcove(a).rep != self.reduce_to_alcove(b).rep {
            Ok(LengthBetween::Infinite)
        } else {
            Ok(LengthBetween::Undetermined { cap })
        }
    }

    /// The subgroup generated by `gens` (which must omit at least one
    /// generator), enumerated as affine maps.
    pub fn subgroup(&self, gens: GenMask, limit: usize) -> Result<Subgroup> {
        let l = self.rank();
        let all = all_generators(l);
        if gens & !all != 0 || gens == all {
            return Err(Error::BadFace { rank: l });
        }
        let mut id = vec![0i64; l * l];
        for i in 0..l {
            id[i * l + i] = 1;
        }
        let start = SubgroupElement { matrix: id, shift: vec![0; l], word: AffineWord::identity() };
        let key = |e: &SubgroupElement| {
            let mut k = e.matrix.clone();
            k.extend_from_slice(&e.shift);
            k
        };
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        seen.insert(key(&start));
        let mut elements = vec![start];
        let mut head = 0;
        // λ ↦ S_i λ + t_i is the matrix form of s_i ⋆.
        let gen_maps: Vec<(usize, Vec<i64>, Vec<i64>)> = (0..=l)
            .filter(|i| gens & (1 << i) != 0)
            .map(|i| {
                let shift = self.reflect(i, &Weight::zero(l)).into_labels();
                let mut m = vec![0i64; l * l];
                for c in 0..l {
                    let mut e = vec![0i64; l];
                    e[c] = 1;
                    let img = self.reflect(i, &e.into());
                    for r in 0..l {
                        m[r * l + c] = img[r] - shift[r];
                    }
                }
                (i, m, shift)
            })
            .collect();
        while head < elements.len() {
            let cur = elements[head].clone();
            head += 1;
            for (i, m, t) in &gen_maps {
                let mut matrix = vec![0i64; l * l];
                let mut shift = t.clone();
                for r in 0..l {
                    for c in 0..l {
                        matrix[r * l + c] = (0..l).map(|j| m[r * l + j] * cur.matrix[j * l + c]).sum();
                    }
                    shift[r] += (0..l).map(|j| m[r * l + j] * cur.shift[j]).sum::<i64>();
                }
                let mut word = cur.word.clone();
                word.0.push(*i);
                let e = SubgroupElement { matrix, shift, word };
                if seen.insert(key(&e)) {
                    if elements.len() >= limit {
                        return Err(Error::Resource { what: "parabolic subgroup size", needed: limit + 1, limit });
                    }
                    elements.push(e);
                }
            }
        }
        Ok(Subgroup { rank: l, elements })
    }

    /// All elements of `W_I` as reduced words with their signs.
    pub fn enumerate_subgroup(&self, face: FaceIndex) -> Result<Vec<(AffineWord, i64)>> {
        face.check(self.rank())?;
        let g = self.subgroup(face.generators(self.rank()), DEFAULT_GROUP_LIMIT)?;
        Ok(g.words().map(|(w, s)| (w.clone(), s)).collect())
    }

    /// The `⋆`-orbit of `λ` under the subgroup generated by `gens`, each point
    /// with the parity of a word reaching it. Parities are only meaningful
    /// when the orbit is free.
    pub fn orbit(&self, w: &Weight, gens: GenMask, limit: usize) -> Result<Vec<(Weight, i64)>> {
        let mut seen: BTreeSet<Weight> = BTreeSet::new();
        seen.insert(w.clone());
        let mut out = vec![(w.clone(), 1i64)];
        let mut head = 0;
        while head < out.len() {
            let (x, s) = out[head].clone();
            head += 1;
            for i in 0..=self.rank() {
                if gens & (1 << i) != 0 {
                    let y = self.reflect(i, &x);
                    if seen.insert(y.clone()) {
                        if out.len() >= limit {
                            return Err(Error::Resource { what: "orbit size", needed: limit + 1, limit });
                        }
                        out.push((y, -s));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Sk_I(λ) = Σ_{w ∈ W_I} (−1)^{ℓ(w)} w ⋆ λ`.
    pub fn skew_symmetrize(&self, face: FaceIndex, w: &Weight) -> Result<WeightMap> {
        self.rs.check_rank(w)?;
        face.check(self.rank())?;
        let gens = face.generators(self.rank());
        if self.reduce_in(w, gens).sign == 0 {
            return Ok(WeightMap::new());
        }
        Ok(self.orbit(w, gens, DEFAULT_GROUP_LIMIT)?.into_iter().collect())
    }

    /// Canonical `W_I`-representative of `λ` and the sign relating the two
    /// skew-symmetrizations, or `None` when `Sk_I(λ) = 0`.
    pub fn canonicalize(&self, face: FaceIndex, w: &Weight) -> Option<(Weight, i64)> {
        let r = self.reduce_in(w, face.generators(self.rank()));
        (r.sign != 0).then_some((r.rep, r.sign))
    }
}

/// Renders a weight map as `λ:c` pairs, for diagnostics.
pub fn format_weight_map(m: &WeightMap) -> String {
    let mut s = String::new();
    for (n, (w, c)) in m.iter().enumerate() {
        if n > 0 {
            s.push(' ');
        }
        s.push_str(&alloc::format!("{w}:{c}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::parabolic_positive_roots;

    fn sys(s: &str) -> RootSystem {
        RootSystem::new(s.parse().unwrap())
    }

    #[test]
    fn star_reflect_examples() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        assert_eq!(c.star_reflect(0, &Weight::from([3])).unwrap(), Weight::from([1]));
        for k in 0..4 {
            let c = StarContext::new(&a1, k);
            assert_eq!(c.star_reflect(1, &Weight::from([-1])).unwrap(), Weight::from([-1]));
        }
        let a2 = sys("A2");
        let c = StarContext::new(&a2, 0);
        assert_eq!(c.star_reflect(1, &Weight::from([0, 0])).unwrap(), Weight::from([-2, 1]));
        assert!(c.star_reflect(3, &Weight::from([0, 0])).is_err());
    }

    #[test]
    fn reduce_examples() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        let r = c.reduce_to_alcove(&Weight::from([1]));
        assert_eq!((r.sign, r.rep, r.length), (1, Weight::from([1]), 0));
        let r = c.reduce_to_alcove(&Weight::from([2]));
        assert_eq!((r.sign, r.rep), (0, Weight::from([2])));
        let r = c.reduce_to_alcove(&Weight::from([3]));
        assert_eq!((r.sign, r.rep, r.word, r.length), (-1, Weight::from([1]), AffineWord(vec![0]), 1));
    }

    #[test]
    fn lengths() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        assert_eq!(c.length_of_weight(&Weight::from([0])), 0);
        assert_eq!(c.length_of_weight(&Weight::from([3])), 1);
        // λ + ρ = −3 is one reflection away from the wall point 3.
        assert_eq!(c.length_of_weight(&Weight::from([-4])), 1);
        assert_eq!(c.length_of_weight(&Weight::from([-5])), 2);
        assert_eq!(c.length_between(&Weight::from([3]), &Weight::from([3]), 0).unwrap(), LengthBetween::Finite(0));
        assert_eq!(c.length_between(&Weight::from([3]), &Weight::from([1]), 4).unwrap(), LengthBetween::Finite(1));
        assert_eq!(c.length_between(&Weight::from([0]), &Weight::from([1]), 4).unwrap(), LengthBetween::Infinite);
        assert_eq!(
            c.length_between(&Weight::from([0]), &Weight::from([6]), 1).unwrap(),
            LengthBetween::Undetermined { cap: 1 }
        );
    }

    #[test]
    fn subgroup_sizes() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        assert_eq!(c.enumerate_subgroup(FaceIndex::full(1)).unwrap().len(), 1);
        assert_eq!(c.enumerate_subgroup(FaceIndex::singleton(0)).unwrap().len(), 2);
        let a2 = sys("A2");
        let c = StarContext::new(&a2, 1);
        let g = c.enumerate_subgroup(FaceIndex::singleton(0)).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.iter().filter(|(_, s)| *s == -1).count(), 3);
        assert!(c.enumerate_subgroup(FaceIndex(0)).is_err());
    }

    #[test]
    fn skew_examples() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        let full = FaceIndex::full(1);
        assert_eq!(c.skew_symmetrize(full, &Weight::from([5])).unwrap(), WeightMap::singleton(Weight::from([5]), 1));
        let m = c.skew_symmetrize(FaceIndex::singleton(0), &Weight::from([0])).unwrap();
        assert_eq!(m, [(Weight::from([0]), 1), (Weight::from([-2]), -1)].into_iter().collect());
        assert!(c.skew_symmetrize(FaceIndex::singleton(1), &Weight::from([2])).unwrap().is_zero());
    }

    #[test]
    fn face_index_helpers() {
        let f = FaceIndex::new(&[0, 2, 3], 3).unwrap();
        assert_eq!(f.members(), vec![0, 2, 3]);
        assert_eq!(f.position(3), 2);
        assert_eq!(f.generators(3), 0b0010);
        assert_eq!(f.without(2).unwrap().members(), vec![0, 3]);
        assert!(FaceIndex::singleton(1).without(1).is_none());
        assert_eq!(alloc::format!("{f}").parse::<FaceIndex>().unwrap(), f);
        assert!(FaceIndex::new(&[], 2).is_err());
        assert!(FaceIndex::new(&[3], 2).is_err());
        assert_eq!(FaceIndex::all_of_size(2, 2).len(), 3);
    }

    /// The action `w(x − mν_I) + mν_I` on `x = λ + ρ`, with `w` generated by
    /// the linear reflections in the simple roots of the subsystem of face
    /// `I` and `ν_I = (ρ − ρ_I)/h^∨`, agrees with `⋆` on every generator.
    #[test]
    fn centered_formulation_agrees() {
        for name in ["A1", "A2"] {
            let rs = sys(name);
            let l = rs.rank();
            let h = rs.dual_coxeter();
            for k in 0..3u32 {
                let c = StarContext::new(&rs, k);
                let m = c.shifted_level();
                for bits in 1..all_generators(l) {
                    let face = FaceIndex(bits);
                    let gens: Vec<usize> = (0..=l).filter(|i| !face.contains(*i)).collect();
                    // 2ρ_I
                    let mut two_rho_i = Weight::zero(l);
                    for r in parabolic_positive_roots(&rs, &gens) {
                        two_rho_i = &two_rho_i + &r;
                    }
                    // 2h^∨ ν_I
                    let two_h_nu = &rs.rho().scaled(2) - &two_rho_i;
                    for &i in &gens {
                        let root = if i == 0 { rs.highest_root().scaled(-1) } else { rs.simple_root(i).clone() };
                        let coroot_pair = |v: &Weight| -> i64 {
                            if i == 0 {
                                -rs.theta_pairing(v)
                            } else {
                                v[i - 1]
                            }
                        };
                        for a in -4..=4i64 {
                            for b in -4..=4i64 {
                                let lam: Weight = if l == 1 { Weight::from([a]) } else { Weight::from([a, b]) };
                                if l == 1 && b != 0 {
                                    continue;
                                }
                                let x2h = (&lam + rs.rho()).scaled(2 * h);
                                let y = &x2h - &two_h_nu.scaled(m);
                                let mut wy = y.clone();
                                // pairing of a scaled vector with the coroot
                                wy.add_scaled(-coroot_pair(&y), &root);
                                let lhs = &wy + &two_h_nu.scaled(m);
                                let rhs = (&c.star_reflect(i, &lam).unwrap() + rs.rho()).scaled(2 * h);
                                assert_eq!(lhs, rhs, "{name} k={k} face={face:?} s_{i} λ={lam:?}");
                            }
                        }
                    }
                }
            }
        }
    }
}
