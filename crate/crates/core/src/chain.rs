//! The complex `0 → E_l → ... → E_0 → 0` with `E_p = ⊕_{|I| = p+1} ℤ[Λ*]^{W_I}`.
//!
//! A chain is stored in the basis `Sk_I(λ)` where `λ` is the `W_I`-dominant
//! representative of its `⋆`-orbit. The differential is
//! `∂ Sk_I(λ) = Σ_r (−1)^r Sk_{I∖{i_r}}(λ)` over the sorted members `i_r` of `I`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;

use crate::affine::{AffineWord, FaceIndex, GenMask, StarContext, Subgroup, DEFAULT_GROUP_LIMIT};
use crate::combinatorics::alcove_weights;
use crate::root_data::parabolic_positive_roots;
use crate::snf::{smith_normal_form, SparseMatrix};
use crate::{Error, Result, Weight};

/// Finite integer combination of basis elements `Sk_I(λ)`.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct ChainElement(BTreeMap<(FaceIndex, Weight), i64>);

impl ChainElement {
    pub fn new() -> Self {
        ChainElement(BTreeMap::new())
    }

    /// Adds `c` to the coefficient of an already canonical key.
    pub fn add(&mut self, face: FaceIndex, w: Weight, c: i64) {
        self.add_key((face, w), c);
    }

    fn add_key(&mut self, key: (FaceIndex, Weight), c: i64) {
        if c == 0 {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.0.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    /// Adds `c · Sk_I(λ)` for an arbitrary `λ`, rewriting it in the canonical
    /// basis (and dropping it if `λ` is fixed by a reflection of `W_I`).
    pub fn add_sk(&mut self, ctx: &StarContext<'_>, face: FaceIndex, w: &Weight, c: i64) {
        if let Some((rep, sign)) = ctx.canonicalize(face, w) {
            self.add_key((face, rep), sign * c);
        }
    }

    pub fn add_chain(&mut self, other: &ChainElement, factor: i64) {
        for (k, &c) in &other.0 {
            self.add_key(k.clone(), c * factor);
        }
    }

    pub fn get(&self, face: FaceIndex, w: &Weight) -> i64 {
        self.0.get(&(face, w.clone())).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FaceIndex, &Weight, i64)> + '_ {
        self.0.iter().map(|((f, w), &c)| (*f, w, c))
    }

    pub fn scaled(&self, factor: i64) -> ChainElement {
        let mut out = ChainElement::new();
        out.add_chain(self, factor);
        out
    }

    pub fn difference(&self, other: &ChainElement) -> ChainElement {
        let mut out = self.clone();
        out.add_chain(other, -1);
        out
    }

    /// Degrees `|I| − 1` occurring in the support.
    pub fn degrees(&self) -> BTreeSet<usize> {
        self.0.keys().map(|(f, _)| f.degree()).collect()
    }

    /// Whether every key is canonical for `ctx`.
    pub fn is_canonical(&self, ctx: &StarContext<'_>) -> bool {
        self.0.keys().all(|(f, w)| ctx.canonicalize(*f, w).is_some_and(|(r, s)| &r == w && s == 1))
    }

    /// Builds a chain from raw terms, canonicalizing every key.
    pub fn from_terms(ctx: &StarContext<'_>, terms: &[ChainTerm]) -> Result<Self> {
        let mut out = ChainElement::new();
        for t in terms {
            ctx.rs().check_rank(&t.weight)?;
            t.face.check(ctx.rank())?;
            out.add_sk(ctx, t.face, &t.weight, t.coefficient);
        }
        Ok(out)
    }

    pub fn terms(&self) -> Vec<ChainTerm> {
        self.iter().map(|(face, w, coefficient)| ChainTerm { coefficient, face, weight: w.clone() }).collect()
    }
}

/// `COEF*FACE/WEIGHT` terms separated by spaces; `0` for the zero chain.
impl fmt::Display for ChainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (n, t) in self.terms().iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ChainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// One term `c · Sk_I(λ)` with no canonicalization applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainTerm {
    pub coefficient: i64,
    pub face: FaceIndex,
    pub weight: Weight,
}

impl fmt::Display for ChainTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}/{}", self.coefficient, self.face, self.weight)
    }
}

impl FromStr for ChainTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(alloc::format!("expected COEF*FACE/WEIGHT, got `{s}`"));
        let (coef, rest) = match s.split_once('*') {
            Some((c, r)) => (c.trim().parse::<i64>().map_err(|_| bad())?, r),
            None => (1, s),
        };
        let (face, weight) = rest.split_once('/').ok_or_else(bad)?;
        Ok(ChainTerm { coefficient: coef, face: face.parse()?, weight: weight.parse()? })
    }
}

/// Parses whitespace- or `;`-separated terms.
pub fn parse_terms(s: &str) -> Result<Vec<ChainTerm>> {
    s.split(|c: char| c.is_whitespace() || c == ';').filter(|t| !t.is_empty()).map(str::parse).collect()
}

/// `∂ Sk_I(λ)` for any `λ`, in the canonical basis.
pub fn boundary_of(ctx: &StarContext<'_>, face: FaceIndex, w: &Weight) -> ChainElement {
    let mut out = ChainElement::new();
    for (r, i) in face.members().into_iter().enumerate() {
        if let Some(smaller) = face.without(i) {
            out.add_sk(ctx, smaller, w, if r % 2 == 0 { 1 } else { -1 });
        }
    }
    out
}

pub fn differential(ctx: &StarContext<'_>, x: &ChainElement) -> ChainElement {
    let mut out = ChainElement::new();
    for (face, w, c) in x.iter() {
        out.add_chain(&boundary_of(ctx, face, w), c);
    }
    out
}

/// Finite window of the complex: the basis keys `(I, λ)` whose `W_I`-orbit
/// contains a weight of length at most `length`.
///
/// Such keys form a subcomplex, because enlarging the group only enlarges
/// the orbit. `margin` is the largest number of positive roots of a
/// parabolic subgroup `W_{i}`, i.e. the most a single basis element's orbit
/// can reach beyond the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub length: usize,
    pub margin: usize,
}

impl Truncation {
    pub fn new(ctx: &StarContext<'_>, length: usize) -> Self {
        Truncation { length, margin: longest_parabolic_length(ctx) }
    }
}

/// `max_i |Φ^+(W_{{i}})|`, the length of the longest element among the
/// maximal parabolic subgroups.
pub fn longest_parabolic_length(ctx: &StarContext<'_>) -> usize {
    let l = ctx.rank();
    (0..=l)
        .map(|i| {
            let gens: Vec<usize> = (0..=l).filter(|&j| j != i).collect();
            parabolic_positive_roots(ctx.rs(), &gens).len()
        })
        .max()
        .unwrap_or(0)
}

/// Weights `λ` with `λ_i ≥ −1` and `⟨λ, θ^∨⟩ ≤ k + 1`: the closed alcove.
pub fn closed_alcove_weights(ctx: &StarContext<'_>) -> Vec<Weight> {
    let rho = ctx.rs().rho();
    let interior_bound = ctx.level() + ctx.rs().dual_coxeter() as u32;
    alcove_weights(ctx.rs(), interior_bound).into_iter().map(|x| &x - rho).collect()
}

/// All weights of length at most `length`, sorted.
pub fn weights_within(ctx: &StarContext<'_>, length: usize, limit: usize) -> Result<Vec<Weight>> {
    let mut seen: BTreeSet<Weight> = closed_alcove_weights(ctx).into_iter().collect();
    let mut layer: Vec<Weight> = seen.iter().cloned().collect();
    for _ in 0..length {
        let mut next = Vec::new();
        for x in &layer {
            for i in 0..=ctx.rank() {
                let y = ctx.reflect(i, x);
                if !seen.contains(&y) && ctx.length_of_weight(&y) <= length {
                    seen.insert(y.clone());
                    next.push(y);
                }
            }
        }
        if seen.len() > limit {
            return Err(Error::Resource { what: "weights in window", needed: seen.len(), limit });
        }
        layer = next;
    }
    Ok(seen.into_iter().collect())
}

/// Basis of `ℤ[Λ*]^{W_I}` inside the truncation, as canonical representatives.
pub fn canonical_basis(ctx: &StarContext<'_>, face: FaceIndex, trunc: &Truncation) -> Result<Vec<Weight>> {
    face.check(ctx.rank())?;
    let weights = weights_within(ctx, trunc.length, Limits::default().max_basis)?;
    Ok(basis_from(ctx, face, &weights))
}

fn basis_from(ctx: &StarContext<'_>, face: FaceIndex, weights: &[Weight]) -> Vec<Weight> {
    let set: BTreeSet<Weight> = weights.iter().filter_map(|w| ctx.canonicalize(face, w).map(|(r, _)| r)).collect();
    set.into_iter().collect()
}

/// Size limits for truncated complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of basis elements across all degrees.
    pub max_basis: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_basis: 500_000 }
    }
}

/// The truncated complex with explicit bases in every degree.
#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    rank: usize,
    bases: Vec<Vec<(FaceIndex, Weight)>>,
    index: Vec<BTreeMap<(FaceIndex, Weight), usize>>,
}

impl TruncatedComplex {
    pub fn build(ctx: &StarContext<'_>, trunc: &Truncation, limits: &Limits) -> Result<Self> {
        let l = ctx.rank();
        let weights = weights_within(ctx, trunc.length, limits.max_basis)?;
        let mut bases = vec![Vec::new(); l + 1];
        let mut total = 0usize;
        for size in 1..=l + 1 {
            for face in FaceIndex::all_of_size(l, size) {
                let b = basis_from(ctx, face, &weights);
                total += b.len();
                if total > limits.max_basis {
                    return Err(Error::Resource { what: "basis size", needed: total, limit: limits.max_basis });
                }
                bases[size - 1].extend(b.into_iter().map(|w| (face, w)));
            }
        }
        let index = bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect()).collect();
        Ok(TruncatedComplex { rank: l, bases, index })
    }

    pub fn top_degree(&self) -> usize {
        self.rank
    }

    pub fn basis(&self, degree: usize) -> &[(FaceIndex, Weight)] {
        &self.bases[degree]
    }

    pub fn dimension(&self, degree: usize) -> usize {
        self.bases[degree].len()
    }

    pub fn contains(&self, face: FaceIndex, w: &Weight) -> bool {
        self.index[face.degree()].contains_key(&(face, w.clone()))
    }

    /// Matrix of `∂: E_p → E_{p−1}` for `p ≥ 1` (columns are degree `p`).
    pub fn boundary_matrix(&self, ctx: &StarContext<'_>, degree: usize) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.dimension(degree - 1), self.dimension(degree));
        for (col, (face, w)) in self.bases[degree].iter().enumerate() {
            for (f, v, c) in boundary_of(ctx, *face, w).iter() {
                let row = self.index[degree - 1][&(f, v.clone())];
                m.add(row, col, c);
            }
        }
        m
    }

    /// Checks `∂∂ = 0` on every basis element; returns the first offender.
    pub fn check_d_squared(&self, ctx: &StarContext<'_>) -> core::result::Result<usize, (FaceIndex, Weight)> {
        let mut checked = 0;
        for basis in &self.bases {
            for (face, w) in basis {
                let mut once = ChainElement::new();
                once.add(*face, w.clone(), 1);
                if !differential(ctx, &differential(ctx, &once)).is_zero() {
                    return Err((*face, w.clone()));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}

/// Homology in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub degree: usize,
    pub chain_rank: usize,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub truncation: Truncation,
    pub degrees: Vec<DegreeHomology>,
    /// `|𝔄_k|`.
    pub alcove_size: usize,
}

impl HomologyReport {
    /// Rank `|𝔄_k|` in degree 0, and nothing else, torsion included.
    pub fn matches_expected(&self) -> bool {
        self.degrees.iter().all(|d| {
            let want = if d.degree == 0 { self.alcove_size } else { 0 };
            d.free_rank == want && d.torsion.is_empty()
        })
    }
}

/// Homology of the truncated complex via Smith normal forms.
pub fn homology_snf(ctx: &StarContext<'_>, trunc: &Truncation, limits: &Limits) -> Result<HomologyReport> {
    let complex = TruncatedComplex::build(ctx, trunc, limits)?;
    Ok(homology_of(ctx, &complex, trunc))
}

pub fn homology_of(ctx: &StarContext<'_>, complex: &TruncatedComplex, trunc: &Truncation) -> HomologyReport {
    let l = complex.top_degree();
    // forms[p] is the Smith form of ∂_p, p = 1..=l
    let mut forms = vec![None; l + 2];
    for (p, slot) in forms.iter_mut().enumerate().take(l + 1).skip(1) {
        *slot = Some(smith_normal_form(&complex.boundary_matrix(ctx, p)));
    }
    let rank_of = |p: usize| forms[p].as_ref().map_or(0, |f| f.rank());
    let degrees = (0..=l)
        .map(|p| DegreeHomology {
            degree: p,
            chain_rank: complex.dimension(p),
            free_rank: complex.dimension(p) - rank_of(p) - rank_of(p + 1),
            torsion: forms[p + 1].as_ref().map_or(Vec::new(), |f| f.torsion()),
        })
        .collect();
    HomologyReport { truncation: *trunc, degrees, alcove_size: alcove_weights(ctx.rs(), ctx.level()).len() }
}

/// A chain `z` one degree up with `∂z = x − y`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BoundaryWitness {
    pub z: ChainElement,
    pub x: ChainElement,
    pub y: ChainElement,
}

/// Recomputes `∂z` and compares it with `x − y` exactly.
pub fn verify_witness(ctx: &StarContext<'_>, w: &BoundaryWitness) -> bool {
    differential(ctx, &w.z) == w.x.difference(&w.y)
}

/// One elimination: the term at `weight` on `face` was cancelled against the
/// boundary of the face enlarged by `generator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelStep {
    pub face: FaceIndex,
    pub enlarged: FaceIndex,
    pub generator: usize,
    pub weight: Weight,
    pub coefficient: i64,
    pub distance: usize,
}

impl fmt::Display for PeelStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "distance {}: {:?} -> {:?} via s_{} at {} with coefficient {}",
            self.distance, self.face, self.enlarged, self.generator, self.weight, self.coefficient
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Target alcoves; the empty list means the fundamental alcove.
    pub targets: Vec<AffineWord>,
    pub max_steps: usize,
    pub trace: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { targets: vec![AffineWord::identity()], max_steps: 1_000_000, trace: false }
    }
}

/// The part of a reduction attached to one target alcove.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterReduction {
    pub target: AffineWord,
    pub input: ChainElement,
    pub canonical: ChainElement,
    pub z: ChainElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub canonical: ChainElement,
    pub witness: BoundaryWitness,
    pub clusters: Vec<ClusterReduction>,
    pub trace: Vec<PeelStep>,
}

/// Word distance from the target point `t ⋆ λ0` to a weight `μ = v ⋆ λ0`,
/// where `λ0` is the alcove representative of `μ`. With `route_walls`,
/// orbits meeting a wall are measured from `λ0` itself, so elimination
/// carries them to the fundamental alcove, where they cancel.
struct Distance<'c, 'a> {
    ctx: &'c StarContext<'a>,
    target: AffineWord,
    route_walls: bool,
    stabilizers: BTreeMap<GenMask, Subgroup>,
    cache: BTreeMap<Weight, usize>,
}

impl<'c, 'a> Distance<'c, 'a> {
    fn new(ctx: &'c StarContext<'a>, target: &AffineWord, route_walls: bool) -> Result<Self> {
        target.check(ctx.rank())?;
        Ok(Distance { ctx, target: target.clone(), route_walls, stabilizers: BTreeMap::new(), cache: BTreeMap::new() })
    }

    fn of(&mut self, w: &Weight) -> Result<usize> {
        if let Some(&d) = self.cache.get(w) {
            return Ok(d);
        }
        let ctx = self.ctx;
        let r = ctx.reduce_to_alcove(w);
        let base = r.word.letters().iter().fold(Weight::zero(ctx.rank()), |x, &i| ctx.reflect(i, &x));
        let letters = self.target.letters().to_vec();
        let finish = |x: Weight| letters.iter().fold(x, |x, &i| ctx.reflect(i, &x));
        let stab: GenMask = (0..=ctx.rank()).filter(|&i| ctx.is_fixed(i, &r.rep)).fold(0, |m, i| m | (1 << i));
        let d = if stab == 0 {
            ctx.length_of_weight(&finish(base))
        } else {
            if let alloc::collections::btree_map::Entry::Vacant(e) = self.stabilizers.entry(stab) {
                e.insert(ctx.subgroup(stab, DEFAULT_GROUP_LIMIT)?);
            }
            let g = &self.stabilizers[&stab];
            let end = |x: Weight| if self.route_walls { x } else { finish(x) };
            (0..g.len()).map(|i| ctx.length_of_weight(&end(g.apply(i, &base)))).min().unwrap_or(0)
        };
        self.cache.insert(w.clone(), d);
        Ok(d)
    }

    /// The point of the `W_I`-orbit of `w` closest to the target, found by
    /// descending one reflection at a time.
    fn gate(&mut self, face: FaceIndex, w: &Weight) -> Result<(Weight, usize)> {
        let gens = face.generators(self.ctx.rank());
        let mut cur = w.clone();
        let mut d = self.of(&cur)?;
        'descend: loop {
            for j in 0..=self.ctx.rank() {
                if gens & (1 << j) == 0 {
                    continue;
                }
                let next = self.ctx.reflect(j, &cur);
                let nd = self.of(&next)?;
                if nd < d {
                    cur = next;
                    d = nd;
                    continue 'descend;
                }
            }
            return Ok((cur, d));
        }
    }
}

/// Rewrites a cycle into a homologous one supported on the target alcoves,
/// with a witness `z` such that `∂z = x − canonical`.
pub fn reduce_cycle(ctx: &StarContext<'_>, x: &ChainElement, targets: &[AffineWord]) -> Result<(ChainElement, BoundaryWitness)> {
    let opts = ReduceOptions {
        targets: if targets.is_empty() { vec![AffineWord::identity()] } else { targets.to_vec() },
        ..ReduceOptions::default()
    };
    let r = reduce_cycle_with(ctx, x, &opts)?;
    Ok((r.canonical, r.witness))
}

pub fn reduce_cycle_with(ctx: &StarContext<'_>, x: &ChainElement, opts: &ReduceOptions) -> Result<Reduction> {
    let boundary = differential(ctx, x);
    if !boundary.is_zero() {
        return Err(Error::NotACycle { terms: boundary.len() });
    }
    let targets: Vec<AffineWord> = if opts.targets.is_empty() { vec![AffineWord::identity()] } else { opts.targets.clone() };
    let mut dists: Vec<Distance<'_, '_>> = targets.iter().map(|t| Distance::new(ctx, t, true)).collect::<Result<_>>()?;

    // Split by nearest target.
    let mut parts = vec![ChainElement::new(); targets.len()];
    let mut nearness: Vec<Distance<'_, '_>> = targets.iter().map(|t| Distance::new(ctx, t, false)).collect::<Result<_>>()?;
    for (face, w, c) in x.iter() {
        let mut best = (usize::MAX, 0);
        for (n, d) in nearness.iter_mut().enumerate() {
            let (_, dd) = d.gate(face, w)?;
            if dd < best.0 {
                best = (dd, n);
            }
        }
        parts[best.1].add(face, w.clone(), c);
    }
    if targets.len() > 1 {
        for (n, p) in parts.iter().enumerate() {
            if !differential(ctx, p).is_zero() {
                return Err(Error::ClustersNotSeparated { cluster: n });
            }
        }
    }

    let mut trace = Vec::new();
    let mut clusters = Vec::new();
    let mut canonical = ChainElement::new();
    let mut z_total = ChainElement::new();
    let mut steps = 0usize;
    for ((target, part), dist) in targets.into_iter().zip(parts).zip(dists.iter_mut()) {
        let (y, z) = eliminate(ctx, &part, dist, opts, &mut steps, &mut trace)?;
        canonical.add_chain(&y, 1);
        z_total.add_chain(&z, 1);
        clusters.push(ClusterReduction { target, input: part, canonical: y, z });
    }
    Ok(Reduction {
        canonical: canonical.clone(),
        witness: BoundaryWitness { z: z_total, x: x.clone(), y: canonical },
        clusters,
        trace,
    })
}

type Key = (FaceIndex, Weight);

/// Cancels cells from the farthest orbit point inwards.
///
/// At the orbit point `μ` currently farthest from the target, let `D` be the
/// generators whose reflection brings `μ` closer, and `t` the smallest
/// generator outside `D` that moves `μ`. Every cell at `μ` whose face misses
/// `t` is cancelled by the boundary of the face enlarged by `t`; the other
/// faces of that boundary are either closer to the target or contain `t`.
/// Since the input is a cycle, the cells containing `t` cancel on their own,
/// except single vertices on the target itself.
fn eliminate(
    ctx: &StarContext<'_>,
    x: &ChainElement,
    dist: &mut Distance<'_, '_>,
    opts: &ReduceOptions,
    steps: &mut usize,
    trace: &mut Vec<PeelStep>,
) -> Result<(ChainElement, ChainElement)> {
    let l = ctx.rank();
    let mut residual = x.clone();
    let mut z = ChainElement::new();
    let mut done = ChainElement::new();
    let mut queue: BTreeMap<(usize, Weight), BTreeSet<Key>> = BTreeMap::new();
    let mut gates: BTreeMap<Key, (Weight, usize)> = BTreeMap::new();

    fn enqueue(
        dist: &mut Distance<'_, '_>,
        gates: &mut BTreeMap<Key, (Weight, usize)>,
        queue: &mut BTreeMap<(usize, Weight), BTreeSet<Key>>,
        key: Key,
    ) -> Result<()> {
        let (g, d) = match gates.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = dist.gate(key.0, &key.1)?;
                gates.insert(key.clone(), v.clone());
                v
            }
        };
        queue.entry((d, g)).or_default().insert(key);
        Ok(())
    }

    for (face, w, _) in x.iter() {
        enqueue(dist, &mut gates, &mut queue, (face, w.clone()))?;
    }

    while let Some(((d, mu), keys)) = queue.pop_last() {
        let live: Vec<Key> = keys.into_iter().filter(|(f, w)| residual.get(*f, w) != 0).collect();
        if live.is_empty() {
            continue;
        }
        let mut descent: GenMask = 0;
        let mut fixed: GenMask = 0;
        for j in 0..=l {
            let nb = ctx.reflect(j, &mu);
            if nb == mu {
                fixed |= 1 << j;
            } else if dist.of(&nb)? < d {
                descent |= 1 << j;
            }
        }
        let t = (0..=l).find(|&j| (descent | fixed) & (1 << j) == 0).ok_or_else(|| Error::Stalled(mu.clone()))?;

        let mut leftovers: Vec<Key> = Vec::new();
        for (face, w) in live {
            if face.contains(t) {
                leftovers.push((face, w));
                continue;
            }
            let c = residual.get(face, &w);
            if c == 0 {
                continue;
            }
            *steps += 1;
            if *steps > opts.max_steps {
                return Err(Error::Resource { what: "reduction steps", needed: *steps, limit: opts.max_steps });
            }
            let (_, eps) = ctx.canonicalize(face, &mu).ok_or_else(|| Error::Stalled(mu.clone()))?;
            let enlarged = face.with(t);
            let a = c * eps * if enlarged.position(t) % 2 == 0 { 1 } else { -1 };
            z.add_sk(ctx, enlarged, &mu, a);
            let b = boundary_of(ctx, enlarged, &mu);
            residual.add_chain(&b, -a);
            for (f, v, _) in b.iter() {
                if residual.get(f, v) != 0 {
                    enqueue(dist, &mut gates, &mut queue, (f, v.clone()))?;
                }
            }
            if opts.trace {
                trace.push(PeelStep { face, enlarged, generator: t, weight: mu.clone(), coefficient: a, distance: d });
            }
        }
        if let Some(extra) = queue.remove(&(d, mu.clone())) {
            leftovers.extend(extra);
        }
        leftovers.sort();
        leftovers.dedup();
        for (face, w) in leftovers {
            let c = residual.get(face, &w);
            if c == 0 {
                continue;
            }
            if d == 0 && face.len() == 1 {
                done.add(face, w.clone(), c);
                residual.add(face, w, -c);
            } else {
                return Err(Error::Stalled(mu));
            }
        }
    }
    debug_assert!(residual.is_zero());
    Ok((done, z))
}

/// Renders a homology report as plain text lines.
pub fn format_report(r: &HomologyReport) -> String {
    let mut s = String::new();
    for d in &r.degrees {
        s.push_str(&alloc::format!(
            "degree {}: chains {}, rank {}, torsion [{}]\n",
            d.degree,
            d.chain_rank,
            d.free_rank,
            d.torsion.iter().map(|t| alloc::format!("{t}")).collect::<Vec<_>>().join(",")
        ));
    }
    s
}
