//! Formal vectors of infinite support, seen through a finite window.
//!
//! A [`WindowVector`] stores the values of an integer function on weights at
//! every weight of length at most `L`. Invariant vectors are top-degree
//! cycles of the chain complex; finite-Weyl anti-invariant vectors give
//! degree-zero chains whose classes live in the Verlinde ring, and the
//! representation ring acts on them by convolution with weight systems.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::affine::{finite_generators, AffineWord, FaceIndex, StarContext};
use crate::chain::{differential, reduce_cycle_with, BoundaryWitness, ChainElement, Limits, ReduceOptions, Truncation};
use crate::combinatorics::freudenthal_multiplicities;
use crate::fusion::FusionLabel;
use crate::{Error, Result, RootSystem, Weight, WeightMap};

/// Orbit pattern a window vector is known to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    /// No claim about the values outside the stored entries.
    None,
    /// Constant along orbits of the shifted affine Weyl group.
    Invariant,
    /// Alternating in sign along orbits of the shifted finite Weyl group.
    AntiInvariant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowVector {
    window: Truncation,
    entries: WeightMap,
    pattern: Pattern,
}

impl WindowVector {
    /// Validates that the support lies in the window and that the entries
    /// follow `pattern` wherever both ends of a reflection are visible.
    pub fn new(ctx: &StarContext<'_>, window: Truncation, entries: WeightMap, pattern: Pattern) -> Result<Self> {
        for w in entries.weights() {
            ctx.rs().check_rank(w)?;
            if !in_window(ctx, window, w) {
                return Err(Error::OutsideWindow { weight: w.clone(), length: window.length });
            }
        }
        let v = WindowVector { window, entries, pattern };
        let bad = match pattern {
            Pattern::None => None,
            Pattern::Invariant => first_invariance_failure(ctx, &v),
            Pattern::AntiInvariant => first_anti_invariance_failure(ctx, &v),
        };
        match bad {
            Some(w) => Err(Error::PatternMismatch(w)),
            None => Ok(v),
        }
    }

    pub fn zero(window: Truncation) -> Self {
        WindowVector { window, entries: WeightMap::new(), pattern: Pattern::None }
    }

    /// The indicator of a single weight.
    pub fn delta(ctx: &StarContext<'_>, window: Truncation, w: Weight) -> Result<Self> {
        WindowVector::new(ctx, window, WeightMap::singleton(w, 1), Pattern::None)
    }

    pub fn window(&self) -> Truncation {
        self.window
    }

    pub fn entries(&self) -> &WeightMap {
        &self.entries
    }

    pub fn pattern(&self) -> Pattern {
        self.pattern
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.entries.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_zero()
    }

    /// Restriction to a smaller window.
    pub fn restrict(&self, ctx: &StarContext<'_>, length: usize) -> WindowVector {
        let window = Truncation { length: length.min(self.window.length), ..self.window };
        let entries = self.entries.iter().filter(|(w, _)| in_window(ctx, window, w)).map(|(w, c)| (w.clone(), c)).collect();
        WindowVector { window, entries, pattern: self.pattern }
    }

    /// `a·self + b·other` on the smaller of the two windows.
    pub fn combine(&self, ctx: &StarContext<'_>, a: i64, other: &WindowVector, b: i64) -> WindowVector {
        let length = self.window.length.min(other.window.length);
        let mut entries = self.restrict(ctx, length).entries.scaled(a);
        entries.add_map(&other.restrict(ctx, length).entries, b);
        let pattern = if self.pattern == other.pattern { self.pattern } else { Pattern::None };
        WindowVector { window: Truncation { length, ..self.window }, entries, pattern }
    }
}

fn in_window(ctx: &StarContext<'_>, window: Truncation, w: &Weight) -> bool {
    ctx.length_of_weight(w) <= window.length
}

fn first_invariance_failure(ctx: &StarContext<'_>, v: &WindowVector) -> Option<Weight> {
    for (mu, c) in v.entries.iter() {
        for i in 0..=ctx.rank() {
            let nu = ctx.reflect(i, mu);
            if nu != *mu && in_window(ctx, v.window, &nu) && v.get(&nu) != c {
                return Some(mu.clone());
            }
        }
    }
    None
}

fn first_anti_invariance_failure(ctx: &StarContext<'_>, v: &WindowVector) -> Option<Weight> {
    for (mu, c) in v.entries.iter() {
        for i in 1..=ctx.rank() {
            let nu = ctx.reflect(i, mu);
            if nu == *mu || (in_window(ctx, v.window, &nu) && v.get(&nu) != -c) {
                return Some(mu.clone());
            }
        }
    }
    None
}

/// The orbit indicator of `λ0` under the shifted affine Weyl group,
/// restricted to the window.
pub fn invariant_extension(ctx: &StarContext<'_>, lambda0: &Weight, window: Truncation) -> Result<WindowVector> {
    ctx.rs().check_rank(lambda0)?;
    let r = ctx.reduce_to_alcove(lambda0);
    if r.sign == 0 {
        return Err(Error::WallOrbit(lambda0.clone()));
    }
    let mut entries = WeightMap::new();
    if r.length > window.length {
        return Ok(WindowVector { window, entries, pattern: Pattern::Invariant });
    }
    // Every orbit point of length ≤ L is reached from the alcove point
    // through points of smaller length.
    let limit = Limits::default().max_basis;
    let mut seen: BTreeSet<Weight> = BTreeSet::new();
    let mut layer = alloc::vec![r.rep.clone()];
    seen.insert(r.rep);
    while !layer.is_empty() {
        let mut next = Vec::new();
        for x in &layer {
            for i in 0..=ctx.rank() {
                let y = ctx.reflect(i, x);
                if !seen.contains(&y) && in_window(ctx, window, &y) {
                    seen.insert(y.clone());
                    next.push(y);
                }
            }
        }
        if seen.len() > limit {
            return Err(Error::Resource { what: "orbit points in window", needed: seen.len(), limit });
        }
        layer = next;
    }
    for w in seen {
        entries.add(w, 1);
    }
    Ok(WindowVector { window, entries, pattern: Pattern::Invariant })
}

/// `Σ_{w ∈ W} ε(w) w⋆κ` restricted to the window.
pub fn anti_invariant_extension(ctx: &StarContext<'_>, kappa: &Weight, window: Truncation) -> Result<WindowVector> {
    ctx.rs().check_rank(kappa)?;
    let full = ctx.skew_symmetrize(FaceIndex::singleton(0), kappa)?;
    let entries = full.iter().filter(|(w, _)| in_window(ctx, window, w)).map(|(w, c)| (w.clone(), c)).collect();
    Ok(WindowVector { window, entries, pattern: Pattern::AntiInvariant })
}

/// `v` as the top-degree chain `Σ v(λ) (full face, λ)`.
pub fn top_degree_chain(ctx: &StarContext<'_>, v: &WindowVector) -> ChainElement {
    let full = FaceIndex::full(ctx.rank());
    let mut x = ChainElement::new();
    for (w, c) in v.entries.iter() {
        x.add(full, w.clone(), c);
    }
    x
}

/// Whether the boundary of the top-degree chain of `v` vanishes on every
/// cell whose orbit lies inside the window.
pub fn top_degree_cycle_check(ctx: &StarContext<'_>, v: &WindowVector) -> bool {
    let d = differential(ctx, &top_degree_chain(ctx, v));
    let clean = d.iter().all(|(face, w, _)| {
        let i = face.generators(ctx.rank()).trailing_zeros() as usize;
        !in_window(ctx, v.window, w) || !in_window(ctx, v.window, &ctx.reflect(i, w))
    });
    clean
}

/// Weight system of a virtual character given as highest weight ↦ coefficient.
pub fn weight_system(rs: &RootSystem, chi: &WeightMap) -> Result<WeightMap> {
    let mut out = WeightMap::new();
    for (top, c) in chi.iter() {
        for (w, m) in freudenthal_multiplicities(rs, top)?.iter() {
            out.add(w.clone(), c * m as i64);
        }
    }
    Ok(out)
}

/// How far convolution with `weights` can move a weight in length.
pub fn action_radius(ctx: &StarContext<'_>, weights: &WeightMap) -> usize {
    let rs = ctx.rs();
    let m = ctx.shifted_level();
    weights
        .weights()
        .map(|e| {
            (0..rs.positive_roots().len())
                .map(|idx| {
                    let p = rs.pair_with_coroot(e, idx).abs();
                    if p == 0 {
                        0
                    } else {
                        (p / m + 1) as usize
                    }
                })
                .sum::<usize>()
        })
        .max()
        .unwrap_or(0)
}

/// `(χ·v)(μ) = Σ_ε m_χ(ε) v(μ − ε)` on the window shrunk by the action radius.
///
/// `weights` is the weight system of `χ` (see [`weight_system`]).
pub fn module_action(ctx: &StarContext<'_>, weights: &WeightMap, v: &WindowVector) -> Result<WindowVector> {
    for w in weights.weights() {
        ctx.rs().check_rank(w)?;
    }
    let r = action_radius(ctx, weights);
    if r > v.window.length {
        return Err(Error::Resource { what: "window margin", needed: r, limit: v.window.length });
    }
    let window = Truncation { length: v.window.length - r, ..v.window };
    let mut entries = WeightMap::new();
    for (lambda, c) in v.entries.iter() {
        for (eps, m) in weights.iter() {
            let mu = lambda + eps;
            if in_window(ctx, window, &mu) {
                entries.add(mu, c * m);
            }
        }
    }
    Ok(WindowVector { window, entries, pattern: v.pattern })
}

/// Degree-zero classes of a windowed anti-invariant vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalClass {
    /// Coefficient of each alcove label; zero coefficients are omitted.
    pub classes: BTreeMap<FusionLabel, i64>,
    /// The same, per target cluster.
    pub clusters: Vec<BTreeMap<FusionLabel, i64>>,
    /// The degree-zero chain `Σ v(κ) Sk_{0}(κ)` that was reduced.
    pub chain: ChainElement,
    pub witness: BoundaryWitness,
    /// Dominant weights skipped because their finite orbit leaves the window.
    pub boundary_orbits: usize,
}

fn labels_of(ctx: &StarContext<'_>, x: &ChainElement) -> BTreeMap<FusionLabel, i64> {
    let mut out: BTreeMap<FusionLabel, i64> = BTreeMap::new();
    for (_, w, c) in x.iter() {
        let r = ctx.reduce_to_alcove(w);
        if r.sign == 0 {
            continue;
        }
        let label = FusionLabel::new(ctx, r.rep).expect("alcove representatives are labels");
        let e = out.entry(label.clone()).or_insert(0);
        *e += c * r.sign;
        if *e == 0 {
            out.remove(&label);
        }
    }
    out
}

/// Reduces the degree-zero chain of an anti-invariant window vector to the
/// alcove classes, one cluster per target alcove.
///
/// Only dominant weights whose whole finite orbit lies in the window
/// contribute.
pub fn formal_reduce(ctx: &StarContext<'_>, v: &WindowVector, targets: &[AffineWord]) -> Result<FormalClass> {
    if let Some(w) = first_anti_invariance_failure(ctx, v) {
        return Err(Error::NotAntiInvariant(w));
    }
    let gens = finite_generators(ctx.rank());
    let limit = Limits::default().max_basis;
    let mut chain = ChainElement::new();
    let mut boundary_orbits = 0;
    for (kappa, c) in v.entries.iter() {
        if !kappa.is_dominant() {
            continue;
        }
        let orbit = ctx.orbit(kappa, gens, limit)?;
        if orbit.iter().all(|(w, _)| in_window(ctx, v.window, w)) {
            chain.add_sk(ctx, FaceIndex::singleton(0), kappa, c);
        } else {
            boundary_orbits += 1;
        }
    }
    let opts = ReduceOptions { targets: targets.to_vec(), ..ReduceOptions::default() };
    let red = reduce_cycle_with(ctx, &chain, &opts)?;
    Ok(FormalClass {
        classes: labels_of(ctx, &red.canonical),
        clusters: red.clusters.iter().map(|c| labels_of(ctx, &c.canonical)).collect(),
        chain,
        witness: red.witness,
        boundary_orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::verify_witness;

    fn sys(s: &str) -> RootSystem {
        RootSystem::new(s.parse().unwrap())
    }

    fn win(length: usize) -> Truncation {
        Truncation { length, margin: 0 }
    }

    #[test]
    fn invariant_extension_examples() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        let v = invariant_extension(&c, &Weight::from([0]), win(3)).unwrap();
        let pts: Vec<i64> = v.entries().weights().map(|w| w[0]).collect();
        assert_eq!(pts, alloc::vec![-8, -6, -2, 0, 4, 6, 10]);
        assert!(top_degree_cycle_check(&c, &v));
        assert_eq!(invariant_extension(&c, &Weight::from([2]), win(3)), Err(Error::WallOrbit(Weight::from([2]))));
        assert!(invariant_extension(&c, &Weight::from([-6]), win(0)).unwrap().is_zero());
    }

    #[test]
    fn deltas_and_zero() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        assert!(top_degree_cycle_check(&c, &WindowVector::zero(win(2))));
        assert!(!top_degree_cycle_check(&c, &WindowVector::delta(&c, win(2), Weight::from([0])).unwrap()));
        assert!(top_degree_cycle_check(&c, &WindowVector::delta(&c, win(0), Weight::from([0])).unwrap()));
        assert!(matches!(
            WindowVector::delta(&c, win(0), Weight::from([4])),
            Err(Error::OutsideWindow { .. })
        ));
    }

    #[test]
    fn action_examples() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        let delta = WindowVector::delta(&c, win(3), Weight::from([0])).unwrap();
        let trivial = weight_system(&a1, &WeightMap::singleton(Weight::zero(1), 1)).unwrap();
        assert_eq!(module_action(&c, &trivial, &delta).unwrap(), delta);
        let fund = weight_system(&a1, &WeightMap::singleton(Weight::from([1]), 1)).unwrap();
        let out = module_action(&c, &fund, &delta).unwrap();
        assert_eq!(out.entries(), &[(Weight::from([-1]), 1), (Weight::from([1]), 1)].into_iter().collect());
        assert_eq!(out.window().length, 2);
        assert!(matches!(module_action(&c, &fund, &delta.restrict(&c, 0)), Err(Error::Resource { .. })));
    }

    #[test]
    fn reduce_examples() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        let v = anti_invariant_extension(&c, &Weight::from([1]), win(3)).unwrap();
        let r = formal_reduce(&c, &v, &[]).unwrap();
        let one = FusionLabel::new(&c, Weight::from([1])).unwrap();
        assert_eq!(r.classes, [(one, 1)].into_iter().collect());
        assert!(formal_reduce(&c, &WindowVector::zero(win(3)), &[]).unwrap().classes.is_empty());

        let unit = anti_invariant_extension(&c, &Weight::zero(1), win(6)).unwrap();
        let wall = weight_system(&a1, &WeightMap::singleton(Weight::from([2]), 1)).unwrap();
        let prod = module_action(&c, &wall, &unit).unwrap();
        let r = formal_reduce(&c, &prod, &[]).unwrap();
        assert!(r.classes.is_empty());
        assert!(!r.witness.z.is_zero());
        assert!(verify_witness(&c, &r.witness));

        let bad = WindowVector::delta(&c, win(3), Weight::from([0])).unwrap();
        assert_eq!(formal_reduce(&c, &bad, &[]).unwrap_err(), Error::NotAntiInvariant(Weight::from([0])));
    }
}
