//! The level-k Verlinde ring: fusion products by alcove reflection, and the
//! numeric audit at the special points `t_λ = exp((λ+ρ)/(k+h^∨))`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::affine::StarContext;
use crate::combinatorics::{alcove_weights, tensor_decompose, CharacterEvaluator, RationalWeight};
use crate::{Error, LieType, Result, Weight, WeightMap};

/// Below this modulus a character value counts as zero.
pub const VANISHING_TOLERANCE: f64 = 1e-8;
/// Agreement required between `Σ N χ_ν(t_σ)` and `χ_λ(t_σ) χ_μ(t_σ)`.
pub const PRODUCT_TOLERANCE: f64 = 1e-6;

/// A weight of the level-k alcove `𝔄_k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FusionLabel(Weight);

impl FusionLabel {
    pub fn new(ctx: &StarContext<'_>, w: Weight) -> Result<Self> {
        ctx.rs().check_rank(&w)?;
        if ctx.in_alcove(&w) {
            Ok(FusionLabel(w))
        } else {
            Err(Error::OutsideAlcove { label: w, level: ctx.level() })
        }
    }

    pub fn weight(&self) -> &Weight {
        &self.0
    }

    pub fn into_weight(self) -> Weight {
        self.0
    }
}

impl fmt::Display for FusionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for FusionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

/// Reduces a classical character (highest weight ↦ coefficient) to the
/// alcove: each term moves to its alcove representative with sign, walls
/// are dropped.
pub fn reduce_character(ctx: &StarContext<'_>, chi: &WeightMap) -> WeightMap {
    let mut out = WeightMap::new();
    for (w, c) in chi.iter() {
        let r = ctx.reduce_to_alcove(w);
        if r.sign != 0 {
            out.add(r.rep, r.sign * c);
        }
    }
    out
}

/// `λ ⊗_k μ = Σ_ν N_{λμ}^ν ν`.
pub fn fusion_product(ctx: &StarContext<'_>, a: &FusionLabel, b: &FusionLabel) -> Result<BTreeMap<FusionLabel, u64>> {
    let classical = tensor_decompose(ctx.rs(), &a.0, &b.0)?;
    let mut out = BTreeMap::new();
    for (w, c) in reduce_character(ctx, &classical).iter() {
        debug_assert!(c > 0, "negative fusion coefficient at {w}");
        out.insert(FusionLabel(w.clone()), c as u64);
    }
    Ok(out)
}

/// `ξ = (λ+ρ)/m` for a label `λ`.
pub fn special_point(ctx: &StarContext<'_>, label: &FusionLabel) -> RationalWeight {
    RationalWeight::new(&label.0 + ctx.rs().rho(), ctx.shifted_level())
}

/// `χ_μ(t_λ)`.
pub fn character_at_special_point(ctx: &StarContext<'_>, top: &Weight, label: &FusionLabel) -> Result<Complex64> {
    CharacterEvaluator::new(ctx.rs(), &special_point(ctx, label))?.value(top)
}

/// Characters at every special point of the level, one evaluator per point.
pub struct SpecialPoints<'a> {
    labels: Vec<FusionLabel>,
    evaluators: Vec<CharacterEvaluator<'a>>,
}

impl<'a> SpecialPoints<'a> {
    pub fn new(ctx: &StarContext<'a>) -> Result<Self> {
        let labels: Vec<FusionLabel> = alcove_weights(ctx.rs(), ctx.level()).into_iter().map(FusionLabel).collect();
        let evaluators = labels
            .iter()
            .map(|l| CharacterEvaluator::new(ctx.rs(), &special_point(ctx, l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpecialPoints { labels, evaluators })
    }

    pub fn labels(&self) -> &[FusionLabel] {
        &self.labels
    }

    /// `χ_μ(t_σ)` for every `σ`, in label order.
    pub fn values(&self, top: &Weight) -> Result<Vec<Complex64>> {
        self.evaluators.iter().map(|e| e.value(top)).collect()
    }

    /// Values of a virtual character given as highest weight ↦ coefficient.
    pub fn combination(&self, chi: &WeightMap) -> Result<Vec<Complex64>> {
        let mut acc = alloc::vec![Complex64::new(0.0, 0.0); self.labels.len()];
        for (w, c) in chi.iter() {
            for (a, v) in acc.iter_mut().zip(self.values(w)?) {
                *a += v * c as f64;
            }
        }
        Ok(acc)
    }
}

/// Whether the virtual character (highest weight ↦ coefficient) vanishes at
/// every special point of the level.
pub fn fusion_ideal_member(ctx: &StarContext<'_>, chi: &WeightMap) -> Result<bool> {
    let points = SpecialPoints::new(ctx)?;
    Ok(points.combination(chi)?.iter().all(|v| v.norm() < VANISHING_TOLERANCE))
}

/// Structure constants of `R_k(G)` over the labels of `𝔄_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTable {
    lie_type: LieType,
    level: u32,
    labels: Vec<Weight>,
    /// `products[i][j]` maps label indices to `N_{ij}^n`.
    products: Vec<Vec<BTreeMap<usize, u64>>>,
}

impl FusionTable {
    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn labels(&self) -> &[Weight] {
        &self.labels
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.labels.binary_search(w).ok()
    }

    /// `N_{ij}^n`.
    pub fn coefficient(&self, i: usize, j: usize, n: usize) -> u64 {
        self.products[i][j].get(&n).copied().unwrap_or(0)
    }

    /// The product of labels `i` and `j` as label index ↦ multiplicity.
    pub fn product(&self, i: usize, j: usize) -> &BTreeMap<usize, u64> {
        &self.products[i][j]
    }
}

/// Builds the full table; symmetric products are computed once.
pub fn build_fusion_table(ctx: &StarContext<'_>) -> Result<FusionTable> {
    let labels = alcove_weights(ctx.rs(), ctx.level());
    let n = labels.len();
    let mut products = alloc::vec![alloc::vec![BTreeMap::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let p = fusion_product(ctx, &FusionLabel(labels[i].clone()), &FusionLabel(labels[j].clone()))?;
            let row: BTreeMap<usize, u64> = p
                .into_iter()
                .map(|(w, c)| (labels.binary_search(&w.0).expect("fusion output lies in the alcove"), c))
                .collect();
            products[j][i] = row.clone();
            products[i][j] = row;
        }
    }
    Ok(FusionTable { lie_type: ctx.rs().lie_type(), level: ctx.level(), labels, products })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RootSystem;

    fn sys(s: &str) -> RootSystem {
        RootSystem::new(s.parse().unwrap())
    }

    fn label(ctx: &StarContext<'_>, w: &[i64]) -> FusionLabel {
        FusionLabel::new(ctx, Weight::new(w.to_vec())).unwrap()
    }

    #[test]
    fn product_examples() {
        let a1 = sys("A1");
        let c1 = StarContext::new(&a1, 1);
        let p = fusion_product(&c1, &label(&c1, &[1]), &label(&c1, &[1])).unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), alloc::vec![(label(&c1, &[0]), 1)]);
        let c2 = StarContext::new(&a1, 2);
        let p = fusion_product(&c2, &label(&c2, &[1]), &label(&c2, &[1])).unwrap();
        assert_eq!(p.into_iter().collect::<Vec<_>>(), alloc::vec![(label(&c2, &[0]), 1), (label(&c2, &[2]), 1)]);
        assert!(FusionLabel::new(&c1, Weight::from([2])).is_err());
    }

    #[test]
    fn special_point_values() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        let zero = label(&c, &[0]);
        assert!(character_at_special_point(&c, &Weight::from([2]), &zero).unwrap().norm() < VANISHING_TOLERANCE);
        let v = character_at_special_point(&c, &Weight::from([1]), &zero).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!((character_at_special_point(&c, &Weight::zero(1), &zero).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn ideal_membership() {
        let a1 = sys("A1");
        let c = StarContext::new(&a1, 1);
        assert!(fusion_ideal_member(&c, &WeightMap::singleton(Weight::from([2]), 1)).unwrap());
        assert!(!fusion_ideal_member(&c, &WeightMap::singleton(Weight::from([0]), 1)).unwrap());
        let mut zero = WeightMap::singleton(Weight::from([1]), 1);
        zero.add(Weight::from([1]), -1);
        assert!(fusion_ideal_member(&c, &zero).unwrap());
    }

    #[test]
    fn small_tables() {
        let a1 = sys("A1");
        let t = build_fusion_table(&StarContext::new(&a1, 1)).unwrap();
        assert_eq!(t.labels(), &[Weight::from([0]), Weight::from([1])]);
        assert_eq!(t.coefficient(1, 1, 0), 1);
        assert_eq!(t.coefficient(1, 1, 1), 0);
        let t = build_fusion_table(&StarContext::new(&a1, 0)).unwrap();
        assert_eq!(t.labels().len(), 1);
        assert_eq!(t.coefficient(0, 0, 0), 1);
        let a2 = sys("A2");
        let t = build_fusion_table(&StarContext::new(&a2, 1)).unwrap();
        let ix = |w: [i64; 2]| t.index_of(&Weight::from(w)).unwrap();
        assert_eq!(t.product(ix([1, 0]), ix([0, 1])).clone(), [(ix([0, 0]), 1)].into_iter().collect());
        assert_eq!(t.product(ix([1, 0]), ix([1, 0])).clone(), [(ix([0, 1]), 1)].into_iter().collect());
    }
}
