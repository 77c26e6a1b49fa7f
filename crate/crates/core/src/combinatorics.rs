//! Classical representation theory: alcove weights, weight multiplicities,
//! tensor products and numeric character values.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_complex::Complex64;

use crate::affine::{finite_generators, StarContext};
use crate::root_data::WeylElement;
use crate::{Error, Result, RootSystem, Weight, WeightMap, WeightMultiset};

/// All `λ` with `λ_i ≥ 0` and `⟨λ, θ^∨⟩ ≤ k`, in lexicographic order.
pub fn alcove_weights(rs: &RootSystem, k: u32) -> Vec<Weight> {
    fn go(comarks: &[i64], budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Weight>) {
        let i = prefix.len();
        if i == comarks.len() {
            out.push(Weight::new(prefix.clone()));
            return;
        }
        for c in 0..=budget / comarks[i] {
            prefix.push(c);
            go(comarks, budget - c * comarks[i], prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(rs.comarks(), k as i64, &mut Vec::new(), &mut out);
    out
}

fn require_dominant(rs: &RootSystem, w: &Weight) -> Result<()> {
    rs.check_rank(w)?;
    if w.is_dominant() {
        Ok(())
    } else {
        Err(Error::NotDominant(w.clone()))
    }
}

fn dot(a: &Weight, v: &[i128]) -> i128 {
    a.labels().iter().zip(v).map(|(&x, &y)| x as i128 * y).sum()
}

fn qform_times(rs: &RootSystem, w: &Weight) -> Vec<i128> {
    let (q, _) = rs.qform_scaled();
    q.iter().map(|row| row.iter().zip(w.labels()).map(|(&a, &b)| a as i128 * b as i128).sum()).collect()
}

/// Multiplicities of the dominant weights of `V_λ`, highest first.
///
/// Freudenthal's recursion run over dominant weights only; multiplicities
/// of other weights are read off their dominant conjugates.
pub fn dominant_multiplicities(rs: &RootSystem, top: &Weight) -> Result<Vec<(Weight, u64)>> {
    require_dominant(rs, top)?;
    let roots = rs.positive_roots();
    let heights: Vec<i64> = rs.positive_root_coords().iter().map(|c| c.iter().sum()).collect();

    // Every dominant weight of V_λ is reached from λ by subtracting positive
    // roots without leaving the dominant chamber.
    let mut depth: BTreeMap<Weight, i64> = BTreeMap::new();
    depth.insert(top.clone(), 0);
    let mut stack = vec![top.clone()];
    while let Some(mu) = stack.pop() {
        let d = depth[&mu];
        for (a, h) in roots.iter().zip(&heights) {
            let nu = &mu - a;
            if nu.is_dominant() && !depth.contains_key(&nu) {
                depth.insert(nu.clone(), d + h);
                stack.push(nu);
            }
        }
    }
    let mut order: Vec<(i64, Weight)> = depth.into_iter().map(|(w, d)| (d, w)).collect();
    order.sort();

    let q_roots: Vec<Vec<i128>> = roots.iter().map(|a| qform_times(rs, a)).collect();
    let top_rho = top + rs.rho();
    let top_norm = rs.inner_product_scaled(&top_rho, &top_rho);

    let mut mult: BTreeMap<Weight, u64> = BTreeMap::new();
    let mut out = Vec::with_capacity(order.len());
    for (_, mu) in order {
        let m = if &mu == top {
            1
        } else {
            let mut num: i128 = 0;
            for (a, qa) in roots.iter().zip(&q_roots) {
                let mut nu = &mu + a;
                loop {
                    let (dom, _) = rs.to_dominant(&nu);
                    match mult.get(&dom) {
                        Some(&k) => num += 2 * k as i128 * dot(&nu, qa),
                        None => break,
                    }
                    nu = &nu + a;
                }
            }
            let mu_rho = &mu + rs.rho();
            let den = top_norm - rs.inner_product_scaled(&mu_rho, &mu_rho);
            debug_assert!(den > 0 && num % den == 0);
            (num / den) as u64
        };
        if m > 0 {
            mult.insert(mu.clone(), m);
            out.push((mu, m));
        }
    }
    Ok(out)
}

/// The full weight system of `V_μ` with multiplicities.
pub fn freudenthal_multiplicities(rs: &RootSystem, top: &Weight) -> Result<WeightMultiset> {
    let mut out = WeightMultiset::new();
    for (mu, m) in dominant_multiplicities(rs, top)? {
        for w in rs.weyl_orbit(&mu) {
            out.insert(w, m);
        }
    }
    Ok(out)
}

/// `dim V_λ = Π_{α>0} ⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩`.
pub fn weyl_dimension(rs: &RootSystem, top: &Weight) -> Result<BigUint> {
    require_dominant(rs, top)?;
    let shifted = top + rs.rho();
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for idx in 0..rs.positive_roots().len() {
        num *= rs.pair_with_coroot(&shifted, idx) as u64;
        den *= rs.pair_with_coroot(rs.rho(), idx) as u64;
    }
    Ok(num / den)
}

/// Multiplicities of `V_ν` in `V_λ ⊗ V_μ`.
///
/// Each weight `η` of the smaller factor contributes its multiplicity, with
/// sign, to the dominant representative of `λ + η` under the shifted finite
/// Weyl group; weights landing on a wall contribute nothing.
pub fn tensor_decompose(rs: &RootSystem, a: &Weight, b: &Weight) -> Result<WeightMap> {
    require_dominant(rs, a)?;
    require_dominant(rs, b)?;
    let (big, small) = if weyl_dimension(rs, a)? >= weyl_dimension(rs, b)? { (a, b) } else { (b, a) };
    let ctx = StarContext::new(rs, 0);
    let gens = finite_generators(rs.rank());
    let mut out = WeightMap::new();
    for (eta, m) in freudenthal_multiplicities(rs, small)?.iter() {
        let r = ctx.reduce_in(&(big + eta), gens);
        if r.sign != 0 {
            out.add(r.rep, r.sign * m as i64);
        }
    }
    Ok(out)
}

/// A point `ξ = η / den` of the Cartan subalgebra, identified with a
/// rational weight through the basic inner product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalWeight {
    pub num: Weight,
    pub den: i64,
}

impl RationalWeight {
    pub fn new(num: Weight, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        RationalWeight { num, den }
    }
}

/// Evaluates exponentials `e^{2πi⟨ν, ξ⟩}` at a fixed point with exact
/// rational phases.
#[derive(Clone, Debug)]
pub struct PhaseEvaluator {
    q_xi: Vec<i128>,
    modulus: i128,
}

impl PhaseEvaluator {
    pub fn new(rs: &RootSystem, xi: &RationalWeight) -> Self {
        let (_, d) = rs.qform_scaled();
        PhaseEvaluator { q_xi: qform_times(rs, &xi.num), modulus: d as i128 * xi.den as i128 }
    }

    /// `⟨ν, ξ⟩ mod 1` as an exact fraction `n / modulus` with `0 ≤ n < modulus`.
    pub fn phase_numerator(&self, nu: &Weight) -> i128 {
        dot(nu, &self.q_xi).rem_euclid(self.modulus)
    }

    pub fn exp(&self, nu: &Weight) -> Complex64 {
        let t = self.phase_numerator(nu) as f64 / self.modulus as f64;
        let (s, c) = libm::sincos(2.0 * core::f64::consts::PI * t);
        Complex64::new(c, s)
    }

    pub fn is_integral(&self, nu: &Weight) -> bool {
        self.phase_numerator(nu) == 0
    }
}

/// Character values at one point, reusing the enumerated Weyl group.
#[derive(Clone, Debug)]
pub struct CharacterEvaluator<'a> {
    rs: &'a RootSystem,
    group: Vec<WeylElement>,
    phases: PhaseEvaluator,
    denominator: Complex64,
}

impl<'a> CharacterEvaluator<'a> {
    pub fn new(rs: &'a RootSystem, xi: &RationalWeight) -> Result<Self> {
        rs.check_rank(&xi.num)?;
        let phases = PhaseEvaluator::new(rs, xi);
        if rs.positive_roots().iter().any(|a| phases.is_integral(a)) {
            return Err(Error::SingularPoint);
        }
        let group = rs.weyl_group()?;
        let denominator = group.iter().map(|w| phases.exp(&w.apply(rs.rho())) * w.sign as f64).sum();
        Ok(CharacterEvaluator { rs, group, phases, denominator })
    }

    /// Weyl's character formula.
    pub fn value(&self, top: &Weight) -> Result<Complex64> {
        require_dominant(self.rs, top)?;
        let shifted = top + self.rs.rho();
        let num: Complex64 = self.group.iter().map(|w| self.phases.exp(&w.apply(&shifted)) * w.sign as f64).sum();
        Ok(num / self.denominator)
    }
}

/// `χ_μ(exp ξ)` by Weyl's character formula. Fails at singular points.
pub fn character_value(rs: &RootSystem, top: &Weight, xi: &RationalWeight) -> Result<Complex64> {
    CharacterEvaluator::new(rs, xi)?.value(top)
}

/// `Σ_η mult(η) e^{2πi⟨η, ξ⟩}` over an explicit weight system.
pub fn exponential_sum(rs: &RootSystem, weights: &WeightMultiset, xi: &RationalWeight) -> Complex64 {
    let p = PhaseEvaluator::new(rs, xi);
    weights.iter().map(|(w, m)| p.exp(w) * m as f64).sum()
}
