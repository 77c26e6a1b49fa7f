//! Cartan data for the compact simple simply-connected types.
//!
//! Everything is generated from the series and rank: the Cartan matrix, then
//! root lengths by symmetrization, the positive roots by root strings, and
//! the quadratic form on the weight lattice normalized so that the highest
//! root has squared length 2.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

/// A valid series/rank combination, e.g. `A2`, `G2`, `E8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LieType {
    series: Series,
    rank: usize,
}

impl LieType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(LieType { series, rank })
        } else {
            Err(Error::InvalidType(alloc::format!("{}{}", series.letter(), rank)))
        }
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidType(s.to_string());
        let mut chars = s.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('E') => Series::E,
            Some('F') => Series::F,
            Some('G') => Series::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        // Cap the rank so that absurd inputs are rejected instead of allocating.
        if rank > 32 {
            return Err(bad());
        }
        LieType::new(series, rank)
    }
}

/// Largest Weyl group that [`RootSystem::weyl_group`] will enumerate.
pub const WEYL_ENUMERATION_LIMIT: u128 = 60_000;

/// An element of the finite Weyl group acting linearly on Dynkin labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    matrix: Vec<i64>,
    rank: usize,
    /// `(-1)^length`.
    pub sign: i64,
    pub length: usize,
}

impl WeylElement {
    pub fn apply(&self, w: &Weight) -> Weight {
        let l = self.rank;
        (0..l)
            .map(|i| (0..l).map(|j| self.matrix[i * l + j] * w[j]).sum())
            .collect::<Vec<i64>>()
            .into()
    }
}

/// Immutable root datum for one simple type. See the module docs.
#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: LieType,
    cartan: Vec<Vec<i64>>,
    simple_roots: Vec<Weight>,
    /// `|α_i|^2 / 2`, with long roots normalized to 1.
    half_norms: Vec<BigRational>,
    positive_roots: Vec<Weight>,
    root_coords: Vec<Vec<i64>>,
    coroot_coords: Vec<Vec<i64>>,
    highest_root: Weight,
    marks: Vec<i64>,
    comarks: Vec<i64>,
    dual_coxeter: i64,
    rho: Weight,
    qform: Vec<Vec<BigRational>>,
    qform_scaled: Vec<Vec<i64>>,
    qform_denom: i64,
    exponents: Vec<i64>,
    weyl_order: u128,
}

fn cartan_matrix(ty: LieType) -> Vec<Vec<i64>> {
    let l = ty.rank;
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match ty.series {
        Series::A => {
            for i in 0..l - 1 {
                link(i, i + 1, -1, -1);
            }
        }
        Series::B => {
            for i in 0..l - 2 {
                link(i, i + 1, -1, -1);
            }
            // α_l short
            link(l - 2, l - 1, -1, -2);
        }
        Series::C => {
            for i in 0..l - 2 {
                link(i, i + 1, -1, -1);
            }
            // α_l long
            link(l - 2, l - 1, -2, -1);
        }
        Series::D => {
            for i in 0..l - 2 {
                link(i, i + 1, -1, -1);
            }
            link(l - 3, l - 1, -1, -1);
        }
        Series::E => {
            // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4.
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            for i in 2..l - 1 {
                link(i, i + 1, -1, -1);
            }
        }
        Series::F => {
            link(0, 1, -1, -1);
            link(1, 2, -1, -2);
            link(2, 3, -1, -1);
        }
        Series::G => {
            // α_1 short, α_2 long
            link(0, 1, -3, -1);
        }
    }
    a
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rational_inverse(a: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| rat(x)).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("Cartan matrix is invertible");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot) {
                    *x -= p * &f;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn to_i64(r: &BigRational) -> i64 {
    assert!(r.is_integer(), "expected an integer, got {r}");
    r.to_integer().to_i64().expect("value fits in i64")
}

impl RootSystem {
    pub fn new(ty: LieType) -> Self {
        let l = ty.rank;
        let cartan = cartan_matrix(ty);

        // Symmetrize: d_i A_ij = d_j A_ji.
        let mut d: Vec<Option<BigRational>> = vec![None; l];
        d[0] = Some(BigRational::one());
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for j in 0..l {
                if i != j && cartan[i][j] != 0 && d[j].is_none() {
                    let di = d[i].clone().unwrap();
                    d[j] = Some(di * rat(cartan[i][j]) / rat(cartan[j][i]));
                    stack.push(j);
                }
            }
        }
        let d: Vec<BigRational> = d.into_iter().map(|x| x.expect("Dynkin diagram is connected")).collect();
        let dmax = d.iter().max().unwrap().clone();
        let half_norms: Vec<BigRational> = d.iter().map(|x| x / &dmax).collect();

        let label_of = |coords: &[i64]| -> Weight {
            (0..l)
                .map(|j| (0..l).map(|i| cartan[j][i] * coords[i]).sum())
                .collect::<Vec<i64>>()
                .into()
        };

        // Positive roots by root strings, in root coordinates.
        let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut layer: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                let mut c = vec![0; l];
                c[i] = 1;
                c
            })
            .collect();
        let mut ordered: Vec<Vec<i64>> = Vec::new();
        all.extend(layer.iter().cloned());
        while !layer.is_empty() {
            layer.sort();
            ordered.extend(layer.iter().cloned());
            let mut next = Vec::new();
            for beta in &layer {
                let labels = label_of(beta);
                for i in 0..l {
                    let mut p = 0;
                    loop {
                        let mut down = beta.clone();
                        down[i] -= p + 1;
                        if all.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - labels[i];
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if all.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            layer = next;
        }
        let root_coords = ordered;
        let positive_roots: Vec<Weight> = root_coords.iter().map(|c| label_of(c)).collect();

        let heights: Vec<i64> = root_coords.iter().map(|c| c.iter().sum()).collect();
        let top = heights.iter().max().copied().unwrap();
        let theta_idx = heights.iter().position(|&h| h == top).unwrap();
        let marks = root_coords[theta_idx].clone();
        let highest_root = positive_roots[theta_idx].clone();
        let comarks: Vec<i64> = marks.iter().zip(&half_norms).map(|(&a, h)| to_i64(&(rat(a) * h))).collect();
        let dual_coxeter = 1 + comarks.iter().sum::<i64>();

        let coroot_coords: Vec<Vec<i64>> = root_coords
            .iter()
            .map(|c| {
                let mut norm = BigRational::zero();
                for i in 0..l {
                    for j in 0..l {
                        norm += rat(c[i] * c[j] * cartan[i][j]) * &half_norms[i];
                    }
                }
                let half = norm / rat(2);
                (0..l).map(|i| to_i64(&(rat(c[i]) * &half_norms[i] / &half))).collect()
            })
            .collect();

        let inv = rational_inverse(&cartan);
        let qform: Vec<Vec<BigRational>> =
            (0..l).map(|i| (0..l).map(|j| &inv[i][j] * &half_norms[i]).collect()).collect();
        let mut denom = BigInt::one();
        for x in qform.iter().flatten() {
            denom = denom.lcm(x.denom());
        }
        let qform_denom = denom.to_i64().unwrap();
        let qform_scaled = qform.iter().map(|row| row.iter().map(|x| to_i64(&(x * rat(qform_denom)))).collect()).collect();

        // The number of positive roots of height h equals the number of
        // exponents that are at least h.
        let mut per_height: BTreeMap<i64, i64> = BTreeMap::new();
        for &h in &heights {
            *per_height.entry(h).or_insert(0) += 1;
        }
        let mut exponents = Vec::new();
        for h in 1..=top {
            let here = per_height.get(&h).copied().unwrap_or(0);
            let above = per_height.get(&(h + 1)).copied().unwrap_or(0);
            exponents.extend(core::iter::repeat_n(h, (here - above) as usize));
        }
        let weyl_order = exponents.iter().map(|&e| (e + 1) as u128).product();

        let simple_roots = (0..l).map(|j| (0..l).map(|i| cartan[i][j]).collect::<Vec<i64>>().into()).collect();

        RootSystem {
            ty,
            cartan,
            simple_roots,
            half_norms,
            positive_roots,
            root_coords,
            coroot_coords,
            highest_root,
            marks,
            comarks,
            dual_coxeter,
            rho: Weight::filled(l, 1),
            qform,
            qform_scaled,
            qform_denom,
            exponents,
            weyl_order,
        }
    }

    pub fn lie_type(&self) -> LieType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `α_j` for `j = 1..=l`, stored at index `j - 1`.
    pub fn simple_root(&self, j: usize) -> &Weight {
        &self.simple_roots[j - 1]
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn highest_root(&self) -> &Weight {
        &self.highest_root
    }

    /// Coefficients of θ in the simple roots.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    /// Coefficients of θ^∨ in the simple coroots.
    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn qform(&self) -> &[Vec<BigRational>] {
        &self.qform
    }

    /// Integer matrix `D·F` and the denominator `D`, so that
    /// `⟨λ, μ⟩ = λᵀ(D·F)μ / D`.
    pub fn qform_scaled(&self) -> (&[Vec<i64>], i64) {
        (&self.qform_scaled, self.qform_denom)
    }

    /// `|α_i|^2 / 2` for `i = 1..=l` (index `i - 1`).
    pub fn half_norms(&self) -> &[BigRational] {
        &self.half_norms
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn weyl_order(&self) -> u128 {
        self.weyl_order
    }

    pub fn dimension(&self) -> usize {
        self.rank() + 2 * self.positive_roots.len()
    }

    pub fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch { expected: self.rank(), got: w.rank() })
        }
    }

    /// `⟨λ, α_i^∨⟩` for `i ≥ 1`, and `⟨λ, θ^∨⟩` for `i = 0`.
    pub fn coroot_pairing(&self, w: &Weight, i: usize) -> Result<i64> {
        self.check_rank(w)?;
        match i {
            0 => Ok(self.theta_pairing(w)),
            i if i <= self.rank() => Ok(w[i - 1]),
            _ => Err(Error::BadGenerator { index: i, rank: self.rank() }),
        }
    }

    /// `⟨λ, θ^∨⟩ = Σ a_j^∨ λ_j`.
    pub fn theta_pairing(&self, w: &Weight) -> i64 {
        self.comarks.iter().zip(w.labels()).map(|(a, b)| a * b).sum()
    }

    /// The basic inner product, exactly.
    pub fn inner_product(&self, a: &Weight, b: &Weight) -> Result<BigRational> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        Ok(BigRational::new(BigInt::from(self.inner_product_scaled(a, b)), BigInt::from(self.qform_denom)))
    }

    /// `D·⟨λ, μ⟩` as an integer, with `D` from [`Self::qform_scaled`].
    pub fn inner_product_scaled(&self, a: &Weight, b: &Weight) -> i128 {
        let l = self.rank();
        let mut s: i128 = 0;
        for i in 0..l {
            if a[i] == 0 {
                continue;
            }
            let row: i128 = (0..l).map(|j| self.qform_scaled[i][j] as i128 * b[j] as i128).sum();
            s += a[i] as i128 * row;
        }
        s
    }

    /// Positive roots as Dynkin labels, sorted by height.
    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    /// Positive roots in the basis of simple roots (same order).
    pub fn positive_root_coords(&self) -> &[Vec<i64>] {
        &self.root_coords
    }

    /// Positive coroots in the basis of simple coroots (same order).
    pub fn positive_coroot_coords(&self) -> &[Vec<i64>] {
        &self.coroot_coords
    }

    /// `⟨λ, β^∨⟩` for the positive root with index `idx`.
    pub fn pair_with_coroot(&self, w: &Weight, idx: usize) -> i64 {
        self.coroot_coords[idx].iter().zip(w.labels()).map(|(a, b)| a * b).sum()
    }

    /// Linear simple reflection `s_i`, `i = 1..=l`.
    pub fn reflect(&self, i: usize, w: &Weight) -> Weight {
        let mut out = w.clone();
        out.add_scaled(-w[i - 1], &self.simple_roots[i - 1]);
        out
    }

    /// Moves `w` into the closed dominant chamber with linear simple
    /// reflections; returns the image and the parity of the word used.
    pub fn to_dominant(&self, w: &Weight) -> (Weight, i64) {
        let mut x = w.clone();
        let mut sign = 1;
        while let Some(i) = x.labels().iter().position(|&c| c < 0) {
            x = self.reflect(i + 1, &x);
            sign = -sign;
        }
        (x, sign)
    }

    /// The linear Weyl orbit of `w`.
    pub fn weyl_orbit(&self, w: &Weight) -> Vec<Weight> {
        let mut seen: BTreeSet<Weight> = BTreeSet::new();
        seen.insert(w.clone());
        let mut stack = vec![w.clone()];
        while let Some(x) = stack.pop() {
            for i in 1..=self.rank() {
                if x[i - 1] != 0 {
                    let y = self.reflect(i, &x);
                    if seen.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Every element of the finite Weyl group, found by breadth-first search
    /// on the (free) orbit of ρ.
    pub fn weyl_group(&self) -> Result<Vec<WeylElement>> {
        if self.weyl_order > WEYL_ENUMERATION_LIMIT {
            return Err(Error::GroupTooLarge(self.weyl_order));
        }
        let l = self.rank();
        let mut identity = vec![0i64; l * l];
        for i in 0..l {
            identity[i * l + i] = 1;
        }
        let start = WeylElement { matrix: identity, rank: l, sign: 1, length: 0 };
        let mut seen: BTreeSet<Weight> = BTreeSet::new();
        seen.insert(self.rho.clone());
        let mut out = vec![start];
        let mut head = 0;
        while head < out.len() {
            let w = out[head].clone();
            head += 1;
            for i in 1..=l {
                // s_i ∘ w
                let mut m = w.matrix.clone();
                for c in 0..l {
                    let pivot = w.matrix[(i - 1) * l + c];
                    if pivot != 0 {
                        for r in 0..l {
                            m[r * l + c] -= pivot * self.simple_roots[i - 1][r];
                        }
                    }
                }
                let el = WeylElement { matrix: m, rank: l, sign: -w.sign, length: w.length + 1 };
                if seen.insert(el.apply(&self.rho)) {
                    out.push(el);
                }
            }
        }
        debug_assert_eq!(out.len() as u128, self.weyl_order);
        Ok(out)
    }
}

/// Builds the root datum for a (validated) type.
pub fn build_root_system(ty: LieType) -> RootSystem {
    RootSystem::new(ty)
}

/// Positive roots of the root subsystem generated by `{α_j : j ∈ generators}`
/// where `α_0 = -θ`; returned as Dynkin labels. `generators` must be a proper
/// subset of `0..=l`, so the subsystem is finite.
pub fn parabolic_positive_roots(rs: &RootSystem, generators: &[usize]) -> Vec<Weight> {
    let l = rs.rank();
    let has0 = generators.contains(&0);
    let excluded: Vec<usize> = (1..=l).filter(|j| !generators.contains(j)).collect();
    let mut out = Vec::new();
    for (coords, labels) in rs.root_coords.iter().zip(&rs.positive_roots) {
        for sign in [1i64, -1] {
            let c: Vec<i64> = coords.iter().map(|x| sign * x).collect();
            let ok = if !has0 {
                sign > 0 && excluded.iter().all(|&i| c[i - 1] == 0)
            } else {
                // β = n_0(-θ) + Σ n_j α_j; every excluded index fixes n_0.
                let i = match excluded.first() {
                    Some(&i) => i,
                    None => return Vec::new(),
                };
                let (num, den) = (-c[i - 1], rs.marks[i - 1]);
                if num % den != 0 {
                    false
                } else {
                    let n0 = num / den;
                    n0 >= 0
                        && excluded.iter().all(|&e| -c[e - 1] == n0 * rs.marks[e - 1])
                        && generators.iter().filter(|&&j| j != 0).all(|&j| c[j - 1] + n0 * rs.marks[j - 1] >= 0)
                        && (n0 > 0 || generators.iter().any(|&j| j != 0 && c[j - 1] + n0 * rs.marks[j - 1] > 0))
                }
            };
            if ok {
                out.push(labels.scaled(sign));
            }
        }
    }
    out
}
