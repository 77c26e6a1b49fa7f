//! Integral weights in the fundamental-weight basis and finite integer
//! combinations of them.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, Neg, Sub};
use core::str::FromStr;

use crate::Error;

/// A weight given by its Dynkin labels `⟨λ, α_i^∨⟩`, `i = 1..=l`.
///
/// The derived ordering is lexicographic on the labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(labels: Vec<i64>) -> Self {
        Weight(labels)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(alloc::vec![0; rank])
    }

    /// Weight with every label equal to `value`; `filled(l, 1)` is ρ.
    pub fn filled(rank: usize, value: i64) -> Self {
        Weight(alloc::vec![value; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn labels(&self) -> &[i64] {
        &self.0
    }

    pub fn into_labels(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// All labels non-negative.
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn scaled(&self, factor: i64) -> Self {
        Weight(self.0.iter().map(|&c| c * factor).collect())
    }

    /// `self + factor * other`, in place.
    pub fn add_scaled(&mut self, factor: i64, other: &Weight) {
        debug_assert_eq!(self.rank(), other.rank());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += factor * b;
        }
    }
}

impl Index<usize> for Weight {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight(v.to_vec())
    }
}

/// Comma-joined labels, e.g. `1,0,-2`.
impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Err(Error::Parse(String::from("empty weight")));
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(alloc::format!("bad label `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
    }
}

/// Finite-support integer-valued function on weights. Zero values are never
/// stored, so structural equality is equality of functions.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct WeightMap(BTreeMap<Weight, i64>);

impl WeightMap {
    pub fn new() -> Self {
        WeightMap(BTreeMap::new())
    }

    pub fn singleton(w: Weight, c: i64) -> Self {
        let mut m = WeightMap::new();
        m.add(w, c);
        m
    }

    pub fn add(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        match self.0.entry(w) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add_map(&mut self, other: &WeightMap, factor: i64) {
        for (w, c) in other.iter() {
            self.add(w.clone(), c * factor);
        }
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.0.get(w).copied().unwrap_or(0)
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

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, i64)> + '_ {
        self.0.iter().map(|(w, &c)| (w, c))
    }

    pub fn weights(&self) -> impl Iterator<Item = &Weight> + '_ {
        self.0.keys()
    }

    pub fn scaled(&self, factor: i64) -> WeightMap {
        let mut out = WeightMap::new();
        out.add_map(self, factor);
        out
    }

    pub fn as_map(&self) -> &BTreeMap<Weight, i64> {
        &self.0
    }
}

impl FromIterator<(Weight, i64)> for WeightMap {
    fn from_iter<T: IntoIterator<Item = (Weight, i64)>>(iter: T) -> Self {
        let mut m = WeightMap::new();
        for (w, c) in iter {
            m.add(w, c);
        }
        m
    }
}

impl fmt::Debug for WeightMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

/// A weight system: every stored multiplicity is strictly positive.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WeightMultiset(BTreeMap<Weight, u64>);

impl WeightMultiset {
    pub fn new() -> Self {
        WeightMultiset(BTreeMap::new())
    }

    pub fn insert(&mut self, w: Weight, mult: u64) {
        if mult > 0 {
            *self.0.entry(w).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.0.get(w).copied().unwrap_or(0)
    }

    /// Sum of multiplicities, i.e. the dimension of the representation.
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, u64)> + '_ {
        self.0.iter().map(|(w, &m)| (w, m))
    }

    pub fn to_weight_map(&self) -> WeightMap {
        self.iter().map(|(w, m)| (w.clone(), m as i64)).collect()
    }
}

impl fmt::Debug for WeightMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}
