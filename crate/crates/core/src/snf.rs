//! Smith normal form of sparse integer matrices.
//!
//! Elimination runs on `i64` with checked arithmetic and restarts on
//! arbitrary-precision integers if any intermediate value overflows.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer matrix given by its non-zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, entries: BTreeMap::new() }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.nrows && c < self.ncols, "entry ({r}, {c}) out of bounds");
        let e = self.entries.entry((r, c)).or_insert(0);
        *e += v;
        if *e == 0 {
            self.entries.remove(&(r, c));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries.get(&(r, c)).copied().unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }
}

/// Rank and invariant factors `d_1 | d_2 | ... | d_r`, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// The invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

trait Entry: Clone + Sized {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn abs_cmp(&self, other: &Self) -> Ordering;
    fn quotient(&self, d: &Self) -> Self;
    /// `self − q·x`, or `None` on overflow.
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self>;
    fn into_bigint(self) -> BigInt;
}

impl Entry for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn quotient(&self, d: &Self) -> Self {
        self / d
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        q.checked_mul(*x).and_then(|p| self.checked_sub(p))
    }
    fn into_bigint(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Entry for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn quotient(&self, d: &Self) -> Self {
        self / d
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Option<Self> {
        Some(self - q * x)
    }
    fn into_bigint(self) -> BigInt {
        self
    }
}

struct Work<T> {
    rows: Vec<BTreeMap<usize, T>>,
    cols: Vec<BTreeSet<usize>>,
}

impl<T: Entry> Work<T> {
    fn new(m: &SparseMatrix) -> Self {
        let mut rows: Vec<BTreeMap<usize, T>> = (0..m.nrows).map(|_| BTreeMap::new()).collect();
        let mut cols: Vec<BTreeSet<usize>> = (0..m.ncols).map(|_| BTreeSet::new()).collect();
        for (r, c, v) in m.iter() {
            rows[r].insert(c, T::from_i64(v));
            cols[c].insert(r);
        }
        Work { rows, cols }
    }

    fn set(&mut self, r: usize, c: usize, v: T) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    /// Smallest entry in absolute value; ties go to the sparsest row/column.
    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &T, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                let cost = (row.len() - 1) * (self.cols[c].len() - 1);
                let better = match &best {
                    None => true,
                    Some((_, _, bv, bc)) => match v.abs_cmp(bv) {
                        Ordering::Less => true,
                        Ordering::Equal => cost < *bc,
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((r, c, v, cost));
                }
            }
        }
        best.map(|(r, c, _, _)| (r, c))
    }

    /// `row_o −= q·row_r`.
    fn row_op(&mut self, o: usize, r: usize, q: &T) -> Option<()> {
        let src: Vec<(usize, T)> = self.rows[r].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src {
            let cur = self.rows[o].get(&c).cloned().unwrap_or_else(|| T::from_i64(0));
            let nv = cur.sub_mul(q, &v)?;
            self.set(o, c, nv);
        }
        Some(())
    }

    /// `col_o −= q·col_c`.
    fn col_op(&mut self, o: usize, c: usize, q: &T) -> Option<()> {
        let src: Vec<(usize, T)> = self.cols[c].iter().map(|&r| (r, self.rows[r][&c].clone())).collect();
        for (r, v) in src {
            let cur = self.rows[r].get(&o).cloned().unwrap_or_else(|| T::from_i64(0));
            let nv = cur.sub_mul(q, &v)?;
            self.set(r, o, nv);
        }
        Some(())
    }

    fn diagonalize(mut self) -> Option<Vec<BigInt>> {
        let mut diag = Vec::new();
        while let Some((mut r, mut c)) = self.choose_pivot() {
            loop {
                let p = self.rows[r][&c].clone();
                let others: Vec<usize> = self.cols[c].iter().copied().filter(|&o| o != r).collect();
                for o in others {
                    let q = self.rows[o][&c].quotient(&p);
                    if !q.is_zero() {
                        self.row_op(o, r, &q)?;
                    }
                }
                let others: Vec<usize> = self.rows[r].keys().copied().filter(|&o| o != c).collect();
                for o in others {
                    let q = self.rows[r][&o].quotient(&p);
                    if !q.is_zero() {
                        self.col_op(o, c, &q)?;
                    }
                }
                // Remainders smaller than the pivot may survive; restart from
                // the smallest of them.
                let mut next: Option<(usize, usize)> = None;
                let mut consider = |rr: usize, cc: usize, this: &Self| {
                    let v = &this.rows[rr][&cc];
                    if next.is_none_or(|(br, bc)| v.abs_cmp(&this.rows[br][&bc]) == Ordering::Less) {
                        next = Some((rr, cc));
                    }
                };
                for &o in self.cols[c].iter().filter(|&&o| o != r) {
                    consider(o, c, &self);
                }
                for &o in self.rows[r].keys().filter(|&&o| o != c) {
                    consider(r, o, &self);
                }
                match next {
                    Some((nr, nc)) => {
                        r = nr;
                        c = nc;
                    }
                    None => break,
                }
            }
            let p = self.rows[r].remove(&c).expect("pivot present");
            self.cols[c].remove(&r);
            diag.push(p.into_bigint().abs());
        }
        Some(diag)
    }
}

/// Turns any list of non-zero diagonal entries into invariant factors.
fn normalize(mut d: Vec<BigInt>) -> Vec<BigInt> {
    d.sort();
    let n = d.len();
    for i in 0..n {
        if d[i].is_one() {
            continue;
        }
        for j in i + 1..n {
            if Zero::is_zero(&(&d[j] % &d[i])) {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d.sort();
    d
}

pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    let diag = match Work::<i64>::new(m).diagonalize() {
        Some(d) => d,
        None => Work::<BigInt>::new(m).diagonalize().expect("big integers never overflow"),
    };
    SmithForm { invariant_factors: normalize(diag) }
}

/// Same as [`smith_normal_form`] but never uses fixed-width arithmetic.
pub fn smith_normal_form_big(m: &SparseMatrix) -> SmithForm {
    let diag = Work::<BigInt>::new(m).diagonalize().expect("big integers never overflow");
    SmithForm { invariant_factors: normalize(diag) }
}
