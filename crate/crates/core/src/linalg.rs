//! Sparse exact linear algebra over `Q`: linear combinations with ordered
//! keys, rational matrices with kernel/rank, and an incremental rank
//! accumulator used by the larger spanning-set computations.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Sparse linear combination over an ordered key set. Zero coefficients are
/// never stored, so `==` is exact equality of normal forms and iteration is
/// deterministic (sorted by key).
#[derive(Clone, PartialEq, Eq)]
pub struct Lin<K: Ord + Clone> {
    terms: BTreeMap<K, Rat>,
}

impl<K: Ord + Clone> Default for Lin<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn zero() -> Self {
        Lin { terms: BTreeMap::new() }
    }

    pub fn term(key: K, coeff: Rat) -> Self {
        let mut l = Self::zero();
        l.add_term(key, coeff);
        l
    }

    pub fn unit(key: K) -> Self {
        Self::term(key, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Rat {
        self.terms.get(key).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, key: K, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &Rat) {
        if factor.is_zero() {
            return;
        }
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c.clone() * factor);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (k, c) in other.iter() {
            self.add_term(k.clone(), -c.clone());
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-Rat::one())
    }

    pub fn scaled(&self, factor: &Rat) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Lin {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.clone() * factor))
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn first(&self) -> Option<(&K, &Rat)> {
        self.terms.iter().next()
    }

    pub fn into_terms(self) -> BTreeMap<K, Rat> {
        self.terms
    }

    /// Push every term through `f`, summing images (with multiplicity).
    pub fn map_linear<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Lin<K2>) -> Lin<K2> {
        let mut out = Lin::zero();
        for (k, c) in self.iter() {
            out.add_scaled(&f(k), c);
        }
        out
    }
}

impl<K: Ord + Clone + fmt::Debug> fmt::Debug for Lin<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*{:?}", c, k)?;
        }
        Ok(())
    }
}

/// Incremental row-space accumulator: feed sparse vectors, it keeps a
/// reduced pivot set and reports whether each new vector enlarged the span.
pub struct RankAccumulator<K: Ord + Clone> {
    pivots: BTreeMap<K, Lin<K>>,
}

impl<K: Ord + Clone> Default for RankAccumulator<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> RankAccumulator<K> {
    pub fn new() -> Self {
        RankAccumulator { pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `v` against the stored pivots; returns what remains.
    pub fn reduce(&self, mut v: Lin<K>) -> Lin<K> {
        loop {
            let head = match v.first() {
                None => return v,
                Some((k, c)) => (k.clone(), c.clone()),
            };
            match self.pivots.get(&head.0) {
                None => return v,
                Some(p) => v.add_scaled(p, &-head.1),
            }
        }
    }

    /// Returns true iff `v` was independent of the current span.
    pub fn insert(&mut self, v: Lin<K>) -> bool {
        let v = self.reduce(v);
        match v.first() {
            None => false,
            Some((k, c)) => {
                let k = k.clone();
                let inv = Rat::one() / c.clone();
                self.pivots.insert(k, v.scaled(&inv));
                true
            }
        }
    }

    pub fn contains(&self, v: Lin<K>) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Sparse rational matrix. Entries are stored per (row, col); zero entries
/// are absent.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn from_columns(rows: usize, columns: &[Lin<usize>]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter() {
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    fn sparse_rows(&self) -> Vec<Lin<usize>> {
        let mut rows: Vec<Lin<usize>> = (0..self.rows).map(|_| Lin::zero()).collect();
        for ((r, c), v) in &self.entries {
            rows[*r].add_term(*c, v.clone());
        }
        rows
    }

    /// Reduced row echelon form; returns (pivot rows, pivot column of each).
    /// Every pivot row contains exactly one pivot column (its own).
    fn rref(&self) -> (Vec<Lin<usize>>, Vec<usize>) {
        let mut pivot_rows: Vec<Lin<usize>> = Vec::new();
        let mut pivot_cols: Vec<usize> = Vec::new();
        for row in self.sparse_rows() {
            let mut v = row;
            // pivot rows are clean, so one pass fully reduces
            for (i, &pc) in pivot_cols.iter().enumerate() {
                let c = v.coeff(&pc);
                if !c.is_zero() {
                    v.add_scaled(&pivot_rows[i], &-c);
                }
            }
            match v.first() {
                None => {}
                Some((k, c)) => {
                    let head = (*k, c.clone());
                    let inv = Rat::one() / head.1;
                    v = v.scaled(&inv);
                    // knock the new pivot column out of earlier rows
                    for row in pivot_rows.iter_mut() {
                        let c = row.coeff(&head.0);
                        if !c.is_zero() {
                            row.add_scaled(&v, &-c);
                        }
                    }
                    pivot_rows.push(v);
                    pivot_cols.push(head.0);
                }
            }
        }
        (pivot_rows, pivot_cols)
    }

    pub fn rank(&self) -> usize {
        self.rref().0.len()
    }

    /// Basis of the right null space: every returned `v` satisfies `m v = 0`
    /// exactly, and there are `cols - rank` of them.
    pub fn kernel_basis(&self) -> Vec<Lin<usize>> {
        let (pivot_rows, pivot_cols) = self.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = Lin::unit(free);
            for (row, &pc) in pivot_rows.iter().zip(pivot_cols.iter()) {
                let c = row.coeff(&free);
                if !c.is_zero() {
                    v.add_term(pc, -c);
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn mul_vec(&self, v: &Lin<usize>) -> Lin<usize> {
        let mut out = Lin::zero();
        for ((r, c), a) in &self.entries {
            let x = v.coeff(c);
            if !x.is_zero() {
                out.add_term(*r, a.clone() * x);
            }
        }
        out
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows.min(12) {
            for c in 0..self.cols.min(12) {
                write!(f, "{} ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let mut num = Int::one();
    let mut den = Int::one();
    for i in 0..k {
        num *= Int::from(n - i);
        den *= Int::from(i + 1);
    }
    num / den
}

pub fn abs_int(a: &Int) -> Int {
    a.abs()
}

pub fn divides(d: &Int, n: &Int) -> bool {
    use num_integer::Integer;
    !d.is_zero() && n.is_multiple_of(d)
}
