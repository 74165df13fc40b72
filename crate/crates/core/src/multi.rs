//! Tensor, exterior and symmetric powers of `H` with canonical basis words,
//! induced substitutions, and the equivariant maps used by the detection
//! pipelines: contraction, canonical inclusion, multiplication, the Jacobi
//! identity map and the arity-5 partial contraction.
//!
//! Composite spaces are shallow: a product of powers of `H`, plus the one
//! outer case `wedge^2` of a fixed inner power (see [`Wedge2Elem`]).

use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::linalg::{Lin, Rat};
use crate::symplectic::{BasisSymbol, Genus, HElem, LinMap};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PowKind {
    Tensor,
    Wedge,
    Sym,
}

/// An ordered product of powers of `H`, e.g. `wedge^4 H (x) wedge^2 H`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpaceDescriptor(pub Vec<(PowKind, usize)>);

impl SpaceDescriptor {
    pub fn wedge(k: usize) -> Self {
        SpaceDescriptor(alloc::vec![(PowKind::Wedge, k)])
    }

    pub fn tensor_pow(k: usize) -> Self {
        SpaceDescriptor(alloc::vec![(PowKind::Tensor, k)])
    }

    pub fn sym(k: usize) -> Self {
        SpaceDescriptor(alloc::vec![(PowKind::Sym, k)])
    }

    pub fn factors(&self) -> &[(PowKind, usize)] {
        &self.0
    }
}

pub type Word = Vec<Vec<BasisSymbol>>;

/// Normalize one factor word; `None` means the word is zero (repeated wedge
/// symbol). The sign is +-1.
fn normalize_factor(kind: PowKind, mut word: Vec<BasisSymbol>) -> Option<(i32, Vec<BasisSymbol>)> {
    match kind {
        PowKind::Tensor => Some((1, word)),
        PowKind::Sym => {
            word.sort();
            Some((1, word))
        }
        PowKind::Wedge => {
            // insertion sort, counting transpositions
            let mut sign = 1;
            for i in 1..word.len() {
                let mut j = i;
                while j > 0 && word[j - 1] > word[j] {
                    word.swap(j - 1, j);
                    sign = -sign;
                    j -= 1;
                }
            }
            for pair in word.windows(2) {
                if pair[0] == pair[1] {
                    return None;
                }
            }
            Some((sign, word))
        }
    }
}

/// Sparse element of a composite space, keyed by normalized basis words.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiElem {
    pub genus: Genus,
    pub space: SpaceDescriptor,
    pub terms: Lin<Word>,
}

impl MultiElem {
    pub fn zero(genus: Genus, space: SpaceDescriptor) -> Self {
        MultiElem { genus, space, terms: Lin::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Add `coeff` times the (possibly unnormalized) word.
    pub fn add_word(&mut self, word: Word, coeff: Rat) {
        assert_eq!(word.len(), self.space.0.len(), "word/space factor mismatch");
        let mut sign = 1;
        let mut normalized = Vec::with_capacity(word.len());
        for ((kind, arity), w) in self.space.0.iter().zip(word) {
            assert_eq!(w.len(), *arity, "word arity mismatch");
            for s in &w {
                assert!(s.in_genus(self.genus), "symbol out of range for genus");
            }
            match normalize_factor(*kind, w) {
                None => return,
                Some((s, w)) => {
                    sign *= s;
                    normalized.push(w);
                }
            }
        }
        self.terms
            .add_term(normalized, coeff * Rat::from_integer(sign.into()));
    }

    pub fn from_word(genus: Genus, space: SpaceDescriptor, word: Word) -> Self {
        let mut e = Self::zero(genus, space);
        e.add_word(word, Rat::one());
        e
    }

    /// Single-factor wedge word, e.g. `a1 ^ b1 ^ b4`.
    pub fn wedge_word(genus: Genus, symbols: &[BasisSymbol]) -> Self {
        Self::from_word(
            genus,
            SpaceDescriptor::wedge(symbols.len()),
            alloc::vec![symbols.to_vec()],
        )
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.space, other.space, "space mismatch");
        MultiElem {
            genus: self.genus,
            space: self.space.clone(),
            terms: self.terms.plus(&other.terms),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.space, other.space, "space mismatch");
        MultiElem {
            genus: self.genus,
            space: self.space.clone(),
            terms: self.terms.minus(&other.terms),
        }
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        MultiElem {
            genus: self.genus,
            space: self.space.clone(),
            terms: self.terms.scaled(c),
        }
    }

    fn map_words(&self, space: SpaceDescriptor, mut f: impl FnMut(&Word, &mut MultiElem)) -> Self {
        let mut out = MultiElem::zero(self.genus, space);
        for (w, c) in self.terms.iter() {
            let mut part = MultiElem::zero(self.genus, out.space.clone());
            f(w, &mut part);
            out.terms.add_scaled(&part.terms, c);
        }
        out
    }

    /// Functorial action of a substitution: apply `m` to every symbol of
    /// every factor and expand.
    pub fn induced(&self, m: &LinMap) -> Self {
        assert_eq!(m.genus, self.genus, "genus mismatch");
        self.map_words(self.space.clone(), |word, out| {
            // expand factor by factor
            let mut acc: Vec<(Rat, Word)> = alloc::vec![(Rat::one(), Vec::new())];
            for w in word.iter() {
                let mut next: Vec<(Rat, Word)> = Vec::new();
                for (c, partial) in &acc {
                    let mut expansions: Vec<(Rat, Vec<BasisSymbol>)> =
                        alloc::vec![(c.clone(), Vec::new())];
                    for s in w {
                        let img = m.image(*s);
                        let mut grown = Vec::new();
                        for (cc, prefix) in &expansions {
                            for (s2, c2) in img.iter() {
                                let mut p = prefix.clone();
                                p.push(*s2);
                                grown.push((cc.clone() * c2, p));
                            }
                        }
                        expansions = grown;
                    }
                    for (cc, fac) in expansions {
                        let mut full = partial.clone();
                        full.push(fac);
                        next.push((cc, full));
                    }
                }
                acc = next;
            }
            for (c, w) in acc {
                out.add_word(w, c);
            }
        })
    }

    /// `x - induced(m)(x)`, the difference endomorphism used by the
    /// pipelines.
    pub fn induced_difference(&self, m: &LinMap) -> Self {
        self.minus(&self.induced(m))
    }

    /// Contraction on the wedge factor at `slot`: sum over position pairs
    /// `i < j` (1-based) of `(-1)^(i+j+1) (x_i . x_j)` with both slots
    /// removed.
    pub fn contraction_at(&self, slot: usize) -> Self {
        let (kind, arity) = self.space.0[slot];
        assert_eq!(kind, PowKind::Wedge, "contraction needs a wedge factor");
        assert!(arity >= 2, "contraction needs arity >= 2");
        let mut space = self.space.clone();
        space.0[slot] = (PowKind::Wedge, arity - 2);
        self.map_words(space, |word, out| {
            let w = &word[slot];
            for i in 0..w.len() {
                for j in i + 1..w.len() {
                    let p = w[i].pairing(w[j]);
                    if p == 0 {
                        continue;
                    }
                    // (i+1) + (j+1) + 1 is odd exactly when i + j is even
                    let sign = if (i + j) % 2 == 0 { -1 } else { 1 };
                    let mut reduced = Vec::with_capacity(w.len() - 2);
                    for (t, s) in w.iter().enumerate() {
                        if t != i && t != j {
                            reduced.push(*s);
                        }
                    }
                    let mut new_word = word.clone();
                    new_word[slot] = reduced;
                    out.add_word(new_word, Rat::from_integer((p * sign).into()));
                }
            }
        })
    }

    /// Contraction `C_k` on a single-factor wedge space.
    pub fn contraction(&self, k: usize) -> Self {
        assert_eq!(self.space.0.len(), 1, "contraction expects a single factor");
        assert_eq!(self.space.0[0], (PowKind::Wedge, k), "wrong arity");
        self.contraction_at(0)
    }

    /// Canonical inclusion `wedge^k H -> tensor^k H`: alternating sum over
    /// all permutations.
    pub fn canonical_inclusion(&self) -> Self {
        assert_eq!(self.space.0.len(), 1, "canonical inclusion expects a single factor");
        let (kind, arity) = self.space.0[0];
        assert_eq!(kind, PowKind::Wedge, "canonical inclusion needs a wedge factor");
        self.map_words(SpaceDescriptor::tensor_pow(arity), |word, out| {
            let w = &word[0];
            for (sign, perm) in permutations_signed(w.len()) {
                let arranged: Vec<BasisSymbol> = perm.iter().map(|&i| w[i]).collect();
                out.add_word(alloc::vec![arranged], Rat::from_integer(sign.into()));
            }
        })
    }

    /// Multiplication: merge the adjacent wedge factors `slot`, `slot + 1`
    /// into one wedge factor (concatenate then normalize).
    pub fn multiply_at(&self, slot: usize) -> Self {
        let (k1, a1) = self.space.0[slot];
        let (k2, a2) = self.space.0[slot + 1];
        assert_eq!(k1, PowKind::Wedge);
        assert_eq!(k2, PowKind::Wedge);
        let mut space = self.space.clone();
        space.0[slot] = (PowKind::Wedge, a1 + a2);
        space.0.remove(slot + 1);
        self.map_words(space, |word, out| {
            let mut merged = word[slot].clone();
            merged.extend_from_slice(&word[slot + 1]);
            let mut new_word: Word = Vec::with_capacity(word.len() - 1);
            for (t, f) in word.iter().enumerate() {
                if t == slot {
                    new_word.push(merged.clone());
                } else if t != slot + 1 {
                    new_word.push(f.clone());
                }
            }
            out.add_word(new_word, Rat::one());
        })
    }

    /// Jacobi identity map on the wedge-3 factor at `slot`:
    /// `v1^v2^v3 -> v1(x)(v2^v3) + v2(x)(v3^v1) + v3(x)(v1^v2)`.
    pub fn jacobi_at(&self, slot: usize) -> Self {
        let (kind, arity) = self.space.0[slot];
        assert_eq!(kind, PowKind::Wedge);
        assert_eq!(arity, 3, "jacobi map needs a wedge-3 factor");
        let mut space = self.space.clone();
        space.0[slot] = (PowKind::Wedge, 1);
        space.0.insert(slot + 1, (PowKind::Wedge, 2));
        self.map_words(space, |word, out| {
            let w = &word[slot];
            let cycles = [
                (w[0], w[1], w[2]),
                (w[1], w[2], w[0]),
                (w[2], w[0], w[1]),
            ];
            for (v1, v2, v3) in cycles {
                let mut new_word: Word = Vec::with_capacity(word.len() + 1);
                for (t, f) in word.iter().enumerate() {
                    if t == slot {
                        new_word.push(alloc::vec![v1]);
                        new_word.push(alloc::vec![v2, v3]);
                    } else {
                        new_word.push(f.clone());
                    }
                }
                out.add_word(new_word, Rat::one());
            }
        })
    }

    /// `x1(x)...(x)x5 -> (x1 . x2) (x3 ^ x4) (x) x5` on `tensor^5 H`.
    pub fn partial_contract5(&self) -> Self {
        assert_eq!(
            self.space.0.as_slice(),
            &[(PowKind::Tensor, 5)],
            "partial contraction expects tensor^5"
        );
        let space = SpaceDescriptor(alloc::vec![(PowKind::Wedge, 2), (PowKind::Wedge, 1)]);
        self.map_words(space, |word, out| {
            let w = &word[0];
            let p = w[0].pairing(w[1]);
            if p != 0 {
                out.add_word(
                    alloc::vec![alloc::vec![w[2], w[3]], alloc::vec![w[4]]],
                    Rat::from_integer(p.into()),
                );
            }
        })
    }

    /// Extend a symbol-level linear rule as a derivation (sum over symbol
    /// slots). Used for the raising operators.
    pub fn apply_symbol_derivation(&self, rule: impl Fn(BasisSymbol) -> HElem) -> Self {
        self.map_words(self.space.clone(), |word, out| {
            for (fi, factor) in word.iter().enumerate() {
                for (si, s) in factor.iter().enumerate() {
                    for (s2, c) in rule(*s).iter() {
                        let mut new_word = word.clone();
                        new_word[fi][si] = *s2;
                        out.add_word(new_word, c.clone());
                    }
                }
            }
        })
    }
}

/// All permutations of `0..n` with their signs.
pub fn permutations_signed(n: usize) -> Vec<(i32, Vec<usize>)> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut used = alloc::vec![false; n];
    build_permutations(n, &mut current, &mut used, &mut out);
    out
}

fn build_permutations(
    n: usize,
    current: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<(i32, Vec<usize>)>,
) {
    if current.len() == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if current[i] > current[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        out.push((sign, current.clone()));
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            current.push(v);
            build_permutations(n, current, used, out);
            current.pop();
            used[v] = false;
        }
    }
}

/// Element of `wedge^2` of an inner wedge power of `H` (the one nested space
/// the pipelines need). Keys are ordered pairs of inner wedge words.
#[derive(Clone, PartialEq, Eq)]
pub struct Wedge2Elem {
    pub genus: Genus,
    pub inner_arity: usize,
    pub terms: Lin<(Vec<BasisSymbol>, Vec<BasisSymbol>)>,
}

impl Wedge2Elem {
    pub fn zero(genus: Genus, inner_arity: usize) -> Self {
        Wedge2Elem { genus, inner_arity, terms: Lin::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    fn add_pair(&mut self, w1: Vec<BasisSymbol>, w2: Vec<BasisSymbol>, coeff: Rat) {
        assert_eq!(w1.len(), self.inner_arity);
        assert_eq!(w2.len(), self.inner_arity);
        match w1.cmp(&w2) {
            core::cmp::Ordering::Equal => {}
            core::cmp::Ordering::Less => self.terms.add_term((w1, w2), coeff),
            core::cmp::Ordering::Greater => self.terms.add_term((w2, w1), -coeff),
        }
    }

    /// `x ^ y` for two elements of the same single-factor wedge space.
    pub fn wedge_of(x: &MultiElem, y: &MultiElem) -> Self {
        assert_eq!(x.space, y.space, "space mismatch");
        assert_eq!(x.space.0.len(), 1);
        let (kind, arity) = x.space.0[0];
        assert_eq!(kind, PowKind::Wedge);
        let mut out = Self::zero(x.genus, arity);
        for (w1, c1) in x.terms.iter() {
            for (w2, c2) in y.terms.iter() {
                out.add_pair(w1[0].clone(), w2[0].clone(), c1.clone() * c2);
            }
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.inner_arity, other.inner_arity);
        Wedge2Elem {
            genus: self.genus,
            inner_arity: self.inner_arity,
            terms: self.terms.plus(&other.terms),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.inner_arity, other.inner_arity);
        Wedge2Elem {
            genus: self.genus,
            inner_arity: self.inner_arity,
            terms: self.terms.minus(&other.terms),
        }
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        Wedge2Elem {
            genus: self.genus,
            inner_arity: self.inner_arity,
            terms: self.terms.scaled(c),
        }
    }

    pub fn induced(&self, m: &LinMap) -> Self {
        assert_eq!(m.genus, self.genus, "genus mismatch");
        let mut out = Self::zero(self.genus, self.inner_arity);
        let sub = |w: &Vec<BasisSymbol>| -> MultiElem {
            MultiElem::wedge_word(self.genus, w).induced(m)
        };
        for ((w1, w2), c) in self.terms.iter() {
            let i1 = sub(w1);
            let i2 = sub(w2);
            for (u1, c1) in i1.terms.iter() {
                for (u2, c2) in i2.terms.iter() {
                    out.add_pair(u1[0].clone(), u2[0].clone(), c * c1 * c2);
                }
            }
        }
        out
    }

    pub fn induced_difference(&self, m: &LinMap) -> Self {
        self.minus(&self.induced(m))
    }

    /// Canonical inclusion `wedge^2 V -> V (x) V` for `V` the inner power:
    /// `w1 ^ w2 -> w1 (x) w2 - w2 (x) w1`.
    pub fn canonical_inclusion(&self) -> MultiElem {
        let k = self.inner_arity;
        let space = SpaceDescriptor(alloc::vec![(PowKind::Wedge, k), (PowKind::Wedge, k)]);
        let mut out = MultiElem::zero(self.genus, space);
        for ((w1, w2), c) in self.terms.iter() {
            out.add_word(alloc::vec![w1.clone(), w2.clone()], c.clone());
            out.add_word(alloc::vec![w2.clone(), w1.clone()], -c.clone());
        }
        out
    }
}

fn fmt_factor(f: &mut fmt::Formatter<'_>, kind: PowKind, word: &[BasisSymbol]) -> fmt::Result {
    let name = match kind {
        PowKind::Tensor => "tensor",
        PowKind::Wedge => "wedge",
        PowKind::Sym => "sym",
    };
    write!(f, "({}", name)?;
    for s in word {
        write!(f, " {}", s)?;
    }
    write!(f, ")")
}

fn fmt_terms<K: Ord + Clone>(
    f: &mut fmt::Formatter<'_>,
    terms: &Lin<K>,
    mut write_key: impl FnMut(&mut fmt::Formatter<'_>, &K) -> fmt::Result,
) -> fmt::Result {
    if terms.is_zero() {
        return write!(f, "0");
    }
    let n = terms.len();
    if n > 1 {
        write!(f, "(+")?;
    }
    for (k, c) in terms.iter() {
        if n > 1 {
            write!(f, " ")?;
        }
        if c.is_one() {
            write_key(f, k)?;
        } else {
            write!(f, "(* {} ", c)?;
            write_key(f, k)?;
            write!(f, ")")?;
        }
    }
    if n > 1 {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for MultiElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.space.0.clone();
        fmt_terms(f, &self.terms, |f, word| {
            if factors.len() == 1 {
                fmt_factor(f, factors[0].0, &word[0])
            } else {
                write!(f, "(tensor ")?;
                for (i, (kind, _)) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    fmt_factor(f, *kind, &word[i])?;
                }
                write!(f, ")")
            }
        })
    }
}

impl fmt::Debug for MultiElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Wedge2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, |f, (w1, w2)| {
            write!(f, "(wedge ")?;
            fmt_factor(f, PowKind::Wedge, w1)?;
            write!(f, " ")?;
            fmt_factor(f, PowKind::Wedge, w2)?;
            write!(f, ")")
        })
    }
}

impl fmt::Debug for Wedge2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
