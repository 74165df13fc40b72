//! Free Lie algebra on `H` in Lyndon-word coordinates: Witt dimensions,
//! standard bracketings, the tensor embedding and its triangular inverse,
//! the bracket-kernel spaces `h(i)`, and the derivation bracket transported
//! to `H (x) L` through the duality pairing.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::linalg::{Lin, Rat, RatMatrix};
use crate::multi::{MultiElem, PowKind, SpaceDescriptor};
use crate::symplectic::{BasisSymbol, Genus, HElem};

/// A Lyndon word in the symbol order `a_1 < ... < a_g < b_1 < ... < b_g`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord(pub Vec<BasisSymbol>);

impl LyndonWord {
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Standard factorization `w = uv` with `v` the lexicographically
    /// smallest proper suffix; the associated basis element is
    /// `[b(u), b(v)]`.
    pub fn standard_factorization(&self) -> (LyndonWord, LyndonWord) {
        assert!(self.0.len() >= 2, "degree-1 word has no factorization");
        let mut best: Option<usize> = None;
        for i in 1..self.0.len() {
            let better = match best {
                None => true,
                Some(b) => self.0[i..] < self.0[b..],
            };
            if better {
                best = Some(i);
            }
        }
        let split = best.unwrap();
        (
            LyndonWord(self.0[..split].to_vec()),
            LyndonWord(self.0[split..].to_vec()),
        )
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(lyndon")?;
        for s in &self.0 {
            write!(f, " {}", s)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

pub fn is_lyndon(word: &[BasisSymbol]) -> bool {
    if word.is_empty() {
        return false;
    }
    for i in 1..word.len() {
        if word[i..] <= word[..] {
            return false;
        }
    }
    true
}

/// All Lyndon words of length exactly `d` (Duval's generation).
pub fn lyndon_words(g: Genus, d: usize) -> Vec<LyndonWord> {
    assert!(d >= 1);
    let alphabet = g.basis();
    let k = alphabet.len();
    let mut out = Vec::new();
    // generate Lyndon words of length <= d, keep those of length d
    let mut w: Vec<usize> = alloc::vec![0];
    loop {
        if w.len() == d {
            out.push(LyndonWord(w.iter().map(|&i| alphabet[i]).collect()));
        }
        // extend periodically to length d
        let len = w.len();
        while w.len() < d {
            let c = w[w.len() - len];
            w.push(c);
        }
        // increment
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                let l = w.len();
                w[l - 1] = last + 1;
                break;
            }
        }
        if w.is_empty() {
            break;
        }
    }
    out
}

fn moebius(n: u64) -> i64 {
    let mut n = n;
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Necklace formula: `(1/d) sum_{e | d} mu(e) (2g)^(d/e)`.
pub fn witt_dim(g: Genus, d: usize) -> u64 {
    assert!(d >= 1);
    let n = 2 * g.get() as u64;
    let d = d as u64;
    let mut total: i64 = 0;
    for e in 1..=d {
        if d.is_multiple_of(e) {
            let pow = n.pow((d / e) as u32) as i64;
            total += moebius(e) * pow;
        }
    }
    assert!(total > 0 && total % d as i64 == 0);
    (total / d as i64) as u64
}

pub type TensorWord = Vec<BasisSymbol>;

/// Expansion of the standard bracketing of a Lyndon word in the tensor
/// algebra. The word itself appears with coefficient 1 and every other
/// monomial is lexicographically greater.
pub fn embed_bracketing(w: &LyndonWord) -> Lin<TensorWord> {
    if w.degree() == 1 {
        return Lin::unit(w.0.clone());
    }
    let (u, v) = w.standard_factorization();
    tensor_commutator(&embed_bracketing(&u), &embed_bracketing(&v))
}

pub fn tensor_commutator(x: &Lin<TensorWord>, y: &Lin<TensorWord>) -> Lin<TensorWord> {
    let mut out = Lin::zero();
    for (wx, cx) in x.iter() {
        for (wy, cy) in y.iter() {
            let mut xy = wx.clone();
            xy.extend_from_slice(wy);
            out.add_term(xy, cx * cy);
            let mut yx = wy.clone();
            yx.extend_from_slice(wx);
            out.add_term(yx, -(cx * cy));
        }
    }
    out
}

/// Rewrite a homogeneous Lie element given in tensor coordinates into
/// Lyndon coordinates, by triangular elimination against the leading
/// (lexicographically smallest) words of the bracketings.
///
/// Panics if the input is not in the image of the free Lie algebra.
pub fn tensor_to_lyndon(t: &Lin<TensorWord>) -> Lin<LyndonWord> {
    let mut rest = t.clone();
    let mut coords = Lin::zero();
    while let Some((word, coeff)) = rest.first() {
        let word = word.clone();
        let coeff = coeff.clone();
        assert!(
            is_lyndon(&word),
            "leading word is not Lyndon; element is not in the free Lie algebra"
        );
        let lw = LyndonWord(word);
        rest.add_scaled(&embed_bracketing(&lw), &-coeff.clone());
        coords.add_term(lw, coeff);
    }
    coords
}

/// Graded element of the free Lie algebra on `H`, in Lyndon coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieElem {
    graded: BTreeMap<usize, Lin<LyndonWord>>,
}

impl LieElem {
    pub fn zero() -> Self {
        LieElem { graded: BTreeMap::new() }
    }

    pub fn generator(s: BasisSymbol) -> Self {
        Self::from_component(1, Lin::unit(LyndonWord(alloc::vec![s])))
    }

    pub fn from_h(x: &HElem) -> Self {
        let mut c = Lin::zero();
        for (s, coeff) in x.iter() {
            c.add_term(LyndonWord(alloc::vec![*s]), coeff.clone());
        }
        Self::from_component(1, c)
    }

    pub fn from_component(degree: usize, c: Lin<LyndonWord>) -> Self {
        let mut graded = BTreeMap::new();
        if !c.is_zero() {
            for (w, _) in c.iter() {
                assert_eq!(w.degree(), degree, "mixed degree in component");
            }
            graded.insert(degree, c);
        }
        LieElem { graded }
    }

    pub fn is_zero(&self) -> bool {
        self.graded.is_empty()
    }

    pub fn component(&self, degree: usize) -> Lin<LyndonWord> {
        self.graded.get(&degree).cloned().unwrap_or_default()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.graded.keys().copied()
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (d, c) in &other.graded {
            let entry = self.graded.entry(*d).or_default();
            entry.add_assign(c);
            if entry.is_zero() {
                self.graded.remove(d);
            }
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&-Rat::one()))
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LieElem {
            graded: self
                .graded
                .iter()
                .map(|(d, l)| (*d, l.scaled(c)))
                .collect(),
        }
    }

    /// Tensor expansion of the degree-`d` component.
    pub fn embed_tensor(&self, d: usize) -> Lin<TensorWord> {
        let mut out = Lin::zero();
        for (w, c) in self.component(d).iter() {
            out.add_scaled(&embed_bracketing(w), c);
        }
        out
    }

    /// Full embedding of a homogeneous element, as a `tensor^d H` element.
    pub fn embed_multi(&self, genus: Genus, d: usize) -> MultiElem {
        let mut degs: Vec<usize> = self.degrees().collect();
        degs.retain(|&x| x != d);
        assert!(degs.is_empty(), "element is not homogeneous of degree {}", d);
        let mut out = MultiElem::zero(genus, SpaceDescriptor::tensor_pow(d));
        for (w, c) in self.embed_tensor(d).iter() {
            out.add_word(alloc::vec![w.clone()], c.clone());
        }
        out
    }
}

/// Lie bracket, computed through the tensor embedding and rewritten back to
/// Lyndon coordinates degreewise.
pub fn lie_bracket(x: &LieElem, y: &LieElem) -> LieElem {
    let mut out = LieElem::zero();
    let dx: Vec<usize> = x.degrees().collect();
    let dy: Vec<usize> = y.degrees().collect();
    for &a in &dx {
        for &b in &dy {
            let t = tensor_commutator(&x.embed_tensor(a), &y.embed_tensor(b));
            if t.is_zero() {
                continue;
            }
            out.add_assign(&LieElem::from_component(a + b, tensor_to_lyndon(&t)));
        }
    }
    out
}

/// Element of `H (x) L[k]`, the ambient space of the Johnson targets.
#[derive(Clone, PartialEq, Eq)]
pub struct HomLElem {
    pub ldeg: usize,
    pub terms: Lin<(BasisSymbol, LyndonWord)>,
}

impl HomLElem {
    pub fn zero(ldeg: usize) -> Self {
        HomLElem { ldeg, terms: Lin::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add_term(&mut self, tag: BasisSymbol, w: LyndonWord, c: Rat) {
        assert_eq!(w.degree(), self.ldeg, "wrong Lyndon degree");
        self.terms.add_term((tag, w), c);
    }

    pub fn add_tagged(&mut self, tag: BasisSymbol, lie: &LieElem, factor: &Rat) {
        for (w, c) in lie.component(self.ldeg).iter() {
            self.terms.add_term((tag, w.clone()), c * factor);
        }
        let mut degs: Vec<usize> = lie.degrees().collect();
        degs.retain(|&d| d != self.ldeg);
        assert!(degs.is_empty(), "inhomogeneous Lie part");
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.ldeg, other.ldeg);
        HomLElem { ldeg: self.ldeg, terms: self.terms.plus(&other.terms) }
    }

    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.ldeg, other.ldeg);
        HomLElem { ldeg: self.ldeg, terms: self.terms.minus(&other.terms) }
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        HomLElem { ldeg: self.ldeg, terms: self.terms.scaled(c) }
    }

    /// Image under the bracket map `H (x) L[k] -> L[k+1]`.
    pub fn bracket_image(&self) -> LieElem {
        let mut out = LieElem::zero();
        for ((tag, w), c) in self.terms.iter() {
            let x = LieElem::generator(*tag);
            let y = LieElem::from_component(w.degree(), Lin::unit(w.clone()));
            out.add_assign(&lie_bracket(&x, &y).scaled(c));
        }
        out
    }

    pub fn in_h_kernel(&self) -> bool {
        self.bracket_image().is_zero()
    }

    /// Embed into `tensor^(k+1) H`, H-tag first.
    pub fn embed_multi(&self, genus: Genus) -> MultiElem {
        let mut out = MultiElem::zero(genus, SpaceDescriptor::tensor_pow(self.ldeg + 1));
        for ((tag, w), c) in self.terms.iter() {
            for (tw, c2) in embed_bracketing(w).iter() {
                let mut word = Vec::with_capacity(self.ldeg + 1);
                word.push(*tag);
                word.extend_from_slice(tw);
                out.add_word(alloc::vec![word], c * c2);
            }
        }
        out
    }

    /// The derivation on generators determined by duality:
    /// `D(x) = sum_j (u_j . x) X_j` for `self = sum_j u_j (x) X_j`.
    pub fn derivation_on(&self, x: BasisSymbol) -> LieElem {
        let mut out = LieElem::zero();
        for ((tag, w), c) in self.terms.iter() {
            let p = tag.pairing(x);
            if p != 0 {
                let coeff = c * Rat::from_integer(p.into());
                out.add_assign(&LieElem::from_component(
                    w.degree(),
                    Lin::term(w.clone(), coeff),
                ));
            }
        }
        out
    }

    /// Apply the derivation to a whole Lie element via the Leibniz rule
    /// over standard bracketings.
    pub fn derivation_apply(&self, lie: &LieElem) -> LieElem {
        let mut out = LieElem::zero();
        let degs: Vec<usize> = lie.degrees().collect();
        for d in degs {
            for (w, c) in lie.component(d).iter() {
                out.add_assign(&self.derivation_on_word(w).scaled(c));
            }
        }
        out
    }

    fn derivation_on_word(&self, w: &LyndonWord) -> LieElem {
        if w.degree() == 1 {
            return self.derivation_on(w.0[0]);
        }
        let (u, v) = w.standard_factorization();
        let bu = LieElem::from_component(u.degree(), Lin::unit(u.clone()));
        let bv = LieElem::from_component(v.degree(), Lin::unit(v.clone()));
        let left = lie_bracket(&self.derivation_on_word(&u), &bv);
        let right = lie_bracket(&bu, &self.derivation_on_word(&v));
        left.plus(&right)
    }
}

impl fmt::Display for HomLElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return write!(f, "0");
        }
        let n = self.terms.len();
        if n > 1 {
            write!(f, "(+")?;
        }
        for ((tag, w), c) in self.terms.iter() {
            if n > 1 {
                write!(f, " ")?;
            }
            if c.is_one() {
                write!(f, "(tensor {} {})", tag, w)?;
            } else {
                write!(f, "(* {} (tensor {} {}))", c, tag, w)?;
            }
        }
        if n > 1 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HomLElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Basis of `h(i) = Ker(H (x) L[i+1] -> L[i+2])`.
pub fn h_kernel_basis(g: Genus, i: usize) -> Vec<HomLElem> {
    assert!(i >= 1);
    let ldeg = i + 1;
    let words = lyndon_words(g, ldeg);
    let domain: Vec<(BasisSymbol, LyndonWord)> = {
        let mut v = Vec::new();
        for s in g.basis() {
            for w in &words {
                v.push((s, w.clone()));
            }
        }
        v
    };
    let target = lyndon_words(g, ldeg + 1);
    let target_index: BTreeMap<&LyndonWord, usize> =
        target.iter().enumerate().map(|(i, w)| (w, i)).collect();

    let mut columns = Vec::with_capacity(domain.len());
    for (s, w) in &domain {
        let mut hl = HomLElem::zero(ldeg);
        hl.add_term(*s, w.clone(), Rat::one());
        let img = hl.bracket_image().component(ldeg + 1);
        let mut col = Lin::zero();
        for (tw, c) in img.iter() {
            col.add_term(target_index[tw], c.clone());
        }
        columns.push(col);
    }
    let m = RatMatrix::from_columns(target.len(), &columns);
    m.kernel_basis()
        .into_iter()
        .map(|v| {
            let mut hl = HomLElem::zero(ldeg);
            for (j, c) in v.iter() {
                let (s, w) = &domain[*j];
                hl.add_term(*s, w.clone(), c.clone());
            }
            hl
        })
        .collect()
}

/// Rank of the bracket map `H (x) L[i+1] -> L[i+2]` (surjectivity check).
pub fn bracket_rank(g: Genus, i: usize) -> usize {
    let ldeg = i + 1;
    let mut acc = crate::linalg::RankAccumulator::new();
    for s in g.basis() {
        for w in lyndon_words(g, ldeg) {
            let mut hl = HomLElem::zero(ldeg);
            hl.add_term(s, w.clone(), Rat::one());
            let img = hl.bracket_image().component(ldeg + 1);
            acc.insert(img);
        }
    }
    acc.rank()
}

/// Bracket of two bracket-kernel elements, transported from the derivation
/// Lie algebra: apply the commutator of the associated derivations to the
/// generators and reconstruct through the duality pairing.
pub fn derivation_bracket(g: Genus, f: &HomLElem, h: &HomLElem) -> HomLElem {
    assert!(f.in_h_kernel() && h.in_h_kernel(), "inputs not in the bracket kernel");
    // tree degrees add: (f.ldeg - 1) + (h.ldeg - 1), so the L-degree is one
    // more than that
    let out_deg = f.ldeg + h.ldeg - 1;
    let mut out = HomLElem::zero(out_deg);
    for i in 1..=g.get() {
        let ai = BasisSymbol::a(i);
        let bi = BasisSymbol::b(i);
        // commutator [D_f, D_h] on each generator
        let delta = |x: BasisSymbol| -> LieElem {
            let fh = f.derivation_apply(&h.derivation_on(x));
            let hf = h.derivation_apply(&f.derivation_on(x));
            fh.minus(&hf)
        };
        // reconstruction a_i (x) D(b_i) - b_i (x) D(a_i); this is the
        // inverse of f -> D_f for the pairing convention above
        out.add_tagged(ai, &delta(bi), &Rat::one());
        out.add_tagged(bi, &delta(ai), &-Rat::one());
    }
    out
}

/// `x ^ y ^ z -> x (x) [y,z] + y (x) [z,x] + z (x) [x,y]`, the classical
/// inclusion of `wedge^3 H` into `H (x) L[2]`, extended linearly to
/// single-factor wedge-3 elements.
pub fn wedge3_to_homl(x: &MultiElem) -> HomLElem {
    assert_eq!(x.space.factors(), &[(PowKind::Wedge, 3)], "expected a wedge^3 element");
    let mut out = HomLElem::zero(2);
    for (word, c) in x.terms.iter() {
        let w = &word[0];
        let cycles = [(w[0], w[1], w[2]), (w[1], w[2], w[0]), (w[2], w[0], w[1])];
        for (t, p, q) in cycles {
            // [p, q] in Lyndon coordinates
            let lw;
            let sign;
            if p < q {
                lw = LyndonWord(alloc::vec![p, q]);
                sign = 1;
            } else {
                lw = LyndonWord(alloc::vec![q, p]);
                sign = -1;
            }
            out.terms
                .add_term((t, lw), c * Rat::from_integer(sign.into()));
        }
    }
    out
}
