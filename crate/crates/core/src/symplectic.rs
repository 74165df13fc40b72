//! The symplectic module `H` with basis `a_1..a_g, b_1..b_g`, the
//! intersection form, Poincare duality and linear substitutions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::linalg::{Lin, Rat};

/// Surface genus; everything in this crate assumes `g >= 2`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Genus(pub u32);

impl Genus {
    pub fn new(g: u32) -> Self {
        assert!(g >= 2, "genus must be at least 2");
        Genus(g)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// All of `a_1..a_g, b_1..b_g` in basis order.
    pub fn basis(self) -> Vec<BasisSymbol> {
        let mut out = Vec::with_capacity(2 * self.0 as usize);
        for i in 1..=self.0 {
            out.push(BasisSymbol::a(i));
        }
        for i in 1..=self.0 {
            out.push(BasisSymbol::b(i));
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    A,
    B,
}

/// One of the symplectic basis vectors. The derived order is
/// `a_1 < ... < a_g < b_1 < ... < b_g`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisSymbol {
    pub kind: Kind,
    pub index: u32,
}

impl BasisSymbol {
    pub fn a(index: u32) -> Self {
        assert!(index >= 1);
        BasisSymbol { kind: Kind::A, index }
    }

    pub fn b(index: u32) -> Self {
        assert!(index >= 1);
        BasisSymbol { kind: Kind::B, index }
    }

    pub fn in_genus(self, g: Genus) -> bool {
        self.index >= 1 && self.index <= g.get()
    }

    /// `a_i . b_i = 1`, `b_i . a_i = -1`, all other pairs 0.
    pub fn pairing(self, other: BasisSymbol) -> i32 {
        if self.index != other.index {
            return 0;
        }
        match (self.kind, other.kind) {
            (Kind::A, Kind::B) => 1,
            (Kind::B, Kind::A) => -1,
            _ => 0,
        }
    }

    pub fn parse(s: &str) -> Option<BasisSymbol> {
        let (kind, rest) = match s.as_bytes().first()? {
            b'a' => (Kind::A, &s[1..]),
            b'b' => (Kind::B, &s[1..]),
            _ => return None,
        };
        let index: u32 = rest.parse().ok()?;
        if index == 0 {
            return None;
        }
        Some(BasisSymbol { kind, index })
    }
}

impl PartialOrd for BasisSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BasisSymbol {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.kind, self.index).cmp(&(other.kind, other.index))
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::A => 'a',
            Kind::B => 'b',
        };
        write!(f, "{}{}", k, self.index)
    }
}

impl fmt::Debug for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Exact rational combination of basis symbols.
pub type HElem = Lin<BasisSymbol>;

pub fn h_sym(s: BasisSymbol) -> HElem {
    HElem::unit(s)
}

/// The intersection form, extended bilinearly.
pub fn intersection(x: &HElem, y: &HElem) -> Rat {
    let mut out = Rat::zero();
    for (sx, cx) in x.iter() {
        for (sy, cy) in y.iter() {
            let p = sx.pairing(*sy);
            if p != 0 {
                out += cx * cy * Rat::from_integer(p.into());
            }
        }
    }
    out
}

/// A covector on `H`, written in the dual basis: the coefficient stored at
/// symbol `x` is the coefficient of `x^*`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HCovector(pub Lin<BasisSymbol>);

impl HCovector {
    pub fn eval(&self, x: &HElem) -> Rat {
        let mut out = Rat::zero();
        for (s, c) in self.0.iter() {
            out += c * x.coeff(s);
        }
        out
    }
}

/// Poincare duality `a_i -> b_i^*`, `b_i -> -a_i^*`.
pub fn poincare_dual(x: &HElem) -> HCovector {
    let mut out = Lin::zero();
    for (s, c) in x.iter() {
        match s.kind {
            Kind::A => out.add_term(BasisSymbol::b(s.index), c.clone()),
            Kind::B => out.add_term(BasisSymbol::a(s.index), -c.clone()),
        }
    }
    HCovector(out)
}

/// A linear substitution on `H`, given by the images of the `2g` basis
/// vectors. Symbols without an explicit image are fixed, so partial
/// substitutions can be written directly. Not required to be symplectic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinMap {
    pub genus: Genus,
    images: BTreeMap<BasisSymbol, HElem>,
}

impl LinMap {
    pub fn identity(genus: Genus) -> Self {
        LinMap { genus, images: BTreeMap::new() }
    }

    pub fn from_images(genus: Genus, images: &[(BasisSymbol, HElem)]) -> Self {
        let mut m = Self::identity(genus);
        for (s, img) in images {
            assert!(s.in_genus(genus), "symbol out of range for genus");
            m.images.insert(*s, img.clone());
        }
        m
    }

    pub fn image(&self, s: BasisSymbol) -> HElem {
        match self.images.get(&s) {
            Some(e) => e.clone(),
            None => HElem::unit(s),
        }
    }

    pub fn apply(&self, x: &HElem) -> HElem {
        x.map_linear(|s| self.image(*s))
    }

    pub fn compose(&self, inner: &LinMap) -> LinMap {
        assert_eq!(self.genus, inner.genus, "genus mismatch");
        let mut images = BTreeMap::new();
        for s in self.genus.basis() {
            let img = self.apply(&inner.image(s));
            if img != HElem::unit(s) {
                images.insert(s, img);
            }
        }
        LinMap { genus: self.genus, images }
    }

    /// The symplectic transvection along `v`: `x -> x + (x . v) v`.
    pub fn transvection(genus: Genus, v: &HElem) -> LinMap {
        let mut images = BTreeMap::new();
        for s in genus.basis() {
            let c = intersection(&HElem::unit(s), v);
            if c.is_zero() {
                continue;
            }
            let mut img = HElem::unit(s);
            img.add_scaled(v, &c);
            images.insert(s, img);
        }
        LinMap { genus, images }
    }

    /// `a_i -> b_i^* , b_i -> -a_i^*` read as a basis substitution:
    /// `b_i -> a_i, a_i -> -b_i` on the listed indices.
    pub fn duality_flip(genus: Genus, indices: &[u32]) -> LinMap {
        let mut images = BTreeMap::new();
        for &i in indices {
            images.insert(BasisSymbol::a(i), HElem::unit(BasisSymbol::b(i)).neg());
            images.insert(BasisSymbol::b(i), HElem::unit(BasisSymbol::a(i)));
        }
        LinMap { genus, images }
    }

    /// Relabeling `a_{from} -> a_{to}`, `b_{from} -> b_{to}` for each pair.
    pub fn relabel(genus: Genus, moves: &[(u32, u32)]) -> LinMap {
        let mut images = BTreeMap::new();
        for &(from, to) in moves {
            images.insert(BasisSymbol::a(from), HElem::unit(BasisSymbol::a(to)));
            images.insert(BasisSymbol::b(from), HElem::unit(BasisSymbol::b(to)));
        }
        LinMap { genus, images }
    }
}

/// True iff the map preserves the intersection form on all basis pairs.
pub fn is_symplectic(m: &LinMap) -> bool {
    let basis = m.genus.basis();
    for (i, &x) in basis.iter().enumerate() {
        for &y in &basis[i + 1..] {
            let lhs = intersection(&m.image(x), &m.image(y));
            let rhs = Rat::from_integer(x.pairing(y).into());
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn intersection_on_basis() {
        let a1 = h_sym(BasisSymbol::a(1));
        let b1 = h_sym(BasisSymbol::b(1));
        let a2 = h_sym(BasisSymbol::a(2));
        let b3 = h_sym(BasisSymbol::b(3));
        let a3 = h_sym(BasisSymbol::a(3));
        assert_eq!(intersection(&a1, &b1), rat(1));
        assert_eq!(intersection(&a1, &a2), rat(0));
        assert_eq!(intersection(&b3, &a3), rat(-1));
    }

    #[test]
    fn poincare_dual_rules() {
        let a2 = h_sym(BasisSymbol::a(2));
        let b2 = h_sym(BasisSymbol::b(2));
        assert_eq!(poincare_dual(&a2).0, h_sym(BasisSymbol::b(2)));
        assert_eq!(poincare_dual(&b2).0, h_sym(BasisSymbol::a(2)).neg());
        let a1b1 = h_sym(BasisSymbol::a(1)).plus(&h_sym(BasisSymbol::b(1)));
        let d = poincare_dual(&a1b1).0;
        assert_eq!(d.coeff(&BasisSymbol::b(1)), rat(1));
        assert_eq!(d.coeff(&BasisSymbol::a(1)), rat(-1));
        // involutive up to global sign, and dual pairs against the form
        let x = a1b1.plus(&h_sym(BasisSymbol::a(2)).scaled(&rat(3)));
        let y = h_sym(BasisSymbol::b(2)).minus(&h_sym(BasisSymbol::a(1)));
        assert_eq!(poincare_dual(&x).eval(&y), intersection(&x, &y));
    }

    #[test]
    fn symplectic_checks() {
        let g = Genus::new(4);
        assert!(is_symplectic(&LinMap::identity(g)));
        assert!(is_symplectic(&LinMap::duality_flip(g, &[1, 2, 3, 4])));

        // a partial substitution fixing all unlisted basis vectors need
        // not preserve the form: here (a2', a3') pairs to 2
        let a2 = BasisSymbol::a(2);
        let a3 = BasisSymbol::a(3);
        let img_a2 = h_sym(a2)
            .plus(&h_sym(BasisSymbol::b(2)))
            .minus(&h_sym(BasisSymbol::b(3)));
        let img_a3 = h_sym(a3).plus(&h_sym(BasisSymbol::b(3))).minus(&h_sym(a2));
        let m = LinMap::from_images(g, &[(a2, img_a2.clone()), (a3, img_a3.clone())]);
        assert!(!is_symplectic(&m));
        assert_eq!(intersection(&img_a2, &img_a3), rat(2));

        // the transvection along b2 - b3 has the same image on a2 and is
        // symplectic
        let v = h_sym(BasisSymbol::b(2)).minus(&h_sym(BasisSymbol::b(3)));
        let t = LinMap::transvection(g, &v);
        assert!(is_symplectic(&t));
        assert_eq!(t.image(a2), img_a2);
    }
}
