//! Weight bookkeeping for the symplectic group: weights of basis words,
//! raising operators for the simple roots, highest-weight tests and the
//! Weyl dimension formula for type C.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::linalg::{Int, Rat};
use crate::multi::MultiElem;
use crate::symplectic::{BasisSymbol, Genus, HElem, Kind};

/// Integer weight in the epsilon coordinates: `weight(a_i) = e_i`,
/// `weight(b_i) = -e_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Weight(pub Vec<i64>);

/// Young-diagram label `[n_1 n_2 ... n_l]` with `n_1 >= ... >= n_l >= 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IrrepLabel(pub Vec<u32>);

impl IrrepLabel {
    pub fn new(parts: &[u32]) -> Self {
        for w in parts.windows(2) {
            assert!(w[0] >= w[1], "label parts must be weakly decreasing");
        }
        assert!(parts.iter().all(|&p| p >= 1), "label parts must be positive");
        IrrepLabel(parts.to_vec())
    }

    pub fn trivial() -> Self {
        IrrepLabel(Vec::new())
    }

    /// `[1^k]`
    pub fn column(k: u32) -> Self {
        IrrepLabel(alloc::vec![1; k as usize])
    }

    pub fn as_weight(&self, g: Genus) -> Weight {
        let mut coords = alloc::vec![0i64; g.get() as usize];
        for (i, &p) in self.0.iter().enumerate() {
            if i < coords.len() {
                coords[i] = p as i64;
            }
        }
        Weight(coords)
    }
}

pub fn weight_of_word(g: Genus, symbols: impl Iterator<Item = BasisSymbol>) -> Weight {
    let mut coords = alloc::vec![0i64; g.get() as usize];
    for s in symbols {
        let i = (s.index - 1) as usize;
        match s.kind {
            Kind::A => coords[i] += 1,
            Kind::B => coords[i] -= 1,
        }
    }
    Weight(coords)
}

/// Weight of a weight vector; `None` when the element mixes weights.
pub fn weight_of(x: &MultiElem) -> Option<Weight> {
    let mut weight: Option<Weight> = None;
    for (word, _) in x.terms.iter() {
        let w = weight_of_word(x.genus, word.iter().flatten().copied());
        match &weight {
            None => weight = Some(w),
            Some(prev) => {
                if *prev != w {
                    return None;
                }
            }
        }
    }
    weight
}

/// The raising operator for the i-th simple root, as a symbol-level rule.
/// For `i < g`: `a_{i+1} -> a_i`, `b_i -> -b_{i+1}`; for `i = g` (the long
/// root): `b_g -> a_g`.
pub fn raising_rule(g: Genus, i: u32) -> impl Fn(BasisSymbol) -> HElem {
    let g = g.get();
    move |s: BasisSymbol| -> HElem {
        if i < g {
            if s.kind == Kind::A && s.index == i + 1 {
                return HElem::unit(BasisSymbol::a(i));
            }
            if s.kind == Kind::B && s.index == i {
                return HElem::unit(BasisSymbol::b(i + 1)).neg();
            }
        } else if s.kind == Kind::B && s.index == g {
            return HElem::unit(BasisSymbol::a(g));
        }
        HElem::zero()
    }
}

/// True iff every raising operator kills `x`.
pub fn raising_annihilates(x: &MultiElem) -> bool {
    (1..=x.genus.get()).all(|i| x.apply_symbol_derivation(raising_rule(x.genus, i)).is_zero())
}

/// A nonzero weight vector is a highest weight vector for `label` iff its
/// weight equals the label (zero-padded) and all raising operators kill it.
pub fn is_highest_weight(x: &MultiElem, label: &IrrepLabel) -> bool {
    if x.is_zero() {
        return false;
    }
    let w = match weight_of(x) {
        Some(w) => w,
        None => return false,
    };
    w == label.as_weight(x.genus) && raising_annihilates(x)
}

/// Weyl dimension formula for the irreducible representation of
/// `Sp(2g)` with highest weight `label`. Labels longer than `g` denote the
/// zero module.
pub fn weyl_dim(g: Genus, label: &IrrepLabel) -> Int {
    let gg = g.get() as usize;
    if label.0.len() > gg {
        return Int::zero();
    }
    let mut lam = alloc::vec![0i64; gg];
    for (i, &p) in label.0.iter().enumerate() {
        lam[i] = p as i64;
    }
    // l_i = lambda_i + g - i (1-based: + g - i + 1); m_i the same at lambda=0
    let l: Vec<i64> = (0..gg).map(|i| lam[i] + (gg - i) as i64).collect();
    let m: Vec<i64> = (0..gg).map(|i| (gg - i) as i64).collect();
    let mut num = Rat::one();
    for i in 0..gg {
        num *= Rat::new(Int::from(l[i]), Int::from(m[i]));
        for j in i + 1..gg {
            num *= Rat::new(
                Int::from(l[i] * l[i] - l[j] * l[j]),
                Int::from(m[i] * m[i] - m[j] * m[j]),
            );
        }
    }
    assert!(num.is_integer(), "Weyl dimension must be an integer");
    num.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{binomial, int};

    #[test]
    fn weyl_dims_small() {
        let g3 = Genus::new(3);
        assert_eq!(weyl_dim(g3, &IrrepLabel::trivial()), int(1));
        assert_eq!(weyl_dim(g3, &IrrepLabel::column(3)), int(14));
        assert_eq!(weyl_dim(g3, &IrrepLabel::new(&[2, 1])), int(64));
        assert_eq!(weyl_dim(g3, &IrrepLabel::new(&[3, 1, 1])), int(216));
        assert_eq!(weyl_dim(g3, &IrrepLabel::new(&[2, 2])), int(90));
        // [1^3] has dimension C(2g,3) - 2g for every genus
        for g in 2..=8u32 {
            let expect = binomial(2 * g as u64, 3) - int(2 * g as i64);
            assert_eq!(weyl_dim(Genus::new(g), &IrrepLabel::column(3)), expect);
        }
        // labels longer than g denote the zero module
        assert_eq!(weyl_dim(g3, &IrrepLabel::column(4)), int(0));
    }

    #[test]
    fn highest_weight_examples() {
        let g = Genus::new(4);
        let a = |i| BasisSymbol::a(i);
        let mut v = MultiElem::zero(
            g,
            crate::multi::SpaceDescriptor(alloc::vec![
                (crate::multi::PowKind::Wedge, 4),
                (crate::multi::PowKind::Wedge, 2),
            ]),
        );
        v.add_word(
            alloc::vec![alloc::vec![a(1), a(2), a(3), a(4)], alloc::vec![a(1), a(2)]],
            Rat::one(),
        );
        assert!(is_highest_weight(&v, &IrrepLabel::new(&[2, 2, 1, 1])));

        let g6 = Genus::new(6);
        let top = MultiElem::wedge_word(g6, &[a(1), a(2), a(3), a(4), a(5), a(6)]);
        assert!(is_highest_weight(&top, &IrrepLabel::column(6)));

        let g2 = Genus::new(2);
        let w = MultiElem::wedge_word(g2, &[a(1), BasisSymbol::b(1)]);
        assert!(!is_highest_weight(&w, &IrrepLabel::column(2)));
        assert!(!is_highest_weight(&w, &IrrepLabel::trivial()));
    }
}
