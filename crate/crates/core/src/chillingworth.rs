//! The layer that assembles the generic machinery into the specific
//! objects of interest: the contraction-kernel module `U` and its integral
//! basis, first-Johnson values of bounding-pair maps, the Torelli-quotient
//! Smith form, abelian cycles with their detection pipelines, the `s`-map
//! obstruction, the `xi` elements, and the Casson-Morita value arithmetic.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::linalg::{binomial, int, Int, Rat};
use crate::multi::{MultiElem, SpaceDescriptor, Wedge2Elem};
use crate::snf::IntMatrix;
use crate::symplectic::{BasisSymbol, Genus, HElem, LinMap};
use crate::treediag::{
    eta_tensor, htree_syms, q_map, tree5_syms, tree_bracket, tripod_syms, TreeCombo,
};

fn a(i: u32) -> BasisSymbol {
    BasisSymbol::a(i)
}

fn b(i: u32) -> BasisSymbol {
    BasisSymbol::b(i)
}

/// Johnson value of a bounding-pair map: subsurface span, homology class of
/// the pair, and a multiplicity.
#[derive(Clone, Debug)]
pub struct BpSpec {
    pub span: Vec<u32>,
    pub curve_class: HElem,
    pub multiplicity: i64,
}

/// `multiplicity * (sum_{i in span} a_i ^ b_i) ^ curve_class`.
pub fn tau1_bp(g: Genus, spec: &BpSpec) -> MultiElem {
    assert!(!spec.curve_class.is_zero(), "curve class must be nonzero");
    let mut out = MultiElem::zero(g, SpaceDescriptor::wedge(3));
    for &i in &spec.span {
        assert!(i >= 1 && i <= g.get(), "span index out of range");
        for (s, c) in spec.curve_class.iter() {
            out.add_word(
                alloc::vec![alloc::vec![a(i), b(i), *s]],
                c * Rat::from_integer(spec.multiplicity.into()),
            );
        }
    }
    out
}

/// The Chillingworth class of a first-Johnson value: `2 C_3(t)`.
pub fn chillingworth_class(t: &MultiElem) -> MultiElem {
    t.contraction(3).scaled(&Rat::from_integer(2.into()))
}

/// Membership in the Chillingworth subgroup at the level of Johnson values:
/// the contraction vanishes.
pub fn in_ch(t: &MultiElem) -> bool {
    t.contraction(3).is_zero()
}

/// The integral basis of `U = Ker(C_3)` in three families:
/// (i) pure `a`/pure `b` triples, (ii) mixed triples with distinct indices,
/// (iii) differences of `x ^ a_i ^ b_i` words anchored per `x`.
pub fn u_basis(g: Genus) -> Vec<MultiElem> {
    assert!(g.get() >= 3, "u_basis needs genus at least 3");
    let mut out = u_family_i(g);
    out.extend(u_family_ii(g));
    out.extend(u_family_iii(g));
    out
}

fn wedge(g: Genus, syms: &[BasisSymbol]) -> MultiElem {
    MultiElem::wedge_word(g, syms)
}

pub fn u_family_i(g: Genus) -> Vec<MultiElem> {
    let n = g.get();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                out.push(wedge(g, &[a(i), a(j), a(k)]));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                out.push(wedge(g, &[b(i), b(j), b(k)]));
            }
        }
    }
    out
}

pub fn u_family_ii(g: Genus) -> Vec<MultiElem> {
    let n = g.get();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=n {
                if k != i && k != j {
                    out.push(wedge(g, &[a(i), a(j), b(k)]));
                }
            }
        }
    }
    for j in 1..=n {
        for k in j + 1..=n {
            for i in 1..=n {
                if i != j && i != k {
                    out.push(wedge(g, &[a(i), b(j), b(k)]));
                }
            }
        }
    }
    out
}

pub fn u_family_iii(g: Genus) -> Vec<MultiElem> {
    let n = g.get();
    let mut out = Vec::new();
    let x_symbols: Vec<BasisSymbol> = (1..=n).map(a).chain((1..=n).map(b)).collect();
    for x in x_symbols {
        // anchor at the smallest admissible index for this x
        let anchor = if x.index == 1 { 2 } else { 1 };
        for i in 1..=n {
            if i == x.index || i == anchor {
                continue;
            }
            let first = wedge(g, &[x, a(anchor), b(anchor)]);
            let second = wedge(g, &[x, a(i), b(i)]);
            out.push(first.minus(&second));
        }
    }
    out
}

/// The `x ^ a_i ^ b_i` monomials (the span of family (iii) plus the image
/// of `H`); together with (i) and (ii) they span all of `wedge^3 H`.
pub fn u_family_iv(g: Genus) -> Vec<MultiElem> {
    let n = g.get();
    let mut out = Vec::new();
    let x_symbols: Vec<BasisSymbol> = (1..=n).map(a).chain((1..=n).map(b)).collect();
    for x in x_symbols {
        for i in 1..=n {
            if i != x.index {
                out.push(wedge(g, &[x, a(i), b(i)]));
            }
        }
    }
    out
}

pub fn u_rank_expected(g: Genus) -> Int {
    binomial(2 * g.get() as u64, 3) - int(2 * g.get() as i64)
}

/// `x -> sum_i a_i ^ b_i ^ x`, the stabilized inclusion of `H`.
pub fn h_into_wedge3(g: Genus, x: BasisSymbol) -> MultiElem {
    let mut out = MultiElem::zero(g, SpaceDescriptor::wedge(3));
    for i in 1..=g.get() {
        out.add_word(alloc::vec![alloc::vec![a(i), b(i), x]], Rat::one());
    }
    out
}

fn wedge3_monomials(g: Genus) -> Vec<Vec<BasisSymbol>> {
    let basis = g.basis();
    let mut out = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for k in j + 1..basis.len() {
                out.push(alloc::vec![basis[i], basis[j], basis[k]]);
            }
        }
    }
    out
}

/// Integer matrix of `(x, Y) -> (sum_i a_i ^ b_i ^ x) + Y` on
/// `H (+) U -> wedge^3 H` in the monomial basis of the target.
pub fn torelli_quotient_matrix(g: Genus) -> IntMatrix {
    let monomials = wedge3_monomials(g);
    let index: alloc::collections::BTreeMap<&[BasisSymbol], usize> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect();
    let mut columns: Vec<MultiElem> = g.basis().into_iter().map(|x| h_into_wedge3(g, x)).collect();
    columns.extend(u_basis(g));
    let mut m = IntMatrix::zero(monomials.len(), columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (word, coeff) in col.terms.iter() {
            let r = index[word[0].as_slice()];
            assert!(coeff.is_integer());
            m[(r, c)] = coeff.to_integer();
        }
    }
    m
}

/// Nontrivial invariant factors of the Torelli-quotient matrix; expected to
/// be `g - 1` with multiplicity `2g`.
pub fn torelli_mod_ch(g: Genus) -> Vec<Int> {
    let m = torelli_quotient_matrix(g);
    let snf = m.smith_normal_form();
    snf.invariant_factors
        .into_iter()
        .filter(|f| !f.is_one())
        .collect()
}

/// Wedge of two Johnson values inside `wedge^2 (wedge^3 H)`; the boolean
/// reports whether both inputs were Chillingworth values.
pub fn abelian_cycle(t1: &MultiElem, t2: &MultiElem) -> (Wedge2Elem, bool) {
    let ok = in_ch(t1) && in_ch(t2);
    (Wedge2Elem::wedge_of(t1, t2), ok)
}

/// One step of a detection pipeline.
#[derive(Clone)]
pub enum Step {
    InducedDiff(LinMap),
    Induced(LinMap),
    Inclusion2,
    JacobiAt(usize),
    MultiplyAt(usize),
    ContractAt(usize),
    PartialContract5,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::InducedDiff(_) => write!(f, "id - substitution"),
            Step::Induced(_) => write!(f, "substitution"),
            Step::Inclusion2 => write!(f, "canonical inclusion"),
            Step::JacobiAt(s) => write!(f, "jacobi at slot {}", s),
            Step::MultiplyAt(s) => write!(f, "multiply slots {}-{}", s, s + 1),
            Step::ContractAt(s) => write!(f, "contract slot {}", s),
            Step::PartialContract5 => write!(f, "partial contraction"),
        }
    }
}

/// Element at a pipeline stage: either still in the outer wedge square or
/// already in a plain product space.
#[derive(Clone, PartialEq, Eq)]
pub enum StageElem {
    W2(Wedge2Elem),
    Multi(MultiElem),
}

impl StageElem {
    pub fn is_zero(&self) -> bool {
        match self {
            StageElem::W2(x) => x.is_zero(),
            StageElem::Multi(x) => x.is_zero(),
        }
    }

    pub fn as_multi(&self) -> &MultiElem {
        match self {
            StageElem::Multi(x) => x,
            StageElem::W2(_) => panic!("stage element is still in the outer wedge"),
        }
    }
}

impl fmt::Display for StageElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageElem::W2(x) => write!(f, "{}", x),
            StageElem::Multi(x) => write!(f, "{}", x),
        }
    }
}

fn apply_step(step: &Step, x: &StageElem) -> StageElem {
    match (step, x) {
        (Step::InducedDiff(m), StageElem::W2(v)) => StageElem::W2(v.induced_difference(m)),
        (Step::InducedDiff(m), StageElem::Multi(v)) => StageElem::Multi(v.induced_difference(m)),
        (Step::Induced(m), StageElem::W2(v)) => StageElem::W2(v.induced(m)),
        (Step::Induced(m), StageElem::Multi(v)) => StageElem::Multi(v.induced(m)),
        (Step::Inclusion2, StageElem::W2(v)) => StageElem::Multi(v.canonical_inclusion()),
        (Step::Inclusion2, StageElem::Multi(v)) => StageElem::Multi(v.canonical_inclusion()),
        (Step::JacobiAt(s), StageElem::Multi(v)) => StageElem::Multi(v.jacobi_at(*s)),
        (Step::MultiplyAt(s), StageElem::Multi(v)) => StageElem::Multi(v.multiply_at(*s)),
        (Step::ContractAt(s), StageElem::Multi(v)) => StageElem::Multi(v.contraction_at(*s)),
        (Step::PartialContract5, StageElem::Multi(v)) => StageElem::Multi(v.partial_contract5()),
        _ => panic!("step not applicable to an outer-wedge element"),
    }
}

pub struct Pipeline {
    pub steps: Vec<Step>,
}

/// Run all steps, returning the final element and the trace of every
/// intermediate (input first).
pub fn run_pipeline(p: &Pipeline, x: StageElem) -> (StageElem, Vec<StageElem>) {
    let mut trace = alloc::vec![x];
    for step in &p.steps {
        let next = apply_step(step, trace.last().expect("nonempty"));
        trace.push(next);
    }
    (trace.last().expect("nonempty").clone(), trace)
}

fn transvection_b(g: Genus, i: u32, j: u32) -> LinMap {
    let v = HElem::unit(b(i)).minus(&HElem::unit(b(j)));
    LinMap::transvection(g, &v)
}

/// Detection pipeline for the `[2^2 1^2]` component (needs genus >= 4).
pub fn pipeline_2211(g: Genus) -> Pipeline {
    assert!(g.get() >= 4);
    Pipeline {
        steps: alloc::vec![
            Step::InducedDiff(transvection_b(g, 2, 3)),
            Step::InducedDiff(transvection_b(g, 1, 2)),
            Step::Inclusion2,
            Step::JacobiAt(1),
            Step::MultiplyAt(0),
            Step::Induced(LinMap::relabel(g, &[(4, 1), (1, 3), (3, 4)])),
            Step::Induced(LinMap::duality_flip(g, &[1, 2, 3, 4])),
        ],
    }
}

/// Detection pipeline for the `[1^4]` component (needs genus >= 5); ends at
/// the 6-fold contraction.
pub fn pipeline_14(g: Genus) -> Pipeline {
    assert!(g.get() >= 5);
    Pipeline {
        steps: alloc::vec![Step::Inclusion2, Step::MultiplyAt(0), Step::ContractAt(0)],
    }
}

/// Detection pipeline for the `[1^6]` component (needs genus >= 6).
pub fn pipeline_16(g: Genus) -> Pipeline {
    assert!(g.get() >= 6);
    Pipeline {
        steps: alloc::vec![
            Step::InducedDiff(transvection_b(g, 4, 6)),
            Step::InducedDiff(transvection_b(g, 1, 2)),
            Step::Inclusion2,
            Step::MultiplyAt(0),
            Step::Induced(LinMap::duality_flip(g, &[1, 2, 3, 4, 5, 6])),
        ],
    }
}

/// The abelian cycle detecting `[2^2 1^2]`.
pub fn cycle_2211(g: Genus) -> Wedge2Elem {
    let t1 = wedge(g, &[a(1), b(1), b(4)]).minus(&wedge(g, &[a(3), b(3), b(4)]));
    let t2 = wedge(g, &[a(2), b(2), b(4)]).minus(&wedge(g, &[a(3), b(3), b(4)]));
    let (c, ok) = abelian_cycle(&t1, &t2);
    assert!(ok);
    c
}

/// The abelian cycle detecting `[1^4]` (and `[1^6]` at genus >= 6).
pub fn cycle_14(g: Genus) -> Wedge2Elem {
    let t1 = wedge(g, &[a(1), b(1), b(3)]).minus(&wedge(g, &[a(2), b(2), b(3)]));
    let t2 = wedge(g, &[a(1), b(1), b(5)])
        .plus(&wedge(g, &[a(2), b(2), b(5)]))
        .plus(&wedge(g, &[a(3), b(3), b(5)]))
        .minus(&wedge(g, &[a(4), b(4), b(5)]).scaled(&Rat::from_integer(3.into())));
    let (c, ok) = abelian_cycle(&t1, &t2);
    assert!(ok);
    c
}

/// Both slot contractions vanish exactly on `wedge^2 U` inside the outer
/// wedge square of `wedge^3 H`.
pub fn wedge2_in_u(x: &Wedge2Elem) -> bool {
    let incl = x.canonical_inclusion();
    incl.contraction_at(0).is_zero() && incl.contraction_at(1).is_zero()
}

/// The `s`-map: convert each wedge-3 factor to its tripod, glue with the
/// tree bracket, then apply the degree-2 pairing map.
pub fn s_map(x: &Wedge2Elem) -> MultiElem {
    assert_eq!(x.inner_arity, 3, "s is defined on wedge^2 of wedge^3 H");
    assert!(wedge2_in_u(x), "factor not in the contraction kernel");
    q_map(&s_map_bracket(x), x.genus)
}

/// The intermediate degree-2 tree combination of the `s`-map.
pub fn s_map_bracket(x: &Wedge2Elem) -> TreeCombo {
    let mut out = TreeCombo::zero(2);
    for ((w1, w2), c) in x.terms.iter() {
        let t1 = tripod_syms(w1[0], w1[2], w1[1]);
        let t2 = tripod_syms(w2[0], w2[2], w2[1]);
        out = out.plus(&tree_bracket(&t1, &t2).scaled(c));
    }
    out
}

/// `xi_0`, the element of `wedge^2 U` on which `s` is computed.
pub fn xi0(g: Genus) -> Wedge2Elem {
    assert!(g.get() >= 4);
    let t1 = wedge(g, &[a(1), a(3), b(3)]).minus(&wedge(g, &[a(1), a(4), b(4)]));
    let t2 = wedge(g, &[a(2), a(3), b(3)]).minus(&wedge(g, &[a(2), a(4), b(4)]));
    Wedge2Elem::wedge_of(&t1, &t2)
}

/// `xi_1` in bracket form.
pub fn xi1_bracket() -> TreeCombo {
    tree_bracket(
        &tripod_syms(a(1), a(2), a(3)),
        &htree_syms([a(1), b(1), a(1), b(3)]),
    )
}

/// `xi_1` as the displayed difference of two caterpillars.
pub fn xi1_display() -> TreeCombo {
    tree5_syms([a(1), a(1), b(1), a(2), a(1)])
        .minus(&tree5_syms([a(1), a(2), a(3), b(3), a(1)]))
}

/// `xi_2 = -2` times a single caterpillar.
pub fn xi2_display() -> TreeCombo {
    tree5_syms([a(2), a(2), a(1), a(3), a(2)]).scaled(&Rat::from_integer((-2).into()))
}

pub fn xi2_bracket() -> TreeCombo {
    tree_bracket(
        &tripod_syms(b(1), a(2), a(3)),
        &htree_syms([a(1), a(2), a(1), a(2)]),
    )
}

/// All three obstruction elements at once (the first needs genus >= 4).
pub fn xi_elements(g: Genus) -> (Wedge2Elem, TreeCombo, TreeCombo) {
    (xi0(g), xi1_bracket(), xi2_display())
}

/// The detection value of a degree-3 tree element: embed eta into
/// `tensor^5 H` and apply the arity-5 partial contraction.
pub fn detect5(x: &TreeCombo, g: Genus) -> MultiElem {
    let p = Pipeline { steps: alloc::vec![Step::PartialContract5] };
    let (out, _) = run_pipeline(&p, StageElem::Multi(eta_tensor(x, g)));
    out.as_multi().clone()
}

/// Casson-Morita value table: bounding-curve values, the two derived
/// constants, and the gcd of the image.
pub struct CassonMoritaTable {
    pub bscc_values: Vec<(u32, i64)>,
    pub d_b0: i64,
    pub d_twist_gamma: i64,
    pub image_gcd: i64,
}

/// Value of the homomorphism on a genus-`h` bounding simple closed curve.
pub fn d_bscc(h: u32) -> i64 {
    4 * h as i64 * (h as i64 - 1)
}

pub fn casson_morita_values(g: Genus) -> CassonMoritaTable {
    let bscc_values: Vec<(u32, i64)> = (1..=g.get()).map(|h| (h, d_bscc(h))).collect();
    // the two twists of the homological genus-zero pair take the same value
    // and carry equal isotropic crossed-homomorphism values, so every
    // correction term in the composition rule vanishes and the pair map
    // evaluates to the plain difference
    let d_twist_gamma = 11;
    let d_opposite_twist = 11;
    let d_b0 = d_twist_gamma - d_opposite_twist;
    let image_gcd = bscc_values
        .iter()
        .filter(|(h, _)| *h >= 2)
        .fold(0i64, |acc, (_, v)| gcd_i64(acc, *v));
    CassonMoritaTable { bscc_values, d_b0, d_twist_gamma, image_gcd }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Order of the Euler class of the central extension: the boundary twist
/// maps to `4g(g-1)` and the image of the dual is generated by that value
/// over `8`.
pub fn euler_class_order(g: Genus) -> i64 {
    let gg = g.get() as i64;
    (4 * gg * (gg - 1)) / 8
}

/// The closed-form ranks against the binomial count of the `U` basis.
pub fn rank_formulas_check(g: Genus) -> bool {
    let gg = g.get() as i64;
    let u_rank = u_rank_expected(g);
    let once_punctured = Rat::new(int(2 * gg * (2 * gg * gg - 3 * gg - 2)), int(3));
    let bounded = Rat::new(int((2 * gg - 1) * (2 * gg * gg - 2 * gg - 3)), int(3));
    once_punctured == Rat::from_integer(u_rank.clone())
        && bounded == Rat::from_integer(u_rank + Int::one())
}

pub fn describe_invariant_factors(factors: &[Int]) -> String {
    let mut out = String::new();
    for (i, f) in factors.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format!("{}", f));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn bp_values_and_membership() {
        let g = Genus::new(4);
        let spec = BpSpec {
            span: alloc::vec![1],
            curve_class: HElem::unit(b(4)),
            multiplicity: 1,
        };
        assert_eq!(tau1_bp(g, &spec), MultiElem::wedge_word(g, &[a(1), b(1), b(4)]));
        let neg = BpSpec {
            span: alloc::vec![3],
            curve_class: HElem::unit(b(4)),
            multiplicity: -1,
        };
        assert_eq!(
            tau1_bp(g, &neg),
            MultiElem::wedge_word(g, &[a(3), b(3), b(4)]).scaled(&rat(-1))
        );
        let empty = BpSpec {
            span: alloc::vec![],
            curve_class: HElem::unit(b(4)),
            multiplicity: 1,
        };
        assert!(tau1_bp(g, &empty).is_zero());
        // genus-one pair with an external class is not a Chillingworth value
        assert!(!in_ch(&tau1_bp(g, &spec)));
        assert_eq!(
            chillingworth_class(&tau1_bp(g, &spec)),
            MultiElem::wedge_word(g, &[b(4)]).scaled(&rat(2))
        );
    }

    #[test]
    fn u_basis_structure_genus_three() {
        let g = Genus::new(3);
        let basis = u_basis(g);
        assert_eq!(basis.len(), 14);
        for v in &basis {
            assert!(v.contraction(3).is_zero());
        }
        // a named family (iii) member
        let member = MultiElem::wedge_word(g, &[a(1), a(2), b(2)])
            .minus(&MultiElem::wedge_word(g, &[a(1), a(3), b(3)]));
        assert!(basis.contains(&member));
        // family (i) member
        assert!(basis.contains(&MultiElem::wedge_word(g, &[a(1), a(2), a(3)])));
    }

    #[test]
    fn abelian_cycle_expansions() {
        let g = Genus::new(5);
        // wedge square of a value with itself vanishes
        let t = MultiElem::wedge_word(g, &[a(1), b(1), b(4)])
            .minus(&MultiElem::wedge_word(g, &[a(3), b(3), b(4)]));
        let (sq, ok) = abelian_cycle(&t, &t);
        assert!(ok && sq.is_zero());
        // the three-term cyclic sum
        let c = cycle_2211(g);
        assert_eq!(c.terms.len(), 3);
        // the eight-term expansion
        let c = cycle_14(g);
        assert_eq!(c.terms.len(), 8);
        assert!(wedge2_in_u(&c));
    }

    #[test]
    fn pipeline_traces_have_every_stage() {
        let g = Genus::new(4);
        let (_, trace) = run_pipeline(&pipeline_2211(g), StageElem::W2(cycle_2211(g)));
        assert_eq!(trace.len(), 8);
        let g = Genus::new(5);
        let (_, trace) = run_pipeline(&pipeline_14(g), StageElem::W2(cycle_14(g)));
        assert_eq!(trace.len(), 4);
    }

    #[test]
    fn s_map_trivial_cases() {
        let g = Genus::new(4);
        // all-a labels never pair, so every gluing weight vanishes
        let x = MultiElem::wedge_word(g, &[a(1), a(2), a(3)]);
        let y = MultiElem::wedge_word(g, &[a(2), a(3), a(4)]);
        let w = Wedge2Elem::wedge_of(&x, &y);
        assert!(wedge2_in_u(&w));
        assert!(s_map(&w).is_zero());
    }
}
