//! Randomized property suites: exact linear algebra laws, wedge
//! normalization, equivariance of the detection maps under symplectic
//! substitutions, functoriality, and the Lie-theoretic identities.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use treelie_core::freelie::{
    derivation_bracket, h_kernel_basis, lie_bracket, lyndon_words, tensor_commutator, LieElem,
};
use treelie_core::linalg::{rat, Lin, Rat, RatMatrix};
use treelie_core::multi::{MultiElem, PowKind, SpaceDescriptor};
use treelie_core::rep::{weyl_dim, IrrepLabel};
use treelie_core::snf::IntMatrix;
use treelie_core::symplectic::{intersection, is_symplectic, BasisSymbol, Genus, HElem, LinMap};
use num_traits::{One, Signed, Zero};

fn rand_symbol(rng: &mut StdRng, g: Genus) -> BasisSymbol {
    let n = 2 * g.get();
    let k = rng.gen_range(0..n);
    if k < g.get() {
        BasisSymbol::a(k + 1)
    } else {
        BasisSymbol::b(k - g.get() + 1)
    }
}

fn rand_h(rng: &mut StdRng, g: Genus, terms: usize) -> HElem {
    let mut out = HElem::zero();
    for _ in 0..terms {
        let c = rng.gen_range(-2i64..=2);
        if c != 0 {
            out.add_term(rand_symbol(rng, g), rat(c));
        }
    }
    out
}

/// Random product of symplectic transvections.
fn rand_symplectic(rng: &mut StdRng, g: Genus) -> LinMap {
    let mut m = LinMap::identity(g);
    let count = rng.gen_range(1..=3);
    for _ in 0..count {
        let mut v = rand_h(rng, g, 2);
        if v.is_zero() {
            v = HElem::unit(BasisSymbol::a(1));
        }
        m = LinMap::transvection(g, &v).compose(&m);
    }
    m
}

fn rand_wedge_elem(rng: &mut StdRng, g: Genus, arity: usize, terms: usize) -> MultiElem {
    let mut out = MultiElem::zero(g, SpaceDescriptor::wedge(arity));
    for _ in 0..terms {
        let word: Vec<BasisSymbol> = (0..arity).map(|_| rand_symbol(rng, g)).collect();
        let c = rng.gen_range(-3i64..=3);
        out.add_word(vec![word], rat(c));
    }
    out
}

#[test]
fn snf_properties_random() {
    let mut rng = StdRng::seed_from_u64(11);
    for case in 0..100 {
        let rows = rng.gen_range(1..=7);
        let cols = rng.gen_range(1..=7);
        let mut m = IntMatrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(0.6) {
                    m[(r, c)] = treelie_core::linalg::int(rng.gen_range(-9i64..=9));
                }
            }
        }
        let snf = m.smith_normal_form();
        assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.diag, "case {}", case);
        assert_eq!(snf.left.det().abs(), treelie_core::linalg::int(1));
        assert_eq!(snf.right.det().abs(), treelie_core::linalg::int(1));
        for i in 0..snf.diag.rows.min(snf.diag.cols) {
            assert!(!snf.diag[(i, i)].is_negative());
            for j in 0..snf.diag.cols {
                if i != j && j < snf.diag.rows {
                    // off-diagonal must vanish
                    assert!(snf.diag[(i.min(j), i.max(j))].is_zero() || i == j);
                }
            }
        }
        let f = &snf.invariant_factors;
        for w in f.windows(2) {
            use num_integer::Integer;
            assert!(w[1].is_multiple_of(&w[0]), "divisibility chain");
        }
    }
}

#[test]
fn snf_invariant_under_unimodular_multiplication() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..30 {
        let n = rng.gen_range(2..=5);
        let mut m = IntMatrix::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = treelie_core::linalg::int(rng.gen_range(-6i64..=6));
            }
        }
        // random unimodular = elementary row/column additions on identities
        let mut u = IntMatrix::identity(n);
        let mut v = IntMatrix::identity(n);
        for _ in 0..6 {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                let q = treelie_core::linalg::int(rng.gen_range(-3i64..=3));
                let mut e = IntMatrix::identity(n);
                e[(i, j)] = q.clone();
                u = e.mul(&u);
                let mut e2 = IntMatrix::identity(n);
                e2[(j, i)] = q;
                v = v.mul(&e2);
            }
        }
        let transformed = u.mul(&m).mul(&v);
        assert_eq!(
            m.smith_normal_form().invariant_factors,
            transformed.smith_normal_form().invariant_factors
        );
    }
}

#[test]
fn kernel_rank_nullity_random() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..100 {
        let rows = rng.gen_range(1..=12);
        let cols = rng.gen_range(1..=12);
        let mut m = RatMatrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(0.4) {
                    m.set(r, c, rat(rng.gen_range(-5i64..=5)));
                }
            }
        }
        let rank = m.rank();
        let kernel = m.kernel_basis();
        assert_eq!(rank + kernel.len(), cols);
        for v in &kernel {
            assert!(m.mul_vec(v).is_zero(), "kernel vector not annihilated");
        }
        // kernel vectors are linearly independent
        let mut acc = treelie_core::linalg::RankAccumulator::new();
        for v in &kernel {
            assert!(acc.insert(v.clone()));
        }
    }
}

#[test]
fn wedge_normalization_laws() {
    let mut rng = StdRng::seed_from_u64(14);
    let g = Genus::new(4);
    for _ in 0..100 {
        let arity = rng.gen_range(2..=5);
        let word: Vec<BasisSymbol> = (0..arity).map(|_| rand_symbol(&mut rng, g)).collect();
        // repeated symbol kills the word
        let mut with_dup = word.clone();
        let dup_at = rng.gen_range(0..arity);
        let copy_to = (dup_at + 1) % arity;
        with_dup[copy_to] = with_dup[dup_at];
        assert!(MultiElem::wedge_word(g, &with_dup).is_zero());
        // swapping adjacent symbols negates
        if arity >= 2 {
            let i = rng.gen_range(0..arity - 1);
            let mut swapped = word.clone();
            swapped.swap(i, i + 1);
            let x = MultiElem::wedge_word(g, &word);
            let y = MultiElem::wedge_word(g, &swapped);
            assert_eq!(x, y.scaled(&-Rat::one()));
        }
    }
}

#[test]
fn equivariance_of_detection_maps() {
    let mut rng = StdRng::seed_from_u64(15);
    let g = Genus::new(3);
    for case in 0..100 {
        let m = rand_symplectic(&mut rng, g);
        assert!(is_symplectic(&m), "transvection products preserve the form");

        // contraction, two arities
        for k in [3usize, 4] {
            let x = rand_wedge_elem(&mut rng, g, k, 3);
            assert_eq!(
                x.induced(&m).contraction(k),
                x.contraction(k).induced(&m),
                "contraction equivariance, case {}",
                case
            );
        }
        // canonical inclusion
        let x = rand_wedge_elem(&mut rng, g, 3, 3);
        assert_eq!(x.induced(&m).canonical_inclusion(), x.canonical_inclusion().induced(&m));
        // multiplication on a two-factor space
        let mut y = MultiElem::zero(
            g,
            SpaceDescriptor(vec![(PowKind::Wedge, 2), (PowKind::Wedge, 2)]),
        );
        for _ in 0..3 {
            let w1: Vec<BasisSymbol> = (0..2).map(|_| rand_symbol(&mut rng, g)).collect();
            let w2: Vec<BasisSymbol> = (0..2).map(|_| rand_symbol(&mut rng, g)).collect();
            y.add_word(vec![w1, w2], rat(rng.gen_range(-2i64..=2)));
        }
        assert_eq!(y.induced(&m).multiply_at(0), y.multiply_at(0).induced(&m));
        // Jacobi identity map
        let x = rand_wedge_elem(&mut rng, g, 3, 3);
        assert_eq!(x.induced(&m).jacobi_at(0), x.jacobi_at(0).induced(&m));
        // arity-5 partial contraction
        let mut t = MultiElem::zero(g, SpaceDescriptor::tensor_pow(5));
        for _ in 0..3 {
            let w: Vec<BasisSymbol> = (0..5).map(|_| rand_symbol(&mut rng, g)).collect();
            t.add_word(vec![w], rat(rng.gen_range(-2i64..=2)));
        }
        assert_eq!(t.induced(&m).partial_contract5(), t.partial_contract5().induced(&m));
    }
}

#[test]
fn induced_functoriality() {
    let mut rng = StdRng::seed_from_u64(16);
    let g = Genus::new(3);
    let id = LinMap::identity(g);
    for _ in 0..50 {
        let m1 = rand_symplectic(&mut rng, g);
        let m2 = rand_symplectic(&mut rng, g);
        let x = rand_wedge_elem(&mut rng, g, 3, 2);
        assert_eq!(x.induced(&id), x);
        assert_eq!(x.induced(&m2).induced(&m1), x.induced(&m1.compose(&m2)));
    }
}

#[test]
fn intersection_form_nondegenerate() {
    for gg in 2..=4u32 {
        let g = Genus::new(gg);
        let basis = g.basis();
        let n = basis.len();
        let mut m = RatMatrix::zero(n, n);
        for (i, &x) in basis.iter().enumerate() {
            for (j, &y) in basis.iter().enumerate() {
                m.set(i, j, intersection(&HElem::unit(x), &HElem::unit(y)));
                // antisymmetry
                assert_eq!(
                    intersection(&HElem::unit(x), &HElem::unit(y)),
                    -intersection(&HElem::unit(y), &HElem::unit(x))
                );
            }
        }
        assert_eq!(m.rank(), n);
    }
}

#[test]
fn lie_bracket_embeds_as_commutator() {
    // the Lyndon rewriting is checked against the tensor-algebra oracle
    let mut rng = StdRng::seed_from_u64(17);
    for gg in [2u32, 3] {
        let g = Genus::new(gg);
        for _ in 0..20 {
            let d1 = rng.gen_range(1..=2usize);
            let d2 = rng.gen_range(1..=3usize);
            let x = rand_lie(&mut rng, g, d1);
            let y = rand_lie(&mut rng, g, d2);
            let z = lie_bracket(&x, &y);
            let lhs = z.embed_tensor(d1 + d2);
            let rhs = tensor_commutator(&x.embed_tensor(d1), &y.embed_tensor(d2));
            assert_eq!(lhs, rhs);
        }
    }
}

fn rand_lie(rng: &mut StdRng, g: Genus, degree: usize) -> LieElem {
    let words = lyndon_words(g, degree);
    let mut c = Lin::zero();
    for w in words {
        let n: i64 = rng.gen_range(-2..=2);
        if n != 0 && rng.gen_bool(0.5) {
            c.add_term(w, rat(n));
        }
    }
    LieElem::from_component(degree, c)
}

#[test]
fn derivation_bracket_jacobi_on_kernel_elements() {
    let g = Genus::new(2);
    let h1 = h_kernel_basis(g, 1);
    let h2 = h_kernel_basis(g, 2);
    let mut rng = StdRng::seed_from_u64(18);
    for _ in 0..10 {
        let x = &h1[rng.gen_range(0..h1.len())];
        let y = &h1[rng.gen_range(0..h1.len())];
        let z = &h2[rng.gen_range(0..h2.len())];
        // antisymmetry
        assert_eq!(
            derivation_bracket(g, x, y),
            derivation_bracket(g, y, x).scaled(&-Rat::one())
        );
        // Jacobi
        let lhs = derivation_bracket(g, x, &derivation_bracket(g, y, z));
        let rhs = derivation_bracket(g, &derivation_bracket(g, x, y), z)
            .plus(&derivation_bracket(g, y, &derivation_bracket(g, x, z)));
        assert_eq!(lhs, rhs);
        // closure: outputs stay in the bracket kernel
        assert!(derivation_bracket(g, x, z).in_h_kernel());
    }
}

#[test]
fn weyl_dim_component_sums() {
    // the component dimensions of the wedge square of the contraction
    // kernel add up to the binomial count for every supported genus
    for gg in 3..=8u32 {
        let g = Genus::new(gg);
        let labels = treelie_core::checks::wedge2_u_labels(g);
        let total: treelie_core::linalg::Int = labels.iter().map(|l| weyl_dim(g, l)).sum();
        let u = treelie_core::chillingworth::u_rank_expected(g);
        let expected = &u * (&u - treelie_core::linalg::Int::one()) / treelie_core::linalg::Int::from(2);
        assert_eq!(total, expected, "genus {}", gg);
    }
    assert_eq!(
        weyl_dim(Genus::new(3), &IrrepLabel::column(2)),
        treelie_core::linalg::int(14)
    );
}

#[test]
fn kernel_of_bracket_matches_wedge3_dimension() {
    // bracket matrix at genus 2: 24 columns map onto the 20-dimensional
    // degree-3 part, so the kernel has dimension 4
    let g = Genus::new(2);
    assert_eq!(h_kernel_basis(g, 1).len(), 4);
    // and in degree 3 -> 4 the bracket map is onto: full rank 60
    assert_eq!(treelie_core::freelie::bracket_rank(g, 2), 60);
}

#[test]
fn s_map_equivariant_on_orbit() {
    // the composite s is built from equivariant pieces, so it commutes
    // with symplectic substitutions on the wedge square
    let mut rng = StdRng::seed_from_u64(19);
    let g = Genus::new(4);
    let xi0 = treelie_core::chillingworth::xi0(g);
    for _ in 0..10 {
        let m = rand_symplectic(&mut rng, g);
        let moved = xi0.induced(&m);
        assert!(treelie_core::chillingworth::wedge2_in_u(&moved));
        let lhs = treelie_core::chillingworth::s_map(&moved);
        let rhs = treelie_core::chillingworth::s_map(&xi0).induced(&m);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn tree_bracket_antisymmetric_mod_relations() {
    use treelie_core::treediag::{canonical_trees, tree_bracket, TreeCombo};
    let g = Genus::new(2);
    let mut rng = StdRng::seed_from_u64(20);
    let deg1 = canonical_trees(g, 1);
    let deg2 = canonical_trees(g, 2);
    for _ in 0..20 {
        let t1 = TreeCombo {
            degree: 1,
            terms: Lin::unit(deg1[rng.gen_range(0..deg1.len())].clone()),
        };
        let t2 = TreeCombo {
            degree: 2,
            terms: Lin::unit(deg2[rng.gen_range(0..deg2.len())].clone()),
        };
        let fwd = tree_bracket(&t1, &t2);
        let bwd = tree_bracket(&t2, &t1);
        assert!(fwd.plus(&bwd).is_zero_mod_relations());
        // degree-equal case
        let t3 = TreeCombo {
            degree: 2,
            terms: Lin::unit(deg2[rng.gen_range(0..deg2.len())].clone()),
        };
        let fwd = tree_bracket(&t2, &t3);
        let bwd = tree_bracket(&t3, &t2);
        assert!(fwd.plus(&bwd).is_zero_mod_relations());
    }
}
