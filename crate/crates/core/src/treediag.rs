//! Labeled unitrivalent tree diagrams with cyclic vertex orders, modulo
//! multilinearity and antisymmetry, with equality over `Q` delegated to
//! the eta map into `H (x) L` (IHX is never rewritten syntactically).
//!
//! A tree is stored planted at a leaf: the root label plus a rooted planar
//! binary branch. Re-rooting walks the planar structure with no signs;
//! antisymmetry is normalized away by sorting children with a parity count.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::freelie::{lie_bracket, HomLElem, LieElem};
use crate::linalg::{Lin, Rat};
use crate::multi::{MultiElem, SpaceDescriptor};
use crate::symplectic::{BasisSymbol, Genus, HElem};

/// Rooted planar binary subtree; children are ordered (planar embedding).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Leaf(BasisSymbol),
    Node(Box<Branch>, Box<Branch>),
}

impl Branch {
    pub fn leaf(s: BasisSymbol) -> Self {
        Branch::Leaf(s)
    }

    pub fn node(l: Branch, r: Branch) -> Self {
        Branch::Node(Box::new(l), Box::new(r))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Branch::Leaf(_) => 1,
            Branch::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Iterated bracket of the leaf labels in planar order.
    pub fn bracketify(&self) -> LieElem {
        match self {
            Branch::Leaf(s) => LieElem::generator(*s),
            Branch::Node(l, r) => lie_bracket(&l.bracketify(), &r.bracketify()),
        }
    }

    /// Sort children recursively, tracking the antisymmetry sign. `None`
    /// means some node has equal children, so the tree is zero over `Q`.
    fn sorted(&self) -> Option<(i32, Branch)> {
        match self {
            Branch::Leaf(s) => Some((1, Branch::Leaf(*s))),
            Branch::Node(l, r) => {
                let (sl, l) = l.sorted()?;
                let (sr, r) = r.sorted()?;
                match l.cmp(&r) {
                    core::cmp::Ordering::Equal => None,
                    core::cmp::Ordering::Less => Some((sl * sr, Branch::node(l, r))),
                    core::cmp::Ordering::Greater => Some((-sl * sr, Branch::node(r, l))),
                }
            }
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Leaf(s) => write!(f, "{}", s),
            Branch::Node(l, r) => write!(f, "({} {})", l, r),
        }
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A tree planted at a leaf, in canonical form (minimal root label, children
/// sorted). Produced only by [`canonicalize_planted`] / [`canonicalize_edge`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonTree {
    pub root: BasisSymbol,
    pub branch: Branch,
}

impl CanonTree {
    pub fn degree(&self) -> usize {
        self.branch.leaf_count() - 1
    }

    /// All plantings (root label, branch) of the underlying tree; no signs
    /// are involved in re-rooting.
    pub fn plantings(&self) -> Vec<(BasisSymbol, Branch)> {
        let mut out = Vec::new();
        out.push((self.root, self.branch.clone()));
        gather_plantings(&self.branch, Branch::leaf(self.root), &mut out);
        out
    }
}

impl fmt::Display for CanonTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.branch {
            Branch::Leaf(_) => unreachable!("degree-0 trees are excluded"),
            Branch::Node(l, r) => write!(f, "(rooted {} {} {})", self.root, l, r),
        }
    }
}

impl fmt::Debug for CanonTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Walk the branch, recording for every leaf the rest of the tree as seen
/// from that leaf. Entering a node from child `l`, the remaining children in
/// cyclic order are `(r, context)`; entering from `r` they are `(context, l)`.
fn gather_plantings(branch: &Branch, ctx: Branch, out: &mut Vec<(BasisSymbol, Branch)>) {
    match branch {
        Branch::Leaf(s) => out.push((*s, ctx)),
        Branch::Node(l, r) => {
            gather_plantings(l, Branch::node((**r).clone(), ctx.clone()), out);
            gather_plantings(r, Branch::node(ctx, (**l).clone()), out);
        }
    }
}

/// Canonical form of a planted tree: root at a minimal-label leaf, children
/// sorted with the antisymmetry sign, ties broken by the smallest sorted
/// branch. Returns `None` when the tree is zero over `Q` (a node with equal
/// children, or the same canonical shape reachable with both signs).
pub fn canonicalize_planted(root: BasisSymbol, branch: &Branch) -> Option<(i32, CanonTree)> {
    let mut all = Vec::new();
    all.push((root, branch.clone()));
    gather_plantings(branch, Branch::leaf(root), &mut all);
    canonical_from_plantings(all)
}

/// Canonical form of the tree obtained by joining two branches with an edge.
pub fn canonicalize_edge(b1: &Branch, b2: &Branch) -> Option<(i32, CanonTree)> {
    let mut all = Vec::new();
    gather_plantings(b1, b2.clone(), &mut all);
    gather_plantings(b2, b1.clone(), &mut all);
    canonical_from_plantings(all)
}

fn canonical_from_plantings(all: Vec<(BasisSymbol, Branch)>) -> Option<(i32, CanonTree)> {
    let min_label = all.iter().map(|(s, _)| *s).min().expect("nonempty");
    let mut candidates: Vec<(Branch, i32)> = Vec::new();
    for (s, br) in all {
        if s != min_label {
            continue;
        }
        let (sign, sorted) = br.sorted()?;
        candidates.push((sorted, sign));
    }
    candidates.sort();
    // conflicting signs on the same shape force the tree to vanish over Q
    for w in candidates.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
            return None;
        }
    }
    let (branch, sign) = candidates.into_iter().next().expect("nonempty");
    Some((sign, CanonTree { root: min_label, branch }))
}

/// Rational combination of canonical trees of one degree.
#[derive(Clone, PartialEq, Eq)]
pub struct TreeCombo {
    pub degree: usize,
    pub terms: Lin<CanonTree>,
}

impl TreeCombo {
    pub fn zero(degree: usize) -> Self {
        TreeCombo { degree, terms: Lin::zero() }
    }

    pub fn is_syntactically_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add_planted(&mut self, root: BasisSymbol, branch: &Branch, coeff: Rat) {
        assert_eq!(branch.leaf_count(), self.degree + 2 - 1, "wrong leaf count for degree");
        if let Some((sign, tree)) = canonicalize_planted(root, branch) {
            self.terms.add_term(tree, coeff * Rat::from_integer(sign.into()));
        }
    }

    pub fn add_edge(&mut self, b1: &Branch, b2: &Branch, coeff: Rat) {
        if let Some((sign, tree)) = canonicalize_edge(b1, b2) {
            assert_eq!(tree.degree(), self.degree, "degree mismatch");
            self.terms.add_term(tree, coeff * Rat::from_integer(sign.into()));
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        TreeCombo { degree: self.degree, terms: self.terms.plus(&other.terms) }
    }

    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        TreeCombo { degree: self.degree, terms: self.terms.minus(&other.terms) }
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        TreeCombo { degree: self.degree, terms: self.terms.scaled(c) }
    }

    /// The eta map: sum over leaves of (label) (x) (bracket of the rest).
    pub fn eta(&self) -> HomLElem {
        let mut out = HomLElem::zero(self.degree + 1);
        for (tree, c) in self.terms.iter() {
            for (s, br) in tree.plantings() {
                out.add_tagged(s, &br.bracketify(), c);
            }
        }
        out
    }

    /// Zero test modulo AS and IHX, through eta-coordinates over `Q`.
    pub fn is_zero_mod_relations(&self) -> bool {
        self.eta().is_zero()
    }

    pub fn eq_mod_relations(&self, other: &Self) -> bool {
        self.minus(other).is_zero_mod_relations()
    }
}

impl fmt::Display for TreeCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return write!(f, "0");
        }
        let n = self.terms.len();
        if n > 1 {
            write!(f, "(+")?;
        }
        for (t, c) in self.terms.iter() {
            if n > 1 {
                write!(f, " ")?;
            }
            if c.is_one() {
                write!(f, "{}", t)?;
            } else {
                write!(f, "(* {} {})", c, t)?;
            }
        }
        if n > 1 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TreeCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Input tree with multilinear labels, prior to expansion.
#[derive(Clone)]
pub enum LabeledBranch {
    Leaf(HElem),
    Node(Box<LabeledBranch>, Box<LabeledBranch>),
}

impl LabeledBranch {
    pub fn leaf(x: HElem) -> Self {
        LabeledBranch::Leaf(x)
    }

    pub fn sym(s: BasisSymbol) -> Self {
        LabeledBranch::Leaf(HElem::unit(s))
    }

    pub fn node(l: LabeledBranch, r: LabeledBranch) -> Self {
        LabeledBranch::Node(Box::new(l), Box::new(r))
    }

    fn leaf_count(&self) -> usize {
        match self {
            LabeledBranch::Leaf(_) => 1,
            LabeledBranch::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Distribute the labels into basis symbols: a list of (coefficient,
    /// single-symbol branch) pairs.
    fn expand(&self) -> Vec<(Rat, Branch)> {
        match self {
            LabeledBranch::Leaf(x) => x
                .iter()
                .map(|(s, c)| (c.clone(), Branch::leaf(*s)))
                .collect(),
            LabeledBranch::Node(l, r) => {
                let le = l.expand();
                let re = r.expand();
                let mut out = Vec::with_capacity(le.len() * re.len());
                for (cl, bl) in &le {
                    for (cr, br) in &re {
                        out.push((cl.clone() * cr, Branch::node(bl.clone(), br.clone())));
                    }
                }
                out
            }
        }
    }
}

/// A tree with multilinear labels, planted at a labeled leaf.
#[derive(Clone)]
pub struct LabeledTree {
    pub root: HElem,
    pub branch: LabeledBranch,
}

impl LabeledTree {
    pub fn degree(&self) -> usize {
        self.branch.leaf_count() - 1
    }

    /// Multilinear expansions of the branch only (the rooted bracket reads
    /// just the subtree hanging below the root).
    pub fn branch_expansions(&self) -> Vec<(Rat, Branch)> {
        self.branch.expand()
    }

    /// Multilinear expansion into canonical basis trees.
    pub fn expand_multilinear(&self) -> TreeCombo {
        let mut out = TreeCombo::zero(self.degree());
        for (cr, root) in self
            .root
            .iter()
            .map(|(s, c)| (c.clone(), *s))
            .collect::<Vec<_>>()
        {
            for (cb, br) in self.branch.expand() {
                out.add_planted(root, &br, cr.clone() * cb);
            }
        }
        out
    }
}

/// `tripod(x, z, y)`: the degree-1 tree matching the wedge word `x ^ y ^ z`
/// under `x^y^z -> x(x)[y,z] + y(x)[z,x] + z(x)[x,y]`.
pub fn tripod(x: HElem, z: HElem, y: HElem) -> LabeledTree {
    LabeledTree {
        root: x,
        branch: LabeledBranch::node(LabeledBranch::leaf(y), LabeledBranch::leaf(z)),
    }
}

/// The degree-2 tree on four labels; with arguments `(p1, p2, p3, p4)` the
/// eta value has `p2`-term `p2 (x) [[p1,p4],p3]`.
pub fn htree(p1: HElem, p2: HElem, p3: HElem, p4: HElem) -> LabeledTree {
    LabeledTree {
        root: p2,
        branch: LabeledBranch::node(
            LabeledBranch::node(LabeledBranch::leaf(p1), LabeledBranch::leaf(p4)),
            LabeledBranch::leaf(p3),
        ),
    }
}

/// The degree-3 caterpillar on five labels; `m1` sits on the middle node and
/// the eta value has `m1`-term `m1 (x) [[m3,m2],[m4,m5]]`.
pub fn tree5(m1: HElem, m2: HElem, m3: HElem, m4: HElem, m5: HElem) -> LabeledTree {
    LabeledTree {
        root: m1,
        branch: LabeledBranch::node(
            LabeledBranch::node(LabeledBranch::leaf(m3), LabeledBranch::leaf(m2)),
            LabeledBranch::node(LabeledBranch::leaf(m4), LabeledBranch::leaf(m5)),
        ),
    }
}

pub fn tripod_syms(x: BasisSymbol, z: BasisSymbol, y: BasisSymbol) -> TreeCombo {
    tripod(HElem::unit(x), HElem::unit(z), HElem::unit(y)).expand_multilinear()
}

pub fn htree_syms(p: [BasisSymbol; 4]) -> TreeCombo {
    htree(
        HElem::unit(p[0]),
        HElem::unit(p[1]),
        HElem::unit(p[2]),
        HElem::unit(p[3]),
    )
    .expand_multilinear()
}

pub fn tree5_syms(m: [BasisSymbol; 5]) -> TreeCombo {
    tree5(
        HElem::unit(m[0]),
        HElem::unit(m[1]),
        HElem::unit(m[2]),
        HElem::unit(m[3]),
        HElem::unit(m[4]),
    )
    .expand_multilinear()
}

/// The gluing bracket: sum over leaf pairs, weighted by the intersection
/// pairing of the two leaf labels, of the tree glued along those leaves.
pub fn tree_bracket(p: &TreeCombo, q: &TreeCombo) -> TreeCombo {
    let mut out = TreeCombo::zero(p.degree + q.degree);
    for (tp, cp) in p.terms.iter() {
        for (tq, cq) in q.terms.iter() {
            let c = cp * cq;
            for (sv, bv) in tp.plantings() {
                for (sw, bw) in tq.plantings() {
                    let w = sv.pairing(sw);
                    if w != 0 {
                        out.add_edge(&bv, &bw, c.clone() * Rat::from_integer(w.into()));
                    }
                }
            }
        }
    }
    out
}

/// The wedge-word to tripod correspondence in degree 1: each basis word
/// `x ^ y ^ z` of a single-factor wedge-3 element becomes the matching
/// tripod.
pub fn wedge3_to_trees(x: &MultiElem) -> TreeCombo {
    assert_eq!(
        x.space.factors(),
        &[(crate::multi::PowKind::Wedge, 3)],
        "expected a wedge^3 element"
    );
    let mut out = TreeCombo::zero(1);
    for (word, c) in x.terms.iter() {
        let w = &word[0];
        // tripod(x, z, y) corresponds to x ^ y ^ z
        let t = tripod_syms(w[0], w[2], w[1]);
        out = out.plus(&t.scaled(c));
    }
    out
}

/// Read the four corner labels `(p1, p2, p3, p4)` of a degree-2 tree from a
/// planted form.
fn htree_corners(tree: &CanonTree) -> [BasisSymbol; 4] {
    let r = tree.root;
    match &tree.branch {
        Branch::Node(l, rr) => match (&**l, &**rr) {
            (Branch::Node(x, y), Branch::Leaf(z)) => {
                if let (Branch::Leaf(x), Branch::Leaf(y)) = (&**x, &**y) {
                    return [*x, r, *z, *y];
                }
                unreachable!("degree-2 shape")
            }
            (Branch::Leaf(z), Branch::Node(x, y)) => {
                if let (Branch::Leaf(x), Branch::Leaf(y)) = (&**x, &**y) {
                    return [*x, *z, r, *y];
                }
                unreachable!("degree-2 shape")
            }
            _ => unreachable!("degree-2 shape"),
        },
        _ => unreachable!("degree-2 shape"),
    }
}

/// Morita-style pairing map on degree-2 trees, in the leaf convention fixed
/// by the htree constructor.
pub fn q_map(x: &TreeCombo, genus: Genus) -> MultiElem {
    assert_eq!(x.degree, 2, "q is defined on degree-2 trees");
    let mut out = MultiElem::zero(genus, SpaceDescriptor::wedge(2));
    for (tree, c) in x.terms.iter() {
        let [p1, p2, p3, p4] = htree_corners(tree);
        let pair = |u: BasisSymbol, v: BasisSymbol| Rat::from_integer(u.pairing(v).into());
        let terms = [
            (4, pair(p3, p2), p1, p4),
            (4, pair(p1, p4), p3, p2),
            (2, pair(p4, p3), p2, p1),
            (2, pair(p2, p1), p4, p3),
            (2, pair(p3, p1), p2, p4),
            (2, pair(p4, p2), p1, p3),
        ];
        for (factor, coeff, u, v) in terms {
            if !coeff.is_zero() {
                out.add_word(
                    alloc::vec![alloc::vec![u, v]],
                    coeff * Rat::from_integer(factor.into()) * c,
                );
            }
        }
    }
    out
}

/// Morita trace on degree-3 trees, computed as the trace of the associated
/// derivation: contract the H-tag of eta against the first tensor slot of
/// the Lie part and symmetrize the remaining three.
pub fn tr3_oracle(x: &TreeCombo, genus: Genus) -> MultiElem {
    assert_eq!(x.degree, 3, "the trace is defined on degree-3 trees");
    let mut out = MultiElem::zero(genus, SpaceDescriptor::sym(3));
    let eta = x.eta();
    for ((tag, w), c) in eta.terms.iter() {
        for (tw, c2) in crate::freelie::embed_bracketing(w).iter() {
            let p = tag.pairing(tw[0]);
            if p != 0 {
                out.add_word(
                    alloc::vec![alloc::vec![tw[1], tw[2], tw[3]]],
                    c * c2 * Rat::from_integer(p.into()),
                );
            }
        }
    }
    out
}

/// A closed four-term formula for the trace, applied per caterpillar
/// generator in the tree5 argument convention. Kept separately from the
/// derivation-trace computation so the two routes can be compared.
pub fn tr3_literal(x: &TreeCombo, genus: Genus) -> MultiElem {
    assert_eq!(x.degree, 3, "the trace is defined on degree-3 trees");
    let mut out = MultiElem::zero(genus, SpaceDescriptor::sym(3));
    for (tree, c) in x.terms.iter() {
        let m = tree5_corners(tree);
        let pair = |u: BasisSymbol, v: BasisSymbol| Rat::from_integer(u.pairing(v).into());
        // the four contraction terms, in constructor-argument positions
        let terms = [
            (pair(m[3], m[2]), m[1], m[0], m[4]),
            (pair(m[2], m[4]), m[3], m[0], m[1]),
            (pair(m[4], m[1]), m[2], m[0], m[3]),
            (pair(m[1], m[3]), m[1], m[0], m[2]),
        ];
        for (coeff, u, v, w) in terms {
            if !coeff.is_zero() {
                out.add_word(
                    alloc::vec![alloc::vec![u, v, w]],
                    coeff * Rat::from_integer(2.into()) * c,
                );
            }
        }
    }
    out
}

/// Recover the tree5 constructor arguments from a canonical degree-3 tree by
/// re-rooting at the (unique) middle leaf.
fn tree5_corners(tree: &CanonTree) -> [BasisSymbol; 5] {
    for (s, br) in tree.plantings() {
        if let Branch::Node(l, r) = &br {
            if let (Branch::Node(x, y), Branch::Node(u, v)) = (&**l, &**r) {
                if let (Branch::Leaf(x), Branch::Leaf(y), Branch::Leaf(u), Branch::Leaf(v)) =
                    (&**x, &**y, &**u, &**v)
                {
                    return [s, *y, *x, *u, *v];
                }
            }
        }
    }
    unreachable!("degree-3 tree has a middle leaf")
}

/// A local IHX instance: four branches attached around an internal edge,
/// summed in the three pairings with the signs that make eta vanish.
pub fn ihx_combo(x: &Branch, y: &Branch, z: &Branch, w: &Branch) -> TreeCombo {
    let degree = x.leaf_count() + y.leaf_count() + z.leaf_count() + w.leaf_count() - 2;
    let mut out = TreeCombo::zero(degree);
    let t = |p: &Branch, q: &Branch, r: &Branch, s: &Branch, sign: i64, out: &mut TreeCombo| {
        out.add_edge(
            &Branch::node(p.clone(), q.clone()),
            &Branch::node(r.clone(), s.clone()),
            Rat::from_integer(sign.into()),
        );
    };
    t(w, x, y, z, 1, &mut out);
    t(x, y, w, z, 1, &mut out);
    t(z, x, y, w, -1, &mut out);
    out
}

/// Graded element of the completed tree algebra, truncated above
/// `max_degree` (exclusive).
#[derive(Clone, PartialEq, Eq)]
pub struct GradedTreeElem {
    parts: BTreeMap<usize, TreeCombo>,
    pub max_degree: usize,
}

impl GradedTreeElem {
    pub fn zero(max_degree: usize) -> Self {
        GradedTreeElem { parts: BTreeMap::new(), max_degree }
    }

    pub fn from_parts(max_degree: usize, parts: &[TreeCombo]) -> Self {
        let mut out = Self::zero(max_degree);
        for p in parts {
            out.add_combo(p);
        }
        out
    }

    pub fn add_combo(&mut self, combo: &TreeCombo) {
        assert!(combo.degree >= 1, "degree-0 parts are excluded");
        if combo.degree >= self.max_degree || combo.is_syntactically_zero() {
            return;
        }
        let entry = self
            .parts
            .entry(combo.degree)
            .or_insert_with(|| TreeCombo::zero(combo.degree));
        *entry = entry.plus(combo);
        if entry.is_syntactically_zero() {
            self.parts.remove(&combo.degree);
        }
    }

    pub fn part(&self, degree: usize) -> TreeCombo {
        self.parts
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| TreeCombo::zero(degree))
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.parts.keys().copied()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for c in other.parts.values() {
            out.add_combo(c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-Rat::one())
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.max_degree);
        for combo in self.parts.values() {
            out.add_combo(&combo.scaled(c));
        }
        out
    }

    /// Degree-truncated gluing bracket.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.max_degree.min(other.max_degree));
        for (da, ca) in self.parts.iter() {
            for (db, cb) in other.parts.iter() {
                if da + db >= out.max_degree {
                    continue;
                }
                out.add_combo(&tree_bracket(ca, cb));
            }
        }
        out
    }

    /// Equality modulo AS and IHX, degree by degree.
    pub fn eq_mod_relations(&self, other: &Self) -> bool {
        let mut degs: Vec<usize> = self.degrees().chain(other.degrees()).collect();
        degs.sort_unstable();
        degs.dedup();
        degs.into_iter()
            .all(|d| self.part(d).eq_mod_relations(&other.part(d)))
    }

    pub fn is_zero_mod_relations(&self) -> bool {
        self.parts.values().all(|c| c.is_zero_mod_relations())
    }
}

impl fmt::Display for GradedTreeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let n = self.parts.len();
        if n > 1 {
            write!(f, "(+")?;
        }
        for (i, c) in self.parts.values().enumerate() {
            if n > 1 || i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", c)?;
        }
        if n > 1 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Baker-Campbell-Hausdorff product truncated by tree degree. Series terms
/// through total weight four are included, which is exact for any
/// `max_degree <= 5` on inputs with parts of degree at least one.
pub fn bch_truncated(x: &GradedTreeElem, y: &GradedTreeElem, max_degree: usize) -> GradedTreeElem {
    assert!(
        (2..=5).contains(&max_degree),
        "truncation bound exceeded (supported: keep degrees below 5)"
    );
    let clip = |e: &GradedTreeElem| -> GradedTreeElem {
        let mut out = GradedTreeElem::zero(max_degree);
        for c in e.parts.values() {
            out.add_combo(c);
        }
        out
    };
    let x = clip(x);
    let y = clip(y);
    let xy = x.bracket(&y);
    let xxy = x.bracket(&xy);
    let yxy = y.bracket(&xy);
    let yxxy = y.bracket(&xxy);
    let mut out = x.plus(&y);
    out = out.plus(&xy.scaled(&crate::linalg::ratio(1, 2)));
    out = out.plus(&xxy.scaled(&crate::linalg::ratio(1, 12)));
    out = out.plus(&yxy.scaled(&crate::linalg::ratio(-1, 12)));
    out = out.plus(&yxxy.scaled(&crate::linalg::ratio(-1, 24)));
    out
}

/// Group inverse for the truncated BCH product.
pub fn bch_inverse(x: &GradedTreeElem) -> GradedTreeElem {
    x.neg()
}

/// Check that conjugation in the truncated BCH group reduces to
/// `h + [f_1, h_2]` modulo degree `max_degree`, for `f` with parts in
/// degrees 1..3 and `h` with no degree-1 part.
pub fn conjugation_identity_check(
    f: &GradedTreeElem,
    h: &GradedTreeElem,
    max_degree: usize,
) -> bool {
    assert!(
        h.part(1).is_syntactically_zero(),
        "h must have no degree-1 part"
    );
    let lhs = bch_truncated(&bch_truncated(f, h, max_degree), &bch_inverse(f), max_degree);
    let correction = tree_bracket(&f.part(1), &h.part(2));
    let mut rhs = h.clone();
    rhs.add_combo(&correction);
    lhs.eq_mod_relations(&rhs)
}

/// All distinct nonzero canonical trees of the given degree (1, 2 or 3)
/// with labels in the given genus.
pub fn canonical_trees(g: Genus, degree: usize) -> Vec<CanonTree> {
    let symbols = g.basis();
    let mut seen: BTreeMap<CanonTree, ()> = BTreeMap::new();
    let emit = |combo: TreeCombo, seen: &mut BTreeMap<CanonTree, ()>| {
        for (t, _) in combo.terms.iter() {
            seen.entry(t.clone()).or_insert(());
        }
    };
    match degree {
        1 => {
            for &x in &symbols {
                for &y in &symbols {
                    for &z in &symbols {
                        emit(tripod_syms(x, y, z), &mut seen);
                    }
                }
            }
        }
        2 => {
            for &x in &symbols {
                for &y in &symbols {
                    for &z in &symbols {
                        for &w in &symbols {
                            emit(htree_syms([x, y, z, w]), &mut seen);
                        }
                    }
                }
            }
        }
        3 => {
            for &x in &symbols {
                for &y in &symbols {
                    for &z in &symbols {
                        for &w in &symbols {
                            for &v in &symbols {
                                emit(tree5_syms([x, y, z, w, v]), &mut seen);
                            }
                        }
                    }
                }
            }
        }
        _ => panic!("canonical tree enumeration supports degrees 1..=3"),
    }
    seen.into_keys().collect()
}

/// Tensor-coordinate form of eta, embedded into `tensor^(d+2) H` with the
/// tag first; this is the domain of the arity-5 partial contraction.
pub fn eta_tensor(x: &TreeCombo, genus: Genus) -> MultiElem {
    x.eta().embed_multi(genus)
}

/// Eta of a single planted tree, without canonicalizing first. Used to
/// check that eta respects the antisymmetry normalization.
pub fn eta_planted(root: BasisSymbol, branch: &Branch) -> HomLElem {
    let mut out = HomLElem::zero(branch.leaf_count());
    out.add_tagged(root, &branch.bracketify(), &Rat::one());
    let mut plants = Vec::new();
    gather_plantings(branch, Branch::leaf(root), &mut plants);
    for (s, br) in plants {
        out.add_tagged(s, &br.bracketify(), &Rat::one());
    }
    out
}
