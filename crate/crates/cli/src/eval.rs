//! Typed elaboration of parsed expressions and the `eval` operations.

use thiserror::Error;

use treelie_core::chillingworth;
use treelie_core::freelie::LieElem;
use treelie_core::linalg::Rat;
use treelie_core::multi::{MultiElem, PowKind, SpaceDescriptor, Wedge2Elem};
use treelie_core::symplectic::{BasisSymbol, Genus, HElem};
use treelie_core::treediag::{
    bch_truncated, htree, q_map, tr3_literal, tr3_oracle, tree5, tree_bracket, tripod,
    GradedTreeElem, LabeledBranch, LabeledTree, TreeCombo,
};

use crate::parser::{Expr, Sub};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("symbol {0} out of range for genus {1}")]
    SymbolRange(BasisSymbol, u32),
    #[error("expected {0}")]
    Expected(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("unknown operation '{0}'")]
    UnknownOp(String),
    #[error("operation '{0}' takes {1} operand(s), got {2}")]
    OperandCount(String, usize, usize),
    #[error("{0}")]
    Other(String),
}

type Result<T> = core::result::Result<T, EvalError>;

fn check_symbol(s: BasisSymbol, g: Genus) -> Result<BasisSymbol> {
    if s.in_genus(g) {
        Ok(s)
    } else {
        Err(EvalError::SymbolRange(s, g.get()))
    }
}

/// Elaborate an expression as an element of `H`.
pub fn to_h(e: &Expr, g: Genus) -> Result<HElem> {
    match e {
        Expr::Sym(s) => Ok(HElem::unit(check_symbol(*s, g)?)),
        Expr::Num(n) if n == &Rat::from_integer(0.into()) => Ok(HElem::zero()),
        Expr::Add(args) => {
            let mut out = HElem::zero();
            for a in args {
                out.add_assign(&to_h(a, g)?);
            }
            Ok(out)
        }
        Expr::Mul(c, inner) => Ok(to_h(inner, g)?.scaled(c)),
        _ => Err(EvalError::Expected("an element of H".into())),
    }
}

fn factor_word(e: &Expr, g: Genus) -> Result<(PowKind, Vec<BasisSymbol>)> {
    let (kind, args) = match e {
        Expr::Wedge(args) => (PowKind::Wedge, args),
        Expr::Tensor(args) => (PowKind::Tensor, args),
        Expr::SymPow(args) => (PowKind::Sym, args),
        _ => return Err(EvalError::Expected("a wedge/tensor/sym word".into())),
    };
    let mut word = Vec::with_capacity(args.len());
    for a in args {
        match a {
            Expr::Sym(s) => word.push(check_symbol(*s, g)?),
            _ => return Err(EvalError::Expected("basis symbols inside a word".into())),
        }
    }
    Ok((kind, word))
}

/// Elaborate an expression as a composite-space element. The space is
/// inferred from the first term and all terms must agree.
pub fn to_multi(e: &Expr, g: Genus) -> Result<MultiElem> {
    match e {
        Expr::Num(n) if n == &Rat::from_integer(0.into()) => {
            Err(EvalError::Expected("a typed element; a bare 0 has no space".into()))
        }
        Expr::Add(args) => {
            let mut out: Option<MultiElem> = None;
            for a in args {
                let v = to_multi(a, g)?;
                out = Some(match out {
                    None => v,
                    Some(acc) => {
                        if acc.space != v.space {
                            return Err(EvalError::Arity(
                                "summands live in different spaces".into(),
                            ));
                        }
                        acc.plus(&v)
                    }
                });
            }
            out.ok_or_else(|| EvalError::Expected("at least one summand".into()))
        }
        Expr::Mul(c, inner) => Ok(to_multi(inner, g)?.scaled(c)),
        Expr::Tensor(args) if args.iter().all(|a| !matches!(a, Expr::Sym(_))) && !args.is_empty() => {
            // product of factor words
            let mut kinds = Vec::new();
            let mut word = Vec::new();
            for a in args {
                let (kind, w) = factor_word(a, g)?;
                kinds.push((kind, w.len()));
                word.push(w);
            }
            let mut out = MultiElem::zero(g, SpaceDescriptor(kinds));
            out.add_word(word, Rat::from_integer(1.into()));
            Ok(out)
        }
        Expr::Wedge(_) | Expr::Tensor(_) | Expr::SymPow(_) => {
            let (kind, w) = factor_word(e, g)?;
            let arity = w.len();
            let mut out = MultiElem::zero(g, SpaceDescriptor(vec![(kind, arity)]));
            out.add_word(vec![w], Rat::from_integer(1.into()));
            Ok(out)
        }
        _ => Err(EvalError::Expected("a multilinear element".into())),
    }
}

/// Elaborate as an element of the outer wedge square of `wedge^3 H`.
pub fn to_w2(e: &Expr, g: Genus) -> Result<Wedge2Elem> {
    match e {
        Expr::Add(args) => {
            let mut out: Option<Wedge2Elem> = None;
            for a in args {
                let v = to_w2(a, g)?;
                out = Some(match out {
                    None => v,
                    Some(acc) => acc.plus(&v),
                });
            }
            out.ok_or_else(|| EvalError::Expected("at least one summand".into()))
        }
        Expr::Mul(c, inner) => Ok(to_w2(inner, g)?.scaled(c)),
        Expr::Wedge(args) if args.len() == 2 => {
            let x = to_multi(&args[0], g)?;
            let y = to_multi(&args[1], g)?;
            let ok = |m: &MultiElem| m.space.factors() == [(PowKind::Wedge, 3)];
            if !ok(&x) || !ok(&y) {
                return Err(EvalError::Expected(
                    "two wedge-3 factors inside the outer wedge".into(),
                ));
            }
            Ok(Wedge2Elem::wedge_of(&x, &y))
        }
        _ => Err(EvalError::Expected(
            "(wedge (wedge ...) (wedge ...)) or a sum of those".into(),
        )),
    }
}

fn sub_to_branch(s: &Sub, g: Genus) -> Result<LabeledBranch> {
    match s {
        Sub::Leaf(sym) => Ok(LabeledBranch::sym(check_symbol(*sym, g)?)),
        Sub::Pair(a, b) => Ok(LabeledBranch::node(
            sub_to_branch(a, g)?,
            sub_to_branch(b, g)?,
        )),
    }
}

/// Elaborate a single tree form (before canonicalization).
pub fn to_labeled_tree(e: &Expr, g: Genus) -> Result<LabeledTree> {
    match e {
        Expr::Tripod(args) => Ok(tripod(
            to_h(&args[0], g)?,
            to_h(&args[1], g)?,
            to_h(&args[2], g)?,
        )),
        Expr::Htree(args) => Ok(htree(
            to_h(&args[0], g)?,
            to_h(&args[1], g)?,
            to_h(&args[2], g)?,
            to_h(&args[3], g)?,
        )),
        Expr::Tree5(args) => Ok(tree5(
            to_h(&args[0], g)?,
            to_h(&args[1], g)?,
            to_h(&args[2], g)?,
            to_h(&args[3], g)?,
            to_h(&args[4], g)?,
        )),
        Expr::Rooted(label, s1, s2) => Ok(LabeledTree {
            root: to_h(label, g)?,
            branch: LabeledBranch::node(sub_to_branch(s1, g)?, sub_to_branch(s2, g)?),
        }),
        _ => Err(EvalError::Expected("a tree form".into())),
    }
}

/// Elaborate as a homogeneous tree combination.
pub fn to_tree_combo(e: &Expr, g: Genus) -> Result<TreeCombo> {
    match e {
        Expr::Add(args) => {
            let mut out: Option<TreeCombo> = None;
            for a in args {
                let v = to_tree_combo(a, g)?;
                out = Some(match out {
                    None => v,
                    Some(acc) => {
                        if acc.degree != v.degree {
                            return Err(EvalError::Arity(
                                "tree summands of different degrees (use bch operands instead)"
                                    .into(),
                            ));
                        }
                        acc.plus(&v)
                    }
                });
            }
            out.ok_or_else(|| EvalError::Expected("at least one summand".into()))
        }
        Expr::Mul(c, inner) => Ok(to_tree_combo(inner, g)?.scaled(c)),
        _ => Ok(to_labeled_tree(e, g)?.expand_multilinear()),
    }
}

/// Elaborate as a graded tree element (degrees may mix across summands).
pub fn to_graded(e: &Expr, g: Genus, max_degree: usize) -> Result<GradedTreeElem> {
    let mut out = GradedTreeElem::zero(max_degree);
    collect_graded(e, g, &Rat::from_integer(1.into()), &mut out)?;
    Ok(out)
}

fn collect_graded(e: &Expr, g: Genus, scale: &Rat, out: &mut GradedTreeElem) -> Result<()> {
    match e {
        Expr::Add(args) => {
            for a in args {
                collect_graded(a, g, scale, out)?;
            }
            Ok(())
        }
        Expr::Mul(c, inner) => collect_graded(inner, g, &(scale * c), out),
        _ => {
            let combo = to_labeled_tree(e, g)?.expand_multilinear().scaled(scale);
            out.add_combo(&combo);
            Ok(())
        }
    }
}

fn expect_wedge_arity(x: &MultiElem, k: usize, op: &str) -> Result<()> {
    if x.space.factors() == [(PowKind::Wedge, k)] {
        Ok(())
    } else {
        Err(EvalError::Arity(format!("{} expects a wedge-{} element", op, k)))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Tr3Variant {
    Oracle,
    Literal,
}

/// Evaluate one named operation on parsed operands; returns the printed
/// normalized result.
pub fn eval_op(
    op: &str,
    operands: &[Expr],
    g: Genus,
    max_degree: usize,
    tr3_variant: Tr3Variant,
) -> Result<String> {
    let need = |n: usize| -> Result<()> {
        if operands.len() == n {
            Ok(())
        } else {
            Err(EvalError::OperandCount(op.into(), n, operands.len()))
        }
    };
    match op {
        "C3" | "C4" | "C6" => {
            need(1)?;
            let k = match op {
                "C3" => 3,
                "C4" => 4,
                _ => 6,
            };
            let x = to_multi(&operands[0], g)?;
            expect_wedge_arity(&x, k, op)?;
            Ok(format!("{}", x.contraction(k)))
        }
        "eta" => {
            need(1)?;
            let t = to_tree_combo(&operands[0], g)?;
            Ok(format!("{}", t.eta()))
        }
        "q" => {
            need(1)?;
            let t = to_tree_combo(&operands[0], g)?;
            if t.degree != 2 {
                return Err(EvalError::Arity("q expects degree-2 trees".into()));
            }
            Ok(format!("{}", q_map(&t, g)))
        }
        "tr3" => {
            need(1)?;
            let t = to_tree_combo(&operands[0], g)?;
            if t.degree != 3 {
                return Err(EvalError::Arity("tr3 expects degree-3 trees".into()));
            }
            let v = match tr3_variant {
                Tr3Variant::Oracle => tr3_oracle(&t, g),
                Tr3Variant::Literal => tr3_literal(&t, g),
            };
            Ok(format!("{}", v))
        }
        "s" => {
            need(1)?;
            let x = to_w2(&operands[0], g)?;
            if !chillingworth::wedge2_in_u(&x) {
                return Err(EvalError::Other(
                    "s is only defined on the wedge square of the contraction kernel".into(),
                ));
            }
            Ok(format!("{}", chillingworth::s_map(&x)))
        }
        "brack" => {
            need(1)?;
            let t = to_labeled_tree(&operands[0], g)?;
            let mut out = LieElem::zero();
            for (c, branch) in t.branch_expansions() {
                out.add_assign(&branch.bracketify().scaled(&c));
            }
            Ok(print_lie(&out))
        }
        "tree-bracket" => {
            need(2)?;
            let x = to_tree_combo(&operands[0], g)?;
            let y = to_tree_combo(&operands[1], g)?;
            Ok(format!("{}", tree_bracket(&x, &y)))
        }
        "bch" => {
            need(2)?;
            let x = to_graded(&operands[0], g, max_degree)?;
            let y = to_graded(&operands[1], g, max_degree)?;
            Ok(format!("{}", bch_truncated(&x, &y, max_degree)))
        }
        other => Err(EvalError::UnknownOp(other.into())),
    }
}

fn print_lie(x: &LieElem) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut pieces = Vec::new();
    for d in x.degrees().collect::<Vec<_>>() {
        for (w, c) in x.component(d).iter() {
            if c == &Rat::from_integer(1.into()) {
                pieces.push(format!("{}", w));
            } else {
                pieces.push(format!("(* {} {})", c, w));
            }
        }
    }
    if pieces.len() == 1 {
        pieces.pop().unwrap()
    } else {
        format!("(+ {})", pieces.join(" "))
    }
}
