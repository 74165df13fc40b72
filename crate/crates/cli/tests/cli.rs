//! Parser round-trips, golden evaluations through the library surface, and
//! binary-level exit-code checks.

use std::process::Command;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use treelie_cli::eval::{eval_op, to_multi, Tr3Variant};
use treelie_cli::parser::{parse, print_expr, Expr};
use treelie_core::symplectic::{BasisSymbol, Genus};

fn rand_symbol(rng: &mut StdRng, g: u32) -> Expr {
    let n = 2 * g;
    let k = rng.gen_range(0..n);
    Expr::Sym(if k < g {
        BasisSymbol::a(k + 1)
    } else {
        BasisSymbol::b(k - g + 1)
    })
}

fn rand_coeff(rng: &mut StdRng) -> treelie_core::linalg::Rat {
    let n = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=9);
    let c = treelie_core::linalg::ratio(if n == 0 { 2 } else { n }, d);
    if c == treelie_core::linalg::rat(1) {
        treelie_core::linalg::rat(2)
    } else {
        c
    }
}

/// Random expression in printer-normal form (so printing is injective on
/// this set and round-trips exactly).
fn rand_normalized_expr(rng: &mut StdRng, depth: usize) -> Expr {
    let g = 4;
    let word = |rng: &mut StdRng, n: usize| -> Vec<Expr> {
        (0..n).map(|_| rand_symbol(rng, g)).collect()
    };
    let leaf = |rng: &mut StdRng| -> Expr {
        match rng.gen_range(0..5) {
            0 => {
                let n = rng.gen_range(1..=4);
                Expr::Wedge(word(rng, n))
            }
            1 => {
                let n = rng.gen_range(1..=5);
                Expr::Tensor(word(rng, n))
            }
            2 => Expr::SymPow(word(rng, 3)),
            3 => {
                let w = word(rng, 3);
                Expr::Tripod(Box::new([w[0].clone(), w[1].clone(), w[2].clone()]))
            }
            _ => {
                let w = word(rng, 4);
                Expr::Htree(Box::new([
                    w[0].clone(),
                    w[1].clone(),
                    w[2].clone(),
                    w[3].clone(),
                ]))
            }
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..3) {
        0 => {
            let args: Vec<Expr> = (0..rng.gen_range(2..=4))
                .map(|_| {
                    let inner = rand_normalized_expr(rng, 0);
                    if rng.gen_bool(0.5) {
                        Expr::Mul(rand_coeff(rng), Box::new(inner))
                    } else {
                        inner
                    }
                })
                .collect();
            Expr::Add(args)
        }
        1 => Expr::Mul(rand_coeff(rng), Box::new(rand_normalized_expr(rng, 0))),
        _ => leaf(rng),
    }
}

#[test]
fn parser_round_trip_property() {
    let mut rng = StdRng::seed_from_u64(21);
    for case in 0..150 {
        let e = rand_normalized_expr(&mut rng, 1);
        let printed = print_expr(&e);
        let reparsed = parse(&printed).unwrap_or_else(|err| {
            panic!("case {}: failed to reparse '{}': {}", case, printed, err)
        });
        assert_eq!(reparsed, e, "case {} on '{}'", case, printed);
        // printing again is byte-identical
        assert_eq!(print_expr(&reparsed), printed);
    }
}

#[test]
fn element_print_parse_round_trip() {
    // printed normalized elements parse back to equal elements
    let mut rng = StdRng::seed_from_u64(22);
    let g = Genus::new(4);
    for _ in 0..100 {
        let mut x = treelie_core::multi::MultiElem::zero(
            g,
            treelie_core::multi::SpaceDescriptor::wedge(3),
        );
        for _ in 0..3 {
            let w: Vec<BasisSymbol> = (0..3)
                .map(|_| match rand_symbol(&mut rng, 4) {
                    Expr::Sym(s) => s,
                    _ => unreachable!(),
                })
                .collect();
            x.add_word(vec![w], rand_coeff(&mut rng));
        }
        if x.is_zero() {
            continue;
        }
        let printed = format!("{}", x);
        let back = to_multi(&parse(&printed).expect("parses"), g).expect("elaborates");
        assert_eq!(back, x, "round trip of '{}'", printed);
    }
}

#[test]
fn golden_evaluations() {
    let g3 = Genus::new(3);
    let g6 = Genus::new(6);
    let ev = |op: &str, src: &str, g: Genus| -> String {
        eval_op(op, &[parse(src).unwrap()], g, 4, Tr3Variant::Oracle).unwrap()
    };
    assert_eq!(ev("C3", "(wedge a1 b1 b4)", g6), "(wedge b4)");
    assert_eq!(
        ev("C3", "(+ (wedge a1 b1 b4) (* -1 (wedge a3 b3 b4)))", g6),
        "0"
    );
    assert_eq!(ev("q", "(htree a1 a2 a3 b3)", g3), "(* 2 (wedge a1 a2))");
    assert_eq!(
        ev(
            "tr3",
            "(+ (tree5 a1 a1 b1 a2 a1) (* -1 (tree5 a1 a2 a3 b3 a1)))",
            g3
        ),
        "0"
    );
    let xi0 = "(+ (wedge (wedge a1 a3 b3) (wedge a2 a3 b3)) \
               (* -1 (wedge (wedge a1 a3 b3) (wedge a2 a4 b4))) \
               (* -1 (wedge (wedge a1 a4 b4) (wedge a2 a3 b3))) \
               (wedge (wedge a1 a4 b4) (wedge a2 a4 b4)))";
    assert_eq!(ev("s", xi0, Genus::new(4)), "(* 8 (wedge a1 a2))");
    assert_eq!(ev("brack", "(rooted a1 a2 (b1 b2))", g3), "(lyndon a2 b1 b2)");
    // arity and range errors
    assert!(eval_op("C3", &[parse("(wedge a1 b1)").unwrap()], g3, 4, Tr3Variant::Oracle).is_err());
    assert!(parse("(wedge a9 b1)").is_ok());
    assert!(to_multi(&parse("(wedge a9 b1)").unwrap(), g6).is_err());
}

#[test]
fn tree_bracket_and_bch_through_eval() {
    let g = Genus::new(3);
    let parse1 = |s: &str| parse(s).unwrap();
    let out = eval_op(
        "tree-bracket",
        &[
            parse1("(tripod a1 a2 a3)"),
            parse1("(htree a1 b1 a1 b3)"),
        ],
        g,
        4,
        Tr3Variant::Oracle,
    )
    .unwrap();
    // evaluates to the difference of two degree-3 caterpillars
    let back = treelie_cli::eval::to_tree_combo(&parse(&out).unwrap(), g).unwrap();
    let expected = treelie_core::chillingworth::xi1_display();
    assert!(back.eq_mod_relations(&expected));

    let bch = eval_op(
        "bch",
        &[parse1("(tripod a1 a2 b1)"), parse1("(tripod a2 b2 b1)")],
        Genus::new(2),
        4,
        Tr3Variant::Oracle,
    )
    .unwrap();
    assert!(bch.contains("rooted"));
}

#[test]
fn binary_exit_codes_and_json() {
    let exe = env!("CARGO_BIN_EXE_treelie");
    // all-pass verify exits 0
    let out = Command::new(exe)
        .args(["verify", "--genus", "3", "--check", "torelli-quotient-snf,euler-order"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    // bad genus exits 2
    let out = Command::new(exe)
        .args(["verify", "--genus", "9"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    // unknown check exits 2
    let out = Command::new(exe)
        .args(["verify", "--genus", "6", "--check", "nope"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    // parse errors exit 2
    let out = Command::new(exe)
        .args(["eval", "--genus", "3", "C3", "(wedge a1"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    // json schema contains the stable fields, one object per check
    let out = Command::new(exe)
        .args([
            "verify", "--genus", "3", "--check", "euler-order,cycle-16", "--format", "json",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for field in ["\"name\"", "\"genus\"", "\"status\"", "\"expected\"", "\"actual\"", "\"runtime_ms\""] {
        assert!(text.contains(field), "missing {} in {}", field, text);
    }
    assert!(text.contains("\"status\": \"warn\""), "cycle-16 warns at genus 3");
    assert!(text.contains("\"status\": \"pass\""));
    // text and json agree on statuses
    let out2 = Command::new(exe)
        .args(["verify", "--genus", "3", "--check", "euler-order,cycle-16"])
        .output()
        .expect("binary runs");
    let text2 = String::from_utf8(out2.stdout).unwrap();
    assert!(text2.contains("WARN cycle-16"));
    assert!(text2.contains("PASS euler-order"));
}
