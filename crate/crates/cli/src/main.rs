use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use treelie_cli::eval::{eval_op, Tr3Variant};
use treelie_cli::parser::parse;
use treelie_cli::report::{render_json, render_text, run_selected};
use treelie_core::checks::CheckStatus;
use treelie_core::freelie::{h_kernel_basis, lyndon_words};
use treelie_core::linalg::RankAccumulator;
use treelie_core::rep::{weyl_dim, IrrepLabel};
use treelie_core::symplectic::Genus;
use treelie_core::treediag::{canonical_trees, TreeCombo};
use treelie_core::{chillingworth, linalg};

/// Exact-arithmetic toolkit for symplectic tree and Lie calculus.
#[derive(Parser)]
#[command(name = "treelie", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run named verification checks and print a report.
    Verify {
        #[arg(long, default_value_t = 6)]
        genus: u32,
        /// Check name or "all"; may be repeated or comma-separated.
        #[arg(long, default_value = "all")]
        check: Vec<String>,
        #[arg(long, default_value = "text")]
        format: String,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Evaluate one operation on element expressions.
    Eval {
        #[arg(long, default_value_t = 3)]
        genus: u32,
        /// Operation: C3, C4, C6, eta, q, tr3, s, brack, tree-bracket, bch.
        op: String,
        /// Operand expressions (positional).
        exprs: Vec<String>,
        /// Read one operand from a file, or "-" for stdin.
        #[arg(long)]
        expr: Option<String>,
        /// Degree truncation for bch (exclusive bound).
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Trace variant for tr3: "oracle" (derivation trace) or "literal"
        /// (closed four-term formula).
        #[arg(long, default_value = "oracle")]
        variant: String,
    },
    /// Print the dimension of the irreducible representation with the given
    /// label, e.g. "1,1,1".
    Dims {
        #[arg(long, default_value_t = 6)]
        genus: u32,
        label: String,
    },
    /// Enumerate a basis: U, L:d, T:d, or h:d (d a degree).
    Basis {
        #[arg(long, default_value_t = 3)]
        genus: u32,
        space: String,
    },
    /// List the available check names.
    Checks,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

/// Write to stdout, treating a closed pipe as a normal early exit.
fn emit(text: &str) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let _ = stdout.lock().write_all(text.as_bytes());
}

fn genus_arg(g: u32, max: u32) -> Result<Genus, String> {
    if (2..=max).contains(&g) {
        Ok(Genus::new(g))
    } else {
        Err(format!("genus must be between 2 and {}", max))
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify { genus, check, format, out } => {
            if genus < 3 {
                return Err("verification needs genus between 3 and 8 (the contraction kernel is trivial below)".into());
            }
            let g = genus_arg(genus, 8)?;
            let selection: Vec<String> = check
                .iter()
                .flat_map(|s| s.split(','))
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            let reports = run_selected(g, &selection)?;
            let rendered = match format.as_str() {
                "text" => render_text(&reports),
                "json" => render_json(&reports),
                other => return Err(format!("unknown format '{}'", other)),
            };
            match out {
                None => emit(&rendered),
                Some(path) => std::fs::write(&path, rendered)
                    .map_err(|e| format!("cannot write {}: {}", path.display(), e))?,
            }
            if reports.iter().any(|r| r.status == CheckStatus::Fail) {
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Eval { genus, op, exprs, expr, max_degree, variant } => {
            let g = genus_arg(genus, 8)?;
            let mut sources = exprs;
            if let Some(path) = expr {
                let text = if path == "-" {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| format!("cannot read stdin: {}", e))?;
                    buf
                } else {
                    std::fs::read_to_string(&path)
                        .map_err(|e| format!("cannot read {}: {}", path, e))?
                };
                sources.push(text);
            }
            if !(2..=5).contains(&max_degree) {
                return Err("max-degree must be between 2 and 5".into());
            }
            let variant = match variant.as_str() {
                "oracle" => Tr3Variant::Oracle,
                "literal" => Tr3Variant::Literal,
                other => return Err(format!("unknown tr3 variant '{}'", other)),
            };
            let mut operands = Vec::new();
            for s in &sources {
                operands.push(parse(s).map_err(|e| format!("{}", e))?);
            }
            let result =
                eval_op(&op, &operands, g, max_degree, variant).map_err(|e| format!("{}", e))?;
            emit(&format!("{}\n", result));
            Ok(ExitCode::SUCCESS)
        }
        Command::Dims { genus, label } => {
            let g = genus_arg(genus, 16)?;
            let parts: Result<Vec<u32>, _> = label
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect();
            let parts = parts.map_err(|_| format!("bad label '{}'", label))?;
            for w in parts.windows(2) {
                if w[0] < w[1] {
                    return Err("label parts must be weakly decreasing".into());
                }
            }
            if parts.contains(&0) {
                return Err("label parts must be positive (omit trailing zeros)".into());
            }
            let lab = IrrepLabel::new(&parts);
            emit(&format!("{}\n", weyl_dim(g, &lab)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Basis { genus, space } => {
            let g = genus_arg(genus, 8)?;
            let lines = basis_listing(g, &space)?;
            let mut text = format!("{} elements\n", lines.len());
            for l in lines {
                text.push_str(&l);
                text.push('\n');
            }
            emit(&text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Checks => {
            let mut text = String::new();
            for name in treelie_core::checks::check_names() {
                text.push_str(name);
                text.push('\n');
            }
            emit(&text);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn basis_listing(g: Genus, space: &str) -> Result<Vec<String>, String> {
    if space == "U" {
        if g.get() < 3 {
            return Err("the contraction kernel basis needs genus at least 3".into());
        }
        return Ok(chillingworth::u_basis(g)
            .iter()
            .map(|v| format!("{}", v))
            .collect());
    }
    let (kind, d) = space
        .split_once(':')
        .ok_or_else(|| format!("unknown space '{}'; use U, L:<d>, T:<d> or h:<d>", space))?;
    let d: usize = d.parse().map_err(|_| format!("bad degree in '{}'", space))?;
    match kind {
        "L" => {
            if !(1..=6).contains(&d) {
                return Err("supported Lie degrees are 1..6".into());
            }
            Ok(lyndon_words(g, d).iter().map(|w| format!("{}", w)).collect())
        }
        "T" => {
            if !(1..=3).contains(&d) {
                return Err("supported tree degrees are 1..3".into());
            }
            // greedy eta-independent subset of the canonical trees
            let mut acc = RankAccumulator::new();
            let mut out = Vec::new();
            for t in canonical_trees(g, d) {
                let combo = TreeCombo { degree: d, terms: linalg::Lin::unit(t) };
                if acc.insert(combo.eta().terms.clone()) {
                    out.push(format!("{}", combo));
                }
            }
            Ok(out)
        }
        "h" => {
            if !(1..=3).contains(&d) {
                return Err("supported kernel degrees are 1..3".into());
            }
            Ok(h_kernel_basis(g, d).iter().map(|v| format!("{}", v)).collect())
        }
        _ => Err(format!("unknown space '{}'; use U, L:<d>, T:<d> or h:<d>", space)),
    }
}
