//! Library behind the `treelie` binary: the s-expression element grammar,
//! typed evaluation of the exposed operations, and the check runner with
//! text and JSON reports.

pub mod eval;
pub mod parser;
pub mod report;

pub use parser::{parse, print_expr, Expr, ParseError};
