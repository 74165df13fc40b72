//! S-expression grammar for elements.
//!
//! ```text
//! expr    ::= atom | "(" op expr* ")"
//! atom    ::= symbol | number
//! symbol  ::= ("a" | "b") index            e.g. a1, b4
//! number  ::= integer | integer "/" positive-integer
//! op      ::= "+" | "*" | "wedge" | "tensor" | "sym"
//!           | "tripod" | "htree" | "tree5" | "rooted" | "br"
//! ```
//!
//! `(* c e)` scales by the literal `c`; `(+ e...)` sums. Tree subterms in
//! `(rooted label sub sub)` are symbols or `(br sub sub)` pairs.

use std::fmt;

use thiserror::Error;

use treelie_core::linalg::{Int, Rat};
use treelie_core::symplectic::BasisSymbol;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("position {0}: unexpected character '{1}'")]
    UnexpectedChar(usize, char),
    #[error("position {0}: unexpected end of input")]
    UnexpectedEnd(usize),
    #[error("position {0}: unexpected ')'")]
    UnexpectedClose(usize),
    #[error("position {0}: unknown form '{1}'")]
    UnknownForm(usize, String),
    #[error("position {0}: expected {1}")]
    Expected(usize, String),
    #[error("position {0}: trailing input")]
    Trailing(usize),
    #[error("position {0}: bad number literal '{1}'")]
    BadNumber(usize, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Sym(BasisSymbol),
    Num(Rat),
    Add(Vec<Expr>),
    Mul(Rat, Box<Expr>),
    Wedge(Vec<Expr>),
    Tensor(Vec<Expr>),
    SymPow(Vec<Expr>),
    Tripod(Box<[Expr; 3]>),
    Htree(Box<[Expr; 4]>),
    Tree5(Box<[Expr; 5]>),
    Rooted(Box<Expr>, Box<Sub>, Box<Sub>),
}

/// Subtree of a `rooted` form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sub {
    Leaf(BasisSymbol),
    Pair(Box<Sub>, Box<Sub>),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    LParen,
    RParen,
    Atom(String),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((pos, Token::LParen));
                chars.next();
            }
            ')' => {
                out.push((pos, Token::RParen));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            c if c.is_ascii_alphanumeric() || c == '-' || c == '+' || c == '*' || c == '/' || c == '_' => {
                let mut atom = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || "-+*/_".contains(c) {
                        atom.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((pos, Token::Atom(atom)));
            }
            other => return Err(ParseError::UnexpectedChar(pos, other)),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.cursor)
    }

    fn next(&mut self) -> Result<(usize, Token), ParseError> {
        let t = self
            .tokens
            .get(self.cursor)
            .cloned()
            .ok_or(ParseError::UnexpectedEnd(self.end))?;
        self.cursor += 1;
        Ok(t)
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.next()? {
            (_, Token::RParen) => Ok(()),
            (pos, _) => Err(ParseError::Expected(pos, "')'".into())),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        match self.next()? {
            (pos, Token::Atom(atom)) => parse_atom(pos, &atom),
            (pos, Token::RParen) => Err(ParseError::UnexpectedClose(pos)),
            (pos, Token::LParen) => {
                let (hpos, head) = self.next()?;
                let head = match head {
                    Token::Atom(s) => s,
                    Token::RParen => return Err(ParseError::UnexpectedClose(hpos)),
                    Token::LParen => return Err(ParseError::Expected(hpos, "an operator".into())),
                };
                let _ = pos;
                match head.as_str() {
                    "+" => {
                        let args = self.parse_args()?;
                        if args.is_empty() {
                            return Err(ParseError::Expected(hpos, "at least one summand".into()));
                        }
                        Ok(Expr::Add(args))
                    }
                    "*" => {
                        let (cpos, ctok) = self.next()?;
                        let coeff = match ctok {
                            Token::Atom(s) => parse_number(cpos, &s)?,
                            _ => return Err(ParseError::Expected(cpos, "a coefficient".into())),
                        };
                        let inner = self.parse_expr()?;
                        self.expect_close()?;
                        Ok(Expr::Mul(coeff, Box::new(inner)))
                    }
                    "wedge" => Ok(Expr::Wedge(self.parse_args()?)),
                    "tensor" => Ok(Expr::Tensor(self.parse_args()?)),
                    "sym" => Ok(Expr::SymPow(self.parse_args()?)),
                    "tripod" => {
                        let args = self.parse_args()?;
                        let [x, y, z]: [Expr; 3] = args
                            .try_into()
                            .map_err(|_| ParseError::Expected(hpos, "3 arguments".into()))?;
                        Ok(Expr::Tripod(Box::new([x, y, z])))
                    }
                    "htree" => {
                        let args = self.parse_args()?;
                        let arr: [Expr; 4] = args
                            .try_into()
                            .map_err(|_| ParseError::Expected(hpos, "4 arguments".into()))?;
                        Ok(Expr::Htree(Box::new(arr)))
                    }
                    "tree5" => {
                        let args = self.parse_args()?;
                        let arr: [Expr; 5] = args
                            .try_into()
                            .map_err(|_| ParseError::Expected(hpos, "5 arguments".into()))?;
                        Ok(Expr::Tree5(Box::new(arr)))
                    }
                    "rooted" => {
                        let label = self.parse_expr()?;
                        let s1 = self.parse_sub()?;
                        let s2 = self.parse_sub()?;
                        self.expect_close()?;
                        Ok(Expr::Rooted(Box::new(label), Box::new(s1), Box::new(s2)))
                    }
                    other => Err(ParseError::UnknownForm(hpos, other.into())),
                }
            }
        }
    }

    fn parse_args(&mut self) -> Result<Vec<Expr>, ParseError> {
        let mut args = Vec::new();
        loop {
            match self.peek() {
                Some((_, Token::RParen)) => {
                    self.cursor += 1;
                    return Ok(args);
                }
                Some(_) => args.push(self.parse_expr()?),
                None => return Err(ParseError::UnexpectedEnd(self.end)),
            }
        }
    }

    fn parse_sub(&mut self) -> Result<Sub, ParseError> {
        match self.next()? {
            (pos, Token::Atom(atom)) => match BasisSymbol::parse(&atom) {
                Some(s) => Ok(Sub::Leaf(s)),
                None => Err(ParseError::Expected(pos, "a basis symbol".into())),
            },
            (pos, Token::RParen) => Err(ParseError::UnexpectedClose(pos)),
            (pos, Token::LParen) => {
                // either (br sub sub) or a bare (sub sub) pair
                if let Some((_, Token::Atom(s))) = self.peek() {
                    if s == "br" {
                        self.cursor += 1;
                    }
                }
                let _ = pos;
                let s1 = self.parse_sub()?;
                let s2 = self.parse_sub()?;
                self.expect_close()?;
                Ok(Sub::Pair(Box::new(s1), Box::new(s2)))
            }
        }
    }
}

fn parse_atom(pos: usize, atom: &str) -> Result<Expr, ParseError> {
    if let Some(s) = BasisSymbol::parse(atom) {
        return Ok(Expr::Sym(s));
    }
    parse_number(pos, atom).map(Expr::Num)
}

fn parse_number(pos: usize, s: &str) -> Result<Rat, ParseError> {
    let bad = || ParseError::BadNumber(pos, s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: Int = n.parse().map_err(|_| bad())?;
        let d: Int = d.parse().map_err(|_| bad())?;
        if d <= Int::from(0) {
            return Err(bad());
        }
        Ok(Rat::new(n, d))
    } else {
        let n: Int = s.parse().map_err(|_| bad())?;
        Ok(Rat::from_integer(n))
    }
}

/// Parse a single expression; the whole input must be consumed.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(src)?;
    let end = src.len();
    let mut p = Parser { tokens, cursor: 0, end };
    let e = p.parse_expr()?;
    if let Some((pos, _)) = p.peek() {
        return Err(ParseError::Trailing(*pos));
    }
    Ok(e)
}

fn fmt_sub(f: &mut fmt::Formatter<'_>, s: &Sub) -> fmt::Result {
    match s {
        Sub::Leaf(sym) => write!(f, "{}", sym),
        Sub::Pair(a, b) => {
            write!(f, "(")?;
            fmt_sub(f, a)?;
            write!(f, " ")?;
            fmt_sub(f, b)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Sym(s) => write!(f, "{}", s),
            Expr::Num(n) => write!(f, "{}", n),
            Expr::Add(args) => {
                write!(f, "(+")?;
                for a in args {
                    write!(f, " {}", a)?;
                }
                write!(f, ")")
            }
            Expr::Mul(c, e) => write!(f, "(* {} {})", c, e),
            Expr::Wedge(args) | Expr::Tensor(args) | Expr::SymPow(args) => {
                let name = match self {
                    Expr::Wedge(_) => "wedge",
                    Expr::Tensor(_) => "tensor",
                    _ => "sym",
                };
                write!(f, "({}", name)?;
                for a in args {
                    write!(f, " {}", a)?;
                }
                write!(f, ")")
            }
            Expr::Tripod(args) => write!(f, "(tripod {} {} {})", args[0], args[1], args[2]),
            Expr::Htree(args) => {
                write!(f, "(htree {} {} {} {})", args[0], args[1], args[2], args[3])
            }
            Expr::Tree5(args) => write!(
                f,
                "(tree5 {} {} {} {} {})",
                args[0], args[1], args[2], args[3], args[4]
            ),
            Expr::Rooted(label, s1, s2) => {
                write!(f, "(rooted {} ", label)?;
                fmt_sub(f, s1)?;
                write!(f, " ")?;
                fmt_sub(f, s2)?;
                write!(f, ")")
            }
        }
    }
}

pub fn print_expr(e: &Expr) -> String {
    format!("{}", e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_forms() {
        assert_eq!(parse("a1").unwrap(), Expr::Sym(BasisSymbol::a(1)));
        let e = parse("(wedge a1 b1 b4)").unwrap();
        assert_eq!(print_expr(&e), "(wedge a1 b1 b4)");
        let e = parse("(+ (wedge a1 b1 b4) (* -1 (wedge a3 b3 b4)))").unwrap();
        assert_eq!(
            print_expr(&e),
            "(+ (wedge a1 b1 b4) (* -1 (wedge a3 b3 b4)))"
        );
        let e = parse("(* 3/2 (sym a1 a1 b2))").unwrap();
        assert_eq!(print_expr(&e), "(* 3/2 (sym a1 a1 b2))");
        let e = parse("(rooted a1 (a2 b2) b1)").unwrap();
        assert_eq!(print_expr(&e), "(rooted a1 (a2 b2) b1)");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse("").is_err());
        assert!(parse("(wedge a1").is_err());
        assert!(parse("(frob a1)").is_err());
        assert!(parse("(wedge a1) junk").is_err());
        assert!(parse("(* x a1)").is_err());
        assert!(parse("(* 1/0 a1)").is_err());
        assert!(parse(")").is_err());
        assert!(parse("(tripod a1 a2)").is_err());
    }
}
