//! The two-sorted language: formulas, signatures, parsing, printing and
//! capture-avoiding substitution.

mod alpha;
mod formula;
mod parse;
mod print;
pub mod random;
mod signature;
mod subst;

pub use alpha::{alpha_equal, canonical_key};
pub use formula::{Formula, Sort, Term};
pub use parse::{parse_formula, parse_term, Parser};
pub use print::{print_formula, print_term};
pub use signature::{twin_name, LanguageFlags, PredDecl, Signature, TWIN_SUFFIX};
pub use subst::{apply_substitution, apply_substitution_naive, fresh_name, Abstraction, Substitution};

use thiserror::Error;

/// Position in the source text (byte offset, 1-based line and column).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

fn pos_suffix(pos: &Option<Pos>) -> String {
    pos.map(|p| format!(" at {p}")).unwrap_or_default()
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("lexical error{}: unexpected character {ch:?}", pos_suffix(.at))]
    Lex { ch: char, at: Option<Pos> },
    #[error("parse error{}: {msg}", pos_suffix(.at))]
    Grammar { msg: String, at: Option<Pos> },
    #[error("undeclared identifier `{name}`{}", pos_suffix(.at))]
    Undeclared { name: String, at: Option<Pos> },
    #[error("sort clash{}: {left}-formula combined with {right}-formula", pos_suffix(.at))]
    SortClash { left: Sort, right: Sort, at: Option<Pos> },
    #[error("sort error{}: `{op}` expects a {expected}-formula, found a {found}-formula", pos_suffix(.at))]
    WrongOperand { op: &'static str, expected: Sort, found: Sort, at: Option<Pos> },
    #[error("arity mismatch for `{name}`{}: declared {expected}, used with {found}", pos_suffix(.at))]
    Arity { name: String, expected: usize, found: usize, at: Option<Pos> },
    #[error("{feature} not enabled in this signature{}", pos_suffix(.at))]
    Disabled { feature: &'static str, at: Option<Pos> },
    #[error("signature error on line {line}: {msg}")]
    Signature { line: usize, msg: String },
    #[error("substitution error: {0}")]
    Substitution(String),
}
