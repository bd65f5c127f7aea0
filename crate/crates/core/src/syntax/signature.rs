use std::collections::BTreeMap;

use super::{Sort, SyntaxError};

/// Reserved suffix naming the opposite-sort twin of a predicate variable.
///
/// The twin of `alpha` is `alpha_hat` and the twin of `alpha_hat` is `alpha`,
/// so twinning is an involution.
pub const TWIN_SUFFIX: &str = "_hat";

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa", "lambda", "mu", "nu", "xi",
    "omicron", "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
];

fn is_greek(name: &str) -> bool {
    let stem = name.strip_suffix(TWIN_SUFFIX).unwrap_or(name);
    let stem = stem.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    GREEK.contains(&stem)
}

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Formula,
    Args,
    Term,
}

/// Identifiers standing in predicate position, with the number of arguments.
fn predicate_uses(text: &str) -> Vec<(String, usize)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut stack = vec![Ctx::Formula];
    let mut counts: Vec<usize> = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut binder = false;
    let mut i = 0;
    let next_non_ws = |mut j: usize| {
        while j < chars.len() && chars[j].is_whitespace() {
            j += 1;
        }
        chars.get(j).copied()
    };
    while i < chars.len() {
        let c = chars[i];
        let top = *stack.last().unwrap_or(&Ctx::Formula);
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if top != Ctx::Formula || binder {
                continue;
            }
            match word.as_str() {
                "forall" | "exists" => binder = true,
                w if KEYWORDS.contains(&w) => {}
                _ => {
                    if next_non_ws(i) == Some('(') {
                        let j = (i..chars.len()).find(|&j| chars[j] == '(').unwrap_or(i);
                        i = j + 1;
                        stack.push(Ctx::Args);
                        counts.push(1);
                        pending.push(word);
                    } else {
                        out.push((word, 0));
                    }
                }
            }
            continue;
        }
        match (c, top) {
            ('.', Ctx::Formula) => binder = false,
            ('(', Ctx::Formula) => stack.push(Ctx::Formula),
            (')', Ctx::Formula) => {
                stack.pop();
            }
            (')', Ctx::Args) => {
                stack.pop();
                let n = counts.pop().unwrap_or(0);
                if let Some(name) = pending.pop() {
                    out.push((name, n));
                }
            }
            (',', Ctx::Args) => {
                if let Some(n) = counts.last_mut() {
                    *n += 1;
                }
            }
            ('[', _) => stack.push(Ctx::Term),
            (']', Ctx::Term) => {
                stack.pop();
            }
            ('{', _) => stack.push(Ctx::Formula),
            ('}', Ctx::Formula) => {
                stack.pop();
            }
            _ => {}
        }
        i += 1;
    }
    out
}

pub fn twin_name(name: &str) -> String {
    match name.strip_suffix(TWIN_SUFFIX) {
        Some(base) => base.to_string(),
        None => format!("{name}{TWIN_SUFFIX}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredDecl {
    pub name: String,
    pub arity: usize,
    pub sort: Sort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LanguageFlags {
    pub query_bang: bool,
    pub proof_terms: bool,
    pub i_sort: bool,
    pub c_sort: bool,
}

impl Default for LanguageFlags {
    fn default() -> Self {
        LanguageFlags { query_bang: true, proof_terms: false, i_sort: true, c_sort: true }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    preds: BTreeMap<String, PredDecl>,
    pub flags: LanguageFlags,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_flags(flags: LanguageFlags) -> Self {
        Signature { preds: BTreeMap::new(), flags }
    }

    /// Declares (or redeclares) a predicate variable.
    pub fn declare(&mut self, name: &str, arity: usize, sort: Sort) -> &mut Self {
        self.preds.insert(name.to_string(), PredDecl { name: name.to_string(), arity, sort });
        self
    }

    pub fn problem(mut self, name: &str, arity: usize) -> Self {
        self.declare(name, arity, Sort::I);
        self
    }

    pub fn pred(mut self, name: &str, arity: usize) -> Self {
        self.declare(name, arity, Sort::C);
        self
    }

    pub fn get(&self, name: &str) -> Option<&PredDecl> {
        self.preds.get(name)
    }

    pub fn decls(&self) -> impl Iterator<Item = &PredDecl> {
        self.preds.values()
    }

    /// Adds every declaration of `other`, overriding on name clashes.
    pub fn merge(&mut self, other: &Signature) {
        for d in other.decls() {
            self.preds.insert(d.name.clone(), d.clone());
        }
        self.flags.query_bang |= other.flags.query_bang;
        self.flags.proof_terms |= other.flags.proof_terms;
        self.flags.i_sort |= other.flags.i_sort;
        self.flags.c_sort |= other.flags.c_sort;
    }

    /// Extends the signature with the opposite-sort twin of every declaration.
    pub fn with_twins(&self) -> Signature {
        let mut out = self.clone();
        for d in self.decls() {
            let twin = twin_name(&d.name);
            if self.get(&twin).is_none() {
                out.declare(&twin, d.arity, d.sort.flip());
            }
        }
        out
    }

    /// Reads a signature off the formulas themselves: identifiers in
    /// predicate position are declared with the arity they are used at,
    /// Greek letter names (`alpha`, `gamma2`, ...) as problems and all others
    /// as propositions; a `_hat` suffix flips the sort.
    pub fn infer(texts: &[&str]) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::new();
        for text in texts {
            if text.contains('[') || text.contains('*') {
                sig.flags.proof_terms = true;
            }
            for (name, arity) in predicate_uses(text) {
                let sort = if name.strip_suffix(TWIN_SUFFIX).is_some() != is_greek(&name) { Sort::I } else { Sort::C };
                if let Some(prev) = sig.get(&name) {
                    if prev.arity != arity {
                        return Err(SyntaxError::Arity { name, expected: prev.arity, found: arity, at: None });
                    }
                }
                sig.declare(&name, arity, sort);
            }
        }
        Ok(sig)
    }

    /// Parses the signature file format: `problem NAME ARITY`, `pred NAME ARITY`,
    /// `option FLAG` (one of `proof-terms`, `no-mixing`, `no-i`, `no-c`) and `#` comments.
    pub fn parse(text: &str) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            sig.parse_line(line).map_err(|msg| SyntaxError::Signature { line: idx + 1, msg })?;
        }
        Ok(sig)
    }

    /// Parses one declaration line; returns `Err` with a message if it is not one.
    pub fn parse_line(&mut self, line: &str) -> Result<(), String> {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [kind @ ("problem" | "pred"), name, arity] => {
                if !is_ident(name) {
                    return Err(format!("invalid predicate name `{name}`"));
                }
                let arity: usize = arity.parse().map_err(|_| format!("invalid arity `{arity}`"))?;
                let sort = if *kind == "problem" { Sort::I } else { Sort::C };
                if let Some(prev) = self.get(name) {
                    if prev.sort != sort || prev.arity != arity {
                        return Err(format!("conflicting redeclaration of `{name}`"));
                    }
                }
                self.declare(name, arity, sort);
                Ok(())
            }
            ["option", flag] => {
                match *flag {
                    "proof-terms" => self.flags.proof_terms = true,
                    "no-mixing" => self.flags.query_bang = false,
                    "no-i" => self.flags.i_sort = false,
                    "no-c" => self.flags.c_sort = false,
                    other => return Err(format!("unknown option `{other}`")),
                }
                Ok(())
            }
            _ => Err(format!("expected `problem NAME ARITY` or `pred NAME ARITY`, got `{line}`")),
        }
    }

    /// Renders in the signature file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.flags.proof_terms {
            out.push_str("option proof-terms\n");
        }
        if !self.flags.query_bang {
            out.push_str("option no-mixing\n");
        }
        for d in self.decls() {
            let kind = if d.sort == Sort::I { "problem" } else { "pred" };
            out.push_str(&format!("{kind} {} {}\n", d.name, d.arity));
        }
        out
    }
}

pub(crate) const KEYWORDS: &[&str] =
    &["forall", "exists", "box", "nabla", "dia", "Top", "Bot", "Triv", "Abs", "by", "with"];

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&s)
}
