//! The proof-script text format.
//!
//! ```text
//! system QHC-simplified
//! mode rule-derivation
//! problem beta 0
//! premise-rule dn: ~~beta -> beta
//! lemma nn-lem: ~~(alpha | ~alpha) by qh-nnlem.qp
//! eigen: alpha
//! goal alpha | ~alpha
//! 1. ~~(alpha | ~alpha) by law nn-lem
//! 2. ~~(alpha | ~alpha) -> alpha | ~alpha by law dn with {beta := alpha | ~alpha}
//! 3. alpha | ~alpha by mp 1 2
//! qed 3
//! ```

use thiserror::Error;

use crate::syntax::{parse_formula, parse_term, Abstraction, Formula, Signature, Substitution, SyntaxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Theorem,
    Hypotheses,
    RuleDerivation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PremiseRule {
    pub name: String,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

/// A previously checked script cited as a law (no premises) or a rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaDecl {
    pub name: String,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Law { name: String, subst: Option<Substitution> },
    Hyp(usize),
    Rule { name: String, from: Vec<usize>, subst: Option<Substitution> },
    Mp(usize, usize),
    Gen { var: String, from: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub number: usize,
    pub formula: Formula,
    pub just: Justification,
    /// 1-based line in the source text.
    pub source_line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub system: String,
    pub mode: Mode,
    pub signature: Signature,
    pub hyps: Vec<(usize, Formula)>,
    pub premise_rules: Vec<PremiseRule>,
    pub lemmas: Vec<LemmaDecl>,
    pub eigen: Vec<String>,
    pub goal_premises: Vec<Formula>,
    pub goal: Formula,
    pub lines: Vec<ProofLine>,
    pub qed: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScriptError {
    #[error("script line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("script line {line}: {err}")]
    Syntax { line: usize, err: SyntaxError },
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
}

fn fmt_err(line: usize, msg: impl Into<String>) -> ScriptError {
    ScriptError::Format { line, msg: msg.into() }
}

/// Splits at `sep` occurrences outside brackets.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

struct Ctx<'a> {
    sig: &'a Signature,
    line: usize,
}

impl Ctx<'_> {
    fn formula(&self, text: &str) -> Result<Formula, ScriptError> {
        parse_formula(text.trim(), self.sig).map_err(|err| ScriptError::Syntax { line: self.line, err })
    }

    fn number(&self, text: &str) -> Result<usize, ScriptError> {
        text.trim().parse().map_err(|_| fmt_err(self.line, format!("expected a line number, got `{}`", text.trim())))
    }

    /// `F1, ..., Fm / G` or just `G`.
    fn rule_statement(&self, text: &str) -> Result<(Vec<Formula>, Formula), ScriptError> {
        let parts = split_top(text, '/');
        match parts.as_slice() {
            [g] => Ok((vec![], self.formula(g)?)),
            [ps, g] => {
                let premises = split_top(ps, ',').into_iter().map(|p| self.formula(p)).collect::<Result<_, _>>()?;
                Ok((premises, self.formula(g)?))
            }
            _ => Err(fmt_err(self.line, "expected `F1, ..., Fm / G`")),
        }
    }

    /// `{p := \x y. BODY; x := t}`.
    fn substitution(&self, text: &str) -> Result<Substitution, ScriptError> {
        let text = text.trim();
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| fmt_err(self.line, "substitution must be enclosed in `{ }`"))?;
        let mut s = Substitution::new();
        for entry in split_top(inner, ';') {
            if entry.trim().is_empty() {
                continue;
            }
            let (name, rhs) = entry
                .split_once(":=")
                .ok_or_else(|| fmt_err(self.line, format!("expected `NAME := VALUE`, got `{}`", entry.trim())))?;
            let name = name.trim();
            let rhs = rhs.trim();
            if self.sig.get(name).is_some() {
                let abs = match rhs.strip_prefix('\\') {
                    Some(rest) => {
                        let (params, body) = rest
                            .split_once('.')
                            .ok_or_else(|| fmt_err(self.line, "expected `\\x1 ... xn. BODY`"))?;
                        let params: Vec<String> = params.split_whitespace().map(str::to_string).collect();
                        Abstraction::new(params, self.formula(body)?)
                    }
                    None => Abstraction::constant(self.formula(rhs)?),
                };
                if s.preds.insert(name.to_string(), abs).is_some() {
                    return Err(fmt_err(self.line, format!("`{name}` substituted twice")));
                }
            } else {
                let t = parse_term(rhs, self.sig).map_err(|err| ScriptError::Syntax { line: self.line, err })?;
                if s.indiv.insert(name.to_string(), t).is_some() {
                    return Err(fmt_err(self.line, format!("`{name}` substituted twice")));
                }
            }
        }
        Ok(s)
    }

    /// Splits `REST [with {...}]`.
    fn with_clause<'t>(&self, text: &'t str) -> Result<(&'t str, Option<Substitution>), ScriptError> {
        match text.find(" with ") {
            Some(i) => Ok((&text[..i], Some(self.substitution(&text[i + 6..])?))),
            None => Ok((text, None)),
        }
    }

    fn justification(&self, text: &str) -> Result<Justification, ScriptError> {
        let text = text.trim();
        let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match head {
            "law" => {
                let (name, subst) = self.with_clause(rest)?;
                Ok(Justification::Law { name: name.trim().to_string(), subst })
            }
            "hyp" => Ok(Justification::Hyp(self.number(rest)?)),
            "rule" => {
                let (body, subst) = self.with_clause(rest)?;
                let (name, from) = body
                    .split_once(" from ")
                    .ok_or_else(|| fmt_err(self.line, "expected `rule NAME from I J ...`"))?;
                let from = from.split_whitespace().map(|n| self.number(n)).collect::<Result<_, _>>()?;
                Ok(Justification::Rule { name: name.trim().to_string(), from, subst })
            }
            "mp" => {
                let nums: Vec<usize> = rest.split_whitespace().map(|n| self.number(n)).collect::<Result<_, _>>()?;
                match nums.as_slice() {
                    [i, j] => Ok(Justification::Mp(*i, *j)),
                    _ => Err(fmt_err(self.line, "`mp` takes two line numbers")),
                }
            }
            "gen" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                match words.as_slice() {
                    [x, "from", i] => Ok(Justification::Gen { var: x.to_string(), from: self.number(i)? }),
                    _ => Err(fmt_err(self.line, "expected `gen x from I`")),
                }
            }
            other => Err(fmt_err(self.line, format!("unknown justification `{other}`"))),
        }
    }
}

/// Parses a script. `system_sig` supplies the base signature of the named system.
pub fn parse_script(text: &str, system_sig: &dyn Fn(&str) -> Option<Signature>) -> Result<ProofScript, ScriptError> {
    let mut system = None;
    let mut mode = None;
    let mut sig = Signature::new();
    let mut hyps = Vec::new();
    let mut premise_rules = Vec::new();
    let mut lemmas = Vec::new();
    let mut eigen = Vec::new();
    let mut goal = None;
    let mut lines = Vec::new();
    let mut qed = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let src = raw.split('#').next().unwrap_or("").trim();
        if src.is_empty() {
            continue;
        }
        if qed.is_some() {
            return Err(fmt_err(line, "text after `qed`"));
        }
        let ctx = Ctx { sig: &sig, line };
        let (word, rest) = src.split_once(char::is_whitespace).unwrap_or((src, ""));
        let rest = rest.trim();

        if let Some(num) = word.strip_suffix('.').filter(|n| !n.is_empty() && n.chars().all(|c| c.is_ascii_digit())) {
            if goal.is_none() {
                return Err(fmt_err(line, "proof lines must follow the `goal` header"));
            }
            let number: usize = ctx.number(num)?;
            let (formula, just) = rest
                .split_once(" by ")
                .ok_or_else(|| fmt_err(line, "expected `N. FORMULA by JUSTIFICATION`"))?;
            let formula = ctx.formula(formula)?;
            let just = ctx.justification(just)?;
            if lines.iter().any(|l: &ProofLine| l.number == number) {
                return Err(fmt_err(line, format!("line {number} numbered twice")));
            }
            lines.push(ProofLine { number, formula, just, source_line: line });
            continue;
        }

        match word {
            "system" => {
                if system.is_some() {
                    return Err(fmt_err(line, "duplicate `system`"));
                }
                let base = system_sig(rest).ok_or_else(|| ScriptError::UnknownSystem(rest.to_string()))?;
                let mut merged = base;
                merged.merge(&sig);
                sig = merged;
                system = Some(rest.to_string());
            }
            "mode" => {
                mode = Some(match rest {
                    "theorem" => Mode::Theorem,
                    "hypotheses" => Mode::Hypotheses,
                    "rule-derivation" => Mode::RuleDerivation,
                    other => return Err(fmt_err(line, format!("unknown mode `{other}`"))),
                });
            }
            "problem" | "pred" | "option" => sig.parse_line(src).map_err(|msg| fmt_err(line, msg))?,
            "hyp" => {
                let (n, f) = rest.split_once(':').ok_or_else(|| fmt_err(line, "expected `hyp N: FORMULA`"))?;
                hyps.push((ctx.number(n)?, ctx.formula(f)?));
            }
            "premise-rule" => {
                let (name, stmt) =
                    rest.split_once(':').ok_or_else(|| fmt_err(line, "expected `premise-rule NAME: STATEMENT`"))?;
                let (premises, conclusion) = ctx.rule_statement(stmt)?;
                premise_rules.push(PremiseRule { name: name.trim().to_string(), premises, conclusion });
            }
            "lemma" => {
                let (name, stmt) = rest.split_once(':').ok_or_else(|| fmt_err(line, "expected `lemma NAME: STATEMENT by PATH`"))?;
                let (stmt, path) = stmt.rsplit_once(" by ").ok_or_else(|| fmt_err(line, "lemma needs `by PATH`"))?;
                let (premises, conclusion) = ctx.rule_statement(stmt)?;
                lemmas.push(LemmaDecl {
                    name: name.trim().to_string(),
                    premises,
                    conclusion,
                    path: path.trim().to_string(),
                });
            }
            "eigen:" => eigen.extend(rest.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(str::to_string)),
            "goal" => {
                if goal.is_some() {
                    return Err(fmt_err(line, "duplicate `goal`"));
                }
                goal = Some(ctx.rule_statement(rest)?);
            }
            "qed" => qed = Some(ctx.number(rest)?),
            other => return Err(fmt_err(line, format!("unknown header `{other}`"))),
        }
    }

    let system = system.ok_or_else(|| fmt_err(1, "missing `system` line"))?;
    let mode = mode.ok_or_else(|| fmt_err(1, "missing `mode` line"))?;
    let (goal_premises, goal) = goal.ok_or_else(|| fmt_err(1, "missing `goal` line"))?;
    let qed = qed.ok_or_else(|| fmt_err(text.lines().count().max(1), "missing `qed`"))?;
    if !goal_premises.is_empty() && mode != Mode::RuleDerivation {
        return Err(fmt_err(1, "a goal with premises needs `mode rule-derivation`"));
    }
    Ok(ProofScript { system, mode, signature: sig, hyps, premise_rules, lemmas, eigen, goal_premises, goal, lines, qed })
}
