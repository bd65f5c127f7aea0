//! Named principles and the claims made about them, as data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::metalogic::rule_text_pub;
use crate::models::{Check, Frame, ModelError, Obligation};
use crate::syntax::{parse_formula, print_formula, Formula, Signature, Sort, SyntaxError};

pub const PRINCIPLES: &str = include_str!("../../data/principles.txt");
pub const CLAIMS: &str = include_str!("../../data/claims.txt");

/// The principles whose pairwise implications the independence matrix covers.
pub const MATRIX_KEYS: &[&str] =
    &["H", "K", "PC", "PC-rule", "R", "D", "forall-nabla", "exists-box", "forall-box", "exists-nabla", "ED"];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("unknown principle `{0}`")]
    Unknown(String),
}

/// A principle `·F` or a rule `P1, .., Pn / C`.
#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Principle(Formula),
    Rule { premises: Vec<Formula>, conclusion: Formula },
}

impl Statement {
    /// Parses `F` or `P1, P2 / C`, reading the signature off the text.
    pub fn parse(text: &str) -> Result<Statement, SyntaxError> {
        let parts: Vec<&str> = text.split('/').collect();
        let sig = Signature::infer(&parts)?;
        Statement::parse_with(text, &sig)
    }

    pub fn parse_with(text: &str, sig: &Signature) -> Result<Statement, SyntaxError> {
        match text.split_once('/') {
            None => Ok(Statement::Principle(parse_formula(text.trim(), sig)?)),
            Some((prem, concl)) => {
                let premises = crate::metalogic::split_top_pub(prem, ',')
                    .into_iter()
                    .map(|p| parse_formula(p.trim(), sig))
                    .collect::<Result<_, _>>()?;
                Ok(Statement::Rule { premises, conclusion: parse_formula(concl.trim(), sig)? })
            }
        }
    }

    pub fn formulas(&self) -> Vec<&Formula> {
        match self {
            Statement::Principle(f) => vec![f],
            Statement::Rule { premises, conclusion } => premises.iter().chain(std::iter::once(conclusion)).collect(),
        }
    }

    pub fn is_rule(&self) -> bool {
        matches!(self, Statement::Rule { .. })
    }

    pub fn obligation(&self) -> Result<Obligation, ModelError> {
        match self {
            Statement::Principle(f) => Obligation::principle(f),
            Statement::Rule { premises, conclusion } => Obligation::rule(premises, conclusion),
        }
    }

    pub fn check(&self, frame: &Frame) -> Result<Check, ModelError> {
        self.obligation()?.check(frame)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Principle(g) => write!(f, "{}", print_formula(g)),
            Statement::Rule { premises, conclusion } => write!(f, "{}", rule_text_pub(premises, conclusion)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Propositional,
    Predicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortTag {
    ISorted,
    CSorted,
    Mixed,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Propositional => "propositional",
            Scope::Predicate => "predicate",
        })
    }
}

impl fmt::Display for SortTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SortTag::ISorted => "i-sorted",
            SortTag::CSorted => "c-sorted",
            SortTag::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone)]
pub struct NamedPrinciple {
    pub key: String,
    pub name: String,
    /// The statement as written, with `box`, `nabla`, `dia` and `~` unexpanded.
    pub source: String,
    pub statement: Statement,
    pub scope: Scope,
    pub sorts: SortTag,
}

fn classify(st: &Statement) -> (Scope, SortTag) {
    let mut quantified = false;
    let mut mixing = false;
    let mut sorts = BTreeSet::new();
    for f in st.formulas() {
        f.visit(&mut |g| match g {
            Formula::Forall(..) | Formula::Exists(..) => quantified = true,
            Formula::Query(_) | Formula::Bang(_) => mixing = true,
            Formula::Atom { sort, .. } => {
                sorts.insert(*sort);
            }
            _ => {}
        });
    }
    let scope = if quantified { Scope::Predicate } else { Scope::Propositional };
    let tag = match (mixing, sorts.len()) {
        (false, 1) if sorts.contains(&Sort::I) => SortTag::ISorted,
        (false, 1) => SortTag::CSorted,
        _ => SortTag::Mixed,
    };
    (scope, tag)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_catalog(text: &str) -> Result<Vec<NamedPrinciple>, CatalogError> {
    let mut out: Vec<NamedPrinciple> = Vec::new();
    for (line, l) in data_lines(text) {
        let err = |msg: String| CatalogError::Line { line, msg };
        let fields: Vec<&str> = l.splitn(3, ';').map(str::trim).collect();
        let [key, name, source] = fields[..] else {
            return Err(err("expected KEY ; NAME ; STATEMENT".into()));
        };
        if out.iter().any(|p| p.key == key) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        let statement = Statement::parse(source).map_err(|e| err(e.to_string()))?;
        for f in statement.formulas() {
            f.check().map_err(|e| err(e.to_string()))?;
        }
        let (scope, sorts) = classify(&statement);
        out.push(NamedPrinciple { key: key.into(), name: name.into(), source: source.into(), statement, scope, sorts });
    }
    Ok(out)
}

/// The shipped principles.
pub fn catalog() -> &'static [NamedPrinciple] {
    static CELL: OnceLock<Vec<NamedPrinciple>> = OnceLock::new();
    CELL.get_or_init(|| parse_catalog(PRINCIPLES).expect("shipped catalog parses"))
}

/// Looks a principle up by key; `PC*` is accepted for the PC-rule.
pub fn principle(key: &str) -> Option<&'static NamedPrinciple> {
    let key = if key == "PC*" { "PC-rule" } else { key };
    catalog().iter().find(|p| p.key == key)
}

/// One side of a claim: everything listed must hold.
#[derive(Debug, Clone)]
pub enum Member {
    Key(String),
    Inline(String, Statement),
    All(Vec<Member>),
}

impl Member {
    fn parse(text: &str) -> Result<Member, CatalogError> {
        let text = text.trim();
        if text.contains("&&") {
            return Ok(Member::All(text.split("&&").map(Member::parse).collect::<Result<_, _>>()?));
        }
        if principle(text).is_some() {
            return Ok(Member::Key(principle(text).unwrap().key.clone()));
        }
        Ok(Member::Inline(text.into(), Statement::parse(text)?))
    }

    /// The statements that must all hold.
    pub fn statements(&self) -> Vec<&Statement> {
        match self {
            Member::Key(k) => vec![&principle(k).expect("resolved at parse time").statement],
            Member::Inline(_, s) => vec![s],
            Member::All(ms) => ms.iter().flat_map(Member::statements).collect(),
        }
    }
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Key(k) => f.write_str(k),
            Member::Inline(src, _) => f.write_str(src),
            Member::All(ms) => {
                let parts: Vec<String> = ms.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(" && "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Scripted,
    Semantic,
    SearchWitness,
    UnverifiedMeta,
}

impl Mode {
    fn parse(s: &str) -> Option<Mode> {
        Some(match s {
            "scripted" => Mode::Scripted,
            "semantic" => Mode::Semantic,
            "search-witness" => Mode::SearchWitness,
            "unverified-meta" => Mode::UnverifiedMeta,
            _ => return None,
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Scripted => "scripted",
            Mode::Semantic => "semantic",
            Mode::SearchWitness => "search-witness",
            Mode::UnverifiedMeta => "unverified-meta",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Equivalence {
    pub key: String,
    pub members: Vec<Member>,
    pub under: Option<String>,
    pub reference: String,
    pub mode: Mode,
}

#[derive(Debug, Clone)]
pub struct Implication {
    pub from: String,
    pub to: String,
    pub under: Option<String>,
    pub reference: String,
    pub mode: Mode,
}

/// `from = None` states plain non-derivability.
#[derive(Debug, Clone)]
pub struct Separation {
    pub from: Option<String>,
    pub to: String,
    pub reference: String,
    pub mode: Mode,
}

#[derive(Debug, Clone, Default)]
pub struct ClaimSet {
    pub equivalences: Vec<Equivalence>,
    pub implications: Vec<Implication>,
    pub separations: Vec<Separation>,
}

impl ClaimSet {
    /// Whether the unconditional implication edges (closed under
    /// transitivity and the catalog's equivalences by key) give `a ⇒ b`.
    pub fn implied(&self, a: &str, b: &str) -> bool {
        if a == b {
            return true;
        }
        let mut edges: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for i in self.implications.iter().filter(|i| i.under.is_none()) {
            edges.entry(&i.from).or_default().push(&i.to);
        }
        let mut seen = BTreeSet::from([a]);
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &y in edges.get(x).into_iter().flatten() {
                if y == b {
                    return true;
                }
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        false
    }

    pub fn separation(&self, a: &str, b: &str) -> Option<&Separation> {
        self.separations.iter().find(|s| s.from.as_deref() == Some(a) && s.to == b)
    }
}

fn attributes<'a>(fields: &[&'a str]) -> (Vec<&'a str>, BTreeMap<&'a str, String>) {
    let mut body = Vec::new();
    let mut attrs = BTreeMap::new();
    for f in fields {
        match f.split_once('=') {
            Some((k, v)) if !k.is_empty() && k.chars().all(|c| c.is_ascii_alphabetic()) => {
                attrs.insert(k, v.trim().trim_matches('"').to_string());
            }
            _ => body.push(*f),
        }
    }
    (body, attrs)
}

pub fn parse_claims(text: &str) -> Result<ClaimSet, CatalogError> {
    let mut set = ClaimSet::default();
    let mut pending_pairs = Vec::new();
    for (line, l) in data_lines(text) {
        let err = |msg: String| CatalogError::Line { line, msg };
        let known = |k: &str| principle(k).map(|p| p.key.clone()).ok_or_else(|| err(format!("unknown principle `{k}`")));
        let (kind, rest) = l.split_once(' ').ok_or_else(|| err("missing claim body".into()))?;
        let fields: Vec<&str> = rest.split(';').map(str::trim).collect();
        let (body, attrs) = attributes(&fields);
        let reference = attrs.get("ref").cloned().ok_or_else(|| err("missing ref".into()))?;
        let under = attrs.get("under").map(|k| known(k)).transpose()?;
        let mode = |default| match attrs.get("mode") {
            None => Ok(default),
            Some(m) => Mode::parse(m).ok_or_else(|| err(format!("unknown mode `{m}`"))),
        };
        match kind {
            "EQUIV" => {
                let (head, first) = body.first().and_then(|b| b.split_once(':')).ok_or_else(|| err("expected `KEY:`".into()))?;
                let key = known(head.trim())?;
                let members = std::iter::once(first)
                    .chain(body[1..].iter().copied())
                    .map(Member::parse)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| err(e.to_string()))?;
                set.equivalences.push(Equivalence { key, members, under, reference, mode: mode(Mode::Semantic)? });
            }
            "IMPLIES" => {
                let (a, b) = body.first().and_then(|b| b.split_once("->")).ok_or_else(|| err("expected `A -> B`".into()))?;
                set.implications.push(Implication {
                    from: known(a.trim())?,
                    to: known(b.trim())?,
                    under,
                    reference,
                    mode: mode(Mode::Semantic)?,
                });
            }
            "SEPARATE" => {
                let (a, b) = body.first().and_then(|b| b.split_once("-/->")).ok_or_else(|| err("expected `A -/-> B`".into()))?;
                let from = match a.trim() {
                    "QHC" => None,
                    k => Some(known(k)?),
                };
                set.separations.push(Separation { from, to: known(b.trim())?, reference, mode: mode(Mode::SearchWitness)? });
            }
            "SEPARATE-PAIRS" => {
                let keys = body
                    .first()
                    .ok_or_else(|| err("expected a key list".into()))?
                    .split(',')
                    .map(|k| known(k.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                pending_pairs.push((keys, reference, mode(Mode::SearchWitness)?));
            }
            other => return Err(err(format!("unknown claim kind `{other}`"))),
        }
    }
    // pairs are expanded after all implication edges are known
    for (keys, reference, mode) in pending_pairs {
        for a in &keys {
            for b in &keys {
                if !set.implied(a, b) && set.separation(a, b).is_none() {
                    set.separations.push(Separation { from: Some(a.clone()), to: b.clone(), reference: reference.clone(), mode });
                }
            }
        }
    }
    Ok(set)
}

/// The shipped claims manifest.
pub fn claims() -> &'static ClaimSet {
    static CELL: OnceLock<ClaimSet> = OnceLock::new();
    CELL.get_or_init(|| parse_claims(CLAIMS).expect("shipped claims parse"))
}

/// One claim a frame disagrees with.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub claim: String,
    pub detail: String,
}

/// The result of checking every claim against one frame.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Shadow {
    pub claims_checked: usize,
    /// Claims left undecided because some check exceeded the valuation cap.
    pub undecided: Vec<String>,
    pub discrepancies: Vec<Discrepancy>,
}

/// Validity of statements in one frame, memoized by display text;
/// `None` when the valuation cap is hit.
struct Memo<'a> {
    frame: &'a Frame,
    seen: BTreeMap<String, Option<bool>>,
}

impl Memo<'_> {
    fn statement(&mut self, st: &Statement) -> Result<Option<bool>, ModelError> {
        let key = st.to_string();
        if let Some(v) = self.seen.get(&key) {
            return Ok(*v);
        }
        let v = match st.check(self.frame) {
            Ok(c) => Some(c.holds),
            Err(ModelError::TooManyValuations(..)) => None,
            Err(e) => return Err(e),
        };
        self.seen.insert(key, v);
        Ok(v)
    }

    fn member(&mut self, m: &Member) -> Result<Option<bool>, ModelError> {
        let mut all = Some(true);
        for st in m.statements() {
            match self.statement(st)? {
                Some(true) => {}
                Some(false) => return Ok(Some(false)),
                None => all = None,
            }
        }
        Ok(all)
    }

    fn key(&mut self, k: &str) -> Result<Option<bool>, ModelError> {
        self.member(&Member::Key(k.into()))
    }
}

/// Checks the equivalence groups and implications of `set` in `frame`:
/// members of a group must be valid together or not at all, and an
/// implication's consequent must be valid whenever its antecedent is
/// (claims with `under` apply only where that principle is valid).
pub fn shadow(frame: &Frame, set: &ClaimSet) -> Result<Shadow, ModelError> {
    let mut memo = Memo { frame, seen: BTreeMap::new() };
    let mut out = Shadow::default();
    let applies = |memo: &mut Memo, under: &Option<String>| -> Result<Option<bool>, ModelError> {
        match under {
            None => Ok(Some(true)),
            Some(k) => memo.key(k),
        }
    };
    for e in &set.equivalences {
        let label = format!("EQUIV {} ({})", e.key, e.reference);
        match applies(&mut memo, &e.under)? {
            Some(false) => continue,
            None => {
                out.undecided.push(label);
                continue;
            }
            Some(true) => {}
        }
        out.claims_checked += 1;
        let mut values = Vec::new();
        for m in &e.members {
            values.push((m.to_string(), memo.member(m)?));
        }
        let known: Vec<&(String, Option<bool>)> = values.iter().filter(|(_, v)| v.is_some()).collect();
        if known.iter().any(|(_, v)| *v == Some(true)) && known.iter().any(|(_, v)| *v == Some(false)) {
            let valid: Vec<&str> = known.iter().filter(|(_, v)| *v == Some(true)).map(|(m, _)| m.as_str()).collect();
            let invalid: Vec<&str> = known.iter().filter(|(_, v)| *v == Some(false)).map(|(m, _)| m.as_str()).collect();
            out.discrepancies.push(Discrepancy {
                claim: label.clone(),
                detail: format!("valid: {}; invalid: {}", valid.join(" | "), invalid.join(" | ")),
            });
        }
        if known.len() < values.len() {
            out.undecided.push(label);
        }
    }
    for i in &set.implications {
        let label = format!("IMPLIES {} -> {} ({})", i.from, i.to, i.reference);
        match applies(&mut memo, &i.under)? {
            Some(false) => continue,
            None => {
                out.undecided.push(label);
                continue;
            }
            Some(true) => {}
        }
        out.claims_checked += 1;
        match (memo.key(&i.from)?, memo.key(&i.to)?) {
            (Some(true), Some(false)) => {
                out.discrepancies.push(Discrepancy { claim: label, detail: format!("{} valid, {} invalid", i.from, i.to) })
            }
            (Some(true), None) | (None, Some(false)) | (None, None) => out.undecided.push(label),
            _ => {}
        }
    }
    Ok(out)
}
