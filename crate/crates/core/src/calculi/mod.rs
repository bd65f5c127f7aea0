//! The shipped derivation systems, proof scripts and theorem corpus.

mod systems;

pub use systems::{builtin_system, SYSTEM_NAMES};

use std::path::PathBuf;

use thiserror::Error;

use crate::metalogic::{rule_text_pub, Checker, DerivationSystem, ScriptError, ScriptLoader, Verdict};
use crate::syntax::{parse_formula, Formula};

/// Every shipped script, by file name.
pub static SCRIPTS: &[(&str, &str)] = &[
    ("bang-mono.qp", include_str!("../../scripts/bang-mono.qp")),
    ("basic-1.qp", include_str!("../../scripts/basic-1.qp")),
    ("basic-2.qp", include_str!("../../scripts/basic-2.qp")),
    ("basic-3.qp", include_str!("../../scripts/basic-3.qp")),
    ("box-1.qp", include_str!("../../scripts/box-1.qp")),
    ("box-2.qp", include_str!("../../scripts/box-2.qp")),
    ("box-3.qp", include_str!("../../scripts/box-3.qp")),
    ("box-4.qp", include_str!("../../scripts/box-4.qp")),
    ("full-bang-k.qp", include_str!("../../scripts/full-bang-k.qp")),
    ("full-bang-nec.qp", include_str!("../../scripts/full-bang-nec.qp")),
    ("full-eval.qp", include_str!("../../scripts/full-eval.qp")),
    ("full-no-bang-bot.qp", include_str!("../../scripts/full-no-bang-bot.qp")),
    ("full-query-k.qp", include_str!("../../scripts/full-query-k.qp")),
    ("full-query-nec.qp", include_str!("../../scripts/full-query-nec.qp")),
    ("full-unit.qp", include_str!("../../scripts/full-unit.qp")),
    ("galois-dir1.qp", include_str!("../../scripts/galois-dir1.qp")),
    ("galois-dir2.qp", include_str!("../../scripts/galois-dir2.qp")),
    ("lem-cheat.qp", include_str!("../../scripts/lem-cheat.qp")),
    ("lem-from-dne.qp", include_str!("../../scripts/lem-from-dne.qp")),
    ("nabla-1.qp", include_str!("../../scripts/nabla-1.qp")),
    ("nabla-2.qp", include_str!("../../scripts/nabla-2.qp")),
    ("nabla-3.qp", include_str!("../../scripts/nabla-3.qp")),
    ("nabla-4.qp", include_str!("../../scripts/nabla-4.qp")),
    ("proofs-1p.qp", include_str!("../../scripts/proofs-1p.qp")),
    ("proofs-1pp.qp", include_str!("../../scripts/proofs-1pp.qp")),
    ("proofs-1ppp.qp", include_str!("../../scripts/proofs-1ppp.qp")),
    ("proofs-2p.qp", include_str!("../../scripts/proofs-2p.qp")),
    ("qc-and-imp.qp", include_str!("../../scripts/qc-and-imp.qp")),
    ("qc-iff-intro.qp", include_str!("../../scripts/qc-iff-intro.qp")),
    ("qc-or-elim.qp", include_str!("../../scripts/qc-or-elim.qp")),
    ("qc-syll.qp", include_str!("../../scripts/qc-syll.qp")),
    ("qc-uncurry.qp", include_str!("../../scripts/qc-uncurry.qp")),
    ("qh-and-imp.qp", include_str!("../../scripts/qh-and-imp.qp")),
    ("qh-apply.qp", include_str!("../../scripts/qh-apply.qp")),
    ("qh-comp.qp", include_str!("../../scripts/qh-comp.qp")),
    ("qh-id.qp", include_str!("../../scripts/qh-id.qp")),
    ("qh-iff-intro.qp", include_str!("../../scripts/qh-iff-intro.qp")),
    ("qh-nnlem.qp", include_str!("../../scripts/qh-nnlem.qp")),
    ("qh-or-elim.qp", include_str!("../../scripts/qh-or-elim.qp")),
    ("qh-syll.qp", include_str!("../../scripts/qh-syll.qp")),
    ("qh-uncurry.qp", include_str!("../../scripts/qh-uncurry.qp")),
    ("query-mono.qp", include_str!("../../scripts/query-mono.qp")),
    ("simplified-1a.qp", include_str!("../../scripts/simplified-1a.qp")),
    ("simplified-1b.qp", include_str!("../../scripts/simplified-1b.qp")),
    ("simplified-1c.qp", include_str!("../../scripts/simplified-1c.qp")),
    ("simplified-1d.qp", include_str!("../../scripts/simplified-1d.qp")),
    ("simplified-1e.qp", include_str!("../../scripts/simplified-1e.qp")),
    ("simplified-1f.qp", include_str!("../../scripts/simplified-1f.qp")),
    ("simplified-1g.qp", include_str!("../../scripts/simplified-1g.qp")),
    ("simplified-2a.qp", include_str!("../../scripts/simplified-2a.qp")),
    ("simplified-2b.qp", include_str!("../../scripts/simplified-2b.qp")),
    ("simplified-2c.qp", include_str!("../../scripts/simplified-2c.qp")),
    ("simplified-2d.qp", include_str!("../../scripts/simplified-2d.qp")),
    ("simplified-2e.qp", include_str!("../../scripts/simplified-2e.qp")),
    ("simplified-2f.qp", include_str!("../../scripts/simplified-2f.qp")),
];

/// Scripts that must be rejected, with the expected failure code.
pub static NEGATIVE_SCRIPTS: &[(&str, &str)] = &[("lem-cheat.qp", "BAD_INSTANCE")];

const CORPUS: &str = include_str!("../../data/corpus.txt");

pub fn script_text(name: &str) -> Option<&'static str> {
    let base = name.rsplit('/').next().unwrap_or(name);
    SCRIPTS.iter().find(|(n, _)| *n == base).map(|(_, t)| *t)
}

/// Resolves systems from the builtin catalog and lemma paths from the
/// shipped scripts, falling back to files under `base`.
#[derive(Debug, Clone, Default)]
pub struct CorpusLoader {
    pub base: Option<PathBuf>,
}

impl CorpusLoader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_base(base: impl Into<PathBuf>) -> Self {
        CorpusLoader { base: Some(base.into()) }
    }
}

impl ScriptLoader for CorpusLoader {
    fn system(&self, name: &str) -> Option<DerivationSystem> {
        builtin_system(name)
    }

    fn load(&self, path: &str) -> Option<String> {
        if let Some(base) = &self.base {
            if let Ok(text) = std::fs::read_to_string(base.join(path)) {
                return Some(text);
            }
        }
        script_text(path).map(str::to_string)
    }
}

/// Checks script text with the shipped systems and lemma library.
pub fn check_script_text(text: &str, loader: &CorpusLoader) -> Result<Verdict, ScriptError> {
    Checker::new(loader).check_text(text)
}

pub fn check_shipped(name: &str) -> Option<Verdict> {
    let text = script_text(name)?;
    Some(check_script_text(text, &CorpusLoader::new()).unwrap_or_else(|e| panic!("shipped script {name}: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Scripted,
    SemanticOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub system: String,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub status: Status,
    pub script: Option<String>,
}

impl CorpusEntry {
    pub fn statement(&self) -> String {
        rule_text_pub(&self.premises, &self.conclusion)
    }

    pub fn is_rule(&self) -> bool {
        !self.premises.is_empty()
    }
}

#[derive(Debug, Error)]
#[error("corpus line {line}: {msg}")]
pub struct CorpusError {
    pub line: usize,
    pub msg: String,
}

/// Parses a corpus manifest: `NAME ; SYSTEM ; PRINCIPLE-or-RULE ; scripted|semantic-only ; script-path?`.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let src = raw.trim();
        if src.is_empty() || src.starts_with('#') {
            continue;
        }
        let err = |msg: String| CorpusError { line, msg };
        let fields: Vec<&str> = src.split(" ; ").map(str::trim).collect();
        let (name, system, stmt, status, path) = match fields.as_slice() {
            [n, s, f, st] => (*n, *s, *f, *st, ""),
            [n, s, f, st, p] => (*n, *s, *f, *st, *p),
            _ => return Err(err("expected 4 or 5 `;`-separated fields".into())),
        };
        let path = path.trim_end_matches(';').trim();
        let status = match status.trim_end_matches(';').trim() {
            "scripted" => Status::Scripted,
            "semantic-only" => Status::SemanticOnly,
            other => return Err(err(format!("unknown status `{other}`"))),
        };
        let sys = builtin_system(system).ok_or_else(|| err(format!("unknown system `{system}`")))?;
        let parse = |s: &str| parse_formula(s.trim(), &sys.signature).map_err(|e| err(e.to_string()));
        let (premises, conclusion) = match stmt.split_once(" / ") {
            Some((ps, g)) => {
                let ps = crate::metalogic::split_top_pub(ps, ',').into_iter().map(parse).collect::<Result<Vec<_>, _>>()?;
                (ps, parse(g)?)
            }
            None => (vec![], parse(stmt)?),
        };
        if status == Status::Scripted && path.is_empty() {
            return Err(err("scripted entry without a script path".into()));
        }
        out.push(CorpusEntry {
            name: name.to_string(),
            system: system.to_string(),
            premises,
            conclusion,
            status,
            script: (!path.is_empty()).then(|| path.to_string()),
        });
    }
    Ok(out)
}

pub fn theorem_corpus() -> Vec<CorpusEntry> {
    parse_corpus(CORPUS).expect("shipped corpus manifest parses")
}

/// The scripts showing that the two presentations of QHC derive each other's
/// laws and rules.
pub fn system_equivalence_bundle() -> Vec<&'static str> {
    SCRIPTS
        .iter()
        .map(|(n, _)| *n)
        .filter(|n| n.starts_with("simplified-") || n.starts_with("full-"))
        .collect()
}
