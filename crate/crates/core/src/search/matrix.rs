use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::json;

use super::{frames, Certificate, ModelWitness, SearchBounds, SearchError, Target};
use crate::catalog::claims;
use crate::models::{Check, Model, ModelError, Obligation};

#[derive(Debug, Clone)]
pub enum PairStatus {
    Separated(Box<ModelWitness>),
    /// The manifest claims the implication and no witness against it was found.
    Claimed { reference: String },
    /// A witness against a claimed implication.
    Contradiction(Box<ModelWitness>),
    /// Nothing found within bounds; `skipped` frames could not be decided.
    Unresolved { skipped: usize },
}

impl PairStatus {
    pub fn label(&self) -> &'static str {
        match self {
            PairStatus::Separated(_) => "separated",
            PairStatus::Claimed { .. } => "implication-claimed",
            PairStatus::Contradiction(_) => "CONTRADICTION",
            PairStatus::Unresolved { .. } => "unresolved",
        }
    }

    pub fn witness(&self) -> Option<&ModelWitness> {
        match self {
            PairStatus::Separated(w) | PairStatus::Contradiction(w) => Some(w),
            _ => None,
        }
    }
}

/// `from = "QHC"` rows record plain non-derivability.
#[derive(Debug, Clone)]
pub struct MatrixEntry {
    pub from: String,
    pub to: String,
    pub status: PairStatus,
}

#[derive(Debug, Clone)]
pub struct MatrixReport {
    pub keys: Vec<String>,
    pub bounds: String,
    pub frames: usize,
    pub entries: Vec<MatrixEntry>,
}

const BASE: &str = "QHC";

impl MatrixReport {
    pub fn entry(&self, from: &str, to: &str) -> Option<&MatrixEntry> {
        self.entries.iter().find(|e| e.from == from && e.to == to)
    }

    pub fn contradictions(&self) -> Vec<&MatrixEntry> {
        self.entries.iter().filter(|e| matches!(e.status, PairStatus::Contradiction(_))).collect()
    }

    pub fn unresolved(&self) -> Vec<&MatrixEntry> {
        self.entries.iter().filter(|e| matches!(e.status, PairStatus::Unresolved { .. })).collect()
    }

    /// Rows are antecedents, columns consequents: `.` self, `=>` claimed,
    /// `x` separated, `?` unresolved, `!!` contradiction.
    pub fn table(&self) -> String {
        let width = self.keys.iter().map(String::len).max().unwrap_or(3).max(BASE.len());
        let mut out = format!("bounds: {}\nframes: {}\n\n{:width$}", self.bounds, self.frames, "");
        for (j, _) in self.keys.iter().enumerate() {
            out += &format!(" {:>3}", j + 1);
        }
        out.push('\n');
        let rows = std::iter::once(BASE.to_string()).chain(self.keys.iter().cloned());
        for a in rows {
            out += &format!("{a:width$}");
            for b in &self.keys {
                let cell = match self.entry(&a, b).map(|e| &e.status) {
                    None => ".",
                    Some(PairStatus::Separated(_)) => "x",
                    Some(PairStatus::Claimed { .. }) => "=>",
                    Some(PairStatus::Contradiction(_)) => "!!",
                    Some(PairStatus::Unresolved { .. }) => "?",
                };
                out += &format!(" {cell:>3}");
            }
            out.push('\n');
        }
        out += "\ncolumns:";
        for (j, k) in self.keys.iter().enumerate() {
            out += &format!(" {}={k}", j + 1);
        }
        out += "\n\nseparations certify non-implication over the base calculus, since every model of \
                 these classes validates it; implications are never inferred from the search.\n";
        let open = self.unresolved();
        if !open.is_empty() {
            out += "\nunresolved at these bounds:\n";
            for e in open {
                out += &format!("  {} -/-> {}\n", e.from, e.to);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = json!({ "from": e.from, "to": e.to, "status": e.status.label() });
                match &e.status {
                    PairStatus::Claimed { reference } => v["reference"] = json!(reference),
                    PairStatus::Unresolved { skipped } => v["skipped_frames"] = json!(skipped),
                    PairStatus::Separated(w) | PairStatus::Contradiction(w) => {
                        v["witness"] = serde_json::from_str(&w.to_json()).expect("witness json")
                    }
                }
                v
            })
            .collect();
        crate::models::canonical_json(&json!({ "keys": self.keys, "bounds": self.bounds, "frames": self.frames, "entries": entries }))
    }
}

/// For every ordered pair of distinct keys, the first frame (in search
/// order) validating the first and refuting the second; also a `QHC` row
/// with the first frame refuting each key.
pub fn independence_matrix(keys: &[&str], bounds: &SearchBounds) -> Result<MatrixReport, SearchError> {
    bounds.validate()?;
    let start = Instant::now();
    let targets: Vec<Target> = keys.iter().map(|k| Target::resolve(k)).collect::<Result<_, _>>()?;
    let obligations: Vec<Obligation> = targets.iter().map(|t| t.statement.obligation()).collect::<Result<_, _>>()?;
    let keys: Vec<String> = targets.iter().map(|t| t.text.clone()).collect();
    let n = keys.len();
    // pair (a, b) with a = n standing for the base calculus
    let mut open: Vec<(usize, usize)> = (0..=n).flat_map(|a| (0..n).filter(move |&b| a != b).map(move |b| (a, b))).collect();
    let mut found: BTreeMap<(usize, usize), Box<ModelWitness>> = BTreeMap::new();
    let mut skipped: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let all = frames(bounds);
    for fr in &all {
        if open.is_empty() {
            break;
        }
        if let Some(b) = bounds.budget {
            if start.elapsed() > b {
                return Err(SearchError::Budget(b));
            }
        }
        let mut cache: Vec<Option<Option<Check>>> = vec![None; n];
        let mut get = |k: usize| -> Result<Option<Check>, SearchError> {
            if cache[k].is_none() {
                cache[k] = Some(match obligations[k].check(fr) {
                    Ok(c) => Some(c),
                    Err(ModelError::TooManyValuations(..)) => None,
                    Err(e) => return Err(e.into()),
                });
            }
            Ok(cache[k].clone().unwrap())
        };
        let mut still = Vec::new();
        for &(a, b) in &open {
            let Some(cb) = get(b)? else {
                *skipped.entry((a, b)).or_default() += 1;
                still.push((a, b));
                continue;
            };
            let Some((valuation, env)) = cb.counterexample else {
                still.push((a, b));
                continue;
            };
            let valid = if a == n {
                Vec::new()
            } else {
                match get(a)? {
                    None => {
                        *skipped.entry((a, b)).or_default() += 1;
                        still.push((a, b));
                        continue;
                    }
                    Some(ca) if ca.holds => vec![Certificate { statement: keys[a].clone(), valuations: ca.valuations as u64 }],
                    Some(_) => {
                        still.push((a, b));
                        continue;
                    }
                }
            };
            let model = Model::new(fr.clone(), valuation)?;
            found.insert((a, b), Box::new(ModelWitness { model, fails: keys[b].clone(), env, valid }));
        }
        open = still;
    }
    let manifest = claims();
    let mut entries = Vec::new();
    for a in std::iter::once(n).chain(0..n) {
        for b in (0..n).filter(|&b| b != a) {
            let from = if a == n { BASE.to_string() } else { keys[a].clone() };
            let claimed = a != n && manifest.implied(&keys[a], &keys[b]);
            let status = match (found.remove(&(a, b)), claimed) {
                (Some(w), true) => PairStatus::Contradiction(w),
                (Some(w), false) => PairStatus::Separated(w),
                (None, true) => PairStatus::Claimed { reference: reference_for(&keys[a], &keys[b]) },
                (None, false) => PairStatus::Unresolved { skipped: skipped.get(&(a, b)).copied().unwrap_or(0) },
            };
            entries.push(MatrixEntry { from, to: keys[b].clone(), status });
        }
    }
    Ok(MatrixReport { keys, bounds: bounds.to_string(), frames: all.len(), entries })
}

fn reference_for(a: &str, b: &str) -> String {
    let m = claims();
    match m.implications.iter().find(|i| i.under.is_none() && i.from == a && i.to == b) {
        Some(i) => i.reference.clone(),
        None => "transitive closure of claimed edges".into(),
    }
}
