//! Model enumeration, countermodel search and the independence matrix.

pub mod battery;
mod matrix;
mod spaces;

pub use matrix::{independence_matrix, MatrixEntry, MatrixReport, PairStatus};
pub use spaces::{canonical_form, enumerate_spaces, spaces_of_size, MAX_ENUMERATED_POINTS};

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use thiserror::Error;

use crate::catalog::{principle, Statement};
use crate::models::{model_from_json, model_to_json, DenseMap, Env, FiniteSpace, Frame, Limits, Model, ModelClass, ModelError, ModelFile};
use crate::syntax::SyntaxError;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("time budget of {0:?} exceeded")]
    Budget(Duration),
    #[error("{0}")]
    Model(#[from] ModelError),
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("bad bounds: {0}")]
    Bounds(String),
    #[error("bad witness: {0}")]
    Witness(String),
}

/// How far a search goes.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBounds {
    pub max_points: usize,
    pub max_domain: usize,
    pub classes: Vec<ModelClass>,
    pub stalk_cap: usize,
    /// Frames needing more valuations than this for one check are skipped.
    pub max_valuations: u128,
    pub budget: Option<Duration>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_points: 3,
            max_domain: 2,
            classes: ModelClass::ALL.to_vec(),
            stalk_cap: 2,
            max_valuations: 2_000_000,
            budget: None,
        }
    }
}

impl SearchBounds {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_points == 0 || self.max_points > MAX_ENUMERATED_POINTS {
            return Err(SearchError::Bounds(format!("max points must be in 1..={MAX_ENUMERATED_POINTS}")));
        }
        if self.max_domain == 0 || self.stalk_cap == 0 || self.max_valuations == 0 {
            return Err(SearchError::Bounds("domain, stalk cap and valuation cap must be positive".into()));
        }
        if self.classes.is_empty() {
            return Err(SearchError::Bounds("no model classes".into()));
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits { stalk_cap: self.stalk_cap, max_valuations: self.max_valuations, ..Limits::default() }
    }
}

impl fmt::Display for SearchBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<&str> = self.classes.iter().map(|c| c.name()).collect();
        write!(
            f,
            "points<={} domain<={} classes={} stalk-cap={} valuations<={}",
            self.max_points,
            self.max_domain,
            classes.join(","),
            self.stalk_cap,
            self.max_valuations
        )
    }
}

/// Dense maps from a discrete `S` with at most `max_s` points, one per
/// multiset of images (permuting `S` gives an isomorphic model).
pub fn dense_maps(space: &FiniteSpace, max_s: usize) -> Vec<DenseMap> {
    let n = space.len();
    let mut out = Vec::new();
    for s in 1..=max_s {
        let mut f = vec![0usize; s];
        loop {
            let image = f.iter().fold(0, |a, &x| a | 1 << x);
            if space.closure(image) == space.full() {
                out.push(DenseMap { s, f: f.clone() });
            }
            // next nondecreasing sequence
            let Some(i) = (0..s).rev().find(|&i| f[i] + 1 < n) else { break };
            let v = f[i] + 1;
            for slot in &mut f[i..] {
                *slot = v;
            }
        }
    }
    out
}

/// Every frame within the bounds, smallest first: by point count, then
/// domain size, then class in the order given, then space and dense map.
pub fn frames(bounds: &SearchBounds) -> Vec<Frame> {
    let mut out = Vec::new();
    for n in 1..=bounds.max_points {
        let spaces = spaces_of_size(n);
        for d in 1..=bounds.max_domain {
            for &class in &bounds.classes {
                for space in &spaces {
                    let dense: Vec<Option<DenseMap>> = if class == ModelClass::DenseImage {
                        dense_maps(space, n).into_iter().map(Some).collect()
                    } else {
                        vec![None]
                    };
                    for dm in dense {
                        out.push(Frame::with_limits(class, space.clone(), dm, d, bounds.limits()).expect("enumerated frames are valid"));
                    }
                }
            }
        }
    }
    out
}

pub fn frame_label(fr: &Frame) -> String {
    let mut s = format!("{} points={} leq={:?}", fr.class, fr.space.len(), fr.space.strict_pairs());
    if let Some(d) = &fr.dense {
        s += &format!(" S={} f={:?}", d.s, d.f);
    }
    s + &format!(" domain={}", fr.domain)
}

/// A principle or rule given by catalog key or written out.
#[derive(Debug, Clone)]
pub struct Target {
    pub text: String,
    pub statement: Statement,
}

impl Target {
    pub fn resolve(text: &str) -> Result<Target, SyntaxError> {
        let text = text.trim();
        match principle(text) {
            Some(p) => Ok(Target { text: p.key.clone(), statement: p.statement.clone() }),
            None => Ok(Target { text: text.into(), statement: Statement::parse(text)? }),
        }
    }
}

/// A validity certificate: the statement held under every one of the
/// enumerated valuations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub statement: String,
    pub valuations: u64,
}

/// A model refuting `fails` in which every certified statement holds.
#[derive(Debug, Clone)]
pub struct ModelWitness {
    pub model: Model,
    pub fails: String,
    pub env: Env,
    pub valid: Vec<Certificate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct WitnessFile {
    model: ModelFile,
    stalk_cap: usize,
    fails: String,
    env: BTreeMap<String, usize>,
    valid: Vec<Certificate>,
    note: String,
}

impl ModelWitness {
    pub fn to_json(&self) -> String {
        let file = WitnessFile {
            model: model_to_json(&self.model),
            stalk_cap: self.model.frame.limits.stalk_cap,
            fails: self.fails.clone(),
            env: self.env.clone(),
            valid: self.valid.clone(),
            note: "the model validates the listed statements and refutes `fails` under the stored valuation; \
                   since every model of the class validates the base calculus, the listed statements do not \
                   derive `fails`"
                .into(),
        };
        crate::models::canonical_json(&file)
    }

    pub fn from_json(text: &str) -> Result<ModelWitness, SearchError> {
        let file: WitnessFile = serde_json::from_str(text).map_err(|e| SearchError::Witness(e.to_string()))?;
        let mut model = model_from_json(&file.model)?;
        let limits = Limits { stalk_cap: file.stalk_cap, ..Limits::default() };
        model.frame = Frame::with_limits(model.frame.class, model.frame.space.clone(), model.frame.dense.clone(), model.frame.domain, limits)?;
        Ok(ModelWitness { model, fails: file.fails, env: file.env, valid: file.valid })
    }

    /// Re-runs every check from scratch; `Err` describes the first mismatch.
    pub fn verify(&self) -> Result<(), SearchError> {
        let fails = Target::resolve(&self.fails)?;
        let refuted = match fails.statement.obligation()?.refuted_by(&self.model.frame, &self.model.valuation) {
            Err(ModelError::Unvalued(x)) => return Err(SearchError::Witness(format!("the model gives no value to `{x}`"))),
            r => r?,
        };
        match refuted {
            Some(env) if env == self.env => {}
            Some(env) => return Err(SearchError::Witness(format!("refuted under {env:?}, recorded {:?}", self.env))),
            None => return Err(SearchError::Witness(format!("`{}` is not refuted", self.fails))),
        }
        for c in &self.valid {
            let t = Target::resolve(&c.statement)?;
            let check = t.statement.check(&self.model.frame)?;
            if !check.holds {
                return Err(SearchError::Witness(format!("`{}` does not hold", c.statement)));
            }
            if check.valuations as u64 != c.valuations {
                return Err(SearchError::Witness(format!("`{}` checked {} valuations, recorded {}", c.statement, check.valuations, c.valuations)));
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let mut out = format!("model: {}\n", frame_label(&self.model.frame));
        out += &format!("refutes: {}\n", self.fails);
        for (name, pv) in &self.model.valuation {
            let vals: Vec<Json> = model_to_json(&self.model).valuation[name].values.clone();
            out += &format!("  {name} ({}, arity {}) := {}\n", pv.sort, pv.arity, Json::Array(vals));
        }
        if !self.env.is_empty() {
            out += &format!("  assignment: {:?}\n", self.env);
        }
        for c in &self.valid {
            out += &format!("validates: {} ({} valuations)\n", c.statement, c.valuations);
        }
        out
    }
}

/// A search that found nothing, with the frames it could not decide.
#[derive(Debug, Clone, PartialEq)]
pub struct Exhausted {
    pub frames: usize,
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Box<ModelWitness>),
    Exhausted(Exhausted),
}

/// The first frame, in [`frames`] order, refuting `fails` and validating
/// everything in `valid`.
pub fn find_countermodel(valid: &[Target], fails: &Target, bounds: &SearchBounds) -> Result<SearchOutcome, SearchError> {
    bounds.validate()?;
    let start = Instant::now();
    let fail_ob = fails.statement.obligation()?;
    let valid_obs = valid.iter().map(|t| t.statement.obligation()).collect::<Result<Vec<_>, _>>()?;
    let all = frames(bounds);
    let mut skipped = Vec::new();
    'frames: for fr in &all {
        if let Some(b) = bounds.budget {
            if start.elapsed() > b {
                return Err(SearchError::Budget(b));
            }
        }
        let check = match fail_ob.check(fr) {
            Ok(c) => c,
            Err(ModelError::TooManyValuations(..)) => {
                skipped.push(frame_label(fr));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let Some((valuation, env)) = check.counterexample else { continue };
        let mut certs = Vec::new();
        for (t, ob) in valid.iter().zip(&valid_obs) {
            match ob.check(fr) {
                Ok(c) if c.holds => certs.push(Certificate { statement: t.text.clone(), valuations: c.valuations as u64 }),
                Ok(_) => continue 'frames,
                Err(ModelError::TooManyValuations(..)) => {
                    skipped.push(frame_label(fr));
                    continue 'frames;
                }
                Err(e) => return Err(e.into()),
            }
        }
        let model = Model::new(fr.clone(), valuation)?;
        return Ok(SearchOutcome::Found(Box::new(ModelWitness { model, fails: fails.text.clone(), env, valid: certs })));
    }
    Ok(SearchOutcome::Exhausted(Exhausted { frames: all.len(), skipped }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_maps_on_sierpinski() {
        let s = FiniteSpace::sierpinski();
        let maps = dense_maps(&s, 2);
        // closure of {1} is everything, closure of {0} is {0}
        assert_eq!(maps, vec![
            DenseMap { s: 1, f: vec![1] },
            DenseMap { s: 2, f: vec![0, 1] },
            DenseMap { s: 2, f: vec![1, 1] },
        ]);
    }

    #[test]
    fn frame_counts() {
        let b = SearchBounds { max_points: 2, max_domain: 1, classes: vec![ModelClass::Interior], ..Default::default() };
        assert_eq!(frames(&b).len(), 1 + 3);
    }
}
