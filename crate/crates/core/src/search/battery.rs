//! Exhaustive checks over every small frame: soundness of the calculus,
//! soundness of the translations, the commuting square, the catalog shadow
//! and the translation gaps.

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{frame_label, frames, Certificate, ModelWitness, SearchBounds, SearchError};
use crate::calculi::{builtin_system, theorem_corpus};
use crate::catalog::{claims, shadow};
use crate::models::{model_to_json, Frame, Model, ModelClass, ModelError, Obligation};
use crate::syntax::random::{profile, profile_signature, Generator};
use crate::syntax::{print_formula, Formula, Sort};
use crate::translations::{check_square, BoxVariant, NegNegVariant, Translation};

#[derive(Debug, Clone)]
pub struct Battery {
    pub name: String,
    pub checks: usize,
    /// Checks over the valuation cap.
    pub skipped: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl Battery {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Battery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "ok" } else { "FAILED" };
        write!(f, "{verdict} {}: {} checks, {} skipped, {} failures ({:.1?})", self.name, self.checks, self.skipped, self.failures.len(), self.elapsed)?;
        for x in self.failures.iter().take(10) {
            write!(f, "\n  {x}")?;
        }
        Ok(())
    }
}

/// Frames of one class with at most `points` points and `domain` individuals.
pub fn class_frames(class: ModelClass, points: usize, domain: usize) -> Vec<Frame> {
    frames(&SearchBounds { max_points: points, max_domain: domain, classes: vec![class], ..Default::default() })
}

/// Every labelled obligation on every frame.
pub fn check_all(name: &str, frames: &[Frame], items: &[(String, Obligation)]) -> Battery {
    let start = Instant::now();
    let results: Vec<(usize, usize, Vec<String>)> = frames
        .par_iter()
        .map(|fr| {
            let (mut checks, mut skipped, mut failures) = (0, 0, Vec::new());
            for (label, ob) in items {
                checks += 1;
                match ob.check(fr) {
                    Ok(c) if c.holds => {}
                    Ok(c) => {
                        let (val, env) = c.counterexample.unwrap_or_default();
                        let shown = Model::new(fr.clone(), val)
                            .ok()
                            .and_then(|m| serde_json::to_string(&model_to_json(&m).valuation).ok())
                            .unwrap_or_default();
                        failures.push(format!("{label} fails on {} under {shown} {env:?}", frame_label(fr)));
                    }
                    Err(ModelError::TooManyValuations(..)) => skipped += 1,
                    Err(e) => failures.push(format!("{label} on {}: {e}", frame_label(fr))),
                }
            }
            (checks, skipped, failures)
        })
        .collect();
    let mut out = Battery { name: name.into(), checks: 0, skipped: 0, failures: Vec::new(), elapsed: Duration::ZERO };
    for (c, s, f) in results {
        out.checks += c;
        out.skipped += s;
        out.failures.extend(f);
    }
    out.elapsed = start.elapsed();
    out
}

/// The laws and rules of the simplified presentation, each passed through `map`.
fn simplified_obligations(map: impl Fn(&Formula) -> Formula) -> Vec<(String, Obligation)> {
    let sys = builtin_system("QHC-simplified").expect("shipped system");
    let mut out = Vec::new();
    for l in &sys.laws {
        out.push((format!("law {}", l.name), Obligation::principle(&map(&l.formula)).expect("laws compile")));
    }
    for r in &sys.rules {
        let premises: Vec<Formula> = r.premises.iter().map(&map).collect();
        out.push((format!("rule {}", r.name), Obligation::rule(&premises, &map(&r.conclusion)).expect("rules compile")));
    }
    out
}

/// Every law and rule of the calculus on every frame of each class up to
/// the paired point count.
pub fn soundness(classes: &[(ModelClass, usize)], domain: usize) -> Battery {
    let items = simplified_obligations(Formula::clone);
    let frames: Vec<Frame> = classes.iter().flat_map(|&(c, n)| class_frames(c, n, domain)).collect();
    let bounds: Vec<String> = classes.iter().map(|(c, n)| format!("{c}<={n}")).collect();
    check_all(&format!("soundness [{}] domain<={domain}", bounds.join(" ")), &frames, &items)
}

/// Box translations on interior frames (their c-side is a topological
/// model of the modal logic), double-negation translations on interior
/// frames (their i-side is the Heyting algebra of opens), and the `∇`- and
/// `◇`-translations on every class.
pub fn translation_soundness(modal_points: usize, qhc_points: usize, domain: usize) -> Vec<Battery> {
    let interior = class_frames(ModelClass::Interior, modal_points, domain);
    let all: Vec<Frame> = ModelClass::ALL.iter().flat_map(|&c| class_frames(c, qhc_points, domain)).collect();
    let mut out = Vec::new();
    let modal = [
        Translation::Box(BoxVariant::Canonical),
        Translation::Box(BoxVariant::Optimized),
        Translation::Box(BoxVariant::Godel),
        Translation::NegNeg(NegNegVariant::Canonical),
        Translation::NegNeg(NegNegVariant::Optimized),
        Translation::NegNeg(NegNegVariant::Kuroda),
    ];
    for t in modal {
        let items = simplified_obligations(|f| t.apply(f));
        out.push(check_all(&format!("{t} on interior<={modal_points}"), &interior, &items));
    }
    for economical in [false, true] {
        for t in [Translation::Nabla { economical }, Translation::Diamond { economical }] {
            let items = simplified_obligations(|f| t.apply(f));
            out.push(check_all(&format!("{t} on all classes<={qhc_points}"), &all, &items));
        }
    }
    out
}

/// The square on the pure intuitionistic corpus entries and on `random`
/// seeded formulas, under both pairings.
pub fn square(random: usize, seed: u64) -> Battery {
    let start = Instant::now();
    let mut formulas: Vec<Formula> = Vec::new();
    for e in theorem_corpus() {
        for f in e.premises.iter().chain([&e.conclusion]) {
            if f.is_pure(Sort::I) {
                formulas.push(f.clone());
            }
        }
    }
    let sig = profile_signature(profile("qh").expect("profile"));
    let gen = Generator { sig: &sig, quantifiers: true };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..random {
        formulas.push(gen.formula(&mut rng, Sort::I, 1 + i % 5));
    }
    let mut out = Battery { name: format!("square ({random} random, seed {seed})"), checks: 0, skipped: 0, failures: Vec::new(), elapsed: Duration::ZERO };
    for f in &formulas {
        for economical in [false, true] {
            out.checks += 1;
            if !check_square(f, economical) {
                out.failures.push(format!("{} (economical={economical})", print_formula(f)));
            }
        }
    }
    out.elapsed = start.elapsed();
    out
}

/// The claims manifest against every frame within `bounds`.
pub fn shadow_battery(bounds: &SearchBounds) -> Result<Battery, SearchError> {
    bounds.validate()?;
    let start = Instant::now();
    let set = claims();
    let all = frames(bounds);
    let results: Vec<Result<(Frame, crate::catalog::Shadow), ModelError>> =
        all.into_par_iter().map(|fr| shadow(&fr, set).map(|s| (fr, s))).collect();
    let mut out = Battery { name: format!("catalog shadow ({bounds})"), checks: 0, skipped: 0, failures: Vec::new(), elapsed: Duration::ZERO };
    for r in results {
        let (fr, s) = r?;
        out.checks += s.claims_checked;
        out.skipped += s.undecided.len();
        for d in s.discrepancies {
            out.failures.push(format!("{} on {}: {}", d.claim, frame_label(&fr), d.detail));
        }
    }
    out.elapsed = start.elapsed();
    Ok(out)
}

/// The three one-premise rules that fail for the `∇`- and `◇`-translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gap {
    /// `A / A_∇`
    IntoNabla,
    /// `A_∇ / A`
    OutOfNabla,
    /// `A / A_◇`
    IntoDiamond,
}

impl Gap {
    pub const ALL: [Gap; 3] = [Gap::IntoNabla, Gap::OutOfNabla, Gap::IntoDiamond];

    pub fn name(self) -> &'static str {
        match self {
            Gap::IntoNabla => "into-nabla",
            Gap::OutOfNabla => "out-of-nabla",
            Gap::IntoDiamond => "into-diamond",
        }
    }

    fn rule(self, a: &Formula) -> (Formula, Formula) {
        let nabla = Translation::Nabla { economical: false };
        match self {
            Gap::IntoNabla => (a.clone(), nabla.apply(a)),
            Gap::OutOfNabla => (nabla.apply(a), a.clone()),
            Gap::IntoDiamond => (a.clone(), Translation::Diamond { economical: false }.apply(a)),
        }
    }

    /// `◇` only touches c-formulas, so its candidates are classical.
    fn atoms(self) -> Vec<Formula> {
        match self {
            Gap::IntoDiamond => vec![Formula::prop("p"), Formula::prop("q")],
            _ => vec![Formula::problem("alpha"), Formula::problem("beta")],
        }
    }
}

/// Propositional formulas over `atoms` built with `∧ ∨ → ¬`, grouped by
/// node count.
pub fn formulas_by_size(atoms: &[Formula], max: usize) -> Vec<Vec<Formula>> {
    let mut out: Vec<Vec<Formula>> = vec![Vec::new(), atoms.to_vec()];
    for n in 2..=max {
        let mut layer: Vec<Formula> = out[n - 1].iter().map(|a| Formula::not(a.clone())).collect();
        for k in 1..n - 1 {
            for a in &out[k] {
                for b in &out[n - 1 - k] {
                    layer.push(Formula::and(a.clone(), b.clone()));
                    layer.push(Formula::or(a.clone(), b.clone()));
                    layer.push(Formula::imp(a.clone(), b.clone()));
                }
            }
        }
        out.push(layer);
    }
    out
}

/// A refutation of the gap rule on a frame with as few points as possible,
/// by the smallest formula there.
pub fn find_gap(gap: Gap, max_size: usize, bounds: &SearchBounds) -> Result<Option<ModelWitness>, SearchError> {
    bounds.validate()?;
    let layers = formulas_by_size(&gap.atoms(), max_size);
    let all = frames(bounds);
    for n in 1..=bounds.max_points {
        let here: Vec<&Frame> = all.iter().filter(|fr| fr.space.len() == n).collect();
        for a in layers.iter().flatten() {
            let (p, c) = gap.rule(a);
            let ob = Obligation::rule(std::slice::from_ref(&p), &c)?;
            for fr in &here {
                let check = match ob.check(fr) {
                    Ok(c) => c,
                    Err(ModelError::TooManyValuations(..)) => continue,
                    Err(e) => return Err(e.into()),
                };
                if let Some((valuation, env)) = check.counterexample {
                    let model = Model::new((*fr).clone(), valuation)?;
                    let fails = format!("{} / {}", print_formula(&p), print_formula(&c));
                    return Ok(Some(ModelWitness { model, fails, env, valid: Vec::<Certificate>::new() }));
                }
            }
        }
    }
    Ok(None)
}
