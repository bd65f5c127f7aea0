use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use super::script::{parse_script, Justification, LemmaDecl, Mode, ProofScript, ScriptError};
use super::{match_instances, rule_text, DerivationSystem, FailureCode, Law, Rule, Verdict};
use crate::syntax::{
    alpha_equal, apply_substitution, apply_substitution_naive, print_formula, Formula, SyntaxError, Substitution,
};

/// Supplies derivation systems by name and lemma scripts by path.
pub trait ScriptLoader {
    fn system(&self, name: &str) -> Option<DerivationSystem>;
    fn load(&self, path: &str) -> Option<String>;
}

/// True iff `apply_substitution(law, s)` is alpha-equal to `candidate`.
pub fn instance_of_law(candidate: &Formula, law: &Formula, s: &Substitution) -> Result<bool, SyntaxError> {
    s.check_against(law)?;
    Ok(alpha_equal(&apply_substitution(law, s), candidate))
}

pub fn check_proof(script: &ProofScript, env: &dyn ScriptLoader) -> Verdict {
    Checker::new(env).check(script)
}

/// Checks a rule-derivation script establishing `·P₁, …, ·Pₙ ⊢ ·G`: the
/// premise principles must be exactly the script's premise rules.
pub fn check_principle_from_principles(
    premises: &[Formula],
    goal: &Formula,
    script: &ProofScript,
    env: &dyn ScriptLoader,
) -> Verdict {
    if script.mode != Mode::RuleDerivation || !script.goal_premises.is_empty() || !alpha_equal(&script.goal, goal) {
        return Verdict::reject(None, FailureCode::GoalMismatch, "script does not derive the requested principle");
    }
    let stated = &script.premise_rules;
    let same = stated.len() == premises.len()
        && stated.iter().zip(premises).all(|(r, p)| r.premises.is_empty() && alpha_equal(&r.conclusion, p));
    if !same {
        return Verdict::reject(None, FailureCode::GoalMismatch, "premise principles differ from the script's");
    }
    check_proof(script, env)
}

/// A cited statement: a law (no premises) or a rule.
#[derive(Clone)]
struct Citable {
    premises: Vec<Formula>,
    conclusion: Formula,
    mp: bool,
}

impl Citable {
    fn schematic(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut indiv = BTreeSet::new();
        let mut preds = BTreeSet::new();
        for f in self.premises.iter().chain(std::iter::once(&self.conclusion)) {
            let (i, p) = f.free_vars();
            indiv.extend(i);
            preds.extend(p);
        }
        (indiv, preds)
    }
}

impl From<&Law> for Citable {
    fn from(l: &Law) -> Self {
        Citable { premises: vec![], conclusion: l.formula.clone(), mp: false }
    }
}

impl From<&Rule> for Citable {
    fn from(r: &Rule) -> Self {
        Citable { premises: r.premises.clone(), conclusion: r.conclusion.clone(), mp: r.mp }
    }
}

pub struct Checker<'a> {
    env: &'a dyn ScriptLoader,
    active: RefCell<Vec<String>>,
    lemma_cache: RefCell<HashMap<String, Result<(String, Vec<Formula>, Formula), String>>>,
}

struct Line {
    number: usize,
    formula: Formula,
    deps: BTreeSet<usize>,
}

impl<'a> Checker<'a> {
    pub fn new(env: &'a dyn ScriptLoader) -> Self {
        Checker { env, active: RefCell::new(Vec::new()), lemma_cache: RefCell::new(HashMap::new()) }
    }

    /// Parses and checks script text. An unknown system is a rejection, not a
    /// format error.
    pub fn check_text(&self, text: &str) -> Result<Verdict, ScriptError> {
        let sig_of = |name: &str| self.env.system(name).map(|s| s.signature);
        match parse_script(text, &sig_of) {
            Ok(script) => Ok(self.check(&script)),
            Err(ScriptError::UnknownSystem(name)) => {
                Ok(Verdict::reject(None, FailureCode::WrongSystem, format!("unknown system `{name}`")))
            }
            Err(e) => Err(e),
        }
    }

    /// Checks the lemma script at `path` and returns its system and the
    /// statement it establishes as a law or rule.
    fn lemma(&self, path: &str) -> Result<(String, Vec<Formula>, Formula), String> {
        if let Some(hit) = self.lemma_cache.borrow().get(path) {
            return hit.clone();
        }
        if self.active.borrow().iter().any(|p| p == path) {
            return Err(format!("lemma `{path}` is cited in a cycle"));
        }
        let result = (|| {
            let text = self.env.load(path).ok_or_else(|| format!("lemma script `{path}` not found"))?;
            self.active.borrow_mut().push(path.to_string());
            let checked = self.check_text(&text);
            self.active.borrow_mut().pop();
            let verdict = checked.map_err(|e| format!("lemma `{path}`: {e}"))?;
            if !verdict.accepted {
                return Err(format!("lemma `{path}` is not accepted: {verdict}"));
            }
            let sig_of = |name: &str| self.env.system(name).map(|s| s.signature);
            let script = parse_script(&text, &sig_of).map_err(|e| e.to_string())?;
            match script.mode {
                Mode::Theorem => Ok((script.system, vec![], script.goal)),
                Mode::RuleDerivation if script.premise_rules.is_empty() => {
                    Ok((script.system, script.goal_premises, script.goal))
                }
                _ => Err(format!("lemma `{path}` does not establish an unconditional law or rule")),
            }
        })();
        self.lemma_cache.borrow_mut().insert(path.to_string(), result.clone());
        result
    }

    fn resolve_lemma(&self, decl: &LemmaDecl, system: &DerivationSystem) -> Result<Citable, Verdict> {
        let (lemma_system, premises, conclusion) =
            self.lemma(&decl.path).map_err(|m| Verdict::reject(None, FailureCode::BadReference, m))?;
        let Some(ls) = self.env.system(&lemma_system) else {
            return Err(Verdict::reject(None, FailureCode::WrongSystem, format!("unknown system `{lemma_system}`")));
        };
        if !system.contains(&ls) {
            return Err(Verdict::reject(
                None,
                FailureCode::WrongSystem,
                format!("lemma `{}` is proved in {lemma_system}, which is not part of {}", decl.name, system.name),
            ));
        }
        let same = premises.len() == decl.premises.len()
            && premises.iter().zip(&decl.premises).all(|(a, b)| alpha_equal(a, b))
            && alpha_equal(&conclusion, &decl.conclusion);
        if !same {
            return Err(Verdict::reject(
                None,
                FailureCode::BadReference,
                format!("lemma `{}` states {} but `{}` proves {}", decl.name, rule_text(&decl.premises, &decl.conclusion), decl.path, rule_text(&premises, &conclusion)),
            ));
        }
        Ok(Citable { premises: decl.premises.clone(), conclusion: decl.conclusion.clone(), mp: false })
    }

    pub fn check(&self, script: &ProofScript) -> Verdict {
        let Some(system) = self.env.system(&script.system) else {
            return Verdict::reject(None, FailureCode::WrongSystem, format!("unknown system `{}`", script.system));
        };

        let mut citable: HashMap<String, Citable> = HashMap::new();
        for l in &system.laws {
            citable.insert(l.name.clone(), l.into());
        }
        for r in &system.rules {
            citable.insert(r.name.clone(), r.into());
        }
        for decl in &script.lemmas {
            match self.resolve_lemma(decl, &system) {
                Ok(c) => {
                    citable.insert(decl.name.clone(), c);
                }
                Err(v) => return v,
            }
        }
        for r in &script.premise_rules {
            if script.mode != Mode::RuleDerivation {
                return Verdict::reject(None, FailureCode::BadReference, "premise rules need `mode rule-derivation`");
            }
            citable.insert(r.name.clone(), Citable { premises: r.premises.clone(), conclusion: r.conclusion.clone(), mp: false });
        }

        if script.mode == Mode::RuleDerivation {
            for x in &script.eigen {
                for r in &script.premise_rules {
                    let occurs = r.premises.iter().chain(std::iter::once(&r.conclusion)).any(|f| {
                        let (i, p) = f.free_vars();
                        i.contains(x) || p.contains(x)
                    });
                    if occurs {
                        return Verdict::reject(
                            None,
                            FailureCode::EigenNotFresh,
                            format!("eigenvariable `{x}` occurs in premise rule `{}`", r.name),
                        );
                    }
                }
            }
            let goal_preds: BTreeSet<String> = script
                .goal_premises
                .iter()
                .chain(std::iter::once(&script.goal))
                .flat_map(|f| f.free_preds())
                .collect();
            if let Some(p) = goal_preds.iter().find(|p| !script.eigen.contains(p)) {
                return Verdict::reject(
                    None,
                    FailureCode::EigenNotFresh,
                    format!("goal predicate variable `{p}` is not declared in `eigen:`"),
                );
            }
        }

        let mut done: Vec<Line> = Vec::new();
        for line in &script.lines {
            let n = line.number;
            let f = &line.formula;
            let lookup = |k: usize| done.iter().find(|l| l.number == k);
            let reject = |code, msg: String| Verdict::reject(Some(n), code, msg);

            let deps: BTreeSet<usize> = match &line.just {
                Justification::Law { name, subst } => {
                    let Some(c) = citable.get(name) else {
                        return reject(FailureCode::WrongSystem, format!("no law `{name}` in {}", system.name));
                    };
                    if !c.premises.is_empty() {
                        return reject(FailureCode::BadReference, format!("`{name}` is a rule, not a law"));
                    }
                    if let Err(v) = instance(n, c, &[], f, subst.as_ref()) {
                        return v;
                    }
                    BTreeSet::new()
                }
                Justification::Hyp(k) => {
                    let stated = match script.mode {
                        Mode::Hypotheses => script.hyps.iter().find(|(i, _)| i == k).map(|(_, h)| h),
                        Mode::RuleDerivation => k.checked_sub(1).and_then(|i| script.goal_premises.get(i)),
                        Mode::Theorem => None,
                    };
                    let Some(h) = stated else {
                        return reject(FailureCode::BadReference, format!("no hypothesis {k}"));
                    };
                    if !alpha_equal(h, f) {
                        return reject(
                            FailureCode::BadInstance,
                            format!("hypothesis {k} is {} and is used verbatim only", print_formula(h)),
                        );
                    }
                    BTreeSet::from([*k])
                }
                Justification::Rule { name, from, subst } => {
                    let Some(c) = citable.get(name) else {
                        return reject(FailureCode::WrongSystem, format!("no rule `{name}` in {}", system.name));
                    };
                    if c.premises.len() != from.len() {
                        return reject(
                            FailureCode::BadReference,
                            format!("`{name}` takes {} premises, {} given", c.premises.len(), from.len()),
                        );
                    }
                    let mut prem = Vec::new();
                    for k in from {
                        match lookup(*k) {
                            Some(l) => prem.push(l),
                            None => return reject(FailureCode::BadReference, format!("line {k} is not an earlier line")),
                        }
                    }
                    let forms: Vec<&Formula> = prem.iter().map(|l| &l.formula).collect();
                    if let Err(v) = instance(n, c, &forms, f, subst.as_ref()) {
                        return v;
                    }
                    let deps: BTreeSet<usize> = prem.iter().flat_map(|l| l.deps.iter().copied()).collect();
                    if !deps.is_empty() && script.mode == Mode::Hypotheses && !c.mp {
                        return reject(FailureCode::RuleOnHyp, format!("rule `{name}` applied to a line depending on hypotheses"));
                    }
                    deps
                }
                Justification::Mp(i, j) => {
                    let (Some(a), Some(b)) = (lookup(*i), lookup(*j)) else {
                        return reject(FailureCode::BadReference, format!("mp cites a line that is not earlier than {n}"));
                    };
                    let Some(rule) = system.rules.iter().find(|r| r.mp && r.conclusion.sort() == f.sort()) else {
                        return reject(FailureCode::WrongSystem, format!("{} has no modus ponens for {}-formulas", system.name, f.sort()));
                    };
                    let c = Citable::from(rule);
                    let ok = instance(n, &c, &[&a.formula, &b.formula], f, None).is_ok()
                        || instance(n, &c, &[&b.formula, &a.formula], f, None).is_ok();
                    if !ok {
                        return reject(FailureCode::BadInstance, format!("line {n} does not follow by modus ponens from {i} and {j}"));
                    }
                    a.deps.union(&b.deps).copied().collect()
                }
                Justification::Gen { var, from } => {
                    let Some(prev) = lookup(*from) else {
                        return reject(FailureCode::BadReference, format!("line {from} is not an earlier line"));
                    };
                    if !alpha_equal(f, &Formula::forall(var.clone(), prev.formula.clone())) {
                        return reject(FailureCode::BadInstance, format!("line {n} is not forall {var} of line {from}"));
                    }
                    if script.mode == Mode::Hypotheses {
                        for k in &prev.deps {
                            if let Some((_, h)) = script.hyps.iter().find(|(i, _)| i == k) {
                                if h.free_indiv().contains(var) {
                                    return reject(FailureCode::GenOnHypVar, format!("`{var}` is free in hypothesis {k}"));
                                }
                            }
                        }
                    }
                    prev.deps.clone()
                }
            };
            done.push(Line { number: n, formula: f.clone(), deps });
        }

        let Some(last) = done.iter().find(|l| l.number == script.qed) else {
            return Verdict::reject(None, FailureCode::BadReference, format!("qed cites missing line {}", script.qed));
        };
        if !alpha_equal(&last.formula, &script.goal) {
            return Verdict::reject(
                Some(script.qed),
                FailureCode::GoalMismatch,
                format!("line {} is {}, goal is {}", script.qed, print_formula(&last.formula), print_formula(&script.goal)),
            );
        }
        if script.mode == Mode::Theorem && !last.deps.is_empty() {
            return Verdict::reject(Some(script.qed), FailureCode::GoalMismatch, "theorem depends on hypotheses");
        }

        let goal = rule_text(&script.goal_premises, &script.goal);
        let judgment = match script.mode {
            Mode::Theorem => format!("|- {goal}"),
            Mode::Hypotheses => {
                let hs: Vec<String> = script.hyps.iter().map(|(_, h)| print_formula(h)).collect();
                format!("{} |- {goal}", hs.join(", "))
            }
            Mode::RuleDerivation => {
                let rs: Vec<String> = script.premise_rules.iter().map(|r| rule_text(&r.premises, &r.conclusion)).collect();
                format!("{} |- {goal}", rs.join("; "))
            }
        };
        Verdict::accept(format!("{} {judgment}", script.system).trim().to_string())
    }
}

/// Checks that `premises / conclusion` is an instance of the citable `c`
/// under one shared substitution (stated, or found by matching).
fn instance(
    line: usize,
    c: &Citable,
    premises: &[&Formula],
    conclusion: &Formula,
    stated: Option<&Substitution>,
) -> Result<(), Verdict> {
    let mut pairs: Vec<(&Formula, &Formula)> = c.premises.iter().zip(premises.iter().copied()).collect();
    pairs.push((&c.conclusion, conclusion));
    let holds = |s: &Substitution, naive: bool| {
        pairs.iter().all(|(schema, actual)| {
            let inst = if naive { apply_substitution_naive(schema, s) } else { apply_substitution(schema, s) };
            alpha_equal(&inst, actual)
        })
    };
    match stated {
        Some(s) => {
            for (schema, _) in &pairs {
                if let Err(e) = s.check_against(schema) {
                    return Err(Verdict::reject(Some(line), FailureCode::BadInstance, e.to_string()));
                }
            }
            if holds(s, false) {
                Ok(())
            } else if holds(s, true) {
                Err(Verdict::reject(Some(line), FailureCode::Capture, "the stated instance only arises by variable capture"))
            } else {
                Err(Verdict::reject(Some(line), FailureCode::BadInstance, "not the stated substitution instance"))
            }
        }
        None => {
            let (indiv, preds) = c.schematic();
            match match_instances(&pairs, &preds, &indiv) {
                Some(s) if holds(&s, false) => Ok(()),
                _ => Err(Verdict::reject(Some(line), FailureCode::BadInstance, "not an instance of the cited law or rule")),
            }
        }
    }
}
