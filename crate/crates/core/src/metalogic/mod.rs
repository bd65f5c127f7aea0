//! Meta-formulas, derivation systems and the proof-script checker.
//!
//! A law stands for the principle `⩕²⩕¹G` and may be used through any
//! substitution instance. A rule `F₁..Fₘ / G` stands for
//! `⩕²(⩕¹F₁ ⋏ … ⋏ ⩕¹Fₘ ⇒ ⩕¹G)`. Hypotheses are used verbatim.

mod kernel;
mod matcher;
mod script;

pub use kernel::{check_principle_from_principles, check_proof, instance_of_law, Checker, ScriptLoader};
pub use matcher::match_instances;
pub use script::{parse_script, Justification, Mode, PremiseRule, ProofLine, ProofScript, ScriptError};

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::syntax::{print_formula, Formula, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetaFormula {
    Lift(Formula),
    And(Box<MetaFormula>, Box<MetaFormula>),
    Imp(Box<MetaFormula>, Box<MetaFormula>),
    ForallIndiv(String, Box<MetaFormula>),
    ForallPred(String, Box<MetaFormula>),
}

impl MetaFormula {
    fn free(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        match self {
            MetaFormula::Lift(f) => f.free_vars(),
            MetaFormula::And(a, b) | MetaFormula::Imp(a, b) => {
                let (mut i, mut p) = a.free();
                let (i2, p2) = b.free();
                i.extend(i2);
                p.extend(p2);
                (i, p)
            }
            MetaFormula::ForallIndiv(x, m) => {
                let (mut i, p) = m.free();
                i.remove(x);
                (i, p)
            }
            MetaFormula::ForallPred(x, m) => {
                let (i, mut p) = m.free();
                p.remove(x);
                (i, p)
            }
        }
    }

    /// `⩕¹`: closes over the free individual variables.
    pub fn closure1(self) -> MetaFormula {
        let vars = self.free().0;
        vars.into_iter().rev().fold(self, |m, x| MetaFormula::ForallIndiv(x, Box::new(m)))
    }

    /// `⩕²`: closes over the free predicate variables.
    pub fn closure2(self) -> MetaFormula {
        let vars = self.free().1;
        vars.into_iter().rev().fold(self, |m, p| MetaFormula::ForallPred(p, Box::new(m)))
    }

    pub fn principle(g: &Formula) -> MetaFormula {
        MetaFormula::Lift(g.clone()).closure1().closure2()
    }

    pub fn rule(premises: &[Formula], conclusion: &Formula) -> MetaFormula {
        let concl = MetaFormula::Lift(conclusion.clone()).closure1();
        let body = match premises.split_first() {
            None => concl,
            Some((first, rest)) => {
                let ante = rest.iter().fold(MetaFormula::Lift(first.clone()).closure1(), |acc, f| {
                    MetaFormula::And(Box::new(acc), Box::new(MetaFormula::Lift(f.clone()).closure1()))
                });
                MetaFormula::Imp(Box::new(ante), Box::new(concl))
            }
        };
        body.closure2()
    }

    pub fn is_closed(&self) -> bool {
        let (i, p) = self.free();
        i.is_empty() && p.is_empty()
    }
}

impl fmt::Display for MetaFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaFormula::Lift(g) => write!(f, "{}", print_formula(g)),
            MetaFormula::And(a, b) => write!(f, "({a} ⋏ {b})"),
            MetaFormula::Imp(a, b) => write!(f, "({a} ⇒ {b})"),
            MetaFormula::ForallIndiv(x, m) => write!(f, "⩕{x}. {m}"),
            MetaFormula::ForallPred(p, m) => write!(f, "⩕{p}. {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Law {
    pub name: String,
    pub formula: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    /// Modus ponens may be applied to lines that depend on hypotheses.
    pub mp: bool,
}

impl Rule {
    pub fn statement(&self) -> String {
        rule_text(&self.premises, &self.conclusion)
    }
}

pub(crate) fn rule_text(premises: &[Formula], conclusion: &Formula) -> String {
    if premises.is_empty() {
        print_formula(conclusion)
    } else {
        let ps: Vec<String> = premises.iter().map(print_formula).collect();
        format!("{} / {}", ps.join(", "), print_formula(conclusion))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationSystem {
    pub name: String,
    pub signature: Signature,
    pub laws: Vec<Law>,
    pub rules: Vec<Rule>,
}

impl DerivationSystem {
    pub fn law(&self, name: &str) -> Option<&Law> {
        self.laws.iter().find(|l| l.name == name)
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// The system as a meta-conjunction of principles and rules.
    pub fn meta_formula(&self) -> Option<MetaFormula> {
        let laws = self.laws.iter().map(|l| MetaFormula::principle(&l.formula));
        let rules = self.rules.iter().map(|r| MetaFormula::rule(&r.premises, &r.conclusion));
        laws.chain(rules).reduce(|a, b| MetaFormula::And(Box::new(a), Box::new(b)))
    }

    /// Every law and rule of `other` is present here under the same name and statement.
    pub fn contains(&self, other: &DerivationSystem) -> bool {
        use crate::syntax::alpha_equal;
        other.laws.iter().all(|l| self.law(&l.name).is_some_and(|m| alpha_equal(&m.formula, &l.formula)))
            && other.rules.iter().all(|r| {
                self.rule(&r.name).is_some_and(|s| {
                    s.premises.len() == r.premises.len()
                        && s.premises.iter().zip(&r.premises).all(|(a, b)| alpha_equal(a, b))
                        && alpha_equal(&s.conclusion, &r.conclusion)
                })
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FailureCode {
    BadInstance,
    Capture,
    GenOnHypVar,
    EigenNotFresh,
    WrongSystem,
    GoalMismatch,
    BadReference,
    RuleOnHyp,
}

impl fmt::Display for FailureCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailureCode::BadInstance => "BAD_INSTANCE",
            FailureCode::Capture => "CAPTURE",
            FailureCode::GenOnHypVar => "GEN_ON_HYP_VAR",
            FailureCode::EigenNotFresh => "EIGEN_NOT_FRESH",
            FailureCode::WrongSystem => "WRONG_SYSTEM",
            FailureCode::GoalMismatch => "GOAL_MISMATCH",
            FailureCode::BadReference => "BAD_REFERENCE",
            FailureCode::RuleOnHyp => "RULE_ON_HYP",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Line number in the script's numbering; `None` for header-level failures.
    pub line: Option<usize>,
    pub code: FailureCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub accepted: bool,
    /// The established judgment, e.g. `⊢ ?!p -> p` or `R1, R2 ⊢ F / G`.
    pub judgment: Option<String>,
    pub failure: Option<Failure>,
}

impl Verdict {
    pub fn accept(judgment: String) -> Verdict {
        Verdict { accepted: true, judgment: Some(judgment), failure: None }
    }

    pub fn reject(line: Option<usize>, code: FailureCode, message: impl Into<String>) -> Verdict {
        Verdict { accepted: false, judgment: None, failure: Some(Failure { line, code, message: message.into() }) }
    }

    pub fn code(&self) -> Option<FailureCode> {
        self.failure.as_ref().map(|f| f.code)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.judgment, &self.failure) {
            (Some(j), _) => write!(f, "accepted: {j}"),
            (_, Some(fail)) => match fail.line {
                Some(n) => write!(f, "rejected at line {n}: {} ({})", fail.code, fail.message),
                None => write!(f, "rejected: {} ({})", fail.code, fail.message),
            },
            _ => write!(f, "rejected"),
        }
    }
}

pub fn rule_text_pub(premises: &[Formula], conclusion: &Formula) -> String {
    rule_text(premises, conclusion)
}

pub fn split_top_pub(s: &str, sep: char) -> Vec<&str> {
    script::split_top(s, sep)
}
