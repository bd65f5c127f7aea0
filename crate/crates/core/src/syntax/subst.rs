//! Simultaneous first- and second-order substitution.

use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, Sort, SyntaxError, Term};

/// `λx₁…xₙ. body`, the value substituted for an n-ary predicate variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abstraction {
    pub params: Vec<String>,
    pub body: Formula,
}

impl Abstraction {
    pub fn new(params: Vec<String>, body: Formula) -> Self {
        Abstraction { params, body }
    }

    /// A 0-ary abstraction.
    pub fn constant(body: Formula) -> Self {
        Abstraction { params: vec![], body }
    }

    /// Free individual variables of the body that are not parameters.
    pub fn free_indiv(&self) -> BTreeSet<String> {
        let mut fv = self.body.free_indiv();
        for p in &self.params {
            fv.remove(p);
        }
        fv
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    pub indiv: BTreeMap<String, Term>,
    pub preds: BTreeMap<String, Abstraction>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.indiv.is_empty() && self.preds.is_empty()
    }

    pub fn with_pred(mut self, name: &str, abs: Abstraction) -> Self {
        self.preds.insert(name.to_string(), abs);
        self
    }

    pub fn with_indiv(mut self, name: &str, t: Term) -> Self {
        self.indiv.insert(name.to_string(), t);
        self
    }

    /// Checks each predicate entry against the sort and arity at which the
    /// predicate occurs in `target`.
    pub fn check_against(&self, target: &Formula) -> Result<(), SyntaxError> {
        let decls = target.pred_decls();
        for (name, abs) in &self.preds {
            let distinct: BTreeSet<&String> = abs.params.iter().collect();
            if distinct.len() != abs.params.len() {
                return Err(SyntaxError::Substitution(format!(
                    "parameters of the abstraction for `{name}` are not distinct"
                )));
            }
            let body_sort = abs.body.check()?;
            if let Some((_, sort, arity)) = decls.iter().find(|(p, _, _)| p == name) {
                if *arity != abs.params.len() {
                    return Err(SyntaxError::Substitution(format!(
                        "`{name}` has arity {arity} but the abstraction binds {} parameters",
                        abs.params.len()
                    )));
                }
                if *sort != body_sort {
                    return Err(SyntaxError::Substitution(format!(
                        "`{name}` is a {} variable but is replaced by a {body_sort}-formula",
                        if *sort == Sort::I { "problem" } else { "proper" }
                    )));
                }
            }
        }
        Ok(())
    }

    /// The composite `self ∘ then`: `f[self][then]` equals `f[self.compose(then)]`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (x, t) in &self.indiv {
            out.indiv.insert(x.clone(), subst_term(t, then, true));
        }
        for (x, t) in &then.indiv {
            out.indiv.entry(x.clone()).or_insert_with(|| t.clone());
        }
        for (p, abs) in &self.preds {
            // Parameters are bound in the body and shielded from `then`.
            let mut inner = then.clone();
            for param in &abs.params {
                inner.indiv.remove(param);
            }
            let incoming = range_free(&inner, &abs.body, &abs.params);
            let mut params = abs.params.clone();
            let mut body = abs.body.clone();
            let mut avoid = incoming.clone();
            avoid.extend(body.all_indiv_names());
            let mut rename = Substitution::new();
            for param in params.iter_mut() {
                if incoming.contains(param) {
                    let fresh = fresh_name(param, &avoid);
                    avoid.insert(fresh.clone());
                    rename.indiv.insert(param.clone(), Term::Var(fresh.clone()));
                    *param = fresh;
                }
            }
            if !rename.is_empty() {
                body = apply_substitution(&body, &rename);
            }
            out.preds.insert(p.clone(), Abstraction { params, body: apply_substitution(&body, &inner) });
        }
        for (p, abs) in &then.preds {
            out.preds.entry(p.clone()).or_insert_with(|| abs.clone());
        }
        out
    }
}

/// Free variables that substituting `s` into `f` can introduce, ignoring
/// the free occurrences of the variables in `bound`.
fn range_free(s: &Substitution, f: &Formula, bound: &[String]) -> BTreeSet<String> {
    let (fv, fp) = f.free_vars();
    let mut out = BTreeSet::new();
    for x in fv.iter().filter(|x| !bound.contains(x)) {
        match s.indiv.get(x) {
            Some(t) => {
                let mut preds = BTreeSet::new();
                t.collect_free(&mut out, &mut preds);
            }
            None => {
                out.insert(x.clone());
            }
        }
    }
    for p in &fp {
        if let Some(abs) = s.preds.get(p) {
            out.extend(abs.free_indiv());
        }
    }
    out
}

/// Picks `base` with a numeric suffix, not in `avoid`: `x` becomes `x1`, `x2`, ...
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..).map(|i| format!("{stem}{i}")).find(|n| !avoid.contains(n)).unwrap()
}

/// Capture-avoiding simultaneous substitution.
pub fn apply_substitution(f: &Formula, s: &Substitution) -> Formula {
    subst(f, s, true)
}

/// Substitution that does not rename binders. Used only to diagnose scripts
/// that rely on variable capture.
pub fn apply_substitution_naive(f: &Formula, s: &Substitution) -> Formula {
    subst(f, s, false)
}

fn subst_term(t: &Term, s: &Substitution, avoid: bool) -> Term {
    match t {
        Term::Var(x) => s.indiv.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::Prime(t) => Term::Prime(Box::new(subst_term(t, s, avoid))),
        Term::App(a, b) => Term::App(Box::new(subst_term(a, s, avoid)), Box::new(subst_term(b, s, avoid))),
        Term::Star(f) => Term::Star(Box::new(subst(f, s, avoid))),
    }
}

fn subst(f: &Formula, s: &Substitution, avoid: bool) -> Formula {
    match f {
        Formula::Top | Formula::Bot | Formula::Triv | Formula::Absurd => f.clone(),
        Formula::Atom { pred, sort, args } => {
            let args: Vec<Term> = args.iter().map(|t| subst_term(t, s, avoid)).collect();
            match s.preds.get(pred) {
                Some(abs) if abs.params.len() == args.len() => {
                    let inst = Substitution {
                        indiv: abs.params.iter().cloned().zip(args).collect(),
                        preds: BTreeMap::new(),
                    };
                    subst(&abs.body, &inst, avoid)
                }
                _ => Formula::Atom { pred: pred.clone(), sort: *sort, args },
            }
        }
        Formula::And(a, b) => Formula::and(subst(a, s, avoid), subst(b, s, avoid)),
        Formula::Or(a, b) => Formula::or(subst(a, s, avoid), subst(b, s, avoid)),
        Formula::Imp(a, b) => Formula::imp(subst(a, s, avoid), subst(b, s, avoid)),
        Formula::Query(a) => Formula::query(subst(a, s, avoid)),
        Formula::Bang(a) => Formula::bang(subst(a, s, avoid)),
        Formula::ProofOf(t, a) => Formula::ProofOf(subst_term(t, s, avoid), Box::new(subst(a, s, avoid))),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let mut inner = s.clone();
            inner.indiv.remove(x);
            let mut binder = x.clone();
            if avoid {
                let incoming = range_free(&inner, body, std::slice::from_ref(x));
                if incoming.contains(x) {
                    let mut taken = incoming;
                    taken.extend(body.all_indiv_names());
                    taken.extend(body.free_indiv());
                    binder = fresh_name(x, &taken);
                    inner.indiv.insert(x.clone(), Term::Var(binder.clone()));
                }
            }
            let body = subst(body, &inner, avoid);
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(binder, body)
            } else {
                Formula::exists(binder, body)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_equal, parse_formula, Signature};

    fn sig() -> Signature {
        Signature::new()
            .problem("alpha", 0)
            .problem("beta", 0)
            .problem("gamma", 1)
            .problem("delta", 2)
            .pred("p", 0)
    }

    #[test]
    fn negated_instance_of_double_negation_elimination() {
        let s = sig();
        let law = parse_formula("~~alpha -> alpha", &s).unwrap();
        let sub = Substitution::new().with_pred("alpha", Abstraction::constant(parse_formula("~beta", &s).unwrap()));
        let got = apply_substitution(&law, &sub);
        assert_eq!(got, parse_formula("~~~beta -> ~beta", &s).unwrap());
    }

    #[test]
    fn empty_substitution_is_identity() {
        let f = parse_formula("forall x. gamma(x) -> exists y. delta(x, y)", &sig()).unwrap();
        assert_eq!(apply_substitution(&f, &Substitution::new()), f);
    }

    #[test]
    fn renames_bound_variable_to_avoid_capture() {
        let s = sig();
        let f = parse_formula("forall x. gamma(x)", &s).unwrap();
        let body = parse_formula("delta(x, z)", &s).unwrap();
        let sub = Substitution::new().with_pred("gamma", Abstraction::new(vec!["z".into()], body));
        let got = apply_substitution(&f, &sub);
        assert_eq!(crate::syntax::print_formula(&got), "forall x1. delta(x, x1)");
        let naive = apply_substitution_naive(&f, &sub);
        assert_eq!(crate::syntax::print_formula(&naive), "forall x. delta(x, x)");
    }

    #[test]
    fn individual_substitution_avoids_capture() {
        let s = sig();
        let f = parse_formula("forall y. delta(x, y)", &s).unwrap();
        let sub = Substitution::new().with_indiv("x", Term::var("y"));
        let got = apply_substitution(&f, &sub);
        assert!(alpha_equal(&got, &parse_formula("forall z. delta(y, z)", &s).unwrap()));
    }

    #[test]
    fn checks_sorts_and_arities() {
        let s = sig();
        let law = parse_formula("?!p -> p", &s).unwrap();
        let bad = Substitution::new().with_pred("p", Abstraction::constant(Formula::problem("alpha")));
        assert!(bad.check_against(&law).is_err());
        let bad_arity = Substitution::new().with_pred("p", Abstraction::new(vec!["x".into()], Formula::Top));
        assert!(bad_arity.check_against(&law).is_err());
        let good = Substitution::new().with_pred("p", Abstraction::constant(parse_formula("?alpha", &s).unwrap()));
        assert!(good.check_against(&law).is_ok());
    }
}
