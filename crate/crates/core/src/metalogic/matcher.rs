//! Proposes substitutions for law and rule citations that omit `with`.
//!
//! Predicate variables are solved as higher-order patterns: an occurrence
//! whose arguments are distinct variables is abstracted from the candidate.
//! Occurrences that cannot be solved yet are retried once other variables
//! are known. The kernel re-verifies every proposal, so this only has to be
//! useful, not complete.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{apply_substitution, fresh_name, Abstraction, Formula, Substitution, Term};

const PLACEHOLDER: char = '?';

fn rename_term(t: &Term, stack: &[(String, String)], free: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(x) => match stack.iter().rev().find(|(old, _)| old == x) {
            Some((_, new)) => Term::Var(new.clone()),
            None if free.contains(x) => Term::Var(format!("{PLACEHOLDER}{x}")),
            None => t.clone(),
        },
        Term::Prime(a) => Term::Prime(Box::new(rename_term(a, stack, free))),
        Term::App(a, b) => Term::App(Box::new(rename_term(a, stack, free)), Box::new(rename_term(b, stack, free))),
        Term::Star(f) => Term::Star(Box::new(rename(f, &mut stack.to_vec(), free, &mut 0))),
    }
}

/// Renames bound variables to `#k` and free schematic variables to `?x`, so
/// that instantiated candidate material can never clash with pattern names.
fn rename(f: &Formula, stack: &mut Vec<(String, String)>, free: &BTreeSet<String>, counter: &mut usize) -> Formula {
    use Formula::*;
    match f {
        Top | Bot | Triv | Absurd => f.clone(),
        Atom { pred, sort, args } => Atom {
            pred: pred.clone(),
            sort: *sort,
            args: args.iter().map(|t| rename_term(t, stack, free)).collect(),
        },
        And(a, b) => Formula::and(rename(a, stack, free, counter), rename(b, stack, free, counter)),
        Or(a, b) => Formula::or(rename(a, stack, free, counter), rename(b, stack, free, counter)),
        Imp(a, b) => Formula::imp(rename(a, stack, free, counter), rename(b, stack, free, counter)),
        Forall(x, a) | Exists(x, a) => {
            let fresh = format!("#{counter}");
            *counter += 1;
            stack.push((x.clone(), fresh.clone()));
            let body = rename(a, stack, free, counter);
            stack.pop();
            if matches!(f, Forall(..)) {
                Formula::forall(fresh, body)
            } else {
                Formula::exists(fresh, body)
            }
        }
        Query(a) => Formula::query(rename(a, stack, free, counter)),
        Bang(a) => Formula::bang(rename(a, stack, free, counter)),
        ProofOf(t, a) => ProofOf(rename_term(t, stack, free), Box::new(rename(a, stack, free, counter))),
    }
}

fn depth(stack: &[String], x: &str) -> Option<usize> {
    stack.iter().rev().position(|y| y == x)
}

fn term_vars(t: &Term, out: &mut BTreeSet<String>) {
    let mut preds = BTreeSet::new();
    t.collect_free(out, &mut preds);
}

#[derive(Clone)]
struct Pending {
    pattern: Formula,
    cand: Formula,
    ps: Vec<String>,
    cs: Vec<String>,
}

struct State<'a> {
    metas: &'a BTreeSet<String>,
    preds: BTreeMap<String, Abstraction>,
    indiv: BTreeMap<String, Term>,
    pending: Vec<Pending>,
}

impl State<'_> {
    fn term(&mut self, p: &Term, c: &Term, ps: &mut Vec<String>, cs: &mut Vec<String>, literal: bool) -> bool {
        match (p, c) {
            (Term::Var(x), _) if depth(ps, x).is_some() => {
                matches!(c, Term::Var(y) if depth(cs, y) == depth(ps, x))
            }
            (Term::Var(x), _) if x.starts_with(PLACEHOLDER) => {
                let mut vars = BTreeSet::new();
                term_vars(c, &mut vars);
                if vars.iter().any(|v| depth(cs, v).is_some()) {
                    return false;
                }
                match self.indiv.get(x) {
                    Some(t) => t == c,
                    None => {
                        self.indiv.insert(x.clone(), c.clone());
                        true
                    }
                }
            }
            (Term::Var(x), Term::Var(y)) => x == y && depth(cs, y).is_none(),
            (Term::Prime(a), Term::Prime(b)) => self.term(a, b, ps, cs, literal),
            (Term::App(a1, b1), Term::App(a2, b2)) => self.term(a1, a2, ps, cs, literal) && self.term(b1, b2, ps, cs, literal),
            (Term::Star(f), Term::Star(g)) => self.formula(f, g, ps, cs, literal),
            _ => false,
        }
    }

    /// Candidate-side variable names for the arguments of a schematic atom,
    /// or `None` if they are not yet determined.
    fn resolve_args(&self, args: &[Term], ps: &[String], cs: &[String]) -> Option<Vec<String>> {
        let mut out = Vec::new();
        for a in args {
            let Term::Var(x) = a else { return None };
            let name = if let Some(d) = depth(ps, x) {
                cs[cs.len() - 1 - d].clone()
            } else if x.starts_with(PLACEHOLDER) {
                match self.indiv.get(x)? {
                    Term::Var(v) => v.clone(),
                    _ => return None,
                }
            } else {
                x.clone()
            };
            if out.contains(&name) {
                return None;
            }
            out.push(name);
        }
        Some(out)
    }

    fn atom(&mut self, pred: &str, pattern: &Formula, c: &Formula, ps: &mut Vec<String>, cs: &mut Vec<String>) -> bool {
        let Formula::Atom { args, sort, .. } = pattern else { unreachable!() };
        if let Some(abs) = self.preds.get(pred).cloned() {
            let inst = Substitution { indiv: abs.params.iter().cloned().zip(args.iter().cloned()).collect(), preds: BTreeMap::new() };
            let q = apply_substitution(&abs.body, &inst);
            return self.formula(&q, c, ps, cs, true);
        }
        if c.sort() != *sort {
            return false;
        }
        let Some(names) = self.resolve_args(args, ps, cs) else {
            self.pending.push(Pending { pattern: pattern.clone(), cand: c.clone(), ps: ps.clone(), cs: cs.clone() });
            return true;
        };
        let free = c.free_indiv();
        if free.iter().any(|v| depth(cs, v).is_some() && !names.contains(v)) {
            return false;
        }
        let mut avoid = c.all_indiv_names();
        avoid.extend(free);
        avoid.extend(names.iter().cloned());
        let mut params = Vec::new();
        for _ in &names {
            let p = fresh_name("x", &avoid);
            avoid.insert(p.clone());
            params.push(p);
        }
        let rename = Substitution {
            indiv: names.iter().cloned().zip(params.iter().map(|p| Term::Var(p.clone()))).collect(),
            preds: BTreeMap::new(),
        };
        let body = apply_substitution(c, &rename);
        self.preds.insert(pred.to_string(), Abstraction::new(params, body));
        true
    }

    fn formula(&mut self, p: &Formula, c: &Formula, ps: &mut Vec<String>, cs: &mut Vec<String>, literal: bool) -> bool {
        use Formula::*;
        match (p, c) {
            (Atom { pred, .. }, _) if !literal && self.metas.contains(pred) => self.atom(pred, p, c, ps, cs),
            (Top, Top) | (Bot, Bot) | (Triv, Triv) | (Absurd, Absurd) => true,
            (Atom { pred: a, sort: s, args: xs }, Atom { pred: b, sort: t, args: ys }) => {
                a == b && s == t && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.term(x, y, ps, cs, literal))
            }
            (And(a1, b1), And(a2, b2)) | (Or(a1, b1), Or(a2, b2)) | (Imp(a1, b1), Imp(a2, b2)) => {
                self.formula(a1, a2, ps, cs, literal) && self.formula(b1, b2, ps, cs, literal)
            }
            (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)) => {
                ps.push(x.clone());
                cs.push(y.clone());
                let r = self.formula(a, b, ps, cs, literal);
                ps.pop();
                cs.pop();
                r
            }
            (Query(a), Query(b)) | (Bang(a), Bang(b)) => self.formula(a, b, ps, cs, literal),
            (ProofOf(s, a), ProofOf(t, b)) => self.term(s, t, ps, cs, literal) && self.formula(a, b, ps, cs, literal),
            _ => false,
        }
    }
}

/// Finds a substitution for the schematic variables (`preds` and the free
/// individual variables `indiv` of the patterns) under which every pattern
/// becomes its paired candidate, up to alpha-conversion.
pub fn match_instances(pairs: &[(&Formula, &Formula)], preds: &BTreeSet<String>, indiv: &BTreeSet<String>) -> Option<Substitution> {
    let mut state = State { metas: preds, preds: BTreeMap::new(), indiv: BTreeMap::new(), pending: Vec::new() };
    let mut counter = 0;
    for (pattern, cand) in pairs {
        let pattern = rename(pattern, &mut Vec::new(), indiv, &mut counter);
        if !state.formula(&pattern, cand, &mut Vec::new(), &mut Vec::new(), false) {
            return None;
        }
    }
    while !state.pending.is_empty() {
        let before = state.pending.len();
        let pending = std::mem::take(&mut state.pending);
        for mut item in pending {
            if !state.formula(&item.pattern, &item.cand, &mut item.ps, &mut item.cs, false) {
                return None;
            }
        }
        if state.pending.len() >= before {
            return None;
        }
    }
    let indiv = state
        .indiv
        .into_iter()
        .map(|(k, v)| (k.trim_start_matches(PLACEHOLDER).to_string(), v))
        .filter(|(k, v)| !matches!(v, Term::Var(x) if x == k))
        .collect();
    Some(Substitution { indiv, preds: state.preds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_equal, parse_formula, Signature};

    fn sig() -> Signature {
        Signature::new()
            .problem("alpha", 0)
            .problem("beta", 0)
            .problem("theta", 1)
            .problem("pi", 0)
            .problem("gamma", 2)
            .pred("p", 0)
            .pred("q", 1)
    }

    fn solves(law: &str, cand: &str) -> bool {
        let s = sig();
        let law = parse_formula(law, &s).unwrap();
        let cand = parse_formula(cand, &s).unwrap();
        let (fi, fp) = law.free_vars();
        match match_instances(&[(&law, &cand)], &fp, &fi) {
            Some(sub) => alpha_equal(&apply_substitution(&law, &sub), &cand),
            None => false,
        }
    }

    #[test]
    fn propositional_instances() {
        assert!(solves("alpha -> (beta -> alpha)", "beta -> (alpha -> beta)"));
        assert!(solves("alpha -> (beta -> alpha)", "~alpha -> (alpha & beta -> ~alpha)"));
        assert!(solves("?!p -> p", "?!?alpha -> ?alpha"));
        assert!(!solves("~~alpha -> alpha", "alpha | ~alpha"));
        assert!(!solves("alpha -> (beta -> alpha)", "alpha -> (beta -> beta)"));
    }

    #[test]
    fn quantifier_instances() {
        assert!(solves("(forall x. theta(x)) -> theta(y)", "(forall z. gamma(z, w)) -> gamma(v, w)"));
        assert!(solves("theta(y) -> exists x. theta(x)", "gamma(v, v) -> exists z. gamma(z, z)"));
        assert!(solves(
            "(forall x. (pi -> theta(x))) -> (pi -> forall x. theta(x))",
            "(forall y. (theta(x) -> gamma(x, y))) -> (theta(x) -> forall y. gamma(x, y))"
        ));
        assert!(solves(
            "(forall x. (pi -> theta(x))) -> (pi -> forall x. theta(x))",
            "(forall x1. (theta(x) -> theta(x1))) -> (theta(x) -> forall x1. theta(x1))"
        ));
        assert!(!solves("(forall x. theta(x)) -> theta(y)", "(forall z. theta(z)) -> theta(z) & theta(z)"));
    }
}
