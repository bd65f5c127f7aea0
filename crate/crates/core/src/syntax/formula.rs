use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SyntaxError;

/// The two sorts of formulas: propositions (`C`) and problems (`I`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sort {
    C,
    I,
}

impl Sort {
    pub fn flip(self) -> Sort {
        match self {
            Sort::C => Sort::I,
            Sort::I => Sort::C,
        }
    }

    /// The falsity constant of this sort: `Bot` for c, `Abs` for i.
    pub fn falsum(self) -> Formula {
        match self {
            Sort::C => Formula::Bot,
            Sort::I => Formula::Absurd,
        }
    }

    pub fn verum(self) -> Formula {
        match self {
            Sort::C => Formula::Top,
            Sort::I => Formula::Triv,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::C => write!(f, "c"),
            Sort::I => write!(f, "i"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// `t'`
    Prime(Box<Term>),
    /// `s[t]`
    App(Box<Term>, Box<Term>),
    /// `*{F}`
    Star(Box<Formula>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn uses_proof_terms(&self) -> bool {
        !self.is_var()
    }

    pub(crate) fn collect_free(&self, out: &mut BTreeSet<String>, preds: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Prime(t) => t.collect_free(out, preds),
            Term::App(s, t) => {
                s.collect_free(out, preds);
                t.collect_free(out, preds);
            }
            Term::Star(f) => f.collect_free(out, preds),
        }
    }
}

/// A formula of the two-sorted language.
///
/// Binary connectives and quantifiers are shared between the sorts; the sort
/// of a node is determined by its operands. `Atom` records the sort of its
/// predicate variable so that sort information survives without a signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Triv,
    Absurd,
    Atom { pred: String, sort: Sort, args: Vec<Term> },
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// `?Φ`: the i-formula `Φ` has a solution.
    Query(Box<Formula>),
    /// `!F`: the problem of proving the c-formula `F`.
    Bang(Box<Formula>),
    /// `[t]F`: `t` is a proof of `F`.
    ProofOf(Term, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, sort: Sort, args: Vec<Term>) -> Formula {
        Formula::Atom { pred: pred.into(), sort, args }
    }

    pub fn prop(name: &str) -> Formula {
        Formula::atom(name, Sort::C, vec![])
    }

    pub fn problem(name: &str) -> Formula {
        Formula::atom(name, Sort::I, vec![])
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Sort-directed negation: `A -> Abs` on i-formulas, `A -> Bot` on c-formulas.
    pub fn not(a: Formula) -> Formula {
        let falsum = a.sort().falsum();
        Formula::imp(a, falsum)
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn query(a: Formula) -> Formula {
        Formula::Query(Box::new(a))
    }

    pub fn bang(a: Formula) -> Formula {
        Formula::Bang(Box::new(a))
    }

    /// `□F := ?!F`
    pub fn boxed(a: Formula) -> Formula {
        Formula::query(Formula::bang(a))
    }

    /// `∇Φ := !?Φ`
    pub fn nabla(a: Formula) -> Formula {
        Formula::bang(Formula::query(a))
    }

    /// `◇F := ¬□¬F`
    pub fn diamond(a: Formula) -> Formula {
        Formula::not(Formula::boxed(Formula::not(a)))
    }

    /// The sort of a well-formed formula. Ill-sorted trees report the sort
    /// of their head; use [`Formula::check`] to validate.
    pub fn sort(&self) -> Sort {
        match self {
            Formula::Top | Formula::Bot | Formula::Query(_) | Formula::ProofOf(..) => Sort::C,
            Formula::Triv | Formula::Absurd | Formula::Bang(_) => Sort::I,
            Formula::Atom { sort, .. } => *sort,
            Formula::And(a, _) | Formula::Or(a, _) | Formula::Imp(a, _) => a.sort(),
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.sort(),
        }
    }

    /// Checks every sort constraint of the language.
    pub fn check(&self) -> Result<Sort, SyntaxError> {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                let sa = a.check()?;
                let sb = b.check()?;
                if sa != sb {
                    return Err(SyntaxError::SortClash { left: sa, right: sb, at: None });
                }
                Ok(sa)
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.check(),
            Formula::Query(a) => match a.check()? {
                Sort::I => Ok(Sort::C),
                s => Err(SyntaxError::WrongOperand { op: "?", expected: Sort::I, found: s, at: None }),
            },
            Formula::Bang(a) => match a.check()? {
                Sort::C => Ok(Sort::I),
                s => Err(SyntaxError::WrongOperand { op: "!", expected: Sort::C, found: s, at: None }),
            },
            Formula::ProofOf(t, a) => {
                check_term(t)?;
                match a.check()? {
                    Sort::C => Ok(Sort::C),
                    s => Err(SyntaxError::WrongOperand {
                        op: "[t]",
                        expected: Sort::C,
                        found: s,
                        at: None,
                    }),
                }
            }
            Formula::Atom { args, sort, .. } => {
                for t in args {
                    check_term(t)?;
                }
                Ok(*sort)
            }
            _ => Ok(self.sort()),
        }
    }

    /// Free individual variables and free predicate variables.
    pub fn free_vars(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut indiv = BTreeSet::new();
        let mut preds = BTreeSet::new();
        self.collect_free(&mut indiv, &mut preds);
        (indiv, preds)
    }

    pub fn free_indiv(&self) -> BTreeSet<String> {
        self.free_vars().0
    }

    pub fn free_preds(&self) -> BTreeSet<String> {
        self.free_vars().1
    }

    /// Predicate variables with their sort and arity, in first-occurrence order.
    pub fn pred_decls(&self) -> Vec<(String, Sort, usize)> {
        let mut out: Vec<(String, Sort, usize)> = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Atom { pred, sort, args } = f {
                if !out.iter().any(|(p, _, _)| p == pred) {
                    out.push((pred.clone(), *sort, args.len()));
                }
            }
        });
        out
    }

    pub(crate) fn collect_free(&self, indiv: &mut BTreeSet<String>, preds: &mut BTreeSet<String>) {
        match self {
            Formula::Top | Formula::Bot | Formula::Triv | Formula::Absurd => {}
            Formula::Atom { pred, args, .. } => {
                preds.insert(pred.clone());
                for t in args {
                    t.collect_free(indiv, preds);
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free(indiv, preds);
                b.collect_free(indiv, preds);
            }
            Formula::Forall(x, b) | Formula::Exists(x, b) => {
                let mut inner = BTreeSet::new();
                b.collect_free(&mut inner, preds);
                inner.remove(x);
                indiv.extend(inner);
            }
            Formula::Query(a) | Formula::Bang(a) => a.collect_free(indiv, preds),
            Formula::ProofOf(t, a) => {
                t.collect_free(indiv, preds);
                a.collect_free(indiv, preds);
            }
        }
    }

    /// Pre-order traversal over formula nodes (does not enter `*{..}` terms).
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.visit(f),
            Formula::Query(a) | Formula::Bang(a) | Formula::ProofOf(_, a) => a.visit(f),
            _ => {}
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_indiv_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn term(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(x) => {
                    out.insert(x.clone());
                }
                Term::Prime(t) => term(t, out),
                Term::App(s, t) => {
                    term(s, out);
                    term(t, out);
                }
                Term::Star(f) => out.extend(f.all_indiv_names()),
            }
        }
        self.visit(&mut |f| match f {
            Formula::Forall(x, _) | Formula::Exists(x, _) => {
                out.insert(x.clone());
            }
            Formula::Atom { args, .. } => args.iter().for_each(|t| term(t, &mut out)),
            Formula::ProofOf(t, _) => term(t, &mut out),
            _ => {}
        });
        out
    }

    /// Number of nodes, used to bound random generation and search.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn uses_mixing(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Query(_) | Formula::Bang(_)));
        found
    }

    pub fn uses_proof_terms(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| match f {
            Formula::ProofOf(..) => found = true,
            Formula::Atom { args, .. } => found |= args.iter().any(Term::uses_proof_terms),
            _ => {}
        });
        found
    }

    /// True if every node has the given sort (pure QH or pure QC formula).
    pub fn is_pure(&self, sort: Sort) -> bool {
        let mut ok = true;
        self.visit(&mut |f| ok &= f.sort() == sort && !matches!(f, Formula::ProofOf(..)));
        ok
    }
}

fn check_term(t: &Term) -> Result<(), SyntaxError> {
    match t {
        Term::Var(_) => Ok(()),
        Term::Prime(t) => check_term(t),
        Term::App(s, t) => {
            check_term(s)?;
            check_term(t)
        }
        Term::Star(f) => match f.check()? {
            Sort::C => Ok(()),
            s => Err(SyntaxError::WrongOperand { op: "*{}", expected: Sort::C, found: s, at: None }),
        },
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_formula(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_term(self))
    }
}
