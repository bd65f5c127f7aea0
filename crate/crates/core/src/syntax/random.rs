//! Seeded random formulas and substitutions for property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Abstraction, Formula, LanguageFlags, Signature, Sort, Substitution, Term};

/// Individual variable names drawn on; kept small so that binders clash.
pub const VARS: &[&str] = &["x", "y", "z"];

/// A signature with 0-, 1- and 2-ary predicate variables of the enabled sorts.
pub fn profile_signature(flags: LanguageFlags) -> Signature {
    let mut sig = Signature::with_flags(flags);
    if flags.i_sort {
        sig.declare("alpha", 0, Sort::I).declare("beta", 0, Sort::I).declare("gamma", 1, Sort::I).declare("delta", 2, Sort::I);
    }
    if flags.c_sort {
        sig.declare("p", 0, Sort::C).declare("q", 0, Sort::C).declare("r", 1, Sort::C).declare("u", 2, Sort::C);
    }
    sig
}

/// Named signature profiles: `qh`, `qc`, `mixed` and `proof-terms`.
pub fn profile(name: &str) -> Option<LanguageFlags> {
    let mixed = LanguageFlags::default();
    Some(match name {
        "qh" => LanguageFlags { query_bang: false, c_sort: false, ..mixed },
        "qc" => LanguageFlags { query_bang: false, i_sort: false, ..mixed },
        "mixed" => mixed,
        "proof-terms" => LanguageFlags { proof_terms: true, ..mixed },
        _ => return None,
    })
}

pub const PROFILES: &[&str] = &["qh", "qc", "mixed", "proof-terms"];

pub struct Generator<'a> {
    pub sig: &'a Signature,
    pub quantifiers: bool,
}

impl Generator<'_> {
    fn sorts(&self) -> Vec<Sort> {
        let mut out = Vec::new();
        if self.sig.flags.i_sort {
            out.push(Sort::I);
        }
        if self.sig.flags.c_sort {
            out.push(Sort::C);
        }
        out
    }

    /// A sort with formulas available in the signature.
    pub fn any_sort(&self, rng: &mut impl Rng) -> Sort {
        *self.sorts().choose(rng).expect("signature enables a sort")
    }

    fn var(&self, rng: &mut impl Rng) -> String {
        VARS.choose(rng).unwrap().to_string()
    }

    pub fn term(&self, rng: &mut impl Rng, depth: usize) -> Term {
        if !self.sig.flags.proof_terms || depth == 0 || !self.sig.flags.c_sort {
            return Term::Var(self.var(rng));
        }
        match rng.gen_range(0..6) {
            0 => Term::Prime(Box::new(self.term(rng, depth - 1))),
            1 => Term::App(Box::new(self.term(rng, depth - 1)), Box::new(self.term(rng, depth - 1))),
            2 => Term::Star(Box::new(self.formula(rng, Sort::C, depth - 1))),
            _ => Term::Var(self.var(rng)),
        }
    }

    fn atom(&self, rng: &mut impl Rng, sort: Sort, depth: usize) -> Formula {
        let preds: Vec<_> = self.sig.decls().filter(|d| d.sort == sort).collect();
        match preds.choose(rng) {
            Some(d) if rng.gen_range(0..5) > 0 => {
                let args = (0..d.arity).map(|_| self.term(rng, depth.min(1))).collect();
                Formula::atom(d.name.clone(), sort, args)
            }
            _ => match (sort, rng.gen_bool(0.5)) {
                (Sort::C, true) => Formula::Top,
                (Sort::C, false) => Formula::Bot,
                (Sort::I, true) => Formula::Triv,
                (Sort::I, false) => Formula::Absurd,
            },
        }
    }

    /// A well-sorted formula of `sort` with at most `depth` nested connectives.
    pub fn formula(&self, rng: &mut impl Rng, sort: Sort, depth: usize) -> Formula {
        if depth == 0 {
            return self.atom(rng, sort, 0);
        }
        let d = depth - 1;
        let mixing = self.sig.flags.query_bang && self.sig.flags.i_sort && self.sig.flags.c_sort;
        match rng.gen_range(0..10) {
            0 => self.atom(rng, sort, depth),
            1 => Formula::and(self.formula(rng, sort, d), self.formula(rng, sort, d)),
            2 => Formula::or(self.formula(rng, sort, d), self.formula(rng, sort, d)),
            3 | 4 => Formula::imp(self.formula(rng, sort, d), self.formula(rng, sort, d)),
            5 => Formula::not(self.formula(rng, sort, d)),
            6 if self.quantifiers => Formula::forall(self.var(rng), self.formula(rng, sort, d)),
            7 if self.quantifiers => Formula::exists(self.var(rng), self.formula(rng, sort, d)),
            8 if mixing => match sort {
                Sort::C => Formula::query(self.formula(rng, Sort::I, d)),
                Sort::I => Formula::bang(self.formula(rng, Sort::C, d)),
            },
            9 if self.sig.flags.proof_terms && sort == Sort::C => {
                Formula::ProofOf(self.term(rng, d), Box::new(self.formula(rng, Sort::C, d)))
            }
            _ => self.atom(rng, sort, depth),
        }
    }

    /// A substitution for some of the predicate and free individual
    /// variables of `target`, with bodies that may mention bound names.
    pub fn substitution(&self, rng: &mut impl Rng, target: &Formula, depth: usize) -> Substitution {
        let mut s = Substitution::new();
        for (name, sort, arity) in target.pred_decls() {
            if rng.gen_bool(0.6) {
                let mut params: Vec<String> = ["x", "y", "z", "w"].iter().take(arity).map(|v| v.to_string()).collect();
                params.shuffle(rng);
                s.preds.insert(name, Abstraction::new(params, self.formula(rng, sort, depth)));
            }
        }
        for x in target.free_indiv() {
            if rng.gen_bool(0.5) {
                s.indiv.insert(x, self.term(rng, 1));
            }
        }
        s
    }
}
