//! Syntactic interpretations between QHC and its classical, intuitionistic
//! and modal fragments.
//!
//! Atoms that change sort are replaced by their twin (see
//! [`crate::syntax::twin_name`]). In the box translations `□` is written `?!`.

use std::fmt;
use std::str::FromStr;

use crate::syntax::{twin_name, Formula, Signature, Sort};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoxVariant {
    Canonical,
    Optimized,
    Godel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NegNegVariant {
    Canonical,
    Optimized,
    Kuroda,
}

/// The named translations, as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Translation {
    Box(BoxVariant),
    NegNeg(NegNegVariant),
    Nabla { economical: bool },
    Diamond { economical: bool },
    Refined,
    ReplaceNabla,
}

impl Translation {
    pub const NAMES: &'static [&'static str] = &[
        "box-canonical",
        "box-optimized",
        "box-godel",
        "negneg-canonical",
        "negneg-optimized",
        "negneg-kuroda",
        "nabla",
        "diamond",
        "refined-negneg",
        "replace-nabla",
    ];

    pub fn apply(self, f: &Formula) -> Formula {
        match self {
            Translation::Box(v) => box_translate(f, v),
            Translation::NegNeg(v) => negneg_translate(f, v),
            Translation::Nabla { economical } => nabla_translate(f, economical),
            Translation::Diamond { economical } => diamond_translate(f, economical),
            Translation::Refined => refined_negneg(f),
            Translation::ReplaceNabla => replace_nabla(f),
        }
    }

    /// Whether the output mentions twins of the input's atoms.
    pub fn changes_atoms(self) -> bool {
        matches!(self, Translation::Box(_) | Translation::NegNeg(_))
    }

    pub fn with_economy(self, economical: bool) -> Translation {
        match self {
            Translation::Nabla { .. } => Translation::Nabla { economical },
            Translation::Diamond { .. } => Translation::Diamond { economical },
            t => t,
        }
    }
}

impl FromStr for Translation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "box" | "box-canonical" => Translation::Box(BoxVariant::Canonical),
            "box-optimized" => Translation::Box(BoxVariant::Optimized),
            "box-godel" | "godel" => Translation::Box(BoxVariant::Godel),
            "negneg" | "negneg-canonical" => Translation::NegNeg(NegNegVariant::Canonical),
            "negneg-optimized" => Translation::NegNeg(NegNegVariant::Optimized),
            "negneg-kuroda" | "kuroda" => Translation::NegNeg(NegNegVariant::Kuroda),
            "nabla" => Translation::Nabla { economical: false },
            "diamond" => Translation::Diamond { economical: false },
            "refined" | "refined-negneg" => Translation::Refined,
            "replace-nabla" => Translation::ReplaceNabla,
            _ => return Err(format!("unknown translation `{s}`; expected one of {}", Translation::NAMES.join(", "))),
        })
    }
}

impl fmt::Display for Translation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Translation::Box(BoxVariant::Canonical) => "box-canonical",
            Translation::Box(BoxVariant::Optimized) => "box-optimized",
            Translation::Box(BoxVariant::Godel) => "box-godel",
            Translation::NegNeg(NegNegVariant::Canonical) => "negneg-canonical",
            Translation::NegNeg(NegNegVariant::Optimized) => "negneg-optimized",
            Translation::NegNeg(NegNegVariant::Kuroda) => "negneg-kuroda",
            Translation::Nabla { economical: false } => "nabla",
            Translation::Nabla { economical: true } => "nabla-economical",
            Translation::Diamond { economical: false } => "diamond",
            Translation::Diamond { economical: true } => "diamond-economical",
            Translation::Refined => "refined-negneg",
            Translation::ReplaceNabla => "replace-nabla",
        };
        f.write_str(s)
    }
}

/// The signature a translation's output lives in.
pub fn target_signature(sig: &Signature) -> Signature {
    let mut out = sig.with_twins();
    out.flags = Default::default();
    out
}

fn twin(f: &Formula) -> Formula {
    match f {
        Formula::Atom { pred, sort, args } => Formula::atom(twin_name(pred), sort.flip(), args.clone()),
        _ => unreachable!("twin of a non-atom"),
    }
}

fn bx(f: Formula) -> Formula {
    Formula::boxed(f)
}

fn nn(f: Formula) -> Formula {
    Formula::not(Formula::not(f))
}

/// Rebuilds a connective or quantifier node over new children.
fn rebuild(f: &Formula, mut go: impl FnMut(&Formula) -> Formula) -> Formula {
    use Formula::*;
    match f {
        And(a, b) => {
            let a = go(a);
            Formula::and(a, go(b))
        }
        Or(a, b) => {
            let a = go(a);
            Formula::or(a, go(b))
        }
        Imp(a, b) => {
            let a = go(a);
            Formula::imp(a, go(b))
        }
        Forall(x, a) => Formula::forall(x.clone(), go(a)),
        Exists(x, a) => Formula::exists(x.clone(), go(a)),
        Query(a) => Formula::query(go(a)),
        Bang(a) => Formula::bang(go(a)),
        ProofOf(t, a) => ProofOf(t.clone(), Box::new(go(a))),
        Top | Bot | Triv | Absurd | Atom { .. } => f.clone(),
    }
}

fn is_connective(f: &Formula) -> bool {
    matches!(f, Formula::And(..) | Formula::Or(..) | Formula::Imp(..) | Formula::Forall(..) | Formula::Exists(..))
}

/// `A ↦ A_□`, from QHC into QS4.
pub fn box_translate(f: &Formula, variant: BoxVariant) -> Formula {
    use Formula::*;
    let go = |g: &Formula| box_translate(g, variant);
    match f {
        Triv => Top,
        Absurd => Bot,
        Top | Bot => f.clone(),
        Atom { sort: Sort::I, .. } => match variant {
            BoxVariant::Godel => twin(f),
            _ => bx(twin(f)),
        },
        Atom { .. } => f.clone(),
        Query(a) => match variant {
            BoxVariant::Godel => bx(go(a)),
            _ => go(a),
        },
        Bang(a) => match variant {
            BoxVariant::Godel => go(a),
            _ => bx(go(a)),
        },
        ProofOf(..) => rebuild(f, go),
        _ if f.sort() == Sort::C => rebuild(f, go),
        _ => match variant {
            BoxVariant::Canonical => bx(rebuild(f, go)),
            BoxVariant::Optimized => match f {
                Imp(..) | Forall(..) => bx(rebuild(f, go)),
                _ => rebuild(f, go),
            },
            BoxVariant::Godel => match f {
                Or(..) | Exists(..) | Imp(..) => rebuild(f, |g| bx(go(g))),
                _ => rebuild(f, go),
            },
        },
    }
}

/// `A ↦ A_¬¬`, from QHC into QH.
pub fn negneg_translate(f: &Formula, variant: NegNegVariant) -> Formula {
    if variant == NegNegVariant::Kuroda {
        let inner = kuroda(f);
        return if f.sort() == Sort::C { nn(inner) } else { inner };
    }
    gentzen(f, variant == NegNegVariant::Optimized)
}

fn gentzen(f: &Formula, optimized: bool) -> Formula {
    use Formula::*;
    let go = |g: &Formula| gentzen(g, optimized);
    match f {
        Top => Triv,
        Bot => Absurd,
        Triv | Absurd => f.clone(),
        Atom { sort: Sort::C, .. } => nn(twin(f)),
        Atom { .. } => f.clone(),
        Query(a) => nn(go(a)),
        Bang(a) => go(a),
        _ if f.sort() == Sort::I => rebuild(f, go),
        _ => {
            let out = rebuild(f, go);
            if !optimized || matches!(f, Or(..) | Exists(..)) {
                nn(out)
            } else {
                out
            }
        }
    }
}

fn kuroda(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Top => Triv,
        Bot => Absurd,
        Triv | Absurd => f.clone(),
        Atom { sort: Sort::C, .. } => twin(f),
        Atom { .. } => f.clone(),
        Query(a) => kuroda(a),
        Bang(a) => nn(kuroda(a)),
        Forall(x, a) if f.sort() == Sort::C => Formula::forall(x.clone(), nn(kuroda(a))),
        _ => rebuild(f, kuroda),
    }
}

/// `A ↦ A_∇`: atomic i-formulas and intuitionistic connectives and
/// quantifiers are prefixed by `∇`. The economical form prefixes only `∨`
/// and `∃` among the connectives.
pub fn nabla_translate(f: &Formula, economical: bool) -> Formula {
    use Formula::*;
    let go = |g: &Formula| nabla_translate(g, economical);
    match f {
        Atom { sort: Sort::I, .. } => Formula::nabla(f.clone()),
        _ if is_connective(f) && f.sort() == Sort::I => {
            let out = rebuild(f, go);
            if !economical || matches!(f, Or(..) | Exists(..)) {
                Formula::nabla(out)
            } else {
                out
            }
        }
        _ => rebuild(f, go),
    }
}

/// `A ↦ A_◇`: classical connectives and quantifiers, atomic c-formulas and
/// every `?` are prefixed by `□◇`. The economical form leaves `∧` alone and
/// prefixes `→` and `∀` by `□` only.
pub fn diamond_translate(f: &Formula, economical: bool) -> Formula {
    use Formula::*;
    let go = |g: &Formula| diamond_translate(g, economical);
    let bd = |g: Formula| bx(Formula::diamond(g));
    match f {
        Atom { sort: Sort::C, .. } => bd(f.clone()),
        Query(_) => bd(rebuild(f, go)),
        _ if is_connective(f) && f.sort() == Sort::C => {
            let out = rebuild(f, go);
            match (economical, f) {
                (false, _) => bd(out),
                (true, And(..)) => out,
                (true, Imp(..) | Forall(..)) => bx(out),
                (true, _) => bd(out),
            }
        }
        _ => rebuild(f, go),
    }
}

/// The refinement of Kolmogorov's translation, from QC into QHC.
///
/// The structural clauses run top-down in one pass; then `∇` becomes `¬¬`,
/// `!` before an atomic c-formula becomes `¬!¬`, a leading `?` becomes
/// `¬?¬`, and a bare atomic formula is prefixed by `◇`.
pub fn refined_negneg(f: &Formula) -> Formula {
    if matches!(f, Formula::Atom { .. }) {
        return Formula::diamond(f.clone());
    }
    let g = refined_atoms(&replace_nabla(&refined_structure(f)));
    match g {
        Formula::Query(a) => Formula::not(Formula::query(Formula::not(*a))),
        g => g,
    }
}

/// The structural clauses alone, before the rewrites.
pub fn refined_structure(f: &Formula) -> Formula {
    use Formula::*;
    let bang = |g: &Formula| Formula::bang(refined_structure(g));
    let neg_bang_neg = |g: &Formula| Formula::not(Formula::bang(Formula::not(refined_structure(g))));
    let neg_query_neg = |g: Formula| Formula::not(Formula::query(Formula::not(g)));
    match f {
        Imp(a, b) => Formula::query(Formula::imp(bang(a), bang(b))),
        And(a, b) => Formula::query(Formula::and(neg_bang_neg(a), neg_bang_neg(b))),
        Forall(x, a) => Formula::query(Formula::forall(x.clone(), neg_bang_neg(a))),
        Or(a, b) => neg_query_neg(Formula::or(bang(a), bang(b))),
        Exists(x, a) => neg_query_neg(Formula::exists(x.clone(), bang(a))),
        _ => f.clone(),
    }
}

fn refined_atoms(f: &Formula) -> Formula {
    match f {
        Formula::Bang(a) if matches!(**a, Formula::Atom { .. }) => Formula::not(Formula::bang(Formula::not((**a).clone()))),
        _ => rebuild(f, refined_atoms),
    }
}

/// Replaces every `∇` (that is, `!?`) by `¬¬`.
pub fn replace_nabla(f: &Formula) -> Formula {
    match f {
        Formula::Bang(a) => match &**a {
            Formula::Query(b) => nn(replace_nabla(b)),
            _ => Formula::bang(replace_nabla(a)),
        },
        _ => rebuild(f, replace_nabla),
    }
}

/// Reads a QH formula as a QC formula by twinning its atoms and replacing
/// the intuitionistic constants by classical ones.
pub fn as_classical(f: &Formula) -> Formula {
    match f {
        Formula::Triv => Formula::Top,
        Formula::Absurd => Formula::Bot,
        Formula::Atom { sort: Sort::I, .. } => twin(f),
        _ => rebuild(f, as_classical),
    }
}

/// The variant pairing under which the square commutes syntactically.
pub fn square_pairing(economical: bool) -> (Translation, Translation) {
    let negneg = if economical { NegNegVariant::Optimized } else { NegNegVariant::Canonical };
    (Translation::Nabla { economical }, Translation::NegNeg(negneg))
}

/// `∇`-translation followed by `∇ ↦ ¬¬` agrees with the `¬¬`-translation of
/// the classical reading, under [`square_pairing`].
pub fn check_square(f: &Formula, economical: bool) -> bool {
    let (top, bottom) = square_pairing(economical);
    replace_nabla(&top.apply(f)) == bottom.apply(&as_classical(f))
}
