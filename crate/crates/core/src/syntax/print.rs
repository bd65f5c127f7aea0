use super::{Formula, Sort, Term};

// Binding strength, loosest first.
const IFF: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const PREFIX: u8 = 4;

/// Canonical ASCII rendering. Negations and biconditionals are resugared
/// (`~A`, `A <-> B`); `?!` and `!?` are printed literally.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(f, IFF, &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn as_negation(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Imp(a, b) => match (a.sort(), b.as_ref()) {
            (Sort::I, Formula::Absurd) | (Sort::C, Formula::Bot) => Some(a),
            _ => None,
        },
        _ => None,
    }
}

fn as_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(l, r) => match (l.as_ref(), r.as_ref()) {
            (Formula::Imp(a, b), Formula::Imp(b2, a2)) if a == a2 && b == b2 => Some((a, b)),
            _ => None,
        },
        _ => None,
    }
}

fn level(f: &Formula) -> u8 {
    if as_iff(f).is_some() {
        return IFF;
    }
    if as_negation(f).is_some() {
        return PREFIX;
    }
    match f {
        Formula::Imp(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => PREFIX,
    }
}

fn write(f: &Formula, min: u8, out: &mut String) {
    if level(f) < min {
        out.push('(');
        write(f, IFF, out);
        out.push(')');
        return;
    }
    if let Some((a, b)) = as_iff(f) {
        write(a, IFF, out);
        out.push_str(" <-> ");
        write(b, IMP, out);
        return;
    }
    if let Some(a) = as_negation(f) {
        out.push('~');
        write(a, PREFIX, out);
        return;
    }
    match f {
        Formula::Top => out.push_str("Top"),
        Formula::Bot => out.push_str("Bot"),
        Formula::Triv => out.push_str("Triv"),
        Formula::Absurd => out.push_str("Abs"),
        Formula::Atom { pred, args, .. } => {
            out.push_str(pred);
            if !args.is_empty() {
                out.push('(');
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_term(t, out);
                }
                out.push(')');
            }
        }
        Formula::Imp(a, b) => {
            write(a, OR, out);
            out.push_str(" -> ");
            write(b, IMP, out);
        }
        Formula::Or(a, b) => {
            write(a, OR, out);
            out.push_str(" | ");
            write(b, AND, out);
        }
        Formula::And(a, b) => {
            write(a, AND, out);
            out.push_str(" & ");
            write(b, PREFIX, out);
        }
        Formula::Forall(x, b) | Formula::Exists(x, b) => {
            out.push_str(if matches!(f, Formula::Forall(..)) { "forall " } else { "exists " });
            out.push_str(x);
            out.push_str(". ");
            write(b, PREFIX, out);
        }
        Formula::Query(a) => {
            out.push('?');
            write(a, PREFIX, out);
        }
        Formula::Bang(a) => {
            out.push('!');
            write(a, PREFIX, out);
        }
        Formula::ProofOf(t, a) => {
            out.push('[');
            write_term(t, out);
            out.push(']');
            write(a, PREFIX, out);
        }
    }
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Prime(t) => {
            write_term(t, out);
            out.push('\'');
        }
        Term::App(s, t) => {
            write_term(s, out);
            out.push('[');
            write_term(t, out);
            out.push(']');
        }
        Term::Star(f) => {
            out.push_str("*{");
            write(f, IFF, out);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    #[test]
    fn canonical_spellings() {
        let p = Formula::prop("p");
        assert_eq!(print_formula(&Formula::boxed(p.clone())), "?!p");
        let a = Formula::problem("alpha");
        assert_eq!(print_formula(&Formula::not(a.clone())), "~alpha");
        let ax = Formula::atom("alpha", Sort::I, vec![Term::var("x")]);
        assert_eq!(print_formula(&Formula::forall("x", ax)), "forall x. alpha(x)");
        assert_eq!(print_formula(&Formula::iff(a.clone(), a.clone())), "alpha <-> alpha");
    }

    #[test]
    fn reparses_tricky_nesting() {
        let sig = Signature::new().problem("a", 0).problem("b", 0).problem("c", 0).pred("p", 1);
        for src in [
            "(a -> b) -> c",
            "a -> b -> c",
            "(a <-> b) <-> c",
            "a <-> (b <-> c)",
            "a | (b | c)",
            "(a & b) & c",
            "a & (b & c)",
            "~(a -> b)",
            "(forall x. a) & b",
            "forall x. (a & b)",
            "~?~exists x. !p(x)",
            "~~a",
            "(a -> Abs) -> a",
            "((a -> b) & (b -> a)) & c",
        ] {
            let f = parse_formula(src, &sig).unwrap();
            let printed = print_formula(&f);
            let g = parse_formula(&printed, &sig).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert_eq!(f, g, "{src} printed as {printed}");
        }
    }
}
