use super::{Formula, Term};

/// Equality up to renaming of bound individual variables.
pub fn alpha_equal(f: &Formula, g: &Formula) -> bool {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    eq(f, g, &mut lhs, &mut rhs)
}

fn lookup(stack: &[String], x: &str) -> Option<usize> {
    stack.iter().rev().position(|y| y == x)
}

fn eq_term(s: &Term, t: &Term, ls: &mut Vec<String>, rs: &mut Vec<String>) -> bool {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) => match (lookup(ls, x), lookup(rs, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::Prime(a), Term::Prime(b)) => eq_term(a, b, ls, rs),
        (Term::App(a1, b1), Term::App(a2, b2)) => eq_term(a1, a2, ls, rs) && eq_term(b1, b2, ls, rs),
        (Term::Star(f), Term::Star(g)) => eq(f, g, ls, rs),
        _ => false,
    }
}

fn eq(f: &Formula, g: &Formula, ls: &mut Vec<String>, rs: &mut Vec<String>) -> bool {
    use Formula::*;
    match (f, g) {
        (Top, Top) | (Bot, Bot) | (Triv, Triv) | (Absurd, Absurd) => true,
        (Atom { pred: p, sort: s, args: a }, Atom { pred: q, sort: t, args: b }) => {
            p == q && s == t && a.len() == b.len() && a.iter().zip(b).all(|(x, y)| eq_term(x, y, ls, rs))
        }
        (And(a1, b1), And(a2, b2)) | (Or(a1, b1), Or(a2, b2)) | (Imp(a1, b1), Imp(a2, b2)) => {
            eq(a1, a2, ls, rs) && eq(b1, b2, ls, rs)
        }
        (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)) => {
            ls.push(x.clone());
            rs.push(y.clone());
            let r = eq(a, b, ls, rs);
            ls.pop();
            rs.pop();
            r
        }
        (Query(a), Query(b)) | (Bang(a), Bang(b)) => eq(a, b, ls, rs),
        (ProofOf(s, a), ProofOf(t, b)) => eq_term(s, t, ls, rs) && eq(a, b, ls, rs),
        _ => false,
    }
}

/// A string key that is equal for two formulas iff they are alpha-equal:
/// bound variables are replaced by their binder depth.
pub fn canonical_key(f: &Formula) -> String {
    let mut out = String::new();
    key(f, &mut Vec::new(), &mut out);
    out
}

fn key_term(t: &Term, stack: &mut Vec<String>, out: &mut String) {
    match t {
        Term::Var(x) => match lookup(stack, x) {
            Some(i) => out.push_str(&format!("#{i}")),
            None => out.push_str(x),
        },
        Term::Prime(t) => {
            out.push('\'');
            key_term(t, stack, out);
        }
        Term::App(a, b) => {
            out.push('@');
            key_term(a, stack, out);
            out.push(' ');
            key_term(b, stack, out);
        }
        Term::Star(f) => {
            out.push('*');
            key(f, stack, out);
        }
    }
}

fn key(f: &Formula, stack: &mut Vec<String>, out: &mut String) {
    use Formula::*;
    match f {
        Top => out.push('T'),
        Bot => out.push('F'),
        Triv => out.push('t'),
        Absurd => out.push('f'),
        Atom { pred, sort, args } => {
            out.push_str(&format!("({pred}:{sort}"));
            for a in args {
                out.push(' ');
                key_term(a, stack, out);
            }
            out.push(')');
        }
        And(a, b) | Or(a, b) | Imp(a, b) => {
            out.push(match f {
                And(..) => '&',
                Or(..) => '|',
                _ => '>',
            });
            out.push('(');
            key(a, stack, out);
            out.push(',');
            key(b, stack, out);
            out.push(')');
        }
        Forall(x, a) | Exists(x, a) => {
            out.push(if matches!(f, Forall(..)) { 'A' } else { 'E' });
            stack.push(x.clone());
            key(a, stack, out);
            stack.pop();
        }
        Query(a) => {
            out.push('?');
            key(a, stack, out);
        }
        Bang(a) => {
            out.push('!');
            key(a, stack, out);
        }
        ProofOf(t, a) => {
            out.push('[');
            key_term(t, stack, out);
            out.push(']');
            key(a, stack, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::new().problem("alpha", 1).problem("beta", 1).problem("gamma", 2)
    }

    fn check(a: &str, b: &str) -> bool {
        let s = sig();
        let f = parse_formula(a, &s).unwrap();
        let g = parse_formula(b, &s).unwrap();
        let r = alpha_equal(&f, &g);
        assert_eq!(r, canonical_key(&f) == canonical_key(&g));
        r
    }

    #[test]
    fn examples() {
        assert!(check("forall x. alpha(x)", "forall y. alpha(y)"));
        assert!(!check("forall x. alpha(x)", "forall x. beta(x)"));
        assert!(check("forall x. exists y. gamma(x, y)", "forall y. exists x. gamma(y, x)"));
        assert!(!check("forall x. exists y. gamma(x, y)", "forall x. exists y. gamma(y, x)"));
        assert!(!check("forall x. alpha(y)", "forall y. alpha(y)"));
        assert!(check("alpha(z)", "alpha(z)"));
        assert!(!check("alpha(z)", "alpha(w)"));
    }
}
