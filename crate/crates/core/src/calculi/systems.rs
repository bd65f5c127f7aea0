use crate::metalogic::{DerivationSystem, Law, Rule};
use crate::syntax::{parse_formula, LanguageFlags, Signature};

pub const SYSTEM_NAMES: &[&str] = &["QC", "QH", "QHC-full", "QHC-simplified", "QS4", "QH4", "S4pr"];

const QH_LAWS: &[(&str, &str)] = &[
    ("K", "alpha -> (beta -> alpha)"),
    ("S", "(alpha -> (beta -> gamma)) -> ((alpha -> beta) -> (alpha -> gamma))"),
    ("and-e1", "alpha & beta -> alpha"),
    ("and-e2", "alpha & beta -> beta"),
    ("and-i", "alpha -> (beta -> alpha & beta)"),
    ("or-i1", "alpha -> alpha | beta"),
    ("or-i2", "beta -> alpha | beta"),
    ("or-e", "(alpha -> gamma) -> ((beta -> gamma) -> (alpha | beta -> gamma))"),
    ("efq", "Abs -> alpha"),
    ("triv", "Triv"),
    ("all-e", "(forall x. theta(x)) -> theta(y)"),
    ("ex-i", "theta(y) -> exists x. theta(x)"),
    ("all-i", "(forall x. (pi -> theta(x))) -> (pi -> forall x. theta(x))"),
    ("ex-e", "(forall x. (theta(x) -> pi)) -> ((exists x. theta(x)) -> pi)"),
];

const QC_LAWS: &[(&str, &str)] = &[
    ("K-c", "p -> (q -> p)"),
    ("S-c", "(p -> (q -> r)) -> ((p -> q) -> (p -> r))"),
    ("and-e1-c", "p & q -> p"),
    ("and-e2-c", "p & q -> q"),
    ("and-i-c", "p -> (q -> p & q)"),
    ("or-i1-c", "p -> p | q"),
    ("or-i2-c", "q -> p | q"),
    ("or-e-c", "(p -> r) -> ((q -> r) -> (p | q -> r))"),
    ("efq-c", "Bot -> p"),
    ("top-c", "Top"),
    ("all-e-c", "(forall x. u(x)) -> u(y)"),
    ("ex-i-c", "u(y) -> exists x. u(x)"),
    ("all-i-c", "(forall x. (v -> u(x))) -> (v -> forall x. u(x))"),
    ("ex-e-c", "(forall x. (u(x) -> v)) -> ((exists x. u(x)) -> v)"),
    ("dne-c", "~~p -> p"),
];

const QHC_SIMPLIFIED_LAWS: &[(&str, &str)] = &[
    ("eval", "?!p -> p"),
    ("unit", "alpha -> !?alpha"),
    ("bang-k", "!(p -> q) -> (!p -> !q)"),
    ("query-k", "?(alpha -> beta) -> (?alpha -> ?beta)"),
    ("no-bang-bot", "~!Bot"),
];

const QHC_FULL_LAWS: &[(&str, &str)] = &[
    ("1a", "?(gamma & delta) <-> ?gamma & ?delta"),
    ("1b", "?(gamma | delta) <-> ?gamma | ?delta"),
    ("1c", "?(gamma -> delta) -> (?gamma -> ?delta)"),
    ("1d", "~?Abs"),
    ("1e", "?(exists x. theta(x)) <-> (exists x. ?theta(x))"),
    ("1f", "?(forall x. theta(x)) -> (forall x. ?theta(x))"),
    ("1g", "gamma -> !?gamma"),
    ("2a", "~!Bot"),
    ("2b", "?!p -> p"),
    ("2d", "!p -> !?!p"),
    ("2e", "!(p -> q) -> (!p -> !q)"),
];

const QS4_LAWS: &[(&str, &str)] = &[
    ("T", "box p -> p"),
    ("4", "box p -> box box p"),
    ("K-box", "box (p -> q) -> (box p -> box q)"),
];

const QH4_LAWS: &[(&str, &str)] = &[
    ("unit", "alpha -> nabla alpha"),
    ("mult", "nabla nabla alpha -> nabla alpha"),
    ("K-nabla", "nabla (alpha -> beta) -> (nabla alpha -> nabla beta)"),
    ("nabla-abs", "nabla Abs -> Abs"),
];

const S4PR_LAWS: &[(&str, &str)] = &[
    ("pr1", "[t]p -> p"),
    ("pr2", "[t]p -> [t'][t]p"),
    ("pr3", "[s](p -> q) -> ([t]p -> [s[t]]q)"),
];

fn base_signature(flags: LanguageFlags) -> Signature {
    let mut sig = Signature::with_flags(flags);
    for name in ["alpha", "beta", "gamma", "delta", "pi"] {
        sig.declare(name, 0, crate::syntax::Sort::I);
    }
    sig.declare("theta", 1, crate::syntax::Sort::I);
    for name in ["p", "q", "r", "v"] {
        sig.declare(name, 0, crate::syntax::Sort::C);
    }
    sig.declare("u", 1, crate::syntax::Sort::C);
    sig
}

fn laws(sig: &Signature, table: &[(&str, &str)]) -> Vec<Law> {
    table
        .iter()
        .map(|(name, src)| Law {
            name: name.to_string(),
            formula: parse_formula(src, sig).unwrap_or_else(|e| panic!("builtin law {name}: {e}")),
        })
        .collect()
}

fn rule(sig: &Signature, name: &str, premises: &[&str], conclusion: &str, mp: bool) -> Rule {
    let parse = |s: &str| parse_formula(s, sig).unwrap_or_else(|e| panic!("builtin rule {name}: {e}"));
    Rule { name: name.to_string(), premises: premises.iter().map(|p| parse(p)).collect(), conclusion: parse(conclusion), mp }
}

fn qh_rules(sig: &Signature) -> Vec<Rule> {
    vec![rule(sig, "mp", &["alpha", "alpha -> beta"], "beta", true)]
}

fn qc_rules(sig: &Signature) -> Vec<Rule> {
    vec![rule(sig, "mp-c", &["p", "p -> q"], "q", true)]
}

/// The named derivation systems. QC and QH use a fixed Hilbert-style
/// axiomatization; generalization is the structural `gen` step.
pub fn builtin_system(name: &str) -> Option<DerivationSystem> {
    let pure_i = LanguageFlags { query_bang: false, proof_terms: false, i_sort: true, c_sort: false };
    let pure_c = LanguageFlags { query_bang: false, proof_terms: false, i_sort: false, c_sort: true };
    let mixed = LanguageFlags::default();
    let (signature, laws, rules) = match name {
        "QH" => {
            let sig = base_signature(pure_i);
            (sig.clone(), laws(&sig, QH_LAWS), qh_rules(&sig))
        }
        "QC" => {
            let sig = base_signature(pure_c);
            (sig.clone(), laws(&sig, QC_LAWS), qc_rules(&sig))
        }
        "QHC-simplified" | "QHC-full" => {
            let sig = base_signature(mixed);
            let mut ls = laws(&sig, QC_LAWS);
            ls.extend(laws(&sig, QH_LAWS));
            let mut rs = qc_rules(&sig);
            rs.extend(qh_rules(&sig));
            if name == "QHC-simplified" {
                ls.extend(laws(&sig, QHC_SIMPLIFIED_LAWS));
                rs.push(rule(&sig, "bang-nec", &["p"], "!p", false));
                rs.push(rule(&sig, "query-nec", &["alpha"], "?alpha", false));
            } else {
                ls.extend(laws(&sig, QHC_FULL_LAWS));
                rs.push(rule(&sig, "2c", &["!p"], "p", false));
                rs.push(rule(&sig, "2f", &["p"], "!p", false));
            }
            (sig, ls, rs)
        }
        "QS4" => {
            let sig = base_signature(LanguageFlags { i_sort: false, ..mixed });
            let mut ls = laws(&sig, QC_LAWS);
            ls.extend(laws(&sig, QS4_LAWS));
            let mut rs = qc_rules(&sig);
            rs.push(rule(&sig, "nec", &["p"], "box p", false));
            (sig, ls, rs)
        }
        "QH4" => {
            let sig = base_signature(LanguageFlags { c_sort: false, ..mixed });
            let mut ls = laws(&sig, QH_LAWS);
            ls.extend(laws(&sig, QH4_LAWS));
            (sig.clone(), ls, qh_rules(&sig))
        }
        "S4pr" => {
            let sig = base_signature(LanguageFlags { proof_terms: true, ..pure_c });
            let mut ls = laws(&sig, QC_LAWS);
            ls.extend(laws(&sig, S4PR_LAWS));
            let mut rs = qc_rules(&sig);
            rs.push(rule(&sig, "pr4", &["p"], "[*{p}]p", false));
            (sig, ls, rs)
        }
        _ => return None,
    };
    Some(DerivationSystem { name: name.to_string(), signature, laws, rules })
}
