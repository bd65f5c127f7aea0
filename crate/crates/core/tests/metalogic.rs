use std::time::Instant;

use qhc_core::calculi::{check_script_text, check_shipped, CorpusLoader};
use qhc_core::metalogic::{instance_of_law, Verdict};
use qhc_core::syntax::{parse_formula, Abstraction, Signature, Substitution};

fn check(text: &str) -> Verdict {
    check_script_text(text, &CorpusLoader::new()).expect("script parses")
}

fn code(v: &Verdict) -> String {
    v.code().map(|c| c.to_string()).unwrap_or_else(|| "ACCEPTED".into())
}

#[test]
fn excluded_middle_from_double_negation_pair() {
    let start = Instant::now();
    let good = check_shipped("lem-from-dne.qp").unwrap();
    assert!(good.accepted, "{good}");
    assert!(good.judgment.unwrap().ends_with("|- alpha | ~alpha"));
    let cheat = check_shipped("lem-cheat.qp").unwrap();
    assert_eq!(code(&cheat), "BAD_INSTANCE");
    assert_eq!(cheat.failure.unwrap().line, Some(2));
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn law_citation_in_theorem_mode() {
    let v = check("system QHC-simplified\nmode theorem\ngoal ?!p -> p\n1. ?!p -> p by law eval with {p := p}\nqed 1\n");
    assert!(v.accepted, "{v}");
    let v = check("system QHC-simplified\nmode theorem\ngoal ?!?alpha -> ?alpha\n1. ?!?alpha -> ?alpha by law eval\nqed 1\n");
    assert!(v.accepted, "{v}");
}

#[test]
fn instance_of_law_examples() {
    let sig = Signature::new().problem("alpha", 0).problem("beta", 0).pred("p", 0);
    let f = |s: &str| parse_formula(s, &sig).unwrap();
    let s = Substitution::default().with_pred("p", Abstraction::constant(f("?alpha")));
    assert!(instance_of_law(&f("?!?alpha -> ?alpha"), &f("?!p -> p"), &s).unwrap());
    for b in ["alpha", "beta", "~beta", "alpha | ~alpha"] {
        let s = Substitution::default().with_pred("alpha", Abstraction::constant(f(b)));
        assert!(!instance_of_law(&f("alpha | ~alpha"), &f("~~alpha -> alpha"), &s).unwrap());
    }
    assert!(instance_of_law(&f("?!p -> p"), &f("?!p -> p"), &Substitution::default()).unwrap());
}

#[test]
fn rule_on_hypothesis_is_refused() {
    let v = check("system QHC-simplified\nmode hypotheses\nhyp 1: p\ngoal !p\n1. p by hyp 1\n2. !p by rule bang-nec from 1\nqed 2\n");
    assert_eq!(code(&v), "RULE_ON_HYP");
    let v = check("system QHC-simplified\nmode hypotheses\nhyp 1: p\nhyp 2: p -> q\ngoal q\n1. p by hyp 1\n2. p -> q by hyp 2\n3. q by mp 1 2\nqed 3\n");
    assert!(v.accepted, "{v}");
    assert_eq!(v.judgment.as_deref(), Some("QHC-simplified p, p -> q |- q"));
}

#[test]
fn generalization_over_a_hypothesis_variable() {
    let text = "system QH\nmode hypotheses\nproblem a 1\nhyp 1: a(x)\ngoal forall x. a(x)\n1. a(x) by hyp 1\n2. forall x. a(x) by gen x from 1\nqed 2\n";
    assert_eq!(code(&check(text)), "GEN_ON_HYP_VAR");
    let text = "system QH\nmode hypotheses\nproblem a 1\nhyp 1: a(x)\ngoal forall y. a(x)\n1. a(x) by hyp 1\n2. forall y. a(x) by gen y from 1\nqed 2\n";
    assert!(check(text).accepted);
}

#[test]
fn generalization_on_a_rule_premise_is_allowed() {
    let text = "system QH\nmode rule-derivation\nproblem a 1\neigen: a\ngoal a(x) / forall x. a(x)\n1. a(x) by hyp 1\n2. forall x. a(x) by gen x from 1\nqed 2\n";
    let v = check(text);
    assert!(v.accepted, "{v}");
}

#[test]
fn eigen_variables_must_be_fresh() {
    let text = "system QH\nmode rule-derivation\npremise-rule dn: ~~alpha -> alpha\neigen: alpha\ngoal alpha | ~alpha\n1. alpha | ~alpha by law dn\nqed 1\n";
    assert_eq!(code(&check(text)), "EIGEN_NOT_FRESH");
    let text = "system QHC-simplified\nmode rule-derivation\neigen: p\ngoal ?alpha -> p / alpha -> !p\n1. ?alpha -> p by hyp 1\nqed 1\n";
    assert_eq!(code(&check(text)), "EIGEN_NOT_FRESH");
}

#[test]
fn capture_is_reported() {
    let text = "system QH\nmode theorem\nproblem a 1\ngoal (forall x. (a(x) -> a(x))) -> (a(x) -> forall x. a(x))\n\
1. (forall x. (a(x) -> a(x))) -> (a(x) -> forall x. a(x)) by law all-i with {pi := a(x); theta := \\y. a(y)}\nqed 1\n";
    assert_eq!(code(&check(text)), "CAPTURE");
}

#[test]
fn wrong_system_goal_mismatch_bad_reference() {
    let v = check("system QH\nmode theorem\ngoal ~~alpha -> alpha\n1. ~~alpha -> alpha by law dne-c\nqed 1\n");
    assert_eq!(code(&v), "WRONG_SYSTEM");
    let v = check("system QHC\nmode theorem\ngoal Triv\n1. Triv by law triv\nqed 1\n");
    assert_eq!(code(&v), "WRONG_SYSTEM");
    let v = check("system QH\nmode theorem\ngoal alpha -> alpha\n1. Triv by law triv\nqed 1\n");
    assert_eq!(code(&v), "GOAL_MISMATCH");
    let v = check("system QH\nmode theorem\ngoal Triv\n1. Triv by mp 1 2\nqed 1\n");
    assert_eq!(code(&v), "BAD_REFERENCE");
}

#[test]
fn lemmas_from_a_larger_system_are_refused() {
    let dir = std::env::temp_dir().join(format!("qhc-lemma-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("big.qp"), "system QHC-simplified\nmode theorem\ngoal Triv\n1. Triv by law triv\nqed 1\n").unwrap();
    let loader = CorpusLoader::with_base(&dir);
    let cite = |sys: &str| {
        let text = format!("system {sys}\nmode theorem\nlemma t: Triv by big.qp\ngoal Triv\n1. Triv by law t\nqed 1\n");
        check_script_text(&text, &loader).unwrap()
    };
    assert_eq!(code(&cite("QH")), "WRONG_SYSTEM");
    assert!(!cite("QHC-full").accepted);
    assert!(cite("QHC-simplified").accepted);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn principle_from_principle_examples() {
    use qhc_core::calculi::builtin_system;
    use qhc_core::metalogic::check_principle_from_principles;
    let sys = builtin_system("QHC-simplified").unwrap();
    let f = |s: &str| parse_formula(s, &sys.signature).unwrap();
    let script = qhc_core::metalogic::parse_script(
        "system QHC-simplified\nmode rule-derivation\npremise-rule ev: ?!q -> q\neigen: alpha\ngoal ?!?alpha -> ?alpha\n1. ?!?alpha -> ?alpha by law ev\nqed 1\n",
        &|n| builtin_system(n).map(|s| s.signature),
    )
    .unwrap();
    let v = check_principle_from_principles(&[f("?!q -> q")], &f("?!?alpha -> ?alpha"), &script, &CorpusLoader::new());
    assert!(v.accepted, "{v}");
}
