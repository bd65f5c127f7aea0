//! Every single-line edit of a shipped accepted script must be rejected.

mod common;

#[test]
fn mutation_suite_rejects_every_mutant() {
    let (total, survivors) = common::mutation::run_mutation_suite();
    assert!(total >= 100, "only {total} mutants");
    assert!(survivors.is_empty(), "{}", survivors.join("\n"));
}
