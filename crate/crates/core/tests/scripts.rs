use qhc_core::calculi::{check_shipped, theorem_corpus, NEGATIVE_SCRIPTS, SCRIPTS};

#[test]
fn every_shipped_script_has_the_expected_verdict() {
    let mut bad = Vec::new();
    for (name, _) in SCRIPTS {
        let v = check_shipped(name).unwrap();
        let expected = NEGATIVE_SCRIPTS.iter().find(|(n, _)| n == name).map(|(_, c)| *c);
        let ok = match expected {
            None => v.accepted,
            Some(code) => v.code().map(|c| c.to_string()).as_deref() == Some(code),
        };
        if !ok {
            bad.push(format!("{name}: {v}"));
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn corpus_entries_point_at_scripts() {
    let corpus = theorem_corpus();
    assert!(!corpus.is_empty());
    for e in corpus {
        if let Some(p) = &e.script {
            assert!(qhc_core::calculi::script_text(p).is_some(), "{}", e.name);
        }
    }
}
