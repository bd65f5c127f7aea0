mod common;

use common::witnesses::{check_golden, hand_witnesses, DESIGNATED};
use qhc_core::search::{find_countermodel, ModelWitness, SearchBounds, SearchOutcome, Target};

#[test]
fn golden_witnesses_are_frozen_and_reverify() {
    for (name, w) in hand_witnesses() {
        check_golden(name, &w).unwrap();
    }
}

#[test]
fn search_rediscovers_designated_separations() {
    for (valid, fails, class) in DESIGNATED {
        let bounds = SearchBounds { max_points: 4, classes: vec![*class], ..Default::default() };
        let valid: Vec<Target> = valid.iter().map(|k| Target::resolve(k).unwrap()).collect();
        match find_countermodel(&valid, &Target::resolve(fails).unwrap(), &bounds).unwrap() {
            SearchOutcome::Found(w) => {
                assert_eq!(w.model.frame.class, *class);
                w.verify().unwrap();
                ModelWitness::from_json(&w.to_json()).unwrap().verify().unwrap();
            }
            SearchOutcome::Exhausted(e) => panic!("{fails} not separated: {e:?}"),
        }
    }
}
