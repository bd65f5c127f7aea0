use std::collections::BTreeMap;
use std::sync::Arc;

use qhc_core::models::{
    constant_value, holds_rule, valid_principle, DenseMap, Env, FiniteSpace, Frame, Functor, Model, ModelClass, Value,
};
use qhc_core::syntax::{parse_formula, Formula, Signature, Sort};

fn sig() -> Signature {
    Signature::new()
        .problem("alpha", 0)
        .problem("beta", 0)
        .problem("gamma", 0)
        .problem("theta", 1)
        .pred("p", 0)
        .pred("q", 0)
        .pred("u", 1)
}

fn f(s: &str) -> Formula {
    parse_formula(s, &sig()).unwrap()
}

fn frame(class: ModelClass, space: FiniteSpace) -> Frame {
    let dense = (class == ModelClass::DenseImage).then(|| DenseMap { s: space.len(), f: (0..space.len()).collect() });
    Frame::new(class, space, dense, 1).unwrap()
}

fn model(fr: Frame, vals: &[(&str, Sort, Value)]) -> Model {
    let valuation = vals.iter().map(|(n, s, v)| (n.to_string(), constant_value(*s, v.clone()))).collect();
    Model::new(fr, valuation).unwrap()
}

#[test]
fn interior_sierpinski_excluded_middle() {
    let m = model(frame(ModelClass::Interior, FiniteSpace::sierpinski()), &[("alpha", Sort::I, Value::Set(0b10))]);
    assert_eq!(m.eval(&f("alpha | ~alpha"), &Env::new()).unwrap(), Value::Set(0b10));
    assert!(!m.designated(&f("alpha | ~alpha"), &Env::new()).unwrap());
    assert!(m.designated(&f("Triv"), &Env::new()).unwrap());
}

#[test]
fn eval_is_valid_in_every_class() {
    for class in ModelClass::ALL {
        for space in [FiniteSpace::point(), FiniteSpace::sierpinski(), FiniteSpace::discrete(2)] {
            let fr = frame(class, space);
            assert!(valid_principle(&fr, &f("?!p -> p")).unwrap().holds, "{class}");
            assert!(holds_rule(&fr, &[f("p")], &f("!p")).unwrap().holds, "{class}");
        }
    }
}

#[test]
fn regularization_sierpinski_nabla() {
    let fr = frame(ModelClass::Regularization, FiniteSpace::sierpinski());
    let m = model(fr.clone(), &[("alpha", Sort::I, Value::Set(0b10))]);
    assert_eq!(m.eval(&f("nabla alpha"), &Env::new()).unwrap(), Value::Set(0b11));
    let pc = valid_principle(&fr, &f("nabla alpha -> alpha")).unwrap();
    assert!(!pc.holds);
    let (val, _) = pc.counterexample.unwrap();
    assert_eq!(val["alpha"].values, vec![Value::Set(0b10)]);
    assert!(!holds_rule(&fr, &[f("nabla alpha")], &f("alpha")).unwrap().holds);
    assert!(valid_principle(&fr, &f("?(gamma | ~gamma)")).unwrap().holds);
}

#[test]
fn pc_rule_holds_on_interior_models() {
    for space in [FiniteSpace::sierpinski(), FiniteSpace::from_relation(3, &[(0, 1), (0, 2)]).unwrap()] {
        assert!(holds_rule(&frame(ModelClass::Interior, space), &[f("nabla alpha")], &f("alpha")).unwrap().holds);
    }
}

#[test]
fn dense_image_operators() {
    let fr = Frame::new(ModelClass::DenseImage, FiniteSpace::sierpinski(), Some(DenseMap { s: 2, f: vec![1, 1] }), 1).unwrap();
    let m = model(fr, &[("p", Sort::C, Value::Set(0b01)), ("alpha", Sort::I, Value::Set(0b10))]);
    assert_eq!(m.eval(&f("!p"), &Env::new()).unwrap(), Value::Set(0));
    assert_eq!(m.eval(&f("?alpha"), &Env::new()).unwrap(), Value::Set(0b11));
    assert!(Frame::new(ModelClass::DenseImage, FiniteSpace::sierpinski(), Some(DenseMap { s: 1, f: vec![0] }), 1).is_err());
}

#[test]
fn sheaf_examples() {
    let point = frame(ModelClass::Sheaf, FiniteSpace::point());
    let base = point.base().unwrap().clone();
    let two = Value::Obj(Arc::new(Functor::constant(&base, 2)));
    let m = model(point, &[("alpha", Sort::I, two)]);
    assert!(m.designated(&f("alpha | ~alpha"), &Env::new()).unwrap());

    let sier = frame(ModelClass::Sheaf, FiniteSpace::sierpinski());
    let m = model(sier, &[("p", Sort::C, Value::Set(0b10))]);
    let g = f("!p | ~!p");
    assert!(!m.designated(&g, &Env::new()).unwrap());
    assert_eq!(m.eval(&f("?(!p | ~!p)"), &Env::new()).unwrap(), Value::Set(0b10));
}

#[test]
fn interior_identities() {
    for space in [FiniteSpace::sierpinski(), FiniteSpace::from_relation(3, &[(0, 1), (1, 2)]).unwrap()] {
        let fr = frame(ModelClass::Interior, space.clone());
        for u in space.opens() {
            let m = model(fr.clone(), &[("alpha", Sort::I, Value::Set(u))]);
            assert_eq!(m.eval(&f("nabla alpha"), &Env::new()).unwrap(), Value::Set(u));
        }
        for a in space.subsets() {
            let m = model(fr.clone(), &[("p", Sort::C, Value::Set(a))]);
            assert_eq!(m.eval(&f("box p"), &Env::new()).unwrap(), Value::Set(space.interior(a)));
        }
    }
}

#[test]
fn quantifiers_over_a_two_element_domain() {
    let fr = Frame::new(ModelClass::Interior, FiniteSpace::sierpinski(), None, 2).unwrap();
    let mut val = BTreeMap::new();
    val.insert(
        "theta".to_string(),
        qhc_core::models::PredValue { sort: Sort::I, arity: 1, values: vec![Value::Set(0b10), Value::Set(0b11)] },
    );
    let m = Model::new(fr.clone(), val).unwrap();
    assert_eq!(m.eval(&f("forall x. theta(x)"), &Env::new()).unwrap(), Value::Set(0b10));
    assert_eq!(m.eval(&f("exists x. theta(x)"), &Env::new()).unwrap(), Value::Set(0b11));
    let env: Env = [("y".to_string(), 0)].into_iter().collect();
    assert_eq!(m.eval(&f("theta(y)"), &env).unwrap(), Value::Set(0b10));
    assert!(valid_principle(&fr, &f("(forall x. theta(x)) -> theta(y)")).unwrap().holds);
    assert!(!valid_principle(&fr, &f("theta(y) -> forall x. theta(x)")).unwrap().holds);
}

#[test]
fn json_round_trip() {
    let fr = Frame::new(ModelClass::DenseImage, FiniteSpace::sierpinski(), Some(DenseMap { s: 2, f: vec![1, 1] }), 1).unwrap();
    let m = model(fr, &[("p", Sort::C, Value::Set(0b01)), ("alpha", Sort::I, Value::Set(0b10))]);
    let text = m.to_canonical_json();
    let back = Model::from_json_str(&text).unwrap();
    assert_eq!(back, m);
    assert_eq!(back.to_canonical_json(), text);

    let fr = frame(ModelClass::Sheaf, FiniteSpace::from_relation(3, &[(0, 1), (0, 2)]).unwrap());
    let reps = fr.candidates(Sort::I);
    let m = model(fr, &[("alpha", Sort::I, reps.last().unwrap().clone())]);
    let text = m.to_canonical_json();
    assert_eq!(Model::from_json_str(&text).unwrap().to_canonical_json(), text);
}
