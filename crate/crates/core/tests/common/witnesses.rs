//! Hand-computed separating models, frozen as JSON under `tests/golden`.
//! Set `QHC_BLESS=1` to rewrite the files.

use std::path::PathBuf;

use qhc_core::models::{constant_value, DenseMap, FiniteSpace, Frame, Model, ModelClass, Valuation, Value};
use qhc_core::search::{Certificate, ModelWitness, Target};
use qhc_core::syntax::Sort;

fn v_space() -> FiniteSpace {
    FiniteSpace::from_preorder(3, &[(0, 1), (0, 2)]).unwrap()
}

fn witness(frame: Frame, vals: &[(&str, Sort, u32)], valid: &[&str], fails: &str) -> ModelWitness {
    let valuation: Valuation = vals.iter().map(|&(n, s, v)| (n.to_string(), constant_value(s, Value::Set(v)))).collect();
    let model = Model::new(frame, valuation).unwrap();
    let valid = valid
        .iter()
        .map(|k| {
            let c = Target::resolve(k).unwrap().statement.check(&model.frame).unwrap();
            assert!(c.holds, "{k} should hold");
            Certificate { statement: k.to_string(), valuations: c.valuations as u64 }
        })
        .collect();
    ModelWitness { model, fails: fails.into(), env: Default::default(), valid }
}

/// Values are bitmasks over points; Sierpiński has `0 <= 1`, so its opens
/// are {}, {1} and {0,1}.
pub fn hand_witnesses() -> Vec<(&'static str, ModelWitness)> {
    let frame = |class, space, dense| Frame::new(class, space, dense, 1).unwrap();
    let sierp = FiniteSpace::sierpinski;
    vec![
        // gamma | ~gamma = {1} | Int{0} = {1}, and ? is the identity
        ("qhc-not-h", witness(frame(ModelClass::Interior, sierp(), None), &[("gamma", Sort::I, 0b10)], &[], "H")),
        // !p = {1}, ~!~p = ~Int{0} = X, so the implication is {1}
        ("qhc-not-k", witness(frame(ModelClass::Interior, sierp(), None), &[("p", Sort::C, 0b10)], &[], "K")),
        // nabla alpha = reg{1} = X while alpha = {1}
        ("qhc-not-pc", witness(frame(ModelClass::Regularization, sierp(), None), &[("alpha", Sort::I, 0b10)], &[], "PC")),
        // nabla(alpha | beta) = reg{1,2} = X, nabla alpha | nabla beta = {1,2}
        (
            "qhc-not-d",
            witness(frame(ModelClass::Regularization, v_space(), None), &[("alpha", Sort::I, 0b010), ("beta", Sort::I, 0b100)], &[], "D"),
        ),
        // S = {s,t} both sent to 1; !{s} = Int(X - f{t}) = {}, ~!~{s} = X
        (
            "h-not-k",
            witness(
                frame(ModelClass::DenseImage, sierp(), Some(DenseMap { s: 2, f: vec![1, 1] })),
                &[("p", Sort::C, 0b01)],
                &["H"],
                "K",
            ),
        ),
        ("h-not-pc", witness(frame(ModelClass::Regularization, sierp(), None), &[("alpha", Sort::I, 0b10)], &["H"], "PC")),
        (
            "h-not-d",
            witness(frame(ModelClass::Regularization, v_space(), None), &[("alpha", Sort::I, 0b010), ("beta", Sort::I, 0b100)], &["H"], "D"),
        ),
    ]
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

/// Compares `w` with its golden file (rewriting it first under
/// `QHC_BLESS`) and re-verifies the stored copy.
pub fn check_golden(name: &str, w: &ModelWitness) -> Result<(), String> {
    w.verify().map_err(|e| format!("{name}: {e}"))?;
    let path = golden_path(name);
    if std::env::var_os("QHC_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, w.to_json()).unwrap();
    }
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if text != w.to_json() {
        return Err(format!("{name} drifted from its golden file"));
    }
    let back = ModelWitness::from_json(&text).map_err(|e| format!("{name}: {e}"))?;
    back.verify().map_err(|e| format!("{name} from file: {e}"))
}

/// Designated separations: statements assumed valid, the refuted key and
/// the class the search should find it in.
pub const DESIGNATED: &[(&[&str], &str, ModelClass)] = &[
    (&[], "H", ModelClass::Interior),
    (&[], "K", ModelClass::Interior),
    (&[], "PC", ModelClass::Regularization),
    (&[], "D", ModelClass::Regularization),
    (&["H"], "K", ModelClass::DenseImage),
    (&["H"], "PC", ModelClass::Regularization),
    (&["H"], "D", ModelClass::Regularization),
];
