//! The model file format and its canonical serialization.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use super::space::bits;
use super::{DenseMap, FiniteSpace, Frame, Functor, Model, ModelClass, ModelError, PredValue, Set, Value};
use crate::syntax::Sort;

/// A model as stored on disk. Subsets are point lists; sheaf and presheaf
/// values give the size of each base object and the maps along the base's
/// covering pairs, both as listed under `base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub class: ModelClass,
    pub points: usize,
    #[serde(default)]
    pub leq: Vec<(usize, usize)>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<usize>>,
    pub domain: usize,
    #[serde(default)]
    pub valuation: BTreeMap<String, PredEntry>,
    /// Informational: the objects (as point lists) and covering pairs of the
    /// base of a sheaf or presheaf model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Json>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredEntry {
    pub sort: String,
    pub arity: usize,
    pub values: Vec<Json>,
}

fn set_json(s: Set) -> Json {
    Json::from(bits(s).collect::<Vec<_>>())
}

fn set_from_json(name: &str, v: &Json) -> Result<Set, ModelError> {
    let err = || ModelError::BadValue(name.to_string(), format!("expected a list of points, got {v}"));
    let arr = v.as_array().ok_or_else(err)?;
    arr.iter().try_fold(0, |acc, p| {
        let p = p.as_u64().filter(|&p| p < 32).ok_or_else(err)?;
        Ok(acc | 1 << p)
    })
}

pub fn value_json(v: &Value, frame: &Frame) -> Json {
    match v {
        Value::Set(s) => set_json(*s),
        Value::Obj(f) => json!({ "sizes": f.sizes(), "maps": f.cover_maps(frame.base().unwrap()) }),
    }
}

fn value_from_json(name: &str, v: &Json, frame: &Frame) -> Result<Value, ModelError> {
    match (v, frame.base()) {
        (Json::Object(o), Some(base)) => {
            let err = |m: &str| ModelError::BadValue(name.to_string(), m.to_string());
            let sizes: Vec<usize> = serde_json::from_value(o.get("sizes").cloned().ok_or_else(|| err("missing sizes"))?)
                .map_err(|e| err(&e.to_string()))?;
            let maps: Vec<Vec<u16>> = serde_json::from_value(o.get("maps").cloned().unwrap_or(json!([])))
                .map_err(|e| err(&e.to_string()))?;
            if sizes.len() != base.len() || maps.len() != base.covers().len() {
                return Err(err("sizes or maps do not match the base"));
            }
            let f = Functor::from_covers(base, sizes, &maps).ok_or_else(|| err("maps are not functorial"))?;
            Ok(Value::Obj(Arc::new(f)))
        }
        (Json::Array(_), Some(base)) => {
            // an open set given as points stands for its indicator
            let s = set_from_json(name, v)?;
            let support = frame.objects().iter().enumerate().filter(|(_, &o)| o & !s == 0 && o != 0).fold(0, |a, (j, _)| a | 1 << j);
            Ok(Value::Obj(Arc::new(Functor::indicator(base, support))))
        }
        _ => Ok(Value::Set(set_from_json(name, v)?)),
    }
}

fn sort_name(s: Sort) -> &'static str {
    match s {
        Sort::I => "problem",
        Sort::C => "pred",
    }
}

pub fn model_to_json(m: &Model) -> ModelFile {
    let fr = &m.frame;
    let base = fr.base().map(|b| {
        json!({
            "objects": fr.objects().iter().map(|&o| set_json(o)).collect::<Vec<_>>(),
            "covers": b.covers(),
        })
    });
    ModelFile {
        class: fr.class,
        points: fr.space.len(),
        leq: fr.space.strict_pairs(),
        s: fr.dense.as_ref().map(|d| d.s),
        f: fr.dense.as_ref().map(|d| d.f.clone()),
        domain: fr.domain,
        valuation: m
            .valuation
            .iter()
            .map(|(n, pv)| {
                let entry = PredEntry {
                    sort: sort_name(pv.sort).into(),
                    arity: pv.arity,
                    values: pv.values.iter().map(|v| value_json(v, fr)).collect(),
                };
                (n.clone(), entry)
            })
            .collect(),
        base,
    }
}

pub fn model_from_json(file: &ModelFile) -> Result<Model, ModelError> {
    let space = FiniteSpace::from_preorder(file.points, &file.leq)?;
    let dense = match (file.s, &file.f) {
        (Some(s), Some(f)) => Some(DenseMap { s, f: f.clone() }),
        _ => None,
    };
    let frame = Frame::new(file.class, space, dense, file.domain)?;
    let mut valuation = BTreeMap::new();
    for (name, e) in &file.valuation {
        let sort = match e.sort.as_str() {
            "problem" | "i" => Sort::I,
            "pred" | "proper" | "c" => Sort::C,
            other => return Err(ModelError::BadValue(name.clone(), format!("unknown sort `{other}`"))),
        };
        let values = e.values.iter().map(|v| value_from_json(name, v, &frame)).collect::<Result<_, _>>()?;
        valuation.insert(name.clone(), PredValue { sort, arity: e.arity, values });
    }
    Model::new(frame, valuation)
}

/// Sorted keys, compact, with a trailing newline.
pub fn canonical_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("serializable");
    let mut s = serde_json::to_string(&value).expect("serializable");
    s.push('\n');
    s
}

impl Model {
    pub fn to_canonical_json(&self) -> String {
        canonical_json(&model_to_json(self))
    }

    pub fn from_json_str(text: &str) -> Result<Model, ModelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::File(e.to_string()))?;
        model_from_json(&file)
    }
}
