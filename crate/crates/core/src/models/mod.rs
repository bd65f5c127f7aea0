//! Finite models of QHC: interior-based, regularization-based, dense-image,
//! subset/sheaf-valued and subset/presheaf-valued.

mod functor;
mod json;
mod space;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::syntax::{Formula, Sort, Term};

pub use functor::{enumerate_functors, representatives, search_homs, Base, Functor, FunctorError};
pub use json::{canonical_json, model_from_json, model_to_json, value_json, ModelFile};
pub use space::{bits, FiniteSpace, Set, SpaceError, SpaceSpec, MAX_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelClass {
    Interior,
    Regularization,
    DenseImage,
    Sheaf,
    Presheaf,
}

impl ModelClass {
    pub const ALL: [ModelClass; 5] =
        [ModelClass::Interior, ModelClass::Regularization, ModelClass::DenseImage, ModelClass::Sheaf, ModelClass::Presheaf];

    pub fn name(self) -> &'static str {
        match self {
            ModelClass::Interior => "interior",
            ModelClass::Regularization => "regularization",
            ModelClass::DenseImage => "dense-image",
            ModelClass::Sheaf => "sheaf",
            ModelClass::Presheaf => "presheaf",
        }
    }

    pub fn parse(s: &str) -> Option<ModelClass> {
        ModelClass::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn functorial(self) -> bool {
        matches!(self, ModelClass::Sheaf | ModelClass::Presheaf)
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error("the map f does not have dense image")]
    NotDense,
    #[error("dense-image models need a set S and a map f")]
    MissingMap,
    #[error("the domain must be non-empty")]
    EmptyDomain,
    #[error("no value for predicate variable `{0}`")]
    Unvalued(String),
    #[error("no value for individual variable `{0}`")]
    Unassigned(String),
    #[error("`{0}`: {1}")]
    BadValue(String, String),
    #[error("only variables may be arguments of atoms in models")]
    TermArgument,
    #[error("{0} valuations exceed the enumeration bound {1}")]
    TooManyValuations(u128, u128),
    #[error("invalid model file: {0}")]
    File(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseMap {
    /// `S = {0, .., s-1}`.
    pub s: usize,
    pub f: Vec<usize>,
}

/// Enumeration bounds for a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest value of a sheaf or presheaf in an enumerated valuation.
    pub stalk_cap: usize,
    /// Bases with more objects than this enumerate values of size at most 1.
    pub full_cap_objects: usize,
    /// Largest number of sections an exponential may have at one object.
    pub work_cap: usize,
    /// Largest number of valuations a validity check may enumerate.
    pub max_valuations: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { stalk_cap: 2, full_cap_objects: 6, work_cap: 20_000, max_valuations: 50_000_000 }
    }
}

/// Everything about a model except its valuation.
#[derive(Debug, Clone)]
pub struct Frame {
    pub class: ModelClass,
    pub space: FiniteSpace,
    pub dense: Option<DenseMap>,
    pub domain: usize,
    pub limits: Limits,
    base: Option<Base>,
    /// Points of each base object (a cluster for sheaves, an open for presheaves).
    objects: Vec<Set>,
    /// The base object of `↑x` for each point `x`.
    point_object: Vec<usize>,
    reps: Arc<OnceLock<Vec<Value>>>,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.class == other.class && self.space == other.space && self.dense == other.dense && self.domain == other.domain
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Set(Set),
    Obj(Arc<Functor>),
}

impl Value {
    pub fn set(&self) -> Set {
        match self {
            Value::Set(s) => *s,
            Value::Obj(_) => panic!("expected a set value"),
        }
    }

    pub fn obj(&self) -> &Functor {
        match self {
            Value::Obj(o) => o,
            Value::Set(_) => panic!("expected an object value"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredValue {
    pub sort: Sort,
    pub arity: usize,
    /// Indexed by argument tuples in lexicographic order.
    pub values: Vec<Value>,
}

pub type Valuation = BTreeMap<String, PredValue>;
pub type Env = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub frame: Frame,
    pub valuation: Valuation,
}

impl Frame {
    pub fn new(class: ModelClass, space: FiniteSpace, dense: Option<DenseMap>, domain: usize) -> Result<Frame, ModelError> {
        Frame::with_limits(class, space, dense, domain, Limits::default())
    }

    pub fn with_limits(
        class: ModelClass,
        space: FiniteSpace,
        dense: Option<DenseMap>,
        domain: usize,
        limits: Limits,
    ) -> Result<Frame, ModelError> {
        if domain == 0 {
            return Err(ModelError::EmptyDomain);
        }
        let dense = match class {
            ModelClass::DenseImage => {
                let d = dense.ok_or(ModelError::MissingMap)?;
                if d.s == 0 || d.s > MAX_POINTS || d.f.len() != d.s || d.f.iter().any(|&x| x >= space.len()) {
                    return Err(ModelError::MissingMap);
                }
                let image = d.f.iter().fold(0, |acc, &x| acc | 1 << x);
                if space.closure(image) != space.full() {
                    return Err(ModelError::NotDense);
                }
                Some(d)
            }
            _ => None,
        };
        let (base, objects, point_object) = match class {
            ModelClass::Sheaf => {
                let cl = space.clusters();
                let k = cl.iter().max().unwrap() + 1;
                let objects: Vec<Set> = (0..k).map(|c| (0..space.len()).filter(|&x| cl[x] == c).fold(0, |a, x| a | 1 << x)).collect();
                let up: Vec<Set> = objects
                    .iter()
                    .map(|&o| {
                        let x = o.trailing_zeros() as usize;
                        bits(space.up(x)).fold(0, |a, y| a | 1 << cl[y])
                    })
                    .collect();
                (Some(Base::new(up)), objects, cl)
            }
            ModelClass::Presheaf => {
                // the value at the empty open is a singleton by convention, as
                // for presheaves of sections, so only non-empty opens are objects
                let mut opens: Vec<Set> = space.opens().into_iter().filter(|&u| u != 0).collect();
                opens.sort_by_key(|u| (std::cmp::Reverse(u.count_ones()), *u));
                let up: Vec<Set> =
                    opens.iter().map(|&u| opens.iter().enumerate().filter(|(_, &v)| v & !u == 0).fold(0, |a, (j, _)| a | 1 << j)).collect();
                let point_object = (0..space.len()).map(|x| opens.iter().position(|&u| u == space.up(x)).unwrap()).collect();
                (Some(Base::new(up)), opens, point_object)
            }
            _ => (None, Vec::new(), Vec::new()),
        };
        Ok(Frame { class, space, dense, domain, limits, base, objects, point_object, reps: Arc::new(OnceLock::new()) })
    }

    /// The stalk cap used when enumerating sheaf or presheaf values.
    pub fn effective_stalk_cap(&self) -> usize {
        if self.objects.len() > self.limits.full_cap_objects {
            self.limits.stalk_cap.min(1)
        } else {
            self.limits.stalk_cap
        }
    }

    pub fn base(&self) -> Option<&Base> {
        self.base.as_ref()
    }

    /// Points of each base object of a sheaf or presheaf frame.
    pub fn objects(&self) -> &[Set] {
        &self.objects
    }

    /// The set carrying c-formulas: `S` for dense-image frames, `X` otherwise.
    pub fn c_full(&self) -> Set {
        match &self.dense {
            Some(d) => (1u32 << d.s) - 1,
            None => self.space.full(),
        }
    }

    /// Every admissible value of an atomic formula of the given sort.
    pub fn candidates(&self, sort: Sort) -> Vec<Value> {
        match (sort, self.class) {
            (Sort::C, ModelClass::Regularization) => self.space.regular_opens().into_iter().map(Value::Set).collect(),
            (Sort::C, _) => (0..=self.c_full()).map(Value::Set).collect(),
            (Sort::I, c) if c.functorial() => self
                .reps
                .get_or_init(|| {
                    representatives(self.base.as_ref().unwrap(), self.effective_stalk_cap()).into_iter().map(|f| Value::Obj(Arc::new(f))).collect()
                })
                .clone(),
            (Sort::I, _) => self.space.opens().into_iter().map(Value::Set).collect(),
        }
    }

    /// Checks that a value is admissible for an atom of the given sort.
    pub fn admissible(&self, sort: Sort, v: &Value) -> Result<(), String> {
        match (sort, v) {
            (Sort::C, Value::Set(s)) => {
                if s & !self.c_full() != 0 {
                    Err("not a subset of the carrier".into())
                } else if self.class == ModelClass::Regularization && !self.space.is_regular_open(*s) {
                    Err("not a regular open set".into())
                } else {
                    Ok(())
                }
            }
            (Sort::I, Value::Set(s)) if !self.class.functorial() => {
                if self.space.is_open(*s) {
                    Ok(())
                } else {
                    Err("not an open set".into())
                }
            }
            (Sort::I, Value::Obj(o)) if self.class.functorial() => {
                if o.sizes().len() == self.objects.len() {
                    Ok(())
                } else {
                    Err("wrong number of stalks".into())
                }
            }
            _ => Err("value of the wrong kind for this class".into()),
        }
    }

    fn bool_and(&self, a: Set, b: Set) -> Set {
        a & b
    }

    fn c_not(&self, a: Set) -> Set {
        match self.class {
            ModelClass::Regularization => self.space.interior(self.space.complement(a)),
            _ => self.c_full() & !a,
        }
    }

    fn c_join(&self, a: Set) -> Set {
        match self.class {
            ModelClass::Regularization => self.space.regularize(a),
            _ => a,
        }
    }

    fn i_full(&self) -> Value {
        match self.class.functorial() {
            true => Value::Obj(Arc::new(Functor::terminal(self.base.as_ref().unwrap()))),
            false => Value::Set(self.space.full()),
        }
    }

    fn i_empty(&self) -> Value {
        match self.class.functorial() {
            true => Value::Obj(Arc::new(Functor::initial(self.base.as_ref().unwrap()))),
            false => Value::Set(0),
        }
    }

    fn reduce(&self, f: Functor) -> Value {
        Value::Obj(Arc::new(f.core(self.base.as_ref().unwrap())))
    }

    fn i_and(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Set(a), Value::Set(b)) => Value::Set(a & b),
            _ => self.reduce(a.obj().product(b.obj(), self.base.as_ref().unwrap())),
        }
    }

    fn i_or(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Set(a), Value::Set(b)) => Value::Set(a | b),
            _ => self.reduce(a.obj().coproduct(b.obj(), self.base.as_ref().unwrap())),
        }
    }

    fn i_imp(&self, a: &Value, b: &Value) -> Result<Value, ModelError> {
        Ok(match (a, b) {
            (Value::Set(a), Value::Set(b)) => Value::Set(self.space.heyting_imp(*a, *b)),
            _ => self.reduce(a.obj().exponential(b.obj(), self.base.as_ref().unwrap(), self.limits.work_cap)?),
        })
    }

    fn query(&self, a: &Value) -> Set {
        match self.class {
            ModelClass::Interior => a.set(),
            ModelClass::Regularization => self.space.regularize(a.set()),
            ModelClass::DenseImage => {
                let d = self.dense.as_ref().unwrap();
                (0..d.s).filter(|&s| a.set() >> d.f[s] & 1 == 1).fold(0, |acc, s| acc | 1 << s)
            }
            ModelClass::Sheaf | ModelClass::Presheaf => {
                let support = a.obj().support();
                (0..self.space.len()).filter(|&x| support >> self.point_object[x] & 1 == 1).fold(0, |acc, x| acc | 1 << x)
            }
        }
    }

    fn bang(&self, a: Set) -> Value {
        match self.class {
            ModelClass::Interior => Value::Set(self.space.interior(a)),
            ModelClass::Regularization => Value::Set(a),
            ModelClass::DenseImage => {
                let d = self.dense.as_ref().unwrap();
                let missed = (0..d.s).filter(|&s| a >> s & 1 == 0).fold(0, |acc, s| acc | 1 << d.f[s]);
                Value::Set(self.space.interior(self.space.complement(missed)))
            }
            ModelClass::Sheaf | ModelClass::Presheaf => {
                let int = self.space.interior(a);
                // a cluster inside Int A, or an open contained in Int A
                let support = self
                    .objects
                    .iter()
                    .enumerate()
                    .filter(|(_, &o)| o & !int == 0)
                    .fold(0, |acc, (j, _)| acc | 1 << j);
                Value::Obj(Arc::new(Functor::indicator(self.base.as_ref().unwrap(), support)))
            }
        }
    }

    /// Whether a value of the given sort counts as true.
    pub fn designated_value(&self, sort: Sort, v: &Value) -> bool {
        match (sort, v) {
            (Sort::C, Value::Set(s)) => *s == self.c_full(),
            (Sort::I, Value::Set(s)) => *s == self.space.full(),
            (Sort::I, Value::Obj(o)) => o.has_global_section(self.base.as_ref().unwrap()),
            (Sort::C, Value::Obj(_)) => false,
        }
    }
}

// ---------------------------------------------------------------------------
// compiled formulas

#[derive(Debug, Clone)]
enum Node {
    Top,
    Bot,
    Triv,
    Abs,
    Atom { pred: usize, args: Vec<usize> },
    And(Sort, Box<Node>, Box<Node>),
    Or(Sort, Box<Node>, Box<Node>),
    Imp(Sort, Box<Node>, Box<Node>),
    Forall(Sort, usize, Box<Node>),
    Exists(Sort, usize, Box<Node>),
    Query(Box<Node>),
    Bang(Box<Node>),
}

/// A formula with predicate variables and individual variables numbered.
#[derive(Debug, Clone)]
pub struct Compiled {
    node: Node,
    pub sort: Sort,
    /// Free individual variables, occupying the first environment slots.
    pub free: Vec<String>,
    slots: usize,
}

/// The predicate variables of a family of formulas, with arity and sort.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredTable {
    pub preds: Vec<(String, usize, Sort)>,
}

impl PredTable {
    pub fn of(formulas: &[&Formula]) -> PredTable {
        let mut map = BTreeMap::new();
        for f in formulas {
            for (name, sort, arity) in f.pred_decls() {
                map.insert(name, (arity, sort));
            }
        }
        PredTable { preds: map.into_iter().map(|(n, (a, s))| (n, a, s)).collect() }
    }

    fn index(&self, name: &str) -> usize {
        self.preds.iter().position(|(n, _, _)| n == name).expect("predicate in table")
    }
}

pub fn compile(f: &Formula, table: &PredTable) -> Result<Compiled, ModelError> {
    let free: Vec<String> = f.free_indiv().into_iter().collect();
    let mut scope: Vec<(String, usize)> = free.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
    let mut slots = free.len();
    let node = compile_node(f, table, &mut scope, &mut slots)?;
    Ok(Compiled { node, sort: f.sort(), free, slots })
}

fn compile_node(f: &Formula, table: &PredTable, scope: &mut Vec<(String, usize)>, slots: &mut usize) -> Result<Node, ModelError> {
    use Formula::*;
    let go = |g: &Formula, scope: &mut Vec<(String, usize)>, slots: &mut usize| compile_node(g, table, scope, slots).map(Box::new);
    Ok(match f {
        Top => Node::Top,
        Bot => Node::Bot,
        Triv => Node::Triv,
        Absurd => Node::Abs,
        Atom { pred, args, .. } => {
            let mut idx = Vec::new();
            for a in args {
                let Term::Var(x) = a else { return Err(ModelError::TermArgument) };
                let slot = scope.iter().rev().find(|(y, _)| y == x).map(|(_, s)| *s).ok_or_else(|| ModelError::Unassigned(x.clone()))?;
                idx.push(slot);
            }
            Node::Atom { pred: table.index(pred), args: idx }
        }
        And(a, b) => Node::And(f.sort(), go(a, scope, slots)?, go(b, scope, slots)?),
        Or(a, b) => Node::Or(f.sort(), go(a, scope, slots)?, go(b, scope, slots)?),
        Imp(a, b) => Node::Imp(f.sort(), go(a, scope, slots)?, go(b, scope, slots)?),
        Forall(x, a) | Exists(x, a) => {
            let slot = *slots;
            *slots += 1;
            scope.push((x.clone(), slot));
            let body = go(a, scope, slots)?;
            scope.pop();
            if matches!(f, Forall(..)) {
                Node::Forall(f.sort(), slot, body)
            } else {
                Node::Exists(f.sort(), slot, body)
            }
        }
        Query(a) => Node::Query(go(a, scope, slots)?),
        Bang(a) => Node::Bang(go(a, scope, slots)?),
        // proof formulas are read through the forgetful map [t]F |-> ?!F
        ProofOf(_, a) => Node::Query(Box::new(Node::Bang(go(a, scope, slots)?))),
    })
}

struct Evaluator<'a> {
    frame: &'a Frame,
    vals: &'a [&'a [Value]],
    arities: &'a [usize],
}

impl Evaluator<'_> {
    fn eval(&self, n: &Node, env: &mut Vec<usize>) -> Result<Value, ModelError> {
        let fr = self.frame;
        Ok(match n {
            Node::Top => Value::Set(fr.c_full()),
            Node::Bot => Value::Set(0),
            Node::Triv => fr.i_full(),
            Node::Abs => fr.i_empty(),
            Node::Atom { pred, args } => {
                let idx = args.iter().fold(0, |acc, &s| acc * fr.domain + env[s]);
                debug_assert_eq!(args.len(), self.arities[*pred]);
                self.vals[*pred][idx].clone()
            }
            Node::And(sort, a, b) | Node::Or(sort, a, b) | Node::Imp(sort, a, b) => {
                let x = self.eval(a, env)?;
                let y = self.eval(b, env)?;
                match (sort, n) {
                    (Sort::C, Node::And(..)) => Value::Set(fr.bool_and(x.set(), y.set())),
                    (Sort::C, Node::Or(..)) => Value::Set(fr.c_join(x.set() | y.set())),
                    (Sort::C, _) => Value::Set(fr.c_join(fr.c_not(x.set()) | y.set())),
                    (Sort::I, Node::And(..)) => fr.i_and(&x, &y),
                    (Sort::I, Node::Or(..)) => fr.i_or(&x, &y),
                    (Sort::I, _) => fr.i_imp(&x, &y)?,
                }
            }
            Node::Forall(sort, slot, a) | Node::Exists(sort, slot, a) => {
                let all = matches!(n, Node::Forall(..));
                let mut acc: Option<Value> = None;
                for d in 0..fr.domain {
                    if env.len() <= *slot {
                        env.resize(*slot + 1, 0);
                    }
                    env[*slot] = d;
                    let v = self.eval(a, env)?;
                    acc = Some(match acc {
                        None => v,
                        Some(prev) => match (sort, all) {
                            (Sort::C, true) => Value::Set(prev.set() & v.set()),
                            (Sort::C, false) => Value::Set(prev.set() | v.set()),
                            (Sort::I, true) => fr.i_and(&prev, &v),
                            (Sort::I, false) => fr.i_or(&prev, &v),
                        },
                    });
                }
                let v = acc.expect("non-empty domain");
                match (sort, all, v) {
                    (Sort::C, false, Value::Set(s)) => Value::Set(fr.c_join(s)),
                    (Sort::I, true, Value::Set(s)) => Value::Set(fr.space.interior(s)),
                    (_, _, v) => v,
                }
            }
            Node::Query(a) => Value::Set(fr.query(&self.eval(a, env)?)),
            Node::Bang(a) => fr.bang(self.eval(a, env)?.set()),
        })
    }
}

/// All assignments of `vars` to the domain, in lexicographic order.
pub fn envs(domain: usize, vars: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = domain.pow(vars as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0; vars];
        for i in (0..vars).rev() {
            v[i] = k % domain;
            k /= domain;
        }
        v
    })
}

fn valuation_slices<'a>(frame: &Frame, table: &PredTable, val: &'a Valuation) -> Result<Vec<&'a [Value]>, ModelError> {
    table
        .preds
        .iter()
        .map(|(name, arity, sort)| {
            let pv = val.get(name).ok_or_else(|| ModelError::Unvalued(name.clone()))?;
            if pv.arity != *arity || pv.sort != *sort || pv.values.len() != frame.domain.pow(*arity as u32) {
                return Err(ModelError::BadValue(name.clone(), "arity, sort or tuple count does not match".into()));
            }
            Ok(pv.values.as_slice())
        })
        .collect()
}

impl Model {
    pub fn new(frame: Frame, valuation: Valuation) -> Result<Model, ModelError> {
        for (name, pv) in &valuation {
            if pv.values.len() != frame.domain.pow(pv.arity as u32) {
                return Err(ModelError::BadValue(name.clone(), "wrong number of tuples".into()));
            }
            for v in &pv.values {
                frame.admissible(pv.sort, v).map_err(|e| ModelError::BadValue(name.clone(), e))?;
            }
        }
        Ok(Model { frame, valuation })
    }

    /// The semantic value of `f` under `env`.
    pub fn eval(&self, f: &Formula, env: &Env) -> Result<Value, ModelError> {
        let table = PredTable::of(&[f]);
        let c = compile(f, &table)?;
        let vals = valuation_slices(&self.frame, &table, &self.valuation)?;
        let arities: Vec<usize> = table.preds.iter().map(|p| p.1).collect();
        let mut slots = Vec::with_capacity(c.slots);
        for x in &c.free {
            let d = *env.get(x).ok_or_else(|| ModelError::Unassigned(x.clone()))?;
            if d >= self.frame.domain {
                return Err(ModelError::BadValue(x.clone(), "outside the domain".into()));
            }
            slots.push(d);
        }
        Evaluator { frame: &self.frame, vals: &vals, arities: &arities }.eval(&c.node, &mut slots)
    }

    pub fn designated(&self, f: &Formula, env: &Env) -> Result<bool, ModelError> {
        Ok(self.frame.designated_value(f.sort(), &self.eval(f, env)?))
    }

    /// `f` is designated under every assignment of its free variables.
    pub fn satisfies(&self, f: &Formula) -> Result<Option<Env>, ModelError> {
        let free: Vec<String> = f.free_indiv().into_iter().collect();
        for e in envs(self.frame.domain, free.len()) {
            let env: Env = free.iter().cloned().zip(e).collect();
            if !self.designated(f, &env)? {
                return Ok(Some(env));
            }
        }
        Ok(None)
    }
}

/// The outcome of a validity check over all valuations of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub holds: bool,
    /// A falsifying valuation and assignment when `holds` is false.
    pub counterexample: Option<(Valuation, Env)>,
    pub valuations: u128,
}

/// A principle or rule, prepared for repeated checking.
#[derive(Debug, Clone)]
pub struct Obligation {
    table: PredTable,
    premises: Vec<Compiled>,
    conclusion: Compiled,
}

impl Obligation {
    pub fn principle(f: &Formula) -> Result<Obligation, ModelError> {
        Obligation::rule(&[], f)
    }

    pub fn rule(premises: &[Formula], conclusion: &Formula) -> Result<Obligation, ModelError> {
        let all: Vec<&Formula> = premises.iter().chain(std::iter::once(conclusion)).collect();
        let table = PredTable::of(&all);
        let premises = premises.iter().map(|p| compile(p, &table)).collect::<Result<_, _>>()?;
        let conclusion = compile(conclusion, &table)?;
        Ok(Obligation { table, premises, conclusion })
    }

    pub fn preds(&self) -> &PredTable {
        &self.table
    }

    /// Number of valuations over `frame`.
    pub fn valuation_count(&self, frame: &Frame) -> u128 {
        self.table
            .preds
            .iter()
            .map(|(_, arity, sort)| (frame.candidates(*sort).len() as u128).pow(frame.domain.pow(*arity as u32) as u32))
            .product()
    }

    /// `None` if `c` is designated under every assignment; otherwise the first failing one.
    fn first_failure(&self, frame: &Frame, c: &Compiled, ev: &Evaluator) -> Result<Option<Vec<usize>>, ModelError> {
        for mut e in envs(frame.domain, c.free.len()) {
            let v = ev.eval(&c.node, &mut e)?;
            if !frame.designated_value(c.sort, &v) {
                e.truncate(c.free.len());
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    /// Checks one valuation; `Some(env)` if it refutes the obligation.
    pub fn refuted_by(&self, frame: &Frame, val: &Valuation) -> Result<Option<Env>, ModelError> {
        let vals = valuation_slices(frame, &self.table, val)?;
        self.refuted_by_slices(frame, &vals)
    }

    fn refuted_by_slices(&self, frame: &Frame, vals: &[&[Value]]) -> Result<Option<Env>, ModelError> {
        let arities: Vec<usize> = self.table.preds.iter().map(|p| p.1).collect();
        let ev = Evaluator { frame, vals, arities: &arities };
        for p in &self.premises {
            if self.first_failure(frame, p, &ev)?.is_some() {
                return Ok(None);
            }
        }
        Ok(self.first_failure(frame, &self.conclusion, &ev)?.map(|e| self.conclusion.free.iter().cloned().zip(e).collect()))
    }

    /// Checks every valuation of the frame; the reported counterexample is
    /// the first in enumeration order, independent of scheduling.
    pub fn check(&self, frame: &Frame) -> Result<Check, ModelError> {
        let total = self.valuation_count(frame);
        if total > frame.limits.max_valuations {
            return Err(ModelError::TooManyValuations(total, frame.limits.max_valuations));
        }
        let cands: Vec<Vec<Value>> = self.table.preds.iter().map(|(_, _, s)| frame.candidates(*s)).collect();
        let widths: Vec<usize> = self.table.preds.iter().map(|(_, a, _)| frame.domain.pow(*a as u32)).collect();
        let decode = |mut k: u128| -> Vec<Vec<Value>> {
            let mut out: Vec<Vec<Value>> = Vec::with_capacity(cands.len());
            for (c, &w) in cands.iter().zip(&widths).rev() {
                let mut vals = vec![c[0].clone(); w];
                for slot in vals.iter_mut().rev() {
                    let n = c.len() as u128;
                    *slot = c[(k % n) as usize].clone();
                    k /= n;
                }
                out.push(vals);
            }
            out.reverse();
            out
        };
        let found = (0..total as u64).into_par_iter().find_map_first(|k| {
            let vals = decode(k as u128);
            let slices: Vec<&[Value]> = vals.iter().map(Vec::as_slice).collect();
            match self.refuted_by_slices(frame, &slices) {
                Ok(None) => None,
                Ok(Some(env)) => Some(Ok((vals, env))),
                Err(e) => Some(Err(e)),
            }
        });
        match found {
            None => Ok(Check { holds: true, counterexample: None, valuations: total }),
            Some(Err(e)) => Err(e),
            Some(Ok((vals, env))) => {
                let valuation = self
                    .table
                    .preds
                    .iter()
                    .zip(vals)
                    .map(|((n, a, s), values)| (n.clone(), PredValue { sort: *s, arity: *a, values }))
                    .collect();
                Ok(Check { holds: false, counterexample: Some((valuation, env)), valuations: total })
            }
        }
    }
}

/// Whether the principle `·f` is valid in the frame: designated under
/// every valuation of its predicate variables and every assignment.
pub fn valid_principle(frame: &Frame, f: &Formula) -> Result<Check, ModelError> {
    Obligation::principle(f)?.check(frame)
}

/// Whether the rule holds: every valuation designating all premises under
/// all assignments designates the conclusion under all assignments.
pub fn holds_rule(frame: &Frame, premises: &[Formula], conclusion: &Formula) -> Result<Check, ModelError> {
    Obligation::rule(premises, conclusion)?.check(frame)
}

/// A value for a 0-ary predicate variable.
pub fn constant_value(sort: Sort, v: Value) -> PredValue {
    PredValue { sort, arity: 0, values: vec![v] }
}
