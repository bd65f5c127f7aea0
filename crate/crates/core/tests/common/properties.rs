//! Seeded property checks on printing, parsing and substitution. Each
//! panics on the first failure and otherwise returns a summary.

use std::collections::BTreeMap;

use qhc_core::models::{Env, FiniteSpace, Frame, Model, ModelClass, PredValue, Valuation, Value};
use qhc_core::search::{dense_maps, spaces_of_size};
use qhc_core::syntax::random::{profile, profile_signature, Generator, PROFILES};
use qhc_core::syntax::{alpha_equal, apply_substitution, parse_formula, print_formula, Formula, Sort, Substitution, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;

pub fn print_then_parse_is_identity() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    for name in PROFILES {
        let sig = profile_signature(profile(name).unwrap());
        let gen = Generator { sig: &sig, quantifiers: true };
        for _ in 0..2500 {
            let sort = gen.any_sort(&mut rng);
            let depth = rng.gen_range(0..6);
            let f = gen.formula(&mut rng, sort, depth);
            assert_eq!(f.check(), Ok(sort));
            let text = print_formula(&f);
            let back = parse_formula(&text, &sig).unwrap_or_else(|e| panic!("{text}: {e}"));
            assert!(alpha_equal(&f, &back), "{text} reparsed as {}", print_formula(&back));
            count += 1;
        }
    }
    assert_eq!(count, 10_000);
    format!("{count} formulas round-trip")
}

// Nameless oracle: bound variables become indices counting binders
// outward, free variables keep their names.

#[derive(Debug, Clone, PartialEq)]
enum NT {
    Free(String),
    Bound(usize),
    Prime(Box<NT>),
    App(Box<NT>, Box<NT>),
    Star(Box<NF>),
}

#[derive(Debug, Clone, PartialEq)]
enum NF {
    Const(u8),
    Atom(String, Sort, Vec<NT>),
    Bin(u8, Box<NF>, Box<NF>),
    Quant(bool, Box<NF>),
    Query(Box<NF>),
    Bang(Box<NF>),
    Proof(NT, Box<NF>),
}

fn nt(t: &Term, stack: &mut Vec<String>) -> NT {
    match t {
        Term::Var(x) => match stack.iter().rev().position(|y| y == x) {
            Some(i) => NT::Bound(i),
            None => NT::Free(x.clone()),
        },
        Term::Prime(a) => NT::Prime(Box::new(nt(a, stack))),
        Term::App(a, b) => NT::App(Box::new(nt(a, stack)), Box::new(nt(b, stack))),
        Term::Star(f) => NT::Star(Box::new(nf(f, stack))),
    }
}

fn nf(f: &Formula, stack: &mut Vec<String>) -> NF {
    match f {
        Formula::Top => NF::Const(0),
        Formula::Bot => NF::Const(1),
        Formula::Triv => NF::Const(2),
        Formula::Absurd => NF::Const(3),
        Formula::Atom { pred, sort, args } => NF::Atom(pred.clone(), *sort, args.iter().map(|t| nt(t, stack)).collect()),
        Formula::And(a, b) => NF::Bin(0, Box::new(nf(a, stack)), Box::new(nf(b, stack))),
        Formula::Or(a, b) => NF::Bin(1, Box::new(nf(a, stack)), Box::new(nf(b, stack))),
        Formula::Imp(a, b) => NF::Bin(2, Box::new(nf(a, stack)), Box::new(nf(b, stack))),
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            stack.push(x.clone());
            let body = nf(a, stack);
            stack.pop();
            NF::Quant(matches!(f, Formula::Forall(..)), Box::new(body))
        }
        Formula::Query(a) => NF::Query(Box::new(nf(a, stack))),
        Formula::Bang(a) => NF::Bang(Box::new(nf(a, stack))),
        Formula::ProofOf(t, a) => NF::Proof(nt(t, stack), Box::new(nf(a, stack))),
    }
}

fn shift_t(t: &NT, by: usize, cut: usize) -> NT {
    match t {
        NT::Bound(i) if *i >= cut => NT::Bound(i + by),
        NT::Free(_) | NT::Bound(_) => t.clone(),
        NT::Prime(a) => NT::Prime(Box::new(shift_t(a, by, cut))),
        NT::App(a, b) => NT::App(Box::new(shift_t(a, by, cut)), Box::new(shift_t(b, by, cut))),
        NT::Star(f) => NT::Star(Box::new(map_f(f, cut, &|t, c| shift_t(t, by, c), &|_, _, _, _| None))),
    }
}

/// Rebuilds `f`, rewriting terms with `term` and atoms with `atom` (which
/// may decline); `depth` counts the binders passed.
fn map_f(
    f: &NF,
    depth: usize,
    term: &dyn Fn(&NT, usize) -> NT,
    atom: &dyn Fn(&str, Sort, &[NT], usize) -> Option<NF>,
) -> NF {
    let rec = |g: &NF, d: usize| Box::new(map_f(g, d, term, atom));
    match f {
        NF::Const(_) => f.clone(),
        NF::Atom(p, s, args) => {
            let args: Vec<NT> = args.iter().map(|t| term(t, depth)).collect();
            atom(p, *s, &args, depth).unwrap_or(NF::Atom(p.clone(), *s, args))
        }
        NF::Bin(k, a, b) => NF::Bin(*k, rec(a, depth), rec(b, depth)),
        NF::Quant(k, a) => NF::Quant(*k, rec(a, depth + 1)),
        NF::Query(a) => NF::Query(rec(a, depth)),
        NF::Bang(a) => NF::Bang(rec(a, depth)),
        NF::Proof(t, a) => NF::Proof(term(t, depth), rec(a, depth)),
    }
}

/// Replaces the `k` outermost free indices of `body` by `args`, the last
/// argument being index 0.
fn instantiate(body: &NF, args: &[NT]) -> NF {
    fn go_t(t: &NT, args: &[NT], d: usize) -> NT {
        match t {
            NT::Bound(i) if *i >= d => shift_t(&args[args.len() - 1 - (i - d)], d, 0),
            NT::Free(_) | NT::Bound(_) => t.clone(),
            NT::Prime(a) => NT::Prime(Box::new(go_t(a, args, d))),
            NT::App(a, b) => NT::App(Box::new(go_t(a, args, d)), Box::new(go_t(b, args, d))),
            NT::Star(f) => NT::Star(Box::new(map_f(f, d, &|t, d| go_t(t, args, d), &|_, _, _, _| None))),
        }
    }
    map_f(body, 0, &|t, d| go_t(t, args, d), &|_, _, _, _| None)
}

fn subst_nameless(f: &NF, s: &Substitution) -> NF {
    let indiv: BTreeMap<String, NT> = s.indiv.iter().map(|(x, t)| (x.clone(), nt(t, &mut Vec::new()))).collect();
    let preds: BTreeMap<String, (usize, NF)> =
        s.preds.iter().map(|(p, a)| (p.clone(), (a.params.len(), nf(&a.body, &mut a.params.clone())))).collect();
    fn term(t: &NT, indiv: &BTreeMap<String, NT>, preds: &BTreeMap<String, (usize, NF)>, d: usize) -> NT {
        match t {
            NT::Free(x) => indiv.get(x).cloned().unwrap_or_else(|| t.clone()),
            NT::Bound(_) => t.clone(),
            NT::Prime(a) => NT::Prime(Box::new(term(a, indiv, preds, d))),
            NT::App(a, b) => NT::App(Box::new(term(a, indiv, preds, d)), Box::new(term(b, indiv, preds, d))),
            NT::Star(f) => NT::Star(Box::new(form(f, indiv, preds, d))),
        }
    }
    fn form(f: &NF, indiv: &BTreeMap<String, NT>, preds: &BTreeMap<String, (usize, NF)>, d: usize) -> NF {
        map_f(f, d, &|t, d| term(t, indiv, preds, d), &|p, _, args, _| match preds.get(p) {
            Some((k, body)) if *k == args.len() => Some(instantiate(body, args)),
            _ => None,
        })
    }
    form(f, &indiv, &preds, 0)
}

pub fn substitution_matches_nameless_oracle() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut count = 0;
    let mut renamed = 0;
    for name in PROFILES {
        let sig = profile_signature(profile(name).unwrap());
        let gen = Generator { sig: &sig, quantifiers: true };
        for _ in 0..2500 {
            let sort = gen.any_sort(&mut rng);
            let f = { let d = rng.gen_range(1..6); gen.formula(&mut rng, sort, d) };
            let s = { let d = rng.gen_range(0..4); gen.substitution(&mut rng, &f, d) };
            let out = apply_substitution(&f, &s);
            assert_eq!(out.check(), Ok(sort), "sort changed: {}", print_formula(&f));
            let expect = subst_nameless(&nf(&f, &mut Vec::new()), &s);
            assert_eq!(nf(&out, &mut Vec::new()), expect, "{} under {s:?}", print_formula(&f));
            if !alpha_equal(&out, &qhc_core::syntax::apply_substitution_naive(&f, &s)) {
                renamed += 1;
            }
            count += 1;
        }
    }
    assert_eq!(count, 10_000);
    // the generator should exercise binder renaming regularly
    assert!(renamed > 100, "only {renamed} instances needed renaming");
    format!("{count} substitutions agree with the oracle, {renamed} with renaming")
}

fn random_frame(rng: &mut impl Rng) -> Frame {
    let n = rng.gen_range(1..=3);
    let space: FiniteSpace = spaces_of_size(n).choose(rng).unwrap().clone();
    let class = *ModelClass::ALL.choose(rng).unwrap();
    let dense = (class == ModelClass::DenseImage).then(|| dense_maps(&space, n).choose(rng).unwrap().clone());
    Frame::new(class, space, dense, rng.gen_range(1..=2)).unwrap()
}

fn same_value(frame: &Frame, a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Set(x), Value::Set(y)) => x == y,
        (Value::Obj(x), Value::Obj(y)) => x.equivalent(y, frame.base().unwrap()),
        _ => false,
    }
}

fn tuples(domain: usize, arity: usize) -> Vec<Vec<usize>> {
    (0..domain.pow(arity as u32))
        .map(|mut k| {
            let mut t = vec![0; arity];
            for slot in t.iter_mut().rev() {
                *slot = k % domain;
                k /= domain;
            }
            t
        })
        .collect()
}

pub fn substitution_lemma_in_models() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let sig = profile_signature(profile("mixed").unwrap());
    let gen = Generator { sig: &sig, quantifiers: true };
    let mut checked = 0;
    while checked < 1000 {
        let frame = random_frame(&mut rng);
        let mut valuation = Valuation::new();
        for d in sig.decls() {
            let cands = frame.candidates(d.sort);
            let values = (0..frame.domain.pow(d.arity as u32)).map(|_| cands.choose(&mut rng).unwrap().clone()).collect();
            valuation.insert(d.name.clone(), PredValue { sort: d.sort, arity: d.arity, values });
        }
        let model = Model { frame: frame.clone(), valuation: valuation.clone() };
        let sort = gen.any_sort(&mut rng);
        let f = { let d = rng.gen_range(1..5); gen.formula(&mut rng, sort, d) };
        let s = { let d = rng.gen_range(0..3); gen.substitution(&mut rng, &f, d) };
        let env: Env = ["x", "y", "z", "w"].iter().map(|v| (v.to_string(), rng.gen_range(0..frame.domain))).collect();

        // the valuation that interprets each predicate as its substituted body
        let mut shifted = valuation.clone();
        let mut ok = true;
        for (p, abs) in &s.preds {
            let pv = &valuation[p];
            let mut values = Vec::new();
            for t in tuples(frame.domain, pv.arity) {
                let mut e = env.clone();
                e.extend(abs.params.iter().cloned().zip(t));
                match model.eval(&abs.body, &e) {
                    Ok(v) => values.push(v),
                    Err(_) => ok = false,
                }
            }
            shifted.insert(p.clone(), PredValue { values, ..pv.clone() });
        }
        let env2: Env = env
            .iter()
            .map(|(x, d)| match s.indiv.get(x) {
                Some(Term::Var(y)) => (x.clone(), env[y]),
                _ => (x.clone(), *d),
            })
            .collect();
        let lhs = model.eval(&apply_substitution(&f, &s), &env);
        let rhs = Model { frame: frame.clone(), valuation: shifted }.eval(&f, &env2);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if ok => {
                assert!(same_value(&frame, &a, &b), "{} under {s:?} in {:?}", print_formula(&f), frame.class);
                checked += 1;
            }
            // exponentials over the work cap; skipped without counting
            _ => {}
        }
    }
    format!("{checked} (model, formula, substitution) triples")
}
