//! Single-line mutants of the shipped accepted scripts.


use qhc_core::calculi::{builtin_system, check_script_text, CorpusLoader, NEGATIVE_SCRIPTS, SCRIPTS};
use qhc_core::syntax::{alpha_equal, parse_formula, print_formula, Formula, Signature, Sort};

#[derive(Clone, Copy, Debug)]
enum Edit {
    SwapImp,
    AndToOr,
    OrToAnd,
    RenameAtom,
    Negate,
    DropModal,
    Weaken,
}

const EDITS: &[Edit] = &[Edit::SwapImp, Edit::AndToOr, Edit::OrToAnd, Edit::RenameAtom, Edit::Negate, Edit::DropModal, Edit::Weaken];

fn other_atom(pred: &str, sort: Sort) -> &'static str {
    match (sort, pred) {
        (Sort::I, "alpha") => "beta",
        (Sort::I, _) => "alpha",
        (Sort::C, "p") => "q",
        (Sort::C, _) => "p",
    }
}

/// Applies `edit` at the `target`-th applicable node in preorder; `count`
/// tracks applicable nodes seen so far.
fn mutate(f: &Formula, edit: Edit, target: usize, count: &mut usize) -> Formula {
    use Formula::*;
    let applicable = match (edit, f) {
        (Edit::SwapImp, Imp(..)) | (Edit::AndToOr, And(..)) | (Edit::OrToAnd, Or(..)) => true,
        (Edit::RenameAtom, Atom { args, .. }) => args.is_empty(),
        (Edit::DropModal, Query(_) | Bang(_)) => true,
        (Edit::Negate, _) | (Edit::Weaken, _) => true,
        _ => false,
    };
    if applicable {
        if *count == target {
            *count += 1;
            return match (edit, f) {
                (Edit::SwapImp, Imp(a, b)) => Formula::imp((**b).clone(), (**a).clone()),
                (Edit::AndToOr, And(a, b)) => Formula::or((**a).clone(), (**b).clone()),
                (Edit::OrToAnd, Or(a, b)) => Formula::and((**a).clone(), (**b).clone()),
                (Edit::RenameAtom, Atom { pred, sort, args }) => Formula::atom(other_atom(pred, *sort), *sort, args.clone()),
                (Edit::DropModal, Query(a) | Bang(a)) => match &**a {
                    Bang(b) | Query(b) => (**b).clone(),
                    _ => f.clone(),
                },
                (Edit::Negate, _) => Formula::not(f.clone()),
                (Edit::Weaken, _) => match f.sort() {
                    Sort::C => Formula::and(f.clone(), Formula::atom("r", Sort::C, vec![])),
                    Sort::I => Formula::and(f.clone(), Formula::atom("gamma", Sort::I, vec![])),
                },
                _ => unreachable!(),
            };
        }
        *count += 1;
    }
    let mut go = |g: &Formula| mutate(g, edit, target, count);
    match f {
        Top | Bot | Triv | Absurd | Atom { .. } => f.clone(),
        And(a, b) => {
            let a = go(a);
            Formula::and(a, go(b))
        }
        Or(a, b) => {
            let a = go(a);
            Formula::or(a, go(b))
        }
        Imp(a, b) => {
            let a = go(a);
            Formula::imp(a, go(b))
        }
        Forall(x, a) => Formula::forall(x.clone(), go(a)),
        Exists(x, a) => Formula::exists(x.clone(), go(a)),
        Query(a) => Formula::query(go(a)),
        Bang(a) => Formula::bang(go(a)),
        ProofOf(t, a) => ProofOf(t.clone(), Box::new(go(a))),
    }
}

fn signature_of(text: &str) -> Option<Signature> {
    let mut sig = None::<Signature>;
    for line in text.lines() {
        let line = line.trim();
        if let Some(name) = line.strip_prefix("system ") {
            sig = Some(builtin_system(name.trim())?.signature);
        } else if let Some(decl) = line.strip_prefix("problem ").or(line.strip_prefix("pred ")) {
            let parts: Vec<&str> = decl.split_whitespace().collect();
            let sort = if line.starts_with("problem") { Sort::I } else { Sort::C };
            sig.as_mut()?.declare(parts[0], parts[1].parse().ok()?, sort);
        }
    }
    sig
}

/// All well-sorted single-line mutants of a script, as full script texts.
fn mutants(text: &str) -> Vec<(usize, String)> {
    let sig = signature_of(text).expect("script signature");
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let Some((head, rest)) = line.split_once(". ") else { continue };
        if head.parse::<usize>().is_err() {
            continue;
        }
        let Some((formula, just)) = rest.rsplit_once(" by ") else { continue };
        let f = parse_formula(formula, &sig).expect("script line parses");
        for &edit in EDITS {
            let g = mutate(&f, edit, 0, &mut 0);
            if alpha_equal(&f, &g) || parse_formula(&print_formula(&g), &sig).is_err() {
                continue;
            }
            let mut new = lines.clone();
            let replaced = format!("{head}. {} by {just}", print_formula(&g));
            new[i] = &replaced;
            out.push((i + 1, new.join("\n") + "\n"));
        }
    }
    out
}

/// Checks every mutant; returns the count and the survivors.
pub fn run_mutation_suite() -> (usize, Vec<String>) {
    let loader = CorpusLoader::new();
    let mut total = 0;
    let mut survivors = Vec::new();
    for (name, text) in SCRIPTS {
        if NEGATIVE_SCRIPTS.iter().any(|(n, _)| n == name) {
            continue;
        }
        for (line, mutant) in mutants(text) {
            total += 1;
            match check_script_text(&mutant, &loader) {
                Ok(v) if v.accepted => survivors.push(format!("{name} line {line}")),
                _ => {}
            }
        }
    }
    (total, survivors)
}
