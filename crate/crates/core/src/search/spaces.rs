//! Preorders on a few points, up to isomorphism.

use crate::models::{bits, FiniteSpace, Set};

/// Largest point count [`enumerate_spaces`] accepts.
pub const MAX_ENUMERATED_POINTS: usize = 5;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    heap(n, &mut perm, &mut out);
    out.sort();
    out
}

fn relabel(up: &[Set], perm: &[usize]) -> Vec<Set> {
    let mut out = vec![0; up.len()];
    for x in 0..up.len() {
        out[perm[x]] = bits(up[x]).fold(0, |a, y| a | 1 << perm[y]);
    }
    out
}

/// The lexicographically least relabelling of the up-sets.
pub fn canonical_form(space: &FiniteSpace) -> Vec<Set> {
    permutations(space.len()).iter().map(|p| relabel(space.up_sets(), p)).min().unwrap()
}

/// All preorders on exactly `n` points up to isomorphism, each in canonical
/// form, sorted.
pub fn spaces_of_size(n: usize) -> Vec<FiniteSpace> {
    assert!((1..=MAX_ENUMERATED_POINTS).contains(&n), "at most {MAX_ENUMERATED_POINTS} points");
    let perms = permutations(n);
    let mut found: Vec<Vec<Set>> = Vec::new();
    // up[x] must contain x; choose the other members point by point
    let free_bits = n - 1;
    let choices = 1usize << free_bits;
    let expand = |x: usize, c: usize| -> Set {
        let mut s: Set = 1 << x;
        let mut k = 0;
        for y in 0..n {
            if y != x {
                if c >> k & 1 == 1 {
                    s |= 1 << y;
                }
                k += 1;
            }
        }
        s
    };
    let mut up = vec![0 as Set; n];
    fn go(
        x: usize,
        n: usize,
        choices: usize,
        up: &mut Vec<Set>,
        expand: &dyn Fn(usize, usize) -> Set,
        perms: &[Vec<usize>],
        found: &mut Vec<Vec<Set>>,
    ) {
        if x == n {
            let transitive = (0..n).all(|a| bits(up[a]).all(|b| up[b] & !up[a] == 0));
            if transitive {
                let canon = perms.iter().map(|p| relabel(up, p)).min().unwrap();
                if canon == *up {
                    found.push(canon);
                }
            }
            return;
        }
        for c in 0..choices {
            up[x] = expand(x, c);
            go(x + 1, n, choices, up, expand, perms, found);
        }
    }
    go(0, n, choices, &mut up, &expand, &perms, &mut found);
    found.sort();
    found.into_iter().map(FiniteSpace::from_up_sets).collect()
}

/// All preorders on 1 to `max_points` points up to isomorphism, by size and
/// then canonical form.
pub fn enumerate_spaces(max_points: usize) -> Vec<FiniteSpace> {
    (1..=max_points.min(MAX_ENUMERATED_POINTS)).flat_map(spaces_of_size).collect()
}
