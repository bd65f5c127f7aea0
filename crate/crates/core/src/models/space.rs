//! Finite Alexandrov spaces as preorders on at most 16 points. Subsets are
//! bitmasks; opens are up-sets.

use serde::{Deserialize, Serialize};

pub type Set = u32;

pub const MAX_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    n: usize,
    /// `up[x]` is the smallest open containing `x`.
    up: Vec<Set>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("a space has between 1 and {MAX_POINTS} points, got {0}")]
    Size(usize),
    #[error("point {0} out of range")]
    Point(usize),
    #[error("the order is not transitive at {0} <= {1} <= {2}")]
    NotTransitive(usize, usize, usize),
}

pub fn bits(s: Set) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| s >> i & 1 == 1)
}

impl FiniteSpace {
    /// Builds a space from the reflexive-transitive closure of `leq`.
    pub fn from_relation(n: usize, leq: &[(usize, usize)]) -> Result<FiniteSpace, SpaceError> {
        if n == 0 || n > MAX_POINTS {
            return Err(SpaceError::Size(n));
        }
        let mut up: Vec<Set> = (0..n).map(|x| 1 << x).collect();
        for &(x, y) in leq {
            if x >= n || y >= n {
                return Err(SpaceError::Point(x.max(y)));
            }
            up[x] |= 1 << y;
        }
        loop {
            let mut changed = false;
            for x in 0..n {
                let closed = bits(up[x]).fold(up[x], |acc, y| acc | up[y]);
                if closed != up[x] {
                    up[x] = closed;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(FiniteSpace { n, up })
    }

    /// Like [`from_relation`](Self::from_relation) but requires `leq` to be
    /// transitive already.
    pub fn from_preorder(n: usize, leq: &[(usize, usize)]) -> Result<FiniteSpace, SpaceError> {
        let space = FiniteSpace::from_relation(n, leq)?;
        let given = |x: usize, y: usize| x == y || leq.contains(&(x, y));
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if given(x, y) && given(y, z) && !given(x, z) {
                        return Err(SpaceError::NotTransitive(x, y, z));
                    }
                }
            }
        }
        Ok(space)
    }

    pub fn from_up_sets(up: Vec<Set>) -> FiniteSpace {
        FiniteSpace { n: up.len(), up }
    }

    pub fn point() -> FiniteSpace {
        FiniteSpace::from_relation(1, &[]).unwrap()
    }

    /// `{0, 1}` with `0 <= 1`; the opens are `∅`, `{1}` and the whole space.
    pub fn sierpinski() -> FiniteSpace {
        FiniteSpace::from_relation(2, &[(0, 1)]).unwrap()
    }

    pub fn discrete(n: usize) -> FiniteSpace {
        FiniteSpace::from_relation(n, &[]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn full(&self) -> Set {
        if self.n == 32 {
            u32::MAX
        } else {
            (1 << self.n) - 1
        }
    }

    pub fn up(&self, x: usize) -> Set {
        self.up[x]
    }

    pub fn up_sets(&self) -> &[Set] {
        &self.up
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    /// The order as a sorted list of pairs `x <= y` with `x != y`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in bits(self.up[x]) {
                if x != y {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn interior(&self, a: Set) -> Set {
        (0..self.n).filter(|&x| self.up[x] & !a == 0).fold(0, |acc, x| acc | 1 << x)
    }

    pub fn closure(&self, a: Set) -> Set {
        (0..self.n).filter(|&x| self.up[x] & a != 0).fold(0, |acc, x| acc | 1 << x)
    }

    pub fn regularize(&self, a: Set) -> Set {
        self.interior(self.closure(a))
    }

    pub fn is_open(&self, a: Set) -> bool {
        self.interior(a) == a
    }

    pub fn is_regular_open(&self, a: Set) -> bool {
        self.regularize(a) == a
    }

    pub fn complement(&self, a: Set) -> Set {
        self.full() & !a
    }

    /// Heyting implication of opens: `Int((X ∖ U) ∪ V)`.
    pub fn heyting_imp(&self, u: Set, v: Set) -> Set {
        self.interior(self.complement(u) | v)
    }

    pub fn subsets(&self) -> impl Iterator<Item = Set> {
        0..=self.full()
    }

    pub fn opens(&self) -> Vec<Set> {
        self.subsets().filter(|&a| self.is_open(a)).collect()
    }

    pub fn regular_opens(&self) -> Vec<Set> {
        self.subsets().filter(|&a| self.is_regular_open(a)).collect()
    }

    /// Relabels points by `perm` (point `x` becomes `perm[x]`).
    pub fn permute(&self, perm: &[usize]) -> FiniteSpace {
        let mut up = vec![0; self.n];
        for x in 0..self.n {
            up[perm[x]] = bits(self.up[x]).fold(0, |acc, y| acc | 1 << perm[y]);
        }
        FiniteSpace { n: self.n, up }
    }

    /// Points grouped into clusters (`x <= y <= x`), with each cluster's
    /// index in a linear extension of the induced partial order.
    pub fn clusters(&self) -> Vec<usize> {
        let mut rep: Vec<usize> = (0..self.n).map(|x| (0..self.n).find(|&y| self.up[y] == self.up[x]).unwrap()).collect();
        let mut reps: Vec<usize> = rep.clone();
        reps.sort();
        reps.dedup();
        // order clusters by decreasing size of their up-set: larger up-sets come first
        reps.sort_by_key(|&r| (std::cmp::Reverse(self.up[r].count_ones()), r));
        for r in rep.iter_mut() {
            *r = reps.iter().position(|s| s == r).unwrap();
        }
        rep
    }
}

/// The JSON shape of a space: points and the non-reflexive part of the order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub points: usize,
    #[serde(default)]
    pub leq: Vec<(usize, usize)>,
}

impl From<&FiniteSpace> for SpaceSpec {
    fn from(s: &FiniteSpace) -> SpaceSpec {
        SpaceSpec { points: s.len(), leq: s.strict_pairs() }
    }
}

impl TryFrom<&SpaceSpec> for FiniteSpace {
    type Error = SpaceError;

    fn try_from(s: &SpaceSpec) -> Result<FiniteSpace, SpaceError> {
        FiniteSpace::from_preorder(s.points, &s.leq)
    }
}
