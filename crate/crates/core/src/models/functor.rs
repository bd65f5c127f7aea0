//! Set-valued functors on a finite poset: the i-objects of the sheaf and
//! presheaf classes.
//!
//! Two objects with maps in both directions are interchangeable for every
//! connective of the language (all of them are functorial, the exponential
//! contravariantly in its first argument), for `?` (support) and for
//! designation (a map from the terminal object). Objects are therefore
//! kept reduced to their core: a smallest retract, unique up to isomorphism.

use std::collections::HashMap;

use super::space::{bits, Set};

/// A finite poset with objects numbered along a linear extension, so that
/// `x <= y` implies `x` is numbered no later than `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Base {
    up: Vec<Set>,
    /// Covering pairs `x < y`, sorted by `y`.
    covers: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctorError {
    #[error("an exponential needs more than {0} sections at one point; raise the work cap")]
    Overflow(usize),
    #[error("search exceeded {0} steps")]
    Budget(usize),
}

impl Base {
    /// `up[x]` lists the objects above `x`; it must be a partial order
    /// numbered along a linear extension.
    pub fn new(up: Vec<Set>) -> Base {
        let m = up.len();
        for x in 0..m {
            debug_assert!(up[x] >> x & 1 == 1);
            debug_assert!(bits(up[x]).all(|y| y >= x));
        }
        let mut covers = Vec::new();
        for y in 0..m {
            for x in 0..y {
                if up[x] >> y & 1 == 1 && !(x + 1..y).any(|z| up[x] >> z & 1 == 1 && up[z] >> y & 1 == 1) {
                    covers.push((x, y));
                }
            }
        }
        Base { up, covers }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn up(&self, x: usize) -> Set {
        self.up[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    pub fn all(&self) -> Set {
        (1u64 << self.len()).wrapping_sub(1) as Set
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }
}

/// A functor `F` on a [`Base`]: finite sets `F(x)` and maps `F(x) -> F(y)`
/// for `x <= y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Functor {
    sizes: Vec<usize>,
    /// `maps[x * m + y]` for `x <= y`; empty otherwise.
    maps: Vec<Vec<u16>>,
}

impl Functor {
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn map(&self, x: usize, y: usize) -> &[u16] {
        &self.maps[x * self.sizes.len() + y]
    }

    /// Builds a functor from stalk sizes and the maps along covering pairs.
    pub fn from_covers(base: &Base, sizes: Vec<usize>, cover_maps: &[Vec<u16>]) -> Option<Functor> {
        let m = base.len();
        let mut maps = vec![Vec::new(); m * m];
        for x in 0..m {
            maps[x * m + x] = (0..sizes[x] as u16).collect();
        }
        for (k, &(x, y)) in base.covers.iter().enumerate() {
            let f = &cover_maps[k];
            if f.len() != sizes[x] || f.iter().any(|&v| v as usize >= sizes[y]) {
                return None;
            }
            maps[x * m + y] = f.clone();
        }
        let mut f = Functor { sizes, maps };
        f.complete(base).then_some(f)
    }

    /// Fills in composites from the covering maps; false if two paths disagree.
    fn complete(&mut self, base: &Base) -> bool {
        let m = base.len();
        for y in 0..m {
            for x in (0..y).rev() {
                if !base.leq(x, y) || base.covers.contains(&(x, y)) {
                    continue;
                }
                let mut value: Option<Vec<u16>> = None;
                for z in x + 1..y {
                    if base.leq(x, z) && base.leq(z, y) {
                        let xz = &self.maps[x * m + z];
                        let zy = &self.maps[z * m + y];
                        let comp: Vec<u16> = xz.iter().map(|&a| zy[a as usize]).collect();
                        match &value {
                            Some(v) if *v != comp => return false,
                            Some(_) => {}
                            None => value = Some(comp),
                        }
                    }
                }
                self.maps[x * m + y] = value.expect("non-covering pair has an intermediate object");
            }
        }
        // two covering paths can also meet at a covering pair's endpoints only
        // through composites checked above
        true
    }

    pub fn constant(base: &Base, size: usize) -> Functor {
        let m = base.len();
        let mut maps = vec![Vec::new(); m * m];
        for x in 0..m {
            for y in bits(base.up(x)) {
                maps[x * m + y] = (0..size as u16).collect();
            }
        }
        Functor { sizes: vec![size; m], maps }
    }

    pub fn terminal(base: &Base) -> Functor {
        Functor::constant(base, 1)
    }

    pub fn initial(base: &Base) -> Functor {
        Functor::constant(base, 0)
    }

    /// The subterminal object with a point exactly over the up-set `u`.
    pub fn indicator(base: &Base, u: Set) -> Functor {
        let m = base.len();
        let sizes: Vec<usize> = (0..m).map(|x| (u >> x & 1) as usize).collect();
        let mut maps = vec![Vec::new(); m * m];
        for x in 0..m {
            for y in bits(base.up(x)) {
                maps[x * m + y] = vec![0; sizes[x]];
            }
        }
        Functor { sizes, maps }
    }

    /// Objects with a non-empty value.
    pub fn support(&self) -> Set {
        self.sizes.iter().enumerate().filter(|(_, &s)| s > 0).fold(0, |acc, (x, _)| acc | 1 << x)
    }

    pub fn is_subterminal(&self) -> bool {
        self.sizes.iter().all(|&s| s <= 1)
    }

    pub fn product(&self, other: &Functor, base: &Base) -> Functor {
        let m = base.len();
        let sizes: Vec<usize> = (0..m).map(|x| self.sizes[x] * other.sizes[x]).collect();
        let mut maps = vec![Vec::new(); m * m];
        for x in 0..m {
            for y in bits(base.up(x)) {
                let (f, g) = (self.map(x, y), other.map(x, y));
                let w = other.sizes[y] as u16;
                maps[x * m + y] = (0..sizes[x]).map(|k| f[k / other.sizes[x]] * w + g[k % other.sizes[x]]).collect();
            }
        }
        Functor { sizes, maps }
    }

    pub fn coproduct(&self, other: &Functor, base: &Base) -> Functor {
        let m = base.len();
        let sizes: Vec<usize> = (0..m).map(|x| self.sizes[x] + other.sizes[x]).collect();
        let mut maps = vec![Vec::new(); m * m];
        for x in 0..m {
            for y in bits(base.up(x)) {
                let off = self.sizes[y] as u16;
                let mut v = self.map(x, y).to_vec();
                v.extend(other.map(x, y).iter().map(|&b| b + off));
                maps[x * m + y] = v;
            }
        }
        Functor { sizes, maps }
    }

    /// The exponential `other^self`: at `x`, the natural families from
    /// `self` to `other` over the objects above `x`.
    pub fn exponential(&self, other: &Functor, base: &Base, cap: usize) -> Result<Functor, FunctorError> {
        let m = base.len();
        let mut sections: Vec<Vec<Vec<u16>>> = Vec::with_capacity(m);
        for x in 0..m {
            let mut found = Vec::new();
            let mut overflow = false;
            let mut steps = 0usize;
            search_homs(self, other, base, base.up(x), &mut steps, usize::MAX, &mut |h| {
                found.push(h.iter().flatten().copied().collect::<Vec<u16>>());
                overflow = found.len() > cap;
                !overflow
            })
            .ok();
            if overflow {
                return Err(FunctorError::Overflow(cap));
            }
            sections.push(found);
        }
        let index: Vec<HashMap<&[u16], u16>> = sections
            .iter()
            .map(|fam| fam.iter().enumerate().map(|(i, s)| (s.as_slice(), i as u16)).collect())
            .collect();
        // a family over up(x) is stored as the concatenation of its
        // components in object order; restricting to up(y) drops a prefix
        // and interleaved components
        let layout = |x: usize| -> Vec<(usize, usize)> {
            let mut off = 0;
            bits(base.up(x))
                .map(|z| {
                    let r = (z, off);
                    off += self.sizes[z];
                    r
                })
                .collect()
        };
        let sizes: Vec<usize> = sections.iter().map(Vec::len).collect();
        let mut maps = vec![Vec::new(); m * m];
        for x in 0..m {
            let lx = layout(x);
            for y in bits(base.up(x)) {
                let keep: Vec<(usize, usize)> = lx.iter().copied().filter(|&(z, _)| base.leq(y, z)).collect();
                maps[x * m + y] = sections[x]
                    .iter()
                    .map(|fam| {
                        let restricted: Vec<u16> =
                            keep.iter().flat_map(|&(z, off)| fam[off..off + self.sizes[z]].iter().copied()).collect();
                        index[y][restricted.as_slice()]
                    })
                    .collect();
            }
        }
        Ok(Functor { sizes, maps })
    }

    /// Whether there is a natural map `self -> other`.
    pub fn maps_to(&self, other: &Functor, base: &Base) -> bool {
        let mut found = false;
        let mut steps = 0;
        search_homs(self, other, base, base.all(), &mut steps, usize::MAX, &mut |_| {
            found = true;
            false
        })
        .ok();
        found
    }

    /// A compatible family of elements over all objects.
    pub fn has_global_section(&self, base: &Base) -> bool {
        Functor::terminal(base).maps_to(self, base)
    }

    /// The image of a natural endomorphism, as a subfunctor.
    fn image(&self, h: &[Vec<u16>], base: &Base) -> Functor {
        let m = base.len();
        let keep: Vec<Vec<u16>> = (0..m)
            .map(|x| {
                let mut v = h[x].clone();
                v.sort();
                v.dedup();
                v
            })
            .collect();
        let sizes: Vec<usize> = keep.iter().map(Vec::len).collect();
        let mut maps = vec![Vec::new(); m * m];
        for x in 0..m {
            for y in bits(base.up(x)) {
                let f = self.map(x, y);
                maps[x * m + y] =
                    keep[x].iter().map(|&a| keep[y].binary_search(&f[a as usize]).expect("image is a subfunctor") as u16).collect();
            }
        }
        Functor { sizes, maps }
    }

    /// A smallest retract: the unique object, up to isomorphism, with maps to
    /// and from `self` and no proper such subobject. Searches that run past
    /// their step budget leave a larger, hom-equivalent representative.
    pub fn core(&self, base: &Base) -> Functor {
        let mut cur = self.clone();
        'shrink: loop {
            for y in 0..base.len() {
                for e in 0..cur.sizes[y] as u16 {
                    let mut hit = None;
                    let mut steps = 0;
                    search(&cur, &cur, base, base.all(), Some((y, e)), &mut steps, CORE_BUDGET, &mut |h| {
                        hit = Some(h.to_vec());
                        false
                    })
                    .ok();
                    if let Some(h) = hit {
                        cur = cur.image(&h, base);
                        continue 'shrink;
                    }
                }
            }
            return cur;
        }
    }

    /// Maps both ways; for cores this is isomorphism.
    pub fn equivalent(&self, other: &Functor, base: &Base) -> bool {
        self.maps_to(other, base) && other.maps_to(self, base)
    }

    /// The maps along covering pairs, in the order of [`Base::covers`].
    pub fn cover_maps(&self, base: &Base) -> Vec<Vec<u16>> {
        base.covers.iter().map(|&(x, y)| self.map(x, y).to_vec()).collect()
    }
}

/// Enumerates natural families `F -> G` over the up-closed set `objects`,
/// calling `visit` with the components indexed by object (empty outside
/// `objects`). `visit` returns false to stop.
pub fn search_homs(
    f: &Functor,
    g: &Functor,
    base: &Base,
    objects: Set,
    steps: &mut usize,
    budget: usize,
    visit: &mut dyn FnMut(&[Vec<u16>]) -> bool,
) -> Result<bool, FunctorError> {
    search(f, g, base, objects, None, steps, budget, visit)
}

const CORE_BUDGET: usize = 200_000;

/// As [`search_homs`], skipping families that hit `avoid = (y, e)`.
#[allow(clippy::too_many_arguments)]
fn search(
    f: &Functor,
    g: &Functor,
    base: &Base,
    objects: Set,
    avoid: Option<(usize, u16)>,
    steps: &mut usize,
    budget: usize,
    visit: &mut dyn FnMut(&[Vec<u16>]) -> bool,
) -> Result<bool, FunctorError> {
    struct Ctx<'a> {
        order: Vec<usize>,
        f: &'a Functor,
        g: &'a Functor,
        base: &'a Base,
        avoid: Option<(usize, u16)>,
        budget: usize,
    }
    fn go(
        i: usize,
        cx: &Ctx,
        h: &mut Vec<Vec<u16>>,
        steps: &mut usize,
        visit: &mut dyn FnMut(&[Vec<u16>]) -> bool,
    ) -> Result<bool, FunctorError> {
        let (f, g, base) = (cx.f, cx.g, cx.base);
        *steps += 1;
        if *steps > cx.budget {
            return Err(FunctorError::Budget(cx.budget));
        }
        if i == cx.order.len() {
            return Ok(visit(h));
        }
        let y = cx.order[i];
        let (fy, gy) = (f.sizes[y], g.sizes[y]);
        let banned = match cx.avoid {
            Some((z, e)) if z == y => Some(e),
            _ => None,
        };
        // values forced by naturality with already assigned objects below y
        let mut forced: Vec<Option<u16>> = vec![None; fy];
        for &(x, z) in base.covers() {
            if z != y || !cx.order[..i].contains(&x) {
                continue;
            }
            let (rf, rg) = (f.map(x, y), g.map(x, y));
            for a in 0..f.sizes[x] {
                let src = rf[a] as usize;
                let val = rg[h[x][a] as usize];
                match forced[src] {
                    Some(v) if v != val => return Ok(true),
                    _ => forced[src] = Some(val),
                }
            }
        }
        if forced.iter().any(|v| v.is_some() && *v == banned) {
            return Ok(true);
        }
        let allowed: Vec<u16> = (0..gy as u16).filter(|&v| Some(v) != banned).collect();
        if allowed.is_empty() && fy > 0 {
            return Ok(true);
        }
        let free: Vec<usize> = (0..fy).filter(|&a| forced[a].is_none()).collect();
        // odometer over indices into `allowed` at the free positions
        let mut digits = vec![0usize; free.len()];
        let mut cur: Vec<u16> = forced.iter().map(|v| v.unwrap_or(0)).collect();
        loop {
            for (k, &a) in free.iter().enumerate() {
                cur[a] = allowed[digits[k]];
            }
            h[y] = cur.clone();
            if !go(i + 1, cx, h, steps, visit)? {
                return Ok(false);
            }
            let mut k = 0;
            loop {
                if k == free.len() {
                    h[y].clear();
                    return Ok(true);
                }
                digits[k] += 1;
                if digits[k] < allowed.len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }
    let cx = Ctx { order: bits(objects).collect(), f, g, base, avoid, budget };
    let mut h: Vec<Vec<u16>> = vec![Vec::new(); base.len()];
    go(0, &cx, &mut h, steps, visit)
}

/// Every functor with values of size at most `cap`, in a fixed order.
pub fn enumerate_functors(base: &Base, cap: usize) -> Vec<Functor> {
    let m = base.len();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; m];
    loop {
        let mut cover_maps: Vec<Vec<u16>> = base.covers.iter().map(|&(x, _)| vec![0; sizes[x]]).collect();
        let dead = base.covers.iter().any(|&(x, y)| sizes[x] > 0 && sizes[y] == 0);
        if !dead {
            loop {
                if let Some(f) = Functor::from_covers(base, sizes.clone(), &cover_maps) {
                    out.push(f);
                }
                // odometer over all cover maps
                let mut done = true;
                'outer: for (k, &(_, y)) in base.covers.iter().enumerate() {
                    for a in 0..cover_maps[k].len() {
                        cover_maps[k][a] += 1;
                        if (cover_maps[k][a] as usize) < sizes[y] {
                            done = false;
                            break 'outer;
                        }
                        cover_maps[k][a] = 0;
                    }
                }
                if done {
                    break;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == m {
                return out;
            }
            sizes[k] += 1;
            if sizes[k] <= cap {
                break;
            }
            sizes[k] = 0;
            k += 1;
        }
    }
}

/// One core per class of mutually mapping functors with values of size at
/// most `cap`, in a fixed order.
pub fn representatives(base: &Base, cap: usize) -> Vec<Functor> {
    let mut reps: Vec<Functor> = Vec::new();
    let mut seen: HashMap<Functor, ()> = HashMap::new();
    for f in enumerate_functors(base, cap) {
        let c = f.core(base);
        if seen.contains_key(&c) {
            continue;
        }
        if !reps.iter().any(|r| r.sizes == c.sizes && r.equivalent(&c, base)) {
            reps.push(c.clone());
        }
        seen.insert(c, ());
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Base {
        Base::new((0..n).map(|x| ((1u32 << n) - 1) & !((1 << x) - 1)).collect())
    }

    #[test]
    fn point_base_is_boolean() {
        let b = Base::new(vec![1]);
        let reps = representatives(&b, 3);
        assert_eq!(reps.len(), 2);
        assert_eq!(enumerate_functors(&b, 3).len(), 4);
    }

    #[test]
    fn functor_counts_on_a_two_chain() {
        // pairs (a, b) with a map a -> b: sum over a, b <= 2 of b^a
        let b = chain(2);
        let expected: usize = (0..=2).flat_map(|a| (0..=2usize).map(move |c| c.pow(a as u32))).sum();
        assert_eq!(enumerate_functors(&b, 2).len(), expected);
        // subterminal cores: empty, {1}, everything
        assert_eq!(representatives(&b, 2).len(), 3);
    }

    #[test]
    fn exponential_of_subterminals_is_heyting_implication() {
        let b = chain(2);
        let top = Functor::indicator(&b, 0b11);
        let u = Functor::indicator(&b, 0b10);
        let none = Functor::indicator(&b, 0b00);
        let neg_u = u.exponential(&none, &b, 100).unwrap();
        assert_eq!(neg_u.support(), 0);
        let neg_neg_u = neg_u.exponential(&none, &b, 100).unwrap();
        assert_eq!(neg_neg_u.support(), 0b11);
        assert!(top.exponential(&u, &b, 100).unwrap().equivalent(&u, &b));
    }

    #[test]
    fn core_of_a_double_is_single() {
        let b = chain(2);
        let two = Functor::constant(&b, 2);
        assert_eq!(two.core(&b).sizes(), &[1, 1]);
        let vee = Base::new(vec![0b111, 0b010, 0b100]);
        // two disjoint points over the top elements, glued by no element below
        let f = Functor::from_covers(&vee, vec![0, 1, 1], &[vec![], vec![]]).unwrap();
        assert_eq!(f.core(&vee), f);
        assert!(!f.has_global_section(&vee));
    }
}
