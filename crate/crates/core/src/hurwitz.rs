//! The braid group action on `Q^n`, its orbits, and the component monoid.
//!
//! Tuples store positions into the member list of an [`InvariantSubset`],
//! one byte per entry. Generators are 1-based: `σ_i` swaps slots `i` and
//! `i+1`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::InvariantSubset;

pub type Tuple = Vec<u8>;

/// Default cap on states visited by an orbit search, and on the number of
/// (letter, class) pairs handled while building one weight level.
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

fn check_index(i: usize, n: usize) -> Result<()> {
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange(format!("sigma_{i} on a tuple of length {n}")));
    }
    Ok(())
}

/// `σ_i` or its inverse, in place, with no range check.
#[inline]
pub(crate) fn sigma_in_place(q: &InvariantSubset, i: usize, t: &mut [u8], inverse: bool) {
    let (a, b) = (t[i - 1] as usize, t[i] as usize);
    if inverse {
        t[i - 1] = q.conj_inv(b, a) as u8;
        t[i] = a as u8;
    } else {
        t[i - 1] = b as u8;
        t[i] = q.conj(a, b) as u8;
    }
}

pub fn apply_sigma(q: &InvariantSubset, i: usize, t: &[u8], inverse: bool) -> Result<Tuple> {
    check_index(i, t.len())?;
    let mut out = t.to_vec();
    sigma_in_place(q, i, &mut out, inverse);
    Ok(out)
}

/// Applies a word of signed 1-based generator indices, left to right.
pub fn apply_word(q: &InvariantSubset, word: &[i32], t: &[u8]) -> Result<Tuple> {
    let mut out = t.to_vec();
    for &l in word {
        let i = l.unsigned_abs() as usize;
        check_index(i, t.len())?;
        sigma_in_place(q, i, &mut out, l < 0);
    }
    Ok(out)
}

/// Entrywise conjugation `(a_1^g, ..., a_n^g)`.
pub fn conjugate_tuple(q: &InvariantSubset, g: usize, t: &[u8]) -> Tuple {
    t.iter().map(|&a| q.act(a as usize, g) as u8).collect()
}

/// The product `a_1 ⋯ a_n` as a group element.
pub fn total_monodromy(q: &InvariantSubset, t: &[u8]) -> usize {
    q.group().product(t.iter().map(|&a| q.element(a as usize)))
}

/// Image subgroup and the multidiscriminant: for each class of `Q ∩ H`
/// under `H`-conjugation (ordered by smallest member), the number of
/// entries lying in it.
pub fn component_invariants(q: &InvariantSubset, t: &[u8]) -> (usize, Vec<(usize, usize)>) {
    let g = q.group();
    let gens: Vec<usize> = t.iter().map(|&a| q.element(a as usize)).collect();
    let h = g.closure(&gens);
    let classes = g.classes_within(&h, q.members());
    let counts = classes
        .iter()
        .map(|c| (c[0], gens.iter().filter(|x| c.binary_search(x).is_ok()).count()))
        .collect();
    (h.order(), counts)
}

pub fn tuple_label(q: &InvariantSubset, t: &[u8]) -> String {
    t.iter().map(|&a| q.label(a as usize)).collect::<Vec<_>>().join(" ")
}

pub(crate) fn check_tuple(q: &InvariantSubset, t: &[u8]) -> Result<()> {
    match t.iter().find(|&&a| a as usize >= q.len()) {
        Some(a) => Err(Error::InvalidInput(format!("tuple entry {a} is not a position in Q"))),
        None => Ok(()),
    }
}

/// Packs a tuple into a `u128` key, 5 bits per entry.
#[inline]
pub(crate) fn pack(t: &[u8]) -> u128 {
    t.iter().fold(0u128, |acc, &a| (acc << 5) | a as u128)
}

pub(crate) fn check_packable(q: &InvariantSubset, n: usize) -> Result<()> {
    if q.len() > 32 || n > 25 {
        return Err(Error::infeasible("packed tuple width (|Q| <= 32, n <= 25)", n.max(q.len()), 32));
    }
    Ok(())
}

/// All members of the orbit of `t`, sorted lexicographically, by
/// breadth-first search under `σ_i` (forward generators suffice on a
/// finite set).
pub fn orbit_members(q: &InvariantSubset, t: &[u8], cap: usize) -> Result<Vec<Tuple>> {
    check_tuple(q, t)?;
    check_packable(q, t.len())?;
    let n = t.len();
    let mut seen = std::collections::HashSet::new();
    seen.insert(pack(t));
    let mut members = vec![t.to_vec()];
    let mut k = 0;
    while k < members.len() {
        for i in 1..n {
            let mut u = members[k].clone();
            sigma_in_place(q, i, &mut u, false);
            if seen.insert(pack(&u)) {
                if members.len() >= cap {
                    return Err(Error::infeasible("orbit states", members.len() + 1, cap));
                }
                members.push(u);
            }
        }
        k += 1;
    }
    members.sort_unstable();
    Ok(members)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub canonical: Tuple,
    pub size: u128,
    pub total_monodromy: usize,
    pub image_subgroup_order: usize,
    /// `(smallest member of the class, entry count)` per class of `Q ∩ H`.
    pub class_partition: Vec<(usize, usize)>,
}

impl Orbit {
    pub fn from_canonical(q: &InvariantSubset, canonical: Tuple, size: u128) -> Orbit {
        let (image_subgroup_order, class_partition) = component_invariants(q, &canonical);
        Orbit { total_monodromy: total_monodromy(q, &canonical), canonical, size, image_subgroup_order, class_partition }
    }

    pub fn weight(&self) -> usize {
        self.canonical.len()
    }
}

/// Orbit of a single tuple by breadth-first search.
pub fn orbit_of(q: &InvariantSubset, t: &[u8], cap: usize) -> Result<Orbit> {
    let members = orbit_members(q, t, cap)?;
    Ok(Orbit::from_canonical(q, members[0].clone(), members.len() as u128))
}

/// Every orbit of `Q^n` by exhaustive search, sorted by canonical tuple.
/// Independent of [`ComponentMonoid`]; used to cross-check it.
pub fn orbits_by_search(q: &InvariantSubset, n: usize, cap: usize) -> Result<Vec<Orbit>> {
    check_packable(q, n)?;
    let total = (q.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::infeasible("|Q|^n", total, cap));
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut t = vec![0u8; n];
    loop {
        if !seen.contains(&pack(&t)) {
            let members = orbit_members(q, &t, cap)?;
            for u in &members {
                seen.insert(pack(u));
            }
            out.push(Orbit::from_canonical(q, members[0].clone(), members.len() as u128));
        }
        // odometer, last slot fastest
        let mut k = n;
        loop {
            if k == 0 {
                out.sort_by(|a, b| a.canonical.cmp(&b.canonical));
                return Ok(out);
            }
            k -= 1;
            t[k] += 1;
            if (t[k] as usize) < q.len() {
                break;
            }
            t[k] = 0;
        }
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }
}

/// Partitions `0..len` by the equivalence generated by `pairs`, returning
/// a class id per element (classes numbered by first occurrence) and the
/// class count.
pub(crate) fn classes_from_unions(len: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> (Vec<u32>, usize) {
    let mut uf = UnionFind::new(len);
    for (a, b) in pairs {
        uf.union(a, b);
    }
    let mut id = vec![u32::MAX; len];
    let mut class = vec![0u32; len];
    let mut count = 0;
    for x in 0..len {
        let r = uf.find(x);
        if id[r] == u32::MAX {
            id[r] = count as u32;
            count += 1;
        }
        class[x] = id[r];
    }
    (class, count)
}

struct Level {
    count: usize,
    canon: Vec<u8>,
    size: Vec<u128>,
    monodromy: Vec<u32>,
    // lmul[a * prev_count + x] = class of [a]·x, x a class one weight lower
    lmul: Vec<u32>,
}

/// The components of `Hur_n(Q)` for every weight up to a bound, with the
/// monoid structure given by concatenation.
///
/// Weight `n+1` is built from weight `n` through the presentation of the
/// component monoid: its classes are pairs `(a, X)` with `a ∈ Q` and `X` a
/// weight-`n` class, modulo `(a, [b]·Y) ~ (b, [a^b]·Y)`. Orbit ids at each
/// weight follow the lexicographic order of canonical tuples.
pub struct ComponentMonoid {
    q: InvariantSubset,
    levels: Vec<Level>,
    cap: usize,
}

impl ComponentMonoid {
    pub fn new(q: InvariantSubset) -> Self {
        Self::with_cap(q, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(q: InvariantSubset, cap: usize) -> Self {
        let unit = Level { count: 1, canon: Vec::new(), size: vec![1], monodromy: vec![q.group().identity() as u32], lmul: Vec::new() };
        ComponentMonoid { q, levels: vec![unit], cap }
    }

    pub fn subset(&self) -> &InvariantSubset {
        &self.q
    }

    /// Highest weight built so far.
    pub fn max_weight(&self) -> usize {
        self.levels.len() - 1
    }

    /// Builds all weights up to `n`.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        if self.q.len() > u8::MAX as usize {
            return Err(Error::infeasible("|Q|", self.q.len(), u8::MAX));
        }
        while self.levels.len() <= n {
            self.push_level()?;
        }
        Ok(())
    }

    fn push_level(&mut self) -> Result<()> {
        let m = self.q.len();
        let n = self.levels.len() - 1;
        let cur = &self.levels[n];
        let pairs = m * cur.count;
        if pairs > self.cap {
            return Err(Error::infeasible(format!("letter-class pairs at weight {}", n + 1), pairs, self.cap));
        }
        let pair = |a: usize, x: usize| a * cur.count + x;
        let unions = if n == 0 {
            Vec::new()
        } else {
            let prev = &self.levels[n - 1];
            let mut u = Vec::with_capacity(m * m * prev.count);
            for a in 0..m {
                for b in 0..m {
                    let c = self.q.conj(a, b);
                    for y in 0..prev.count {
                        let by = cur.lmul[b * prev.count + y] as usize;
                        let cy = cur.lmul[c * prev.count + y] as usize;
                        u.push((pair(a, by), pair(b, cy)));
                    }
                }
            }
            u
        };
        let (class, count) = classes_from_unions(pairs, unions);

        // canonical = least a ++ canon(X) over the class
        let mut best: Vec<Option<usize>> = vec![None; count];
        let mut size = vec![0u128; count];
        let key = |p: usize| {
            let (a, x) = (p / cur.count, p % cur.count);
            (a as u8, &cur.canon[x * n..(x + 1) * n])
        };
        for p in 0..pairs {
            let c = class[p] as usize;
            size[c] += cur.size[p % cur.count];
            match best[c] {
                Some(b) if key(b) <= key(p) => {}
                _ => best[c] = Some(p),
            }
        }
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&x, &y| key(best[x].unwrap()).cmp(&key(best[y].unwrap())));
        let mut rank = vec![0u32; count];
        for (r, &c) in order.iter().enumerate() {
            rank[c] = r as u32;
        }
        let w = n + 1;
        let mut canon = Vec::with_capacity(count * w);
        let mut sizes = Vec::with_capacity(count);
        let mut monodromy = Vec::with_capacity(count);
        let g = self.q.group();
        for &c in &order {
            let p = best[c].unwrap();
            let (a, x) = (p / cur.count, p % cur.count);
            canon.push(a as u8);
            canon.extend_from_slice(&cur.canon[x * n..(x + 1) * n]);
            sizes.push(size[c]);
            monodromy.push(g.mul(self.q.element(a), cur.monodromy[x] as usize) as u32);
        }
        let lmul = class.iter().map(|&c| rank[c as usize]).collect();
        self.levels.push(Level { count, canon, size: sizes, monodromy, lmul });
        Ok(())
    }

    fn level(&self, n: usize) -> Result<&Level> {
        self.levels
            .get(n)
            .ok_or_else(|| Error::IndexOutOfRange(format!("weight {n} not built (max {})", self.max_weight())))
    }

    /// Number of components of weight `n`.
    pub fn count(&self, n: usize) -> usize {
        self.levels[n].count
    }

    pub fn canonical(&self, n: usize, x: usize) -> &[u8] {
        &self.levels[n].canon[x * n..(x + 1) * n]
    }

    pub fn size(&self, n: usize, x: usize) -> u128 {
        self.levels[n].size[x]
    }

    pub fn monodromy(&self, n: usize, x: usize) -> usize {
        self.levels[n].monodromy[x] as usize
    }

    /// `[a]·x` for `x` of weight `n`; needs weight `n+1` built.
    #[inline]
    pub fn lmul(&self, n: usize, a: usize, x: usize) -> usize {
        self.levels[n + 1].lmul[a * self.levels[n].count + x] as usize
    }

    /// Component containing a tuple.
    pub fn class_of(&self, t: &[u8]) -> Result<usize> {
        check_tuple(&self.q, t)?;
        self.level(t.len())?;
        Ok(self.fold_left(t, 0, 0))
    }

    // [t_0]·[t_1]·…·[t_k]·x with x of weight n
    fn fold_left(&self, t: &[u8], n: usize, x: usize) -> usize {
        let mut y = x;
        for (k, &a) in t.iter().enumerate().rev() {
            y = self.lmul(n + t.len() - 1 - k, a as usize, y);
        }
        y
    }

    /// `x·[a]` for `x` of weight `n`.
    pub fn rmul(&self, n: usize, x: usize, a: usize) -> usize {
        let mut t = self.canonical(n, x).to_vec();
        t.push(a as u8);
        self.fold_left(&t, 0, 0)
    }

    /// `x^g`, the component of the conjugated canonical tuple.
    pub fn twist(&self, n: usize, x: usize, g: usize) -> usize {
        let t = conjugate_tuple(&self.q, g, self.canonical(n, x));
        self.fold_left(&t, 0, 0)
    }

    /// `x·y` for `x` of weight `n1` and `y` of weight `n2`.
    pub fn multiply(&self, n1: usize, x: usize, n2: usize, y: usize) -> Result<usize> {
        self.level(n1 + n2)?;
        Ok(self.fold_left(self.canonical(n1, x), n2, y))
    }

    pub fn orbit(&self, n: usize, x: usize) -> Orbit {
        Orbit::from_canonical(&self.q, self.canonical(n, x).to_vec(), self.size(n, x))
    }

    /// The components of weight `n`, optionally only those with the given
    /// total monodromy.
    pub fn table(&mut self, n: usize, omega: Option<usize>) -> Result<OrbitTable> {
        self.extend_to(n)?;
        let ids: Vec<usize> = (0..self.count(n)).filter(|&x| omega.map_or(true, |w| self.monodromy(n, x) == w)).collect();
        let orbits = ids.iter().map(|&x| self.orbit(n, x)).collect();
        Ok(OrbitTable { weight: n, ids, orbits })
    }

    /// Ids of weight-`n` components with total monodromy `omega`.
    pub fn with_monodromy(&self, n: usize, omega: usize) -> Vec<usize> {
        (0..self.count(n)).filter(|&x| self.monodromy(n, x) == omega).collect()
    }
}

#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub weight: usize,
    pub ids: Vec<usize>,
    pub orbits: Vec<Orbit>,
}

impl OrbitTable {
    pub fn total_size(&self) -> u128 {
        self.orbits.iter().map(|o| o.size).sum()
    }

    pub fn write_csv<W: Write>(&self, q: &InvariantSubset, out: W) -> Result<()> {
        let g = q.group();
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "weight",
            "orbit_id",
            "size",
            "canonical",
            "total_monodromy",
            "image_subgroup_order",
            "class_partition",
        ])?;
        for (id, o) in self.ids.iter().zip(&self.orbits) {
            let partition = o
                .class_partition
                .iter()
                .map(|(c, k)| format!("{}:{k}", g.label(*c)))
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                self.weight.to_string(),
                id.to_string(),
                o.size.to_string(),
                tuple_label(q, &o.canonical),
                g.label(o.total_monodromy).to_string(),
                o.image_subgroup_order.to_string(),
                partition,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
