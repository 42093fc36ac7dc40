//! Finite groups given by multiplication tables, their subgroups and
//! conjugation-invariant subsets.

pub mod invariants;
pub mod perm;
pub mod spec;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};

pub use invariants::{is_large, k_invariant, KInvariant};
pub use spec::{GroupFile, GroupSpec};

pub const DEFAULT_MAX_ORDER: usize = 512;

/// A finite group stored as full multiplication and inverse tables.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<u16>,
    inv: Vec<u16>,
    identity: usize,
    labels: Vec<String>,
    degree: Option<usize>,
    perms: Vec<perm::Perm>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("degree", &self.degree)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from an explicit multiplication table, checking all
    /// group axioms exhaustively.
    pub fn from_table(mult: &[Vec<usize>], labels: Option<Vec<String>>, max_order: usize) -> Result<Self> {
        let order = mult.len();
        if order == 0 {
            return Err(Error::NotAGroup("empty multiplication table".into()));
        }
        if order > max_order {
            return Err(Error::infeasible("group order", order, max_order));
        }
        if order > u16::MAX as usize {
            return Err(Error::infeasible("group order", order, u16::MAX));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in mult.iter().enumerate() {
            if row.len() != order {
                return Err(Error::NotAGroup(format!("row {i} has length {} instead of {order}", row.len())));
            }
            for &x in row {
                if x >= order {
                    return Err(Error::NotAGroup(format!("entry {x} in row {i} is out of range")));
                }
                flat.push(x as u16);
            }
        }
        let at = |a: usize, b: usize| flat[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;
        let mut inv = vec![0u16; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::NotAGroup(format!("element {x} has no two-sided inverse")))?;
            inv[x] = y as u16;
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NonAssociative { a, b, c });
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() == order => l,
            Some(l) => {
                return Err(Error::InvalidInput(format!("{} labels given for a group of order {order}", l.len())))
            }
            None => (0..order).map(|i| i.to_string()).collect(),
        };
        check_unique_labels(&labels)?;
        Ok(FiniteGroup { order, mult: flat, inv, identity, labels, degree: None, perms: Vec::new() })
    }

    /// Builds the permutation group generated by `generators` (one-line
    /// images, 0- or 1-based) on `degree` points. Elements are sorted by
    /// their one-line images, so the identity is element 0.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>], max_order: usize) -> Result<Self> {
        let gens: Vec<perm::Perm> =
            generators.iter().map(|g| perm::from_images(degree, g)).collect::<Result<_>>()?;
        Self::from_perms(degree, gens, max_order)
    }

    pub(crate) fn from_perms(degree: usize, gens: Vec<perm::Perm>, max_order: usize) -> Result<Self> {
        let id = perm::identity(degree);
        let mut seen: HashMap<perm::Perm, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone(), ());
        queue.push_back(id);
        let mut elements = Vec::new();
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = perm::compose(&x, g);
                if !seen.contains_key(&y) {
                    if seen.len() >= max_order {
                        return Err(Error::infeasible("group order", seen.len() + 1, max_order));
                    }
                    seen.insert(y.clone(), ());
                    queue.push_back(y);
                }
            }
            elements.push(x);
        }
        elements.sort();
        let order = elements.len();
        let index: HashMap<&perm::Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut mult = Vec::with_capacity(order * order);
        for a in &elements {
            for b in &elements {
                mult.push(index[&perm::compose(a, b)] as u16);
            }
        }
        let mut inv = vec![0u16; order];
        for (i, p) in elements.iter().enumerate() {
            let mut q = vec![0u8; degree];
            for (x, &y) in p.iter().enumerate() {
                q[y as usize] = x as u8;
            }
            inv[i] = index[&q] as u16;
        }
        let labels = elements.iter().map(|p| perm::cycle_label(p)).collect();
        Ok(FiniteGroup { order, mult, inv, identity: 0, labels, degree: Some(degree), perms: elements })
    }

    /// The cyclic group of the given order, as a table.
    pub fn cyclic(n: usize) -> Result<Self> {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&table, None, DEFAULT_MAX_ORDER.max(n))
    }

    /// The symmetric group on `d` points.
    pub fn symmetric(d: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if d >= 2 {
            let mut t = perm::identity(d);
            t.swap(0, 1);
            gens.push(t);
            let cycle: perm::Perm = (0..d).map(|i| ((i + 1) % d) as u8).collect();
            gens.push(cycle);
        }
        Self::from_perms(d, gens, usize::MAX)
    }

    /// The dihedral group of order `2d` acting on the vertices of a `d`-gon.
    pub fn dihedral(d: usize) -> Result<Self> {
        let rotation: perm::Perm = (0..d).map(|i| ((i + 1) % d) as u8).collect();
        let reflection: perm::Perm = (0..d).map(|i| ((d - i) % d) as u8).collect();
        Self::from_perms(d, vec![rotation, reflection], usize::MAX)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `a^b = b^-1 a b`.
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn product(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    /// One-line images (0-based) when the group was built from permutations.
    pub fn permutation(&self, a: usize) -> Option<&[u8]> {
        self.perms.get(a).map(|p| p.as_slice())
    }

    /// The multiplication table as nested rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Resolves an element by label, by cycle notation (permutation groups)
    /// or by index.
    pub fn element(&self, selector: &str) -> Result<usize> {
        let s = selector.trim();
        if let Some(i) = self.labels.iter().position(|l| l == s) {
            return Ok(i);
        }
        if let (Some(degree), true) = (self.degree, s.starts_with('(')) {
            let p = perm::parse_cycles(s, degree)?;
            return self
                .perms
                .iter()
                .position(|q| *q == p)
                .ok_or_else(|| Error::InvalidInput(format!("{s} is not an element of the group")));
        }
        match s.parse::<usize>() {
            Ok(i) if i < self.order => Ok(i),
            _ => Err(Error::InvalidInput(format!("unknown element {s:?}"))),
        }
    }

    /// Smallest subgroup containing `gens`, by worklist closure.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.order];
        let mut members = vec![self.identity];
        mask[self.identity] = true;
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != self.identity).collect();
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            for &g in &gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    members.push(y);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        Subgroup { members, mask }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { members: (0..self.order).collect(), mask: vec![true; self.order] }
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.order).collect();
        self.classes_within(&self.whole(), &all)
    }

    /// Partition of `subset ∩ h` into conjugacy classes of `h`.
    pub fn classes_within(&self, h: &Subgroup, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut done = vec![false; self.order];
        let mut classes = Vec::new();
        let mut sorted: Vec<usize> = subset.iter().copied().filter(|&x| h.contains(x)).collect();
        sorted.sort_unstable();
        for x in sorted {
            if done[x] {
                continue;
            }
            let mut class = Vec::new();
            for &g in &h.members {
                let y = self.conj(x, g);
                if !done[y] {
                    done[y] = true;
                    class.push(y);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// Relabels elements by a permutation `sigma` of `0..order`: element `x`
    /// becomes `sigma[x]`. Used to test relabelling invariance.
    pub fn relabeled(&self, sigma: &[usize]) -> Result<Self> {
        let n = self.order;
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[sigma[a]][sigma[b]] = sigma[self.mul(a, b)];
            }
        }
        let mut labels = vec![String::new(); n];
        for a in 0..n {
            labels[sigma[a]] = self.labels[a].clone();
        }
        Self::from_table(&table, Some(labels), n)
    }
}

fn check_unique_labels(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::InvalidInput(format!("duplicate element label {l:?}")));
        }
    }
    Ok(())
}

/// A subgroup as a sorted member list plus a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }
}

/// A conjugation-invariant subset `Q` of a finite group with a fixed member
/// ordering `q_0, ..., q_{m-1}`.
#[derive(Clone, Debug)]
pub struct InvariantSubset {
    group: Arc<FiniteGroup>,
    members: Vec<usize>,
    position: Vec<Option<u16>>,
    ell: usize,
    // conj[i * m + j] = position of q_i^{q_j}
    conj: Vec<u16>,
    // conj_inv[i * m + j] = position of q_i^{q_j^-1}
    conj_inv: Vec<u16>,
    // act[g * m + i] = position of q_i^g
    act: Vec<u16>,
}

impl InvariantSubset {
    pub fn new(group: Arc<FiniteGroup>, members: &[usize]) -> Result<Self> {
        let mut members: Vec<usize> = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::InvalidInput("Q must be nonempty".into()));
        }
        if let Some(&x) = members.iter().find(|&&x| x >= group.order()) {
            return Err(Error::InvalidInput(format!("element index {x} out of range")));
        }
        if members.len() > u16::MAX as usize {
            return Err(Error::infeasible("|Q|", members.len(), u16::MAX));
        }
        let mut position = vec![None; group.order()];
        for (i, &x) in members.iter().enumerate() {
            position[x] = Some(i as u16);
        }
        if members.contains(&group.identity()) {
            log::warn!("Q contains the identity element");
        }
        for &a in &members {
            for g in 0..group.order() {
                let b = group.conj(a, g);
                if position[b].is_none() {
                    return Err(Error::NotInvariant {
                        member: group.label(a).to_string(),
                        conjugator: group.label(g).to_string(),
                        image: group.label(b).to_string(),
                    });
                }
            }
        }
        let m = members.len();
        let pos = |x: usize| position[x].expect("closed under conjugation");
        let mut conj = Vec::with_capacity(m * m);
        let mut conj_inv = Vec::with_capacity(m * m);
        for &a in &members {
            for &b in &members {
                conj.push(pos(group.conj(a, b)));
                conj_inv.push(pos(group.conj(a, group.inv(b))));
            }
        }
        let mut act = Vec::with_capacity(group.order() * m);
        for g in 0..group.order() {
            for &a in &members {
                act.push(pos(group.conj(a, g)));
            }
        }
        let ell = members.iter().fold(1usize, |acc, &a| acc.lcm(&group.element_order(a)));
        Ok(InvariantSubset { group, members, position, ell, conj, conj_inv, act })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// `m = |Q|`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Least common multiple of the member orders.
    pub fn ell(&self) -> usize {
        self.ell
    }

    #[inline]
    pub fn element(&self, i: usize) -> usize {
        self.members[i]
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.position.get(x).copied().flatten().map(|p| p as usize)
    }

    /// Position of `q_i^{q_j}`.
    #[inline]
    pub fn conj(&self, i: usize, j: usize) -> usize {
        self.conj[i * self.members.len() + j] as usize
    }

    /// Position of `q_i^{q_j^-1}`.
    #[inline]
    pub fn conj_inv(&self, i: usize, j: usize) -> usize {
        self.conj_inv[i * self.members.len() + j] as usize
    }

    /// Position of `q_i^g` for a group element `g`.
    #[inline]
    pub fn act(&self, i: usize, g: usize) -> usize {
        self.act[g * self.members.len() + i] as usize
    }

    pub fn label(&self, i: usize) -> &str {
        self.group.label(self.members[i])
    }

    /// True when `Q` is a single conjugacy class of `G`.
    pub fn is_single_class(&self) -> bool {
        let a = self.members[0];
        let mut class: Vec<usize> = (0..self.group.order()).map(|g| self.group.conj(a, g)).collect();
        class.sort_unstable();
        class.dedup();
        class == self.members
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::from_permutations(3, &[vec![2, 1, 3], vec![2, 3, 1]], 512).unwrap())
    }

    #[test]
    fn cyclic_two_from_table() {
        let g = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]], None, 512).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn s3_from_generators() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.label(g.identity()), "()");
    }

    #[test]
    fn non_associative_table_rejected() {
        // Latin square with identity 0 and inverses, but not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(&t, None, 512), Err(Error::NonAssociative { .. })));
    }

    #[test]
    fn missing_identity_rejected() {
        let t = vec![vec![1, 0], vec![0, 0]];
        assert!(matches!(FiniteGroup::from_table(&t, None, 512), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(
            FiniteGroup::from_permutations(6, &[vec![2, 1, 3, 4, 5, 6], vec![2, 3, 4, 5, 6, 1]], 512),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn class_equations() {
        let sizes = |g: &FiniteGroup| g.conjugacy_classes().iter().map(|c| c.len()).collect::<Vec<_>>();
        let mut s3 = sizes(&s3());
        s3.sort();
        assert_eq!(s3, vec![1, 2, 3]);
        assert_eq!(sizes(&FiniteGroup::cyclic(2).unwrap()), vec![1, 1]);
        let mut s4 = sizes(&FiniteGroup::symmetric(4).unwrap());
        s4.sort();
        assert_eq!(s4, vec![1, 3, 6, 6, 8]);
    }

    #[test]
    fn closures() {
        let g = s3();
        assert_eq!(g.closure(&[g.identity()]).order(), 1);
        assert_eq!(g.closure(&[]).order(), 1);
        let t12 = g.element("(12)").unwrap();
        let t13 = g.element("(13)").unwrap();
        assert_eq!(g.closure(&[t12, t13]).order(), 6);
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let h = s4.closure(&[s4.element("(1234)").unwrap(), s4.element("(13)").unwrap()]);
        assert_eq!(h.order(), 8);
    }

    #[test]
    fn invariant_subsets() {
        let g = s3();
        let q: Vec<usize> = ["(12)", "(13)", "(23)"].iter().map(|s| g.element(s).unwrap()).collect();
        let q = InvariantSubset::new(g.clone(), &q).unwrap();
        assert_eq!((q.len(), q.ell()), (3, 2));
        assert!(q.is_single_class());

        let t12 = g.element("(12)").unwrap();
        match InvariantSubset::new(g.clone(), &[t12]) {
            Err(Error::NotInvariant { member, conjugator, image }) => {
                assert_eq!(member, "(12)");
                let witness = g.conj(t12, g.element(&conjugator).unwrap());
                assert_eq!(g.label(witness), image);
                assert_ne!(witness, t12);
            }
            other => panic!("expected witness, got {other:?}"),
        }

        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let q = InvariantSubset::new(z2, &[1]).unwrap();
        assert_eq!((q.len(), q.ell()), (1, 2));
    }

    #[test]
    fn conjugation_tables_agree_with_group() {
        let g = Arc::new(FiniteGroup::symmetric(4).unwrap());
        let classes = g.conjugacy_classes();
        let transpositions = classes.iter().find(|c| c.len() == 6 && g.element_order(c[0]) == 2).unwrap();
        let q = InvariantSubset::new(g.clone(), transpositions).unwrap();
        for i in 0..q.len() {
            for j in 0..q.len() {
                let (a, b) = (q.element(i), q.element(j));
                assert_eq!(q.element(q.conj(i, j)), g.conj(a, b));
                assert_eq!(q.element(q.conj_inv(i, j)), g.conj(a, g.inv(b)));
            }
        }
    }
}
