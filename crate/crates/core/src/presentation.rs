//! Presentations of tuple stabilizers in the braid group and the first
//! homology of Hurwitz components.
//!
//! A component is the orbit of a basepoint tuple under `Br_n`, acting on
//! the right: a word in the `σ_i` is applied letter by letter from the
//! left. The stabilizer is presented by Reidemeister–Schreier rewriting
//! over the breadth-first spanning tree of the orbit graph.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::InvariantSubset;
use crate::hurwitz::{check_packable, check_tuple, conjugate_tuple, orbit_members, pack, sigma_in_place, Tuple, DEFAULT_STATE_CAP};
use crate::linalg::field::{self, Dense, Field};
use crate::linalg::{AbelianGroup, FieldCokernel, RowReduction, SparseRow};

/// Largest total relator length accepted for a stabilizer presentation.
pub const DEFAULT_LETTER_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Orbit size.
    pub states: usize,
    /// Total relator letters of a presentation.
    pub letters: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { states: DEFAULT_STATE_CAP, letters: DEFAULT_LETTER_CAP }
    }
}

/// A finite presentation. Letters are signed 1-based generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    generators: usize,
    letters: Vec<i32>,
    offsets: Vec<usize>,
    /// For each generator, the (coset, braid generator) pair it comes from.
    labels: Vec<(u32, u16)>,
}

impl GroupPresentation {
    fn empty(generators: usize, labels: Vec<(u32, u16)>) -> Self {
        GroupPresentation { generators, letters: Vec::new(), offsets: vec![0], labels }
    }

    fn push(&mut self, word: &[i32]) {
        self.letters.extend_from_slice(word);
        self.offsets.push(self.letters.len());
    }

    pub fn num_generators(&self) -> usize {
        self.generators
    }

    pub fn num_relators(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn relator(&self, k: usize) -> &[i32] {
        &self.letters[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn relators(&self) -> impl Iterator<Item = &[i32]> + '_ {
        (0..self.num_relators()).map(|k| self.relator(k))
    }

    pub fn total_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn labels(&self) -> &[(u32, u16)] {
        &self.labels
    }

    /// Exponent-sum rows, one per relator.
    pub fn relation_rows(&self) -> Vec<SparseRow> {
        self.relators().map(|r| r.iter().map(|&l| (l.unsigned_abs() - 1, l.signum() as i128)).collect()).collect()
    }

    pub fn abelianization(&self) -> Result<AbelianGroup> {
        RowReduction::new(self.relation_rows(), self.generators)?.cokernel()
    }
}

fn braid_relator_words(n: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for i in 1..n as i32 {
        for j in i + 1..n as i32 {
            if j == i + 1 {
                out.push(vec![i, j, i, -j, -i, -j]);
            } else {
                out.push(vec![i, j, -i, -j]);
            }
        }
    }
    out
}

/// The standard presentation of `Br_n`.
pub fn braid_presentation(n: usize) -> GroupPresentation {
    let g = n.saturating_sub(1);
    let mut p = GroupPresentation::empty(g, (1..=g as u16).map(|i| (0, i)).collect());
    for w in braid_relator_words(n) {
        p.push(&w);
    }
    p
}

const NONE: u32 = u32::MAX;

/// The orbit of a basepoint as a coset graph, with its spanning tree.
#[derive(Clone, Debug)]
pub struct SchreierGraph {
    n: usize,
    members: Vec<Tuple>,
    index: HashMap<u128, u32>,
    base: u32,
    // x·σ_i and x·σ_i⁻¹ at x*(n-1) + i-1
    succ: Vec<u32>,
    pred: Vec<u32>,
    // tree edge (parent, i) entering x
    parent: Vec<(u32, u16)>,
    generator: Vec<u32>,
    labels: Vec<(u32, u16)>,
}

impl SchreierGraph {
    pub fn new(q: &InvariantSubset, basepoint: &[u8], cap: usize) -> Result<Self> {
        check_tuple(q, basepoint)?;
        check_packable(q, basepoint.len())?;
        let n = basepoint.len();
        let members = orbit_members(q, basepoint, cap)?;
        let s = members.len();
        let index: HashMap<u128, u32> = members.iter().enumerate().map(|(k, t)| (pack(t), k as u32)).collect();
        let base = index[&pack(basepoint)];
        let width = n.saturating_sub(1);
        let mut succ = vec![NONE; s * width];
        let mut pred = vec![NONE; s * width];
        let mut buf = vec![0u8; n];
        for (x, t) in members.iter().enumerate() {
            for i in 1..n {
                buf.copy_from_slice(t);
                sigma_in_place(q, i, &mut buf, false);
                let y = index[&pack(&buf)];
                succ[x * width + i - 1] = y;
                pred[y as usize * width + i - 1] = x as u32;
            }
        }
        let mut parent = vec![(NONE, 0u16); s];
        let mut generator = vec![NONE; s * width];
        let mut seen = vec![false; s];
        seen[base as usize] = true;
        let mut queue = VecDeque::from([base]);
        let mut tree = vec![false; s * width];
        while let Some(x) = queue.pop_front() {
            for i in 1..n {
                let e = x as usize * width + i - 1;
                let y = succ[e];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = (x, i as u16);
                    tree[e] = true;
                    queue.push_back(y);
                }
            }
        }
        let mut labels = Vec::new();
        for x in 0..s {
            for i in 1..n {
                let e = x * width + i - 1;
                if !tree[e] {
                    generator[e] = labels.len() as u32;
                    labels.push((x as u32, i as u16));
                }
            }
        }
        Ok(SchreierGraph { n, members, index, base, succ, pred, parent, generator, labels })
    }

    pub fn weight(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn basepoint(&self) -> &[u8] {
        &self.members[self.base as usize]
    }

    pub fn members(&self) -> &[Tuple] {
        &self.members
    }

    pub fn position(&self, t: &[u8]) -> Option<u32> {
        if t.len() != self.n {
            return None;
        }
        self.index.get(&pack(t)).copied()
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    /// (coset, braid generator) of each Schreier generator.
    pub fn labels(&self) -> &[(u32, u16)] {
        &self.labels
    }

    fn width(&self) -> usize {
        self.n.saturating_sub(1)
    }

    /// Transversal word carrying the basepoint to coset `x`.
    pub fn tree_word(&self, x: u32) -> Vec<i32> {
        let mut w = Vec::new();
        let mut y = x;
        while y != self.base {
            let (p, i) = self.parent[y as usize];
            w.push(i as i32);
            y = p;
        }
        w.reverse();
        w
    }

    /// The braid word `T(x) σ_i T(x·σ_i)⁻¹` of Schreier generator `g`.
    pub fn generator_word(&self, g: usize) -> Vec<i32> {
        let (x, i) = self.labels[g];
        let y = self.succ[x as usize * self.width() + i as usize - 1];
        let mut w = self.tree_word(x);
        w.push(i as i32);
        w.extend(self.tree_word(y).iter().rev().map(|l| -l));
        w
    }

    /// Walks `word` from coset `start`, reporting each Schreier generator
    /// crossed with its sign. Returns the end coset.
    pub fn trace(&self, start: u32, word: &[i32], mut emit: impl FnMut(u32, i32)) -> Result<u32> {
        let width = self.width();
        let mut x = start;
        for &l in word {
            let i = l.unsigned_abs() as usize;
            if i == 0 || i > width {
                return Err(Error::IndexOutOfRange(format!("sigma_{i} on weight {}", self.n)));
            }
            if l > 0 {
                let e = x as usize * width + i - 1;
                if self.generator[e] != NONE {
                    emit(self.generator[e], 1);
                }
                x = self.succ[e];
            } else {
                let y = self.pred[x as usize * width + i - 1];
                let e = y as usize * width + i - 1;
                if self.generator[e] != NONE {
                    emit(self.generator[e], -1);
                }
                x = y;
            }
        }
        Ok(x)
    }

    fn check_letters(&self, cap: usize) -> Result<()> {
        let per_coset: usize = braid_relator_words(self.n).iter().map(Vec::len).sum();
        let total = per_coset.saturating_mul(self.size());
        if total > cap {
            return Err(Error::infeasible("stabilizer relator letters", total, cap));
        }
        Ok(())
    }

    fn rewrite_all(&self, mut sink: impl FnMut(&[(u32, i32)])) -> Result<()> {
        let words = braid_relator_words(self.n);
        let mut buf = Vec::new();
        for x in 0..self.size() as u32 {
            for w in &words {
                buf.clear();
                let end = self.trace(x, w, |g, s| buf.push((g, s)))?;
                if end != x {
                    return Err(Error::Internal(format!("relator does not close at coset {x}")));
                }
                sink(&buf);
            }
        }
        Ok(())
    }

    /// Reidemeister–Schreier presentation of the basepoint stabilizer.
    pub fn stabilizer_presentation(&self, letter_cap: usize) -> Result<GroupPresentation> {
        self.check_letters(letter_cap)?;
        let mut p = GroupPresentation::empty(self.num_generators(), self.labels.clone());
        let mut word = Vec::new();
        self.rewrite_all(|r| {
            word.clear();
            word.extend(r.iter().map(|&(g, s)| s * (g as i32 + 1)));
            p.push(&word);
        })?;
        Ok(p)
    }

    /// Abelianized rewritten relators, without materializing the words.
    pub fn relation_rows(&self, letter_cap: usize) -> Result<Vec<SparseRow>> {
        self.check_letters(letter_cap)?;
        let mut rows = Vec::new();
        self.rewrite_all(|r| {
            if !r.is_empty() {
                rows.push(r.iter().map(|&(g, s)| (g, s as i128)).collect());
            }
        })?;
        Ok(rows)
    }
}

/// Presentation of the stabilizer of `basepoint` in `Br_n`.
pub fn stabilizer_presentation(q: &InvariantSubset, basepoint: &[u8], caps: Caps) -> Result<GroupPresentation> {
    SchreierGraph::new(q, basepoint, caps.states)?.stabilizer_presentation(caps.letters)
}

/// First homology of one component: its orbit graph together with the
/// reduced relation matrix of the abelianized stabilizer.
#[derive(Clone, Debug)]
pub struct ComponentH1 {
    graph: SchreierGraph,
    reduction: RowReduction,
}

impl ComponentH1 {
    pub fn new(q: &InvariantSubset, basepoint: &[u8], caps: Caps) -> Result<Self> {
        let graph = SchreierGraph::new(q, basepoint, caps.states)?;
        let rows = graph.relation_rows(caps.letters)?;
        let reduction = RowReduction::new(rows, graph.num_generators())?;
        Ok(ComponentH1 { graph, reduction })
    }

    pub fn graph(&self) -> &SchreierGraph {
        &self.graph
    }

    pub fn reduction(&self) -> &RowReduction {
        &self.reduction
    }

    pub fn integral(&self) -> Result<AbelianGroup> {
        self.reduction.cokernel()
    }

    /// `H_1` over a field, with its fixed basis of Schreier generators.
    pub fn over<F: Field>(&self, f: &F) -> FieldCokernel<F> {
        self.reduction.field_cokernel(f)
    }
}

pub fn h1_of_component(q: &InvariantSubset, basepoint: &[u8], caps: Caps) -> Result<AbelianGroup> {
    ComponentH1::new(q, basepoint, caps)?.integral()
}

/// A linear map between `H_1` groups over a field; `matrix` has one row
/// per target basis vector and one column per source basis vector.
#[derive(Clone, Debug, PartialEq)]
pub struct H1Map<E> {
    pub rows: usize,
    pub cols: usize,
    pub matrix: Dense<E>,
}

impl<E: Clone + PartialEq> H1Map<E> {
    pub fn zero<F: Field<E = E>>(f: &F, rows: usize, cols: usize) -> Self {
        H1Map { rows, cols, matrix: vec![vec![f.zero(); cols]; rows] }
    }

    pub fn identity<F: Field<E = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zero(f, n, n);
        for i in 0..n {
            m.matrix[i][i] = f.one();
        }
        m
    }

    /// `self ∘ first`.
    pub fn after<F: Field<E = E>>(&self, f: &F, first: &H1Map<E>) -> Result<Self> {
        if self.cols != first.rows {
            return Err(Error::InvalidInput(format!("cannot compose {}x{} after {}x{}", self.rows, self.cols, first.rows, first.cols)));
        }
        Ok(H1Map { rows: self.rows, cols: first.cols, matrix: field::matmul(f, &self.matrix, &first.matrix, self.cols, first.cols) })
    }

    pub fn rank<F: Field<E = E>>(&self, f: &F) -> usize {
        field::rank(f, &self.matrix, self.cols)
    }

    pub fn is_iso<F: Field<E = E>>(&self, f: &F) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    /// Copies `block` into rows `r0..` and columns `c0..`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &H1Map<E>) {
        for (i, row) in block.matrix.iter().enumerate() {
            self.matrix[r0 + i][c0..c0 + block.cols].clone_from_slice(row);
        }
    }
}

/// The map on `H_1` induced by sending the source basepoint to `start` in
/// the target component while relabelling `σ_i` as `σ_{i+shift}`.
/// `start` must be the image of the source basepoint, and the source orbit
/// must be carried into the target orbit compatibly with the shift.
pub fn induced_map<F: Field>(
    f: &F,
    src: &ComponentH1,
    src_h: &FieldCokernel<F>,
    tgt: &ComponentH1,
    tgt_h: &FieldCokernel<F>,
    start: &[u8],
    shift: usize,
) -> Result<H1Map<F::E>> {
    let Some(s0) = tgt.graph.position(start) else {
        return Err(Error::Internal("shifted basepoint is not in the target component".into()));
    };
    let mut map = H1Map::zero(f, tgt_h.dim(), src_h.dim());
    for (j, &g) in src_h.basis_columns().iter().enumerate() {
        let word: Vec<i32> = src.graph.generator_word(g as usize).iter().map(|&l| l + l.signum() * shift as i32).collect();
        let mut v: BTreeMap<u32, i128> = BTreeMap::new();
        let end = tgt.graph.trace(s0, &word, |h, s| *v.entry(h).or_insert(0) += s as i128)?;
        if end != s0 {
            return Err(Error::Internal(format!("image of generator {g} does not close in the target")));
        }
        v.retain(|_, x| *x != 0);
        for (i, x) in tgt_h.coordinates(&tgt.reduction, &v)?.into_iter().enumerate() {
            map.matrix[i][j] = x;
        }
    }
    Ok(map)
}

fn repeated(a: usize, e: usize) -> Tuple {
    vec![a as u8; e]
}

/// Basepoint of the target of `lst(a)^e`.
pub fn lst_start(a: usize, e: usize, basepoint: &[u8]) -> Tuple {
    let mut t = repeated(a, e);
    t.extend_from_slice(basepoint);
    t
}

/// Basepoint of the target of `rst(a)^e`.
pub fn rst_start(a: usize, e: usize, basepoint: &[u8]) -> Tuple {
    let mut t = basepoint.to_vec();
    t.extend(repeated(a, e));
    t
}

/// `lst(a)^e_*`: prepend `e` copies of `a`.
pub fn lst_induced_h1<F: Field>(
    f: &F,
    a: usize,
    e: usize,
    src: (&ComponentH1, &FieldCokernel<F>),
    tgt: (&ComponentH1, &FieldCokernel<F>),
) -> Result<H1Map<F::E>> {
    induced_map(f, src.0, src.1, tgt.0, tgt.1, &lst_start(a, e, src.0.graph.basepoint()), e)
}

/// `rst(a)^e_*`: append `e` copies of `a`.
pub fn rst_induced_h1<F: Field>(
    f: &F,
    a: usize,
    e: usize,
    src: (&ComponentH1, &FieldCokernel<F>),
    tgt: (&ComponentH1, &FieldCokernel<F>),
) -> Result<H1Map<F::E>> {
    induced_map(f, src.0, src.1, tgt.0, tgt.1, &rst_start(a, e, src.0.graph.basepoint()), 0)
}

/// The twist `x ↦ x^g` on `H_1`.
pub fn twist_induced_h1<F: Field>(
    f: &F,
    q: &InvariantSubset,
    g: usize,
    src: (&ComponentH1, &FieldCokernel<F>),
    tgt: (&ComponentH1, &FieldCokernel<F>),
) -> Result<H1Map<F::E>> {
    let start = conjugate_tuple(q, g, src.0.graph.basepoint());
    induced_map(f, src.0, src.1, tgt.0, tgt.1, &start, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupFile};
    use crate::linalg::field::{PrimeField, Rationals};
    use std::sync::Arc;

    fn s3() -> InvariantSubset {
        GroupFile::bundled("s3").unwrap().select_q(&GroupFile::bundled("s3").unwrap().load().unwrap(), "transpositions").unwrap()
    }

    fn z2() -> InvariantSubset {
        InvariantSubset::new(Arc::new(FiniteGroup::cyclic(2).unwrap()), &[1]).unwrap()
    }

    #[test]
    fn braid_presentations() {
        let p1 = braid_presentation(1);
        assert_eq!((p1.num_generators(), p1.num_relators()), (0, 0));
        let p2 = braid_presentation(2);
        assert_eq!((p2.num_generators(), p2.num_relators()), (1, 0));
        let p3 = braid_presentation(3);
        assert_eq!((p3.num_generators(), p3.num_relators()), (2, 1));
        assert_eq!(braid_presentation(5).num_relators(), 6);
        assert_eq!(braid_presentation(5).abelianization().unwrap(), AbelianGroup::new(1, vec![]));
    }

    #[test]
    fn weight_one_is_trivial() {
        let q = s3();
        let p = stabilizer_presentation(&q, &[0], Caps::default()).unwrap();
        assert_eq!((p.num_generators(), p.num_relators()), (0, 0));
        assert!(h1_of_component(&q, &[0], Caps::default()).unwrap().is_trivial());
    }

    #[test]
    fn index_three_in_free_group() {
        let q = s3();
        let t = [q.position(q.group().element("(12)").unwrap()).unwrap() as u8, q.position(q.group().element("(13)").unwrap()).unwrap() as u8];
        let p = stabilizer_presentation(&q, &t, Caps::default()).unwrap();
        assert_eq!(p.num_generators(), 1);
        assert_eq!(p.num_relators(), 0);
        assert_eq!(h1_of_component(&q, &t, Caps::default()).unwrap(), AbelianGroup::new(1, vec![]));
    }

    #[test]
    fn degenerate_group_matches_braid_group() {
        let q = z2();
        for n in 2..7 {
            let t = vec![0u8; n];
            let p = stabilizer_presentation(&q, &t, Caps::default()).unwrap();
            assert_eq!(p.num_generators(), n - 1);
            assert_eq!(p, GroupPresentation { labels: p.labels.clone(), ..braid_presentation(n) });
            assert_eq!(h1_of_component(&q, &t, Caps::default()).unwrap(), AbelianGroup::new(1, vec![]));
        }
    }

    #[test]
    fn degenerate_lst_is_identity() {
        let q = z2();
        let f = Rationals;
        for n in 2..6 {
            let src = ComponentH1::new(&q, &vec![0; n], Caps::default()).unwrap();
            let tgt = ComponentH1::new(&q, &vec![0; n + 1], Caps::default()).unwrap();
            let (sh, th) = (src.over(&f), tgt.over(&f));
            let m = lst_induced_h1(&f, 0, 1, (&src, &sh), (&tgt, &th)).unwrap();
            assert_eq!(m, H1Map::identity(&f, 1));
            let same = lst_induced_h1(&f, 0, 0, (&src, &sh), (&src, &sh)).unwrap();
            assert_eq!(same, H1Map::identity(&f, 1));
        }
    }

    #[test]
    fn schreier_generator_count() {
        let q = s3();
        for t in [vec![0u8, 1, 2], vec![0, 0, 1, 1], vec![0, 1, 0, 2, 1]] {
            let g = SchreierGraph::new(&q, &t, 1 << 20).unwrap();
            let (s, n) = (g.size(), g.weight());
            assert_eq!(g.num_generators(), s * (n - 1) - (s - 1));
            for k in 0..g.num_generators() {
                let w = g.generator_word(k);
                assert_eq!(crate::hurwitz::apply_word(&q, &w, &t).unwrap(), t);
            }
        }
    }

    #[test]
    fn letter_cap_is_enforced() {
        let q = s3();
        let caps = Caps { letters: 10, ..Caps::default() };
        assert!(matches!(stabilizer_presentation(&q, &[0, 1, 2, 0], caps), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn field_dimensions_follow_integral_group() {
        let q = s3();
        for t in [vec![0u8, 1, 2, 0], vec![0, 1, 0, 1, 2], vec![0, 0, 1, 1, 2, 2]] {
            let c = ComponentH1::new(&q, &t, Caps::default()).unwrap();
            let z = c.integral().unwrap();
            assert_eq!(c.over(&Rationals).dim(), z.dim_over(0));
            for p in [2, 3, 5] {
                assert_eq!(c.over(&PrimeField::new(p).unwrap()).dim(), z.dim_over(p));
            }
        }
    }
}
