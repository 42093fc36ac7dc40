//! Sparse integer matrices and unit-pivot elimination.
//!
//! Relation matrices are given row by row. Elimination first pivots on
//! entries `±1` only, which is unimodular and therefore valid over the
//! integers and every field at once; the leftover core is handed to the
//! dense routines.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::field::{self, Field};
use super::snf;
use super::AbelianGroup;
use crate::error::{Error, Result};

pub type SparseRow = Vec<(u32, i128)>;

/// Integer matrix as sorted `(row, col, value)` triplets without zeros or
/// repeated positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, BigInt)>,
}

impl SparseIntMatrix {
    /// Sums repeated positions and drops zeros.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidInput(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            *map.entry((r, c)).or_insert_with(BigInt::zero) += v;
        }
        let entries = map.into_iter().filter(|(_, v)| !v.is_zero()).map(|((r, c), v)| (r, c, v)).collect();
        Ok(SparseIntMatrix { rows, cols, entries })
    }

    /// Builds from column images: `columns[j]` lists `(row, value)`.
    pub fn from_columns(rows: usize, columns: &[SparseRow]) -> Result<Self> {
        let trip = columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i as usize, j, BigInt::from(v))));
        Self::from_triplets(rows, columns.len(), trip)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize, BigInt)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            d[*r][*c] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by_key(|e| (e.0, e.1));
        SparseIntMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Rows as sparse vectors with machine-size entries.
    pub fn row_vectors(&self) -> Result<Vec<SparseRow>> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            let v = v.to_i128().ok_or_else(|| Error::infeasible("matrix entry magnitude", u128::MAX, i128::MAX as u128))?;
            out[*r].push((*c as u32, v));
        }
        Ok(out)
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput("dimension mismatch in product".into()));
        }
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            by_row[*r].push((*c, v));
        }
        let trip = self
            .entries
            .iter()
            .flat_map(|(i, k, a)| by_row[*k].iter().map(move |(j, b)| (*i, *j, a * *b)))
            .collect::<Vec<_>>();
        Self::from_triplets(self.rows, other.cols, trip)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes `rows cols nnz` then one `row col value` line per entry.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {} {}", self.rows, self.cols, self.entries.len())?;
        for (r, c, v) in &self.entries {
            writeln!(out, "{r} {c} {v}")?;
        }
        Ok(())
    }

    pub fn read_triplets<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty() && !s.starts_with('%')));
        let bad = |s: &str| Error::InvalidInput(format!("bad triplet line {s:?}"));
        let header = lines.next().ok_or_else(|| Error::InvalidInput("empty triplet file".into()))??;
        let dims: Vec<usize> = header.split_whitespace().map(|t| t.parse().map_err(|_| bad(&header))).collect::<Result<_>>()?;
        if dims.len() < 2 {
            return Err(bad(&header));
        }
        let mut trip = Vec::new();
        for line in lines {
            let line = line?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad(&line));
            }
            let r = parts[0].parse().map_err(|_| bad(&line))?;
            let c = parts[1].parse().map_err(|_| bad(&line))?;
            let v: BigInt = parts[2].parse().map_err(|_| bad(&line))?;
            trip.push((r, c, v));
        }
        Self::from_triplets(dims[0], dims[1], trip)
    }
}

fn normalize(mut row: SparseRow) -> SparseRow {
    row.sort_unstable_by_key(|e| e.0);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

// a - f·b, reporting the columns of b newly present in the result
fn axpy(a: &SparseRow, f: i128, b: &SparseRow, fresh: &mut Vec<u32>) -> Result<SparseRow> {
    let overflow = || Error::infeasible("entry growth during sparse elimination", u128::MAX, i128::MAX as u128);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = f.checked_mul(b[j].1).and_then(i128::checked_neg).ok_or_else(overflow)?;
            out.push((b[j].0, v));
            fresh.push(b[j].0);
            j += 1;
        } else {
            let v = f.checked_mul(b[j].1).and_then(|x| a[i].1.checked_sub(x)).ok_or_else(overflow)?;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// Result of unit-pivot elimination on the rows of a relation matrix.
///
/// Pivot rows are kept in pivot order; row `k` vanishes on the pivot
/// columns of rows `0..k`. The core rows vanish on every pivot column.
#[derive(Clone, Debug)]
pub struct RowReduction {
    cols: usize,
    pivots: Vec<(u32, i128, SparseRow)>,
    pivot_of_col: Vec<u32>,
    core: Vec<SparseRow>,
    free_cols: Vec<u32>,
    // free columns that occur in some core row
    core_cols: Vec<u32>,
}

impl RowReduction {
    pub fn new(rows: Vec<SparseRow>, cols: usize) -> Result<Self> {
        let mut rows: Vec<SparseRow> = rows.into_iter().map(normalize).collect();
        if let Some(&(c, _)) = rows.iter().flat_map(|r| r.last()).find(|e| e.0 as usize >= cols) {
            return Err(Error::InvalidInput(format!("column {c} out of range {cols}")));
        }
        let mut active = vec![true; rows.len()];
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); cols];
        let mut heap = BinaryHeap::new();
        for (r, row) in rows.iter().enumerate() {
            for &(c, _) in row {
                col_rows[c as usize].push(r as u32);
            }
            heap.push(Reverse((row.len(), r)));
        }
        let mut pivots = Vec::new();
        let mut pivot_of_col = vec![u32::MAX; cols];
        let mut fresh = Vec::new();
        while let Some(Reverse((len, r))) = heap.pop() {
            if !active[r] || rows[r].len() != len {
                continue;
            }
            if len == 0 {
                active[r] = false;
                continue;
            }
            let choice = rows[r]
                .iter()
                .filter(|e| e.1 == 1 || e.1 == -1)
                .min_by_key(|e| (col_rows[e.0 as usize].len(), e.0))
                .copied();
            let Some((c, u)) = choice else { continue };
            active[r] = false;
            let prow = std::mem::take(&mut rows[r]);
            let touched = std::mem::take(&mut col_rows[c as usize]);
            for j in touched {
                let j = j as usize;
                if !active[j] {
                    continue;
                }
                let Ok(k) = rows[j].binary_search_by_key(&c, |e| e.0) else { continue };
                let f = rows[j][k].1 * u;
                fresh.clear();
                let new = axpy(&rows[j], f, &prow, &mut fresh)?;
                rows[j] = new;
                for &fc in &fresh {
                    if fc != c {
                        col_rows[fc as usize].push(j as u32);
                    }
                }
                heap.push(Reverse((rows[j].len(), j)));
            }
            pivot_of_col[c as usize] = pivots.len() as u32;
            pivots.push((c, u, prow));
        }
        let core: Vec<SparseRow> = rows.into_iter().zip(active).filter(|(r, a)| *a && !r.is_empty()).map(|(r, _)| r).collect();
        let free_cols = (0..cols as u32).filter(|&c| pivot_of_col[c as usize] == u32::MAX).collect();
        let mut core_cols: Vec<u32> = core.iter().flatten().map(|e| e.0).collect();
        core_cols.sort_unstable();
        core_cols.dedup();
        Ok(RowReduction { cols, pivots, pivot_of_col, core, free_cols, core_cols })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn unit_pivots(&self) -> usize {
        self.pivots.len()
    }

    fn core_rows(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        let index: BTreeMap<u32, usize> = self.core_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        self.core.iter().map(move |row| {
            let mut d = vec![BigInt::zero(); self.core_cols.len()];
            for &(c, v) in row {
                d[index[&c]] = BigInt::from(v);
            }
            d
        })
    }

    // reduced echelon form of the core over a field, one row at a time
    fn core_echelon<F: Field>(&self, f: &F) -> (Vec<Vec<F::E>>, Vec<usize>) {
        let width = self.core_cols.len();
        let mut rows: Vec<Vec<F::E>> = Vec::new();
        let mut leads: Vec<usize> = Vec::new();
        for r in self.core_rows() {
            let mut v: Vec<F::E> = r.iter().map(|x| f.from_bigint(x)).collect();
            for (row, &c) in rows.iter().zip(&leads) {
                if f.is_zero(&v[c]) {
                    continue;
                }
                let k = v[c].clone();
                for (x, y) in v.iter_mut().zip(row).skip(c) {
                    if !f.is_zero(y) {
                        *x = f.sub(x, &f.mul(&k, y));
                    }
                }
            }
            if let Some(c) = (0..width).find(|&c| !f.is_zero(&v[c])) {
                let inv = f.inv(&v[c]);
                v.iter_mut().for_each(|x| *x = f.mul(x, &inv));
                // keep leads increasing so that one pass reduces fully
                let at = leads.partition_point(|&l| l < c);
                rows.insert(at, v);
                leads.insert(at, c);
                if rows.len() == width {
                    break;
                }
            }
        }
        let pivots = field::rref(f, &mut rows, width);
        (rows, pivots)
    }

    /// The core rows restricted to the columns they touch, as a dense matrix.
    pub fn core_dense(&self) -> Vec<Vec<BigInt>> {
        let index: BTreeMap<u32, usize> = self.core_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        self.core
            .iter()
            .map(|row| {
                let mut d = vec![BigInt::zero(); self.core_cols.len()];
                for &(c, v) in row {
                    d[index[&c]] = BigInt::from(v);
                }
                d
            })
            .collect()
    }

    pub fn core_shape(&self) -> (usize, usize) {
        (self.core.len(), self.core_cols.len())
    }

    /// Columns that are not unit pivots.
    pub fn free_columns(&self) -> &[u32] {
        &self.free_cols
    }

    /// Nonzero invariant factors of the original matrix (ones from the
    /// unit pivots followed by the core factors).
    pub fn nonzero_factors(&self) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::from(1); self.pivots.len()];
        if !self.core.is_empty() {
            let basis = snf::lattice_basis(self.core_rows(), self.core_cols.len());
            let f = snf::invariant_factors(&basis, self.core_cols.len())?;
            out.extend(f.into_iter().filter(|d| !d.is_zero()));
        }
        Ok(out)
    }

    pub fn rank_over_q(&self) -> Result<usize> {
        Ok(self.pivots.len() + snf::lattice_basis(self.core_rows(), self.core_cols.len()).len())
    }

    pub fn rank_over<F: Field>(&self, f: &F) -> usize {
        self.pivots.len() + self.core_echelon(f).1.len()
    }

    /// `Z^cols / (row span)`.
    pub fn cokernel(&self) -> Result<AbelianGroup> {
        let factors = self.nonzero_factors()?;
        let rank = self.cols - factors.len();
        Ok(AbelianGroup::new(rank, factors))
    }

    /// Reduces an integer vector modulo the unit pivot rows; the result is
    /// supported on free columns.
    pub fn reduce_units(&self, v: &mut BTreeMap<u32, i128>) -> Result<()> {
        let mut heap: BinaryHeap<Reverse<u32>> = v
            .keys()
            .filter_map(|&c| match self.pivot_of_col[c as usize] {
                u32::MAX => None,
                k => Some(Reverse(k)),
            })
            .collect();
        let overflow = || Error::infeasible("entry growth during reduction", u128::MAX, i128::MAX as u128);
        while let Some(Reverse(k)) = heap.pop() {
            let (c, u, row) = &self.pivots[k as usize];
            let Some(coef) = v.get(c).copied() else { continue };
            if coef == 0 {
                continue;
            }
            let f = coef * u;
            for &(col, x) in row {
                let e = v.entry(col).or_insert(0);
                *e = e.checked_sub(f.checked_mul(x).ok_or_else(overflow)?).ok_or_else(overflow)?;
                let pk = self.pivot_of_col[col as usize];
                if pk != u32::MAX && pk > k && *e != 0 {
                    heap.push(Reverse(pk));
                }
            }
            v.retain(|_, x| *x != 0);
        }
        Ok(())
    }

    /// [`RowReduction::reduce_units`] over a field.
    pub fn reduce_units_over<F: Field>(&self, f: &F, v: &mut BTreeMap<u32, F::E>) {
        let mut heap: BinaryHeap<Reverse<u32>> = v
            .keys()
            .filter_map(|&c| match self.pivot_of_col[c as usize] {
                u32::MAX => None,
                k => Some(Reverse(k)),
            })
            .collect();
        while let Some(Reverse(k)) = heap.pop() {
            let (c, u, row) = &self.pivots[k as usize];
            let Some(coef) = v.get(c).filter(|x| !f.is_zero(x)).cloned() else { continue };
            // u is a unit ±1, its own inverse
            let scale = f.mul(&coef, &f.from_i128(*u));
            for &(col, x) in row {
                let e = v.entry(col).or_insert_with(|| f.zero());
                *e = f.sub(e, &f.mul(&scale, &f.from_i128(x)));
                let pk = self.pivot_of_col[col as usize];
                if pk != u32::MAX && pk > k && !f.is_zero(e) {
                    heap.push(Reverse(pk));
                }
            }
            v.retain(|_, x| !f.is_zero(x));
        }
    }

    /// A basis over `f` of the vectors annihilated by every row, one per
    /// column left free by the elimination.
    pub fn kernel_over<F: Field>(&self, f: &F) -> Vec<BTreeMap<u32, F::E>> {
        let (core, core_pivots) = self.core_echelon(f);
        let pivot_cols: BTreeSet<u32> = core_pivots.iter().map(|&p| self.core_cols[p]).collect();
        let index: BTreeMap<u32, usize> = self.core_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let rows: Vec<Vec<(u32, F::E)>> =
            self.pivots.iter().map(|(_, _, row)| row.iter().map(|&(c, v)| (c, f.from_i128(v))).collect()).collect();
        let mut x = vec![f.zero(); self.cols];
        let mut out = Vec::new();
        for &t in self.free_cols.iter().filter(|c| !pivot_cols.contains(c)) {
            x.iter_mut().for_each(|e| *e = f.zero());
            x[t as usize] = f.one();
            if let Some(&i) = index.get(&t) {
                for (row, &pc) in core.iter().zip(&core_pivots) {
                    x[self.core_cols[pc] as usize] = f.neg(&row[i]);
                }
            }
            // later pivot rows only involve later pivot columns and free ones
            for ((c, u, _), row) in self.pivots.iter().zip(&rows).rev() {
                let mut s = f.zero();
                for (j, v) in row {
                    if j != c && !f.is_zero(&x[*j as usize]) {
                        s = f.add(&s, &f.mul(&x[*j as usize], v));
                    }
                }
                x[*c as usize] = f.neg(&f.mul(&s, &f.from_i128(*u)));
            }
            out.push(x.iter().enumerate().filter(|(_, e)| !f.is_zero(e)).map(|(c, e)| (c as u32, e.clone())).collect());
        }
        out
    }

    /// Cokernel over a field with a fixed basis of free columns.
    pub fn field_cokernel<F: Field>(&self, f: &F) -> FieldCokernel<F> {
        let (core, core_pivots) = self.core_echelon(f);
        let mut dropped = BTreeSet::new();
        for &p in &core_pivots {
            dropped.insert(self.core_cols[p]);
        }
        let basis: Vec<u32> = self.free_cols.iter().copied().filter(|c| !dropped.contains(c)).collect();
        let coordinate = basis.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let core_index = self.core_cols.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        FieldCokernel { field: f.clone(), core, core_pivots, core_cols: self.core_cols.clone(), core_index, coordinate, basis }
    }
}

/// `F^cols / (row span)` with the basis of columns left free by both the
/// unit pivots and the core elimination.
#[derive(Clone, Debug)]
pub struct FieldCokernel<F: Field> {
    field: F,
    core: Vec<Vec<F::E>>,
    core_pivots: Vec<usize>,
    core_cols: Vec<u32>,
    core_index: BTreeMap<u32, u32>,
    coordinate: BTreeMap<u32, u32>,
    basis: Vec<u32>,
}

impl<F: Field> FieldCokernel<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Original column of each basis vector.
    pub fn basis_columns(&self) -> &[u32] {
        &self.basis
    }

    /// Coordinates of the class of an integer vector.
    pub fn coordinates(&self, red: &RowReduction, v: &BTreeMap<u32, i128>) -> Result<Vec<F::E>> {
        let f = &self.field;
        let mut w = v.clone();
        red.reduce_units(&mut w)?;
        Ok(self.reduce_free(w.into_iter().map(|(c, x)| (c, f.from_i128(x)))))
    }

    /// Coordinates of the class of a vector over the field.
    pub fn coordinates_over(&self, red: &RowReduction, v: &BTreeMap<u32, F::E>) -> Vec<F::E> {
        let mut w = v.clone();
        red.reduce_units_over(&self.field, &mut w);
        self.reduce_free(w)
    }

    // finishes a vector supported on free columns with the core echelon form
    fn reduce_free(&self, w: impl IntoIterator<Item = (u32, F::E)>) -> Vec<F::E> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.basis.len()];
        let mut dense = vec![f.zero(); self.core_cols.len()];
        for (c, x) in w {
            match self.core_index.get(&c) {
                Some(&i) => dense[i as usize] = x,
                None => out[self.coordinate[&c] as usize] = x,
            }
        }
        for (row, &pc) in self.core.iter().zip(&self.core_pivots) {
            if f.is_zero(&dense[pc]) {
                continue;
            }
            let k = dense[pc].clone();
            for (x, r) in dense.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&k, r));
                }
            }
        }
        for (i, x) in dense.into_iter().enumerate() {
            if let Some(&j) = self.coordinate.get(&self.core_cols[i]) {
                out[j as usize] = x;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn dense_rows(m: &[Vec<i64>]) -> Vec<SparseRow> {
        m.iter()
            .map(|r| r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c as u32, v as i128)).collect())
            .collect()
    }

    fn big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn triplet_round_trip() {
        let m = SparseIntMatrix::from_triplets(3, 2, vec![(0, 1, BigInt::from(5)), (2, 0, BigInt::from(-3)), (2, 0, BigInt::from(3))]).unwrap();
        assert_eq!(m.nnz(), 1);
        let mut buf = Vec::new();
        m.write_triplets(&mut buf).unwrap();
        let back = SparseIntMatrix::read_triplets(&buf[..]).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn cokernel_of_braid_relations() {
        // Z^3 / <e1 - e2, e2 - e3> = Z
        let red = RowReduction::new(vec![vec![(0, 1), (1, -1)], vec![(1, 1), (2, -1)]], 3).unwrap();
        assert_eq!(red.cokernel().unwrap(), AbelianGroup::new(1, vec![]));
        let torsion = RowReduction::new(vec![vec![(0, 2)], vec![(1, 4), (0, 2)]], 2).unwrap();
        let c = torsion.cokernel().unwrap();
        assert_eq!(c.rank, 0);
        assert_eq!(c.torsion, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn field_coordinates_vanish_on_relations() {
        let m = vec![vec![1, 2, 0, 1], vec![0, 3, 1, 1], vec![2, 4, 0, 2]];
        let red = RowReduction::new(dense_rows(&m), 4).unwrap();
        let f = PrimeField::new(5).unwrap();
        let coker = red.field_cokernel(&f);
        assert_eq!(coker.dim(), 4 - red.rank_over(&f));
        for row in dense_rows(&m) {
            let v = row.into_iter().collect();
            assert!(coker.coordinates(&red, &v).unwrap().iter().all(|x| *x == 0));
        }
    }

    proptest! {
        #[test]
        fn sparse_matches_dense(m in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 7), 1..9)) {
            let red = RowReduction::new(dense_rows(&m), 7).unwrap();
            let want: Vec<BigInt> = snf::invariant_factors(&big(&m), 7).unwrap().into_iter().filter(|d| !d.is_zero()).collect();
            prop_assert_eq!(red.nonzero_factors().unwrap(), want);
            prop_assert_eq!(red.rank_over_q().unwrap(), field::rank_over_q(&big(&m), 7));
            let f2 = PrimeField::new(2).unwrap();
            prop_assert_eq!(red.rank_over(&f2), field::rank(&f2, &field::from_integers(&f2, &big(&m)), 7));
            prop_assert_eq!(red.rank_over(&Rationals), field::rank_over_q(&big(&m), 7));
        }

        #[test]
        fn kernel_is_annihilated(m in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 6), 0..8), p in prop::sample::select(vec![0u64, 2, 3])) {
            let red = RowReduction::new(dense_rows(&m), 6).unwrap();
            fn check<F: Field>(f: &F, red: &RowReduction, m: &[Vec<i64>]) -> std::result::Result<(), TestCaseError> {
                let kernel = red.kernel_over(f);
                prop_assert_eq!(kernel.len(), 6 - red.rank_over(f));
                for z in &kernel {
                    for row in m {
                        let dot = z.iter().fold(f.zero(), |acc, (c, x)| f.add(&acc, &f.mul(x, &f.from_i128(row[*c as usize] as i128))));
                        prop_assert!(f.is_zero(&dot));
                    }
                }
                // independent: each basis vector owns a distinct free column
                let dense: Vec<Vec<F::E>> = kernel.iter().map(|z| (0..6u32).map(|c| z.get(&c).cloned().unwrap_or_else(|| f.zero())).collect()).collect();
                prop_assert_eq!(field::rank(f, &dense, 6), kernel.len());
                Ok(())
            }
            match p {
                0 => check(&Rationals, &red, &m)?,
                p => check(&PrimeField::new(p).unwrap(), &red, &m)?,
            }
        }
    }
}
