//! Dense Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest side accepted by the dense routines.
pub const DENSE_CAP: usize = 2000;

#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal entries `d_1 | d_2 | ...`, `min(rows, cols)` of them,
    /// nonnegative, zeros last.
    pub factors: Vec<BigInt>,
    /// `U` and `V` with `U·M·V = diag(factors)`, when requested.
    pub transforms: Option<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| **d > BigInt::one()).cloned().collect()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect()).collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

// row_i -= q·row_t
fn row_axpy(m: &mut [Vec<BigInt>], i: usize, t: usize, q: &BigInt) {
    let (src, dst) = if i < t {
        let (lo, hi) = m.split_at_mut(t);
        (&hi[0], &mut lo[i])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&lo[t], &mut hi[0])
    };
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

// col_j -= q·col_t
fn col_axpy(m: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[t].is_zero() {
            let v = q * &row[t];
            row[j] -= v;
        }
    }
}

/// Smith normal form of a dense `rows × cols` matrix. Pivots are chosen as
/// the smallest nonzero magnitude in the remaining block, ties broken by
/// (row, column).
pub fn smith_normal_form(m: &[Vec<BigInt>], cols: usize, with_transforms: bool) -> Result<Smith> {
    let rows = m.len();
    if rows > DENSE_CAP || cols > DENSE_CAP {
        return Err(Error::infeasible("dense matrix side", rows.max(cols), DENSE_CAP));
    }
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("ragged matrix".into()));
    }
    let mut a = m.to_vec();
    let mut u = if with_transforms { identity(rows) } else { Vec::new() };
    let mut v = if with_transforms { identity(cols) } else { Vec::new() };
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        if with_transforms {
            u.swap(t, pi);
            swap_cols(&mut v, t, pj);
        }
        loop {
            // clear column t and row t by division with remainder
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_axpy(&mut a, i, t, &q);
                    if with_transforms {
                        row_axpy(&mut u, i, t, &q);
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(&mut a, j, t, &q);
                    if with_transforms {
                        col_axpy(&mut v, j, t, &q);
                    }
                }
            }
            // a smaller remainder becomes the new pivot
            let mut small: Option<(usize, usize)> = None;
            for i in t + 1..rows {
                if !a[i][t].is_zero() && small.map_or(true, |(si, sj)| a[i][t].abs() < a[si][sj].abs()) {
                    small = Some((i, t));
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() && small.map_or(true, |(si, sj)| a[t][j].abs() < a[si][sj].abs()) {
                    small = Some((t, j));
                }
            }
            if let Some((si, sj)) = small {
                if si != t {
                    a.swap(t, si);
                    if with_transforms {
                        u.swap(t, si);
                    }
                } else {
                    swap_cols(&mut a, t, sj);
                    if with_transforms {
                        swap_cols(&mut v, t, sj);
                    }
                }
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    if with_transforms {
                        row_axpy(&mut u, t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if with_transforms {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        t += 1;
    }
    let factors = (0..n).map(|i| a[i][i].clone()).collect();
    let transforms = with_transforms.then_some((u, v));
    Ok(Smith { factors, transforms })
}

/// Echelon basis of the lattice spanned by `rows`, built one row at a time
/// with gcd steps. Each basis row has a positive leading entry, leading
/// columns increase, and entries to the right of a pivot are reduced modulo
/// the later pivots.
pub fn lattice_basis(rows: impl IntoIterator<Item = Vec<BigInt>>, width: usize) -> Vec<Vec<BigInt>> {
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; width];
    for mut v in rows {
        let mut c = 0;
        while c < width {
            if v[c].is_zero() {
                c += 1;
                continue;
            }
            match basis[c].take() {
                None => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    basis[c] = Some(v);
                    size_reduce(&mut basis, c);
                    break;
                }
                Some(b) => {
                    let e = b[c].extended_gcd(&v[c]);
                    let (bp, vp) = (&b[c] / &e.gcd, &v[c] / &e.gcd);
                    let mut nb: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let nv: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &bp * y - &vp * x).collect();
                    if nb[c].is_negative() {
                        nb.iter_mut().for_each(|x| *x = -&*x);
                    }
                    basis[c] = Some(nb);
                    size_reduce(&mut basis, c);
                    v = nv;
                    c += 1;
                }
            }
        }
    }
    basis.into_iter().flatten().collect()
}

// reduce row c to the right of its pivot, and the rows above on column c
fn size_reduce(basis: &mut [Option<Vec<BigInt>>], c: usize) {
    let width = basis.len();
    for c2 in c + 1..width {
        let Some(p) = basis[c2].as_ref() else { continue };
        let row = basis[c].as_ref().expect("present");
        if row[c2].is_zero() {
            continue;
        }
        let q = row[c2].div_floor(&p[c2]);
        let p = p.clone();
        let row = basis[c].as_mut().expect("present");
        for (x, y) in row.iter_mut().zip(&p).skip(c2) {
            *x -= &q * y;
        }
    }
    let pivot = basis[c].as_ref().expect("present").clone();
    for c0 in 0..c {
        let Some(row) = basis[c0].as_mut() else { continue };
        if row[c].is_zero() {
            continue;
        }
        let q = row[c].div_floor(&pivot[c]);
        for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
            *x -= &q * y;
        }
    }
}

/// Invariant factors of a dense matrix.
pub fn invariant_factors(m: &[Vec<BigInt>], cols: usize) -> Result<Vec<BigInt>> {
    Ok(smith_normal_form(m, cols, false)?.factors)
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

/// Checks `U·M·V = diag(factors)` and `det U, det V = ±1`.
pub fn verify_transforms(m: &[Vec<BigInt>], cols: usize, s: &Smith) -> bool {
    let Some((u, v)) = &s.transforms else { return false };
    let rows = m.len();
    let unit = |d: BigInt| d.abs().is_one();
    if !unit(determinant(u)) || !unit(determinant(v)) {
        return false;
    }
    let um: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| (0..rows).map(|k| &u[i][k] * &m[k][j]).sum()).collect())
        .collect();
    for i in 0..rows {
        for j in 0..cols {
            let x: BigInt = (0..cols).map(|k| &um[i][k] * &v[k][j]).sum();
            let want = if i == j { s.factors[i].clone() } else { BigInt::zero() };
            if x != want {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    // gcd of all k×k minors, the k-th determinantal divisor
    fn determinantal_divisor(m: &[Vec<BigInt>], k: usize) -> BigInt {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let cols = m[0].len();
        let mut g = BigInt::zero();
        for rs in subsets(m.len(), k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                g = g.gcd(&determinant(&minor));
            }
        }
        g
    }

    fn oracle_factors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
        let n = m.len().min(m[0].len());
        let mut out = Vec::new();
        let mut prev = BigInt::one();
        for k in 1..=n {
            let d = determinantal_divisor(m, k);
            if d.is_zero() {
                out.push(BigInt::zero());
                prev = BigInt::zero();
            } else {
                out.push(&d / &prev);
                prev = d;
            }
        }
        out
    }

    #[test]
    fn diagonal_two_three() {
        let m = big(&[&[2, 0], &[0, 3]]);
        assert_eq!(invariant_factors(&m, 2).unwrap(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let m = big(&[&[0, 0, 0], &[0, 0, 0]]);
        assert!(invariant_factors(&m, 3).unwrap().iter().all(|d| d.is_zero()));
    }

    #[test]
    fn transforms_are_unimodular() {
        let m = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&m, 3, true).unwrap();
        assert_eq!(s.factors, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        assert!(verify_transforms(&m, 3, &s));
    }

    #[test]
    fn random_against_determinantal_divisors() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        for _ in 0..200 {
            let m: Vec<Vec<BigInt>> =
                (0..6).map(|_| (0..6).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect()).collect();
            let s = smith_normal_form(&m, 6, true).unwrap();
            assert_eq!(s.factors, oracle_factors(&m));
            assert!(verify_transforms(&m, 6, &s));
        }
    }

    #[test]
    fn lattice_basis_keeps_factors() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let rows = rng.gen_range(1..12);
            let m: Vec<Vec<BigInt>> =
                (0..rows).map(|_| (0..4).map(|_| BigInt::from(rng.gen_range(-6..=6))).collect()).collect();
            let b = lattice_basis(m.clone(), 4);
            let nz = |f: Vec<BigInt>| f.into_iter().filter(|d| !d.is_zero()).collect::<Vec<_>>();
            let want = nz(invariant_factors(&m, 4).unwrap());
            let got = if b.is_empty() { vec![] } else { nz(invariant_factors(&b, 4).unwrap()) };
            assert_eq!(got, want);
        }
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&big(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]])), BigInt::from(4));
    }
}
