//! Coefficient fields and dense elimination over them.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Field: Clone + Send + Sync + Debug {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, x: &Self::E) -> bool;
    fn add(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn sub(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn mul(&self, x: &Self::E, y: &Self::E) -> Self::E;
    fn neg(&self, x: &Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv(&self, x: &Self::E) -> Self::E;
    fn from_i128(&self, x: i128) -> Self::E;
    fn from_bigint(&self, x: &BigInt) -> Self::E;
    fn format(&self, x: &Self::E) -> String;
    /// Short tag: `q` or `f<p>`.
    fn tag(&self) -> String;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }
    fn sub(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x - y
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
    fn inv(&self, x: &BigRational) -> BigRational {
        x.recip()
    }
    fn from_i128(&self, x: i128) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }
    fn from_bigint(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }
    fn format(&self, x: &BigRational) -> String {
        x.to_string()
    }
    fn tag(&self) -> String {
        "q".into()
    }
}

/// Integers modulo a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || p > (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a prime below 2^31")));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl Field for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        (x + y) % self.p
    }
    fn sub(&self, x: &u64, y: &u64) -> u64 {
        (x + self.p - y) % self.p
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        (x * y) % self.p
    }
    fn neg(&self, x: &u64) -> u64 {
        (self.p - x) % self.p
    }
    fn inv(&self, x: &u64) -> u64 {
        let e = BigInt::from(*x).extended_gcd(&BigInt::from(self.p));
        e.x.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced")
    }
    fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.p as i128) as u64
    }
    fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced")
    }
    fn format(&self, x: &u64) -> String {
        x.to_string()
    }
    fn tag(&self) -> String {
        format!("f{}", self.p)
    }
}

pub type Dense<E> = Vec<Vec<E>>;

/// Reduced row echelon form in place, pivoting on the first nonzero entry
/// of the leftmost available column. Returns the pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Dense<F::E>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(i) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else { continue };
        m.swap(r, i);
        let inv = f.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let k = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !f.is_zero(p) {
                    *x = f.sub(x, &f.mul(&k, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Dense<F::E>, cols: usize) -> usize {
    let mut a = m.clone();
    rref(f, &mut a, cols).len()
}

/// Basis of `{x : m x = 0}`, one vector per non-pivot column.
pub fn kernel<F: Field>(f: &F, m: &Dense<F::E>, cols: usize) -> Vec<Vec<F::E>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a, cols);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![f.zero(); cols];
            v[free] = f.one();
            for (row, &pc) in a.iter().zip(&pivots) {
                v[pc] = f.neg(&row[free]);
            }
            v
        })
        .collect()
}

/// Whether every vector of `vs` lies in the span of the rows of `m`.
pub fn in_row_span<F: Field>(f: &F, m: &Dense<F::E>, vs: &Dense<F::E>, cols: usize) -> bool {
    let base = rank(f, m, cols);
    let mut all = m.clone();
    all.extend(vs.iter().cloned());
    rank(f, &all, cols) == base
}

/// Matrix product of dense matrices.
pub fn matmul<F: Field>(f: &F, a: &Dense<F::E>, b: &Dense<F::E>, inner: usize, cols: usize) -> Dense<F::E> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(f.zero(), |acc, k| {
                        if f.is_zero(&row[k]) {
                            acc
                        } else {
                            f.add(&acc, &f.mul(&row[k], &b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Converts an integer matrix into the field.
pub fn from_integers<F: Field>(f: &F, m: &[Vec<BigInt>]) -> Dense<F::E> {
    m.iter().map(|row| row.iter().map(|x| f.from_bigint(x)).collect()).collect()
}

/// Coefficient rings accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficients {
    Integers,
    Rationals,
    Prime(u64),
}

impl Coefficients {
    pub fn parse(tag: &str) -> Result<Self> {
        let t = tag.trim().to_ascii_lowercase();
        match t.as_str() {
            "z" | "int" | "integers" => Ok(Coefficients::Integers),
            "q" | "rat" | "rationals" => Ok(Coefficients::Rationals),
            _ => {
                let p = t
                    .strip_prefix('f')
                    .or_else(|| t.strip_prefix('p'))
                    .and_then(|s| s.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("unknown coefficient tag {tag:?}")))?;
                PrimeField::new(p)?;
                Ok(Coefficients::Prime(p))
            }
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Coefficients::Integers => "z".into(),
            Coefficients::Rationals => "q".into(),
            Coefficients::Prime(p) => format!("f{p}"),
        }
    }
}

/// Exact integer rank via fraction-free elimination.
pub fn rank_over_q(m: &[Vec<BigInt>], cols: usize) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(i) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, i);
        for i in r + 1..a.len() {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_full_rank() {
        let f = Rationals;
        let m: Dense<BigRational> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        assert_eq!(rank(&f, &m, 4), 4);
        assert!(kernel(&f, &m, 4).is_empty());
    }

    #[test]
    fn all_ones_mod_two() {
        let f = PrimeField::new(2).unwrap();
        let m = vec![vec![1u64; 3]; 3];
        assert_eq!(rank(&f, &m, 3), 1);
        assert_eq!(kernel(&f, &m, 3).len(), 2);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = PrimeField::new(7).unwrap();
        let m = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 1], vec![3, 6, 2, 5]];
        for v in kernel(&f, &m, 4) {
            for row in &m {
                let s = row.iter().zip(&v).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn inverses_mod_p() {
        let f = PrimeField::new(101).unwrap();
        for x in 1..101 {
            assert_eq!(f.mul(&x, &f.inv(&x)), 1);
        }
        assert!(PrimeField::new(91).is_err());
    }

    #[test]
    fn fraction_free_rank() {
        let m: Vec<Vec<BigInt>> =
            vec![vec![2, 4, 6], vec![1, 2, 3], vec![0, 1, 1]].into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        assert_eq!(rank_over_q(&m, 3), 2);
    }

    #[test]
    fn coefficient_tags() {
        assert_eq!(Coefficients::parse("q").unwrap(), Coefficients::Rationals);
        assert_eq!(Coefficients::parse("f3").unwrap(), Coefficients::Prime(3));
        assert!(Coefficients::parse("f4").is_err());
    }
}
