//! Exact linear algebra over the integers, the rationals and prime fields.

pub mod field;
pub mod snf;
pub mod sparse;

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

pub use field::{Coefficients, Field, PrimeField, Rationals};
pub use snf::{smith_normal_form, Smith};
pub use sparse::{FieldCokernel, RowReduction, SparseIntMatrix, SparseRow};

/// A finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` with
/// `t_1 | t_2 | ... | t_k`, all `t_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroup {
    pub rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl AbelianGroup {
    /// From nonzero invariant factors; ones are dropped.
    pub fn new(rank: usize, factors: Vec<BigInt>) -> Self {
        let torsion = factors.into_iter().filter(|d| !d.is_one()).collect();
        AbelianGroup { rank, torsion }
    }

    pub fn trivial() -> Self {
        AbelianGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Dimension after tensoring with `F_p` (or `Q` when `p = 0`).
    pub fn dim_over(&self, p: u64) -> usize {
        if p == 0 {
            return self.rank;
        }
        let p = BigInt::from(p);
        self.rank + self.torsion.iter().filter(|t| (*t % &p) == BigInt::from(0)).count()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_dims() {
        let g = AbelianGroup::new(2, vec![BigInt::from(1), BigInt::from(2), BigInt::from(6)]);
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/6");
        assert_eq!(g.dim_over(0), 2);
        assert_eq!(g.dim_over(2), 4);
        assert_eq!(g.dim_over(3), 3);
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
    }
}
