//! The constants `k(G,Q)`, `k(G,Q,ω)` and the large-element test.

use std::collections::{HashSet, VecDeque};

use super::{InvariantSubset, Subgroup};
use crate::error::{Error, Result};

/// Largest `|Q|` accepted by [`k_invariant`].
pub const MAX_Q_FOR_K: usize = 20;

#[derive(Clone, Debug)]
pub struct KInvariant {
    pub value: usize,
    /// A subgroup attaining the maximum.
    pub witness: Subgroup,
    /// The classes of `Q ∩ witness` under conjugation by the witness.
    pub classes: Vec<Vec<usize>>,
    pub subgroups_examined: usize,
}

/// Maximum over subgroups `H` (containing `ω` when given) of the number of
/// `H`-conjugacy classes in `Q ∩ H`.
///
/// Only subgroups generated by a subset of `Q` (together with `ω`) are
/// visited: replacing `H` by `⟨Q ∩ H, ω⟩` keeps `Q ∩ H` and can only split
/// classes, so the maximum is attained among them.
pub fn k_invariant(q: &InvariantSubset, omega: Option<usize>) -> Result<KInvariant> {
    let g = q.group();
    if q.len() > MAX_Q_FOR_K {
        return Err(Error::infeasible("|Q| for subgroup enumeration", q.len(), MAX_Q_FOR_K));
    }
    if let Some(w) = omega {
        if w >= g.order() {
            return Err(Error::InvalidInput(format!("element index {w} out of range")));
        }
    }
    let base: Vec<usize> = omega.into_iter().collect();
    let start = g.closure(&base);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(start.members().to_vec());
    let mut queue = VecDeque::from([start]);
    let mut best: Option<(usize, Subgroup, Vec<Vec<usize>>)> = None;
    let mut examined = 0;
    while let Some(h) = queue.pop_front() {
        examined += 1;
        let classes = g.classes_within(&h, q.members());
        let count = classes.len();
        if best.as_ref().map_or(true, |(b, _, _)| count > *b) {
            best = Some((count, h.clone(), classes));
        }
        for &x in q.members() {
            if h.contains(x) {
                continue;
            }
            let mut gens: Vec<usize> = h.members().to_vec();
            gens.push(x);
            let bigger = g.closure(&gens);
            if seen.insert(bigger.members().to_vec()) {
                queue.push_back(bigger);
            }
        }
    }
    let (value, witness, classes) = best.expect("at least one subgroup visited");
    Ok(KInvariant { value, witness, classes, subgroups_examined: examined })
}

/// True when `⟨ω, a⟩ = G` for every `a ∈ Q`. `Q` must be a single class.
pub fn is_large(q: &InvariantSubset, omega: usize) -> Result<bool> {
    let g = q.group();
    if omega >= g.order() {
        return Err(Error::InvalidInput(format!("element index {omega} out of range")));
    }
    if !q.is_single_class() {
        return Err(Error::Hypothesis("Q is not a single conjugacy class".into()));
    }
    Ok(q.members().iter().all(|&a| g.closure(&[omega, a]).order() == g.order()))
}
