//! Generation degrees and stabilization of `H_0` and `H_1` of Hurwitz
//! spaces, assembled blockwise from per-component induced maps.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::is_large;
use crate::hurwitz::ComponentMonoid;
use crate::linalg::{Coefficients, Field, FieldCokernel, PrimeField, Rationals};
use crate::presentation::{lst_induced_h1, Caps, ComponentH1, H1Map};

/// `H_1` of components, computed on demand and kept by (weight, orbit id).
pub struct H1Atlas<'m> {
    mon: &'m ComponentMonoid,
    caps: Caps,
    cache: BTreeMap<(usize, usize), ComponentH1>,
}

impl<'m> H1Atlas<'m> {
    pub fn new(mon: &'m ComponentMonoid, caps: Caps) -> Self {
        H1Atlas { mon, caps, cache: BTreeMap::new() }
    }

    pub fn monoid(&self) -> &ComponentMonoid {
        self.mon
    }

    /// Computes every missing component among `ids` at weight `n`.
    pub fn prepare(&mut self, n: usize, ids: &[usize]) -> Result<()> {
        if n > self.mon.max_weight() {
            return Err(Error::InvalidInput(format!("weight {n} is beyond the built monoid ({})", self.mon.max_weight())));
        }
        let missing: Vec<usize> = ids.iter().copied().filter(|&x| !self.cache.contains_key(&(n, x))).collect();
        let (mon, caps) = (self.mon, self.caps);
        let built: Vec<(usize, ComponentH1)> = missing
            .par_iter()
            .map(|&x| Ok((x, ComponentH1::new(mon.subset(), mon.canonical(n, x), caps)?)))
            .collect::<Result<_>>()?;
        for (x, c) in built {
            log::debug!("H1 weight {n} orbit {x}: {} cosets", c.graph().size());
            self.cache.insert((n, x), c);
        }
        Ok(())
    }

    pub fn get(&self, n: usize, x: usize) -> Result<&ComponentH1> {
        self.cache.get(&(n, x)).ok_or_else(|| Error::Internal(format!("component ({n}, {x}) was not prepared")))
    }
}

// field bases of H_1 for prepared components
struct FieldBases<F: Field> {
    f: F,
    bases: BTreeMap<(usize, usize), FieldCokernel<F>>,
}

impl<F: Field> FieldBases<F> {
    fn new(f: F) -> Self {
        FieldBases { f, bases: BTreeMap::new() }
    }

    fn ensure(&mut self, atlas: &H1Atlas, n: usize, x: usize) -> Result<()> {
        if !self.bases.contains_key(&(n, x)) {
            let b = atlas.get(n, x)?.over(&self.f);
            self.bases.insert((n, x), b);
        }
        Ok(())
    }

    fn dim(&self, n: usize, x: usize) -> usize {
        self.bases[&(n, x)].dim()
    }

    // lst(a)^e_* from one prepared component to its target
    fn lst_block(&self, atlas: &H1Atlas, a: usize, e: usize, n: usize, x: usize, y: usize) -> Result<H1Map<F::E>> {
        let src = (atlas.get(n, x)?, &self.bases[&(n, x)]);
        let tgt = (atlas.get(n + e, y)?, &self.bases[&(n + e, y)]);
        lst_induced_h1(&self.f, a, e, src, tgt)
    }
}

/// `[a]^e · x` in the component monoid.
pub fn power_target(mon: &ComponentMonoid, a: usize, e: usize, n: usize, x: usize) -> usize {
    (0..e).fold(x, |y, k| mon.lmul(n + k, a, y))
}

fn ids_with_monodromy(mon: &ComponentMonoid, n: usize, omega: Option<usize>) -> Vec<usize> {
    (0..mon.count(n)).filter(|&x| omega.map_or(true, |w| mon.monodromy(n, x) == w)).collect()
}

/// Smallest `n0` such that `flag(n)` holds for every listed `n ≥ n0`, or
/// `None` when it fails at the last one.
fn threshold(flags: &[(usize, bool)]) -> Option<usize> {
    let mut from = None;
    for &(n, ok) in flags.iter().rev() {
        if !ok {
            break;
        }
        from = Some(n);
    }
    from
}

fn field_tag(c: Coefficients) -> Result<()> {
    match c {
        Coefficients::Integers => Err(Error::InvalidInput("a field is required here (q or f<p>)".into())),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GenerationStep {
    /// Source weight; the target is `n + 1`.
    pub n: usize,
    pub target_dim: usize,
    pub image_rank: usize,
    pub surjective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub degree: usize,
    pub field: String,
    pub omega: Option<String>,
    pub steps: Vec<GenerationStep>,
    /// Smallest weight from which every step in the window is surjective.
    pub generated_from: Option<usize>,
}

/// Surjectivity of `⊕_{a∈Q} H_i(weight n) → H_i(weight n+1)` for
/// `n + 1 ≤ max_weight`, targets optionally restricted to total
/// monodromy `omega`.
pub fn generation_degree(
    mon: &mut ComponentMonoid,
    degree: usize,
    omega: Option<usize>,
    field: Coefficients,
    max_weight: usize,
    caps: Caps,
) -> Result<GenerationReport> {
    field_tag(field)?;
    if degree > 1 {
        return Err(Error::InvalidInput(format!("homological degree {degree} is not supported (0 or 1)")));
    }
    mon.extend_to(max_weight + 1)?;
    let steps = match field {
        Coefficients::Prime(p) => generation_steps(PrimeField::new(p)?, mon, degree, omega, max_weight, caps)?,
        _ => generation_steps(Rationals, mon, degree, omega, max_weight, caps)?,
    };
    let flags: Vec<(usize, bool)> = steps.iter().map(|s| (s.n, s.surjective)).collect();
    let q = mon.subset();
    Ok(GenerationReport {
        degree,
        field: field.tag(),
        omega: omega.map(|w| q.group().label(w).to_string()),
        steps,
        generated_from: threshold(&flags),
    })
}

fn generation_steps<F: Field>(
    f: F,
    mon: &ComponentMonoid,
    degree: usize,
    omega: Option<usize>,
    max_weight: usize,
    caps: Caps,
) -> Result<Vec<GenerationStep>> {
    let m = mon.subset().len();
    let mut atlas = H1Atlas::new(mon, caps);
    let mut bases = FieldBases::new(f.clone());
    let mut steps = Vec::new();
    for n in 0..max_weight {
        let targets = ids_with_monodromy(mon, n + 1, omega);
        let mut preimages: BTreeMap<usize, Vec<(usize, usize)>> = targets.iter().map(|&y| (y, Vec::new())).collect();
        for x in 0..mon.count(n) {
            for a in 0..m {
                if let Some(v) = preimages.get_mut(&mon.lmul(n, a, x)) {
                    v.push((a, x));
                }
            }
        }
        let (mut target_dim, mut image_rank) = (0, 0);
        if degree == 0 {
            target_dim = targets.len();
            image_rank = preimages.values().filter(|v| !v.is_empty()).count();
        } else {
            let mut sources: Vec<usize> = preimages.values().flatten().map(|&(_, x)| x).collect();
            sources.sort_unstable();
            sources.dedup();
            atlas.prepare(n, &sources)?;
            atlas.prepare(n + 1, &targets)?;
            for &x in &sources {
                bases.ensure(&atlas, n, x)?;
            }
            for (&y, pre) in &preimages {
                bases.ensure(&atlas, n + 1, y)?;
                let dim = bases.dim(n + 1, y);
                target_dim += dim;
                // images of all source blocks, as rows
                let mut rows: Vec<Vec<F::E>> = Vec::new();
                for &(a, x) in pre {
                    let block = bases.lst_block(&atlas, a, 1, n, x, y)?;
                    for j in 0..block.cols {
                        rows.push((0..dim).map(|i| block.matrix[i][j].clone()).collect());
                    }
                }
                image_rank += crate::linalg::field::rank(&f, &rows, dim);
            }
        }
        log::info!("generation degree {degree}, {} -> {}: rank {image_rank} of {target_dim}", n, n + 1);
        steps.push(GenerationStep { n, target_dim, image_rank, surjective: image_rank == target_dim });
    }
    Ok(steps)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StabilityEntry {
    pub degree: usize,
    pub field: String,
    pub n: usize,
    pub a: String,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub iso: bool,
    /// Equal to the matrix for the first member of `Q`.
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Thresholds {
    pub degree: usize,
    pub field: String,
    pub iso_from: Option<usize>,
    pub agree_from: Option<usize>,
    /// Smallest weight from which `dim H_i(n) = dim H_i(n + ℓ)` throughout.
    pub periodic_from: Option<usize>,
    /// `(weight, dim)` over the whole computed range.
    pub betti: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub omega: String,
    pub ell: usize,
    pub sources: (usize, usize),
    pub entries: Vec<StabilityEntry>,
    pub thresholds: Vec<Thresholds>,
}

impl StabilityReport {
    /// Every threshold was found inside the window.
    pub fn conclusive(&self) -> bool {
        self.thresholds.iter().all(|t| t.iso_from.is_some() && t.agree_from.is_some() && t.periodic_from.is_some())
    }
}

/// Checks that `lst(a)^ℓ_*: H_i(Hur_n(Q)_ω) → H_i(Hur_{n+ℓ}(Q)_ω)` is an
/// isomorphism independent of `a`, for `i ∈ {0, 1}` and source weights in
/// `sources`.
pub fn stability_report(
    mon: &mut ComponentMonoid,
    omega: usize,
    fields: &[Coefficients],
    sources: RangeInclusive<usize>,
    caps: Caps,
) -> Result<StabilityReport> {
    for &c in fields {
        field_tag(c)?;
    }
    let q = mon.subset().clone();
    if !q.is_single_class() {
        return Err(Error::Hypothesis("Q must be a single conjugacy class".into()));
    }
    if !is_large(&q, omega)? {
        return Err(Error::Hypothesis(format!("{} is not a large element for Q", q.group().label(omega))));
    }
    let ell = q.ell();
    let (lo, hi) = (*sources.start(), *sources.end());
    if lo > hi {
        return Err(Error::InvalidInput(format!("empty source range {lo}:{hi}")));
    }
    mon.extend_to(hi + ell)?;
    let mon: &ComponentMonoid = mon;
    let mut atlas = H1Atlas::new(mon, caps);
    for n in lo..=hi + ell {
        atlas.prepare(n, &ids_with_monodromy(mon, n, Some(omega)))?;
    }
    let mut entries = Vec::new();
    let mut thresholds = Vec::new();
    for &c in fields {
        let (e, t) = match c {
            Coefficients::Prime(p) => stability_for(PrimeField::new(p)?, &atlas, omega, lo, hi)?,
            _ => stability_for(Rationals, &atlas, omega, lo, hi)?,
        };
        entries.extend(e);
        thresholds.extend(t);
    }
    Ok(StabilityReport { omega: q.group().label(omega).to_string(), ell, sources: (lo, hi), entries, thresholds })
}

fn stability_for<F: Field>(
    f: F,
    atlas: &H1Atlas,
    omega: usize,
    lo: usize,
    hi: usize,
) -> Result<(Vec<StabilityEntry>, Vec<Thresholds>)> {
    let mon = atlas.monoid();
    let q = mon.subset();
    let ell = q.ell();
    let mut bases = FieldBases::new(f.clone());
    let levels: BTreeMap<usize, Vec<usize>> = (lo..=hi + ell).map(|n| (n, ids_with_monodromy(mon, n, Some(omega)))).collect();
    for (&n, ids) in &levels {
        for &x in ids {
            bases.ensure(atlas, n, x)?;
        }
    }
    let mut entries = Vec::new();
    let mut thresholds = Vec::new();
    for degree in 0..=1 {
        let dim_of = |n: usize, x: usize| if degree == 0 { 1 } else { bases.dim(n, x) };
        // block offsets of each component in the level basis
        let offsets = |n: usize| -> (BTreeMap<usize, usize>, usize) {
            let mut at = BTreeMap::new();
            let mut total = 0;
            for &x in &levels[&n] {
                at.insert(x, total);
                total += dim_of(n, x);
            }
            (at, total)
        };
        let mut iso_flags = Vec::new();
        let mut agree_flags = Vec::new();
        for n in lo..=hi {
            let (src_at, src_dim) = offsets(n);
            let (tgt_at, tgt_dim) = offsets(n + ell);
            let mut first: Option<H1Map<F::E>> = None;
            let (mut all_iso, mut all_agree) = (true, true);
            for a in 0..q.len() {
                let mut map = H1Map::zero(&f, tgt_dim, src_dim);
                for &x in &levels[&n] {
                    let y = power_target(mon, a, ell, n, x);
                    let Some(&r0) = tgt_at.get(&y) else {
                        return Err(Error::Internal(format!("lst target of orbit {x} has the wrong monodromy")));
                    };
                    if degree == 0 {
                        map.matrix[r0][src_at[&x]] = f.one();
                    } else {
                        map.place(r0, src_at[&x], &bases.lst_block(atlas, a, ell, n, x, y)?);
                    }
                }
                let rank = map.rank(&f);
                let iso = map.is_iso(&f);
                let agrees = first.as_ref().map_or(true, |m| *m == map);
                if first.is_none() {
                    first = Some(map);
                }
                all_iso &= iso;
                all_agree &= agrees;
                entries.push(StabilityEntry {
                    degree,
                    field: f.tag(),
                    n,
                    a: q.label(a).to_string(),
                    source_dim: src_dim,
                    target_dim: tgt_dim,
                    rank,
                    iso,
                    agrees,
                });
            }
            iso_flags.push((n, all_iso));
            agree_flags.push((n, all_agree));
        }
        let betti: Vec<(usize, usize)> = (lo..=hi + ell).map(|n| (n, offsets(n).1)).collect();
        let periodic: Vec<(usize, bool)> = (lo..=hi).map(|n| (n, betti[n - lo].1 == betti[n + ell - lo].1)).collect();
        thresholds.push(Thresholds {
            degree,
            field: f.tag(),
            iso_from: threshold(&iso_flags),
            agree_from: threshold(&agree_flags),
            periodic_from: threshold(&periodic),
            betti,
        });
    }
    Ok((entries, thresholds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, GroupFile, InvariantSubset};
    use std::sync::Arc;

    fn load(name: &str, q: &str) -> (GroupFile, ComponentMonoid) {
        let file = GroupFile::bundled(name).unwrap();
        let g = file.load().unwrap();
        let q = file.select_q(&g, q).unwrap();
        (file, ComponentMonoid::new(q))
    }

    #[test]
    fn thresholds_from_flags() {
        assert_eq!(threshold(&[(2, false), (3, true), (4, true)]), Some(3));
        assert_eq!(threshold(&[(2, true), (3, false)]), None);
        assert_eq!(threshold(&[(2, true), (3, true)]), Some(2));
    }

    #[test]
    fn degree_zero_always_generated() {
        let (_, mut mon) = load("s3", "transpositions");
        let r = generation_degree(&mut mon, 0, None, Coefficients::Rationals, 6, Caps::default()).unwrap();
        assert!(r.steps.iter().all(|s| s.surjective));
        assert_eq!(r.generated_from, Some(0));
    }

    #[test]
    fn degenerate_group_generation() {
        let q = InvariantSubset::new(Arc::new(FiniteGroup::cyclic(2).unwrap()), &[1]).unwrap();
        let mut mon = ComponentMonoid::new(q);
        let r = generation_degree(&mut mon, 1, None, Coefficients::Prime(2), 6, Caps::default()).unwrap();
        assert_eq!(r.generated_from, Some(2));
        assert!(!r.steps[1].surjective);
    }

    #[test]
    fn stability_needs_a_large_element() {
        let (file, mut mon) = load("s4", "transpositions");
        let g = file.load().unwrap();
        let w = file.select_element(&g, "long_cycle").unwrap();
        let err = stability_report(&mut mon, w, &[Coefficients::Rationals], 2..=3, Caps::default()).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn s3_degree_zero_is_stable() {
        let (file, mut mon) = load("s3", "transpositions");
        let g = file.load().unwrap();
        let w = file.select_element(&g, "(123)").unwrap();
        let r = stability_report(&mut mon, w, &[Coefficients::Rationals], 2..=5, Caps::default()).unwrap();
        let t0 = r.thresholds.iter().find(|t| t.degree == 0).unwrap();
        assert_eq!(t0.iso_from, Some(2));
        assert_eq!(t0.agree_from, Some(2));
    }
}
