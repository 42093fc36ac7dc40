//! The Koszul-like complex `K_*(A)` of the component ring, its homology,
//! and the twist and homotopy identities behind the triviality of the
//! right action on that homology.
//!
//! `K_p` in weight `w` has basis `Q^{p+1} × {components of weight w-p-1}`
//! for `p = -1, ..., w-1`, and
//! `d_p (a_0..a_p) ⊗ x = Σ_j (-1)^j (a_0..â_j..a_p) ⊗ [a_j^{a_{j+1}⋯a_p}]·x`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::InvariantSubset;
use crate::hurwitz::ComponentMonoid;
use crate::linalg::field::{self, Field, PrimeField};
use crate::linalg::{snf, AbelianGroup, RowReduction, SparseIntMatrix, SparseRow};

/// The component ring as a bimodule over itself with the conjugation twist,
/// tabulated up to a weight bound.
pub struct TwistedBimodule<'a> {
    mon: &'a ComponentMonoid,
    max_weight: usize,
    // rmul[n][x * m + a] = x·[a]
    rmul: Vec<Vec<u32>>,
    // twist[n][x * |G| + g] = x^g
    twist: Vec<Vec<u32>>,
}

impl<'a> TwistedBimodule<'a> {
    /// Needs the monoid built through weight `max_weight + 1`.
    pub fn new(mon: &'a ComponentMonoid, max_weight: usize) -> Result<Self> {
        if mon.max_weight() < max_weight + 1 {
            return Err(Error::Internal(format!("components built to weight {} but {} needed", mon.max_weight(), max_weight + 1)));
        }
        let q = mon.subset();
        let (m, order) = (q.len(), q.group().order());
        let mut rmul = Vec::new();
        let mut twist = Vec::new();
        for n in 0..=max_weight + 1 {
            let c = mon.count(n);
            if n <= max_weight {
                rmul.push((0..c).flat_map(|x| (0..m).map(move |a| (x, a))).map(|(x, a)| mon.rmul(n, x, a) as u32).collect());
            }
            twist.push((0..c).flat_map(|x| (0..order).map(move |g| (x, g))).map(|(x, g)| mon.twist(n, x, g) as u32).collect());
        }
        Ok(TwistedBimodule { mon, max_weight, rmul, twist })
    }

    pub fn monoid(&self) -> &ComponentMonoid {
        self.mon
    }

    pub fn subset(&self) -> &InvariantSubset {
        self.mon.subset()
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    #[inline]
    pub fn lmul(&self, n: usize, a: usize, x: usize) -> usize {
        self.mon.lmul(n, a, x)
    }

    #[inline]
    pub fn rmul(&self, n: usize, x: usize, a: usize) -> usize {
        self.rmul[n][x * self.subset().len() + a] as usize
    }

    #[inline]
    pub fn twist(&self, n: usize, x: usize, g: usize) -> usize {
        self.twist[n][x * self.subset().group().order() + g] as usize
    }

    /// Checks, on every basis element up to the weight bound, that the
    /// twist is a right action and that
    /// `([a]·x)^b = [a^b]·x^b`, `(x·[a])^b = x^b·[a^b]` and `x·[a] = [a]·x^a`.
    /// Returns the first violation.
    pub fn check_twist_axioms(&self) -> Option<String> {
        let q = self.subset();
        let g = q.group();
        for n in 0..=self.max_weight {
            for x in 0..self.mon.count(n) {
                for b in 0..g.order() {
                    for h in 0..g.order() {
                        if self.twist(n, self.twist(n, x, b), h) != self.twist(n, x, g.mul(b, h)) {
                            return Some(format!("(x^g)^h != x^(gh) at weight {n}, x={x}, g={b}, h={h}"));
                        }
                    }
                }
                for a in 0..q.len() {
                    let qa = q.element(a);
                    if self.rmul(n, x, a) != self.lmul(n, a, self.twist(n, x, qa)) {
                        return Some(format!("x·[a] != [a]·x^a at weight {n}, x={x}, a={}", q.label(a)));
                    }
                    for b in 0..g.order() {
                        let ab = q.act(a, b);
                        if self.twist(n + 1, self.lmul(n, a, x), b) != self.lmul(n, ab, self.twist(n, x, b)) {
                            return Some(format!("([a]·x)^b != [a^b]·x^b at weight {n}, x={x}, a={}, b={}", q.label(a), g.label(b)));
                        }
                        if self.twist(n + 1, self.rmul(n, x, a), b) != self.rmul(n, self.twist(n, x, b), ab) {
                            return Some(format!("(x·[a])^b != x^b·[a^b] at weight {n}, x={x}, a={}, b={}", q.label(a), g.label(b)));
                        }
                    }
                }
            }
        }
        None
    }

    /// Dimension of `K_p` in weight `w` (`p >= -1`).
    pub fn term_dim(&self, w: usize, p: i64) -> usize {
        if p < -1 || p + 1 > w as i64 {
            return 0;
        }
        let len = (p + 1) as u32;
        self.subset().len().pow(len) * self.mon.count(w - len as usize)
    }

    fn encode(&self, w: usize, t: &[u8], x: usize) -> usize {
        let m = self.subset().len();
        let idx = t.iter().fold(0usize, |acc, &a| acc * m + a as usize);
        idx * self.mon.count(w - t.len()) + x
    }

    fn decode(&self, w: usize, p: i64, e: usize) -> (Vec<u8>, usize) {
        let m = self.subset().len();
        let len = (p + 1) as usize;
        let c = self.mon.count(w - len);
        let (mut idx, x) = (e / c, e % c);
        let mut t = vec![0u8; len];
        for k in (0..len).rev() {
            t[k] = (idx % m) as u8;
            idx /= m;
        }
        (t, x)
    }

    /// `d_p` applied to one basis element of weight `w`.
    pub fn boundary(&self, w: usize, t: &[u8], x: usize) -> Vec<(usize, i64)> {
        let q = self.subset();
        let p = t.len() as i64 - 1;
        if p < 0 {
            return Vec::new();
        }
        let nx = w - t.len();
        let mut out = Vec::with_capacity(t.len());
        let mut rest = Vec::with_capacity(t.len() - 1);
        for j in 0..t.len() {
            let mut c = t[j] as usize;
            for &b in &t[j + 1..] {
                c = q.conj(c, b as usize);
            }
            rest.clear();
            rest.extend_from_slice(&t[..j]);
            rest.extend_from_slice(&t[j + 1..]);
            let y = self.lmul(nx, c, x);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            out.push((self.encode(w, &rest, y), sign));
        }
        out
    }

    /// `H_a`: `(a_0..a_p) ⊗ μ ↦ (-1)^{p+1} (a_0..a_p, a) ⊗ μ^a`, weight `w`
    /// to weight `w + 1`.
    pub fn homotopy(&self, w: usize, a: usize, t: &[u8], x: usize) -> (usize, i64) {
        let q = self.subset();
        let nx = w - t.len();
        let mut s = t.to_vec();
        s.push(a as u8);
        let sign = if t.len() % 2 == 0 { 1 } else { -1 };
        (self.encode(w + 1, &s, self.twist(nx, x, q.element(a))), sign)
    }

    /// `d_p` in weight `w` as a sparse matrix (rows: `K_{p-1}`, columns: `K_p`).
    pub fn boundary_matrix(&self, w: usize, p: i64) -> Result<SparseIntMatrix> {
        let cols = self.term_dim(w, p);
        let rows = self.term_dim(w, p - 1);
        let columns: Vec<SparseRow> = (0..cols)
            .map(|e| {
                let (t, x) = self.decode(w, p, e);
                self.boundary(w, &t, x).into_iter().map(|(i, s)| (i as u32, s as i128)).collect()
            })
            .collect();
        SparseIntMatrix::from_columns(rows, &columns)
    }

    // images of the basis of K_p(w) under d_p, as rows
    fn boundary_rows(&self, w: usize, p: i64) -> Vec<SparseRow> {
        (0..self.term_dim(w, p))
            .map(|e| {
                let (t, x) = self.decode(w, p, e);
                self.boundary(w, &t, x).into_iter().map(|(i, s)| (i as u32, s as i128)).collect()
            })
            .collect()
    }
}

/// One weight of the complex with its boundary matrices `d_0 .. d_top`.
#[derive(Clone, Debug)]
pub struct WeightedChainComplex {
    pub weight: usize,
    /// `dims[p + 1] = dim K_p`.
    pub dims: Vec<usize>,
    /// `boundaries[p] = d_p : K_p -> K_{p-1}`.
    pub boundaries: Vec<SparseIntMatrix>,
}

impl WeightedChainComplex {
    /// Whether `d_{p-1} d_p = 0` for every consecutive pair.
    pub fn check_square_zero(&self) -> Result<Option<usize>> {
        for p in 1..self.boundaries.len() {
            if !self.boundaries[p - 1].mul(&self.boundaries[p])?.is_zero() {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}

/// The complex in weight `w`, all degrees (or up to `top` when given).
pub fn build_complex(bm: &TwistedBimodule, w: usize, top: Option<usize>) -> Result<WeightedChainComplex> {
    let last = w as i64 - 1;
    let last = top.map_or(last, |t| last.min(t as i64));
    let dims = (-1..=last).map(|p| bm.term_dim(w, p)).collect();
    let boundaries = (0..=last).map(|p| bm.boundary_matrix(w, p)).collect::<Result<_>>()?;
    Ok(WeightedChainComplex { weight: w, dims, boundaries })
}

/// Complexes for every weight `0..=max_weight`.
pub fn build_ka(bm: &TwistedBimodule, max_weight: usize) -> Result<Vec<WeightedChainComplex>> {
    (0..=max_weight).map(|w| build_complex(bm, w, None)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Homology {
    Integral(AbelianGroup),
    Dimension(usize),
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        match self {
            Homology::Integral(g) => g.is_trivial(),
            Homology::Dimension(d) => *d == 0,
        }
    }
}

/// `H_p` in weight `w` with coefficients `Z` (`None`), `Q` (`Some(0)`) or
/// `F_p` (`Some(p)`).
pub fn koszul_homology(bm: &TwistedBimodule, w: usize, p: i64, prime: Option<u64>) -> Result<Homology> {
    let dim = bm.term_dim(w, p);
    if dim == 0 {
        return Ok(match prime {
            None => Homology::Integral(AbelianGroup::trivial()),
            Some(_) => Homology::Dimension(0),
        });
    }
    let out = RowReduction::new(bm.boundary_rows(w, p), bm.term_dim(w, p - 1).max(1))?;
    let inc = RowReduction::new(bm.boundary_rows(w, p + 1), dim)?;
    Ok(match prime {
        None => {
            let kernel = dim - out.rank_over_q()?;
            let factors = inc.nonzero_factors()?;
            Homology::Integral(AbelianGroup::new(kernel - factors.len(), factors))
        }
        Some(0) => Homology::Dimension(dim - out.rank_over_q()? - inc.rank_over_q()?),
        Some(p) => {
            let f = PrimeField::new(p)?;
            Homology::Dimension(dim - out.rank_over(&f) - inc.rank_over(&f))
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HomotopyReport {
    pub a: String,
    pub max_weight: usize,
    pub checked: usize,
    pub first_violation: Option<String>,
}

/// Verifies `d H_a + H_a d = (x ↦ x·[a])` on every basis element of `K_p`
/// in every weight up to the bound.
pub fn homotopy_check(bm: &TwistedBimodule, a: usize) -> HomotopyReport {
    let q = bm.subset();
    let mut checked = 0;
    let mut first_violation = None;
    'outer: for w in 0..=bm.max_weight() {
        for p in -1..w as i64 {
            for e in 0..bm.term_dim(w, p) {
                let (t, x) = bm.decode(w, p, e);
                let mut lhs: BTreeMap<usize, i64> = BTreeMap::new();
                // d(H_a e)
                let (he, s) = bm.homotopy(w, a, &t, x);
                let (ht, hx) = bm.decode(w + 1, p + 1, he);
                for (i, c) in bm.boundary(w + 1, &ht, hx) {
                    *lhs.entry(i).or_default() += s * c;
                }
                // H_a(d e)
                for (i, c) in bm.boundary(w, &t, x) {
                    let (dt, dx) = bm.decode(w, p - 1, i);
                    let (j, s2) = bm.homotopy(w, a, &dt, dx);
                    *lhs.entry(j).or_default() += c * s2;
                }
                lhs.retain(|_, v| *v != 0);
                let nx = w - t.len();
                let rhs = BTreeMap::from([(bm.encode(w + 1, &t, bm.rmul(nx, x, a)), 1i64)]);
                checked += 1;
                if lhs != rhs {
                    first_violation = Some(format!("weight {w}, degree {p}, basis element {e}: {lhs:?} != {rhs:?}"));
                    break 'outer;
                }
            }
        }
    }
    HomotopyReport { a: q.label(a).to_string(), max_weight: bm.max_weight(), checked, first_violation }
}

/// Whether `x ↦ x·[a]` induces zero from `H_p` in weight `w` to `H_p` in
/// weight `w + 1` over the given field: every cycle in a kernel basis of
/// `d_p` must map into the image of `d_{p+1}`.
pub fn right_action_vanishes<F: Field>(f: &F, bm: &TwistedBimodule, w: usize, p: i64, a: usize) -> Result<bool> {
    let dim = bm.term_dim(w, p);
    if dim == 0 {
        return Ok(true);
    }
    // the kernel of d_p is the null space of its transpose
    let mut transposed: Vec<SparseRow> = vec![Vec::new(); bm.term_dim(w, p - 1)];
    for (e, row) in bm.boundary_rows(w, p).into_iter().enumerate() {
        for (c, v) in row {
            transposed[c as usize].push((e as u32, v));
        }
    }
    let cycles = RowReduction::new(transposed, dim)?.kernel_over(f);
    let dim1 = bm.term_dim(w + 1, p);
    let boundaries = RowReduction::new(bm.boundary_rows(w + 1, p + 1), dim1)?;
    let quotient = boundaries.field_cokernel(f);
    for z in cycles {
        let mut moved: BTreeMap<u32, F::E> = BTreeMap::new();
        for (e, c) in z {
            let (t, x) = bm.decode(w, p, e as usize);
            let i = bm.encode(w + 1, &t, bm.rmul(w - t.len(), x, a)) as u32;
            let slot = moved.entry(i).or_insert_with(|| f.zero());
            *slot = f.add(slot, &c);
        }
        moved.retain(|_, x| !f.is_zero(x));
        if quotient.coordinates_over(&boundaries, &moved).iter().any(|x| !f.is_zero(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank over `Q` against the number of nonzero invariant factors, and ranks
/// over `F_2`, `F_3` against the factors prime to 2, 3, on a dense matrix.
pub fn rank_cross_check(m: &SparseIntMatrix) -> Result<bool> {
    let dense = m.to_dense();
    let smith = snf::smith_normal_form(&dense, m.cols(), false)?;
    let nonzero = smith.rank();
    if field::rank_over_q(&dense, m.cols()) != nonzero {
        return Ok(false);
    }
    for p in [2u64, 3] {
        let f = PrimeField::new(p)?;
        let want = smith.factors.iter().filter(|d| (*d % BigInt::from(p)) != BigInt::from(0)).count();
        if field::rank(&f, &field::from_integers(&f, &dense), m.cols()) != want {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeScan {
    pub degree: i64,
    /// Homology per weight, `weights[w]`.
    pub homology: Vec<AbelianGroup>,
    /// Largest weight with nonzero homology, if any.
    pub last_nonzero: Option<usize>,
    /// Whether homology vanishes at every weight above `2W/3`.
    pub vanishes_in_top_third: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub max_weight: usize,
    pub scans: Vec<DegreeScan>,
}

impl VanishingReport {
    pub fn conclusive(&self) -> bool {
        self.scans.iter().all(|s| s.vanishes_in_top_third)
    }
}

/// Integral homology of `K_*(A)` in the given degrees for every weight.
pub fn vanishing_scan(bm: &TwistedBimodule, degrees: &[i64]) -> Result<VanishingReport> {
    let top = bm.max_weight();
    let mut scans = Vec::new();
    for &p in degrees {
        let mut homology = Vec::new();
        for w in 0..=top {
            match koszul_homology(bm, w, p, None)? {
                Homology::Integral(g) => homology.push(g),
                Homology::Dimension(_) => unreachable!(),
            }
        }
        let last_nonzero = homology.iter().rposition(|g| !g.is_trivial());
        let vanishes_in_top_third = last_nonzero.map_or(true, |l| 3 * l <= 2 * top);
        scans.push(DegreeScan { degree: p, homology, last_nonzero, vanishes_in_top_third });
    }
    Ok(VanishingReport { max_weight: top, scans })
}
