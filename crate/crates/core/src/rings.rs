//! Dimension series of the graded component rings and quasi-polynomial
//! fits of their tails.

use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::k_invariant;
use crate::hurwitz::{classes_from_unions, ComponentMonoid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RingTag {
    A,
    A1,
    B,
    Bomega,
    C,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RingTag::A => "A",
            RingTag::A1 => "A1",
            RingTag::B => "B",
            RingTag::Bomega => "Bomega",
            RingTag::C => "C",
        };
        f.write_str(s)
    }
}

/// `dims[w]` for every weight `0..=max_weight`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedDimSeries {
    pub tag: RingTag,
    pub dims: Vec<u128>,
    pub period: usize,
}

impl GradedDimSeries {
    pub fn max_weight(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["ring_tag", "weight", "dim"])?;
        for (n, d) in self.dims.iter().enumerate() {
            w.write_record([self.tag.to_string(), n.to_string(), d.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Number of components per weight, optionally restricted to one total
/// monodromy; `identity_only` gives the ring `A_1`.
pub fn dim_series_a(mon: &mut ComponentMonoid, max_weight: usize, omega: Option<usize>, identity_only: bool) -> Result<GradedDimSeries> {
    mon.extend_to(max_weight)?;
    let filter = if identity_only { Some(mon.subset().group().identity()) } else { omega };
    let dims = (0..=max_weight)
        .map(|n| match filter {
            Some(w) => mon.with_monodromy(n, w).len() as u128,
            None => mon.count(n) as u128,
        })
        .collect();
    let tag = if identity_only { RingTag::A1 } else { RingTag::A };
    Ok(GradedDimSeries { tag, dims, period: mon.subset().ell() })
}

// [q_i]^ell · x for x of weight n
fn power_lmul(mon: &ComponentMonoid, n: usize, i: usize, x: usize) -> usize {
    let ell = mon.subset().ell();
    (0..ell).fold(x, |y, k| mon.lmul(n + k, i, y))
}

/// The elements of the submonoid generated by the `ℓ`-th powers, weight
/// `ℓk` for `k = 0, 1, ...` up to `max_weight`, as sorted component ids.
pub fn power_submonoid(mon: &mut ComponentMonoid, max_weight: usize) -> Result<Vec<Vec<usize>>> {
    mon.extend_to(max_weight)?;
    let ell = mon.subset().ell();
    let m = mon.subset().len();
    let mut levels = vec![vec![0usize]];
    while ell * levels.len() <= max_weight {
        let n = ell * (levels.len() - 1);
        let prev = levels.last().unwrap();
        let mut next: Vec<usize> = prev.iter().flat_map(|&e| (0..m).map(move |i| (i, e))).map(|(i, e)| power_lmul(mon, n, i, e)).collect();
        next.sort_unstable();
        next.dedup();
        levels.push(next);
    }
    Ok(levels)
}

fn spread(levels: &[usize], ell: usize, max_weight: usize) -> Vec<u128> {
    (0..=max_weight).map(|w| if w % ell == 0 { levels[w / ell] as u128 } else { 0 }).collect()
}

pub fn dim_series_b(mon: &mut ComponentMonoid, max_weight: usize) -> Result<GradedDimSeries> {
    let ell = mon.subset().ell();
    let levels = power_submonoid(mon, max_weight)?;
    let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
    Ok(GradedDimSeries { tag: RingTag::B, dims: spread(&counts, ell, max_weight), period: ell })
}

// Classes of the power submonoid modulo the congruence generated by
// [q_i]^ell ~ [q_partner(i)]^ell. The submonoid is commutative, so every
// elementary move has the form e·x_i ~ e·x_partner(i).
fn quotient_counts(mon: &mut ComponentMonoid, max_weight: usize, partner: impl Fn(usize) -> usize) -> Result<Vec<usize>> {
    let levels = power_submonoid(mon, max_weight)?;
    let ell = mon.subset().ell();
    let m = mon.subset().len();
    let mut counts = vec![1];
    for k in 1..levels.len() {
        let n = ell * (k - 1);
        let here = &levels[k];
        let index = |x: usize| here.binary_search(&x).expect("closed under generators");
        let pairs: Vec<(usize, usize)> = levels[k - 1]
            .iter()
            .flat_map(|&e| (0..m).map(move |i| (e, i)))
            .map(|(e, i)| (index(power_lmul(mon, n, i, e)), index(power_lmul(mon, n, partner(i), e))))
            .collect();
        counts.push(classes_from_unions(here.len(), pairs).1);
    }
    Ok(counts)
}

pub fn dim_series_bomega(mon: &mut ComponentMonoid, omega: usize, max_weight: usize) -> Result<GradedDimSeries> {
    let q = mon.subset().clone();
    if omega >= q.group().order() {
        return Err(Error::InvalidInput(format!("element index {omega} out of range")));
    }
    let counts = quotient_counts(mon, max_weight, |i| q.act(i, omega))?;
    Ok(GradedDimSeries { tag: RingTag::Bomega, dims: spread(&counts, q.ell(), max_weight), period: q.ell() })
}

pub fn dim_series_c(mon: &mut ComponentMonoid, max_weight: usize) -> Result<GradedDimSeries> {
    let ell = mon.subset().ell();
    let counts = quotient_counts(mon, max_weight, |_| 0)?;
    Ok(GradedDimSeries { tag: RingTag::C, dims: spread(&counts, ell, max_weight), period: ell })
}

/// One polynomial per residue class modulo the period, with exact
/// rational coefficients (constant term first; empty means zero).
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiPolynomial {
    pub period: usize,
    pub polys: Vec<Vec<BigRational>>,
    /// First weight used for fitting and the last one (inclusive).
    pub fit_window: (usize, usize),
    /// Whether the fit reproduces the held-out weights after the window.
    pub holdout_ok: bool,
    /// Smallest weight from which the fit matches every computed value.
    pub stable_from: usize,
}

impl QuasiPolynomial {
    /// `None` for the zero quasi-polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.polys.iter().filter(|p| !p.is_empty()).map(|p| p.len() - 1).max()
    }

    pub fn eval(&self, w: usize) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(w));
        self.polys[w % self.period].iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Smallest divisor of the period under which the components repeat.
    pub fn minimal_period(&self) -> usize {
        (1..=self.period)
            .filter(|d| self.period % d == 0)
            .find(|&d| (0..self.period).all(|r| self.polys[r] == self.polys[r % d]))
            .unwrap_or(self.period)
    }
}

fn rat(x: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

// Expands sum_k c_k · binom((w - w0)/step, k) into coefficients in w.
fn newton_to_monomial(diffs: &[BigRational], w0: usize, step: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::new();
    // basis polynomial prod_{j<k} ((w - w0)/step - j) / k!
    let mut basis = vec![BigRational::one()];
    for (k, c) in diffs.iter().enumerate() {
        if out.len() < basis.len() {
            out.resize(basis.len(), BigRational::zero());
        }
        for (o, b) in out.iter_mut().zip(&basis) {
            *o += c * b;
        }
        // multiply basis by ((w - w0)/step - k) / (k + 1)
        let scale = BigRational::new(BigInt::one(), BigInt::from(step * (k + 1)));
        let shift = -BigRational::from_integer(BigInt::from(w0 + step * k));
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b * &scale;
            next[i] += b * &shift * &scale;
        }
        basis = next;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Fits the tail `[tail_start, W - 2·period]` of a series residue class by
/// residue class with the minimal-degree polynomial certified by vanishing
/// finite differences, then checks the last `2·period` values.
pub fn fit_quasipolynomial(s: &GradedDimSeries, tail_start: usize) -> Result<QuasiPolynomial> {
    let period = s.period.max(1);
    let top = s.max_weight();
    let fit_end = top.checked_sub(2 * period).ok_or(Error::InsufficientWindow { residue: 0, points: 0, needed: 2 })?;
    let mut polys = Vec::with_capacity(period);
    for r in 0..period {
        let weights: Vec<usize> = (tail_start..=fit_end).filter(|w| w % period == r).collect();
        if weights.len() < 2 {
            return Err(Error::InsufficientWindow { residue: r, points: weights.len(), needed: 2 });
        }
        let ys: Vec<BigRational> = weights.iter().map(|&w| rat(s.dims[w])).collect();
        let mut table = vec![ys];
        let mut leading = vec![table[0][0].clone()];
        let mut degree = None;
        for d in 0..weights.len() - 1 {
            let prev = &table[d];
            let next: Vec<BigRational> = prev.windows(2).map(|p| &p[1] - &p[0]).collect();
            if next.iter().all(|x| x.is_zero()) {
                degree = Some(d);
                break;
            }
            leading.push(next[0].clone());
            table.push(next);
        }
        let Some(d) = degree else {
            let last = table.last().unwrap();
            let k = last.iter().position(|x| !x.is_zero()).unwrap_or(0);
            let order = table.len() - 1;
            return Err(Error::NonPolynomialTail { residue: r, weight: weights[k + order] });
        };
        if d + 2 > weights.len() {
            return Err(Error::InsufficientWindow { residue: r, points: weights.len(), needed: d + 2 });
        }
        leading.truncate(d + 1);
        polys.push(newton_to_monomial(&leading, weights[0], period));
    }
    let mut qp = QuasiPolynomial { period, polys, fit_window: (tail_start, fit_end), holdout_ok: false, stable_from: 0 };
    qp.holdout_ok = (fit_end + 1..=top).all(|w| qp.eval(w) == rat(s.dims[w]));
    qp.stable_from = (0..=top).rev().take_while(|&w| qp.eval(w) == rat(s.dims[w])).last().unwrap_or(top + 1);
    Ok(qp)
}

pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < k {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct FitSummary {
    pub ring: RingTag,
    pub max_weight: usize,
    pub dims: Vec<String>,
    pub degree: Option<usize>,
    pub period: usize,
    pub minimal_period: usize,
    pub fit_window: (usize, usize),
    pub holdout_ok: bool,
    pub stable_from: usize,
    /// Coefficients per residue class as `numerator/denominator` strings,
    /// constant term first.
    pub coefficients: Vec<Vec<String>>,
    pub error: Option<String>,
}

impl FitSummary {
    fn new(s: &GradedDimSeries, fit: Result<QuasiPolynomial>) -> Self {
        let dims = s.dims.iter().map(|d| d.to_string()).collect();
        match fit {
            Ok(q) => FitSummary {
                ring: s.tag,
                max_weight: s.max_weight(),
                dims,
                degree: q.degree(),
                period: q.period,
                minimal_period: q.minimal_period(),
                fit_window: q.fit_window,
                holdout_ok: q.holdout_ok,
                stable_from: q.stable_from,
                coefficients: q
                    .polys
                    .iter()
                    .map(|p| p.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect())
                    .collect(),
                error: None,
            },
            Err(e) => FitSummary {
                ring: s.tag,
                max_weight: s.max_weight(),
                dims,
                degree: None,
                period: s.period,
                minimal_period: s.period,
                fit_window: (0, 0),
                holdout_ok: false,
                stable_from: 0,
                coefficients: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeBoundReport {
    pub ell: usize,
    pub k: usize,
    pub k_omega: Option<usize>,
    /// `|Q ∩ H|` for the subgroup attaining `k`.
    pub witness_size: usize,
    pub fits: Vec<FitSummary>,
    pub assertions: Vec<Assertion>,
}

impl DegreeBoundReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }
}

/// Weights used by [`degree_bound_report`].
#[derive(Clone, Copy, Debug)]
pub struct Windows {
    pub a_max: usize,
    pub b_max: usize,
    pub a_tail: Option<usize>,
    pub b_tail: Option<usize>,
}

impl Windows {
    pub fn new(a_max: usize, b_max: usize) -> Self {
        Windows { a_max, b_max, a_tail: None, b_tail: None }
    }
}

fn fmt_degree(d: Option<usize>) -> String {
    d.map_or("-inf".into(), |d| d.to_string())
}

/// Fits all five series and compares the degrees with the `k` invariants.
pub fn degree_bound_report(mon: &mut ComponentMonoid, omega: Option<usize>, win: Windows) -> Result<DegreeBoundReport> {
    let q = mon.subset().clone();
    let ell = q.ell();
    let k = k_invariant(&q, None)?;
    let k_omega = omega.map(|w| k_invariant(&q, Some(w))).transpose()?;
    let a_tail = win.a_tail.unwrap_or(win.a_max / 2);
    let b_tail = win.b_tail.unwrap_or(win.b_max / 2);

    let mut series = vec![
        (dim_series_a(mon, win.a_max, None, false)?, a_tail),
        (dim_series_a(mon, win.a_max, None, true)?, a_tail),
        (dim_series_b(mon, win.b_max)?, b_tail),
        (dim_series_c(mon, win.b_max)?, b_tail),
    ];
    if let Some(w) = omega {
        series.push((dim_series_bomega(mon, w, win.b_max)?, b_tail));
    }
    let mut fits = Vec::new();
    let mut fitted = Vec::new();
    for (s, tail) in &series {
        let f = fit_quasipolynomial(s, *tail);
        fitted.push(f.as_ref().ok().cloned());
        fits.push(FitSummary::new(s, f));
    }

    let want = Some(k.value - 1);
    let mut assertions = Vec::new();
    let degree_of = |i: usize| fitted[i].as_ref().and_then(|f| f.degree());
    let fit_ok = |i: usize| fitted[i].as_ref().is_some_and(|f| f.holdout_ok);
    for (i, name) in [(0, "A"), (2, "B")] {
        let d = degree_of(i);
        assertions.push(Assertion {
            name: format!("deg p_{name} = k - 1"),
            expected: fmt_degree(want),
            observed: fmt_degree(d),
            pass: fit_ok(i) && d == want,
        });
    }
    let period_a = fitted[0].as_ref().map(|f| f.minimal_period());
    assertions.push(Assertion {
        name: "period of p_A divides ell".into(),
        expected: format!("divides {ell}"),
        observed: period_a.map_or("no fit".into(), |p| p.to_string()),
        pass: period_a.is_some_and(|p| ell % p == 0),
    });
    if let Some(ko) = &k_omega {
        let d = degree_of(4);
        assertions.push(Assertion {
            name: "deg p_Bomega <= k_omega - 1".into(),
            expected: format!("<= {}", ko.value - 1),
            observed: fmt_degree(d),
            pass: fit_ok(4) && d.map_or(true, |d| d < ko.value),
        });
    }
    let c_ones = series[3].0.dims.iter().enumerate().all(|(w, &d)| d == (w % ell == 0) as u128);
    if q.is_single_class() {
        assertions.push(Assertion {
            name: "C is one-dimensional on multiples of ell".into(),
            expected: "1".into(),
            observed: if c_ones { "1".into() } else { "differs".into() },
            pass: c_ones,
        });
    }
    // lower bound binom(n - r + k - 1, k - 1) for the witnessed r
    let r = k.classes.iter().map(|c| c.len()).sum::<usize>() as i64;
    let b = &series[2].0;
    let lower_ok = (0..=win.b_max / ell).filter(|&n| n as i64 >= r).all(|n| b.dims[n * ell] >= binomial(n as i64 - r + k.value as i64 - 1, k.value as i64 - 1));
    assertions.push(Assertion {
        name: "dim B_(ell n) >= binom(n - r + k - 1, k - 1)".into(),
        expected: format!("r = {r}"),
        observed: if lower_ok { "holds".into() } else { "violated".into() },
        pass: lower_ok,
    });

    Ok(DegreeBoundReport {
        ell,
        k: k.value,
        k_omega: k_omega.map(|k| k.value),
        witness_size: r as usize,
        fits,
        assertions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupFile;

    fn monoid(name: &str, sub: &str) -> ComponentMonoid {
        let f = GroupFile::bundled(name).unwrap();
        let g = f.load().unwrap();
        ComponentMonoid::new(f.select_q(&g, sub).unwrap())
    }

    fn series(dims: Vec<u128>, period: usize) -> GradedDimSeries {
        GradedDimSeries { tag: RingTag::A, dims, period }
    }

    #[test]
    fn constant_fit() {
        let q = fit_quasipolynomial(&series(vec![1; 13], 2), 4).unwrap();
        assert_eq!(q.degree(), Some(0));
        assert_eq!(q.polys, vec![vec![rat(1)], vec![rat(1)]]);
        assert!(q.holdout_ok);
        assert_eq!(q.minimal_period(), 1);
    }

    #[test]
    fn parity_linear_fit() {
        let dims = (0..15u128).map(|n| if n % 2 == 0 { n } else { n + 1 }).collect();
        let q = fit_quasipolynomial(&series(dims, 2), 2).unwrap();
        assert_eq!(q.degree(), Some(1));
        assert_eq!(q.polys[0], vec![BigRational::zero(), rat(1)]);
        assert_eq!(q.polys[1], vec![rat(1), rat(1)]);
        assert_eq!(q.stable_from, 0);
    }

    #[test]
    fn fit_errors() {
        let cubes: Vec<u128> = (0..8u128).map(|n| 1 << n).collect();
        assert!(matches!(fit_quasipolynomial(&series(cubes, 1), 0), Err(Error::NonPolynomialTail { .. })));
        assert!(matches!(fit_quasipolynomial(&series(vec![1; 5], 2), 0), Err(Error::InsufficientWindow { .. })));
    }

    #[test]
    fn newton_expansion_quadratic() {
        // w^2/4 on even weights with step 2, from w0 = 4
        let dims: Vec<u128> = (0..=20u128).map(|w| if w % 2 == 0 { w * w / 4 } else { 0 }).collect();
        let q = fit_quasipolynomial(&series(dims, 2), 4).unwrap();
        assert_eq!(q.polys[0], vec![BigRational::zero(), BigRational::zero(), BigRational::new(1.into(), 4.into())]);
        assert!(q.polys[1].is_empty());
        assert_eq!(q.degree(), Some(2));
    }

    #[test]
    fn z2_series() {
        let mut mon = monoid("z2", "involutions");
        assert!(dim_series_a(&mut mon, 8, None, false).unwrap().dims.iter().all(|&d| d == 1));
        let b = dim_series_b(&mut mon, 8).unwrap();
        assert_eq!(b.dims, vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(dim_series_c(&mut mon, 8).unwrap().dims, b.dims);
    }

    #[test]
    fn s3_series() {
        let mut mon = monoid("s3", "transpositions");
        let a = dim_series_a(&mut mon, 6, None, false).unwrap();
        assert_eq!(&a.dims[..3], &[1, 3, 5]);
        let a1 = dim_series_a(&mut mon, 6, None, true).unwrap();
        assert_eq!(a1.dims[2], 3);
        let b = dim_series_b(&mut mon, 6).unwrap();
        assert_eq!(b.dims[2], 3);
        let w = mon.subset().group().element("(123)").unwrap();
        let bw = dim_series_bomega(&mut mon, w, 6).unwrap();
        assert_eq!((bw.dims[0], bw.dims[2]), (1, 1));
        let e = mon.subset().group().identity();
        assert_eq!(dim_series_bomega(&mut mon, e, 6).unwrap().dims, b.dims);
        let c = dim_series_c(&mut mon, 6).unwrap();
        assert_eq!(c.dims, vec![1, 0, 1, 0, 1, 0, 1]);
        for n in (0..=6).step_by(2) {
            assert!(b.dims[n] <= a1.dims[n] && a1.dims[n] <= a.dims[n]);
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }
}
