//! Acceptance gate. Each test checks one criterion and prints a single
//! `PASS`/`FAIL` line before asserting.

use std::time::Instant;

use hurwitz::group::{is_large, k_invariant, GroupFile, InvariantSubset};
use hurwitz::hurwitz::{apply_word, ComponentMonoid};
use hurwitz::koszul::{self, TwistedBimodule};
use hurwitz::linalg::{snf, Coefficients, Field, PrimeField, Rationals, RowReduction, SparseIntMatrix};
use hurwitz::presentation::{braid_presentation, lst_induced_h1, Caps, ComponentH1, H1Map};
use hurwitz::rings::{self, RingTag, Windows};
use hurwitz::stability::{generation_degree, stability_report};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn report(n: usize, name: &str, pass: bool, detail: &str) {
    println!("criterion {n:>2} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

fn load(group: &str, sel: &str) -> (GroupFile, InvariantSubset) {
    let file = GroupFile::bundled(group).unwrap();
    let q = file.select_q(&file.load().unwrap(), sel).unwrap();
    (file, q)
}

fn element(file: &GroupFile, q: &InvariantSubset, sel: &str) -> usize {
    file.select_element(q.group(), sel).unwrap()
}

// Every tuple of Q^n, in lexicographic order.
fn all_tuples(m: usize, n: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = m.pow(n as u32);
    (0..total).map(move |mut k| {
        let mut t = vec![0u8; n];
        for slot in t.iter_mut().rev() {
            *slot = (k % m) as u8;
            k /= m;
        }
        t
    })
}

fn braid_relations_hold(q: &InvariantSubset, n: usize) -> usize {
    let mut checked = 0;
    for t in all_tuples(q.len(), n) {
        for i in 1..n as i32 {
            assert_eq!(apply_word(q, &[i, -i], &t).unwrap(), t);
            if i + 1 < n as i32 {
                assert_eq!(apply_word(q, &[i, i + 1, i], &t).unwrap(), apply_word(q, &[i + 1, i, i + 1], &t).unwrap());
            }
            for j in i + 2..n as i32 {
                assert_eq!(apply_word(q, &[i, j], &t).unwrap(), apply_word(q, &[j, i], &t).unwrap());
            }
        }
        checked += 1;
    }
    checked
}

#[test]
fn criterion_01_hurwitz_action() {
    let start = Instant::now();
    let (_, s3) = load("s3", "transpositions");
    let (_, d5) = load("d5", "involutions");
    let a: usize = (1..=6).map(|n| braid_relations_hold(&s3, n)).sum();
    let b: usize = (1..=4).map(|n| braid_relations_hold(&d5, n)).sum();
    let secs = start.elapsed().as_secs_f64();
    report(1, "Hurwitz action", secs < 10.0, &format!("{a} S3 tuples (n <= 6) and {b} D5 tuples (n <= 4) in {secs:.2}s"));
}

#[test]
fn criterion_02_k_invariants() {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, d) in [("s3", 3), ("s4", 4), ("s5", 5)] {
        let (_, q) = load(name, "transpositions");
        let k = k_invariant(&q, None).unwrap().value;
        ok &= k == d / 2;
        notes.push(format!("k(S{d}) = {k}"));
    }
    let (f4, s4) = load("s4", "transpositions");
    let w4 = element(&f4, &s4, "(1,2,3,4)");
    let k4 = k_invariant(&s4, Some(w4)).unwrap().value;
    let large4 = is_large(&s4, w4).unwrap();
    ok &= k4 == 1 && !large4;
    notes.push(format!("k(S4, (1234)) = {k4}, large = {large4}"));
    let (f5, s5) = load("s5", "transpositions");
    let large5 = is_large(&s5, element(&f5, &s5, "(1,2,3,4,5)")).unwrap();
    let (fd, d5) = load("d5", "involutions");
    let large_d5 = is_large(&d5, element(&fd, &d5, "rotation")).unwrap();
    ok &= large5 && large_d5;
    notes.push(format!("large(S5, 5-cycle) = {large5}, large(D5, rotation) = {large_d5}"));
    let secs = start.elapsed().as_secs_f64();
    report(2, "k-invariants", ok && secs < 30.0, &format!("{} in {secs:.2}s", notes.join("; ")));
}

#[test]
fn criterion_03_degenerate_group() {
    let (_, q) = load("z2", "nonidentity");
    let mut mon = ComponentMonoid::new(q.clone());
    let top = 12;
    mon.extend_to(top).unwrap();
    let mut ok = (0..=top).all(|n| mon.count(n) == 1);
    let a = rings::dim_series_a(&mut mon, top, None, false).unwrap();
    ok &= a.dims.iter().all(|&d| d == 1);
    let z = hurwitz::linalg::AbelianGroup::new(1, vec![]);
    let f2 = PrimeField::new(2).unwrap();
    for n in 2..top {
        let src = ComponentH1::new(&q, &vec![0u8; n], Caps::default()).unwrap();
        let tgt = ComponentH1::new(&q, &vec![0u8; n + 1], Caps::default()).unwrap();
        ok &= src.integral().unwrap() == z;
        ok &= braid_presentation(n).abelianization().unwrap() == z;
        ok &= lst_identity(&Rationals, &src, &tgt) && lst_identity(&f2, &src, &tgt);
    }
    report(3, "degenerate group Z/2", ok, &format!("one component and H1 = Z at every weight, lst maps are identities for 2 <= n < {top}"));
}

fn lst_identity<F: Field>(f: &F, src: &ComponentH1, tgt: &ComponentH1) -> bool {
    let (sh, th) = (src.over(f), tgt.over(f));
    let m = lst_induced_h1(f, 0, 1, (src, &sh), (tgt, &th)).unwrap();
    m.rows == 1 && m.cols == 1 && m.matrix == H1Map::identity(f, 1).matrix
}

fn degree_reports() -> Vec<(&'static str, rings::DegreeBoundReport)> {
    let mut out = Vec::new();
    for (name, omega) in [("s3", "(1,2,3)"), ("s4", "(1,2,3,4)")] {
        let (file, q) = load(name, "transpositions");
        let w = element(&file, &q, omega);
        let mut mon = ComponentMonoid::new(q);
        out.push((name, rings::degree_bound_report(&mut mon, Some(w), Windows::new(20, 24)).unwrap()));
    }
    out
}

#[test]
fn criterion_04_hilbert_growth() {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, r) in degree_reports() {
        for a in r.assertions.iter().filter(|a| a.name.starts_with("deg p_A") || a.name.starts_with("deg p_B =") || a.name.starts_with("period")) {
            ok &= a.pass;
        }
        for f in r.fits.iter().filter(|f| matches!(f.ring, RingTag::A | RingTag::B)) {
            let reach = if f.ring == RingTag::A { 10 } else { 12 };
            ok &= f.holdout_ok && f.error.is_none() && f.max_weight >= reach;
            notes.push(format!("{name} {}: degree {}, period {}, window {}", f.ring, f.degree.map_or(-1, |d| d as i64), f.minimal_period, f.max_weight));
        }
        notes.push(format!("{name} k = {}", r.k));
    }
    report(4, "Hilbert growth", ok, &notes.join("; "));
}

#[test]
fn criterion_05_b_omega_bound() {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, r) in degree_reports() {
        let a = r.assertions.iter().find(|a| a.name.starts_with("deg p_Bomega")).unwrap();
        let fit = r.fits.iter().find(|f| f.ring == RingTag::Bomega).unwrap();
        ok &= a.pass && fit.holdout_ok;
        notes.push(format!("{name}: degree {} against k_omega = {}", a.observed, r.k_omega.unwrap()));
    }
    report(5, "B_omega bound", ok, &notes.join("; "));
}

// `prime` is 0 for the rationals.
fn koszul_checks<F: Field>(f: &F, prime: u64, bm: &TwistedBimodule, top: usize) -> (bool, usize) {
    let mut ok = true;
    let mut nonzero = 0;
    for w in 0..top {
        for p in -1..w as i64 {
            if koszul::koszul_homology(bm, w, p, Some(prime)).unwrap().is_zero() {
                continue;
            }
            nonzero += 1;
            for a in 0..bm.subset().len() {
                ok &= koszul::right_action_vanishes(f, bm, w, p, a).unwrap();
            }
        }
    }
    (ok, nonzero)
}

#[test]
fn criterion_06_koszul_complex() {
    let start = Instant::now();
    let top = 8;
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, sel) in [("s3", "transpositions"), ("d3", "involutions")] {
        let (_, q) = load(name, sel);
        let mut mon = ComponentMonoid::new(q.clone());
        mon.extend_to(top + 1).unwrap();
        let bm = TwistedBimodule::new(&mon, top).unwrap();
        ok &= bm.check_twist_axioms().is_none();
        for w in 0..=top {
            ok &= koszul::build_complex(&bm, w, None).unwrap().check_square_zero().unwrap().is_none();
        }
        let mut checked = 0;
        for a in 0..q.len() {
            let h = koszul::homotopy_check(&bm, a);
            ok &= h.first_violation.is_none();
            checked += h.checked;
        }
        let (zero_q, nz_q) = koszul_checks(&Rationals, 0, &bm, top);
        let (zero_2, nz_2) = koszul_checks(&PrimeField::new(2).unwrap(), 2, &bm, top);
        let (zero_3, nz_3) = koszul_checks(&PrimeField::new(3).unwrap(), 3, &bm, top);
        ok &= zero_q && zero_2 && zero_3;
        notes.push(format!("{name}: homotopy on {checked} basis elements, right action zero on {nz_q}/{nz_2}/{nz_3} nonzero groups over Q/F2/F3"));
    }
    let secs = start.elapsed().as_secs_f64();
    report(6, "Koszul complex", ok, &format!("{} ({secs:.1}s)", notes.join("; ")));
}

#[test]
fn criterion_07_vanishing_scan() {
    let top = 12;
    let (_, q) = load("s3", "transpositions");
    let mut mon = ComponentMonoid::new(q);
    mon.extend_to(top + 1).unwrap();
    let bm = TwistedBimodule::new(&mon, top).unwrap();
    let scan = koszul::vanishing_scan(&bm, &[-1, 0, 1]).unwrap();
    let notes: Vec<String> = scan
        .scans
        .iter()
        .map(|s| format!("H_{} last nonzero at {}", s.degree, s.last_nonzero.map_or("none".into(), |w| w.to_string())))
        .collect();
    report(7, "vanishing scan", scan.conclusive(), &format!("window {top}: {}", notes.join(", ")));
}

#[test]
fn criterion_08_generation_degrees() {
    let (_, q) = load("s3", "transpositions");
    let mut mon = ComponentMonoid::new(q);
    let mut ok = true;
    let mut notes = Vec::new();
    for field in [Coefficients::Rationals, Coefficients::Prime(2)] {
        for degree in 0..=1 {
            let r = generation_degree(&mut mon, degree, None, field, 9, Caps::default()).unwrap();
            let from = r.generated_from;
            ok &= from.is_some();
            if degree == 0 {
                ok &= from == Some(0) && r.steps.first().is_some_and(|s| s.n == 0) && r.steps.iter().all(|s| s.surjective);
            }
            if let Some(n0) = from {
                ok &= r.steps.iter().filter(|s| s.n >= n0).all(|s| s.surjective);
            }
            notes.push(format!("H{degree}/{}: from {}", r.field, from.map_or("none".into(), |n| n.to_string())));
        }
    }
    report(8, "generation degrees", ok, &format!("window n <= 9; {}", notes.join(", ")));
}

fn stability_summary(name: &str, sel: &str, omega: &str, sources: std::ops::RangeInclusive<usize>) -> (bool, String) {
    let fields = [Coefficients::Rationals, Coefficients::Prime(2), Coefficients::Prime(3)];
    let caps = Caps { letters: 50_000_000, ..Caps::default() };
    let (file, q) = load(name, sel);
    let w = element(&file, &q, omega);
    let mut mon = ComponentMonoid::new(q);
    let span = format!("{}..={}", sources.start(), sources.end());
    match stability_report(&mut mon, w, &fields, sources, caps) {
        Ok(r) => {
            let summary: Vec<String> = r
                .thresholds
                .iter()
                .map(|t| {
                    let show = |x: Option<usize>| x.map_or("none".to_string(), |n| n.to_string());
                    format!("H{}/{} iso from {}, agree from {}, periodic from {}", t.degree, t.field, show(t.iso_from), show(t.agree_from), show(t.periodic_from))
                })
                .collect();
            (r.conclusive(), format!("{name} sources {span}: {}", summary.join(", ")))
        }
        Err(e) => (false, format!("{name} sources {span}: {e}")),
    }
}

// The window bounds the weights of the spaces involved, so lst(a)^2 is
// checked on sources n with n + 2 <= 9. S3 is also run on sources up to 9.
#[test]
fn criterion_09_stabilization() {
    let start = Instant::now();
    let runs = [
        stability_summary("s3", "transpositions", "(1,2,3)", 2..=9),
        stability_summary("d5", "involutions", "rotation", 2..=7),
    ];
    let ok = runs.iter().all(|r| r.0);
    let notes: Vec<&str> = runs.iter().map(|r| r.1.as_str()).collect();
    let secs = start.elapsed().as_secs_f64();
    report(9, "stabilization", ok, &format!("{} ({secs:.1}s)", notes.join("; ")));
}

// Determinant by fraction-free elimination.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (k - 1..n).flat_map(|last| combinations(last, k - 1).into_iter().map(move |mut c| {
        c.push(last);
        c
    })).collect()
}

fn gcd(a: BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::gcd(&a, b)
}

// Invariant factors as quotients of determinantal divisors.
fn invariant_factors_by_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let (r, c) = (m.len(), m[0].len());
    let mut divisors = vec![BigInt::one()];
    for k in 1..=r.min(c) {
        let mut d = BigInt::zero();
        for rows in combinations(r, k) {
            for cols in combinations(c, k) {
                let minor = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
                d = gcd(d, &bareiss(minor));
            }
        }
        if d.is_zero() {
            break;
        }
        divisors.push(d);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

fn sparse_agrees(m: &SparseIntMatrix, smith: &snf::Smith) -> bool {
    let red = RowReduction::new(m.row_vectors().unwrap(), m.cols().max(1)).unwrap();
    let mut ok = red.rank_over_q().unwrap() == smith.rank();
    let mut factors: Vec<BigInt> = smith.factors.iter().filter(|d| !d.is_zero()).cloned().collect();
    let mut sparse = red.nonzero_factors().unwrap();
    factors.sort();
    sparse.sort();
    ok &= factors == sparse;
    for p in [2u64, 3, 5] {
        let want = smith.factors.iter().filter(|d| !(*d % BigInt::from(p)).is_zero()).count();
        ok &= red.rank_over(&PrimeField::new(p).unwrap()) == want;
    }
    ok
}

#[test]
fn criterion_10_linear_algebra_oracles() {
    let mut rng = StdRng::seed_from_u64(20261015);
    let mut ok = true;
    for _ in 0..200 {
        let m: Vec<Vec<BigInt>> = (0..6)
            .map(|_| (0..6).map(|_| if rng.gen_bool(0.3) { BigInt::zero() } else { BigInt::from(rng.gen_range(-9i64..=9)) }).collect())
            .collect();
        let smith = snf::smith_normal_form(&m, 6, true).unwrap();
        let mut want = invariant_factors_by_minors(&m);
        want.resize(6, BigInt::zero());
        ok &= smith.factors == want && snf::verify_transforms(&m, 6, &smith);
        ok &= smith.factors.iter().all(|d| !d.is_negative());
    }
    let mut checked = 0;
    for (name, sel) in [("s3", "transpositions"), ("d3", "involutions"), ("s4", "transpositions")] {
        let (_, q) = load(name, sel);
        let top = 8;
        let mut mon = ComponentMonoid::new(q.clone());
        mon.extend_to(top + 1).unwrap();
        let bm = TwistedBimodule::new(&mon, top).unwrap();
        for w in 0..=top {
            for p in 0..w as i64 {
                let m = bm.boundary_matrix(w, p).unwrap();
                if m.rows() == 0 || m.cols() == 0 || m.rows() > 400 || m.cols() > 400 {
                    continue;
                }
                ok &= koszul::rank_cross_check(&m).unwrap();
                let smith = snf::smith_normal_form(&m.to_dense(), m.cols(), false).unwrap();
                ok &= sparse_agrees(&m, &smith);
                checked += 1;
            }
        }
        for n in 2..=top {
            for x in 0..mon.count(n) {
                let g = hurwitz::presentation::SchreierGraph::new(&q, mon.canonical(n, x), 1 << 20).unwrap();
                let rows = g.relation_rows(1 << 24).unwrap();
                let cols = g.num_generators();
                if rows.is_empty() || cols == 0 || rows.len() > 400 || cols > 400 {
                    continue;
                }
                let triplets = rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j as usize, BigInt::from(v))));
                let m = SparseIntMatrix::from_triplets(rows.len(), cols, triplets).unwrap();
                ok &= koszul::rank_cross_check(&m).unwrap();
                let smith = snf::smith_normal_form(&m.to_dense(), cols, false).unwrap();
                ok &= sparse_agrees(&m, &smith);
                checked += 1;
            }
        }
    }
    report(10, "linear-algebra oracles", ok && checked > 0, &format!("200 random 6x6 SNFs against determinantal divisors; {checked} homology matrices cross-checked"));
}
