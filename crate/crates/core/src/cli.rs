//! Command-line driver.
//!
//! Exit codes: 0 success, 2 invalid input, 3 infeasible size, 4 failed
//! assertion, 5 inconclusive window.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{is_large, k_invariant, FiniteGroup, GroupFile, InvariantSubset, DEFAULT_MAX_ORDER};
use crate::hurwitz::{tuple_label, ComponentMonoid, DEFAULT_STATE_CAP};
use crate::koszul::{self, Homology, TwistedBimodule};
use crate::linalg::Coefficients;
use crate::presentation::{Caps, DEFAULT_LETTER_CAP};
use crate::rings::{self, GradedDimSeries, RingTag, Windows};
use crate::stability::{generation_degree, stability_report, H1Atlas};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_FAILED: i32 = 4;
pub const EXIT_INCONCLUSIVE: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version, about = "Hurwitz spaces of finite groups: orbits, graded rings, Koszul homology and H1 stability")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// More logging (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    /// Group file (JSON), or the name of a bundled group such as s3.
    group: PathBuf,
    /// Q: a named subset, `class:<element>`, or a list of elements.
    #[arg(long)]
    q: String,
    /// Largest group order accepted.
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Cap on orbit sizes and per-weight component pairs.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group order, classes, m, ℓ and the k invariants.
    GroupInfo {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbit table of Q^n under the braid group.
    Orbits {
        #[command(flatten)]
        g: GroupArgs,
        /// A weight `n` or a range `a:b`.
        #[arg(short = 'n', long = "range")]
        range: String,
        /// Keep only orbits with this total monodromy.
        #[arg(long)]
        omega: Option<String>,
        /// CSV destination (standard output when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension series of A, A1, B, B_ω, C with quasi-polynomial fits.
    Hilbert {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        omega: Option<String>,
        #[arg(long, default_value_t = 20)]
        a_max: usize,
        #[arg(long, default_value_t = 24)]
        b_max: usize,
        #[arg(long)]
        a_tail: Option<usize>,
        #[arg(long)]
        b_tail: Option<usize>,
        /// Output directory for series.csv and degree_bounds.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a quasi-polynomial to one series of a series CSV.
    Fit {
        /// CSV with columns ring_tag, weight, dim.
        series: PathBuf,
        #[arg(long, default_value = "A")]
        ring: String,
        /// Period of the quasi-polynomial, usually ℓ.
        #[arg(long, default_value_t = 1)]
        period: usize,
        #[arg(long)]
        tail: Option<usize>,
    },
    /// The Koszul-like complex of A: checks and homology.
    Koszul {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 8)]
        max_weight: usize,
        /// Degrees to scan, e.g. -1,0,1.
        #[arg(long, default_value = "-1,0,1", allow_hyphen_values = true)]
        degrees: String,
        /// Coefficients: z, q or f<p>.
        #[arg(long, default_value = "z")]
        coeff: String,
        /// Verify d² = 0, the twist axioms and the homotopy identity.
        #[arg(long)]
        check: bool,
        /// Output directory for koszul.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write every boundary matrix as a triplet file.
        #[arg(long)]
        export_matrices: bool,
    },
    /// H1 of components, optionally with generation degrees.
    H1 {
        #[command(flatten)]
        g: GroupArgs,
        /// A weight `n` or a range `a:b`.
        #[arg(short = 'n', long = "range")]
        range: String,
        #[arg(long)]
        omega: Option<String>,
        /// Fields for the generation report, e.g. q,f2.
        #[arg(long, default_value = "q")]
        fields: String,
        /// Report generation degrees of H0 and H1 through the top weight.
        #[arg(long)]
        generation: bool,
        #[arg(long, default_value_t = DEFAULT_LETTER_CAP)]
        letter_cap: usize,
        /// CSV destination (standard output when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stabilization of H0 and H1 under lst(a)^ℓ.
    Stability {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        omega: String,
        /// Source weights `a:b`.
        #[arg(long)]
        range: String,
        #[arg(long, default_value = "q,f2,f3")]
        fields: String,
        #[arg(long, default_value_t = DEFAULT_LETTER_CAP)]
        letter_cap: usize,
        /// JSON destination (standard output when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the exit status.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    if let Some(j) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible { .. } => EXIT_INFEASIBLE,
        Error::InsufficientWindow { .. } | Error::NonPolynomialTail { .. } => EXIT_INCONCLUSIVE,
        Error::Internal(_) => EXIT_FAILED,
        _ => EXIT_INVALID,
    }
}

struct Loaded {
    file: GroupFile,
    group: Arc<FiniteGroup>,
    q: InvariantSubset,
}

impl Loaded {
    fn new(g: &GroupArgs) -> Result<Self> {
        let file = GroupFile::open(&g.group)?;
        let group = Arc::new(file.build(g.max_order)?);
        let q = file.select_q(&group, &g.q)?;
        Ok(Loaded { file, group, q })
    }

    fn element(&self, s: &str) -> Result<usize> {
        self.file.select_element(&self.group, s)
    }

    fn label(&self, x: usize) -> &str {
        self.group.label(x)
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("bad weight range {s:?} (use n or a:b)"));
    let (a, b) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_fields(s: &str) -> Result<Vec<Coefficients>> {
    let out: Vec<Coefficients> = s.split(',').filter(|t| !t.trim().is_empty()).map(|t| Coefficients::parse(t.trim())).collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::InvalidInput("no coefficient fields given".into()));
    }
    Ok(out)
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::GroupInfo { g, omega, out } => group_info(&g, omega.as_deref(), &out),
        Command::Orbits { g, range, omega, out } => orbits(&g, &range, omega.as_deref(), &out),
        Command::Hilbert { g, omega, a_max, b_max, a_tail, b_tail, out } => {
            hilbert(&g, omega.as_deref(), Windows { a_max, b_max, a_tail, b_tail }, &out)
        }
        Command::Fit { series, ring, period, tail } => fit(&series, &ring, period, tail),
        Command::Koszul { g, max_weight, degrees, coeff, check, out, export_matrices } => {
            koszul_cmd(&g, max_weight, &degrees, &coeff, check, &out, export_matrices)
        }
        Command::H1 { g, range, omega, fields, generation, letter_cap, out } => {
            h1_cmd(&g, &range, omega.as_deref(), &fields, generation, letter_cap, &out)
        }
        Command::Stability { g, omega, range, fields, letter_cap, out } => stability_cmd(&g, &omega, &range, &fields, letter_cap, &out),
    }
}

#[derive(Serialize)]
struct GroupInfo {
    order: usize,
    classes: Vec<Vec<String>>,
    q: Vec<String>,
    m: usize,
    ell: usize,
    single_class: bool,
    k: usize,
    k_witness_order: usize,
    omega: Option<String>,
    k_omega: Option<usize>,
    large: Option<bool>,
}

fn group_info(g: &GroupArgs, omega: Option<&str>, out: &Option<PathBuf>) -> Result<i32> {
    let l = Loaded::new(g)?;
    let labels = |xs: &[usize]| xs.iter().map(|&x| l.label(x).to_string()).collect::<Vec<_>>();
    let k = k_invariant(&l.q, None)?;
    let w = omega.map(|s| l.element(s)).transpose()?;
    let k_omega = w.map(|w| k_invariant(&l.q, Some(w))).transpose()?;
    let large = match w {
        Some(w) if l.q.is_single_class() => Some(is_large(&l.q, w)?),
        _ => None,
    };
    let info = GroupInfo {
        order: l.group.order(),
        classes: l.group.conjugacy_classes().iter().map(|c| labels(c)).collect(),
        q: labels(l.q.members()),
        m: l.q.len(),
        ell: l.q.ell(),
        single_class: l.q.is_single_class(),
        k: k.value,
        k_witness_order: k.witness.order(),
        omega: w.map(|w| l.label(w).to_string()),
        k_omega: k_omega.map(|k| k.value),
        large,
    };
    println!("order = {}", info.order);
    println!("classes ({}): {}", info.classes.len(), info.classes.iter().map(|c| format!("{{{}}}", c.join(" "))).collect::<Vec<_>>().join(" "));
    println!("Q = {{{}}}", info.q.join(" "));
    println!("m = {}, ℓ = {}, single class: {}", info.m, info.ell, info.single_class);
    println!("k(G,Q) = {} (witness subgroup of order {})", info.k, info.k_witness_order);
    if let (Some(name), Some(ko)) = (&info.omega, info.k_omega) {
        println!("k(G,Q,ω) = {ko} for ω = {name}");
    }
    if let Some(large) = info.large {
        println!("large: {large}");
    }
    if let Some(p) = out {
        write_json(p, &info)?;
    }
    Ok(EXIT_OK)
}

fn orbits(g: &GroupArgs, range: &str, omega: Option<&str>, out: &Option<PathBuf>) -> Result<i32> {
    let l = Loaded::new(g)?;
    let (lo, hi) = parse_range(range)?;
    let w = omega.map(|s| l.element(s)).transpose()?;
    let mut mon = ComponentMonoid::with_cap(l.q.clone(), g.state_cap);
    let mut w_out = writer(out)?;
    let mut counts = Vec::new();
    for n in lo..=hi {
        let table = mon.table(n, w)?;
        counts.push((n, table.orbits.len(), table.total_size()));
        // one header for the whole file
        let mut buf = Vec::new();
        table.write_csv(&l.q, &mut buf)?;
        let text = String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))?;
        let body = if n == lo { text.as_str() } else { text.split_once('\n').map_or("", |(_, b)| b) };
        w_out.write_all(body.as_bytes())?;
    }
    w_out.flush()?;
    if out.is_some() {
        for (n, c, s) in counts {
            println!("weight {n}: {c} orbits covering {s} tuples");
        }
    }
    Ok(EXIT_OK)
}

fn hilbert(g: &GroupArgs, omega: Option<&str>, win: Windows, out: &Option<PathBuf>) -> Result<i32> {
    let l = Loaded::new(g)?;
    let w = omega.map(|s| l.element(s)).transpose()?;
    let mut mon = ComponentMonoid::with_cap(l.q.clone(), g.state_cap);
    let report = rings::degree_bound_report(&mut mon, w, win)?;
    println!("ℓ = {}, k(G,Q) = {}{}", report.ell, report.k, report.k_omega.map_or(String::new(), |k| format!(", k(G,Q,ω) = {k}")));
    for f in &report.fits {
        match &f.error {
            None => println!(
                "{:>3}: degree {}, period {}, stable from {}, holdout {}",
                f.ring.to_string(),
                f.degree.map_or("-inf".into(), |d| d.to_string()),
                f.minimal_period,
                f.stable_from,
                if f.holdout_ok { "ok" } else { "FAILED" }
            ),
            Some(e) => println!("{:>3}: no fit ({e})", f.ring.to_string()),
        }
    }
    for a in &report.assertions {
        println!("[{}] {}: expected {}, observed {}", if a.pass { "pass" } else { "FAIL" }, a.name, a.expected, a.observed);
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut wtr = BufWriter::new(File::create(dir.join("series.csv"))?);
        writeln!(wtr, "ring_tag,weight,dim")?;
        for f in &report.fits {
            for (w, d) in f.dims.iter().enumerate() {
                writeln!(wtr, "{},{},{}", f.ring, w, d)?;
            }
        }
        wtr.flush()?;
        write_json(&dir.join("degree_bounds.json"), &report)?;
    }
    Ok(if report.fits.iter().any(|f| f.error.is_some()) {
        EXIT_INCONCLUSIVE
    } else if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn fit(path: &Path, ring: &str, period: usize, tail: Option<usize>) -> Result<i32> {
    if period == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let mut rdr = csv::Reader::from_path(path)?;
    let mut points: Vec<(usize, u128)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).map(str::trim).ok_or_else(|| Error::InvalidInput("series rows need ring_tag,weight,dim".into()));
        if field(0)? != ring {
            continue;
        }
        let weight = field(1)?.parse().map_err(|_| Error::InvalidInput(format!("bad weight in {rec:?}")))?;
        let dim = field(2)?.parse().map_err(|_| Error::InvalidInput(format!("bad dim in {rec:?}")))?;
        points.push((weight, dim));
    }
    if points.is_empty() {
        return Err(Error::InvalidInput(format!("no rows for ring {ring:?}")));
    }
    points.sort_unstable();
    // weights must be 0, s, 2s, ... for a common step s
    let step = if points.len() > 1 { points[1].0 - points[0].0 } else { 1 };
    if step == 0 || points.iter().enumerate().any(|(i, &(w, _))| w != i * step) {
        return Err(Error::InvalidInput("weights must be 0, s, 2s, ... without gaps".into()));
    }
    let tag = match ring {
        "A" => RingTag::A,
        "A1" => RingTag::A1,
        "B" => RingTag::B,
        "Bomega" => RingTag::Bomega,
        "C" => RingTag::C,
        other => return Err(Error::InvalidInput(format!("unknown ring tag {other:?}"))),
    };
    let series = GradedDimSeries { tag, dims: points.iter().map(|p| p.1).collect(), period };
    let tail = tail.unwrap_or(series.dims.len() / 2);
    let q = rings::fit_quasipolynomial(&series, tail)?;
    println!(
        "{ring}: degree {}, period {} (minimal {}), fit window {:?}, stable from {}, holdout {}",
        q.degree().map_or("-inf".into(), |d| d.to_string()),
        q.period,
        q.minimal_period(),
        q.fit_window,
        q.stable_from,
        if q.holdout_ok { "ok" } else { "FAILED" }
    );
    for (r, p) in q.polys.iter().enumerate() {
        let coeffs: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        println!("  residue {r}: [{}]", coeffs.join(", "));
    }
    Ok(if q.holdout_ok { EXIT_OK } else { EXIT_FAILED })
}

#[derive(Serialize)]
struct BettiRow {
    weight: usize,
    degree: i64,
    homology: String,
    rank: usize,
    torsion: Vec<String>,
}

#[derive(Serialize)]
struct KoszulDump {
    max_weight: usize,
    coefficients: String,
    twist_axioms: Option<String>,
    square_zero_failure: Option<(usize, usize)>,
    homotopy: Vec<koszul::HomotopyReport>,
    betti: Vec<BettiRow>,
    vanishing: Option<koszul::VanishingReport>,
}

fn koszul_cmd(
    g: &GroupArgs,
    max_weight: usize,
    degrees: &str,
    coeff: &str,
    check: bool,
    out: &Option<PathBuf>,
    export: bool,
) -> Result<i32> {
    let l = Loaded::new(g)?;
    let degrees: Vec<i64> = degrees
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidInput(format!("bad degree {t:?}"))))
        .collect::<Result<_>>()?;
    let coeff = Coefficients::parse(coeff)?;
    let mut mon = ComponentMonoid::with_cap(l.q.clone(), g.state_cap);
    mon.extend_to(max_weight + 1)?;
    let bm = TwistedBimodule::new(&mon, max_weight)?;
    let mut failed = false;
    let mut dump = KoszulDump {
        max_weight,
        coefficients: coeff.tag(),
        twist_axioms: None,
        square_zero_failure: None,
        homotopy: Vec::new(),
        betti: Vec::new(),
        vanishing: None,
    };
    if check {
        dump.twist_axioms = bm.check_twist_axioms();
        for w in 0..=max_weight {
            if let Some(p) = koszul::build_complex(&bm, w, None)?.check_square_zero()? {
                dump.square_zero_failure = Some((w, p));
                break;
            }
        }
        dump.homotopy = (0..l.q.len()).map(|a| koszul::homotopy_check(&bm, a)).collect();
        failed = dump.twist_axioms.is_some() || dump.square_zero_failure.is_some() || dump.homotopy.iter().any(|h| h.first_violation.is_some());
        println!(
            "twist axioms: {}; d² = 0: {}; homotopy: {}",
            dump.twist_axioms.as_deref().unwrap_or("ok"),
            dump.square_zero_failure.map_or("ok".into(), |(w, p)| format!("FAILS at weight {w}, degree {p}")),
            if dump.homotopy.iter().all(|h| h.first_violation.is_none()) { "ok" } else { "FAILS" }
        );
    }
    let prime = match coeff {
        Coefficients::Integers => None,
        Coefficients::Rationals => Some(0),
        Coefficients::Prime(p) => Some(p),
    };
    for w in 0..=max_weight {
        for &p in &degrees {
            let h = koszul::koszul_homology(&bm, w, p, prime)?;
            let (text, rank, torsion) = match &h {
                Homology::Integral(a) => (a.to_string(), a.rank, a.torsion.iter().map(|t| t.to_string()).collect()),
                Homology::Dimension(d) => (d.to_string(), *d, Vec::new()),
            };
            dump.betti.push(BettiRow { weight: w, degree: p, homology: text, rank, torsion });
        }
    }
    println!("weight  {}", degrees.iter().map(|p| format!("{:>12}", format!("H_{p}"))).collect::<String>());
    for w in 0..=max_weight {
        let row: String = dump.betti.iter().filter(|b| b.weight == w).map(|b| format!("{:>12}", b.homology)).collect();
        println!("{w:>6}  {row}");
    }
    let mut inconclusive = false;
    if prime.is_none() {
        let scan = koszul::vanishing_scan(&bm, &degrees)?;
        for s in &scan.scans {
            println!(
                "H_{}: last nonzero weight {}, {}",
                s.degree,
                s.last_nonzero.map_or("none".into(), |w| w.to_string()),
                if s.vanishes_in_top_third { "vanishes in the top third" } else { "does NOT vanish in the top third" }
            );
        }
        inconclusive = !scan.conclusive();
        dump.vanishing = Some(scan);
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        write_json(&dir.join("koszul.json"), &dump)?;
        if export {
            for w in 0..=max_weight {
                for p in 0..w as i64 {
                    let m = bm.boundary_matrix(w, p)?;
                    m.write_triplets(BufWriter::new(File::create(dir.join(format!("d_w{w}_p{p}.txt")))?))?;
                }
            }
        }
    }
    Ok(if failed {
        EXIT_FAILED
    } else if inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}

fn h1_cmd(
    g: &GroupArgs,
    range: &str,
    omega: Option<&str>,
    fields: &str,
    generation: bool,
    letter_cap: usize,
    out: &Option<PathBuf>,
) -> Result<i32> {
    let l = Loaded::new(g)?;
    let (lo, hi) = parse_range(range)?;
    let w = omega.map(|s| l.element(s)).transpose()?;
    let fields = parse_fields(fields)?;
    let caps = Caps { states: g.state_cap, letters: letter_cap };
    let mut mon = ComponentMonoid::with_cap(l.q.clone(), g.state_cap);
    mon.extend_to(hi + 1)?;
    {
        let mut atlas = H1Atlas::new(&mon, caps);
        let mut wtr = csv::Writer::from_writer(writer(out)?);
        wtr.write_record(["weight", "canonical", "size", "h1_rank", "torsion"])?;
        for n in lo..=hi {
            let ids: Vec<usize> = (0..mon.count(n)).filter(|&x| w.map_or(true, |w| mon.monodromy(n, x) == w)).collect();
            atlas.prepare(n, &ids)?;
            for &x in &ids {
                let h = atlas.get(n, x)?.integral()?;
                let torsion: Vec<String> = h.torsion.iter().map(|t| t.to_string()).collect();
                wtr.write_record([
                    n.to_string(),
                    tuple_label(&l.q, mon.canonical(n, x)),
                    mon.size(n, x).to_string(),
                    h.rank.to_string(),
                    torsion.join(";"),
                ])?;
            }
        }
        wtr.flush()?;
    }
    if !generation {
        return Ok(EXIT_OK);
    }
    let mut inconclusive = false;
    let mut reports = Vec::new();
    for degree in 0..=1 {
        for &f in &fields {
            let r = generation_degree(&mut mon, degree, w, f, hi, caps)?;
            println!(
                "generation H_{degree} over {}: {}",
                r.field,
                r.generated_from.map_or("not within window".to_string(), |n| format!("surjective from weight {n}"))
            );
            inconclusive |= r.generated_from.is_none();
            reports.push(r);
        }
    }
    if let Some(p) = out {
        write_json(&p.with_extension("generation.json"), &reports)?;
    }
    Ok(if inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK })
}

fn stability_cmd(g: &GroupArgs, omega: &str, range: &str, fields: &str, letter_cap: usize, out: &Option<PathBuf>) -> Result<i32> {
    let l = Loaded::new(g)?;
    let w = l.element(omega)?;
    let (lo, hi) = parse_range(range)?;
    let fields = parse_fields(fields)?;
    let mut mon = ComponentMonoid::with_cap(l.q.clone(), g.state_cap);
    let report = stability_report(&mut mon, w, &fields, lo..=hi, Caps { states: g.state_cap, letters: letter_cap })?;
    let mut wtr = writer(out)?;
    serde_json::to_writer_pretty(&mut wtr, &report)?;
    writeln!(wtr)?;
    wtr.flush()?;
    drop(wtr);
    let show = |x: Option<usize>| x.map_or("none".to_string(), |n| n.to_string());
    if out.is_some() {
        for t in &report.thresholds {
            println!(
                "H_{} over {}: iso from {}, independent of a from {}, Betti periodic from {}",
                t.degree,
                t.field,
                show(t.iso_from),
                show(t.agree_from),
                show(t.periodic_from)
            );
        }
    }
    Ok(if report.conclusive() { EXIT_OK } else { EXIT_INCONCLUSIVE })
}
