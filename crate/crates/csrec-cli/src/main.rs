use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use csrec::manifest::ManifoldInput;
use csrec::numeric::{ComplexAP, Precision};
use csrec::repvar::{
    enumerate_variety, riley_polynomial, riley_roots, riley_word, RepPoint, TwistSurgerySpec, TwoBridgeSpec,
};
use csrec::seifert::SeifertSpec;
use csrec::verify::{
    check_fig8, check_homology, check_seifert, cross_check, CrossReport, HomologyOptions, VerificationReport,
    DEFAULT_TOL, REPORT_DIGITS,
};
use csrec::Error;

#[derive(Parser)]
#[command(name = "csrec", version, about = "Chern-Simons reciprocity checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Print the result as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Print the per-row table as CSV.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Working precision in decimal digits.
    #[arg(long, global = true)]
    digits: Option<u32>,
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact check for a Seifert manifold with three singular fibres.
    Seifert {
        /// "p1/q1,p2/q2,p3/q3"
        #[arg(long)]
        fibers: String,
    },
    /// Saddle-point check for p/1 surgery on the figure-eight knot.
    Fig8 {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
    },
    /// Character variety of p/q surgery on the twist knot K_n.
    Twist {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// Riley polynomial of a two-bridge knot.
    Riley {
        /// "p/q"
        #[arg(long = "two-bridge")]
        two_bridge: String,
    },
    /// Extended-Bloch-group pairing on a manifold JSON file.
    Pair {
        #[arg(long)]
        input: PathBuf,
    },
    /// Saddle values against the pairing for the figure-eight surgery.
    Cross {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long)]
        input: PathBuf,
    },
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(format!("{e:#}"))
    }
}

/// Outcome of a successful run.
enum Verdict {
    Pass,
    Fail,
    Numerical,
}

#[derive(Serialize)]
struct TwistOutput {
    spec: TwistSurgerySpec,
    points: Vec<RepPoint>,
}

#[derive(Serialize)]
struct RileyOutput {
    p: i64,
    q: i64,
    word: String,
    /// Integer coefficients, constant term first.
    coefficients: Vec<String>,
    #[serde(serialize_with = "ser_roots")]
    roots: Vec<ComplexAP>,
}

fn ser_roots<S: serde::Serializer>(v: &[ComplexAP], s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct W<'a>(#[serde(with = "csrec::serde_ap")] &'a ComplexAP);
    s.collect_seq(v.iter().map(W))
}

fn precision(g: &Global) -> Result<Precision, Failure> {
    match g.digits {
        Some(d) => Ok(Precision::from_digits(d)?),
        None => Ok(Precision::default()),
    }
}

fn read_input(path: &PathBuf) -> Result<ManifoldInput, Failure> {
    let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ManifoldInput::from_json(&s)?)
}

fn csv_out(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

fn report_verdict(r: &VerificationReport) -> Verdict {
    if r.pass {
        Verdict::Pass
    } else if r.has_numerical_failure() {
        Verdict::Numerical
    } else {
        Verdict::Fail
    }
}

fn emit_report(g: &Global, r: &VerificationReport) -> anyhow::Result<()> {
    if g.json {
        println!("{}", r.to_json());
        return Ok(());
    }
    let keys: Vec<String> = r
        .rows
        .first()
        .map(|row| row.diagnostics.keys().cloned().collect())
        .unwrap_or_default();
    if g.csv {
        let mut header = vec!["id", "re", "im"];
        header.extend(keys.iter().map(String::as_str));
        return csv_out(
            &header,
            r.rows.iter().map(|row| {
                let mut rec = vec![row.id.clone(), row.re.clone(), row.im.clone()];
                rec.extend(keys.iter().map(|k| row.diagnostics.get(k).cloned().unwrap_or_default()));
                rec
            }),
        );
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "{} [{:?}]", r.manifold, r.method)?;
    for row in &r.rows {
        writeln!(
            out,
            "  {:<14} {} = {}",
            row.id,
            r.quantity,
            complex_str(&row.re, &row.im)
        )?;
        for (k, v) in &row.diagnostics {
            writeln!(out, "      {k} = {v}")?;
        }
    }
    for f in &r.failures {
        writeln!(out, "  {:<14} error: {}", f.id, f.error)?;
    }
    writeln!(out, "sum      = {}", complex_str(&r.sum_re, &r.sum_im))?;
    writeln!(out, "{} * sum = {}", r.scale, complex_str(&r.scaled_re, &r.scaled_im))?;
    writeln!(out, "residue  = {}", r.residue)?;
    match r.digits {
        Some(d) => writeln!(
            out,
            "distance = {:e}, |Im| = {:e}, tolerance {:e}, {d} digits",
            r.distance, r.imag, r.tolerance
        )?,
        None => writeln!(out, "exact")?,
    }
    writeln!(out, "{}", if r.pass { "PASS" } else { "FAIL" })?;
    Ok(())
}

fn complex_str(re: &str, im: &str) -> String {
    match (im, im.strip_prefix('-')) {
        ("0", _) => re.to_string(),
        (_, Some(rest)) => format!("{re} - {rest}i"),
        _ => format!("{re} + {im}i"),
    }
}

fn emit_cross(g: &Global, r: &CrossReport) -> anyhow::Result<()> {
    if g.json {
        println!("{}", r.to_json());
        return Ok(());
    }
    if g.csv {
        return csv_out(
            &["saddle", "rep", "saddle_value", "homology_value", "discrepancy"],
            r.pairs.iter().map(|p| {
                vec![
                    p.saddle.clone(),
                    p.rep.clone(),
                    p.saddle_value.clone(),
                    p.homology_value.clone(),
                    format!("{:e}", p.discrepancy),
                ]
            }),
        );
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "{} against figure-eight {}/1 saddle points", r.manifold, r.p)?;
    for p in &r.pairs {
        writeln!(out, "  {:<4} <-> {:<8} T/2pi^2 = {}", p.saddle, p.rep, p.saddle_value)?;
        writeln!(
            out,
            "  {:<4}     {:<8} 2CS     = {}  ({:e})",
            "", "", p.homology_value, p.discrepancy
        )?;
    }
    for s in &r.unmatched_saddle {
        writeln!(out, "  unmatched saddle point {s}")?;
    }
    for s in &r.unmatched_reps {
        writeln!(out, "  unmatched representation {s}")?;
    }
    for f in &r.failures {
        writeln!(out, "  {:<8} error: {}", f.id, f.error)?;
    }
    writeln!(
        out,
        "max discrepancy = {:e}, tolerance {:e}",
        r.max_discrepancy, r.tolerance
    )?;
    writeln!(out, "{}", if r.pass { "PASS" } else { "FAIL" })?;
    Ok(())
}

fn emit_twist(g: &Global, t: &TwistOutput) -> anyhow::Result<()> {
    if g.json {
        println!("{}", serde_json::to_string_pretty(t)?);
        return Ok(());
    }
    let fmt = |z: &ComplexAP| z.to_string_digits(REPORT_DIGITS);
    let partner = |p: &RepPoint| p.partner.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
    if g.csv {
        return csv_out(
            &["index", "m_re", "m_im", "z_re", "z_im", "residual", "partner"],
            t.points.iter().enumerate().map(|(i, p)| {
                let (mr, mi) = p.m.to_decimal(REPORT_DIGITS);
                let (zr, zi) = p.z.to_decimal(REPORT_DIGITS);
                vec![
                    i.to_string(),
                    mr,
                    mi,
                    zr,
                    zi,
                    format!("{:e}", p.residuals.0.max(p.residuals.1)),
                    partner(p),
                ]
            }),
        );
    }
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{}/{} surgery on the twist knot K_{}: {} irreducible orbits (m ~ 1/m)",
        t.spec.p,
        t.spec.q,
        t.spec.n,
        t.points.len()
    )?;
    for (i, p) in t.points.iter().enumerate() {
        let tag = match p.partner {
            Some(k) if k == i => "self-conjugate".to_string(),
            Some(k) => format!("conjugate of {k}"),
            None => "no conjugate found".to_string(),
        };
        writeln!(out, "  [{i}] m = {}", fmt(&p.m))?;
        writeln!(out, "      z = {}", fmt(&p.z))?;
        writeln!(out, "      residual {:e}, {tag}", p.residuals.0.max(p.residuals.1))?;
    }
    Ok(())
}

fn emit_riley(g: &Global, r: &RileyOutput) -> anyhow::Result<()> {
    if g.json {
        println!("{}", serde_json::to_string_pretty(r)?);
        return Ok(());
    }
    if g.csv {
        return csv_out(
            &["index", "re", "im"],
            r.roots.iter().enumerate().map(|(i, z)| {
                let (re, im) = z.to_decimal(REPORT_DIGITS);
                vec![i.to_string(), re, im]
            }),
        );
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "two-bridge knot b({}, {}), word {}", r.p, r.q, r.word)?;
    writeln!(out, "coefficients (constant first): {}", r.coefficients.join(", "))?;
    for (i, z) in r.roots.iter().enumerate() {
        writeln!(out, "  [{i}] {}", z.to_string_digits(REPORT_DIGITS))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Verdict, Failure> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
    }
    let prec = precision(g)?;
    let hom = || HomologyOptions {
        tol: g.tol,
        prec,
        ..HomologyOptions::default()
    };
    match &cli.cmd {
        Cmd::Seifert { fibers } => {
            let r = check_seifert(&SeifertSpec::parse(fibers)?);
            emit_report(g, &r)?;
            Ok(report_verdict(&r))
        }
        Cmd::Fig8 { p } => {
            let r = check_fig8(*p, prec, g.tol)?;
            emit_report(g, &r)?;
            Ok(report_verdict(&r))
        }
        Cmd::Pair { input } => {
            let r = check_homology(&read_input(input)?, &hom())?;
            emit_report(g, &r)?;
            Ok(report_verdict(&r))
        }
        Cmd::Cross { p, input } => {
            let r = cross_check(*p, &read_input(input)?, &hom())?;
            emit_cross(g, &r)?;
            Ok(if r.pass {
                Verdict::Pass
            } else if r.failures.iter().any(|f| f.numerical) {
                Verdict::Numerical
            } else {
                Verdict::Fail
            })
        }
        Cmd::Twist { n, p, q } => {
            let spec = TwistSurgerySpec::new(*n, *p, *q)?.with_prec(prec);
            let points = enumerate_variety(&spec)?;
            emit_twist(g, &TwistOutput { spec, points })?;
            Ok(Verdict::Pass)
        }
        Cmd::Riley { two_bridge } => {
            let spec = TwoBridgeSpec::parse(two_bridge)?;
            let poly = riley_polynomial(&spec)?;
            let out = RileyOutput {
                p: spec.p,
                q: spec.q,
                word: csrec::homology::format_word(&riley_word(&spec)),
                coefficients: poly.coeffs().iter().map(|c| c.to_string()).collect(),
                roots: riley_roots(&spec, prec)?,
            };
            emit_riley(g, &out)?;
            Ok(Verdict::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Ok(Verdict::Numerical) => ExitCode::from(3),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
