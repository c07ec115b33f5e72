//! Command-line front end for `bitroot`.
//!
//! [`run`] is the whole program; the binary only forwards its arguments and
//! exit code. Exit codes: 0 success, 1 usage or parse error, 2 precision cap
//! reached, 3 internal invariant violation.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use bitroot::dyadic::DyadicRepr;
use bitroot::isolator::{RunStats, TraceEvent};
use bitroot::oracle::{mignotte, random_squarefree, real_root_count, sturm_count};
use bitroot::{r_isolate_with, CertifyMode, CoefficientOracle, IsolationResult, IsolatorConfig, RationalPoly, Tracer};

pub mod parse;

pub use parse::{parse_poly, ParseError, PolySpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECISION_CAP: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

/// Environment variable naming a directory that receives trace files.
pub const TRACE_DIR_ENV: &str = "BITROOT_TRACE_DIR";

#[derive(Parser, Debug)]
#[command(name = "bitroot", version, about = "Certified real root isolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Isolate the real roots of a polynomial expression in x.
    Isolate {
        /// Expression such as "16*sqrt(2)*x^2 - 8*x + pi/8"; read from stdin
        /// when absent or "-".
        expr: Option<String>,
        #[command(flatten)]
        common: Common,
        /// Append run statistics to text output (JSON always carries them).
        #[arg(long)]
        stats: bool,
    },
    /// Run a benchmark suite, one statistics row per instance.
    ///
    /// Suites: "mignotte:LO..HI[:K]" uses x^n - 2(2^K x - 1)^2 for every
    /// even n in the range (K defaults to 6); "random:LO..HI[:TAU]" uses one
    /// random square-free integer polynomial per degree with TAU-bit
    /// coefficients (default 8).
    Bench {
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Cross-check isolation against Sturm sequences on random inputs.
    Verify {
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value_t = 16)]
    initial_precision: i64,
    #[arg(long, default_value_t = 1 << 20)]
    max_precision: i64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the subdivision trace as JSON lines.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = CertifyArg::Seeded)]
    certify: CertifyArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CertifyArg {
    Seeded,
    FullTree,
}

impl Common {
    fn config(&self) -> IsolatorConfig {
        IsolatorConfig {
            initial_precision: self.initial_precision,
            max_precision: self.max_precision,
            certify_mode: match self.certify {
                CertifyArg::Seeded => CertifyMode::Seeded,
                CertifyArg::FullTree => CertifyMode::FullTree,
            },
        }
    }

    fn tracer(&self) -> Tracer {
        if self.trace.is_some() {
            Tracer::on()
        } else {
            Tracer::off()
        }
    }
}

/// Output document of `isolate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub degree: usize,
    pub gamma: i64,
    pub tau_hat: i64,
    pub final_rho: i64,
    pub intervals: Vec<IntervalDoc>,
    pub stats: RunStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalDoc {
    pub lo: DyadicRepr,
    pub hi: DyadicRepr,
    pub sign_left: i8,
    pub sign_right: i8,
}

impl From<&IsolationResult> for Document {
    fn from(r: &IsolationResult) -> Self {
        Document {
            degree: r.degree,
            gamma: r.gamma,
            tau_hat: r.tau_hat,
            final_rho: r.final_rho,
            intervals: r
                .intervals
                .iter()
                .map(|iv| IntervalDoc {
                    lo: iv.lo_repr(),
                    hi: iv.hi_repr(),
                    sign_left: iv.sign_left,
                    sign_right: iv.sign_right,
                })
                .collect(),
            stats: r.stats.clone(),
        }
    }
}

/// One row of `bench` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub degree: usize,
    pub roots: usize,
    pub final_rho: i64,
    pub restarts: usize,
    pub dcm_tree_size: u64,
    pub dcm_tree_depth: u32,
    pub certify_tree_size: u64,
    pub certify_tree_depth: u32,
    pub coefficient_bits: u64,
}

#[derive(Serialize)]
struct TraceLine<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    instance: Option<&'a str>,
    #[serde(flatten)]
    event: &'a TraceEvent,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn invariant(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVARIANT,
            message: message.into(),
        }
    }
}

impl From<bitroot::Error> for Failure {
    fn from(e: bitroot::Error) -> Self {
        use bitroot::Error::*;
        let code = match e {
            PrecisionCapExceeded { .. } => EXIT_PRECISION_CAP,
            Invariant(_) => EXIT_INVARIANT,
            LeadingCoefficientTooSmall | DegreeTooSmall | InvalidPrecision(_) => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Run the program on `args` (including the program name) and return the
/// exit code. `stdin` is read only when `isolate` gets no expression.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let out = match cli.command {
        Command::Isolate { expr, common, stats } => isolate(expr, &common, stats, stdin, stdout),
        Command::Bench { suite, common } => bench(&suite, &common, stdout, stderr),
        Command::Verify { count, common } => verify(count, &common, stdout, stderr),
    };
    match out {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Where a trace requested as `file` is written.
pub fn trace_destination(file: &Path) -> PathBuf {
    match std::env::var_os(TRACE_DIR_ENV) {
        Some(dir) if !dir.is_empty() => {
            let name = file.file_name().map(PathBuf::from).unwrap_or_else(|| "trace.jsonl".into());
            PathBuf::from(dir).join(name)
        }
        _ => file.to_path_buf(),
    }
}

fn write_trace(path: &Path, events: &[(Option<String>, Vec<TraceEvent>)]) -> Result<(), Failure> {
    let dest = trace_destination(path);
    let mut w = BufWriter::new(File::create(&dest).map_err(|e| Failure::usage(format!("{}: {e}", dest.display())))?);
    for (instance, evs) in events {
        for event in evs {
            let line = TraceLine {
                instance: instance.as_deref(),
                event,
            };
            serde_json::to_writer(&mut w, &line).map_err(|e| Failure::invariant(e.to_string()))?;
            w.write_all(b"\n")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn isolate(
    expr: Option<String>,
    common: &Common,
    stats: bool,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let text = match expr {
        Some(e) if e != "-" => e,
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            s.trim().to_string()
        }
    };
    let spec = parse_poly(&text).map_err(|e| Failure::usage(format!("parse error at {e}")))?;
    let mut tracer = common.tracer();
    let res = r_isolate_with(&spec.oracle(), &common.config(), &mut tracer)?;
    if let Some(path) = &common.trace {
        write_trace(path, &[(None, tracer.take())])?;
    }
    let doc = Document::from(&res);
    match common.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *stdout, &doc).map_err(|e| Failure::invariant(e.to_string()))?;
            writeln!(stdout)?;
        }
        Format::Text => write_text(stdout, &res, stats)?,
    }
    Ok(())
}

fn sign_char(s: i8) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

fn write_text(w: &mut dyn Write, res: &IsolationResult, stats: bool) -> std::io::Result<()> {
    writeln!(
        w,
        "degree {}, {} real root(s), final precision {} bits",
        res.degree,
        res.intervals.len(),
        res.final_rho
    )?;
    for iv in &res.intervals {
        let lo = iv.lo_dyadic.to_rational();
        let hi = iv.hi_dyadic.to_rational();
        writeln!(
            w,
            "({lo}, {hi})  mid {:.12}  signs {}{}",
            (iv.lo_dyadic.to_f64() + iv.hi_dyadic.to_f64()) / 2.0,
            sign_char(iv.sign_left),
            sign_char(iv.sign_right)
        )?;
    }
    if stats {
        let s = &res.stats;
        writeln!(w, "gamma {}  tau_hat {}", res.gamma, res.tau_hat)?;
        writeln!(w, "attempts {}  restarts {}", s.attempts.len(), s.restarts)?;
        writeln!(w, "dcm tree size {}  depth {}", s.dcm_tree_size, s.dcm_tree_depth)?;
        writeln!(w, "certify tree size {}  depth {}", s.certify_tree_size, s.certify_tree_depth)?;
        writeln!(w, "coefficient bits {}", s.coefficient_bits)?;
    }
    Ok(())
}

/// Instances named by a suite string.
pub fn suite_instances(suite: &str, seed: u64) -> Result<Vec<(String, RationalPoly)>, String> {
    let (kind, rest) = suite.split_once(':').ok_or("suite must look like KIND:LO..HI")?;
    let mut parts = rest.split(':');
    let range = parts.next().unwrap_or_default();
    let extra = parts.next();
    if parts.next().is_some() {
        return Err(format!("too many fields in suite '{suite}'"));
    }
    let (lo, hi) = range.split_once("..").ok_or("range must look like LO..HI")?;
    let lo: usize = lo.parse().map_err(|_| format!("bad lower degree '{lo}'"))?;
    let hi: usize = hi.parse().map_err(|_| format!("bad upper degree '{hi}'"))?;
    if lo > hi {
        return Err("empty degree range".into());
    }
    let extra: Option<u32> = extra
        .map(|e| e.parse().map_err(|_| format!("bad parameter '{e}'")))
        .transpose()?;
    match kind {
        "mignotte" => {
            let k = extra.unwrap_or(6);
            if !(1..=60).contains(&k) {
                return Err("mignotte parameter must be in 1..=60".into());
            }
            let out: Vec<_> = (lo.max(4)..=hi)
                .filter(|n| n % 2 == 0)
                .map(|n| (format!("mignotte(n={n},a=2^{k})"), mignotte(n, 1i64 << k)))
                .collect();
            if out.is_empty() {
                return Err("mignotte needs an even degree of at least 4 in range".into());
            }
            Ok(out)
        }
        "random" => {
            let tau = extra.unwrap_or(8);
            if !(1..=62).contains(&tau) {
                return Err("random coefficient bits must be in 1..=62".into());
            }
            Ok((lo.max(2)..=hi)
                .map(|n| {
                    let s = seed.wrapping_mul(1_000_003).wrapping_add(n as u64);
                    (format!("random(n={n},tau={tau},seed={s})"), random_squarefree(n, tau, s))
                })
                .collect())
        }
        other => Err(format!("unknown suite '{other}'")),
    }
}

fn bench(suite: &str, common: &Common, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let instances = suite_instances(suite, common.seed).map_err(Failure::usage)?;
    let cfg = common.config();
    let mut traces = Vec::new();
    let start = Instant::now();
    if common.format == Format::Text {
        writeln!(
            stdout,
            "instance\tdegree\troots\tfinal_rho\trestarts\tdcm_size\tdcm_depth\tcertify_size\tcertify_depth\tcoefficient_bits"
        )?;
    }
    for (name, p) in &instances {
        let mut tracer = common.tracer();
        let res = r_isolate_with(&CoefficientOracle::from_rational_poly(p), &cfg, &mut tracer)?;
        if common.trace.is_some() {
            traces.push((Some(name.clone()), tracer.take()));
        }
        let s = &res.stats;
        let row = BenchRow {
            instance: name.clone(),
            degree: res.degree,
            roots: res.intervals.len(),
            final_rho: res.final_rho,
            restarts: s.restarts,
            dcm_tree_size: s.dcm_tree_size,
            dcm_tree_depth: s.dcm_tree_depth,
            certify_tree_size: s.certify_tree_size,
            certify_tree_depth: s.certify_tree_depth,
            coefficient_bits: s.coefficient_bits,
        };
        match common.format {
            Format::Json => {
                serde_json::to_writer(&mut *stdout, &row).map_err(|e| Failure::invariant(e.to_string()))?;
                writeln!(stdout)?;
            }
            Format::Text => writeln!(
                stdout,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                row.instance,
                row.degree,
                row.roots,
                row.final_rho,
                row.restarts,
                row.dcm_tree_size,
                row.dcm_tree_depth,
                row.certify_tree_size,
                row.certify_tree_depth,
                row.coefficient_bits
            )?,
        }
    }
    if let Some(path) = &common.trace {
        write_trace(path, &traces)?;
    }
    writeln!(stderr, "{} instances in {:.3?}", instances.len(), start.elapsed())?;
    Ok(())
}

/// Isolation of `p` agrees with its Sturm sequence.
pub fn check_result(p: &RationalPoly, res: &IsolationResult) -> Result<(), String> {
    let total = real_root_count(p);
    if res.intervals.len() != total {
        return Err(format!("{} intervals for {total} real roots", res.intervals.len()));
    }
    for (k, iv) in res.intervals.iter().enumerate() {
        let lo = iv.lo_dyadic.to_rational();
        let hi = iv.hi_dyadic.to_rational();
        match sturm_count(p, &lo, &hi) {
            Ok(1) => {}
            other => return Err(format!("interval {k} holds {other:?} roots")),
        }
        let sl = sign_of(&p.eval(&lo));
        let sr = sign_of(&p.eval(&hi));
        if sl != iv.sign_left || sr != iv.sign_right {
            return Err(format!("interval {k} reports wrong endpoint signs"));
        }
        if k > 0 && res.intervals[k - 1].hi_dyadic > iv.lo_dyadic {
            return Err(format!("intervals {} and {k} overlap", k - 1));
        }
    }
    Ok(())
}

fn sign_of(q: &bitroot::Rational) -> i8 {
    use num_traits::Signed;
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

#[derive(Serialize)]
struct VerifySummary {
    instances: u64,
    roots: usize,
    failures: Vec<String>,
}

fn verify(count: u64, common: &Common, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let cfg = common.config();
    let mut roots = 0;
    let mut failures = Vec::new();
    let mut traces = Vec::new();
    for i in 0..count {
        let s = common.seed.wrapping_add(i);
        let n = 2 + (s % 11) as usize;
        let tau = 1 + (s.wrapping_mul(7) % 16) as u32;
        let p = random_squarefree(n, tau, s);
        let mut tracer = common.tracer();
        let res = r_isolate_with(&CoefficientOracle::from_rational_poly(&p), &cfg, &mut tracer)?;
        if common.trace.is_some() {
            traces.push((Some(format!("verify(seed={s})")), tracer.take()));
        }
        roots += res.intervals.len();
        if let Err(e) = check_result(&p, &res) {
            failures.push(format!("seed {s}: {e}"));
        }
    }
    if let Some(path) = &common.trace {
        write_trace(path, &traces)?;
    }
    match common.format {
        Format::Json => {
            let summary = VerifySummary {
                instances: count,
                roots,
                failures: failures.clone(),
            };
            serde_json::to_writer_pretty(&mut *stdout, &summary).map_err(|e| Failure::invariant(e.to_string()))?;
            writeln!(stdout)?;
        }
        Format::Text => {
            writeln!(stdout, "{count} instances, {roots} roots, {} failures", failures.len())?;
            for f in &failures {
                writeln!(stderr, "{f}")?;
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::invariant(format!("{} instances disagree with the Sturm count", failures.len())))
    }
}
