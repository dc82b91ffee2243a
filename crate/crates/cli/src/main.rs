//! `gkf`: enumerate, certify and cross-check the geodesic family `γ_{p,q}`
//! of a cusp.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use geoknot::batch::Evaluation;
use geoknot::cusp::CuspData;
use geoknot::io::{self, ReadCuspError, ResultRow};
use geoknot::oracle::{default_box, oracle_lattice_box, oracle_sampled_torus};
use geoknot::simplicity::{lattice_scan, long_arc_vector, long_arc_nonsimple, NEAR_BAND_FACTOR};
use geoknot::{
    build_record, certify_q0, evaluate_window, verify_certificate, CheckOptions, CertifyError, Execution,
    VerdictCounts, Window,
};

#[derive(Debug, Parser)]
#[command(name = "gkf", version, about = "Simple closed geodesics through a cusp: enumeration and certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a cusp file.
    Validate(Common),
    /// Evaluate every member of the window and write the results table (CSV).
    Enumerate(Common),
    /// Certify the one-parameter subfamily and write the certificate (TOML).
    Certify(Common),
    /// Compare the lattice test with the box and sampled-torus oracles.
    OracleCheck(Common),
    /// Draw the projected long arcs of the window (SVG).
    Plot(Common),
    /// Re-check a certificate from scratch.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "0:0", allow_hyphen_values = true)]
    p_range: Range,
    #[arg(long, default_value = "0:0", allow_hyphen_values = true)]
    q_range: Range,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Lattice range used for the short-arc radius.
    #[arg(long, default_value_t = 4)]
    epsilon_range: u32,
    #[arg(long, default_value_t = 500)]
    scan_limit: i64,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Decide the lattice test in exact rational arithmetic.
    #[arg(long)]
    exact: bool,
}

#[derive(Debug, Clone, Copy)]
struct Range(i64, i64);

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected MIN:MAX, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Range(parse(lo)?, parse(hi)?))
    }
}

enum Failure {
    Input(anyhow::Error),
    Io(anyhow::Error),
    Disagreement(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Io(_) => 2,
            Failure::Disagreement(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn io_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Io(e.into())
}

struct Setup {
    cusp: CuspData,
    window: Window,
    opts: CheckOptions,
}

impl Common {
    fn setup(&self) -> Result<Setup, Failure> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(input(anyhow!("--tol must be positive, got {}", self.tol)));
        }
        let parsed = match io::read_cusp_file(&self.input) {
            Ok(p) => p,
            Err(ReadCuspError::Io(e)) => return Err(io_err(anyhow!("{e}"))),
            Err(ReadCuspError::Parse(e)) => {
                return Err(input(anyhow!("{}: {} ({e})", self.input.display(), e.code())))
            }
        };
        for w in &parsed.warnings {
            eprintln!("warning: {w}");
        }
        let Range(p_min, p_max) = self.p_range;
        let Range(q_min, q_max) = self.q_range;
        let window = Window::new(p_min, p_max, q_min, q_max).map_err(input)?;
        let epsilon = parsed.cusp.nearest_lift_gap(self.epsilon_range);
        let opts = CheckOptions::new(self.tol, epsilon).exact(self.exact);
        Ok(Setup { cusp: parsed.cusp, window, opts })
    }

    fn emit(&self, bytes: &[u8]) -> Outcome {
        match &self.out {
            Some(path) => write_file(path, bytes),
            None => std::io::stdout().write_all(bytes).map_err(io_err),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display())).map_err(io_err)
}

fn summarize(name: &str, evals: &[Evaluation]) {
    let n = VerdictCounts::tally(evals);
    eprintln!(
        "{name}: {} members; Simple {}, LongArcNonsimple {}, ShortArcUnverified {}, AxisTooLow {}; {} near threshold",
        n.total(),
        n.simple,
        n.long_arc_nonsimple,
        n.short_arc_unverified,
        n.axis_too_low,
        n.near_threshold
    );
    for e in evals.iter().filter(|e| e.assessment.near_threshold) {
        eprintln!("warning: {} has a lattice point within {NEAR_BAND_FACTOR}·tol of its long arc", e.record.index);
    }
}

fn validate(args: &Common) -> Outcome {
    let Setup { cusp, opts, .. } = args.setup()?;
    let area = cusp.cell_area();
    let mut report = String::new();
    report.push_str(&format!("name: {}\n", cusp.name));
    report.push_str(&format!("t_alpha: {}\nt_beta: {}\n", cusp.t_alpha, cusp.t_beta));
    report.push_str(&format!("offset: ({}, {})\nc: {}\n", cusp.x0, cusp.y0, cusp.c));
    report.push_str(&format!("cell area: {area}\n"));
    report.push_str(&format!("epsilon (range {}): {}\n", args.epsilon_range, opts.epsilon));
    report.push_str("ok\n");
    match &args.out {
        Some(path) => write_file(path, io::write_cusp_json(&cusp, None).as_bytes()),
        None => std::io::stdout().write_all(report.as_bytes()).map_err(io_err),
    }
}

fn enumerate(args: &Common) -> Outcome {
    let Setup { cusp, window, opts } = args.setup()?;
    let evals = evaluate_window(&cusp, &window, &opts, Execution::default());
    summarize(&cusp.name, &evals);
    let rows: Vec<ResultRow> = evals.iter().map(|e| ResultRow::from_evaluation(e, opts.epsilon)).collect();
    let mut buf = Vec::new();
    io::write_results_to(&rows, &mut buf).map_err(io_err)?;
    args.emit(&buf)
}

fn certify(args: &Common) -> Outcome {
    let Setup { cusp, opts, .. } = args.setup()?;
    let mut cert = match certify_q0(&cusp, args.scan_limit, &opts, args.samples, Execution::default()) {
        Ok(c) => c,
        Err(e @ CertifyError::ScanInsufficient { .. }) => return Err(input(e)),
    };
    cert.epsilon_range = Some(args.epsilon_range);
    eprintln!(
        "{}: P = {} (scan limit {}, delta {}, coordinate {:?})",
        cusp.name, cert.p_threshold, cert.scan_limit, cert.delta, cert.used_coordinate
    );
    args.emit(io::certificate_to_string(&cert).as_bytes())
}

fn oracle_check(args: &Common) -> Outcome {
    let Setup { cusp, window, opts } = args.setup()?;
    let tol = opts.tol;
    let lines = geoknot::batch::map_indices(&window.indices(), Execution::default(), |idx| {
        let record = build_record(&cusp, idx);
        let Ok(v) = long_arc_vector(&record, &cusp) else {
            return (0, 0, None);
        };
        let scan = long_arc_nonsimple(v, tol).is_some();
        let boxed = oracle_lattice_box(v, default_box(v), tol).is_some();
        let torus = oracle_sampled_torus(&record, &cusp, args.samples, tol).unwrap_or(false);
        if scan == boxed && scan == torus {
            return (1, 0, None);
        }
        let closest = lattice_scan(v, tol).closest.map(|w| w.residual);
        let banded = closest.is_some_and(|r| (tol / NEAR_BAND_FACTOR..tol * NEAR_BAND_FACTOR).contains(&r));
        let line = format!(
            "{} {idx}: scan={scan} box={boxed} torus={torus} closest_residual={closest:?} v=({}, {})\n  record: {record:?}\n",
            if banded { "band" } else { "DISAGREE" },
            v.x,
            v.y
        );
        (1, usize::from(!banded), Some(line))
    });
    let checked: usize = lines.iter().map(|l| l.0).sum();
    let disagreements: usize = lines.iter().map(|l| l.1).sum();
    let mut report = format!(
        "{}: {} indices, {checked} with arcs, {disagreements} disagreements outside the warning band\n",
        cusp.name,
        window.len()
    );
    for (_, _, line) in lines.iter() {
        if let Some(l) = line {
            report.push_str(l);
        }
    }
    eprint!("{}", report.lines().next().map(|l| format!("{l}\n")).unwrap_or_default());
    args.emit(report.as_bytes())?;
    if disagreements > 0 {
        return Err(Failure::Disagreement(disagreements));
    }
    Ok(())
}

fn plot(args: &Common) -> Outcome {
    let Setup { cusp, window, opts } = args.setup()?;
    let evals = evaluate_window(&cusp, &window, &opts, Execution::default());
    summarize(&cusp.name, &evals);
    args.emit(geoknot::plot::render_svg(&cusp, &evals).as_bytes())
}

fn verify(path: &Path) -> Outcome {
    let cert = match io::read_certificate(path) {
        Ok(c) => c,
        Err(e @ io::IoError::Io { .. }) => return Err(io_err(anyhow!("{e}"))),
        Err(e) => return Err(input(e)),
    };
    verify_certificate(&cert).map_err(|e| input(anyhow!("certificate rejected: {e}")))?;
    println!("certificate accepted: P = {}, {} checks", cert.p_threshold, cert.checks.len());
    Ok(())
}

fn configure_threads() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("GKF_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match &cli.command {
        Command::Validate(a) => validate(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Certify(a) => certify(a),
        Command::OracleCheck(a) => oracle_check(a),
        Command::Plot(a) => plot(a),
        Command::Verify { certificate } => verify(certificate),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(e) | Failure::Io(e) => eprintln!("error: {e:#}"),
                Failure::Disagreement(n) => eprintln!("error: {n} oracle disagreements"),
            }
            ExitCode::from(f.code())
        }
    }
}
