use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hyperrect::adder_mac::{default_rho_grid, feasibility_scan, DEFAULT_RHO_POINTS};
use hyperrect::exponents::{
    compare_bounds, sphere_exponent, thm1_expansion, thm2_expansion, BoundReport, CenterMode,
    SphereExponent,
};
use hyperrect::hypercontractivity::{solve_q, verify_hc_with, HcCertificate, HcSolution};
use hyperrect::oracle::{
    log2_rational, pair_distance_profile, rectangle_prob, rectangle_prob_exact, CubeSet,
    ExactCorrelation,
};
use hyperrect::sweeps::{
    convergence_study, figure_phi_surface, run_sweep, Axis, Operation, ResultTable, SweepSpec,
};
use hyperrect::verify::{run_suites, Suite, VerifyReport};
use hyperrect::{Correlation, ExponentBound, Rate};

const EXIT_PROPERTY_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "hyperrect",
    version,
    about = "Rectangle probabilities of correlated binary strings"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sphere exponent and its optimizing normalized distance.
    Exponent(ExponentArgs),
    /// All closed-form bounds at one point.
    Bound(BoundArgs),
    /// Exact rectangle probability of two set files.
    Oracle(OracleArgs),
    /// Solve for q(t) and optionally check the inequality on a set file.
    Hc(HcArgs),
    /// Evaluate one operation on a grid and emit CSV.
    Sweep(SweepArgs),
    /// Emit figure data as CSV.
    Figure(FigureArgs),
    /// Zero-error adder-MAC feasibility frontier.
    Scan(ScanArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ExponentArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    rho: f64,
    #[arg(long, value_enum, default_value = "same")]
    centers: Centers,
}

#[derive(Clone, Copy, ValueEnum)]
enum Centers {
    Same,
    Opposite,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    rho: f64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    set_a: PathBuf,
    #[arg(long)]
    set_b: PathBuf,
    /// Decimal, or `p/q` for an exact rational.
    #[arg(long)]
    rho: String,
    /// Evaluate in exact rational arithmetic.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct HcArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    q0: f64,
    /// Noise time; `rho = e^{-t}` for the operator in the inequality.
    #[arg(long, conflicts_with = "rho", required_unless_present = "rho")]
    t: Option<f64>,
    /// Overall correlation; sets `t = -ln(rho) / 2`.
    #[arg(long)]
    rho: Option<f64>,
    /// Set file to check the inequality on.
    #[arg(long)]
    set: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Operation name, e.g. sphere-same, thm1, psi.
    #[arg(long, required_unless_present = "spec")]
    op: Option<String>,
    /// Axis `name=start:stop:count[:lin|log]`; repeat per input.
    #[arg(long = "axis")]
    axes: Vec<String>,
    /// JSON sweep specification instead of --op/--axis.
    #[arg(long, conflicts_with_all = ["op", "axes"])]
    spec: Option<PathBuf>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    #[command(subcommand)]
    which: Figure,
}

#[derive(Subcommand)]
enum Figure {
    /// `phi(x, y)` on a uniform grid over the unit square.
    Phi {
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-n sphere exponents against the asymptotic value.
    Convergence {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        rho: f64,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_value = "256,1024,4096")]
        n: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Rate grid is `i / steps` for `i = 1 .. steps - 1`.
    #[arg(long, default_value_t = 40)]
    steps: usize,
    #[arg(long, default_value_t = DEFAULT_RHO_POINTS)]
    rho_points: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// `exponent` output.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ExponentOutput {
    alpha: f64,
    beta: f64,
    rho: f64,
    centers: String,
    #[serde(flatten)]
    result: SphereExponent,
}

/// `bound` output.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct BoundOutput {
    #[serde(flatten)]
    report: BoundReport,
    thm1: Option<ExponentBound>,
    thm2: ExponentBound,
}

/// `oracle` output.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct OracleOutput {
    n: usize,
    size_a: usize,
    size_b: usize,
    rho: String,
    #[serde(with = "hyperrect::sentinel")]
    log2_p: f64,
    #[serde(with = "hyperrect::sentinel")]
    exponent: f64,
    /// Exact probability as `p/q`, in exact mode.
    probability: Option<String>,
}

/// `hc` output.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct HcOutput {
    solution: HcSolution,
    /// `2 (1 - alpha) / q`, the exponent bound when `q0 = 2`.
    psi: Option<f64>,
    certificate: Option<HcCertificate>,
}

/// `scan` output row.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ScanRow {
    r1: f64,
    r2_max: Option<f64>,
}

enum Failure {
    Usage(String),
    Property,
}

impl From<hyperrect::Error> for Failure {
    fn from(e: hyperrect::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn emit_table(table: &ResultTable, out: Option<&PathBuf>) -> Outcome {
    match out {
        Some(path) => table.write_csv(path)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(table.to_csv().as_bytes())
                .map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    Ok(())
}

fn exponent(args: ExponentArgs, json: bool) -> Outcome {
    let (mode, name) = match args.centers {
        Centers::Same => (CenterMode::Same, "same"),
        Centers::Opposite => (CenterMode::Opposite, "opposite"),
    };
    let result = sphere_exponent(
        Rate::new(args.alpha)?,
        Rate::new(args.beta)?,
        Correlation::new(args.rho)?,
        mode,
    )?;
    if json {
        return emit_json(&ExponentOutput {
            alpha: args.alpha,
            beta: args.beta,
            rho: args.rho,
            centers: name.into(),
            result,
        });
    }
    println!(
        "exponent {}",
        hyperrect::sentinel::render(result.bound.value)
    );
    println!("d_star {}", result.d_star);
    Ok(())
}

fn bound(args: BoundArgs, json: bool) -> Outcome {
    let (a, b, r) = (
        Rate::new(args.alpha)?,
        Rate::new(args.beta)?,
        Correlation::new(args.rho)?,
    );
    let report = compare_bounds(a, b, r)?;
    let thm1 = (a == b).then(|| thm1_expansion(a, r.get())).transpose()?;
    let out = BoundOutput {
        report,
        thm1,
        thm2: thm2_expansion(a, b, r),
    };
    if json {
        return emit_json(&out);
    }
    let line = |label: &str, e: &ExponentBound| {
        let regime = if e.in_regime { "" } else { " (outside regime)" };
        println!("{label} {}{regime}", hyperrect::sentinel::render(e.value));
    };
    for e in &out.report.lower_bounds {
        line(e.kind.name(), e);
    }
    for e in out
        .report
        .hct_upper
        .iter()
        .chain(&out.thm1)
        .chain([&out.thm2])
    {
        line(e.kind.name(), e);
    }
    println!("tightest {}", out.report.tightest.name());
    if let Some(t) = out.report.avgdist_threshold {
        println!("threshold {t}");
    }
    println!("avgdist_beats_morss {}", out.report.avgdist_beats_morss);
    Ok(())
}

fn oracle(args: OracleArgs, json: bool) -> Outcome {
    let a = CubeSet::read(&args.set_a).map_err(|e| file_error(&args.set_a, e))?;
    let b = CubeSet::read(&args.set_b).map_err(|e| file_error(&args.set_b, e))?;
    for (path, s) in [(&args.set_a, &a), (&args.set_b, &b)] {
        if s.dim() != args.n {
            return Err(Failure::Usage(format!(
                "{}: set dimension {} differs from --n {}",
                path.display(),
                s.dim(),
                args.n
            )));
        }
    }
    let profile = pair_distance_profile(&a, &b)?;
    let (log2_p, probability) = if args.exact {
        let rho: ExactCorrelation = args.rho.parse()?;
        let p = rectangle_prob_exact(&profile, &rho);
        (log2_rational(&p).get(), Some(p.to_string()))
    } else {
        let rho: f64 = args.rho.parse().map_err(|_| {
            Failure::Usage(format!(
                "--rho {:?} is not a number; use --exact for p/q",
                args.rho
            ))
        })?;
        (rectangle_prob(&profile, Correlation::new(rho)?).get(), None)
    };
    let out = OracleOutput {
        n: args.n,
        size_a: a.len(),
        size_b: b.len(),
        rho: args.rho,
        log2_p,
        exponent: -log2_p / args.n as f64,
        probability,
    };
    if json {
        return emit_json(&out);
    }
    println!("log2_p {}", hyperrect::sentinel::render(out.log2_p));
    println!("exponent {}", hyperrect::sentinel::render(out.exponent));
    if let Some(p) = &out.probability {
        println!("probability {p}");
    }
    Ok(())
}

fn file_error(path: &std::path::Path, e: hyperrect::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn hc(args: HcArgs, json: bool) -> Outcome {
    let t = match (args.t, args.rho) {
        (Some(t), _) => t,
        (None, Some(rho)) if rho > 0.0 && rho <= 1.0 => -rho.ln() / 2.0,
        (None, Some(rho)) => return Err(Failure::Usage(format!("--rho {rho} outside (0, 1]"))),
        (None, None) => unreachable!("clap requires one of --t, --rho"),
    };
    let alpha = Rate::new(args.alpha)?;
    let solution = solve_q(alpha, args.q0, t)?;
    let certificate = match &args.set {
        Some(path) => {
            let set = CubeSet::read(path).map_err(|e| file_error(path, e))?;
            Some(verify_hc_with(&set, &solution)?)
        }
        None => None,
    };
    let out = HcOutput {
        psi: (args.q0 == 2.0).then(|| 2.0 * (1.0 - args.alpha) / solution.q),
        solution,
        certificate,
    };
    if json {
        emit_json(&out)?;
    } else {
        let s = &out.solution;
        println!("q {}", s.q);
        println!("a {}", s.a);
        println!("b {}", s.b);
        println!("residual {}", s.residual);
        println!("steps {}", s.steps);
        if s.extra_roots > 0 {
            println!("extra_roots {}", s.extra_roots);
        }
        if let Some(p) = out.psi {
            println!("psi {p}");
        }
        if let Some(c) = &out.certificate {
            println!("lhs {}", c.lhs);
            println!("rhs {}", c.rhs);
            println!("holds {}", c.passed);
        }
    }
    match out.certificate {
        Some(c) if !c.passed => Err(Failure::Property),
        _ => Ok(()),
    }
}

fn sweep(args: SweepArgs) -> Outcome {
    let mut spec = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<SweepSpec>(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => {
            let op: Operation = args.op.as_deref().unwrap_or_default().parse()?;
            let axes = args
                .axes
                .iter()
                .map(|a| a.parse::<Axis>())
                .collect::<hyperrect::Result<Vec<_>>>()?;
            SweepSpec::new(op, axes)
        }
    };
    if args.out.is_some() {
        spec.output = args.out;
    }
    let table = run_sweep(&spec)?;
    emit_table(&table, spec.output.as_ref())
}

fn figure(args: FigureArgs) -> Outcome {
    match args.which {
        Figure::Phi { grid, out } => emit_table(&figure_phi_surface(grid)?, out.as_ref()),
        Figure::Convergence { alpha, rho, n, out } => {
            let table = convergence_study(Rate::new(alpha)?, Correlation::new(rho)?, &n)?;
            emit_table(&table, out.as_ref())
        }
    }
}

fn scan(args: ScanArgs, json: bool) -> Outcome {
    if args.steps < 2 || args.rho_points == 0 {
        return Err(Failure::Usage(
            "--steps must be at least 2 and --rho-points positive".into(),
        ));
    }
    let grid: Vec<f64> = (1..args.steps)
        .map(|i| i as f64 / args.steps as f64)
        .collect();
    let frontier = feasibility_scan(&grid, &default_rho_grid(args.rho_points))?;
    let rows: Vec<ScanRow> = frontier
        .points
        .iter()
        .map(|p| ScanRow {
            r1: p.r1,
            r2_max: p.r2_max,
        })
        .collect();
    if json {
        return emit_json(&rows);
    }
    let mut table = ResultTable::new(vec!["r1".into(), "r2_max".into()]);
    for r in &rows {
        table.push(vec![r.r1, r.r2_max.unwrap_or(f64::NEG_INFINITY)])?;
    }
    emit_table(&table, None)
}

fn verify(args: VerifyArgs, json: bool) -> Outcome {
    let suites = Suite::parse_selection(&args.suite)?;
    let report: VerifyReport = run_suites(&suites, args.seed);
    if json {
        emit_json(&report)?;
    } else {
        for p in &report.properties {
            println!(
                "{} {}/{} ({} checks) {}",
                if p.passed { "PASS" } else { "FAIL" },
                p.suite,
                p.name,
                p.checks,
                p.detail
            );
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("HYPERRECT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "HYPERRECT_THREADS={value:?} is not a positive integer"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Exponent(a) => exponent(a, json),
        Command::Bound(a) => bound(a, json),
        Command::Oracle(a) => oracle(a, json),
        Command::Hc(a) => hc(a, json),
        Command::Sweep(a) => sweep(a),
        Command::Figure(a) => figure(a),
        Command::Scan(a) => scan(a, json),
        Command::Verify(a) => verify(a, json),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(EXIT_PROPERTY_FAILURE),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
