//! The `elgi` command line.
//!
//! Exit codes: 0 success, 1 numeric-guarantee failure, 2 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{elemental_inequalities, elgi_family, evaluate, format_inequality, DEFAULT_TOLERANCE};
use crate::error::Error;
use crate::scan::{self, Cell, GridSpec, ScanResult, DEFAULT_POINTS};
use crate::semiclassics::entropy_asymptotic;
use crate::spin::{parse_half_integer, MagneticIndex, Spin};
use crate::temporal::{all_subsets, entropy_of, entropy_vector, mixed_entropy_vector, wigner_entropy, EntropyVector};
use crate::temporal::{InitialState, Schedule};
use crate::wigner::d_matrix;

/// Orthogonality gate for `dmat --check-orthogonality`; enforced for `2j ≤ 400`.
pub const ORTHOGONALITY_GATE: f64 = 1e-10;
const GATED_TWICE_J: u32 = 400;

#[derive(Debug, Parser)]
#[command(name = "elgi", version, about = "Entropic Leggett-Garg inequalities for large-spin systems")]
struct Cli {
    /// Worker threads (default: ELGI_THREADS, else all cores).
    #[arg(long, global = true, env = "ELGI_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Stored in the output metadata as given.
    #[arg(long, global = true)]
    timestamp: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Wigner d-matrix, or one element of it.
    Dmat(DmatArgs),
    /// Wigner-matrix entropy H_j(beta).
    Entropy(EntropyArgs),
    /// Inequality families.
    #[command(subcommand)]
    Ineq(IneqCommand),
    /// Parameter scans.
    #[command(subcommand)]
    Scan(ScanCommand),
    /// Check elemental inequalities on random single-distribution entropy vectors.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct DmatArgs {
    /// Spin j, as p/2 or a decimal.
    #[arg(long = "j", value_parser = parse_spin, allow_hyphen_values = true)]
    spin: Spin,
    /// Angle: decimal or pi-expression (pi/3, 2pi/5, -pi).
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    beta: f64,
    /// Only d^j_{mn} for these indices, e.g. --element 1/2,-1/2.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    element: Option<(MagneticIndex, MagneticIndex)>,
    /// Report the orthogonality defect; exit 1 above the gate when 2j <= 400.
    #[arg(long)]
    check_orthogonality: bool,
}

#[derive(Debug, Args)]
struct EntropyArgs {
    #[arg(long = "j", value_parser = parse_spin, allow_hyphen_values = true)]
    spin: Spin,
    /// One angle or a comma-separated list.
    #[arg(long, value_parser = parse_angle, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    beta: Vec<f64>,
    /// Add the large-j asymptote and the difference.
    #[arg(long)]
    with_asymptote: bool,
}

#[derive(Debug, Subcommand)]
enum IneqCommand {
    /// Members of the order-k family for n times.
    List {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: usize,
    },
    /// Evaluate the families of every order on a schedule.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    n: usize,
    /// Only this order (default: 2..=n).
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[arg(long = "j", value_parser = parse_spin, allow_hyphen_values = true)]
    spin: Spin,
    /// "mixed" or comma-separated diagonal weights ordered m = +j .. -j.
    #[arg(long, default_value = "mixed")]
    state: String,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    /// Accumulated angles beta_1..beta_n.
    #[arg(long, value_parser = parse_angle, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["omega", "times"])]
    angles: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, requires = "times")]
    omega: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "omega")]
    times: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    start: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    stop: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Drop grid points within a window, CENTER:HALF_WIDTH; repeatable.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    exclude: Vec<(f64, f64)>,
}

#[derive(Debug, Subcommand)]
enum ScanCommand {
    /// Family minima over equally spaced schedules.
    Fig2 {
        #[arg(long = "j", value_parser = parse_spin, default_value = "2")]
        spin: Spin,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "mixed")]
        state: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// D_{2,3} on (0, 2b, 3b) against its asymptote.
    Fig3 {
        #[arg(long = "j", value_parser = parse_spin)]
        spin: Spin,
        /// Breakdown half-width (default max(0.1, 5 J^{-2/3})).
        #[arg(long)]
        window: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// |d|^2 and region tags over the (m, n) grid.
    Fig4 {
        #[arg(long = "j", value_parser = parse_spin, default_value = "200")]
        spin: Spin,
        #[arg(long, value_parser = parse_angle, value_delimiter = ',', default_value = "pi/12,pi/6,pi/3,pi/2")]
        betas: Vec<f64>,
        /// Boundary-layer half-width (default J^{-2/3}).
        #[arg(long)]
        eps: Option<f64>,
    },
    /// D_{2,3} with beta_{1,3} at and near pi.
    Singularity {
        #[arg(long, value_parser = parse_angle, default_value = "1.0")]
        beta23: f64,
        #[arg(long, value_parser = parse_spin, value_delimiter = ',', default_value = "10,20,40,80,160")]
        j_list: Vec<Spin>,
    },
    /// Airy-approximation error and entropy deviation per angle.
    WkbError {
        #[arg(long = "j", value_parser = parse_spin)]
        spin: Spin,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Outcomes per time.
    #[arg(long, default_value_t = 3)]
    outcomes: usize,
}

fn parse_spin(s: &str) -> Result<Spin, String> {
    s.parse::<Spin>().map_err(|e| match e {
        Error::Parse(m) => m,
        other => other.to_string(),
    })
}

/// Decimal, or `[c][*]pi[/d]` with decimal `c` and `d`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let bad = || format!("'{s}' is not an angle (use a decimal or e.g. pi/3, 2pi/5, -pi)");
    let value = match t.split_once("pi") {
        None => t.parse::<f64>().map_err(|_| bad())?,
        Some((coef, rest)) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let d = match rest {
                "" => 1.0,
                r => r.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
            };
            if d == 0.0 {
                return Err(bad());
            }
            c * std::f64::consts::PI / d
        }
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

fn parse_pair(s: &str) -> Result<(MagneticIndex, MagneticIndex), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected M,N, got '{s}'"))?;
    let one = |x: &str| {
        parse_half_integer(x)
            .ok()
            .and_then(|v| i32::try_from(v).ok())
            .map(MagneticIndex::from_twice)
            .ok_or_else(|| format!("'{x}' is not a half-integer"))
    };
    Ok((one(a)?, one(b)?))
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (c, w) = s.split_once(':').ok_or_else(|| format!("expected CENTER:HALF_WIDTH, got '{s}'"))?;
    Ok((parse_angle(c)?, parse_angle(w)?))
}

fn parse_state(spin: Spin, s: &str) -> Result<InitialState<f64>, Error> {
    if s == "mixed" {
        return Ok(InitialState::maximally_mixed(spin));
    }
    let w = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("--state: bad weight '{x}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    InitialState::from_weights(spin, w)
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let pool = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let (mut result, failure) = match &cli.command {
        Command::Dmat(a) => cmd_dmat(a)?,
        Command::Entropy(a) => (cmd_entropy(a)?, None),
        Command::Ineq(IneqCommand::List { n, order }) => (cmd_ineq_list(*n, *order)?, None),
        Command::Ineq(IneqCommand::Eval(a)) => (cmd_ineq_eval(a)?, None),
        Command::Scan(s) => (cmd_scan(s)?, None),
        Command::Selftest(a) => cmd_selftest(a)?,
    };
    if let Some(t) = &cli.timestamp {
        result = result.with_timestamp(t.clone());
    }
    emit(cli, &result)?;
    match failure {
        Some(m) => Err(Failure::Numeric(m)),
        None => Ok(()),
    }
}

fn emit(cli: &Cli, result: &ScanResult) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Csv => result.to_csv()?,
        Format::Json => result.to_json()? + "\n",
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn table(kind: &str, columns: &[&str]) -> ScanResult {
    let mut r = ScanResult {
        meta: BTreeMap::new(),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows: Vec::new(),
    };
    r.set_meta("command", kind);
    r.set_meta("code_version", env!("CARGO_PKG_VERSION"));
    r
}

fn cmd_dmat(a: &DmatArgs) -> Result<(ScanResult, Option<String>), Failure> {
    let dm = d_matrix::<f64>(a.spin, a.beta);
    let mut out = match a.element {
        Some((m, n)) => {
            let mut t = table("dmat", &["m", "n", "d"]);
            t.rows.push(vec![Cell::Text(m.to_string()), Cell::Text(n.to_string()), dm.element(m, n)?.into()]);
            t
        }
        None => {
            let mut cols = vec!["m".to_string()];
            cols.extend(a.spin.indices().map(|n| format!("n={n}")));
            let mut t = table("dmat", &[]);
            t.columns = cols;
            for m in a.spin.indices() {
                let mut row = vec![Cell::Text(m.to_string())];
                for n in a.spin.indices() {
                    row.push(dm.element(m, n)?.into());
                }
                t.rows.push(row);
            }
            t
        }
    };
    out.set_meta("j", a.spin);
    out.set_meta("beta", a.beta);
    let mut failure = None;
    if a.check_orthogonality {
        let defect = dm.orthogonality_defect();
        out.set_meta("orthogonality_defect", defect);
        eprintln!("orthogonality defect: {defect:e}");
        let gated = a.spin.twice_j() <= GATED_TWICE_J;
        if !(defect <= ORTHOGONALITY_GATE) {
            if gated {
                failure = Some(format!("orthogonality defect {defect:e} exceeds {ORTHOGONALITY_GATE:e}"));
            } else {
                log::warn!("orthogonality defect {defect:e} above the gate at 2j = {}", a.spin.twice_j());
            }
        }
    }
    Ok((out, failure))
}

fn cmd_entropy(a: &EntropyArgs) -> Result<ScanResult, Failure> {
    let cols: &[&str] =
        if a.with_asymptote { &["beta", "entropy", "asymptote", "difference"] } else { &["beta", "entropy"] };
    let mut out = table("entropy", cols);
    for &beta in &a.beta {
        let h = wigner_entropy(a.spin, beta);
        let mut row = vec![beta.into(), h.into()];
        if a.with_asymptote {
            let asym = entropy_asymptotic(a.spin, beta);
            row.push(asym.into());
            row.push((h - asym).into());
        }
        out.rows.push(row);
    }
    out.set_meta("j", a.spin);
    Ok(out)
}

fn cmd_ineq_list(n: usize, order: usize) -> Result<ScanResult, Failure> {
    let fam = elgi_family(n, order)?;
    let mut out = table("ineq list", &["label", "inequality"]);
    for m in fam.members() {
        out.rows.push(vec![m.label().into(), format_inequality(m).as_str().into()]);
    }
    out.set_meta("n", n);
    out.set_meta("order", order);
    out.set_meta("members", fam.len());
    Ok(out)
}

fn build_schedule(n: usize, s: &ScheduleArgs) -> Result<Schedule<f64>, Failure> {
    let schedule = match (&s.angles, s.omega, &s.times) {
        (Some(angles), _, _) => Schedule::from_angles(angles.clone())?,
        (None, Some(omega), Some(times)) => Schedule::from_times(omega, times)?,
        _ => return Err(Failure::Usage("give --angles, or --omega with --times".into())),
    };
    if schedule.n() != n {
        return Err(Failure::Usage(format!("--n is {n} but the schedule has {} times", schedule.n())));
    }
    Ok(schedule)
}

fn cmd_ineq_eval(a: &EvalArgs) -> Result<ScanResult, Failure> {
    let schedule = build_schedule(a.n, &a.schedule)?;
    let state = parse_state(a.spin, &a.state)?;
    let subsets = all_subsets(a.n);
    let h = if state.is_maximally_mixed() {
        mixed_entropy_vector(a.spin, &schedule, &subsets)?
    } else {
        entropy_vector(&state, &schedule, &subsets)?
    };
    let orders: Vec<usize> = match a.order {
        Some(k) => vec![k],
        None => (2..=a.n).collect(),
    };
    let mut out = table("ineq eval", &["order", "label", "value", "status"]);
    for k in orders {
        let fam = elgi_family(a.n, k)?;
        for m in fam.members() {
            let r = evaluate(m, &h, a.tol)?;
            let status = if r.violated { "violated" } else { "satisfied" };
            out.rows.push(vec![(k as i64).into(), r.label.as_str().into(), r.value.into(), status.into()]);
        }
    }
    out.set_meta("j", a.spin);
    out.set_meta("angles", format!("{:?}", schedule.angles()));
    out.set_meta("state", &a.state);
    out.set_meta("tol", a.tol);
    Ok(out)
}

fn grid(name: &str, g: &GridArgs, default_start: f64, default_stop: f64, open: bool) -> Result<GridSpec, Failure> {
    let start = g.start.unwrap_or(default_start);
    let stop = g.stop.unwrap_or(default_stop);
    let mut spec = if open {
        // interior points of [start, stop]
        let step = (stop - start) / (g.points + 1) as f64;
        GridSpec::new(name, start, stop, g.points + 2)?.with_window(start, 0.5 * step)?.with_window(stop, 0.5 * step)?
    } else {
        GridSpec::new(name, start, stop, g.points)?
    };
    for &(c, w) in &g.exclude {
        spec = spec.with_window(c, w)?;
    }
    Ok(spec)
}

fn cmd_scan(s: &ScanCommand) -> Result<ScanResult, Failure> {
    use std::f64::consts::PI;
    Ok(match s {
        ScanCommand::Fig2 { spin, n, state, grid: g } => {
            let state = parse_state(*spin, state)?;
            scan::scan_fig2(*spin, *n, &grid("omega_dt", g, 0.0, PI, false)?, &state)?
        }
        ScanCommand::Fig3 { spin, window, grid: g } => {
            scan::scan_fig3(*spin, &grid("beta", g, 0.0, PI, true)?, *window)?
        }
        ScanCommand::Fig4 { spin, betas, eps } => scan::scan_fig4(*spin, betas, *eps)?,
        ScanCommand::Singularity { beta23, j_list } => scan::scan_singularity(j_list, *beta23)?,
        ScanCommand::WkbError { spin, grid: g } => scan::scan_wkb_error(*spin, &grid("beta", g, 0.0, PI, true)?)?,
    })
}

/// Entropies of every subset of a random global distribution on `outcomes^n` points.
fn random_entropy_vector(rng: &mut ChaCha8Rng, n: usize, outcomes: usize) -> EntropyVector<f64> {
    let size = outcomes.pow(n as u32);
    let mut p: Vec<f64> = (0..size).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() }).collect();
    let total: f64 = p.iter().sum();
    if total == 0.0 {
        p[0] = 1.0;
    } else {
        p.iter_mut().for_each(|x| *x /= total);
    }
    let mut values = BTreeMap::new();
    for s in all_subsets(n) {
        let mut marg: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (k, &pk) in p.iter().enumerate() {
            let key: Vec<usize> = s.indices().map(|i| (k / outcomes.pow(i as u32)) % outcomes).collect();
            *marg.entry(key).or_default() += pk;
        }
        values.insert(s, entropy_of(marg.into_values()));
    }
    EntropyVector::from_map(n, values)
}

fn cmd_selftest(a: &SelftestArgs) -> Result<(ScanResult, Option<String>), Failure> {
    if !(2..=5).contains(&a.n) || !(2..=4).contains(&a.outcomes) {
        return Err(Failure::Usage("selftest takes --n in 2..=5 and --outcomes in 2..=4".into()));
    }
    let fam = elemental_inequalities(a.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut out = table("selftest", &["sample", "min_elemental"]);
    let mut worst = f64::INFINITY;
    for k in 0..a.samples {
        let h = random_entropy_vector(&mut rng, a.n, a.outcomes);
        let m = fam.minimum(&h)?;
        worst = worst.min(m);
        out.rows.push(vec![(k as i64).into(), m.into()]);
    }
    out.set_meta("seed", a.seed);
    out.set_meta("n", a.n);
    out.set_meta("outcomes", a.outcomes);
    let failure =
        (worst < -DEFAULT_TOLERANCE).then(|| format!("elemental inequality at {worst:e} on a classical vector"));
    Ok((out, failure))
}
