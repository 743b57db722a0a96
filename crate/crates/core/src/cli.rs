//! Command-line front end: argument parsing, dispatch, report persistence.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::curves::{CurveKind, CurveSpec, SampleSpec};
use crate::error::{domain, Error, Result};
use crate::experiments::{self, ExperimentPlan, RunFailure};
use crate::exponents::{self, DeltaGrid, RatePoint, Regime, Smoothness};
use crate::initial_data::{self, Family, FrequencyProfile};
use crate::maximal::{self, LemmaGrid, LocalBound, TimeGrid, Window};
use crate::propagator::Propagator;
use crate::quadrature::QuadratureSpec;
use crate::report::{self, Envelope, Table};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "SCHRATE_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "schrate", version, about = "Convergence-rate laboratory for Schrödinger propagators along curves")]
pub struct Cli {
    /// Also write <OUT>.json, <OUT>.csv and <OUT>.gp.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    /// Primary stdout format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Threshold laws s(δ).
    #[command(subcommand)]
    Exponent(ExponentCmd),
    /// Curve families.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Initial data profiles.
    #[command(subcommand)]
    Data(DataCmd),
    /// Evaluate U_γ^m f(x,t).
    Eval(EvalArgs),
    /// Rate-weighted maximal function over a window.
    Maximal(MaximalArgs),
    /// Empirical check of a local-in-time maximal estimate.
    LemmaCheck(LemmaArgs),
    /// Scaling experiment over an R-sequence.
    Scaling(ScalingArgs),
    /// Scaling experiments across s with the zero crossing of the fitted slope.
    Sweep(SweepArgs),
    /// Ratio |Uf − f|/t^α along t = 2^{−j} for smooth data.
    CeilingDemo(CeilingArgs),
}

#[derive(Debug, Subcommand)]
pub enum ExponentCmd {
    /// Tabulate s(δ) on a δ-grid.
    Table(TableArgs),
    /// Region curve with breakpoints and annotations.
    Region(TableArgs),
    /// Classify a point (δ, s) against the threshold.
    Classify(ClassifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum CurveCmd {
    /// Sample the bilipschitz and Hölder constants.
    Verify(CurveVerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum DataCmd {
    /// Support box, Sobolev norms and f(0) of a profile.
    Info(DataInfoArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RegimeArgs {
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
    /// lipschitz or holder (default: lipschitz iff alpha = 1).
    #[arg(long, value_parser = parse_smoothness)]
    pub smoothness: Option<Smoothness>,
}

impl RegimeArgs {
    fn regime(&self) -> Result<Regime> {
        let smoothness = self.smoothness.unwrap_or(if self.alpha == 1.0 {
            Smoothness::Lipschitz
        } else {
            Smoothness::Holder
        });
        Regime::new(self.d, self.alpha, self.m, smoothness)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TableArgs {
    #[command(flatten)]
    pub regime: RegimeArgs,
    #[arg(long, default_value_t = 0.0)]
    pub delta_min: f64,
    #[arg(long)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub regime: RegimeArgs,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub s: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long = "curve", default_value = "minus-shift", value_parser = parse_curve)]
    pub kind: CurveKind,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CurveVerifyArgs {
    #[arg(long = "kind", default_value = "minus-shift", value_parser = parse_curve)]
    pub kind: CurveKind,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 24)]
    pub points_per_axis: usize,
    #[arg(long, default_value_t = 48)]
    pub times: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DataArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Frequency scale R.
    #[arg(long = "R", alias = "r", default_value_t = 32.0)]
    pub r: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Dyadic scale of annulus-bump data.
    #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
    pub k: i32,
    /// Center of gaussian-like data.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub center: f64,
    /// Amplitude of gaussian-like data.
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
}

impl DataArgs {
    fn profile(&self) -> Result<FrequencyProfile> {
        match self.family {
            Family::AnnulusBump => FrequencyProfile::annulus_bump(self.k),
            Family::GaussianLike => FrequencyProfile::gaussian_like(self.d, self.center, self.amplitude),
            f => FrequencyProfile::build(f, self.r, self.epsilon, self.d),
        }
    }
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct QuadArgs {
    #[arg(long)]
    pub base_nodes: Option<usize>,
    #[arg(long)]
    pub nodes_per_radian: Option<f64>,
    #[arg(long)]
    pub panel_order: Option<usize>,
    #[arg(long)]
    pub max_nodes: Option<usize>,
}

impl QuadArgs {
    fn spec(&self) -> Result<QuadratureSpec> {
        let mut q = QuadratureSpec::default();
        if let Some(v) = self.base_nodes {
            q.base_nodes = v;
        }
        if let Some(v) = self.nodes_per_radian {
            q.nodes_per_radian = v;
        }
        if let Some(v) = self.panel_order {
            q.panel_order = v;
        }
        if let Some(v) = self.max_nodes {
            q.max_nodes = v;
        }
        q.validate()?;
        Ok(q)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DataInfoArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Sobolev exponents.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub s: Vec<f64>,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Hölder exponent of the curve.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long)]
    pub t: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MaximalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x_lo: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x_hi: Vec<f64>,
    #[arg(long, default_value_t = 128)]
    pub x_points: usize,
    #[arg(long, default_value_t = 0)]
    pub j_min: i32,
    #[arg(long, default_value_t = 20)]
    pub j_max: i32,
    #[arg(long, default_value_t = 8)]
    pub points_per_octave: u32,
    /// Inject the family's critical time at each point.
    #[arg(long)]
    pub inject_critical: bool,
    /// Window constant used by the critical-time formulas.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LemmaArgs {
    /// 1: Lipschitz, 2: upper Hölder, 3: lower Hölder, 4: middle Hölder.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub lemma: u8,
    #[arg(long)]
    pub k: i32,
    /// Single j; the whole admissible range when omitted.
    #[arg(long)]
    pub j: Option<i32>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    /// Compute only the bound.
    #[arg(long)]
    pub bound_only: bool,
}

impl LemmaArgs {
    fn selector(&self) -> Result<LocalBound> {
        let sel = match self.lemma {
            1 => LocalBound::Lipschitz { d: self.d },
            2 => LocalBound::UpperHolder { alpha: self.alpha },
            3 => LocalBound::LowerHolder { alpha: self.alpha },
            4 => LocalBound::MiddleHolder { alpha: self.alpha },
            n => return Err(domain(format!("unknown local estimate {n}"))),
        };
        sel.validate()?;
        Ok(sel)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlanArgs {
    /// JSON plan file; flags below are ignored when given.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 1)]
    pub d: u32,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub s: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long = "R-values", alias = "r-values", value_delimiter = ',')]
    pub r_values: Option<Vec<f64>>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 256)]
    pub x_points: usize,
}

impl PlanArgs {
    fn plan(&self) -> Result<ExperimentPlan> {
        let plan = match &self.plan {
            Some(path) => load_plan(path)?,
            None => {
                let family = self.family.ok_or_else(|| domain("--family or --plan is required"))?;
                let alpha = self.alpha.ok_or_else(|| domain("--alpha or --plan is required"))?;
                let mut p = ExperimentPlan {
                    family,
                    regime: Regime::schrodinger(self.d, alpha)?,
                    delta: self.delta,
                    s: self.s,
                    epsilon: self.epsilon,
                    r_values: experiments::default_r_values(),
                    c: self.c,
                    x_points: self.x_points,
                    time: Default::default(),
                    quad: QuadratureSpec::default(),
                };
                if let Some(rs) = &self.r_values {
                    p.r_values = rs.clone();
                }
                p
            }
        };
        plan.validate()?;
        Ok(plan)
    }
}

pub fn load_plan(path: &Path) -> Result<ExperimentPlan> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
    #[arg(long, value_delimiter = ',')]
    pub s_values: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CeilingArgs {
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, value_delimiter = ',', default_value = "0.5", allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub center: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    Family::parse(s).map_err(|e| e.to_string())
}

fn parse_curve(s: &str) -> std::result::Result<CurveKind, String> {
    CurveKind::parse(s).map_err(|e| e.to_string())
}

fn parse_smoothness(s: &str) -> std::result::Result<Smoothness, String> {
    match s {
        "lipschitz" => Ok(Smoothness::Lipschitz),
        "holder" => Ok(Smoothness::Holder),
        _ => Err(format!("unknown smoothness '{s}' (lipschitz or holder)")),
    }
}

/// Plot description for the gnuplot script accompanying a CSV table.
struct Plot {
    title: String,
    x: usize,
    ys: Vec<(usize, &'static str)>,
    log_axes: bool,
}

/// Everything a command produces.
struct Output {
    json: String,
    table: Table,
    plot: Plot,
    default_format: Format,
}

fn output<C: Serialize, T: Serialize>(
    command: &str,
    config: &C,
    result: T,
    table: Table,
    plot: Plot,
    default_format: Format,
) -> Result<Output> {
    Ok(Output {
        json: Envelope::new(command, config, result)?.to_json()?,
        table,
        plot,
        default_format,
    })
}

fn lines(title: &str, x: usize, ys: &[usize]) -> Plot {
    Plot {
        title: title.to_string(),
        x,
        ys: ys.iter().map(|y| (*y, "linespoints")).collect(),
        log_axes: false,
    }
}

/// A failure carrying an optional structured payload for stderr.
struct Failure {
    error: Error,
    extra: Value,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, extra: Value::Null }
    }
}

impl From<RunFailure> for Failure {
    fn from(f: RunFailure) -> Self {
        Failure {
            extra: json!({ "failed_r": f.r, "partial": f.partial }),
            error: f.error,
        }
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Range(_) => "range",
        Error::Unsupported(_) => "unsupported",
        Error::Accuracy { .. } => "accuracy",
        Error::Window(_) => "window",
        Error::Resolution(_) => "resolution",
        Error::Calibration(_) => "calibration",
        Error::Config(_) => "config",
        Error::Io(_) => "io",
    }
}

/// JSON payload written to stderr on failure.
pub fn error_payload(e: &Error, extra: &Value) -> Value {
    let mut v = json!({
        "schema_version": report::SCHEMA_VERSION,
        "tool": report::TOOL,
        "version": report::TOOL_VERSION,
        "error": error_kind(e),
        "message": e.to_string(),
        "exit_code": e.exit_code(),
    });
    if let Error::Accuracy { coarse, fine, nodes, .. } = e {
        v["coarse"] = json!({ "re": coarse.re, "im": coarse.im });
        v["fine"] = json!({ "re": fine.re, "im": fine.im });
        v["nodes"] = json!(nodes);
    }
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
        for (k, val) in src {
            dst.insert(k.clone(), val.clone());
        }
    }
    v
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
}

fn init_workers(workers: Option<usize>) -> Result<()> {
    if let Some(n) = workers {
        if n == 0 {
            return Err(domain("worker count must be >= 1"));
        }
        // A pool that already exists (repeated in-process dispatch) is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn dispatch<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stdout, "{text}");
                    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        1
                    } else {
                        0
                    }
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    init_logging(cli.verbose);
    match execute(&cli) {
        Ok(out) => match emit(&cli, &out, stdout) {
            Ok(()) => 0,
            Err(e) => report_failure(&e.into(), stderr),
        },
        Err(f) => report_failure(&f, stderr),
    }
}

fn report_failure(f: &Failure, stderr: &mut dyn Write) -> i32 {
    let payload = error_payload(&f.error, &f.extra);
    let _ = writeln!(stderr, "{}", serde_json::to_string_pretty(&payload).unwrap_or_default());
    f.error.exit_code()
}

fn emit(cli: &Cli, out: &Output, stdout: &mut dyn Write) -> Result<()> {
    let format = cli.format.unwrap_or(out.default_format);
    let text = match format {
        Format::Json => {
            let mut s = out.json.clone();
            s.push('\n');
            s
        }
        Format::Csv => out.table.to_csv(),
    };
    stdout.write_all(text.as_bytes())?;
    if let Some(stem) = &cli.out {
        let plot = &out.plot;
        report::write_outputs(stem, &out.json, &out.table, |csv| {
            report::gnuplot_script(csv, &plot.title, plot.x, &plot.ys, plot.log_axes)
        })?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> std::result::Result<Output, Failure> {
    init_workers(cli.workers)?;
    match &cli.command {
        Command::Exponent(ExponentCmd::Table(a)) => cmd_exponent_table(a, "exponent table", Format::Csv),
        Command::Exponent(ExponentCmd::Region(a)) => cmd_exponent_table(a, "exponent region", Format::Json),
        Command::Exponent(ExponentCmd::Classify(a)) => cmd_classify(a),
        Command::Curve(CurveCmd::Verify(a)) => cmd_curve_verify(a),
        Command::Data(DataCmd::Info(a)) => cmd_data_info(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Maximal(a) => cmd_maximal(a),
        Command::LemmaCheck(a) => cmd_lemma(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::CeilingDemo(a) => cmd_ceiling(a),
    }
}

type CmdResult = std::result::Result<Output, Failure>;

fn cmd_exponent_table(a: &TableArgs, name: &str, fmt: Format) -> CmdResult {
    let regime = a.regime.regime()?;
    let grid = DeltaGrid {
        delta_min: a.delta_min,
        delta_max: a.delta_max,
        steps: a.steps,
    };
    if a.steps == 0 {
        return Err(domain("steps must be >= 1").into());
    }
    let curve = exponents::region_curve(&regime, &grid)?;
    let mut table = Table::new(&["delta", "s", "piece"]);
    for p in &curve.samples {
        table.push(vec![p.delta, p.s, p.piece as f64]);
    }
    let config = json!({ "regime": regime, "grid": grid });
    Ok(output(name, &config, &curve, table, lines("threshold s(delta)", 0, &[1]), fmt)?)
}

fn cmd_classify(a: &ClassifyArgs) -> CmdResult {
    let regime = a.regime.regime()?;
    let point = RatePoint { s: a.s, delta: a.delta };
    let class = exponents::classify(&regime, point)?;
    let threshold = exponents::threshold(&regime, a.delta)?;
    let mut table = Table::new(&["delta", "s", "threshold"]);
    table.push(vec![a.delta, a.s, threshold]);
    let result = json!({
        "law": regime.law_kind()?,
        "threshold": threshold,
        "classification": class,
    });
    let config = json!({ "regime": regime, "point": point });
    Ok(output("exponent classify", &config, result, table, lines("classification", 0, &[2]), Format::Json)?)
}

fn cmd_curve_verify(a: &CurveVerifyArgs) -> CmdResult {
    let spec = CurveSpec::new(a.kind, a.alpha, a.d)?;
    let samples = SampleSpec {
        points_per_axis: a.points_per_axis,
        times: a.times,
    };
    let report = crate::curves::verify_regularity(&spec, &samples)?;
    let mut table = Table::new(&["bilip_lower", "bilip_upper", "holder_const", "sample_count"]);
    table.push(vec![
        report.bilip_lower,
        report.bilip_upper,
        report.holder_const,
        report.sample_count as f64,
    ]);
    Ok(output("curve verify", a, report, table, lines("curve constants", 3, &[0, 1, 2]), Format::Json)?)
}

fn cmd_data_info(a: &DataInfoArgs) -> CmdResult {
    let profile = a.data.profile()?;
    let quad = a.quad.spec()?;
    let mut table = Table::new(&["s", "sobolev_norm"]);
    let mut norms = Vec::new();
    for &s in &a.s {
        let n = initial_data::sobolev_norm(&profile, s, &quad)?;
        table.push(vec![s, n]);
        norms.push(json!({ "s": s, "norm": n }));
    }
    let origin = vec![0.0; profile.d];
    let f0 = initial_data::physical_eval(&profile, &origin, &quad).ok();
    let result = json!({
        "profile": profile,
        "support_box": profile.support_box(),
        "sobolev": norms,
        "value_at_origin": f0.map(|v| json!({ "re": v.re, "im": v.im })),
    });
    Ok(output("data info", a, result, table, lines("Sobolev norms", 0, &[1]), Format::Json)?)
}

fn cmd_eval(a: &EvalArgs) -> CmdResult {
    let profile = a.data.profile()?;
    let curve = CurveSpec::new(a.curve.kind, a.alpha, profile.d)?;
    let quad = a.quad.spec()?;
    if a.x.len() != profile.d {
        return Err(domain(format!("--x needs {} coordinates", profile.d)).into());
    }
    let prop = Propagator::new(&profile, &curve, a.m, &quad)?;
    let sample = prop.evaluate(&a.x, a.t)?;
    let mut header: Vec<String> = (1..=profile.d).map(|i| format!("x{i}")).collect();
    header.extend(["t", "re", "im", "abs", "initial_re", "initial_im"].map(String::from));
    let mut table = Table::new(&header);
    let mut row = a.x.clone();
    row.extend([
        a.t,
        sample.value.re,
        sample.value.im,
        sample.value.norm(),
        sample.initial.re,
        sample.initial.im,
    ]);
    table.push(row);
    let d = profile.d;
    Ok(output("eval", a, sample, table, lines("U f", d, &[d + 3]), Format::Json)?)
}

fn cmd_maximal(a: &MaximalArgs) -> CmdResult {
    let profile = a.data.profile()?;
    let d = profile.d;
    let curve = CurveSpec::new(a.curve.kind, a.alpha, d)?;
    let quad = a.quad.spec()?;
    if a.x_lo.len() != d || a.x_hi.len() != d {
        return Err(domain(format!("--x-lo and --x-hi need {d} coordinates")).into());
    }
    let window = Window {
        lo: a.x_lo.clone(),
        hi: a.x_hi.clone(),
        points: vec![a.x_points; d],
    };
    let prop = Propagator::new(&profile, &curve, a.m, &quad)?;
    let base = TimeGrid {
        j_min: a.j_min,
        j_max: a.j_max,
        points_per_octave: a.points_per_octave,
        injected: Vec::new(),
        local_refinement: true,
    };
    base.validate()?;
    let field = maximal::maximal_field(&prop, a.delta, &window, |x| {
        let mut g = base.clone();
        if a.inject_critical {
            let t = maximal::critical_time(profile.family, &curve, profile.r, profile.epsilon, x, a.c)?;
            if t > 0.0 && t <= 1.0 {
                g.injected.push(t);
            }
        }
        Ok(g)
    })?;
    let l2 = maximal::l2_over_ball(&field).ok();
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.extend(["sup", "argmax_t"].map(String::from));
    let mut table = Table::new(&header);
    for ((x, s), t) in field.points.iter().zip(&field.sup_values).zip(&field.argmax_times) {
        let mut row = x.clone();
        row.extend([*s, *t]);
        table.push(row);
    }
    let result = json!({ "field": field, "l2_over_window": l2 });
    Ok(output("maximal", a, result, table, lines("maximal function", 0, &[d]), Format::Json)?)
}

fn cmd_lemma(a: &LemmaArgs) -> CmdResult {
    let sel = a.selector()?;
    let (lo, hi) = sel.j_range(a.k);
    let js: Vec<i32> = match a.j {
        Some(j) => vec![j],
        None => (lo..=hi).collect(),
    };
    let bounds = js.iter().map(|&j| maximal::lemma_bound(&sel, a.k, j)).collect::<Result<Vec<_>>>()?;
    let empirical = if a.bound_only {
        vec![f64::NAN; js.len()]
    } else {
        maximal::lemma_empirical_sweep(&sel, a.k, &js, &QuadratureSpec::default(), &LemmaGrid::default())?
    };
    let mut table = Table::new(&["j", "empirical", "bound", "ratio"]);
    let mut rows = Vec::new();
    for ((j, e), b) in js.iter().zip(&empirical).zip(&bounds) {
        table.push(vec![*j as f64, *e, *b, e / b]);
        let e = e.is_finite().then_some(*e);
        rows.push(json!({ "j": j, "empirical": e, "bound": b, "ratio": e.map(|e| e / b) }));
    }
    let result = json!({ "selector": sel, "k": a.k, "rows": rows });
    Ok(output("lemma-check", a, result, table, lines("local estimate", 0, &[1, 2]), Format::Json)?)
}

fn scaling_table(r: &experiments::ScalingReport) -> Table {
    let mut table = Table::new(&["R", "ratio", "log2R", "logratio"]);
    for s in &r.samples {
        table.push(vec![s.r, s.ratio, s.r.log2(), s.ratio.ln()]);
    }
    table
}

fn cmd_scaling(a: &ScalingArgs) -> CmdResult {
    let plan = a.plan.plan()?;
    log::info!("scaling {} over {:?}", plan.family.name(), plan.r_values);
    let report = experiments::run(&plan)?;
    let table = scaling_table(&report);
    let plot = Plot {
        title: format!("{} ratio", plan.family.name()),
        x: 0,
        ys: vec![(1, "linespoints")],
        log_axes: true,
    };
    Ok(output("scaling", &plan, report, table, plot, Format::Json)?)
}

fn cmd_sweep(a: &SweepArgs) -> CmdResult {
    let plan = a.plan.plan()?;
    let report = experiments::sharpness_sweep(&plan, &a.s_values)?;
    let mut table = Table::new(&["s", "slope", "predicted"]);
    for p in &report.points {
        table.push(vec![p.s, p.slope, p.predicted]);
    }
    let config = json!({ "plan": plan, "s_values": a.s_values });
    Ok(output("sweep", &config, report, table, lines("fitted slope", 0, &[1, 2]), Format::Json)?)
}

fn cmd_ceiling(a: &CeilingArgs) -> CmdResult {
    let d = a.x.len().max(1);
    let profile = FrequencyProfile::gaussian_like(d, a.center, a.amplitude)?;
    let curve = CurveSpec::new(a.curve.kind, a.alpha, d)?;
    let prop = Propagator::new(&profile, &curve, 2.0, &a.quad.spec()?)?;
    let points = maximal::rate_ceiling_demo(&prop, &a.x)?;
    let mut table = Table::new(&["j", "t", "ratio", "running_inf"]);
    for p in &points {
        table.push(vec![p.j as f64, p.t, p.ratio, p.running_inf]);
    }
    let floor = points.last().map(|p| p.running_inf);
    let result = json!({ "points": points, "floor": floor });
    Ok(output("ceiling-demo", a, result, table, lines("rate ceiling", 0, &[2, 3]), Format::Json)?)
}
