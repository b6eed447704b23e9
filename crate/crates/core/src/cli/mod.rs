//! Command-line front end.
//!
//! [`parse_args`] turns `argv` into a validated [`RunConfig`]; [`run`]
//! executes it and writes every output file. [`main_with_args`] maps the
//! outcome to a process exit code.

pub mod formats;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::axis::Axis;
use crate::baselines::{gabor_transform, imaginary_residue, wigner_ville, wigner_ville_complex};
use crate::hgf::{TfPoint, WindowSpec};
use crate::reconstruct::{
    coefficients_at, default_order, reconstruct_integral, reconstruct_series, relative_l2_error,
};
use crate::signal::{moments, Generator, MomentReport, Signal, TimeGrid};
use crate::transform::{
    analyze, default_omega_axis, default_time_axis, energy_density, full_omega_axis, marginal_freq,
    marginal_time, ComplexGrid, RealGrid,
};
use formats::{
    fmt_complex, fmt_f64, grid_to_csv, heatmap_ppm, read_signal, write_signal, ColorScale,
    FormatError, Report, SignalFormat,
};

/// Grid used by `--gen` when no `span`/`dt` keys are given.
pub const DEFAULT_GEN_SPAN: f64 = 32.0;
pub const DEFAULT_GEN_DT: f64 = 1.0 / 32.0;
pub const DEFAULT_MAX_RESIDUAL: f64 = 1e-3;
pub const DEFAULT_LOG_FLOOR: f64 = 1e-6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hgtf",
    version,
    about = "Harmonic Gaussian time-frequency analysis",
    long_about = "Harmonic Gaussian time-frequency analysis.\n\n\
        Time is in seconds and angular frequency in rad/s. Every run writes \
        report.txt (key=value lines) into --out.\n\n\
        Exit codes: 0 success, 1 usage error, 2 input-data error, \
        3 numerical check failed under --strict."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order-n harmonic Gaussian transform: psi.csv, density.csv, density.ppm.
    #[command(visible_alias = "hgf")]
    Analyze(RunArgs),
    /// Wigner-Ville distribution: wigner.csv, wigner.ppm. Default frequency
    /// axis is the full FFT grid; T values must lie on the half-sample grid.
    Wigner(RunArgs),
    /// Gabor transform (Gaussian window 2^{1/4} e^{-pi t^2}): gabor.csv, density.csv, density.ppm.
    Gabor(RunArgs),
    /// Order-n time and frequency marginals: marginal_time.csv, marginal_freq.csv.
    Marginals(RunArgs),
    /// Reconstruct the signal: reconstructed.csv, reconstructed.f64.
    Reconstruct(RunArgs),
    /// Time and frequency moments of the signal.
    Moments(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Input signal file. `.csv` files hold `t,re[,im]` rows (t in seconds);
    /// anything else is read as the f64le binary format.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Override the input format detected from the file extension.
    #[arg(long, value_enum, value_name = "FORMAT")]
    input_format: Option<InputFormatArg>,

    /// Generated input `kind:key=value,...`. Kinds: gaussian, chirp, tones,
    /// hgf, impulse. Grid keys: span (s, default 32), dt (s, default 1/32),
    /// t0 (s) with samples (count) instead of span.
    #[arg(long = "gen", value_name = "SPEC")]
    generator: Option<String>,

    /// Hermite order n (non-negative integer).
    #[arg(long, default_value_t = 0, value_name = "N")]
    order: usize,

    /// Window time scale delta_t in seconds (> 0); delta_omega = 1/(2 delta_t) rad/s.
    #[arg(long, value_name = "SECONDS")]
    delta_t: Option<f64>,

    /// Time axis `min:max:count` in seconds; count >= 2.
    #[arg(long, value_name = "MIN:MAX:COUNT", allow_hyphen_values = true)]
    t_axis: Option<String>,

    /// Frequency axis `min:max:count` in rad/s; count >= 2.
    #[arg(long, value_name = "MIN:MAX:COUNT", allow_hyphen_values = true)]
    omega_axis: Option<String>,

    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Comma-separated output formats.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![OutputFormat::Csv, OutputFormat::F64le, OutputFormat::Ppm])]
    format: Vec<OutputFormat>,

    /// Heatmap color scale.
    #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
    scale: ScaleArg,

    /// Log-scale floor as a fraction of the maximum (0 < floor < 1).
    #[arg(long, value_name = "FRACTION")]
    floor: Option<f64>,

    /// Exit with status 3 when a numerical check fails.
    #[arg(long)]
    strict: bool,

    /// Largest relative energy residual accepted under --strict.
    #[arg(long, default_value_t = DEFAULT_MAX_RESIDUAL, value_name = "FRACTION")]
    max_residual: f64,

    /// Reconstruction route.
    #[arg(long, value_enum, default_value_t = Route::Integral)]
    route: Route,

    /// Series route: highest Hermite order (default: automatic tail detection).
    #[arg(long, value_name = "N")]
    n_max: Option<usize>,

    /// Series route: expansion point `T:Omega` in seconds and rad/s
    /// (default: the signal's time and frequency centroids).
    #[arg(long, value_name = "T:OMEGA", allow_hyphen_values = true)]
    center: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormatArg {
    Csv,
    F64le,
}

/// Output file families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    F64le,
    Ppm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

/// Reconstruction route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Double integral over a full `Psi_n` grid.
    Integral,
    /// Hermite series at a single point.
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisKind {
    Hgf,
    Wigner,
    Gabor,
    Marginals,
    Reconstruct,
    Moments,
}

impl AnalysisKind {
    pub fn name(self) -> &'static str {
        match self {
            AnalysisKind::Hgf => "hgf",
            AnalysisKind::Wigner => "wigner",
            AnalysisKind::Gabor => "gabor",
            AnalysisKind::Marginals => "marginals",
            AnalysisKind::Reconstruct => "reconstruct",
            AnalysisKind::Moments => "moments",
        }
    }

    fn needs_delta_t(self) -> bool {
        matches!(
            self,
            AnalysisKind::Hgf | AnalysisKind::Marginals | AnalysisKind::Reconstruct
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    File {
        path: PathBuf,
        format: SignalFormat,
    },
    Generator {
        text: String,
        generator: Generator,
        grid: TimeGrid,
    },
}

/// `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn to_axis(self) -> Axis {
        Axis::from_range(self.min, self.max, self.count).expect("validated by parse_args")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kind: AnalysisKind,
    pub input: InputSource,
    pub order: usize,
    pub delta_t: Option<f64>,
    pub t_axis: Option<AxisSpec>,
    pub omega_axis: Option<AxisSpec>,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    pub scale: ColorScale,
    pub strict: bool,
    pub max_residual: f64,
    pub route: Route,
    pub n_max: Option<usize>,
    pub center: Option<TfPoint>,
}

impl RunConfig {
    pub fn writes(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }
}

/// Usage error. `Display` is the text to print; help and version requests
/// also arrive here with `exit_code` 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError {
    pub message: String,
    pub exit_code: i32,
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for UsageError {}

/// Failure while running a validated config.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Library(#[from] crate::error::Error),
    #[error("numerical check failed: {0}")]
    Numerical(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }
}

/// Parses `argv` (including the program name). All violated constraints
/// are reported together.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, UsageError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| UsageError {
        message: e.render().to_string(),
        exit_code: if e.use_stderr() { EXIT_USAGE } else { EXIT_OK },
    })?;
    let (kind, args) = match cli.command {
        Command::Analyze(a) => (AnalysisKind::Hgf, a),
        Command::Wigner(a) => (AnalysisKind::Wigner, a),
        Command::Gabor(a) => (AnalysisKind::Gabor, a),
        Command::Marginals(a) => (AnalysisKind::Marginals, a),
        Command::Reconstruct(a) => (AnalysisKind::Reconstruct, a),
        Command::Moments(a) => (AnalysisKind::Moments, a),
    };
    validate(kind, args).map_err(|problems| UsageError {
        message: format!(
            "error: invalid arguments for `{}`:\n{}",
            kind.name(),
            problems
                .iter()
                .map(|p| format!("  - {p}\n"))
                .collect::<String>()
        ),
        exit_code: EXIT_USAGE,
    })
}

fn validate(kind: AnalysisKind, args: RunArgs) -> Result<RunConfig, Vec<String>> {
    let mut problems = Vec::new();

    let input = match (&args.input, &args.generator) {
        (Some(_), Some(_)) => {
            problems.push("--input and --gen are mutually exclusive".to_string());
            None
        }
        (None, None) => {
            problems.push("missing input: give --input <PATH> or --gen <SPEC>".to_string());
            None
        }
        (Some(path), None) => Some(InputSource::File {
            path: path.clone(),
            format: match args.input_format {
                Some(InputFormatArg::Csv) => SignalFormat::Csv,
                Some(InputFormatArg::F64le) => SignalFormat::F64le,
                None => SignalFormat::from_path(path),
            },
        }),
        (None, Some(text)) => match parse_generator(text) {
            Ok((generator, grid)) => Some(InputSource::Generator {
                text: text.clone(),
                generator,
                grid,
            }),
            Err(e) => {
                problems.push(format!("--gen: {e}"));
                None
            }
        },
    };
    if args.input_format.is_some() && args.input.is_none() {
        problems.push("--input-format requires --input".to_string());
    }

    match args.delta_t {
        Some(d) if !(d.is_finite() && d > 0.0) => problems.push(format!(
            "--delta-t must be a positive number of seconds, got {d}"
        )),
        None if kind.needs_delta_t() => {
            problems.push(format!("--delta-t is required for `{}`", kind.name()))
        }
        _ => {}
    }
    if let Some(d) = args.delta_t {
        if d.is_finite() && d > 0.0 {
            if let Err(e) = WindowSpec::new(args.order, d) {
                problems.push(format!("--order/--delta-t: {e}"));
            }
        }
    }

    let mut axis = |flag: &str, text: &Option<String>| {
        text.as_ref().and_then(|t| match parse_axis(t) {
            Ok(a) => Some(a),
            Err(e) => {
                problems.push(format!("{flag}: {e}"));
                None
            }
        })
    };
    let t_axis = axis("--t-axis", &args.t_axis);
    let omega_axis = axis("--omega-axis", &args.omega_axis);

    let scale = match (args.scale, args.floor) {
        (ScaleArg::Linear, Some(_)) => {
            problems.push("--floor only applies to --scale log".to_string());
            ColorScale::Linear
        }
        (ScaleArg::Linear, None) => ColorScale::Linear,
        (ScaleArg::Log, floor) => {
            let floor = floor.unwrap_or(DEFAULT_LOG_FLOOR);
            if !(floor > 0.0 && floor < 1.0) {
                problems.push(format!("--floor must lie in (0, 1), got {floor}"));
            }
            ColorScale::Log { floor }
        }
    };

    if !(args.max_residual.is_finite() && args.max_residual >= 0.0) {
        problems.push(format!(
            "--max-residual must be a non-negative number, got {}",
            args.max_residual
        ));
    }
    if args.formats_empty() {
        problems.push("--format needs at least one of csv, f64le, ppm".to_string());
    }

    let series_only = args.n_max.is_some() || args.center.is_some();
    if series_only && !(kind == AnalysisKind::Reconstruct && args.route == Route::Series) {
        problems
            .push("--n-max and --center apply only to `reconstruct --route series`".to_string());
    }
    let center = args.center.as_ref().and_then(|c| match parse_point(c) {
        Ok(p) => Some(p),
        Err(e) => {
            problems.push(format!("--center: {e}"));
            None
        }
    });

    let out_dir = match args.out {
        Some(p) => p,
        None => {
            problems.push("missing --out <DIR>".to_string());
            PathBuf::new()
        }
    };

    if !problems.is_empty() {
        return Err(problems);
    }
    Ok(RunConfig {
        kind,
        input: input.expect("checked above"),
        order: args.order,
        delta_t: args.delta_t,
        t_axis,
        omega_axis,
        out_dir,
        formats: args.format,
        scale,
        strict: args.strict,
        max_residual: args.max_residual,
        route: args.route,
        n_max: args.n_max,
        center,
    })
}

impl RunArgs {
    fn formats_empty(&self) -> bool {
        self.format.is_empty()
    }
}

fn parse_number(text: &str, what: &str) -> Result<f64, String> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("{what} `{text}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what} must be finite"))
    }
}

/// `min:max:count` with `min < max` and `count >= 2`.
pub fn parse_axis(text: &str) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [min, max, count] = parts.as_slice() else {
        return Err(format!("expected MIN:MAX:COUNT, got `{text}`"));
    };
    let min = parse_number(min, "min")?;
    let max = parse_number(max, "max")?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| format!("count `{count}` is not a non-negative integer"))?;
    let mut problems = Vec::new();
    if count < 2 {
        problems.push(format!("count must be >= 2, got {count}"));
    }
    if min >= max {
        problems.push(format!("min {min} must be below max {max}"));
    }
    if problems.is_empty() {
        Ok(AxisSpec { min, max, count })
    } else {
        Err(problems.join("; "))
    }
}

fn parse_point(text: &str) -> Result<TfPoint, String> {
    let (t, w) = text
        .split_once(':')
        .ok_or_else(|| format!("expected T:OMEGA, got `{text}`"))?;
    TfPoint::new(parse_number(t, "T")?, parse_number(w, "Omega")?).map_err(|e| e.to_string())
}

/// `kind:key=value,...`; grid keys `span`, `dt`, `t0`, `samples` are split
/// off, the rest go to [`Generator::from_params`].
pub fn parse_generator(text: &str) -> Result<(Generator, TimeGrid), String> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let mut params: Vec<(String, f64)> = Vec::new();
    let (mut span, mut dt, mut t0, mut samples) = (None, None, None, None);
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{item}`"))?;
        let key = key.trim();
        let value = parse_number(value, key)?;
        match key {
            "span" => span = Some(value),
            "dt" => dt = Some(value),
            "t0" => t0 = Some(value),
            "samples" => {
                if value < 2.0 || value.fract() != 0.0 {
                    return Err(format!("samples must be an integer >= 2, got {value}"));
                }
                samples = Some(value as usize)
            }
            _ => params.push((key.to_string(), value)),
        }
    }
    let dt = dt.unwrap_or(DEFAULT_GEN_DT);
    let grid = match (span, t0, samples) {
        (None, Some(t0), Some(n)) => TimeGrid::new(t0, dt, n),
        (span, None, None) => TimeGrid::centered(span.unwrap_or(DEFAULT_GEN_SPAN), dt),
        _ => return Err("give either span or both t0 and samples".to_string()),
    }
    .map_err(|e| e.to_string())?;
    let borrowed: Vec<(&str, f64)> = params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let generator = Generator::from_params(kind.trim(), &borrowed).map_err(|e| e.to_string())?;
    Ok((generator, grid))
}

/// Loads or generates the input signal.
pub fn load_input(input: &InputSource) -> Result<Signal, RunError> {
    match input {
        InputSource::File { path, format } => Ok(read_signal(path, *format)?),
        InputSource::Generator {
            generator, grid, ..
        } => Ok(generator.generate(*grid)?),
    }
}

/// Files written and the report of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub report: Report,
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, bytes: impl AsRef<[u8]>) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|source| FormatError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.files.push(path);
        Ok(())
    }

    fn signal(&mut self, stem: &str, signal: &Signal, config: &RunConfig) -> Result<(), RunError> {
        for (format, ext, sf) in [
            (OutputFormat::Csv, "csv", SignalFormat::Csv),
            (OutputFormat::F64le, "f64", SignalFormat::F64le),
        ] {
            if config.writes(format) {
                let path = self.dir.join(format!("{stem}.{ext}"));
                write_signal(&path, signal, sf)?;
                self.files.push(path);
            }
        }
        Ok(())
    }

    fn complex_grid(
        &mut self,
        name: &str,
        grid: &ComplexGrid,
        config: &RunConfig,
    ) -> Result<(), RunError> {
        if config.writes(OutputFormat::Csv) {
            let text = grid_to_csv(
                grid.t_axis(),
                grid.omega_axis(),
                |i, j| grid.get(i, j),
                fmt_complex,
            );
            self.write(&format!("{name}.csv"), text)?;
        }
        Ok(())
    }

    fn real_grid(
        &mut self,
        name: &str,
        grid: &RealGrid,
        config: &RunConfig,
    ) -> Result<(), RunError> {
        if config.writes(OutputFormat::Csv) {
            let text = grid_to_csv(
                grid.t_axis(),
                grid.omega_axis(),
                |i, j| grid.get(i, j),
                fmt_f64,
            );
            self.write(&format!("{name}.csv"), text)?;
        }
        if config.writes(OutputFormat::Ppm) {
            let (nt, nw) = (grid.t_axis().len(), grid.omega_axis().len());
            let image = heatmap_ppm(nt, nw, |i, j| grid.get(i, j), config.scale);
            self.write(&format!("{name}.ppm"), image)?;
        }
        Ok(())
    }
}

fn push_moments(report: &mut Report, m: &MomentReport) {
    report.push_f64("mu_t", m.mu_t);
    report.push_f64("sigma_t", m.sigma_t);
    report.push_f64("mu_omega", m.mu_omega);
    report.push_f64("sigma_omega", m.sigma_omega);
    report.push_f64("uncertainty_product", m.uncertainty_product);
}

fn relative(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}

/// Runs a validated config, writing outputs into `config.out_dir`.
///
/// Under `--strict`, outputs and report are still written before a failed
/// check is returned as [`RunError::Numerical`].
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    let signal = load_input(&config.input)?;
    fs::create_dir_all(&config.out_dir).map_err(|source| FormatError::Io {
        path: config.out_dir.display().to_string(),
        source,
    })?;
    let mut out = Writer {
        dir: &config.out_dir,
        files: Vec::new(),
    };
    let mut report = Report::default();
    let mut failures = Vec::new();
    let energy = signal.energy();

    report.push("analysis", config.kind.name());
    match &config.input {
        InputSource::File { path, .. } => report.push("input", path.display()),
        InputSource::Generator { text, .. } => report.push("input", format!("gen:{text}")),
    }
    report.push("samples", signal.len());
    report.push_f64("t0", signal.t0());
    report.push_f64("dt", signal.dt());
    report.push_f64("signal_energy", energy);

    let t_axis = config
        .t_axis
        .map_or_else(|| default_time_axis(&signal), AxisSpec::to_axis);
    let omega_axis = config.omega_axis.map_or_else(
        || match config.kind {
            // Decimating the Wigner frequency axis aliases lags half a span apart.
            AnalysisKind::Wigner => full_omega_axis(&signal),
            _ => default_omega_axis(&signal),
        },
        AxisSpec::to_axis,
    );
    let mut check_residual = |report: &mut Report, key: &str, value: f64| {
        let residual = relative(value, energy);
        report.push_f64(key, residual);
        if residual > config.max_residual {
            failures.push(format!("{key}={residual} exceeds {}", config.max_residual));
        }
    };

    match config.kind {
        AnalysisKind::Hgf | AnalysisKind::Gabor => {
            let grid = if config.kind == AnalysisKind::Hgf {
                let spec = WindowSpec::new(config.order, config.delta_t.expect("validated"))?;
                analyze(&signal, &spec, &t_axis, &omega_axis)?
            } else {
                gabor_transform(&signal, &t_axis, &omega_axis)?
            };
            let spec = *grid.spec().expect("transform grids carry a window");
            report.push("order", spec.order());
            report.push_f64("delta_t", spec.delta_t());
            report.push_f64("delta_omega", spec.delta_omega());
            push_axes(&mut report, &t_axis, &omega_axis);
            let density = energy_density(&grid)?;
            let plane = density.integral();
            report.push_f64("energy", plane);
            check_residual(&mut report, "energy_residual", plane);
            for d in grid.diagnostics() {
                report.push("diagnostic", d);
            }
            let name = if config.kind == AnalysisKind::Hgf {
                "psi"
            } else {
                "gabor"
            };
            out.complex_grid(name, &grid, config)?;
            out.real_grid("density", &density, config)?;
        }
        AnalysisKind::Wigner => {
            push_axes(&mut report, &t_axis, &omega_axis);
            let raw = wigner_ville_complex(&signal, &t_axis, &omega_axis)?;
            let w = wigner_ville(&signal, &t_axis, &omega_axis)?;
            let plane = w.integral();
            report.push_f64("energy", plane);
            check_residual(&mut report, "energy_residual", plane);
            report.push_f64("imaginary_residue", imaginary_residue(&raw));
            report.push_f64("max", w.max());
            report.push_f64("min", w.min());
            report.push_f64("bound", energy / std::f64::consts::PI);
            out.real_grid("wigner", &w, config)?;
        }
        AnalysisKind::Marginals => {
            let spec = WindowSpec::new(config.order, config.delta_t.expect("validated"))?;
            report.push("order", spec.order());
            report.push_f64("delta_t", spec.delta_t());
            push_axes(&mut report, &t_axis, &omega_axis);
            let p = marginal_time(&signal, &spec, &t_axis)?;
            let rho = marginal_freq(&signal, &spec, &omega_axis)?;
            report.push_f64("time_marginal_energy", p.integral());
            check_residual(&mut report, "time_marginal_residual", p.integral());
            report.push_f64("freq_marginal_energy", rho.integral());
            check_residual(&mut report, "freq_marginal_residual", rho.integral());
            if config.writes(OutputFormat::Csv) {
                out.write("marginal_time.csv", marginal_csv("T", &p.axis, &p.values))?;
                out.write(
                    "marginal_freq.csv",
                    marginal_csv("omega", &rho.axis, &rho.values),
                )?;
            }
        }
        AnalysisKind::Reconstruct => {
            let delta_t = config.delta_t.expect("validated");
            report.push("route", format!("{:?}", config.route).to_lowercase());
            report.push_f64("delta_t", delta_t);
            let estimate = match config.route {
                Route::Integral => {
                    let spec = WindowSpec::new(config.order, delta_t)?;
                    report.push("order", spec.order());
                    push_axes(&mut report, &t_axis, &omega_axis);
                    let grid = analyze(&signal, &spec, &t_axis, &omega_axis)?;
                    reconstruct_integral(&grid)?
                }
                Route::Series => {
                    let point = match config.center {
                        Some(p) => p,
                        None => {
                            let m = moments(&signal)?;
                            TfPoint::new(m.mu_t, m.mu_omega)?
                        }
                    };
                    let n_max = match config.n_max {
                        Some(n) => n,
                        None => default_order(&signal, &point, delta_t)?,
                    };
                    report.push("n_max", n_max);
                    report.push_f64("center_t", point.time);
                    report.push_f64("center_omega", point.omega);
                    let coeffs = coefficients_at(&signal, &point, delta_t, n_max)?;
                    let captured: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
                    report.push_f64("coefficient_energy", captured);
                    reconstruct_series(&coeffs, &point, delta_t, signal.grid())?
                }
            };
            let error = relative_l2_error(&signal, &estimate)?;
            report.push_f64("l2_error", error);
            if error > config.max_residual {
                failures.push(format!("l2_error={error} exceeds {}", config.max_residual));
            }
            out.signal("reconstructed", &estimate, config)?;
        }
        AnalysisKind::Moments => {
            let m = moments(&signal)?;
            report.push_f64("energy", m.energy);
            push_moments(&mut report, &m);
        }
    }
    if config.kind != AnalysisKind::Moments {
        if let Ok(m) = moments(&signal) {
            push_moments(&mut report, &m);
        }
    }
    if !matches!(config.kind, AnalysisKind::Hgf | AnalysisKind::Gabor) {
        if let Some(d) = signal.leakage() {
            report.push("diagnostic", d);
        }
    }
    report.push(
        "status",
        if failures.is_empty() {
            "ok"
        } else {
            "check_failed"
        },
    );
    out.write("report.txt", report.render())?;

    if config.strict && !failures.is_empty() {
        return Err(RunError::Numerical(failures.join("; ")));
    }
    Ok(RunOutcome {
        files: out.files,
        report,
    })
}

fn push_axes(report: &mut Report, t: &Axis, w: &Axis) {
    report.push_f64("t_min", t.start());
    report.push_f64("t_max", t.last());
    report.push("t_count", t.len());
    report.push_f64("omega_min", w.start());
    report.push_f64("omega_max", w.last());
    report.push("omega_count", w.len());
}

fn marginal_csv(label: &str, axis: &Axis, values: &[f64]) -> String {
    let mut out = format!("{label},value\n");
    for (x, v) in axis.values().zip(values) {
        out.push_str(&format!("{},{}\n", fmt_f64(x), fmt_f64(*v)));
    }
    out
}

/// Parses, runs and reports; returns the process exit code.
pub fn main_with_args<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.exit_code == EXIT_OK {
                print!("{e}");
            } else {
                eprint!("{e}");
            }
            return e.exit_code;
        }
    };
    match run(&config) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
