//! `paramsqueeze`: command-line front end for the squeeze, stability and
//! stress-tensor pipelines.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 numerical
//! failure (including failed acceptance criteria in `selftest`).

mod config;

use std::fs::{self, File};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use paramsqueeze::mode_evolution::SolverConfig;
use paramsqueeze::observables::{log_envelope_slope, stress_tensor, StressTensorComponents};
use paramsqueeze::profiles::Shape;
use paramsqueeze::quadrature::QuadConfig;
use paramsqueeze::squeeze::{squeeze_series, SqueezeResult};
use paramsqueeze::stability::{parameter_curve, stability_scan, ScanSpec};
use paramsqueeze::sweeps::{run_sweep, SweepAxis, SweepSpec};
use paramsqueeze::{selftest, Error};
use rayon::prelude::*;
use serde::Serialize;

use config::{Format, RunConfig};

const LONG_ABOUT: &str = "Parametric squeezing of a field mode and the late-time \
radiation of a harmonic atom in the squeezed field.\n\n\
All quantities are in natural units (hbar = c = 1): times and distances share \
one unit and frequencies are its inverse.\n\n\
Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure.";

#[derive(Parser, Debug)]
#[command(name = "paramsqueeze", version, about = "Parametric squeezing and atom radiation", long_about = LONG_ABOUT)]
struct Cli {
    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides [output].directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps and grids
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Assert that no random numbers are used. Nothing in this program
    /// draws any, so the flag only gets recorded in the metadata.
    #[arg(long, global = true, action = clap::ArgAction::SetTrue)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print ω²(t) of the configured process
    Profile(ProfileArgs),
    /// Squeeze parameters at the end of the transition and one later time
    Squeeze(SqueezeArgs),
    /// η against end time, shift or mode frequency
    Sweep(SweepArgs),
    /// Floquet stability grid in the (a, q) plane
    Stability(StabilityArgs),
    /// Late-time stress-tensor components at distance r over a time range
    Observables(ObservablesArgs),
    /// Run the acceptance criteria
    Selftest,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Times at which to evaluate ω²; repeatable
    #[arg(long = "at", allow_negative_numbers = true)]
    at: Vec<f64>,
}

#[derive(Args, Debug)]
struct SqueezeArgs {
    /// Later out-region time for the constancy check [default: end + 10]
    #[arg(long)]
    later: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AxisArg {
    Tb,
    Shift,
    Omega,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// lo,hi
    #[arg(long, value_parser = parse_range)]
    range: (f64, f64),
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
    /// Observation time [default: 1 past the latest transition end]
    #[arg(long)]
    observe: Option<f64>,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    #[arg(long, value_parser = parse_range, default_value = "0,10")]
    a_range: (f64, f64),
    #[arg(long, value_parser = parse_range, default_value = "0,5")]
    q_range: (f64, f64),
    /// Points per axis
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..), default_value_t = 400)]
    res: u64,
    /// Keep cells with q > a/2, which no physical process reaches
    #[arg(long)]
    full_plane: bool,
    /// End-time range lo,hi for the overlay curve of a sine-squared profile
    #[arg(long, value_parser = parse_range)]
    tb_range: Option<(f64, f64)>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..), default_value_t = 200)]
    tb_samples: u64,
}

#[derive(Args, Debug)]
struct ObservablesArgs {
    #[arg(long)]
    r: f64,
    /// lo,hi of the observation time; both must exceed r
    #[arg(long, value_parser = parse_range)]
    t_range: (f64, f64),
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected lo,hi but got `{s}`"))?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("range `{s}` must be finite with lo < hi"));
    }
    Ok((lo, hi))
}

/// Failure tagged with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn classify(err: anyhow::Error) -> Failure {
    let numerical = err.chain().any(|c| {
        matches!(
            c.downcast_ref::<Error>(),
            Some(
                Error::WronskianDrift { .. }
                    | Error::StepLimit { .. }
                    | Error::UnitarityViolation { .. }
                    | Error::QuadratureFailure { .. }
            )
        )
    });
    Failure { code: if numerical { 3 } else { 2 }, err }
}

#[derive(Serialize)]
struct Metadata<'a, T: Serialize> {
    command: &'a str,
    version: &'a str,
    arguments: Vec<String>,
    seedless: bool,
    config: &'a RunConfig,
    spec: T,
}

struct Session {
    cfg: RunConfig,
    out_dir: PathBuf,
    seedless: bool,
}

impl Session {
    fn format(&self) -> Format {
        self.cfg.output.format
    }

    fn write_table<T: Serialize>(&self, stem: &str, rows: &[T]) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&self.out_dir)
            .with_context(|| format!("creating {}", self.out_dir.display()))?;
        let path = match self.format() {
            Format::Csv => {
                let path = self.out_dir.join(format!("{stem}.csv"));
                let mut w = csv::Writer::from_path(&path)?;
                for r in rows {
                    w.serialize(r)?;
                }
                w.flush()?;
                path
            }
            Format::Json => {
                let path = self.out_dir.join(format!("{stem}.json"));
                serde_json::to_writer_pretty(File::create(&path)?, rows)?;
                path
            }
        };
        Ok(path)
    }

    fn write_metadata<T: Serialize>(&self, stem: &str, command: &str, spec: T) -> anyhow::Result<()> {
        let meta = Metadata {
            command,
            version: env!("CARGO_PKG_VERSION"),
            arguments: std::env::args().collect(),
            seedless: self.seedless,
            config: &self.cfg,
            spec,
        };
        let path = self.out_dir.join(format!("{stem}.meta.json"));
        serde_json::to_writer_pretty(File::create(&path)?, &meta)?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    let config_err = |e: anyhow::Error| Failure { code: 2, err: e };
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(config_err(anyhow!("--threads must be positive")));
        }
        // a second initialization within one process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(config_err)?,
        None => RunConfig::default(),
    };
    let out_dir = cli.out.clone().unwrap_or_else(|| cfg.output.directory.clone());
    let ctx = Session { cfg, out_dir, seedless: cli.seedless };
    let res = match &cli.command {
        Command::Profile(a) => cmd_profile(&ctx, a, out),
        Command::Squeeze(a) => cmd_squeeze(&ctx, a, out),
        Command::Sweep(a) => cmd_sweep(&ctx, a, out),
        Command::Stability(a) => cmd_stability(&ctx, a, out),
        Command::Observables(a) => cmd_observables(&ctx, a, out),
        Command::Selftest => cmd_selftest(out),
    };
    res.map_err(classify)
}

fn cmd_profile(ctx: &Session, args: &ProfileArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let p = ctx.cfg.profile()?;
    let times: Vec<f64> = if args.at.is_empty() {
        let hi = p.end() + p.duration();
        (0..=20).map(|k| hi * f64::from(k) / 20.0).collect()
    } else {
        args.at.clone()
    };
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time {t} precedes the initial time 0")).into());
    }
    writeln!(out, "t,omega_sq")?;
    for t in times {
        writeln!(out, "{t},{}", p.eval_omega_sq(t))?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct SqueezeReport {
    t_end: f64,
    at_end: SqueezeResult,
    t_later: f64,
    eta_later: f64,
    theta_later: f64,
    /// |η(later) − η(end)| / max(η(end), 1e−300)
    constancy_residual: f64,
}

fn cmd_squeeze(ctx: &Session, args: &SqueezeArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let p = ctx.cfg.profile()?;
    let t_end = p.end();
    let t_later = args.later.unwrap_or(t_end + 10.0);
    let s = squeeze_series(&p, &[t_end, t_later], &ctx.cfg.solver)?;
    let report = SqueezeReport {
        t_end,
        at_end: s[0],
        t_later,
        eta_later: s[1].eta,
        theta_later: s[1].theta,
        constancy_residual: (s[1].eta - s[0].eta).abs() / s[0].eta.max(1e-300),
    };
    serde_json::to_writer_pretty(&mut *out, &report)?;
    writeln!(out)?;
    Ok(0)
}

#[derive(Serialize)]
struct SweepMeta {
    axis: SweepAxis,
    range: (f64, f64),
    samples: usize,
    observation_time: f64,
    solver: SolverConfig,
    mode_frequency_normalization: &'static str,
}

fn cmd_sweep(ctx: &Session, args: &SweepArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let template = ctx.cfg.profile()?;
    let axis = match args.axis {
        AxisArg::Tb => SweepAxis::EndTime,
        AxisArg::Shift => SweepAxis::Shift,
        AxisArg::Omega => SweepAxis::ModeFrequency,
    };
    let latest_end = match axis {
        SweepAxis::EndTime => args.range.1 + template.shift,
        SweepAxis::Shift => template.t_b + args.range.1,
        SweepAxis::ModeFrequency => template.end(),
    };
    let spec = SweepSpec {
        template,
        axis,
        range: args.range,
        samples: usize::try_from(args.samples)?,
        observation_time: args.observe.unwrap_or(latest_end + 1.0),
        solver: ctx.cfg.solver,
    };
    let rows = run_sweep(&spec)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    let stem = "sweep";
    let path = ctx.write_table(stem, &rows)?;
    ctx.write_metadata(
        stem,
        "sweep",
        SweepMeta {
            axis,
            range: spec.range,
            samples: spec.samples,
            observation_time: spec.observation_time,
            solver: spec.solver,
            mode_frequency_normalization:
                "(omega_i, omega_f) scaled by omega / omega_i of the template; t_a, t_b fixed",
        },
    )?;
    writeln!(out, "wrote {} ({} rows, {failed} failed)", path.display(), rows.len())?;
    Ok(0)
}

#[derive(Serialize)]
struct StabilityMeta {
    scan: ScanSpec,
    overlay: Option<(f64, f64)>,
    convention: &'static str,
}

fn cmd_stability(ctx: &Session, args: &StabilityArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let res = usize::try_from(args.res)?;
    let scan = ScanSpec {
        a_range: args.a_range,
        q_range: args.q_range,
        a_points: res,
        q_points: res,
        physical_wedge_only: !args.full_plane,
    };
    let grid = stability_scan(&scan)?;
    let path = ctx.write_table("stability_grid", &grid)?;
    writeln!(out, "wrote {} ({} cells)", path.display(), grid.len())?;
    if let Some((lo, hi)) = args.tb_range {
        let template = ctx.cfg.profile()?;
        if !matches!(template.shape, Shape::SineSquared { .. }) {
            bail!("the overlay curve needs a sine_squared profile");
        }
        let n = usize::try_from(args.tb_samples)?;
        let tbs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
        let curve = parameter_curve(&template, &tbs)?;
        let path = ctx.write_table("stability_curve", &curve)?;
        writeln!(out, "wrote {} ({} points)", path.display(), curve.len())?;
    }
    ctx.write_metadata("stability_grid", "stability", StabilityMeta {
            scan,
            overlay: args.tb_range,
            convention: "stable = true when |trace of the monodromy over [0, pi]| <= 2 + 1e-9; \
                         false marks parametric resonance",
        })?;
    Ok(0)
}

#[derive(Serialize)]
struct ObservableRow {
    r: f64,
    t: f64,
    tr_st_rr: f64,
    tr_st_hr: f64,
    tr_ns_rr: f64,
    tr_ns_hr: f64,
    tt_st: f64,
    tt_ns: f64,
    err: f64,
}

impl From<StressTensorComponents> for ObservableRow {
    fn from(c: StressTensorComponents) -> Self {
        Self {
            r: c.r,
            t: c.t,
            tr_st_rr: c.tr_st_rr,
            tr_st_hr: c.tr_st_hr,
            tr_ns_rr: c.tr_ns_rr,
            tr_ns_hr: c.tr_ns_hr,
            tt_st: c.tt_st_total,
            tt_ns: c.tt_ns_total,
            err: c.quadrature_error,
        }
    }
}

#[derive(Serialize)]
struct ObservablesMeta {
    r: f64,
    t_range: (f64, f64),
    samples: usize,
    quadrature: QuadConfig,
}

fn cmd_observables(ctx: &Session, args: &ObservablesArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let atom = ctx.cfg.atom()?;
    let bath = ctx.cfg.bath()?;
    let (lo, hi) = args.t_range;
    if !(lo > args.r) {
        return Err(Error::InvalidArgument(format!("t range must start after r = {}", args.r)).into());
    }
    let n = usize::try_from(args.samples)?;
    let quad = QuadConfig::default();
    let times: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    let rows: Vec<StressTensorComponents> = times
        .par_iter()
        .map(|&t| stress_tensor(&atom, &bath, args.r, t, &quad))
        .collect::<Result<_, _>>()?;
    let envelope: Vec<(f64, f64)> = rows
        .iter()
        .map(|c| (c.t - c.r, (c.tr_ns_rr + c.tr_ns_hr).abs()))
        .filter(|p| p.1 > 0.0)
        .collect();
    let table: Vec<ObservableRow> = rows.into_iter().map(Into::into).collect();
    let path = ctx.write_table("observables", &table)?;
    ctx.write_metadata(
        "observables",
        "observables",
        ObservablesMeta { r: args.r, t_range: args.t_range, samples: n, quadrature: quad },
    )?;
    writeln!(out, "wrote {} ({} rows)", path.display(), table.len())?;
    if let Ok(slope) = log_envelope_slope(&envelope) {
        writeln!(out, "least-squares slope of ln|tr_ns_rr + tr_ns_hr| against t: {slope:.6}")?;
    }
    Ok(0)
}

fn cmd_selftest(out: &mut dyn Write) -> anyhow::Result<u8> {
    let mut failed = 0;
    for id in 1..=selftest::CRITERIA {
        let o = selftest::run(id);
        writeln!(out, "{}", o.line())?;
        failed += usize::from(!o.passed);
    }
    writeln!(out, "{} of {} criteria passed", usize::from(selftest::CRITERIA) - failed, selftest::CRITERIA)?;
    Ok(if failed == 0 { 0 } else { 3 })
}


#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    const CONFIG: &str = r#"
[profile]
variant = "sine_squared"
omega_i = 3.0
omega_f = 8.0
t_a = 10.0
t_b = 12.95
n = 11

[atom]
m = 1.0
gamma = 0.2
omega_r = 1.0

[bath]
beta_t = 2.0
eta = 0.5
"#;

    fn invoke(dir: &Path, config: &str, args: &[&str]) -> (Result<u8, Failure>, String) {
        let cfg_path = dir.join("run.toml");
        fs::write(&cfg_path, config).unwrap();
        let mut argv = vec!["paramsqueeze".to_string(), "--config".into(), cfg_path.display().to_string()];
        argv.extend(["--out".to_string(), dir.join("out").display().to_string()]);
        argv.extend(args.iter().map(|s| s.to_string()));
        let cli = Cli::try_parse_from(argv).unwrap();
        let mut buf = Vec::new();
        let res = run(cli, &mut buf);
        (res, String::from_utf8(buf).unwrap())
    }

    fn code(res: Result<u8, Failure>) -> u8 {
        res.unwrap_or_else(|f| f.code)
    }

    #[test]
    fn profile_prints_requested_samples() {
        let dir = tempfile::tempdir().unwrap();
        let (res, out) = invoke(dir.path(), CONFIG, &["profile", "--at", "10", "--at", "13"]);
        assert_eq!(code(res), 0);
        assert_eq!(out, "t,omega_sq\n10,9\n13,64\n");
    }

    #[test]
    fn negative_time_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let (res, _) = invoke(dir.path(), CONFIG, &["profile", "--at", "-1"]);
        assert_eq!(code(res), 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let bad = CONFIG.replace("n = 11", "n = 11\nharmonics = 3");
        let (res, _) = invoke(dir.path(), &bad, &["squeeze"]);
        let f = res.unwrap_err();
        assert_eq!(f.code, 2);
        assert!(format!("{:#}", f.err).contains("harmonics"));
    }

    #[test]
    fn squeeze_reports_constant_eta() {
        let dir = tempfile::tempdir().unwrap();
        let (res, out) = invoke(dir.path(), CONFIG, &["squeeze", "--later", "40"]);
        assert_eq!(code(res), 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["constancy_residual"].as_f64().unwrap() < 1e-9);
        assert!(v["at_end"]["eta"].as_f64().unwrap() > 3.0);
    }

    #[test]
    fn step_budget_exhaustion_is_numerical() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = format!("{CONFIG}\n[solver]\nmax_steps = 5\n");
        let (res, _) = invoke(dir.path(), &cfg, &["squeeze"]);
        assert_eq!(code(res), 3);
    }

    #[test]
    fn sweep_writes_table_and_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let (res, _) = invoke(dir.path(), CONFIG, &["sweep", "--axis", "shift", "--range", "0,4", "--samples", "5"]);
        assert_eq!(code(res), 0);
        let mut rdr = csv::Reader::from_path(dir.path().join("out/sweep.csv")).unwrap();
        let etas: Vec<f64> = rdr.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
        assert_eq!(etas.len(), 5);
        // shifting the whole process in time leaves η unchanged
        assert!(etas.iter().all(|e| (e - etas[0]).abs() < 1e-7 * etas[0]));
        let meta: serde_json::Value =
            serde_json::from_reader(File::open(dir.path().join("out/sweep.meta.json")).unwrap()).unwrap();
        assert_eq!(meta["spec"]["axis"], "shift");
        assert_eq!(meta["spec"]["samples"], 5);
    }

    #[test]
    fn too_few_samples_is_a_usage_error() {
        let r = Cli::try_parse_from(["paramsqueeze", "sweep", "--axis", "tb", "--range", "1,2", "--samples", "1"]);
        assert!(r.is_err());
        let r = Cli::try_parse_from(["paramsqueeze", "sweep", "--axis", "tb", "--range", "2,1", "--samples", "3"]);
        assert!(r.is_err());
    }

    #[test]
    fn stability_grid_and_overlay() {
        let dir = tempfile::tempdir().unwrap();
        let (res, _) = invoke(
            dir.path(),
            CONFIG,
            &["stability", "--res", "6", "--full-plane", "--tb-range", "11,13", "--tb-samples", "3"],
        );
        assert_eq!(code(res), 0);
        let grid = fs::read_to_string(dir.path().join("out/stability_grid.csv")).unwrap();
        assert_eq!(grid.lines().count(), 37);
        let curve = fs::read_to_string(dir.path().join("out/stability_curve.csv")).unwrap();
        assert_eq!(curve.lines().count(), 4);
    }

    #[test]
    fn overlay_needs_sine_squared_profile() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = CONFIG.replace("sine_squared", "piecewise_linear").replace("n = 11\n", "");
        let (res, _) = invoke(dir.path(), &cfg, &["stability", "--res", "3", "--tb-range", "11,13"]);
        assert_eq!(code(res), 2);
    }

    #[test]
    fn observables_json_rows() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = format!("{CONFIG}\n[output]\nformat = \"json\"\n");
        let (res, out) = invoke(dir.path(), &cfg, &["observables", "--r", "10", "--t-range", "15,25", "--samples", "3"]);
        assert_eq!(code(res), 0, "{out}");
        let rows: serde_json::Value =
            serde_json::from_reader(File::open(dir.path().join("out/observables.json")).unwrap()).unwrap();
        let rows = rows.as_array().unwrap();
        assert_eq!(rows.len(), 3);
        for row in rows {
            let rr = row["tr_st_rr"].as_f64().unwrap();
            let hr = row["tr_st_hr"].as_f64().unwrap();
            assert!((rr + hr).abs() <= 1e-8 * rr.abs());
        }
    }

    #[test]
    fn observation_inside_light_cone_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let (res, _) = invoke(dir.path(), CONFIG, &["observables", "--r", "10", "--t-range", "5,25", "--samples", "3"]);
        assert_eq!(code(res), 2);
    }

    #[test]
    fn zero_temperature_keyword() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = CONFIG.replace("beta_t = 2.0", "beta_t = \"zero_temperature\"");
        let (res, _) = invoke(dir.path(), &cfg, &["observables", "--r", "5", "--t-range", "6,8", "--samples", "2"]);
        assert_eq!(code(res), 0);
    }

    #[test]
    fn custom_table_resolves_against_config_directory() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("ramp.txt"), "# t omega_sq
0 1
1 2.5
2 4
").unwrap();
        let cfg = "[profile]\nvariant = \"custom\"\ntable = \"ramp.txt\"\nshift = 1.0\n";
        let (res, out) = invoke(dir.path(), cfg, &["profile", "--at", "1", "--at", "3"]);
        assert_eq!(code(res), 0);
        assert_eq!(out, "t,omega_sq\n1,1\n3,4\n");
    }
}
