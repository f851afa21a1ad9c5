//! `magcoh`: evaluate coherence at a point, over a grid, or as a
//! directional contrast.
//!
//! Exit codes: 0 success, 2 configuration or validation error, 3 physics
//! failure (instability under `--strict`, parametric threshold), 4 internal
//! numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use magcoh_core::config::{parse_sweep_spec, parse_table, resolve};
use magcoh_core::report::ContrastReport;
use magcoh_core::sweep::{figure_preset_on, Axis, Grid, Output, RowStatus, PRESETS};
use magcoh_core::{
    coherence_report, contrast_ratio, sweep::run_sweep_with, CoherenceReport, Error, ErrorKind, Execution, SweepResult,
    SweepSpec, SystemParams,
};

const EXIT_CONFIG: u8 = 2;
const EXIT_PHYSICS: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "magcoh",
    version,
    about = "Steady-state Gaussian coherence of a squeezed cavity-magnon-phonon system"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// TOML parameter file (flat table of parameter keys, optional `profile`).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Parameter override, e.g. `--set g_ma_hz=4.8e6`; repeatable, wins over --config.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,

    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format; defaults to csv for sweeps and report otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Treat unstable or marginal points as failures (exit 3).
    #[arg(long, global = true)]
    strict: bool,

    /// Worker threads for grid evaluation.
    #[arg(long, global = true, env = "MAGCOH_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    /// Include matrices in reports and print timing to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Report,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full coherence report at one parameter point.
    Point,
    /// Evaluate a grid from a built-in preset or a spec file.
    Sweep {
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec", value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
        preset: Option<String>,
        /// TOML sweep spec.
        #[arg(long, value_name = "PATH")]
        spec: Option<PathBuf>,
        /// Evaluate only the flagged axis-1 line cuts.
        #[arg(long)]
        line_cuts: bool,
    },
    /// Directional contrast between φ = π/2 and φ = 3π/2, at a point or
    /// along an axis (reporting the grid argmax).
    Contrast {
        /// Axis as KEY:START:STOP:COUNT[:log].
        #[arg(long, value_name = "AXIS", conflicts_with = "preset")]
        axis: Option<String>,
        /// Use a preset's axis and base parameters.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
        preset: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Config => EXIT_CONFIG,
            ErrorKind::Physics => EXIT_PHYSICS,
            ErrorKind::Numerical => EXIT_NUMERICAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn config_failure(message: String) -> Failure {
    Failure { code: EXIT_CONFIG, message }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("magcoh: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let config = match &g.config {
        Some(path) => Some(parse_table(&read(path)?)?),
        None => None,
    };
    let tables: Vec<&toml::Table> = config.iter().collect();
    let params = resolve(&tables, &g.sets)?;
    match &cli.command {
        Command::Point => cmd_point(g, &params),
        Command::Sweep { preset, spec, line_cuts } => {
            let spec = match (preset, spec) {
                (Some(name), _) => {
                    let mut s = figure_preset_on(name, params)?;
                    magcoh_core::config::apply_sets(&mut s.base, &g.sets)?;
                    s
                }
                (None, Some(path)) => parse_sweep_spec(&read(path)?, params, &g.sets)?,
                (None, None) => unreachable!("clap requires one of --preset/--spec"),
            };
            let spec = if *line_cuts {
                spec.line_cuts().ok_or_else(|| config_failure("this sweep has no line cuts".into()))?
            } else {
                spec
            };
            cmd_sweep(g, &spec)
        }
        Command::Contrast { axis, preset } => match (axis, preset) {
            (None, None) => cmd_contrast_point(g, &params),
            (Some(axis), None) => {
                let spec = SweepSpec::new(parse_axis_flag(axis)?, params, Output::CONTRASTS.to_vec());
                cmd_contrast_scan(g, &spec)
            }
            (_, Some(name)) => {
                let mut spec = figure_preset_on(name, params)?;
                magcoh_core::config::apply_sets(&mut spec.base, &g.sets)?;
                spec.outputs = Output::CONTRASTS.to_vec();
                cmd_contrast_scan(g, &spec)
            }
        },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| config_failure(format!("{}: {e}", path.display())))
}

fn emit(g: &GlobalOpts, text: &str) -> Result<(), Failure> {
    match &g.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| config_failure(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize to JSON")
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always print");
    s.push('\n');
    s
}

fn execution(g: &GlobalOpts) -> Execution {
    Execution::Parallel { threads: g.threads.map(usize::from) }
}

fn report_json(r: &CoherenceReport, verbose: bool) -> Value {
    let mut v = to_json(r);
    if !verbose {
        if let Value::Object(map) = &mut v {
            for key in ["drift", "diffusion", "covariance"] {
                map.remove(key);
            }
        }
    }
    v
}

fn point_status(r: &CoherenceReport) -> &'static str {
    if r.verdict.marginal {
        "marginal"
    } else if !r.verdict.stable {
        "unstable"
    } else {
        "ok"
    }
}

fn unstable_failure(what: &str, r: &CoherenceReport) -> Failure {
    Failure {
        code: EXIT_PHYSICS,
        message: format!("{what} is {} (spectral abscissa {:.6e} rad/s)", point_status(r), r.verdict.spectral_abscissa),
    }
}

fn csv_number(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

fn cmd_point(g: &GlobalOpts, params: &SystemParams) -> Result<(), Failure> {
    let r = coherence_report(params)?;
    let text = match g.format.unwrap_or(Format::Report) {
        Format::Report => pretty(&report_json(&r, g.verbose)),
        Format::Csv => {
            let c = r.coherences;
            let vals = [
                c.map(|c| c.c_a),
                c.map(|c| c.c_m),
                c.map(|c| c.c_b),
                c.map(|c| c.c_t),
                c.map(|c| c.w[0]),
                c.map(|c| c.w[1]),
                c.map(|c| c.w[2]),
                Some(if r.verdict.stable { 1.0 } else { 0.0 }),
                Some(r.verdict.spectral_abscissa),
            ];
            let row: Vec<String> = vals.into_iter().map(csv_number).collect();
            format!(
                "C_a,C_m,C_b,C_T,w_1,w_2,w_3,stable,spectral_abscissa,status\n{},{}\n",
                row.join(","),
                point_status(&r)
            )
        }
    };
    emit(g, &text)?;
    if g.strict && !r.verdict.usable() {
        return Err(unstable_failure("point", &r));
    }
    Ok(())
}

fn run_grid(g: &GlobalOpts, spec: &SweepSpec) -> Result<SweepResult, Failure> {
    let start = Instant::now();
    let result = run_sweep_with(spec, execution(g))?;
    if g.verbose {
        let mut counts = std::collections::BTreeMap::<String, usize>::new();
        for s in &result.status {
            *counts.entry(s.to_string()).or_default() += 1;
        }
        eprintln!("magcoh: {} rows in {:.2?}; status {counts:?}", result.rows.len(), start.elapsed());
    }
    Ok(result)
}

fn strict_rows(g: &GlobalOpts, result: &SweepResult) -> Result<(), Failure> {
    let bad = result.status.iter().filter(|s| matches!(s, RowStatus::Unstable | RowStatus::Marginal)).count();
    if g.strict && bad > 0 {
        return Err(Failure { code: EXIT_PHYSICS, message: format!("{bad} grid points are unstable or marginal") });
    }
    Ok(())
}

fn cmd_sweep(g: &GlobalOpts, spec: &SweepSpec) -> Result<(), Failure> {
    let result = run_grid(g, spec)?;
    let text = match g.format.unwrap_or(Format::Csv) {
        Format::Csv => result.to_csv(),
        Format::Report => pretty(&json!({ "spec": to_json(spec), "result": sweep_json(&result) })),
    };
    emit(g, &text)?;
    strict_rows(g, &result)
}

fn sweep_json(r: &SweepResult) -> Value {
    json!({
        "columns": r.columns,
        "rows": r.rows,
        "status": r.status.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn contrast_json(c: &ContrastReport, verbose: bool) -> Value {
    json!({
        "I_a": c.i_a,
        "I_m": c.i_m,
        "I_b": c.i_b,
        "phases": c.phases,
        "plus": report_json(&c.plus, verbose),
        "minus": report_json(&c.minus, verbose),
    })
}

fn cmd_contrast_point(g: &GlobalOpts, params: &SystemParams) -> Result<(), Failure> {
    let c = match contrast_ratio(params, params.xi) {
        Ok(c) => c,
        Err(e) if matches!(e.root(), Error::ContrastUndefined(_)) && !g.strict => {
            eprintln!("magcoh: {e}");
            let text = match g.format.unwrap_or(Format::Report) {
                Format::Report => pretty(&json!({ "undefined": e.to_string() })),
                Format::Csv => "I_a,I_m,I_b,status\n,,,unstable\n".to_string(),
            };
            return emit(g, &text);
        }
        Err(e) => return Err(e.into()),
    };
    let text = match g.format.unwrap_or(Format::Report) {
        Format::Report => pretty(&contrast_json(&c, g.verbose)),
        Format::Csv => {
            let mut s = String::from("I_a,I_m,I_b");
            for side in ["plus", "minus"] {
                for col in ["C_a", "C_m", "C_b", "C_T"] {
                    let _ = write!(s, ",{col}_{side}");
                }
            }
            s.push_str(",status\n");
            let mut vals = vec![c.i_a, c.i_m, c.i_b];
            for r in [&c.plus, &c.minus] {
                let k = r.coherences.expect("contrast sides are stable");
                vals.extend([k.c_a, k.c_m, k.c_b, k.c_t]);
            }
            let row: Vec<String> = vals.into_iter().map(|v| csv_number(Some(v))).collect();
            let _ = writeln!(s, "{},ok", row.join(","));
            s
        }
    };
    emit(g, &text)
}

fn cmd_contrast_scan(g: &GlobalOpts, spec: &SweepSpec) -> Result<(), Failure> {
    let result = run_grid(g, spec)?;
    let axis = spec.axis1.key.name();
    let mut argmax = serde_json::Map::new();
    for col in ["I_a", "I_m", "I_b"] {
        if let Some((i, v)) = result.argmax(col) {
            let at = result.rows[i][0].expect("axis column is always filled");
            argmax.insert(col.into(), json!({ axis: at, "value": v, "row": i }));
            if g.format == Some(Format::Csv) || g.verbose {
                eprintln!("magcoh: max {col} = {v:.6} at {axis} = {at:.6e}");
            }
        }
    }
    let text = match g.format.unwrap_or(Format::Report) {
        Format::Csv => result.to_csv(),
        Format::Report => {
            let best = match result.argmax("I_b") {
                Some((i, _)) => {
                    let mut p = spec.base;
                    spec.axis1.key.set(&mut p, result.rows[i][0].expect("axis column is always filled"))?;
                    contrast_json(&contrast_ratio(&p, p.xi)?, g.verbose)
                }
                None => Value::Null,
            };
            pretty(&json!({
                "axis": axis,
                "argmax": argmax,
                "at_max_I_b": best,
                "grid": sweep_json(&result),
            }))
        }
    };
    emit(g, &text)?;
    strict_rows(g, &result)
}

/// `KEY:START:STOP:COUNT[:log]`
fn parse_axis_flag(text: &str) -> Result<Axis, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || config_failure(format!("--axis expects KEY:START:STOP:COUNT[:log], got {text:?}"));
    let (key, start, stop, count, log) = match parts.as_slice() {
        [k, a, b, n] => (*k, *a, *b, *n, false),
        [k, a, b, n, "log"] => (*k, *a, *b, *n, true),
        [_, _, _, _, "linear"] => (parts[0], parts[1], parts[2], parts[3], false),
        _ => return Err(bad()),
    };
    let num = |s: &str| magcoh_core::config::parse_number(s).map_err(|_| bad());
    let count: usize = count.parse().map_err(|_| bad())?;
    let (start, stop) = (num(start)?, num(stop)?);
    let grid = if log { Grid::log(start, stop, count) } else { Grid::linear(start, stop, count) };
    Ok(Axis::new(key, grid)?)
}
