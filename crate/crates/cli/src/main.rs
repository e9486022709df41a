//! `qsteer`: machine-readable sweeps of steering-inequality bounds and GHZ
//! violation weights under imprecise measurements, plus state verification
//! and an adversarial LHS-model search.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 bound
//! falsification found by the adversary (a software defect, not misuse).

mod output;

use clap::{Args, Parser, Subcommand};
use output::{g17, to_json_pretty, CsvTable, Format, GridSpec, OutputOpts};
use qsteer_core::{
    bound_first_order, bound_ideal, bound_imprecise_uniform, depolarized_ghz, depolarized_weight,
    di_weight, ghz_weight, search_max, threshold_p, verify, ImprecisionParam, Scenario,
    SignPattern, Threshold, ThresholdMethod, MAX_IMPRECISION,
};
use rayon::prelude::*;
use serde::Serialize;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qsteer",
    version,
    about = "Multipartite steering verification under imprecise measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the ideal, corrected, and first-order bounds over imprecision
    Bounds(BoundsArgs),
    /// Sweep GHZ violation weights over imprecision for several party counts
    Weights(WeightsArgs),
    /// Depolarized-GHZ violation weights and visibility thresholds
    Depolarized(DepolarizedArgs),
    /// Randomized LHS-model search stressing the bounds
    Adversary(AdversaryArgs),
    /// Evaluate and classify a depolarized GHZ state in one scenario
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// Total party count
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Trusted party count
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Imprecision grid start:stop:steps
    #[arg(long = "eps-range")]
    eps_range: Option<GridSpec>,
    /// Echoed in the config; sweeps are deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct WeightsArgs {
    /// Party counts, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4, 5, 6])]
    n: Vec<usize>,
    /// steering trusts floor(N/2) parties; entanglement trusts all N
    #[arg(long, value_enum, default_value_t = Mode::Steering)]
    mode: Mode,
    /// Imprecision grid start:stop:steps
    #[arg(long = "eps-range")]
    eps_range: Option<GridSpec>,
    /// Echoed in the config; sweeps are deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Steering,
    Entanglement,
}

#[derive(Args)]
struct DepolarizedArgs {
    /// Total party count
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Trusted party count (at least 1)
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Imprecision levels, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.005, 0.01])]
    eps: Vec<f64>,
    /// Visibility grid start:stop:steps
    #[arg(long = "p-range")]
    p_range: Option<GridSpec>,
    /// Echoed in the config; sweeps are deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct AdversaryArgs {
    /// Total party count
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Trusted party count
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Imprecision for every party
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Random models to evaluate before refinement
    #[arg(long, default_value_t = 10_000)]
    iterations: usize,
    /// Hidden-variable components per model
    #[arg(long, default_value_t = 4)]
    mixtures: usize,
    /// Search seed; identical seeds give byte-identical reports
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct VerifyArgs {
    /// Total party count
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Trusted party count
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Per-party imprecision: one value for all parties, or N comma-separated values
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0])]
    eps: Vec<f64>,
    /// Depolarizing visibility of the GHZ state
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Sign pattern such as "++-+"; all + when omitted
    #[arg(long)]
    pattern: Option<String>,
    #[command(flatten)]
    output: OutputOpts,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(args) => cmd_bounds(args),
        Command::Weights(args) => cmd_weights(args),
        Command::Depolarized(args) => cmd_depolarized(args),
        Command::Adversary(args) => cmd_adversary(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn imprecision(value: f64) -> Result<ImprecisionParam, String> {
    ImprecisionParam::new(value).map_err(|e| e.to_string())
}

fn eps_grid_points(grid: &GridSpec) -> Result<Vec<ImprecisionParam>, String> {
    grid.validate()?;
    grid.points().into_iter().map(imprecision).collect()
}

const DEFAULT_EPS_STEPS: usize = 50;

#[derive(Serialize)]
struct BoundsRow {
    eps: f64,
    b0: f64,
    b_eps: f64,
    b_fo: f64,
}

#[derive(Serialize)]
struct BoundsConfig {
    command: &'static str,
    n: usize,
    t: usize,
    eps_range: GridSpec,
    seed: u64,
    format: Format,
}

#[derive(Serialize)]
struct BoundsOutput {
    config: BoundsConfig,
    rows: Vec<BoundsRow>,
}

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode, String> {
    let grid = args
        .eps_range
        .unwrap_or(GridSpec::new(0.0, MAX_IMPRECISION, DEFAULT_EPS_STEPS));
    let eps_points = eps_grid_points(&grid)?;
    let rows: Vec<BoundsRow> = eps_points
        .par_iter()
        .map(|&e| {
            let s = Scenario::uniform(args.n, args.t, e).map_err(|err| err.to_string())?;
            Ok(BoundsRow {
                eps: e.value(),
                b0: bound_ideal(&s),
                b_eps: bound_imprecise_uniform(&s, e),
                b_fo: bound_first_order(&s, e),
            })
        })
        .collect::<Result<_, String>>()?;

    let content = match args.output.format {
        Format::Csv => {
            let mut table = CsvTable::new(["eps", "b0", "b_eps", "b_fo"]);
            for r in &rows {
                table.row([g17(r.eps), g17(r.b0), g17(r.b_eps), g17(r.b_fo)]);
            }
            table.finish()
        }
        Format::Json => to_json_pretty(&BoundsOutput {
            config: BoundsConfig {
                command: "bounds",
                n: args.n,
                t: args.t,
                eps_range: grid,
                seed: args.seed,
                format: args.output.format,
            },
            rows,
        }),
    };
    args.output.emit(&content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct WeightsRow {
    n: usize,
    t: usize,
    eps: f64,
    w_g: f64,
}

#[derive(Serialize)]
struct WeightsConfig {
    command: &'static str,
    n: Vec<usize>,
    mode: Mode,
    eps_range: GridSpec,
    seed: u64,
    format: Format,
}

#[derive(Serialize)]
struct WeightsOutput {
    config: WeightsConfig,
    rows: Vec<WeightsRow>,
}

fn cmd_weights(args: WeightsArgs) -> Result<ExitCode, String> {
    let grid = args
        .eps_range
        .unwrap_or(GridSpec::new(0.0, MAX_IMPRECISION, DEFAULT_EPS_STEPS));
    let eps_points = eps_grid_points(&grid)?;
    let mut rows = Vec::new();
    for &n in &args.n {
        let t = match args.mode {
            Mode::Steering => n / 2,
            Mode::Entanglement => n,
        };
        let block: Vec<WeightsRow> = eps_points
            .par_iter()
            .map(|&e| {
                let s = Scenario::uniform(n, t, e).map_err(|err| err.to_string())?;
                let w_g = ghz_weight(&s, e).map_err(|err| err.to_string())?;
                Ok(WeightsRow {
                    n,
                    t,
                    eps: e.value(),
                    w_g,
                })
            })
            .collect::<Result<_, String>>()?;
        rows.extend(block);
    }

    let content = match args.output.format {
        Format::Csv => {
            let mut table = CsvTable::new(["n", "t", "eps", "w_g"]);
            for r in &rows {
                table.row([r.n.to_string(), r.t.to_string(), g17(r.eps), g17(r.w_g)]);
            }
            table.finish()
        }
        Format::Json => to_json_pretty(&WeightsOutput {
            config: WeightsConfig {
                command: "weights",
                n: args.n.clone(),
                mode: args.mode,
                eps_range: grid,
                seed: args.seed,
                format: args.output.format,
            },
            rows,
        }),
    };
    args.output.emit(&content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DepolarizedRow {
    p: f64,
    eps: f64,
    w_dq: f64,
    w_ddi: f64,
}

#[derive(Serialize)]
struct ThresholdRow {
    method: String,
    eps: f64,
    /// None means the weight never crosses 1: unverifiable at any visibility.
    p_star: Option<f64>,
}

#[derive(Serialize)]
struct DepolarizedConfig {
    command: &'static str,
    n: usize,
    t: usize,
    eps: Vec<f64>,
    p_range: GridSpec,
    seed: u64,
    format: Format,
}

#[derive(Serialize)]
struct DepolarizedOutput {
    config: DepolarizedConfig,
    rows: Vec<DepolarizedRow>,
    thresholds: Vec<ThresholdRow>,
}

fn cmd_depolarized(args: DepolarizedArgs) -> Result<ExitCode, String> {
    let grid = args.p_range.unwrap_or(GridSpec::new(0.0, 1.0, 101));
    grid.validate()?;
    let p_points = grid.points();
    for &p in &p_points {
        if !(0.0..=1.0).contains(&p) {
            return Err(format!("visibility grid leaves [0, 1]: p = {p}"));
        }
    }
    let eps_points = args
        .eps
        .iter()
        .map(|&e| imprecision(e))
        .collect::<Result<Vec<_>, _>>()?;
    if eps_points.is_empty() {
        return Err("need at least one imprecision level".into());
    }

    let rows: Vec<DepolarizedRow> = p_points
        .par_iter()
        .map(|&p| {
            eps_points
                .iter()
                .map(|&e| {
                    let s = Scenario::uniform(args.n, args.t, e).map_err(|err| err.to_string())?;
                    Ok(DepolarizedRow {
                        p,
                        eps: e.value(),
                        w_dq: depolarized_weight(&s, e, p).map_err(|err| err.to_string())?,
                        w_ddi: di_weight(args.n, e, p).map_err(|err| err.to_string())?,
                    })
                })
                .collect::<Result<Vec<_>, String>>()
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut thresholds = Vec::new();
    for method in [ThresholdMethod::Quantitative, ThresholdMethod::DeviceIndependent] {
        for &e in &eps_points {
            let s = Scenario::uniform(args.n, args.t, e).map_err(|err| err.to_string())?;
            let p_star = match threshold_p(&s, e, method).map_err(|err| err.to_string())? {
                Threshold::Crossing(p) => Some(p),
                Threshold::Unverifiable => None,
            };
            thresholds.push(ThresholdRow {
                method: method.to_string(),
                eps: e.value(),
                p_star,
            });
        }
    }

    let content = match args.output.format {
        Format::Csv => {
            let mut table = CsvTable::new(["p", "eps", "w_dq", "w_ddi"]);
            for r in &rows {
                table.row([g17(r.p), g17(r.eps), g17(r.w_dq), g17(r.w_ddi)]);
            }
            let mut summary = CsvTable::new(["method", "eps", "p_star"]);
            for t in &thresholds {
                let p_star = match t.p_star {
                    Some(p) => g17(p),
                    None => "unverifiable".to_string(),
                };
                summary.row([t.method.clone(), g17(t.eps), p_star]);
            }
            format!("{}\n{}", table.finish(), summary.finish())
        }
        Format::Json => to_json_pretty(&DepolarizedOutput {
            config: DepolarizedConfig {
                command: "depolarized",
                n: args.n,
                t: args.t,
                eps: args.eps.clone(),
                p_range: grid,
                seed: args.seed,
                format: args.output.format,
            },
            rows,
            thresholds,
        }),
    };
    args.output.emit(&content)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ModelComponentJson {
    weight: f64,
    trusted_blochs: Vec<[f64; 3]>,
    untrusted_responses: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct AdversaryConfig {
    command: &'static str,
    n: usize,
    t: usize,
    eps: f64,
    iterations: usize,
    mixtures: usize,
    seed: u64,
    format: Format,
}

#[derive(Serialize)]
struct AdversaryOutput {
    config: AdversaryConfig,
    best_l: f64,
    bound: f64,
    bound_ideal: f64,
    reached_gap: bool,
    bound_respected: bool,
    best_model: Vec<ModelComponentJson>,
}

fn cmd_adversary(args: AdversaryArgs) -> Result<ExitCode, String> {
    let e = imprecision(args.eps)?;
    let s = Scenario::uniform(args.n, args.t, e).map_err(|err| err.to_string())?;
    let report =
        search_max(&s, e, args.iterations, args.mixtures, args.seed).map_err(|err| err.to_string())?;
    let b0 = bound_ideal(&s);

    let components: Vec<ModelComponentJson> = report
        .best_model
        .weights()
        .iter()
        .zip(report.best_model.components())
        .map(|(&weight, c)| ModelComponentJson {
            weight,
            trusted_blochs: c.trusted_blochs.clone(),
            untrusted_responses: c.untrusted_responses.clone(),
        })
        .collect();

    let content = match args.output.format {
        Format::Csv => {
            let mut table = CsvTable::new(["field", "value"]);
            table.row(["best_l".to_string(), g17(report.best_l)]);
            table.row(["bound".to_string(), g17(report.bound)]);
            table.row(["bound_ideal".to_string(), g17(b0)]);
            table.row(["reached_gap".to_string(), report.reached_gap.to_string()]);
            table.row([
                "bound_respected".to_string(),
                report.bound_respected().to_string(),
            ]);
            table.row(["iterations".to_string(), report.iterations.to_string()]);
            table.row(["seed".to_string(), report.seed.to_string()]);
            for (lambda, c) in components.iter().enumerate() {
                table.row([format!("model.{lambda}.weight"), g17(c.weight)]);
                for (k, r) in c.trusted_blochs.iter().enumerate() {
                    for (axis, label) in ["x", "y", "z"].iter().enumerate() {
                        table.row([
                            format!("model.{lambda}.trusted.{k}.{label}"),
                            g17(r[axis]),
                        ]);
                    }
                }
                for (j, &(x, y)) in c.untrusted_responses.iter().enumerate() {
                    table.row([format!("model.{lambda}.untrusted.{j}.x"), g17(x)]);
                    table.row([format!("model.{lambda}.untrusted.{j}.y"), g17(y)]);
                }
            }
            table.finish()
        }
        Format::Json => to_json_pretty(&AdversaryOutput {
            config: AdversaryConfig {
                command: "adversary",
                n: args.n,
                t: args.t,
                eps: args.eps,
                iterations: args.iterations,
                mixtures: args.mixtures,
                seed: args.seed,
                format: args.output.format,
            },
            best_l: report.best_l,
            bound: report.bound,
            bound_ideal: b0,
            reached_gap: report.reached_gap,
            bound_respected: report.bound_respected(),
            best_model: components,
        }),
    };
    args.output.emit(&content)?;

    if !report.bound_respected() {
        eprintln!(
            "error: bound falsification: best_l = {} exceeds bound = {}",
            report.best_l, report.bound
        );
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyRow {
    l: f64,
    b0: f64,
    b_eps: f64,
    weight: f64,
    classification: String,
}

#[derive(Serialize)]
struct VerifyConfig {
    command: &'static str,
    n: usize,
    t: usize,
    eps: Vec<f64>,
    p: f64,
    pattern: String,
    format: Format,
}

#[derive(Serialize)]
struct VerifyOutput {
    config: VerifyConfig,
    rows: Vec<VerifyRow>,
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let eps_values: Vec<f64> = match args.eps.len() {
        1 => vec![args.eps[0]; args.n],
        len if len == args.n => args.eps.clone(),
        len => {
            return Err(format!(
                "--eps takes 1 or {} values for n = {}, got {len}",
                args.n, args.n
            ))
        }
    };
    let eps_list = eps_values
        .iter()
        .map(|&e| imprecision(e))
        .collect::<Result<Vec<_>, _>>()?;
    let s = Scenario::new(args.n, args.t, eps_list).map_err(|err| err.to_string())?;
    let pattern = match &args.pattern {
        Some(text) => text
            .parse::<SignPattern>()
            .map_err(|err| err.to_string())?,
        None => SignPattern::all_plus(args.n).map_err(|err| err.to_string())?,
    };
    if pattern.len() != args.n {
        return Err(format!(
            "pattern covers {} parties, scenario has {}",
            pattern.len(),
            args.n
        ));
    }
    let rho = depolarized_ghz(args.n, args.p).map_err(|err| err.to_string())?;
    let result = verify(&rho, &s, &s.device_pairs(), &pattern).map_err(|err| err.to_string())?;
    let row = VerifyRow {
        l: result.l_value,
        b0: result.bound_ideal,
        b_eps: result.bound_imprecise,
        weight: result.weight,
        classification: result.classification.to_string(),
    };

    let content = match args.output.format {
        Format::Csv => {
            let mut table = CsvTable::new(["l", "b0", "b_eps", "weight", "classification"]);
            table.row([
                g17(row.l),
                g17(row.b0),
                g17(row.b_eps),
                g17(row.weight),
                row.classification.clone(),
            ]);
            table.finish()
        }
        Format::Json => to_json_pretty(&VerifyOutput {
            config: VerifyConfig {
                command: "verify",
                n: args.n,
                t: args.t,
                eps: eps_values,
                p: args.p,
                pattern: pattern.to_string(),
                format: args.output.format,
            },
            rows: vec![row],
        }),
    };
    args.output.emit(&content)?;
    Ok(ExitCode::SUCCESS)
}
