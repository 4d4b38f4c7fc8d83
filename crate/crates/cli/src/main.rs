//! `bayesdep`: compute dependence measures, generate datasets and run sweeps.
//!
//! Exit codes: 0 on success, 1 on a numerical or runtime failure, 2 on a
//! usage, parse or configuration error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bayesdep::datagen::{Sample, Scenario};
use bayesdep::experiments::{self, ExperimentConfig};
use bayesdep::io;
use bayesdep::measure::{combine, DependenceMeasure, LogBayesFactor, PriorOdds, View};
use bayesdep::models::{
    copula_ifm_fit, copula_lnbf, functional_lnbf, nested_bic_lnbf, noisy_normal_lnbf, vonmises_log_bf, Comparator,
    GaussianBic, KnownGaussian, NoisyNormalParams,
};
use bayesdep::numerics::quadrature::QuadratureSpec;
use bayesdep::{Error, Execution, Result};

// println! panics when the reader goes away (`| head`); a closed pipe is
// reported as an io error and treated as success in main.
macro_rules! out {
    ($($arg:tt)*) => {
        std::io::Write::write_fmt(&mut std::io::stdout().lock(), format_args!("{}\n", format_args!($($arg)*)))
            .map_err(Error::from)?
    };
}

#[derive(Parser)]
#[command(name = "bayesdep", version, about = "Bayesian model-comparison measures of dependence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one dataset and print the requested view.
    Compute(ComputeArgs),
    /// Draw a dataset from a simulation scenario.
    Gen(GenArgs),
    /// Run a replicated sweep (or an ITC table) from a JSON configuration.
    Sweep(SweepArgs),
    /// Tabulate the von Mises measure over an R̄ × N grid.
    Itc(ItcArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Known,
    NoisyNormal,
    Functional,
    Copula,
    Vonmises,
    NestedBic,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Dataset CSV (`x,y` or `# dims:` layout); a `theta_rad` file for vonmises.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    tau2: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Correlation of the known dependent model.
    #[arg(long)]
    rho: Option<f64>,
    /// vonmises: mean resultant length, used with --n instead of --input.
    #[arg(long)]
    rbar: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// nested-bic: maximized log-likelihoods and dimensions, used with --n instead of --input.
    #[arg(long, allow_hyphen_values = true)]
    loglik0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    loglik1: Option<f64>,
    #[arg(long)]
    dim0: Option<usize>,
    #[arg(long)]
    dim1: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    prior_log_odds: f64,
    #[arg(long, default_value = "logr")]
    view: View,
    /// Also write the JSON record to this file.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long)]
    n: usize,
    /// Drawn from the OS and logged when omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    #[arg(long)]
    tau2: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long)]
    coupling: Option<f64>,
    /// Any other scenario parameter, as KEY=VALUE; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct ItcArgs {
    /// Comma-separated sample sizes; defaults to 20 log-spaced values in [10, 1000].
    #[arg(long, value_delimiter = ',')]
    n_grid: Vec<usize>,
    /// Comma-separated R̄ values; defaults to (k - 0.5)/20 for k = 1..20.
    #[arg(long, value_delimiter = ',')]
    rbar_grid: Vec<f64>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    #[arg(long, default_value = "itc")]
    name: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    prior_log_odds: f64,
}

/// Six significant digits in the style of C's `%g`.
fn sig6(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..6).contains(&exp) {
        trim(format!("{v:.*}", (5 - exp) as usize))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn require<T>(value: Option<T>, flag: &str, model: &str) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("--model {model} needs --{flag}")))
}

fn input_path<'a>(args: &'a ComputeArgs, model: &str) -> Result<&'a PathBuf> {
    args.input.as_ref().ok_or_else(|| Error::Config(format!("--model {model} needs --input")))
}

fn json_number(v: f64) -> serde_json::Value {
    // JSON has no infinities; keep them readable as strings
    if v.is_finite() {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

fn compute(args: &ComputeArgs) -> Result<()> {
    let prior = PriorOdds::new(args.prior_log_odds)?;
    let quad = QuadratureSpec::default();
    let (name, params, n, lnbf): (&str, serde_json::Value, usize, LogBayesFactor) = match args.model {
        Model::NoisyNormal => {
            let p = NoisyNormalParams::new(
                args.tau2.unwrap_or(1.0),
                require(args.sigma2, "sigma2", "noisy-normal")?,
                args.eps.unwrap_or(0.0),
            )?;
            let data = io::read_dataset(input_path(args, "noisy-normal")?)?;
            let lnbf = noisy_normal_lnbf(&data, &p)?;
            ("noisy-normal", json!({"tau2": p.tau2, "sigma2": p.sigma2, "eps": p.eps}), data.len(), lnbf)
        }
        Model::Functional => {
            let (tau2, sigma2) = (args.tau2.unwrap_or(1.0), require(args.sigma2, "sigma2", "functional")?);
            let data = io::read_dataset(input_path(args, "functional")?)?;
            let lnbf = functional_lnbf(&data, tau2, sigma2)?;
            ("functional", json!({"tau2": tau2, "sigma2": sigma2}), data.len(), lnbf)
        }
        Model::Known => {
            let c = KnownGaussian::new(require(args.rho, "rho", "known")?, args.tau2.unwrap_or(1.0))?;
            let data = io::read_dataset(input_path(args, "known")?)?;
            let lnbf = c.log_bayes_factor(&data)?;
            ("known", json!({"rho": args.rho, "tau2": args.tau2.unwrap_or(1.0)}), data.len(), lnbf)
        }
        Model::Copula => {
            let data = io::read_dataset(input_path(args, "copula")?)?;
            let fit = copula_ifm_fit(&data)?;
            let lnbf = copula_lnbf(&fit, data.len())?;
            if fit.rho_at_boundary {
                log::warn!("copula correlation estimate {} is at the search boundary", fit.rho_hat);
            }
            ("copula", serde_json::to_value(fit)?, data.len(), lnbf)
        }
        Model::Vonmises => {
            let (n, rbar) = match (&args.input, args.n, args.rbar) {
                (Some(path), None, None) => {
                    let p = io::read_phases(path)?;
                    (p.len(), p.rbar())
                }
                (None, Some(n), Some(rbar)) => (n, rbar),
                _ => return Err(Error::Config("--model vonmises needs either --input or both --n and --rbar".into())),
            };
            ("vonmises", json!({"rbar": rbar}), n, vonmises_log_bf(n, rbar, &quad)?)
        }
        Model::NestedBic => match &args.input {
            Some(path) => {
                let data = io::read_dataset(path)?;
                let lnbf = GaussianBic.log_bayes_factor(&data)?;
                ("nested-bic", json!({"source": "gaussian"}), data.len(), lnbf)
            }
            None => {
                let n = require(args.n, "n", "nested-bic")?;
                let (l0, l1) =
                    (require(args.loglik0, "loglik0", "nested-bic")?, require(args.loglik1, "loglik1", "nested-bic")?);
                let (d0, d1) = (require(args.dim0, "dim0", "nested-bic")?, require(args.dim1, "dim1", "nested-bic")?);
                let lnbf = nested_bic_lnbf(l0, l1, d0, d1, n)?;
                ("nested-bic", json!({"loglik0": l0, "loglik1": l1, "dim0": d0, "dim1": d1}), n, lnbf)
            }
        },
    };
    let m: DependenceMeasure = combine(prior, lnbf);
    let views: serde_json::Map<String, serde_json::Value> =
        View::ALL.iter().map(|v| (v.as_str().to_string(), json_number(m.view(*v)))).collect();
    let record = json!({
        "model": name,
        "params": params,
        "N": n,
        "prior_log_odds": prior.log_odds(),
        "lnr": json_number(m.lnr()),
        "views": views,
        "approx_flag": m.is_approximate(),
    });
    out!("{} {}", args.view, sig6(m.view(args.view)));
    out!("{record}");
    if let Some(path) = &args.json_out {
        std::fs::write(path, format!("{record}\n"))?;
    }
    Ok(())
}

fn gen(args: &GenArgs) -> Result<()> {
    let mut params = BTreeMap::new();
    let named = [
        ("rho", args.rho),
        ("tau2", args.tau2),
        ("sigma2", args.sigma2),
        ("nu", args.nu),
        ("kappa", args.kappa),
        ("mu", args.mu),
        ("coupling", args.coupling),
    ];
    params.extend(named.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
    for kv in &args.params {
        let (k, v) =
            kv.split_once('=').ok_or_else(|| Error::Config(format!("--param expects KEY=VALUE, got '{kv}'")))?;
        let v: f64 = v.parse().map_err(|_| Error::Config(format!("--param {k}: '{v}' is not a number")))?;
        params.insert(k.to_string(), v);
    }
    let allowed = Scenario::param_names(&args.scenario)?;
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Config(format!("scenario '{}' has no parameter '{k}'", args.scenario)));
    }
    let scenario = Scenario::from_params(&args.scenario, &params)?;
    let seed = args.seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        log::warn!("no --seed given; using seed {s}");
        s
    });
    match scenario.generate(args.n, seed)? {
        Sample::Paired(d) => io::write_dataset(&d, &args.out)?,
        Sample::Phases(p) => io::write_phases(&p, &args.out)?,
    }
    log::info!("wrote {} rows to {} (seed {seed})", args.n, args.out.display());
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let start = Instant::now();
    match ExperimentConfig::from_path(&args.config)? {
        ExperimentConfig::Sweep(cfg) => {
            let dir = args
                .out
                .clone()
                .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("results"));
            let result = experiments::run_sweep_with(&cfg, exec)?;
            let out = experiments::write_sweep(&result, &cfg, &dir)?;
            out!(
                "{}: {} cells x {} replications in {:.2?}",
                cfg.name,
                result.summaries.len(),
                cfg.replications,
                start.elapsed()
            );
            out!("wrote {} and {}", out.raw.display(), out.summary.display());
        }
        ExperimentConfig::ItcTable(cfg) => {
            let dir = args
                .out
                .clone()
                .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("results"));
            let prior = PriorOdds::new(cfg.prior_log_odds)?;
            let table = experiments::itc_table_with(&cfg.n_grid, &cfg.rbar_grid, prior, &cfg.quadrature, exec)?;
            let out = experiments::write_itc(&table, &cfg.name, &dir)?;
            out!("{}: {} cells in {:.2?}", cfg.name, cfg.n_grid.len() * cfg.rbar_grid.len(), start.elapsed());
            out!("wrote {}", out.table.display());
        }
    }
    Ok(())
}

fn itc(args: &ItcArgs) -> Result<()> {
    let (default_n, default_rbar) = experiments::default_grids();
    let n_grid = if args.n_grid.is_empty() { default_n } else { args.n_grid.clone() };
    let rbar_grid = if args.rbar_grid.is_empty() { default_rbar } else { args.rbar_grid.clone() };
    let cfg = experiments::ItcConfig {
        name: args.name.clone(),
        n_grid,
        rbar_grid,
        prior_log_odds: args.prior_log_odds,
        quadrature: QuadratureSpec::default(),
        output_dir: None,
    };
    let start = Instant::now();
    let table = experiments::run_itc(&cfg)?;
    let out = experiments::write_itc(&table, &cfg.name, &args.out)?;
    out!("{} cells in {:.2?}", cfg.n_grid.len() * cfg.rbar_grid.len(), start.elapsed());
    out!("wrote {}, {} and {}", out.table.display(), out.n0.display(), out.reference.display());
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("BAYESDEP_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Config(format!("BAYESDEP_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| Error::Config(e.to_string()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = configure_threads().and_then(|()| match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Gen(a) => gen(a),
        Command::Sweep(a) => sweep(a),
        Command::Itc(a) => itc(a),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
