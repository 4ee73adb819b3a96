//! Command-line front end for discrete-time quantum walks on ported
//! graphs: run either formulation, audit their unitary equivalence, read
//! positions across pictures, and validate graph files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use qwalk::coin::CoinWalkOperator;
use qwalk::equivalence::{
    relabeled_graph, scattering_from_coin, verify_equivalence, EquivalenceMap, VerifyOptions,
};
use qwalk::graph::{PortedGraph, ShiftPermutation, ValidationReport};
use qwalk::io::{
    parse_graph, parse_initial_state, parse_port_tables, parse_unitaries, write_csv, write_json,
};
use qwalk::measure::{distribution, Distribution, DistributionMode};
use qwalk::scattering::ScatteringWalkOperator;
use qwalk::state::WalkState;
use qwalk::unitary::WalkModel;
use qwalk::{Error, Result};

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Discrete-time quantum walks on undirected graphs: coin and scattering formulations, their exact equivalence, and cross-picture measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a walk and write one position distribution per step.
    Simulate(SimulateArgs),
    /// Audit the unitary equivalence between the two formulations.
    EquivCheck(EquivCheckArgs),
    /// Run one walk and write both the native and the cross-picture
    /// distributions.
    CrossProb(CrossProbArgs),
    /// Check a graph file and print its structural report.
    ValidateGraph(ValidateGraphArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Graph description file (JSON).
    #[arg(long)]
    graph: PathBuf,
    /// Formulation to run: coin or scattering.
    #[arg(long)]
    model: String,
    /// Coefficient file (JSON, `coin` or `gamma` section).
    #[arg(long)]
    unitaries: PathBuf,
    /// Initial state file (JSON).
    #[arg(long)]
    initial: PathBuf,
    /// Number of steps; distributions cover steps 0..=steps.
    #[arg(long)]
    steps: usize,
    /// Readout basis: coin-nodes, scattering-edges, or cross
    /// (defaults to the model's native basis).
    #[arg(long)]
    mode: Option<String>,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
    /// Port assignment overrides file (JSON).
    #[arg(long)]
    mu: Option<PathBuf>,
    /// Port alignment file defining the scattering labeling (JSON).
    #[arg(long)]
    phi: Option<PathBuf>,
}

#[derive(Args)]
struct EquivCheckArgs {
    /// Graph description file (JSON).
    #[arg(long)]
    graph: PathBuf,
    /// Coin coefficient file (JSON, `coin` section).
    #[arg(long)]
    coin: PathBuf,
    /// Scattering coefficient file to audit (JSON, `gamma` section).
    /// Loaded without the unitarity gate so that corrupted inputs
    /// surface in the report. Derived from the coin file when absent.
    #[arg(long)]
    gamma: Option<PathBuf>,
    /// Port assignment overrides file (JSON).
    #[arg(long)]
    mu: Option<PathBuf>,
    /// Port alignment file defining the scattering labeling (JSON).
    #[arg(long)]
    phi: Option<PathBuf>,
    /// Report output file (JSON).
    #[arg(long)]
    report: PathBuf,
    /// Acceptance threshold for every deviation measure.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Largest dimension at which the dense comparison runs.
    #[arg(long, default_value_t = qwalk::DEFAULT_DENSE_CAP)]
    dense_cap: usize,
    /// Number of randomized state probes.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Seed for the state probes.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct CrossProbArgs {
    /// Graph description file (JSON).
    #[arg(long)]
    graph: PathBuf,
    /// Formulation to run: coin or scattering.
    #[arg(long)]
    model: String,
    /// Coefficient file (JSON, `coin` or `gamma` section).
    #[arg(long)]
    unitaries: PathBuf,
    /// Initial state file (JSON).
    #[arg(long)]
    initial: PathBuf,
    /// Number of steps; distributions cover steps 0..=steps.
    #[arg(long)]
    steps: usize,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output file for the native-basis distributions.
    #[arg(long)]
    native_out: PathBuf,
    /// Output file for the cross-picture distributions.
    #[arg(long)]
    cross_out: PathBuf,
    /// Port assignment overrides file (JSON).
    #[arg(long)]
    mu: Option<PathBuf>,
    /// Port alignment file defining the scattering labeling (JSON).
    #[arg(long)]
    phi: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateGraphArgs {
    /// Graph description file (JSON).
    #[arg(long)]
    graph: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(args) => run_simulate(&args),
        Command::EquivCheck(args) => run_equiv_check(&args),
        Command::CrossProb(args) => run_cross_prob(&args),
        Command::ValidateGraph(args) => run_validate_graph(&args),
    };
    if let Err(err) = outcome {
        eprintln!("error[{}]: {err}", err.category());
        std::process::exit(err.exit_code());
    }
}

/// Every resolved component a run can need: both labelings, the shift,
/// and the basis bijection between the pictures.
struct Setup {
    coin_graph: Arc<PortedGraph>,
    scat_graph: Arc<PortedGraph>,
    shift: ShiftPermutation,
    map: EquivalenceMap,
    scattering_report: Option<ValidationReport>,
    primary_report: ValidationReport,
}

fn resolve(graph_path: &Path, mu: Option<&Path>, phi: Option<&Path>) -> Result<Setup> {
    let spec = parse_graph(&fs::read_to_string(graph_path)?)?;

    let mu_table = match (spec.mu, mu) {
        (Some(_), Some(_)) => {
            return Err(Error::Parse {
                message: "port assignment given both in the graph file and via --mu".into(),
            })
        }
        (Some(table), None) => Some(table),
        (None, Some(path)) => Some(parse_port_tables(&fs::read_to_string(path)?)?),
        (None, None) => None,
    };
    let shift = match &mu_table {
        Some(table) => ShiftPermutation::custom(&spec.coin, table)?,
        None => ShiftPermutation::flip_flop(&spec.coin),
    };

    let scat = match (spec.scattering, phi) {
        (Some(_), Some(_)) => {
            return Err(Error::Parse {
                message: "scattering labeling given both in the graph file and via --phi".into(),
            })
        }
        (Some(graph), None) => Some(graph),
        (None, Some(path)) => Some(relabeled_graph(
            &spec.coin,
            &parse_port_tables(&fs::read_to_string(path)?)?,
        )?),
        (None, None) => None,
    };
    let map = match &scat {
        Some(graph) => EquivalenceMap::between(&shift, graph)?,
        None => EquivalenceMap::identical_labelings(&shift),
    };

    Ok(Setup {
        primary_report: spec.coin.validate(),
        scattering_report: scat.as_ref().map(|g| g.validate()),
        scat_graph: scat.unwrap_or_else(|| spec.coin.clone()),
        coin_graph: spec.coin,
        shift,
        map,
    })
}

fn parse_model(name: &str) -> Result<WalkModel> {
    match name {
        "coin" => Ok(WalkModel::Coin),
        "scattering" => Ok(WalkModel::Scattering),
        other => Err(Error::Parse {
            message: format!("unknown model `{other}` (expected coin or scattering)"),
        }),
    }
}

enum OutputFormat {
    Csv,
    Json,
}

fn parse_format(name: &str) -> Result<OutputFormat> {
    match name {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(Error::Parse {
            message: format!("unknown output format `{other}` (expected csv or json)"),
        }),
    }
}

fn write_series(
    path: &Path,
    format: &OutputFormat,
    series: &[Distribution<f64>],
) -> Result<()> {
    let mut file = fs::File::create(path)?;
    match format {
        OutputFormat::Csv => write_csv(&mut file, series)?,
        OutputFormat::Json => write_json(&mut file, series)?,
    }
    Ok(())
}

/// One walk under either formulation.
enum Walk {
    Coin(CoinWalkOperator<f64>),
    Scattering(ScatteringWalkOperator<f64>),
}

impl Walk {
    fn build(model: WalkModel, setup: &Setup, unitary_text: &str) -> Result<Self> {
        match model {
            WalkModel::Coin => {
                let coins = parse_unitaries(unitary_text, model, &setup.coin_graph, true)?;
                Ok(Self::Coin(CoinWalkOperator::new(
                    setup.coin_graph.clone(),
                    setup.shift.clone(),
                    coins,
                )?))
            }
            WalkModel::Scattering => {
                let gammas = parse_unitaries(unitary_text, model, &setup.scat_graph, true)?;
                Ok(Self::Scattering(ScatteringWalkOperator::new(
                    setup.scat_graph.clone(),
                    gammas,
                )?))
            }
        }
    }

    fn step(&self, state: &WalkState<f64>) -> Result<WalkState<f64>> {
        match self {
            Self::Coin(op) => op.step(state),
            Self::Scattering(op) => op.step(state),
        }
    }
}

fn native_graph(model: WalkModel, setup: &Setup) -> Arc<PortedGraph> {
    match model {
        WalkModel::Coin => setup.coin_graph.clone(),
        WalkModel::Scattering => setup.scat_graph.clone(),
    }
}

/// Runs `steps` steps and hands every visited state (including the
/// initial one) to the collector.
fn evolve(
    walk: &Walk,
    mut state: WalkState<f64>,
    steps: usize,
    mut visit: impl FnMut(&WalkState<f64>) -> Result<()>,
) -> Result<()> {
    visit(&state)?;
    for _ in 0..steps {
        state = walk.step(&state)?;
        visit(&state)?;
    }
    Ok(())
}

fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let setup = resolve(&args.graph, args.mu.as_deref(), args.phi.as_deref())?;
    let model = parse_model(&args.model)?;
    let format = parse_format(&args.format)?;
    let mode = match &args.mode {
        Some(name) => DistributionMode::from_name(name)?,
        None => match model {
            WalkModel::Coin => DistributionMode::CoinNodes,
            WalkModel::Scattering => DistributionMode::ScatteringEdges,
        },
    };
    let graph = native_graph(model, &setup);
    let walk = Walk::build(model, &setup, &fs::read_to_string(&args.unitaries)?)?;
    let initial = parse_initial_state(&fs::read_to_string(&args.initial)?, &graph)?;

    let mut series = Vec::with_capacity(args.steps + 1);
    evolve(&walk, initial, args.steps, |state| {
        series.push(distribution(state, model, mode, &graph, Some(&setup.map))?);
        Ok(())
    })?;
    write_series(&args.out, &format, &series)?;

    println!(
        "simulated a {model} walk on {} nodes for {} steps; wrote {} {} distributions to {}",
        graph.node_count(),
        args.steps,
        series.len(),
        mode,
        args.out.display()
    );
    Ok(())
}

fn run_cross_prob(args: &CrossProbArgs) -> Result<()> {
    let setup = resolve(&args.graph, args.mu.as_deref(), args.phi.as_deref())?;
    let model = parse_model(&args.model)?;
    let format = parse_format(&args.format)?;
    let native_mode = match model {
        WalkModel::Coin => DistributionMode::CoinNodes,
        WalkModel::Scattering => DistributionMode::ScatteringEdges,
    };
    let graph = native_graph(model, &setup);
    let walk = Walk::build(model, &setup, &fs::read_to_string(&args.unitaries)?)?;
    let initial = parse_initial_state(&fs::read_to_string(&args.initial)?, &graph)?;

    let mut native = Vec::with_capacity(args.steps + 1);
    let mut cross = Vec::with_capacity(args.steps + 1);
    evolve(&walk, initial, args.steps, |state| {
        native.push(distribution(state, model, native_mode, &graph, None)?);
        cross.push(distribution(
            state,
            model,
            DistributionMode::Cross,
            &graph,
            Some(&setup.map),
        )?);
        Ok(())
    })?;
    write_series(&args.native_out, &format, &native)?;
    write_series(&args.cross_out, &format, &cross)?;

    println!(
        "simulated a {model} walk for {} steps; wrote {} to {} and {} to {}",
        args.steps,
        native_mode,
        args.native_out.display(),
        DistributionMode::Cross,
        args.cross_out.display()
    );
    Ok(())
}

fn run_equiv_check(args: &EquivCheckArgs) -> Result<()> {
    let setup = resolve(&args.graph, args.mu.as_deref(), args.phi.as_deref())?;
    let coins = parse_unitaries(
        &fs::read_to_string(&args.coin)?,
        WalkModel::Coin,
        &setup.coin_graph,
        true,
    )?;
    let gammas = match &args.gamma {
        Some(path) => parse_unitaries(
            &fs::read_to_string(path)?,
            WalkModel::Scattering,
            &setup.scat_graph,
            false,
        )?,
        None => scattering_from_coin(&coins, &setup.map)?,
    };
    let coin_op = CoinWalkOperator::new(setup.coin_graph.clone(), setup.shift.clone(), coins)?;
    let scat_op = ScatteringWalkOperator::new(setup.scat_graph.clone(), gammas)?;

    let opts = VerifyOptions {
        tolerance: args.tol,
        dense_cap: args.dense_cap,
        trials: args.trials,
        seed: args.seed,
    };
    let report = verify_equivalence(&coin_op, &scat_op, &setup.map, &opts)?;

    let mut file = fs::File::create(&args.report)?;
    serde_json::to_writer_pretty(&mut file, &report)
        .map_err(qwalk::Error::from)?;
    writeln!(file)?;

    let worst = report
        .dense_max_deviation
        .unwrap_or(0.0)
        .max(report.sparse_max_deviation);
    if report.passed {
        println!(
            "equivalence holds: max deviation {worst:.3e} over dimension {} (report: {})",
            report.dim,
            args.report.display()
        );
        Ok(())
    } else {
        println!(
            "equivalence audit failed: max deviation {worst:.3e} (report: {})",
            args.report.display()
        );
        Err(Error::UnitarityViolation {
            context: "equivalence audit".into(),
            deviation: worst,
        })
    }
}

fn run_validate_graph(args: &ValidateGraphArgs) -> Result<()> {
    let setup = resolve(&args.graph, None, None)?;

    let clean = setup.primary_report.is_clean()
        && setup
            .scattering_report
            .as_ref()
            .is_none_or(|report| report.is_clean());
    let mut combined = serde_json::Map::new();
    combined.insert(
        "primary".into(),
        serde_json::to_value(&setup.primary_report).map_err(qwalk::Error::from)?,
    );
    if let Some(report) = &setup.scattering_report {
        combined.insert(
            "scattering".into(),
            serde_json::to_value(report).map_err(qwalk::Error::from)?,
        );
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::Value::Object(combined))
            .map_err(qwalk::Error::from)?
    );
    if clean {
        Ok(())
    } else {
        Err(Error::Parse {
            message: "graph validation reported failures".into(),
        })
    }
}
