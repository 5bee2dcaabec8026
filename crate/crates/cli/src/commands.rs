use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcap::c11::{c11, optimize_measurement, optimize_measurement_from, C11Options, C11Problem, MeasurementOptions};
use qcap::c1inf::{self, c1inf, C1InfOptions, C1InfProblem};
use qcap::channels::two_state_signals;
use qcap::ea::{c_ea, coherent_info_max, limited_ea, CeOptions, LimitedEaOptions};
use qcap::entropy::von_neumann_entropy;
use qcap::info::{accessible_information_given, arimoto_blahut, holevo_chi, ClassicalChannel};
use qcap::oracles::{grid_accessible_info_2d, grid_density_objective, simplex_enumerate_chi, DensityObjective, SLACK_PER_STEP};
use qcap::quantum::{square_root_measurement, DensityMatrix, Ensemble, PureState, QuantumChannel};

use crate::error::CliError;
use crate::qch::{parse_channel, ChannelFile};
use crate::report::{fmt_float, fmt_matrix, fmt_vector, Report, Table};

#[derive(Debug, Parser)]
#[command(name = "qcap", version, about = "Classical capacities of quantum channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Channel definition file (.qch).
    #[arg(long, global = true)]
    pub channel: Option<PathBuf>,
    /// Convergence tolerance of the engine.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random starts per pricing search.
    #[arg(long, global = true)]
    pub starts: Option<usize>,
    /// Independent restarts (c11).
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Round or iteration limit of the engine.
    #[arg(long = "max-rounds", global = true)]
    pub max_rounds: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Defaults to csv when --out ends in .csv, text otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    /// Accessible information and von Neumann entropy of the two-state
    /// ensemble against the angle between the states.
    Fig1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleObjective {
    Qmi,
    Coherent,
    Accinfo,
    Chi,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Holevo quantity of the signal ensemble sent through the channel.
    Chi(Weights),
    /// Accessible information of the output ensemble.
    Accinfo(Weights),
    /// Capacity with product inputs and product measurements.
    C11,
    /// Holevo capacity (product inputs, joint measurements).
    C1inf,
    /// Entanglement-assisted capacity.
    Cea,
    /// Maximum single-letter coherent information.
    Coherent,
    /// Experimental: the limited-entanglement formula at budget B (ebits).
    LimitedEa {
        #[arg(long = "B", alias = "budget")]
        budget: f64,
    },
    /// Capacity of the classical channel seen through computational-basis
    /// inputs and outputs.
    ArimotoBlahut,
    /// Brute-force grid reference (qubit channels).
    Oracle {
        #[arg(long, value_enum)]
        objective: OracleObjective,
        #[arg(long, default_value_t = 0.02)]
        step: f64,
    },
    /// Parameter sweep written as a table.
    Sweep {
        #[arg(long, value_enum)]
        curve: Curve,
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Weights {
    /// Comma-separated signal probabilities; uniform when omitted.
    #[arg(long)]
    pub probs: Option<String>,
}

pub enum Output {
    Report(Report),
    Table(Table),
}

impl Output {
    pub fn converged(&self) -> bool {
        match self {
            Output::Report(r) => r.converged,
            Output::Table(_) => true,
        }
    }
}

fn load(common: &Common) -> Result<ChannelFile, CliError> {
    let path = common
        .channel
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --channel PATH".into()))?;
    parse_channel(path)
}

fn signals(file: &ChannelFile) -> Result<&[PureState], CliError> {
    file.signals
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("channel '{}' has no signal set", file.name)))
}

fn signal_ensemble(file: &ChannelFile, probs: Option<&str>) -> Result<Ensemble<PureState>, CliError> {
    let states = signals(file)?.to_vec();
    match probs {
        None => Ok(Ensemble::uniform(states)?),
        Some(text) => {
            let p = text
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Usage(format!("--probs: '{s}': {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if p.len() != states.len() {
                return Err(CliError::Usage(format!("--probs has {} entries for {} signals", p.len(), states.len())));
            }
            Ok(Ensemble::new(p.into_iter().zip(states).collect())?)
        }
    }
}

fn header(r: &mut Report, command: &str, file: Option<&ChannelFile>, common: &Common) {
    r.push("command", command);
    r.push("version", env!("CARGO_PKG_VERSION"));
    if let Some(f) = file {
        r.push("channel", f.name.as_str());
        r.push("dim_in", f.channel.dim_in());
        r.push("dim_out", f.channel.dim_out());
    }
    r.push("seed", common.seed);
}

fn status(r: &mut Report, converged: bool) {
    r.converged = converged;
    r.push("status", if converged { "converged" } else { "round-limit" });
}

fn dump_pure(r: &mut Report, key: &str, items: &[(f64, PureState)]) {
    r.push(format!("{key}_size"), items.len());
    for (i, (p, s)) in items.iter().enumerate() {
        r.push(format!("{key}[{i}]"), format!("{} ; {}", fmt_float(*p), fmt_vector(s.amplitudes())));
    }
}

fn dump_mixed(r: &mut Report, key: &str, items: &[(f64, DensityMatrix)]) {
    r.push(format!("{key}_size"), items.len());
    for (i, (p, s)) in items.iter().enumerate() {
        r.push(format!("{key}[{i}]"), format!("{} ; {}", fmt_float(*p), fmt_matrix(s.matrix())));
    }
}

fn measurement_options(common: &Common) -> MeasurementOptions {
    let d = MeasurementOptions::default();
    MeasurementOptions {
        tol: common.tol.unwrap_or(d.tol),
        starts: common.starts.unwrap_or(d.starts),
        seed: common.seed,
        max_rounds: common.max_rounds.unwrap_or(d.max_rounds),
        ..d
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let common = &cli.common;
    match &cli.command {
        Command::Chi(w) => chi(common, w),
        Command::Accinfo(w) => accinfo(common, w),
        Command::C11 => run_c11(common),
        Command::C1inf => run_c1inf(common),
        Command::Cea => cea(common),
        Command::Coherent => coherent(common),
        Command::LimitedEa { budget } => run_limited_ea(common, *budget),
        Command::ArimotoBlahut => run_arimoto_blahut(common),
        Command::Oracle { objective, step } => oracle(common, *objective, *step),
        Command::Sweep { curve, steps } => Ok(Output::Table(sweep(common, *curve, *steps)?)),
    }
}

fn chi(common: &Common, w: &Weights) -> Result<Output, CliError> {
    let file = load(common)?;
    let ens = signal_ensemble(&file, w.probs.as_deref())?;
    let out = ens.through(&file.channel)?;
    let mut r = Report::new();
    header(&mut r, "chi", Some(&file), common);
    r.push("value", holevo_chi(&out));
    r.push("output_entropy", von_neumann_entropy(&out.average()));
    dump_pure(&mut r, "ensemble", ens.items());
    Ok(Output::Report(r))
}

/// Outputs of pure signals through a single isometric Kraus operator are
/// pure, so the square-root measurement applies to them.
fn pure_outputs(ch: &QuantumChannel, states: &[PureState]) -> Option<Vec<PureState>> {
    if ch.num_kraus() != 1 {
        return None;
    }
    states
        .iter()
        .map(|s| PureState::normalized(&ch.kraus()[0] * s.amplitudes()).ok())
        .collect()
}

fn accinfo(common: &Common, w: &Weights) -> Result<Output, CliError> {
    let file = load(common)?;
    let ens = signal_ensemble(&file, w.probs.as_deref())?;
    let out = ens.through(&file.channel)?;
    let res = optimize_measurement(&out, &measurement_options(common))?;
    let mut r = Report::new();
    header(&mut r, "accinfo", Some(&file), common);
    r.push("value", res.value);
    r.push("holevo_bound", holevo_chi(&out));
    r.push("dual_bound", res.dual_bound);
    r.push("pricing_residual", res.pricing_residual);
    r.push("lp_value", res.lp_value);
    r.push("rounds", res.rounds);
    if let Some(states) = pure_outputs(&file.channel, signals(&file)?) {
        let srm = square_root_measurement(&states)?;
        r.push("srm_value", accessible_information_given(&out, &srm)?);
    }
    status(&mut r, res.converged);
    dump_pure(&mut r, "povm", res.povm.items());
    Ok(Output::Report(r))
}

fn run_c11(common: &Common) -> Result<Output, CliError> {
    let file = load(common)?;
    let d = C11Options::default();
    let measurement = measurement_options(common);
    let ensemble = C1InfOptions {
        starts: common.starts.unwrap_or(C1InfOptions::default().starts),
        seed: common.seed,
        ..C1InfOptions::default()
    };
    let opts = C11Options {
        restarts: common.restarts.unwrap_or(d.restarts),
        seed: common.seed,
        tol: common.tol.unwrap_or(d.tol),
        max_alternations: common.max_rounds.unwrap_or(d.max_alternations),
        measurement: measurement.clone(),
        ensemble,
    };
    let mut problem = C11Problem::new(file.channel.clone()).with_options(opts);
    if let Some(s) = &file.signals {
        problem = problem.with_signals(s.clone())?;
    }
    let res = c11(&problem)?;
    // Certificate for the final measurement: re-optimizing from it bounds
    // the accessible information of the final output ensemble.
    let out = res.ensemble.through(&file.channel)?;
    let seeds: Vec<PureState> = res.povm.items().iter().map(|(_, w)| w.clone()).collect();
    let check = optimize_measurement_from(&out, &seeds, &measurement)?;
    let mut r = Report::new();
    header(&mut r, "c11", Some(&file), common);
    r.push("value", res.value);
    r.push("holevo_bound", res.chi);
    r.push("measurement_dual_bound", check.dual_bound);
    r.push("pricing_residual", check.pricing_residual);
    r.push("restarts", res.restarts_used);
    r.push("best_restart", res.best_restart);
    r.push("restart_spread", res.restart_spread());
    r.push(
        "restart_values",
        res.restart_values.iter().map(|v| fmt_float(*v)).collect::<Vec<_>>().join(" "),
    );
    status(&mut r, res.status == c1inf::Status::Converged);
    dump_pure(&mut r, "ensemble", res.ensemble.items());
    dump_pure(&mut r, "povm", res.povm.items());
    Ok(Output::Report(r))
}

fn run_c1inf(common: &Common) -> Result<Output, CliError> {
    let file = load(common)?;
    let d = C1InfOptions::default();
    let opts = C1InfOptions {
        tol: common.tol.unwrap_or(d.tol),
        starts: common.starts.unwrap_or(d.starts),
        seed: common.seed,
        max_rounds: common.max_rounds.unwrap_or(d.max_rounds),
        ..d
    };
    let mut problem = C1InfProblem::new(file.channel.clone()).with_options(opts);
    if let Some(s) = &file.signals {
        problem = problem.with_signals(s.clone())?;
    }
    let res = c1inf(&problem)?;
    let mut r = Report::new();
    header(&mut r, "c1inf", Some(&file), common);
    r.push("value", res.value);
    r.push("dual_gap", res.dual_gap);
    r.push("pricing_residual", res.pricing_residual);
    r.push("rounds", res.rounds);
    status(&mut r, res.status == c1inf::Status::Converged);
    r.push("rho", fmt_matrix(res.rho.matrix()));
    dump_pure(&mut r, "ensemble", res.ensemble.items());
    Ok(Output::Report(r))
}

fn cea(common: &Common) -> Result<Output, CliError> {
    let file = load(common)?;
    let d = CeOptions::default();
    let opts = CeOptions {
        tol: common.tol.unwrap_or(d.tol),
        max_iterations: common.max_rounds.unwrap_or(d.max_iterations),
    };
    let res = c_ea(&file.channel, &opts)?;
    let mut r = Report::new();
    header(&mut r, "cea", Some(&file), common);
    r.push("value", res.value);
    r.push("fw_gap", res.fw_gap);
    r.push("gradient_residual", res.gradient_residual);
    r.push("iterations", res.iterations);
    r.push("entanglement_rate", res.entanglement_rate);
    status(&mut r, res.status == c1inf::Status::Converged);
    r.push("rho", fmt_matrix(res.rho.matrix()));
    Ok(Output::Report(r))
}

fn coherent(common: &Common) -> Result<Output, CliError> {
    let file = load(common)?;
    let extra = common.starts.unwrap_or(file.channel.dim_in());
    let res = coherent_info_max(&file.channel, extra, common.seed)?;
    let mut r = Report::new();
    header(&mut r, "coherent", Some(&file), common);
    r.push("value", res.value);
    r.push("maxima", res.maxima.len());
    for (i, (v, rho)) in res.maxima.iter().enumerate() {
        r.push(format!("maximum[{i}]"), format!("{} ; {}", fmt_float(*v), fmt_matrix(rho.matrix())));
    }
    r.push("rho", fmt_matrix(res.rho.matrix()));
    Ok(Output::Report(r))
}

fn run_limited_ea(common: &Common, budget: f64) -> Result<Output, CliError> {
    let file = load(common)?;
    let d = LimitedEaOptions::default();
    let opts = LimitedEaOptions {
        tol: common.tol.unwrap_or(d.tol),
        starts: common.starts.unwrap_or(d.starts),
        seed: common.seed,
        max_rounds: common.max_rounds.unwrap_or(d.max_rounds),
        ..d
    };
    let res = limited_ea(&file.channel, budget, &opts)?;
    let mut r = Report::new();
    header(&mut r, "limited-ea", Some(&file), common);
    r.push("experimental", "conjectured formula; the value is not a proven capacity");
    r.push("budget", res.budget);
    r.push("value", res.value);
    r.push("average_entropy", res.average_entropy);
    r.push("pricing_residual", res.pricing_residual);
    r.push("rounds", res.rounds);
    status(&mut r, res.status == c1inf::Status::Converged);
    dump_mixed(&mut r, "ensemble", res.ensemble.items());
    Ok(Output::Report(r))
}

/// `P(y|x) = <y| N(|x><x|) |y>`.
pub fn computational_transition(ch: &QuantumChannel) -> Vec<Vec<f64>> {
    (0..ch.dim_in())
        .map(|x| {
            let out = ch.apply_pure_raw(PureState::basis(ch.dim_in(), x).amplitudes());
            let row: Vec<f64> = (0..ch.dim_out()).map(|y| out[(y, y)].re.max(0.0)).collect();
            let s: f64 = row.iter().sum();
            row.iter().map(|v| v / s).collect()
        })
        .collect()
}

fn run_arimoto_blahut(common: &Common) -> Result<Output, CliError> {
    let file = load(common)?;
    let rows = computational_transition(&file.channel);
    let res = arimoto_blahut(&ClassicalChannel::new(rows.clone())?, common.tol.unwrap_or(1e-9))?;
    let mut r = Report::new();
    header(&mut r, "arimoto-blahut", Some(&file), common);
    r.push("value", res.capacity);
    r.push("upper_bound", res.upper_bound);
    r.push("gap", res.upper_bound - res.capacity);
    r.push("iterations", res.iterations);
    r.push("input", res.input.iter().map(|p| fmt_float(*p)).collect::<Vec<_>>().join(" "));
    for (x, row) in rows.iter().enumerate() {
        r.push(format!("transition[{x}]"), row.iter().map(|p| fmt_float(*p)).collect::<Vec<_>>().join(" "));
    }
    Ok(Output::Report(r))
}

fn oracle(common: &Common, objective: OracleObjective, step: f64) -> Result<Output, CliError> {
    let file = load(common)?;
    let mut r = Report::new();
    header(&mut r, "oracle", Some(&file), common);
    match objective {
        OracleObjective::Qmi | OracleObjective::Coherent => {
            let obj = if objective == OracleObjective::Qmi {
                DensityObjective::MutualInformation
            } else {
                DensityObjective::CoherentInformation
            };
            let (v, rho) = grid_density_objective(&file.channel, &obj, step)?;
            r.push("objective", if objective == OracleObjective::Qmi { "qmi" } else { "coherent" });
            r.push("value", v);
            r.push("rho", fmt_matrix(rho.matrix()));
        }
        OracleObjective::Accinfo => {
            let out = Ensemble::uniform(signals(&file)?.to_vec())?.through(&file.channel)?;
            let v = grid_accessible_info_2d(&out, step)?;
            r.push("objective", "accinfo");
            r.push("value", v);
        }
        OracleObjective::Chi => {
            let (v, p) = simplex_enumerate_chi(&file.channel, signals(&file)?, step)?;
            r.push("objective", "chi");
            r.push("value", v);
            r.push("weights", p.iter().map(|x| fmt_float(*x)).collect::<Vec<_>>().join(" "));
        }
    }
    r.push("step", step);
    r.push("slack", SLACK_PER_STEP * step);
    Ok(Output::Report(r))
}

/// Rows `theta_k = k (pi/2) / (steps - 1)` for `k = 0..steps`.
pub fn sweep(common: &Common, curve: Curve, steps: usize) -> Result<Table, CliError> {
    match curve {
        Curve::Fig1 => {
            let opts = measurement_options(common);
            let mut rows = Vec::with_capacity(steps);
            for k in 0..steps {
                let theta = if steps == 1 {
                    0.0
                } else {
                    k as f64 * std::f64::consts::FRAC_PI_2 / (steps - 1) as f64
                };
                let ens = Ensemble::uniform(two_state_signals(theta))?;
                let out = ens.to_mixed();
                let i_acc = optimize_measurement(&out, &opts)?.value;
                let h_vn = von_neumann_entropy(&ens.average());
                rows.push(vec![theta, i_acc, h_vn]);
            }
            Ok(Table {
                header: vec!["theta".into(), "i_acc".into(), "h_vn".into()],
                rows,
            })
        }
    }
}
