//! Holevo capacity (`C1inf`) by column generation.
//!
//! For a fixed average input `rho`, the smallest average output entropy over
//! pure-state ensembles averaging to `rho` is a linear program in the
//! ensemble weights, with one equality row per real coordinate of `rho`.
//! Its dual is a Hermitian matrix `tau`; a state `v` can improve the master
//! exactly when `f(v) = H(N(v v^dag)) - v^dag tau v < 0`, which the pricing
//! step searches for by multistart descent on the unit sphere. Between master
//! solves `rho` itself is moved uphill on `g(rho) = H(N(rho)) - Tr(rho tau)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entropy::{entropy_gradient, entropy_value_gradient, matrix_entropy};
use crate::error::{Error, Result};
use crate::info::holevo_chi;
use crate::linalg::{
    eigh, expectation, frobenius_norm, haar_vector, lex_cmp, project_to_density, project_to_simplex, real,
    trace_product, CMatrix, CVector,
};
use crate::lp::{
    column_generation, LinearProgram, LpSolution, MasterProblem, PricedColumn, PricingOutcome, Sense,
};
use crate::optim::{bisect_concave, fw_gap, minimize_on_sphere, trace_free, SphereOptions};
use crate::quantum::{
    coords_to_hermitian, matrix_coords, pure_coords, DensityMatrix, Ensemble, HermitianCoords, HermitianMatrix,
    PureState, QuantumChannel,
};

/// States are considered the same local minimum when `|<u, v>|^2` exceeds
/// `1 - SAME_STATE_TOL`.
pub const SAME_STATE_TOL: f64 = 1e-8;

/// Step halvings tried before a `rho` update is given up. The model `g`
/// overestimates the value, by a lot where the master is degenerate, so
/// useful steps can be far shorter than the model suggests.
const RHO_STEP_HALVINGS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct C1InfOptions {
    /// Improvement threshold for the outer loop.
    pub tol: f64,
    /// Columns enter the master only with reduced cost below `-pricing_tol`.
    pub pricing_tol: f64,
    /// Random starts per pricing call (support states are always added).
    pub starts: usize,
    pub seed: u64,
    /// Outer (rho update) rounds.
    pub max_rounds: usize,
    /// Pricing rounds per fixed-rho column generation.
    pub max_pricing_rounds: usize,
    pub sphere: SphereOptions,
}

impl Default for C1InfOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            pricing_tol: 1e-7,
            starts: 8,
            seed: 0,
            max_rounds: 100,
            max_pricing_rounds: 200,
            sphere: SphereOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct C1InfProblem {
    pub channel: QuantumChannel,
    /// When set, only these signal states may be sent.
    pub restricted_signals: Option<Vec<PureState>>,
    /// Starting ensemble: its average is the first `rho` and its states seed
    /// the master. Defaults to the maximally mixed input.
    pub initial_ensemble: Option<Ensemble<PureState>>,
    pub options: C1InfOptions,
}

impl C1InfProblem {
    pub fn new(channel: QuantumChannel) -> Self {
        Self {
            channel,
            restricted_signals: None,
            initial_ensemble: None,
            options: C1InfOptions::default(),
        }
    }

    pub fn with_signals(mut self, signals: Vec<PureState>) -> Result<Self> {
        if signals.is_empty() {
            return Err(Error::Empty("signal set"));
        }
        if let Some(s) = signals.iter().find(|s| s.dim() != self.channel.dim_in()) {
            return Err(Error::DimensionMismatch {
                expected: self.channel.dim_in(),
                found: s.dim(),
            });
        }
        self.restricted_signals = Some(signals);
        Ok(self)
    }

    pub fn with_initial_ensemble(mut self, ensemble: Ensemble<PureState>) -> Result<Self> {
        if ensemble.dim() != self.channel.dim_in() {
            return Err(Error::DimensionMismatch {
                expected: self.channel.dim_in(),
                found: ensemble.dim(),
            });
        }
        self.initial_ensemble = Some(ensemble);
        Ok(self)
    }

    pub fn with_options(mut self, options: C1InfOptions) -> Self {
        self.options = options;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    RoundLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartClass {
    Random,
    Support,
}

/// A local minimum of the pricing function.
#[derive(Debug, Clone, PartialEq)]
pub struct PricingReport {
    pub state: PureState,
    /// `f(v) = H(N(v v^dag)) - v^dag tau v`.
    pub reduced_cost: f64,
    pub start: StartClass,
}

/// One outer round of the iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundRecord {
    /// `H(N(rho)) - master objective`.
    pub value: f64,
    pub master_objective: f64,
    /// `Tr(tau rho)`, the dual objective.
    pub dual_objective: f64,
    /// Smallest reduced cost found by the last pricing call.
    pub pricing_residual: f64,
    pub columns: usize,
}

#[derive(Debug, Clone)]
pub struct C1InfResult {
    pub value: f64,
    pub ensemble: Ensemble<PureState>,
    pub rho: DensityMatrix,
    pub tau: HermitianMatrix,
    /// Upper bound on `C1inf - value`, valid if pricing found the global
    /// minimum: the Frank-Wolfe gap of `g` at `rho`, plus any remaining
    /// negative reduced cost.
    pub dual_gap: f64,
    pub pricing_residual: f64,
    pub status: Status,
    pub rounds: usize,
    pub history: Vec<RoundRecord>,
}

/// Master LP at fixed `rho`: minimize `sum p_i H(N(v_i v_i^dag))` subject to
/// `sum p_i v_i v_i^dag = rho` in Hermitian coordinates. The trace row makes
/// `sum p_i = 1` implicit.
pub fn build_fixed_rho_lp(ch: &QuantumChannel, states: &[PureState], rho: &DensityMatrix) -> Result<LinearProgram> {
    let d = ch.dim_in();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: rho.dim() });
    }
    if let Some(s) = states.iter().find(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
    }
    let cols: Vec<Vec<f64>> = states.iter().map(|s| pure_coords(s.amplitudes())).collect();
    let a = nalgebra::DMatrix::from_fn(d * d, states.len(), |i, j| cols[j][i]);
    let c = states.iter().map(|s| output_entropy(ch, s.amplitudes())).collect();
    LinearProgram::new(Sense::Minimize, c, a, matrix_coords(rho.matrix()))
}

/// `tau` from the duals of an optimal master.
pub fn dual_tau(sol: &LpSolution, dim: usize) -> Result<HermitianMatrix> {
    if !sol.is_optimal() {
        return Err(Error::Lp(sol.status));
    }
    Ok(coords_to_hermitian(&HermitianCoords::new(dim, sol.duals.clone())?))
}

/// `H(N(v v^dag))` for a unit vector.
pub fn output_entropy(ch: &QuantumChannel, v: &CVector) -> f64 {
    matrix_entropy(&ch.apply_pure_raw(v))
}

/// Pricing function `f(v) = H(N(v v^dag)) - v^dag tau v`.
pub fn pricing_objective(ch: &QuantumChannel, tau: &HermitianMatrix, v: &CVector) -> f64 {
    output_entropy(ch, v) - expectation(tau.matrix(), v)
}

/// Value and ambient gradient `2 G v` of the pricing function, where
/// `G = N^dag(-(log2 N(v v^dag) + I/ln 2)) - tau`. Valid for unnormalized `v`
/// (the entropy is then that of the unnormalized output).
pub fn pricing_value_gradient(ch: &QuantumChannel, tau: &HermitianMatrix, v: &CVector) -> (f64, CVector) {
    let factor = ch.pure_factor(v);
    let out = &factor * factor.adjoint();
    let (h, grad_h) = entropy_value_gradient(&out);
    let tv = tau.matrix() * v;
    let f = h - v.dotc(&tv).re;
    (f, (ch.adjoint_times_factor(&grad_h, &factor) - tv) * real(2.0))
}

/// Multistart search for states with negative reduced cost. Returns every
/// distinct local minimum with `f(v) < -1e-7`, sorted by value.
pub fn pricing_search(
    ch: &QuantumChannel,
    tau: &HermitianMatrix,
    starts: usize,
    seed: u64,
    support: &[PureState],
) -> Vec<PricingReport> {
    pricing_minima(ch, tau, starts, seed, support, &SphereOptions::default())
        .into_iter()
        .filter(|r| r.reduced_cost < -1e-7)
        .collect()
}

/// All distinct local minima found from the support states and `starts`
/// random starts, sorted by value then amplitudes.
pub fn pricing_minima(
    ch: &QuantumChannel,
    tau: &HermitianMatrix,
    starts: usize,
    seed: u64,
    support: &[PureState],
    opts: &SphereOptions,
) -> Vec<PricingReport> {
    let d = ch.dim_in();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut initial: Vec<(CVector, StartClass)> =
        support.iter().map(|s| (s.amplitudes().clone(), StartClass::Support)).collect();
    initial.extend((0..starts).map(|_| (haar_vector(&mut rng, d), StartClass::Random)));
    let mut found: Vec<PricingReport> = Vec::new();
    for (v0, class) in initial {
        let m = minimize_on_sphere(|v| pricing_value_gradient(ch, tau, v), &v0, opts);
        let state = PureState::normalized(m.point).expect("iterate stays on the sphere");
        let reduced_cost = pricing_objective(ch, tau, state.amplitudes());
        if let Some(existing) = found
            .iter_mut()
            .find(|r| r.state.inner(&state).norm_sqr() > 1.0 - SAME_STATE_TOL)
        {
            if reduced_cost < existing.reduced_cost {
                *existing = PricingReport { state, reduced_cost, start: class };
            }
            continue;
        }
        found.push(PricingReport { state, reduced_cost, start: class });
    }
    found.sort_by(|a, b| {
        a.reduced_cost
            .total_cmp(&b.reduced_cost)
            .then_with(|| lex_cmp(a.state.amplitudes(), b.state.amplitudes()))
    });
    found
}

/// `g(rho) = H(N(rho)) - Tr(rho tau)`.
pub fn g_objective(ch: &QuantumChannel, tau: &HermitianMatrix, rho: &CMatrix) -> f64 {
    matrix_entropy(&ch.apply_raw(rho)) - trace_product(rho, tau.matrix())
}

/// Hermitian gradient of `g`: `N^dag(-(log2 N(rho) + I/ln 2)) - tau`, with
/// eigen-directions of `N(rho)` below the entropy clip contributing zero.
pub fn g_gradient(ch: &QuantumChannel, tau: &HermitianMatrix, rho: &CMatrix) -> CMatrix {
    ch.adjoint_raw(&entropy_gradient(&ch.apply_raw(rho))) - tau.matrix()
}

/// One ascent step on `g`. The direction points from `rho` to the projection
/// of `rho + G0/|G0|` onto the density matrices (`G0` the trace-free
/// gradient), so the whole segment stays positive semidefinite; the step
/// length comes from 12 bisection rounds on the directional derivative.
pub fn update_rho(ch: &QuantumChannel, tau: &HermitianMatrix, rho: &DensityMatrix) -> DensityMatrix {
    let r = rho.matrix();
    let g0 = trace_free(&g_gradient(ch, tau, r));
    let norm = frobenius_norm(&g0);
    if norm < 1e-9 {
        return rho.clone();
    }
    let target = project_to_density(&(r + &g0 / real(norm)));
    let mut dir = target - r;
    if frobenius_norm(&dir) < 1e-9 {
        return rho.clone();
    }
    let base = g_objective(ch, tau, r);
    // When the maximizer sits in the first eighth of the segment, shorten the
    // segment and bisect again so the step is resolved relative to its size.
    let mut t;
    loop {
        t = bisect_concave(|t| trace_product(&dir, &g_gradient(ch, tau, &(r + &dir * real(t)))), 12);
        if t > 0.125 || frobenius_norm(&dir) < 1e-12 {
            break;
        }
        dir *= real(0.125);
    }
    let mut best = (base, 0.0);
    for cand in [t, t - 2f64.powi(-13)] {
        if cand > 0.0 {
            let val = g_objective(ch, tau, &(r + &dir * real(cand)));
            if val > best.0 {
                best = (val, cand);
            }
        }
    }
    if best.1 == 0.0 {
        return rho.clone();
    }
    DensityMatrix::from_matrix_unchecked(crate::linalg::hermitize(&(r + &dir * real(best.1))))
}

/// Runs the iteration: column generation at fixed `rho`, then a `rho` step,
/// repeated until a step no longer raises the value by more than `tol`.
pub fn c1inf(problem: &C1InfProblem) -> Result<C1InfResult> {
    match &problem.restricted_signals {
        Some(signals) => c1inf_restricted(
            &problem.channel,
            signals,
            problem.initial_ensemble.as_ref(),
            &problem.options,
        ),
        None => c1inf_free(&problem.channel, problem.initial_ensemble.as_ref(), &problem.options),
    }
}

struct Solved {
    rho: CMatrix,
    solution: LpSolution,
    value: f64,
    pricing_residual: f64,
    converged: bool,
}

fn state_column(ch: &QuantumChannel, v: &PureState) -> (Vec<f64>, f64) {
    (pure_coords(v.amplitudes()), output_entropy(ch, v.amplitudes()))
}

fn add_state(master: &mut MasterProblem<PureState>, ch: &QuantumChannel, v: PureState) {
    let (col, cost) = state_column(ch, &v);
    master.add_column(col, cost, v);
}

fn support_states(sol: &LpSolution, master: &MasterProblem<PureState>) -> Vec<PureState> {
    sol.x
        .iter()
        .zip(master.tags())
        .filter(|(x, _)| **x > 1e-10)
        .map(|(_, s)| s.clone())
        .collect()
}

fn c1inf_free(ch: &QuantumChannel, initial: Option<&Ensemble<PureState>>, opts: &C1InfOptions) -> Result<C1InfResult> {
    let d = ch.dim_in();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let rho0 = initial.map_or_else(|| DensityMatrix::maximally_mixed(d), |e| e.average());
    let mut master = MasterProblem::new(Sense::Minimize, matrix_coords(rho0.matrix()));
    for s in initial.into_iter().flat_map(|e| e.states()) {
        add_state(&mut master, ch, s.clone());
    }
    for k in 0..d {
        add_state(&mut master, ch, PureState::basis(d, k));
    }
    for _ in 0..opts.starts {
        add_state(&mut master, ch, PureState::normalized(haar_vector(&mut rng, d))?);
    }

    let solve_at = |master: &mut MasterProblem<PureState>, rho: &CMatrix, rng: &mut ChaCha8Rng| -> Result<Solved> {
        master.set_rhs(matrix_coords(rho));
        // The eigen-decomposition of rho is always a feasible ensemble.
        let eig = eigh(rho);
        for k in 0..d {
            if eig.values[k] > 1e-12 {
                add_state(master, ch, PureState::normalized(eig.vector(k))?);
            }
        }
        let cg = column_generation(
            master,
            |sol, m| {
                let tau = coords_to_hermitian(&HermitianCoords::new(d, sol.duals.clone()).expect("d^2 duals"));
                let support = support_states(sol, m);
                let minima = pricing_minima(ch, &tau, opts.starts, rng.random(), &support, &opts.sphere);
                let best = minima.first().map_or(0.0, |r| r.reduced_cost);
                PricingOutcome {
                    columns: minima
                        .into_iter()
                        .filter(|r| r.reduced_cost < -opts.pricing_tol)
                        .map(|r| {
                            let (column, cost) = state_column(ch, &r.state);
                            PricedColumn { column, cost, tag: r.state }
                        })
                        .collect(),
                    best_reduced_cost: best,
                }
            },
            opts.pricing_tol,
            opts.max_pricing_rounds,
        )?;
        let value = matrix_entropy(&ch.apply_raw(rho)) - cg.solution.objective;
        Ok(Solved {
            rho: rho.clone(),
            solution: cg.solution,
            value,
            pricing_residual: cg.pricing_residual,
            converged: cg.converged,
        })
    };

    let mut current = solve_at(&mut master, rho0.matrix(), &mut rng)?;
    let mut history = vec![record(&current, master.len(), d)];
    let mut status = Status::RoundLimit;
    let mut rounds = 0;
    while rounds < opts.max_rounds {
        rounds += 1;
        let tau = dual_tau(&current.solution, d)?;
        let rho = DensityMatrix::from_matrix_unchecked(current.rho.clone());
        let next = update_rho(ch, &tau, &rho);
        let step = next.matrix() - &current.rho;
        if frobenius_norm(&step) < 1e-12 {
            status = Status::Converged;
            break;
        }
        let mut accepted = None;
        let mut t = 1.0;
        let slack = (-current.pricing_residual).max(0.0);
        for _ in 0..RHO_STEP_HALVINGS {
            let trial = &current.rho + &step * real(t);
            // g bounds the value from above, so a trial it cannot lift past
            // the acceptance threshold needs no master solve; smaller steps
            // would not pass either.
            if g_objective(ch, &tau, &trial) + slack <= current.value + opts.tol {
                break;
            }
            let solved = solve_at(&mut master, &trial, &mut rng)?;
            if solved.value > current.value + opts.tol {
                accepted = Some(solved);
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some(s) => {
                current = s;
                history.push(record(&current, master.len(), d));
            }
            None => {
                // Restore the master at the accepted rho so the reported
                // duals and ensemble belong to it.
                current = solve_at(&mut master, &current.rho.clone(), &mut rng)?;
                history.push(record(&current, master.len(), d));
                status = Status::Converged;
                break;
            }
        }
    }
    if !current.converged {
        status = Status::RoundLimit;
    }
    finish(ch, &master, current, status, rounds, history)
}

fn record(s: &Solved, columns: usize, d: usize) -> RoundRecord {
    let tau = coords_to_hermitian(&HermitianCoords::new(d, s.solution.duals.clone()).expect("d^2 duals"));
    RoundRecord {
        value: s.value,
        master_objective: s.solution.objective,
        dual_objective: trace_product(&s.rho, tau.matrix()),
        pricing_residual: s.pricing_residual,
        columns,
    }
}

fn finish(
    ch: &QuantumChannel,
    master: &MasterProblem<PureState>,
    current: Solved,
    status: Status,
    rounds: usize,
    history: Vec<RoundRecord>,
) -> Result<C1InfResult> {
    let d = ch.dim_in();
    let tau = dual_tau(&current.solution, d)?;
    let items: Vec<(f64, PureState)> = current
        .solution
        .x
        .iter()
        .zip(master.tags())
        .filter(|(x, _)| **x > 1e-12)
        .map(|(x, s)| (*x, s.clone()))
        .collect();
    let ensemble = Ensemble::normalized(items)?;
    let rho = ensemble.average();
    let value = holevo_chi(&ensemble.through(ch)?);
    let grad = g_gradient(ch, &tau, rho.matrix());
    let dual_gap = fw_gap(rho.matrix(), &grad) + (-current.pricing_residual).max(0.0);
    Ok(C1InfResult {
        value,
        ensemble,
        rho,
        tau,
        dual_gap,
        pricing_residual: current.pricing_residual,
        status,
        rounds,
        history,
    })
}

/// Restricted signal set: every signal is a column, so pricing is exact. The
/// average input moves by projected ascent on `chi(p)` over the simplex of
/// signal weights, followed by a master solve at the new average.
fn c1inf_restricted(
    ch: &QuantumChannel,
    signals: &[PureState],
    initial: Option<&Ensemble<PureState>>,
    opts: &C1InfOptions,
) -> Result<C1InfResult> {
    let d = ch.dim_in();
    let n = signals.len();
    let outputs: Vec<CMatrix> = signals.iter().map(|s| ch.apply_pure_raw(s.amplitudes())).collect();
    let costs: Vec<f64> = outputs.iter().map(matrix_entropy).collect();
    let projectors: Vec<CMatrix> = signals.iter().map(|s| s.projector().into_matrix()).collect();
    let average = |p: &[f64]| -> CMatrix {
        let mut m = CMatrix::zeros(d, d);
        for (pi, pr) in p.iter().zip(&projectors) {
            m += pr * real(*pi);
        }
        m
    };
    let out_average = |p: &[f64]| -> CMatrix {
        let mut m = CMatrix::zeros(ch.dim_out(), ch.dim_out());
        for (pi, o) in p.iter().zip(&outputs) {
            m += o * real(*pi);
        }
        m
    };
    let chi = |p: &[f64]| matrix_entropy(&out_average(p)) - p.iter().zip(&costs).map(|(a, b)| a * b).sum::<f64>();
    let grad = |p: &[f64]| -> Vec<f64> {
        let e = entropy_gradient(&out_average(p));
        outputs.iter().zip(&costs).map(|(o, c)| trace_product(o, &e) - c).collect()
    };

    let mut master = MasterProblem::new(Sense::Minimize, vec![0.0; d * d]);
    let mut index = Vec::with_capacity(n);
    for s in signals {
        let (col, cost) = state_column(ch, s);
        if master.add_column(col, cost, s.clone()) {
            index.push(Some(master.len() - 1));
        } else {
            index.push(None);
        }
    }
    let solve_at = |master: &mut MasterProblem<PureState>, p: &[f64]| -> Result<Solved> {
        let rho = average(p);
        master.set_rhs(matrix_coords(&rho));
        let sol = master.solve();
        if !sol.is_optimal() {
            return Err(Error::Lp(sol.status));
        }
        let tau = coords_to_hermitian(&HermitianCoords::new(d, sol.duals.clone())?);
        let residual = signals
            .iter()
            .map(|s| pricing_objective(ch, &tau, s.amplitudes()))
            .fold(f64::INFINITY, f64::min);
        let value = matrix_entropy(&ch.apply_raw(&rho)) - sol.objective;
        Ok(Solved { rho, solution: sol, value, pricing_residual: residual, converged: true })
    };
    // Weights of the master solution expressed over the signal list.
    let weights_of = |sol: &LpSolution| -> Vec<f64> {
        let mut p: Vec<f64> = index.iter().map(|k| k.map_or(0.0, |k| sol.x[k].max(0.0))).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= s);
        p
    };

    let mut p = vec![1.0 / n as f64; n];
    if let Some(e) = initial {
        // Weight of each signal in the starting ensemble; states that are not
        // signals are dropped.
        let w: Vec<f64> = signals
            .iter()
            .map(|s| {
                e.items()
                    .iter()
                    .filter(|(_, x)| x.inner(s).norm_sqr() > 1.0 - 1e-12)
                    .map(|(q, _)| *q)
                    .sum()
            })
            .collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            p = w.iter().map(|v| v / total).collect();
        }
    }
    let mut current = solve_at(&mut master, &p)?;
    let mut history = vec![record(&current, master.len(), d)];
    let mut status = Status::RoundLimit;
    let mut rounds = 0;
    while rounds < opts.max_rounds {
        rounds += 1;
        p = weights_of(&current.solution);
        let start = chi(&p);
        let mut last = start;
        for _ in 0..2000 {
            let h = grad(&p);
            let scale = h.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if scale < 1e-14 {
                break;
            }
            let target = project_to_simplex(&p.iter().zip(&h).map(|(a, b)| a + b / scale).collect::<Vec<_>>());
            let dir: Vec<f64> = target.iter().zip(&p).map(|(a, b)| a - b).collect();
            if dir.iter().map(|v| v.abs()).sum::<f64>() < 1e-13 {
                break;
            }
            let at = |t: f64| -> Vec<f64> { p.iter().zip(&dir).map(|(a, b)| (a + t * b).max(0.0)).collect() };
            let t = bisect_concave(|t| grad(&at(t)).iter().zip(&dir).map(|(a, b)| a * b).sum(), 40);
            let cand = at(t);
            let val = chi(&cand);
            if val <= last {
                break;
            }
            let gain = val - last;
            p = cand;
            last = val;
            if gain < opts.tol * 1e-3 {
                break;
            }
        }
        let solved = solve_at(&mut master, &p)?;
        if solved.value > current.value + opts.tol {
            current = solved;
            history.push(record(&current, master.len(), d));
        } else {
            if solved.value > current.value {
                current = solved;
                history.push(record(&current, master.len(), d));
            }
            status = Status::Converged;
            break;
        }
    }
    let mut result = finish(ch, &master, current, status, rounds, history)?;
    // In the restricted problem the certificate is the Frank-Wolfe gap of chi
    // over the signal simplex.
    let q: Vec<f64> = signals
        .iter()
        .map(|s| {
            result
                .ensemble
                .items()
                .iter()
                .filter(|(_, e)| e.inner(s).norm_sqr() > 1.0 - 1e-14)
                .map(|(w, _)| *w)
                .sum()
        })
        .collect();
    let h = grad(&q);
    let hmax = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    result.dual_gap = (hmax - q.iter().zip(&h).map(|(a, b)| a * b).sum::<f64>()).max(0.0);
    Ok(result)
}
