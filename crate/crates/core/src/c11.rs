//! `C11` capacity: unentangled inputs, unentangled (single-letter)
//! measurements.
//!
//! For a fixed output ensemble the best measurement is found by column
//! generation over rank-one directions: with `E_j = q_j w_j w_j^dag` the
//! mutual information is linear in the weights `q_j`, and completeness is a
//! set of `d^2` linear rows. For a fixed measurement the outcome statistics
//! define a channel with diagonal outputs, whose Holevo capacity (the
//! ensemble step) is computed by [`crate::c1inf`]. [`c11`] alternates the two
//! from several random starting ensembles.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::c1inf::{c1inf, C1InfOptions, C1InfProblem, Status, SAME_STATE_TOL};
use crate::error::{Error, Result};
use crate::info::{accessible_information_given, holevo_chi};
use crate::linalg::{eigh, expectation, haar_vector, identity, lex_cmp, real, CMatrix, CVector};
use crate::lp::{column_generation, nnls, LinearProgram, MasterProblem, PricedColumn, PricingOutcome, Sense};
use crate::optim::{minimize_on_sphere, SphereOptions};
use crate::quantum::{
    coords_to_hermitian, matrix_coords, pure_coords, DensityMatrix, Ensemble, HermitianCoords, HermitianMatrix, Povm,
    PureState, QuantumChannel,
};

/// Outcomes whose total probability `w^dag sigma_bar w` is below this carry
/// no information and get coefficient 0.
pub const NULL_OUTCOME_TOL: f64 = 1e-14;

/// The per-direction data of the measurement LP: weights `p_i`, output
/// states `sigma_i` and their average.
#[derive(Debug, Clone)]
struct OutputData {
    p: Vec<f64>,
    sigmas: Vec<CMatrix>,
    average: CMatrix,
}

impl OutputData {
    fn new(ens: &Ensemble<DensityMatrix>) -> Self {
        let p = ens.probabilities();
        let sigmas: Vec<CMatrix> = ens.states().map(|s| s.matrix().clone()).collect();
        let average = ens.average().into_matrix();
        Self { p, sigmas, average }
    }

    fn dim(&self) -> usize {
        self.average.nrows()
    }

    fn coefficient(&self, w: &CVector) -> f64 {
        let b = expectation(&self.average, w);
        if b < NULL_OUTCOME_TOL {
            return 0.0;
        }
        self.p
            .iter()
            .zip(&self.sigmas)
            .map(|(p, s)| {
                let a = expectation(s, w);
                if a < NULL_OUTCOME_TOL {
                    0.0
                } else {
                    p * a * (a / b).log2()
                }
            })
            .sum()
    }

    /// `c(w)` and its ambient gradient `2 M w`, `M = sum_i p_i log2(a_i/b) sigma_i`.
    /// Vanishing `a_i` are clipped inside the logarithm.
    fn coefficient_gradient(&self, w: &CVector) -> (f64, CVector) {
        let d = self.dim();
        let b = expectation(&self.average, w);
        if b < NULL_OUTCOME_TOL {
            return (0.0, CVector::zeros(d));
        }
        let mut value = 0.0;
        let mut m = CMatrix::zeros(d, d);
        for (p, s) in self.p.iter().zip(&self.sigmas) {
            let a = expectation(s, w);
            let l = (a.max(NULL_OUTCOME_TOL) / b).log2();
            if a >= NULL_OUTCOME_TOL {
                value += p * a * l;
            }
            m += s * real(p * l);
        }
        (value, &m * w * real(2.0))
    }
}

/// Coefficient `c(w) = sum_i p_i a_i log2(a_i / b)` of a unit direction in
/// the measurement LP, with `a_i = w^dag sigma_i w` and `b = sum_i p_i a_i`.
/// An outcome `q w w^dag` contributes `q c(w)` to the mutual information.
pub fn measurement_coefficient(out_ens: &Ensemble<DensityMatrix>, w: &PureState) -> Result<f64> {
    check_dim(out_ens.dim(), w.dim())?;
    Ok(OutputData::new(out_ens).coefficient(w.amplitudes()))
}

/// Value and ambient gradient of the measurement pricing function
/// `w^dag lambda w - c(w)`, the reduced cost of direction `w`.
pub fn measurement_pricing_gradient(
    out_ens: &Ensemble<DensityMatrix>,
    lambda: &HermitianMatrix,
    w: &CVector,
) -> (f64, CVector) {
    pricing_fg(&OutputData::new(out_ens), lambda, w)
}

fn pricing_fg(data: &OutputData, lambda: &HermitianMatrix, w: &CVector) -> (f64, CVector) {
    let (c, gc) = data.coefficient_gradient(w);
    let lw = lambda.matrix() * w;
    let f = w.dotc(&lw).re - c;
    (f, lw * real(2.0) - gc)
}

/// Maximize `sum_j q_j c(w_j)` subject to `sum_j q_j w_j w_j^dag = I`, one
/// equality row per Hermitian coordinate. Infeasible unless the directions
/// span the space.
pub fn measurement_lp(out_ens: &Ensemble<DensityMatrix>, directions: &[PureState]) -> Result<LinearProgram> {
    let d = out_ens.dim();
    if let Some(w) = directions.iter().find(|w| w.dim() != d) {
        check_dim(d, w.dim())?;
    }
    let data = OutputData::new(out_ens);
    let cols: Vec<Vec<f64>> = directions.iter().map(|w| pure_coords(w.amplitudes())).collect();
    let a = DMatrix::from_fn(d * d, directions.len(), |i, j| cols[j][i]);
    let c = directions.iter().map(|w| data.coefficient(w.amplitudes())).collect();
    LinearProgram::new(Sense::Maximize, c, a, matrix_coords(&identity(d)))
}

/// Multistart search for directions with `c(w) - w^dag lambda w > 1e-7`.
/// Columns carry the LP coordinates and coefficient of each direction;
/// `best_reduced_cost` is the smallest `w^dag lambda w - c(w)` found.
pub fn measurement_pricing(
    out_ens: &Ensemble<DensityMatrix>,
    lambda: &HermitianMatrix,
    starts: usize,
    seed: u64,
) -> PricingOutcome<PureState> {
    let data = OutputData::new(out_ens);
    pricing_outcome(&data, lambda, starts, seed, &[], &SphereOptions::default(), 1e-7)
}

fn pricing_outcome(
    data: &OutputData,
    lambda: &HermitianMatrix,
    starts: usize,
    seed: u64,
    support: &[PureState],
    sphere: &SphereOptions,
    tol: f64,
) -> PricingOutcome<PureState> {
    let d = data.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut initial: Vec<CVector> = support.iter().map(|s| s.amplitudes().clone()).collect();
    initial.extend((0..starts).map(|_| haar_vector(&mut rng, d)));
    let mut found: Vec<(f64, PureState)> = Vec::new();
    for v0 in initial {
        let m = minimize_on_sphere(|w| pricing_fg(data, lambda, w), &v0, sphere);
        let Ok(w) = PureState::normalized(m.point) else {
            continue;
        };
        let rc = pricing_fg(data, lambda, w.amplitudes()).0;
        if let Some(existing) = found.iter_mut().find(|(_, u)| u.inner(&w).norm_sqr() > 1.0 - SAME_STATE_TOL) {
            if rc < existing.0 {
                *existing = (rc, w);
            }
            continue;
        }
        found.push((rc, w));
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| lex_cmp(a.1.amplitudes(), b.1.amplitudes())));
    let best = found.first().map_or(0.0, |r| r.0);
    PricingOutcome {
        columns: found
            .into_iter()
            .filter(|(rc, _)| *rc < -tol)
            .map(|(_, w)| PricedColumn {
                column: pure_coords(w.amplitudes()),
                cost: data.coefficient(w.amplitudes()),
                tag: w,
            })
            .collect(),
        best_reduced_cost: best,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOptions {
    /// Pricing threshold on the reduced cost.
    pub tol: f64,
    /// Random starts per pricing call (current support directions are added).
    pub starts: usize,
    pub seed: u64,
    pub max_rounds: usize,
    pub sphere: SphereOptions,
}

impl Default for MeasurementOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            starts: 8,
            seed: 0,
            max_rounds: 200,
            sphere: SphereOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeasurementResult {
    pub povm: Povm,
    /// Accessible information of the ensemble under `povm`.
    pub value: f64,
    /// Optimal value of the last master LP.
    pub lp_value: f64,
    /// `Tr(lambda)`: an upper bound on the accessible information whenever
    /// pricing found no violated direction.
    pub dual_bound: f64,
    pub pricing_residual: f64,
    pub rounds: usize,
    pub converged: bool,
}

/// Accessible information of an output ensemble, by column generation from
/// the computational basis and the eigenbasis of the average state.
pub fn optimize_measurement(out_ens: &Ensemble<DensityMatrix>, opts: &MeasurementOptions) -> Result<MeasurementResult> {
    optimize_measurement_from(out_ens, &[], opts)
}

/// As [`optimize_measurement`] with extra starting directions. Seeding with
/// the directions of a POVM guarantees a result at least as good as it.
pub fn optimize_measurement_from(
    out_ens: &Ensemble<DensityMatrix>,
    seeds: &[PureState],
    opts: &MeasurementOptions,
) -> Result<MeasurementResult> {
    let d = out_ens.dim();
    if let Some(w) = seeds.iter().find(|w| w.dim() != d) {
        check_dim(d, w.dim())?;
    }
    let data = OutputData::new(out_ens);
    let mut master: MasterProblem<PureState> = MasterProblem::new(Sense::Maximize, matrix_coords(&identity(d)));
    let eig = eigh(&data.average);
    let basis = (0..d)
        .map(|k| PureState::basis(d, k))
        .chain((0..d).map(|k| PureState::normalized(eig.vector(k)).expect("unit eigenvector")));
    for w in seeds.iter().cloned().chain(basis) {
        let col = pure_coords(w.amplitudes());
        let cost = data.coefficient(w.amplitudes());
        master.add_column(col, cost, w);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cg = column_generation(
        &mut master,
        |sol, m| {
            let lambda = coords_to_hermitian(&HermitianCoords::new(d, sol.duals.clone()).expect("d^2 duals"));
            let support: Vec<PureState> = sol
                .x
                .iter()
                .zip(m.tags())
                .filter(|(x, _)| **x > 1e-10)
                .map(|(_, w)| w.clone())
                .collect();
            pricing_outcome(&data, &lambda, opts.starts, rng.random(), &support, &opts.sphere, opts.tol)
        },
        opts.tol,
        opts.max_rounds,
    )?;
    let lambda = coords_to_hermitian(&HermitianCoords::new(d, cg.solution.duals.clone())?);
    let povm = refit_povm(&cg.solution.x, master.tags())?;
    let value = accessible_information_given(out_ens, &povm)?;
    Ok(MeasurementResult {
        povm,
        value,
        lp_value: cg.solution.objective,
        dual_bound: lambda.matrix().trace().re,
        pricing_residual: cg.pricing_residual,
        rounds: cg.rounds,
        converged: cg.converged,
    })
}

/// Re-fits the weights of the support directions by nonnegative least
/// squares against the completeness rows, so the POVM is complete to
/// rounding rather than to LP tolerance.
fn refit_povm(x: &[f64], directions: &[PureState]) -> Result<Povm> {
    let support: Vec<&PureState> = x
        .iter()
        .zip(directions)
        .filter(|(q, _)| **q > 1e-12)
        .map(|(_, w)| w)
        .collect();
    let d = support.first().ok_or(Error::Empty("measurement support"))?.dim();
    let cols: Vec<Vec<f64>> = support.iter().map(|w| pure_coords(w.amplitudes())).collect();
    let a = DMatrix::from_fn(d * d, cols.len(), |i, j| cols[j][i]);
    let b = DVector::from_vec(matrix_coords(&identity(d)));
    let q = nnls(&a, &b);
    let items: Vec<(f64, PureState)> = q
        .iter()
        .zip(support)
        .filter(|(q, _)| **q > 0.0)
        .map(|(q, w)| (*q, w.clone()))
        .collect();
    // Nearly parallel support directions leave the least-squares fit
    // ill-conditioned; conjugating every element by F^{-1/2}, with F the
    // element sum, removes what is left of the defect.
    let povm = Povm::new_unchecked(items)?;
    let frame: CMatrix = povm.elements().iter().sum();
    let inv_sqrt = eigh(&frame).map(|l| 1.0 / l.max(1e-300).sqrt());
    let items = povm
        .items()
        .iter()
        .map(|(q, w)| {
            let u = &inv_sqrt * w.amplitudes();
            Ok((q * u.norm_squared(), PureState::normalized(u)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Povm::new(items)
}

/// The channel sending `rho` to the diagonal matrix of outcome probabilities
/// of `povm` on `N(rho)`. Kraus operators `|j><j| sqrt(q_j) w_j^dag A_i`.
pub fn induced_classical_channel(ch: &QuantumChannel, povm: &Povm) -> Result<QuantumChannel> {
    check_dim(ch.dim_out(), povm.dim())?;
    let m = povm.len();
    let mut kraus = Vec::with_capacity(m * ch.num_kraus());
    for (j, (q, w)) in povm.items().iter().enumerate() {
        let row = w.amplitudes().adjoint() * real(q.sqrt());
        for a in ch.kraus() {
            let mut k = CMatrix::zeros(m, ch.dim_in());
            k.row_mut(j).copy_from(&(&row * a));
            kraus.push(k);
        }
    }
    QuantumChannel::new(kraus)
}

#[derive(Debug, Clone, PartialEq)]
pub struct C11Options {
    pub restarts: usize,
    pub seed: u64,
    /// Alternation stops once a full round improves the value by less.
    pub tol: f64,
    pub max_alternations: usize,
    pub measurement: MeasurementOptions,
    pub ensemble: C1InfOptions,
}

impl Default for C11Options {
    fn default() -> Self {
        Self {
            restarts: 8,
            seed: 0,
            tol: 1e-7,
            max_alternations: 100,
            measurement: MeasurementOptions::default(),
            ensemble: C1InfOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct C11Problem {
    pub channel: QuantumChannel,
    pub restricted_signals: Option<Vec<PureState>>,
    pub options: C11Options,
}

impl C11Problem {
    pub fn new(channel: QuantumChannel) -> Self {
        Self {
            channel,
            restricted_signals: None,
            options: C11Options::default(),
        }
    }

    pub fn with_signals(mut self, signals: Vec<PureState>) -> Result<Self> {
        if signals.is_empty() {
            return Err(Error::Empty("signal set"));
        }
        if let Some(s) = signals.iter().find(|s| s.dim() != self.channel.dim_in()) {
            check_dim(self.channel.dim_in(), s.dim())?;
        }
        self.restricted_signals = Some(signals);
        Ok(self)
    }

    pub fn with_options(mut self, options: C11Options) -> Self {
        self.options = options;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Measurement,
    Ensemble,
}

/// State after one half-step of the alternation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iterate {
    pub step: Step,
    /// Mutual information of the current ensemble and measurement.
    pub value: f64,
    /// Holevo quantity of the current output ensemble.
    pub chi: f64,
}

#[derive(Debug, Clone)]
pub struct RestartRecord {
    pub value: f64,
    pub status: Status,
    pub alternations: usize,
    pub iterates: Vec<Iterate>,
}

#[derive(Debug, Clone)]
pub struct C11Result {
    pub value: f64,
    pub ensemble: Ensemble<PureState>,
    pub povm: Povm,
    /// Holevo quantity of the returned output ensemble.
    pub chi: f64,
    pub restarts_used: usize,
    /// Final value of every restart, in restart order.
    pub restart_values: Vec<f64>,
    pub restarts: Vec<RestartRecord>,
    /// Index of the restart that produced the result.
    pub best_restart: usize,
    pub status: Status,
}

impl C11Result {
    /// Largest minus smallest restart value.
    pub fn restart_spread(&self) -> f64 {
        let max = self.restart_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.restart_values.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }
}

struct RestartOutcome {
    value: f64,
    ensemble: Ensemble<PureState>,
    povm: Povm,
    record: RestartRecord,
}

/// Alternates measurement and ensemble optimization from
/// `options.restarts` random ensembles and returns the best run. Ties go to
/// the earlier restart.
pub fn c11(problem: &C11Problem) -> Result<C11Result> {
    let opts = &problem.options;
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let mut outcomes = Vec::with_capacity(opts.restarts);
    for r in 0..opts.restarts {
        outcomes.push(run_restart(problem, r as u64)?);
    }
    let best = outcomes
        .iter()
        .enumerate()
        .fold(0, |b, (i, o)| if o.value > outcomes[b].value { i } else { b });
    let restart_values = outcomes.iter().map(|o| o.value).collect();
    let restarts: Vec<RestartRecord> = outcomes.iter().map(|o| o.record.clone()).collect();
    let o = outcomes.swap_remove(best);
    let chi = holevo_chi(&o.ensemble.through(&problem.channel)?);
    Ok(C11Result {
        value: o.value,
        ensemble: o.ensemble,
        povm: o.povm,
        chi,
        restarts_used: opts.restarts,
        restart_values,
        status: o.record.status,
        restarts,
        best_restart: best,
    })
}

fn initial_ensemble(problem: &C11Problem, rng: &mut ChaCha8Rng) -> Result<Ensemble<PureState>> {
    let d = problem.channel.dim_in();
    let states: Vec<PureState> = match &problem.restricted_signals {
        Some(s) => s.clone(),
        None => (0..=d)
            .map(|_| PureState::normalized(haar_vector(rng, d)))
            .collect::<Result<_>>()?,
    };
    // Flat Dirichlet weights.
    let w: Vec<f64> = states.iter().map(|_| rng.sample::<f64, _>(Exp1)).collect();
    Ensemble::normalized(w.into_iter().zip(states).collect())
}

fn run_restart(problem: &C11Problem, restart: u64) -> Result<RestartOutcome> {
    let opts = &problem.options;
    let ch = &problem.channel;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart);
    let mut ensemble = initial_ensemble(problem, &mut rng)?;
    let mut seeds: Vec<PureState> = Vec::new();
    let mut iterates = Vec::new();
    let mut best: Option<(f64, Ensemble<PureState>, Povm)> = None;
    let mut status = Status::RoundLimit;
    let mut alternations = 0;
    while alternations < opts.max_alternations {
        alternations += 1;
        let out = ensemble.through(ch)?;
        let chi = holevo_chi(&out);
        let mopts = MeasurementOptions {
            seed: rng.random(),
            ..opts.measurement.clone()
        };
        let m = optimize_measurement_from(&out, &seeds, &mopts)?;
        iterates.push(Iterate {
            step: Step::Measurement,
            value: m.value,
            chi,
        });

        let induced = induced_classical_channel(ch, &m.povm)?;
        let mut c1 = C1InfProblem::new(induced).with_options(C1InfOptions {
            seed: rng.random(),
            ..opts.ensemble.clone()
        });
        if let Some(signals) = &problem.restricted_signals {
            c1 = c1.with_signals(signals.clone())?;
        }
        let e = c1inf(&c1.with_initial_ensemble(ensemble.clone())?)?;
        let next = if problem.restricted_signals.is_some() {
            e.ensemble
        } else {
            merge_close_states(&e.ensemble, MERGE_TOL)?
        };
        let value = accessible_information_given(&next.through(ch)?, &m.povm)?;
        let chi = holevo_chi(&next.through(ch)?);
        iterates.push(Iterate {
            step: Step::Ensemble,
            value,
            chi,
        });

        let previous = best.as_ref().map_or(f64::NEG_INFINITY, |b| b.0);
        seeds = m.povm.items().iter().map(|(_, w)| w.clone()).collect();
        if value > previous {
            best = Some((value, next.clone(), m.povm));
        }
        ensemble = next;
        if value < previous + opts.tol {
            status = Status::Converged;
            break;
        }
    }
    let (value, ensemble, povm) = best.expect("at least one alternation");
    Ok(RestartOutcome {
        value,
        ensemble,
        povm,
        record: RestartRecord {
            value,
            status,
            alternations,
            iterates,
        },
    })
}

/// Ensemble states closer than this (in `1 - |<u, v>|^2`) are merged between
/// alternations.
const MERGE_TOL: f64 = 1e-6;

/// Replaces each cluster of nearly equal states by the top eigenvector of
/// its weighted projector sum. The ensemble step tends to return such
/// clusters, and a measurement fitted to them splits into nearly parallel
/// elements that keep the next ensemble step from reaching orthogonal
/// inputs.
fn merge_close_states(ens: &Ensemble<PureState>, tol: f64) -> Result<Ensemble<PureState>> {
    let mut clusters: Vec<Vec<&(f64, PureState)>> = Vec::new();
    for item in ens.items() {
        match clusters
            .iter_mut()
            .find(|c| c[0].1.inner(&item.1).norm_sqr() > 1.0 - tol)
        {
            Some(c) => c.push(item),
            None => clusters.push(vec![item]),
        }
    }
    let items = clusters
        .into_iter()
        .map(|c| {
            if c.len() == 1 {
                return Ok(c[0].clone());
            }
            let weight: f64 = c.iter().map(|(p, _)| p).sum();
            let d = ens.dim();
            let mut m = CMatrix::zeros(d, d);
            for (p, s) in &c {
                m += s.projector().into_matrix() * real(*p);
            }
            let e = eigh(&m);
            Ok((weight, PureState::normalized(e.vector(d - 1))?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::normalized(items)
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        anti_trine_povm, symmetric_two_state_povm, trine_channel, trine_states, two_state_channel,
        two_state_signals,
    };
    use crate::entropy::binary_entropy;
    use crate::lp::solve_lp;
    use crate::quantum::povm_probabilities;

    fn pure_ensemble(states: Vec<PureState>) -> Ensemble<DensityMatrix> {
        Ensemble::uniform(states).unwrap().to_mixed()
    }

    fn two_state_value(theta: f64) -> f64 {
        1.0 - binary_entropy(0.5 - theta.sin() / 2.0)
    }

    #[test]
    fn orthonormal_directions_give_unit_weights() {
        let ens = pure_ensemble(two_state_signals(0.7));
        let basis = vec![PureState::basis(2, 0), PureState::basis(2, 1)];
        let sol = solve_lp(&measurement_lp(&ens, &basis).unwrap());
        assert!(sol.is_optimal());
        assert!(sol.x.iter().all(|q| (q - 1.0).abs() < 1e-9));
        let mi = accessible_information_given(&ens, &Povm::computational_basis(2)).unwrap();
        assert!((sol.objective - mi).abs() < 1e-12);
    }

    #[test]
    fn symmetric_basis_on_two_states() {
        let theta = std::f64::consts::FRAC_PI_3;
        let ens = pure_ensemble(two_state_signals(theta));
        let dirs: Vec<PureState> = symmetric_two_state_povm(theta).items().iter().map(|(_, w)| w.clone()).collect();
        let sol = solve_lp(&measurement_lp(&ens, &dirs).unwrap());
        assert!((sol.objective - two_state_value(theta)).abs() < 1e-10);
        assert!((sol.objective - 0.6454).abs() < 1e-4);
    }

    #[test]
    fn anti_trine_selected_from_mixed_directions() {
        let ens = pure_ensemble(trine_states());
        let mut dirs: Vec<PureState> = anti_trine_povm().items().iter().map(|(_, w)| w.clone()).collect();
        dirs.push(PureState::basis(2, 0));
        dirs.push(PureState::basis(2, 1));
        let sol = solve_lp(&measurement_lp(&ens, &dirs).unwrap());
        assert!((sol.objective - (3f64.log2() - 1.0)).abs() < 1e-9);
        for q in &sol.x[..3] {
            assert!((q - 2.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn non_spanning_directions_are_infeasible() {
        let ens = pure_ensemble(trine_states());
        let sol = solve_lp(&measurement_lp(&ens, &[PureState::basis(2, 0)]).unwrap());
        assert_eq!(sol.status, crate::lp::LpStatus::Infeasible);
    }

    #[test]
    fn null_outcomes_have_zero_coefficient() {
        let ens = pure_ensemble(vec![PureState::basis(2, 0)]);
        assert_eq!(measurement_coefficient(&ens, &PureState::basis(2, 1)).unwrap(), 0.0);
    }

    #[test]
    fn pricing_bounds() {
        let ens = pure_ensemble(trine_states());
        let big = HermitianMatrix::identity(2);
        let big = HermitianMatrix::new(big.matrix() * real(10.0)).unwrap();
        assert!(measurement_pricing(&ens, &big, 8, 1).columns.is_empty());
        let zero = HermitianMatrix::zeros(2);
        assert!(!measurement_pricing(&ens, &zero, 8, 1).columns.is_empty());
    }

    #[test]
    fn trine_accessible_information() {
        let ens = pure_ensemble(trine_states());
        let r = optimize_measurement(&ens, &MeasurementOptions::default()).unwrap();
        assert!((r.value - (3f64.log2() - 1.0)).abs() < 1e-6, "{}", r.value);
        assert!(r.povm.completeness_defect() < 1e-9);
        assert!(r.converged);
        // The dual bound certifies optimality up to the pricing tolerance.
        assert!(r.dual_bound >= r.value - 1e-7);
    }

    #[test]
    fn two_state_accessible_information() {
        for theta in [std::f64::consts::PI / 6.0, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_3] {
            let ens = pure_ensemble(two_state_signals(theta));
            let r = optimize_measurement(&ens, &MeasurementOptions::default()).unwrap();
            assert!((r.value - two_state_value(theta)).abs() < 1e-6, "{theta}: {}", r.value);
        }
    }

    #[test]
    fn induced_channel_examples() {
        let id = QuantumChannel::identity(2);
        let ind = induced_classical_channel(&id, &Povm::computational_basis(2)).unwrap();
        for k in 0..2 {
            let out = ind.apply_pure_raw(PureState::basis(2, k).amplitudes());
            assert!((out[(k, k)].re - 1.0).abs() < 1e-14);
        }
        let (ch, signals) = trine_channel();
        let ind = induced_classical_channel(&ch, &anti_trine_povm()).unwrap();
        let out = ind.apply_pure_raw(signals[0].amplitudes());
        let probs: Vec<f64> = (0..3).map(|j| out[(j, j)].re).collect();
        assert!(probs[0].abs() < 1e-12 && (probs[1] - 0.5).abs() < 1e-12 && (probs[2] - 0.5).abs() < 1e-12);
        let direct = povm_probabilities(&anti_trine_povm(), &signals[1].projector()).unwrap();
        let out = ind.apply_pure_raw(signals[1].amplitudes());
        for (j, p) in direct.iter().enumerate() {
            assert!((out[(j, j)].re - p).abs() < 1e-12);
        }
    }

    #[test]
    fn c11_two_state_channel() {
        let theta = std::f64::consts::FRAC_PI_4;
        let (ch, signals) = two_state_channel(theta);
        let problem = C11Problem::new(ch).with_signals(signals).unwrap().with_options(C11Options {
            restarts: 2,
            ..Default::default()
        });
        let r = c11(&problem).unwrap();
        assert!((r.value - two_state_value(theta)).abs() < 1e-5, "{}", r.value);
        for (p, _) in r.ensemble.items() {
            assert!((p - 0.5).abs() < 1e-3);
        }
    }

    #[test]
    fn c11_identity_is_one_bit() {
        let problem = C11Problem::new(QuantumChannel::identity(2)).with_options(C11Options {
            restarts: 1,
            ..Default::default()
        });
        let r = c11(&problem).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
        assert!(r.value <= r.chi + 1e-8);
    }
}
