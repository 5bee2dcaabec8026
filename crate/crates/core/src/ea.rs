//! Entanglement-assisted capacity, single-letter coherent information, and
//! an experimental optimizer for capacity with a bounded entanglement rate.
//!
//! Writing `N^c` for the complementary channel, the entropy of
//! `(N ⊗ I)(Phi_rho)` equals `H(N^c(rho))`, so every quantity here is a
//! combination of `H(rho)`, `H(N(rho))` and `H(N^c(rho))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::c1inf::{g_objective, pricing_minima, update_rho, Status};
use crate::entropy::{entropy_gradient, entropy_value_gradient, matrix_entropy};
use crate::error::{Error, Result};
use crate::info::{limited_ea_objective, quantum_mutual_information, coherent_information};
use crate::linalg::{
    eigh, frobenius_norm, gaussian_matrix, haar_vector, hermitize, identity, outer, project_to_density, real,
    trace_product, CMatrix, CVector,
};
use crate::lp::{column_generation, LpSolution, MasterProblem, PricedColumn, PricingOutcome, Sense};
use crate::optim::{bisect_concave, fw_gap, minimize_on_sphere, projected_gradient_residual, trace_free, SphereOptions};
use crate::quantum::{
    coords_to_hermitian, matrix_coords, DensityMatrix, Ensemble, HermitianCoords, HermitianMatrix,
    PureState, QuantumChannel,
};

/// Iterates are mixed with this multiple of `I/d` so every eigenvalue stays
/// above the entropy clip.
pub const INTERIOR_MIX: f64 = 1e-9;

/// `H(rho) + H(N(rho)) - H(N^c(rho))` for any Hermitian `rho` of unit trace.
pub fn qmi_value(ch: &QuantumChannel, rho: &CMatrix) -> f64 {
    matrix_entropy(rho) + matrix_entropy(&ch.apply_raw(rho)) - matrix_entropy(&ch.complementary_raw(rho))
}

/// Hermitian gradient of [`qmi_value`]:
/// `grad H(rho) + N^dag(grad H(N rho)) - N^c^dag(grad H(N^c rho))`.
pub fn qmi_gradient(ch: &QuantumChannel, rho: &CMatrix) -> CMatrix {
    entropy_gradient(rho) + coherent_gradient(ch, rho)
}

/// `H(N(rho)) - H(N^c(rho))`.
pub fn coherent_value(ch: &QuantumChannel, rho: &CMatrix) -> f64 {
    matrix_entropy(&ch.apply_raw(rho)) - matrix_entropy(&ch.complementary_raw(rho))
}

/// Hermitian gradient of [`coherent_value`].
pub fn coherent_gradient(ch: &QuantumChannel, rho: &CMatrix) -> CMatrix {
    ch.adjoint_raw(&entropy_gradient(&ch.apply_raw(rho)))
        - ch.complementary_adjoint_raw(&entropy_gradient(&ch.complementary_raw(rho)))
}

fn mix_interior(rho: &CMatrix) -> CMatrix {
    let d = rho.nrows();
    hermitize(&(rho * real(1.0 - INTERIOR_MIX) + identity(d) * real(INTERIOR_MIX / d as f64)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CeResult {
    pub value: f64,
    pub rho: DensityMatrix,
    /// Frank-Wolfe gap at `rho`: `value + fw_gap >= C_E`.
    pub fw_gap: f64,
    /// `|| P(rho + G) - rho ||_F` with `G` the gradient.
    pub gradient_residual: f64,
    pub iterations: usize,
    /// `H(rho)`: EPR pairs consumed per channel use.
    pub entanglement_rate: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CeOptions {
    /// Stop once the Frank-Wolfe gap is below this.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for CeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_iterations: 20_000,
        }
    }
}

/// Maximizes the quantum mutual information from `I/d`. Each iteration
/// tries a Frank-Wolfe step toward the top eigenvector of the gradient and a
/// projected-gradient step, both with exact line search, and keeps the
/// better one.
pub fn c_ea(ch: &QuantumChannel, opts: &CeOptions) -> Result<CeResult> {
    let d = ch.dim_in();
    let mut rho = identity(d) / real(d as f64);
    let mut f = qmi_value(ch, &rho);
    let mut status = Status::RoundLimit;
    let mut it = 0;
    while it < opts.max_iterations {
        let g = qmi_gradient(ch, &rho);
        if fw_gap(&rho, &g) < opts.tol {
            status = Status::Converged;
            break;
        }
        it += 1;
        let eig = eigh(&g);
        let fw_dir = outer(&eig.vector(d - 1)) - &rho;
        let g0 = trace_free(&g);
        let gn = frobenius_norm(&g0);
        let mut best: Option<(f64, CMatrix)> = None;
        let mut dirs = vec![fw_dir];
        if gn > 0.0 {
            dirs.push(project_to_density(&(&rho + &g0 / real(gn))) - &rho);
        }
        for dir in dirs {
            let mut t = bisect_concave(|t| trace_product(&dir, &qmi_gradient(ch, &(&rho + &dir * real(t)))), 50);
            let mut cand = mix_interior(&(&rho + &dir * real(t)));
            let mut val = qmi_value(ch, &cand);
            // Eigenvalue clipping makes the derivative unreliable on the
            // boundary, where bisection can overshoot to a worse point.
            while val <= f && t > 1e-12 {
                t *= 0.5;
                cand = mix_interior(&(&rho + &dir * real(t)));
                val = qmi_value(ch, &cand);
            }
            if best.as_ref().is_none_or(|b| val > b.0) {
                best = Some((val, cand));
            }
        }
        let (val, cand) = best.expect("at least one direction");
        if val <= f {
            // No step improves: the gap is at the resolution of the line search.
            status = Status::Converged;
            break;
        }
        rho = cand;
        f = val;
    }
    let g = qmi_gradient(ch, &rho);
    let rho = DensityMatrix::from_matrix_unchecked(rho);
    Ok(CeResult {
        value: quantum_mutual_information(ch, &rho)?,
        fw_gap: fw_gap(rho.matrix(), &g),
        gradient_residual: projected_gradient_residual(rho.matrix(), &g),
        iterations: it,
        entanglement_rate: crate::entropy::von_neumann_entropy(&rho),
        rho,
        status,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QResult {
    pub value: f64,
    pub rho: DensityMatrix,
    /// Distinct points where the ascent stopped, best first.
    pub maxima: Vec<(f64, DensityMatrix)>,
}

/// Starts closer than this (entrywise) are the same maximum.
pub const DISTINCT_MAXIMA_TOL: f64 = 1e-4;

/// Projected-gradient ascent on `rho`, with Armijo backtracking along the
/// segment to the projection of `rho + G / |G|`.
pub fn ascend_coherent(ch: &QuantumChannel, start: &CMatrix, tol: f64, max_iterations: usize) -> (f64, CMatrix) {
    let mut rho = start.clone();
    let mut f = coherent_value(ch, &rho);
    for _ in 0..max_iterations {
        let g = trace_free(&coherent_gradient(ch, &rho));
        let gn = frobenius_norm(&g);
        if gn < 1e-14 || projected_gradient_residual(&rho, &g) < tol {
            break;
        }
        let dir = project_to_density(&(&rho + &g / real(gn))) - &rho;
        let slope = trace_product(&dir, &g);
        if slope <= 1e-15 {
            break;
        }
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-12 {
            let cand = mix_interior(&(&rho + &dir * real(t)));
            let val = coherent_value(ch, &cand);
            if val >= f + 1e-4 * t * slope {
                rho = cand;
                f = val;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (f, rho)
}

/// Multistart maximization of the single-letter coherent information from
/// `I/d`, `d` nearly pure random states and `d` random full-rank states, plus
/// `extra_starts` further random full-rank states.
pub fn coherent_info_max(ch: &QuantumChannel, extra_starts: usize, seed: u64) -> Result<QResult> {
    let d = ch.dim_in();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![identity(d) / real(d as f64)];
    for _ in 0..d {
        let v = haar_vector(&mut rng, d);
        starts.push(hermitize(&(outer(&v) * real(1.0 - 1e-6) + identity(d) * real(1e-6 / d as f64))));
    }
    for _ in 0..d + extra_starts {
        let m = gaussian_matrix(&mut rng, d, d);
        let r = &m * m.adjoint();
        let tr = r.trace().re;
        starts.push(hermitize(&(r / real(tr))));
    }
    let mut maxima: Vec<(f64, CMatrix)> = Vec::new();
    for s in starts {
        let (val, rho) = ascend_coherent(ch, &s, 1e-9, 5000);
        let same = maxima
            .iter_mut()
            .find(|(_, r)| crate::linalg::max_abs_diff(r, &rho) <= DISTINCT_MAXIMA_TOL);
        match same {
            Some(m) => {
                if val > m.0 {
                    *m = (val, rho);
                }
            }
            None => maxima.push((val, rho)),
        }
    }
    maxima.sort_by(|a, b| b.0.total_cmp(&a.0));
    let maxima: Vec<(f64, DensityMatrix)> = maxima
        .into_iter()
        .map(|(_, r)| {
            let rho = DensityMatrix::from_matrix_unchecked(r);
            Ok((coherent_information(ch, &rho)?, rho))
        })
        .collect::<Result<_>>()?;
    let (value, rho) = maxima[0].clone();
    Ok(QResult { value, rho, maxima })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitedEaOptions {
    pub tol: f64,
    pub pricing_tol: f64,
    /// Random starts per pricing call, for pure and for mixed candidates.
    pub starts: usize,
    pub seed: u64,
    pub max_rounds: usize,
    pub max_pricing_rounds: usize,
    pub sphere: SphereOptions,
}

impl Default for LimitedEaOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            pricing_tol: 1e-7,
            starts: 6,
            seed: 0,
            max_rounds: 60,
            max_pricing_rounds: 60,
            sphere: SphereOptions {
                max_iterations: 500,
                ..SphereOptions::default()
            },
        }
    }
}

/// Result of the limited-entanglement heuristic. The value is that of the
/// conjectured formula for the returned ensemble; there is no optimality
/// certificate because pricing over mixed states is a local search.
#[derive(Debug, Clone)]
pub struct LimitedEaResult {
    pub budget: f64,
    pub value: f64,
    pub ensemble: Ensemble<DensityMatrix>,
    /// `sum p_i H(rho_i)`, at most `budget`.
    pub average_entropy: f64,
    pub rho: DensityMatrix,
    pub pricing_residual: f64,
    pub rounds: usize,
    pub status: Status,
}

/// Master tags: an input state, or the slack of the entropy row.
#[derive(Debug, Clone)]
enum Column {
    State(DensityMatrix),
    Slack,
}

struct LimitedEa<'a> {
    ch: &'a QuantumChannel,
    opts: &'a LimitedEaOptions,
    master: MasterProblem<Column>,
    rng: ChaCha8Rng,
    rho: CMatrix,
}

struct Solved {
    solution: LpSolution,
    value: f64,
    residual: f64,
}

/// Cost of a state column: `H(N^c(rho)) - H(rho)`; for a pure state this is
/// `H(N(v v^dag))`.
fn state_cost(ch: &QuantumChannel, rho: &CMatrix) -> f64 {
    matrix_entropy(&ch.complementary_raw(rho)) - matrix_entropy(rho)
}

fn flatten(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

impl<'a> LimitedEa<'a> {
    fn new(ch: &'a QuantumChannel, opts: &'a LimitedEaOptions) -> Self {
        let d = ch.dim_in();
        let rho = identity(d) / real(d as f64);
        let mut rhs = matrix_coords(&rho);
        rhs.push(0.0);
        let mut master = MasterProblem::new(Sense::Minimize, rhs);
        let mut slack = vec![0.0; d * d];
        slack.push(1.0);
        master.add_column(slack, 0.0, Column::Slack);
        let mut s = Self {
            ch,
            opts,
            master,
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            rho,
        };
        for k in 0..d {
            s.add_state(outer(PureState::basis(d, k).amplitudes()));
        }
        s
    }

    fn add_state(&mut self, rho: CMatrix) {
        let (col, cost) = self.column(&rho);
        self.master.add_column(col, cost, Column::State(DensityMatrix::from_matrix_unchecked(rho)));
    }

    fn column(&self, rho: &CMatrix) -> (Vec<f64>, f64) {
        let mut col = matrix_coords(rho);
        col.push(matrix_entropy(rho));
        (col, state_cost(self.ch, rho))
    }

    fn set_point(&mut self, rho: &CMatrix, budget: f64) {
        let mut rhs = matrix_coords(rho);
        rhs.push(budget);
        self.master.set_rhs(rhs);
    }

    fn solve_at(&mut self, rho: &CMatrix, budget: f64) -> Result<Solved> {
        let d = self.ch.dim_in();
        self.set_point(rho, budget);
        let eig = eigh(rho);
        for k in 0..d {
            if eig.values[k] > 1e-12 {
                self.add_state(outer(&eig.vector(k)));
            }
        }
        self.add_state(rho.clone());
        let ch = self.ch;
        let opts = self.opts;
        let rng = &mut self.rng;
        let cg = column_generation(
            &mut self.master,
            |sol, m| price(ch, opts, sol, m, rng.random()),
            opts.pricing_tol,
            opts.max_pricing_rounds,
        )?;
        let value = matrix_entropy(&self.ch.apply_raw(rho)) - cg.solution.objective;
        Ok(Solved {
            solution: cg.solution,
            value,
            residual: cg.pricing_residual,
        })
    }

    fn run(&mut self, budget: f64) -> Result<LimitedEaResult> {
        let d = self.ch.dim_in();
        let mut current = self.solve_at(&self.rho.clone(), budget)?;
        let mut status = Status::RoundLimit;
        let mut rounds = 0;
        while rounds < self.opts.max_rounds {
            rounds += 1;
            let (tau, mu) = split_duals(&current.solution, d)?;
            let base = DensityMatrix::from_matrix_unchecked(self.rho.clone());
            let next = update_rho(self.ch, &tau, &base);
            let step = next.matrix() - &self.rho;
            if frobenius_norm(&step) < 1e-12 {
                status = Status::Converged;
                break;
            }
            let slack = (-current.residual).max(0.0);
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..16 {
                let trial = &self.rho + &step * real(t);
                if g_objective(self.ch, &tau, &trial) - mu * budget + slack <= current.value + self.opts.tol {
                    break;
                }
                let solved = self.solve_at(&trial, budget)?;
                if solved.value > current.value + self.opts.tol {
                    accepted = Some((trial, solved));
                    break;
                }
                t *= 0.5;
            }
            match accepted {
                Some((trial, solved)) => {
                    self.rho = trial;
                    current = solved;
                }
                None => {
                    current = self.solve_at(&self.rho.clone(), budget)?;
                    status = Status::Converged;
                    break;
                }
            }
        }
        let items: Vec<(f64, DensityMatrix)> = current
            .solution
            .x
            .iter()
            .zip(self.master.tags())
            .filter_map(|(x, c)| match c {
                Column::State(s) if *x > 1e-12 => Some((*x, s.clone())),
                _ => None,
            })
            .collect();
        let ensemble = Ensemble::normalized(items)?;
        let (value, average_entropy) = limited_ea_objective(self.ch, &ensemble)?;
        Ok(LimitedEaResult {
            budget,
            value,
            average_entropy,
            rho: ensemble.average(),
            ensemble,
            pricing_residual: current.residual,
            rounds,
            status,
        })
    }
}

fn split_duals(sol: &LpSolution, d: usize) -> Result<(HermitianMatrix, f64)> {
    if !sol.is_optimal() {
        return Err(Error::Lp(sol.status));
    }
    let n = d * d;
    let tau = coords_to_hermitian(&HermitianCoords::new(d, sol.duals[..n].to_vec())?);
    Ok((tau, sol.duals[n]))
}

/// Value and ambient gradient of the mixed-state reduced cost
/// `H(N^c rho) - (1 + mu) H(rho) - Tr(tau rho)` at `rho = M M^dag / Tr(M M^dag)`,
/// with `M` flattened column-major.
pub fn mixed_pricing_value_gradient(
    ch: &QuantumChannel,
    tau: &HermitianMatrix,
    mu: f64,
    m: &CVector,
) -> (f64, CVector) {
    let d = ch.dim_in();
    let mm = CMatrix::from_column_slice(d, d, m.as_slice());
    let t = m.norm_squared();
    let rho = hermitize(&(&mm * mm.adjoint() / real(t)));
    let env = ch.complementary_raw(&rho);
    let (h_env, g_env) = entropy_value_gradient(&env);
    let (h_in, g_in) = entropy_value_gradient(&rho);
    let f = h_env - (1.0 + mu) * h_in - trace_product(&rho, tau.matrix());
    let g = ch.complementary_adjoint_raw(&g_env) - g_in * real(1.0 + mu) - tau.matrix();
    let shift = trace_product(&rho, &g);
    let grad = (g - identity(d) * real(shift)) * &mm * real(2.0 / t);
    (f, flatten(&grad))
}

fn price(
    ch: &QuantumChannel,
    opts: &LimitedEaOptions,
    sol: &LpSolution,
    master: &MasterProblem<Column>,
    seed: u64,
) -> PricingOutcome<Column> {
    let d = ch.dim_in();
    let Ok((tau, mu)) = split_duals(sol, d) else {
        return PricingOutcome::empty();
    };
    let column = |rho: &CMatrix| -> (Vec<f64>, f64) {
        let mut col = matrix_coords(rho);
        col.push(matrix_entropy(rho));
        (col, state_cost(ch, rho))
    };
    let reduced = |rho: &CMatrix| -> f64 {
        let (col, cost) = column(rho);
        master.reduced_cost(&col, cost, &sol.duals)
    };
    let mut found: Vec<(f64, CMatrix)> = Vec::new();

    // Pure candidates: the entropy row entry vanishes, so this is the
    // Holevo pricing problem.
    let support: Vec<PureState> = sol
        .x
        .iter()
        .zip(master.tags())
        .filter_map(|(x, c)| match c {
            Column::State(s) if *x > 1e-10 => {
                let e = s.eigen();
                (e.values[d - 1] > 1.0 - 1e-9).then(|| PureState::normalized(e.vector(d - 1)).ok()).flatten()
            }
            _ => None,
        })
        .collect();
    for r in pricing_minima(ch, &tau, opts.starts, seed, &support, &opts.sphere) {
        found.push((r.reduced_cost, outer(r.state.amplitudes())));
    }

    // Mixed candidates.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut starts: Vec<CVector> = sol
        .x
        .iter()
        .zip(master.tags())
        .filter_map(|(x, c)| match c {
            Column::State(s) if *x > 1e-10 => Some(flatten(&s.eigen().map(|l| l.max(0.0).sqrt()))),
            _ => None,
        })
        .collect();
    starts.extend((0..opts.starts).map(|_| flatten(&gaussian_matrix(&mut rng, d, d))));
    for s in starts {
        let r = minimize_on_sphere(|m| mixed_pricing_value_gradient(ch, &tau, mu, m), &s, &opts.sphere);
        let mm = CMatrix::from_column_slice(d, d, r.point.as_slice());
        let rho = hermitize(&(&mm * mm.adjoint() / real(r.point.norm_squared())));
        found.push((reduced(&rho), rho));
    }

    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    let best = found.first().map_or(0.0, |f| f.0);
    PricingOutcome {
        columns: found
            .into_iter()
            .filter(|(rc, _)| *rc < -opts.pricing_tol)
            .map(|(_, rho)| {
                let (col, cost) = column(&rho);
                PricedColumn {
                    column: col,
                    cost,
                    tag: Column::State(DensityMatrix::from_matrix_unchecked(rho)),
                }
            })
            .collect(),
        best_reduced_cost: best,
    }
}

/// Experimental: the limited-entanglement formula at entanglement budget
/// `budget` (bits per channel use), by column generation over mixed-state
/// ensembles with the average-entropy row `sum p_i H(rho_i) <= budget`.
pub fn limited_ea(ch: &QuantumChannel, budget: f64, opts: &LimitedEaOptions) -> Result<LimitedEaResult> {
    Ok(limited_ea_sweep(ch, &[budget], opts)?.remove(0))
}

/// Runs [`limited_ea`] over increasing budgets, carrying the master and the
/// average input from one budget to the next. The previous optimum stays
/// feasible, so the values are non-decreasing.
pub fn limited_ea_sweep(ch: &QuantumChannel, budgets: &[f64], opts: &LimitedEaOptions) -> Result<Vec<LimitedEaResult>> {
    if let Some(b) = budgets.iter().find(|b| !(**b >= 0.0) || !b.is_finite()) {
        return Err(Error::InvalidArgument(format!("entanglement budget must be non-negative, got {b}")));
    }
    if budgets.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("budgets must be non-decreasing".into()));
    }
    if budgets.is_empty() {
        return Err(Error::Empty("budget list"));
    }
    let mut solver = LimitedEa::new(ch, opts);
    budgets.iter().map(|&b| solver.run(b)).collect()
}

/// Pure-state pricing helper shared with tests: `H(N(v v^dag))` equals the
/// mixed cost at a rank-one input.
pub fn pure_state_cost(ch: &QuantumChannel, v: &CVector) -> f64 {
    state_cost(ch, &outer(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c1inf::{c1inf, C1InfProblem};
    use crate::channels::{amplitude_damping, depolarizing, fully_depolarizing};

    #[test]
    fn identity_endpoints() {
        let r = c_ea(&QuantumChannel::identity(2), &CeOptions::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
        assert!((r.entanglement_rate - 1.0).abs() < 1e-9);
        assert_eq!(r.status, Status::Converged);
        let r = c_ea(&fully_depolarizing(2), &CeOptions::default()).unwrap();
        assert!(r.value.abs() < 1e-9);
    }

    #[test]
    fn amplitude_damping_certificate() {
        let ch = amplitude_damping(0.3).unwrap();
        let r = c_ea(&ch, &CeOptions::default()).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!(r.fw_gap < 1e-7);
        assert!((r.value - qmi_value(&ch, r.rho.matrix())).abs() < 1e-9);
        let c1 = c1inf(&C1InfProblem::new(ch)).unwrap();
        assert!(r.value >= c1.value - 1e-6);
    }

    #[test]
    fn coherent_information_examples() {
        let q = coherent_info_max(&QuantumChannel::identity(2), 0, 1).unwrap();
        assert!((q.value - 1.0).abs() < 1e-6);
        let q = coherent_info_max(&fully_depolarizing(2), 0, 1).unwrap();
        assert!(q.value.abs() < 1e-5, "{}", q.value);
        assert!(q.value >= q.maxima.last().unwrap().0);
    }

    #[test]
    fn pure_cost_is_output_entropy() {
        let ch = depolarizing(0.3).unwrap();
        let v = PureState::from_real(&[0.6, 0.8]).unwrap();
        let a = pure_state_cost(&ch, v.amplitudes());
        let b = matrix_entropy(&ch.apply_pure_raw(v.amplitudes()));
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn limited_ea_identity_sweep() {
        let ch = QuantumChannel::identity(2);
        let rs = limited_ea_sweep(&ch, &[0.0, 0.5, 1.0], &LimitedEaOptions::default()).unwrap();
        assert!((rs[0].value - 1.0).abs() < 2e-3, "{}", rs[0].value);
        assert!((rs[2].value - 2.0).abs() < 2e-3, "{}", rs[2].value);
        assert!(rs[1].value >= 1.0 - 1e-6 && rs[1].value <= 2.0 + 1e-6);
        for w in rs.windows(2) {
            assert!(w[1].value >= w[0].value - 1e-6);
        }
        for r in &rs {
            assert!(r.average_entropy <= r.budget + 1e-7);
        }
    }

    #[test]
    fn negative_budget_rejected() {
        assert!(limited_ea(&QuantumChannel::identity(2), -0.1, &LimitedEaOptions::default()).is_err());
    }
}
