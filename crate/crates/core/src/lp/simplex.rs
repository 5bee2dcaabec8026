use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::real_inverse;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// A basic variable: either a structural column or the artificial of a row.
/// Artificials stay basic (at zero) only on redundant rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasisVar {
    Column(usize),
    Artificial(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    /// Smallest pivot element accepted in the ratio test.
    pub pivot_tol: f64,
    /// Primal feasibility tolerance (phase-1 residual, warm-start acceptance).
    pub feas_tol: f64,
    /// A reduced cost must be below `-opt_tol` for its column to enter.
    pub opt_tol: f64,
    pub max_iterations: usize,
    /// Rebuild the basis inverse from scratch after this many pivots.
    pub refactor_every: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            pivot_tol: 1e-10,
            feas_tol: 1e-8,
            opt_tol: 1e-9,
            max_iterations: 1_000_000,
            refactor_every: 50,
        }
    }
}

/// `min|max c.x  s.t.  A x = b, x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub c: Vec<f64>,
    pub a: DMatrix<f64>,
    pub b: Vec<f64>,
}

impl LinearProgram {
    pub fn new(sense: Sense, c: Vec<f64>, a: DMatrix<f64>, b: Vec<f64>) -> Result<Self> {
        if a.ncols() != c.len() || a.nrows() != b.len() {
            return Err(Error::Shape(format!(
                "constraint matrix is {}x{}, objective has {} entries, rhs has {}",
                a.nrows(),
                a.ncols(),
                c.len(),
                b.len()
            )));
        }
        if c.iter().chain(a.iter()).chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("linear program data must be finite".into()));
        }
        Ok(Self { sense, c, a, b })
    }

    pub fn num_rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn num_cols(&self) -> usize {
        self.a.ncols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    /// Row duals in the caller's sense: for a minimization the reduced costs
    /// `c_j - y.A_j` are non-negative at optimality, for a maximization they
    /// are non-positive.
    pub duals: Vec<f64>,
    pub objective: f64,
    pub basis: Vec<BasisVar>,
    pub iterations: usize,
}

impl LpSolution {
    fn failed(status: LpStatus, n: usize, m: usize, iterations: usize) -> Self {
        Self {
            status,
            x: vec![0.0; n],
            duals: vec![0.0; m],
            objective: f64::NAN,
            basis: Vec::new(),
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    solve_lp_with(lp, &LpOptions::default(), None)
}

/// Solves `lp`, starting from `warm` when it is a primal-feasible basis.
pub fn solve_lp_with(lp: &LinearProgram, opts: &LpOptions, warm: Option<&[BasisVar]>) -> LpSolution {
    let mut s = Simplex::new(lp, opts);
    s.run(warm)
}

struct Simplex<'a> {
    opts: &'a LpOptions,
    sense: Sense,
    m: usize,
    n: usize,
    /// Row-sign-normalized constraint data (b >= 0).
    a: DMatrix<f64>,
    b: DVector<f64>,
    row_sign: Vec<f64>,
    /// Objective in minimization form.
    c: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: DMatrix<f64>,
    xb: DVector<f64>,
    iterations: usize,
    since_refactor: usize,
}

enum Phase {
    One,
    Two,
}

enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl<'a> Simplex<'a> {
    fn new(lp: &LinearProgram, opts: &'a LpOptions) -> Self {
        let m = lp.num_rows();
        let n = lp.num_cols();
        let mut a = lp.a.clone();
        let mut b = DVector::from_column_slice(&lp.b);
        let mut row_sign = vec![1.0; m];
        for i in 0..m {
            if b[i] < 0.0 {
                row_sign[i] = -1.0;
                b[i] = -b[i];
                a.row_mut(i).neg_mut();
            }
        }
        let c = match lp.sense {
            Sense::Minimize => lp.c.clone(),
            Sense::Maximize => lp.c.iter().map(|v| -v).collect(),
        };
        Self {
            opts,
            sense: lp.sense,
            m,
            n,
            a,
            b,
            row_sign,
            c,
            basis: Vec::new(),
            in_basis: vec![false; n + m],
            binv: DMatrix::identity(m, m),
            xb: DVector::zeros(m),
            iterations: 0,
            since_refactor: 0,
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n
    }

    /// `B^{-1} A_j` for structural or artificial `j`.
    fn ftran(&self, j: usize) -> DVector<f64> {
        if self.is_artificial(j) {
            self.binv.column(j - self.n).into_owned()
        } else {
            &self.binv * self.a.column(j)
        }
    }

    fn cost(&self, j: usize, phase: &Phase) -> f64 {
        match phase {
            Phase::One => {
                if self.is_artificial(j) {
                    1.0
                } else {
                    0.0
                }
            }
            Phase::Two => {
                if self.is_artificial(j) {
                    0.0
                } else {
                    self.c[j]
                }
            }
        }
    }

    fn duals(&self, phase: &Phase) -> DVector<f64> {
        let cb = DVector::from_iterator(self.m, self.basis.iter().map(|&j| self.cost(j, phase)));
        self.binv.tr_mul(&cb)
    }

    fn reduced_cost(&self, j: usize, y: &DVector<f64>, phase: &Phase) -> f64 {
        let ya = if self.is_artificial(j) {
            y[j - self.n]
        } else {
            y.dot(&self.a.column(j))
        };
        self.cost(j, phase) - ya
    }

    fn set_basis(&mut self, basis: Vec<usize>) {
        self.in_basis.iter_mut().for_each(|f| *f = false);
        for &j in &basis {
            self.in_basis[j] = true;
        }
        self.basis = basis;
    }

    /// Rebuilds `B^{-1}` and `x_B`. Returns false if the basis is singular.
    fn refactor(&mut self) -> bool {
        let mut bm = DMatrix::zeros(self.m, self.m);
        for (k, &j) in self.basis.iter().enumerate() {
            if self.is_artificial(j) {
                bm[(j - self.n, k)] = 1.0;
            } else {
                bm.set_column(k, &self.a.column(j));
            }
        }
        match real_inverse(&bm) {
            Some(inv) => {
                self.binv = inv;
                self.xb = &self.binv * &self.b;
                self.since_refactor = 0;
                true
            }
            None => false,
        }
    }

    fn pivot(&mut self, r: usize, entering: usize, u: &DVector<f64>) {
        let ur = u[r];
        let theta = self.xb[r] / ur;
        for i in 0..self.m {
            if i != r {
                self.xb[i] -= theta * u[i];
            }
        }
        self.xb[r] = theta;
        for k in 0..self.m {
            let mut col = self.binv.column_mut(k);
            let v = col[r] / ur;
            if v != 0.0 {
                for i in 0..self.m {
                    col[i] -= u[i] * v;
                }
            }
            col[r] = v;
        }
        let leaving = self.basis[r];
        self.in_basis[leaving] = false;
        self.in_basis[entering] = true;
        self.basis[r] = entering;
        self.iterations += 1;
        self.since_refactor += 1;
        if self.since_refactor >= self.opts.refactor_every {
            let saved = (self.binv.clone(), self.xb.clone());
            if !self.refactor() {
                (self.binv, self.xb) = saved;
            }
        }
    }

    fn iterate(&mut self, phase: Phase) -> Outcome {
        let degenerate_limit = 5 * (self.m + self.n);
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            if self.iterations >= self.opts.max_iterations {
                return Outcome::IterationLimit;
            }
            let y = self.duals(&phase);
            let candidates = match phase {
                Phase::One => self.n + self.m,
                Phase::Two => self.n,
            };
            let mut entering = None;
            let mut best = -self.opts.opt_tol;
            for j in 0..candidates {
                if self.in_basis[j] {
                    continue;
                }
                let d = self.reduced_cost(j, &y, &phase);
                if d < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(q) = entering else {
                return Outcome::Optimal;
            };
            let u = self.ftran(q);
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let ui = u[i];
                let ratio = if self.is_artificial(self.basis[i]) && matches!(phase, Phase::Two) {
                    // Artificials on redundant rows must stay at zero.
                    if ui.abs() > self.opts.pivot_tol {
                        0.0
                    } else {
                        continue;
                    }
                } else if ui > self.opts.pivot_tol {
                    self.xb[i].max(0.0) / ui
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    Some((r, t)) => {
                        if ratio < t - 1e-12 {
                            true
                        } else if ratio <= t + 1e-12 {
                            if bland {
                                self.basis[i] < self.basis[r]
                            } else {
                                ui.abs() > u[r].abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, theta)) = leave else {
                return Outcome::Unbounded;
            };
            if self.xb[r] < 0.0 || (self.is_artificial(self.basis[r]) && matches!(phase, Phase::Two)) {
                self.xb[r] = 0.0;
            }
            self.pivot(r, q, &u);
            if theta <= 1e-12 {
                degenerate += 1;
                if degenerate > degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }
        }
    }

    /// Pivots basic artificials out where some structural column can replace
    /// them; the rest sit on redundant rows.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let row = self.binv.row(r).into_owned();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.n {
                if self.in_basis[j] {
                    continue;
                }
                let v = (&row * self.a.column(j))[0];
                if v.abs() > self.opts.pivot_tol * 1e2 && best.is_none_or(|(_, b)| v.abs() > b) {
                    best = Some((j, v.abs()));
                }
            }
            if let Some((j, _)) = best {
                let u = self.ftran(j);
                self.xb[r] = 0.0;
                self.pivot(r, j, &u);
            }
        }
    }

    fn try_warm_start(&mut self, warm: &[BasisVar]) -> bool {
        if warm.len() != self.m {
            return false;
        }
        let mut basis = Vec::with_capacity(self.m);
        for v in warm {
            let j = match *v {
                BasisVar::Column(j) if j < self.n => j,
                BasisVar::Artificial(i) if i < self.m => self.n + i,
                _ => return false,
            };
            basis.push(j);
        }
        let mut sorted = basis.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.m {
            return false;
        }
        self.set_basis(basis);
        if !self.refactor() {
            return false;
        }
        let tol = self.opts.feas_tol;
        (0..self.m).all(|i| {
            let x = self.xb[i];
            if self.is_artificial(self.basis[i]) {
                x.abs() <= tol
            } else {
                x >= -tol
            }
        })
    }

    fn cold_start(&mut self) {
        self.set_basis((self.n..self.n + self.m).collect());
        self.binv = DMatrix::identity(self.m, self.m);
        self.xb = self.b.clone();
        self.since_refactor = 0;
    }

    fn run(&mut self, warm: Option<&[BasisVar]>) -> LpSolution {
        let (n, m) = (self.n, self.m);
        let warm_ok = warm.is_some_and(|w| self.try_warm_start(w));
        if !warm_ok {
            self.cold_start();
            match self.iterate(Phase::One) {
                Outcome::Optimal => {}
                // Phase 1 is bounded below by zero, so this only signals
                // numerical trouble.
                Outcome::Unbounded => return LpSolution::failed(LpStatus::Infeasible, n, m, self.iterations),
                Outcome::IterationLimit => {
                    return LpSolution::failed(LpStatus::IterationLimit, n, m, self.iterations)
                }
            }
            let residual: f64 = self
                .basis
                .iter()
                .zip(self.xb.iter())
                .filter(|(&j, _)| self.is_artificial(j))
                .map(|(_, x)| x.max(0.0))
                .sum();
            let scale = 1.0 + self.b.amax();
            if residual > self.opts.feas_tol * scale {
                return LpSolution::failed(LpStatus::Infeasible, n, m, self.iterations);
            }
            self.drive_out_artificials();
        }
        match self.iterate(Phase::Two) {
            Outcome::Optimal => {}
            Outcome::Unbounded => return LpSolution::failed(LpStatus::Unbounded, n, m, self.iterations),
            Outcome::IterationLimit => return LpSolution::failed(LpStatus::IterationLimit, n, m, self.iterations),
        }
        if self.since_refactor > 0 {
            let saved = (self.binv.clone(), self.xb.clone());
            if !self.refactor() {
                (self.binv, self.xb) = saved;
            }
        }
        let mut x = vec![0.0; n];
        for (k, &j) in self.basis.iter().enumerate() {
            if j < n {
                x[j] = self.xb[k].max(0.0);
            }
        }
        let y = self.duals(&Phase::Two);
        let flip = match self.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let duals: Vec<f64> = (0..m).map(|i| flip * self.row_sign[i] * y[i]).collect();
        let objective = flip * x.iter().zip(&self.c).map(|(a, b)| a * b).sum::<f64>();
        let basis = self
            .basis
            .iter()
            .map(|&j| if j < n { BasisVar::Column(j) } else { BasisVar::Artificial(j - n) })
            .collect();
        LpSolution {
            status: LpStatus::Optimal,
            x,
            duals,
            objective,
            basis,
            iterations: self.iterations,
        }
    }
}
