//! Brute-force grid references for qubit problems. They are slow and
//! deliberately simple: each evaluates the target functional directly on a
//! grid and returns the best grid point, a lower bound on the true maximum.

use crate::entropy::{matrix_entropy, xlog2x_neg};
use crate::error::{Error, Result};
use crate::info::holevo_chi;
use crate::linalg::{c, real, trace_product, CMatrix};
use crate::quantum::{DensityMatrix, Ensemble, HermitianMatrix, PureState, QuantumChannel, QuantumState};

/// Slack per unit of grid step used when comparing an optimizer against a
/// grid maximum: `|engine - oracle| <= tol + SLACK_PER_STEP * step`. Near a
/// smooth maximum the grid error is quadratic in the step, so this linear
/// allowance is conservative for the step sizes used here.
pub const SLACK_PER_STEP: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridDomain {
    BlochBall,
    SphereAngles,
    Simplex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub step: f64,
    pub domain: GridDomain,
}

impl GridSpec {
    pub fn new(step: f64, domain: GridDomain) -> Result<Self> {
        check_step(step)?;
        Ok(Self { step, domain })
    }
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("grid step must be positive, got {step}")));
    }
    Ok(())
}

fn check_qubit(d: usize) -> Result<()> {
    if d != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: d });
    }
    Ok(())
}

/// Bloch vector `(Tr rho X, Tr rho Y, Tr rho Z)` of a qubit matrix.
pub fn bloch_vector(rho: &CMatrix) -> [f64; 3] {
    [2.0 * rho[(0, 1)].re, -2.0 * rho[(0, 1)].im, (rho[(0, 0)] - rho[(1, 1)]).re]
}

/// `(I + r . sigma) / 2`.
pub fn bloch_density(r: [f64; 3]) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[real((1.0 + r[2]) / 2.0), c(r[0] / 2.0, -r[1] / 2.0), c(r[0] / 2.0, r[1] / 2.0), real((1.0 - r[2]) / 2.0)],
    )
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Mutual information for states with Bloch vectors `r_i` and weights `p_i`
/// measured by outcomes `q_j (I + m_j . sigma) / 2`.
fn bloch_mutual_information(p: &[f64], r: &[[f64; 3]], outcomes: &[(f64, [f64; 3])]) -> f64 {
    let mut h_y = 0.0;
    let mut h_y_given_x = 0.0;
    for (q, m) in outcomes {
        let mut py = 0.0;
        for (pi, ri) in p.iter().zip(r) {
            let pyx = (q * (1.0 + dot(m, ri)) / 2.0).max(0.0);
            py += pi * pyx;
            h_y_given_x += pi * xlog2x_neg(pyx);
        }
        h_y += xlog2x_neg(py);
    }
    (h_y - h_y_given_x).max(0.0)
}

/// Grid maximum of the accessible information of a qubit ensemble over
/// (a) projective measurements along Bloch directions `(theta, phi)`,
/// `theta` in `[0, pi/2]`, `phi` in `[0, 2 pi)`, and (b) symmetric
/// three-outcome POVMs `(2/3)(I + m_k . sigma)/2` whose Bloch vectors lie at
/// 120 degrees in a plane containing the x axis, the plane tilted by `beta`
/// in `[0, pi)` from the x-z plane and the vectors rotated in it by `psi` in
/// `[0, 2 pi / 3)`.
pub fn grid_accessible_info_2d<S: QuantumState>(ens: &Ensemble<S>, step: f64) -> Result<f64> {
    check_step(step)?;
    check_qubit(ens.dim())?;
    let p = ens.probabilities();
    let r: Vec<[f64; 3]> = ens.states().map(|s| bloch_vector(s.density().matrix())).collect();
    let pi = std::f64::consts::PI;
    let mut best = 0.0f64;

    let n_theta = (pi / 2.0 / step).ceil() as usize;
    let n_phi = (2.0 * pi / step).ceil() as usize;
    for i in 0..=n_theta {
        let theta = (i as f64 * step).min(pi / 2.0);
        let (st, ct) = theta.sin_cos();
        for j in 0..n_phi {
            let phi = j as f64 * step;
            let m = [st * phi.cos(), st * phi.sin(), ct];
            let outcomes = [(1.0, m), (1.0, [-m[0], -m[1], -m[2]])];
            best = best.max(bloch_mutual_information(&p, &r, &outcomes));
        }
    }

    let n_beta = (pi / step).ceil() as usize;
    let n_psi = (2.0 * pi / 3.0 / step).ceil() as usize;
    for i in 0..n_beta {
        let (sb, cb) = (i as f64 * step).sin_cos();
        let e1 = [1.0, 0.0, 0.0];
        let e2 = [0.0, sb, -cb];
        for j in 0..n_psi {
            let psi = j as f64 * step;
            let outcomes: Vec<(f64, [f64; 3])> = (0..3)
                .map(|k| {
                    let (s, c) = (psi + 2.0 * pi * k as f64 / 3.0).sin_cos();
                    (2.0 / 3.0, [c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2]])
                })
                .collect();
            best = best.max(bloch_mutual_information(&p, &r, &outcomes));
        }
    }
    Ok(best)
}

/// Functionals of a single input density matrix that the Bloch-ball grid
/// can maximize.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityObjective {
    /// `H(rho) + H(N(rho)) - H(N^c(rho))`.
    MutualInformation,
    /// `H(N(rho)) - H(N^c(rho))`.
    CoherentInformation,
    /// `H(N(rho)) - Tr(rho tau)`.
    HolevoModel(HermitianMatrix),
}

impl DensityObjective {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "qmi" | "mutual-information" => Ok(Self::MutualInformation),
            "coherent" | "coherent-information" => Ok(Self::CoherentInformation),
            _ => Err(Error::InvalidArgument(format!("unknown objective '{name}'"))),
        }
    }

    pub fn evaluate(&self, ch: &QuantumChannel, rho: &CMatrix) -> f64 {
        match self {
            Self::MutualInformation => {
                matrix_entropy(rho) + matrix_entropy(&ch.apply_raw(rho)) - matrix_entropy(&ch.complementary_raw(rho))
            }
            Self::CoherentInformation => {
                matrix_entropy(&ch.apply_raw(rho)) - matrix_entropy(&ch.complementary_raw(rho))
            }
            Self::HolevoModel(tau) => matrix_entropy(&ch.apply_raw(rho)) - trace_product(rho, tau.matrix()),
        }
    }
}

/// Maximum of `objective` over the Bloch-ball points of the cubic grid of
/// spacing `step` centred at the origin. Returns the value and the maximizer.
pub fn grid_density_objective(
    ch: &QuantumChannel,
    objective: &DensityObjective,
    step: f64,
) -> Result<(f64, DensityMatrix)> {
    check_step(step)?;
    check_qubit(ch.dim_in())?;
    let n = (1.0 / step).floor() as i64;
    let mut best = (f64::NEG_INFINITY, [0.0; 3]);
    for i in -n..=n {
        for j in -n..=n {
            for k in -n..=n {
                let r = [i as f64 * step, j as f64 * step, k as f64 * step];
                if dot(&r, &r) > 1.0 + 1e-12 {
                    continue;
                }
                let v = objective.evaluate(ch, &bloch_density(r));
                if v > best.0 {
                    best = (v, r);
                }
            }
        }
    }
    Ok((best.0, DensityMatrix::from_matrix_unchecked(bloch_density(best.1))))
}

/// Largest number of states [`simplex_enumerate_chi`] accepts.
pub const MAX_ENUMERATED_STATES: usize = 4;

/// Maximum of the output Holevo quantity over the probability-simplex grid
/// with spacing `step` (rounded so that `1/step` is an integer). Returns the
/// value and the maximizing weights; ties keep the first point in
/// lexicographic order.
pub fn simplex_enumerate_chi(ch: &QuantumChannel, states: &[PureState], step: f64) -> Result<(f64, Vec<f64>)> {
    check_step(step)?;
    if states.is_empty() {
        return Err(Error::Empty("state list"));
    }
    if states.len() > MAX_ENUMERATED_STATES {
        return Err(Error::InvalidArgument(format!(
            "at most {MAX_ENUMERATED_STATES} states can be enumerated, got {}",
            states.len()
        )));
    }
    if let Some(s) = states.iter().find(|s| s.dim() != ch.dim_in()) {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_in(),
            found: s.dim(),
        });
    }
    let outputs: Vec<CMatrix> = states.iter().map(|s| ch.apply_pure_raw(s.amplitudes())).collect();
    let entropies: Vec<f64> = outputs.iter().map(matrix_entropy).collect();
    let n = (1.0 / step).round().max(1.0) as usize;
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut counts = vec![0usize; states.len()];
    enumerate_compositions(n, &mut counts, 0, &mut |counts| {
        let p: Vec<f64> = counts.iter().map(|&k| k as f64 / n as f64).collect();
        let mut avg = CMatrix::zeros(ch.dim_out(), ch.dim_out());
        let mut mixed = 0.0;
        for ((pi, o), h) in p.iter().zip(&outputs).zip(&entropies) {
            avg += o * real(*pi);
            mixed += pi * h;
        }
        let chi = matrix_entropy(&avg) - mixed;
        if chi > best.0 + 1e-14 {
            best = (chi, p);
        }
    });
    Ok((best.0.max(0.0), best.1))
}

/// Calls `f` on every vector of non-negative integers summing to `total`.
fn enumerate_compositions(total: usize, counts: &mut [usize], at: usize, f: &mut dyn FnMut(&[usize])) {
    if at + 1 == counts.len() {
        counts[at] = total;
        f(counts);
        return;
    }
    for k in (0..=total).rev() {
        counts[at] = k;
        enumerate_compositions(total - k, counts, at + 1, f);
    }
}

/// Holevo quantity of explicit weights over the outputs of `states`, for
/// spot checks against [`simplex_enumerate_chi`].
pub fn chi_at(ch: &QuantumChannel, states: &[PureState], p: &[f64]) -> Result<f64> {
    let ens = Ensemble::normalized(p.iter().cloned().zip(states.iter().cloned()).collect())?;
    Ok(holevo_chi(&ens.through(ch)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, trine_states, two_state_signals};
    use crate::entropy::binary_entropy;

    #[test]
    fn bloch_round_trip() {
        let r = [0.3, -0.2, 0.5];
        let b = bloch_vector(&bloch_density(r));
        for k in 0..3 {
            assert!((b[k] - r[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn accessible_info_grid_examples() {
        let single = Ensemble::uniform(vec![PureState::basis(2, 0)]).unwrap();
        assert_eq!(grid_accessible_info_2d(&single, 0.05).unwrap(), 0.0);
        let trine = Ensemble::uniform(trine_states()).unwrap();
        let v = grid_accessible_info_2d(&trine, 0.01).unwrap();
        assert!((v - (3f64.log2() - 1.0)).abs() < 1e-3, "{v}");
        let theta = std::f64::consts::FRAC_PI_3;
        let two = Ensemble::uniform(two_state_signals(theta)).unwrap();
        let v = grid_accessible_info_2d(&two, 0.01).unwrap();
        assert!((v - (1.0 - binary_entropy(0.5 - theta.sin() / 2.0))).abs() < 1e-3, "{v}");
    }

    #[test]
    fn density_grid_identity() {
        let id = QuantumChannel::identity(2);
        let (v, rho) = grid_density_objective(&id, &DensityObjective::MutualInformation, 0.05).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        assert!(bloch_vector(rho.matrix()).iter().all(|x| x.abs() < 1e-12));
        let (v, _) = grid_density_objective(&id, &DensityObjective::CoherentInformation, 0.05).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(DensityObjective::parse("nonsense").is_err());
    }

    #[test]
    fn simplex_examples() {
        let id = QuantumChannel::identity(2);
        let (v, p) = simplex_enumerate_chi(&id, &trine_states(), 0.01).unwrap();
        assert!((v - 1.0).abs() < 1e-3, "{v}");
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let (v, _) = simplex_enumerate_chi(&id, &[PureState::basis(2, 0)], 0.1).unwrap();
        assert_eq!(v, 0.0);
        let (v, p) = simplex_enumerate_chi(&id, &[PureState::basis(2, 0), PureState::basis(2, 1)], 0.01).unwrap();
        assert!((v - 1.0).abs() < 1e-12 && (p[0] - 0.5).abs() < 1e-12);
        let five = vec![PureState::basis(2, 0); 5];
        assert!(simplex_enumerate_chi(&id, &five, 0.1).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(GridSpec::new(0.0, GridDomain::Simplex).is_err());
        let qutrit = QuantumChannel::identity(3);
        assert!(grid_density_objective(&qutrit, &DensityObjective::MutualInformation, 0.1).is_err());
        assert!(grid_density_objective(&depolarizing(0.3).unwrap(), &DensityObjective::MutualInformation, -1.0).is_err());
    }
}
