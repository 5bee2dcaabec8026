//! Standard channels, signal sets and measurements used throughout the tests
//! and shipped with the CLI.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, identity, random_isometry, real, CMatrix, CVector, ZERO};
use crate::quantum::{Povm, PureState, QuantumChannel, Tensor};

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, real(1.0), real(1.0), ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[real(1.0), ZERO, ZERO, real(-1.0)])
}

fn check_unit(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {p}")))
    }
}

pub fn identity_channel(d: usize) -> QuantumChannel {
    QuantumChannel::identity(d)
}

/// `rho -> (1-p) rho + p X rho X`.
pub fn bit_flip(p: f64) -> Result<QuantumChannel> {
    check_unit("flip probability", p)?;
    QuantumChannel::new(vec![identity(2) * real((1.0 - p).sqrt()), pauli_x() * real(p.sqrt())])
}

/// `rho -> (1-q) rho + q Z rho Z`.
pub fn dephasing(q: f64) -> Result<QuantumChannel> {
    check_unit("dephasing probability", q)?;
    QuantumChannel::new(vec![identity(2) * real((1.0 - q).sqrt()), pauli_z() * real(q.sqrt())])
}

/// Kraus set `sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z`, which acts as
/// `(1 - 4p/3) rho + (2p/3) I`. `p = 3/4` is the fully depolarizing channel.
pub fn depolarizing(p: f64) -> Result<QuantumChannel> {
    if !(0.0..=4.0 / 3.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("depolarizing parameter must lie in [0, 4/3], got {p}")));
    }
    let s = real((p / 3.0).sqrt());
    QuantumChannel::new(vec![
        identity(2) * real((1.0 - p).sqrt()),
        pauli_x() * s,
        pauli_y() * s,
        pauli_z() * s,
    ])
}

/// `rho -> Tr(rho) I/d`, with Kraus operators `|j><k| / sqrt(d)`.
pub fn fully_depolarizing(d: usize) -> QuantumChannel {
    let s = real(1.0 / (d as f64).sqrt());
    let mut kraus = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let mut a = CMatrix::zeros(d, d);
            a[(j, k)] = s;
            kraus.push(a);
        }
    }
    QuantumChannel::new(kraus).expect("fully depolarizing Kraus set is trace preserving")
}

pub fn amplitude_damping(gamma: f64) -> Result<QuantumChannel> {
    check_unit("damping rate", gamma)?;
    let a0 = CMatrix::from_row_slice(2, 2, &[real(1.0), ZERO, ZERO, real((1.0 - gamma).sqrt())]);
    let a1 = CMatrix::from_row_slice(2, 2, &[ZERO, real(gamma.sqrt()), ZERO, ZERO]);
    QuantumChannel::new(vec![a0, a1])
}

/// A classical channel `P(y|x)` (rows = inputs) as a quantum channel with
/// Kraus operators `sqrt(P(y|x)) |y><x|`: it measures in the computational
/// basis and then applies `P`.
pub fn classical_embedding(transition: &[Vec<f64>]) -> Result<QuantumChannel> {
    let din = transition.len();
    let dout = transition.first().map_or(0, Vec::len);
    if din == 0 || dout == 0 {
        return Err(Error::Empty("transition matrix"));
    }
    let mut kraus = Vec::new();
    for (x, row) in transition.iter().enumerate() {
        if row.len() != dout {
            return Err(Error::Shape(format!("row {x} has length {}, expected {dout}", row.len())));
        }
        for (y, &p) in row.iter().enumerate() {
            if p < 0.0 {
                return Err(Error::InvalidDistribution(format!("P({y}|{x}) = {p} is negative")));
            }
            if p > 0.0 {
                let mut a = CMatrix::zeros(dout, din);
                a[(y, x)] = real(p.sqrt());
                kraus.push(a);
            }
        }
    }
    QuantumChannel::new(kraus)
}

/// Binary symmetric channel with flip probability `p`, embedded.
pub fn bsc_embed(p: f64) -> Result<QuantumChannel> {
    check_unit("flip probability", p)?;
    classical_embedding(&[vec![1.0 - p, p], vec![p, 1.0 - p]])
}

/// Random channel from a Haar-like isometry `C^din -> C^dout ⊗ C^k`.
/// Requires `dim_out * num_kraus >= dim_in`.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, dim_in: usize, dim_out: usize, num_kraus: usize) -> QuantumChannel {
    assert!(
        dim_out * num_kraus >= dim_in,
        "{num_kraus} Kraus operators of size {dim_out}x{dim_in} cannot be trace preserving"
    );
    let v = random_isometry(rng, dim_out * num_kraus, dim_in);
    let kraus = (0..num_kraus)
        .map(|i| v.rows(i * dim_out, dim_out).into_owned())
        .collect();
    QuantumChannel::new(kraus).expect("isometry blocks form a trace-preserving Kraus set")
}

/// `v0 = (1, 0)`, `v1 = (-1/2, sqrt3/2)`, `v2 = (-1/2, -sqrt3/2)`.
pub fn trine_states() -> Vec<PureState> {
    let h = 3f64.sqrt() / 2.0;
    [[1.0, 0.0], [-0.5, h], [-0.5, -h]]
        .iter()
        .map(|a| PureState::from_real(a).expect("unit vector"))
        .collect()
}

/// `v_i ⊗ v_i` for the trine states.
pub fn two_copy_trine_states() -> Vec<PureState> {
    trine_states().iter().map(|v| v.tensor(v)).collect()
}

/// `E_i = (2/3) w_i w_i^dag` with `w_i` orthogonal to trine state `v_i`.
pub fn anti_trine_povm() -> Povm {
    let items = trine_states()
        .iter()
        .map(|v| {
            let a = v.amplitudes();
            let w = CVector::from_vec(vec![-a[1], a[0]]);
            (2.0 / 3.0, PureState::new(w).expect("unit vector"))
        })
        .collect();
    Povm::new(items).expect("anti-trine POVM is complete")
}

/// `v1 = (1, 0)`, `v2 = (cos theta, sin theta)`.
pub fn two_state_signals(theta: f64) -> Vec<PureState> {
    vec![
        PureState::basis(2, 0),
        PureState::from_real(&[theta.cos(), theta.sin()]).expect("unit vector"),
    ]
}

/// Orthonormal basis at angles `theta/2 -+ pi/4`, placed symmetrically about
/// the bisector of the two-state signals. Its error probability is
/// `1/2 - sin(theta)/2` for each signal.
pub fn symmetric_two_state_povm(theta: f64) -> Povm {
    let items = [theta / 2.0 - PI / 4.0, theta / 2.0 + PI / 4.0]
        .iter()
        .map(|a| (1.0, PureState::from_real(&[a.cos(), a.sin()]).expect("unit vector")))
        .collect();
    Povm::new(items).expect("orthonormal basis")
}

/// Identity qubit channel with the trine signal set.
pub fn trine_channel() -> (QuantumChannel, Vec<PureState>) {
    (QuantumChannel::identity(2), trine_states())
}

/// Identity channel on two qubits with the two-copy trine signal set.
pub fn two_copy_trine_channel() -> (QuantumChannel, Vec<PureState>) {
    (QuantumChannel::identity(4), two_copy_trine_states())
}

/// Identity qubit channel with the two-state signal set.
pub fn two_state_channel(theta: f64) -> (QuantumChannel, Vec<PureState>) {
    (QuantumChannel::identity(2), two_state_signals(theta))
}
