//! Classical and quantum information functionals, in bits.

use nalgebra::DMatrix;

use crate::entropy::{matrix_entropy, shannon_bits, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::linalg::{expectation, trace_product, CMatrix};
use crate::quantum::{purify, DensityMatrix, Ensemble, Povm, QuantumChannel, QuantumState};

/// Joint probability table `P(x, y)`; rows index `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    p: DMatrix<f64>,
}

impl JointDistribution {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Empty("joint distribution"));
        }
        if let Some(bad) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidDistribution(format!("entry {bad} is negative or not finite")));
        }
        let s = p.sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("entries sum to {s}")));
        }
        Ok(Self { p })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("rows of a joint distribution must have equal length".into()));
        }
        Self::new(DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Marginal of the row variable `X`.
    pub fn row_marginal(&self) -> Vec<f64> {
        self.p.row_iter().map(|r| r.sum()).collect()
    }

    /// Marginal of the column variable `Y`.
    pub fn col_marginal(&self) -> Vec<f64> {
        self.p.column_iter().map(|c| c.sum()).collect()
    }
}

/// `I(X;Y) = H(X) + H(Y) - H(X,Y)`.
///
/// The conditional form `H(Y) - H(Y|X)` is evaluated alongside and checked in
/// debug builds.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let px = j.row_marginal();
    let py = j.col_marginal();
    let hxy = shannon_bits(j.p.as_slice());
    let hx = shannon_bits(&px);
    let hy = shannon_bits(&py);
    let value = hx + hy - hxy;
    if cfg!(debug_assertions) {
        let mut h_y_given_x = 0.0;
        for (i, &pi) in px.iter().enumerate() {
            if pi > 0.0 {
                let cond: Vec<f64> = j.p.row(i).iter().map(|v| v / pi).collect();
                h_y_given_x += pi * shannon_bits(&cond);
            }
        }
        let alt = hy - h_y_given_x;
        debug_assert!((alt - value).abs() <= 1e-9 * (1.0 + value.abs()), "{alt} vs {value}");
    }
    value.max(0.0)
}

/// Row-stochastic transition matrix `P(y|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalChannel {
    rows: Vec<Vec<f64>>,
}

impl ClassicalChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.first().ok_or(Error::Empty("classical channel"))?.len();
        if n == 0 {
            return Err(Error::Empty("classical channel output alphabet"));
        }
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!("row {x} has length {}, expected {n}", row.len())));
            }
            if row.iter().any(|p| !(*p >= 0.0)) {
                return Err(Error::InvalidDistribution(format!("row {x} has a negative entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidDistribution(format!("row {x} sums to {s}")));
            }
        }
        Ok(Self { rows })
    }

    /// Binary symmetric channel.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Binary erasure channel; the erasure symbol is output 2.
    pub fn erasure(eps: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - eps, 0.0, eps], vec![0.0, 1.0 - eps, eps]])
    }

    pub fn noiseless(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect())
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn num_inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.rows[0].len()
    }

    /// Joint distribution `p(x) P(y|x)`.
    pub fn joint(&self, input: &[f64]) -> Result<JointDistribution> {
        if input.len() != self.num_inputs() {
            return Err(Error::DimensionMismatch {
                expected: self.num_inputs(),
                found: input.len(),
            });
        }
        JointDistribution::new(DMatrix::from_fn(self.num_inputs(), self.num_outputs(), |x, y| {
            input[x] * self.rows[x][y]
        }))
    }
}

/// `chi = H(sum p_i sigma_i) - sum p_i H(sigma_i)`.
pub fn holevo_chi<S: QuantumState>(ens: &Ensemble<S>) -> f64 {
    let avg = von_neumann_entropy(&ens.average());
    let mixed: f64 = ens
        .items()
        .iter()
        .map(|(p, s)| p * von_neumann_entropy(&s.density()))
        .sum();
    (avg - mixed).max(0.0)
}

/// Mutual information between the ensemble label and the outcome of `povm`.
pub fn accessible_information_given<S: QuantumState>(ens: &Ensemble<S>, povm: &Povm) -> Result<f64> {
    if ens.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: ens.dim(),
        });
    }
    let joint = DMatrix::from_fn(ens.len(), povm.len(), |i, j| {
        let (p, s) = &ens.items()[i];
        let (q, w) = &povm.items()[j];
        (p * q * expectation(s.density().matrix(), w.amplitudes())).max(0.0)
    });
    Ok(mutual_information(&normalized_joint(joint)?))
}

/// As [`accessible_information_given`] for a POVM given by arbitrary positive
/// elements (for example the one-outcome measurement `{I}`).
pub fn accessible_information_for_elements<S: QuantumState>(ens: &Ensemble<S>, elements: &[CMatrix]) -> Result<f64> {
    if let Some(e) = elements.iter().find(|e| e.nrows() != ens.dim()) {
        return Err(Error::DimensionMismatch {
            expected: ens.dim(),
            found: e.nrows(),
        });
    }
    let joint = DMatrix::from_fn(ens.len(), elements.len(), |i, j| {
        let (p, s) = &ens.items()[i];
        (p * trace_product(s.density().matrix(), &elements[j])).max(0.0)
    });
    Ok(mutual_information(&normalized_joint(joint)?))
}

/// Absorbs rounding in the total mass (POVMs are complete only to tolerance).
fn normalized_joint(mut joint: DMatrix<f64>) -> Result<JointDistribution> {
    let s = joint.sum();
    if (s - 1.0).abs() > 1e-6 {
        return Err(Error::IncompletePovm((s - 1.0).abs()));
    }
    joint /= s;
    JointDistribution::new(joint)
}

/// The three entropies entering the quantum mutual information: input
/// `H(rho)`, output `H(N(rho))` and joint `H((N ⊗ I)(Phi_rho))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyTerms {
    pub input: f64,
    pub output: f64,
    pub joint: f64,
}

impl EntropyTerms {
    pub fn mutual_information(&self) -> f64 {
        self.input + self.output - self.joint
    }

    pub fn coherent_information(&self) -> f64 {
        self.output - self.joint
    }
}

/// Evaluates the entropies through an explicit purification and the channel
/// extended by the identity on the reference.
pub fn entropy_terms(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<EntropyTerms> {
    let out = ch.apply(rho)?;
    let phi = purify(rho);
    let r = phi.dim() / rho.dim();
    let joint = ch.extend_with_identity(r).apply(&phi.projector())?;
    Ok(EntropyTerms {
        input: von_neumann_entropy(rho),
        output: von_neumann_entropy(&out),
        joint: von_neumann_entropy(&joint),
    })
}

/// `H(rho) + H(N(rho)) - H((N ⊗ I)(Phi_rho))`.
pub fn quantum_mutual_information(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_terms(ch, rho)?.mutual_information())
}

/// `H(N(rho)) - H((N ⊗ I)(Phi_rho))`; may be negative.
pub fn coherent_information(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_terms(ch, rho)?.coherent_information())
}

/// Entropy exchange `H((N ⊗ I)(Phi_rho))` computed from the environment
/// output `E_ij = Tr(A_i rho A_j^dag)`, which has the same non-zero spectrum.
pub fn entropy_exchange(ch: &QuantumChannel, rho: &CMatrix) -> f64 {
    matrix_entropy(&ch.complementary_raw(rho))
}

/// Objective of the limited-entanglement formula for a mixed-state ensemble:
/// `sum p_i H(rho_i) + H(N(sum p_i rho_i)) - sum p_i H((N ⊗ I)(Phi_rho_i))`,
/// returned with the average input entropy `sum p_i H(rho_i)`.
pub fn limited_ea_objective(ch: &QuantumChannel, ens: &Ensemble<DensityMatrix>) -> Result<(f64, f64)> {
    if ens.dim() != ch.dim_in() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim_in(),
            found: ens.dim(),
        });
    }
    let mut avg_entropy = 0.0;
    let mut avg_joint = 0.0;
    for (p, rho) in ens.items() {
        let t = entropy_terms(ch, rho)?;
        avg_entropy += p * t.input;
        avg_joint += p * t.joint;
    }
    let out = von_neumann_entropy(&ch.apply(&ens.average())?);
    Ok((avg_entropy + out - avg_joint, avg_entropy))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArimotoBlahutResult {
    /// Best certified lower bound (mutual information of `input`).
    pub capacity: f64,
    pub upper_bound: f64,
    pub input: Vec<f64>,
    pub iterations: usize,
    /// Lower bound after each iteration; non-decreasing.
    pub lower_trace: Vec<f64>,
}

/// Arimoto-Blahut iteration. Each step evaluates `D_x = D(P(.|x) || q)` with
/// `q` the current output distribution; `sum p_x D_x <= C <= max_x D_x`, and
/// the iteration stops once the two bounds are within `tol`.
pub fn arimoto_blahut(c: &ClassicalChannel, tol: f64) -> Result<ArimotoBlahutResult> {
    arimoto_blahut_with_limit(c, tol, 1_000_000)
}

pub fn arimoto_blahut_with_limit(c: &ClassicalChannel, tol: f64, max_iterations: usize) -> Result<ArimotoBlahutResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let nx = c.num_inputs();
    let ny = c.num_outputs();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_p = p.clone();
    let mut trace = Vec::new();
    let mut upper = f64::INFINITY;
    let mut iterations = 0;
    loop {
        let q: Vec<f64> = (0..ny).map(|y| (0..nx).map(|x| p[x] * c.rows[x][y]).sum()).collect();
        let d: Vec<f64> = c
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&q)
                    .filter(|(pyx, _)| **pyx > 0.0)
                    .map(|(pyx, qy)| pyx * (pyx / qy).log2())
                    .sum()
            })
            .collect();
        let lower: f64 = p.iter().zip(&d).map(|(a, b)| a * b).sum();
        let up = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        upper = upper.min(up);
        if lower > best_lower {
            best_lower = lower;
            best_p = p.clone();
        }
        trace.push(best_lower);
        if upper - best_lower < tol || iterations >= max_iterations {
            break;
        }
        let w: Vec<f64> = p.iter().zip(&d).map(|(px, dx)| px * dx.exp2()).collect();
        let s: f64 = w.iter().sum();
        p = w.into_iter().map(|v| v / s).collect();
        iterations += 1;
    }
    Ok(ArimotoBlahutResult {
        capacity: best_lower.max(0.0),
        upper_bound: upper,
        input: best_p,
        iterations,
        lower_trace: trace,
    })
}
