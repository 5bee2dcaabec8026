use crate::error::{Error, Result};
use crate::linalg::{identity, kron, max_abs_diff, CMatrix, CVector, ZERO};

use super::state::{DensityMatrix, Tensor};

/// Entrywise tolerance on `sum_i A_i^dag A_i = I`.
pub const TRACE_PRESERVING_TOL: f64 = 1e-9;

/// A completely positive trace-preserving map in Kraus form,
/// `N(rho) = sum_i A_i rho A_i^dag` with each `A_i` of shape `dim_out x dim_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
    /// The Kraus operators stacked vertically, `(k dim_out) x dim_in`.
    stacked: CMatrix,
}

fn stack(kraus: &[CMatrix]) -> CMatrix {
    let (rows, cols) = kraus[0].shape();
    let mut out = CMatrix::zeros(rows * kraus.len(), cols);
    for (i, a) in kraus.iter().enumerate() {
        out.view_mut((i * rows, 0), (rows, cols)).copy_from(a);
    }
    out
}

/// Checks shapes and trace preservation and builds the channel.
pub fn validate_channel(kraus: Vec<CMatrix>) -> Result<QuantumChannel> {
    let first = kraus.first().ok_or(Error::Empty("Kraus operator list"))?;
    let (dim_out, dim_in) = first.shape();
    if dim_in == 0 || dim_out == 0 {
        return Err(Error::Shape("Kraus operators must be non-empty".into()));
    }
    for (i, a) in kraus.iter().enumerate() {
        if a.shape() != (dim_out, dim_in) {
            return Err(Error::Shape(format!(
                "Kraus operator {i} is {}x{}, expected {dim_out}x{dim_in}",
                a.nrows(),
                a.ncols()
            )));
        }
    }
    let defect = trace_preservation_defect(&kraus);
    if !(defect <= TRACE_PRESERVING_TOL) {
        return Err(Error::NotTracePreserving { defect });
    }
    Ok(QuantumChannel::from_parts(dim_in, dim_out, kraus))
}

/// Max entry of `|sum A^dag A - I|`.
pub fn trace_preservation_defect(kraus: &[CMatrix]) -> f64 {
    let Some(first) = kraus.first() else {
        return f64::INFINITY;
    };
    let d = first.ncols();
    let mut sum = CMatrix::zeros(d, d);
    for a in kraus {
        sum += a.adjoint() * a;
    }
    max_abs_diff(&sum, &identity(d))
}

pub fn apply_channel(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        validate_channel(kraus)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_parts(d, d, vec![identity(d)])
    }

    fn from_parts(dim_in: usize, dim_out: usize, kraus: Vec<CMatrix>) -> Self {
        let stacked = stack(&kraus);
        Self {
            dim_in,
            dim_out,
            kraus,
            stacked,
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn num_kraus(&self) -> usize {
        self.kraus.len()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                found: rho.dim(),
            });
        }
        Ok(DensityMatrix::from_matrix_unchecked(self.apply_raw(rho.matrix())))
    }

    /// `sum_i A_i m A_i^dag` for any `dim_in x dim_in` matrix.
    pub fn apply_raw(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for a in &self.kraus {
            out += a * m * a.adjoint();
        }
        out
    }

    /// `N(v v^dag)` for an unnormalized vector, as `F F^dag` with
    /// `F = [A_1 v, ..., A_k v]`.
    pub fn apply_pure_raw(&self, v: &CVector) -> CMatrix {
        let f = self.pure_factor(v);
        &f * f.adjoint()
    }

    /// The `dim_out x k` matrix whose columns are `A_i v`.
    pub fn pure_factor(&self, v: &CVector) -> CMatrix {
        let sv = &self.stacked * v;
        CMatrix::from_column_slice(self.dim_out, self.kraus.len(), sv.as_slice())
    }

    /// `N^dag(y) v = sum_i A_i^dag y A_i v`, given `f = pure_factor(v)`.
    pub fn adjoint_times_factor(&self, y: &CMatrix, f: &CMatrix) -> CVector {
        let yf = y * f;
        self.stacked.ad_mul(&CVector::from_column_slice(yf.as_slice()))
    }

    /// Heisenberg-picture adjoint `sum_i A_i^dag y A_i`.
    pub fn adjoint_raw(&self, y: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim_in, self.dim_in);
        for a in &self.kraus {
            out += a.adjoint() * y * a;
        }
        out
    }

    /// Complementary (environment) output, `E_ij = Tr(A_i m A_j^dag)`.
    ///
    /// For a unit-trace `m` its spectrum coincides with the non-zero spectrum of
    /// `(N ⊗ I)(Phi_m)` for any purification `Phi_m`.
    pub fn complementary_raw(&self, m: &CMatrix) -> CMatrix {
        let k = self.kraus.len();
        let b: Vec<CMatrix> = self.kraus.iter().map(|a| a * m).collect();
        let mut out = CMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                let mut acc = ZERO;
                for (x, y) in b[i].iter().zip(self.kraus[j].iter()) {
                    acc += x * y.conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Adjoint of [`Self::complementary_raw`]: `sum_ij y_ji A_j^dag A_i`.
    pub fn complementary_adjoint_raw(&self, y: &CMatrix) -> CMatrix {
        let k = self.kraus.len();
        let mut out = CMatrix::zeros(self.dim_in, self.dim_in);
        for i in 0..k {
            for j in 0..k {
                let w = y[(j, i)];
                if w == ZERO {
                    continue;
                }
                out += self.kraus[j].adjoint() * &self.kraus[i] * w;
            }
        }
        out
    }

    /// `N ⊗ I_r`.
    pub fn extend_with_identity(&self, r: usize) -> QuantumChannel {
        let id = identity(r);
        QuantumChannel::from_parts(
            self.dim_in * r,
            self.dim_out * r,
            self.kraus.iter().map(|a| kron(a, &id)).collect(),
        )
    }
}

impl Tensor for QuantumChannel {
    fn tensor(&self, other: &Self) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(kron(a, b));
            }
        }
        QuantumChannel::from_parts(self.dim_in * other.dim_in, self.dim_out * other.dim_out, kraus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels;
    use crate::linalg::{real, trace};
    use crate::quantum::PureState;

    #[test]
    fn identity_is_valid() {
        let ch = validate_channel(vec![identity(2)]).unwrap();
        assert_eq!((ch.dim_in(), ch.dim_out()), (2, 2));
    }

    #[test]
    fn depolarizing_kraus_is_valid() {
        let ch = channels::depolarizing(0.3).unwrap();
        assert_eq!(ch.num_kraus(), 4);
        assert!(trace_preservation_defect(ch.kraus()) < 1e-15);
    }

    #[test]
    fn doubled_identity_reports_defect() {
        match validate_channel(vec![identity(2), identity(2)]) {
            Err(Error::NotTracePreserving { defect }) => assert!((defect - 1.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch() {
        let r = validate_channel(vec![identity(2), identity(3)]);
        assert!(matches!(r, Err(Error::Shape(_))));
        assert!(matches!(validate_channel(vec![]), Err(Error::Empty(_))));
    }

    #[test]
    fn bit_flip_maps_zero_to_one() {
        let x = channels::pauli_x();
        let ch = validate_channel(vec![x]).unwrap();
        let out = ch.apply(&PureState::basis(2, 0).projector()).unwrap();
        assert!(max_abs_diff(out.matrix(), PureState::basis(2, 1).projector().matrix()) < 1e-15);
    }

    #[test]
    fn full_depolarizing_matches_direct_formula() {
        let ch = channels::depolarizing(1.0).unwrap();
        let rho = DensityMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[real(0.7), crate::linalg::c(0.1, 0.2), crate::linalg::c(0.1, -0.2), real(0.3)],
        ))
        .unwrap();
        let out = ch.apply(&rho).unwrap();
        // (1 - 4p/3) rho + (2p/3) I at p = 1.
        let expect = rho.matrix() * real(-1.0 / 3.0) + identity(2) * real(2.0 / 3.0);
        assert!(max_abs_diff(out.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let ch = QuantumChannel::identity(2);
        assert!(matches!(
            ch.apply(&DensityMatrix::maximally_mixed(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_of_identities() {
        let ch = QuantumChannel::identity(2).tensor(&QuantumChannel::identity(2));
        assert_eq!(ch, QuantumChannel::identity(4));
    }

    #[test]
    fn complementary_is_unit_trace() {
        let ch = channels::amplitude_damping(0.3).unwrap();
        let e = ch.complementary_raw(DensityMatrix::maximally_mixed(2).matrix());
        assert!((trace(&e).re - 1.0).abs() < 1e-15);
    }
}
