use crate::entropy::EIGEN_CLIP;
use crate::error::{Error, Result};
use crate::linalg::{
    eigh, eigvalsh, hermitize, identity, kron, kron_vec, outer, real, trace, CMatrix, CVector,
    HermitianEigen, C64, ZERO,
};

use super::hermitian::HermitianMatrix;

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let h = HermitianMatrix::new(m)?;
        let tr = trace(h.matrix()).re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let min = eigvalsh(h.matrix())[0];
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { m: h.into_matrix() })
    }

    /// For matrices that are density matrices by construction (channel outputs,
    /// convex combinations); only symmetrizes.
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m: hermitize(&m) }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            m: identity(d) * real(1.0 / d as f64),
        }
    }

    /// `diag(p)` for a probability vector `p`.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(&CVector::from_iterator(
            p.len(),
            p.iter().map(|&x| real(x)),
        )))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn eigen(&self) -> HermitianEigen {
        eigh(&self.m)
    }

    /// `(1 - t) self + t other`.
    pub fn mix(&self, other: &DensityMatrix, t: f64) -> DensityMatrix {
        Self {
            m: &self.m * real(1.0 - t) + &other.m * real(t),
        }
    }

    pub fn as_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix::from_hermitized(&self.m)
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(v: &PureState) -> Self {
        v.projector()
    }
}

/// Unit vector in `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    v: CVector,
}

impl PureState {
    pub fn new(v: CVector) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::Empty("state vector"));
        }
        let n2 = v.norm_squared();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { v })
    }

    /// Rescales a non-zero vector to unit norm.
    pub fn normalized(v: CVector) -> Result<Self> {
        let n = v.norm();
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        Ok(Self { v: v / real(n) })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(CVector::from_iterator(amps.len(), amps.iter().map(|&x| real(x))))
    }

    /// Computational basis vector `e_k` of `C^d`.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut v = CVector::zeros(d);
        v[k] = real(1.0);
        Self { v }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.v
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.v.dotc(&other.v)
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix { m: outer(&self.v) }
    }
}

/// Kronecker product for states and channels.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Self {
        Self {
            m: kron(&self.m, &other.m),
        }
    }
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Self {
        Self {
            v: kron_vec(&self.v, &other.v),
        }
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Which factor of a bipartite system survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of a state on `C^dA ⊗ C^dB`.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Keep) -> Result<DensityMatrix> {
    let (da, db) = dims;
    if da * db != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: rho.dim(),
        });
    }
    Ok(DensityMatrix::from_matrix_unchecked(partial_trace_raw(rho.matrix(), dims, keep)))
}

pub(crate) fn partial_trace_raw(m: &CMatrix, (da, db): (usize, usize), keep: Keep) -> CMatrix {
    match keep {
        Keep::A => {
            let mut out = CMatrix::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    let mut acc = ZERO;
                    for k in 0..db {
                        acc += m[(i * db + k, j * db + k)];
                    }
                    out[(i, j)] = acc;
                }
            }
            out
        }
        Keep::B => {
            let mut out = CMatrix::zeros(db, db);
            for k in 0..db {
                for l in 0..db {
                    let mut acc = ZERO;
                    for i in 0..da {
                        acc += m[(i * db + k, i * db + l)];
                    }
                    out[(k, l)] = acc;
                }
            }
            out
        }
    }
}

/// Purification `sum_k sqrt(lambda_k) e_k ⊗ f_k` on `C^d ⊗ C^r`, `r` the rank,
/// with `f_k` the standard basis of the reference system.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let r = rank(rho);
    purify_with_reference(rho, &identity(r)).expect("identity reference basis is unitary")
}

/// Purification using the columns of the `r x r` unitary `reference` as `f_k`.
pub fn purify_with_reference(rho: &DensityMatrix, reference: &CMatrix) -> Result<PureState> {
    let eig = rho.eigen();
    let support: Vec<usize> = (0..eig.dim()).rev().filter(|&k| eig.values[k] > EIGEN_CLIP).collect();
    let r = support.len();
    if reference.nrows() != r || reference.ncols() != r {
        return Err(Error::Shape(format!(
            "reference basis must be {r}x{r}, got {}x{}",
            reference.nrows(),
            reference.ncols()
        )));
    }
    let d = rho.dim();
    let mut phi = CVector::zeros(d * r);
    for (slot, &k) in support.iter().enumerate() {
        let amp = eig.values[k].sqrt();
        let e = eig.vectors.column(k);
        let f = reference.column(slot);
        for i in 0..d {
            for j in 0..r {
                phi[i * r + j] += e[i] * f[j] * amp;
            }
        }
    }
    PureState::normalized(phi)
}

/// Number of eigenvalues above [`EIGEN_CLIP`].
pub fn rank(rho: &DensityMatrix) -> usize {
    rho.eigen().values.iter().filter(|&&l| l > EIGEN_CLIP).count()
}

/// Fidelity `Tr sqrt(rho_out^{1/2} rho_in rho_out^{1/2})`. For pure states this
/// is `|<u, v>|`; see [`fidelity_pure_squared`] for the squared convention.
pub fn fidelity(rho_in: &DensityMatrix, rho_out: &DensityMatrix) -> Result<f64> {
    if rho_in.dim() != rho_out.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho_in.dim(),
            found: rho_out.dim(),
        });
    }
    let sqrt_out = rho_out.eigen().map(|l| l.max(0.0).sqrt());
    let inner = &sqrt_out * rho_in.matrix() * &sqrt_out;
    let f: f64 = eigvalsh(&hermitize(&inner))
        .iter()
        .map(|&l| if l > EIGEN_CLIP { l.sqrt() } else { 0.0 })
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `|u^dag v|^2`.
pub fn fidelity_pure_squared(u: &PureState, v: &PureState) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(u.inner(v).norm_sqr())
}

/// Checks the invariants of a density matrix against an arbitrary tolerance,
/// returning the worst violation; used by tests and report validation.
pub fn density_defect(m: &CMatrix) -> f64 {
    let herm = crate::linalg::hermiticity_defect(m);
    let tr = (trace(m).re - 1.0).abs();
    let min = eigvalsh(&hermitize(m))[0];
    herm.max(tr).max((-min).max(0.0))
}
