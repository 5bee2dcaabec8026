use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{c, expectation, hermiticity_defect, hermitize, trace_product, CMatrix, CVector};

/// Entrywise tolerance for `m_jk = conj(m_kj)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// A complex Hermitian matrix. Stored exactly symmetrized.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Shape(format!(
                "Hermitian matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let defect = hermiticity_defect(&m);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { m: hermitize(&m) })
    }

    /// Symmetrizes whatever it is given; for matrices Hermitian by construction.
    pub(crate) fn from_hermitized(m: &CMatrix) -> Self {
        Self { m: hermitize(m) }
    }

    pub fn zeros(d: usize) -> Self {
        Self { m: CMatrix::zeros(d, d) }
    }

    pub fn identity(d: usize) -> Self {
        Self { m: CMatrix::identity(d, d) }
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

    /// `v^dag H v`.
    pub fn expectation(&self, v: &CVector) -> f64 {
        expectation(&self.m, v)
    }

    /// `Tr(H M)`, real part.
    pub fn trace_with(&self, other: &CMatrix) -> f64 {
        trace_product(&self.m, other)
    }
}

/// Real coordinates of a `d x d` Hermitian matrix in a fixed orthonormal basis
/// (under `<A, B> = Tr(AB)`), so that `Tr(AB)` equals the dot product of the
/// coordinate vectors.
///
/// Basis order: the `d` diagonal units `e_jj`; then `(e_jk + e_kj)/sqrt 2` for
/// `j < k` in row-major pair order; then `i(e_jk - e_kj)/sqrt 2` in the same
/// pair order.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianCoords {
    dim: usize,
    coords: Vec<f64>,
}

impl HermitianCoords {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: coords.len(),
            });
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &HermitianCoords) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }
}

pub fn hermitian_to_coords(h: &HermitianMatrix) -> HermitianCoords {
    HermitianCoords {
        dim: h.dim(),
        coords: matrix_coords(h.matrix()),
    }
}

pub fn coords_to_hermitian(coords: &HermitianCoords) -> HermitianMatrix {
    HermitianMatrix {
        m: coords_matrix(coords.dim, &coords.coords),
    }
}

/// Coordinates of a Hermitian matrix given as a raw `CMatrix` (upper triangle read).
pub(crate) fn matrix_coords(m: &CMatrix) -> Vec<f64> {
    let d = m.nrows();
    let pairs = d * (d - 1) / 2;
    let mut out = vec![0.0; d * d];
    for j in 0..d {
        out[j] = m[(j, j)].re;
    }
    let mut p = 0;
    for j in 0..d {
        for k in j + 1..d {
            let z = m[(j, k)];
            out[d + p] = SQRT_2 * z.re;
            out[d + pairs + p] = SQRT_2 * z.im;
            p += 1;
        }
    }
    out
}

/// Coordinates of `v v^dag` without forming the projector.
pub(crate) fn pure_coords(v: &CVector) -> Vec<f64> {
    let d = v.len();
    let pairs = d * (d - 1) / 2;
    let mut out = vec![0.0; d * d];
    for j in 0..d {
        out[j] = v[j].norm_sqr();
    }
    let mut p = 0;
    for j in 0..d {
        for k in j + 1..d {
            let z = v[j] * v[k].conj();
            out[d + p] = SQRT_2 * z.re;
            out[d + pairs + p] = SQRT_2 * z.im;
            p += 1;
        }
    }
    out
}

pub(crate) fn coords_matrix(d: usize, coords: &[f64]) -> CMatrix {
    let pairs = d * (d - 1) / 2;
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        m[(j, j)] = c(coords[j], 0.0);
    }
    let mut p = 0;
    for j in 0..d {
        for k in j + 1..d {
            let z = c(coords[d + p], coords[d + pairs + p]) / SQRT_2;
            m[(j, k)] = z;
            m[(k, j)] = z.conj();
            p += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gaussian_matrix, gaussian_vector, max_abs_diff, outer};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_coords() {
        let c = hermitian_to_coords(&HermitianMatrix::identity(2));
        assert_eq!(c.as_slice(), &[1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn round_trip_and_trace_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 1..=4 {
            let a = HermitianMatrix::from_hermitized(&gaussian_matrix(&mut rng, d, d));
            let b = HermitianMatrix::from_hermitized(&gaussian_matrix(&mut rng, d, d));
            let ca = hermitian_to_coords(&a);
            let back = coords_to_hermitian(&ca);
            assert!(max_abs_diff(back.matrix(), a.matrix()) < 1e-12);
            let cb = hermitian_to_coords(&b);
            let tr = trace_product(a.matrix(), b.matrix());
            assert!((tr - ca.dot(&cb)).abs() < 1e-10);
        }
    }

    #[test]
    fn pure_coords_match_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = gaussian_vector(&mut rng, 3);
        let a = pure_coords(&v);
        let b = matrix_coords(&outer(&v));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian(_))));
    }
}
