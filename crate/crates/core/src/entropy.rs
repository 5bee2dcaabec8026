//! Shannon and von Neumann entropies, in bits.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, CMatrix};
use crate::quantum::DensityMatrix;

/// Eigenvalues at or below this are treated as exact zeros (`0 log 0 = 0`).
pub const EIGEN_CLIP: f64 = 1e-12;

/// `-x log2 x` with the `0 log 0 = 0` convention.
#[inline]
pub fn xlog2x_neg(x: f64) -> f64 {
    if x <= EIGEN_CLIP {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(bad) = p.iter().find(|x| **x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("entry {bad} is negative or not finite")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("entries sum to {s}")));
    }
    Ok(shannon_bits(p))
}

/// Shannon entropy without validation; non-positive entries contribute nothing.
pub fn shannon_bits(p: &[f64]) -> f64 {
    p.iter().map(|&x| if x > 0.0 { -x * x.log2() } else { 0.0 }).sum()
}

/// `H2(p) = -p log p - (1-p) log (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_bits(&[p, 1.0 - p])
}

/// Entropy of a spectrum after clipping each eigenvalue to `[0, 1]`.
pub fn spectral_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|&l| xlog2x_neg(l.clamp(0.0, 1.0))).sum()
}

/// `-Tr rho log2 rho`: the Shannon entropy of the eigenvalues.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    spectral_entropy(&eigvalsh(rho.matrix()))
}

/// `-sum lambda log2 lambda` over the spectrum of a Hermitian PSD matrix that need
/// not have unit trace. Used for channel outputs and in derivative checks.
pub fn matrix_entropy(m: &CMatrix) -> f64 {
    eigvalsh(m).into_iter().map(xlog2x_neg).sum()
}

/// Gradient of `matrix_entropy` with respect to the matrix (as a Hermitian
/// matrix under the trace inner product): `-(log2 m + I/ln 2)` on the support.
/// Eigen-directions with eigenvalue at or below [`EIGEN_CLIP`] contribute zero.
pub fn entropy_gradient(m: &CMatrix) -> CMatrix {
    eigh(m).map(|l| if l > EIGEN_CLIP { -(l.log2() + 1.0 / LN_2) } else { 0.0 })
}

/// [`matrix_entropy`] and [`entropy_gradient`] from one eigendecomposition.
pub fn entropy_value_gradient(m: &CMatrix) -> (f64, CMatrix) {
    let eig = eigh(m);
    let value = eig.values.iter().map(|&l| xlog2x_neg(l)).sum();
    let grad = eig.map(|l| if l > EIGEN_CLIP { -(l.log2() + 1.0 / LN_2) } else { 0.0 });
    (value, grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        let s3 = 3f64.sqrt() / 4.0;
        let h = shannon_entropy(&[0.5 - s3, 0.5 + s3]).unwrap();
        assert!((h - 0.354_579_5).abs() < 1e-6, "{h}");
        assert!((1.0 - h - 0.6454).abs() < 1e-4);
    }

    #[test]
    fn shannon_rejects_negative() {
        assert!(matches!(
            shannon_entropy(&[1.2, -0.2]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(shannon_entropy(&[0.3, 0.3]).is_err());
    }

    #[test]
    fn binary_entropy_quarter() {
        assert!((binary_entropy(0.25) - 0.811_278_124_459_132_8).abs() < 1e-12);
    }
}
