use crate::error::{Error, Result};
use crate::linalg::{eigh, expectation, identity, max_abs_diff, outer, real, CMatrix};

use super::state::{DensityMatrix, PureState};

/// Entrywise tolerance on `sum_i q_i w_i w_i^dag = I`.
pub const POVM_TOL: f64 = 1e-9;

/// Eigenvalues of the frame operator below this are treated as off-support.
pub const SRM_SUPPORT_TOL: f64 = 1e-10;

/// Rank-one POVM `E_i = q_i w_i w_i^dag`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    items: Vec<(f64, PureState)>,
}

impl Povm {
    pub fn new(items: Vec<(f64, PureState)>) -> Result<Self> {
        let povm = Self::new_unchecked(items)?;
        let defect = povm.completeness_defect();
        if !(defect <= POVM_TOL) {
            return Err(Error::IncompletePovm(defect));
        }
        Ok(povm)
    }

    /// Checks shapes and signs but not completeness.
    pub fn new_unchecked(items: Vec<(f64, PureState)>) -> Result<Self> {
        let dim = items.first().ok_or(Error::Empty("POVM"))?.1.dim();
        for (q, w) in &items {
            if w.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: w.dim(),
                });
            }
            if *q < 0.0 || !q.is_finite() {
                return Err(Error::InvalidArgument(format!("negative POVM weight {q}")));
            }
        }
        Ok(Self { dim, items })
    }

    /// Projective measurement onto the computational basis.
    pub fn computational_basis(d: usize) -> Self {
        Self {
            dim: d,
            items: (0..d).map(|k| (1.0, PureState::basis(d, k))).collect(),
        }
    }

    /// Projective measurement onto the columns of a unitary.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let items = (0..u.ncols())
            .map(|k| Ok((1.0, PureState::normalized(u.column(k).into_owned())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(items)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[(f64, PureState)] {
        &self.items
    }

    pub fn elements(&self) -> Vec<CMatrix> {
        self.items
            .iter()
            .map(|(q, w)| outer(w.amplitudes()) * real(*q))
            .collect()
    }

    pub fn completeness_defect(&self) -> f64 {
        let mut sum = CMatrix::zeros(self.dim, self.dim);
        for e in self.elements() {
            sum += e;
        }
        max_abs_diff(&sum, &identity(self.dim))
    }
}

/// Outcome distribution `q_i w_i^dag rho w_i`.
pub fn povm_probabilities(povm: &Povm, rho: &DensityMatrix) -> Result<Vec<f64>> {
    if povm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: rho.dim(),
        });
    }
    Ok(povm
        .items
        .iter()
        .map(|(q, w)| (q * expectation(rho.matrix(), w.amplitudes())).max(0.0))
        .collect())
}

/// Square-root ("pretty good") measurement for equiprobable pure states:
/// `E_i = phi^{-1/2} w_i w_i^dag phi^{-1/2}` with `phi = sum_i w_i w_i^dag`,
/// using the pseudo-inverse square root on the support of `phi`.
///
/// The returned POVM has one outcome per input state (in input order) followed
/// by an orthonormal basis of the orthogonal complement of the support, each
/// with weight 1, so that it is complete on the whole space.
pub fn square_root_measurement(states: &[PureState]) -> Result<Povm> {
    let first = states.first().ok_or(Error::Empty("square-root measurement states"))?;
    let d = first.dim();
    let mut phi = CMatrix::zeros(d, d);
    for w in states {
        if w.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: w.dim(),
            });
        }
        phi += outer(w.amplitudes());
    }
    let eig = eigh(&phi);
    let inv_sqrt = eig.map(|l| if l > SRM_SUPPORT_TOL { 1.0 / l.sqrt() } else { 0.0 });
    let mut items = Vec::with_capacity(d + states.len());
    for w in states {
        let u = &inv_sqrt * w.amplitudes();
        let q = u.norm_squared();
        items.push((q, PureState::normalized(u)?));
    }
    for (k, &l) in eig.values.iter().enumerate() {
        if l <= SRM_SUPPORT_TOL {
            items.push((1.0, PureState::normalized(eig.vector(k))?));
        }
    }
    Povm::new(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels;

    #[test]
    fn trine_srm_has_two_thirds_weights() {
        let trine = channels::trine_states();
        let m = square_root_measurement(&trine).unwrap();
        assert_eq!(m.len(), 3);
        for ((q, w), v) in m.items().iter().zip(&trine) {
            assert!((q - 2.0 / 3.0).abs() < 1e-12);
            assert!((w.inner(v).norm() - 1.0).abs() < 1e-12);
        }
        assert!(m.completeness_defect() < 1e-12);
    }

    #[test]
    fn orthonormal_states_give_projective_measurement() {
        let states: Vec<_> = (0..3).map(|k| PureState::basis(3, k)).collect();
        let m = square_root_measurement(&states).unwrap();
        assert_eq!(m, Povm::computational_basis(3));
    }

    #[test]
    fn two_copy_trine_srm_is_orthonormal() {
        let states = channels::two_copy_trine_states();
        let m = square_root_measurement(&states).unwrap();
        assert_eq!(m.len(), 4);
        for i in 0..3 {
            assert!((m.items()[i].0 - 1.0).abs() < 1e-9);
            for j in 0..i {
                assert!(m.items()[i].1.inner(&m.items()[j].1).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn anti_trine_probabilities() {
        let povm = channels::anti_trine_povm();
        let v0 = &channels::trine_states()[0];
        let p = povm_probabilities(&povm, &v0.projector()).unwrap();
        assert!(p[0].abs() < 1e-15);
        assert!((p[1] - 0.5).abs() < 1e-15 && (p[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn basis_measurement_reads_diagonal() {
        let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let p = povm_probabilities(&Povm::computational_basis(2), &rho).unwrap();
        assert!((p[0] - 0.3).abs() < 1e-15 && (p[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn incomplete_povm_rejected() {
        let r = Povm::new(vec![(1.0, PureState::basis(2, 0))]);
        assert!(matches!(r, Err(Error::IncompletePovm(_))));
    }
}
