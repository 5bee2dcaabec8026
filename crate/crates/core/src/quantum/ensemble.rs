use crate::error::{Error, Result};
use crate::linalg::{real, CMatrix};

use super::channel::QuantumChannel;
use super::state::{DensityMatrix, PureState};

/// Tolerance on `sum p_i = 1`.
pub const PROBABILITY_TOL: f64 = 1e-10;

/// Anything that can sit in an ensemble.
pub trait QuantumState: Clone {
    fn dim(&self) -> usize;
    fn density(&self) -> DensityMatrix;
}

impl QuantumState for DensityMatrix {
    fn dim(&self) -> usize {
        DensityMatrix::dim(self)
    }

    fn density(&self) -> DensityMatrix {
        self.clone()
    }
}

impl QuantumState for PureState {
    fn dim(&self) -> usize {
        PureState::dim(self)
    }

    fn density(&self) -> DensityMatrix {
        self.projector()
    }
}

/// Weighted list `{p_i, state_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<S> {
    items: Vec<(f64, S)>,
}

impl<S: QuantumState> Ensemble<S> {
    pub fn new(items: Vec<(f64, S)>) -> Result<Self> {
        Self::check_shape(&items)?;
        if let Some((p, _)) = items.iter().find(|(p, _)| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidDistribution(format!("negative probability {p}")));
        }
        let total: f64 = items.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { items })
    }

    /// Rescales non-negative weights to sum to one. Weights in `[-1e-12, 0)`
    /// are rounding noise and are set to zero.
    pub fn normalized(items: Vec<(f64, S)>) -> Result<Self> {
        Self::check_shape(&items)?;
        let mut items = items;
        for (p, _) in items.iter_mut() {
            if *p < 0.0 && *p >= -1e-12 {
                *p = 0.0;
            }
            if *p < 0.0 || !p.is_finite() {
                return Err(Error::InvalidDistribution(format!("negative probability {p}")));
            }
        }
        let total: f64 = items.iter().map(|(p, _)| p).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        for (p, _) in items.iter_mut() {
            *p /= total;
        }
        Ok(Self { items })
    }

    pub fn uniform(states: Vec<S>) -> Result<Self> {
        let n = states.len() as f64;
        Self::new(states.into_iter().map(|s| (1.0 / n, s)).collect())
    }

    fn check_shape(items: &[(f64, S)]) -> Result<()> {
        let first = items.first().ok_or(Error::Empty("ensemble"))?;
        let d = first.1.dim();
        for (_, s) in items {
            if s.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: s.dim(),
                });
            }
        }
        Ok(())
    }

    pub fn items(&self) -> &[(f64, S)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.items[0].1.dim()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.items.iter().map(|(p, _)| *p).collect()
    }

    pub fn states(&self) -> impl Iterator<Item = &S> {
        self.items.iter().map(|(_, s)| s)
    }

    /// `sum_i p_i state_i`.
    pub fn average(&self) -> DensityMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for (p, s) in &self.items {
            m += s.density().matrix() * real(*p);
        }
        DensityMatrix::from_matrix_unchecked(m)
    }

    pub fn to_mixed(&self) -> Ensemble<DensityMatrix> {
        Ensemble {
            items: self.items.iter().map(|(p, s)| (*p, s.density())).collect(),
        }
    }

    /// Output ensemble `{p_i, N(state_i)}`.
    pub fn through(&self, ch: &QuantumChannel) -> Result<Ensemble<DensityMatrix>> {
        let items = self
            .items
            .iter()
            .map(|(p, s)| Ok((*p, ch.apply(&s.density())?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble { items })
    }

    /// Drops members with probability at or below `threshold` and renormalizes.
    pub fn pruned(&self, threshold: f64) -> Result<Self> {
        Self::normalized(self.items.iter().filter(|(p, _)| *p > threshold).cloned().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn validation() {
        let s = PureState::basis(2, 0);
        assert!(Ensemble::new(vec![(0.5, s.clone()), (0.4, s.clone())]).is_err());
        assert!(Ensemble::new(vec![(1.1, s.clone()), (-0.1, s.clone())]).is_err());
        assert!(Ensemble::new(vec![(0.5, s.clone()), (0.5, PureState::basis(3, 0))]).is_err());
        assert!(Ensemble::<PureState>::new(vec![]).is_err());
        let e = Ensemble::normalized(vec![(2.0, s.clone()), (2.0, PureState::basis(2, 1))]).unwrap();
        assert_eq!(e.probabilities(), vec![0.5, 0.5]);
        assert!(max_abs_diff(e.average().matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }
}
