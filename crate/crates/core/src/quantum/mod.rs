//! States, channels, measurements and the Hermitian coordinate system shared
//! by the linear programs.

mod channel;
mod ensemble;
mod hermitian;
mod measurement;
mod state;

pub use channel::{apply_channel, trace_preservation_defect, validate_channel, QuantumChannel, TRACE_PRESERVING_TOL};
pub use ensemble::{Ensemble, QuantumState, PROBABILITY_TOL};
pub use hermitian::{coords_to_hermitian, hermitian_to_coords, HermitianCoords, HermitianMatrix, HERMITIAN_TOL};
pub use measurement::{povm_probabilities, square_root_measurement, Povm, POVM_TOL, SRM_SUPPORT_TOL};
pub use state::{
    density_defect, fidelity, fidelity_pure_squared, partial_trace, purify, purify_with_reference, rank, tensor,
    DensityMatrix, Keep, PureState, Tensor, NORM_TOL, PSD_TOL, TRACE_TOL,
};

pub(crate) use hermitian::{matrix_coords, pure_coords};
