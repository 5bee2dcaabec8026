//! Numerical capacities of finite-dimensional quantum channels.
//!
//! The crate computes the product-state classical capacity with product
//! measurements (`C11`), the Holevo capacity (`C1inf`) and the
//! entanglement-assisted capacity (`C_E`) of channels given in Kraus form,
//! together with the information measures they are built from. The Holevo
//! and measurement problems are solved by column generation over a linear
//! master problem whose duals drive a nonlinear pricing search; results carry
//! duality and pricing certificates rather than bare numbers.

pub mod c11;
pub mod c1inf;
pub mod channels;
pub mod ea;
pub mod entropy;
pub mod error;
pub mod info;
pub mod linalg;
pub mod lp;
pub mod optim;
pub mod oracles;
pub mod quantum;

pub use error::{Error, Result};
