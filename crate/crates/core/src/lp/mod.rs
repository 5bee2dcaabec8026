//! Dense linear programming: a revised simplex solver with dual extraction, a
//! column-generation driver and non-negative least squares.

mod colgen;
mod nnls;
mod simplex;

pub use colgen::{column_generation, ColumnGenerationResult, MasterProblem, PricedColumn, PricingOutcome, DEDUP_TOL};
pub use nnls::nnls;
pub use simplex::{solve_lp, solve_lp_with, BasisVar, LinearProgram, LpOptions, LpSolution, LpStatus, Sense};
