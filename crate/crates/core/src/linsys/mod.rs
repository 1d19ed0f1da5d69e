//! Square linear systems: LU with partial pivoting, double-double residuals,
//! iterative refinement and a verified interval enclosure of the solution.
//! Norms are infinity norms throughout.

mod dd;
mod lu;
mod refine;
mod verify;

pub use dd::DoubleDouble;
pub use lu::{lu_solve_approx, LuFactors};
pub use refine::{refine, refine_with, residual_dd, Refined, ResidualPrecision};
pub use verify::{solve_verified, verify_enclosure, VerifiedSolution};
