//! Matrix products with a fixed accumulation order, interval matrix products
//! in midpoint-radius form, and a priori error bounds for floating-point
//! products.
//!
//! There is deliberately no hook for fast (Strassen-like) products: they
//! subtract, and directed rounding is only monotone without subtraction.

mod bounds;
mod gemm;
mod imm;
mod matrix;

pub use bounds::{order_independent_bound, rounding_free_bound, same_order_bound};
pub use gemm::{
    gemm_directed, gemm_ordered, gemm_ordered_with_workers, upper_nonneg_product, LoopOrder,
    OrderSpec,
};
pub use imm::{imm3, imm4};
pub use matrix::{FpMatrix, IntervalMatrixMR};
