//! Intervals in endpoint and midpoint-radius form, with outward-rounded
//! arithmetic and range enclosures of single-variable expressions.

mod endpoint;
mod expr;
mod midrad;

pub use endpoint::{
    bisect, ep_add, ep_div, ep_mul, ep_square, ep_sub, hausdorff_q, EndpointInterval,
};
pub use expr::{enclose_range, Expr, RangeMethod};
pub use midrad::{MidRadConversion, MidRadInterval};
