//! Interval arithmetic over binary64 hardened for reproducibility.
//!
//! - [`fp`]: error-free transforms, ulp machinery, directed rounding computed
//!   in software, an exact-rational oracle and a rounding-mode probe.
//! - [`interval`]: endpoint and midpoint-radius intervals, range enclosures.
//! - [`summation`]: naive, compensated, fixed-tree and pre-rounded sums.
//! - [`matmul`]: order-controlled products, interval matrix products and
//!   their error bounds.
//! - [`linsys`]: refined and verified solution of square linear systems.
//! - [`audit`]: the reproducibility auditor behind the `audit` binary.
//! - [`io`]: hexadecimal-float text formats and binary vector files.
//!
//! ```
//! use repro_interval::fp::{dir_op, Direction, Op};
//! use repro_interval::interval::EndpointInterval;
//! use repro_interval::summation::sum_intervals;
//!
//! let lo = dir_op(Op::Div, 1.0, 3.0, Direction::Down)?;
//! let hi = dir_op(Op::Div, 1.0, 3.0, Direction::Up)?;
//! assert!(lo < hi);
//!
//! let xs = [EndpointInterval::new(1.0, 2.0)?, EndpointInterval::new(-0.5, 0.25)?];
//! let s = sum_intervals(&xs, &[0, 1])?;
//! assert_eq!(s.to_literal(), "[0x1p-1,0x1.2p+1]");
//! # Ok::<(), repro_interval::Error>(())
//! ```

pub mod audit;
pub mod error;
pub mod fp;
pub mod interval;
pub mod io;
pub mod linsys;
pub mod matmul;
pub mod summation;

pub use error::{Error, Result};
