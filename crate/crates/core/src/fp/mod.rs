//! Binary64 primitives: error-free transforms, ulp and neighbour machinery,
//! directed rounding without touching the rounding mode, an exact-rational
//! oracle, and a probe of the platform's rounding-mode behaviour.

mod directed;
mod eft;
pub mod exact;
pub mod fenv;
mod ulp;

pub use directed::{dir_op, Direction, Op};
pub use eft::{two_prod, two_sum, TwoProd};
pub use exact::{exact_dot, exact_sum, ExactValue, RoundMode};
pub use fenv::{
    hardware_mode, probe_rounding_support, probe_rounding_support_with, set_hardware_mode,
    with_rounding_mode, BackendKind, HardwareMode, ProbeReport, RoundingBackend,
};
pub use ulp::{pred, succ, ulp, ulp_distance};

pub(crate) use eft::two_sum_raw;
pub(crate) use ulp::{exponent_of, scale2};

/// Parameters of the binary64 format used by the error bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FpConstants {
    /// Unit roundoff as used by the matrix-product bounds, `2^(1-p)`.
    pub u: f64,
    /// Smallest positive normal number.
    pub eta: f64,
    /// Significand bits including the hidden bit.
    pub p: u32,
}

pub const BINARY64: FpConstants = FpConstants {
    u: f64::EPSILON,
    eta: f64::MIN_POSITIVE,
    p: f64::MANTISSA_DIGITS,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_consistent() {
        assert_eq!(BINARY64.p, 53);
        assert_eq!(BINARY64.u, 2f64.powi(1 - BINARY64.p as i32));
        assert_eq!(BINARY64.u, 2f64.powi(-52));
        assert_eq!(BINARY64.eta, 2f64.powi(-1022));
        assert!(pred(BINARY64.eta) < BINARY64.eta && !pred(BINARY64.eta).is_normal());
    }
}
