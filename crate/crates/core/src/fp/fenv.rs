//! Hardware rounding-mode control and the runtime probe that decides whether
//! it can be trusted.
//!
//! The probe runs sentinel computations instead of trusting documentation:
//! an optimizer that reuses `a / b` across a mode switch, a library that
//! resets the control word, or a runtime that does not keep the mode per
//! thread all show up as a `false` field.

use std::hint::black_box;
use std::sync::Barrier;

use super::{dir_op, Direction, Op};
use crate::{Error, Result};

/// Hardware rounding mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HardwareMode {
    Nearest,
    Down,
    Up,
    TowardZero,
}

impl From<Direction> for HardwareMode {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Down => HardwareMode::Down,
            Direction::Up => HardwareMode::Up,
        }
    }
}

#[cfg(all(target_os = "linux", any(target_arch = "x86_64", target_arch = "aarch64")))]
mod sys {
    use super::HardwareMode;
    use std::ffi::c_int;

    extern "C" {
        fn fesetround(round: c_int) -> c_int;
        fn fegetround() -> c_int;
    }

    #[cfg(target_arch = "x86_64")]
    const MODES: [c_int; 4] = [0x000, 0x400, 0x800, 0xc00];
    #[cfg(target_arch = "aarch64")]
    const MODES: [c_int; 4] = [0x000000, 0x800000, 0x400000, 0xc00000];

    fn code(mode: HardwareMode) -> c_int {
        match mode {
            HardwareMode::Nearest => MODES[0],
            HardwareMode::Down => MODES[1],
            HardwareMode::Up => MODES[2],
            HardwareMode::TowardZero => MODES[3],
        }
    }

    pub const AVAILABLE: bool = true;

    pub fn set(mode: HardwareMode) -> bool {
        // SAFETY: fesetround only writes the calling thread's FP control state.
        unsafe { fesetround(code(mode)) == 0 }
    }

    pub fn get() -> Option<HardwareMode> {
        // SAFETY: fegetround only reads the calling thread's FP control state.
        let c = unsafe { fegetround() };
        [
            HardwareMode::Nearest,
            HardwareMode::Down,
            HardwareMode::Up,
            HardwareMode::TowardZero,
        ]
        .into_iter()
        .find(|&m| code(m) == c)
    }
}

#[cfg(not(all(target_os = "linux", any(target_arch = "x86_64", target_arch = "aarch64"))))]
mod sys {
    use super::HardwareMode;

    pub const AVAILABLE: bool = false;

    pub fn set(_mode: HardwareMode) -> bool {
        false
    }

    pub fn get() -> Option<HardwareMode> {
        None
    }
}

/// Sets the calling thread's hardware rounding mode without restoring it.
///
/// Meant for tests that need a hostile environment; library code goes through
/// [`with_rounding_mode`].
pub fn set_hardware_mode(mode: HardwareMode) -> Result<()> {
    if sys::set(mode) {
        Ok(())
    } else {
        Err(Error::Backend("no floating-point environment control".into()))
    }
}

/// Current hardware rounding mode of the calling thread, if observable.
pub fn hardware_mode() -> Option<HardwareMode> {
    sys::get()
}

struct Restore(Option<HardwareMode>);

impl Drop for Restore {
    fn drop(&mut self) {
        sys::set(self.0.unwrap_or(HardwareMode::Nearest));
    }
}

/// Runs `f` with the calling thread's hardware rounding mode set to `mode`,
/// restoring the previous mode afterwards (also on unwind). Work that `f`
/// hands to other threads does not inherit the mode.
pub fn with_rounding_mode<T>(mode: HardwareMode, f: impl FnOnce() -> T) -> Result<T> {
    let previous = sys::get();
    set_hardware_mode(mode)?;
    let _guard = Restore(previous);
    Ok(f())
}

/// Outcome of [`probe_rounding_support`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProbeReport {
    /// `a/b` computed after switching to RD and again after switching to RU
    /// gave the two correctly rounded, distinct results.
    pub division_respects_rd_ru: bool,
    /// A mode set before a call into the math library was still in effect
    /// afterwards.
    pub mode_survives_library_call: bool,
    /// Two concurrent threads holding different modes each saw their own.
    pub per_thread_isolation: bool,
    /// The platform exposes no rounding-mode control at all.
    pub no_fenv: bool,
}

impl ProbeReport {
    pub fn all_true(&self) -> bool {
        !self.no_fenv
            && self.division_respects_rd_ru
            && self.mode_survives_library_call
            && self.per_thread_isolation
    }

    fn no_fenv() -> Self {
        ProbeReport {
            division_respects_rd_ru: false,
            mode_survives_library_call: false,
            per_thread_isolation: false,
            no_fenv: true,
        }
    }
}

const SENTINELS: [(f64, f64); 4] = [(1.0, 3.0), (-1.0, 3.0), (2.0, 7.0), (1.0, -10.0)];

fn expected(a: f64, b: f64, dir: Direction) -> f64 {
    dir_op(Op::Div, a, b, dir).expect("sentinel operands are valid")
}

fn hw_div(a: f64, b: f64) -> f64 {
    black_box(black_box(a) / black_box(b))
}

fn default_library_call() {
    black_box(black_box(0.7f64).exp());
    black_box(black_box(2.5f64).ln());
}

/// Probes the platform's rounding-mode behaviour with sentinel computations.
pub fn probe_rounding_support() -> ProbeReport {
    probe_rounding_support_with(&default_library_call)
}

/// As [`probe_rounding_support`], with a caller-supplied stand-in for "a call
/// into an external numerical library".
pub fn probe_rounding_support_with(library_call: &(dyn Fn() + Sync)) -> ProbeReport {
    if !sys::AVAILABLE {
        return ProbeReport::no_fenv();
    }
    let previous = sys::get();
    if !sys::set(HardwareMode::Nearest) {
        return ProbeReport::no_fenv();
    }
    let _guard = Restore(previous);

    let division_respects_rd_ru = SENTINELS.iter().all(|&(a, b)| {
        sys::set(HardwareMode::Down);
        let left = hw_div(a, b);
        sys::set(HardwareMode::Up);
        let right = hw_div(a, b);
        sys::set(HardwareMode::Nearest);
        left != right
            && left == expected(a, b, Direction::Down)
            && right == expected(a, b, Direction::Up)
    });

    let mode_survives_library_call = [Direction::Down, Direction::Up].into_iter().all(|dir| {
        sys::set(dir.into());
        library_call();
        let observed = SENTINELS.iter().all(|&(a, b)| hw_div(a, b) == expected(a, b, dir));
        sys::set(HardwareMode::Nearest);
        observed
    });

    let barrier = Barrier::new(2);
    let per_thread_isolation = std::thread::scope(|scope| {
        let workers: Vec<_> = [Direction::Down, Direction::Up]
            .into_iter()
            .map(|dir| {
                let barrier = &barrier;
                scope.spawn(move || {
                    let ok_set = sys::set(dir.into());
                    barrier.wait();
                    let ok = SENTINELS.iter().all(|&(a, b)| hw_div(a, b) == expected(a, b, dir));
                    barrier.wait();
                    sys::set(HardwareMode::Nearest);
                    ok_set && ok
                })
            })
            .collect();
        workers.into_iter().all(|w| w.join().unwrap_or(false))
    });

    ProbeReport {
        division_respects_rd_ru,
        mode_survives_library_call,
        per_thread_isolation,
        no_fenv: false,
    }
}

/// Which mechanism implements directed rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendKind {
    /// Error-free transforms on round-to-nearest results; touches no global state.
    EftSoftware,
    /// Switches the hardware rounding mode around each operation.
    HardwareFenv,
}

/// A directed-rounding backend. The hardware variant can only be obtained
/// from a probe that came back all true.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundingBackend {
    kind: BackendKind,
    probe: Option<ProbeReport>,
}

impl Default for RoundingBackend {
    fn default() -> Self {
        Self::eft()
    }
}

impl RoundingBackend {
    pub fn eft() -> Self {
        RoundingBackend {
            kind: BackendKind::EftSoftware,
            probe: None,
        }
    }

    /// Probes the platform and returns the hardware backend if every sentinel held.
    pub fn hardware() -> Result<Self> {
        Self::from_probe(probe_rounding_support())
    }

    pub fn from_probe(report: ProbeReport) -> Result<Self> {
        if report.all_true() {
            Ok(RoundingBackend {
                kind: BackendKind::HardwareFenv,
                probe: Some(report),
            })
        } else {
            Err(Error::Backend(format!(
                "hardware rounding unsafe on this platform: {report:?}"
            )))
        }
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn probe(&self) -> Option<&ProbeReport> {
        self.probe.as_ref()
    }

    pub fn dir_op(&self, op: Op, a: f64, b: f64, dir: Direction) -> Result<f64> {
        match self.kind {
            BackendKind::EftSoftware => dir_op(op, a, b, dir),
            BackendKind::HardwareFenv => hardware_dir_op(op, a, b, dir),
        }
    }
}

fn hardware_dir_op(op: Op, a: f64, b: f64, dir: Direction) -> Result<f64> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::Domain("NaN operand"));
    }
    if op == Op::Div && b == 0.0 {
        return Err(Error::Domain("division by zero"));
    }
    let r = with_rounding_mode(dir.into(), || {
        let (a, b) = (black_box(a), black_box(b));
        black_box(match op {
            Op::Add => a + b,
            Op::Sub => a - b,
            Op::Mul => a * b,
            Op::Div => a / b,
        })
    })?;
    if r.is_nan() {
        return Err(Error::Domain("undefined operation on infinities"));
    }
    Ok(r)
}
