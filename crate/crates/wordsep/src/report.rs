//! Separation claims and their verification.
//!
//! A machine separates the words of `X` from the words of `Y` in one of
//! three modes: exactly (accept side 1, reject side 0), nondeterministically
//! (accept side nonzero, reject side exactly 0), or with one-sided bounded
//! error (accept side 1, reject side at most a bound < 1). Verification is
//! bit-exact on the rational backend and tolerance-based on floats.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::exactnum::Scalar;

/// Fallback tolerance for float-backend one/zero tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Margin a float acceptance probability must clear to count as nonzero.
pub const DEFAULT_NONZERO_MIN: f64 = 1e-6;

/// Tolerances for float-backend verification. Ignored entirely by the
/// exact backend.
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    /// How far a probability may sit from an exact 0 or 1.
    pub tol: f64,
    /// Minimum value accepted as "nonzero" in nondeterministic mode.
    pub nonzero_min: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            tol: DEFAULT_TOL,
            nonzero_min: DEFAULT_NONZERO_MIN,
        }
    }
}

/// The claimed separation mode.
#[derive(Clone, Debug, PartialEq)]
pub enum SeparationMode {
    /// Accept side exactly 1, reject side exactly 0.
    Exact,
    /// Accept side nonzero, reject side exactly 0.
    Nondet,
    /// Accept side exactly 1, reject side at most the bound.
    Bounded(BigRational),
}

impl SeparationMode {
    pub fn label(&self) -> String {
        match self {
            SeparationMode::Exact => "exact".to_string(),
            SeparationMode::Nondet => "nondet".to_string(),
            SeparationMode::Bounded(p) => format!("bounded({p})"),
        }
    }

    /// Does `value` satisfy this mode's requirement for its side?
    pub fn side_ok<S: Scalar>(&self, value: &S::Real, accept_side: bool, opts: &EvalOptions) -> bool {
        match (self, accept_side) {
            (SeparationMode::Exact, true) => S::real_is_one(value, opts.tol),
            (SeparationMode::Exact, false) => S::real_is_zero(value, opts.tol),
            (SeparationMode::Nondet, true) => S::real_is_nonzero(value, opts.nonzero_min),
            (SeparationMode::Nondet, false) => S::real_is_zero(value, opts.tol),
            (SeparationMode::Bounded(_), true) => S::real_is_one(value, opts.tol),
            (SeparationMode::Bounded(p), false) => {
                if S::EXACT {
                    S::real_leq(value, p)
                } else {
                    S::real_to_f64(value) <= p.to_f64().unwrap_or(f64::NAN) + opts.tol
                }
            }
        }
    }
}

/// One word's acceptance value and whether it met its side's requirement.
#[derive(Clone, Debug)]
pub struct WordValue {
    pub word: String,
    /// Exact fraction string on the rational backend, decimal on floats.
    pub value: String,
    /// Lossy numeric view for sorting/plotting.
    pub approx: f64,
    pub accept_side: bool,
    pub ok: bool,
}

/// Identity of the machine a report speaks about.
#[derive(Clone, Debug)]
pub struct MachineInfo {
    pub kind: String,
    pub states: usize,
    pub backend: &'static str,
}

/// Outcome of verifying one separation claim.
#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub machine: MachineInfo,
    pub mode: SeparationMode,
    /// True only if every word met its side's requirement.
    pub verified: bool,
    /// True when the backing arithmetic was bit-exact.
    pub exact: bool,
    pub values: Vec<WordValue>,
    pub elapsed: std::time::Duration,
}

impl SeparationReport {
    /// Assemble a report from per-word values, marking each side.
    pub fn assess<S: Scalar>(
        machine: MachineInfo,
        mode: SeparationMode,
        accept_values: Vec<(String, S::Real)>,
        reject_values: Vec<(String, S::Real)>,
        opts: &EvalOptions,
        elapsed: std::time::Duration,
    ) -> Self {
        let mut values = Vec::with_capacity(accept_values.len() + reject_values.len());
        let mut verified = true;
        for (side, group) in [(true, accept_values), (false, reject_values)] {
            for (word, v) in group {
                let ok = mode.side_ok::<S>(&v, side, opts);
                verified &= ok;
                values.push(WordValue {
                    word,
                    value: S::real_to_string(&v),
                    approx: S::real_to_f64(&v),
                    accept_side: side,
                    ok,
                });
            }
        }
        SeparationReport {
            machine,
            mode,
            verified,
            exact: S::EXACT,
            values,
            elapsed,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": 1,
            "machine": {
                "kind": self.machine.kind,
                "states": self.machine.states,
                "backend": self.machine.backend,
            },
            "mode": self.mode.label(),
            "verified": self.verified,
            "exact": self.exact,
            "elapsed_ms": self.elapsed.as_secs_f64() * 1e3,
            "words": self.values.iter().map(|v| serde_json::json!({
                "word": v.word,
                "value": v.value,
                "approx": v.approx,
                "side": if v.accept_side { "accept" } else { "reject" },
                "ok": v.ok,
            })).collect::<Vec<_>>(),
        })
    }
}
