//! Working precision and tolerance targets shared by every numerical routine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_DIGITS: u32 = 30;
pub const DEFAULT_DIGITS: u32 = 50;
const GUARD_BITS: u32 = 32;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub working_digits: u32,
    pub target_abs_tol: f64,
    pub target_rel_tol: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self::with_digits(DEFAULT_DIGITS).expect("default digits are valid")
    }
}

impl PrecisionPolicy {
    pub fn new(working_digits: u32, target_abs_tol: f64, target_rel_tol: f64) -> Result<Self> {
        if working_digits < MIN_DIGITS {
            return Err(Error::Config(format!(
                "working_digits = {working_digits} < {MIN_DIGITS}"
            )));
        }
        let floor = 10f64.powi(-(working_digits.min(300) as i32));
        for (name, tol) in [("abs", target_abs_tol), ("rel", target_rel_tol)] {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Error::Config(format!("{name} tolerance must be positive, got {tol}")));
            }
            if tol < floor {
                return Err(Error::Config(format!(
                    "{name} tolerance {tol:e} not representable at {working_digits} digits"
                )));
            }
        }
        Ok(Self { working_digits, target_abs_tol, target_rel_tol })
    }

    /// Tolerances sit 15 digits above the working precision.
    pub fn with_digits(digits: u32) -> Result<Self> {
        let tol = 10f64.powi(-(digits.saturating_sub(15).min(300) as i32));
        Self::new(digits, tol, tol)
    }

    /// Mantissa bits used for arithmetic under this policy.
    pub fn bits(&self) -> u32 {
        (self.working_digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    pub fn escalated(&self, digits: u32) -> Self {
        if digits <= self.working_digits {
            return *self;
        }
        Self { working_digits: digits, ..*self }
    }

    /// log2 of the absolute tolerance.
    pub fn abs_log2(&self) -> f64 {
        self.target_abs_tol.log2()
    }
}
