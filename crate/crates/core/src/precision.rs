use crate::error::{Error, Result};

/// Binary precision shared by every value in one pipeline run.
///
/// Rounding is always to nearest, ties to even (MPFR's default mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    bits: u32,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 53;
    /// Default for runs with n ≤ 30.
    pub const DOUBLE: PrecisionContext = PrecisionContext { bits: 53 };
    /// Default for validation runs up to n = 200 (about 64 decimal digits).
    pub const VALIDATION: PrecisionContext = PrecisionContext { bits: 212 };

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::InvalidParameter(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        Ok(Self { bits })
    }

    /// Default precision for a run up to degree `n`.
    pub fn default_for_degree(n: usize) -> Self {
        if n <= 30 {
            Self::DOUBLE
        } else {
            Self::VALIDATION
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Unit roundoff 2^{-bits} as an f64 (saturates to 0 for very high precision).
    pub fn epsilon(&self) -> f64 {
        2f64.powi(-(self.bits as i32))
    }

    /// Relative tolerance 2^{-(bits - slack)}.
    pub fn tolerance(&self, slack: u32) -> f64 {
        2f64.powi(-(self.bits.saturating_sub(slack) as i32))
    }

    /// Number of decimal digits carried by the mantissa.
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).floor() as usize
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::DOUBLE
    }
}
