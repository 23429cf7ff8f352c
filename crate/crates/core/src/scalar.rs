//! Coefficient scalars: exact Q(sqrt 5) values or binary64.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::QSqrt5;

/// The three coefficient kinds a tableau may be declared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Quadext5,
    Float,
}

impl ScalarKind {
    pub fn is_exact(self) -> bool {
        self != ScalarKind::Float
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScalarKind::Rational => "rational",
            ScalarKind::Quadext5 => "quadext5",
            ScalarKind::Float => "float",
        }
    }
}

/// Field operations plus the handful of extras the analysis code needs.
///
/// Exact scalars compare to literal zero and ignore `tol`; floats use an
/// absolute tolerance.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn is_negligible(&self, tol: f64) -> bool;

    /// Nearest binary64 (may be lossy; never fails for finite values).
    fn approx_f64(&self) -> f64;

    /// Sign with tolerance: values within `tol` of zero count as zero.
    fn sign(&self, tol: f64) -> std::cmp::Ordering;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Scalar for QSqrt5 {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        QSqrt5::ratio(num, den)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn sign(&self, _tol: f64) -> std::cmp::Ordering {
        self.signum()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.abs() <= tol
    }

    fn approx_f64(&self) -> f64 {
        *self
    }

    fn sign(&self, tol: f64) -> std::cmp::Ordering {
        if self.abs() <= tol {
            std::cmp::Ordering::Equal
        } else if *self > 0.0 {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Less
        }
    }
}
