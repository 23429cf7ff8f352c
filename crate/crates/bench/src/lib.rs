//! Shared fixtures for the benchmark targets.

use rkforge::tableau::lookup;
use rkforge::{ExactTableau, FloatTableau};

pub fn exact(key: &str) -> ExactTableau {
    lookup(key)
        .unwrap_or_else(|| panic!("unknown catalog key {key}"))
        .tableau
}

pub fn float(key: &str) -> FloatTableau {
    exact(key).to_float().expect("finite coefficients")
}
