//! Runge-Kutta methods as exact Butcher tableaux.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactnum`]: exact arithmetic in the quadratic field Q(sqrt 5).
//! * [`tableau`]: the `(A, b, c)` data model, JSON I/O, structural predicates and
//!   a catalog of named methods.
//! * [`adjoint`]: symmetric-adjoint and symplectic-adjoint transforms.
//! * [`order`]: simplified order conditions and rooted-tree elementary weights.
//! * [`stability`]: stability functions, A-/L-/algebraic stability.
//! * [`ssrk5`]: the six-stage, fifth-order explicit family whose symplectic and
//!   symmetric adjoints coincide.
//! * [`integrate`]: fixed-step time integration and convergence studies.

pub mod adjoint;
pub mod exactnum;
pub mod integrate;
pub mod matrix;
pub mod order;
pub mod poly;
pub mod scalar;
pub mod ssrk5;
pub mod stability;
pub mod tableau;

pub use adjoint::{
    average_symmetric, average_symplectic, is_partitioned_symplectic, symmetric_adjoint, symplectic_adjoint,
    AdjointError, AdjointKind, AdjointPair,
};
pub use exactnum::{ExactError, QSqrt5, Rational};
pub use integrate::{ConvergenceReport, IntegrateError, OdeProblem};
pub use order::{detect_order, enumerate_trees, OrderError, ResidualReport, RootedTree};
pub use scalar::{Scalar, ScalarKind};
pub use ssrk5::{construct_ssrk5, ConstructionParams, ConstructionTrace, Ssrk5Error};
pub use stability::{stability_function, StabilityFunction};
pub use tableau::{AnyTableau, CatalogEntry, ExactTableau, Family, FloatTableau, Tableau, TableauError};

/// Absolute tolerance used for float-kind structural comparisons.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-12;
