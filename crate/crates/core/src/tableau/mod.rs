//! Butcher tableaux `(A, b, c)`.
//!
//! A [`Tableau`] is immutable once built. Construction checks dimensions only;
//! row-sum consistency `c_i = sum_j a_ij` is reported by [`Tableau::row_sum_violations`]
//! rather than enforced, so that printed fixtures with defects still load.

mod catalog;
mod json;

pub use catalog::{catalog, lookup, CatalogEntry, Family};
pub use json::{parse_tableau, AnyTableau};

use thiserror::Error;

use crate::exactnum::{ExactError, QSqrt5};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, ScalarKind};

pub type ExactTableau = Tableau<QSqrt5>;
pub type FloatTableau = Tableau<f64>;

#[derive(Debug, Error)]
pub enum TableauError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("scalar parse error in {field}: {source}")]
    ScalarParse {
        field: String,
        #[source]
        source: ExactError,
    },
}

#[derive(Clone, PartialEq, Debug)]
pub struct Tableau<S> {
    name: String,
    kind: ScalarKind,
    a: Matrix<S>,
    b: Vec<S>,
    c: Vec<S>,
}

impl<S: Scalar> Tableau<S> {
    /// Builds a tableau after checking that `A` is `s x s` and `b`, `c` have
    /// length `s`. The declared kind must agree with the scalar type.
    pub fn new(
        name: impl Into<String>,
        kind: ScalarKind,
        a: Vec<Vec<S>>,
        b: Vec<S>,
        c: Vec<S>,
    ) -> Result<Self, TableauError> {
        let s = b.len();
        if s == 0 {
            return Err(TableauError::Schema("a tableau needs at least one stage".into()));
        }
        if c.len() != s {
            return Err(TableauError::Schema(format!("|b| = {s} but |c| = {}", c.len())));
        }
        if a.len() != s || a.iter().any(|row| row.len() != s) {
            return Err(TableauError::Schema(format!("A must be {s}x{s}")));
        }
        if kind.is_exact() != S::EXACT {
            return Err(TableauError::Schema(format!(
                "scalar kind `{}` does not match the coefficient type",
                kind.as_str()
            )));
        }
        let a = Matrix::from_rows(a).expect("dimensions checked above");
        Ok(Tableau {
            name: name.into(),
            kind,
            a,
            b,
            c,
        })
    }

    pub(crate) fn from_parts(name: String, kind: ScalarKind, a: Matrix<S>, b: Vec<S>, c: Vec<S>) -> Self {
        debug_assert!(a.rows() == b.len() && a.cols() == b.len() && c.len() == b.len());
        Tableau { name, kind, a, b, c }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn a_ij(&self, i: usize, j: usize) -> &S {
        &self.a[(i, j)]
    }

    pub fn b(&self) -> &[S] {
        &self.b
    }

    pub fn c(&self) -> &[S] {
        &self.c
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Coefficient-wise equality, ignoring the name.
    pub fn same_coefficients(&self, other: &Self, tol: f64) -> bool {
        let close = |x: &S, y: &S| (x.clone() - y.clone()).is_negligible(tol);
        self.stages() == other.stages()
            && self.a.iter().zip(other.a.iter()).all(|(x, y)| close(x, y))
            && self.b.iter().zip(&other.b).all(|(x, y)| close(x, y))
            && self.c.iter().zip(&other.c).all(|(x, y)| close(x, y))
    }

    /// Strictly lower-triangular `A`.
    pub fn is_explicit(&self) -> bool {
        let s = self.stages();
        (0..s).all(|i| (i..s).all(|j| self.a[(i, j)].is_negligible(0.0)))
    }

    pub fn is_symmetric_coeffs(&self) -> bool {
        self.is_symmetric_coeffs_tol(crate::DEFAULT_FLOAT_TOL)
    }

    /// `a_ij = b_{s+1-j} - a_{s+1-i,s+1-j}` and `b_j = b_{s+1-j}` for all i, j.
    pub fn is_symmetric_coeffs_tol(&self, tol: f64) -> bool {
        let s = self.stages();
        let r = |k: usize| s - 1 - k;
        let weights = (0..s).all(|j| (self.b[j].clone() - self.b[r(j)].clone()).is_negligible(tol));
        weights
            && (0..s).all(|i| {
                (0..s).all(|j| {
                    let rhs = self.b[r(j)].clone() - self.a[(r(i), r(j))].clone();
                    (self.a[(i, j)].clone() - rhs).is_negligible(tol)
                })
            })
    }

    /// `m_ij = b_i a_ij + b_j a_ji - b_i b_j`.
    pub fn symplecticity_matrix(&self) -> Matrix<S> {
        let (a, b) = (&self.a, &self.b);
        Matrix::from_fn(self.stages(), self.stages(), |i, j| {
            b[i].clone() * a[(i, j)].clone() + b[j].clone() * a[(j, i)].clone() - b[i].clone() * b[j].clone()
        })
    }

    pub fn is_symplectic(&self) -> bool {
        self.is_symplectic_tol(crate::DEFAULT_FLOAT_TOL)
    }

    pub fn is_symplectic_tol(&self, tol: f64) -> bool {
        self.symplecticity_matrix().is_zero_within(tol)
    }

    /// Residuals `sum_j a_ij - c_i` for every row where they do not vanish.
    pub fn row_sum_violations(&self, tol: f64) -> Vec<(usize, S)> {
        (0..self.stages())
            .filter_map(|i| {
                let sum = self.a.row(i).iter().cloned().fold(S::zero(), |x, y| x + y);
                let res = sum - self.c[i].clone();
                (!res.is_negligible(tol)).then_some((i, res))
            })
            .collect()
    }

    pub fn is_row_sum_consistent(&self, tol: f64) -> bool {
        self.row_sum_violations(tol).is_empty()
    }

    pub fn has_nonzero_weights(&self, tol: f64) -> bool {
        self.b.iter().all(|x| !x.is_negligible(tol))
    }
}

impl ExactTableau {
    /// Exact tableau whose kind is inferred: `rational` when every entry has a
    /// zero sqrt(5) part, `quadext5` otherwise.
    pub fn exact(
        name: impl Into<String>,
        a: Vec<Vec<QSqrt5>>,
        b: Vec<QSqrt5>,
        c: Vec<QSqrt5>,
    ) -> Result<Self, TableauError> {
        let rational = a.iter().flatten().chain(&b).chain(&c).all(QSqrt5::is_rational);
        let kind = if rational {
            ScalarKind::Rational
        } else {
            ScalarKind::Quadext5
        };
        Tableau::new(name, kind, a, b, c)
    }

    /// Kind that fits the actual entries (`rational` if possible).
    pub fn inferred_kind(&self) -> ScalarKind {
        let rational = self.a.iter().chain(&self.b).chain(&self.c).all(QSqrt5::is_rational);
        if rational {
            ScalarKind::Rational
        } else {
            ScalarKind::Quadext5
        }
    }

    /// Converts every entry with [`QSqrt5::to_f64`]. The reverse conversion is
    /// deliberately not offered.
    pub fn to_float(&self) -> Result<FloatTableau, ExactError> {
        let conv = |v: &[QSqrt5]| v.iter().map(QSqrt5::to_f64).collect::<Result<Vec<_>, _>>();
        let a = self
            .a
            .to_rows()
            .iter()
            .map(|row| conv(row))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Tableau::from_parts(
            self.name.clone(),
            ScalarKind::Float,
            Matrix::from_rows(a).expect("square"),
            conv(&self.b)?,
            conv(&self.c)?,
        ))
    }
}
