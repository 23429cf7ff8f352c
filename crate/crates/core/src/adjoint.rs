//! Symmetric-adjoint and symplectic-adjoint transforms.
//!
//! For `Phi = (A, b, c)` with `s` stages:
//!
//! * symmetric adjoint `Phi*`: `a*_ij = b_{s+1-j} - a_{s+1-i,s+1-j}`,
//!   `b*_j = b_{s+1-j}`, `c*_i = 1 - c_{s+1-i}`; this is the reflected method
//!   `(e b^T - A, b, e - c)` conjugated by the index-reversal permutation.
//! * symplectic adjoint `Phi^{s*}`: `a_ij = b_j (1 - a_ji / b_i)` with `b`, `c`
//!   unchanged. The pair `(Phi, Phi^{s*})` satisfies the partitioned
//!   symplecticity condition, so averaging the two gives a symplectic method.
//!
//! Both transforms are involutions and keep exact inputs exact.

use serde::Serialize;
use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::tableau::Tableau;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdjointError {
    /// Weight `b_i` (1-based stage index) vanishes.
    #[error("weight b_{0} is zero; the symplectic adjoint needs nonzero weights")]
    ZeroWeight(usize),
    #[error("stage counts differ: {0} vs {1}")]
    StageMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdjointKind {
    Symmetric,
    Symplectic,
}

#[derive(Debug, Clone)]
pub struct AdjointPair<S> {
    pub original: Tableau<S>,
    pub adjoint: Tableau<S>,
    pub kind: AdjointKind,
}

impl<S: Scalar> AdjointPair<S> {
    pub fn new(original: Tableau<S>, kind: AdjointKind) -> Result<Self, AdjointError> {
        let adjoint = match kind {
            AdjointKind::Symmetric => symmetric_adjoint(&original),
            AdjointKind::Symplectic => symplectic_adjoint(&original)?,
        };
        Ok(AdjointPair {
            original,
            adjoint,
            kind,
        })
    }
}

/// `(e b^T - A, b, e - c)` without the index reversal.
pub fn reflected<S: Scalar>(t: &Tableau<S>) -> Tableau<S> {
    let s = t.stages();
    let b = t.b();
    let a = Matrix::from_fn(s, s, |i, j| b[j].clone() - t.a_ij(i, j).clone());
    let c = t.c().iter().map(|ci| S::one() - ci.clone()).collect();
    Tableau::from_parts(format!("{}-reflected", t.name()), t.kind(), a, b.to_vec(), c)
}

pub fn symmetric_adjoint<S: Scalar>(t: &Tableau<S>) -> Tableau<S> {
    let s = t.stages();
    let rev = |k: usize| s - 1 - k;
    let b = t.b();
    let a = Matrix::from_fn(s, s, |i, j| b[rev(j)].clone() - t.a_ij(rev(i), rev(j)).clone());
    let new_b = (0..s).map(|j| b[rev(j)].clone()).collect();
    let new_c = (0..s).map(|i| S::one() - t.c()[rev(i)].clone()).collect();
    Tableau::from_parts(adjoint_name(t.name(), "*"), t.kind(), a, new_b, new_c)
}

fn check_weights<S: Scalar>(t: &Tableau<S>) -> Result<(), AdjointError> {
    match t.b().iter().position(|x| x.is_negligible(0.0)) {
        Some(i) => Err(AdjointError::ZeroWeight(i + 1)),
        None => Ok(()),
    }
}

fn symplectic_adjoint_matrix<S: Scalar>(t: &Tableau<S>) -> Matrix<S> {
    let b = t.b();
    Matrix::from_fn(t.stages(), t.stages(), |i, j| {
        b[j].clone() * (S::one() - t.a_ij(j, i).clone() / b[i].clone())
    })
}

pub fn symplectic_adjoint<S: Scalar>(t: &Tableau<S>) -> Result<Tableau<S>, AdjointError> {
    check_weights(t)?;
    Ok(Tableau::from_parts(
        adjoint_name(t.name(), "s*"),
        t.kind(),
        symplectic_adjoint_matrix(t),
        t.b().to_vec(),
        t.c().to_vec(),
    ))
}

/// `((A + A*)/2, (b + b*)/2, (c + c*)/2)`.
pub fn average_symmetric<S: Scalar>(t: &Tableau<S>) -> Tableau<S> {
    let adj = symmetric_adjoint(t);
    let half = S::from_ratio(1, 2);
    let avg = |x: &S, y: &S| half.clone() * (x.clone() + y.clone());
    let s = t.stages();
    let a = Matrix::from_fn(s, s, |i, j| avg(t.a_ij(i, j), adj.a_ij(i, j)));
    let b = t.b().iter().zip(adj.b()).map(|(x, y)| avg(x, y)).collect();
    let c = t.c().iter().zip(adj.c()).map(|(x, y)| avg(x, y)).collect();
    Tableau::from_parts(format!("{}-symmetrized", t.name()), t.kind(), a, b, c)
}

/// `((A + A^{s*})/2, b, c)`, which is always symplectic.
pub fn average_symplectic<S: Scalar>(t: &Tableau<S>) -> Result<Tableau<S>, AdjointError> {
    check_weights(t)?;
    let adj = symplectic_adjoint_matrix(t);
    let half = S::from_ratio(1, 2);
    let s = t.stages();
    let a = Matrix::from_fn(s, s, |i, j| half.clone() * (t.a_ij(i, j).clone() + adj[(i, j)].clone()));
    Ok(Tableau::from_parts(
        format!("{}-symplectized", t.name()),
        t.kind(),
        a,
        t.b().to_vec(),
        t.c().to_vec(),
    ))
}

/// Partitioned pair condition: `b_i abar_ij + bbar_j a_ji - b_i bbar_j = 0`
/// and `b_i = bbar_i`, with `t1 = (A, b)` and `t2 = (Abar, bbar)`.
pub fn is_partitioned_symplectic<S: Scalar>(t1: &Tableau<S>, t2: &Tableau<S>) -> Result<bool, AdjointError> {
    is_partitioned_symplectic_tol(t1, t2, crate::DEFAULT_FLOAT_TOL)
}

pub fn is_partitioned_symplectic_tol<S: Scalar>(
    t1: &Tableau<S>,
    t2: &Tableau<S>,
    tol: f64,
) -> Result<bool, AdjointError> {
    let s = t1.stages();
    if t2.stages() != s {
        return Err(AdjointError::StageMismatch(s, t2.stages()));
    }
    let (b, bb) = (t1.b(), t2.b());
    if b.iter()
        .zip(bb)
        .any(|(x, y)| !(x.clone() - y.clone()).is_negligible(tol))
    {
        return Ok(false);
    }
    Ok((0..s).all(|i| {
        (0..s).all(|j| {
            let m = b[i].clone() * t2.a_ij(i, j).clone() + bb[j].clone() * t1.a_ij(j, i).clone()
                - b[i].clone() * bb[j].clone();
            m.is_negligible(tol)
        })
    }))
}

fn adjoint_name(name: &str, suffix: &str) -> String {
    // Applying a transform twice restores the original name.
    let tag = format!("^{suffix}");
    match name.strip_suffix(&tag) {
        Some(base) => base.to_string(),
        None => format!("{name}{tag}"),
    }
}
