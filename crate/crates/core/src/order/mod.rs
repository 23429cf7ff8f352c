//! Order conditions: the simplifying assumptions `B(p)`, `C(eta)`, `D(zeta)`
//! and the full set of rooted-tree conditions.

pub mod erk5;
mod trees;
mod weights;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;
use crate::tableau::Tableau;

pub use erk5::{erk5_residuals, t620_weight};
pub use trees::{enumerate_trees, RootedTree, MAX_TREE_ORDER};
pub use weights::{
    detect_order, detect_order_tol, elementary_weight, tree_conditions, ElementaryWeights, FLOAT_RESIDUAL_TOL,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("tree order {requested} exceeds the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("tableau is not symplectic")]
    NotSymplectic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: std::fmt::Display"))]
pub struct ResidualReport<S> {
    pub condition_id: String,
    #[serde(serialize_with = "ser_display")]
    pub residual: S,
    pub satisfied: bool,
}

fn ser_display<S: std::fmt::Display, Z: serde::Serializer>(v: &S, s: Z) -> Result<Z::Ok, Z::Error> {
    s.collect_str(v)
}

impl<S: Scalar> ResidualReport<S> {
    pub fn new(condition_id: impl Into<String>, residual: S, tol: f64) -> Self {
        let satisfied = residual.is_negligible(tol);
        ResidualReport {
            condition_id: condition_id.into(),
            residual,
            satisfied,
        }
    }
}

pub fn all_satisfied<S>(reports: &[ResidualReport<S>]) -> bool {
    reports.iter().all(|r| r.satisfied)
}

fn pow<S: Scalar>(x: &S, k: usize) -> S {
    (0..k).fold(S::one(), |acc, _| acc * x.clone())
}

/// `sum_i b_i c_i^(k-1) - 1/k`.
pub fn b_residual<S: Scalar>(t: &Tableau<S>, k: usize) -> S {
    let sum = t
        .b()
        .iter()
        .zip(t.c())
        .fold(S::zero(), |acc, (b, c)| acc + b.clone() * pow(c, k - 1));
    sum - S::from_ratio(1, k as i64)
}

/// `C(k)_i = sum_j a_ij c_j^(k-1) - c_i^k / k` for every stage `i`.
pub fn c_residuals<S: Scalar>(t: &Tableau<S>, k: usize) -> Vec<S> {
    let s = t.stages();
    let c = t.c();
    (0..s)
        .map(|i| {
            let sum = (0..s).fold(S::zero(), |acc, j| acc + t.a_ij(i, j).clone() * pow(&c[j], k - 1));
            sum - pow(&c[i], k) / S::from_int(k as i64)
        })
        .collect()
}

/// `D(k)_j = sum_i b_i c_i^(k-1) a_ij - b_j (1 - c_j^k) / k` for every stage `j`.
pub fn d_residuals<S: Scalar>(t: &Tableau<S>, k: usize) -> Vec<S> {
    let s = t.stages();
    let (b, c) = (t.b(), t.c());
    (0..s)
        .map(|j| {
            let sum = (0..s).fold(S::zero(), |acc, i| {
                acc + b[i].clone() * pow(&c[i], k - 1) * t.a_ij(i, j).clone()
            });
            sum - b[j].clone() * (S::one() - pow(&c[j], k)) / S::from_int(k as i64)
        })
        .collect()
}

fn default_tol<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        FLOAT_RESIDUAL_TOL
    }
}

pub fn check_b<S: Scalar>(t: &Tableau<S>, p: usize) -> Vec<ResidualReport<S>> {
    check_b_tol(t, p, default_tol::<S>())
}

pub fn check_b_tol<S: Scalar>(t: &Tableau<S>, p: usize, tol: f64) -> Vec<ResidualReport<S>> {
    (1..=p)
        .map(|k| ResidualReport::new(format!("B({k})"), b_residual(t, k), tol))
        .collect()
}

pub fn check_c<S: Scalar>(t: &Tableau<S>, eta: usize) -> Vec<ResidualReport<S>> {
    check_c_tol(t, eta, default_tol::<S>())
}

pub fn check_c_tol<S: Scalar>(t: &Tableau<S>, eta: usize, tol: f64) -> Vec<ResidualReport<S>> {
    (1..=eta)
        .flat_map(|k| {
            c_residuals(t, k)
                .into_iter()
                .enumerate()
                .map(move |(i, r)| ResidualReport::new(format!("C({k})_{}", i + 1), r, tol))
        })
        .collect()
}

pub fn check_d<S: Scalar>(t: &Tableau<S>, zeta: usize) -> Vec<ResidualReport<S>> {
    check_d_tol(t, zeta, default_tol::<S>())
}

pub fn check_d_tol<S: Scalar>(t: &Tableau<S>, zeta: usize, tol: f64) -> Vec<ResidualReport<S>> {
    (1..=zeta)
        .flat_map(|k| {
            d_residuals(t, k)
                .into_iter()
                .enumerate()
                .map(move |(j, r)| ResidualReport::new(format!("D({k})_{}", j + 1), r, tol))
        })
        .collect()
}

/// `B(p)`, `C(eta)` and `D(zeta)` hold with `p <= eta + zeta + 1` and
/// `p <= 2 eta + 2`, which together guarantee order `p`.
pub fn sufficient_order_simplified<S: Scalar>(t: &Tableau<S>, p: usize, eta: usize, zeta: usize) -> bool {
    p <= eta + zeta + 1
        && p <= 2 * eta + 2
        && all_satisfied(&check_b(t, p))
        && all_satisfied(&check_c(t, eta))
        && all_satisfied(&check_d(t, zeta))
}

/// For a symplectic tableau, `B(p)` with either `C(eta)` or `D(eta)` and
/// `p <= 2 eta + 1` guarantees order `p`.
pub fn sufficient_order_symplectic<S: Scalar>(t: &Tableau<S>, p: usize, eta: usize) -> Result<bool, OrderError> {
    if !t.is_symplectic_tol(default_tol::<S>()) {
        return Err(OrderError::NotSymplectic);
    }
    Ok(p <= 2 * eta + 1
        && all_satisfied(&check_b(t, p))
        && (all_satisfied(&check_c(t, eta)) || all_satisfied(&check_d(t, eta))))
}

/// `(sum_i b_i C(q)_i, sum_j D(r)_j)`.
pub fn prop21_identities<S: Scalar>(t: &Tableau<S>, q: usize, r: usize) -> (S, S) {
    let first = t
        .b()
        .iter()
        .zip(c_residuals(t, q))
        .fold(S::zero(), |acc, (b, cq)| acc + b.clone() * cq);
    let second = d_residuals(t, r).into_iter().fold(S::zero(), |acc, d| acc + d);
    (first, second)
}

/// CSV with columns `condition_id,residual,residual_exact,satisfied`; the
/// second column is the nearest binary64 and the third the exact value.
pub fn reports_to_csv<S: Scalar>(reports: &[ResidualReport<S>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["condition_id", "residual", "residual_exact", "satisfied"])
        .expect("in-memory write");
    for r in reports {
        w.write_record([
            r.condition_id.clone(),
            format!("{:e}", r.residual.approx_f64()),
            r.residual.to_string(),
            r.satisfied.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
