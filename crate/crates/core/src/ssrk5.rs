//! Six-stage explicit methods of order five whose symplectic adjoint equals
//! their symmetric adjoint.
//!
//! The family has two free parameters: the second node `c2` in `(0, 1/2)` and
//! `alpha`, which fixes the `z^6` coefficient `alpha/720` of the stability
//! polynomial. Every other coefficient follows in closed form, and the result
//! is checked exactly before it is returned.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::adjoint::{symmetric_adjoint, symplectic_adjoint};
use crate::exactnum::QSqrt5;
use crate::order::{check_d, erk5_residuals};
use crate::stability::stability_function;
use crate::tableau::ExactTableau;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Ssrk5Error {
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    #[serde(serialize_with = "as_string")]
    pub c2: QSqrt5,
    #[serde(serialize_with = "as_string")]
    pub alpha: QSqrt5,
}

fn as_string<S: serde::Serializer>(v: &QSqrt5, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl ConstructionParams {
    pub fn new(c2: QSqrt5, alpha: QSqrt5) -> Self {
        ConstructionParams { c2, alpha }
    }

    /// `alpha = 1/2`.
    pub fn with_c2(c2: QSqrt5) -> Self {
        ConstructionParams::new(c2, QSqrt5::ratio(1, 2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub step: u8,
    pub symbol: String,
    #[serde(serialize_with = "as_string")]
    pub value: QSqrt5,
}

/// Every derived quantity with the construction step that produced it.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConstructionTrace {
    pub entries: Vec<TraceEntry>,
    /// True when the linear fallback replaced the closed-form core entries.
    pub used_fallback: bool,
}

impl ConstructionTrace {
    fn record(&mut self, step: u8, symbol: impl Into<String>, value: &QSqrt5) {
        let symbol = symbol.into();
        self.entries.retain(|e| e.symbol != symbol);
        self.entries.push(TraceEntry {
            step,
            symbol,
            value: value.clone(),
        });
    }

    pub fn get(&self, symbol: &str) -> Option<&QSqrt5> {
        self.entries.iter().find(|e| e.symbol == symbol).map(|e| &e.value)
    }

    /// `{"1": {"c1": "0", ...}, "2": {...}, ...}` with numeric step keys in order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut steps: BTreeMap<u8, serde_json::Map<String, serde_json::Value>> = BTreeMap::new();
        for e in &self.entries {
            steps
                .entry(e.step)
                .or_default()
                .insert(e.symbol.clone(), serde_json::Value::String(e.value.to_string()));
        }
        let mut out = serde_json::Map::new();
        for (k, v) in steps {
            out.insert(k.to_string(), serde_json::Value::Object(v));
        }
        out.insert("fallback".into(), serde_json::Value::Bool(self.used_fallback));
        serde_json::Value::Object(out)
    }
}

fn q(n: i64, d: i64) -> QSqrt5 {
    QSqrt5::ratio(n, d)
}

fn degenerate(reason: impl Into<String>) -> Ssrk5Error {
    Ssrk5Error::DegenerateParameter(reason.into())
}

/// Nodes and weights.
#[derive(Debug, Clone)]
pub struct NodesWeights {
    pub c: [QSqrt5; 6],
    pub b: [QSqrt5; 6],
}

pub fn derive_nodes_weights(p: &ConstructionParams, trace: &mut ConstructionTrace) -> Result<NodesWeights, Ssrk5Error> {
    let c2 = p.c2.clone();
    let half = q(1, 2);
    if !(c2.is_positive() && c2 < half) {
        return Err(degenerate(format!("c2 = {c2} is outside (0, 1/2)")));
    }
    let one = q(1, 1);
    let c3 = &half - &(QSqrt5::sqrt5() / (q(10, 1) * (&one - &(q(2, 1) * c2.clone()))));
    if !(c3.is_positive() && c3 < one) {
        return Err(degenerate(format!("c3 = {c3} is outside (0, 1)")));
    }
    if c3 == c2 || c3 == &one - &c2 || c3 == half {
        return Err(degenerate(format!("c3 = {c3} coincides with c2, 1 - c2 or 1/2")));
    }
    let c4 = &one - &c3;
    let c5 = &one - &c2;
    trace.record(1, "c1", &q(0, 1));
    trace.record(1, "c6", &one);
    trace.record(1, "a21", &c2);
    trace.record(2, "c3", &c3);
    trace.record(2, "c4", &c4);
    trace.record(2, "c5", &c5);

    let den = &c3 * &(&one - &c3) - &c2 * &(&one - &c2);
    if den.is_zero() {
        return Err(degenerate("c3(1 - c3) = c2(1 - c2)"));
    }
    let two = q(2, 1);
    let sq = |x: &QSqrt5| x * x;
    let b2 = -(q(1, 12) * sq(&(&one - &(&two * &c3)))) / den.clone();
    let b3 = q(1, 12) * sq(&(&one - &(&two * &c2))) / den;
    let b1 = q(1, 6);
    for (name, v) in [("b2", &b2), ("b3", &b3)] {
        if v.is_zero() {
            return Err(degenerate(format!("{name} = 0")));
        }
    }
    trace.record(3, "b1", &b1);
    trace.record(3, "b6", &b1);
    trace.record(4, "b2", &b2);
    trace.record(4, "b3", &b3);
    trace.record(4, "b4", &b3);
    trace.record(4, "b5", &b2);
    Ok(NodesWeights {
        c: [q(0, 1), c2.clone(), c3, c4, c5, one],
        b: [b1.clone(), b2.clone(), b3.clone(), b3, b2, b1],
    })
}

/// The four entries that carry the construction; the rest of `A` follows
/// from row sums and the reflection `b_i a_ij = b_j a_(7-j)(7-i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreEntries {
    pub a32: QSqrt5,
    pub a42: QSqrt5,
    pub a43: QSqrt5,
    pub a52: QSqrt5,
}

/// Right-hand sides shared by the closed form and the linear fallback.
#[derive(Debug, Clone)]
pub struct CoreData {
    pub x: QSqrt5,
    pub y: QSqrt5,
    pub d: [QSqrt5; 6],
}

fn core_data(nw: &NodesWeights, trace: &mut ConstructionTrace) -> Result<CoreData, Ssrk5Error> {
    let (b, c) = (&nw.b, &nw.c);
    let one = q(1, 1);
    let d: [QSqrt5; 6] = std::array::from_fn(|j| &b[j] * &(&(&q(1, 2) - &c[j]) + &(&c[j] * &c[j])));
    for (j, dj) in d.iter().enumerate() {
        trace.record(5, format!("D{}", j + 1), dj);
    }
    let w = &one - &(q(2, 1) * c[2].clone());
    if w.is_zero() {
        return Err(degenerate("1 - 2 c3 = 0"));
    }
    let r24 = q(1, 24);
    let y = (&r24 - &(&(&d[1] * &c[1]) + &(&d[2] * &c[2]))) / w.clone();
    let x = (&(&d[2] * &(&one - &c[2])) - &(&r24 - &(&d[1] * &c[1]))) / w;
    if y.is_zero() {
        return Err(degenerate("Y = 0"));
    }
    trace.record(5, "Y", &y);
    trace.record(8, "X", &x);
    Ok(CoreData { x, y, d })
}

pub fn derive_core_entries(
    nw: &NodesWeights,
    p: &ConstructionParams,
    trace: &mut ConstructionTrace,
) -> Result<(CoreData, CoreEntries), Ssrk5Error> {
    let data = core_data(nw, trace)?;
    let (b, c) = (&nw.b, &nw.c);
    let (b2, b3) = (&b[1], &b[2]);
    let (c2, c3) = (&c[1], &c[2]);
    let a32 = data.y.clone() / (b3 * c2);
    let a43 = &p.alpha * b3 / (q(720, 1) * &data.y * &data.y);
    let a42 = (&(data.x.clone() / b3.clone()) - &(&a43 * c3)) / c2.clone();
    let a52 = (&(&(&data.d[1] - &(&(b3 * &(&q(1, 1) - c3)) * &a32)) - &(&(b3 * c3) * &a42))) / (b2 * c2);
    trace.record(6, "a32", &a32);
    trace.record(7, "a43", &a43);
    trace.record(9, "a42", &a42);
    trace.record(11, "a52", &a52);
    Ok((data, CoreEntries { a32, a42, a43, a52 }))
}

/// Solves the four linear relations for `(a32, a42, a43, a52)` by exact
/// Gaussian elimination.
pub fn solve_core_linear(
    nw: &NodesWeights,
    p: &ConstructionParams,
    data: &CoreData,
) -> Result<CoreEntries, Ssrk5Error> {
    let (b, c) = (&nw.b, &nw.c);
    let (b2, b3) = (&b[1], &b[2]);
    let (c2, c3) = (&c[1], &c[2]);
    let z = || q(0, 1);
    let a3 = data.y.clone() / b3.clone();
    let mut m: Vec<Vec<QSqrt5>> = vec![
        vec![b3 * c2, z(), z(), z(), data.y.clone()],
        vec![z(), b3 * c2, b3 * c3, z(), data.x.clone()],
        vec![z(), z(), b3 * &(&a3 * &a3), z(), &p.alpha / &q(720, 1)],
        vec![b3 * &(&q(1, 1) - c3), b3 * c3, z(), b2 * c2, data.d[1].clone()],
    ];
    let n = 4;
    for k in 0..n {
        let piv = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or_else(|| degenerate("singular core system"))?;
        m.swap(k, piv);
        let pivot_row = m[k].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != k && !row[k].is_zero() {
                let f = &row[k] / &pivot_row[k];
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(k) {
                    *x = &*x - &(&f * p);
                }
            }
        }
    }
    let sol: Vec<QSqrt5> = (0..n).map(|k| &m[k][n] / &m[k][k]).collect();
    Ok(CoreEntries {
        a32: sol[0].clone(),
        a42: sol[1].clone(),
        a43: sol[2].clone(),
        a52: sol[3].clone(),
    })
}

/// Fills the remaining entries and returns the strictly lower-triangular `A`.
pub fn complete_last_rows(nw: &NodesWeights, core: &CoreEntries, trace: &mut ConstructionTrace) -> Vec<Vec<QSqrt5>> {
    let (b, c) = (&nw.b, &nw.c);
    let (b1, b2, b3) = (&b[0], &b[1], &b[2]);
    let CoreEntries { a32, a42, a43, a52 } = core;
    let a21 = c[1].clone();
    let a31 = &c[2] - a32;
    let a41 = &(&c[3] - a42) - a43;
    let a53 = b3 * a42 / b2.clone();
    let a54 = b3 * a32 / b2.clone();
    let a51 = &(&(&c[4] - a52) - &a53) - &a54;
    let a65 = b2 * &a21 / b1.clone();
    let a64 = b3 * &a31 / b1.clone();
    let a63 = b3 * &a41 / b1.clone();
    let a62 = b2 * &a51 / b1.clone();
    let a61 = &(&(&(&c[5] - &a62) - &a63) - &a64) - &a65;
    trace.record(6, "a31", &a31);
    trace.record(10, "a41", &a41);
    trace.record(12, "a53", &a53);
    trace.record(12, "a54", &a54);
    trace.record(12, "a51", &a51);
    for (s, v) in [
        ("a65", &a65),
        ("a64", &a64),
        ("a63", &a63),
        ("a62", &a62),
        ("a61", &a61),
    ] {
        trace.record(13, s, v);
    }
    let z = || q(0, 1);
    let a = vec![
        vec![z(), z(), z(), z(), z(), z()],
        vec![a21, z(), z(), z(), z(), z()],
        vec![a31, a32.clone(), z(), z(), z(), z()],
        vec![a41, a42.clone(), a43.clone(), z(), z(), z()],
        vec![a51, a52.clone(), a53, a54, z(), z()],
        vec![a61, a62, a63, a64, a65, z()],
    ];
    // A_i = sum_j a_ij c_j
    for (i, row) in a.iter().enumerate().skip(2) {
        let ai: QSqrt5 = row.iter().zip(c.iter()).map(|(x, cj)| x * cj).sum();
        trace.record(13, format!("A{}", i + 1), &ai);
    }
    a
}

/// Checks the exact postconditions; returns the first violated condition.
pub fn validate(t: &ExactTableau, p: &ConstructionParams) -> Result<(), String> {
    if let Some(r) = erk5_residuals(t, 0.0).into_iter().find(|r| !r.satisfied) {
        return Err(r.condition_id);
    }
    let sym = symmetric_adjoint(t);
    let spl = symplectic_adjoint(t).map_err(|e| e.to_string())?;
    if !spl.same_coefficients(&sym, 0.0) {
        return Err("symplectic adjoint differs from symmetric adjoint".into());
    }
    if let Some(r) = check_d(t, 1).into_iter().find(|r| !r.satisfied) {
        return Err(r.condition_id);
    }
    let num = stability_function(t).numerator;
    let mut fact = 1i64;
    for k in 0..=5 {
        if k > 0 {
            fact *= k as i64;
        }
        if num.coeff(k) != q(1, fact) {
            return Err(format!("R(z) coefficient z^{k}"));
        }
    }
    if num.coeff(6) != &p.alpha / &q(720, 1) {
        return Err("R(z) coefficient z^6".into());
    }
    Ok(())
}

fn build(nw: &NodesWeights, core: &CoreEntries, p: &ConstructionParams, trace: &mut ConstructionTrace) -> ExactTableau {
    let a = complete_last_rows(nw, core, trace);
    ExactTableau::exact(
        format!("ssrk5(c2={}, alpha={})", p.c2, p.alpha),
        a,
        nw.b.to_vec(),
        nw.c.to_vec(),
    )
    .expect("six-stage dimensions")
}

pub fn construct_ssrk5(p: &ConstructionParams) -> Result<(ExactTableau, ConstructionTrace), Ssrk5Error> {
    let mut trace = ConstructionTrace::default();
    let nw = derive_nodes_weights(p, &mut trace)?;
    let (data, core) = derive_core_entries(&nw, p, &mut trace)?;
    let t = build(&nw, &core, p, &mut trace);
    let first = match validate(&t, p) {
        Ok(()) => return Ok((t, trace)),
        Err(e) => e,
    };
    let core = solve_core_linear(&nw, p, &data)?;
    trace.used_fallback = true;
    trace.record(6, "a32", &core.a32);
    trace.record(7, "a43", &core.a43);
    trace.record(9, "a42", &core.a42);
    trace.record(11, "a52", &core.a52);
    let t = build(&nw, &core, p, &mut trace);
    match validate(&t, p) {
        Ok(()) => Ok((t, trace)),
        Err(e) => Err(Ssrk5Error::ValidationFailed(format!("{e} (closed form: {first})"))),
    }
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub params: ConstructionParams,
    pub result: Result<ExactTableau, Ssrk5Error>,
}

/// Runs the constructor at every grid point; failures are kept per point.
pub fn sweep_family(c2_grid: &[QSqrt5], alpha: &QSqrt5) -> Vec<SweepPoint> {
    c2_grid
        .par_iter()
        .map(|c2| {
            let params = ConstructionParams::new(c2.clone(), alpha.clone());
            let result = construct_ssrk5(&params).map(|(t, _)| t);
            SweepPoint { params, result }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::lookup;

    fn sqrt5() -> QSqrt5 {
        QSqrt5::sqrt5()
    }

    fn ex1() -> ConstructionParams {
        // (1 - sqrt5/3)/2
        ConstructionParams::with_c2(QSqrt5::with_sqrt5(1, 2, -1, 6))
    }

    fn ex2() -> ConstructionParams {
        ConstructionParams::with_c2(QSqrt5::with_sqrt5(1, 2, -1, 5))
    }

    fn ex3() -> ConstructionParams {
        ConstructionParams::with_c2(q(1, 4))
    }

    #[test]
    fn nodes_and_weights() {
        let mut tr = ConstructionTrace::default();
        let nw = derive_nodes_weights(&ex1(), &mut tr).unwrap();
        assert_eq!(nw.c[2], q(1, 5));
        assert_eq!(nw.b[1], q(-81, 132));
        assert_eq!(nw.b[2], q(125, 132));
        let nw = derive_nodes_weights(&ex2(), &mut tr).unwrap();
        assert_eq!(nw.c[2], q(1, 4));
        assert_eq!((nw.b[1].clone(), nw.b[2].clone()), (q(-5, 33), q(16, 33)));
        let nw = derive_nodes_weights(&ex3(), &mut tr).unwrap();
        assert_eq!(nw.c[2], QSqrt5::with_sqrt5(1, 2, -1, 5));
        assert_eq!((nw.b[1].clone(), nw.b[2].clone()), (q(16, 33), q(-5, 33)));
    }

    #[test]
    fn core_entries() {
        let cases = [
            (ex1(), q(3, 50) * (q(4, 1) - sqrt5())),
            (ex2(), (q(7, 1) + sqrt5()) / q(16, 1)),
            (ex3(), (q(9, 1) - q(5, 1) * sqrt5()) / q(10, 1)),
        ];
        for (p, a32) in cases {
            let mut tr = ConstructionTrace::default();
            let nw = derive_nodes_weights(&p, &mut tr).unwrap();
            let (data, core) = derive_core_entries(&nw, &p, &mut tr).unwrap();
            assert_eq!(core.a32, a32);
            assert_eq!(solve_core_linear(&nw, &p, &data).unwrap(), core);
        }
    }

    #[test]
    fn reproduces_examples_entry_for_entry() {
        for (p, key) in [(ex1(), "example-4.1"), (ex2(), "example-4.2"), (ex3(), "example-4.3")] {
            let (t, trace) = construct_ssrk5(&p).unwrap();
            let printed = lookup(key).unwrap().tableau;
            assert!(t.same_coefficients(&printed, 0.0), "{key}");
            assert!(!trace.used_fallback);
        }
    }

    #[test]
    fn last_row_entries() {
        let (t, _) = construct_ssrk5(&ex1()).unwrap();
        assert_eq!(t.a_ij(5, 4), &(q(-27, 44) * (q(3, 1) - sqrt5())));
        let (t, _) = construct_ssrk5(&ex3()).unwrap();
        assert_eq!(t.a_ij(5, 4), &q(8, 11));
        let row: QSqrt5 = t.a().row(5).iter().cloned().sum();
        assert_eq!(row, q(1, 1));
    }

    #[test]
    fn degenerate_parameters() {
        for c2 in [q(0, 1), q(1, 2), q(3, 8), q(-1, 4)] {
            let err = construct_ssrk5(&ConstructionParams::with_c2(c2.clone())).unwrap_err();
            assert!(matches!(err, Ssrk5Error::DegenerateParameter(_)), "{c2}: {err}");
        }
    }

    #[test]
    fn alpha_sets_sixth_coefficient() {
        let p = ConstructionParams::new(q(1, 4), q(1, 1));
        let (t, _) = construct_ssrk5(&p).unwrap();
        assert_eq!(stability_function(&t).numerator.coeff(6), q(1, 720));
    }

    #[test]
    fn sweep_reports_each_point() {
        let pts = sweep_family(&[q(1, 8), q(1, 4), q(3, 8)], &q(1, 2));
        assert!(pts[0].result.is_ok());
        assert!(pts[1].result.is_ok());
        assert!(matches!(pts[2].result, Err(Ssrk5Error::DegenerateParameter(_))));
    }

    #[test]
    fn trace_json_keyed_by_step() {
        let (_, trace) = construct_ssrk5(&ex2()).unwrap();
        let j = trace.to_json();
        assert_eq!(j["2"]["c3"], "1/4");
        assert_eq!(
            j["6"]["a32"].as_str().unwrap(),
            (q(7, 16) + q(1, 16) * sqrt5()).to_string()
        );
        assert!(j["13"]["A3"].is_string());
        assert_eq!(trace.get("b2"), Some(&q(-5, 33)));
    }
}
