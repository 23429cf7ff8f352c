//! Fixed-step Runge-Kutta integration in binary64 and empirical order
//! measurement.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::tableau::FloatTableau;

/// Stage residual target for implicit tableaux (infinity norm).
pub const FIXED_POINT_TOL: f64 = 1e-14;
pub const FIXED_POINT_MAX_ITER: usize = 100;
/// Relative slack when checking that `(T - t0)/h` is an integer.
pub const STEP_COUNT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    #[error("fixed-point stage iteration did not converge after {iterations} iterations (residual {residual:e})")]
    FixedPointDivergence { iterations: usize, residual: f64 },
    #[error("(T - t0)/h = {ratio} is not a positive integer")]
    StepCountMismatch { ratio: f64 },
    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("singular state: {0}")]
    SingularState(String),
    #[error("problem has no exact solution")]
    NoExactSolution,
}

pub type Rhs = Box<dyn Fn(f64, &[f64]) -> Result<Vec<f64>, IntegrateError> + Send + Sync>;
pub type Exact = Box<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

pub struct OdeProblem {
    pub name: String,
    pub dimension: usize,
    pub rhs: Rhs,
    pub initial_time: f64,
    pub initial_state: Vec<f64>,
    pub exact_solution: Option<Exact>,
}

impl OdeProblem {
    pub fn new(
        name: impl Into<String>,
        initial_time: f64,
        initial_state: Vec<f64>,
        rhs: impl Fn(f64, &[f64]) -> Result<Vec<f64>, IntegrateError> + Send + Sync + 'static,
    ) -> Self {
        OdeProblem {
            name: name.into(),
            dimension: initial_state.len(),
            rhs: Box::new(rhs),
            initial_time,
            initial_state,
            exact_solution: None,
        }
    }

    pub fn with_exact(mut self, exact: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.exact_solution = Some(Box::new(exact));
        self
    }

    pub fn eval(&self, t: f64, y: &[f64]) -> Result<Vec<f64>, IntegrateError> {
        let f = (self.rhs)(t, y)?;
        if f.len() != self.dimension {
            return Err(IntegrateError::DimensionMismatch(f.len(), self.dimension));
        }
        Ok(f)
    }

    pub fn exact(&self, t: f64) -> Result<Vec<f64>, IntegrateError> {
        self.exact_solution
            .as_ref()
            .map(|e| e(t))
            .ok_or(IntegrateError::NoExactSolution)
    }
}

/// Two-body problem on the unit circle: `y = (q1, q2, p1, p2)`.
pub fn kepler_problem() -> OdeProblem {
    OdeProblem::new("kepler", 0.0, vec![1.0, 0.0, 0.0, 1.0], |_, y| {
        let r2 = y[0] * y[0] + y[1] * y[1];
        if r2 == 0.0 {
            return Err(IntegrateError::SingularState("q1^2 + q2^2 = 0".into()));
        }
        let r3 = r2 * r2.sqrt();
        Ok(vec![y[2], y[3], -y[0] / r3, -y[1] / r3])
    })
    .with_exact(|t| vec![t.cos(), t.sin(), -t.sin(), t.cos()])
}

/// `y' = lambda y`, `y(0) = 1`.
pub fn linear_problem(lambda: f64) -> OdeProblem {
    OdeProblem::new(format!("linear({lambda})"), 0.0, vec![1.0], move |_, y| {
        Ok(vec![lambda * y[0]])
    })
    .with_exact(move |t| vec![(lambda * t).exp()])
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

fn stage_state(t: &FloatTableau, i: usize, yn: &[f64], h: f64, k: &[Vec<f64>], upto: usize) -> Vec<f64> {
    (0..yn.len())
        .map(|d| {
            let mut acc = Compensated::default();
            for (j, kj) in k.iter().enumerate().take(upto) {
                let a = *t.a_ij(i, j);
                if a != 0.0 {
                    acc.add(a * kj[d]);
                }
            }
            yn[d] + h * acc.value()
        })
        .collect()
}

/// One step `y_(n+1) = y_n + h sum_i b_i k_i`.
pub fn rk_step(
    t: &FloatTableau,
    problem: &OdeProblem,
    tn: f64,
    yn: &[f64],
    h: f64,
) -> Result<Vec<f64>, IntegrateError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(IntegrateError::InvalidStep(h));
    }
    if yn.len() != problem.dimension {
        return Err(IntegrateError::DimensionMismatch(yn.len(), problem.dimension));
    }
    let s = t.stages();
    let c = t.c();
    let k = if t.is_explicit() {
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(s);
        for (i, ci) in c.iter().enumerate() {
            let yi = stage_state(t, i, yn, h, &k, i);
            k.push(problem.eval(tn + ci * h, &yi)?);
        }
        k
    } else {
        implicit_stages(t, problem, tn, yn, h)?
    };
    Ok((0..yn.len())
        .map(|d| {
            let mut acc = Compensated::default();
            for (bi, ki) in t.b().iter().zip(&k) {
                acc.add(bi * ki[d]);
            }
            yn[d] + h * acc.value()
        })
        .collect())
}

fn implicit_stages(
    t: &FloatTableau,
    problem: &OdeProblem,
    tn: f64,
    yn: &[f64],
    h: f64,
) -> Result<Vec<Vec<f64>>, IntegrateError> {
    let s = t.stages();
    let c = t.c();
    let f0 = problem.eval(tn, yn)?;
    let mut k = vec![f0; s];
    let mut residual = f64::INFINITY;
    for _ in 0..FIXED_POINT_MAX_ITER {
        let next = (0..s)
            .map(|i| {
                let yi = stage_state(t, i, yn, h, &k, s);
                problem.eval(tn + c[i] * h, &yi)
            })
            .collect::<Result<Vec<_>, _>>()?;
        residual = next
            .iter()
            .zip(&k)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        k = next;
        if residual <= FIXED_POINT_TOL {
            return Ok(k);
        }
        if !residual.is_finite() {
            break;
        }
    }
    Err(IntegrateError::FixedPointDivergence {
        iterations: FIXED_POINT_MAX_ITER,
        residual,
    })
}

/// Number of steps `M = (T - t0)/h`, required to be a positive integer.
pub fn step_count(t0: f64, t_end: f64, h: f64) -> Result<usize, IntegrateError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(IntegrateError::InvalidStep(h));
    }
    let ratio = (t_end - t0) / h;
    let m = ratio.round();
    if m < 1.0 || (ratio - m).abs() > STEP_COUNT_TOL * m.max(1.0) {
        return Err(IntegrateError::StepCountMismatch { ratio });
    }
    Ok(m as usize)
}

/// `M` steps from the initial state; step `n` starts at `t0 + n h`.
pub fn integrate(t: &FloatTableau, problem: &OdeProblem, h: f64, t_end: f64) -> Result<Vec<f64>, IntegrateError> {
    let m = step_count(problem.initial_time, t_end, h)?;
    let mut y = problem.initial_state.clone();
    for n in 0..m {
        y = rk_step(t, problem, problem.initial_time + n as f64 * h, &y, h)?;
    }
    Ok(y)
}

pub fn error_norm(numeric: &[f64], exact: &[f64]) -> Result<f64, IntegrateError> {
    if numeric.len() != exact.len() {
        return Err(IntegrateError::DimensionMismatch(numeric.len(), exact.len()));
    }
    Ok(numeric
        .iter()
        .zip(exact)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub error: f64,
    pub order: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub method: String,
    pub problem: String,
    pub final_time: f64,
    pub rows: Vec<ConvergenceRow>,
}

/// Errors at `h0, h0/2, ...` and the orders `log2(e(h)/e(h/2))`. The runs
/// are independent and execute in parallel.
pub fn convergence_study(
    t: &FloatTableau,
    problem: &OdeProblem,
    h0: f64,
    halvings: usize,
    t_end: f64,
) -> Result<ConvergenceReport, IntegrateError> {
    let exact = problem.exact(t_end)?;
    let hs: Vec<f64> = (0..=halvings).map(|k| h0 / (1u64 << k) as f64).collect();
    let errors = hs
        .par_iter()
        .map(|&h| integrate(t, problem, h, t_end).and_then(|y| error_norm(&y, &exact)))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = hs
        .iter()
        .zip(&errors)
        .enumerate()
        .map(|(k, (&h, &error))| ConvergenceRow {
            h,
            error,
            order: (k > 0).then(|| (errors[k - 1] / error).log2()),
        })
        .collect();
    Ok(ConvergenceReport {
        method: t.name().to_string(),
        problem: problem.name.clone(),
        final_time: t_end,
        rows,
    })
}

/// Scientific notation with at least two exponent digits, e.g. `1.552315e-06`.
pub fn sci(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$e}");
    match s.split_once('e') {
        Some((m, e)) => {
            let (sign, e) = e.strip_prefix('-').map_or(("+", e), |e| ("-", e));
            format!("{m}e{sign}{e:0>2}")
        }
        None => s,
    }
}

impl ConvergenceReport {
    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,error,order\n");
        for r in &self.rows {
            let order = r.order.map(|o| format!("{o:.6}")).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", r.h, sci(r.error, 6), order));
        }
        out
    }

    /// `h | error | order` with orders to two decimals.
    pub fn to_table(&self) -> String {
        let mut out = format!("{} on {} at T = {}\n", self.method, self.problem, self.final_time);
        out.push_str(&format!("{:<10} {:>14} {:>7}\n", "h", "error", "order"));
        for r in &self.rows {
            let order = r.order.map(|o| format!("{o:.2}")).unwrap_or_else(|| "-".into());
            out.push_str(&format!("{:<10} {:>14} {:>7}\n", r.h, sci(r.error, 6), order));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::lookup;

    fn float(key: &str) -> FloatTableau {
        lookup(key).unwrap().tableau.to_float().unwrap()
    }

    #[test]
    fn single_steps() {
        let p = linear_problem(-1.0);
        assert_eq!(rk_step(&float("euler"), &p, 0.0, &[1.0], 0.1).unwrap(), vec![0.9]);
        let ie = rk_step(&float("implicit-euler"), &p, 0.0, &[1.0], 0.1).unwrap()[0];
        assert!((ie - 1.0 / 1.1).abs() < 1e-14);
        let up = linear_problem(1.0);
        let rk4 = rk_step(&float("rk4"), &up, 0.0, &[1.0], 0.1).unwrap()[0];
        let expect = 1.0 + 0.1 + 0.01 / 2.0 + 0.001 / 6.0 + 0.0001 / 24.0;
        assert!((rk4 - expect).abs() < 1e-15);
    }

    #[test]
    fn kepler_setup() {
        let k = kepler_problem();
        assert_eq!(k.eval(0.0, &[1.0, 0.0, 0.0, 1.0]).unwrap(), vec![0.0, 1.0, -1.0, 0.0]);
        assert_eq!(k.exact(0.0).unwrap(), vec![1.0, 0.0, 0.0, 1.0]);
        let q = k.exact(std::f64::consts::FRAC_PI_2).unwrap();
        for (a, b) in q.iter().zip([0.0, 1.0, -1.0, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(matches!(
            k.eval(0.0, &[0.0, 0.0, 1.0, 1.0]),
            Err(IntegrateError::SingularState(_))
        ));
    }

    #[test]
    fn whole_runs() {
        let y = integrate(&float("euler"), &linear_problem(-1.0), 0.5, 1.0).unwrap();
        assert_eq!(y, vec![0.25]);
        assert!(matches!(
            integrate(&float("euler"), &linear_problem(-1.0), 0.3, 1.0),
            Err(IntegrateError::StepCountMismatch { .. })
        ));
        assert!(integrate(&float("euler"), &linear_problem(-1.0), -0.1, 1.0).is_err());
    }

    #[test]
    fn norms() {
        assert_eq!(error_norm(&[1.0, 0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(error_norm(&[1.0, 0.0], &[0.0, 0.0]).unwrap(), 1.0);
        assert!(error_norm(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn rk4_converges_at_order_four() {
        let rep = convergence_study(&float("rk4"), &linear_problem(-1.0), 0.1, 3, 1.0).unwrap();
        for o in rep.orders() {
            assert!((o - 4.0).abs() < 0.1, "{o}");
        }
        assert!(rep.to_csv().starts_with("h,error,order\n0.1,"));
        assert!(rep.to_table().lines().count() == 6);
    }

    #[test]
    fn divergent_fixed_point_reported() {
        let p = linear_problem(-50.0);
        let err = rk_step(&float("implicit-euler"), &p, 0.0, &[1.0], 1.0).unwrap_err();
        assert!(matches!(err, IntegrateError::FixedPointDivergence { .. }));
    }

    #[test]
    fn scientific_format() {
        assert_eq!(sci(1.552315e-6, 6), "1.552315e-06");
        assert_eq!(sci(4.190162e-14, 6), "4.190162e-14");
        assert_eq!(sci(12.5, 1), "1.2e+01");
    }

    #[test]
    fn compensated_sum() {
        let mut c = Compensated::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            c.add(x);
        }
        assert_eq!(c.value(), 2.0);
    }
}
