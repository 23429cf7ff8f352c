//! Linear stability: the rational stability function of a tableau and the
//! predicates built on it.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::adjoint::{symplectic_adjoint, AdjointError};
use crate::poly::{bareiss_determinant, eval_complex, Poly};
use crate::scalar::Scalar;
use crate::tableau::Tableau;

/// Slack allowed on `|R(iy)| <= 1` by the boundary scan.
pub const BOUNDARY_SLACK: f64 = 1e-9;
/// Eigenvalue floor for the float semidefiniteness test.
pub const EIGEN_FLOOR: f64 = -1e-10;
pub const BOUNDARY_POINTS: usize = 10_000;
pub const MAX_REGION_SIDE: usize = 4096;

#[derive(Clone, PartialEq)]
pub struct StabilityFunction<S> {
    pub numerator: Poly<S>,
    pub denominator: Poly<S>,
}

impl<S: Scalar> std::fmt::Debug for StabilityFunction<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

impl<S: Scalar> std::fmt::Display for StabilityFunction<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `R(z) = det(I + z(e b^T - A)) / det(I - z A)`.
pub fn stability_function<S: Scalar>(t: &Tableau<S>) -> StabilityFunction<S> {
    let s = t.stages();
    let b = t.b();
    let delta = |i: usize, j: usize| if i == j { S::one() } else { S::zero() };
    let num = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| Poly::linear(delta(i, j), b[j].clone() - t.a_ij(i, j).clone()))
                .collect()
        })
        .collect();
    let den = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| Poly::linear(delta(i, j), -t.a_ij(i, j).clone()))
                .collect()
        })
        .collect();
    StabilityFunction {
        numerator: bareiss_determinant(num),
        denominator: bareiss_determinant(den),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AStabilityCertificate {
    pub a_stable: bool,
    /// Poles that survive cancellation with the numerator, as `(re, im)`.
    pub poles: Vec<(f64, f64)>,
    pub poles_in_right_half_plane: bool,
    pub worst_boundary_value: f64,
    pub worst_boundary_y: f64,
    pub boundary_points: usize,
}

impl<S: Scalar> StabilityFunction<S> {
    /// Common factors removed (exact kinds); both constant terms stay 1.
    pub fn reduced(&self) -> Self {
        if !S::EXACT {
            return self.clone();
        }
        let g = self.numerator.gcd(&self.denominator);
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        StabilityFunction {
            numerator: self.numerator.div_rem(&g).0,
            denominator: self.denominator.div_rem(&g).0,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.reduced().denominator.degree() == Some(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        eval_complex(&self.numerator.to_f64(), z) / eval_complex(&self.denominator.to_f64(), z)
    }

    /// `|R(z)|`, or `+inf` at a pole.
    pub fn abs_at(&self, z: Complex64) -> f64 {
        abs_ratio(&self.numerator.to_f64(), &self.denominator.to_f64(), z)
    }

    /// Leading Taylor coefficients of `R` around zero.
    pub fn taylor(&self, n: usize) -> Vec<S> {
        let den0 = self.denominator.coeff(0);
        let mut out: Vec<S> = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = self.numerator.coeff(k);
            for j in 1..=k {
                v = v - self.denominator.coeff(j) * out[k - j].clone();
            }
            out.push(v / den0.clone());
        }
        out
    }

    /// Roots of the reduced denominator.
    pub fn poles(&self) -> Vec<Complex64> {
        let r = self.reduced();
        let den = r.denominator.to_f64();
        let num = r.numerator.to_f64();
        let roots = polynomial_roots(&den);
        if S::EXACT {
            return roots;
        }
        // floats: drop poles that the numerator cancels numerically
        roots
            .into_iter()
            .filter(|&z| eval_complex(&num, z).norm() > 1e-8 * (1.0 + z.norm()).powi(den.len() as i32))
            .collect()
    }

    pub fn a_stability(&self) -> AStabilityCertificate {
        let poles = self.poles();
        let poles_ok = poles.iter().all(|p| p.re > 0.0);
        let num = self.numerator.to_f64();
        let den = self.denominator.to_f64();
        let (lo, hi) = (1e-3f64.ln(), 1e6f64.ln());
        let mut worst = (abs_ratio(&num, &den, Complex64::new(0.0, 0.0)), 0.0);
        for k in 0..BOUNDARY_POINTS {
            let y = (lo + (hi - lo) * k as f64 / (BOUNDARY_POINTS - 1) as f64).exp();
            for yy in [y, -y] {
                let v = abs_ratio(&num, &den, Complex64::new(0.0, yy));
                if v.is_nan() || v > worst.0 {
                    worst = (if v.is_nan() { f64::INFINITY } else { v }, yy);
                }
            }
        }
        AStabilityCertificate {
            a_stable: poles_ok && worst.0 <= 1.0 + BOUNDARY_SLACK,
            poles: poles.iter().map(|p| (p.re, p.im)).collect(),
            poles_in_right_half_plane: poles_ok,
            worst_boundary_value: worst.0,
            worst_boundary_y: worst.1,
            boundary_points: 2 * BOUNDARY_POINTS + 1,
        }
    }

    pub fn is_a_stable(&self) -> bool {
        self.a_stability().a_stable
    }

    /// A-stable with `R(z) -> 0` as `|z| -> inf`.
    pub fn is_l_stable(&self) -> bool {
        let r = self.reduced();
        let tol = if S::EXACT { 0.0 } else { 1e-12 };
        let dn = r.numerator.degree_tol(tol);
        let dd = r.denominator.degree_tol(tol).unwrap_or(0);
        let vanishes = match dn {
            None => true,
            Some(n) => n < dd,
        };
        vanishes && self.is_a_stable()
    }

    /// `R(z) R(-z) = 1` as rational functions.
    pub fn is_stability_symmetric(&self) -> bool {
        self.is_stability_symmetric_tol(default_tol::<S>())
    }

    pub fn is_stability_symmetric_tol(&self, tol: f64) -> bool {
        let lhs = self.numerator.clone() * self.numerator.reflect();
        let rhs = self.denominator.clone() * self.denominator.reflect();
        lhs.approx_eq(&rhs, tol)
    }

    /// `self(z) = other(-z)^(-1)`, cross-multiplied.
    pub fn is_reflected_inverse_of(&self, other: &Self, tol: f64) -> bool {
        let lhs = self.numerator.clone() * other.numerator.reflect();
        let rhs = self.denominator.clone() * other.denominator.reflect();
        lhs.approx_eq(&rhs, tol)
    }
}

fn default_tol<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        1e-12
    }
}

fn abs_ratio(num: &[f64], den: &[f64], z: Complex64) -> f64 {
    let d = eval_complex(den, z).norm();
    let n = eval_complex(num, z).norm();
    if d == 0.0 {
        return f64::INFINITY;
    }
    n / d
}

/// Complex roots of `sum c_k z^k` from the eigenvalues of the companion
/// matrix, each refined by a few Newton steps.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let deg = match coeffs.iter().rposition(|&c| c != 0.0) {
        Some(d) if d > 0 => d,
        _ => return Vec::new(),
    };
    let lead = coeffs[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let p = &coeffs[..=deg];
    let dp: Vec<f64> = (1..=deg).map(|k| k as f64 * p[k]).collect();
    comp.complex_eigenvalues()
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let d = eval_complex(&dp, z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = eval_complex(p, z) / d;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}

pub fn is_a_stable<S: Scalar>(r: &StabilityFunction<S>) -> bool {
    r.is_a_stable()
}

pub fn is_l_stable<S: Scalar>(r: &StabilityFunction<S>) -> bool {
    r.is_l_stable()
}

pub fn is_stability_symmetric<S: Scalar>(r: &StabilityFunction<S>) -> bool {
    r.is_stability_symmetric()
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraicStability {
    pub weights_nonnegative: bool,
    pub m_positive_semidefinite: bool,
    /// Diagnostic only: every entry of `M` is `>= 0`.
    pub m_entrywise_nonnegative: bool,
    pub algebraically_stable: bool,
}

/// `b_i >= 0` and `M = (b_i a_ij + b_j a_ji - b_i b_j)` positive
/// semidefinite. Exact kinds test every principal minor; floats test the
/// eigenvalues against [`EIGEN_FLOOR`].
pub fn algebraic_stability<S: Scalar>(t: &Tableau<S>) -> AlgebraicStability {
    let tol = default_tol::<S>();
    let m = t.symplecticity_matrix();
    let s = t.stages();
    let weights_nonnegative = t.b().iter().all(|b| b.sign(tol) != std::cmp::Ordering::Less);
    let m_entrywise_nonnegative = m.iter().all(|x| x.sign(tol) != std::cmp::Ordering::Less);
    let m_positive_semidefinite = if S::EXACT {
        (1u32..(1 << s)).all(|mask| {
            let idx: Vec<usize> = (0..s).filter(|i| mask & (1 << i) != 0).collect();
            m.principal_submatrix(&idx).determinant(0.0).sign(0.0) != std::cmp::Ordering::Less
        })
    } else {
        let dm = DMatrix::from_fn(s, s, |i, j| m[(i, j)].approx_f64());
        SymmetricEigen::new(dm).eigenvalues.iter().all(|&l| l >= EIGEN_FLOOR)
    };
    AlgebraicStability {
        weights_nonnegative,
        m_positive_semidefinite,
        m_entrywise_nonnegative,
        algebraically_stable: weights_nonnegative && m_positive_semidefinite,
    }
}

pub fn is_algebraically_stable<S: Scalar>(t: &Tableau<S>) -> bool {
    algebraic_stability(t).algebraically_stable
}

/// The stability function of the symplectic adjoint equals `R(-z)^(-1)`.
pub fn adjoint_stability_identity<S: Scalar>(t: &Tableau<S>) -> Result<bool, AdjointError> {
    let adj = symplectic_adjoint(t)?;
    let r = stability_function(t);
    let rs = stability_function(&adj);
    Ok(rs.is_reflected_inverse_of(&r, default_tol::<S>()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub x: f64,
    pub y: f64,
    pub abs_r: f64,
    pub inside: bool,
}

#[derive(Debug, Clone)]
pub struct RegionSample {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    /// Row-major: `y` outer (ascending), `x` inner (ascending).
    pub points: Vec<RegionPoint>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RegionError {
    #[error("grid {0}x{1} outside 2..=4096 per side")]
    Resolution(usize, usize),
    #[error("empty or inverted window")]
    Window,
}

fn grid(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    lo + (hi - lo) * k as f64 / (n - 1) as f64
}

pub fn sample_region<S: Scalar>(
    r: &StabilityFunction<S>,
    window: Window,
    nx: usize,
    ny: usize,
) -> Result<RegionSample, RegionError> {
    if !(2..=MAX_REGION_SIDE).contains(&nx) || !(2..=MAX_REGION_SIDE).contains(&ny) {
        return Err(RegionError::Resolution(nx, ny));
    }
    if !(window.x_min < window.x_max && window.y_min < window.y_max) {
        return Err(RegionError::Window);
    }
    let num = r.numerator.to_f64();
    let den = r.denominator.to_f64();
    let points = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let x = grid(window.x_min, window.x_max, nx, k % nx);
            let y = grid(window.y_min, window.y_max, ny, k / nx);
            let abs_r = abs_ratio(&num, &den, Complex64::new(x, y));
            RegionPoint {
                x,
                y,
                abs_r,
                inside: abs_r <= 1.0,
            }
        })
        .collect();
    Ok(RegionSample { window, nx, ny, points })
}

impl RegionSample {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,abs_r,inside\n");
        for p in &self.points {
            let abs = if p.abs_r.is_finite() {
                format!("{}", p.abs_r)
            } else {
                "inf".into()
            };
            out.push_str(&format!("{},{},{},{}\n", p.x, p.y, abs, u8::from(p.inside)));
        }
        out
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        let v = self.points[j * self.nx + i].abs_r;
        if v.is_finite() {
            v
        } else {
            1e300
        }
    }

    /// Inside cells filled, plus the `|R| = 1` level line from marching squares.
    /// SVG `y` points down, so rows are flipped.
    pub fn to_svg(&self) -> String {
        let w = self.window;
        let (dx, dy) = (
            (w.x_max - w.x_min) / (self.nx - 1) as f64,
            (w.y_max - w.y_min) / (self.ny - 1) as f64,
        );
        let sy = |y: f64| w.y_max + w.y_min - y;
        let mut fill = String::new();
        for j in 0..self.ny {
            let mut i = 0;
            while i < self.nx {
                if !self.points[j * self.nx + i].inside {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < self.nx && self.points[j * self.nx + i].inside {
                    i += 1;
                }
                let x0 = grid(w.x_min, w.x_max, self.nx, start) - dx / 2.0;
                let y0 = sy(grid(w.y_min, w.y_max, self.ny, j)) - dy / 2.0;
                fill.push_str(&format!(
                    "M{x0:.6} {y0:.6}h{:.6}v{dy:.6}h{:.6}z",
                    dx * (i - start) as f64,
                    -dx * (i - start) as f64
                ));
            }
        }
        let mut line = String::new();
        for j in 0..self.ny - 1 {
            for i in 0..self.nx - 1 {
                let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                let vals: Vec<f64> = corners.iter().map(|&(a, b)| self.at(a, b) - 1.0).collect();
                let mut crossings = Vec::new();
                for e in 0..4 {
                    let (v0, v1) = (vals[e], vals[(e + 1) % 4]);
                    if (v0 <= 0.0) != (v1 <= 0.0) {
                        let t = v0 / (v0 - v1);
                        let (a0, b0) = corners[e];
                        let (a1, b1) = corners[(e + 1) % 4];
                        let x = grid(w.x_min, w.x_max, self.nx, a0)
                            + t * (grid(w.x_min, w.x_max, self.nx, a1) - grid(w.x_min, w.x_max, self.nx, a0));
                        let y = grid(w.y_min, w.y_max, self.ny, b0)
                            + t * (grid(w.y_min, w.y_max, self.ny, b1) - grid(w.y_min, w.y_max, self.ny, b0));
                        crossings.push((x, sy(y)));
                    }
                }
                for pair in crossings.chunks_exact(2) {
                    line.push_str(&format!(
                        "M{:.6} {:.6}L{:.6} {:.6}",
                        pair[0].0, pair[0].1, pair[1].0, pair[1].1
                    ));
                }
            }
        }
        let stroke = (w.x_max - w.x_min).max(w.y_max - w.y_min) / 400.0;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n\
             <path d=\"{fill}\" fill=\"#9ecae1\" stroke=\"none\"/>\n\
             <path d=\"{line}\" fill=\"none\" stroke=\"#08519c\" stroke-width=\"{stroke}\"/>\n\
             </svg>\n",
            w.x_min,
            w.y_min,
            w.x_max - w.x_min,
            w.y_max - w.y_min
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::QSqrt5;
    use crate::tableau::lookup;

    fn r(key: &str) -> StabilityFunction<QSqrt5> {
        stability_function(&lookup(key).unwrap().tableau)
    }

    fn p(c: &[(i64, i64)]) -> Poly<QSqrt5> {
        Poly::new(c.iter().map(|&(n, d)| QSqrt5::ratio(n, d)).collect())
    }

    fn adjoint_r(key: &str) -> StabilityFunction<QSqrt5> {
        stability_function(&symplectic_adjoint(&lookup(key).unwrap().tableau).unwrap())
    }

    #[test]
    fn euler_functions() {
        let e = r("euler");
        assert_eq!(e.numerator, p(&[(1, 1), (1, 1)]));
        assert_eq!(e.denominator, p(&[(1, 1)]));
        let ie = r("implicit-euler");
        assert_eq!(ie.numerator, p(&[(1, 1)]));
        assert_eq!(ie.denominator, p(&[(1, 1), (-1, 1)]));
    }

    #[test]
    fn rk4_truncated_exponential() {
        let f = r("rk4");
        assert_eq!(f.numerator, p(&[(1, 1), (1, 1), (1, 2), (1, 6), (1, 24)]));
        assert_eq!(f.denominator, p(&[(1, 1)]));
    }

    #[test]
    fn a_and_l_stability() {
        assert!(r("implicit-euler").is_a_stable());
        assert!(r("implicit-euler").is_l_stable());
        assert!(!r("euler").is_a_stable());
        assert!(r("implicit-midpoint").is_a_stable());
        assert!(!r("implicit-midpoint").is_l_stable());
        assert!(adjoint_r("rk2").is_l_stable());
        assert!(r("radau-iia-2").is_l_stable());
        assert!(r("radau-ia-2").is_l_stable());
    }

    #[test]
    fn higher_explicit_adjoints_are_not_a_stable() {
        // 1 / T_p(-z) with T_p the degree-p Taylor polynomial of exp exceeds
        // one on part of the imaginary axis for p = 3 and p = 4.
        for key in ["rk3", "rk4"] {
            let cert = adjoint_r(key).a_stability();
            assert!(cert.poles_in_right_half_plane, "{key}");
            assert!(cert.worst_boundary_value > 1.05, "{key}: {}", cert.worst_boundary_value);
            assert!(!adjoint_r(key).is_l_stable());
        }
    }

    #[test]
    fn algebraic() {
        assert!(is_algebraically_stable(&lookup("radau-ia-2").unwrap().tableau));
        assert!(is_algebraically_stable(&lookup("radau-iia-2").unwrap().tableau));
        assert!(!is_algebraically_stable(&lookup("euler").unwrap().tableau));
        let iiic = algebraic_stability(&lookup("lobatto-iiic-3").unwrap().tableau);
        assert!(iiic.algebraically_stable);
        assert!(!iiic.m_entrywise_nonnegative);
        let f = lookup("radau-iia-2").unwrap().tableau.to_float().unwrap();
        assert!(is_algebraically_stable(&f));
    }

    #[test]
    fn symmetric_functions() {
        assert!(r("implicit-midpoint").is_stability_symmetric());
        assert!(r("lobatto-iiic-3-average").is_stability_symmetric());
        assert!(!r("euler").is_stability_symmetric());
    }

    #[test]
    fn adjoint_identity() {
        for key in ["euler", "rk3", "radau-ia-2", "example-4.2"] {
            assert!(
                adjoint_stability_identity(&lookup(key).unwrap().tableau).unwrap(),
                "{key}"
            );
        }
        let ie = adjoint_r("euler");
        assert_eq!(ie.denominator, p(&[(1, 1), (-1, 1)]));
    }

    #[test]
    fn taylor_of_rational_function() {
        let t = r("radau-iia-2").taylor(5);
        let expect = [(1, 1), (1, 1), (1, 2), (1, 6), (1, 36)];
        assert_eq!(t[..4], p(&expect).coeffs()[..4]);
        assert_ne!(t[4], QSqrt5::ratio(1, 24));
    }

    #[test]
    fn roots() {
        let mut z = polynomial_roots(&[2.0, -3.0, 1.0]);
        z.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((z[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((z[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn region_sampling() {
        let w = Window {
            x_min: -3.0,
            x_max: 1.0,
            y_min: -2.0,
            y_max: 2.0,
        };
        let s = sample_region(&r("euler"), w, 41, 41).unwrap();
        for pt in &s.points {
            let d = (1.0 + pt.x).powi(2) + pt.y.powi(2);
            if (d - 1.0).abs() > 1e-9 {
                assert_eq!(pt.inside, d <= 1.0, "{pt:?}");
            }
        }
        let rk4 = sample_region(
            &r("rk4"),
            Window {
                x_min: -2.78,
                x_max: 0.0,
                y_min: 0.0,
                y_max: 1.0,
            },
            2,
            2,
        )
        .unwrap();
        assert!(rk4.points[0].inside);
        assert!(s.to_csv().starts_with("x,y,abs_r,inside\n"));
        assert!(s.to_svg().contains("viewBox=\"-3 -2 4 4\""));
        assert!(sample_region(&r("euler"), w, 5000, 2).is_err());
    }

    #[test]
    fn pole_marked_infinite() {
        let w = Window {
            x_min: 0.0,
            x_max: 2.0,
            y_min: 0.0,
            y_max: 1.0,
        };
        let s = sample_region(&r("implicit-euler"), w, 3, 2).unwrap();
        assert!(s.points[1].abs_r.is_infinite());
        assert!(s.to_csv().contains(",inf,0"));
    }
}
