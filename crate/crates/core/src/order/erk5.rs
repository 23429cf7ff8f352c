//! The seventeen conditions for order five written out as explicit sums,
//! plus the tall order-six tree `t620`.
//!
//! These evaluators index `A`, `b`, `c` directly and never touch the tree
//! machinery in [`super::weights`]; they act as an independent check on it.
//! Like the textbook sums, they use the nodes `c` in place of `A e` and so
//! assume row-sum consistency.

use super::trees::RootedTree;
use super::ResidualReport;
use crate::scalar::Scalar;
use crate::tableau::Tableau;

/// Tree shape written as nested child lists; `L` is a leaf.
#[derive(Clone, Copy)]
enum Shape {
    L,
    N(&'static [Shape]),
}

use Shape::{L, N};

fn build(shape: Shape) -> RootedTree {
    match shape {
        L => RootedTree::leaf(),
        N(ch) => RootedTree::from_children(ch.iter().copied().map(build).collect()),
    }
}

type Evaluator<S> = fn(&Sums<S>) -> S;

pub struct NamedCondition<S> {
    pub name: &'static str,
    shape: Shape,
    /// Right-hand side `1/gamma`.
    pub rhs: (i64, i64),
    eval: Evaluator<S>,
}

impl<S: Scalar> NamedCondition<S> {
    pub fn tree(&self) -> RootedTree {
        build(self.shape)
    }

    pub fn order(&self) -> usize {
        self.tree().order()
    }

    pub fn lhs(&self, t: &Tableau<S>) -> S {
        (self.eval)(&Sums::new(t))
    }

    pub fn residual(&self, t: &Tableau<S>) -> S {
        self.lhs(t) - S::from_ratio(self.rhs.0, self.rhs.1)
    }
}

/// Index-level helpers over one tableau.
pub struct Sums<'a, S> {
    t: &'a Tableau<S>,
    s: usize,
}

impl<'a, S: Scalar> Sums<'a, S> {
    fn new(t: &'a Tableau<S>) -> Self {
        Sums { t, s: t.stages() }
    }

    fn a(&self, i: usize, j: usize) -> S {
        self.t.a_ij(i, j).clone()
    }

    fn b(&self, i: usize) -> S {
        self.t.b()[i].clone()
    }

    fn c(&self, i: usize) -> S {
        self.t.c()[i].clone()
    }

    fn cp(&self, i: usize, k: u32) -> S {
        (0..k).fold(S::one(), |acc, _| acc * self.c(i))
    }

    fn sum(&self, f: impl Fn(usize) -> S) -> S {
        (0..self.s).fold(S::zero(), |acc, i| acc + f(i))
    }

    /// `sum_j a_ij v_j` for an index function `v`.
    fn av(&self, i: usize, v: impl Fn(usize) -> S) -> S {
        self.sum(|j| self.a(i, j) * v(j))
    }
}

pub fn conditions<S: Scalar>() -> Vec<NamedCondition<S>> {
    fn nc<S: Scalar>(name: &'static str, shape: Shape, rhs: (i64, i64), eval: Evaluator<S>) -> NamedCondition<S> {
        NamedCondition { name, shape, rhs, eval }
    }
    vec![
        nc("t41", L, (1, 1), |z| z.sum(|i| z.b(i))),
        nc("t42", N(&[L]), (1, 2), |z| z.sum(|i| z.b(i) * z.c(i))),
        nc("t43", N(&[L, L]), (1, 3), |z| z.sum(|i| z.b(i) * z.cp(i, 2))),
        nc("t44", N(&[L, L, L]), (1, 4), |z| z.sum(|i| z.b(i) * z.cp(i, 3))),
        nc("t45", N(&[N(&[L])]), (1, 6), |z| {
            z.sum(|i| z.b(i) * z.av(i, |j| z.c(j)))
        }),
        nc("t46", N(&[L, N(&[L])]), (1, 8), |z| {
            z.sum(|i| z.b(i) * z.c(i) * z.av(i, |j| z.c(j)))
        }),
        nc("t47", N(&[N(&[L, L])]), (1, 12), |z| {
            z.sum(|i| z.b(i) * z.av(i, |j| z.cp(j, 2)))
        }),
        nc("t48", N(&[N(&[N(&[L])])]), (1, 24), |z| {
            z.sum(|i| z.b(i) * z.av(i, |j| z.av(j, |k| z.c(k))))
        }),
        nc("t59", N(&[L, L, L, L]), (1, 5), |z| z.sum(|i| z.b(i) * z.cp(i, 4))),
        nc("t510", N(&[L, L, N(&[L])]), (1, 10), |z| {
            z.sum(|i| z.b(i) * z.cp(i, 2) * z.av(i, |j| z.c(j)))
        }),
        nc("t511", N(&[L, N(&[L, L])]), (1, 15), |z| {
            z.sum(|i| z.b(i) * z.c(i) * z.av(i, |j| z.cp(j, 2)))
        }),
        nc("t512", N(&[L, N(&[N(&[L])])]), (1, 30), |z| {
            z.sum(|i| z.b(i) * z.c(i) * z.av(i, |j| z.av(j, |k| z.c(k))))
        }),
        nc("t513", N(&[N(&[L]), N(&[L])]), (1, 20), |z| {
            z.sum(|i| {
                let ac = z.av(i, |j| z.c(j));
                z.b(i) * ac.clone() * ac
            })
        }),
        nc("t514", N(&[N(&[L, L, L])]), (1, 20), |z| {
            z.sum(|i| z.b(i) * z.av(i, |j| z.cp(j, 3)))
        }),
        nc("t515", N(&[N(&[L, N(&[L])])]), (1, 40), |z| {
            z.sum(|i| z.b(i) * z.av(i, |j| z.c(j) * z.av(j, |k| z.c(k))))
        }),
        nc("t516", N(&[N(&[N(&[L, L])])]), (1, 60), |z| {
            z.sum(|i| z.b(i) * z.av(i, |j| z.av(j, |k| z.cp(k, 2))))
        }),
        nc("t517", N(&[N(&[N(&[N(&[L])])])]), (1, 120), |z| {
            z.sum(|i| z.b(i) * z.av(i, |j| z.av(j, |k| z.av(k, |m| z.c(m)))))
        }),
        nc("t620", N(&[N(&[N(&[N(&[N(&[L])])])])]), (1, 720), |z| {
            z.sum(|i| z.b(i) * z.av(i, |j| z.av(j, |k| z.av(k, |m| z.av(m, |p| z.c(p))))))
        }),
    ]
}

/// Residual reports for `t41`..`t517` (order five).
pub fn erk5_residuals<S: Scalar>(t: &Tableau<S>, tol: f64) -> Vec<ResidualReport<S>> {
    conditions::<S>()
        .into_iter()
        .filter(|c| c.name != "t620")
        .map(|c| ResidualReport::new(c.name, c.residual(t), tol))
        .collect()
}

/// `sum b_i a_ij a_jk a_km a_mp c_p`, the z^6 coefficient of an explicit
/// method's stability polynomial.
pub fn t620_weight<S: Scalar>(t: &Tableau<S>) -> S {
    conditions::<S>()
        .into_iter()
        .find(|c| c.name == "t620")
        .expect("t620 present")
        .lhs(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::QSqrt5;

    #[test]
    fn shapes_match_densities() {
        for c in conditions::<QSqrt5>() {
            assert_eq!(c.tree().density() as i64, c.rhs.1, "{}", c.name);
            assert_eq!(c.rhs.0, 1);
        }
    }

    #[test]
    fn seventeen_distinct_trees_up_to_order_five() {
        let trees: Vec<_> = conditions::<QSqrt5>()
            .iter()
            .filter(|c| c.order() <= 5)
            .map(|c| c.tree())
            .collect();
        assert_eq!(trees.len(), 17);
        let all = super::super::enumerate_trees(5).unwrap();
        for t in &all {
            assert!(trees.contains(t), "{t} missing");
        }
    }
}
