//! Elementary weights over rooted trees.

use std::collections::HashMap;

use super::trees::{enumerate_trees, RootedTree};
use super::{OrderError, ResidualReport};
use crate::scalar::Scalar;
use crate::tableau::Tableau;

/// Memoized evaluator of `Phi(t) = sum_i b_i g_i(t)`, where the stage weight
/// `g_i(t)` of a tree with children `u_1..u_m` is `prod_k (A g(u_k))_i` and a
/// leaf has `g = e`.
///
/// Leaves use `A e` rather than `c`, so the weights are meaningful even when
/// the tableau is not row-sum consistent.
pub struct ElementaryWeights<'a, S> {
    tableau: &'a Tableau<S>,
    // A * g(u), keyed by subtree
    propagated: HashMap<RootedTree, Vec<S>>,
}

impl<'a, S: Scalar> ElementaryWeights<'a, S> {
    pub fn new(tableau: &'a Tableau<S>) -> Self {
        ElementaryWeights {
            tableau,
            propagated: HashMap::new(),
        }
    }

    fn propagated(&mut self, tree: &RootedTree) -> Vec<S> {
        if let Some(v) = self.propagated.get(tree) {
            return v.clone();
        }
        let g = self.stage_weights(tree);
        let v = self.tableau.a().mul_vec(&g);
        self.propagated.insert(tree.clone(), v.clone());
        v
    }

    pub fn stage_weights(&mut self, tree: &RootedTree) -> Vec<S> {
        let s = self.tableau.stages();
        let mut g = vec![S::one(); s];
        for child in tree.children() {
            let v = self.propagated(child);
            for (gi, vi) in g.iter_mut().zip(v) {
                *gi = gi.clone() * vi;
            }
        }
        g
    }

    pub fn weight(&mut self, tree: &RootedTree) -> S {
        let g = self.stage_weights(tree);
        self.tableau
            .b()
            .iter()
            .zip(g)
            .fold(S::zero(), |acc, (b, gi)| acc + b.clone() * gi)
    }

    /// `Phi(t) - 1/gamma(t)`.
    pub fn residual(&mut self, tree: &RootedTree) -> S {
        self.weight(tree) - S::from_ratio(1, tree.density() as i64)
    }
}

pub fn elementary_weight<S: Scalar>(t: &Tableau<S>, tree: &RootedTree) -> S {
    ElementaryWeights::new(t).weight(tree)
}

/// Default residual tolerance for float tableaux.
pub const FLOAT_RESIDUAL_TOL: f64 = 1e-10;

/// Largest `p <= max_order` with `Phi(t) = 1/gamma(t)` for every tree of
/// order at most `p`.
pub fn detect_order<S: Scalar>(t: &Tableau<S>, max_order: usize) -> Result<usize, OrderError> {
    detect_order_tol(t, max_order, FLOAT_RESIDUAL_TOL)
}

pub fn detect_order_tol<S: Scalar>(t: &Tableau<S>, max_order: usize, tol: f64) -> Result<usize, OrderError> {
    let trees = enumerate_trees(max_order)?;
    let mut eval = ElementaryWeights::new(t);
    let mut order = 0;
    for p in 1..=max_order {
        let ok = trees
            .iter()
            .filter(|tr| tr.order() == p)
            .all(|tr| eval.residual(tr).is_negligible(tol));
        if !ok {
            break;
        }
        order = p;
    }
    Ok(order)
}

/// One report per tree of order `<= max_order`. Trees of order five or less
/// are named `tree t41`..`tree t517`; larger ones are named by their
/// position in the canonical enumeration (1-based) and bracket form.
pub fn tree_conditions<S: Scalar>(
    t: &Tableau<S>,
    max_order: usize,
    tol: f64,
) -> Result<Vec<ResidualReport<S>>, OrderError> {
    let trees = enumerate_trees(max_order)?;
    let names = super::erk5::conditions::<S>();
    let mut eval = ElementaryWeights::new(t);
    Ok(trees
        .iter()
        .enumerate()
        .map(|(k, tree)| {
            let id = names
                .iter()
                .find(|c| c.tree() == *tree && c.order() <= 5)
                .map(|c| format!("tree {}", c.name))
                .unwrap_or_else(|| format!("tree #{} {}", k + 1, tree));
            ResidualReport::new(id, eval.residual(tree), tol)
        })
        .collect())
}
