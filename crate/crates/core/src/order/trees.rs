//! Unlabeled rooted trees in canonical form.
//!
//! A tree is its multiset of child subtrees, stored sorted. Trees are ordered
//! first by node count and then lexicographically by their (already sorted)
//! child lists, which gives a deterministic total order and a unique
//! representative per isomorphism class.

use std::cmp::Ordering;
use std::fmt;

use super::OrderError;

/// Largest order accepted by [`enumerate_trees`] and the order checker.
pub const MAX_TREE_ORDER: usize = 10;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootedTree {
    order: usize,
    children: Vec<RootedTree>,
}

impl RootedTree {
    pub fn leaf() -> Self {
        RootedTree {
            order: 1,
            children: Vec::new(),
        }
    }

    /// Grafts the given subtrees onto a new root.
    pub fn from_children(mut children: Vec<RootedTree>) -> Self {
        children.sort();
        let order = 1 + children.iter().map(|c| c.order).sum::<usize>();
        RootedTree { order, children }
    }

    /// Path graph with `n` nodes.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1);
        (1..n).fold(RootedTree::leaf(), |t, _| RootedTree::from_children(vec![t]))
    }

    /// Root with `n - 1` leaf children.
    pub fn bushy(n: usize) -> Self {
        assert!(n >= 1);
        RootedTree::from_children(vec![RootedTree::leaf(); n - 1])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// `gamma(t) = |t| * prod gamma(child)`; the order condition reads
    /// `Phi(t) = 1 / gamma(t)`.
    pub fn density(&self) -> u64 {
        self.order as u64 * self.children.iter().map(RootedTree::density).product::<u64>()
    }
}

impl Ord for RootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.children.cmp(&other.children))
    }
}

impl PartialOrd for RootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Bracket notation: a leaf is `o`, otherwise `[child,child,...]`.
impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_leaf() {
            return f.write_str("o");
        }
        f.write_str("[")?;
        for (k, c) in self.children.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All trees with at most `max_order` nodes, each once, in canonical order.
pub fn enumerate_trees(max_order: usize) -> Result<Vec<RootedTree>, OrderError> {
    if max_order > MAX_TREE_ORDER {
        return Err(OrderError::CapExceeded {
            requested: max_order,
            cap: MAX_TREE_ORDER,
        });
    }
    let mut all: Vec<RootedTree> = Vec::new();
    for n in 1..=max_order {
        let mut level = Vec::new();
        let mut stack = Vec::new();
        forests(&all, 0, n - 1, &mut stack, &mut level);
        level.sort();
        all.extend(level);
    }
    Ok(all)
}

/// Every multiset of trees from `pool[start..]` with total order `remaining`,
/// grafted onto a root. Indices are non-decreasing so each multiset appears once.
fn forests(pool: &[RootedTree], start: usize, remaining: usize, stack: &mut Vec<usize>, out: &mut Vec<RootedTree>) {
    if remaining == 0 {
        out.push(RootedTree::from_children(
            stack.iter().map(|&k| pool[k].clone()).collect(),
        ));
        return;
    }
    for k in start..pool.len() {
        let size = pool[k].order;
        if size > remaining {
            // pool is sorted by order
            break;
        }
        stack.push(k);
        forests(pool, k, remaining - size, stack, out);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_per_order() {
        let trees = enumerate_trees(8).unwrap();
        let mut per = [0usize; 9];
        for t in &trees {
            per[t.order()] += 1;
        }
        assert_eq!(&per[1..], &[1, 1, 2, 4, 9, 20, 48, 115]);
    }

    #[test]
    fn cumulative_counts() {
        assert_eq!(enumerate_trees(1).unwrap().len(), 1);
        assert_eq!(enumerate_trees(5).unwrap().len(), 17);
        assert_eq!(enumerate_trees(8).unwrap().len(), 200);
        assert!(matches!(enumerate_trees(11), Err(OrderError::CapExceeded { .. })));
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let trees = enumerate_trees(7).unwrap();
        assert!(trees.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn densities() {
        assert_eq!(RootedTree::leaf().density(), 1);
        assert_eq!(RootedTree::chain(5).density(), 120);
        let t46 = RootedTree::from_children(vec![RootedTree::leaf(), RootedTree::chain(2)]);
        assert_eq!(t46.order(), 4);
        assert_eq!(t46.density(), 8);
        assert_eq!(RootedTree::bushy(4).density(), 4);
    }

    #[test]
    fn canonical_form_ignores_child_order() {
        let a = RootedTree::from_children(vec![RootedTree::chain(2), RootedTree::leaf()]);
        let b = RootedTree::from_children(vec![RootedTree::leaf(), RootedTree::chain(2)]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "[o,[o]]");
    }
}
