#![allow(dead_code)]

use num_traits::Zero;
use proptest::prelude::*;
use rkforge::{ExactTableau, QSqrt5};

/// Small elements of Q(sqrt5); about a third carry a sqrt5 part.
pub fn small_q() -> impl Strategy<Value = QSqrt5> {
    let rational = (-6i64..=6, 1i64..=6).prop_map(|(n, d)| QSqrt5::ratio(n, d));
    let irrational = (-6i64..=6, 1i64..=6, -3i64..=3, 1i64..=4).prop_map(|(a, b, c, d)| QSqrt5::with_sqrt5(a, b, c, d));
    prop_oneof![2 => rational, 1 => irrational]
}

pub fn nonzero_q() -> impl Strategy<Value = QSqrt5> {
    small_q().prop_filter("nonzero", |x| !x.is_zero())
}

fn row_sums(a: &[Vec<QSqrt5>]) -> Vec<QSqrt5> {
    a.iter()
        .map(|row| row.iter().fold(QSqrt5::from_integer(0), |acc, x| acc + x.clone()))
        .collect()
}

/// Dense tableau with `s` in `1..=max_s`, row-sum consistent nodes and
/// weights that are nonzero when `nonzero_b` is set.
pub fn tableau(max_s: usize, nonzero_b: bool) -> impl Strategy<Value = ExactTableau> {
    (1..=max_s).prop_flat_map(move |s| {
        let b = if nonzero_b {
            prop::collection::vec(nonzero_q(), s).boxed()
        } else {
            prop::collection::vec(small_q(), s).boxed()
        };
        (prop::collection::vec(prop::collection::vec(small_q(), s), s), b).prop_map(|(a, b)| {
            let c = row_sums(&a);
            ExactTableau::exact("random", a, b, c).unwrap()
        })
    })
}

/// Strictly lower-triangular tableau with nonzero weights.
pub fn explicit_tableau(max_s: usize) -> impl Strategy<Value = ExactTableau> {
    (1..=max_s).prop_flat_map(|s| {
        (
            prop::collection::vec(prop::collection::vec(small_q(), s), s),
            prop::collection::vec(nonzero_q(), s),
        )
            .prop_map(move |(mut a, b)| {
                for (i, row) in a.iter_mut().enumerate() {
                    for x in row.iter_mut().skip(i) {
                        *x = QSqrt5::from_integer(0);
                    }
                }
                let c = row_sums(&a);
                ExactTableau::exact("explicit", a, b, c).unwrap()
            })
    })
}

pub fn same(x: &ExactTableau, y: &ExactTableau) -> bool {
    x.same_coefficients(y, 0.0)
}
