//! Built-in methods, entered coefficient by coefficient from their published
//! tableaux. The six-stage fifth-order examples are kept here as literals so
//! they can serve as fixtures for the constructor in [`crate::ssrk5`].

use serde::Serialize;

use super::ExactTableau;
use crate::exactnum::QSqrt5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    ExplicitClassic,
    Gauss,
    Radau,
    Lobatto,
    Constructed,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub tableau: ExactTableau,
    pub documented_order: usize,
    pub family: Family,
}

fn r(n: i64, d: i64) -> QSqrt5 {
    QSqrt5::ratio(n, d)
}

/// `rn/rd + (sn/sd) sqrt5`
fn q(rn: i64, rd: i64, sn: i64, sd: i64) -> QSqrt5 {
    QSqrt5::with_sqrt5(rn, rd, sn, sd)
}

fn z() -> QSqrt5 {
    r(0, 1)
}

fn entry(
    key: &'static str,
    family: Family,
    order: usize,
    a: Vec<Vec<QSqrt5>>,
    b: Vec<QSqrt5>,
    c: Vec<QSqrt5>,
) -> CatalogEntry {
    CatalogEntry {
        key,
        tableau: ExactTableau::exact(key, a, b, c).expect("catalog tableau dimensions"),
        documented_order: order,
        family,
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    use Family::*;
    vec![
        entry("euler", ExplicitClassic, 1, vec![vec![z()]], vec![r(1, 1)], vec![z()]),
        entry(
            "implicit-euler",
            Radau,
            1,
            vec![vec![r(1, 1)]],
            vec![r(1, 1)],
            vec![r(1, 1)],
        ),
        entry(
            "rk2",
            ExplicitClassic,
            2,
            vec![vec![z(), z()], vec![r(1, 1), z()]],
            vec![r(1, 2), r(1, 2)],
            vec![z(), r(1, 1)],
        ),
        entry(
            "rk3",
            ExplicitClassic,
            3,
            vec![
                vec![z(), z(), z()],
                vec![r(1, 2), z(), z()],
                vec![r(-1, 1), r(2, 1), z()],
            ],
            vec![r(1, 6), r(2, 3), r(1, 6)],
            vec![z(), r(1, 2), r(1, 1)],
        ),
        entry(
            "rk4",
            ExplicitClassic,
            4,
            vec![
                vec![z(), z(), z(), z()],
                vec![r(1, 2), z(), z(), z()],
                vec![z(), r(1, 2), z(), z()],
                vec![z(), z(), r(1, 1), z()],
            ],
            vec![r(1, 6), r(1, 3), r(1, 3), r(1, 6)],
            vec![z(), r(1, 2), r(1, 2), r(1, 1)],
        ),
        entry(
            "implicit-midpoint",
            Gauss,
            2,
            vec![vec![r(1, 2)]],
            vec![r(1, 1)],
            vec![r(1, 2)],
        ),
        entry(
            "radau-ia-2",
            Radau,
            3,
            vec![vec![r(1, 4), r(-1, 4)], vec![r(1, 4), r(5, 12)]],
            vec![r(1, 4), r(3, 4)],
            vec![z(), r(2, 3)],
        ),
        entry(
            "radau-ib-2",
            Radau,
            3,
            vec![vec![r(1, 8), r(-1, 8)], vec![r(7, 24), r(3, 8)]],
            vec![r(1, 4), r(3, 4)],
            vec![z(), r(2, 3)],
        ),
        entry(
            "radau-iia-2",
            Radau,
            3,
            vec![vec![r(5, 12), r(-1, 12)], vec![r(3, 4), r(1, 4)]],
            vec![r(3, 4), r(1, 4)],
            vec![r(1, 3), r(1, 1)],
        ),
        entry(
            "radau-iib-2",
            Radau,
            3,
            vec![vec![r(3, 8), r(-1, 24)], vec![r(7, 8), r(1, 8)]],
            vec![r(3, 4), r(1, 4)],
            vec![r(1, 3), r(1, 1)],
        ),
        entry(
            "lobatto-iiia-3",
            Lobatto,
            4,
            vec![
                vec![z(), z(), z()],
                vec![r(5, 24), r(1, 3), r(-1, 24)],
                vec![r(1, 6), r(2, 3), r(1, 6)],
            ],
            vec![r(1, 6), r(2, 3), r(1, 6)],
            vec![z(), r(1, 2), r(1, 1)],
        ),
        entry(
            "lobatto-iiib-3",
            Lobatto,
            4,
            vec![
                vec![r(1, 6), r(-1, 6), z()],
                vec![r(1, 6), r(1, 3), z()],
                vec![r(1, 6), r(5, 6), z()],
            ],
            vec![r(1, 6), r(2, 3), r(1, 6)],
            vec![z(), r(1, 2), r(1, 1)],
        ),
        entry(
            "lobatto-iiic-3",
            Lobatto,
            4,
            vec![
                vec![r(1, 6), r(-1, 3), r(1, 6)],
                vec![r(1, 6), r(5, 12), r(-1, 12)],
                vec![r(1, 6), r(2, 3), r(1, 6)],
            ],
            vec![r(1, 6), r(2, 3), r(1, 6)],
            vec![z(), r(1, 2), r(1, 1)],
        ),
        entry(
            "lobatto-iiie-3",
            Lobatto,
            4,
            vec![
                vec![z(), z(), z()],
                vec![r(1, 4), r(1, 4), z()],
                vec![z(), r(1, 1), z()],
            ],
            vec![r(1, 6), r(2, 3), r(1, 6)],
            vec![z(), r(1, 2), r(1, 1)],
        ),
        entry(
            "lobatto-iiic-3-average",
            Lobatto,
            4,
            vec![
                vec![r(1, 12), r(-1, 6), r(1, 12)],
                vec![r(5, 24), r(1, 3), r(-1, 24)],
                vec![r(1, 12), r(5, 6), r(1, 12)],
            ],
            vec![r(1, 6), r(2, 3), r(1, 6)],
            vec![z(), r(1, 2), r(1, 1)],
        ),
        entry(
            "example-4.1",
            Constructed,
            5,
            vec![
                vec![z(), z(), z(), z(), z(), z()],
                vec![q(1, 2, -1, 6), z(), z(), z(), z(), z()],
                vec![q(-2, 50, 3, 50), q(12, 50, -3, 50), z(), z(), z(), z()],
                vec![
                    q(99, 150, -8, 150),
                    q(-2071, 1100, -933, 1100),
                    q(267, 132, 119, 132),
                    z(),
                    z(),
                    z(),
                ],
                vec![
                    q(5, 324, 39, 324),
                    q(-1218, 594, -805, 594),
                    q(10355, 3564, 4665, 3564),
                    q(-20, 54, 5, 54),
                    z(),
                    z(),
                ],
                vec![
                    q(-15, 24, -5, 24),
                    q(-5, 88, -39, 88),
                    q(495, 132, -40, 132),
                    q(-10, 44, 15, 44),
                    q(-81, 44, 27, 44),
                    z(),
                ],
            ],
            vec![r(1, 6), r(-81, 132), r(125, 132), r(125, 132), r(-81, 132), r(1, 6)],
            vec![z(), q(1, 2, -1, 6), r(1, 5), r(4, 5), q(1, 2, 1, 6), r(1, 1)],
        ),
        entry(
            "example-4.2",
            Constructed,
            5,
            vec![
                vec![z(), z(), z(), z(), z(), z()],
                vec![q(1, 2, -1, 5), z(), z(), z(), z(), z()],
                vec![q(-3, 16, -1, 16), q(7, 16, 1, 16), z(), z(), z(), z()],
                vec![
                    q(45, 48, 5, 48),
                    q(-511, 528, -235, 528),
                    q(103, 132, 45, 132),
                    z(),
                    z(),
                    z(),
                ],
                vec![
                    q(-715, 165, -308, 165),
                    q(1035, 330, 278, 330),
                    q(511, 165, 235, 165),
                    q(-7, 5, -1, 5),
                    z(),
                    z(),
                ],
                vec![
                    q(-1694, 363, -726, 363),
                    q(1430, 363, 616, 363),
                    q(90, 33, 10, 33),
                    q(-6, 11, -2, 11),
                    q(-5, 11, 2, 11),
                    z(),
                ],
            ],
            vec![r(1, 6), r(-5, 33), r(16, 33), r(16, 33), r(-5, 33), r(1, 6)],
            vec![z(), q(1, 2, -1, 5), r(1, 4), r(3, 4), q(1, 2, 1, 5), r(1, 1)],
        ),
        entry(
            "example-4.3",
            Constructed,
            5,
            vec![
                vec![z(), z(), z(), z(), z(), z()],
                vec![r(1, 4), z(), z(), z(), z(), z()],
                vec![q(-4, 10, 3, 10), q(9, 10, -5, 10), z(), z(), z(), z()],
                vec![
                    q(11, 60, -1, 60),
                    q(181, 165, 92, 165),
                    q(-103, 132, -45, 132),
                    z(),
                    z(),
                    z(),
                ],
                vec![
                    q(19, 96, 3, 96),
                    q(621, 528, -7, 528),
                    q(-181, 528, -92, 528),
                    q(-9, 32, 5, 32),
                    z(),
                    z(),
                ],
                vec![
                    q(-3, 6, 1, 6),
                    q(19, 33, 3, 33),
                    q(-11, 66, 1, 66),
                    q(4, 11, -3, 11),
                    r(8, 11),
                    z(),
                ],
            ],
            vec![r(1, 6), r(16, 33), r(-5, 33), r(-5, 33), r(16, 33), r(1, 6)],
            vec![z(), r(1, 4), q(1, 2, -1, 5), q(1, 2, 1, 5), r(3, 4), r(1, 1)],
        ),
    ]
}

pub fn lookup(key: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.key == key)
}
