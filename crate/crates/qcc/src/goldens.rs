//! The printed small-rank expansions, embedded as plain data: exponent
//! vectors with coefficient half-power/multiplicity pairs. A pair (h, c)
//! contributes c·q^(h/(2d)) at the ambient form's scale d, so h is the
//! half-power key for rank-2 families (d = 1) and the quarter-power key
//! for the rank-4 family (d = 2).

pub type Terms = &'static [(&'static [i64], &'static [(i64, i64)])];

const ONE: &[(i64, i64)] = &[(0, 1)];
/// q^(1/2) + q^(-1/2) at scale 1.
const HALF: &[(i64, i64)] = &[(1, 1), (-1, 1)];
/// q + 1 + q^(-1) at scale 1.
const TRIPLE: &[(i64, i64)] = &[(2, 1), (0, 1), (-2, 1)];
/// q^(3/2) + q^(-3/2) at scale 1.
const THREEHALF: &[(i64, i64)] = &[(3, 1), (-3, 1)];

/// Variables created by the alternating walk 1, 2, 1, ... on the
/// single-edge rank-2 quiver, ending with the two initial variables
/// reappearing (period five).
pub const A2_WALK: &[Terms] = &[
    &[(&[-1, 1], ONE), (&[-1, 0], ONE)],
    &[(&[-1, 0], ONE), (&[0, -1], ONE), (&[-1, -1], ONE)],
    &[(&[1, -1], ONE), (&[0, -1], ONE)],
    &[(&[1, 0], ONE)],
    &[(&[0, 1], ONE)],
];

/// The doubled-edge walk (period six).
pub const C2_WALK: &[Terms] = &[
    &[(&[-1, 1], ONE), (&[-1, 0], ONE)],
    &[(&[-2, 1], ONE), (&[-2, 0], HALF), (&[0, -1], ONE), (&[-2, -1], ONE)],
    &[(&[-1, 0], ONE), (&[1, -1], ONE), (&[-1, -1], ONE)],
    &[(&[2, -1], ONE), (&[0, -1], ONE)],
    &[(&[1, 0], ONE)],
    &[(&[0, 1], ONE)],
];

/// The tripled-edge walk (period eight).
pub const G2_WALK: &[Terms] = &[
    &[(&[-1, 1], ONE), (&[-1, 0], ONE)],
    &[
        (&[-3, 2], ONE),
        (&[-3, 1], TRIPLE),
        (&[-3, 0], TRIPLE),
        (&[0, -1], ONE),
        (&[-3, -1], ONE),
    ],
    &[(&[-2, 1], ONE), (&[-2, 0], HALF), (&[1, -1], ONE), (&[-2, -1], ONE)],
    &[
        (&[-3, 1], ONE),
        (&[-3, 0], TRIPLE),
        (&[0, -1], TRIPLE),
        (&[-3, -1], TRIPLE),
        (&[3, -2], ONE),
        (&[0, -2], THREEHALF),
        (&[-3, -2], ONE),
    ],
    &[(&[-1, 0], ONE), (&[2, -1], ONE), (&[-1, -1], ONE)],
    &[(&[3, -1], ONE), (&[0, -1], ONE)],
    &[(&[1, 0], ONE)],
    &[(&[0, 1], ONE)],
];

/// q^(1/2) + q^(-1/2) at scale 2.
const HALF4: &[(i64, i64)] = &[(2, 1), (-2, 1)];
/// q^(3/2) + q^(1/2) + q^(-1/2) + q^(-3/2) at scale 2.
const FOUR4: &[(i64, i64)] = &[(6, 1), (2, 1), (-2, 1), (-6, 1)];
/// q^2 + q + 2 + q^(-1) + q^(-2) at scale 2.
const FIVE4: &[(i64, i64)] = &[(8, 1), (4, 1), (0, 2), (-4, 1), (-8, 1)];
/// q + 2 + q^(-1) at scale 2.
const MID4: &[(i64, i64)] = &[(4, 1), (0, 2), (-4, 1)];

/// The three printed variables of the linearly ordered rank-4 family,
/// keyed by (mutation walk, slot to read).
pub const RANK4_VARS: &[(&[usize], usize, Terms)] = &[
    (&[1], 1, &[(&[0, -1, 2, 0], ONE), (&[2, -1, 0, 0], ONE)]),
    (
        &[1, 2],
        2,
        &[
            (&[0, -2, 3, 2], ONE),
            (&[2, -2, 1, 2], HALF4),
            (&[4, -2, -1, 2], ONE),
            (&[4, 0, -1, 0], ONE),
        ],
    ),
    (
        &[1, 2, 3],
        3,
        &[
            (&[0, -4, 6, 3], ONE),
            (&[2, -4, 4, 3], FOUR4),
            (&[4, -4, 2, 3], FIVE4),
            (&[6, -4, 0, 3], FOUR4),
            (&[8, -4, -2, 3], ONE),
            (&[4, -2, 2, 1], HALF4),
            (&[6, -2, 0, 1], MID4),
            (&[8, -2, -2, 1], HALF4),
            (&[8, 0, 0, -1], ONE),
            (&[8, 0, -2, -1], ONE),
        ],
    ),
];

use crate::scalar::QScalar;
use crate::torus::{SkewForm, TorusElement};

/// Assemble a torus element from table data at the form's scale.
pub fn element(form: &SkewForm, terms: Terms) -> TorusElement {
    let mut out = TorusElement::zero(form);
    for &(e, pairs) in terms {
        let mut c = QScalar::zero(form.d());
        for &(h, mult) in pairs {
            c = &c + &QScalar::term(form.d(), h, mult);
        }
        out = &out + &TorusElement::term(form, e, c);
    }
    out
}
