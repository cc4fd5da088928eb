//! Conway polynomials for every proper prime power `q = p^h <= 128`, `h >= 2`.
//!
//! Coefficients are little-endian (constant term first) and the polynomial is
//! monic. Prime fields do not use this table: their modulus is `x`.

/// `(p, h, coefficients)`.
pub(crate) const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
];

pub(crate) fn lookup(p: u32, h: u32) -> Option<&'static [u32]> {
    CONWAY
        .iter()
        .find(|(pp, hh, _)| *pp == p && *hh == h)
        .map(|(_, _, c)| *c)
}
