//! Deformed integers for the two oscillator families, with factorials,
//! falling/rising factorials, and binomials as exact [`LaurentPoly`] values.
//!
//! Everything here is built multiplicatively from the basic bracket
//! polynomials; no rational-function division is ever performed, so all
//! values stay exact at q = 1 where the even fermionic brackets vanish.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::laurent::LaurentPoly;
use crate::rational::Rational;

/// Which deformation family a bracket belongs to.
///
/// Boson: `AA† − qA†A = 1`, bracket `1 + q + … + q^{n-1}`.
/// Fermion: `FF† + qF†F = 1`, bracket `1 − q + q² − …` (alternating).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QKind {
    Boson,
    Fermion,
}

impl fmt::Display for QKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QKind::Boson => write!(f, "boson"),
            QKind::Fermion => write!(f, "fermion"),
        }
    }
}

/// The bracket `[n]`: plain geometric sum for bosons, alternating sum for
/// fermions. Both are ordinary polynomials; `[0] = 0`.
pub fn qnum(kind: QKind, n: u32) -> LaurentPoly {
    let terms = (0..n as i64).map(|k| {
        let sign = match kind {
            QKind::Boson => 1,
            QKind::Fermion => {
                if k % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        };
        (k, Rational::from_int(sign))
    });
    LaurentPoly::from_terms(terms)
}

/// `[n]! = [1][2]…[n]`, with the empty product for `n = 0`.
pub fn qfact(kind: QKind, n: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for i in 1..=n {
        acc = acc.mul(&qnum(kind, i));
    }
    acc
}

/// Falling factorial `[n][n−1]…[n−s+1]` (s factors), computed as a product.
/// A factorial quotient would be 0/0 at q = 1, so it is never used.
pub fn falling_fact(kind: QKind, n: u32, s: u32) -> Result<LaurentPoly, Error> {
    if s > n {
        return Err(Error::Domain(format!(
            "falling factorial needs s <= n, got n={n}, s={s}"
        )));
    }
    let mut acc = LaurentPoly::one();
    for i in (n - s + 1)..=n {
        acc = acc.mul(&qnum(kind, i));
    }
    Ok(acc)
}

/// Rising factorial `[n+1][n+2]…[n+s]` (s factors).
pub fn rising_fact(kind: QKind, n: u32, s: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for i in (n + 1)..=(n + s) {
        acc = acc.mul(&qnum(kind, i));
    }
    acc
}

/// Deformed binomial `[n choose k]`: falling factorial divided exactly by
/// `[k]!`. The quotient is always a Laurent polynomial for both families;
/// an inexact division here indicates a bug, not a bad input.
pub fn qbinom(kind: QKind, n: u32, k: u32) -> Result<LaurentPoly, Error> {
    if k > n {
        return Err(Error::Domain(format!(
            "binomial needs k <= n, got n={n}, k={k}"
        )));
    }
    falling_fact(kind, n, k)?.div_exact(&qfact(kind, k))
}

/// Checks the fermionic shift relation
/// `[n] − [r] = (−1)^r q^r [n−r]` as an exact polynomial identity.
pub fn shift_identity_check(n: u32, r: u32) -> Result<bool, Error> {
    if r > n {
        return Err(Error::Domain(format!(
            "shift identity needs r <= n, got n={n}, r={r}"
        )));
    }
    let lhs = qnum(QKind::Fermion, n).sub(&qnum(QKind::Fermion, r));
    let sign = if r % 2 == 0 { 1 } else { -1 };
    let rhs = qnum(QKind::Fermion, n - r).mul_monomial(&Rational::from_int(sign), r as i64);
    Ok(lhs == rhs)
}
