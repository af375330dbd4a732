//! Exact combinatorics of q-deformed ladder operators.
//!
//! Two oscillator families are covered: the q-boson (`AA† − qA†A = 1`) and
//! the q-fermion (`FF† + qF†F = 1`), the latter distinguished by brackets
//! `[n]` that alternate in sign with q and vanish for even `n` at `q = 1`.
//! The crate computes, over exact rational Laurent polynomials in `q`:
//!
//! - deformed integers, factorials, falling/rising factorials, binomials
//!   ([`qnum`]);
//! - the five ordering triangles — second-kind and first-kind Stirling
//!   analogues, unsigned Lah analogues, and the two anti-normal-ordering
//!   triangles — plus Bell row sums, with exhaustive exact verification of
//!   the expansion identities they satisfy ([`triangles`]);
//! - a formal Bargmann-space calculus where the raising operator is
//!   multiplication by ψ and the lowering operator is the deformed
//!   derivative ([`bargmann`]).
//!
//! Floating-point companions cross-check the exact layer:
//!
//! - truncated Fock-space matrix representations with `√[n]` amplitudes
//!   ([`fock`]);
//! - the deformed exponential series and the Bell-number series ratio,
//!   with convergence-regime classification ([`dobinski`]);
//! - moments of the deformed point process over a base density
//!   ([`point_process`]), integrated by adaptive Simpson quadrature
//!   ([`quad`]).
//!
//! Everything symbolic is exact: no floats enter until a caller evaluates
//! at a concrete `q`.

pub mod bargmann;
pub mod dobinski;
pub mod error;
pub mod fock;
pub mod laurent;
pub mod point_process;
pub mod qnum;
pub mod quad;
pub mod rational;
pub mod triangles;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use error::Error;
pub use laurent::LaurentPoly;
pub use qnum::QKind;
pub use rational::Rational;
pub use triangles::{Triangle, TriangleKind};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Which side the creation operators end up on when an operator word is
/// rewritten: `Normal` puts them left of annihilators, `Antinormal` right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderingMode {
    Normal,
    Antinormal,
}

impl fmt::Display for OrderingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingMode::Normal => write!(f, "normal"),
            OrderingMode::Antinormal => write!(f, "antinormal"),
        }
    }
}
