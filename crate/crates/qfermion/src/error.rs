use crate::dobinski::Regime;
use crate::qnum::QKind;
use crate::triangles::TriangleKind;
use crate::OrderingMode;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument violated a precondition stated in the caller's contract.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exact evaluation at q = 0 was requested for a polynomial with
    /// negative exponents.
    #[error("cannot evaluate at q = 0: the polynomial has negative exponents")]
    EvalAtZero,

    /// Division by the zero polynomial or the zero rational.
    #[error("division by zero")]
    DivisionByZero,

    /// An exact polynomial division left a nonzero remainder. This signals
    /// an internal inconsistency, not a recoverable input state.
    #[error("exact division left a nonzero remainder")]
    InexactDivision,

    /// A real Fock representation was requested in a regime where the ladder
    /// amplitudes are imaginary (fermionic kind with q > 1).
    #[error("real Fock representation undefined for fermions at q = {q}; use the complex builder")]
    UnsupportedRegime { q: f64 },

    /// The triangle handed to an ordering check does not belong to the
    /// representation's kind and ordering mode.
    #[error("triangle {triangle:?} does not match a {kind:?} representation in {mode:?} ordering")]
    KindMismatch {
        triangle: TriangleKind,
        kind: QKind,
        mode: OrderingMode,
    },

    /// A series evaluation was requested in a regime where the series does
    /// not converge; the value is refused rather than approximated.
    #[error("series is {regime:?} at q = {q}; no value is defined there")]
    SeriesRegime { q: f64, regime: Regime },

    /// Malformed textual input (rational literals, serialized polynomials).
    #[error("parse error: {0}")]
    Parse(String),

    /// A tabulated density whose integral over its support is not 1.
    #[error("density integrates to {integral}, expected 1")]
    NotNormalized { integral: f64 },
}
