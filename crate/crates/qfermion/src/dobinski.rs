//! Floating-point evaluation of the fermionic q-exponential series
//! `Σ xⁿ/[n]!` and of the Bell numbers as the ratio of two such series,
//! with convergence-regime classification.
//!
//! The series only defines a number in part of the (x, q) plane: the term
//! ratio `|x|/|[n+1]|` tends to `|x|(1+q)` for q < 1 and to 0 for q > 1,
//! and at q = 1 the even brackets vanish so the factorials are zero from
//! n = 2 on. Outside the convergent regime these functions classify and
//! refuse instead of summing garbage.

use serde::Serialize;

use crate::error::Error;

/// Where a requested (x, q) point sits relative to the series' domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Convergent,
    Divergent,
    Boundary,
}

/// Outcome of a truncated series evaluation. `value` is NaN (JSON null)
/// whenever `regime` is not convergent; `converged` additionally requires
/// the last included term to be below the relative tolerance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: u32,
    pub converged: bool,
    pub regime: Regime,
}

/// The fermionic bracket `(1 − (−1)ⁿ qⁿ)/(1 + q)` at floating q.
fn bracket_f(n: u32, q: f64) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    (1.0 - sign * q.powi(n as i32)) / (1.0 + q)
}

/// Classifies the term-ratio limit of `Σ xⁿ/[n]!` at (x, q).
pub fn classify_regime(x: f64, q: f64) -> Regime {
    if x == 0.0 {
        return Regime::Convergent; // the series is identically 1
    }
    if q > 1.0 {
        return Regime::Convergent; // brackets grow like qⁿ, ratio -> 0
    }
    if q == 1.0 {
        return Regime::Boundary; // [n]! = 0 for n >= 2
    }
    let limit = x.abs() * (1.0 + q);
    if limit < 1.0 {
        Regime::Convergent
    } else if limit > 1.0 {
        Regime::Divergent
    } else {
        Regime::Boundary
    }
}

fn check_common(q: f64, tol: f64, max_terms: u32) -> Result<(), Error> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if max_terms < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 terms, got {max_terms}"
        )));
    }
    Ok(())
}

/// Truncated fermionic q-exponential `Σ_{n≥0} xⁿ/[n]!`.
///
/// Sums only in the convergent regime, accumulating each term from the
/// previous one (fixed order, so results are bit-deterministic). Elsewhere
/// the result carries the regime classification and a NaN value.
pub fn qexp_f(x: f64, q: f64, tol: f64, max_terms: u32) -> Result<SeriesResult, Error> {
    check_common(q, tol, max_terms)?;
    let regime = classify_regime(x, q);
    if regime != Regime::Convergent {
        return Ok(SeriesResult {
            value: f64::NAN,
            terms_used: 0,
            converged: false,
            regime,
        });
    }

    if x == 0.0 {
        // Identically the n = 0 term.
        return Ok(SeriesResult {
            value: 1.0,
            terms_used: 1,
            converged: true,
            regime,
        });
    }

    let mut sum = 1.0; // n = 0 term
    let mut term = 1.0;
    let mut used = 1u32;
    let mut converged = false;
    for n in 1..max_terms {
        term *= x / bracket_f(n, q);
        sum += term;
        used = n + 1;
        if term.abs() <= tol * sum.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    Ok(SeriesResult {
        value: sum,
        terms_used: used,
        converged,
        regime,
    })
}

/// Bell number by series ratio: `(Σ [n]^r/[n]!) / (Σ 1/[n]!)`, both sums
/// truncated at the same index.
///
/// Only q > 1 converges; q = 1 is singular and q < 1 divergent at x = 1,
/// so those are refused with a regime error rather than evaluated.
pub fn bell_dobinski(r: u32, q: f64, tol: f64, max_terms: u32) -> Result<SeriesResult, Error> {
    check_common(q, tol, max_terms)?;
    if r < 1 {
        return Err(Error::Domain("moment order r must be >= 1".into()));
    }
    if q <= 1.0 {
        let regime = if q == 1.0 {
            Regime::Boundary
        } else {
            Regime::Divergent
        };
        return Err(Error::SeriesRegime { q, regime });
    }

    let mut inv_fact = 1.0; // 1/[n]! at the current n
    let mut den = 1.0; // n = 0 term of e(1)
    let mut num = 0.0; // numerator starts at n = 1
    let mut used = 1u32;
    let mut converged = false;
    for n in 1..max_terms {
        let b = bracket_f(n, q);
        inv_fact /= b;
        let den_term = inv_fact;
        let num_term = b.powi(r as i32) * inv_fact;
        den += den_term;
        num += num_term;
        used = n + 1;
        let num_ok = num_term.abs() <= tol * num.abs().max(f64::MIN_POSITIVE);
        let den_ok = den_term.abs() <= tol * den.abs().max(f64::MIN_POSITIVE);
        if num_ok && den_ok {
            converged = true;
            break;
        }
    }
    Ok(SeriesResult {
        value: num / den,
        terms_used: used,
        converged,
        regime: Regime::Convergent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::triangles::bell_numbers;

    /// Independent route: partial sums of xⁿ/[n]! in exact rationals,
    /// with the bracket taken from its closed form (1 − (−q)ⁿ)/(1 + q).
    fn qexp_exact_partial(x: &Rational, q: &Rational, terms: u32) -> f64 {
        let one_plus_q = &Rational::one() + q;
        let mut sum = Rational::one(); // n = 0 term
        let mut term = Rational::one();
        let mut neg_q_pow = Rational::one(); // (−q)ⁿ
        for _ in 1..terms {
            neg_q_pow *= &(-q);
            let bracket = &(&Rational::one() - &neg_q_pow) / &one_plus_q;
            term = &(&term * x) / &bracket;
            sum += &term;
        }
        sum.to_f64()
    }

    #[test]
    fn zero_argument() {
        let r = qexp_f(0.0, 0.3, 1e-12, 100).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.terms_used, 1);
        assert!(r.converged);
        assert_eq!(r.regime, Regime::Convergent);
    }

    #[test]
    fn convergent_above_one() {
        let r = qexp_f(1.0, 2.0, 1e-13, 1000).unwrap();
        assert!(r.converged);
        assert_eq!(r.regime, Regime::Convergent);
        let oracle = qexp_exact_partial(&Rational::one(), &Rational::from_int(2), 60);
        assert!((r.value - oracle).abs() < 1e-12, "{} vs {}", r.value, oracle);
    }

    #[test]
    fn convergent_below_one_small_x() {
        // |x|(1+q) = 0.4 * 1.5 = 0.6 < 1.
        let r = qexp_f(0.4, 0.5, 1e-13, 10_000).unwrap();
        assert!(r.converged);
        let oracle = qexp_exact_partial(
            &Rational::new(2, 5).unwrap(),
            &Rational::new(1, 2).unwrap(),
            120,
        );
        assert!((r.value - oracle).abs() < 1e-10, "{} vs {}", r.value, oracle);
    }

    #[test]
    fn divergent_and_boundary() {
        for q in [0.3, 0.5, 0.9] {
            let r = qexp_f(1.0, q, 1e-12, 1000).unwrap();
            assert_eq!(r.regime, Regime::Divergent, "q = {q}");
            assert!(r.value.is_nan());
            assert!(!r.converged);
        }
        let at_one = qexp_f(1.0, 1.0, 1e-12, 1000).unwrap();
        assert_eq!(at_one.regime, Regime::Boundary);
        assert!(at_one.value.is_nan());
        // |x|(1+q) = 0.8 * 1.25 = 1 exactly.
        let edge = qexp_f(0.8, 0.25, 1e-12, 1000).unwrap();
        assert_eq!(edge.regime, Regime::Boundary);
    }

    #[test]
    fn bell_ratio_matches_exact_polynomials() {
        let bells = bell_numbers(6).unwrap();
        for q in [1.2, 1.5, 2.0, 3.0] {
            for r in 1..=6u32 {
                let got = bell_dobinski(r, q, 1e-13, 10_000).unwrap();
                assert!(got.converged, "q={q}, r={r}");
                let exact = bells[r as usize - 1].eval_f64(q).unwrap();
                let rel = (got.value - exact).abs() / exact.abs().max(1.0);
                assert!(rel < 1e-8, "q={q}, r={r}: {} vs {exact}", got.value);
            }
        }
    }

    #[test]
    fn bell_ratio_exact_cases() {
        // B1 = 1 and B2 = 1 - q for every q; spot-check at q = 2.
        let b1 = bell_dobinski(1, 2.0, 1e-13, 10_000).unwrap();
        assert!((b1.value - 1.0).abs() < 1e-10);
        let b2 = bell_dobinski(2, 2.0, 1e-13, 10_000).unwrap();
        assert!((b2.value - (-1.0)).abs() < 1e-10);
    }

    #[test]
    fn bell_ratio_refuses_low_q() {
        match bell_dobinski(3, 0.5, 1e-12, 100) {
            Err(Error::SeriesRegime { regime, .. }) => assert_eq!(regime, Regime::Divergent),
            other => panic!("expected regime error, got {other:?}"),
        }
        match bell_dobinski(3, 1.0, 1e-12, 100) {
            Err(Error::SeriesRegime { regime, .. }) => assert_eq!(regime, Regime::Boundary),
            other => panic!("expected regime error, got {other:?}"),
        }
    }

    #[test]
    fn input_validation() {
        assert!(qexp_f(1.0, 0.0, 1e-12, 100).is_err());
        assert!(qexp_f(1.0, -1.0, 1e-12, 100).is_err());
        assert!(qexp_f(1.0, 2.0, 0.0, 100).is_err());
        assert!(qexp_f(1.0, 2.0, 1e-12, 1).is_err());
        assert!(bell_dobinski(0, 2.0, 1e-12, 100).is_err());
    }

    #[test]
    fn deterministic() {
        let a = bell_dobinski(5, 1.3, 1e-12, 10_000).unwrap();
        let b = bell_dobinski(5, 1.3, 1e-12, 10_000).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.terms_used, b.terms_used);
    }

    #[test]
    fn series_json_shape() {
        let r = qexp_f(1.0, 0.5, 1e-12, 100).unwrap();
        let json = serde_json::to_value(r).unwrap();
        assert!(json["value"].is_null()); // NaN serializes to null
        assert_eq!(json["regime"], "divergent");
    }
}
