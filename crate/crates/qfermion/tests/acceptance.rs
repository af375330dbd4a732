//! Acceptance gate: every release criterion as one test, each printing a
//! single pass line with its measured runtime and failing loudly if either
//! the mathematics or the time budget is violated.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines; the harness's own ok/FAILED row carries the same
//! verdict either way.

use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfermion::bargmann::{representation_identity_holds, verify_bargmann_ordering, PsiSeries};
use qfermion::dobinski::{bell_dobinski, classify_regime, qexp_f, Regime};
use qfermion::fock::build_rep;
use qfermion::point_process::{infinitesimal_consistency, moment_exact, BaseDensity};
use qfermion::qnum::{qnum, shift_identity_check};
use qfermion::triangles::{
    bell_numbers, bell_q1_pattern, build_triangle, verify_falling_identity,
    verify_first_kind_identity, verify_lah_identity, verify_rising_identity,
};
use qfermion::{Error, LaurentPoly, OrderingMode, QKind, Rational, TriangleKind};

const FERMION_QS: [f64; 3] = [0.3, 0.7, 0.9];
const BOSON_QS: [f64; 3] = [0.5, 1.0, 2.0];

/// Runs the criterion body, enforces its wall-clock budget, and prints the
/// one-line verdict.
fn criterion(name: &str, budget: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    body();
    let took = start.elapsed();
    if took <= budget {
        println!("acceptance {name}: PASS ({took:.2?} <= {budget:.2?})");
    } else {
        println!("acceptance {name}: FAIL (took {took:.2?}, budget {budget:.2?})");
        panic!("{name} exceeded its {budget:.2?} budget: {took:.2?}");
    }
}

fn mono(num: i64, exp: i64) -> LaurentPoly {
    LaurentPoly::monomial(Rational::from_int(num), exp)
}

#[test]
fn criterion_1_bell_rows_expand_exactly() {
    criterion("1: Bell rows 1-5", Duration::from_secs(1), || {
        let one = LaurentPoly::one();
        let q1 = mono(1, 1);
        let q2 = mono(1, 2);
        let q3 = mono(1, 3);
        let b = |k: u32| qnum(QKind::Fermion, k);

        // Independent expansion of the published bracket expressions.
        let b1 = one.clone();
        let b2 = one.sub(&q1);
        let b3 = one.sub(&q1).sub(&q1.mul(&b(2))).sub(&q3);
        let b4 = one
            .sub(&q1)
            .sub(&q1.mul(&b(2)))
            .sub(&q1.mul(&b(2).pow(2)))
            .sub(&q3)
            .sub(&q3.mul(&b(2)))
            .sub(&q3.mul(&b(3)))
            .add(&mono(1, 6));
        let depth2 = q1.neg().sub(&q1.mul(&b(2))).sub(&q1.mul(&b(2).pow(2)));
        let depth3 = q3.neg().sub(&q3.mul(&b(2))).sub(&q3.mul(&b(3)));
        let b5 = one
            .sub(&q1)
            .add(&depth2.mul(&b(2).add(&q2)))
            .add(&depth3.mul(&b(3).sub(&q3)))
            .add(&mono(1, 6).mul(&b(4)))
            .add(&mono(1, 10));

        let got = bell_numbers(5).unwrap();
        let want = [b1, b2, b3, b4, b5];
        for (r, (g, w)) in got.iter().zip(&want).enumerate() {
            assert_eq!(g, w, "row {}", r + 1);
        }
    });
}

#[test]
fn criterion_2_bell_pattern_at_q_one() {
    criterion("2: q=1 Bell pattern r<=30", Duration::from_secs(1), || {
        let got = bell_q1_pattern(30).unwrap();
        let expected: Vec<i64> = (1..=30)
            .map(|r: i64| match r {
                1 => 1,
                2 => 0,
                _ => match r % 3 {
                    0 => (-1i64).pow(r as u32),
                    1 => (-1i64).pow(r as u32 + 1),
                    _ => 0,
                },
            })
            .collect();
        assert_eq!(got, expected);
    });
}

#[test]
fn criterion_3_falling_factorial_identity() {
    criterion("3: falling identity r<=10, n<=14", Duration::from_secs(10), || {
        let report = verify_falling_identity(10, 14).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checked, 95); // sum over r of (14 - r + 1)
    });
}

#[test]
fn criterion_4_inversion_lah_and_rising_identities() {
    criterion("4: first-kind + Lah + rising", Duration::from_secs(10), || {
        let first = verify_first_kind_identity(8, 12).unwrap();
        assert!(first.passed(), "{first}");
        let lah = verify_lah_identity(8, 12).unwrap();
        assert!(lah.passed(), "{lah}");
        for kind in [QKind::Boson, QKind::Fermion] {
            let rising = verify_rising_identity(kind, 8, 12).unwrap();
            assert!(rising.passed(), "{rising}");
        }
    });
}

#[test]
fn criterion_5_fock_oracle_residuals() {
    criterion("5: Fock residuals", Duration::from_secs(5), || {
        let samples: Vec<(QKind, f64)> = FERMION_QS
            .iter()
            .map(|&q| (QKind::Fermion, q))
            .chain(BOSON_QS.iter().map(|&q| (QKind::Boson, q)))
            .collect();

        for &(kind, q) in &samples {
            let rep = build_rep(kind, q, 12).unwrap();
            assert!(rep.algebra_residual() < 1e-12, "{kind} q={q}");
            for s in 1..=4 {
                assert!(rep.reorder_residual(s).unwrap() < 1e-10, "{kind} q={q} s={s}");
            }
        }

        let grids = [
            (QKind::Fermion, OrderingMode::Normal, TriangleKind::Stirling2F, &FERMION_QS),
            (QKind::Fermion, OrderingMode::Antinormal, TriangleKind::AntinormalFermion, &FERMION_QS),
            (QKind::Boson, OrderingMode::Antinormal, TriangleKind::AntinormalBoson, &BOSON_QS),
        ];
        for (kind, mode, tri_kind, qs) in grids {
            let tri = build_triangle(tri_kind, 5).unwrap();
            for &q in qs {
                let rep = build_rep(kind, q, 16).unwrap();
                for r in 1..=5 {
                    let res = rep.ordering_residual(r, mode, &tri).unwrap();
                    assert!(res < 1e-9, "{kind} {mode} q={q} r={r}: {res}");
                }
            }
        }
    });
}

#[test]
fn criterion_6_bargmann_equivalence() {
    criterion("6: Bargmann ordering + representation", Duration::from_secs(5), || {
        for mode in [OrderingMode::Normal, OrderingMode::Antinormal] {
            let report = verify_bargmann_ordering(mode, 6, 12).unwrap();
            assert!(report.passed(), "{report}");
        }

        // Representation identity on seeded-random series of degree <= 20.
        let mut rng = ChaCha8Rng::seed_from_u64(0x0f_ee_d0);
        for _ in 0..20 {
            let degree = (rng.next_u32() % 21) as usize;
            let coeffs: Vec<LaurentPoly> = (0..=degree)
                .map(|_| {
                    let terms = (0..1 + rng.next_u32() % 3).map(|_| {
                        let exp = (rng.next_u32() % 14) as i64 - 5;
                        let num = (rng.next_u32() % 101) as i64 - 50;
                        let den = 1 + (rng.next_u32() % 20) as i64;
                        (exp, Rational::new(num, den).unwrap())
                    });
                    LaurentPoly::from_terms(terms.collect::<Vec<_>>())
                })
                .collect();
            let phi = PsiSeries::new(coeffs);
            assert!(representation_identity_holds(&phi));
        }
    });
}

#[test]
fn criterion_7_dobinski_ratio_and_regimes() {
    criterion("7: series ratio vs exact Bell", Duration::from_secs(2), || {
        let bells = bell_numbers(6).unwrap();
        for q in [1.2, 1.5, 2.0, 3.0] {
            for r in 1..=6u32 {
                let got = bell_dobinski(r, q, 1e-12, 10_000).unwrap();
                assert!(got.converged, "q={q} r={r}");
                let exact = bells[r as usize - 1].eval_f64(q).unwrap();
                let rel = (got.value - exact).abs() / exact.abs().max(1.0);
                assert!(rel < 1e-8, "q={q} r={r}: {} vs {exact}", got.value);
            }
        }
        for q in [0.3, 0.5, 0.9] {
            assert_eq!(classify_regime(1.0, q), Regime::Divergent);
            let series = qexp_f(1.0, q, 1e-12, 1_000).unwrap();
            assert_eq!(series.regime, Regime::Divergent);
            assert!(series.value.is_nan());
            assert!(matches!(
                bell_dobinski(3, q, 1e-12, 1_000),
                Err(Error::SeriesRegime { regime: Regime::Divergent, .. })
            ));
        }
    });
}

#[test]
fn criterion_8_point_process_moments() {
    criterion("8: point-process moments", Duration::from_secs(2), || {
        // Full-interval (p = 1) exact path equals the bracket power.
        let one = Rational::one();
        for q in [Rational::new(3, 4).unwrap(), Rational::new(1, 3).unwrap(), Rational::from_int(2)] {
            for n in 1..=10u32 {
                let bracket = qnum(QKind::Fermion, n).eval_exact(&q).unwrap();
                for r in 1..=6u32 {
                    let moment = moment_exact(n, r, &q, &one).unwrap();
                    assert_eq!(moment, bracket.pow_i64(r as i64).unwrap(), "n={n} r={r}");
                }
            }
        }

        // First-order collapse: |moment - [n]p| <= C p^2 at small masses.
        let d = BaseDensity::uniform(0.0, 1.0).unwrap();
        let report = infinitesimal_consistency(6, 0.8, &d, &[0.001, 0.01, 0.1], 1e-10).unwrap();
        assert!(report.passed());
        assert_eq!(report.cases.len(), 12);
    });
}

#[test]
fn criterion_9_regime_properties() {
    criterion("9: bracket regime properties n<=200", Duration::from_secs(1), || {
        let below: Vec<Rational> = [(1, 10), (1, 4), (1, 2), (2, 3), (9, 10)]
            .iter()
            .map(|&(a, b)| Rational::new(a, b).unwrap())
            .collect();
        let above: Vec<Rational> = [(3, 2), (2, 1), (5, 2), (3, 1), (7, 2)]
            .iter()
            .map(|&(a, b)| Rational::new(a, b).unwrap())
            .collect();
        let one = Rational::one();

        // Tie every bracket to its one-step recurrence *symbolically* —
        // [n+1]_f = 1 - q[n]_f and [n+1]_b = 1 + q[n]_b as polynomials —
        // so the per-q sweeps below may fold the recurrence on exact
        // rationals instead of re-evaluating a fresh n-term polynomial at
        // every (q, n).
        let poly_one = LaurentPoly::one();
        for n in 0..200u32 {
            let step_f = poly_one.sub(&qnum(QKind::Fermion, n).mul_monomial(&one, 1));
            assert_eq!(qnum(QKind::Fermion, n + 1), step_f, "fermion n={n}");
            let step_b = poly_one.add(&qnum(QKind::Boson, n).mul_monomial(&one, 1));
            assert_eq!(qnum(QKind::Boson, n + 1), step_b, "boson n={n}");
        }

        for q in &below {
            let limit = (&one + q).recip().unwrap();
            let mut val = Rational::zero(); // [0]
            let mut qpow = one.clone(); // q^n
            for n in 0..=200u32 {
                assert!(!val.is_negative() && val <= one, "q={q} n={n}");
                let gap = (&val - &limit).abs();
                assert!(gap <= qpow, "q={q} n={n}");
                val = &one - &(q * &val);
                qpow *= q;
            }
        }
        for q in &above {
            let mut val = Rational::zero();
            for n in 1..=200u32 {
                val = &one - &(q * &val);
                if n % 2 == 0 {
                    assert!(val.is_negative(), "q={q} n={n}");
                } else {
                    assert!(val.is_positive(), "q={q} n={n}");
                }
            }
        }
        let mut fermion = Rational::zero();
        let mut boson = Rational::zero();
        for n in 0..=200u32 {
            assert_eq!(fermion, Rational::from_int((n % 2) as i64));
            assert_eq!(boson, Rational::from_int(n as i64));
            fermion = &one - &fermion;
            boson = &one + &boson;
        }
        // Shift identity across the full documented range.
        for n in 0..=30 {
            for r in 0..=n {
                assert!(shift_identity_check(n, r).unwrap());
            }
        }
    });
}
