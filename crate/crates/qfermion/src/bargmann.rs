//! Formal Bargmann-space calculus for the q-fermion: states are
//! polynomials in the coherent-state variable ψ, the raising operator acts
//! as multiplication by ψ, and the lowering operator as the deformed
//! derivative `ψⁿ ↦ [n]·ψⁿ⁻¹`.
//!
//! ψ is quasi-Grassmann (anticommutes with the ladder operators but
//! ψ² ≠ 0); no anticommuting engine is needed because both transported
//! operators only shift monomial degree and scale by brackets. Series are
//! finite and exact — coefficients are Laurent polynomials in q — so every
//! ordering identity checked here is checked exactly, radical-free.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::laurent::LaurentPoly;
use crate::qnum::{qnum, QKind};
use crate::rational::Rational;
use crate::triangles::{build_triangle, IdentityFailure, IdentityReport, TriangleKind};
use crate::OrderingMode;

/// Polynomial `Σ_n coeffs[n]·ψⁿ` with exact coefficients; trailing zero
/// coefficients are trimmed, so equal values compare equal.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PsiSeries {
    coeffs: Vec<LaurentPoly>,
}

impl PsiSeries {
    /// Canonicalizes by dropping trailing zeros.
    pub fn new(mut coeffs: Vec<LaurentPoly>) -> Self {
        while coeffs.last().is_some_and(LaurentPoly::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The monomial ψⁿ.
    pub fn psi_power(n: usize) -> Self {
        let mut coeffs = vec![LaurentPoly::zero(); n + 1];
        coeffs[n] = LaurentPoly::one();
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    /// Coefficient of ψⁿ (zero beyond the stored degree).
    pub fn coeff(&self, n: usize) -> LaurentPoly {
        self.coeffs.get(n).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..len).map(|n| self.coeff(n).add(&rhs.coeff(n))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..len).map(|n| self.coeff(n).sub(&rhs.coeff(n))).collect())
    }

    /// Scales every coefficient by a Laurent-polynomial scalar.
    pub fn scale(&self, c: &LaurentPoly) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }
}

impl fmt::Display for PsiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})psi")?,
                _ => write!(f, "({c})psi^{n}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PsiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PsiSeries({self})")
    }
}

impl Serialize for PsiSeries {
    /// Wire form: array of coefficient serializations indexed by degree.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PsiSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Self::new(Vec::<LaurentPoly>::deserialize(deserializer)?))
    }
}

/// The raising operator: multiplication by ψ (degree shift up).
pub fn psi_multiply(phi: &PsiSeries) -> PsiSeries {
    if phi.is_zero() {
        return PsiSeries::zero();
    }
    let mut coeffs = Vec::with_capacity(phi.coeffs.len() + 1);
    coeffs.push(LaurentPoly::zero());
    coeffs.extend(phi.coeffs.iter().cloned());
    PsiSeries::new(coeffs)
}

/// The lowering operator by the coefficient rule `ψⁿ ↦ [n]·ψⁿ⁻¹`.
pub fn q_derivative(phi: &PsiSeries) -> PsiSeries {
    let coeffs = phi
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c.mul(&qnum(QKind::Fermion, n as u32)))
        .collect();
    PsiSeries::new(coeffs)
}

/// The same operator by its defining difference quotient
/// `(φ(ψ) − φ(−qψ)) / (ψ(1+q))`.
///
/// The ψⁿ coefficient of the numerator is `c_n·(1 − (−1)ⁿqⁿ)`, which
/// `1 + q` always divides exactly; a nonzero remainder would mean the
/// arithmetic itself is broken, so it surfaces as an error rather than
/// being absorbed.
pub fn q_derivative_quotient(phi: &PsiSeries) -> Result<PsiSeries, Error> {
    let one_plus_q = LaurentPoly::one().add(&LaurentPoly::var());
    let mut coeffs = Vec::new();
    for (n, c) in phi.coeffs.iter().enumerate().skip(1) {
        // c - c·(-1)^n q^n, then exact division by 1 + q; the ψ in the
        // denominator is the degree shift n -> n-1.
        let sign = if n % 2 == 0 {
            Rational::one()
        } else {
            Rational::from_int(-1)
        };
        let numerator = c.sub(&c.mul_monomial(&sign, n as i64));
        coeffs.push(numerator.div_exact(&one_plus_q)?);
    }
    Ok(PsiSeries::new(coeffs))
}

/// Checks the transported defining relation `D(M(φ)) + q·M(D(φ)) = φ`
/// exactly on all coefficients.
pub fn representation_identity_holds(phi: &PsiSeries) -> bool {
    let dm = q_derivative(&psi_multiply(phi));
    let md = psi_multiply(&q_derivative(phi));
    dm.add(&md.scale(&LaurentPoly::var())) == *phi
}

/// Verifies the ordered-power expansion on every monomial ψⁿ, n ≤ nmax,
/// for r ≤ rmax, by actual operator composition against the triangle row:
///
/// - normal: `(ψD)^r = Σ_s F^r_s ψ^s D^s` (second-kind triangle);
/// - antinormal: `(Dψ)^r = Σ_s B^r_s D^s ψ^s` (anti-normal triangle).
///
/// On a failing monomial, the report keeps both sides' coefficients at the
/// first differing degree.
pub fn verify_bargmann_ordering(
    mode: OrderingMode,
    rmax: u32,
    nmax: u32,
) -> Result<IdentityReport, Error> {
    if rmax < 1 || nmax < 2 * rmax {
        return Err(Error::Domain(format!(
            "need rmax >= 1 and nmax >= 2*rmax, got rmax={rmax}, nmax={nmax}"
        )));
    }
    let (tri_kind, name) = match mode {
        OrderingMode::Normal => (TriangleKind::Stirling2F, "bargmann-normal"),
        OrderingMode::Antinormal => (TriangleKind::AntinormalFermion, "bargmann-antinormal"),
    };
    let tri = build_triangle(tri_kind, rmax as usize)?;
    let mut report = IdentityReport {
        identity: name.to_string(),
        checked: 0,
        failures: Vec::new(),
    };
    for n in 0..=nmax {
        let phi = PsiSeries::psi_power(n as usize);
        // lhs_by_r[r] = X^r φ with X the mode's composite operator.
        let mut lhs = phi.clone();
        for r in 1..=rmax {
            lhs = match mode {
                OrderingMode::Normal => psi_multiply(&q_derivative(&lhs)),
                OrderingMode::Antinormal => q_derivative(&psi_multiply(&lhs)),
            };
            let mut rhs = PsiSeries::zero();
            for s in 1..=r {
                let mut word = phi.clone();
                match mode {
                    OrderingMode::Normal => {
                        for _ in 0..s {
                            word = q_derivative(&word);
                        }
                        for _ in 0..s {
                            word = psi_multiply(&word);
                        }
                    }
                    OrderingMode::Antinormal => {
                        for _ in 0..s {
                            word = psi_multiply(&word);
                        }
                        for _ in 0..s {
                            word = q_derivative(&word);
                        }
                    }
                }
                rhs = rhs.add(&word.scale(&tri.entry(r as usize, s as i64)));
            }
            report.checked += 1;
            if lhs != rhs {
                let top = lhs.degree().unwrap_or(0).max(rhs.degree().unwrap_or(0));
                let bad = (0..=top)
                    .find(|&d| lhs.coeff(d) != rhs.coeff(d))
                    .unwrap_or(0);
                report.failures.push(IdentityFailure {
                    r,
                    n,
                    lhs: lhs.coeff(bad),
                    rhs: rhs.coeff(bad),
                });
            }
        }
    }
    Ok(report)
}
