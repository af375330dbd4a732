//! Sparse Laurent polynomials in one variable `q` with [`Rational`]
//! coefficients.
//!
//! Triangle entries and deformed integers live in `Z[q, q^-1]` (over the
//! rationals), so exponents are signed. The representation is a sorted
//! exponent -> coefficient map that never stores zero coefficients; two
//! values are equal iff their maps are equal.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::rational::Rational;

/// Element of `Q[q, q^-1]`, kept in canonical sparse form.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// The variable `q` itself.
    pub fn var() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `c * q^exp`.
    pub fn monomial(c: Rational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// Sums duplicate exponents and drops zeros, so any term list is valid.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut out = Self::zero();
        for (exp, c) in terms {
            out.add_term(exp, c);
        }
        out
    }

    fn add_term(&mut self, exp: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    /// Terms in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Lowest exponent with a nonzero coefficient; `None` for the zero value.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of `q^exp` (zero when absent).
    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            out.add_term(*exp, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            out.add_term(*exp, -c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Multiplies by the monomial `c * q^exp` in one pass.
    pub fn mul_monomial(&self, c: &Rational, exp: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, k)| (e + exp, k * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                out = out.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Substitutes `q -> -q`, i.e. flips the sign of odd-exponent terms.
    pub fn subst_neg_q(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Exact evaluation at a rational point. Zero is rejected whenever a
    /// negative exponent is present.
    pub fn eval_exact(&self, q: &Rational) -> Result<Rational, Error> {
        if q.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::EvalAtZero);
        }
        let mut acc = Rational::zero();
        for (exp, c) in &self.terms {
            acc += &(c * &q.pow_i64(*exp)?);
        }
        Ok(acc)
    }

    /// Floating evaluation; same zero guard as [`Self::eval_exact`].
    pub fn eval_f64(&self, q: f64) -> Result<f64, Error> {
        if q == 0.0 && self.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::EvalAtZero);
        }
        let mut acc = 0.0;
        for (exp, c) in &self.terms {
            acc += c.to_f64() * q.powi(*exp as i32);
        }
        Ok(acc)
    }

    /// Exact division: returns `self / rhs` when the quotient lies in
    /// `Q[q, q^-1]`, and [`Error::InexactDivision`] otherwise.
    ///
    /// Cancels lowest terms first; the quotient's top exponent is bounded by
    /// `self.max_exp - rhs.max_exp`, so overrunning that bound proves the
    /// division inexact (and guarantees termination).
    pub fn div_exact(&self, rhs: &Self) -> Result<Self, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let rhs_min = rhs.min_exp().expect("nonzero");
        let rhs_lead = rhs.coeff(rhs_min);
        let top = self.max_exp().expect("nonzero") - rhs.max_exp().expect("nonzero");

        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rem_min) = rem.min_exp() {
            let step_exp = rem_min - rhs_min;
            if step_exp > top {
                return Err(Error::InexactDivision);
            }
            let step_coeff = &rem.coeff(rem_min) / &rhs_lead;
            rem = rem.sub(&rhs.mul_monomial(&step_coeff, step_exp));
            quot.add_term(step_exp, step_coeff);
        }
        Ok(quot)
    }
}

impl fmt::Display for LaurentPoly {
    /// Human form in ascending powers, e.g. `1 - 2q + 2q^2 - q^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && *exp != 0;
            if !unit_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match exp {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{exp}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    /// Wire form: ascending `[[exp, "num/den"], ...]`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.fraction_string()))
            .collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i64, String)>::deserialize(deserializer)?;
        let mut terms = BTreeMap::new();
        for (exp, s) in pairs {
            let c: Rational = s.parse().map_err(D::Error::custom)?;
            if terms.insert(exp, c).is_some() {
                return Err(D::Error::custom(format!("duplicate exponent {exp}")));
            }
        }
        terms.retain(|_, c: &mut Rational| !c.is_zero());
        Ok(Self { terms })
    }
}
