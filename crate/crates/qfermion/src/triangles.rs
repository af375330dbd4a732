//! The five ladder-operator coefficient triangles, their Bell-number row
//! sums, and exact verification of the expansion identities they encode.
//!
//! Each triangle is generated row-by-row from a one-entry seed by a
//! two-term recurrence in exact Laurent arithmetic. Entries outside a row
//! (s = 0 below the first column, s = r+1 past the diagonal) are implicitly
//! zero; the Lah triangle alone carries an explicit s = 0 column, which
//! stays identically zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::laurent::LaurentPoly;
use crate::qnum::{falling_fact, qnum, rising_fact, QKind};
use crate::rational::Rational;

/// Which recurrence generates the triangle.
///
/// - `Stirling2F`: normal-ordering of `(F†F)^r` (second-kind analogue).
/// - `Stirling1F`: the inverse expansion (first-kind analogue).
/// - `LahF`: connects rising to falling factorials.
/// - `AntinormalBoson` / `AntinormalFermion`: anti-normal ordering of
///   `(AA†)^r` and `(FF†)^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriangleKind {
    #[serde(rename = "stirling2f")]
    Stirling2F,
    #[serde(rename = "stirling1f")]
    Stirling1F,
    #[serde(rename = "lahf")]
    LahF,
    #[serde(rename = "antinormal_boson")]
    AntinormalBoson,
    #[serde(rename = "antinormal_fermion")]
    AntinormalFermion,
}

impl TriangleKind {
    pub const ALL: [TriangleKind; 5] = [
        TriangleKind::Stirling2F,
        TriangleKind::Stirling1F,
        TriangleKind::LahF,
        TriangleKind::AntinormalBoson,
        TriangleKind::AntinormalFermion,
    ];

    /// Oscillator family whose brackets appear in the recurrence.
    pub fn qkind(&self) -> QKind {
        match self {
            TriangleKind::AntinormalBoson => QKind::Boson,
            _ => QKind::Fermion,
        }
    }

    /// Lowest column index a row carries (the Lah triangle keeps s = 0).
    pub fn s_offset(&self) -> i64 {
        match self {
            TriangleKind::LahF => 0,
            _ => 1,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            TriangleKind::Stirling2F => "stirling2f",
            TriangleKind::Stirling1F => "stirling1f",
            TriangleKind::LahF => "lahf",
            TriangleKind::AntinormalBoson => "antinormal_boson",
            TriangleKind::AntinormalFermion => "antinormal_fermion",
        }
    }
}

impl fmt::Display for TriangleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

impl FromStr for TriangleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        TriangleKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown triangle kind `{s}`")))
    }
}

/// A fully built triangle: `rows[i]` is row `r = i + 1`, holding entries
/// for `s = s_offset() ..= r` in order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    kind: TriangleKind,
    rows: Vec<Vec<LaurentPoly>>,
}

impl Triangle {
    pub fn kind(&self) -> TriangleKind {
        self.kind
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<LaurentPoly>] {
        &self.rows
    }

    /// Row `r`, 1-indexed.
    pub fn row(&self, r: usize) -> Option<&[LaurentPoly]> {
        if r == 0 {
            return None;
        }
        self.rows.get(r - 1).map(|v| v.as_slice())
    }

    /// Entry `(r, s)` with implicit zeros outside the stored band.
    pub fn entry(&self, r: usize, s: i64) -> LaurentPoly {
        let Some(row) = self.row(r) else {
            return LaurentPoly::zero();
        };
        let idx = s - self.kind.s_offset();
        if idx < 0 || idx as usize >= row.len() {
            return LaurentPoly::zero();
        }
        row[idx as usize].clone()
    }
}

/// `(-1)^k` as a rational.
fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        Rational::from_int(-1)
    }
}

/// Builds the first `rows` rows of the kind's triangle.
pub fn build_triangle(kind: TriangleKind, rows: usize) -> Result<Triangle, Error> {
    if rows < 1 {
        return Err(Error::Domain("triangle needs at least one row".into()));
    }
    let seed = match kind {
        TriangleKind::LahF => vec![LaurentPoly::zero(), LaurentPoly::one()],
        _ => vec![LaurentPoly::one()],
    };
    let mut tri = Triangle {
        kind,
        rows: vec![seed],
    };
    for r in 1..rows {
        let next = next_row(&tri, r);
        tri.rows.push(next);
    }
    Ok(tri)
}

/// Row `r + 1` from row `r` (1-indexed), per the kind's recurrence.
fn next_row(tri: &Triangle, r: usize) -> Vec<LaurentPoly> {
    let kind = tri.kind;
    let fam = kind.qkind();
    let ri = r as i64;
    (kind.s_offset()..=ri + 1)
        .map(|s| {
            let lower = tri.entry(r, s - 1);
            let same = tri.entry(r, s);
            match kind {
                // carry in with (-1)^(s-1) q^(s-1); keep with [s]_f
                TriangleKind::Stirling2F => lower
                    .mul_monomial(&sign(s - 1), s - 1)
                    .add(&same.mul(&qnum(fam, s as u32))),
                // both terms share the factor (-1)^r q^(-r); keep with -[r]_f
                TriangleKind::Stirling1F => lower
                    .sub(&same.mul(&qnum(fam, r as u32)))
                    .mul_monomial(&sign(ri), -ri),
                // carry in with (-1)^(n+s-1) q^(n+s-1); keep with [s+n]_f
                TriangleKind::LahF => lower
                    .mul_monomial(&sign(ri + s - 1), ri + s - 1)
                    .add(&same.mul(&qnum(fam, (s + ri) as u32))),
                // carry in with q^-(s-1); keep with -[s]_b q^-s
                TriangleKind::AntinormalBoson => lower
                    .mul_monomial(&Rational::one(), -(s - 1))
                    .sub(
                        &same
                            .mul(&qnum(fam, s as u32))
                            .mul_monomial(&Rational::one(), -s),
                    ),
                // carry in with (-1)^(s-1) q^-(s-1); keep with -(-1)^s q^-s [s]_f
                TriangleKind::AntinormalFermion => lower
                    .mul_monomial(&sign(s - 1), -(s - 1))
                    .sub(&same.mul(&qnum(fam, s as u32)).mul_monomial(&sign(s), -s)),
            }
        })
        .collect()
}

/// Row sums of the second-kind triangle: the deformed Bell numbers.
pub fn bell_numbers(rows: usize) -> Result<Vec<LaurentPoly>, Error> {
    let tri = build_triangle(TriangleKind::Stirling2F, rows)?;
    Ok(tri
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .fold(LaurentPoly::zero(), |acc, e| acc.add(e))
        })
        .collect())
}

/// Bell numbers evaluated exactly at q = 1 (always integers).
pub fn bell_q1_pattern(rows: usize) -> Result<Vec<i64>, Error> {
    let one = Rational::one();
    bell_numbers(rows)?
        .iter()
        .map(|b| {
            b.eval_exact(&one)?
                .to_i64()
                .ok_or_else(|| Error::Domain("q=1 Bell value out of i64 range".into()))
        })
        .collect()
}

/// Closed form of the q = 1 Bell sequence: 1, 0, then a period-3 sign
/// pattern in r.
pub fn bell_q1_expected(r: usize) -> i64 {
    match r {
        1 => 1,
        2 => 0,
        _ => {
            let neg = |k: usize| if k % 2 == 0 { 1 } else { -1 };
            match r % 3 {
                0 => neg(r),
                1 => neg(r + 1),
                _ => 0,
            }
        }
    }
}

/// One failing pair from an identity sweep, with both sides kept for
/// diagnosis.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityFailure {
    pub r: u32,
    pub n: u32,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
}

/// Outcome of an exhaustive exact identity sweep. Failures are collected,
/// not thrown: a failure is diagnostic data.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub checked: u64,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    fn new(identity: &str) -> Self {
        Self {
            identity: identity.to_string(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, r: u32, n: u32, lhs: LaurentPoly, rhs: LaurentPoly) {
        self.checked += 1;
        if lhs != rhs {
            self.failures.push(IdentityFailure { r, n, lhs, rhs });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} checked, {} failed",
            self.identity,
            self.checked,
            self.failures.len()
        )
    }
}

/// Checks `[n]^r = Σ_s F^r_s · falling(n, s)` exactly for all
/// `1 ≤ r ≤ rmax`, `r ≤ n ≤ nmax`.
pub fn verify_falling_identity(rmax: u32, nmax: u32) -> Result<IdentityReport, Error> {
    if rmax < 1 || nmax < rmax {
        return Err(Error::Domain(format!(
            "need nmax >= rmax >= 1, got rmax={rmax}, nmax={nmax}"
        )));
    }
    let tri = build_triangle(TriangleKind::Stirling2F, rmax as usize)?;
    let mut report = IdentityReport::new("falling");
    for r in 1..=rmax {
        for n in r..=nmax {
            let lhs = qnum(QKind::Fermion, n).pow(r);
            let mut rhs = LaurentPoly::zero();
            for s in 1..=r {
                let term = tri
                    .entry(r as usize, s as i64)
                    .mul(&falling_fact(QKind::Fermion, n, s)?);
                rhs = rhs.add(&term);
            }
            report.record(r, n, lhs, rhs);
        }
    }
    Ok(report)
}

/// Checks the inverse expansion `falling(n, r) = Σ_s S^r_s · [n]^s`
/// exactly for all `1 ≤ r ≤ rmax`, `r ≤ n ≤ nmax`.
pub fn verify_first_kind_identity(rmax: u32, nmax: u32) -> Result<IdentityReport, Error> {
    if rmax < 1 || nmax < rmax {
        return Err(Error::Domain(format!(
            "need nmax >= rmax >= 1, got rmax={rmax}, nmax={nmax}"
        )));
    }
    let tri = build_triangle(TriangleKind::Stirling1F, rmax as usize)?;
    let mut report = IdentityReport::new("first-kind");
    for r in 1..=rmax {
        for n in r..=nmax {
            let lhs = falling_fact(QKind::Fermion, n, r)?;
            let mut rhs = LaurentPoly::zero();
            for s in 1..=r {
                let term = tri
                    .entry(r as usize, s as i64)
                    .mul(&qnum(QKind::Fermion, n).pow(s));
                rhs = rhs.add(&term);
            }
            report.record(r, n, lhs, rhs);
        }
    }
    Ok(report)
}

/// Checks `rising(r−1, n) = Σ_{s=0}^n L^n_s · falling(r, s)` exactly for
/// all `1 ≤ n ≤ nmax`, `n ≤ r ≤ rmax`.
pub fn verify_lah_identity(nmax: u32, rmax: u32) -> Result<IdentityReport, Error> {
    if nmax < 1 || rmax < nmax {
        return Err(Error::Domain(format!(
            "need rmax >= nmax >= 1, got nmax={nmax}, rmax={rmax}"
        )));
    }
    let tri = build_triangle(TriangleKind::LahF, nmax as usize)?;
    let mut report = IdentityReport::new("lah");
    for n in 1..=nmax {
        for r in n..=rmax {
            let lhs = rising_fact(QKind::Fermion, r - 1, n);
            let mut rhs = LaurentPoly::zero();
            for s in 0..=n {
                let term = tri
                    .entry(n as usize, s as i64)
                    .mul(&falling_fact(QKind::Fermion, r, s)?);
                rhs = rhs.add(&term);
            }
            report.record(r, n, lhs, rhs);
        }
    }
    Ok(report)
}

/// Checks `[n+1]^r = Σ_s T^r_s · rising(n, s)` exactly for all
/// `1 ≤ r ≤ rmax`, `0 ≤ n ≤ nmax`, where `T` is the anti-normal triangle
/// of the given family.
pub fn verify_rising_identity(kind: QKind, rmax: u32, nmax: u32) -> Result<IdentityReport, Error> {
    if rmax < 1 || nmax < 1 {
        return Err(Error::Domain(format!(
            "need rmax, nmax >= 1, got rmax={rmax}, nmax={nmax}"
        )));
    }
    let tri_kind = match kind {
        QKind::Boson => TriangleKind::AntinormalBoson,
        QKind::Fermion => TriangleKind::AntinormalFermion,
    };
    let tri = build_triangle(tri_kind, rmax as usize)?;
    let mut report = IdentityReport::new(match kind {
        QKind::Boson => "rising-b",
        QKind::Fermion => "rising-f",
    });
    for r in 1..=rmax {
        for n in 0..=nmax {
            let lhs = qnum(kind, n + 1).pow(r);
            let mut rhs = LaurentPoly::zero();
            for s in 1..=r {
                let term = tri
                    .entry(r as usize, s as i64)
                    .mul(&rising_fact(kind, n, s));
                rhs = rhs.add(&term);
            }
            report.record(r, n, lhs, rhs);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(
            pairs
                .iter()
                .map(|&(e, c)| (e, Rational::from_int(c))),
        )
    }

    fn row_of(kind: TriangleKind, rows: usize) -> Vec<LaurentPoly> {
        build_triangle(kind, rows).unwrap().row(rows).unwrap().to_vec()
    }

    #[test]
    fn rejects_empty() {
        assert!(build_triangle(TriangleKind::Stirling2F, 0).is_err());
    }

    #[test]
    fn row_lengths() {
        for kind in TriangleKind::ALL {
            let tri = build_triangle(kind, 6).unwrap();
            for r in 1..=6 {
                let want = if kind == TriangleKind::LahF { r + 1 } else { r };
                assert_eq!(tri.row(r).unwrap().len(), want, "{kind} row {r}");
            }
        }
    }

    #[test]
    fn second_kind_rows() {
        assert_eq!(row_of(TriangleKind::Stirling2F, 1), vec![p(&[(0, 1)])]);
        assert_eq!(
            row_of(TriangleKind::Stirling2F, 2),
            vec![p(&[(0, 1)]), p(&[(1, -1)])]
        );
        assert_eq!(
            row_of(TriangleKind::Stirling2F, 3),
            vec![p(&[(0, 1)]), p(&[(1, -2), (2, 1)]), p(&[(3, -1)])]
        );
        assert_eq!(
            row_of(TriangleKind::Stirling2F, 4),
            vec![
                p(&[(0, 1)]),
                p(&[(1, -3), (2, 3), (3, -1)]),
                p(&[(3, -3), (4, 2), (5, -1)]),
                p(&[(6, 1)]),
            ]
        );
    }

    #[test]
    fn first_kind_rows() {
        assert_eq!(
            row_of(TriangleKind::Stirling1F, 2),
            vec![p(&[(-1, 1)]), p(&[(-1, -1)])]
        );
        // Row 3: (-(1-q)q^-3, (2-q)q^-3, -q^-3).
        assert_eq!(
            row_of(TriangleKind::Stirling1F, 3),
            vec![
                p(&[(-3, -1), (-2, 1)]),
                p(&[(-3, 2), (-2, -1)]),
                p(&[(-3, -1)]),
            ]
        );
    }

    #[test]
    fn lah_rows() {
        assert_eq!(
            row_of(TriangleKind::LahF, 1),
            vec![LaurentPoly::zero(), p(&[(0, 1)])]
        );
        assert_eq!(
            row_of(TriangleKind::LahF, 2),
            vec![LaurentPoly::zero(), p(&[(0, 1), (1, -1)]), p(&[(2, 1)])]
        );
        assert_eq!(
            row_of(TriangleKind::LahF, 3),
            vec![
                LaurentPoly::zero(),
                p(&[(0, 1), (1, -2), (2, 2), (3, -1)]),
                p(&[(2, 1), (3, -2), (4, 2), (5, -1)]),
                p(&[(6, 1)]),
            ]
        );
        // The s = 0 column stays identically zero.
        let tri = build_triangle(TriangleKind::LahF, 10).unwrap();
        for n in 1..=10 {
            assert!(tri.entry(n, 0).is_zero());
        }
    }

    #[test]
    fn antinormal_rows() {
        assert_eq!(
            row_of(TriangleKind::AntinormalBoson, 2),
            vec![p(&[(-1, -1)]), p(&[(-1, 1)])]
        );
        assert_eq!(
            row_of(TriangleKind::AntinormalBoson, 3),
            vec![p(&[(-2, 1)]), p(&[(-3, -1), (-2, -2)]), p(&[(-3, 1)])]
        );
        assert_eq!(
            row_of(TriangleKind::AntinormalFermion, 2),
            vec![p(&[(-1, 1)]), p(&[(-1, -1)])]
        );
        assert_eq!(
            row_of(TriangleKind::AntinormalFermion, 3),
            vec![p(&[(-2, 1)]), p(&[(-3, 1), (-2, -2)]), p(&[(-3, -1)])]
        );
    }

    #[test]
    fn column_and_diagonal_invariants() {
        let f = build_triangle(TriangleKind::Stirling2F, 12).unwrap();
        let a = build_triangle(TriangleKind::AntinormalBoson, 12).unwrap();
        let b = build_triangle(TriangleKind::AntinormalFermion, 12).unwrap();
        for r in 1..=12usize {
            let ri = r as i64;
            let tri_num = ri * (ri - 1) / 2;
            assert!(f.entry(r, 1).is_one(), "F first column, r={r}");
            assert_eq!(
                f.entry(r, ri),
                LaurentPoly::monomial(
                    if tri_num % 2 == 0 {
                        Rational::one()
                    } else {
                        Rational::from_int(-1)
                    },
                    tri_num
                ),
                "F diagonal, r={r}"
            );
            assert_eq!(
                a.entry(r, ri),
                LaurentPoly::monomial(Rational::one(), -tri_num),
                "A diagonal, r={r}"
            );
            assert_eq!(
                b.entry(r, 1),
                LaurentPoly::monomial(Rational::one(), -(ri - 1)),
                "B first column, r={r}"
            );
        }
    }

    #[test]
    fn bell_values() {
        let bells = bell_numbers(5).unwrap();
        assert!(bells[0].is_one());
        assert_eq!(bells[1], p(&[(0, 1), (1, -1)]));
        assert_eq!(bells[2], p(&[(0, 1), (1, -2), (2, 1), (3, -1)]));

        // Independent route: the closed expressions built from brackets.
        let n = |k| qnum(QKind::Fermion, k);
        let m = |c, e| LaurentPoly::monomial(Rational::from_int(c), e);
        let b3 = p(&[(0, 1), (1, -1)])
            .sub(&n(2).mul_monomial(&Rational::one(), 1))
            .sub(&m(1, 3));
        assert_eq!(bells[2], b3);

        let b4 = p(&[(0, 1), (1, -1)])
            .sub(&n(2).mul_monomial(&Rational::one(), 1))
            .sub(&n(2).pow(2).mul_monomial(&Rational::one(), 1))
            .sub(&m(1, 3))
            .sub(&n(2).mul_monomial(&Rational::one(), 3))
            .sub(&n(3).mul_monomial(&Rational::one(), 3))
            .add(&m(1, 6));
        assert_eq!(bells[3], b4);
        assert_eq!(
            bells[3],
            p(&[(0, 1), (1, -3), (2, 3), (3, -4), (4, 2), (5, -1), (6, 1)])
        );

        let block1 = m(-1, 1)
            .sub(&n(2).mul_monomial(&Rational::one(), 1))
            .sub(&n(2).pow(2).mul_monomial(&Rational::one(), 1));
        let block2 = m(-1, 3)
            .sub(&n(2).mul_monomial(&Rational::one(), 3))
            .sub(&n(3).mul_monomial(&Rational::one(), 3));
        let b5 = p(&[(0, 1), (1, -1)])
            .add(&block1.mul(&n(2).add(&m(1, 2))))
            .add(&block2.mul(&n(3).sub(&m(1, 3))))
            .add(&n(4).mul_monomial(&Rational::one(), 6))
            .add(&m(1, 10));
        assert_eq!(bells[4], b5);
        assert_eq!(
            bells[4],
            p(&[
                (0, 1),
                (1, -4),
                (2, 6),
                (3, -10),
                (4, 9),
                (5, -7),
                (6, 7),
                (7, -4),
                (8, 2),
                (9, -1),
                (10, 1)
            ])
        );
    }

    #[test]
    fn bell_at_zero_is_one() {
        for b in bell_numbers(15).unwrap() {
            assert_eq!(b.eval_exact(&Rational::zero()).unwrap(), Rational::one());
        }
    }

    #[test]
    fn bell_q1_sequence() {
        let vals = bell_q1_pattern(40).unwrap();
        for (i, v) in vals.iter().enumerate() {
            assert_eq!(*v, bell_q1_expected(i + 1), "r = {}", i + 1);
        }
        assert_eq!(&vals[..11], &[1, 0, -1, -1, 0, 1, 1, 0, -1, -1, 0]);
    }

    #[test]
    fn identity_sweeps_pass() {
        assert!(verify_falling_identity(6, 9).unwrap().passed());
        assert!(verify_first_kind_identity(6, 9).unwrap().passed());
        assert!(verify_lah_identity(5, 9).unwrap().passed());
        assert!(verify_rising_identity(QKind::Boson, 6, 7).unwrap().passed());
        assert!(verify_rising_identity(QKind::Fermion, 6, 7).unwrap().passed());
        assert!(verify_falling_identity(0, 5).is_err());
        assert!(verify_lah_identity(5, 3).is_err());
    }

    #[test]
    fn report_counts() {
        let rep = verify_falling_identity(3, 5).unwrap();
        // r=1: n in 1..=5; r=2: n in 2..=5; r=3: n in 3..=5.
        assert_eq!(rep.checked, 12);
        assert!(rep.passed());
        assert_eq!(rep.to_string(), "falling: 12 checked, 0 failed");
    }

    #[test]
    fn triangle_serde() {
        let tri = build_triangle(TriangleKind::Stirling2F, 3).unwrap();
        let json = serde_json::to_value(&tri).unwrap();
        assert_eq!(json["kind"], "stirling2f");
        assert_eq!(json["rows"][1][1][0][1], "-1/1");
        let back: Triangle = serde_json::from_value(json).unwrap();
        assert_eq!(back, tri);
    }

    #[test]
    fn kind_tags_round_trip() {
        for kind in TriangleKind::ALL {
            assert_eq!(kind.tag().parse::<TriangleKind>().unwrap(), kind);
        }
        assert!("nope".parse::<TriangleKind>().is_err());
    }
}
