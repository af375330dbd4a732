//! Moments of the deformed point process: a base density spreads `[n]`
//! particles over an energy interval, and the r-th moment of the count in
//! a subinterval expands over the second-kind triangle as
//! `Σ_s F^r_s·falling(n,s)·p^s` with `p` the subinterval mass.
//!
//! The s-fold joint densities are exact products of the base density, so
//! the s-dimensional integrals factorize into powers of `p`; only the
//! one-dimensional mass is ever computed by quadrature (a direct 2-D
//! quadrature cross-check of the factorization is provided). With `p = 1`
//! the expansion collapses to `[n]^r` — the moment identity itself — and
//! that path is kept fully rational.

use serde::Serialize;

use crate::error::Error;
use crate::qnum::{falling_fact, qnum, QKind};
use crate::quad::adaptive_simpson;
use crate::rational::Rational;
use crate::triangles::{build_triangle, Triangle, TriangleKind};

/// Probability density on a finite support, normalized to unit mass.
#[derive(Clone, Debug, Serialize)]
pub enum BaseDensity {
    /// Constant `1/(hi−lo)` on `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
    /// Piecewise-linear peak at `mode`, height `2/(hi−lo)`.
    Triangular { lo: f64, hi: f64, mode: f64 },
    /// Linear interpolation through sorted `(E, value)` points.
    Tabulated { points: Vec<(f64, f64)> },
}

impl BaseDensity {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self, Error> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!("bad support [{lo}, {hi}]")));
        }
        Ok(BaseDensity::Uniform { lo, hi })
    }

    pub fn triangular(lo: f64, hi: f64, mode: f64) -> Result<Self, Error> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!("bad support [{lo}, {hi}]")));
        }
        if !(lo <= mode && mode <= hi) {
            return Err(Error::Domain(format!(
                "mode {mode} outside support [{lo}, {hi}]"
            )));
        }
        Ok(BaseDensity::Triangular { lo, hi, mode })
    }

    /// Points must be sorted, strictly increasing in E, with nonnegative
    /// values; the interpolant must integrate to 1 within `tol`.
    pub fn tabulated(points: Vec<(f64, f64)>, tol: f64) -> Result<Self, Error> {
        if points.len() < 2 {
            return Err(Error::Domain("need at least two table points".into()));
        }
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::Domain("table abscissae must strictly increase".into()));
            }
        }
        if points.iter().any(|&(e, v)| !e.is_finite() || !(v >= 0.0)) {
            return Err(Error::Domain("table values must be finite and nonnegative".into()));
        }
        // Trapezoid rule is exact for the linear interpolant.
        let integral: f64 = points
            .windows(2)
            .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
            .sum();
        if (integral - 1.0).abs() > tol {
            return Err(Error::NotNormalized { integral });
        }
        Ok(BaseDensity::Tabulated { points })
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            BaseDensity::Uniform { lo, hi } | BaseDensity::Triangular { lo, hi, .. } => (*lo, *hi),
            BaseDensity::Tabulated { points } => (points[0].0, points[points.len() - 1].0),
        }
    }

    /// Density value at `e` (zero off support).
    pub fn density(&self, e: f64) -> f64 {
        let (lo, hi) = self.support();
        if e < lo || e > hi {
            return 0.0;
        }
        match self {
            BaseDensity::Uniform { lo, hi } => 1.0 / (hi - lo),
            BaseDensity::Triangular { lo, hi, mode } => {
                let h = 2.0 / (hi - lo);
                if e <= *mode {
                    if *mode == *lo {
                        h
                    } else {
                        h * (e - lo) / (mode - lo)
                    }
                } else if *mode == *hi {
                    h
                } else {
                    h * (hi - e) / (hi - mode)
                }
            }
            BaseDensity::Tabulated { points } => {
                let idx = points.partition_point(|&(x, _)| x <= e).min(points.len() - 1);
                let (x1, y1) = points[idx.max(1) - 1];
                let (x2, y2) = points[idx.max(1)];
                y1 + (y2 - y1) * (e - x1) / (x2 - x1)
            }
        }
    }
}

/// Moment request: count parameter `n`, moment order `r`, subinterval
/// `[a, b]` of the density's support, deformation `q`.
#[derive(Clone, Copy, Debug)]
pub struct MomentQuery {
    pub n: u32,
    pub r: u32,
    pub a: f64,
    pub b: f64,
    pub q: f64,
}

/// One `s`-term of the moment expansion: `coefficient = F^r_s·falling(n,s)`
/// at q, `contribution = coefficient·p^s`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MomentTerm {
    pub s: u32,
    pub coefficient: f64,
    pub contribution: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentBreakdown {
    pub p: f64,
    pub moment: f64,
    pub terms: Vec<MomentTerm>,
}

/// Mass of `[a, b]` under the density, by adaptive quadrature.
pub fn interval_mass(d: &BaseDensity, a: f64, b: f64, quad_tol: f64) -> Result<f64, Error> {
    let (lo, hi) = d.support();
    if !(a >= lo && b <= hi && a <= b) {
        return Err(Error::Domain(format!(
            "subinterval [{a}, {b}] not inside support [{lo}, {hi}]"
        )));
    }
    adaptive_simpson(|e| d.density(e), a, b, quad_tol)
}

/// Exact combinatorial factor of the m-point joint density: the falling
/// factorial `[n][n−1]…[n−m+1]` at rational q.
pub fn joint_density_coefficient(n: u32, m: u32, q: &Rational) -> Result<Rational, Error> {
    falling_fact(QKind::Fermion, n, m)?.eval_exact(q)
}

/// `falling(n, s)` at floating q, extended by zero for s > n (the operator
/// product hits `[0]`).
fn falling_f64(n: u32, s: u32, q: f64) -> Result<f64, Error> {
    if s > n {
        return Ok(0.0);
    }
    falling_fact(QKind::Fermion, n, s)?.eval_f64(q)
}

fn second_kind_rows(r: u32) -> Result<Triangle, Error> {
    build_triangle(TriangleKind::Stirling2F, r as usize)
}

/// Moment of the count in `[a, b]`, with its per-s breakdown.
pub fn moment_breakdown(
    query: &MomentQuery,
    d: &BaseDensity,
    quad_tol: f64,
) -> Result<MomentBreakdown, Error> {
    if query.r < 1 {
        return Err(Error::Domain("moment order r must be >= 1".into()));
    }
    if !(query.q > 0.0) {
        return Err(Error::Domain(format!("q must be positive, got {}", query.q)));
    }
    let p = interval_mass(d, query.a, query.b, quad_tol)?;
    let tri = second_kind_rows(query.r)?;
    let mut terms = Vec::with_capacity(query.r as usize);
    let mut moment = 0.0;
    for s in 1..=query.r {
        let coefficient = tri.entry(query.r as usize, s as i64).eval_f64(query.q)?
            * falling_f64(query.n, s, query.q)?;
        let contribution = coefficient * p.powi(s as i32);
        moment += contribution;
        terms.push(MomentTerm {
            s,
            coefficient,
            contribution,
        });
    }
    Ok(MomentBreakdown { p, moment, terms })
}

/// Moment of the count in `[a, b]` under the density (see
/// [`moment_breakdown`] for the per-term form).
pub fn finite_interval_moment(
    query: &MomentQuery,
    d: &BaseDensity,
    quad_tol: f64,
) -> Result<f64, Error> {
    Ok(moment_breakdown(query, d, quad_tol)?.moment)
}

/// Fully rational moment at exact mass `p` — no quadrature. With `p = 1`
/// this is exactly `[n]^r`, the moment identity itself.
pub fn moment_exact(n: u32, r: u32, q: &Rational, p: &Rational) -> Result<Rational, Error> {
    if r < 1 {
        return Err(Error::Domain("moment order r must be >= 1".into()));
    }
    let tri = second_kind_rows(r)?;
    let mut acc = Rational::zero();
    for s in 1..=r {
        if s > n {
            break; // falling factor vanishes from here on
        }
        let coeff = tri.entry(r as usize, s as i64).eval_exact(q)?
            * falling_fact(QKind::Fermion, n, s)?.eval_exact(q)?;
        acc += &(&coeff * &p.pow_i64(s as i64)?);
    }
    Ok(acc)
}

/// Direct 2-D quadrature of the pair density over `[a, b]²` — the
/// cross-check that the product structure really factorizes into `p²`.
pub fn pair_mass_2d(d: &BaseDensity, a: f64, b: f64, quad_tol: f64) -> Result<f64, Error> {
    let (lo, hi) = d.support();
    if !(a >= lo && b <= hi && a <= b) {
        return Err(Error::Domain(format!(
            "subinterval [{a}, {b}] not inside support [{lo}, {hi}]"
        )));
    }
    adaptive_simpson(
        |x| {
            let inner = adaptive_simpson(|y| d.density(y), a, b, quad_tol).unwrap_or(f64::NAN);
            d.density(x) * inner
        },
        a,
        b,
        quad_tol,
    )
}

/// One first-order-collapse check: how far the r-th moment of a realized
/// subinterval strays from `[n]·p`, against the a-priori `C·p²` bound.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CollapseCase {
    pub p_target: f64,
    pub p: f64,
    pub r: u32,
    pub deviation: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    pub n: u32,
    pub q: f64,
    pub cases: Vec<CollapseCase>,
}

impl CollapseReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

/// Finds `x` with `mass([lo, x]) = target` by bisection, so each requested
/// mass is realized as an actual subinterval of the density.
fn mass_quantile(d: &BaseDensity, target: f64, quad_tol: f64) -> Result<f64, Error> {
    let (lo, hi) = d.support();
    let mut left = lo;
    let mut right = hi;
    for _ in 0..64 {
        let mid = 0.5 * (left + right);
        if interval_mass(d, lo, mid, quad_tol)? < target {
            left = mid;
        } else {
            right = mid;
        }
    }
    Ok(0.5 * (left + right))
}

/// Verifies that every moment of order r ≤ 4 collapses to the first-order
/// mass: `|moment(r, p) − [n]·p| ≤ C·p²` with `C = Σ_s |F^r_s·falling(n,s)|`.
///
/// Each requested mass is realized as a genuine subinterval `[lo, x]` via
/// the density's quantile, and the realized mass (not the target) enters
/// both sides of the bound.
pub fn infinitesimal_consistency(
    n: u32,
    q: f64,
    d: &BaseDensity,
    p_values: &[f64],
    quad_tol: f64,
) -> Result<CollapseReport, Error> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    const RMAX: u32 = 4;
    let (lo, _) = d.support();
    let tri = second_kind_rows(RMAX)?;
    let bracket_n = qnum(QKind::Fermion, n).eval_f64(q)?;
    let mut cases = Vec::new();
    for &p_target in p_values {
        if !(0.0..=1.0).contains(&p_target) {
            return Err(Error::Domain(format!("mass {p_target} outside [0, 1]")));
        }
        let x = mass_quantile(d, p_target, quad_tol)?;
        let p = interval_mass(d, lo, x, quad_tol)?;
        for r in 1..=RMAX {
            let query = MomentQuery {
                n,
                r,
                a: lo,
                b: x,
                q,
            };
            let moment = finite_interval_moment(&query, d, quad_tol)?;
            let deviation = (moment - bracket_n * p).abs();
            let mut c_bound = 0.0;
            for s in 1..=r {
                c_bound += (tri.entry(r as usize, s as i64).eval_f64(q)?
                    * falling_f64(n, s, q)?)
                .abs();
            }
            // Tiny float slack: deviation and bound are computed from the
            // same quadrature mass, so the comparison is near-exact.
            let bound = c_bound * p * p + 1e-12;
            cases.push(CollapseCase {
                p_target,
                p,
                r,
                deviation,
                bound,
                pass: deviation <= bound,
            });
        }
    }
    Ok(CollapseReport { n, q, cases })
}
