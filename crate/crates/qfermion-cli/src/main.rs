//! Command-line front end: triangle tables, Bell polynomials, identity
//! verification, series evaluation, and point-process moments.
//!
//! Output contract: every verb assembles its complete output before
//! printing (no partial tables on error), identical argv produces
//! byte-identical output, and the exit code is 0 for success/pass, 1 when
//! a verification report contains failures, 2 for usage or domain errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qfermion::bargmann::verify_bargmann_ordering;
use qfermion::dobinski::{bell_dobinski, SeriesResult};
use qfermion::fock::{build_rep, build_rep_complex, Complex, FockRep, FockReport};
use qfermion::point_process::{infinitesimal_consistency, moment_breakdown, BaseDensity, MomentQuery};
use qfermion::triangles::{
    bell_numbers, build_triangle, verify_falling_identity, verify_first_kind_identity,
    verify_lah_identity, verify_rising_identity, IdentityReport, Triangle,
};
use qfermion::{Error, LaurentPoly, OrderingMode, QKind, Rational, TriangleKind};

#[derive(Parser)]
#[command(name = "qfermion", version, about = "q-deformed ladder-operator combinatorics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a coefficient triangle, symbolic or evaluated at a rational q.
    Table {
        #[arg(long)]
        triangle: TriangleArg,
        #[arg(long)]
        rows: usize,
        /// Exact evaluation point as NUM/DEN (e.g. 1/2); symbolic if absent.
        #[arg(long)]
        eval_q: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the Bell polynomials (second-kind row sums), symbolic or
    /// evaluated at a rational q.
    Bell {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        eval_q: Option<String>,
    },
    /// Run one identity's verification suite and print its JSON report.
    Verify {
        #[arg(long)]
        identity: IdentityArg,
        #[arg(long)]
        max_r: Option<u32>,
        #[arg(long)]
        max_n: Option<u32>,
        /// Single q sample for the numeric checks; a built-in grid if absent.
        #[arg(long)]
        q: Option<f64>,
    },
    /// Evaluate the Bell-number series ratio at floating q.
    Dobinski {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_terms: u32,
    },
    /// Moment of the deformed point-process count in a subinterval.
    Moments {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum, default_value_t = DensityArg::Uniform)]
        density: DensityArg,
        /// Support endpoints: --support LO HI.
        #[arg(long, num_args = 2, default_values_t = [0.0, 1.0])]
        support: Vec<f64>,
        /// Subinterval endpoints: --subinterval A B.
        #[arg(long, num_args = 2)]
        subinterval: Vec<f64>,
        /// Peak position for the triangular density (default: midpoint).
        #[arg(long)]
        mode: Option<f64>,
        #[arg(long, default_value_t = 1e-10)]
        quad_tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TriangleArg {
    Stirling2f,
    Stirling1f,
    Lahf,
    AntinormalB,
    AntinormalF,
}

impl From<TriangleArg> for TriangleKind {
    fn from(a: TriangleArg) -> Self {
        match a {
            TriangleArg::Stirling2f => TriangleKind::Stirling2F,
            TriangleArg::Stirling1f => TriangleKind::Stirling1F,
            TriangleArg::Lahf => TriangleKind::LahF,
            TriangleArg::AntinormalB => TriangleKind::AntinormalBoson,
            TriangleArg::AntinormalF => TriangleKind::AntinormalFermion,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityArg {
    Falling,
    FirstKind,
    Lah,
    RisingB,
    RisingF,
    FockAlgebra,
    FockReorder,
    FockNormal,
    FockAntinormal,
    BargmannNormal,
    BargmannAntinormal,
    Infinitesimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum DensityArg {
    Uniform,
    Triangular,
}

/// Fermion/boson q grids where the real representation exists (matching
/// the library's CI samples).
const FERMION_QS: [f64; 3] = [0.3, 0.7, 0.9];
const BOSON_QS: [f64; 3] = [0.5, 1.0, 2.0];

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((output, pass)) => {
            println!("{output}");
            if pass {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Computes the verb's full output and pass flag; nothing is printed
/// until the whole result exists.
fn run(cmd: Cmd) -> Result<(String, bool), Error> {
    match cmd {
        Cmd::Table {
            triangle,
            rows,
            eval_q,
            format,
        } => {
            let tri = build_triangle(triangle.into(), rows)?;
            let q = eval_q.map(|s| s.parse::<Rational>()).transpose()?;
            Ok((render_table(&tri, q.as_ref(), format)?, true))
        }
        Cmd::Bell { rows, eval_q } => {
            let bells = bell_numbers(rows)?;
            let q = eval_q.map(|s| s.parse::<Rational>()).transpose()?;
            let value = match q {
                None => serde_json::to_value(&bells).expect("serializable"),
                Some(q) => Value::Array(
                    bells
                        .iter()
                        .map(|b| Ok(Value::String(b.eval_exact(&q)?.fraction_string())))
                        .collect::<Result<_, Error>>()?,
                ),
            };
            Ok((pretty(&value), true))
        }
        Cmd::Verify {
            identity,
            max_r,
            max_n,
            q,
        } => run_verify(identity, max_r, max_n, q),
        Cmd::Dobinski {
            q,
            r,
            tol,
            max_terms,
        } => {
            let result = match bell_dobinski(r, q, tol, max_terms) {
                Ok(res) => res,
                // Outside the convergent regime the verb still emits the
                // SeriesResult-shaped diagnostic instead of a value.
                Err(Error::SeriesRegime { regime, .. }) => SeriesResult {
                    value: f64::NAN,
                    terms_used: 0,
                    converged: false,
                    regime,
                },
                Err(e) => return Err(e),
            };
            Ok((pretty(&serde_json::to_value(result).expect("serializable")), true))
        }
        Cmd::Moments {
            n,
            r,
            q,
            density,
            support,
            subinterval,
            mode,
            quad_tol,
        } => {
            let (lo, hi) = (support[0], support[1]);
            let d = match density {
                DensityArg::Uniform => BaseDensity::uniform(lo, hi)?,
                DensityArg::Triangular => {
                    BaseDensity::triangular(lo, hi, mode.unwrap_or(0.5 * (lo + hi)))?
                }
            };
            let query = MomentQuery {
                n,
                r,
                a: subinterval[0],
                b: subinterval[1],
                q,
            };
            let bd = moment_breakdown(&query, &d, quad_tol)?;
            Ok((pretty(&serde_json::to_value(&bd).expect("serializable")), true))
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value")
}

/// Renders a triangle symbolically or evaluated at exact rational q.
fn render_table(tri: &Triangle, q: Option<&Rational>, format: Format) -> Result<String, Error> {
    // Evaluate everything up front so an evaluation error (q = 0 against a
    // negative exponent) yields no partial output.
    let evaluated: Option<Vec<Vec<Rational>>> = q
        .map(|q| {
            tri.rows()
                .iter()
                .map(|row| row.iter().map(|e| e.eval_exact(q)).collect())
                .collect()
        })
        .transpose()?;

    let cell = |r: usize, idx: usize, entry: &LaurentPoly| -> String {
        match &evaluated {
            Some(rows) => rows[r][idx].fraction_string(),
            None => entry.to_string(),
        }
    };

    match format {
        Format::Json => {
            let v = match &evaluated {
                None => serde_json::to_value(tri).expect("serializable"),
                Some(rows) => json!({
                    "kind": tri.kind().tag(),
                    "q": q.expect("evaluated implies q").fraction_string(),
                    "rows": rows
                        .iter()
                        .map(|row| row.iter().map(Rational::fraction_string).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                }),
            };
            Ok(pretty(&v))
        }
        Format::Csv => {
            let mut out = String::from("r,s,entry\n");
            for (ri, row) in tri.rows().iter().enumerate() {
                for (idx, entry) in row.iter().enumerate() {
                    let s = idx as i64 + tri.kind().s_offset();
                    out.push_str(&format!("{},{},{}\n", ri + 1, s, cell(ri, idx, entry)));
                }
            }
            Ok(out.trim_end().to_string())
        }
        Format::Md => {
            let s_lo = tri.kind().s_offset();
            let s_hi = tri.num_rows() as i64;
            let mut out = String::from("| r |");
            for s in s_lo..=s_hi {
                out.push_str(&format!(" s={s} |"));
            }
            out.push('\n');
            out.push_str("|---|");
            for _ in s_lo..=s_hi {
                out.push_str("---|");
            }
            out.push('\n');
            for (ri, row) in tri.rows().iter().enumerate() {
                out.push_str(&format!("| {} |", ri + 1));
                for s in s_lo..=s_hi {
                    let idx = (s - s_lo) as usize;
                    if idx < row.len() {
                        out.push_str(&format!(" {} |", cell(ri, idx, &row[idx])));
                    } else {
                        out.push_str("  |");
                    }
                }
                out.push('\n');
            }
            Ok(out.trim_end().to_string())
        }
    }
}

/// Attaches a top-level "pass" field to a report's JSON.
fn with_pass(report: Value, pass: bool) -> (String, bool) {
    let mut v = report;
    v["pass"] = Value::Bool(pass);
    (pretty(&v), pass)
}

fn identity_output(report: IdentityReport) -> (String, bool) {
    let pass = report.passed();
    with_pass(serde_json::to_value(&report).expect("serializable"), pass)
}

fn run_verify(
    identity: IdentityArg,
    max_r: Option<u32>,
    max_n: Option<u32>,
    q: Option<f64>,
) -> Result<(String, bool), Error> {
    match identity {
        IdentityArg::Falling => Ok(identity_output(verify_falling_identity(
            max_r.unwrap_or(10),
            max_n.unwrap_or(14),
        )?)),
        IdentityArg::FirstKind => Ok(identity_output(verify_first_kind_identity(
            max_r.unwrap_or(8),
            max_n.unwrap_or(12),
        )?)),
        IdentityArg::Lah => Ok(identity_output(verify_lah_identity(
            max_n.unwrap_or(8),
            max_r.unwrap_or(12),
        )?)),
        IdentityArg::RisingB => Ok(identity_output(verify_rising_identity(
            QKind::Boson,
            max_r.unwrap_or(8),
            max_n.unwrap_or(12),
        )?)),
        IdentityArg::RisingF => Ok(identity_output(verify_rising_identity(
            QKind::Fermion,
            max_r.unwrap_or(8),
            max_n.unwrap_or(12),
        )?)),
        IdentityArg::BargmannNormal => Ok(identity_output(verify_bargmann_ordering(
            OrderingMode::Normal,
            max_r.unwrap_or(6),
            max_n.unwrap_or(12),
        )?)),
        IdentityArg::BargmannAntinormal => Ok(identity_output(verify_bargmann_ordering(
            OrderingMode::Antinormal,
            max_r.unwrap_or(6),
            max_n.unwrap_or(12),
        )?)),
        IdentityArg::FockAlgebra => fock_checks("fock-algebra", q, |kind, q| {
            Ok(vec![(None, algebra_residual_at(kind, q, 12)?, 1e-12, 12)])
        }),
        IdentityArg::FockReorder => {
            let smax = max_r.unwrap_or(4) as usize;
            fock_checks("fock-reorder", q, move |kind, q| {
                (1..=smax)
                    .map(|s| Ok((Some(s), reorder_residual_at(kind, q, 12, s)?, 1e-10, 12)))
                    .collect()
            })
        }
        IdentityArg::FockNormal => {
            let rmax = max_r.unwrap_or(5) as usize;
            fock_ordering_checks("fock-normal", OrderingMode::Normal, q, rmax)
        }
        IdentityArg::FockAntinormal => {
            let rmax = max_r.unwrap_or(5) as usize;
            fock_ordering_checks("fock-antinormal", OrderingMode::Antinormal, q, rmax)
        }
        IdentityArg::Infinitesimal => {
            let d = BaseDensity::uniform(0.0, 1.0)?;
            let report = infinitesimal_consistency(
                max_n.unwrap_or(6),
                q.unwrap_or(0.8),
                &d,
                &[0.001, 0.01, 0.1],
                1e-10,
            )?;
            let pass = report.passed();
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["identity"] = Value::String("infinitesimal".into());
            Ok(with_pass(v, pass))
        }
    }
}

/// The (kind, q) sample grid for numeric checks: the built-in real-regime
/// grids, or the single requested q for both kinds (fermion q > 1 runs on
/// complex amplitudes).
fn fock_grid(q: Option<f64>) -> Vec<(QKind, f64)> {
    match q {
        Some(q) => vec![(QKind::Fermion, q), (QKind::Boson, q)],
        None => FERMION_QS
            .iter()
            .map(|&q| (QKind::Fermion, q))
            .chain(BOSON_QS.iter().map(|&q| (QKind::Boson, q)))
            .collect(),
    }
}

type Checks = Vec<(Option<usize>, f64, f64, usize)>;

fn fock_checks(
    name: &str,
    q: Option<f64>,
    per_sample: impl Fn(QKind, f64) -> Result<Checks, Error>,
) -> Result<(String, bool), Error> {
    let mut reports = Vec::new();
    for (kind, q) in fock_grid(q) {
        for (r_or_s, residual, tolerance, dim) in per_sample(kind, q)? {
            reports.push(FockReport {
                identity: name.to_string(),
                kind,
                q,
                dim,
                r_or_s,
                residual,
                tolerance,
                pass: residual < tolerance,
            });
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    let v = json!({ "identity": name, "checks": reports });
    Ok(with_pass(v, pass))
}

fn fock_ordering_checks(
    name: &str,
    mode: OrderingMode,
    q: Option<f64>,
    rmax: usize,
) -> Result<(String, bool), Error> {
    let tri_for = |kind: QKind| match (kind, mode) {
        (QKind::Fermion, OrderingMode::Normal) => Some(TriangleKind::Stirling2F),
        (QKind::Fermion, OrderingMode::Antinormal) => Some(TriangleKind::AntinormalFermion),
        (QKind::Boson, OrderingMode::Antinormal) => Some(TriangleKind::AntinormalBoson),
        (QKind::Boson, OrderingMode::Normal) => None, // no bosonic normal triangle
    };
    fock_checks(name, q, move |kind, q| {
        let Some(tri_kind) = tri_for(kind) else {
            return Ok(Vec::new());
        };
        let tri = build_triangle(tri_kind, rmax)?;
        (1..=rmax)
            .map(|r| {
                Ok((
                    Some(r),
                    ordering_residual_at(kind, q, 16, r, mode, &tri)?,
                    1e-9,
                    16,
                ))
            })
            .collect()
    })
}

/// Residual helpers that pick the real or complex representation by
/// regime, so a single --q works across the fermion q > 1 boundary.
fn with_rep<T>(
    kind: QKind,
    q: f64,
    dim: usize,
    real: impl FnOnce(&FockRep<f64>) -> Result<T, Error>,
    complex: impl FnOnce(&FockRep<Complex<f64>>) -> Result<T, Error>,
) -> Result<T, Error> {
    if kind == QKind::Fermion && q > 1.0 {
        complex(&build_rep_complex(kind, q, dim)?)
    } else {
        real(&build_rep(kind, q, dim)?)
    }
}

fn algebra_residual_at(kind: QKind, q: f64, dim: usize) -> Result<f64, Error> {
    with_rep(
        kind,
        q,
        dim,
        |rep| Ok(rep.algebra_residual()),
        |rep| Ok(rep.algebra_residual()),
    )
}

fn reorder_residual_at(kind: QKind, q: f64, dim: usize, s: usize) -> Result<f64, Error> {
    with_rep(
        kind,
        q,
        dim,
        |rep| rep.reorder_residual(s),
        |rep| rep.reorder_residual(s),
    )
}

fn ordering_residual_at(
    kind: QKind,
    q: f64,
    dim: usize,
    r: usize,
    mode: OrderingMode,
    tri: &Triangle,
) -> Result<f64, Error> {
    with_rep(
        kind,
        q,
        dim,
        |rep| rep.ordering_residual(r, mode, tri),
        |rep| rep.ordering_residual(r, mode, tri),
    )
}
