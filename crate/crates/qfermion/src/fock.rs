//! Truncated Fock-space matrix representations of the deformed oscillators:
//! an independent floating-point oracle for every operator identity the
//! exact modules prove symbolically.
//!
//! The lowering operator carries `√[n]` on the superdiagonal and raising is
//! its *formal* transpose. Truncating the tower at `dim` corrupts a known
//! trailing band of every operator word — each residual restricts to the
//! leading block where the identity genuinely holds, so "residual < tol"
//! means the algebra, not the truncation artifact.
//!
//! Residuals are *relative*: the deviation's block max is divided by
//! `1 + (block max of the word being checked)`. Bosonic brackets grow like
//! `qⁿ`, so an absolute deviation would scale with the word and make one
//! tolerance meaningless across regimes; dividing by the word's own size
//! keeps every threshold a statement about relative rounding error.
//!
//! Amplitudes are real except for fermions at q > 1, where even brackets go
//! negative; [`build_rep_complex`] covers that regime with principal square
//! roots and an *unconjugated* transpose (conjugation would flip the sign
//! of `F†F` and break the defining relation).

use nalgebra::{ComplexField, DMatrix};
use serde::Serialize;

/// Re-exported so callers can name the complex-regime scalar without a
/// direct linear-algebra dependency.
pub use nalgebra::Complex;

use crate::error::Error;
use crate::qnum::{qnum, QKind};
use crate::triangles::{Triangle, TriangleKind};
use crate::OrderingMode;

/// Matrix representation on the basis `|0⟩ … |dim−1⟩`.
#[derive(Clone, Debug)]
pub struct FockRep<T: ComplexField<RealField = f64>> {
    kind: QKind,
    q: f64,
    dim: usize,
    lowering: DMatrix<T>,
    raising: DMatrix<T>,
    number_diag: Vec<u32>,
}

/// One numeric check, in the shape the CLI emits.
#[derive(Clone, Debug, Serialize)]
pub struct FockReport {
    pub identity: String,
    pub kind: QKind,
    pub q: f64,
    pub dim: usize,
    pub r_or_s: Option<usize>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check_build(q: f64, dim: usize) -> Result<(), Error> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    if dim < 3 {
        return Err(Error::Domain(format!("dim must be at least 3, got {dim}")));
    }
    Ok(())
}

/// Brackets `[1] … [dim−1]` at floating q, via the exact polynomials.
fn brackets(kind: QKind, q: f64, dim: usize) -> Vec<f64> {
    (1..dim)
        .map(|n| qnum(kind, n as u32).eval_f64(q).expect("q > 0"))
        .collect()
}

fn assemble<T: ComplexField<RealField = f64>>(
    kind: QKind,
    q: f64,
    dim: usize,
    amps: Vec<T>,
) -> FockRep<T> {
    let mut lowering = DMatrix::zeros(dim, dim);
    for (n, a) in amps.into_iter().enumerate() {
        lowering[(n, n + 1)] = a;
    }
    let raising = lowering.transpose();
    FockRep {
        kind,
        q,
        dim,
        lowering,
        raising,
        number_diag: (0..dim as u32).collect(),
    }
}

/// Real-amplitude representation. Rejects fermions at q > 1, where even
/// brackets are negative and `√[n]` leaves the reals.
pub fn build_rep(kind: QKind, q: f64, dim: usize) -> Result<FockRep<f64>, Error> {
    check_build(q, dim)?;
    if kind == QKind::Fermion && q > 1.0 {
        return Err(Error::UnsupportedRegime { q });
    }
    let amps = brackets(kind, q, dim).into_iter().map(f64::sqrt).collect();
    Ok(assemble(kind, q, dim, amps))
}

/// Complex-amplitude representation for the fermion q > 1 regime (works
/// for any kind). Raising stays the formal transpose: the deformed
/// adjoint has the *same* amplitudes, not their conjugates.
pub fn build_rep_complex(kind: QKind, q: f64, dim: usize) -> Result<FockRep<Complex<f64>>, Error> {
    check_build(q, dim)?;
    let amps = brackets(kind, q, dim)
        .into_iter()
        .map(|b| Complex::new(b, 0.0).sqrt())
        .collect();
    Ok(assemble(kind, q, dim, amps))
}

fn mat_pow<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, k: usize) -> DMatrix<T> {
    let mut out = DMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Largest entry modulus over the leading `block × block` corner.
fn block_max<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, block: usize) -> f64 {
    let mut max = 0.0f64;
    for i in 0..block {
        for j in 0..block {
            max = max.max(m[(i, j)].clone().modulus());
        }
    }
    max
}

/// Deviation of `lhs` from `rhs` on the leading block, relative to the
/// size of `lhs` itself there.
fn relative_block_residual<T: ComplexField<RealField = f64>>(
    lhs: &DMatrix<T>,
    rhs: &DMatrix<T>,
    block: usize,
) -> f64 {
    block_max(&(lhs - rhs), block) / (1.0 + block_max(lhs, block))
}

impl<T: ComplexField<RealField = f64>> FockRep<T> {
    pub fn kind(&self) -> QKind {
        self.kind
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lowering(&self) -> &DMatrix<T> {
        &self.lowering
    }

    pub fn raising(&self) -> &DMatrix<T> {
        &self.raising
    }

    pub fn number_diag(&self) -> &[u32] {
        &self.number_diag
    }

    fn scalar(&self, x: f64) -> T {
        T::from_real(x)
    }

    /// `L·R ± q·R·L` (+ for fermions, − for bosons), the word the defining
    /// relation equates to the identity.
    fn defining_word(&self) -> DMatrix<T> {
        let lr = &self.lowering * &self.raising;
        let rl = &self.raising * &self.lowering;
        let signed_q = match self.kind {
            QKind::Boson => -self.q,
            QKind::Fermion => self.q,
        };
        lr + rl * self.scalar(signed_q)
    }

    /// Defining-relation residual on the leading `(dim−1)` block, where the
    /// last basis state's truncation artifact is excluded.
    pub fn algebra_residual(&self) -> f64 {
        let eye = DMatrix::identity(self.dim, self.dim);
        relative_block_residual(&self.defining_word(), &eye, self.dim - 1)
    }

    /// Same residual over the whole matrix — O(1) by construction, since
    /// the `(dim−1, dim−1)` entry is missing its out-of-space term.
    pub fn algebra_residual_full(&self) -> f64 {
        let eye = DMatrix::identity(self.dim, self.dim);
        relative_block_residual(&self.defining_word(), &eye, self.dim)
    }

    /// Relative residual of the word-shuffling relation
    /// `L^s·R = [s]·L^{s−1} + σ q^s·R·L^s` (σ = (−1)^s fermion, +1 boson)
    /// on the leading `(dim−s−1)` block.
    pub fn reorder_residual(&self, s: usize) -> Result<f64, Error> {
        if s < 1 || s > self.dim - 2 {
            return Err(Error::Domain(format!(
                "need 1 <= s <= dim-2 = {}, got s={s}",
                self.dim - 2
            )));
        }
        let bracket_s = qnum(self.kind, s as u32).eval_f64(self.q)?;
        let sigma = match self.kind {
            QKind::Boson => 1.0,
            QKind::Fermion => {
                if s % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        let ls = mat_pow(&self.lowering, s);
        let lhs = &ls * &self.raising;
        let rhs = mat_pow(&self.lowering, s - 1) * self.scalar(bracket_s)
            + (&self.raising * &ls) * self.scalar(sigma * self.q.powi(s as i32));
        Ok(relative_block_residual(&lhs, &rhs, self.dim - s - 1))
    }

    /// Relative residual of the r-th power expansion into ordered words,
    /// `X^r = Σ_s T^r_s · (ordered word of length 2s)`, on the leading
    /// `(dim−r−1)` block. `X = R·L` for normal mode, `L·R` for antinormal;
    /// the triangle must be the one generated for `(kind, mode)`.
    pub fn ordering_residual(
        &self,
        r: usize,
        mode: OrderingMode,
        triangle: &Triangle,
    ) -> Result<f64, Error> {
        let expected_triangle = match (self.kind, mode) {
            (QKind::Fermion, OrderingMode::Normal) => TriangleKind::Stirling2F,
            (QKind::Boson, OrderingMode::Antinormal) => TriangleKind::AntinormalBoson,
            (QKind::Fermion, OrderingMode::Antinormal) => TriangleKind::AntinormalFermion,
            (QKind::Boson, OrderingMode::Normal) => {
                return Err(Error::KindMismatch {
                    triangle: triangle.kind(),
                    kind: self.kind,
                    mode,
                })
            }
        };
        if triangle.kind() != expected_triangle {
            return Err(Error::KindMismatch {
                triangle: triangle.kind(),
                kind: self.kind,
                mode,
            });
        }
        if r < 1 || r > triangle.num_rows() {
            return Err(Error::Domain(format!(
                "need 1 <= r <= triangle rows = {}, got r={r}",
                triangle.num_rows()
            )));
        }
        if self.dim <= 2 * r {
            return Err(Error::Domain(format!(
                "need dim > 2r, got dim={}, r={r}",
                self.dim
            )));
        }
        let x = match mode {
            OrderingMode::Normal => &self.raising * &self.lowering,
            OrderingMode::Antinormal => &self.lowering * &self.raising,
        };
        let lhs = mat_pow(&x, r);
        let mut rhs = DMatrix::zeros(self.dim, self.dim);
        for s in 1..=r {
            let coeff = triangle.entry(r, s as i64).eval_f64(self.q)?;
            let word = match mode {
                OrderingMode::Normal => mat_pow(&self.raising, s) * mat_pow(&self.lowering, s),
                OrderingMode::Antinormal => mat_pow(&self.lowering, s) * mat_pow(&self.raising, s),
            };
            rhs += word * self.scalar(coeff);
        }
        Ok(relative_block_residual(&lhs, &rhs, self.dim - r - 1))
    }

    /// Relative deviation of the length-2s ordered word from its exact
    /// diagonal on the leading `(dim−s)` block: `R^s·L^s` is diagonal with
    /// falling factorials, `L^s·R^s` with rising factorials.
    pub fn word_diagonal_residual(&self, s: usize, mode: OrderingMode) -> Result<f64, Error> {
        if s < 1 || s >= self.dim {
            return Err(Error::Domain(format!(
                "need 1 <= s < dim = {}, got s={s}",
                self.dim
            )));
        }
        let word = match mode {
            OrderingMode::Normal => mat_pow(&self.raising, s) * mat_pow(&self.lowering, s),
            OrderingMode::Antinormal => mat_pow(&self.lowering, s) * mat_pow(&self.raising, s),
        };
        let mut expected = DMatrix::zeros(self.dim, self.dim);
        for n in 0..self.dim {
            expected[(n, n)] = self.scalar(self.word_diag(n, s, mode)?);
        }
        Ok(relative_block_residual(&word, &expected, self.dim - s))
    }

    /// Exact-module value of the (n, n) entry of the ordered word: the
    /// falling product is zero when the range dips to `[0]`.
    fn word_diag(&self, n: usize, s: usize, mode: OrderingMode) -> Result<f64, Error> {
        let mut acc = 1.0;
        for k in 0..s {
            let idx = match mode {
                OrderingMode::Normal => n as i64 - k as i64, // [n][n-1]…[n-s+1]
                OrderingMode::Antinormal => n as i64 + 1 + k as i64, // [n+1]…[n+s]
            };
            if idx <= 0 {
                return Ok(0.0);
            }
            acc *= qnum(self.kind, idx as u32).eval_f64(self.q)?;
        }
        Ok(acc)
    }
}
