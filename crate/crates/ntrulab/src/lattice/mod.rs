//! Integer-lattice toolkit: Gram–Schmidt, LLL, Babai nearest plane, and
//! exact SVP/CVP by enumeration at small rank.
//!
//! Bases are row-major with arbitrary-precision integer entries. All the
//! bases built in this crate are square and full-rank; the code checks
//! independence rather than assuming it.

mod babai;
mod cache;
mod enumerate;
mod gso;
mod lll;

pub use babai::babai_nearest_plane;
pub use cache::{read_basis_cache, write_basis_cache, BasisCacheError, BasisCacheKey};
pub use enumerate::{
    cvp_exact, cvp_exact_with, enumerate_within_radius, integer_coordinates,
    rational_coordinates, svp_exact, svp_exact_with, ShortestVector, DEFAULT_ENUM_CAP,
};
pub use gso::gram_schmidt;
pub use lll::{lll_reduce, lll_reduce_with_fallback};

use crate::real::{PrecisionMode, Real};
use rug::Integer;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("basis rows are not linearly independent")]
    DependentRows,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank {rank} exceeds the enumeration cap {cap}")]
    RankTooLarge { rank: usize, cap: usize },
    #[error("floating-point precision failure during reduction")]
    PrecisionFailure,
    #[error("basis must have at least one row, rows of equal positive length")]
    MalformedBasis,
}

/// Row-major basis of an integer lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: Vec<Vec<Integer>>,
}

impl LatticeBasis {
    pub fn from_rows(rows: Vec<Vec<Integer>>) -> Result<Self, LatticeError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(LatticeError::MalformedBasis);
        }
        let m = rows[0].len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(LatticeError::MalformedBasis);
        }
        Ok(LatticeBasis { rows })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Integer::from(v)).collect()).collect(),
        )
        .expect("literal basis")
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1)
    }

    pub fn scaled_identity(n: usize, c: i64) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![Integer::new(); n];
                row[i] = Integer::from(c);
                row
            })
            .collect();
        LatticeBasis { rows }
    }

    /// Number of rows (the rank, once independence is established).
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Ambient dimension (row length).
    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, i: usize) -> &[Integer] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<Integer>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<Integer>> {
        self.rows
    }

    /// `|det|` of a square basis, by fraction-free Gaussian elimination.
    pub fn det_abs(&self) -> Integer {
        assert_eq!(self.rank(), self.dim(), "determinant needs a square basis");
        let n = self.rank();
        let mut m: Vec<Vec<Integer>> = self.rows.clone();
        let mut sign = 1i32;
        let mut divisor = Integer::from(1);
        for k in 0..n {
            if m[k][k].cmp0() == std::cmp::Ordering::Equal {
                let swap = (k + 1..n).find(|&i| m[i][k].cmp0() != std::cmp::Ordering::Equal);
                match swap {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return Integer::new(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let a = Integer::from(&m[k][k] * &m[i][j]);
                    let b = Integer::from(&m[i][k] * &m[k][j]);
                    let mut v = a - b;
                    v /= &divisor;
                    m[i][j] = v;
                }
                m[i][k] = Integer::new();
            }
            divisor = m[k][k].clone();
        }
        let mut det = m[n - 1][n - 1].clone();
        if sign < 0 {
            det = -det;
        }
        det.abs()
    }

    /// The lattice vector with the given integer coefficients.
    pub fn combine(&self, coeffs: &[Integer]) -> Vec<Integer> {
        assert_eq!(coeffs.len(), self.rank());
        let mut out = vec![Integer::new(); self.dim()];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (o, v) in out.iter_mut().zip(row) {
                *o += Integer::from(c * v);
            }
        }
        out
    }
}

/// Gram–Schmidt data: orthogonal vectors, projection coefficients, and the
/// squared lengths of the orthogonal vectors.
#[derive(Debug, Clone)]
pub struct GsoData {
    pub bstar: Vec<Vec<Real>>,
    pub mu: Vec<Vec<Real>>,
    pub norms_sq: Vec<Real>,
}

impl GsoData {
    pub fn rank(&self) -> usize {
        self.norms_sq.len()
    }

    pub fn mode(&self) -> PrecisionMode {
        self.norms_sq[0].mode()
    }
}

/// Knobs for reduction: the LLL parameter and the arithmetic mode.
#[derive(Debug, Clone, Copy)]
pub struct ReductionParams {
    /// LLL quality parameter, in (1/4, 1).
    pub delta: f64,
    pub precision: PrecisionMode,
}

impl Default for ReductionParams {
    fn default() -> Self {
        ReductionParams { delta: 0.99, precision: PrecisionMode::default() }
    }
}

impl ReductionParams {
    pub fn exact(mut self) -> Self {
        self.precision = PrecisionMode::Exact;
        self
    }

    pub fn validate(&self) {
        assert!(self.delta > 0.25 && self.delta < 1.0, "delta must be in (1/4, 1)");
    }
}

pub(crate) fn norm_sq_integer(v: &[Integer]) -> Integer {
    let mut s = Integer::new();
    for c in v {
        s += Integer::from(c * c);
    }
    s
}

pub(crate) fn diff_norm_sq_integer(a: &[Integer], b: &[Integer]) -> Integer {
    let mut s = Integer::new();
    for (x, y) in a.iter().zip(b) {
        let d = Integer::from(x - y);
        s += Integer::from(&d * &d);
    }
    s
}
