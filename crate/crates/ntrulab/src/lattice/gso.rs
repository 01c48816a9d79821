//! Gram–Schmidt orthogonalization in the chosen arithmetic mode.

use super::{GsoData, LatticeBasis, LatticeError, ReductionParams};
use crate::real::{PrecisionMode, Real};

/// Orthogonalizes the rows of `basis` (modified Gram–Schmidt).
///
/// Fails with [`LatticeError::DependentRows`] when a row projects to
/// (numerically) nothing: exactly zero in rational mode, below a relative
/// threshold of `2^-(prec/2)` in float mode.
pub fn gram_schmidt(basis: &LatticeBasis, params: &ReductionParams) -> Result<GsoData, LatticeError> {
    params.validate();
    let mode = params.precision;
    let n = basis.rank();

    let mut bstar: Vec<Vec<Real>> = Vec::with_capacity(n);
    let mut mu: Vec<Vec<Real>> = vec![vec![Real::zero(mode); n]; n];
    let mut norms_sq: Vec<Real> = Vec::with_capacity(n);

    for i in 0..n {
        let mut v: Vec<Real> =
            basis.row(i).iter().map(|c| Real::from_integer(mode, c)).collect();
        let row_norm = dot(&v, &v);
        for j in 0..i {
            let coeff = dot(&v, &bstar[j]).div(&norms_sq[j]);
            for (vk, bk) in v.iter_mut().zip(&bstar[j]) {
                vk.sub_assign(&coeff.mul(bk));
            }
            mu[i][j] = coeff;
        }
        mu[i][i] = Real::from_f64(mode, 1.0);
        let nsq = dot(&v, &v);
        if !nsq.is_finite() || is_effectively_zero(&nsq, &row_norm, mode) {
            return Err(LatticeError::DependentRows);
        }
        norms_sq.push(nsq);
        bstar.push(v);
    }
    Ok(GsoData { bstar, mu, norms_sq })
}

fn dot(a: &[Real], b: &[Real]) -> Real {
    let mut acc = Real::zero(a[0].mode());
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

fn is_effectively_zero(norm_sq: &Real, row_norm_sq: &Real, mode: PrecisionMode) -> bool {
    match mode {
        PrecisionMode::Exact => norm_sq.is_zero(),
        PrecisionMode::Float(prec) => {
            if norm_sq.is_zero() {
                return true;
            }
            if row_norm_sq.is_zero() {
                return true;
            }
            let ratio = norm_sq.div(row_norm_sq).to_f64();
            ratio <= 2f64.powi(-((prec / 2) as i32))
        }
    }
}
