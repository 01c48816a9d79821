//! Babai's nearest plane algorithm.

use super::{diff_norm_sq_integer, GsoData, LatticeBasis, LatticeError};
use crate::real::Real;
use rug::Integer;

/// Walks the planes from the last Gram–Schmidt direction down, rounding the
/// projection of the residual each time. Returns a lattice vector `w` with
/// `||w - target||^2 <= (1/4) * sum ||b*_i||^2`.
///
/// Rounding ties (projection exactly 1/2) go toward zero, making runs
/// bit-reproducible.
pub fn babai_nearest_plane(
    basis: &LatticeBasis,
    gso: &GsoData,
    target: &[Integer],
) -> Result<Vec<Integer>, LatticeError> {
    if target.len() != basis.dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: basis.dim(),
            got: target.len(),
        });
    }
    if gso.rank() != basis.rank() {
        return Err(LatticeError::DimensionMismatch {
            expected: basis.rank(),
            got: gso.rank(),
        });
    }
    let mode = gso.mode();
    let n = basis.rank();

    let mut residual: Vec<Real> = target.iter().map(|c| Real::from_integer(mode, c)).collect();
    let mut out = vec![Integer::new(); basis.dim()];
    for i in (0..n).rev() {
        let mut proj = Real::zero(mode);
        for (r, b) in residual.iter().zip(&gso.bstar[i]) {
            proj = proj.add(&r.mul(b));
        }
        let coeff = proj.div(&gso.norms_sq[i]).round_ties_toward_zero();
        if coeff.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        let coeff_real = Real::from_integer(mode, &coeff);
        for ((r, b), o) in residual.iter_mut().zip(basis.row(i)).zip(out.iter_mut()) {
            r.sub_assign(&coeff_real.mul_integer(b));
            *o += Integer::from(&coeff * b);
        }
    }

    debug_assert!({
        let dist = diff_norm_sq_integer(&out, target).to_f64();
        let bound: f64 = gso.norms_sq.iter().map(|n| n.to_f64()).sum::<f64>() / 4.0;
        dist <= bound * (1.0 + 1e-9)
    });
    Ok(out)
}
