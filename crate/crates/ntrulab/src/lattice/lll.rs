//! LLL reduction, iterative textbook form with deep insertion disabled.
//!
//! The Gram–Schmidt state (projection coefficients and squared norms) is
//! maintained incrementally through size reductions and swaps instead of
//! being recomputed, which is what makes rank ~100 runs practical at high
//! float precision. Basis rows stay exact integers throughout.

use super::{gram_schmidt, LatticeBasis, LatticeError, ReductionParams};
use crate::real::{PrecisionMode, Real};
use rug::Integer;

/// Size-reduces and Lovász-orders the basis rows.
///
/// The output spans the same lattice: every step is a unimodular row
/// operation. In float mode a stuck run (non-finite values or an iteration
/// budget blowout) reports [`LatticeError::PrecisionFailure`] so the caller
/// can retry exactly.
pub fn lll_reduce(
    basis: &LatticeBasis,
    params: &ReductionParams,
) -> Result<LatticeBasis, LatticeError> {
    params.validate();
    let n = basis.rank();
    let mut rows: Vec<Vec<Integer>> = basis.rows().to_vec();
    if n == 1 {
        return LatticeBasis::from_rows(rows);
    }

    let mode = params.precision;
    let delta = Real::from_f64(mode, params.delta);

    let gso = gram_schmidt(basis, params)?;
    let mut mu = gso.mu;
    let mut norms = gso.norms_sq;

    // Provable swap counts are polynomial; this budget is far above them
    // and only trips when float precision has collapsed.
    let max_bits = rows
        .iter()
        .flat_map(|r| r.iter())
        .map(|c| c.significant_bits() as usize)
        .max()
        .unwrap_or(1)
        .max(1);
    let budget: usize = 64 * n * n * (max_bits + n) + 100_000;
    let mut steps = 0usize;

    let mut k = 1usize;
    while k < n {
        steps += 1;
        if steps > budget {
            return Err(LatticeError::PrecisionFailure);
        }

        for j in (0..k).rev() {
            size_reduce(&mut rows, &mut mu, k, j);
        }
        if mode != PrecisionMode::Exact && !norms[k].is_finite() {
            return Err(LatticeError::PrecisionFailure);
        }

        // Lovász: ||b*_k||^2 >= (delta - mu_k,k-1^2) ||b*_{k-1}||^2
        let threshold = delta.sub(&mu[k][k - 1].square()).mul(&norms[k - 1]);
        if norms[k] >= threshold {
            k += 1;
        } else {
            swap_rows(&mut rows, &mut mu, &mut norms, k);
            k = k.max(2) - 1;
        }
    }

    LatticeBasis::from_rows(rows)
}

/// [`lll_reduce`], retrying in exact-rational mode when float precision
/// fails and the rank is small enough for that to be tractable.
pub fn lll_reduce_with_fallback(
    basis: &LatticeBasis,
    params: &ReductionParams,
) -> Result<LatticeBasis, LatticeError> {
    match lll_reduce(basis, params) {
        Err(LatticeError::PrecisionFailure)
            if params.precision != PrecisionMode::Exact && basis.rank() <= 30 =>
        {
            lll_reduce(basis, &params.exact())
        }
        other => other,
    }
}

fn size_reduce(rows: &mut [Vec<Integer>], mu: &mut [Vec<Real>], k: usize, j: usize) {
    let r = mu[k][j].round_ties_toward_zero();
    if r.cmp0() == std::cmp::Ordering::Equal {
        return;
    }
    let (upper, lower) = rows.split_at_mut(k);
    for (bk, bj) in lower[0].iter_mut().zip(&upper[j]) {
        *bk -= Integer::from(&r * bj);
    }
    let r_real = Real::from_integer(mu[k][j].mode(), &r);
    for i in 0..=j {
        let adj = r_real.mul(&mu[j][i]);
        mu[k][i] = mu[k][i].sub(&adj);
    }
}

/// Swaps rows `k-1` and `k` and patches the Gram–Schmidt state in place.
fn swap_rows(
    rows: &mut [Vec<Integer>],
    mu: &mut [Vec<Real>],
    norms: &mut [Real],
    k: usize,
) {
    let n = rows.len();
    rows.swap(k - 1, k);

    let mu_k = mu[k][k - 1].clone();
    let new_upper = norms[k].add(&mu_k.square().mul(&norms[k - 1]));
    let new_mu = mu_k.mul(&norms[k - 1]).div(&new_upper);
    norms[k] = norms[k - 1].mul(&norms[k]).div(&new_upper);
    norms[k - 1] = new_upper;
    mu[k][k - 1] = new_mu.clone();

    for j in 0..k - 1 {
        let tmp = mu[k - 1][j].clone();
        mu[k - 1][j] = mu[k][j].clone();
        mu[k][j] = tmp;
    }
    for i in k + 1..n {
        let t = mu[i][k].clone();
        mu[i][k] = mu[i][k - 1].sub(&mu_k.mul(&t));
        mu[i][k - 1] = t.add(&new_mu.mul(&mu[i][k]));
    }
}
