//! Checks for every inequality the attack's correctness argument rests on.
//!
//! Four conditions matter for a parameter set `(N, q, y, R)`:
//!
//! * the exact bound `lambda_1 > q^(1/y)` on the multiplier lattice,
//!   decidable by enumeration at small rank only;
//! * its heuristic stand-in `0.35 * sqrt(q) > q^(1/y)` (the literal rounded
//!   constant; the exact `1/sqrt(pi*e)` variant sits alongside);
//! * the norm condition on the structured multiplier vector,
//!   `(N^2-1)N/12 + a_last^2 < (q - q^(1/y))^2 / (N * q^(2/y))`, which makes
//!   every short lattice vector lie in the span of the upper block;
//! * the sufficient bound `y < 2*log2(q) / (2 + log2(N(1+R^2)))` tying the
//!   oracle radius to the shaping exponent.
//!
//! Comparisons run at 200-bit precision to keep boundary cases honest.

use crate::attack::build_qary_basis;
use crate::lattice::{
    enumerate_within_radius, svp_exact_with, LatticeError, ReductionParams, DEFAULT_ENUM_CAP,
};
use crate::real::{floor_n_q_pow, q_pow, DEFAULT_FLOAT_PRECISION};
use crate::ring::ConvPoly;
use rand::Rng;
use rug::ops::Pow;
use rug::{Float, Integer};

const PREC: u32 = DEFAULT_FLOAT_PRECISION;

/// Everything `check-params` reports for one parameter tuple. `None` in a
/// tri-state field means "not evaluated" (e.g. exact SVP out of reach).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ParamCheckReport {
    pub n: u64,
    pub q: u64,
    pub y: f64,
    pub r_radius: Option<u64>,
    /// Gaussian-heuristic length estimate for the full 2N-dimensional
    /// lattice, and the same scaled by 1/sqrt(N) for the planted short
    /// vector.
    pub gh_estimate: f64,
    pub gh_adjusted: f64,
    /// Exact first minimum of the multiplier lattice, when computed.
    pub lambda1: Option<f64>,
    /// Seed used to draw the random multiplier for the exact check.
    pub a_seed: Option<u64>,
    pub heuristic_ok: Option<bool>,
    pub heuristic_exact_constant_ok: Option<bool>,
    pub lambda1_ok: Option<bool>,
    pub structured_a_ok: Option<bool>,
    pub y_bound_ok: Option<bool>,
    /// Free-form observations, e.g. disagreement with published claims.
    pub notes: Vec<String>,
}

/// `(gh, adjusted)` where `gh = sqrt(q*N/(pi*e))` estimates the shortest
/// length in dimension `2N` with volume `q^N`, and `adjusted = gh/sqrt(N)`
/// accounts for the planted vector being shorter by that factor.
pub fn gaussian_heuristic_estimate(n: u64, q: u64) -> (f64, f64) {
    let pi_e = Float::with_val(PREC, rug::float::Constant::Pi) * Float::with_val(PREC, 1).exp();
    let gh = (Float::with_val(PREC, q) * Float::with_val(PREC, n) / pi_e).sqrt();
    let adjusted = gh.clone() / Float::with_val(PREC, n).sqrt();
    (gh.to_f64(), adjusted.to_f64())
}

/// The heuristic inequality with the rounded constant: `0.35*sqrt(q) > q^(1/y)`.
pub fn check_heuristic_inequality(q: u64, y: f64) -> bool {
    let lhs = Float::with_val(PREC, 0.35f64) * Float::with_val(PREC, q).sqrt();
    lhs > q_pow(q, 1.0, y, PREC)
}

/// Same inequality with the exact constant `1/sqrt(pi*e)` instead of 0.35.
pub fn check_heuristic_inequality_exact_constant(q: u64, y: f64) -> bool {
    let pi_e = Float::with_val(PREC, rug::float::Constant::Pi) * Float::with_val(PREC, 1).exp();
    let lhs = Float::with_val(PREC, q).sqrt() / pi_e.sqrt();
    lhs > q_pow(q, 1.0, y, PREC)
}

/// Exact check of `lambda_1(L_a) > q^(1/y)` by enumeration. The rank `2N`
/// must fit the enumeration cap.
pub fn check_lambda1_exact(a: &ConvPoly, q: u64, y: f64) -> Result<(bool, f64), LatticeError> {
    let basis = build_qary_basis(a, q);
    let sv = svp_exact_with(&basis, &ReductionParams::default(), DEFAULT_ENUM_CAP)?;
    // compare exactly: lambda1^2 > q^(2/y)
    let bound = q_pow(q, 2.0, y, PREC);
    let lambda_sq = Float::with_val(PREC, &sv.norm_sq);
    Ok((lambda_sq > bound, sv.lambda1()))
}

/// The structured-multiplier norm condition
/// `(N^2-1)N/12 + a_last^2 < (1/N) * (q - q^(1/y))^2 / q^(2/y)`
/// with `a_last = floor(N*q^(1/y)) + 1`.
pub fn check_structured_a_inequality(n: u64, q: u64, y: f64) -> bool {
    assert!(n % 2 == 1, "the structured multiplier needs odd N");
    let lhs = Float::with_val(PREC, structured_a_lhs(n, q, y));
    let q1y = q_pow(q, 1.0, y, PREC);
    let diff = Float::with_val(PREC, Float::with_val(PREC, q) - &q1y);
    let rhs = diff.square() / q_pow(q, 2.0, y, PREC) / Float::with_val(PREC, n);
    lhs < rhs
}

/// Exact integer left-hand side of the structured inequality, exposed for
/// cross-checks.
pub fn structured_a_lhs(n: u64, q: u64, y: f64) -> Integer {
    let a_last = floor_n_q_pow(n, q, y) + 1u32;
    (Integer::from(n) * Integer::from(n) - 1u32) * Integer::from(n) / Integer::from(12)
        + a_last.pow(2)
}

/// The sufficient bound `y < 2*log2(q) / (2 + log2(N*(1+R^2)))`.
pub fn check_y_sufficient_bound(n: u64, r_radius: u64, q: u64, y: f64) -> bool {
    y < y_sufficient_bound(n, r_radius, q)
}

/// The bound itself, for reporting.
pub fn y_sufficient_bound(n: u64, r_radius: u64, q: u64) -> f64 {
    let budget = Integer::from(n) * (Integer::from(1) + Integer::from(r_radius).pow(2));
    let log_q = Float::with_val(PREC, q).log2();
    let log_budget = Float::with_val(PREC, budget).log2();
    let bound = Float::with_val(PREC, 2 * log_q) / (Float::with_val(PREC, 2) + log_budget);
    bound.to_f64()
}

/// Equivalent error-budget form of the same bound:
/// `N*(1+R^2) < (1/4) * q^(2/y)`.
pub fn check_error_budget_form(n: u64, r_radius: u64, q: u64, y: f64) -> bool {
    let budget = Float::with_val(
        PREC,
        Integer::from(n) * (Integer::from(1) + Integer::from(r_radius).pow(2)),
    );
    let rhs = q_pow(q, 2.0, y, PREC) / 4u32;
    budget < rhs
}

/// Outcome of the short-vector sweep behind the structured-multiplier
/// condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShortVectorCheck {
    /// Every inspected vector of length at most `q^(1/y)` lies in the span
    /// of the upper block `[I | C(a)]`.
    NoCounterexample { vectors_checked: usize, exhaustive: bool },
    /// A short vector outside that span.
    Counterexample { vector: Vec<Integer> },
}

/// Verifies the conclusion of the structured-multiplier condition for a
/// concrete `a`: short nonzero vectors of the q-ary lattice all lie in the
/// span of `[I | C(a)]`.
///
/// Exhaustive (full enumeration up to the radius) when `2N` fits the cap;
/// otherwise tests `trials` random small combinations of the basis rows.
pub fn structured_short_vector_check<R: Rng + ?Sized>(
    a: &ConvPoly,
    q: u64,
    y: f64,
    trials: usize,
    rng: &mut R,
) -> Result<ShortVectorCheck, LatticeError> {
    let n = a.n();
    let radius_sq_float = q_pow(q, 2.0, y, PREC);
    // exact enumeration wants an integer radius; round up, then filter by
    // the exact float bound
    let radius_sq = radius_sq_float.clone().ceil().to_integer().expect("finite radius");

    let in_upper_span = |v: &[Integer]| -> bool {
        // coordinates are forced by the identity block: the second half
        // must equal first-half * a exactly over the integers
        let first = ConvPoly::new(v[..n].to_vec());
        let prod = first.star_multiply(a).expect("same degree");
        prod.coeffs() == &v[n..]
    };

    let basis = build_qary_basis(a, q);
    if 2 * n <= DEFAULT_ENUM_CAP {
        let short = enumerate_within_radius(
            &basis,
            &radius_sq,
            &ReductionParams::default(),
            DEFAULT_ENUM_CAP,
        )?;
        let mut checked = 0;
        for (v, norm_sq) in short {
            // keep only vectors within the true (possibly irrational) bound
            if Float::with_val(PREC, &norm_sq) > radius_sq_float {
                continue;
            }
            checked += 1;
            if !in_upper_span(&v) {
                return Ok(ShortVectorCheck::Counterexample { vector: v });
            }
        }
        Ok(ShortVectorCheck::NoCounterexample { vectors_checked: checked, exhaustive: true })
    } else {
        let mut checked = 0;
        for _ in 0..trials {
            // sparse small combinations are the only plausible sources of
            // short vectors
            let coeffs: Vec<Integer> = (0..2 * n)
                .map(|_| {
                    let v: i64 =
                        if rng.gen_range(0..10) == 0 { rng.gen_range(-2..=2) } else { 0 };
                    Integer::from(v)
                })
                .collect();
            let v = basis.combine(&coeffs);
            if v.iter().all(|c| c.cmp0() == std::cmp::Ordering::Equal) {
                continue;
            }
            let mut norm_sq = Integer::new();
            for c in &v {
                norm_sq += Integer::from(c * c);
            }
            if Float::with_val(PREC, &norm_sq) > radius_sq_float {
                continue;
            }
            checked += 1;
            if !in_upper_span(&v) {
                return Ok(ShortVectorCheck::Counterexample { vector: v });
            }
        }
        Ok(ShortVectorCheck::NoCounterexample { vectors_checked: checked, exhaustive: false })
    }
}

/// Parameter tuples for which reference runs report the exact
/// first-minimum condition and the heuristic inequality holding together;
/// kept so reports can flag the disagreement this code finds on the
/// heuristic side.
pub const REFERENCE_EXACT_TUPLES: [(u64, u64, f64); 4] =
    [(21, 32, 1.5), (23, 32, 2.0), (25, 512, 2.0), (27, 512, 2.0)];

/// Builds the full report for one parameter tuple, running the exact SVP
/// check (on a uniformly random multiplier drawn from `a_seed`) when the
/// rank fits the enumeration cap.
pub fn check_params(
    n: u64,
    q: u64,
    y: f64,
    r_radius: Option<u64>,
    a_seed: u64,
) -> ParamCheckReport {
    use rand::SeedableRng;
    let (gh_estimate, gh_adjusted) = gaussian_heuristic_estimate(n, q);
    let heuristic_ok = check_heuristic_inequality(q, y);
    let heuristic_exact = check_heuristic_inequality_exact_constant(q, y);
    let structured_ok = if n % 2 == 1 { Some(check_structured_a_inequality(n, q, y)) } else { None };
    let y_bound_ok = r_radius.map(|r| check_y_sufficient_bound(n, r, q, y));

    let mut notes = Vec::new();
    let (lambda1, lambda1_ok, used_seed) = if 2 * n as usize <= DEFAULT_ENUM_CAP {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(a_seed);
        let a = ConvPoly::new((0..n).map(|_| Integer::from(rng.gen_range(0..q))).collect());
        match check_lambda1_exact(&a, q, y) {
            Ok((ok, lambda1)) => (Some(lambda1), Some(ok), Some(a_seed)),
            Err(_) => (None, None, None),
        }
    } else {
        (None, None, None)
    };

    if REFERENCE_EXACT_TUPLES.iter().any(|&(rn, rq, ry)| rn == n && rq == q && ry == y)
        && !heuristic_ok
    {
        notes.push(
            "heuristic inequality evaluates false here although reference runs report \
             this tuple as satisfying both conditions; the exact bound is the decisive one"
                .to_string(),
        );
    }

    ParamCheckReport {
        n,
        q,
        y,
        r_radius,
        gh_estimate,
        gh_adjusted,
        lambda1,
        a_seed: used_seed,
        heuristic_ok: Some(heuristic_ok),
        heuristic_exact_constant_ok: Some(heuristic_exact),
        lambda1_ok,
        structured_a_ok: structured_ok,
        y_bound_ok,
        notes,
    }
}
