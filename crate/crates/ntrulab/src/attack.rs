//! Message-recovery attack through a lattice that does not depend on the
//! public key.
//!
//! Multiplying the encryption equation by a chosen vector `a` gives
//! `a*m = b + c (mod q)` with `b = a*e mod q` known and
//! `c = -p*a*r*h mod q` unknown. The vector `u = (m, b+c)` lies in the
//! q-ary lattice spanned by `[I | C(a); 0 | qI]`, which depends only on
//! `(N, q)` and the shape parameter `y` baked into `a`. Given an
//! approximation `E` of `V = (m, c)`, the closest lattice vector to
//! `E + (0, b)` starts with the message coefficients. One LLL reduction
//! therefore serves any number of keypairs and ciphertexts.
//!
//! The classic attack on the public-key lattice `[I | C(h); 0 | qI]` with
//! target `(0, e)` is kept as the baseline it generalizes.

use crate::lattice::{
    babai_nearest_plane, cvp_exact_with, gram_schmidt, integer_coordinates,
    lll_reduce_with_fallback, GsoData, LatticeBasis, LatticeError, ReductionParams,
    DEFAULT_ENUM_CAP,
};
use crate::ntru::{
    encrypt, recover_nonce, recover_nonce_via_quotient, Ciphertext, NtruError, NtruParams,
};
use crate::real::floor_n_q_pow;
use crate::ring::{ConvPoly, RingError};
use rand::Rng;
use rug::Integer;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error("lattice: {0}")]
    Lattice(#[from] LatticeError),
    #[error("ring: {0}")]
    Ring(#[from] RingError),
    #[error("vector length {got} does not match 2N = {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("guess for the first half of E must be ternary")]
    BadGuess,
}

/// How the multiplier vector `a` is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AStrategy {
    /// First `N-1` entries uniform in `{0,1}`, last entry `floor(N*q^(1/y))`.
    #[serde(rename = "algorithm1")]
    Binary01,
    /// Entries `{-2,2}` plus `floor(N*q^(1/y))`, uniformly shuffled.
    Pm2Shuffled,
    /// Deterministic `(-k..-1, 1..k, floor(N*q^(1/y)) + 1)` for `N = 2k+1`.
    Structured,
}

impl AStrategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            AStrategy::Binary01 => "algorithm1",
            AStrategy::Pm2Shuffled => "pm2_shuffled",
            AStrategy::Structured => "structured",
        }
    }

    /// A deterministic strategy ignores its seed; used to normalize cache keys.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, AStrategy::Structured)
    }
}

impl std::str::FromStr for AStrategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "algorithm1" => Ok(AStrategy::Binary01),
            "pm2_shuffled" => Ok(AStrategy::Pm2Shuffled),
            "structured" => Ok(AStrategy::Structured),
            other => Err(format!(
                "unknown strategy {other:?} (expected algorithm1, pm2_shuffled or structured)"
            )),
        }
    }
}

impl std::fmt::Display for AStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Attack knobs: the lattice shaping exponent, the oracle radius, the
/// multiplier strategy, the guess for the first half of `E`, and the call
/// budget.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AttackConfig {
    pub y: f64,
    pub r_radius: u64,
    pub a_strategy: AStrategy,
    /// Ternary guess for the first `N` entries of `E`; `None` means all-zero.
    #[serde(serialize_with = "serialize_guess")]
    pub rn_guess: Option<ConvPoly>,
    pub max_oracle_calls: usize,
}

impl AttackConfig {
    pub fn new(y: f64, r_radius: u64) -> Self {
        AttackConfig {
            y,
            r_radius,
            a_strategy: AStrategy::Binary01,
            rn_guess: None,
            max_oracle_calls: 100,
        }
    }
}

fn serialize_guess<S: serde::Serializer>(
    guess: &Option<ConvPoly>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match guess {
        None => s.serialize_none(),
        Some(p) => {
            let v: Vec<i64> = p
                .coeffs()
                .iter()
                .map(|c| c.to_i64().expect("ternary guess fits i64"))
                .collect();
            s.serialize_some(&v)
        }
    }
}

/// The oracle's approximation of `V = (m, c)`: a ternary guess for the
/// first half and per-coordinate approximations of `c` in the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EVector {
    pub entries: Vec<Integer>,
}

/// `E + (0_N, b)`, the vector handed to the CVP solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetVector {
    pub entries: Vec<Integer>,
}

/// `(m, c)` stacked as one vector of length 2N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionVector {
    pub entries: Vec<Integer>,
}

impl SolutionVector {
    pub fn from_halves(m: &ConvPoly, c: &ConvPoly) -> Self {
        let mut entries = m.coeffs().to_vec();
        entries.extend_from_slice(c.coeffs());
        SolutionVector { entries }
    }
}

/// A reduced attack basis together with its orthogonalization, ready for
/// repeated Babai calls.
#[derive(Debug, Clone)]
pub struct PreparedLattice {
    pub basis: LatticeBasis,
    pub gso: GsoData,
}

impl PreparedLattice {
    pub fn from_reduced(
        basis: LatticeBasis,
        params: &ReductionParams,
    ) -> Result<Self, LatticeError> {
        let gso = gram_schmidt(&basis, params)?;
        Ok(PreparedLattice { basis, gso })
    }
}

/// Draws the multiplier vector `a` for the given strategy.
///
/// `structured` requires odd `n` and ignores the RNG.
pub fn choose_a<R: Rng + ?Sized>(
    strategy: AStrategy,
    n: usize,
    q: u64,
    y: f64,
    rng: &mut R,
) -> ConvPoly {
    match strategy {
        AStrategy::Binary01 => {
            let mut coeffs: Vec<Integer> =
                (0..n - 1).map(|_| Integer::from(rng.gen_range(0..=1))).collect();
            coeffs.push(floor_n_q_pow(n as u64, q, y));
            ConvPoly::new(coeffs)
        }
        AStrategy::Pm2Shuffled => {
            let mut coeffs: Vec<Integer> = (0..n - 1)
                .map(|_| Integer::from(if rng.gen_range(0..=1) == 0 { -2 } else { 2 }))
                .collect();
            coeffs.push(floor_n_q_pow(n as u64, q, y));
            // Fisher–Yates over all N entries, the large one included
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                coeffs.swap(i, j);
            }
            ConvPoly::new(coeffs)
        }
        AStrategy::Structured => {
            assert!(n >= 3 && n % 2 == 1, "structured multiplier needs odd N >= 3");
            let k = (n - 1) / 2;
            let mut coeffs: Vec<Integer> = Vec::with_capacity(n);
            for j in 0..k {
                coeffs.push(Integer::from(j as i64 - k as i64));
            }
            for j in 1..=k {
                coeffs.push(Integer::from(j as i64));
            }
            coeffs.push(floor_n_q_pow(n as u64, q, y) + 1u32);
            ConvPoly::new(coeffs)
        }
    }
}

/// The 2N x 2N q-ary block basis `[I | C(v); 0 | qI]` used both for the
/// multiplier lattice and, with `v = h`, for the classic public-key lattice.
pub fn build_qary_basis(v: &ConvPoly, q: u64) -> LatticeBasis {
    let n = v.n();
    let circ = v.circulant();
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut row = vec![Integer::new(); 2 * n];
        row[i] = Integer::from(1);
        row[n..].clone_from_slice(&circ[i]);
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![Integer::new(); 2 * n];
        row[n + i] = Integer::from(q);
        rows.push(row);
    }
    LatticeBasis::from_rows(rows).expect("well-formed block basis")
}

/// `b = a * e mod q`, the known part of the congruence.
pub fn compute_b(a: &ConvPoly, e: &ConvPoly, q: u64) -> Result<ConvPoly, AttackError> {
    Ok(a.star_multiply(e)?.reduce_mod(q))
}

/// `c = -p * a * r * h mod q`. Simulation only: the true nonce is the
/// oracle's private input.
pub fn compute_c_ground_truth(
    a: &ConvPoly,
    r: &ConvPoly,
    h: &ConvPoly,
    p: u64,
    q: u64,
) -> Result<ConvPoly, AttackError> {
    let arh = a.star_multiply(r)?.star_multiply(h)?;
    Ok(arh.scale(-(p as i64)).reduce_mod(q))
}

/// One oracle call: `E = (guess, E')` with each `E'_i` uniform on the
/// integer interval `[c_i - R, c_i + R]`.
pub fn oracle_e<R: Rng + ?Sized>(
    c: &ConvPoly,
    r_radius: u64,
    rn_guess: Option<&ConvPoly>,
    rng: &mut R,
) -> Result<EVector, AttackError> {
    let n = c.n();
    let mut entries = Vec::with_capacity(2 * n);
    match rn_guess {
        None => entries.extend(std::iter::repeat_with(Integer::new).take(n)),
        Some(g) => {
            if g.n() != n || g.coeffs().iter().any(|c| c.clone().abs() > 1) {
                return Err(AttackError::BadGuess);
            }
            entries.extend_from_slice(g.coeffs());
        }
    }
    let radius = r_radius as i64;
    for ci in c.coeffs() {
        let noise = rng.gen_range(-radius..=radius);
        entries.push(Integer::from(ci + noise));
    }
    Ok(EVector { entries })
}

/// `b_target = E + (0_N, b)`.
pub fn assemble_target(b: &ConvPoly, e_vec: &EVector) -> Result<TargetVector, AttackError> {
    let n = b.n();
    if e_vec.entries.len() != 2 * n {
        return Err(AttackError::BadLength { expected: 2 * n, got: e_vec.entries.len() });
    }
    let mut entries = e_vec.entries.clone();
    for (t, bi) in entries[n..].iter_mut().zip(b.coeffs()) {
        *t += bi;
    }
    Ok(TargetVector { entries })
}

/// Builds (or reuses) the reduced multiplier lattice and extracts a message
/// candidate from the closest-vector approximation: the first `N`
/// coordinates of the lattice vector nearest to `E + (0, b)`.
///
/// Exact CVP is used when the rank fits the enumeration cap, Babai's
/// nearest plane otherwise. No validity claim is made; verification is the
/// caller's job.
pub fn run_attack(
    e: &Ciphertext,
    _cfg: &AttackConfig,
    a: &ConvPoly,
    e_vec: &EVector,
    params: &NtruParams,
    prepared: Option<&PreparedLattice>,
    red_params: &ReductionParams,
) -> Result<ConvPoly, AttackError> {
    let n = params.n;
    let b = compute_b(a, &e.e, params.q)?;
    let target = assemble_target(&b, e_vec)?;

    let w = if 2 * n <= DEFAULT_ENUM_CAP {
        let basis_storage;
        let basis = match prepared {
            Some(p) => &p.basis,
            None => {
                basis_storage = build_qary_basis(a, params.q);
                &basis_storage
            }
        };
        cvp_exact_with(basis, &target.entries, red_params, DEFAULT_ENUM_CAP)?
    } else {
        let prepared_storage;
        let prepared = match prepared {
            Some(p) => p,
            None => {
                let reduced =
                    lll_reduce_with_fallback(&build_qary_basis(a, params.q), red_params)?;
                prepared_storage = PreparedLattice::from_reduced(reduced, red_params)?;
                &prepared_storage
            }
        };
        babai_nearest_plane(&prepared.basis, &prepared.gso, &target.entries)?
    };

    Ok(ConvPoly::new(w[..n].to_vec()))
}

/// Outcome of candidate verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    /// The candidate decodes to a nonce with the right weights and
    /// re-encrypts to the ciphertext.
    Confirmed { nonce: ConvPoly },
    Rejected,
    /// No nonce-recovery route was available; `plausible` records whether
    /// the candidate at least lies in the plaintext space.
    Indeterminate { plausible: bool },
}

impl Verification {
    /// Decisive success only.
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verification::Confirmed { .. })
    }
}

/// Checks a candidate message decisively where possible: recover the nonce
/// (directly when `h` is invertible mod q, through the quotient ring
/// otherwise), check its weights, and re-encrypt.
pub fn verify_candidate(
    m_prime: &ConvPoly,
    e: &Ciphertext,
    h: &ConvPoly,
    params: &NtruParams,
) -> Verification {
    let bound = Integer::from(params.plaintext_bound());
    let plausible = m_prime.n() == params.n
        && m_prime.coeffs().iter().all(|c| Integer::from(c.abs_ref()) <= bound);
    if !plausible {
        return Verification::Rejected;
    }

    let recovered = match recover_nonce(e, m_prime, h, params) {
        Ok(r) => Some(r),
        Err(NtruError::HNotInvertible) => {
            match recover_nonce_via_quotient(e, m_prime, h, params) {
                Ok(r) => Some(r),
                Err(NtruError::QuotientNotInvertible) => None,
                Err(_) => None,
            }
        }
        Err(_) => None,
    };

    match recovered {
        None => Verification::Indeterminate { plausible },
        Some(nonce) => {
            if !params.lr.contains(&nonce) {
                return Verification::Rejected;
            }
            match encrypt(h, m_prime, &nonce, params) {
                Ok(e2) if e2 == *e => Verification::Confirmed { nonce },
                _ => Verification::Rejected,
            }
        }
    }
}

/// Output of the classic public-key-lattice attack: the lattice vector
/// found is interpreted as `(p*r, e - m)`.
#[derive(Debug, Clone)]
pub struct ClassicRecovery {
    pub message: ConvPoly,
    pub scaled_nonce: ConvPoly,
}

/// The baseline CVP attack on `[I | C(h); 0 | qI]` with target
/// `(0_N, e) + E`; `E = 0` is the textbook version.
pub fn classic_cvp_attack(
    h: &ConvPoly,
    e: &Ciphertext,
    e_vec: &EVector,
    q: u64,
    red_params: &ReductionParams,
) -> Result<ClassicRecovery, AttackError> {
    let n = h.n();
    if e_vec.entries.len() != 2 * n {
        return Err(AttackError::BadLength { expected: 2 * n, got: e_vec.entries.len() });
    }
    let basis = build_qary_basis(h, q);
    let mut target = e_vec.entries.clone();
    for (t, ei) in target[n..].iter_mut().zip(e.e.coeffs()) {
        *t += ei;
    }

    let w = if 2 * n <= DEFAULT_ENUM_CAP {
        cvp_exact_with(&basis, &target, red_params, DEFAULT_ENUM_CAP)?
    } else {
        let reduced = lll_reduce_with_fallback(&basis, red_params)?;
        let prepared = PreparedLattice::from_reduced(reduced, red_params)?;
        babai_nearest_plane(&prepared.basis, &prepared.gso, &target)?
    };

    let scaled_nonce = ConvPoly::new(w[..n].to_vec());
    let tail = ConvPoly::new(w[n..].to_vec());
    let message = e.e.sub(&tail).centerlift(q);
    Ok(ClassicRecovery { message, scaled_nonce })
}

/// `u = (m, b + c)` with the unreduced integer sum in the second half; the
/// membership witness of the correctness argument.
pub fn membership_vector(
    m: &ConvPoly,
    b: &ConvPoly,
    c: &ConvPoly,
) -> Result<SolutionVector, AttackError> {
    let n = m.n();
    if b.n() != n || c.n() != n {
        return Err(AttackError::BadLength { expected: n, got: b.n().max(c.n()) });
    }
    let mut entries = m.coeffs().to_vec();
    for (bi, ci) in b.coeffs().iter().zip(c.coeffs()) {
        entries.push(Integer::from(bi + ci));
    }
    Ok(SolutionVector { entries })
}

/// Exact squared Euclidean distance between two integer vectors.
pub fn dist_sq(a: &[Integer], b: &[Integer]) -> Integer {
    assert_eq!(a.len(), b.len());
    let mut s = Integer::new();
    for (x, y) in a.iter().zip(b) {
        let d = Integer::from(x - y);
        s += Integer::from(&d * &d);
    }
    s
}

/// Membership check against the full q-ary basis by exact solve.
pub fn is_lattice_member(basis: &LatticeBasis, v: &[Integer]) -> bool {
    integer_coordinates(basis, v).is_some()
}
