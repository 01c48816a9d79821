//! Exact arithmetic in the convolution rings `R = Z[x]/(x^N - 1)` and `R_q`.
//!
//! Elements are length-`N` coefficient vectors (coefficient of `x^j` at
//! index `j`) with arbitrary-precision entries. Star multiplication is the
//! cyclic convolution `c_k = sum_{i+j = k mod N} a_i * b_j`; no modular
//! reduction happens unless asked for explicitly.

use rand::Rng;
use rug::ops::RemRounding;
use rug::Integer;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("ring degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("polynomial is not invertible for this modulus")]
    NotInvertible,
    #[error("modulus {0} is not supported here")]
    InvalidModulus(u64),
    #[error("ternary space T({d1},{d2}) does not fit in degree {n}")]
    InvalidTernarySpace { d1: usize, d2: usize, n: usize },
}

/// An element of `Z[x]/(x^N - 1)` as its coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvPoly {
    coeffs: Vec<Integer>,
}

impl ConvPoly {
    /// Wraps a coefficient vector. The vector length is the ring degree.
    pub fn new(coeffs: Vec<Integer>) -> Self {
        assert!(!coeffs.is_empty(), "ring degree must be positive");
        ConvPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        assert!(n > 0);
        ConvPoly { coeffs: vec![Integer::new(); n] }
    }

    /// The multiplicative identity `1`.
    pub fn one(n: usize) -> Self {
        let mut p = Self::zero(n);
        p.coeffs[0] = Integer::from(1);
        p
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Integer {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.cmp0() == std::cmp::Ordering::Equal)
    }

    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    /// Star multiplication: exact cyclic convolution, no reduction.
    pub fn star_multiply(&self, other: &ConvPoly) -> Result<ConvPoly, RingError> {
        let n = self.n();
        if n != other.n() {
            return Err(RingError::DegreeMismatch { left: n, right: other.n() });
        }
        let mut out = vec![Integer::new(); n];
        for (i, ai) in self.coeffs.iter().enumerate() {
            if ai.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (j, bj) in other.coeffs.iter().enumerate() {
                let mut k = i + j;
                if k >= n {
                    k -= n;
                }
                out[k] += Integer::from(ai * bj);
            }
        }
        Ok(ConvPoly::new(out))
    }

    /// Coefficientwise reduction into `{0, ..., q-1}`.
    pub fn reduce_mod(&self, q: u64) -> ConvPoly {
        assert!(q >= 2, "modulus must be at least 2");
        let qz = Integer::from(q);
        ConvPoly::new(self.coeffs.iter().map(|c| c.rem_euc(&qz).into()).collect())
    }

    /// Coefficientwise representative in the interval `(-q/2, q/2]`.
    pub fn centerlift(&self, q: u64) -> ConvPoly {
        assert!(q >= 2, "modulus must be at least 2");
        let qz = Integer::from(q);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let mut v: Integer = c.rem_euc(&qz).into();
                // keep +q/2, drop anything strictly above
                if Integer::from(2 * &v) > qz {
                    v -= &qz;
                }
                v
            })
            .collect();
        ConvPoly::new(coeffs)
    }

    pub fn add(&self, other: &ConvPoly) -> ConvPoly {
        assert_eq!(self.n(), other.n(), "ring degree mismatch");
        ConvPoly::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Integer::from(a + b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &ConvPoly) -> ConvPoly {
        assert_eq!(self.n(), other.n(), "ring degree mismatch");
        ConvPoly::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Integer::from(a - b))
                .collect(),
        )
    }

    pub fn scale(&self, k: i64) -> ConvPoly {
        ConvPoly::new(self.coeffs.iter().map(|c| Integer::from(c * k)).collect())
    }

    /// Sum of the coefficients, i.e. the evaluation at `x = 1`.
    pub fn evaluate_at_one(&self) -> Integer {
        let mut s = Integer::new();
        for c in &self.coeffs {
            s += c;
        }
        s
    }

    pub fn norm_sq(&self) -> Integer {
        let mut s = Integer::new();
        for c in &self.coeffs {
            s += Integer::from(c * c);
        }
        s
    }

    pub fn max_abs(&self) -> Integer {
        let mut m = Integer::new();
        for c in &self.coeffs {
            let a = Integer::from(c.abs_ref());
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Inverse in `(Z/p)[x]/(x^N - 1)` for prime `p`, by the extended
    /// Euclidean algorithm on the polynomial and `x^N - 1`.
    pub fn invert_mod_prime(&self, p: u64) -> Result<ConvPoly, RingError> {
        let n = self.n();
        let pz = Integer::from(p);
        // x^N - 1
        let mut modulus = vec![Integer::new(); n + 1];
        modulus[0] = Integer::from(-1).rem_euc(&pz).into();
        modulus[n] = Integer::from(1);
        let f: Vec<Integer> = self.coeffs.iter().map(|c| c.rem_euc(&pz).into()).collect();
        let inv = invert_poly_mod_prime(&f, &modulus, &pz).ok_or(RingError::NotInvertible)?;
        let mut coeffs = vec![Integer::new(); n];
        for (i, c) in inv.into_iter().enumerate() {
            coeffs[i % n] += c; // deg(inv) < n, the fold is a no-op
        }
        Ok(ConvPoly::new(coeffs).reduce_mod(p))
    }

    /// Inverse in `R_q` for `q = 2^e`, via the inverse mod 2 and Hensel
    /// lifting `F <- F * (2 - f * F)`.
    pub fn invert_mod_prime_power(&self, q: u64) -> Result<ConvPoly, RingError> {
        if q < 2 || !q.is_power_of_two() {
            return Err(RingError::InvalidModulus(q));
        }
        let mut inv = self.invert_mod_prime(2)?;
        let mut modulus = Integer::from(2u32);
        let qz = Integer::from(q);
        let two = ConvPoly::new(
            std::iter::once(Integer::from(2))
                .chain(std::iter::repeat_with(Integer::new).take(self.n() - 1))
                .collect(),
        );
        while modulus < qz {
            modulus.square_mut();
            let correction = two.sub(&self.star_multiply(&inv).expect("same degree"));
            inv = inv.star_multiply(&correction).expect("same degree");
            let m = modulus.to_u64().map(|m| inv.reduce_mod(m));
            inv = match m {
                Some(r) => r,
                None => inv.reduce_mod_integer(&modulus),
            };
        }
        Ok(inv.reduce_mod(q))
    }

    fn reduce_mod_integer(&self, q: &Integer) -> ConvPoly {
        ConvPoly::new(self.coeffs.iter().map(|c| c.rem_euc(q).into()).collect())
    }

    /// The circulant matrix of this vector: row `i` is the right-rotation
    /// by `i` positions, so row 0 is the vector itself and the entry at
    /// `(i, j)` is the coefficient of index `(j - i) mod N`.
    pub fn circulant(&self) -> Vec<Vec<Integer>> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.coeffs[(j + n - i) % n].clone()).collect())
            .collect()
    }
}

impl std::fmt::Display for ConvPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for c in &self.coeffs {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

/// The set of ternary polynomials with exactly `d1` coefficients equal to
/// `+1` and `d2` equal to `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct TernarySpace {
    pub d1: usize,
    pub d2: usize,
    pub n: usize,
}

impl TernarySpace {
    pub fn new(d1: usize, d2: usize, n: usize) -> Result<Self, RingError> {
        if d1 + d2 > n {
            return Err(RingError::InvalidTernarySpace { d1, d2, n });
        }
        Ok(TernarySpace { d1, d2, n })
    }

    /// Uniform sample: the nonzero positions are placed by a partial
    /// Fisher–Yates shuffle driven by `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ConvPoly {
        let mut positions: Vec<usize> = (0..self.n).collect();
        let k = self.d1 + self.d2;
        for i in 0..k {
            let j = rng.gen_range(i..self.n);
            positions.swap(i, j);
        }
        let mut coeffs = vec![Integer::new(); self.n];
        for (c, &pos) in positions.iter().enumerate().take(k).map(|(c, p)| (c, p)) {
            coeffs[pos] = if c < self.d1 { Integer::from(1) } else { Integer::from(-1) };
        }
        ConvPoly::new(coeffs)
    }

    /// Whether the polynomial has exactly the weights of this space.
    pub fn contains(&self, poly: &ConvPoly) -> bool {
        if poly.n() != self.n {
            return false;
        }
        let (mut ones, mut neg_ones, mut zeros) = (0usize, 0usize, 0usize);
        for c in poly.coeffs() {
            if *c == 1 {
                ones += 1;
            } else if *c == -1 {
                neg_ones += 1;
            } else if c.cmp0() == std::cmp::Ordering::Equal {
                zeros += 1;
            } else {
                return false;
            }
        }
        ones == self.d1 && neg_ones == self.d2 && zeros == self.n - self.d1 - self.d2
    }
}

/// Uniform sample of a ternary vector (weights unconstrained), for message
/// sampling with `p = 3` and small plaintext spaces in general.
pub fn sample_uniform_centered<R: Rng + ?Sized>(n: usize, p: u64, rng: &mut R) -> ConvPoly {
    let half = ((p - 1) / 2) as i64;
    let lo = -((p / 2) as i64) + if p % 2 == 0 { 1 } else { 0 };
    ConvPoly::new((0..n).map(|_| Integer::from(rng.gen_range(lo..=half))).collect())
}

// -- polynomial arithmetic over Z/p, little-endian coefficient vectors -- //

fn poly_deg(a: &[Integer]) -> Option<usize> {
    a.iter().rposition(|c| c.cmp0() != std::cmp::Ordering::Equal)
}

fn poly_trim(mut a: Vec<Integer>) -> Vec<Integer> {
    match poly_deg(&a) {
        Some(d) => {
            a.truncate(d + 1);
            a
        }
        None => Vec::new(),
    }
}

fn poly_sub_mod(a: &[Integer], b: &[Integer], p: &Integer) -> Vec<Integer> {
    let len = a.len().max(b.len());
    let mut out = vec![Integer::new(); len];
    for i in 0..len {
        let av = a.get(i).cloned().unwrap_or_default();
        let bv = b.get(i).cloned().unwrap_or_default();
        out[i] = (av - bv).rem_euc(p).into();
    }
    poly_trim(out)
}

fn poly_mul_mod(a: &[Integer], b: &[Integer], p: &Integer) -> Vec<Integer> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += Integer::from(ai * bj);
        }
    }
    for c in &mut out {
        *c = Integer::from((&*c).rem_euc(p));
    }
    poly_trim(out)
}

fn poly_divrem_mod(num: &[Integer], den: &[Integer], p: &Integer) -> (Vec<Integer>, Vec<Integer>) {
    let dd = poly_deg(den).expect("division by zero polynomial");
    let lead_inv = den[dd].clone().invert(p).expect("leading coefficient invertible mod prime");
    let mut rem: Vec<Integer> = num.to_vec();
    let mut quot = vec![Integer::new(); num.len().saturating_sub(dd) + 1];
    while let Some(dr) = poly_deg(&rem) {
        if dr < dd {
            break;
        }
        let shift = dr - dd;
        let factor: Integer = Integer::from(&rem[dr] * &lead_inv).rem_euc(p).into();
        quot[shift] = (quot[shift].clone() + &factor).rem_euc(p).into();
        for (i, dc) in den.iter().enumerate() {
            let sub = Integer::from(dc * &factor);
            rem[shift + i] = Integer::from(&rem[shift + i] - sub).rem_euc(p).into();
        }
    }
    (poly_trim(quot), poly_trim(rem))
}

/// Extended Euclid over `(Z/p)[x]`: returns `s` with `s * f = 1 (mod modulus)`
/// when `gcd(f, modulus)` is a nonzero constant, `None` otherwise.
pub(crate) fn invert_poly_mod_prime(
    f: &[Integer],
    modulus: &[Integer],
    p: &Integer,
) -> Option<Vec<Integer>> {
    let mut r0 = poly_trim(f.to_vec());
    let mut r1 = poly_trim(modulus.to_vec());
    let mut s0 = vec![Integer::from(1)];
    let mut s1 = Vec::new();
    if r0.is_empty() {
        return None;
    }
    while !r1.is_empty() {
        let (q, rem) = poly_divrem_mod(&r0, &r1, p);
        let s_next = poly_sub_mod(&s0, &poly_mul_mod(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s_next);
    }
    match poly_deg(&r0) {
        Some(0) => {
            let c_inv = r0[0].clone().invert(p).ok()?;
            let scaled = poly_mul_mod(&s0, &[c_inv], p);
            // reduce mod the modulus polynomial so the inverse has small degree
            let (_, reduced) = poly_divrem_mod(&scaled, modulus, p);
            Some(reduced)
        }
        _ => None,
    }
}
