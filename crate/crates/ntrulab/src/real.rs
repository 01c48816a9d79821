//! Scalar arithmetic for orthogonalization and inequality checks.
//!
//! Lattice code runs either on exact rationals or on MPFR floats with a
//! configurable mantissa. The enum wrapper keeps a single code path for
//! Gram–Schmidt, LLL and Babai while letting the caller pick the mode at
//! runtime.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Default mantissa size for floating-point orthogonalization.
pub const DEFAULT_FLOAT_PRECISION: u32 = 200;

/// Arithmetic mode for Gram–Schmidt data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionMode {
    /// Exact rational arithmetic. Intractable beyond moderate rank.
    Exact,
    /// MPFR floats with the given mantissa size in bits.
    Float(u32),
}

impl Default for PrecisionMode {
    fn default() -> Self {
        PrecisionMode::Float(DEFAULT_FLOAT_PRECISION)
    }
}

/// A scalar in the mode chosen by [`PrecisionMode`].
///
/// Mixing modes in one computation is a programming error and panics.
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Rat(Rational),
    Fp(Float),
}

impl Real {
    pub fn zero(mode: PrecisionMode) -> Self {
        match mode {
            PrecisionMode::Exact => Real::Rat(Rational::new()),
            PrecisionMode::Float(p) => Real::Fp(Float::new(p)),
        }
    }

    pub fn from_integer(mode: PrecisionMode, v: &Integer) -> Self {
        match mode {
            PrecisionMode::Exact => Real::Rat(Rational::from(v)),
            PrecisionMode::Float(p) => Real::Fp(Float::with_val(p, v)),
        }
    }

    pub fn from_f64(mode: PrecisionMode, v: f64) -> Self {
        match mode {
            PrecisionMode::Exact => {
                Real::Rat(Rational::from_f64(v).expect("finite f64 expected"))
            }
            PrecisionMode::Float(p) => Real::Fp(Float::with_val(p, v)),
        }
    }

    pub fn mode(&self) -> PrecisionMode {
        match self {
            Real::Rat(_) => PrecisionMode::Exact,
            Real::Fp(f) => PrecisionMode::Float(f.prec()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Rat(r) => r.cmp0() == std::cmp::Ordering::Equal,
            Real::Fp(f) => f.is_zero(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Real::Rat(_) => true,
            Real::Fp(f) => f.is_finite(),
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Rat(a), Real::Rat(b)) => Real::Rat(Rational::from(a + b)),
            (Real::Fp(a), Real::Fp(b)) => Real::Fp(Float::with_val(a.prec(), a + b)),
            _ => panic!("mixed precision modes"),
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Rat(a), Real::Rat(b)) => Real::Rat(Rational::from(a - b)),
            (Real::Fp(a), Real::Fp(b)) => Real::Fp(Float::with_val(a.prec(), a - b)),
            _ => panic!("mixed precision modes"),
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Rat(a), Real::Rat(b)) => Real::Rat(Rational::from(a * b)),
            (Real::Fp(a), Real::Fp(b)) => Real::Fp(Float::with_val(a.prec(), a * b)),
            _ => panic!("mixed precision modes"),
        }
    }

    pub fn div(&self, other: &Real) -> Real {
        match (self, other) {
            (Real::Rat(a), Real::Rat(b)) => Real::Rat(Rational::from(a / b)),
            (Real::Fp(a), Real::Fp(b)) => Real::Fp(Float::with_val(a.prec(), a / b)),
            _ => panic!("mixed precision modes"),
        }
    }

    pub fn mul_integer(&self, k: &Integer) -> Real {
        match self {
            Real::Rat(a) => Real::Rat(Rational::from(a * k)),
            Real::Fp(a) => Real::Fp(Float::with_val(a.prec(), a * k)),
        }
    }

    pub fn sub_assign(&mut self, other: &Real) {
        *self = self.sub(other);
    }

    pub fn square(&self) -> Real {
        self.mul(self)
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Rat(a) => Real::Rat(Rational::from(a.abs_ref())),
            Real::Fp(a) => Real::Fp(Float::with_val(a.prec(), a.abs_ref())),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Rat(a) => a.to_f64(),
            Real::Fp(a) => a.to_f64(),
        }
    }

    /// Nearest integer, with exact halves rounded toward zero.
    ///
    /// The tie rule keeps Babai runs bit-reproducible across precision modes.
    pub fn round_ties_toward_zero(&self) -> Integer {
        match self {
            Real::Rat(a) => {
                let doubled = Rational::from(a * Rational::from(2));
                if doubled.is_integer() {
                    // exact half: truncate toward zero
                    Rational::from(a).trunc().numer().clone()
                } else {
                    let shifted = Rational::from(a + Rational::from((1, 2)));
                    shifted.floor().numer().clone()
                }
            }
            Real::Fp(a) => {
                let doubled = Float::with_val(a.prec(), a * 2);
                if doubled.is_integer() {
                    a.clone().trunc().to_integer().expect("finite float")
                } else {
                    let shifted = Float::with_val(a.prec(), a + 0.5f64);
                    shifted.floor().to_integer().expect("finite float")
                }
            }
        }
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<std::cmp::Ordering> {
        match (self, other) {
            (Real::Rat(a), Real::Rat(b)) => a.partial_cmp(b),
            (Real::Fp(a), Real::Fp(b)) => a.partial_cmp(b),
            _ => panic!("mixed precision modes"),
        }
    }
}

/// `q^(e/y)` at the given mantissa size.
pub fn q_pow(q: u64, exponent_num: f64, y: f64, prec: u32) -> Float {
    let base = Float::with_val(prec, q);
    let e = Float::with_val(prec, exponent_num / y);
    base.pow(e)
}

/// `floor(n * q^(1/y))`, with snapping when the product is within `2^-80`
/// of an integer.
///
/// Exponents like `1/y = 0.4` with `q` a power of two make `n * q^(1/y)`
/// an exact integer; a bare `floor` of the rounded transcendental
/// evaluation would then be off by one.
pub fn floor_n_q_pow(n: u64, q: u64, y: f64) -> Integer {
    let prec = DEFAULT_FLOAT_PRECISION;
    let t = Float::with_val(prec, q_pow(q, 1.0, y, prec) * n);
    snap_floor(&t)
}

/// Floor with snapping to the nearest integer within `2^-80`.
pub fn snap_floor(t: &Float) -> Integer {
    let prec = t.prec();
    let nearest = Float::with_val(prec, t.round_ref());
    let gap = Float::with_val(prec, t - &nearest).abs();
    let tol = Float::with_val(prec, Float::i_exp(1, -80));
    if gap < tol {
        nearest.to_integer().expect("finite float")
    } else {
        t.clone().floor().to_integer().expect("finite float")
    }
}
