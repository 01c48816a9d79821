//! NTRU-HPS: key generation, encryption, decryption, and nonce recovery.
//!
//! Parameters follow the original scheme: prime degree `N`, small prime `p`
//! (3 by default), `q` a power of two coprime to both, and ternary sample
//! spaces `L_f = T(d+1, d)`, `L_g = L_r = T(d, d)`. Decryption is correct
//! whenever every coefficient of `p*r*g + f*m` stays inside `(-q/2, q/2]`;
//! that bound is checked explicitly by callers instead of being assumed
//! from a closed-form inequality.

use crate::ring::{invert_poly_mod_prime, ConvPoly, RingError, TernarySpace};
use rand::Rng;
use rug::integer::IsPrime;
use rug::ops::RemRounding;
use rug::Integer;
use std::io::{BufRead, Write};
use thiserror::Error;

/// Retry budget for finding an invertible `f` during key generation.
pub const DEFAULT_KEYGEN_RETRIES: usize = 100;

#[derive(Debug, Error)]
pub enum NtruError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {0} must be a power of two, at least 4")]
    BadQ(u64),
    #[error("p = {p} and q = {q} must be coprime, as must N = {n} and q")]
    NotCoprime { n: u64, p: u64, q: u64 },
    #[error("weight parameter d = {d} does not satisfy 1 <= d and 2d+1 <= N = {n}")]
    BadWeight { d: usize, n: usize },
    #[error("no invertible f found after {attempts} attempts")]
    KeygenRetriesExhausted { attempts: usize },
    #[error("message coefficient at index {index} is outside [-(p-1)/2, (p-1)/2]")]
    MessageOutOfRange { index: usize },
    #[error("public key is not invertible mod q")]
    HNotInvertible,
    #[error("public key is not invertible in the quotient ring either")]
    QuotientNotInvertible,
    #[error("ring arithmetic: {0}")]
    Ring(#[from] RingError),
    #[error("malformed key/polynomial text: {0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Public parameters `(N, p, q, d)` plus the ternary sample spaces.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NtruParams {
    pub n: usize,
    pub p: u64,
    pub q: u64,
    pub d: usize,
    pub lf: TernarySpace,
    pub lg: TernarySpace,
    pub lr: TernarySpace,
    /// Sample `f = 1 + p*G` with `G` from `T(d, d)` instead of `T(d+1, d)`.
    pub f_one_plus_pg: bool,
}

impl NtruParams {
    /// Standard spaces: `L_f = T(d+1, d)`, `L_g = L_r = T(d, d)`.
    pub fn new(n: usize, p: u64, q: u64, d: usize) -> Result<Self, NtruError> {
        if d < 1 || 2 * d + 1 > n {
            return Err(NtruError::BadWeight { d, n });
        }
        let lf = TernarySpace::new(d + 1, d, n)?;
        let lg = TernarySpace::new(d, d, n)?;
        Self::with_spaces(n, p, q, d, lf, lg, lg)
    }

    pub fn with_spaces(
        n: usize,
        p: u64,
        q: u64,
        d: usize,
        lf: TernarySpace,
        lg: TernarySpace,
        lr: TernarySpace,
    ) -> Result<Self, NtruError> {
        if Integer::from(n).is_probably_prime(40) == IsPrime::No {
            return Err(NtruError::NotPrime(n as u64));
        }
        if Integer::from(p).is_probably_prime(40) == IsPrime::No {
            return Err(NtruError::NotPrime(p));
        }
        if q < 4 || !q.is_power_of_two() {
            return Err(NtruError::BadQ(q));
        }
        let gcd_nq = Integer::from(n).gcd(&Integer::from(q));
        let gcd_pq = Integer::from(p).gcd(&Integer::from(q));
        if gcd_nq != 1 || gcd_pq != 1 {
            return Err(NtruError::NotCoprime { n: n as u64, p, q });
        }
        if d < 1 || 2 * d + 1 > n {
            return Err(NtruError::BadWeight { d, n });
        }
        Ok(NtruParams { n, p, q, d, lf, lg, lr, f_one_plus_pg: false })
    }

    /// Largest allowed absolute value of a plaintext coefficient.
    pub fn plaintext_bound(&self) -> i64 {
        ((self.p - 1) / 2) as i64
    }
}

/// Private polynomials, their inverses, and the public key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    pub f: ConvPoly,
    pub g: ConvPoly,
    pub fp: ConvPoly,
    pub fq: ConvPoly,
    pub h: ConvPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub e: ConvPoly,
}

/// Samples keys until `f` is invertible mod `p` and mod `q`, then builds
/// `h = f_q * g mod q`.
pub fn keygen<R: Rng + ?Sized>(params: &NtruParams, rng: &mut R) -> Result<KeyPair, NtruError> {
    keygen_with_budget(params, rng, DEFAULT_KEYGEN_RETRIES)
}

pub fn keygen_with_budget<R: Rng + ?Sized>(
    params: &NtruParams,
    rng: &mut R,
    budget: usize,
) -> Result<KeyPair, NtruError> {
    for _ in 0..budget {
        let f = if params.f_one_plus_pg {
            let g_space = TernarySpace::new(params.d, params.d, params.n)?;
            ConvPoly::one(params.n).add(&g_space.sample(rng).scale(params.p as i64))
        } else {
            params.lf.sample(rng)
        };
        let fp = match f.invert_mod_prime(params.p) {
            Ok(fp) => fp,
            Err(RingError::NotInvertible) => continue,
            Err(e) => return Err(e.into()),
        };
        let fq = match f.invert_mod_prime_power(params.q) {
            Ok(fq) => fq,
            Err(RingError::NotInvertible) => continue,
            Err(e) => return Err(e.into()),
        };
        let g = params.lg.sample(rng);
        let h = fq.star_multiply(&g)?.reduce_mod(params.q);
        return Ok(KeyPair { f, g, fp, fq, h });
    }
    Err(NtruError::KeygenRetriesExhausted { attempts: budget })
}

/// `e = p*r*h + m mod q`. The message must be the centerlift of an `R_p`
/// element; the nonce is the caller's responsibility.
pub fn encrypt(
    h: &ConvPoly,
    m: &ConvPoly,
    r: &ConvPoly,
    params: &NtruParams,
) -> Result<Ciphertext, NtruError> {
    let bound = Integer::from(params.plaintext_bound());
    for (index, c) in m.coeffs().iter().enumerate() {
        if Integer::from(c.abs_ref()) > bound {
            return Err(NtruError::MessageOutOfRange { index });
        }
    }
    let rh = r.star_multiply(h)?;
    let e = rh.scale(params.p as i64).add(m).reduce_mod(params.q);
    Ok(Ciphertext { e })
}

/// Standard decryption: `a = f*e mod q`, centerlift, multiply by `f_p`
/// mod `p`, centerlift. Returns whatever comes out; when the coefficient
/// bound fails the result is simply a wrong message, not an error.
pub fn decrypt(e: &Ciphertext, kp: &KeyPair, params: &NtruParams) -> ConvPoly {
    let a = kp.f.star_multiply(&e.e).expect("degree fixed by params").reduce_mod(params.q);
    let a_lifted = a.centerlift(params.q);
    let b = kp.fp.star_multiply(&a_lifted).expect("degree fixed by params").reduce_mod(params.p);
    b.centerlift(params.p)
}

/// Whether every coefficient of `p*r*g + f*m` lies in `(-q/2, q/2]`, the
/// exact condition for `decrypt(encrypt(m))` to return `m`.
pub fn coefficient_bound_ok(
    kp: &KeyPair,
    m: &ConvPoly,
    r: &ConvPoly,
    params: &NtruParams,
) -> bool {
    let rg = r.star_multiply(&kp.g).expect("degree fixed by params").scale(params.p as i64);
    let fm = kp.f.star_multiply(m).expect("degree fixed by params");
    let v = rg.add(&fm);
    let q = Integer::from(params.q);
    v.coeffs().iter().all(|c| {
        let twice = Integer::from(2 * c);
        twice <= q && twice > -q.clone()
    })
}

/// Recovers the nonce from `e = p*r*h + m mod q` as
/// `r = p^-1 * (e - m) * h^-1 mod q`, centerlifted.
///
/// Requires `h` invertible in `R_q`; with the standard `L_g = T(d, d)` the
/// public key satisfies `h(1) = 0 mod q` and this fails — use
/// [`recover_nonce_via_quotient`] there.
pub fn recover_nonce(
    e: &Ciphertext,
    m: &ConvPoly,
    h: &ConvPoly,
    params: &NtruParams,
) -> Result<ConvPoly, NtruError> {
    let h_inv = match h.invert_mod_prime_power(params.q) {
        Ok(inv) => inv,
        Err(RingError::NotInvertible) => return Err(NtruError::HNotInvertible),
        Err(err) => return Err(err.into()),
    };
    let p_inv = Integer::from(params.p)
        .invert(&Integer::from(params.q))
        .expect("gcd(p, q) = 1 by construction");
    let p_inv = p_inv.to_i64().expect("q fits in u64");
    let diff = e.e.sub(m);
    let r = diff.star_multiply(&h_inv)?.scale(p_inv).reduce_mod(params.q);
    Ok(r.centerlift(params.q))
}

/// Nonce recovery that tolerates the standard non-invertible public key.
///
/// `x^N - 1 = (x - 1) * s(x)` with `s = 1 + x + ... + x^(N-1)`; the two
/// factors are coprime mod 2 for odd prime `N`. The public key is usually
/// invertible modulo `s`, which pins the nonce up to a multiple of `s`; the
/// known coefficient sum `d1 - d2` of the nonce space fixes that multiple.
pub fn recover_nonce_via_quotient(
    e: &Ciphertext,
    m: &ConvPoly,
    h: &ConvPoly,
    params: &NtruParams,
) -> Result<ConvPoly, NtruError> {
    let n = params.n;
    let q = params.q;
    let qz = Integer::from(q);
    let p_inv = Integer::from(params.p).invert(&qz).expect("gcd(p, q) = 1 by construction");
    let w = e.e.sub(m).reduce_mod(q);
    let w = ConvPoly::new(w.coeffs().iter().map(|c| (c * p_inv.clone()).rem_euc(&qz).into()).collect());

    // reduce a length-N vector modulo s(x): x^(N-1) = -(1 + x + ... + x^(N-2))
    let reduce_mod_s = |poly: &ConvPoly| -> Vec<Integer> {
        let top = poly.coeff(n - 1).clone();
        (0..n - 1).map(|i| Integer::from(poly.coeff(i) - &top)).collect()
    };

    // invert h in (Z/2)[x]/s, then Hensel-lift the inverse to mod q
    let two = Integer::from(2);
    let s_poly = vec![Integer::from(1); n]; // s(x) has N ones, degree N-1
    let h_mod_s: Vec<Integer> = reduce_mod_s(h).iter().map(|c| c.rem_euc(&two).into()).collect();
    let inv2 =
        invert_poly_mod_prime(&h_mod_s, &s_poly, &two).ok_or(NtruError::QuotientNotInvertible)?;

    let mut inv = pad(inv2, n - 1);
    let mut modulus = two.clone();
    let h_s = reduce_mod_s(h);
    while modulus < qz {
        modulus.square_mut();
        // inv <- inv * (2 - h*inv) in Z[x]/s, coefficients mod modulus
        let prod = mul_mod_s(&h_s, &inv, n - 1);
        let mut corr: Vec<Integer> = prod.iter().map(|c| Integer::from(-c)).collect();
        corr[0] += 2;
        inv = mul_mod_s(&inv, &corr, n - 1);
        for c in &mut inv {
            *c = Integer::from((&*c).rem_euc(&modulus));
        }
    }

    let w_s = reduce_mod_s(&w);
    let mut r_s = mul_mod_s(&w_s, &inv, n - 1);
    for c in &mut r_s {
        *c = Integer::from((&*c).rem_euc(&qz));
    }

    // lift back to length N and fix the multiple of s via the known
    // coefficient sum of the nonce space
    let target_sum = params.lr.d1 as i64 - params.lr.d2 as i64;
    let mut lifted: Vec<Integer> = r_s;
    lifted.push(Integer::new());
    let sum: Integer = lifted.iter().sum();
    let n_inv = Integer::from(n).invert(&qz).expect("gcd(N, q) = 1 by construction");
    let t: Integer = ((Integer::from(target_sum) - sum) * n_inv).rem_euc(&qz).into();
    for c in &mut lifted {
        *c = Integer::from(&*c + &t).rem_euc(&qz).into();
    }
    Ok(ConvPoly::new(lifted).centerlift(q))
}

fn pad(mut v: Vec<Integer>, len: usize) -> Vec<Integer> {
    v.resize(len, Integer::new());
    v
}

/// Product in `Z[x]/s(x)` where `s = 1 + x + ... + x^(deg)`; inputs and
/// output have `deg` coefficients.
fn mul_mod_s(a: &[Integer], b: &[Integer], deg: usize) -> Vec<Integer> {
    let mut wide = vec![Integer::new(); 2 * deg];
    for (i, ai) in a.iter().enumerate() {
        if ai.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            wide[i + j] += Integer::from(ai * bj);
        }
    }
    // x^deg = -(1 + x + ... + x^(deg-1)) mod s, applied from the top down
    for k in (deg..2 * deg).rev() {
        let c = std::mem::take(&mut wide[k]);
        if c.cmp0() == std::cmp::Ordering::Equal {
            continue;
        }
        for i in 0..deg {
            wide[k - deg + i] -= &c;
        }
    }
    wide.truncate(deg);
    wide
}

// -- text serialization: `N q` header, then one line per polynomial -- //

pub fn write_polys<W: Write>(
    w: &mut W,
    n: usize,
    q: u64,
    polys: &[&ConvPoly],
) -> std::io::Result<()> {
    writeln!(w, "{n} {q}")?;
    for p in polys {
        writeln!(w, "{p}")?;
    }
    Ok(())
}

pub fn read_polys<R: BufRead>(r: &mut R) -> Result<(usize, u64, Vec<ConvPoly>), NtruError> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| NtruError::Parse("missing ring degree in header".into()))?;
    let q: u64 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| NtruError::Parse("missing modulus in header".into()))?;
    if n == 0 {
        return Err(NtruError::Parse("ring degree must be positive".into()));
    }
    let mut polys = Vec::new();
    let mut line = String::new();
    loop {
        line.clear();
        if r.read_line(&mut line)? == 0 {
            break;
        }
        if line.trim().is_empty() {
            continue;
        }
        let coeffs: Result<Vec<Integer>, _> =
            line.split_whitespace().map(|t| t.parse::<Integer>()).collect();
        let coeffs = coeffs.map_err(|e| NtruError::Parse(format!("bad coefficient: {e}")))?;
        if coeffs.len() != n {
            return Err(NtruError::Parse(format!(
                "expected {n} coefficients per line, got {}",
                coeffs.len()
            )));
        }
        polys.push(ConvPoly::new(coeffs));
    }
    Ok((n, q, polys))
}

impl KeyPair {
    /// Five lines after the header: `f`, `g`, `fp`, `fq`, `h`.
    pub fn to_text(&self, params: &NtruParams) -> String {
        let mut out = Vec::new();
        write_polys(&mut out, params.n, params.q, &[&self.f, &self.g, &self.fp, &self.fq, &self.h])
            .expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("ascii output")
    }

    pub fn from_text(text: &str) -> Result<(usize, u64, KeyPair), NtruError> {
        let (n, q, mut polys) = read_polys(&mut text.as_bytes())?;
        if polys.len() != 5 {
            return Err(NtruError::Parse(format!("expected 5 polynomials, got {}", polys.len())));
        }
        let h = polys.pop().unwrap();
        let fq = polys.pop().unwrap();
        let fp = polys.pop().unwrap();
        let g = polys.pop().unwrap();
        let f = polys.pop().unwrap();
        Ok((n, q, KeyPair { f, g, fp, fq, h }))
    }
}

impl Ciphertext {
    pub fn to_text(&self, params: &NtruParams) -> String {
        let mut out = Vec::new();
        write_polys(&mut out, params.n, params.q, &[&self.e]).expect("Vec write");
        String::from_utf8(out).expect("ascii output")
    }

    pub fn from_text(text: &str) -> Result<(usize, u64, Ciphertext), NtruError> {
        let (n, q, mut polys) = read_polys(&mut text.as_bytes())?;
        if polys.len() != 1 {
            return Err(NtruError::Parse(format!("expected 1 polynomial, got {}", polys.len())));
        }
        Ok((n, q, Ciphertext { e: polys.pop().unwrap() }))
    }
}
