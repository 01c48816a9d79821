//! Acceptance suite: every release criterion as one test, each printing a
//! `[PASS]`/`[FAIL]` line with its measured numbers.
//!
//! The oracles here are deliberately independent of the code under test:
//! schoolbook polynomial products, rational Gaussian elimination written
//! in-place, and exhaustive box enumeration replace the production paths
//! they check.

use ntrulab::analysis;
use ntrulab::attack::{
    build_qary_basis, choose_a, compute_b, compute_c_ground_truth, dist_sq, oracle_e, run_attack,
    AStrategy, AttackConfig, SolutionVector,
};
use ntrulab::harness::{run_experiment, ExperimentSpec};
use ntrulab::lattice::{
    babai_nearest_plane, cvp_exact, gram_schmidt, lll_reduce, svp_exact, LatticeBasis,
    ReductionParams,
};
use ntrulab::ntru::{coefficient_bound_ok, encrypt, keygen, NtruParams};
use ntrulab::real::{PrecisionMode, Real};
use ntrulab::ring::{sample_uniform_centered, ConvPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::time::Instant;

fn ints(v: &[i64]) -> Vec<Integer> {
    v.iter().map(|&x| Integer::from(x)).collect()
}

fn norm_sq(v: &[Integer]) -> Integer {
    let mut s = Integer::new();
    for c in v {
        s += Integer::from(c * c);
    }
    s
}

/// q^(e/y) at 200 bits, for exact-side comparisons.
fn qpow(q: u64, e: f64, y: f64) -> Float {
    let base = Float::with_val(200, q);
    base.pow(Float::with_val(200, e / y))
}

// -- criterion 1: ring algebra at small degrees ---------------------------

#[test]
fn criterion_1_ring_algebra() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(0x01);
    let degrees = [3usize, 7, 11, 13];
    let mut checked = 0usize;

    // independent oracle: schoolbook product then fold exponents mod n
    let schoolbook = |a: &ConvPoly, b: &ConvPoly| {
        let n = a.n();
        let mut wide = vec![Integer::new(); 2 * n - 1];
        for i in 0..n {
            for j in 0..n {
                wide[i + j] += Integer::from(a.coeff(i) * b.coeff(j));
            }
        }
        let mut folded = vec![Integer::new(); n];
        for (j, c) in wide.into_iter().enumerate() {
            folded[j % n] += c;
        }
        ConvPoly::new(folded)
    };
    let mat_mul = |a: &Vec<Vec<Integer>>, b: &Vec<Vec<Integer>>| -> Vec<Vec<Integer>> {
        let n = a.len();
        let mut out = vec![vec![Integer::new(); n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i][j] += Integer::from(&a[i][k] * &b[k][j]);
                }
            }
        }
        out
    };

    for round in 0..1000 {
        let n = degrees[round % degrees.len()];
        let rand_poly = |rng: &mut ChaCha20Rng| {
            ConvPoly::new((0..n).map(|_| Integer::from(rng.gen_range(-1000i64..1000))).collect())
        };
        let a = rand_poly(&mut rng);
        let b = rand_poly(&mut rng);
        let c = rand_poly(&mut rng);

        // ring laws against the independent product
        let ab = a.star_multiply(&b).unwrap();
        assert_eq!(ab, schoolbook(&a, &b));
        assert_eq!(ab, b.star_multiply(&a).unwrap());
        let abc1 = ab.star_multiply(&c).unwrap();
        let abc2 = a.star_multiply(&b.star_multiply(&c).unwrap()).unwrap();
        assert_eq!(abc1, abc2);
        let dist = a.star_multiply(&b.add(&c)).unwrap();
        assert_eq!(dist, ab.add(&a.star_multiply(&c).unwrap()));

        // circulant identities: u * C(a) = u ⋆ a and C(a ⋆ b) = C(a) C(b)
        let circ = a.circulant();
        let mut u_row = vec![Integer::new(); n];
        for j in 0..n {
            for i in 0..n {
                u_row[j] += Integer::from(b.coeff(i) * &circ[i][j]);
            }
        }
        assert_eq!(ConvPoly::new(u_row), b.star_multiply(&a).unwrap());
        assert_eq!(ab.circulant(), mat_mul(&a.circulant(), &b.circulant()));

        // centerlift/mod round trips
        let q = [3u64, 8, 32, 256, 2048][round % 5];
        let lifted = a.reduce_mod(q).centerlift(q);
        assert_eq!(lifted.reduce_mod(q), a.reduce_mod(q));
        let qz = Integer::from(q);
        for coeff in lifted.coeffs() {
            let twice = Integer::from(2 * coeff);
            assert!(twice <= qz && twice > -qz.clone());
        }
        checked += 1;
    }

    let secs = t0.elapsed().as_secs_f64();
    assert_eq!(checked, 1000);
    assert!(secs < 10.0, "criterion 1 took {secs:.1}s, budget 10s");
    println!("[PASS] criterion 1: ring algebra, {checked} triples in {secs:.2}s");
}

// -- criterion 2: cryptosystem round trip ----------------------------------

#[test]
fn criterion_2_round_trip() {
    let t0 = Instant::now();
    let params = NtruParams::new(107, 3, 2048, 5).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(0x02);
    let mut bound_held = 0usize;
    for trial in 0..200 {
        let kp = keygen(&params, &mut rng).unwrap();
        let m = sample_uniform_centered(params.n, params.p, &mut rng);
        let r = params.lr.sample(&mut rng);
        let e = encrypt(&kp.h, &m, &r, &params).unwrap();
        let decrypted = ntrulab::ntru::decrypt(&e, &kp, &params);
        if coefficient_bound_ok(&kp, &m, &r, &params) {
            bound_held += 1;
            assert_eq!(decrypted, m, "trial {trial}: bound held but round trip failed");
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    assert_eq!(bound_held, 200, "the coefficient bound should hold in all 200 trials");
    assert!(secs < 60.0, "criterion 2 took {secs:.1}s, budget 60s");
    println!("[PASS] criterion 2: 200/200 round trips with the bound held, {secs:.2}s");
}

// -- criterion 3: lattice contracts ----------------------------------------

/// Exact-rational GSO, written independently of the production module.
fn rational_gso(basis: &LatticeBasis) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>, Vec<Rational>) {
    let n = basis.rank();
    let m = basis.dim();
    let mut bstar: Vec<Vec<Rational>> = Vec::new();
    let mut mu = vec![vec![Rational::new(); n]; n];
    let mut norms = Vec::new();
    for i in 0..n {
        let mut v: Vec<Rational> = basis.row(i).iter().map(Rational::from).collect();
        for j in 0..i {
            let mut dot = Rational::new();
            for k in 0..m {
                dot += Rational::from(&basis.row(i)[k]) * &bstar[j][k];
            }
            let coeff = dot / &norms[j];
            for k in 0..m {
                let sub = Rational::from(&coeff * &bstar[j][k]);
                v[k] -= sub;
            }
            mu[i][j] = coeff;
        }
        let mut nsq = Rational::new();
        for k in 0..m {
            nsq += Rational::from(&v[k] * &v[k]);
        }
        norms.push(nsq);
        bstar.push(v);
    }
    (bstar, mu, norms)
}

/// Solves x * B = v over the rationals; `None` if insoluble.
fn rational_solve(basis: &LatticeBasis, v: &[Integer]) -> Option<Vec<Rational>> {
    let n = basis.rank();
    let m = basis.dim();
    let mut aug: Vec<Vec<Rational>> = (0..m)
        .map(|col| {
            let mut row: Vec<Rational> =
                (0..n).map(|i| Rational::from(&basis.row(i)[col])).collect();
            row.push(Rational::from(&v[col]));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut used = vec![false; m];
    for col in 0..n {
        let p = (0..m).find(|&r| !used[r] && aug[r][col].cmp0() != std::cmp::Ordering::Equal)?;
        used[p] = true;
        pivots.push(p);
        for r in 0..m {
            if r == p || aug[r][col].cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let factor = Rational::from(&aug[r][col] / &aug[p][col]);
            for c in col..=n {
                let sub = Rational::from(&factor * &aug[p][c]);
                aug[r][c] -= sub;
            }
        }
    }
    for r in 0..m {
        if !used[r] && aug[r][n].cmp0() != std::cmp::Ordering::Equal {
            return None;
        }
    }
    Some((0..n).map(|col| Rational::from(&aug[pivots[col]][n] / &aug[pivots[col]][col])).collect())
}

fn integral(coords: &[Rational]) -> bool {
    coords.iter().all(|c| c.is_integer())
}

#[test]
fn criterion_3_lattice_contracts() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(0x03);
    let red = ReductionParams::default();
    let half = Rational::from((1, 2));
    let delta = Rational::from((99, 100));

    for case in 0..100 {
        let n = [3usize, 5, 7, 11, 13, 17, 20][case % 7];
        let q = [16u64, 32, 128, 512, 2048][case % 5];
        let a = ConvPoly::new((0..n).map(|_| Integer::from(rng.gen_range(0..q))).collect());
        let basis = build_qary_basis(&a, q);
        let reduced = lll_reduce(&basis, &red).unwrap();

        // |det| = q^N, exactly, before and after
        let want_det = Integer::from(q).pow(n as u32);
        assert_eq!(basis.det_abs(), want_det);
        assert_eq!(reduced.det_abs(), want_det, "case {case}: determinant changed");

        // size reduction and Lovász, recomputed from scratch in exact
        // rational arithmetic
        let (_, mu, norms) = rational_gso(&reduced);
        for i in 0..reduced.rank() {
            for j in 0..i {
                assert!(
                    Rational::from(mu[i][j].abs_ref()) <= half,
                    "case {case}: |mu[{i}][{j}]| > 1/2"
                );
            }
        }
        for i in 1..reduced.rank() {
            let lhs = Rational::from(&norms[i])
                + Rational::from(&mu[i][i - 1] * &mu[i][i - 1]) * &norms[i - 1];
            assert!(
                lhs >= Rational::from(&delta * &norms[i - 1]),
                "case {case}: Lovász fails at row {i}"
            );
        }

        // unimodular same-lattice: each direction solves integrally
        for row in reduced.rows() {
            let coords = rational_solve(&basis, row).expect("solvable");
            assert!(integral(&coords), "case {case}: reduced row outside input lattice");
        }
        for row in basis.rows() {
            let coords = rational_solve(&reduced, row).expect("solvable");
            assert!(integral(&coords), "case {case}: input row outside reduced lattice");
        }

        // Babai always returns a member within the nearest-plane bound
        let gso = gram_schmidt(&reduced, &red).unwrap();
        let target: Vec<Integer> =
            (0..2 * n).map(|_| Integer::from(rng.gen_range(-(q as i64)..q as i64))).collect();
        let w = babai_nearest_plane(&reduced, &gso, &target).unwrap();
        let coords = rational_solve(&reduced, &w).expect("solvable");
        assert!(integral(&coords), "case {case}: Babai output not in the lattice");
        let dist = Rational::from(&dist_sq(&w, &target));
        let mut bound = Rational::new();
        for nrm in &norms {
            bound += nrm;
        }
        bound /= 4u32;
        assert!(dist <= bound, "case {case}: nearest-plane bound violated");
    }

    let secs = t0.elapsed().as_secs_f64();
    assert!(secs < 300.0, "criterion 3 took {secs:.1}s, budget 5 min");
    println!("[PASS] criterion 3: 100 lattice contracts in {secs:.1}s");
}

// -- criterion 4: exact solvers vs brute force ------------------------------

struct BruteBox {
    svp_vector: Vec<Integer>,
    svp_norm_sq: Integer,
    cvp_vector: Vec<Integer>,
}

/// Exhaustive enumeration over a provably sufficient coefficient box.
///
/// For any lattice vector `v = x * B` with `||v|| <= rho`, each coefficient
/// obeys `|x_i| <= rho * ||column i of B^-1||`, so a box of that size
/// certainly contains the optimum. Ties break on lexicographically smaller
/// coefficient vectors, mirroring the documented contract.
fn brute_force(basis: &LatticeBasis, target: &[Integer]) -> Option<BruteBox> {
    let n = basis.rank();
    // rational inverse column norms via solves of B^T x = e_i
    let mut col_norm_sq = Vec::with_capacity(n);
    let mut center = vec![Rational::new(); n];
    {
        // coordinates of the target
        let coords = rational_solve(basis, target)?;
        center.clone_from_slice(&coords);
    }
    for i in 0..n {
        // column i of B^-1 = coordinates of e_i
        let mut e = vec![Integer::new(); basis.dim()];
        e[i] = Integer::from(1);
        // x * B = e_i has a rational solution only for square bases; our
        // test bases are square and invertible
        let coords = rational_solve(basis, &e)?;
        let mut nsq = Rational::new();
        for c in &coords {
            nsq += Rational::from(c * c);
        }
        col_norm_sq.push(nsq);
    }

    // initial SVP bound: the shortest basis row. initial CVP bound: the
    // distance from rounding the rational coordinates.
    let svp_rho_sq =
        (0..n).map(|i| norm_sq(basis.row(i))).min().expect("rows");
    let rounded: Vec<Integer> = center
        .iter()
        .map(|c| {
            let num = c.numer().clone();
            let den = c.denom().clone();
            let (q2, r2) = (Integer::from(2 * &num)).div_rem_euc(Integer::from(2 * &den));
            let _ = r2;
            q2
        })
        .collect();
    let v0 = basis.combine(&rounded);
    let cvp_rho_sq = dist_sq(&v0, target);

    // box sizes; bail out if the search space explodes
    let mut svp_bounds = Vec::with_capacity(n);
    let mut cvp_lo = Vec::with_capacity(n);
    let mut cvp_hi = Vec::with_capacity(n);
    let mut space = 1u128;
    for i in 0..n {
        let b_svp = isqrt_ceil(&(Integer::from(&svp_rho_sq) * col_norm_sq[i].clone()));
        let b_cvp = isqrt_ceil(&(Integer::from(&cvp_rho_sq) * col_norm_sq[i].clone()));
        let c_lo = floor_rational(&center[i]) - &b_cvp;
        let c_hi = ceil_rational(&center[i]) + &b_cvp;
        let width_svp = 2 * b_svp.to_u128().unwrap_or(u128::MAX / 4) + 1;
        let width_cvp = (Integer::from(&c_hi - &c_lo) + 1u32).to_u128().unwrap_or(u128::MAX / 4);
        space = space.saturating_mul(width_svp.max(width_cvp));
        svp_bounds.push(b_svp);
        cvp_lo.push(c_lo);
        cvp_hi.push(c_hi);
    }
    if space > 3_000_000 {
        return None;
    }

    // SVP sweep
    let mut best_svp: Option<(Integer, Vec<Integer>, Vec<Integer>)> = None;
    let mut coeffs: Vec<Integer> = svp_bounds.iter().map(|b| Integer::from(-b)).collect();
    loop {
        if coeffs.iter().any(|c| c.cmp0() != std::cmp::Ordering::Equal) {
            let v = basis.combine(&coeffs);
            let nsq = norm_sq(&v);
            if nsq <= svp_rho_sq {
                let better = match &best_svp {
                    None => true,
                    Some((bn, bc, _)) => nsq < *bn || (nsq == *bn && coeffs < *bc),
                };
                if better {
                    best_svp = Some((nsq, coeffs.clone(), v));
                }
            }
        }
        if !odometer(&mut coeffs, &svp_bounds) {
            break;
        }
    }

    // CVP sweep
    let mut best_cvp: Option<(Integer, Vec<Integer>, Vec<Integer>)> = None;
    let mut coeffs = cvp_lo.clone();
    loop {
        let v = basis.combine(&coeffs);
        let d = dist_sq(&v, target);
        let better = match &best_cvp {
            None => true,
            Some((bd, bc, _)) => d < *bd || (d == *bd && coeffs < *bc),
        };
        if better {
            best_cvp = Some((d, coeffs.clone(), v));
        }
        if !odometer_range(&mut coeffs, &cvp_lo, &cvp_hi) {
            break;
        }
    }

    let (svp_norm_sq, _, svp_vector) = best_svp?;
    let (_, _, cvp_vector) = best_cvp?;
    Some(BruteBox { svp_vector, svp_norm_sq, cvp_vector })
}

fn isqrt_ceil(x: &Integer) -> Integer {
    let r = x.clone().sqrt();
    if Integer::from(&r * &r) < *x {
        r + 1u32
    } else {
        r
    }
}

fn floor_rational(r: &Rational) -> Integer {
    r.clone().floor().numer().clone()
}

fn ceil_rational(r: &Rational) -> Integer {
    r.clone().ceil().numer().clone()
}

fn odometer(coeffs: &mut [Integer], bounds: &[Integer]) -> bool {
    for i in 0..coeffs.len() {
        if coeffs[i] < bounds[i] {
            coeffs[i] += 1;
            return true;
        }
        coeffs[i] = Integer::from(-&bounds[i]);
    }
    false
}

fn odometer_range(coeffs: &mut [Integer], lo: &[Integer], hi: &[Integer]) -> bool {
    for i in 0..coeffs.len() {
        if coeffs[i] < hi[i] {
            coeffs[i] += 1;
            return true;
        }
        coeffs[i] = lo[i].clone();
    }
    false
}

#[test]
fn criterion_4_exact_solvers_match_brute_force() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(0x04);
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < 50 {
        attempts += 1;
        assert!(attempts < 500, "too many degenerate bases drawn");
        // alternate small dense bases and tiny q-ary blocks, rank <= 12
        let basis = if done % 2 == 0 {
            let n = rng.gen_range(2..5);
            let rows: Vec<Vec<Integer>> = (0..n)
                .map(|_| (0..n).map(|_| Integer::from(rng.gen_range(-3i64..=3))).collect())
                .collect();
            match LatticeBasis::from_rows(rows) {
                Ok(b) if b.det_abs() != 0 => b,
                _ => continue,
            }
        } else {
            let n = rng.gen_range(3..=6);
            let q = [4u64, 8][rng.gen_range(0..2)];
            let a = ConvPoly::new((0..n).map(|_| Integer::from(rng.gen_range(0..2))).collect());
            build_qary_basis(&a, q)
        };
        let target: Vec<Integer> =
            (0..basis.dim()).map(|_| Integer::from(rng.gen_range(-6i64..=6))).collect();

        let brute = match brute_force(&basis, &target) {
            Some(b) => b,
            None => continue, // box too large; draw another instance
        };

        let sv = svp_exact(&basis).unwrap();
        assert_eq!(
            sv.norm_sq, brute.svp_norm_sq,
            "case {done}: svp norm mismatch ({:?})",
            basis
        );
        assert_eq!(norm_sq(&sv.vector), sv.norm_sq);

        let w = cvp_exact(&basis, &target).unwrap();
        assert_eq!(w, brute.cvp_vector, "case {done}: cvp vector mismatch");
        let _ = brute.svp_vector;
        done += 1;
    }
    let secs = t0.elapsed().as_secs_f64();
    println!("[PASS] criterion 4: 50 brute-force cross-checks, zero mismatches, {secs:.1}s");
}

// -- criterion 5: exact-CVP attack completeness -----------------------------

#[test]
fn criterion_5_exact_recovery_under_certificates() {
    let t0 = Instant::now();
    let red = ReductionParams::default();
    let q = 128u64;
    let y = 3.0f64;
    let q_2y = qpow(q, 2.0, y); // q^(2/y)

    let mut certified = 0usize;
    let mut recovered = 0usize;

    for &n in &[5usize, 7] {
        let params = NtruParams::new(n, 3, q, 2).unwrap();
        // fix a multiplier whose lattice certifiably has lambda1 > q^(1/y)
        let mut a_seed = 0u64;
        let (a, lambda1_sq) = loop {
            let mut rng = ChaCha20Rng::seed_from_u64(a_seed);
            let a = choose_a(AStrategy::Binary01, n, q, y, &mut rng);
            let sv = svp_exact(&build_qary_basis(&a, q)).unwrap();
            if Float::with_val(200, &sv.norm_sq) > q_2y {
                break (a, sv.norm_sq);
            }
            a_seed += 1;
            assert!(a_seed < 50, "no certifiable multiplier found at N={n}");
        };
        assert!(Float::with_val(200, &lambda1_sq) > q_2y);

        let mut rng = ChaCha20Rng::seed_from_u64(0x05 + n as u64);
        for trial in 0..400 {
            let kp = keygen(&params, &mut rng).unwrap();
            let m = sample_uniform_centered(params.n, params.p, &mut rng);
            let r = params.lr.sample(&mut rng);
            let e = encrypt(&kp.h, &m, &r, &params).unwrap();
            let c = compute_c_ground_truth(&a, &r, &kp.h, params.p, params.q).unwrap();
            let r_radius = (trial % 2) as u64; // R in {0, 1}
            let e_vec = oracle_e(&c, r_radius, None, &mut rng).unwrap();

            // certificate: 4 * ||V - E||^2 < q^(2/y), exact vs 200-bit
            let v = SolutionVector::from_halves(&m, &c);
            let err = dist_sq(&v.entries, &e_vec.entries);
            if Float::with_val(200, 4 * &err) >= q_2y {
                continue;
            }
            certified += 1;

            let cfg = AttackConfig { a_strategy: AStrategy::Binary01, ..AttackConfig::new(y, r_radius) };
            let got = run_attack(&e, &cfg, &a, &e_vec, &params, None, &red).unwrap();
            assert_eq!(got, m, "N={n} trial {trial}: certified instance must recover exactly");
            recovered += 1;
        }
    }

    let secs = t0.elapsed().as_secs_f64();
    assert!(certified >= 500, "only {certified} certified trials (need 500)");
    assert_eq!(recovered, certified);
    println!(
        "[PASS] criterion 5: {recovered}/{certified} certified instances recovered exactly, {secs:.1}s"
    );
}

// -- criterion 6: desk-scale threshold behavior -----------------------------

#[test]
fn criterion_6_desk_scale_threshold() {
    let t0 = Instant::now();
    let cache = tempfile::tempdir().unwrap();
    let trials = 20usize;
    let mut rates: Vec<(u64, f64)> = Vec::new();
    let mut lll_runs = 0usize;

    let run_r = |r: u64, lll_runs: &mut usize| -> f64 {
        let spec = ExperimentSpec {
            params: NtruParams::new(61, 3, 256, 18).unwrap(),
            attack: AttackConfig::new(2.3, r),
            trials,
            seed: 0x06,
        };
        let report = run_experiment(&spec, Some(cache.path())).unwrap();
        if !report.basis_cache_hit {
            *lll_runs += 1;
        }
        eprintln!(
            "  R={r}: rate {:.2} ({} successes, lll {:.1}s)",
            report.success_rate, report.successes, report.lll_seconds
        );
        report.success_rate
    };

    let mut r = 0u64;
    let mut threshold: Option<u64> = None;
    while r <= 30 {
        let rate = run_r(r, &mut lll_runs);
        rates.push((r, rate));
        if r == 0 {
            assert_eq!(rate, 1.0, "R = 0 must succeed in every trial");
        }
        // look for R* with rate >= 0.5 and rate(R*+2) < 0.5
        if threshold.is_none() {
            for &(r_star, rate_star) in &rates {
                if rate_star < 0.5 {
                    continue;
                }
                if let Some(&(_, later)) = rates.iter().find(|(rr, _)| *rr == r_star + 2) {
                    if later < 0.5 {
                        threshold = Some(r_star);
                        break;
                    }
                }
            }
        }
        if threshold.is_some() {
            break;
        }
        r += 1;
    }

    let secs = t0.elapsed().as_secs_f64();
    assert_eq!(lll_runs, 1, "exactly one reduction must serve the whole sweep");
    let r_star = threshold.expect("no success threshold found up to R = 30");
    assert!(secs < 1800.0, "criterion 6 took {secs:.0}s, budget 30 min");
    println!(
        "[PASS] criterion 6: rate 1.0 at R=0, threshold R*={r_star} \
         (rate >= 0.5, rate at R*+2 < 0.5), one LLL, {secs:.0}s"
    );
}

// -- criterion 7: parameter checker conformance -----------------------------

#[test]
fn criterion_7_check_params_conformance() {
    let t0 = Instant::now();

    // the failing heuristic at the full-scale parameters
    let report = analysis::check_params(509, 2048, 2.5, Some(26), 7);
    assert_eq!(report.heuristic_ok, Some(false));
    assert_eq!(report.y_bound_ok, Some(false));
    assert_eq!(report.lambda1_ok, None, "rank 1018 is beyond exact SVP");

    // the four reference tuples run exact SVP and flag the heuristic
    // discrepancy
    for (n, q, y) in analysis::REFERENCE_EXACT_TUPLES {
        let report = analysis::check_params(n, q, y, None, 7);
        let lambda1 = report.lambda1.expect("exact SVP must run at this rank");
        assert!(lambda1 > 0.0);
        assert!(report.lambda1_ok.is_some(), "exact bound must be decided");
        assert_eq!(
            report.heuristic_ok,
            Some(false),
            "(N,q,y)=({n},{q},{y}): the rounded heuristic evaluates false here"
        );
        assert!(
            report.notes.iter().any(|s| s.contains("reference runs")),
            "the disagreement with the reference claim must be flagged"
        );
        eprintln!("  ({n}, {q}, {y}): lambda1 = {lambda1:.3}, exact ok = {:?}", report.lambda1_ok);
    }

    let secs = t0.elapsed().as_secs_f64();
    assert!(secs < 300.0, "criterion 7 took {secs:.0}s, budget 5 min");
    println!("[PASS] criterion 7: checker conformance on reference tuples, {secs:.0}s");
}

// -- criterion 8: determinism ----------------------------------------------

#[test]
fn criterion_8_byte_identical_reports() {
    let t0 = Instant::now();
    let cache = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec {
        params: NtruParams::new(31, 3, 128, 3).unwrap(),
        attack: AttackConfig { max_oracle_calls: 10, ..AttackConfig::new(2.5, 2) },
        trials: 3,
        seed: 0x08,
    };
    // warm the cache, then compare two identical reruns byte for byte
    let _ = run_experiment(&spec, Some(cache.path())).unwrap();
    let a = run_experiment(&spec, Some(cache.path())).unwrap().to_json();
    let b = run_experiment(&spec, Some(cache.path())).unwrap().to_json();
    assert_eq!(a, b, "reports must be byte-identical under one master seed");

    let mut other = spec.clone();
    other.seed = 0x09;
    let c = run_experiment(&other, Some(cache.path())).unwrap().to_json();
    assert_ne!(a, c, "different seeds must give different reports");

    let secs = t0.elapsed().as_secs_f64();
    println!("[PASS] criterion 8: byte-identical reports on rerun, {secs:.1}s");
}
