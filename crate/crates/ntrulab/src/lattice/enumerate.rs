//! Exact SVP and CVP by depth-first enumeration at small rank.
//!
//! The basis is LLL-reduced first; the search then walks integer
//! coefficients level by level with the usual projection bounds, pruning
//! against the best distance seen so far. Partial sums run in f64 with a
//! small slack, but every surviving candidate is re-checked in exact
//! integer arithmetic, so the results are exact. Ties on the distance are
//! broken by lexicographic order of the coefficient vector with respect to
//! the *input* basis, which makes the output independent of enumeration
//! order.

use super::{
    babai_nearest_plane, diff_norm_sq_integer, gram_schmidt, lll_reduce_with_fallback,
    norm_sq_integer, LatticeBasis, LatticeError, ReductionParams,
};
use rug::{Integer, Rational};

/// Default cap on the rank accepted for enumeration.
pub const DEFAULT_ENUM_CAP: usize = 60;

/// Relative slack applied to the float pruning bound.
const PRUNE_SLACK: f64 = 1e-9;

/// A shortest nonzero vector and its exact squared norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestVector {
    pub vector: Vec<Integer>,
    pub norm_sq: Integer,
}

impl ShortestVector {
    /// The first successive minimum as a float.
    pub fn lambda1(&self) -> f64 {
        self.norm_sq.to_f64().sqrt()
    }
}

/// Exact shortest nonzero vector, default reduction parameters and cap.
pub fn svp_exact(basis: &LatticeBasis) -> Result<ShortestVector, LatticeError> {
    svp_exact_with(basis, &ReductionParams::default(), DEFAULT_ENUM_CAP)
}

pub fn svp_exact_with(
    basis: &LatticeBasis,
    params: &ReductionParams,
    cap: usize,
) -> Result<ShortestVector, LatticeError> {
    if basis.rank() > cap {
        return Err(LatticeError::RankTooLarge { rank: basis.rank(), cap });
    }
    let reduced = lll_reduce_with_fallback(basis, params)?;
    let mut search = Search::new(basis, &reduced, params, None)?;

    // the shortest reduced row is a certain upper bound
    let (best_row, best_norm) = (0..reduced.rank())
        .map(|i| (i, norm_sq_integer(reduced.row(i))))
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("nonempty basis");

    // Escalate the search radius from just under the expected length: an
    // empty ball proves the first minimum exceeds the radius, and the cost
    // of the whole ladder is dominated by the successful final run, which
    // stays exponentially cheaper than starting from the row bound.
    let n = reduced.rank() as f64;
    let ln_det2: f64 = search.norms.iter().map(|v| v.ln()).sum();
    let gh_sq = n / (2.0 * std::f64::consts::PI * std::f64::consts::E) * (ln_det2 / n).exp();
    let row_norm_f = best_norm.to_f64();
    let mut cap_sq = (gh_sq * 0.8).max(1.0);
    loop {
        if cap_sq >= row_norm_f {
            search.reset();
            search.best = Some(Candidate::new(reduced.row(best_row).to_vec(), best_norm, basis));
            search.run();
            break;
        }
        search.reset();
        search.radius_cap = Some(cap_sq);
        search.run();
        if search.best.is_some() {
            break;
        }
        cap_sq *= 1.3;
    }

    let best = search.best.take().expect("svp always has a candidate");
    Ok(ShortestVector { vector: best.vector, norm_sq: best.dist_sq })
}

/// Exact closest vector, default reduction parameters and cap.
pub fn cvp_exact(basis: &LatticeBasis, target: &[Integer]) -> Result<Vec<Integer>, LatticeError> {
    cvp_exact_with(basis, target, &ReductionParams::default(), DEFAULT_ENUM_CAP)
}

pub fn cvp_exact_with(
    basis: &LatticeBasis,
    target: &[Integer],
    params: &ReductionParams,
    cap: usize,
) -> Result<Vec<Integer>, LatticeError> {
    if basis.rank() > cap {
        return Err(LatticeError::RankTooLarge { rank: basis.rank(), cap });
    }
    if target.len() != basis.dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: basis.dim(),
            got: target.len(),
        });
    }
    let reduced = lll_reduce_with_fallback(basis, params)?;
    let mut search = Search::new(basis, &reduced, params, Some(target))?;

    // Babai gives the initial candidate and radius
    let gso = gram_schmidt(&reduced, params)?;
    let babai = babai_nearest_plane(&reduced, &gso, target)?;
    let babai_dist = diff_norm_sq_integer(&babai, target);
    search.best = Some(Candidate::new(babai, babai_dist, basis));
    search.run();

    Ok(search.best.expect("cvp always has a candidate").vector)
}

/// Every nonzero lattice vector `v` with `||v||^2 <= radius_sq`, together
/// with its exact squared norm. Pairs `v`/`-v` both appear.
pub fn enumerate_within_radius(
    basis: &LatticeBasis,
    radius_sq: &Integer,
    params: &ReductionParams,
    cap: usize,
) -> Result<Vec<(Vec<Integer>, Integer)>, LatticeError> {
    if basis.rank() > cap {
        return Err(LatticeError::RankTooLarge { rank: basis.rank(), cap });
    }
    let reduced = lll_reduce_with_fallback(basis, params)?;
    let mut search = Search::new(basis, &reduced, params, None)?;
    search.collect_radius_sq = Some(radius_sq.clone());
    // collection must visit both sign classes explicitly
    search.svp_symmetry = false;
    search.run();
    let mut out = search.collected;
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Exact coordinates of `v` in the given (full-rank, square) basis, when
/// `v` is a lattice member.
pub fn integer_coordinates(basis: &LatticeBasis, v: &[Integer]) -> Option<Vec<Integer>> {
    let coords = rational_coordinates(basis, v)?;
    let mut out = Vec::with_capacity(coords.len());
    for c in coords {
        if !c.is_integer() {
            return None;
        }
        out.push(c.numer().clone());
    }
    Some(out)
}

/// Solves `x * B = v` over the rationals by Gaussian elimination on the
/// transposed system. `None` when the basis is singular or `v` is outside
/// the row span.
pub fn rational_coordinates(basis: &LatticeBasis, v: &[Integer]) -> Option<Vec<Rational>> {
    let n = basis.rank();
    let m = basis.dim();
    if v.len() != m {
        return None;
    }
    // augmented columns: m equations (one per ambient coordinate), n unknowns
    let mut a: Vec<Vec<Rational>> = (0..m)
        .map(|col| {
            let mut row: Vec<Rational> =
                (0..n).map(|i| Rational::from(&basis.row(i)[col])).collect();
            row.push(Rational::from(&v[col]));
            row
        })
        .collect();

    let mut pivot_rows = Vec::with_capacity(n);
    let mut used = vec![false; m];
    for col in 0..n {
        let pivot = (0..m).find(|&r| !used[r] && a[r][col].cmp0() != std::cmp::Ordering::Equal)?;
        used[pivot] = true;
        pivot_rows.push(pivot);
        let inv = Rational::from(&a[pivot][col]);
        for r in 0..m {
            if r == pivot || a[r][col].cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            let factor = Rational::from(&a[r][col] / &inv);
            for c in col..=n {
                let sub = Rational::from(&factor * &a[pivot][c]);
                a[r][c] -= sub;
            }
        }
    }
    // consistency: non-pivot equations must have vanished
    for r in 0..m {
        if !used[r] && a[r][n].cmp0() != std::cmp::Ordering::Equal {
            return None;
        }
    }
    let mut coords = vec![Rational::new(); n];
    for (col, &pr) in pivot_rows.iter().enumerate() {
        coords[col] = Rational::from(&a[pr][n] / &a[pr][col]);
    }
    Some(coords)
}

struct Candidate {
    vector: Vec<Integer>,
    dist_sq: Integer,
    /// coordinates in the input basis, solved lazily for tie-breaks
    input_coords: Option<Vec<Integer>>,
}

impl Candidate {
    fn new(vector: Vec<Integer>, dist_sq: Integer, _input_basis: &LatticeBasis) -> Self {
        Candidate { vector, dist_sq, input_coords: None }
    }

    fn coords<'a>(&'a mut self, input_basis: &LatticeBasis) -> &'a [Integer] {
        if self.input_coords.is_none() {
            self.input_coords = Some(
                integer_coordinates(input_basis, &self.vector)
                    .expect("candidate is a lattice member"),
            );
        }
        self.input_coords.as_deref().unwrap()
    }
}

struct Search<'a> {
    input_basis: &'a LatticeBasis,
    reduced: &'a LatticeBasis,
    /// transposed projection coefficients: `mu_t[i][j] = mu[j][i]`, so the
    /// center loop walks a contiguous row
    mu_t: Vec<Vec<f64>>,
    norms: Vec<f64>,
    /// target coordinates in the reduced basis; zero for SVP
    x: Vec<f64>,
    target: Option<&'a [Integer]>,
    best: Option<Candidate>,
    /// float pruning bound; tracks the best distance, or the fixed
    /// collection radius
    radius_f: f64,
    /// optional ceiling on the squared search radius (radius escalation)
    radius_cap: Option<f64>,
    /// for SVP, also admit the negation of each candidate at tie-break
    /// time and skip the mirrored half of the tree
    svp_symmetry: bool,
    /// when set, collect everything within this exact radius instead of
    /// minimizing
    collect_radius_sq: Option<Integer>,
    collected: Vec<(Vec<Integer>, Integer)>,
    coeffs: Vec<i64>,
    partial: Vec<f64>,
    nodes: u64,
    leaves: u64,
}

impl<'a> Search<'a> {
    fn new(
        input_basis: &'a LatticeBasis,
        reduced: &'a LatticeBasis,
        params: &ReductionParams,
        target: Option<&'a [Integer]>,
    ) -> Result<Self, LatticeError> {
        let n = reduced.rank();
        let gso = gram_schmidt(reduced, params)?;
        let mu_t: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| gso.mu[j][i].to_f64()).collect()).collect();
        let norms: Vec<f64> = gso.norms_sq.iter().map(|v| v.to_f64()).collect();

        // GSO coordinates of the target, then basis coordinates by back
        // substitution through mu
        let x = match target {
            None => vec![0.0; n],
            Some(t) => {
                let mode = gso.mode();
                let mut y = Vec::with_capacity(n);
                for i in 0..n {
                    let mut dot = crate::real::Real::zero(mode);
                    for (tc, bc) in t.iter().zip(&gso.bstar[i]) {
                        dot = dot.add(&bc.mul_integer(tc));
                    }
                    y.push(dot.div(&gso.norms_sq[i]).to_f64());
                }
                let mut x = vec![0.0; n];
                for i in (0..n).rev() {
                    let mut v = y[i];
                    for j in i + 1..n {
                        v -= x[j] * mu_t[i][j];
                    }
                    x[i] = v;
                }
                x
            }
        };

        Ok(Search {
            input_basis,
            reduced,
            mu_t,
            norms,
            x,
            target,
            best: None,
            radius_f: f64::INFINITY,
            radius_cap: None,
            svp_symmetry: target.is_none(),
            collect_radius_sq: None,
            collected: Vec::new(),
            coeffs: vec![0; n],
            partial: vec![0.0; n + 1],
            nodes: 0,
            leaves: 0,
        })
    }

    fn refresh_radius(&mut self) {
        let mut r = match &self.collect_radius_sq {
            Some(r) => r.to_f64() * (1.0 + PRUNE_SLACK) + PRUNE_SLACK,
            None => match &self.best {
                Some(b) => b.dist_sq.to_f64() * (1.0 + PRUNE_SLACK) + PRUNE_SLACK,
                None => f64::INFINITY,
            },
        };
        if let Some(cap) = self.radius_cap {
            r = r.min(cap * (1.0 + PRUNE_SLACK) + PRUNE_SLACK);
        }
        self.radius_f = r;
    }

    fn reset(&mut self) {
        self.best = None;
        self.radius_cap = None;
        self.coeffs.iter_mut().for_each(|c| *c = 0);
        self.partial.iter_mut().for_each(|p| *p = 0.0);
    }

    fn run(&mut self) {
        let n = self.reduced.rank();
        self.refresh_radius();
        self.descend(n - 1, self.svp_symmetry);
    }

    /// `sym` is true while every coefficient above this level is zero in
    /// an SVP search. The zero prefix forces the interval center to 0, so
    /// restricting to nonnegative coefficients (the first nonzero one
    /// positive) halves the tree; negated candidates reappear at tie-break
    /// time in the leaves.
    fn descend(&mut self, level: usize, sym: bool) {
        self.nodes += 1;
        // center of the admissible interval at this level
        let mut center = self.x[level];
        let mu_row = &self.mu_t[level][level + 1..];
        let x_tail = &self.x[level + 1..];
        let c_tail = &self.coeffs[level + 1..];
        for ((xj, cj), mj) in x_tail.iter().zip(c_tail).zip(mu_row) {
            center += (xj - *cj as f64) * mj;
        }
        let base = self.partial[level + 1];
        let norm = self.norms[level];

        let visit = |search: &mut Self, candidate: i64, partial: f64| {
            search.coeffs[level] = candidate;
            search.partial[level] = partial;
            if level == 0 {
                search.take_leaf();
            } else {
                search.descend(level - 1, sym && candidate == 0);
            }
        };

        if sym {
            // zero prefix: center is exactly 0 and the partial cost is
            // monotone in the candidate, so walk 0, 1, 2, ... and stop at
            // the first miss
            let mut candidate = 0i64;
            loop {
                let diff = candidate as f64 - center;
                let partial = base + diff * diff * norm;
                if partial > self.radius_f {
                    break;
                }
                visit(self, candidate, partial);
                candidate += 1;
            }
        } else {
            // zig-zag outward from the rounded center; a (+k, -k) pair with
            // both sides outside the ball ends the level
            let start = center.round() as i64;
            let mut offset = 0i64;
            loop {
                let mut hi_out = false;
                let mut lo_out = offset == 0;
                let c_hi = start + offset;
                let diff = c_hi as f64 - center;
                let partial = base + diff * diff * norm;
                if partial <= self.radius_f {
                    visit(self, c_hi, partial);
                } else {
                    hi_out = true;
                }
                if offset > 0 {
                    let c_lo = start - offset;
                    let diff = c_lo as f64 - center;
                    let partial = base + diff * diff * norm;
                    if partial <= self.radius_f {
                        visit(self, c_lo, partial);
                    } else {
                        lo_out = true;
                    }
                }
                if hi_out && lo_out && offset > 0 {
                    break;
                }
                offset += 1;
            }
        }
        self.coeffs[level] = 0;
    }

    fn take_leaf(&mut self) {
        self.leaves += 1;
        if self.target.is_none() && self.coeffs.iter().all(|&c| c == 0) {
            return;
        }
        let coeffs: Vec<Integer> = self.coeffs.iter().map(|&c| Integer::from(c)).collect();
        let vector = self.reduced.combine(&coeffs);
        let dist_sq = match self.target {
            Some(t) => diff_norm_sq_integer(&vector, t),
            None => norm_sq_integer(&vector),
        };

        if let Some(radius) = &self.collect_radius_sq {
            if dist_sq <= *radius {
                if self.svp_symmetry {
                    let neg: Vec<Integer> = vector.iter().map(|v| Integer::from(-v)).collect();
                    self.collected.push((neg, dist_sq.clone()));
                }
                self.collected.push((vector, dist_sq));
            }
            return;
        }

        if self.svp_symmetry {
            // the mirrored half of the tree is skipped; the negation has
            // the same norm and matters only for tie-breaking
            let neg: Vec<Integer> = vector.iter().map(|v| Integer::from(-v)).collect();
            self.offer(vector, dist_sq.clone());
            self.offer(neg, dist_sq);
        } else {
            self.offer(vector, dist_sq);
        }
        self.refresh_radius();
    }

    fn offer(&mut self, vector: Vec<Integer>, dist_sq: Integer) {
        match &mut self.best {
            None => self.best = Some(Candidate::new(vector, dist_sq, self.input_basis)),
            Some(best) => {
                if dist_sq < best.dist_sq {
                    *best = Candidate::new(vector, dist_sq, self.input_basis);
                } else if dist_sq == best.dist_sq && vector != best.vector {
                    // exact tie: lexicographically smallest input-basis coords
                    let mut challenger = Candidate::new(vector, dist_sq, self.input_basis);
                    let a = challenger.coords(self.input_basis).to_vec();
                    let b = best.coords(self.input_basis);
                    if a.as_slice() < b {
                        *best = challenger;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn svp_on_identity_and_scaled_identity() {
        let sv = svp_exact(&LatticeBasis::identity(4)).unwrap();
        assert_eq!(sv.norm_sq, Integer::from(1));
        assert_eq!(sv.lambda1(), 1.0);
        let sv = svp_exact(&LatticeBasis::scaled_identity(4, 32)).unwrap();
        assert_eq!(sv.norm_sq, Integer::from(1024));
        assert_eq!(sv.lambda1(), 32.0);
    }

    #[test]
    fn svp_finds_hidden_short_vector() {
        // rows generate the same lattice as [[1,0],[0,5]]
        let basis = LatticeBasis::from_i64_rows(&[&[101, 5], &[100, 5]]);
        let sv = svp_exact(&basis).unwrap();
        assert_eq!(sv.norm_sq, Integer::from(1));
    }

    #[test]
    fn svp_rejects_large_rank() {
        let basis = LatticeBasis::identity(61);
        assert!(matches!(
            svp_exact(&basis),
            Err(LatticeError::RankTooLarge { rank: 61, cap: 60 })
        ));
    }

    #[test]
    fn cvp_returns_target_when_in_lattice() {
        let basis = LatticeBasis::from_i64_rows(&[&[2, 1], &[1, 4]]);
        let t = basis.combine(&ints(&[3, -2]));
        assert_eq!(cvp_exact(&basis, &t).unwrap(), t);
        // trivial integer lattice
        let z2 = LatticeBasis::identity(2);
        assert_eq!(cvp_exact(&z2, &ints(&[5, -2])).unwrap(), ints(&[5, -2]));
    }

    #[test]
    fn cvp_never_loses_to_babai() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(31);
        let params = ReductionParams::default();
        for _ in 0..20 {
            let n = rng.gen_range(2..5);
            let rows: Vec<Vec<Integer>> = (0..n)
                .map(|_| (0..n).map(|_| Integer::from(rng.gen_range(-15i64..15))).collect())
                .collect();
            let basis = match LatticeBasis::from_rows(rows) {
                Ok(b) if b.det_abs() != 0 => b,
                _ => continue,
            };
            let t: Vec<Integer> = (0..n).map(|_| Integer::from(rng.gen_range(-40i64..40))).collect();
            let reduced = lll_reduce_with_fallback(&basis, &params).unwrap();
            let gso = gram_schmidt(&reduced, &params).unwrap();
            let babai = babai_nearest_plane(&reduced, &gso, &t).unwrap();
            let exact = cvp_exact(&basis, &t).unwrap();
            assert!(
                diff_norm_sq_integer(&exact, &t) <= diff_norm_sq_integer(&babai, &t),
                "exact CVP must dominate the nearest-plane heuristic"
            );
        }
    }

    #[test]
    fn cvp_tie_break_is_lexicographic_in_input_coords() {
        // Z^2 scaled by 2: target (1,1) has four closest points; input
        // coordinates of (0,0) are lexicographically least among them
        let basis = LatticeBasis::from_i64_rows(&[&[2, 0], &[0, 2]]);
        let w = cvp_exact(&basis, &ints(&[1, 1])).unwrap();
        assert_eq!(w, ints(&[0, 0]));
        // coords of (0,0) are (0,0); (-2,0) would be (-1,0) < (0,0): check
        // distances first — (-2,0) is at distance sqrt(9+1), not a tie.
    }

    #[test]
    fn enumerate_within_radius_on_identity() {
        let basis = LatticeBasis::identity(3);
        let got = enumerate_within_radius(&basis, &Integer::from(1), &ReductionParams::default(), 60)
            .unwrap();
        // exactly the six signed unit vectors
        assert_eq!(got.len(), 6);
        for (v, nsq) in &got {
            assert_eq!(*nsq, Integer::from(1));
            assert_eq!(norm_sq_integer(v), Integer::from(1));
        }
    }

    #[test]
    fn integer_coordinates_solve_and_reject() {
        let basis = LatticeBasis::from_i64_rows(&[&[2, 1], &[1, 4]]);
        let v = basis.combine(&ints(&[-3, 5]));
        assert_eq!(integer_coordinates(&basis, &v).unwrap(), ints(&[-3, 5]));
        // (1, 0) is not in this lattice (det = 7)
        assert!(integer_coordinates(&basis, &ints(&[1, 0])).is_none());
    }
}
