//! Modular rank computations.
//!
//! Reductions mod random word-size primes give fast rank estimates for big
//! exact matrices.  Two facts drive how results are used elsewhere:
//!
//! * rank mod p never exceeds the exact rank, so a modular kernel dimension
//!   is always an upper bound for the exact kernel dimension — that
//!   direction is a certificate, not a guess;
//! * equality holds unless p divides a specific nonzero minor, so drawing
//!   primes uniformly from [2²⁰, 2³¹) makes disagreement vanishingly rare.
//!   The agreement protocol requires two distinct good primes to produce the
//!   same rank before reporting a probabilistic result.
//!
//! Gaussian-rational matrices are reduced at primes p ≡ 1 (mod 4), mapping
//! `i` to a residue r with r² ≡ -1 (mod p).

use crate::matrix::SparseMat;
use crate::scalar::{inv_mod, mul_mod, pow_mod, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic Miller–Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Draws random primes in [2²⁰, 2³¹); when `need_sqrt_m1` is set, only
/// primes ≡ 1 (mod 4) are produced, together with a square root of -1.
pub struct PrimeSampler {
    rng: ChaCha8Rng,
    need_sqrt_m1: bool,
}

impl PrimeSampler {
    pub fn new(seed: u64, need_sqrt_m1: bool) -> Self {
        PrimeSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            need_sqrt_m1,
        }
    }

    /// Next prime and (when requested) a residue r with r² ≡ -1 mod p.
    pub fn next_prime(&mut self) -> (u64, Option<u64>) {
        loop {
            let p = self.rng.gen_range(1u64 << 20..1u64 << 31) | 1;
            if !is_prime_u64(p) {
                continue;
            }
            if !self.need_sqrt_m1 {
                return (p, None);
            }
            if p % 4 != 1 {
                continue;
            }
            // For a quadratic nonresidue g, g^((p-1)/4) squares to -1.
            let r = 'found: {
                for _ in 0..256 {
                    let g = self.rng.gen_range(2..p);
                    let c = pow_mod(g, (p - 1) / 4, p);
                    if mul_mod(c, c, p) == p - 1 {
                        break 'found Some(c);
                    }
                }
                None
            };
            if let Some(r) = r {
                return (p, Some(r));
            }
        }
    }
}

/// Reduce a sparse exact matrix mod p.  `None` when any denominator dies.
pub fn reduce_mod_p<S: Scalar>(
    mat: &SparseMat<S>,
    p: u64,
    sqrt_m1: Option<u64>,
) -> Option<Vec<Vec<(u32, u64)>>> {
    let mut rows = Vec::with_capacity(mat.rows);
    for row in &mat.row_data {
        let mut out = Vec::with_capacity(row.len());
        for (c, v) in row {
            let r = v.mod_p(p, sqrt_m1)?;
            if r != 0 {
                out.push((*c, r));
            }
        }
        rows.push(out);
    }
    Some(rows)
}

/// Sparse elimination over F_p; standalone so the exact and modular paths
/// stay independent.  Pivot strategy mirrors the exact one (sparsest column,
/// then sparsest row).
pub fn rank_mod_p(cols: usize, mut rows: Vec<Vec<(u32, u64)>>, p: u64) -> usize {
    let mut active: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); cols];
    let mut col_count: Vec<u32> = vec![0; cols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c as usize].push(r as u32);
            col_count[*c as usize] += 1;
        }
    }
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..cols as u32)
        .filter(|&c| col_count[c as usize] > 0)
        .map(|c| Reverse((col_count[c as usize], c)))
        .collect();

    fn row_has(row: &[(u32, u64)], c: u32) -> bool {
        row.binary_search_by_key(&c, |(cc, _)| *cc).is_ok()
    }

    /// out = ra - f*rb (mod p), sorted merge.
    fn combine(ra: &[(u32, u64)], f: u64, rb: &[(u32, u64)], p: u64) -> Vec<(u32, u64)> {
        let mut out = Vec::with_capacity(ra.len() + rb.len());
        let (mut i, mut j) = (0, 0);
        while i < ra.len() || j < rb.len() {
            if j >= rb.len() || (i < ra.len() && ra[i].0 < rb[j].0) {
                out.push(ra[i].clone());
                i += 1;
            } else if i >= ra.len() || rb[j].0 < ra[i].0 {
                let v = p - mul_mod(f, rb[j].1, p);
                if v != p && v != 0 {
                    out.push((rb[j].0, v % p));
                }
                j += 1;
            } else {
                let v = (ra[i].1 + p - mul_mod(f, rb[j].1, p)) % p;
                if v != 0 {
                    out.push((ra[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    let mut rank = 0usize;
    while let Some(Reverse((cnt, c))) = heap.pop() {
        let ci = c as usize;
        if col_count[ci] == 0 {
            continue;
        }
        if cnt != col_count[ci] {
            heap.push(Reverse((col_count[ci], c)));
            continue;
        }
        col_rows[ci].sort_unstable();
        col_rows[ci].dedup();
        col_rows[ci].retain(|&r| active[r as usize] && row_has(&rows[r as usize], c));
        col_count[ci] = col_rows[ci].len() as u32;
        if col_rows[ci].is_empty() {
            continue;
        }
        let &pr = col_rows[ci]
            .iter()
            .min_by_key(|&&r| (rows[r as usize].len(), r))
            .unwrap();
        // Normalize the pivot row so its entry at c is 1.
        let mut pivot_row = std::mem::take(&mut rows[pr as usize]);
        active[pr as usize] = false;
        let pc = pivot_row
            .iter()
            .find(|(cc, _)| *cc == c)
            .map(|(_, v)| *v)
            .unwrap();
        let inv = inv_mod(pc, p);
        for (_, v) in pivot_row.iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let victims: Vec<u32> = col_rows[ci].iter().copied().filter(|&r| r != pr).collect();
        for r in victims {
            let ri = r as usize;
            let f = match rows[ri].binary_search_by_key(&c, |(cc, _)| *cc) {
                Ok(k) => rows[ri][k].1,
                Err(_) => continue,
            };
            for (cc, _) in &rows[ri] {
                col_count[*cc as usize] -= 1;
            }
            let new_row = combine(&rows[ri], f, &pivot_row, p);
            if new_row.is_empty() {
                active[ri] = false;
            }
            for (cc, _) in &new_row {
                let cci = *cc as usize;
                col_rows[cci].push(r);
                col_count[cci] += 1;
                if col_count[cci] == 1 {
                    heap.push(Reverse((1, *cc)));
                }
            }
            rows[ri] = new_row;
        }
        for (cc, _) in &pivot_row {
            if *cc != c {
                col_count[*cc as usize] -= 1;
            }
        }
        col_count[ci] = 0;
        rank += 1;
    }
    debug_assert!(col_count.iter().all(|&k| k == 0));
    rank
}

/// Modular rank of an exact matrix at one prime; `None` when the prime hits
/// a denominator.
pub fn modular_rank<S: Scalar>(mat: &SparseMat<S>, p: u64, sqrt_m1: Option<u64>) -> Option<usize> {
    let rows = reduce_mod_p(mat, p, sqrt_m1)?;
    Some(rank_mod_p(mat.cols, rows, p))
}

/// Result of the two-prime agreement protocol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularRank {
    pub rank: usize,
    pub primes: [u64; 2],
}

/// Compute ranks at random primes until two distinct good primes agree.
pub fn modular_rank_agreed<S: Scalar>(mat: &SparseMat<S>, seed: u64) -> ModularRank {
    let mut sampler = PrimeSampler::new(seed, S::needs_sqrt_m1());
    let mut seen: Option<(usize, u64)> = None;
    loop {
        let (p, sqrt_m1) = sampler.next_prime();
        if let Some((prev_rank, prev_p)) = seen {
            if prev_p == p {
                continue;
            }
            if let Some(rank) = modular_rank(mat, p, sqrt_m1) {
                if rank == prev_rank {
                    return ModularRank {
                        rank,
                        primes: [prev_p, p],
                    };
                }
                // Disagreement: the larger rank is closer to the exact one
                // (modular rank only ever undershoots); keep it and continue.
                seen = Some((rank.max(prev_rank), if rank > prev_rank { p } else { prev_p }));
            }
        } else if let Some(rank) = modular_rank(mat, p, sqrt_m1) {
            seen = Some((rank, p));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat;
    use crate::scalar::{GaussRat, Rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_test_agrees_with_trial_division() {
        let mut count = 0;
        for n in 2u64..2000 {
            let trial = (2..n).all(|d| n % d != 0);
            assert_eq!(is_prime_u64(n), trial, "n = {n}");
            if trial {
                count += 1;
            }
        }
        assert_eq!(count, 303); // π(2000)
    }

    #[test]
    fn sampler_produces_usable_primes() {
        let mut s = PrimeSampler::new(7, true);
        for _ in 0..5 {
            let (p, r) = s.next_prime();
            assert!(is_prime_u64(p));
            assert_eq!(p % 4, 1);
            let r = r.unwrap();
            assert_eq!(mul_mod(r, r, p), p - 1);
        }
        let mut s = PrimeSampler::new(7, false);
        let (p, r) = s.next_prime();
        assert!(is_prime_u64(p) && r.is_none());
        assert!(p >= (1 << 20) && p < (1 << 31));
    }

    #[test]
    fn modular_rank_matches_exact_rank_on_randoms() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..25 {
            let rows = rng.gen_range(1..14);
            let cols = rng.gen_range(1..14);
            let mut m = SparseMat::<Rat>::new(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.4) {
                        m.push(r, c, <Rat as Scalar>::from_ratio(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=5)));
                    }
                }
            }
            m.finalize();
            let exact = m.rank();
            let est = modular_rank_agreed(&m, 1234);
            assert_eq!(est.rank, exact);
            assert_ne!(est.primes[0], est.primes[1]);
        }
    }

    #[test]
    fn gauss_modular_rank() {
        // [[1, i], [i, -1]] has rank 1 over Q(i).
        let i = GaussRat::i();
        let m = Mat::<GaussRat>::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => Scalar::one(),
            (0, 1) | (1, 0) => i.clone(),
            _ => Scalar::from_i64(-1),
        });
        let sm = SparseMat::from_dense(&m);
        assert_eq!(modular_rank_agreed(&sm, 5).rank, 1);
    }
}
