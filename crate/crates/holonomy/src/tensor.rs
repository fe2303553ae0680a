//! Tensor space indexing and structure operators.
//!
//! Conventions used across the crate:
//!
//! * Flat indices of product spaces are row-major lexicographic: an index
//!   tuple (i₁, …, i_k) over dims (d₁, …, d_k) flattens to
//!   `((i₁·d₂ + i₂)·d₃ + …)`.
//! * Λ^k bases are strictly increasing index tuples in lexicographic order;
//!   ⊙^k bases are non-decreasing tuples in lexicographic order.
//! * Embeddings of Λ^k and ⊙^k into ⊗^k use integer coefficients (±1 and 1;
//!   no 1/k! normalizations), and the projections pick the coefficient at the
//!   canonical tuple, so project ∘ embed = identity exactly.
//! * Realification sends ℂⁿ to ℝ²ⁿ with basis (e₁…e_n, ie₁…ie_n); the
//!   complex structure is J = [[0, -I], [I, 0]] and a complex matrix X + iY
//!   becomes [[X, -Y], [Y, X]].
//! * Quaternionic ℍⁿ is ℝ⁴ⁿ with blocks (1, i, j, k); the quaternion triple
//!   consists of the right multiplications J₁ = R_i, J₂ = R_j and J₃ = J₁J₂,
//!   which satisfy J_αJ_β = -δ_{αβ}·Id + ε_{αβγ}J_γ.

use crate::matrix::{Mat, SparseMat};
use crate::scalar::{GaussRat, Rat, Scalar};
use std::collections::{BTreeMap, HashMap};

/// Strictly increasing k-tuples over 0..n, lexicographic.
pub fn combos(n: usize, k: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur: Vec<u16> = (0..k as u16).collect();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n - k + i) as u16 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Non-decreasing k-tuples over 0..n, lexicographic.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur = vec![0u16; k];
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n - 1) as u16 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[i];
                }
                break;
            }
        }
    }
}

/// Index table for Λ^k(F^n): tuple ↔ position, with sign lookups for
/// arbitrary (distinct-entry) tuples.
pub struct AltIndex {
    pub n: usize,
    pub k: usize,
    pub tuples: Vec<Vec<u16>>,
    lookup: HashMap<Vec<u16>, u32>,
}

impl AltIndex {
    pub fn new(n: usize, k: usize) -> Self {
        let tuples = combos(n, k);
        let lookup = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        AltIndex {
            n,
            k,
            tuples,
            lookup,
        }
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn pos(&self, sorted: &[u16]) -> u32 {
        self.lookup[sorted]
    }

    /// Position and permutation sign of an arbitrary tuple; `None` when two
    /// entries coincide.
    pub fn pos_signed(&self, tuple: &[u16]) -> Option<(u32, i64)> {
        let mut t = tuple.to_vec();
        let mut sign = 1i64;
        // Insertion sort, counting swaps.
        for i in 1..t.len() {
            let mut j = i;
            while j > 0 && t[j - 1] > t[j] {
                t.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        for w in t.windows(2) {
            if w[0] == w[1] {
                return None;
            }
        }
        Some((self.pos(&t), sign))
    }
}

/// Index table for ⊙^k(F^n).
pub struct SymIndex {
    pub n: usize,
    pub k: usize,
    pub tuples: Vec<Vec<u16>>,
    lookup: HashMap<Vec<u16>, u32>,
}

impl SymIndex {
    pub fn new(n: usize, k: usize) -> Self {
        let tuples = multisets(n, k);
        let lookup = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        SymIndex {
            n,
            k,
            tuples,
            lookup,
        }
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn pos(&self, tuple: &[u16]) -> u32 {
        let mut t = tuple.to_vec();
        t.sort_unstable();
        self.lookup[&t]
    }
}

/// Flat row-major index over mixed dims.
pub fn flat(dims: &[usize], idx: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), idx.len());
    let mut acc = 0usize;
    for (d, i) in dims.iter().zip(idx) {
        debug_assert!(i < d);
        acc = acc * d + i;
    }
    acc
}

/// Inverse of [`flat`].
pub fn unflat(dims: &[usize], mut pos: usize) -> Vec<usize> {
    let mut out = vec![0usize; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = pos % dims[k];
        pos /= dims[k];
    }
    out
}

/// Λ^k(F^n) → ⊗^k(F^n), integer coefficients ±1.
pub fn alt_embed<S: Scalar>(n: usize, k: usize) -> SparseMat<S> {
    let alt = AltIndex::new(n, k);
    let dims = vec![n; k];
    let rows = n.pow(k as u32);
    let mut m = SparseMat::new(rows, alt.dim());
    for (col, tuple) in alt.tuples.iter().enumerate() {
        // All permutations with signs.
        let mut perm: Vec<usize> = (0..k).collect();
        permute_with_signs(&mut perm, &mut |p, sign| {
            let idx: Vec<usize> = p.iter().map(|&j| tuple[j] as usize).collect();
            m.push(flat(&dims, &idx), col, S::from_i64(sign));
        });
    }
    m.finalize();
    m
}

/// ⊗^k(F^n) → Λ^k(F^n): coefficient at the increasing tuple.
pub fn alt_project<S: Scalar>(n: usize, k: usize) -> SparseMat<S> {
    let alt = AltIndex::new(n, k);
    let dims = vec![n; k];
    let mut m = SparseMat::new(alt.dim(), n.pow(k as u32));
    for (row, tuple) in alt.tuples.iter().enumerate() {
        let idx: Vec<usize> = tuple.iter().map(|&j| j as usize).collect();
        m.push(row, flat(&dims, &idx), S::one());
    }
    m.finalize();
    m
}

/// ⊙^k(F^n) → ⊗^k(F^n): coefficient 1 at every permutation of the tuple.
pub fn sym_embed<S: Scalar>(n: usize, k: usize) -> SparseMat<S> {
    let sym = SymIndex::new(n, k);
    let dims = vec![n; k];
    let mut m = SparseMat::new(n.pow(k as u32), sym.dim());
    for (col, tuple) in sym.tuples.iter().enumerate() {
        let mut seen = std::collections::HashSet::new();
        let mut perm: Vec<usize> = (0..k).collect();
        permute_with_signs(&mut perm, &mut |p, _| {
            let idx: Vec<usize> = p.iter().map(|&j| tuple[j] as usize).collect();
            if seen.insert(idx.clone()) {
                m.push(flat(&dims, &idx), col, S::one());
            }
        });
    }
    m.finalize();
    m
}

/// ⊗^k(F^n) → ⊙^k(F^n): coefficient at the non-decreasing tuple.
pub fn sym_project<S: Scalar>(n: usize, k: usize) -> SparseMat<S> {
    let sym = SymIndex::new(n, k);
    let dims = vec![n; k];
    let mut m = SparseMat::new(sym.dim(), n.pow(k as u32));
    for (row, tuple) in sym.tuples.iter().enumerate() {
        let idx: Vec<usize> = tuple.iter().map(|&j| j as usize).collect();
        m.push(row, flat(&dims, &idx), S::one());
    }
    m.finalize();
    m
}

/// Heap's algorithm, invoking `f(permutation, sign)` for each permutation.
fn permute_with_signs(perm: &mut Vec<usize>, f: &mut impl FnMut(&[usize], i64)) {
    fn rec(k: usize, perm: &mut Vec<usize>, sign: &mut i64, f: &mut impl FnMut(&[usize], i64)) {
        if k <= 1 {
            f(perm, *sign);
            return;
        }
        for i in 0..k {
            rec(k - 1, perm, sign, f);
            if i < k - 1 {
                if k % 2 == 0 {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
                *sign = -*sign;
            }
        }
    }
    let mut sign = 1i64;
    let k = perm.len();
    rec(k, perm, &mut sign, f);
}

/// Standard complex structure [[0, -I], [I, 0]] on ℝ²ⁿ.
pub fn std_j(n: usize) -> Mat<Rat> {
    let mut j = Mat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j.set(k, n + k, <Rat as Scalar>::from_i64(-1));
        j.set(n + k, k, <Rat as Scalar>::from_i64(1));
    }
    j
}

/// Realify a complex matrix: X + iY ↦ [[X, -Y], [Y, X]].
pub fn realify_mat(m: &Mat<GaussRat>) -> Mat<Rat> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut out = Mat::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let z = m.get(r, c);
            if !z.re.is_zero() {
                out.set(r, c, z.re.clone());
                out.set(n + r, n + c, z.re.clone());
            }
            if !z.im.is_zero() {
                out.set(r, n + c, -z.im.clone());
                out.set(n + r, c, z.im.clone());
            }
        }
    }
    out
}

/// Right multiplications by i and j on ℍⁿ = ℝ⁴ⁿ, plus their product.
pub fn quat_triple(n: usize) -> [Mat<Rat>; 3] {
    let one = || <Rat as Scalar>::from_i64(1);
    let neg = || <Rat as Scalar>::from_i64(-1);
    // Blocks are coefficient spaces of 1, i, j, k.
    let mut j1 = Mat::zeros(4 * n, 4 * n);
    let mut j2 = Mat::zeros(4 * n, 4 * n);
    for t in 0..n {
        let b = |blk: usize| blk * n + t;
        // x·i = (-x1, x0, x3, -x2)
        j1.set(b(0), b(1), neg());
        j1.set(b(1), b(0), one());
        j1.set(b(2), b(3), one());
        j1.set(b(3), b(2), neg());
        // x·j = (-x2, -x3, x0, x1)
        j2.set(b(0), b(2), neg());
        j2.set(b(1), b(3), neg());
        j2.set(b(2), b(0), one());
        j2.set(b(3), b(1), one());
    }
    let j3 = j1.matmul(&j2);
    [j1, j2, j3]
}

/// Check the quaternion identities J_αJ_β = -δ_{αβ} + ε_{αβγ}J_γ.
pub fn check_quat_identities<S: Scalar>(js: &[Mat<S>; 3]) -> bool {
    let n = js[0].rows;
    let id = Mat::<S>::identity(n);
    let eps = |a: usize, b: usize, c: usize| -> i64 {
        match (a, b, c) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
            _ => 0,
        }
    };
    for a in 0..3 {
        for b in 0..3 {
            let mut expect = if a == b {
                id.scale(&S::from_i64(-1))
            } else {
                Mat::zeros(n, n)
            };
            for c in 0..3 {
                let e = eps(a, b, c);
                if e != 0 {
                    expect = expect.add(&js[c].scale(&S::from_i64(e)));
                }
            }
            if !js[a].matmul(&js[b]).sub(&expect).is_zero() {
                return false;
            }
        }
    }
    true
}

/// The twist ω ↦ ω(J·, J·) as a matrix on Λ²V*.
pub fn theta2_matrix<S: Scalar>(j: &Mat<S>) -> SparseMat<S> {
    let n = j.rows;
    let alt = AltIndex::new(n, 2);
    let mut m = SparseMat::new(alt.dim(), alt.dim());
    for (col, ab) in alt.tuples.iter().enumerate() {
        let (a, b) = (ab[0] as usize, ab[1] as usize);
        for x in 0..n {
            let jax = j.get(a, x);
            let jbx = j.get(b, x);
            if jax.is_zero() && jbx.is_zero() {
                continue;
            }
            for y in x + 1..n {
                // (θω)(x,y) = Σ_{a<b} ω_ab (J_ax J_by - J_bx J_ay)
                let v = jax.mul(j.get(b, y)).sub(&jbx.mul(j.get(a, y)));
                if !v.is_zero() {
                    m.push(alt.pos(&[x as u16, y as u16]) as usize, col, v);
                }
            }
        }
    }
    m.finalize();
    m
}

/// The involution J⊗J⊗J⊗J on Λ²V* ⊗ V* ⊗ V (twist all arguments by J,
/// push the value through J).
pub fn theta4_matrix<S: Scalar>(j: &Mat<S>) -> SparseMat<S> {
    let n = j.rows;
    let alt = AltIndex::new(n, 2);
    let p = alt.dim();
    let dim = p * n * n;
    let theta2 = theta2_matrix(j);
    let mut m = SparseMat::new(dim, dim);
    // (ΘT)(x, y, z) = J · T(Jx, Jy, Jz): factorize through θ₂ on the pair
    // slot and single J twists on the remaining slots.
    for (pr, prow) in theta2.row_data.iter().enumerate() {
        for (pc, pv) in prow {
            // pair block contribution pv at (row-pair pr, col-pair pc)
            for c_in in 0..n {
                for z in 0..n {
                    let jz = j.get(c_in, z); // covector slot: (J e_z) coefficient
                    if jz.is_zero() {
                        continue;
                    }
                    // value slot: J applied to the output of T
                    for (l_out, l_in, jv) in j.entries() {
                        let val = pv.mul(jz).mul(jv);
                        if val.is_zero() {
                            continue;
                        }
                        let row = (pr * n + z) * n + l_out;
                        let col = (*pc as usize * n + c_in) * n + l_in;
                        m.push(row, col, val);
                    }
                }
            }
        }
    }
    m.finalize();
    m
}

/// τ on Λ²V* ⊗ gl(V): τ(k)(x, y) = J⁻¹ ∘ k(Jx, y).  An involution on the
/// -1 eigenspace of θ₂⊗Id, where it stays antisymmetric.
pub fn tau_matrix<S: Scalar>(j: &Mat<S>) -> SparseMat<S> {
    let n = j.rows;
    let alt = AltIndex::new(n, 2);
    let p = alt.dim();
    let dim = p * n * n;
    let j_inv = j.scale(&S::from_i64(-1)); // J² = -1 so J⁻¹ = -J
    let mut m = SparseMat::new(dim, dim);
    for (col_pair, ab) in alt.tuples.iter().enumerate() {
        let (a, b) = (ab[0] as usize, ab[1] as usize);
        // k = (e^a∧e^b) ⊗ E_{rc}: τ(k)(x,y) = J⁻¹E_{rc}·[J_ax δ_yb - J_bx δ_ya]
        // Values J⁻¹E_{rc} = (J⁻¹ column r) placed in row block, column c.
        for x in 0..n {
            let f1 = j.get(a, x).clone(); // pairs with y = b
            let f2 = j.get(b, x).neg(); // pairs with y = a
            for (factor, y) in [(f1, b), (f2, a)] {
                if factor.is_zero() || x == y {
                    continue;
                }
                let (pr, sign) = if x < y {
                    (alt.pos(&[x as u16, y as u16]), 1)
                } else {
                    (alt.pos(&[y as u16, x as u16]), -1)
                };
                // Each sorted slot stores the antisymmetrized evaluation
                // ½(F(p,q) − F(q,p)); without the ½ every slot would carry
                // twice the projected value and the operator would fail to
                // square to the identity on the antiholomorphic eigenspace.
                let factor = factor.mul(&S::from_i64(sign)).mul(&S::from_ratio(1, 2));
                for r in 0..n {
                    for c in 0..n {
                        // value matrix J⁻¹ E_{rc}: entry (m_out, c) = J⁻¹[m_out][r]
                        for m_out in 0..n {
                            let jv = j_inv.get(m_out, r);
                            if jv.is_zero() {
                                continue;
                            }
                            let row = (pr as usize * n + m_out) * n + c;
                            let colk = (col_pair * n + r) * n + c;
                            m.push(row, colk, factor.mul(jv));
                        }
                    }
                }
            }
        }
    }
    m.finalize();
    m
}

/// Exterior form with small support over F^n, keyed by index bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtForm<S> {
    pub n: usize,
    pub terms: BTreeMap<u32, S>,
}

impl<S: Scalar> ExtForm<S> {
    pub fn zero(n: usize) -> Self {
        ExtForm {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// A single wedge monomial e^{i₁}∧…∧e^{i_k} given by distinct indices
    /// in increasing order.
    pub fn monomial(n: usize, indices: &[usize], coeff: S) -> Self {
        let mut mask = 0u32;
        for w in indices.windows(2) {
            assert!(w[0] < w[1], "indices must be strictly increasing");
        }
        for &i in indices {
            assert!(i < n);
            mask |= 1 << i;
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mask, coeff);
        }
        ExtForm { n, terms }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let mut terms = self.terms.clone();
        for (m, v) in &rhs.terms {
            let cur = terms.remove(m).unwrap_or_else(S::zero).add(v);
            if !cur.is_zero() {
                terms.insert(*m, cur);
            }
        }
        ExtForm { n: self.n, terms }
    }

    pub fn scale(&self, k: &S) -> Self {
        ExtForm {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(_, v)| !v.mul(k).is_zero())
                .map(|(m, v)| (*m, v.mul(k)))
                .collect(),
        }
    }

    pub fn wedge(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let mut out = ExtForm::zero(self.n);
        for (ma, va) in &self.terms {
            for (mb, vb) in &rhs.terms {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(*ma, *mb);
                let v = va.mul(vb).mul(&S::from_i64(sign));
                let mask = ma | mb;
                let cur = out.terms.remove(&mask).unwrap_or_else(S::zero).add(&v);
                if !cur.is_zero() {
                    out.terms.insert(mask, cur);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the full top-degree monomial e^0∧…∧e^{n-1}.
    pub fn top_coeff(&self) -> S {
        let full = (1u32 << self.n) - 1;
        self.terms.get(&full).cloned().unwrap_or_else(S::zero)
    }
}

/// Sign of merging two disjoint ascending index sets: (-1)^(number of
/// transpositions to interleave b into a).
fn merge_sign(ma: u32, mb: u32) -> i64 {
    let mut sign = 1i64;
    let mut b = mb;
    while b != 0 {
        let bit = b.trailing_zeros();
        // count bits of ma above `bit`
        let above = (ma >> (bit + 1)).count_ones();
        if above % 2 == 1 {
            sign = -sign;
        }
        b &= b - 1;
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn q(n: i64) -> Rat {
        <Rat as Scalar>::from_i64(n)
    }

    #[test]
    fn combo_and_multiset_enumeration() {
        assert_eq!(combos(4, 2).len(), 6);
        assert_eq!(combos(8, 3).len(), 56);
        assert_eq!(multisets(4, 2).len(), 10);
        assert_eq!(multisets(27, 3).len(), 3654);
        assert_eq!(combos(4, 2)[0], vec![0, 1]);
        assert_eq!(combos(4, 2)[5], vec![2, 3]);
        assert_eq!(multisets(3, 2), vec![
            vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]
        ]);
    }

    #[test]
    fn alt_index_signs() {
        let alt = AltIndex::new(5, 3);
        let (p1, s1) = alt.pos_signed(&[2, 0, 1]).unwrap();
        let (p2, s2) = alt.pos_signed(&[0, 1, 2]).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(s1, 1); // cyclic, even
        assert_eq!(s2, 1); // already sorted
        let (_, s3) = alt.pos_signed(&[1, 0, 2]).unwrap();
        assert_eq!(s3, -1);
        assert!(alt.pos_signed(&[1, 1, 2]).is_none());
    }

    #[test]
    fn embed_project_identity() {
        for (n, k) in [(4, 2), (5, 3), (3, 3)] {
            let e = alt_embed::<Rat>(n, k);
            let p = alt_project::<Rat>(n, k);
            let prod = p.to_dense().matmul(&e.to_dense());
            assert_eq!(prod, Mat::identity(AltIndex::new(n, k).dim()), "alt {n} {k}");
            let e = sym_embed::<Rat>(n, k);
            let p = sym_project::<Rat>(n, k);
            let prod = p.to_dense().matmul(&e.to_dense());
            assert_eq!(prod, Mat::identity(SymIndex::new(n, k).dim()), "sym {n} {k}");
        }
    }

    #[test]
    fn alt_embed_is_antisymmetric() {
        // Λ²(F³): embedded tensor must satisfy T_ab = -T_ba.
        let e = alt_embed::<Rat>(3, 2).to_dense();
        for col in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    let t_ab = e.get(a * 3 + b, col).clone();
                    let t_ba = e.get(b * 3 + a, col).clone();
                    assert_eq!(t_ab, t_ba.neg());
                }
            }
        }
    }

    #[test]
    fn quaternion_triple_identities() {
        for n in [1, 2] {
            let js = quat_triple(n);
            assert!(check_quat_identities(&js), "n = {n}");
        }
    }

    #[test]
    fn std_j_squares_to_minus_one() {
        let j = std_j(3);
        let j2 = j.matmul(&j);
        assert_eq!(j2, Mat::<Rat>::identity(6).scale(&q(-1)));
    }

    #[test]
    fn realify_is_a_homomorphism() {
        use crate::scalar::GaussRat;
        let a = Mat::<GaussRat>::from_fn(2, 2, |r, c| {
            GaussRat::new(<Rat as Scalar>::from_i64((r + c) as i64), <Rat as Scalar>::from_i64(r as i64 - c as i64))
        });
        let b = Mat::<GaussRat>::from_fn(2, 2, |r, c| {
            GaussRat::new(<Rat as Scalar>::from_i64(1 + (r * c) as i64), <Rat as Scalar>::from_i64(1))
        });
        let lhs = realify_mat(&a.matmul(&b));
        let rhs = realify_mat(&a).matmul(&realify_mat(&b));
        assert_eq!(lhs, rhs);
        // Realification commutes with J (complex-linearity).
        let j = std_j(2);
        assert!(realify_mat(&a).commutator(&j).is_zero());
    }

    #[test]
    fn theta2_is_identity_for_diagonal_j_squared() {
        // θ₂ built from J on ℝ⁴ is an involution on Λ².
        let j = std_j(2);
        let t = theta2_matrix(&j).to_dense();
        let t2 = t.matmul(&t);
        assert_eq!(t2, Mat::<Rat>::identity(6));
        // Eigenvalue count: Λ² ℝ⁴ splits 4 ⊕ 2 under the twist
        // ((1,1)-forms vs (2,0)+(0,2)-forms).
        let id = Mat::<Rat>::identity(6);
        let plus = SparseMat::from_dense(&t.sub(&id)); // kernel = +1 eigenspace
        let minus = SparseMat::from_dense(&t.add(&id));
        let plus_dim = crate::subspace::Subspace::kernel_of(&plus).dim();
        let minus_dim = crate::subspace::Subspace::kernel_of(&minus).dim();
        assert_eq!((plus_dim, minus_dim), (4, 2));
    }

    #[test]
    fn theta4_is_an_involution() {
        let j = std_j(2);
        let t = theta4_matrix(&j);
        let dim = 6 * 4 * 4;
        assert_eq!(t.rows, dim);
        let t2 = t.to_dense().matmul(&t.to_dense());
        assert_eq!(t2, Mat::<Rat>::identity(dim));
        // Eigenspace dimensions sum to the ambient dimension.
        let id = Mat::<Rat>::identity(dim);
        let plus = crate::subspace::Subspace::kernel_of(&SparseMat::from_dense(&t.to_dense().sub(&id))).dim();
        let minus = crate::subspace::Subspace::kernel_of(&SparseMat::from_dense(&t.to_dense().add(&id))).dim();
        assert_eq!(plus + minus, dim);
    }

    #[test]
    fn tau_squares_to_identity_on_antiholomorphic_part() {
        // τ(k)(x,y) = J⁻¹k(Jx,y), antisymmetrized. On (1,1)-type pairs
        // (θ₂ = +1) the raw map is symmetric, so the projection kills them;
        // on the θ₂ = −1 part it restricts to an involution.
        let j = std_j(2);
        let n = 4;
        let theta = theta2_matrix(&j).to_dense();
        let id = Mat::<Rat>::identity(6);
        let plus = crate::subspace::Subspace::kernel_of(&SparseMat::from_dense(&theta.sub(&id)));
        let minus = crate::subspace::Subspace::kernel_of(&SparseMat::from_dense(&theta.add(&id)));
        let tau = tau_matrix(&j);
        // Expand a pair-space vector to the tensor space by attaching one
        // matrix unit E_{rc} as the value slot.
        let expand = |w: &Vec<(u32, Rat)>, r: usize, c: usize| -> Vec<(u32, Rat)> {
            w.iter()
                .map(|(pr, v)| ((*pr as usize * n * n + r * n + c) as u32, v.clone()))
                .collect()
        };
        for r in 0..n {
            for c in 0..n {
                for w in &plus.basis {
                    assert!(tau.apply_sparse(&expand(w, r, c)).is_empty());
                }
                for w in &minus.basis {
                    let v = expand(w, r, c);
                    assert_eq!(tau.apply_sparse(&tau.apply_sparse(&v)), v);
                }
            }
        }
    }

    #[test]
    fn wedge_algebra() {
        let n = 8;
        let e = |idx: &[usize]| ExtForm::<Rat>::monomial(n, idx, q(1));
        let a = e(&[0, 1]);
        let b = e(&[2, 3]);
        assert_eq!(a.wedge(&b), e(&[0, 1, 2, 3]));
        // Anticommutativity of odd forms: e0 ∧ e1 = -(e1 ∧ e0)
        let x = ExtForm::monomial(n, &[0], q(1));
        let y = ExtForm::monomial(n, &[1], q(1));
        assert_eq!(x.wedge(&y), y.wedge(&x).scale(&q(-1)));
        // ω = e01 + e23 + e45 + e67, ω⁴ = 4! vol
        let omega = e(&[0, 1]).add(&e(&[2, 3])).add(&e(&[4, 5])).add(&e(&[6, 7]));
        let w2 = omega.wedge(&omega);
        let w4 = w2.wedge(&w2);
        assert_eq!(w4.top_coeff(), q(24));
    }
}
