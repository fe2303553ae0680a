//! Exact dense and sparse matrices.
//!
//! Dense [`Mat`] is used for the small objects that get multiplied a lot
//! (generator matrices, bilinear forms, operators on a representation space).
//! Sparse [`SparseMat`] is used for the big structured operators (boundary
//! maps, stabilizer conditions) whose kernels and ranks we need.
//!
//! Elimination comes in two independent flavours:
//!
//! * [`SparseMat::eliminate`] — fraction-free sparse Gaussian elimination.
//!   Rows are kept as primitive (Gaussian-)integer vectors via
//!   [`Scalar::strip_row_content`]; the combination step `p_c·r - r_c·p`
//!   multiplies instead of dividing, which is what keeps coefficient growth
//!   polynomial.  Pivots are chosen by a Markowitz-style rule (sparsest
//!   column, then sparsest row) with deterministic tie-breaking.
//! * [`naive_kernel`] — a deliberately plain dense rational elimination kept
//!   as an independent test oracle for the sparse path.  It shares no code
//!   with `eliminate`.
//!
//! Empty-shape conventions: a matrix with zero rows has full kernel; a matrix
//! with zero columns has rank 0 and kernel dimension 0.

use crate::scalar::Scalar;
use std::collections::HashMap;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat<S> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            m.set(k, k, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Build from integer entries, row major.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Mat::from_fn(rows, cols, |r, c| S::from_i64(entries[r * cols + c]))
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &S) {
        let cur = self.get(r, c).add(v);
        self.set(r, c, cur);
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(k)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_to(r, c, &a.mul(b));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn trace(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let mut t = S::zero();
        for k in 0..self.rows {
            t = t.add(self.get(k, k));
        }
        t
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs).sub(&rhs.matmul(self))
    }

    /// Solve `self · X = rhs` for square invertible `self` by Gauss–Jordan
    /// elimination; `None` when singular.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for c in 0..n {
                    let tmp = a.get(pivot, c).clone();
                    a.set(pivot, c, a.get(col, c).clone());
                    a.set(col, c, tmp);
                }
                for c in 0..b.cols {
                    let tmp = b.get(pivot, c).clone();
                    b.set(pivot, c, b.get(col, c).clone());
                    b.set(col, c, tmp);
                }
            }
            let inv = a.get(col, col).inv().unwrap();
            for c in 0..n {
                a.set(col, c, a.get(col, c).mul(&inv));
            }
            for c in 0..b.cols {
                b.set(col, c, b.get(col, c).mul(&inv));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = a.get(r, c).sub(&f.mul(a.get(col, c)));
                    a.set(r, c, v);
                }
                for c in 0..b.cols {
                    let v = b.get(r, c).sub(&f.mul(b.get(col, c)));
                    b.set(r, c, v);
                }
            }
        }
        Some(b)
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        self.solve(&Mat::identity(self.rows))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Apply to a dense column vector.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![S::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if a.is_zero() || v[c].is_zero() {
                    continue;
                }
                out[r] = out[r].add(&a.mul(&v[c]));
            }
        }
        out
    }

    /// Flatten row-major into a sparse vector (used to treat matrices as
    /// vectors in gl(V) ≅ F^{n²}).
    pub fn to_sparse_vec(&self) -> Vec<(u32, S)> {
        let mut v = Vec::new();
        for (k, x) in self.data.iter().enumerate() {
            if !x.is_zero() {
                v.push((k as u32, x.clone()));
            }
        }
        v
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(move |(k, x)| (k / cols, k % cols, x))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Sparse matrix stored by rows; each row is sorted by column index with no
/// explicit zeros and no duplicate columns.
#[derive(Debug, Clone)]
pub struct SparseMat<S> {
    pub rows: usize,
    pub cols: usize,
    pub row_data: Vec<Vec<(u32, S)>>,
}

/// Sorted-merge of sparse rows: `a*ra + b*rb`, dropping zeros.
pub fn row_combine<S: Scalar>(
    a: &S,
    ra: &[(u32, S)],
    b: &S,
    rb: &[(u32, S)],
) -> Vec<(u32, S)> {
    let mut out = Vec::with_capacity(ra.len() + rb.len());
    let (mut i, mut j) = (0, 0);
    while i < ra.len() || j < rb.len() {
        let take_a = j >= rb.len() || (i < ra.len() && ra[i].0 < rb[j].0);
        let take_b = i >= ra.len() || (j < rb.len() && rb[j].0 < ra[i].0);
        if take_a {
            let v = a.mul(&ra[i].1);
            if !v.is_zero() {
                out.push((ra[i].0, v));
            }
            i += 1;
        } else if take_b {
            let v = b.mul(&rb[j].1);
            if !v.is_zero() {
                out.push((rb[j].0, v));
            }
            j += 1;
        } else {
            let v = a.mul(&ra[i].1).add(&b.mul(&rb[j].1));
            if !v.is_zero() {
                out.push((ra[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Result of a fraction-free elimination: rank and the echelonized pivot rows
/// in elimination order (row k is zero on every earlier pivot column).
pub struct Echelon<S> {
    pub cols: usize,
    /// (pivot column, row entries) in elimination order.
    pub pivot_rows: Vec<(u32, Vec<(u32, S)>)>,
}

impl<S: Scalar> Echelon<S> {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Kernel basis by back-substitution, one vector per free column.
    /// Vectors are sorted by coordinate; no canonicalization here.
    pub fn kernel(&self) -> Vec<Vec<(u32, S)>> {
        let mut is_pivot = vec![false; self.cols];
        for (c, _) in &self.pivot_rows {
            is_pivot[*c as usize] = true;
        }
        let free: Vec<u32> = (0..self.cols as u32)
            .filter(|c| !is_pivot[*c as usize])
            .collect();
        let mut out = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v: HashMap<u32, S> = HashMap::new();
            v.insert(f, S::one());
            // Reverse elimination order: each pivot row only references its
            // own pivot, later pivots, and free columns.
            for (pc, row) in self.pivot_rows.iter().rev() {
                let mut acc = S::zero();
                let mut diag = S::zero();
                for (c, x) in row {
                    if c == pc {
                        diag = x.clone();
                    } else if let Some(val) = v.get(c) {
                        acc = acc.add(&x.mul(val));
                    }
                }
                if !acc.is_zero() {
                    v.insert(*pc, acc.neg().div(&diag));
                }
            }
            let mut vec: Vec<(u32, S)> = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
            vec.sort_by_key(|(c, _)| *c);
            out.push(vec);
        }
        out
    }
}

impl<S: Scalar> SparseMat<S> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            row_data: vec![Vec::new(); rows],
        }
    }

    /// Accumulate an entry (duplicates add up; call `finalize` once done).
    pub fn push(&mut self, r: usize, c: usize, v: S) {
        debug_assert!(r < self.rows && c < self.cols);
        if !v.is_zero() {
            self.row_data[r].push((c as u32, v));
        }
    }

    /// Sort rows, merge duplicate columns, drop zeros.
    pub fn finalize(&mut self) {
        for row in &mut self.row_data {
            if row.is_empty() {
                continue;
            }
            row.sort_by_key(|(c, _)| *c);
            let mut merged: Vec<(u32, S)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[SparseMat<S>]) -> Self {
        let cols = parts[0].cols;
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = SparseMat::new(rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack needs equal column counts");
            for (r, row) in p.row_data.iter().enumerate() {
                for (c, v) in row {
                    out.push(off + r, *c as usize, v.clone());
                }
            }
            off += p.rows;
        }
        out.finalize();
        out
    }

    pub fn from_columns(ambient_rows: usize, columns: &[Vec<(u32, S)>]) -> Self {
        let mut m = SparseMat::new(ambient_rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (r, v) in col {
                m.push(*r as usize, j, v.clone());
            }
        }
        m.finalize();
        m
    }

    pub fn from_dense(mat: &Mat<S>) -> Self {
        let mut m = SparseMat::new(mat.rows, mat.cols);
        for (r, c, v) in mat.entries() {
            m.push(r, c, v.clone());
        }
        m.finalize();
        m
    }

    pub fn to_dense(&self) -> Mat<S> {
        let mut m = Mat::zeros(self.rows, self.cols);
        for (r, row) in self.row_data.iter().enumerate() {
            for (c, v) in row {
                m.set(r, *c as usize, v.clone());
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.row_data.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut m = SparseMat::new(self.cols, self.rows);
        for (r, row) in self.row_data.iter().enumerate() {
            for (c, v) in row {
                m.push(*c as usize, r, v.clone());
            }
        }
        m.finalize();
        m
    }

    /// Matrix–vector product with a sparse vector.
    pub fn apply_sparse(&self, v: &[(u32, S)]) -> Vec<(u32, S)> {
        let val: HashMap<u32, &S> = v.iter().map(|(c, x)| (*c, x)).collect();
        let mut out = Vec::new();
        for (r, row) in self.row_data.iter().enumerate() {
            let mut acc = S::zero();
            for (c, x) in row {
                if let Some(y) = val.get(c) {
                    acc = acc.add(&x.mul(y));
                }
            }
            if !acc.is_zero() {
                out.push((r as u32, acc));
            }
        }
        out
    }

    /// Fraction-free sparse Gaussian elimination.  Deterministic: pivot
    /// column = sparsest active column (lowest index on ties), pivot row =
    /// sparsest active row containing it (lowest index on ties).
    pub fn eliminate(&self) -> Echelon<S> {
        // Working copies of rows, normalized to primitive integer form.
        let mut rows: Vec<Vec<(u32, S)>> = self.row_data.clone();
        for row in rows.iter_mut() {
            if !row.is_empty() {
                S::strip_row_content(row);
            }
        }
        let mut active: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();

        // col -> candidate row indices (superset, cleaned lazily) and live
        // entry counts.
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); self.cols];
        let mut col_count: Vec<u32> = vec![0; self.cols];
        for (r, row) in rows.iter().enumerate() {
            if active[r] {
                for (c, _) in row {
                    col_rows[*c as usize].push(r as u32);
                    col_count[*c as usize] += 1;
                }
            }
        }

        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        // Min-heap of (count, col) with lazy invalidation: stale keys are
        // detected on pop and reinserted with the current count.  A fresh key
        // is pushed whenever a count rises from zero so every live column
        // always owns at least one heap entry.
        let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..self.cols as u32)
            .filter(|&c| col_count[c as usize] > 0)
            .map(|c| Reverse((col_count[c as usize], c)))
            .collect();

        fn row_has<S>(row: &[(u32, S)], c: u32) -> bool {
            row.binary_search_by_key(&c, |(cc, _)| *cc).is_ok()
        }

        let mut pivot_rows: Vec<(u32, Vec<(u32, S)>)> = Vec::new();

        while let Some(Reverse((cnt, c))) = heap.pop() {
            let ci = c as usize;
            if col_count[ci] == 0 {
                continue;
            }
            if cnt != col_count[ci] {
                heap.push(Reverse((col_count[ci], c)));
                continue;
            }
            // Gather live candidate rows for this column.
            col_rows[ci].sort_unstable();
            col_rows[ci].dedup();
            col_rows[ci].retain(|&r| active[r as usize] && row_has(&rows[r as usize], c));
            col_count[ci] = col_rows[ci].len() as u32;
            if col_rows[ci].is_empty() {
                continue;
            }
            // Pivot row: fewest nonzeros, then lowest index.
            let &pr = col_rows[ci]
                .iter()
                .min_by_key(|&&r| (rows[r as usize].len(), r))
                .unwrap();
            let pivot_row = std::mem::take(&mut rows[pr as usize]);
            active[pr as usize] = false;
            let pc = pivot_row
                .iter()
                .find(|(cc, _)| *cc == c)
                .map(|(_, v)| v.clone())
                .unwrap();
            // Eliminate c from the other candidate rows.
            let victims: Vec<u32> = col_rows[ci].iter().copied().filter(|&r| r != pr).collect();
            for r in victims {
                let ri = r as usize;
                let rc = match rows[ri].binary_search_by_key(&c, |(cc, _)| *cc) {
                    Ok(k) => rows[ri][k].1.clone(),
                    Err(_) => continue,
                };
                for (cc, _) in &rows[ri] {
                    col_count[*cc as usize] -= 1;
                }
                let mut new_row = row_combine(&pc, &rows[ri], &rc.neg(), &pivot_row);
                if new_row.is_empty() {
                    active[ri] = false;
                } else {
                    S::strip_row_content(&mut new_row);
                }
                for (cc, _) in &new_row {
                    let cci = *cc as usize;
                    col_rows[cci].push(r);
                    col_count[cci] += 1;
                    if col_count[cci] == 1 {
                        // 0 → 1 transition: make sure the column re-enters
                        // the heap.
                        heap.push(Reverse((1, *cc)));
                    }
                }
                rows[ri] = new_row;
            }
            // Retire the pivot row from the counts.
            for (cc, _) in &pivot_row {
                if *cc != c {
                    col_count[*cc as usize] -= 1;
                }
            }
            col_count[ci] = 0;
            pivot_rows.push((c, pivot_row));
        }

        // Safety sweep: stale-key starvation cannot drop live columns thanks
        // to the 0→1 pushes above, but keep a linear check as a guard.
        debug_assert!(col_count.iter().all(|&k| k == 0));
        for c in 0..self.cols {
            while col_count[c] > 0 {
                col_rows[c].sort_unstable();
                col_rows[c].dedup();
                col_rows[c].retain(|&r| active[r as usize] && row_has(&rows[r as usize], c as u32));
                col_count[c] = col_rows[c].len() as u32;
                let Some(&pr) = col_rows[c]
                    .iter()
                    .min_by_key(|&&r| (rows[r as usize].len(), r))
                else {
                    break;
                };
                let pivot_row = std::mem::take(&mut rows[pr as usize]);
                active[pr as usize] = false;
                let pc = pivot_row
                    .iter()
                    .find(|(cc, _)| *cc as usize == c)
                    .map(|(_, v)| v.clone())
                    .unwrap();
                let victims: Vec<u32> =
                    col_rows[c].iter().copied().filter(|&r| r != pr).collect();
                for r in victims {
                    let ri = r as usize;
                    let rc = match rows[ri].binary_search_by_key(&(c as u32), |(cc, _)| *cc) {
                        Ok(k) => rows[ri][k].1.clone(),
                        Err(_) => continue,
                    };
                    for (cc, _) in &rows[ri] {
                        col_count[*cc as usize] = col_count[*cc as usize].saturating_sub(1);
                    }
                    let mut new_row = row_combine(&pc, &rows[ri], &rc.neg(), &pivot_row);
                    if new_row.is_empty() {
                        active[ri] = false;
                    } else {
                        S::strip_row_content(&mut new_row);
                    }
                    for (cc, _) in &new_row {
                        col_rows[*cc as usize].push(r);
                        col_count[*cc as usize] += 1;
                    }
                    rows[ri] = new_row;
                }
                for (cc, _) in &pivot_row {
                    if *cc as usize != c {
                        col_count[*cc as usize] = col_count[*cc as usize].saturating_sub(1);
                    }
                }
                col_count[c] = 0;
                pivot_rows.push((c as u32, pivot_row));
            }
        }

        Echelon {
            cols: self.cols,
            pivot_rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.eliminate().rank()
    }

    /// Kernel basis (right null space), not yet canonicalized.
    pub fn kernel(&self) -> Vec<Vec<(u32, S)>> {
        self.eliminate().kernel()
    }
}

/// Kronecker product: (a ⊗ b)[(ra·b.rows + rb), (ca·b.cols + cb)] =
/// a[ra][ca]·b[rb][cb], matching row-major flattening of V_a ⊗ V_b.
pub fn kron<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let mut out = Mat::zeros(a.rows * b.rows, a.cols * b.cols);
    for (ra, ca, va) in a.entries() {
        for (rb, cb, vb) in b.entries() {
            out.set(ra * b.rows + rb, ca * b.cols + cb, va.mul(vb));
        }
    }
    out
}

/// Signature (positive, negative, zero inertia) of a symmetric rational
/// matrix, by symmetric congruence reduction.  Exact; panics on asymmetry.
pub fn symmetric_signature(g: &Mat<crate::scalar::Rat>) -> (usize, usize, usize) {
    use num_traits::Signed;
    assert_eq!(g.rows, g.cols);
    assert_eq!(g, &g.transpose(), "signature of a non-symmetric matrix");
    let n = g.rows;
    let mut a: Vec<Vec<crate::scalar::Rat>> = (0..n)
        .map(|r| (0..n).map(|c| g.get(r, c).clone()).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    let mut live: Vec<usize> = (0..n).collect();
    while let Some(&first) = live.first() {
        // Find a nonzero diagonal entry among live indices.
        let diag = live.iter().copied().find(|&i| !Scalar::is_zero(&a[i][i]));
        let p = match diag {
            Some(p) => p,
            None => {
                // All live diagonal entries vanish.  If the live block is
                // zero we are done; otherwise a[i][j] ≠ 0 for some pair and
                // adding row/col j to i creates 2·a[i][j] on the diagonal.
                let off = live
                    .iter()
                    .flat_map(|&i| live.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !Scalar::is_zero(&a[i][j]));
                match off {
                    None => {
                        zero += live.len();
                        break;
                    }
                    Some((i, j)) => {
                        for k in 0..n {
                            let v = a[j][k].clone();
                            a[i][k] = Scalar::add(&a[i][k], &v);
                        }
                        for k in 0..n {
                            let v = a[k][j].clone();
                            a[k][i] = Scalar::add(&a[k][i], &v);
                        }
                        i
                    }
                }
            }
        };
        let _ = first;
        let d = a[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        live.retain(|&i| i != p);
        // Clear row/column p on the live block: row_i -= (a[i][p]/d)·row_p.
        let others: Vec<usize> = live.clone();
        for &i in &others {
            let f = <crate::scalar::Rat as Scalar>::div(&a[i][p], &d);
            if Scalar::is_zero(&f) {
                continue;
            }
            for k in 0..n {
                let delta = Scalar::mul(&f, &a[p][k]);
                a[i][k] = Scalar::sub(&a[i][k], &delta);
            }
            for k in 0..n {
                let delta = Scalar::mul(&f, &a[k][p]);
                a[k][i] = Scalar::sub(&a[k][i], &delta);
            }
        }
    }
    (pos, neg, zero)
}

/// Textbook dense rational elimination, kept as an independent oracle for the
/// sparse fraction-free path.  Returns a kernel basis in reduced echelon form
/// with respect to left-to-right pivoting.
pub fn naive_kernel<S: Scalar>(mat: &Mat<S>) -> Vec<Vec<S>> {
    let (rows, cols) = (mat.rows, mat.cols);
    let mut a: Vec<Vec<S>> = (0..rows)
        .map(|r| (0..cols).map(|c| mat.get(r, c).clone()).collect())
        .collect();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut lead = 0usize;
    for r in 0..rows {
        if lead >= cols {
            break;
        }
        // Find a pivot in column `lead` at or below row r.
        let mut pr = None;
        let mut col = lead;
        'search: while col < cols {
            for rr in r..rows {
                if !a[rr][col].is_zero() {
                    pr = Some(rr);
                    break 'search;
                }
            }
            col += 1;
        }
        let Some(pr) = pr else { break };
        a.swap(r, pr);
        let inv = a[r][col].inv().unwrap();
        for c in 0..cols {
            a[r][c] = a[r][c].mul(&inv);
        }
        for rr in 0..rows {
            if rr != r && !a[rr][col].is_zero() {
                let f = a[rr][col].clone();
                for c in 0..cols {
                    let t = a[r][c].mul(&f);
                    a[rr][c] = a[rr][c].sub(&t);
                }
            }
        }
        pivot_col_of_row.push(col);
        lead = col + 1;
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let is_pivot = |c: usize| pivot_cols.contains(&c);
    let mut kernel = Vec::new();
    for f in 0..cols {
        if is_pivot(f) {
            continue;
        }
        let mut v = vec![S::zero(); cols];
        v[f] = S::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = a[r][f].neg();
        }
        kernel.push(v);
    }
    kernel
}

/// Incremental reduced span with coefficient tracking.  Supports membership
/// tests, rank growth and expressing vectors over the inserted generators.
pub struct SpanReducer<S> {
    pub ambient: usize,
    /// (pivot col, reduced vector with pivot normalized to 1, coefficients
    /// over inserted vectors).  Rows are kept fully reduced against each
    /// other, so the basis is the unique reduced echelon basis of the span.
    rows: Vec<(u32, Vec<(u32, S)>, Vec<(u32, S)>)>,
    pivot_of_col: HashMap<u32, usize>,
    inserted: u32,
}

impl<S: Scalar> SpanReducer<S> {
    pub fn new(ambient: usize) -> Self {
        SpanReducer {
            ambient,
            rows: Vec::new(),
            pivot_of_col: HashMap::new(),
            inserted: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the span.  Returns the residual and the coefficient
    /// vector over inserted generators such that `v = Σ coeff·gen + residual`.
    pub fn reduce(&self, v: &[(u32, S)]) -> (Vec<(u32, S)>, Vec<(u32, S)>) {
        let mut residual: Vec<(u32, S)> = v.to_vec();
        let mut coeffs: Vec<(u32, S)> = Vec::new();
        loop {
            let hit = residual.iter().find_map(|(c, x)| {
                self.pivot_of_col.get(c).map(|&ri| (ri, x.clone()))
            });
            let Some((ri, f)) = hit else { break };
            let (_, rvec, rcoeff) = &self.rows[ri];
            residual = row_combine(&S::one(), &residual, &f.neg(), rvec);
            coeffs = row_combine(&S::one(), &coeffs, &f, rcoeff);
        }
        (residual, coeffs)
    }

    /// Insert a vector.  Returns true when it increased the dimension.
    pub fn insert(&mut self, v: &[(u32, S)]) -> bool {
        let tag = self.inserted;
        self.inserted += 1;
        let (mut residual, coeffs) = self.reduce(v);
        if residual.is_empty() {
            return false;
        }
        // residual = v - Σ coeffs·gen  ⇒  normalized row = (v − …)/lead.
        let (pc, lead) = residual[0].clone();
        let inv = lead.inv().unwrap();
        for (_, x) in residual.iter_mut() {
            *x = x.mul(&inv);
        }
        let mut coeff_row: Vec<(u32, S)> = vec![(tag, inv.clone())];
        for (k, x) in coeffs {
            let nx = x.mul(&inv).neg();
            if !nx.is_zero() {
                coeff_row.push((k, nx));
            }
        }
        coeff_row.sort_by_key(|(k, _)| *k);
        // Fully reduce existing rows against the new pivot.
        for (_, rvec, rcoeff) in self.rows.iter_mut() {
            if let Ok(k) = rvec.binary_search_by_key(&pc, |(cc, _)| *cc) {
                let f = rvec[k].1.clone();
                *rvec = row_combine(&S::one(), rvec, &f.neg(), &residual);
                *rcoeff = row_combine(&S::one(), rcoeff, &f.neg(), &coeff_row);
            }
        }
        self.pivot_of_col.insert(pc, self.rows.len());
        self.rows.push((pc, residual, coeff_row));
        true
    }

    /// True when `v` lies in the current span.
    pub fn contains(&self, v: &[(u32, S)]) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Express `v` over the inserted generators; `None` if not in the span.
    pub fn coefficients(&self, v: &[(u32, S)]) -> Option<Vec<(u32, S)>> {
        let (residual, coeffs) = self.reduce(v);
        if residual.is_empty() {
            Some(coeffs)
        } else {
            None
        }
    }

    /// The canonical reduced basis, sorted by pivot column.
    pub fn canonical_basis(&self) -> Vec<Vec<(u32, S)>> {
        let mut rows: Vec<(u32, Vec<(u32, S)>)> = self
            .rows
            .iter()
            .map(|(p, v, _)| (*p, v.clone()))
            .collect();
        rows.sort_by_key(|(p, _)| *p);
        rows.into_iter().map(|(_, v)| v).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Rat {
        <Rat as Scalar>::from_i64(n)
    }

    fn random_sparse(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> SparseMat<Rat> {
        let mut m = SparseMat::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(density) {
                    let num = rng.gen_range(-6i64..=6);
                    let den = rng.gen_range(1i64..=4);
                    m.push(r, c, <Rat as Scalar>::from_ratio(num, den));
                }
            }
        }
        m.finalize();
        m
    }

    fn kernel_dims_agree(m: &SparseMat<Rat>) {
        let fast = m.kernel();
        let slow = naive_kernel(&m.to_dense());
        assert_eq!(fast.len(), slow.len(), "kernel dims differ");
        // Every fast kernel vector must actually be annihilated.
        for v in &fast {
            let mut dense = vec![q(0); m.cols];
            for (c, x) in v {
                dense[*c as usize] = x.clone();
            }
            let img = m.to_dense().apply(&dense);
            assert!(img.iter().all(|x| x.is_zero()), "kernel vector not annihilated");
        }
        // And the two kernels must span the same space.
        let mut span = SpanReducer::new(m.cols);
        for v in &fast {
            span.insert(v);
        }
        for v in &slow {
            let sv: Vec<(u32, Rat)> = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| (c as u32, x.clone()))
                .collect();
            assert!(span.contains(&sv), "oracle vector outside sparse kernel span");
        }
    }

    #[test]
    fn sparse_kernel_matches_naive_oracle_on_randoms() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..60 {
            let rows = rng.gen_range(1..18);
            let cols = rng.gen_range(1..18);
            let density = [0.15, 0.35, 0.8][trial % 3];
            let m = random_sparse(&mut rng, rows, cols, density);
            kernel_dims_agree(&m);
        }
    }

    #[test]
    fn rank_of_structured_matrices() {
        // Identity, rank-1 outer product, nilpotent block.
        let id = SparseMat::from_dense(&Mat::<Rat>::identity(7));
        assert_eq!(id.rank(), 7);
        let mut outer = SparseMat::<Rat>::new(5, 5);
        for r in 0..5 {
            for c in 0..5 {
                outer.push(r, c, q(((r + 1) * (c + 2)) as i64));
            }
        }
        outer.finalize();
        assert_eq!(outer.rank(), 1);
        assert_eq!(outer.kernel().len(), 4);
    }

    #[test]
    fn dense_solve_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(1..7);
            let a = Mat::from_fn(n, n, |_, _| q(rng.gen_range(-4i64..=4)));
            match a.inverse() {
                Some(inv) => {
                    assert_eq!(a.matmul(&inv), Mat::identity(n));
                    assert_eq!(inv.matmul(&a), Mat::identity(n));
                }
                None => assert!(!SparseMat::from_dense(&a).kernel().is_empty()),
            }
        }
        // Solving against a rectangular right-hand side.
        let a = Mat::<Rat>::from_i64(2, 2, &[2, 1, 1, 1]);
        let rhs = Mat::from_i64(2, 3, &[1, 0, 2, 0, 1, 4]);
        let x = a.solve(&rhs).unwrap();
        assert_eq!(a.matmul(&x), rhs);
    }

    #[test]
    fn empty_shapes() {
        let zero_rows = SparseMat::<Rat>::new(0, 5);
        assert_eq!(zero_rows.rank(), 0);
        assert_eq!(zero_rows.kernel().len(), 5, "0×n kernel is the full space");
        let zero_cols = SparseMat::<Rat>::new(5, 0);
        assert_eq!(zero_cols.rank(), 0);
        assert!(zero_cols.kernel().is_empty(), "n×0 kernel is trivial");
    }

    #[test]
    fn span_reducer_tracks_coefficients() {
        let mut span = SpanReducer::<Rat>::new(4);
        let v0 = vec![(0u32, q(2)), (1, q(4))];
        let v1 = vec![(1u32, q(1)), (3, q(5))];
        assert!(span.insert(&v0));
        assert!(span.insert(&v1));
        // 3*v0 - 2*v1
        let target = vec![(0u32, q(6)), (1, q(10)), (3, q(-10))];
        let coeffs = span.coefficients(&target).unwrap();
        let mut back = vec![q(0); 4];
        for (k, f) in &coeffs {
            let gen = if *k == 0 { &v0 } else { &v1 };
            for (c, x) in gen {
                back[*c as usize] = back[*c as usize].add(&f.mul(x));
            }
        }
        assert_eq!(back, vec![q(6), q(10), q(0), q(-10)]);
        // Dependent vector does not grow the span.
        assert!(!span.insert(&target));
        assert_eq!(span.dim(), 2);
    }

    #[test]
    fn gauss_field_elimination() {
        use crate::scalar::GaussRat;
        let i = GaussRat::i();
        let one = <GaussRat as Scalar>::one();
        // [[1, i], [i, -1]] has rank 1 over Q(i).
        let mut m = SparseMat::<GaussRat>::new(2, 2);
        m.push(0, 0, one.clone());
        m.push(0, 1, i.clone());
        m.push(1, 0, i.clone());
        m.push(1, 1, Scalar::neg(&one));
        m.finalize();
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
    }
}
