//! Subspaces of F^N with canonical bases.
//!
//! A [`Subspace`] stores the unique reduced echelon basis of its span (each
//! basis vector has a 1 at its pivot coordinate and zeros at every other
//! pivot), sorted by pivot.  Canonical form makes equality of subspaces the
//! same as equality of the stored data, which the cache and the golden tests
//! rely on.

use crate::matrix::{row_combine, SparseMat, SpanReducer};
use crate::scalar::Scalar;

pub type SparseVec<S> = Vec<(u32, S)>;

/// Sort by coordinate, merge duplicates, drop zeros.
pub fn normalize_sparse<S: Scalar>(mut v: SparseVec<S>) -> SparseVec<S> {
    v.sort_by_key(|(c, _)| *c);
    let mut out: SparseVec<S> = Vec::with_capacity(v.len());
    for (c, s) in v {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = lv.add(&s),
            _ => out.push((c, s)),
        }
    }
    out.retain(|(_, s)| !s.is_zero());
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<S> {
    pub ambient: usize,
    /// Canonical reduced basis, sorted by pivot coordinate.
    pub basis: Vec<SparseVec<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient as u32).map(|k| vec![(k, S::one())]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonicalize a spanning set.
    pub fn from_spanning(ambient: usize, vectors: &[SparseVec<S>]) -> Self {
        let mut span = SpanReducer::new(ambient);
        for v in vectors {
            span.insert(v);
        }
        Subspace {
            ambient,
            basis: span.canonical_basis(),
        }
    }

    /// Kernel of a sparse matrix as a canonical subspace of F^cols.
    pub fn kernel_of(mat: &SparseMat<S>) -> Self {
        Subspace::from_spanning(mat.cols, &mat.kernel())
    }

    /// Column span of a sparse matrix as a canonical subspace of F^rows.
    pub fn image_of(mat: &SparseMat<S>) -> Self {
        let cols = mat.transpose();
        Subspace::from_spanning(mat.rows, &cols.row_data)
    }

    pub fn reducer(&self) -> SpanReducer<S> {
        let mut span = SpanReducer::new(self.ambient);
        for v in &self.basis {
            span.insert(v);
        }
        span
    }

    pub fn contains_vec(&self, v: &[(u32, S)]) -> bool {
        self.reducer().contains(v)
    }

    pub fn contains(&self, other: &Subspace<S>) -> bool {
        let span = self.reducer();
        other.basis.iter().all(|v| span.contains(v))
    }

    pub fn sum(&self, other: &Subspace<S>) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::from_spanning(self.ambient, &all)
    }

    /// Intersection via the kernel of the stacked basis matrix [A | B]:
    /// a kernel vector (x, -y) encodes Ax = By, a point of the intersection.
    pub fn intersect(&self, other: &Subspace<S>) -> Self {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let ka = self.dim();
        let mut stacked: Vec<SparseVec<S>> = Vec::with_capacity(ka + other.dim());
        stacked.extend(self.basis.iter().cloned());
        stacked.extend(other.basis.iter().cloned());
        let mat = SparseMat::from_columns(self.ambient, &stacked);
        let mut vectors = Vec::new();
        for kv in mat.kernel() {
            // Reassemble Σ_{j < ka} x_j · a_j from the kernel coordinates.
            let mut point: SparseVec<S> = Vec::new();
            for (j, x) in &kv {
                if (*j as usize) < ka {
                    point = row_combine(&S::one(), &point, x, &self.basis[*j as usize]);
                }
            }
            if !point.is_empty() {
                vectors.push(point);
            }
        }
        Subspace::from_spanning(self.ambient, &vectors)
    }

    /// Apply a linear map (given as a sparse matrix) to the subspace.
    pub fn map_through(&self, mat: &SparseMat<S>) -> Subspace<S> {
        assert_eq!(self.ambient, mat.cols);
        let images: Vec<SparseVec<S>> = self
            .basis
            .iter()
            .map(|v| mat.apply_sparse(v))
            .collect();
        Subspace::from_spanning(mat.rows, &images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn q(n: i64) -> Rat {
        <Rat as Scalar>::from_i64(n)
    }

    fn v(entries: &[(u32, i64)]) -> SparseVec<Rat> {
        entries.iter().map(|(c, x)| (*c, q(*x))).collect()
    }

    #[test]
    fn canonical_basis_is_insertion_order_independent() {
        let a = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (2, -1)])];
        let s1 = Subspace::from_spanning(3, &a);
        let b = vec![v(&[(1, 2), (2, 2)]), v(&[(0, 3), (1, 3)])];
        let s2 = Subspace::from_spanning(3, &b);
        assert_eq!(s1, s2);
        assert_eq!(s1.dim(), 2);
    }

    #[test]
    fn intersection_and_sum() {
        // Plane x+y+z = 0 and plane z = 0 in Q³ intersect in span(e0 - e1).
        let plane1 = Subspace::from_spanning(3, &[v(&[(0, 1), (1, -1)]), v(&[(1, 1), (2, -1)])]);
        let plane2 = Subspace::from_spanning(3, &[v(&[(0, 1)]), v(&[(1, 1)])]);
        let line = plane1.intersect(&plane2);
        assert_eq!(line.dim(), 1);
        assert!(line.contains_vec(&v(&[(0, 2), (1, -2)])));
        let all = plane1.sum(&plane2);
        assert_eq!(all.dim(), 3);
        assert_eq!(all, Subspace::full(3));
        // Intersection is contained in both.
        assert!(plane1.contains(&line) && plane2.contains(&line));
    }

    #[test]
    fn kernel_and_image_dimensions_add_up() {
        // Rank-nullity on a fixed 3×4 matrix.
        let mut m = SparseMat::<Rat>::new(3, 4);
        for (r, c, x) in [(0, 0, 1), (0, 1, 2), (1, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, -1)] {
            m.push(r, c, q(x));
        }
        m.finalize();
        let ker = Subspace::kernel_of(&m);
        let img = Subspace::image_of(&m);
        assert_eq!(ker.dim() + img.dim(), 4);
    }
}
