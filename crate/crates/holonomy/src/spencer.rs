//! Prolongations, the boundary operator ∂, the formal curvature module K(𝔤),
//! and the complex eigenspace splitting of K for complex-linear algebras.
//!
//! Coordinate conventions (all row-major):
//! * Λ²V*⊗𝔤: `pair * dim_g + gen` with pairs enumerated by `AltIndex(n, 2)`;
//! * Λ³V*⊗V: `triple * n + vector`;
//! * V*⊗𝔤: `covector * dim_g + gen`;
//! * Λ²V*⊗gl(V) ("tensor coordinates", used by the twists):
//!   `pair * n² + row * n + col` with the value matrix row-major.
//!
//! ∂ is the unnormalized cyclic sum (∂k)(x,y,z) = k(x,y)z + k(y,z)x + k(z,x)y;
//! kernels and images are normalization-invariant, and keeping unit
//! coefficients keeps every boundary matrix integral.

use crate::matrix::SparseMat;
use crate::rep::{Rep, RepError};
use crate::scalar::Scalar;
use crate::subspace::{SparseVec, Subspace};
use crate::tensor::{tau_matrix, theta2_matrix, AltIndex};

/// The prolongation 𝔤⁽¹⁾, the curvature module K(𝔤) and the image of
/// V*⊗𝔤⁽¹⁾ inside it.
pub struct SpencerModules<S: Scalar> {
    /// 𝔤⁽¹⁾ ⊆ V*⊗𝔤.
    pub g1: Subspace<S>,
    /// K(𝔤) = ker ∂ ⊆ Λ²V*⊗𝔤.
    pub k: Subspace<S>,
    /// ∂(V*⊗𝔤⁽¹⁾) ⊆ K(𝔤).
    pub dk_image: Subspace<S>,
    /// dim K − dim ∂(V*⊗𝔤⁽¹⁾).
    pub h12_dim: usize,
}

/// Eigenspace pieces of K(𝔤) for a complex-linear algebra, in tensor
/// coordinates.
pub struct ComplexSplit<S: Scalar> {
    pub k1: Subspace<S>,
    pub k2: Subspace<S>,
    pub k3: Subspace<S>,
}

/// ∂: Λ²V*⊗𝔤 → Λ³V*⊗V.
pub fn boundary_k<S: Scalar>(rep: &Rep<S>) -> SparseMat<S> {
    let n = rep.dim_v;
    let dim_g = rep.dim_g();
    let pairs = AltIndex::new(n, 2);
    let triples = AltIndex::new(n, 3);
    let mut m = SparseMat::new(triples.dim() * n, pairs.dim() * dim_g);
    for (t, xyz) in triples.tuples.iter().enumerate() {
        let (x, y, z) = (xyz[0], xyz[1], xyz[2]);
        // (x,y,z) is strictly increasing, so each unordered pair below is
        // already sorted; the third slot supplies the acted-on basis vector.
        let terms = [
            (pairs.pos(&[x, y]) as usize, z, 1),
            (pairs.pos(&[y, z]) as usize, x, 1),
            (pairs.pos(&[x, z]) as usize, y, -1), // k(z,x) = −k(x,z)
        ];
        for (i, gen) in rep.gens.iter().enumerate() {
            for (p, arg, sign) in terms {
                let col = p * dim_g + i;
                for v in 0..n {
                    let entry = gen.get(v, arg as usize);
                    if !entry.is_zero() {
                        m.push(t * n + v, col, entry.clone().mul(&S::from_i64(sign)));
                    }
                }
            }
        }
    }
    m.finalize();
    m
}

/// ∂: V*⊗𝔤 → Λ²V*⊗V, (∂t)(x,y) = t(x)y − t(y)x. Its kernel is 𝔤⁽¹⁾.
fn boundary_ambient<S: Scalar>(rep: &Rep<S>) -> SparseMat<S> {
    let n = rep.dim_v;
    let dim_g = rep.dim_g();
    let pairs = AltIndex::new(n, 2);
    let mut m = SparseMat::new(pairs.dim() * n, n * dim_g);
    for (p, xy) in pairs.tuples.iter().enumerate() {
        let (x, y) = (xy[0] as usize, xy[1] as usize);
        for (i, gen) in rep.gens.iter().enumerate() {
            for v in 0..n {
                let row = p * n + v;
                let gy = gen.get(v, y);
                if !gy.is_zero() {
                    m.push(row, x * dim_g + i, gy.clone());
                }
                let gx = gen.get(v, x);
                if !gx.is_zero() {
                    m.push(row, y * dim_g + i, S::zero().sub(gx));
                }
            }
        }
    }
    m.finalize();
    m
}

/// 𝔤⁽¹⁾ as the kernel of t ↦ ((x,y) ↦ t(x)y − t(y)x).
pub fn prolong<S: Scalar>(rep: &Rep<S>) -> Subspace<S> {
    Subspace::kernel_of(&boundary_ambient(rep))
}

/// 𝔤⁽¹⁾ computed the other way, as [𝔤⊗V*] ∩ [V⊗⊙²V*] inside V*⊗gl(V)
/// (coordinates `covector * n² + row * n + col`).
pub fn prolong_by_intersection<S: Scalar>(rep: &Rep<S>) -> Subspace<S> {
    let n = rep.dim_v;
    let ambient = n * n * n;
    let mut span_a: Vec<SparseVec<S>> = Vec::new();
    for gen in &rep.gens {
        for x in 0..n {
            let mut v: SparseVec<S> = gen
                .to_sparse_vec()
                .into_iter()
                .map(|(t, s)| ((x * n * n) as u32 + t, s))
                .collect();
            v.sort_by_key(|(c, _)| *c);
            span_a.push(v);
        }
    }
    let mut span_b: Vec<SparseVec<S>> = Vec::new();
    for r in 0..n {
        for x in 0..n {
            for c in x..n {
                let mut v: SparseVec<S> = vec![((x * n * n + r * n + c) as u32, S::one())];
                if c != x {
                    v.push(((c * n * n + r * n + x) as u32, S::one()));
                }
                v.sort_by_key(|(cc, _)| *cc);
                span_b.push(v);
            }
        }
    }
    let a = Subspace::from_spanning(ambient, &span_a);
    let b = Subspace::from_spanning(ambient, &span_b);
    a.intersect(&b)
}

/// Translate a 𝔤⁽¹⁾ vector (V*⊗𝔤 coordinates) into V*⊗gl(V) coordinates.
pub fn g1_to_gl_coords<S: Scalar>(rep: &Rep<S>, v: &[(u32, S)]) -> SparseVec<S> {
    let n = rep.dim_v;
    let dim_g = rep.dim_g();
    let mut out: Vec<(u32, S)> = Vec::new();
    for (coord, s) in v {
        let x = *coord as usize / dim_g;
        let i = *coord as usize % dim_g;
        for (r, c, val) in rep.gens[i].entries() {
            out.push(((x * n * n + r * n + c) as u32, s.clone().mul(val)));
        }
    }
    crate::subspace::normalize_sparse(out)
}

/// ∂: V*⊗𝔤⁽¹⁾ → Λ²V*⊗𝔤, (∂t)(x,y) = t(x)(y) − t(y)(x) ∈ 𝔤.
/// Columns are indexed `covector * dim_g1 + g1_basis_index`.
pub fn boundary_1<S: Scalar>(rep: &Rep<S>, g1: &Subspace<S>) -> SparseMat<S> {
    let n = rep.dim_v;
    let dim_g = rep.dim_g();
    let dim_g1 = g1.dim();
    let pairs = AltIndex::new(n, 2);
    let mut m = SparseMat::new(pairs.dim() * dim_g, n * dim_g1);
    for (bi, b) in g1.basis.iter().enumerate() {
        // b in V*⊗𝔤 coordinates: b[y * dim_g + i] is the 𝔤-coefficient of
        // the value b(e_y).
        for (coord, s) in b {
            let y = *coord as usize / dim_g;
            let i = *coord as usize % dim_g;
            for (p, xy) in pairs.tuples.iter().enumerate() {
                let (px, py) = (xy[0] as usize, xy[1] as usize);
                // ∂(e^c ⊗ b)(x, y) = δ_{cx} b(y) − δ_{cy} b(x)
                if py == y {
                    // δ_{c, px}·b(py): column (px, bi) receives +b(py)
                    m.push(p * dim_g + i, px * dim_g1 + bi, s.clone());
                }
                if px == y {
                    // −δ_{c, py}·b(px): column (py, bi) receives −b(px)
                    m.push(p * dim_g + i, py * dim_g1 + bi, S::zero().sub(s));
                }
            }
        }
    }
    m.finalize();
    m
}

/// One more prolongation step: 𝔤⁽²⁾ = ker(∂: V*⊗𝔤⁽¹⁾ → Λ²V*⊗𝔤).
pub fn prolong2<S: Scalar>(rep: &Rep<S>, g1: &Subspace<S>) -> Subspace<S> {
    Subspace::kernel_of(&boundary_1(rep, g1))
}

/// Assemble 𝔤⁽¹⁾, K(𝔤), ∂(V*⊗𝔤⁽¹⁾) and the H^{1,2} dimension.
pub fn spencer_modules<S: Scalar>(rep: &Rep<S>) -> SpencerModules<S> {
    let g1 = prolong(rep);
    let k = Subspace::kernel_of(&boundary_k(rep));
    let dk_image = Subspace::image_of(&boundary_1(rep, &g1));
    assert!(
        k.contains(&dk_image),
        "∂(V*⊗g1) must land in ker ∂ ({})",
        rep.name
    );
    let h12_dim = k.dim() - dk_image.dim();
    SpencerModules {
        g1,
        k,
        dk_image,
        h12_dim,
    }
}

/// Translate a K(𝔤) vector (Λ²V*⊗𝔤 coordinates) into tensor coordinates
/// `pair * n² + row * n + col`.
pub fn k_to_tensor_coords<S: Scalar>(rep: &Rep<S>, v: &[(u32, S)]) -> SparseVec<S> {
    let n = rep.dim_v;
    let dim_g = rep.dim_g();
    let mut out: Vec<(u32, S)> = Vec::new();
    for (coord, s) in v {
        let p = *coord as usize / dim_g;
        let i = *coord as usize % dim_g;
        for (r, c, val) in rep.gens[i].entries() {
            out.push(((p * n * n + r * n + c) as u32, s.clone().mul(val)));
        }
    }
    crate::subspace::normalize_sparse(out)
}

/// A subspace of K in tensor coordinates.
pub fn k_tensor_subspace<S: Scalar>(rep: &Rep<S>, k: &Subspace<S>) -> Subspace<S> {
    let n = rep.dim_v;
    let pairs = AltIndex::new(n, 2);
    let vecs: Vec<SparseVec<S>> = k
        .basis
        .iter()
        .map(|v| k_to_tensor_coords(rep, v))
        .collect();
    Subspace::from_spanning(pairs.dim() * n * n, &vecs)
}

/// Intersect `sub` with the kernel of `m` by stacking `m`·basis columns.
fn intersect_with_kernel<S: Scalar>(sub: &Subspace<S>, m: &SparseMat<S>) -> Subspace<S> {
    let columns: Vec<SparseVec<S>> = sub
        .basis
        .iter()
        .map(|v| m.apply_sparse(v))
        .collect();
    let stacked = SparseMat::from_columns(m.rows, &columns);
    let combos = stacked.kernel();
    let vecs: Vec<SparseVec<S>> = combos
        .iter()
        .map(|combo| {
            let mut acc: Vec<(u32, S)> = Vec::new();
            for (ci, s) in combo {
                for (coord, v) in &sub.basis[*ci as usize] {
                    acc.push((*coord, v.clone().mul(s)));
                }
            }
            crate::subspace::normalize_sparse(acc)
        })
        .collect();
    Subspace::from_spanning(sub.ambient, &vecs)
}

/// Expand a pair-space operator to tensor coordinates (⊗ identity on the
/// remaining covector/vector slots).
fn expand_pair_operator<S: Scalar>(op: &SparseMat<S>, n: usize) -> SparseMat<S> {
    let block = n * n;
    let mut m = SparseMat::new(op.rows * block, op.cols * block);
    for (pr, row) in op.row_data.iter().enumerate() {
        for (pc, v) in row {
            for t in 0..block {
                m.push(pr * block + t, *pc as usize * block + t, v.clone());
            }
        }
    }
    m.finalize();
    m
}

fn shift_by_identity<S: Scalar>(m: &SparseMat<S>, sign: i64) -> SparseMat<S> {
    let mut out = m.clone();
    for r in 0..m.rows {
        out.push(r, r, S::from_i64(sign));
    }
    out.finalize();
    out
}

/// Split K(𝔤) of a complex-linear algebra into the eigenspace pieces:
/// K₂ is the +1 part of the θ-twist k ↦ k(J·, J·); the −1 part splits under
/// τ(k) = J⁻¹k(J·, ·) into K₁ (+1) and K₃ (−1). Returned in tensor
/// coordinates.
pub fn complex_split<S: Scalar>(rep: &Rep<S>, k: &Subspace<S>) -> Result<ComplexSplit<S>, RepError> {
    let j = rep
        .j
        .as_ref()
        .ok_or_else(|| RepError::MissingComplexStructure(rep.name.clone()))?;
    let n = rep.dim_v;
    let kt = k_tensor_subspace(rep, k);
    let theta = expand_pair_operator(&theta2_matrix(j), n);
    let tau = tau_matrix(j);
    let k2 = intersect_with_kernel(&kt, &shift_by_identity(&theta, -1));
    let minus = intersect_with_kernel(&kt, &shift_by_identity(&theta, 1));
    let k1 = intersect_with_kernel(&minus, &shift_by_identity(&tau, -1));
    let k3 = intersect_with_kernel(&minus, &shift_by_identity(&tau, 1));
    assert_eq!(
        k1.dim() + k2.dim() + k3.dim(),
        k.dim(),
        "eigenspace split must exhaust K ({})",
        rep.name
    );
    Ok(ComplexSplit { k1, k2, k3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{co_pq, gl_n, parse_spec, sl_n, so_pq, sp_2n, u_pq};
    use crate::matrix::naive_kernel;
    use crate::scalar::Rat;

    #[test]
    fn curvature_of_rotation_algebras() {
        // dim K(so(n)) = n²(n²−1)/12
        for (n, expect) in [(3usize, 6usize), (4, 20), (5, 50)] {
            let rep = so_pq::<Rat>(n, 0);
            let k = Subspace::kernel_of(&boundary_k(&rep));
            assert_eq!(k.dim(), expect, "so({n})");
        }
    }

    #[test]
    fn kernel_matches_naive_oracle() {
        let rep = so_pq::<Rat>(3, 0);
        let bk = boundary_k(&rep);
        let dense = naive_kernel(&bk.to_dense());
        assert_eq!(dense.len(), 6);
    }

    #[test]
    fn prolongation_dims() {
        assert_eq!(prolong(&so_pq::<Rat>(3, 0)).dim(), 0);
        assert_eq!(prolong(&so_pq::<Rat>(4, 0)).dim(), 0);
        assert_eq!(prolong(&co_pq(3, 0)).dim(), 3);
        assert_eq!(prolong(&co_pq(4, 0)).dim(), 4);
        assert_eq!(prolong(&sp_2n::<Rat>(4)).dim(), 20);
        assert_eq!(prolong(&gl_n::<Rat>(3)).dim(), 18);
    }

    #[test]
    fn prolongation_formulations_agree() {
        for rep in [
            so_pq::<Rat>(3, 0),
            co_pq(3, 0),
            sl_n::<Rat>(2),
            sp_2n::<Rat>(4),
        ] {
            let by_kernel = prolong(&rep);
            let in_gl: Vec<_> = by_kernel
                .basis
                .iter()
                .map(|v| g1_to_gl_coords(&rep, v))
                .collect();
            let n = rep.dim_v;
            let transported = Subspace::from_spanning(n * n * n, &in_gl);
            assert_eq!(transported, prolong_by_intersection(&rep), "{}", rep.name);
        }
    }

    #[test]
    fn boundary_composition_vanishes() {
        for rep in [co_pq(3, 0), sp_2n::<Rat>(4), gl_n::<Rat>(3)] {
            let g1 = prolong(&rep);
            let b1 = boundary_1(&rep, &g1);
            let bk = boundary_k(&rep);
            for col in b1.transpose().row_data {
                assert!(bk.apply_sparse(&col).is_empty(), "{}", rep.name);
            }
        }
    }

    #[test]
    fn second_prolongations() {
        let sp4 = sp_2n::<Rat>(4);
        let g1 = prolong(&sp4);
        assert_eq!(prolong2(&sp4, &g1).dim(), 35); // ⊙⁴(ℝ⁴)*
        let co3 = co_pq(3, 0);
        let g1 = prolong(&co3);
        assert_eq!(prolong2(&co3, &g1).dim(), 0); // conformal: finite type 2
    }

    #[test]
    fn spencer_modules_bundle() {
        let m = spencer_modules(&so_pq::<Rat>(4, 0));
        assert_eq!(m.k.dim(), 20);
        assert_eq!(m.dk_image.dim(), 0);
        assert_eq!(m.h12_dim, 20);

        let trivial = Rep::<Rat>::new("trivial", 3, vec![]);
        let m = spencer_modules(&trivial);
        assert_eq!(m.g1.dim(), 0);
        assert_eq!(m.k.dim(), 0);
        assert_eq!(m.h12_dim, 0);
    }

    #[test]
    fn quadric_curvature_is_fully_exact() {
        // gl(3,ℝ) on ⊙²ℝ³: the whole curvature module is a boundary image.
        let rep = parse_spec("gl(3,R)@sym2").unwrap().realified();
        let m = spencer_modules(&rep);
        assert!(m.k.dim() > 0);
        assert_eq!(m.h12_dim, 0);
    }

    #[test]
    fn complex_split_eigenpieces() {
        // Realified sl(2,ℂ): no anti-invariant piece.
        let sl2c = parse_spec("sl(2,C)").unwrap().realified();
        let k = Subspace::kernel_of(&boundary_k(&sl2c));
        let split = complex_split(&sl2c, &k).unwrap();
        assert_eq!(split.k3.dim(), 0);
        let k_real = Subspace::kernel_of(&boundary_k(&sl_n::<Rat>(2)));
        assert_eq!(split.k1.dim(), 2 * k_real.dim());

        // u(2): the holomorphic piece vanishes.
        let u2 = u_pq(2, 0);
        let k = Subspace::kernel_of(&boundary_k(&u2));
        let split = complex_split(&u2, &k).unwrap();
        assert_eq!(split.k1.dim(), 0);
        assert_eq!(split.k3.dim(), 0);
        assert!(split.k2.dim() > 0);

        // Realified so(3,ℂ) and so(4,ℂ): K₂ = 0, K₁ complexifies the real form.
        for (n, real_dim) in [(3usize, 6usize), (4, 20)] {
            let rep = parse_spec(&format!("so({n},C)")).unwrap().realified();
            let k = Subspace::kernel_of(&boundary_k(&rep));
            let split = complex_split(&rep, &k).unwrap();
            assert_eq!(split.k2.dim(), 0, "so({n},C)");
            assert_eq!(split.k3.dim(), 0, "so({n},C)");
            assert_eq!(split.k1.dim(), 2 * real_dim, "so({n},C)");
        }
    }

    #[test]
    fn split_requires_complex_structure() {
        let rep = so_pq::<Rat>(3, 0);
        let k = Subspace::kernel_of(&boundary_k(&rep));
        assert!(complex_split(&rep, &k).is_err());
    }
}
