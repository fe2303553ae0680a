//! Minimal Segre structures: product algebras acting on a tensor product
//! whose second factor is a plane (or a quaternionic line), and the
//! machinery showing that Ricci-flat formal curvature cannot touch the
//! plane factor.
//!
//! The family has three real forms, each acting on W ⊗ U with U minimal:
//!
//! * `R + sl(m,R) + sl(2,R)` on ℝ^m ⊗ ℝ² ≅ ℝ^{2m},
//! * `sp(1) + sp(n)` on ℍⁿ ≅ ℝ^{4n} (the quaternionic line has no extra
//!   center: `sp(1)` is already the unit imaginary multiplications),
//! * `sl(m,C) + sl(2,C)` on the realification of ℂ^m ⊗ ℂ² ≅ ℝ^{4m}.
//!
//! In the last two forms the plane factor carries a quaternion triple
//! J₁, J₂, J₃ with J_αJ_β = −δ_{αβ}Id + ε_{αβγ}J_γ, and every curvature
//! value decomposes as
//!
//! ```text
//!     k(x, y) = k′(x, y) + Σ_α Ω^α(x, y) · J_α
//! ```
//!
//! with k′ valued in the non-plane factor and Ω^α complex-valued 2-forms
//! (real-valued when no complex structure is present). Because every
//! algebra element is trace-free while Tr(J_α ∘ J_β) = −dim V · δ_{αβ},
//! the components are recovered by real traces:
//!
//! ```text
//!     Ω^{α′}(x, y) = −Tr(k(x, y) ∘ J_α)  / dim V
//!     Ω^{α″}(x, y) = +Tr(k(x, y) ∘ iJ_α) / dim V
//! ```
//!
//! The headline fact verified here ([`segre_kernel_containment`]) is that
//! for the admissible sizes (big factor of rank ≥ 3, quaternionic rank
//! ≥ 2) every formal curvature with vanishing Ricci trace has Ω^α = 0,
//! i.e. the Ricci kernel of K(𝔤) lies inside Λ²V* ⊗ (non-plane factor).
//! Undersized instances genuinely escape the containment and are kept as
//! negative controls.
//!
//! Complex-valued 2-forms are stored as a pair of real matrices
//! ([`ComplexForm`]). Two projections act on them: the i-linearity
//! projection [`tilde_op`], F ↦ ½(F(X,Y) − iF(X,iY)), and the hermitian
//! average [`hat_op`], F ↦ ¼(F(X,Y) + Σ_k F(J_kX, J_kY)). The *averaging*
//! sign in the hat is forced: the twists T_k(F) = F(J_k·, J_k·) satisfy
//! T_kT_l = T_m as a Klein four-group, so ¼(1 + ΣT_k) is the idempotent
//! isotype projector while the alternating combination ¼(1 − ΣT_k)
//! squares to ¼·Id and is no projection at all (see the module tests).
//!
//! Curvature vectors use the same coordinates as [`crate::spencer`] and
//! [`crate::ricci`]: coordinate `pair · dim 𝔤 + i` is the coefficient of
//! generator `i` at the antisymmetric pair `pair`.

use crate::catalog;
use crate::matrix::{Mat, SpanReducer};
use crate::rep::{tensor_product, unflatten, Rep};
use crate::ricci::ricci_matrix;
use crate::scalar::{Rat, Scalar};
use crate::spencer::boundary_k;
use crate::subspace::{SparseVec, Subspace};
use crate::tensor::AltIndex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SegreError {
    #[error("representation `{0}` carries no quaternion triple")]
    MissingQuaternionTriple(String),
    #[error("representation `{0}` has no registered factor named `{1}`")]
    MissingFactor(String, String),
    #[error("the registered triple on `{0}` fails the quaternion identities")]
    BadTriple(String),
    #[error(
        "Ricci-flat curvature escapes `{factor}`: kernel vector {kernel_index} \
         has a value outside the factor at the pair ({x},{y})"
    )]
    KernelEscapesFactor {
        factor: String,
        kernel_index: usize,
        x: usize,
        y: usize,
    },
}

// ---------------------------------------------------------------------------
// Complex-valued 2-forms and their projections
// ---------------------------------------------------------------------------

/// A complex-valued real-bilinear form on V, stored as value matrices:
/// `F(e_x, e_y) = re[x][y] + i·im[x][y]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexForm<S: Scalar> {
    pub re: Mat<S>,
    pub im: Mat<S>,
}

impl<S: Scalar> ComplexForm<S> {
    pub fn zeros(n: usize) -> Self {
        ComplexForm {
            re: Mat::zeros(n, n),
            im: Mat::zeros(n, n),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexForm {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexForm {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        ComplexForm {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }

    /// Multiplication of the values by i: (re, im) ↦ (−im, re).
    pub fn times_i(&self) -> Self {
        ComplexForm {
            re: self.im.neg(),
            im: self.re.clone(),
        }
    }

    /// The argument-swapped form F(Y, X).
    pub fn swap(&self) -> Self {
        ComplexForm {
            re: self.re.transpose(),
            im: self.im.transpose(),
        }
    }

    /// F(A·, B·): twist both inputs by real matrices.
    pub fn twist(&self, a: &Mat<S>, b: &Mat<S>) -> Self {
        let at = a.transpose();
        ComplexForm {
            re: at.matmul(&self.re).matmul(b),
            im: at.matmul(&self.im).matmul(b),
        }
    }

    /// F(·, B·): twist the second input only.
    pub fn twist_second(&self, b: &Mat<S>) -> Self {
        ComplexForm {
            re: self.re.matmul(b),
            im: self.im.matmul(b),
        }
    }

    pub fn is_skew(&self) -> bool {
        self.re.add(&self.re.transpose()).is_zero() && self.im.add(&self.im.transpose()).is_zero()
    }
}

/// The i-linearity projection F ↦ ½(F(X,Y) − iF(X,iY)); `j` is the matrix
/// of multiplication by i on the realified V. Idempotent, and the identity
/// exactly on forms that are already i-linear in their second input.
pub fn tilde_op<S: Scalar>(j: &Mat<S>, f: &ComplexForm<S>) -> ComplexForm<S> {
    let half = S::from_ratio(1, 2);
    let twisted = f.twist_second(j).times_i();
    f.sub(&twisted).scale(&half)
}

/// The hermitian average F ↦ ¼(F(X,Y) + Σ_k F(J_kX, J_kY)) over a
/// quaternion triple: the projection onto forms invariant under all three
/// J-twists. (The alternating combination with a minus sign squares to
/// ¼·Id instead of itself, so this averaging sign is the projection.)
pub fn hat_op<S: Scalar>(js: &[Mat<S>; 3], f: &ComplexForm<S>) -> ComplexForm<S> {
    let quarter = S::from_ratio(1, 4);
    let mut acc = f.clone();
    for j in js {
        acc = acc.add(&f.twist(j, j));
    }
    acc.scale(&quarter)
}

/// The i-symmetric part of F: the component with F(iX, Y) = F(X, iY),
/// computed as ½(F − F(i·, i·)).
pub fn i_symmetric_part<S: Scalar>(j: &Mat<S>, f: &ComplexForm<S>) -> ComplexForm<S> {
    let half = S::from_ratio(1, 2);
    f.sub(&f.twist(j, j)).scale(&half)
}

/// The i-hermitian part of F: the component with F(iX, Y) = −F(X, iY),
/// computed as ½(F + F(i·, i·)).
pub fn i_hermitian_part<S: Scalar>(j: &Mat<S>, f: &ComplexForm<S>) -> ComplexForm<S> {
    let half = S::from_ratio(1, 2);
    f.add(&f.twist(j, j)).scale(&half)
}

/// The alternating part ½(F(X,Y) − F(Y,X)).
pub fn skew_part<S: Scalar>(f: &ComplexForm<S>) -> ComplexForm<S> {
    let half = S::from_ratio(1, 2);
    f.sub(&f.swap()).scale(&half)
}

// ---------------------------------------------------------------------------
// Ω-component extraction
// ---------------------------------------------------------------------------

/// The three complex-valued 2-forms carried by a curvature tensor on the
/// plane factor, together with the big-factor size m (dim V = 4m).
///
/// Reconstruction invariant: `k − Σ_α (Ω^{α′}·J_α + Ω^{α″}·iJ_α)` is valued
/// in the non-plane factor, and re-extracting from the subtracted part
/// reproduces the triple exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaTriple<S: Scalar> {
    /// Real parts Ω^{α′}.
    pub re: [Mat<S>; 3],
    /// Imaginary parts Ω^{α″}; zero when V carries no complex structure.
    pub im: [Mat<S>; 3],
    /// Big-factor size: dim V = 4m.
    pub m: usize,
}

impl<S: Scalar> OmegaTriple<S> {
    pub fn is_zero(&self) -> bool {
        self.re.iter().all(Mat::is_zero) && self.im.iter().all(Mat::is_zero)
    }

    pub fn form(&self, alpha: usize) -> ComplexForm<S> {
        ComplexForm {
            re: self.re[alpha].clone(),
            im: self.im[alpha].clone(),
        }
    }

    /// The plane-factor component Σ_α (Ω^{α′}(x,y)·J_α + Ω^{α″}(x,y)·iJ_α)
    /// of the curvature value at (e_x, e_y), as an explicit matrix.
    pub fn plane_value(&self, rep: &Rep<S>, x: usize, y: usize) -> Mat<S> {
        let js = rep
            .quat
            .as_ref()
            .expect("plane_value needs the rep's quaternion triple");
        let n = rep.dim_v;
        let mut out = Mat::zeros(n, n);
        for alpha in 0..3 {
            out = out.add(&js[alpha].scale(self.re[alpha].get(x, y)));
            if let Some(j) = &rep.j {
                let ij = j.matmul(&js[alpha]);
                out = out.add(&ij.scale(self.im[alpha].get(x, y)));
            }
        }
        out
    }

    /// The contracted form Σ_α Ω^α(·, J_α·), the combination whose
    /// vanishing characterises Ricci-flat curvature in this family.
    pub fn contracted(&self, rep: &Rep<S>) -> ComplexForm<S> {
        let js = rep
            .quat
            .as_ref()
            .expect("contracted needs the rep's quaternion triple");
        let mut acc = ComplexForm::zeros(rep.dim_v);
        for alpha in 0..3 {
            acc = acc.add(&self.form(alpha).twist_second(&js[alpha]));
        }
        acc
    }
}

/// tr(a · b) without forming the product.
fn trace_product<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> S {
    let mut acc = S::zero();
    for r in 0..a.rows {
        for c in 0..a.cols {
            let x = a.get(r, c);
            if !x.is_zero() {
                acc = acc.add(&x.mul(b.get(c, r)));
            }
        }
    }
    acc
}

/// The value matrices of a curvature vector at every antisymmetric pair,
/// indexed like [`AltIndex::new(n, 2)`].
fn pair_values<S: Scalar>(rep: &Rep<S>, k: &[(u32, S)]) -> Vec<Mat<S>> {
    let n = rep.dim_v;
    let dim_g = rep.dim_g();
    let pairs = AltIndex::new(n, 2);
    let mut vals = vec![Mat::zeros(n, n); pairs.dim()];
    for (coord, c) in k {
        let pair = *coord as usize / dim_g;
        let gen = &rep.gens[*coord as usize % dim_g];
        vals[pair] = vals[pair].add(&gen.scale(c));
    }
    vals
}

/// Extract the complex 2-form Ω^α (α ∈ {0,1,2}) from a curvature vector in
/// Λ²V*⊗𝔤 coordinates, by real traces against J_α and iJ_α with divisor
/// dim V = −Tr(J_α²). The imaginary part is zero when the representation
/// carries no complex structure.
pub fn omega_extract<S: Scalar>(
    rep: &Rep<S>,
    k: &[(u32, S)],
    alpha: usize,
) -> Result<ComplexForm<S>, SegreError> {
    let triple = omega_triple(rep, k)?;
    Ok(triple.form(alpha))
}

/// Extract all three Ω-forms at once.
pub fn omega_triple<S: Scalar>(rep: &Rep<S>, k: &[(u32, S)]) -> Result<OmegaTriple<S>, SegreError> {
    let js = rep
        .quat
        .as_ref()
        .ok_or_else(|| SegreError::MissingQuaternionTriple(rep.name.clone()))?;
    let n = rep.dim_v;
    assert_eq!(n % 4, 0, "a quaternion triple needs dim V divisible by 4");
    let div = S::from_i64(n as i64);
    let ijs: Option<Vec<Mat<S>>> = rep
        .j
        .as_ref()
        .map(|j| js.iter().map(|ja| j.matmul(ja)).collect());
    let pairs = AltIndex::new(n, 2);
    let vals = pair_values(rep, k);
    let mut re = [Mat::zeros(n, n), Mat::zeros(n, n), Mat::zeros(n, n)];
    let mut im = [Mat::zeros(n, n), Mat::zeros(n, n), Mat::zeros(n, n)];
    for (p, xy) in pairs.tuples.iter().enumerate() {
        let (x, y) = (xy[0] as usize, xy[1] as usize);
        if vals[p].is_zero() {
            continue;
        }
        for alpha in 0..3 {
            let r = trace_product(&vals[p], &js[alpha]).div(&div).neg();
            if !r.is_zero() {
                re[alpha].set(x, y, r.clone());
                re[alpha].set(y, x, r.neg());
            }
            if let Some(ijs) = &ijs {
                let s = trace_product(&vals[p], &ijs[alpha]).div(&div);
                if !s.is_zero() {
                    im[alpha].set(x, y, s.clone());
                    im[alpha].set(y, x, s.neg());
                }
            }
        }
    }
    Ok(OmegaTriple { re, im, m: n / 4 })
}

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

/// A minimal Segre representation together with the positions of its two
/// sides in `rep.factor_spans`: the factors Ricci-flat curvature is allowed
/// to take values in, and the plane factor it must avoid. Factors are
/// addressed by index because names can repeat (both factors of the m = 2
/// complex instance are called `sl(2,C)`).
pub struct SegreInstance<S: Scalar> {
    pub rep: Rep<S>,
    /// Indices into `rep.factor_spans` of the factors Ricci-flat curvature
    /// may be valued in (the big factor, plus the center when present).
    pub allowed: Vec<usize>,
    /// Index of the plane factor.
    pub plane: usize,
    /// Whether the containment theorem applies: the big factor needs rank
    /// ≥ 3 (quaternionic rank ≥ 2). Undersized instances are exposed as
    /// negative controls and genuinely escape the containment.
    pub meets_size_bound: bool,
}

impl<S: Scalar> SegreInstance<S> {
    /// The allowed factors' names joined with `+`.
    pub fn allowed_name(&self) -> String {
        self.allowed
            .iter()
            .map(|&i| self.rep.factor_spans[i].0.as_str())
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn plane_name(&self) -> &str {
        &self.rep.factor_spans[self.plane].0
    }

    /// Union of the allowed factors as a subspace of gl(V).
    pub fn allowed_span(&self) -> Subspace<S> {
        let mut it = self.allowed.iter().map(|&i| &self.rep.factor_spans[i].1);
        let first = it.next().expect("at least one allowed factor").clone();
        it.fold(first, |acc, s| acc.sum(s))
    }

    pub fn plane_span(&self) -> &Subspace<S> {
        &self.rep.factor_spans[self.plane].1
    }
}

/// `sl(m,R) + sl(2,R) + center` acting on ℝ^m ⊗ ℝ² ≅ ℝ^{2m}. No quaternion
/// triple exists over ℝ, so this form participates in the kernel
/// containment only; its allowed side includes the scaling center.
pub fn real_instance(m: usize) -> SegreInstance<Rat> {
    let rep = tensor_product(&catalog::sl_n::<Rat>(m), &catalog::sl_n::<Rat>(2), true);
    SegreInstance {
        rep,
        allowed: vec![0, 2],
        plane: 1,
        meets_size_bound: m >= 3,
    }
}

/// `sp(n) + sp(1)` acting on ℍⁿ ≅ ℝ^{4n}: the quaternion-linear skew
/// matrices plus the right multiplications by unit imaginary quaternions.
pub fn quaternionic_instance(n: usize) -> SegreInstance<Rat> {
    let rep = catalog::sp1_product(&catalog::sp_pq(n, 0))
        .expect("sp(p,q) carries a quaternionic structure");
    SegreInstance {
        rep,
        allowed: vec![0],
        plane: 1,
        meets_size_bound: n >= 2,
    }
}

/// Realified `sl(m,C) + sl(2,C)` acting on ℂ^m ⊗ ℂ² ≅ ℝ^{4m}, with the
/// quaternion triple on the plane factor generated by diag(i,−i),
/// [[0,1],[−1,0]] and [[0,i],[i,0]].
pub fn complex_instance(m: usize) -> SegreInstance<Rat> {
    let rep = catalog::segre_complex(m);
    SegreInstance {
        rep,
        allowed: vec![0],
        plane: 1,
        meets_size_bound: m >= 3,
    }
}

// ---------------------------------------------------------------------------
// Kernel containment
// ---------------------------------------------------------------------------

/// Dimensions witnessing that the Ricci kernel of K(𝔤) stays inside
/// Λ²V* ⊗ (allowed factor).
#[derive(Clone, Debug, PartialEq)]
pub struct KernelContainment {
    pub algebra: String,
    pub factor: String,
    pub dim_k: usize,
    /// Dimension of N = ker(Ricci trace) ∩ K(𝔤).
    pub dim_ricci_kernel: usize,
    /// Dimension of K(allowed factor) — the curvature module of the factor
    /// alone, an upper bound for the kernel that is attained exactly when
    /// every factor-valued curvature is Ricci-flat.
    pub dim_factor_curvature: usize,
    pub pairs_checked: usize,
}

/// K(𝔤) together with its Ricci-flat part N = ker(Ricci) ∩ K(𝔤), both as
/// subspaces of Λ²V*⊗𝔤 in curvature coordinates.
pub fn ricci_flat_curvatures<S: Scalar>(rep: &Rep<S>) -> (Subspace<S>, Subspace<S>) {
    let k = Subspace::kernel_of(&boundary_k(rep));
    let kernel_coeffs = ricci_matrix(rep, &k).kernel();
    let lifted: Vec<SparseVec<S>> = kernel_coeffs
        .iter()
        .map(|kv| {
            let mut dense = vec![S::zero(); k.ambient];
            for (idx, c) in kv {
                for (coord, v) in &k.basis[*idx as usize] {
                    let cell = &mut dense[*coord as usize];
                    *cell = cell.add(&c.mul(v));
                }
            }
            dense
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i as u32, v))
                .collect()
        })
        .collect();
    let ambient = k.ambient;
    (k, Subspace::from_spanning(ambient, &lifted))
}

/// Compute N = ker(Ricci) ∩ K(𝔤) and verify that every element takes all
/// its values inside the instance's allowed factors. Containment is
/// guaranteed by the classification only when `meets_size_bound` holds;
/// undersized instances report the escaping kernel vector as an error.
pub fn segre_kernel_containment<S: Scalar>(
    inst: &SegreInstance<S>,
) -> Result<KernelContainment, SegreError> {
    let rep = &inst.rep;
    let n = rep.dim_v;
    let dim_g = rep.dim_g();
    for &i in inst.allowed.iter().chain([&inst.plane]) {
        if i >= rep.factor_spans.len() {
            return Err(SegreError::MissingFactor(rep.name.clone(), format!("#{i}")));
        }
    }
    let fname = inst.allowed_name();
    let fspan = inst.allowed_span();

    let (k, flat) = ricci_flat_curvatures(rep);

    // The allowed factors' coefficient span inside 𝔤 (over rep.gens).
    let mut gen_reducer = SpanReducer::new(n * n);
    for g in &rep.gens {
        gen_reducer.insert(&g.to_sparse_vec());
    }
    let h_coeff_vecs: Vec<SparseVec<S>> = fspan
        .basis
        .iter()
        .map(|b| {
            gen_reducer
                .coefficients(b)
                .expect("factor spans must lie inside the algebra")
        })
        .collect();
    let h_coeff = Subspace::from_spanning(dim_g, &h_coeff_vecs);

    let pairs = AltIndex::new(n, 2);
    let mut pairs_checked = 0usize;
    for (kernel_index, kv) in flat.basis.iter().enumerate() {
        let mut dense = vec![S::zero(); pairs.dim() * dim_g];
        for (coord, v) in kv {
            dense[*coord as usize] = v.clone();
        }
        for (p, xy) in pairs.tuples.iter().enumerate() {
            let slice: SparseVec<S> = dense[p * dim_g..(p + 1) * dim_g]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i as u32, v.clone()))
                .collect();
            pairs_checked += 1;
            if !h_coeff.contains_vec(&slice) {
                return Err(SegreError::KernelEscapesFactor {
                    factor: fname.clone(),
                    kernel_index,
                    x: xy[0] as usize,
                    y: xy[1] as usize,
                });
            }
        }
    }

    // The allowed factors' own curvature module, as a reference dimension.
    let h_rep = Rep::new(
        &format!("{}[{}]", rep.name, fname),
        n,
        fspan.basis.iter().map(|b| unflatten(n, b)).collect(),
    );
    let dim_factor_curvature = Subspace::kernel_of(&boundary_k(&h_rep)).dim();

    Ok(KernelContainment {
        algebra: rep.name.clone(),
        factor: fname,
        dim_k: k.dim(),
        dim_ricci_kernel: flat.dim(),
        dim_factor_curvature,
        pairs_checked,
    })
}
