//! Constructors for the built-in algebra catalog and the textual algebra
//! mini-language used by the command-line tool and the examples.
//!
//! Conventions:
//! * real classical families are built from explicit integer bases;
//! * complex families live over ℚ(i) and are realified on demand;
//! * quaternionic families act on ℝ⁴ⁿ with the right-multiplication triple
//!   from `tensor` registered, and consist of matrices commuting with it;
//! * the exceptional families g₂, split-g₂, spin(7) and spin(4,3) arise as
//!   stabilizers of the 3- and 4-forms carried by the (split) octonions;
//! * symplectic metrics interleave: ω = e₀∧e₁ + e₂∧e₃ + ⋯.

use crate::matrix::{kron, Mat, SparseMat};
use crate::rep::{
    alt_power_rep, rep_from_subspace, stabilizer_of_tensor, sym_power_rep, tensor_product, AnyRep,
    CovTensor, Rep, RepError, RepFile,
};
use crate::scalar::{GaussRat, Rat, Scalar};
use crate::subspace::Subspace;
use crate::tensor::{quat_triple, realify_mat, std_j};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot parse algebra spec: {0}")]
    Parse(String),
    #[error("cannot mix real and complex factors in `{0}`")]
    MixedFields(String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

fn eta_diag(p: usize, q: usize) -> Vec<i64> {
    let mut d = vec![1i64; p];
    d.extend(std::iter::repeat(-1i64).take(q));
    d
}

fn diag_mat<S: Scalar>(diag: &[i64]) -> Mat<S> {
    Mat::from_fn(diag.len(), diag.len(), |r, c| {
        if r == c {
            S::from_i64(diag[r])
        } else {
            S::zero()
        }
    })
}

/// Elementary matrix E_{rc}.
fn unit_mat<S: Scalar>(n: usize, r: usize, c: usize) -> Mat<S> {
    let mut m = Mat::zeros(n, n);
    m.set(r, c, S::one());
    m
}

/// Real 2n×2n block matrix [[A, −B], [B, A]], the realification of A + iB.
fn block_realify(a: &Mat<Rat>, b: &Mat<Rat>) -> Mat<Rat> {
    let n = a.rows;
    Mat::from_fn(2 * n, 2 * n, |r, c| {
        let (br, rr) = (r / n, r % n);
        let (bc, cc) = (c / n, c % n);
        match (br, bc) {
            (0, 0) | (1, 1) => a.get(rr, cc).clone(),
            (0, 1) => Rat::zero().sub(b.get(rr, cc)),
            _ => b.get(rr, cc).clone(),
        }
    })
}

/// The Levi-Civita volume form on ℝⁿ (or ℂⁿ) as a covariant n-tensor.
fn volume_form<S: Scalar>(n: usize, up_to_scale: bool) -> CovTensor<S> {
    let base: Vec<u16> = (0..n as u16).collect();
    let mut t = CovTensor::from_alt("volume", n, &[(base, S::one())]);
    t.up_to_scale = up_to_scale;
    t
}

/// Interleaved symplectic gram on ℝ²ⁿ: ω(e_{2i}, e_{2i+1}) = 1.
pub fn symplectic_gram<S: Scalar>(two_n: usize) -> Mat<S> {
    assert!(two_n % 2 == 0, "symplectic space must be even-dimensional");
    let mut g = Mat::zeros(two_n, two_n);
    for i in 0..two_n / 2 {
        g.set(2 * i, 2 * i + 1, S::one());
        g.set(2 * i + 1, 2 * i, S::zero().sub(&S::one()));
    }
    g
}

/// All bilinear forms G with Xᵀ G + G X = 0 for every generator, i.e. the
/// space of invariant bilinear forms on V.
pub fn invariant_bilinear_forms<S: Scalar>(rep: &Rep<S>) -> Vec<Mat<S>> {
    let n = rep.dim_v;
    let mut rows = SparseMat::new(rep.dim_g() * n * n, n * n);
    for (gi, x) in rep.gens.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                let row = (gi * n + r) * n + c;
                for k in 0..n {
                    // (XᵀG)_{rc} = Σ_k X_{kr} G_{kc}
                    rows.push(row, k * n + c, x.get(k, r).clone());
                    // (GX)_{rc} = Σ_k G_{rk} X_{kc}
                    rows.push(row, r * n + k, x.get(k, c).clone());
                }
            }
        }
    }
    rows.finalize();
    Subspace::kernel_of(&rows)
        .basis
        .iter()
        .map(|v| crate::rep::unflatten(n, v))
        .collect()
}

/// Rows expressing [X, J] = 0 for an unknown X ∈ gl(N), stacked for each J.
fn commutant_rows<S: Scalar>(js: &[&Mat<S>]) -> SparseMat<S> {
    let n = js[0].rows;
    let mut rows = SparseMat::new(js.len() * n * n, n * n);
    for (ji, j) in js.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                let row = (ji * n + r) * n + c;
                for k in 0..n {
                    rows.push(row, r * n + k, j.get(k, c).clone());
                    rows.push(row, k * n + c, S::zero().sub(j.get(r, k)));
                }
            }
        }
    }
    rows.finalize();
    rows
}

/// Rows expressing Xᵀ G + G X = 0 for an unknown X and a fixed gram G.
fn metric_rows<S: Scalar>(g: &Mat<S>) -> SparseMat<S> {
    let n = g.rows;
    let mut rows = SparseMat::new(n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            let row = r * n + c;
            for k in 0..n {
                // (XᵀG)_{rc} = Σ_k X_{kr} G_{kc};  (GX)_{rc} = Σ_k G_{rk} X_{kc}
                rows.push(row, k * n + r, g.get(k, c).clone());
                rows.push(row, k * n + c, g.get(r, k).clone());
            }
        }
    }
    rows.finalize();
    rows
}

// ---------------------------------------------------------------------------
// Orthogonal / special linear / symplectic families
// ---------------------------------------------------------------------------

/// so(p, q): matrices skew with respect to diag(+1…, −1…).
pub fn so_pq<S: Scalar>(p: usize, q: usize) -> Rep<S> {
    let n = p + q;
    let eta = eta_diag(p, q);
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            // η_j E_ij − η_i E_ji
            let mut m = Mat::zeros(n, n);
            m.set(i, j, S::from_i64(eta[j]));
            m.set(j, i, S::from_i64(-eta[i]));
            gens.push(m);
        }
    }
    let name = if q == 0 {
        if S::HAS_I {
            format!("so({n},C)")
        } else {
            format!("so({n})")
        }
    } else {
        format!("so({p},{q})")
    };
    let mut rep = Rep::new(&name, n, gens);
    rep.preserved
        .push(CovTensor::bilinear("metric", &diag_mat(&eta)));
    rep
}

pub fn so_n_c(n: usize) -> Rep<GaussRat> {
    so_pq::<GaussRat>(n, 0)
}

/// sl(n) over the scalar field (traceless matrices); gl(n) adds the center.
pub fn sl_n<S: Scalar>(n: usize) -> Rep<S> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.push(unit_mat(n, i, j));
            }
        }
    }
    for i in 0..n - 1 {
        let mut m = Mat::zeros(n, n);
        m.set(i, i, S::one());
        m.set(i + 1, i + 1, S::zero().sub(&S::one()));
        gens.push(m);
    }
    let field = if S::HAS_I { "C" } else { "R" };
    let mut rep = Rep::new(&format!("sl({n},{field})"), n, gens);
    rep.preserved.push(volume_form(n, false));
    rep
}

pub fn gl_n<S: Scalar>(n: usize) -> Rep<S> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            gens.push(unit_mat(n, i, j));
        }
    }
    let field = if S::HAS_I { "C" } else { "R" };
    let mut rep = Rep::new(&format!("gl({n},{field})"), n, gens);
    rep.preserved.push(volume_form(n, true));
    rep.has_center = true;
    rep
}

/// sp(2n) over the scalar field: stabilizer of the interleaved symplectic form.
pub fn sp_2n<S: Scalar>(two_n: usize) -> Rep<S> {
    let gram = symplectic_gram::<S>(two_n);
    let form = CovTensor::bilinear("symplectic", &gram);
    let sub = stabilizer_of_tensor(two_n, &form);
    let field = if S::HAS_I { "C" } else { "R" };
    let mut rep = rep_from_subspace(&format!("sp({two_n},{field})"), two_n, &sub);
    rep.preserved.push(form);
    rep
}

// ---------------------------------------------------------------------------
// Unitary families (built realified)
// ---------------------------------------------------------------------------

fn su_like(p: usize, q: usize, with_center: bool) -> Rep<Rat> {
    let n = p + q;
    let eta = eta_diag(p, q);
    let h = diag_mat::<Rat>(&eta);
    let mut gens = Vec::new();
    // Real part: A ∈ so(p,q).
    for a in so_pq::<Rat>(p, q).gens {
        gens.push(block_realify(&a, &Mat::zeros(n, n)));
    }
    // Imaginary part: iB with H B symmetric, tr B = 0.
    for r in 0..n {
        for c in r + 1..n {
            let mut b = Mat::zeros(n, n);
            b.set(r, c, Rat::from_i64(eta[c]));
            b.set(c, r, Rat::from_i64(eta[r]));
            gens.push(block_realify(&Mat::zeros(n, n), &b));
        }
    }
    for r in 0..n - 1 {
        let mut b = Mat::zeros(n, n);
        b.set(r, r, Rat::one());
        b.set(r + 1, r + 1, Rat::from_i64(-1));
        gens.push(block_realify(&Mat::zeros(n, n), &b));
    }
    if with_center {
        gens.push(std_j(n));
    }
    let base = if with_center { "u" } else { "su" };
    let name = if q == 0 {
        format!("{base}({n})")
    } else {
        format!("{base}({p},{q})")
    };
    let mut rep = Rep::new(&name, 2 * n, gens);
    rep.j = Some(std_j(n));
    let re_gram = Mat::from_fn(2 * n, 2 * n, |r, c| {
        let (br, rr) = (r / n, r % n);
        let (bc, cc) = (c / n, c % n);
        if br == bc {
            h.get(rr, cc).clone()
        } else {
            Rat::zero()
        }
    });
    let im_gram = Mat::from_fn(2 * n, 2 * n, |r, c| {
        let (br, rr) = (r / n, r % n);
        let (bc, cc) = (c / n, c % n);
        match (br, bc) {
            (0, 1) => h.get(rr, cc).clone(),
            (1, 0) => Rat::zero().sub(h.get(rr, cc)),
            _ => Rat::zero(),
        }
    });
    rep.preserved.push(CovTensor::bilinear("hermitian-re", &re_gram));
    rep.preserved.push(CovTensor::bilinear("hermitian-im", &im_gram));
    rep
}

pub fn su_pq(p: usize, q: usize) -> Rep<Rat> {
    su_like(p, q, false)
}

pub fn u_pq(p: usize, q: usize) -> Rep<Rat> {
    su_like(p, q, true)
}

// ---------------------------------------------------------------------------
// Quaternionic families
// ---------------------------------------------------------------------------

/// Left multiplication by i, j, k on ℍ in components (1, i, j, k).
fn left_mult_blocks() -> [Mat<Rat>; 3] {
    let li = Mat::from_i64(4, 4, &[0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0]);
    let lj = Mat::from_i64(4, 4, &[0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0]);
    let lk = Mat::from_i64(4, 4, &[0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0]);
    [li, lj, lk]
}

/// sl(n, ℍ) on ℝ⁴ⁿ: quaternion-linear matrices with vanishing real trace.
pub fn sl_n_h(n: usize) -> Rep<Rat> {
    let i4 = Mat::<Rat>::identity(4);
    let mut gens = Vec::new();
    for l in left_mult_blocks() {
        for a in 0..n {
            for b in 0..n {
                gens.push(kron(&l, &unit_mat(n, a, b)));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                gens.push(kron(&i4, &unit_mat(n, a, b)));
            }
        }
    }
    for a in 0..n - 1 {
        let mut d = Mat::zeros(n, n);
        d.set(a, a, Rat::one());
        d.set(a + 1, a + 1, Rat::from_i64(-1));
        gens.push(kron(&i4, &d));
    }
    let mut rep = Rep::new(&format!("sl({n},H)"), 4 * n, gens);
    rep.quat = Some(quat_triple(n));
    rep
}

/// sp(p, q): quaternion-linear matrices preserving the quaternionic
/// hermitian metric of signature (p, q), computed as the kernel of the
/// stacked commutant and metric equations.
pub fn sp_pq(p: usize, q: usize) -> Rep<Rat> {
    let n = p + q;
    let js = quat_triple(n);
    let eta = eta_diag(p, q);
    let mut flat_diag = vec![0i64; 4 * n];
    for blk in 0..4 {
        for t in 0..n {
            flat_diag[blk * n + t] = eta[t];
        }
    }
    let gram = diag_mat::<Rat>(&flat_diag);
    let rows = SparseMat::vstack(&[
        commutant_rows(&[&js[0]]),
        commutant_rows(&[&js[1]]),
        metric_rows(&gram),
    ]);
    let sub = Subspace::kernel_of(&rows);
    let name = if q == 0 {
        format!("sp({p})")
    } else {
        format!("sp({p},{q})")
    };
    let mut rep = rep_from_subspace(&name, 4 * n, &sub);
    rep.quat = Some(js);
    rep.preserved.push(CovTensor::bilinear("metric", &gram));
    rep
}

// ---------------------------------------------------------------------------
// Octonions and the exceptional stabilizers
// ---------------------------------------------------------------------------

/// Quaternion basis products: QMUL[a][b] = (index, sign) of q_a·q_b.
const QMUL: [[(usize, i64); 4]; 4] = [
    [(0, 1), (1, 1), (2, 1), (3, 1)],
    [(1, 1), (0, -1), (3, 1), (2, -1)],
    [(2, 1), (3, -1), (0, -1), (1, 1)],
    [(3, 1), (2, 1), (1, -1), (0, -1)],
];

/// The octonion algebra O = ℍ ⊕ ℍℓ with ℓ² = λ (λ = −1 compact, +1 split),
/// built by the doubling product (a,b)(c,d) = (ac + λ d̄ b, da + b c̄).
#[derive(Clone, Copy)]
pub struct Octonions {
    pub lambda: i64,
}

impl Octonions {
    fn conj_sign(t: usize) -> i64 {
        if t == 0 {
            1
        } else {
            -1
        }
    }

    /// Product of basis elements: e_a · e_b = sign · e_index.
    pub fn mul_basis(&self, a: usize, b: usize) -> (usize, i64) {
        match (a < 4, b < 4) {
            (true, true) => QMUL[a][b],
            (true, false) => {
                // (q_a, 0)(0, q_t) = (0, q_t q_a)
                let (i, s) = QMUL[b - 4][a];
                (i + 4, s)
            }
            (false, true) => {
                // (0, q_s)(q_b, 0) = (0, q_s q̄_b)
                let (i, s) = QMUL[a - 4][b];
                (i + 4, s * Self::conj_sign(b))
            }
            (false, false) => {
                // (0, q_s)(0, q_t) = (λ q̄_t q_s, 0)
                let (i, s) = QMUL[b - 4][a - 4];
                (i, s * Self::conj_sign(b - 4) * self.lambda)
            }
        }
    }

    /// Full product of coefficient vectors.
    pub fn mul(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); 8];
        for a in 0..8 {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..8 {
                if y[b].is_zero() {
                    continue;
                }
                let (i, s) = self.mul_basis(a, b);
                let term = x[a].mul(&y[b]).mul(&Rat::from_i64(s));
                out[i] = out[i].add(&term);
            }
        }
        out
    }

    pub fn conj(&self, x: &[Rat]) -> Vec<Rat> {
        (0..8)
            .map(|a| {
                if a == 0 {
                    x[0].clone()
                } else {
                    Rat::zero().sub(&x[a])
                }
            })
            .collect()
    }

    /// ⟨e_a, e_a⟩ from the algebra: the scalar part of e_a ē_a.
    pub fn metric_diag(&self) -> Vec<i64> {
        let mut d = vec![0i64; 8];
        for a in 0..8 {
            let (i, s) = self.mul_basis(a, a);
            assert_eq!(i, 0, "e_a · e_a must be scalar");
            d[a] = if a == 0 { s } else { -s };
        }
        assert_eq!(
            d,
            vec![
                1,
                1,
                1,
                1,
                -self.lambda,
                -self.lambda,
                -self.lambda,
                -self.lambda
            ]
        );
        d
    }

    /// The 3-form φ(a,b,c) = ⟨e_a e_b, e_c⟩ on the imaginary part
    /// (coordinates e₁…e₇ shifted down to 0…6).
    pub fn three_form(&self) -> CovTensor<Rat> {
        let g = self.metric_diag();
        let mut coeffs = std::collections::HashMap::new();
        for a in 1..8 {
            for b in 1..8 {
                for c in 1..8 {
                    let (i, s) = self.mul_basis(a, b);
                    if i == c && s * g[c] != 0 {
                        coeffs.insert(
                            vec![(a - 1) as u16, (b - 1) as u16, (c - 1) as u16],
                            Rat::from_i64(s * g[c]),
                        );
                    }
                }
            }
        }
        CovTensor {
            name: "three-form".into(),
            degree: 3,
            coeffs,
            up_to_scale: false,
        }
    }

    /// The 4-form Φ(a,b,c,d) = ⟨X(e_a,e_b,e_c), e_d⟩ with the triple cross
    /// product X(x,y,z) = ½(x(ȳz) − z(ȳx)) on all of O.
    pub fn four_form(&self) -> CovTensor<Rat> {
        let g = self.metric_diag();
        let mut coeffs = std::collections::HashMap::new();
        let half = Rat::from_ratio(1, 2);
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    // ½(x(ȳz) − z(ȳx)) with x = e_a, y = e_b, z = e_c,
                    // and ē_b = ±e_b on the basis.
                    let sb = if b == 0 { 1 } else { -1 };
                    let (i1, s1) = self.mul_basis(b, c);
                    let (i2, s2) = self.mul_basis(a, i1);
                    let (i3, s3) = self.mul_basis(b, a);
                    let (i4, s4) = self.mul_basis(c, i3);
                    let mut vals = std::collections::HashMap::new();
                    *vals.entry(i2).or_insert(0i64) += sb * s1 * s2;
                    *vals.entry(i4).or_insert(0i64) -= sb * s3 * s4;
                    for (d, v) in vals {
                        if v != 0 {
                            let entry = half.mul(&Rat::from_i64(v * g[d]));
                            if !entry.is_zero() {
                                coeffs.insert(
                                    vec![a as u16, b as u16, c as u16, d as u16],
                                    entry,
                                );
                            }
                        }
                    }
                }
            }
        }
        CovTensor {
            name: "four-form".into(),
            degree: 4,
            coeffs,
            up_to_scale: false,
        }
    }
}

/// Normalize the sign of a diagonal so positives dominate.
fn normalized_metric(diag: &[i64]) -> Vec<i64> {
    let pos = diag.iter().filter(|&&v| v > 0).count();
    let neg = diag.len() - pos;
    if neg > pos {
        diag.iter().map(|v| -v).collect()
    } else {
        diag.to_vec()
    }
}

/// g₂ (compact, λ = −1) or split-g₂ (λ = +1): stabilizer of the octonion
/// 3-form on the 7-dimensional imaginary part.
pub fn g2_family(split: bool) -> Rep<Rat> {
    let oct = Octonions {
        lambda: if split { 1 } else { -1 },
    };
    let phi = oct.three_form();
    let sub = stabilizer_of_tensor(7, &phi);
    let name = if split { "split-g2" } else { "g2" };
    let mut rep = rep_from_subspace(name, 7, &sub);
    let metric = normalized_metric(&oct.metric_diag()[1..]);
    rep.preserved.push(phi);
    rep.preserved
        .push(CovTensor::bilinear("metric", &diag_mat(&metric)));
    rep
}

/// spin(7) (λ = −1) or spin(4,3) (λ = +1): stabilizer of the octonion
/// 4-form on all of O.
pub fn spin7_family(split: bool) -> Rep<Rat> {
    let oct = Octonions {
        lambda: if split { 1 } else { -1 },
    };
    let big_phi = oct.four_form();
    let sub = stabilizer_of_tensor(8, &big_phi);
    let name = if split { "spin(4,3)" } else { "spin(7)" };
    let mut rep = rep_from_subspace(name, 8, &sub);
    let metric = normalized_metric(&oct.metric_diag());
    rep.preserved.push(big_phi);
    rep.preserved
        .push(CovTensor::bilinear("metric", &diag_mat(&metric)));
    rep
}

// ---------------------------------------------------------------------------
// Derived constructions
// ---------------------------------------------------------------------------

/// Adjoin the scaling center ℝ·Id; preserved tensors are downgraded to
/// up-to-scale invariance.
pub fn add_center<S: Scalar>(rep: &Rep<S>) -> Rep<S> {
    let mut out = rep.clone();
    if out.factor_spans.is_empty() && !out.gens.is_empty() {
        out.factor_spans.push((out.name.clone(), out.span()));
    }
    out.gens.push(Mat::identity(rep.dim_v));
    for t in &mut out.preserved {
        t.up_to_scale = true;
    }
    let id_span = Subspace::from_spanning(
        rep.gl_dim(),
        &[Mat::<S>::identity(rep.dim_v).to_sparse_vec()],
    );
    out.factor_spans.push(("center".into(), id_span));
    out.has_center = true;
    out.name = format!("{}+center", rep.name);
    out
}

/// co(p,q) = so(p,q) ⊕ ℝ·Id, the conformal orthogonal algebra.
pub fn co_pq(p: usize, q: usize) -> Rep<Rat> {
    let mut rep = add_center(&so_pq::<Rat>(p, q));
    let n = p + q;
    rep.name = if q == 0 {
        format!("co({n})")
    } else {
        format!("co({p},{q})")
    };
    rep
}

/// Adjoin the sp(1)-factor of right multiplications to a quaternionic
/// algebra, e.g. sp(1)·sp(n) acting on ℝ⁴ⁿ.
pub fn sp1_product(inner: &Rep<Rat>) -> Result<Rep<Rat>, SpecError> {
    let js = inner
        .quat
        .clone()
        .ok_or_else(|| SpecError::Parse(format!("{} has no quaternionic structure", inner.name)))?;
    let mut out = inner.clone();
    if out.factor_spans.is_empty() {
        out.factor_spans.push((out.name.clone(), out.span()));
    }
    let j_span = Subspace::from_spanning(
        inner.gl_dim(),
        &js.iter().map(|j| j.to_sparse_vec()).collect::<Vec<_>>(),
    );
    out.factor_spans.push(("sp(1)".into(), j_span));
    for j in js.iter() {
        out.gens.push(j.clone());
    }
    out.quat = Some(js);
    // Right multiplications rotate the hermitian 2-forms; only the real
    // metric survives as a strict invariant.
    out.preserved.retain(|t| {
        t.degree == 2 && {
            let g = t.gram(inner.dim_v);
            g.sub(&g.transpose()).is_zero()
        }
    });
    out.name = format!("sp(1)*{}", inner.name);
    out.check_closure()?;
    Ok(out)
}

/// The realified sl(m,ℂ) ⊕ sl(2,ℂ) action on ℂᵐ ⊗ ℂ², with the quaternion
/// triple spanning the compact part of the sl(2,ℂ)-factor registered.
pub fn segre_complex(m: usize) -> Rep<Rat> {
    let prod = tensor_product(&sl_n::<GaussRat>(m), &sl_n::<GaussRat>(2), false);
    let mut rep = prod.realify();
    let i = GaussRat::one().times_i();
    let x1 = Mat::from_fn(2, 2, |r, c| match (r, c) {
        (0, 0) => i.clone(),
        (1, 1) => GaussRat::zero().sub(&i),
        _ => GaussRat::zero(),
    });
    let x2 = Mat::from_i64(2, 2, &[0, 1, -1, 0]);
    let x3 = Mat::from_fn(2, 2, |r, c| {
        if r != c {
            i.clone()
        } else {
            GaussRat::zero()
        }
    });
    let idm = Mat::<GaussRat>::identity(m);
    let triple = [
        realify_mat(&kron(&idm, &x1)),
        realify_mat(&kron(&idm, &x2)),
        realify_mat(&kron(&idm, &x3)),
    ];
    rep.quat = Some(triple);
    rep
}

// ---------------------------------------------------------------------------
// The algebra mini-language
// ---------------------------------------------------------------------------

/// Split at top level (outside parentheses) on a separator character.
fn split_top(input: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in input.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            c if c == sep && depth == 0 => {
                parts.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    parts.push(cur);
    parts
}

fn parse_args(name: &str, text: &str) -> Result<Vec<String>, SpecError> {
    let inner = text
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| SpecError::Parse(format!("malformed arguments in `{text}`")))?;
    Ok(inner.split(',').map(|s| s.trim().to_string()).collect())
}

fn num(s: &str) -> Result<usize, SpecError> {
    s.parse::<usize>()
        .map_err(|_| SpecError::Parse(format!("expected a number, found `{s}`")))
}

fn parse_base(text: &str) -> Result<AnyRep, SpecError> {
    let text = text.trim();
    if text == "g2" {
        return Ok(AnyRep::Real(g2_family(false)));
    }
    if text == "split-g2" {
        return Ok(AnyRep::Real(g2_family(true)));
    }
    let head: String = text.chars().take_while(|c| *c != '(').collect();
    match head.as_str() {
        "spin" => {
            let args = parse_args("spin", text)?;
            match args.as_slice() {
                [a] if a == "7" => Ok(AnyRep::Real(spin7_family(false))),
                [a, b] if a == "4" && b == "3" => Ok(AnyRep::Real(spin7_family(true))),
                _ => Err(SpecError::Parse(format!(
                    "spin is available as spin(7) and spin(4,3), not `{text}`"
                ))),
            }
        }
        "so" => {
            let args = parse_args("so", text)?;
            match args.as_slice() {
                [n] => Ok(AnyRep::Real(so_pq::<Rat>(num(n)?, 0))),
                [n, f] if f.eq_ignore_ascii_case("c") => Ok(AnyRep::Complex(so_n_c(num(n)?))),
                [p, q] => Ok(AnyRep::Real(so_pq::<Rat>(num(p)?, num(q)?))),
                _ => Err(SpecError::Parse(format!("bad arguments in `{text}`"))),
            }
        }
        "co" => {
            let args = parse_args("co", text)?;
            match args.as_slice() {
                [n] => Ok(AnyRep::Real(co_pq(num(n)?, 0))),
                [p, q] => Ok(AnyRep::Real(co_pq(num(p)?, num(q)?))),
                _ => Err(SpecError::Parse(format!("bad arguments in `{text}`"))),
            }
        }
        "su" => {
            let args = parse_args("su", text)?;
            match args.as_slice() {
                [n] => Ok(AnyRep::Real(su_pq(num(n)?, 0))),
                [p, q] => Ok(AnyRep::Real(su_pq(num(p)?, num(q)?))),
                _ => Err(SpecError::Parse(format!("bad arguments in `{text}`"))),
            }
        }
        "u" => {
            let args = parse_args("u", text)?;
            match args.as_slice() {
                [n] => Ok(AnyRep::Real(u_pq(num(n)?, 0))),
                [p, q] => Ok(AnyRep::Real(u_pq(num(p)?, num(q)?))),
                _ => Err(SpecError::Parse(format!("bad arguments in `{text}`"))),
            }
        }
        "sl" | "gl" => {
            let args = parse_args(&head, text)?;
            let general = head == "gl";
            match args.as_slice() {
                [n] | [n, _] if args.len() == 1 || args[1].eq_ignore_ascii_case("r") => {
                    let n = num(n)?;
                    Ok(AnyRep::Real(if general { gl_n(n) } else { sl_n(n) }))
                }
                [n, f] if f.eq_ignore_ascii_case("c") => {
                    let n = num(n)?;
                    Ok(AnyRep::Complex(if general { gl_n(n) } else { sl_n(n) }))
                }
                [n, f] if f.eq_ignore_ascii_case("h") && !general => {
                    Ok(AnyRep::Real(sl_n_h(num(n)?)))
                }
                _ => Err(SpecError::Parse(format!("bad arguments in `{text}`"))),
            }
        }
        "sp" => {
            let args = parse_args("sp", text)?;
            match args.as_slice() {
                [n, f] if f.eq_ignore_ascii_case("r") => {
                    let n = num(n)?;
                    if n % 2 != 0 {
                        return Err(SpecError::Parse(format!(
                            "sp({n},R) needs an even dimension"
                        )));
                    }
                    Ok(AnyRep::Real(sp_2n::<Rat>(n)))
                }
                [n, f] if f.eq_ignore_ascii_case("c") => {
                    let n = num(n)?;
                    if n % 2 != 0 {
                        return Err(SpecError::Parse(format!(
                            "sp({n},C) needs an even dimension"
                        )));
                    }
                    Ok(AnyRep::Complex(sp_2n::<GaussRat>(n)))
                }
                [k] => Ok(AnyRep::Real(sp_pq(num(k)?, 0))),
                [p, q] => Ok(AnyRep::Real(sp_pq(num(p)?, num(q)?))),
                _ => Err(SpecError::Parse(format!("bad arguments in `{text}`"))),
            }
        }
        "stab" => {
            let inner = text
                .strip_prefix("stab(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| SpecError::Parse(format!("malformed `{text}`")))?;
            Ok(RepFile::load(std::path::Path::new(inner))?)
        }
        _ => Err(SpecError::Parse(format!("unknown algebra `{text}`"))),
    }
}

fn apply_modifier(rep: AnyRep, modifier: &str) -> Result<AnyRep, SpecError> {
    let (kind, k) = if let Some(rest) = modifier.strip_prefix("sym") {
        ("sym", num(rest)?)
    } else if let Some(rest) = modifier.strip_prefix("alt") {
        ("alt", num(rest)?)
    } else {
        return Err(SpecError::Parse(format!("unknown modifier `@{modifier}`")));
    };
    if k < 2 {
        return Err(SpecError::Parse(format!("power in `@{modifier}` must be ≥ 2")));
    }
    Ok(match (rep, kind) {
        (AnyRep::Real(r), "sym") => AnyRep::Real(sym_power_rep(&r, k)),
        (AnyRep::Real(r), "alt") => AnyRep::Real(alt_power_rep(&r, k)),
        (AnyRep::Complex(r), "sym") => AnyRep::Complex(sym_power_rep(&r, k)),
        (AnyRep::Complex(r), _) => AnyRep::Complex(alt_power_rep(&r, k)),
        _ => unreachable!(),
    })
}

fn parse_atom(text: &str) -> Result<AnyRep, SpecError> {
    let pieces = split_top(text.trim(), '@');
    let mut rep = parse_base(pieces[0].trim())?;
    for modifier in &pieces[1..] {
        rep = apply_modifier(rep, modifier.trim())?;
    }
    Ok(rep)
}

/// Parse an algebra description such as `so(3,1)`, `sl(2,R)@sym3`,
/// `sl(3,R)*sl(2,R)+center`, `sp(1)*sp(2)` or `stab(generators.json)`.
pub fn parse_spec(input: &str) -> Result<AnyRep, SpecError> {
    let mut text = input.trim();
    if text.is_empty() {
        return Err(SpecError::Parse("empty algebra spec".into()));
    }
    let mut center = false;
    if let Some(stripped) = text.strip_suffix("+center") {
        center = true;
        text = stripped.trim_end();
    }
    let atoms = split_top(text, '*');
    let mut rep = if atoms.len() >= 2 && atoms[0].trim() == "sp(1)" {
        let rest = atoms[1..].join("*");
        let inner = parse_spec(&rest)?;
        match inner {
            AnyRep::Real(r) if r.quat.is_some() => AnyRep::Real(sp1_product(&r)?),
            other => {
                // No quaternionic structure on the right factor: fall back to
                // an honest tensor product with the 4-dimensional sp(1) rep.
                let left = AnyRep::Real(sp_pq(1, 0));
                product(left, other, input)?
            }
        }
    } else {
        let mut it = atoms.iter();
        let mut acc = parse_atom(it.next().unwrap())?;
        for atom in it {
            let rhs = parse_atom(atom)?;
            acc = product(acc, rhs, input)?;
        }
        acc
    };
    if center {
        rep = match rep {
            AnyRep::Real(r) => AnyRep::Real(add_center(&r)),
            AnyRep::Complex(r) => AnyRep::Complex(add_center(&r)),
        };
    }
    Ok(rep)
}

fn product(a: AnyRep, b: AnyRep, input: &str) -> Result<AnyRep, SpecError> {
    match (a, b) {
        (AnyRep::Real(x), AnyRep::Real(y)) => Ok(AnyRep::Real(tensor_product(&x, &y, false))),
        (AnyRep::Complex(x), AnyRep::Complex(y)) => {
            Ok(AnyRep::Complex(tensor_product(&x, &y, false)))
        }
        _ => Err(SpecError::MixedFields(input.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::symmetric_signature;

    fn check(rep: &Rep<Rat>) {
        rep.check_closure().unwrap();
        rep.check_invariance().unwrap();
    }

    fn check_c(rep: &Rep<GaussRat>) {
        rep.check_closure().unwrap();
        rep.check_invariance().unwrap();
    }

    #[test]
    fn orthogonal_dims_and_invariance() {
        for (p, q, d) in [(3, 0, 3), (3, 1, 6), (2, 2, 6), (5, 0, 10)] {
            let rep = so_pq::<Rat>(p, q);
            assert_eq!(rep.dim_g(), d);
            check(&rep);
        }
        let c = so_n_c(4);
        assert_eq!(c.dim_g(), 6);
        check_c(&c);
    }

    #[test]
    fn orthogonal_matches_metric_stabilizer() {
        for (p, q) in [(3, 0), (2, 1), (2, 2)] {
            let rep = so_pq::<Rat>(p, q);
            let sub = stabilizer_of_tensor(p + q, &rep.preserved[0]);
            assert_eq!(rep.span(), sub);
        }
    }

    #[test]
    fn linear_and_symplectic_dims() {
        assert_eq!(sl_n::<Rat>(3).dim_g(), 8);
        assert_eq!(gl_n::<Rat>(3).dim_g(), 9);
        assert_eq!(sl_n::<GaussRat>(2).dim_g(), 3);
        assert_eq!(sp_2n::<Rat>(4).dim_g(), 10);
        assert_eq!(sp_2n::<Rat>(6).dim_g(), 21);
        assert_eq!(sp_2n::<GaussRat>(4).dim_g(), 10);
        check(&sl_n::<Rat>(3));
        check(&gl_n::<Rat>(3));
        check(&sp_2n::<Rat>(4));
        check_c(&sp_2n::<GaussRat>(4));
    }

    #[test]
    fn unitary_dims_and_forms() {
        let su2 = su_pq(2, 0);
        assert_eq!(su2.dim_g(), 3);
        assert_eq!(su2.dim_v, 4);
        check(&su2);
        let su21 = su_pq(2, 1);
        assert_eq!(su21.dim_g(), 8);
        check(&su21);
        let u2 = u_pq(2, 0);
        assert_eq!(u2.dim_g(), 4);
        check(&u2);
        // su(2) on ℝ⁴ is of quaternionic type: its commutant is ℍ, so the
        // invariant bilinear forms are 4-dimensional. su(2,1) is of complex
        // type and keeps only the real and imaginary hermitian parts.
        assert_eq!(invariant_bilinear_forms(&su2).len(), 4);
        assert_eq!(invariant_bilinear_forms(&su21).len(), 2);
    }

    #[test]
    fn quaternionic_dims() {
        assert_eq!(sl_n_h(1).dim_g(), 3);
        assert_eq!(sl_n_h(2).dim_g(), 15);
        check(&sl_n_h(1));
        check(&sl_n_h(2));
        for (p, q, d) in [(1, 0, 3), (2, 0, 10), (1, 1, 10)] {
            let rep = sp_pq(p, q);
            assert_eq!(rep.dim_g(), d, "sp({p},{q})");
            check(&rep);
        }
    }

    #[test]
    fn left_and_right_multiplications_commute() {
        let js = quat_triple(2);
        for l in left_mult_blocks() {
            let lk = kron(&l, &Mat::<Rat>::identity(2));
            for j in &js {
                assert!(lk.commutator(j).is_zero());
            }
        }
        let [li, lj, lk] = left_mult_blocks();
        assert_eq!(li.matmul(&lj), lk);
    }

    #[test]
    fn octonion_algebra_facts() {
        for split in [false, true] {
            let oct = Octonions {
                lambda: if split { 1 } else { -1 },
            };
            oct.metric_diag();
            // Alternativity on basis pairs: (xx)y = x(xy).
            for a in 0..8 {
                for b in 0..8 {
                    let (i1, s1) = oct.mul_basis(a, a);
                    let (i2, s2) = oct.mul_basis(i1, b);
                    let (i3, s3) = oct.mul_basis(a, b);
                    let (i4, s4) = oct.mul_basis(a, i3);
                    assert_eq!((i2, s1 * s2), (i4, s3 * s4));
                }
            }
        }
        // Non-associativity witness in the compact octonions.
        let oct = Octonions { lambda: -1 };
        let (i1, s1) = oct.mul_basis(1, 2);
        let (i2, s2) = oct.mul_basis(i1, 4);
        let (i3, s3) = oct.mul_basis(2, 4);
        let (i4, s4) = oct.mul_basis(1, i3);
        assert!((i2, s1 * s2) != (i4, s3 * s4));
    }

    #[test]
    fn octonion_forms_are_antisymmetric() {
        for split in [false, true] {
            let oct = Octonions {
                lambda: if split { 1 } else { -1 },
            };
            let phi = oct.three_form();
            for (idx, v) in &phi.coeffs {
                let mut swapped = idx.clone();
                swapped.swap(0, 1);
                let other = phi.coeffs.get(&swapped).cloned().unwrap_or(Rat::zero());
                assert_eq!(other, Rat::zero().sub(v));
                let mut swapped = idx.clone();
                swapped.swap(1, 2);
                let other = phi.coeffs.get(&swapped).cloned().unwrap_or(Rat::zero());
                assert_eq!(other, Rat::zero().sub(v));
            }
            let big = oct.four_form();
            assert!(!big.coeffs.is_empty());
            for (idx, v) in &big.coeffs {
                for s in 0..3 {
                    let mut swapped = idx.clone();
                    swapped.swap(s, s + 1);
                    let other = big.coeffs.get(&swapped).cloned().unwrap_or(Rat::zero());
                    assert_eq!(other, Rat::zero().sub(v), "swap {s} of {idx:?}");
                }
            }
        }
    }

    #[test]
    fn exceptional_stabilizer_dims_and_signatures() {
        let cases = [
            (g2_family(false), 14, (7, 0)),
            (g2_family(true), 14, (4, 3)),
            (spin7_family(false), 21, (8, 0)),
            (spin7_family(true), 21, (4, 4)),
        ];
        for (rep, dim, sig) in cases {
            assert_eq!(rep.dim_g(), dim, "{}", rep.name);
            check(&rep);
            let forms = invariant_bilinear_forms(&rep);
            assert_eq!(forms.len(), 1, "{}", rep.name);
            let g = rep.preserved[1].gram(rep.dim_v);
            let (pos, neg, zero) = symmetric_signature(&g);
            assert_eq!((pos, neg), sig, "{}", rep.name);
            assert_eq!(zero, 0);
        }
    }

    #[test]
    fn center_and_conformal() {
        let co3 = co_pq(3, 0);
        assert_eq!(co3.dim_g(), 4);
        assert!(co3.has_center);
        check(&co3);
        assert_eq!(co3.factor_spans.len(), 2);
    }

    #[test]
    fn sp1_times_sp2() {
        let rep = parse_spec("sp(1)*sp(2)").unwrap().realified();
        assert_eq!(rep.dim_v, 8);
        assert_eq!(rep.dim_g(), 13);
        check(&rep);
        assert_eq!(rep.factor_spans.len(), 2);
    }

    #[test]
    fn segre_complex_instance() {
        let rep = segre_complex(3);
        assert_eq!(rep.dim_v, 12);
        assert_eq!(rep.dim_g(), 22); // realified sl(3,ℂ) ⊕ sl(2,ℂ)
        check(&rep);
    }

    #[test]
    fn parser_round_trips() {
        assert_eq!(parse_spec("so(3)").unwrap().realified().dim_g(), 3);
        assert_eq!(parse_spec("so(4,C)").unwrap().realified().dim_g(), 12);
        let cube = parse_spec("sl(2,R)@sym3").unwrap().realified();
        assert_eq!(cube.dim_v, 4);
        assert_eq!(cube.dim_g(), 3);
        let prod = parse_spec("sl(3,R)*sl(2,R)+center").unwrap().realified();
        assert_eq!(prod.dim_v, 6);
        assert_eq!(prod.dim_g(), 12);
        assert!(prod.has_center);
        assert_eq!(prod.factor_spans.len(), 3);
        let wedge = parse_spec("gl(5,R)@alt2").unwrap().realified();
        assert_eq!(wedge.dim_v, 10);
        assert_eq!(wedge.dim_g(), 25);
    }

    #[test]
    fn parser_rejections() {
        assert!(matches!(
            parse_spec("so(3"),
            Err(SpecError::Parse(_))
        ));
        assert!(matches!(
            parse_spec("so(3)*so(3,C)"),
            Err(SpecError::MixedFields(_))
        ));
        assert!(matches!(parse_spec("frob(3)"), Err(SpecError::Parse(_))));
        assert!(matches!(parse_spec("sp(3,R)"), Err(SpecError::Parse(_))));
    }

    #[test]
    fn generator_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("so3.json");
        let rep = so_pq::<Rat>(3, 0);
        let file = RepFile::from_rep(&rep);
        std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        let loaded = parse_spec(&format!("stab({})", path.display())).unwrap();
        assert_eq!(loaded.realified().span(), rep.span());
    }
}
