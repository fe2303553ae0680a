//! Matrix Lie algebra representations.
//!
//! A [`Rep`] is a Lie algebra 𝔤 ⊆ gl(V) given by an explicit list of matrix
//! generators over an exact field.  Generators are always a *basis* of 𝔤 over
//! the scalar field: a complex algebra handled ℂ-linearly keeps a ℚ(i)-basis,
//! while its underlying real algebra (via [`Rep::realify`]) gets the doubled
//! ℚ-basis {A, iA}.
//!
//! Elements of gl(V) are flattened row-major (index r·n + c) whenever they are
//! treated as vectors, e.g. in [`Rep::span`] and the stabilizer computations.

use crate::matrix::{kron, Mat, SpanReducer, SparseMat};
use crate::scalar::{GaussRat, Rat, Scalar};
use crate::subspace::{SparseVec, Subspace};
use crate::tensor::{realify_mat, std_j, AltIndex, SymIndex};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepError {
    #[error("generators of {0} are linearly dependent")]
    DependentGenerators(String),
    #[error("bracket [g{i}, g{j}] of {name} leaves the span")]
    NotClosed { name: String, i: usize, j: usize },
    #[error("generator g{gen} of {name} does not preserve tensor `{tensor}`")]
    NotInvariant {
        name: String,
        gen: usize,
        tensor: String,
    },
    #[error("generator g{gen} of {name} does not commute with J")]
    NotComplexLinear { name: String, gen: usize },
    #[error("{0} carries no complex structure")]
    MissingComplexStructure(String),
    #[error("quaternion triple of {0} violates the multiplication identities")]
    BadQuaternionTriple(String),
    #[error("subspace is not invariant under generator g{0}")]
    NotAnInvariantSubspace(usize),
    #[error("generator file: {0}")]
    BadFile(String),
}

/// A covariant tensor of some degree on V, kept as its full coefficient
/// array indexed by tuples (all permutations present, not just sorted ones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovTensor<S> {
    pub name: String,
    pub degree: usize,
    pub coeffs: HashMap<Vec<u16>, S>,
    /// Invariance is only demanded up to scale (conformal stabilizers).
    pub up_to_scale: bool,
}

impl<S: Scalar> CovTensor<S> {
    pub fn bilinear(name: &str, gram: &Mat<S>) -> Self {
        let mut coeffs = HashMap::new();
        for (r, c, v) in gram.entries() {
            coeffs.insert(vec![r as u16, c as u16], v.clone());
        }
        CovTensor {
            name: name.to_string(),
            degree: 2,
            coeffs,
            up_to_scale: false,
        }
    }

    /// Build from an alternating form given by (tuple, value) terms; values
    /// are spread over all permutations with the right signs.
    pub fn from_alt(name: &str, n: usize, terms: &[(Vec<u16>, S)]) -> Self {
        let degree = terms.first().map_or(0, |(t, _)| t.len());
        let alt = AltIndex::new(n, degree);
        let mut coeffs = HashMap::new();
        for (tuple, v) in terms {
            assert_eq!(tuple.len(), degree);
            let (_, base) = alt
                .pos_signed(tuple)
                .expect("alternating term with a repeated index");
            spread_perms(tuple, |perm_tuple| {
                let (_, sign) = alt.pos_signed(perm_tuple).unwrap();
                coeffs.insert(perm_tuple.to_vec(), v.mul(&S::from_i64(sign * base)));
            });
        }
        CovTensor {
            name: name.to_string(),
            degree,
            coeffs,
            up_to_scale: false,
        }
    }

    pub fn gram(&self, n: usize) -> Mat<S> {
        assert_eq!(self.degree, 2);
        let mut g = Mat::zeros(n, n);
        for (t, v) in &self.coeffs {
            g.set(t[0] as usize, t[1] as usize, v.clone());
        }
        g
    }

    /// Derivation action of X ∈ gl(V): (X·T)(v…) = -Σ_slots T(…, Xv, …).
    pub fn apply(&self, x: &Mat<S>) -> HashMap<Vec<u16>, S> {
        let mut out: HashMap<Vec<u16>, S> = HashMap::new();
        for (tup, v) in &self.coeffs {
            // contribution of tup to tuples differing in one slot
            for s in 0..self.degree {
                let a = tup[s] as usize;
                for c in 0..x.cols {
                    // (X·T)[tup with s→c] -= X[a][c]·T[tup]
                    let f = x.get(a, c);
                    if f.is_zero() {
                        continue;
                    }
                    let mut t2 = tup.clone();
                    t2[s] = c as u16;
                    let cur = out.remove(&t2).unwrap_or_else(S::zero);
                    let nv = cur.sub(&f.mul(v));
                    if nv.is_zero() {
                        out.remove(&t2);
                    } else {
                        out.insert(t2, nv);
                    }
                }
            }
        }
        out
    }
}

/// Call `f` once per distinct permutation of `tuple`.
fn spread_perms(tuple: &[u16], mut f: impl FnMut(&[u16])) {
    let mut t = tuple.to_vec();
    t.sort_unstable();
    // next_permutation loop over the sorted tuple
    loop {
        f(&t);
        // next lexicographic permutation
        let k = (0..t.len().saturating_sub(1)).rev().find(|&k| t[k] < t[k + 1]);
        let Some(k) = k else { break };
        let l = (k + 1..t.len()).rev().find(|&l| t[k] < t[l]).unwrap();
        t.swap(k, l);
        t[k + 1..].reverse();
    }
}

/// A Lie algebra of matrices acting on V = F^n.
#[derive(Debug, Clone)]
pub struct Rep<S: Scalar> {
    pub name: String,
    pub dim_v: usize,
    /// Basis of 𝔤 over the scalar field.
    pub gens: Vec<Mat<S>>,
    /// Complex structure when the rep is a realified complex one.
    pub j: Option<Mat<S>>,
    /// Quaternion triple (right multiplications) when present.
    pub quat: Option<[Mat<S>; 3]>,
    /// Tensors each generator must annihilate (or scale).
    pub preserved: Vec<CovTensor<S>>,
    /// Direct factors of 𝔤 as subspaces of gl(V), for kernel-containment
    /// statements about product algebras.
    pub factor_spans: Vec<(String, Subspace<S>)>,
    /// Whether the scaling center F·Id was adjoined.
    pub has_center: bool,
}

impl<S: Scalar> Rep<S> {
    pub fn new(name: &str, dim_v: usize, gens: Vec<Mat<S>>) -> Self {
        for g in &gens {
            assert_eq!(g.rows, dim_v);
            assert_eq!(g.cols, dim_v);
        }
        Rep {
            name: name.to_string(),
            dim_v,
            gens,
            j: None,
            quat: None,
            preserved: Vec::new(),
            factor_spans: Vec::new(),
            has_center: false,
        }
    }

    pub fn dim_g(&self) -> usize {
        self.gens.len()
    }

    pub fn gl_dim(&self) -> usize {
        self.dim_v * self.dim_v
    }

    /// 𝔤 as a subspace of gl(V) in row-major coordinates.
    pub fn span(&self) -> Subspace<S> {
        let vecs: Vec<SparseVec<S>> = self.gens.iter().map(|g| g.to_sparse_vec()).collect();
        Subspace::from_spanning(self.gl_dim(), &vecs)
    }

    /// Verify generators are independent and brackets stay inside the span.
    pub fn check_closure(&self) -> Result<(), RepError> {
        let mut red = SpanReducer::new(self.gl_dim());
        for g in &self.gens {
            if !red.insert(&g.to_sparse_vec()) {
                return Err(RepError::DependentGenerators(self.name.clone()));
            }
        }
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                let br = self.gens[i].commutator(&self.gens[j]);
                if !red.contains(&br.to_sparse_vec()) {
                    return Err(RepError::NotClosed {
                        name: self.name.clone(),
                        i,
                        j,
                    });
                }
            }
        }
        Ok(())
    }

    /// Verify every preserved tensor is annihilated (or scaled when allowed)
    /// by every generator, and that J/quaternionic structures commute.
    pub fn check_invariance(&self) -> Result<(), RepError> {
        for (gi, x) in self.gens.iter().enumerate() {
            for t in &self.preserved {
                let image = t.apply(x);
                let ok = if t.up_to_scale {
                    tensor_is_multiple(&image, &t.coeffs)
                } else {
                    image.is_empty()
                };
                if !ok {
                    return Err(RepError::NotInvariant {
                        name: self.name.clone(),
                        gen: gi,
                        tensor: t.name.clone(),
                    });
                }
            }
            if let Some(j) = &self.j {
                if !x.commutator(j).is_zero() {
                    return Err(RepError::NotComplexLinear {
                        name: self.name.clone(),
                        gen: gi,
                    });
                }
            }
        }
        if let Some(js) = &self.quat {
            if !crate::tensor::check_quat_identities(js) {
                return Err(RepError::BadQuaternionTriple(self.name.clone()));
            }
            // Generators must normalize the triple's span: [x, J_a] stays
            // inside span{J_1, J_2, J_3} (extended by {j J_1, j J_2, j J_3}
            // when a global complex structure is registered). Algebras whose
            // sl(2)/sp(1)-factor rotates the triple are admitted alongside
            // centralizers, where the bracket is simply zero.
            let mut reducer = crate::matrix::SpanReducer::new(self.gl_dim());
            for j in js.iter() {
                reducer.insert(&j.to_sparse_vec());
            }
            if let Some(j) = &self.j {
                for ja in js.iter() {
                    reducer.insert(&j.matmul(ja).to_sparse_vec());
                }
            }
            for (gi, x) in self.gens.iter().enumerate() {
                if js.iter().any(|ja| !reducer.contains(&x.commutator(ja).to_sparse_vec())) {
                    return Err(RepError::NotComplexLinear {
                        name: self.name.clone(),
                        gen: gi,
                    });
                }
            }
        }
        Ok(())
    }

    /// Structure constants as ad-matrices: ad(g_i)[k][j] = c^k_{ij} where
    /// [g_i, g_j] = Σ_k c^k_{ij} g_k.
    pub fn ad_matrices(&self) -> Result<Vec<Mat<S>>, RepError> {
        let m = self.dim_g();
        let mut red = SpanReducer::new(self.gl_dim());
        for g in &self.gens {
            if !red.insert(&g.to_sparse_vec()) {
                return Err(RepError::DependentGenerators(self.name.clone()));
            }
        }
        let mut ads = vec![Mat::zeros(m, m); m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                let br = self.gens[i].commutator(&self.gens[j]);
                let co = red
                    .coefficients(&br.to_sparse_vec())
                    .ok_or(RepError::NotClosed {
                        name: self.name.clone(),
                        i,
                        j,
                    })?;
                for (k, v) in co {
                    ads[i].set(k as usize, j, v);
                }
            }
        }
        Ok(ads)
    }

    /// Intrinsic Killing form B(x,y) = tr(ad x ∘ ad y) on the generator basis.
    pub fn killing_matrix(&self) -> Result<Mat<S>, RepError> {
        let ads = self.ad_matrices()?;
        let m = self.dim_g();
        Ok(Mat::from_fn(m, m, |i, j| ads[i].matmul(&ads[j]).trace()))
    }

    /// Trace form T(x,y) = tr_V(xy) on the generator basis.
    pub fn trace_form(&self) -> Mat<S> {
        let m = self.dim_g();
        Mat::from_fn(m, m, |i, j| self.gens[i].matmul(&self.gens[j]).trace())
    }
}

/// True when `image` = c·`base` for some scalar c (including c = 0).
fn tensor_is_multiple<S: Scalar>(
    image: &HashMap<Vec<u16>, S>,
    base: &HashMap<Vec<u16>, S>,
) -> bool {
    if image.is_empty() {
        return true;
    }
    // find the ratio on some common support entry
    let Some((k, v)) = image.iter().next() else {
        return true;
    };
    let Some(b) = base.get(k) else { return false };
    let c = v.mul(&b.inv().expect("base tensor entry is nonzero"));
    // check image = c·base everywhere
    for (k, bv) in base {
        let expect = c.mul(bv);
        match image.get(k) {
            Some(iv) if *iv == expect => {}
            None if expect.is_zero() => {}
            _ => return false,
        }
    }
    for k in image.keys() {
        if !base.contains_key(k) {
            return false;
        }
    }
    true
}

/// Tensor product action on V ⊗ W: generators x⊗1 and 1⊗y, optionally with
/// the scaling center Id⊗Id adjoined.
pub fn tensor_product<S: Scalar>(a: &Rep<S>, b: &Rep<S>, add_center: bool) -> Rep<S> {
    let (n, m) = (a.dim_v, b.dim_v);
    let id_n = Mat::identity(n);
    let id_m = Mat::identity(m);
    let mut gens = Vec::new();
    let mut factors = Vec::new();
    let gl_dim = (n * m) * (n * m);
    let mut push_factor = |name: String, mats: &[Mat<S>], gens: &mut Vec<Mat<S>>| {
        let start = gens.len();
        gens.extend(mats.iter().cloned());
        let vecs: Vec<SparseVec<S>> = gens[start..].iter().map(|g| g.to_sparse_vec()).collect();
        factors.push((name, Subspace::from_spanning(gl_dim, &vecs)));
    };
    let a_mats: Vec<Mat<S>> = a.gens.iter().map(|x| kron(x, &id_m)).collect();
    push_factor(a.name.clone(), &a_mats, &mut gens);
    let b_mats: Vec<Mat<S>> = b.gens.iter().map(|y| kron(&id_n, y)).collect();
    push_factor(b.name.clone(), &b_mats, &mut gens);
    if add_center {
        push_factor("center".into(), &[Mat::identity(n * m)], &mut gens);
    }
    let mut name = format!("{}*{}", a.name, b.name);
    if add_center {
        name.push_str("+center");
    }
    let mut rep = Rep::new(&name, n * m, gens);
    rep.factor_spans = factors;
    rep.has_center = add_center;
    // Product of preserved bilinear forms is preserved by both factors.
    for (ta, tb) in a
        .preserved
        .iter()
        .filter(|t| t.degree == 2 && !t.up_to_scale)
        .zip(b.preserved.iter().filter(|t| t.degree == 2 && !t.up_to_scale))
    {
        let g = kron(&ta.gram(n), &tb.gram(m));
        if !add_center {
            rep.preserved
                .push(CovTensor::bilinear(&format!("{}⊗{}", ta.name, tb.name), &g));
        }
    }
    rep
}

/// Derivation action of x on Λ^k V in the increasing-tuple basis.
///
/// Computed entrywise: for the embedded antisymmetric array,
/// (x·T)^{w} = Σ_s Σ_m x[w_s][m]·T^{w with s→m}, read at increasing w.
pub fn alt_power_action<S: Scalar>(x: &Mat<S>, alt: &AltIndex) -> Mat<S> {
    let d = alt.dim();
    let mut out = Mat::zeros(d, d);
    for (row, w) in alt.tuples.iter().enumerate() {
        for s in 0..alt.k {
            let ws = w[s] as usize;
            for m in 0..alt.n {
                let f = x.get(ws, m);
                if f.is_zero() {
                    continue;
                }
                let mut t2 = w.clone();
                t2[s] = m as u16;
                if let Some((pos, sign)) = alt.pos_signed(&t2) {
                    out.add_to(row, pos as usize, &f.mul(&S::from_i64(sign)));
                }
            }
        }
    }
    out
}

/// Derivation action of x on ⊙^k V in the sorted-tuple coordinate basis
/// (coordinates = tensor entries at non-decreasing index tuples):
/// (x·T)^{w} = Σ_s Σ_m x[w_s][m]·T^{w with s→m}, read at sorted w.
pub fn sym_power_action<S: Scalar>(x: &Mat<S>, sym: &SymIndex) -> Mat<S> {
    let d = sym.dim();
    let mut out = Mat::zeros(d, d);
    for (row, w) in sym.tuples.iter().enumerate() {
        for s in 0..sym.k {
            let ws = w[s] as usize;
            for m in 0..sym.n {
                let f = x.get(ws, m);
                if f.is_zero() {
                    continue;
                }
                let mut t2 = w.clone();
                t2[s] = m as u16;
                out.add_to(row, sym.pos(&t2) as usize, f);
            }
        }
    }
    out
}

/// Rep of the same algebra on Λ^k V.
pub fn alt_power_rep<S: Scalar>(rep: &Rep<S>, k: usize) -> Rep<S> {
    let alt = AltIndex::new(rep.dim_v, k);
    let gens = rep.gens.iter().map(|x| alt_power_action(x, &alt)).collect();
    let mut out = Rep::new(&format!("{}@alt{}", rep.name, k), alt.dim(), gens);
    out.factor_spans = map_factors(rep, |x| alt_power_action(x, &alt), alt.dim());
    out.has_center = rep.has_center;
    out
}

/// Rep of the same algebra on ⊙^k V.
pub fn sym_power_rep<S: Scalar>(rep: &Rep<S>, k: usize) -> Rep<S> {
    let sym = SymIndex::new(rep.dim_v, k);
    let gens = rep.gens.iter().map(|x| sym_power_action(x, &sym)).collect();
    let mut out = Rep::new(&format!("{}@sym{}", rep.name, k), sym.dim(), gens);
    out.factor_spans = map_factors(rep, |x| sym_power_action(x, &sym), sym.dim());
    out.has_center = rep.has_center;
    out
}

fn map_factors<S: Scalar>(
    rep: &Rep<S>,
    act: impl Fn(&Mat<S>) -> Mat<S>,
    new_dim: usize,
) -> Vec<(String, Subspace<S>)> {
    rep.factor_spans
        .iter()
        .map(|(name, span)| {
            let vecs: Vec<SparseVec<S>> = span
                .basis
                .iter()
                .map(|v| {
                    let m = unflatten(rep.dim_v, v);
                    act(&m).to_sparse_vec()
                })
                .collect();
            (
                name.clone(),
                Subspace::from_spanning(new_dim * new_dim, &vecs),
            )
        })
        .collect()
}

/// Reassemble a row-major gl(V) coordinate vector into a matrix.
pub fn unflatten<S: Scalar>(n: usize, v: &[(u32, S)]) -> Mat<S> {
    let mut m = Mat::zeros(n, n);
    for (idx, val) in v {
        m.set(*idx as usize / n, *idx as usize % n, val.clone());
    }
    m
}

/// Restrict a rep to an invariant subspace U ⊆ V, in U's canonical basis.
pub fn restrict_rep<S: Scalar>(
    rep: &Rep<S>,
    sub: &Subspace<S>,
    name: &str,
) -> Result<Rep<S>, RepError> {
    assert_eq!(sub.ambient, rep.dim_v);
    let dim = sub.dim();
    let mut red = SpanReducer::new(rep.dim_v);
    for b in &sub.basis {
        red.insert(b);
    }
    // dense basis vectors for applying generators
    let dense: Vec<Vec<S>> = sub
        .basis
        .iter()
        .map(|b| {
            let mut v = vec![S::zero(); rep.dim_v];
            for (i, x) in b {
                v[*i as usize] = x.clone();
            }
            v
        })
        .collect();
    let mut gens = Vec::with_capacity(rep.gens.len());
    for (gi, x) in rep.gens.iter().enumerate() {
        let mut m = Mat::zeros(dim, dim);
        for (colu, u) in dense.iter().enumerate() {
            let xu = x.apply(u);
            let xu_sparse: SparseVec<S> = xu
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i as u32, v.clone()))
                .collect();
            let co = red
                .coefficients(&xu_sparse)
                .ok_or(RepError::NotAnInvariantSubspace(gi))?;
            for (row, v) in co {
                m.set(row as usize, colu, v);
            }
        }
        gens.push(m);
    }
    let mut out = Rep::new(name, dim, gens);
    // Restrict preserved bilinear forms: G_U[i][j] = uᵢᵀ G uⱼ.
    for t in rep.preserved.iter().filter(|t| t.degree == 2) {
        let g = t.gram(rep.dim_v);
        let gu = Mat::from_fn(dim, dim, |i, j| {
            let gv = g.apply(&dense[j]);
            dense[i]
                .iter()
                .zip(&gv)
                .fold(S::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
        });
        if !gu.is_zero() {
            let mut restricted = CovTensor::bilinear(&t.name, &gu);
            restricted.up_to_scale = t.up_to_scale;
            out.preserved.push(restricted);
        }
    }
    out.has_center = rep.has_center;
    Ok(out)
}

/// Subalgebra of gl(F^n) annihilating (or scaling) a covariant tensor.
pub fn stabilizer_of_tensor<S: Scalar>(n: usize, t: &CovTensor<S>) -> Subspace<S> {
    let cols = n * n + usize::from(t.up_to_scale);
    // Rows indexed by tuples encountered in images X·T; built lazily.
    let mut row_of: HashMap<Vec<u16>, usize> = HashMap::new();
    let mut triplets: Vec<(usize, usize, S)> = Vec::new();
    let mut row_count = 0usize;
    let mut row_idx = |tup: &Vec<u16>, row_count: &mut usize| -> usize {
        *row_of.entry(tup.clone()).or_insert_with(|| {
            let r = *row_count;
            *row_count += 1;
            r
        })
    };
    // (E_rc·T)[τ with s→c] -= T[τ] whenever τ_s = r.
    for (tau, v) in &t.coeffs {
        for s in 0..t.degree {
            let r = tau[s] as usize;
            for c in 0..n {
                let mut tup = tau.clone();
                tup[s] = c as u16;
                let row = row_idx(&tup, &mut row_count);
                triplets.push((row, r * n + c, v.neg()));
            }
        }
    }
    if t.up_to_scale {
        // extra unknown λ with X·T + λT = 0
        for (tau, v) in &t.coeffs {
            let row = row_idx(tau, &mut row_count);
            triplets.push((row, n * n, v.clone()));
        }
    }
    let mut m = SparseMat::new(row_count, cols);
    for (r, c, v) in triplets {
        m.push(r, c, v);
    }
    m.finalize();
    let kern = m.eliminate().kernel();
    let vecs: Vec<SparseVec<S>> = kern
        .into_iter()
        .map(|v| {
            v.into_iter()
                .filter(|(i, _)| (*i as usize) < n * n)
                .collect()
        })
        .collect();
    Subspace::from_spanning(n * n, &vecs)
}

/// Build a rep from a subspace of gl(V), using its canonical basis.
pub fn rep_from_subspace<S: Scalar>(name: &str, n: usize, sub: &Subspace<S>) -> Rep<S> {
    let gens = sub.basis.iter().map(|v| unflatten(n, v)).collect();
    Rep::new(name, n, gens)
}

impl Rep<GaussRat> {
    /// The underlying real algebra on ℝ²ⁿ: generators {A, iA} realified,
    /// with the complex structure J recorded.
    pub fn realify(&self) -> Rep<Rat> {
        let n = self.dim_v;
        let mut gens = Vec::with_capacity(2 * self.gens.len());
        for g in &self.gens {
            gens.push(realify_mat(g));
            gens.push(realify_mat(&g.scale(&GaussRat::i())));
        }
        let mut out = Rep::new(&self.name, 2 * n, gens);
        out.j = Some(std_j(n));
        out.has_center = self.has_center;
        out.factor_spans = self
            .factor_spans
            .iter()
            .map(|(name, span)| (name.clone(), realify_gl_subspace(n, span)))
            .collect();
        for t in self.preserved.iter().filter(|t| t.degree == 2) {
            let g = t.gram(n);
            // Complex bilinear G splits into two real forms Re G, Im G with
            // grams [[Re, -Im], [-Im, -Re]] and [[Im, Re], [Re, -Im]].
            let re = g.map(|z| z.re.clone());
            let im = g.map(|z| z.im.clone());
            let mut gre = Mat::zeros(2 * n, 2 * n);
            let mut gim = Mat::zeros(2 * n, 2 * n);
            for r in 0..n {
                for c in 0..n {
                    gre.set(r, c, re.get(r, c).clone());
                    gre.set(r, n + c, <Rat as Scalar>::neg(im.get(r, c)));
                    gre.set(n + r, c, <Rat as Scalar>::neg(im.get(r, c)));
                    gre.set(n + r, n + c, <Rat as Scalar>::neg(re.get(r, c)));
                    gim.set(r, c, im.get(r, c).clone());
                    gim.set(r, n + c, re.get(r, c).clone());
                    gim.set(n + r, c, re.get(r, c).clone());
                    gim.set(n + r, n + c, <Rat as Scalar>::neg(im.get(r, c)));
                }
            }
            let mut tre = CovTensor::bilinear(&format!("Re({})", t.name), &gre);
            tre.up_to_scale = t.up_to_scale;
            let mut tim = CovTensor::bilinear(&format!("Im({})", t.name), &gim);
            tim.up_to_scale = t.up_to_scale;
            out.preserved.push(tre);
            out.preserved.push(tim);
        }
        out
    }
}

/// Realify a subspace of gl(ℂⁿ) into gl(ℝ²ⁿ) coordinates: each complex basis
/// vector contributes realify(A) and realify(iA).
pub fn realify_gl_subspace(n: usize, sub: &Subspace<GaussRat>) -> Subspace<Rat> {
    let mut vecs = Vec::with_capacity(2 * sub.basis.len());
    for b in &sub.basis {
        let a = unflatten(n, b);
        vecs.push(realify_mat(&a).to_sparse_vec());
        vecs.push(realify_mat(&a.scale(&GaussRat::i())).to_sparse_vec());
    }
    Subspace::from_spanning(4 * n * n, &vecs)
}

/// Either scalar field, for runtime dispatch from parsed specs and files.
pub enum AnyRep {
    Real(Rep<Rat>),
    Complex(Rep<GaussRat>),
}

impl AnyRep {
    /// The real representation to classify: complex reps are realified.
    pub fn realified(&self) -> Rep<Rat> {
        match self {
            AnyRep::Real(r) => r.clone(),
            AnyRep::Complex(c) => c.realify(),
        }
    }
}

/// On-disk generator file.
#[derive(Debug, Serialize, Deserialize)]
pub struct RepFile {
    pub n: usize,
    /// "Q" or "Qi".
    pub field: String,
    /// Dense generator matrices; entries are scalar strings like "-3/4"
    /// (and "1/2+3i" etc. over Qi).
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub preserved: Vec<PreservedFile>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PreservedFile {
    pub degree: usize,
    /// "sym" | "alt" | "none" — documentation of the tensor's symmetry.
    pub symmetry: String,
    /// Sparse entries: an index tuple followed by a scalar string, e.g.
    /// [0, 1, "-1/2"].  Indices are 0-based.
    pub entries: Vec<Vec<serde_json::Value>>,
    /// "strict" (default) or "scale" (invariance only up to scale).
    #[serde(default)]
    pub mode: Option<String>,
}

impl RepFile {
    pub fn load(path: &std::path::Path) -> Result<AnyRep, RepError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RepError::BadFile(format!("{}: {e}", path.display())))?;
        let file: RepFile =
            serde_json::from_str(&text).map_err(|e| RepError::BadFile(e.to_string()))?;
        file.into_rep()
    }

    pub fn into_rep(self) -> Result<AnyRep, RepError> {
        match self.field.as_str() {
            "Q" => Ok(AnyRep::Real(self.build::<Rat>()?)),
            "Qi" => Ok(AnyRep::Complex(self.build::<GaussRat>()?)),
            f => Err(RepError::BadFile(format!("unknown field {f:?}"))),
        }
    }

    fn build<S: Scalar>(&self) -> Result<Rep<S>, RepError> {
        let n = self.n;
        let parse = |s: &str| {
            S::parse(s).map_err(|e| RepError::BadFile(format!("bad scalar {s:?}: {e}")))
        };
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            if g.len() != n || g.iter().any(|row| row.len() != n) {
                return Err(RepError::BadFile(format!("generator is not {n}×{n}")));
            }
            let mut m = Mat::zeros(n, n);
            for (r, row) in g.iter().enumerate() {
                for (c, s) in row.iter().enumerate() {
                    m.set(r, c, parse(s)?);
                }
            }
            gens.push(m);
        }
        let name = self.name.clone().unwrap_or_else(|| "file".into());
        let mut rep = Rep::new(&name, n, gens);
        for (ti, p) in self.preserved.iter().enumerate() {
            let mut coeffs: HashMap<Vec<u16>, S> = HashMap::new();
            for e in &p.entries {
                if e.len() != p.degree + 1 {
                    return Err(RepError::BadFile(format!(
                        "preserved entry needs {} indices + value",
                        p.degree
                    )));
                }
                let mut tup = Vec::with_capacity(p.degree);
                for v in &e[..p.degree] {
                    let i = v
                        .as_u64()
                        .ok_or_else(|| RepError::BadFile("index must be an integer".into()))?;
                    if i as usize >= n {
                        return Err(RepError::BadFile(format!("index {i} out of range")));
                    }
                    tup.push(i as u16);
                }
                let s = e[p.degree]
                    .as_str()
                    .ok_or_else(|| RepError::BadFile("value must be a string".into()))?;
                let val = parse(s)?;
                match p.symmetry.as_str() {
                    "sym" => spread_perms(&tup, |t2| {
                        coeffs.insert(t2.to_vec(), val.clone());
                    }),
                    "alt" => {
                        let alt = AltIndex::new(n, p.degree);
                        let Some((_, base_sign)) = alt.pos_signed(&tup) else {
                            return Err(RepError::BadFile("repeated index in alt entry".into()));
                        };
                        spread_perms(&tup, |t2| {
                            let (_, s2) = alt.pos_signed(t2).unwrap();
                            coeffs
                                .insert(t2.to_vec(), val.mul(&S::from_i64(s2 * base_sign)));
                        });
                    }
                    "none" => {
                        coeffs.insert(tup.clone(), val.clone());
                    }
                    other => {
                        return Err(RepError::BadFile(format!("unknown symmetry {other:?}")));
                    }
                }
            }
            rep.preserved.push(CovTensor {
                name: format!("preserved{ti}"),
                degree: p.degree,
                coeffs,
                up_to_scale: matches!(p.mode.as_deref(), Some("scale")),
            });
        }
        Ok(rep)
    }

    /// Serialize a rep back into the file format.
    pub fn from_rep<S: Scalar>(rep: &Rep<S>) -> RepFile {
        let generators = rep
            .gens
            .iter()
            .map(|g| {
                (0..g.rows)
                    .map(|r| (0..g.cols).map(|c| g.get(r, c).render()).collect())
                    .collect()
            })
            .collect();
        let preserved = rep
            .preserved
            .iter()
            .map(|t| {
                let mut entries: Vec<Vec<serde_json::Value>> = t
                    .coeffs
                    .iter()
                    .map(|(tup, v)| {
                        let mut row: Vec<serde_json::Value> = tup
                            .iter()
                            .map(|&i| serde_json::Value::from(i as u64))
                            .collect();
                        row.push(serde_json::Value::from(v.render()));
                        row
                    })
                    .collect();
                entries.sort_by_key(|e| format!("{e:?}"));
                PreservedFile {
                    degree: t.degree,
                    symmetry: "none".into(),
                    entries,
                    mode: t.up_to_scale.then(|| "scale".to_string()),
                }
            })
            .collect();
        RepFile {
            n: rep.dim_v,
            field: S::FIELD_NAME.replace("(i)", "i").replace('(', "").replace(')', ""),
            generators,
            preserved,
            name: Some(rep.name.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rat {
        <Rat as Scalar>::from_i64(n)
    }

    fn sl2() -> Rep<Rat> {
        // h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h
        let h = Mat::from_i64(2, 2, &[1, 0, 0, -1]);
        let e = Mat::from_i64(2, 2, &[0, 1, 0, 0]);
        let f = Mat::from_i64(2, 2, &[0, 0, 1, 0]);
        let mut rep = Rep::new("sl(2,R)", 2, vec![h, e, f]);
        rep.preserved.push(CovTensor::bilinear(
            "symplectic",
            &Mat::from_i64(2, 2, &[0, 1, -1, 0]),
        ));
        rep
    }

    fn so3() -> Rep<Rat> {
        let gens = vec![
            Mat::from_i64(3, 3, &[0, -1, 0, 1, 0, 0, 0, 0, 0]),
            Mat::from_i64(3, 3, &[0, 0, -1, 0, 0, 0, 1, 0, 0]),
            Mat::from_i64(3, 3, &[0, 0, 0, 0, 0, -1, 0, 1, 0]),
        ];
        let mut rep = Rep::new("so(3)", 3, gens);
        rep.preserved
            .push(CovTensor::bilinear("metric", &Mat::identity(3)));
        rep
    }

    #[test]
    fn closure_and_invariance() {
        for rep in [sl2(), so3()] {
            rep.check_closure().unwrap();
            rep.check_invariance().unwrap();
        }
    }

    #[test]
    fn sl2_killing_form() {
        // Known values on (h, e, f): B(h,h) = 8, B(e,f) = 4, rest 0.
        let k = sl2().killing_matrix().unwrap();
        let expect = Mat::from_i64(3, 3, &[8, 0, 0, 0, 0, 4, 0, 4, 0]);
        assert_eq!(k, expect);
    }

    #[test]
    fn tensor_product_closure_and_factors() {
        let prod = tensor_product(&sl2(), &so3(), false);
        assert_eq!(prod.dim_v, 6);
        assert_eq!(prod.dim_g(), 6);
        prod.check_closure().unwrap();
        prod.check_invariance().unwrap(); // product symplectic form survives
        assert_eq!(prod.preserved.len(), 1);
        // antisymmetric product gram
        let g = prod.preserved[0].gram(6);
        assert_eq!(g.transpose(), g.neg());
        let with_center = tensor_product(&sl2(), &so3(), true);
        assert_eq!(with_center.dim_g(), 7);
        with_center.check_closure().unwrap();
        assert_eq!(with_center.factor_spans.len(), 3);
        assert!(with_center.has_center);
    }

    #[test]
    fn sym_cube_of_sl2_weights() {
        let rep = sym_power_rep(&sl2(), 3);
        assert_eq!(rep.dim_v, 4);
        rep.check_closure().unwrap();
        // h acts diagonally with weights 3, 1, -1, -3 on x³, x²y, xy², y³.
        let h3 = &rep.gens[0];
        for (i, w) in [3i64, 1, -1, -3].into_iter().enumerate() {
            assert_eq!(h3.get(i, i), &q(w), "weight at {i}");
        }
    }

    #[test]
    fn alt_square_of_so3_is_adjoint_sized() {
        let rep = alt_power_rep(&so3(), 2);
        assert_eq!(rep.dim_v, 3);
        rep.check_closure().unwrap();
    }

    /// Oracle: the power actions must equal project ∘ (Σ slot derivations) ∘
    /// embed on the full tensor power.
    #[test]
    fn power_actions_match_tensor_derivation() {
        use crate::tensor::{alt_embed, alt_project, sym_embed, sym_project};
        let slot_derivation = |x: &Mat<Rat>, k: usize| -> Mat<Rat> {
            let n = x.rows;
            let id = Mat::<Rat>::identity(n);
            let mut total = Mat::zeros(n.pow(k as u32), n.pow(k as u32));
            for s in 0..k {
                let mut term = Mat::identity(1);
                for t in 0..k {
                    term = kron(&term, if t == s { x } else { &id });
                }
                total = total.add(&term);
            }
            total
        };
        for rep in [sl2(), so3()] {
            for k in [2usize, 3] {
                let n = rep.dim_v;
                let d = slot_derivation(&rep.gens[1], k);
                let alt = AltIndex::new(n, k);
                let got = alt_power_action(&rep.gens[1], &alt);
                let oracle = alt_project::<Rat>(n, k)
                    .to_dense()
                    .matmul(&d)
                    .matmul(&alt_embed::<Rat>(n, k).to_dense());
                assert_eq!(got, oracle, "alt {} k={k}", rep.name);
                let sym = SymIndex::new(n, k);
                let got = sym_power_action(&rep.gens[1], &sym);
                let oracle = sym_project::<Rat>(n, k)
                    .to_dense()
                    .matmul(&d)
                    .matmul(&sym_embed::<Rat>(n, k).to_dense());
                assert_eq!(got, oracle, "sym {} k={k}", rep.name);
            }
        }
    }

    #[test]
    fn diagonal_action_matches_sym_power() {
        // sl(2) acting diagonally on V⊗V restricted to the symmetric square
        // has the same trace form as the sym² power rep.
        let rep = sl2();
        let id = Mat::<Rat>::identity(2);
        let diag: Vec<Mat<Rat>> = rep
            .gens
            .iter()
            .map(|x| kron(x, &id).add(&kron(&id, x)))
            .collect();
        let diag_rep = Rep::new("sl2 on V⊗V", 4, diag);
        diag_rep.check_closure().unwrap();
        let sym_sub = Subspace::from_spanning(
            4,
            &[
                vec![(0u32, q(1))],
                vec![(1, q(1)), (2, q(1))],
                vec![(3, q(1))],
            ],
        );
        let restricted = restrict_rep(&diag_rep, &sym_sub, "sym2").unwrap();
        let direct = sym_power_rep(&rep, 2);
        assert_eq!(restricted.trace_form(), direct.trace_form());
    }

    #[test]
    fn restrict_rejects_non_invariant_subspace() {
        let rep = sl2();
        let bad = Subspace::from_spanning(2, &[vec![(0u32, q(1))]]);
        assert!(restrict_rep(&rep, &bad, "bad").is_err());
    }

    #[test]
    fn stabilizer_of_metric_is_so() {
        for n in [2usize, 3, 4, 5] {
            let t = CovTensor::bilinear("metric", &Mat::<Rat>::identity(n));
            let stab = stabilizer_of_tensor(n, &t);
            assert_eq!(stab.dim(), n * (n - 1) / 2, "so({n})");
        }
        // and it reproduces the antisymmetric matrices exactly
        let t = CovTensor::bilinear("metric", &Mat::<Rat>::identity(3));
        let stab = stabilizer_of_tensor(3, &t);
        assert_eq!(stab, so3().span());
    }

    #[test]
    fn stabilizer_of_symplectic_form_is_sp() {
        let mut gram = Mat::<Rat>::zeros(4, 4);
        for k in 0..2 {
            gram.set(k, 2 + k, q(1));
            gram.set(2 + k, k, q(-1));
        }
        let t = CovTensor::bilinear("symplectic", &gram);
        assert_eq!(stabilizer_of_tensor(4, &t).dim(), 10); // sp(4)
    }

    #[test]
    fn conformal_stabilizer_adds_the_scaling_line() {
        let mut t = CovTensor::bilinear("metric", &Mat::<Rat>::identity(3));
        t.up_to_scale = true;
        let stab = stabilizer_of_tensor(3, &t);
        assert_eq!(stab.dim(), 4); // co(3) = so(3) ⊕ ℝ·Id
        let id_vec = Mat::<Rat>::identity(3).to_sparse_vec();
        assert!(stab.contains_vec(&id_vec));
    }

    #[test]
    fn realify_doubles_and_commutes_with_j() {
        use crate::scalar::GaussRat;
        // su-like: the complex algebra spanned by diag(i, -i) over Q(i) is
        // all of its multiples; realify and check J-commutation.
        let g = Mat::from_fn(2, 2, |r, c| {
            if r == c {
                GaussRat::i().mul(&GaussRat::from_i64(if r == 0 { 1 } else { -1 }))
            } else {
                GaussRat::zero()
            }
        });
        let rep = Rep::new("c-diag", 2, vec![g]);
        let real = rep.realify();
        assert_eq!(real.dim_v, 4);
        assert_eq!(real.dim_g(), 2);
        real.check_invariance().unwrap();
        real.check_closure().unwrap();
    }

    #[test]
    fn rep_file_round_trip() {
        let rep = so3();
        let file = RepFile::from_rep(&rep);
        let text = serde_json::to_string_pretty(&file).unwrap();
        let parsed: RepFile = serde_json::from_str(&text).unwrap();
        let AnyRep::Real(back) = parsed.into_rep().unwrap() else {
            panic!("expected a real rep");
        };
        assert_eq!(back.dim_v, 3);
        assert_eq!(back.gens, rep.gens);
        back.check_closure().unwrap();
        back.check_invariance().unwrap();
    }

    #[test]
    fn rep_file_rejects_garbage() {
        let bad = RepFile {
            n: 2,
            field: "Q".into(),
            generators: vec![vec![vec!["1".into()]]],
            preserved: vec![],
            name: None,
        };
        assert!(bad.into_rep().is_err());
        let bad_field = RepFile {
            n: 1,
            field: "R".into(),
            generators: vec![],
            preserved: vec![],
            name: None,
        };
        assert!(bad_field.into_rep().is_err());
    }
}
