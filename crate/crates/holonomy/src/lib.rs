//! Exact-arithmetic engine for curvature spaces of matrix Lie algebras.
//!
//! Given a Lie algebra 𝔤 ⊆ gl(V) presented by explicit matrix generators over
//! ℚ or ℚ(i), this crate computes the space K(𝔤) of formal curvature tensors
//! (maps Λ²V → 𝔤 satisfying the first Bianchi identity), the trace map that
//! sends a curvature tensor to its Ricci form, and derived invariants such as
//! Spencer cohomology dimensions and prolongations.  From these it decides,
//! by exact linear algebra, whether the algebra can only support curvature
//! with non-degenerate Ricci behavior, is forced to be trace-free, carries a
//! mixture, or admits no curvature at all.
//!
//! Everything is computed over exact fields — `BigRational` for real
//! coefficient problems and Gaussian rationals for complex-linear ones — so
//! every reported dimension is a theorem about the input generators, not a
//! floating-point estimate.  Large eliminations can optionally be bounded
//! above by modular ranks at random word-size primes; the crate only ever
//! uses those as certified one-sided bounds unless probabilistic mode is
//! requested explicitly.

pub mod catalog;
pub mod e6;
pub mod matrix;
pub mod modular;
pub mod rep;
pub mod ricci;
pub mod scalar;
pub mod segre;
pub mod spencer;
pub mod split;
pub mod subspace;
pub mod symplectic;
pub mod tensor;
