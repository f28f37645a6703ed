//! Sparse and dense linear algebra kernels.
//!
//! Subdomain systems are factored once with a sparse LU (backed by `faer`)
//! and re-solved for every interface iteration. Small dense systems (local
//! interaction regions, mortar blocks, the coarse operator) go through the
//! helpers in [`dense`]. The Krylov drivers in [`krylov`] take operator
//! callbacks so the interface operator is never materialized.

pub mod dense;
pub mod factor;
pub mod krylov;
pub mod sparse;

pub use dense::{dense_svd, generalized_eigenvalues, symmetric_eigenvalues, DMat, DenseLu, Svd};
pub use factor::Factorization;
pub use krylov::{cg, gmres, KrylovReport};
pub use sparse::{SparseMatrix, TripletBuilder};

/// Euclidean inner product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
