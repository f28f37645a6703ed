use super::projection::Projections;
use crate::linalg::{symmetric_eigenvalues, DMat, DenseLu};
use crate::mesh::Decomposition;
use crate::{Error, Result};

/// Net-flux functionals of the floating subdomains and the projector onto
/// their common kernel.
#[derive(Debug, Clone)]
pub struct CoarseOperator {
    subdomains: Vec<usize>,
    b: DMat,
    bbt: Option<DenseLu>,
}

impl CoarseOperator {
    /// Row `i` of `B` maps a mortar vector to the net projected outflux of
    /// subdomain `floating[i]`.
    pub fn new(decomp: &Decomposition, proj: &Projections, floating: &[usize]) -> Result<Self> {
        let dim = proj.dim();
        let mut b = DMat::zeros(floating.len(), dim);
        for (i, &s) in floating.iter().enumerate() {
            let ones = vec![1.0; decomp.locations(s).len()];
            for (m, v) in proj.from_subdomain(decomp, s, &ones).into_iter().enumerate() {
                b[(i, m)] = v;
            }
        }
        let bbt = if floating.is_empty() {
            None
        } else {
            let g = b.matmul(&b.transpose());
            let ev = symmetric_eigenvalues(&g)?;
            let ratio = ev[0] / ev[ev.len() - 1];
            if !(ratio > 1e-12) {
                return Err(Error::CoarseRankDeficient { pivot: ratio });
            }
            Some(DenseLu::new(&g)?)
        };
        Ok(Self { subdomains: floating.to_vec(), b, bbt })
    }

    pub fn subdomains(&self) -> &[usize] {
        &self.subdomains
    }

    pub fn matrix(&self) -> &DMat {
        &self.b
    }

    pub fn is_empty(&self) -> bool {
        self.subdomains.is_empty()
    }

    pub fn apply_b(&self, mu: &[f64]) -> Vec<f64> {
        self.b.mul_vec(mu)
    }

    pub fn apply_bt(&self, y: &[f64]) -> Vec<f64> {
        self.b.mul_transpose_vec(y)
    }

    /// `(B B^T)^{-1} y`
    pub fn solve_bbt(&self, y: &[f64]) -> Vec<f64> {
        match &self.bbt {
            Some(lu) => lu.solve(y),
            None => Vec::new(),
        }
    }

    /// `P mu = mu - B^T (B B^T)^{-1} B mu`
    pub fn project(&self, mu: &[f64]) -> Vec<f64> {
        if self.is_empty() {
            return mu.to_vec();
        }
        let c = self.apply_bt(&self.solve_bbt(&self.apply_b(mu)));
        mu.iter().zip(c).map(|(a, b)| a - b).collect()
    }

    /// Minimum-norm `lambda` with `B lambda = f`.
    pub fn lift(&self, f: &[f64]) -> Vec<f64> {
        if self.is_empty() {
            return vec![0.0; self.b.cols()];
        }
        self.apply_bt(&self.solve_bbt(f))
    }

    /// Least-squares `p` of `B^T p = g`: `B B^T p = B g`.
    pub fn pressure_correction(&self, g: &[f64]) -> Vec<f64> {
        if self.is_empty() {
            return Vec::new();
        }
        self.solve_bbt(&self.apply_b(g))
    }
}
