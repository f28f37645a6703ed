use crate::mesh::{Mesh, Point};
use crate::{Error, Result};

/// Symmetric 2x2 tensor stored as `[kxx, kxy, kyy]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tensor(pub [f64; 3]);

impl Tensor {
    pub const IDENTITY: Tensor = Tensor([1.0, 0.0, 1.0]);

    pub fn isotropic(k: f64) -> Self {
        Tensor([k, 0.0, k])
    }

    pub fn diag(kx: f64, ky: f64) -> Self {
        Tensor([kx, 0.0, ky])
    }

    /// `R^T diag(k, alpha k) R` with `R` the clockwise rotation by `theta`.
    pub fn rotated(k: f64, alpha: f64, theta: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        // R = [[c, s], [-s, c]]
        let (a, b) = (k, alpha * k);
        Tensor([c * c * a + s * s * b, c * s * (a - b), s * s * a + c * c * b])
    }

    pub fn apply(&self, v: Point) -> Point {
        let [xx, xy, yy] = self.0;
        [xx * v[0] + xy * v[1], xy * v[0] + yy * v[1]]
    }

    pub fn det(&self) -> f64 {
        self.0[0] * self.0[2] - self.0[1] * self.0[1]
    }

    pub fn inverse(&self) -> Tensor {
        let d = self.det();
        Tensor([self.0[2] / d, -self.0[1] / d, self.0[0] / d])
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [xx, xy, yy] = self.0;
        let m = 0.5 * (xx + yy);
        let r = (0.25 * (xx - yy) * (xx - yy) + xy * xy).sqrt();
        [m - r, m + r]
    }

    pub fn is_spd(&self) -> bool {
        self.0.iter().all(|v| v.is_finite()) && self.0[0] > 0.0 && self.det() > 0.0
    }
}

/// One permeability tensor per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PermField {
    tensors: Vec<Tensor>,
}

impl PermField {
    pub fn new(tensors: Vec<Tensor>) -> Result<Self> {
        for (cell, t) in tensors.iter().enumerate() {
            if !t.is_spd() {
                return Err(Error::Permeability {
                    cell,
                    reason: format!("tensor {:?} is not positive definite", t.0),
                });
            }
        }
        Ok(Self { tensors })
    }

    pub fn uniform(n: usize, k: Tensor) -> Result<Self> {
        Self::new(vec![k; n])
    }

    /// Tensor evaluated at every cell centroid.
    pub fn from_fn(mesh: &Mesh, f: impl Fn(Point) -> Tensor) -> Result<Self> {
        Self::new(mesh.centroids().iter().map(|&x| f(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn get(&self, cell: usize) -> Tensor {
        self.tensors[cell]
    }

    pub fn tensors(&self) -> &[Tensor] {
        &self.tensors
    }
}
