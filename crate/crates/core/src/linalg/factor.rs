use faer::linalg::solvers::SolveCore;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};

use super::sparse::SparseMatrix;
use crate::{Error, Result};

/// A sparse LU factorization that can be re-used for many right-hand sides.
///
/// Solves are deterministic: the same input vector yields bitwise the same
/// output.
pub struct Factorization {
    n: usize,
    lu: Lu<usize, f64>,
}

impl std::fmt::Debug for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Factorization").field("n", &self.n).finish_non_exhaustive()
    }
}

impl Factorization {
    /// Factor a square matrix. Structurally or numerically singular matrices
    /// are rejected.
    pub fn new(a: &SparseMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Dimension(format!("cannot factor a {}x{} matrix", n, a.ncols())));
        }
        let trip: Vec<Triplet<usize, usize, f64>> =
            a.triplets().map(|(i, j, v)| Triplet::new(i, j, v)).collect();
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trip)
            .map_err(|e| Error::Factorization(format!("{e:?}")))?;
        let lu = mat.sp_lu().map_err(|e| Error::Factorization(format!("{e:?}")))?;
        let f = Self { n, lu };
        if n > 0 {
            let probe: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / n as f64).collect();
            let x = f.solve(&a.mul_vec(&probe));
            let err = x.iter().zip(&probe).map(|(v, w)| (v - w).abs() / w).fold(0.0, f64::max);
            if x.iter().any(|v| !v.is_finite()) || err > 1e-6 {
                return Err(Error::Factorization(format!(
                    "matrix of size {n} is numerically singular (probe error {err:.3e})"
                )));
            }
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n, "right-hand side length");
        let mut rhs = faer::Mat::<f64>::from_fn(self.n, 1, |i, _| b[i]);
        self.lu.solve_in_place_with_conj(faer::Conj::No, rhs.as_mut());
        (0..self.n).map(|i| rhs[(i, 0)]).collect()
    }
}
