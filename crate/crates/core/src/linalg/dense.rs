use std::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Small row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(rows.len(), c, |i, j| rows[i][j])
    }

    pub fn diag(d: &[f64]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DMat {
        DMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &DMat) -> DMat {
        assert_eq!(self.cols, other.rows, "matmul dimensions");
        let mut out = DMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "mul_vec dimensions");
        (0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn mul_transpose_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "mul_transpose_vec dimensions");
        let mut y = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (yj, a) in y.iter_mut().zip(self.row(i)) {
                *yj += a * xi;
            }
        }
        y
    }

    pub fn add(&self, other: &DMat) -> DMat {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DMat) -> DMat {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> DMat {
        DMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    fn zip_with(&self, other: &DMat, f: impl Fn(f64, f64) -> f64) -> DMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        DMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest entry of `|A - A^T|`.
    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    fn to_faer(&self) -> faer::Mat<f64> {
        faer::Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }
}

impl Index<(usize, usize)> for DMat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// LU with partial pivoting for small dense systems.
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: DMat,
    perm: Vec<usize>,
}

impl DenseLu {
    /// Fails when a pivot falls below `1e-13` times the largest entry.
    pub fn new(a: &DMat) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::Dimension(format!("cannot factor a {}x{} matrix", n, a.cols())));
        }
        let scale = a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pv) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if !(pv > 1e-13 * scale) {
                return Err(Error::Factorization(format!(
                    "dense matrix of size {n} is singular at pivot {k}"
                )));
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / d;
                lu[(i, k)] = l;
                if l != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= l * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }

    /// Solve for every column of `b`.
    pub fn solve_mat(&self, b: &DMat) -> DMat {
        let n = self.dim();
        let mut out = DMat::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col: Vec<f64> = (0..n).map(|i| b[(i, j)]).collect();
            for (i, v) in self.solve(&col).into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    pub fn inverse(&self) -> DMat {
        self.solve_mat(&DMat::identity(self.dim()))
    }
}

/// Singular value decomposition `A = U diag(s) V^T`, singular values decreasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMat,
    pub s: Vec<f64>,
    pub v: DMat,
}

pub fn dense_svd(a: &DMat) -> Result<Svd> {
    let m = a.to_faer();
    let svd = m.thin_svd().map_err(|e| Error::Factorization(format!("svd: {e:?}")))?;
    let k = a.rows().min(a.cols());
    let s = (0..k).map(|i| svd.S()[i]).collect();
    let u = svd.U();
    let v = svd.V();
    Ok(Svd {
        u: DMat::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        s,
        v: DMat::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
    })
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &DMat) -> Result<Vec<f64>> {
    let sym = a.add(&a.transpose()).scale(0.5).to_faer();
    let mut ev = sym
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Factorization(format!("eigenvalues: {e:?}")))?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Eigenvalues of `A x = mu M x` for symmetric `A` and SPD `M`, ascending.
pub fn generalized_eigenvalues(a: &DMat, m: &DMat) -> Result<Vec<f64>> {
    let n = m.rows();
    let llt = m
        .to_faer()
        .llt(faer::Side::Lower)
        .map_err(|e| Error::Factorization(format!("mass matrix not SPD: {e:?}")))?;
    let l = llt.L();
    let l = DMat::from_fn(n, n, |i, j| l[(i, j)]);
    // C = L^{-1} A L^{-T}
    let linv = DenseLu::new(&l)?.inverse();
    let c = linv.matmul(a).matmul(&linv.transpose());
    symmetric_eigenvalues(&c)
}
