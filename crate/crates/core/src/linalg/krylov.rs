use super::{axpy, dot, norm2};
use crate::{Error, Result};

/// Iteration summary returned by the Krylov drivers.
#[derive(Debug, Clone, Default)]
pub struct KrylovReport {
    pub iterations: usize,
    /// Residual measure after every iteration, starting with the initial one.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Preconditioned conjugate gradients from `x0 = 0`.
///
/// Stops when `sqrt(r . z) <= tol * sqrt(r0 . z0)`. `observer` sees every
/// iterate (including the zero start) together with its index.
pub fn cg(
    apply_a: &mut dyn FnMut(&[f64]) -> Result<Vec<f64>>,
    apply_m: &mut dyn FnMut(&[f64]) -> Result<Vec<f64>>,
    b: &[f64],
    tol: f64,
    max_it: usize,
    observer: &mut dyn FnMut(usize, &[f64]),
) -> Result<(Vec<f64>, KrylovReport)> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z = apply_m(&r)?;
    let mut rz = dot(&r, &z);
    observer(0, &x);
    let mut report = KrylovReport::default();
    if rz < 0.0 {
        return Err(Error::Breakdown { iteration: 0, curvature: rz, iterate: x });
    }
    let r0 = rz.sqrt();
    report.history.push(r0);
    if r0 == 0.0 || norm2(b) == 0.0 {
        report.converged = true;
        return Ok((x, report));
    }
    let mut p = z.clone();
    for k in 1..=max_it {
        let ap = apply_a(&p)?;
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::Breakdown { iteration: k, curvature: pap, iterate: x });
        }
        let alpha = rz / pap;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &ap, &mut r);
        observer(k, &x);
        z = apply_m(&r)?;
        let rz_new = dot(&r, &z);
        if rz_new < 0.0 {
            return Err(Error::Breakdown { iteration: k, curvature: rz_new, iterate: x });
        }
        let res = rz_new.sqrt();
        report.history.push(res);
        report.iterations = k;
        if res <= tol * r0 {
            report.converged = true;
            return Ok((x, report));
        }
        let beta = rz_new / rz;
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    Err(Error::NotConverged {
        method: "pcg",
        iterations: max_it,
        last: report.history.last().copied().unwrap_or(f64::NAN) / r0,
        history: report.history,
    })
}

/// Right-preconditioned restarted GMRES from `x0 = 0`.
///
/// Uses the true residual norm; stops when `|r| <= tol |b|`.
pub fn gmres(
    apply_a: &mut dyn FnMut(&[f64]) -> Result<Vec<f64>>,
    apply_m: &mut dyn FnMut(&[f64]) -> Result<Vec<f64>>,
    b: &[f64],
    tol: f64,
    restart: usize,
    max_it: usize,
) -> Result<(Vec<f64>, KrylovReport)> {
    let n = b.len();
    let restart = restart.max(1);
    let mut x = vec![0.0; n];
    let bnorm = norm2(b);
    let mut report = KrylovReport { history: vec![bnorm], ..Default::default() };
    if bnorm == 0.0 {
        report.converged = true;
        return Ok((x, report));
    }
    let mut total = 0;
    while total < max_it {
        let ax = apply_a(&x)?;
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm2(&r);
        if beta <= tol * bnorm {
            report.converged = true;
            break;
        }
        let mut v: Vec<Vec<f64>> = vec![r.iter().map(|ri| ri / beta).collect()];
        let mut zs: Vec<Vec<f64>> = Vec::new();
        let mut h = vec![vec![0.0; restart]; restart + 1];
        let (mut cs, mut sn) = (vec![0.0; restart], vec![0.0; restart]);
        let mut g = vec![0.0; restart + 1];
        g[0] = beta;
        let mut m = 0;
        while m < restart && total < max_it {
            let z = apply_m(&v[m])?;
            let mut w = apply_a(&z)?;
            zs.push(z);
            for (i, vi) in v.iter().enumerate() {
                h[i][m] = dot(&w, vi);
                axpy(-h[i][m], vi, &mut w);
            }
            h[m + 1][m] = norm2(&w);
            for i in 0..m {
                let t = cs[i] * h[i][m] + sn[i] * h[i + 1][m];
                h[i + 1][m] = -sn[i] * h[i][m] + cs[i] * h[i + 1][m];
                h[i][m] = t;
            }
            let d = h[m][m].hypot(h[m + 1][m]);
            if d == 0.0 {
                break;
            }
            cs[m] = h[m][m] / d;
            sn[m] = h[m + 1][m] / d;
            h[m][m] = d;
            h[m + 1][m] = 0.0;
            g[m + 1] = -sn[m] * g[m];
            g[m] *= cs[m];
            let hm = h[m][m];
            let happy = w.iter().all(|&wi| wi == 0.0) || hm == 0.0;
            if !happy {
                let nw = norm2(&w);
                v.push(w.iter().map(|wi| wi / nw.max(f64::MIN_POSITIVE)).collect());
            }
            m += 1;
            total += 1;
            report.history.push(g[m].abs());
            if g[m].abs() <= tol * bnorm || happy {
                break;
            }
        }
        let mut y = vec![0.0; m];
        for i in (0..m).rev() {
            let s: f64 = (i + 1..m).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (yi, zi) in y.iter().zip(&zs) {
            axpy(*yi, zi, &mut x);
        }
        report.iterations = total;
    }
    let ax = apply_a(&x)?;
    let res = norm2(&b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect::<Vec<_>>());
    if res <= tol * bnorm * 10.0 {
        report.converged = true;
        Ok((x, report))
    } else {
        Err(Error::NotConverged { method: "gmres", iterations: total, last: res / bnorm, history: report.history })
    }
}
