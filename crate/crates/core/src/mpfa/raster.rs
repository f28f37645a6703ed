use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perm::{PermField, Tensor};
use crate::mesh::{Extent, Mesh};
use crate::{Error, Result};

/// Scalar permeability on a uniform `nx x ny` grid, stored row-major with
/// index `j * nx + i` (row `j` counted from the bottom).
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl Raster {
    pub fn new(nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != nx * ny {
            return Err(Error::Permeability {
                cell: 0,
                reason: format!("raster expects {} values ({nx}x{ny}), found {}", nx * ny, values.len()),
            });
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Permeability { cell: i, reason: format!("raster value {} is not positive", values[i]) });
        }
        Ok(Self { nx, ny, values })
    }

    /// Parse whitespace-separated values.
    pub fn parse(text: &str, nx: usize, ny: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * ny);
        for (line, l) in text.lines().enumerate() {
            for tok in l.split_whitespace() {
                let v = tok
                    .parse::<f64>()
                    .map_err(|e| Error::Parse { line: line + 1, message: format!("{e}: `{tok}`") })?;
                values.push(v);
            }
        }
        Self::new(nx, ny, values)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in self.values.chunks(self.nx) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Raster value of the pixel containing `x`.
    pub fn sample(&self, extent: &Extent, x: [f64; 2]) -> f64 {
        let fx = ((x[0] - extent.x0) / extent.width() * self.nx as f64).floor();
        let fy = ((x[1] - extent.y0) / extent.height() * self.ny as f64).floor();
        let i = (fx.max(0.0) as usize).min(self.nx - 1);
        let j = (fy.max(0.0) as usize).min(self.ny - 1);
        self.values[j * self.nx + i]
    }

    /// Permeability on `mesh`: `K = R^T diag(k, alpha k) R` with `k` sampled
    /// at cell centroids.
    pub fn permeability(&self, extent: &Extent, mesh: &Mesh, alpha: f64, theta: f64) -> Result<PermField> {
        PermField::from_fn(mesh, |x| Tensor::rotated(self.sample(extent, x), alpha, theta))
    }

    /// Deterministic channelized field spanning `decades` orders of
    /// magnitude: smooth random background plus sinuous high-permeability
    /// channels running along `y`, log-scaled onto `[10^-decades/2, 10^decades/2]`.
    pub fn synthetic(nx: usize, ny: usize, decades: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<[f64; 4]> = (0..24)
            .map(|_| {
                let kx = rng.random_range(0.5..6.0);
                let ky = rng.random_range(0.5..12.0);
                [kx, ky, rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(-1.0..1.0) / (kx + ky)]
            })
            .collect();
        let channels: Vec<[f64; 4]> = (0..4)
            .map(|_| {
                [
                    rng.random_range(0.1..0.9),
                    rng.random_range(0.03..0.12),
                    rng.random_range(1.0..4.0),
                    rng.random_range(0.0..std::f64::consts::TAU),
                ]
            })
            .collect();
        let mut log = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = (j as f64 + 0.5) / ny as f64;
            for i in 0..nx {
                let x = (i as f64 + 0.5) / nx as f64;
                let mut v: f64 = modes.iter().map(|m| m[3] * (m[0] * x * 6.0 + m[1] * y * 6.0 + m[2]).cos()).sum();
                for c in &channels {
                    let center = c[0] + c[1] * (c[2] * std::f64::consts::TAU * y + c[3]).sin();
                    let d = (x - center).abs() / 0.04;
                    v += 2.0 * (-d * d).exp();
                }
                log.push(v);
            }
        }
        let (lo, hi) = log.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let span = (hi - lo).max(f64::MIN_POSITIVE);
        let values = log.iter().map(|v| 10f64.powf(decades * ((v - lo) / span - 0.5))).collect();
        Self::new(nx, ny, values)
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values.iter().fold((f64::INFINITY, 0.0), |(a, b), &v| (a.min(v), b.max(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_sample() {
        let r = Raster::parse("1 2 3\n4 5 6\n", 3, 2).unwrap();
        let e = Extent::new(0.0, 0.0, 3.0, 2.0).unwrap();
        assert_eq!(r.sample(&e, [0.5, 0.5]), 1.0);
        assert_eq!(r.sample(&e, [2.5, 1.5]), 6.0);
        assert_eq!(r.sample(&e, [3.0, 2.0]), 6.0);
        assert_eq!(Raster::parse(&r.to_text(), 3, 2).unwrap(), r);
    }

    #[test]
    fn synthetic_spans_requested_decades() {
        let r = Raster::synthetic(60, 220, 6.0, 3).unwrap();
        let (lo, hi) = r.min_max();
        assert!(((hi / lo).log10() - 6.0).abs() < 1e-9);
        assert_eq!(r, Raster::synthetic(60, 220, 6.0, 3).unwrap());
    }

    #[test]
    fn wrong_count_names_expected_and_found() {
        let e = Raster::parse("1 2 3", 2, 2).unwrap_err().to_string();
        assert!(e.contains("expects 4") && e.contains("found 3"), "{e}");
    }
}
