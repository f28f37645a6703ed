use super::space::MortarSpace;
use crate::linalg::{generalized_eigenvalues, DMat, DenseLu};
use crate::mesh::{BoundaryLocation, Decomposition};
use crate::{Error, Result};

/// Which trace projection couples mortar and subdomains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// Side-wise L2 projection.
    #[default]
    Flat,
    /// Projection onto weakly continuous traces.
    Sharp,
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "flat" => Ok(Variant::Flat),
            "sharp" => Ok(Variant::Sharp),
            _ => Err(format!("unknown projection variant `{s}` (expected flat or sharp)")),
        }
    }
}

/// Projections of one interface. Index `[k]` is side `k` of the interface.
#[derive(Debug, Clone)]
pub struct InterfaceProjection {
    /// `c[k][(f, m)] = int_F phi_m` over trace facet `f` of side `k`.
    pub c: [DMat; 2],
    /// Trace facet lengths.
    pub w: [Vec<f64>; 2],
    /// Signed facet averages.
    pub flat: [DMat; 2],
    pub sharp: [DMat; 2],
    pub mass: DMat,
    pub sigma_flat: f64,
    /// Zero when the auxiliary problem is singular.
    pub sigma_sharp: f64,
}

impl InterfaceProjection {
    pub fn get(&self, variant: Variant, side: usize) -> &DMat {
        match variant {
            Variant::Flat => &self.flat[side],
            Variant::Sharp => &self.sharp[side],
        }
    }

    pub fn sigma(&self, variant: Variant) -> f64 {
        match variant {
            Variant::Flat => self.sigma_flat,
            Variant::Sharp => self.sigma_sharp,
        }
    }

    /// `sum_k C_k^T Q_k lambda`, the weak-continuity functional.
    pub fn continuity_residual(&self, variant: Variant, lambda: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; lambda.len()];
        for k in 0..2 {
            let v = self.get(variant, k).mul_vec(lambda);
            let t = self.c[k].mul_transpose_vec(&v);
            for (ri, ti) in r.iter_mut().zip(t) {
                *ri += ti;
            }
        }
        r
    }
}

fn sign(side: usize) -> f64 {
    if side == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Smallest `sigma` with `sum_k |Q_k mu|^2_{W_k} >= sigma^2 |mu|^2_{M}` for all mortar `mu`.
pub fn mortar_condition_sigma(q: [&DMat; 2], w: [&[f64]; 2], mass: &DMat) -> Result<f64> {
    let n = mass.rows();
    let mut a = DMat::zeros(n, n);
    for k in 0..2 {
        let wq = DMat::from_fn(q[k].rows(), n, |i, j| w[k][i] * q[k][(i, j)]);
        a = a.add(&q[k].transpose().matmul(&wq));
    }
    let ev = generalized_eigenvalues(&a, mass)?;
    let top = ev[ev.len() - 1];
    if ev[0] <= 1e-13 * top {
        return Ok(0.0);
    }
    Ok(ev[0].sqrt())
}

impl InterfaceProjection {
    pub fn assemble(decomp: &Decomposition, space: &MortarSpace, k: usize) -> Result<Self> {
        let iface = &decomp.interfaces()[k];
        let mortar = space.interface(k);
        let tol = 1e-10 * iface.length();
        if (mortar.grid.length() - iface.length()).abs() > tol
            || crate::mesh::dist(mortar.grid.start, iface.start) > tol
        {
            return Err(Error::InterfaceMismatch {
                interface: k,
                reason: "mortar grid does not span the interface".into(),
            });
        }
        let nm = mortar.ndofs();
        let mut c: [DMat; 2] = [DMat::zeros(0, 0), DMat::zeros(0, 0)];
        let mut w: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for side in 0..2 {
            let ranges = &iface.ranges[side];
            let mut cs = DMat::zeros(ranges.len(), nm);
            for (f, &(s0, s1)) in ranges.iter().enumerate() {
                for (m, v) in mortar.segment_integrals(s0, s1) {
                    cs[(f, m)] = v;
                }
            }
            w[side] = ranges.iter().map(|r| r.1 - r.0).collect();
            c[side] = cs;
        }
        let flat: [DMat; 2] = [0, 1].map(|s| {
            DMat::from_fn(c[s].rows(), nm, |f, m| sign(s) * c[s][(f, m)] / w[s][f])
        });
        let mass = mortar.mass_matrix();
        let sigma_flat = mortar_condition_sigma([&flat[0], &flat[1]], [&w[0], &w[1]], &mass)?;

        // G_k = C_k^T W_k^{-1} C_k
        let g: [DMat; 2] = [0, 1].map(|s| {
            let wc = DMat::from_fn(c[s].rows(), nm, |f, m| c[s][(f, m)] / w[s][f]);
            c[s].transpose().matmul(&wc)
        });
        let (sharp, sigma_sharp) = match DenseLu::new(&g[0].add(&g[1])) {
            Ok(lu) => {
                let chi = lu.solve_mat(&g[0].sub(&g[1]));
                let sharp: [DMat; 2] = [0, 1].map(|s| {
                    let inner = DMat::identity(nm).scale(sign(s)).sub(&chi);
                    DMat::from_fn(c[s].rows(), nm, |f, m| c[s][(f, m)] / w[s][f]).matmul(&inner)
                });
                let sig = mortar_condition_sigma([&sharp[0], &sharp[1]], [&w[0], &w[1]], &mass)?;
                (sharp, sig)
            }
            Err(_) => ([DMat::zeros(c[0].rows(), nm), DMat::zeros(c[1].rows(), nm)], 0.0),
        };
        Ok(Self { c, w, flat, sharp, mass, sigma_flat, sigma_sharp })
    }
}

/// All interface projections of a decomposition.
#[derive(Debug, Clone)]
pub struct Projections {
    variant: Variant,
    interfaces: Vec<InterfaceProjection>,
    offsets: Vec<std::ops::Range<usize>>,
    dim: usize,
}

/// Reject when `sigma_min` falls below this value.
pub const SIGMA_THRESHOLD: f64 = 1e-8;

impl Projections {
    /// Assemble and check the mortar condition of the active variant.
    pub fn assemble(decomp: &Decomposition, space: &MortarSpace, variant: Variant) -> Result<Self> {
        let p = Self::assemble_unchecked(decomp, space, variant)?;
        for (k, ip) in p.interfaces.iter().enumerate() {
            let s = ip.sigma(variant);
            if !(s >= SIGMA_THRESHOLD) {
                return Err(Error::MortarCondition { interface: k, sigma: s });
            }
        }
        Ok(p)
    }

    pub fn assemble_unchecked(decomp: &Decomposition, space: &MortarSpace, variant: Variant) -> Result<Self> {
        if space.interfaces().len() != decomp.interfaces().len() {
            return Err(Error::Dimension(format!(
                "mortar space has {} interfaces, decomposition {}",
                space.interfaces().len(),
                decomp.interfaces().len()
            )));
        }
        let interfaces = (0..decomp.interfaces().len())
            .map(|k| InterfaceProjection::assemble(decomp, space, k))
            .collect::<Result<Vec<_>>>()?;
        let offsets = (0..interfaces.len()).map(|k| space.range(k)).collect();
        Ok(Self { variant, interfaces, offsets, dim: space.dim() })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn interface(&self, k: usize) -> &InterfaceProjection {
        &self.interfaces[k]
    }

    pub fn interfaces(&self) -> &[InterfaceProjection] {
        &self.interfaces
    }

    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k].clone()
    }

    pub fn sigmas(&self) -> Vec<f64> {
        self.interfaces.iter().map(|p| p.sigma(self.variant)).collect()
    }

    /// Projected flux density `Q_k lambda` on every boundary facet of
    /// subdomain `s`, zero on outer facets.
    pub fn to_subdomain(&self, decomp: &Decomposition, s: usize, lambda: &[f64]) -> Vec<f64> {
        self.to_subdomain_with(decomp, s, lambda, |k, side| self.interfaces[k].get(self.variant, side).clone())
    }

    /// Unsigned facet averages of a mortar function on every boundary facet of `s`.
    pub fn averages_to_subdomain(&self, decomp: &Decomposition, s: usize, d: &[f64]) -> Vec<f64> {
        self.to_subdomain_with(decomp, s, d, |k, side| self.interfaces[k].get(self.variant, side).scale(sign(side)))
    }

    fn to_subdomain_with(
        &self,
        decomp: &Decomposition,
        s: usize,
        lambda: &[f64],
        q: impl Fn(usize, usize) -> DMat,
    ) -> Vec<f64> {
        let loc = decomp.locations(s);
        let mut out = vec![0.0; loc.len()];
        for (k, iface) in decomp.interfaces().iter().enumerate() {
            let Some(side) = iface.subdomains.iter().position(|&x| x == s) else { continue };
            let v = q(k, side).mul_vec(&lambda[self.range(k)]);
            for (&b, vi) in iface.facets[side].iter().zip(v) {
                out[b] = vi;
            }
        }
        debug_assert!(out
            .iter()
            .zip(loc)
            .all(|(v, l)| *v == 0.0 || matches!(l, BoundaryLocation::Interface { .. })));
        out
    }

    /// `sum_k Q_k^T W_k v` over the interfaces of subdomain `s`, for facet values `v`.
    pub fn from_subdomain(&self, decomp: &Decomposition, s: usize, v: &[f64]) -> Vec<f64> {
        self.gather_subdomain(decomp, s, v, false)
    }

    /// Like [`Self::from_subdomain`] with the unsigned projection.
    pub fn averages_from_subdomain(&self, decomp: &Decomposition, s: usize, v: &[f64]) -> Vec<f64> {
        self.gather_subdomain(decomp, s, v, true)
    }

    fn gather_subdomain(&self, decomp: &Decomposition, s: usize, v: &[f64], unsigned: bool) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (k, iface) in decomp.interfaces().iter().enumerate() {
            let Some(side) = iface.subdomains.iter().position(|&x| x == s) else { continue };
            let ip = &self.interfaces[k];
            let wv: Vec<f64> = iface.facets[side].iter().zip(&ip.w[side]).map(|(&b, &w)| w * v[b]).collect();
            let mut t = ip.get(self.variant, side).mul_transpose_vec(&wv);
            if unsigned {
                t.iter_mut().for_each(|x| *x *= sign(side));
            }
            for (o, ti) in out[self.range(k)].iter_mut().zip(t) {
                *o += ti;
            }
        }
        out
    }

    /// Solve with the block-diagonal mortar mass matrix.
    pub fn mass_solve(&self, g: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.dim];
        for (k, ip) in self.interfaces.iter().enumerate() {
            let r = self.range(k);
            let v = DenseLu::new(&ip.mass)?.solve(&g[r.clone()]);
            x[r].copy_from_slice(&v);
        }
        Ok(x)
    }

    pub fn mass_apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for (k, ip) in self.interfaces.iter().enumerate() {
            let r = self.range(k);
            let v = ip.mass.mul_vec(&x[r.clone()]);
            y[r].copy_from_slice(&v);
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{ElementKind, Extent};
    use crate::mortar::{MortarKind, MortarSpace};

    fn two_by_one(nl: usize, nr: usize) -> Decomposition {
        let e = Extent::new(0.0, 0.0, 2.0, 1.0).unwrap();
        Decomposition::structured(e, 2, 1, |i, _| if i == 0 { (nl, nl) } else { (nr, nr) }, ElementKind::Quad).unwrap()
    }

    #[test]
    fn flat_of_linear_p1_gives_facet_averages() {
        let d = two_by_one(2, 2);
        let space = MortarSpace::uniform(&d, MortarKind::P1, |_| 1).unwrap();
        let p = Projections::assemble(&d, &space, Variant::Flat).unwrap();
        let q = &p.interface(0).flat;
        let v0 = q[0].mul_vec(&[0.0, 1.0]);
        let v1 = q[1].mul_vec(&[0.0, 1.0]);
        assert!((v0[0] - 0.25).abs() < 1e-15 && (v0[1] - 0.75).abs() < 1e-15);
        assert!((v1[0] + 0.25).abs() < 1e-15 && (v1[1] + 0.75).abs() < 1e-15);
    }

    #[test]
    fn sigma_cases() {
        // single mortar cell vs single facet on both sides
        let d = two_by_one(1, 1);
        let space = MortarSpace::uniform(&d, MortarKind::P0, |_| 1).unwrap();
        let p = Projections::assemble(&d, &space, Variant::Flat).unwrap();
        assert!((p.interface(0).sigma_flat - 2f64.sqrt()).abs() < 1e-12);
        // mortar finer than both traces
        let space = MortarSpace::uniform(&d, MortarKind::P0, |_| 3).unwrap();
        let p = Projections::assemble_unchecked(&d, &space, Variant::Flat).unwrap();
        assert!(p.interface(0).sigma_flat < 1e-8);
        assert!(matches!(Projections::assemble(&d, &space, Variant::Flat), Err(Error::MortarCondition { .. })));
    }
}
