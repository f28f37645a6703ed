use crate::linalg::DMat;
use crate::mesh::{Decomposition, InterfaceGrid};
use crate::quadrature::integrate_interval;
use crate::{Error, Result};

/// Polynomial family of a mortar space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MortarKind {
    /// Piecewise constants.
    P0,
    /// Continuous piecewise linears.
    P1,
    /// Discontinuous piecewise linears.
    P1Discontinuous,
}

impl MortarKind {
    pub fn degree(&self) -> usize {
        match self {
            MortarKind::P0 => 0,
            _ => 1,
        }
    }
}

impl std::str::FromStr for MortarKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "p0" | "P0" => Ok(MortarKind::P0),
            "p1" | "P1" | "p1c" => Ok(MortarKind::P1),
            "p1d" | "P1d" => Ok(MortarKind::P1Discontinuous),
            _ => Err(format!("unknown mortar kind `{s}` (expected p0, p1 or p1d)")),
        }
    }
}

/// Mortar space on one interface.
#[derive(Debug, Clone)]
pub struct InterfaceMortar {
    pub grid: InterfaceGrid,
    pub kind: MortarKind,
    /// First global dof.
    pub offset: usize,
}

impl InterfaceMortar {
    pub fn new(grid: InterfaceGrid, kind: MortarKind) -> Self {
        Self { grid, kind, offset: 0 }
    }

    pub fn ndofs(&self) -> usize {
        let n = self.grid.num_cells();
        match self.kind {
            MortarKind::P0 => n,
            MortarKind::P1 => n + 1,
            MortarKind::P1Discontinuous => 2 * n,
        }
    }

    /// Mortar cell containing arc length `s` (right-continuous, clamped).
    pub fn cell_of(&self, s: f64) -> usize {
        let b = &self.grid.breaks;
        match b.binary_search_by(|x| x.total_cmp(&s)) {
            Ok(k) => k.min(b.len() - 2),
            Err(k) => k.saturating_sub(1).min(b.len() - 2),
        }
    }

    /// Local dofs with nonzero support on mortar cell `cell` and their values at `s`.
    pub fn basis_on_cell(&self, cell: usize, s: f64) -> Vec<(usize, f64)> {
        let (a, b) = (self.grid.breaks[cell], self.grid.breaks[cell + 1]);
        let t = (s - a) / (b - a);
        match self.kind {
            MortarKind::P0 => vec![(cell, 1.0)],
            MortarKind::P1 => vec![(cell, 1.0 - t), (cell + 1, t)],
            MortarKind::P1Discontinuous => vec![(2 * cell, 1.0 - t), (2 * cell + 1, t)],
        }
    }

    /// Evaluate a local coefficient vector at arc length `s`.
    pub fn eval(&self, coeffs: &[f64], s: f64) -> f64 {
        self.basis_on_cell(self.cell_of(s), s).iter().map(|&(d, v)| v * coeffs[d]).sum()
    }

    /// Interpolate a function of arc length: nodal values for P1, cell
    /// averages for P0.
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let b = &self.grid.breaks;
        match self.kind {
            MortarKind::P0 => (0..self.grid.num_cells())
                .map(|c| integrate_interval(b[c], b[c + 1], 3, &f) / (b[c + 1] - b[c]))
                .collect(),
            MortarKind::P1 => b.iter().map(|&s| f(s)).collect(),
            MortarKind::P1Discontinuous => (0..self.grid.num_cells()).flat_map(|c| [f(b[c]), f(b[c + 1])]).collect(),
        }
    }

    /// `int phi_a phi_b` over the interface.
    pub fn mass_matrix(&self) -> DMat {
        let n = self.ndofs();
        let mut m = DMat::zeros(n, n);
        for c in 0..self.grid.num_cells() {
            let (a, b) = (self.grid.breaks[c], self.grid.breaks[c + 1]);
            let dofs = self.basis_on_cell(c, a).into_iter().map(|x| x.0).collect::<Vec<_>>();
            for (i, &di) in dofs.iter().enumerate() {
                for (j, &dj) in dofs.iter().enumerate() {
                    m[(di, dj)] += integrate_interval(a, b, 2, |s| {
                        let v = self.basis_on_cell(c, s);
                        v[i].1 * v[j].1
                    });
                }
            }
        }
        m
    }

    /// `int_{s0}^{s1} phi_m` for every local dof, exact for the degree used.
    pub fn segment_integrals(&self, s0: f64, s1: f64) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        let b = &self.grid.breaks;
        for c in 0..self.grid.num_cells() {
            let (a, e) = (b[c].max(s0), b[c + 1].min(s1));
            if e <= a {
                continue;
            }
            for (k, (dof, _)) in self.basis_on_cell(c, a).into_iter().enumerate() {
                let v = integrate_interval(a, e, 2, |s| self.basis_on_cell(c, s)[k].1);
                match out.iter_mut().find(|x| x.0 == dof) {
                    Some(x) => x.1 += v,
                    None => out.push((dof, v)),
                }
            }
        }
        out
    }
}

/// Direct sum of per-interface mortar spaces.
#[derive(Debug, Clone)]
pub struct MortarSpace {
    interfaces: Vec<InterfaceMortar>,
    dim: usize,
}

impl MortarSpace {
    pub fn new(mut interfaces: Vec<InterfaceMortar>) -> Self {
        let mut dim = 0;
        for m in &mut interfaces {
            m.offset = dim;
            dim += m.ndofs();
        }
        Self { interfaces, dim }
    }

    /// Uniform grids with `cells(k)` cells on interface `k`.
    pub fn uniform(decomp: &Decomposition, kind: MortarKind, cells: impl Fn(usize) -> usize) -> Result<Self> {
        let mut v = Vec::new();
        for (k, iface) in decomp.interfaces().iter().enumerate() {
            let n = cells(k);
            if n == 0 {
                return Err(Error::InvalidDecomposition(format!("interface {k} needs at least one mortar cell")));
            }
            v.push(InterfaceMortar::new(iface.grid(n), kind));
        }
        Ok(Self::new(v))
    }

    /// Mortar grids equal to the trace grid of side 0 of every interface.
    pub fn matching_trace(decomp: &Decomposition, kind: MortarKind) -> Self {
        let v = decomp
            .interfaces()
            .iter()
            .map(|iface| {
                let mut breaks: Vec<f64> = iface.ranges[0].iter().map(|r| r.0).collect();
                breaks.push(iface.length());
                InterfaceMortar::new(InterfaceGrid { start: iface.start, end: iface.end, breaks }, kind)
            })
            .collect();
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn interfaces(&self) -> &[InterfaceMortar] {
        &self.interfaces
    }

    pub fn interface(&self, k: usize) -> &InterfaceMortar {
        &self.interfaces[k]
    }

    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        let m = &self.interfaces[k];
        m.offset..m.offset + m.ndofs()
    }

    /// Block-diagonal mass matrix applied to a vector.
    pub fn mass_apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for (k, m) in self.interfaces.iter().enumerate() {
            let r = self.range(k);
            let v = m.mass_matrix().mul_vec(&x[r.clone()]);
            y[r].copy_from_slice(&v);
        }
        y
    }

    /// Inner product `(x, y)_{L2(Gamma)}`.
    pub fn l2_inner(&self, x: &[f64], y: &[f64]) -> f64 {
        crate::linalg::dot(&self.mass_apply(x), y)
    }
}
