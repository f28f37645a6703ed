use std::sync::Arc;

use crate::ddsolver::{monolithic_solve, DDSystem, MonolithicSolution, Problem, SolverSettings};
use crate::mesh::{Decomposition, ElementKind, Extent, Mesh};
use crate::mortar::{MortarKind, MortarSpace};
use crate::mpfa::{BcKind, Raster};
use crate::Result;

/// Heterogeneous layer driven by a unit pressure drop from bottom to top,
/// no flow through the lateral sides. Subdomain grids follow the raster.
#[derive(Debug, Clone)]
pub struct RasterDemo {
    pub raster: Raster,
    pub domain: Extent,
    pub subdomains: (usize, usize),
    pub mortar_cells: usize,
    pub mortar: MortarKind,
    pub element: ElementKind,
    pub anisotropy: f64,
    pub rotation: f64,
}

impl RasterDemo {
    /// 3x5 subdomains, 10 mortar cells per interface, raster cells of unit size.
    pub fn new(raster: Raster) -> Self {
        let domain = Extent::new(0.0, 0.0, raster.nx as f64, raster.ny as f64).unwrap();
        Self { raster, domain, subdomains: (3, 5), mortar_cells: 10, mortar: MortarKind::P1, element: ElementKind::Quad, anisotropy: 1.0, rotation: 0.0 }
    }

    /// Unit pressure on the bottom side, zero on the top, no flow elsewhere.
    pub fn problem(&self) -> Problem {
        let (y0, tol) = (self.domain.y0, 1e-12 * self.domain.diameter());
        Problem {
            source: Arc::new(|_| 0.0),
            kinds: [BcKind::Neumann, BcKind::Neumann, BcKind::Dirichlet, BcKind::Dirichlet],
            pressure: Arc::new(move |x| if x[1] < y0 + tol { 1.0 } else { 0.0 }),
            flux: Arc::new(|_, _| 0.0),
        }
    }

    pub fn decomposition(&self) -> Result<Decomposition> {
        let (sx, sy) = self.subdomains;
        let (nx, ny) = (self.raster.nx / sx.max(1), self.raster.ny / sy.max(1));
        Decomposition::structured(self.domain, sx, sy, |_, _| (nx.max(1), ny.max(1)), self.element)
    }

    pub fn system(&self, settings: SolverSettings) -> Result<DDSystem> {
        let d = self.decomposition()?;
        let cells = self.mortar_cells;
        let space = MortarSpace::uniform(&d, self.mortar, |_| cells)?;
        let perm = d
            .meshes()
            .iter()
            .map(|m| self.raster.permeability(&self.domain, m, self.anisotropy, self.rotation))
            .collect::<Result<Vec<_>>>()?;
        DDSystem::new(d, perm, self.problem(), space, settings)
    }

    /// Single-domain reference on the raster grid.
    pub fn monolithic(&self, settings: &SolverSettings) -> Result<(Mesh, MonolithicSolution)> {
        let mesh = Mesh::structured(self.domain, self.raster.nx, self.raster.ny, self.element)?;
        let perm = self.raster.permeability(&self.domain, &mesh, self.anisotropy, self.rotation)?;
        let sol = monolithic_solve(&mesh, &self.domain, &perm, &self.problem(), settings.mpfa)?;
        Ok((mesh, sol))
    }
}
