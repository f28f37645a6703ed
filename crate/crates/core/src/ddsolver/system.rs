use std::sync::Arc;

use super::exec::Executor;
use crate::linalg::{DMat, SparseMatrix};
use crate::mesh::{BoundaryLocation, Decomposition, Extent, Mesh, Point, Side};
use crate::mortar::{CoarseOperator, MortarSpace, Projections, Variant};
use crate::mpfa::{source_integrals, BcKind, MpfaOptions, PermField, SubdomainOperator};
use crate::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
/// Function of the domain side and a point on it.
pub type SideFn = Arc<dyn Fn(Side, Point) -> f64 + Send + Sync>;

/// Source term and outer boundary conditions.
#[derive(Clone)]
pub struct Problem {
    pub source: ScalarFn,
    /// Condition type on each side of the domain box, order `Left, Right, Bottom, Top`.
    pub kinds: [BcKind; 4],
    pub pressure: ScalarFn,
    /// Outward flux density on Neumann sides.
    pub flux: SideFn,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem").field("kinds", &self.kinds).finish_non_exhaustive()
    }
}

impl Problem {
    /// Dirichlet everywhere.
    pub fn dirichlet(source: ScalarFn, pressure: ScalarFn) -> Self {
        Self { source, kinds: [BcKind::Dirichlet; 4], pressure, flux: Arc::new(|_, _| 0.0) }
    }

    pub fn kind(&self, side: Side) -> BcKind {
        self.kinds[Side::ALL.iter().position(|&s| s == side).unwrap()]
    }

    /// Domain side of every boundary facet of a mesh of the whole domain.
    pub fn boundary_sides(mesh: &Mesh, domain: &Extent) -> Result<Vec<Option<Side>>> {
        let tol = 1e-10 * domain.diameter();
        mesh.boundary_facets()
            .iter()
            .map(|&f| {
                let fc = mesh.facet(f);
                domain
                    .side_of(mesh.vertex(fc.vertices[0]), mesh.vertex(fc.vertices[1]), tol)
                    .map(Some)
                    .ok_or_else(|| Error::InvalidGeometry(format!("boundary facet {f} is not on the domain box")))
            })
            .collect()
    }

    /// Outer boundary data on the boundary sub-facets of `op`; facets with
    /// `sides[b] == None` get zero.
    pub fn outer_data(&self, op: &SubdomainOperator, sides: &[Option<Side>]) -> Vec<f64> {
        op.point_data(
            |b, x| sides[b].map_or(0.0, |_| self.pressure.as_ref()(x)),
            |b, x| sides[b].map_or(0.0, |side| self.flux.as_ref()(side, x)),
        )
    }
}

/// Interface Krylov method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KrylovMethod {
    #[default]
    Cg,
    Gmres,
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub variant: Variant,
    pub tol: f64,
    pub max_it: usize,
    pub method: KrylovMethod,
    pub gmres_restart: usize,
    pub precondition: bool,
    pub workers: usize,
    pub mpfa: MpfaOptions,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            variant: Variant::Flat,
            tol: 1e-10,
            max_it: 500,
            method: KrylovMethod::Cg,
            gmres_restart: 50,
            precondition: true,
            workers: 1,
            mpfa: MpfaOptions::default(),
        }
    }
}

/// Per-subdomain operators and fixed data.
#[derive(Debug)]
pub struct Subdomain {
    /// Outer conditions from the problem, Neumann on interfaces.
    pub neumann: SubdomainOperator,
    /// Outer conditions from the problem, Dirichlet on interfaces.
    pub dirichlet: SubdomainOperator,
    /// Outer boundary data for the Neumann operator (zero on interfaces).
    pub outer_data: Vec<f64>,
    pub source: Vec<f64>,
    /// Domain side of every outer boundary facet.
    pub sides: Vec<Option<Side>>,
}

/// Assembled domain decomposition system.
pub struct DDSystem {
    pub(crate) decomp: Decomposition,
    pub(crate) subdomains: Vec<Subdomain>,
    pub(crate) space: MortarSpace,
    pub(crate) proj: Projections,
    pub(crate) coarse: CoarseOperator,
    pub(crate) settings: SolverSettings,
    pub(crate) exec: Executor,
    pub(crate) problem: Problem,
}

impl std::fmt::Debug for DDSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DDSystem")
            .field("subdomains", &self.subdomains.len())
            .field("mortar_dim", &self.space.dim())
            .field("floating", &self.coarse.subdomains())
            .field("settings", &self.settings)
            .finish()
    }
}

impl DDSystem {
    pub fn new(
        decomp: Decomposition,
        perm: Vec<PermField>,
        problem: Problem,
        space: MortarSpace,
        settings: SolverSettings,
    ) -> Result<Self> {
        if perm.len() != decomp.num_subdomains() {
            return Err(Error::Dimension(format!(
                "{} permeability fields for {} subdomains",
                perm.len(),
                decomp.num_subdomains()
            )));
        }
        if decomp.interfaces().is_empty() {
            return Err(Error::InvalidDecomposition("decomposition has no interfaces".into()));
        }
        let exec = Executor::new(settings.workers)?;
        let proj = Projections::assemble(&decomp, &space, settings.variant)?;
        let subdomains = exec.try_map(decomp.num_subdomains(), |s| {
            let mesh = decomp.mesh(s);
            let loc = decomp.locations(s);
            let sides: Vec<Option<Side>> = loc
                .iter()
                .map(|l| match l {
                    BoundaryLocation::Outer(side) => Some(*side),
                    BoundaryLocation::Interface { .. } => None,
                })
                .collect();
            let tags = |iface_kind: BcKind| -> Vec<BcKind> {
                loc.iter()
                    .map(|l| match l {
                        BoundaryLocation::Outer(side) => problem.kind(*side),
                        BoundaryLocation::Interface { .. } => iface_kind,
                    })
                    .collect()
            };
            let neumann = SubdomainOperator::assemble(mesh, &perm[s], tags(BcKind::Neumann), settings.mpfa)?;
            let dirichlet = SubdomainOperator::assemble(mesh, &perm[s], tags(BcKind::Dirichlet), settings.mpfa)?;
            let outer_data = problem.outer_data(&neumann, &sides);
            let f = problem.source.clone();
            let source = source_integrals(mesh, move |x| f.as_ref()(x));
            Ok(Subdomain { neumann, dirichlet, outer_data, source, sides })
        })?;
        let floating: Vec<usize> = (0..subdomains.len()).filter(|&s| subdomains[s].neumann.has_nullspace()).collect();
        let coarse = CoarseOperator::new(&decomp, &proj, &floating)?;
        Ok(Self { decomp, subdomains, space, proj, coarse, settings, exec, problem })
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomp
    }

    pub fn subdomain(&self, s: usize) -> &Subdomain {
        &self.subdomains[s]
    }

    pub fn mortar_space(&self) -> &MortarSpace {
        &self.space
    }

    pub fn projections(&self) -> &Projections {
        &self.proj
    }

    pub fn coarse(&self) -> &CoarseOperator {
        &self.coarse
    }

    pub fn settings(&self) -> &SolverSettings {
        &self.settings
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn executor(&self) -> &Executor {
        &self.exec
    }

    /// Subdomains with a constant-pressure nullspace.
    pub fn floating(&self) -> &[usize] {
        self.coarse.subdomains()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Neumann data of subdomain `s` carrying the mortar flux `lambda`, plus
    /// the outer data when `inhomogeneous`.
    pub fn neumann_data(&self, s: usize, lambda: &[f64], inhomogeneous: bool) -> Vec<f64> {
        let sd = &self.subdomains[s];
        let q = self.proj.to_subdomain(&self.decomp, s, lambda);
        let mut d = sd.neumann.facet_data(&q);
        if inhomogeneous {
            crate::linalg::axpy(1.0, &sd.outer_data, &mut d);
        }
        d
    }

    /// Neumann solves with flux data `Q_i lambda`, zero source and zero outer data.
    pub fn apply_extension(&self, lambda: &[f64]) -> Result<Vec<(Vec<f64>, f64)>> {
        self.exec.try_map(self.subdomains.len(), |s| {
            let sd = &self.subdomains[s];
            let data = self.neumann_data(s, lambda, false);
            let sol = sd.neumann.solve(&data, &vec![0.0; sd.source.len()])?;
            Ok((sol.pressure, sol.multiplier))
        })
    }

    /// `S lambda = -sum_i Q_i^T W_i p_hat_i(lambda)`.
    pub fn apply_s(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        let parts = self.exec.try_map(self.subdomains.len(), |s| {
            let sd = &self.subdomains[s];
            let data = self.neumann_data(s, lambda, false);
            let sol = sd.neumann.solve(&data, &vec![0.0; sd.source.len()])?;
            let ph = sd.neumann.boundary_pressures(&sol.pressure, &data);
            Ok(self.proj.from_subdomain(&self.decomp, s, &ph))
        })?;
        let mut out = vec![0.0; self.dim()];
        for p in parts {
            crate::linalg::axpy(-1.0, &p, &mut out);
        }
        Ok(out)
    }

    /// Dirichlet-to-Neumann preconditioner.
    ///
    /// The dual vector is mapped to a mortar pressure with the mortar mass
    /// matrix, the subdomains are solved with that interface pressure, and
    /// the resulting flux functional is mapped back to a mortar vector with
    /// the mass matrix again.
    pub fn apply_m_inverse(&self, g: &[f64]) -> Result<Vec<f64>> {
        let d = self.proj.mass_solve(g)?;
        let parts = self.exec.try_map(self.subdomains.len(), |s| {
            let sd = &self.subdomains[s];
            let mesh = self.decomp.mesh(s);
            let pi = self.proj.averages_to_subdomain(&self.decomp, s, &d);
            let data = sd.dirichlet.facet_data(&pi);
            let sol = sd.dirichlet.solve(&data, &vec![0.0; sd.source.len()])?;
            let flux = sd.dirichlet.fluxes(&sol.pressure, &data);
            let density: Vec<f64> = mesh
                .boundary_facets()
                .iter()
                .map(|&f| flux[f] / mesh.facet(f).length)
                .collect();
            Ok(self.proj.averages_from_subdomain(&self.decomp, s, &density))
        })?;
        let mut out = vec![0.0; self.dim()];
        for p in parts {
            crate::linalg::axpy(-1.0, &p, &mut out);
        }
        self.proj.mass_solve(&out)
    }

    /// Orthonormal basis of `ker B`, one column per basis vector.
    pub fn kernel_basis(&self) -> DMat {
        let n = self.dim();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for m in 0..n {
            let mut e = vec![0.0; n];
            e[m] = 1.0;
            let mut v = self.coarse.project(&e);
            for _ in 0..2 {
                for b in &basis {
                    let c = crate::linalg::dot(&v, b);
                    crate::linalg::axpy(-c, b, &mut v);
                }
            }
            let nv = crate::linalg::norm2(&v);
            if nv > 1e-8 {
                v.iter_mut().for_each(|x| *x /= nv);
                basis.push(v);
            }
        }
        DMat::from_fn(n, basis.len(), |i, j| basis[j][i])
    }

    /// `Z^T S Z` for the kernel basis `Z`.
    pub fn dense_interface_operator(&self) -> Result<DMat> {
        let z = self.kernel_basis();
        let cols: Vec<Vec<f64>> = (0..z.cols())
            .map(|j| self.apply_s(&(0..z.rows()).map(|i| z[(i, j)]).collect::<Vec<_>>()))
            .collect::<Result<_>>()?;
        let sz = DMat::from_fn(z.rows(), z.cols(), |i, j| cols[j][i]);
        Ok(z.transpose().matmul(&sz))
    }

    /// Boundary facet flux densities of a subdomain solve.
    pub fn facet_density(mesh: &Mesh, fluxes: &[f64]) -> Vec<f64> {
        mesh.boundary_facets().iter().map(|&f| fluxes[f] / mesh.facet(f).length).collect()
    }

    /// Sparse cell balance matrix of subdomain `s` (Neumann tagging).
    pub fn neumann_matrix(&self, s: usize) -> &SparseMatrix {
        self.subdomains[s].neumann.matrix()
    }
}
