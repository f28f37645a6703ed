use super::system::Problem;
use crate::mesh::{Extent, Mesh};
use crate::mpfa::{conservation_residual, source_integrals, MpfaOptions, PermField, SubdomainOperator};
use crate::Result;

/// Single-domain MPFA solution.
#[derive(Debug)]
pub struct MonolithicSolution {
    pub pressure: Vec<f64>,
    pub fluxes: Vec<f64>,
    pub data: Vec<f64>,
    pub source: Vec<f64>,
    pub operator: SubdomainOperator,
}

impl MonolithicSolution {
    /// Largest per-cell balance residual.
    pub fn conservation_residual(&self, mesh: &Mesh) -> f64 {
        crate::linalg::norm_inf(&conservation_residual(mesh, &self.fluxes, &self.source))
    }
}

/// Assemble and solve the problem on one conforming mesh of `domain`.
pub fn monolithic_solve(
    mesh: &Mesh,
    domain: &Extent,
    perm: &PermField,
    problem: &Problem,
    opts: MpfaOptions,
) -> Result<MonolithicSolution> {
    let sides = Problem::boundary_sides(mesh, domain)?;
    let tags = sides.iter().map(|s| problem.kind(s.unwrap())).collect();
    let operator = SubdomainOperator::assemble(mesh, perm, tags, opts)?;
    let data = problem.outer_data(&operator, &sides);
    let f = problem.source.clone();
    let source = source_integrals(mesh, move |x| f.as_ref()(x));
    let sol = operator.solve(&data, &source)?;
    let fluxes = operator.fluxes(&sol.pressure, &data);
    Ok(MonolithicSolution { pressure: sol.pressure, fluxes, data, source, operator })
}
