use super::manufactured::{example1_case, ManufacturedCase};
use super::norms::{DdErrors, PressureNorm};
use super::table::{RateRow, RateTable};
use crate::ddsolver::{DDSystem, SolveReport, SolverSettings};
use crate::error::{Error, Result};
use crate::mesh::{Decomposition, ElementKind};
use crate::mortar::{MortarKind, MortarSpace};
use crate::mpfa::PermField;

/// Refinement study settings.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub levels: usize,
    pub kind: ElementKind,
    pub mortar: MortarKind,
    /// Mortar cells per interface on the coarsest level.
    pub mortar_cells: usize,
    pub norm: PressureNorm,
    pub settings: SolverSettings,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            levels: 5,
            kind: ElementKind::TriCrisscross,
            mortar: MortarKind::P1,
            mortar_cells: 3,
            norm: PressureNorm::L2,
            settings: SolverSettings::default(),
        }
    }
}

/// Per-level output of a study.
#[derive(Debug, Clone)]
pub struct LevelResult {
    pub level: usize,
    pub h_min: f64,
    pub num_cells: usize,
    pub mortar_dim: usize,
    pub errors: DdErrors,
    pub report: SolveReport,
}

/// 3x3 subdomains on `(0,2)^2`, alternating 8 and 6 elements per side,
/// refined uniformly `level` times.
pub fn example1_decomposition(level: usize, kind: ElementKind) -> Result<Decomposition> {
    let case = example1_case();
    let base = Decomposition::structured(case.domain, 3, 3, |i, j| if (i + j) % 2 == 0 { (8, 8) } else { (6, 6) }, kind)?;
    base.refined(level)
}

fn solve_level(case: &ManufacturedCase, config: &StudyConfig, level: usize) -> Result<LevelResult> {
    let decomp = example1_decomposition(level, config.kind)?;
    let cells = config.mortar_cells << level;
    let space = MortarSpace::uniform(&decomp, config.mortar, |_| cells)?;
    let perm = decomp.meshes().iter().map(|m| PermField::uniform(m.num_cells(), case.k)).collect::<Result<Vec<_>>>()?;
    let h_min = decomp.h_min();
    let num_cells = decomp.num_cells();
    let mortar_dim = space.dim();
    let system = DDSystem::new(decomp, perm, case.dirichlet_problem(), space, config.settings)?;
    let sol = system.solve()?;
    let errors = DdErrors::compute(&system, &sol, case);
    Ok(LevelResult { level, h_min, num_cells, mortar_dim, errors, report: sol.report })
}

/// Example-1 refinement study; returns the rate table and per-level detail.
pub fn convergence_study(config: &StudyConfig) -> Result<(RateTable, Vec<LevelResult>)> {
    if config.levels < 2 {
        return Err(Error::InvalidConfig(format!("a study needs at least 2 levels, got {}", config.levels)));
    }
    let case = example1_case();
    let mut table = RateTable::default();
    let mut levels = Vec::with_capacity(config.levels);
    for l in 0..config.levels {
        let r = solve_level(&case, config, l)?;
        table.rows.push(RateRow {
            h_min: r.h_min,
            e_u: r.errors.e_u,
            e_p: r.errors.e_p(config.norm),
            e_lambda: r.errors.e_lambda,
            e_qlambda: r.errors.e_qlambda,
            iterations: r.report.iterations,
        });
        levels.push(r);
    }
    Ok((table, levels))
}
