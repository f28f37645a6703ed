//! Mode dispatch and artifact writing.

use std::path::{Path, PathBuf};
use std::time::Instant;

use fluxmortar::ddsolver::{monolithic_solve, DDSystem, DdSolution, Problem, SolveReport, SolverSettings};
use fluxmortar::error::ErrorCategory;
use fluxmortar::mesh::{Decomposition, Mesh};
use fluxmortar::mortar::{MortarKind, MortarSpace};
use fluxmortar::mpfa::{MpfaOptions, PermField};
use fluxmortar::verify::{
    convergence_study, example1_case_with, linear_case, DdErrors, ManufacturedCase, RasterDemo, StudyConfig,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{ConfigError, Mode, PermSpec, ProblemSpec, RunConfig};
use crate::vtk::{export_fields, Block};

/// Largest pressure difference accepted by `oracle-compare`.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] fluxmortar::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl CliError {
    /// 2 configuration, 3 assembly, 4 solver, 5 failed assertion.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 2,
            CliError::Solver(e) => match e.category() {
                ErrorCategory::Config | ErrorCategory::Io => 2,
                ErrorCategory::Assembly => 3,
                ErrorCategory::Solver => 4,
            },
            CliError::Assertion(_) => 5,
        }
    }
}

/// Outcome of a run: printed lines and the manifest written to disk.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub lines: Vec<String>,
    pub manifest: Value,
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Output { path: path.to_path_buf(), source })
}

fn settings(c: &RunConfig) -> SolverSettings {
    SolverSettings {
        variant: c.variant,
        tol: c.tol,
        max_it: c.max_it,
        method: c.method,
        precondition: c.precondition,
        workers: c.workers,
        mpfa: MpfaOptions { continuity: c.continuity },
        ..Default::default()
    }
}

fn report_json(r: &SolveReport) -> Value {
    json!({
        "iterations": r.iterations,
        "converged": r.converged,
        "residual_history": r.history,
        "sigma_min": r.sigma,
        "r_f": r.r_f,
        "conservation_residual": r.conservation,
        "global_balance": r.global_balance,
        "max_kernel_defect": r.max_kernel_defect,
        "step_seconds": r.step_seconds,
    })
}

fn errors_json(e: &DdErrors) -> Value {
    json!({
        "e_u": e.e_u, "e_p_center": e.e_p_center, "e_p_l2": e.e_p_l2,
        "e_lambda": e.e_lambda, "e_Qlambda": e.e_qlambda,
    })
}

fn case(c: &RunConfig) -> Option<ManufacturedCase> {
    let PermSpec::Tensor(k) = c.permeability else { return None };
    match c.problem {
        ProblemSpec::Example1 => Some(example1_case_with(c.domain, k)),
        ProblemSpec::Linear([a, b, cc]) => Some(linear_case(c.domain, k, a, b, cc)),
        ProblemSpec::PressureDrop => None,
    }
}

fn decomposition(c: &RunConfig) -> Result<Decomposition, CliError> {
    let (nsx, _) = c.subdomains;
    let d = Decomposition::structured(c.domain, c.subdomains.0, c.subdomains.1, |i, j| c.subdomain_grid(j * nsx + i).0, c.element)?;
    let levels: Vec<usize> = (0..d.num_subdomains()).map(|s| c.subdomain_grid(s).1).collect();
    Ok(d.refine_each(&levels)?)
}

fn perm_fields(c: &RunConfig, d: &Decomposition) -> Result<Vec<PermField>, CliError> {
    d.meshes().iter().map(|m| perm_field(c, m)).collect()
}

fn perm_field(c: &RunConfig, m: &Mesh) -> Result<PermField, CliError> {
    Ok(match &c.permeability {
        PermSpec::Tensor(k) => PermField::uniform(m.num_cells(), *k)?,
        PermSpec::Raster { raster, anisotropy, rotation, .. } => raster.permeability(&c.domain, m, *anisotropy, *rotation)?,
    })
}

fn problem(c: &RunConfig) -> Problem {
    match case(c) {
        Some(m) => m.problem(c.boundary),
        None => demo(c).problem(),
    }
}

fn demo(c: &RunConfig) -> RasterDemo {
    let raster = match &c.permeability {
        PermSpec::Raster { raster, .. } => raster.clone(),
        PermSpec::Tensor(_) => fluxmortar::mpfa::Raster::new(1, 1, vec![1.0]).unwrap(),
    };
    let (anisotropy, rotation) = match &c.permeability {
        PermSpec::Raster { anisotropy, rotation, .. } => (*anisotropy, *rotation),
        PermSpec::Tensor(_) => (1.0, 0.0),
    };
    RasterDemo {
        raster,
        domain: c.domain,
        subdomains: c.subdomains,
        mortar_cells: c.mortar_cells,
        mortar: c.mortar,
        element: c.element,
        anisotropy,
        rotation,
    }
}

fn export(dir: &Path, d: &Decomposition, sol: &DdSolution) -> Result<(), CliError> {
    let blocks: Vec<Block> = (0..d.num_subdomains())
        .map(|s| Block { mesh: d.mesh(s), pressure: &sol.pressure[s], fluxes: &sol.fluxes[s] })
        .collect();
    let path = dir.join("pressure.vtk");
    export_fields(&blocks, &path).map_err(|source| CliError::Output { path, source })
}

fn max_pressure_difference(d: &Decomposition, sol: &DdSolution, global: &Mesh, mono: &[f64]) -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    for s in 0..d.num_subdomains() {
        let m = d.mesh(s);
        for c in 0..m.num_cells() {
            let x = m.centroid(c);
            let g = global.locate(x).ok_or_else(|| {
                CliError::Config(ConfigError::Invalid(format!("cell centroid {x:?} of subdomain {s} lies outside the reference mesh")))
            })?;
            worst = worst.max((sol.pressure[s][c] - mono[g]).abs());
        }
    }
    Ok(worst)
}

fn run_convergence(c: &RunConfig) -> Result<RunSummary, CliError> {
    let study = StudyConfig {
        levels: c.levels,
        kind: c.element,
        mortar: c.mortar,
        mortar_cells: c.mortar_cells,
        settings: settings(c),
        ..Default::default()
    };
    let (table, levels) = convergence_study(&study)?;
    write(&c.output.join("rates.csv"), &table.to_csv())?;
    write(&c.output.join("rates_full.csv"), &table.to_csv_full())?;
    let per_level: Vec<Value> = levels
        .iter()
        .map(|l| {
            json!({
                "level": l.level, "h_min": l.h_min, "cells": l.num_cells, "mortar_dofs": l.mortar_dim,
                "errors": errors_json(&l.errors), "report": report_json(&l.report),
            })
        })
        .collect();
    let mut lines: Vec<String> = table.to_csv().lines().map(str::to_string).collect();
    lines.push(format!("wrote {}", c.output.join("rates.csv").display()));
    Ok(RunSummary { lines, manifest: json!({ "pressure_norm": "l2", "levels": per_level }) })
}

fn run_solve(c: &RunConfig) -> Result<RunSummary, CliError> {
    let d = decomposition(c)?;
    let cells = c.mortar_cells;
    let space = MortarSpace::uniform(&d, c.mortar, |_| cells)?;
    let sys = DDSystem::new(d.clone(), perm_fields(c, &d)?, problem(c), space, settings(c))?;
    let sol = sys.solve()?;
    export(&c.output, &d, &sol)?;
    let mut lines = vec![format!(
        "converged in {} iterations, conservation residual {:.2e}",
        sol.report.iterations, sol.report.conservation
    )];
    let mut manifest = json!({ "cells": d.num_cells(), "mortar_dofs": sys.dim(), "report": report_json(&sol.report) });
    if let Some(m) = case(c) {
        let e = DdErrors::compute(&sys, &sol, &m);
        lines.push(format!("e_u = {:.3e}, e_p = {:.3e}, e_lambda = {:.3e}", e.e_u, e.e_p_l2, e.e_lambda));
        manifest["errors"] = errors_json(&e);
    }
    Ok(RunSummary { lines, manifest })
}

fn run_oracle(c: &RunConfig) -> Result<RunSummary, CliError> {
    let d = decomposition(c)?;
    if !d.is_matching() {
        return Err(ConfigError::Invalid("oracle-compare needs matching subdomain grids".into()).into());
    }
    let space = MortarSpace::matching_trace(&d, MortarKind::P0);
    let sys = DDSystem::new(d.clone(), perm_fields(c, &d)?, problem(c), space, settings(c))?;
    let sol = sys.solve()?;
    let ((nx, ny), l) = c.subdomain_grid(0);
    let global = Mesh::structured(c.domain, nx * c.subdomains.0, ny * c.subdomains.1, c.element)?.refined(l)?;
    let gperm = perm_field(c, &global)?;
    let mono = monolithic_solve(&global, &c.domain, &gperm, &problem(c), settings(c).mpfa)?;
    let diff = max_pressure_difference(&d, &sol, &global, &mono.pressure)?;
    export(&c.output, &d, &sol)?;
    let manifest = json!({
        "cells": d.num_cells(), "mortar": "trace p0", "max_pressure_difference": diff,
        "tolerance": ORACLE_TOLERANCE, "report": report_json(&sol.report),
    });
    let lines = vec![format!("max |p_DD - p_mono| = {diff:.3e} ({} iterations)", sol.report.iterations)];
    let summary = RunSummary { lines, manifest };
    write_manifest(c, &summary)?;
    if !(diff <= ORACLE_TOLERANCE) {
        return Err(CliError::Assertion(format!("max |p_DD - p_mono| = {diff:.3e} exceeds {ORACLE_TOLERANCE:e}")));
    }
    Ok(summary)
}

fn run_demo(c: &RunConfig) -> Result<RunSummary, CliError> {
    let demo = demo(c);
    let sys = demo.system(settings(c))?;
    let sol = sys.solve()?;
    let d = sys.decomposition();
    export(&c.output, d, &sol)?;
    let pmax = sol.pressure.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let (global, mono) = demo.monolithic(&settings(c))?;
    let diff = max_pressure_difference(d, &sol, &global, &mono.pressure)?;
    let (lo, hi) = demo.raster.min_max();
    let lines = vec![
        format!("permeability range {lo:.2e} .. {hi:.2e}"),
        format!(
            "converged in {} iterations, max |p| = {pmax:.6}, max |p_DD - p_mono| = {diff:.3e}, conservation residual {:.2e}",
            sol.report.iterations, sol.report.conservation
        ),
    ];
    let manifest = json!({
        "cells": d.num_cells(), "mortar_dofs": sys.dim(), "max_abs_pressure": pmax,
        "max_pressure_difference_monolithic": diff,
        "monolithic_conservation_residual": mono.conservation_residual(&global),
        "report": report_json(&sol.report),
    });
    Ok(RunSummary { lines, manifest })
}

fn write_manifest(c: &RunConfig, s: &RunSummary) -> Result<(), CliError> {
    let mut m = json!({ "settings": c.to_json(), "results": s.manifest.clone() });
    m["package_version"] = json!(env!("CARGO_PKG_VERSION"));
    let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    write(&c.output.join("manifest.json"), &text)
}

/// Execute a validated configuration, writing artifacts into `c.output`.
pub fn run(c: &RunConfig) -> Result<RunSummary, CliError> {
    std::fs::create_dir_all(&c.output).map_err(|source| CliError::Output { path: c.output.clone(), source })?;
    let start = Instant::now();
    let mut summary = match c.mode {
        Mode::Convergence => run_convergence(c)?,
        Mode::Solve => run_solve(c)?,
        Mode::OracleCompare => run_oracle(c)?,
        Mode::DemoRaster => run_demo(c)?,
    };
    summary.manifest["wall_seconds"] = json!(start.elapsed().as_secs_f64());
    write_manifest(c, &summary)?;
    Ok(summary)
}
