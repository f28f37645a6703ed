//! `key = value` run configuration.
//!
//! One key per line, dotted names, `#` starts a comment. Every accepted key
//! and its default is listed in [`KEYS`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fluxmortar::ddsolver::KrylovMethod;
use fluxmortar::mesh::{ElementKind, Extent};
use fluxmortar::mortar::{MortarKind, Variant};
use fluxmortar::mpfa::{BcKind, ContinuityPoint, Raster, Tensor};
use serde_json::{json, Value};
use thiserror::Error;

/// Accepted keys with their defaults; `-` marks mode-dependent defaults.
pub const KEYS: &[(&str, &str)] = &[
    ("mode", "-"),
    ("output", "out"),
    ("domain", "-"),
    ("subdomains", "-"),
    ("resolution", "8"),
    ("refinement", "0"),
    ("levels", "5"),
    ("element", "tri"),
    ("mortar.cells", "-"),
    ("mortar.degree", "1"),
    ("mortar.continuity", "continuous"),
    ("variant", "flat"),
    ("mpfa.continuity", "auto"),
    ("permeability", "scalar"),
    ("permeability.value", "1"),
    ("permeability.tensor", "1 0 1"),
    ("permeability.raster", ""),
    ("permeability.raster_size", "60 220"),
    ("permeability.synthetic_seed", "1"),
    ("permeability.decades", "6"),
    ("permeability.anisotropy", "1"),
    ("permeability.rotation", "0"),
    ("problem", "-"),
    ("problem.linear", "0 1 1"),
    ("boundary", "dirichlet dirichlet dirichlet dirichlet"),
    ("solver.tol", "1e-10"),
    ("solver.max_it", "500"),
    ("solver.method", "cg"),
    ("solver.precondition", "true"),
    ("solver.workers", "1"),
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Convergence,
    Solve,
    OracleCompare,
    DemoRaster,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Convergence => "convergence",
            Mode::Solve => "solve",
            Mode::OracleCompare => "oracle-compare",
            Mode::DemoRaster => "demo-raster",
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "convergence" => Ok(Mode::Convergence),
            "solve" => Ok(Mode::Solve),
            "oracle-compare" => Ok(Mode::OracleCompare),
            "demo-raster" => Ok(Mode::DemoRaster),
            _ => Err(format!("unknown mode `{s}` (expected convergence, solve, oracle-compare or demo-raster)")),
        }
    }
}

/// Permeability source.
#[derive(Debug, Clone, PartialEq)]
pub enum PermSpec {
    Tensor(Tensor),
    /// Raster read from disk or synthesized, scaled by `anisotropy` in the
    /// second principal direction and rotated by `rotation` radians.
    Raster { raster: Raster, source: String, anisotropy: f64, rotation: f64 },
}

/// Exact solution or driving data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemSpec {
    Example1,
    /// `p = a + b x + c y`.
    Linear([f64; 3]),
    /// Unit pressure at the bottom, zero at the top, no flow on the sides.
    PressureDrop,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub output: PathBuf,
    pub domain: Extent,
    pub subdomains: (usize, usize),
    /// One entry, or one per subdomain in `j * nsx + i` order.
    pub resolution: Vec<(usize, usize)>,
    pub refinement: Vec<usize>,
    pub levels: usize,
    pub element: ElementKind,
    pub mortar_cells: usize,
    pub mortar: MortarKind,
    pub variant: Variant,
    pub continuity: ContinuityPoint,
    pub permeability: PermSpec,
    pub problem: ProblemSpec,
    pub boundary: [BcKind; 4],
    pub tol: f64,
    pub max_it: usize,
    pub method: KrylovMethod,
    pub precondition: bool,
    pub workers: usize,
}

struct Entries {
    values: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.values.get(key)
    }

    fn line(&self, key: &str) -> usize {
        self.values.get(key).map_or(0, |v| v.0)
    }

    fn get<T>(&self, key: &str, default: &str, parse: impl Fn(&str) -> Result<T, String>) -> Result<T, ConfigError> {
        match self.values.get(key) {
            Some((line, v)) => parse(v).map_err(|m| ConfigError::Line { line: *line, message: format!("{key}: {m}") }),
            None => parse(default).map_err(|m| ConfigError::Invalid(format!("default of {key}: {m}"))),
        }
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        match self.values.get(key) {
            Some((line, _)) => ConfigError::Line { line: *line, message: format!("{key}: {}", message.into()) },
            None => ConfigError::Invalid(format!("{key}: {}", message.into())),
        }
    }
}

fn number<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse::<T>().map_err(|_| format!("expected a {}, found `{s}`", std::any::type_name::<T>()))
}

fn list<T: FromStr>(s: &str, len: Option<usize>) -> Result<Vec<T>, String> {
    let v = s
        .split_whitespace()
        .map(|t| t.parse::<T>().map_err(|_| format!("expected a list of {}, found `{t}`", std::any::type_name::<T>())))
        .collect::<Result<Vec<T>, String>>()?;
    match len {
        Some(n) if v.len() != n => Err(format!("expected {n} values, found {}", v.len())),
        _ => Ok(v),
    }
}

fn positive_counts(s: &str) -> Result<Vec<usize>, String> {
    let v: Vec<usize> = list(s, None)?;
    if v.is_empty() || v.contains(&0) {
        return Err(format!("counts must be at least 1, found `{s}`"));
    }
    Ok(v)
}

fn boolean(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, found `{s}`")),
    }
}

fn bc(s: &str) -> Result<BcKind, String> {
    match s {
        "dirichlet" | "d" => Ok(BcKind::Dirichlet),
        "neumann" | "n" => Ok(BcKind::Neumann),
        _ => Err(format!("expected dirichlet or neumann, found `{s}`")),
    }
}

fn continuity(s: &str) -> Result<ContinuityPoint, String> {
    match s {
        "auto" => Ok(ContinuityPoint::Auto),
        "midpoint" => Ok(ContinuityPoint::Midpoint),
        _ => match s.parse::<f64>() {
            Ok(t) if t > 0.0 && t < 1.0 => Ok(ContinuityPoint::Fraction(t)),
            _ => Err(format!("expected auto, midpoint or a fraction in (0, 1), found `{s}`")),
        },
    }
}

/// Parse configuration text; relative paths resolve against `base`.
pub fn parse_str(text: &str, base: &Path) -> Result<RunConfig, ConfigError> {
    let mut values = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(ConfigError::Line { line, message: format!("expected `key = value`, found `{content}`") });
        };
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.iter().any(|(name, _)| *name == k) {
            return Err(ConfigError::Line { line, message: format!("unknown key `{k}`") });
        }
        if let Some((first, _)) = values.insert(k.to_string(), (line, v.to_string())) {
            return Err(ConfigError::Line { line, message: format!("duplicate key `{k}` (first set on line {first})") });
        }
    }
    let e = Entries { values };
    let mode: Mode = match e.raw("mode") {
        Some((line, v)) => v.parse().map_err(|m| ConfigError::Line { line: *line, message: m })?,
        None => return Err(ConfigError::Invalid("missing required key `mode`".into())),
    };
    let demo = mode == Mode::DemoRaster;

    let permeability = match e.get("permeability", if demo { "raster" } else { "scalar" }, |s| Ok(s.to_string()))?.as_str() {
        "scalar" => {
            let k: f64 = e.get("permeability.value", "1", number)?;
            if !(k > 0.0 && k.is_finite()) {
                return Err(e.err("permeability.value", format!("must be positive, found {k}")));
            }
            PermSpec::Tensor(Tensor::isotropic(k))
        }
        "tensor" => {
            let v: Vec<f64> = e.get("permeability.tensor", "1 0 1", |s| list(s, Some(3)))?;
            let t = Tensor([v[0], v[1], v[2]]);
            if !t.is_spd() {
                return Err(e.err("permeability.tensor", "tensor `kxx kxy kyy` is not symmetric positive definite"));
            }
            PermSpec::Tensor(t)
        }
        "raster" => {
            let size: Vec<usize> = e.get("permeability.raster_size", "60 220", |s| {
                let v = positive_counts(s)?;
                if v.len() != 2 { Err(format!("expected `nx ny`, found `{s}`")) } else { Ok(v) }
            })?;
            let anisotropy: f64 = e.get("permeability.anisotropy", "1", number)?;
            let rotation: f64 = e.get("permeability.rotation", "0", number)?;
            if !(anisotropy > 0.0) {
                return Err(e.err("permeability.anisotropy", "must be positive"));
            }
            let (raster, source) = match e.raw("permeability.raster") {
                Some((line, path)) if !path.is_empty() => {
                    let p = base.join(path);
                    let text = std::fs::read_to_string(&p)
                        .map_err(|err| ConfigError::Line { line: *line, message: format!("cannot read {}: {err}", p.display()) })?;
                    let r = Raster::parse(&text, size[0], size[1])
                        .map_err(|err| ConfigError::Line { line: *line, message: format!("{}: {err}", p.display()) })?;
                    (r, p.display().to_string())
                }
                _ => {
                    let seed: u64 = e.get("permeability.synthetic_seed", "1", number)?;
                    let decades: f64 = e.get("permeability.decades", "6", number)?;
                    let r = Raster::synthetic(size[0], size[1], decades, seed)
                        .map_err(|err| e.err("permeability.decades", err.to_string()))?;
                    (r, format!("synthetic(seed={seed}, decades={decades})"))
                }
            };
            PermSpec::Raster { raster, source, anisotropy, rotation }
        }
        other => return Err(e.err("permeability", format!("expected scalar, tensor or raster, found `{other}`"))),
    };

    let default_domain = match &permeability {
        PermSpec::Raster { raster, .. } if demo => format!("0 0 {} {}", raster.nx, raster.ny),
        _ => "0 0 2 2".to_string(),
    };
    let d: Vec<f64> = e.get("domain", &default_domain, |s| list(s, Some(4)))?;
    let domain = Extent::new(d[0], d[1], d[2], d[3]).map_err(|err| e.err("domain", err.to_string()))?;

    let subdomains = e.get("subdomains", if demo { "3 5" } else { "3 3" }, |s| {
        let v = positive_counts(s)?;
        if v.len() != 2 { Err(format!("expected `nsx nsy`, found `{s}`")) } else { Ok((v[0], v[1])) }
    })?;
    let nsub = subdomains.0 * subdomains.1;
    let resolution: Vec<(usize, usize)> = e.get("resolution", "8", |s| {
        let v = positive_counts(s)?;
        let pairs: Vec<(usize, usize)> = if v.len() == 1 || v.len() == nsub {
            v.iter().map(|&n| (n, n)).collect()
        } else if v.len() == 2 * nsub && nsub > 1 {
            v.chunks(2).map(|c| (c[0], c[1])).collect()
        } else {
            return Err(format!("expected 1, {nsub} or {} counts for {nsub} subdomains, found {}", 2 * nsub, v.len()));
        };
        Ok(pairs)
    })?;
    let refinement: Vec<usize> = e.get("refinement", "0", |s| {
        let v: Vec<usize> = list(s, None)?;
        if v.len() == 1 || v.len() == nsub {
            Ok(v)
        } else {
            Err(format!("expected 1 or {nsub} refinement counts, found {}", v.len()))
        }
    })?;
    if let PermSpec::Raster { raster, .. } = &permeability {
        if demo && (raster.nx % subdomains.0 != 0 || raster.ny % subdomains.1 != 0) {
            return Err(e.err(
                "subdomains",
                format!("raster {}x{} cannot be split evenly into {}x{} subdomains", raster.nx, raster.ny, subdomains.0, subdomains.1),
            ));
        }
    }
    let levels: usize = e.get("levels", "5", number)?;
    if mode == Mode::Convergence && levels < 2 {
        return Err(e.err("levels", format!("a convergence study needs at least 2 levels, found {levels}")));
    }
    let element: ElementKind = e.get("element", if demo { "quad" } else { "tri" }, |s| s.parse())?;
    let mortar_cells: usize = e.get("mortar.cells", if demo { "10" } else { "3" }, number)?;
    if mortar_cells == 0 {
        return Err(e.err("mortar.cells", "must be at least 1"));
    }
    let degree: usize = e.get("mortar.degree", "1", number)?;
    let continuous = e.get("mortar.continuity", "continuous", |s| match s {
        "continuous" => Ok(true),
        "discontinuous" => Ok(false),
        _ => Err(format!("expected continuous or discontinuous, found `{s}`")),
    })?;
    let mortar = match (degree, continuous) {
        (0, _) => MortarKind::P0,
        (1, true) => MortarKind::P1,
        (1, false) => MortarKind::P1Discontinuous,
        _ => return Err(e.err("mortar.degree", format!("supported degrees are 0 and 1, found {degree}"))),
    };
    let variant: Variant = e.get("variant", "flat", |s| s.parse())?;
    let continuity = e.get("mpfa.continuity", "auto", continuity)?;
    let problem = e.get("problem", if demo { "pressure-drop" } else { "example1" }, |s| match s {
        "example1" => Ok(ProblemSpec::Example1),
        "linear" => Ok(ProblemSpec::Linear([0.0; 3])),
        "pressure-drop" => Ok(ProblemSpec::PressureDrop),
        _ => Err(format!("expected example1, linear or pressure-drop, found `{s}`")),
    })?;
    let problem = match problem {
        ProblemSpec::Linear(_) => {
            let v: Vec<f64> = e.get("problem.linear", "0 1 1", |s| list(s, Some(3)))?;
            ProblemSpec::Linear([v[0], v[1], v[2]])
        }
        p => p,
    };
    if mode == Mode::Convergence && problem != ProblemSpec::Example1 {
        return Err(e.err("problem", "convergence studies use the example1 solution"));
    }
    if problem != ProblemSpec::PressureDrop && !matches!(permeability, PermSpec::Tensor(_)) {
        return Err(e.err("permeability", "manufactured problems need a constant scalar or tensor permeability"));
    }
    let default_boundary = if demo { "neumann neumann dirichlet dirichlet" } else { "dirichlet dirichlet dirichlet dirichlet" };
    let b: Vec<BcKind> = e.get("boundary", default_boundary, |s| {
        let v = s.split_whitespace().map(bc).collect::<Result<Vec<_>, _>>()?;
        if v.len() != 4 { Err(format!("expected 4 kinds (left right bottom top), found {}", v.len())) } else { Ok(v) }
    })?;
    let boundary = [b[0], b[1], b[2], b[3]];
    if demo && boundary != [BcKind::Neumann, BcKind::Neumann, BcKind::Dirichlet, BcKind::Dirichlet] {
        return Err(e.err("boundary", "demo-raster uses no-flow sides with dirichlet bottom and top"));
    }
    if problem != ProblemSpec::PressureDrop && boundary.iter().all(|&k| k == BcKind::Neumann) {
        return Err(e.err("boundary", "at least one side must be dirichlet"));
    }
    let tol: f64 = e.get("solver.tol", "1e-10", number)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(e.err("solver.tol", format!("must lie in (0, 1), found {tol}")));
    }
    let max_it: usize = e.get("solver.max_it", "500", number)?;
    if max_it == 0 {
        return Err(e.err("solver.max_it", "must be at least 1"));
    }
    let method = e.get("solver.method", "cg", |s| match s {
        "cg" | "pcg" => Ok(KrylovMethod::Cg),
        "gmres" => Ok(KrylovMethod::Gmres),
        _ => Err(format!("expected cg or gmres, found `{s}`")),
    })?;
    let precondition = e.get("solver.precondition", "true", boolean)?;
    let workers: usize = e.get("solver.workers", "1", number)?;
    let output = base.join(e.get("output", "out", |s| Ok(PathBuf::from(s)))?);

    let config = RunConfig {
        mode,
        output,
        domain,
        subdomains,
        resolution,
        refinement,
        levels,
        element,
        mortar_cells,
        mortar,
        variant,
        continuity,
        permeability,
        problem,
        boundary,
        tol,
        max_it,
        method,
        precondition,
        workers,
    };
    if mode == Mode::OracleCompare {
        if let Some(hint) = config.matching_problem() {
            return Err(ConfigError::Line {
                line: e.line("resolution").max(e.line("refinement")).max(e.line("domain")),
                message: format!("oracle-compare needs matching subdomain grids: {hint}"),
            });
        }
    }
    Ok(config)
}

/// Read and validate a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_str(&text, path.parent().unwrap_or(Path::new(".")))
}

impl RunConfig {
    /// Cells per side and refinement count of subdomain `s`.
    pub fn subdomain_grid(&self, s: usize) -> ((usize, usize), usize) {
        let r = if self.resolution.len() == 1 { self.resolution[0] } else { self.resolution[s] };
        let l = if self.refinement.len() == 1 { self.refinement[0] } else { self.refinement[s] };
        (r, l)
    }

    /// `None` when all subdomain grids share one spacing; otherwise a hint.
    pub fn matching_problem(&self) -> Option<String> {
        let (nsx, nsy) = self.subdomains;
        let (hx, hy) = (self.domain.width() / nsx as f64, self.domain.height() / nsy as f64);
        let spacing = |s: usize| {
            let ((nx, ny), l) = self.subdomain_grid(s);
            let f = (1usize << l) as f64;
            (hx / (nx as f64 * f), hy / (ny as f64 * f))
        };
        let first = spacing(0);
        for s in 1..nsx * nsy {
            let h = spacing(s);
            if (h.0 - first.0).abs() > 1e-12 * first.0 || (h.1 - first.1).abs() > 1e-12 * first.1 {
                return Some(format!(
                    "subdomain {s} has spacing {:.4e} x {:.4e} but subdomain 0 has {:.4e} x {:.4e}; use one resolution and one refinement count",
                    h.0, h.1, first.0, first.1
                ));
            }
        }
        None
    }

    /// Every resolved setting, defaults included.
    pub fn to_json(&self) -> Value {
        let perm = match &self.permeability {
            PermSpec::Tensor(t) => json!({ "kind": "tensor", "tensor": t.0 }),
            PermSpec::Raster { raster, source, anisotropy, rotation } => {
                let (lo, hi) = raster.min_max();
                json!({
                    "kind": "raster", "source": source, "nx": raster.nx, "ny": raster.ny,
                    "min": lo, "max": hi, "anisotropy": anisotropy, "rotation": rotation,
                })
            }
        };
        let problem = match self.problem {
            ProblemSpec::Example1 => json!("example1"),
            ProblemSpec::Linear(c) => json!({ "linear": c }),
            ProblemSpec::PressureDrop => json!("pressure-drop"),
        };
        let bc_name = |k: BcKind| match k {
            BcKind::Dirichlet => "dirichlet",
            BcKind::Neumann => "neumann",
        };
        json!({
            "mode": self.mode.name(),
            "output": self.output.display().to_string(),
            "domain": [self.domain.x0, self.domain.y0, self.domain.x1, self.domain.y1],
            "subdomains": [self.subdomains.0, self.subdomains.1],
            "resolution": self.resolution.iter().map(|r| [r.0, r.1]).collect::<Vec<_>>(),
            "refinement": self.refinement,
            "levels": self.levels,
            "element": match self.element { ElementKind::Quad => "quad", ElementKind::TriCrisscross => "tri" },
            "mortar": {
                "cells": self.mortar_cells,
                "degree": self.mortar.degree(),
                "continuity": if self.mortar == MortarKind::P1Discontinuous { "discontinuous" } else { "continuous" },
            },
            "variant": match self.variant { Variant::Flat => "flat", Variant::Sharp => "sharp" },
            "mpfa_continuity": match self.continuity {
                ContinuityPoint::Auto => json!("auto"),
                ContinuityPoint::Midpoint => json!("midpoint"),
                ContinuityPoint::Fraction(t) => json!(t),
            },
            "permeability": perm,
            "problem": problem,
            "boundary": self.boundary.map(bc_name),
            "solver": {
                "tol": self.tol,
                "max_it": self.max_it,
                "method": match self.method { KrylovMethod::Cg => "cg", KrylovMethod::Gmres => "gmres" },
                "precondition": self.precondition,
                "workers": self.workers,
            },
        })
    }
}
