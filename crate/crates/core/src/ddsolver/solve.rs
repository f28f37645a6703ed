use std::time::Instant;

use super::system::{DDSystem, KrylovMethod};
use crate::linalg::{axpy, cg, gmres, norm2, norm_inf, KrylovReport};
use crate::mpfa::conservation_residual;
use crate::{Error, Result};

/// Diagnostics of one domain decomposition solve.
#[derive(Debug, Clone, Default)]
pub struct SolveReport {
    pub iterations: usize,
    /// Relative residual history of the interface solve.
    pub history: Vec<f64>,
    pub converged: bool,
    /// Wall time of steps 1 to 5 in seconds.
    pub step_seconds: [f64; 5],
    /// Mortar condition constant per interface.
    pub sigma: Vec<f64>,
    /// Largest nullspace multiplier after the particular solves.
    pub r_f: f64,
    /// Largest per-cell balance residual relative to the data scale.
    pub conservation: f64,
    /// Net outer outflux minus total source, relative to the data scale.
    pub global_balance: f64,
    /// Largest `|B lambda_k| / |lambda_k|` over the interface iterates.
    pub max_kernel_defect: f64,
}

/// Solution of a domain decomposition solve.
#[derive(Debug, Clone)]
pub struct DdSolution {
    /// Cell pressures per subdomain.
    pub pressure: Vec<Vec<f64>>,
    /// Facet fluxes per subdomain, oriented along the facet normals.
    pub fluxes: Vec<Vec<f64>>,
    /// Boundary data per subdomain used for the final Neumann problems.
    pub data: Vec<Vec<f64>>,
    /// Mortar flux.
    pub lambda: Vec<f64>,
    pub report: SolveReport,
}

impl DDSystem {
    /// Preconditioned Krylov solve of `P S lambda = P rhs` on `ker B`.
    ///
    /// `observer` sees every iterate.
    pub fn pcg_interface(
        &self,
        rhs: &[f64],
        observer: &mut dyn FnMut(usize, &[f64]),
    ) -> Result<(Vec<f64>, KrylovReport)> {
        let b = self.coarse.project(rhs);
        let s = self.settings;
        let mut apply_a = |v: &[f64]| -> Result<Vec<f64>> { Ok(self.coarse.project(&self.apply_s(v)?)) };
        let mut apply_m = |r: &[f64]| -> Result<Vec<f64>> {
            if s.precondition {
                Ok(self.coarse.project(&self.apply_m_inverse(r)?))
            } else {
                Ok(self.coarse.project(r))
            }
        };
        match s.method {
            KrylovMethod::Cg => cg(&mut apply_a, &mut apply_m, &b, s.tol, s.max_it, observer),
            KrylovMethod::Gmres => {
                let (x, rep) = gmres(&mut apply_a, &mut apply_m, &b, s.tol, s.gmres_restart, s.max_it)?;
                observer(rep.iterations, &x);
                Ok((x, rep))
            }
        }
    }

    /// Five-step solve: coarse source lift, particular solves, interface
    /// iteration, coarse pressure correction and assembly.
    pub fn solve(&self) -> Result<DdSolution> {
        self.solve_observed(&mut |_, _| {})
    }

    pub fn solve_observed(&self, observer: &mut dyn FnMut(usize, &[f64])) -> Result<DdSolution> {
        let mut report = SolveReport { sigma: self.proj.sigmas(), ..Default::default() };
        let n_sub = self.subdomains.len();

        // 1. lift the source of floating subdomains onto the mortar
        let t = Instant::now();
        let fbar: Vec<f64> = self
            .floating()
            .iter()
            .map(|&s| {
                let sd = &self.subdomains[s];
                sd.source.iter().sum::<f64>() - sd.outer_data.iter().sum::<f64>()
            })
            .collect();
        let lambda_f = self.coarse.lift(&fbar);
        report.step_seconds[0] = t.elapsed().as_secs_f64();

        // 2. particular solves
        let t = Instant::now();
        let particular = self.exec.try_map(n_sub, |s| {
            let sd = &self.subdomains[s];
            let data = self.neumann_data(s, &lambda_f, true);
            let sol = sd.neumann.solve(&data, &sd.source)?;
            let ph = sd.neumann.boundary_pressures(&sol.pressure, &data);
            let scale = (sd.source.iter().map(|v| v.abs()).sum::<f64>() + data.iter().map(|v| v.abs()).sum::<f64>())
                / sd.neumann.areas().iter().sum::<f64>();
            Ok((sol, data, ph, scale))
        })?;
        let mut rhs = vec![0.0; self.dim()];
        for (s, (sol, _, ph, scale)) in particular.iter().enumerate() {
            let rel = sol.multiplier.abs() / scale.max(f64::MIN_POSITIVE);
            report.r_f = report.r_f.max(rel);
            if sol.multiplier != 0.0 && rel > 1e-10 {
                return Err(Error::Compatibility(format!(
                    "subdomain {s} multiplier {:.3e} after the particular solve",
                    sol.multiplier
                )));
            }
            axpy(1.0, &self.proj.from_subdomain(&self.decomp, s, ph), &mut rhs);
        }
        report.step_seconds[1] = t.elapsed().as_secs_f64();

        // 3. interface iteration on ker B
        let t = Instant::now();
        let mut defect: f64 = 0.0;
        let coarse = &self.coarse;
        let (lambda0, krep) = self.pcg_interface(&rhs, &mut |k, x| {
            if !coarse.is_empty() {
                let nx = norm2(x);
                if nx > 0.0 {
                    defect = defect.max(norm2(&coarse.apply_b(x)) / nx);
                }
            }
            observer(k, x);
        })?;
        report.iterations = krep.iterations;
        report.history = match krep.history.first() {
            Some(&r0) if r0 > 0.0 => krep.history.iter().map(|r| r / r0).collect(),
            _ => krep.history.clone(),
        };
        report.converged = krep.converged;
        report.max_kernel_defect = defect;
        report.step_seconds[2] = t.elapsed().as_secs_f64();

        // 4. coarse pressure correction
        let t = Instant::now();
        let homog = self.exec.try_map(n_sub, |s| {
            let sd = &self.subdomains[s];
            let data = self.neumann_data(s, &lambda0, false);
            let sol = sd.neumann.solve(&data, &vec![0.0; sd.source.len()])?;
            let ph = sd.neumann.boundary_pressures(&sol.pressure, &data);
            Ok((sol.pressure, data, ph))
        })?;
        let mut gbar = vec![0.0; self.dim()];
        for s in 0..n_sub {
            let ph: Vec<f64> = particular[s].2.iter().zip(&homog[s].2).map(|(a, b)| a + b).collect();
            axpy(-1.0, &self.proj.from_subdomain(&self.decomp, s, &ph), &mut gbar);
        }
        let pbar = self.coarse.pressure_correction(&gbar);
        report.step_seconds[3] = t.elapsed().as_secs_f64();

        // 5. assemble
        let t = Instant::now();
        let mut pressure = Vec::with_capacity(n_sub);
        let mut fluxes = Vec::with_capacity(n_sub);
        let mut data = Vec::with_capacity(n_sub);
        let mut worst: f64 = 0.0;
        let (mut outflux, mut total_source, mut scale) = (0.0, 0.0, 0.0f64);
        for s in 0..n_sub {
            let sd = &self.subdomains[s];
            let mut p: Vec<f64> = particular[s].0.pressure.iter().zip(&homog[s].0).map(|(a, b)| a + b).collect();
            if let Some(i) = self.floating().iter().position(|&x| x == s) {
                p.iter_mut().for_each(|v| *v += pbar[i]);
            }
            let d: Vec<f64> = particular[s].1.iter().zip(&homog[s].1).map(|(a, b)| a + b).collect();
            let f = sd.neumann.fluxes(&p, &d);
            let mesh = self.decomp.mesh(s);
            let res = conservation_residual(mesh, &f, &sd.source);
            worst = worst.max(norm_inf(&res));
            scale = scale.max(norm_inf(&sd.source)).max(norm_inf(&f));
            total_source += sd.source.iter().sum::<f64>();
            for (b, &fi) in mesh.boundary_facets().iter().enumerate() {
                if sd.sides[b].is_some() {
                    outflux += f[fi];
                }
            }
            pressure.push(p);
            fluxes.push(f);
            data.push(d);
        }
        let scale = scale.max(f64::MIN_POSITIVE);
        report.conservation = worst / scale;
        report.global_balance = (outflux - total_source).abs() / scale;
        let mut lambda = lambda0;
        axpy(1.0, &lambda_f, &mut lambda);
        report.step_seconds[4] = t.elapsed().as_secs_f64();
        if report.conservation > 1e-10 {
            return Err(Error::Compatibility(format!(
                "per-cell mass balance residual {:.3e} exceeds 1e-10",
                report.conservation
            )));
        }
        Ok(DdSolution { pressure, fluxes, data, lambda, report })
    }
}
