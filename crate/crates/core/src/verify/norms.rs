use super::manufactured::ManufacturedCase;
use crate::ddsolver::{DDSystem, DdSolution};
use crate::mesh::{dot, Decomposition, Mesh};
use crate::mortar::{MortarSpace, Projections};
use crate::quadrature::{gauss_legendre, integrate_polygon, integrate_segment};

/// Pressure error measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PressureNorm {
    /// `sqrt(sum |cell| (p_h - p(x_cell))^2)`.
    #[default]
    CellCenter,
    /// `L2` norm of `p_h - p` with `p_h` cellwise constant.
    L2,
}

fn sq_pressure_center(mesh: &Mesh, p: &[f64], case: &ManufacturedCase) -> f64 {
    (0..mesh.num_cells()).map(|c| mesh.area(c) * (p[c] - case.pressure(mesh.centroid(c))).powi(2)).sum()
}

fn sq_pressure_l2(mesh: &Mesh, p: &[f64], case: &ManufacturedCase) -> f64 {
    (0..mesh.num_cells())
        .map(|c| integrate_polygon(&mesh.cell_points(c), mesh.centroid(c), |x| (p[c] - case.pressure(x)).powi(2)))
        .sum()
}

fn sq_flux(mesh: &Mesh, fluxes: &[f64], case: &ManufacturedCase) -> f64 {
    let mut total = 0.0;
    let facet_sq: Vec<f64> = mesh
        .facets()
        .iter()
        .enumerate()
        .map(|(f, facet)| {
            let uh = fluxes[f] / facet.length;
            let (a, b) = (mesh.vertex(facet.vertices[0]), mesh.vertex(facet.vertices[1]));
            integrate_segment(a, b, 3, |x| (dot(case.flux(x), facet.normal) - uh).powi(2)) / facet.length
        })
        .collect();
    for c in 0..mesh.num_cells() {
        let s: f64 = mesh.cell_facets(c).iter().map(|&f| facet_sq[f]).sum();
        total += mesh.area(c) * s;
    }
    total
}

/// Cell-centre pressure error.
pub fn error_pressure(mesh: &Mesh, p: &[f64], case: &ManufacturedCase) -> f64 {
    sq_pressure_center(mesh, p, case).sqrt()
}

/// `L2` pressure error with 7-point triangle quadrature on a centroid fan.
pub fn error_pressure_l2(mesh: &Mesh, p: &[f64], case: &ManufacturedCase) -> f64 {
    sq_pressure_l2(mesh, p, case).sqrt()
}

/// `sqrt(sum_cells |cell| sum_facets |f|^{-1} int_f (u.n - u_h.n)^2)` with
/// facet-constant `u_h.n`.
pub fn error_flux(mesh: &Mesh, fluxes: &[f64], case: &ManufacturedCase) -> f64 {
    sq_flux(mesh, fluxes, case).sqrt()
}

/// `L2(Gamma)` error of the mortar flux against `u . nu`.
pub fn error_mortar(decomp: &Decomposition, space: &MortarSpace, lambda: &[f64], case: &ManufacturedCase) -> f64 {
    let mut total = 0.0;
    for (k, iface) in decomp.interfaces().iter().enumerate() {
        let m = space.interface(k);
        let coeffs = &lambda[space.range(k)];
        for c in 0..m.grid.num_cells() {
            let (a, b) = (m.grid.breaks[c], m.grid.breaks[c + 1]);
            let h = 0.5 * (b - a);
            for &(xi, w) in gauss_legendre(3) {
                let s = a + h * (xi + 1.0);
                let exact = dot(case.flux(iface.point_at(s)), iface.normal);
                let lh: f64 = m.basis_on_cell(c, s).iter().map(|&(d, v)| v * coeffs[d]).sum();
                total += w * h * (exact - lh).powi(2);
            }
        }
    }
    total.sqrt()
}

/// `L2` error of the projected mortar `Q_k lambda` against `u . nu_k` on both
/// sides of every interface.
pub fn error_projected_mortar(
    decomp: &Decomposition,
    proj: &Projections,
    lambda: &[f64],
    case: &ManufacturedCase,
) -> f64 {
    let mut total = 0.0;
    for (k, iface) in decomp.interfaces().iter().enumerate() {
        let ip = proj.interface(k);
        for side in 0..2 {
            let sgn = if side == 0 { 1.0 } else { -1.0 };
            let q = ip.get(proj.variant(), side).mul_vec(&lambda[proj.range(k)]);
            for (f, &(s0, s1)) in iface.ranges[side].iter().enumerate() {
                let (a, b) = (iface.point_at(s0), iface.point_at(s1));
                total += integrate_segment(a, b, 3, |x| (sgn * dot(case.flux(x), iface.normal) - q[f]).powi(2));
            }
        }
    }
    total.sqrt()
}

/// Errors of a domain decomposition solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdErrors {
    pub e_u: f64,
    /// Cell-centre pressure error.
    pub e_p_center: f64,
    pub e_p_l2: f64,
    pub e_lambda: f64,
    pub e_qlambda: f64,
}

impl DdErrors {
    pub fn compute(system: &DDSystem, sol: &DdSolution, case: &ManufacturedCase) -> Self {
        let d = system.decomposition();
        let (mut u, mut pc, mut pl) = (0.0, 0.0, 0.0);
        for s in 0..d.num_subdomains() {
            let mesh = d.mesh(s);
            u += sq_flux(mesh, &sol.fluxes[s], case);
            pc += sq_pressure_center(mesh, &sol.pressure[s], case);
            pl += sq_pressure_l2(mesh, &sol.pressure[s], case);
        }
        Self {
            e_u: u.sqrt(),
            e_p_center: pc.sqrt(),
            e_p_l2: pl.sqrt(),
            e_lambda: error_mortar(d, system.mortar_space(), &sol.lambda, case),
            e_qlambda: error_projected_mortar(d, system.projections(), &sol.lambda, case),
        }
    }

    pub fn e_p(&self, norm: PressureNorm) -> f64 {
        match norm {
            PressureNorm::CellCenter => self.e_p_center,
            PressureNorm::L2 => self.e_p_l2,
        }
    }
}
