use super::local::{local_gradient_system, LocalBc, LocalStencil};
use super::perm::PermField;
use super::region::{build_interaction_regions, ContinuityPoint, InteractionRegion};
use crate::linalg::{Factorization, SparseMatrix, TripletBuilder};
use crate::mesh::{Mesh, Point};
use crate::quadrature::integrate_polygon;
use crate::{Error, Result};

/// Boundary condition type of one boundary facet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

/// Assembly options.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MpfaOptions {
    pub continuity: ContinuityPoint,
}

/// Result of a subdomain solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdomainSolution {
    pub pressure: Vec<f64>,
    /// Nullspace multiplier; zero for operators without a nullspace.
    pub multiplier: f64,
}

/// Assembled MPFA-O operator of one subdomain for one boundary tagging.
///
/// Boundary data are carried per boundary sub-facet, index `2 * b + e` for
/// boundary facet `b` and facet end `e`. A Dirichlet entry is the pressure at
/// the continuity point; a Neumann entry is the outward flux through the
/// half facet.
#[derive(Debug)]
pub struct SubdomainOperator {
    bc: Vec<BcKind>,
    a: SparseMatrix,
    a_data: SparseMatrix,
    subflux_p: SparseMatrix,
    subflux_d: SparseMatrix,
    flux_p: SparseMatrix,
    flux_d: SparseMatrix,
    trace_p: SparseMatrix,
    trace_d: SparseMatrix,
    data_points: Vec<Point>,
    half_lengths: Vec<f64>,
    areas: Vec<f64>,
    nullspace: bool,
    factor: Factorization,
}

/// Region stencils of a whole mesh, reusable for several boundary taggings
/// only when the taggings agree.
pub fn region_stencils(
    mesh: &Mesh,
    perm: &PermField,
    bc: &[BcKind],
    opts: MpfaOptions,
) -> Result<Vec<(InteractionRegion, LocalStencil)>> {
    let regions = build_interaction_regions(mesh, opts.continuity)?;
    regions
        .into_iter()
        .map(|r| {
            let st = local_gradient_system(mesh, perm, &r, &|s| {
                let b = mesh.facet(r.subfacets[s].facet).boundary.unwrap();
                match bc[b] {
                    BcKind::Dirichlet => LocalBc::Dirichlet,
                    BcKind::Neumann => LocalBc::Neumann,
                }
            })?;
            Ok((r, st))
        })
        .collect()
}

impl SubdomainOperator {
    pub fn assemble(mesh: &Mesh, perm: &PermField, bc: Vec<BcKind>, opts: MpfaOptions) -> Result<Self> {
        if perm.len() != mesh.num_cells() {
            return Err(Error::Dimension(format!(
                "{} permeability tensors for {} cells",
                perm.len(),
                mesh.num_cells()
            )));
        }
        let nb = mesh.num_boundary_facets();
        if bc.len() != nb {
            return Err(Error::Dimension(format!("{} boundary tags for {nb} boundary facets", bc.len())));
        }
        let nc = mesh.num_cells();
        let nf = mesh.num_facets();
        let nd = 2 * nb;
        let mut sp = TripletBuilder::with_capacity(2 * nf, nc, 16 * nf);
        let mut sd = TripletBuilder::with_capacity(2 * nf, nd, 4 * nb);
        let mut tp = TripletBuilder::new(nd, nc);
        let mut td = TripletBuilder::new(nd, nd);
        let mut data_points = vec![[0.0; 2]; nd];
        let mut half_lengths = vec![0.0; nd];
        for (region, st) in region_stencils(mesh, perm, &bc, opts)? {
            let data_col = |j: usize| {
                let sf = &region.subfacets[st.data_subfacets[j]];
                2 * mesh.facet(sf.facet).boundary.unwrap() + sf.end
            };
            for (s, sf) in region.subfacets.iter().enumerate() {
                let row = sf.id();
                for (j, c) in region.corners.iter().enumerate() {
                    sp.push(row, c.cell, st.flux_cells[(s, j)]);
                }
                for j in 0..st.data_subfacets.len() {
                    sd.push(row, data_col(j), st.flux_data[(s, j)]);
                }
                if let Some(b) = mesh.facet(sf.facet).boundary {
                    let drow = 2 * b + sf.end;
                    data_points[drow] = sf.point;
                    half_lengths[drow] = sf.length;
                    for (j, c) in region.corners.iter().enumerate() {
                        tp.push(drow, c.cell, st.pressure_cells[(s, j)]);
                    }
                    for j in 0..st.data_subfacets.len() {
                        td.push(drow, data_col(j), st.pressure_data[(s, j)]);
                    }
                }
            }
        }
        let subflux_p = sp.build();
        let subflux_d = sd.build();

        let mut fp = TripletBuilder::with_capacity(nf, nc, subflux_p.nnz());
        let mut fd = TripletBuilder::with_capacity(nf, nd, subflux_d.nnz());
        for (r, c, v) in subflux_p.triplets() {
            fp.push(r / 2, c, v);
        }
        for (r, c, v) in subflux_d.triplets() {
            fd.push(r / 2, c, v);
        }
        let flux_p = fp.build();
        let flux_d = fd.build();

        let mut ab = TripletBuilder::with_capacity(nc, nc, 2 * flux_p.nnz());
        let mut abd = TripletBuilder::new(nc, nd);
        for (f, facet) in mesh.facets().iter().enumerate() {
            let (cols, vals) = flux_p.row(f);
            let (dcols, dvals) = flux_d.row(f);
            let mut add = |cell: usize, s: f64| {
                for (&c, &v) in cols.iter().zip(vals) {
                    ab.push(cell, c, s * v);
                }
                for (&c, &v) in dcols.iter().zip(dvals) {
                    abd.push(cell, c, s * v);
                }
            };
            add(facet.left, 1.0);
            if let Some(r) = facet.right {
                add(r, -1.0);
            }
        }
        let a = ab.build();
        let a_data = abd.build();
        let nullspace = bc.iter().all(|&k| k == BcKind::Neumann);
        let areas = mesh.areas().to_vec();
        let factor = if nullspace {
            // A + alpha e_0 e_0^T; constants span both null spaces of A
            let mut bb = TripletBuilder::with_capacity(nc, nc, a.nnz() + 1);
            for (i, j, v) in a.triplets() {
                bb.push(i, j, v);
            }
            if nc > 0 {
                bb.push(0, 0, a.get(0, 0).abs().max(f64::MIN_POSITIVE));
            }
            Factorization::new(&bb.build())?
        } else {
            Factorization::new(&a)?
        };
        Ok(Self {
            bc,
            a,
            a_data,
            subflux_p,
            subflux_d,
            flux_p,
            flux_d,
            trace_p: tp.build(),
            trace_d: td.build(),
            data_points,
            half_lengths,
            areas,
            nullspace,
            factor,
        })
    }

    pub fn num_cells(&self) -> usize {
        self.a.nrows()
    }

    pub fn num_boundary_facets(&self) -> usize {
        self.bc.len()
    }

    pub fn bc(&self) -> &[BcKind] {
        &self.bc
    }

    pub fn has_nullspace(&self) -> bool {
        self.nullspace
    }

    /// Cell balance matrix: row `i` is the net outflux of cell `i` due to cell pressures.
    pub fn matrix(&self) -> &SparseMatrix {
        &self.a
    }

    /// Net outflux of every cell due to boundary data.
    pub fn data_matrix(&self) -> &SparseMatrix {
        &self.a_data
    }

    /// Facet flux stencils over cell pressures and boundary data.
    pub fn flux_matrices(&self) -> (&SparseMatrix, &SparseMatrix) {
        (&self.flux_p, &self.flux_d)
    }

    /// Sub-facet flux stencils, row `2 * facet + end`.
    pub fn subfacet_flux_matrices(&self) -> (&SparseMatrix, &SparseMatrix) {
        (&self.subflux_p, &self.subflux_d)
    }

    /// Continuity point of every boundary sub-facet.
    pub fn data_points(&self) -> &[Point] {
        &self.data_points
    }

    /// Length of every boundary sub-facet.
    pub fn data_lengths(&self) -> &[f64] {
        &self.half_lengths
    }

    /// Boundary data from facet-level values: a Dirichlet value is copied to
    /// both halves, a Neumann flux density `q` becomes `q |f| / 2` per half.
    pub fn facet_data(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.bc.len());
        let mut d = vec![0.0; 2 * values.len()];
        for (b, &v) in values.iter().enumerate() {
            for e in 0..2 {
                d[2 * b + e] = match self.bc[b] {
                    BcKind::Dirichlet => v,
                    BcKind::Neumann => v * self.half_lengths[2 * b + e],
                };
            }
        }
        d
    }

    /// Boundary data from point functions evaluated at continuity points:
    /// `pressure` on Dirichlet facets, outward flux density `flux` on Neumann facets.
    pub fn point_data(&self, pressure: impl Fn(usize, Point) -> f64, flux: impl Fn(usize, Point) -> f64) -> Vec<f64> {
        (0..2 * self.bc.len())
            .map(|k| {
                let b = k / 2;
                match self.bc[b] {
                    BcKind::Dirichlet => pressure(b, self.data_points[k]),
                    BcKind::Neumann => flux(b, self.data_points[k]) * self.half_lengths[k],
                }
            })
            .collect()
    }

    /// Solve the cell balances `A p = source - A_d data`. With a nullspace the
    /// system is solved as if bordered: `|cell| r` is added to every row and
    /// the pressure has zero mean.
    pub fn solve(&self, data: &[f64], source: &[f64]) -> Result<SubdomainSolution> {
        let n = self.num_cells();
        if data.len() != 2 * self.bc.len() || source.len() != n {
            return Err(Error::Dimension(format!(
                "solve expects {} data and {n} source entries, got {} and {}",
                2 * self.bc.len(),
                data.len(),
                source.len()
            )));
        }
        let mut rhs = source.to_vec();
        self.a_data.mul_vec_add(-1.0, data, &mut rhs);
        if self.nullspace {
            let total: f64 = self.areas.iter().sum();
            let r = rhs.iter().sum::<f64>() / total;
            for (b, w) in rhs.iter_mut().zip(&self.areas) {
                *b -= r * w;
            }
            let mut x = self.factor.solve(&rhs);
            let mean = crate::linalg::dot(&x, &self.areas) / total;
            x.iter_mut().for_each(|v| *v -= mean);
            Ok(SubdomainSolution { pressure: x, multiplier: r })
        } else {
            Ok(SubdomainSolution { pressure: self.factor.solve(&rhs), multiplier: 0.0 })
        }
    }

    /// Total flux through every facet, oriented along the facet normal.
    pub fn fluxes(&self, p: &[f64], data: &[f64]) -> Vec<f64> {
        let mut f = self.flux_p.mul_vec(p);
        self.flux_d.mul_vec_add(1.0, data, &mut f);
        f
    }

    pub fn subfacet_fluxes(&self, p: &[f64], data: &[f64]) -> Vec<f64> {
        let mut f = self.subflux_p.mul_vec(p);
        self.subflux_d.mul_vec_add(1.0, data, &mut f);
        f
    }

    /// Pressure at every boundary sub-facet continuity point.
    pub fn boundary_subfacet_pressures(&self, p: &[f64], data: &[f64]) -> Vec<f64> {
        let mut v = self.trace_p.mul_vec(p);
        self.trace_d.mul_vec_add(1.0, data, &mut v);
        v
    }

    /// Boundary facet pressure: the mean of its two sub-facet pressures.
    pub fn boundary_pressures(&self, p: &[f64], data: &[f64]) -> Vec<f64> {
        self.boundary_subfacet_pressures(p, data).chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect()
    }

    /// `A p + A_d data - source` per cell.
    pub fn balance_residual(&self, p: &[f64], data: &[f64], source: &[f64]) -> Vec<f64> {
        let mut r = self.a.mul_vec(p);
        self.a_data.mul_vec_add(1.0, data, &mut r);
        for (ri, si) in r.iter_mut().zip(source) {
            *ri -= si;
        }
        r
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }
}

/// `integral of f` over every cell.
pub fn source_integrals(mesh: &Mesh, f: impl Fn(Point) -> f64) -> Vec<f64> {
    (0..mesh.num_cells())
        .map(|c| integrate_polygon(&mesh.cell_points(c), mesh.centroid(c), &f))
        .collect()
}

/// Net outflux minus source of every cell, from facet fluxes.
pub fn conservation_residual(mesh: &Mesh, fluxes: &[f64], source: &[f64]) -> Vec<f64> {
    let mut r: Vec<f64> = source.iter().map(|s| -s).collect();
    for (f, facet) in mesh.facets().iter().enumerate() {
        r[facet.left] += fluxes[f];
        if let Some(c) = facet.right {
            r[c] -= fluxes[f];
        }
    }
    r
}
