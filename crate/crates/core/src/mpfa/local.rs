use super::perm::PermField;
use super::region::InteractionRegion;
use crate::linalg::{DMat, DenseLu};
use crate::mesh::{sub, Mesh};
use crate::{Error, Result};

/// Condition imposed on a region sub-facet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalBc {
    /// Flux continuity between two cells.
    Interior,
    /// Sub-facet pressure prescribed.
    Dirichlet,
    /// Sub-facet outward flux prescribed.
    Neumann,
}

/// Eliminated local system of one interaction region.
///
/// Rows follow `region.subfacets`. Columns of the `*_cells` blocks follow
/// `region.corners`; columns of the `*_data` blocks follow `data_subfacets`.
#[derive(Debug, Clone)]
pub struct LocalStencil {
    /// Sub-facet flux oriented along the facet normal.
    pub flux_cells: DMat,
    pub flux_data: DMat,
    /// Sub-facet pressure at the continuity point.
    pub pressure_cells: DMat,
    pub pressure_data: DMat,
    /// Region-local indices of boundary sub-facets, one data column each.
    pub data_subfacets: Vec<usize>,
    /// Per corner, the gradient `[d/dx, d/dy]` in terms of the sub-facet pressures
    /// of that corner and its cell pressure: rows `g = H [pi_a - p, pi_b - p]`.
    pub gradients: Vec<DMat>,
}

/// Per-corner flux coefficients: outward flux of `corner.cell` through its
/// sub-facet `r` is `sum_t t[(r, t)] (pi_t - p_cell)`.
pub(crate) fn corner_transmissibility(
    mesh: &Mesh,
    perm: &PermField,
    region: &InteractionRegion,
    k: usize,
) -> Result<(DMat, DMat)> {
    let corner = region.corners[k];
    let xc = mesh.centroid(corner.cell);
    let g = DMat::from_fn(2, 2, |r, c| sub(region.subfacets[corner.subfacets[r]].point, xc)[c]);
    let ginv = DenseLu::new(&g)
        .map_err(|_| Error::Assembly {
            vertex: region.vertex,
            reason: format!("degenerate gradient geometry in cell {}", corner.cell),
        })?
        .inverse();
    let kt = perm.get(corner.cell);
    let mut t = DMat::zeros(2, 2);
    for r in 0..2 {
        let sf = &region.subfacets[corner.subfacets[r]];
        let facet = mesh.facet(sf.facet);
        let s = facet.sign_for(corner.cell);
        let n = [s * facet.normal[0], s * facet.normal[1]];
        let kn = kt.apply(n);
        for c in 0..2 {
            t[(r, c)] = -sf.length * (kn[0] * ginv[(0, c)] + kn[1] * ginv[(1, c)]);
        }
    }
    Ok((t, ginv))
}

/// Eliminate the sub-facet pressures of one region.
pub fn local_gradient_system(
    mesh: &Mesh,
    perm: &PermField,
    region: &InteractionRegion,
    bc: &dyn Fn(usize) -> LocalBc,
) -> Result<LocalStencil> {
    let ns = region.subfacets.len();
    let nc = region.corners.len();
    let kinds: Vec<LocalBc> = (0..ns)
        .map(|s| {
            if mesh.facet(region.subfacets[s].facet).is_boundary() {
                bc(s)
            } else {
                LocalBc::Interior
            }
        })
        .collect();
    let data_subfacets: Vec<usize> = (0..ns).filter(|&s| kinds[s] != LocalBc::Interior).collect();
    let nd = data_subfacets.len();
    let col_of = |s: usize| data_subfacets.iter().position(|&x| x == s).unwrap();

    let mut trans = Vec::with_capacity(nc);
    let mut gradients = Vec::with_capacity(nc);
    for k in 0..nc {
        let (t, ginv) = corner_transmissibility(mesh, perm, region, k)?;
        trans.push(t);
        gradients.push(ginv);
    }

    let mut m = DMat::zeros(ns, ns);
    let mut pc = DMat::zeros(ns, nc);
    let mut pd = DMat::zeros(ns, nd);
    for s in 0..ns {
        if kinds[s] == LocalBc::Dirichlet {
            m[(s, s)] = 1.0;
            pd[(s, col_of(s))] = 1.0;
            continue;
        }
        if kinds[s] == LocalBc::Neumann {
            pd[(s, col_of(s))] = 1.0;
        }
        for (k, corner) in region.corners.iter().enumerate() {
            let Some(r) = corner.subfacets.iter().position(|&x| x == s) else { continue };
            let t = &trans[k];
            for c in 0..2 {
                m[(s, corner.subfacets[c])] += t[(r, c)];
                pc[(s, k)] += t[(r, c)];
            }
        }
    }
    let lu = DenseLu::new(&m).map_err(|_| Error::Assembly {
        vertex: region.vertex,
        reason: "singular local flux-continuity system".into(),
    })?;
    let pressure_cells = lu.solve_mat(&pc);
    let pressure_data = lu.solve_mat(&pd);

    let mut flux_cells = DMat::zeros(ns, nc);
    let mut flux_data = DMat::zeros(ns, nd);
    for s in 0..ns {
        if kinds[s] == LocalBc::Neumann {
            flux_data[(s, col_of(s))] = 1.0;
            continue;
        }
        let left = mesh.facet(region.subfacets[s].facet).left;
        let k = region.corners.iter().position(|c| c.cell == left).unwrap();
        let corner = region.corners[k];
        let r = corner.subfacets.iter().position(|&x| x == s).unwrap();
        let t = &trans[k];
        for c in 0..2 {
            let tc = t[(r, c)];
            let st = corner.subfacets[c];
            for j in 0..nc {
                flux_cells[(s, j)] += tc * pressure_cells[(st, j)];
            }
            for j in 0..nd {
                flux_data[(s, j)] += tc * pressure_data[(st, j)];
            }
            flux_cells[(s, k)] -= tc;
        }
    }
    Ok(LocalStencil { flux_cells, flux_data, pressure_cells, pressure_data, data_subfacets, gradients })
}

#[cfg(test)]
mod tests {
    use super::super::perm::Tensor;
    use super::super::region::{build_region, ContinuityPoint};
    use super::*;
    use crate::mesh::{ElementKind, Extent};

    #[test]
    fn unit_squares_reduce_to_two_point_flux() {
        let m = Mesh::structured(Extent::new(0.0, 0.0, 2.0, 2.0).unwrap(), 2, 2, ElementKind::Quad).unwrap();
        let k = PermField::uniform(4, Tensor::IDENTITY).unwrap();
        let r = build_region(&m, 4, ContinuityPoint::Auto).unwrap();
        let st = local_gradient_system(&m, &k, &r, &|_| LocalBc::Dirichlet).unwrap();
        for (s, sf) in r.subfacets.iter().enumerate() {
            let f = m.facet(sf.facet);
            for (j, c) in r.corners.iter().enumerate() {
                let expect = if c.cell == f.left {
                    0.5
                } else if Some(c.cell) == f.right {
                    -0.5
                } else {
                    0.0
                };
                assert!((st.flux_cells[(s, j)] - expect).abs() < 1e-14);
            }
        }
    }
}
