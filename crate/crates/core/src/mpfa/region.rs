use crate::mesh::{lerp, sub, Mesh, Point};
use crate::{Error, Result};

/// Position of the pressure continuity point on a half facet, as a fraction
/// of the facet length measured from the region vertex.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ContinuityPoint {
    /// `1/3` on facets whose adjacent cells are all triangles, `1/2` otherwise.
    #[default]
    Auto,
    /// Facet midpoints.
    Midpoint,
    Fraction(f64),
}

impl ContinuityPoint {
    pub fn fraction(&self, mesh: &Mesh, facet: usize) -> f64 {
        match *self {
            ContinuityPoint::Midpoint => 0.5,
            ContinuityPoint::Fraction(t) => t,
            ContinuityPoint::Auto => {
                let f = mesh.facet(facet);
                let tri = |c: usize| mesh.cell(c).len() == 3;
                if tri(f.left) && f.right.is_none_or(tri) {
                    1.0 / 3.0
                } else {
                    0.5
                }
            }
        }
    }
}

/// The half of a facet adjacent to one of its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct SubFacet {
    pub facet: usize,
    /// Which facet vertex (0 or 1) the half touches.
    pub end: usize,
    /// Pressure continuity point.
    pub point: Point,
    /// Half the facet length.
    pub length: f64,
}

impl SubFacet {
    /// Global sub-facet index `2 * facet + end`.
    pub fn id(&self) -> usize {
        2 * self.facet + self.end
    }
}

/// One cell of an interaction region with its two sub-facets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner {
    pub cell: usize,
    /// Region-local indices of the two sub-facets of `cell` at the vertex.
    pub subfacets: [usize; 2],
}

/// Vertex-centred dual cell.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionRegion {
    pub vertex: usize,
    /// Cells sorted by angle around the vertex.
    pub corners: Vec<Corner>,
    /// Sub-facets sorted by angle around the vertex.
    pub subfacets: Vec<SubFacet>,
}

impl InteractionRegion {
    pub fn num_cells(&self) -> usize {
        self.corners.len()
    }

    pub fn cells(&self) -> Vec<usize> {
        self.corners.iter().map(|c| c.cell).collect()
    }

    pub fn is_interior(&self, mesh: &Mesh) -> bool {
        self.subfacets.iter().all(|s| !mesh.facet(s.facet).is_boundary())
    }
}

fn angle(center: Point, x: Point) -> f64 {
    let d = sub(x, center);
    d[1].atan2(d[0])
}

pub fn build_region(mesh: &Mesh, vertex: usize, cp: ContinuityPoint) -> Result<InteractionRegion> {
    let v = mesh.vertex(vertex);
    let mut facets: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for &(cell, k) in mesh.vertex_cells(vertex) {
        let cf = mesh.cell_facets(cell);
        let n = cf.len();
        let (fa, fb) = (cf[k], cf[(k + n - 1) % n]);
        for f in [fa, fb] {
            if !mesh.facet(f).vertices.contains(&vertex) {
                return Err(Error::UnsupportedMesh(format!(
                    "cell {cell} does not have two facets at vertex {vertex}"
                )));
            }
            if !facets.contains(&f) {
                facets.push(f);
            }
        }
        pairs.push((cell, [fa, fb]));
    }
    let midpoint_of = |f: usize| mesh.facet(f).midpoint;
    facets.sort_by(|&a, &b| angle(v, midpoint_of(a)).total_cmp(&angle(v, midpoint_of(b))));
    let subfacets: Vec<SubFacet> = facets
        .iter()
        .map(|&f| {
            let facet = mesh.facet(f);
            let end = if facet.vertices[0] == vertex { 0 } else { 1 };
            let other = mesh.vertex(facet.vertices[1 - end]);
            SubFacet { facet: f, end, point: lerp(v, other, cp.fraction(mesh, f)), length: 0.5 * facet.length }
        })
        .collect();
    pairs.sort_by(|a, b| angle(v, mesh.centroid(a.0)).total_cmp(&angle(v, mesh.centroid(b.0))));
    let corners = pairs
        .into_iter()
        .map(|(cell, [fa, fb])| {
            let pos = |f: usize| facets.iter().position(|&x| x == f).unwrap();
            Corner { cell, subfacets: [pos(fa), pos(fb)] }
        })
        .collect();
    let region = InteractionRegion { vertex, corners, subfacets };
    for (s, sf) in region.subfacets.iter().enumerate() {
        let owners = region.corners.iter().filter(|c| c.subfacets.contains(&s)).count();
        let expected = if mesh.facet(sf.facet).is_boundary() { 1 } else { 2 };
        if owners != expected {
            return Err(Error::UnsupportedMesh(format!(
                "sub-facet of facet {} at vertex {vertex} has {owners} adjacent cells in the region",
                sf.facet
            )));
        }
    }
    Ok(region)
}

/// One interaction region per mesh vertex.
pub fn build_interaction_regions(mesh: &Mesh, cp: ContinuityPoint) -> Result<Vec<InteractionRegion>> {
    (0..mesh.num_vertices()).map(|v| build_region(mesh, v, cp)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{ElementKind, Extent};

    #[test]
    fn region_counts() {
        let m = Mesh::structured(Extent::unit(), 2, 2, ElementKind::Quad).unwrap();
        let r = build_interaction_regions(&m, ContinuityPoint::Auto).unwrap();
        assert_eq!(r.len(), 9);
        let center = &r[4];
        assert_eq!((center.num_cells(), center.subfacets.len()), (4, 4));
        assert!(center.is_interior(&m));
        let corner = &r[0];
        assert_eq!((corner.num_cells(), corner.subfacets.len()), (1, 2));
        let total: usize = r.iter().map(|x| x.subfacets.len()).sum();
        assert_eq!(total, 2 * m.num_facets());
    }

    #[test]
    fn crisscross_valence_four_vertex() {
        let m = Mesh::structured(Extent::unit(), 3, 3, ElementKind::TriCrisscross).unwrap();
        let r = build_region(&m, 9, ContinuityPoint::Auto).unwrap();
        assert_eq!((r.num_cells(), r.subfacets.len()), (4, 4));
        assert_eq!(build_region(&m, 5, ContinuityPoint::Auto).unwrap().num_cells(), 8);
        let sf = &r.subfacets[0];
        let d = crate::mesh::dist(sf.point, m.vertex(9));
        assert!((d - m.facet(sf.facet).length / 3.0).abs() < 1e-15);
    }
}
