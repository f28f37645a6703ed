//! Polygonal meshes, structured generators, refinement and box decompositions.
//!
//! A [`Mesh`] stores cells as counter-clockwise vertex lists. Facet `k` of a
//! cell joins its local vertices `k` and `k + 1`. Interior facet normals
//! point from the lower to the higher cell index, and boundary normals point
//! outward.

mod decomposition;
pub mod io;
mod refine;
mod structured;

use std::collections::HashMap;

pub use decomposition::{BoundaryLocation, Decomposition, Interface, InterfaceGrid, SubdomainBox};
pub use refine::Refinement;
pub use structured::ElementKind;

use crate::{Error, Result};

pub type Point = [f64; 2];

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    let d = sub(a, b);
    d[0].hypot(d[1])
}

pub(crate) fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Side of an axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

    pub fn outward_normal(self) -> Point {
        match self {
            Side::Left => [-1.0, 0.0],
            Side::Right => [1.0, 0.0],
            Side::Bottom => [0.0, -1.0],
            Side::Top => [0.0, 1.0],
        }
    }
}

/// Axis-aligned box `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extent {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Extent {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let ok = [x0, y0, x1, y1].iter().all(|v| v.is_finite()) && x1 > x0 && y1 > y0;
        if !ok {
            return Err(Error::InvalidGeometry(format!(
                "extent [{x0}, {x1}] x [{y0}, {y1}] has non-positive size"
            )));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn unit() -> Self {
        Self { x0: 0.0, y0: 0.0, x1: 1.0, y1: 1.0 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    /// Which side, if any, a segment lies on (within `tol`).
    pub fn side_of(&self, a: Point, b: Point, tol: f64) -> Option<Side> {
        let on = |u: f64, v: f64, c: f64| (u - c).abs() <= tol && (v - c).abs() <= tol;
        if on(a[0], b[0], self.x0) {
            Some(Side::Left)
        } else if on(a[0], b[0], self.x1) {
            Some(Side::Right)
        } else if on(a[1], b[1], self.y0) {
            Some(Side::Bottom)
        } else if on(a[1], b[1], self.y1) {
            Some(Side::Top)
        } else {
            None
        }
    }
}

/// An edge of the mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub vertices: [usize; 2],
    /// Lower-indexed adjacent cell.
    pub left: usize,
    /// Higher-indexed adjacent cell, `None` on the boundary.
    pub right: Option<usize>,
    /// Position in [`Mesh::boundary_facets`] for boundary facets.
    pub boundary: Option<usize>,
    pub midpoint: Point,
    pub length: f64,
    /// Unit normal, left to right (outward on the boundary).
    pub normal: Point,
}

impl Facet {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }

    /// `+1` if the normal points out of `cell`, `-1` otherwise.
    pub fn sign_for(&self, cell: usize) -> f64 {
        if cell == self.left {
            1.0
        } else {
            -1.0
        }
    }
}

/// Conforming polygonal tessellation.
#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<Point>,
    cells: Vec<Vec<usize>>,
    facets: Vec<Facet>,
    cell_facets: Vec<Vec<usize>>,
    centroids: Vec<Point>,
    areas: Vec<f64>,
    boundary_facets: Vec<usize>,
    boundary_sides: Vec<Option<Side>>,
    vertex_cells: Vec<Vec<(usize, usize)>>,
    bbox: Extent,
}

fn polygon_area_centroid(p: &[Point]) -> (f64, Point) {
    let mut a = 0.0;
    let (mut cx, mut cy) = (0.0, 0.0);
    for k in 0..p.len() {
        let (u, v) = (p[k], p[(k + 1) % p.len()]);
        let w = cross(u, v);
        a += w;
        cx += (u[0] + v[0]) * w;
        cy += (u[1] + v[1]) * w;
    }
    a *= 0.5;
    if a == 0.0 {
        return (0.0, p[0]);
    }
    (a, [cx / (6.0 * a), cy / (6.0 * a)])
}

impl Mesh {
    /// Build a mesh from vertices and counter-clockwise cells.
    pub fn new(vertices: Vec<Point>, cells: Vec<Vec<usize>>) -> Result<Self> {
        if vertices.is_empty() || cells.is_empty() {
            return Err(Error::InvalidGeometry("mesh has no cells".into()));
        }
        if let Some(v) = vertices.iter().position(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::InvalidGeometry(format!("vertex {v} is not finite")));
        }
        let bbox = {
            let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
            for p in &vertices {
                x0 = x0.min(p[0]);
                y0 = y0.min(p[1]);
                x1 = x1.max(p[0]);
                y1 = y1.max(p[1]);
            }
            Extent::new(x0, y0, x1, y1)?
        };
        let tol = 1e-12 * bbox.diameter();
        check_duplicate_vertices(&vertices, tol)?;

        let mut centroids = Vec::with_capacity(cells.len());
        let mut areas = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() < 3 {
                return Err(Error::InvalidGeometry(format!("cell {c} has fewer than 3 vertices")));
            }
            if let Some(&v) = cell.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidGeometry(format!("cell {c} references missing vertex {v}")));
            }
            let mut sorted = cell.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cell.len() {
                return Err(Error::UnsupportedMesh(format!("cell {c} repeats a vertex")));
            }
            let pts: Vec<Point> = cell.iter().map(|&v| vertices[v]).collect();
            let (a, x) = polygon_area_centroid(&pts);
            if !(a > tol * tol) {
                return Err(Error::InvalidGeometry(format!(
                    "cell {c} has non-positive area {a:.3e} (cells must be counter-clockwise)"
                )));
            }
            areas.push(a);
            centroids.push(x);
        }

        let mut edge_map: HashMap<(usize, usize), usize> = HashMap::new();
        let mut facets: Vec<Facet> = Vec::new();
        let mut cell_facets = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            let mut cf = Vec::with_capacity(cell.len());
            for k in 0..cell.len() {
                let (a, b) = (cell[k], cell[(k + 1) % cell.len()]);
                let key = (a.min(b), a.max(b));
                match edge_map.get(&key) {
                    Some(&f) => {
                        let facet: &mut Facet = &mut facets[f];
                        if facet.right.is_some() {
                            return Err(Error::UnsupportedMesh(format!(
                                "edge ({a}, {b}) is shared by more than two cells"
                            )));
                        }
                        if facet.vertices != [b, a] {
                            return Err(Error::InvalidGeometry(format!(
                                "cells {} and {c} have inconsistent orientation",
                                facet.left
                            )));
                        }
                        facet.right = Some(c);
                        cf.push(f);
                    }
                    None => {
                        let (pa, pb) = (vertices[a], vertices[b]);
                        let t = sub(pb, pa);
                        let len = t[0].hypot(t[1]);
                        facets.push(Facet {
                            vertices: [a, b],
                            left: c,
                            right: None,
                            boundary: None,
                            midpoint: lerp(pa, pb, 0.5),
                            length: len,
                            // outward for the cell traversing a -> b counter-clockwise
                            normal: [t[1] / len, -t[0] / len],
                        });
                        edge_map.insert(key, facets.len() - 1);
                        cf.push(facets.len() - 1);
                    }
                }
            }
            cell_facets.push(cf);
        }

        let mut boundary_facets = Vec::new();
        let mut boundary_sides = Vec::new();
        for (f, facet) in facets.iter_mut().enumerate() {
            if facet.right.is_none() {
                facet.boundary = Some(boundary_facets.len());
                boundary_facets.push(f);
                let [a, b] = facet.vertices;
                boundary_sides.push(bbox.side_of(vertices[a], vertices[b], tol * 10.0));
            }
        }

        let mut vertex_cells = vec![Vec::new(); vertices.len()];
        for (c, cell) in cells.iter().enumerate() {
            for (k, &v) in cell.iter().enumerate() {
                vertex_cells[v].push((c, k));
            }
        }
        if let Some(v) = vertex_cells.iter().position(Vec::is_empty) {
            return Err(Error::InvalidGeometry(format!("vertex {v} belongs to no cell")));
        }

        Ok(Self {
            vertices,
            cells,
            facets,
            cell_facets,
            centroids,
            areas,
            boundary_facets,
            boundary_sides,
            vertex_cells,
            bbox,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Point {
        self.vertices[v]
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }

    pub fn cell_points(&self, c: usize) -> Vec<Point> {
        self.cells[c].iter().map(|&v| self.vertices[v]).collect()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet(&self, f: usize) -> &Facet {
        &self.facets[f]
    }

    /// Facets of a cell; entry `k` joins local vertices `k` and `k + 1`.
    pub fn cell_facets(&self, c: usize) -> &[usize] {
        &self.cell_facets[c]
    }

    pub fn centroid(&self, c: usize) -> Point {
        self.centroids[c]
    }

    pub fn centroids(&self) -> &[Point] {
        &self.centroids
    }

    pub fn area(&self, c: usize) -> f64 {
        self.areas[c]
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Boundary facets in facet-index order.
    pub fn boundary_facets(&self) -> &[usize] {
        &self.boundary_facets
    }

    pub fn num_boundary_facets(&self) -> usize {
        self.boundary_facets.len()
    }

    /// Bounding-box side of boundary facet `b`, if it lies on one.
    pub fn boundary_side(&self, b: usize) -> Option<Side> {
        self.boundary_sides[b]
    }

    /// `(cell, local vertex index)` pairs around a vertex.
    pub fn vertex_cells(&self, v: usize) -> &[(usize, usize)] {
        &self.vertex_cells[v]
    }

    pub fn bounding_box(&self) -> Extent {
        self.bbox
    }

    /// True if every cell is a triangle.
    pub fn is_triangular(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 3)
    }

    pub fn h_min(&self) -> f64 {
        self.facets.iter().map(|f| f.length).fold(f64::INFINITY, f64::min)
    }

    pub fn h_max(&self) -> f64 {
        self.facets.iter().map(|f| f.length).fold(0.0, f64::max)
    }

    /// Largest vertex-to-vertex distance within each cell, minimised over cells.
    pub fn min_cell_diameter(&self) -> f64 {
        (0..self.num_cells())
            .map(|c| {
                let p = self.cell_points(c);
                let mut d: f64 = 0.0;
                for i in 0..p.len() {
                    for j in 0..i {
                        d = d.max(dist(p[i], p[j]));
                    }
                }
                d
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the cell whose polygon contains `x`, by linear search.
    pub fn locate(&self, x: Point) -> Option<usize> {
        let tol = 1e-12 * self.bbox.diameter();
        (0..self.num_cells()).find(|&c| {
            let p = self.cell_points(c);
            (0..p.len()).all(|k| cross(sub(p[(k + 1) % p.len()], p[k]), sub(x, p[k])) >= -tol)
        })
    }
}

fn check_duplicate_vertices(v: &[Point], tol: f64) -> Result<()> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a][0].total_cmp(&v[b][0]));
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if v[b][0] - v[a][0] > tol {
                break;
            }
            if dist(v[a], v[b]) <= tol {
                return Err(Error::InvalidGeometry(format!("vertices {a} and {b} coincide")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_square_geometry() {
        let m = Mesh::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(m.num_facets(), 4);
        assert_eq!(m.num_boundary_facets(), 4);
        assert_eq!(m.centroid(0), [0.5, 0.5]);
        let f = m.facet(0);
        assert_eq!(f.normal, [0.0, -1.0]);
        assert_eq!(m.boundary_side(0), Some(Side::Bottom));
        assert_eq!(m.locate([0.3, 0.9]), Some(0));
        assert_eq!(m.locate([1.3, 0.9]), None);
    }

    #[test]
    fn rejects_clockwise_and_duplicates() {
        let cw = Mesh::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]], vec![vec![0, 1, 2]]);
        assert!(matches!(cw, Err(Error::InvalidGeometry(_))));
        let dup = Mesh::new(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 0.0]], vec![vec![0, 1, 2]]);
        assert!(matches!(dup, Err(Error::InvalidGeometry(_))));
    }

    #[test]
    fn interior_normal_points_low_to_high() {
        let m = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 1.0]],
            vec![vec![1, 2, 5, 4], vec![0, 1, 4, 3]],
        )
        .unwrap();
        let f = m.facets().iter().find(|f| !f.is_boundary()).unwrap();
        assert_eq!((f.left, f.right), (0, Some(1)));
        // cell 0 is to the right of cell 1
        assert!((f.normal[0] + 1.0).abs() < 1e-15);
    }
}
