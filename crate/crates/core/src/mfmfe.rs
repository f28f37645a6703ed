//! Mixed finite elements with vertex quadrature on triangles.
//!
//! The lowest-order BDM1 space with the trapezoidal vertex rule for the
//! velocity mass matrix couples velocity dofs only through the vertex they
//! belong to. Eliminating them around a vertex yields a cell-centred flux
//! stencil; this module computes it independently of [`crate::mpfa`] so the
//! two can be compared.

use crate::linalg::{DMat, DenseLu};
use crate::mesh::{sub, Mesh, Point};
use crate::mpfa::{InteractionRegion, PermField, Tensor};
use crate::{Error, Result};

/// Affine map from the reference triangle `(0,0), (1,0), (0,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiolaMap {
    pub origin: Point,
    /// Columns are the edge vectors `x1 - x0` and `x2 - x0`.
    pub df: [[f64; 2]; 2],
    /// `|det DF|`.
    pub j: f64,
}

impl PiolaMap {
    pub fn new(x: [Point; 3]) -> Result<Self> {
        let (a, b) = (sub(x[1], x[0]), sub(x[2], x[0]));
        let det = a[0] * b[1] - a[1] * b[0];
        if det.abs() <= 1e-300 {
            return Err(Error::InvalidGeometry("zero-area triangle".into()));
        }
        Ok(Self { origin: x[0], df: [[a[0], b[0]], [a[1], b[1]]], j: det.abs() })
    }

    pub fn map(&self, xh: Point) -> Point {
        [
            self.origin[0] + self.df[0][0] * xh[0] + self.df[0][1] * xh[1],
            self.origin[1] + self.df[1][0] * xh[0] + self.df[1][1] * xh[1],
        ]
    }

    /// Contravariant Piola transform `DF v / J`.
    pub fn velocity(&self, vh: Point) -> Point {
        [
            (self.df[0][0] * vh[0] + self.df[0][1] * vh[1]) / self.j,
            (self.df[1][0] * vh[0] + self.df[1][1] * vh[1]) / self.j,
        ]
    }
}

const REF_VERTICES: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

/// Barycentric coordinate `lambda_a` and its gradient on a triangle.
fn barycentric(x: &[Point; 3], a: usize, p: Point) -> (f64, Point) {
    let (b, c) = ((a + 1) % 3, (a + 2) % 3);
    let area2 = crate::mesh::cross(sub(x[b], x[a]), sub(x[c], x[a]));
    let e = sub(x[c], x[b]);
    let grad = [-e[1] / area2, e[0] / area2];
    let val = 1.0 + grad[0] * (p[0] - x[a][0]) + grad[1] * (p[1] - x[a][1]);
    (val, grad)
}

/// Outward unit normals of the two edges at vertex `a` of a counter-clockwise
/// triangle: first edge `a -> a+1`, second edge `a-1 -> a`.
fn vertex_normals(x: &[Point; 3], a: usize) -> [Point; 2] {
    let n = |p: Point, q: Point| {
        let t = sub(q, p);
        let l = t[0].hypot(t[1]);
        [t[1] / l, -t[0] / l]
    };
    [n(x[a], x[(a + 1) % 3]), n(x[(a + 2) % 3], x[a])]
}

fn inv2(m: [Point; 2]) -> [[f64; 2]; 2] {
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

/// BDM1 basis of a triangle. Basis `2a + k` has unit normal flux on edge `k`
/// of vertex `a` at `x_a` and zero normal flux at every other edge-vertex pair.
#[derive(Debug, Clone, Copy)]
pub struct Bdm1 {
    x: [Point; 3],
}

impl Bdm1 {
    pub fn reference() -> Self {
        Self { x: REF_VERTICES }
    }

    pub fn new(x: [Point; 3]) -> Self {
        Self { x }
    }

    fn direction(&self, i: usize) -> Point {
        let ninv = inv2(vertex_normals(&self.x, i / 2));
        [ninv[0][i % 2], ninv[1][i % 2]]
    }

    pub fn eval(&self, i: usize, p: Point) -> Point {
        let (l, _) = barycentric(&self.x, i / 2, p);
        let d = self.direction(i);
        [l * d[0], l * d[1]]
    }

    pub fn divergence(&self, i: usize) -> f64 {
        let (_, g) = barycentric(&self.x, i / 2, self.x[0]);
        let d = self.direction(i);
        g[0] * d[0] + g[1] * d[1]
    }

    pub fn vertices(&self) -> [Point; 3] {
        self.x
    }

    pub fn vertex_normals(&self, a: usize) -> [Point; 2] {
        vertex_normals(&self.x, a)
    }
}

/// `(K^{-1} phi_i, phi_j)` under the vertex rule, in the basis of [`Bdm1`].
pub fn vertex_quadrature_mass(x: [Point; 3], k: Tensor) -> Result<DMat> {
    let map = PiolaMap::new(x)?;
    let area = 0.5 * map.j;
    let kinv = k.inverse();
    let basis = Bdm1::new(x);
    let mut m = DMat::zeros(6, 6);
    for v in x {
        for i in 0..6 {
            let pi = basis.eval(i, v);
            let kp = kinv.apply(pi);
            for j in 0..6 {
                let pj = basis.eval(j, v);
                m[(i, j)] += area / 3.0 * (kp[0] * pj[0] + kp[1] * pj[1]);
            }
        }
    }
    for i in 0..6 {
        for j in 0..6 {
            if i / 2 != j / 2 {
                m[(i, j)] = 0.0;
            }
        }
    }
    Ok(m)
}

/// Eliminate the vertex-local velocities around an interior vertex.
///
/// Rows follow `region.subfacets`, columns `region.corners`; entry `(s, c)`
/// is the coefficient of the pressure of corner `c` in the flux through
/// half-facet `s`, oriented along the facet normal.
pub fn eliminate_velocity(mesh: &Mesh, perm: &PermField, region: &InteractionRegion) -> Result<DMat> {
    let ns = region.subfacets.len();
    let nc = region.corners.len();
    if !region.is_interior(mesh) {
        return Err(Error::UnsupportedMesh(format!("vertex {} touches the boundary", region.vertex)));
    }
    let mut mr = DMat::zeros(ns, ns);
    let mut d = DMat::zeros(ns, nc);
    for (k, corner) in region.corners.iter().enumerate() {
        let cell = mesh.cell(corner.cell);
        if cell.len() != 3 {
            return Err(Error::UnsupportedMesh(format!("cell {} is not a triangle", corner.cell)));
        }
        let area = mesh.area(corner.cell);
        let n: [Point; 2] = [0, 1].map(|r| mesh.facet(region.subfacets[corner.subfacets[r]].facet).normal);
        // u(x_v) = N^{-1} [u_a, u_b] with N rows the global facet normals
        let ninv = inv2(n);
        let kinv = perm.get(corner.cell).inverse();
        for r in 0..2 {
            let dr = [ninv[0][r], ninv[1][r]];
            let kd = kinv.apply(dr);
            for c in 0..2 {
                let dc = [ninv[0][c], ninv[1][c]];
                mr[(corner.subfacets[r], corner.subfacets[c])] += area / 3.0 * (kd[0] * dc[0] + kd[1] * dc[1]);
            }
            let sf = &region.subfacets[corner.subfacets[r]];
            let sign = mesh.facet(sf.facet).sign_for(corner.cell);
            d[(corner.subfacets[r], k)] += sign * sf.length;
        }
    }
    let lu = DenseLu::new(&mr).map_err(|_| Error::Assembly {
        vertex: region.vertex,
        reason: "singular vertex mass block".into(),
    })?;
    let mut u = lu.solve_mat(&d);
    for s in 0..ns {
        let l = region.subfacets[s].length;
        for c in 0..nc {
            u[(s, c)] *= l;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piola_of_reference_and_scaled() {
        let p = PiolaMap::new(REF_VERTICES).unwrap();
        assert_eq!(p.df, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(p.j, 1.0);
        let q = PiolaMap::new([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]).unwrap();
        assert_eq!(q.j, 4.0);
        let r = PiolaMap::new([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(r.j > 0.0);
        assert!(PiolaMap::new([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).is_err());
    }

    #[test]
    fn reference_bdm1_dof_pattern() {
        let b = Bdm1::reference();
        for i in 0..6 {
            for a in 0..3 {
                let n = b.vertex_normals(a);
                for (k, nk) in n.iter().enumerate() {
                    let v = b.eval(i, REF_VERTICES[a]);
                    let expect = if i == 2 * a + k { 1.0 } else { 0.0 };
                    assert!((v[0] * nk[0] + v[1] * nk[1] - expect).abs() < 1e-14);
                }
            }
        }
    }
}
