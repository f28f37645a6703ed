use std::collections::HashMap;

use super::{lerp, Mesh, Point};
use crate::{Error, Result};

/// Result of one uniform refinement.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub mesh: Mesh,
    /// Parent cell of every child cell.
    pub parent: Vec<usize>,
}

impl Mesh {
    /// Split every triangle into 4 similar triangles and every quad into 4
    /// quads through edge midpoints and the vertex average.
    pub fn refine_uniform(&self) -> Result<Refinement> {
        let mut vertices: Vec<Point> = self.vertices().to_vec();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                vertices.push(lerp(vertices[a], vertices[b], 0.5));
                vertices.len() - 1
            })
        };
        let mut cells = Vec::with_capacity(4 * self.num_cells());
        let mut parent = Vec::with_capacity(4 * self.num_cells());
        for (c, cell) in self.cells().iter().enumerate() {
            let n = cell.len();
            let m: Vec<usize> = (0..n).map(|k| midpoint(cell[k], cell[(k + 1) % n], &mut vertices)).collect();
            match n {
                3 => {
                    cells.push(vec![cell[0], m[0], m[2]]);
                    cells.push(vec![m[0], cell[1], m[1]]);
                    cells.push(vec![m[2], m[1], cell[2]]);
                    cells.push(vec![m[0], m[1], m[2]]);
                }
                4 => {
                    let p = self.cell_points(c);
                    let center = [
                        0.25 * (p[0][0] + p[1][0] + p[2][0] + p[3][0]),
                        0.25 * (p[0][1] + p[1][1] + p[2][1] + p[3][1]),
                    ];
                    vertices.push(center);
                    let z = vertices.len() - 1;
                    for k in 0..4 {
                        cells.push(vec![cell[k], m[k], z, m[(k + 3) % 4]]);
                    }
                }
                _ => {
                    return Err(Error::UnsupportedMesh(format!(
                        "cell {c} has {n} vertices; refinement supports triangles and quads"
                    )))
                }
            }
            parent.extend([c; 4]);
        }
        Ok(Refinement { mesh: Mesh::new(vertices, cells)?, parent })
    }

    /// Apply `levels` uniform refinements.
    pub fn refined(&self, levels: usize) -> Result<Mesh> {
        let mut m = self.clone();
        for _ in 0..levels {
            m = m.refine_uniform()?.mesh;
        }
        Ok(m)
    }
}
