use super::{Extent, Mesh, Point};
use crate::{Error, Result};

/// Element type for structured generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Quad,
    /// Each quad split into two triangles, diagonals alternating by `(i + j)` parity.
    TriCrisscross,
}

impl std::str::FromStr for ElementKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "quad" | "quads" => Ok(ElementKind::Quad),
            "tri" | "tri-crisscross" | "triangles" => Ok(ElementKind::TriCrisscross),
            _ => Err(format!("unknown element kind `{s}` (expected quad or tri)")),
        }
    }
}

impl Mesh {
    /// Conforming `nx x ny` grid of the box.
    pub fn structured(extent: Extent, nx: usize, ny: usize, kind: ElementKind) -> Result<Self> {
        let extent = Extent::new(extent.x0, extent.y0, extent.x1, extent.y1)?;
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGeometry(format!("grid resolution {nx}x{ny} must be at least 1x1")));
        }
        let mut vertices: Vec<Point> = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                let x = if i == nx { extent.x1 } else { extent.x0 + extent.width() * i as f64 / nx as f64 };
                let y = if j == ny { extent.y1 } else { extent.y0 + extent.height() * j as f64 / ny as f64 };
                vertices.push([x, y]);
            }
        }
        let id = |i: usize, j: usize| j * (nx + 1) + i;
        let mut cells = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
                match kind {
                    ElementKind::Quad => cells.push(vec![a, b, c, d]),
                    ElementKind::TriCrisscross if (i + j) % 2 == 0 => {
                        cells.push(vec![a, b, c]);
                        cells.push(vec![a, c, d]);
                    }
                    ElementKind::TriCrisscross => {
                        cells.push(vec![a, b, d]);
                        cells.push(vec![b, c, d]);
                    }
                }
            }
        }
        Mesh::new(vertices, cells)
    }
}
