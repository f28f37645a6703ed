//! Legacy ASCII VTK export.

use std::fmt::Write as _;
use std::path::Path;

use fluxmortar::mesh::Mesh;

/// Cell fields of one mesh block.
#[derive(Debug, Clone, Copy)]
pub struct Block<'a> {
    pub mesh: &'a Mesh,
    pub pressure: &'a [f64],
    /// Facet fluxes along the facet normals.
    pub fluxes: &'a [f64],
}

/// Cell-average velocity `|c|^{-1} sum_f F_f (x_f - x_c)` from outward facet fluxes.
pub fn cell_velocity(mesh: &Mesh, fluxes: &[f64], cell: usize) -> [f64; 2] {
    let xc = mesh.centroid(cell);
    let mut u = [0.0; 2];
    for &f in mesh.cell_facets(cell) {
        let facet = mesh.facet(f);
        let flux = facet.sign_for(cell) * fluxes[f];
        u[0] += flux * (facet.midpoint[0] - xc[0]);
        u[1] += flux * (facet.midpoint[1] - xc[1]);
    }
    let a = mesh.area(cell);
    [u[0] / a, u[1] / a]
}

/// Unstructured grid with `pressure`, `subdomain` and `velocity` cell data.
pub fn to_vtk(blocks: &[Block]) -> String {
    let npoints: usize = blocks.iter().map(|b| b.mesh.num_vertices()).sum();
    let ncells: usize = blocks.iter().map(|b| b.mesh.num_cells()).sum();
    let conn: usize = blocks.iter().flat_map(|b| b.mesh.cells().iter().map(|c| c.len() + 1)).sum();
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\nfluxmortar fields\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    writeln!(s, "POINTS {npoints} double").unwrap();
    for b in blocks {
        for v in b.mesh.vertices() {
            writeln!(s, "{:.16e} {:.16e} 0", v[0], v[1]).unwrap();
        }
    }
    writeln!(s, "CELLS {ncells} {conn}").unwrap();
    let mut offset = 0;
    for b in blocks {
        for c in b.mesh.cells() {
            let ids: Vec<String> = c.iter().map(|&v| (v + offset).to_string()).collect();
            writeln!(s, "{} {}", c.len(), ids.join(" ")).unwrap();
        }
        offset += b.mesh.num_vertices();
    }
    writeln!(s, "CELL_TYPES {ncells}").unwrap();
    for b in blocks {
        for c in b.mesh.cells() {
            let t = match c.len() {
                3 => 5,
                4 => 9,
                _ => 7,
            };
            writeln!(s, "{t}").unwrap();
        }
    }
    writeln!(s, "CELL_DATA {ncells}").unwrap();
    s.push_str("SCALARS pressure double 1\nLOOKUP_TABLE default\n");
    for b in blocks {
        for p in b.pressure {
            writeln!(s, "{p:.16e}").unwrap();
        }
    }
    s.push_str("SCALARS subdomain int 1\nLOOKUP_TABLE default\n");
    for (i, b) in blocks.iter().enumerate() {
        for _ in 0..b.mesh.num_cells() {
            writeln!(s, "{i}").unwrap();
        }
    }
    s.push_str("VECTORS velocity double\n");
    for b in blocks {
        for c in 0..b.mesh.num_cells() {
            let u = cell_velocity(b.mesh, b.fluxes, c);
            writeln!(s, "{:.16e} {:.16e} 0", u[0], u[1]).unwrap();
        }
    }
    s
}

pub fn export_fields(blocks: &[Block], path: &Path) -> std::io::Result<()> {
    std::fs::write(path, to_vtk(blocks))
}

/// Section size declared after `keyword` (`CELLS n ...`, `CELL_DATA n`).
pub fn declared_count(vtk: &str, keyword: &str) -> Option<usize> {
    vtk.lines().find_map(|l| {
        let mut it = l.split_whitespace();
        (it.next() == Some(keyword)).then(|| it.next()?.parse().ok()).flatten()
    })
}
