//! Minimal ASCII mesh format.
//!
//! ```text
//! vertices N
//! x y
//! ...
//! cells M
//! k v0 ... v(k-1)
//! ```

use std::fmt::Write as _;

use super::Mesh;
use crate::{Error, Result};

pub fn write_mesh(mesh: &Mesh) -> String {
    let mut s = String::new();
    writeln!(s, "vertices {}", mesh.num_vertices()).unwrap();
    for p in mesh.vertices() {
        writeln!(s, "{:.16e} {:.16e}", p[0], p[1]).unwrap();
    }
    writeln!(s, "cells {}", mesh.num_cells()).unwrap();
    for c in mesh.cells() {
        write!(s, "{}", c.len()).unwrap();
        for v in c {
            write!(s, " {v}").unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn read_mesh(text: &str) -> Result<Mesh> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let perr = |line: usize, message: String| Error::Parse { line: line + 1, message };
    let mut header = |name: &str| -> Result<usize> {
        let (n, l) = lines.next().ok_or_else(|| perr(0, format!("missing `{name}` header")))?;
        let mut it = l.split_whitespace();
        if it.next() != Some(name) {
            return Err(perr(n, format!("expected `{name} <count>`")));
        }
        it.next().and_then(|v| v.parse().ok()).ok_or_else(|| perr(n, format!("bad {name} count")))
    };
    let nv = header("vertices")?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).skip(1);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = lines.next().ok_or_else(|| perr(0, "unexpected end of vertex list".into()))?;
        let v: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| perr(n, format!("{e}: `{t}`"))))
            .collect::<Result<_>>()?;
        if v.len() != 2 {
            return Err(perr(n, format!("expected 2 coordinates, found {}", v.len())));
        }
        vertices.push([v[0], v[1]]);
    }
    let (n, l) = lines.next().ok_or_else(|| perr(0, "missing `cells` header".into()))?;
    let mut it = l.split_whitespace();
    if it.next() != Some("cells") {
        return Err(perr(n, "expected `cells <count>`".into()));
    }
    let nc: usize = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| perr(n, "bad cells count".into()))?;
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (n, l) = lines.next().ok_or_else(|| perr(0, "unexpected end of cell list".into()))?;
        let v: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| perr(n, format!("{e}: `{t}`"))))
            .collect::<Result<_>>()?;
        if v.is_empty() || v[0] + 1 != v.len() {
            return Err(perr(n, "cell line must be `k v0 ... v(k-1)`".into()));
        }
        cells.push(v[1..].to_vec());
    }
    Mesh::new(vertices, cells)
}
