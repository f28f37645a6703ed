use super::{dist, lerp, ElementKind, Extent, Mesh, Point, Side};
use crate::{Error, Result};

/// Placement of one subdomain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubdomainBox {
    pub extent: Extent,
    /// Column and row in a tensor layout, when the decomposition has one.
    pub grid: Option<(usize, usize)>,
}

/// Where a subdomain boundary facet lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryLocation {
    /// On the outer boundary, on the given side of the domain box.
    Outer(Side),
    /// On interface `interface`; `side` is 0 for the lower-indexed subdomain.
    Interface { interface: usize, side: usize },
}

/// Straight interface shared by two subdomains, `subdomains[0] < subdomains[1]`.
#[derive(Debug, Clone)]
pub struct Interface {
    pub subdomains: [usize; 2],
    pub start: Point,
    pub end: Point,
    /// Unit normal pointing out of `subdomains[0]`.
    pub normal: Point,
    /// Boundary-facet indices of each side, ordered from `start` to `end`.
    pub facets: [Vec<usize>; 2],
    /// Parameter interval `[s0, s1]` of every facet in `facets`, measured from `start`.
    pub ranges: [Vec<(f64, f64)>; 2],
}

impl Interface {
    pub fn length(&self) -> f64 {
        dist(self.start, self.end)
    }

    pub fn point_at(&self, s: f64) -> Point {
        lerp(self.start, self.end, s / self.length())
    }

    pub fn param_of(&self, x: Point) -> f64 {
        let t = [self.end[0] - self.start[0], self.end[1] - self.start[1]];
        let l = self.length();
        ((x[0] - self.start[0]) * t[0] + (x[1] - self.start[1]) * t[1]) / l
    }

    pub fn grid(&self, n_cells: usize) -> InterfaceGrid {
        InterfaceGrid::uniform(self.start, self.end, n_cells)
    }
}

/// One-dimensional partition of an interface segment.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceGrid {
    pub start: Point,
    pub end: Point,
    /// Breakpoints in arc length from `start`, including `0` and the length.
    pub breaks: Vec<f64>,
}

impl InterfaceGrid {
    pub fn uniform(start: Point, end: Point, n_cells: usize) -> Self {
        let n = n_cells.max(1);
        let l = dist(start, end);
        let breaks = (0..=n).map(|k| if k == n { l } else { l * k as f64 / n as f64 }).collect();
        Self { start, end, breaks }
    }

    pub fn num_cells(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn length(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    pub fn cell_lengths(&self) -> Vec<f64> {
        self.breaks.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn h(&self) -> f64 {
        self.cell_lengths().into_iter().fold(0.0, f64::max)
    }

    pub fn point_at(&self, s: f64) -> Point {
        lerp(self.start, self.end, s / self.length())
    }
}

/// Non-overlapping decomposition of a box into box subdomains.
#[derive(Debug, Clone)]
pub struct Decomposition {
    domain: Extent,
    boxes: Vec<SubdomainBox>,
    meshes: Vec<Mesh>,
    interfaces: Vec<Interface>,
    locations: Vec<Vec<BoundaryLocation>>,
    interior: Vec<usize>,
}

fn overlap_1d(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

impl Decomposition {
    /// Decomposition from explicit boxes and one mesh per box.
    pub fn new(domain: Extent, boxes: Vec<SubdomainBox>, meshes: Vec<Mesh>) -> Result<Self> {
        if boxes.is_empty() || boxes.len() != meshes.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} boxes but {} meshes",
                boxes.len(),
                meshes.len()
            )));
        }
        let tol = 1e-10 * domain.diameter();
        for (i, b) in boxes.iter().enumerate() {
            let e = b.extent;
            if e.x0 < domain.x0 - tol || e.y0 < domain.y0 - tol || e.x1 > domain.x1 + tol || e.y1 > domain.y1 + tol {
                return Err(Error::InvalidDecomposition(format!("subdomain {i} extends outside the domain")));
            }
            let m = meshes[i].bounding_box();
            let d = (m.x0 - e.x0).abs().max((m.x1 - e.x1).abs()).max((m.y0 - e.y0).abs()).max((m.y1 - e.y1).abs());
            if d > tol || (meshes[i].total_area() - e.area()).abs() > 1e-10 * e.area() {
                return Err(Error::InvalidDecomposition(format!("mesh of subdomain {i} does not fill its box")));
            }
            for (j, c) in boxes.iter().enumerate().take(i) {
                let a = overlap_1d(e.x0, e.x1, c.extent.x0, c.extent.x1)
                    * overlap_1d(e.y0, e.y1, c.extent.y0, c.extent.y1);
                if a > tol * tol {
                    return Err(Error::InvalidDecomposition(format!("subdomains {j} and {i} overlap")));
                }
            }
        }
        let covered: f64 = boxes.iter().map(|b| b.extent.area()).sum();
        if (covered - domain.area()).abs() > 1e-10 * domain.area() {
            return Err(Error::InvalidDecomposition(format!(
                "subdomains cover area {covered} of a domain with area {}",
                domain.area()
            )));
        }

        let mut interfaces = Vec::new();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                let (a, b) = (boxes[i].extent, boxes[j].extent);
                let vertical = |xa: f64, xb: f64| (xa - xb).abs() <= tol;
                let seg = if vertical(a.x1, b.x0) || vertical(a.x0, b.x1) {
                    let x = if vertical(a.x1, b.x0) { a.x1 } else { a.x0 };
                    let (y0, y1) = (a.y0.max(b.y0), a.y1.min(b.y1));
                    (y1 - y0 > tol).then(|| ([x, y0], [x, y1], if vertical(a.x1, b.x0) { [1.0, 0.0] } else { [-1.0, 0.0] }))
                } else if vertical(a.y1, b.y0) || vertical(a.y0, b.y1) {
                    let y = if vertical(a.y1, b.y0) { a.y1 } else { a.y0 };
                    let (x0, x1) = (a.x0.max(b.x0), a.x1.min(b.x1));
                    (x1 - x0 > tol).then(|| ([x0, y], [x1, y], if vertical(a.y1, b.y0) { [0.0, 1.0] } else { [0.0, -1.0] }))
                } else {
                    None
                };
                if let Some((start, end, normal)) = seg {
                    interfaces.push(Interface {
                        subdomains: [i, j],
                        start,
                        end,
                        normal,
                        facets: [Vec::new(), Vec::new()],
                        ranges: [Vec::new(), Vec::new()],
                    });
                }
            }
        }

        let mut locations = Vec::with_capacity(meshes.len());
        for (s, mesh) in meshes.iter().enumerate() {
            let mut loc = Vec::with_capacity(mesh.num_boundary_facets());
            for (bidx, &f) in mesh.boundary_facets().iter().enumerate() {
                let facet = mesh.facet(f);
                let (pa, pb) = (mesh.vertex(facet.vertices[0]), mesh.vertex(facet.vertices[1]));
                if let Some(side) = domain.side_of(pa, pb, tol) {
                    loc.push(BoundaryLocation::Outer(side));
                    continue;
                }
                let mut found = None;
                for (k, iface) in interfaces.iter_mut().enumerate() {
                    let Some(side) = iface.subdomains.iter().position(|&x| x == s) else { continue };
                    let tn = [iface.end[0] - iface.start[0], iface.end[1] - iface.start[1]];
                    let off = |p: Point| ((p[0] - iface.start[0]) * tn[1] - (p[1] - iface.start[1]) * tn[0]).abs();
                    if off(pa) > tol * iface.length() || off(pb) > tol * iface.length() {
                        continue;
                    }
                    let (sa, sb) = (iface.param_of(pa), iface.param_of(pb));
                    let (s0, s1) = (sa.min(sb), sa.max(sb));
                    let l = iface.length();
                    if s1 <= tol || s0 >= l - tol {
                        continue;
                    }
                    if s0 < -tol || s1 > l + tol {
                        return Err(Error::InterfaceMismatch {
                            interface: k,
                            reason: format!("facet {f} of subdomain {s} crosses an interface endpoint"),
                        });
                    }
                    iface.facets[side].push(bidx);
                    iface.ranges[side].push((s0.max(0.0), s1.min(l)));
                    found = Some(BoundaryLocation::Interface { interface: k, side });
                    break;
                }
                match found {
                    Some(l) => loc.push(l),
                    None => {
                        return Err(Error::InvalidDecomposition(format!(
                            "boundary facet {f} of subdomain {s} lies neither on the outer boundary nor on an interface"
                        )))
                    }
                }
            }
            locations.push(loc);
        }

        for (k, iface) in interfaces.iter_mut().enumerate() {
            for side in 0..2 {
                let mut idx: Vec<usize> = (0..iface.facets[side].len()).collect();
                idx.sort_by(|&a, &b| iface.ranges[side][a].0.total_cmp(&iface.ranges[side][b].0));
                iface.facets[side] = idx.iter().map(|&a| iface.facets[side][a]).collect();
                iface.ranges[side] = idx.iter().map(|&a| iface.ranges[side][a]).collect();
                let covered: f64 = iface.ranges[side].iter().map(|r| r.1 - r.0).sum();
                if (covered - iface.length()).abs() > 1e-10 * iface.length().max(1.0) {
                    return Err(Error::InterfaceMismatch {
                        interface: k,
                        reason: format!(
                            "facets of subdomain {} cover {covered} of length {}",
                            iface.subdomains[side],
                            iface.length()
                        ),
                    });
                }
            }
        }

        let interior = locations
            .iter()
            .enumerate()
            .filter(|(_, l)| l.iter().all(|x| matches!(x, BoundaryLocation::Interface { .. })))
            .map(|(s, _)| s)
            .collect();

        Ok(Self { domain, boxes, meshes, interfaces, locations, interior })
    }

    /// `nsx x nsy` tensor layout; subdomain `(i, j)` has index `j * nsx + i`.
    pub fn tensor(domain: Extent, nsx: usize, nsy: usize, mut mesh_for: impl FnMut(usize, usize, Extent) -> Result<Mesh>) -> Result<Self> {
        if nsx == 0 || nsy == 0 {
            return Err(Error::InvalidDecomposition(format!("subdomain layout {nsx}x{nsy} is empty")));
        }
        let mut boxes = Vec::with_capacity(nsx * nsy);
        let mut meshes = Vec::with_capacity(nsx * nsy);
        for j in 0..nsy {
            for i in 0..nsx {
                let at = |k: usize, n: usize, a: f64, b: f64| if k == n { b } else { a + (b - a) * k as f64 / n as f64 };
                let e = Extent::new(
                    at(i, nsx, domain.x0, domain.x1),
                    at(j, nsy, domain.y0, domain.y1),
                    at(i + 1, nsx, domain.x0, domain.x1),
                    at(j + 1, nsy, domain.y0, domain.y1),
                )?;
                meshes.push(mesh_for(i, j, e)?);
                boxes.push(SubdomainBox { extent: e, grid: Some((i, j)) });
            }
        }
        Self::new(domain, boxes, meshes)
    }

    /// Structured subdomain grids; `resolution(i, j)` gives the cells per side.
    pub fn structured(
        domain: Extent,
        nsx: usize,
        nsy: usize,
        resolution: impl Fn(usize, usize) -> (usize, usize),
        kind: ElementKind,
    ) -> Result<Self> {
        Self::tensor(domain, nsx, nsy, |i, j, e| {
            let (nx, ny) = resolution(i, j);
            Mesh::structured(e, nx, ny, kind)
        })
    }

    /// Refine subdomain `s` `levels[s]` times.
    pub fn refine_each(&self, levels: &[usize]) -> Result<Self> {
        if levels.len() != self.meshes.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} refinement counts for {} subdomains",
                levels.len(),
                self.meshes.len()
            )));
        }
        let meshes = self.meshes.iter().zip(levels).map(|(m, &l)| m.refined(l)).collect::<Result<Vec<_>>>()?;
        Self::new(self.domain, self.boxes.clone(), meshes)
    }

    pub fn refined(&self, levels: usize) -> Result<Self> {
        self.refine_each(&vec![levels; self.meshes.len()])
    }

    pub fn domain(&self) -> Extent {
        self.domain
    }

    pub fn num_subdomains(&self) -> usize {
        self.meshes.len()
    }

    pub fn boxes(&self) -> &[SubdomainBox] {
        &self.boxes
    }

    pub fn meshes(&self) -> &[Mesh] {
        &self.meshes
    }

    pub fn mesh(&self, s: usize) -> &Mesh {
        &self.meshes[s]
    }

    pub fn interfaces(&self) -> &[Interface] {
        &self.interfaces
    }

    /// Location of every boundary facet of subdomain `s`.
    pub fn locations(&self, s: usize) -> &[BoundaryLocation] {
        &self.locations[s]
    }

    /// Subdomains whose whole boundary lies on interfaces.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn h_min(&self) -> f64 {
        self.meshes.iter().map(Mesh::h_min).fold(f64::INFINITY, f64::min)
    }

    pub fn num_cells(&self) -> usize {
        self.meshes.iter().map(Mesh::num_cells).sum()
    }

    /// True when both sides of every interface have identical facet breakpoints.
    pub fn is_matching(&self) -> bool {
        let tol = 1e-10 * self.domain.diameter();
        self.interfaces.iter().all(|i| {
            i.ranges[0].len() == i.ranges[1].len()
                && i.ranges[0].iter().zip(&i.ranges[1]).all(|(a, b)| (a.0 - b.0).abs() < tol && (a.1 - b.1).abs() < tol)
        })
    }
}
