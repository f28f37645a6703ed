use fluxmortar::mesh::io::{read_mesh, write_mesh};
use fluxmortar::mesh::{BoundaryLocation, Decomposition, ElementKind, Extent, Mesh, Side};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = ElementKind> {
    prop_oneof![Just(ElementKind::Quad), Just(ElementKind::TriCrisscross)]
}

#[test]
fn three_by_three_example_layout() {
    let d = Decomposition::structured(Extent::new(0.0, 0.0, 2.0, 2.0).unwrap(), 3, 3, |_, _| (4, 4), ElementKind::Quad)
        .unwrap();
    assert_eq!(d.interfaces().len(), 12);
    assert_eq!(d.interior(), &[4]);
    assert!(d.is_matching());
    for iface in d.interfaces() {
        assert!((iface.length() - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(iface.facets[0].len(), 4);
        assert_eq!(iface.facets[1].len(), 4);
    }
    let outer = d.locations(4).iter().filter(|l| matches!(l, BoundaryLocation::Outer(_))).count();
    assert_eq!(outer, 0);
}

#[test]
fn nonmatching_decomposition_is_detected() {
    let d = Decomposition::structured(Extent::unit(), 2, 1, |i, _| (2 + i, 3), ElementKind::TriCrisscross).unwrap();
    assert!(d.is_matching());
    let iface = &d.interfaces()[0];
    assert_eq!(iface.facets[0].len(), 3);
    assert_eq!(iface.facets[1].len(), 3);
    let d = Decomposition::structured(Extent::unit(), 2, 1, |i, _| (2, 2 + i), ElementKind::Quad).unwrap();
    assert!(!d.is_matching());
    assert_eq!(d.interfaces()[0].facets[1].len(), 3);
}

#[test]
fn mesh_file_round_trip_is_exact() {
    let m = Mesh::structured(Extent::new(0.1, -0.3, 1.7, 0.9).unwrap(), 3, 5, ElementKind::TriCrisscross).unwrap();
    let back = read_mesh(&write_mesh(&m)).unwrap();
    assert_eq!(back.vertices(), m.vertices());
    assert_eq!(back.cells(), m.cells());
}

#[test]
fn boundary_sides_of_unit_square() {
    let m = Mesh::structured(Extent::unit(), 2, 2, ElementKind::Quad).unwrap();
    let mut counts = [0; 4];
    for b in 0..m.num_boundary_facets() {
        let s = m.boundary_side(b).unwrap();
        counts[Side::ALL.iter().position(|&x| x == s).unwrap()] += 1;
    }
    assert_eq!(counts, [2, 2, 2, 2]);
}

proptest! {
    #[test]
    fn structured_meshes_are_consistent(nx in 1usize..7, ny in 1usize..7, k in kind(), w in 0.3f64..3.0) {
        let m = Mesh::structured(Extent::new(0.0, 0.0, w, 1.0).unwrap(), nx, ny, k).unwrap();
        prop_assert!((m.total_area() - w).abs() < 1e-12 * w);
        let euler = m.num_vertices() as i64 - m.num_facets() as i64 + m.num_cells() as i64;
        prop_assert_eq!(euler, 1);
        for (f, facet) in m.facets().iter().enumerate() {
            let n = facet.normal;
            prop_assert!(((n[0] * n[0] + n[1] * n[1]).sqrt() - 1.0).abs() < 1e-14);
            prop_assert_eq!(facet.is_boundary(), facet.right.is_none());
            if let Some(r) = facet.right {
                prop_assert!(facet.left < r);
                let (a, b) = (m.centroid(facet.left), m.centroid(r));
                prop_assert!((b[0] - a[0]) * n[0] + (b[1] - a[1]) * n[1] > 0.0, "facet {}", f);
            }
        }
        for c in 0..m.num_cells() {
            let mut s = [0.0, 0.0];
            for &f in m.cell_facets(c) {
                let fc = m.facet(f);
                s[0] += fc.sign_for(c) * fc.normal[0] * fc.length;
                s[1] += fc.sign_for(c) * fc.normal[1] * fc.length;
            }
            prop_assert!(s[0].abs() < 1e-12 && s[1].abs() < 1e-12);
        }
    }

    #[test]
    fn refinement_quadruples_cells_and_keeps_area(nx in 1usize..4, ny in 1usize..4, k in kind(), levels in 1usize..3) {
        let m = Mesh::structured(Extent::unit(), nx, ny, k).unwrap();
        let r = m.refined(levels).unwrap();
        prop_assert_eq!(r.num_cells(), m.num_cells() * 4usize.pow(levels as u32));
        prop_assert!((r.total_area() - 1.0).abs() < 1e-12);
        prop_assert!((r.h_min() - m.h_min() / (1 << levels) as f64).abs() < 1e-12);
    }

    #[test]
    fn every_centroid_locates_its_cell(nx in 1usize..6, ny in 1usize..6, k in kind()) {
        let m = Mesh::structured(Extent::new(-1.0, 2.0, 1.0, 3.0).unwrap(), nx, ny, k).unwrap();
        for c in 0..m.num_cells() {
            prop_assert_eq!(m.locate(m.centroid(c)), Some(c));
        }
    }
}
