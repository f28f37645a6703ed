use fluxmortar::mesh::{ElementKind, Extent, Mesh};
use fluxmortar::mfmfe::{eliminate_velocity, vertex_quadrature_mass};
use fluxmortar::mpfa::{build_interaction_regions, build_region, local_gradient_system, ContinuityPoint, LocalBc, PermField, Tensor};
use fluxmortar::Error;
use proptest::prelude::*;

fn spd() -> impl Strategy<Value = Tensor> {
    (0.1f64..10.0, 0.05f64..1.0, 0.0f64..3.14).prop_map(|(k, a, t)| Tensor::rotated(k, a, t))
}

#[test]
fn quadrature_mass_is_symmetric_positive() {
    let x = [[0.0, 0.0], [1.0, 0.2], [0.3, 0.9]];
    let m = vertex_quadrature_mass(x, Tensor::rotated(2.0, 0.3, 0.5)).unwrap();
    assert!(m.asymmetry() < 1e-14 * m.max_abs());
    let ev = fluxmortar::linalg::symmetric_eigenvalues(&m).unwrap();
    assert!(ev[0] > 0.0);
}

#[test]
fn boundary_vertices_and_quads_rejected() {
    let tri = Mesh::structured(Extent::unit(), 2, 2, ElementKind::TriCrisscross).unwrap();
    let perm = PermField::uniform(tri.num_cells(), Tensor::IDENTITY).unwrap();
    let corner = build_region(&tri, 0, ContinuityPoint::Auto).unwrap();
    assert!(matches!(eliminate_velocity(&tri, &perm, &corner), Err(Error::UnsupportedMesh(_))));
    let quad = Mesh::structured(Extent::unit(), 2, 2, ElementKind::Quad).unwrap();
    let perm = PermField::uniform(quad.num_cells(), Tensor::IDENTITY).unwrap();
    let center = build_region(&quad, 4, ContinuityPoint::Auto).unwrap();
    assert!(matches!(eliminate_velocity(&quad, &perm, &center), Err(Error::UnsupportedMesh(_))));
}

#[test]
fn midpoint_continuity_differs_from_vertex_quadrature() {
    let mesh = Mesh::structured(Extent::unit(), 2, 2, ElementKind::TriCrisscross).unwrap();
    let perm = PermField::uniform(mesh.num_cells(), Tensor::IDENTITY).unwrap();
    let r = build_region(&mesh, 4, ContinuityPoint::Midpoint).unwrap();
    let a = local_gradient_system(&mesh, &perm, &r, &|_| LocalBc::Interior).unwrap().flux_cells;
    let b = eliminate_velocity(&mesh, &perm, &r).unwrap();
    assert!(a.sub(&b).max_abs() > 1e-3 * b.max_abs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn stencils_agree_on_crisscross_patch(ks in prop::collection::vec(spd(), 32), w in 0.5f64..2.0) {
        let mesh = Mesh::structured(Extent::new(0.0, 0.0, w, 1.0).unwrap(), 4, 4, ElementKind::TriCrisscross).unwrap();
        let perm = PermField::new(ks).unwrap();
        for r in build_interaction_regions(&mesh, ContinuityPoint::Auto).unwrap().iter().filter(|r| r.is_interior(&mesh)) {
            let a = local_gradient_system(&mesh, &perm, r, &|_| LocalBc::Interior).unwrap().flux_cells;
            let b = eliminate_velocity(&mesh, &perm, r).unwrap();
            prop_assert!(a.sub(&b).max_abs() <= 1e-10 * b.max_abs());
        }
    }
}
