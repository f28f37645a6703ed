use std::sync::Arc;

use fluxmortar::ddsolver::{monolithic_solve, Problem};
use fluxmortar::mesh::{ElementKind, Extent, Mesh};
use fluxmortar::mpfa::{source_integrals, BcKind, MpfaOptions, PermField, SubdomainOperator, Tensor};
use fluxmortar::verify::{error_flux, error_pressure, linear_case, ManufacturedCase};
use fluxmortar::Error;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = ElementKind> {
    prop_oneof![Just(ElementKind::Quad), Just(ElementKind::TriCrisscross)]
}

fn spd() -> impl Strategy<Value = Tensor> {
    (0.1f64..10.0, 0.05f64..1.0, 0.0f64..3.14).prop_map(|(k, a, t)| Tensor::rotated(k, a, t))
}

fn solve(mesh: &Mesh, case: &ManufacturedCase, kinds: [BcKind; 4]) -> (Vec<f64>, Vec<f64>) {
    let perm = PermField::uniform(mesh.num_cells(), case.k).unwrap();
    let s = monolithic_solve(mesh, &case.domain, &perm, &case.problem(kinds), MpfaOptions::default()).unwrap();
    (s.pressure, s.fluxes)
}

#[test]
fn unit_squares_give_two_point_flux() {
    let mesh = Mesh::structured(Extent::new(0.0, 0.0, 2.0, 1.0).unwrap(), 2, 1, ElementKind::Quad).unwrap();
    let perm = PermField::uniform(2, Tensor::IDENTITY).unwrap();
    let op = SubdomainOperator::assemble(&mesh, &perm, vec![BcKind::Dirichlet; 6], MpfaOptions::default()).unwrap();
    let (fp, _) = op.flux_matrices();
    let f = mesh.facets().iter().position(|f| f.right.is_some()).unwrap();
    let (cols, vals) = fp.row(f);
    assert_eq!(cols, &[0, 1]);
    assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] + 1.0).abs() < 1e-14);
}

#[test]
fn checkerboard_fluxes_conserve_mass() {
    let extent = Extent::unit();
    let mesh = Mesh::structured(extent, 2, 2, ElementKind::Quad).unwrap().refined(2).unwrap();
    let perm = PermField::from_fn(&mesh, |x| {
        if ((x[0] > 0.5) as u8 + (x[1] > 0.5) as u8) % 2 == 0 { Tensor::isotropic(1.0) } else { Tensor::isotropic(100.0) }
    })
    .unwrap();
    let problem = Problem::dirichlet(
        Arc::new(|x: [f64; 2]| (3.0 * x[0]).sin() + x[1]),
        Arc::new(|x: [f64; 2]| x[0] * x[0] - x[1] * x[0]),
    );
    let s = monolithic_solve(&mesh, &extent, &perm, &problem, MpfaOptions::default()).unwrap();
    assert!(s.conservation_residual(&mesh) <= 1e-10 * s.source.iter().fold(1.0f64, |a, v| a.max(v.abs())));
    let direct = s.operator.balance_residual(&s.pressure, &s.data, &s.source);
    assert!(direct.iter().all(|r| r.abs() < 1e-10));
}

#[test]
fn pure_neumann_multiplier_carries_the_mismatch() {
    let mesh = Mesh::structured(Extent::unit(), 3, 3, ElementKind::TriCrisscross).unwrap();
    let perm = PermField::uniform(mesh.num_cells(), Tensor::IDENTITY).unwrap();
    let nb = mesh.num_boundary_facets();
    let op = SubdomainOperator::assemble(&mesh, &perm, vec![BcKind::Neumann; nb], MpfaOptions::default()).unwrap();
    assert!(op.has_nullspace());
    let source = source_integrals(&mesh, |_| 1.0);
    let sol = op.solve(&vec![0.0; 2 * nb], &source).unwrap();
    assert!((sol.multiplier - 1.0).abs() < 1e-12);
    assert!(sol.pressure.iter().all(|p| p.abs() < 1e-10));
    let mean: f64 = sol.pressure.iter().zip(op.areas()).map(|(p, a)| p * a).sum();
    assert!(mean.abs() < 1e-14);
}

#[test]
fn indefinite_tensor_rejected() {
    let e = PermField::new(vec![Tensor([1.0, 2.0, 1.0])]).unwrap_err();
    assert!(matches!(e, Error::Permeability { cell: 0, .. }));
}

#[test]
fn linear_pressure_with_mixed_conditions() {
    let case = linear_case(Extent::unit(), Tensor::rotated(3.0, 0.2, 1.1), 1.0, -0.5, 2.0);
    let mesh = Mesh::structured(case.domain, 5, 4, ElementKind::TriCrisscross).unwrap();
    let (p, f) = solve(&mesh, &case, [BcKind::Neumann, BcKind::Dirichlet, BcKind::Neumann, BcKind::Neumann]);
    assert!(error_pressure(&mesh, &p, &case) < 1e-10);
    assert!(error_flux(&mesh, &f, &case) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn affine_pressures_are_reproduced(
        k in spd(), k_kind in kind(), nx in 2usize..6, ny in 2usize..6,
        a in -1.0f64..1.0, b in -2.0f64..2.0, c in -2.0f64..2.0,
    ) {
        let case = linear_case(Extent::new(0.0, 0.0, 1.5, 1.0).unwrap(), k, a, b, c);
        let mesh = Mesh::structured(case.domain, nx, ny, k_kind).unwrap();
        let (p, f) = solve(&mesh, &case, [BcKind::Dirichlet; 4]);
        prop_assert!(error_pressure(&mesh, &p, &case) < 1e-9);
        prop_assert!(error_flux(&mesh, &f, &case) < 1e-9);
    }

    #[test]
    fn constant_pressure_has_no_flux(k in spd(), k_kind in kind(), n in 1usize..5, c in -3.0f64..3.0) {
        let mesh = Mesh::structured(Extent::unit(), n, n + 1, k_kind).unwrap();
        let perm = PermField::uniform(mesh.num_cells(), k).unwrap();
        let nb = mesh.num_boundary_facets();
        let op = SubdomainOperator::assemble(&mesh, &perm, vec![BcKind::Dirichlet; nb], MpfaOptions::default()).unwrap();
        let data = op.facet_data(&vec![c; nb]);
        let sol = op.solve(&data, &vec![0.0; mesh.num_cells()]).unwrap();
        prop_assert!(sol.pressure.iter().all(|p| (p - c).abs() < 1e-10));
        prop_assert!(op.fluxes(&sol.pressure, &data).iter().all(|f| f.abs() < 1e-10));
    }
}
