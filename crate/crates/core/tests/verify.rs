use fluxmortar::ddsolver::{DDSystem, SolverSettings};
use fluxmortar::mesh::{Decomposition, ElementKind, Extent, Mesh};
use fluxmortar::mortar::{MortarKind, MortarSpace, Variant};
use fluxmortar::mpfa::{PermField, Tensor};
use fluxmortar::quadrature::integrate_segment;
use fluxmortar::verify::{
    error_flux, error_mortar, error_pressure, error_pressure_l2, error_projected_mortar, example1_case,
    example1_case_with, format_sci, linear_case, rate, ManufacturedCase, RateRow, RateTable,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn divergence_fd(case: &ManufacturedCase, x: [f64; 2], h: f64) -> f64 {
    let ux = |x: [f64; 2]| case.flux(x)[0];
    let uy = |x: [f64; 2]| case.flux(x)[1];
    (ux([x[0] + h, x[1]]) - ux([x[0] - h, x[1]])) / (2.0 * h) + (uy([x[0], x[1] + h]) - uy([x[0], x[1] - h])) / (2.0 * h)
}

fn gradient_fd(case: &ManufacturedCase, x: [f64; 2], h: f64) -> [f64; 2] {
    [
        (case.pressure([x[0] + h, x[1]]) - case.pressure([x[0] - h, x[1]])) / (2.0 * h),
        (case.pressure([x[0], x[1] + h]) - case.pressure([x[0], x[1] - h])) / (2.0 * h),
    ]
}

#[test]
fn sources_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in [example1_case(), example1_case_with(example1_case().domain, Tensor::rotated(2.0, 0.3, 0.7))] {
        for _ in 0..10_000 {
            let x = [rng.random_range(0.0..2.0), rng.random_range(0.0..2.0)];
            let f = case.source(x);
            let fd = divergence_fd(&case, x, 1e-5);
            assert!((f - fd).abs() <= 1e-6 * f.abs().max(1.0), "{x:?}: {f} vs {fd}");
            let g = case.gradient(x);
            let gd = gradient_fd(&case, x, 1e-5);
            assert!((g[0] - gd[0]).abs() + (g[1] - gd[1]).abs() < 1e-6 * (g[0].abs() + g[1].abs()).max(1.0));
        }
    }
}

#[test]
fn bottom_flux_of_example1() {
    let c = example1_case();
    for x in [0.2, 0.9, 1.6] {
        let u = c.flux([x, 0.0]);
        let expect = -x * (2.0 - x) * (2.0 * std::f64::consts::PI * x).sin();
        assert!((u[1] - expect).abs() < 1e-14);
    }
}

#[test]
fn pressure_norm_of_constant_offset() {
    let case = example1_case();
    let mesh = Mesh::structured(case.domain, 5, 3, ElementKind::TriCrisscross).unwrap();
    let exact: Vec<f64> = mesh.centroids().iter().map(|&x| case.pressure(x)).collect();
    assert_eq!(error_pressure(&mesh, &exact, &case), 0.0);
    let shifted: Vec<f64> = exact.iter().map(|p| p + 0.25).collect();
    assert!((error_pressure(&mesh, &shifted, &case) - 0.25 * 2.0).abs() < 1e-14);
}

#[test]
fn exact_fluxes_have_zero_error() {
    let case = linear_case(Extent::unit(), Tensor::diag(2.0, 1.0), 0.0, 1.0, -1.0);
    let mesh = Mesh::structured(case.domain, 3, 3, ElementKind::Quad).unwrap();
    let f: Vec<f64> = mesh
        .facets()
        .iter()
        .map(|fc| {
            let u = case.flux(fc.midpoint);
            (u[0] * fc.normal[0] + u[1] * fc.normal[1]) * fc.length
        })
        .collect();
    assert!(error_flux(&mesh, &f, &case) < 1e-14);
}

#[test]
fn rates_from_table_values() {
    assert_eq!(format!("{:.2}", rate(1.58e-1, 7.88e-2)), "1.00");
    assert_eq!(rate(0.1, 0.1), 0.0);
    assert!((rate(8.0, 1.0) - 3.0).abs() < 1e-15);
    assert!((rate(8e-7, 1e-7) - rate(8.0, 1.0)).abs() < 1e-12);
    let row = |h: f64, e: f64| RateRow { h_min: h, e_u: e, e_p: e, e_lambda: e, e_qlambda: e, iterations: 1 };
    let t = RateTable { rows: vec![row(0.1, 0.2), row(0.1, 0.2)] };
    assert_eq!(t.rates(1).unwrap(), [0.0; 4]);
    assert_eq!(format_sci(1.0e-10), "1.00e-10");
}

fn small_dd(case: &ManufacturedCase, variant: Variant) -> (DDSystem, fluxmortar::ddsolver::DdSolution) {
    let d = Decomposition::structured(case.domain, 2, 2, |i, j| if (i + j) % 2 == 0 { (6, 6) } else { (4, 4) }, ElementKind::TriCrisscross)
        .unwrap();
    let space = MortarSpace::uniform(&d, MortarKind::P1, |_| 2).unwrap();
    let perm = d.meshes().iter().map(|m| PermField::uniform(m.num_cells(), case.k).unwrap()).collect();
    let sys = DDSystem::new(d, perm, case.dirichlet_problem(), space, SolverSettings { variant, ..Default::default() })
        .unwrap();
    let sol = sys.solve().unwrap();
    (sys, sol)
}

#[test]
fn mortar_error_vanishes_for_constant_interface_flux() {
    let case = linear_case(Extent::unit(), Tensor::rotated(1.5, 0.4, 0.3), 0.0, 1.0, 0.5);
    let (sys, sol) = small_dd(&case, Variant::Sharp);
    assert!(error_mortar(sys.decomposition(), sys.mortar_space(), &sol.lambda, &case) < 1e-9);
    assert!(error_projected_mortar(sys.decomposition(), sys.projections(), &sol.lambda, &case) < 1e-9);
}

#[test]
fn projected_mortar_error_bounded_by_best_constant_fit() {
    let case = example1_case();
    let (sys, sol) = small_dd(&case, Variant::Flat);
    let d = sys.decomposition();
    let mut best = 0.0;
    for iface in d.interfaces() {
        for side in 0..2 {
            for &(s0, s1) in &iface.ranges[side] {
                let (a, b) = (iface.point_at(s0), iface.point_at(s1));
                let un = |x: [f64; 2]| {
                    let u = case.flux(x);
                    u[0] * iface.normal[0] + u[1] * iface.normal[1]
                };
                let len = s1 - s0;
                let mean = integrate_segment(a, b, 3, un) / len;
                best += integrate_segment(a, b, 3, |x| (un(x) - mean).powi(2));
            }
        }
    }
    let e = error_projected_mortar(d, sys.projections(), &sol.lambda, &case);
    assert!(e >= best.sqrt() * (1.0 - 1e-6), "{e} < {}", best.sqrt());
}

proptest! {
    #[test]
    fn norms_are_absolutely_homogeneous(s in -4.0f64..4.0, seed in any::<u64>()) {
        let case = example1_case();
        let mesh = Mesh::structured(case.domain, 4, 3, ElementKind::TriCrisscross).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let delta: Vec<f64> = (0..mesh.num_cells()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let exact: Vec<f64> = mesh.centroids().iter().map(|&x| case.pressure(x)).collect();
        let p1: Vec<f64> = exact.iter().zip(&delta).map(|(p, d)| p + d).collect();
        let ps: Vec<f64> = exact.iter().zip(&delta).map(|(p, d)| p + s * d).collect();
        let (e1, es) = (error_pressure(&mesh, &p1, &case), error_pressure(&mesh, &ps, &case));
        prop_assert!((es - s.abs() * e1).abs() <= 1e-12 * e1.max(1.0));

        let lin = linear_case(case.domain, Tensor::IDENTITY, 0.0, 1.0, 1.0);
        let exact_f: Vec<f64> = mesh.facets().iter().map(|fc| {
            let u = lin.flux(fc.midpoint);
            (u[0] * fc.normal[0] + u[1] * fc.normal[1]) * fc.length
        }).collect();
        let fd: Vec<f64> = (0..mesh.num_facets()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f1: Vec<f64> = exact_f.iter().zip(&fd).map(|(a, b)| a + b).collect();
        let fs: Vec<f64> = exact_f.iter().zip(&fd).map(|(a, b)| a + s * b).collect();
        let (g1, gs) = (error_flux(&mesh, &f1, &lin), error_flux(&mesh, &fs, &lin));
        prop_assert!((gs - s.abs() * g1).abs() <= 1e-10 * g1.max(1.0));
        prop_assert!(error_pressure_l2(&mesh, &p1, &case) > 0.0);
    }
}
