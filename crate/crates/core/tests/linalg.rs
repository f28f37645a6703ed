use fluxmortar::linalg::{cg, gmres, DMat, DenseLu, Factorization, SparseMatrix, TripletBuilder};
use proptest::prelude::*;

fn banded(n: usize, vals: &[f64]) -> SparseMatrix {
    let mut b = TripletBuilder::new(n, n);
    for i in 0..n {
        b.push(i, i, 4.0 + vals[i % vals.len()].abs());
        if i + 1 < n {
            b.push(i, i + 1, vals[(i + 1) % vals.len()]);
            b.push(i + 1, i, vals[(i + 1) % vals.len()]);
        }
        if i + 3 < n {
            b.push(i, i + 3, 0.5 * vals[i % vals.len()]);
        }
    }
    b.build()
}

proptest! {
    #[test]
    fn sparse_lu_matches_dense(n in 2usize..30, vals in prop::collection::vec(-1.0f64..1.0, 1..10), x in prop::collection::vec(-1.0f64..1.0, 30)) {
        let a = banded(n, &vals);
        let x = &x[..n];
        let b = a.mul_vec(x);
        let sparse = Factorization::new(&a).unwrap().solve(&b);
        let dense = DenseLu::new(&DMat::from_rows(&a.to_dense())).unwrap().solve(&b);
        for i in 0..n {
            prop_assert!((sparse[i] - x[i]).abs() < 1e-10);
            prop_assert!((dense[i] - x[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn transpose_is_adjoint(n in 2usize..20, vals in prop::collection::vec(-1.0f64..1.0, 1..10), x in prop::collection::vec(-1.0f64..1.0, 20), y in prop::collection::vec(-1.0f64..1.0, 20)) {
        let a = banded(n, &vals);
        let (x, y) = (&x[..n], &y[..n]);
        let ax = a.mul_vec(x);
        let aty = a.mul_transpose_vec(y);
        let l: f64 = ax.iter().zip(y).map(|(a, b)| a * b).sum();
        let r: f64 = x.iter().zip(&aty).map(|(a, b)| a * b).sum();
        prop_assert!((l - r).abs() < 1e-12);
        prop_assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn krylov_solvers_agree(n in 2usize..25, vals in prop::collection::vec(-1.0f64..1.0, 1..10)) {
        let mut b = TripletBuilder::new(n, n);
        for i in 0..n {
            b.push(i, i, 3.0 + vals[i % vals.len()].abs());
            if i + 1 < n {
                b.push(i, i + 1, -1.0);
                b.push(i + 1, i, -1.0);
            }
        }
        let a = b.build();
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut op = |v: &[f64]| Ok(a.mul_vec(v));
        let mut id = |v: &[f64]| Ok(v.to_vec());
        let (x_cg, rep) = cg(&mut op, &mut id, &rhs, 1e-12, 200, &mut |_, _| {}).unwrap();
        prop_assert!(rep.converged && rep.iterations <= n);
        let (x_gm, _) = gmres(&mut op, &mut id, &rhs, 1e-12, 10, 400).unwrap();
        for i in 0..n {
            prop_assert!((x_cg[i] - x_gm[i]).abs() < 1e-9);
        }
    }
}
