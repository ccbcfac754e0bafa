use meanskit::linalg::{eigh, fn_calculus};
use meanskit::means::{audit_grid, standard_catalog};
use meanskit::verify::generators::{random_pd, random_psd_rank, trial_rng};
use meanskit::{Connection, MeanKind, ReprFunction, SymMatrix, Tolerances};
use proptest::prelude::*;

fn catalog_entry() -> impl Strategy<Value = Connection> {
    let all = standard_catalog();
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn means_fix_the_diagonal(conn in catalog_entry(), seed in any::<u64>(), dim in 1usize..=8) {
        let tol = Tolerances::default();
        let a = random_pd(dim, &mut trial_rng(seed, 0), &tol);
        let aa = conn.apply(&a, &a, &tol).unwrap();
        let f1 = conn.repr_fn_eval(1.0);
        prop_assert!(aa.distance(&a.scale(f1)) <= tol.eq_tol * a.frobenius_norm());
        if conn.is_mean(&tol) {
            prop_assert!(aa.distance(&a) <= tol.eq_tol * a.frobenius_norm());
        }
    }

    #[test]
    fn identity_pivot_is_functional_calculus(conn in catalog_entry(), seed in any::<u64>(), dim in 1usize..=6) {
        let tol = Tolerances::default();
        let a = random_pd(dim, &mut trial_rng(seed, 0), &tol);
        let lhs = fn_calculus(|x| conn.repr_fn_eval(x), &a, &tol).unwrap();
        let rhs = conn.apply(&SymMatrix::identity(dim), &a, &tol).unwrap();
        prop_assert!(lhs.relative_distance(&rhs) <= tol.eq_tol);
    }

    #[test]
    fn transpose_swaps_arguments(conn in catalog_entry(), seed in any::<u64>(), dim in 1usize..=6) {
        let tol = Tolerances::default();
        let mut rng = trial_rng(seed, 0);
        let a = random_pd(dim, &mut rng, &tol);
        let b = random_pd(dim, &mut rng, &tol);
        let t = conn.transpose();
        let lhs = t.apply(&a, &b, &tol).unwrap();
        let rhs = conn.apply(&b, &a, &tol).unwrap();
        prop_assert!(lhs.relative_distance(&rhs) <= tol.eq_tol);
        for x in audit_grid() {
            let back = t.transpose().repr_fn_eval(x);
            prop_assert!((back - conn.repr_fn_eval(x)).abs() <= tol.eq_tol * x.max(1.0));
        }
    }

    #[test]
    fn scalar_formula_in_dimension_one(conn in catalog_entry(), a in 1e-3f64..1e3, b in 0.0f64..1e3) {
        let tol = Tolerances::default();
        let m = conn.apply(&SymMatrix::scalar(a), &SymMatrix::scalar(b), &tol).unwrap();
        let expected = a * conn.repr_fn_eval(b / a);
        prop_assert!((m.get(0, 0) - expected).abs() <= tol.eq_tol * expected.abs().max(1.0));
    }

    #[test]
    fn regularized_limit_matches_fast_path(conn in catalog_entry(), seed in any::<u64>(), dim in 1usize..=5) {
        let tol = Tolerances::default();
        let mut rng = trial_rng(seed, 0);
        let a = random_pd(dim, &mut rng, &tol);
        let b = random_pd(dim, &mut rng, &tol);
        let fast = conn.apply(&a, &b, &tol).unwrap();
        let slow = conn.apply_regularized(&a, &b, &tol).unwrap();
        prop_assert!(fast.relative_distance(&slow) <= 10.0 * tol.eq_tol);
    }

    #[test]
    fn nonzero_connections_keep_definiteness(conn in catalog_entry(), seed in any::<u64>(), dim in 1usize..=8) {
        let tol = Tolerances::default();
        let mut rng = trial_rng(seed, 0);
        let a = random_pd(dim, &mut rng, &tol);
        let b = random_pd(dim, &mut rng, &tol);
        let m = conn.apply(&a, &b, &tol).unwrap();
        if conn.classify(&tol).is_zero {
            prop_assert_eq!(m, SymMatrix::zeros(dim));
        } else {
            prop_assert!(eigh(&m).unwrap().min() > 0.0);
        }
    }

    #[test]
    fn singular_pairs_vanish_on_common_kernel(conn in catalog_entry(), seed in any::<u64>(), dim in 2usize..=6) {
        let tol = Tolerances::default();
        let mut rng = trial_rng(seed, 0);
        // both supported on the first dim−1 coordinates
        let mut a = SymMatrix::zeros(dim).into_dmatrix();
        let mut b = a.clone();
        let sa = random_psd_rank(dim - 1, dim - 1, &mut rng);
        let sb = random_psd_rank(dim - 1, dim - 1, &mut rng);
        a.view_mut((0, 0), (dim - 1, dim - 1)).copy_from(sa.as_dmatrix());
        b.view_mut((0, 0), (dim - 1, dim - 1)).copy_from(sb.as_dmatrix());
        let m = conn.apply(&SymMatrix::from_dmatrix(a), &SymMatrix::from_dmatrix(b), &tol).unwrap();
        let small = conn.apply(&sa, &sb, &tol).unwrap();
        for i in 0..dim {
            prop_assert!(m.get(i, dim - 1).abs() <= tol.eq_tol * small.frobenius_norm().max(1.0));
        }
        for i in 0..dim - 1 {
            for j in 0..dim - 1 {
                prop_assert!((m.get(i, j) - small.get(i, j)).abs() <= tol.eq_tol * small.frobenius_norm().max(1.0));
            }
        }
    }
}

#[test]
fn from_function_matches_builtin() {
    let tol = Tolerances::default();
    let geo = Connection::builtin(MeanKind::Geometric, Some(0.5)).unwrap();
    let custom = Connection::from_function(ReprFunction::new(f64::sqrt));
    let mut rng = trial_rng(5, 0);
    for dim in 1..=6 {
        let a = random_pd(dim, &mut rng, &tol);
        let b = random_pd(dim, &mut rng, &tol);
        let x = geo.apply(&a, &b, &tol).unwrap();
        let y = custom.apply(&a, &b, &tol).unwrap();
        assert!(x.relative_distance(&y) <= 1e-12);
    }
}

#[test]
fn self_mean_equation_solution() {
    let tol = Tolerances::default();
    let mut rng = trial_rng(6, 0);
    for conn in standard_catalog() {
        let a = random_pd(4, &mut rng, &tol);
        let f1 = conn.repr_fn_eval(1.0);
        match conn.solve_self_mean_equation(&a, &tol) {
            Ok(x) => {
                assert!(f1 > 0.0);
                let xx = conn.apply(&x, &x, &tol).unwrap();
                assert!(xx.relative_distance(&a) <= tol.eq_tol);
            }
            Err(_) => assert!(conn.classify(&tol).is_zero),
        }
    }
}

#[test]
fn geometric_mean_of_commuting_pair() {
    // diag(1,4) # diag(9,1) = diag(3,2)
    let tol = Tolerances::default();
    let geo = Connection::builtin(MeanKind::Geometric, Some(0.5)).unwrap();
    let m = geo.apply(&SymMatrix::diag(&[1.0, 4.0]), &SymMatrix::diag(&[9.0, 1.0]), &tol).unwrap();
    assert!(m.distance(&SymMatrix::diag(&[3.0, 2.0])) <= 1e-14);
}

#[test]
fn logarithmic_mean_scalar_values() {
    // L(1, e) = (e − 1) / 1
    let tol = Tolerances::default();
    let log = Connection::builtin(MeanKind::Logarithmic, None).unwrap();
    let e = std::f64::consts::E;
    let m = log.apply(&SymMatrix::scalar(1.0), &SymMatrix::scalar(e), &tol).unwrap();
    assert!((m.get(0, 0) - (e - 1.0)).abs() <= 1e-14);
    assert_eq!(log.repr_fn_eval(0.0), 0.0);
    assert!((log.repr_fn_eval(1.0 + 1e-9) - (1.0 + 0.5e-9)).abs() <= 1e-15);
}
