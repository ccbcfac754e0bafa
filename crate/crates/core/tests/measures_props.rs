use meanskit::means::audit_grid;
use meanskit::measures::{connection_from_measure, measure_of_builtin, repr_fn_from_measure};
use meanskit::verify::generators::{random_pd, random_psd, trial_rng};
use meanskit::{BorelMeasure, Connection, Density, MeanKind, SymMatrix, Tolerances};
use proptest::prelude::*;

fn atoms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::btree_map(0u32..=64, 0.01f64..2.0, 0..5)
        .prop_map(|m| m.into_iter().map(|(k, w)| (f64::from(k) / 64.0, w)).collect())
}

fn measure() -> impl Strategy<Value = BorelMeasure> {
    (atoms(), prop::option::of(prop_oneof![Just(32usize), Just(64usize)])).prop_map(|(a, n)| {
        let density = n.map(|n| Density::arcsine(n).unwrap());
        BorelMeasure::new(a, density).unwrap()
    })
}

/// Atomic measure rescaled to total mass one.
fn normalized_atoms(mu: &BorelMeasure) -> BorelMeasure {
    let m = mu.total_mass();
    BorelMeasure::atomic(mu.atoms().iter().map(|&(t, w)| (t, w / m)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn repr_function_agrees_with_connection(mu in measure()) {
        let tol = Tolerances::default();
        let conn = connection_from_measure(mu.clone());
        for x in audit_grid() {
            let a = conn.repr_fn_eval(x);
            let b = repr_fn_from_measure(&mu, x);
            prop_assert!((a - b).abs() <= tol.eq_tol * b.abs().max(1.0));
        }
    }

    #[test]
    fn kernel_superposition_is_monotone_and_concave(mu in measure()) {
        let tol = Tolerances::default();
        let grid = audit_grid();
        let f: Vec<f64> = grid.iter().map(|&x| repr_fn_from_measure(&mu, x)).collect();
        for k in 1..grid.len() {
            prop_assert!(f[k] >= f[k - 1] - tol.eq_tol * f[k].abs().max(1.0));
        }
        for k in 1..grid.len() - 1 {
            let mid = repr_fn_from_measure(&mu, 0.5 * (grid[k - 1] + grid[k + 1]));
            let chord = 0.5 * (f[k - 1] + f[k + 1]);
            prop_assert!(mid >= chord - tol.eq_tol * mid.abs().max(1.0));
        }
    }

    #[test]
    fn positivity_iff_mass(mu in measure()) {
        prop_assert_eq!(mu.total_mass() > 0.0, repr_fn_from_measure(&mu, 1.0) > 0.0);
    }

    #[test]
    fn normalization_iff_mean(mu in measure()) {
        let tol = Tolerances::default();
        let conn = connection_from_measure(mu.clone());
        prop_assert_eq!(conn.is_mean(&tol), (mu.total_mass() - 1.0).abs() <= tol.eq_tol);
        if mu.density().is_none() && mu.total_mass() > 0.0 {
            prop_assert!(connection_from_measure(normalized_atoms(&mu)).is_mean(&tol));
        }
    }

    #[test]
    fn zero_measure_gives_zero(seed in any::<u64>(), dim in 1usize..=6) {
        let tol = Tolerances::default();
        let mut rng = trial_rng(seed, 0);
        let a = random_psd(dim, &mut rng);
        let b = random_psd(dim, &mut rng);
        let conn = connection_from_measure(BorelMeasure::zero());
        prop_assert_eq!(conn.apply(&a, &b, &tol).unwrap(), SymMatrix::zeros(dim));
    }

    #[test]
    fn dirac_reproduces_weighted_harmonic(t in 0.0f64..=1.0, seed in any::<u64>(), dim in 1usize..=6) {
        let tol = Tolerances::default();
        let mut rng = trial_rng(seed, 0);
        let a = random_pd(dim, &mut rng, &tol);
        let b = random_pd(dim, &mut rng, &tol);
        let via = connection_from_measure(BorelMeasure::dirac(t).unwrap()).apply(&a, &b, &tol).unwrap();
        let direct = Connection::builtin(MeanKind::Harmonic, Some(t)).unwrap().apply(&a, &b, &tol).unwrap();
        prop_assert!(via.relative_distance(&direct) <= 1e-12);
    }
}

#[test]
fn builtin_measures_round_trip() {
    let tol = Tolerances::default();
    let mut rng = trial_rng(3, 0);
    let cases = [
        (MeanKind::LeftTrivial, None),
        (MeanKind::RightTrivial, None),
        (MeanKind::Arithmetic, Some(0.3)),
        (MeanKind::Harmonic, Some(0.7)),
        (MeanKind::ParallelSum, None),
        (MeanKind::Sum, None),
        (MeanKind::Zero, None),
        (MeanKind::Geometric, Some(0.5)),
    ];
    for (kind, w) in cases {
        let mu = measure_of_builtin(kind, w).unwrap();
        let via = connection_from_measure(mu);
        let direct = Connection::builtin(kind, w).unwrap();
        let a = random_pd(3, &mut rng, &tol);
        let b = random_pd(3, &mut rng, &tol);
        let bound = if kind == MeanKind::Geometric { 1e-5 } else { 1e-12 };
        let x = via.apply(&a, &b, &tol).unwrap();
        let y = direct.apply(&a, &b, &tol).unwrap();
        assert!(x.relative_distance(&y) <= bound, "{kind}");
    }
    assert!(measure_of_builtin(MeanKind::Logarithmic, None).is_err());
    assert!(measure_of_builtin(MeanKind::Geometric, Some(0.3)).is_err());
}

#[test]
fn measure_path_handles_singular_pairs() {
    let tol = Tolerances::default();
    let mu = BorelMeasure::atomic(vec![(0.5, 1.0)]).unwrap();
    let conn = connection_from_measure(mu);
    // diag(1,0) !_{1/2} diag(0,1) = 0
    let m = conn.apply(&SymMatrix::diag(&[1.0, 0.0]), &SymMatrix::diag(&[0.0, 1.0]), &tol).unwrap();
    assert!(m.frobenius_norm() <= 1e-8);
    // diag(2,0) !_{1/2} diag(2,0) = diag(2,0)
    let m = conn.apply(&SymMatrix::diag(&[2.0, 0.0]), &SymMatrix::diag(&[2.0, 0.0]), &tol).unwrap();
    assert!(m.distance(&SymMatrix::diag(&[2.0, 0.0])) <= 1e-12);
}
