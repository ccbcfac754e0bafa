use meanskit::linalg::{eigh, fn_calculus, is_psd, loewner_leq, spectrum, sqrt_psd};
use meanskit::verify::generators::{random_psd, random_psd_rank, trial_rng};
use meanskit::{SymMatrix, Tolerances};
use proptest::prelude::*;

fn psd(seed: u64, dim: usize, rank: usize) -> SymMatrix {
    random_psd_rank(dim, rank.min(dim), &mut trial_rng(seed, 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn identity_and_constant_calculus(seed in any::<u64>(), dim in 1usize..=8, rank in 0usize..=8) {
        let tol = Tolerances::default();
        let a = psd(seed, dim, rank);
        let same = fn_calculus(|x| x, &a, &tol).unwrap();
        prop_assert!(same.relative_distance(&a) <= tol.eq_tol);
        let one = fn_calculus(|_| 1.0, &a, &tol).unwrap();
        prop_assert!(one.relative_distance(&SymMatrix::identity(dim)) <= tol.eq_tol);
    }

    #[test]
    fn square_root_squares_back(seed in any::<u64>(), dim in 1usize..=8, rank in 0usize..=8) {
        let tol = Tolerances::default();
        let a = psd(seed, dim, rank);
        let r = sqrt_psd(&a, &tol).unwrap();
        prop_assert!(is_psd(&r, &tol).unwrap());
        let sq = SymMatrix::from_dmatrix(r.as_dmatrix() * r.as_dmatrix());
        prop_assert!(sq.distance(&a) <= tol.eq_tol * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn spectral_mapping(seed in any::<u64>(), dim in 1usize..=8) {
        let tol = Tolerances::default();
        let a = psd(seed, dim, dim);
        let f = |x: f64| x.sqrt() + x.ln_1p();
        let lhs = spectrum(&fn_calculus(f, &a, &tol).unwrap()).unwrap();
        let mut rhs: Vec<f64> = spectrum(&a).unwrap().into_iter().map(|x| f(x.max(0.0))).collect();
        rhs.sort_by(f64::total_cmp);
        let scale = rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (l, r) in lhs.iter().zip(&rhs) {
            prop_assert!((l - r).abs() <= tol.eq_tol * scale);
        }
    }

    #[test]
    fn loewner_order_laws(seed in any::<u64>(), dim in 1usize..=6) {
        let tol = Tolerances::default();
        let mut rng = trial_rng(seed, 1);
        let a = random_psd(dim, &mut rng);
        let b = &a + &random_psd(dim, &mut rng);
        let c = &b + &random_psd(dim, &mut rng);
        prop_assert!(loewner_leq(&a, &a, &tol).unwrap());
        prop_assert!(loewner_leq(&a, &b, &tol).unwrap() && loewner_leq(&b, &c, &tol).unwrap());
        prop_assert!(loewner_leq(&a, &c, &tol).unwrap());
        prop_assert!(!loewner_leq(&c, &a, &tol).unwrap());
        // antisymmetry within the slack
        let a2 = a.shift(1e-3 * tol.psd_slack);
        if loewner_leq(&a, &a2, &tol).unwrap() && loewner_leq(&a2, &a, &tol).unwrap() {
            let scale = eigh(&a).unwrap().abs_max().max(1.0);
            prop_assert!(a.distance(&a2) <= 2.0 * tol.psd_slack * scale * (dim as f64).sqrt());
        }
    }
}

#[test]
fn reference_values() {
    let tol = Tolerances::default();
    // [[2,1],[1,2]] has eigenvalues 1 and 3 with eigenvectors (1,∓1)/√2
    let a = SymMatrix::from_row_major(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
    assert_eq!(spectrum(&a).unwrap().len(), 2);
    let s = spectrum(&a).unwrap();
    assert!((s[0] - 1.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    let r = sqrt_psd(&a, &tol).unwrap();
    let (p, q) = ((3f64.sqrt() + 1.0) / 2.0, (3f64.sqrt() - 1.0) / 2.0);
    let expected = SymMatrix::from_row_major(2, &[p, q, q, p]).unwrap();
    assert!(r.distance(&expected) < 1e-14);
    let not_psd = SymMatrix::diag(&[1.0, -1e-3]);
    assert!(!is_psd(&not_psd, &tol).unwrap());
    assert!(sqrt_psd(&not_psd, &tol).is_err());
}
