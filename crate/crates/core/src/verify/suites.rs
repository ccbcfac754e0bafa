use rand::Rng;

use super::generators::{
    random_congruence, random_congruence_rank, random_ordered_pair, random_ordered_pair_rank, random_pd, random_psd, random_vector,
};
use super::{loewner_holds, run_trials, Report, TrialConfig, TrialLog};
use crate::error::Result;
use crate::linalg::{congruence, eigh, inv_pd, is_pd, SymMatrix, Tolerances};
use crate::means::{audit_grid, classify_operation, BinaryOperation};

/// Number of terms of the decreasing sequences in the continuity suite.
const CONTINUITY_STEPS: i32 = 40;
/// Draws per trial when sampling the converse order implications.
const CONVERSE_ATTEMPTS: usize = 64;

fn apply_logged<O: BinaryOperation + ?Sized>(
    op: &O,
    a: &SymMatrix,
    b: &SymMatrix,
    tol: &Tolerances,
    log: &mut TrialLog<'_>,
    check: &'static str,
) -> Option<SymMatrix> {
    match op.apply(a, b, tol) {
        Ok(m) => Some(m),
        Err(e) => {
            log.error(check, &e, &[("A", a), ("B", b)]);
            None
        }
    }
}

/// Monotonicity, transformer inequality, congruence invariance for positive
/// definite `C`, and scalar consistency `a σ b = a f(b/a)` in dimension 1.
pub fn check_axioms<O: BinaryOperation + ?Sized>(op: &O, cfg: &TrialConfig) -> Result<Report> {
    let tol = cfg.tol;
    run_trials("axioms", op.label(), cfg, |i, dim, rng, log| {
        // about one trial in five has a singular lower argument
        let rank = if rng.random_bool(0.2) { dim - 1 } else { dim };
        let (a, c) = random_ordered_pair_rank(dim, rank, rng);
        let (b, d) = random_ordered_pair(dim, rng);
        let Some(ab) = apply_logged(op, &a, &b, &tol, log, "apply") else { return };
        if let Some(cd) = apply_logged(op, &c, &d, &tol, log, "apply") {
            log.loewner("monotonicity", &ab, &cd, &[("A", &a), ("B", &b), ("C", &c), ("D", &d)]);
        }

        // a singular transformer every fourth trial
        let rank = if i % 4 == 0 && dim > 1 { dim - 1 } else { dim };
        let t = random_congruence_rank(dim, rank, rng);
        let (ta, tb) = (congruence(&t, &a).unwrap(), congruence(&t, &b).unwrap());
        if let Some(rhs) = apply_logged(op, &ta, &tb, &tol, log, "apply") {
            let lhs = congruence(&t, &ab).unwrap();
            log.loewner("transformer inequality", &lhs, &rhs, &[("A", &a), ("B", &b), ("C", &t)]);
        }

        let p = random_congruence(dim, rng);
        let (pa, pb) = (congruence(&p, &a).unwrap(), congruence(&p, &b).unwrap());
        if let Some(rhs) = apply_logged(op, &pa, &pb, &tol, log, "apply") {
            let lhs = congruence(&p, &ab).unwrap();
            log.close("congruence invariance", &lhs, &rhs, tol.eq_tol, &[("A", &a), ("B", &b), ("C", &p)]);
        }

        if dim == 1 && a.get(0, 0) > 0.0 {
            let (x, y) = (a.get(0, 0), b.get(0, 0));
            let expected = SymMatrix::scalar(x * op.repr_fn_eval(y / x));
            log.close("scalar consistency", &ab, &expected, tol.eq_tol, &[("A", &a), ("B", &b)]);
        }
    })
}

/// Continuity from above along `A_n = A + 2⁻ⁿP`, `B_n = B + 2⁻ⁿQ`.
///
/// Every third trial uses a singular target `A`. The sequence must be
/// Loewner-nonincreasing; for definite targets it must reach `A σ B` within
/// `eq_tol` by the last term, for singular targets it must stay above the
/// limit with a nonincreasing trace gap (the rate there depends on `f`).
pub fn check_continuity_from_above<O: BinaryOperation + ?Sized>(op: &O, cfg: &TrialConfig) -> Result<Report> {
    let tol = cfg.tol;
    run_trials("continuity", op.label(), cfg, |i, dim, rng, log| {
        let singular = i % 3 == 0;
        // Singular targets get a well separated spectrum: near a kernel the
        // floating-point error of h(λ) scales like (u·cond)^α for h = x^α.
        let (a, b) = if singular {
            (random_congruence_rank(dim, dim - 1, rng), random_congruence(dim, rng))
        } else {
            (random_psd(dim, rng), random_pd(dim, rng, &tol))
        };
        let p = random_psd(dim, rng);
        let q = random_psd(dim, rng);
        let Some(target) = apply_logged(op, &a, &b, &tol, log, "apply") else { return };
        let mut first: Option<SymMatrix> = None;
        let mut prev: Option<SymMatrix> = None;
        let mut prev_gap = f64::INFINITY;
        for n in 0..=CONTINUITY_STEPS {
            let h = 2f64.powi(-n);
            let an = &a + &p.scale(h);
            let bn = &b + &q.scale(h);
            let Some(sn) = apply_logged(op, &an, &bn, &tol, log, "apply") else { return };
            if let Some(prev) = &prev {
                if !log.loewner("nonincreasing sequence", &sn, prev, &[("A", &a), ("B", &b), ("P", &p), ("Q", &q)]) {
                    return;
                }
            }
            if singular {
                let gap = (&sn - &target).trace();
                let scale = target.frobenius_norm().max(1.0);
                log.margin(
                    "nonincreasing gap",
                    (prev_gap - gap) / scale + tol.eq_tol,
                    format!("trace gap {gap:.3e} after {prev_gap:.3e} at n = {n}"),
                    &[("A", &a), ("B", &b), ("P", &p), ("Q", &q)],
                );
                prev_gap = gap;
            }
            if first.is_none() {
                first = Some(sn.clone());
            }
            prev = Some(sn);
        }
        let last = prev.expect("sequence is nonempty");
        let inputs = [("A", &a), ("B", &b), ("P", &p), ("Q", &q)];
        if singular {
            log.count("singular targets");
            log.loewner("limit below sequence", &target, &last, &inputs);
        } else {
            log.close("convergence", &last, &target, tol.eq_tol, &inputs);
        }
    })
}

/// Positivity: `A, B > 0 ⟹ A σ B > 0`, with `I σ A = f(A)` and
/// `A σ I = g(A)` bounded below by `f(λ_min)` and `g(λ_min)`, and
/// `A σ A = f(1) A`. A zero connection must return exactly zero.
pub fn check_positivity<O: BinaryOperation + ?Sized>(op: &O, cfg: &TrialConfig) -> Result<Report> {
    let tol = cfg.tol;
    let cls = classify_operation(op, &tol);
    let f1 = op.repr_fn_eval(1.0);
    let mut report = run_trials("positivity", op.label(), cfg, |_, dim, rng, log| {
        let a = random_pd(dim, rng, &tol);
        let b = random_pd(dim, rng, &tol);
        let id = SymMatrix::identity(dim);
        let inputs = [("A", &a), ("B", &b)];
        let Some(ab) = apply_logged(op, &a, &b, &tol, log, "apply") else { return };
        let Some(ia) = apply_logged(op, &id, &a, &tol, log, "apply") else { return };
        let Some(ai) = apply_logged(op, &a, &id, &tol, log, "apply") else { return };
        if cls.is_zero {
            for (check, m) in [("zero connection A σ B", &ab), ("zero connection I σ A", &ia), ("zero connection A σ I", &ai)] {
                let norm = m.frobenius_norm();
                log.margin(check, -norm, format!("norm {norm:.3e}, expected exactly 0"), &inputs);
            }
            return;
        }
        let lam = |m: &SymMatrix| eigh(m).map(|e| (e.min(), e.abs_max().max(1.0)));
        let (Ok((ab_min, ab_scale)), Ok((a_min, _))) = (lam(&ab), lam(&a)) else { return };
        log.margin(
            "A σ B > 0",
            ab_min / ab_scale,
            format!("min eigenvalue {ab_min:.3e}"),
            &inputs,
        );
        // I σ A = f(A) has smallest eigenvalue f(λ_min(A)) > 0
        let f_lo = op.repr_fn_eval(a_min);
        let g_lo = a_min * op.repr_fn_eval(1.0 / a_min);
        for (check, m, bound) in [("I σ A >= f(min eig A)", &ia, f_lo), ("A σ I >= g(min eig A)", &ai, g_lo)] {
            match lam(m) {
                Ok((lo, scale)) => {
                    log.margin(
                        check,
                        (lo - bound) / scale + tol.eq_tol,
                        format!("min eigenvalue {lo:.6e} vs bound {bound:.6e}"),
                        &inputs,
                    );
                    log.margin(check, lo / scale, format!("min eigenvalue {lo:.3e} must be positive"), &inputs);
                }
                Err(e) => {
                    log.error(check, &e, &inputs);
                }
            }
        }
        if let Some(aa) = apply_logged(op, &a, &a, &tol, log, "apply") {
            log.close("A σ A = f(1) A", &aa, &a.scale(f1), tol.eq_tol, &inputs);
        }
    })?;
    if cls.is_zero {
        report.notes.push("zero connection: positivity fails by definition; checked A σ B = 0".into());
    }
    if let Ok(m) = op.apply(&SymMatrix::diag(&[1.0, 0.0]), &SymMatrix::diag(&[0.0, 1.0]), &tol) {
        report.notes.push(format!(
            "PSD boundary: diag(1,0) σ diag(0,1) has Frobenius norm {:.3e} (positivity is only claimed for definite arguments)",
            m.frobenius_norm()
        ));
    }
    Ok(report)
}

/// Betweenness on ordered definite pairs: `A ⪯ A σ B ⪯ B`, the norm chain
/// `‖A‖ ≤ ‖A σ B‖ ≤ ‖B‖`, and the scalar bounds of `f` at one grid point
/// per trial. Connections that are not means are expected to fail.
pub fn check_betweenness<O: BinaryOperation + ?Sized>(op: &O, cfg: &TrialConfig) -> Result<Report> {
    let tol = cfg.tol;
    let grid = audit_grid();
    let mut report = run_trials("betweenness", op.label(), cfg, |i, dim, rng, log| {
        let a = random_pd(dim, rng, &tol);
        let b = &a + &random_psd(dim, rng);
        let inputs = [("A", &a), ("B", &b)];
        let Some(m) = apply_logged(op, &a, &b, &tol, log, "apply") else { return };
        log.loewner("A <= A σ B", &a, &m, &inputs);
        log.loewner("A σ B <= B", &m, &b, &inputs);
        let norm = |x: &SymMatrix| x.operator_norm().unwrap_or(f64::NAN);
        let (na, nm, nb) = (norm(&a), norm(&m), norm(&b));
        log.scalar_leq("‖A‖ <= ‖A σ B‖", na, nm, tol.eq_tol, &inputs);
        log.scalar_leq("‖A σ B‖ <= ‖B‖", nm, nb, tol.eq_tol, &inputs);

        let t = grid[i % grid.len()];
        let ft = op.repr_fn_eval(t);
        let (lo, hi) = if t >= 1.0 { (1.0, t) } else { (t, 1.0) };
        log.scalar_leq("scalar lower bound", lo, ft, tol.eq_tol, &[]);
        log.scalar_leq("scalar upper bound", ft, hi, tol.eq_tol, &[]);
    })?;
    if !classify_operation(op, &tol).is_mean {
        report.notes.push("not a mean (f(1) != 1): betweenness is expected to fail".into());
    }
    Ok(report)
}

/// Draws a definite pair `(A, B)` with `B = A + P − δ qqᵀ`, where `δ` is
/// uniform on `[0, 2/(qᵀP⁻¹q))`, so `A ⪯ B` holds for about half the draws
/// and fails by a small margin near the boundary.
fn near_ordered_pair<R: Rng + ?Sized>(dim: usize, rng: &mut R, tol: &Tolerances) -> Option<(SymMatrix, SymMatrix)> {
    let a = random_pd(dim, rng, tol);
    let p = random_pd(dim, rng, tol);
    let q = random_vector(dim, rng);
    let p_inv = inv_pd(&p, tol).ok()?;
    let s = (q.transpose() * p_inv.as_dmatrix() * &q)[(0, 0)];
    let delta = rng.random_range(0.0..2.0) / s;
    let qq = SymMatrix::from_dmatrix(&q * q.transpose());
    let b = &(&a + &p) - &qq.scale(delta);
    is_pd(&b, tol).ok()?.then_some((a, b))
}

/// Strictness and the order equivalences for non-trivial means.
///
/// For random definite `A ≠ B`, `A σ B` and `B σ A` must differ from both
/// arguments. On ordered pairs `A ⪯ B` the four relations `A ⪯ A σ B`,
/// `A σ B ⪯ B`, `A ⪯ B σ A`, `B σ A ⪯ B` must hold; conversely, on near-ordered
/// pairs accepted because `A ⪯ A σ B` holds, `A ⪯ B` must hold and so must
/// every other relation detected. Trivial means must show the expected
/// failure of strictness on the corresponding side.
pub fn check_strictness_and_order<O: BinaryOperation + ?Sized>(op: &O, cfg: &TrialConfig) -> Result<Report> {
    let tol = cfg.tol;
    let cls = classify_operation(op, &tol);
    if !cls.is_mean {
        let mut cfg0 = cfg.clone();
        cfg0.trials = 0;
        let mut report = run_trials("strictness", op.label(), &cfg0, |_, _, _, _| {})?;
        report.notes.push("not a mean: strictness is defined for means only".into());
        return Ok(report);
    }
    let trivial = cls.is_left_trivial || cls.is_right_trivial;
    let mut report = run_trials("strictness", op.label(), cfg, |_, dim, rng, log| {
        let a = random_pd(dim, rng, &tol);
        let b = random_pd(dim, rng, &tol);
        let inputs = [("A", &a), ("B", &b)];
        let Some(ab) = apply_logged(op, &a, &b, &tol, log, "apply") else { return };
        let Some(ba) = apply_logged(op, &b, &a, &tol, log, "apply") else { return };
        if cls.is_left_trivial {
            log.close("left-trivial: A σ B = A", &ab, &a, tol.eq_tol, &inputs);
        } else if cls.is_right_trivial {
            log.close("right-trivial: A σ B = B", &ab, &b, tol.eq_tol, &inputs);
        } else {
            log.distinct("A σ B != A", &ab, &a, tol.eq_tol, &inputs);
            log.distinct("A σ B != B", &ab, &b, tol.eq_tol, &inputs);
            log.distinct("B σ A != A", &ba, &a, tol.eq_tol, &inputs);
            log.distinct("B σ A != B", &ba, &b, tol.eq_tol, &inputs);
        }

        // forward: A ⪯ B implies all four relations
        let a2 = random_pd(dim, rng, &tol);
        let b2 = &a2 + &random_psd(dim, rng);
        let inputs2 = [("A", &a2), ("B", &b2)];
        let Some(m) = apply_logged(op, &a2, &b2, &tol, log, "apply") else { return };
        let Some(mt) = apply_logged(op, &b2, &a2, &tol, log, "apply") else { return };
        log.loewner("(ii) A <= A σ B", &a2, &m, &inputs2);
        log.loewner("(iii) A σ B <= B", &m, &b2, &inputs2);
        log.loewner("(iv) A <= B σ A", &a2, &mt, &inputs2);
        log.loewner("(v) B σ A <= B", &mt, &b2, &inputs2);
        log.count("forward pairs");

        if trivial {
            return;
        }
        // converse by rejection: keep pairs where A ⪯ A σ B is detected
        for _ in 0..CONVERSE_ATTEMPTS {
            let Some((a3, b3)) = near_ordered_pair(dim, rng, &tol) else { continue };
            let Ok(m3) = op.apply(&a3, &b3, &tol) else { continue };
            if !loewner_holds(&a3, &m3, &tol).unwrap_or(false) {
                log.count("converse rejected");
                continue;
            }
            log.count("converse pairs");
            let inputs3 = [("A", &a3), ("B", &b3)];
            let ordered = loewner_holds(&a3, &b3, &tol).unwrap_or(false);
            log.margin(
                "A <= A σ B implies A <= B",
                if ordered { 0.0 } else { -1.0 },
                "A <= A σ B detected on a pair with A not <= B".into(),
                &inputs3,
            );
            if let Ok(mt3) = op.apply(&b3, &a3, &tol) {
                for (check, lower, upper) in [
                    ("A σ B <= B iff A <= B", &m3, &b3),
                    ("A <= B σ A iff A <= B", &a3, &mt3),
                    ("B σ A <= B iff A <= B", &mt3, &b3),
                ] {
                    let holds = loewner_holds(lower, upper, &tol).unwrap_or(false);
                    log.margin(
                        check,
                        if holds == ordered { 0.0 } else { -1.0 },
                        format!("relation {holds} but A <= B is {ordered}"),
                        &inputs3,
                    );
                }
            }
            break;
        }
    })?;
    if trivial {
        report.notes.push("trivial mean: strictness failure on the trivial side is the expected outcome".into());
    }
    Ok(report)
}
