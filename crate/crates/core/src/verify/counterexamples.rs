use super::{loewner_gap, loewner_holds, run_trials, Report, TrialConfig};
use crate::error::Result;
use crate::linalg::{SymMatrix, Tolerances};
use crate::means::{Connection, MeanKind};

/// Tolerance for comparisons involving a limit value on singular inputs.
/// The regularized limit converges like `√ε`, so `eq_tol` is out of reach
/// at the smallest `ε`.
pub const SINGULAR_PAIR_TOL: f64 = 1e-5;

/// Replays the fixed 2×2 corpus with the geometric mean. Each case is one
/// trial and passes when the documented failure is reproduced:
///
/// 0. `diag(1,0) # diag(0,1) = 0` although `A ≠ 0`;
/// 1. `0 # diag(0,1) = 0 = A` although `A ≠ B`;
/// 2. `A # B ⪯ B` for the pair of case 0, while `A ⪯ B` fails.
pub fn run_counterexamples(tol: &Tolerances) -> Result<Report> {
    let geo = Connection::builtin(MeanKind::Geometric, Some(0.5))?;
    let cfg = TrialConfig { dims: vec![2], trials: 3, seed: 0, tol: *tol };
    let e1 = SymMatrix::diag(&[1.0, 0.0]);
    let e2 = SymMatrix::diag(&[0.0, 1.0]);
    let zero = SymMatrix::zeros(2);
    let mut report = run_trials("counterexamples", geo.label(), &cfg, |i, _, _, log| {
        let (a, b) = if i == 1 { (&zero, &e2) } else { (&e1, &e2) };
        let inputs = [("A", a), ("B", b)];
        let m = match geo.apply(a, b, tol) {
            Ok(m) => m,
            Err(e) => {
                log.error("apply", &e, &inputs);
                return;
            }
        };
        match i {
            0 => {
                let norm = m.frobenius_norm();
                log.margin(
                    "A # B = 0",
                    SINGULAR_PAIR_TOL - norm,
                    format!("‖A # B‖_F = {norm:.3e} (bound {SINGULAR_PAIR_TOL:.0e})"),
                    &inputs,
                );
                log.margin("A != 0", a.frobenius_norm(), "A must be nonzero".into(), &inputs);
            }
            1 => {
                log.close("A # B = A", &m, a, SINGULAR_PAIR_TOL, &inputs);
                log.distinct("A != B", a, b, tol.eq_tol, &inputs);
            }
            _ => {
                match loewner_gap(&m, b) {
                    Ok(gap) => log.margin(
                        "A # B <= B",
                        gap + SINGULAR_PAIR_TOL,
                        format!("relative min eigenvalue of difference {gap:.3e}"),
                        &inputs,
                    ),
                    Err(e) => log.error("A # B <= B", &e, &inputs),
                };
                let ordered = loewner_holds(a, b, tol).unwrap_or(true);
                log.margin(
                    "A <= B fails",
                    if ordered { -1.0 } else { 0.0 },
                    format!("A <= B evaluated to {ordered}"),
                    &inputs,
                );
            }
        }
    })?;
    report.notes.push(format!(
        "limit values on singular pairs are compared at {SINGULAR_PAIR_TOL:.0e} rather than eq_tol: the regularized limit converges like the square root of epsilon"
    ));
    Ok(report)
}
