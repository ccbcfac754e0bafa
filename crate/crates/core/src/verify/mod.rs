//! Randomized property suites and the fixed counterexample corpus.
//!
//! Each suite draws `cfg.trials` independent trials. Trial `i` uses
//! dimension `cfg.dims[i % dims.len()]` and its own generator stream derived
//! from `(seed, i)`, so a [`Report`] depends only on the [`TrialConfig`] and
//! not on scheduling. A trial counts as one violation if any of its checks
//! fails; the first failing check of up to five trials is kept as a witness.

mod counterexamples;
pub mod generators;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MeansError, Result};
use crate::linalg::{eigh, SymMatrix, Tolerances};

pub use counterexamples::run_counterexamples;
pub use suites::{
    check_axioms, check_betweenness, check_continuity_from_above, check_positivity,
    check_strictness_and_order,
};

pub const MAX_WITNESSES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self { dims: vec![1, 2, 3, 5, 8], trials: 500, seed: 42, tol: Tolerances::default() }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(MeansError::InvalidMatrix("trial dims must be nonempty and at least 1".into()));
        }
        self.tol.validate()
    }

    fn dim_for(&self, trial: usize) -> usize {
        self.dims[trial % self.dims.len()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: SymMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub dim: usize,
    pub check: String,
    pub margin: f64,
    pub detail: String,
    pub inputs: Vec<NamedMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub connection: String,
    pub trials: usize,
    pub violations: usize,
    /// Smallest normalized margin over all checks; negative means violated.
    pub worst_margin: Option<f64>,
    pub witnesses: Vec<Witness>,
    pub seed: u64,
    pub elapsed_ms: f64,
    pub counters: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// The report with the wall-clock field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        Self { elapsed_ms: 0.0, ..self.clone() }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{:<12} {:<28} trials={:<5} violations={:<5} worst_margin={}",
            self.suite,
            self.connection,
            self.trials,
            self.violations,
            self.worst_margin.map_or("n/a".to_string(), |m| format!("{m:.3e}"))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Continuity,
    Positivity,
    Betweenness,
    Strictness,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Axioms, Suite::Continuity, Suite::Positivity, Suite::Betweenness, Suite::Strictness];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Continuity => "continuity",
            Suite::Positivity => "positivity",
            Suite::Betweenness => "betweenness",
            Suite::Strictness => "strictness",
        }
    }

    pub fn run<O: crate::means::BinaryOperation + ?Sized>(self, op: &O, cfg: &TrialConfig) -> Result<Report> {
        match self {
            Suite::Axioms => check_axioms(op, cfg),
            Suite::Continuity => check_continuity_from_above(op, cfg),
            Suite::Positivity => check_positivity(op, cfg),
            Suite::Betweenness => check_betweenness(op, cfg),
            Suite::Strictness => check_strictness_and_order(op, cfg),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = MeansError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| MeansError::Parse(format!("unknown suite '{s}'")))
    }
}

/// Outcome of one check within a trial.
struct CheckResult {
    check: &'static str,
    margin: f64,
    passed: bool,
    detail: String,
    inputs: Vec<NamedMatrix>,
}

/// Collects check outcomes for one trial.
pub(crate) struct TrialLog<'a> {
    tol: &'a Tolerances,
    checks: Vec<CheckResult>,
    counters: BTreeMap<String, u64>,
}

type Inputs<'m> = &'m [(&'m str, &'m SymMatrix)];

fn own(inputs: Inputs<'_>) -> Vec<NamedMatrix> {
    inputs.iter().map(|(n, m)| NamedMatrix { name: n.to_string(), matrix: (*m).clone() }).collect()
}

/// `λ_min(upper − lower) / max(1, ‖lower‖_F, ‖upper‖_F)`.
pub(crate) fn loewner_gap(lower: &SymMatrix, upper: &SymMatrix) -> Result<f64> {
    lower.check_same_dim(upper)?;
    let scale = lower.frobenius_norm().max(upper.frobenius_norm()).max(1.0);
    Ok(eigh(&(upper - lower))?.min() / scale)
}

/// Loewner test used throughout the suites: gap at least `-psd_slack`.
pub(crate) fn loewner_holds(lower: &SymMatrix, upper: &SymMatrix, tol: &Tolerances) -> Result<bool> {
    Ok(loewner_gap(lower, upper)? >= -tol.psd_slack)
}

impl<'a> TrialLog<'a> {
    fn new(tol: &'a Tolerances) -> Self {
        Self { tol, checks: Vec::new(), counters: BTreeMap::new() }
    }

    fn push(&mut self, check: &'static str, margin: f64, detail: String, inputs: Inputs<'_>) -> bool {
        let passed = margin >= 0.0;
        let inputs = if passed { Vec::new() } else { own(inputs) };
        self.checks.push(CheckResult { check, margin, passed, detail, inputs });
        passed
    }

    pub fn count(&mut self, key: &str) {
        *self.counters.entry(key.to_string()).or_insert(0) += 1;
    }

    /// `lower ⪯ upper` within the eigenvalue slack.
    pub fn loewner(&mut self, check: &'static str, lower: &SymMatrix, upper: &SymMatrix, inputs: Inputs<'_>) -> bool {
        match loewner_gap(lower, upper) {
            Ok(gap) => {
                let margin = gap + self.tol.psd_slack;
                self.push(check, margin, format!("relative min eigenvalue of difference {gap:.3e}"), inputs)
            }
            Err(e) => self.error(check, &e, inputs),
        }
    }

    /// `‖x − y‖_F ≤ rel · max(1, ‖y‖_F)`.
    pub fn close(&mut self, check: &'static str, x: &SymMatrix, y: &SymMatrix, rel: f64, inputs: Inputs<'_>) -> bool {
        let d = x.relative_distance(y);
        self.push(check, rel - d, format!("relative distance {d:.3e} (tolerance {rel:.1e})"), inputs)
    }

    /// `‖x − y‖_F > rel · ‖y‖_F`.
    pub fn distinct(&mut self, check: &'static str, x: &SymMatrix, y: &SymMatrix, rel: f64, inputs: Inputs<'_>) -> bool {
        let d = x.distance(y) / y.frobenius_norm().max(f64::MIN_POSITIVE);
        self.push(check, d - rel, format!("relative distance {d:.3e} must exceed {rel:.1e}"), inputs)
    }

    /// `lhs ≤ rhs + rel · max(1, |lhs|, |rhs|)`.
    pub fn scalar_leq(&mut self, check: &'static str, lhs: f64, rhs: f64, rel: f64, inputs: Inputs<'_>) -> bool {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        let margin = if lhs.is_nan() || rhs.is_nan() { f64::NEG_INFINITY } else { (rhs - lhs) / scale + rel };
        self.push(check, margin, format!("{lhs:.6e} <= {rhs:.6e}"), inputs)
    }

    /// Condition with an already normalized margin.
    pub fn margin(&mut self, check: &'static str, margin: f64, detail: String, inputs: Inputs<'_>) -> bool {
        self.push(check, margin, detail, inputs)
    }

    pub fn error(&mut self, check: &'static str, err: &MeansError, inputs: Inputs<'_>) -> bool {
        self.push(check, f64::NEG_INFINITY, format!("error: {err}"), inputs)
    }
}

/// Runs `trial` for every trial index (in parallel) and folds the logs into
/// a report in trial order.
pub(crate) fn run_trials<F>(suite: &str, connection: String, cfg: &TrialConfig, trial: F) -> Result<Report>
where
    F: Fn(usize, usize, &mut ChaCha8Rng, &mut TrialLog<'_>) + Sync,
{
    cfg.validate()?;
    let start = Instant::now();
    let logs: Vec<(usize, Vec<CheckResult>, BTreeMap<String, u64>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let dim = cfg.dim_for(i);
            let mut rng = generators::trial_rng(cfg.seed, i);
            let mut log = TrialLog::new(&cfg.tol);
            trial(i, dim, &mut rng, &mut log);
            (dim, log.checks, log.counters)
        })
        .collect();
    let mut report = Report {
        suite: suite.to_string(),
        connection,
        trials: cfg.trials,
        violations: 0,
        worst_margin: None,
        witnesses: Vec::new(),
        seed: cfg.seed,
        elapsed_ms: 0.0,
        counters: BTreeMap::new(),
        notes: Vec::new(),
    };
    for (i, (dim, checks, counters)) in logs.into_iter().enumerate() {
        for (k, v) in counters {
            *report.counters.entry(k).or_insert(0) += v;
        }
        for c in &checks {
            report.worst_margin = Some(report.worst_margin.map_or(c.margin, |w: f64| w.min(c.margin)));
        }
        if let Some(failed) = checks.into_iter().find(|c| !c.passed) {
            report.violations += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(Witness {
                    trial: i,
                    dim,
                    check: failed.check.to_string(),
                    margin: failed.margin,
                    detail: failed.detail,
                    inputs: failed.inputs,
                });
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Runs one suite, or all five when `suite` is `None`.
pub fn run_suites<O: crate::means::BinaryOperation + ?Sized>(
    op: &O,
    suite: Option<Suite>,
    cfg: &TrialConfig,
) -> Result<Vec<Report>> {
    match suite {
        Some(s) => Ok(vec![s.run(op, cfg)?]),
        None => Suite::ALL.iter().map(|s| s.run(op, cfg)).collect(),
    }
}
