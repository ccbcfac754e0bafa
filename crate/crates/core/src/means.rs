//! Operator connections and means as values.
//!
//! A [`Connection`] is one of: a builtin kind, a connection generated by a
//! representing function, a connection generated by a measure on `[0, 1]`,
//! or the transpose of another connection. All of them evaluate on PSD
//! pairs through [`Connection::apply`] and expose their representing
//! function through [`Connection::repr_fn_eval`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{MeansError, Result};
use crate::linalg::{
    apply_to_eigen, congruence, eigh, eigh_psd, regularize_limit, Eigen, SymMatrix, Tolerances,
};
use crate::measures::{self, BorelMeasure};

/// The audit grid `{2⁻¹⁰, 2⁻⁹, …, 2¹⁰}`.
pub fn audit_grid() -> Vec<f64> {
    (-10..=10).map(|k| 2f64.powi(k)).collect()
}

/// Weights used for the weighted kinds in the standard catalog.
pub const CATALOG_WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];

/// The fifteen builtin connections exercised by the verification suites:
/// the trivial means, the three weighted families at each catalog weight,
/// the logarithmic mean, parallel sum, sum and zero.
pub fn standard_catalog() -> Vec<Connection> {
    MeanKind::ALL
        .into_iter()
        .flat_map(|kind| {
            let weights: Vec<Option<f64>> =
                if kind.is_weighted() { CATALOG_WEIGHTS.iter().map(|&w| Some(w)).collect() } else { vec![None] };
            weights.into_iter().map(move |w| Connection::builtin(kind, w).expect("catalog weights are valid"))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanKind {
    LeftTrivial,
    RightTrivial,
    Arithmetic,
    Geometric,
    Harmonic,
    Logarithmic,
    ParallelSum,
    Sum,
    Zero,
}

impl MeanKind {
    pub const ALL: [MeanKind; 9] = [
        MeanKind::LeftTrivial,
        MeanKind::RightTrivial,
        MeanKind::Arithmetic,
        MeanKind::Geometric,
        MeanKind::Harmonic,
        MeanKind::Logarithmic,
        MeanKind::ParallelSum,
        MeanKind::Sum,
        MeanKind::Zero,
    ];

    pub fn is_weighted(self) -> bool {
        matches!(self, MeanKind::Arithmetic | MeanKind::Geometric | MeanKind::Harmonic)
    }

    pub fn name(self) -> &'static str {
        match self {
            MeanKind::LeftTrivial => "left-trivial",
            MeanKind::RightTrivial => "right-trivial",
            MeanKind::Arithmetic => "arithmetic",
            MeanKind::Geometric => "geometric",
            MeanKind::Harmonic => "harmonic",
            MeanKind::Logarithmic => "logarithmic",
            MeanKind::ParallelSum => "parallel-sum",
            MeanKind::Sum => "sum",
            MeanKind::Zero => "zero",
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeanKind {
    type Err = MeansError;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().to_ascii_lowercase().replace('_', "-");
        MeanKind::ALL
            .into_iter()
            .find(|k| k.name() == normalized)
            .ok_or_else(|| MeansError::Parse(format!("unknown mean kind '{s}'")))
    }
}

/// `(x − 1) / log x`, continuous at 0 and 1.
pub fn logarithmic_mean_fn(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let u = x - 1.0;
    if u.abs() < 1e-4 {
        // u / log1p(u) = 1 + u/2 − u²/12 + u³/24 − 19u⁴/720 + …
        1.0 + u * (0.5 + u * (-1.0 / 12.0 + u * (1.0 / 24.0 - u * 19.0 / 720.0)))
    } else {
        u / u.ln_1p()
    }
}

/// A representing function `f: [0, ∞) → [0, ∞)`, accepted as operator
/// monotone on trust and audited only on a grid.
#[derive(Clone)]
pub struct ReprFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    f_at_0: f64,
    f_at_1: f64,
    slope_at_infinity: f64,
}

impl ReprFunction {
    /// Wraps `eval`. `f(0)` is taken as `eval(0)` and the asymptotic slope
    /// `lim f(x)/x` is estimated at `x = 1e12`.
    pub fn new<F>(eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let f_at_0 = eval(0.0);
        let f_at_1 = eval(1.0);
        let slope_at_infinity = eval(1e12) / 1e12;
        Self { eval: Arc::new(eval), f_at_0, f_at_1, slope_at_infinity }
    }

    /// Overrides `f(0)` for functions whose formula is singular at 0.
    pub fn with_f_at_0(mut self, value: f64) -> Self {
        self.f_at_0 = value;
        self
    }

    /// Overrides `lim_{x→∞} f(x)/x`.
    pub fn with_slope_at_infinity(mut self, value: f64) -> Self {
        self.slope_at_infinity = value;
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            self.f_at_0
        } else {
            (self.eval)(x)
        }
    }

    pub fn f_at_0(&self) -> f64 {
        self.f_at_0
    }

    pub fn f_at_1(&self) -> f64 {
        self.f_at_1
    }

    pub fn slope_at_infinity(&self) -> f64 {
        self.slope_at_infinity
    }

    /// Checks the function's invariants on the audit grid: finite and
    /// nonnegative values, `f(0) ≤ f(1e−12)`, nondecreasing, and midpoint
    /// concave between neighbouring grid points. Returns the first failure.
    pub fn audit(&self, tol: &Tolerances) -> std::result::Result<(), String> {
        let grid = audit_grid();
        let values: Vec<f64> = grid.iter().map(|&x| self.eval(x)).collect();
        for (&x, &v) in grid.iter().zip(&values) {
            if !v.is_finite() || v < 0.0 {
                return Err(format!("f({x}) = {v} is not a finite nonnegative value"));
            }
        }
        let near_zero = self.eval(1e-12);
        if !(self.f_at_0 >= 0.0 && self.f_at_0 <= near_zero + tol.eq_tol) {
            return Err(format!("f(0) = {} inconsistent with f(1e-12) = {near_zero}", self.f_at_0));
        }
        if (self.f_at_1 - (self.eval)(1.0)).abs() > tol.eq_tol {
            return Err(format!("stored f(1) = {} differs from eval(1)", self.f_at_1));
        }
        for i in 0..grid.len() - 1 {
            let (a, b) = (grid[i], grid[i + 1]);
            let (fa, fb) = (values[i], values[i + 1]);
            let scale = fa.abs().max(fb.abs()).max(1.0);
            if fb < fa - tol.eq_tol * scale {
                return Err(format!("decreasing between {a} and {b}"));
            }
            let mid = self.eval(0.5 * (a + b));
            if mid < 0.5 * (fa + fb) - tol.eq_tol * scale {
                return Err(format!("not midpoint concave on [{a}, {b}]"));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ReprFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReprFunction")
            .field("f_at_0", &self.f_at_0)
            .field("f_at_1", &self.f_at_1)
            .field("slope_at_infinity", &self.slope_at_infinity)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Builtin {
    kind: MeanKind,
    weight: Option<f64>,
}

impl Builtin {
    pub fn kind(&self) -> MeanKind {
        self.kind
    }

    /// The weight α of weighted kinds.
    pub fn weight(&self) -> Option<f64> {
        self.weight
    }

    fn alpha(&self) -> f64 {
        self.weight.unwrap_or(0.5)
    }

    pub fn repr(&self, x: f64) -> f64 {
        let a = self.alpha();
        match self.kind {
            MeanKind::LeftTrivial => 1.0,
            MeanKind::RightTrivial => x,
            MeanKind::Arithmetic => (1.0 - a) + a * x,
            MeanKind::Geometric => x.powf(a),
            MeanKind::Harmonic => measures::weighted_harmonic_kernel(x, a),
            MeanKind::Logarithmic => logarithmic_mean_fn(x),
            MeanKind::ParallelSum => x / (1.0 + x),
            MeanKind::Sum => 1.0 + x,
            MeanKind::Zero => 0.0,
        }
    }

    /// `lim_{x→∞} f(x)/x`, which is `f` of the transpose at 0.
    pub fn slope_at_infinity(&self) -> f64 {
        let a = self.alpha();
        match self.kind {
            MeanKind::RightTrivial | MeanKind::Sum => 1.0,
            MeanKind::Arithmetic => a,
            MeanKind::Geometric | MeanKind::Harmonic => {
                if a == 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            MeanKind::LeftTrivial
            | MeanKind::Logarithmic
            | MeanKind::ParallelSum
            | MeanKind::Zero => 0.0,
        }
    }
}

/// A binary operation on PSD matrices together with its representing
/// function. Implemented by [`Connection`]; the verification suites accept
/// any implementation so that deliberately broken operations can be fed in.
pub trait BinaryOperation: Sync {
    fn label(&self) -> String;
    fn apply(&self, a: &SymMatrix, b: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix>;
    fn repr_fn_eval(&self, x: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub is_zero: bool,
    pub is_mean: bool,
    pub is_left_trivial: bool,
    pub is_right_trivial: bool,
    /// `None` when the connection is not a mean.
    pub strict_left: Option<bool>,
    pub strict_right: Option<bool>,
    pub strict: Option<bool>,
}

/// Classification from three samples of the representing function.
///
/// `f(1)` decides zero and mean. For a mean, `f(2) = 1` happens only for the
/// left-trivial mean and `f(2) = 2` only for the right-trivial one, since an
/// operator monotone function that is constant (or the identity) on an
/// interval is so everywhere.
pub fn classify_operation<O: BinaryOperation + ?Sized>(op: &O, tol: &Tolerances) -> ClassificationRecord {
    let f1 = op.repr_fn_eval(1.0);
    let f2 = op.repr_fn_eval(2.0);
    let is_zero = f1 <= tol.eq_tol;
    let is_mean = (f1 - 1.0).abs() <= tol.eq_tol;
    let is_left_trivial = is_mean && (f2 - 1.0).abs() <= tol.eq_tol;
    let is_right_trivial = is_mean && (f2 - 2.0).abs() <= tol.eq_tol;
    let (strict_left, strict_right, strict) = if is_mean {
        let l = !is_left_trivial;
        let r = !is_right_trivial;
        (Some(l), Some(r), Some(l && r))
    } else {
        (None, None, None)
    };
    ClassificationRecord {
        is_zero,
        is_mean,
        is_left_trivial,
        is_right_trivial,
        strict_left,
        strict_right,
        strict,
    }
}

#[derive(Debug, Clone)]
pub enum Connection {
    Builtin(Builtin),
    FromFunction(ReprFunction),
    FromMeasure(BorelMeasure),
    Transpose(Box<Connection>),
}

impl Connection {
    /// Builtin connection. `weight` is required for the weighted kinds
    /// (arithmetic, geometric, harmonic) and ignored otherwise.
    pub fn builtin(kind: MeanKind, weight: Option<f64>) -> Result<Self> {
        let weight = if kind.is_weighted() {
            let w = weight.ok_or_else(|| {
                MeansError::Parse(format!("mean kind '{kind}' requires a weight"))
            })?;
            if !(0.0..=1.0).contains(&w) {
                return Err(MeansError::InvalidWeight(w));
            }
            Some(w)
        } else {
            None
        };
        Ok(Connection::Builtin(Builtin { kind, weight }))
    }

    pub fn from_function(f: ReprFunction) -> Self {
        Connection::FromFunction(f)
    }

    pub fn from_measure(mu: BorelMeasure) -> Self {
        Connection::FromMeasure(mu)
    }

    /// The connection `(A, B) ↦ B σ A`.
    pub fn transpose(&self) -> Self {
        Connection::Transpose(Box::new(self.clone()))
    }

    pub fn label(&self) -> String {
        match self {
            Connection::Builtin(b) => match b.weight {
                Some(w) => format!("{}({})", b.kind, w),
                None => b.kind.to_string(),
            },
            Connection::FromFunction(_) => "function".to_string(),
            Connection::FromMeasure(mu) => format!("measure({})", mu.describe()),
            Connection::Transpose(inner) => format!("transpose({})", inner.label()),
        }
    }

    /// Representing function `f(x)`, where `f(x) I = I σ (xI)`.
    ///
    /// Returns NaN for negative `x`.
    pub fn repr_fn_eval(&self, x: f64) -> f64 {
        if x.is_nan() || x < 0.0 {
            return f64::NAN;
        }
        match self {
            Connection::Builtin(b) => b.repr(x),
            Connection::FromFunction(f) => f.eval(x),
            Connection::FromMeasure(mu) => measures::repr_fn_from_measure(mu, x),
            Connection::Transpose(inner) => {
                let inv = 1.0 / x;
                if x == 0.0 || !inv.is_finite() {
                    inner.slope_at_infinity()
                } else {
                    x * inner.repr_fn_eval(inv)
                }
            }
        }
    }

    /// `lim_{x→∞} f(x)/x`.
    pub fn slope_at_infinity(&self) -> f64 {
        match self {
            Connection::Builtin(b) => b.slope_at_infinity(),
            Connection::FromFunction(f) => f.slope_at_infinity(),
            Connection::FromMeasure(mu) => mu.mass_at(1.0),
            Connection::Transpose(inner) => inner.repr_fn_eval(0.0),
        }
    }

    /// The representing function as a standalone value.
    pub fn repr_function(&self) -> ReprFunction {
        let f0 = self.repr_fn_eval(0.0);
        let slope = self.slope_at_infinity();
        let me = self.clone();
        ReprFunction::new(move |x| me.repr_fn_eval(x))
            .with_f_at_0(f0)
            .with_slope_at_infinity(slope)
    }

    pub fn is_mean(&self, tol: &Tolerances) -> bool {
        (self.repr_fn_eval(1.0) - 1.0).abs() <= tol.eq_tol
    }

    pub fn classify(&self, tol: &Tolerances) -> ClassificationRecord {
        classify_operation(self, tol)
    }

    /// `A σ B` for PSD `A`, `B`.
    ///
    /// With a positive definite argument this is the congruence formula
    /// `A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}` (or its transposed form with
    /// `B` as pivot); with both arguments singular it is the limit of
    /// `(A + εI) σ (B + εI)` as `ε ↓ 0`.
    pub fn apply(&self, a: &SymMatrix, b: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix> {
        a.check_same_dim(b)?;
        let ea = eigh_checked(a, tol)?;
        let eb = eigh_checked(b, tol)?;
        self.apply_decomposed(a, &ea, b, &eb, tol)
    }

    fn apply_decomposed(
        &self,
        a: &SymMatrix,
        ea: &Eigen,
        b: &SymMatrix,
        eb: &Eigen,
        tol: &Tolerances,
    ) -> Result<SymMatrix> {
        match self {
            Connection::Transpose(inner) => inner.apply_decomposed(b, eb, a, ea, tol),
            Connection::FromMeasure(mu) => measures::apply_measure(mu, a, ea, b, eb, false, tol),
            Connection::Builtin(bi) => {
                let w = bi.alpha();
                match bi.kind {
                    MeanKind::LeftTrivial => Ok(a.clone()),
                    MeanKind::RightTrivial => Ok(b.clone()),
                    MeanKind::Sum => Ok(a + b),
                    MeanKind::Zero => Ok(SymMatrix::zeros(a.dim())),
                    MeanKind::Arithmetic => Ok(&a.scale(1.0 - w) + &b.scale(w)),
                    MeanKind::Geometric | MeanKind::Harmonic if w == 0.0 => Ok(a.clone()),
                    MeanKind::Geometric | MeanKind::Harmonic if w == 1.0 => Ok(b.clone()),
                    _ => self.apply_generic(ea, eb, tol),
                }
            }
            Connection::FromFunction(_) => self.apply_generic(ea, eb, tol),
        }
    }

    fn apply_generic(&self, ea: &Eigen, eb: &Eigen, tol: &Tolerances) -> Result<SymMatrix> {
        apply_with_repr(&|x| self.repr_fn_eval(x), self.slope_at_infinity(), ea, eb, tol)
    }

    /// `lim_{ε↓0} (A + εI) σ (B + εI)` evaluated through the ε schedule even
    /// when a faster exact route exists.
    pub fn apply_regularized(&self, a: &SymMatrix, b: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix> {
        a.check_same_dim(b)?;
        let ea = eigh_checked(a, tol)?;
        let eb = eigh_checked(b, tol)?;
        match self {
            Connection::Transpose(inner) => inner.apply_regularized(b, a, tol),
            Connection::FromMeasure(mu) => measures::apply_measure(mu, a, &ea, b, &eb, true, tol),
            Connection::Builtin(bi)
                if matches!(
                    bi.kind,
                    MeanKind::LeftTrivial
                        | MeanKind::RightTrivial
                        | MeanKind::Sum
                        | MeanKind::Zero
                        | MeanKind::Arithmetic
                ) =>
            {
                self.apply_decomposed(a, &ea, b, &eb, tol)
            }
            _ => regularized_with_repr(&|x| self.repr_fn_eval(x), &project_psd(&ea), &project_psd(&eb), tol),
        }
    }

    /// The unique positive definite solution `X = A / f(1)` of `X σ X = A`.
    pub fn solve_self_mean_equation(&self, a: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix> {
        let ea = eigh(a)?;
        if !is_pd_eig(&ea, tol) {
            return Err(MeansError::Singular { min_eigenvalue: ea.min() });
        }
        let f1 = self.repr_fn_eval(1.0);
        if f1.is_nan() || f1 <= tol.eq_tol {
            return Err(MeansError::NoSolution { f_at_1: f1 });
        }
        Ok(a.scale(1.0 / f1))
    }
}

impl BinaryOperation for Connection {
    fn label(&self) -> String {
        Connection::label(self)
    }

    fn apply(&self, a: &SymMatrix, b: &SymMatrix, tol: &Tolerances) -> Result<SymMatrix> {
        Connection::apply(self, a, b, tol)
    }

    fn repr_fn_eval(&self, x: f64) -> f64 {
        Connection::repr_fn_eval(self, x)
    }
}

/// Eigendecomposition that rejects matrices below the PSD slack.
pub(crate) fn eigh_checked(a: &SymMatrix, tol: &Tolerances) -> Result<Eigen> {
    let e = eigh(a)?;
    if e.min() < -tol.psd_slack * e.abs_max().max(1.0) {
        return Err(MeansError::NotPsd { min_eigenvalue: e.min() });
    }
    Ok(e)
}

pub(crate) fn is_pd_eig(e: &Eigen, tol: &Tolerances) -> bool {
    e.min() > tol.psd_slack * e.abs_max().max(1.0)
}

fn condition(e: &Eigen) -> f64 {
    e.max() / e.min()
}

pub(crate) fn project_psd(e: &Eigen) -> SymMatrix {
    let clipped: Vec<f64> = e.values.iter().map(|v| v.max(0.0)).collect();
    e.reconstruct(&clipped)
}

/// The connection with representing function `f` (and `lim f(x)/x = slope`)
/// applied to PSD matrices given by their eigendecompositions.
///
/// A positive definite argument serves as pivot of the congruence formula,
/// the better conditioned one if both qualify. Otherwise the pair is first
/// compressed to `ran(A + B)`: every connection vanishes on `ker A ∩ ker B`
/// because `A σ B ⪯ f(1)(A + B)`. Only a pair that stays singular after
/// compression goes through the ε-limit.
pub(crate) fn apply_with_repr(
    f: &dyn Fn(f64) -> f64,
    slope: f64,
    ea: &Eigen,
    eb: &Eigen,
    tol: &Tolerances,
) -> Result<SymMatrix> {
    let a_pd = is_pd_eig(ea, tol);
    let b_pd = is_pd_eig(eb, tol);
    let (a, b) = (project_psd(ea), project_psd(eb));
    if a_pd && (!b_pd || condition(ea) <= condition(eb)) {
        return pivot_formula(f, ea, &b, nullity(eb), tol);
    }
    if b_pd {
        let g = |x: f64| if x == 0.0 { slope } else { x * f(1.0 / x) };
        return pivot_formula(&g, eb, &a, nullity(ea), tol);
    }
    if let Some(basis) = common_range(&a, &b, tol)? {
        if basis.ncols() == 0 {
            return Ok(SymMatrix::zeros(a.dim()));
        }
        let compress = |m: &SymMatrix| SymMatrix::from_dmatrix(basis.transpose() * m.as_dmatrix() * &basis);
        let (ca, cb) = (compress(&a), compress(&b));
        let small = apply_with_repr(f, slope, &eigh(&ca)?, &eigh(&cb)?, tol)?;
        return Ok(SymMatrix::from_dmatrix(&basis * small.as_dmatrix() * basis.transpose()));
    }
    regularized_with_repr(f, &a, &b, tol)
}

/// `lim_{ε↓0} (A + εI) σ (B + εI)` through the ε schedule.
pub(crate) fn regularized_with_repr(
    f: &dyn Fn(f64) -> f64,
    a: &SymMatrix,
    b: &SymMatrix,
    tol: &Tolerances,
) -> Result<SymMatrix> {
    regularize_limit(
        |eps| {
            let ea = eigh(&a.shift(eps))?;
            if ea.min() <= 0.0 {
                return Err(MeansError::Singular { min_eigenvalue: ea.min() });
            }
            pivot_formula(f, &ea, &b.shift(eps), 0, tol)
        },
        tol,
    )
}

/// Orthonormal basis of `ran(A + B)` when it is a proper subspace.
fn common_range(a: &SymMatrix, b: &SymMatrix, tol: &Tolerances) -> Result<Option<DMatrix<f64>>> {
    let e = eigh(&(a + b))?;
    let cut = tol.psd_slack * e.abs_max().max(1.0);
    let keep: Vec<usize> = (0..e.values.len()).filter(|&i| e.values[i] > cut).collect();
    if keep.len() == e.values.len() {
        return Ok(None);
    }
    Ok(Some(e.vectors.select_columns(keep.iter())))
}

/// Number of eigenvalues indistinguishable from zero at working precision.
fn nullity(e: &Eigen) -> usize {
    let cut = 16.0 * e.values.len() as f64 * f64::EPSILON * e.abs_max();
    e.values.iter().take_while(|&&v| v <= cut).count()
}

/// `P^{1/2} h(P^{-1/2} X P^{-1/2}) P^{1/2}` for a positive definite pivot `P`.
///
/// Congruence preserves rank, so the `nullity` smallest eigenvalues of the
/// inner matrix are set to zero: near a kernel roundoff of order `u` would
/// otherwise turn into `h(u)`, which is far larger for roots.
fn pivot_formula(
    h: &dyn Fn(f64) -> f64,
    pivot: &Eigen,
    other: &SymMatrix,
    nullity: usize,
    tol: &Tolerances,
) -> Result<SymMatrix> {
    let roots: Vec<f64> = pivot.values.iter().map(|v| v.sqrt()).collect();
    let inv_roots: Vec<f64> = roots.iter().map(|r| 1.0 / r).collect();
    let sqrt = pivot.reconstruct(&roots);
    let inv_sqrt = pivot.reconstruct(&inv_roots);
    let inner = congruence(&inv_sqrt, other)?;
    let mut eig = eigh_psd(&inner, tol)?;
    for v in eig.values.iter_mut().take(nullity) {
        *v = 0.0;
    }
    congruence(&sqrt, &apply_to_eigen(&h, &eig)?)
}
