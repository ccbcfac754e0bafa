//! Finite Borel measures on `[0, 1]` and the connections they generate.
//!
//! A measure µ generates the connection
//! `A σ B = ∫ A !_t B dµ(t)` and the representing function
//! `f(x) = ∫ (1 !_t x) dµ(t)`, where `!_t` is the weighted harmonic mean.
//! Measures are atoms plus an optional density discretized once, at
//! construction, into quadrature nodes.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;


use crate::error::{MeansError, Result};
use crate::linalg::{Eigen, SymMatrix, Tolerances};
use crate::means::{apply_with_repr, project_psd, regularized_with_repr, Connection, MeanKind};
use crate::quadrature::gauss_legendre;

pub const DEFAULT_NODES: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum QuadraturePlan {
    /// `n`-point Gauss-Legendre in `t` on `[0, 1]`.
    GaussLegendre(usize),
    /// `t = sin²θ`, then `n`-point Gauss-Legendre in θ on `[0, π/2]`.
    TransformedArcsine(usize),
    Explicit { nodes: Vec<f64>, weights: Vec<f64> },
}

impl QuadraturePlan {
    pub fn node_count(&self) -> usize {
        match self {
            QuadraturePlan::GaussLegendre(n) | QuadraturePlan::TransformedArcsine(n) => *n,
            QuadraturePlan::Explicit { nodes, .. } => nodes.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            QuadraturePlan::GaussLegendre(0) | QuadraturePlan::TransformedArcsine(0) => {
                Err(MeansError::InvalidMeasure("quadrature needs at least one node".into()))
            }
            QuadraturePlan::Explicit { nodes, weights } => {
                if nodes.is_empty() || nodes.len() != weights.len() {
                    return Err(MeansError::InvalidMeasure(
                        "explicit plan needs equally many nodes and weights".into(),
                    ));
                }
                if nodes.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
                    return Err(MeansError::InvalidMeasure("explicit nodes must lie in (0, 1)".into()));
                }
                if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
                    return Err(MeansError::InvalidMeasure("explicit weights must be positive".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Density `ρ` on `(0, 1)`.
#[derive(Clone)]
pub enum DensityFn {
    /// `1 / (π √(t(1−t)))`.
    Arcsine,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl DensityFn {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            DensityFn::Arcsine => 1.0 / (PI * (t * (1.0 - t)).sqrt()),
            DensityFn::Custom(f) => f(t),
        }
    }
}

impl fmt::Debug for DensityFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityFn::Arcsine => f.write_str("Arcsine"),
            DensityFn::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Density {
    rho: DensityFn,
    plan: QuadraturePlan,
    /// `(t_j, w_j)` with the density already folded into `w_j`.
    nodes: Arc<[(f64, f64)]>,
}

impl Density {
    pub fn new(rho: DensityFn, plan: QuadraturePlan) -> Result<Self> {
        plan.validate()?;
        let nodes: Vec<(f64, f64)> = match &plan {
            QuadraturePlan::GaussLegendre(n) => gauss_legendre(*n, 0.0, 1.0)
                .into_iter()
                .map(|(t, w)| (t, w * rho.eval(t)))
                .collect(),
            QuadraturePlan::TransformedArcsine(n) => gauss_legendre(*n, 0.0, PI / 2.0)
                .into_iter()
                .map(|(theta, w)| {
                    let s = theta.sin();
                    let t = s * s;
                    // dt = sin 2θ dθ; for the arcsine density ρ(t) sin 2θ = 2/π
                    let weight = match &rho {
                        DensityFn::Arcsine => w * 2.0 / PI,
                        DensityFn::Custom(f) => w * f(t) * (2.0 * theta).sin(),
                    };
                    (t, weight)
                })
                .collect(),
            QuadraturePlan::Explicit { nodes, weights } => nodes
                .iter()
                .zip(weights)
                .map(|(&t, &w)| (t, w * rho.eval(t)))
                .collect(),
        };
        if let Some(&(t, w)) = nodes.iter().find(|(_, w)| !w.is_finite() || *w < 0.0) {
            return Err(MeansError::InvalidMeasure(format!("density weight {w} at t = {t}")));
        }
        Ok(Self { rho, plan, nodes: nodes.into() })
    }

    pub fn arcsine(n: usize) -> Result<Self> {
        Self::new(DensityFn::Arcsine, QuadraturePlan::TransformedArcsine(n))
    }

    pub fn rho(&self) -> &DensityFn {
        &self.rho
    }

    pub fn plan(&self) -> &QuadraturePlan {
        &self.plan
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn mass(&self) -> f64 {
        self.nodes.iter().map(|p| p.1).sum()
    }
}

/// A finite Borel measure on `[0, 1]`, stored unnormalized.
#[derive(Debug, Clone, Default)]
pub struct BorelMeasure {
    atoms: Vec<(f64, f64)>,
    density: Option<Density>,
}

impl BorelMeasure {
    /// Atoms `(t, w)` need `t ∈ [0, 1]`, `w > 0`, and distinct locations.
    pub fn new(mut atoms: Vec<(f64, f64)>, density: Option<Density>) -> Result<Self> {
        for &(t, w) in &atoms {
            if !(0.0..=1.0).contains(&t) {
                return Err(MeansError::InvalidMeasure(format!("atom location {t} outside [0, 1]")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(MeansError::InvalidMeasure(format!("atom weight {w} at {t} must be positive")));
            }
        }
        atoms.sort_by(|p, q| p.0.total_cmp(&q.0));
        if let Some(w) = atoms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(MeansError::InvalidMeasure(format!("duplicate atom at {}", w[0].0)));
        }
        Ok(Self { atoms, density })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn dirac(t: f64) -> Result<Self> {
        Self::new(vec![(t, 1.0)], None)
    }

    pub fn atomic(atoms: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(atoms, None)
    }

    /// The arcsine law `dt / (π √(t(1−t)))`, the measure of the geometric mean.
    pub fn arcsine(n: usize) -> Result<Self> {
        Self::new(Vec::new(), Some(Density::arcsine(n)?))
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    /// Weight of the atom located exactly at `t` (0 if none).
    pub fn mass_at(&self, t: f64) -> f64 {
        self.atoms.iter().find(|a| a.0 == t).map_or(0.0, |a| a.1)
    }

    pub fn total_mass(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.1).sum();
        atoms + self.density.as_ref().map_or(0.0, Density::mass)
    }

    /// Atoms and density nodes strictly inside `(0, 1)`.
    fn interior(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> =
            self.atoms.iter().copied().filter(|&(t, _)| t > 0.0 && t < 1.0).collect();
        if let Some(d) = &self.density {
            out.extend(d.nodes().iter().copied().filter(|&(t, _)| t > 0.0 && t < 1.0));
        }
        out
    }

    fn boundary_nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let dens = self.density.iter().flat_map(|d| d.nodes().iter().copied());
        self.atoms.iter().copied().chain(dens).filter(|&(t, _)| t == 0.0 || t == 1.0)
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.atoms.is_empty() {
            let a: Vec<String> = self.atoms.iter().map(|(t, w)| format!("{t}:{w}")).collect();
            parts.push(format!("atoms={}", a.join(",")));
        }
        if let Some(d) = &self.density {
            let name = match d.rho {
                DensityFn::Arcsine => "arcsine",
                DensityFn::Custom(_) => "custom",
            };
            parts.push(format!("density={name}/{}", d.plan.node_count()));
        }
        if parts.is_empty() {
            "zero".into()
        } else {
            parts.join(";")
        }
    }
}

/// `1 !_t x = x / ((1−t)x + t)`, with the boundary values `t = 0 → 1`,
/// `t = 1 → x` and `x = 0 → 0` for `t > 0`.
pub fn weighted_harmonic_kernel(x: f64, t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else if t == 1.0 {
        x
    } else if x == 0.0 {
        0.0
    } else {
        x / ((1.0 - t) * x + t)
    }
}

pub fn repr_fn_from_measure(mu: &BorelMeasure, x: f64) -> f64 {
    let atoms: f64 = mu.atoms.iter().map(|&(t, w)| w * weighted_harmonic_kernel(x, t)).sum();
    let dens = mu.density.as_ref().map_or(0.0, |d| {
        d.nodes().iter().map(|&(t, w)| w * weighted_harmonic_kernel(x, t)).sum()
    });
    atoms + dens
}

pub fn connection_from_measure(mu: BorelMeasure) -> Connection {
    Connection::from_measure(mu)
}

/// The measure associated with a builtin connection, where it has a closed form.
pub fn measure_of_builtin(kind: MeanKind, weight: Option<f64>) -> Result<BorelMeasure> {
    let conn = Connection::builtin(kind, weight)?;
    let alpha = match &conn {
        Connection::Builtin(b) => b.weight(),
        _ => None,
    };
    let nonzero = |atoms: Vec<(f64, f64)>| -> Result<BorelMeasure> {
        BorelMeasure::atomic(atoms.into_iter().filter(|a| a.1 > 0.0).collect())
    };
    match (kind, alpha) {
        (MeanKind::LeftTrivial, _) => BorelMeasure::dirac(0.0),
        (MeanKind::RightTrivial, _) => BorelMeasure::dirac(1.0),
        (MeanKind::Sum, _) => BorelMeasure::atomic(vec![(0.0, 1.0), (1.0, 1.0)]),
        (MeanKind::ParallelSum, _) => BorelMeasure::atomic(vec![(0.5, 0.5)]),
        (MeanKind::Zero, _) => Ok(BorelMeasure::zero()),
        (MeanKind::Arithmetic, Some(a)) => nonzero(vec![(0.0, 1.0 - a), (1.0, a)]),
        (MeanKind::Harmonic, Some(a)) => BorelMeasure::dirac(a),
        (MeanKind::Geometric, Some(0.0)) => BorelMeasure::dirac(0.0),
        (MeanKind::Geometric, Some(1.0)) => BorelMeasure::dirac(1.0),
        (MeanKind::Geometric, Some(0.5)) => BorelMeasure::arcsine(DEFAULT_NODES),
        _ => Err(MeansError::Unsupported(format!(
            "no closed-form measure for {}",
            conn.label()
        ))),
    }
}

/// Matrix weighted harmonic mean `A !_t B` of PSD matrices.
pub fn weighted_harmonic_matrix(a: &SymMatrix, b: &SymMatrix, t: f64, tol: &Tolerances) -> Result<SymMatrix> {
    Connection::builtin(MeanKind::Harmonic, Some(t))?.apply(a, b, tol)
}

/// Boundary atoms contribute `µ({0}) A + µ({1}) B` exactly; the interior part
/// is the connection whose representing function is the finite kernel sum.
pub(crate) fn apply_measure(
    mu: &BorelMeasure,
    a: &SymMatrix,
    ea: &Eigen,
    b: &SymMatrix,
    eb: &Eigen,
    force_limit: bool,
    tol: &Tolerances,
) -> Result<SymMatrix> {
    let mut out = SymMatrix::zeros(a.dim());
    for (t, w) in mu.boundary_nodes() {
        let side = if t == 0.0 { a } else { b };
        out = &out + &side.scale(w);
    }
    let interior = mu.interior();
    if interior.is_empty() {
        return Ok(out);
    }
    let h = |x: f64| interior.iter().map(|&(t, w)| w * weighted_harmonic_kernel(x, t)).sum::<f64>();
    let inner = if force_limit {
        regularized_with_repr(&h, &project_psd(ea), &project_psd(eb), tol)?
    } else {
        // each kernel x/((1−t)x+t) with t < 1 grows sublinearly
        apply_with_repr(&h, 0.0, ea, eb, tol)?
    };
    Ok(&out + &inner)
}
