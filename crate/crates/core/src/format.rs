//! File formats and output rendering.
//!
//! Matrices: `{"dim": n, "data": [n·n reals, row-major]}`.
//! Measures: `{"atoms": [[t, w], ...], "density": null | {"scheme": "arcsine", "n": 256}}`,
//! or inline as `"t:w,t:w"`.
//!
//! Machine-readable JSON output writes every float with 17 significant
//! digits so that it re-parses to the identical `f64`.

use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

use crate::error::{MeansError, Result};
use crate::linalg::SymMatrix;
use crate::measures::{BorelMeasure, Density, DensityFn, QuadraturePlan, DEFAULT_NODES};

/// Relative asymmetry above which loading a matrix emits a warning.
pub const ASYMMETRY_WARN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

impl FromStr for OutputFormat {
    type Err = MeansError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "pretty" => Ok(OutputFormat::Pretty),
            other => Err(MeansError::Parse(format!("unknown output format '{other}'"))),
        }
    }
}

/// Compact JSON with floats written as `{:.16e}`.
#[derive(Default)]
pub struct FixedDigits(CompactFormatter);

fn format_f64_17(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.16e}"))
}

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        match format_f64_17(value) {
            Some(s) => writer.write_all(s.as_bytes()),
            None => writer.write_all(b"null"),
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` as compact JSON with 17-significant-digit floats.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits::default());
    value
        .serialize(&mut ser)
        .map_err(|e| MeansError::Parse(format!("serialization failed: {e}")))?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Six significant digits for humans.
pub fn format_pretty(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.5e}")
    }
}

#[derive(Debug, Clone)]
pub struct LoadedMatrix {
    pub matrix: SymMatrix,
    /// `max |M_ij − M_ji| / max(1, max |M_ij|)` of the raw file contents.
    pub asymmetry: f64,
}

impl LoadedMatrix {
    pub fn warning(&self) -> Option<String> {
        (self.asymmetry > ASYMMETRY_WARN).then(|| {
            format!(
                "input matrix asymmetric (relative {:.3e}); using (M + Mᵀ)/2",
                self.asymmetry
            )
        })
    }
}

#[derive(Deserialize)]
struct RawMatrix {
    dim: usize,
    data: Vec<f64>,
}

pub fn parse_matrix_json(text: &str) -> Result<LoadedMatrix> {
    let raw: RawMatrix =
        serde_json::from_str(text).map_err(|e| MeansError::Parse(format!("matrix file: {e}")))?;
    let matrix = SymMatrix::from_row_major(raw.dim, &raw.data)?;
    let n = raw.dim;
    let mut asym: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for i in 0..n {
        for j in 0..n {
            asym = asym.max((raw.data[i * n + j] - raw.data[j * n + i]).abs());
            scale = scale.max(raw.data[i * n + j].abs());
        }
    }
    Ok(LoadedMatrix { matrix, asymmetry: asym / scale })
}

pub fn render_matrix(m: &SymMatrix, format: OutputFormat) -> Result<String> {
    let n = m.dim();
    match format {
        OutputFormat::Json => to_canonical_json(m),
        OutputFormat::Csv => Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| format_f64_17(m.get(i, j)).unwrap_or_else(|| "nan".into()))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("\n")),
        OutputFormat::Pretty => {
            let cells: Vec<Vec<String>> =
                (0..n).map(|i| (0..n).map(|j| format_pretty(m.get(i, j))).collect()).collect();
            let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
            Ok(cells
                .iter()
                .map(|row| {
                    let r: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                    format!("[ {} ]", r.join("  "))
                })
                .collect::<Vec<_>>()
                .join("\n"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub scheme: String,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureFile {
    #[serde(default)]
    pub atoms: Vec<[f64; 2]>,
    #[serde(default)]
    pub density: Option<DensitySpec>,
}

impl MeasureFile {
    pub fn to_measure(&self) -> Result<BorelMeasure> {
        let atoms = self.atoms.iter().map(|a| (a[0], a[1])).collect();
        let density = self.density.as_ref().map(density_from_spec).transpose()?;
        BorelMeasure::new(atoms, density)
    }

    pub fn from_measure(mu: &BorelMeasure) -> Result<Self> {
        let density = match mu.density() {
            None => None,
            Some(d) => match (d.rho(), d.plan()) {
                (DensityFn::Arcsine, QuadraturePlan::TransformedArcsine(n)) => {
                    Some(DensitySpec { scheme: "arcsine".into(), n: *n })
                }
                _ => {
                    return Err(MeansError::Unsupported(
                        "only the arcsine density has a file representation".into(),
                    ))
                }
            },
        };
        Ok(Self { atoms: mu.atoms().iter().map(|&(t, w)| [t, w]).collect(), density })
    }
}

pub fn density_from_spec(spec: &DensitySpec) -> Result<Density> {
    match spec.scheme.as_str() {
        "arcsine" => Density::arcsine(spec.n),
        other => Err(MeansError::Parse(format!("unknown density scheme '{other}'"))),
    }
}

/// Density from a scheme name and optional node count (defaults to 256).
pub fn density_by_name(name: &str, n: Option<usize>) -> Result<Density> {
    density_from_spec(&DensitySpec { scheme: name.to_string(), n: n.unwrap_or(DEFAULT_NODES) })
}

pub fn parse_measure_json(text: &str) -> Result<BorelMeasure> {
    let file: MeasureFile =
        serde_json::from_str(text).map_err(|e| MeansError::Parse(format!("measure file: {e}")))?;
    file.to_measure()
}

/// Parses `"t:w,t:w,..."`.
pub fn parse_inline_atoms(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let (t, w) = pair
                .split_once(':')
                .ok_or_else(|| MeansError::Parse(format!("atom '{pair}' is not of the form t:w")))?;
            let num = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| MeansError::Parse(format!("bad number '{v}' in atom '{pair}'")))
            };
            Ok((num(t)?, num(w)?))
        })
        .collect()
}
