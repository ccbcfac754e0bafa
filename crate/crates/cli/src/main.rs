use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use meanskit::format::{
    density_by_name, format_pretty, parse_inline_atoms, parse_matrix_json, parse_measure_json,
    render_matrix, to_canonical_json, OutputFormat,
};
use meanskit::measures::repr_fn_from_measure;
use meanskit::verify::{run_counterexamples, run_suites, Report, Suite, TrialConfig};
use meanskit::{BorelMeasure, Connection, MeanKind, SymMatrix, Tolerances};
use serde::Serialize;

const SEED_ENV: &str = "MEANSKIT_SEED";

#[derive(Parser)]
#[command(name = "meanskit", version, about = "Operator connections and means on PSD matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format: json, csv or pretty.
    #[arg(long, global = true, default_value = "pretty", value_parser = parse_format)]
    format: OutputFormat,

    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct TolArgs {
    /// Relative eigenvalue slack for PSD and Loewner tests.
    #[arg(long, global = true)]
    psd_slack: Option<f64>,
    /// Relative Frobenius tolerance for equality checks.
    #[arg(long, global = true)]
    eq_tol: Option<f64>,
    /// Starting epsilon of the regularization schedule.
    #[arg(long, global = true)]
    eps0: Option<f64>,
    /// Smallest epsilon of the regularization schedule.
    #[arg(long, global = true)]
    eps_min: Option<f64>,
}

impl TolArgs {
    fn resolve(&self) -> Result<Tolerances> {
        let d = Tolerances::default();
        let tol = Tolerances {
            psd_slack: self.psd_slack.unwrap_or(d.psd_slack),
            eq_tol: self.eq_tol.unwrap_or(d.eq_tol),
            eps0: self.eps0.unwrap_or(d.eps0),
            eps_min: self.eps_min.unwrap_or(d.eps_min),
        };
        tol.validate()?;
        Ok(tol)
    }
}

/// Exactly one of a builtin kind or a measure.
#[derive(Args)]
struct MeanSpec {
    /// Builtin kind, e.g. geometric, left-trivial, parallel_sum.
    #[arg(long)]
    mean: Option<String>,
    /// Weight in [0, 1] for arithmetic, geometric and harmonic.
    #[arg(long)]
    weight: Option<f64>,
    #[command(flatten)]
    measure: MeasureSpec,
    /// Use the transpose connection (arguments swapped).
    #[arg(long)]
    transpose: bool,
}

#[derive(Args)]
struct MeasureSpec {
    /// Measure file: {"atoms": [[t, w], ...], "density": {"scheme": "arcsine", "n": 256}}.
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Inline atoms "t:w,t:w".
    #[arg(long)]
    atoms: Option<String>,
    /// Density scheme (arcsine).
    #[arg(long)]
    density: Option<String>,
    /// Quadrature nodes for the density.
    #[arg(long)]
    n: Option<usize>,
}

impl MeasureSpec {
    fn given(&self) -> bool {
        self.measure.is_some() || self.atoms.is_some() || self.density.is_some()
    }

    fn build(&self) -> Result<BorelMeasure> {
        if self.n.is_some() && self.density.is_none() {
            bail!("--n requires --density");
        }
        if self.measure.is_some() && (self.atoms.is_some() || self.density.is_some()) {
            bail!("--measure cannot be combined with --atoms or --density");
        }
        if let Some(path) = &self.measure {
            return Ok(parse_measure_json(&read(path)?)?);
        }
        let atoms = self.atoms.as_deref().map(parse_inline_atoms).transpose()?.unwrap_or_default();
        let density = self.density.as_deref().map(|d| density_by_name(d, self.n)).transpose()?;
        if atoms.is_empty() && density.is_none() {
            bail!("no measure given: use --measure, --atoms or --density");
        }
        Ok(BorelMeasure::new(atoms, density)?)
    }
}

impl MeanSpec {
    fn connection(&self) -> Result<Connection> {
        let conn = match (&self.mean, self.measure.given()) {
            (Some(_), true) => bail!("give either --mean or a measure, not both"),
            (None, false) => bail!("no mean given: use --mean or a measure option"),
            (Some(name), false) => {
                let kind: MeanKind = name.parse()?;
                if !kind.is_weighted() && self.weight.is_some() {
                    bail!("--weight is only accepted for arithmetic, geometric and harmonic");
                }
                if kind.is_weighted() && self.weight.is_none() {
                    bail!("--weight is required for {kind}");
                }
                Connection::builtin(kind, self.weight)?
            }
            (None, true) => {
                if self.weight.is_some() {
                    bail!("--weight is only accepted with --mean");
                }
                Connection::from_measure(self.measure.build()?)
            }
        };
        Ok(if self.transpose { conn.transpose() } else { conn })
    }
}

#[derive(Args)]
struct Pair {
    /// Matrix file for the left argument.
    #[arg(long = "A", value_name = "PATH")]
    a: PathBuf,
    /// Matrix file for the right argument.
    #[arg(long = "B", value_name = "PATH")]
    b: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate A σ B.
    Eval {
        #[command(flatten)]
        mean: MeanSpec,
        #[command(flatten)]
        pair: Pair,
    },
    /// Tabulate the representing function on a grid "start:stop:count".
    Function {
        #[command(flatten)]
        mean: MeanSpec,
        #[arg(long)]
        grid: String,
    },
    /// Zero / mean / trivial / strict classification.
    Classify {
        #[command(flatten)]
        mean: MeanSpec,
    },
    /// Evaluate a measure: f(x) with --x, or A σ B with --A and --B.
    MeasureEval {
        #[command(flatten)]
        measure: MeasureSpec,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long = "A", value_name = "PATH", requires = "b")]
        a: Option<PathBuf>,
        #[arg(long = "B", value_name = "PATH", requires = "a")]
        b: Option<PathBuf>,
    },
    /// Run property suites; exit 1 on violations.
    Verify {
        #[command(flatten)]
        mean: MeanSpec,
        /// axioms, continuity, positivity, betweenness, strictness or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Comma-separated dimensions.
        #[arg(long, default_value = "1,2,3,5,8", value_delimiter = ',')]
        dims: Vec<usize>,
        /// Overridden by the MEANSKIT_SEED environment variable when set.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Replay the fixed singular counterexamples; exit 1 unless all reproduce.
    Counterexamples,
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: meanskit::MeansError| e.to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_matrix(path: &Path) -> Result<SymMatrix> {
    let loaded = parse_matrix_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    if let Some(w) = loaded.warning() {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(loaded.matrix)
}

fn load_pair(pair: &Pair) -> Result<(SymMatrix, SymMatrix)> {
    Ok((load_matrix(&pair.a)?, load_matrix(&pair.b)?))
}

/// `start:stop:count`, linearly spaced; `count = 1` requires `start = stop`.
fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, count] = parts[..] else {
        bail!("grid '{spec}' is not of the form start:stop:count");
    };
    let start: f64 = start.trim().parse().with_context(|| format!("bad grid start '{start}'"))?;
    let stop: f64 = stop.trim().parse().with_context(|| format!("bad grid stop '{stop}'"))?;
    let count: usize = count.trim().parse().with_context(|| format!("bad grid count '{count}'"))?;
    if !(start.is_finite() && stop.is_finite()) || start < 0.0 || stop < start || count == 0 {
        bail!("grid '{spec}' needs 0 <= start <= stop and count >= 1");
    }
    if count == 1 {
        if start != stop {
            bail!("grid '{spec}' with a single point needs start = stop");
        }
        return Ok(vec![start]);
    }
    if start == stop {
        bail!("grid '{spec}' with several points needs start < stop");
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|k| if k + 1 == count { stop } else { start + step * k as f64 }).collect())
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(to_canonical_json(value)?)
}

fn render_scalar(label: &str, x: f64, value: f64, format: OutputFormat) -> Result<String> {
    #[derive(Serialize)]
    struct Point<'a> {
        connection: &'a str,
        x: f64,
        value: f64,
    }
    Ok(match format {
        OutputFormat::Json => json(&Point { connection: label, x, value })?,
        OutputFormat::Csv => format!("x,value\n{},{}", fmt17(x), fmt17(value)),
        OutputFormat::Pretty => format!("f({}) = {}", format_pretty(x), format_pretty(value)),
    })
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn cmd_function(conn: &Connection, grid: &[f64], format: OutputFormat) -> Result<String> {
    #[derive(Serialize)]
    struct Row {
        x: f64,
        f: f64,
    }
    let rows: Vec<Row> = grid.iter().map(|&x| Row { x, f: conn.repr_fn_eval(x) }).collect();
    Ok(match format {
        OutputFormat::Json => json(&rows)?,
        OutputFormat::Csv => std::iter::once("x,f".to_string())
            .chain(rows.iter().map(|r| format!("{},{}", fmt17(r.x), fmt17(r.f))))
            .collect::<Vec<_>>()
            .join("\n"),
        OutputFormat::Pretty => std::iter::once(format!("{:>14}  {:>14}   [{}]", "x", "f(x)", conn.label()))
            .chain(rows.iter().map(|r| format!("{:>14}  {:>14}", format_pretty(r.x), format_pretty(r.f))))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn cmd_classify(conn: &Connection, tol: &Tolerances, format: OutputFormat) -> Result<String> {
    let rec = conn.classify(tol);
    let fields: [(&str, Option<bool>); 7] = [
        ("is_zero", Some(rec.is_zero)),
        ("is_mean", Some(rec.is_mean)),
        ("is_left_trivial", Some(rec.is_left_trivial)),
        ("is_right_trivial", Some(rec.is_right_trivial)),
        ("strict_left", rec.strict_left),
        ("strict_right", rec.strict_right),
        ("strict", rec.strict),
    ];
    let show = |v: Option<bool>| v.map_or("n/a".to_string(), |b| b.to_string());
    Ok(match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                connection: String,
                #[serde(flatten)]
                record: &'a meanskit::ClassificationRecord,
            }
            json(&Out { connection: conn.label(), record: &rec })?
        }
        OutputFormat::Csv => {
            let head: Vec<&str> = std::iter::once("connection").chain(fields.iter().map(|f| f.0)).collect();
            let row: Vec<String> = std::iter::once(conn.label()).chain(fields.iter().map(|f| show(f.1))).collect();
            format!("{}\n{}", head.join(","), row.join(","))
        }
        OutputFormat::Pretty => std::iter::once(conn.label())
            .chain(fields.iter().map(|(k, v)| format!("  {k:<17} {}", show(*v))))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn render_reports(reports: &[Report], single: bool, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Json if single => json(&reports[0])?,
        OutputFormat::Json => json(reports)?,
        OutputFormat::Csv => {
            let mut out = vec!["suite,connection,trials,violations,worst_margin,seed,elapsed_ms".to_string()];
            out.extend(reports.iter().map(|r| {
                format!(
                    "{},{},{},{},{},{},{:.3}",
                    r.suite,
                    r.connection,
                    r.trials,
                    r.violations,
                    r.worst_margin.map_or(String::new(), fmt17),
                    r.seed,
                    r.elapsed_ms
                )
            }));
            out.join("\n")
        }
        OutputFormat::Pretty => {
            let mut out = Vec::new();
            for r in reports {
                out.push(format!(
                    "{} {}  seed={} {:.0}ms",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.summary_line(),
                    r.seed,
                    r.elapsed_ms
                ));
                for (k, v) in &r.counters {
                    out.push(format!("    {k}: {v}"));
                }
                for w in &r.witnesses {
                    out.push(format!("    witness trial {} (dim {}): {} : {}", w.trial, w.dim, w.check, w.detail));
                }
                for n in &r.notes {
                    out.push(format!("    note: {n}"));
                }
            }
            out.join("\n")
        }
    })
}

fn seed_from_env(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| anyhow!("{SEED_ENV}='{v}' is not an unsigned integer")),
        Err(std::env::VarError::NotPresent) => Ok(flag),
        Err(e) => Err(anyhow!("{SEED_ENV}: {e}")),
    }
}

/// Runs the command and returns the text to print plus the exit code.
fn run(cli: Cli) -> Result<(String, u8)> {
    let tol = cli.tol.resolve()?;
    let format = cli.format;
    match cli.command {
        Command::Eval { mean, pair } => {
            let conn = mean.connection()?;
            let (a, b) = load_pair(&pair)?;
            Ok((render_matrix(&conn.apply(&a, &b, &tol)?, format)?, 0))
        }
        Command::Function { mean, grid } => {
            let conn = mean.connection()?;
            Ok((cmd_function(&conn, &parse_grid(&grid)?, format)?, 0))
        }
        Command::Classify { mean } => Ok((cmd_classify(&mean.connection()?, &tol, format)?, 0)),
        Command::MeasureEval { measure, x, a, b } => {
            let mu = measure.build()?;
            match (x, a, b) {
                (Some(x), None, None) => {
                    if !(x >= 0.0 && x.is_finite()) {
                        bail!("--x must be a finite nonnegative number");
                    }
                    Ok((render_scalar(&mu.describe(), x, repr_fn_from_measure(&mu, x), format)?, 0))
                }
                (None, Some(a), Some(b)) => {
                    let (a, b) = load_pair(&Pair { a, b })?;
                    let m = Connection::from_measure(mu).apply(&a, &b, &tol)?;
                    Ok((render_matrix(&m, format)?, 0))
                }
                _ => bail!("measure-eval needs either --x or both --A and --B"),
            }
        }
        Command::Verify { mean, suite, trials, dims, seed } => {
            let conn = mean.connection()?;
            let suite = match suite.as_str() {
                "all" => None,
                s => Some(s.parse::<Suite>()?),
            };
            let cfg = TrialConfig { dims, trials, seed: seed_from_env(seed)?, tol };
            let reports = run_suites(&conn, suite, &cfg)?;
            let code = if reports.iter().all(Report::passed) { 0 } else { 1 };
            Ok((render_reports(&reports, suite.is_some(), format)?, code))
        }
        Command::Counterexamples => {
            let r = run_counterexamples(&tol)?;
            let code = if r.passed() { 0 } else { 1 };
            Ok((render_reports(std::slice::from_ref(&r), true, format)?, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
