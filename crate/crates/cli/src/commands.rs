//! Argument definitions and command dispatch. Each command calls one or two
//! library functions and serializes what they return.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use dirimul::colegamelin::{cg_factor, extremal_function, truncation_epsilon, ExtremalSpec, DEFAULT_DEGREE};
use dirimul::fejer::{fejer_apply, FejerSpec};
use dirimul::multipliers::{ess_norm_bracket, multiplier_norm, operator_norm_lower_bound};
use dirimul::norms::{norm, norm_hinf, torus_norm};
use dirimul::operators::{
    approximate_spectrum_cloud, closed_range_certificate, commutant_test, matrix_of, smooth_basis, spectrum_cloud,
    truncated_norm, BoundarySpec, HalfPlaneGrid, RangeConfig,
};
use dirimul::{
    bohr_lift, bohr_transform, classify, Complex64, DMatrix, DirichletPoly, EngineConfig, EssRegime, PExponent,
    SpectrumReport,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::expr::{parse_constant, parse_series};
use crate::verify::run_verify;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "dirimul",
    version,
    about = "Multipliers and multiplication operators on Hardy spaces of Dirichlet series"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Global {
    /// Dirichlet polynomial: an expression such as "1 + 2^-s", a JSON object
    /// {"terms": [{"n", "re", "im"}, ...]}, or @path to a file holding either.
    #[arg(long, global = true)]
    pub series: Option<String>,
    /// Source exponent p: an integer, a fraction such as 3/2, a decimal, or inf.
    #[arg(long, global = true)]
    pub p: Option<PExponent>,
    /// Target exponent q.
    #[arg(long, global = true)]
    pub q: Option<PExponent>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Grid points per torus variable for extremum searches.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Compact JSON on stdout (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// Indented JSON on stdout and a summary table on stderr.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// JSON engine settings: {"seed", "samples", "grid", "refine_tol", "scheme"}.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write point clouds of spectrum commands to this CSV file.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// H_p norm of the series (default p = 2).
    Norm,
    /// Supremum norm over the polytorus.
    Hinf,
    /// Norm of D as a multiplier H_p → H_q, with a searched lower bound.
    MultNorm {
        /// Random test series in the lower-bound search.
        #[arg(long, default_value_t = 16)]
        trials: usize,
    },
    /// Bracket for the essential norm of M_D: H_p → H_q.
    EssBracket,
    /// Norm of a finite section of M_D on H_2.
    OpNorm(SectionArgs),
    /// Whether a matrix commutes with the prime shifts on a finite section.
    CommutantTest {
        #[command(flatten)]
        section: SectionArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// JSON matrix [[{"re","im"}, ...], ...] over the section basis;
        /// defaults to the section of M_D.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Image of the right half-plane under D.
    Spectrum {
        #[arg(long)]
        sigma_min: Option<f64>,
        #[arg(long)]
        sigma_max: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        n_sigma: Option<usize>,
        #[arg(long)]
        n_t: Option<usize>,
        /// Point at which the summary reports the closed-range test.
        #[arg(long, default_value = "0")]
        lambda: String,
    },
    /// Images of the imaginary axis and of the polytorus.
    ApSpectrum {
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        n_t: Option<usize>,
        #[arg(long)]
        torus_resolution: Option<usize>,
        #[arg(long, default_value = "0")]
        lambda: String,
    },
    /// Closed-range certificate for M_{D-λ}.
    ClosedRange {
        #[arg(long, default_value = "0")]
        lambda: String,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        t_count: Option<usize>,
    },
    /// Fejér smoothing of the series.
    Fejer {
        #[arg(long)]
        n: u32,
    },
    /// Truncated extremal function for point evaluation at z.
    Extremal {
        /// Comma-separated complex coordinates, e.g. "0.5,(0.1+0.2i)".
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: u32,
    },
    /// Re-check the library's headline properties.
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SectionArgs {
    /// Number of primes of the section basis; defaults to what D needs.
    #[arg(long)]
    pub primes: Option<usize>,
    #[arg(long, default_value_t = 256)]
    pub cutoff: u64,
}

/// What a command produced: JSON for stdout, an optional CSV body, and
/// whether the process should exit successfully.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
    pub success: bool,
}

impl Output {
    fn ok(json: Value) -> Self {
        Self { json, csv: None, success: true }
    }
}

/// Engine settings from `--config`, then the individual flags.
pub fn engine_config(g: &Global) -> anyhow::Result<EngineConfig> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => EngineConfig::default(),
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = g.samples {
        cfg.samples = samples;
    }
    if g.grid.is_some() {
        cfg.grid = g.grid;
    }
    Ok(cfg)
}

/// Reads `--series`: `@file` indirection, then JSON or an expression.
pub fn load_series(arg: &str) -> anyhow::Result<DirichletPoly> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    let text = text.trim();
    if text.starts_with('{') {
        Ok(serde_json::from_str(text).context("parsing series JSON")?)
    } else {
        Ok(parse_series(text)?)
    }
}

fn series(g: &Global) -> anyhow::Result<DirichletPoly> {
    match &g.series {
        Some(s) => load_series(s),
        None => bail!("--series is required for this command"),
    }
}

fn exponent(v: Option<PExponent>, flag: &str) -> anyhow::Result<PExponent> {
    v.with_context(|| format!("--{flag} is required for this command"))
}

fn section(d: &DirichletPoly, s: &SectionArgs) -> anyhow::Result<usize> {
    Ok(match s.primes {
        Some(n) => n,
        None => d.prime_budget()?.max(1),
    })
}

fn range_summary(d: &DirichletPoly, lambda: Complex64, cfg: &EngineConfig) -> anyhow::Result<Value> {
    let cert = closed_range_certificate(d, lambda, &RangeConfig::default(), cfg)?;
    Ok(json!({
        "lambda": {"re": lambda.re, "im": lambda.im},
        "closed": cert.closed,
        "m": cert.bound_m,
    }))
}

fn cloud_output(report: &SpectrumReport, summary: Value, g: &Global) -> Output {
    let mut json = json!({
        "kind": report.kind,
        "hull_bound": report.hull_bound,
        "points": report.points.len(),
    });
    let obj = json.as_object_mut().expect("object");
    if let Some(t) = &report.torus_points {
        obj.insert("torus_points".into(), json!(t.len()));
    }
    if let Some(h) = report.cross_distance {
        obj.insert("cross_distance".into(), json!(h));
    }
    obj.extend(summary.as_object().cloned().unwrap_or_default());
    obj.insert("notes".into(), json!(report.notes));
    let csv = g.csv.as_ref().map(|_| {
        let mut body = String::from("source,re,im\n");
        let rows = report
            .points
            .iter()
            .map(|z| ("image", z))
            .chain(report.torus_points.iter().flatten().map(|z| ("torus", z)));
        for (source, z) in rows {
            body.push_str(&format!("{source},{:?},{:?}\n", z.re, z.im));
        }
        body
    });
    Output { json, csv, success: true }
}

#[derive(Deserialize)]
struct Entry {
    re: f64,
    im: f64,
}

fn load_matrix(path: &PathBuf, dim: usize) -> anyhow::Result<DMatrix<Complex64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rows: Vec<Vec<Entry>> = serde_json::from_str(&text).context("parsing matrix JSON")?;
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        bail!("matrix must be {dim} x {dim} to match the section basis");
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| Complex64::new(rows[i][j].re, rows[i][j].im)))
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> anyhow::Result<Output> {
    let g = &cli.global;
    let cfg = engine_config(g)?;
    if g.csv.is_some() && !matches!(cli.command, Command::Spectrum { .. } | Command::ApSpectrum { .. }) {
        bail!("--csv applies to spectrum and ap-spectrum only");
    }
    let out = match &cli.command {
        Command::Norm => {
            let p = g.p.unwrap_or(PExponent::int(2));
            Output::ok(json!(norm(&series(g)?, &p, &cfg)?))
        }
        Command::Hinf => Output::ok(json!(norm_hinf(&series(g)?, &cfg)?)),
        Command::MultNorm { trials } => {
            let d = series(g)?;
            let (p, q) = (exponent(g.p, "p")?, exponent(g.q, "q")?);
            let m = multiplier_norm(&d, p, q, &cfg)?;
            let lb = operator_norm_lower_bound(&d, p, q, *trials, &cfg)?;
            Output::ok(json!({
                "lower": lb.value,
                "value": m.value,
                "upper": m.upper,
                "regime": classify(p, q).space,
                "stderr": m.stderr,
                "lower_stderr": lb.stderr,
                "method": m.method,
                "candidate": lb.candidate,
            }))
        }
        Command::EssBracket => {
            let d = series(g)?;
            let b = ess_norm_bracket(&d, exponent(g.p, "p")?, exponent(g.q, "q")?, &cfg)?;
            // The essential norm is pinned down only on the diagonal.
            let value = (b.regime == EssRegime::Diagonal).then_some(b.upper);
            Output::ok(json!({
                "lower": b.lower,
                "value": value,
                "upper": b.upper,
                "regime": b.regime,
                "lower_stderr": b.lower_stderr,
                "upper_stderr": b.upper_stderr,
            }))
        }
        Command::OpNorm(s) => {
            let d = series(g)?;
            let nprimes = section(&d, s)?;
            let a = matrix_of(&d, nprimes, s.cutoff)?;
            Output::ok(json!({
                "primes": nprimes,
                "cutoff": s.cutoff,
                "dim": a.dim(),
                "norm": truncated_norm(&a),
                "sup": norm_hinf(&d, &cfg)?.value,
            }))
        }
        Command::CommutantTest { section: s, tol, matrix } => {
            let (nprimes, a) = match matrix {
                Some(path) => {
                    let nprimes = s.primes.context("--primes is required with --matrix")?;
                    (nprimes, load_matrix(path, smooth_basis(nprimes, s.cutoff).len())?)
                }
                None => {
                    let d = series(g)?;
                    let nprimes = section(&d, s)?;
                    (nprimes, matrix_of(&d, nprimes, s.cutoff)?.entries)
                }
            };
            let report = commutant_test(&a, nprimes, s.cutoff, *tol)?;
            Output::ok(json!({
                "primes": nprimes,
                "cutoff": s.cutoff,
                "tol": tol,
                "commutes": report.commutes,
                "max_defect": report.max_defect,
                "checked_entries": report.checked_entries,
            }))
        }
        Command::Spectrum { sigma_min, sigma_max, t_max, n_sigma, n_t, lambda } => {
            let d = series(g)?;
            let base = HalfPlaneGrid::default();
            let grid = HalfPlaneGrid {
                sigma_min: sigma_min.unwrap_or(base.sigma_min),
                sigma_max: sigma_max.unwrap_or(base.sigma_max),
                t_max: t_max.unwrap_or(base.t_max),
                n_sigma: n_sigma.unwrap_or(base.n_sigma),
                n_t: n_t.unwrap_or(base.n_t),
            };
            let report = spectrum_cloud(&d, &grid)?;
            cloud_output(&report, range_summary(&d, parse_constant(lambda)?, &cfg)?, g)
        }
        Command::ApSpectrum { t_max, n_t, torus_resolution, lambda } => {
            let d = series(g)?;
            let base = BoundarySpec::default();
            let spec = BoundarySpec {
                t_max: t_max.unwrap_or(base.t_max),
                n_t: n_t.unwrap_or(base.n_t),
                torus_resolution: torus_resolution.or(base.torus_resolution),
            };
            let report = approximate_spectrum_cloud(&d, &spec, &cfg)?;
            cloud_output(&report, range_summary(&d, parse_constant(lambda)?, &cfg)?, g)
        }
        Command::ClosedRange { lambda, threshold, t_max, t_count } => {
            let base = RangeConfig::default();
            let rc = RangeConfig {
                threshold: threshold.unwrap_or(base.threshold),
                t_max: t_max.unwrap_or(base.t_max),
                t_count: t_count.unwrap_or(base.t_count),
                ..base
            };
            Output::ok(json!(closed_range_certificate(&series(g)?, parse_constant(lambda)?, &rc, &cfg)?))
        }
        Command::Fejer { n } => {
            let f = bohr_lift(&series(g)?)?;
            let smoothed = fejer_apply(&f, &FejerSpec::new(*n, f.nvars()))?;
            Output::ok(json!({
                "n": n,
                "series": bohr_transform(&smoothed)?,
                "torus": smoothed,
            }))
        }
        Command::Extremal { z, degree } => {
            let z: Vec<Complex64> = split_list(z).iter().map(|s| parse_constant(s)).collect::<Result<_, _>>()?;
            let p = g.p.unwrap_or(PExponent::int(2));
            let spec = ExtremalSpec::new(z, p)?;
            let f = extremal_function(&spec, *degree)?;
            Output::ok(json!({
                "spec": spec,
                "degree": degree,
                "norm": torus_norm(&f, &p, &cfg)?,
                "value": f.eval(&spec.z)?.norm(),
                "target": cg_factor(&spec.z, &p),
                "epsilon": truncation_epsilon(spec.max_modulus(), *degree),
                "poly": f,
            }))
        }
        Command::Verify { quick } => {
            let report = run_verify(&cfg, *quick)?;
            let success = report.passed;
            Output { json: json!(report), csv: None, success }
        }
    };
    Ok(out)
}

/// Splits on commas outside parentheses.
fn split_list(s: &str) -> Vec<String> {
    let mut parts = vec![String::new()];
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(String::new());
                continue;
            }
            _ => {}
        }
        parts.last_mut().expect("nonempty").push(ch);
    }
    parts
}

/// Two-column summary of the top-level fields, for `--pretty`.
pub fn summary_table(v: &Value) -> String {
    let Some(obj) = v.as_object() else {
        return format!("{v}\n");
    };
    let width = obj.keys().map(|k| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in obj {
        if let Some(rows) = val.as_array().filter(|a| a.iter().all(|r| r.get("status").is_some())) {
            for r in rows {
                out.push_str(&format!(
                    "{:<5} {:<40} {}\n",
                    r["status"].as_str().unwrap_or("?"),
                    r["name"].as_str().unwrap_or("?"),
                    r["measured"]
                ));
            }
            continue;
        }
        let shown = match val {
            Value::Array(a) if a.len() > 4 => format!("[{} items]", a.len()),
            Value::Object(o) if o.len() > 4 => format!("{{{} fields}}", o.len()),
            other => other.to_string(),
        };
        out.push_str(&format!("{k:<width$}  {shown}\n"));
    }
    out
}
