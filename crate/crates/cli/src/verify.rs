//! The `verify` battery: every headline property of the library, re-checked
//! numerically and reported as JSON.

use std::f64::consts::{PI, TAU};

use dirimul::cloud::directed_hausdorff;
use dirimul::colegamelin::{cg_bound, extremal_function, ExtremalSpec};
use dirimul::fejer::{fejer_apply, fejer_remainder, remainder_bound, smoothed_extremal_norm, FejerSpec};
use dirimul::multipliers::{classify, ess_norm_bracket, multiplier_norm, operator_norm_lower_bound};
use dirimul::norms::{norm_h2, norm_hp_even, norm_hp_qmc, norm_vertical_line, torus_norm_qmc};
use dirimul::operators::{
    approximate_spectrum_cloud, closed_range_certificate, commutant_test, cross_norm_range_refusal, matrix_of,
    smooth_basis, spectrum_cloud, truncated_norm, BoundarySpec, HalfPlaneGrid, RangeConfig,
};
use dirimul::{
    bohr_lift, Complex64, DMatrix, DirichletPoly, EngineConfig, Error, MultiplierSpace, PExponent, Result, SamplePlan,
    TorusPoly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// How `measured` is compared with `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `|measured − expected| ≤ tolerance`.
    Within,
    /// `measured ≤ expected + tolerance`.
    AtMost,
    /// `measured ≥ expected − tolerance`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub relation: Relation,
}

impl Check {
    fn new(name: &str, measured: f64, relation: Relation, expected: f64, tolerance: f64) -> Self {
        let ok = match relation {
            Relation::Within => (measured - expected).abs() <= tolerance,
            Relation::AtMost => measured <= expected + tolerance,
            Relation::AtLeast => measured >= expected - tolerance,
        };
        Self {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            expected,
            tolerance,
            relation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub quick: bool,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn statuses(&self) -> Vec<Status> {
        self.checks.iter().map(|c| c.status).collect()
    }
}

/// Sizes of one run. Quick mode divides sample counts by 16 and widens the
/// statistical tolerance to ten standard errors.
struct Scale {
    quick: bool,
    samples: usize,
    sigmas: f64,
}

impl Scale {
    fn count(&self, full: usize, quick: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }

    fn samples(&self, full: usize) -> usize {
        if self.quick {
            (full / 16).max(1)
        } else {
            full
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one_plus_two() -> DirichletPoly {
    DirichletPoly::from_real(&[(1, 1.0), (2, 1.0)]).unwrap()
}

fn pe(s: &str) -> PExponent {
    s.parse().unwrap()
}

fn random_dirichlet(rng: &mut ChaCha8Rng, max_n: u64, nprimes: usize, integer: bool) -> DirichletPoly {
    let basis = smooth_basis(nprimes, max_n);
    let size = rng.random_range(1..=basis.len().min(8));
    let terms: Vec<(u64, Complex64)> = (0..size)
        .map(|_| {
            let n = basis[rng.random_range(0..basis.len())];
            let v = if integer {
                c(rng.random_range(-5..=5) as f64, rng.random_range(-5..=5) as f64)
            } else {
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            };
            (n, v)
        })
        .collect();
    let d = DirichletPoly::from_terms(terms).unwrap();
    if d.is_zero() {
        DirichletPoly::one()
    } else {
        d
    }
}

fn random_torus(rng: &mut ChaCha8Rng, nvars: usize, degree: u32, size: usize) -> TorusPoly {
    let terms: Vec<(Vec<u32>, Complex64)> = (0..size)
        .map(|_| {
            let alpha = (0..nvars).map(|_| rng.random_range(0..=degree)).collect();
            (alpha, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        })
        .collect();
    TorusPoly::from_terms(nvars, terms).unwrap()
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn bohr(s: &Scale, seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let mut rng = rng(seed, 1);
    let mut mismatches = 0;
    let mut worst: f64 = 0.0;
    for k in 0..s.count(500, 60) {
        let integer = k % 2 == 0;
        let d = random_dirichlet(&mut rng, 400, 6, integer);
        let e = random_dirichlet(&mut rng, 400, 6, integer);
        let lhs = bohr_lift(&(&d * &e))?;
        let rhs = bohr_lift(&d)?.product(&bohr_lift(&e)?);
        let n = lhs.nvars().max(rhs.nvars());
        let (lhs, rhs) = (lhs.with_nvars(n)?, rhs.with_nvars(n)?);
        if integer {
            mismatches += usize::from(lhs != rhs);
        } else {
            worst = worst.max(lhs.sub(&rhs).coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    out.push(Check::new("bohr-lift-integer-mismatches", mismatches as f64, Relation::Within, 0.0, 0.0));
    out.push(Check::new("bohr-lift-float-deviation", worst, Relation::AtMost, 0.0, 1e-12));
    Ok(())
}

fn multipliers(s: &Scale, cfg: &EngineConfig, out: &mut Vec<Check>) -> Result<()> {
    let target = 6f64.powf(0.25);
    let d = one_plus_two();
    let m = multiplier_norm(&d, pe("4"), pe("2"), cfg)?;
    out.push(Check::new("multiplier-norm-4-2", m.value, Relation::Within, target, 1e-9));
    let lb = operator_norm_lower_bound(&d, pe("4"), pe("2"), s.count(200, 16), cfg)?;
    out.push(Check::new("operator-lower-bound-4-2", lb.value, Relation::AtLeast, 0.9 * target, 0.0));

    let sup = dirimul::norms::norm_hinf(&d, cfg)?.value;
    let sections: Vec<f64> =
        (1..=10).map(|k| Ok(truncated_norm(&matrix_of(&d, 1, 1u64 << k)?))).collect::<Result<_>>()?;
    let drops = sections.windows(2).filter(|w| w[1] < w[0]).count();
    out.push(Check::new("sections-nondecreasing", drops as f64, Relation::Within, 0.0, 0.0));
    out.push(Check::new("sections-approach-sup", sections[9], Relation::Within, sup, 0.02 * sup));

    let zero = classify(pe("2"), pe("4")).space == MultiplierSpace::Zero;
    let refused = matches!(multiplier_norm(&d, pe("2"), pe("4"), cfg), Err(Error::NoNonzeroMultipliers { .. }));
    out.push(Check::new("zero-regime-refused", f64::from(u8::from(zero && refused)), Relation::Within, 1.0, 0.0));
    let r = cross_norm_range_refusal(&d, pe("4"), pe("2"), cfg)?;
    out.push(Check::new("no-closed-range-across-norms", r.ratios[5] / r.ratios[0], Relation::AtMost, 0.5, 0.0));
    Ok(())
}

fn brackets(s: &Scale, cfg: &EngineConfig, out: &mut Vec<Check>) -> Result<()> {
    let d = one_plus_two();
    let a = ess_norm_bracket(&d, pe("4"), pe("2"), cfg)?;
    out.push(Check::new("ess-bracket-4-2-lower", a.lower, Relation::Within, 2f64.sqrt(), 1e-9));
    out.push(Check::new("ess-bracket-4-2-upper", a.upper, Relation::Within, 6f64.powf(0.25), 1e-9));
    let b = ess_norm_bracket(&d, pe("2"), pe("2"), cfg)?;
    out.push(Check::new("ess-bracket-2-2-lower", b.lower, Relation::Within, 2.0, 1e-9));
    out.push(Check::new("ess-bracket-2-2-upper", b.upper, Relation::Within, 2.0, 1e-9));
    let e = ess_norm_bracket(&d, pe("1"), pe("1"), cfg)?;
    out.push(Check::new("ess-bracket-1-1-lower", e.lower, Relation::Within, 4.0 / PI, s.sigmas * e.lower_stderr));
    out.push(Check::new("ess-bracket-1-1-upper", e.upper, Relation::Within, 2.0, 1e-9));
    Ok(())
}

fn circle_distance(cloud: &[Complex64]) -> f64 {
    let center = c(2.0, 0.0);
    let off = cloud.iter().map(|w| ((w - center).norm() - 1.0).abs()).fold(0.0, f64::max);
    let count = 100_000;
    let circle: Vec<Complex64> =
        (0..count).map(|k| center + Complex64::from_polar(1.0, TAU * k as f64 / count as f64)).collect();
    off.max(directed_hausdorff(&circle, cloud) + PI / count as f64)
}

/// Polar sample of the closed disk around `center` and its covering radius.
fn disk_sample(center: Complex64, radius: f64, step: f64) -> (Vec<Complex64>, f64) {
    let nr = (radius / step).ceil() as usize;
    let dr = radius / nr as f64;
    let mut pts = vec![center];
    let mut cover: f64 = 0.0;
    for i in 1..=nr {
        let r = dr * i as f64;
        let na = ((TAU * r) / step).ceil().max(8.0) as usize;
        cover = cover.max((0.5 * dr).hypot(0.5 * TAU * r / na as f64));
        pts.extend((0..na).map(|k| center + Complex64::from_polar(r, TAU * k as f64 / na as f64)));
    }
    (pts, cover.max(dr))
}

fn spectra(s: &Scale, cfg: &EngineConfig, out: &mut Vec<Check>) -> Result<()> {
    let d = DirichletPoly::from_real(&[(1, 2.0), (2, 1.0)])?;
    let r = spectrum_cloud(&d, &HalfPlaneGrid::default())?;
    let center = c(2.0, 0.0);
    let outside = r.points.iter().map(|w| ((w - center).norm() - 1.0).max(0.0)).fold(0.0, f64::max);
    let (disk, cover) = disk_sample(center, 1.0, 0.004);
    let h = outside.max(directed_hausdorff(&disk, &r.points) + cover);
    out.push(Check::new("spectrum-is-closed-disk", h, Relation::AtMost, 0.05, 0.0));

    let spec = BoundarySpec {
        n_t: s.count(1_000_000, 1 << 18),
        torus_resolution: s.quick.then_some(256),
        ..BoundarySpec::default()
    };
    let a = approximate_spectrum_cloud(&d, &spec, cfg)?;
    out.push(Check::new("approximate-spectrum-line", circle_distance(&a.points), Relation::AtMost, 0.02, 0.0));
    let torus = a.torus_points.as_deref().unwrap_or_default();
    out.push(Check::new("approximate-spectrum-torus", circle_distance(torus), Relation::AtMost, 0.02, 0.0));
    let three = DirichletPoly::from_real(&[(1, 1.0), (2, 1.0), (3, 1.0)])?;
    let a3 = approximate_spectrum_cloud(&three, &spec, cfg)?;
    let cross = a3.cross_distance.unwrap_or(f64::INFINITY);
    out.push(Check::new("approximate-spectrum-line-vs-torus", cross, Relation::AtMost, 0.05, 0.0));

    let rc = RangeConfig::default();
    let closed = closed_range_certificate(&d, c(0.0, 0.0), &rc, cfg)?;
    out.push(Check::new("closed-range-2+2^-s", closed.bound_m, Relation::Within, 1.0, 1e-6));
    out.push(Check::new("closed-range-2+2^-s-line", closed.line_min, Relation::Within, closed.bound_m, 1e-4));
    let open = closed_range_certificate(&one_plus_two(), c(0.0, 0.0), &rc, cfg)?;
    out.push(Check::new("closed-range-1+2^-s-fails", open.bound_m, Relation::AtMost, rc.threshold, 0.0));
    out.push(Check::new(
        "closed-range-flags",
        f64::from(u8::from(closed.closed && !open.closed)),
        Relation::Within,
        1.0,
        0.0,
    ));
    Ok(())
}

fn commutant(s: &Scale, seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let mut rng = rng(seed, 2);
    let (sections, perturbed) = (s.count(50, 10), s.count(100, 20));
    let (mut failures, mut accepted) = (0, 0);
    for k in 0..sections + perturbed {
        let nprimes = rng.random_range(1..=3);
        let d = random_dirichlet(&mut rng, 60, nprimes, false);
        let cutoff = rng.random_range(30..=300);
        let a = matrix_of(&d, nprimes, cutoff)?;
        if k < sections {
            failures += usize::from(!commutant_test(&a.entries, nprimes, cutoff, 1e-12)?.commutes);
        } else {
            let scale = 10f64.powf(rng.random_range(-3.0..0.0));
            let noise = DMatrix::from_fn(a.dim(), a.dim(), |_, _| {
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
            });
            accepted += usize::from(commutant_test(&(a.entries + noise), nprimes, cutoff, 1e-12)?.commutes);
        }
    }
    out.push(Check::new("commutant-sections-commute", failures as f64, Relation::Within, 0.0, 0.0));
    out.push(Check::new("commutant-perturbations-rejected", accepted as f64, Relation::Within, 0.0, 0.0));
    Ok(())
}

fn cole_gamelin(s: &Scale, seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let mut rng = rng(seed, 3);
    let exps = ["1", "3/2", "2", "3", "4"];
    let cases = s.count(1000, 200);
    let mut violations = 0;
    for k in 0..cases as u64 {
        let nvars = rng.random_range(1..=3);
        let size = rng.random_range(1..=6);
        let f = random_torus(&mut rng, nvars, 3, size);
        let z: Vec<Complex64> = (0..nvars)
            .map(|_| Complex64::from_polar(rng.random_range(0.0..0.95), rng.random_range(0.0..TAU)))
            .collect();
        let p = pe(exps[rng.random_range(0..exps.len())]);
        let cfg = EngineConfig { samples: s.samples(1 << 12), seed: seed.wrapping_add(k), ..EngineConfig::default() };
        violations += usize::from(!cg_bound(&f, &p, &z, &cfg)?.holds(s.sigmas));
    }
    out.push(Check::new("cole-gamelin-violations", violations as f64, Relation::Within, 0.0, 0.0));
    let spec = ExtremalSpec::new(vec![c(0.5, 0.0)], pe("2"))?;
    let fz = extremal_function(&spec, 40)?;
    out.push(Check::new("extremal-norm", fz.l2_norm(), Relation::Within, 1.0, 1e-9));
    let value = fz.eval(&spec.z)?.norm();
    out.push(Check::new("extremal-value", value, Relation::Within, (4.0f64 / 3.0).sqrt(), 1e-9));
    Ok(())
}

fn fejer(s: &Scale, seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let mut rng = rng(seed, 4);
    let (mut expansions, mut remainder_failures) = (0, 0);
    for k in 0..s.count(100, 25) as u64 {
        let nvars = rng.random_range(1..=3);
        let size = rng.random_range(1..=10);
        let f = random_torus(&mut rng, nvars, 5, size);
        let n = rng.random_range(0..=6);
        let spec = FejerSpec::new(n, nvars);
        let plan = SamplePlan::random(nvars, s.samples(1 << 14), seed.wrapping_add(k));
        let a = torus_norm_qmc(&fejer_apply(&f, &spec)?, 1.0, &plan)?;
        let b = torus_norm_qmc(&f, 1.0, &plan)?;
        expansions += usize::from(a.value > b.value + s.sigmas * a.stderr.hypot(b.stderr));
        remainder_failures += usize::from(fejer_remainder(&f, &spec)?.l2_norm() > remainder_bound(&f, n));
    }
    out.push(Check::new("fejer-contracts-h1", expansions as f64, Relation::Within, 0.0, 0.0));
    out.push(Check::new("fejer-remainder-bound", remainder_failures as f64, Relation::Within, 0.0, 0.0));

    let f = bohr_lift(&one_plus_two())?;
    let plan = SamplePlan::random(1, s.samples(1 << 16), seed);
    let decay: Vec<f64> = [0.9, 0.99, 0.999]
        .iter()
        .map(|&r| Ok(smoothed_extremal_norm(&f, &[c(r, 0.0)], 4, &plan)?.value))
        .collect::<Result<_>>()?;
    let rises = decay.windows(2).filter(|w| w[1] >= w[0]).count();
    out.push(Check::new("smoothed-extremal-decay", rises as f64, Relation::Within, 0.0, 0.0));
    Ok(())
}

fn norm_routes(s: &Scale, seed: u64, out: &mut Vec<Check>) -> Result<()> {
    let d = one_plus_two();
    let plan = SamplePlan::random(1, s.samples(1 << 18), seed);
    let steps = s.count(1 << 20, 1 << 16);
    for p in ["1", "2", "4"] {
        let exact = match p {
            "1" => 4.0 / PI,
            "2" => norm_h2(&d),
            _ => norm_hp_even(&d, 4)?,
        };
        let q = norm_hp_qmc(&d, &pe(p), &plan)?;
        let tol = (s.sigmas * q.stderr).max(0.02 * exact);
        out.push(Check::new(&format!("norm-qmc-p{p}"), q.value, Relation::Within, exact, tol));
        let v = norm_vertical_line(&d, &pe(p), 1e4, steps)?;
        out.push(Check::new(&format!("norm-vertical-line-p{p}"), v, Relation::Within, exact, 0.02 * exact));
    }
    Ok(())
}

/// Runs the battery. `cfg` supplies the seed, the base sample count and the
/// grid resolution; `quick` selects the reduced sizes.
pub fn run_verify(cfg: &EngineConfig, quick: bool) -> Result<VerifyReport> {
    let scale = Scale { quick, samples: cfg.samples, sigmas: if quick { 10.0 } else { 3.0 } };
    let engine = EngineConfig { samples: scale.samples(scale.samples), ..*cfg };
    let seed = cfg.seed;
    let mut checks = Vec::new();
    bohr(&scale, seed, &mut checks)?;
    multipliers(&scale, &engine, &mut checks)?;
    brackets(&scale, &engine, &mut checks)?;
    spectra(&scale, &engine, &mut checks)?;
    commutant(&scale, seed, &mut checks)?;
    cole_gamelin(&scale, seed, &mut checks)?;
    fejer(&scale, seed, &mut checks)?;
    norm_routes(&scale, seed, &mut checks)?;
    Ok(VerifyReport { seed, quick, passed: checks.iter().all(|c| c.status == Status::Pass), checks })
}
