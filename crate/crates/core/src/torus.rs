//! Sampling, integration and global optimization over the polytorus `T^N`.
//!
//! Points are phases `θ ∈ [0,1)^N`, mapped to `ω_j = e^{2πiθ_j}`. All
//! parallel work collects per-point results in index order and reduces them
//! sequentially, so estimates are bit-identical across thread counts.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::bohr::TorusPoly;
use crate::error::{Error, Result};
use crate::primes;
use crate::sum::NeumaierSum;

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_SAMPLES: usize = 1 << 16;
pub const DEFAULT_REFINE_TOL: f64 = 1e-6;
/// Largest torus dimension the optimizer accepts.
pub const MAX_OPT_NVARS: usize = 8;
/// Cap on the number of grid points of one extremum search.
pub const GRID_POINT_BUDGET: usize = 1 << 24;
/// Number of random shifts of a randomized lattice rule.
pub const LATTICE_SHIFTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    RandomUniform,
    Rank1Lattice,
}

/// Engine settings shared by every command; the JSON config file maps onto it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    pub seed: u64,
    pub samples: usize,
    /// Grid points per variable for extremum search; `None` picks by dimension.
    pub grid: Option<usize>,
    pub refine_tol: f64,
    pub scheme: Scheme,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            grid: None,
            refine_tol: DEFAULT_REFINE_TOL,
            scheme: Scheme::RandomUniform,
        }
    }
}

impl EngineConfig {
    pub fn plan(&self, nvars: usize) -> SamplePlan {
        SamplePlan { nvars, count: self.samples.max(1), seed: self.seed, scheme: self.scheme }
    }

    /// Grid points per variable: 256 up to three variables, 64 above, then
    /// reduced so that the full grid stays within [`GRID_POINT_BUDGET`].
    pub fn grid_resolution(&self, nvars: usize) -> usize {
        let wanted = self.grid.unwrap_or(if nvars <= 3 { 256 } else { 64 }).max(2);
        if nvars == 0 {
            return wanted;
        }
        let mut res = wanted;
        while res > 2 && (res as f64).powi(nvars as i32) > GRID_POINT_BUDGET as f64 {
            res -= 1;
        }
        res
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub nvars: usize,
    pub count: usize,
    pub seed: u64,
    pub scheme: Scheme,
}

impl SamplePlan {
    pub fn new(nvars: usize, count: usize, seed: u64, scheme: Scheme) -> Self {
        Self { nvars, count: count.max(1), seed, scheme }
    }

    pub fn random(nvars: usize, count: usize, seed: u64) -> Self {
        Self::new(nvars, count, seed, Scheme::RandomUniform)
    }

    /// Flat row-major phases in `[0,1)`, grouped into the returned number of
    /// equally sized blocks (one per lattice shift; a single block for random points).
    pub fn phases(&self) -> (Vec<f64>, usize) {
        match self.scheme {
            Scheme::RandomUniform => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let v = (0..self.count * self.nvars).map(|_| rng.random::<f64>()).collect();
                (v, 1)
            }
            Scheme::Rank1Lattice => {
                let shifts = if self.count >= 2 * LATTICE_SHIFTS { LATTICE_SHIFTS } else { 1 };
                let n = largest_prime_at_most((self.count / shifts).max(2) as u64);
                let g = korobov_generator(n, self.nvars);
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let mut v = Vec::with_capacity(shifts * n as usize * self.nvars);
                for _ in 0..shifts {
                    let delta: Vec<f64> = (0..self.nvars).map(|_| rng.random::<f64>()).collect();
                    for k in 0..n {
                        for (gj, dj) in g.iter().zip(&delta) {
                            let x = ((k * gj) % n) as f64 / n as f64 + dj;
                            v.push(x - x.floor());
                        }
                    }
                }
                (v, shifts)
            }
        }
    }
}

fn largest_prime_at_most(n: u64) -> u64 {
    let mut m = n.max(2);
    while primes::factor(m).map(|f| f.len() != 1 || f[0].1 != 1).unwrap_or(true) {
        m -= 1;
    }
    m
}

/// Korobov generator `(1, a, a², …) mod n`, with `a` minimizing the `P_2`
/// figure of merit over a deterministic candidate set.
pub fn korobov_generator(n: u64, nvars: usize) -> Vec<u64> {
    let gen = |a: u64| {
        let mut g = Vec::with_capacity(nvars);
        let mut x = 1u64;
        for _ in 0..nvars {
            g.push(x);
            x = x * a % n;
        }
        g
    };
    if nvars <= 1 || n <= 3 {
        return gen(1);
    }
    let bernoulli2 = |x: f64| x * x - x + 1.0 / 6.0;
    let p2 = |g: &[u64]| {
        let mut acc = NeumaierSum::new();
        for k in 0..n {
            let prod: f64 = g
                .iter()
                .map(|&gj| 1.0 + 2.0 * std::f64::consts::PI.powi(2) * bernoulli2(((k * gj) % n) as f64 / n as f64))
                .product();
            acc.add(prod);
        }
        acc.value() / n as f64 - 1.0
    };
    let candidates = 64.min(n - 2);
    let mut best = (f64::INFINITY, 2);
    for i in 0..candidates {
        let a = 2 + i * (n - 3) / candidates.max(1);
        let merit = p2(&gen(a));
        if merit < best.0 {
            best = (merit, a);
        }
    }
    gen(best.1)
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub count: usize,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, stderr: 0.0, count: 0 }
    }

    /// `x ↦ x^{1/p}` with the delta-method error.
    pub fn root(&self, p: f64) -> Self {
        let value = self.value.max(0.0).powf(1.0 / p);
        let stderr = if self.value > 0.0 { value / (p * self.value) * self.stderr } else { 0.0 };
        Self { value, stderr, count: self.count }
    }
}

/// Converts phases in `[0,1)` to points of the torus.
pub fn to_torus(phases: &[f64], out: &mut Vec<Complex64>) {
    out.clear();
    out.extend(phases.iter().map(|&t| Complex64::from_polar(1.0, TAU * t)));
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().copied().collect::<NeumaierSum>().value() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean) * (x - mean)).collect::<NeumaierSum>().value() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// `∫_{T^N} g(ω) dω` under the normalized Haar measure.
pub fn integrate_torus<G>(integrand: G, plan: &SamplePlan) -> Estimate
where
    G: Fn(&[Complex64]) -> f64 + Sync,
{
    let (phases, blocks) = plan.phases();
    let nvars = plan.nvars;
    let count = phases.len().checked_div(nvars).unwrap_or(plan.count);
    let values: Vec<f64> = (0..count)
        .into_par_iter()
        .with_min_len(512)
        .map_init(Vec::new, |buf, i| {
            to_torus(&phases[i * nvars..(i + 1) * nvars], buf);
            integrand(buf)
        })
        .collect();
    match plan.scheme {
        Scheme::RandomUniform => {
            let (value, stderr) = mean_and_stderr(&values);
            Estimate { value, stderr, count }
        }
        Scheme::Rank1Lattice => {
            let per = count / blocks;
            let means: Vec<f64> =
                values.chunks(per).map(|c| c.iter().copied().collect::<NeumaierSum>().value() / per as f64).collect();
            let (value, stderr) = mean_and_stderr(&means);
            Estimate { value, stderr, count }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Max,
    Min,
}

impl Mode {
    fn score(self, v: f64) -> f64 {
        match self {
            Mode::Max => v,
            Mode::Min => -v,
        }
    }
}

/// Result of an extremum search of `|F|` over `T^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    /// Attained `|F(ω)|` at the witness: a lower bound of the max (mode max)
    /// or an upper bound of the min (mode min).
    pub value: f64,
    /// Witness phases in radians.
    pub phases: Vec<f64>,
    pub grid_value: f64,
    pub resolution: usize,
    /// Opposite one-sided bound from the grid and the phase Lipschitz constant.
    pub certified_bound: f64,
    pub refine_tol: f64,
}

impl Extremum {
    pub fn point(&self) -> Vec<Complex64> {
        self.phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect()
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    score: f64,
    index: usize,
}

fn push_top(top: &mut Vec<Candidate>, c: Candidate, k: usize) {
    let better = |a: &Candidate, b: &Candidate| a.score > b.score || (a.score == b.score && a.index < b.index);
    if top.len() == k && !better(&c, top.last().unwrap()) {
        return;
    }
    let pos = top.iter().position(|t| better(&c, t)).unwrap_or(top.len());
    top.insert(pos, c);
    top.truncate(k);
}

/// Golden-section search maximizing `f` on `[a, b]`; returns `(argmax, value)`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // The bracket cannot shrink below a few ulps of its endpoints.
    let floor = 4.0 * f64::EPSILON * a.abs().max(b.abs());
    while (b - a).abs() > tol.max(floor) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

const TOP_CANDIDATES: usize = 8;
const MAX_SWEEPS: usize = 500;

/// Coordinate-wise golden-section refinement of a start point; never worsens the score.
fn refine(f: &TorusPoly, mode: Mode, start: Vec<f64>, half_width: f64, tol: f64) -> (Vec<f64>, f64) {
    let mut pow = Vec::new();
    let mut z = vec![Complex64::default(); f.nvars()];
    let mut eval = |theta: &[f64], pow: &mut Vec<Complex64>| {
        for (zj, &t) in z.iter_mut().zip(theta) {
            *zj = Complex64::from_polar(1.0, t);
        }
        mode.score(f.eval_with(&z, pow).norm())
    };
    let mut theta = start;
    let mut best = eval(&theta, &mut pow);
    let line_tol = (tol * 1e-3).max(1e-13);
    for _ in 0..MAX_SWEEPS {
        let mut moved = 0.0f64;
        for j in 0..theta.len() {
            let centre = theta[j];
            let mut probe = theta.clone();
            let (arg, val) = golden_section(
                |t| {
                    probe[j] = t;
                    eval(&probe, &mut pow)
                },
                centre - half_width,
                centre + half_width,
                line_tol,
            );
            if val > best {
                best = val;
                moved = moved.max((arg - centre).abs());
                theta[j] = arg;
            }
        }
        if moved < tol {
            break;
        }
    }
    (theta, best)
}

/// Max or min of `|F|` over `T^N`: full grid, then local refinement of the
/// best grid cells until the phase step falls below `cfg.refine_tol`.
pub fn extremum_on_torus(f: &TorusPoly, mode: Mode, cfg: &EngineConfig) -> Result<Extremum> {
    let nvars = f.nvars();
    if nvars > MAX_OPT_NVARS {
        return Err(Error::DimensionGuard { nvars, max: MAX_OPT_NVARS });
    }
    if nvars == 0 {
        let v = f.coeff(&[]).norm();
        return Ok(Extremum {
            value: v,
            phases: vec![],
            grid_value: v,
            resolution: 1,
            certified_bound: v,
            refine_tol: cfg.refine_tol,
        });
    }
    let res = cfg.grid_resolution(nvars);
    // Grid values along the last variable are an inverse DFT of the
    // coefficients grouped by that variable's exponent (folded mod `res`), so
    // only the leading `N − 1` variables are summed term by term.
    let inner = nvars - 1;
    let outer_total = res.pow(inner as u32);
    let roots: Vec<Complex64> = (0..res).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / res as f64)).collect();
    let terms: Vec<(Vec<u32>, usize, Complex64)> =
        f.terms().map(|(a, c)| (a[..inner].to_vec(), a[inner] as usize % res, c)).collect();
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(res);

    let chunk = (4096 / res).max(1);
    let nchunks = outer_total.div_ceil(chunk);
    let locals: Vec<Vec<Candidate>> = (0..nchunks)
        .into_par_iter()
        .map(|ci| {
            let mut top = Vec::with_capacity(TOP_CANDIDATES + 1);
            let mut digits = vec![0usize; inner];
            let mut line = vec![Complex64::default(); res];
            let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
            for outer in ci * chunk..((ci + 1) * chunk).min(outer_total) {
                let mut r = outer;
                for d in digits.iter_mut() {
                    *d = r % res;
                    r /= res;
                }
                line.fill(Complex64::default());
                for (alpha, last, c) in &terms {
                    let mut m = *c;
                    for (&e, &k) in alpha.iter().zip(&digits) {
                        if e != 0 {
                            m *= roots[(e as usize * k) % res];
                        }
                    }
                    line[*last] += m;
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    push_top(
                        &mut top,
                        Candidate { score: mode.score(v.norm()), index: outer + k * outer_total },
                        TOP_CANDIDATES,
                    );
                }
            }
            top
        })
        .collect();
    let mut top = Vec::with_capacity(TOP_CANDIDATES + 1);
    for local in locals {
        for c in local {
            push_top(&mut top, c, TOP_CANDIDATES);
        }
    }

    let h = TAU / res as f64;
    let grid_score = top[0].score;
    let decode = |mut index: usize| {
        (0..nvars)
            .map(|_| {
                let k = index % res;
                index /= res;
                h * k as f64
            })
            .collect::<Vec<f64>>()
    };
    let refined: Vec<(Vec<f64>, f64)> =
        top.par_iter().map(|c| refine(f, mode, decode(c.index), h, cfg.refine_tol)).collect();
    let mut best = (decode(top[0].index), grid_score);
    for (theta, score) in refined {
        if score > best.1 {
            best = (theta, score);
        }
    }
    let grid_value = grid_score.abs();
    let slack = f.phase_lipschitz() * h / 2.0;
    let certified_bound = match mode {
        Mode::Max => (grid_value + slack).min(f.l1_norm()),
        Mode::Min => (grid_value - slack).max(0.0),
    };
    let phases = best.0.into_iter().map(|t| t.rem_euclid(TAU)).collect();
    Ok(Extremum {
        value: best.1.abs(),
        phases,
        grid_value,
        resolution: res,
        certified_bound,
        refine_tol: cfg.refine_tol,
    })
}

/// Extremum of a real function on `[lo, hi]`: uniform grid of `count`
/// points, then golden-section refinement around the best few.
pub fn extremum_on_line<G>(g: G, lo: f64, hi: f64, count: usize, mode: Mode, tol: f64) -> (f64, f64)
where
    G: Fn(f64) -> f64 + Sync,
{
    let count = count.max(2);
    let h = (hi - lo) / (count - 1) as f64;
    let scores: Vec<f64> =
        (0..count).into_par_iter().with_min_len(1024).map(|k| mode.score(g(lo + h * k as f64))).collect();
    let mut top = Vec::with_capacity(TOP_CANDIDATES + 1);
    for (index, &score) in scores.iter().enumerate() {
        push_top(&mut top, Candidate { score, index }, TOP_CANDIDATES);
    }
    let mut best = (lo + h * top[0].index as f64, top[0].score);
    for c in &top {
        let t0 = lo + h * c.index as f64;
        let (t, s) = golden_section(|t| mode.score(g(t)), (t0 - h).max(lo), (t0 + h).min(hi), tol);
        if s > best.1 {
            best = (t, s);
        }
    }
    (best.0, best.1.abs())
}
