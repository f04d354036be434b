//! Finite sections of the multiplication operator `M_D` on `H_2`, its
//! spectra as image clouds, and closed-range diagnostics.
//!
//! On the monomial basis `{n^{-s}}` the matrix of `M_D` is multiplicative
//! Toeplitz: the entry in row `n_i`, column `n_j` is `a_{n_i/n_j}` when
//! `n_j | n_i` and zero otherwise. Sections keep the `n ≤ cutoff` whose
//! prime factors are among the first `N` primes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::DirichletPoly;
use crate::bohr::{bohr_lift, TorusPoly};
use crate::cloud::{directed_hausdorff, hausdorff};
use crate::colegamelin::binomial_series;
use crate::error::{Error, Result};
use crate::norms::{torus_norm, PExponent};
use crate::primes::nth_prime;
use crate::torus::{extremum_on_line, extremum_on_torus, EngineConfig, Mode, MAX_OPT_NVARS};

/// The `n ≤ cutoff` built from the first `nprimes` primes, ascending.
pub fn smooth_basis(nprimes: usize, cutoff: u64) -> Vec<u64> {
    let primes: Vec<u64> = (0..nprimes).map(nth_prime).collect();
    let mut out = Vec::new();
    fn walk(primes: &[u64], n: u64, cutoff: u64, out: &mut Vec<u64>) {
        out.push(n);
        for (k, &p) in primes.iter().enumerate() {
            match n.checked_mul(p) {
                Some(m) if m <= cutoff => walk(&primes[k..], m, cutoff, out),
                _ => {}
            }
        }
    }
    if cutoff >= 1 {
        walk(&primes, 1, cutoff, &mut out);
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub nprimes: usize,
    pub cutoff: u64,
    pub basis: Vec<u64>,
    pub entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, n: u64) -> Option<usize> {
        self.basis.binary_search(&n).ok()
    }

    /// Columns whose products with every `n ≤ bound` stay under the cutoff.
    pub fn exact_columns(&self, bound: u64) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.basis[j].checked_mul(bound).is_some_and(|m| m <= self.cutoff)).collect()
    }
}

/// Section of `M_D` on `smooth_basis(nprimes, cutoff)`.
pub fn matrix_of(d: &DirichletPoly, nprimes: usize, cutoff: u64) -> Result<OperatorMatrix> {
    if cutoff < 1 {
        return Err(Error::Precondition("cutoff must be at least 1".into()));
    }
    let basis = smooth_basis(nprimes, cutoff);
    let dim = basis.len();
    let mut entries = DMatrix::from_element(dim, dim, Complex64::default());
    for (j, &nj) in basis.iter().enumerate() {
        for (m, a) in d.terms() {
            if let Some(ni) = nj.checked_mul(m) {
                if let Ok(i) = basis.binary_search(&ni) {
                    entries[(i, j)] = a;
                }
            }
        }
    }
    Ok(OperatorMatrix { nprimes, cutoff, basis, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutantReport {
    pub commutes: bool,
    pub max_defect: f64,
    pub checked_entries: usize,
}

/// Checks `A S_i = S_i A` for the shifts `S_i = M_{𝔭_i^{-s}}`, `i < nprimes`,
/// on the columns `n_c` with `𝔭_i n_c ≤ cutoff`, where truncation does not
/// interfere.
pub fn commutant_test(a: &DMatrix<Complex64>, nprimes: usize, cutoff: u64, tol: f64) -> Result<CommutantReport> {
    let basis = smooth_basis(nprimes, cutoff);
    let dim = basis.len();
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::Shape(format!(
            "expected {dim}x{dim} for {nprimes} primes up to {cutoff}, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let find = |n: u64| basis.binary_search(&n).ok();
    let mut max_defect: f64 = 0.0;
    let mut checked = 0usize;
    for i in 0..nprimes {
        let p = nth_prime(i);
        // Row r of S_i A is row n_r/p of A (zero unless p | n_r).
        let down: Vec<Option<usize>> = basis.iter().map(|&n| if n % p == 0 { find(n / p) } else { None }).collect();
        for (c, &nc) in basis.iter().enumerate() {
            let Some(up) = nc.checked_mul(p).filter(|&m| m <= cutoff).and_then(find) else {
                continue;
            };
            for r in 0..dim {
                let lhs = a[(r, up)];
                let rhs = down[r].map_or(Complex64::default(), |k| a[(k, c)]);
                max_defect = max_defect.max((lhs - rhs).norm());
                checked += 1;
            }
        }
    }
    Ok(CommutantReport { commutes: max_defect <= tol, max_defect, checked_entries: checked })
}

pub const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 50_000;

/// Largest singular value of `a` by power iteration on `a* a`.
pub fn largest_singular_value(a: &DMatrix<Complex64>) -> f64 {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return 0.0;
    }
    let g = a.adjoint() * a;
    let mut v = DVector::from_fn(n, |k, _| Complex64::new(1.0 + 0.25 * ((k as f64) * 0.7).sin(), 0.0));
    v /= Complex64::new(v.norm(), 0.0);
    let mut lambda = 0.0f64;
    for _ in 0..POWER_MAX_ITER {
        let w = &g * &v;
        let next = v.dotc(&w).re;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(norm, 0.0);
        // Eigenvalue steps shrink geometrically; a step far below the target
        // tolerance leaves the remaining error below it as well.
        if (next - lambda).abs() <= 1e-3 * POWER_TOL * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.max(0.0).sqrt()
}

/// `‖A‖₂` of a finite section.
pub fn truncated_norm(a: &OperatorMatrix) -> f64 {
    largest_singular_value(&a.entries)
}

/// Sampling of the right half-plane for [`spectrum_cloud`]: `σ` log-spaced
/// in `[sigma_min, sigma_max]`, `t` linear in `[−t_max, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneGrid {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_max: f64,
    pub n_sigma: usize,
    pub n_t: usize,
}

impl Default for HalfPlaneGrid {
    fn default() -> Self {
        Self { sigma_min: 1e-3, sigma_max: 10.0, t_max: 50.0, n_sigma: 400, n_t: 400 }
    }
}

/// Sampling of the boundary line and of the torus for
/// [`approximate_spectrum_cloud`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub t_max: f64,
    pub n_t: usize,
    /// Points per torus coordinate; `None` picks 512 up to two variables
    /// and the engine default beyond.
    pub torus_resolution: Option<usize>,
}

impl Default for BoundarySpec {
    fn default() -> Self {
        Self { t_max: 1e4, n_t: 1_000_000, torus_resolution: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Full,
    Approximate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub kind: SpectrumKind,
    #[serde(with = "crate::complex_json")]
    pub points: Vec<Complex64>,
    /// Half the largest jump between images of neighbouring samples.
    pub hull_bound: f64,
    /// Second cloud (torus image) for the approximate spectrum.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::complex_json::option")]
    pub torus_points: Option<Vec<Complex64>>,
    /// Hausdorff distance between the line cloud and the torus cloud.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_distance: Option<f64>,
    pub notes: Vec<String>,
}

/// `(ln n, a_n)` pairs for evaluating `D(σ+it) = Σ a_n n^{-σ} e^{-it ln n}`.
struct Evaluator {
    terms: Vec<(f64, Complex64)>,
}

impl Evaluator {
    fn new(d: &DirichletPoly) -> Self {
        Self { terms: d.terms().map(|(n, a)| ((n as f64).ln(), a)).collect() }
    }

    fn at(&self, sigma: f64, t: f64) -> Complex64 {
        self.terms.iter().map(|&(l, a)| a * Complex64::from_polar((-sigma * l).exp(), -t * l)).sum()
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.5 * (lo + hi)];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| lo + h * k as f64).collect()
}

fn spectral_notes(d: &DirichletPoly) -> Vec<String> {
    if d.is_constant() {
        return vec!["constant symbol: spectrum is the single value".into()];
    }
    vec![
        "point spectrum is empty for a nonconstant symbol".into(),
        "continuous spectrum lies in closure(D(Re s > 0)) minus D(Re s > 1/2)".into(),
    ]
}

/// Image of a sampled half-plane grid, approximating `σ(M_D)`.
pub fn spectrum_cloud(d: &DirichletPoly, grid: &HalfPlaneGrid) -> Result<SpectrumReport> {
    if d.is_zero() {
        return Err(Error::Precondition("symbol must be nonzero".into()));
    }
    if !(grid.sigma_min > 0.0 && grid.sigma_max >= grid.sigma_min) {
        return Err(Error::Precondition("need 0 < sigma_min <= sigma_max".into()));
    }
    if d.is_constant() {
        return Ok(SpectrumReport {
            kind: SpectrumKind::Full,
            points: vec![d.coeff(1)],
            hull_bound: 0.0,
            torus_points: None,
            cross_distance: None,
            notes: spectral_notes(d),
        });
    }
    let eval = Evaluator::new(d);
    let sigmas: Vec<f64> =
        linspace(grid.sigma_min.ln(), grid.sigma_max.ln(), grid.n_sigma).into_iter().map(f64::exp).collect();
    let ts = linspace(-grid.t_max, grid.t_max, grid.n_t);
    let rows: Vec<Vec<Complex64>> = sigmas.par_iter().map(|&s| ts.iter().map(|&t| eval.at(s, t)).collect()).collect();
    let mut step: f64 = 0.0;
    for (k, row) in rows.iter().enumerate() {
        for w in row.windows(2) {
            step = step.max((w[1] - w[0]).norm());
        }
        if let Some(next) = rows.get(k + 1) {
            for (a, b) in row.iter().zip(next) {
                step = step.max((a - b).norm());
            }
        }
    }
    Ok(SpectrumReport {
        kind: SpectrumKind::Full,
        points: rows.into_iter().flatten().collect(),
        hull_bound: 0.5 * step,
        torus_points: None,
        cross_distance: None,
        notes: spectral_notes(d),
    })
}

/// `{F(ω)}` over the full product grid with `res` points per coordinate.
pub fn torus_image(f: &TorusPoly, res: usize) -> Result<Vec<Complex64>> {
    let nvars = f.nvars();
    if nvars > MAX_OPT_NVARS {
        return Err(Error::DimensionGuard { nvars, max: MAX_OPT_NVARS });
    }
    let total = res
        .checked_pow(nvars as u32)
        .filter(|&t| t <= crate::torus::GRID_POINT_BUDGET)
        .ok_or_else(|| Error::Precondition(format!("{res}^{nvars} grid points exceed the budget")))?;
    let roots: Vec<Complex64> =
        (0..res).map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / res as f64)).collect();
    Ok((0..total)
        .into_par_iter()
        .with_min_len(1024)
        .map_init(
            || (vec![Complex64::default(); nvars], Vec::new()),
            |(z, pow), mut idx| {
                for zj in z.iter_mut() {
                    *zj = roots[idx % res];
                    idx /= res;
                }
                f.eval_with(z, pow)
            },
        )
        .collect())
}

fn default_torus_resolution(nvars: usize, cfg: &EngineConfig) -> usize {
    if nvars <= 2 {
        512
    } else {
        cfg.grid_resolution(nvars)
    }
}

/// `{D(it)}` on a `t`-grid next to the torus image `{F(ω)}`, approximating
/// `σ_ap(M_D)` from two sides.
pub fn approximate_spectrum_cloud(
    d: &DirichletPoly,
    spec: &BoundarySpec,
    cfg: &EngineConfig,
) -> Result<SpectrumReport> {
    if d.is_zero() {
        return Err(Error::Precondition("symbol must be nonzero".into()));
    }
    if d.is_constant() {
        let c = d.coeff(1);
        return Ok(SpectrumReport {
            kind: SpectrumKind::Approximate,
            points: vec![c],
            hull_bound: 0.0,
            torus_points: Some(vec![c]),
            cross_distance: Some(0.0),
            notes: spectral_notes(d),
        });
    }
    let f = bohr_lift(d)?;
    let eval = Evaluator::new(d);
    let ts = linspace(-spec.t_max, spec.t_max, spec.n_t.max(2));
    let line: Vec<Complex64> = ts.par_iter().with_min_len(4096).map(|&t| eval.at(0.0, t)).collect();
    let line_step = line.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
    let res = spec.torus_resolution.unwrap_or_else(|| default_torus_resolution(f.nvars(), cfg));
    let torus = torus_image(&f, res)?;
    let torus_step = f.phase_lipschitz() * std::f64::consts::TAU / res as f64;
    let cross = hausdorff(&line, &torus);
    Ok(SpectrumReport {
        kind: SpectrumKind::Approximate,
        points: line,
        hull_bound: 0.5 * line_step.max(torus_step),
        torus_points: Some(torus),
        cross_distance: Some(cross),
        notes: spectral_notes(d),
    })
}

/// Whether every point of `inner` lies within `tol` of `outer`.
pub fn cloud_contained(inner: &[Complex64], outer: &[Complex64], tol: f64) -> bool {
    directed_hausdorff(inner, outer) <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeConfig {
    pub threshold: f64,
    pub t_max: f64,
    pub t_count: usize,
    pub agree_tol: f64,
}

impl Default for RangeConfig {
    fn default() -> Self {
        Self { threshold: 1e-6, t_max: 1e4, t_count: 1 << 20, agree_tol: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeCertificate {
    pub closed: bool,
    /// Refined minimum of `|F − λ|` over the torus.
    pub bound_m: f64,
    /// Lower bound for the minimum from the grid and the Lipschitz constant.
    pub certified_lower: f64,
    /// Torus phases (radians) where `bound_m` is attained.
    pub witness: Vec<f64>,
    pub line_min: f64,
    pub line_witness_t: f64,
    pub kronecker_agree: bool,
    pub threshold: f64,
}

/// Closed-range test for `M_{D−λ}` through `m = min_{T^N} |F − λ|`, with the
/// infimum of `|D(it) − λ|` over a `t`-grid as a cross-check.
pub fn closed_range_certificate(
    d: &DirichletPoly,
    lambda: Complex64,
    rc: &RangeConfig,
    cfg: &EngineConfig,
) -> Result<RangeCertificate> {
    let shifted = d - &DirichletPoly::constant(lambda);
    if shifted.is_zero() {
        return Err(Error::Precondition("D - lambda must be nonzero".into()));
    }
    let g = bohr_lift(&shifted)?;
    let ext = extremum_on_torus(&g, Mode::Min, cfg)?;
    let eval = Evaluator::new(&shifted);
    let (t, line_min) = if shifted.is_constant() {
        (0.0, shifted.coeff(1).norm())
    } else {
        extremum_on_line(|t| eval.at(0.0, t).norm(), -rc.t_max, rc.t_max, rc.t_count, Mode::Min, 1e-12)
    };
    Ok(RangeCertificate {
        closed: ext.value > rc.threshold,
        bound_m: ext.value,
        certified_lower: ext.certified_bound.min(ext.value),
        witness: ext.phases,
        line_min,
        line_witness_t: t,
        kronecker_agree: (line_min - ext.value).abs() <= rc.agree_tol,
        threshold: rc.threshold,
    })
}

/// Partial sums `Q_k` of `(1 − z_1)^{−β}` with `β` strictly between `1/p`
/// and `1/q`, so the series converges in `H_q` and diverges in `H_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefusalReport {
    pub p: PExponent,
    pub q: PExponent,
    pub beta: f64,
    pub degrees: Vec<u32>,
    pub ratios: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub strictly_decreasing: bool,
}

pub const REFUSAL_STEPS: u32 = 6;

/// `β = 1/q − (1/q − 1/p)/10`.
pub fn refusal_beta(p: &PExponent, q: &PExponent) -> f64 {
    let (ip, iq) = (p.reciprocal_f64(), q.reciprocal_f64());
    iq - (iq - ip) / 10.0
}

/// Degree-`d` partial sum of `(1 − z_1)^{−β}`.
pub fn refusal_partial_sum(beta: f64, degree: u32) -> TorusPoly {
    let c = binomial_series(beta, degree);
    TorusPoly::from_terms(1, c.into_iter().enumerate().map(|(k, x)| (vec![k as u32], Complex64::new(x, 0.0))))
        .expect("one variable")
}

/// Ratios `‖D Q_k‖_q / ‖Q_k‖_p` for `deg Q_k = 4^k`, `k = 1..6`; their decay
/// rules out any bound `‖D E‖_q ≥ c ‖E‖_p`.
pub fn cross_norm_range_refusal(
    d: &DirichletPoly,
    p: PExponent,
    q: PExponent,
    cfg: &EngineConfig,
) -> Result<RefusalReport> {
    if d.is_zero() {
        return Err(Error::Precondition("symbol must be nonzero".into()));
    }
    if q >= p {
        return Err(Error::Precondition("requires q < p".into()));
    }
    let f = bohr_lift(d)?;
    let beta = refusal_beta(&p, &q);
    let degrees: Vec<u32> = (1..=REFUSAL_STEPS).map(|k| 4u32.pow(k)).collect();
    let mut ratios = Vec::new();
    let mut stderrs = Vec::new();
    for &deg in &degrees {
        let qk = refusal_partial_sum(beta, deg);
        let num = torus_norm(&f.product(&qk), &q, cfg)?;
        let den = torus_norm(&qk, &p, cfg)?;
        let r = num.value / den.value;
        ratios.push(r);
        stderrs.push(r * (num.stderr / num.value).hypot(den.stderr / den.value));
    }
    let strictly_decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    Ok(RefusalReport { p, q, beta, degrees, ratios, stderrs, strictly_decreasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(terms: &[(u64, f64)]) -> DirichletPoly {
        DirichletPoly::from_real(terms).unwrap()
    }

    #[test]
    fn smooth_basis_examples() {
        assert_eq!(smooth_basis(1, 4), vec![1, 2, 4]);
        assert_eq!(smooth_basis(2, 6), vec![1, 2, 3, 4, 6]);
        assert_eq!(smooth_basis(0, 100), vec![1]);
        assert_eq!(smooth_basis(3, 1), vec![1]);
    }

    #[test]
    fn shift_section_is_bidiagonal() {
        let a = matrix_of(&poly(&[(1, 1.0), (2, 1.0)]), 1, 4).unwrap();
        assert_eq!(a.basis, vec![1, 2, 4]);
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let expected = DMatrix::from_row_slice(3, 3, &[one, zero, zero, one, one, zero, zero, one, one]);
        assert_eq!(a.entries, expected);
    }

    #[test]
    fn identity_for_one() {
        let a = matrix_of(&DirichletPoly::one(), 3, 30).unwrap();
        assert_eq!(a.entries, DMatrix::identity(a.dim(), a.dim()));
    }

    #[test]
    fn columns_match_products() {
        let d = poly(&[(1, 1.0), (2, 1.0), (3, 1.0)]);
        let a = matrix_of(&d, 2, 6).unwrap();
        assert_eq!(a.dim(), 5);
        for (j, &nj) in a.basis.iter().enumerate() {
            let col = crate::arith::dirichlet_product(&d, &DirichletPoly::monomial(nj, c(1.0, 0.0)));
            for (i, &ni) in a.basis.iter().enumerate() {
                assert_eq!(a.entries[(i, j)], col.coeff(ni));
            }
        }
    }

    #[test]
    fn commutant_examples() {
        let a = matrix_of(&poly(&[(1, 1.0), (2, 1.0)]), 2, 36).unwrap();
        assert!(commutant_test(&a.entries, 2, 36, 0.0).unwrap().commutes);
        let mut b = a.entries.clone();
        b[(0, 1)] += c(0.1, 0.0);
        let r = commutant_test(&b, 2, 36, 1e-12).unwrap();
        assert!(!r.commutes && (r.max_defect - 0.1).abs() < 1e-15);
        let id = DMatrix::identity(a.dim(), a.dim());
        assert!(commutant_test(&id, 2, 36, 0.0).unwrap().commutes);
        assert!(commutant_test(&DMatrix::identity(3, 3), 2, 36, 0.0).is_err());
    }

    #[test]
    fn golden_ratio_section() {
        let a = matrix_of(&poly(&[(1, 1.0), (2, 1.0)]), 1, 2).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((truncated_norm(&a) - phi).abs() < 1e-9);
        let one = matrix_of(&DirichletPoly::one(), 2, 50).unwrap();
        assert!((truncated_norm(&one) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_iteration_matches_svd() {
        let d = DirichletPoly::from_terms([(1, c(1.0, -0.5)), (2, c(0.3, 0.2)), (3, c(-1.0, 0.0)), (6, c(0.0, 0.7))])
            .unwrap();
        for cutoff in [6, 20, 100] {
            let a = matrix_of(&d, 2, cutoff).unwrap();
            let svd = a.entries.clone().svd(false, false).singular_values.max();
            assert!((truncated_norm(&a) - svd).abs() <= 1e-9 * svd, "cutoff {cutoff}");
        }
    }

    #[test]
    fn sections_of_one_plus_two_increase_to_two() {
        let d = poly(&[(1, 1.0), (2, 1.0)]);
        let norms: Vec<f64> = (1..=10).map(|k| truncated_norm(&matrix_of(&d, 1, 1 << k).unwrap())).collect();
        assert!(norms.windows(2).all(|w| w[1] >= w[0]));
        // Section of I + S with n basis elements: 2 cos(π/(2n+1)).
        for (k, v) in norms.iter().enumerate() {
            let n = k as f64 + 2.0;
            assert!((v - 2.0 * (PI / (2.0 * n + 1.0)).cos()).abs() < 1e-9);
        }
        assert!((norms[9] - 2.0).abs() / 2.0 < 0.02);
    }

    #[test]
    fn spectrum_of_constant() {
        let r = spectrum_cloud(&DirichletPoly::constant(c(3.0, 1.0)), &HalfPlaneGrid::default()).unwrap();
        assert_eq!(r.points, vec![c(3.0, 1.0)]);
        assert!(spectrum_cloud(&DirichletPoly::zero(), &HalfPlaneGrid::default()).is_err());
    }

    #[test]
    fn spectrum_of_shifted_monomial_fills_the_disk() {
        let grid = HalfPlaneGrid { n_sigma: 120, n_t: 120, ..HalfPlaneGrid::default() };
        let r = spectrum_cloud(&poly(&[(1, 2.0), (2, 1.0)]), &grid).unwrap();
        assert!(r.points.iter().all(|w| (w - 2.0).norm() < 1.0));
        assert!(r.hull_bound > 0.0);
    }

    #[test]
    fn approximate_spectrum_traces_the_circle() {
        let spec = BoundarySpec { t_max: 100.0, n_t: 20_000, torus_resolution: Some(256) };
        let r = approximate_spectrum_cloud(&poly(&[(1, 2.0), (2, 1.0)]), &spec, &EngineConfig::default()).unwrap();
        assert!(r.points.iter().all(|w| ((w - 2.0).norm() - 1.0).abs() < 1e-12));
        assert!(r.cross_distance.unwrap() < 0.05);
    }

    #[test]
    fn closed_range_examples() {
        let cfg = EngineConfig::default();
        let rc = RangeConfig { t_count: 1 << 16, t_max: 100.0, ..RangeConfig::default() };
        let cert = closed_range_certificate(&poly(&[(1, 2.0), (2, 1.0)]), c(0.0, 0.0), &rc, &cfg).unwrap();
        assert!(cert.closed);
        assert!((cert.bound_m - 1.0).abs() < 1e-6);
        assert!((cert.witness[0].rem_euclid(2.0 * PI) - PI).abs() < 1e-5);
        assert!(cert.kronecker_agree);

        let cert = closed_range_certificate(&poly(&[(1, 1.0), (2, 1.0)]), c(0.0, 0.0), &rc, &cfg).unwrap();
        assert!(!cert.closed && cert.bound_m <= 1e-6);
        assert!(cert.kronecker_agree);

        let cert = closed_range_certificate(&poly(&[(1, 1.0), (2, 1.0), (3, 1.0)]), c(0.0, 0.0), &rc, &cfg).unwrap();
        assert!(!cert.closed);
        let w: Vec<f64> = cert.witness.iter().map(|t| t.rem_euclid(2.0 * PI)).collect();
        let near = |a: f64, b: f64| (a - b).abs() < 1e-4;
        assert!(
            (near(w[0], 2.0 * PI / 3.0) && near(w[1], 4.0 * PI / 3.0))
                || (near(w[0], 4.0 * PI / 3.0) && near(w[1], 2.0 * PI / 3.0)),
            "{w:?}"
        );
    }

    #[test]
    fn refusal_sequence_for_four_two() {
        let r = cross_norm_range_refusal(
            &poly(&[(1, 1.0), (2, 1.0)]),
            PExponent::int(4),
            PExponent::int(2),
            &EngineConfig::default(),
        )
        .unwrap();
        assert!(r.strictly_decreasing, "{r:?}");
        assert!(r.ratios[5] <= 0.5 * r.ratios[0], "{r:?}");
        assert!(cross_norm_range_refusal(
            &DirichletPoly::zero(),
            PExponent::int(4),
            PExponent::int(2),
            &EngineConfig::default()
        )
        .is_err());
        assert!(cross_norm_range_refusal(
            &DirichletPoly::one(),
            PExponent::int(2),
            PExponent::int(2),
            &EngineConfig::default()
        )
        .is_err());
    }
}
