//! The Cole–Gamelin pointwise estimate
//! `|f(z)| ≤ (∏_j 1/(1−|z_j|²))^{1/p} ‖f‖_{H_p}` and the functions that
//! attain it,
//! `f_z(u) = ∏_j ((1−|z_j|²)/(1−z̄_j u_j)²)^{1/p}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bohr::TorusPoly;
use crate::error::{Error, Result};
use crate::norms::{torus_norm, PExponent};
use crate::torus::EngineConfig;

/// Largest `|z_j|` accepted by [`extremal_function`].
pub const EXTREMAL_GUARD: f64 = 0.99;
pub const DEFAULT_DEGREE: u32 = 64;
/// Cap on the number of coefficients of a tensor-product extremal.
pub const MAX_EXTREMAL_TERMS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    #[serde(with = "crate::complex_json")]
    pub z: Vec<Complex64>,
    pub p: PExponent,
}

impl ExtremalSpec {
    pub fn new(z: Vec<Complex64>, p: PExponent) -> Result<Self> {
        if p.is_infinite() {
            return Err(Error::InvalidExponent("extremals need finite p".into()));
        }
        check_open_polydisc(&z)?;
        Ok(Self { z, p })
    }

    pub fn max_modulus(&self) -> f64 {
        self.z.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }
}

fn check_modulus(z: &[Complex64], ok: impl Fn(f64) -> bool) -> Result<()> {
    match z.iter().map(|w| w.norm()).enumerate().find(|&(_, m)| !ok(m)) {
        Some((index, modulus)) => Err(Error::OutsidePolydisc { index, modulus }),
        None => Ok(()),
    }
}

fn check_open_polydisc(z: &[Complex64]) -> Result<()> {
    check_modulus(z, |m| m < 1.0)
}

/// `(∏_j 1/(1−|z_j|²))^{1/p}`.
pub fn cg_factor(z: &[Complex64], p: &PExponent) -> f64 {
    let log: f64 = z.iter().map(|w| -(-w.norm_sqr()).ln_1p()).sum();
    (log * p.reciprocal_f64()).exp()
}

/// Both sides of the pointwise bound. `stderr` is the sampling error of the
/// right-hand side (zero when the norm is exact).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgBound {
    pub lhs: f64,
    pub rhs: f64,
    pub stderr: f64,
}

impl CgBound {
    pub fn holds(&self, k: f64) -> bool {
        self.lhs <= self.rhs + k * self.stderr + 1e-12 * self.rhs.max(1.0)
    }
}

/// Evaluates `|F(z)|` against `(∏ 1/(1−|z_j|²))^{1/p}‖F‖_p`. The product
/// runs over all coordinates of `z`, which must cover `F`'s variables.
pub fn cg_bound(f: &TorusPoly, p: &PExponent, z: &[Complex64], cfg: &EngineConfig) -> Result<CgBound> {
    if p.is_infinite() {
        return Err(Error::InvalidExponent("finite p required".into()));
    }
    check_open_polydisc(z)?;
    let lhs = f.eval(z)?.norm();
    let norm = torus_norm(f, p, cfg)?;
    let k = cg_factor(z, p);
    Ok(CgBound { lhs, rhs: k * norm.value, stderr: k * norm.stderr })
}

/// Taylor coefficients of `(1−w)^{−β}`, i.e. `(β)_k / k!`, for `k ≤ degree`.
pub fn binomial_series(beta: f64, degree: u32) -> Vec<f64> {
    let mut c = Vec::with_capacity(degree as usize + 1);
    let mut x = 1.0;
    c.push(x);
    for k in 1..=degree {
        x *= (beta + (k - 1) as f64) / k as f64;
        c.push(x);
    }
    c
}

/// One-variable factor `(1−|z|²)^{1/p} Σ_{k≤d} c_k z̄^k u^k`.
fn factor_coeffs(z: Complex64, p: &PExponent, degree: u32) -> Vec<Complex64> {
    let inv_p = p.reciprocal_f64();
    let scale = (1.0 - z.norm_sqr()).powf(inv_p);
    let zbar = z.conj();
    let mut pow = Complex64::new(scale, 0.0);
    binomial_series(2.0 * inv_p, degree)
        .into_iter()
        .map(|c| {
            let term = pow * c;
            pow *= zbar;
            term
        })
        .collect()
}

/// Degree-`d` truncation of `f_z` with no modulus guard beyond `|z_j| < 1`.
/// Projections that only see degrees `≤ d` are unaffected by truncation.
pub fn extremal_raw(spec: &ExtremalSpec, degree: u32) -> Result<TorusPoly> {
    check_open_polydisc(&spec.z)?;
    let nvars = spec.z.len();
    let total = (degree as f64 + 1.0).powi(nvars as i32);
    if total > MAX_EXTREMAL_TERMS as f64 {
        return Err(Error::Precondition(format!("extremal with {total} coefficients exceeds {MAX_EXTREMAL_TERMS}")));
    }
    let factors: Vec<Vec<Complex64>> = spec.z.iter().map(|&w| factor_coeffs(w, &spec.p, degree)).collect();
    let mut terms: Vec<(Vec<u32>, Complex64)> = vec![(Vec::new(), Complex64::new(1.0, 0.0))];
    for coeffs in &factors {
        let mut next = Vec::with_capacity(terms.len() * coeffs.len());
        for (alpha, c) in &terms {
            for (k, &a) in coeffs.iter().enumerate() {
                let mut beta = alpha.clone();
                beta.push(k as u32);
                next.push((beta, c * a));
            }
        }
        terms = next;
    }
    TorusPoly::from_terms(nvars, terms)
}

/// Degree-`d` truncation of the extremal function for `spec`, requiring
/// `|z_j| ≤ 0.99`.
pub fn extremal_function(spec: &ExtremalSpec, degree: u32) -> Result<TorusPoly> {
    check_modulus(&spec.z, |m| m <= EXTREMAL_GUARD)?;
    extremal_raw(spec, degree)
}

/// Truncation error bound `ε(d) = (d+2) m^{d+1} / (1−m)²`, `m = max |z_j|`.
pub fn truncation_epsilon(max_modulus: f64, degree: u32) -> f64 {
    let m = max_modulus;
    (degree as f64 + 2.0) * m.powi(degree as i32 + 1) / ((1.0 - m) * (1.0 - m))
}
