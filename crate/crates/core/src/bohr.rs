//! Bohr lift: `Σ a_n n^{-s} ↔ Σ â(α) z^α` through `n = 𝔭^α`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{self, DirichletPoly, MultiIndex};
use crate::error::{Error, Result};
use crate::primes;

/// Analytic polynomial `F(ω) = Σ â(α) ω^α` in `nvars` variables.
///
/// Terms live in a flat row-major exponent buffer (stride `nvars`) sorted
/// lexicographically by `α`, so iteration order and JSON output are
/// reproducible. No stored coefficient is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoly {
    nvars: usize,
    exps: Vec<u32>,
    coeffs: Vec<Complex64>,
    degrees: Vec<u32>,
}

/// Largest dense accumulator used by [`TorusPoly::product`].
const DENSE_PRODUCT_CELLS: usize = 1 << 22;

impl TorusPoly {
    pub fn zero(nvars: usize) -> Self {
        Self::from_map(nvars, BTreeMap::new())
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        Self::from_terms(nvars, [(vec![], c)]).unwrap()
    }

    /// Collects terms; shorter exponent vectors are padded with zeros,
    /// duplicates summed and exact zeros pruned.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Complex64)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (mut alpha, c) in terms {
            if alpha.len() > nvars {
                if alpha[nvars..].iter().any(|&e| e != 0) {
                    return Err(Error::Dimension { expected: alpha.len(), got: nvars });
                }
                alpha.truncate(nvars);
            }
            alpha.resize(nvars, 0);
            *map.entry(alpha).or_default() += c;
        }
        Ok(Self::from_map(nvars, map))
    }

    fn from_map(nvars: usize, mut map: BTreeMap<Vec<u32>, Complex64>) -> Self {
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        let mut exps = Vec::with_capacity(map.len() * nvars);
        let mut coeffs = Vec::with_capacity(map.len());
        let mut degrees = vec![0u32; nvars];
        for (alpha, c) in map {
            for (d, &e) in degrees.iter_mut().zip(&alpha) {
                *d = (*d).max(e);
            }
            exps.extend_from_slice(&alpha);
            coeffs.push(c);
        }
        Self { nvars, exps, coeffs, degrees }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Maximal exponent of each variable.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> + '_ {
        let stride = self.nvars;
        self.coeffs.iter().enumerate().map(move |(i, &c)| {
            let alpha = if stride == 0 { &[][..] } else { &self.exps[i * stride..(i + 1) * stride] };
            (alpha, c)
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &[u32]) -> Complex64 {
        let mut key = alpha.to_vec();
        if key.len() > self.nvars {
            if key[self.nvars..].iter().any(|&e| e != 0) {
                return Complex64::default();
            }
            key.truncate(self.nvars);
        }
        key.resize(self.nvars, 0);
        self.terms().find(|(a, _)| *a == key.as_slice()).map_or(Complex64::default(), |(_, c)| c)
    }

    /// Same polynomial viewed in `nvars ≥ self.nvars()` variables.
    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        Self::from_terms(nvars, self.terms().map(|(a, c)| (a.to_vec(), c)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.nvars, self.terms().map(|(a, x)| (a.to_vec(), x * c))).unwrap()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars);
        Self::from_terms(n, self.terms().chain(other.terms()).map(|(a, c)| (a.to_vec(), c))).unwrap()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Multi-index convolution `c_α(fg) = Σ_{β+γ=α} c_β(f) c_γ(g)`.
    pub fn product(&self, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars);
        let dims: Vec<usize> = (0..n)
            .map(|j| {
                let d = |f: &Self| f.degrees.get(j).copied().unwrap_or(0) as usize;
                d(self) + d(other) + 1
            })
            .collect();
        let cells = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        if cells.is_some_and(|c| c <= DENSE_PRODUCT_CELLS) && !self.is_empty() && !other.is_empty() {
            return self.product_dense(other, n, &dims);
        }
        let mut map: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        let mut key = vec![0u32; n];
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                key.iter_mut().for_each(|k| *k = 0);
                for (k, &e) in key.iter_mut().zip(a) {
                    *k += e;
                }
                for (k, &e) in key.iter_mut().zip(b) {
                    *k += e;
                }
                *map.entry(key.clone()).or_default() += x * y;
            }
        }
        Self::from_map(n, map)
    }

    /// Convolution into a dense mixed-radix array. Variable 0 is the most
    /// significant digit, so ascending index order is lexicographic order.
    fn product_dense(&self, other: &Self, n: usize, dims: &[usize]) -> Self {
        let mut strides = vec![1usize; n];
        for j in (0..n.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * dims[j + 1];
        }
        let index = |a: &[u32]| a.iter().zip(&strides).map(|(&e, &s)| e as usize * s).sum::<usize>();
        let left: Vec<(usize, Complex64)> = self.terms().map(|(a, c)| (index(a), c)).collect();
        let right: Vec<(usize, Complex64)> = other.terms().map(|(a, c)| (index(a), c)).collect();
        let mut out = vec![Complex64::default(); dims.iter().product()];
        for &(i, x) in &left {
            for &(j, y) in &right {
                out[i + j] += x * y;
            }
        }
        let mut exps = Vec::new();
        let mut coeffs = Vec::new();
        let mut degrees = vec![0u32; n];
        for (k, c) in out.into_iter().enumerate() {
            if c == Complex64::default() {
                continue;
            }
            for (j, (&s, &d)) in strides.iter().zip(dims).enumerate() {
                let e = ((k / s) % d) as u32;
                degrees[j] = degrees[j].max(e);
                exps.push(e);
            }
            coeffs.push(c);
        }
        Self { nvars: n, exps, coeffs, degrees }
    }

    pub fn powu(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, Complex64::new(1.0, 0.0));
        for _ in 0..k {
            out = out.product(self);
        }
        out
    }

    /// Coefficientwise map `â(α) ↦ w(α)·â(α)`.
    pub fn map_coeffs(&self, mut w: impl FnMut(&[u32], Complex64) -> Complex64) -> Self {
        Self::from_terms(self.nvars, self.terms().map(|(a, c)| (a.to_vec(), w(a, c)))).unwrap()
    }

    /// `u ↦ F(ω·u)`, the lift of the twist by the character `ω`.
    pub fn rotate(&self, omega: &[Complex64]) -> Result<Self> {
        if omega.len() < self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: omega.len() });
        }
        Ok(self.map_coeffs(|a, c| a.iter().zip(omega).fold(c, |acc, (&e, w)| acc * w.powu(e))))
    }

    /// `f(z) = Σ c_α z^α` for `z` with at least `nvars` coordinates.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() < self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: z.len() });
        }
        Ok(self.eval_with(z, &mut Vec::new()))
    }

    /// Evaluation with a caller-owned power table (`z` unchecked).
    pub fn eval_with(&self, z: &[Complex64], pow: &mut Vec<Complex64>) -> Complex64 {
        pow.clear();
        let mut offsets = [0usize; 16];
        let many = self.nvars > offsets.len();
        let mut big_offsets = Vec::new();
        if many {
            big_offsets.resize(self.nvars, 0);
        }
        for (j, &d) in self.degrees.iter().enumerate() {
            if many {
                big_offsets[j] = pow.len();
            } else {
                offsets[j] = pow.len();
            }
            let mut p = Complex64::new(1.0, 0.0);
            pow.push(p);
            for _ in 0..d {
                p *= z[j];
                pow.push(p);
            }
        }
        let offs: &[usize] = if many { &big_offsets } else { &offsets };
        let mut acc = Complex64::default();
        for (alpha, c) in self.terms() {
            let mut m = c;
            for (j, &e) in alpha.iter().enumerate() {
                if e != 0 {
                    m *= pow[offs[j] + e as usize];
                }
            }
            acc += m;
        }
        acc
    }

    /// `Σ |â(α)|²` square-rooted with compensated summation.
    pub fn l2_norm(&self) -> f64 {
        crate::sum::sum(self.coeffs.iter().map(|c| c.norm_sqr())).sqrt()
    }

    /// `Σ |â(α)|`, an upper bound for `sup |F|`.
    pub fn l1_norm(&self) -> f64 {
        crate::sum::sum(self.coeffs.iter().map(|c| c.norm()))
    }

    /// `Σ |â(α)|·|α|_1`: Lipschitz constant of `θ ↦ F(e^{iθ})` in the sup-metric on phases.
    pub fn phase_lipschitz(&self) -> f64 {
        crate::sum::sum(self.terms().map(|(a, c)| c.norm() * a.iter().map(|&e| e as f64).sum::<f64>()))
    }
}

/// `D ↦ F` with `nvars` equal to the prime budget of the support.
pub fn bohr_lift(d: &DirichletPoly) -> Result<TorusPoly> {
    let nvars = d.prime_budget()?;
    let mut terms = Vec::with_capacity(d.len());
    for (n, c) in d.terms() {
        terms.push((arith::factorize(n)?.exponents()?, c));
    }
    TorusPoly::from_terms(nvars, terms)
}

/// `F ↦ D`, inverse of [`bohr_lift`].
pub fn bohr_transform(f: &TorusPoly) -> Result<DirichletPoly> {
    let mut terms = Vec::with_capacity(f.len());
    for (alpha, c) in f.terms() {
        terms.push((arith::unfactorize(&MultiIndex::from_exponents(alpha))?, c));
    }
    DirichletPoly::from_terms(terms)
}

/// `F·G`.
pub fn poly_product(f: &TorusPoly, g: &TorusPoly) -> TorusPoly {
    f.product(g)
}

/// `f(z)`.
pub fn eval_lift(f: &TorusPoly, z: &[Complex64]) -> Result<Complex64> {
    f.eval(z)
}

/// The Kronecker flow point `(𝔭_j^{-it})_j` in `nvars` coordinates.
pub fn kronecker_point(t: f64, nvars: usize) -> Vec<Complex64> {
    (0..nvars).map(|j| Complex64::from_polar(1.0, -t * (primes::nth_prime(j) as f64).ln())).collect()
}

#[derive(Serialize, Deserialize)]
struct TorusTermJson {
    alpha: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct TorusJson {
    nvars: usize,
    terms: Vec<TorusTermJson>,
}

impl Serialize for TorusPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TorusJson {
            nvars: self.nvars,
            terms: self
                .terms()
                .map(|(a, c)| {
                    let mut alpha = a.to_vec();
                    while alpha.last() == Some(&0) {
                        alpha.pop();
                    }
                    TorusTermJson { alpha, re: c.re, im: c.im }
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TorusJson::deserialize(d)?;
        TorusPoly::from_terms(raw.nvars, raw.terms.into_iter().map(|t| (t.alpha, Complex64::new(t.re, t.im))))
            .map_err(serde::de::Error::custom)
    }
}
