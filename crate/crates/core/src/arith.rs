//! Dirichlet polynomials `D = Σ a_n n^{-s}` with finitely many nonzero
//! coefficients, together with the multi-index view of their indices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes;

/// Largest admissible coefficient index, `2^63 - 1`.
pub const MAX_INDEX: u64 = i64::MAX as u64;

/// Exponent vector `α` of a factorization `n = 𝔭^α`.
///
/// Stored sparsely as ascending `(prime, exponent)` pairs so that indices with
/// a huge prime factor (whose position among the primes is not computable)
/// still factor. [`MultiIndex::exponents`] gives the dense vector
/// `(α_1, …, α_M)` with trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    factors: Vec<(u64, u32)>,
}

impl MultiIndex {
    /// The empty index, `n = 1`.
    pub fn one() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Builds `α` from a dense exponent vector, position `j` being the `j`-th prime.
    pub fn from_exponents(exponents: &[u32]) -> Self {
        let factors =
            exponents.iter().enumerate().filter(|(_, &e)| e > 0).map(|(j, &e)| (primes::nth_prime(j), e)).collect();
        Self { factors }
    }

    /// Dense exponents `(α_1, …, α_M)`, `M` the position of the largest prime.
    pub fn exponents(&self) -> Result<Vec<u32>> {
        let mut out = vec![0; self.len()?];
        for &(p, e) in &self.factors {
            out[primes::prime_position(p)?] = e;
        }
        Ok(out)
    }

    /// Length `M` of the trimmed dense vector.
    pub fn len(&self) -> Result<usize> {
        match self.factors.last() {
            None => Ok(0),
            Some(&(p, _)) => Ok(primes::prime_position(p)? + 1),
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponents() {
            Ok(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Err(_) => {
                let parts: Vec<String> = self.factors.iter().map(|(p, e)| format!("{p}^{e}")).collect();
                write!(f, "[{}]", parts.join("·"))
            }
        }
    }
}

/// `n ↦ α` with `n = 𝔭^α`.
pub fn factorize(n: u64) -> Result<MultiIndex> {
    Ok(MultiIndex { factors: primes::factor(n)? })
}

/// `α ↦ 𝔭^α`; errors if the product leaves `[1, 2^63 - 1]`.
pub fn unfactorize(alpha: &MultiIndex) -> Result<u64> {
    let mut n: u64 = 1;
    for &(p, e) in &alpha.factors {
        for _ in 0..e {
            n = n.checked_mul(p).ok_or(Error::IndexOverflow)?;
        }
    }
    if n > MAX_INDEX {
        return Err(Error::IndexOverflow);
    }
    Ok(n)
}

/// A completely multiplicative unimodular function, given by its values on
/// the first primes: `γ(𝔭_j) = ω_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    values: Vec<Complex64>,
}

impl Character {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        for (j, w) in values.iter().enumerate() {
            let modulus = w.norm();
            if (modulus - 1.0).abs() > 1e-12 {
                return Err(Error::NotUnimodular { prime: primes::nth_prime(j), modulus });
            }
        }
        Ok(Self { values })
    }

    /// Character with `γ(𝔭_j) = e^{iθ_j}`.
    pub fn from_phases(phases: &[f64]) -> Self {
        Self { values: phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect() }
    }

    pub fn trivial(nprimes: usize) -> Self {
        Self { values: vec![Complex64::new(1.0, 0.0); nprimes] }
    }

    pub fn values_on_primes(&self) -> &[Complex64] {
        &self.values
    }

    pub fn conj(&self) -> Self {
        Self { values: self.values.iter().map(|w| w.conj()).collect() }
    }

    /// `γ(n) = ω^{α(n)}`.
    pub fn value(&self, n: u64) -> Result<Complex64> {
        let alpha = factorize(n)?;
        self.value_at(&alpha)
    }

    fn value_at(&self, alpha: &MultiIndex) -> Result<Complex64> {
        let mut out = Complex64::new(1.0, 0.0);
        for &(p, e) in alpha.factors() {
            let w = primes::prime_position(p).ok().and_then(|j| self.values.get(j)).ok_or(Error::MissingPrime(p))?;
            out *= w.powu(e);
        }
        Ok(out)
    }
}

/// A finitely supported Dirichlet series `Σ a_n n^{-s}` in canonical form:
/// keys in `[1, 2^63 - 1]`, no coefficient exactly zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DirichletPoly {
    coeffs: BTreeMap<u64, Complex64>,
}

impl DirichletPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(1, c)
    }

    /// `c · n^{-s}`.
    ///
    /// Panics when `n` is zero or above [`MAX_INDEX`].
    pub fn monomial(n: u64, c: Complex64) -> Self {
        Self::from_terms([(n, c)]).expect("monomial index out of range")
    }

    /// Sums duplicate indices and prunes exact zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (u64, Complex64)>) -> Result<Self> {
        let mut coeffs: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (n, c) in terms {
            if n == 0 {
                return Err(Error::NonPositiveIndex(0));
            }
            if n > MAX_INDEX {
                return Err(Error::IndexOverflow);
            }
            *coeffs.entry(n).or_default() += c;
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { coeffs })
    }

    /// Real integer-valued coefficients, for exact tests.
    pub fn from_real(terms: &[(u64, f64)]) -> Result<Self> {
        Self::from_terms(terms.iter().map(|&(n, a)| (n, Complex64::new(a, 0.0))))
    }

    pub fn coeff(&self, n: u64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
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

    /// Constant polynomial (only `n = 1` in the support, or zero).
    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&n| n == 1)
    }

    /// Largest `n` with `a_n ≠ 0`; zero for the zero polynomial.
    pub fn support_bound(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// Number of primes needed for the support: the position (one based) of
    /// the greatest prime divisor among all indices.
    pub fn prime_budget(&self) -> Result<usize> {
        let mut gpd = 1;
        for &n in self.coeffs.keys() {
            if let Some(p) = primes::greatest_prime_divisor(n)? {
                gpd = gpd.max(p);
            }
        }
        if gpd == 1 {
            Ok(0)
        } else {
            Ok(primes::prime_position(gpd)? + 1)
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(n, a)| (n, a * c))).unwrap()
    }

    /// Dirichlet convolution `c_n = Σ_{jk=n} a_j b_k`.
    pub fn checked_product(&self, other: &Self) -> Result<Self> {
        let mut coeffs: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (&j, &a) in &self.coeffs {
            for (&k, &b) in &other.coeffs {
                let n = j.checked_mul(k).filter(|&n| n <= MAX_INDEX);
                let n = n.ok_or(Error::IndexOverflow)?;
                *coeffs.entry(n).or_default() += a * b;
            }
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { coeffs })
    }

    /// As [`checked_product`](Self::checked_product); panics on index overflow.
    pub fn product(&self, other: &Self) -> Self {
        self.checked_product(other).expect("Dirichlet product index overflow")
    }

    /// `D_N`: the terms whose index factors over the first `budget` primes.
    pub fn restrict(&self, budget: usize) -> Self {
        Self {
            coeffs: self.coeffs.iter().filter(|(&n, _)| primes::is_smooth(n, budget)).map(|(&n, &c)| (n, c)).collect(),
        }
    }

    /// `D^γ = Σ a_n γ(n) n^{-s}`.
    pub fn twist(&self, chi: &Character) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.len());
        for (n, a) in self.terms() {
            terms.push((n, a * chi.value(n)?));
        }
        Self::from_terms(terms)
    }

    /// `Σ a_n n^{-s}` with `n^{-s} = exp(-s ln n)`.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        self.terms().map(|(n, a)| a * (-s * (n as f64).ln()).exp()).sum()
    }

    /// `Σ |a_n|`, an upper bound for the sup norm.
    pub fn l1_norm(&self) -> f64 {
        crate::sum::sum(self.coeffs.values().map(|c| c.norm()))
    }
}

/// Free-function form of [`DirichletPoly::product`].
pub fn dirichlet_product(d: &DirichletPoly, e: &DirichletPoly) -> DirichletPoly {
    d.product(e)
}

impl Add for &DirichletPoly {
    type Output = DirichletPoly;
    fn add(self, rhs: &DirichletPoly) -> DirichletPoly {
        DirichletPoly::from_terms(self.terms().chain(rhs.terms())).unwrap()
    }
}

impl Sub for &DirichletPoly {
    type Output = DirichletPoly;
    fn sub(self, rhs: &DirichletPoly) -> DirichletPoly {
        DirichletPoly::from_terms(self.terms().chain(rhs.terms().map(|(n, c)| (n, -c)))).unwrap()
    }
}

impl Neg for &DirichletPoly {
    type Output = DirichletPoly;
    fn neg(self) -> DirichletPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &DirichletPoly {
    type Output = DirichletPoly;
    fn mul(self, rhs: &DirichletPoly) -> DirichletPoly {
        self.product(rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    n: u64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct DirichletJson {
    terms: Vec<TermJson>,
}

impl Serialize for DirichletPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DirichletJson { terms: self.terms().map(|(n, c)| TermJson { n, re: c.re, im: c.im }).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirichletPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DirichletJson::deserialize(d)?;
        DirichletPoly::from_terms(raw.terms.into_iter().map(|t| (t.n, Complex64::new(t.re, t.im))))
            .map_err(serde::de::Error::custom)
    }
}
