//! Multipliers `𝔐(p,q)` from `H_p` to `H_q`, their norms and the bracket
//! for the essential norm of `M_D : E ↦ D·E`.
//!
//! | exponents          | multiplier space             |
//! |--------------------|------------------------------|
//! | `q < p < ∞`        | `H_t`, `t = pq/(p−q)`        |
//! | `p = ∞`, `q < ∞`   | `H_q`                        |
//! | `p = q`            | `H_∞`                        |
//! | `p < q`            | `{0}`                        |

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::DirichletPoly;
use crate::bohr::{bohr_lift, TorusPoly};
use crate::colegamelin::{extremal_raw, ExtremalSpec};
use crate::error::{Error, Result};
use crate::norms::{torus_norm, NormMethod, NormValue, PExponent};
use crate::torus::{extremum_on_torus, EngineConfig, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "t", rename_all = "lowercase")]
pub enum MultiplierSpace {
    Hinf,
    Ht(PExponent),
    Zero,
}

impl fmt::Display for MultiplierSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierSpace::Hinf => write!(f, "H_inf"),
            MultiplierSpace::Ht(t) => write!(f, "H_{t}"),
            MultiplierSpace::Zero => write!(f, "zero"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierClass {
    pub p: PExponent,
    pub q: PExponent,
    pub space: MultiplierSpace,
}

impl MultiplierClass {
    /// Exponent of the Hardy space the multipliers form, `None` for `{0}`.
    pub fn exponent(&self) -> Option<PExponent> {
        match self.space {
            MultiplierSpace::Hinf => Some(PExponent::Infinity),
            MultiplierSpace::Ht(t) => Some(t),
            MultiplierSpace::Zero => None,
        }
    }
}

pub fn classify(p: PExponent, q: PExponent) -> MultiplierClass {
    let space = if p == q {
        MultiplierSpace::Hinf
    } else if p < q {
        MultiplierSpace::Zero
    } else {
        // 1/t = 1/q − 1/p > 0.
        let inv = q.reciprocal() - p.reciprocal();
        MultiplierSpace::Ht(PExponent::Finite(inv.recip()))
    };
    MultiplierClass { p, q, space }
}

/// `‖M_D‖_{H_p → H_q}`, i.e. the norm of `D` in the classifying space.
pub fn multiplier_norm(d: &DirichletPoly, p: PExponent, q: PExponent, cfg: &EngineConfig) -> Result<NormValue> {
    let class = classify(p, q);
    match class.exponent() {
        Some(t) => crate::norms::norm(d, &t, cfg),
        None if d.is_zero() => Ok(NormValue { p: q, value: 0.0, stderr: 0.0, method: NormMethod::Exact, upper: 0.0 }),
        None => Err(Error::NoNonzeroMultipliers { p: p.to_string(), q: q.to_string() }),
    }
}

/// Best ratio `‖D·E‖_q / ‖E‖_p` found over the candidate test series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub stderr: f64,
    pub candidate: String,
    pub evaluated: usize,
}

/// Largest coefficient count of a candidate test polynomial.
pub const MAX_CANDIDATE_TERMS: usize = 4096;
const EXTREMAL_RADII: [f64; 3] = [0.5, 0.9, 0.99];
const MAX_POWER: u32 = 6;

fn random_candidate(nvars: usize, seed: u64, trial: u64) -> Result<TorusPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    if nvars == 0 {
        return Ok(TorusPoly::constant(0, Complex64::new(1.0, 0.0)));
    }
    let caps: Vec<u32> = (0..nvars).map(|j| rng.random_range(0..=if j < 3 { 3 } else { 1 })).collect();
    let divisors: usize = caps.iter().map(|&c| c as usize + 1).product();
    let size = rng.random_range(1..=divisors.min(16));
    let mut terms = Vec::with_capacity(size);
    for _ in 0..size {
        let alpha: Vec<u32> = caps.iter().map(|&c| rng.random_range(0..=c)).collect();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        terms.push((alpha, Complex64::new(re, im)));
    }
    let e = TorusPoly::from_terms(nvars, terms)?;
    let scale = e.l2_norm();
    Ok(if scale > 0.0 {
        e.scale(Complex64::new(1.0 / scale, 0.0))
    } else {
        TorusPoly::constant(nvars, Complex64::new(1.0, 0.0))
    })
}

fn extremal_candidates(f: &TorusPoly, p: PExponent, cfg: &EngineConfig) -> Result<Vec<(String, TorusPoly)>> {
    let nvars = f.nvars();
    if nvars == 0 || p.is_infinite() {
        return Ok(Vec::new());
    }
    let peak = extremum_on_torus(f, Mode::Max, cfg)?.point();
    let degree = ((MAX_CANDIDATE_TERMS as f64).powf(1.0 / nvars as f64).floor() as u32).saturating_sub(1).clamp(1, 512);
    EXTREMAL_RADII
        .iter()
        .map(|&r| {
            let z = peak.iter().map(|w| w * r).collect();
            let spec = ExtremalSpec::new(z, p)?;
            Ok((format!("extremal(r={r})"), extremal_raw(&spec, degree)?))
        })
        .collect()
}

/// Lower bound for `‖M_D‖_{H_p → H_q}` from explicit test series: `1`, the
/// powers `D^k` (`k ≤ 6`), extremal functions peaked where `|D|` is largest
/// and `trials` random normalized polynomials on divisors of smooth numbers.
pub fn operator_norm_lower_bound(
    d: &DirichletPoly,
    p: PExponent,
    q: PExponent,
    trials: usize,
    cfg: &EngineConfig,
) -> Result<LowerBound> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let f = bohr_lift(d)?;
    let nvars = f.nvars();
    let mut candidates: Vec<(String, TorusPoly)> = Vec::new();
    let mut power = TorusPoly::constant(nvars, Complex64::new(1.0, 0.0));
    for k in 0..=MAX_POWER {
        if power.len() > MAX_CANDIDATE_TERMS {
            break;
        }
        candidates.push((format!("power(k={k})"), power.clone()));
        power = power.product(&f);
    }
    candidates.extend(extremal_candidates(&f, p, cfg)?);
    let random: Vec<(String, TorusPoly)> = (0..trials as u64)
        .map(|i| Ok((format!("random(trial={i})"), random_candidate(nvars, cfg.seed, i)?)))
        .collect::<Result<_>>()?;
    candidates.extend(random);

    let ratios: Vec<(f64, f64)> = candidates
        .par_iter()
        .map(|(_, e)| -> Result<(f64, f64)> {
            let num = torus_norm(&f.product(e), &q, cfg)?;
            let den = torus_norm(e, &p, cfg)?;
            if den.value <= 0.0 {
                return Ok((0.0, 0.0));
            }
            let ratio = num.value / den.value;
            let rel = (num.stderr / num.value.max(f64::MIN_POSITIVE)).hypot(den.stderr / den.value);
            Ok((ratio, ratio * rel))
        })
        .collect::<Result<_>>()?;
    let (best, &(value, stderr)) =
        ratios.iter().enumerate().max_by(|a, b| a.1 .0.total_cmp(&b.1 .0)).expect("at least one candidate");
    Ok(LowerBound { value, stderr, candidate: candidates[best].0.clone(), evaluated: candidates.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EssRegime {
    /// `q < p < ∞`: `‖D‖_q ≤ ‖M_D‖_ess ≤ ‖D‖_t`.
    Mixed,
    /// `p = ∞ > q`: `½‖D‖_q ≤ ‖M_D‖_ess ≤ ‖D‖_q`.
    FromHinf,
    /// `p = q > 1`: `‖M_D‖_ess = ‖D‖_∞`.
    Diagonal,
    /// `p = q = 1`: `max(½‖D‖_∞, ‖D‖_1) ≤ ‖M_D‖_ess ≤ ‖D‖_∞`.
    DiagonalOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EssBracket {
    pub lower: f64,
    pub upper: f64,
    pub regime: EssRegime,
    pub lower_stderr: f64,
    pub upper_stderr: f64,
}

impl EssBracket {
    pub fn consistent(&self, k: f64) -> bool {
        let rounding = 1e-12 * self.upper.abs();
        0.0 <= self.lower && self.lower <= self.upper + k * self.lower_stderr.hypot(self.upper_stderr) + rounding
    }
}

/// Two-sided estimate of `‖M_D‖_ess` on `H_p → H_q`.
pub fn ess_norm_bracket(d: &DirichletPoly, p: PExponent, q: PExponent, cfg: &EngineConfig) -> Result<EssBracket> {
    if p < q {
        return Err(Error::NoNonzeroMultipliers { p: p.to_string(), q: q.to_string() });
    }
    let f = bohr_lift(d)?;
    let one = PExponent::int(1);
    let bracket = |regime, lo: NormValue, lo_scale: f64, hi: NormValue| EssBracket {
        lower: lo_scale * lo.value,
        upper: hi.value,
        regime,
        lower_stderr: lo_scale * lo.stderr,
        upper_stderr: hi.stderr,
    };
    if p == q {
        let sup = torus_norm(&f, &PExponent::Infinity, cfg)?;
        if p != one {
            return Ok(bracket(EssRegime::Diagonal, sup, 1.0, sup));
        }
        let n1 = torus_norm(&f, &one, cfg)?;
        let half = 0.5 * sup.value;
        return Ok(if n1.value >= half {
            bracket(EssRegime::DiagonalOne, n1, 1.0, sup)
        } else {
            bracket(EssRegime::DiagonalOne, sup, 0.5, sup)
        });
    }
    let nq = torus_norm(&f, &q, cfg)?;
    if p.is_infinite() {
        return Ok(bracket(EssRegime::FromHinf, nq, 0.5, nq));
    }
    let t = classify(p, q).exponent().expect("q < p");
    let nt = torus_norm(&f, &t, cfg)?;
    Ok(bracket(EssRegime::Mixed, nq, 1.0, nt))
}
