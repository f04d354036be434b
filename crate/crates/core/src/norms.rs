//! `H_p` norms of Dirichlet polynomials, `1 ≤ p ≤ ∞`.
//!
//! Three independent routes:
//! * exact coefficient formulas (`p = 2` by Parseval, even `p` through
//!   `‖F‖_p^p = ‖F^{p/2}‖_2^2`),
//! * Monte Carlo / lattice integration of `|F|^p` over the polytorus, and
//! * the vertical-line mean `lim (1/2R) ∫_{-R}^{R} |D(it)|^p dt`,
//!   approximated by the trapezoid rule.
//!
//! `p = ∞` is the max of `|F|` on `T^N` from the torus optimizer.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::DirichletPoly;
use crate::bohr::{bohr_lift, TorusPoly};
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;
use crate::torus::{self, EngineConfig, Estimate, Mode, SamplePlan};

/// An exponent `p ∈ [1, ∞]`, finite values kept as exact rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PExponent {
    Finite(Ratio<u64>),
    Infinity,
}

impl PExponent {
    pub fn new(value: Ratio<u64>) -> Result<Self> {
        if value < Ratio::one() {
            return Err(Error::InvalidExponent(format!("{value} < 1")));
        }
        Ok(PExponent::Finite(value))
    }

    pub fn int(p: u64) -> Self {
        Self::new(Ratio::from_integer(p)).expect("p >= 1")
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PExponent::Infinity)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            PExponent::Finite(r) => r.to_f64().unwrap(),
            PExponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p` as an exact rational (zero for `p = ∞`).
    pub fn reciprocal(&self) -> Ratio<u64> {
        match self {
            PExponent::Finite(r) => r.recip(),
            PExponent::Infinity => Ratio::zero(),
        }
    }

    pub fn reciprocal_f64(&self) -> f64 {
        self.reciprocal().to_f64().unwrap()
    }

    /// `Some(p)` when `p` is an even integer.
    pub fn even_integer(&self) -> Option<u32> {
        match self {
            PExponent::Finite(r) if r.is_integer() && r.to_integer() % 2 == 0 => u32::try_from(r.to_integer()).ok(),
            _ => None,
        }
    }
}

impl PartialOrd for PExponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PExponent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use PExponent::*;
        match (self, other) {
            (Infinity, Infinity) => std::cmp::Ordering::Equal,
            (Infinity, _) => std::cmp::Ordering::Greater,
            (_, Infinity) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            PExponent::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            PExponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for PExponent {
    type Err = Error;

    /// Accepts `inf`, integers, fractions `a/b` and decimals such as `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidExponent(s.to_string());
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(PExponent::Infinity),
            _ => {}
        }
        let value = if let Some((a, b)) = s.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ratio::new(a, b)
        } else if let Some((int, frac)) = s.split_once('.') {
            let digits = format!("{int}{frac}");
            let numer: u64 = digits.parse().map_err(|_| bad())?;
            let denom = 10u64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
            Ratio::new(numer, denom)
        } else {
            Ratio::from_integer(s.parse().map_err(|_| bad())?)
        };
        PExponent::new(value)
    }
}

impl Serialize for PExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PExponent::Infinity => s.serialize_str("inf"),
            PExponent::Finite(r) if r.is_integer() => s.serialize_u64(r.to_integer()),
            PExponent::Finite(_) => s.serialize_f64(self.as_f64()),
        }
    }
}

impl<'de> Deserialize<'de> for PExponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("bad exponent {other}"))),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMethod {
    Exact,
    Qmc,
    Grid,
}

/// A norm value with its provenance. For `Grid`, `value` is an attained
/// value (a lower bound) and `upper` a certified upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub p: PExponent,
    pub value: f64,
    pub stderr: f64,
    pub method: NormMethod,
    pub upper: f64,
}

impl NormValue {
    fn exact(p: PExponent, value: f64) -> Self {
        Self { p, value, stderr: 0.0, method: NormMethod::Exact, upper: value }
    }
}

/// Sup-norm result: the refined grid max next to the refinement tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HinfNorm {
    pub value: f64,
    pub upper: f64,
    pub refine_tol: f64,
    pub resolution: usize,
    pub witness: Vec<f64>,
}

/// Largest number of coefficients the even-`p` route is allowed to create.
pub const EXACT_TERM_BUDGET: f64 = 200_000.0;

/// `(Σ |a_n|²)^{1/2}`.
pub fn norm_h2(d: &DirichletPoly) -> f64 {
    d.terms().map(|(_, c)| c.norm_sqr()).collect::<NeumaierSum>().value().sqrt()
}

/// `‖F‖_p = ‖F^{p/2}‖_2^{2/p}` for even integer `p`.
pub fn torus_norm_even(f: &TorusPoly, p: u32) -> Result<f64> {
    if p == 0 || !p.is_multiple_of(2) {
        return Err(Error::InvalidExponent(format!("{p} is not an even integer")));
    }
    let g = f.powu(p / 2);
    Ok(g.l2_norm().powf(2.0 / p as f64))
}

pub fn norm_hp_even(d: &DirichletPoly, p: u32) -> Result<f64> {
    torus_norm_even(&bohr_lift(d)?, p)
}

/// `|w|^p` through `exp(p ln|w|)`, zero at `w = 0`.
fn pow_abs(w: Complex64, p: f64) -> f64 {
    let r = w.norm();
    if r == 0.0 {
        0.0
    } else {
        (p * r.ln()).exp()
    }
}

/// `(∫ |F|^p)^{1/p}` by sampling, with the delta-method standard error.
pub fn torus_norm_qmc(f: &TorusPoly, p: f64, plan: &SamplePlan) -> Result<Estimate> {
    if p < 1.0 || !p.is_finite() {
        return Err(Error::InvalidExponent(p.to_string()));
    }
    if f.nvars() == 0 {
        return Ok(Estimate { value: f.coeff(&[]).norm(), stderr: 0.0, count: plan.count });
    }
    if plan.nvars < f.nvars() {
        return Err(Error::Dimension { expected: f.nvars(), got: plan.nvars });
    }
    let mean = torus::integrate_torus(
        |w| {
            let mut pow = Vec::new();
            pow_abs(f.eval_with(w, &mut pow), p)
        },
        plan,
    );
    Ok(mean.root(p))
}

pub fn norm_hp_qmc(d: &DirichletPoly, p: &PExponent, plan: &SamplePlan) -> Result<Estimate> {
    if p.is_infinite() {
        return Err(Error::InvalidExponent("QMC route needs finite p".into()));
    }
    let f = bohr_lift(d)?;
    let plan = SamplePlan { nvars: plan.nvars.max(f.nvars()), ..plan.clone() };
    torus_norm_qmc(&f, p.as_f64(), &plan)
}

pub fn torus_norm_hinf(f: &TorusPoly, cfg: &EngineConfig) -> Result<HinfNorm> {
    let e = torus::extremum_on_torus(f, Mode::Max, cfg)?;
    Ok(HinfNorm {
        value: e.value,
        upper: e.certified_bound.max(e.value),
        refine_tol: e.refine_tol,
        resolution: e.resolution,
        witness: e.phases,
    })
}

/// `sup_{Re s > 0} |D(s)| = max_{T^N} |F|`.
pub fn norm_hinf(d: &DirichletPoly, cfg: &EngineConfig) -> Result<HinfNorm> {
    torus_norm_hinf(&bohr_lift(d)?, cfg)
}

/// `((1/2R) ∫_{-R}^{R} |D(it)|^p dt)^{1/p}` by the trapezoid rule with
/// `steps` intervals.
pub fn norm_vertical_line(d: &DirichletPoly, p: &PExponent, r: f64, steps: usize) -> Result<f64> {
    if p.is_infinite() {
        return Err(Error::InvalidExponent("vertical-line mean needs finite p".into()));
    }
    if r.is_nan() || r <= 0.0 || steps < 2 {
        return Err(Error::Precondition("need R > 0 and steps >= 2".into()));
    }
    if d.is_constant() {
        return Ok(d.coeff(1).norm());
    }
    let pf = p.as_f64();
    let logs: Vec<(f64, Complex64)> = d.terms().map(|(n, a)| ((n as f64).ln(), a)).collect();
    let h = 2.0 * r / steps as f64;
    let values: Vec<f64> = (0..steps + 1)
        .into_par_iter()
        .with_min_len(4096)
        .map(|k| {
            let t = -r + h * k as f64;
            let v: Complex64 = logs.iter().map(|&(ln, a)| a * Complex64::from_polar(1.0, -t * ln)).sum();
            let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
            w * pow_abs(v, pf)
        })
        .collect();
    let mean = values.into_iter().collect::<NeumaierSum>().value() / steps as f64;
    Ok(mean.powf(1.0 / pf))
}

fn even_route_size(f: &TorusPoly, p: u32) -> f64 {
    let half = (p / 2) as f64;
    f.degrees().iter().map(|&d| d as f64 * half + 1.0).product::<f64>().min((f.len() as f64).powf(half))
}

/// Best available route: exact for `p = 2` and small even `p`, the grid
/// optimizer for `p = ∞`, sampling otherwise.
pub fn torus_norm(f: &TorusPoly, p: &PExponent, cfg: &EngineConfig) -> Result<NormValue> {
    match p {
        PExponent::Infinity => {
            let h = torus_norm_hinf(f, cfg)?;
            Ok(NormValue { p: *p, value: h.value, stderr: 0.0, method: NormMethod::Grid, upper: h.upper })
        }
        _ => match p.even_integer() {
            Some(2) => Ok(NormValue::exact(*p, f.l2_norm())),
            Some(k) if k <= 8 && even_route_size(f, k) <= EXACT_TERM_BUDGET => {
                Ok(NormValue::exact(*p, torus_norm_even(f, k)?))
            }
            _ => {
                let e = torus_norm_qmc(f, p.as_f64(), &cfg.plan(f.nvars()))?;
                Ok(NormValue {
                    p: *p,
                    value: e.value,
                    stderr: e.stderr,
                    method: if e.stderr == 0.0 && f.nvars() == 0 { NormMethod::Exact } else { NormMethod::Qmc },
                    upper: e.value + 3.0 * e.stderr,
                })
            }
        },
    }
}

/// `‖D‖_{H_p}` through [`torus_norm`].
pub fn norm(d: &DirichletPoly, p: &PExponent, cfg: &EngineConfig) -> Result<NormValue> {
    torus_norm(&bohr_lift(d)?, p, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one_plus_two() -> DirichletPoly {
        DirichletPoly::from_real(&[(1, 1.0), (2, 1.0)]).unwrap()
    }

    fn plan() -> SamplePlan {
        SamplePlan::random(1, 1 << 16, torus::DEFAULT_SEED)
    }

    #[test]
    fn parse_exponents() {
        assert_eq!("inf".parse::<PExponent>().unwrap(), PExponent::Infinity);
        assert_eq!("4".parse::<PExponent>().unwrap(), PExponent::int(4));
        assert_eq!("1.5".parse::<PExponent>().unwrap(), PExponent::Finite(Ratio::new(3, 2)));
        assert_eq!("3/2".parse::<PExponent>().unwrap(), PExponent::Finite(Ratio::new(3, 2)));
        assert!("0.5".parse::<PExponent>().is_err());
        assert!("x".parse::<PExponent>().is_err());
        assert!(PExponent::int(2) < PExponent::Infinity);
        assert_eq!(PExponent::Finite(Ratio::new(3, 2)).to_string(), "3/2");
    }

    #[test]
    fn h2_examples() {
        assert_eq!(norm_h2(&one_plus_two()), 2f64.sqrt());
        assert_eq!(norm_h2(&DirichletPoly::zero()), 0.0);
        let d = DirichletPoly::from_terms([(5, c(3.0, 0.0)), (7, c(0.0, -4.0))]).unwrap();
        assert_eq!(norm_h2(&d), 5.0);
    }

    #[test]
    fn even_norm_of_one_plus_two_is_sixth_root() {
        // |1+z|^4 = (2 + z + z̄)^2 integrates to 4 + 1 + 1 = 6.
        let v = norm_hp_even(&one_plus_two(), 4).unwrap();
        assert!((v - 6f64.powf(0.25)).abs() < 1e-15);
        assert!(norm_hp_even(&one_plus_two(), 3).is_err());
    }

    #[test]
    fn even_norm_is_homogeneous() {
        let d = DirichletPoly::from_real(&[(1, 1.0), (2, -2.0), (3, 0.5), (6, 1.0)]).unwrap();
        let k = c(0.6, -0.8) * 3.0;
        for p in [2, 4, 6, 8] {
            let a = norm_hp_even(&d.scale(k), p).unwrap();
            let b = k.norm() * norm_hp_even(&d, p).unwrap();
            assert!((a - b).abs() < 1e-12 * b, "p = {p}");
        }
    }

    #[test]
    fn qmc_matches_even_route_on_two_primes() {
        let d = DirichletPoly::from_real(&[(1, 1.0), (2, 1.0), (3, 1.0)]).unwrap();
        let exact = norm_hp_even(&d, 4).unwrap();
        let est = norm_hp_qmc(&d, &PExponent::int(4), &SamplePlan::random(2, 1 << 16, 5)).unwrap();
        assert!((est.value - exact).abs() <= 3.0 * est.stderr, "{est:?} vs {exact}");
    }

    #[test]
    fn qmc_examples_for_one_plus_two() {
        let d = one_plus_two();
        let e1 = norm_hp_qmc(&d, &PExponent::int(1), &plan()).unwrap();
        assert!((e1.value - 4.0 / PI).abs() <= 3.0 * e1.stderr);
        let e2 = norm_hp_qmc(&d, &PExponent::int(2), &plan()).unwrap();
        assert!((e2.value - 2f64.sqrt()).abs() <= 3.0 * e2.stderr);
        let e4 = norm_hp_qmc(&d, &PExponent::int(4), &plan()).unwrap();
        assert!((e4.value - 6f64.powf(0.25)).abs() <= 3.0 * e4.stderr);
        assert!(norm_hp_qmc(&d, &PExponent::Infinity, &plan()).is_err());
    }

    #[test]
    fn hinf_examples() {
        let cfg = EngineConfig::default();
        let h = norm_hinf(&one_plus_two(), &cfg).unwrap();
        assert!((h.value - 2.0).abs() < 1e-12);
        assert!(h.upper >= 2.0 && h.upper <= 2.0 + 0.05);
        let d = DirichletPoly::from_real(&[(1, 1.0), (2, 1.0), (3, 1.0), (6, 1.0)]).unwrap();
        assert!((norm_hinf(&d, &cfg).unwrap().value - 4.0).abs() < 1e-12);
        let k = DirichletPoly::constant(c(-3.0, 4.0));
        assert_eq!(norm_hinf(&k, &cfg).unwrap().value, 5.0);
    }

    #[test]
    fn vertical_line_examples() {
        let k = DirichletPoly::constant(c(-3.0, 4.0));
        assert_eq!(norm_vertical_line(&k, &PExponent::int(3), 10.0, 2).unwrap(), 5.0);
        let d = one_plus_two();
        let v2 = norm_vertical_line(&d, &PExponent::int(2), 1e4, 1 << 20).unwrap();
        assert!((v2 / 2f64.sqrt() - 1.0).abs() < 0.02, "{v2}");
        let v4 = norm_vertical_line(&d, &PExponent::int(4), 1e4, 1 << 20).unwrap();
        assert!((v4 / 6f64.powf(0.25) - 1.0).abs() < 0.02, "{v4}");
    }

    #[test]
    fn vertical_line_approaches_qmc_as_r_grows() {
        let d = DirichletPoly::from_real(&[(1, 1.0), (2, 0.5), (3, -1.0)]).unwrap();
        let p = PExponent::int(3);
        let q = norm_hp_qmc(&d, &p, &SamplePlan::random(2, 1 << 18, 11)).unwrap();
        let at = |r: f64| norm_vertical_line(&d, &p, r, 1 << 21).unwrap();
        let v4 = at(1e4);
        assert!((v4 / q.value - 1.0).abs() < 0.05, "{v4} vs {q:?}");
        let errs: Vec<f64> = [1e2, 1e3, 1e4].iter().map(|&r| (at(r) - q.value).abs()).collect();
        assert!(errs[2] <= errs[0] + 3.0 * q.stderr, "{errs:?}");
    }

    #[test]
    fn dispatch_routes() {
        let cfg = EngineConfig::default();
        let d = one_plus_two();
        assert_eq!(norm(&d, &PExponent::int(2), &cfg).unwrap().method, NormMethod::Exact);
        assert_eq!(norm(&d, &PExponent::int(4), &cfg).unwrap().method, NormMethod::Exact);
        assert_eq!(norm(&d, &PExponent::int(3), &cfg).unwrap().method, NormMethod::Qmc);
        assert_eq!(norm(&d, &PExponent::Infinity, &cfg).unwrap().method, NormMethod::Grid);
    }

    #[test]
    fn serialized_shape() {
        let cfg = EngineConfig::default();
        let v = norm(&one_plus_two(), &PExponent::int(4), &cfg).unwrap();
        let json = serde_json::to_value(v).unwrap();
        assert_eq!(json["p"], 4);
        assert_eq!(json["method"], "exact");
        let v = norm(&one_plus_two(), &PExponent::Infinity, &cfg).unwrap();
        assert_eq!(serde_json::to_value(v).unwrap()["p"], "inf");
    }
}
