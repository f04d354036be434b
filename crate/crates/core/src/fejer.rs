//! Multivariate Fejér means `σ_n^N` and remainders `R_n^N = I − σ_n^N`,
//! applied as exact coefficient multipliers
//! `â(α) ↦ ∏_j (1 − α_j/(n+1))₊ â(α)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bohr::TorusPoly;
use crate::colegamelin::{extremal_raw, ExtremalSpec};
use crate::error::{Error, Result};
use crate::norms::{torus_norm_qmc, PExponent};
use crate::torus::{Estimate, SamplePlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FejerSpec {
    pub n: u32,
    pub nvars: usize,
}

impl FejerSpec {
    pub fn new(n: u32, nvars: usize) -> Self {
        Self { n, nvars }
    }

    /// Kernel weight of the monomial `z^α`.
    pub fn weight(&self, alpha: &[u32]) -> f64 {
        let denom = self.n as f64 + 1.0;
        alpha.iter().map(|&a| (1.0 - a as f64 / denom).max(0.0)).product()
    }

    fn check(&self, f: &TorusPoly) -> Result<()> {
        if f.nvars() > self.nvars {
            return Err(Error::Dimension { expected: f.nvars(), got: self.nvars });
        }
        Ok(())
    }
}

/// `σ_n^N F`.
pub fn fejer_apply(f: &TorusPoly, spec: &FejerSpec) -> Result<TorusPoly> {
    spec.check(f)?;
    Ok(f.map_coeffs(|alpha, c| c * spec.weight(alpha)))
}

/// `R_n^N F = F − σ_n^N F`, computed with the complementary weights.
pub fn fejer_remainder(f: &TorusPoly, spec: &FejerSpec) -> Result<TorusPoly> {
    spec.check(f)?;
    Ok(f.map_coeffs(|alpha, c| c * (1.0 - spec.weight(alpha))))
}

/// `nvars · d/(n+1) · ‖F‖₂`, a coefficientwise bound for `‖R_n F‖₂`, where
/// `d` is the largest per-variable degree of `F`.
pub fn remainder_bound(f: &TorusPoly, n: u32) -> f64 {
    f.nvars() as f64 * f.max_degree() as f64 / (n as f64 + 1.0) * f.l2_norm()
}

/// `‖σ_n(f · h_z)‖_{H_1}` with `h_z` the `p = 1` extremal at `z`.
///
/// `σ_n` only sees coefficients of degree `≤ n`, so `h_z` is truncated at
/// degree `n` exactly and no modulus guard applies.
pub fn smoothed_extremal_norm(f: &TorusPoly, z: &[Complex64], n: u32, plan: &SamplePlan) -> Result<Estimate> {
    let spec = ExtremalSpec::new(z.to_vec(), PExponent::int(1))?;
    let h = extremal_raw(&spec, n)?;
    let nvars = f.nvars().max(z.len());
    let g = f.with_nvars(nvars)?.product(&h.with_nvars(nvars)?);
    let smoothed = fejer_apply(&g, &FejerSpec::new(n, nvars))?;
    let plan = SamplePlan { nvars, ..plan.clone() };
    torus_norm_qmc(&smoothed, 1.0, &plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::DirichletPoly;
    use crate::bohr::bohr_lift;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z1(k: u32) -> TorusPoly {
        TorusPoly::from_terms(1, [(vec![k], c(1.0, 0.0))]).unwrap()
    }

    #[test]
    fn examples() {
        let spec = FejerSpec::new(1, 1);
        assert_eq!(fejer_apply(&z1(1), &spec).unwrap().coeff(&[1]), c(0.5, 0.0));
        assert_eq!(fejer_remainder(&z1(1), &spec).unwrap().coeff(&[1]), c(0.5, 0.0));
        assert!(fejer_apply(&z1(3), &spec).unwrap().is_zero());
        let k = TorusPoly::constant(1, c(2.0, -1.0));
        for n in [0, 1, 7] {
            let spec = FejerSpec::new(n, 3);
            assert_eq!(fejer_apply(&k, &spec).unwrap(), k);
            assert!(fejer_remainder(&k, &spec).unwrap().is_zero());
        }
    }

    #[test]
    fn one_dimensional_weights_match_cesaro_mean() {
        // (S_0 + … + S_n)/(n+1) keeps z^k with weight (n+1−k)/(n+1).
        let n = 5u32;
        let spec = FejerSpec::new(n, 1);
        for k in 0..=8u32 {
            let cesaro = (0..=n).filter(|&l| l >= k).count() as f64 / (n + 1) as f64;
            assert!((spec.weight(&[k]) - cesaro).abs() < 1e-15);
        }
    }

    #[test]
    fn dimension_guard() {
        let f = TorusPoly::from_terms(3, [(vec![0, 0, 1], c(1.0, 0.0))]).unwrap();
        assert!(fejer_apply(&f, &FejerSpec::new(2, 2)).is_err());
    }

    #[test]
    fn remainder_h1_decreases() {
        let d = DirichletPoly::from_real(&(1..=12).map(|n| (n, 1.0)).collect::<Vec<_>>()).unwrap();
        let f = bohr_lift(&d).unwrap();
        let plan = SamplePlan::random(f.nvars(), 1 << 16, 3);
        let norms: Vec<f64> = [1, 2, 4, 8, 16]
            .iter()
            .map(|&n| {
                let r = fejer_remainder(&f, &FejerSpec::new(n, f.nvars())).unwrap();
                torus_norm_qmc(&r, 1.0, &plan).unwrap().value
            })
            .collect();
        assert!(norms.windows(2).all(|w| w[1] < w[0]), "{norms:?}");
    }

    #[test]
    fn smoothed_extremal_decays() {
        let f = bohr_lift(&DirichletPoly::from_real(&[(1, 1.0), (2, 1.0)]).unwrap()).unwrap();
        let plan = SamplePlan::random(1, 1 << 14, 9);
        let v: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&r| smoothed_extremal_norm(&f, &[c(r, 0.0)], 4, &plan).unwrap().value)
            .collect();
        assert!(v[0] > v[1] && v[1] > v[2] && v[2] < 0.1, "{v:?}");
    }
}
