//! Multipliers between Hardy spaces of Dirichlet series, made computable for
//! Dirichlet polynomials.
//!
//! A Dirichlet polynomial `D = Σ a_n n^{-s}` is lifted through the prime
//! factorization `n = 𝔭^α` to an analytic polynomial `F(ω) = Σ a_n ω^α` on
//! the polytorus `T^N`. Every `H_p` norm, multiplier norm, spectrum and
//! closed-range question about `D` becomes a question about `F`.

pub mod arith;
pub mod bohr;
pub mod cloud;
pub mod colegamelin;
mod complex_json;
pub mod error;
pub mod fejer;
pub mod multipliers;
pub mod norms;
pub mod operators;
pub mod primes;
pub mod sum;
pub mod torus;

pub use arith::{dirichlet_product, factorize, unfactorize, Character, DirichletPoly, MultiIndex};
pub use bohr::{bohr_lift, bohr_transform, eval_lift, poly_product, TorusPoly};
pub use error::{Error, Result};
pub use multipliers::{classify, EssBracket, EssRegime, MultiplierClass, MultiplierSpace};
pub use nalgebra::DMatrix;
pub use norms::{HinfNorm, NormMethod, NormValue, PExponent};
pub use num_complex::Complex64;
pub use operators::{OperatorMatrix, RangeCertificate, SpectrumKind, SpectrumReport};
pub use torus::{EngineConfig, Estimate, Mode, SamplePlan, Scheme};
