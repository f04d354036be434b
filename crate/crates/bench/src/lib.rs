//! Criterion benchmarks for the numerical kernels of `dirimul`; see
//! `benches/kernels.rs`.
