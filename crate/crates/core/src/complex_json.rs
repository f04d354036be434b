//! Serde adapter writing complex vectors as `[{"re": …, "im": …}, …]`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct Parts {
    re: f64,
    im: f64,
}

pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| Parts { re: z.re, im: z.im }))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
    let parts = Vec::<Parts>::deserialize(d)?;
    Ok(parts.into_iter().map(|p| Complex64::new(p.re, p.im)).collect())
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Complex64>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.iter().map(|z| Parts { re: z.re, im: z.im }).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Complex64>>, D::Error> {
        let parts = Option::<Vec<Parts>>::deserialize(d)?;
        Ok(parts.map(|v| v.into_iter().map(|p| Complex64::new(p.re, p.im)).collect()))
    }
}
