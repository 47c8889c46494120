//! The JSON function file: `{"k": K, "N": N, "values": [[c_0, …, c_k, num, den], …]}`
//! with one entry per lattice point, in lattice order.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::envelope::SampledFunction;
use crate::error::{Error, Result};
use crate::geometry::{check_dim, BaryLattice};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub k: usize,
    #[serde(rename = "N")]
    pub resolution: u32,
    pub values: Vec<Vec<i64>>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

impl FunctionFile {
    pub fn from_function(f: &SampledFunction) -> Result<Self> {
        let values = f
            .lattice()
            .integer_points()
            .iter()
            .zip(f.values())
            .map(|(c, v)| {
                let num = v.numer().to_i64();
                let den = v.denom().to_i64();
                let (Some(num), Some(den)) = (num, den) else {
                    return Err(malformed(format!("value {v} does not fit in 64-bit integers")));
                };
                let mut row: Vec<i64> = c.iter().map(|&x| i64::from(x)).collect();
                row.extend([num, den]);
                Ok(row)
            })
            .collect::<Result<_>>()?;
        Ok(FunctionFile { k: f.k(), resolution: f.resolution(), values })
    }

    /// Validates the file against the lattice and builds the function.
    pub fn to_function(&self) -> Result<SampledFunction> {
        check_dim(self.k)?;
        let lattice = BaryLattice::new(self.k, self.resolution).map_err(|e| malformed(e.to_string()))?;
        if self.values.len() != lattice.len() {
            return Err(malformed(format!("{} entries for a lattice of {} points", self.values.len(), lattice.len())));
        }
        let mut values = Vec::with_capacity(lattice.len());
        for (i, (row, expected)) in self.values.iter().zip(lattice.integer_points()).enumerate() {
            if row.len() != self.k + 3 {
                return Err(malformed(format!("entry {i} has {} numbers, expected {}", row.len(), self.k + 3)));
            }
            let coords = &row[..=self.k];
            if coords.iter().zip(expected).any(|(&a, &b)| a != i64::from(b)) {
                return Err(malformed(format!("entry {i} is {coords:?}, expected lattice point {expected:?}")));
            }
            let (num, den) = (row[self.k + 1], row[self.k + 2]);
            if den <= 0 {
                return Err(malformed(format!("entry {i} has non-positive denominator {den}")));
            }
            values.push(Rational::new(BigInt::from(num), BigInt::from(den)));
        }
        SampledFunction::new(lattice, values)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| malformed(e.to_string()))
    }

    /// Canonical compact JSON; the hash is taken over these bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// True when the file's values are `0` at the vertices and one negative
    /// constant elsewhere; returns that constant's magnitude.
    pub(crate) fn indicator_depth(f: &SampledFunction) -> Option<Rational> {
        let lattice = f.lattice();
        let mut depth: Option<&Rational> = None;
        for (i, v) in f.values().iter().enumerate() {
            if lattice.is_vertex(i) {
                if !v.is_zero() {
                    return None;
                }
            } else {
                match depth {
                    None if v.is_negative() => depth = Some(v),
                    Some(d) if d == v => {}
                    _ => return None,
                }
            }
        }
        depth.map(|d| -d)
    }
}
