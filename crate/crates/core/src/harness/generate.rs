//! Deterministic input generators.

use num_bigint::BigInt;

use crate::envelope::SampledFunction;
use crate::error::{invalid, Result};
use crate::geometry::BaryLattice;
use crate::rational::Rational;
use crate::rng::SplitMix64;

use super::file::FunctionFile;

/// `0` at the vertices and `-1` at every other lattice point.
pub fn make_extremal(k: usize, resolution: u32) -> Result<FunctionFile> {
    let lattice = BaryLattice::new(k, resolution)?;
    let f = SampledFunction::from_fn(lattice, |c| {
        if c.contains(&resolution) {
            Rational::from_integer(BigInt::from(0))
        } else {
            Rational::from_integer(BigInt::from(-1))
        }
    });
    FunctionFile::from_function(&f)
}

/// Random values in `[-1, 0]`, zero at the vertices.
///
/// Lattice points are visited in order and vertices are skipped without
/// drawing. For every other point one SplitMix64 draw `r` is taken; the point
/// is made rough when `r >> 32 < round(roughness · 2^32)`, in which case a
/// second draw `s` sets the value to `-((s mod 1024) + 1) / 1024`. All other
/// points are `0`, so roughness `0` gives the zero function.
pub fn make_random(k: usize, resolution: u32, seed: u64, roughness: f64) -> Result<FunctionFile> {
    if !(0.0..=1.0).contains(&roughness) {
        return Err(invalid(format!("roughness {roughness} outside [0, 1]")));
    }
    let lattice = BaryLattice::new(k, resolution)?;
    let threshold = (roughness * 4_294_967_296.0).round() as u64;
    let mut rng = SplitMix64::new(seed);
    let f = SampledFunction::from_fn(lattice, |c| {
        if c.contains(&resolution) {
            return Rational::from_integer(BigInt::from(0));
        }
        if rng.next_u64() >> 32 < threshold {
            let depth = (rng.next_u64() % 1024) as i64 + 1;
            Rational::new(BigInt::from(-depth), BigInt::from(1024))
        } else {
            Rational::from_integer(BigInt::from(0))
        }
    });
    FunctionFile::from_function(&f)
}
