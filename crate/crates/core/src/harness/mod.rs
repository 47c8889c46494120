//! End-to-end inequality checks, input generators, the function file format
//! and figure output.
//!
//! Integrals are relative to `|T| = 1`. By default they are equal-weight
//! means over the lattice, which carry an `O(1/N)` discretization bias. When
//! the normalized input is `0` at the vertices and a single negative constant
//! `-a` elsewhere, the integrals are instead accumulated cell by cell over the
//! hypersimplex subdivision at scale `1/n`: each cell contributes its exact
//! volume times the computed value at its interior lattice points (or, if it
//! has none at resolution `N`, the analytic level `-a m / n`).

pub mod file;
pub mod generate;
pub mod svg;

use num_bigint::BigInt;
use num_traits::{pow, One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{constant_c, constant_low_dim};
use crate::envelope::{concave_envelope, normalize_to_simplex_form, SampledFunction};
use crate::error::{invalid, Error, Result};
use crate::rational::{self, Rational};
use crate::subdivision::subdivide;
use crate::supconv::{sup_convolve_n, sup_convolve_pair};

pub use file::FunctionFile;
pub use generate::{make_extremal, make_random};
pub use svg::emit_subdivision_svg;

/// Pass threshold slack: `tol = rel · rhs + abs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tolerance {
    #[serde(with = "rational::serde_text")]
    pub rel: Rational,
    #[serde(with = "rational::serde_text")]
    pub abs: Rational,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: rational::frac(1, 20), abs: Rational::new(BigInt::one(), pow(BigInt::from(10), 9)) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    PassDegenerate,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self != Verdict::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integration {
    LatticeMean,
    Cells,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub input_sha256: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    /// `n-fold` or `pair`.
    pub mode: String,
    pub k: usize,
    pub n: u32,
    #[serde(rename = "N")]
    pub resolution: u32,
    #[serde(with = "rational::serde_text")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_text")]
    pub rhs_raw: Rational,
    #[serde(with = "rational::serde_text")]
    pub constant: Rational,
    pub conjectural: bool,
    #[serde(with = "rational::serde_text::option")]
    pub ratio: Option<Rational>,
    #[serde(with = "rational::serde_text")]
    pub threshold: Rational,
    pub tolerance: Tolerance,
    pub verdict: Verdict,
    pub integration: Integration,
    /// Cells valued from lattice points / analytically (cell integration only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells_grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells_analytic: Option<usize>,
    pub provenance: Provenance,
}

struct Integrals {
    lhs: Rational,
    rhs: Rational,
    integration: Integration,
    cells_grid: Option<usize>,
    cells_analytic: Option<usize>,
}

fn lattice_mean(gap: &SampledFunction, deficit: &SampledFunction) -> Integrals {
    Integrals { lhs: gap.mean(), rhs: deficit.mean(), integration: Integration::LatticeMean, cells_grid: None, cells_analytic: None }
}

/// Cell accounting for the indicator shape of depth `a`: `conv` is the
/// convolved function, `co` the envelope. Each cell's level is the minimum of
/// `conv` over its interior lattice points.
fn cell_integrals(conv: &SampledFunction, co: &SampledFunction, n: u32, a: &Rational) -> Result<Integrals> {
    let k = conv.k();
    let res = conv.resolution();
    let (mut lhs, mut rhs) = (Rational::zero(), Rational::zero());
    let (mut grid, mut analytic) = (0, 0);
    for cell in subdivide(k, n)? {
        let vol = cell.relative_volume();
        let interior = cell.interior_lattice_points(res);
        let (level, envelope) = if interior.is_empty() {
            analytic += 1;
            let level = -(a * Rational::new(BigInt::from(cell.m), BigInt::from(n)));
            (level, Rational::zero())
        } else {
            grid += 1;
            let level = interior.iter().map(|c| conv.value_at(c).unwrap().clone()).min().unwrap();
            let envelope = interior.iter().map(|c| co.value_at(c).unwrap().clone()).min().unwrap();
            (level, envelope)
        };
        lhs += &vol * (level + a);
        rhs += &vol * (envelope + a);
    }
    Ok(Integrals { lhs, rhs, integration: Integration::Cells, cells_grid: Some(grid), cells_analytic: Some(analytic) })
}

#[allow(clippy::too_many_arguments)]
fn report(
    mode: &str,
    k: usize,
    n: u32,
    resolution: u32,
    ints: Integrals,
    constant: Rational,
    conjectural: bool,
    tolerance: &Tolerance,
    provenance: Provenance,
) -> InequalityReport {
    let Integrals { lhs, rhs, integration, cells_grid, cells_analytic } = ints;
    let slack = &tolerance.rel * &rhs + &tolerance.abs;
    let threshold = &constant * &rhs - slack;
    let (ratio, verdict) = if rhs.is_zero() {
        (None, if lhs.is_negative() { Verdict::Fail } else { Verdict::PassDegenerate })
    } else {
        (Some(&lhs / &rhs), if lhs >= threshold { Verdict::Pass } else { Verdict::Fail })
    };
    InequalityReport {
        mode: mode.to_string(),
        k,
        n,
        resolution,
        lhs,
        rhs_raw: rhs,
        constant,
        conjectural,
        ratio,
        threshold,
        tolerance: tolerance.clone(),
        verdict,
        integration,
        cells_grid,
        cells_analytic,
        provenance,
    }
}

fn provenance(files: &[&FunctionFile], seed: Option<u64>) -> Provenance {
    Provenance {
        input_sha256: files.iter().map(|f| f.sha256()).collect(),
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// `∫ f^{*n} - f ≥ c_{k,n} ∫ co(f) - f`, with the proven constant for `k ≤ 3`
/// and the conjectured one (flagged) above.
pub fn verify_theorem1(file: &FunctionFile, n: u32, tolerance: &Tolerance, seed: Option<u64>) -> Result<InequalityReport> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let f = normalize_to_simplex_form(&file.to_function()?)?;
    let k = f.k();
    let conv = sup_convolve_n(&f, n)?;
    let co = concave_envelope(&f)?.as_function(f.lattice())?;
    let ints = match FunctionFile::indicator_depth(&f) {
        Some(a) => cell_integrals(&conv, &co, n, &a)?,
        None => lattice_mean(&conv.sub(&f)?, &co.sub(&f)?),
    };
    let (constant, conjectural) = match constant_low_dim(k, u64::from(n)) {
        Some(c) => (c, false),
        None => (constant_c(k, u64::from(n))?.c_conj_sum, true),
    };
    Ok(report("n-fold", k, n, f.resolution(), ints, constant, conjectural, tolerance, provenance(&[file], seed)))
}

/// `∫ f∗g - (f+g)/2 ≥ (k+1)/2^{k+1} ∫ co(f) - f` for `k ≤ 3`.
pub fn verify_theorem4(
    f_file: &FunctionFile,
    g_file: &FunctionFile,
    tolerance: &Tolerance,
    seed: Option<u64>,
) -> Result<InequalityReport> {
    let f_raw = f_file.to_function()?;
    let g_raw = g_file.to_function()?;
    if f_raw.lattice() != g_raw.lattice() {
        return Err(invalid("f and g must be sampled on the same lattice"));
    }
    let k = f_raw.k();
    if k > 3 {
        return Err(Error::OutOfDomain(format!("the pair inequality is established for k <= 3, got k = {k}")));
    }
    // subtracting one affine function from both leaves every integrand unchanged
    let f = normalize_to_simplex_form(&f_raw)?;
    let g = g_raw.sub(&f_raw.sub(&f)?)?;
    let conv = sup_convolve_pair(&f, &g)?;
    let co = concave_envelope(&f)?.as_function(f.lattice())?;
    let ints = match (FunctionFile::indicator_depth(&f), f == g) {
        (Some(a), true) => cell_integrals(&conv, &co, 2, &a)?,
        _ => {
            let half = rational::frac(1, 2);
            let mid = f.add(&g)?.map(|v| v * &half);
            lattice_mean(&conv.sub(&mid)?, &co.sub(&f)?)
        }
    };
    let constant = Rational::new(BigInt::from(k + 1), pow(BigInt::from(2), k + 1));
    Ok(report("pair", k, 2, f.resolution(), ints, constant, false, tolerance, provenance(&[f_file, g_file], seed)))
}

/// Runs `verify_theorem1` on `trials` random inputs with seeds `seed, seed+1, …`.
pub fn random_suite_theorem1(
    k: usize,
    n: u32,
    resolution: u32,
    seed: u64,
    trials: usize,
    tolerance: &Tolerance,
) -> Result<Vec<InequalityReport>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let file = make_random(k, resolution, s, 1.0)?;
            verify_theorem1(&file, n, tolerance, Some(s))
        })
        .collect()
}

/// Runs `verify_theorem4` on `trials` random pairs; trial `i` uses seeds
/// `2(seed+i)` for `f` and `2(seed+i)+1` for `g`.
pub fn random_suite_theorem4(
    k: usize,
    resolution: u32,
    seed: u64,
    trials: usize,
    tolerance: &Tolerance,
) -> Result<Vec<InequalityReport>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i).wrapping_mul(2);
            let f = make_random(k, resolution, s, 1.0)?;
            let g = make_random(k, resolution, s + 1, 1.0)?;
            verify_theorem4(&f, &g, tolerance, Some(seed.wrapping_add(i)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn extremal_nfold() {
        let r = verify_theorem1(&make_extremal(2, 4).unwrap(), 2, &Tolerance::default(), None).unwrap();
        assert_eq!(r.ratio, Some(frac(3, 8)));
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.integration, Integration::Cells);
    }

    #[test]
    fn concave_input_is_degenerate() {
        let lat = crate::geometry::lattice(2, 4).unwrap();
        let f = SampledFunction::from_fn(lat, |c| {
            let x = Rational::from_integer(BigInt::from(c[0]));
            -(&x * &x) / Rational::from_integer(BigInt::from(16)) + Rational::from_integer(BigInt::from(c[1]))
        });
        let file = FunctionFile::from_function(&f).unwrap();
        let r = verify_theorem1(&file, 2, &Tolerance::default(), None).unwrap();
        assert_eq!(r.verdict, Verdict::PassDegenerate);
        assert!(r.ratio.is_none());
        let r4 = verify_theorem4(&file, &file, &Tolerance::default(), None).unwrap();
        assert_eq!(r4.verdict, Verdict::PassDegenerate);
    }

    #[test]
    fn extremal_pair() {
        let e = make_extremal(3, 4).unwrap();
        let r = verify_theorem4(&e, &e, &Tolerance::default(), None).unwrap();
        assert_eq!(r.ratio, Some(frac(1, 4)));
        assert!(r.verdict.passed());
        assert!(verify_theorem4(&make_extremal(4, 2).unwrap(), &make_extremal(4, 2).unwrap(), &Tolerance::default(), None).is_err());
    }

    #[test]
    fn pair_with_zero() {
        let f = make_extremal(1, 4).unwrap();
        let g = FunctionFile::from_function(&SampledFunction::constant(crate::geometry::lattice(1, 4).unwrap(), Rational::zero())).unwrap();
        let r = verify_theorem4(&f, &g, &Tolerance::default(), None).unwrap();
        assert_eq!(r.integration, Integration::LatticeMean);
        assert!(r.verdict.passed());
        assert!(verify_theorem4(&f, &make_extremal(1, 2).unwrap(), &Tolerance::default(), None).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let f = make_random(2, 6, 4, 0.7).unwrap();
        let a = serde_json::to_string(&verify_theorem1(&f, 2, &Tolerance::default(), Some(4)).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_theorem1(&f, 2, &Tolerance::default(), Some(4)).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(&f.sha256()));
    }
}
