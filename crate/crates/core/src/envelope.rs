//! Lattice-sampled functions on the standard simplex and their discrete
//! concave envelopes.
//!
//! The envelope at a lattice point `z` is
//! `max { Σ λ_j f(p_j) : Σ λ_j p_j = z, λ ≥ 0, Σ λ_j = 1 }` over lattice
//! points `p_j`. It is computed with an exact simplex solve per point; every
//! optimal basis yields an upper facet of the lifted point set, and those
//! facets are cached and reused for later points that fall inside them.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::linalg::{self, Matrix};
use crate::geometry::lp::LinearProgram;
use crate::geometry::BaryLattice;
use crate::rational::{self, Rational};

/// Rational values on every point of a barycentric lattice, indexed in the
/// lattice's order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledFunction {
    lattice: BaryLattice,
    values: Vec<Rational>,
}

impl SampledFunction {
    pub fn new(lattice: BaryLattice, values: Vec<Rational>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(invalid(format!("{} values for a lattice of {} points", values.len(), lattice.len())));
        }
        Ok(SampledFunction { lattice, values })
    }

    /// Samples `value(c)` at every integer coordinate vector `c`.
    pub fn from_fn(lattice: BaryLattice, mut value: impl FnMut(&[u32]) -> Rational) -> Self {
        let values = lattice.integer_points().iter().map(|c| value(c)).collect();
        SampledFunction { lattice, values }
    }

    pub fn constant(lattice: BaryLattice, c: Rational) -> Self {
        let values = vec![c; lattice.len()];
        SampledFunction { lattice, values }
    }

    /// The affine function `c ↦ Σ_i a_i c_i / N` (so `a_i` is its value at `e_i`).
    pub fn affine(lattice: BaryLattice, vertex_values: &[Rational]) -> Result<Self> {
        if vertex_values.len() != lattice.k() + 1 {
            return Err(invalid("affine function needs one value per vertex"));
        }
        let n = Rational::from_integer(BigInt::from(lattice.resolution()));
        Ok(Self::from_fn(lattice, |c| {
            c.iter()
                .zip(vertex_values)
                .fold(Rational::zero(), |acc, (&ci, a)| acc + a * Rational::from_integer(BigInt::from(ci)))
                / &n
        }))
    }

    pub fn lattice(&self) -> &BaryLattice {
        &self.lattice
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn k(&self) -> usize {
        self.lattice.k()
    }

    pub fn resolution(&self) -> u32 {
        self.lattice.resolution()
    }

    pub fn value_at(&self, c: &[u32]) -> Option<&Rational> {
        self.lattice.index_of(c).map(|i| &self.values[i])
    }

    pub fn map(&self, mut op: impl FnMut(&Rational) -> Rational) -> Self {
        SampledFunction { lattice: self.lattice.clone(), values: self.values.iter().map(&mut op).collect() }
    }

    pub fn add(&self, other: &SampledFunction) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SampledFunction) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &SampledFunction, op: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if self.lattice != other.lattice {
            return Err(invalid("functions live on different lattices"));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| op(a, b)).collect();
        Ok(SampledFunction { lattice: self.lattice.clone(), values })
    }

    /// Equal-weight mean over the lattice.
    pub fn mean(&self) -> Rational {
        let sum = self.values.iter().fold(Rational::zero(), |acc, v| acc + v);
        sum / Rational::from_integer(BigInt::from(self.values.len()))
    }

    /// Values at `e_1, …, e_{k+1}`.
    pub fn vertex_values(&self) -> Vec<Rational> {
        self.lattice.vertex_indices().into_iter().map(|i| self.values[i].clone()).collect()
    }
}

/// One term of a convex combination, by lattice index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportPoint {
    pub index: usize,
    #[serde(with = "rational::serde_text")]
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeResult {
    pub values: Vec<Rational>,
    /// Per lattice point, a convex combination of lattice points achieving the value.
    pub support_certificates: Vec<Vec<SupportPoint>>,
}

impl EnvelopeResult {
    pub fn as_function(&self, lattice: &BaryLattice) -> Result<SampledFunction> {
        SampledFunction::new(lattice.clone(), self.values.clone())
    }

    /// Exact check that every certificate reproduces its point and its value.
    pub fn certificates_valid(&self, f: &SampledFunction) -> bool {
        let pts = f.lattice().integer_points();
        self.support_certificates.iter().enumerate().all(|(z, cert)| {
            let mut pos = vec![Rational::zero(); f.k() + 1];
            let mut val = Rational::zero();
            let mut mass = Rational::zero();
            for s in cert {
                if s.weight.is_negative() {
                    return false;
                }
                for (p, &c) in pos.iter_mut().zip(&pts[s.index]) {
                    *p += &s.weight * Rational::from_integer(BigInt::from(c));
                }
                val += &s.weight * &f.values()[s.index];
                mass += &s.weight;
            }
            let target = pts[z].iter().map(|&c| Rational::from_integer(BigInt::from(c)));
            mass == Rational::from_integer(BigInt::from(1))
                && pos.iter().zip(target).all(|(a, b)| *a == b)
                && val == self.values[z]
        })
    }
}

/// An upper facet of the lifted points: a basis of `k + 1` lattice points,
/// the inverse of their coordinate matrix, and the dual vector `y` with
/// `y·c_j ≥ f(c_j)` for every lattice point.
struct Facet {
    basis: Vec<usize>,
    inverse: Matrix,
    dual: Vec<Rational>,
}

impl Facet {
    fn weights(&self, c: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.inverse, c)
    }

    fn bound(&self, c: &[Rational]) -> Rational {
        self.dual.iter().zip(c).fold(Rational::zero(), |acc, (y, x)| acc + y * x)
    }
}

fn column_matrix(pts: &[Vec<Rational>], basis: &[usize]) -> Matrix {
    let dim = pts[0].len();
    (0..dim).map(|r| basis.iter().map(|&j| pts[j][r].clone()).collect()).collect()
}

/// Computes `co(f)` at every lattice point, with certificates.
pub fn concave_envelope(f: &SampledFunction) -> Result<EnvelopeResult> {
    let lattice = f.lattice();
    let pts: Vec<Vec<Rational>> = lattice
        .integer_points()
        .iter()
        .map(|c| c.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
        .collect();
    let constraints = column_matrix(&pts, &(0..pts.len()).collect::<Vec<_>>());
    let start = lattice.vertex_indices();
    let mut facets: Vec<Facet> = Vec::new();
    let mut values = Vec::with_capacity(pts.len());
    let mut certificates = Vec::with_capacity(pts.len());

    for (z, cz) in pts.iter().enumerate() {
        // A facet whose dual touches f at z proves co(f)(z) = f(z).
        if facets.iter().any(|fa| fa.bound(cz) == f.values[z]) {
            values.push(f.values[z].clone());
            certificates.push(vec![SupportPoint { index: z, weight: Rational::from_integer(BigInt::from(1)) }]);
            continue;
        }
        if let Some((fa, w)) = facets.iter().find_map(|fa| {
            let w = fa.weights(cz);
            w.iter().all(|x| !x.is_negative()).then_some((fa, w))
        }) {
            values.push(fa.bound(cz));
            certificates.push(support(&fa.basis, &w));
            continue;
        }
        let lp = LinearProgram { constraints: constraints.clone(), rhs: cz.clone(), objective: f.values.clone() };
        let sol = lp
            .maximize_from(&start)?
            .optimal()
            .expect("envelope program is feasible and bounded");
        let a_b = column_matrix(&pts, &sol.basis);
        let inverse = linalg::inverse(&a_b).expect("optimal basis is nonsingular");
        let f_b: Vec<Rational> = sol.basis.iter().map(|&j| f.values[j].clone()).collect();
        let dual = linalg::mat_vec(&linalg::transpose(&inverse), &f_b);
        let fa = Facet { basis: sol.basis, inverse, dual };
        let w = fa.weights(cz);
        certificates.push(support(&fa.basis, &w));
        values.push(sol.value);
        facets.push(fa);
    }
    Ok(EnvelopeResult { values, support_certificates: certificates })
}

fn support(basis: &[usize], weights: &[Rational]) -> Vec<SupportPoint> {
    let mut out: Vec<SupportPoint> = basis
        .iter()
        .zip(weights)
        .filter(|(_, w)| w.is_positive())
        .map(|(&index, w)| SupportPoint { index, weight: w.clone() })
        .collect();
    out.sort_by_key(|s| s.index);
    out
}

/// Subtracts the affine function through the vertex values. A vertex is
/// always an extreme point, so `co(f)` agrees with `f` there and the result
/// vanishes at the vertices; it is `≤ 0` exactly when `co(f)` is affine.
pub fn normalize_to_simplex_form(f: &SampledFunction) -> Result<SampledFunction> {
    let affine = SampledFunction::affine(f.lattice().clone(), &f.vertex_values())?;
    f.sub(&affine)
}
