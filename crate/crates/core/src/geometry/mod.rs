//! Exact rational geometry in barycentric coordinates.
//!
//! Points of the standard `k`-simplex `T = conv(e_1, …, e_{k+1})` are vectors
//! in `R^{k+1}` whose coordinates sum to one. Every other object in the crate
//! (dilates, hypersimplex cells, translates) is expressed in the same frame.

pub mod linalg;
pub mod lp;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::compositions;
use crate::error::{invalid, Error, Result};
use crate::rational::{self, Rational};
use linalg::Matrix;

/// Largest simplex dimension accepted at API boundaries.
pub const MAX_DIM: usize = 6;

pub(crate) fn check_dim(k: usize) -> Result<()> {
    if k == 0 || k > MAX_DIM {
        return Err(invalid(format!("dimension k = {k} outside 1..={MAX_DIM}")));
    }
    Ok(())
}

/// An exact point in `R^{k+1}` together with its coordinate sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaryPoint {
    #[serde(with = "rational::serde_text::vec")]
    coords: Vec<Rational>,
    #[serde(with = "rational::serde_text")]
    total: Rational,
}

impl BaryPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        let total = coords.iter().fold(Rational::zero(), |acc, c| acc + c);
        BaryPoint { coords, total }
    }

    /// The point `c / n` for an integer vector `c`.
    pub fn from_integers(c: &[u32], n: u32) -> Self {
        let den = BigInt::from(n);
        Self::new(c.iter().map(|&x| Rational::new(BigInt::from(x), den.clone())).collect())
    }

    /// Vertex `e_i` of the standard `k`-simplex (0-based `i`).
    pub fn vertex(k: usize, i: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[i] = Rational::one();
        Self::new(c)
    }

    pub fn barycenter(k: usize) -> Self {
        Self::new(vec![rational::frac(1, k as i64 + 1); k + 1])
    }

    /// Simplex dimension `k` (one less than the number of coordinates).
    pub fn dim(&self) -> usize {
        self.coords.len().saturating_sub(1)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    /// True when the point lies in the standard simplex.
    pub fn in_standard_simplex(&self) -> bool {
        self.total.is_one() && self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coords.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &BaryPoint) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    /// Arithmetic mean of equally sized points.
    pub fn mean(points: &[BaryPoint]) -> Self {
        let dim = points[0].coords.len();
        let mut acc = vec![Rational::zero(); dim];
        for p in points {
            for (a, c) in acc.iter_mut().zip(&p.coords) {
                *a += c;
            }
        }
        let inv = Rational::new(BigInt::one(), BigInt::from(points.len()));
        Self::new(acc.into_iter().map(|a| a * &inv).collect())
    }

    /// Integer coordinates of `scale · self`, if all of them are non-negative integers.
    pub fn to_lattice(&self, scale: u32) -> Option<Vec<u32>> {
        let s = Rational::from_integer(BigInt::from(scale));
        self.coords
            .iter()
            .map(|c| {
                let v = c * &s;
                if !v.is_integer() || v.is_negative() {
                    return None;
                }
                u32::try_from(v.to_integer()).ok()
            })
            .collect()
    }
}

impl std::fmt::Display for BaryPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(rational::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A non-degenerate `k`-simplex whose vertices share a common coordinate sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexGeom {
    vertices: Vec<BaryPoint>,
    /// Inverse of the matrix whose columns are the vertices.
    inverse: Matrix,
}

impl SimplexGeom {
    pub fn new(vertices: Vec<BaryPoint>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(invalid("simplex needs at least one vertex"));
        };
        let width = first.coords.len();
        if vertices.len() != width || vertices.iter().any(|v| v.coords.len() != width) {
            return Err(invalid(format!("a simplex in R^{width} needs {width} vertices of that length")));
        }
        if vertices.iter().any(|v| v.total != first.total) || first.total.is_zero() {
            return Err(invalid("simplex vertices must share a nonzero coordinate sum"));
        }
        let columns: Matrix = (0..width).map(|i| vertices.iter().map(|v| v.coords[i].clone()).collect()).collect();
        let inverse = linalg::inverse(&columns)
            .ok_or_else(|| Error::Degenerate("simplex vertices are affinely dependent".into()))?;
        Ok(SimplexGeom { vertices, inverse })
    }

    /// The standard simplex `T` of dimension `k`.
    pub fn standard(k: usize) -> Self {
        let vertices = (0..=k).map(|i| BaryPoint::vertex(k, i)).collect();
        SimplexGeom::new(vertices).expect("standard simplex is non-degenerate")
    }

    pub fn k(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[BaryPoint] {
        &self.vertices
    }

    pub fn barycenter(&self) -> BaryPoint {
        BaryPoint::mean(&self.vertices)
    }

    /// Coefficients `λ` with `Σ λ_i v_i = p`.
    pub fn barycentric(&self, p: &BaryPoint) -> Result<Vec<Rational>> {
        if p.coords.len() != self.vertices.len() {
            return Err(invalid(format!(
                "point has {} coordinates, simplex lives in R^{}",
                p.coords.len(),
                self.vertices.len()
            )));
        }
        Ok(linalg::mat_vec(&self.inverse, &p.coords))
    }

    /// Closed containment.
    pub fn contains(&self, p: &BaryPoint) -> Result<bool> {
        if p.total != self.vertices[0].total {
            self.barycentric(p)?;
            return Ok(false);
        }
        Ok(self.barycentric(p)?.iter().all(|l| !l.is_negative()))
    }

    /// Relative-interior containment.
    pub fn contains_interior(&self, p: &BaryPoint) -> Result<bool> {
        if p.total != self.vertices[0].total {
            self.barycentric(p)?;
            return Ok(false);
        }
        Ok(self.barycentric(p)?.iter().all(Signed::is_positive))
    }

    /// Signed determinant of the edge vectors `v_i - v_0` with the last
    /// coordinate dropped.
    pub fn chart_determinant(&self) -> Rational {
        chart_determinant(&self.vertices)
    }

    /// `vol(self) / vol(T)`.
    pub fn relative_volume(&self) -> Rational {
        relative_volume_of(&self.vertices)
    }
}

pub(crate) fn chart_determinant(vertices: &[BaryPoint]) -> Rational {
    let k = vertices.len() - 1;
    let base = &vertices[0].coords;
    let rows: Matrix = vertices[1..]
        .iter()
        .map(|v| (0..k).map(|j| &v.coords[j] - &base[j]).collect())
        .collect();
    linalg::determinant(&rows)
}

fn standard_chart_determinant(k: usize) -> Rational {
    let vertices: Vec<BaryPoint> = (0..=k).map(|i| BaryPoint::vertex(k, i)).collect();
    chart_determinant(&vertices)
}

pub(crate) fn relative_volume_of(vertices: &[BaryPoint]) -> Rational {
    (chart_determinant(vertices) / standard_chart_determinant(vertices.len() - 1)).abs()
}

/// Volume of `s` relative to the standard simplex of the same dimension.
pub fn relative_volume(s: &SimplexGeom) -> Result<Rational> {
    let v = s.relative_volume();
    if v.is_zero() {
        return Err(Error::Degenerate("simplex has zero volume".into()));
    }
    Ok(v)
}

/// Closed containment of `p` in `s`.
pub fn contains(s: &SimplexGeom, p: &BaryPoint) -> Result<bool> {
    s.contains(p)
}

/// The barycentric lattice `{c / N : c ∈ Z_{≥0}^{k+1}, Σ c = N}` in
/// lexicographic order of the integer vectors `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaryLattice {
    k: usize,
    resolution: u32,
    points: Vec<Vec<u32>>,
}

impl BaryLattice {
    pub fn new(k: usize, resolution: u32) -> Result<Self> {
        check_dim(k)?;
        if resolution == 0 {
            return Err(invalid("lattice resolution must be positive"));
        }
        Ok(BaryLattice { k, resolution, points: compositions::enumerate(resolution, k + 1) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integer coordinate vectors (scaled by the resolution).
    pub fn integer_points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn point(&self, index: usize) -> BaryPoint {
        BaryPoint::from_integers(&self.points[index], self.resolution)
    }

    pub fn points(&self) -> impl Iterator<Item = BaryPoint> + '_ {
        (0..self.points.len()).map(|i| self.point(i))
    }

    /// Index of an integer coordinate vector.
    pub fn index_of(&self, c: &[u32]) -> Option<usize> {
        (c.len() == self.k + 1 && c.iter().sum::<u32>() == self.resolution).then(|| compositions::rank(c))
    }

    /// Index of a rational point, when it lies on the lattice.
    pub fn index_of_point(&self, p: &BaryPoint) -> Option<usize> {
        p.to_lattice(self.resolution).and_then(|c| self.index_of(&c))
    }

    pub fn is_vertex(&self, index: usize) -> bool {
        self.points[index].contains(&self.resolution)
    }

    /// Indices of `e_1, …, e_{k+1}` in that order.
    pub fn vertex_indices(&self) -> Vec<usize> {
        (0..=self.k)
            .map(|i| {
                let mut c = vec![0; self.k + 1];
                c[i] = self.resolution;
                compositions::rank(&c)
            })
            .collect()
    }
}

/// Lattice of resolution `n` on the standard `k`-simplex.
pub fn lattice(k: usize, n: u32) -> Result<BaryLattice> {
    BaryLattice::new(k, n)
}
