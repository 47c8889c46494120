//! Subdivision of the standard simplex into translates of hypersimplices.
//!
//! For `n ≥ 1` the simplex `T` is the union of the cells
//! `(P_{k,m} + v) / n` with `1 ≤ m ≤ min(k, n)` and `v ∈ B_{k,n-m}`, where
//! `P_{k,m} = [0,1]^{k+1} ∩ {Σ x = m}` and `B_{k,l}` is the set of weak
//! compositions of `l` into `k + 1` parts. A cell's interior is exactly the set
//! of points expressible as an `n`-average using `n - m` (and no more)
//! vertices of `T`, which is why the vertex-indicator function is constant on
//! each cell after `n`-fold sup-convolution.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{pow, One, Signed, Zero};
use serde::Serialize;

use crate::combinatorics::eulerian;
use crate::compositions::{self, binomial};
use crate::error::{invalid, Result};
use crate::geometry::{check_dim, BaryPoint};
use crate::rational::{self, Rational};

/// A vector of non-negative integers, used as the offset of a cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CompositionVector(Vec<u32>);

impl CompositionVector {
    pub fn new(entries: Vec<u32>) -> Self {
        CompositionVector(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// `B_{k,l}` in lexicographic order.
pub fn enumerate_b(k: usize, l: u32) -> Vec<CompositionVector> {
    compositions::enumerate(l, k + 1).into_iter().map(CompositionVector).collect()
}

/// Normalized volume of `P_{k,m}` (unimodular simplex = 1), by inclusion–exclusion
/// over the cube facets `x_i = 1`.
pub fn hypersimplex_volume(k: usize, m: usize) -> BigInt {
    (0..m).fold(BigInt::zero(), |acc, j| {
        let term = BigInt::from(binomial(k as u64 + 1, j as u64)) * pow(BigInt::from(m - j), k);
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// The cell `(P_{k,m} + v) / n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubdivisionCell {
    pub k: usize,
    pub n: u32,
    pub m: usize,
    pub v: CompositionVector,
    /// Level of `f^{*n}` on this cell for the vertex indicator: `(n - m)/n`.
    #[serde(with = "rational::serde_text")]
    pub value_on_cell: Rational,
}

impl SubdivisionCell {
    pub fn new(k: usize, n: u32, m: usize, v: CompositionVector) -> Self {
        let value_on_cell = Rational::new(BigInt::from(n) - BigInt::from(m), BigInt::from(n));
        SubdivisionCell { k, n, m, v, value_on_cell }
    }

    /// `A(k, m - 1) / n^k`.
    pub fn relative_volume(&self) -> Rational {
        let a = eulerian(self.k, self.m - 1).expect("m within 1..=k");
        Rational::new(BigInt::from(a), pow(BigInt::from(self.n), self.k))
    }

    /// Vertices: `(v + u) / n` for the 0/1 vectors `u` with `m` ones.
    pub fn vertices(&self) -> Vec<BaryPoint> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << (self.k + 1)) {
            if mask.count_ones() as usize != self.m {
                continue;
            }
            let c: Vec<u32> = self.v.0.iter().enumerate().map(|(i, &x)| x + ((mask >> i) & 1)).collect();
            out.push(BaryPoint::from_integers(&c, self.n));
        }
        out
    }

    pub fn barycenter(&self) -> BaryPoint {
        let shift = Rational::new(BigInt::from(self.m), BigInt::from(self.k + 1));
        let inv_n = Rational::new(BigInt::one(), BigInt::from(self.n));
        BaryPoint::new(self.v.0.iter().map(|&x| (Rational::from_integer(BigInt::from(x)) + &shift) * &inv_n).collect())
    }

    fn offsets<'a>(&'a self, z: &'a BaryPoint) -> Option<impl Iterator<Item = Rational> + 'a> {
        if z.coords().len() != self.k + 1 || !z.total().is_one() {
            return None;
        }
        let n = Rational::from_integer(BigInt::from(self.n));
        Some(z.coords().iter().zip(&self.v.0).map(move |(c, &v)| c * &n - Rational::from_integer(BigInt::from(v))))
    }

    /// Closed containment: `v ≤ n z ≤ v + 1` on the hyperplane `Σ z = 1`.
    pub fn contains(&self, z: &BaryPoint) -> bool {
        self.offsets(z).is_some_and(|mut it| it.all(|t| !t.is_negative() && t <= Rational::one()))
    }

    /// Relative-interior containment: `v < n z < v + 1`.
    pub fn contains_interior(&self, z: &BaryPoint) -> bool {
        self.offsets(z).is_some_and(|mut it| it.all(|t| t.is_positive() && t < Rational::one()))
    }

    /// Integer ranges `[lo, hi]` of the coordinates `c` of resolution-`res`
    /// lattice points strictly inside the cell.
    fn interior_ranges(&self, res: u32) -> Vec<(u32, u32)> {
        let (res, n) = (u64::from(res), u64::from(self.n));
        self.v
            .0
            .iter()
            .map(|&v| {
                let v = u64::from(v);
                // n c > res v  and  n c < res (v + 1)
                let lo = res * v / n + 1;
                let hi = (res * (v + 1)).div_ceil(n) - 1;
                (lo as u32, hi as u32)
            })
            .collect()
    }

    /// All lattice points of resolution `res` in the relative interior, as integer vectors.
    pub fn interior_lattice_points(&self, res: u32) -> Vec<Vec<u32>> {
        let ranges = self.interior_ranges(res);
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(ranges.len());
        collect_in_ranges(&ranges, res, &mut current, &mut out);
        out
    }
}

fn collect_in_ranges(ranges: &[(u32, u32)], remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let pos = current.len();
    if pos == ranges.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    let (lo, hi) = ranges[pos];
    let rest_min: u32 = ranges[pos + 1..].iter().map(|r| r.0).sum();
    let rest_max: u32 = ranges[pos + 1..].iter().map(|r| r.1.max(r.0)).sum();
    if lo > hi {
        return;
    }
    for c in lo..=hi.min(remaining) {
        let left = remaining - c;
        if left < rest_min || left > rest_max {
            continue;
        }
        current.push(c);
        collect_in_ranges(ranges, left, current, out);
        current.pop();
    }
}

/// Every cell of the subdivision of `T` at scale `1/n`, after exact checks
/// that the cells have distinct cube offsets (hence disjoint interiors) and
/// that their volumes sum to one.
pub fn subdivide(k: usize, n: u32) -> Result<Vec<SubdivisionCell>> {
    check_dim(k)?;
    if n == 0 {
        return Err(invalid("subdivide needs n >= 1"));
    }
    let mut cells = Vec::new();
    for m in 1..=k.min(n as usize) {
        for v in enumerate_b(k, n - m as u32) {
            cells.push(SubdivisionCell::new(k, n, m, v));
        }
    }
    let mut seen = HashSet::with_capacity(cells.len());
    assert!(cells.iter().all(|c| seen.insert(c.v.clone())), "cells share a cube offset");
    let scale = pow(BigInt::from(n), k);
    let total = cells.iter().fold(Rational::zero(), |acc, c| {
        let independent = Rational::new(hypersimplex_volume(k, c.m), scale.clone());
        assert_eq!(independent, c.relative_volume(), "hypersimplex volume disagrees with A(k, m-1)");
        acc + independent
    });
    assert!(total.is_one(), "cell volumes sum to {total}, not 1");
    Ok(cells)
}

/// Result of locating a point in the subdivision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub m: usize,
    pub v: CompositionVector,
    /// Set when the point lies on the boundary of its cell; the cell is then
    /// the one chosen by the floor rule, which is one of the incident cells.
    pub boundary: bool,
}

/// Locates `z` via `v = ⌊n z⌋`, `m = n - Σ v`.
pub fn classify_point(k: usize, n: u32, z: &BaryPoint) -> Result<Classification> {
    check_dim(k)?;
    if n == 0 {
        return Err(invalid("classify_point needs n >= 1"));
    }
    if z.dim() != k || !z.in_standard_simplex() {
        return Err(invalid(format!("{z} is not a point of the standard {k}-simplex")));
    }
    let scale = Rational::from_integer(BigInt::from(n));
    let mut v = Vec::with_capacity(k + 1);
    let mut boundary = false;
    for c in z.coords() {
        let scaled = c * &scale;
        boundary |= scaled.is_integer();
        v.push(u32::try_from(rational::floor_int(&scaled)).expect("coordinate within [0, n]"));
    }
    let mut m = n as usize - v.iter().sum::<u32>() as usize;
    if m == 0 {
        // z is a point of the resolution-n lattice; pick the first incident m = 1 cell.
        let i = v.iter().position(|&x| x > 0).expect("coordinates sum to n");
        v[i] -= 1;
        m = 1;
    }
    Ok(Classification { m, v: CompositionVector(v), boundary })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub m: usize,
    pub cell_count: u128,
    #[serde(with = "rational::serde_text")]
    pub cell_relative_volume: Rational,
    /// `(n - m)/n`, the level of `f^{*n}` for the vertex indicator.
    #[serde(with = "rational::serde_text")]
    pub value: Rational,
}

/// Analytic integrals for the vertex-indicator function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalProfile {
    pub k: usize,
    pub n: u32,
    pub per_m: Vec<ProfileRow>,
    #[serde(with = "rational::serde_text")]
    pub lhs_integral: Rational,
    #[serde(with = "rational::serde_text")]
    pub rhs_integral: Rational,
    #[serde(with = "rational::serde_text")]
    pub ratio: Rational,
}

/// Integrates `f^{*n} - f` and `co(f) - f` cell by cell for the normalized
/// vertex indicator (`0` at vertices, `-1` elsewhere, so `co(f) ≡ 0`).
pub fn extremal_profile(k: usize, n: u32) -> Result<ExtremalProfile> {
    check_dim(k)?;
    if n < 2 {
        return Err(invalid("extremal_profile needs n >= 2"));
    }
    let mut per_m = Vec::new();
    let mut lhs = Rational::zero();
    let mut covered = Rational::zero();
    let scale = pow(BigInt::from(n), k);
    for m in 1..=k.min(n as usize) {
        let cell_count = binomial(u64::from(n) + k as u64 - m as u64, k as u64);
        let vol = Rational::new(BigInt::from(eulerian(k, m - 1)?), scale.clone());
        let value = Rational::new(BigInt::from(n) - BigInt::from(m), BigInt::from(n));
        // normalized level is -m/n, so f^{*n} - f = 1 - m/n = value on the cell
        let mass = Rational::from_integer(BigInt::from(cell_count)) * &vol;
        lhs += &mass * &value;
        covered += mass;
        per_m.push(ProfileRow { m, cell_count, cell_relative_volume: vol, value });
    }
    assert!(covered.is_one(), "cells cover {covered} of T");
    let rhs = Rational::one();
    let ratio = &lhs / &rhs;
    Ok(ExtremalProfile { k, n, per_m, lhs_integral: lhs, rhs_integral: rhs, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::constant_c;
    use crate::rational::frac;

    fn pt(c: &[(i64, i64)]) -> BaryPoint {
        BaryPoint::new(c.iter().map(|&(p, q)| frac(p, q)).collect())
    }

    #[test]
    fn b_examples() {
        assert_eq!(enumerate_b(2, 2).len(), 6);
        let unit = enumerate_b(3, 1);
        assert_eq!(unit.len(), 4);
        assert!(unit.iter().all(|v| v.sum() == 1 && v.entries().iter().filter(|&&x| x == 1).count() == 1));
        assert_eq!(enumerate_b(2, 3).len(), 10);
    }

    #[test]
    fn figure_counts() {
        let cells = subdivide(2, 4).unwrap();
        assert_eq!(cells.iter().filter(|c| c.m == 1).count(), 10);
        assert_eq!(cells.iter().filter(|c| c.m == 2).count(), 6);
    }

    #[test]
    fn three_dimensional_halving() {
        let cells = subdivide(3, 2).unwrap();
        assert_eq!(cells.iter().filter(|c| c.m == 1).count(), 4);
        let octahedra: Vec<_> = cells.iter().filter(|c| c.m == 2).collect();
        assert_eq!(octahedra.len(), 1);
        assert_eq!(octahedra[0].vertices().len(), 6);
        assert_eq!(octahedra[0].relative_volume(), frac(1, 2));
    }

    #[test]
    fn one_dimensional_segments() {
        for n in 1..=7 {
            let cells = subdivide(1, n).unwrap();
            assert_eq!(cells.len(), n as usize);
            assert!(cells.iter().all(|c| c.m == 1));
        }
    }

    #[test]
    fn counts_and_volumes() {
        for k in 1..=3 {
            for n in 1..=6u32 {
                let cells = subdivide(k, n).unwrap();
                for m in 1..=k.min(n as usize) {
                    let count = cells.iter().filter(|c| c.m == m).count() as u128;
                    assert_eq!(count, binomial(u64::from(n) + k as u64 - m as u64, k as u64));
                }
            }
        }
    }

    #[test]
    fn hypersimplex_volumes_are_eulerian() {
        for k in 1..=6 {
            for m in 1..=k {
                assert_eq!(hypersimplex_volume(k, m), BigInt::from(eulerian(k, m - 1).unwrap()));
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify_point(2, 2, &pt(&[(1, 2), (1, 4), (1, 4)])).unwrap();
        assert_eq!((c.m, c.v.entries()), (1, &[1, 0, 0][..]));
        assert!(c.boundary);
        let c = classify_point(1, 3, &pt(&[(5, 6), (1, 6)])).unwrap();
        assert_eq!((c.m, c.v.entries(), c.boundary), (1, &[2, 0][..], false));
        let c = classify_point(2, 2, &BaryPoint::barycenter(2)).unwrap();
        assert_eq!((c.m, c.v.entries(), c.boundary), (2, &[0, 0, 0][..], false));
        let cell = SubdivisionCell::new(2, 2, 2, c.v.clone());
        assert!(cell.contains_interior(&BaryPoint::barycenter(2)));
    }

    #[test]
    fn classify_rejects_points_off_simplex() {
        assert!(classify_point(2, 2, &pt(&[(1, 2), (1, 2)])).is_err());
        assert!(classify_point(1, 2, &pt(&[(3, 2), (-1, 2)])).is_err());
    }

    #[test]
    fn classify_vertex_uses_incident_cell() {
        let c = classify_point(2, 3, &BaryPoint::vertex(2, 1)).unwrap();
        assert!(c.boundary);
        let cell = SubdivisionCell::new(2, 3, c.m, c.v);
        assert!(cell.contains(&BaryPoint::vertex(2, 1)));
    }

    #[test]
    fn interior_lattice_points_are_interior() {
        for cell in subdivide(2, 3).unwrap() {
            let pts = cell.interior_lattice_points(12);
            assert!(!pts.is_empty());
            for c in pts {
                assert!(cell.contains_interior(&BaryPoint::from_integers(&c, 12)));
            }
        }
        // the middle triangle of the n = 2 subdivision has no interior points at resolution 4
        let middle = SubdivisionCell::new(2, 2, 2, CompositionVector::new(vec![0, 0, 0]));
        assert!(middle.interior_lattice_points(4).is_empty());
    }

    #[test]
    fn extremal_examples() {
        assert_eq!(extremal_profile(1, 2).unwrap().ratio, frac(1, 2));
        assert_eq!(extremal_profile(2, 2).unwrap().ratio, frac(3, 8));
        assert_eq!(extremal_profile(3, 3).unwrap().ratio, frac(4, 9));
        for k in 1..=3 {
            for n in 2..=6u32 {
                let p = extremal_profile(k, n).unwrap();
                assert_eq!(p.ratio, constant_c(k, u64::from(n)).unwrap().c_conj_sum);
            }
        }
    }

    #[test]
    fn cell_vertices_lie_in_cell() {
        for cell in subdivide(3, 3).unwrap() {
            for v in cell.vertices() {
                assert!(cell.contains(&v));
                assert!(v.in_standard_simplex());
            }
            assert!(cell.contains_interior(&cell.barycenter()));
        }
    }
}
