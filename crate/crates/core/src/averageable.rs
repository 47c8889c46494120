//! Piecewise-affine self-maps of the simplex and exact verification of
//! averageability certificates.
//!
//! A set `S ⊂ T` is `m`-averageable when there are maps `H_1, …, H_m : T → T`,
//! each measure preserving and bijective up to a null set, whose pointwise
//! average maps `T` onto `S` bijectively (up to a null set) with constant
//! Jacobian `|S| / |T|`. Every check here is exact: volumes and determinants
//! are rationals, and interior-disjointness of two simplices is decided by an
//! exact linear program.

use num_bigint::BigInt;
use num_traits::{pow, One, Signed, Zero};
use serde::Serialize;

use crate::combinatorics::eulerian;
use crate::error::{invalid, Error, Result};
use crate::geometry::linalg::{self, Matrix};
use crate::geometry::lp::LinearProgram;
use crate::geometry::{self, check_dim, BaryLattice, BaryPoint, SimplexGeom};
use crate::envelope::SampledFunction;
use crate::rational::{self, Rational};
use crate::rng::SplitMix64;
use crate::supconv::SupConvTable;

/// `x ↦ linear · x + offset` on a domain simplex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePiece {
    pub domain: SimplexGeom,
    pub linear: Matrix,
    pub offset: Vec<Rational>,
}

impl AffinePiece {
    /// The linear map sending the domain's vertices to `images`, in order.
    pub fn from_vertex_images(domain: SimplexGeom, images: &[BaryPoint]) -> Result<Self> {
        let width = domain.k() + 1;
        if images.len() != width || images.iter().any(|p| p.coords().len() != width) {
            return Err(invalid("one image of matching width per domain vertex"));
        }
        let d: Matrix = (0..width).map(|r| domain.vertices().iter().map(|v| v.coords()[r].clone()).collect()).collect();
        let img: Matrix = (0..width).map(|r| images.iter().map(|v| v.coords()[r].clone()).collect()).collect();
        let inv = linalg::inverse(&d).expect("domain simplex is nonsingular");
        let linear = linalg::mat_mul(&img, &inv);
        Ok(AffinePiece { domain, linear, offset: vec![Rational::zero(); width] })
    }

    pub fn apply(&self, p: &BaryPoint) -> BaryPoint {
        let y = linalg::mat_vec(&self.linear, p.coords());
        BaryPoint::new(y.into_iter().zip(&self.offset).map(|(a, b)| a + b).collect())
    }

    pub fn image_vertices(&self) -> Vec<BaryPoint> {
        self.domain.vertices().iter().map(|v| self.apply(v)).collect()
    }

    /// Signed `k`-dimensional Jacobian in the fixed affine chart.
    pub fn jacobian(&self) -> Rational {
        geometry::chart_determinant(&self.image_vertices()) / self.domain.chart_determinant()
    }
}

/// A piecewise-affine map whose pieces' domains tile `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLMap {
    pub pieces: Vec<AffinePiece>,
}

impl PLMap {
    pub fn identity(k: usize) -> Self {
        let t = SimplexGeom::standard(k);
        let images = t.vertices().to_vec();
        PLMap { pieces: vec![AffinePiece::from_vertex_images(t, &images).unwrap()] }
    }

    /// Coordinate shift `e_i ↦ e_{i+s}` (indices mod `k + 1`).
    pub fn cyclic(k: usize, s: usize) -> Self {
        let t = SimplexGeom::standard(k);
        let images: Vec<BaryPoint> = (0..=k).map(|i| BaryPoint::vertex(k, (i + s) % (k + 1))).collect();
        PLMap { pieces: vec![AffinePiece::from_vertex_images(t, &images).unwrap()] }
    }

    /// Image under the first piece whose domain contains `p`.
    pub fn apply(&self, p: &BaryPoint) -> Option<BaryPoint> {
        self.pieces.iter().find(|pc| pc.domain.contains(p).unwrap_or(false)).map(|pc| pc.apply(p))
    }

    pub fn k(&self) -> usize {
        self.pieces[0].domain.k()
    }
}

/// The set `S` an averaged map should land on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// `(1/m) P_{k,m}`: coordinates in `[0, 1/m]` summing to one.
    Hypersimplex { m: usize },
    Simplex(SimplexGeom),
}

impl Target {
    pub fn relative_volume(&self, k: usize) -> Rational {
        match self {
            Target::Hypersimplex { m } => Rational::new(
                BigInt::from(eulerian(k, m - 1).expect("m within 1..=k")),
                pow(BigInt::from(*m), k),
            ),
            Target::Simplex(s) => s.relative_volume(),
        }
    }

    pub fn contains(&self, p: &BaryPoint) -> bool {
        match self {
            Target::Hypersimplex { m } => {
                let cap = Rational::new(BigInt::one(), BigInt::from(*m));
                p.total().is_one() && p.coords().iter().all(|c| !c.is_negative() && *c <= cap)
            }
            Target::Simplex(s) => s.contains(p).unwrap_or(false),
        }
    }

    pub fn description(&self) -> String {
        match self {
            Target::Hypersimplex { m } => format!("(1/{m}) P_{{k,{m}}}"),
            Target::Simplex(s) => {
                let v: Vec<String> = s.vertices().iter().map(ToString::to_string).collect();
                format!("conv{{{}}}", v.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AverageabilityCertificate {
    pub k: usize,
    pub m: usize,
    pub maps: Vec<PLMap>,
    pub target: Target,
    /// Images of the refinement domains under the averaged map.
    pub image_pieces: Vec<SimplexGeom>,
    pub jacobian: Rational,
    /// Domains on which every map is affine.
    pub refinement: Vec<SimplexGeom>,
}

fn check_pair(k: usize, m: usize) -> Result<()> {
    check_dim(k)?;
    let supported = k <= 4 && (m == 1 || m == k) || (k, m) == (3, 2);
    if supported {
        Ok(())
    } else {
        Err(Error::NotConstructed(format!("an {m}-averageable map for (1/{m}) P_{{{k},{m}}}")))
    }
}

fn midpoint(k: usize, i: usize, j: usize) -> BaryPoint {
    BaryPoint::mean(&[BaryPoint::vertex(k, i), BaryPoint::vertex(k, j)])
}

/// The four-piece map on the tetrahedron: `T = ∪ R_{i,i+1}` with
/// `R_{i,i+1} = conv(e_i, e_{i+1}, (e_1+e_3)/2, (e_2+e_4)/2)`, each piece
/// sent to the next by `e_i ↦ e_{i+1}`, `e_{i+1} ↦ e_{i+2}`, axis points fixed.
pub fn octahedron_map() -> PLMap {
    let (a, b) = (midpoint(3, 0, 2), midpoint(3, 1, 3));
    let pieces = (0..4)
        .map(|i| {
            let domain = SimplexGeom::new(vec![
                BaryPoint::vertex(3, i),
                BaryPoint::vertex(3, (i + 1) % 4),
                a.clone(),
                b.clone(),
            ])
            .unwrap();
            let images = [BaryPoint::vertex(3, (i + 1) % 4), BaryPoint::vertex(3, (i + 2) % 4), a.clone(), b.clone()];
            AffinePiece::from_vertex_images(domain, &images).unwrap()
        })
        .collect();
    PLMap { pieces }
}

/// Assembles a certificate: the averaged map is computed on the domains of the
/// map with the most pieces, which every other map must be affine on.
pub fn certificate(k: usize, maps: Vec<PLMap>, target: Target) -> Result<AverageabilityCertificate> {
    let finest = maps.iter().max_by_key(|mp| mp.pieces.len()).ok_or_else(|| invalid("no maps"))?;
    let refinement: Vec<SimplexGeom> = finest.pieces.iter().map(|p| p.domain.clone()).collect();
    let m = maps.len();
    let inv_m = Rational::new(BigInt::one(), BigInt::from(m));
    let mut image_pieces = Vec::with_capacity(refinement.len());
    for dom in &refinement {
        let mut avg = vec![BaryPoint::new(vec![Rational::zero(); k + 1]); k + 1];
        for map in &maps {
            for (acc, v) in avg.iter_mut().zip(dom.vertices()) {
                let image = map.apply(v).ok_or_else(|| invalid(format!("{v} lies outside every piece")))?;
                *acc = acc.add(&image);
            }
        }
        let verts: Vec<BaryPoint> = avg.iter().map(|p| p.scale(&inv_m)).collect();
        image_pieces.push(SimplexGeom::new(verts)?);
    }
    let jacobian = target.relative_volume(k);
    Ok(AverageabilityCertificate { k, m, maps, target, image_pieces, jacobian, refinement })
}

/// The constructions for `P_{k,1}`, `(1/k) P_{k,k}` and `(1/2) P_{3,2}`.
pub fn build_maps(k: usize, m: usize) -> Result<AverageabilityCertificate> {
    check_pair(k, m)?;
    let maps = if m == 1 {
        vec![PLMap::identity(k)]
    } else if m == k {
        (1..=k).map(|i| PLMap::cyclic(k, i)).collect()
    } else {
        vec![PLMap::identity(3), octahedron_map()]
    };
    certificate(k, maps, Target::Hypersimplex { m })
}

/// The tetrahedron example: `S` spanned by `e_4` and the medial triangle of
/// the opposite face, with `H_2` fixing `e_4` and cycling `e_1 → e_2 → e_3`.
pub fn build_medial_example() -> AverageabilityCertificate {
    let t = SimplexGeom::standard(3);
    let cycle: Vec<BaryPoint> = [1, 2, 0, 3].iter().map(|&i| BaryPoint::vertex(3, i)).collect();
    let h2 = PLMap { pieces: vec![AffinePiece::from_vertex_images(t, &cycle).unwrap()] };
    let s = SimplexGeom::new(vec![midpoint(3, 0, 1), midpoint(3, 1, 2), midpoint(3, 2, 0), BaryPoint::vertex(3, 3)])
        .expect("medial simplex is non-degenerate");
    certificate(3, vec![PLMap::identity(3), h2], Target::Simplex(s)).expect("medial maps are affine on T")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BaryPoint>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<CheckItem>,
    pub functional_trials: usize,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// A point in the common interior of two simplices, if there is one.
pub fn interior_intersection(a: &SimplexGeom, b: &SimplexGeom) -> Option<BaryPoint> {
    // variables: α (w), β (w), t, s (w), r (w); maximize t with
    // α_i - t - s_i = 0, β_j - t - r_j = 0, Σα = 1, Σβ = 1, Σ α a - Σ β b = 0
    let w = a.k() + 1;
    let cols = 4 * w + 1;
    let t = 2 * w;
    let mut rows: Matrix = Vec::new();
    let mut rhs = Vec::new();
    let blank = || vec![Rational::zero(); cols];
    for i in 0..w {
        for (var, slack) in [(i, t + 1 + i), (w + i, t + 1 + w + i)] {
            let mut r = blank();
            r[var] = Rational::one();
            r[t] = -Rational::one();
            r[slack] = -Rational::one();
            rows.push(r);
            rhs.push(Rational::zero());
        }
    }
    for half in 0..2 {
        let mut r = blank();
        for i in 0..w {
            r[half * w + i] = Rational::one();
        }
        rows.push(r);
        rhs.push(Rational::one());
    }
    for coord in 0..w - 1 {
        let mut r = blank();
        for i in 0..w {
            r[i] = a.vertices()[i].coords()[coord].clone();
            r[w + i] = -b.vertices()[i].coords()[coord].clone();
        }
        rows.push(r);
        rhs.push(Rational::zero());
    }
    let mut objective = blank();
    objective[t] = Rational::one();
    let lp = LinearProgram { constraints: rows, rhs, objective };
    let sol = lp.maximize().ok()?.optimal()?;
    if !sol.value.is_positive() {
        return None;
    }
    let coords = (0..w).fold(vec![Rational::zero(); w], |mut acc, i| {
        for (c, v) in acc.iter_mut().zip(a.vertices()[i].coords()) {
            *c += &sol.x[i] * v;
        }
        acc
    });
    Some(BaryPoint::new(coords))
}

fn tiling_check(name: String, simplices: &[SimplexGeom], expected_volume: &Rational) -> CheckItem {
    let total = simplices.iter().fold(Rational::zero(), |acc, s| acc + s.relative_volume());
    if total != *expected_volume {
        return CheckItem {
            name,
            passed: false,
            witness: simplices.first().map(SimplexGeom::barycenter),
            detail: format!("volumes sum to {}, expected {}", rational::format(&total), rational::format(expected_volume)),
        };
    }
    for i in 0..simplices.len() {
        for j in i + 1..simplices.len() {
            if let Some(p) = interior_intersection(&simplices[i], &simplices[j]) {
                return CheckItem { name, passed: false, witness: Some(p), detail: format!("pieces {i} and {j} overlap") };
            }
        }
    }
    CheckItem { name, passed: true, witness: None, detail: format!("{} pieces, volume {}", simplices.len(), rational::format(&total)) }
}

fn pass(name: String, detail: String) -> CheckItem {
    CheckItem { name, passed: true, witness: None, detail }
}

fn fail(name: String, witness: BaryPoint, detail: String) -> CheckItem {
    CheckItem { name, passed: false, witness: Some(witness), detail }
}

fn lattice_permutation(map: &PLMap, lattice: &BaryLattice) -> std::result::Result<Vec<usize>, BaryPoint> {
    let mut seen = vec![false; lattice.len()];
    let mut perm = Vec::with_capacity(lattice.len());
    for p in lattice.points() {
        let image = map.apply(&p).ok_or_else(|| p.clone())?;
        let idx = lattice.index_of_point(&image).ok_or_else(|| p.clone())?;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(p);
        }
        perm.push(idx);
    }
    Ok(perm)
}

/// Number of random functions used by the functional check.
pub const FUNCTIONAL_TRIALS: usize = 20;

/// Checks every certificate invariant exactly, then the integral inequality
/// `|S|/|T| · mean S_m(Σ H_i x)/m ≥ |S|/|T| · mean f` on random lattice
/// functions, which holds term by term once each `H_i` permutes the lattice.
pub fn verify_certificate(c: &AverageabilityCertificate) -> VerificationReport {
    let k = c.k;
    let t = SimplexGeom::standard(k);
    let one = Rational::one();
    let mut checks = Vec::new();

    for (mi, map) in c.maps.iter().enumerate() {
        let domains: Vec<SimplexGeom> = map.pieces.iter().map(|p| p.domain.clone()).collect();
        match domains.iter().flat_map(|d| d.vertices()).find(|v| !v.in_standard_simplex()) {
            Some(v) => checks.push(fail(format!("H{}.domains_in_T", mi + 1), v.clone(), "domain vertex outside T".into())),
            None => checks.push(pass(format!("H{}.domains_in_T", mi + 1), String::new())),
        }
        checks.push(tiling_check(format!("H{}.domains_tile_T", mi + 1), &domains, &one));
        match map.pieces.iter().find(|p| p.jacobian().abs() != one) {
            Some(p) => checks.push(fail(
                format!("H{}.unit_jacobian", mi + 1),
                p.domain.barycenter(),
                format!("|det| = {}", rational::format(&p.jacobian().abs())),
            )),
            None => checks.push(pass(format!("H{}.unit_jacobian", mi + 1), format!("{} pieces", map.pieces.len()))),
        }
        let images: Vec<Vec<BaryPoint>> = map.pieces.iter().map(AffinePiece::image_vertices).collect();
        match images.iter().flatten().find(|v| !t.contains(v).unwrap_or(false)) {
            Some(v) => checks.push(fail(format!("H{}.images_in_T", mi + 1), v.clone(), "image vertex outside T".into())),
            None => {
                checks.push(pass(format!("H{}.images_in_T", mi + 1), String::new()));
                match images.into_iter().map(SimplexGeom::new).collect::<Result<Vec<_>>>() {
                    Ok(simplices) => checks.push(tiling_check(format!("H{}.images_tile_T", mi + 1), &simplices, &one)),
                    Err(e) => checks.push(fail(format!("H{}.images_tile_T", mi + 1), t.barycenter(), e.to_string())),
                }
            }
        }
    }

    // every map must be affine on every refinement domain
    let unrefined = c.refinement.iter().find_map(|dom| {
        c.maps.iter().position(|map| !map.pieces.iter().any(|p| dom.vertices().iter().all(|v| p.domain.contains(v).unwrap_or(false))))
            .map(|mi| (dom.barycenter(), mi))
    });
    match unrefined {
        Some((w, mi)) => checks.push(fail("average.refines".into(), w, format!("H{} is not affine on a refinement domain", mi + 1))),
        None => checks.push(pass("average.refines".into(), format!("{} domains", c.refinement.len()))),
    }

    let expected = c.target.relative_volume(k);
    if c.jacobian != expected {
        checks.push(fail(
            "average.jacobian".into(),
            t.barycenter(),
            format!("recorded {} but |S|/|T| = {}", rational::format(&c.jacobian), rational::format(&expected)),
        ));
    } else {
        let bad = c.refinement.iter().zip(&c.image_pieces).find(|(d, s)| (s.chart_determinant() / d.chart_determinant()).abs() != c.jacobian);
        match bad {
            Some((d, _)) => checks.push(fail("average.jacobian".into(), d.barycenter(), "piece Jacobian differs".into())),
            None => checks.push(pass("average.jacobian".into(), rational::format(&c.jacobian))),
        }
    }
    match c.image_pieces.iter().flat_map(|s| s.vertices()).find(|v| !c.target.contains(v)) {
        Some(v) => checks.push(fail("average.images_in_S".into(), v.clone(), format!("outside {}", c.target.description()))),
        None => checks.push(pass("average.images_in_S".into(), c.target.description())),
    }
    checks.push(tiling_check("average.images_tile_S".into(), &c.image_pieces, &expected));

    let structural_ok = checks.iter().all(|ch| ch.passed);
    let mut functional_trials = 0;
    if structural_ok {
        let item = functional_check(c);
        functional_trials = if item.passed { FUNCTIONAL_TRIALS } else { 0 };
        checks.push(item);
    }
    VerificationReport { passed: checks.iter().all(|ch| ch.passed), checks, functional_trials }
}

fn functional_check(c: &AverageabilityCertificate) -> CheckItem {
    let name = "functional".to_string();
    let resolution = if c.k >= 3 { 4 } else { 6 };
    let lattice = BaryLattice::new(c.k, resolution).expect("k checked at construction");
    let mut perms = Vec::with_capacity(c.maps.len());
    for (mi, map) in c.maps.iter().enumerate() {
        match lattice_permutation(map, &lattice) {
            Ok(p) => perms.push(p),
            Err(w) => return fail(name, w, format!("H{} does not permute the resolution-{resolution} lattice", mi + 1)),
        }
    }
    let pts = lattice.integer_points();
    let mut rng = SplitMix64::new(0x5EED ^ (c.k as u64) << 8 ^ c.m as u64);
    for trial in 0..FUNCTIONAL_TRIALS {
        let f = SampledFunction::from_fn(lattice.clone(), |_| Rational::new(-BigInt::from(rng.below(1025)), BigInt::from(1024)));
        let table = SupConvTable::build(&f, c.m as u32).expect("m >= 1");
        let mut lhs = Rational::zero();
        for x in 0..pts.len() {
            let mut w = vec![0u32; c.k + 1];
            for perm in &perms {
                for (a, b) in w.iter_mut().zip(&pts[perm[x]]) {
                    *a += b;
                }
            }
            lhs += table.best(c.m, &w).expect("sum of m lattice points");
        }
        let count = Rational::from_integer(BigInt::from(pts.len()));
        let lhs = &c.jacobian * lhs / (count.clone() * Rational::from_integer(BigInt::from(c.m)));
        let rhs = &c.jacobian * f.mean();
        if lhs < rhs {
            return fail(name, BaryPoint::barycenter(c.k), format!("trial {trial}: {} < {}", rational::format(&lhs), rational::format(&rhs)));
        }
    }
    pass(name, format!("{FUNCTIONAL_TRIALS} random functions at resolution {resolution}"))
}
