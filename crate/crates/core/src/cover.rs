//! Good translates of `n^{-ℓ} T` and covering certificates built from them.
//!
//! A translate is stored as `(s T + u) / R` with `R = n^d`, `s = n^{d-ℓ}` and
//! `u` a non-negative integer vector with `Σ u = R - s`; `d ≥ ℓ` is the
//! depth. Offsets are canonical: the depth is lowered while `n` divides every
//! entry of `u` and `d > ℓ`. Starting from `T` (constant `0`), two rules
//! generate new good translates:
//!
//! * vertex rule: `((n-1) e_i + T') / n`, constant `1 + C' / n^{k+1}`;
//! * combination rule: `((n-1) T' + T'') / n` for `T'`, `T''` of one size,
//!   constant `1 + ((n-1) C' + C'') / n`.
//!
//! A family of good translates covering `T` with fewer than `n^{ℓ(k+1)}`
//! members yields the constant `(1 - |A| / n^{ℓ(k+1)}) / Σ C`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{pow, One, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{check_dim, BaryPoint, SimplexGeom};
use crate::rational::{self, Rational};
use crate::subdivision::{enumerate_b, CompositionVector, SubdivisionCell};

/// How a node of the derivation arena was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Derivation {
    Root,
    Vertex { vertex: usize, parent: usize },
    Combine { heavy: usize, light: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationNode {
    pub level: u32,
    pub depth: u32,
    pub offset: Vec<u64>,
    #[serde(with = "rational::serde_text")]
    pub constant: Rational,
    pub derivation: Derivation,
}

/// A translate of `n^{-level} T` inside `T` with a certified constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodTranslate {
    pub level: u32,
    pub depth: u32,
    /// Numerators over `n^depth`.
    pub offset: Vec<u64>,
    #[serde(with = "rational::serde_text")]
    pub constant: Rational,
    /// Index of the node in the derivation arena.
    pub node: usize,
}

impl GoodTranslate {
    /// The translate as a simplex.
    pub fn simplex(&self, n: u32) -> SimplexGeom {
        let k = self.offset.len() - 1;
        let r = BigInt::from(n).pow(self.depth);
        let s = BigInt::from(n).pow(self.depth - self.level);
        let vertices = (0..=k)
            .map(|i| {
                BaryPoint::new(
                    self.offset
                        .iter()
                        .enumerate()
                        .map(|(j, &u)| {
                            let top = BigInt::from(u) + if i == j { s.clone() } else { BigInt::zero() };
                            Rational::new(top, r.clone())
                        })
                        .collect(),
                )
            })
            .collect();
        SimplexGeom::new(vertices).expect("translates are non-degenerate")
    }

    /// Offset expressed at a deeper depth.
    fn offset_at(&self, n: u64, depth: u32) -> Vec<u64> {
        let f = n.pow(depth - self.depth);
        self.offset.iter().map(|&u| u * f).collect()
    }
}

/// Every good translate found, the arena of derivations, and whether a
/// budget cut the search short.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Closure {
    pub k: usize,
    pub n: u32,
    pub max_level: u32,
    pub refine: u32,
    pub translates: Vec<GoodTranslate>,
    pub nodes: Vec<DerivationNode>,
    pub truncated: bool,
    /// False when the round cap stopped constant improvements before a fixpoint.
    pub converged: bool,
}

impl Closure {
    pub fn at_level(&self, level: u32) -> Vec<GoodTranslate> {
        self.translates.iter().filter(|t| t.level == level).cloned().collect()
    }

    /// Re-derives a node's constant by replaying its trace.
    pub fn replay(&self, node: usize) -> Rational {
        let n = Rational::from_integer(BigInt::from(self.n));
        match &self.nodes[node].derivation {
            Derivation::Root => Rational::zero(),
            Derivation::Vertex { parent, .. } => Rational::one() + self.replay(*parent) / pow(n, self.k + 1),
            Derivation::Combine { heavy, light } => {
                Rational::one() + ((&n - Rational::one()) * self.replay(*heavy) + self.replay(*light)) / n
            }
        }
    }

    /// Re-derives a node's offset by replaying its trace.
    pub fn replay_offset(&self, node: usize) -> (u32, u32, Vec<u64>) {
        let n = u64::from(self.n);
        match &self.nodes[node].derivation {
            Derivation::Root => (0, 0, vec![0; self.k + 1]),
            Derivation::Vertex { vertex, parent } => {
                let (l, d, mut u) = self.replay_offset(*parent);
                u[*vertex] += (n - 1) * n.pow(d);
                canonical(n, l + 1, d + 1, u)
            }
            Derivation::Combine { heavy, light } => {
                let (l, da, ua) = self.replay_offset(*heavy);
                let (_, db, ub) = self.replay_offset(*light);
                let d = da.max(db);
                let u = ua
                    .iter()
                    .zip(&ub)
                    .map(|(&a, &b)| (n - 1) * a * n.pow(d - da) + b * n.pow(d - db))
                    .collect();
                canonical(n, l, d + 1, u)
            }
        }
    }
}

fn canonical(n: u64, level: u32, mut depth: u32, mut u: Vec<u64>) -> (u32, u32, Vec<u64>) {
    while depth > level && u.iter().all(|&x| x % n == 0) {
        u.iter_mut().for_each(|x| *x /= n);
        depth -= 1;
    }
    (level, depth, u)
}

/// Default cap on arena size.
pub const NODE_BUDGET: usize = 200_000;
const ROUND_CAP: usize = 64;

/// Closure under both rules up to `max_level`, with offsets on the level grid.
pub fn closure_good(k: usize, n: u32, max_level: u32) -> Result<Closure> {
    closure_refined(k, n, max_level, 0, NODE_BUDGET)
}

/// Closure allowing offsets down to depth `level + refine`.
pub fn closure_refined(k: usize, n: u32, max_level: u32, refine: u32, budget: usize) -> Result<Closure> {
    check_dim(k)?;
    if n < 2 {
        return Err(invalid("good translates need n >= 2"));
    }
    let nn = u64::from(n);
    let max_depth = max_level + refine;
    if nn.checked_pow(max_depth + 1).is_none_or(|r| r > 1 << 40) {
        return Err(Error::OutOfDomain(format!("n^{} is too large for the offset grid", max_depth + 1)));
    }
    let scale_vertex = Rational::from_integer(pow(BigInt::from(n), k + 1));
    let n_rat = Rational::from_integer(BigInt::from(n));
    let mut nodes = vec![DerivationNode {
        level: 0,
        depth: 0,
        offset: vec![0; k + 1],
        constant: Rational::zero(),
        derivation: Derivation::Root,
    }];
    // per level: (depth, offset) -> node index of the best known derivation
    let mut best: Vec<BTreeMap<(u32, Vec<u64>), usize>> = vec![BTreeMap::from([((0, vec![0; k + 1]), 0)])];
    let mut truncated = false;
    let mut converged = true;

    let offer = |nodes: &mut Vec<DerivationNode>,
                     table: &mut BTreeMap<(u32, Vec<u64>), usize>,
                     node: DerivationNode,
                     truncated: &mut bool|
     -> bool {
        let key = (node.depth, node.offset.clone());
        if let Some(&existing) = table.get(&key) {
            if nodes[existing].constant <= node.constant {
                return false;
            }
        }
        if nodes.len() >= budget {
            *truncated = true;
            return false;
        }
        nodes.push(node);
        table.insert(key, nodes.len() - 1);
        true
    };

    for level in 1..=max_level {
        let mut table = BTreeMap::new();
        let parents: Vec<usize> = best[level as usize - 1].values().copied().collect();
        for &p in &parents {
            for vertex in 0..=k {
                let parent = &nodes[p];
                let mut u = parent.offset.clone();
                u[vertex] += (nn - 1) * nn.pow(parent.depth);
                let (l, d, u) = canonical(nn, level, parent.depth + 1, u);
                let constant = Rational::one() + &parent.constant / &scale_vertex;
                let node = DerivationNode { level: l, depth: d, offset: u, constant, derivation: Derivation::Vertex { vertex, parent: p } };
                offer(&mut nodes, &mut table, node, &mut truncated);
            }
        }
        let mut rounds = 0;
        loop {
            let current: Vec<usize> = table.values().copied().collect();
            let mut changed = false;
            for &a in &current {
                for &b in &current {
                    if a == b {
                        continue;
                    }
                    let (na, nb) = (&nodes[a], &nodes[b]);
                    let d = na.depth.max(nb.depth);
                    let (l, depth, u) = canonical(nn, level, d + 1, combine(nn, na, nb, d));
                    if depth > level + refine {
                        continue;
                    }
                    let constant = Rational::one() + ((&n_rat - Rational::one()) * &na.constant + &nb.constant) / &n_rat;
                    let node = DerivationNode { level: l, depth, offset: u, constant, derivation: Derivation::Combine { heavy: a, light: b } };
                    changed |= offer(&mut nodes, &mut table, node, &mut truncated);
                }
            }
            rounds += 1;
            if !changed || truncated {
                break;
            }
            if rounds == ROUND_CAP {
                converged = false;
                break;
            }
        }
        best.push(table);
    }

    let translates = best
        .iter()
        .flat_map(|t| t.values())
        .map(|&i| {
            let nd = &nodes[i];
            GoodTranslate { level: nd.level, depth: nd.depth, offset: nd.offset.clone(), constant: nd.constant.clone(), node: i }
        })
        .collect();
    Ok(Closure { k, n, max_level, refine, translates, nodes, truncated, converged })
}

fn combine(n: u64, heavy: &DerivationNode, light: &DerivationNode, depth: u32) -> Vec<u64> {
    let fa = n.pow(depth - heavy.depth);
    let fb = n.pow(depth - light.depth);
    heavy.offset.iter().zip(&light.offset).map(|(&a, &b)| (n - 1) * a * fa + b * fb).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverCertificate {
    pub k: usize,
    pub n: u32,
    pub level: u32,
    /// Resolution `n^depth` of the subdivision the coverage was certified on.
    pub certified_depth: u32,
    pub family: Vec<GoodTranslate>,
    pub count: usize,
    #[serde(with = "rational::serde_text")]
    pub sum_constants: Rational,
    #[serde(with = "rational::serde_text")]
    pub derived_constant: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CoverOutcome {
    Found(CoverCertificate),
    /// Some subdivision cells fit in no candidate translate.
    Uncovered { level: u32, uncovered_cells: usize, total_cells: usize },
    /// A cover exists but is not smaller than `n^{ℓ(k+1)}`.
    TooLarge { level: u32, count: usize, limit: u128 },
}

impl CoverOutcome {
    pub fn certificate(&self) -> Option<&CoverCertificate> {
        match self {
            CoverOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

fn cell_inside(cell: &SubdivisionCell, t: &GoodTranslate, n: u64, depth: u32) -> bool {
    t.offset_at(n, depth).iter().zip(cell.v.entries()).all(|(&u, &v)| u64::from(v) >= u)
}

/// Greedy cover of the subdivision of `T` at resolution `n^D` (`D` the
/// deepest candidate) by level-`level` translates, each cell required to fit
/// inside one chosen translate.
pub fn find_cover(k: usize, n: u32, level: u32, goods: &[GoodTranslate]) -> Result<CoverOutcome> {
    check_dim(k)?;
    if goods.iter().any(|g| g.level != level || g.offset.len() != k + 1) {
        return Err(invalid("candidates must all be translates at the requested level"));
    }
    let nn = u64::from(n);
    let depth = goods.iter().map(|g| g.depth).max().unwrap_or(level).max(level);
    let resolution = u32::try_from(nn.pow(depth)).map_err(|_| Error::OutOfDomain("subdivision too fine".into()))?;
    let cells: Vec<SubdivisionCell> = (1..=k.min(resolution as usize))
        .flat_map(|m| enumerate_b(k, resolution - m as u32).into_iter().map(move |v| SubdivisionCell::new(k, resolution, m, v)))
        .collect();
    let covers: Vec<Vec<usize>> =
        goods.iter().map(|g| (0..cells.len()).filter(|&c| cell_inside(&cells[c], g, nn, depth)).collect()).collect();

    let mut covered = vec![false; cells.len()];
    let mut remaining = cells.len();
    let mut chosen: Vec<usize> = Vec::new();
    while remaining > 0 {
        let pick = (0..goods.len())
            .map(|g| (g, covers[g].iter().filter(|&&c| !covered[c]).count()))
            .filter(|&(_, gain)| gain > 0)
            .max_by(|&(a, ga), &(b, gb)| {
                ga.cmp(&gb)
                    .then_with(|| goods[b].constant.cmp(&goods[a].constant))
                    .then_with(|| goods[b].offset_at(nn, depth).cmp(&goods[a].offset_at(nn, depth)))
            });
        let Some((g, _)) = pick else {
            return Ok(CoverOutcome::Uncovered { level, uncovered_cells: remaining, total_cells: cells.len() });
        };
        for &c in &covers[g] {
            if !covered[c] {
                covered[c] = true;
                remaining -= 1;
            }
        }
        chosen.push(g);
    }
    let limit = u128::from(nn).pow(level * (k as u32 + 1));
    if chosen.len() as u128 >= limit {
        return Ok(CoverOutcome::TooLarge { level, count: chosen.len(), limit });
    }
    let family: Vec<GoodTranslate> = chosen.iter().map(|&g| goods[g].clone()).collect();

    // independent check: every cell's vertices and barycenter lie in one member
    let simplices: Vec<SimplexGeom> = family.iter().map(|t| t.simplex(n)).collect();
    for cell in &cells {
        let mut probes = cell.vertices();
        probes.push(cell.barycenter());
        let held = simplices.iter().any(|s| probes.iter().all(|p| s.contains(p).unwrap_or(false)));
        assert!(held, "greedy cover missed a cell");
    }

    let sum_constants = family.iter().fold(Rational::zero(), |acc, t| acc + &t.constant);
    let derived_constant = (Rational::one() - Rational::new(BigInt::from(family.len()), BigInt::from(limit))) / &sum_constants;
    Ok(CoverOutcome::Found(CoverCertificate {
        k,
        n,
        level,
        certified_depth: depth,
        count: family.len(),
        family,
        sum_constants,
        derived_constant,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverAttempt {
    pub level: u32,
    pub refine: u32,
    pub candidates: usize,
    pub outcome: CoverOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverSearch {
    pub k: usize,
    pub n: u32,
    pub attempts: Vec<CoverAttempt>,
    pub certificate: Option<CoverCertificate>,
    /// Derivation arena of the closure that produced the certificate.
    pub nodes: Vec<DerivationNode>,
    pub truncated: bool,
}

/// Tries levels `1..=max_level`, each with offset refinement `0..=max_refine`,
/// and stops at the first certificate.
pub fn search_cover(k: usize, n: u32, max_level: u32, max_refine: u32) -> Result<CoverSearch> {
    let mut attempts = Vec::new();
    let mut truncated = false;
    for level in 1..=max_level {
        for refine in 0..=max_refine {
            let closure = closure_refined(k, n, level, refine, NODE_BUDGET)?;
            truncated |= closure.truncated;
            let goods = closure.at_level(level);
            let outcome = find_cover(k, n, level, &goods)?;
            let certificate = outcome.certificate().cloned();
            attempts.push(CoverAttempt { level, refine, candidates: goods.len(), outcome });
            if let Some(c) = certificate {
                return Ok(CoverSearch { k, n, attempts, certificate: Some(c), nodes: closure.nodes, truncated });
            }
        }
    }
    Ok(CoverSearch { k, n, attempts, certificate: None, nodes: Vec::new(), truncated })
}

/// The `C(n, k)` translates `(k T + v) / n`, `v ∈ B_{k,n-k}`, after an exact
/// check that they cover every lattice point of resolution `n k`.
pub fn theorem13_cover(k: usize, n: u32) -> Result<Vec<(SimplexGeom, CompositionVector)>> {
    check_dim(k)?;
    if (n as usize) < k + 1 {
        return Err(Error::OutOfDomain(format!("the cover needs n >= k + 1, got n = {n}, k = {k}")));
    }
    let kk = k as u32;
    let inv_n = Rational::new(BigInt::one(), BigInt::from(n));
    let translates: Vec<(SimplexGeom, CompositionVector)> = enumerate_b(k, n - kk)
        .into_iter()
        .map(|v| {
            let verts = (0..=k)
                .map(|i| {
                    BaryPoint::new(
                        v.entries()
                            .iter()
                            .enumerate()
                            .map(|(j, &x)| Rational::from_integer(BigInt::from(x + if i == j { kk } else { 0 })) * &inv_n)
                            .collect(),
                    )
                })
                .collect();
            (SimplexGeom::new(verts).expect("translate is non-degenerate"), v)
        })
        .collect();
    let res = n * kk;
    for c in crate::compositions::enumerate(res, k + 1) {
        // y = c / (nk) lies in (kT + v)/n iff c ≥ k v
        let hit = translates.iter().find(|(_, v)| c.iter().zip(v.entries()).all(|(&ci, &vi)| ci >= kk * vi));
        let p = BaryPoint::from_integers(&c, res);
        let confirmed = hit.is_some_and(|(s, _)| s.contains(&p).unwrap_or(false));
        if !confirmed {
            return Err(Error::Degenerate(format!("{p} is not covered")));
        }
    }
    Ok(translates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compositions::binomial;
    use crate::rational::frac;

    #[test]
    fn segment_level_one() {
        let c = closure_good(1, 2, 1).unwrap();
        let goods = c.at_level(1);
        let offsets: Vec<(Vec<u64>, Rational)> = goods.iter().map(|g| (g.offset.clone(), g.constant.clone())).collect();
        assert_eq!(offsets, vec![(vec![0, 1], frac(1, 1)), (vec![1, 0], frac(1, 1))]);
        let zero = closure_good(1, 2, 0).unwrap();
        assert_eq!(zero.translates.len(), 1);
        assert_eq!(zero.translates[0].constant, frac(0, 1));
    }

    #[test]
    fn triangle_corners() {
        let c = closure_good(2, 2, 1).unwrap();
        let corners: Vec<_> = c.at_level(1).into_iter().filter(|g| g.offset.iter().filter(|&&x| x == 1).count() == 1).collect();
        assert_eq!(corners.len(), 3);
        assert!(corners.iter().all(|g| g.constant == frac(1, 1)));
    }

    #[test]
    fn segment_cover() {
        let goods = closure_good(1, 2, 1).unwrap().at_level(1);
        let cert = find_cover(1, 2, 1, &goods).unwrap();
        let cert = cert.certificate().unwrap();
        assert_eq!(cert.count, 2);
        assert_eq!(cert.sum_constants, frac(2, 1));
        assert_eq!(cert.derived_constant, frac(1, 4));
    }

    #[test]
    fn level_zero_is_too_large() {
        let goods = closure_good(1, 2, 0).unwrap().at_level(0);
        assert!(matches!(find_cover(1, 2, 0, &goods).unwrap(), CoverOutcome::TooLarge { .. }));
    }

    #[test]
    fn triangle_needs_refined_offsets() {
        let search = search_cover(2, 2, 2, 1).unwrap();
        let cert = search.certificate.unwrap();
        assert_eq!((cert.level, cert.count), (1, 6));
        assert_eq!(cert.sum_constants, frac(9, 1));
        assert_eq!(cert.derived_constant, frac(1, 36));
        assert!(matches!(search.attempts[0].outcome, CoverOutcome::Uncovered { .. }));
    }

    #[test]
    fn constants_replay() {
        let c = closure_refined(2, 2, 2, 1, NODE_BUDGET).unwrap();
        for t in &c.translates {
            assert_eq!(c.replay(t.node), t.constant);
            assert_eq!(c.replay_offset(t.node), (t.level, t.depth, t.offset.clone()));
            let s = t.simplex(2);
            assert!(s.vertices().iter().all(BaryPoint::in_standard_simplex));
        }
        assert!(!c.truncated);
    }

    #[test]
    fn tiny_budget_truncates() {
        let c = closure_refined(2, 2, 2, 1, 5).unwrap();
        assert!(c.truncated);
    }

    #[test]
    fn floor_cover_counts() {
        for k in 1..=3 {
            for n in (k as u32 + 1)..=8 {
                let t = theorem13_cover(k, n).unwrap();
                assert_eq!(t.len() as u128, binomial(u64::from(n), k as u64));
            }
        }
        assert!(matches!(theorem13_cover(2, 2), Err(Error::OutOfDomain(_))));
    }
}
