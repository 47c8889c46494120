//! Exact simplex method for small linear programs in equality form:
//! maximize `c·x` subject to `A x = b`, `x ≥ 0`.
//!
//! Pivot selection is Dantzig's largest-reduced-cost rule, switching to
//! Bland's smallest-index rule for as long as pivots are degenerate, so the
//! method cannot cycle.

use num_traits::{One, Signed, Zero};

use super::linalg::Matrix;
use crate::error::{invalid, Result};
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub constraints: Matrix,
    pub rhs: Vec<Rational>,
    pub objective: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub value: Rational,
    /// Basic column per surviving constraint row.
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Matrix,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, objective: &[Rational], ncols: usize) -> Vec<Rational> {
        (0..ncols)
            .map(|j| {
                let mut d = objective[j].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !objective[b].is_zero() && !row[j].is_zero() {
                        d -= &objective[b] * &row[j];
                    }
                }
                d
            })
            .collect()
    }

    /// Runs primal simplex iterations over columns `0..ncols`. Returns `false` when unbounded.
    fn optimize(&mut self, objective: &[Rational], ncols: usize) -> bool {
        let mut bland = false;
        loop {
            let d = self.reduced_costs(objective, ncols);
            let entering = if bland {
                (0..ncols).find(|&j| d[j].is_positive())
            } else {
                (0..ncols).filter(|&j| d[j].is_positive()).max_by(|&a, &b| d[a].cmp(&d[b]).then(b.cmp(&a)))
            };
            let Some(c) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leaving {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            let Some((r, step)) = leaving else {
                return false;
            };
            bland = step.is_zero();
            self.pivot(r, c);
        }
    }

    fn solution(&self, objective: &[Rational], ncols: usize) -> LpSolution {
        let mut x = vec![Rational::zero(); ncols];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[r].clone();
        }
        let value = x.iter().zip(objective).fold(Rational::zero(), |acc, (a, c)| acc + a * c);
        LpSolution { x, value, basis: self.basis.clone() }
    }
}

impl LinearProgram {
    fn shape(&self) -> Result<(usize, usize)> {
        let m = self.constraints.len();
        let n = self.objective.len();
        if self.rhs.len() != m || self.constraints.iter().any(|r| r.len() != n) {
            return Err(invalid("linear program dimensions disagree"));
        }
        Ok((m, n))
    }

    /// Two-phase simplex from scratch.
    pub fn maximize(&self) -> Result<LpOutcome> {
        let (m, n) = self.shape()?;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (i, (row, b)) in self.constraints.iter().zip(&self.rhs).enumerate() {
            let flip = b.is_negative();
            let mut full: Vec<Rational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
            full.extend((0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            rows.push(full);
            rhs.push(if flip { -b } else { b.clone() });
        }
        let mut tab = Tableau { rows, rhs, basis: (n..n + m).collect() };
        let mut phase_one = vec![Rational::zero(); n + m];
        for c in phase_one.iter_mut().skip(n) {
            *c = -Rational::one();
        }
        tab.optimize(&phase_one, n + m);
        if tab.rhs.iter().zip(&tab.basis).any(|(v, &b)| b >= n && !v.is_zero()) {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis; rows where that is
        // impossible are redundant and dropped.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= n {
                if let Some(c) = (0..n).find(|&c| !tab.rows[r][c].is_zero()) {
                    tab.pivot(r, c);
                } else {
                    tab.rows.remove(r);
                    tab.rhs.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
        for row in tab.rows.iter_mut() {
            row.truncate(n);
        }
        Ok(self.finish(tab, n))
    }

    /// Simplex warm-started from a basis that must be primal feasible.
    pub fn maximize_from(&self, basis: &[usize]) -> Result<LpOutcome> {
        let (m, n) = self.shape()?;
        if basis.len() != m || basis.iter().any(|&b| b >= n) {
            return Err(invalid("starting basis has the wrong shape"));
        }
        let mut tab = Tableau { rows: self.constraints.clone(), rhs: self.rhs.clone(), basis: vec![usize::MAX; m] };
        let mut assigned = vec![false; m];
        for &c in basis {
            let r = (0..m)
                .find(|&r| !assigned[r] && !tab.rows[r][c].is_zero())
                .ok_or_else(|| invalid("starting basis is singular"))?;
            tab.pivot(r, c);
            assigned[r] = true;
        }
        if tab.rhs.iter().any(Signed::is_negative) {
            return Err(invalid("starting basis is infeasible"));
        }
        Ok(self.finish(tab, n))
    }

    fn finish(&self, mut tab: Tableau, n: usize) -> LpOutcome {
        if !tab.optimize(&self.objective, n) {
            return LpOutcome::Unbounded;
        }
        LpOutcome::Optimal(tab.solution(&self.objective, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 (slacks s1..s3)
        let lp = LinearProgram {
            constraints: vec![ints(&[1, 0, 1, 0, 0]), ints(&[0, 2, 0, 1, 0]), ints(&[3, 2, 0, 0, 1])],
            rhs: ints(&[4, 12, 18]),
            objective: ints(&[3, 5, 0, 0, 0]),
        };
        let sol = lp.maximize().unwrap().optimal().unwrap();
        assert_eq!(sol.value, int(36));
        assert_eq!(&sol.x[..2], &ints(&[2, 6])[..]);
        let warm = lp.maximize_from(&[2, 3, 4]).unwrap().optimal().unwrap();
        assert_eq!(warm.value, int(36));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let infeasible = LinearProgram {
            constraints: vec![ints(&[1, 1]), ints(&[1, 1])],
            rhs: ints(&[1, 2]),
            objective: ints(&[0, 0]),
        };
        assert_eq!(infeasible.maximize().unwrap(), LpOutcome::Infeasible);
        let unbounded = LinearProgram { constraints: vec![ints(&[1, -1])], rhs: ints(&[1]), objective: ints(&[1, 0]) };
        assert_eq!(unbounded.maximize().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let lp = LinearProgram {
            constraints: vec![ints(&[1, 1]), ints(&[2, 2])],
            rhs: vec![frac(1, 2), int(1)],
            objective: ints(&[1, 2]),
        };
        let sol = lp.maximize().unwrap().optimal().unwrap();
        assert_eq!(sol.value, int(1));
        assert_eq!(sol.basis.len(), 1);
    }
}
