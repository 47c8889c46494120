//! Discrete sup-convolution over a barycentric lattice.
//!
//! With `f` sampled at resolution `N`, stage `j` of the table holds
//! `S_j(w) = max { f(x_1) + … + f(x_j) : x_i lattice points, Σ x_i = w }`
//! for every integer vector `w ≥ 0` with `Σ w = jN`. Then
//! `f^{*n}(z) = S_n(n z) / n`. Values are kept as integer numerators over
//! a common denominator so the inner loop is integer arithmetic.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::compositions;
use crate::envelope::SampledFunction;
use crate::error::{invalid, Result};
use crate::rational::{self, Rational};

struct Scaled {
    denominator: BigInt,
    numerators: Vec<BigInt>,
}

fn scale(f: &SampledFunction) -> Scaled {
    let denominator = rational::common_denominator(f.values());
    let numerators = f.values().iter().map(|v| (v * &denominator).to_integer()).collect();
    Scaled { denominator, numerators }
}

/// `max_x prev(w - x) + f(x)` over lattice points `x ≤ w`.
fn best_split(w: &[u32], points: &[Vec<u32>], f: &[BigInt], prev: impl Fn(&[u32]) -> BigInt) -> BigInt {
    let mut rest = vec![0u32; w.len()];
    let mut best: Option<BigInt> = None;
    for (x, fx) in points.iter().zip(f) {
        if x.iter().zip(w).any(|(a, b)| a > b) {
            continue;
        }
        for ((r, a), b) in rest.iter_mut().zip(x).zip(w) {
            *r = b - a;
        }
        let candidate = prev(&rest) + fx;
        if best.as_ref().is_none_or(|b| candidate > *b) {
            best = Some(candidate);
        }
    }
    best.expect("every composition splits into lattice points")
}

/// The full dynamic-programming table for `n` stages.
#[derive(Debug, Clone)]
pub struct SupConvTable {
    resolution: u32,
    parts: usize,
    denominator: BigInt,
    /// `stages[j - 1][rank(w)] = S_j(w) · denominator`.
    stages: Vec<Vec<BigInt>>,
}

impl SupConvTable {
    pub fn build(f: &SampledFunction, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("sup-convolution needs n >= 1"));
        }
        let Scaled { denominator, numerators } = scale(f);
        let points = f.lattice().integer_points();
        let parts = f.k() + 1;
        let mut stages = vec![numerators.clone()];
        for j in 2..=n {
            let prev = stages.last().unwrap();
            let states = compositions::enumerate(j * f.resolution(), parts);
            let next: Vec<BigInt> = states
                .par_iter()
                .map(|w| best_split(w, points, &numerators, |r| prev[compositions::rank(r)].clone()))
                .collect();
            stages.push(next);
        }
        Ok(SupConvTable { resolution: f.resolution(), parts, denominator, stages })
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    /// `S_j(w)` for `Σ w = jN`.
    pub fn best(&self, j: usize, w: &[u32]) -> Option<Rational> {
        if j == 0 || j > self.stages.len() || w.len() != self.parts {
            return None;
        }
        if w.iter().sum::<u32>() != j as u32 * self.resolution {
            return None;
        }
        Some(Rational::new(self.stages[j - 1][compositions::rank(w)].clone(), self.denominator.clone()))
    }

    /// Checks the recurrence at every state: `S_j(w) ≥ S_{j-1}(w - x) + f(x)`
    /// for all lattice `x ≤ w`, with equality for some `x`.
    pub fn is_optimal(&self, f: &SampledFunction) -> bool {
        let numerators = &self.stages[0];
        let points = f.lattice().integer_points();
        (2..=self.stages.len()).all(|j| {
            let prev = &self.stages[j - 2];
            compositions::enumerate(j as u32 * self.resolution, self.parts)
                .iter()
                .enumerate()
                .all(|(i, w)| self.stages[j - 1][i] == best_split(w, points, numerators, |r| prev[compositions::rank(r)].clone()))
        })
    }
}

/// `f^{*n}` restricted to lattice witnesses, at every lattice point.
pub fn sup_convolve_n(f: &SampledFunction, n: u32) -> Result<SampledFunction> {
    if n == 0 {
        return Err(invalid("sup-convolution needs n >= 1"));
    }
    if n == 1 {
        return Ok(f.clone());
    }
    // Stages 1..n-1 in full, then only the states n·c that the output needs.
    let head = SupConvTable::build(f, n - 1)?;
    let Scaled { denominator, numerators } = scale(f);
    let prev = head.stages.last().unwrap();
    let points = f.lattice().integer_points();
    let scale_out = Rational::from_integer(&denominator * BigInt::from(n));
    let values: Vec<Rational> = points
        .par_iter()
        .map(|c| {
            let w: Vec<u32> = c.iter().map(|&x| x * n).collect();
            let s = best_split(&w, points, &numerators, |r| prev[compositions::rank(r)].clone());
            Rational::from_integer(s) / &scale_out
        })
        .collect();
    SampledFunction::new(f.lattice().clone(), values)
}

/// `z ↦ max { (f(x) + g(y)) / 2 : x + y = 2z }` over lattice points `x, y`.
pub fn sup_convolve_pair(f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    if f.lattice() != g.lattice() {
        return Err(invalid("sup_convolve_pair needs both functions on the same lattice"));
    }
    let den = rational::common_denominator(f.values().iter().chain(g.values()));
    let fs: Vec<BigInt> = f.values().iter().map(|v| (v * &den).to_integer()).collect();
    let gs: Vec<BigInt> = g.values().iter().map(|v| (v * &den).to_integer()).collect();
    let points = f.lattice().integer_points();
    let lattice = f.lattice();
    let half = Rational::from_integer(den * BigInt::from(2));
    let values: Vec<Rational> = points
        .par_iter()
        .map(|c| {
            let w: Vec<u32> = c.iter().map(|&x| 2 * x).collect();
            let s = best_split(&w, points, &fs, |r| {
                lattice.index_of(r).map_or_else(|| unreachable!("remainder is a lattice point"), |i| gs[i].clone())
            });
            Rational::from_integer(s) / &half
        })
        .collect();
    SampledFunction::new(f.lattice().clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::envelope::concave_envelope;
    use crate::geometry::{lattice, BaryLattice};
    use crate::rational::{frac, int};

    fn rand_fn(lat: &BaryLattice, seed: u64) -> SampledFunction {
        let mut s = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
        SampledFunction::from_fn(lat.clone(), |_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            frac(-(((s >> 33) % 7) as i64), 3)
        })
    }

    /// Exhaustive search over all n-tuples of lattice points.
    fn brute_force(f: &SampledFunction, n: u32) -> Vec<Rational> {
        let pts = f.lattice().integer_points();
        let mut best: Vec<Option<Rational>> = vec![None; pts.len()];
        let mut tuple = vec![0usize; n as usize];
        loop {
            let mut sum = vec![0u32; f.k() + 1];
            let mut val = Rational::zero();
            for &i in &tuple {
                for (s, c) in sum.iter_mut().zip(&pts[i]) {
                    *s += c;
                }
                val += &f.values()[i];
            }
            if sum.iter().all(|s| s % n == 0) {
                let z: Vec<u32> = sum.iter().map(|s| s / n).collect();
                let zi = f.lattice().index_of(&z).unwrap();
                let v = val / int(i64::from(n));
                if best[zi].as_ref().is_none_or(|b| v > *b) {
                    best[zi] = Some(v);
                }
            }
            let mut p = 0;
            loop {
                if p == tuple.len() {
                    return best.into_iter().map(Option::unwrap).collect();
                }
                tuple[p] += 1;
                if tuple[p] < pts.len() {
                    break;
                }
                tuple[p] = 0;
                p += 1;
            }
        }
    }

    #[test]
    fn n_one_is_identity() {
        let f = rand_fn(&lattice(2, 4).unwrap(), 3);
        assert_eq!(sup_convolve_n(&f, 1).unwrap(), f);
        assert!(sup_convolve_n(&f, 0).is_err());
    }

    #[test]
    fn segment_example() {
        let lat = lattice(1, 4).unwrap();
        let f = SampledFunction::from_fn(lat, |c| if c.contains(&4) { int(0) } else { int(-1) });
        let g = sup_convolve_n(&f, 2).unwrap();
        // lattice order (0,4), (1,3), (2,2), (3,1), (4,0)
        assert_eq!(g.values(), &[int(0), frac(-1, 2), int(0), frac(-1, 2), int(0)]);
    }

    #[test]
    fn matches_brute_force() {
        for k in 1..=2 {
            for res in 1..=4 {
                for n in 2..=3 {
                    if k == 2 && res == 4 && n == 3 {
                        continue;
                    }
                    let f = rand_fn(&lattice(k, res).unwrap(), u64::from(res * 10 + n));
                    assert_eq!(sup_convolve_n(&f, n).unwrap().values(), &brute_force(&f, n)[..], "k={k} N={res} n={n}");
                }
            }
        }
    }

    #[test]
    fn table_is_optimal_and_consistent() {
        let f = rand_fn(&lattice(2, 3).unwrap(), 11);
        let table = SupConvTable::build(&f, 3).unwrap();
        assert_eq!(table.stage_count(), 3);
        assert!(table.is_optimal(&f));
        assert_eq!(table.best(1, &[1, 1, 1]).unwrap(), *f.value_at(&[1, 1, 1]).unwrap());
        let direct = sup_convolve_n(&f, 3).unwrap();
        for c in f.lattice().integer_points() {
            let w: Vec<u32> = c.iter().map(|x| 3 * x).collect();
            assert_eq!(table.best(3, &w).unwrap() / int(3), *direct.value_at(c).unwrap());
        }
    }

    #[test]
    fn pair_with_itself_is_two_fold() {
        let f = rand_fn(&lattice(2, 4).unwrap(), 5);
        assert_eq!(sup_convolve_pair(&f, &f).unwrap(), sup_convolve_n(&f, 2).unwrap());
    }

    #[test]
    fn pair_examples() {
        let lat = lattice(1, 2).unwrap();
        let ext = SampledFunction::new(lat.clone(), vec![int(0), int(-1), int(0)]).unwrap();
        let zero = SampledFunction::constant(lat, int(0));
        assert_eq!(sup_convolve_pair(&ext, &ext).unwrap().values(), &vec![int(0); 3][..]);
        assert_eq!(sup_convolve_pair(&ext, &zero).unwrap().values()[1], int(0));
        assert!(sup_convolve_pair(&ext, &SampledFunction::constant(lattice(1, 3).unwrap(), int(0))).is_err());
    }

    #[test]
    fn sandwiched_by_envelope() {
        for seed in 0..6 {
            let f = rand_fn(&lattice(2, 6).unwrap(), seed);
            let co = concave_envelope(&f).unwrap();
            for n in 2..=3 {
                let s = sup_convolve_n(&f, n).unwrap();
                for ((a, b), c) in f.values().iter().zip(s.values()).zip(&co.values) {
                    assert!(a <= b && b <= c);
                }
            }
        }
    }
}
