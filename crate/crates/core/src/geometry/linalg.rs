//! Dense exact linear algebra on small rational matrices.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<Rational>]) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            let (upper, lower) = a.split_at_mut(r);
            for (x, q) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= &factor * q;
            }
        }
    }
    det
}

/// Reduces `[a | rhs]` to reduced row echelon form in place and returns the
/// pivot column of each pivot row.
fn rref(a: &mut Matrix, rhs: &mut Matrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        rhs.swap(p, row);
        let inv = Rational::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for x in rhs[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot_row = a[row].clone();
            for (x, q) in a[r].iter_mut().zip(&pivot_row) {
                *x -= &factor * q;
            }
            for c in 0..rhs[r].len() {
                let delta = &factor * &rhs[row][c];
                rhs[r][c] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Matrix> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut rhs = identity(n);
    let pivots = rref(&mut a, &mut rhs);
    (pivots.len() == n).then_some(rhs)
}

/// Solves `a x = b` for a square nonsingular `a`.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    solve_unique(a, b)
}

/// Solves a possibly rectangular system, returning the solution only when it
/// exists and is unique.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut a = a.to_vec();
    let mut rhs: Matrix = b.iter().map(|x| vec![x.clone()]).collect();
    let pivots = rref(&mut a, &mut rhs);
    if pivots.len() != cols {
        return None;
    }
    if rhs[pivots.len()..].iter().any(|r| !r[0].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = rhs[row][0].clone();
    }
    Some(x)
}

/// Rank of a matrix.
pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    let mut rhs: Matrix = vec![Vec::new(); a.len()];
    rref(&mut a, &mut rhs).len()
}
