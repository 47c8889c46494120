//! Weak compositions of an integer: enumeration in lexicographic order and
//! the matching ranking function.
//!
//! A weak composition of `total` into `parts` parts is a vector of `parts`
//! non-negative integers summing to `total`. Lattice points of resolution `N`
//! on the `k`-simplex are exactly the compositions of `N` into `k + 1` parts.

/// Binomial coefficient `C(n, r)` in `u128`; zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Number of weak compositions of `total` into `parts` parts.
pub fn count(total: u32, parts: usize) -> usize {
    match parts {
        0 => usize::from(total == 0),
        _ => binomial(u64::from(total) + parts as u64 - 1, parts as u64 - 1) as usize,
    }
}

/// All weak compositions of `total` into `parts` parts, lexicographically ascending.
pub fn enumerate(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity(count(total, parts));
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut current = vec![0u32; parts];
    fill(&mut current, 0, total, &mut out);
    out
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(current.to_vec());
        return;
    }
    for a in 0..=remaining {
        current[pos] = a;
        fill(current, pos + 1, remaining - a, out);
    }
}

/// Index of `w` within `enumerate(sum(w), w.len())`.
pub fn rank(w: &[u32]) -> usize {
    let mut remaining: u32 = w.iter().sum();
    let mut index = 0usize;
    for (pos, &a) in w.iter().enumerate() {
        let rest = w.len() - pos - 1;
        if rest == 0 {
            break;
        }
        for smaller in 0..a {
            index += count(remaining - smaller, rest);
        }
        remaining -= a;
    }
    index
}
