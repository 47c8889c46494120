use num_bigint::BigInt;
use proptest::prelude::*;

use supconv_core::compositions::binomial;
use supconv_core::*;

fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

/// A lattice function with small integer-over-8 values in `[-2, 0]`.
fn sampled(k: usize, res: u32) -> impl Strategy<Value = SampledFunction> {
    let len = lattice(k, res).unwrap().len();
    prop::collection::vec(0i64..=16, len)
        .prop_map(move |v| SampledFunction::new(lattice(k, res).unwrap(), v.into_iter().map(|x| q(-x, 8)).collect()).unwrap())
}

fn small_function() -> impl Strategy<Value = SampledFunction> {
    (1usize..=2, 1u32..=8).prop_flat_map(|(k, res)| sampled(k, res))
}

fn affine_for(f: &SampledFunction, raw: &[i64]) -> SampledFunction {
    let a: Vec<Rational> = raw.iter().take(f.k() + 1).map(|&x| q(x, 3)).collect();
    SampledFunction::affine(f.lattice().clone(), &a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn lattice_sizes(k in 1usize..=4, n in 1u32..=12) {
        let lat = lattice(k, n).unwrap();
        prop_assert_eq!(lat.len() as u128, binomial(u64::from(n) + k as u64, k as u64));
        let t = SimplexGeom::standard(k);
        for p in lat.points() {
            prop_assert!(t.contains(&p).unwrap());
        }
    }

    #[test]
    fn volume_ignores_vertex_order(raw in prop::collection::vec(1i64..=20, 16), perm_seed in 0usize..24) {
        // a random simplex in the plane Σx = 1 for k = 3
        let vertices: Vec<BaryPoint> = raw
            .chunks(4)
            .map(|c| {
                let s: i64 = c.iter().sum();
                BaryPoint::new(c.iter().map(|&x| q(x, s)).collect())
            })
            .collect();
        let Ok(s) = SimplexGeom::new(vertices.clone()) else { return Ok(()); };
        let mut order: Vec<usize> = (0..4).collect();
        let mut seed = perm_seed;
        for i in (1..4).rev() {
            order.swap(i, seed % (i + 1));
            seed /= i + 1;
        }
        let permuted = SimplexGeom::new(order.iter().map(|&i| vertices[i].clone()).collect()).unwrap();
        prop_assert_eq!(s.relative_volume(), permuted.relative_volume());
        // relabelling coordinates
        let relabel = |p: &BaryPoint| BaryPoint::new(order.iter().map(|&i| p.coords()[i].clone()).collect());
        let moved = SimplexGeom::new(vertices.iter().map(relabel).collect()).unwrap();
        prop_assert_eq!(s.relative_volume(), moved.relative_volume());
    }

    #[test]
    fn envelope_invariants(f in small_function(), raw in prop::collection::vec(-9i64..=9, 3)) {
        let env = concave_envelope(&f).unwrap();
        prop_assert!(env.certificates_valid(&f));
        for (a, b) in f.values().iter().zip(&env.values) {
            prop_assert!(a <= b);
        }
        let co = env.as_function(f.lattice()).unwrap();
        prop_assert_eq!(&concave_envelope(&co).unwrap().values, &env.values);
        let aff = affine_for(&f, &raw);
        let shifted = concave_envelope(&f.add(&aff).unwrap()).unwrap().as_function(f.lattice()).unwrap();
        prop_assert_eq!(shifted, co.add(&aff).unwrap());
    }

    #[test]
    fn envelope_is_midpoint_concave(f in small_function()) {
        let co = concave_envelope(&f).unwrap().as_function(f.lattice()).unwrap();
        let pts = f.lattice().integer_points();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                if a.iter().zip(b).all(|(x, y)| (x + y) % 2 == 0) {
                    let mid: Vec<u32> = a.iter().zip(b).map(|(x, y)| (x + y) / 2).collect();
                    let avg = (co.value_at(a).unwrap() + co.value_at(b).unwrap()) / q(2, 1);
                    prop_assert!(*co.value_at(&mid).unwrap() >= avg);
                }
            }
        }
    }

    #[test]
    fn supconv_sandwich(f in small_function(), n in 1u32..=3) {
        let conv = sup_convolve_n(&f, n).unwrap();
        let co = concave_envelope(&f).unwrap();
        for ((a, b), c) in f.values().iter().zip(conv.values()).zip(&co.values) {
            prop_assert!(a <= b && b <= c);
        }
    }

    #[test]
    fn supconv_equivariance(f in small_function(), n in 2u32..=3, raw in prop::collection::vec(-9i64..=9, 3), num in 0i64..=9, den in 1i64..=5) {
        let base = sup_convolve_n(&f, n).unwrap();
        let aff = affine_for(&f, &raw);
        prop_assert_eq!(sup_convolve_n(&f.add(&aff).unwrap(), n).unwrap(), base.add(&aff).unwrap());
        let lambda = q(num, den);
        prop_assert_eq!(sup_convolve_n(&f.map(|v| v * &lambda), n).unwrap(), base.map(|v| v * &lambda));
    }

    #[test]
    fn pair_is_symmetric(fg in (1usize..=2, 1u32..=6).prop_flat_map(|(k, r)| (sampled(k, r), sampled(k, r)))) {
        let (f, g) = fg;
        prop_assert_eq!(sup_convolve_pair(&f, &g).unwrap(), sup_convolve_pair(&g, &f).unwrap());
    }

    #[test]
    fn eulerian_symmetry(k in 1usize..=6, l in 0usize..6) {
        prop_assume!(l < k);
        prop_assert_eq!(eulerian(k, l).unwrap(), eulerian(k, k - 1 - l).unwrap());
    }

    #[test]
    fn classification_is_unique(k in 1usize..=3, n in 1u32..=6, raw in prop::collection::vec(1i64..=997, 4)) {
        let w = &raw[..=k];
        let s: i64 = w.iter().sum();
        let z = BaryPoint::new(w.iter().map(|&x| q(x, s)).collect());
        let c = classify_point(k, n, &z).unwrap();
        let cells = subdivide(k, n).unwrap();
        let holding: Vec<_> = cells.iter().filter(|cell| cell.contains(&z)).collect();
        prop_assert!(holding.iter().any(|cell| cell.m == c.m && cell.v == c.v));
        if !c.boundary {
            prop_assert_eq!(holding.len(), 1);
        }
    }
}
