use kfree_core::numfield::{
    classify, dedekind_zeta, ideal_valuation, is_kfree_nf, lattice_covolume, prime_ideals_up_to, PrimeClass,
    PrimeIdealZr2, QuadInt,
};
use proptest::prelude::*;

fn quad() -> impl Strategy<Value = QuadInt> {
    (-3000i64..3000, -3000i64..3000).prop_map(|(a, b)| QuadInt::new(a, b))
}

proptest! {
    #[test]
    fn norm_is_multiplicative(x in quad(), y in quad()) {
        prop_assert_eq!((x * y).norm().abs(), x.norm().abs() * y.norm().abs());
    }

    #[test]
    fn valuation_is_additive(x in quad(), y in quad()) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        for id in prime_ideals_up_to(50).unwrap() {
            let v = ideal_valuation(&(x * y), &id).unwrap();
            prop_assert_eq!(v, ideal_valuation(&x, &id).unwrap() + ideal_valuation(&y, &id).unwrap(), "{}", id);
        }
    }

    #[test]
    fn kfree_is_unit_invariant(x in quad(), k in 1u32..=3) {
        prop_assume!(!x.is_zero());
        let expected = is_kfree_nf(&x, k).unwrap();
        let eps = QuadInt::EPSILON;
        let eps_inv = QuadInt::new(-1, 1);
        let mut units = vec![QuadInt::ONE, -QuadInt::ONE];
        let (mut up, mut down) = (QuadInt::ONE, QuadInt::ONE);
        for _ in 0..3 {
            up = up * eps;
            down = down * eps_inv;
            units.extend([up, -up, down, -down]);
        }
        for u in units {
            prop_assert_eq!(is_kfree_nf(&(u * x), k).unwrap(), expected, "{} * {}", u, x);
        }
    }
}

#[test]
fn prime_classes_are_complete() {
    let ideals = prime_ideals_up_to(10_000).unwrap();
    let mut seen = std::collections::BTreeMap::<u64, Vec<&PrimeIdealZr2>>::new();
    for id in &ideals {
        seen.entry(id.p).or_default().push(id);
    }
    for (p, ids) in seen {
        assert!(ids.iter().all(|i| i.class == classify(p)));
        match classify(p) {
            PrimeClass::Split => {
                assert_eq!(ids.len(), 2);
                for i in ids {
                    let g = i.generator;
                    assert_eq!((g.a as i128 * g.a as i128 - 2 * g.b as i128 * g.b as i128).unsigned_abs(), p as u128);
                }
            }
            PrimeClass::Inert => assert_eq!(ids[0].norm, p * p),
            PrimeClass::Ramified => assert_eq!(p, 2),
        }
    }
}

/// Partial sums of `N(a)^-2` over all ideals approach ζ_K(2).
#[test]
fn ideal_sum_matches_zeta() {
    let x: u64 = 200_000;
    let ideals = prime_ideals_up_to(x).unwrap();
    fn walk(ideals: &[PrimeIdealZr2], start: usize, norm: u64, limit: u64) -> f64 {
        let mut s = 1.0 / (norm as f64 * norm as f64);
        for i in start..ideals.len() {
            let mut n = norm * ideals[i].norm;
            if n > limit {
                break;
            }
            while n <= limit {
                s += walk(ideals, i + 1, n, limit);
                n *= ideals[i].norm;
            }
        }
        s
    }
    let partial = walk(&ideals, 0, 1, x);
    let z = dedekind_zeta(2.0, 1e-8).unwrap().value;
    // #{a : N(a) = n} <= d(n), so the tail is O(log X / X)
    assert!(partial < z && z - partial < 20.0 / x as f64, "{partial} vs {z}");
}

#[test]
fn covolume_is_root_discriminant() {
    assert!((lattice_covolume() - 8f64.sqrt()).abs() < 1e-15);
}
