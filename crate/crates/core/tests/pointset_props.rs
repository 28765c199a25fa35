use kfree_core::arith::gcd_coords;
use kfree_core::pointsets::{find_hole, generate, is_admissible, verify_hole, LatticeSieve, DEFAULT_WINDOW_CAP};
use kfree_core::{FreenessSpec, LatticeWindow};
use proptest::prelude::*;

fn apply(m: [[i64; 2]; 2], x: &[i64]) -> Vec<i64> {
    vec![m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

fn mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Products of elementary shears, swaps and reflections.
fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0u8..4, -3i64..=3), 1..6).prop_map(|ops| {
        ops.into_iter().fold([[1, 0], [0, 1]], |acc, (op, t)| {
            let e = match op {
                0 => [[1, t], [0, 1]],
                1 => [[1, 0], [t, 1]],
                2 => [[0, 1], [1, 0]],
                _ => [[-1, 0], [0, 1]],
            };
            mul(e, acc)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn visibility_is_unimodular_invariant(m in unimodular()) {
        let v = FreenessSpec::visible();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        prop_assert_eq!(det.abs(), 1);
        for a in -15i64..=15 {
            for b in -15i64..=15 {
                let x = [a, b];
                prop_assert_eq!(v.is_member(&x).unwrap(), v.is_member(&apply(m, &x)).unwrap());
            }
        }
    }

    #[test]
    fn subsets_of_admissible_sets_are_admissible(
        t in prop::collection::vec(-500i64..500, 2),
        mask in any::<u32>(),
        k in 1u32..=2,
    ) {
        let spec = FreenessSpec::kfree(2, k).unwrap();
        let window = LatticeWindow::ball_at(t.clone(), 2.0);
        let pts = generate(&spec, &window, DEFAULT_WINDOW_CAP).unwrap().points();
        prop_assert!(is_admissible(&spec, &pts).unwrap().admissible);
        let sub: Vec<_> = pts.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, x)| x.clone()).collect();
        prop_assert!(is_admissible(&spec, &sub).unwrap().admissible);
    }
}

#[test]
fn lattice_is_disjoint_union_of_scaled_copies() {
    let v = FreenessSpec::visible();
    for a in -40i64..=40 {
        for b in -40i64..=40 {
            if a == 0 && b == 0 {
                continue;
            }
            let hits: Vec<i64> = (1..=80)
                .filter(|&m| a % m == 0 && b % m == 0 && v.is_member(&[a / m, b / m]).unwrap())
                .collect();
            assert_eq!(hits, vec![gcd_coords(&[a, b]) as i64], "({a},{b})");
        }
    }
}

#[test]
fn difference_set_is_the_lattice() {
    let v = FreenessSpec::visible();
    let sieve = LatticeSieve::new(&v, vec![-40, -40], vec![40, 40], DEFAULT_WINDOW_CAP).unwrap();
    for a in -10i64..10 {
        for b in -10i64..10 {
            let found = (-20i64..=20).any(|c| {
                (-20i64..=20).any(|d| sieve.contains(&[a + c, b + d]) && sieve.contains(&[c, d]))
            });
            assert!(found, "({a},{b}) is not a difference of visible points");
        }
    }
}

#[test]
fn holes_survive_period_translates() {
    let specs = [
        (FreenessSpec::visible(), 1.0),
        (FreenessSpec::visible(), 1.5),
        (FreenessSpec::kfree(2, 2).unwrap(), 1.0),
        (FreenessSpec::bfree(2, vec![2, 3, 5, 7, 11]).unwrap(), 1.0),
    ];
    for (spec, rho) in specs {
        let hole = find_hole(&spec, rho).unwrap();
        let p = hole.period as i64;
        let c = &hole.center;
        for z in [c.clone(), vec![c[0] + p, c[1]], vec![c[0] - p, c[1] - p], vec![c[0], c[1] + 2 * p]] {
            let set = generate(&spec, &LatticeWindow::ball_at(z.clone(), rho), DEFAULT_WINDOW_CAP).unwrap();
            assert!(set.is_empty(), "{spec} ρ={rho} at {z:?}");
            assert!(verify_hole(&spec, &z, rho).unwrap());
        }
    }
}

#[test]
fn kfree_density_approaches_zeta() {
    let spec = FreenessSpec::kfree(2, 2).unwrap();
    let r = 1000.0;
    let set = generate(&spec, &LatticeWindow::ball(2, r), DEFAULT_WINDOW_CAP).unwrap();
    let d = set.len() as f64 / (std::f64::consts::PI * r * r);
    let target = spec.density(1e-10).unwrap().value;
    assert!((d / target - 1.0).abs() < 0.005, "{d} vs {target}");
}
