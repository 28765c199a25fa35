use kfree_core::patches::{
    frequency_closed, frequency_empirical, frequency_empirical_at, measure_b, patch_census, Patch,
};
use kfree_core::pointsets::{ball_points, is_admissible, DEFAULT_WINDOW_CAP};
use kfree_core::{FreenessSpec, Point};

fn subsets(w: &[Point]) -> Vec<Vec<Point>> {
    (0u32..1 << w.len())
        .map(|mask| w.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect())
        .collect()
}

#[test]
fn closed_frequencies_sum_to_one_below_unit_radius() {
    for spec in [FreenessSpec::visible(), FreenessSpec::kfree(2, 2).unwrap(), FreenessSpec::kfree(1, 2).unwrap()] {
        let n = spec.dim();
        let mut sum = 0.0;
        let mut tail = 0.0;
        for pts in subsets(&ball_points(n, 0.5)) {
            let f = frequency_closed(&spec, &Patch::new(n, 0.5, pts).unwrap(), 20).unwrap();
            sum += f.value;
            tail += f.tail_error;
        }
        assert!((sum - 1.0).abs() <= tail + 1e-15, "{spec}: {sum}");
        // the single-point window: ν({0}) is the density
        let one = frequency_closed(&spec, &Patch::new(n, 0.5, vec![vec![0; n]]).unwrap(), 20).unwrap();
        assert!((one.value / spec.density(1e-10).unwrap().value - 1.0).abs() < 1e-9);
        assert_eq!(measure_b(&spec, &[]).unwrap().value, 1.0);
    }
}

#[test]
fn census_mass_at_unit_radius() {
    let c = patch_census(&FreenessSpec::visible(), 1.0, 300.0, DEFAULT_WINDOW_CAP).unwrap();
    let total: f64 = c.patches.iter().map(|(_, n)| c.frequency(*n)).sum();
    assert!((total - 1.0).abs() < 0.01, "{total}");
    assert_eq!(c.observed(), 32);
}

#[test]
fn kfree_admissible_patches_have_positive_frequency() {
    for spec in [FreenessSpec::visible(), FreenessSpec::kfree(2, 2).unwrap()] {
        for rho in [1.0, 2f64.sqrt()] {
            for pts in subsets(&ball_points(2, rho)) {
                if !is_admissible(&spec, &pts).unwrap().admissible {
                    continue;
                }
                let f = frequency_closed(&spec, &Patch::new(2, rho, pts.clone()).unwrap(), 20).unwrap();
                // some frequencies (e.g. nine consecutive non-members) are far below
                // the summation error; those only have to be consistent with zero
                assert!(f.value > 0.0 || f.value.abs() <= f.tail_error, "{spec} ρ={rho} {pts:?}: {}", f.value);
                if f.value >= 1e-6 {
                    assert!(f.value > f.tail_error, "{spec} ρ={rho} {pts:?}: {} ± {}", f.value, f.tail_error);
                }
            }
        }
    }
}

#[test]
fn inadmissible_patches_never_occur() {
    let spec = FreenessSpec::visible();
    // all four classes mod 2
    let pts = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
    assert!(!is_admissible(&spec, &pts).unwrap().admissible);
    let p = Patch::new(2, 2f64.sqrt(), pts).unwrap();
    assert!(frequency_closed(&spec, &p, 20).unwrap().value.abs() < 1e-15);
    assert_eq!(frequency_empirical(&spec, &p, 100.0, DEFAULT_WINDOW_CAP).unwrap(), 0.0);
}

#[test]
fn empirical_frequency_is_translation_invariant() {
    let spec = FreenessSpec::visible();
    let r = 400.0;
    for pts in [vec![vec![0, 0]], vec![vec![-1, 0], vec![1, 0]], vec![]] {
        let p = Patch::new(2, 1.0, pts).unwrap();
        let base = frequency_empirical(&spec, &p, r, DEFAULT_WINDOW_CAP).unwrap();
        for c in [[1000i64, 0], [-3217, 999], [123_456, -654_321]] {
            let f = frequency_empirical_at(&spec, &p, &c, r, DEFAULT_WINDOW_CAP).unwrap();
            assert!((f - base).abs() < 5.0 / r, "{p} at {c:?}: {f} vs {base}");
        }
    }
}
