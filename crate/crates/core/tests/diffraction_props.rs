use kfree_core::diffraction::{
    intensity, support_enumerate, write_atoms_csv, write_svg, FigureStyle, PlotAtom, RationalBox, RationalPoint,
};
use kfree_core::pointsets::DEFAULT_WINDOW_CAP;
use kfree_core::FreenessSpec;
use num_rational::Ratio;
use proptest::prelude::*;
use sha2::{Digest, Sha256};

fn specs() -> Vec<FreenessSpec> {
    vec![
        FreenessSpec::visible(),
        FreenessSpec::kfree(2, 2).unwrap(),
        FreenessSpec::bfree(2, vec![2, 3, 5]).unwrap(),
    ]
}

proptest! {
    #[test]
    fn intensity_has_lattice_periods(a in -50i64..50, b in -50i64..50, den in 1u64..200, v in prop::collection::vec(-20i64..20, 2)) {
        let l = RationalPoint::new(vec![a, b], den).unwrap();
        for spec in specs() {
            prop_assert_eq!(intensity(&spec, &l).unwrap(), intensity(&spec, &l.translate(&v)).unwrap());
        }
    }

    #[test]
    fn intensity_is_symmetric(a in -50i64..50, b in -50i64..50, den in 1u64..200) {
        let spec = FreenessSpec::visible();
        let i = intensity(&spec, &RationalPoint::new(vec![a, b], den).unwrap()).unwrap();
        for (x, y) in [(b, a), (-a, b), (a, -b), (-b, -a)] {
            prop_assert_eq!(i, intensity(&spec, &RationalPoint::new(vec![x, y], den).unwrap()).unwrap());
        }
    }

    #[test]
    fn extra_prime_in_denominator_lowers_intensity(den in 1u64..500, a in 1i64..1000) {
        let spec = FreenessSpec::visible();
        for p in [2u64, 3, 5, 7, 11, 13] {
            if den % p == 0 {
                continue;
            }
            let l = RationalPoint::new(vec![a, 1], den).unwrap();
            let lp = RationalPoint::new(vec![a * p as i64 + den as i64, p as i64], den * p).unwrap();
            prop_assert_eq!(lp.den(), den * p);
            let (i, ip) = (intensity(&spec, &l).unwrap(), intensity(&spec, &lp).unwrap());
            prop_assert!(ip < i || i == 0.0, "{} -> {}", i, ip);
        }
    }
}

#[test]
fn no_extinctions_on_support() {
    let window = RationalBox::cube(2, Ratio::from_integer(0), Ratio::from_integer(1), true);
    for spec in specs() {
        let atoms = support_enumerate(&spec, &window, 1e-5, DEFAULT_WINDOW_CAP).unwrap();
        assert!(!atoms.is_empty());
        for a in atoms {
            assert!(a.intensity > 0.0, "{spec} {}", a.position);
        }
    }
}

fn fig2() -> (Vec<PlotAtom>, Vec<String>) {
    let spec = FreenessSpec::visible();
    let window = RationalBox::cube(2, Ratio::from_integer(0), Ratio::from_integer(2), false);
    let atoms = support_enumerate(&spec, &window, 1e-6, DEFAULT_WINDOW_CAP).unwrap();
    let plot: Vec<PlotAtom> = atoms.iter().map(PlotAtom::from).collect();
    (plot, vec!["spec: visible".into(), "window: [0,2]^2".into(), "threshold: 1e-6".into()])
}

fn sha(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Figure bytes are pinned; any change to the atom set, ordering or
/// formatting shows up here.
#[test]
fn visible_points_figure_is_stable() {
    let (plot, prov) = fig2();
    assert_eq!(plot.len(), 30705);
    let mut svg = Vec::new();
    write_svg(&plot, FigureStyle::AreaProportional, ([0.0, 0.0], [2.0, 2.0]), &prov, &mut svg).unwrap();
    let mut csv = Vec::new();
    write_atoms_csv(&plot, 2, &prov, &mut csv).unwrap();
    let (again, _) = fig2();
    let mut svg2 = Vec::new();
    write_svg(&again, FigureStyle::AreaProportional, ([0.0, 0.0], [2.0, 2.0]), &prov, &mut svg2).unwrap();
    assert_eq!(svg, svg2);
    let csv_text = String::from_utf8(csv.clone()).unwrap();
    assert!(csv_text.lines().any(|l| l.starts_with("0.5000000000,0.0000000000,")));
    assert_eq!(sha(&svg), GOLDEN_SVG);
    assert_eq!(sha(&csv), GOLDEN_CSV);
}

const GOLDEN_SVG: &str = "114b6b9b3793c3c7ffd72d064d1872404d264660d3fe84ae5f154b5bdfc9e741";
const GOLDEN_CSV: &str = "be42ea994527bc35e16c548ad524f1fea278c0a62f8fca05c756905e7dfe58c6";
