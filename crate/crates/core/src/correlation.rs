//! Autocorrelation coefficients `η(x)`.
//!
//! For visible points of `Z²` the coefficients have the closed form
//! `η(x) = ξ ∏_{p | gcd(x)} (1 + 1/(p² - 2))` with `ξ = ∏_p (1 - 2/p²)`, and
//! `η(0) = 1/ζ(2)`. For every spec they can be estimated by counting
//! `|Λ ∩ (Λ - x) ∩ B_R| / vol(B_R)`.

use std::io::Write;

use rayon::prelude::*;

use crate::arith::{self, EulerFactorSpec, EulerProduct};
use crate::error::{Error, Result};
use crate::pointsets::{ball_volume, for_each_in_box, radius_sq_floor, FreenessSpec, LatticeSieve, Point};
use crate::DEFAULT_REL_ERR;

#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrSample {
    pub shift: Point,
    pub value: f64,
    /// Radius of the counting ball; `None` for closed-form values.
    pub radius_used: Option<f64>,
}

/// `ξ = ∏_p (1 - 2p^(-2)) ≈ 0.3226`.
pub fn xi(rel_err: f64) -> Result<EulerProduct> {
    arith::euler_product_cached(&EulerFactorSpec::power_deficit(2, 2), rel_err)
}

/// Closed-form `η(x)` for the visible points of `Z²`.
pub fn eta_closed(x: [i64; 2]) -> Result<f64> {
    let g = arith::gcd_coords(&x);
    if g == 0 {
        return Ok(arith::inverse_zeta(2, DEFAULT_REL_ERR)?.value);
    }
    let xi = xi(DEFAULT_REL_ERR)?.value;
    Ok(arith::prime_divisors(g).into_iter().fold(xi, |acc, p| {
        let p2 = (p * p) as f64;
        acc * (1.0 + 1.0 / (p2 - 2.0))
    }))
}

/// `|Λ ∩ (Λ - x) ∩ B_R(0)| / vol(B_R)`.
pub fn eta_empirical(spec: &FreenessSpec, x: &[i64], radius: f64, cap: u64) -> Result<AutocorrSample> {
    let mut t = autocorr_table(spec, &[x.to_vec()], radius, cap)?;
    Ok(t.remove(0))
}

/// `eta_empirical` for a batch of shifts, sharing one sieve.
pub fn autocorr_table(spec: &FreenessSpec, shifts: &[Point], radius: f64, cap: u64) -> Result<Vec<AutocorrSample>> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("radius must be positive and finite, got {radius}")));
    }
    let n = spec.dim();
    for s in shifts {
        if s.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.len() });
        }
    }
    if shifts.is_empty() {
        return Ok(Vec::new());
    }
    let r2 = radius_sq_floor(radius);
    let r = (r2 as f64).sqrt().floor() as i64;
    let reach: Vec<i64> = (0..n).map(|i| shifts.iter().map(|s| s[i].abs()).max().unwrap_or(0)).collect();
    let lo: Point = reach.iter().map(|m| -r - m).collect();
    let hi: Point = reach.iter().map(|m| r + m).collect();
    let sieve = LatticeSieve::new(spec, lo, hi, cap)?;
    let vol = ball_volume(n, radius);

    Ok(shifts
        .par_iter()
        .map(|s| {
            let count = count_pairs(&sieve, s, r, r2);
            AutocorrSample { shift: s.clone(), value: count as f64 / vol, radius_used: Some(radius) }
        })
        .collect())
}

fn count_pairs(sieve: &LatticeSieve, shift: &[i64], r: i64, r2: i64) -> u64 {
    let n = shift.len();
    (-r..=r)
        .into_par_iter()
        .map(|y0| {
            let rest = r2 - y0 * y0;
            if rest < 0 {
                return 0;
            }
            let mut lo = vec![-r; n];
            let mut hi = vec![r; n];
            lo[0] = y0;
            hi[0] = y0;
            let mut c = 0u64;
            let mut z = vec![0i64; n];
            for_each_in_box(&lo, &hi, |y| {
                if y[1..].iter().map(|v| v * v).sum::<i64>() > rest || !sieve.contains_in_box(y) {
                    return;
                }
                for i in 0..n {
                    z[i] = y[i] + shift[i];
                }
                if sieve.contains_in_box(&z) {
                    c += 1;
                }
            });
            c
        })
        .sum()
}

/// CSV with columns `x1..xn,eta,R`; closed-form rows leave `R` empty.
pub fn write_autocorr_csv<W: Write>(samples: &[AutocorrSample], dim: usize, preamble: &[String], mut out: W) -> Result<()> {
    let werr = |e| Error::io("<writer>", e);
    for line in preamble {
        writeln!(out, "# {line}").map_err(werr)?;
    }
    let cols: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    writeln!(out, "{},eta,R", cols.join(",")).map_err(werr)?;
    for s in samples {
        let coords: Vec<String> = s.shift.iter().map(|c| c.to_string()).collect();
        let r = s.radius_used.map(|r| r.to_string()).unwrap_or_default();
        writeln!(out, "{},{:.10},{}", coords.join(","), s.value, r).map_err(werr)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointsets::DEFAULT_WINDOW_CAP;

    #[test]
    fn closed_form_examples() {
        assert!((eta_closed([0, 0]).unwrap() - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-9);
        let xi = eta_closed([1, 0]).unwrap();
        assert!((xi - 0.3226).abs() < 5e-5);
        assert!((eta_closed([2, 0]).unwrap() - 1.5 * xi).abs() < 1e-12);
        assert!((eta_closed([0, -6]).unwrap() - xi * 1.5 * (1.0 + 1.0 / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_depends_only_on_gcd() {
        for g in 1..=6i64 {
            let base = eta_closed([g, 0]).unwrap();
            for a in -20..=20i64 {
                for b in -20..=20i64 {
                    if arith::gcd_coords(&[a, b]) == g as u64 {
                        assert_eq!(eta_closed([a, b]).unwrap(), base);
                    }
                }
            }
        }
    }

    #[test]
    fn tiny_window_has_no_pairs() {
        let s = eta_empirical(&FreenessSpec::visible(), &[0, 0], 0.5, DEFAULT_WINDOW_CAP).unwrap();
        assert_eq!(s.value, 0.0);
        assert!(autocorr_table(&FreenessSpec::visible(), &[], 10.0, DEFAULT_WINDOW_CAP).unwrap().is_empty());
    }

    #[test]
    fn empirical_matches_brute_force() {
        for spec in ["visible", "kfree:2,2", "bfree:2:2,3", "kfree:1,2"] {
            let spec: FreenessSpec = spec.parse().unwrap();
            let n = spec.dim();
            let shift: Point = (0..n as i64).map(|i| i + 1).collect();
            let r = 15.5;
            let got = eta_empirical(&spec, &shift, r, DEFAULT_WINDOW_CAP).unwrap();
            let mut count = 0;
            for y in crate::pointsets::ball_points(n, r) {
                let z: Point = y.iter().zip(&shift).map(|(a, b)| a + b).collect();
                if spec.is_member(&y).unwrap() && spec.is_member(&z).unwrap() {
                    count += 1;
                }
            }
            assert_eq!(got.value, count as f64 / ball_volume(n, r), "{spec}");
        }
    }

    #[test]
    fn empirical_approaches_closed_form() {
        let shifts: Vec<Point> = vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![3, 3]];
        let t = autocorr_table(&FreenessSpec::visible(), &shifts, 400.0, DEFAULT_WINDOW_CAP).unwrap();
        for s in t {
            let c = eta_closed([s.shift[0], s.shift[1]]).unwrap();
            assert!((s.value / c - 1.0).abs() < 0.02, "{:?} {} {}", s.shift, s.value, c);
        }
    }

    #[test]
    fn csv_columns() {
        let t = vec![AutocorrSample { shift: vec![1, 0], value: 0.5, radius_used: Some(10.0) }];
        let mut buf = Vec::new();
        write_autocorr_csv(&t, 2, &["spec: visible".into()], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# spec: visible\nx1,x2,eta,R\n1,0,0.5000000000,10\n");
    }
}
