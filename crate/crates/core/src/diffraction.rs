//! Diffraction of k-free and B-free point sets.
//!
//! The diffraction measure is a pure point measure `Σ I(ℓ) δ_ℓ` supported on
//! rational points. For k-free sets `I(ℓ) = (1/ζ(nk))² ∏_{p | den ℓ} (p^{nk} - 1)^(-2)`
//! when `den ℓ` is (k+1)-free and 0 otherwise. For B-free sets `den ℓ` must
//! divide `∏ B` and `I(ℓ) = (dens ∏_{b : (den ℓ, b) > 1} (bⁿ - 1)^(-1))²`.

use std::fmt;
use std::io::Write;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::arith::{self, gcd};
use crate::error::{Error, Result};
use crate::pointsets::{ball_volume, for_each_in_box, radius_sq_floor, FreenessSpec, LatticeSieve};
use crate::DEFAULT_REL_ERR;

/// `num / den` with `den = den(ℓ) = min { m >= 1 : mℓ ∈ Zⁿ }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    den: u64,
    num: Vec<i64>,
}

impl RationalPoint {
    pub fn new(num: Vec<i64>, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("denominator must be positive".into()));
        }
        let g = gcd(arith::gcd_coords(&num), den);
        let g = if g == 0 { den } else { g };
        Ok(RationalPoint { den: den / g, num: num.into_iter().map(|a| a / g as i64).collect() })
    }

    pub fn zero(dim: usize) -> Self {
        RationalPoint { den: 1, num: vec![0; dim] }
    }

    pub fn from_ratios(coords: &[Ratio<i64>]) -> Result<Self> {
        let den = coords.iter().fold(1i64, |l, c| l.lcm(c.denom()));
        let num = coords.iter().map(|c| c.numer() * (den / c.denom())).collect();
        RationalPoint::new(num, den as u64)
    }

    pub fn numerator(&self) -> &[i64] {
        &self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    pub fn coords(&self) -> Vec<f64> {
        self.num.iter().map(|&a| a as f64 / self.den as f64).collect()
    }

    /// `ℓ + v` for an integer vector `v`.
    pub fn translate(&self, v: &[i64]) -> Self {
        let d = self.den as i64;
        RationalPoint { den: self.den, num: self.num.iter().zip(v).map(|(a, b)| a + b * d).collect() }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .num
            .iter()
            .map(|&a| {
                let r = Ratio::new(a, self.den as i64);
                if *r.denom() == 1 {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Parses `1/2,0` or `(1/3,1/3)`.
impl std::str::FromStr for RationalPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = t
            .split(',')
            .map(|c| c.trim().parse::<Ratio<i64>>().map_err(|e| Error::Parse(format!("'{c}': {e}"))))
            .collect::<Result<Vec<_>>>()?;
        RationalPoint::from_ratios(&coords)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffractionAtom {
    pub position: RationalPoint,
    pub intensity: f64,
}

/// Intensity from the prime structure of `den`, given the density.
fn intensity_from_density(spec: &FreenessSpec, den: u64, density: f64) -> f64 {
    match spec {
        FreenessSpec::KFree { dim, k } => {
            let nk = (*dim as u32 * k) as i32;
            let mut amp = density;
            for (p, e) in arith::factorize(den) {
                if e > *k {
                    return 0.0;
                }
                amp /= (p as f64).powi(nk) - 1.0;
            }
            amp * amp
        }
        FreenessSpec::BFree { dim, moduli } => {
            let mut rest = den;
            let mut amp = density;
            for &b in moduli {
                let g = gcd(rest, b);
                if gcd(den, b) != 1 {
                    amp /= (b as f64).powi(*dim as i32) - 1.0;
                }
                rest /= g;
            }
            if rest != 1 {
                return 0.0;
            }
            amp * amp
        }
    }
}

/// `I(ℓ)`; zero off the support.
pub fn intensity(spec: &FreenessSpec, l: &RationalPoint) -> Result<f64> {
    if l.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: l.dim() });
    }
    let dens = spec.density(DEFAULT_REL_ERR)?.value;
    Ok(intensity_from_density(spec, l.den, dens))
}

/// A box of `Rⁿ` with rational corners, closed below and closed or open above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalBox {
    pub lo: Vec<Ratio<i64>>,
    pub hi: Vec<Ratio<i64>>,
    pub upper_open: bool,
}

impl RationalBox {
    pub fn cube(dim: usize, lo: Ratio<i64>, hi: Ratio<i64>, upper_open: bool) -> Self {
        RationalBox { lo: vec![lo; dim], hi: vec![hi; dim], upper_open }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Integer range of numerators `a` with `a/den` inside, per axis.
    fn numerator_ranges(&self, den: u64) -> Vec<(i64, i64)> {
        let d = Ratio::from_integer(den as i64);
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| {
                let a = (l * d).ceil().to_integer();
                let hd = h * d;
                let b = if self.upper_open { hd.ceil().to_integer() - 1 } else { hd.floor().to_integer() };
                (a, b)
            })
            .collect()
    }
}

impl fmt::Display for RationalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axes: Vec<String> = self.lo.iter().zip(&self.hi).map(|(l, h)| format!("{l}:{h}")).collect();
        write!(f, "{}{}", axes.join("x"), if self.upper_open { " (upper open)" } else { "" })
    }
}

/// Relative weights `I(0)/I(d)` of admissible denominators up to `max_weight`,
/// as `(den, weight)` pairs.
fn admissible_denominators(spec: &FreenessSpec, max_weight: f64) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    match spec {
        FreenessSpec::KFree { dim, k } => {
            let nk = (*dim as u32 * k) as i32;
            let w = |p: u64| ((p as f64).powi(nk) - 1.0).powi(2);
            let mut bound = 2u64;
            while w(bound) <= max_weight {
                bound *= 2;
            }
            let primes: Vec<u64> = arith::primes_up_to(bound).into_iter().filter(|&p| w(p) <= max_weight).collect();
            // depth-first over prime sets; the weight grows with every prime
            fn dfs(
                primes: &[u64],
                start: usize,
                den: u64,
                weight: f64,
                max_weight: f64,
                k: u32,
                w: &dyn Fn(u64) -> f64,
                out: &mut Vec<(u64, f64)>,
            ) {
                out.push((den, weight));
                for i in start..primes.len() {
                    let p = primes[i];
                    let nw = weight * w(p);
                    if nw > max_weight {
                        break;
                    }
                    let mut pe = den;
                    for _ in 0..k {
                        pe = match pe.checked_mul(p) {
                            Some(v) => v,
                            None => return,
                        };
                        dfs(primes, i + 1, pe, nw, max_weight, k, w, out);
                    }
                }
            }
            dfs(&primes, 0, 1, 1.0, max_weight, *k, &w, &mut out);
        }
        FreenessSpec::BFree { dim, moduli } => {
            let w = |b: u64| ((b as f64).powi(*dim as i32) - 1.0).powi(2);
            let mut acc: Vec<(u64, f64)> = vec![(1, 1.0)];
            for &b in moduli {
                if w(b) > max_weight {
                    break;
                }
                let divisors: Vec<u64> = (2..=b).filter(|d| b % d == 0).collect();
                let mut next = acc.clone();
                for &(den, weight) in &acc {
                    let nw = weight * w(b);
                    if nw > max_weight {
                        continue;
                    }
                    for &d in &divisors {
                        next.push((den * d, nw));
                    }
                }
                acc = next;
            }
            out = acc;
        }
    }
    out.sort_by_key(|&(d, _)| d);
    out
}

/// All atoms in `window` with `I(ℓ)/I(0) >= rel_threshold`, ordered by
/// `(den, numerator)`.
pub fn support_enumerate(
    spec: &FreenessSpec,
    window: &RationalBox,
    rel_threshold: f64,
    cap: u64,
) -> Result<Vec<DiffractionAtom>> {
    if !(rel_threshold > 0.0 && rel_threshold <= 1.0) {
        return Err(Error::Domain(format!(
            "relative threshold must lie in (0, 1], got {rel_threshold}; a zero threshold has infinite support"
        )));
    }
    if window.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: window.dim() });
    }
    let dens = spec.density(DEFAULT_REL_ERR)?.value;
    // slack for rounding in the weights at the threshold boundary
    let max_weight = (1.0 / rel_threshold) * (1.0 + 1e-12);
    let dens_list = admissible_denominators(spec, max_weight);

    let mut total: u128 = 0;
    for &(den, _) in &dens_list {
        let cells: u128 =
            window.numerator_ranges(den).iter().map(|&(a, b)| if b >= a { (b - a + 1) as u128 } else { 0 }).product();
        total += cells;
        if total > cap as u128 {
            return Err(Error::WindowCap { required: total, cap });
        }
    }

    let mut atoms = Vec::new();
    for (den, _) in dens_list {
        let i = intensity_from_density(spec, den, dens);
        let ranges = window.numerator_ranges(den);
        let lo: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let hi: Vec<i64> = ranges.iter().map(|r| r.1).collect();
        for_each_in_box(&lo, &hi, |a| {
            if gcd(arith::gcd_coords(a), den) == 1 {
                atoms.push(DiffractionAtom { position: RationalPoint { den, num: a.to_vec() }, intensity: i });
            }
        });
    }
    Ok(atoms)
}

/// `|vol(B_R)^(-1) Σ_{x ∈ Λ ∩ B_R} e^(-2πi ℓ·x)|²` by direct summation.
///
/// Members are tallied by the phase index `(num·x) mod den` in exact integer
/// arithmetic, so the result is independent of the thread count.
pub fn fourier_sum_oracle(spec: &FreenessSpec, l: &RationalPoint, radius: f64, cap: u64) -> Result<f64> {
    if l.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: l.dim() });
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("radius must be positive and finite, got {radius}")));
    }
    let den = l.den;
    if den > 10_000_000 {
        return Err(Error::Resource(format!("denominator {den} too large for phase tallies")));
    }
    let n = spec.dim();
    let r2 = radius_sq_floor(radius);
    let r = (r2 as f64).sqrt().floor() as i64;
    let sieve = LatticeSieve::new(spec, vec![-r; n], vec![r; n], cap)?;
    let num: Vec<i128> = l.num.iter().map(|&a| (a as i128).rem_euclid(den as i128)).collect();

    let tallies = (-r..=r)
        .into_par_iter()
        .map(|x0| {
            let mut t = vec![0u64; den as usize];
            let rest = r2 - x0 * x0;
            if rest < 0 {
                return t;
            }
            let mut lo = vec![-r; n];
            let mut hi = vec![r; n];
            lo[0] = x0;
            hi[0] = x0;
            for_each_in_box(&lo, &hi, |x| {
                if x[1..].iter().map(|v| v * v).sum::<i64>() <= rest && sieve.contains_in_box(x) {
                    let j: i128 = x.iter().zip(&num).map(|(&c, &a)| c as i128 * a).sum();
                    t[j.rem_euclid(den as i128) as usize] += 1;
                }
            });
            t
        })
        .reduce(
            || vec![0u64; den as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for (j, &c) in tallies.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (s, co) = (-2.0 * std::f64::consts::PI * j as f64 / den as f64).sin_cos();
        re += c as f64 * co;
        im += c as f64 * s;
    }
    let vol = ball_volume(n, radius);
    Ok((re / vol).powi(2) + (im / vol).powi(2))
}

// ---------------------------------------------------------------------------
// Figures

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureStyle {
    /// Disk area proportional to the intensity: `r = 0.3·√I`.
    AreaProportional,
    /// `r = I^(1/4) / 20`.
    QuarticRescale,
}

impl FigureStyle {
    pub fn radius(self, intensity: f64) -> f64 {
        match self {
            FigureStyle::AreaProportional => 0.3 * intensity.sqrt(),
            FigureStyle::QuarticRescale => intensity.powf(0.25) / 20.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FigureStyle::AreaProportional => "area_proportional",
            FigureStyle::QuarticRescale => "quartic_rescale",
        }
    }
}

impl std::str::FromStr for FigureStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "area_proportional" | "area" => Ok(FigureStyle::AreaProportional),
            "quartic_rescale" | "quartic" => Ok(FigureStyle::QuarticRescale),
            _ => Err(Error::Parse(format!("unknown figure style '{s}'"))),
        }
    }
}

/// A point of a planar figure.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotAtom {
    pub position: Vec<f64>,
    pub intensity: f64,
}

impl From<&DiffractionAtom> for PlotAtom {
    fn from(a: &DiffractionAtom) -> Self {
        PlotAtom { position: a.position.coords(), intensity: a.intensity }
    }
}

/// Drawing units per coordinate unit.
const SVG_SCALE: f64 = 200.0;

/// SVG with one disk per atom over the view `[lo, hi]` (y axis pointing up).
pub fn write_svg<W: Write>(
    atoms: &[PlotAtom],
    style: FigureStyle,
    view: ([f64; 2], [f64; 2]),
    provenance: &[String],
    mut out: W,
) -> Result<()> {
    let werr = |e| Error::io("<writer>", e);
    let ([x0, y0], [x1, y1]) = view;
    if !(x1 > x0 && y1 > y0) {
        return Err(Error::Domain("figure view must have positive extent".into()));
    }
    if let Some(a) = atoms.iter().find(|a| a.position.len() != 2) {
        return Err(Error::DimensionMismatch { expected: 2, got: a.position.len() });
    }
    let w = (x1 - x0) * SVG_SCALE;
    let h = (y1 - y0) * SVG_SCALE;
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">"
    )
    .map_err(werr)?;
    writeln!(out, "<!-- style: {} -->", style.name()).map_err(werr)?;
    for line in provenance {
        writeln!(out, "<!-- {} -->", line.replace("--", "- -")).map_err(werr)?;
    }
    writeln!(out, "<rect width=\"{w:.2}\" height=\"{h:.2}\" fill=\"white\"/>").map_err(werr)?;
    writeln!(out, "<g fill=\"black\">").map_err(werr)?;
    for a in atoms {
        let cx = (a.position[0] - x0) * SVG_SCALE;
        let cy = (y1 - a.position[1]) * SVG_SCALE;
        let r = style.radius(a.intensity) * SVG_SCALE;
        writeln!(out, "<circle cx=\"{cx:.4}\" cy=\"{cy:.4}\" r=\"{r:.4}\"/>").map_err(werr)?;
    }
    writeln!(out, "</g>\n</svg>").map_err(werr)?;
    Ok(())
}

/// CSV with columns `k1..kn,intensity`.
pub fn write_atoms_csv<W: Write>(atoms: &[PlotAtom], dim: usize, provenance: &[String], mut out: W) -> Result<()> {
    let werr = |e| Error::io("<writer>", e);
    for line in provenance {
        writeln!(out, "# {line}").map_err(werr)?;
    }
    let cols: Vec<String> = (1..=dim).map(|i| format!("k{i}")).collect();
    writeln!(out, "{},intensity", cols.join(",")).map_err(werr)?;
    for a in atoms {
        let coords: Vec<String> = a.position.iter().map(|c| format!("{c:.10}")).collect();
        writeln!(out, "{},{:.12e}", coords.join(","), a.intensity).map_err(werr)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureFormat {
    Svg,
    Csv,
}

/// Writes a figure file; I/O errors carry the path.
pub fn emit_figure(
    atoms: &[PlotAtom],
    style: FigureStyle,
    view: ([f64; 2], [f64; 2]),
    format: FigureFormat,
    provenance: &[String],
    path: &std::path::Path,
) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(f);
    let res = match format {
        FigureFormat::Svg => write_svg(atoms, style, view, provenance, &mut w),
        FigureFormat::Csv => {
            let mut lines = vec![format!("style: {}", style.name())];
            lines.extend_from_slice(provenance);
            write_atoms_csv(atoms, atoms.first().map_or(2, |a| a.position.len()), &lines, &mut w)
        }
    };
    res.and_then(|_| w.flush().map_err(|e| Error::io(path, e))).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointsets::DEFAULT_WINDOW_CAP;
    use std::f64::consts::PI;

    fn rp(s: &str) -> RationalPoint {
        s.parse().unwrap()
    }

    #[test]
    fn reduced_denominators() {
        assert_eq!(rp("1/2,0").den(), 2);
        assert_eq!(rp("2/4,3/6").den(), 2);
        assert_eq!(rp("1/3,1/2").den(), 6);
        assert_eq!(rp("0,0").den(), 1);
        assert_eq!(rp("3,-2").den(), 1);
        assert_eq!(RationalPoint::new(vec![4, 6], 8).unwrap(), RationalPoint::new(vec![2, 3], 4).unwrap());
        assert_eq!(rp("(1/3,1/3)").to_string(), "(1/3,1/3)");
    }

    #[test]
    fn visible_intensities() {
        let v = FreenessSpec::visible();
        let d = 6.0 / (PI * PI);
        assert!((intensity(&v, &rp("0,0")).unwrap() - 36.0 / PI.powi(4)).abs() < 1e-9);
        assert!((intensity(&v, &rp("1/2,0")).unwrap() - (d / 3.0).powi(2)).abs() < 1e-9);
        assert!((intensity(&v, &rp("1/2,0")).unwrap() - 0.041064).abs() < 5e-7);
        assert!((intensity(&v, &rp("1/3,1/3")).unwrap() - (d / 8.0).powi(2)).abs() < 1e-9);
        assert!((intensity(&v, &rp("1/3,1/3")).unwrap() - 0.0057746).abs() < 5e-8);
        assert_eq!(intensity(&v, &rp("1/4,0")).unwrap(), 0.0);
        assert!(intensity(&v, &rp("1/2")).is_err());
    }

    #[test]
    fn bfree_intensities() {
        let s = FreenessSpec::bfree(1, vec![4, 9]).unwrap();
        let dens: f64 = (1.0 - 0.25) * (1.0 - 1.0 / 9.0);
        assert!((intensity(&s, &rp("1/2")).unwrap() - (dens / 3.0).powi(2)).abs() < 1e-15);
        assert!((intensity(&s, &rp("1/12")).unwrap() - (dens / 3.0 / 8.0).powi(2)).abs() < 1e-15);
        assert_eq!(intensity(&s, &rp("1/8")).unwrap(), 0.0);
        assert_eq!(intensity(&s, &rp("1/5")).unwrap(), 0.0);
    }

    #[test]
    fn threshold_one_keeps_only_origin() {
        let w = RationalBox::cube(2, Ratio::from(0), Ratio::from(1), true);
        let atoms = support_enumerate(&FreenessSpec::visible(), &w, 1.0, DEFAULT_WINDOW_CAP).unwrap();
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].position, RationalPoint::zero(2));
        assert!((atoms[0].intensity - 36.0 / PI.powi(4)).abs() < 1e-9);
    }

    #[test]
    fn enumeration_rejects_bad_threshold() {
        let w = RationalBox::cube(2, Ratio::from(0), Ratio::from(1), true);
        assert!(support_enumerate(&FreenessSpec::visible(), &w, 0.0, DEFAULT_WINDOW_CAP).is_err());
        assert!(support_enumerate(&FreenessSpec::visible(), &w, 1.5, DEFAULT_WINDOW_CAP).is_err());
        let empty = RationalBox::cube(2, Ratio::from(1), Ratio::from(1), true);
        assert!(support_enumerate(&FreenessSpec::visible(), &empty, 1e-3, DEFAULT_WINDOW_CAP).unwrap().is_empty());
    }

    /// Every reduced `a/d` with `d` up to a bound beyond which no admissible
    /// denominator can reach the threshold.
    fn exhaustive(spec: &FreenessSpec, lo: i64, hi: i64, thr: f64, dmax: u64) -> Vec<(u64, Vec<i64>)> {
        let i0 = intensity(spec, &RationalPoint::zero(spec.dim())).unwrap();
        let mut out = Vec::new();
        for d in 1..=dmax {
            let n = spec.dim();
            for_each_in_box(&vec![lo * d as i64; n], &vec![hi * d as i64; n], |a| {
                let p = RationalPoint::new(a.to_vec(), d).unwrap();
                if p.den() == d && intensity(spec, &p).unwrap() >= thr * i0 * (1.0 - 1e-12) {
                    out.push((d, a.to_vec()));
                }
            });
        }
        out
    }

    #[test]
    fn enumeration_matches_exhaustive_scan() {
        // visible, threshold 1e-4: (p²-1)² <= 1e4 forces p <= 7 and d <= 14
        for (spec, thr, dmax) in [
            (FreenessSpec::visible(), 1e-4, 60u64),
            (FreenessSpec::kfree(1, 2).unwrap(), 1e-3, 200),
            (FreenessSpec::bfree(1, vec![4, 9, 5]).unwrap(), 1e-4, 180),
        ] {
            let w = RationalBox::cube(spec.dim(), Ratio::from(0), Ratio::from(1), false);
            let got: Vec<(u64, Vec<i64>)> = support_enumerate(&spec, &w, thr, DEFAULT_WINDOW_CAP)
                .unwrap()
                .into_iter()
                .map(|a| (a.position.den(), a.position.numerator().to_vec()))
                .collect();
            assert_eq!(got, exhaustive(&spec, 0, 1, thr, dmax), "{spec}");
        }
    }

    #[test]
    fn fourier_oracle_small_radius_by_hand() {
        let v = FreenessSpec::visible();
        // ball of radius 1.5 holds the 8 neighbours of the origin
        let s0 = fourier_sum_oracle(&v, &rp("0,0"), 1.5, DEFAULT_WINDOW_CAP).unwrap();
        let vol = PI * 2.25;
        assert!((s0 - (8.0 / vol).powi(2)).abs() < 1e-12);
        // phases (-1)^x1: six neighbours with x1 = ±1 give -6, two give +2
        let s = fourier_sum_oracle(&v, &rp("1/2,0"), 1.5, DEFAULT_WINDOW_CAP).unwrap();
        assert!((s - (4.0 / vol).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn svg_layout() {
        let atoms = vec![PlotAtom { position: vec![0.0, 0.0], intensity: 0.25 }];
        let mut buf = Vec::new();
        write_svg(&atoms, FigureStyle::AreaProportional, ([-1.0, -1.0], [1.0, 1.0]), &["spec: visible".into()], &mut buf)
            .unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("<circle cx=\"200.0000\" cy=\"200.0000\" r=\"30.0000\"/>"), "{s}");
        assert!(s.contains("<!-- style: area_proportional -->"));
        let mut buf = Vec::new();
        write_svg(&[], FigureStyle::QuarticRescale, ([0.0, 0.0], [1.0, 1.0]), &[], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(!s.contains("<circle") && s.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn quartic_radius() {
        assert!((FigureStyle::QuarticRescale.radius(16.0) - 0.1).abs() < 1e-15);
        assert!((FigureStyle::AreaProportional.radius(4.0) - 0.6).abs() < 1e-15);
    }
}
