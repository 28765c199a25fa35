//! Patches, patch frequencies and patch-counting entropy.
//!
//! The ρ-patch of `Λ` at `t` is `(Λ - t) ∩ B_ρ(0)`. Its frequency is
//!
//! `ν(P) = Σ_{F ⊂ W \ P} (-1)^|F| ∏_m (1 - |(P ∪ F)_m| / mⁿ)`
//!
//! where `W = B_ρ(0) ∩ Zⁿ`, `m` runs over the excluded moduli and `S_m` is the
//! image of `S` in `Zⁿ / mZⁿ`. Once `m` exceeds the coordinate span of `W` the
//! reduction is injective, so `|S_m| = |S|` and the remaining product depends
//! only on `|S|`; it is computed once per size as a certified Euler product.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::arith::{self, EulerFactorSpec, EulerProduct, Neumaier};
use crate::error::{Error, Result};
use crate::pointsets::{
    ball_points, ball_volume, for_each_in_box, norm_sq, radius_sq_floor, FreenessSpec, LatticeSieve, Point, PointSet,
};
use crate::DEFAULT_REL_ERR;

/// Default cap on `|W \ P|` for inclusion–exclusion (`2^20` terms).
pub const DEFAULT_TERM_CAP: usize = 20;

/// A finite subset of `B_ρ(0) ∩ Zⁿ` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Patch {
    points: Vec<Point>,
    dim: usize,
    radius_sq: i64,
}

impl Patch {
    pub fn new(dim: usize, rho: f64, mut points: Vec<Point>) -> Result<Self> {
        let radius_sq = radius_sq_floor(rho);
        for x in &points {
            if x.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: x.len() });
            }
            if norm_sq(x) > radius_sq {
                return Err(Error::Domain(format!("point {x:?} lies outside the ball of radius {rho}")));
            }
        }
        points.sort();
        points.dedup();
        Ok(Patch { points, dim, radius_sq })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `⌊ρ²⌋`, which determines the window.
    pub fn radius_sq(&self) -> i64 {
        self.radius_sq
    }

    /// The window `B_ρ(0) ∩ Zⁿ` of the patch.
    pub fn window(&self) -> Vec<Point> {
        ball_points(self.dim, (self.radius_sq.max(0) as f64).sqrt())
            .into_iter()
            .filter(|x| norm_sq(x) <= self.radius_sq)
            .collect()
    }
}

impl fmt::Display for Patch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|x| format!("({})", x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Parses the `Display` form: `(1,0);(0,1)` or `{}`.
pub fn parse_points(s: &str) -> Result<Vec<Point>> {
    let s = s.trim();
    if s.is_empty() || s == "{}" {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|p| {
            let t = p.trim().trim_start_matches('(').trim_end_matches(')');
            t.split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|e| Error::Parse(format!("'{p}': {e}"))))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyResult {
    pub value: f64,
    pub term_count: u64,
    /// Certified absolute error bound from the truncated Euler products and
    /// the summation.
    pub tail_error: f64,
}

/// `(Λ - t) ∩ B_ρ(0)` from a generated set whose window must cover `B_ρ(t)`.
pub fn extract_patch(set: &PointSet, t: &[i64], rho: f64) -> Result<Patch> {
    let n = set.spec().dim();
    if t.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.len() });
    }
    let mut pts = Vec::new();
    for x in ball_points(n, rho) {
        let y: Point = x.iter().zip(t).map(|(a, b)| a + b).collect();
        if !set.window().contains(&y) {
            return Err(Error::Domain(format!("window {} does not cover the ball of radius {rho} at {t:?}", set.window())));
        }
        if set.contains(&y) {
            pts.push(x);
        }
    }
    Patch::new(n, rho, pts)
}

/// Patch of the full (infinite) set, by direct membership tests.
pub fn patch_at(spec: &FreenessSpec, t: &[i64], rho: f64) -> Result<Patch> {
    let n = spec.dim();
    if t.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.len() });
    }
    let mut pts = Vec::new();
    for x in ball_points(n, rho) {
        let y: Point = x.iter().zip(t).map(|(a, b)| a + b).collect();
        if spec.is_member(&y)? {
            pts.push(x);
        }
    }
    Patch::new(n, rho, pts)
}

// ---------------------------------------------------------------------------
// Closed forms

pub(crate) fn iroot(x: u64, k: u32) -> u64 {
    if k == 1 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > x) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= x) {
        r += 1;
    }
    r
}

pub(crate) fn coordinate_span(points: &[Point]) -> u64 {
    let Some(first) = points.first() else { return 0 };
    (0..first.len())
        .map(|i| {
            let lo = points.iter().map(|x| x[i]).min().unwrap();
            let hi = points.iter().map(|x| x[i]).max().unwrap();
            (hi - lo) as u64
        })
        .max()
        .unwrap_or(0)
}

/// Moduli handled explicitly for subsets of `points`, and the product over all
/// remaining moduli as a function of the subset size.
struct ModulusSplit {
    explicit: Vec<u64>,
    /// `tails[c] = ∏_{m beyond explicit} (1 - c/mⁿ)`, with its relative bound.
    tails: Vec<EulerProduct>,
}

fn split_moduli(spec: &FreenessSpec, points: &[Point], max_size: usize) -> Result<ModulusSplit> {
    let n = spec.dim() as u32;
    let limit = coordinate_span(points).max(iroot(max_size as u64, n));
    let explicit = spec.moduli_up_to(limit);
    let tails = match spec {
        FreenessSpec::KFree { k, .. } => {
            let skip = iroot(limit, *k);
            (0..=max_size)
                .map(|c| {
                    let f = EulerFactorSpec::power_deficit(c as u32, n * k).skip_through(skip);
                    arith::euler_product_cached(&f, DEFAULT_REL_ERR)
                })
                .collect::<Result<Vec<_>>>()?
        }
        FreenessSpec::BFree { moduli, .. } => {
            (0..=max_size)
                .map(|c| {
                    let v = moduli
                        .iter()
                        .filter(|b| !explicit.contains(b))
                        .map(|&b| 1.0 - c as f64 / (b as f64).powi(n as i32))
                        .product();
                    EulerProduct { value: v, certified_bound: 4.0 * f64::EPSILON * moduli.len() as f64, cutoff: 0 }
                })
                .collect()
        }
    };
    Ok(ModulusSplit { explicit, tails })
}

/// `ν(B_P) = ∏_m (1 - |P_m|/mⁿ)`, the measure of configurations containing `P`.
pub fn measure_b(spec: &FreenessSpec, points: &[Point]) -> Result<FrequencyResult> {
    for x in points {
        if x.len() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), got: x.len() });
        }
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let split = split_moduli(spec, &pts, pts.len())?;
    let tail = split.tails[pts.len()];
    let mut value = tail.value;
    for &m in &split.explicit {
        let classes = spec.classes(m);
        let seen = crate::pointsets::residue_count(&pts, m) as u128;
        value *= (classes - seen) as f64 / classes as f64;
    }
    Ok(FrequencyResult {
        value,
        term_count: 1,
        tail_error: value.abs() * (tail.certified_bound + 4.0 * f64::EPSILON * (split.explicit.len() + 1) as f64),
    })
}

/// Occupancy counts of residue classes, one table per explicit modulus.
struct Occupancy<'a> {
    class_of: &'a [Vec<u32>],
    occ: Vec<Vec<u32>>,
    distinct: Vec<u64>,
    size: usize,
}

impl<'a> Occupancy<'a> {
    fn new(class_of: &'a [Vec<u32>], classes: &[u64]) -> Self {
        Occupancy {
            class_of,
            occ: classes.iter().map(|&c| vec![0u32; c as usize]).collect(),
            distinct: vec![0; classes.len()],
            size: 0,
        }
    }

    fn add(&mut self, idx: usize) {
        for (j, table) in self.occ.iter_mut().enumerate() {
            let c = self.class_of[j][idx] as usize;
            if table[c] == 0 {
                self.distinct[j] += 1;
            }
            table[c] += 1;
        }
        self.size += 1;
    }

    fn remove(&mut self, idx: usize) {
        for (j, table) in self.occ.iter_mut().enumerate() {
            let c = self.class_of[j][idx] as usize;
            table[c] -= 1;
            if table[c] == 0 {
                self.distinct[j] -= 1;
            }
        }
        self.size -= 1;
    }
}

struct Terms<'a> {
    classes: &'a [u64],
    tails: &'a [f64],
    free: &'a [usize],
}

impl Terms<'_> {
    fn term(&self, st: &Occupancy) -> f64 {
        let mut v = self.tails[st.size];
        for (&m, &d) in self.classes.iter().zip(&st.distinct) {
            v *= (m - d) as f64 / m as f64;
        }
        v
    }

    fn walk(&self, st: &mut Occupancy, k: usize, negative: bool, acc: &mut Neumaier) {
        if k == self.free.len() {
            let t = self.term(st);
            acc.add(if negative { -t } else { t });
            return;
        }
        self.walk(st, k + 1, negative, acc);
        st.add(self.free[k]);
        self.walk(st, k + 1, !negative, acc);
        st.remove(self.free[k]);
    }
}

/// `ν(P)` relative to an arbitrary finite window `W ⊇ P`.
pub fn frequency_closed_in(spec: &FreenessSpec, window: &[Point], patch: &[Point], cap: usize) -> Result<FrequencyResult> {
    let n = spec.dim();
    let mut w = window.to_vec();
    w.sort();
    w.dedup();
    for x in w.iter().chain(patch) {
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
    }
    let in_patch: Vec<bool> = w.iter().map(|x| patch.contains(x)).collect();
    if let Some(x) = patch.iter().find(|x| w.binary_search(x).is_err()) {
        return Err(Error::Domain(format!("patch point {x:?} is outside the window")));
    }
    let free: Vec<usize> = (0..w.len()).filter(|&i| !in_patch[i]).collect();
    if free.len() > cap {
        return Err(Error::TermCap { free: free.len(), cap });
    }

    let split = split_moduli(spec, &w, w.len())?;
    let classes: Vec<u64> = split.explicit.iter().map(|&m| spec.classes(m) as u64).collect();
    let class_of: Vec<Vec<u32>> = split
        .explicit
        .iter()
        .map(|&m| {
            let mi = m as i64;
            w.iter()
                .map(|x| x.iter().fold(0u64, |acc, c| acc * m + c.rem_euclid(mi) as u64) as u32)
                .collect()
        })
        .collect();
    let tails: Vec<f64> = split.tails.iter().map(|t| t.value).collect();
    let tail_rel = split.tails.iter().map(|t| t.certified_bound).fold(0.0, f64::max);
    let terms = Terms { classes: &classes, tails: &tails, free: &free };

    // Fix the first few free points per task; partial sums are combined in
    // prefix order so the result does not depend on scheduling.
    let split_depth = free.len().min(6);
    let partials: Vec<Neumaier> = (0u32..1 << split_depth)
        .into_par_iter()
        .map(|mask| {
            let mut st = Occupancy::new(&class_of, &classes);
            for (i, &p) in in_patch.iter().enumerate() {
                if p {
                    st.add(i);
                }
            }
            for b in 0..split_depth {
                if mask >> b & 1 == 1 {
                    st.add(free[b]);
                }
            }
            let mut acc = Neumaier::default();
            terms.walk(&mut st, split_depth, mask.count_ones() % 2 == 1, &mut acc);
            acc
        })
        .collect();
    let mut total = Neumaier::default();
    let mut abs = 0.0;
    for p in &partials {
        total.merge(p);
        abs += p.abs_sum();
    }
    let term_count = 1u64 << free.len();
    let rounding = 4.0 * f64::EPSILON * (classes.len() as f64 + 2.0) * abs;
    Ok(FrequencyResult { value: total.value(), term_count, tail_error: abs * tail_rel + rounding })
}

/// `ν(P)` for a ρ-patch, summing over subsets of `B_ρ(0) ∖ P`.
pub fn frequency_closed(spec: &FreenessSpec, patch: &Patch, cap: usize) -> Result<FrequencyResult> {
    if patch.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), got: patch.dim() });
    }
    frequency_closed_in(spec, &patch.window(), patch.points(), cap)
}

// ---------------------------------------------------------------------------
// Empirical counts

/// `|{ t ∈ B_R(0) : patch of Λ at t is P }| / vol(B_R)`.
pub fn frequency_empirical(spec: &FreenessSpec, patch: &Patch, radius: f64, cap: u64) -> Result<f64> {
    frequency_empirical_at(spec, patch, &vec![0; spec.dim()], radius, cap)
}

/// As [`frequency_empirical`] with the counting ball centred at `center`.
pub fn frequency_empirical_at(
    spec: &FreenessSpec,
    patch: &Patch,
    center: &[i64],
    radius: f64,
    cap: u64,
) -> Result<f64> {
    let n = spec.dim();
    if patch.dim() != n || center.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: if patch.dim() != n { patch.dim() } else { center.len() } });
    }
    let census = census_counts(spec, patch.window(), center, radius, cap, Some(patch))?;
    Ok(census.0.values().sum::<u64>() as f64 / ball_volume(n, radius))
}

type PatchKey = Vec<u64>;

/// Tally of patch keys over `t ∈ B_R(center)`; with `only`, only that patch is
/// counted.
fn census_counts(
    spec: &FreenessSpec,
    window: Vec<Point>,
    center: &[i64],
    radius: f64,
    cap: u64,
    only: Option<&Patch>,
) -> Result<(BTreeMap<PatchKey, u64>, Vec<Point>, u64)> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("radius must be positive and finite, got {radius}")));
    }
    let n = spec.dim();
    let r2 = radius_sq_floor(radius);
    let r = (r2 as f64).sqrt().floor() as i64;
    let reach = window.iter().flat_map(|x| x.iter().map(|c| c.abs())).max().unwrap_or(0);
    let lo: Point = center.iter().map(|c| c - r - reach).collect();
    let hi: Point = center.iter().map(|c| c + r + reach).collect();
    let sieve = LatticeSieve::new(spec, lo, hi, cap)?;
    let words = window.len().div_ceil(64).max(1);
    let target: Option<PatchKey> = only.map(|p| {
        let mut key = vec![0u64; words];
        for (i, x) in window.iter().enumerate() {
            if p.points().binary_search(x).is_ok() {
                key[i / 64] |= 1 << (i % 64);
            }
        }
        key
    });

    let rows: Vec<(HashMap<PatchKey, u64>, u64)> = (-r..=r)
        .into_par_iter()
        .map(|d0| {
            let mut map: HashMap<PatchKey, u64> = HashMap::new();
            let mut sites = 0u64;
            let rest = r2 - d0 * d0;
            if rest < 0 {
                return (map, 0);
            }
            let mut lo = vec![-r; n];
            let mut hi = vec![r; n];
            lo[0] = d0;
            hi[0] = d0;
            let mut y = vec![0i64; n];
            let mut t = vec![0i64; n];
            let mut key = vec![0u64; words];
            for_each_in_box(&lo, &hi, |d| {
                if d[1..].iter().map(|v| v * v).sum::<i64>() > rest {
                    return;
                }
                sites += 1;
                for i in 0..n {
                    t[i] = center[i] + d[i];
                }
                key.iter_mut().for_each(|k| *k = 0);
                for (idx, x) in window.iter().enumerate() {
                    for i in 0..n {
                        y[i] = t[i] + x[i];
                    }
                    if sieve.contains_in_box(&y) {
                        key[idx / 64] |= 1 << (idx % 64);
                    }
                }
                if target.as_ref().is_none_or(|tk| *tk == key) {
                    *map.entry(key.clone()).or_insert(0) += 1;
                }
            });
            (map, sites)
        })
        .collect();
    let mut merged = BTreeMap::new();
    let mut sites = 0;
    for (m, s) in rows {
        sites += s;
        for (k, v) in m {
            *merged.entry(k).or_insert(0) += v;
        }
    }
    Ok((merged, window, sites))
}

/// Exhaustive census of ρ-patches over `t ∈ B_R(0) ∩ Zⁿ`.
#[derive(Debug, Clone)]
pub struct Census {
    pub rho: f64,
    pub radius: f64,
    /// Number of sites `t` visited.
    pub sites: u64,
    /// Volume of the counting ball.
    pub volume: f64,
    /// Observed patches in canonical order with their counts.
    pub patches: Vec<(Patch, u64)>,
}

impl Census {
    pub fn observed(&self) -> usize {
        self.patches.len()
    }

    pub fn frequency(&self, count: u64) -> f64 {
        count as f64 / self.volume
    }

    pub fn count_of(&self, patch: &Patch) -> u64 {
        self.patches.iter().find(|(p, _)| p == patch).map_or(0, |(_, c)| *c)
    }

    /// CSV with columns `patch,count,frequency`; points joined by `;`.
    pub fn write_csv<W: Write>(&self, preamble: &[String], mut out: W) -> Result<()> {
        let werr = |e| Error::io("<writer>", e);
        for line in preamble {
            writeln!(out, "# {line}").map_err(werr)?;
        }
        writeln!(out, "patch,count,frequency").map_err(werr)?;
        for (p, c) in &self.patches {
            writeln!(out, "\"{p}\",{c},{:.10}", self.frequency(*c)).map_err(werr)?;
        }
        Ok(())
    }
}

pub fn patch_census(spec: &FreenessSpec, rho: f64, radius: f64, cap: u64) -> Result<Census> {
    let n = spec.dim();
    let window = ball_points(n, rho);
    let (counts, window, sites) = census_counts(spec, window, &vec![0; n], radius, cap, None)?;
    let mut patches: Vec<(Patch, u64)> = counts
        .into_iter()
        .map(|(key, c)| {
            let pts: Vec<Point> = window
                .iter()
                .enumerate()
                .filter(|(i, _)| key[i / 64] >> (i % 64) & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect();
            Ok((Patch::new(n, rho, pts)?, c))
        })
        .collect::<Result<_>>()?;
    patches.sort();
    Ok(Census { rho, radius, sites, volume: ball_volume(n, radius), patches })
}

/// Patch-counting entropy `log(2) · dens(Λ)` in nats.
pub fn entropy_formula(spec: &FreenessSpec, rel_err: f64) -> Result<EulerProduct> {
    let d = spec.density(rel_err)?;
    Ok(EulerProduct { value: std::f64::consts::LN_2 * d.value, certified_bound: d.certified_bound + f64::EPSILON, cutoff: d.cutoff })
}
