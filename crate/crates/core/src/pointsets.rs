//! Visible, k-free and B-free subsets of `Zⁿ`.
//!
//! A [`FreenessSpec`] names the point set; a [`LatticeWindow`] names a finite
//! region. Single points are tested with a gcd followed by trial division,
//! whole windows with a divisibility sieve ([`LatticeSieve`]).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use rayon::prelude::*;

use crate::arith::{self, crt_solve, gcd, gcd_coords, EulerProduct, ResidueVector};
use crate::error::{Error, Result};

/// A lattice point of `Zⁿ`.
pub type Point = Vec<i64>;

/// Default cap on the number of lattice cells a window may span.
pub const DEFAULT_WINDOW_CAP: u64 = 100_000_000;

/// Which lattice point set is meant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FreenessSpec {
    /// `Zⁿ \ ∪_p p^k Zⁿ`. Visible points are `n = 2, k = 1`.
    KFree { dim: usize, k: u32 },
    /// `Zⁿ \ ∪_{b ∈ B} b Zⁿ` for a finite set of pairwise coprime `b >= 2`.
    BFree { dim: usize, moduli: Vec<u64> },
}

impl FreenessSpec {
    pub fn visible() -> Self {
        FreenessSpec::KFree { dim: 2, k: 1 }
    }

    pub fn kfree(dim: usize, k: u32) -> Result<Self> {
        if dim == 0 || k == 0 {
            return Err(Error::InvalidSpec(format!("need n >= 1 and k >= 1, got n={dim} k={k}")));
        }
        if dim == 1 && k == 1 {
            return Err(Error::InvalidSpec("n = k = 1 is the trivial case {-1, 1}".into()));
        }
        Ok(FreenessSpec::KFree { dim, k })
    }

    pub fn bfree(dim: usize, mut moduli: Vec<u64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpec("dimension must be at least 1".into()));
        }
        moduli.sort_unstable();
        if let Some(&b) = moduli.iter().find(|&&b| b < 2) {
            return Err(Error::InvalidSpec(format!("moduli must be >= 2, got {b}")));
        }
        for (i, &a) in moduli.iter().enumerate() {
            for &b in &moduli[i + 1..] {
                if gcd(a, b) != 1 {
                    return Err(Error::NonCoprimeModuli { a, b });
                }
            }
        }
        Ok(FreenessSpec::BFree { dim, moduli })
    }

    pub fn dim(&self) -> usize {
        match self {
            FreenessSpec::KFree { dim, .. } | FreenessSpec::BFree { dim, .. } => *dim,
        }
    }

    /// Excluded moduli `m <= bound`, ascending: `p^k` for k-free, the
    /// elements of `B` for B-free.
    pub fn moduli_up_to(&self, bound: u64) -> Vec<u64> {
        match self {
            FreenessSpec::KFree { k, .. } => {
                let root = (bound as f64).powf(1.0 / *k as f64).floor() as u64 + 1;
                arith::primes_up_to(root)
                    .into_iter()
                    .filter_map(|p| p.checked_pow(*k))
                    .filter(|&m| m <= bound)
                    .collect()
            }
            FreenessSpec::BFree { moduli, .. } => moduli.iter().copied().filter(|&b| b <= bound).collect(),
        }
    }

    /// Number of residue classes of `Zⁿ` modulo `m`, i.e. `mⁿ`.
    pub fn classes(&self, modulus: u64) -> u128 {
        (modulus as u128).saturating_pow(self.dim() as u32)
    }

    /// Natural density: `1/ζ(nk)` or `∏_{b∈B} (1 - b^(-n))`.
    pub fn density(&self, rel_err: f64) -> Result<EulerProduct> {
        match self {
            FreenessSpec::KFree { dim, k } => arith::inverse_zeta(*dim as u32 * *k, rel_err),
            FreenessSpec::BFree { dim, moduli } => {
                let value = moduli.iter().map(|&b| 1.0 - (b as f64).powi(-(*dim as i32))).product();
                Ok(EulerProduct {
                    value,
                    certified_bound: 2.0 * f64::EPSILON * (moduli.len() as f64 + 1.0),
                    cutoff: moduli.last().copied().unwrap_or(0),
                })
            }
        }
    }

    fn check_dim(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    /// Membership test by gcd and trial division. The origin is never a member.
    pub fn is_member(&self, x: &[i64]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.member_unchecked(x))
    }

    pub(crate) fn member_unchecked(&self, x: &[i64]) -> bool {
        let g = gcd_coords(x);
        if g == 0 {
            return false;
        }
        match self {
            FreenessSpec::KFree { k, .. } => arith::is_k_free(g, *k),
            FreenessSpec::BFree { moduli, .. } => moduli.iter().all(|&b| g % b != 0),
        }
    }
}

impl fmt::Display for FreenessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreenessSpec::KFree { dim: 2, k: 1 } => write!(f, "visible"),
            FreenessSpec::KFree { dim, k } => write!(f, "kfree:{dim},{k}"),
            FreenessSpec::BFree { dim, moduli } => {
                let b: Vec<String> = moduli.iter().map(|b| b.to_string()).collect();
                write!(f, "bfree:{dim}:{}", b.join(","))
            }
        }
    }
}

/// Parses `visible`, `kfree:<n>,<k>` or `bfree:<n>:<b1>,<b2>,...`.
impl FromStr for FreenessSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognized spec '{s}' (expected visible, kfree:n,k or bfree:n:b1,b2,...)"));
        let s = s.trim();
        if s == "visible" {
            return Ok(FreenessSpec::visible());
        }
        if let Some(rest) = s.strip_prefix("kfree:") {
            let mut it = rest.split(',');
            let n = it.next().and_then(|v| v.trim().parse().ok()).ok_or_else(bad)?;
            let k = it.next().and_then(|v| v.trim().parse().ok()).ok_or_else(bad)?;
            if it.next().is_some() {
                return Err(bad());
            }
            return FreenessSpec::kfree(n, k);
        }
        if let Some(rest) = s.strip_prefix("bfree:") {
            let (n, bs) = rest.split_once(':').ok_or_else(bad)?;
            let n = n.trim().parse().map_err(|_| bad())?;
            let moduli = bs
                .split(',')
                .map(|b| b.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return FreenessSpec::bfree(n, moduli);
        }
        Err(bad())
    }
}

// ---------------------------------------------------------------------------
// Windows

/// `⌊ρ²⌋`, the integer bound on `‖x‖²` for membership in the closed ball.
///
/// A relative slack of `1e-12` absorbs rounding in `ρ²` when it is meant to be
/// an integer (e.g. `ρ = √5`).
pub fn radius_sq_floor(rho: f64) -> i64 {
    if !(rho >= 0.0) {
        return -1;
    }
    let r2 = rho * rho;
    (r2 + r2 * 1e-12).floor() as i64
}

pub fn norm_sq(x: &[i64]) -> i64 {
    x.iter().map(|c| c * c).sum()
}

/// Volume of the `n`-ball of radius `r`.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    use std::f64::consts::PI;
    // V_0 = 1, V_1 = 2r, V_n = V_{n-2} · 2π r² / n
    let (mut v, start) = if dim % 2 == 0 { (1.0, 2) } else { (2.0 * r, 3) };
    let mut n = start;
    while n <= dim {
        v *= 2.0 * PI * r * r / n as f64;
        n += 2;
    }
    v
}

/// A finite region of `Zⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub enum LatticeWindow {
    /// Closed ball `‖x - center‖ <= radius`.
    Ball { center: Point, radius: f64 },
    /// Integer box with inclusive bounds.
    Box { lo: Point, hi: Point },
}

impl LatticeWindow {
    pub fn ball(dim: usize, radius: f64) -> Self {
        LatticeWindow::Ball { center: vec![0; dim], radius }
    }

    pub fn ball_at(center: Point, radius: f64) -> Self {
        LatticeWindow::Ball { center, radius }
    }

    pub fn boxed(lo: Point, hi: Point) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        Ok(LatticeWindow::Box { lo, hi })
    }

    pub fn dim(&self) -> usize {
        match self {
            LatticeWindow::Ball { center, .. } => center.len(),
            LatticeWindow::Box { lo, .. } => lo.len(),
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        match self {
            LatticeWindow::Ball { center, radius } => {
                let d: i64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                d <= radius_sq_floor(*radius)
            }
            LatticeWindow::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(c, (l, h))| l <= c && c <= h),
        }
    }

    /// Smallest integer box containing the window; `None` if it is empty.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        match self {
            LatticeWindow::Ball { center, radius } => {
                let r2 = radius_sq_floor(*radius);
                if r2 < 0 {
                    return None;
                }
                let r = (r2 as f64).sqrt().floor() as i64;
                Some((center.iter().map(|c| c - r).collect(), center.iter().map(|c| c + r).collect()))
            }
            LatticeWindow::Box { lo, hi } => {
                if lo.iter().zip(hi).any(|(l, h)| l > h) {
                    None
                } else {
                    Some((lo.clone(), hi.clone()))
                }
            }
        }
    }

    /// Number of lattice cells in the bounding box.
    pub fn box_cells(&self) -> u128 {
        match self.bounding_box() {
            None => 0,
            Some((lo, hi)) => lo.iter().zip(&hi).map(|(l, h)| (h - l + 1) as u128).product(),
        }
    }

    /// All lattice points of the window in lexicographic order.
    pub fn points(&self) -> Vec<Point> {
        let Some((lo, hi)) = self.bounding_box() else { return Vec::new() };
        let mut out = Vec::new();
        for_each_in_box(&lo, &hi, |x| {
            if self.contains(x) {
                out.push(x.to_vec());
            }
        });
        out
    }

    /// Volume used to normalize counts: ball volume, or the box cell count.
    pub fn volume(&self) -> f64 {
        match self {
            LatticeWindow::Ball { center, radius } => ball_volume(center.len(), *radius),
            LatticeWindow::Box { .. } => self.box_cells() as f64,
        }
    }
}

impl fmt::Display for LatticeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        match self {
            LatticeWindow::Ball { center, radius } if center.iter().all(|&c| c == 0) => {
                write!(f, "ball:{}:{radius}", center.len())
            }
            LatticeWindow::Ball { center, radius } => write!(f, "ball@{}:{radius}", join(center)),
            LatticeWindow::Box { lo, hi } => write!(f, "box:{}:{}", join(lo), join(hi)),
        }
    }
}

/// Parses the `Display` forms `ball:n:R`, `ball@c1,..,cn:R` and `box:lo:hi`.
impl FromStr for LatticeWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("window '{s}': expected ball:n:R, ball@c1,..,cn:R or box:lo1,..:hi1,.."));
        let ints = |t: &str| -> Result<Vec<i64>> {
            t.split(',').map(|c| c.trim().parse::<i64>().map_err(|_| bad())).collect()
        };
        let radius = |t: &str| -> Result<f64> {
            let r: f64 = t.trim().parse().map_err(|_| bad())?;
            if r > 0.0 && r.is_finite() {
                Ok(r)
            } else {
                Err(Error::Domain(format!("window radius must be positive and finite, got {t}")))
            }
        };
        if let Some(rest) = s.strip_prefix("ball@") {
            let (c, r) = rest.rsplit_once(':').ok_or_else(bad)?;
            Ok(LatticeWindow::ball_at(ints(c)?, radius(r)?))
        } else if let Some(rest) = s.strip_prefix("ball:") {
            let (n, r) = rest.split_once(':').ok_or_else(bad)?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            Ok(LatticeWindow::ball(n, radius(r)?))
        } else if let Some(rest) = s.strip_prefix("box:") {
            let (lo, hi) = rest.split_once(':').ok_or_else(bad)?;
            LatticeWindow::boxed(ints(lo)?, ints(hi)?)
        } else {
            Err(bad())
        }
    }
}

/// Lattice points of the closed ball `B_ρ(0) ⊂ Zⁿ`, lexicographic.
pub fn ball_points(dim: usize, rho: f64) -> Vec<Point> {
    LatticeWindow::ball(dim, rho).points()
}

/// Visits every point of the inclusive box `[lo, hi]` in lexicographic order.
pub fn for_each_in_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let n = lo.len();
    let mut x = lo.to_vec();
    if n == 0 {
        f(&x);
        return;
    }
    loop {
        f(&x);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
        }
    }
}

// ---------------------------------------------------------------------------
// Sieve

/// Membership bitmap of a spec over an integer box, built by striking out
/// every point whose coordinates are all divisible by an excluded modulus.
#[derive(Debug, Clone)]
pub struct LatticeSieve {
    spec: FreenessSpec,
    lo: Point,
    hi: Point,
    strides: Vec<usize>,
    bits: BitVec<u64, Lsb0>,
}

impl LatticeSieve {
    pub fn new(spec: &FreenessSpec, lo: Point, hi: Point, cap: u64) -> Result<Self> {
        spec.check_dim(&lo)?;
        spec.check_dim(&hi)?;
        let extents: Vec<usize> = lo.iter().zip(&hi).map(|(l, h)| (h - l + 1).max(0) as usize).collect();
        let cells: u128 = extents.iter().map(|&e| e as u128).product();
        if cells > cap as u128 {
            return Err(Error::WindowCap { required: cells, cap });
        }
        let mut strides = vec![1usize; extents.len()];
        for i in (0..extents.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * extents[i + 1];
        }
        if cells == 0 {
            return Ok(LatticeSieve { spec: spec.clone(), lo, hi, strides, bits: BitVec::new() });
        }

        let max_abs = lo.iter().chain(&hi).map(|c| c.unsigned_abs()).max().unwrap_or(0);
        let moduli = spec.moduli_up_to(max_abs);

        // Slabs along the first axis are sieved independently and concatenated.
        let first_len = extents[0];
        let slab_rows = (first_len / (rayon::current_num_threads() * 4)).max(1);
        let slabs: Vec<(i64, i64)> = (0..first_len)
            .step_by(slab_rows)
            .map(|start| {
                let end = (start + slab_rows).min(first_len);
                (lo[0] + start as i64, lo[0] + end as i64 - 1)
            })
            .collect();
        let parts: Vec<BitVec<u64, Lsb0>> = slabs
            .par_iter()
            .map(|&(a, b)| {
                let mut slo = lo.clone();
                let mut shi = hi.clone();
                slo[0] = a;
                shi[0] = b;
                sieve_box(&slo, &shi, &moduli)
            })
            .collect();
        let mut bits = BitVec::with_capacity(cells as usize);
        for p in parts {
            bits.extend_from_bitslice(&p);
        }
        Ok(LatticeSieve { spec: spec.clone(), lo, hi, strides, bits })
    }

    /// Sieve covering the bounding box of a window.
    pub fn for_window(spec: &FreenessSpec, window: &LatticeWindow, cap: u64) -> Result<Self> {
        if window.dim() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), got: window.dim() });
        }
        match window.bounding_box() {
            Some((lo, hi)) => LatticeSieve::new(spec, lo, hi, cap),
            None => LatticeSieve::new(spec, vec![0; spec.dim()], vec![-1; spec.dim()], cap),
        }
    }

    pub fn spec(&self) -> &FreenessSpec {
        &self.spec
    }

    pub fn bounds(&self) -> (&[i64], &[i64]) {
        (&self.lo, &self.hi)
    }

    fn index(&self, x: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for ((c, (l, h)), s) in x.iter().zip(self.lo.iter().zip(&self.hi)).zip(&self.strides) {
            if c < l || c > h {
                return None;
            }
            idx += (c - l) as usize * s;
        }
        Some(idx)
    }

    /// Membership; points outside the box fall back to the gcd test.
    pub fn contains(&self, x: &[i64]) -> bool {
        match self.index(x) {
            Some(i) => self.bits[i],
            None => self.spec.member_unchecked(x),
        }
    }

    /// Membership of a point known to lie inside the box.
    #[inline]
    pub fn contains_in_box(&self, x: &[i64]) -> bool {
        let i: usize = x
            .iter()
            .zip(&self.lo)
            .zip(&self.strides)
            .map(|((c, l), s)| (c - l) as usize * s)
            .sum();
        self.bits[i]
    }

    pub(crate) fn bits(&self) -> &BitSlice<u64, Lsb0> {
        &self.bits
    }
}

fn sieve_box(lo: &[i64], hi: &[i64], moduli: &[u64]) -> BitVec<u64, Lsb0> {
    let n = lo.len();
    let extents: Vec<usize> = lo.iter().zip(hi).map(|(l, h)| (h - l + 1) as usize).collect();
    let cells: usize = extents.iter().product();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * extents[i + 1];
    }
    let mut bits: BitVec<u64, Lsb0> = BitVec::repeat(true, cells);
    let mut offsets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &m in moduli {
        let m = m as i64;
        let mut empty = false;
        for i in 0..n {
            offsets[i].clear();
            let mut c = lo[i].div_euclid(m) * m;
            if c < lo[i] {
                c += m;
            }
            while c <= hi[i] {
                offsets[i].push((c - lo[i]) as usize * strides[i]);
                c += m;
            }
            empty |= offsets[i].is_empty();
        }
        if empty {
            continue;
        }
        strike_multiples(&mut bits, &offsets, 0, 0);
    }
    // the origin lies in every excluded sublattice
    if lo.iter().zip(hi).all(|(l, h)| *l <= 0 && 0 <= *h) {
        let i: usize = lo.iter().zip(&strides).map(|(l, s)| (-l) as usize * s).sum();
        bits.set(i, false);
    }
    bits
}

fn strike_multiples(bits: &mut BitVec<u64, Lsb0>, offsets: &[Vec<usize>], axis: usize, base: usize) {
    if axis + 1 == offsets.len() {
        for &o in &offsets[axis] {
            bits.set(base + o, false);
        }
        return;
    }
    for &o in &offsets[axis] {
        strike_multiples(bits, offsets, axis + 1, base + o);
    }
}

/// The members of a spec inside a window.
#[derive(Debug, Clone)]
pub struct PointSet {
    window: LatticeWindow,
    sieve: LatticeSieve,
}

/// `{ x in window | is_member(spec, x) }`.
pub fn generate(spec: &FreenessSpec, window: &LatticeWindow, cap: u64) -> Result<PointSet> {
    let sieve = LatticeSieve::for_window(spec, window, cap)?;
    Ok(PointSet { window: window.clone(), sieve })
}

impl PointSet {
    pub fn spec(&self) -> &FreenessSpec {
        self.sieve.spec()
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn sieve(&self) -> &LatticeSieve {
        &self.sieve
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.window.contains(x) && self.sieve.contains(x)
    }

    /// Visits the members in lexicographic order.
    pub fn for_each(&self, mut f: impl FnMut(&[i64])) {
        let (lo, hi) = self.sieve.bounds();
        let bits = self.sieve.bits();
        let mut i = 0usize;
        for_each_in_box(lo, hi, |x| {
            if bits[i] && self.window.contains(x) {
                f(x);
            }
            i += 1;
        });
    }

    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        self.for_each(|x| out.push(x.to_vec()));
        out
    }

    /// Number of members, counted in parallel over first-axis rows.
    pub fn len(&self) -> usize {
        let (lo, hi) = self.sieve.bounds();
        if lo.iter().zip(hi).any(|(l, h)| l > h) {
            return 0;
        }
        (lo[0]..=hi[0])
            .into_par_iter()
            .map(|x0| {
                let mut slo = lo.to_vec();
                let mut shi = hi.to_vec();
                slo[0] = x0;
                shi[0] = x0;
                let mut c = 0usize;
                for_each_in_box(&slo, &shi, |x| {
                    if self.window.contains(x) && self.sieve.contains_in_box(x) {
                        c += 1;
                    }
                });
                c
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

// ---------------------------------------------------------------------------
// Admissibility

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// First modulus `m` at which the set meets every residue class.
    pub witness: Option<u64>,
}

/// Number of distinct residues of `points` modulo `m·Zⁿ`.
pub fn residue_count(points: &[Point], modulus: u64) -> usize {
    let m = modulus as i64;
    points
        .iter()
        .map(|x| x.iter().map(|c| c.rem_euclid(m)).collect::<Vec<_>>())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Checks `|A_m| < mⁿ` for every excluded modulus `m`. Only moduli with
/// `mⁿ <= |A|` can fail.
pub fn is_admissible(spec: &FreenessSpec, points: &[Point]) -> Result<Admissibility> {
    for x in points {
        spec.check_dim(x)?;
    }
    let size = points.len() as u128;
    let n = spec.dim() as f64;
    let bound = (size as f64).powf(1.0 / n).floor() as u64 + 1;
    for m in spec.moduli_up_to(bound) {
        if spec.classes(m) > size {
            continue;
        }
        if residue_count(points, m) as u128 == spec.classes(m) {
            return Ok(Admissibility { admissible: false, witness: Some(m) });
        }
    }
    Ok(Admissibility { admissible: true, witness: None })
}

// ---------------------------------------------------------------------------
// Holes

/// A lattice-periodic family of holes: `center + period·Zⁿ` are all centers of
/// holes of the requested inradius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hole {
    pub center: Point,
    pub period: u64,
    /// Modulus assigned to each ball point, in lexicographic ball order.
    pub moduli: Vec<u64>,
}

/// Builds a hole of inradius `rho` by CRT: ball point `x_i` gets its own
/// excluded modulus `m_i` and the center solves `t ≡ -x_i (mod m_i)`.
pub fn find_hole(spec: &FreenessSpec, rho: f64) -> Result<Hole> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("inradius must be positive, got {rho}")));
    }
    let ball = ball_points(spec.dim(), rho);
    let moduli: Vec<u64> = match spec {
        FreenessSpec::KFree { k, .. } => {
            let mut primes = Vec::new();
            let mut limit = 64u64;
            while primes.len() < ball.len() {
                primes = arith::primes_up_to(limit);
                limit *= 2;
            }
            primes
                .into_iter()
                .take(ball.len())
                .map(|p| p.checked_pow(*k).ok_or_else(|| Error::Overflow(format!("{p}^{k}"))))
                .collect::<Result<_>>()?
        }
        FreenessSpec::BFree { moduli, .. } => {
            if moduli.len() < ball.len() {
                return Err(Error::BTooSmall { needed: ball.len(), available: moduli.len() });
            }
            moduli[..ball.len()].to_vec()
        }
    };
    let congruences = ball
        .iter()
        .zip(&moduli)
        .map(|(x, &m)| {
            let neg: Vec<i64> = x.iter().map(|c| -c).collect();
            ResidueVector::new(&neg, m)
        })
        .collect::<Result<Vec<_>>>()?;
    let (center, period) = crt_solve(&congruences)?;
    Ok(Hole { center, period, moduli })
}

/// True iff `center + x` is excluded for every `x` in the ball.
pub fn verify_hole(spec: &FreenessSpec, center: &[i64], rho: f64) -> Result<bool> {
    for x in ball_points(spec.dim(), rho) {
        let y: Vec<i64> = x
            .iter()
            .zip(center)
            .map(|(a, c)| a.checked_add(*c).ok_or_else(|| Error::Overflow("hole translate".into())))
            .collect::<Result<_>>()?;
        if spec.is_member(&y)? {
            return Ok(false);
        }
    }
    Ok(true)
}
