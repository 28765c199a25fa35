//! The k-free integers of `Z[√2]` and their diffraction.
//!
//! `Z[√2]` is norm-Euclidean, so every ideal is principal and is carried by a
//! generator. Rational primes split for `p ≡ ±1 (mod 8)`, stay inert for
//! `p ≡ ±3 (mod 8)` and ramify at 2 as `(√2)²`. The Minkowski embedding
//! `α ↦ (α, α')` maps `Z[√2]` onto the lattice `Z(1,1) ⊕ Z(√2,-√2)` of area
//! `2√2`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::arith::{self, DecayBound, EulerFactorSpec, EulerProduct, ZetaReference};
use crate::error::{Error, Result};
use crate::pointsets::radius_sq_floor;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// `a + b√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    pub a: i64,
    pub b: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { a: 0, b: 0 };
    pub const ONE: QuadInt = QuadInt { a: 1, b: 0 };
    pub const SQRT2: QuadInt = QuadInt { a: 0, b: 1 };
    /// The fundamental unit `1 + √2`.
    pub const EPSILON: QuadInt = QuadInt { a: 1, b: 1 };

    pub fn new(a: i64, b: i64) -> Self {
        QuadInt { a, b }
    }

    pub fn from_int(a: i64) -> Self {
        QuadInt { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn norm(&self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        a * a - 2 * b * b
    }

    pub fn trace(&self) -> i128 {
        2 * self.a as i128
    }

    pub fn conj(&self) -> Self {
        QuadInt { a: self.a, b: -self.b }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs() == 1
    }

    pub fn checked_mul(&self, o: &QuadInt) -> Option<QuadInt> {
        let (a, b, c, d) = (self.a as i128, self.b as i128, o.a as i128, o.b as i128);
        let x = a * c + 2 * b * d;
        let y = a * d + b * c;
        Some(QuadInt { a: i64::try_from(x).ok()?, b: i64::try_from(y).ok()? })
    }

    pub fn pow(&self, e: u32) -> Option<QuadInt> {
        let mut r = QuadInt::ONE;
        for _ in 0..e {
            r = r.checked_mul(self)?;
        }
        Some(r)
    }

    /// `self / d` if it lies in `Z[√2]`.
    pub fn div_exact(&self, d: &QuadInt) -> Option<QuadInt> {
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let (a, b, c, e) = (self.a as i128, self.b as i128, d.a as i128, -(d.b as i128));
        let x = a * c + 2 * b * e;
        let y = a * e + b * c;
        if x % n != 0 || y % n != 0 {
            return None;
        }
        Some(QuadInt { a: i64::try_from(x / n).ok()?, b: i64::try_from(y / n).ok()? })
    }

    /// Quotient rounded to the nearest lattice point; `|N(self - q·d)| < |N(d)|`.
    fn div_round(&self, d: &QuadInt) -> QuadInt {
        let mut n = d.norm();
        let (a, b, c, e) = (self.a as i128, self.b as i128, d.a as i128, -(d.b as i128));
        let mut x = a * c + 2 * b * e;
        let mut y = a * e + b * c;
        if n < 0 {
            n = -n;
            x = -x;
            y = -y;
        }
        let round = |v: i128| (2 * v + n).div_euclid(2 * n) as i64;
        QuadInt { a: round(x), b: round(y) }
    }

    /// Real embedding `a + b√2`.
    pub fn value(&self) -> f64 {
        self.a as f64 + self.b as f64 * SQRT2
    }

    /// Conjugate embedding `a - b√2`.
    pub fn conj_value(&self) -> f64 {
        self.a as f64 - self.b as f64 * SQRT2
    }

    /// A canonical associate: balanced embeddings, then smallest `|b|`, then
    /// smallest `|a|`, with `a > 0` (or `b > 0` when `a = 0`).
    pub fn canonical(&self) -> QuadInt {
        if self.is_zero() {
            return *self;
        }
        let eps = QuadInt::EPSILON;
        let eps_inv = QuadInt::new(-1, 1);
        let e = 1.0 + SQRT2;
        let mut x = *self;
        for _ in 0..200 {
            let ratio = (x.value() / x.conj_value()).abs();
            if ratio >= e {
                x = x * eps_inv;
            } else if ratio < 1.0 / e {
                x = x * eps;
            } else {
                break;
            }
        }
        let mut best = x;
        let mut cand = x;
        let mut cands = vec![x];
        for _ in 0..2 {
            cand = cand * eps;
            cands.push(cand);
        }
        cand = x;
        for _ in 0..2 {
            cand = cand * eps_inv;
            cands.push(cand);
        }
        let key = |q: &QuadInt| (q.b.unsigned_abs(), q.a.unsigned_abs(), q.b < 0);
        for c in cands {
            let c = if c.a < 0 || (c.a == 0 && c.b < 0) { -c } else { c };
            if key(&c) < key(&best) || (best.a < 0 || (best.a == 0 && best.b < 0)) {
                best = c;
            }
        }
        best
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: QuadInt) -> QuadInt {
        QuadInt { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: QuadInt) -> QuadInt {
        QuadInt { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { a: -self.a, b: -self.b }
    }
}

/// Panics on `i64` overflow, like primitive integer arithmetic.
impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, o: QuadInt) -> QuadInt {
        self.checked_mul(&o).expect("Z[√2] multiplication overflowed i64")
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "√2"),
            (0, -1) => write!(f, "-√2"),
            (0, b) => write!(f, "{b}√2"),
            (a, 1) => write!(f, "{a}+√2"),
            (a, -1) => write!(f, "{a}-√2"),
            (a, b) if b > 0 => write!(f, "{a}+{b}√2"),
            (a, b) => write!(f, "{a}-{}√2", -b),
        }
    }
}

/// Greatest common divisor in `Z[√2]`, as a canonical associate.
pub fn gcd(x: &QuadInt, y: &QuadInt) -> QuadInt {
    let (mut u, mut v) = (*x, *y);
    while !v.is_zero() {
        let r = u - u.div_round(&v) * v;
        u = v;
        v = r;
    }
    u.canonical()
}

/// `(1, 1)` and `(√2, -√2)`.
pub fn minkowski_embed(x: &QuadInt) -> [f64; 2] {
    [x.value(), x.conj_value()]
}

/// `|det L|` from the embedded basis `j(1), j(√2)`.
pub fn lattice_covolume() -> f64 {
    let [a, b] = minkowski_embed(&QuadInt::ONE);
    let [c, d] = minkowski_embed(&QuadInt::SQRT2);
    (a * d - b * c).abs()
}

// ---------------------------------------------------------------------------
// Prime ideals

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeClass {
    Ramified,
    Split,
    Inert,
}

impl fmt::Display for PrimeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeClass::Ramified => "ramified",
            PrimeClass::Split => "split",
            PrimeClass::Inert => "inert",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeIdealZr2 {
    pub class: PrimeClass,
    pub p: u64,
    pub generator: QuadInt,
    pub norm: u64,
}

impl PartialOrd for PrimeIdealZr2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeIdealZr2 {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.norm, self.p, self.generator.b < 0, self.generator).cmp(&(o.norm, o.p, o.generator.b < 0, o.generator))
    }
}

impl fmt::Display for PrimeIdealZr2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.generator)
    }
}

pub fn classify(p: u64) -> PrimeClass {
    match p % 8 {
        2 => PrimeClass::Ramified,
        1 | 7 => PrimeClass::Split,
        _ => PrimeClass::Inert,
    }
}

fn isqrt(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `π` with `N(π) = p` for a split prime, searching `|b| <= ⌈√(2p)⌉`.
pub fn split_generator(p: u64) -> Result<QuadInt> {
    let bound = isqrt(2 * p as u128) + 1;
    for b in 0..=bound {
        for target in [p as i128 + 2 * (b * b) as i128, 2 * (b * b) as i128 - p as i128] {
            if target < 0 {
                continue;
            }
            let a = isqrt(target as u128);
            if a * a == target as u128 {
                return Ok(QuadInt::new(a as i64, b as i64).canonical());
            }
        }
    }
    Err(Error::Resource(format!("no element of norm ±{p} with |b| <= {bound}")))
}

/// The prime ideals above `p`: one for ramified and inert, two for split.
pub fn primes_above(p: u64) -> Result<Vec<PrimeIdealZr2>> {
    Ok(match classify(p) {
        PrimeClass::Ramified => vec![PrimeIdealZr2 { class: PrimeClass::Ramified, p, generator: QuadInt::SQRT2, norm: 2 }],
        PrimeClass::Inert => vec![PrimeIdealZr2 {
            class: PrimeClass::Inert,
            p,
            generator: QuadInt::from_int(p as i64),
            norm: p * p,
        }],
        PrimeClass::Split => {
            let g = split_generator(p)?;
            let mut v = vec![
                PrimeIdealZr2 { class: PrimeClass::Split, p, generator: g, norm: p },
                PrimeIdealZr2 { class: PrimeClass::Split, p, generator: g.conj().canonical(), norm: p },
            ];
            v.sort();
            v
        }
    })
}

/// All prime ideals of norm at most `bound`, ordered by norm.
pub fn prime_ideals_up_to(bound: u64) -> Result<Vec<PrimeIdealZr2>> {
    if bound < 2 {
        return Err(Error::Domain(format!("norm bound must be at least 2, got {bound}")));
    }
    let mut out = Vec::new();
    for p in arith::primes_up_to(bound) {
        for id in primes_above(p)? {
            if id.norm <= bound {
                out.push(id);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Largest `j` with `π^j | α`.
pub fn ideal_valuation(x: &QuadInt, ideal: &PrimeIdealZr2) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::Domain("valuation of 0 is infinite".into()));
    }
    let mut v = 0;
    let mut y = *x;
    while let Some(q) = y.div_exact(&ideal.generator) {
        y = q;
        v += 1;
    }
    Ok(v)
}

/// Prime ideal factorization `(α) = ∏ 𝔭^e`.
pub fn factor_ideal(x: &QuadInt) -> Result<Vec<(PrimeIdealZr2, u32)>> {
    if x.is_zero() {
        return Err(Error::Domain("0 has no factorization".into()));
    }
    let n = x.norm().unsigned_abs();
    let n = u64::try_from(n).map_err(|_| Error::Overflow("norm exceeds u64".into()))?;
    let mut out = Vec::new();
    for (p, e) in arith::factorize(n) {
        match classify(p) {
            PrimeClass::Ramified => out.push((primes_above(p)?[0], e)),
            PrimeClass::Inert => out.push((primes_above(p)?[0], e / 2)),
            PrimeClass::Split => {
                for id in primes_above(p)? {
                    let v = ideal_valuation(x, &id)?;
                    if v > 0 {
                        out.push((id, v));
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `(α) ⊄ 𝔭^k` for every prime ideal `𝔭`. Units are k-free.
pub fn is_kfree_nf(x: &QuadInt, k: u32) -> Result<bool> {
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    Ok(factor_ideal(x)?.iter().all(|&(_, e)| e < k))
}

// ---------------------------------------------------------------------------
// Generation

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NfPoint {
    pub preimage: QuadInt,
    pub position: [f64; 2],
}

/// `{ j(α) : ‖j(α)‖ <= R, α k-free }`, ordered by `(a, b)`.
///
/// `‖j(a + b√2)‖² = 2a² + 4b²`, so membership in the closed ball is exact.
pub fn generate_nf(k: u32, radius: f64, cap: u64) -> Result<Vec<NfPoint>> {
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let r2 = radius_sq_floor(radius);
    if r2 < 2 {
        return Ok(Vec::new());
    }
    let amax = isqrt((r2 / 2) as u128) as i64;
    let bmax = isqrt((r2 / 4) as u128) as i64;
    let cells = (2 * amax as u128 + 1) * (2 * bmax as u128 + 1);
    if cells > cap as u128 {
        return Err(Error::WindowCap { required: cells, cap });
    }
    let rows: Vec<Result<Vec<NfPoint>>> = (-amax..=amax)
        .into_par_iter()
        .map(|a| {
            let mut row = Vec::new();
            for b in -bmax..=bmax {
                if 2 * a * a + 4 * b * b > r2 || (a == 0 && b == 0) {
                    continue;
                }
                let x = QuadInt::new(a, b);
                if is_kfree_nf(&x, k)? {
                    row.push(NfPoint { preimage: x, position: minkowski_embed(&x) });
                }
            }
            Ok(row)
        })
        .collect();
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Dedekind zeta

/// `ζ_K(s)` for `K = Q(√2)`, as a certified Euler product.
///
/// The reciprocal factors are `1 - 2^-s`, `(1 - p^-s)²` for split and
/// `1 - p^-2s` for inert primes; dividing by `1 - p^-s` leaves residual
/// factors within `p^-s` of 1, and `ζ(s)` supplies the rest.
pub fn dedekind_zeta(s: f64, rel_err: f64) -> Result<EulerProduct> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("ζ_K(s) needs s > 1, got {s}")));
    }
    let spec = EulerFactorSpec::new(
        format!("zeta_Q(sqrt2)^-1 s={s}"),
        move |p| {
            let x = (p as f64).powf(-s);
            match classify(p) {
                PrimeClass::Ramified => x,
                PrimeClass::Split => x * (2.0 - x),
                PrimeClass::Inert => x * x,
            }
        },
        DecayBound { c: 2.0, s, threshold: 2 },
    )
    .with_reference(ZetaReference { power: 1, s }, DecayBound { c: 1.0, s, threshold: 2 });
    // a relative bound e on the reciprocal gives e / (1 - e) on ζ_K
    let inner = rel_err / (1.0 + rel_err);
    let r = arith::euler_product_cached(&spec, inner)?;
    Ok(EulerProduct { value: 1.0 / r.value, certified_bound: r.certified_bound / (1.0 - r.certified_bound), cutoff: r.cutoff })
}

/// Density of the embedded k-free integers: `1 / (2√2 ζ_K(k))`.
pub fn density_nf(k: u32, rel_err: f64) -> Result<EulerProduct> {
    let z = dedekind_zeta(k as f64, rel_err * 0.5)?;
    Ok(EulerProduct {
        value: 1.0 / (lattice_covolume() * z.value),
        certified_bound: z.certified_bound / (1.0 - z.certified_bound) + 4.0 * f64::EPSILON,
        cutoff: z.cutoff,
    })
}

// ---------------------------------------------------------------------------
// Diffraction

/// `a + b√2` with rational `a, b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadRational {
    pub a: Ratio<i64>,
    pub b: Ratio<i64>,
}

impl QuadRational {
    pub fn new(a: Ratio<i64>, b: Ratio<i64>) -> Self {
        QuadRational { a, b }
    }

    pub fn is_zero(&self) -> bool {
        *self.a.numer() == 0 && *self.b.numer() == 0
    }

    pub fn embed(&self) -> [f64; 2] {
        let a = *self.a.numer() as f64 / *self.a.denom() as f64;
        let b = *self.b.numer() as f64 / *self.b.denom() as f64;
        [a + b * SQRT2, a - b * SQRT2]
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

/// Parses `a,b` with rational parts, e.g. `1/4,0` for `1/4`.
impl std::str::FromStr for QuadRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("expected 'a,b', got '{s}'")))?;
        let p = |t: &str| t.trim().parse::<Ratio<i64>>().map_err(|e| Error::Parse(format!("'{t}': {e}")));
        Ok(QuadRational { a: p(a)?, b: p(b)? })
    }
}

/// `den(λ) = { x ∈ O_K : xλ ∈ O_K* }` as a generator and its factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenominatorIdeal {
    pub generator: QuadInt,
    pub factors: Vec<(PrimeIdealZr2, u32)>,
}

/// Uses `O_K* = (√2/4) O_K`: `xλ ∈ O_K*` iff `x · 2√2 λ ∈ O_K`, so `den(λ)` is
/// the denominator of `μ = 2√2 λ` written in lowest terms.
pub fn denominator_ideal(l: &QuadRational) -> Result<DenominatorIdeal> {
    if l.is_zero() {
        return Ok(DenominatorIdeal { generator: QuadInt::ONE, factors: Vec::new() });
    }
    // μ = 2√2 (a + b√2) = 4b + 2a√2
    let ma = l.b * 4;
    let mb = l.a * 2;
    let d = ma.denom().lcm(mb.denom());
    let num = QuadInt::new(ma.numer() * (d / ma.denom()), mb.numer() * (d / mb.denom()));
    let den = QuadInt::from_int(d);
    let g = gcd(&num, &den);
    let gen = den.div_exact(&g).ok_or_else(|| Error::Overflow("denominator reduction".into()))?.canonical();
    Ok(DenominatorIdeal { generator: gen, factors: factor_ideal(&gen)? })
}

/// `I(ℓ) = (dens ∏_{𝔭 | den ℓ} (N(𝔭)^k - 1)^(-1))²` when `den ℓ` is (k+1)-free.
pub fn intensity_nf(l: &QuadRational, k: u32, rel_err: f64) -> Result<f64> {
    let den = denominator_ideal(l)?;
    let dens = density_nf(k, rel_err)?.value;
    Ok(intensity_from_den(&den, k, dens))
}

fn intensity_from_den(den: &DenominatorIdeal, k: u32, dens: f64) -> f64 {
    if den.factors.iter().any(|&(_, e)| e > k) {
        return 0.0;
    }
    let amp = den.factors.iter().fold(dens, |acc, (id, _)| acc / ((id.norm as f64).powi(k as i32) - 1.0));
    amp * amp
}

#[derive(Debug, Clone, PartialEq)]
pub struct NfAtom {
    pub lambda: QuadRational,
    pub position: [f64; 2],
    pub den: QuadInt,
    pub intensity: f64,
}

/// Atoms `j(λ)` in the closed box `[lo, hi]` with `I(λ)/I(0) >= rel_threshold`,
/// ordered by denominator norm, denominator and position.
///
/// Box membership is tested in floating point with a `1e-12` margin.
pub fn support_enumerate_nf(k: u32, lo: [f64; 2], hi: [f64; 2], rel_threshold: f64, rel_err: f64, cap: u64) -> Result<Vec<NfAtom>> {
    if !(rel_threshold > 0.0 && rel_threshold <= 1.0) {
        return Err(Error::Domain(format!("relative threshold must lie in (0, 1], got {rel_threshold}")));
    }
    let dens = density_nf(k, rel_err)?.value;
    let max_weight = (1.0 / rel_threshold) * (1.0 + 1e-12);
    let w = |n: u64| ((n as f64).powi(k as i32) - 1.0).powi(2);
    let mut bound = 2u64;
    while w(bound) <= max_weight {
        bound *= 2;
    }
    let ideals: Vec<PrimeIdealZr2> = prime_ideals_up_to(bound)?.into_iter().filter(|i| w(i.norm) <= max_weight).collect();

    // products of distinct prime ideals with exponents 1..=k
    let mut dens_list: Vec<(QuadInt, Vec<(PrimeIdealZr2, u32)>)> = Vec::new();
    fn dfs(
        ideals: &[PrimeIdealZr2],
        start: usize,
        gen: QuadInt,
        factors: &mut Vec<(PrimeIdealZr2, u32)>,
        weight: f64,
        max_weight: f64,
        k: u32,
        w: &dyn Fn(u64) -> f64,
        out: &mut Vec<(QuadInt, Vec<(PrimeIdealZr2, u32)>)>,
    ) {
        out.push((gen.canonical(), factors.clone()));
        for i in start..ideals.len() {
            let nw = weight * w(ideals[i].norm);
            if nw > max_weight {
                continue;
            }
            let mut g = gen;
            for e in 1..=k {
                g = match g.checked_mul(&ideals[i].generator) {
                    Some(v) => v,
                    None => break,
                };
                factors.push((ideals[i], e));
                dfs(ideals, i + 1, g, factors, nw, max_weight, k, w, out);
                factors.pop();
            }
        }
    }
    dfs(&ideals, 0, QuadInt::ONE, &mut Vec::new(), 1.0, max_weight, k, &w, &mut dens_list);

    let m = lo.iter().chain(&hi).fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut atoms = Vec::new();
    let mut visited: u128 = 0;
    for (beta, factors) in dens_list {
        let i = intensity_from_den(&DenominatorIdeal { generator: beta, factors }, k, dens);
        // λ = (√2/4) γ/β with γ = c + d√2 coprime to β
        let spread = m * (beta.value().abs() + beta.conj_value().abs());
        let cmax = (SQRT2 * spread).ceil() as i64 + 1;
        let dmax = (spread / 2.0).ceil() as i64 + 1;
        visited += (2 * cmax as u128 + 1) * (2 * dmax as u128 + 1);
        if visited > cap as u128 {
            return Err(Error::WindowCap { required: visited, cap });
        }
        let nb = beta.norm();
        for c in -cmax..=cmax {
            for d in -dmax..=dmax {
                let gamma = QuadInt::new(c, d);
                // √2 γ / (4β) = √2 γ β' / (4 N(β)) = (2d + c√2) β' / (4 N(β))
                let num = QuadInt::new(2 * d, c) * beta.conj();
                let lam = QuadRational::new(
                    Ratio::new(num.a, 4 * nb as i64),
                    Ratio::new(num.b, 4 * nb as i64),
                );
                let pos = lam.embed();
                if (0..2).any(|t| pos[t] < lo[t] - 1e-12 || pos[t] > hi[t] + 1e-12) {
                    continue;
                }
                if !gcd(&gamma, &beta).is_unit() {
                    continue;
                }
                atoms.push(NfAtom { lambda: lam, position: pos, den: beta, intensity: i });
            }
        }
    }
    atoms.sort_by(|x, y| {
        (x.den.norm().abs(), x.den)
            .cmp(&(y.den.norm().abs(), y.den))
            .then(x.position[0].total_cmp(&y.position[0]))
            .then(x.position[1].total_cmp(&y.position[1]))
    });
    Ok(atoms)
}
