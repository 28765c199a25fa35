//! Exact integer number theory and certified truncated Euler products.
//!
//! Everything here is pure and deterministic. The Euler product driver sums
//! logarithms of the factors over disjoint prime segments in parallel and
//! combines the partial sums in segment order, so the result does not depend
//! on the number of worker threads.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Greatest common divisor of two unsigned integers, `gcd(0, 0) = 0`.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Greatest common divisor of the absolute values of the coordinates.
pub fn gcd_coords(x: &[i64]) -> u64 {
    x.iter().fold(0u64, |g, &c| gcd(g, c.unsigned_abs()))
}

/// Prime factorization by trial division, ascending primes with multiplicity.
/// `factorize(1)` is empty; `factorize(0)` is empty as well.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        push(d, &mut n);
        d += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// True iff no prime power `p^k` divides `n` (for `n >= 1`).
pub fn is_k_free(n: u64, k: u32) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e < k)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

/// Möbius function.
pub fn moebius(n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::Domain("moebius(0) is undefined".into()));
    }
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

// ---------------------------------------------------------------------------
// Prime generation

const SEGMENT: u64 = 1 << 18;

/// Segmented sieve of Eratosthenes. Holds the base primes up to `sqrt(limit)`.
#[derive(Debug, Clone)]
pub struct SegmentedSieve {
    limit: u64,
    base: Vec<u64>,
}

impl SegmentedSieve {
    pub fn new(limit: u64) -> Self {
        let root = (limit as f64).sqrt() as u64 + 2;
        let mut flags = vec![true; root as usize + 1];
        let mut base = Vec::new();
        for n in 2..=root as usize {
            if flags[n] {
                base.push(n as u64);
                let mut m = n * n;
                while m <= root as usize {
                    flags[m] = false;
                    m += n;
                }
            }
        }
        SegmentedSieve { limit, base }
    }

    /// Half-open segments `[lo, hi)` covering `(from, limit]`.
    pub fn segments(&self, from: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut lo = from + 1;
        let end = self.limit + 1;
        while lo < end {
            let hi = (lo + SEGMENT).min(end);
            out.push((lo, hi));
            lo = hi;
        }
        out
    }

    /// Calls `f` for every prime in `[lo, hi)`, ascending. `hi - 1` must not
    /// exceed the sieve limit.
    pub fn for_each_in_segment(&self, lo: u64, hi: u64, mut f: impl FnMut(u64)) {
        if hi <= lo {
            return;
        }
        let len = (hi - lo) as usize;
        let mut composite = vec![false; len];
        for &p in &self.base {
            if p * p >= hi {
                break;
            }
            let mut start = lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut m = start;
            while m < hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            let n = lo + i as u64;
            if !c && n >= 2 {
                f(n);
            }
        }
    }
}

/// Calls `f` for every prime `p` with `from < p <= to`, ascending.
pub fn for_each_prime_in(from: u64, to: u64, mut f: impl FnMut(u64)) {
    if to < 2 || to <= from {
        return;
    }
    let sieve = SegmentedSieve::new(to);
    for (lo, hi) in sieve.segments(from) {
        sieve.for_each_in_segment(lo, hi, &mut f);
    }
}

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_prime_in(0, limit, |p| out.push(p));
    out
}

// ---------------------------------------------------------------------------
// Residues and CRT

/// An integer vector reduced componentwise into `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueVector {
    coords: Vec<i64>,
    modulus: u64,
}

impl ResidueVector {
    pub fn new(coords: &[i64], modulus: u64) -> Result<Self> {
        if modulus == 0 || modulus > i64::MAX as u64 {
            return Err(Error::Domain(format!("invalid modulus {modulus}")));
        }
        let m = modulus as i64;
        Ok(ResidueVector {
            coords: coords.iter().map(|c| c.rem_euclid(m)).collect(),
            modulus,
        })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `self + [t]_m`.
    pub fn translate(&self, t: &[i64]) -> Self {
        let m = self.modulus as i64;
        ResidueVector {
            coords: self
                .coords
                .iter()
                .zip(t)
                .map(|(c, d)| (c + d.rem_euclid(m)).rem_euclid(m))
                .collect(),
            modulus: self.modulus,
        }
    }

    /// True iff `x ≡ self (mod m·Zⁿ)`.
    pub fn contains(&self, x: &[i64]) -> bool {
        let m = self.modulus as i64;
        x.iter().zip(&self.coords).all(|(a, c)| a.rem_euclid(m) == *c)
    }
}

impl fmt::Display for ResidueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({}) mod {}", parts.join(","), self.modulus)
    }
}

/// Simultaneous solution of `t ≡ target_i (mod m_i·Zⁿ)` for pairwise coprime
/// moduli. Returns the canonical representative in `[0, ∏m_i)ⁿ` and `∏m_i`.
pub fn crt_solve(congruences: &[ResidueVector]) -> Result<(Vec<i64>, u64)> {
    let first = congruences
        .first()
        .ok_or_else(|| Error::Domain("crt_solve needs at least one congruence".into()))?;
    let dim = first.dim();
    for c in congruences {
        if c.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: c.dim() });
        }
    }
    for (i, a) in congruences.iter().enumerate() {
        for b in &congruences[i + 1..] {
            if gcd(a.modulus, b.modulus) != 1 {
                return Err(Error::NonCoprimeModuli { a: a.modulus, b: b.modulus });
            }
        }
    }

    let mut sol: Vec<i128> = first.coords.iter().map(|&c| c as i128).collect();
    let mut modulus: i128 = first.modulus as i128;
    for c in &congruences[1..] {
        let m = c.modulus as i128;
        let next = modulus
            .checked_mul(m)
            .filter(|&v| v <= i64::MAX as i128)
            .ok_or_else(|| Error::Overflow("CRT modulus exceeds i64".into()))?;
        // modulus * inv ≡ 1 (mod m)
        let inv = modulus.extended_gcd(&m).x.rem_euclid(m);
        for (s, &r) in sol.iter_mut().zip(&c.coords) {
            let k = ((r as i128 - *s).rem_euclid(m) * inv).rem_euclid(m);
            *s = (*s + modulus * k).rem_euclid(next);
        }
        modulus = next;
    }
    Ok((sol.into_iter().map(|s| s as i64).collect(), modulus as u64))
}

// ---------------------------------------------------------------------------
// Riemann zeta for real s > 1

// B_2, B_4, ..., B_22
const BERNOULLI_EVEN: [f64; 11] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

/// Riemann zeta for real `s > 1` by Euler–Maclaurin summation.
///
/// Returns the value and an absolute error bound (remainder of the
/// asymptotic series plus a rounding allowance).
pub fn riemann_zeta(s: f64) -> Result<(f64, f64)> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("zeta needs real s > 1, got {s}")));
    }
    const N: usize = 20;
    const M: usize = 10;
    let n = N as f64;
    let mut head = 0.0;
    for k in (1..N).rev() {
        head += (k as f64).powf(-s);
    }
    let mut sum = head + n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);

    // rising = s (s+1) ... (s+2j-2), fact = (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut power = n.powf(-s - 1.0);
    for j in 1..=M {
        sum += BERNOULLI_EVEN[j - 1] / fact * rising * power;
        let jj = j as f64;
        rising *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
        fact *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
        power /= n * n;
    }
    let remainder = (BERNOULLI_EVEN[M] / fact * rising * power).abs();
    Ok((sum, remainder + 16.0 * f64::EPSILON * sum))
}

// ---------------------------------------------------------------------------
// Certified Euler products

/// `|1 - g(p)| <= c · p^(-s)` for every prime `p > threshold`, where `g` is the
/// factor (or, with a zeta reference, the residual factor).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayBound {
    pub c: f64,
    pub s: f64,
    pub threshold: u64,
}

/// Declares that the factor behaves like `(1 - p^(-s))^power`. The product is
/// then evaluated as `ζ(s)^(-power)` times the product of the residual factors
/// `factor(p) / (1 - p^(-s))^power`, which converge much faster.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaReference {
    pub power: i32,
    pub s: f64,
}

type DeficitFn = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

/// An infinite product `∏_p factor(p)` over primes, with `factor(p) = 1 - deficit(p)`.
///
/// The deficit form keeps full relative precision for primes where the
/// factor rounds to 1.0.
#[derive(Clone)]
pub struct EulerFactorSpec {
    label: String,
    deficit: DeficitFn,
    decay: DecayBound,
    reference: Option<ZetaReference>,
    skip_through: u64,
}

impl fmt::Debug for EulerFactorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EulerFactorSpec")
            .field("label", &self.label)
            .field("decay", &self.decay)
            .field("reference", &self.reference)
            .field("skip_through", &self.skip_through)
            .finish()
    }
}

impl EulerFactorSpec {
    pub fn new(
        label: impl Into<String>,
        deficit: impl Fn(u64) -> f64 + Send + Sync + 'static,
        decay: DecayBound,
    ) -> Self {
        EulerFactorSpec {
            label: label.into(),
            deficit: Arc::new(deficit),
            decay,
            reference: None,
            skip_through: 0,
        }
    }

    /// Accelerate with `ζ(s)^(-power)`; `decay` must then bound the residual.
    pub fn with_reference(mut self, reference: ZetaReference, residual_decay: DecayBound) -> Self {
        self.reference = Some(reference);
        self.decay = residual_decay;
        self
    }

    /// Restrict the product to primes `p > bound`.
    pub fn skip_through(mut self, bound: u64) -> Self {
        self.skip_through = bound;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn factor(&self, p: u64) -> f64 {
        1.0 - (self.deficit)(p)
    }

    /// `∏_p (1 - c·p^(-s))`, accelerated by `ζ(s)^(-c)` when `c` is a positive
    /// integer.
    pub fn power_deficit(c: u32, s: u32) -> Self {
        let cf = c as f64;
        let sf = s as f64;
        let label = format!("prod_p(1-{c}p^-{s})");
        let base = EulerFactorSpec::new(
            label,
            move |p| cf * (p as f64).powf(-sf),
            DecayBound { c: cf, s: sf, threshold: min_prime_with_small_deficit(cf, sf) },
        );
        if c == 0 {
            return base;
        }
        // log g = -Σ_{j≥2} (c^j - c) x^j / j, so |log g| <= (cx)^2 and
        // |1 - g| <= 2 (cx)^2 once cx <= 1/2.
        base.with_reference(
            ZetaReference { power: c as i32, s: sf },
            DecayBound { c: 2.0 * cf * cf, s: 2.0 * sf, threshold: min_prime_with_small_deficit(cf, sf) },
        )
    }
}

/// Smallest integer `t` with `c·p^(-s) <= 1/2` for all `p > t`.
fn min_prime_with_small_deficit(c: f64, s: f64) -> u64 {
    if c <= 0.0 {
        return 0;
    }
    ((2.0 * c).powf(1.0 / s)).floor() as u64
}

/// A truncated Euler product with a certified relative error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerProduct {
    pub value: f64,
    /// Certified bound on `|value / true_value - 1|`.
    pub certified_bound: f64,
    /// Largest prime included in the finite product.
    pub cutoff: u64,
}

/// Largest cutoff the driver will sieve to.
pub const MAX_EULER_CUTOFF: u64 = 20_000_000_000;

/// Rosser–Schoenfeld: `π(x) < 1.25506 x / ln x` for `x > 1`.
const PRIME_COUNT_CONST: f64 = 1.25506;

/// Upper bound on `Σ_{p > cutoff} p^(-s)`.
///
/// Takes the minimum of the integer-sum bound `P^(1-s)/(s-1)` and the
/// prime-counting bound `1.25506·s·P^(1-s)/((s-1)·ln P)`.
pub fn prime_tail_bound(cutoff: u64, s: f64) -> f64 {
    let p = cutoff.max(2) as f64;
    let integral = p.powf(1.0 - s) / (s - 1.0);
    let prime = PRIME_COUNT_CONST * s * integral / p.ln();
    integral.min(prime)
}

fn log_tail_bound(decay: &DecayBound, cutoff: u64) -> f64 {
    2.0 * decay.c * prime_tail_bound(cutoff, decay.s)
}

#[derive(Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
    abs: f64,
    count: u64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
        self.count += 1;
    }

    pub(crate) fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
        self.abs += other.abs - other.sum.abs() - other.comp.abs();
        self.count += other.count.saturating_sub(2);
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub(crate) fn abs_sum(&self) -> f64 {
        self.abs
    }
}

/// Evaluates `∏_p factor(p)` to relative error `rel_err`.
///
/// Picks the smallest prime cutoff `P` whose analytic tail bound
/// `2C·Σ_{p>P} p^(-s)` certifies the requested relative error, multiplies the
/// factors for `p <= P` in log space and reports the certified bound. A factor
/// outside `(0, 1]` is a domain error.
pub fn euler_product(spec: &EulerFactorSpec, rel_err: f64) -> Result<EulerProduct> {
    if !(rel_err > 0.0) {
        return Err(Error::Domain(format!("rel_err must be positive, got {rel_err}")));
    }
    let decay = spec.decay;
    if !(decay.s > 1.0) || !(decay.c >= 0.0) {
        return Err(Error::Domain(format!(
            "decay bound needs s > 1 and C >= 0, got s={} C={}",
            decay.s, decay.c
        )));
    }

    // Budget: most of the error goes to the tail, the rest to zeta and rounding.
    let target = 0.9 * rel_err.ln_1p();

    // Smallest cutoff where the log bound applies and the tail is small enough.
    let min_cutoff = decay
        .threshold
        .max(min_prime_with_small_deficit(decay.c, decay.s))
        .max(spec.skip_through)
        .max(1);
    let cutoff = if decay.c == 0.0 || log_tail_bound(&decay, min_cutoff) <= target {
        min_cutoff
    } else {
        if log_tail_bound(&decay, MAX_EULER_CUTOFF) > target {
            return Err(Error::Resource(format!(
                "{}: rel_err {rel_err:e} needs a prime cutoff beyond {MAX_EULER_CUTOFF}",
                spec.label
            )));
        }
        let (mut lo, mut hi) = (min_cutoff, MAX_EULER_CUTOFF);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if log_tail_bound(&decay, mid) <= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };

    let reference = spec.reference;
    let sieve = SegmentedSieve::new(cutoff);
    let segments = sieve.segments(spec.skip_through);
    let partials: Vec<Result<Neumaier>> = segments
        .par_iter()
        .map(|&(lo, hi)| {
            let mut acc = Neumaier::default();
            let mut failure = None;
            sieve.for_each_in_segment(lo, hi, |p| {
                if failure.is_some() {
                    return;
                }
                let d = (spec.deficit)(p);
                if !(0.0..1.0).contains(&d) {
                    failure = Some(Error::Domain(format!(
                        "{}: factor at p={p} is {} (must lie in (0,1])",
                        spec.label,
                        1.0 - d
                    )));
                    return;
                }
                let mut term = (-d).ln_1p();
                if let Some(r) = reference {
                    term -= r.power as f64 * (-(p as f64).powf(-r.s)).ln_1p();
                }
                if p > decay.threshold && p < 10_000 {
                    // spot-check the stated decay bound
                    let dev = term.exp_m1().abs();
                    let allowed = decay.c * (p as f64).powf(-decay.s);
                    if dev > allowed * (1.0 + 1e-9) + 1e-300 {
                        failure = Some(Error::Domain(format!(
                            "{}: decay bound violated at p={p}: |1-g|={dev:e} > {allowed:e}",
                            spec.label
                        )));
                        return;
                    }
                }
                acc.add(term);
            });
            match failure {
                Some(e) => Err(e),
                None => Ok(acc),
            }
        })
        .collect();

    let mut total = Neumaier::default();
    for part in partials {
        total.merge(&part?);
    }

    let mut log_value = total.value();
    let mut extra = 4.0 * f64::EPSILON * (total.abs + 1.0);
    if let Some(r) = reference {
        let (zeta, zeta_err) = riemann_zeta(r.s)?;
        // ∏_{p > skip} (1 - p^-s) = 1 / (ζ(s) ∏_{p <= skip} (1 - p^-s))
        let mut log_ref = -zeta.ln();
        for_each_prime_in(0, spec.skip_through, |p| {
            log_ref -= (-(p as f64).powf(-r.s)).ln_1p();
        });
        log_value += r.power as f64 * log_ref;
        extra += (r.power.unsigned_abs() as f64) * (zeta_err / zeta + 4.0 * f64::EPSILON);
    }

    let tail = if decay.c == 0.0 { 0.0 } else { log_tail_bound(&decay, cutoff) };
    let certified_bound = (tail + extra).exp_m1() + 2.0 * f64::EPSILON;
    if certified_bound > rel_err {
        return Err(Error::Resource(format!(
            "{}: certified bound {certified_bound:e} misses rel_err {rel_err:e}",
            spec.label
        )));
    }
    Ok(EulerProduct { value: log_value.exp(), certified_bound, cutoff })
}

// ---------------------------------------------------------------------------
// Memoized constants

static MEMO: Lazy<Mutex<HashMap<String, EulerProduct>>> = Lazy::new(|| Mutex::new(HashMap::new()));
static CACHE_DIR: Lazy<Mutex<Option<std::path::PathBuf>>> = Lazy::new(|| Mutex::new(None));

/// Directory for a persistent JSON cache of computed Euler constants.
pub fn set_constant_cache_dir(dir: Option<std::path::PathBuf>) {
    *CACHE_DIR.lock().unwrap() = dir;
}

fn cache_file() -> Option<std::path::PathBuf> {
    CACHE_DIR.lock().unwrap().as_ref().map(|d| d.join("euler_constants.json"))
}

fn load_disk_cache() -> HashMap<String, EulerProduct> {
    cache_file()
        .and_then(|f| std::fs::read_to_string(f).ok())
        .and_then(|s| serde_json::from_str(&s).ok())
        .unwrap_or_default()
}

fn store_disk_cache(key: &str, value: EulerProduct) {
    let Some(file) = cache_file() else { return };
    let mut all = load_disk_cache();
    all.insert(key.to_string(), value);
    if let Some(parent) = file.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    if let Ok(s) = serde_json::to_string_pretty(&all) {
        let _ = std::fs::write(file, s);
    }
}

/// `euler_product` memoized by `(label, rel_err)`, in memory and, when a cache
/// directory is configured, on disk. Labels must identify the factor uniquely.
pub fn euler_product_cached(spec: &EulerFactorSpec, rel_err: f64) -> Result<EulerProduct> {
    let key = format!("{}@{:e}@skip{}", spec.label, rel_err, spec.skip_through);
    if let Some(v) = MEMO.lock().unwrap().get(&key) {
        return Ok(*v);
    }
    if let Some(v) = load_disk_cache().get(&key) {
        MEMO.lock().unwrap().insert(key, *v);
        return Ok(*v);
    }
    let v = euler_product(spec, rel_err)?;
    MEMO.lock().unwrap().insert(key.clone(), v);
    store_disk_cache(&key, v);
    Ok(v)
}

/// `1/ζ(s) = ∏_p (1 - p^(-s))` for integer `s >= 2`.
pub fn inverse_zeta(s: u32, rel_err: f64) -> Result<EulerProduct> {
    euler_product_cached(&EulerFactorSpec::power_deficit(1, s), rel_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn primes_small() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2), vec![2]);
        assert!(primes_up_to(1).is_empty());
        assert!(primes_up_to(0).is_empty());
    }

    #[test]
    fn segmented_sieve_matches_trial_division() {
        let sieved = primes_up_to(1_000_000);
        assert_eq!(sieved.len(), 78_498);
        let brute: Vec<u64> = (0..3000).filter(|&n| is_prime(n)).collect();
        assert_eq!(&sieved[..brute.len()], &brute[..]);
        let mut window = Vec::new();
        for_each_prime_in(999_900, 1_000_100, |p| window.push(p));
        let brute: Vec<u64> = (999_901..=1_000_100).filter(|&n| is_prime(n)).collect();
        assert_eq!(window, brute);
    }

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(1).unwrap(), 1);
        assert_eq!(moebius(12).unwrap(), 0);
        assert_eq!(moebius(30).unwrap(), -1);
        assert!(moebius(0).is_err());
    }

    #[test]
    fn moebius_multiplicative_on_coprime_pairs() {
        for a in 1..=1000u64 {
            for b in 1..=1000u64 {
                if gcd(a, b) == 1 && a * b <= 1_000_000 && (a + b) % 7 == 0 {
                    assert_eq!(
                        moebius(a * b).unwrap(),
                        moebius(a).unwrap() * moebius(b).unwrap(),
                        "a={a} b={b}"
                    );
                }
            }
        }
    }

    fn brute_crt(congs: &[ResidueVector]) -> Vec<i64> {
        let m: u64 = congs.iter().map(|c| c.modulus()).product();
        let dim = congs[0].dim();
        let mut found = Vec::new();
        let mut t = vec![0i64; dim];
        loop {
            if congs.iter().all(|c| c.contains(&t)) {
                found.push(t.clone());
            }
            let mut i = dim;
            loop {
                if i == 0 {
                    assert_eq!(found.len(), 1, "exactly one coset");
                    return found.pop().unwrap();
                }
                i -= 1;
                t[i] += 1;
                if t[i] < m as i64 {
                    break;
                }
                t[i] = 0;
            }
        }
    }

    #[test]
    fn crt_examples() {
        let c = [ResidueVector::new(&[1, 0], 2).unwrap(), ResidueVector::new(&[2, 2], 3).unwrap()];
        assert_eq!(brute_crt(&c), vec![5, 2]);
        assert_eq!(crt_solve(&c).unwrap(), (vec![5, 2], 6));
        let c = [ResidueVector::new(&[0, 0], 2).unwrap()];
        assert_eq!(crt_solve(&c).unwrap(), (vec![0, 0], 2));
        let c = [ResidueVector::new(&[1, 1], 2).unwrap(), ResidueVector::new(&[1, 1], 3).unwrap()];
        assert_eq!(crt_solve(&c).unwrap(), (vec![1, 1], 6));
    }

    #[test]
    fn crt_rejects_non_coprime() {
        let c = [ResidueVector::new(&[1, 0], 4).unwrap(), ResidueVector::new(&[1, 1], 6).unwrap()];
        match crt_solve(&c) {
            Err(Error::NonCoprimeModuli { a: 4, b: 6 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn crt_exhaustive_small_moduli() {
        let moduli = [(2u64, 3u64), (3, 5), (4, 5), (7, 9), (8, 11)];
        for &(m1, m2) in &moduli {
            for a in 0..m1 as i64 {
                for b in 0..m2 as i64 {
                    let c = [
                        ResidueVector::new(&[a, b], m1).unwrap(),
                        ResidueVector::new(&[b, a], m2).unwrap(),
                    ];
                    let (t, m) = crt_solve(&c).unwrap();
                    assert_eq!(m, m1 * m2);
                    assert!(c.iter().all(|c| c.contains(&t)));
                    assert!(t.iter().all(|&x| (0..m as i64).contains(&x)));
                }
            }
        }
    }

    #[test]
    fn zeta_even_values() {
        let (z2, e2) = riemann_zeta(2.0).unwrap();
        assert!((z2 - PI * PI / 6.0).abs() <= e2.max(1e-15));
        let (z4, _) = riemann_zeta(4.0).unwrap();
        assert!((z4 - PI.powi(4) / 90.0).abs() < 1e-14);
        let (z3, _) = riemann_zeta(3.0).unwrap();
        assert!((z3 - 1.202_056_903_159_594_3).abs() < 1e-14);
        assert!(riemann_zeta(1.0).is_err());
    }

    #[test]
    fn inverse_zeta_two_accelerated() {
        let r = euler_product(&EulerFactorSpec::power_deficit(1, 2), 1e-9).unwrap();
        let exact = 6.0 / (PI * PI);
        assert!(r.certified_bound <= 1e-9);
        assert!((r.value / exact - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn inverse_zeta_two_plain_truncation() {
        // Literal truncation without the zeta reference.
        let spec = EulerFactorSpec::new(
            "plain 1-p^-2",
            |p| (p as f64).powi(-2),
            DecayBound { c: 1.0, s: 2.0, threshold: 1 },
        );
        let r = euler_product(&spec, 1e-6).unwrap();
        let exact = 6.0 / (PI * PI);
        assert!((r.value / exact - 1.0).abs() <= r.certified_bound);
        assert!(r.certified_bound <= 1e-6);
        // smallest cutoff: the bound one step below must fail
        let tighter = 0.9 * 1e-6f64.ln_1p();
        assert!(log_tail_bound(&spec.decay, r.cutoff) <= tighter);
        assert!(log_tail_bound(&spec.decay, r.cutoff - 1) > tighter);
    }

    #[test]
    fn xi_constant() {
        let r = euler_product(&EulerFactorSpec::power_deficit(2, 2), 1e-6).unwrap();
        assert!((r.value - 0.3226).abs() < 5e-5, "{}", r.value);
        // plain route agrees
        let plain = EulerFactorSpec::new(
            "plain 1-2p^-2",
            |p| 2.0 * (p as f64).powi(-2),
            DecayBound { c: 2.0, s: 2.0, threshold: 2 },
        );
        let q = euler_product(&plain, 1e-5).unwrap();
        assert!((q.value / r.value - 1.0).abs() <= q.certified_bound + r.certified_bound);
    }

    #[test]
    fn unit_factor_is_exactly_one() {
        let spec = EulerFactorSpec::new("one", |_| 0.0, DecayBound { c: 0.0, s: 2.0, threshold: 0 });
        let r = euler_product(&spec, 1e-12).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn bad_factor_is_domain_error() {
        let spec = EulerFactorSpec::new("bad", |p| if p == 3 { 1.0 } else { 0.0 }, DecayBound {
            c: 1.0,
            s: 2.0,
            threshold: 10,
        });
        assert!(matches!(euler_product(&spec, 1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn unattainable_precision_is_resource_error() {
        let spec = EulerFactorSpec::new(
            "slow",
            |p| (p as f64).powi(-2),
            DecayBound { c: 1.0, s: 2.0, threshold: 1 },
        );
        assert!(matches!(euler_product(&spec, 1e-15), Err(Error::Resource(_))));
    }

    #[test]
    fn skip_through_drops_small_primes() {
        let all = euler_product(&EulerFactorSpec::power_deficit(1, 2), 1e-10).unwrap();
        let tail = euler_product(&EulerFactorSpec::power_deficit(1, 2).skip_through(3), 1e-10).unwrap();
        let head = (1.0 - 0.25) * (1.0 - 1.0 / 9.0);
        assert!((head * tail.value / all.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn k_free_and_factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_k_free(10, 2));
        assert!(!is_k_free(12, 2));
        assert!(is_k_free(12, 3));
        assert_eq!(gcd_coords(&[-6, 4, 0]), 2);
        assert_eq!(gcd_coords(&[0, 0]), 0);
    }
}
