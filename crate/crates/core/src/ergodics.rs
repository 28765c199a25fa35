//! Residue-class combinatorics, Cesàro averages and the torus parametrization.
//!
//! For finite `P, Q ⊂ Zⁿ` and a modulus `m`, every residue `r ∈ (Zⁿ)_m` is
//! classified by the subset `S = { s ∈ P_m : r + s ∈ Q_m }`; `q_S` counts the
//! residues of class `S`. The identities `Σ_S q_S = mⁿ` and
//! `Σ_S |S| q_S = |P_m||Q_m|` hold for every `m`, and their product form over
//! the primes of a square-free `d` underlies the mixing of the frequency
//! measure.
//!
//! The torus side works at a finite truncation: a configuration of cosets
//! `y_m` for a list of moduli `m` maps to the window points avoiding every
//! `y_m + mZⁿ` ([`torus_phi`]) and back by reading off the missing coset
//! ([`config_theta`]).

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{self, gcd, EulerFactorSpec, Neumaier, ResidueVector};
use crate::error::{Error, Result};
use crate::patches::{coordinate_span, iroot, measure_b};
use crate::pointsets::{for_each_in_box, radius_sq_floor, FreenessSpec, LatticeWindow, Point};
use crate::DEFAULT_REL_ERR;

/// Largest `mⁿ` enumerated exhaustively.
pub const MAX_RESIDUE_CLASSES: u64 = 1_000_000;

fn class_id(x: &[i64], m: u64) -> u64 {
    let mi = m as i64;
    x.iter().fold(0u64, |acc, c| acc * m + c.rem_euclid(mi) as u64)
}

fn class_vector(mut id: u64, m: u64, dim: usize) -> Vec<i64> {
    let mut v = vec![0i64; dim];
    for i in (0..dim).rev() {
        v[i] = (id % m) as i64;
        id /= m;
    }
    v
}

/// Distinct classes of `points` modulo `m`, ascending.
fn reduce(points: &[Point], m: u64) -> Vec<u64> {
    let mut c: Vec<u64> = points.iter().map(|x| class_id(x, m)).collect();
    c.sort_unstable();
    c.dedup();
    c
}

fn classes_of(dim: usize, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::Domain(format!("modulus must be at least 2, got {m}")));
    }
    match m.checked_pow(dim as u32) {
        Some(c) if c <= MAX_RESIDUE_CLASSES => Ok(c),
        _ => Err(Error::Resource(format!(
            "{m}^{dim} residue classes exceed the enumeration cap of {MAX_RESIDUE_CLASSES}"
        ))),
    }
}

/// The counts `q_S` for one modulus, keyed by subsets of `P_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPartition {
    pub modulus: u64,
    pub dim: usize,
    /// `P_m` as residue vectors; subset keys index into this list.
    pub p_classes: Vec<Vec<i64>>,
    /// `|Q_m|`.
    pub q_size: usize,
    /// Bitmask over `p_classes` → number of residues with that class.
    pub counts: BTreeMap<u64, u64>,
}

impl QPartition {
    pub fn count(&self, subset_mask: u64) -> u64 {
        self.counts.get(&subset_mask).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn p_size(&self) -> usize {
        self.p_classes.len()
    }

    /// `Σ_{|S| = s} q_S`.
    pub fn count_by_size(&self, s: usize) -> u64 {
        self.counts.iter().filter(|(k, _)| k.count_ones() as usize == s).map(|(_, v)| v).sum()
    }
}

fn check_dims(dim: usize, sets: &[&[Point]]) -> Result<()> {
    for set in sets {
        if let Some(x) = set.iter().find(|x| x.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: x.len() });
        }
    }
    Ok(())
}

/// Classifies every residue of `(Zⁿ)_m` by the exact subset `S ⊂ P_m` with
/// `r + s ∈ Q_m`.
pub fn q_counts(dim: usize, p: &[Point], q: &[Point], m: u64) -> Result<QPartition> {
    check_dims(dim, &[p, q])?;
    let total = classes_of(dim, m)?;
    let pm = reduce(p, m);
    if pm.len() > 64 {
        return Err(Error::Resource(format!("|P_m| = {} exceeds 64", pm.len())));
    }
    let qm = reduce(q, m);
    let mut in_q = vec![false; total as usize];
    for &c in &qm {
        in_q[c as usize] = true;
    }
    let pvecs: Vec<Vec<i64>> = pm.iter().map(|&c| class_vector(c, m, dim)).collect();
    let mut counts = BTreeMap::new();
    let mut sum = vec![0i64; dim];
    for r in 0..total {
        let rv = class_vector(r, m, dim);
        let mut mask = 0u64;
        for (j, s) in pvecs.iter().enumerate() {
            for i in 0..dim {
                sum[i] = rv[i] + s[i];
            }
            if in_q[class_id(&sum, m) as usize] {
                mask |= 1 << j;
            }
        }
        *counts.entry(mask).or_insert(0) += 1;
    }
    Ok(QPartition { modulus: m, dim, p_classes: pvecs, q_size: qm.len(), counts })
}

/// Both sides of `Σ_S q_S = mⁿ`.
pub fn verify_partition(dim: usize, p: &[Point], q: &[Point], m: u64) -> Result<(u64, u64)> {
    let part = q_counts(dim, p, q, m)?;
    Ok((part.total(), classes_of(dim, m)?))
}

/// `Σ_S |S| q_S = |P_m||Q_m|`, checked exactly.
pub fn verify_lemma_a_linear(dim: usize, p: &[Point], q: &[Point], m: u64) -> Result<bool> {
    let part = q_counts(dim, p, q, m)?;
    let lhs: u64 = part.counts.iter().map(|(k, v)| k.count_ones() as u64 * v).sum();
    Ok(lhs == (part.p_size() * part.q_size) as u64)
}

/// Both sides of the product identity over the primes of a square-free `d`:
///
/// `Σ_{(ν_p)} ∏_{p|d} (ν_p + |Q_p|) Σ_{|S| = |P_p| - ν_p} q_S^p = ∏_{p|d} (pⁿ|P_p| + pⁿ|Q_p| - |P_p||Q_p|)`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductIdentity {
    pub lhs: i128,
    pub rhs: i128,
}

impl ProductIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Evaluates the left side as the literal multi-sum over `(ν_p)_{p | d}`.
pub fn verify_lemma_a_product(dim: usize, p: &[Point], q: &[Point], d: u64) -> Result<ProductIdentity> {
    check_dims(dim, &[p, q])?;
    if d == 0 {
        return Err(Error::Domain("d must be positive".into()));
    }
    let factors = arith::factorize(d);
    if factors.iter().any(|&(_, e)| e > 1) {
        return Err(Error::Domain(format!("d = {d} is not square-free")));
    }
    let overflow = || Error::Overflow("identity value exceeds i128".into());
    let parts = factors.iter().map(|&(pr, _)| q_counts(dim, p, q, pr)).collect::<Result<Vec<_>>>()?;

    let mut rhs: i128 = 1;
    for part in &parts {
        let pn = classes_of(dim, part.modulus)? as i128;
        let (a, b) = (part.p_size() as i128, part.q_size as i128);
        rhs = rhs.checked_mul(pn * a + pn * b - a * b).ok_or_else(overflow)?;
    }

    // odometer over ν_p ∈ [0, |P_p|]
    let mut nu = vec![0usize; parts.len()];
    let mut lhs: i128 = 0;
    loop {
        let mut term: i128 = 1;
        for (part, &v) in parts.iter().zip(&nu) {
            let inner = part.count_by_size(part.p_size() - v) as i128;
            term = term.checked_mul((v + part.q_size) as i128 * inner).ok_or_else(overflow)?;
        }
        lhs = lhs.checked_add(term).ok_or_else(overflow)?;
        let mut i = 0;
        loop {
            if i == parts.len() {
                return Ok(ProductIdentity { lhs, rhs });
            }
            if nu[i] < parts[i].p_size() {
                nu[i] += 1;
                break;
            }
            nu[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Cesàro averages

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CesaroResult {
    /// `|average - target|`.
    pub residual: f64,
    /// `Σ_{x ∈ B_R} ν(B_{(x+P) ∪ Q})` divided by the number of sites.
    pub average: f64,
    /// `ν(B_P) ν(B_Q)`.
    pub target: f64,
    pub sites: u64,
}

fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// `|N_R^(-1) Σ_x ν(B_{(x+P) ∪ Q}) - ν(B_P) ν(B_Q)|` over the `N_R` sites
/// `x ∈ B_R(0) ∩ Zⁿ`. Same limit as dividing by `vol(B_R)`, without the
/// lattice-count error.
///
/// For moduli beyond the spans of `P` and `Q`, `|((x+P) ∪ Q)_m| = |P| + |Q|`
/// unless `m` divides some `b - a - x`; those few moduli get an exact
/// correction, the rest share one certified product.
pub fn cesaro_residual(spec: &FreenessSpec, p: &[Point], q: &[Point], radius: f64) -> Result<CesaroResult> {
    let n = spec.dim();
    check_dims(n, &[p, q])?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("radius must be positive and finite, got {radius}")));
    }
    let mut p = p.to_vec();
    let mut q = q.to_vec();
    p.sort();
    p.dedup();
    q.sort();
    q.dedup();
    let target = measure_b(spec, &p)?.value * measure_b(spec, &q)?.value;
    let c = p.len() + q.len();
    let limit = coordinate_span(&p).max(coordinate_span(&q)).max(iroot(c as u64, n as u32));
    let explicit = spec.moduli_up_to(limit);
    let (tail, large_moduli): (f64, Option<u32>) = match spec {
        FreenessSpec::KFree { k, .. } => {
            let f = EulerFactorSpec::power_deficit(c as u32, n as u32 * k).skip_through(iroot(limit, *k));
            (arith::euler_product_cached(&f, DEFAULT_REL_ERR)?.value, Some(*k))
        }
        FreenessSpec::BFree { moduli, .. } => (
            moduli
                .iter()
                .filter(|b| !explicit.contains(b))
                .map(|&b| 1.0 - c as f64 / (b as f64).powi(n as i32))
                .product(),
            None,
        ),
    };
    let large_b: Vec<u64> = match spec {
        FreenessSpec::BFree { moduli, .. } => moduli.iter().copied().filter(|b| !explicit.contains(b)).collect(),
        _ => Vec::new(),
    };

    let r2 = radius_sq_floor(radius);
    let r = (r2 as f64).sqrt().floor() as i64;
    let reach = p.iter().chain(&q).flat_map(|x| x.iter().map(|v| v.unsigned_abs())).max().unwrap_or(0);
    let spf = smallest_prime_factors((2 * (r as u64 + reach) + 2) as usize);
    let nf = n as i32;

    let measure_of = |x: &[i64]| -> f64 {
        let shifted: Vec<Point> = p.iter().map(|a| a.iter().zip(x).map(|(u, v)| u + v).collect()).collect();
        let mut union = shifted.clone();
        union.extend(q.iter().cloned());
        union.sort();
        union.dedup();
        let mut value = 1.0;
        for &m in &explicit {
            let classes = (m as f64).powi(nf);
            value *= (classes - reduce(&union, m).len() as f64) / classes;
        }
        if union.len() < c {
            // x + a = b for some pair: the union itself is smaller
            let extra = match spec {
                FreenessSpec::KFree { k, .. } => {
                    let f = EulerFactorSpec::power_deficit(union.len() as u32, n as u32 * k).skip_through(iroot(limit, *k));
                    arith::euler_product_cached(&f, DEFAULT_REL_ERR).map(|e| e.value).unwrap_or(f64::NAN)
                }
                FreenessSpec::BFree { .. } => {
                    large_b.iter().map(|&b| 1.0 - union.len() as f64 / (b as f64).powi(nf)).product()
                }
            };
            return value * extra * correction(&union, union.len(), &shifted, &q, &explicit, large_moduli, &large_b, &spf, nf);
        }
        value * tail * correction(&union, c, &shifted, &q, &explicit, large_moduli, &large_b, &spf, nf)
    };

    let rows: Vec<(Neumaier, u64)> = (-r..=r)
        .into_par_iter()
        .map(|x0| {
            let mut acc = Neumaier::default();
            let mut sites = 0;
            let rest = r2 - x0 * x0;
            if rest >= 0 {
                let mut lo = vec![-r; n];
                let mut hi = vec![r; n];
                lo[0] = x0;
                hi[0] = x0;
                for_each_in_box(&lo, &hi, |x| {
                    if x[1..].iter().map(|v| v * v).sum::<i64>() <= rest {
                        acc.add(measure_of(x));
                        sites += 1;
                    }
                });
            }
            (acc, sites)
        })
        .collect();
    let mut total = Neumaier::default();
    let mut sites = 0;
    for (a, s) in &rows {
        total.merge(a);
        sites += s;
    }
    let average = total.value() / sites as f64;
    if average.is_nan() {
        return Err(Error::Resource("Euler product for a collapsed union failed".into()));
    }
    Ok(CesaroResult { residual: (average - target).abs(), average, target, sites })
}

/// Exact factors for large moduli dividing some `b - (x + a)`, relative to the
/// generic factor `1 - c/mⁿ` already contained in the tail.
#[allow(clippy::too_many_arguments)]
fn correction(
    union: &[Point],
    c: usize,
    shifted: &[Point],
    q: &[Point],
    explicit: &[u64],
    k: Option<u32>,
    large_b: &[u64],
    spf: &[u32],
    nf: i32,
) -> f64 {
    let mut moduli: Vec<u64> = Vec::new();
    for a in shifted {
        for b in q {
            let diff: Vec<i64> = b.iter().zip(a).map(|(u, v)| u - v).collect();
            let mut g = arith::gcd_coords(&diff);
            if g <= 1 {
                continue;
            }
            match k {
                Some(k) => {
                    while g > 1 {
                        let pr = if (g as usize) < spf.len() { spf[g as usize] as u64 } else { smallest_factor(g) };
                        let mut e = 0;
                        while g % pr == 0 {
                            g /= pr;
                            e += 1;
                        }
                        if e >= k {
                            let m = pr.pow(k);
                            if !explicit.contains(&m) {
                                moduli.push(m);
                            }
                        }
                    }
                }
                None => {
                    for &b in large_b {
                        if g % b == 0 {
                            moduli.push(b);
                        }
                    }
                }
            }
        }
    }
    moduli.sort_unstable();
    moduli.dedup();
    let mut f = 1.0;
    for m in moduli {
        let classes = (m as f64).powi(nf);
        let exact = (classes - reduce(union, m).len() as f64) / classes;
        f *= exact / (1.0 - c as f64 / classes);
    }
    f
}

fn smallest_factor(n: u64) -> u64 {
    arith::factorize(n).first().map_or(n, |&(p, _)| p)
}

// ---------------------------------------------------------------------------
// Torus parametrization

/// One coset `y_m + mZⁿ` per modulus of a finite truncation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueConfiguration {
    cosets: Vec<ResidueVector>,
}

impl ResidueConfiguration {
    pub fn new(mut cosets: Vec<ResidueVector>) -> Result<Self> {
        cosets.sort_by_key(|c| c.modulus());
        for (i, a) in cosets.iter().enumerate() {
            if a.dim() != cosets[0].dim() {
                return Err(Error::DimensionMismatch { expected: cosets[0].dim(), got: a.dim() });
            }
            for b in &cosets[i + 1..] {
                if gcd(a.modulus(), b.modulus()) != 1 {
                    return Err(Error::NonCoprimeModuli { a: a.modulus(), b: b.modulus() });
                }
            }
        }
        Ok(ResidueConfiguration { cosets })
    }

    /// The all-zero configuration: the cosets missed by a k-free set.
    pub fn zero(dim: usize, moduli: &[u64]) -> Result<Self> {
        ResidueConfiguration::new(moduli.iter().map(|&m| ResidueVector::new(&vec![0; dim], m)).collect::<Result<_>>()?)
    }

    pub fn random(dim: usize, moduli: &[u64], rng: &mut impl Rng) -> Result<Self> {
        ResidueConfiguration::new(
            moduli
                .iter()
                .map(|&m| {
                    let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..m as i64)).collect();
                    ResidueVector::new(&v, m)
                })
                .collect::<Result<_>>()?,
        )
    }

    pub fn cosets(&self) -> &[ResidueVector] {
        &self.cosets
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.cosets.iter().map(|c| c.modulus()).collect()
    }

    /// The action of `t ∈ Zⁿ`: every coset moves by `t`.
    pub fn translate(&self, t: &[i64]) -> Self {
        ResidueConfiguration { cosets: self.cosets.iter().map(|c| c.translate(t)).collect() }
    }
}

/// `p^k` for the primes `p <= bound`: the default truncation of the torus.
pub fn truncation_moduli(k: u32, bound: u64) -> Vec<u64> {
    arith::primes_up_to(bound).into_iter().map(|p| p.pow(k)).collect()
}

/// Window points avoiding every coset of `y`.
pub fn torus_phi(y: &ResidueConfiguration, window: &LatticeWindow) -> Vec<Point> {
    window.points().into_iter().filter(|x| y.cosets.iter().all(|c| !c.contains(x))).collect()
}

/// Recovers the unique coset per modulus that `x` misses.
///
/// The window must contain a full residue system for every modulus; a
/// modulus at which `x` misses no coset or several cosets is an error.
pub fn config_theta(x: &[Point], window: &LatticeWindow, moduli: &[u64]) -> Result<ResidueConfiguration> {
    let dim = window.dim();
    check_dims(dim, &[x])?;
    let pts = window.points();
    let mut cosets = Vec::with_capacity(moduli.len());
    for &m in moduli {
        let total = classes_of(dim, m)?;
        if reduce(&pts, m).len() as u64 != total {
            return Err(Error::Domain(format!("window {window} does not contain a full residue system mod {m}")));
        }
        let hit = reduce(x, m);
        let missing = total - hit.len() as u64;
        if missing != 1 {
            return Err(Error::NotInA1 { modulus: m, missing });
        }
        let gap = (0..total).zip(hit.iter().copied().chain(std::iter::once(u64::MAX))).find(|(i, h)| i != h);
        let id = gap.map(|(i, _)| i).unwrap_or(total - 1);
        cosets.push(ResidueVector::new(&class_vector(id, m, dim), m)?);
    }
    ResidueConfiguration::new(cosets)
}

// ---------------------------------------------------------------------------
// Randomized verification report

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRow {
    pub identity: &'static str,
    pub params: String,
    pub pass: bool,
    pub residual: f64,
}

fn random_set(rng: &mut ChaCha8Rng, dim: usize, span: i64, max_len: usize) -> Vec<Point> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| (0..dim).map(|_| rng.gen_range(-span..=span)).collect()).collect()
}

fn fmt_set(s: &[Point]) -> String {
    let parts: Vec<String> =
        s.iter().map(|x| format!("({})", x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))).collect();
    format!("{{{}}}", parts.join(";"))
}

/// Seeded randomized checks of the residue identities and the torus round trip.
pub fn run_verification(seed: u64, trials: usize, dim: usize) -> Result<Vec<VerificationRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let moduli_pool: [u64; 3] = [2, 3, 5];
    for _ in 0..trials {
        let m = moduli_pool[rng.gen_range(0..moduli_pool.len())];
        let p = random_set(&mut rng, dim, m as i64 * 2, 6);
        let q = random_set(&mut rng, dim, m as i64 * 2, 6);
        let params = format!("m={m} P={} Q={}", fmt_set(&p), fmt_set(&q));
        let (lhs, rhs) = verify_partition(dim, &p, &q, m)?;
        rows.push(VerificationRow { identity: "partition", params: params.clone(), pass: lhs == rhs, residual: (lhs as f64 - rhs as f64).abs() });
        let ok = verify_lemma_a_linear(dim, &p, &q, m)?;
        rows.push(VerificationRow { identity: "linear", params, pass: ok, residual: if ok { 0.0 } else { 1.0 } });
        let d = [2u64, 3, 6, 10, 15, 30][rng.gen_range(0..6)];
        let id = verify_lemma_a_product(dim, &p, &q, d)?;
        rows.push(VerificationRow {
            identity: "product",
            params: format!("d={d} P={} Q={}", fmt_set(&p), fmt_set(&q)),
            pass: id.holds(),
            residual: (id.lhs - id.rhs).abs() as f64,
        });
    }
    let moduli = [2u64, 3, 5];
    let side: i64 = moduli.iter().product::<u64>() as i64 * 2 - 1;
    let window = LatticeWindow::boxed(vec![0; dim], vec![side; dim])?;
    for _ in 0..trials.min(20) {
        let y = ResidueConfiguration::random(dim, &moduli, &mut rng)?;
        let back = config_theta(&torus_phi(&y, &window), &window, &moduli)?;
        let params = y.cosets().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        rows.push(VerificationRow { identity: "theta_phi", params, pass: back == y, residual: if back == y { 0.0 } else { 1.0 } });
    }
    Ok(rows)
}

pub fn write_report_csv<W: Write>(rows: &[VerificationRow], preamble: &[String], mut out: W) -> Result<()> {
    let werr = |e| Error::io("<writer>", e);
    for line in preamble {
        writeln!(out, "# {line}").map_err(werr)?;
    }
    writeln!(out, "identity,params,pass,residual").map_err(werr)?;
    for r in rows {
        writeln!(out, "{},\"{}\",{},{}", r.identity, r.params, r.pass, r.residual).map_err(werr)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_counts_examples() {
        let part = q_counts(2, &[vec![0, 0]], &[vec![0, 0]], 2).unwrap();
        assert_eq!(part.count(1), 1);
        assert_eq!(part.count(0), 3);
        let part = q_counts(2, &[], &[vec![1, 2]], 3).unwrap();
        assert_eq!(part.counts.len(), 1);
        assert_eq!(part.count(0), 9);
        for m in 2..=5 {
            let (l, r) = verify_partition(2, &[vec![0, 0], vec![1, 3]], &[vec![2, 2], vec![0, 1], vec![4, 4]], m).unwrap();
            assert_eq!(l, r);
        }
        assert!(q_counts(2, &[], &[], 1).is_err());
        assert!(q_counts(2, &[], &[], 1001).is_err());
    }

    #[test]
    fn linear_identity_examples() {
        assert!(verify_lemma_a_linear(2, &[vec![0, 0]], &[vec![0, 0], vec![1, 0]], 2).unwrap());
        assert!(verify_lemma_a_linear(2, &[], &[vec![5, 5]], 7).unwrap());
    }

    #[test]
    fn product_identity_examples() {
        let id = verify_lemma_a_product(2, &[vec![0, 0]], &[vec![1, 1]], 2).unwrap();
        assert_eq!(id, ProductIdentity { lhs: 7, rhs: 7 });
        let id = verify_lemma_a_product(2, &[], &[], 6).unwrap();
        assert!(id.holds());
        assert_eq!(id.rhs, 0);
        assert!(verify_lemma_a_product(2, &[], &[], 12).is_err());
        assert!(verify_lemma_a_product(2, &[vec![0, 0]], &[], 1).unwrap().holds());
    }

    #[test]
    fn cesaro_trivial_and_trend() {
        let v = FreenessSpec::visible();
        let r = cesaro_residual(&v, &[], &[], 50.0).unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.target, 1.0);
        let o = vec![vec![0i64, 0]];
        let res: Vec<f64> = [100.0, 300.0].iter().map(|&r| cesaro_residual(&v, &o, &o, r).unwrap().residual).collect();
        assert!(res[1] < res[0]);
    }

    /// The fast per-x evaluation agrees with a direct `measure_b` of the union.
    #[test]
    fn cesaro_matches_direct_sum() {
        for spec in [FreenessSpec::visible(), FreenessSpec::kfree(1, 2).unwrap(), FreenessSpec::bfree(2, vec![2, 3, 5]).unwrap()] {
            let n = spec.dim();
            let (p, q): (Vec<Point>, Vec<Point>) = if n == 2 {
                (vec![vec![0, 0], vec![1, 0]], vec![vec![0, 1], vec![2, 3]])
            } else {
                (vec![vec![0], vec![1]], vec![vec![3]])
            };
            let radius = 12.0;
            let fast = cesaro_residual(&spec, &p, &q, radius).unwrap();
            let mut sum = 0.0;
            for x in crate::pointsets::ball_points(n, radius) {
                let mut u: Vec<Point> = p.iter().map(|a| a.iter().zip(&x).map(|(s, t)| s + t).collect()).collect();
                u.extend(q.iter().cloned());
                sum += measure_b(&spec, &u).unwrap().value;
            }
            let direct = sum / crate::pointsets::ball_points(n, radius).len() as f64;
            assert!((fast.average - direct).abs() < 1e-9, "{spec} {} {}", fast.average, direct);
        }
    }

    #[test]
    fn torus_examples() {
        let w = LatticeWindow::boxed(vec![0, 0], vec![5, 5]).unwrap();
        let y = ResidueConfiguration::zero(2, &[2, 3]).unwrap();
        let x = torus_phi(&y, &w);
        let expected: Vec<Point> = w
            .points()
            .into_iter()
            .filter(|p| !(p[0] % 2 == 0 && p[1] % 2 == 0) && !(p[0] % 3 == 0 && p[1] % 3 == 0))
            .collect();
        assert_eq!(x, expected);
        let empty = ResidueConfiguration::new(vec![]).unwrap();
        assert_eq!(torus_phi(&empty, &w), w.points());
    }

    #[test]
    fn theta_of_visible_points_is_zero() {
        let w = LatticeWindow::boxed(vec![0, 0], vec![29, 29]).unwrap();
        let v: Vec<Point> = w.points().into_iter().filter(|x| arith::gcd_coords(x) == 1).collect();
        assert_eq!(config_theta(&v, &w, &[2, 3, 5]).unwrap(), ResidueConfiguration::zero(2, &[2, 3, 5]).unwrap());
    }

    #[test]
    fn theta_errors() {
        let w = LatticeWindow::boxed(vec![0, 0], vec![5, 5]).unwrap();
        // only odd-odd points: three cosets missing mod 2
        let x: Vec<Point> = w.points().into_iter().filter(|p| p[0] % 2 == 1 && p[1] % 2 == 1).collect();
        assert!(matches!(config_theta(&x, &w, &[2]), Err(Error::NotInA1 { modulus: 2, missing: 3 })));
        let all = w.points();
        assert!(matches!(config_theta(&all, &w, &[2]), Err(Error::NotInA1 { modulus: 2, missing: 0 })));
        let small = LatticeWindow::boxed(vec![0, 0], vec![1, 1]).unwrap();
        assert!(matches!(config_theta(&[], &small, &[3]), Err(Error::Domain(_))));
    }

    #[test]
    fn theta_phi_round_trip_and_equivariance() {
        let moduli = [2u64, 3, 5, 7];
        let w = LatticeWindow::boxed(vec![0, 0], vec![209, 209]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let y = ResidueConfiguration::random(2, &moduli, &mut rng).unwrap();
            let x = torus_phi(&y, &w);
            assert_eq!(config_theta(&x, &w, &moduli).unwrap(), y);
            let t = [rng.gen_range(-50..50i64), rng.gen_range(-50..50i64)];
            let shifted_w = LatticeWindow::boxed(vec![t[0], t[1]], vec![209 + t[0], 209 + t[1]]).unwrap();
            let xt: Vec<Point> = x.iter().map(|p| vec![p[0] + t[0], p[1] + t[1]]).collect();
            assert_eq!(config_theta(&xt, &shifted_w, &moduli).unwrap(), y.translate(&t));
        }
    }

    #[test]
    fn report_rows_pass() {
        let rows = run_verification(1, 20, 2).unwrap();
        assert!(rows.iter().all(|r| r.pass));
        let mut buf = Vec::new();
        write_report_csv(&rows[..1], &[], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("identity,params,pass,residual\npartition,"));
    }
}
