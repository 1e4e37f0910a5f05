//! Explicit small-bias constructions.
//!
//! * prime field: `{(y·x^i)_{i<n} : x, y ∈ Z_q}`, bias at most `(n-1)/q`
//!   because a nonzero polynomial of degree `< n` has at most `n-1` roots.
//! * field powering: over `GF(p^t)`, `{(Tr(y·x^i))_{i<N} : x ∈ X, y ∈ GF(p^t)}`
//!   for a set `X` of `⌈(N-1)/ε⌉` field elements. For a nonzero label `a` the
//!   inner sum over `y` is `p^t` when `Σ a_i x^i = 0` and `0` otherwise, so the
//!   bias is at most `(N-1)/|X| ≤ ε`. Negating `y` negates the output, so the
//!   multiset is already symmetric.
//! * rounding: `{(⌊(y·x^i mod q)·m/q⌋)_{i<n}}` for composite moduli; its bias
//!   is measured, never assumed.
//! * greedy and sampled: pairs `{x, x⁻¹}` chosen greedily against the running
//!   character sums (small `G^n`) or drawn from a seeded generator, up to the
//!   size budget `2·q*²`. Either is kept only if a full sweep confirms the
//!   bias. Used when the algebraic spaces exceed the budget.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::field::{is_prime, next_prime, Field};
use super::{bias_of_histogram, dense_size, symmetrize, BiasedSpace, Construction, BIAS_TOLERANCE};
use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// Largest number of raw vectors a construction may emit.
const EMIT_LIMIT: u64 = 1 << 32;

/// Histograms up to this many cells are kept dense while streaming.
const DENSE_STREAM_LIMIT: usize = 1 << 24;

/// How raw vectors over `Z_{d_k}^{nk}` map to tuple indices of `G^n`.
struct Layout {
    factors: Vec<u32>,
    n: usize,
    order: u128,
    dense: Option<usize>,
}

impl Layout {
    fn new(group: &GroupSpec, n: usize) -> Result<Self> {
        let factors = group.invariant_factors().ok_or(Error::NotAbelian)?.to_vec();
        if (group.order() as f64).powi(n as i32) >= 2f64.powi(127) {
            return Err(Error::TooLarge(format!("|G|^{n} does not fit a tuple index")));
        }
        let dense = dense_size(group, n).ok().filter(|&t| t <= DENSE_STREAM_LIMIT);
        Ok(Self {
            factors,
            n,
            order: group.order() as u128,
            dense,
        })
    }

    /// Coordinates `i·k .. (i+1)·k` of `raw` form the components of
    /// coordinate `i`, reduced modulo each invariant factor.
    #[inline]
    fn index(&self, raw: &[u32]) -> u128 {
        let k = self.factors.len();
        let coord = |i: usize| {
            let mut e = 0u64;
            for (j, &d) in self.factors.iter().enumerate() {
                e = e * d as u64 + (raw[i * k + j] % d) as u64;
            }
            e
        };
        if self.dense.is_some() {
            let order = self.order as u64;
            return (0..self.n).fold(0u64, |idx, i| idx * order + coord(i)) as u128;
        }
        (0..self.n).fold(0u128, |idx, i| idx * self.order + coord(i) as u128)
    }

    /// Run `emit` for every `x` in `0..xs` in parallel and histogram the
    /// emitted indices. Dense histograms share one atomic array.
    fn stream<F>(&self, xs: u64, emit: F) -> Hist
    where
        F: Fn(u64, &mut dyn FnMut(u128)) + Sync,
    {
        match self.dense {
            Some(total) => {
                let cells: Vec<AtomicU64> = (0..total).map(|_| AtomicU64::new(0)).collect();
                (0..xs).into_par_iter().for_each(|x| {
                    emit(x, &mut |i| {
                        cells[i as usize].fetch_add(1, Ordering::Relaxed);
                    })
                });
                Hist::Dense(cells.into_iter().map(AtomicU64::into_inner).collect())
            }
            None => Hist::Sparse(
                (0..xs)
                    .into_par_iter()
                    .fold(HashMap::new, |mut m, x| {
                        emit(x, &mut |i| *m.entry(i).or_default() += 1);
                        m
                    })
                    .reduce(HashMap::new, |mut a, b| {
                        for (k, v) in b {
                            *a.entry(k).or_default() += v;
                        }
                        a
                    }),
            ),
        }
    }
}

enum Hist {
    Dense(Vec<u64>),
    Sparse(HashMap<u128, u64>),
}

impl Hist {
    fn into_space(self, group: &GroupSpec, n: usize) -> Result<BiasedSpace> {
        match self {
            Hist::Dense(v) => BiasedSpace::from_dense(group, n, &v),
            Hist::Sparse(m) => {
                BiasedSpace::from_counts(group, n, m.into_iter().map(|(i, c)| (group.tuple_from_index(i, n), c)))
            }
        }
    }
}

fn check_emissions(count: u64) -> Result<()> {
    if count > EMIT_LIMIT {
        return Err(Error::TooLarge(format!("construction would emit {count} vectors")));
    }
    Ok(())
}

/// Stream `(Tr(y·x^i))_{i<len}` for `x` in `0..xs` and every `y`.
fn powering_hist(field: &Field, xs: u32, len: usize, layout: &Layout) -> Hist {
    let p = field.characteristic();
    let t = field.degree() as usize;
    layout.stream(xs as u64, |x, out| {
        let x = x as u32;
        let powers: Vec<u32> = (0..len).map(|i| field.pow(x, i as u64)).collect();
        // y ↦ output is F_p-linear; images of the basis y = x^j.
        let basis: Vec<Vec<u32>> = (0..t)
            .map(|j| {
                let e = p.pow(j as u32);
                powers.iter().map(|&w| field.trace(field.mul(e, w))).collect()
            })
            .collect();
        let mut digits = vec![0u32; t];
        let mut s = vec![0u32; len];
        for _ in 0..field.order() {
            out(layout.index(&s));
            // Mixed-radix increment; a wrapping digit has added its
            // basis vector p times in total, which is zero.
            for j in 0..t {
                for (si, &b) in s.iter_mut().zip(&basis[j]) {
                    *si += b;
                    if *si >= p {
                        *si -= p;
                    }
                }
                digits[j] += 1;
                if digits[j] < p {
                    break;
                }
                digits[j] = 0;
            }
        }
    })
}

/// `{(⌊(y·x^i mod q)·m/q⌋)_{i<len} : x, y ∈ Z_q}`.
fn rounding_hist(q: u64, m: u32, len: usize, layout: &Layout) -> Hist {
    layout.stream(q, |x, out| {
        let mut powers = vec![1u64; len];
        for i in 1..len {
            powers[i] = powers[i - 1] * x % q;
        }
        let mut z = vec![0u64; len];
        let mut raw = vec![0u32; len];
        for _ in 0..q {
            for i in 0..len {
                raw[i] = (z[i] * m as u64 / q) as u32;
            }
            out(layout.index(&raw));
            for i in 0..len {
                z[i] += powers[i];
                if z[i] >= q {
                    z[i] -= q;
                }
            }
        }
    })
}

fn check_epsilon(eps: Ratio<u64>) -> Result<()> {
    if *eps.numer() == 0 {
        return Err(Error::Parameter("epsilon must be positive".into()));
    }
    Ok(())
}

/// `(|X|, field order)` for field powering with `len` coordinates over `Z_p`.
pub fn field_powering_params(p: u32, len: usize, eps: Ratio<u64>) -> Result<(u64, u64)> {
    check_epsilon(eps)?;
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let threshold = Ratio::from_integer(len.saturating_sub(1) as u64) / eps;
    let xs = threshold.ceil().to_integer().max(1);
    let mut q = p as u64;
    while q < xs {
        q *= p as u64;
    }
    Ok((xs, q))
}

/// Smallest prime `>= ⌈4·len·m²/ε⌉`.
pub fn rounding_modulus(m: u32, len: usize, eps: Ratio<u64>) -> Result<u64> {
    check_epsilon(eps)?;
    let target = (Ratio::from_integer(4 * len as u64 * (m as u64).pow(2)) / eps).ceil().to_integer();
    Ok(next_prime(target))
}

/// Reference size `2·q*²`, with `q*` the smallest prime `≥ (nk−1)/ε` for
/// `k` invariant factors.
pub fn size_budget(group: &GroupSpec, n: usize, eps: Ratio<u64>) -> Result<u64> {
    check_epsilon(eps)?;
    let k = group.invariant_factors().ok_or(Error::NotAbelian)?.len();
    let target = Ratio::from_integer((n * k).saturating_sub(1) as u64) / eps;
    let q = next_prime(target.ceil().to_integer());
    Ok(2u64.saturating_mul(q).saturating_mul(q))
}

/// Largest budget for which sampling is attempted.
const SAMPLE_LIMIT: u64 = 1 << 20;

const SAMPLE_ATTEMPTS: u64 = 8;

/// Fixed seed: the sampled construction is a deterministic function of its
/// arguments.
const SAMPLE_SEED: u64 = 0x5eed_b1a5;

/// Largest `|G|^n` for the greedy search.
const GREEDY_LIMIT: usize = 1 << 14;

/// Candidates scored per greedy step once `|G|^n` exceeds this.
const GREEDY_FULL_SCAN: usize = 1 << 10;
const GREEDY_CANDIDATES: usize = 64;

/// Flattened component digits of tuple index `x` and their radices.
fn digits(group: &GroupSpec, n: usize, x: usize) -> Vec<u64> {
    group
        .tuple_from_index(x as u128, n)
        .coords()
        .iter()
        .flat_map(|&e| group.components(e).expect("abelian"))
        .map(u64::from)
        .collect()
}

/// Add pairs `{x, x⁻¹}` one at a time, each minimizing the largest running
/// character sum (then the sum of squares), and stop at the first size whose
/// bias is at most `ε`. Scans every candidate on small groups and a seeded
/// sample of candidates otherwise.
fn greedy_for(group: &GroupSpec, n: usize, eps: Ratio<u64>, budget: u64) -> Option<BiasedSpace> {
    let cells = dense_size(group, n).ok().filter(|&c| c <= GREEDY_LIMIT)?;
    let factors = group.invariant_factors()?;
    let radix: Vec<u64> = (0..n).flat_map(|_| factors.iter().map(|&d| d as u64)).collect();
    let exponent = *factors.last().expect("nonempty") as u64;
    let weight: Vec<u64> = radix.iter().map(|d| exponent / d).collect();
    let cos: Vec<f64> = (0..exponent)
        .map(|j| 2.0 * (std::f64::consts::TAU * j as f64 / exponent as f64).cos())
        .collect();
    let target = *eps.numer() as f64 / *eps.denom() as f64;
    // Visit every nontrivial label `a` with the phase `⟨a, x⟩` kept up to date.
    let scan = |x: &[u64], f: &mut dyn FnMut(usize, f64)| {
        let step: Vec<u64> = x.iter().zip(&weight).map(|(a, w)| a * w % exponent).collect();
        let mut label = vec![0u64; radix.len()];
        let mut phase = 0u64;
        for a in 1..cells {
            let mut j = radix.len();
            loop {
                j -= 1;
                label[j] += 1;
                phase = (phase + step[j]) % exponent;
                if label[j] < radix[j] {
                    break;
                }
                label[j] = 0;
            }
            f(a, cos[phase as usize]);
        }
    };
    let mut sums = vec![0f64; cells];
    let mut hist = vec![0u64; cells];
    let mut size = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    while size + 2 <= budget {
        let pool: Vec<usize> = if cells <= GREEDY_FULL_SCAN {
            (0..cells).collect()
        } else {
            (0..GREEDY_CANDIDATES).map(|_| rng.gen_range(0..cells)).collect()
        };
        let mut best: Option<(f64, f64, usize)> = None;
        for &x in &pool {
            let (mut worst, mut squares) = (0f64, 0f64);
            scan(&digits(group, n, x), &mut |a, w| {
                let v = sums[a] + w;
                worst = worst.max(v.abs());
                squares += v * v;
            });
            if best.is_none_or(|(bw, bs, _)| (worst, squares) < (bw, bs)) {
                best = Some((worst, squares, x));
            }
        }
        let (worst, _, x) = best?;
        scan(&digits(group, n, x), &mut |a, w| sums[a] += w);
        let inv = group.inv(&group.tuple_from_index(x as u128, n));
        hist[x] += 1;
        hist[group.tuple_index(&inv) as usize] += 1;
        size += 2;
        if worst / size as f64 <= target - BIAS_TOLERANCE {
            let mut s = BiasedSpace::from_dense(group, n, &hist).ok()?;
            s.construction = Construction::Greedy;
            s.target_epsilon = Some(eps);
            return gate(s, eps).ok();
        }
    }
    None
}

/// Seeded symmetric multiset of `budget` elements whose bias a sweep confirms
/// to be at most `ε`; `None` if no attempt succeeds.
fn sampled_for(group: &GroupSpec, n: usize, eps: Ratio<u64>, budget: u64) -> Option<BiasedSpace> {
    if !(2..=SAMPLE_LIMIT).contains(&budget) {
        return None;
    }
    let cells = dense_size(group, n).ok()?;
    for attempt in 0..SAMPLE_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        rng.set_stream(attempt);
        let mut hist = vec![0u64; cells];
        for _ in 0..budget / 2 {
            let x = rng.gen_range(0..cells);
            let inv = group.inv(&group.tuple_from_index(x as u128, n));
            hist[x] += 1;
            hist[group.tuple_index(&inv) as usize] += 1;
        }
        let mut s = BiasedSpace::from_dense(group, n, &hist).ok()?;
        s.construction = Construction::Sampled;
        s.target_epsilon = Some(eps);
        if let Ok(s) = gate(s, eps) {
            return Some(s);
        }
    }
    None
}

fn searched_for(group: &GroupSpec, n: usize, eps: Ratio<u64>, budget: u64) -> Option<BiasedSpace> {
    greedy_for(group, n, eps, budget).or_else(|| sampled_for(group, n, eps, budget))
}

/// Measure and record the bias when the space is small enough to sweep.
fn gate(mut s: BiasedSpace, eps: Ratio<u64>) -> Result<BiasedSpace> {
    let factors = s.group().invariant_factors().ok_or(Error::NotAbelian)?.to_vec();
    match s.dense_counts() {
        Ok(hist) => {
            let bias = bias_of_histogram(&factors, s.n(), &hist);
            check_bias(s, bias, eps)
        }
        Err(Error::TooLarge(_)) => {
            s.verified = false;
            Ok(s)
        }
        Err(e) => Err(e),
    }
}

fn check_bias(mut s: BiasedSpace, bias: f64, eps: Ratio<u64>) -> Result<BiasedSpace> {
    let target = *eps.numer() as f64 / *eps.denom() as f64;
    s.measured_bias = Some(bias);
    s.verified = true;
    if bias > target + BIAS_TOLERANCE {
        return Err(Error::BiasTooHigh { measured: bias, target });
    }
    Ok(s)
}

/// Geometric-progression space over `Z_q^n`, size `q²`.
pub fn construct_prime_field(q: u32, n: usize) -> Result<BiasedSpace> {
    if !is_prime(q as u64) {
        return Err(Error::NotPrime(q as u64));
    }
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    check_emissions(q as u64 * q as u64)?;
    let group = GroupSpec::cyclic(q)?;
    let field = Field::new(q, 1)?;
    let layout = Layout::new(&group, n)?;
    let mut s = powering_hist(&field, q, n, &layout).into_space(&group, n)?;
    s.construction = Construction::PrimeField;
    s.target_epsilon = Some(Ratio::new(n as u64 - 1, q as u64));
    if let Ok(hist) = s.dense_counts() {
        s.measured_bias = Some(bias_of_histogram(&[q], n, &hist));
    }
    Ok(s)
}

/// Trace-powering space over `Z_p^n` with bias at most `ε`.
pub fn construct_field_powering(p: u32, n: usize, eps: Ratio<u64>) -> Result<BiasedSpace> {
    let group = GroupSpec::cyclic(p)?;
    powering_for(&group, n, eps)
}

fn powering_for(group: &GroupSpec, n: usize, eps: Ratio<u64>) -> Result<BiasedSpace> {
    let factors = group.invariant_factors().ok_or(Error::NotAbelian)?;
    let p = *factors.last().expect("nonempty");
    let len = n * factors.len();
    let (xs, q) = field_powering_params(p, len, eps)?;
    check_emissions(xs.saturating_mul(q))?;
    let field = Field::at_least(p, q)?;
    let layout = Layout::new(group, n)?;
    let hist = powering_hist(&field, xs as u32, len, &layout);
    let bias = match &hist {
        Hist::Dense(v) => Some(bias_of_histogram(factors, n, v)),
        Hist::Sparse(_) => None,
    };
    let mut s = hist.into_space(group, n)?;
    s.construction = Construction::FieldPowering;
    s.target_epsilon = Some(eps);
    match bias {
        Some(bias) => check_bias(s, bias, eps),
        None => gate(s, eps),
    }
}

/// Rounded geometric progressions over `Z_m^n`; rejected if a sweep finds
/// bias above `ε`.
pub fn construct_rounding(m: u32, n: usize, eps: Ratio<u64>) -> Result<BiasedSpace> {
    if m < 2 {
        return Err(Error::Parameter("modulus must be at least 2".into()));
    }
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    let group = GroupSpec::cyclic(m)?;
    rounding_for(&group, n, eps, false)
}

fn rounding_for(group: &GroupSpec, n: usize, eps: Ratio<u64>, sym: bool) -> Result<BiasedSpace> {
    let factors = group.invariant_factors().ok_or(Error::NotAbelian)?;
    let m = *factors.last().expect("nonempty");
    let len = n * factors.len();
    let q = rounding_modulus(m, len, eps)?;
    check_emissions(q.saturating_mul(q))?;
    let layout = Layout::new(group, n)?;
    let mut s = rounding_hist(q, m, len, &layout).into_space(group, n)?;
    if sym {
        s = symmetrize(&s);
    }
    s.construction = Construction::Rounding;
    s.target_epsilon = Some(eps);
    gate(s, eps)
}

/// A symmetric `ε`-biased multiset in `G^n` for abelian `G`.
///
/// When the largest invariant factor is prime, `G = Z_p^k` and the field
/// powering space over `Z_p^{nk}` is used directly. Otherwise the rounding
/// space over `Z_{d_k}^{nk}` is pushed through the quotient map and
/// symmetrized. A sampled space replaces either one when `G^n` can be swept
/// and the algebraic space exceeds [`size_budget`]. `ε ≥ 1` is met by the
/// identity alone.
pub fn construct_for_group(group: &GroupSpec, n: usize, eps: Ratio<u64>) -> Result<BiasedSpace> {
    let factors = group.invariant_factors().ok_or(Error::NotAbelian)?;
    check_epsilon(eps)?;
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    if eps >= Ratio::from_integer(1) {
        let mut s = BiasedSpace::from_counts(group, n, [(group.identity_tuple(n), 1)])?;
        s.target_epsilon = Some(eps);
        s.measured_bias = Some(1.0);
        return Ok(s);
    }
    let dk = *factors.last().expect("nonempty");
    let budget = size_budget(group, n, eps)?;
    if is_prime(dk as u64) {
        match powering_for(group, n, eps) {
            Ok(s) if s.size() <= budget => Ok(s),
            other => searched_for(group, n, eps, budget).map_or(other, Ok),
        }
    } else {
        searched_for(group, n, eps, budget).map_or_else(|| rounding_for(group, n, eps, true), Ok)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{measure_bias, measure_bias_direct};
    use super::*;
    use crate::group::Tuple;

    fn r(a: u64, b: u64) -> Ratio<u64> {
        Ratio::new(a, b)
    }

    #[test]
    fn prime_field_examples() {
        let s = construct_prime_field(3, 1).unwrap();
        assert_eq!(s.size(), 9);
        assert!(s.measured_bias.unwrap() < 1e-12);
        let s = construct_prime_field(3, 2).unwrap();
        assert_eq!(s.size(), 9);
        assert!((measure_bias_direct(&s).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let s = construct_prime_field(5, 3).unwrap();
        assert!(measure_bias(&s).unwrap() <= 0.4 + 1e-12);
        assert!(s.is_symmetric());
        assert_eq!(construct_prime_field(4, 2).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn field_powering_meets_target() {
        for (p, n) in [(2u32, 4usize), (2, 6), (3, 3), (5, 2)] {
            for eps in [r(1, 2), r(1, 4), r(1, 8)] {
                let s = construct_field_powering(p, n, eps).unwrap();
                let (xs, q) = field_powering_params(p, n, eps).unwrap();
                assert_eq!(s.size(), xs * q);
                assert!(s.is_symmetric());
                let direct = measure_bias_direct(&s).unwrap();
                assert!(direct <= 0.5f64.min(*eps.numer() as f64 / *eps.denom() as f64) + 1e-9);
                assert!((direct - s.measured_bias.unwrap()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rounding_examples() {
        for (m, n) in [(2u32, 2usize), (4, 2)] {
            let s = construct_rounding(m, n, r(1, 2)).unwrap();
            assert!(s.measured_bias.unwrap() <= 0.5 + 1e-9);
            assert!(measure_bias_direct(&s).unwrap() <= 0.5 + 1e-9);
        }
        let s = construct_rounding(3, 1, r(1, 3)).unwrap();
        assert!(s.measured_bias.unwrap() <= 1.0 / 3.0 + 1e-9);
        assert_eq!(rounding_modulus(2, 2, r(1, 2)).unwrap(), 67);
    }

    #[test]
    fn group_dispatch() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let s = construct_for_group(&z2, 4, r(1, 2)).unwrap();
        assert_eq!(s.construction, Construction::FieldPowering);
        assert!(s.measured_bias.unwrap() <= 0.5 + 1e-9);
        let z3 = GroupSpec::cyclic(3).unwrap();
        let s = construct_for_group(&z3, 2, r(1, 4)).unwrap();
        assert!(s.measured_bias.unwrap() <= 0.25 + 1e-9);
        let g = GroupSpec::abelian(&[2, 4]).unwrap();
        let s = construct_for_group(&g, 2, r(1, 2)).unwrap();
        assert_eq!(s.construction, Construction::Greedy);
        assert!(s.size() <= size_budget(&g, 2, r(1, 2)).unwrap());
        assert!(s.is_symmetric());
        assert!(measure_bias_direct(&s).unwrap() <= 0.5 + 1e-9);
        let s = construct_for_group(&g, 3, r(1, 1)).unwrap();
        assert_eq!(s.expanded(), vec![g.identity_tuple(3)]);
    }

    #[test]
    fn sampled_space_within_budget() {
        // Field powering over Z5 needs 10 elements here; the budget is 8.
        let z5 = GroupSpec::cyclic(5).unwrap();
        assert_eq!(size_budget(&z5, 2, r(1, 2)).unwrap(), 8);
        let s = construct_for_group(&z5, 2, r(1, 2)).unwrap();
        assert_eq!(s.construction, Construction::Greedy);
        assert!(s.size() <= 8 && s.is_symmetric());
        assert!(measure_bias_direct(&s).unwrap() <= 0.5 + 1e-9);
        assert_eq!(construct_for_group(&z5, 2, r(1, 2)).unwrap(), s);
    }

    #[test]
    fn rounding_still_available() {
        let g = GroupSpec::abelian(&[2, 4]).unwrap();
        let s = rounding_for(&g, 2, r(1, 2), true).unwrap();
        assert_eq!(s.construction, Construction::Rounding);
        assert!(measure_bias_direct(&s).unwrap() <= 0.5 + 1e-9);
    }

    #[test]
    fn product_of_cyclic_primes() {
        let g = GroupSpec::abelian(&[3, 3]).unwrap();
        let s = construct_for_group(&g, 2, r(1, 4)).unwrap();
        assert!(measure_bias_direct(&s).unwrap() <= 0.25 + 1e-9);
        assert_eq!(s.group(), &g);
        assert_eq!(s.iter().next().unwrap().0, &Tuple::new(vec![0, 0]));
    }
}
