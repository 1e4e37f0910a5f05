//! ε-biased multisets in `G^n` for abelian `G`.
//!
//! The bias of a multiset `S` is the largest `|avg_{s∈S} χ(s)|` over
//! nontrivial characters `χ`, averaged with multiplicity.

mod construct;
pub mod field;

pub use construct::{
    construct_field_powering, construct_for_group, construct_prime_field, construct_rounding, field_powering_params,
    rounding_modulus, size_budget,
};

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_rational::Ratio;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, GroupSpec, Tuple};

/// Largest `|G|^n` for which bias is computed exhaustively.
pub const SWEEP_LIMIT: usize = 1 << 24;

/// Comparison slack for floating-point bias values.
pub const BIAS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    PrimeField,
    FieldPowering,
    Rounding,
    QuotientLift,
    Greedy,
    Sampled,
    Explicit,
}

/// A multiset of tuples, stored as sorted distinct elements with counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct BiasedSpace {
    group: GroupSpec,
    n: usize,
    elements: Vec<Tuple>,
    counts: Vec<u64>,
    pub target_epsilon: Option<Ratio<u64>>,
    pub construction: Construction,
    pub symmetric: bool,
    pub measured_bias: Option<f64>,
    /// False when the space was too large to sweep and its bias is unchecked.
    pub verified: bool,
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    group: GroupSpec,
    n: usize,
    space: Vec<Tuple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplicities: Option<Vec<u64>>,
    #[serde(default)]
    target_epsilon: Option<Ratio<u64>>,
    #[serde(default = "explicit")]
    construction: Construction,
    #[serde(default)]
    symmetric: bool,
    #[serde(default)]
    measured_bias: Option<f64>,
    #[serde(default = "yes")]
    verified: bool,
}

fn explicit() -> Construction {
    Construction::Explicit
}

fn yes() -> bool {
    true
}

impl From<BiasedSpace> for SpaceRepr {
    fn from(s: BiasedSpace) -> Self {
        let multiplicities = s.counts.iter().any(|&c| c != 1).then(|| s.counts.clone());
        SpaceRepr {
            group: s.group,
            n: s.n,
            space: s.elements,
            multiplicities,
            target_epsilon: s.target_epsilon,
            construction: s.construction,
            symmetric: s.symmetric,
            measured_bias: s.measured_bias,
            verified: s.verified,
        }
    }
}

impl TryFrom<SpaceRepr> for BiasedSpace {
    type Error = Error;
    fn try_from(r: SpaceRepr) -> Result<Self> {
        let counts = match r.multiplicities {
            Some(c) if c.len() != r.space.len() => {
                return Err(Error::DimensionMismatch {
                    expected: r.space.len(),
                    got: c.len(),
                })
            }
            Some(c) => c,
            None => vec![1; r.space.len()],
        };
        let mut s = BiasedSpace::from_counts(&r.group, r.n, r.space.into_iter().zip(counts))?;
        s.target_epsilon = r.target_epsilon;
        s.construction = r.construction;
        s.measured_bias = r.measured_bias;
        s.verified = r.verified;
        if r.symmetric && !s.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(s)
    }
}

impl BiasedSpace {
    /// Build from tuples with multiplicities; repeated tuples are merged.
    pub fn from_counts(group: &GroupSpec, n: usize, items: impl IntoIterator<Item = (Tuple, u64)>) -> Result<Self> {
        let mut map: BTreeMap<Tuple, u64> = BTreeMap::new();
        for (t, c) in items {
            group.check_tuple(&t)?;
            if t.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: t.len(),
                });
            }
            if c > 0 {
                *map.entry(t).or_default() += c;
            }
        }
        let (elements, counts): (Vec<Tuple>, Vec<u64>) = map.into_iter().unzip();
        let mut s = Self {
            group: group.clone(),
            n,
            elements,
            counts,
            target_epsilon: None,
            construction: Construction::Explicit,
            symmetric: false,
            measured_bias: None,
            verified: true,
        };
        s.symmetric = s.is_symmetric();
        Ok(s)
    }

    pub fn from_multiset(group: &GroupSpec, n: usize, items: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        Self::from_counts(group, n, items.into_iter().map(|t| (t, 1)))
    }

    /// Build from a histogram indexed by tuple index.
    pub fn from_dense(group: &GroupSpec, n: usize, hist: &[u64]) -> Result<Self> {
        if hist.len() != dense_size(group, n)? {
            return Err(Error::DimensionMismatch {
                expected: dense_size(group, n)?,
                got: hist.len(),
            });
        }
        // Index order is lexicographic order, so no sorting is needed.
        let (elements, counts) = hist
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (group.tuple_from_index(i as u128, n), c))
            .unzip();
        let mut s = Self {
            group: group.clone(),
            n,
            elements,
            counts,
            target_epsilon: None,
            construction: Construction::Explicit,
            symmetric: false,
            measured_bias: None,
            verified: true,
        };
        s.symmetric = s.is_symmetric();
        Ok(s)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Size counted with repetitions.
    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn distinct(&self) -> usize {
        self.elements.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, u64)> + '_ {
        self.elements.iter().zip(self.counts.iter().copied())
    }

    pub fn count(&self, t: &Tuple) -> u64 {
        self.elements.binary_search(t).map_or(0, |i| self.counts[i])
    }

    /// Every element listed as often as it occurs.
    pub fn expanded(&self) -> Vec<Tuple> {
        self.iter()
            .flat_map(|(t, c)| std::iter::repeat_n(t.clone(), c as usize))
            .collect()
    }

    /// `count(s) = count(s⁻¹)` for every `s`, which is exactly when a
    /// multiset bijection `s ↦ s⁻¹` exists.
    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(t, c)| self.count(&self.group.inv(t)) == c)
    }

    /// Histogram indexed by tuple index.
    pub fn dense_counts(&self) -> Result<Vec<u64>> {
        let total = dense_size(&self.group, self.n)?;
        let mut hist = vec![0u64; total];
        for (t, c) in self.iter() {
            hist[self.group.tuple_index(t) as usize] += c;
        }
        Ok(hist)
    }
}

fn dense_size(group: &GroupSpec, n: usize) -> Result<usize> {
    let mut total: usize = 1;
    for _ in 0..n {
        total = total
            .checked_mul(group.order())
            .filter(|&t| t <= SWEEP_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("|G|^n exceeds {SWEEP_LIMIT}")))?;
    }
    Ok(total)
}

/// A character of `G^n`, labelled by one component vector per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    /// Entry `i·k + j` is `a_{i,j} ∈ Z_{d_j}`.
    pub label: Vec<u32>,
}

impl Character {
    pub fn new(group: &GroupSpec, n: usize, label: Vec<u32>) -> Result<Self> {
        let factors = group.invariant_factors().ok_or(Error::NotAbelian)?;
        if label.len() != n * factors.len() {
            return Err(Error::DimensionMismatch {
                expected: n * factors.len(),
                got: label.len(),
            });
        }
        if label.iter().enumerate().any(|(p, &a)| a >= factors[p % factors.len()]) {
            return Err(Error::InvalidElement(format!("character label {label:?} out of range")));
        }
        Ok(Self { label })
    }

    pub fn trivial(group: &GroupSpec, n: usize) -> Result<Self> {
        let k = group.invariant_factors().ok_or(Error::NotAbelian)?.len();
        Ok(Self { label: vec![0; n * k] })
    }

    pub fn is_trivial(&self) -> bool {
        self.label.iter().all(|&a| a == 0)
    }

    /// Exponent `e` with `χ(x) = exp(2πi·e/L)`, `L = d_k`.
    pub fn phase(&self, group: &GroupSpec, x: &Tuple) -> Result<u64> {
        let factors = group.invariant_factors().ok_or(Error::NotAbelian)?;
        group.check_tuple(x)?;
        let k = factors.len();
        if x.len() * k != self.label.len() {
            return Err(Error::DimensionMismatch {
                expected: self.label.len() / k,
                got: x.len(),
            });
        }
        let l = *factors.last().expect("nonempty") as u64;
        let mut e = 0u64;
        for (i, &xi) in x.coords().iter().enumerate() {
            let comps = group.components(xi)?;
            for (j, (&c, &d)) in comps.iter().zip(factors).enumerate() {
                e = (e + self.label[i * k + j] as u64 * c as u64 * (l / d as u64)) % l;
            }
        }
        Ok(e)
    }

    pub fn evaluate(&self, group: &GroupSpec, x: &Tuple) -> Result<Complex64> {
        let l = *group.invariant_factors().ok_or(Error::NotAbelian)?.last().expect("nonempty");
        let e = self.phase(group, x)?;
        Ok(Complex64::from_polar(1.0, TAU * e as f64 / l as f64))
    }
}

/// Every character of `G^n`, trivial first, in mixed-radix label order.
pub fn characters(group: &GroupSpec, n: usize) -> Result<impl Iterator<Item = Character>> {
    let factors = group.invariant_factors().ok_or(Error::NotAbelian)?.to_vec();
    let total = dense_size(group, n)?;
    let radix: Vec<u32> = (0..n).flat_map(|_| factors.iter().copied()).collect();
    Ok((0..total).map(move |mut idx| {
        let mut label = vec![0u32; radix.len()];
        for (slot, &d) in label.iter_mut().zip(&radix).rev() {
            *slot = (idx % d as usize) as u32;
            idx /= d as usize;
        }
        Character { label }
    }))
}

/// Precomputed per-element phase contributions for direct character sums.
struct PhaseTable {
    l: u64,
    k: usize,
    /// `comps[g][j]·(L/d_j)`.
    scaled: Vec<Vec<u64>>,
}

impl PhaseTable {
    fn new(group: &GroupSpec) -> Result<Self> {
        let factors = group.invariant_factors().ok_or(Error::NotAbelian)?;
        let l = *factors.last().expect("nonempty") as u64;
        let scaled = (0..group.order())
            .map(|g| {
                let comps = group.components(g as Elem).expect("abelian");
                comps
                    .iter()
                    .zip(factors)
                    .map(|(&c, &d)| c as u64 * (l / d as u64))
                    .collect()
            })
            .collect();
        Ok(Self {
            l,
            k: factors.len(),
            scaled,
        })
    }

    fn phase(&self, chi: &Character, x: &Tuple) -> usize {
        let mut e = 0u64;
        for (i, &xi) in x.coords().iter().enumerate() {
            for (j, &s) in self.scaled[xi as usize].iter().enumerate() {
                e += chi.label[i * self.k + j] as u64 * s;
            }
        }
        (e % self.l) as usize
    }
}

fn kahan_sum(terms: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for t in terms {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum
}

fn sum_by_phase(table: &PhaseTable, space: &BiasedSpace, chi: &Character) -> Complex64 {
    let mut hist = vec![0u64; table.l as usize];
    for (t, c) in space.iter() {
        hist[table.phase(chi, t)] += c;
    }
    let l = table.l as f64;
    kahan_sum(
        hist.iter()
            .enumerate()
            .map(|(e, &c)| Complex64::from_polar(c as f64, TAU * e as f64 / l)),
    ) / space.size() as f64
}

/// `avg_{s∈S} χ(s)` computed directly from the definition.
pub fn character_sum(space: &BiasedSpace, chi: &Character) -> Result<Complex64> {
    if space.size() == 0 {
        return Err(Error::Parameter("empty multiset".into()));
    }
    Character::new(&space.group, space.n, chi.label.clone())?;
    let table = PhaseTable::new(&space.group)?;
    Ok(sum_by_phase(&table, space, chi))
}

/// Bias by a direct sweep over every nontrivial character.
pub fn measure_bias_direct(space: &BiasedSpace) -> Result<f64> {
    if space.size() == 0 {
        return Err(Error::Parameter("empty multiset".into()));
    }
    let table = PhaseTable::new(&space.group)?;
    let chars: Vec<Character> = characters(&space.group, space.n)?.skip(1).collect();
    Ok(chars
        .par_iter()
        .map(|chi| sum_by_phase(&table, space, chi).norm())
        .reduce(|| 0.0, f64::max))
}

/// Bias via a multidimensional DFT of the multiplicity histogram.
pub fn measure_bias(space: &BiasedSpace) -> Result<f64> {
    let factors = space.group.invariant_factors().ok_or(Error::NotAbelian)?;
    if space.size() == 0 {
        return Err(Error::Parameter("empty multiset".into()));
    }
    let hist = space.dense_counts()?;
    Ok(bias_of_histogram(factors, space.n, &hist))
}

/// Bias of the multiset described by a dense histogram over `G^n`.
pub(crate) fn bias_of_histogram(factors: &[u32], n: usize, hist: &[u64]) -> f64 {
    let total: u64 = hist.iter().sum();
    let dims: Vec<usize> = (0..n).flat_map(|_| factors.iter().map(|&d| d as usize)).collect();
    let mut data: Vec<Complex64> = hist.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect();
    fft_nd(&mut data, &dims);
    data[1..]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        / total as f64
}

/// In-place DFT along every axis of a row-major array.
fn fft_nd(data: &mut [Complex64], dims: &[usize]) {
    let mut planner = FftPlanner::new();
    let total = data.len();
    let mut stride = total;
    for &len in dims {
        stride /= len;
        if len == 1 {
            continue;
        }
        let fft = planner.plan_fft_forward(len);
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        if stride == 1 {
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        let block = len * stride;
        for base in (0..total).step_by(block) {
            for off in 0..stride {
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + off + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    data[base + off + j * stride] = *v;
                }
            }
        }
    }
}

/// For cyclic `Z_d`: the largest gap, over nonzero `a` and residues `j`,
/// between `Pr_S[a·x = j]` and the same probability under the uniform
/// distribution. A bound `ε` here gives character bias at most `d·ε`.
pub fn linear_form_discrepancy(space: &BiasedSpace) -> Result<f64> {
    let factors = space.group.invariant_factors().ok_or(Error::NotAbelian)?;
    let d = match factors {
        [d] => *d as usize,
        _ => return Err(Error::Parameter("linear forms are defined here for cyclic groups".into())),
    };
    let total = space.size() as f64;
    let table = PhaseTable::new(&space.group)?;
    let mut worst: f64 = 0.0;
    for chi in characters(&space.group, space.n)?.skip(1) {
        let mut hist = vec![0u64; d];
        for (t, c) in space.iter() {
            hist[table.phase(&chi, t)] += c;
        }
        // Under the uniform distribution a·x is uniform on the subgroup
        // generated by gcd(a_1, ..., a_n, d).
        let g = chi
            .label
            .iter()
            .fold(d as u64, |acc, &a| num_integer::gcd(acc, a as u64)) as usize;
        for (j, &c) in hist.iter().enumerate() {
            let uniform = if j % g == 0 { g as f64 / d as f64 } else { 0.0 };
            worst = worst.max((c as f64 / total - uniform).abs());
        }
    }
    Ok(worst)
}

/// The coordinatewise image map `Z_{d_k}^k → G` and the group `Z_{d_k}^k`.
pub fn lift_map(group: &GroupSpec) -> Result<(GroupSpec, Vec<Elem>)> {
    let factors = group.invariant_factors().ok_or(Error::NotAbelian)?;
    let dk = *factors.last().expect("nonempty");
    let base = GroupSpec::abelian(&vec![dk; factors.len()])?;
    let image = (0..base.order())
        .map(|a| {
            let comps = base.components(a as Elem).expect("abelian");
            group.from_components(&comps).expect("same rank")
        })
        .collect();
    Ok((base, image))
}

/// Apply the natural surjection `(Z_{d_k}^k)^n → G^n` to every element.
pub fn quotient_lift(s0: &BiasedSpace, group: &GroupSpec) -> Result<BiasedSpace> {
    let (base, image) = lift_map(group)?;
    if s0.group != base {
        return Err(Error::InvalidGroup(format!(
            "lift source must be Z_{}^{}",
            group.invariant_factors().expect("abelian").last().expect("nonempty"),
            group.invariant_factors().expect("abelian").len()
        )));
    }
    let items = s0
        .iter()
        .map(|(t, c)| (Tuple::new(t.coords().iter().map(|&a| image[a as usize]).collect()), c));
    let mut out = BiasedSpace::from_counts(group, s0.n, items)?;
    out.target_epsilon = s0.target_epsilon;
    out.construction = Construction::QuotientLift;
    out.verified = s0.verified;
    Ok(out)
}

/// The disjoint union `S ⊎ S⁻¹`.
pub fn symmetrize(s: &BiasedSpace) -> BiasedSpace {
    let items = s
        .iter()
        .flat_map(|(t, c)| [(t.clone(), c), (s.group.inv(t), c)]);
    let mut out = BiasedSpace::from_counts(&s.group, s.n, items).expect("inverses are valid tuples");
    out.target_epsilon = s.target_epsilon;
    out.construction = s.construction;
    out.verified = s.verified;
    out
}
