//! Cayley graphs `C(G^n, S)`: spectra, random walks and confinement.
//!
//! Edges are `x → x·s` for each `s` in the multiset `S`, so the degree is
//! `|S|` counted with repetitions. `λ` is always normalized by the degree.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupSpec, Subgroup, Tuple};
use crate::perm::SubgroupChain;
use crate::smallbias::{measure_bias, BiasedSpace};

/// Largest vertex count for the dense eigensolve.
pub const NUMERIC_LIMIT: usize = 4096;

/// Largest vertex count for which confinement is computed exactly.
pub const EXACT_CONFINEMENT_LIMIT: usize = 64;

/// Two-sided 99% normal quantile used for Wilson intervals.
pub const WILSON_Z99: f64 = 2.5758293035489;

/// `λ·√|S|` below this is flagged for inspection.
pub const DEGREE_FLAG: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    space: BiasedSpace,
    /// Distinct elements of `S` and cumulative counts, for sampling steps.
    steps: Vec<Tuple>,
    cumulative: Vec<u64>,
}

impl CayleyGraph {
    pub fn new(space: BiasedSpace) -> Result<Self> {
        if space.size() == 0 {
            return Err(Error::Parameter("generating multiset is empty".into()));
        }
        if !space.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let mut steps = Vec::with_capacity(space.distinct());
        let mut cumulative = Vec::with_capacity(space.distinct());
        let mut acc = 0;
        for (t, c) in space.iter() {
            acc += c;
            steps.push(t.clone());
            cumulative.push(acc);
        }
        Ok(Self {
            space,
            steps,
            cumulative,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        self.space.group()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn space(&self) -> &BiasedSpace {
        &self.space
    }

    pub fn degree(&self) -> u64 {
        self.space.size()
    }

    /// `|G|^n` if it fits in a `usize`.
    pub fn vertex_count(&self) -> Option<usize> {
        self.group().power_order(self.n()).to_usize()
    }

    fn sample_step<R: Rng>(&self, rng: &mut R) -> &Tuple {
        let r = rng.gen_range(0..self.degree());
        let k = self.cumulative.partition_point(|&c| c <= r);
        &self.steps[k]
    }

    fn sample_vertex<R: Rng>(&self, rng: &mut R) -> Tuple {
        let m = self.group().order();
        Tuple::new((0..self.n()).map(|_| rng.gen_range(0..m) as u8).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    Character,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub lambda: f64,
    pub method: SpectrumMethod,
    pub alpha_target: Option<f64>,
    /// `λ·√|S|`; values below [`DEGREE_FLAG`] are flagged.
    pub lambda_sqrt_degree: f64,
    pub degree_flag: bool,
}

impl SpectrumReport {
    fn new(lambda: f64, method: SpectrumMethod, degree: u64) -> Self {
        let lambda = lambda.clamp(0.0, 1.0);
        let scaled = lambda * (degree as f64).sqrt();
        Self {
            lambda,
            method,
            alpha_target: None,
            lambda_sqrt_degree: scaled,
            degree_flag: scaled < DEGREE_FLAG,
        }
    }

    pub fn is_expander(&self, alpha: f64) -> bool {
        self.lambda <= alpha
    }
}

/// `λ` from the character sums of `S`, which are the eigenvalues of the
/// normalized adjacency matrix of an abelian Cayley graph.
pub fn lambda_by_characters(g: &CayleyGraph) -> Result<SpectrumReport> {
    let lambda = measure_bias(g.space())?;
    Ok(SpectrumReport::new(lambda, SpectrumMethod::Character, g.degree()))
}

/// Normalized adjacency matrix, rows and columns in tuple-index order.
pub fn adjacency_matrix(g: &CayleyGraph) -> Result<DMatrix<f64>> {
    let big_n = g
        .vertex_count()
        .filter(|&v| v <= NUMERIC_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("dense spectrum needs at most {NUMERIC_LIMIT} vertices")))?;
    let group = g.group();
    let n = g.n();
    let d = g.degree() as f64;
    let mut a = DMatrix::<f64>::zeros(big_n, big_n);
    for x in 0..big_n {
        let xt = group.tuple_from_index(x as u128, n);
        for (s, c) in g.space().iter() {
            let y = group.tuple_index(&group.mul_unchecked(&xt, s)) as usize;
            a[(x, y)] += c as f64 / d;
        }
    }
    Ok(a)
}

/// Second-largest absolute eigenvalue from a dense symmetric eigensolve:
/// one eigenvalue closest to 1 is removed and the largest remaining
/// absolute value is returned.
pub fn lambda_numeric(g: &CayleyGraph) -> Result<SpectrumReport> {
    let a = adjacency_matrix(g)?;
    let eig = a.symmetric_eigenvalues();
    let mut values: Vec<f64> = eig.iter().copied().collect();
    let top = values
        .iter()
        .enumerate()
        .min_by(|x, y| (x.1 - 1.0).abs().total_cmp(&(y.1 - 1.0).abs()))
        .map(|(i, _)| i)
        .expect("nonempty");
    values.swap_remove(top);
    let lambda = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(SpectrumReport::new(lambda, SpectrumMethod::Numeric, g.degree()))
}

/// Character path for abelian groups, numeric otherwise.
pub fn lambda(g: &CayleyGraph) -> Result<SpectrumReport> {
    if g.group().is_abelian_kind() {
        lambda_by_characters(g)
    } else {
        lambda_numeric(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub seed: u64,
    pub t: usize,
    pub vertices: Vec<Tuple>,
    pub steps: Vec<Tuple>,
}

impl WalkTrace {
    /// Re-check `v_{i+1} = v_i · s_{i+1}` and the lengths.
    pub fn verify(&self, group: &GroupSpec) -> Result<()> {
        if self.vertices.len() != self.t + 1 || self.steps.len() != self.t {
            return Err(Error::VerificationFailed("trace length does not match t".into()));
        }
        for (i, s) in self.steps.iter().enumerate() {
            if group.mul(&self.vertices[i], s)? != self.vertices[i + 1] {
                return Err(Error::VerificationFailed(format!("step {} does not follow the edge rule", i + 1)));
            }
        }
        Ok(())
    }

    /// Also require every step to lie in `S`.
    pub fn verify_in(&self, g: &CayleyGraph) -> Result<()> {
        self.verify(g.group())?;
        match self.steps.iter().position(|s| g.space().count(s) == 0) {
            Some(i) => Err(Error::VerificationFailed(format!("step {} is not in S", i + 1))),
            None => Ok(()),
        }
    }
}

/// Generator for trial `stream` under `seed`; trials never share a stream,
/// so parallel and sequential runs see identical draws.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_walk(g: &CayleyGraph, t: usize, seed: u64) -> WalkTrace {
    let mut rng = trial_rng(seed, 0);
    let mut v = g.sample_vertex(&mut rng);
    let mut vertices = vec![v.clone()];
    let mut steps = Vec::with_capacity(t);
    for _ in 0..t {
        let s = g.sample_step(&mut rng).clone();
        v = g.group().mul_unchecked(&v, &s);
        vertices.push(v.clone());
        steps.push(s);
    }
    WalkTrace {
        seed,
        t,
        vertices,
        steps,
    }
}

/// Final vertices of `trials` independent walks of length `t`.
pub fn walk_endpoints(g: &CayleyGraph, t: usize, trials: u64, seed: u64) -> Vec<Tuple> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let mut v = g.sample_vertex(&mut rng);
            for _ in 0..t {
                v = g.group().mul_unchecked(&v, g.sample_step(&mut rng));
            }
            v
        })
        .collect()
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// `P[v_0, ..., v_t all lie in B]` for a uniform start, by propagating the
/// restricted transition operator.
pub fn confinement_exact(g: &CayleyGraph, b: &dyn Fn(&Tuple) -> bool, t: usize) -> Result<f64> {
    let big_n = g
        .vertex_count()
        .filter(|&v| v <= 1 << 16)
        .ok_or_else(|| Error::TooLarge("exact confinement needs at most 2^16 vertices".into()))?;
    let group = g.group();
    let n = g.n();
    let tuples: Vec<Tuple> = (0..big_n).map(|x| group.tuple_from_index(x as u128, n)).collect();
    let inside: Vec<bool> = tuples.iter().map(b).collect();
    let d = g.degree() as f64;
    let edges: Vec<Vec<(usize, f64)>> = tuples
        .iter()
        .map(|x| {
            let mut out: HashMap<usize, f64> = HashMap::new();
            for (s, c) in g.space().iter() {
                *out.entry(group.tuple_index(&group.mul_unchecked(x, s)) as usize).or_default() += c as f64 / d;
            }
            let mut out: Vec<(usize, f64)> = out.into_iter().collect();
            out.sort_unstable_by_key(|e| e.0);
            out
        })
        .collect();
    let mut mass: Vec<f64> = inside.iter().map(|&i| if i { 1.0 / big_n as f64 } else { 0.0 }).collect();
    for _ in 0..t {
        let mut next = vec![0.0; big_n];
        for (x, &m) in mass.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for &(y, p) in &edges[x] {
                if inside[y] {
                    next[y] += m * p;
                }
            }
        }
        mass = next;
    }
    Ok(mass.iter().sum())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Monte-Carlo estimate of the confinement probability with a 99% Wilson
/// interval; trial `i` uses stream `i` of `seed`.
pub fn confinement_monte_carlo(
    g: &CayleyGraph,
    b: &(dyn Fn(&Tuple) -> bool + Sync),
    t: usize,
    trials: u64,
    seed: u64,
) -> McEstimate {
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let mut v = g.sample_vertex(&mut rng);
            if !b(&v) {
                return 0;
            }
            for _ in 0..t {
                v = g.group().mul_unchecked(&v, g.sample_step(&mut rng));
                if !b(&v) {
                    return 0;
                }
            }
            1
        })
        .sum();
    let (lower, upper) = wilson_interval(successes, trials, WILSON_Z99);
    McEstimate {
        successes,
        trials,
        estimate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
        lower,
        upper,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfinementReport {
    pub t: usize,
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    /// `(β+α)^t` when both are known.
    pub bound: Option<f64>,
    pub exact: Option<f64>,
    pub monte_carlo: Option<McEstimate>,
}

impl ConfinementReport {
    /// The bound holds for the exact value if known, otherwise for the
    /// upper end of the Wilson interval.
    pub fn respects_bound(&self) -> Option<bool> {
        let bound = self.bound?;
        if let Some(p) = self.exact {
            return Some(p <= bound + 1e-12);
        }
        self.monte_carlo.as_ref().map(|mc| mc.upper <= bound)
    }
}

/// Exact probability for small graphs, sampling otherwise (and in addition
/// whenever `trials > 0`), together with the `(β+α)^t` reference value.
pub fn confinement_probability(
    g: &CayleyGraph,
    b: &(dyn Fn(&Tuple) -> bool + Sync),
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<ConfinementReport> {
    let big_n = g.vertex_count();
    let beta = big_n.filter(|&v| v <= 1 << 20).map(|v| {
        let inside = (0..v)
            .filter(|&x| b(&g.group().tuple_from_index(x as u128, g.n())))
            .count();
        inside as f64 / v as f64
    });
    let alpha = lambda(g).ok().map(|r| r.lambda);
    let bound = beta.zip(alpha).map(|(b, a)| (b + a).powi(t as i32));
    let exact = match big_n {
        Some(v) if v <= EXACT_CONFINEMENT_LIMIT => Some(confinement_exact(g, b, t)?),
        _ => None,
    };
    let monte_carlo = (trials > 0 || exact.is_none()).then(|| confinement_monte_carlo(g, b, t, trials.max(1), seed));
    Ok(ConfinementReport {
        t,
        beta,
        alpha,
        bound,
        exact,
        monte_carlo,
    })
}

/// `η = |S ∩ H| / |S|`, counted with repetitions.
pub fn subgroup_fraction(s: &BiasedSpace, h: &Subgroup) -> Result<Ratio<u64>> {
    if s.size() == 0 {
        return Err(Error::Parameter("empty multiset".into()));
    }
    if h.n != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            got: h.n,
        });
    }
    let chain = SubgroupChain::new(s.group(), h)?;
    let inside: u64 = s.iter().filter(|(t, _)| chain.contains(t)).map(|(_, c)| c).sum();
    Ok(Ratio::new(inside, s.size()))
}

/// `⌈2n / (d·log_{|G|} n − 2)⌉`.
pub fn walk_parameter_t(n: usize, d: f64, group_order: usize) -> Result<u64> {
    if n < 2 || group_order < 2 {
        return Err(Error::Parameter("need n >= 2 and |G| >= 2".into()));
    }
    let denom = d * (n as f64).ln() / (group_order as f64).ln() - 2.0;
    if denom <= 1e-12 {
        return Err(Error::Parameter(format!("d·log_|G| n = {} must exceed 2", denom + 2.0)));
    }
    let value = 2.0 * n as f64 / denom;
    // Values within rounding of an integer are taken as that integer.
    let nearest = value.round();
    Ok(if (value - nearest).abs() < 1e-9 { nearest as u64 } else { value.ceil() as u64 })
}

/// `(β+α)^t` with `β = |H|/|G|^n`, evaluated exactly enough for comparisons.
pub fn confinement_bound(h_order: &BigUint, group_order: usize, n: usize, alpha: f64, t: usize) -> f64 {
    let beta = h_order.to_f64().unwrap_or(f64::INFINITY) / (group_order as f64).powi(n as i32);
    (beta + alpha).powi(t as i32)
}
