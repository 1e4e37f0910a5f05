//! Remote points: given `H ≤ G^n` and `r`, find `x` with `Δ(x, H) > r`.

pub mod cover;
pub mod greedy;
pub mod hitting;

use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ceil_dimension, distance_to_set, GroupSpec, Subgroup, Tuple};
use crate::smallbias::construct_for_group;
use cover::{build_cover, half_dimension_holds, CoverParams};
use greedy::{estimator_along, greedy_with_chains};
use hitting::{hit_with_chains, hitting_alpha, hitting_bound};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    AbelianHitting,
    GeneralGreedy,
    #[default]
    Auto,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "abelian_hitting" | "hitting" => Ok(Mode::AbelianHitting),
            "general_greedy" | "greedy" => Ok(Mode::GeneralGreedy),
            "auto" => Ok(Mode::Auto),
            other => Err(Error::Parameter(format!("unknown mode {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    HalfDim,
    GeneralK,
    /// Block reduction when its guarantee exceeds `r`, otherwise the
    /// half-dimension solver.
    #[default]
    Auto,
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "half_dim" => Ok(Strategy::HalfDim),
            "general_k" => Ok(Strategy::GeneralK),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::Parameter(format!("unknown strategy {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RppInstance {
    pub group: GroupSpec,
    pub n: usize,
    pub generators: Vec<Tuple>,
    pub r: usize,
    #[serde(default)]
    pub mode: Mode,
}

impl RppInstance {
    pub fn new(group: GroupSpec, h: &Subgroup, r: usize, mode: Mode) -> Self {
        Self {
            group,
            n: h.n,
            generators: h.generators.clone(),
            r,
            mode,
        }
    }

    pub fn subgroup(&self) -> Subgroup {
        Subgroup::new(self.n, self.generators.clone())
    }

    pub fn validate(&self) -> Result<()> {
        self.subgroup().validate(&self.group)
    }
}

/// Default constant for the block reduction's per-block radius.
pub fn default_c() -> Ratio<u64> {
    Ratio::new(1, 4)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub c: Option<Ratio<u64>>,
    /// Explicit cover sizes for the half-dimension solver.
    pub cover: Option<CoverParams>,
    /// Upper limit on the bias used in hitting mode.
    pub alpha_cap: Option<Ratio<u64>>,
    pub strategy: Strategy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPart {
    pub range: Range<usize>,
    pub solution: RppSolution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Greedy {
        cover: CoverParams,
        /// `Φ_0, ..., Φ_n` as exact fractions.
        phi: Vec<String>,
    },
    Hitting {
        cover: CoverParams,
        alpha: Ratio<u64>,
        space_size: u64,
        scan_index: usize,
        /// `Σ_A (1/I_A + α(1 - 1/I_A))`; below one guarantees a hit.
        bound: String,
        verdicts: Vec<bool>,
    },
    Blocks {
        k: usize,
        c: Ratio<u64>,
        r_block: usize,
        parts: Vec<BlockPart>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RppSolution {
    pub x: Tuple,
    pub certificate: Certificate,
    #[serde(default)]
    pub verified_distance: Option<usize>,
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        format!("{}/1", r.numer())
    } else {
        r.to_string()
    }
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    BigRational::from_str(s).map_err(|_| Error::VerificationFailed(format!("cannot parse estimator value {s}")))
}

/// `⌈c·log₂ n⌉`.
fn c_log(c: Ratio<u64>, n: usize) -> usize {
    let v = *c.numer() as f64 / *c.denom() as f64 * (n.max(1) as f64).log2();
    (v - 1e-9).ceil().max(0.0) as usize
}

/// Half-dimension solver: cover `B(H, r)` and find a point outside the cover.
pub fn solve_half_dim(inst: &RppInstance, opts: &SolveOptions) -> Result<RppSolution> {
    inst.validate()?;
    let group = &inst.group;
    let h = inst.subgroup();
    let order = h.order(group)?;
    if !half_dimension_holds(group, &order, inst.n) {
        return Err(Error::RegimeViolation(format!("|H| = {order} exceeds |G|^(n/2)")));
    }
    if let Some(c) = opts.c {
        if inst.r > c_log(c, inst.n) {
            return Err(Error::RegimeViolation(format!("r = {} exceeds ⌈c·log n⌉", inst.r)));
        }
    }
    let params = match (&opts.cover, opts.c) {
        (Some(p), _) => p.clone(),
        (None, Some(c)) => CoverParams::from_c(inst.n, c)?,
        (None, None) => CoverParams::for_radius(inst.n, inst.r),
    };
    let cover = build_cover(group, &h, inst.r, &params)?;
    let chains = cover.chains(group)?;
    let greedy = || -> Result<RppSolution> {
        let (x, phi) = greedy_with_chains(group, &chains)?;
        Ok(RppSolution {
            x,
            certificate: Certificate::Greedy {
                cover: params.clone(),
                phi: phi.iter().map(fmt_ratio).collect(),
            },
            verified_distance: None,
        })
    };
    let hitting = || -> Result<RppSolution> {
        if !group.is_abelian_kind() {
            return Err(Error::NotAbelian);
        }
        let alpha = hitting_alpha(chains.len(), opts.alpha_cap);
        let space = construct_for_group(group, inst.n, alpha)?;
        let bound = hitting_bound(group, &chains, alpha);
        let hit = hit_with_chains(&chains, &space)?;
        Ok(RppSolution {
            x: hit.x,
            certificate: Certificate::Hitting {
                cover: params.clone(),
                alpha,
                space_size: space.size(),
                scan_index: hit.scan_index,
                bound: fmt_ratio(&bound),
                verdicts: hit.verdicts,
            },
            verified_distance: None,
        })
    };
    match inst.mode {
        Mode::GeneralGreedy => greedy(),
        Mode::AbelianHitting => hitting(),
        Mode::Auto => match greedy() {
            Err(Error::EstimatorStuck { .. }) if group.is_abelian_kind() => hitting(),
            other => other,
        },
    }
}

/// Consecutive blocks, as equal as possible, each of size in `[2k, 4k)`.
pub fn block_partition(n: usize, k: usize) -> Result<Vec<Range<usize>>> {
    let k = k.max(1);
    let b = n / (2 * k);
    if b == 0 {
        return Err(Error::RegimeViolation(format!("n = {n} is smaller than 2k = {}", 2 * k)));
    }
    let base = n / b;
    let extra = n % b;
    let mut out = Vec::with_capacity(b);
    let mut start = 0;
    for i in 0..b {
        // The larger blocks come last.
        let len = base + usize::from(i >= b - extra);
        out.push(start..start + len);
        start += len;
    }
    Ok(out)
}

/// `⌈4c·log₂ max(k, 2)⌉`: the distance each block solution must reach.
pub fn block_radius(k: usize, c: Ratio<u64>) -> usize {
    let v = 4.0 * *c.numer() as f64 / *c.denom() as f64 * (k.max(2) as f64).log2();
    (v - 1e-9).ceil().max(0.0) as usize
}

fn block_instance(inst: &RppInstance, range: &Range<usize>, r_block: usize) -> RppInstance {
    let coords: Vec<usize> = range.clone().collect();
    RppInstance::new(
        inst.group.clone(),
        &inst.subgroup().project(&coords),
        r_block - 1,
        inst.mode,
    )
}

/// Block reduction: split `[n]` into blocks of size `[2k, 4k)`, solve each
/// projection at distance `r_block` and concatenate. Every `h ∈ H` projects
/// into each block's subgroup, so the distances add up.
pub fn solve_general_k(inst: &RppInstance, c: Ratio<u64>) -> Result<RppSolution> {
    inst.validate()?;
    let group = &inst.group;
    let order = inst.subgroup().order(group)?;
    if !half_dimension_holds(group, &order, inst.n) {
        return Err(Error::RegimeViolation(format!("|H| = {order} exceeds |G|^(n/2)")));
    }
    let k = ceil_dimension(&order, group.order());
    let blocks = block_partition(inst.n, k)?;
    let r_block = block_radius(k, c);
    if r_block == 0 {
        return Err(Error::Parameter(format!("c = {c} gives a zero block radius")));
    }
    let guarantee = blocks.len() * r_block;
    if inst.r >= guarantee {
        return Err(Error::RegimeViolation(format!(
            "block reduction guarantees distance {guarantee}, not more than r = {}",
            inst.r
        )));
    }
    let parts: Vec<BlockPart> = blocks
        .par_iter()
        .map(|range| {
            let sub = block_instance(inst, range, r_block);
            let solution = solve_half_dim(&sub, &SolveOptions::default())?;
            Ok(BlockPart {
                range: range.clone(),
                solution,
            })
        })
        .collect::<Result<_>>()?;
    let x = Tuple::new(parts.iter().flat_map(|p| p.solution.x.coords().to_vec()).collect());
    Ok(RppSolution {
        x,
        certificate: Certificate::Blocks {
            k: k.max(1),
            c,
            r_block,
            parts,
        },
        verified_distance: None,
    })
}

/// Dispatch on the requested strategy.
pub fn solve(inst: &RppInstance, opts: &SolveOptions) -> Result<RppSolution> {
    let c = opts.c.unwrap_or_else(default_c);
    match opts.strategy {
        Strategy::HalfDim => solve_half_dim(inst, opts),
        Strategy::GeneralK => solve_general_k(inst, c),
        Strategy::Auto => match solve_general_k(inst, c) {
            Ok(s) => Ok(s),
            Err(_) => solve_half_dim(inst, &SolveOptions { c: None, ..opts.clone() }),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub certificate: String,
    pub r: usize,
    /// Exact `Δ(x, H)` when `H` was small enough to enumerate.
    pub distance: Option<usize>,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::VerificationFailed(msg.into())
}

fn check_certificate(inst: &RppInstance, sol: &RppSolution) -> Result<()> {
    let group = &inst.group;
    let h = inst.subgroup();
    match &sol.certificate {
        Certificate::Greedy { cover, phi } => {
            let fam = build_cover(group, &h, inst.r, cover)?;
            let chains = fam.chains(group)?;
            if let Some(i) = chains.iter().position(|c| c.contains(&sol.x)) {
                return Err(fail(format!("x lies in cover member {i}")));
            }
            let phi: Vec<BigRational> = phi.iter().map(|s| parse_ratio(s)).collect::<Result<_>>()?;
            if phi.len() != inst.n + 1 {
                return Err(fail("estimator trace has the wrong length"));
            }
            if let Some(i) = phi.windows(2).position(|w| w[1] > w[0]) {
                return Err(fail(format!("estimator increases at step {}", i + 1)));
            }
            if phi.last().is_some_and(|v| *v >= BigRational::one()) {
                return Err(fail("final estimator is not below 1"));
            }
            if estimator_along(group, &chains, &sol.x) != phi {
                return Err(fail("estimator trace does not match a recomputation"));
            }
        }
        Certificate::Hitting {
            cover,
            alpha,
            scan_index,
            verdicts,
            ..
        } => {
            let fam = build_cover(group, &h, inst.r, cover)?;
            let chains = fam.chains(group)?;
            if verdicts.len() != chains.len() || verdicts.iter().any(|&v| v) {
                return Err(fail("membership verdicts do not clear every member"));
            }
            if let Some(i) = chains.iter().position(|c| c.contains(&sol.x)) {
                return Err(fail(format!("x lies in cover member {i}")));
            }
            let space = construct_for_group(group, inst.n, *alpha)?;
            if space.iter().nth(*scan_index).map(|(t, _)| t) != Some(&sol.x) {
                return Err(fail("x is not the reported element of the biased space"));
            }
        }
        Certificate::Blocks { c, r_block, parts, k } => {
            let order = h.order(group)?;
            let expected = block_partition(inst.n, ceil_dimension(&order, group.order()))?;
            if parts.iter().map(|p| p.range.clone()).collect::<Vec<_>>() != expected {
                return Err(fail("blocks do not match the partition"));
            }
            if *r_block != block_radius(*k, *c) {
                return Err(fail("block radius does not match c and k"));
            }
            for part in parts {
                let sub = block_instance(inst, &part.range, *r_block);
                let coords: Vec<usize> = part.range.clone().collect();
                if sol.x.project(&coords) != part.solution.x {
                    return Err(fail(format!("x disagrees with the block solution on {:?}", part.range)));
                }
                check_certificate(&sub, &part.solution)?;
            }
        }
    }
    Ok(())
}

/// Re-check the certificate and, when `|H| ≤ cap`, the exact distance.
pub fn verify_solution(inst: &RppInstance, sol: &RppSolution, cap: usize) -> Result<VerifyReport> {
    inst.validate()?;
    inst.group.check_tuple(&sol.x)?;
    if sol.x.len() != inst.n {
        return Err(fail(format!("x has length {}, expected {}", sol.x.len(), inst.n)));
    }
    check_certificate(inst, sol)?;
    let h = inst.subgroup();
    let order = h.order(&inst.group)?;
    let distance = match order.to_usize().filter(|&o| o <= cap) {
        Some(_) => {
            let elems = h.enumerate(&inst.group, cap)?;
            let d = distance_to_set(&sol.x, elems.iter());
            if d <= inst.r {
                return Err(fail(format!("Δ(x, H) = {d} is not greater than r = {}", inst.r)));
            }
            Some(d)
        }
        None => None,
    };
    let kind = match sol.certificate {
        Certificate::Greedy { .. } => "greedy",
        Certificate::Hitting { .. } => "hitting",
        Certificate::Blocks { .. } => "blocks",
    };
    Ok(VerifyReport {
        certificate: kind.into(),
        r: inst.r,
        distance,
    })
}

/// `Σ_A |H_A| / |G|^n` for a cover, as an exact fraction.
pub fn initial_estimator(group: &GroupSpec, inst: &RppInstance, params: &CoverParams) -> Result<BigRational> {
    let fam = build_cover(group, &inst.subgroup(), inst.r, params)?;
    let chains = fam.chains(group)?;
    let num: BigUint = greedy::initial_numerator(&chains);
    Ok(greedy::phi_value(&num, group.order(), inst.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t(v: &[u8]) -> Tuple {
        Tuple::new(v.to_vec())
    }

    fn diagonal_instance(mode: Mode) -> RppInstance {
        let z2 = GroupSpec::cyclic(2).unwrap();
        RppInstance::new(z2, &Subgroup::new(4, vec![t(&[1, 1, 1, 1])]), 1, mode)
    }

    #[test]
    fn diagonal_block_example() {
        let inst = diagonal_instance(Mode::Auto);
        let sol = solve(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(sol.x, t(&[0, 1, 0, 1]));
        let Certificate::Blocks { parts, r_block, .. } = &sol.certificate else {
            panic!("expected block certificate");
        };
        assert_eq!(*r_block, 1);
        assert_eq!(parts.len(), 2);
        let report = verify_solution(&inst, &sol, DEFAULT_CAP).unwrap();
        assert_eq!(report.distance, Some(2));
    }

    #[test]
    fn partition_sizes() {
        assert_eq!(block_partition(4, 1).unwrap(), vec![0..2, 2..4]);
        assert_eq!(block_partition(16, 3).unwrap(), vec![0..8, 8..16]);
        assert_eq!(block_partition(13, 2).unwrap(), vec![0..4, 4..8, 8..13]);
        assert_eq!(block_partition(8, 4).unwrap(), vec![0..8]);
        assert!(block_partition(5, 3).is_err());
        for n in 2..40 {
            for k in 1..=n / 2 {
                let p = block_partition(n, k).unwrap();
                assert_eq!(p.last().unwrap().end, n);
                assert!(p.iter().all(|r| r.len() >= 2 * k && r.len() < 4 * k));
            }
        }
    }

    #[test]
    fn trivial_subgroup_radius_zero() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        let inst = RppInstance::new(z3, &Subgroup::trivial(3), 0, Mode::Auto);
        let sol = solve_half_dim(&inst, &SolveOptions::default()).unwrap();
        assert!(sol.x.coords().iter().any(|&c| c != 0));
        verify_solution(&inst, &sol, DEFAULT_CAP).unwrap();
    }

    #[test]
    fn tampered_solution_fails() {
        let inst = diagonal_instance(Mode::Auto);
        let mut sol = solve(&inst, &SolveOptions::default()).unwrap();
        sol.x = t(&[1, 1, 1, 1]);
        assert!(matches!(verify_solution(&inst, &sol, DEFAULT_CAP), Err(Error::VerificationFailed(_))));
    }

    #[test]
    fn hitting_and_greedy_agree_on_remoteness() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let gens: Vec<Tuple> = (0..3)
            .map(|_| Tuple::new((0..12).map(|_| rng.gen_range(0..2)).collect()))
            .collect();
        let h = Subgroup::new(12, gens);
        for mode in [Mode::GeneralGreedy, Mode::AbelianHitting] {
            let inst = RppInstance::new(z2.clone(), &h, 2, mode);
            let sol = solve_half_dim(&inst, &SolveOptions::default()).unwrap();
            let report = verify_solution(&inst, &sol, DEFAULT_CAP).unwrap();
            assert!(report.distance.unwrap() >= 3);
        }
    }

    #[test]
    fn table_and_abelian_views_agree() {
        let klein = GroupSpec::abelian(&[2, 2]).unwrap();
        let table = GroupSpec::from_table(&klein.table(), None).unwrap();
        let h = Subgroup::new(6, vec![t(&[1, 2, 3, 0, 1, 2])]);
        for g in [klein, table] {
            let inst = RppInstance::new(g, &h, 1, Mode::Auto);
            let sol = solve_half_dim(&inst, &SolveOptions::default()).unwrap();
            assert!(verify_solution(&inst, &sol, DEFAULT_CAP).unwrap().distance.unwrap() >= 2);
        }
    }

    #[test]
    fn json_round_trip() {
        let inst = diagonal_instance(Mode::Auto);
        let sol = solve(&inst, &SolveOptions::default()).unwrap();
        let back: RppSolution = serde_json::from_str(&serde_json::to_string(&sol).unwrap()).unwrap();
        assert_eq!(back, sol);
        let inst_back: RppInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(inst_back, inst);
        let raw = r#"{"group":{"abelian":[2]},"n":4,"generators":[[1,1,1,1]],"r":1}"#;
        let parsed: RppInstance = serde_json::from_str(raw).unwrap();
        assert_eq!(parsed, inst);
    }
}
