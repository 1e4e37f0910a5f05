//! Hitting the complement of a cover with an ε-biased multiset.
//!
//! For a subgroup `K` of index `I`, the fraction of an `α`-biased multiset
//! inside `K` is at most `1/I + α(1 - 1/I)`. Summing over the members gives a
//! bound which, when below one, guarantees that some element of `S` avoids
//! every member.

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cover::CoverFamily;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, Tuple};
use crate::perm::SubgroupChain;
use crate::smallbias::BiasedSpace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitReport {
    pub x: Tuple,
    /// Position of `x` among the distinct elements of `S` in scan order.
    pub scan_index: usize,
    /// Membership of `x` in each cover member, in member order.
    pub verdicts: Vec<bool>,
}

/// `α = 1/(2m)` for a cover with `m` members, capped by an optional override.
pub fn hitting_alpha(members: usize, cap: Option<Ratio<u64>>) -> Ratio<u64> {
    let alpha = Ratio::new(1, 2 * members.max(1) as u64);
    match cap {
        Some(c) if c < alpha => c,
        _ => alpha,
    }
}

/// `Σ_A (1/I_A + α(1 - 1/I_A))` with `I_A = |G|^n / |H_A|`.
pub fn hitting_bound(group: &GroupSpec, chains: &[SubgroupChain], alpha: Ratio<u64>) -> BigRational {
    let alpha = BigRational::new((*alpha.numer()).into(), (*alpha.denom()).into());
    let total = BigRational::from_integer(group.power_order(chains.first().map_or(0, SubgroupChain::n)).into());
    chains
        .iter()
        .map(|c| {
            let frac = BigRational::from_integer(c.order().into()) / &total;
            &frac + &alpha * (BigRational::one() - &frac)
        })
        .fold(BigRational::zero(), |acc, v| acc + v)
}

/// First element of `S` (distinct elements in lexicographic order) outside
/// every cover member.
pub fn hit_with_space(group: &GroupSpec, cover: &CoverFamily, s: &BiasedSpace) -> Result<HitReport> {
    let chains = cover.chains(group)?;
    hit_with_chains(&chains, s)
}

pub fn hit_with_chains(chains: &[SubgroupChain], s: &BiasedSpace) -> Result<HitReport> {
    for (scan_index, (x, _)) in s.iter().enumerate() {
        if chains.iter().all(|c| !c.contains(x)) {
            return Ok(HitReport {
                x: x.clone(),
                scan_index,
                verdicts: vec![false; chains.len()],
            });
        }
    }
    Err(Error::NoHit)
}

/// Orders of the members as exact integers.
pub fn member_orders(chains: &[SubgroupChain]) -> Vec<BigUint> {
    chains.iter().map(SubgroupChain::order).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Subgroup;
    use crate::solver::cover::{build_cover, CoverParams};

    fn t(v: &[u8]) -> Tuple {
        Tuple::new(v.to_vec())
    }

    #[test]
    fn scan_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let all = BiasedSpace::from_multiset(&z2, 2, z2.all_tuples(2, 10).unwrap()).unwrap();
        let h = Subgroup::new(2, vec![t(&[1, 1])]);
        let cover = build_cover(&z2, &h, 0, &CoverParams::for_radius(2, 0)).unwrap();
        let hit = hit_with_space(&z2, &cover, &all).unwrap();
        assert_eq!(hit.x, t(&[0, 1]));
        assert_eq!(hit.scan_index, 1);

        let full = vec![SubgroupChain::new(&z2, &Subgroup::full(&z2, 2)).unwrap()];
        assert_eq!(hit_with_chains(&full, &all), Err(Error::NoHit));
    }

    #[test]
    fn alpha_choice() {
        assert_eq!(hitting_alpha(4, None), Ratio::new(1, 8));
        assert_eq!(hitting_alpha(4, Some(Ratio::new(1, 16))), Ratio::new(1, 16));
        assert_eq!(hitting_alpha(4, Some(Ratio::new(1, 2))), Ratio::new(1, 8));
    }

    #[test]
    fn bound_for_single_member() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let chains = vec![SubgroupChain::new(&z2, &Subgroup::new(2, vec![t(&[1, 1])])).unwrap()];
        let b = hitting_bound(&z2, &chains, Ratio::new(1, 2));
        assert_eq!(b, BigRational::new(3.into(), 4.into()));
    }
}
