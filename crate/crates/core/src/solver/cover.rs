//! Covering `B(H, r)` by polynomially many subgroups `H_A = H·K_A`.
//!
//! `[n]` is cut into consecutive blocks `S_1..S_ℓ`; for each set `A` of
//! `a_size` block indices, `K_A` is the coordinate subgroup on `∪_{i∈A} S_i`.
//! A point `h·e` with `wt(e) ≤ r` has its support in at most `r` blocks, so
//! it lies in `H_A` for any `A` containing those blocks once
//! `a_size ≥ min(r, ℓ)`.

use std::ops::Range;

use itertools::Itertools;
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{coordinate_generators, GroupSpec, Subgroup};
use crate::perm::SubgroupChain;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverParams {
    /// The constant the sizes were derived from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Ratio<u64>>,
    pub ell: usize,
    pub block_size: usize,
    pub a_size: usize,
}

impl CoverParams {
    /// `ℓ = ⌈10c·log₂ n⌉` (at most `n`), blocks of `⌈n/ℓ⌉` coordinates and
    /// `|A| = ⌈c·log₂ n⌉`.
    pub fn from_c(n: usize, c: Ratio<u64>) -> Result<Self> {
        if n == 0 || *c.numer() == 0 {
            return Err(Error::Parameter("need n >= 1 and c > 0".into()));
        }
        let c_f = *c.numer() as f64 / *c.denom() as f64;
        let log_n = (n as f64).log2();
        let ell = ((10.0 * c_f * log_n - 1e-9).ceil() as usize).clamp(1, n);
        let block_size = n.div_ceil(ell);
        let ell = n.div_ceil(block_size);
        let a_size = ((c_f * log_n - 1e-9).ceil() as usize).clamp(0, ell);
        Ok(Self {
            c: Some(c),
            ell,
            block_size,
            a_size,
        })
    }

    /// Singleton blocks and `|A| = min(r, n)`: the smallest sound choice.
    pub fn for_radius(n: usize, r: usize) -> Self {
        Self {
            c: None,
            ell: n,
            block_size: 1,
            a_size: r.min(n),
        }
    }

    /// Blocks of `block_size` coordinates with `|A| = a_size`.
    pub fn with_blocks(n: usize, block_size: usize, a_size: usize) -> Result<Self> {
        if block_size == 0 || n == 0 {
            return Err(Error::Parameter("block size and n must be positive".into()));
        }
        let ell = n.div_ceil(block_size);
        if a_size > ell {
            return Err(Error::Parameter(format!("|A| = {a_size} exceeds the {ell} blocks")));
        }
        Ok(Self {
            c: None,
            ell,
            block_size,
            a_size,
        })
    }

    /// Number of members, `C(ℓ, a_size)`.
    pub fn member_count(&self) -> BigUint {
        let mut acc = BigUint::from(1u32);
        for i in 0..self.a_size {
            acc = acc * BigUint::from(self.ell - i) / BigUint::from(i + 1);
        }
        acc
    }

    /// Every weight-`r` support meets at most `min(r, ℓ)` blocks.
    pub fn covers_radius(&self, r: usize) -> bool {
        self.a_size >= r.min(self.ell)
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.block_size == 0 || self.ell * self.block_size < n || (self.ell - 1) * self.block_size >= n {
            return Err(Error::Parameter(format!(
                "{} blocks of size {} do not partition {n} coordinates",
                self.ell, self.block_size
            )));
        }
        if self.a_size > self.ell {
            return Err(Error::Parameter(format!("|A| = {} exceeds ℓ = {}", self.a_size, self.ell)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverMember {
    /// Block indices in `A`.
    pub a: Vec<usize>,
    pub subgroup: Subgroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFamily {
    pub params: CoverParams,
    pub r: usize,
    pub blocks: Vec<Range<usize>>,
    pub members: Vec<CoverMember>,
}

/// Largest number of members a cover may have.
pub const MAX_MEMBERS: u64 = 1 << 16;

/// Exact check `δ(H) ≤ n/2`, i.e. `|H|² ≤ |G|^n`.
pub fn half_dimension_holds(group: &GroupSpec, h_order: &BigUint, n: usize) -> bool {
    h_order * h_order <= group.power_order(n)
}

pub fn build_cover(group: &GroupSpec, h: &Subgroup, r: usize, params: &CoverParams) -> Result<CoverFamily> {
    h.validate(group)?;
    let n = h.n;
    let order = h.order(group)?;
    if !half_dimension_holds(group, &order, n) {
        return Err(Error::RegimeViolation(format!(
            "|H| = {order} exceeds |G|^(n/2) for n = {n}"
        )));
    }
    params.check(n)?;
    if !params.covers_radius(r) {
        return Err(Error::RegimeViolation(format!(
            "|A| = {} cannot cover radius {r} with {} blocks",
            params.a_size, params.ell
        )));
    }
    let blocks: Vec<Range<usize>> = (0..params.ell)
        .map(|j| j * params.block_size..((j + 1) * params.block_size).min(n))
        .collect();
    if r == 0 {
        return Ok(CoverFamily {
            params: params.clone(),
            r,
            blocks,
            members: vec![CoverMember {
                a: Vec::new(),
                subgroup: h.clone(),
            }],
        });
    }
    if params.member_count().to_u64().is_none_or(|m| m > MAX_MEMBERS) {
        return Err(Error::TooLarge(format!("cover would have {} members", params.member_count())));
    }
    let members = (0..params.ell)
        .combinations(params.a_size)
        .map(|a| {
            let coords = a.iter().flat_map(|&j| blocks[j].clone());
            let mut gens = h.generators.clone();
            gens.extend(coordinate_generators(group, n, coords));
            CoverMember {
                a,
                subgroup: Subgroup::new(n, gens),
            }
        })
        .collect();
    Ok(CoverFamily {
        params: params.clone(),
        r,
        blocks,
        members,
    })
}

impl CoverFamily {
    /// Coordinates of `K_A` for a member.
    pub fn coordinates(&self, member: &CoverMember) -> Vec<usize> {
        member.a.iter().flat_map(|&j| self.blocks[j].clone()).collect()
    }

    /// Stabilizer chains for every member, in member order.
    pub fn chains(&self, group: &GroupSpec) -> Result<Vec<SubgroupChain>> {
        self.members
            .par_iter()
            .map(|m| SubgroupChain::new(group, &m.subgroup))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Tuple, DEFAULT_CAP};
    use std::collections::HashSet;

    fn t(v: &[u8]) -> Tuple {
        Tuple::new(v.to_vec())
    }

    fn ball(group: &GroupSpec, h: &Subgroup, r: usize) -> HashSet<Tuple> {
        let elems = h.enumerate(group, DEFAULT_CAP).unwrap();
        group
            .all_tuples(h.n, DEFAULT_CAP)
            .unwrap()
            .into_iter()
            .filter(|x| crate::group::distance_to_set(x, elems.iter()) <= r)
            .collect()
    }

    fn union(group: &GroupSpec, cover: &CoverFamily) -> HashSet<Tuple> {
        cover
            .members
            .iter()
            .flat_map(|m| m.subgroup.enumerate(group, DEFAULT_CAP).unwrap())
            .collect()
    }

    #[test]
    fn diagonal_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let h = Subgroup::new(4, vec![t(&[1, 1, 1, 1])]);
        let cover = build_cover(&z2, &h, 1, &CoverParams::for_radius(4, 1)).unwrap();
        assert_eq!(cover.members.len(), 4);
        let chains = cover.chains(&z2).unwrap();
        assert!(chains.iter().all(|c| c.order() == BigUint::from(4u32)));
        let b1 = ball(&z2, &h, 1);
        assert_eq!(b1.len(), 10);
        assert!(b1.is_subset(&union(&z2, &cover)));

        let cover = build_cover(&z2, &h, 2, &CoverParams::for_radius(4, 2)).unwrap();
        assert_eq!(cover.members.len(), 6);
        assert!(ball(&z2, &h, 2).is_subset(&union(&z2, &cover)));

        let cover = build_cover(&z2, &h, 0, &CoverParams::for_radius(4, 0)).unwrap();
        assert_eq!(cover.members.len(), 1);
        assert_eq!(cover.members[0].subgroup, h);
    }

    #[test]
    fn paired_blocks_cover() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        let h = Subgroup::new(6, vec![t(&[1, 2, 0, 1, 0, 2])]);
        let params = CoverParams::with_blocks(6, 2, 2).unwrap();
        let cover = build_cover(&z3, &h, 2, &params).unwrap();
        assert_eq!(cover.members.len(), 3);
        assert!(ball(&z3, &h, 2).is_subset(&union(&z3, &cover)));
    }

    #[test]
    fn too_few_blocks_per_member_is_rejected() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let h = Subgroup::new(4, vec![t(&[1, 1, 1, 1])]);
        // Two blocks of two with |A| = 1: the weight-2 point 1010 touches both.
        let params = CoverParams::with_blocks(4, 2, 1).unwrap();
        assert!(matches!(build_cover(&z2, &h, 2, &params), Err(Error::RegimeViolation(_))));
    }

    #[test]
    fn large_subgroup_is_rejected() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let h = Subgroup::new(2, vec![t(&[1, 0]), t(&[0, 1])]);
        assert!(matches!(
            build_cover(&z2, &h, 1, &CoverParams::for_radius(2, 1)),
            Err(Error::RegimeViolation(_))
        ));
    }

    #[test]
    fn params_from_c() {
        let p = CoverParams::from_c(16, Ratio::new(1, 4)).unwrap();
        assert_eq!((p.ell, p.block_size, p.a_size), (8, 2, 1));
        assert!(p.ell * p.block_size >= 16);
        let p = CoverParams::from_c(8, Ratio::new(1, 2)).unwrap();
        assert_eq!((p.ell, p.block_size, p.a_size), (8, 1, 2));
        assert_eq!(p.member_count(), BigUint::from(28u32));
    }
}
