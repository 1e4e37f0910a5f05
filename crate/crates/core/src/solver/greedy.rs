//! Conditional probabilities with the estimator
//! `Φ(y) = Σ_A |{h ∈ H_A : h agrees with y on its prefix}| / |G|^{n-|y|}`.
//!
//! `Φ(y)` is the expected number of members containing a uniform completion
//! of `y`; averaging over the next coordinate preserves it, so the minimizing
//! extension never increases it. At full length `Φ` is an integer count, and
//! `Φ < 1` forces it to be zero.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::cover::CoverFamily;
use crate::error::{Error, Result};
use crate::group::{Elem, GroupSpec, Tuple};
use crate::perm::{PrefixState, SubgroupChain};

/// `num / |G|^exp` as an exact rational.
pub fn phi_value(num: &BigUint, group_order: usize, exp: usize) -> BigRational {
    BigRational::new(
        BigInt::from(num.clone()),
        BigInt::from(BigUint::from(group_order).pow(exp as u32)),
    )
}

/// `Σ_A |H_A|`, the numerator of `Φ₀`.
pub fn initial_numerator(chains: &[SubgroupChain]) -> BigUint {
    chains.iter().map(SubgroupChain::order).sum()
}

fn numerator(chains: &[SubgroupChain], states: &[Option<PrefixState>]) -> BigUint {
    chains
        .iter()
        .zip(states)
        .filter_map(|(c, s)| s.as_ref().map(|s| c.count_for(s).clone()))
        .sum()
}

/// Build `x` coordinate by coordinate. Returns `x` and `Φ_0, ..., Φ_n`.
pub fn greedy_conditional(group: &GroupSpec, cover: &CoverFamily) -> Result<(Tuple, Vec<BigRational>)> {
    let chains = cover.chains(group)?;
    greedy_with_chains(group, &chains)
}

pub fn greedy_with_chains(group: &GroupSpec, chains: &[SubgroupChain]) -> Result<(Tuple, Vec<BigRational>)> {
    let n = chains
        .first()
        .map(SubgroupChain::n)
        .ok_or_else(|| Error::Parameter("empty cover".into()))?;
    let m = group.order();
    let num0 = initial_numerator(chains);
    let phi0 = phi_value(&num0, m, n);
    if phi0 >= BigRational::one() {
        return Err(Error::EstimatorStuck { phi0: phi0.to_string() });
    }
    let mut states: Vec<Option<PrefixState>> = chains.iter().map(|c| Some(c.start())).collect();
    let mut trace = vec![phi0];
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        // Numerators over |G|^{n-i-1} for every choice of the next coordinate.
        let candidates: Vec<(BigUint, Vec<Option<PrefixState>>)> = (0..m)
            .into_par_iter()
            .map(|g| {
                let next: Vec<Option<PrefixState>> = chains
                    .iter()
                    .zip(&states)
                    .map(|(c, s)| s.as_ref().and_then(|s| c.extend(s, g as Elem)))
                    .collect();
                (numerator(chains, &next), next)
            })
            .collect();
        let (best, _) = candidates
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .0.cmp(&b.1 .0).then(a.0.cmp(&b.0)))
            .expect("group is nonempty");
        let (num, next) = candidates.into_iter().nth(best).expect("index in range");
        states = next;
        x.push(best as Elem);
        trace.push(phi_value(&num, m, n - i - 1));
    }
    let last = trace.last().expect("nonempty");
    if !last.is_zero() {
        return Err(Error::VerificationFailed(format!("final estimator {last} is not zero")));
    }
    Ok((Tuple::new(x), trace))
}

/// Recompute `Φ` along the prefixes of `x`.
pub fn estimator_along(group: &GroupSpec, chains: &[SubgroupChain], x: &Tuple) -> Vec<BigRational> {
    let m = group.order();
    let n = x.len();
    let mut states: Vec<Option<PrefixState>> = chains.iter().map(|c| Some(c.start())).collect();
    let mut trace = vec![phi_value(&numerator(chains, &states), m, n)];
    for (i, &g) in x.coords().iter().enumerate() {
        states = chains
            .iter()
            .zip(&states)
            .map(|(c, s)| s.as_ref().and_then(|s| c.extend(s, g)))
            .collect();
        trace.push(phi_value(&numerator(chains, &states), m, n - i - 1));
    }
    trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Subgroup, DEFAULT_CAP};
    use crate::solver::cover::{build_cover, CoverParams};

    fn t(v: &[u8]) -> Tuple {
        Tuple::new(v.to_vec())
    }

    #[test]
    fn hand_trace() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let h = Subgroup::new(2, vec![t(&[1, 1])]);
        let cover = build_cover(&z2, &h, 0, &CoverParams::for_radius(2, 0)).unwrap();
        let (x, trace) = greedy_conditional(&z2, &cover).unwrap();
        assert_eq!(x, t(&[0, 1]));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(trace, vec![half.clone(), half, BigRational::zero()]);
    }

    #[test]
    fn full_member_is_stuck() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let chains = vec![SubgroupChain::new(&z2, &Subgroup::full(&z2, 3)).unwrap()];
        assert!(matches!(greedy_with_chains(&z2, &chains), Err(Error::EstimatorStuck { .. })));
    }

    #[test]
    fn nonabelian_diagonal() {
        let s3 = GroupSpec::symmetric(3).unwrap();
        let gens: Vec<Tuple> = s3.generators().into_iter().map(|g| t(&[g; 4])).collect();
        let h = Subgroup::new(4, gens);
        assert_eq!(h.order(&s3).unwrap(), BigUint::from(6u32));
        let cover = build_cover(&s3, &h, 1, &CoverParams::for_radius(4, 1)).unwrap();
        let (x, trace) = greedy_conditional(&s3, &cover).unwrap();
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
        for m in &cover.members {
            assert!(!m.subgroup.enumerate(&s3, DEFAULT_CAP).unwrap().contains(&x));
        }
        let chains = cover.chains(&s3).unwrap();
        assert_eq!(estimator_along(&s3, &chains, &x), trace);
    }

    #[test]
    fn martingale_property() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        let h = Subgroup::new(5, vec![t(&[1, 2, 0, 0, 1])]);
        let cover = build_cover(&z3, &h, 1, &CoverParams::for_radius(5, 1)).unwrap();
        let chains = cover.chains(&z3).unwrap();
        let prefix = [2u8, 0];
        let state_of = |p: &[u8]| -> Vec<Option<PrefixState>> { chains.iter().map(|c| c.state_for(p)).collect() };
        let here = numerator(&chains, &state_of(&prefix));
        let sum: BigUint = (0..3u8)
            .map(|g| numerator(&chains, &state_of(&[prefix[0], prefix[1], g])))
            .sum();
        assert_eq!(sum, here);
    }
}
