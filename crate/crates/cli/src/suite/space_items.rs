use num_rational::Ratio;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rpp_core::cayley::{lambda_by_characters, lambda_numeric, CayleyGraph};
use rpp_core::group::{Elem, GroupSpec, Tuple};
use rpp_core::smallbias::field::next_prime;
use rpp_core::smallbias::{
    construct_for_group, construct_prime_field, lift_map, measure_bias, measure_bias_direct, quotient_lift as lift_space, symmetrize,
    BiasedSpace, BIAS_TOLERANCE,
};
use serde_json::json;

use super::{error_check, item_rng, Check, Profile};

fn random_tuple(group: &GroupSpec, n: usize, rng: &mut ChaCha8Rng) -> Tuple {
    Tuple::new((0..n).map(|_| rng.gen_range(0..group.order()) as Elem).collect())
}

fn random_symmetric(group: &GroupSpec, n: usize, rng: &mut ChaCha8Rng) -> BiasedSpace {
    let size = rng.gen_range(1..=12);
    let items: Vec<Tuple> = (0..size).map(|_| random_tuple(group, n, rng)).collect();
    symmetrize(&BiasedSpace::from_multiset(group, n, items).expect("valid tuples"))
}

fn group_label(group: &GroupSpec) -> String {
    match group.invariant_factors() {
        Some(f) => f.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join("+"),
        None => format!("table{}", group.order()),
    }
}

/// λ from a dense eigensolve agrees with the character-sum bias.
pub fn bias_matches_lambda(profile: Profile, seed: u64) -> Vec<Check> {
    let mut rng = item_rng(seed, 1);
    let per_group = profile.pick(20, 50);
    let cases = [
        (GroupSpec::cyclic(2).unwrap(), 4),
        (GroupSpec::cyclic(3).unwrap(), 3),
        (GroupSpec::abelian(&[2, 4]).unwrap(), 2),
    ];
    let mut checks = Vec::new();
    for (group, n) in cases {
        let mut numeric_diff: f64 = 0.0;
        let mut direct_diff: f64 = 0.0;
        let mut char_exact = true;
        for _ in 0..per_group {
            let space = random_symmetric(&group, n, &mut rng);
            let bias = measure_bias(&space).expect("sweepable");
            let direct = measure_bias_direct(&space).expect("sweepable");
            let graph = CayleyGraph::new(space).expect("symmetric");
            let numeric = lambda_numeric(&graph).expect("small").lambda;
            let chars = lambda_by_characters(&graph).expect("abelian").lambda;
            numeric_diff = numeric_diff.max((numeric - bias.min(1.0)).abs());
            direct_diff = direct_diff.max((direct - bias).abs());
            char_exact &= chars == bias.clamp(0.0, 1.0);
        }
        let label = format!("{}^{n}", group_label(&group));
        checks.push(Check::new(
            format!("numeric_lambda_{label}"),
            numeric_diff <= 1e-6,
            json!({ "multisets": per_group, "max_abs_diff": numeric_diff, "tolerance": 1e-6 }),
        ));
        checks.push(Check::new(
            format!("character_lambda_{label}"),
            char_exact && direct_diff <= BIAS_TOLERANCE,
            json!({ "multisets": per_group, "identical": char_exact, "direct_sum_max_abs_diff": direct_diff }),
        ));
    }
    if profile == Profile::Full {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let check = construct_for_group(&z2, 12, Ratio::new(1, 4))
            .and_then(CayleyGraph::new)
            .and_then(|g| Ok((lambda_numeric(&g)?.lambda, lambda_by_characters(&g)?.lambda)));
        checks.push(match check {
            Ok((numeric, chars)) => Check::new(
                "numeric_lambda_Z2^12_constructed",
                (numeric - chars).abs() <= 1e-6,
                json!({ "vertices": 4096, "numeric": numeric, "character": chars }),
            ),
            Err(e) => error_check("numeric_lambda_Z2^12_constructed", e),
        });
    }
    checks
}

/// `2·q*²` with `q*` the smallest prime `≥ (n−1)/ε`.
fn prime_size_bound(n: usize, eps: Ratio<u64>) -> u64 {
    let target = Ratio::from_integer(n as u64 - 1) / eps;
    let q = next_prime(target.ceil().to_integer());
    2 * q * q
}

/// Constructed spaces reach their target bias on the whole grid; prime-order
/// groups also stay within the size bound.
pub fn construction_quality(profile: Profile) -> Vec<Check> {
    let max_n = profile.pick(4, 6);
    let groups = [
        GroupSpec::cyclic(2).unwrap(),
        GroupSpec::cyclic(3).unwrap(),
        GroupSpec::cyclic(5).unwrap(),
        GroupSpec::abelian(&[2, 4]).unwrap(),
    ];
    let epsilons = [Ratio::new(1u64, 2), Ratio::new(1, 4), Ratio::new(1, 8)];
    let mut instances = 0;
    let mut bias_fail = Vec::new();
    let mut size_fail = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    let mut prime_instances = 0;
    for group in &groups {
        for n in 1..=max_n {
            for &eps in &epsilons {
                instances += 1;
                let label = json!({ "group": group_label(group), "n": n, "eps": eps.to_string() });
                let space = match construct_for_group(group, n, eps) {
                    Ok(s) => s,
                    Err(e) => {
                        bias_fail.push(json!({ "instance": label, "error": e.to_string() }));
                        continue;
                    }
                };
                let bias = measure_bias(&space).unwrap_or(f64::INFINITY);
                let target = *eps.numer() as f64 / *eps.denom() as f64;
                worst_ratio = worst_ratio.max(bias / target);
                if bias > target + BIAS_TOLERANCE || !space.is_symmetric() {
                    bias_fail.push(json!({ "instance": label, "bias": bias }));
                }
                if group.order() == 2 || group.order() == 3 || group.order() == 5 {
                    prime_instances += 1;
                    let bound = prime_size_bound(n, eps);
                    if space.size() > bound {
                        size_fail.push(json!({ "instance": label, "size": space.size(), "bound": bound }));
                    }
                }
            }
        }
    }
    vec![
        Check::new(
            "bias_at_most_target",
            bias_fail.is_empty(),
            json!({ "instances": instances, "worst_bias_over_target": worst_ratio, "failures": bias_fail }),
        ),
        Check::new(
            "prime_size_within_2q2",
            size_fail.is_empty(),
            json!({ "instances": prime_instances, "failures": size_fail }),
        ),
    ]
}

/// The geometric-progression space over `Z_q` has bias exactly `(n−1)/q`.
pub fn prime_field_exact() -> Vec<Check> {
    let mut worst: f64 = 0.0;
    let mut worst_direct: f64 = 0.0;
    let mut cases = 0;
    let mut errors = Vec::new();
    for q in [3u32, 5, 7] {
        for n in 2..=q as usize {
            cases += 1;
            match construct_prime_field(q, n) {
                Ok(space) => {
                    let expect = (n - 1) as f64 / q as f64;
                    let bias = measure_bias(&space).unwrap_or(f64::INFINITY);
                    let direct = measure_bias_direct(&space).unwrap_or(f64::INFINITY);
                    worst = worst.max((bias - expect).abs());
                    worst_direct = worst_direct.max((direct - expect).abs());
                }
                Err(e) => errors.push(json!({ "q": q, "n": n, "error": e.to_string() })),
            }
        }
    }
    vec![Check::new(
        "bias_equals_(n-1)/q",
        errors.is_empty() && worst <= 1e-12 && worst_direct <= 1e-12,
        json!({ "cases": cases, "max_abs_diff": worst, "direct_sum_max_abs_diff": worst_direct, "tolerance": 1e-12, "errors": errors }),
    )]
}

/// Projecting `Z_{d_k}^k` onto `G` never raises the bias.
pub fn quotient_lift(profile: Profile, seed: u64) -> Vec<Check> {
    let mut rng = item_rng(seed, 4);
    let trials = profile.pick(5, 20);
    let cases = [
        (GroupSpec::abelian(&[2, 4]).unwrap(), vec![1usize, 2, 3]),
        (GroupSpec::abelian(&[2, 2, 6]).unwrap(), vec![1, 2]),
    ];
    let mut checks = Vec::new();
    for (group, ns) in cases {
        let (base, _) = lift_map(&group).expect("abelian");
        let mut violations = Vec::new();
        let mut runs = 0;
        for &n in &ns {
            for _ in 0..trials {
                runs += 1;
                let size = rng.gen_range(1..=24);
                let items: Vec<Tuple> = (0..size).map(|_| random_tuple(&base, n, &mut rng)).collect();
                let s0 = BiasedSpace::from_multiset(&base, n, items).expect("valid");
                let lifted = lift_space(&s0, &group).expect("matching base");
                let (b0, b1) = (measure_bias(&s0).unwrap(), measure_bias(&lifted).unwrap());
                if b1 > b0 + BIAS_TOLERANCE {
                    violations.push(json!({ "n": n, "source_bias": b0, "image_bias": b1 }));
                }
            }
        }
        checks.push(Check::new(
            format!("lift_does_not_increase_bias_{}", group_label(&group)),
            violations.is_empty(),
            json!({ "samples": runs, "n_values": ns, "violations": violations }),
        ));
    }
    checks
}
