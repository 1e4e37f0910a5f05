use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rpp_core::group::{Elem, GroupSpec, Subgroup, Tuple};
use rpp_core::perm::{coset_prefix_count, embed, embed_tuple, schreier_sims, Permutation, SubgroupChain};
use serde_json::json;

use super::oracle::{encode, enumerate_codes};
use super::{item_rng, Check, Profile};

fn factorial(m: usize) -> BigUint {
    (1..=m as u64).map(BigUint::from).product()
}

fn symmetric_orders() -> Check {
    let mut bad = Vec::new();
    for m in 1..=7usize {
        let mut gens = Vec::new();
        if m >= 2 {
            gens.push(Permutation::from_cycles(m, &[&[0, 1]]).expect("valid"));
            let cycle: Vec<usize> = (0..m).collect();
            gens.push(Permutation::from_cycles(m, &[&cycle]).expect("valid"));
        }
        let order = schreier_sims(m, &gens, None).map(|g| g.order());
        if order.as_ref().ok() != Some(&factorial(m)) {
            bad.push(json!({ "m": m, "order": order.map(|o| o.to_string()).unwrap_or_else(|e| e.to_string()) }));
        }
    }
    Check::new("symmetric_group_orders", bad.is_empty(), json!({ "degrees": "1..=7", "failures": bad }))
}

fn test_groups() -> Vec<(&'static str, GroupSpec)> {
    vec![
        ("Z2", GroupSpec::cyclic(2).unwrap()),
        ("Z4", GroupSpec::cyclic(4).unwrap()),
        ("S3", GroupSpec::symmetric(3).unwrap()),
    ]
}

fn embedded_orders() -> Check {
    let mut bad = Vec::new();
    for (name, group) in test_groups() {
        for n in 1..=5 {
            let full = Subgroup::full(&group, n);
            let order = schreier_sims(group.order() * n, &embed(&group, &full), None).map(|g| g.order());
            if order.as_ref().ok() != Some(&group.power_order(n)) {
                bad.push(json!({ "group": name, "n": n }));
            }
        }
    }
    Check::new("embedded_power_orders", bad.is_empty(), json!({ "n": "1..=5", "failures": bad }))
}

fn random_subgroup(group: &GroupSpec, n: usize, rng: &mut ChaCha8Rng) -> Subgroup {
    let k = rng.gen_range(0..=2);
    let gens = (0..k)
        .map(|_| {
            Tuple::new(
                (0..n)
                    .map(|_| if rng.gen_bool(0.3) { group.identity() } else { rng.gen_range(0..group.order()) as Elem })
                    .collect(),
            )
        })
        .collect();
    Subgroup::new(n, gens)
}

fn membership(rng: &mut ChaCha8Rng, per_case: usize) -> Check {
    let mut points = 0u64;
    let mut bad = Vec::new();
    for (name, group) in test_groups() {
        let m = group.order() as u64;
        for n in 1..=4 {
            let all = group.all_tuples(n, 1 << 12).expect("small");
            for _ in 0..per_case {
                let h = random_subgroup(&group, n, rng);
                let (codes, _) = enumerate_codes(&group, n, &h.generators);
                let pg = schreier_sims(group.order() * n, &embed(&group, &h), None).expect("valid");
                for x in &all {
                    points += 1;
                    let member = pg.member(&embed_tuple(&group, x)).unwrap_or(false);
                    if member != codes.contains(&encode(m, x.coords())) {
                        bad.push(json!({ "group": name, "n": n, "x": x.coords() }));
                    }
                }
            }
        }
    }
    bad.truncate(10);
    Check::new("member_matches_enumeration", bad.is_empty(), json!({ "points": points, "failures": bad }))
}

fn prefix_counts(rng: &mut ChaCha8Rng, subgroups: usize) -> Check {
    let groups = [
        ("Z2", GroupSpec::cyclic(2).unwrap()),
        ("Z3", GroupSpec::cyclic(3).unwrap()),
        ("Z4", GroupSpec::cyclic(4).unwrap()),
        ("S3", GroupSpec::symmetric(3).unwrap()),
    ];
    let mut prefixes = 0u64;
    let mut bad = Vec::new();
    for i in 0..subgroups {
        let (name, group) = &groups[i % groups.len()];
        let n = rng.gen_range(1..=4);
        let h = random_subgroup(group, n, rng);
        let (_, elems) = enumerate_codes(group, n, &h.generators);
        let chain = SubgroupChain::new(group, &h).expect("valid");
        for len in 0..=n {
            let mut total = BigUint::from(0u32);
            for y in group.all_tuples(len, 1 << 12).expect("small") {
                prefixes += 1;
                let brute = elems.iter().filter(|e| e[..len] == *y.coords()).count();
                let count = chain.prefix_count(y.coords());
                if count != BigUint::from(brute) {
                    bad.push(json!({ "group": name, "n": n, "prefix": y.coords() }));
                }
                total += count;
            }
            if total != BigUint::from(elems.len()) {
                bad.push(json!({ "group": name, "n": n, "length": len, "sum": total.to_string() }));
            }
            if len >= 1 {
                let y = elems[rng.gen_range(0..elems.len())][..len].to_vec();
                let direct = coset_prefix_count(group, &h, &Tuple::new(y.clone()));
                let brute = elems.iter().filter(|e| e[..len] == y[..]).count();
                if direct.ok() != Some(BigUint::from(brute)) {
                    bad.push(json!({ "group": name, "n": n, "prefix": y }));
                }
            }
        }
    }
    bad.truncate(10);
    Check::new(
        "coset_prefix_count_matches_brute_force",
        bad.is_empty(),
        json!({ "subgroups": subgroups, "prefixes": prefixes, "failures": bad }),
    )
}

pub fn schreier_sims_checks(profile: Profile, seed: u64) -> Vec<Check> {
    let mut rng = item_rng(seed, 6);
    vec![
        symmetric_orders(),
        embedded_orders(),
        membership(&mut rng, profile.pick(1, 3)),
        prefix_counts(&mut rng, profile.pick(30, 100)),
    ]
}
