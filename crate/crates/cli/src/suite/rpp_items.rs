use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rpp_core::group::{Elem, GroupSpec, Subgroup, Tuple};
use rpp_core::perm::SubgroupChain;
use rpp_core::solver::cover::{build_cover, CoverParams};
use rpp_core::solver::{
    block_partition, block_radius, initial_estimator, solve_general_k, solve_half_dim, verify_solution, Certificate,
    Mode, RppInstance, SolveOptions,
};
use rustc_hash::FxHashSet;
use serde_json::{json, Value};

use super::oracle::{distance, enumerate_codes, for_each_ball_point};
use super::{item_rng, Check, Profile};

/// Largest subgroup order used by the cover instances.
pub const COVER_ORDER_CAP: u64 = 1 << 12;

/// Cap on `Σ_A |H|·|K_A|` above which paired blocks fall back to singletons.
const UNION_WORK_CAP: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct CoverInstance {
    pub group_name: &'static str,
    pub group: GroupSpec,
    pub h: Subgroup,
    pub order: u64,
    pub r: usize,
    pub params: CoverParams,
}

impl CoverInstance {
    pub fn n(&self) -> usize {
        self.h.n
    }

    pub fn rpp(&self, mode: Mode) -> RppInstance {
        RppInstance::new(self.group.clone(), &self.h, self.r, mode)
    }

    fn label(&self) -> Value {
        json!({ "group": self.group_name, "n": self.n(), "r": self.r, "order": self.order })
    }
}

fn random_generator(group: &GroupSpec, n: usize, rng: &mut ChaCha8Rng) -> Tuple {
    Tuple::new(
        (0..n)
            .map(|_| if rng.gen_bool(0.3) { group.identity() } else { rng.gen_range(0..group.order()) as Elem })
            .collect(),
    )
}

fn random_half_dim_subgroup(group: &GroupSpec, n: usize, rng: &mut ChaCha8Rng) -> (Subgroup, u64) {
    let limit = group.power_order(n);
    loop {
        let k = rng.gen_range(1..=4);
        let h = Subgroup::new(n, (0..k).map(|_| random_generator(group, n, rng)).collect());
        let order = SubgroupChain::new(group, &h).expect("valid generators").order();
        if &order * &order <= limit && order <= BigUint::from(COVER_ORDER_CAP) {
            return (h, order.to_u64().expect("capped"));
        }
    }
}

/// The shared instances of the cover, greedy and hitting items: `per_group`
/// random subgroups of `G^n` for `G ∈ {Z2, Z3, S3}` with `n` cycling through
/// `8..=14` and `r` alternating between 1 and 2. Every third instance uses
/// blocks of two coordinates when that keeps the union small enough to
/// enumerate.
pub fn cover_instances(profile: Profile, seed: u64) -> Vec<CoverInstance> {
    let mut rng = item_rng(seed, 5);
    let per_group = profile.pick(8, 25);
    let groups = [
        ("Z2", GroupSpec::cyclic(2).unwrap()),
        ("Z3", GroupSpec::cyclic(3).unwrap()),
        ("S3", GroupSpec::symmetric(3).unwrap()),
    ];
    let mut out = Vec::new();
    for (name, group) in groups {
        for i in 0..per_group {
            let n = 8 + i % 7;
            let r = 1 + i % 2;
            let (h, order) = random_half_dim_subgroup(&group, n, &mut rng);
            let mut params = CoverParams::for_radius(n, r);
            if i % 3 == 2 {
                let paired = CoverParams::with_blocks(n, 2, r).expect("enough blocks");
                let k_size = (group.order() as u64).pow(2 * r as u32);
                let work = paired.member_count().to_u64().unwrap_or(u64::MAX).saturating_mul(order * k_size);
                if work <= UNION_WORK_CAP {
                    params = paired;
                }
            }
            out.push(CoverInstance {
                group_name: name,
                group: group.clone(),
                h,
                order,
                r,
                params,
            });
        }
    }
    out
}

#[derive(Default)]
struct Tally {
    instances: usize,
    points: u64,
    failures: Vec<Value>,
}

impl Tally {
    fn fail(&mut self, v: Value) {
        if self.failures.len() < 10 {
            self.failures.push(v);
        }
    }
}

/// `B(H, r)` lies in the union of the cover members, and each member has
/// order at most `|H|·|K_A|`.
pub fn cover_soundness(profile: Profile, seed: u64) -> Vec<Check> {
    let instances = cover_instances(profile, seed);
    let mut checks = Vec::new();
    for name in ["Z2", "Z3", "S3"] {
        let mut ball = Tally::default();
        let mut orders = Tally::default();
        let mut paired = 0;
        let mut max_order = 0;
        for inst in instances.iter().filter(|i| i.group_name == name) {
            ball.instances += 1;
            orders.instances += 1;
            max_order = max_order.max(inst.order);
            paired += usize::from(inst.params.block_size > 1);
            let group = &inst.group;
            let n = inst.n();
            let m = group.order() as u64;
            let cover = match build_cover(group, &inst.h, inst.r, &inst.params) {
                Ok(c) => c,
                Err(e) => {
                    ball.fail(json!({ "instance": inst.label(), "error": e.to_string() }));
                    continue;
                }
            };
            let mut union = FxHashSet::default();
            for member in &cover.members {
                let (codes, _) = enumerate_codes(group, n, &member.subgroup.generators);
                let k_order = m.pow(cover.coordinates(member).len() as u32);
                orders.points += 1;
                if codes.len() as u64 > inst.order * k_order {
                    orders.fail(json!({ "instance": inst.label(), "member": member.a, "order": codes.len() }));
                }
                union.extend(codes);
            }
            let (_, elems) = enumerate_codes(group, n, &inst.h.generators);
            let mut missing = None;
            let mut points = 0u64;
            for_each_ball_point(m, &elems, inst.r, &mut |code| {
                points += 1;
                if union.contains(&code) {
                    true
                } else {
                    missing = Some(code);
                    false
                }
            });
            ball.points += points;
            if let Some(code) = missing {
                ball.fail(json!({ "instance": inst.label(), "uncovered_code": code }));
            }
        }
        checks.push(Check::new(
            format!("ball_inside_union_{name}"),
            ball.failures.is_empty(),
            json!({
                "instances": ball.instances,
                "paired_block_instances": paired,
                "max_subgroup_order": max_order,
                "ball_points_checked": ball.points,
                "failures": ball.failures,
            }),
        ));
        checks.push(Check::new(
            format!("member_order_bound_{name}"),
            orders.failures.is_empty(),
            json!({ "members": orders.points, "failures": orders.failures }),
        ));
    }
    checks
}

fn parse_phi(cert: &Certificate) -> Option<Vec<BigRational>> {
    match cert {
        Certificate::Greedy { phi, .. } => phi.iter().map(|s| s.parse().ok()).collect(),
        _ => None,
    }
}

/// Greedy runs on every cover instance whose estimator starts below one.
pub fn greedy_solver(profile: Profile, seed: u64) -> Vec<Check> {
    let instances = cover_instances(profile, seed);
    let mut tally = Tally::default();
    let mut skipped = 0;
    let mut min_margin: Option<usize> = None;
    for inst in &instances {
        let rpp = inst.rpp(Mode::GeneralGreedy);
        let phi0 = match initial_estimator(&inst.group, &rpp, &inst.params) {
            Ok(v) => v,
            Err(e) => {
                tally.fail(json!({ "instance": inst.label(), "error": e.to_string() }));
                continue;
            }
        };
        if phi0 >= BigRational::one() {
            skipped += 1;
            continue;
        }
        tally.instances += 1;
        let opts = SolveOptions {
            cover: Some(inst.params.clone()),
            ..SolveOptions::default()
        };
        let sol = match solve_half_dim(&rpp, &opts) {
            Ok(s) => s,
            Err(e) => {
                tally.fail(json!({ "instance": inst.label(), "error": e.to_string() }));
                continue;
            }
        };
        let Some(phi) = parse_phi(&sol.certificate) else {
            tally.fail(json!({ "instance": inst.label(), "error": "missing estimator trace" }));
            continue;
        };
        let monotone = phi.windows(2).all(|w| w[1] <= w[0]);
        let below_one = phi.last().is_some_and(|v| *v < BigRational::one());
        let (_, elems) = enumerate_codes(&inst.group, inst.n(), &inst.h.generators);
        let d = distance(sol.x.coords(), &elems);
        let verified = verify_solution(&rpp, &sol, COVER_ORDER_CAP as usize);
        if !monotone || !below_one || d <= inst.r || verified.is_err() {
            tally.fail(json!({
                "instance": inst.label(),
                "monotone": monotone,
                "final_below_one": below_one,
                "distance": d,
                "verify": verified.err().map(|e| e.to_string()),
            }));
        }
        min_margin = Some(min_margin.map_or(d - inst.r.min(d), |m| m.min(d - inst.r.min(d))));
    }
    vec![Check::new(
        "greedy_trace_and_distance",
        tally.failures.is_empty() && tally.instances > 0,
        json!({
            "eligible": tally.instances,
            "skipped_phi0_at_least_one": skipped,
            "min_distance_minus_r": min_margin,
            "failures": tally.failures,
        }),
    )]
}

/// Hitting mode on the abelian cover instances with `α = 1/(2m)`.
pub fn hitting_solver(profile: Profile, seed: u64) -> Vec<Check> {
    let instances = cover_instances(profile, seed);
    let mut tally = Tally::default();
    let mut certified = 0;
    for inst in instances.iter().filter(|i| i.group.is_abelian_kind()) {
        tally.instances += 1;
        let rpp = inst.rpp(Mode::AbelianHitting);
        let opts = SolveOptions {
            cover: Some(inst.params.clone()),
            ..SolveOptions::default()
        };
        let sol = match solve_half_dim(&rpp, &opts) {
            Ok(s) => s,
            Err(e) => {
                tally.fail(json!({ "instance": inst.label(), "error": e.to_string() }));
                continue;
            }
        };
        if let Certificate::Hitting { bound, .. } = &sol.certificate {
            if bound.parse::<BigRational>().is_ok_and(|b| b < BigRational::one()) {
                certified += 1;
            }
        }
        let (_, elems) = enumerate_codes(&inst.group, inst.n(), &inst.h.generators);
        let d = distance(sol.x.coords(), &elems);
        let verified = verify_solution(&rpp, &sol, COVER_ORDER_CAP as usize);
        if d <= inst.r || verified.is_err() {
            tally.fail(json!({
                "instance": inst.label(),
                "distance": d,
                "verify": verified.err().map(|e| e.to_string()),
            }));
        }
    }
    vec![Check::new(
        "hit_found_and_verified",
        tally.failures.is_empty() && tally.instances > 0,
        json!({
            "instances": tally.instances,
            "bound_below_one": certified,
            "failures": tally.failures,
        }),
    )]
}

fn random_dimension_k(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Subgroup {
    let z2 = GroupSpec::cyclic(2).unwrap();
    loop {
        let gens: Vec<Tuple> = (0..k)
            .map(|_| Tuple::new((0..n).map(|_| rng.gen_range(0..2)).collect()))
            .collect();
        let h = Subgroup::new(n, gens);
        if SubgroupChain::new(&z2, &h).expect("valid").order() == BigUint::from(1u64 << k) {
            return h;
        }
    }
}

/// Block reduction over `Z2` reaches distance `blocks · r_block`.
pub fn block_reduction(profile: Profile, seed: u64) -> Vec<Check> {
    let mut rng = item_rng(seed, 9);
    let per_case = profile.pick(2, 5);
    let c = Ratio::new(1u64, 4);
    let z2 = GroupSpec::cyclic(2).unwrap();
    let mut tally = Tally::default();
    let mut cases = Vec::new();
    for n in [8usize, 12, 16] {
        for k in 1..=3usize {
            let blocks = block_partition(n, k).map(|b| b.len()).unwrap_or(0);
            let r_block = block_radius(k, c);
            let target = blocks * r_block;
            let mut min_distance = usize::MAX;
            for _ in 0..per_case {
                tally.instances += 1;
                let h = random_dimension_k(n, k, &mut rng);
                let rpp = RppInstance::new(z2.clone(), &h, target - 1, Mode::Auto);
                let label = json!({ "n": n, "k": k, "generators": h.generators });
                let sol = match solve_general_k(&rpp, c) {
                    Ok(s) => s,
                    Err(e) => {
                        tally.fail(json!({ "instance": label, "error": e.to_string() }));
                        continue;
                    }
                };
                let (_, elems) = enumerate_codes(&z2, n, &h.generators);
                let d = distance(sol.x.coords(), &elems);
                min_distance = min_distance.min(d);
                let verified = verify_solution(&rpp, &sol, 1 << 16);
                if d < target || verified.is_err() {
                    tally.fail(json!({
                        "instance": label,
                        "distance": d,
                        "target": target,
                        "verify": verified.err().map(|e| e.to_string()),
                    }));
                }
            }
            cases.push(json!({
                "n": n,
                "k": k,
                "blocks": blocks,
                "r_block": r_block,
                "min_distance": (min_distance != usize::MAX).then_some(min_distance),
            }));
        }
    }
    vec![Check::new(
        "distance_at_least_blocks_times_r_block",
        tally.failures.is_empty(),
        json!({ "instances": tally.instances, "cases": cases, "failures": tally.failures }),
    )]
}
