use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rpp_core::cayley::{confinement_exact, confinement_monte_carlo, lambda, CayleyGraph};
use rpp_core::group::{Elem, GroupSpec, Tuple};
use rpp_core::smallbias::{construct_for_group, symmetrize, BiasedSpace};
use rustc_hash::FxHashSet;
use serde_json::json;

use super::{item_rng, Check, Profile};

const MAX_T: usize = 32;

/// `G^n` with `|G|^n ≤ 64` as a multiplication table on tuple indices.
struct VertexGroup {
    label: String,
    group: GroupSpec,
    n: usize,
    size: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
}

impl VertexGroup {
    fn new(label: &str, group: GroupSpec, n: usize) -> Self {
        let size = group.order().pow(n as u32);
        let tuples: Vec<Tuple> = (0..size).map(|i| group.tuple_from_index(i as u128, n)).collect();
        let mul = tuples
            .iter()
            .map(|a| {
                tuples
                    .iter()
                    .map(|b| group.tuple_index(&group.mul_unchecked(a, b)) as usize)
                    .collect()
            })
            .collect();
        let identity = group.tuple_index(&group.identity_tuple(n)) as usize;
        Self {
            label: format!("{label}^{n}"),
            group,
            n,
            size,
            mul,
            identity,
        }
    }

    fn closure(&self, gens: &[usize]) -> u64 {
        let mut mask = 1u64 << self.identity;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul[x][g];
                if mask & (1 << y) == 0 {
                    mask |= 1 << y;
                    stack.push(y);
                }
            }
        }
        mask
    }

    /// Every subgroup, as a bit mask over vertex indices.
    fn subgroups(&self) -> Vec<u64> {
        let mut seen = FxHashSet::default();
        let trivial = 1u64 << self.identity;
        seen.insert(trivial);
        let mut out = vec![(trivial, Vec::new())];
        let mut head = 0;
        while head < out.len() {
            let (mask, gens) = out[head].clone();
            head += 1;
            for g in 0..self.size {
                if mask & (1 << g) != 0 {
                    continue;
                }
                let mut next = gens.clone();
                next.push(g);
                let m = self.closure(&next);
                if seen.insert(m) {
                    out.push((m, next));
                }
            }
        }
        let mut masks: Vec<u64> = out.into_iter().map(|(m, _)| m).collect();
        masks.sort_unstable();
        masks
    }

    /// Left cosets `xK` of a subgroup mask.
    fn cosets(&self, k: u64) -> Vec<u64> {
        let members: Vec<usize> = (0..self.size).filter(|&i| k & (1 << i) != 0).collect();
        let mut covered = 0u64;
        let mut out = Vec::new();
        for x in 0..self.size {
            if covered & (1 << x) != 0 {
                continue;
            }
            let coset = members.iter().fold(0u64, |acc, &h| acc | 1 << self.mul[x][h]);
            covered |= coset;
            out.push(coset);
        }
        out
    }
}

/// `P[v_0..v_t ∈ B]` for `t = 0..=MAX_T` from a uniform start.
fn confinement_profile(vg: &VertexGroup, steps: &[(usize, f64)], inside: u64) -> Vec<f64> {
    let mut mass: Vec<f64> = (0..vg.size)
        .map(|i| if inside & (1 << i) != 0 { 1.0 / vg.size as f64 } else { 0.0 })
        .collect();
    let mut out = vec![mass.iter().sum()];
    for _ in 0..MAX_T {
        let mut next = vec![0.0; vg.size];
        for (x, &m) in mass.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for &(s, p) in steps {
                let y = vg.mul[x][s];
                if inside & (1 << y) != 0 {
                    next[y] += m * p;
                }
            }
        }
        mass = next;
        out.push(mass.iter().sum());
    }
    out
}

fn vertex_groups(profile: Profile) -> Vec<VertexGroup> {
    let max_size = profile.pick(32, 64);
    let families = [
        ("Z2", GroupSpec::cyclic(2).unwrap()),
        ("Z3", GroupSpec::cyclic(3).unwrap()),
        ("Z4", GroupSpec::cyclic(4).unwrap()),
        ("Z5", GroupSpec::cyclic(5).unwrap()),
        ("Z7", GroupSpec::cyclic(7).unwrap()),
        ("Z2+Z4", GroupSpec::abelian(&[2, 4]).unwrap()),
        ("S3", GroupSpec::symmetric(3).unwrap()),
    ];
    let mut out = Vec::new();
    for (label, group) in families {
        let mut n = 1;
        while group.order().pow(n as u32) <= max_size {
            out.push(VertexGroup::new(label, group.clone(), n));
            n += 1;
        }
    }
    out
}

fn spaces(vg: &VertexGroup, profile: Profile, rng: &mut ChaCha8Rng) -> Vec<(String, BiasedSpace)> {
    let mut out = Vec::new();
    if vg.group.is_abelian_kind() {
        for eps in profile.pick(vec![Ratio::new(1u64, 2)], vec![Ratio::new(1, 2), Ratio::new(1, 4)]) {
            if let Ok(s) = construct_for_group(&vg.group, vg.n, eps) {
                out.push((format!("constructed_eps_{eps}"), s));
            }
        }
    }
    for i in 0..profile.pick(1, 2) {
        let size = rng.gen_range(1..=6);
        let items: Vec<Tuple> = (0..size)
            .map(|_| Tuple::new((0..vg.n).map(|_| rng.gen_range(0..vg.group.order()) as Elem).collect()))
            .collect();
        let s = BiasedSpace::from_multiset(&vg.group, vg.n, items).expect("valid");
        out.push((format!("random_{i}"), symmetrize(&s)));
    }
    out
}

/// Sampled walks are compared on graphs with at least this many vertices,
/// one `(space, coset, t)` triple per graph.
const MC_MIN_VERTICES: usize = 16;

struct McCandidate {
    graph: String,
    space: usize,
    coset: u64,
    t: usize,
    exact: f64,
}

/// Exact confinement probabilities of every subgroup coset stay below
/// `(β+α)^t`; sampled walks agree with the exact values.
pub fn confinement(profile: Profile, seed: u64) -> Vec<Check> {
    let mut rng = item_rng(seed, 10);
    let trials = profile.pick(10_000u64, 100_000);
    let mut checks = Vec::new();
    let mut mc_samples = Vec::new();
    let mut library_diff: f64 = 0.0;
    for vg in vertex_groups(profile) {
        let subgroups = vg.subgroups();
        let mut comparisons = 0u64;
        let mut cosets_seen = 0u64;
        let mut worst_ratio: f64 = 0.0;
        let mut violations = Vec::new();
        let mut graphs = Vec::new();
        let mut candidates = Vec::new();
        for (si, (name, space)) in spaces(&vg, profile, &mut rng).into_iter().enumerate() {
            let graph = CayleyGraph::new(space).expect("symmetric");
            let alpha = lambda(&graph).expect("small graph").lambda;
            let degree = graph.degree() as f64;
            let steps: Vec<(usize, f64)> = graph
                .space()
                .iter()
                .map(|(s, c)| (vg.group.tuple_index(s) as usize, c as f64 / degree))
                .collect();
            for &k in &subgroups {
                let beta = k.count_ones() as f64 / vg.size as f64;
                for coset in vg.cosets(k) {
                    cosets_seen += 1;
                    let probs = confinement_profile(&vg, &steps, coset);
                    for (t, &p) in probs.iter().enumerate() {
                        comparisons += 1;
                        let bound = (beta + alpha).powi(t as i32);
                        if bound > 0.0 {
                            worst_ratio = worst_ratio.max(p / bound);
                        }
                        if p > bound + 1e-12 && violations.len() < 10 {
                            violations.push(json!({ "space": name, "coset": format!("{coset:#x}"), "t": t, "exact": p, "bound": bound }));
                        }
                        // Only triples where the walk is still leaving the coset.
                        let leaving = t > 0 && p < probs[t - 1] - 1e-9;
                        if vg.size >= MC_MIN_VERTICES && leaving && (0.05..0.95).contains(&p) {
                            candidates.push(McCandidate {
                                graph: vg.label.clone(),
                                space: si,
                                coset,
                                t,
                                exact: p,
                            });
                        }
                    }
                }
            }
            // Cross-check one coset against the library's propagation.
            if let Some(&k) = subgroups.get(subgroups.len() / 2) {
                let coset = vg.cosets(k)[0];
                let inside = |x: &Tuple| coset & (1 << vg.group.tuple_index(x)) != 0;
                if let Ok(p) = confinement_exact(&graph, &inside, 7) {
                    library_diff = library_diff.max((p - confinement_profile(&vg, &steps, coset)[7]).abs());
                }
            }
            graphs.push((name, graph, alpha));
        }
        if let Some(c) = candidates.choose(&mut rng) {
            let (_, graph, _) = &graphs[c.space];
            let coset = c.coset;
            let inside = |x: &Tuple| coset & (1 << vg.group.tuple_index(x)) != 0;
            let mc = confinement_monte_carlo(graph, &inside, c.t, trials, rng.gen());
            mc_samples.push(json!({
                "graph": c.graph,
                "space": graphs[c.space].0,
                "coset": format!("{coset:#x}"),
                "t": c.t,
                "exact": c.exact,
                "estimate": mc.estimate,
                "lower": mc.lower,
                "upper": mc.upper,
                "inside": mc.lower <= c.exact && c.exact <= mc.upper,
            }));
        }
        checks.push(Check::new(
            format!("exact_below_bound_{}", vg.label),
            violations.is_empty(),
            json!({
                "spaces": graphs.iter().map(|(name, _, alpha)| json!({ "space": name, "alpha": alpha })).collect::<Vec<_>>(),
                "subgroups": subgroups.len(),
                "cosets": cosets_seen,
                "comparisons": comparisons,
                "max_exact_over_bound": worst_ratio,
                "violations": violations,
            }),
        ));
    }
    checks.push(Check::new(
        "markov_matches_library",
        library_diff <= 1e-12,
        json!({ "max_abs_diff": library_diff }),
    ));
    let all_inside = mc_samples.iter().all(|s| s["inside"] == json!(true));
    checks.push(Check::new(
        "monte_carlo_within_wilson_99",
        all_inside && !mc_samples.is_empty(),
        json!({
            "trials": trials,
            "min_vertices": MC_MIN_VERTICES,
            "expected_misses_at_99": mc_samples.len() as f64 * 0.01,
            "samples": mc_samples,
        }),
    ));
    checks
}
