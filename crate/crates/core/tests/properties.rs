//! Property tests against brute-force oracles written independently of the
//! library's own algorithms.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::TAU;

use num_bigint::BigUint;
use proptest::prelude::*;
use rpp_core::cayley::{confinement_exact, lambda_by_characters, lambda_numeric, wilson_interval, CayleyGraph};
use rpp_core::group::{distance_to_subgroup, Elem, GroupSpec, Subgroup, Tuple};
use rpp_core::perm::{schreier_sims, Permutation, SubgroupChain};
use rpp_core::smallbias::{measure_bias, quotient_lift, lift_map, symmetrize, BiasedSpace};
use rpp_core::solver::{solve, verify_solution, Mode, RppInstance, SolveOptions};

/// Closure of `gens` in `G^n` by breadth-first search over products.
fn closure(group: &GroupSpec, n: usize, gens: &[Tuple]) -> HashSet<Vec<Elem>> {
    let id = vec![group.identity(); n];
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<Elem> = x.iter().zip(&g.0).map(|(&a, &b)| group.op(a, b)).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

fn perm_closure(degree: usize, gens: &[Vec<u32>]) -> HashSet<Vec<u32>> {
    let id: Vec<u32> = (0..degree as u32).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<u32> = p.iter().map(|&i| g[i as usize]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Largest `|Σ_s χ(s)|/|S|` over nontrivial characters of `Z_m^n`, summed
/// term by term.
fn cyclic_bias_oracle(m: u32, n: usize, items: &[Vec<Elem>]) -> f64 {
    let total = (m as usize).pow(n as u32);
    let mut worst: f64 = 0.0;
    for code in 1..total {
        let mut a = vec![0u32; n];
        let mut c = code;
        for slot in a.iter_mut() {
            *slot = (c % m as usize) as u32;
            c /= m as usize;
        }
        let (mut re, mut im) = (0.0, 0.0);
        for x in items {
            let phase: u32 = a.iter().zip(x).map(|(&ai, &xi)| ai * xi as u32).sum::<u32>() % m;
            let angle = TAU * phase as f64 / m as f64;
            re += angle.cos();
            im += angle.sin();
        }
        worst = worst.max((re * re + im * im).sqrt() / items.len() as f64);
    }
    worst
}

fn tuples(m: u32, n: usize, max: usize) -> impl Strategy<Value = Vec<Vec<Elem>>> {
    prop::collection::vec(prop::collection::vec(0..m as Elem, n), 1..=max)
}

fn cyclic_group() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn abelian_group_axioms(factors in prop::sample::select(vec![vec![2u32], vec![6], vec![2, 4], vec![3, 3], vec![2, 2, 6]])) {
        let g = GroupSpec::abelian(&factors).unwrap();
        let m = g.order() as Elem;
        for a in 0..m {
            prop_assert_eq!(g.op(a, g.identity()), a);
            prop_assert_eq!(g.op(a, g.inverse(a)), g.identity());
            let comps = g.components(a).unwrap();
            prop_assert_eq!(g.from_components(&comps).unwrap(), a);
            for b in 0..m {
                prop_assert_eq!(g.op(a, b), g.op(b, a));
                for c in 0..m {
                    prop_assert_eq!(g.op(g.op(a, b), c), g.op(a, g.op(b, c)));
                }
            }
        }
    }

    #[test]
    fn tuple_index_round_trip(m in cyclic_group(), coords in prop::collection::vec(0u8..5, 1..9)) {
        let g = GroupSpec::cyclic(m).unwrap();
        let x = Tuple::new(coords.into_iter().map(|c| c % m as Elem).collect());
        let idx = g.tuple_index(&x);
        prop_assert!(idx < (m as u128).pow(x.len() as u32));
        prop_assert_eq!(g.tuple_from_index(idx, x.len()), x);
    }

    #[test]
    fn schreier_sims_matches_enumeration(
        degree in 2usize..7,
        raw in prop::collection::vec(prop::collection::vec(any::<u32>(), 7), 1..4),
    ) {
        // A random permutation from each key vector by sorting positions.
        let gens: Vec<Vec<u32>> = raw
            .iter()
            .map(|keys| {
                let mut idx: Vec<u32> = (0..degree as u32).collect();
                idx.sort_by_key(|&i| keys[i as usize]);
                idx
            })
            .collect();
        let perms: Vec<Permutation> = gens.iter().map(|g| Permutation::from_images(g.clone()).unwrap()).collect();
        let group = schreier_sims(degree, &perms, None).unwrap();
        let elements = perm_closure(degree, &gens);
        prop_assert_eq!(group.order(), BigUint::from(elements.len()));
        // Membership of every permutation of a small degree.
        if degree <= 5 {
            for images in perm_closure(degree, &[
                (1..degree as u32).chain([0]).collect(),
                { let mut t: Vec<u32> = (0..degree as u32).collect(); t.swap(0, 1); t },
            ]) {
                let p = Permutation::from_images(images.clone()).unwrap();
                prop_assert_eq!(group.member(&p).unwrap(), elements.contains(&images));
            }
        }
    }

    #[test]
    fn subgroup_order_and_prefix_counts(
        m in cyclic_group(),
        n in 2usize..6,
        raw in prop::collection::vec(prop::collection::vec(0u8..5, 5), 1..3),
    ) {
        let g = GroupSpec::cyclic(m).unwrap();
        let gens: Vec<Tuple> = raw.iter().map(|v| Tuple::new(v[..n].iter().map(|c| c % m as Elem).collect())).collect();
        let h = Subgroup::new(n, gens.clone());
        let members = closure(&g, n, &gens);
        let chain = SubgroupChain::new(&g, &h).unwrap();
        prop_assert_eq!(chain.order(), BigUint::from(members.len()));
        for x in &members {
            prop_assert!(chain.contains(&Tuple::new(x.clone())));
            for i in 0..=n {
                let expect = members.iter().filter(|y| y[..i] == x[..i]).count();
                prop_assert_eq!(chain.prefix_count(&x[..i]), BigUint::from(expect));
            }
        }
    }

    #[test]
    fn distance_matches_enumeration(
        m in cyclic_group(),
        n in 2usize..6,
        raw in prop::collection::vec(prop::collection::vec(0u8..5, 5), 1..3),
        x in prop::collection::vec(0u8..5, 5),
    ) {
        let g = GroupSpec::cyclic(m).unwrap();
        let gens: Vec<Tuple> = raw.iter().map(|v| Tuple::new(v[..n].iter().map(|c| c % m as Elem).collect())).collect();
        let x: Vec<Elem> = x[..n].iter().map(|c| c % m as Elem).collect();
        let expect = closure(&g, n, &gens)
            .iter()
            .map(|y| y.iter().zip(&x).filter(|(a, b)| a != b).count())
            .min()
            .unwrap();
        let got = distance_to_subgroup(&g, &Tuple::new(x), &Subgroup::new(n, gens), 1 << 16).unwrap();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn bias_matches_direct_character_sums(m in cyclic_group(), n in 1usize..4, items in tuples(5, 3, 10)) {
        let g = GroupSpec::cyclic(m).unwrap();
        let items: Vec<Vec<Elem>> = items.iter().map(|v| v[..n].iter().map(|c| c % m as Elem).collect()).collect();
        let space = BiasedSpace::from_multiset(&g, n, items.iter().cloned().map(Tuple::new)).unwrap();
        let fast = measure_bias(&space).unwrap();
        prop_assert!((fast - cyclic_bias_oracle(m, n, &items)).abs() < 1e-9);
    }

    #[test]
    fn symmetrized_space_has_real_spectrum(m in cyclic_group(), n in 1usize..4, items in tuples(5, 3, 6)) {
        let g = GroupSpec::cyclic(m).unwrap();
        let items = items.iter().map(|v| Tuple::new(v[..n].iter().map(|c| c % m as Elem).collect()));
        let space = symmetrize(&BiasedSpace::from_multiset(&g, n, items).unwrap());
        prop_assert!(space.is_symmetric());
        for (x, c) in space.iter() {
            prop_assert_eq!(space.count(&g.inv(x)), c);
        }
        let graph = CayleyGraph::new(space.clone()).unwrap();
        let numeric = lambda_numeric(&graph).unwrap().lambda;
        let chars = lambda_by_characters(&graph).unwrap().lambda;
        prop_assert!((numeric - chars).abs() < 1e-6);
        prop_assert!((chars - measure_bias(&space).unwrap().min(1.0)).abs() < 1e-9);
    }

    #[test]
    fn lift_never_raises_bias(n in 1usize..3, items in prop::collection::vec(prop::collection::vec(0u8..4, 4), 1..16)) {
        let group = GroupSpec::abelian(&[2, 4]).unwrap();
        let (base, _) = lift_map(&group).unwrap();
        let len = base.order();
        let s0 = BiasedSpace::from_multiset(
            &base,
            n,
            items.iter().map(|v| Tuple::new(v[..n].iter().map(|&c| c % len as Elem).collect())),
        )
        .unwrap();
        let lifted = quotient_lift(&s0, &group).unwrap();
        prop_assert_eq!(lifted.size(), s0.size());
        prop_assert!(measure_bias(&lifted).unwrap() <= measure_bias(&s0).unwrap() + 1e-9);
    }

    #[test]
    fn wilson_interval_contains_estimate(trials in 1u64..100_000, frac in 0.0f64..=1.0) {
        let successes = (trials as f64 * frac).round() as u64;
        let (lo, hi) = wilson_interval(successes, trials, 2.576);
        let p = successes as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
    }
}

/// Enumerate every length-`t` step sequence from every start.
fn confinement_oracle(group: &GroupSpec, n: usize, steps: &[(Tuple, u64)], inside: &dyn Fn(&Tuple) -> bool, t: usize) -> f64 {
    let degree: u64 = steps.iter().map(|(_, c)| c).sum();
    let vertices: Vec<Tuple> = group.all_tuples(n, 1 << 12).unwrap();
    let mut total = 0.0;
    fn walk(group: &GroupSpec, v: &Tuple, steps: &[(Tuple, u64)], degree: u64, inside: &dyn Fn(&Tuple) -> bool, left: usize) -> f64 {
        if !inside(v) {
            return 0.0;
        }
        if left == 0 {
            return 1.0;
        }
        steps
            .iter()
            .map(|(s, c)| *c as f64 / degree as f64 * walk(group, &group.mul(v, s).unwrap(), steps, degree, inside, left - 1))
            .sum()
    }
    for v in &vertices {
        total += walk(group, v, steps, degree, inside, t);
    }
    total / vertices.len() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_confinement_matches_path_enumeration(
        m in prop::sample::select(vec![2u32, 3]),
        items in tuples(3, 2, 3),
        mask in any::<u16>(),
        t in 0usize..4,
    ) {
        let g = GroupSpec::cyclic(m).unwrap();
        let items = items.iter().map(|v| Tuple::new(v.iter().map(|c| c % m as Elem).collect()));
        let space = symmetrize(&BiasedSpace::from_multiset(&g, 2, items).unwrap());
        let steps: Vec<(Tuple, u64)> = space.iter().map(|(x, c)| (x.clone(), c)).collect();
        let graph = CayleyGraph::new(space).unwrap();
        let gi = g.clone();
        let inside = move |x: &Tuple| mask & (1 << gi.tuple_index(x)) != 0;
        let exact = confinement_exact(&graph, &inside, t).unwrap();
        prop_assert!((exact - confinement_oracle(&g, 2, &steps, &inside, t)).abs() < 1e-12);
    }

    #[test]
    fn solver_output_is_remote(
        n in 6usize..10,
        raw in prop::collection::vec(prop::collection::vec(0u8..2, 9), 1..3),
        r in 1usize..3,
    ) {
        let g = GroupSpec::cyclic(2).unwrap();
        let gens: Vec<Tuple> = raw.iter().map(|v| Tuple::new(v[..n].to_vec())).collect();
        let members = closure(&g, n, &gens);
        // Half-dimension regime only.
        prop_assume!(members.len() * members.len() <= 1 << n);
        let inst = RppInstance::new(g.clone(), &Subgroup::new(n, gens), r, Mode::Auto);
        let sol = solve(&inst, &SolveOptions::default()).unwrap();
        let d = members
            .iter()
            .map(|y| y.iter().zip(&sol.x.0).filter(|(a, b)| a != b).count())
            .min()
            .unwrap();
        prop_assert!(d > r, "distance {} at radius {}", d, r);
        prop_assert_eq!(verify_solution(&inst, &sol, 1 << 16).unwrap().distance, Some(d));
    }
}

#[test]
fn symmetric_group_orders() {
    let s3 = GroupSpec::symmetric(3).unwrap();
    assert_eq!(s3.order(), 6);
    assert!(!s3.is_commutative());
    // S3^2 generated by one transposition and one 3-cycle per coordinate.
    let gens: Vec<Tuple> = s3.generators().iter().flat_map(|&a| [Tuple::new(vec![a, 0]), Tuple::new(vec![0, a])]).collect();
    assert_eq!(closure(&s3, 2, &gens).len(), 36);
    let chain = SubgroupChain::new(&s3, &Subgroup::new(2, gens)).unwrap();
    assert_eq!(chain.order(), BigUint::from(36u32));
}
