//! Brute-force oracles on integer-coded tuples.

use rpp_core::group::{Elem, GroupSpec, Tuple};
use rustc_hash::FxHashSet;

/// Mixed-radix code of a tuple, first coordinate most significant.
pub fn encode(m: u64, coords: &[Elem]) -> u64 {
    coords.iter().fold(0, |acc, &c| acc * m + c as u64)
}

/// Subgroup generated by `gens`, by breadth-first closure under right
/// multiplication.
pub fn enumerate_codes(group: &GroupSpec, n: usize, gens: &[Tuple]) -> (FxHashSet<u64>, Vec<Vec<Elem>>) {
    let m = group.order() as u64;
    let id = vec![group.identity(); n];
    let mut seen = FxHashSet::default();
    seen.insert(encode(m, &id));
    let mut elems = vec![id];
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        head += 1;
        for g in gens {
            let y: Vec<Elem> = x.iter().zip(g.coords()).map(|(&a, &b)| group.op(a, b)).collect();
            if seen.insert(encode(m, &y)) {
                elems.push(y);
            }
        }
    }
    (seen, elems)
}

/// Call `visit` on the code of every point within distance `r` of some
/// element of `elems` (with repetitions).
pub fn for_each_ball_point(m: u64, elems: &[Vec<Elem>], r: usize, visit: &mut impl FnMut(u64) -> bool) -> bool {
    fn rec(
        m: u64,
        point: &mut Vec<Elem>,
        from: usize,
        left: usize,
        visit: &mut impl FnMut(u64) -> bool,
    ) -> bool {
        if !visit(encode(m, point)) {
            return false;
        }
        if left == 0 {
            return true;
        }
        for i in from..point.len() {
            let orig = point[i];
            for v in 0..m as Elem {
                if v == orig {
                    continue;
                }
                point[i] = v;
                if !rec(m, point, i + 1, left - 1, visit) {
                    point[i] = orig;
                    return false;
                }
            }
            point[i] = orig;
        }
        true
    }
    for h in elems {
        let mut point = h.clone();
        if !rec(m, &mut point, 0, r, visit) {
            return false;
        }
    }
    true
}

/// Exact `min_{h} Δ(x, h)` over enumerated elements.
pub fn distance(x: &[Elem], elems: &[Vec<Elem>]) -> usize {
    elems
        .iter()
        .map(|h| h.iter().zip(x).filter(|(a, b)| a != b).count())
        .min()
        .unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_sizes() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        let (codes, elems) = enumerate_codes(&z3, 4, &[Tuple::new(vec![1, 1, 1, 1])]);
        assert_eq!(codes.len(), 3);
        let mut ball = FxHashSet::default();
        for_each_ball_point(3, &elems, 1, &mut |c| {
            ball.insert(c);
            true
        });
        // Three disjoint radius-1 balls of size 1 + 4·2.
        assert_eq!(ball.len(), 27);
        assert_eq!(distance(&[0, 1, 2, 0], &elems), 2);
    }

    #[test]
    fn nonabelian_closure() {
        let s3 = GroupSpec::symmetric(3).unwrap();
        let gens: Vec<Tuple> = s3.generators().into_iter().map(|g| Tuple::new(vec![g, g])).collect();
        assert_eq!(enumerate_codes(&s3, 2, &gens).0.len(), 6);
    }
}
