//! Permutation groups via deterministic Schreier-Sims.
//!
//! `G^n` acts on `Ω = G × [n]` by right multiplication in each coordinate;
//! point `(a, i)` has index `i·|G| + a`. With the base order sorted by
//! coordinate, the pointwise stabilizer of `G × [i]` is a suffix of the
//! stabilizer chain, which is what [`SubgroupChain::prefix_count`] exploits.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, GroupSpec, Subgroup, Tuple};

/// A bijection on `0..degree`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<u32>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            match seen.get_mut(x as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::InvalidElement(format!("{images:?} is not a bijection"))),
            }
        }
        Ok(Self { images })
    }

    /// Build from disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cyc in cycles {
            for (k, &p) in cyc.iter().enumerate() {
                let next = cyc[(k + 1) % cyc.len()];
                if p >= degree || next >= degree {
                    return Err(Error::InvalidElement(format!("point out of range in {cyc:?}")));
                }
                images[p] = next as u32;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }
}

#[derive(Clone, Debug)]
struct Level {
    point: u32,
    /// Position of `point` in the base order.
    position: usize,
    orbit: Vec<u32>,
    index: HashMap<u32, usize>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
    /// Indices into the strong generating set.
    gens: Vec<usize>,
}

/// A base and strong generating set with explicit transversals.
///
/// Only levels with a non-trivial basic orbit are kept; `base_order` is the
/// full point ordering the chain was built against.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    base_order: Vec<u32>,
    strong_gens: Vec<Permutation>,
    levels: Vec<Level>,
}

struct WorkLevel {
    orbit: Vec<u32>,
    index: HashMap<u32, usize>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
    gens: Vec<usize>,
}

struct Builder {
    degree: usize,
    order: Vec<u32>,
    gens: Vec<Permutation>,
    levels: Vec<WorkLevel>,
}

impl Builder {
    fn recompute_orbit(&mut self, l: usize) {
        let b = self.order[l];
        let lvl = &mut self.levels[l];
        lvl.orbit = vec![b];
        lvl.index = HashMap::from([(b, 0)]);
        lvl.reps = vec![Permutation::identity(self.degree)];
        lvl.inv_reps = vec![Permutation::identity(self.degree)];
        let mut k = 0;
        while k < lvl.orbit.len() {
            let gamma = lvl.orbit[k];
            for &gi in &lvl.gens {
                let x = &self.gens[gi];
                let delta = x.images[gamma as usize];
                if !lvl.index.contains_key(&delta) {
                    let rep = lvl.reps[k].then(x);
                    lvl.index.insert(delta, lvl.orbit.len());
                    lvl.orbit.push(delta);
                    lvl.inv_reps.push(rep.inverse());
                    lvl.reps.push(rep);
                }
            }
            k += 1;
        }
    }

    /// Sift from level `start`; returns the residue and the level where
    /// sifting stopped (`order.len()` if it went through).
    fn strip(&self, mut h: Permutation, start: usize) -> (Permutation, usize) {
        for l in start..self.order.len() {
            let b = self.order[l];
            let beta = h.images[b as usize];
            if beta == b {
                continue;
            }
            match self.levels[l].index.get(&beta) {
                Some(&k) => h = h.then(&self.levels[l].inv_reps[k]),
                None => return (h, l),
            }
        }
        (h, self.order.len())
    }

    fn first_moved_level(&self, g: &Permutation) -> Option<usize> {
        self.order.iter().position(|&b| g.images[b as usize] != b)
    }

    fn add_generator(&mut self, g: Permutation, from: usize, to: usize) {
        let idx = self.gens.len();
        self.gens.push(g);
        for l in from..=to {
            self.levels[l].gens.push(idx);
            self.recompute_orbit(l);
        }
    }

    fn run(&mut self) {
        let k = self.order.len();
        if k == 0 {
            return;
        }
        let mut i = k as isize - 1;
        'outer: while i >= 0 {
            let l = i as usize;
            let b = self.order[l];
            let orbit_len = self.levels[l].orbit.len();
            let level_gens = self.levels[l].gens.clone();
            for bi in 0..orbit_len {
                for &gi in &level_gens {
                    let x = &self.gens[gi];
                    let beta = self.levels[l].orbit[bi];
                    let image = x.images[beta as usize];
                    let target = self.levels[l].index[&image];
                    // Generators already fixing the base point sit in deeper
                    // levels, which are complete at this point.
                    if bi == 0 && image == b && self.levels.get(l + 1).is_some_and(|n| n.gens.contains(&gi)) {
                        continue;
                    }
                    let h = self.levels[l].reps[bi]
                        .then(x)
                        .then(&self.levels[l].inv_reps[target]);
                    if h.is_identity() {
                        continue;
                    }
                    let (residue, j) = self.strip(h, l + 1);
                    if !residue.is_identity() {
                        // A non-identity residue always moves some base point
                        // because the base order lists every point.
                        let j = if j == k {
                            self.first_moved_level(&residue).expect("non-identity")
                        } else {
                            j
                        };
                        self.add_generator(residue, l + 1, j);
                        i = j as isize;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }
}

/// Deterministic Schreier-Sims. `base_hint` lists points in the order they
/// should be used as base points; missing points are appended in index order.
pub fn schreier_sims(degree: usize, gens: &[Permutation], base_hint: Option<&[usize]>) -> Result<PermGroup> {
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::DimensionMismatch {
            expected: degree,
            got: g.degree(),
        });
    }
    let order = full_order(degree, base_hint)?;
    let mut builder = Builder {
        degree,
        levels: (0..order.len())
            .map(|_| WorkLevel {
                orbit: Vec::new(),
                index: HashMap::new(),
                reps: Vec::new(),
                inv_reps: Vec::new(),
                gens: Vec::new(),
            })
            .collect(),
        order,
        gens: Vec::new(),
    };
    for g in gens {
        if g.is_identity() || builder.gens.contains(g) {
            continue;
        }
        let depth = builder.first_moved_level(g).expect("non-identity");
        let idx = builder.gens.len();
        builder.gens.push(g.clone());
        for l in 0..=depth {
            builder.levels[l].gens.push(idx);
        }
    }
    for l in 0..builder.order.len() {
        builder.recompute_orbit(l);
    }
    builder.run();

    let Builder { degree, order, gens, levels } = builder;
    let levels = levels
        .into_iter()
        .enumerate()
        .filter(|(_, w)| w.orbit.len() > 1)
        .map(|(position, w)| Level {
            point: order[position],
            position,
            orbit: w.orbit,
            index: w.index,
            reps: w.reps,
            inv_reps: w.inv_reps,
            gens: w.gens,
        })
        .collect();
    Ok(PermGroup {
        degree,
        base_order: order,
        strong_gens: gens,
        levels,
    })
}

fn full_order(degree: usize, hint: Option<&[usize]>) -> Result<Vec<u32>> {
    let mut seen = vec![false; degree];
    let mut order = Vec::with_capacity(degree);
    for &p in hint.unwrap_or(&[]) {
        if p >= degree {
            return Err(Error::InvalidElement(format!("base point {p} out of range")));
        }
        if !seen[p] {
            seen[p] = true;
            order.push(p as u32);
        }
    }
    order.extend((0..degree as u32).filter(|&p| !seen[p as usize]));
    Ok(order)
}

impl PermGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Base points with non-trivial basic orbits.
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point as usize).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong_gens
    }

    /// Strong generators of each level's stabilizer subgroup.
    pub fn level_generators(&self) -> Vec<Vec<&Permutation>> {
        self.levels
            .iter()
            .map(|l| l.gens.iter().map(|&g| &self.strong_gens[g]).collect())
            .collect()
    }

    pub fn basic_orbits(&self) -> Vec<&[u32]> {
        self.levels.iter().map(|l| l.orbit.as_slice()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    /// Residue of `s` after sifting through the whole chain.
    pub fn sift(&self, s: &Permutation) -> Option<Permutation> {
        let mut h = s.clone();
        for l in &self.levels {
            let beta = h.images[l.point as usize];
            if beta == l.point {
                continue;
            }
            let &k = l.index.get(&beta)?;
            h = h.then(&l.inv_reps[k]);
        }
        Some(h)
    }

    pub fn member(&self, s: &Permutation) -> Result<bool> {
        if s.degree() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                got: s.degree(),
            });
        }
        Ok(self.sift(s).is_some_and(|r| r.is_identity()))
    }

    /// The subgroup fixing every point of `delta`, obtained by rebuilding the
    /// chain with `delta` at the front of the base and keeping the suffix.
    pub fn pointwise_stabilizer(&self, delta: &[usize]) -> Result<PermGroup> {
        let mut hint: Vec<usize> = Vec::with_capacity(self.degree);
        let mut seen = vec![false; self.degree];
        for &p in delta {
            if p >= self.degree {
                return Err(Error::InvalidElement(format!("point {p} out of range")));
            }
            if !seen[p] {
                seen[p] = true;
                hint.push(p);
            }
        }
        let prefix = hint.len();
        hint.extend(self.base_order.iter().map(|&p| p as usize).filter(|&p| !seen[p]));
        let full = schreier_sims(self.degree, &self.strong_gens, Some(&hint))?;
        Ok(full.suffix(prefix))
    }

    /// The chain below the first `prefix` positions of the base order.
    fn suffix(&self, prefix: usize) -> PermGroup {
        let kept: Vec<&Level> = self.levels.iter().filter(|l| l.position >= prefix).collect();
        let mut used: Vec<usize> = kept.iter().flat_map(|l| l.gens.iter().copied()).collect();
        used.sort_unstable();
        used.dedup();
        let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        PermGroup {
            degree: self.degree,
            base_order: self.base_order[prefix..].to_vec(),
            strong_gens: used.iter().map(|&g| self.strong_gens[g].clone()).collect(),
            levels: kept
                .into_iter()
                .map(|l| Level {
                    position: l.position - prefix,
                    gens: l.gens.iter().map(|g| remap[g]).collect(),
                    ..l.clone()
                })
                .collect(),
        }
    }

    /// Orbits of the group on all points.
    pub fn orbits(&self) -> OrbitPartition {
        orbits_of(self.degree, &self.strong_gens)
    }
}

/// A partition of the point set into orbits, each block sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPartition {
    pub blocks: Vec<Vec<u32>>,
}

impl OrbitPartition {
    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Every orbit has at most `b` points.
    pub fn is_bounded_by(&self, b: usize) -> bool {
        self.max_block() <= b
    }
}

pub fn orbits_of(degree: usize, gens: &[Permutation]) -> OrbitPartition {
    let mut label = vec![usize::MAX; degree];
    let mut blocks = Vec::new();
    for start in 0..degree {
        if label[start] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block = vec![start as u32];
        label[start] = id;
        let mut k = 0;
        while k < block.len() {
            let p = block[k] as usize;
            for g in gens {
                let q = g.apply(p);
                if label[q] == usize::MAX {
                    label[q] = id;
                    block.push(q as u32);
                }
            }
            k += 1;
        }
        block.sort_unstable();
        blocks.push(block);
    }
    OrbitPartition { blocks }
}

/// The permutation of `Ω = G × [n]` induced by right multiplication by `g`.
pub fn embed_tuple(group: &GroupSpec, g: &Tuple) -> Permutation {
    let m = group.order();
    let mut images = vec![0u32; m * g.len()];
    for (i, &gi) in g.coords().iter().enumerate() {
        for a in 0..m {
            images[i * m + a] = (i * m + group.op(a as Elem, gi) as usize) as u32;
        }
    }
    Permutation { images }
}

/// Generators of `h` as permutations of `G × [n]`.
pub fn embed(group: &GroupSpec, h: &Subgroup) -> Vec<Permutation> {
    h.generators.iter().map(|g| embed_tuple(group, g)).collect()
}

/// Inverse of [`embed_tuple`] on its image.
pub fn unembed(group: &GroupSpec, p: &Permutation) -> Tuple {
    let m = group.order();
    let n = p.degree() / m;
    let e = group.identity() as usize;
    Tuple::new((0..n).map(|i| (p.apply(i * m + e) - i * m) as Elem).collect())
}

/// Points of `G × [i]` for the first `i` coordinates.
pub fn prefix_points(group: &GroupSpec, i: usize) -> Vec<usize> {
    (0..i * group.order()).collect()
}

/// Stabilizer chain of an embedded subgroup, read back at the level of tuples.
///
/// The base order is coordinate-major, so after fixing `(0, i)` for each of
/// the first `i` coordinates the remaining chain is the pointwise stabilizer
/// of `G × [i]` (the action in each coordinate is regular).
#[derive(Clone, Debug)]
pub struct SubgroupChain {
    group: GroupSpec,
    n: usize,
    perm: PermGroup,
    coords: Vec<Option<CoordLevel>>,
    /// `tail[i]` = order of the pointwise stabilizer of `G × [i]`.
    tail: Vec<BigUint>,
}

#[derive(Clone, Debug)]
struct CoordLevel {
    /// Representative index keyed by its value in this coordinate.
    by_value: Vec<Option<usize>>,
    inv_reps: Vec<Tuple>,
}

/// Incremental sifting state for a prefix `y_1 .. y_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixState {
    depth: usize,
    /// Accumulated product of inverse representatives; the sifted residue of
    /// the prefix extended by `g` at coordinate `depth` is `g · shift[depth]`.
    shift: Tuple,
}

impl PrefixState {
    pub fn depth(&self) -> usize {
        self.depth
    }
}

impl SubgroupChain {
    pub fn new(group: &GroupSpec, h: &Subgroup) -> Result<Self> {
        h.validate(group)?;
        let m = group.order();
        let degree = m * h.n;
        let hint: Vec<usize> = (0..degree).collect();
        let perm = schreier_sims(degree, &embed(group, h), Some(&hint))?;
        let mut coords: Vec<Option<CoordLevel>> = vec![None; h.n];
        for level in &perm.levels {
            let i = level.point as usize / m;
            debug_assert_eq!(level.point as usize % m, 0, "non-leading point in regular action");
            let mut by_value = vec![None; m];
            let inv_reps = level
                .reps
                .iter()
                .enumerate()
                .map(|(k, rep)| {
                    let t = unembed(group, rep);
                    by_value[t.coords()[i] as usize] = Some(k);
                    group.inv(&t)
                })
                .collect();
            coords[i] = Some(CoordLevel { by_value, inv_reps });
        }
        let mut tail = vec![BigUint::one(); h.n + 1];
        for i in (0..h.n).rev() {
            let size = coords[i].as_ref().map_or(1, |c| c.inv_reps.len());
            tail[i] = &tail[i + 1] * BigUint::from(size);
        }
        Ok(Self {
            group: group.clone(),
            n: h.n,
            perm,
            coords,
            tail,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perm_group(&self) -> &PermGroup {
        &self.perm
    }

    pub fn order(&self) -> BigUint {
        self.tail[0].clone()
    }

    /// Order of the subgroup of elements that are the identity on the first
    /// `i` coordinates.
    pub fn stabilizer_order(&self, i: usize) -> &BigUint {
        &self.tail[i]
    }

    pub fn start(&self) -> PrefixState {
        PrefixState {
            depth: 0,
            shift: self.group.identity_tuple(self.n),
        }
    }

    /// Extend a prefix by `g`; `None` when the longer prefix is not in the
    /// projection of the subgroup.
    pub fn extend(&self, state: &PrefixState, g: Elem) -> Option<PrefixState> {
        let i = state.depth;
        let residue = self.group.op(g, state.shift.coords()[i]);
        match &self.coords[i] {
            None if residue == self.group.identity() => Some(PrefixState {
                depth: i + 1,
                shift: state.shift.clone(),
            }),
            None => None,
            Some(level) => {
                let k = level.by_value[residue as usize]?;
                Some(PrefixState {
                    depth: i + 1,
                    shift: self.group.mul_unchecked(&state.shift, &level.inv_reps[k]),
                })
            }
        }
    }

    pub fn state_for(&self, prefix: &[Elem]) -> Option<PrefixState> {
        prefix
            .iter()
            .try_fold(self.start(), |s, &g| self.extend(&s, g))
    }

    /// `|H_y|`: the number of subgroup elements agreeing with `y` on its
    /// coordinates.
    pub fn prefix_count(&self, prefix: &[Elem]) -> BigUint {
        match self.state_for(prefix) {
            Some(s) => self.tail[s.depth].clone(),
            None => BigUint::default(),
        }
    }

    pub fn count_for(&self, state: &PrefixState) -> &BigUint {
        &self.tail[state.depth]
    }

    pub fn contains(&self, x: &Tuple) -> bool {
        x.len() == self.n && self.state_for(x.coords()).is_some()
    }
}

/// `|{x ∈ H : x_j = y_j for j < |y|}|` for a prefix `y` of length `1..=n`.
pub fn coset_prefix_count(group: &GroupSpec, h: &Subgroup, y: &Tuple) -> Result<BigUint> {
    group.check_tuple(y)?;
    if y.len() > h.n {
        return Err(Error::DimensionMismatch {
            expected: h.n,
            got: y.len(),
        });
    }
    Ok(SubgroupChain::new(group, h)?.prefix_count(y.coords()))
}

/// Membership of a prefix in the projection of `h` onto its first `|y|`
/// coordinates, by Schreier-Sims on the projected generators.
pub fn projection_member(group: &GroupSpec, h: &Subgroup, y: &Tuple) -> Result<bool> {
    group.check_tuple(y)?;
    if y.len() > h.n {
        return Err(Error::DimensionMismatch {
            expected: h.n,
            got: y.len(),
        });
    }
    let coords: Vec<usize> = (0..y.len()).collect();
    let projected = h.project(&coords);
    let pg = schreier_sims(group.order() * y.len(), &embed(group, &projected), None)?;
    pg.member(&embed_tuple(group, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;
    use std::collections::HashSet;

    fn closure(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
        let id = Permutation::identity(degree);
        let mut seen = HashSet::from([id.clone()]);
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = x.then(g);
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    fn t(v: &[u8]) -> Tuple {
        Tuple::new(v.to_vec())
    }

    #[test]
    fn trivial_group() {
        let pg = schreier_sims(4, &[], None).unwrap();
        assert_eq!(pg.order(), BigUint::one());
        assert!(pg.member(&Permutation::identity(4)).unwrap());
        assert!(!pg.member(&Permutation::from_cycles(4, &[&[0, 1]]).unwrap()).unwrap());
    }

    #[test]
    fn s5_from_transposition_and_five_cycle() {
        let gens = [
            Permutation::from_cycles(5, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
        ];
        assert_eq!(closure(5, &gens).len(), 120);
        let pg = schreier_sims(5, &gens, None).unwrap();
        assert_eq!(pg.order(), BigUint::from(120u32));
        for g in closure(5, &gens) {
            assert!(pg.member(&g).unwrap());
        }
    }

    #[test]
    fn three_cycle() {
        let c = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let pg = schreier_sims(3, &[c], None).unwrap();
        assert_eq!(pg.order(), BigUint::from(3u32));
        assert_eq!(pg.base().len(), 1);
        assert!(!pg.member(&Permutation::from_cycles(3, &[&[0, 2]]).unwrap()).unwrap());
        assert!(pg.member(&Permutation::identity(3)).unwrap());
    }

    #[test]
    fn products_of_strong_generators_are_members() {
        let gens = [
            Permutation::from_cycles(6, &[&[0, 1, 2], &[3, 4]]).unwrap(),
            Permutation::from_cycles(6, &[&[1, 5]]).unwrap(),
        ];
        let pg = schreier_sims(6, &gens, None).unwrap();
        let sg = pg.strong_generators();
        for a in sg {
            for b in sg {
                assert!(pg.member(&a.then(b)).unwrap());
            }
        }
        assert_eq!(pg.order(), BigUint::from(closure(6, &gens).len()));
    }

    #[test]
    fn stabilizer_examples() {
        let gens = [
            Permutation::from_cycles(3, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
        ];
        let pg = schreier_sims(3, &gens, None).unwrap();
        assert_eq!(pg.pointwise_stabilizer(&[]).unwrap().order(), BigUint::from(6u32));
        let st = pg.pointwise_stabilizer(&[0]).unwrap();
        assert_eq!(st.order(), BigUint::from(2u32));
        assert!(st.member(&Permutation::from_cycles(3, &[&[1, 2]]).unwrap()).unwrap());
        assert!(!st.member(&Permutation::from_cycles(3, &[&[0, 1]]).unwrap()).unwrap());
        assert!(pg.pointwise_stabilizer(&[0, 1, 2]).unwrap().is_trivial());
    }

    #[test]
    fn stabilizer_matches_brute_force() {
        let gens = [
            Permutation::from_cycles(7, &[&[0, 1, 2, 3]]).unwrap(),
            Permutation::from_cycles(7, &[&[2, 4], &[5, 6]]).unwrap(),
        ];
        let all = closure(7, &gens);
        let pg = schreier_sims(7, &gens, None).unwrap();
        for delta in [vec![0], vec![3, 5], vec![6, 2, 1]] {
            let expected = all.iter().filter(|g| delta.iter().all(|&p| g.apply(p) == p)).count();
            assert_eq!(pg.pointwise_stabilizer(&delta).unwrap().order(), BigUint::from(expected));
        }
    }

    #[test]
    fn embed_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        assert!(embed_tuple(&z2, &z2.identity_tuple(3)).is_identity());
        assert_eq!(embed_tuple(&z2, &t(&[1])).images(), &[1, 0]);
        let z3 = GroupSpec::cyclic(3).unwrap();
        let p = embed_tuple(&z3, &t(&[1, 2]));
        // (0,1) -> (1,1) in 1-based coordinates is point 0 -> 1 here.
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.images(), &[1, 2, 0, 5, 3, 4]);
        let orbits = orbits_of(6, &[p]);
        assert_eq!(orbits.blocks, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let g = GroupSpec::symmetric(3).unwrap();
        let a = t(&[1, 4, 5]);
        let b = t(&[3, 2, 0]);
        let lhs = embed_tuple(&g, &g.mul(&a, &b).unwrap());
        let rhs = embed_tuple(&g, &a).then(&embed_tuple(&g, &b));
        assert_eq!(lhs, rhs);
        assert_eq!(unembed(&g, &lhs), g.mul(&a, &b).unwrap());
    }

    #[test]
    fn embedded_orders() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        assert_eq!(Subgroup::full(&z2, 3).order(&z2).unwrap(), BigUint::from(8u32));
        let h = Subgroup::new(2, vec![t(&[1, 1])]);
        assert_eq!(h.order(&z2).unwrap(), BigUint::from(2u32));
        let s3 = GroupSpec::symmetric(3).unwrap();
        let full = Subgroup::full(&s3, 3);
        let pg = schreier_sims(18, &embed(&s3, &full), None).unwrap();
        assert_eq!(pg.order(), BigUint::from(216u32));
        assert!(pg.orbits().is_bounded_by(6));
    }

    #[test]
    fn coset_prefix_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let h = Subgroup::new(3, vec![t(&[1, 1, 0]), t(&[0, 1, 1])]);
        assert_eq!(coset_prefix_count(&z2, &h, &t(&[1])).unwrap(), BigUint::from(2u32));
        assert_eq!(coset_prefix_count(&z2, &h, &t(&[1, 1])).unwrap(), BigUint::from(1u32));
        assert_eq!(coset_prefix_count(&z2, &h, &t(&[1, 0, 1])).unwrap(), BigUint::from(1u32));
        assert_eq!(coset_prefix_count(&z2, &h, &t(&[1, 1, 1])).unwrap(), BigUint::default());
        assert!(coset_prefix_count(&z2, &h, &t(&[1, 1, 1, 1])).is_err());
    }

    #[test]
    fn projection_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let h = Subgroup::new(2, vec![t(&[1, 1])]);
        assert!(projection_member(&z2, &h, &t(&[0])).unwrap());
        assert!(projection_member(&z2, &h, &t(&[1])).unwrap());
        let h = Subgroup::new(2, vec![t(&[0, 1])]);
        assert!(!projection_member(&z2, &h, &t(&[1])).unwrap());
    }

    #[test]
    fn chain_matches_enumeration_for_s3_subgroup() {
        let g = GroupSpec::symmetric(3).unwrap();
        let h = Subgroup::new(3, vec![t(&[1, 1, 0]), t(&[3, 0, 3])]);
        let elems = h.enumerate(&g, DEFAULT_CAP).unwrap();
        let chain = SubgroupChain::new(&g, &h).unwrap();
        assert_eq!(chain.order(), BigUint::from(elems.len()));
        for x in g.all_tuples(3, 1000).unwrap() {
            assert_eq!(chain.contains(&x), elems.contains(&x));
            for i in 1..=3 {
                let brute = elems.iter().filter(|e| e.coords()[..i] == x.coords()[..i]).count();
                assert_eq!(chain.prefix_count(&x.coords()[..i]), BigUint::from(brute));
            }
        }
    }

    #[test]
    fn permutation_json_validates() {
        let p: Permutation = serde_json::from_str("[1,2,0]").unwrap();
        assert_eq!(p.apply(2), 0);
        assert!(serde_json::from_str::<Permutation>("[0,0,1]").is_err());
    }
}
