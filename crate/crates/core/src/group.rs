//! Arithmetic in a fixed finite group and its n-fold direct power, together
//! with Hamming geometry and the brute-force oracles every other module is
//! checked against.
//!
//! Group elements are dense indices `0..|G|`. For abelian groups given by
//! invariant factors `d_1 | d_2 | ... | d_k` the index is the mixed-radix
//! encoding of the component vector with the first factor most significant,
//! so index order is lexicographic order on components.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an element of the base group.
pub type Elem = u8;

/// Largest supported base group.
pub const MAX_GROUP_ORDER: usize = 256;

/// Default cap for brute-force enumeration.
pub const DEFAULT_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Abelian { factors: Vec<u32> },
    Table,
}

/// A fixed finite group, stored as a full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupSpec {
    kind: GroupKind,
    order: usize,
    identity: Elem,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Abelian { factors } => write!(f, "GroupSpec::abelian({factors:?})"),
            GroupKind::Table => write!(f, "GroupSpec::table(order {})", self.order),
        }
    }
}

impl GroupSpec {
    /// `Z_{d_1} + ... + Z_{d_k}` with `d_1 | d_2 | ... | d_k`.
    pub fn abelian(factors: &[u32]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("empty invariant factor list".into()));
        }
        if factors.contains(&0) {
            return Err(Error::InvalidGroup("invariant factors must be positive".into()));
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidGroup(format!(
                "invariant factors {factors:?} do not form a divisibility chain"
            )));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .filter(|&o| o <= MAX_GROUP_ORDER)
            .ok_or_else(|| Error::InvalidGroup(format!("order exceeds {MAX_GROUP_ORDER}")))?;
        if order < 2 {
            return Err(Error::InvalidGroup("group must have at least two elements".into()));
        }
        let decode = |mut x: usize| -> Vec<u32> {
            let mut c = vec![0u32; factors.len()];
            for (slot, &d) in c.iter_mut().zip(factors).rev() {
                *slot = (x % d as usize) as u32;
                x /= d as usize;
            }
            c
        };
        let encode = |c: &[u32]| -> usize {
            c.iter()
                .zip(factors)
                .fold(0usize, |acc, (&a, &d)| acc * d as usize + a as usize)
        };
        let comps: Vec<Vec<u32>> = (0..order).map(decode).collect();
        let mut mul = vec![0; order * order];
        let mut inv = vec![0; order];
        for a in 0..order {
            let neg: Vec<u32> = comps[a]
                .iter()
                .zip(factors)
                .map(|(&x, &d)| (d - x) % d)
                .collect();
            inv[a] = encode(&neg) as Elem;
            for b in 0..order {
                let sum: Vec<u32> = comps[a]
                    .iter()
                    .zip(&comps[b])
                    .zip(factors)
                    .map(|((&x, &y), &d)| (x + y) % d)
                    .collect();
                mul[a * order + b] = encode(&sum) as Elem;
            }
        }
        Ok(Self {
            kind: GroupKind::Abelian {
                factors: factors.to_vec(),
            },
            order,
            identity: 0,
            mul,
            inv,
        })
    }

    pub fn cyclic(m: u32) -> Result<Self> {
        Self::abelian(&[m])
    }

    /// A group from an explicit multiplication table. The inverse table is
    /// optional; when given it must agree with the table. All group axioms
    /// are checked.
    pub fn from_table(table: &[Vec<u16>], inverse: Option<&[u16]>) -> Result<Self> {
        let order = table.len();
        if !(2..=MAX_GROUP_ORDER).contains(&order) {
            return Err(Error::InvalidGroup(format!(
                "table order {order} outside 2..={MAX_GROUP_ORDER}"
            )));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            for &v in row {
                if v as usize >= order {
                    return Err(Error::InvalidGroup(format!("entry {v} out of range")));
                }
                mul.push(v as Elem);
            }
        }
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![0 as Elem; order];
        for (a, slot) in inv.iter_mut().enumerate() {
            let b = (0..order)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
            *slot = b as Elem;
        }
        if let Some(given) = inverse {
            if given.len() != order
                || given.iter().zip(&inv).any(|(&g, &i)| g as usize != i as usize)
            {
                return Err(Error::InvalidGroup("inverse table is inconsistent".into()));
            }
        }
        Ok(Self {
            kind: GroupKind::Table,
            order,
            identity: identity as Elem,
            mul,
            inv,
        })
    }

    /// The symmetric group on `k` points (k ≤ 5) in table form. Elements are
    /// indexed by the lexicographic order of their image arrays, so index 0
    /// is the identity; the product `a·b` applies `a` first, then `b`.
    pub fn symmetric(k: usize) -> Result<Self> {
        if !(2..=5).contains(&k) {
            return Err(Error::InvalidGroup("symmetric group degree must be 2..=5".into()));
        }
        let perms = permutations_lex(k);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        let table: Vec<Vec<u16>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = a.iter().map(|&x| b[x]).collect();
                        index(&ab) as u16
                    })
                    .collect()
            })
            .collect();
        Self::from_table(&table, None)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn invariant_factors(&self) -> Option<&[u32]> {
        match &self.kind {
            GroupKind::Abelian { factors } => Some(factors),
            GroupKind::Table => None,
        }
    }

    pub fn is_abelian_kind(&self) -> bool {
        matches!(self.kind, GroupKind::Abelian { .. })
    }

    /// True when the multiplication is commutative, regardless of kind.
    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.op(a as Elem, b as Elem) == self.op(b as Elem, a as Elem)))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn op(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inverse(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn table(&self) -> Vec<Vec<u16>> {
        self.mul
            .chunks(self.order)
            .map(|row| row.iter().map(|&v| v as u16).collect())
            .collect()
    }

    /// Component vector of an element of an abelian-kind group.
    pub fn components(&self, a: Elem) -> Result<Vec<u32>> {
        let factors = self.invariant_factors().ok_or(Error::NotAbelian)?;
        let mut x = a as u32;
        let mut c = vec![0u32; factors.len()];
        for (slot, &d) in c.iter_mut().zip(factors).rev() {
            *slot = x % d;
            x /= d;
        }
        Ok(c)
    }

    pub fn from_components(&self, comps: &[u32]) -> Result<Elem> {
        let factors = self.invariant_factors().ok_or(Error::NotAbelian)?;
        if comps.len() != factors.len() {
            return Err(Error::DimensionMismatch {
                expected: factors.len(),
                got: comps.len(),
            });
        }
        let mut x = 0u32;
        for (&a, &d) in comps.iter().zip(factors) {
            x = x * d + a % d;
        }
        Ok(x as Elem)
    }

    /// A small generating set: unit vectors for abelian kind, otherwise a
    /// greedy scan in index order.
    pub fn generators(&self) -> Vec<Elem> {
        if let Some(factors) = self.invariant_factors() {
            return (0..factors.len())
                .filter(|&j| factors[j] > 1)
                .map(|j| {
                    let mut c = vec![0u32; factors.len()];
                    c[j] = 1;
                    self.from_components(&c).expect("abelian")
                })
                .collect();
        }
        let mut gens = Vec::new();
        let mut span: HashSet<Elem> = HashSet::from([self.identity]);
        for a in 0..self.order as u16 {
            let a = a as Elem;
            if span.contains(&a) {
                continue;
            }
            gens.push(a);
            let mut queue: VecDeque<Elem> = span.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.op(x, g);
                    if span.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    pub fn identity_tuple(&self, n: usize) -> Tuple {
        Tuple(vec![self.identity; n])
    }

    pub fn check_tuple(&self, x: &Tuple) -> Result<()> {
        if x.is_empty() {
            return Err(Error::InvalidElement("tuple must have n >= 1".into()));
        }
        match x.0.iter().find(|&&c| c as usize >= self.order) {
            Some(c) => Err(Error::InvalidElement(format!(
                "coordinate {c} is not an element of a group of order {}",
                self.order
            ))),
            None => Ok(()),
        }
    }

    fn check_pair(&self, a: &Tuple, b: &Tuple) -> Result<()> {
        self.check_tuple(a)?;
        self.check_tuple(b)?;
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        Ok(())
    }

    /// Coordinatewise product in G^n.
    pub fn mul(&self, a: &Tuple, b: &Tuple) -> Result<Tuple> {
        self.check_pair(a, b)?;
        Ok(self.mul_unchecked(a, b))
    }

    #[inline]
    pub fn mul_unchecked(&self, a: &Tuple, b: &Tuple) -> Tuple {
        Tuple(a.0.iter().zip(&b.0).map(|(&x, &y)| self.op(x, y)).collect())
    }

    pub fn inv(&self, a: &Tuple) -> Tuple {
        Tuple(a.0.iter().map(|&x| self.inverse(x)).collect())
    }

    pub fn weight(&self, x: &Tuple) -> usize {
        x.0.iter().filter(|&&c| c != self.identity).count()
    }

    pub fn hamming(&self, x: &Tuple, y: &Tuple) -> Result<usize> {
        self.check_pair(x, y)?;
        Ok(x.0.iter().zip(&y.0).filter(|(a, b)| a != b).count())
    }

    /// `x^{-1} y`, whose weight is the Hamming distance between `x` and `y`.
    pub fn quotient(&self, x: &Tuple, y: &Tuple) -> Result<Tuple> {
        self.check_pair(x, y)?;
        Ok(self.mul_unchecked(&self.inv(x), y))
    }

    /// Mixed-radix index of a tuple in G^n (first coordinate most significant).
    pub fn tuple_index(&self, x: &Tuple) -> u128 {
        x.0.iter()
            .fold(0u128, |acc, &c| acc * self.order as u128 + c as u128)
    }

    pub fn tuple_from_index(&self, mut idx: u128, n: usize) -> Tuple {
        let mut coords = vec![0 as Elem; n];
        if let Ok(mut small) = u64::try_from(idx) {
            let m = self.order as u64;
            for slot in coords.iter_mut().rev() {
                *slot = (small % m) as Elem;
                small /= m;
            }
            return Tuple(coords);
        }
        for slot in coords.iter_mut().rev() {
            *slot = (idx % self.order as u128) as Elem;
            idx /= self.order as u128;
        }
        Tuple(coords)
    }

    /// `|G|^n` as an exact integer.
    pub fn power_order(&self, n: usize) -> BigUint {
        BigUint::from(self.order).pow(n as u32)
    }

    /// Every element of G^n in index order. Fails if `|G|^n > cap`.
    pub fn all_tuples(&self, n: usize, cap: usize) -> Result<Vec<Tuple>> {
        let total = self
            .power_order(n)
            .to_usize()
            .filter(|&t| t <= cap)
            .ok_or(Error::CapExceeded { cap })?;
        Ok((0..total as u128).map(|i| self.tuple_from_index(i, n)).collect())
    }
}

fn permutations_lex(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GroupRepr {
    Abelian {
        abelian: Vec<u32>,
    },
    Table {
        table: Vec<Vec<u16>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        inverse: Option<Vec<u16>>,
    },
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match &self.kind {
            GroupKind::Abelian { factors } => GroupRepr::Abelian {
                abelian: factors.clone(),
            },
            GroupKind::Table => GroupRepr::Table {
                table: self.table(),
                inverse: Some(self.inv.iter().map(|&v| v as u16).collect()),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match GroupRepr::deserialize(d)? {
            GroupRepr::Abelian { abelian } => GroupSpec::abelian(&abelian),
            GroupRepr::Table { table, inverse } => GroupSpec::from_table(&table, inverse.as_deref()),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// An element of G^n as its coordinate indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tuple(pub Vec<Elem>);

impl Tuple {
    pub fn new(coords: Vec<Elem>) -> Self {
        Self(coords)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    /// Restriction to the given coordinates, in the given order.
    pub fn project(&self, coords: &[usize]) -> Tuple {
        Tuple(coords.iter().map(|&i| self.0[i]).collect())
    }
}

impl fmt::Debug for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<Elem>> for Tuple {
    fn from(v: Vec<Elem>) -> Self {
        Tuple(v)
    }
}

/// A subgroup of G^n given by generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub n: usize,
    pub generators: Vec<Tuple>,
}

impl Subgroup {
    pub fn new(n: usize, generators: Vec<Tuple>) -> Self {
        Self { n, generators }
    }

    pub fn trivial(n: usize) -> Self {
        Self::new(n, Vec::new())
    }

    /// The whole of G^n.
    pub fn full(group: &GroupSpec, n: usize) -> Self {
        Self::new(n, coordinate_generators(group, n, 0..n))
    }

    pub fn validate(&self, group: &GroupSpec) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidElement("ambient dimension must be >= 1".into()));
        }
        for g in &self.generators {
            group.check_tuple(g)?;
            if g.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: g.len(),
                });
            }
        }
        Ok(())
    }

    /// Image under projection onto the given coordinates.
    pub fn project(&self, coords: &[usize]) -> Subgroup {
        Subgroup::new(
            coords.len(),
            self.generators.iter().map(|g| g.project(coords)).collect(),
        )
    }

    /// Closure of the generators. Fails with `CapExceeded` as soon as more
    /// than `cap` elements have been found.
    pub fn enumerate(&self, group: &GroupSpec, cap: usize) -> Result<HashSet<Tuple>> {
        self.validate(group)?;
        let id = group.identity_tuple(self.n);
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = group.mul_unchecked(&x, g);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    /// Exact order via the permutation-group machinery.
    pub fn order(&self, group: &GroupSpec) -> Result<BigUint> {
        self.validate(group)?;
        Ok(crate::perm::SubgroupChain::new(group, self)?.order())
    }
}

/// Generators of the coordinate subgroup `G^n(S)` supported on `coords`.
pub fn coordinate_generators(
    group: &GroupSpec,
    n: usize,
    coords: impl IntoIterator<Item = usize>,
) -> Vec<Tuple> {
    let base = group.generators();
    let mut out = Vec::new();
    for i in coords {
        for &g in &base {
            let mut t = group.identity_tuple(n);
            t.0[i] = g;
            out.push(t);
        }
    }
    out
}

/// `δ(H) = log_{|G|} |H|` together with the exact order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dimension {
    pub order: BigUint,
    /// Rounded to 12 decimal digits.
    pub delta: f64,
    /// Present when `δ` is rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Ratio<u64>>,
}

pub fn dimension(group: &GroupSpec, h: &Subgroup) -> Result<Dimension> {
    let order = h.order(group)?;
    Ok(dimension_of_order(group.order(), &order))
}

pub fn dimension_of_order(group_order: usize, order: &BigUint) -> Dimension {
    let raw = log_biguint(order) / (group_order as f64).ln();
    let delta = (raw * 1e12).round() / 1e12;
    // |G| = b^q with b minimal; δ is rational exactly when |H| = b^p.
    let (root, q) = perfect_power_root(group_order as u64);
    let mut p = 0u64;
    let mut acc = BigUint::one();
    let root_big = BigUint::from(root);
    while &acc < order {
        acc *= &root_big;
        p += 1;
    }
    let exact = (&acc == order).then(|| Ratio::new(p, q));
    Dimension { order: order.clone(), delta, exact }
}

fn log_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().map(f64::ln).unwrap_or(f64::INFINITY)
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().unwrap_or(0.0);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Smallest `b` and the `q` with `b^q = m`.
fn perfect_power_root(m: u64) -> (u64, u64) {
    for b in 2..=m {
        let mut acc = b;
        let mut q = 1;
        while acc < m {
            acc *= b;
            q += 1;
        }
        if acc == m {
            return (b, q);
        }
    }
    (m, 1)
}

/// Exact test `|H| ≤ |G|^{num/den}`, i.e. `|H|^den ≤ |G|^num`.
pub fn order_at_most_power(order: &BigUint, group_order: usize, num: u32, den: u32) -> bool {
    order.pow(den) <= BigUint::from(group_order).pow(num)
}

/// Smallest integer `k` with `|H| ≤ |G|^k`.
pub fn ceil_dimension(order: &BigUint, group_order: usize) -> usize {
    let g = BigUint::from(group_order);
    let mut acc = BigUint::one();
    let mut k = 0;
    while &acc < order {
        acc *= &g;
        k += 1;
    }
    k
}

/// Minimum Hamming distance from `x` to the enumerated subgroup.
pub fn distance_to_subgroup(group: &GroupSpec, x: &Tuple, h: &Subgroup, cap: usize) -> Result<usize> {
    group.check_tuple(x)?;
    if x.len() != h.n {
        return Err(Error::DimensionMismatch {
            expected: h.n,
            got: x.len(),
        });
    }
    let elems = h.enumerate(group, cap)?;
    Ok(distance_to_set(x, elems.iter()))
}

/// Minimum Hamming distance from `x` to a set of tuples of the same length.
pub fn distance_to_set<'a>(x: &Tuple, set: impl IntoIterator<Item = &'a Tuple>) -> usize {
    set.into_iter()
        .map(|y| x.0.iter().zip(&y.0).filter(|(a, b)| a != b).count())
        .min()
        .unwrap_or(usize::MAX)
}

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub n: usize,
    pub k_bound: f64,
    pub r: usize,
    pub slack_epsilon: f64,
    pub feasible: bool,
    pub rhs_value: f64,
}

/// Counting-argument feasibility: a remote point exists whenever
/// `k + r ≤ n (1 - H(r/n)/log2|G| - ε)`.
pub fn feasibility_check(
    n: usize,
    k_bound: f64,
    r: usize,
    slack_epsilon: f64,
    group_order: usize,
) -> Result<FeasibilityReport> {
    if n == 0 || r > n {
        return Err(Error::Parameter(format!("need 0 <= r <= n and n >= 1, got r={r}, n={n}")));
    }
    if !(slack_epsilon > 0.0 && slack_epsilon < 1.0) {
        return Err(Error::Parameter(format!("slack epsilon {slack_epsilon} not in (0,1)")));
    }
    if group_order < 2 {
        return Err(Error::Parameter("group order must be at least 2".into()));
    }
    if k_bound < 0.0 {
        return Err(Error::Parameter("k_bound must be non-negative".into()));
    }
    let nf = n as f64;
    let rhs = nf * (1.0 - binary_entropy(r as f64 / nf) / (group_order as f64).log2() - slack_epsilon);
    Ok(FeasibilityReport {
        n,
        k_bound,
        r,
        slack_epsilon,
        feasible: k_bound + r as f64 <= rhs,
        rhs_value: rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[u8]) -> Tuple {
        Tuple(v.to_vec())
    }

    /// Composition of image arrays, applying `a` first.
    fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter().map(|&x| b[x]).collect()
    }

    #[test]
    fn cyclic_products() {
        let z6 = GroupSpec::cyclic(6).unwrap();
        assert_eq!(z6.mul(&t(&[4]), &t(&[5])).unwrap(), t(&[3]));
        let a = t(&[1, 5, 2]);
        assert_eq!(z6.mul(&a, &z6.identity_tuple(3)).unwrap(), a);
    }

    #[test]
    fn s3_table_matches_direct_composition() {
        let perms = permutations_lex(3);
        let table: Vec<Vec<u16>> = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| perms.iter().position(|p| *p == compose(a, b)).unwrap() as u16)
                    .collect()
            })
            .collect();
        let s3 = GroupSpec::from_table(&table, None).unwrap();
        assert_eq!(s3, GroupSpec::symmetric(3).unwrap());
        // (1 2) is [1,0,2]; (1 2 3) is [1,2,0].
        let swap = perms.iter().position(|p| p == &[1, 0, 2]).unwrap() as u8;
        let cyc = perms.iter().position(|p| p == &[1, 2, 0]).unwrap() as u8;
        let prod = s3.mul(&t(&[swap]), &t(&[cyc])).unwrap();
        let expected = compose(&[1, 0, 2], &[1, 2, 0]);
        assert_eq!(perms[prod.0[0] as usize], expected);
        for a in 0..6u8 {
            let x = t(&[a]);
            assert_eq!(s3.mul(&x, &s3.inv(&x)).unwrap(), s3.identity_tuple(1));
        }
    }

    #[test]
    fn inverse_examples() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        assert_eq!(z3.inv(&t(&[1, 2])), t(&[2, 1]));
        assert_eq!(z3.inv(&z3.identity_tuple(2)), z3.identity_tuple(2));
    }

    #[test]
    fn rejects_bad_groups() {
        assert!(GroupSpec::abelian(&[4, 2]).is_err());
        assert!(GroupSpec::abelian(&[1]).is_err());
        assert!(GroupSpec::abelian(&[0, 2]).is_err());
        assert!(GroupSpec::abelian(&[16, 32]).is_err());
        // Not associative: a "group" table with a non-associative op.
        let bad = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(GroupSpec::from_table(&bad, None).is_err());
        let z2 = vec![vec![0, 1], vec![1, 0]];
        assert!(GroupSpec::from_table(&z2, Some(&[0, 0])).is_err());
        assert!(GroupSpec::from_table(&z2, Some(&[0, 1])).is_ok());
    }

    #[test]
    fn mismatch_errors() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        assert!(matches!(
            z2.mul(&t(&[0, 1]), &t(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(z2.mul(&t(&[2]), &t(&[1])).is_err());
        assert!(z2.hamming(&t(&[0]), &t(&[0, 0])).is_err());
    }

    #[test]
    fn mixed_radix_components() {
        let g = GroupSpec::abelian(&[2, 4]).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.components(6).unwrap(), vec![1, 2]);
        assert_eq!(g.from_components(&[1, 2]).unwrap(), 6);
        assert_eq!(g.op(g.from_components(&[1, 3]).unwrap(), g.from_components(&[1, 3]).unwrap()),
            g.from_components(&[0, 2]).unwrap());
    }

    #[test]
    fn weight_and_hamming() {
        let z3 = GroupSpec::cyclic(3).unwrap();
        assert_eq!(z3.weight(&t(&[1, 0, 2, 0])), 2);
        assert_eq!(z3.weight(&z3.identity_tuple(4)), 0);
        let z2 = GroupSpec::cyclic(2).unwrap();
        assert_eq!(z2.hamming(&t(&[0, 1, 1]), &t(&[1, 1, 0])).unwrap(), 2);
        assert_eq!(z2.hamming(&t(&[0, 1, 1]), &t(&[0, 1, 1])).unwrap(), 0);
    }

    #[test]
    fn mean_weight_of_uniform_samples() {
        use rand::{Rng, SeedableRng};
        let z2 = GroupSpec::cyclic(2).unwrap();
        let n = 40;
        let samples = 10_000;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let total: usize = (0..samples)
            .map(|_| z2.weight(&Tuple((0..n).map(|_| rng.gen_range(0..2)).collect())))
            .sum();
        let mean = total as f64 / samples as f64;
        // Weight is Binomial(n, 1/2); standard error of the mean below.
        let sigma = ((n as f64) * 0.25 / samples as f64).sqrt();
        assert!((mean - n as f64 / 2.0).abs() <= 5.0 * sigma, "mean {mean}");
    }

    #[test]
    fn triangle_inequality_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let g = GroupSpec::symmetric(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut rand_t = || Tuple((0..7).map(|_| rng.gen_range(0..6)).collect());
        for _ in 0..1000 {
            let (x, y, z) = (rand_t(), rand_t(), rand_t());
            let xy = g.hamming(&x, &y).unwrap();
            let yz = g.hamming(&y, &z).unwrap();
            let xz = g.hamming(&x, &z).unwrap();
            assert!(xz <= xy + yz);
            assert_eq!(xy, g.weight(&g.quotient(&x, &y).unwrap()));
        }
    }

    #[test]
    fn enumerate_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let h = Subgroup::new(2, vec![t(&[1, 1])]);
        let e = h.enumerate(&z2, DEFAULT_CAP).unwrap();
        assert_eq!(e, HashSet::from([t(&[0, 0]), t(&[1, 1])]));
        let e = Subgroup::trivial(3).enumerate(&z2, DEFAULT_CAP).unwrap();
        assert_eq!(e, HashSet::from([t(&[0, 0, 0])]));
        let z4 = GroupSpec::cyclic(4).unwrap();
        let e = Subgroup::new(2, vec![t(&[1, 2])]).enumerate(&z4, DEFAULT_CAP).unwrap();
        assert_eq!(
            e,
            HashSet::from([t(&[0, 0]), t(&[1, 2]), t(&[2, 0]), t(&[3, 2])])
        );
        let full = Subgroup::full(&z2, 5);
        assert!(matches!(full.enumerate(&z2, 31), Err(Error::CapExceeded { cap: 31 })));
        assert_eq!(full.enumerate(&z2, 32).unwrap().len(), 32);
    }

    #[test]
    fn dimension_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let d = dimension(&z2, &Subgroup::new(2, vec![t(&[1, 1])])).unwrap();
        assert_eq!(d.order, BigUint::from(2u32));
        assert_eq!(d.exact, Some(Ratio::new(1, 1)));
        let d = dimension(&z2, &Subgroup::full(&z2, 6)).unwrap();
        assert_eq!(d.delta, 6.0);
        let z4 = GroupSpec::cyclic(4).unwrap();
        let d = dimension(&z4, &Subgroup::new(2, vec![t(&[1, 2])])).unwrap();
        assert_eq!(d.order, BigUint::from(4u32));
        assert_eq!(d.exact, Some(Ratio::new(1, 1)));
        let d = dimension(&z4, &Subgroup::new(2, vec![t(&[2, 2])])).unwrap();
        assert_eq!(d.exact, Some(Ratio::new(1, 2)));
        let z6 = GroupSpec::cyclic(6).unwrap();
        let d = dimension(&z6, &Subgroup::new(1, vec![t(&[2])])).unwrap();
        assert_eq!(d.exact, None);
        assert!((d.delta - 3f64.ln() / 6f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn distance_examples() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let h = Subgroup::new(4, vec![t(&[1, 1, 1, 1])]);
        assert_eq!(distance_to_subgroup(&z2, &t(&[1, 1, 1, 1]), &h, 16).unwrap(), 0);
        assert_eq!(distance_to_subgroup(&z2, &t(&[0, 1, 0, 1]), &h, 16).unwrap(), 2);
        assert_eq!(distance_to_subgroup(&z2, &t(&[1, 0, 0, 0]), &h, 16).unwrap(), 1);
        assert!(distance_to_subgroup(&z2, &t(&[1, 0, 0, 0]), &Subgroup::full(&z2, 4), 8).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let r = feasibility_check(10, 0.0, 0, 0.99, 2).unwrap();
        assert!(r.feasible);
        let r = feasibility_check(100, 50.0, 1, 0.05, 2).unwrap();
        // H(0.01) = 0.080793...
        let expected = 100.0 * (1.0 - binary_entropy(0.01) - 0.05);
        assert!((r.rhs_value - expected).abs() < 1e-12);
        assert!((r.rhs_value - 86.92).abs() < 0.01);
        assert!(r.feasible);
        let r = feasibility_check(100, 90.0, 20, 0.05, 2).unwrap();
        assert!(!r.feasible);
        assert!(feasibility_check(10, 1.0, 11, 0.1, 2).is_err());
        assert!(feasibility_check(10, 1.0, 1, 1.0, 2).is_err());
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn group_axioms_hold_for_builtin_groups() {
        for g in [
            GroupSpec::abelian(&[2, 4]).unwrap(),
            GroupSpec::abelian(&[2, 2, 6]).unwrap(),
            GroupSpec::symmetric(3).unwrap(),
            GroupSpec::symmetric(4).unwrap(),
        ] {
            // Re-validate through the table constructor, which checks the axioms.
            let again = GroupSpec::from_table(&g.table(), None).unwrap();
            assert_eq!(again.table(), g.table());
            assert_eq!(again.identity(), g.identity());
        }
    }

    #[test]
    fn json_round_trip() {
        let g = GroupSpec::abelian(&[2, 4]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"abelian":[2,4]}"#);
        assert_eq!(serde_json::from_str::<GroupSpec>(&s).unwrap(), g);
        let s3 = GroupSpec::symmetric(3).unwrap();
        let back: GroupSpec = serde_json::from_str(&serde_json::to_string(&s3).unwrap()).unwrap();
        assert_eq!(back, s3);
        let h: Subgroup = serde_json::from_str(r#"{"n":4,"generators":[[1,1,1,1]]}"#).unwrap();
        assert_eq!(h.generators, vec![t(&[1, 1, 1, 1])]);
        assert!(serde_json::from_str::<GroupSpec>(r#"{"abelian":[3,2]}"#).is_err());
    }

    #[test]
    fn generators_span_group() {
        for g in [GroupSpec::symmetric(3).unwrap(), GroupSpec::abelian(&[2, 4]).unwrap()] {
            let h = Subgroup::new(1, g.generators().into_iter().map(|e| Tuple(vec![e])).collect());
            assert_eq!(h.enumerate(&g, 1000).unwrap().len(), g.order());
        }
    }
}
