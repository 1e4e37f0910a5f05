//! Arithmetic in `GF(p^t)` for the trace-powering construction.
//!
//! Elements are coded as integers whose base-`p` digits are the polynomial
//! coefficients (digit `j` is the coefficient of `x^j`). Multiplication goes
//! through log/antilog tables for a primitive modulus found by search.

use crate::error::{Error, Result};

/// Largest field order we build tables for.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `>= lo` (trial division; the sizes here are small).
pub fn next_prime(lo: u64) -> u64 {
    let mut q = lo.max(2);
    while !is_prime(q) {
        q += 1;
    }
    q
}

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    t: u32,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// Trace of each basis element `x^j`.
    basis_trace: Vec<u32>,
}

impl Field {
    /// `GF(p^t)`.
    pub fn new(p: u32, t: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if t == 0 {
            return Err(Error::Parameter("extension degree must be positive".into()));
        }
        let order = (p as u64)
            .checked_pow(t)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::TooLarge(format!("field of order {p}^{t}")))? as u32;
        let exp = primitive_powers(p, t, order);
        let mut log = vec![0; order as usize];
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }
        let mut field = Self {
            p,
            t,
            order,
            exp,
            log,
            basis_trace: Vec::new(),
        };
        field.basis_trace = (0..t).map(|j| field.trace_slow(p.pow(j))).collect();
        Ok(field)
    }

    /// Smallest field of characteristic `p` with at least `min_order` elements.
    pub fn at_least(p: u32, min_order: u64) -> Result<Self> {
        let mut t = 1;
        let mut q = p as u64;
        while q < min_order {
            t += 1;
            q = q.saturating_mul(p as u64);
            if q > MAX_FIELD_ORDER {
                return Err(Error::TooLarge(format!("no field of characteristic {p} with at least {min_order} elements within the table limit")));
            }
        }
        Self::new(p, t)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.t
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.t {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.order as u64 - 1);
        self.exp[k as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 * (e % (self.order as u64 - 1))) % (self.order as u64 - 1);
        self.exp[k as usize]
    }

    /// Absolute trace into `F_p`, by linearity over the basis.
    pub fn trace(&self, mut a: u32) -> u32 {
        let mut acc = 0;
        for &tr in &self.basis_trace {
            acc = (acc + (a % self.p) * tr) % self.p;
            a /= self.p;
        }
        acc
    }

    /// `a + a^p + ... + a^{p^{t-1}}` computed directly.
    fn trace_slow(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut power = a;
        for _ in 0..self.t {
            acc = self.add(acc, power);
            power = self.pow(power, self.p as u64);
        }
        debug_assert!(acc < self.p);
        acc
    }
}

/// Powers of `x` modulo the first primitive monic polynomial of degree `t`
/// (in code order of its lower coefficients).
fn primitive_powers(p: u32, t: u32, order: u32) -> Vec<u32> {
    if t == 1 {
        // Smallest primitive root mod p.
        for g in 1..p.max(2) {
            let mut seen = vec![false; p as usize];
            let mut x = 1u32;
            let mut ok = true;
            for _ in 0..p - 1 {
                if seen[x as usize] {
                    ok = false;
                    break;
                }
                seen[x as usize] = true;
                x = x * g % p;
            }
            if ok || p == 2 {
                let mut exp = Vec::with_capacity(p as usize - 1);
                let mut x = 1;
                for _ in 0..p - 1 {
                    exp.push(x);
                    x = x * g % p;
                }
                return exp;
            }
        }
        unreachable!("every prime field has a primitive root");
    }
    let top = p.pow(t - 1);
    for low in 1..order {
        // Modulus x^t + (coefficients of `low`); multiplying by x shifts digits
        // up and folds the overflowing digit back with -low.
        let times_x = |a: u32| -> u32 {
            let carry = a / top;
            let shifted = (a % top) * p;
            if carry == 0 {
                return shifted;
            }
            let (mut s, mut l) = (shifted, low);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..t {
                let d = (s % p + (p - (carry * (l % p)) % p)) % p;
                out += d * place;
                s /= p;
                l /= p;
                place *= p;
            }
            out
        };
        let mut seen = vec![false; order as usize];
        let mut exp = Vec::with_capacity(order as usize - 1);
        let mut a = 1;
        let mut ok = true;
        for _ in 0..order - 1 {
            if a == 0 || seen[a as usize] {
                ok = false;
                break;
            }
            seen[a as usize] = true;
            exp.push(a);
            a = times_x(a);
        }
        if ok && a == 1 {
            return exp;
        }
    }
    unreachable!("a primitive polynomial of every degree exists");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(next_prime(6), 7);
        assert_eq!(next_prime(7), 7);
        assert_eq!(next_prime(0), 2);
        assert_eq!(next_prime(90), 97);
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }

    fn check_field(f: &Field) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, 0), a);
            if a != 0 {
                let inv = f.pow(a, q as u64 - 2);
                assert_eq!(f.mul(a, inv), 1);
            }
            assert!(f.trace(a) < f.characteristic());
            assert_eq!(f.trace(a), f.trace_slow(a));
        }
        for a in 0..q.min(40) {
            for b in 0..q.min(40) {
                for c in 0..q.min(10) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        // Trace is onto F_p and balanced.
        let mut hist = vec![0; f.characteristic() as usize];
        for a in 0..q {
            hist[f.trace(a) as usize] += 1;
        }
        assert!(hist.iter().all(|&h| h == q / f.characteristic()));
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for (p, t) in [(2, 1), (2, 3), (2, 6), (3, 1), (3, 4), (5, 2), (5, 3), (7, 2)] {
            check_field(&Field::new(p, t).unwrap());
        }
    }

    #[test]
    fn at_least_picks_smallest_power() {
        assert_eq!(Field::at_least(2, 6).unwrap().order(), 8);
        assert_eq!(Field::at_least(3, 9).unwrap().order(), 9);
        assert_eq!(Field::at_least(5, 1).unwrap().order(), 5);
        assert!(Field::new(4, 1).is_err());
    }
}
