//! Prime fields F_p with word-sized moduli.
//!
//! Desk-scale experiments use primes well below 2^40; we cap the modulus at
//! 2^62 so products fit in u128 without reduction tricks. Primality of p is
//! checked deterministically below 2^32 and by Miller-Rabin with a fixed
//! witness set above (that set is exact for all p < 3.3 * 10^24).

use crate::error::{domain, usage, Result};
use crate::rng::Rng;

use super::{Domain, FieldDomain, FiniteField};

pub const MAX_PRIME: u64 = 1 << 62;

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // safe: a, b < p <= 2^62
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse via extended Euclid; `a` must be nonzero mod p.
pub fn invmod(a: u64, p: u64) -> Result<u64> {
    let a = a % p;
    if a == 0 {
        return Err(domain("inversion of zero"));
    }
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "modulus must be prime");
    let mut t = t % p as i128;
    if t < 0 {
        t += p as i128;
    }
    Ok(t as u64)
}

/// Square root mod an odd prime via Tonelli-Shanks (deterministic
/// non-residue search). Returns the smaller of the two roots.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        powmod(a, (p + 1) / 4, p)
    } else {
        // general Tonelli-Shanks
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = (2..p).find(|&z| powmod(z, (p - 1) / 2, p) == p - 1).expect("nonresidue");
        let mut m = s;
        let mut c = powmod(z, q, p);
        let mut t = powmod(a, q, p);
        let mut r = powmod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = mulmod(tt, tt, p);
                i += 1;
                if i == m {
                    return None;
                }
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = mulmod(b, b, p);
            }
            m = i;
            c = mulmod(b, b, p);
            t = mulmod(t, c, p);
            r = mulmod(r, b, p);
        }
        r
    };
    Some(r.min(p - r))
}

fn miller_rabin_witness(n: u64, a: u64) -> bool {
    // returns true when `a` proves n composite
    let a = a % n;
    if a == 0 {
        return false;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = powmod(a, d, n);
    if x == 1 || x == n - 1 {
        return false;
    }
    for _ in 1..s {
        x = mulmod(x, x, n);
        if x == n - 1 {
            return false;
        }
    }
    true
}

/// Primality test: trial division for tiny n, then Miller-Rabin with the
/// deterministic witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    ![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
        .iter()
        .any(|&a| miller_rabin_witness(n, a))
}

/// The field F_p. Element values are u64 in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(usage(format!("modulus {p} exceeds the desk-scale cap 2^62")));
        }
        if !is_prime_u64(p) {
            return Err(domain(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> u64 {
        let m = v.rem_euclid(self.p as i64);
        m as u64
    }

    pub fn from_bigint(&self, v: &num_bigint::BigInt) -> u64 {
        use num_traits::ToPrimitive;
        let m = v.mod_floor_u64(self.p);
        m.to_u64().unwrap()
    }

    /// Legendre-style quadratic residue test for odd p: returns the number of
    /// square roots of `a` (0, 1, or 2).
    pub fn sqrt_count(&self, a: u64) -> u32 {
        if a == 0 {
            return 1;
        }
        if self.p == 2 {
            return 1;
        }
        if powmod(a, (self.p - 1) / 2, self.p) == 1 {
            2
        } else {
            0
        }
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> num_bigint::BigInt;
}

impl ModFloor for num_bigint::BigInt {
    fn mod_floor_u64(&self, p: u64) -> num_bigint::BigInt {
        use num_integer::Integer;
        self.mod_floor(&num_bigint::BigInt::from(p))
    }
}

impl Domain for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        addmod(*a, *b, self.p)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        submod(*a, *b, self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_i64(&self, v: i64) -> u64 {
        self.elem(v)
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}

impl FieldDomain for PrimeField {
    fn inv(&self, a: &u64) -> Result<u64> {
        invmod(*a, self.p)
    }
}

impl FiniteField for PrimeField {
    fn char(&self) -> u64 {
        self.p
    }
    fn order(&self) -> u128 {
        self.p as u128
    }
    fn elem_at(&self, i: u128) -> u64 {
        debug_assert!(i < self.p as u128);
        i as u64
    }
    fn elem_index(&self, a: &u64) -> u128 {
        *a as u128
    }
    fn pth_root(&self, a: &u64) -> u64 {
        // Frobenius is the identity on F_p
        *a
    }
    fn random_elem(&self, rng: &mut Rng) -> u64 {
        rng.below(self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops_examples() {
        // (3 + 4) in F_5 = 2
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.add(&3, &4), 2);
        // inv(2) in F_7 = 4
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.inv(&2).unwrap(), 4);
        assert!(f7.inv(&0).is_err());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn primality_small_and_large() {
        let primes = [2u64, 3, 5, 7, 104729, 2147483647, 299999999989];
        for p in primes {
            assert!(is_prime_u64(p), "{p}");
        }
        let composites = [0u64, 1, 4, 91, 104730, 2147483649, 3215031751, 299999999977];
        for c in composites {
            assert!(!is_prime_u64(c), "{c}");
        }
    }

    #[test]
    fn field_axioms_random() {
        let f = PrimeField::new(10007).unwrap();
        let mut rng = Rng::new(5);
        for _ in 0..200 {
            let a = f.random_elem(&mut rng);
            let b = f.random_elem(&mut rng);
            if b != 0 {
                let ab = f.mul(&a, &b);
                assert_eq!(f.mul(&ab, &f.inv(&b).unwrap()), a);
            }
            if a != 0 {
                assert_eq!(f.pow(&a, 10006), 1);
            }
        }
    }

    #[test]
    fn sqrt_mod_matches_scan() {
        for p in [3u64, 5, 7, 13, 17, 10007, 1000003] {
            for a in 0..p.min(60) {
                let direct = (0..p).find(|x| mulmod(*x, *x, p) == a);
                match (sqrt_mod(a, p), direct) {
                    (Some(r), Some(_)) => assert_eq!(mulmod(r, r, p), a, "p={p} a={a}"),
                    (None, None) => {}
                    (x, y) => panic!("p={p} a={a}: {x:?} vs {y:?}"),
                }
            }
        }
    }

    #[test]
    fn sqrt_count_matches_scan() {
        let f = PrimeField::new(23).unwrap();
        for a in 0..23u64 {
            let scan = (0..23u64).filter(|x| mulmod(*x, *x, 23) == a).count() as u32;
            assert_eq!(f.sqrt_count(a), scan);
        }
    }
}
