//! Exact arithmetic foundations: integers, rationals, prime fields F_p,
//! extension fields F_{p^k}, and the algebraic-coefficient ring Z[alpha].
//!
//! All coefficient arithmetic in the crate goes through the [`Domain`] trait
//! so polynomials and linear systems can be instantiated over any of these
//! rings. Values are immutable after construction and safe to share.

pub mod algnum;
pub mod fp;
pub mod fq;
pub mod unipoly;

pub use algnum::{find_root_mod_p, AlgNumberContext, ReductionMap, ZAlpha};
pub use fp::PrimeField;
pub use fq::ExtField;
pub use unipoly::UniPoly;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{usage, Result};

/// Logarithmic height of an integer: `ceil(log2(|a| + 1))`, i.e. its bit
/// complexity. `height_int(0) = 0`, `height_int(±1) = 1`.
pub fn height_int(a: &BigInt) -> u64 {
    let m = a.abs().into_parts().1 + 1u32;
    let bits = m.bits();
    // m >= 1; ceil(log2(m)) is bits-1 when m is a power of two, else bits.
    if m.count_ones() == 1 {
        bits - 1
    } else {
        bits
    }
}

/// A commutative ring with explicit context object (the context carries the
/// modulus for F_p, the defining polynomial for extensions, and so on).
pub trait Domain: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// Fields add inversion and exponentiation.
pub trait FieldDomain: Domain {
    /// Multiplicative inverse. Inverting zero is a domain error.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
        }
        acc
    }
}

/// Domains whose elements carry a logarithmic height (integers and Z[alpha]).
pub trait HeightDomain: Domain {
    fn height(&self, a: &Self::Elem) -> u64;
}

/// Finite fields expose their characteristic, order, and element enumeration
/// (used by exhaustive point counting and factorisation routines).
pub trait FiniteField: FieldDomain {
    fn char(&self) -> u64;
    /// Field order as p^k; desk-scale orders fit in u128.
    fn order(&self) -> u128;
    fn order_big(&self) -> BigUint {
        BigUint::from(self.order())
    }
    /// The i-th field element under a fixed enumeration, 0 <= i < order.
    fn elem_at(&self, i: u128) -> Self::Elem;
    /// Inverse of `elem_at` (used to pack points into hash inputs).
    fn elem_index(&self, a: &Self::Elem) -> u128;
    /// p-th root (inverse Frobenius); total map on finite fields.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem;
    fn random_elem(&self, rng: &mut crate::rng::Rng) -> Self::Elem;
}

/// The ring of integers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZZ;

impl Domain for ZZ {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

impl HeightDomain for ZZ {
    fn height(&self, a: &BigInt) -> u64 {
        height_int(a)
    }
}

/// The field of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QQ;

impl Domain for QQ {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

impl FieldDomain for QQ {
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(usage("division by zero in Q"));
        }
        Ok(a.recip())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heights_match_definition() {
        // lh(3) = ceil(log2 4) = 2, lh(-5) = ceil(log2 6) = 3
        assert_eq!(height_int(&BigInt::from(0)), 0);
        assert_eq!(height_int(&BigInt::from(1)), 1);
        assert_eq!(height_int(&BigInt::from(-1)), 1);
        assert_eq!(height_int(&BigInt::from(3)), 2);
        assert_eq!(height_int(&BigInt::from(-5)), 3);
        assert_eq!(height_int(&BigInt::from(6)), 3);
        assert_eq!(height_int(&BigInt::from(7)), 3);
        assert_eq!(height_int(&BigInt::from(8)), 4);
        // powers of two land exactly: lh(2^k - 1) = k
        assert_eq!(height_int(&BigInt::from(1023)), 10);
    }
}
