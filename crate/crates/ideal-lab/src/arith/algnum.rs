//! The algebraic-coefficient ring Z[alpha] = Z[z]/(q) and reduction maps
//! Z[alpha] -> F_p obtained from roots of q modulo p.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{domain, usage, Result};
use crate::intpoly::{self, IntPoly};
use crate::rng::Rng;

use super::fp::PrimeField;
use super::unipoly::UniPoly;
use super::{height_int, Domain, HeightDomain};

/// Context for Z[alpha]: a monic squarefree q in Z[z] with alpha a root.
/// Irreducibility of q is the caller's promise; it is certified best-effort
/// by a mod-p test at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgNumberContext {
    q: IntPoly,
    e: usize,
    disc: BigInt,
}

impl AlgNumberContext {
    pub fn new(q_coeffs: &[BigInt]) -> Result<Self> {
        let q = intpoly::trim(q_coeffs.to_vec());
        if intpoly::is_zero(&q) || intpoly::deg(&q) == 0 {
            return Err(usage("q must be nonconstant"));
        }
        if *q.last().unwrap() != BigInt::from(1) {
            return Err(usage("q must be monic"));
        }
        let e = intpoly::deg(&q);
        let disc = if e == 1 {
            BigInt::from(1)
        } else {
            intpoly::discriminant(&q)?
        };
        if disc.is_zero() {
            return Err(domain("q must be squarefree (disc != 0)"));
        }
        Ok(AlgNumberContext { q, e, disc })
    }

    pub fn from_i64(q: &[i64]) -> Result<Self> {
        Self::new(&q.iter().map(|c| BigInt::from(*c)).collect::<Vec<_>>())
    }

    pub fn q(&self) -> &IntPoly {
        &self.q
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// Normal form of an integer polynomial in z: remainder mod q, degree < e.
    pub fn reduce_z(&self, f: &IntPoly) -> IntPoly {
        if intpoly::is_zero(f) || intpoly::deg(f) < self.e {
            return f.clone();
        }
        intpoly::divrem_monic(f, &self.q).expect("q is monic").1
    }

    /// Checks whether a mod-p irreducibility certificate exists among the
    /// first few primes not dividing disc. Returns the certifying prime.
    pub fn certify_irreducible(&self) -> Option<u64> {
        let mut p = 2u64;
        let mut tried = 0;
        while tried < 25 {
            if super::fp::is_prime_u64(p) {
                if (&self.disc % BigInt::from(p)) != BigInt::zero() {
                    tried += 1;
                    let fp = PrimeField::new(p).ok()?;
                    let qp = UniPoly::from_coeffs(
                        &fp,
                        self.q.iter().map(|c| fp.from_bigint(c)).collect(),
                    );
                    if qp.degree() == self.e && qp.is_irreducible(&fp).unwrap_or(false) {
                        return Some(p);
                    }
                }
            }
            p += 1;
        }
        None
    }
}

/// Reduction map Z[alpha] -> F_p determined by a root of q mod p.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionMap {
    pub ctx: AlgNumberContext,
    pub field: PrimeField,
    pub root: u64,
}

impl ReductionMap {
    pub fn new(ctx: AlgNumberContext, field: PrimeField, root: u64) -> Result<Self> {
        let p = BigInt::from(field.p());
        if (ctx.disc() % &p).is_zero() {
            return Err(domain("p divides disc(q)"));
        }
        let qmod = intpoly::eval(ctx.q(), &BigInt::from(root));
        if !(qmod % &p).is_zero() {
            return Err(domain("root does not satisfy q mod p"));
        }
        Ok(ReductionMap { ctx, field, root })
    }

    /// Applies the map to an element of Z[alpha] (alpha goes to root).
    pub fn apply(&self, elem: &[BigInt]) -> u64 {
        let mut acc = 0u64;
        let p = self.field.p();
        for c in elem.iter().rev() {
            let cv = self.field.from_bigint(c);
            acc = super::fp::addmod(super::fp::mulmod(acc, self.root, p), cv, p);
        }
        acc
    }
}

/// Finds a reduction map for (ctx, p): requires p not dividing disc and a
/// root of q mod p. Absence is a value, not an error. The smallest root is
/// chosen for determinism.
pub fn find_root_mod_p(ctx: &AlgNumberContext, p: u64) -> Result<Option<ReductionMap>> {
    let field = PrimeField::new(p)?;
    if (ctx.disc() % BigInt::from(p)).is_zero() {
        return Ok(None);
    }
    let qp = UniPoly::from_coeffs(&field, ctx.q().iter().map(|c| field.from_bigint(c)).collect());
    if qp.is_zero() || qp.degree() == 0 {
        return Ok(None);
    }
    let mut rng = Rng::new(p ^ 0x5eed);
    let roots = qp.roots(&field, &mut rng)?;
    match roots.first() {
        Some(r) => Ok(Some(ReductionMap::new(ctx.clone(), field, *r)?)),
        None => Ok(None),
    }
}

/// The ring Z[alpha] as a coefficient domain. Elements are integer
/// coefficient vectors of length e (z-degree < e), the usual R[z]
/// representation.
#[derive(Clone, Debug, PartialEq)]
pub struct ZAlpha {
    pub ctx: AlgNumberContext,
}

impl ZAlpha {
    pub fn new(ctx: AlgNumberContext) -> Self {
        ZAlpha { ctx }
    }

    fn pad(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        v.resize(self.ctx.e, BigInt::zero());
        v
    }

    pub fn from_intpoly(&self, f: &IntPoly) -> Vec<BigInt> {
        self.pad(self.ctx.reduce_z(f))
    }

    /// alpha itself.
    pub fn alpha(&self) -> Vec<BigInt> {
        if self.ctx.e == 1 {
            // alpha = -q[0]
            vec![-self.ctx.q()[0].clone()]
        } else {
            let mut v = vec![BigInt::zero(); self.ctx.e];
            v[1] = BigInt::from(1);
            v
        }
    }
}

impl Domain for ZAlpha {
    type Elem = Vec<BigInt>;

    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ctx.e]
    }
    fn one(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.ctx.e];
        v[0] = BigInt::from(1);
        v
    }
    fn add(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn mul(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        let long = intpoly::mul(&intpoly::trim(a.clone()), &intpoly::trim(b.clone()));
        self.pad(self.ctx.reduce_z(&long))
    }
    fn neg(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().map(|x| -x).collect()
    }
    fn is_zero(&self, a: &Vec<BigInt>) -> bool {
        a.iter().all(|x| x.is_zero())
    }
    fn from_i64(&self, v: i64) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.ctx.e];
        out[0] = BigInt::from(v);
        out
    }
    fn fmt_elem(&self, a: &Vec<BigInt>) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*a"),
                _ => format!("{c}*a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

impl HeightDomain for ZAlpha {
    fn height(&self, a: &Vec<BigInt>) -> u64 {
        a.iter().map(height_int).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_context() {
        let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
        assert_eq!(ctx.degree(), 2);
        assert_eq!(*ctx.disc(), BigInt::from(-8));
        assert!(ctx.certify_irreducible().is_some());
    }

    #[test]
    fn find_root_examples() {
        // q = z^2 - 2: root 3 mod 7 (3^2 = 9 = 2), none mod 5
        let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
        let m7 = find_root_mod_p(&ctx, 7).unwrap().unwrap();
        assert!(m7.root == 3 || m7.root == 4);
        assert_eq!(super::super::fp::mulmod(m7.root, m7.root, 7), 2);
        assert!(find_root_mod_p(&ctx, 5).unwrap().is_none());
        // q = z - 1: root 1 for any p
        let lin = AlgNumberContext::from_i64(&[-1, 1]).unwrap();
        let m = find_root_mod_p(&lin, 11).unwrap().unwrap();
        assert_eq!(m.root, 1);
    }

    #[test]
    fn skips_disc_divisors() {
        let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
        // disc = -8: p = 2 divides it
        assert!(find_root_mod_p(&ctx, 2).unwrap().is_none());
    }

    #[test]
    fn zalpha_multiplication_reduces() {
        // alpha^2 = 2 for q = z^2 - 2
        let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
        let ring = ZAlpha::new(ctx);
        let a = ring.alpha();
        let prod = ring.mul(&a, &a);
        assert_eq!(prod, vec![BigInt::from(2), BigInt::zero()]);
    }

    #[test]
    fn find_root_agrees_with_direct_scan() {
        let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
        let mut p = 3u64;
        while p <= 500 {
            if super::super::fp::is_prime_u64(p)
                && !(ctx.disc() % BigInt::from(p)).is_zero()
            {
                let scan = (0..p).find(|x| super::super::fp::mulmod(*x, *x, p) == 2 % p);
                let map = find_root_mod_p(&ctx, p).unwrap();
                assert_eq!(map.is_some(), scan.is_some(), "p = {p}");
                if let Some(m) = map {
                    assert_eq!(super::super::fp::mulmod(m.root, m.root, p), 2 % p);
                }
            }
            p += 2;
        }
    }

    #[test]
    fn quadratic_residue_density_of_z2_minus_2() {
        // over primes 3 <= p <= 20000 the fraction with a root is about 1/2
        let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
        let mut with = 0u32;
        let mut total = 0u32;
        let mut p = 3u64;
        while p <= 20000 {
            if super::super::fp::is_prime_u64(p) {
                if let Some(_m) = find_root_mod_p(&ctx, p).unwrap() {
                    with += 1;
                }
                total += 1;
            }
            p += 2;
        }
        let frac = with as f64 / total as f64;
        assert!((frac - 0.5).abs() < 0.03, "fraction {frac}");
    }
}
