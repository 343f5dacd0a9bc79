//! Extension fields F_{p^k} = F_p[z]/(q1) with q1 monic irreducible.

use crate::error::{domain, usage, Result};
use crate::rng::Rng;

use super::fp::PrimeField;
use super::unipoly::UniPoly;
use super::{Domain, FieldDomain, FiniteField};

/// F_{p^k}. Elements are coefficient vectors of length k over F_p
/// (constant term first).
#[derive(Clone, Debug, PartialEq)]
pub struct ExtField {
    base: PrimeField,
    /// monic irreducible modulus, degree k, as a coefficient vector of
    /// length k+1 with trailing 1
    modulus: Vec<u64>,
    k: usize,
}

impl ExtField {
    /// Builds F_p[z]/(q1). Checks that q1 is monic and irreducible.
    pub fn new(base: PrimeField, q1: &UniPoly<PrimeField>) -> Result<Self> {
        let k = q1.degree();
        if k == 0 || q1.is_zero() {
            return Err(usage("extension modulus must be nonconstant"));
        }
        if q1.lc(&base) != 1 {
            return Err(usage("extension modulus must be monic"));
        }
        if !q1.is_irreducible(&base)? {
            return Err(domain("extension modulus is reducible"));
        }
        if (base.p() as u128).pow(k as u32) > u128::MAX / 2 {
            return Err(usage("extension order exceeds desk-scale cap"));
        }
        Ok(ExtField { base, modulus: q1.coeffs.clone(), k })
    }

    /// Deterministically finds a monic irreducible of degree k over F_p by
    /// scanning polynomials in counter order.
    pub fn generate(base: PrimeField, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(usage("extension degree must be at least 1"));
        }
        let p = base.p();
        if (p as u128).checked_pow(k as u32).is_none() {
            return Err(usage("extension order overflows"));
        }
        // counter over the k low coefficients
        let mut counter = vec![0u64; k];
        loop {
            let mut coeffs: Vec<u64> = counter.clone();
            coeffs.push(1);
            let cand = UniPoly::from_coeffs(&base, coeffs);
            if cand.is_irreducible(&base)? {
                return ExtField::new(base, &cand);
            }
            // increment
            let mut i = 0;
            loop {
                if i == k {
                    return Err(domain("no irreducible polynomial found (impossible)"));
                }
                counter[i] += 1;
                if counter[i] < p {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
        }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus_poly(&self) -> UniPoly<PrimeField> {
        UniPoly::from_coeffs(&self.base, self.modulus.clone())
    }

    /// Embeds a base-field element.
    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0; self.k];
        v[0] = a % self.base.p();
        v
    }

    /// The residue class of z.
    pub fn gen(&self) -> Vec<u64> {
        let mut v = vec![0; self.k];
        if self.k == 1 {
            // z = -q1[0]
            v[0] = self.base.neg(&self.modulus[0]);
        } else {
            v[1] = 1;
        }
        v
    }

    fn reduce(&self, mut long: Vec<u64>) -> Vec<u64> {
        let p = &self.base;
        // reduce degree >= k coefficients using z^k = -(q1 - z^k)
        for i in (self.k..long.len()).rev() {
            let c = long[i];
            if c == 0 {
                continue;
            }
            long[i] = 0;
            for j in 0..self.k {
                let t = p.mul(&c, &self.modulus[j]);
                long[i - self.k + j] = p.sub(&long[i - self.k + j], &t);
            }
        }
        long.truncate(self.k);
        long.resize(self.k, 0);
        long
    }
}

impl Domain for ExtField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let mut long = vec![0u64; 2 * self.k];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y);
                long[i + j] = self.base.add(&long[i + j], &t);
            }
        }
        self.reduce(long)
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|x| *x == 0)
    }
    fn from_i64(&self, v: i64) -> Vec<u64> {
        self.embed(self.base.elem(v))
    }
    fn fmt_elem(&self, a: &Vec<u64>) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 if *c == 1 => "z".to_string(),
                1 => format!("{c}*z"),
                _ if *c == 1 => format!("z^{i}"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

impl FieldDomain for ExtField {
    fn inv(&self, a: &Vec<u64>) -> Result<Vec<u64>> {
        if self.is_zero(a) {
            return Err(domain("inversion of zero"));
        }
        // a^(q-2)
        let e = self.order() - 2;
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }
}

impl FiniteField for ExtField {
    fn char(&self) -> u64 {
        self.base.p()
    }
    fn order(&self) -> u128 {
        (self.base.p() as u128).pow(self.k as u32)
    }
    fn elem_at(&self, mut i: u128) -> Vec<u64> {
        let p = self.base.p() as u128;
        let mut v = vec![0u64; self.k];
        for slot in v.iter_mut() {
            *slot = (i % p) as u64;
            i /= p;
        }
        v
    }
    fn elem_index(&self, a: &Vec<u64>) -> u128 {
        let p = self.base.p() as u128;
        let mut acc = 0u128;
        for c in a.iter().rev() {
            acc = acc * p + *c as u128;
        }
        acc
    }
    fn pth_root(&self, a: &Vec<u64>) -> Vec<u64> {
        // Frobenius has order k, so the inverse is x -> x^(p^(k-1))
        let mut acc = a.clone();
        for _ in 0..(self.k - 1) {
            let mut next = self.one();
            // acc^p by square and multiply
            let mut e = self.base.p();
            let mut base = acc.clone();
            let mut res = self.one();
            while e > 0 {
                if e & 1 == 1 {
                    res = self.mul(&res, &base);
                }
                base = self.mul(&base, &base);
                e >>= 1;
            }
            next = self.mul(&next, &res);
            acc = next;
        }
        acc
    }
    fn random_elem(&self, rng: &mut Rng) -> Vec<u64> {
        (0..self.k).map(|_| rng.below(self.base.p())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_z_squared_is_minus_one() {
        // F_9 = F_3[z]/(z^2+1): z*z = -1 = 2
        let f3 = PrimeField::new(3).unwrap();
        let q1 = UniPoly::from_coeffs(&f3, vec![1, 0, 1]);
        let f9 = ExtField::new(f3, &q1).unwrap();
        let z = f9.gen();
        assert_eq!(f9.mul(&z, &z), f9.embed(2));
    }

    #[test]
    fn rejects_reducible_modulus() {
        let f5 = PrimeField::new(5).unwrap();
        // x^2 - 1 factors
        let q1 = UniPoly::from_coeffs(&f5, vec![4, 0, 1]);
        assert!(ExtField::new(f5, &q1).is_err());
    }

    #[test]
    fn field_axioms_f16() {
        let f2 = PrimeField::new(2).unwrap();
        let f16 = ExtField::generate(f2, 4).unwrap();
        let mut rng = Rng::new(3);
        for _ in 0..100 {
            let a = f16.random_elem(&mut rng);
            let b = f16.random_elem(&mut rng);
            if !f16.is_zero(&b) {
                let ab = f16.mul(&a, &b);
                assert_eq!(f16.mul(&ab, &f16.inv(&b).unwrap()), a);
            }
            if !f16.is_zero(&a) {
                assert_eq!(f16.pow(&a, 15), f16.one());
            }
        }
    }

    #[test]
    fn pth_root_inverts_frobenius() {
        let f3 = PrimeField::new(3).unwrap();
        let f27 = ExtField::generate(f3, 3).unwrap();
        let mut rng = Rng::new(4);
        for _ in 0..50 {
            let a = f27.random_elem(&mut rng);
            let frob = f27.pow(&a, 3);
            assert_eq!(f27.pth_root(&frob), a);
        }
    }

    #[test]
    fn elem_enumeration_roundtrip() {
        let f3 = PrimeField::new(3).unwrap();
        let f9 = ExtField::generate(f3, 2).unwrap();
        for i in 0..9u128 {
            assert_eq!(f9.elem_index(&f9.elem_at(i)), i);
        }
    }
}
