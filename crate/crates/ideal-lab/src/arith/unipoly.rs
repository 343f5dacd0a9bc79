//! Univariate polynomials over a field, with complete factorization over
//! finite fields: squarefree decomposition, distinct-degree splitting, and
//! Cantor-Zassenhaus equal-degree splitting (trace method in characteristic 2).

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::rng::Rng;

use super::{Domain, FieldDomain, FiniteField};

/// Coefficient vector, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<F: Domain> {
    pub coeffs: Vec<F::Elem>,
}

impl<F: FieldDomain> UniPoly<F> {
    pub fn from_coeffs(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().map(|c| field.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    pub fn x(field: &F) -> Self {
        UniPoly { coeffs: vec![field.zero(), field.one()] }
    }

    /// The monomial c * x^k.
    pub fn monomial(field: &F, c: F::Elem, k: usize) -> Self {
        if field.is_zero(&c) {
            return Self::zero();
        }
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports degree 0 alongside `is_zero`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self, field: &F) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| field.zero())
    }

    pub fn coeff(&self, field: &F, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_one(&self, field: &F) -> bool {
        self.coeffs.len() == 1 && field.is_one(&self.coeffs[0])
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.add(&self.coeff(field, i), &other.coeff(field, i)));
        }
        Self::from_coeffs(field, out)
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.sub(&self.coeff(field, i), &other.coeff(field, i)));
        }
        Self::from_coeffs(field, out)
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(a, b));
            }
        }
        Self::from_coeffs(field, out)
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        Self::from_coeffs(field, self.coeffs.iter().map(|a| field.mul(a, c)).collect())
    }

    pub fn monic(&self, field: &F) -> Result<Self> {
        if self.is_zero() {
            return Err(domain("monic form of the zero polynomial"));
        }
        let inv = field.inv(&self.lc(field))?;
        Ok(self.scale(field, &inv))
    }

    /// Division with remainder; divisor must have invertible leading coeff.
    pub fn divrem(&self, field: &F, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(domain("division by the zero polynomial"));
        }
        let dlc_inv = field.inv(&divisor.lc(field))?;
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        if self.is_zero() || self.degree() < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let qd = self.degree() - dd;
        let mut quot = vec![field.zero(); qd + 1];
        for k in (0..=qd).rev() {
            let lead = rem.get(k + dd).cloned().unwrap_or_else(|| field.zero());
            if field.is_zero(&lead) {
                continue;
            }
            let q = field.mul(&lead, &dlc_inv);
            quot[k] = q.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let idx = k + j;
                let t = field.mul(&q, dc);
                rem[idx] = field.sub(&rem[idx], &t);
            }
        }
        Ok((Self::from_coeffs(field, quot), Self::from_coeffs(field, rem)))
    }

    pub fn rem(&self, field: &F, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(field, divisor)?.1)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, field: &F, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divrem(field, divisor)?;
        if !r.is_zero() {
            return Err(domain("inexact polynomial division"));
        }
        Ok(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, field: &F, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(field, &b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.monic(field)
        }
    }

    /// Extended gcd: returns (g, s, t) monic with s*self + t*other = g.
    pub fn xgcd(&self, field: &F, other: &Self) -> Result<(Self, Self, Self)> {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Self::one(field);
        let mut s1 = Self::zero();
        let mut t0 = Self::zero();
        let mut t1 = Self::one(field);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(field, &r1)?;
            let s = s0.sub(field, &q.mul(field, &s1));
            let t = t0.sub(field, &q.mul(field, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let lc_inv = field.inv(&r0.lc(field))?;
        Ok((
            r0.scale(field, &lc_inv),
            s0.scale(field, &lc_inv),
            t0.scale(field, &lc_inv),
        ))
    }

    pub fn derivative(&self, field: &F) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let k = field.from_i64(i as i64);
            out.push(field.mul(c, &k));
        }
        Self::from_coeffs(field, out)
    }

    pub fn eval(&self, field: &F, x: &F::Elem) -> F::Elem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    /// self^e mod m.
    pub fn powmod(&self, field: &F, e: &BigUint, m: &Self) -> Result<Self> {
        let mut acc = Self::one(field);
        let mut base = self.rem(field, m)?;
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(field, &base).rem(field, m)?;
            }
            base = base.mul(field, &base).rem(field, m)?;
        }
        if e.is_zero() {
            acc = Self::one(field);
        }
        Ok(acc)
    }

    pub fn to_string_in(&self, field: &F, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = vec![];
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if field.is_zero(c) {
                continue;
            }
            let cs = field.fmt_elem(c);
            let term = match i {
                0 => cs,
                1 if field.is_one(c) => var.to_string(),
                1 => format!("{cs}*{var}"),
                _ if field.is_one(c) => format!("{var}^{i}"),
                _ => format!("{cs}*{var}^{i}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl<F: FiniteField> UniPoly<F> {
    /// x^(q^j) mod m, by repeated q-power maps.
    fn frobenius_power(field: &F, m: &Self, j: u64) -> Result<Self> {
        let q = field.order_big();
        let mut acc = Self::x(field).rem(field, m)?;
        for _ in 0..j {
            acc = acc.powmod(field, &q, m)?;
        }
        Ok(acc)
    }

    /// p-th root of a polynomial with zero derivative: f(x) = g(x^p) maps to g
    /// with coefficient-wise inverse Frobenius.
    fn pth_root_poly(&self, field: &F) -> Self {
        let p = field.char() as usize;
        let mut out = vec![];
        let mut i = 0;
        while i < self.coeffs.len() {
            out.push(field.pth_root(&self.coeffs[i]));
            i += p;
        }
        Self::from_coeffs(field, out)
    }

    /// Squarefree decomposition: returns pairs (g, m) with f = lc * prod g^m,
    /// each g monic squarefree, pairwise coprime.
    pub fn squarefree_decomposition(&self, field: &F) -> Result<Vec<(Self, usize)>> {
        if self.is_zero() {
            return Err(domain("squarefree decomposition of zero"));
        }
        let f = self.monic(field)?;
        if f.degree() == 0 {
            return Ok(vec![]);
        }
        let mut out: Vec<(Self, usize)> = vec![];
        Self::sqf_rec(field, &f, 1, &mut out)?;
        out.sort_by_key(|(g, m)| (*m, g.degree()));
        Ok(out)
    }

    fn sqf_rec(field: &F, f: &Self, mult: usize, out: &mut Vec<(Self, usize)>) -> Result<()> {
        if f.degree() == 0 {
            return Ok(());
        }
        let fd = f.derivative(field);
        if fd.is_zero() {
            // f = g(x^p)
            let root = f.pth_root_poly(field);
            return Self::sqf_rec(field, &root, mult * field.char() as usize, out);
        }
        let mut c = f.gcd(field, &fd)?;
        let mut w = f.div_exact(field, &c)?;
        // w = product of squarefree factors with multiplicity not divisible by p
        let mut i = 1usize;
        while !w.is_one(field) {
            let y = w.gcd(field, &c)?;
            let fac = w.div_exact(field, &y)?;
            if fac.degree() > 0 {
                out.push((fac, mult * i));
            }
            w = y.clone();
            c = c.div_exact(field, &w)?;
            i += 1;
        }
        if c.degree() > 0 {
            // remaining part is a p-th power
            let root = c.pth_root_poly(field);
            Self::sqf_rec(field, &root, mult * field.char() as usize, out)?;
        }
        Ok(())
    }

    /// Distinct-degree decomposition of a monic squarefree polynomial:
    /// returns (product of irreducibles of degree d, d) pairs.
    fn distinct_degree(&self, field: &F) -> Result<Vec<(Self, usize)>> {
        let mut out = vec![];
        let mut f = self.clone();
        let mut h = Self::x(field).rem(field, &f)?;
        let q = field.order_big();
        let mut d = 0usize;
        while f.degree() >= 1 {
            d += 1;
            if f.degree() < 2 * d {
                // what remains is irreducible
                out.push((f.clone(), f.degree()));
                break;
            }
            h = h.powmod(field, &q, &f)?;
            let hx = h.sub(field, &Self::x(field));
            let g = f.gcd(field, &hx)?;
            if g.degree() > 0 {
                out.push((g.clone(), d));
                f = f.div_exact(field, &g)?;
                h = h.rem(field, &f)?;
            }
        }
        Ok(out)
    }

    /// Equal-degree splitting (Cantor-Zassenhaus): f monic squarefree, all
    /// irreducible factors of degree d.
    fn equal_degree(&self, field: &F, d: usize, rng: &mut Rng) -> Result<Vec<Self>> {
        if self.degree() == d {
            return Ok(vec![self.clone()]);
        }
        let q = field.order_big();
        loop {
            // random polynomial of degree < deg f
            let mut coeffs = vec![];
            for _ in 0..self.degree() {
                coeffs.push(field.random_elem(rng));
            }
            let a = Self::from_coeffs(field, coeffs);
            if a.degree() == 0 || a.is_zero() {
                continue;
            }
            let g0 = self.gcd(field, &a)?;
            let g = if g0.degree() > 0 && g0.degree() < self.degree() {
                g0
            } else if field.char() == 2 {
                // trace map T(a) = a + a^2 + a^4 + ... over F_{2^k}: sum of
                // a^(2^i) for i < k*d
                let k = (field.order_big().bits() - 1) as u64; // order = 2^k
                let mut t = a.rem(field, self)?;
                let mut cur = t.clone();
                for _ in 1..(k * d as u64) {
                    cur = cur.mul(field, &cur).rem(field, self)?;
                    t = t.add(field, &cur);
                }
                self.gcd(field, &t)?
            } else {
                // a^((q^d - 1)/2) - 1
                let e = (q.pow(d as u32) - BigUint::one()) >> 1;
                let b = a.powmod(field, &e, self)?;
                let b1 = b.sub(field, &Self::one(field));
                self.gcd(field, &b1)?
            };
            if g.degree() > 0 && g.degree() < self.degree() {
                let rest = self.div_exact(field, &g)?;
                let mut left = g.equal_degree(field, d, rng)?;
                let mut right = rest.equal_degree(field, d, rng)?;
                left.append(&mut right);
                return Ok(left);
            }
        }
    }

    /// Full factorization: returns (leading coefficient, monic irreducible
    /// factors with multiplicities, sorted for determinism).
    pub fn factor(&self, field: &F, rng: &mut Rng) -> Result<(F::Elem, Vec<(Self, usize)>)> {
        if self.is_zero() {
            return Err(domain("factorization of the zero polynomial"));
        }
        let unit = self.lc(field);
        let mut factors: Vec<(Self, usize)> = vec![];
        for (g, m) in self.squarefree_decomposition(field)? {
            for (h, d) in g.distinct_degree(field)? {
                for irr in h.equal_degree(field, d, rng)? {
                    factors.push((irr, m));
                }
            }
        }
        factors.sort_by(|(a, ma), (b, mb)| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| {
                    for i in (0..=a.degree()).rev() {
                        let x = field.elem_index(&a.coeff(field, i));
                        let y = field.elem_index(&b.coeff(field, i));
                        match x.cmp(&y) {
                            std::cmp::Ordering::Equal => continue,
                            o => return o,
                        }
                    }
                    std::cmp::Ordering::Equal
                })
                .then(ma.cmp(mb))
        });
        Ok((unit, factors))
    }

    pub fn is_irreducible(&self, field: &F) -> Result<bool> {
        if self.degree() == 0 || self.is_zero() {
            return Ok(false);
        }
        if self.degree() == 1 {
            return Ok(true);
        }
        let f = self.monic(field)?;
        // squarefree check
        let fd = f.derivative(field);
        if fd.is_zero() {
            return Ok(false);
        }
        if f.gcd(field, &fd)?.degree() > 0 {
            return Ok(false);
        }
        // f irreducible of degree n iff x^(q^n) = x mod f and
        // gcd(x^(q^(n/l)) - x, f) = 1 for every prime l | n
        let n = f.degree() as u64;
        let frob_n = Self::frobenius_power(field, &f, n)?;
        if frob_n != Self::x(field).rem(field, &f)? {
            return Ok(false);
        }
        let mut m = n;
        let mut primes = vec![];
        let mut l = 2;
        while l * l <= m {
            if m % l == 0 {
                primes.push(l);
                while m % l == 0 {
                    m /= l;
                }
            }
            l += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        for l in primes {
            let h = Self::frobenius_power(field, &f, n / l)?;
            let hx = h.sub(field, &Self::x(field));
            if f.gcd(field, &hx)?.degree() > 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Distinct roots in the base field.
    pub fn roots(&self, field: &F, rng: &mut Rng) -> Result<Vec<F::Elem>> {
        if self.is_zero() {
            return Err(domain("roots of the zero polynomial"));
        }
        if self.degree() == 0 {
            return Ok(vec![]);
        }
        // gcd with x^q - x isolates the subproduct of linear factors
        let f = self.monic(field)?;
        let q = field.order_big();
        let xq = Self::x(field).powmod(field, &q, &f)?;
        let lin = f.gcd(field, &xq.sub(field, &Self::x(field)))?;
        if lin.degree() == 0 {
            return Ok(vec![]);
        }
        let (_, factors) = lin.factor(field, rng)?;
        let mut roots: Vec<F::Elem> = factors
            .into_iter()
            .filter(|(g, _)| g.degree() == 1)
            .map(|(g, _)| field.neg(&g.coeffs[0]))
            .collect();
        roots.sort_by_key(|r| field.elem_index(r));
        roots.dedup();
        Ok(roots)
    }

    /// Number of distinct roots in the base field, without splitting.
    pub fn count_roots(&self, field: &F) -> Result<usize> {
        if self.is_zero() {
            return Err(domain("roots of the zero polynomial"));
        }
        if self.degree() == 0 {
            return Ok(0);
        }
        let f = self.monic(field)?;
        let q = field.order_big();
        let xq = Self::x(field).powmod(field, &q, &f)?;
        let lin = f.gcd(field, &xq.sub(field, &Self::x(field)))?;
        Ok(lin.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeField;

    fn poly(f: &PrimeField, cs: &[i64]) -> UniPoly<PrimeField> {
        UniPoly::from_coeffs(f, cs.iter().map(|c| f.elem(*c)).collect())
    }

    #[test]
    fn factor_x2_plus_1_over_f5() {
        // x^2 + 1 = (x + 2)(x + 3) over F_5, roots 2 and 3
        let f5 = PrimeField::new(5).unwrap();
        let f = poly(&f5, &[1, 0, 1]);
        let mut rng = Rng::new(1);
        let (unit, factors) = f.factor(&f5, &mut rng).unwrap();
        assert_eq!(unit, 1);
        assert_eq!(factors.len(), 2);
        let strs: Vec<_> = factors.iter().map(|(g, _)| g.coeffs.clone()).collect();
        assert!(strs.contains(&vec![2, 1]));
        assert!(strs.contains(&vec![3, 1]));
        assert_eq!(f.roots(&f5, &mut rng).unwrap(), vec![2, 3]);
    }

    #[test]
    fn x2_plus_1_irreducible_over_f3() {
        let f3 = PrimeField::new(3).unwrap();
        let f = poly(&f3, &[1, 0, 1]);
        assert!(f.is_irreducible(&f3).unwrap());
        let mut rng = Rng::new(1);
        let (_, factors) = f.factor(&f3, &mut rng).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.degree(), 2);
    }

    #[test]
    fn x2_minus_1_over_f7() {
        let f7 = PrimeField::new(7).unwrap();
        let f = poly(&f7, &[-1, 0, 1]);
        let mut rng = Rng::new(1);
        let (_, factors) = f.factor(&f7, &mut rng).unwrap();
        let strs: Vec<_> = factors.iter().map(|(g, _)| g.coeffs.clone()).collect();
        assert!(strs.contains(&vec![6, 1])); // x - 1
        assert!(strs.contains(&vec![1, 1])); // x + 1
    }

    #[test]
    fn factor_zero_is_domain_error() {
        let f5 = PrimeField::new(5).unwrap();
        let z = UniPoly::<PrimeField>::zero();
        let mut rng = Rng::new(1);
        assert!(z.factor(&f5, &mut rng).is_err());
    }

    #[test]
    fn refactor_reproduces_input_random() {
        // product of factors (times leading coefficient) equals the input
        let mut rng = Rng::new(99);
        for trial in 0..1000 {
            let p = [2u64, 3, 5, 101, 10007][trial % 5];
            let f = PrimeField::new(p).unwrap();
            let deg = 1 + (rng.below(8) as usize);
            let mut coeffs: Vec<u64> = (0..=deg).map(|_| f.random_elem(&mut rng)).collect();
            if coeffs[deg] == 0 {
                coeffs[deg] = 1;
            }
            let poly = UniPoly::from_coeffs(&f, coeffs);
            if poly.is_zero() {
                continue;
            }
            let (unit, factors) = poly.factor(&f, &mut rng).unwrap();
            let mut acc = UniPoly::constant(&f, unit);
            for (g, m) in &factors {
                for _ in 0..*m {
                    acc = acc.mul(&f, g);
                }
            }
            assert_eq!(acc, poly, "p={p} trial={trial}");
            for (g, _) in &factors {
                assert!(g.is_irreducible(&f).unwrap());
            }
        }
    }

    #[test]
    fn squarefree_decomposition_char_p_powers() {
        // (x+1)^3 * x^2 over F_3 exercises the p-th power path
        let f3 = PrimeField::new(3).unwrap();
        let xp1 = poly(&f3, &[1, 1]);
        let x = poly(&f3, &[0, 1]);
        let mut f = UniPoly::one(&f3);
        for _ in 0..3 {
            f = f.mul(&f3, &xp1);
        }
        f = f.mul(&f3, &x).mul(&f3, &x);
        let dec = f.squarefree_decomposition(&f3).unwrap();
        assert!(dec.contains(&(x.clone(), 2)));
        assert!(dec.contains(&(xp1.clone(), 3)));
    }
}
