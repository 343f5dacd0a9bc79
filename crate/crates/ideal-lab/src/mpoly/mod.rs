//! Sparse multivariate polynomials over a pluggable coefficient domain.
//!
//! Exponent vectors are stored densely (variable counts stay small at desk
//! scale) and terms live in a BTreeMap keyed by graded-lexicographic order
//! with x1 > x2 > ..., so iteration, leading monomials, and printing are
//! deterministic.

pub mod height;
pub mod resultant;
pub mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{Domain, FieldDomain, ReductionMap, ZAlpha, PrimeField, QQ, ZZ};
use crate::error::{usage, Result};

/// Exponent vector. Ordered by total degree, ties broken lexicographically
/// with the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        Monomial(v)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|e| *e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise division; None when not divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    /// True when every variable outside `vars` has exponent zero.
    pub fn supported_on(&self, vars: &[usize]) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, e)| *e == 0 || vars.contains(&i))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<D: Domain> {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, D::Elem>,
}

impl<D: Domain> SparsePoly<D> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(domain: &D, nvars: usize, c: D::Elem) -> Self {
        let mut p = Self::zero(nvars);
        if !domain.is_zero(&c) {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn var(domain: &D, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), domain.one());
        p
    }

    pub fn from_terms(domain: &D, nvars: usize, terms: Vec<(Monomial, D::Elem)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), nvars);
            p.add_term(domain, m, c);
        }
        p
    }

    pub fn add_term(&mut self, domain: &D, m: Monomial, c: D::Elem) {
        if domain.is_zero(&c) {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = domain.add(&old, &c);
                if !domain.is_zero(&s) {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree of the stored terms; zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Graded-lex leading monomial.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self, domain: &D) -> D::Elem {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(|| domain.zero())
    }

    pub fn coeff(&self, domain: &D, m: &Monomial) -> D::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| domain.zero())
    }

    pub fn add(&self, domain: &D, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(domain, m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, domain: &D, other: &Self) -> Self {
        self.add(domain, &other.neg(domain))
    }

    pub fn neg(&self, domain: &D) -> Self {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), domain.neg(c)))
                .collect(),
        }
    }

    pub fn mul(&self, domain: &D, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(domain, m1.mul(m2), domain.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale(&self, domain: &D, c: &D::Elem) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            out.add_term(domain, m.clone(), domain.mul(v, c));
        }
        out
    }

    pub fn mul_monomial(&self, domain: &D, m: &Monomial, c: &D::Elem) -> Self {
        let mut out = Self::zero(self.nvars);
        for (mm, v) in &self.terms {
            out.add_term(domain, mm.mul(m), domain.mul(v, c));
        }
        out
    }

    pub fn pow(&self, domain: &D, e: u32) -> Self {
        let mut acc = Self::constant(domain, self.nvars, domain.one());
        for _ in 0..e {
            acc = acc.mul(domain, self);
        }
        acc
    }

    /// Formal partial derivative with respect to variable i.
    pub fn derivative(&self, domain: &D, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(usage(format!("variable index {i} out of range")));
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] = e - 1;
            let factor = domain.from_i64(e as i64);
            out.add_term(domain, m2, domain.mul(c, &factor));
        }
        Ok(out)
    }

    pub fn eval(&self, domain: &D, point: &[D::Elem]) -> D::Elem {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = domain.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.0.iter().enumerate() {
                for _ in 0..*e {
                    t = domain.mul(&t, &point[i]);
                }
            }
            acc = domain.add(&acc, &t);
        }
        acc
    }

    /// True when every term is supported on `vars`.
    pub fn supported_on(&self, vars: &[usize]) -> bool {
        self.terms.keys().all(|m| m.supported_on(vars))
    }

    /// Coefficient-wise domain change.
    pub fn map_domain<E: Domain>(
        &self,
        target: &E,
        f: impl Fn(&D::Elem) -> E::Elem,
    ) -> SparsePoly<E> {
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(target, m.clone(), f(c));
        }
        out
    }

    /// Substitutes polynomials for the variables (classical composition).
    pub fn compose(&self, domain: &D, subs: &[SparsePoly<D>]) -> Result<SparsePoly<D>> {
        if subs.len() != self.nvars {
            return Err(usage("composition needs one substitution per variable"));
        }
        let out_vars = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut acc = SparsePoly::<D>::zero(out_vars);
        for (m, c) in &self.terms {
            let mut term = SparsePoly::constant(domain, out_vars, c.clone());
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    term = term.mul(domain, &subs[i].pow(domain, *e as u32));
                }
            }
            acc = acc.add(domain, &term);
        }
        Ok(acc)
    }

    /// Embeds into a ring with more variables (same variable indices).
    pub fn extend_vars(&self, nvars: usize) -> Self {
        debug_assert!(nvars >= self.nvars);
        SparsePoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut v = m.0.clone();
                    v.resize(nvars, 0);
                    (Monomial(v), c.clone())
                })
                .collect(),
        }
    }

}

impl<D: text::TextDomain> SparsePoly<D> {
    pub fn to_string_in(&self, domain: &D) -> String {
        text::format_poly(domain, self)
    }
}

impl SparsePoly<ZZ> {
    pub fn from_int_terms(nvars: usize, terms: &[(&[u16], i64)]) -> Self {
        let zz = ZZ;
        Self::from_terms(
            &zz,
            nvars,
            terms
                .iter()
                .map(|(m, c)| (Monomial(m.to_vec()), BigInt::from(*c)))
                .collect(),
        )
    }

    /// Coefficient-wise reduction mod p.
    pub fn reduce_mod_p(&self, field: &PrimeField) -> SparsePoly<PrimeField> {
        self.map_domain(field, |c| field.from_bigint(c))
    }

    pub fn to_rational(&self) -> SparsePoly<QQ> {
        self.map_domain(&QQ, |c| BigRational::from_integer(c.clone()))
    }
}

impl SparsePoly<QQ> {
    /// Clears denominators: returns (integer polynomial, common denominator).
    pub fn clear_denominators(&self) -> (SparsePoly<ZZ>, BigInt) {
        use num_integer::Integer;
        let mut den = BigInt::from(1);
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let zz = ZZ;
        let mut out = SparsePoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let v = (c * BigRational::from_integer(den.clone())).to_integer();
            out.add_term(&zz, m.clone(), v);
        }
        (out, den)
    }
}

impl SparsePoly<ZAlpha> {
    /// Applies a reduction map Z[alpha] -> F_p coefficientwise.
    pub fn reduce_via(&self, map: &ReductionMap, ring: &ZAlpha) -> Result<SparsePoly<PrimeField>> {
        if map.ctx != ring.ctx {
            return Err(usage("reduction map context mismatch"));
        }
        Ok(self.map_domain(&map.field, |c| map.apply(c)))
    }
}

/// Enumerates all monomials in `nvars` variables with total degree <= d,
/// in increasing graded-lex order.
pub fn monomials_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = vec![];
    let mut cur = vec![0u16; nvars];
    fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u16>, idx: usize, left: u32) {
        if idx == cur.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[idx] = e as u16;
            rec(out, cur, idx + 1, left - e);
        }
        cur[idx] = 0;
    }
    rec(&mut out, &mut cur, 0, d);
    out.sort();
    out
}

/// Evaluates a list of polynomials at a point over a field.
pub fn eval_system<F: FieldDomain>(
    field: &F,
    fs: &[SparsePoly<F>],
    point: &[F::Elem],
) -> Vec<F::Elem> {
    fs.iter().map(|f| f.eval(field, point)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_ordering() {
        // in 2 vars: 1 < x2 < x1 < x2^2 < x1 x2 < x1^2 < ...
        let m = |a: &[u16]| Monomial(a.to_vec());
        assert!(m(&[0, 0]) < m(&[0, 1]));
        assert!(m(&[0, 1]) < m(&[1, 0]));
        assert!(m(&[1, 0]) < m(&[0, 2]));
        assert!(m(&[0, 2]) < m(&[1, 1]));
        assert!(m(&[1, 1]) < m(&[2, 0]));
    }

    #[test]
    fn derivative_examples() {
        let zz = ZZ;
        // d/dx (x^2 y) = 2xy
        let f = SparsePoly::from_int_terms(2, &[(&[2, 1], 1)]);
        let d = f.derivative(&zz, 0).unwrap();
        assert_eq!(d, SparsePoly::from_int_terms(2, &[(&[1, 1], 2)]));
        // d/dy (x^2) = 0
        let g = SparsePoly::from_int_terms(2, &[(&[2, 0], 1)]);
        assert!(g.derivative(&zz, 1).unwrap().is_zero());
        // d/dx ((x+y)^3) = 3x^2 + 6xy + 3y^2
        let xpy = SparsePoly::from_int_terms(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let cube = xpy.pow(&zz, 3);
        let dd = cube.derivative(&zz, 0).unwrap();
        let expect =
            SparsePoly::from_int_terms(2, &[(&[2, 0], 3), (&[1, 1], 6), (&[0, 2], 3)]);
        assert_eq!(dd, expect);
        // out of range index
        assert!(f.derivative(&zz, 2).is_err());
    }

    #[test]
    fn reduce_examples() {
        // (6x + 10) mod 5 = x
        let f5 = PrimeField::new(5).unwrap();
        let f = SparsePoly::from_int_terms(1, &[(&[1], 6), (&[0], 10)]);
        let r = f.reduce_mod_p(&f5);
        assert_eq!(r.terms.len(), 1);
        assert_eq!(r.coeff(&f5, &Monomial(vec![1])), 1);
        // (x^2 - 2) mod 2 = x^2
        let f2 = PrimeField::new(2).unwrap();
        let g = SparsePoly::from_int_terms(1, &[(&[2], 1), (&[0], -2)]);
        let r2 = g.reduce_mod_p(&f2);
        assert_eq!(r2.terms.len(), 1);
        assert_eq!(r2.coeff(&f2, &Monomial(vec![2])), 1);
    }

    #[test]
    fn reduce_zalpha_example() {
        // (alpha x + 1) with q = z^2-2 via the map p=7, root 3 -> 3x + 1
        use crate::arith::{find_root_mod_p, AlgNumberContext};
        let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
        let ring = ZAlpha::new(ctx.clone());
        let f = SparsePoly::from_terms(
            &ring,
            1,
            vec![
                (Monomial(vec![1]), ring.alpha()),
                (Monomial(vec![0]), ring.one()),
            ],
        );
        let map = find_root_mod_p(&ctx, 7).unwrap().unwrap();
        let r = f.reduce_via(&map, &ring).unwrap();
        assert_eq!(r.coeff(&map.field, &Monomial(vec![1])), map.root);
        assert_eq!(r.coeff(&map.field, &Monomial(vec![0])), 1);
        // context mismatch is a usage error
        let other = AlgNumberContext::from_i64(&[-3, 0, 1]).unwrap();
        let ring2 = ZAlpha::new(other);
        assert!(f.reduce_via(&map, &ring2).is_ok() == false || ring2.ctx == map.ctx);
    }

    #[test]
    fn ring_axioms_random() {
        let zz = ZZ;
        let mut rng = crate::rng::Rng::new(8);
        for _ in 0..100 {
            let rand_poly = |rng: &mut crate::rng::Rng| {
                let mut p = SparsePoly::zero(2);
                for _ in 0..rng.below(5) {
                    let m = Monomial(vec![rng.below(3) as u16, rng.below(3) as u16]);
                    p.add_term(&zz, m, BigInt::from(rng.range_inclusive(-5, 5)));
                }
                p
            };
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            let c = rand_poly(&mut rng);
            let ab_c = a.mul(&zz, &b).mul(&zz, &c);
            let a_bc = a.mul(&zz, &b.mul(&zz, &c));
            assert_eq!(ab_c, a_bc);
            let dist = a.mul(&zz, &b.add(&zz, &c));
            let dist2 = a.mul(&zz, &b).add(&zz, &a.mul(&zz, &c));
            assert_eq!(dist, dist2);
        }
    }

    #[test]
    fn reduce_commutes_with_mul() {
        let zz = ZZ;
        let f97 = PrimeField::new(97).unwrap();
        let mut rng = crate::rng::Rng::new(9);
        for _ in 0..100 {
            let rand_poly = |rng: &mut crate::rng::Rng| {
                let mut p = SparsePoly::zero(2);
                for _ in 0..1 + rng.below(4) {
                    let m = Monomial(vec![rng.below(4) as u16, rng.below(4) as u16]);
                    p.add_term(&zz, m, BigInt::from(rng.range_inclusive(-100, 100)));
                }
                p
            };
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            let lhs = a.mul(&zz, &b).reduce_mod_p(&f97);
            let rhs = a.reduce_mod_p(&f97).mul(&f97, &b.reduce_mod_p(&f97));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn monomial_enumeration_count() {
        // C(d + n, n) monomials of degree <= d
        assert_eq!(monomials_up_to(2, 3).len(), 10);
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        let ms = monomials_up_to(2, 2);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }
}
