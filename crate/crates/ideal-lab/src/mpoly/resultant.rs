//! Univariate resultants, Bezout cofactors, and discriminants for integer
//! polynomials given as sparse polynomials, with the height-bound flags from
//! the resultant height corollary.

use num_bigint::BigInt;

use crate::arith::{height_int, ZZ};
use crate::error::{domain, Result};
use crate::intpoly::{self, IntPoly};

use super::{Monomial, SparsePoly};

#[derive(Debug, Clone)]
pub struct ResultantOutcome {
    pub res: BigInt,
    /// a*f + b*g = res with deg a < deg g, deg b < deg f; None when res = 0
    /// (shared factor, degenerate cofactors are rejected).
    pub cofactors: Option<(SparsePoly<ZZ>, SparsePoly<ZZ>)>,
    /// heights of res, a, b within 2d(h + log(2d+1))
    pub bound_ok: bool,
}

fn to_intpoly(f: &SparsePoly<ZZ>) -> Result<IntPoly> {
    if f.nvars != 1 {
        return Err(domain("resultant requires univariate input"));
    }
    let mut out = vec![BigInt::from(0); f.degree() as usize + 1];
    for (m, c) in &f.terms {
        out[m.0[0] as usize] = c.clone();
    }
    Ok(intpoly::trim(out))
}

pub fn from_intpoly(p: &IntPoly) -> SparsePoly<ZZ> {
    let zz = ZZ;
    let mut out = SparsePoly::zero(1);
    for (i, c) in p.iter().enumerate() {
        out.add_term(&zz, Monomial(vec![i as u16]), c.clone());
    }
    out
}

/// Sylvester resultant of two nonzero univariate integer polynomials with
/// Bezout cofactors (f-rows-first sign convention).
pub fn resultant_disc(f: &SparsePoly<ZZ>, g: &SparsePoly<ZZ>) -> Result<ResultantOutcome> {
    if f.is_zero() || g.is_zero() {
        return Err(domain("resultant of the zero polynomial"));
    }
    let fp = to_intpoly(f)?;
    let gp = to_intpoly(g)?;
    let data = intpoly::resultant_with_cofactors(&fp, &gp)?;
    let d = intpoly::deg(&fp).max(intpoly::deg(&gp)) as f64;
    let h = fp
        .iter()
        .chain(gp.iter())
        .map(height_int)
        .max()
        .unwrap_or(0) as f64;
    let bound = (2.0 * d * (h + (2.0 * d + 1.0).log2()) + 1e-9).ceil();
    let mut bound_ok = height_int(&data.res) as f64 <= bound;
    let cofactors = data.cofactors.map(|(a, b)| {
        let ha = a.iter().map(height_int).max().unwrap_or(0) as f64;
        let hb = b.iter().map(height_int).max().unwrap_or(0) as f64;
        if ha > bound || hb > bound {
            bound_ok = false;
        }
        (from_intpoly(&a), from_intpoly(&b))
    });
    Ok(ResultantOutcome { res: data.res, cofactors, bound_ok })
}

/// disc(f) = Res(f, f').
pub fn discriminant(f: &SparsePoly<ZZ>) -> Result<BigInt> {
    let fp = to_intpoly(f)?;
    intpoly::discriminant(&fp)
}

/// Resultant of two multivariate polynomials with respect to one variable:
/// the Sylvester determinant over the remaining ring, computed by Laplace
/// expansion (desk-scale degrees).
pub fn resultant_wrt(
    f: &SparsePoly<ZZ>,
    g: &SparsePoly<ZZ>,
    var: usize,
) -> Result<SparsePoly<ZZ>> {
    let zz = ZZ;
    if f.is_zero() || g.is_zero() {
        return Err(domain("resultant of the zero polynomial"));
    }
    let n = f.nvars;
    let df = f.degree_in(var) as usize;
    let dg = g.degree_in(var) as usize;
    if df == 0 && dg == 0 {
        return Ok(SparsePoly::constant(&zz, n, BigInt::from(1)));
    }
    // coefficient of v^i as a polynomial in all n variables (v-exponent zeroed)
    let coeff_of = |h: &SparsePoly<ZZ>, i: usize| -> SparsePoly<ZZ> {
        let mut out = SparsePoly::zero(n);
        for (m, c) in &h.terms {
            if m.0[var] as usize == i {
                let mut mm = m.0.clone();
                mm[var] = 0;
                out.add_term(&zz, Monomial(mm), c.clone());
            }
        }
        out
    };
    if df == 0 {
        return Ok(f.clone().pow(&zz, dg as u32));
    }
    if dg == 0 {
        return Ok(g.clone().pow(&zz, df as u32));
    }
    let size = df + dg;
    let zero = SparsePoly::zero(n);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for i in 0..dg {
        for k in 0..=df {
            // coefficient of f at v^k sits at column size-1 - (k + dg-1 - i)
            let pow = k + dg - 1 - i;
            mat[i][size - 1 - pow] = coeff_of(f, k);
        }
    }
    for i in 0..df {
        for k in 0..=dg {
            let pow = k + df - 1 - i;
            mat[dg + i][size - 1 - pow] = coeff_of(g, k);
        }
    }
    Ok(crate::mpoly::height::det_poly(&zz, &mat, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_examples() {
        // Res(x-2, x-5) = -3 under the f-rows-first Sylvester convention
        let f = SparsePoly::from_int_terms(1, &[(&[1], 1), (&[0], -2)]);
        let g = SparsePoly::from_int_terms(1, &[(&[1], 1), (&[0], -5)]);
        let out = resultant_disc(&f, &g).unwrap();
        assert_eq!(out.res, BigInt::from(-3));
        assert!(out.bound_ok);
        let (a, b) = out.cofactors.unwrap();
        let zz = ZZ;
        let lhs = a.mul(&zz, &f).add(&zz, &b.mul(&zz, &g));
        assert_eq!(lhs, SparsePoly::from_int_terms(1, &[(&[0], -3)]));
    }

    #[test]
    fn disc_example() {
        // disc(x^2 - 2) = Res(x^2-2, 2x) = -8
        let f = SparsePoly::from_int_terms(1, &[(&[2], 1), (&[0], -2)]);
        assert_eq!(discriminant(&f).unwrap(), BigInt::from(-8));
    }

    #[test]
    fn gcd_case_reports_zero_and_no_cofactors() {
        let x = SparsePoly::from_int_terms(1, &[(&[1], 1)]);
        let out = resultant_disc(&x, &x).unwrap();
        assert_eq!(out.res, BigInt::from(0));
        assert!(out.cofactors.is_none());
    }

    #[test]
    fn zero_input_rejected() {
        let x = SparsePoly::from_int_terms(1, &[(&[1], 1)]);
        let z = SparsePoly::zero(1);
        assert!(resultant_disc(&x, &z).is_err());
    }

    #[test]
    fn random_bounds_hold() {
        let mut rng = crate::rng::Rng::new(31);
        let mut done = 0;
        while done < 200 {
            let df = 1 + rng.below(5) as usize;
            let dg = 1 + rng.below(5) as usize;
            let mk = |rng: &mut crate::rng::Rng, d: usize| {
                let mut cs: Vec<i64> = (0..=d).map(|_| rng.range_inclusive(-50, 50)).collect();
                if cs[d] == 0 {
                    cs[d] = 1;
                }
                let terms: Vec<(Vec<u16>, i64)> = cs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (vec![i as u16], *c))
                    .collect();
                let refs: Vec<(&[u16], i64)> =
                    terms.iter().map(|(m, c)| (m.as_slice(), *c)).collect();
                SparsePoly::from_int_terms(1, &refs)
            };
            let f = mk(&mut rng, df);
            let g = mk(&mut rng, dg);
            let out = resultant_disc(&f, &g).unwrap();
            assert!(out.bound_ok);
            done += 1;
        }
    }
}
