//! Integer univariate polynomials: division with remainder, Sylvester
//! resultants with Bezout cofactors, and discriminants.
//!
//! Convention: the resultant is the determinant of the Sylvester matrix with
//! the f-block first (deg g rows of f-coefficients above deg f rows of
//! g-coefficients, columns indexed by x^(df+dg-1) .. x^0). With this sign,
//! Res(x-2, x-5) = -3 and disc(x^2 - 2) = Res(x^2-2, 2x) = -8.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{domain, Result};
use crate::linalg::int_det;

/// Coefficients lowest-first, no trailing zeros.
pub type IntPoly = Vec<BigInt>;

pub fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn deg(p: &IntPoly) -> usize {
    p.len().saturating_sub(1)
}

pub fn is_zero(p: &IntPoly) -> bool {
    p.is_empty()
}

pub fn add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(out)
}

pub fn mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if is_zero(a) || is_zero(b) {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn neg(a: &IntPoly) -> IntPoly {
    a.iter().map(|c| -c).collect()
}

pub fn derivative(a: &IntPoly) -> IntPoly {
    if a.len() <= 1 {
        return vec![];
    }
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

/// Division with remainder by a monic divisor; exact over Z.
pub fn divrem_monic(f: &IntPoly, g: &IntPoly) -> Result<(IntPoly, IntPoly)> {
    if is_zero(g) {
        return Err(domain("division by zero polynomial"));
    }
    if g.last().map(|c| *c != BigInt::from(1)).unwrap_or(true) {
        return Err(domain("divisor must be monic"));
    }
    let dg = deg(g);
    let mut rem = f.clone();
    let mut quot: Vec<BigInt> = vec![];
    if !is_zero(&rem) && deg(&rem) >= dg {
        let qd = deg(&rem) - dg;
        quot = vec![BigInt::zero(); qd + 1];
        for k in (0..=qd).rev() {
            let lead = rem.get(k + dg).cloned().unwrap_or_else(BigInt::zero);
            if lead.is_zero() {
                continue;
            }
            quot[k] = lead.clone();
            for (j, gc) in g.iter().enumerate() {
                rem[k + j] -= &lead * gc;
            }
        }
    }
    Ok((trim(quot), trim(rem)))
}

/// Builds the Sylvester matrix of (f, g), f-rows first.
pub fn sylvester(f: &IntPoly, g: &IntPoly) -> Vec<Vec<BigInt>> {
    let df = deg(f);
    let dg = deg(g);
    let n = df + dg;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    // row i (0 <= i < dg): coefficients of x^(dg-1-i) * f
    for i in 0..dg {
        for (k, c) in f.iter().enumerate() {
            // term c * x^(k + dg - 1 - i) goes to column n-1 - (k + dg-1-i)
            let pow = k + dg - 1 - i;
            m[i][n - 1 - pow] = c.clone();
        }
    }
    for i in 0..df {
        for (k, c) in g.iter().enumerate() {
            let pow = k + df - 1 - i;
            m[dg + i][n - 1 - pow] = c.clone();
        }
    }
    m
}

#[derive(Debug, Clone)]
pub struct ResultantData {
    pub res: BigInt,
    /// Cofactors with a*f + b*g = res, deg a < deg g, deg b < deg f.
    /// Absent when res = 0 (gcd nontrivial, cofactors degenerate).
    pub cofactors: Option<(IntPoly, IntPoly)>,
}

/// Sylvester resultant with Bezout cofactors.
///
/// The cofactor coefficient vector c satisfies c^T S = res * e_{x^0}, so each
/// entry is (up to sign) a maximal minor of S; heights obey the determinant
/// bound used by the height validators.
pub fn resultant_with_cofactors(f: &IntPoly, g: &IntPoly) -> Result<ResultantData> {
    if is_zero(f) || is_zero(g) {
        return Err(domain("resultant of the zero polynomial"));
    }
    let df = deg(f);
    let dg = deg(g);
    if df == 0 && dg == 0 {
        // Res of two constants is 1 (empty Sylvester matrix)
        return Ok(ResultantData { res: BigInt::from(1), cofactors: None });
    }
    if df == 0 {
        // Res(c, g) = c^(deg g)
        let res = num_traits::pow::pow(f[0].clone(), dg);
        return Ok(ResultantData { res, cofactors: None });
    }
    if dg == 0 {
        let res = num_traits::pow::pow(g[0].clone(), df);
        return Ok(ResultantData { res, cofactors: None });
    }
    let s = sylvester(f, g);
    let n = df + dg;
    let res = int_det(&s);
    if res.is_zero() {
        return Ok(ResultantData { res, cofactors: None });
    }
    // Solve c^T S = res * e_last, i.e. S^T c = res * e_last.
    let st: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| s[j][i].clone()).collect())
        .collect();
    let mut rhs = vec![BigInt::zero(); n];
    rhs[n - 1] = res.clone();
    let out = crate::linalg::int_solve_cramer(&st, &rhs);
    let y = out.solution.ok_or_else(|| domain("resultant cofactor system inconsistent"))?;
    // solution satisfies S^T y = den * rhs; rescale: c = y * res / (den * res) ... we
    // need S^T c = res*e, and we have S^T y = den*res*e, so c = y/den. den = ±det(S^T) = ±res.
    let den = out.den;
    let c: Vec<BigInt> = y
        .iter()
        .map(|v| {
            debug_assert!((v % &den).is_zero(), "cofactor division must be exact");
            v / &den
        })
        .collect();
    // first dg entries: coefficients of a (for x^(dg-1) * f down to f)
    let mut a = vec![BigInt::zero(); dg];
    for (i, v) in c.iter().take(dg).enumerate() {
        a[dg - 1 - i] = v.clone();
    }
    let mut b = vec![BigInt::zero(); df];
    for (i, v) in c.iter().skip(dg).enumerate() {
        b[df - 1 - i] = v.clone();
    }
    Ok(ResultantData { res, cofactors: Some((trim(a), trim(b))) })
}

/// disc(f) = Res(f, f').
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    let fd = derivative(f);
    if is_zero(&fd) {
        return Err(domain("discriminant of a constant polynomial"));
    }
    Ok(resultant_with_cofactors(f, &fd)?.res)
}

pub fn eval(f: &IntPoly, x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn from_i64(cs: &[i64]) -> IntPoly {
    trim(cs.iter().map(|c| BigInt::from(*c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_linear_pair() {
        // Res(x-2, x-5) with f-rows-first Sylvester convention
        let f = from_i64(&[-2, 1]);
        let g = from_i64(&[-5, 1]);
        let r = resultant_with_cofactors(&f, &g).unwrap();
        assert_eq!(r.res, BigInt::from(-3));
        let (a, b) = r.cofactors.unwrap();
        let lhs = add(&mul(&a, &f), &mul(&b, &g));
        assert_eq!(lhs, vec![BigInt::from(-3)]);
    }

    #[test]
    fn disc_of_x2_minus_2() {
        let f = from_i64(&[-2, 0, 1]);
        assert_eq!(discriminant(&f).unwrap(), BigInt::from(-8));
    }

    #[test]
    fn resultant_of_equal_polys_is_zero() {
        let f = from_i64(&[0, 1]);
        let r = resultant_with_cofactors(&f, &f).unwrap();
        assert_eq!(r.res, BigInt::zero());
        assert!(r.cofactors.is_none());
    }

    #[test]
    fn cofactor_identity_random() {
        let mut rng = crate::rng::Rng::new(17);
        let mut checked = 0;
        while checked < 100 {
            let df = 1 + rng.below(4) as usize;
            let dg = 1 + rng.below(4) as usize;
            let f: IntPoly = trim((0..=df).map(|_| BigInt::from(rng.range_inclusive(-10, 10))).collect());
            let g: IntPoly = trim((0..=dg).map(|_| BigInt::from(rng.range_inclusive(-10, 10))).collect());
            if is_zero(&f) || is_zero(&g) || deg(&f) == 0 || deg(&g) == 0 {
                continue;
            }
            let r = resultant_with_cofactors(&f, &g).unwrap();
            if let Some((a, b)) = r.cofactors {
                assert!(deg(&a) < deg(&g) || is_zero(&a));
                assert!(deg(&b) < deg(&f) || is_zero(&b));
                let lhs = add(&mul(&a, &f), &mul(&b, &g));
                assert_eq!(lhs, vec![r.res]);
                checked += 1;
            }
        }
    }

    #[test]
    fn divrem_monic_exact() {
        // z^3 mod z^2 - 2 = 2z
        let f = from_i64(&[0, 0, 0, 1]);
        let q = from_i64(&[-2, 0, 1]);
        let (quot, rem) = divrem_monic(&f, &q).unwrap();
        assert_eq!(rem, from_i64(&[0, 2]));
        assert_eq!(add(&mul(&quot, &q), &rem), f);
    }
}
