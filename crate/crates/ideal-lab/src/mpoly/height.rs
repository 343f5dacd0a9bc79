//! Logarithmic heights of polynomials and the height-growth validators.
//!
//! Each `*_with_bound_check` routine computes its result exactly and reports
//! whether the corresponding height inequality holds; the inequalities are
//! theorems, so a `false` flag indicates a bug and the test suites assert the
//! flags across randomized instances.

use num_bigint::BigInt;

use crate::arith::{AlgNumberContext, Domain, HeightDomain, ZAlpha, ZZ};
use crate::error::{usage, Result};
use crate::intpoly;

use super::{Monomial, SparsePoly};

/// Height and shape summary of a polynomial system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightProfile {
    /// max logarithmic height over the system
    pub h: u64,
    /// max total degree
    pub d: u32,
    /// variable count
    pub n: usize,
    /// polynomial count
    pub m: usize,
    /// sigma = d*m + 2
    pub sigma: u64,
}

impl HeightProfile {
    pub fn of(fs: &[SparsePoly<ZZ>]) -> Self {
        let h = fs.iter().map(height).max().unwrap_or(0);
        let d = fs.iter().map(|f| f.degree()).max().unwrap_or(0);
        let n = fs.first().map(|f| f.nvars).unwrap_or(0);
        let m = fs.len();
        HeightProfile { h, d, n, m, sigma: d as u64 * m as u64 + 2 }
    }
}

/// Max height over the coefficients of an integer polynomial.
pub fn height(f: &SparsePoly<ZZ>) -> u64 {
    let zz = ZZ;
    f.terms.values().map(|c| zz.height(c)).max().unwrap_or(0)
}

/// Height of a Z[alpha] polynomial, written as a polynomial in R[z].
pub fn height_zalpha(ring: &ZAlpha, f: &SparsePoly<ZAlpha>) -> u64 {
    f.terms.values().map(|c| ring.height(c)).max().unwrap_or(0)
}

fn log2(x: f64) -> f64 {
    x.log2()
}

/// Heights are integers (outer ceiling in the definition), so a real-valued
/// bound B on log2(|coeff| + 1) yields the integer bound ceil(B).
fn holds(height: u64, real_bound: f64) -> bool {
    (height as f64) <= (real_bound + 1e-9).ceil()
}

/// Sum with the `h + log(m)` bound.
pub fn sum_with_bound_check(fs: &[SparsePoly<ZZ>]) -> Result<(SparsePoly<ZZ>, bool)> {
    if fs.is_empty() {
        return Err(usage("empty list"));
    }
    let zz = ZZ;
    let h = fs.iter().map(height).max().unwrap_or(0) as f64;
    let m = fs.len() as f64;
    let mut acc = SparsePoly::zero(fs[0].nvars);
    for f in fs {
        acc = acc.add(&zz, f);
    }
    let ok = holds(height(&acc), h + log2(m));
    Ok((acc, ok))
}

/// Product with the `h*m + m*d*log(n+1)` bound.
pub fn mul_with_bound_check(fs: &[SparsePoly<ZZ>]) -> Result<(SparsePoly<ZZ>, bool)> {
    if fs.is_empty() {
        return Err(usage("empty list"));
    }
    let zz = ZZ;
    let h = fs.iter().map(height).max().unwrap_or(0) as f64;
    let d = fs.iter().map(|f| f.degree()).max().unwrap_or(0) as f64;
    let n = fs[0].nvars as f64;
    let m = fs.len() as f64;
    let mut acc = SparsePoly::constant(&zz, fs[0].nvars, BigInt::from(1));
    for f in fs {
        acc = acc.mul(&zz, f);
    }
    let ok = holds(height(&acc), h * m + m * d * log2(n + 1.0));
    Ok((acc, ok))
}

/// Composition g(f_1..f_m) with the
/// `lh(g) + deg(g) * (h + log(m+1) + d*log(n+1))` bound.
pub fn compose_with_bound_check(
    g: &SparsePoly<ZZ>,
    fs: &[SparsePoly<ZZ>],
) -> Result<(SparsePoly<ZZ>, bool)> {
    let zz = ZZ;
    let out = g.compose(&zz, fs)?;
    let h = fs.iter().map(height).max().unwrap_or(0) as f64;
    let d = fs.iter().map(|f| f.degree()).max().unwrap_or(0) as f64;
    let n = fs.first().map(|f| f.nvars).unwrap_or(0) as f64;
    let m = fs.len() as f64;
    let bound = height(g) as f64 + g.degree() as f64 * (h + log2(m + 1.0) + d * log2(n + 1.0));
    let ok = holds(height(&out), bound);
    Ok((out, ok))
}

/// Determinant of a matrix of integer polynomials, with the
/// `m*(h + log(m) + d*log(n+1))` bound.
pub fn det_with_bound_check(mat: &[Vec<SparsePoly<ZZ>>]) -> Result<(SparsePoly<ZZ>, bool)> {
    let m = mat.len();
    if m == 0 || mat.iter().any(|r| r.len() != m) {
        return Err(usage("determinant needs a nonempty square matrix"));
    }
    let zz = ZZ;
    let nvars = mat[0][0].nvars;
    let h = mat
        .iter()
        .flat_map(|r| r.iter())
        .map(height)
        .max()
        .unwrap_or(0) as f64;
    let d = mat
        .iter()
        .flat_map(|r| r.iter())
        .map(|f| f.degree())
        .max()
        .unwrap_or(0) as f64;
    let det = det_poly(&zz, mat, nvars);
    let bound = m as f64 * (h + log2(m as f64) + d * log2(nvars as f64 + 1.0));
    let ok = holds(height(&det), bound);
    Ok((det, ok))
}

/// Laplace-expansion determinant of a small polynomial matrix.
pub fn det_poly<D: Domain>(
    domain: &D,
    mat: &[Vec<SparsePoly<D>>],
    nvars: usize,
) -> SparsePoly<D> {
    let m = mat.len();
    if m == 0 {
        return SparsePoly::constant(domain, nvars, domain.one());
    }
    if m == 1 {
        return mat[0][0].clone();
    }
    let mut acc = SparsePoly::zero(nvars);
    for j in 0..m {
        if mat[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<SparsePoly<D>>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let sub = det_poly(domain, &minor, nvars);
        let term = mat[0][j].mul(domain, &sub);
        if j % 2 == 0 {
            acc = acc.add(domain, &term);
        } else {
            acc = acc.sub(domain, &term);
        }
    }
    acc
}

/// Reduces a polynomial in the x-variables and z (z = last variable) modulo
/// q(z), returning a Z[alpha] polynomial in the x-variables only, plus the
/// `(d+1)(h + 2*log(d+1))` height-bound flag.
pub fn mod_q_normalize(
    f: &SparsePoly<ZZ>,
    ctx: &AlgNumberContext,
) -> Result<(SparsePoly<ZAlpha>, bool)> {
    if f.nvars == 0 {
        return Err(usage("input must have at least the z variable"));
    }
    let zvar = f.nvars - 1;
    let xvars = f.nvars - 1;
    let ring = ZAlpha::new(ctx.clone());
    let dz = f.degree_in(zvar) as usize;
    let h_in = height(f).max(ctx.q().iter().map(crate::arith::height_int).max().unwrap_or(0));

    // regroup terms by x-monomial, collecting a z-polynomial per group
    let mut groups: std::collections::BTreeMap<Monomial, intpoly::IntPoly> =
        std::collections::BTreeMap::new();
    for (m, c) in &f.terms {
        let xm = Monomial(m.0[..xvars].to_vec());
        let ze = m.0[zvar] as usize;
        let entry = groups.entry(xm).or_insert_with(Vec::new);
        if entry.len() <= ze {
            entry.resize(ze + 1, BigInt::from(0));
        }
        entry[ze] += c;
    }
    let mut out = SparsePoly::zero(xvars);
    for (xm, zpoly) in groups {
        let reduced = ctx.reduce_z(&intpoly::trim(zpoly));
        out.add_term(&ring, xm, ring.from_intpoly(&reduced));
    }
    let hf = height_zalpha(&ring, &out);
    // the lemma assumes z-degree d >= e; below that the reduction is identity
    let d = dz.max(ctx.degree()) as f64;
    let ok = holds(hf as u64, (d + 1.0) * (h_in as f64 + 2.0 * log2(d + 1.0)));
    Ok((out, ok))
}

/// Univariate division with remainder over Z by a monic divisor, with the
/// `(d+1)(h + 2*log(d+1))` bound on quotient and remainder heights.
pub fn divrem_monic_with_bound_check(
    f: &intpoly::IntPoly,
    g: &intpoly::IntPoly,
) -> Result<(intpoly::IntPoly, intpoly::IntPoly, bool)> {
    let (q, r) = intpoly::divrem_monic(f, g)?;
    let d = intpoly::deg(f) as f64;
    let h = f
        .iter()
        .chain(g.iter())
        .map(crate::arith::height_int)
        .max()
        .unwrap_or(0) as f64;
    let bound = (d + 1.0) * (h + 2.0 * log2(d + 1.0));
    let hq = q.iter().map(crate::arith::height_int).max().unwrap_or(0);
    let hr = r.iter().map(crate::arith::height_int).max().unwrap_or(0);
    let ok = holds(hq, bound) && holds(hr, bound);
    Ok((q, r, ok))
}

/// Checks the rational-root height bound `lh(a), lh(b) <= lh(f)*d + 1` for a
/// root a/b (in lowest terms) of f.
pub fn rational_root_bound_holds(f: &intpoly::IntPoly, a: &BigInt, b: &BigInt) -> bool {
    let hf = f.iter().map(crate::arith::height_int).max().unwrap_or(0);
    let d = intpoly::deg(f) as u64;
    let bound = hf * d + 1;
    crate::arith::height_int(a) <= bound && crate::arith::height_int(b) <= bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn height_examples() {
        // 3x^2 y - 5 has height 3
        let f = SparsePoly::from_int_terms(2, &[(&[2, 1], 3), (&[0, 0], -5)]);
        assert_eq!(height(&f), 3);
        assert_eq!(height(&SparsePoly::zero(2)), 0);
        // (x+1)^4 has max coefficient 6: height 3
        let zz = ZZ;
        let xp1 = SparsePoly::from_int_terms(1, &[(&[1], 1), (&[0], 1)]);
        let p4 = xp1.pow(&zz, 4);
        assert_eq!(height(&p4), 3);
    }

    #[test]
    fn mul_bound_examples() {
        // (x+1)(x-1) = x^2 - 1
        let a = SparsePoly::from_int_terms(1, &[(&[1], 1), (&[0], 1)]);
        let b = SparsePoly::from_int_terms(1, &[(&[1], 1), (&[0], -1)]);
        let (prod, ok) = mul_with_bound_check(&[a, b]).unwrap();
        assert!(ok);
        assert_eq!(prod, SparsePoly::from_int_terms(1, &[(&[2], 1), (&[0], -1)]));
        // singleton list is identity
        let c = SparsePoly::from_int_terms(1, &[(&[1], 2), (&[0], 3)]);
        let (same, ok2) = mul_with_bound_check(&[c.clone()]).unwrap();
        assert!(ok2);
        assert_eq!(same, c);
        assert!(mul_with_bound_check(&[]).is_err());
    }

    #[test]
    fn mod_q_examples() {
        // f = z^2 with q = z^2 - 2 -> 2
        let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
        let f = SparsePoly::from_int_terms(1, &[(&[2], 1)]);
        let (r, ok) = mod_q_normalize(&f, &ctx).unwrap();
        assert!(ok);
        let ring = ZAlpha::new(ctx.clone());
        assert_eq!(r, SparsePoly::constant(&ring, 0, ring.from_i64(2)));
        // f = z^3 x -> 2 z x
        let g = SparsePoly::from_int_terms(2, &[(&[1, 3], 1)]);
        let (r2, ok2) = mod_q_normalize(&g, &ctx).unwrap();
        assert!(ok2);
        let expected = SparsePoly::from_terms(
            &ring,
            1,
            vec![(Monomial(vec![1]), {
                let two_z = vec![BigInt::from(0), BigInt::from(2)];
                two_z
            })],
        );
        assert_eq!(r2, expected);
    }

    #[test]
    fn random_height_bounds_hold() {
        let zz = ZZ;
        let mut rng = Rng::new(21);
        let rand_poly = |rng: &mut Rng, nvars: usize, d: u16, h: i64| {
            let mut p = SparsePoly::zero(nvars);
            for _ in 0..1 + rng.below(6) {
                let mut m = vec![0u16; nvars];
                let mut left = d;
                for slot in m.iter_mut() {
                    let e = rng.below(left as u64 + 1) as u16;
                    *slot = e;
                    left -= e;
                }
                p.add_term(&zz, Monomial(m), BigInt::from(rng.range_inclusive(-h, h)));
            }
            p
        };
        for _ in 0..500 {
            let fs: Vec<_> = (0..1 + rng.below(4))
                .map(|_| rand_poly(&mut rng, 2, 3, 255))
                .collect();
            let (_, ok) = sum_with_bound_check(&fs).unwrap();
            assert!(ok);
            let (_, ok) = mul_with_bound_check(&fs).unwrap();
            assert!(ok);
        }
    }

    #[test]
    fn det_bound_small() {
        let x = SparsePoly::from_int_terms(2, &[(&[1, 0], 1)]);
        let y = SparsePoly::from_int_terms(2, &[(&[0, 1], 1)]);
        let one = SparsePoly::from_int_terms(2, &[(&[0, 0], 1)]);
        let (det, ok) = det_with_bound_check(&[
            vec![x.clone(), y.clone()],
            vec![one.clone(), x.clone()],
        ])
        .unwrap();
        assert!(ok);
        // x^2 - y
        let zz = ZZ;
        assert_eq!(det, x.mul(&zz, &x).sub(&zz, &y));
    }
}
