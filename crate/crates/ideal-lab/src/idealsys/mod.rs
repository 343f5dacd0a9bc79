//! Ideal membership as exact linear algebra: the membership matrix M_D, its
//! rank/solve over Q and F_p, generalized Cramer certificates, row-dropped
//! elimination systems, dimension certificates, and the degree-bound
//! calculators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{Domain, PrimeField, ZZ};
use crate::error::{resource, usage, Result};
use crate::linalg;
use crate::mpoly::{monomials_up_to, Monomial, SparsePoly};

/// The linear system M_D(f_1..f_m): rows are monomials of degree <= D + d,
/// columns are (generator, cofactor-monomial) pairs with cofactor degree <= D.
/// Entries are generator coefficients placed by convolution.
#[derive(Debug, Clone)]
pub struct MembershipSystem<D: Domain> {
    pub gens: Vec<SparsePoly<D>>,
    pub cap: u32,
    pub rows: Vec<Monomial>,
    pub cols: Vec<(usize, Monomial)>,
    pub matrix: Vec<Vec<D::Elem>>,
}

impl<D: Domain> MembershipSystem<D> {
    /// Builds M_D. `col_cap` bounds the unknown count (resource error beyond).
    pub fn build(
        domain: &D,
        gens: &[SparsePoly<D>],
        cap: u32,
        col_cap: usize,
    ) -> Result<Self> {
        if gens.is_empty() {
            return Err(usage("at least one generator required"));
        }
        let nvars = gens[0].nvars;
        if gens.iter().any(|g| g.nvars != nvars) {
            return Err(usage("generators must share a variable count"));
        }
        let d = gens.iter().map(|g| g.degree()).max().unwrap_or(0);
        let cof_monos = monomials_up_to(nvars, cap);
        if cof_monos.len() * gens.len() > col_cap {
            return Err(resource(format!(
                "membership system would have {} unknowns (cap {col_cap})",
                cof_monos.len() * gens.len()
            )));
        }
        let rows = monomials_up_to(nvars, cap + d);
        let row_index: std::collections::BTreeMap<&Monomial, usize> =
            rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut cols = vec![];
        let mut matrix = vec![vec![domain.zero(); gens.len() * cof_monos.len()]; rows.len()];
        let mut col = 0usize;
        for (gi, g) in gens.iter().enumerate() {
            for mu in &cof_monos {
                for (nu, c) in &g.terms {
                    let prod = nu.mul(mu);
                    let ri = row_index[&prod];
                    matrix[ri][col] = domain.add(&matrix[ri][col], c);
                }
                cols.push((gi, mu.clone()));
                col += 1;
            }
        }
        Ok(MembershipSystem { gens: gens.to_vec(), cap, rows, cols, matrix })
    }

    /// Writes g in the row basis; errors when g has a monomial of degree
    /// beyond D + d.
    pub fn rhs_for(&self, domain: &D, g: &SparsePoly<D>) -> Result<Vec<D::Elem>> {
        let mut rhs = vec![domain.zero(); self.rows.len()];
        let row_index: std::collections::BTreeMap<&Monomial, usize> =
            self.rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
        for (m, c) in &g.terms {
            match row_index.get(m) {
                Some(i) => rhs[*i] = c.clone(),
                None => return Err(usage("target degree exceeds D + d")),
            }
        }
        Ok(rhs)
    }

    /// Reassembles cofactor polynomials h_1..h_m from a solution vector.
    pub fn cofactors_from(&self, domain: &D, sol: &[D::Elem]) -> Vec<SparsePoly<D>> {
        let nvars = self.gens[0].nvars;
        let mut hs = vec![SparsePoly::zero(nvars); self.gens.len()];
        for (j, (gi, mu)) in self.cols.iter().enumerate() {
            if !domain.is_zero(&sol[j]) {
                hs[*gi].add_term(domain, mu.clone(), sol[j].clone());
            }
        }
        hs
    }
}

impl MembershipSystem<ZZ> {
    /// Sparse triplet rendering for debugging: `row col value` lines after a
    /// header naming the shape, with rows and columns labeled by their
    /// monomials.
    pub fn to_triplet_text(&self) -> String {
        let zz = ZZ;
        let mono = |m: &Monomial| {
            let parts: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            }
        };
        let mut out = format!(
            "membership-matrix {} x {} cap {}
",
            self.rows.len(),
            self.cols.len(),
            self.cap
        );
        for (j, (gi, mu)) in self.cols.iter().enumerate() {
            out.push_str(&format!("col {j} f{} * {}
", gi + 1, mono(mu)));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !zz.is_zero(v) {
                    out.push_str(&format!("{i} {j} {v}
"));
                }
            }
        }
        out
    }
}

/// A membership certificate over Q in cleared form:
/// sum_i f_i h_i = den * g with integer cofactors and den > 0.
#[derive(Debug, Clone)]
pub struct MembershipCertificate {
    pub cofactors: Vec<SparsePoly<ZZ>>,
    pub den: BigInt,
}

fn verify_membership(
    gens: &[SparsePoly<ZZ>],
    g: &SparsePoly<ZZ>,
    cert: &MembershipCertificate,
) -> bool {
    let zz = ZZ;
    let mut acc = SparsePoly::zero(g.nvars);
    for (f, h) in gens.iter().zip(&cert.cofactors) {
        acc = acc.add(&zz, &f.mul(&zz, h));
    }
    acc == g.scale(&zz, &cert.den)
}

/// Ideal membership over Q at cofactor-degree cap D. Returns a verified
/// Cramer-form certificate, or None when no solution exists at this cap
/// (absence is not a proof of non-membership).
pub fn member(
    gens: &[SparsePoly<ZZ>],
    g: &SparsePoly<ZZ>,
    cap: u32,
    col_cap: usize,
) -> Result<Option<MembershipCertificate>> {
    let zz = ZZ;
    let sys = MembershipSystem::build(&zz, gens, cap, col_cap)?;
    let rhs = match sys.rhs_for(&zz, g) {
        Ok(r) => r,
        Err(_) => return Ok(None),
    };
    let out = linalg::int_solve_cramer(&sys.matrix, &rhs);
    if !out.consistent {
        return Ok(None);
    }
    let mut den = out.den.clone();
    let mut sol = out.solution.expect("consistent system has a solution");
    if den.is_negative() {
        den = -den;
        for v in sol.iter_mut() {
            *v = -v.clone();
        }
    }
    if den.is_zero() {
        // zero rank with nonzero rhs cannot be consistent; zero rhs means g = 0
        den = BigInt::one();
    }
    let cert = MembershipCertificate { cofactors: sys.cofactors_from(&zz, &sol), den };
    debug_assert!(verify_membership(gens, g, &cert));
    if !verify_membership(gens, g, &cert) {
        return Err(usage("internal: certificate failed verification"));
    }
    Ok(Some(cert))
}

/// Ideal membership over F_p at cap D; field certificates have no denominator.
pub fn member_fp(
    field: &PrimeField,
    gens: &[SparsePoly<PrimeField>],
    g: &SparsePoly<PrimeField>,
    cap: u32,
    col_cap: usize,
) -> Result<Option<Vec<SparsePoly<PrimeField>>>> {
    let sys = MembershipSystem::build(field, gens, cap, col_cap)?;
    let rhs = match sys.rhs_for(field, g) {
        Ok(r) => r,
        Err(_) => return Ok(None),
    };
    let out = linalg::field_solve(field, &sys.matrix, &rhs);
    if !out.consistent {
        return Ok(None);
    }
    let sol = out.solution.expect("consistent");
    let hs = sys.cofactors_from(field, &sol);
    let mut acc = SparsePoly::zero(g.nvars);
    for (f, h) in gens.iter().zip(&hs) {
        acc = acc.add(field, &f.mul(field, h));
    }
    debug_assert_eq!(&acc, g);
    Ok(Some(hs))
}

/// An elimination witness: f' = (sum f_i h_i) / den lies in the ideal, is
/// supported on U, and has the requested leading monomial.
#[derive(Debug, Clone)]
pub struct ElimWitness {
    pub poly: SparsePoly<ZZ>,
    pub cofactors: Vec<SparsePoly<ZZ>>,
    pub den: BigInt,
}

fn kept_rows(rows: &[Monomial], u_vars: &[usize], target: &Monomial) -> Vec<usize> {
    rows.iter()
        .enumerate()
        .filter(|(_, m)| !(m.supported_on(u_vars) && *m < target))
        .map(|(i, _)| i)
        .collect()
}

/// Decides whether the ideal contains an element supported on `u_vars` with
/// leading monomial `target`, using cofactors of degree <= cap. Implements
/// the row-dropping construction: rows for U-monomials smaller than the
/// target (graded lex) are removed and the system M'v = e_target is solved.
pub fn elimination_witness(
    gens: &[SparsePoly<ZZ>],
    u_vars: &[usize],
    cap: u32,
    target: &Monomial,
    col_cap: usize,
) -> Result<Option<ElimWitness>> {
    if !target.supported_on(u_vars) {
        return Err(usage("target monomial must be supported on U"));
    }
    let zz = ZZ;
    let sys = MembershipSystem::build(&zz, gens, cap, col_cap)?;
    let Some(target_row) = sys.rows.iter().position(|m| m == target) else {
        return Ok(None);
    };
    let kept = kept_rows(&sys.rows, u_vars, target);
    let sub: Vec<Vec<BigInt>> = kept.iter().map(|&i| sys.matrix[i].clone()).collect();
    let rhs: Vec<BigInt> = kept
        .iter()
        .map(|&i| if i == target_row { BigInt::one() } else { BigInt::zero() })
        .collect();
    let out = linalg::int_solve_cramer(&sub, &rhs);
    if !out.consistent {
        return Ok(None);
    }
    let mut den = out.den.clone();
    let mut sol = out.solution.expect("consistent");
    if den.is_negative() {
        den = -den;
        for v in sol.iter_mut() {
            *v = -v.clone();
        }
    }
    let cofactors = sys.cofactors_from(&zz, &sol);
    let mut poly = SparsePoly::zero(gens[0].nvars);
    for (f, h) in gens.iter().zip(&cofactors) {
        poly = poly.add(&zz, &f.mul(&zz, h));
    }
    // soundness checks: supported on U, leading monomial = target
    if !poly.supported_on(u_vars) || poly.leading_monomial() != Some(target) {
        return Err(usage("internal: elimination witness malformed"));
    }
    Ok(Some(ElimWitness { poly, cofactors, den }))
}

/// F_p variant of `elimination_witness`.
pub fn elimination_witness_fp(
    field: &PrimeField,
    gens: &[SparsePoly<PrimeField>],
    u_vars: &[usize],
    cap: u32,
    target: &Monomial,
    col_cap: usize,
) -> Result<Option<SparsePoly<PrimeField>>> {
    if !target.supported_on(u_vars) {
        return Err(usage("target monomial must be supported on U"));
    }
    let sys = MembershipSystem::build(field, gens, cap, col_cap)?;
    let Some(target_row) = sys.rows.iter().position(|m| m == target) else {
        return Ok(None);
    };
    let kept = kept_rows(&sys.rows, u_vars, target);
    let sub: Vec<Vec<u64>> = kept.iter().map(|&i| sys.matrix[i].clone()).collect();
    let rhs: Vec<u64> = kept
        .iter()
        .map(|&i| if i == target_row { 1 } else { 0 })
        .collect();
    let out = linalg::field_solve(field, &sub, &rhs);
    if !out.consistent {
        return Ok(None);
    }
    let hs = sys.cofactors_from(field, &out.solution.expect("consistent"));
    let mut poly = SparsePoly::zero(gens[0].nvars);
    for (f, h) in gens.iter().zip(&hs) {
        poly = poly.add(field, &f.mul(field, h));
    }
    Ok(Some(poly))
}

/// Dimension of (ideal-at-cap intersect span of U-supported monomials): 0
/// means the elimination ideal looks zero at this cap.
fn elim_intersection_dim_int(sys: &MembershipSystem<ZZ>, u_vars: &[usize]) -> usize {
    let u_rows: Vec<usize> = sys
        .rows
        .iter()
        .enumerate()
        .filter(|(_, m)| m.supported_on(u_vars))
        .map(|(i, _)| i)
        .collect();
    let e: Vec<Vec<BigInt>> = sys
        .rows
        .iter()
        .enumerate()
        .map(|(i, _)| {
            u_rows
                .iter()
                .map(|&r| if r == i { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    linalg::int_column_space_intersection_dim(&sys.matrix, &e)
}

fn elim_intersection_dim_fp(
    field: &PrimeField,
    sys: &MembershipSystem<PrimeField>,
    u_vars: &[usize],
) -> usize {
    let u_rows: Vec<usize> = sys
        .rows
        .iter()
        .enumerate()
        .filter(|(_, m)| m.supported_on(u_vars))
        .map(|(i, _)| i)
        .collect();
    let e: Vec<Vec<u64>> = sys
        .rows
        .iter()
        .enumerate()
        .map(|(i, _)| u_rows.iter().map(|&r| u64::from(r == i)).collect())
        .collect();
    let ra = linalg::field_rank(field, &sys.matrix);
    let rb = u_rows.len();
    let joined: Vec<Vec<u64>> = sys
        .matrix
        .iter()
        .zip(&e)
        .map(|(x, y)| {
            let mut r = x.clone();
            r.extend(y.iter().cloned());
            r
        })
        .collect();
    ra + rb - linalg::field_rank(field, &joined)
}

/// Evidence for `dim >= r`: a size-r variable subset whose elimination ideal
/// is zero at the cap. Heuristic at desk caps: larger caps could reveal a
/// witness, so this is evidence, not proof.
#[derive(Debug, Clone)]
pub struct LowerDimEvidence {
    pub free_subset: Vec<usize>,
    pub cap: u32,
}

/// Evidence for `dim <= r`: a verified elimination witness for every
/// variable subset of size r+1. Witnesses are sound certificates.
#[derive(Debug, Clone)]
pub struct UpperDimEvidence {
    pub witnesses: Vec<(Vec<usize>, SparsePoly<ZZ>)>,
}

#[derive(Debug, Clone)]
pub struct DimCertificate {
    pub r: usize,
    pub lower: Option<LowerDimEvidence>,
    pub upper: Option<UpperDimEvidence>,
}

impl DimCertificate {
    pub fn conclusive_equal(&self) -> bool {
        self.lower.is_some() && self.upper.is_some()
    }
    pub fn inconclusive(&self) -> bool {
        self.lower.is_none() && self.upper.is_none()
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, start: usize, n: usize, k: usize) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(out, cur, i + 1, n, k);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, 0, n, k);
    out
}

/// Searches for any elimination witness over U by scanning target leading
/// monomials in increasing graded-lex order.
pub fn find_elimination_element(
    gens: &[SparsePoly<ZZ>],
    u_vars: &[usize],
    cap: u32,
    col_cap: usize,
) -> Result<Option<ElimWitness>> {
    let zz = ZZ;
    let sys = MembershipSystem::build(&zz, gens, cap, col_cap)?;
    if elim_intersection_dim_int(&sys, u_vars) == 0 {
        return Ok(None);
    }
    let d = gens.iter().map(|g| g.degree()).max().unwrap_or(0);
    for target in monomials_up_to(gens[0].nvars, cap + d) {
        if !target.supported_on(u_vars) {
            continue;
        }
        if let Some(w) = elimination_witness(gens, u_vars, cap, &target, col_cap)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Dimension certificate via eliminations over all subsets of sizes r and
/// r+1 at cofactor cap D.
pub fn dim_certificate(
    gens: &[SparsePoly<ZZ>],
    r: usize,
    cap: u32,
    col_cap: usize,
) -> Result<DimCertificate> {
    let zz = ZZ;
    let n = gens.first().map(|g| g.nvars).unwrap_or(0);
    if r > n {
        return Err(usage("r exceeds the variable count"));
    }
    let sys = MembershipSystem::build(&zz, gens, cap, col_cap)?;
    let lower = subsets(n, r)
        .into_iter()
        .find(|u| elim_intersection_dim_int(&sys, u) == 0)
        .map(|u| LowerDimEvidence { free_subset: u, cap });
    let mut upper_wits = vec![];
    let mut upper_ok = true;
    for u in subsets(n, r + 1) {
        match find_elimination_element(gens, &u, cap, col_cap)? {
            Some(w) => upper_wits.push((u, w.poly)),
            None => {
                upper_ok = false;
                break;
            }
        }
    }
    let upper = if upper_ok {
        Some(UpperDimEvidence { witnesses: upper_wits })
    } else {
        None
    };
    Ok(DimCertificate { r, lower, upper })
}

/// F_p dimension certificate (used by the per-prime base-change scans).
pub fn dim_certificate_fp(
    field: &PrimeField,
    gens: &[SparsePoly<PrimeField>],
    r: usize,
    cap: u32,
    col_cap: usize,
) -> Result<DimCertificate> {
    let n = gens.first().map(|g| g.nvars).unwrap_or(0);
    if r > n {
        return Err(usage("r exceeds the variable count"));
    }
    let sys = MembershipSystem::build(field, gens, cap, col_cap)?;
    let lower = subsets(n, r)
        .into_iter()
        .find(|u| elim_intersection_dim_fp(field, &sys, u) == 0)
        .map(|u| LowerDimEvidence { free_subset: u, cap });
    let d = gens.iter().map(|g| g.degree()).max().unwrap_or(0);
    let mut upper_wits = vec![];
    let mut upper_ok = true;
    for u in subsets(n, r + 1) {
        if elim_intersection_dim_fp(field, &sys, &u) == 0 {
            upper_ok = false;
            break;
        }
        // extract one witness for the record
        let mut found = None;
        for target in monomials_up_to(n, cap + d) {
            if !target.supported_on(&u) {
                continue;
            }
            if let Some(w) =
                elimination_witness_fp(field, gens, &u, cap, &target, col_cap)?
            {
                found = Some(w);
                break;
            }
        }
        match found {
            Some(w) => {
                // record the witness support pattern as an integer poly of residues
                let zz = ZZ;
                let wi = w.map_domain(&zz, |c| BigInt::from(*c));
                upper_wits.push((u, wi));
            }
            None => {
                upper_ok = false;
                break;
            }
        }
    }
    let upper = if upper_ok {
        Some(UpperDimEvidence { witnesses: upper_wits })
    } else {
        None
    };
    Ok(DimCertificate { r, lower, upper })
}

/// Degree-bound calculators: the effective-Nullstellensatz cofactor degree N,
/// the dimension-dependent Groebner degree bound B, and the Bezout cap.
#[derive(Debug, Clone)]
pub struct BoundContext {
    /// d_1 >= ... >= d_m
    pub degrees: Vec<u32>,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub jelonek_n: BigInt,
    /// exact rational; integral for the common parameter shapes
    pub mayr_ritscher_b: BigRational,
    pub bezout_cap: BigInt,
}

pub fn bound_calculators(degrees: &[u32], n: usize, r: usize) -> Result<BoundContext> {
    if degrees.is_empty() {
        return Err(usage("at least one generator degree required"));
    }
    if n == 0 {
        return Err(usage("n must be positive"));
    }
    if r > n {
        return Err(usage("r exceeds n"));
    }
    let mut ds = degrees.to_vec();
    ds.sort_unstable_by(|a, b| b.cmp(a));
    let m = ds.len();
    let big = |v: u32| BigInt::from(v);
    let jelonek_n = if n == 1 {
        big(ds[0])
    } else if n >= m {
        ds.iter().map(|d| big(*d)).product()
    } else {
        // m > n > 1: d_m * prod_{i=1}^{n-1} d_i
        let mut acc = big(ds[m - 1]);
        for d in ds.iter().take(n - 1) {
            acc *= big(*d);
        }
        acc
    };
    // B = 2 * ( (1/2) ((d_1 ... d_{n-r})^{2(n-r)} + d_1) )^{2^r}
    let prod: BigInt = ds.iter().take(n - r).map(|d| big(*d)).product();
    let inner_pow = num_traits::pow::pow(prod, 2 * (n - r));
    let half = BigRational::new(inner_pow + big(ds[0]), BigInt::from(2));
    let exp = 1usize << r.min(32);
    let mayr_ritscher_b = BigRational::from_integer(BigInt::from(2))
        * num_traits::pow::pow(half, exp);
    let bezout_cap = num_traits::pow::pow(big(ds[0]), m.min(n));
    Ok(BoundContext { degrees: ds, n, m, r, jelonek_n, mayr_ritscher_b, bezout_cap })
}

/// Default cofactor-degree cap: the dimension-dependent representation
/// bound when it is small enough, otherwise the user's desk cap (bounds are
/// astronomically large in general; certificates found below them remain
/// sound, only absence weakens to "inconclusive").
pub fn default_membership_cap(degrees: &[u32], n: usize, r: usize, user_cap: u32) -> Result<u32> {
    let b = bound_calculators(degrees, n, r)?;
    let ceil = b.mayr_ritscher_b.ceil();
    let as_int = ceil.to_integer();
    if as_int <= BigInt::from(user_cap) && as_int > BigInt::from(0) {
        use num_traits::ToPrimitive;
        Ok(as_int.to_u32().unwrap_or(user_cap))
    } else {
        Ok(user_cap)
    }
}
