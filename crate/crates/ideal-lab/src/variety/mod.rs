//! Finite-field geometry: exhaustive point counting over F_{p^k}^n,
//! Lang-Weil classification of plane curves, the plane-curve component
//! oracle, Jacobian ranks at points, and random slicing.

pub mod bivar;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

pub use bivar::{plane_components, PlaneComponents, PlaneFactor};

use crate::arith::{Domain, ExtField, FiniteField, PrimeField, UniPoly, ZZ};
use crate::error::{resource, usage, Result};
use crate::linalg;
use crate::mpoly::{Monomial, SparsePoly};
use crate::rng::Rng;

/// Exact point count of a system over F_{p^k}^n.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCount {
    pub p: u64,
    pub k: usize,
    pub n: usize,
    pub count: BigUint,
    /// candidate evaluations spent by the enumeration
    pub budget_used: u64,
}

struct SearchCtx<'a, F: FiniteField> {
    field: &'a F,
    budget: u64,
    used: u64,
    /// lazily built table of squares for the quadratic fast path (F_p only)
    qr_table: Option<Vec<u64>>,
}

impl<'a, F: FiniteField> SearchCtx<'a, F> {
    fn new(field: &'a F, budget: u64) -> Self {
        SearchCtx { field, budget, used: 0, qr_table: None }
    }

    fn spend(&mut self, amount: u64) -> Result<()> {
        self.used = self.used.saturating_add(amount);
        if self.used > self.budget {
            return Err(resource(format!(
                "enumeration budget {} exceeded",
                self.budget
            )));
        }
        Ok(())
    }
}

/// Substitutes `value` for variable 0, producing a polynomial in one fewer
/// variable (indices shift down by one).
fn specialize_first<F: FiniteField>(
    field: &F,
    f: &SparsePoly<F>,
    value: &F::Elem,
) -> SparsePoly<F> {
    let mut out = SparsePoly::zero(f.nvars - 1);
    for (m, c) in &f.terms {
        let e = m.0[0];
        let mut coeff = c.clone();
        for _ in 0..e {
            coeff = field.mul(&coeff, value);
        }
        out.add_term(field, Monomial(m.0[1..].to_vec()), coeff);
    }
    out
}

fn as_unipoly<F: FiniteField>(field: &F, f: &SparsePoly<F>) -> Option<UniPoly<F>> {
    // support in variable 0 only
    if !f.terms.keys().all(|m| m.0[1..].iter().all(|e| *e == 0)) {
        return None;
    }
    let mut coeffs = vec![field.zero(); f.degree_in(0) as usize + 1];
    for (m, c) in &f.terms {
        coeffs[m.0[0] as usize] = c.clone();
    }
    Some(UniPoly::from_coeffs(field, coeffs))
}

/// Distinct roots of the gcd of the univariate constraints, or None when no
/// constraint mentions only the first variable.
fn first_var_roots<F: FiniteField>(
    ctx: &mut SearchCtx<F>,
    fs: &[SparsePoly<F>],
    rng: &mut Rng,
) -> Result<Option<Vec<F::Elem>>> {
    let mut gcd: Option<UniPoly<F>> = None;
    for f in fs {
        if let Some(u) = as_unipoly(ctx.field, f) {
            if u.is_zero() {
                continue;
            }
            gcd = Some(match gcd {
                None => u,
                Some(g) => g.gcd(ctx.field, &u)?,
            });
        }
    }
    match gcd {
        None => Ok(None),
        Some(g) => {
            if g.degree() == 0 {
                return Ok(Some(vec![]));
            }
            ctx.spend(g.degree() as u64 * 8)?;
            Ok(Some(g.roots(ctx.field, rng)?))
        }
    }
}

/// Root count of a univariate over F_p with a quadratic fast path backed by
/// a table of squares.
fn count_univariate_roots_fp(
    ctx: &mut SearchCtx<PrimeField>,
    u: &UniPoly<PrimeField>,
) -> Result<u64> {
    let field = ctx.field;
    let p = field.p();
    if u.is_zero() {
        return Ok(p);
    }
    match u.degree() {
        0 => Ok(0),
        1 => Ok(1),
        2 if p > 2 => {
            let a = u.coeff(field, 2);
            let b = u.coeff(field, 1);
            let c = u.coeff(field, 0);
            // disc = b^2 - 4ac
            let disc = field.sub(
                &field.mul(&b, &b),
                &field.mul(&field.from_i64(4), &field.mul(&a, &c)),
            );
            if ctx.qr_table.is_none() && p <= (1 << 26) {
                let mut table = vec![0u64; p as usize];
                for x in 0..p {
                    let sq = crate::arith::fp::mulmod(x, x, p) as usize;
                    table[sq] = 1;
                }
                ctx.spend(p / 8)?;
                ctx.qr_table = Some(table);
            }
            let is_qr = match &ctx.qr_table {
                Some(t) => t[disc as usize] == 1,
                None => field.sqrt_count(disc) > 0,
            };
            Ok(if disc == 0 {
                1
            } else if is_qr {
                2
            } else {
                0
            })
        }
        _ => {
            ctx.spend(u.degree() as u64 * 4)?;
            Ok(u.count_roots(field)? as u64)
        }
    }
}

fn count_rec<F: FiniteField>(
    ctx: &mut SearchCtx<F>,
    fs: &[SparsePoly<F>],
    remaining: usize,
    rng: &mut Rng,
) -> Result<BigUint>
where
    SearchCtx<'static, PrimeField>: Sized,
{
    let field = ctx.field.clone();
    // drop identically-zero constraints; constants kill the branch
    let mut live: Vec<SparsePoly<F>> = vec![];
    for f in fs {
        if f.is_zero() {
            continue;
        }
        if f.degree() == 0 {
            return Ok(BigUint::zero());
        }
        live.push(f.clone());
    }
    if remaining == 0 {
        return Ok(BigUint::one());
    }
    if live.is_empty() {
        // all remaining variables free
        let q = BigUint::from(field.order());
        return Ok(num_traits::pow::pow(q, remaining));
    }
    if remaining >= 2 && live.iter().all(|f| f.degree() <= 1) {
        // affine system: count = q^(remaining - rank) when consistent
        let mut rows = vec![];
        let mut rhs = vec![];
        for f in &live {
            let mut row = vec![field.zero(); remaining];
            for (i, slot) in row.iter_mut().enumerate() {
                *slot = f.coeff(&field, &Monomial::var(remaining, i));
            }
            rows.push(row);
            rhs.push(field.neg(&f.coeff(&field, &Monomial::one(remaining))));
        }
        ctx.spend((live.len() * remaining) as u64)?;
        let out = linalg::field_solve(&field, &rows, &rhs);
        if !out.consistent {
            return Ok(BigUint::zero());
        }
        let q = BigUint::from(field.order());
        return Ok(num_traits::pow::pow(q, remaining - out.rank));
    }
    if remaining == 1 {
        // intersect root sets of the univariate constraints
        let mut gcd: Option<UniPoly<F>> = None;
        for f in &live {
            let u = as_unipoly(&field, f).expect("one variable left");
            gcd = Some(match gcd {
                None => u,
                Some(g) => g.gcd(&field, &u)?,
            });
        }
        let g = gcd.expect("nonempty live set");
        if g.is_zero() {
            return Ok(BigUint::from(field.order()));
        }
        return Ok(BigUint::from(count_roots_dispatch(ctx, &g)?));
    }
    // univariate constraints on the next variable restrict the enumeration
    let values: Vec<F::Elem> = match first_var_roots(ctx, &live, rng)? {
        Some(roots) => roots,
        None => {
            let order = field.order();
            ctx.spend(order as u64)?;
            (0..order).map(|i| field.elem_at(i)).collect()
        }
    };
    let mut total = BigUint::zero();
    for v in values {
        ctx.spend(live.len() as u64)?;
        let spec: Vec<SparsePoly<F>> =
            live.iter().map(|f| specialize_first(&field, f, &v)).collect();
        total += count_rec(ctx, &spec, remaining - 1, rng)?;
    }
    Ok(total)
}

/// Monomorphization helper: route univariate root counting through the F_p
/// fast path when the field is F_p.
fn count_roots_dispatch<F: FiniteField>(
    ctx: &mut SearchCtx<F>,
    u: &UniPoly<F>,
) -> Result<u64> {
    // PrimeField is the only field with char == order
    if ctx.field.order() == ctx.field.char() as u128 {
        // reconstruct over PrimeField
        let fp = PrimeField::new(ctx.field.char()).expect("char is prime");
        let coeffs: Vec<u64> = u
            .coeffs
            .iter()
            .map(|c| ctx.field.elem_index(c) as u64)
            .collect();
        let up = UniPoly::from_coeffs(&fp, coeffs);
        let mut sub = SearchCtx {
            field: &fp,
            budget: ctx.budget,
            used: ctx.used,
            qr_table: ctx.qr_table.take(),
        };
        let out = count_univariate_roots_fp(&mut sub, &up);
        ctx.used = sub.used;
        ctx.qr_table = sub.qr_table;
        out
    } else {
        ctx.spend(u.degree() as u64 * 4)?;
        Ok(u.count_roots(ctx.field)? as u64)
    }
}

/// Tight loop for a single plane curve over F_p: iterates x and root-solves
/// in y, cost O(p * d). Quadratic fibers use a table of squares.
fn count_curve_points_fp(
    field: &PrimeField,
    f: &SparsePoly<PrimeField>,
    budget: u64,
) -> Result<(BigUint, u64)> {
    let p = field.p();
    if p > budget {
        return Err(resource(format!("enumeration budget {budget} exceeded")));
    }
    let dy = f.degree_in(1) as usize;
    let terms: Vec<(usize, usize, u64)> = f
        .terms
        .iter()
        .map(|(m, c)| (m.0[0] as usize, m.0[1] as usize, *c))
        .collect();
    let dx = f.degree_in(0) as usize;
    let qr_table: Option<Vec<u8>> = if dy == 2 && p > 2 && p <= (1 << 27) {
        let mut t = vec![0u8; p as usize];
        for x in 0..p {
            t[crate::arith::fp::mulmod(x, x, p) as usize] = 1;
        }
        Some(t)
    } else {
        None
    };
    use crate::arith::fp::{addmod, mulmod};
    let mut total = BigUint::zero();
    let mut running = 0u64;
    let mut xpow = vec![1u64; dx + 1];
    let mut budget_used = if qr_table.is_some() { p / 4 } else { 0 };
    for x0 in 0..p {
        for e in 1..=dx {
            xpow[e] = mulmod(xpow[e - 1], x0, p);
        }
        let mut ycoef = [0u64; 8];
        for (ex, ey, c) in &terms {
            ycoef[*ey] = addmod(ycoef[*ey], mulmod(*c, xpow[*ex], p), p);
        }
        let mut deg = dy;
        while deg > 0 && ycoef[deg] == 0 {
            deg -= 1;
        }
        let add = if deg == 0 {
            if ycoef[0] == 0 {
                // whole vertical line
                total += BigUint::from(running);
                running = 0;
                total += BigUint::from(p);
                0
            } else {
                0
            }
        } else if deg == 1 {
            1
        } else if deg == 2 && p > 2 {
            // quadratic formula; char 2 falls through to the gcd path below
            let disc = {
                let b2 = mulmod(ycoef[1], ycoef[1], p);
                let ac4 = mulmod(4 % p, mulmod(ycoef[2], ycoef[0], p), p);
                crate::arith::fp::submod(b2, ac4, p)
            };
            if disc == 0 {
                1
            } else {
                match &qr_table {
                    Some(t) => {
                        if t[disc as usize] == 1 {
                            2
                        } else {
                            0
                        }
                    }
                    None => field.sqrt_count(disc) as u64,
                }
            }
        } else {
            // general fiber: gcd-based distinct root count
            budget_used += deg as u64 * 4;
            let u = UniPoly::from_coeffs(field, ycoef[..=deg].to_vec());
            u.count_roots(field)? as u64
        };
        running += add;
        if running > (1 << 62) {
            total += BigUint::from(running);
            running = 0;
        }
    }
    total += BigUint::from(running);
    budget_used += p;
    Ok((total, budget_used))
}

/// One variable elimination step: variable index (in current coordinates)
/// and its expression over the remaining variables.
struct AffineStep<F: FiniteField> {
    var: usize,
    expr: SparsePoly<F>,
}

/// Substitutes a polynomial for one variable, dropping that coordinate.
fn substitute_var<F: FiniteField>(
    field: &F,
    f: &SparsePoly<F>,
    var: usize,
    expr: &SparsePoly<F>,
) -> SparsePoly<F> {
    // expr lives in the coordinate system with `var` removed
    let out_vars = f.nvars - 1;
    let mut acc = SparsePoly::zero(out_vars);
    for (m, c) in &f.terms {
        let e = m.0[var] as u32;
        let mut rest: Vec<u16> = m.0.clone();
        rest.remove(var);
        let mut term = SparsePoly::zero(out_vars);
        term.add_term(field, Monomial(rest), c.clone());
        if e > 0 {
            term = term.mul(field, &expr.pow(field, e));
        }
        acc = acc.add(field, &term);
    }
    acc
}

/// Repeatedly eliminates variables pinned by affine generators (degree <= 1
/// with an invertible coefficient). Solution sets are in bijection, so
/// counts transfer and points back-substitute. Returns the reduced system
/// and the elimination stack (applied in order).
fn affine_eliminate<F: FiniteField>(
    field: &F,
    mut fs: Vec<SparsePoly<F>>,
) -> (Vec<SparsePoly<F>>, Vec<AffineStep<F>>, bool) {
    let mut steps: Vec<AffineStep<F>> = vec![];
    let mut inconsistent = false;
    'outer: loop {
        let nvars = fs.first().map(|f| f.nvars).unwrap_or(0);
        if nvars == 0 {
            break;
        }
        let mut chosen: Option<(usize, usize)> = None;
        for (gi, g) in fs.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            if g.degree() == 0 {
                inconsistent = true;
                break 'outer;
            }
            if g.degree() == 1 {
                // find a linear term with invertible coefficient
                for (m, _c) in &g.terms {
                    if m.total_degree() == 1 {
                        let var = m.0.iter().position(|e| *e == 1).unwrap();
                        chosen = Some((gi, var));
                        break;
                    }
                }
            }
            if chosen.is_some() {
                break;
            }
        }
        let Some((gi, var)) = chosen else { break };
        let g = fs.remove(gi);
        let coeff = g.coeff(field, &Monomial::var(g.nvars, var));
        let cinv = match field.inv(&coeff) {
            Ok(v) => v,
            Err(_) => break,
        };
        // x_var = -cinv * (g - coeff * x_var)
        let mut rest = SparsePoly::zero(g.nvars - 1);
        for (m, c) in &g.terms {
            if m.0[var] == 1 && m.total_degree() == 1 {
                continue;
            }
            let mut mm = m.0.clone();
            mm.remove(var);
            rest.add_term(field, Monomial(mm), c.clone());
        }
        let expr = rest.scale(field, &field.neg(&cinv));
        fs = fs
            .iter()
            .map(|f| substitute_var(field, f, var, &expr))
            .collect();
        steps.push(AffineStep { var, expr });
        if fs.is_empty() {
            break;
        }
    }
    (fs, steps, inconsistent)
}

/// Rebuilds a full point from a reduced point by replaying the elimination
/// stack backwards.
fn back_substitute<F: FiniteField>(
    field: &F,
    steps: &[AffineStep<F>],
    reduced: &[F::Elem],
) -> Vec<F::Elem> {
    let mut point: Vec<F::Elem> = reduced.to_vec();
    for step in steps.iter().rev() {
        let v = step.expr.eval(field, &point);
        point.insert(step.var, v);
    }
    point
}

/// Opaque affine elimination stack (see `affine_eliminate_steps`).
pub struct AffineElimination {
    steps: Vec<AffineStep<PrimeField>>,
}

impl AffineElimination {
    pub fn len(&self) -> usize {
        self.steps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Eliminates variables pinned by the given affine generators, returning
/// whatever generators could not be used plus the elimination stack. Other
/// polynomials over the same variable space can then be pushed through the
/// same substitutions with `apply_affine_steps`, and reduced points lift
/// back with `apply_back_substitution`.
pub fn affine_eliminate_steps(
    field: &PrimeField,
    gens: Vec<SparsePoly<PrimeField>>,
) -> (Vec<SparsePoly<PrimeField>>, AffineElimination, bool) {
    let (left, steps, inconsistent) = affine_eliminate(field, gens);
    (left, AffineElimination { steps }, inconsistent)
}

pub fn apply_affine_steps(
    field: &PrimeField,
    elim: &AffineElimination,
    polys: Vec<SparsePoly<PrimeField>>,
) -> Vec<SparsePoly<PrimeField>> {
    polys
        .into_iter()
        .map(|mut f| {
            for step in &elim.steps {
                f = substitute_var(field, &f, step.var, &step.expr);
            }
            f
        })
        .collect()
}

pub fn apply_back_substitution(
    field: &PrimeField,
    elim: &AffineElimination,
    reduced: &[u64],
) -> Vec<u64> {
    back_substitute(field, &elim.steps, reduced)
}

/// Exact number of common zeros of `fs` in F_{p^k}^n, by exhaustive
/// backtracking enumeration with univariate root-solving in the innermost
/// variable. Free variables multiply the count by the field order without
/// being enumerated. `budget` caps candidate evaluations.
pub fn count_points(
    fs: &[SparsePoly<PrimeField>],
    p: u64,
    k: usize,
    budget: u64,
) -> Result<PointCount> {
    if fs.is_empty() {
        return Err(usage("at least one polynomial required"));
    }
    let n = fs[0].nvars;
    let field = PrimeField::new(p)?;
    let mut rng = Rng::new(p ^ 0xc047);
    if k == 1 {
        if n == 2 && fs.len() == 1 && !fs[0].is_zero() && fs[0].degree() > 0 {
            // plane curve: dedicated x-sweep when y genuinely appears
            if fs[0].degree_in(1) >= 1 && fs[0].degree_in(1) <= 7 {
                let (count, used) = count_curve_points_fp(&field, &fs[0], budget)?;
                return Ok(PointCount { p, k, n, count, budget_used: used });
            }
        }
        // peel off variables pinned by affine generators first
        let (red, steps, inconsistent) = affine_eliminate(&field, fs.to_vec());
        if inconsistent {
            return Ok(PointCount { p, k, n, count: BigUint::zero(), budget_used: 0 });
        }
        let remaining = n - steps.len();
        let mut ctx = SearchCtx::new(&field, budget);
        let count = count_rec(&mut ctx, &red, remaining, &mut rng)?;
        Ok(PointCount { p, k, n, count, budget_used: ctx.used })
    } else {
        let ext = ExtField::generate(field.clone(), k)?;
        let lifted: Vec<SparsePoly<ExtField>> = fs
            .iter()
            .map(|f| f.map_domain(&ext, |c| ext.embed(*c)))
            .collect();
        let mut ctx = SearchCtx::new(&ext, budget);
        let count = count_rec(&mut ctx, &lifted, n, &mut rng)?;
        Ok(PointCount { p, k, n, count, budget_used: ctx.used })
    }
}

/// Enumerates the F_p-points of a system (no free-variable shortcut): errors
/// when the list would exceed `cap`.
pub fn enumerate_points(
    field: &PrimeField,
    fs: &[SparsePoly<PrimeField>],
    cap: usize,
    budget: u64,
) -> Result<Vec<Vec<u64>>> {
    let n = fs.first().map(|f| f.nvars).ok_or_else(|| usage("empty system"))?;
    let mut ctx = SearchCtx::new(field, budget);
    let mut rng = Rng::new(field.p() ^ 0x11457);
    let mut out = vec![];
    let mut prefix = vec![];
    enum_rec(&mut ctx, fs, n, &mut prefix, &mut out, cap, &mut rng)?;
    Ok(out)
}

fn enum_rec(
    ctx: &mut SearchCtx<PrimeField>,
    fs: &[SparsePoly<PrimeField>],
    remaining: usize,
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    cap: usize,
    rng: &mut Rng,
) -> Result<()> {
    let field = ctx.field;
    let mut live: Vec<SparsePoly<PrimeField>> = vec![];
    for f in fs {
        if f.is_zero() {
            continue;
        }
        if f.degree() == 0 {
            return Ok(());
        }
        live.push(f.clone());
    }
    if remaining == 0 {
        if out.len() >= cap {
            return Err(resource(format!("point list exceeds cap {cap}")));
        }
        out.push(prefix.clone());
        return Ok(());
    }
    let values: Vec<u64> = if live.is_empty() {
        ctx.spend(field.p())?;
        (0..field.p()).collect()
    } else {
        match first_var_roots(ctx, &live, rng)? {
            Some(roots) => roots,
            None => {
                ctx.spend(field.p())?;
                (0..field.p()).collect()
            }
        }
    };
    for v in values {
        ctx.spend(live.len().max(1) as u64)?;
        let spec: Vec<SparsePoly<PrimeField>> = live
            .iter()
            .map(|f| specialize_first(field, f, &v))
            .collect();
        prefix.push(v);
        enum_rec(ctx, &spec, remaining - 1, prefix, out, cap, rng)?;
        prefix.pop();
    }
    Ok(())
}

/// Finds up to `want` distinct F_p-points of the system (free variables are
/// pinned to sampled values rather than enumerated).
pub fn find_points(
    field: &PrimeField,
    fs: &[SparsePoly<PrimeField>],
    want: usize,
    budget: u64,
    rng: &mut Rng,
) -> Result<Vec<Vec<u64>>> {
    let n = fs.first().map(|f| f.nvars).ok_or_else(|| usage("empty system"))?;
    let (red, steps, inconsistent) = affine_eliminate(field, fs.to_vec());
    if inconsistent {
        return Ok(vec![]);
    }
    let remaining = n - steps.len();
    let mut ctx = SearchCtx::new(field, budget);
    let mut out = vec![];
    let mut prefix = vec![];
    let _ = find_rec(&mut ctx, &red, remaining, &mut prefix, &mut out, want, rng);
    if ctx.used > ctx.budget {
        return Err(resource("point search budget exceeded"));
    }
    Ok(out
        .into_iter()
        .map(|pt| back_substitute(field, &steps, &pt))
        .collect())
}

fn find_rec(
    ctx: &mut SearchCtx<PrimeField>,
    fs: &[SparsePoly<PrimeField>],
    remaining: usize,
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    want: usize,
    rng: &mut Rng,
) -> Result<bool> {
    if out.len() >= want {
        return Ok(true);
    }
    let field = ctx.field;
    let mut live: Vec<SparsePoly<PrimeField>> = vec![];
    for f in fs {
        if f.is_zero() {
            continue;
        }
        if f.degree() == 0 {
            return Ok(false);
        }
        live.push(f.clone());
    }
    if remaining == 0 {
        out.push(prefix.clone());
        return Ok(out.len() >= want);
    }
    let values: Vec<u64> = if live.is_empty() {
        // free variable: a couple of representatives suffice
        let mut vs: Vec<u64> = (0..field.p().min(want as u64 + 1)).collect();
        if field.p() > 8 {
            vs.push(rng.below(field.p()));
        }
        vs.dedup();
        vs
    } else {
        match first_var_roots(ctx, &live, rng)? {
            Some(roots) => roots,
            None => {
                ctx.spend(field.p())?;
                (0..field.p()).collect()
            }
        }
    };
    for v in values {
        ctx.spend(live.len().max(1) as u64)?;
        let spec: Vec<SparsePoly<PrimeField>> = live
            .iter()
            .map(|f| specialize_first(field, f, &v))
            .collect();
        prefix.push(v);
        let done = find_rec(ctx, &spec, remaining - 1, prefix, out, want, rng)?;
        prefix.pop();
        if done {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Lang-Weil classification verdict for a plane curve's F_p point count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveVerdict {
    AtMostOneComponent,
    AtLeastTwoFpComponents,
    Indeterminate,
}

#[derive(Debug, Clone)]
pub struct CurveClassification {
    pub degree_cap: u32,
    pub p: u64,
    pub n_points: BigUint,
    pub verdict: CurveVerdict,
    /// the validity floor applied (primes at or below it are indeterminate)
    pub floor: BigUint,
}

/// Floor mode for the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloorMode {
    /// the conservative published validity constant (150)^2 D^8
    Strict,
    /// smallest p separating the two thresholds: the classifier is
    /// well-defined exactly when 2p - 10 D^4 sqrt(p) - D > p + 5 D^4 sqrt(p) + D
    Desk,
}

fn d4(d: u32) -> BigUint {
    num_traits::pow::pow(BigUint::from(d), 4)
}

/// Least prime-size floor under which the two thresholds stay separated:
/// p - 15 D^4 sqrt(p) - 2D > 0.
pub fn desk_floor(d: u32) -> BigUint {
    // p > (15 D^4 + eps)^2 roughly; solve exactly by checking the condition
    let c = BigUint::from(15u32) * d4(d);
    // (c+2)^2 always separates; walk down to the least separated value and
    // return its predecessor (the verdict requires p strictly above the floor)
    let mut lo = (&c + BigUint::from(2u32)) * (&c + BigUint::from(2u32));
    debug_assert!(threshold_separated(&lo, d));
    loop {
        let cand = &lo - BigUint::one();
        if cand.is_zero() || !threshold_separated(&cand, d) {
            break;
        }
        lo = cand;
    }
    lo - BigUint::one()
}

fn threshold_separated(p: &BigUint, d: u32) -> bool {
    // p - 2D > 15 D^4 sqrt(p)  <=>  (p - 2D)^2 > 225 D^8 p  (for p > 2D)
    let two_d = BigUint::from(2 * d);
    if *p <= two_d {
        return false;
    }
    let lhs = (p - &two_d) * (p - &two_d);
    let rhs = BigUint::from(225u32) * num_traits::pow::pow(BigUint::from(d), 8) * p;
    lhs > rhs
}

pub fn strict_floor(d: u32) -> BigUint {
    BigUint::from(150u32 * 150) * num_traits::pow::pow(BigUint::from(d), 8)
}

/// Classifies a curve point count N against the Lang-Weil thresholds:
/// at_least_two when N >= 2p - 10 D^4 sqrt(p) - D, at_most_one when
/// N <= p + 5 D^4 sqrt(p) + D, indeterminate otherwise or below the floor.
pub fn langweil_classify(
    n_points: &BigUint,
    p: u64,
    r: usize,
    degree_cap: u32,
    mode: FloorMode,
) -> Result<CurveClassification> {
    if r != 1 {
        return Err(usage("classifier supports curves (r = 1) only"));
    }
    if degree_cap == 0 {
        return Err(usage("degree cap must be positive"));
    }
    let floor = match mode {
        FloorMode::Strict => strict_floor(degree_cap),
        FloorMode::Desk => desk_floor(degree_cap),
    };
    let pb = BigUint::from(p);
    let d = degree_cap;
    let verdict = if pb <= floor {
        CurveVerdict::Indeterminate
    } else {
        // lower: N >= 2p - 10 D^4 sqrt p - D  <=>  (2p - D - N) <= 0 or (2p - D - N)^2 <= 100 D^8 p
        let lower_hit = {
            let margin = BigInt::from(2u32) * BigInt::from(p)
                - BigInt::from(d)
                - BigInt::from(n_points.clone());
            if margin <= BigInt::zero() {
                true
            } else {
                let m = margin.magnitude().clone();
                &m * &m <= BigUint::from(100u32) * num_traits::pow::pow(BigUint::from(d), 8) * &pb
            }
        };
        // upper: N <= p + 5 D^4 sqrt p + D  <=>  (N - p - D) <= 0 or (N - p - D)^2 <= 25 D^8 p
        let upper_hit = {
            let margin =
                BigInt::from(n_points.clone()) - BigInt::from(p) - BigInt::from(d);
            if margin <= BigInt::zero() {
                true
            } else {
                let m = margin.magnitude().clone();
                &m * &m <= BigUint::from(25u32) * num_traits::pow::pow(BigUint::from(d), 8) * &pb
            }
        };
        match (lower_hit, upper_hit) {
            (true, false) => CurveVerdict::AtLeastTwoFpComponents,
            (false, true) => CurveVerdict::AtMostOneComponent,
            // overlapping thresholds cannot happen above the desk floor;
            // anything else is indeterminate
            _ => CurveVerdict::Indeterminate,
        }
    };
    Ok(CurveClassification {
        degree_cap,
        p,
        n_points: n_points.clone(),
        verdict,
        floor,
    })
}

/// Rank of the m-by-n Jacobian of the system evaluated at a point.
pub fn jacobian_rank_at(
    field: &PrimeField,
    fs: &[SparsePoly<PrimeField>],
    point: &[u64],
) -> Result<usize> {
    let n = fs.first().map(|f| f.nvars).ok_or_else(|| usage("empty system"))?;
    if point.len() != n {
        return Err(usage("point length mismatch"));
    }
    let mut mat = vec![];
    for f in fs {
        let mut row = vec![];
        for j in 0..n {
            row.push(f.derivative(field, j)?.eval(field, point));
        }
        mat.push(row);
    }
    Ok(linalg::field_rank(field, &mat))
}

/// Record of a random slice: seed, box size, and the appended affine forms.
#[derive(Debug, Clone)]
pub struct SliceRecord {
    pub seed: u64,
    pub box_size: u64,
    pub forms: Vec<SparsePoly<ZZ>>,
}

/// Appends `r - 1` random affine forms with coefficients uniform in
/// {1, ..., S} (slicing an r-dimensional set down to a curve); r = 1 adds
/// nothing. Reproducible from the seed.
pub fn random_slice(
    fs: &[SparsePoly<ZZ>],
    r: usize,
    seed: u64,
    box_size: u64,
) -> Result<(Vec<SparsePoly<ZZ>>, SliceRecord)> {
    let n = fs.first().map(|f| f.nvars).ok_or_else(|| usage("empty system"))?;
    if box_size == 0 {
        return Err(usage("coefficient box must be nonempty"));
    }
    let mut rng = Rng::new(seed ^ 0x517ce);
    let zz = ZZ;
    let mut forms = vec![];
    let count = r.saturating_sub(1);
    for _ in 0..count {
        let mut f = SparsePoly::zero(n);
        let c0 = 1 + rng.below(box_size);
        f.add_term(&zz, Monomial::one(n), BigInt::from(c0));
        for i in 0..n {
            let c = 1 + rng.below(box_size);
            f.add_term(&zz, Monomial::var(n, i), BigInt::from(c));
        }
        forms.push(f);
    }
    let mut out = fs.to_vec();
    out.extend(forms.iter().cloned());
    Ok((out, SliceRecord { seed, box_size, forms }))
}

/// Appends exactly `k` random affine forms (used by the dimension protocol,
/// which slices by r hyperplanes to test dim >= r).
pub fn slice_by(
    fs: &[SparsePoly<ZZ>],
    k: usize,
    seed: u64,
    box_size: u64,
) -> Result<(Vec<SparsePoly<ZZ>>, SliceRecord)> {
    random_slice(fs, k + 1, seed, box_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::text::parse_poly;

    fn zp(nvars: usize, s: &str) -> SparsePoly<ZZ> {
        parse_poly(&ZZ, nvars, s).unwrap()
    }

    fn fpoly(field: &PrimeField, nvars: usize, s: &str) -> SparsePoly<PrimeField> {
        zp(nvars, s).reduce_mod_p(field)
    }

    #[test]
    fn count_examples() {
        // x^2 + y^2 - 1 over F_5: 4 points
        let f5 = PrimeField::new(5).unwrap();
        let c = count_points(&[fpoly(&f5, 2, "x1^2 + x2^2 - 1")], 5, 1, 1 << 20).unwrap();
        assert_eq!(c.count, BigUint::from(4u32));
        // xy over F_7: 13
        let f7 = PrimeField::new(7).unwrap();
        let c2 = count_points(&[fpoly(&f7, 2, "x1*x2")], 7, 1, 1 << 20).unwrap();
        assert_eq!(c2.count, BigUint::from(13u32));
        // x^2 - 2 over F_7: 2 roots
        let c3 = count_points(&[fpoly(&f7, 1, "x1^2 - 2")], 7, 1, 1 << 20).unwrap();
        assert_eq!(c3.count, BigUint::from(2u32));
    }

    #[test]
    fn curve_counts_in_characteristic_two() {
        // quadratic fibers must not use the discriminant formula at p = 2
        let f2 = PrimeField::new(2).unwrap();
        for s in ["x1^2 + x2^2 + 1", "x2^2 + x2 + x1", "x2^2 + x1*x2 + 1"] {
            let f = fpoly(&f2, 2, s);
            let fast = count_points(&[f.clone()], 2, 1, 1 << 20).unwrap();
            let mut brute = 0u32;
            for x in 0..2u64 {
                for y in 0..2u64 {
                    if f.eval(&f2, &[x, y]) == 0 {
                        brute += 1;
                    }
                }
            }
            assert_eq!(fast.count, BigUint::from(brute), "{s}");
        }
    }

    #[test]
    fn count_matches_brute_force_random() {
        let mut rng = Rng::new(91);
        for trial in 0..60 {
            let p = [2u64, 3, 5, 7][trial % 4];
            let field = PrimeField::new(p).unwrap();
            let n = 2 + (trial % 2);
            let mut fs = vec![];
            for _ in 0..1 + rng.below(2) {
                let mut f = SparsePoly::zero(n);
                for _ in 0..1 + rng.below(4) {
                    let m: Vec<u16> = (0..n).map(|_| rng.below(3) as u16).collect();
                    f.add_term(&field, Monomial(m), rng.below(p));
                }
                fs.push(f);
            }
            if fs.iter().all(|f| f.is_zero()) {
                continue;
            }
            let fast = count_points(&fs, p, 1, 1 << 24).unwrap();
            // brute force over all tuples
            let mut brute = 0u64;
            let total = p.pow(n as u32);
            for idx in 0..total {
                let mut point = vec![];
                let mut v = idx;
                for _ in 0..n {
                    point.push(v % p);
                    v /= p;
                }
                if fs.iter().all(|f| f.eval(&field, &point) == 0) {
                    brute += 1;
                }
            }
            assert_eq!(fast.count, BigUint::from(brute), "p={p} fs={fs:?}");
        }
    }

    #[test]
    fn two_lines_count_over_extensions() {
        // product of two distinct F_p-lines: 2 q - 1 points over F_q
        let p = 5u64;
        let field = PrimeField::new(p).unwrap();
        let f = fpoly(&field, 2, "x1*x2");
        for k in 1..=2usize {
            let c = count_points(&[f.clone()], p, k, 1 << 22).unwrap();
            let q = p.pow(k as u32);
            assert_eq!(c.count, BigUint::from(2 * q - 1), "k={k}");
        }
    }

    #[test]
    fn free_variable_shortcut() {
        // x^2 - 2 in 3 variables over F_7: 2 * 7^2 points, nearly free
        let f7 = PrimeField::new(7).unwrap();
        let c = count_points(&[fpoly(&f7, 3, "x1^2 - 2")], 7, 1, 1000).unwrap();
        assert_eq!(c.count, BigUint::from(2u32 * 49));
    }

    #[test]
    fn budget_exceeded_is_resource_error() {
        let f = PrimeField::new(10007).unwrap();
        let sys = [fpoly(&f, 3, "x1 + x2*x3 + 1")];
        assert!(matches!(
            count_points(&sys, 10007, 1, 100),
            Err(crate::error::Error::Resource(_))
        ));
    }

    #[test]
    fn classify_examples() {
        // p = 300007, D = 2: N = 2p-1 -> at_least_two; N = p+1 -> at_most_one
        let p = 300007u64;
        let n1 = BigUint::from(2 * p - 1);
        let c1 = langweil_classify(&n1, p, 1, 2, FloorMode::Desk).unwrap();
        assert_eq!(c1.verdict, CurveVerdict::AtLeastTwoFpComponents);
        let n2 = BigUint::from(p + 1);
        let c2 = langweil_classify(&n2, p, 1, 2, FloorMode::Desk).unwrap();
        assert_eq!(c2.verdict, CurveVerdict::AtMostOneComponent);
        // p = 11 is far below any floor
        let c3 = langweil_classify(&BigUint::from(22u32), 11, 1, 2, FloorMode::Desk).unwrap();
        assert_eq!(c3.verdict, CurveVerdict::Indeterminate);
        // r != 1 unsupported
        assert!(langweil_classify(&n1, p, 2, 2, FloorMode::Desk).is_err());
    }

    #[test]
    fn desk_floor_separates_thresholds() {
        for d in 1..=4u32 {
            let floor = desk_floor(d);
            assert!(threshold_separated(&(&floor + BigUint::one()), d));
            if floor > BigUint::one() {
                assert!(!threshold_separated(&floor, d));
            }
            // strict floor dominates the desk floor
            assert!(strict_floor(d) >= floor);
        }
    }

    #[test]
    fn jacobian_rank_examples() {
        let f = PrimeField::new(101).unwrap();
        // (x1 x2, x1 x3) at (1, 0, 0): rows (0,1,0), (0,0,1): rank 2
        let fs = [fpoly(&f, 3, "x1*x2"), fpoly(&f, 3, "x1*x3")];
        assert_eq!(jacobian_rank_at(&f, &fs, &[1, 0, 0]).unwrap(), 2);
        // (x1): rank 1 anywhere
        let g = [fpoly(&f, 2, "x1")];
        assert_eq!(jacobian_rank_at(&f, &g, &[7, 9]).unwrap(), 1);
        // (x1^2) at 0: rank 0
        let h = [fpoly(&f, 1, "x1^2")];
        assert_eq!(jacobian_rank_at(&f, &h, &[0]).unwrap(), 0);
    }

    #[test]
    fn slices_are_reproducible() {
        let fs = [zp(3, "x1")];
        let (s1, rec1) = random_slice(&fs, 2, 9, 10_000).unwrap();
        let (s2, rec2) = random_slice(&fs, 2, 9, 10_000).unwrap();
        assert_eq!(rec1.forms, rec2.forms);
        assert_eq!(s1.len(), 2);
        assert_eq!(s2.len(), 2);
        // r = 1 adds nothing
        let (s3, rec3) = random_slice(&fs, 1, 9, 10_000).unwrap();
        assert_eq!(s3.len(), 1);
        assert!(rec3.forms.is_empty());
    }

    #[test]
    fn sliced_line_keeps_points() {
        // {x1 = 0} in A^3 sliced by one random plane still has mod-p points
        let fs = [zp(3, "x1")];
        let mut hit = 0;
        for seed in 0..20u64 {
            let (sliced, _) = random_slice(&fs, 2, seed, 10_000).unwrap();
            let field = PrimeField::new(10007).unwrap();
            let modp: Vec<_> = sliced.iter().map(|f| f.reduce_mod_p(&field)).collect();
            let c = count_points(&modp, 10007, 1, 1 << 24).unwrap();
            if c.count > BigUint::zero() {
                hit += 1;
            }
        }
        assert!(hit >= 19, "hit {hit}/20");
    }

    #[test]
    fn affine_heavy_system_counts_and_finds() {
        // {x1^2, x1*x2*x3, four affine slices} in 5 variables: the slices
        // pin 4 variables, leaving a univariate search
        let p = 211u64;
        let field = PrimeField::new(p).unwrap();
        let mut sys = vec![zp(5, "x1^2"), zp(5, "2*x1*x3*x4")];
        let (sliced, _) = slice_by(&sys.clone(), 3, 77, 1000).unwrap();
        sys = sliced;
        let modp: Vec<_> = sys.iter().map(|f| f.reduce_mod_p(&field)).collect();
        let c = count_points(&modp, p, 1, 1 << 22).unwrap();
        // {x1 = 0} is a 4-flat; 3 generic slices cut it to a line: p points
        assert_eq!(c.count, BigUint::from(p));
        let mut rng = Rng::new(3);
        let pts = find_points(&field, &modp, 2, 1 << 22, &mut rng).unwrap();
        assert_eq!(pts.len(), 2);
        for pt in &pts {
            for f in &modp {
                assert_eq!(f.eval(&field, pt), 0);
            }
        }
    }

    #[test]
    fn slicing_a_plane_yields_dimension_one_evidence() {
        // {x1 = 0} in A^3 sliced by one random affine form: the dimension
        // certificate reports a curve on nearly every seed
        let fs = [zp(3, "x1")];
        let mut good = 0;
        for seed in 0..100u64 {
            let (sliced, _) = random_slice(&fs, 2, seed, 10_000).unwrap();
            let cert = crate::idealsys::dim_certificate(&sliced, 1, 2, 20_000).unwrap();
            if cert.conclusive_equal() {
                good += 1;
            }
        }
        assert!(good >= 95, "dimension-one evidence on {good}/100 seeds");
    }

    #[test]
    fn enumerate_and_find_points() {
        let f7 = PrimeField::new(7).unwrap();
        let fs = [fpoly(&f7, 2, "x1*x2")];
        let pts = enumerate_points(&f7, &fs, 100, 1 << 20).unwrap();
        assert_eq!(pts.len(), 13);
        let mut rng = Rng::new(5);
        let some = find_points(&f7, &fs, 2, 1 << 20, &mut rng).unwrap();
        assert_eq!(some.len(), 2);
        for p in &some {
            assert_eq!(fs[0].eval(&f7, p), 0);
        }
    }
}
