//! Bivariate polynomial factorization over finite fields, and the
//! plane-curve component oracle built on it.
//!
//! Factorization follows the classical route: squarefree part, content /
//! primitive split in y, monicization, univariate factorization at a good
//! specialization point, multifactor Hensel lifting in (x - x0), and subset
//! recombination by trial division. Tiny fields where no good specialization
//! point exists fall back to exhaustive factor search.

use crate::arith::{Domain, ExtField, FieldDomain, FiniteField, PrimeField, UniPoly};
use crate::error::{domain, resource, Result};
use crate::mpoly::{Monomial, SparsePoly};
use crate::rng::Rng;

/// Polynomial in y with F[x] coefficients: coeff of y^i is a UniPoly in x.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<F: Domain> {
    pub cy: Vec<UniPoly<F>>,
}

impl<F: FieldDomain> BiPoly<F> {
    pub fn zero() -> Self {
        BiPoly { cy: vec![] }
    }

    pub fn normalize(mut self) -> Self {
        while self.cy.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.cy.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.cy.is_empty()
    }

    pub fn deg_y(&self) -> usize {
        self.cy.len().saturating_sub(1)
    }

    pub fn deg_x(&self) -> usize {
        self.cy.iter().map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn from_unipoly_x(u: &UniPoly<F>) -> Self {
        BiPoly { cy: vec![u.clone()] }.normalize()
    }

    pub fn from_unipoly_y(field: &F, u: &UniPoly<F>) -> Self {
        BiPoly {
            cy: u.coeffs.iter().map(|c| UniPoly::constant(field, c.clone())).collect(),
        }
        .normalize()
    }

    pub fn from_sparse(field: &F, f: &SparsePoly<F>) -> Self {
        debug_assert_eq!(f.nvars, 2);
        let dy = f.degree_in(1) as usize;
        let mut cy = vec![UniPoly::<F>::zero(); dy + 1];
        for (m, c) in &f.terms {
            let (ex, ey) = (m.0[0] as usize, m.0[1] as usize);
            let add = UniPoly::monomial(field, c.clone(), ex);
            cy[ey] = cy[ey].add(field, &add);
        }
        BiPoly { cy }.normalize()
    }

    pub fn to_sparse(&self, field: &F) -> SparsePoly<F> {
        let mut out = SparsePoly::zero(2);
        for (ey, c) in self.cy.iter().enumerate() {
            for (ex, v) in c.coeffs.iter().enumerate() {
                if !field.is_zero(v) {
                    out.add_term(field, Monomial(vec![ex as u16, ey as u16]), v.clone());
                }
            }
        }
        out
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let n = self.cy.len().max(other.cy.len());
        let mut cy = Vec::with_capacity(n);
        let z = UniPoly::<F>::zero();
        for i in 0..n {
            let a = self.cy.get(i).unwrap_or(&z);
            let b = other.cy.get(i).unwrap_or(&z);
            cy.push(a.add(field, b));
        }
        BiPoly { cy }.normalize()
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        let n = self.cy.len().max(other.cy.len());
        let mut cy = Vec::with_capacity(n);
        let z = UniPoly::<F>::zero();
        for i in 0..n {
            let a = self.cy.get(i).unwrap_or(&z);
            let b = other.cy.get(i).unwrap_or(&z);
            cy.push(a.sub(field, b));
        }
        BiPoly { cy }.normalize()
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut cy = vec![UniPoly::<F>::zero(); self.cy.len() + other.cy.len() - 1];
        for (i, a) in self.cy.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.cy.iter().enumerate() {
                cy[i + j] = cy[i + j].add(field, &a.mul(field, b));
            }
        }
        BiPoly { cy }.normalize()
    }

    /// Truncates every x-coefficient to degree < prec.
    pub fn trunc_x(&self, field: &F, prec: usize) -> Self {
        BiPoly {
            cy: self
                .cy
                .iter()
                .map(|c| {
                    UniPoly::from_coeffs(
                        field,
                        c.coeffs.iter().take(prec).cloned().collect(),
                    )
                })
                .collect(),
        }
        .normalize()
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        BiPoly { cy: self.cy.iter().map(|u| u.scale(field, c)).collect() }.normalize()
    }

    /// Division in y by a divisor with invertible y-leading coefficient that
    /// is a constant (monic after scaling); exact when remainder is zero.
    pub fn divrem_y(&self, field: &F, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(domain("division by zero"));
        }
        let dlc = divisor.cy.last().unwrap();
        if dlc.degree() != 0 {
            return Err(domain("divisor must have constant y-leading coefficient"));
        }
        let inv = field.inv(&dlc.coeffs[0])?;
        let dd = divisor.deg_y();
        if dd == 0 && divisor.deg_x() == 0 {
            return Ok((self.scale(field, &inv), Self::zero()));
        }
        let mut rem = self.clone();
        let mut quot = BiPoly {
            cy: vec![UniPoly::<F>::zero(); self.cy.len().saturating_sub(dd)],
        };
        while !rem.is_zero() && rem.deg_y() >= dd && !(rem.deg_y() == 0 && dd == 0) {
            let k = rem.deg_y() - dd;
            let lead = rem.cy.last().unwrap().scale(field, &inv);
            if lead.is_zero() {
                rem.cy.pop();
                rem = rem.normalize();
                continue;
            }
            // quot += lead * y^k; rem -= lead * y^k * divisor
            quot.cy[k] = quot.cy[k].add(field, &lead);
            let mut sub = BiPoly { cy: vec![UniPoly::<F>::zero(); k] };
            for c in &divisor.cy {
                sub.cy.push(c.mul(field, &lead));
            }
            rem = rem.sub(field, &sub.normalize());
            if dd == 0 {
                break;
            }
        }
        Ok((quot.normalize(), rem))
    }

    pub fn divides(&self, field: &F, other: &Self) -> bool {
        match other.divrem_y(field, self) {
            Ok((q, r)) => r.is_zero() && q.mul(field, self) == *other,
            Err(_) => false,
        }
    }

    /// Content in y: gcd of the x-coefficients.
    pub fn content_x(&self, field: &F) -> Result<UniPoly<F>> {
        let mut g = UniPoly::<F>::zero();
        for c in &self.cy {
            g = g.gcd(field, c)?;
        }
        Ok(g)
    }

    pub fn div_content(&self, field: &F, content: &UniPoly<F>) -> Result<Self> {
        let mut cy = vec![];
        for c in &self.cy {
            cy.push(c.div_exact(field, content)?);
        }
        Ok(BiPoly { cy }.normalize())
    }

    pub fn derivative_y(&self, field: &F) -> Self {
        if self.cy.len() <= 1 {
            return Self::zero();
        }
        let mut cy = vec![];
        for (i, c) in self.cy.iter().enumerate().skip(1) {
            let k = field.from_i64(i as i64);
            cy.push(c.scale(field, &k));
        }
        BiPoly { cy }.normalize()
    }

    pub fn derivative_x(&self, field: &F) -> Self {
        BiPoly { cy: self.cy.iter().map(|c| c.derivative(field)).collect() }.normalize()
    }

    /// Specializes x = x0.
    pub fn eval_x(&self, field: &F, x0: &F::Elem) -> UniPoly<F> {
        UniPoly::from_coeffs(field, self.cy.iter().map(|c| c.eval(field, x0)).collect())
    }

    pub fn eval_point(&self, field: &F, x0: &F::Elem, y0: &F::Elem) -> F::Elem {
        self.eval_x(field, x0).eval(field, y0)
    }

    /// Canonical scaling: leading coefficient (top y, then top x) becomes 1.
    pub fn monic_normal(&self, field: &F) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.cy.last().unwrap().lc(field);
        let inv = field.inv(&lc).expect("nonzero leading coefficient");
        self.scale(field, &inv)
    }
}

/// Bivariate gcd via content/primitive decomposition and pseudo-remainder
/// Euclid in y.
pub fn gcd_bivar<F: FiniteField>(field: &F, a: &BiPoly<F>, b: &BiPoly<F>) -> Result<BiPoly<F>> {
    if a.is_zero() {
        return Ok(b.monic_normal(field));
    }
    if b.is_zero() {
        return Ok(a.monic_normal(field));
    }
    if a.deg_y() == 0 && b.deg_y() == 0 {
        return Ok(BiPoly::from_unipoly_x(&a.cy[0].gcd(field, &b.cy[0])?));
    }
    let ca = a.content_x(field)?;
    let cb = b.content_x(field)?;
    let cg = ca.gcd(field, &cb)?;
    let mut p = a.div_content(field, &ca)?;
    let mut q = b.div_content(field, &cb)?;
    if p.deg_y() < q.deg_y() {
        std::mem::swap(&mut p, &mut q);
    }
    // pseudo-remainder loop on primitive parts
    while !q.is_zero() {
        if q.deg_y() == 0 {
            // primitive with deg_y 0 means content 1 in F[x]: gcd of prim parts is 1
            let one = BiPoly::from_unipoly_x(&UniPoly::one(field));
            return Ok(one.mul(field, &BiPoly::from_unipoly_x(&cg)).monic_normal(field));
        }
        // scale p by lc(q)^(deg diff + 1) so division is exact termwise
        let lq = q.cy.last().unwrap().clone();
        let diff = p.deg_y().saturating_sub(q.deg_y());
        let mut scaled = p.clone();
        for _ in 0..=diff {
            scaled = BiPoly {
                cy: scaled.cy.iter().map(|c| c.mul(field, &lq)).collect(),
            }
            .normalize();
        }
        // long division in y where divisor leading coeff divides after scaling
        let r = pseudo_rem(field, &scaled, &q)?;
        p = q;
        q = match r {
            Some(r) => {
                let rc = r.content_x(field)?;
                if rc.is_zero() {
                    BiPoly::zero()
                } else {
                    r.div_content(field, &rc)?
                }
            }
            None => BiPoly::zero(),
        };
    }
    let pc = p.content_x(field)?;
    let prim = p.div_content(field, &pc)?;
    Ok(prim
        .mul(field, &BiPoly::from_unipoly_x(&cg))
        .monic_normal(field))
}

/// Remainder of scaled long division in y (divisor leading coeff may be a
/// polynomial in x; the caller pre-scales so each step divides exactly).
fn pseudo_rem<F: FiniteField>(
    field: &F,
    a: &BiPoly<F>,
    b: &BiPoly<F>,
) -> Result<Option<BiPoly<F>>> {
    let lb = b.cy.last().unwrap();
    let mut rem = a.clone();
    while !rem.is_zero() && rem.deg_y() >= b.deg_y() {
        let lr = rem.cy.last().unwrap().clone();
        let Ok(q) = lr.div_exact(field, lb) else {
            // scaling insufficient: multiply remainder by lb and retry
            rem = BiPoly { cy: rem.cy.iter().map(|c| c.mul(field, lb)).collect() }.normalize();
            continue;
        };
        let k = rem.deg_y() - b.deg_y();
        let mut sub = BiPoly { cy: vec![UniPoly::<F>::zero(); k] };
        for c in &b.cy {
            sub.cy.push(c.mul(field, &q));
        }
        rem = rem.sub(field, &sub.normalize());
        if rem.deg_y() == 0 && b.deg_y() == 0 {
            break;
        }
    }
    Ok(if rem.is_zero() { None } else { Some(rem) })
}

/// Squarefree part (radical) of a bivariate polynomial; handles inseparable
/// directions by p-th root extraction.
pub fn radical_bivar<F: FiniteField>(field: &F, f: &BiPoly<F>) -> Result<BiPoly<F>> {
    if f.is_zero() {
        return Err(domain("radical of zero"));
    }
    if f.deg_y() == 0 && f.cy[0].degree() == 0 {
        return Ok(BiPoly::from_unipoly_x(&UniPoly::one(field)));
    }
    let fx = f.derivative_x(field);
    let fy = f.derivative_y(field);
    if fx.is_zero() && fy.is_zero() {
        // f is a p-th power
        return radical_bivar(field, &pth_root_bivar(field, f));
    }
    let mut g = gcd_bivar(field, f, &fx)?;
    g = gcd_bivar(field, &g, &fy)?;
    if g.deg_y() == 0 && g.deg_x() == 0 {
        return Ok(f.monic_normal(field));
    }
    let (q, r) = exact_div_bivar(field, f, &g)?;
    debug_assert!(r, "gcd must divide");
    // q holds every factor whose multiplicity is prime to p; g may hide more
    let rq = radical_bivar(field, &q)?;
    let rg = radical_bivar(field, &g)?;
    // lcm(rq, rg)
    let common = gcd_bivar(field, &rq, &rg)?;
    let (extra, ok) = exact_div_bivar(field, &rg, &common)?;
    debug_assert!(ok);
    Ok(rq.mul(field, &extra).monic_normal(field))
}

/// Exact division of bivariate polynomials (via y-division when possible,
/// else content manipulation). Returns (quotient, divided_exactly).
fn exact_div_bivar<F: FiniteField>(
    field: &F,
    a: &BiPoly<F>,
    b: &BiPoly<F>,
) -> Result<(BiPoly<F>, bool)> {
    if b.deg_y() == 0 {
        // divide every coefficient by the unipoly b
        let mut cy = vec![];
        for c in &a.cy {
            match c.div_exact(field, &b.cy[0]) {
                Ok(q) => cy.push(q),
                Err(_) => return Ok((BiPoly::zero(), false)),
            }
        }
        return Ok((BiPoly { cy }.normalize(), true));
    }
    // scale so the divisor is monic in y over F(x): use pseudo division on
    // the monicized form
    let lb = b.cy.last().unwrap().clone();
    if lb.degree() == 0 {
        let (q, r) = a.divrem_y(field, &b.monic_normal(field))?;
        if !r.is_zero() {
            return Ok((BiPoly::zero(), false));
        }
        let scale = field.inv(&lb.coeffs[0])?;
        return Ok((q.scale(field, &scale), true));
    }
    // general divisor: check divisibility via pseudo division then recover
    // quotient coefficient-wise: a = q*b => content tricks; do it by solving
    // degree by degree in y
    let dq = match a.deg_y().checked_sub(b.deg_y()) {
        Some(d) => d,
        None => return Ok((BiPoly::zero(), false)),
    };
    let mut rem = a.clone();
    let mut qy: Vec<UniPoly<F>> = vec![UniPoly::zero(); dq + 1];
    for k in (0..=dq).rev() {
        if rem.deg_y() < b.deg_y() + k {
            continue;
        }
        let top = rem.cy.get(b.deg_y() + k).cloned().unwrap_or_else(UniPoly::zero);
        if top.is_zero() {
            continue;
        }
        let Ok(c) = top.div_exact(field, &lb) else {
            return Ok((BiPoly::zero(), false));
        };
        qy[k] = c.clone();
        let mut sub = BiPoly { cy: vec![UniPoly::<F>::zero(); k] };
        for bc in &b.cy {
            sub.cy.push(bc.mul(field, &c));
        }
        rem = rem.sub(field, &sub.normalize());
    }
    if rem.is_zero() {
        Ok((BiPoly { cy: qy }.normalize(), true))
    } else {
        Ok((BiPoly::zero(), false))
    }
}

fn pth_root_bivar<F: FiniteField>(field: &F, f: &BiPoly<F>) -> BiPoly<F> {
    let p = field.char() as usize;
    let mut cy = vec![];
    let mut i = 0;
    while i < f.cy.len() {
        let c = &f.cy[i];
        // c must itself lie in F[x^p] with p-th power coefficients
        let mut coeffs = vec![];
        let mut j = 0;
        while j < c.coeffs.len() {
            coeffs.push(field.pth_root(&c.coeffs[j]));
            j += p;
        }
        cy.push(UniPoly::from_coeffs(field, coeffs));
        i += p;
    }
    BiPoly { cy }.normalize()
}

/// Hensel pair lift: G = U*W mod (x - 0)^prec with U(0,y) = u0, W(0,y) = w0
/// coprime and everything monic in y. G must be monic in y.
fn lift_pair<F: FiniteField>(
    field: &F,
    g: &BiPoly<F>,
    u0: &UniPoly<F>,
    w0: &UniPoly<F>,
    prec: usize,
) -> Result<(BiPoly<F>, BiPoly<F>)> {
    let (gcd, s, t) = u0.xgcd(field, w0)?;
    if gcd.degree() != 0 {
        return Err(domain("Hensel factors must be coprime"));
    }
    let mut u = BiPoly::from_unipoly_y(field, u0);
    let mut w = BiPoly::from_unipoly_y(field, w0);
    for k in 1..prec {
        let e = g.sub(field, &u.mul(field, &w)).trunc_x(field, prec);
        // coefficient of x^k as a polynomial in y
        let ek = UniPoly::from_coeffs(
            field,
            e.cy.iter()
                .map(|c| c.coeff(field, k))
                .collect::<Vec<_>>(),
        );
        if ek.is_zero() {
            continue;
        }
        // delta_u * w0 + delta_w * u0 = ek with deg delta_u < deg u0
        let at = ek.mul(field, &t);
        let (q, du) = at.divrem(field, u0)?;
        let dw = ek.mul(field, &s).add(field, &q.mul(field, w0));
        // u += x^k du, w += x^k dw
        let bump = |base: &BiPoly<F>, delta: &UniPoly<F>| -> BiPoly<F> {
            let mut out = base.clone();
            for (yi, c) in delta.coeffs.iter().enumerate() {
                if field.is_zero(c) {
                    continue;
                }
                while out.cy.len() <= yi {
                    out.cy.push(UniPoly::zero());
                }
                let add = UniPoly::monomial(field, c.clone(), k);
                out.cy[yi] = out.cy[yi].add(field, &add);
            }
            out.normalize()
        };
        u = bump(&u, &du);
        w = bump(&w, &dw);
    }
    Ok((u, w))
}

/// Lifts all local factors of g(x0 + X, y) to precision X^prec.
fn lift_tree<F: FiniteField>(
    field: &F,
    g: &BiPoly<F>,
    locals: &[UniPoly<F>],
    prec: usize,
) -> Result<Vec<BiPoly<F>>> {
    if locals.len() == 1 {
        return Ok(vec![g.trunc_x(field, prec)]);
    }
    let mid = locals.len() / 2;
    let mut u0 = UniPoly::one(field);
    for l in &locals[..mid] {
        u0 = u0.mul(field, l);
    }
    let mut w0 = UniPoly::one(field);
    for l in &locals[mid..] {
        w0 = w0.mul(field, l);
    }
    let (u, w) = lift_pair(field, g, &u0, &w0, prec)?;
    let mut left = lift_tree(field, &u, &locals[..mid], prec)?;
    let mut right = lift_tree(field, &w, &locals[mid..], prec)?;
    left.append(&mut right);
    Ok(left)
}

/// Substitutes x -> x + x0.
fn shift_x<F: FiniteField>(field: &F, f: &BiPoly<F>, x0: &F::Elem) -> BiPoly<F> {
    let cy = f
        .cy
        .iter()
        .map(|c| {
            // c(x + x0) via Horner on the shifted variable
            let mut out = UniPoly::<F>::zero();
            let shift = UniPoly::from_coeffs(field, vec![x0.clone(), field.one()]);
            for coeff in c.coeffs.iter().rev() {
                out = out
                    .mul(field, &shift)
                    .add(field, &UniPoly::constant(field, coeff.clone()));
            }
            out
        })
        .collect();
    BiPoly { cy }.normalize()
}

/// Irreducible factors (distinct, canonically scaled) of a squarefree
/// primitive polynomial that is monic in y.
fn factor_monic_squarefree<F: FiniteField>(
    field: &F,
    g: &BiPoly<F>,
    rng: &mut Rng,
) -> Result<Vec<BiPoly<F>>> {
    let dy = g.deg_y();
    if dy == 0 {
        return Err(domain("expected positive y-degree"));
    }
    if dy == 1 {
        return Ok(vec![g.clone()]);
    }
    // find x0 with squarefree specialization
    let order = field.order();
    let mut x0 = None;
    let tries = order.min(4 * (g.deg_x() as u128 + 1) * (dy as u128) + 32);
    for i in 0..tries {
        let cand = field.elem_at(i % order);
        let u = g.eval_x(field, &cand);
        if u.degree() == dy {
            let ud = u.derivative(field);
            if !ud.is_zero() && u.gcd(field, &ud)?.degree() == 0 {
                x0 = Some(cand);
                break;
            }
        }
    }
    let Some(x0) = x0 else {
        return brute_force_factor(field, g);
    };
    let u = g.eval_x(field, &x0);
    let (_, local_factors) = u.factor(field, rng)?;
    let locals: Vec<UniPoly<F>> = local_factors.into_iter().map(|(f, _)| f).collect();
    if locals.len() == 1 {
        return Ok(vec![g.clone()]);
    }
    let prec = g.deg_x() + 1;
    let shifted = shift_x(field, g, &x0);
    let lifted = lift_tree(field, &shifted, &locals, prec)?;
    // recombination by trial division
    let neg_x0 = field.neg(&x0);
    let mut remaining: Vec<BiPoly<F>> = lifted;
    let mut g_cur = g.clone();
    let mut factors = vec![];
    let mut size = 1usize;
    while 2 * size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        let mut found = None;
        'subsets: for combo in combinations(&idxs, size) {
            let mut cand = BiPoly::from_unipoly_y(field, &UniPoly::one(field));
            for &i in &combo {
                cand = cand.mul(field, &remaining[i]).trunc_x(field, prec);
            }
            // shift back: candidate in x - x0 coordinates
            let cand_back = shift_x(field, &cand, &neg_x0);
            if cand_back.divides(field, &g_cur) {
                found = Some((combo, cand_back));
                break 'subsets;
            }
        }
        match found {
            Some((combo, cand)) => {
                let (q, ok) = exact_div_bivar(field, &g_cur, &cand)?;
                debug_assert!(ok);
                g_cur = q;
                factors.push(cand.monic_normal(field));
                let keep: Vec<BiPoly<F>> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                remaining = keep;
            }
            None => size += 1,
        }
    }
    if g_cur.deg_y() > 0 || g_cur.deg_x() > 0 {
        factors.push(g_cur.monic_normal(field));
    }
    Ok(factors)
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![];
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, items: &[usize], start: usize, k: usize) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(out, cur, items, i + 1, k);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, items, 0, k);
    out
}

/// Exhaustive factor search for tiny fields: scans candidate factors of low
/// total degree. Capped; only reachable when no squarefree specialization
/// point exists in a very small field.
fn brute_force_factor<F: FiniteField>(field: &F, g: &BiPoly<F>) -> Result<Vec<BiPoly<F>>> {
    let total = g.deg_x() + g.deg_y();
    let mut g_cur = g.clone();
    let mut factors: Vec<BiPoly<F>> = vec![];
    let q = field.order();
    for t in 1..=total / 2 {
        // candidate support: monomials x^a y^b with a + b <= t
        let monos: Vec<(usize, usize)> = (0..=t)
            .flat_map(|a| (0..=(t - a)).map(move |b| (a, b)))
            .collect();
        let count = match q.checked_pow(monos.len() as u32) {
            Some(c) if c <= 4_000_000 => c,
            _ => return Err(resource("bivariate brute-force factor space too large")),
        };
        let mut idx = 0u128;
        while idx < count {
            idx += 1;
            let mut rem = idx - 1;
            let mut cand = BiPoly::<F>::zero();
            for (a, b) in &monos {
                let c = field.elem_at(rem % q);
                rem /= q;
                if !field.is_zero(&c) {
                    while cand.cy.len() <= *b {
                        cand.cy.push(UniPoly::zero());
                    }
                    let add = UniPoly::monomial(field, c, *a);
                    cand.cy[*b] = cand.cy[*b].add(field, &add);
                }
            }
            let cand = cand.normalize();
            if cand.is_zero() || (cand.deg_y() == 0 && cand.deg_x() == 0) {
                continue;
            }
            while cand.divides(field, &g_cur) {
                let (qq, ok) = exact_div_bivar(field, &g_cur, &cand)?;
                if !ok {
                    break;
                }
                factors.push(cand.monic_normal(field));
                g_cur = qq;
                if g_cur.deg_x() == 0 && g_cur.deg_y() == 0 {
                    break;
                }
            }
        }
    }
    if g_cur.deg_y() > 0 || g_cur.deg_x() > 0 {
        factors.push(g_cur.monic_normal(field));
    }
    Ok(factors)
}

/// Distinct irreducible factors of any nonzero bivariate polynomial
/// (multiplicities discarded: callers factor radicals).
pub fn factor_bivar_squarefree<F: FiniteField>(
    field: &F,
    f: &BiPoly<F>,
    rng: &mut Rng,
) -> Result<Vec<BiPoly<F>>> {
    if f.is_zero() {
        return Err(domain("factorization of zero"));
    }
    let f = radical_bivar(field, f)?;
    let mut factors = vec![];
    // content: purely-x factors
    let content = f.content_x(field)?;
    if content.degree() > 0 {
        let (_, cf) = content.factor(field, rng)?;
        for (u, _) in cf {
            factors.push(BiPoly::from_unipoly_x(&u));
        }
    }
    let prim = f.div_content(field, &content)?;
    if prim.deg_y() == 0 {
        return Ok(factors);
    }
    // monicize in y
    let lc = prim.cy.last().unwrap().clone();
    if lc.degree() == 0 {
        let monic = prim.monic_normal(field);
        factors.extend(factor_monic_squarefree(field, &monic, rng)?);
        return Ok(factors);
    }
    let dy = prim.deg_y();
    let mut monic = BiPoly { cy: vec![UniPoly::<F>::zero(); dy + 1] };
    // g_i = c_i * lc^(dy - 1 - i); g_dy = 1
    for (i, c) in prim.cy.iter().enumerate() {
        if i == dy {
            monic.cy[i] = UniPoly::one(field);
        } else {
            let mut acc = c.clone();
            for _ in 0..(dy - 1 - i) {
                acc = acc.mul(field, &lc);
            }
            monic.cy[i] = acc;
        }
    }
    let monic = monic.normalize();
    // monicization can introduce multiplicity-free spurious content in lc;
    // factor the squarefree part and map factors back
    let monic_rad = radical_bivar(field, &monic)?;
    for h in factor_monic_squarefree(field, &monic_rad, rng)? {
        // map back: y -> y * lc, then strip content
        let mapped = substitute_y_scaled(field, &h, &lc);
        let content = mapped.content_x(field)?;
        let back = mapped.div_content(field, &content)?.monic_normal(field);
        if back.divides(field, &prim) {
            factors.push(back);
        }
    }
    Ok(factors)
}

/// h(x, y*l(x)) for unipoly l.
fn substitute_y_scaled<F: FiniteField>(field: &F, h: &BiPoly<F>, l: &UniPoly<F>) -> BiPoly<F> {
    let mut cy = vec![];
    let mut lpow = UniPoly::one(field);
    for c in &h.cy {
        cy.push(c.mul(field, &lpow));
        lpow = lpow.mul(field, l);
    }
    BiPoly { cy }.normalize()
}

/// Per-factor classification of a plane curve over F_p.
#[derive(Debug, Clone)]
pub struct PlaneFactor {
    pub poly: SparsePoly<PrimeField>,
    /// number of conjugate absolutely irreducible components this
    /// F_p-irreducible factor splits into (1 = absolutely irreducible)
    pub conjugates: usize,
}

#[derive(Debug, Clone)]
pub struct PlaneComponents {
    pub fp_definable_abs_irreducible: usize,
    pub total_abs_irreducible: usize,
    pub factors: Vec<PlaneFactor>,
    /// true when squarefree reduction removed multiplicity
    pub had_multiplicity: bool,
}

/// Counts absolutely irreducible components of the plane curve f = 0:
/// factors f over F_p, then determines each factor's conjugate count by
/// refactoring over F_{p^j} for divisors j of its degree.
pub fn plane_components(
    field: &PrimeField,
    f: &SparsePoly<PrimeField>,
    rng: &mut Rng,
) -> Result<PlaneComponents> {
    if f.is_zero() {
        return Err(domain("plane_components of the zero polynomial"));
    }
    let bf = BiPoly::from_sparse(field, f);
    let rad = radical_bivar(field, &bf)?;
    let had_multiplicity = rad != bf.monic_normal(field);
    let factors = factor_bivar_squarefree(field, &rad, rng)?;
    let mut out = vec![];
    let mut fp_def = 0usize;
    let mut total = 0usize;
    for h in &factors {
        let sp = h.to_sparse(field);
        let t = sp.degree() as usize;
        let conj = if t <= 1 {
            1
        } else if h.deg_y() == 0 || h.deg_x() == 0 {
            // purely univariate factor: irreducible of degree t splits into
            // t conjugate lines over F_{p^t}
            t
        } else {
            conjugate_count(field, h, t, rng)?
        };
        if conj == 1 {
            fp_def += 1;
        }
        total += conj;
        out.push(PlaneFactor { poly: sp, conjugates: conj });
    }
    Ok(PlaneComponents {
        fp_definable_abs_irreducible: fp_def,
        total_abs_irreducible: total,
        factors: out,
        had_multiplicity,
    })
}

/// Number of absolutely irreducible conjugate factors of an F_p-irreducible
/// bivariate polynomial of total degree t: the largest divisor j of t such
/// that the polynomial splits into exactly j factors over F_{p^j}.
fn conjugate_count(
    field: &PrimeField,
    h: &BiPoly<PrimeField>,
    t: usize,
    rng: &mut Rng,
) -> Result<usize> {
    let mut best = 1usize;
    for j in 2..=t {
        if t % j != 0 {
            continue;
        }
        let ext = ExtField::generate(field.clone(), j)?;
        let lifted = BiPoly::<ExtField> {
            cy: h
                .cy
                .iter()
                .map(|c| {
                    UniPoly::from_coeffs(
                        &ext,
                        c.coeffs.iter().map(|v| ext.embed(*v)).collect(),
                    )
                })
                .collect(),
        };
        let fs = factor_bivar_squarefree(&ext, &lifted, rng)?;
        if fs.len() == j {
            best = best.max(j);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::text::parse_poly;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(field: &PrimeField, s: &str) -> SparsePoly<PrimeField> {
        let zz = crate::arith::ZZ;
        parse_poly(&zz, 2, s).unwrap().reduce_mod_p(field)
    }

    #[test]
    fn xy_over_f5_two_rational_lines() {
        let f = fp(5);
        let mut rng = Rng::new(1);
        let pc = plane_components(&f, &poly(&f, "x1*x2"), &mut rng).unwrap();
        assert_eq!(pc.fp_definable_abs_irreducible, 2);
        assert_eq!(pc.total_abs_irreducible, 2);
    }

    #[test]
    fn split_conic_over_f7() {
        // x^2 - 2y^2 = (x - 3y)(x + 3y) over F_7
        let f = fp(7);
        let mut rng = Rng::new(1);
        let pc = plane_components(&f, &poly(&f, "x1^2 - 2*x2^2"), &mut rng).unwrap();
        assert_eq!(pc.fp_definable_abs_irreducible, 2);
        assert_eq!(pc.total_abs_irreducible, 2);
    }

    #[test]
    fn norm_form_over_f3_two_conjugate_lines() {
        // x^2 + y^2 is irreducible over F_3 but splits over F_9
        let f = fp(3);
        let mut rng = Rng::new(1);
        let pc = plane_components(&f, &poly(&f, "x1^2 + x2^2"), &mut rng).unwrap();
        assert_eq!(pc.fp_definable_abs_irreducible, 0);
        assert_eq!(pc.total_abs_irreducible, 2);
    }

    #[test]
    fn conic_is_absolutely_irreducible() {
        let f = fp(101);
        let mut rng = Rng::new(1);
        let pc = plane_components(&f, &poly(&f, "x1^2 + x2^2 - 1"), &mut rng).unwrap();
        assert_eq!(pc.fp_definable_abs_irreducible, 1);
        assert_eq!(pc.total_abs_irreducible, 1);
    }

    #[test]
    fn squarefree_reduction_reported() {
        let f = fp(5);
        let mut rng = Rng::new(1);
        let pc = plane_components(&f, &poly(&f, "x1^2*x2"), &mut rng).unwrap();
        assert!(pc.had_multiplicity);
        assert_eq!(pc.fp_definable_abs_irreducible, 2);
    }

    #[test]
    fn split_linear_products_count_equals_degree() {
        // product of distinct linear forms: total components = degree
        let f = fp(11);
        let mut rng = Rng::new(2);
        let zz = crate::arith::ZZ;
        let a = parse_poly(&zz, 2, "x1").unwrap();
        let b = parse_poly(&zz, 2, "x2").unwrap();
        let c = parse_poly(&zz, 2, "x1 + x2 - 1").unwrap();
        let prod = a.mul(&zz, &b).mul(&zz, &c).reduce_mod_p(&f);
        let pc = plane_components(&f, &prod, &mut rng).unwrap();
        assert_eq!(pc.total_abs_irreducible, 3);
        assert_eq!(pc.fp_definable_abs_irreducible, 3);
    }

    #[test]
    fn factorization_times_out_gracefully_small_fields() {
        // over F_2 the specialization points can run out; brute force covers
        let f = fp(2);
        let mut rng = Rng::new(3);
        let pc = plane_components(&f, &poly(&f, "x1*x2 + x1 + x2 + 1"), &mut rng).unwrap();
        // (x+1)(y+1)
        assert_eq!(pc.fp_definable_abs_irreducible, 2);
    }

    #[test]
    fn random_products_refactor() {
        // multiply random irreducible-ish linear/quadratic pieces and verify
        // the component counts
        let mut rng = Rng::new(44);
        for trial in 0..40 {
            let p = [5u64, 7, 11, 13][trial % 4];
            let field = fp(p);
            let zz = crate::arith::ZZ;
            let nfac = 1 + rng.below(3) as usize;
            let mut product = parse_poly(&zz, 2, "1").unwrap();
            let mut lines = std::collections::BTreeSet::new();
            for _ in 0..nfac {
                let a = 1 + rng.below(p - 1);
                let b = rng.below(p);
                let c = rng.below(p);
                lines.insert((a, b, c));
            }
            for (a, b, c) in &lines {
                let s = format!("{a}*x1 + {b}*x2 + {c}");
                product = product.mul(&zz, &parse_poly(&zz, 2, &s).unwrap());
            }
            let reduced = product.reduce_mod_p(&field);
            if reduced.is_zero() || reduced.degree() == 0 {
                continue;
            }
            let pc = plane_components(&field, &reduced, &mut rng).unwrap();
            // distinct lines scaled to canonical form may collide mod p; the
            // component count equals the number of distinct projective lines
            let mut canon = std::collections::BTreeSet::new();
            for (a, b, c) in &lines {
                let inv = crate::arith::fp::invmod(*a % p, p).unwrap();
                canon.insert((
                    1u64,
                    crate::arith::fp::mulmod(*b % p, inv, p),
                    crate::arith::fp::mulmod(*c % p, inv, p),
                ));
            }
            assert_eq!(
                pc.total_abs_irreducible,
                canon.len(),
                "p={p} lines={lines:?}"
            );
        }
    }
}
