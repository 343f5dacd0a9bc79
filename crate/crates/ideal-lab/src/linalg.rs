//! Exact linear algebra: fraction-free (Bareiss) elimination over the
//! integers, plain Gaussian elimination over fields, and Cramer-form
//! solutions for under/overdetermined systems.
//!
//! The integer solver returns solutions in the form `A y = den * b` where
//! `den` is the determinant of the pivot submatrix, so denominators are
//! always witnessed by an explicit minor.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::FieldDomain;

/// Outcome of solving `A x = b` over a field.
#[derive(Debug, Clone)]
pub struct FieldSolveOutcome<E> {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub consistent: bool,
    /// A solution with free (non-pivot) variables set to zero.
    pub solution: Option<Vec<E>>,
}

/// Gaussian elimination over a field. Pivot columns are chosen left to right,
/// which zeroes trailing dependent columns in the returned solution.
pub fn field_solve<F: FieldDomain>(
    field: &F,
    a: &[Vec<F::Elem>],
    b: &[F::Elem],
) -> FieldSolveOutcome<F::Elem> {
    let nrows = a.len();
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<F::Elem>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols = vec![];
    let mut pivot_rows = vec![];
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(pr) = (row..nrows).find(|&r| !field.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(row, pr);
        let inv = field.inv(&m[row][col]).expect("nonzero pivot");
        for j in col..=ncols {
            m[row][j] = field.mul(&m[row][j], &inv);
        }
        for r in 0..nrows {
            if r != row && !field.is_zero(&m[r][col]) {
                let factor = m[r][col].clone();
                for j in col..=ncols {
                    let t = field.mul(&factor, &m[row][j]);
                    m[r][j] = field.sub(&m[r][j], &t);
                }
            }
        }
        pivot_cols.push(col);
        pivot_rows.push(row);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let rank = pivot_cols.len();
    let consistent = (rank..nrows).all(|r| field.is_zero(&m[r][ncols]));
    let solution = if consistent {
        let mut x = vec![field.zero(); ncols];
        for (i, &c) in pivot_cols.iter().enumerate() {
            x[c] = m[i][ncols].clone();
        }
        Some(x)
    } else {
        None
    };
    FieldSolveOutcome { rank, pivot_cols, consistent, solution }
}

pub fn field_rank<F: FieldDomain>(field: &F, a: &[Vec<F::Elem>]) -> usize {
    if a.is_empty() {
        return 0;
    }
    let zero_rhs = vec![field.zero(); a.len()];
    // rank is unaffected by an all-zero augmented column
    field_solve(field, a, &zero_rhs).rank
}

/// Echelon data from fraction-free forward elimination.
struct BareissEchelon {
    /// row-echelon matrix (integer entries, minors of the input)
    m: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
    /// sign from row swaps
    sign: i8,
}

fn bareiss_forward(mut m: Vec<Vec<BigInt>>) -> BareissEchelon {
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut pivot_cols = vec![];
    let mut sign: i8 = 1;
    let mut prev = BigInt::one();
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(pr) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if pr != row {
            m.swap(row, pr);
            sign = -sign;
        }
        let pivot = m[row][col].clone();
        for r in row + 1..nrows {
            for j in col + 1..ncols {
                let t = &m[r][j] * &pivot - &m[r][col] * &m[row][j];
                let q = &t / &prev;
                debug_assert!((&q * &prev) == t, "Bareiss exactness violated");
                m[r][j] = q;
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
        pivot_cols.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    BareissEchelon { m, pivot_cols, sign }
}

/// Rank of an integer matrix, fraction-free.
pub fn int_rank(a: &[Vec<BigInt>]) -> usize {
    bareiss_forward(a.to_vec()).pivot_cols.len()
}

/// Determinant of a square integer matrix.
pub fn int_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(a.iter().all(|r| r.len() == n));
    let ech = bareiss_forward(a.to_vec());
    if ech.pivot_cols.len() < n {
        return BigInt::zero();
    }
    let last = ech.m[n - 1][ech.pivot_cols[n - 1]].clone();
    if ech.sign < 0 {
        -last
    } else {
        last
    }
}

/// Outcome of the Cramer-form integer solve.
#[derive(Debug, Clone)]
pub struct IntSolveOutcome {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub consistent: bool,
    /// Determinant (up to row-swap sign) of the pivot submatrix; the common
    /// denominator of the solution.
    pub den: BigInt,
    /// Integer vector y with `A y = den * b`, zero on non-pivot columns.
    pub solution: Option<Vec<BigInt>>,
}

/// Solves `A x = b` over Q in Cramer form. Follows the generalized Cramer
/// recipe: the first linearly independent columns are kept, all trailing
/// dependent variables are set to zero, and every returned numerator and the
/// common denominator are minors of `[A | b]`.
pub fn int_solve_cramer(a: &[Vec<BigInt>], b: &[BigInt]) -> IntSolveOutcome {
    let nrows = a.len();
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    let aug: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let ech = bareiss_forward(aug);
    // pivots that landed in the augmented column mean inconsistency
    let mut pivot_cols: Vec<usize> = vec![];
    let mut consistent = true;
    for &c in &ech.pivot_cols {
        if c == ncols {
            consistent = false;
        } else {
            pivot_cols.push(c);
        }
    }
    let rank = pivot_cols.len();
    if nrows == 0 || ncols == 0 {
        let consistent = b.iter().all(|x| x.is_zero());
        return IntSolveOutcome {
            rank: 0,
            pivot_cols: vec![],
            consistent,
            den: BigInt::one(),
            solution: if consistent { Some(vec![BigInt::zero(); ncols]) } else { None },
        };
    }
    if !consistent {
        return IntSolveOutcome { rank, pivot_cols, consistent, den: BigInt::zero(), solution: None };
    }
    // denominator: determinant of the pivot submatrix
    let den = if rank == 0 {
        BigInt::one()
    } else {
        let last = ech.m[rank - 1][pivot_cols[rank - 1]].clone();
        if ech.sign < 0 {
            -last
        } else {
            last
        }
    };
    // rational back-substitution on the echelon, then scale by den
    let mut x = vec![BigRational::zero(); ncols];
    for i in (0..rank).rev() {
        let pc = pivot_cols[i];
        let mut acc = BigRational::from_integer(ech.m[i][ncols].clone());
        for j in pc + 1..ncols {
            if !ech.m[i][j].is_zero() {
                acc -= BigRational::from_integer(ech.m[i][j].clone()) * &x[j];
            }
        }
        x[pc] = acc / BigRational::from_integer(ech.m[i][pc].clone());
    }
    let mut y = Vec::with_capacity(ncols);
    for xi in &x {
        let scaled = xi * BigRational::from_integer(den.clone());
        debug_assert!(scaled.is_integer(), "Cramer solution must clear the pivot minor");
        y.push(scaled.to_integer());
    }
    IntSolveOutcome { rank, pivot_cols, consistent, den, solution: Some(y) }
}

/// dim(column-space(A) ∩ column-space(B)) via the rank identity
/// rank([A|B]) = rank A + rank B - dim intersection.
pub fn int_column_space_intersection_dim(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> usize {
    let ra = int_rank(a);
    let rb = int_rank(b);
    if a.is_empty() {
        return 0;
    }
    let joined: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let mut r = x.clone();
            r.extend(y.iter().cloned());
            r
        })
        .collect();
    ra + rb - int_rank(&joined)
}

/// Absolute value helper used by height checks on determinants.
pub fn int_abs(a: &BigInt) -> BigInt {
    a.abs()
}
