//! The 3CNF-to-ideal reduction: given a formula, emit a radical
//! equidimensional Cohen-Macaulay ideal that is prime exactly when the
//! formula is unsatisfiable. Arithmetization maps a clause to the product of
//! (1 - literal) terms; the zero set on the hypercube is the satisfying
//! assignments, and the origin is adjoined by multiplying each clause
//! polynomial with every variable.

use num_bigint::BigInt;

use crate::arith::ZZ;
use crate::error::{usage, Result};
use crate::mpoly::SparsePoly;

use super::{IdealInstance, InstanceClass};

/// A CNF formula; literals are 1-based, negative = negated (DIMACS style).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub nvars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(nvars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for cl in &clauses {
            if cl.is_empty() {
                return Err(usage("empty clause"));
            }
            for &l in cl {
                let v = l.unsigned_abs() as usize;
                if l == 0 || v > nvars {
                    return Err(usage(format!("literal {l} out of range")));
                }
            }
        }
        Ok(Cnf { nvars, clauses })
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|cl| {
            cl.iter().any(|&l| {
                let v = assignment[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    v
                } else {
                    !v
                }
            })
        })
    }

    /// All satisfying assignments by hypercube enumeration (oracle).
    pub fn satisfying_assignments(&self) -> Vec<Vec<bool>> {
        let mut out = vec![];
        for mask in 0..(1u64 << self.nvars) {
            let assignment: Vec<bool> = (0..self.nvars).map(|i| (mask >> i) & 1 == 1).collect();
            if self.eval(&assignment) {
                out.push(assignment);
            }
        }
        out
    }
}

/// Clause polynomial: product over literals of (1 - literal), where a
/// positive literal x_k maps to x_k and a negated one to 1 - x_k. The
/// polynomial vanishes on a 0/1 point exactly when the clause is satisfied.
pub fn clause_polynomial(nvars: usize, clause: &[i32]) -> SparsePoly<ZZ> {
    let zz = ZZ;
    let one = SparsePoly::constant(&zz, nvars, BigInt::from(1));
    let mut acc = one.clone();
    for &l in clause {
        let var = SparsePoly::var(&zz, nvars, l.unsigned_abs() as usize - 1);
        let lit = if l > 0 { var } else { one.sub(&zz, &var) };
        acc = acc.mul(&zz, &one.sub(&zz, &lit));
    }
    acc
}

/// Booleanity polynomials x_i^2 - x_i.
pub fn booleanity(nvars: usize) -> Vec<SparsePoly<ZZ>> {
    let zz = ZZ;
    (0..nvars)
        .map(|i| {
            let x = SparsePoly::var(&zz, nvars, i);
            x.mul(&zz, &x).sub(&zz, &x)
        })
        .collect()
}

/// The coNP-hardness reduction: checks whether the all-false point solves the
/// arithmetized system; if so returns the single generator x1(x1 - 1), else
/// the system {x_i^2 - x_i} with every product x_j * g_i adjoined. Either
/// way the ideal is radical, equidimensional Cohen-Macaulay, and prime iff
/// the formula is unsatisfiable.
pub fn reduce_to_instance(cnf: &Cnf, name: &str) -> Result<IdealInstance> {
    let zz = ZZ;
    let n = cnf.nvars;
    // origin satisfies the arithmetized system iff all-false satisfies the formula
    let all_false = vec![false; n];
    if cnf.eval(&all_false) {
        // x1(x1 - 1) in one variable
        let x = SparsePoly::var(&zz, 1, 0);
        let gen = x.mul(&zz, &x).sub(&zz, &x);
        return IdealInstance::new(
            name,
            1,
            vec![gen],
            InstanceClass { radical: true, equidim_cm: true },
            0,
        );
    }
    let mut gens = booleanity(n);
    for cl in &cnf.clauses {
        let g = clause_polynomial(n, cl);
        for j in 0..n {
            let xj = SparsePoly::var(&zz, n, j);
            gens.push(xj.mul(&zz, &g));
        }
    }
    IdealInstance::new(
        name,
        n,
        gens,
        InstanceClass { radical: true, equidim_cm: true },
        0,
    )
}

/// Hypercube solutions of the reduced system (including the adjoined
/// origin); used as the enumeration oracle for the reduction.
pub fn reduced_system_hypercube_solutions(cnf: &Cnf) -> Vec<Vec<bool>> {
    let all_false = vec![false; cnf.nvars];
    if cnf.eval(&all_false) {
        // the reduction returned x1(x1-1): hypercube solutions {0, 1}
        return vec![vec![false], vec![true]];
    }
    let mut out = vec![all_false];
    for a in cnf.satisfying_assignments() {
        if a.iter().any(|&b| b) {
            out.push(a);
        }
    }
    out
}

/// Parses DIMACS-style CNF text: `p cnf <nvars> <nclauses>` header, clauses
/// as whitespace-separated literals terminated by 0, `c` comment lines.
pub fn parse_dimacs(input: &str) -> Result<Cnf> {
    let mut nvars = None;
    let mut clauses = vec![];
    let mut current: Vec<i32> = vec![];
    for (lineno, raw) in input.lines().enumerate() {
        let line = raw.trim();
        let perr = |msg: String| crate::error::Error::Parse { line: lineno + 1, msg };
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() < 3 || toks[0] != "cnf" {
                return Err(perr("header must be 'p cnf <vars> <clauses>'".into()));
            }
            nvars = Some(
                toks[1]
                    .parse::<usize>()
                    .map_err(|_| perr("bad variable count".into()))?,
            );
            continue;
        }
        for tok in line.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| perr(format!("bad literal '{tok}'")))?;
            if l == 0 {
                if current.is_empty() {
                    return Err(perr("empty clause".into()));
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let nvars = nvars.ok_or(crate::error::Error::Parse {
        line: 0,
        msg: "missing 'p cnf' header".into(),
    })?;
    Cnf::new(nvars, clauses)
}
