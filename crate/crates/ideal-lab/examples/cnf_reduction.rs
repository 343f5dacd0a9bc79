//! The 3CNF-to-ideal reduction: satisfiable formulas yield reducible ideals
//! (at least two hypercube points), unsatisfiable ones yield the prime
//! origin-only ideal.

use ideal_lab::lab::instance_file::format_instance;
use ideal_lab::primality::conp::{parse_dimacs, reduce_to_instance, Cnf};

fn main() {
    // a satisfiable single-clause formula in DIMACS form
    let dimacs = "c one clause\np cnf 1 1\n1 1 1 0\n";
    let cnf = parse_dimacs(dimacs).unwrap();
    let inst = reduce_to_instance(&cnf, "one-clause").unwrap();
    println!("reduced instance for (x1 v x1 v x1):\n{}", format_instance(&inst));

    // all eight sign patterns over three variables: unsatisfiable, so the
    // reduced system vanishes only at the origin and the ideal is prime
    let mut clauses = vec![];
    for mask in 0..8 {
        let lit = |i: usize| {
            if (mask >> i) & 1 == 1 {
                (i as i32) + 1
            } else {
                -((i as i32) + 1)
            }
        };
        clauses.push(vec![lit(0), lit(1), lit(2)]);
    }
    let unsat = Cnf::new(3, clauses).unwrap();
    println!(
        "8-clause core: satisfiable assignments = {}",
        unsat.satisfying_assignments().len()
    );
    let inst2 = reduce_to_instance(&unsat, "unsat-core").unwrap();
    println!(
        "reduced system: {} generators in {} variables",
        inst2.generators.len(),
        inst2.nvars
    );

    // a formula whose arithmetization vanishes at the origin short-circuits
    // to the single generator x1(x1 - 1)
    let origin = Cnf::new(2, vec![vec![-1, -2, -1]]).unwrap();
    let inst3 = reduce_to_instance(&origin, "origin-case").unwrap();
    println!(
        "origin-satisfying formula reduces to: {}",
        format_instance(&inst3)
    );
}
