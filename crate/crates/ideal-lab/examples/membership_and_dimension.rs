//! Ideal membership as linear algebra: the membership matrix, Cramer-form
//! certificates, row-dropped elimination witnesses, dimension certificates,
//! and the degree-bound calculators.

use ideal_lab::arith::{PrimeField, ZZ};
use ideal_lab::idealsys::{
    bound_calculators, dim_certificate, elimination_witness, elimination_witness_fp, member,
};
use ideal_lab::mpoly::text::parse_poly;
use ideal_lab::mpoly::Monomial;

fn main() {
    let zz = ZZ;
    let p = |n: usize, s: &str| parse_poly(&zz, n, s).unwrap();

    // 1 lies in <x, x-1>: the classic unit certificate
    let gens = [p(1, "x1"), p(1, "x1 - 1")];
    let cert = member(&gens, &p(1, "1"), 0, 10_000).unwrap().unwrap();
    println!(
        "1 = ({}) * x + ({}) * (x - 1), denominator {}",
        cert.cofactors[0].to_string_in(&zz),
        cert.cofactors[1].to_string_in(&zz),
        cert.den
    );

    // x2 is not reachable from <x1> at any cap
    let not_member = member(&[p(2, "x1")], &p(2, "x2"), 4, 10_000).unwrap();
    println!("x2 in <x1>? {}", not_member.is_some());

    // elimination with a transfer obstruction: x2 lies in <x1, x1 + 30 x2>
    // over Q, and mod p exactly when p does not divide the denominator
    let sys = [p(2, "x1"), p(2, "x1 + 30*x2")];
    let target = Monomial(vec![0, 1]);
    let w = elimination_witness(&sys, &[1], 1, &target, 10_000).unwrap().unwrap();
    println!(
        "elimination witness {} with denominator {}",
        w.poly.to_string_in(&zz),
        w.den
    );
    for q in [2u64, 3, 5, 7, 11] {
        let field = PrimeField::new(q).unwrap();
        let reduced: Vec<_> = sys.iter().map(|f| f.reduce_mod_p(&field)).collect();
        let got = elimination_witness_fp(&field, &reduced, &[1], 1, &target, 10_000).unwrap();
        println!("  mod {q}: witness exists = {}", got.is_some());
    }

    // dimension certificate: <x1 x2> is a curve in the plane
    let curve = [p(2, "x1*x2")];
    let cert = dim_certificate(&curve, 1, 3, 20_000).unwrap();
    println!(
        "dim <x1 x2> = 1: lower evidence {:?}, upper witnesses {}",
        cert.lower.as_ref().map(|l| l.free_subset.clone()),
        cert.upper.as_ref().map(|u| u.witnesses.len()).unwrap_or(0)
    );

    // degree-bound calculators
    let b = bound_calculators(&[2, 2], 3, 1).unwrap();
    println!(
        "degrees (2,2), n = 3, r = 1: N = {}, B = {}, Bezout cap = {}",
        b.jelonek_n, b.mayr_ritscher_b, b.bezout_cap
    );
}
