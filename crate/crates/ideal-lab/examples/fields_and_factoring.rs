//! Finite-field arithmetic and univariate factorization: prime fields,
//! extension fields, Cantor-Zassenhaus splitting, and reduction maps from
//! roots of an integer polynomial mod p.

use ideal_lab::arith::{
    find_root_mod_p, AlgNumberContext, Domain, ExtField, FieldDomain, PrimeField, UniPoly,
};
use ideal_lab::rng::Rng;

fn main() {
    let f5 = PrimeField::new(5).unwrap();
    println!("3 + 4 = {} in F_5", f5.add(&3, &4));
    let f7 = PrimeField::new(7).unwrap();
    println!("2^-1 = {} in F_7", f7.inv(&2).unwrap());

    // F_9 = F_3[z]/(z^2 + 1): z * z = -1
    let f3 = PrimeField::new(3).unwrap();
    let q1 = UniPoly::from_coeffs(&f3, vec![1, 0, 1]);
    let f9 = ExtField::new(f3, &q1).unwrap();
    let z = f9.gen();
    println!("z * z = {} in F_9 = F_3[z]/(z^2+1)", f9.fmt_elem(&f9.mul(&z, &z)));

    // factor x^2 + 1 over a few fields
    let mut rng = Rng::new(7);
    for p in [3u64, 5, 13] {
        let field = PrimeField::new(p).unwrap();
        let f = UniPoly::from_coeffs(&field, vec![1, 0, 1]);
        let (_, factors) = f.factor(&field, &mut rng).unwrap();
        let rendered: Vec<String> = factors
            .iter()
            .map(|(g, m)| format!("({})^{m}", g.to_string_in(&field, "x")))
            .collect();
        println!("x^2 + 1 over F_{p}: {}", rendered.join(" * "));
    }

    // reduction maps Z[sqrt(2)] -> F_p exist for half the primes
    let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
    println!(
        "q = z^2 - 2 (disc {}), irreducibility certified mod {:?}",
        ctx.disc(),
        ctx.certify_irreducible()
    );
    for p in [5u64, 7, 11, 17, 23] {
        match find_root_mod_p(&ctx, p).unwrap() {
            Some(map) => println!("  p = {p}: alpha -> {}", map.root),
            None => println!("  p = {p}: no root (2 is a non-residue)"),
        }
    }
}
