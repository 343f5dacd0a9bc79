//! Logarithmic heights, the height-growth validators, and Sylvester
//! resultants with Bezout cofactors.

use ideal_lab::arith::{AlgNumberContext, ZZ};
use ideal_lab::mpoly::height::{height, mod_q_normalize, mul_with_bound_check, HeightProfile};
use ideal_lab::mpoly::resultant::{discriminant, resultant_disc};
use ideal_lab::mpoly::text::parse_poly;

fn main() {
    let zz = ZZ;
    let f = parse_poly(&zz, 2, "3*x1^2*x2 - 5").unwrap();
    println!("height(3 x1^2 x2 - 5) = {} bits", height(&f));

    let profile = HeightProfile::of(&[f.clone()]);
    println!(
        "profile: h = {}, d = {}, n = {}, sigma = {}",
        profile.h, profile.d, profile.n, profile.sigma
    );

    // products never exceed the h*m + m*d*log(n+1) growth bound
    let gs = vec![
        parse_poly(&zz, 2, "x1 + x2 + 1").unwrap(),
        parse_poly(&zz, 2, "x1 - x2 + 2").unwrap(),
        parse_poly(&zz, 2, "7*x1*x2 - 3").unwrap(),
    ];
    let (prod, ok) = mul_with_bound_check(&gs).unwrap();
    println!(
        "product has height {} (bound holds: {ok}): {}",
        height(&prod),
        prod.to_string_in(&zz)
    );

    // resultants: Res(x-2, x-5) and disc(x^2 - 2) under the f-rows-first
    // Sylvester convention
    let a = parse_poly(&zz, 1, "x1 - 2").unwrap();
    let b = parse_poly(&zz, 1, "x1 - 5").unwrap();
    let out = resultant_disc(&a, &b).unwrap();
    println!("Res(x-2, x-5) = {}", out.res);
    if let Some((ca, cb)) = &out.cofactors {
        println!(
            "  cofactors: ({}) * f + ({}) * g = {}",
            ca.to_string_in(&zz),
            cb.to_string_in(&zz),
            out.res
        );
    }
    let q = parse_poly(&zz, 1, "x1^2 - 2").unwrap();
    println!("disc(x^2 - 2) = {}", discriminant(&q).unwrap());

    // normalization modulo q(z): z^3 x = 2 z x in Z[sqrt 2][x]
    let ctx = AlgNumberContext::from_i64(&[-2, 0, 1]).unwrap();
    let zx = parse_poly(&zz, 2, "x1*x2^3").unwrap(); // x * z^3, z is the last variable
    let (normal, ok) = mod_q_normalize(&zx, &ctx).unwrap();
    println!("z^3 x mod (z^2 - 2): {:?} (bound holds: {ok})", normal.terms);
}
