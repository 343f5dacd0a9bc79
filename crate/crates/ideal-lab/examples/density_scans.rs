//! Good-prime density scans: Chebotarev root densities and the
//! dimension/irreducibility/reducibility base-change experiments on small
//! windows.

use ideal_lab::intpoly::from_i64;
use ideal_lab::lab::{
    chebotarev_floor, scan_chebotarev, scan_dim_preserve, scan_irred_preserve, scan_red_preserve,
    LabConfig,
};
use ideal_lab::primality::fixtures::fixture_by_name;
use ideal_lab::primality::{IdealInstance, InstanceClass};
use ideal_lab::arith::ZZ;
use ideal_lab::mpoly::text::parse_poly;

fn main() {
    let cfg = LabConfig::default();

    // roots of z^2 - 2 exist for half the primes; z^3 - 2 for two thirds
    for (label, q, rho) in [
        ("z^2 - 2", from_i64(&[-2, 0, 1]), 0.5),
        ("z^3 - 2", from_i64(&[-2, 0, 0, 1]), 2.0 / 3.0),
    ] {
        let r = scan_chebotarev(&q, (3, 20_000), &cfg).unwrap();
        println!(
            "{label}: fraction {:.4} over {} primes (Rosser-derived floor {:.0})",
            r.fraction,
            r.good + r.bad,
            chebotarev_floor((3, 20_000), rho)
        );
    }

    // dimension drops exactly at the primes dividing the mixing coefficient
    let zz = ZZ;
    let inst = IdealInstance::new(
        "dim-ex",
        2,
        vec![
            parse_poly(&zz, 2, "x1").unwrap(),
            parse_poly(&zz, 2, "x1 + 30*x2").unwrap(),
        ],
        InstanceClass { radical: true, equidim_cm: true },
        0,
    )
    .unwrap();
    let r = scan_dim_preserve(&inst, 0, (2, 100), &cfg).unwrap();
    println!("dim-preserve bad primes for <x1, x1 + 30 x2>: {:?}", r.bad_primes());

    // the parabola x1(x1 - 1) = 30 x2 splits exactly at p | 30
    let parabola = IdealInstance::new(
        "parabola",
        2,
        vec![parse_poly(&zz, 2, "x1^2 - x1 - 30*x2").unwrap()],
        InstanceClass { radical: true, equidim_cm: true },
        1,
    )
    .unwrap();
    let r = scan_irred_preserve(&parabola, (2, 500), &cfg).unwrap();
    println!("irred-preserve bad primes for the parabola: {:?}", r.bad_primes());

    // the tightness fixture: both 2 and 3 must be residues, density 1/4
    let f = fixture_by_name(1, "tightness3").unwrap();
    let r = scan_red_preserve(&f.instance, (5, 4000), f.truth.declared_modulus, &cfg).unwrap();
    println!(
        "red-preserve fraction for {} over primes 5..4000: {:.4} (declared {})",
        f.name,
        r.fraction,
        f.truth.good_density.unwrap()
    );
    println!("\nfull report:\n{}", r.to_text());
}
