//! Exhaustive point counting over F_{p^k}^n, the Lang-Weil two-component
//! classifier, the plane-curve component oracle, Jacobian ranks, and random
//! slicing.

use ideal_lab::arith::{PrimeField, ZZ};
use ideal_lab::mpoly::text::parse_poly;
use ideal_lab::rng::Rng;
use ideal_lab::variety::{
    count_points, desk_floor, jacobian_rank_at, langweil_classify, plane_components,
    random_slice, FloorMode,
};

fn main() {
    let zz = ZZ;
    let p = |n: usize, s: &str| parse_poly(&zz, n, s).unwrap();

    // small exact counts
    for (label, poly, q) in [
        ("circle over F_5", p(2, "x1^2 + x2^2 - 1"), 5u64),
        ("two axes over F_7", p(2, "x1*x2"), 7),
    ] {
        let f = PrimeField::new(q).unwrap();
        let c = count_points(&[poly.reduce_mod_p(&f)], q, 1, 1 << 20).unwrap();
        println!("{label}: {} points", c.count);
    }

    // counting over an extension: two rational lines have 2q - 1 points
    let f = PrimeField::new(5).unwrap();
    let axes = p(2, "x1*x2").reduce_mod_p(&f);
    for k in 1..=2 {
        let c = count_points(&[axes.clone()], 5, k, 1 << 22).unwrap();
        println!("two lines over F_(5^{k}): {} points", c.count);
    }

    // the classifier: counts near 2p mean two rational components, counts
    // near p mean at most one
    let big = 300_007u64;
    println!("desk validity floor for degree 2: {}", desk_floor(2));
    for (label, poly) in [
        ("two lines", p(2, "x1*x2")),
        ("irreducible conic", p(2, "x1^2 + x2^2 - 1")),
    ] {
        let field = PrimeField::new(big).unwrap();
        let reduced = poly.reduce_mod_p(&field);
        let n = count_points(&[reduced.clone()], big, 1, 1 << 34).unwrap();
        let class = langweil_classify(&n.count, big, 1, 2, FloorMode::Desk).unwrap();
        let mut rng = Rng::new(1);
        let oracle = plane_components(&field, &reduced, &mut rng).unwrap();
        println!(
            "{label} at p = {big}: N = {}, classifier {:?}, oracle {}/{} rational components",
            n.count,
            class.verdict,
            oracle.fp_definable_abs_irreducible,
            oracle.total_abs_irreducible
        );
    }

    // Jacobian rank detects the lower-dimensional component of a plane+line
    let f101 = PrimeField::new(101).unwrap();
    let sys: Vec<_> = [p(3, "x1*x2"), p(3, "x1*x3")]
        .iter()
        .map(|g| g.reduce_mod_p(&f101))
        .collect();
    println!(
        "Jacobian rank of (x1 x2, x1 x3): {} on the line, {} on the plane",
        jacobian_rank_at(&f101, &sys, &[1, 0, 0]).unwrap(),
        jacobian_rank_at(&f101, &sys, &[0, 3, 4]).unwrap()
    );

    // random slicing of a plane down to a line, reproducible from the seed
    let (sliced, record) = random_slice(&[p(3, "x1")], 2, 42, 10_000).unwrap();
    println!(
        "sliced {{x1 = 0}} by {} random form(s): {}",
        record.forms.len(),
        sliced.last().unwrap().to_string_in(&zz)
    );
}
