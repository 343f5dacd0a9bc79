//! Algebraic circuits: the text format, evaluation mod p, the size profile
//! with its degree/height bounds, and the reverse-mode derivative transform.

use ideal_lab::arith::{PrimeField, ZZ};
use ideal_lab::circuit::{format_circuit, parse_circuit};

fn main() {
    let text = "\
# (x1 + x2)^2 and x1 * x2
node 0 input x1
node 1 input x2
node 2 add 0:1 1:1
node 3 mul 2:1 2:1
node 4 mul 0:1 1:1
output 3 4
";
    let c = parse_circuit(text).unwrap();
    println!("parsed circuit (size {}):\n{}", c.size(), format_circuit(&c));

    let prof = c.profile();
    println!(
        "profile: size {}, outputs {}, degree bound {}, height bound {}",
        prof.size, prof.outputs, prof.degree_bound, prof.height_bound
    );

    let f5 = PrimeField::new(5).unwrap();
    println!("eval at (1, 2) mod 5 -> {:?}", c.eval_mod_p(&f5, &[1, 2]).unwrap());

    let zz = ZZ;
    let expanded = c.expand(1000).unwrap();
    for (i, f) in expanded.iter().enumerate() {
        println!("output {i} expands to {}", f.to_string_in(&zz));
    }

    // derivative transform: f_1..f_m then all partials, within 5sm size
    let d = c.derivative_transform();
    println!(
        "derivative transform: size {} <= 5 * {} * {} = {}",
        d.size(),
        c.size(),
        c.outputs.len(),
        5 * c.size() * c.outputs.len() as u64
    );
    for (i, f) in d.expand(1000).unwrap().iter().enumerate() {
        println!("  transform output {i}: {}", f.to_string_in(&zz));
    }
}
