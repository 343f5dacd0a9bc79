//! The set lower-bound protocol: single rounds, majority amplification,
//! transcripts and replay, cheating provers, and the desk satisfiability
//! protocol over a prime window.

use ideal_lab::amcore::{
    gs_protocol, gs_round, hn_desk, replay_gs_round, GsInstance, ProtocolParams, ProverKind,
};
use ideal_lab::arith::ZZ;
use ideal_lab::mpoly::text::parse_poly;

fn main() {
    // |S| = 2K: single rounds accept with probability >= 3/8
    let big = GsInstance::from_list(8, (0..32u128).map(|i| i * 7 % 256).collect());
    let small = GsInstance::from_list(8, (0..16u128).map(|i| i * 11 % 256).collect());
    let mut hits_big = 0;
    let mut hits_small = 0;
    let rounds = 500;
    for seed in 0..rounds {
        if gs_round(&big, 16, seed, ProverKind::Honest).accepted {
            hits_big += 1;
        }
        if gs_round(&small, 16, 9_000 + seed, ProverKind::Honest).accepted {
            hits_small += 1;
        }
    }
    println!(
        "per-round accept frequency: |S| = 2K: {:.3}, |S| = K: {:.3}",
        hits_big as f64 / rounds as f64,
        hits_small as f64 / rounds as f64
    );

    // amplified verdicts separate the two promises
    let params = ProtocolParams::new(16, 4242).with_reps(400);
    let yes = gs_protocol(&big, &params, ProverKind::Honest).unwrap();
    let no = gs_protocol(&small, &params, ProverKind::Honest).unwrap();
    println!(
        "amplified: |S| = 2K accepted = {} ({}/{} rounds), |S| = K accepted = {}",
        yes.accepted, yes.accept_rounds, yes.reps, no.accepted
    );

    // transcripts serialize and replay bit-exactly
    let t = &yes.transcripts[0];
    println!("first-round transcript:\n{}", t.to_text());
    println!("replay verdict matches: {}", replay_gs_round(&big, t).unwrap() == t.verdict);

    // cheating provers fail against the hash
    for prover in [ProverKind::RandomGuess, ProverKind::HashIgnoring] {
        let out = gs_protocol(&big, &params, prover).unwrap();
        println!("{prover:?} accept rounds: {}/{}", out.accept_rounds, out.reps);
    }

    // the desk satisfiability protocol: {x^2 - 2} is solvable mod roughly
    // half the primes, so a threshold calibrated below that count accepts
    let zz = ZZ;
    let system = [parse_poly(&zz, 1, "x1^2 - 2").unwrap()];
    let params = ProtocolParams::new(16, 7).with_reps(64);
    let out = hn_desk(&system, (3, 1000), &params, ProverKind::Honest).unwrap();
    println!(
        "hn on x^2 - 2 over primes 3..1000: {} qualifying primes, accepted = {}",
        out.qualifying.len(),
        out.accepted
    );
}
