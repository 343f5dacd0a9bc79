//! The headline protocols end to end: the fixture library, the radical and
//! equidimensional Cohen-Macaulay protocols with their four branches, branch
//! attribution, and evidence re-verification.

use ideal_lab::amcore::{ProtocolParams, ProverKind};
use ideal_lab::primality::fixtures::fixture_library;
use ideal_lab::primality::{cm_protocol, radical_protocol, verify_evidence, ProtocolCache};

fn main() {
    let cache = ProtocolCache::default();
    println!("fixture                protocol verdict branch                 truth");
    println!("-----------------------------------------------------------------------");
    for f in fixture_library(1).unwrap() {
        // the two largest windows are exercised by the acceptance suite;
        // keep this demo quick
        if f.name == "tightness3" || f.name == "elliptic" {
            continue;
        }
        let params = ProtocolParams::new(0, 11).with_reps(32);
        if f.instance.class.radical {
            let v = radical_protocol(&f.instance, &f.calib, &params, ProverKind::Honest, &cache)
                .unwrap();
            report(f.name, "radical", v, f.truth.prime);
        }
        if f.instance.class.equidim_cm {
            let v = cm_protocol(&f.instance, &f.calib, &params, ProverKind::Honest, &cache)
                .unwrap();
            report(f.name, "cm", v, f.truth.prime);
        }
    }
}

fn report(name: &str, proto: &str, v: ideal_lab::primality::ProtocolVerdict, prime: bool) {
    let branch = v
        .branch
        .map(|b| format!("{b:?}"))
        .unwrap_or_else(|| "-".to_string());
    let evidence_ok = v
        .evidence
        .as_ref()
        .map(|e| verify_evidence(e).unwrap())
        .unwrap_or(true);
    println!(
        "{name:<22} {proto:<8} {:<7} {branch:<22} prime={prime} evidence_ok={evidence_ok}",
        if v.accepted { "accept" } else { "reject" }
    );
}
