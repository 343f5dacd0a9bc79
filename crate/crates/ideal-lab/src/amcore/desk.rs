//! Desk-scale analogs of the satisfiability and dimension protocols: the
//! qualifying set is the primes in a window for which the system has an
//! F_p^n solution, certified to be large (or not) by the set lower-bound
//! protocol. The dimension variant slices by r random hyperplanes first and
//! takes a majority over independent slices.

use crate::arith::{PrimeField, ZZ};
use crate::error::Result;
use crate::mpoly::SparsePoly;
use crate::sieve::primes_in_window;
use crate::variety::{find_points, slice_by};

use super::{gs_protocol, GsInstance, GsOutcome, ProtocolParams, ProverKind};

/// Outcome of a desk protocol run, with the calibration data that produced
/// the qualifying set.
#[derive(Debug, Clone)]
pub struct DeskOutcome {
    pub accepted: bool,
    pub qualifying: Vec<u64>,
    pub window: (u64, u64),
    pub gs: GsOutcome,
}

pub(crate) fn pack_point(point: &[u64], bits_per_coord: u32) -> u128 {
    let mut x = 0u128;
    for (i, c) in point.iter().enumerate() {
        x |= (*c as u128) << (i as u32 * bits_per_coord);
    }
    x
}

pub(crate) fn unpack_point(x: u128, n: usize, bits_per_coord: u32) -> Vec<u64> {
    let mask = (1u128 << bits_per_coord) - 1;
    (0..n)
        .map(|i| ((x >> (i as u32 * bits_per_coord)) & mask) as u64)
        .collect()
}

fn bits_for(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Computes the qualifying set for the satisfiability protocol: primes in
/// the window whose reduced system has an F_p-rational point, paired with a
/// witness point found by bounded search.
pub fn qualifying_primes_with_points(
    system: &[SparsePoly<ZZ>],
    window: (u64, u64),
    budget: u64,
    seed: u64,
) -> Result<Vec<(u64, Vec<u64>)>> {
    let mut out = vec![];
    for p in primes_in_window(window.0, window.1) {
        let field = PrimeField::new(p)?;
        let reduced: Vec<SparsePoly<PrimeField>> =
            system.iter().map(|f| f.reduce_mod_p(&field)).collect();
        if reduced.iter().all(|f| f.is_zero()) {
            // degenerate reduction: the whole space vanishes; witness origin
            out.push((p, vec![0; system[0].nvars]));
            continue;
        }
        if reduced.iter().any(|f| f.is_zero() == false && f.degree() == 0) {
            continue; // a unit survives: no solutions
        }
        let mut rng = crate::rng::Rng::new(seed ^ p);
        let pts = find_points(&field, &reduced, 1, budget, &mut rng)?;
        if let Some(pt) = pts.into_iter().next() {
            out.push((p, pt));
        }
    }
    Ok(out)
}

/// Builds the GS instance whose elements are primes (encoded directly) and
/// whose witnesses are packed solution points.
pub fn prime_solution_instance<'a>(
    system: &'a [SparsePoly<ZZ>],
    window: (u64, u64),
    qualifying: &'a [(u64, Vec<u64>)],
) -> GsInstance<'a> {
    let n = system[0].nvars;
    let n_bits = bits_for(window.1);
    GsInstance {
        n_bits,
        verify: Box::new(move |x, w| {
            let p = x as u64;
            if x > u64::MAX as u128 || p < window.0 || p > window.1 {
                return false;
            }
            if !crate::arith::fp::is_prime_u64(p) {
                return false;
            }
            if w.len() != n * 8 {
                return false;
            }
            let field = match PrimeField::new(p) {
                Ok(f) => f,
                Err(_) => return false,
            };
            let mut point = vec![];
            for i in 0..n {
                let mut b = [0u8; 8];
                b.copy_from_slice(&w[i * 8..(i + 1) * 8]);
                let c = u64::from_le_bytes(b);
                if c >= p {
                    return false;
                }
                point.push(c);
            }
            system
                .iter()
                .all(|f| f.reduce_mod_p(&field).eval(&field, &point) == 0)
        }),
        members: Box::new(move || {
            Box::new(qualifying.iter().map(|(p, pt)| {
                let mut w = vec![];
                for c in pt {
                    w.extend(c.to_le_bytes());
                }
                (*p as u128, w)
            }))
        }),
        solve_preimage: None,
    }
}

/// Desk satisfiability protocol: GS verdict on the set of window primes
/// admitting an F_p^n solution, honest prover backed by exhaustive search.
pub fn hn_desk(
    system: &[SparsePoly<ZZ>],
    window: (u64, u64),
    params: &ProtocolParams,
    prover: ProverKind,
) -> Result<DeskOutcome> {
    let qualifying =
        qualifying_primes_with_points(system, window, params.search_budget, params.seed)?;
    let inst = prime_solution_instance(system, window, &qualifying);
    let gs = gs_protocol(&inst, params, prover)?;
    Ok(DeskOutcome {
        accepted: gs.accepted,
        qualifying: qualifying.iter().map(|(p, _)| *p).collect(),
        window,
        gs,
    })
}

/// Desk dimension protocol for `dim >= r`: slice by r random hyperplanes
/// (reproducibly seeded) and run the satisfiability protocol on the sliced
/// system; majority vote over independent slices.
pub fn dim_desk(
    system: &[SparsePoly<ZZ>],
    r: usize,
    window: (u64, u64),
    params: &ProtocolParams,
    prover: ProverKind,
) -> Result<(bool, Vec<DeskOutcome>)> {
    params.validate()?;
    let votes = params.slice_votes.max(1);
    let mut outcomes = vec![];
    let mut accepts = 0;
    let base = crate::rng::Rng::new(params.seed ^ 0xd1);
    for v in 0..votes {
        let slice_seed = base.child(v as u64).next_u64();
        let (sliced, _rec) = slice_by(system, r, slice_seed, params.box_size)?;
        let sub = ProtocolParams {
            seed: base.child(1000 + v as u64).next_u64(),
            ..params.clone()
        };
        let out = hn_desk(&sliced, window, &sub, prover)?;
        if out.accepted {
            accepts += 1;
        }
        outcomes.push(out);
    }
    Ok((accepts * 2 > votes, outcomes))
}
