//! Experiment layer: good-prime density scans for the base-change theorems,
//! Chebotarev-style density measurement, the 3CNF reduction pipeline,
//! reports, configuration, and the command-line interface.

pub mod cli;
pub mod instance_file;

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{PrimeField, UniPoly};
use crate::error::{usage, Result};
use crate::intpoly::{self, IntPoly};
use crate::mpoly::height::HeightProfile;
use crate::mpoly::SparsePoly;
use crate::primality::{plane_model_for, IdealInstance};
use crate::rng::Rng;
use crate::sieve::primes_in_window;
use crate::variety::plane_components;

/// Desk mode uses calibrated windows and floors; strict mode additionally
/// prints the worst-case symbolic bounds, with their unspecified universal
/// constants named, for side-by-side audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabMode {
    Desk,
    Strict,
}

#[derive(Debug, Clone)]
pub struct LabConfig {
    pub seed: u64,
    pub mode: LabMode,
    /// enumeration budget for point searches
    pub budget: u64,
    /// cofactor degree cap for membership/dimension systems
    pub d_cap: u32,
    /// column cap for membership systems
    pub col_cap: usize,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig { seed: 1, mode: LabMode::Desk, budget: 1 << 32, d_cap: 4, col_cap: 20_000 }
    }
}

impl LabConfig {
    /// FNV-1a hash of the canonical rendering; stamps every report.
    pub fn config_hash(&self) -> u64 {
        let s = format!(
            "seed={};mode={:?};budget={};d_cap={};col_cap={}",
            self.seed, self.mode, self.budget, self.d_cap, self.col_cap
        );
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for b in s.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeVerdict {
    Good,
    Bad,
    Skipped,
}

/// Per-prime outcomes plus the aggregate fraction for one experiment.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub experiment: String,
    pub window: (u64, u64),
    pub per_prime: Vec<(u64, PrimeVerdict)>,
    pub good: usize,
    pub bad: usize,
    pub skipped: usize,
    pub fraction: f64,
    pub seed: u64,
    pub config_hash: u64,
    pub wall_ms: u128,
    /// present in strict mode: the worst-case symbolic bound expression
    pub strict_bound: Option<String>,
}

impl DensityReport {
    fn assemble(
        experiment: String,
        window: (u64, u64),
        per_prime: Vec<(u64, PrimeVerdict)>,
        cfg: &LabConfig,
        started: Instant,
        strict_bound: Option<String>,
    ) -> Self {
        let good = per_prime.iter().filter(|(_, v)| *v == PrimeVerdict::Good).count();
        let bad = per_prime.iter().filter(|(_, v)| *v == PrimeVerdict::Bad).count();
        let skipped = per_prime.len() - good - bad;
        let fraction = if good + bad > 0 {
            good as f64 / (good + bad) as f64
        } else {
            0.0
        };
        DensityReport {
            experiment,
            window,
            per_prime,
            good,
            bad,
            skipped,
            fraction,
            seed: cfg.seed,
            config_hash: cfg.config_hash(),
            wall_ms: started.elapsed().as_millis(),
            strict_bound,
        }
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        self.per_prime
            .iter()
            .filter(|(_, v)| *v == PrimeVerdict::Bad)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("schema: ideal-lab/report/v1\n");
        out.push_str(&format!("experiment: {}\n", self.experiment));
        out.push_str(&format!("window: {}:{}\n", self.window.0, self.window.1));
        out.push_str(&format!("good: {}\n", self.good));
        out.push_str(&format!("bad: {}\n", self.bad));
        out.push_str(&format!("skipped: {}\n", self.skipped));
        out.push_str(&format!("fraction: {:.6}\n", self.fraction));
        out.push_str(&format!("seed: {}\n", self.seed));
        out.push_str(&format!("config_hash: {:#018x}\n", self.config_hash));
        out.push_str(&format!("wall_ms: {}\n", self.wall_ms));
        let bad = self.bad_primes();
        if bad.len() <= 64 {
            let s: Vec<String> = bad.iter().map(|p| p.to_string()).collect();
            out.push_str(&format!("bad_primes: {}\n", s.join(",")));
        } else {
            out.push_str(&format!("bad_primes: ({} primes)\n", bad.len()));
        }
        if let Some(b) = &self.strict_bound {
            out.push_str(&format!("strict_bound: {b}\n"));
        }
        out
    }

    /// Machine-readable variant: tab-separated key/value rows under the same
    /// schema header, one row per prime at the end.
    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        out.push_str("schema\tideal-lab/report/v1\n");
        out.push_str(&format!("experiment\t{}\n", self.experiment));
        out.push_str(&format!("window\t{}\t{}\n", self.window.0, self.window.1));
        out.push_str(&format!(
            "counts\t{}\t{}\t{}\n",
            self.good, self.bad, self.skipped
        ));
        out.push_str(&format!("fraction\t{:.9}\n", self.fraction));
        out.push_str(&format!("seed\t{}\n", self.seed));
        out.push_str(&format!("config_hash\t{:#018x}\n", self.config_hash));
        for (p, v) in &self.per_prime {
            let tag = match v {
                PrimeVerdict::Good => "good",
                PrimeVerdict::Bad => "bad",
                PrimeVerdict::Skipped => "skip",
            };
            out.push_str(&format!("prime\t{p}\t{tag}\n"));
        }
        out
    }
}

fn strict_density_bound(profile: &HeightProfile) -> String {
    format!(
        "pi_q(x) >= (1/deg q) * (pi(x) - log disc - c * sqrt(x) * log(disc * x^deg)); \
         protocol cutoffs x0 = h^c9 * 2^((n log sigma)^c10) with h = {}, n = {}, sigma = {} \
         and c, c9, c10 unspecified universal constants",
        profile.h, profile.n, profile.sigma
    )
}

/// Chebotarev-style scan: the fraction of primes in the window for which q
/// has a root mod p. Skips p dividing disc(q).
pub fn scan_chebotarev(q: &IntPoly, window: (u64, u64), cfg: &LabConfig) -> Result<DensityReport> {
    if intpoly::deg(q) == 0 || intpoly::is_zero(q) {
        return Err(usage("q must be nonconstant"));
    }
    let started = Instant::now();
    let disc = if intpoly::deg(q) == 1 {
        BigInt::from(1)
    } else {
        intpoly::discriminant(q)?
    };
    let mut per_prime = vec![];
    for p in primes_in_window(window.0, window.1) {
        if !disc.is_zero() && (&disc % BigInt::from(p)).is_zero() {
            per_prime.push((p, PrimeVerdict::Skipped));
            continue;
        }
        let field = PrimeField::new(p)?;
        let qp = UniPoly::from_coeffs(&field, q.iter().map(|c| field.from_bigint(c)).collect());
        if qp.is_zero() || qp.degree() == 0 {
            per_prime.push((p, PrimeVerdict::Skipped));
            continue;
        }
        let verdict = if qp.count_roots(&field)? > 0 {
            PrimeVerdict::Good
        } else {
            PrimeVerdict::Bad
        };
        per_prime.push((p, verdict));
    }
    let strict = (cfg.mode == LabMode::Strict).then(|| {
        format!(
            "pi_q(x) >= (1/e)(pi(x) - log disc - c sqrt(x) log(disc x^e)) with e = {}, \
             disc = {}, c the GRH constant (unspecified)",
            intpoly::deg(q),
            disc
        )
    });
    Ok(DensityReport::assemble(
        format!("chebotarev deg {}", intpoly::deg(q)),
        window,
        per_prime,
        cfg,
        started,
        strict,
    ))
}

/// Rosser-derived desk floor for good counts: rho * (x/ln x - pi(lo)) with a
/// one-half desk slack; meaningful when the fixture declares its Galois
/// fixed-point fraction.
pub fn chebotarev_floor(window: (u64, u64), rho: f64) -> f64 {
    let x = window.1 as f64;
    if x < 17.0 {
        return 0.0;
    }
    let below = primes_in_window(2, window.0.saturating_sub(1)).len() as f64;
    0.5 * rho * (x / x.ln() - below).max(0.0)
}

/// Per-prime dimension preservation: computes a conclusive dimension for the
/// reduced system at the configured cap and compares with r. Inconclusive
/// certificates count as skipped.
pub fn scan_dim_preserve(
    inst: &IdealInstance,
    r: usize,
    window: (u64, u64),
    cfg: &LabConfig,
) -> Result<DensityReport> {
    let started = Instant::now();
    let n = inst.nvars;
    let mut per_prime = vec![];
    for p in primes_in_window(window.0, window.1) {
        let field = PrimeField::new(p)?;
        let reduced: Vec<SparsePoly<PrimeField>> = inst
            .generators
            .iter()
            .map(|f| f.reduce_mod_p(&field))
            .collect();
        if reduced.iter().all(|f| f.is_zero()) {
            per_prime.push((p, PrimeVerdict::Skipped));
            continue;
        }
        let mut conclusive: Option<usize> = None;
        for r_try in 0..=n {
            let cert =
                crate::idealsys::dim_certificate_fp(&field, &reduced, r_try, cfg.d_cap, cfg.col_cap)?;
            if cert.conclusive_equal() {
                conclusive = Some(r_try);
                break;
            }
        }
        let verdict = match conclusive {
            Some(d) if d == r => PrimeVerdict::Good,
            Some(_) => PrimeVerdict::Bad,
            None => PrimeVerdict::Skipped,
        };
        per_prime.push((p, verdict));
    }
    let profile = HeightProfile::of(&inst.generators);
    let strict = (cfg.mode == LabMode::Strict).then(|| strict_density_bound(&profile));
    Ok(DensityReport::assemble(
        format!("dim-preserve r={r} {}", inst.name),
        window,
        per_prime,
        cfg,
        started,
        strict,
    ))
}

/// Per-prime irreducibility preservation via the plane-curve component
/// oracle on the instance's plane model.
pub fn scan_irred_preserve(
    inst: &IdealInstance,
    window: (u64, u64),
    cfg: &LabConfig,
) -> Result<DensityReport> {
    let started = Instant::now();
    let model = plane_model_for(inst)?;
    let mut rng = Rng::new(cfg.seed ^ 0x144ed);
    let mut per_prime = vec![];
    for p in primes_in_window(window.0, window.1) {
        let field = PrimeField::new(p)?;
        let modp = model.poly.reduce_mod_p(&field);
        if modp.is_zero() || modp.degree() == 0 {
            per_prime.push((p, PrimeVerdict::Skipped));
            continue;
        }
        let pc = plane_components(&field, &modp, &mut rng)?;
        let verdict = if pc.total_abs_irreducible == 1 {
            PrimeVerdict::Good
        } else {
            PrimeVerdict::Bad
        };
        per_prime.push((p, verdict));
    }
    let profile = HeightProfile::of(&inst.generators);
    let strict = (cfg.mode == LabMode::Strict).then(|| strict_density_bound(&profile));
    Ok(DensityReport::assemble(
        format!("irred-preserve {}", inst.name),
        window,
        per_prime,
        cfg,
        started,
        strict,
    ))
}

/// Per-prime reducibility-with-rational-components: at least two
/// F_p-definable absolutely irreducible components of the plane model.
pub fn scan_red_preserve(
    inst: &IdealInstance,
    window: (u64, u64),
    declared_modulus: Option<i64>,
    cfg: &LabConfig,
) -> Result<DensityReport> {
    let started = Instant::now();
    let model = plane_model_for(inst)?;
    let mut rng = Rng::new(cfg.seed ^ 0x4ed);
    let mut per_prime = vec![];
    for p in primes_in_window(window.0, window.1) {
        if let Some(m) = declared_modulus {
            if m != 0 && (m.unsigned_abs() % p) == 0 {
                per_prime.push((p, PrimeVerdict::Skipped));
                continue;
            }
        }
        let field = PrimeField::new(p)?;
        let modp = model.poly.reduce_mod_p(&field);
        if modp.is_zero() || modp.degree() == 0 {
            per_prime.push((p, PrimeVerdict::Skipped));
            continue;
        }
        let pc = plane_components(&field, &modp, &mut rng)?;
        let verdict = if pc.fp_definable_abs_irreducible >= 2 {
            PrimeVerdict::Good
        } else {
            PrimeVerdict::Bad
        };
        per_prime.push((p, verdict));
    }
    let profile = HeightProfile::of(&inst.generators);
    let strict = (cfg.mode == LabMode::Strict).then(|| strict_density_bound(&profile));
    Ok(DensityReport::assemble(
        format!("red-preserve {}", inst.name),
        window,
        per_prime,
        cfg,
        started,
        strict,
    ))
}

/// The 3CNF reduction entry point: parse DIMACS text, emit the instance.
pub fn reduce_3cnf(text: &str, name: &str) -> Result<IdealInstance> {
    let cnf = crate::primality::conp::parse_dimacs(text)?;
    crate::primality::conp::reduce_to_instance(&cnf, name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ZZ;
    use crate::intpoly::from_i64;
    use crate::mpoly::text::parse_poly;
    use crate::primality::InstanceClass;

    fn inst(name: &str, nvars: usize, gens: &[&str], dim: usize) -> IdealInstance {
        let zz = ZZ;
        IdealInstance::new(
            name,
            nvars,
            gens.iter().map(|s| parse_poly(&zz, nvars, s).unwrap()).collect(),
            InstanceClass { radical: true, equidim_cm: true },
            dim,
        )
        .unwrap()
    }

    #[test]
    fn chebotarev_z_minus_1_is_always_good() {
        let cfg = LabConfig::default();
        let r = scan_chebotarev(&from_i64(&[-1, 1]), (3, 500), &cfg).unwrap();
        assert_eq!(r.bad, 0);
        assert!((r.fraction - 1.0).abs() < 1e-9);
        // report arithmetic holds
        assert_eq!(r.good + r.bad + r.skipped, r.per_prime.len());
    }

    #[test]
    fn chebotarev_sqrt2_density_half_small_window() {
        let cfg = LabConfig::default();
        let r = scan_chebotarev(&from_i64(&[-2, 0, 1]), (3, 20_000), &cfg).unwrap();
        assert!((r.fraction - 0.5).abs() < 0.03, "fraction {}", r.fraction);
        // the Rosser-derived desk floor holds for the declared fraction
        let floor = chebotarev_floor((3, 20_000), 0.5);
        assert!(r.good as f64 >= floor, "good {} floor {floor}", r.good);
    }

    #[test]
    fn dim_preserve_example_bad_set() {
        // I = <x1, x1 + 30 x2>: dimension drops exactly at p | 30
        let cfg = LabConfig::default();
        let i = inst("dim-ex", 2, &["x1", "x1 + 30*x2"], 0);
        let r = scan_dim_preserve(&i, 0, (2, 100), &cfg).unwrap();
        assert_eq!(r.bad_primes(), vec![2, 3, 5]);
        // I = <x1> preserves dimension everywhere
        let j = inst("line", 2, &["x1"], 1);
        let r2 = scan_dim_preserve(&j, 1, (2, 100), &cfg).unwrap();
        assert!(r2.bad_primes().is_empty());
    }

    #[test]
    fn irred_preserve_example_bad_set() {
        // x1(x1-1) - 30 x2 splits exactly at p | 30
        let cfg = LabConfig::default();
        let i = inst("parabola", 2, &["x1^2 - x1 - 30*x2"], 1);
        let r = scan_irred_preserve(&i, (2, 1000), &cfg).unwrap();
        assert_eq!(r.bad_primes(), vec![2, 3, 5]);
        // while its dimension is preserved everywhere
        let r2 = scan_dim_preserve(&i, 1, (2, 100), &cfg).unwrap();
        assert!(r2.bad_primes().is_empty());
        // a line never splits
        let l = inst("sumline", 2, &["x1 + x2"], 1);
        let r3 = scan_irred_preserve(&l, (2, 200), &cfg).unwrap();
        assert_eq!(r3.bad, 0);
        // the conic degenerates at most at 2 and the disc prime
        let c = inst("conic", 2, &["x1^2 + x2^2 - 1"], 1);
        let r4 = scan_irred_preserve(&c, (3, 1000), &cfg).unwrap();
        assert!(r4.bad <= 2, "bad primes {:?}", r4.bad_primes());
    }

    #[test]
    fn red_preserve_examples() {
        let cfg = LabConfig::default();
        // two rational lines: every prime good
        let i = inst("two-lines", 2, &["x1*x2"], 1);
        let r = scan_red_preserve(&i, (2, 300), None, &cfg).unwrap();
        assert_eq!(r.bad, 0);
        assert!((r.fraction - 1.0).abs() < 1e-9);
        // split conic: density one half
        let s = inst("split-conic", 2, &["x1^2 - 2*x2^2"], 1);
        let r2 = scan_red_preserve(&s, (3, 20_000), Some(8), &cfg).unwrap();
        assert!((r2.fraction - 0.5).abs() < 0.03, "fraction {}", r2.fraction);
    }

    #[test]
    fn reports_reproduce_bit_exactly() {
        let cfg = LabConfig::default();
        let i = inst("two-lines", 2, &["x1*x2"], 1);
        let a = scan_red_preserve(&i, (2, 200), None, &cfg).unwrap();
        let b = scan_red_preserve(&i, (2, 200), None, &cfg).unwrap();
        // wall time differs; every content field matches
        assert_eq!(a.per_prime, b.per_prime);
        assert_eq!(a.fraction, b.fraction);
        assert_eq!(a.config_hash, b.config_hash);
        let ta = a.to_machine();
        let tb = b.to_machine();
        assert_eq!(ta, tb);
    }

    #[test]
    fn strict_mode_prints_symbolic_bounds() {
        let cfg = LabConfig { mode: LabMode::Strict, ..Default::default() };
        let r = scan_chebotarev(&from_i64(&[-2, 0, 1]), (3, 100), &cfg).unwrap();
        let b = r.strict_bound.as_ref().expect("strict bound present");
        assert!(b.contains("unspecified"));
        assert!(r.to_text().contains("strict_bound"));
    }

    #[test]
    fn reduce_3cnf_end_to_end() {
        let text = "p cnf 1 1\n1 1 1 0\n";
        let inst = reduce_3cnf(text, "clause").unwrap();
        assert!(inst.generators.len() > 1);
        assert!(reduce_3cnf("garbage", "x").is_err());
    }
}
