//! Command-line interface: thin argument handling over the library.
//!
//! Subcommands: `count-points`, `classify`, `member`, `dim-cert`,
//! `scan {chebotarev|dim|irred|red}`, `protocol {radical|cm|zerodim|twotop}`,
//! `reduce-3cnf`, `fixtures`. Global flags: `--seed`, `--window lo:hi`,
//! `--budget`, `--mode {desk|strict}`, `--out <path>`.

use num_bigint::BigUint;

use crate::amcore::{ProtocolParams, ProverKind};
use crate::arith::ZZ;
use crate::error::{usage, Error, Result};
use crate::intpoly;
use crate::mpoly::text::{format_poly, parse_poly};
use crate::mpoly::SparsePoly;
use crate::primality::fixtures::{fixture_by_name, fixture_library, Fixture};
use crate::primality::{
    cm_protocol, radical_protocol, two_top_components_protocol, zero_dim_reducible_protocol,
    IdealInstance, ProtocolCache,
};
use crate::variety::{count_points, langweil_classify, FloorMode};

use super::instance_file::{format_instance, parse_instance, parse_registry};
use super::{
    reduce_3cnf, scan_chebotarev, scan_dim_preserve, scan_irred_preserve, scan_red_preserve,
    DensityReport, LabConfig, LabMode,
};

struct Args {
    positional: Vec<String>,
    flags: std::collections::BTreeMap<String, Vec<String>>,
}

impl Args {
    fn parse(argv: &[String]) -> Result<Self> {
        let mut positional = vec![];
        let mut flags: std::collections::BTreeMap<String, Vec<String>> = Default::default();
        let mut i = 0;
        while i < argv.len() {
            let a = &argv[i];
            if let Some(name) = a.strip_prefix("--") {
                let value = if i + 1 < argv.len() && !argv[i + 1].starts_with("--") {
                    i += 1;
                    argv[i].clone()
                } else {
                    "true".to_string()
                };
                flags.entry(name.to_string()).or_default().push(value);
            } else {
                positional.push(a.clone());
            }
            i += 1;
        }
        Ok(Args { positional, flags })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.flags.get(name).and_then(|v| v.last()).map(|s| s.as_str())
    }

    fn all(&self, name: &str) -> Vec<&str> {
        self.flags
            .get(name)
            .map(|v| v.iter().map(|s| s.as_str()).collect())
            .unwrap_or_default()
    }

    fn need(&self, name: &str) -> Result<&str> {
        self.get(name).ok_or_else(|| usage(format!("missing --{name}")))
    }

    fn parse_num<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>> {
        match self.get(name) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| usage(format!("bad value for --{name}: '{v}'"))),
        }
    }

    fn window(&self, default: (u64, u64)) -> Result<(u64, u64)> {
        match self.get("window") {
            None => Ok(default),
            Some(v) => {
                let (lo, hi) = v
                    .split_once(':')
                    .ok_or_else(|| usage("--window wants lo:hi"))?;
                let lo = lo.parse().map_err(|_| usage("bad window lower bound"))?;
                let hi = hi.parse().map_err(|_| usage("bad window upper bound"))?;
                if lo > hi {
                    return Err(usage("empty window"));
                }
                Ok((lo, hi))
            }
        }
    }

    fn config(&self) -> Result<LabConfig> {
        let mut cfg = LabConfig::default();
        if let Some(seed) = self.parse_num::<u64>("seed")? {
            cfg.seed = seed;
        }
        if let Some(budget) = self.parse_num::<u64>("budget")? {
            cfg.budget = budget;
        }
        if let Some(cap) = self.parse_num::<u32>("cap")? {
            cfg.d_cap = cap;
        }
        match self.get("mode") {
            None | Some("desk") => {}
            Some("strict") => cfg.mode = LabMode::Strict,
            Some(other) => return Err(usage(format!("unknown mode '{other}'"))),
        }
        Ok(cfg)
    }
}

const USAGE: &str = "\
usage: ideal-lab <command> [options]

commands:
  count-points   --p P [--k K] system...        exact F_(p^k) point count
  classify       --count N --p P --deg D        Lang-Weil curve classification
  member         --target POLY system...        ideal membership certificate
  dim-cert       --r R system...                dimension certificate
  scan chebotarev --q POLY --window lo:hi       root-density scan
  scan dim       --r R --window lo:hi system    dimension base-change scan
  scan irred     --window lo:hi system...       irreducibility base-change scan
  scan red       --window lo:hi system...       reducibility base-change scan
  protocol radical|cm|zerodim|twotop --fixture NAME [--prover P] [--runs N]
  reduce-3cnf FILE [--out PATH]                 3CNF-to-ideal reduction
  fixtures [--registry FILE]                    list the fixture library

system: --fixture NAME | --system FILE | --vars N --gen POLY [--gen POLY ...]
global: --seed S --window lo:hi --budget B --cap D --mode desk|strict --out PATH
";

/// CLI entry point; returns the process exit code.
pub fn cli(argv: &[String]) -> i32 {
    match run(argv) {
        Ok(()) => 0,
        Err(Error::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("{USAGE}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn emit(args: &Args, human: String, machine: Option<String>) -> Result<()> {
    print!("{human}");
    if let Some(path) = args.get("out") {
        std::fs::write(path, machine.unwrap_or(human))?;
    }
    Ok(())
}

fn load_system(args: &Args, cfg: &LabConfig) -> Result<IdealInstance> {
    if let Some(name) = args.get("fixture") {
        return Ok(fixture_by_name(cfg.seed, name)?.instance);
    }
    if let Some(path) = args.get("system") {
        let text = std::fs::read_to_string(path)?;
        let name = path.to_string();
        return parse_instance(&name, &text, 1 << 20);
    }
    let gens = args.all("gen");
    if !gens.is_empty() {
        let n: usize = args
            .parse_num("vars")?
            .ok_or_else(|| usage("--gen needs --vars"))?;
        let zz = ZZ;
        let polys: Result<Vec<SparsePoly<ZZ>>> =
            gens.iter().map(|g| parse_poly(&zz, n, g)).collect();
        let dim = args.parse_num::<usize>("r")?.unwrap_or(0);
        return IdealInstance::new(
            "cli-system",
            n,
            polys?,
            crate::primality::InstanceClass { radical: true, equidim_cm: true },
            dim,
        );
    }
    Err(usage("provide --fixture, --system, or --gen/--vars"))
}

fn run(argv: &[String]) -> Result<()> {
    let Some(cmd) = argv.first() else {
        return Err(usage("no command"));
    };
    let rest = &argv[1..];
    match cmd.as_str() {
        "count-points" => {
            let args = Args::parse(rest)?;
            let cfg = args.config()?;
            let inst = load_system(&args, &cfg)?;
            let p: u64 = args
                .parse_num("p")?
                .ok_or_else(|| usage("missing --p"))?;
            let k: usize = args.parse_num("k")?.unwrap_or(1);
            let field = crate::arith::PrimeField::new(p)?;
            let reduced: Vec<_> = inst.generators.iter().map(|f| f.reduce_mod_p(&field)).collect();
            let c = count_points(&reduced, p, k, cfg.budget)?;
            let human = format!(
                "schema: ideal-lab/report/v1\nexperiment: count-points\np: {p}\nk: {k}\nn: {}\ncount: {}\nbudget_used: {}\n",
                c.n, c.count, c.budget_used
            );
            emit(&args, human, None)
        }
        "classify" => {
            let args = Args::parse(rest)?;
            let cfg = args.config()?;
            let count: BigUint = args
                .need("count")?
                .parse()
                .map_err(|_| usage("bad --count"))?;
            let p: u64 = args.parse_num("p")?.ok_or_else(|| usage("missing --p"))?;
            let deg: u32 = args.parse_num("deg")?.ok_or_else(|| usage("missing --deg"))?;
            let r: usize = args.parse_num("r")?.unwrap_or(1);
            let mode = match cfg.mode {
                LabMode::Desk => FloorMode::Desk,
                LabMode::Strict => FloorMode::Strict,
            };
            let c = langweil_classify(&count, p, r, deg, mode)?;
            let human = format!(
                "schema: ideal-lab/report/v1\nexperiment: classify\np: {p}\ndeg: {deg}\ncount: {}\nfloor: {}\nverdict: {:?}\n",
                c.n_points, c.floor, c.verdict
            );
            emit(&args, human, None)
        }
        "member" => {
            let args = Args::parse(rest)?;
            let cfg = args.config()?;
            let inst = load_system(&args, &cfg)?;
            let zz = ZZ;
            let target = parse_poly(&zz, inst.nvars, args.need("target")?)?;
            let cap = match args.parse_num::<u32>("cap")? {
                Some(c) => c,
                None => {
                    let degrees: Vec<u32> =
                        inst.generators.iter().map(|g| g.degree()).collect();
                    crate::idealsys::default_membership_cap(
                        &degrees,
                        inst.nvars,
                        inst.dim,
                        cfg.d_cap,
                    )?
                }
            };
            match crate::idealsys::member(&inst.generators, &target, cap, cfg.col_cap)? {
                Some(cert) => {
                    let mut human = format!(
                        "schema: ideal-lab/report/v1\nexperiment: member\nfound: true\ncap: {cap}\ndenominator: {}\n",
                        cert.den
                    );
                    for (i, h) in cert.cofactors.iter().enumerate() {
                        human.push_str(&format!("cofactor_{}: {}\n", i + 1, format_poly(&zz, h)));
                    }
                    emit(&args, human, None)
                }
                None => {
                    let human = format!(
                        "schema: ideal-lab/report/v1\nexperiment: member\nfound: false\ncap: {cap}\nnote: absence at this cap is not a proof of non-membership\n"
                    );
                    emit(&args, human, None)
                }
            }
        }
        "dim-cert" => {
            let args = Args::parse(rest)?;
            let cfg = args.config()?;
            let inst = load_system(&args, &cfg)?;
            let r: usize = args.parse_num("r")?.ok_or_else(|| usage("missing --r"))?;
            let cap = args.parse_num::<u32>("cap")?.unwrap_or(cfg.d_cap);
            let cert = crate::idealsys::dim_certificate(&inst.generators, r, cap, cfg.col_cap)?;
            let zz = ZZ;
            let mut human = format!(
                "schema: ideal-lab/report/v1\nexperiment: dim-cert\nr: {r}\ncap: {cap}\nlower_evidence: {}\nupper_evidence: {}\n",
                cert.lower.is_some(),
                cert.upper.is_some()
            );
            if let Some(lo) = &cert.lower {
                human.push_str(&format!("free_subset: {:?}\n", lo.free_subset));
            }
            if let Some(up) = &cert.upper {
                for (u, w) in &up.witnesses {
                    human.push_str(&format!(
                        "witness[{u:?}]: {}\n",
                        format_poly(&zz, w)
                    ));
                }
            }
            let verdict = if cert.conclusive_equal() {
                "dim = r"
            } else if cert.upper.is_some() {
                "dim <= r"
            } else if cert.lower.is_some() {
                "dim >= r (evidence at this cap)"
            } else {
                "inconclusive"
            };
            human.push_str(&format!("verdict: {verdict}\n"));
            emit(&args, human, None)
        }
        "scan" => {
            let Some(kind) = rest.first() else {
                return Err(usage("scan wants a kind: chebotarev|dim|irred|red"));
            };
            let args = Args::parse(&rest[1..])?;
            let cfg = args.config()?;
            let report: DensityReport = match kind.as_str() {
                "chebotarev" => {
                    let zz = ZZ;
                    let q = parse_poly(&zz, 1, args.need("q")?)?;
                    let mut coeffs = vec![num_bigint::BigInt::from(0); q.degree() as usize + 1];
                    for (m, c) in &q.terms {
                        coeffs[m.0[0] as usize] = c.clone();
                    }
                    let window = args.window((3, 100_000))?;
                    scan_chebotarev(&intpoly::trim(coeffs), window, &cfg)?
                }
                "dim" => {
                    let inst = load_system(&args, &cfg)?;
                    let r: usize = args
                        .parse_num("r")?
                        .unwrap_or(inst.dim);
                    let window = args.window((2, 1000))?;
                    scan_dim_preserve(&inst, r, window, &cfg)?
                }
                "irred" => {
                    let inst = load_system(&args, &cfg)?;
                    let window = args.window((2, 1000))?;
                    scan_irred_preserve(&inst, window, &cfg)?
                }
                "red" => {
                    let declared = args
                        .get("fixture")
                        .and_then(|name| fixture_by_name(cfg.seed, name).ok())
                        .and_then(|f| f.truth.declared_modulus);
                    let inst = load_system(&args, &cfg)?;
                    let window = args.window((5, 10_000))?;
                    scan_red_preserve(&inst, window, declared, &cfg)?
                }
                other => return Err(usage(format!("unknown scan kind '{other}'"))),
            };
            emit(&args, report.to_text(), Some(report.to_machine()))
        }
        "protocol" => {
            let Some(kind) = rest.first() else {
                return Err(usage("protocol wants radical|cm|zerodim|twotop"));
            };
            let args = Args::parse(&rest[1..])?;
            let cfg = args.config()?;
            let fixture = fixture_by_name(cfg.seed, args.need("fixture")?)?;
            let prover = match args.get("prover") {
                None | Some("honest") => ProverKind::Honest,
                Some("random") => ProverKind::RandomGuess,
                Some("hash-ignoring") => ProverKind::HashIgnoring,
                Some(other) => return Err(usage(format!("unknown prover '{other}'"))),
            };
            let runs: u32 = args.parse_num("runs")?.unwrap_or(1);
            let reps: u32 = args.parse_num("reps")?.unwrap_or(32);
            let cache = ProtocolCache::default();
            let mut accepts = 0u32;
            let mut last_detail = String::new();
            let mut last_branch = String::new();
            for run_idx in 0..runs {
                let params = ProtocolParams::new(0, cfg.seed.wrapping_add(run_idx as u64))
                    .with_reps(reps);
                let v = match kind.as_str() {
                    "radical" => radical_protocol(
                        &fixture.instance,
                        &fixture.calib,
                        &params,
                        prover,
                        &cache,
                    )?,
                    "cm" => cm_protocol(
                        &fixture.instance,
                        &fixture.calib,
                        &params,
                        prover,
                        &cache,
                    )?,
                    "zerodim" => {
                        let p = ProtocolParams {
                            k: fixture.calib.zerodim_k,
                            ..params
                        };
                        zero_dim_reducible_protocol(
                            &fixture.instance,
                            args.window(fixture.calib.zerodim_window)?,
                            &p,
                            prover,
                            &cache,
                        )?
                    }
                    "twotop" => {
                        let p = ProtocolParams {
                            k: fixture.calib.twotop_k,
                            ..params
                        };
                        two_top_components_protocol(
                            &fixture.instance,
                            fixture.instance.dim.max(1),
                            args.window(fixture.calib.twotop_window)?,
                            &p,
                            prover,
                            &cache,
                        )?
                    }
                    other => return Err(usage(format!("unknown protocol '{other}'"))),
                };
                if v.accepted {
                    accepts += 1;
                }
                last_detail = v.detail.clone();
                last_branch = v
                    .branch
                    .map(|b| format!("{b:?}"))
                    .unwrap_or_else(|| "none".to_string());
            }
            let human = format!(
                "schema: ideal-lab/report/v1\nexperiment: protocol-{kind}\nfixture: {}\nprover: {prover:?}\nruns: {runs}\naccepts: {accepts}\nverdict: {}\nbranch: {last_branch}\ndetail: {last_detail}\nground_truth_prime: {}\n",
                fixture.name,
                if accepts * 2 > runs { "accept" } else { "reject" },
                fixture.truth.prime
            );
            emit(&args, human, None)
        }
        "reduce-3cnf" => {
            let args = Args::parse(rest)?;
            let path = args
                .positional
                .first()
                .ok_or_else(|| usage("reduce-3cnf wants a DIMACS file"))?;
            let text = std::fs::read_to_string(path)?;
            let inst = reduce_3cnf(&text, path)?;
            let rendered = format_instance(&inst);
            if let Some(out) = args.get("out") {
                std::fs::write(out, &rendered)?;
            }
            print!("{rendered}");
            Ok(())
        }
        "fixtures" => {
            let args = Args::parse(rest)?;
            let cfg = args.config()?;
            let mut human = String::from("schema: ideal-lab/report/v1\nexperiment: fixtures\n");
            for f in fixture_library(cfg.seed)? {
                human.push_str(&fixture_line(&f));
            }
            if let Some(path) = args.get("registry") {
                let text = std::fs::read_to_string(path)?;
                for entry in parse_registry(&text)? {
                    human.push_str(&format!(
                        "registry: {} instance={} prime={:?} components={:?} density={:?}\n",
                        entry.name, entry.instance_path, entry.prime, entry.components, entry.density
                    ));
                }
            }
            emit(&args, human, None)
        }
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(())
        }
        other => Err(usage(format!("unknown command '{other}'"))),
    }
}

fn fixture_line(f: &Fixture) -> String {
    let mut classes = vec![];
    if f.instance.class.radical {
        classes.push("radical");
    }
    if f.instance.class.equidim_cm {
        classes.push("equidim-cm");
    }
    format!(
        "fixture: {} class=[{}] dim={} prime={} components={} dims={:?} provenance=\"{}\"\n",
        f.name,
        classes.join(","),
        f.instance.dim,
        f.truth.prime,
        f.truth.components,
        f.truth.component_dims,
        f.provenance
    )
}
