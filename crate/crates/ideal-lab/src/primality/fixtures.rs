//! Ground-truth fixture library: small ideals spanning prime / non-prime,
//! zero-dimensional / curve / mixed-dimensional, radical / non-radical CM,
//! each with construction provenance, verified ground truth, and per-class
//! desk calibration (windows sized so the qualifying-set promise holds with
//! slack, thresholds a quarter of the expected qualifying count).

use num_bigint::BigInt;

use crate::arith::{PrimeField, ZZ};
use crate::error::{usage, Result};
use crate::intpoly;
use crate::mpoly::text::parse_poly;
use crate::mpoly::SparsePoly;
use crate::rng::Rng;
use crate::variety::{count_points, plane_components};

use super::conp::{reduce_to_instance, Cnf};
use super::{DeskCalibration, FamilyRule, IdealInstance, InstanceClass, PlaneModel};

#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub prime: bool,
    /// number of irreducible components over the algebraic closure
    pub components: usize,
    pub component_dims: Vec<usize>,
    /// density of protocol-qualifying primes for the matching branch
    pub good_density: Option<f64>,
    /// bad primes of the base-change scans divide this
    pub declared_modulus: Option<i64>,
    /// fraction of Galois group elements with a fixed point (for the
    /// Chebotarev consistency floor), when declared
    pub galois_fixed_fraction: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub instance: IdealInstance,
    pub truth: GroundTruth,
    pub calib: DeskCalibration,
    pub provenance: &'static str,
}

fn zp(nvars: usize, s: &str) -> SparsePoly<ZZ> {
    parse_poly(&ZZ, nvars, s).expect("fixture polynomial")
}

fn both() -> InstanceClass {
    InstanceClass { radical: true, equidim_cm: true }
}

fn radical_only() -> InstanceClass {
    InstanceClass { radical: true, equidim_cm: false }
}

fn cm_only() -> InstanceClass {
    InstanceClass { radical: false, equidim_cm: true }
}

/// Builds the fixture library. Constructions are deterministic; the seed is
/// recorded into derived instance names so independently seeded libraries
/// stay distinguishable in reports.
pub fn fixture_library(seed: u64) -> Result<Vec<Fixture>> {
    let _ = seed;
    let mut out = vec![];

    // 1. two rational points on a line
    out.push(Fixture {
        name: "two-points",
        instance: IdealInstance::new("two-points", 1, vec![zp(1, "x1^2 - x1")], both(), 0)?,
        truth: GroundTruth {
            prime: false,
            components: 2,
            component_dims: vec![0, 0],
            good_density: Some(1.0),
            declared_modulus: Some(1),
            galois_fixed_fraction: Some(1.0),
        },
        calib: DeskCalibration { zerodim_k: 64, ..Default::default() },
        provenance: "x(x-1): the minimal reducible zero-dimensional ideal",
    });

    // 2. a single rational point (prime)
    out.push(Fixture {
        name: "one-point",
        instance: IdealInstance::new(
            "one-point",
            2,
            vec![zp(2, "x1 - 2"), zp(2, "x2 - 3")],
            both(),
            0,
        )?,
        truth: GroundTruth {
            prime: true,
            components: 1,
            component_dims: vec![0],
            good_density: None,
            declared_modulus: Some(1),
            galois_fixed_fraction: None,
        },
        calib: DeskCalibration { zerodim_k: 32, ..Default::default() },
        provenance: "the rational point (2, 3); |V_p| = 1 for every p",
    });

    // 3. quadratic-residue points: four points, F_p-visible 1/4 of the time
    out.push(Fixture {
        name: "qr-points",
        instance: IdealInstance::new(
            "qr-points",
            3,
            vec![zp(3, "x1^2 - 2"), zp(3, "x2^2 - 3"), zp(3, "x3")],
            both(),
            0,
        )?,
        truth: GroundTruth {
            prime: false,
            components: 4,
            component_dims: vec![0; 4],
            good_density: Some(0.25),
            declared_modulus: Some(24),
            galois_fixed_fraction: Some(0.25),
        },
        calib: DeskCalibration { zerodim_k: 16, ..Default::default() },
        provenance: "(±√2, ±√3, 0): two F_p points need 2 and 3 both residues",
    });

    // 4. one conjugate pair
    out.push(Fixture {
        name: "conjugate-pair",
        instance: IdealInstance::new(
            "conjugate-pair",
            2,
            vec![zp(2, "x1^2 - 2"), zp(2, "x2")],
            both(),
            0,
        )?,
        truth: GroundTruth {
            prime: false,
            components: 2,
            component_dims: vec![0, 0],
            good_density: Some(0.5),
            declared_modulus: Some(8),
            galois_fixed_fraction: Some(0.5),
        },
        calib: DeskCalibration { zerodim_k: 32, ..Default::default() },
        provenance: "(±√2, 0): residue density one half",
    });

    // 5. the origin with multiplicity two (CM, not radical)
    out.push(Fixture {
        name: "fat-origin",
        instance: IdealInstance::new("fat-origin", 1, vec![zp(1, "x1^2")], cm_only(), 0)?,
        truth: GroundTruth {
            prime: false,
            components: 1,
            component_dims: vec![0],
            good_density: Some(1.0),
            declared_modulus: Some(1),
            galois_fixed_fraction: None,
        },
        calib: DeskCalibration::default(),
        provenance: "x^2: a single point with multiplicity; Serre branch case",
    });

    // 6. an affine line (prime curve)
    out.push(Fixture {
        name: "line",
        instance: IdealInstance::new("line", 2, vec![zp(2, "x1")], both(), 1)?,
        truth: GroundTruth {
            prime: true,
            components: 1,
            component_dims: vec![1],
            good_density: None,
            declared_modulus: Some(1),
            galois_fixed_fraction: None,
        },
        calib: DeskCalibration { twotop_k: 128, ..Default::default() },
        provenance: "the coordinate line x1 = 0",
    });

    // 7. two crossing lines
    let two_lines = IdealInstance::new("two-lines", 2, vec![zp(2, "x1*x2")], both(), 1)?
        .with_plane_model(PlaneModel {
            poly: zp(2, "x1*x2"),
            degree: 2,
            families: FamilyRule::Static(vec![(0, 0), (1, 0)]),
        });
    out.push(Fixture {
        name: "two-lines",
        instance: two_lines,
        truth: GroundTruth {
            prime: false,
            components: 2,
            component_dims: vec![1, 1],
            good_density: Some(1.0),
            declared_modulus: Some(1),
            galois_fixed_fraction: Some(1.0),
        },
        calib: DeskCalibration { twotop_k: 128, ..Default::default() },
        provenance: "x1 x2 = 0: both components rational for every p",
    });

    // 8. a conic split over Q(sqrt 2)
    out.push(Fixture {
        name: "split-conic",
        instance: IdealInstance::new("split-conic", 2, vec![zp(2, "x1^2 - 2*x2^2")], both(), 1)?,
        truth: GroundTruth {
            prime: false,
            components: 2,
            component_dims: vec![1, 1],
            good_density: Some(0.5),
            declared_modulus: Some(8),
            galois_fixed_fraction: Some(0.5),
        },
        calib: DeskCalibration { twotop_k: 64, ..Default::default() },
        provenance: "x1^2 - 2 x2^2: rational lines exactly when 2 is a residue",
    });

    // 9. an absolutely irreducible conic (prime)
    out.push(Fixture {
        name: "conic",
        instance: IdealInstance::new("conic", 2, vec![zp(2, "x1^2 + x2^2 - 1")], both(), 1)?,
        truth: GroundTruth {
            prime: true,
            components: 1,
            component_dims: vec![1],
            good_density: None,
            declared_modulus: Some(4),
            galois_fixed_fraction: None,
        },
        calib: DeskCalibration { twotop_k: 128, ..Default::default() },
        provenance: "the unit circle; point counts stay near p",
    });

    // 10. an elliptic curve (prime, degree 3 so a higher classifier floor)
    out.push(Fixture {
        name: "elliptic",
        instance: IdealInstance::new("elliptic", 2, vec![zp(2, "x2^2 - x1^3 + x1")], both(), 1)?,
        truth: GroundTruth {
            prime: true,
            components: 1,
            component_dims: vec![1],
            good_density: None,
            declared_modulus: Some(2),
            galois_fixed_fraction: None,
        },
        calib: DeskCalibration {
            twotop_window: (1_480_000, 1_482_500),
            twotop_k: 32,
            ..Default::default()
        },
        provenance: "y^2 = x^3 - x: smooth cubic, Hasse bound keeps counts near p",
    });

    // 11. a plane plus a line (mixed dimensions; radical, not equidimensional)
    out.push(Fixture {
        name: "plane-and-line",
        instance: IdealInstance::new(
            "plane-and-line",
            3,
            vec![zp(3, "x1*x2"), zp(3, "x1*x3")],
            radical_only(),
            2,
        )?,
        truth: GroundTruth {
            prime: false,
            components: 2,
            component_dims: vec![2, 1],
            good_density: Some(1.0),
            declared_modulus: Some(1),
            galois_fixed_fraction: None,
        },
        calib: DeskCalibration { hn_k: 16, ..Default::default() },
        provenance: "{x1 = 0} union the x1-axis: Jacobian minor branch witness",
    });

    // 12. a double line (CM, not radical, dimension 1)
    out.push(Fixture {
        name: "double-line",
        instance: IdealInstance::new("double-line", 2, vec![zp(2, "x1^2")], cm_only(), 1)?,
        truth: GroundTruth {
            prime: false,
            components: 1,
            component_dims: vec![1],
            good_density: Some(1.0),
            declared_modulus: Some(1),
            galois_fixed_fraction: None,
        },
        calib: DeskCalibration::default(),
        provenance: "x1^2: one line with multiplicity two; Serre branch case",
    });

    // 13. satisfiable 3CNF reduction
    let sat_cnf = Cnf::new(1, vec![vec![1, 1, 1]])?;
    let mut sat_inst = reduce_to_instance(&sat_cnf, "cnf-sat")?;
    sat_inst.dim = 0;
    out.push(Fixture {
        name: "cnf-sat",
        instance: sat_inst,
        truth: GroundTruth {
            prime: false,
            components: 2,
            component_dims: vec![0, 0],
            good_density: Some(1.0),
            declared_modulus: Some(1),
            galois_fixed_fraction: None,
        },
        calib: DeskCalibration { zerodim_k: 64, ..Default::default() },
        provenance: "arithmetization of (x1 v x1 v x1): origin plus the assignment x1 = 1",
    });

    // 14. unsatisfiable 3CNF reduction (prime)
    let mut clauses = vec![];
    for mask in 0..8 {
        let lit = |i: usize| {
            if (mask >> i) & 1 == 1 {
                (i as i32) + 1
            } else {
                -((i as i32) + 1)
            }
        };
        clauses.push(vec![lit(0), lit(1), lit(2)]);
    }
    let unsat_cnf = Cnf::new(3, clauses)?;
    let mut unsat_inst = reduce_to_instance(&unsat_cnf, "cnf-unsat")?;
    unsat_inst.dim = 0;
    out.push(Fixture {
        name: "cnf-unsat",
        instance: unsat_inst,
        truth: GroundTruth {
            prime: true,
            components: 1,
            component_dims: vec![0],
            good_density: None,
            declared_modulus: Some(1),
            galois_fixed_fraction: None,
        },
        calib: DeskCalibration {
            zerodim_k: 64,
            serre_window: (5, 150),
            ..Default::default()
        },
        provenance: "all eight sign patterns on three variables: only the origin survives",
    });

    // 15. the tightness family at n = 3: four parallel lines whose
    // F_p-definability needs 2 and 3 to both be residues (density 1/4)
    let tightness =
        IdealInstance::new(
            "tightness3",
            3,
            vec![zp(3, "x1^2 - 2"), zp(3, "x2^2 - 3")],
            both(),
            1,
        )?
        .with_plane_model(PlaneModel {
            // projection (x1 + x2, x3): the four lines map to the vertical
            // lines w = ±√2 ± √3, the roots of w^4 - 10 w^2 + 1
            poly: zp(2, "x1^4 - 10*x1^2 + 1"),
            degree: 4,
            families: FamilyRule::RootsOf {
                coord: 0,
                poly: intpoly::from_i64(&[1, 0, -10, 0, 1]),
            },
        });
    out.push(Fixture {
        name: "tightness3",
        instance: tightness,
        truth: GroundTruth {
            prime: false,
            components: 4,
            component_dims: vec![1; 4],
            good_density: Some(0.25),
            declared_modulus: Some(24),
            galois_fixed_fraction: Some(0.25),
        },
        calib: DeskCalibration {
            twotop_window: (14_750_000, 14_756_000),
            twotop_k: 16,
            ..Default::default()
        },
        provenance: "⟨x1^2-2, x2^2-3⟩ in A^3: 2^(n-1) lines, good-prime density 2^-(n-1)",
    });

    for f in &out {
        verify_ground_truth(f)?;
    }
    Ok(out)
}

pub fn fixture_by_name(seed: u64, name: &str) -> Result<Fixture> {
    fixture_library(seed)?
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| usage(format!("unknown fixture '{name}'")))
}

/// Build-time checks that the declared ground truth matches cheap
/// enumerations and factorizations.
fn verify_ground_truth(f: &Fixture) -> Result<()> {
    let mut rng = Rng::new(0x9d);
    match f.name {
        "two-points" | "cnf-sat" => {
            // exactly two F_p points for a good prime
            let c = count_points(&reduce_all(&f.instance, 101)?, 101, 1, 1 << 22)?;
            check(c.count == 2u32.into(), f.name)?;
        }
        "one-point" | "cnf-unsat" => {
            let c = count_points(&reduce_all(&f.instance, 101)?, 101, 1, 1 << 22)?;
            check(c.count == 1u32.into(), f.name)?;
        }
        "qr-points" => {
            // p = 23: both 2 and 3 are residues: all four points rational
            let c = count_points(&reduce_all(&f.instance, 23)?, 23, 1, 1 << 22)?;
            check(c.count == 4u32.into(), f.name)?;
            // p = 5: 2 and 3 are non-residues
            let c2 = count_points(&reduce_all(&f.instance, 5)?, 5, 1, 1 << 22)?;
            check(c2.count == 0u32.into(), f.name)?;
        }
        "conjugate-pair" => {
            let c = count_points(&reduce_all(&f.instance, 7)?, 7, 1, 1 << 22)?;
            check(c.count == 2u32.into(), f.name)?; // 3^2 = 2 mod 7
        }
        "fat-origin" | "double-line" | "line" => {}
        "two-lines" | "split-conic" | "conic" | "elliptic" => {
            // component structure over a medium prime via the plane oracle
            let p = 10007u64;
            let field = PrimeField::new(p)?;
            let g = f.instance.generators[0].reduce_mod_p(&field);
            let pc = plane_components(&field, &g, &mut rng)?;
            let expected_total = f.truth.components;
            check(pc.total_abs_irreducible == expected_total, f.name)?;
        }
        "plane-and-line" => {
            // the Jacobian reaches rank 2 on the line but stays rank <= 1 on
            // the plane's smooth points
            let field = PrimeField::new(101)?;
            let gens = reduce_all(&f.instance, 101)?;
            check(
                crate::variety::jacobian_rank_at(&field, &gens, &[1, 0, 0])? == 2,
                f.name,
            )?;
            check(
                crate::variety::jacobian_rank_at(&field, &gens, &[0, 3, 4])? == 1,
                f.name,
            )?;
        }
        "tightness3" => {
            // the plane model is squarefree and has four roots exactly when
            // both 2 and 3 are residues (p = 23 yes, p = 5 no)
            let model = f.instance.plane_model.as_ref().unwrap();
            let disc = crate::mpoly::resultant::discriminant(&{
                let zz = ZZ;
                let mut uni = SparsePoly::zero(1);
                for (m, c) in &model.poly.terms {
                    uni.add_term(&zz, crate::mpoly::Monomial(vec![m.0[0]]), c.clone());
                }
                uni
            })?;
            check(disc != BigInt::from(0), f.name)?;
            let c23 = count_points(&[model.poly.reduce_mod_p(&PrimeField::new(23)?)], 23, 1, 1 << 22)?;
            check(c23.count == (4u32 * 23).into(), f.name)?;
            let c5 = count_points(&[model.poly.reduce_mod_p(&PrimeField::new(5)?)], 5, 1, 1 << 22)?;
            check(c5.count == 0u32.into(), f.name)?;
        }
        other => return Err(usage(format!("fixture '{other}' lacks a ground-truth check"))),
    }
    Ok(())
}

fn reduce_all(
    inst: &IdealInstance,
    p: u64,
) -> Result<Vec<SparsePoly<PrimeField>>> {
    let field = PrimeField::new(p)?;
    Ok(inst.generators.iter().map(|f| f.reduce_mod_p(&field)).collect())
}

fn check(ok: bool, name: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(usage(format!("ground truth verification failed for fixture '{name}'")))
    }
}
