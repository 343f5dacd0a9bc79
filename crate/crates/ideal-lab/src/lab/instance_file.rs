//! Instance file format: a metadata block (variable count, claimed class,
//! dimension) plus either explicit generators in the polynomial text format
//! or an embedded circuit whose outputs are expanded into generators.

use crate::arith::ZZ;
use crate::circuit::{format_circuit, parse_circuit};
use crate::error::{Error, Result};
use crate::mpoly::text::{format_poly, parse_poly};
use crate::primality::{IdealInstance, InstanceClass};

/// Parses the instance text format:
///
/// ```text
/// # comment
/// vars: 3
/// class: radical equidim-cm
/// dim: 1
/// generator: x1^2 - 2
/// generator: x2^2 - 3
/// ```
///
/// or with an embedded circuit instead of `generator:` lines:
///
/// ```text
/// vars: 2
/// class: radical
/// dim: 0
/// begin-circuit
/// node 0 input x1
/// node 1 mul 0:1 0:1
/// output 1
/// end-circuit
/// ```
pub fn parse_instance(name: &str, text: &str, expansion_cap: usize) -> Result<IdealInstance> {
    let zz = ZZ;
    let mut vars: Option<usize> = None;
    let mut dim: Option<usize> = None;
    let mut class = InstanceClass { radical: false, equidim_cm: false };
    let mut gens = vec![];
    let mut circuit_lines: Option<Vec<String>> = None;
    let mut in_circuit = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let perr = |msg: String| Error::Parse { line: lineno + 1, msg };
        if in_circuit {
            if line == "end-circuit" {
                in_circuit = false;
            } else {
                circuit_lines.as_mut().unwrap().push(raw.to_string());
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "begin-circuit" {
            if circuit_lines.is_some() {
                return Err(perr("two circuit blocks".into()));
            }
            circuit_lines = Some(vec![]);
            in_circuit = true;
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(perr(format!("expected 'key: value', got '{line}'")));
        };
        let value = value.trim();
        match key.trim() {
            "vars" => {
                vars = Some(value.parse().map_err(|_| perr("bad vars".into()))?);
            }
            "dim" => {
                dim = Some(value.parse().map_err(|_| perr("bad dim".into()))?);
            }
            "class" => {
                for tag in value.split_whitespace() {
                    match tag {
                        "radical" => class.radical = true,
                        "equidim-cm" => class.equidim_cm = true,
                        other => return Err(perr(format!("unknown class '{other}'"))),
                    }
                }
            }
            "generator" => {
                let n = vars.ok_or_else(|| perr("'vars' must come before generators".into()))?;
                gens.push(parse_poly(&zz, n, value)?);
            }
            other => return Err(perr(format!("unknown key '{other}'"))),
        }
    }
    if in_circuit {
        return Err(Error::Parse { line: 0, msg: "unterminated circuit block".into() });
    }
    let n = vars.ok_or(Error::Parse { line: 0, msg: "missing 'vars'".into() })?;
    let r = dim.ok_or(Error::Parse { line: 0, msg: "missing 'dim'".into() })?;
    if let Some(lines) = circuit_lines {
        if !gens.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "give either generators or a circuit, not both".into(),
            });
        }
        let dag = parse_circuit(&lines.join("\n"))?;
        gens = dag.expand(expansion_cap)?;
        // pad variable counts: circuit variables may be fewer than declared
        gens = gens
            .into_iter()
            .map(|g| if g.nvars < n { g.extend_vars(n) } else { g })
            .collect();
        if gens.iter().any(|g| g.nvars != n) {
            return Err(Error::Parse {
                line: 0,
                msg: "circuit uses more variables than declared".into(),
            });
        }
    }
    if !class.radical && !class.equidim_cm {
        return Err(Error::Parse { line: 0, msg: "missing or empty 'class'".into() });
    }
    IdealInstance::new(name, n, gens, class, r)
}

pub fn format_instance(inst: &IdealInstance) -> String {
    let zz = ZZ;
    let mut out = String::new();
    out.push_str(&format!("# ideal-lab instance: {}\n", inst.name));
    out.push_str(&format!("vars: {}\n", inst.nvars));
    let mut tags = vec![];
    if inst.class.radical {
        tags.push("radical");
    }
    if inst.class.equidim_cm {
        tags.push("equidim-cm");
    }
    out.push_str(&format!("class: {}\n", tags.join(" ")));
    out.push_str(&format!("dim: {}\n", inst.dim));
    for g in &inst.generators {
        out.push_str(&format!("generator: {}\n", format_poly(&zz, g)));
    }
    out
}

/// A registry mapping fixture names to instance paths with a ground-truth
/// block:
///
/// ```text
/// fixture my-curve
/// instance curves/split.inst
/// prime false
/// components 2
/// density 0.5
/// end
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct RegistryEntry {
    pub name: String,
    pub instance_path: String,
    pub prime: Option<bool>,
    pub components: Option<usize>,
    pub density: Option<f64>,
}

pub fn parse_registry(text: &str) -> Result<Vec<RegistryEntry>> {
    let mut out = vec![];
    let mut cur: Option<RegistryEntry> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let perr = |msg: String| Error::Parse { line: lineno + 1, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap();
        let rest = toks.collect::<Vec<_>>().join(" ");
        match key {
            "fixture" => {
                if cur.is_some() {
                    return Err(perr("previous fixture not closed with 'end'".into()));
                }
                cur = Some(RegistryEntry {
                    name: rest,
                    instance_path: String::new(),
                    prime: None,
                    components: None,
                    density: None,
                });
            }
            "end" => {
                let entry = cur.take().ok_or_else(|| perr("'end' outside a fixture".into()))?;
                if entry.instance_path.is_empty() {
                    return Err(perr(format!("fixture '{}' lacks an instance path", entry.name)));
                }
                out.push(entry);
            }
            _ => {
                let entry = cur
                    .as_mut()
                    .ok_or_else(|| perr(format!("'{key}' outside a fixture block")))?;
                match key {
                    "instance" => entry.instance_path = rest,
                    "prime" => {
                        entry.prime = Some(rest.parse().map_err(|_| perr("bad prime flag".into()))?)
                    }
                    "components" => {
                        entry.components =
                            Some(rest.parse().map_err(|_| perr("bad components".into()))?)
                    }
                    "density" => {
                        entry.density =
                            Some(rest.parse().map_err(|_| perr("bad density".into()))?)
                    }
                    other => return Err(perr(format!("unknown registry key '{other}'"))),
                }
            }
        }
    }
    if cur.is_some() {
        return Err(Error::Parse { line: 0, msg: "unterminated fixture block".into() });
    }
    Ok(out)
}

/// Writes the circuit companion format for an instance that has one.
pub fn circuit_text(dag: &crate::circuit::CircuitDag) -> String {
    format_circuit(dag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_generator_form() {
        let text = "\
# tightness
vars: 3
class: radical equidim-cm
dim: 1
generator: x1^2 - 2
generator: x2^2 - 3
";
        let inst = parse_instance("t", text, 1000).unwrap();
        assert_eq!(inst.nvars, 3);
        assert_eq!(inst.generators.len(), 2);
        assert!(inst.class.radical && inst.class.equidim_cm);
        // round-trip through the writer
        let again = parse_instance("t", &format_instance(&inst), 1000).unwrap();
        assert_eq!(again.generators, inst.generators);
    }

    #[test]
    fn parse_circuit_form() {
        let text = "\
vars: 1
class: equidim-cm
dim: 0
begin-circuit
node 0 input x1
node 1 mul 0:1 0:1
output 1
end-circuit
";
        let inst = parse_instance("sq", text, 1000).unwrap();
        assert_eq!(inst.generators.len(), 1);
        assert_eq!(inst.generators[0].degree(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_instance("x", "vars: 2\n", 10).is_err());
        assert!(parse_instance("x", "vars: 2\ndim: 0\nclass: frobnic\n", 10).is_err());
        assert!(parse_instance("x", "generator: x1\nvars: 1\ndim: 0\nclass: radical\n", 10).is_err());
    }

    #[test]
    fn registry_roundtrip() {
        let text = "\
fixture curve-a
instance a.inst
prime false
components 2
density 0.5
end
fixture curve-b
instance b.inst
end
";
        let reg = parse_registry(text).unwrap();
        assert_eq!(reg.len(), 2);
        assert_eq!(reg[0].name, "curve-a");
        assert_eq!(reg[0].density, Some(0.5));
        assert!(parse_registry("fixture a\n").is_err());
    }
}
