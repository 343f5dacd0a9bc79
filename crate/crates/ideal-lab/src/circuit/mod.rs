//! Algebraic circuits with integer edge constants: parsing, size accounting,
//! evaluation mod p, expansion to sparse polynomials, and the reverse-mode
//! derivative transform.
//!
//! Size is the sum of the logarithmic heights of the edge constants; every
//! edge carries a constant (default 1), so size bounds the edge count from
//! above by construction.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{height_int, Domain, PrimeField, ZZ};
use crate::error::{resource, usage, Error, Result};
use crate::mpoly::SparsePoly;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// input variable x<k>, 0-based internally
    Input(usize),
    /// the constant 1
    One,
    /// sum of constant-scaled inputs; empty sum is the zero polynomial
    Add(Vec<(NodeId, BigInt)>),
    /// product of constant-scaled inputs
    Mul(Vec<(NodeId, BigInt)>),
}

impl Node {
    fn edges(&self) -> &[(NodeId, BigInt)] {
        match self {
            Node::Add(e) | Node::Mul(e) => e,
            _ => &[],
        }
    }
}

/// An algebraic circuit DAG: nodes are stored in definition order, so every
/// edge points backwards and acyclicity holds structurally.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CircuitDag {
    pub nodes: Vec<Node>,
    pub outputs: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitProfile {
    pub size: u64,
    pub outputs: usize,
    pub degree_bound: BigInt,
    pub height_bound: BigInt,
}

impl CircuitDag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: Node) -> Result<NodeId> {
        for (src, c) in node.edges() {
            if *src >= self.nodes.len() {
                return Err(usage(format!("edge references undefined node {src}")));
            }
            if c.is_zero() {
                return Err(usage("edge constants must be nonzero"));
            }
        }
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }

    pub fn input(&mut self, var: usize) -> NodeId {
        self.push(Node::Input(var)).expect("input node")
    }

    pub fn one(&mut self) -> NodeId {
        self.push(Node::One).expect("one node")
    }

    pub fn add_output(&mut self, id: NodeId) -> Result<()> {
        if id >= self.nodes.len() {
            return Err(usage(format!("output references undefined node {id}")));
        }
        self.outputs.push(id);
        Ok(())
    }

    /// Number of input variables: one past the largest referenced index.
    pub fn nvars(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Input(v) => Some(v + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Sum of the logarithmic heights of all edge constants.
    pub fn size(&self) -> u64 {
        self.nodes
            .iter()
            .flat_map(|n| n.edges())
            .map(|(_, c)| height_int(c))
            .sum()
    }

    pub fn profile(&self) -> CircuitProfile {
        let s = self.size();
        let one = BigInt::one();
        CircuitProfile {
            size: s,
            outputs: self.outputs.len(),
            degree_bound: &one << s,
            height_bound: &one << (2 * s),
        }
    }

    /// Evaluates all outputs over an arbitrary coefficient domain.
    pub fn eval_in<D: Domain>(&self, domain: &D, point: &[D::Elem]) -> Result<Vec<D::Elem>> {
        let mut vals: Vec<D::Elem> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                Node::Input(k) => point
                    .get(*k)
                    .cloned()
                    .ok_or_else(|| usage(format!("point too short for input x{}", k + 1)))?,
                Node::One => domain.one(),
                Node::Add(edges) => {
                    let mut acc = domain.zero();
                    for (src, c) in edges {
                        let cc = bigint_into(domain, c);
                        acc = domain.add(&acc, &domain.mul(&cc, &vals[*src]));
                    }
                    acc
                }
                Node::Mul(edges) => {
                    let mut acc = domain.one();
                    for (src, c) in edges {
                        let cc = bigint_into(domain, c);
                        acc = domain.mul(&acc, &domain.mul(&cc, &vals[*src]));
                    }
                    acc
                }
            };
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|o| vals[*o].clone()).collect())
    }

    /// Evaluation of every output modulo p; cost linear in circuit size.
    pub fn eval_mod_p(&self, field: &PrimeField, point: &[u64]) -> Result<Vec<u64>> {
        self.eval_in(field, point)
    }

    /// Expands every output to a sparse integer polynomial. The oracle is
    /// desk-scale only: errors once any intermediate exceeds `term_cap` terms.
    pub fn expand(&self, term_cap: usize) -> Result<Vec<SparsePoly<ZZ>>> {
        let zz = ZZ;
        let nvars = self.nvars();
        let mut vals: Vec<SparsePoly<ZZ>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                Node::Input(k) => SparsePoly::var(&zz, nvars, *k),
                Node::One => SparsePoly::constant(&zz, nvars, BigInt::one()),
                Node::Add(edges) => {
                    let mut acc = SparsePoly::zero(nvars);
                    for (src, c) in edges {
                        acc = acc.add(&zz, &vals[*src].scale(&zz, c));
                    }
                    acc
                }
                Node::Mul(edges) => {
                    let mut acc = SparsePoly::constant(&zz, nvars, BigInt::one());
                    for (src, c) in edges {
                        acc = acc.mul(&zz, &vals[*src].scale(&zz, c));
                    }
                    acc
                }
            };
            if v.terms.len() > term_cap {
                return Err(resource(format!(
                    "circuit expansion exceeded {term_cap} terms"
                )));
            }
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|o| vals[*o].clone()).collect())
    }

    /// Splits gates with more than two inputs into chains of binary gates.
    /// Semantically the identity; the derivative transform runs on the result.
    pub fn binarize(&self) -> CircuitDag {
        let mut out = CircuitDag::new();
        let mut map: Vec<NodeId> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let id = match node {
                Node::Input(k) => out.push(Node::Input(*k)).unwrap(),
                Node::One => out.push(Node::One).unwrap(),
                Node::Add(edges) | Node::Mul(edges) => {
                    let mul = matches!(node, Node::Mul(_));
                    let mapped: Vec<(NodeId, BigInt)> =
                        edges.iter().map(|(s, c)| (map[*s], c.clone())).collect();
                    if mapped.len() <= 2 {
                        let n = if mul { Node::Mul(mapped) } else { Node::Add(mapped) };
                        out.push(n).unwrap()
                    } else {
                        let mut acc = {
                            let pair = vec![mapped[0].clone(), mapped[1].clone()];
                            let n = if mul { Node::Mul(pair) } else { Node::Add(pair) };
                            out.push(n).unwrap()
                        };
                        for e in &mapped[2..] {
                            let pair = vec![(acc, BigInt::one()), e.clone()];
                            let n = if mul { Node::Mul(pair) } else { Node::Add(pair) };
                            acc = out.push(n).unwrap();
                        }
                        acc
                    }
                }
            };
            map.push(id);
        }
        out.outputs = self.outputs.iter().map(|o| map[*o]).collect();
        out
    }

    /// Reverse-mode derivative transform: returns a circuit computing
    /// f_1..f_m followed by the partials d f_j / d x_i for j = 1..m, i = 1..n
    /// (j outer, i inner).
    ///
    /// For circuits with gate fan-in at most two, the result has size at most
    /// 5*s*m: the original circuit is kept once (s) and each output's adjoint
    /// network costs at most 4s. Wider gates are binarized first and the
    /// bound applies to the binarized size.
    pub fn derivative_transform(&self) -> CircuitDag {
        let needs_binarize = self
            .nodes
            .iter()
            .any(|n| n.edges().len() > 2);
        let base = if needs_binarize { self.binarize() } else { self.clone() };
        let nvars = base.nvars();
        let mut out = base.clone();
        let m = base.outputs.len();
        let original_outputs = out.outputs.clone();
        out.outputs = original_outputs.clone();

        for j in 0..m {
            let root = original_outputs[j];
            // reachable sub-DAG of the root
            let mut reach = vec![false; base.nodes.len()];
            reach[root] = true;
            for id in (0..=root).rev() {
                if !reach[id] {
                    continue;
                }
                for (src, _) in base.nodes[id].edges() {
                    reach[*src] = true;
                }
            }
            // adjoint accumulators: contributions per node
            let mut contribs: Vec<Vec<(NodeId, BigInt)>> = vec![vec![]; base.nodes.len()];
            // adjoint node ids, built in reverse topological order
            let mut adjoint: Vec<Option<NodeId>> = vec![None; base.nodes.len()];
            let one_node = out.push(Node::One).unwrap();
            adjoint[root] = Some(one_node);
            for id in (0..=root).rev() {
                if !reach[id] {
                    continue;
                }
                let adj = match adjoint[id] {
                    Some(a) => a,
                    None => {
                        let a = out.push(Node::Add(std::mem::take(&mut contribs[id]))).unwrap();
                        adjoint[id] = Some(a);
                        a
                    }
                };
                match base.nodes[id].clone() {
                    Node::Add(edges) => {
                        for (src, c) in edges {
                            contribs[src].push((adj, c));
                        }
                    }
                    Node::Mul(edges) => match edges.len() {
                        0 => {}
                        1 => {
                            let (src, c) = &edges[0];
                            contribs[*src].push((adj, c.clone()));
                        }
                        2 => {
                            let (u, cu) = edges[0].clone();
                            let (w, cw) = edges[1].clone();
                            let cc = &cu * &cw;
                            let tu = out
                                .push(Node::Mul(vec![(adj, cc.clone()), (w, BigInt::one())]))
                                .unwrap();
                            contribs[u].push((tu, BigInt::one()));
                            let tw = out
                                .push(Node::Mul(vec![(adj, cc), (u, BigInt::one())]))
                                .unwrap();
                            contribs[w].push((tw, BigInt::one()));
                        }
                        _ => unreachable!("binarized"),
                    },
                    Node::Input(_) | Node::One => {}
                }
            }
            // per-variable derivative outputs (variables may have several or
            // zero input nodes)
            for var in 0..nvars {
                let mut parts: Vec<(NodeId, BigInt)> = vec![];
                for (id, node) in base.nodes.iter().enumerate() {
                    if let Node::Input(v) = node {
                        if *v == var && reach[id] {
                            if let Some(a) = adjoint[id] {
                                parts.push((a, BigInt::one()));
                            } else if !contribs[id].is_empty() {
                                let a = out
                                    .push(Node::Add(std::mem::take(&mut contribs[id])))
                                    .unwrap();
                                adjoint[id] = Some(a);
                                parts.push((a, BigInt::one()));
                            }
                        }
                    }
                }
                let deriv = match parts.len() {
                    0 => out.push(Node::Add(vec![])).unwrap(),
                    1 if parts[0].1.is_one() => parts[0].0,
                    _ => out.push(Node::Add(parts)).unwrap(),
                };
                out.outputs.push(deriv);
            }
        }
        out
    }
}

fn bigint_into<D: Domain>(domain: &D, c: &BigInt) -> D::Elem {
    // decompose into i64 chunks to stay exact for large constants
    if let Ok(v) = i64::try_from(c) {
        return domain.from_i64(v);
    }
    let neg = c.is_negative();
    let mut mag = c.abs();
    let chunk = BigInt::from(1i64 << 32);
    let mut acc = domain.zero();
    let base = domain.from_i64(1i64 << 32);
    let mut scale = domain.one();
    while !mag.is_zero() {
        let rem: BigInt = &mag % &chunk;
        let v = i64::try_from(&rem).expect("chunk fits");
        acc = domain.add(&acc, &domain.mul(&scale, &domain.from_i64(v)));
        scale = domain.mul(&scale, &base);
        mag /= &chunk;
    }
    if neg {
        domain.neg(&acc)
    } else {
        acc
    }
}

/// Parses the line-oriented circuit format:
/// `node <id> input x<k>` | `node <id> one` | `node <id> add <src:const> ...`
/// | `node <id> mul <src:const> ...` | `output <id> ...`.
/// Constants are signed decimal integers; `<src>:1` may be written `<src>`.
/// Blank lines and `#` comments are skipped. Nodes must be defined before use.
pub fn parse_circuit(input: &str) -> Result<CircuitDag> {
    use std::collections::HashMap;
    let mut dag = CircuitDag::new();
    let mut ids: HashMap<u64, NodeId> = HashMap::new();
    for (lineno, raw) in input.lines().enumerate() {
        let line = raw.trim();
        let lerr = |msg: String| Error::Parse { line: lineno + 1, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("node") => {
                let id: u64 = toks
                    .next()
                    .ok_or_else(|| lerr("missing node id".into()))?
                    .parse()
                    .map_err(|_| lerr("bad node id".into()))?;
                if ids.contains_key(&id) {
                    return Err(lerr(format!("node {id} defined twice")));
                }
                let kind = toks.next().ok_or_else(|| lerr("missing node kind".into()))?;
                let node = match kind {
                    "input" => {
                        let v = toks.next().ok_or_else(|| lerr("missing variable".into()))?;
                        let v = v
                            .strip_prefix('x')
                            .ok_or_else(|| lerr("variable must look like x<k>".into()))?;
                        let k: usize =
                            v.parse().map_err(|_| lerr("bad variable index".into()))?;
                        if k == 0 {
                            return Err(lerr("variables are 1-based".into()));
                        }
                        Node::Input(k - 1)
                    }
                    "one" => Node::One,
                    "add" | "mul" => {
                        let mut edges = vec![];
                        for t in toks.by_ref() {
                            let (src, c) = match t.split_once(':') {
                                Some((s, c)) => (s, c),
                                None => (t, "1"),
                            };
                            let src: u64 =
                                src.parse().map_err(|_| lerr(format!("bad source '{src}'")))?;
                            let c: BigInt =
                                c.parse().map_err(|_| lerr(format!("bad constant '{c}'")))?;
                            let src_id = *ids
                                .get(&src)
                                .ok_or_else(|| lerr(format!("node {src} used before defined")))?;
                            edges.push((src_id, c));
                        }
                        if kind == "add" {
                            Node::Add(edges)
                        } else {
                            Node::Mul(edges)
                        }
                    }
                    other => return Err(lerr(format!("unknown node kind '{other}'"))),
                };
                let nid = dag.push(node).map_err(|e| lerr(e.to_string()))?;
                ids.insert(id, nid);
            }
            Some("output") => {
                for t in toks {
                    let id: u64 = t.parse().map_err(|_| lerr("bad output id".into()))?;
                    let nid = *ids
                        .get(&id)
                        .ok_or_else(|| lerr(format!("output references undefined node {id}")))?;
                    dag.add_output(nid).map_err(|e| lerr(e.to_string()))?;
                }
            }
            Some(other) => return Err(lerr(format!("unknown directive '{other}'"))),
            None => {}
        }
    }
    if dag.outputs.is_empty() {
        return Err(Error::Parse { line: 0, msg: "circuit has no outputs".into() });
    }
    Ok(dag)
}

pub fn format_circuit(dag: &CircuitDag) -> String {
    let mut out = String::new();
    for (i, node) in dag.nodes.iter().enumerate() {
        match node {
            Node::Input(v) => out.push_str(&format!("node {i} input x{}\n", v + 1)),
            Node::One => out.push_str(&format!("node {i} one\n")),
            Node::Add(edges) | Node::Mul(edges) => {
                let kind = if matches!(node, Node::Add(_)) { "add" } else { "mul" };
                let parts: Vec<String> =
                    edges.iter().map(|(s, c)| format!("{s}:{c}")).collect();
                out.push_str(&format!("node {i} {kind} {}\n", parts.join(" ")));
            }
        }
    }
    let outs: Vec<String> = dag.outputs.iter().map(|o| o.to_string()).collect();
    out.push_str(&format!("output {}\n", outs.join(" ")));
    out
}
