//! Hardness instances built from p-dimensional matching.
//!
//! Each vertex becomes a "vertex good" and each hyperedge an agent that
//! values its incident vertex goods big and everything else small. Dummy
//! goods (small for everyone) top up the goods so that a matching of the
//! target size lets every agent reach the same value.

mod lp;

pub use lp::{
    gap4dm_optimal_vertex, hardness_constants, parse_certificate, parse_rational_str,
    serialize_certificate, verify_apx_lp, ConstraintCheck, ConstraintKind, HardnessConstants,
    LpCertificate, LpReport,
};

use std::fmt::Write as _;

use num_integer::Integer;
use thiserror::Error;

use crate::error::CoreError;
use crate::format::{parse_fields, Lines};
use crate::instance::{Allocation, Instance};

pub const PDM_MAGIC: &str = "pdm 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("dimension must be at least 3 (got {0})")]
    DimTooSmall(usize),
    #[error("big value q={q} must exceed p={p}")]
    BigValueTooSmall { p: u64, q: u64 },
    #[error("p={p} and q={q} are not coprime")]
    NotCoprime { p: u64, q: u64 },
    #[error("need at least n={n} edges, got m={m}")]
    TooFewEdges { n: usize, m: usize },
    #[error("gap reduction needs a 4-dimensional instance (got {0})")]
    NotFourDimensional(usize),
    #[error("gap reduction needs m = 3n edges (n={n}, m={m})")]
    EdgeCountNot3n { n: usize, m: usize },
    #[error("target matching size {k} not in 0..={n}")]
    TargetOutOfRange { k: usize, n: usize },
    #[error("edge {edge}: {msg}")]
    BadEdge { edge: usize, msg: String },
    #[error("matching edge {0} out of range")]
    MatchingEdgeOutOfRange(usize),
    #[error("matching edges {0} and {1} share a vertex")]
    MatchingNotDisjoint(usize, usize),
    #[error("matching has {got} edges, instance expects {expected}")]
    MatchingSizeMismatch { expected: usize, got: usize },
    #[error("instance does not come from this matching instance")]
    InstanceMismatch,
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// A `dim`-partite `dim`-uniform hypergraph with `n` vertices per part.
/// Edge component `k` indexes a vertex of part `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdmInstance {
    dim: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl PdmInstance {
    pub fn new(dim: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self, ReductionError> {
        if dim == 0 || n == 0 || edges.is_empty() {
            return Err(ReductionError::BadEdge {
                edge: 0,
                msg: "need dim >= 1, n >= 1 and at least one edge".into(),
            });
        }
        for (i, e) in edges.iter().enumerate() {
            if e.len() != dim {
                return Err(ReductionError::BadEdge {
                    edge: i,
                    msg: format!("expected {dim} vertices, got {}", e.len()),
                });
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(ReductionError::BadEdge {
                    edge: i,
                    msg: format!("vertex {v} out of range (n={n})"),
                });
            }
        }
        Ok(PdmInstance { dim, n, edges })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Good index of vertex `v` in part `k`.
    pub fn vertex_good(&self, part: usize, v: usize) -> usize {
        part * self.n + v
    }

    fn edge_goods(&self, edge: usize) -> Vec<usize> {
        self.edges[edge]
            .iter()
            .enumerate()
            .map(|(k, &v)| self.vertex_good(k, v))
            .collect()
    }

    /// Check that `matching` lists distinct, pairwise vertex-disjoint edges.
    pub fn check_matching(&self, matching: &[usize]) -> Result<(), ReductionError> {
        for (a, &ea) in matching.iter().enumerate() {
            if ea >= self.m() {
                return Err(ReductionError::MatchingEdgeOutOfRange(ea));
            }
            for &eb in &matching[..a] {
                let clash = ea == eb
                    || self.edges[ea]
                        .iter()
                        .zip(&self.edges[eb])
                        .any(|(x, y)| x == y);
                if clash {
                    return Err(ReductionError::MatchingNotDisjoint(eb, ea));
                }
            }
        }
        Ok(())
    }

    /// First perfect matching in edge-index order, by exhaustive search.
    pub fn find_perfect_matching(&self) -> Option<Vec<usize>> {
        fn go(g: &PdmInstance, v: usize, used: &mut [Vec<bool>], chosen: &mut Vec<usize>) -> bool {
            if v == g.n {
                return true;
            }
            for (i, e) in g.edges.iter().enumerate() {
                if e[0] != v || (1..g.dim).any(|k| used[k][e[k]]) {
                    continue;
                }
                for k in 1..g.dim {
                    used[k][e[k]] = true;
                }
                chosen.push(i);
                if go(g, v + 1, used, chosen) {
                    return true;
                }
                chosen.pop();
                for k in 1..g.dim {
                    used[k][e[k]] = false;
                }
            }
            false
        }
        let mut used = vec![vec![false; self.n]; self.dim];
        let mut chosen = Vec::new();
        go(self, 0, &mut used, &mut chosen).then_some(chosen)
    }
}

pub fn parse_pdm(text: &str) -> Result<PdmInstance, ReductionError> {
    let mut lines = Lines::new(text);
    lines.expect(PDM_MAGIC)?;
    let header = lines.next("size line")?;
    let f: Vec<usize> = parse_fields(header, lines.line_no(), 3)?;
    let (dim, n, m) = (f[0], f[1], f[2]);
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let line = lines.next(&format!("edge {i}"))?;
        edges.push(parse_fields(line, lines.line_no(), dim)?);
    }
    lines.finish()?;
    PdmInstance::new(dim, n, edges)
}

pub fn serialize_pdm(g: &PdmInstance) -> String {
    let mut out = String::new();
    writeln!(out, "{PDM_MAGIC}").unwrap();
    writeln!(out, "{} {} {}", g.dim, g.n, g.m()).unwrap();
    for e in &g.edges {
        let line: Vec<String> = e.iter().map(usize::to_string).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

fn build(g: &PdmInstance, p: u64, q: u64, dummies: usize) -> Result<Instance, ReductionError> {
    let m = g.dim * g.n + dummies;
    let sets = (0..g.m()).map(|e| g.edge_goods(e)).collect();
    Ok(Instance::new(g.m(), m, p, q, sets)?)
}

/// Exact-matching reduction: `p = dim` vertex goods per agent, values
/// `(p, q)`, and `q (m - n)` dummy goods.
pub fn reduce_pdm(g: &PdmInstance, q: u64) -> Result<Instance, ReductionError> {
    let p = g.dim as u64;
    if g.dim < 3 {
        return Err(ReductionError::DimTooSmall(g.dim));
    }
    if q <= p {
        return Err(ReductionError::BigValueTooSmall { p, q });
    }
    if p.gcd(&q) != 1 {
        return Err(ReductionError::NotCoprime { p, q });
    }
    if g.m() < g.n {
        return Err(ReductionError::TooFewEdges { n: g.n, m: g.m() });
    }
    build(g, p, q, q as usize * (g.m() - g.n))
}

/// Gap reduction at values `(4, 5)` with target matching size `k`:
/// `5 (m - k)` dummy goods.
pub fn reduce_gap4dm(g: &PdmInstance, k: usize) -> Result<Instance, ReductionError> {
    if g.dim != 4 {
        return Err(ReductionError::NotFourDimensional(g.dim));
    }
    if g.m() != 3 * g.n {
        return Err(ReductionError::EdgeCountNot3n { n: g.n, m: g.m() });
    }
    if k > g.n {
        return Err(ReductionError::TargetOutOfRange { k, n: g.n });
    }
    build(g, 4, 5, 5 * (g.m() - k))
}

/// The allocation that certifies completeness: matched agents take their
/// vertex goods, every other agent takes `q` dummy goods (dealt in index
/// order). Vertex goods left uncovered by a non-perfect matching go to the
/// first unmatched agent.
pub fn matching_to_allocation(
    g: &PdmInstance,
    matching: &[usize],
    inst: &Instance,
) -> Result<Allocation, ReductionError> {
    let vertex_goods = g.dim * g.n;
    if inst.n() != g.m() || inst.m() < vertex_goods {
        return Err(ReductionError::InstanceMismatch);
    }
    let q = inst.q() as usize;
    let dummies = inst.m() - vertex_goods;
    if !dummies.is_multiple_of(q) || dummies / q > g.m() {
        return Err(ReductionError::InstanceMismatch);
    }
    let expected = g.m() - dummies / q;
    g.check_matching(matching)?;
    if matching.len() != expected {
        return Err(ReductionError::MatchingSizeMismatch {
            expected,
            got: matching.len(),
        });
    }

    let mut owners: Vec<Option<usize>> = vec![None; inst.m()];
    let mut matched = vec![false; g.m()];
    for &e in matching {
        matched[e] = true;
        for good in g.edge_goods(e) {
            owners[good] = Some(e);
        }
    }
    let mut next_dummy = vertex_goods;
    for agent in (0..g.m()).filter(|&a| !matched[a]) {
        for _ in 0..q {
            owners[next_dummy] = Some(agent);
            next_dummy += 1;
        }
    }
    let spare = (0..g.m()).find(|&a| !matched[a]).unwrap_or(0);
    for owner in owners.iter_mut().take(vertex_goods) {
        owner.get_or_insert(spare);
    }
    Ok(Allocation::from_owners(inst.n(), &owners))
}

/// All `(i, j) >= 0` with `q p = q i + p j`, i.e. ways to reach value `p`
/// (big value 1, small value `p/q`) with `i` big and `j` small goods.
pub fn coprime_solutions(p: u64, q: u64) -> Result<Vec<(u64, u64)>, ReductionError> {
    if p == 0 || q <= p {
        return Err(ReductionError::BigValueTooSmall { p, q });
    }
    if p.gcd(&q) != 1 {
        return Err(ReductionError::NotCoprime { p, q });
    }
    let target = q * p;
    Ok((0..=q)
        .filter_map(|j| {
            let rest = target - p * j;
            rest.is_multiple_of(q).then_some((rest / q, j))
        })
        .collect())
}
