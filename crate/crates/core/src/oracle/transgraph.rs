//! Transformation graphs between two allocations and balancing-path search.
//!
//! An edge `i -> j` carries a good held by `i` in the first allocation and
//! by `j` in the second. A balancing path is an edge-distinct walk whose
//! interior agents give away a good of the same size class as the one they
//! receive, so trading along it leaves their values unchanged. Paths are
//! typed by the class of the first good for the source and of the last
//! good for the target.
//!
//! Reachability runs over states `(agent, class of the good just
//! received)`. A shortest walk in that state graph never repeats a state,
//! hence never repeats an edge, so it is a valid balancing path.

use std::collections::VecDeque;

use crate::instance::{Allocation, Instance, SizeClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransEdge {
    pub from: usize,
    pub to: usize,
    pub good: usize,
    /// Class of the good for the giving agent.
    pub source_class: SizeClass,
    /// Class of the good for the receiving agent.
    pub target_class: SizeClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransGraph {
    pub n: usize,
    pub edges: Vec<TransEdge>,
    /// Goods allocated in the first allocation only (no edge).
    pub only_in_source: Vec<usize>,
    /// Goods allocated in the second allocation only (no edge).
    pub only_in_target: Vec<usize>,
}

impl TransGraph {
    /// The graph of the swapped pair.
    pub fn reversed(&self) -> TransGraph {
        TransGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| TransEdge {
                    from: e.to,
                    to: e.from,
                    good: e.good,
                    source_class: e.target_class,
                    target_class: e.source_class,
                })
                .collect(),
            only_in_source: self.only_in_target.clone(),
            only_in_target: self.only_in_source.clone(),
        }
    }
}

/// One edge per good that both allocations assign, to different agents.
/// Edges are ordered by good index.
pub fn build_trans_graph(inst: &Instance, a: &Allocation, b: &Allocation) -> TransGraph {
    let m = inst.m();
    let from = a.owners(m);
    let to = b.owners(m);
    let mut edges = Vec::new();
    let mut only_in_source = Vec::new();
    let mut only_in_target = Vec::new();
    for good in 0..m {
        match (from[good], to[good]) {
            (Some(i), Some(j)) if i != j => edges.push(TransEdge {
                from: i,
                to: j,
                good,
                source_class: inst.class(i, good),
                target_class: inst.class(j, good),
            }),
            (Some(_), None) => only_in_source.push(good),
            (None, Some(_)) => only_in_target.push(good),
            _ => {}
        }
    }
    TransGraph {
        n: inst.n(),
        edges,
        only_in_source,
        only_in_target,
    }
}

fn class_index(c: SizeClass) -> usize {
    match c {
        SizeClass::Big => 0,
        SizeClass::Small => 1,
    }
}

/// States `(agent, class)` reachable by a balancing path from `start` whose
/// first good has class `first` for `start`. `reached[agent][class]`.
fn reachable_states(g: &TransGraph, start: usize, first: SizeClass) -> Vec<[bool; 2]> {
    let mut reached = vec![[false; 2]; g.n];
    let mut queue = VecDeque::new();
    for e in &g.edges {
        if e.from == start && e.source_class == first {
            let c = class_index(e.target_class);
            if !reached[e.to][c] {
                reached[e.to][c] = true;
                queue.push_back((e.to, e.target_class));
            }
        }
    }
    while let Some((u, incoming)) = queue.pop_front() {
        for e in &g.edges {
            if e.from == u && e.source_class == incoming {
                let c = class_index(e.target_class);
                if !reached[e.to][c] {
                    reached[e.to][c] = true;
                    queue.push_back((e.to, e.target_class));
                }
            }
        }
    }
    reached
}

/// Existence of each balancing-path type between distinct agents, and of
/// balancing cycles (closed BB paths).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PathSummary {
    pub ss: bool,
    pub sb: bool,
    pub bs: bool,
    pub bb: bool,
    pub balancing_cycles: bool,
}

pub fn classify_paths(g: &TransGraph) -> PathSummary {
    let mut out = PathSummary::default();
    for start in 0..g.n {
        for first in [SizeClass::Big, SizeClass::Small] {
            let reached = reachable_states(g, start, first);
            for (agent, r) in reached.iter().enumerate() {
                let (ends_big, ends_small) = (r[0], r[1]);
                if agent == start {
                    if first == SizeClass::Big && ends_big {
                        out.balancing_cycles = true;
                    }
                    continue;
                }
                match first {
                    SizeClass::Big => {
                        out.bb |= ends_big;
                        out.bs |= ends_small;
                    }
                    SizeClass::Small => {
                        out.sb |= ends_big;
                        out.ss |= ends_small;
                    }
                }
            }
        }
    }
    out
}

/// Agents other than `start` reachable from it by a BB-balancing path.
pub fn bb_reachable(g: &TransGraph, start: usize) -> Vec<bool> {
    reachable_states(g, start, SizeClass::Big)
        .into_iter()
        .enumerate()
        .map(|(a, r)| a != start && r[0])
        .collect()
}
