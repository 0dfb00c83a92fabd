//! Optimal allocation of the globally big goods when small values are zero.
//!
//! Goods of `B` are first dealt greedily, then rebalanced along paths of
//! the exchange graph: an edge `u -> w` exists when `u` holds a good that
//! `w` values big. Trading one good along a path from a heavy agent to an
//! agent with at least two fewer goods strictly lowers the sum of squared
//! loads, so the loop terminates. At the fixpoint no such path exists, which
//! makes the sorted load vector lexicographically minimal among all
//! non-wasteful allocations.

use std::collections::VecDeque;

use crate::error::CoreError;
use crate::instance::{Allocation, Instance};
use crate::validate::validate_allocation;

/// A non-wasteful allocation: every good of `B` sits with an agent that
/// values it big, and nothing else is allocated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigAllocation {
    alloc: Allocation,
}

impl BigAllocation {
    /// Checks non-wastefulness against `inst`.
    pub fn new(inst: &Instance, alloc: Allocation) -> Result<Self, CoreError> {
        if !validate_allocation(inst, &alloc)?.nonwasteful {
            return Err(CoreError::NotNonWasteful);
        }
        Ok(BigAllocation { alloc })
    }

    pub fn loads(&self) -> Vec<usize> {
        self.alloc.bundles().iter().map(Vec::len).collect()
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        self.alloc.bundle(agent)
    }

    pub fn as_allocation(&self) -> &Allocation {
        &self.alloc
    }

    pub fn into_allocation(self) -> Allocation {
        self.alloc
    }

    /// Number of agents holding at least one good.
    pub fn covered_agents(&self) -> usize {
        self.loads().iter().filter(|&&b| b > 0).count()
    }
}

/// Deal each good of `B` in index order to the eligible agent with the
/// fewest goods so far (lowest index on ties).
pub fn initial_nonwasteful(inst: &Instance) -> BigAllocation {
    let mut alloc = Allocation::empty(inst.n());
    let mut loads = vec![0usize; inst.n()];
    for good in inst.big_goods() {
        let agent = (0..inst.n())
            .filter(|&a| inst.is_big(a, good))
            .min_by_key(|&a| (loads[a], a))
            .expect("good in B has an eligible agent");
        alloc.insert(agent, good);
        loads[agent] += 1;
    }
    BigAllocation { alloc }
}

/// Lowest-index good in `from`'s bundle that `to` values big.
fn edge_good(inst: &Instance, alloc: &Allocation, from: usize, to: usize) -> Option<usize> {
    alloc
        .bundle(from)
        .iter()
        .copied()
        .find(|&g| inst.is_big(to, g))
}

/// BFS over the exchange graph. Returns the parent of each reached agent;
/// the source maps to itself.
fn bfs(inst: &Instance, alloc: &Allocation, source: usize) -> Vec<Option<usize>> {
    let n = inst.n();
    let mut parent = vec![None; n];
    parent[source] = Some(source);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        #[allow(clippy::needless_range_loop)]
        for w in 0..n {
            if parent[w].is_none() && edge_good(inst, alloc, u, w).is_some() {
                parent[w] = Some(u);
                queue.push_back(w);
            }
        }
    }
    parent
}

/// Agents reachable from `source` in the exchange graph (source included).
pub fn exchange_reachable(inst: &Instance, ba: &BigAllocation, source: usize) -> Vec<bool> {
    bfs(inst, &ba.alloc, source)
        .into_iter()
        .map(|p| p.is_some())
        .collect()
}

/// Trade along exchange paths until no agent can pass a good to an agent
/// holding at least two fewer.
pub fn balance_loads(inst: &Instance, ba: BigAllocation) -> BigAllocation {
    let mut alloc = ba.alloc;
    let n = inst.n();
    loop {
        let loads: Vec<usize> = alloc.bundles().iter().map(Vec::len).collect();
        let mut sources: Vec<usize> = (0..n).collect();
        sources.sort_by_key(|&a| (std::cmp::Reverse(loads[a]), a));

        let mut found = None;
        for &src in &sources {
            if loads[src] < 2 {
                break;
            }
            let parent = bfs(inst, &alloc, src);
            let target = (0..n)
                .filter(|&a| a != src && parent[a].is_some())
                .min_by_key(|&a| (loads[a], a));
            if let Some(dst) = target {
                if loads[src] >= loads[dst] + 2 {
                    found = Some((src, dst, parent));
                    break;
                }
            }
        }
        let Some((src, dst, parent)) = found else {
            break;
        };

        let mut path = vec![dst];
        while *path.last().unwrap() != src {
            let cur = *path.last().unwrap();
            path.push(parent[cur].expect("on BFS tree"));
        }
        path.reverse();
        // Pick every good before moving any: each agent on a simple path
        // gives exactly one good from its current bundle.
        let moves: Vec<(usize, usize, usize)> = path
            .windows(2)
            .map(|w| {
                let g = edge_good(inst, &alloc, w[0], w[1]).expect("BFS edge");
                (g, w[0], w[1])
            })
            .collect();
        for (g, from, to) in moves {
            alloc.move_good(g, from, to);
        }
    }
    BigAllocation { alloc }
}

/// Optimal allocation of `B` for the zero-small-value relaxation.
pub fn solve_dichotomous(inst: &Instance) -> BigAllocation {
    balance_loads(inst, initial_nonwasteful(inst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_one() -> Instance {
        Instance::new(2, 5, 2, 3, vec![vec![0, 1], vec![0, 1]]).unwrap()
    }

    fn big(inst: &Instance, bundles: Vec<Vec<usize>>) -> BigAllocation {
        BigAllocation::new(inst, Allocation::from_bundles(bundles)).unwrap()
    }

    #[test]
    fn initial_example_one() {
        let ba = initial_nonwasteful(&example_one());
        assert_eq!(ba.loads(), vec![1, 1]);
    }

    #[test]
    fn initial_empty_b() {
        let inst = Instance::new(3, 4, 1, 2, vec![vec![], vec![], vec![]]).unwrap();
        let ba = initial_nonwasteful(&inst);
        assert_eq!(ba.loads(), vec![0, 0, 0]);
    }

    #[test]
    fn initial_greedy_trace() {
        let inst = Instance::new(2, 3, 1, 2, vec![vec![0, 1, 2], vec![2]]).unwrap();
        let ba = initial_nonwasteful(&inst);
        assert_eq!(ba.bundle(0), &[0, 1]);
        assert_eq!(ba.bundle(1), &[2]);
        assert_eq!(ba.loads(), vec![2, 1]);
    }

    #[test]
    fn balanced_input_unchanged() {
        let inst = example_one();
        let ba = big(&inst, vec![vec![1], vec![0]]);
        assert_eq!(balance_loads(&inst, ba.clone()), ba);
    }

    #[test]
    fn single_edge_trade() {
        let inst = Instance::new(2, 2, 1, 2, vec![vec![0, 1], vec![1]]).unwrap();
        let ba = big(&inst, vec![vec![0, 1], vec![]]);
        let out = balance_loads(&inst, ba);
        assert_eq!(out.bundle(0), &[0]);
        assert_eq!(out.bundle(1), &[1]);
    }

    #[test]
    fn chain_trade() {
        let inst = Instance::new(3, 3, 1, 2, vec![vec![0, 1], vec![1, 2], vec![2]]).unwrap();
        let ba = big(&inst, vec![vec![0, 1], vec![2], vec![]]);
        let out = balance_loads(&inst, ba);
        assert_eq!(out.loads(), vec![1, 1, 1]);
        assert_eq!(out.bundle(0), &[0]);
        assert_eq!(out.bundle(1), &[1]);
        assert_eq!(out.bundle(2), &[2]);
    }

    #[test]
    fn single_agent_takes_b() {
        let inst = Instance::new(1, 4, 1, 2, vec![vec![1, 3]]).unwrap();
        let out = solve_dichotomous(&inst);
        assert_eq!(out.bundle(0), &[1, 3]);
    }

    #[test]
    fn big_allocation_rejects_wasteful() {
        let inst = example_one();
        let alloc = Allocation::from_bundles(vec![vec![0, 2], vec![1]]);
        assert_eq!(
            BigAllocation::new(&inst, alloc),
            Err(CoreError::NotNonWasteful)
        );
    }
}
