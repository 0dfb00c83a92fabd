//! Instance and allocation data model.
//!
//! Every agent values every good at one of two integers: `q` for goods in
//! its big set `B_i` and `p` for all others. Values are kept in integer
//! units of the canonical (coprime) pair so products stay exact.

use num_integer::Integer;

use crate::error::CoreError;

/// Reduce `(p, q)` to a coprime pair. NSW optimality is invariant under
/// uniform scaling, so this never changes which allocations are optimal.
pub fn canonicalize(p: u64, q: u64) -> Result<(u64, u64), CoreError> {
    if q == 0 || p >= q {
        return Err(CoreError::InvalidValues { p, q });
    }
    let g = p.gcd(&q);
    Ok((p / g, q / g))
}

/// Whether a good is worth `q` (big) or `p` (small) to a given agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SizeClass {
    Big,
    Small,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    m: usize,
    p: u64,
    q: u64,
    big_sets: Vec<Vec<usize>>,
    // Row-major n x m membership table mirroring `big_sets`.
    big: Vec<bool>,
}

impl Instance {
    /// Build an instance; `(p, q)` is canonicalized and each big set sorted.
    pub fn new(
        n: usize,
        m: usize,
        p: u64,
        q: u64,
        big_sets: Vec<Vec<usize>>,
    ) -> Result<Self, CoreError> {
        if n == 0 {
            return Err(CoreError::NoAgents);
        }
        if big_sets.len() != n {
            return Err(CoreError::AgentCountMismatch {
                expected: n,
                got: big_sets.len(),
            });
        }
        let (p, q) = canonicalize(p, q)?;
        let mut big = vec![false; n * m];
        let mut sets = Vec::with_capacity(n);
        for (agent, mut set) in big_sets.into_iter().enumerate() {
            set.sort_unstable();
            for w in set.windows(2) {
                if w[0] == w[1] {
                    return Err(CoreError::DuplicateGood { agent, good: w[0] });
                }
            }
            for &good in &set {
                if good >= m {
                    return Err(CoreError::GoodOutOfRange { agent, good, m });
                }
                big[agent * m + good] = true;
            }
            sets.push(set);
        }
        Ok(Instance {
            n,
            m,
            p,
            q,
            big_sets: sets,
            big,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Small value in canonical units.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Big value in canonical units.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn big_set(&self, agent: usize) -> &[usize] {
        &self.big_sets[agent]
    }

    pub fn big_sets(&self) -> &[Vec<usize>] {
        &self.big_sets
    }

    #[inline]
    pub fn is_big(&self, agent: usize, good: usize) -> bool {
        self.big[agent * self.m + good]
    }

    #[inline]
    pub fn class(&self, agent: usize, good: usize) -> SizeClass {
        if self.is_big(agent, good) {
            SizeClass::Big
        } else {
            SizeClass::Small
        }
    }

    #[inline]
    pub fn value(&self, agent: usize, good: usize) -> u64 {
        if self.is_big(agent, good) {
            self.q
        } else {
            self.p
        }
    }

    /// Agents for which `good` is big.
    pub fn big_for(&self, good: usize) -> Vec<usize> {
        (0..self.n).filter(|&a| self.is_big(a, good)).collect()
    }

    /// Membership mask of `B`, the goods big for at least one agent.
    pub fn globally_big(&self) -> Vec<bool> {
        let mut mask = vec![false; self.m];
        for set in &self.big_sets {
            for &g in set {
                mask[g] = true;
            }
        }
        mask
    }

    /// Goods in `B`, ascending.
    pub fn big_goods(&self) -> Vec<usize> {
        let mask = self.globally_big();
        (0..self.m).filter(|&g| mask[g]).collect()
    }

    /// Goods in `S`, small for every agent, ascending.
    pub fn small_goods(&self) -> Vec<usize> {
        let mask = self.globally_big();
        (0..self.m).filter(|&g| !mask[g]).collect()
    }

    /// `p = 0`: only big goods carry value.
    pub fn is_dichotomous(&self) -> bool {
        self.p == 0
    }
}

/// A family of disjoint bundles, one per agent. Goods may be left out.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
}

impl Allocation {
    pub fn empty(n: usize) -> Self {
        Allocation {
            bundles: vec![Vec::new(); n],
        }
    }

    /// Bundles are sorted; disjointness is not enforced here (see
    /// [`crate::validate::validate_allocation`]).
    pub fn from_bundles(mut bundles: Vec<Vec<usize>>) -> Self {
        for b in &mut bundles {
            b.sort_unstable();
        }
        Allocation { bundles }
    }

    /// Build from an owner vector indexed by good.
    pub fn from_owners(n: usize, owners: &[Option<usize>]) -> Self {
        let mut bundles = vec![Vec::new(); n];
        for (good, owner) in owners.iter().enumerate() {
            if let Some(a) = owner {
                bundles[*a].push(good);
            }
        }
        Allocation { bundles }
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn into_bundles(self) -> Vec<Vec<usize>> {
        self.bundles
    }

    pub fn allocated_count(&self) -> usize {
        self.bundles.iter().map(Vec::len).sum()
    }

    /// Owner of each good in `0..m`. Later bundles win on overlap; goods
    /// `>= m` are ignored.
    pub fn owners(&self, m: usize) -> Vec<Option<usize>> {
        let mut owners = vec![None; m];
        for (agent, bundle) in self.bundles.iter().enumerate() {
            for &g in bundle {
                if g < m {
                    owners[g] = Some(agent);
                }
            }
        }
        owners
    }

    /// Move `good` from `from` to `to`. Returns false if `from` does not hold it.
    pub fn move_good(&mut self, good: usize, from: usize, to: usize) -> bool {
        let Ok(pos) = self.bundles[from].binary_search(&good) else {
            return false;
        };
        self.bundles[from].remove(pos);
        let ins = self.bundles[to].binary_search(&good).unwrap_or_else(|e| e);
        self.bundles[to].insert(ins, good);
        true
    }

    pub(crate) fn insert(&mut self, agent: usize, good: usize) {
        let ins = self.bundles[agent]
            .binary_search(&good)
            .unwrap_or_else(|e| e);
        self.bundles[agent].insert(ins, good);
    }
}

/// Per-agent big/small counts and integer values of an allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationProfile {
    pub big: Vec<usize>,
    pub small: Vec<usize>,
    pub values: Vec<u64>,
}

impl ValuationProfile {
    pub fn of(inst: &Instance, alloc: &Allocation) -> Self {
        let n = alloc.n();
        let mut big = vec![0; n];
        let mut small = vec![0; n];
        for (agent, bundle) in alloc.bundles().iter().enumerate() {
            for &g in bundle {
                if inst.is_big(agent, g) {
                    big[agent] += 1;
                } else {
                    small[agent] += 1;
                }
            }
        }
        let values = big
            .iter()
            .zip(&small)
            .map(|(&b, &s)| inst.q() * b as u64 + inst.p() * s as u64)
            .collect();
        ValuationProfile { big, small, values }
    }

    pub fn allocated(&self) -> usize {
        self.big.iter().sum::<usize>() + self.small.iter().sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(2, 4), Ok((1, 2)));
        assert_eq!(canonicalize(4, 5), Ok((4, 5)));
        assert_eq!(canonicalize(6, 10), Ok((3, 5)));
        assert_eq!(canonicalize(0, 7), Ok((0, 1)));
    }

    #[test]
    fn canonicalize_rejects_bad_pairs() {
        assert!(canonicalize(3, 3).is_err());
        assert!(canonicalize(5, 3).is_err());
        assert!(canonicalize(0, 0).is_err());
    }

    #[test]
    fn instance_rejects_out_of_range_and_duplicates() {
        assert_eq!(
            Instance::new(1, 2, 1, 2, vec![vec![2]]),
            Err(CoreError::GoodOutOfRange {
                agent: 0,
                good: 2,
                m: 2
            })
        );
        assert_eq!(
            Instance::new(1, 3, 1, 2, vec![vec![1, 1]]),
            Err(CoreError::DuplicateGood { agent: 0, good: 1 })
        );
        assert_eq!(Instance::new(0, 3, 1, 2, vec![]), Err(CoreError::NoAgents));
    }

    #[test]
    fn derived_sets() {
        let inst = Instance::new(2, 5, 2, 3, vec![vec![0, 1], vec![1, 3]]).unwrap();
        assert_eq!(inst.big_goods(), vec![0, 1, 3]);
        assert_eq!(inst.small_goods(), vec![2, 4]);
        assert_eq!(inst.big_for(1), vec![0, 1]);
        assert_eq!(inst.value(1, 0), 2);
        assert_eq!(inst.value(1, 3), 3);
    }

    #[test]
    fn profile_counts() {
        let inst = Instance::new(2, 5, 2, 3, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let alloc = Allocation::from_bundles(vec![vec![0, 2, 4], vec![1, 3]]);
        let prof = ValuationProfile::of(&inst, &alloc);
        assert_eq!(prof.big, vec![1, 1]);
        assert_eq!(prof.small, vec![2, 1]);
        assert_eq!(prof.values, vec![7, 5]);
        assert_eq!(prof.allocated(), 5);
    }

    #[test]
    fn move_good_keeps_bundles_sorted() {
        let mut alloc = Allocation::from_bundles(vec![vec![3, 0], vec![2]]);
        assert!(alloc.move_good(3, 0, 1));
        assert!(!alloc.move_good(3, 0, 1));
        assert_eq!(alloc.bundle(1), &[2, 3]);
        assert_eq!(alloc.owners(4), vec![Some(0), None, Some(1), Some(1)]);
    }
}
