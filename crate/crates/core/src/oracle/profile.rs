//! Exact optimum by enumerating value profiles instead of owner vectors.
//!
//! A good contributes `q` to an agent in its big set and `p` to anyone
//! else, so an allocation's value profile is fixed by (a) which globally
//! big goods go to an agent that values them big and (b) how many of the
//! remaining "pooled" goods each agent receives. A pooled good placed on an
//! agent that would value it big only under-counts, so the maximum is
//! unchanged. For (b) the log of the product is a separable concave
//! function of the counts, so handing pooled goods one at a time to the
//! currently poorest agent is optimal; only (a) is enumerated. This handles
//! instances with many interchangeable goods (the hardness reductions) far
//! beyond the reach of the owner-vector walk. The witness is optimal but
//! not the lexicographically first one.

use num_bigint::BigUint;

use super::{fits_u128, ExactProduct, Optimum, OracleError};
use crate::instance::{Allocation, Instance};
use crate::nsw::{nsw_product, NswValue};

/// Exact number of leaves the profile search visits, or `None` on overflow.
pub fn profile_state_count(inst: &Instance) -> Option<u128> {
    inst.big_goods().into_iter().try_fold(1u128, |acc, g| {
        acc.checked_mul(inst.big_for(g).len() as u128 + 1)
    })
}

type Best<P> = Option<(P, Vec<Option<usize>>, Vec<usize>)>;

struct ProfileSearch<'a, P> {
    inst: &'a Instance,
    /// Goods of B with the agents that value them big.
    goods: Vec<(usize, Vec<usize>)>,
    choice: Vec<Option<usize>>,
    big_count: Vec<u64>,
    pooled: usize,
    counts: Vec<usize>,
    values: Vec<u64>,
    best: Best<P>,
}

impl<P: ExactProduct> ProfileSearch<'_, P> {
    fn big_choices(&mut self, idx: usize) {
        if idx == self.goods.len() {
            self.leaf();
            return;
        }
        for k in 0..self.goods[idx].1.len() {
            let agent = self.goods[idx].1[k];
            self.choice[idx] = Some(agent);
            self.big_count[agent] += 1;
            self.big_choices(idx + 1);
            self.big_count[agent] -= 1;
        }
        self.choice[idx] = None;
        self.pooled += 1;
        self.big_choices(idx + 1);
        self.pooled -= 1;
    }

    fn leaf(&mut self) {
        let (p, q) = (self.inst.p(), self.inst.q());
        for a in 0..self.inst.n() {
            self.values[a] = q * self.big_count[a];
            self.counts[a] = 0;
        }
        let pool = self.pooled + self.inst.m() - self.goods.len();
        for _ in 0..pool {
            let poorest = (0..self.values.len())
                .min_by_key(|&a| self.values[a])
                .expect("at least one agent");
            self.values[poorest] += p;
            self.counts[poorest] += 1;
        }
        let product = P::of(&self.values);
        if self.best.as_ref().is_none_or(|(b, _, _)| product > *b) {
            self.best = Some((product, self.choice.clone(), self.counts.clone()));
        }
    }
}

fn run<P: ExactProduct>(inst: &Instance) -> (Vec<Option<usize>>, Vec<usize>) {
    let goods: Vec<(usize, Vec<usize>)> = inst
        .big_goods()
        .into_iter()
        .map(|g| (g, inst.big_for(g)))
        .collect();
    let mut s = ProfileSearch::<P> {
        inst,
        choice: vec![None; goods.len()],
        goods,
        big_count: vec![0; inst.n()],
        pooled: 0,
        counts: vec![0; inst.n()],
        values: vec![0; inst.n()],
        best: None,
    };
    s.big_choices(0);
    let (_, choice, counts) = s.best.expect("at least one profile");
    let mut owners: Vec<Option<usize>> = vec![None; inst.m()];
    for (&(g, _), c) in s.goods.iter().zip(&choice) {
        owners[g] = *c;
    }
    (owners, counts)
}

/// Exact maximum NSW via profile enumeration, bounded by `budget` leaves.
pub fn optimum_by_profiles(inst: &Instance, budget: u64) -> Result<Optimum, OracleError> {
    let states = profile_state_count(inst);
    match states {
        Some(s) if s <= budget as u128 => {}
        other => {
            return Err(OracleError::BudgetExceeded {
                states: other.map_or_else(|| "overflow".to_string(), |s| s.to_string()),
                budget,
            })
        }
    }
    let (mut owners, counts) = if fits_u128(inst.q() * inst.m() as u64, inst.n()) {
        run::<u128>(inst)
    } else {
        run::<BigUint>(inst)
    };
    // Deal the pooled goods in index order by the chosen counts.
    let mut agent = 0;
    let mut left = counts.clone();
    for owner in owners.iter_mut().filter(|o| o.is_none()) {
        while left[agent] == 0 {
            agent += 1;
        }
        *owner = Some(agent);
        left[agent] -= 1;
    }
    let witness = Allocation::from_owners(inst.n(), &owners);
    let value: NswValue = nsw_product(inst, &witness);
    Ok(Optimum { value, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_optimum, OracleConfig};

    #[test]
    fn state_count_matches_small_formula() {
        // Good 0 is big for both agents, good 1 for agent 1 only.
        let inst = Instance::new(2, 3, 1, 2, vec![vec![0], vec![0, 1]]).unwrap();
        assert_eq!(profile_state_count(&inst), Some(3 * 2));
    }

    #[test]
    fn agrees_with_brute_force_on_example_one() {
        let inst = Instance::new(2, 5, 2, 3, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let fast = optimum_by_profiles(&inst, u64::MAX).unwrap();
        let slow = exact_optimum(&inst, &OracleConfig::default()).unwrap();
        assert_eq!(fast.value, slow.value);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = Instance::new(4, 8, 1, 2, vec![(0..8).collect(); 4]).unwrap();
        assert!(optimum_by_profiles(&inst, 10).is_err());
    }
}
