//! Greedy completion and local search on top of a non-wasteful allocation.
//!
//! [`two_value_approx`] chains the dichotomous solver, the small-good
//! phase, and the local search. It is exact when the canonical small value
//! is 1 and within a factor 1.0345 of the optimum otherwise.

use std::fmt;

use thiserror::Error;

use crate::dichotomous::{solve_dichotomous, BigAllocation};
use crate::instance::{Allocation, Instance, ValuationProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error("instance has fewer goods than agents (n={n}, m={m})")]
    TooFewGoods { n: usize, m: usize },
    #[error("small value is zero; use the dichotomous solver or the exact oracle")]
    ZeroSmallValue,
    #[error("local search run property violated: {0}")]
    RunProperty(RunPropertyViolation),
}

/// A good moved during the local search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub good: usize,
    pub from: usize,
    pub to: usize,
}

/// Structural facts that hold for every improving move when the input is
/// the dichotomous optimum. Recorded, not enforced, by the local search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunPropertyViolation {
    /// The richest agent held a good that is small for it.
    SourceHoldsSmallGood {
        round: usize,
        agent: usize,
        good: usize,
    },
    /// The receiving agent had already given a good away.
    ReceiverLostGood { round: usize, agent: usize },
    /// The moved good is big for the receiver.
    MovedGoodBigForReceiver {
        round: usize,
        agent: usize,
        good: usize,
    },
}

impl fmt::Display for RunPropertyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::SourceHoldsSmallGood { round, agent, good } => write!(
                f,
                "round {round}: source agent {agent} holds good {good} that is small for it"
            ),
            Self::ReceiverLostGood { round, agent } => write!(
                f,
                "round {round}: receiver agent {agent} lost a good earlier"
            ),
            Self::MovedGoodBigForReceiver { round, agent, good } => write!(
                f,
                "round {round}: good {good} is big for receiver agent {agent}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSearch {
    pub allocation: Allocation,
    pub moves: Vec<Move>,
    pub violations: Vec<RunPropertyViolation>,
}

/// Give every good of `S` (small for everyone), in index order, to the
/// agent with the lowest current value (lowest index on ties).
pub fn phase2_assign_small(
    inst: &Instance,
    ba: &BigAllocation,
) -> Result<Allocation, BalanceError> {
    if inst.p() == 0 {
        return Err(BalanceError::ZeroSmallValue);
    }
    let mut alloc = ba.as_allocation().clone();
    let mut values = ValuationProfile::of(inst, &alloc).values;
    for good in inst.small_goods() {
        let agent = argmin(&values);
        alloc.insert(agent, good);
        values[agent] += inst.p();
    }
    Ok(alloc)
}

fn argmin(values: &[u64]) -> usize {
    (0..values.len())
        .min_by_key(|&a| (values[a], a))
        .expect("at least one agent")
}

fn argmax(values: &[u64]) -> usize {
    (0..values.len())
        .min_by_key(|&a| (std::cmp::Reverse(values[a]), a))
        .expect("at least one agent")
}

/// Move goods from the richest to the poorest agent while that strictly
/// raises the NSW.
///
/// Each round compares `(v1 - w1) * (v2 + w2)` against `v1 * v2` for every
/// good of the richest agent and takes the largest strict gain (lowest good
/// index on ties). A good never moves twice, so there are at most `m`
/// rounds. Run-property violations are collected in the result.
pub fn phase3_local_search(inst: &Instance, mut alloc: Allocation) -> LocalSearch {
    let n = inst.n();
    let mut values = ValuationProfile::of(inst, &alloc).values;
    let mut moved = vec![false; inst.m()];
    let mut lost = vec![false; n];
    let mut moves = Vec::new();
    let mut violations = Vec::new();

    loop {
        let rich = argmax(&values);
        let poor = argmin(&values);
        if rich == poor {
            break;
        }
        let (v1, v2) = (values[rich] as u128, values[poor] as u128);
        let current = v1 * v2;
        let mut best: Option<(u128, usize)> = None;
        for &g in alloc.bundle(rich) {
            if g >= moved.len() || moved[g] {
                continue;
            }
            let w1 = inst.value(rich, g) as u128;
            let w2 = inst.value(poor, g) as u128;
            let after = (v1 - w1) * (v2 + w2);
            if best.is_none_or(|(b, _)| after > b) {
                best = Some((after, g));
            }
        }
        let Some((after, good)) = best.filter(|&(after, _)| after > current) else {
            break;
        };
        debug_assert!(after > current);

        let round = moves.len();
        if let Some(&small) = alloc.bundle(rich).iter().find(|&&g| !inst.is_big(rich, g)) {
            violations.push(RunPropertyViolation::SourceHoldsSmallGood {
                round,
                agent: rich,
                good: small,
            });
        }
        if lost[poor] {
            violations.push(RunPropertyViolation::ReceiverLostGood { round, agent: poor });
        }
        if inst.is_big(poor, good) {
            violations.push(RunPropertyViolation::MovedGoodBigForReceiver {
                round,
                agent: poor,
                good,
            });
        }

        alloc.move_good(good, rich, poor);
        values[rich] -= inst.value(rich, good);
        values[poor] += inst.value(poor, good);
        moved[good] = true;
        lost[rich] = true;
        moves.push(Move {
            good,
            from: rich,
            to: poor,
        });
    }

    LocalSearch {
        allocation: alloc,
        moves,
        violations,
    }
}

/// Phases 2 and 3 on an arbitrary non-wasteful starting allocation.
pub fn balance(inst: &Instance, ba: &BigAllocation) -> Result<LocalSearch, BalanceError> {
    let completed = phase2_assign_small(inst, ba)?;
    Ok(phase3_local_search(inst, completed))
}

/// Intermediate states of a full run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxRun {
    pub phase1: BigAllocation,
    pub phase2: Allocation,
    pub search: LocalSearch,
}

/// Full pipeline with intermediate results. Fails on `m < n`, `p = 0`, or
/// any run-property violation (which would point at a phase-1 defect).
pub fn two_value_approx_run(inst: &Instance) -> Result<ApproxRun, BalanceError> {
    if inst.m() < inst.n() {
        return Err(BalanceError::TooFewGoods {
            n: inst.n(),
            m: inst.m(),
        });
    }
    if inst.p() == 0 {
        return Err(BalanceError::ZeroSmallValue);
    }
    let phase1 = solve_dichotomous(inst);
    let phase2 = phase2_assign_small(inst, &phase1)?;
    let search = phase3_local_search(inst, phase2.clone());
    if let Some(&v) = search.violations.first() {
        return Err(BalanceError::RunProperty(v));
    }
    Ok(ApproxRun {
        phase1,
        phase2,
        search,
    })
}

pub fn two_value_approx(inst: &Instance) -> Result<Allocation, BalanceError> {
    two_value_approx_run(inst).map(|run| run.search.allocation)
}

/// Every agent holding a small good is within `p` of the minimum value.
pub fn small_holders_within_band(inst: &Instance, alloc: &Allocation) -> bool {
    let prof = ValuationProfile::of(inst, alloc);
    let Some(&min) = prof.values.iter().min() else {
        return true;
    };
    (0..alloc.n()).all(|a| prof.small[a] == 0 || prof.values[a] <= min + inst.p())
}
