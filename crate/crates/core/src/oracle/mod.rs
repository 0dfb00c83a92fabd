//! Exhaustive exact optimum and the approximation-ratio harness.
//!
//! The brute force walks every owner vector in lexicographic order (good 0
//! most significant, agents innermost) and keeps the first maximum, so the
//! witness is the lexicographically smallest optimal allocation. Parallel
//! mode splits on the owner of good 0 and merges in that order, which gives
//! the same result as the sequential walk.

mod profile;
mod transgraph;

pub use profile::{optimum_by_profiles, profile_state_count};
pub use transgraph::{
    bb_reachable, build_trans_graph, classify_paths, PathSummary, TransEdge, TransGraph,
};

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::balance::{two_value_approx, BalanceError};
use crate::dichotomous::BigAllocation;
use crate::instance::{Allocation, Instance};
use crate::nsw::{ln_biguint, nsw_product, NswValue};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space of {states} states exceeds budget {budget}")]
    BudgetExceeded { states: String, budget: u64 },
    #[error(transparent)]
    Balance(#[from] BalanceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of complete assignments to enumerate.
    pub budget: u64,
    pub parallel: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            budget: DEFAULT_BUDGET,
            parallel: false,
        }
    }
}

impl OracleConfig {
    pub fn with_budget(budget: u64) -> Self {
        OracleConfig {
            budget,
            ..Default::default()
        }
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: NswValue,
    pub witness: Allocation,
}

/// `n^m`, or `None` on overflow.
pub fn state_count(n: usize, m: usize) -> Option<u64> {
    (n as u64).checked_pow(m as u32)
}

fn check_budget(inst: &Instance, budget: u64) -> Result<(), OracleError> {
    match state_count(inst.n(), inst.m()) {
        Some(states) if states <= budget => Ok(()),
        Some(states) => Err(OracleError::BudgetExceeded {
            states: states.to_string(),
            budget,
        }),
        None => Err(OracleError::BudgetExceeded {
            states: format!("{}^{}", inst.n(), inst.m()),
            budget,
        }),
    }
}

/// Exact product arithmetic; `u128` when the largest product fits.
pub(crate) trait ExactProduct: Ord + Clone + Send {
    fn of(values: &[u64]) -> Self;
    fn into_big(self) -> BigUint;
}

impl ExactProduct for u128 {
    #[inline]
    fn of(values: &[u64]) -> Self {
        values.iter().fold(1u128, |acc, &v| acc * v as u128)
    }

    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl ExactProduct for BigUint {
    fn of(values: &[u64]) -> Self {
        values
            .iter()
            .fold(BigUint::from(1u32), |acc, &v| acc * BigUint::from(v))
    }

    fn into_big(self) -> BigUint {
        self
    }
}

/// Whether every product of `n` values bounded by `max_value` fits in u128.
pub(crate) fn fits_u128(max_value: u64, n: usize) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..n {
        match acc.checked_mul(max_value.max(1) as u128) {
            Some(v) if v < (1u128 << 127) => acc = v,
            _ => return false,
        }
    }
    true
}

type Best<P> = Option<((P, usize), Vec<usize>)>;

struct Search<'a, P> {
    inst: &'a Instance,
    preferred: Option<&'a [Option<usize>]>,
    owners: Vec<usize>,
    values: Vec<u64>,
    overlap: usize,
    best: Best<P>,
}

impl<'a, P: ExactProduct> Search<'a, P> {
    fn new(inst: &'a Instance, preferred: Option<&'a [Option<usize>]>) -> Self {
        Search {
            inst,
            preferred,
            owners: vec![0; inst.m()],
            values: vec![0; inst.n()],
            overlap: 0,
            best: None,
        }
    }

    #[inline]
    fn assign(&mut self, good: usize, agent: usize) {
        self.owners[good] = agent;
        self.values[agent] += self.inst.value(agent, good);
        if self.preferred.is_some_and(|p| p[good] == Some(agent)) {
            self.overlap += 1;
        }
    }

    #[inline]
    fn unassign(&mut self, good: usize, agent: usize) {
        self.values[agent] -= self.inst.value(agent, good);
        if self.preferred.is_some_and(|p| p[good] == Some(agent)) {
            self.overlap -= 1;
        }
    }

    fn dfs(&mut self, good: usize) {
        if good == self.inst.m() {
            let key = (P::of(&self.values), self.overlap);
            if self.best.as_ref().is_none_or(|(b, _)| key > *b) {
                self.best = Some((key, self.owners.clone()));
            }
            return;
        }
        for agent in 0..self.inst.n() {
            self.assign(good, agent);
            self.dfs(good + 1);
            self.unassign(good, agent);
        }
    }
}

fn merge<P: Ord>(results: impl IntoIterator<Item = Best<P>>) -> Best<P> {
    let mut best: Best<P> = None;
    for r in results.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| r.0 > *b) {
            best = Some(r);
        }
    }
    best
}

fn run_search<P: ExactProduct>(
    inst: &Instance,
    preferred: Option<&[Option<usize>]>,
    parallel: bool,
) -> (P, Vec<usize>) {
    let best = if inst.m() == 0 {
        let mut s = Search::<P>::new(inst, preferred);
        s.dfs(0);
        s.best
    } else {
        let branch = |first: usize| {
            let mut s = Search::<P>::new(inst, preferred);
            s.assign(0, first);
            s.dfs(1);
            s.best
        };
        if parallel {
            let parts: Vec<Best<P>> = (0..inst.n()).into_par_iter().map(branch).collect();
            merge(parts)
        } else {
            merge((0..inst.n()).map(branch))
        }
    };
    let ((product, _), owners) = best.expect("at least one assignment");
    (product, owners)
}

fn search(
    inst: &Instance,
    preferred: Option<&[Option<usize>]>,
    cfg: &OracleConfig,
) -> Result<Optimum, OracleError> {
    check_budget(inst, cfg.budget)?;
    let max_value = inst.q() * inst.m() as u64;
    let (product, owners) = if fits_u128(max_value, inst.n()) {
        let (p, o) = run_search::<u128>(inst, preferred, cfg.parallel);
        (p.into_big(), o)
    } else {
        run_search::<BigUint>(inst, preferred, cfg.parallel)
    };
    let owners: Vec<Option<usize>> = owners.into_iter().map(Some).collect();
    let witness = Allocation::from_owners(inst.n(), &owners);
    let value = NswValue::from_product(inst.n(), product, inst.q());
    debug_assert_eq!(value, nsw_product(inst, &witness));
    Ok(Optimum { value, witness })
}

/// Maximum NSW over all complete allocations, with the lexicographically
/// first optimal owner vector as witness.
pub fn exact_optimum(inst: &Instance, cfg: &OracleConfig) -> Result<Optimum, OracleError> {
    search(inst, None, cfg)
}

/// Among all optimal allocations, one sharing the most goods with `o`
/// (same owner), lexicographically first on ties.
pub fn closest_optimum(
    inst: &Instance,
    o: &BigAllocation,
    cfg: &OracleConfig,
) -> Result<Allocation, OracleError> {
    let preferred = o.as_allocation().owners(inst.m());
    search(inst, Some(&preferred), cfg).map(|opt| opt.witness)
}

/// Number of goods placed with the same agent in both allocations.
pub fn overlap(a: &Allocation, b: &Allocation) -> usize {
    a.bundles()
        .iter()
        .zip(b.bundles())
        .map(|(x, y)| x.iter().filter(|g| y.binary_search(g).is_ok()).count())
        .sum()
}

pub const RATIO_CSV_HEADER: &str = "instance,n,m,p,q,alg_product,opt_product,ratio";

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub alg: NswValue,
    pub opt: NswValue,
    /// `(opt / alg)^(1/n)`; infinite if the algorithm leaves an agent at 0.
    pub ratio: f64,
}

impl RatioReport {
    pub fn csv_row(&self, name: &str, inst: &Instance) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6}",
            name,
            inst.n(),
            inst.m(),
            inst.p(),
            inst.q(),
            self.alg.product(),
            self.opt.product(),
            self.ratio
        )
    }
}

/// Compare [`two_value_approx`] against [`exact_optimum`].
pub fn ratio(inst: &Instance, cfg: &OracleConfig) -> Result<RatioReport, OracleError> {
    let alloc = two_value_approx(inst)?;
    let alg = nsw_product(inst, &alloc);
    let opt = exact_optimum(inst, cfg)?.value;
    let ratio = if alg.is_zero() {
        f64::INFINITY
    } else {
        ((ln_biguint(opt.product()) - ln_biguint(alg.product())) / inst.n() as f64).exp()
    };
    Ok(RatioReport { alg, opt, ratio })
}
