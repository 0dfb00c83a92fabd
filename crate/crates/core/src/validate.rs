use crate::error::CoreError;
use crate::instance::{Allocation, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationReport {
    /// Every good is allocated.
    pub complete: bool,
    /// No good is in two bundles.
    pub disjoint: bool,
    /// Bundles cover exactly `B`, each good with an agent that values it big.
    pub nonwasteful: bool,
}

/// Check partition and non-wastefulness properties of `alloc`.
///
/// Fails on a bundle count mismatch or a good index `>= m`.
pub fn validate_allocation(
    inst: &Instance,
    alloc: &Allocation,
) -> Result<ValidationReport, CoreError> {
    if alloc.n() != inst.n() {
        return Err(CoreError::AgentCountMismatch {
            expected: inst.n(),
            got: alloc.n(),
        });
    }
    let m = inst.m();
    let mut seen = vec![0usize; m];
    let mut all_big_for_owner = true;
    for (agent, bundle) in alloc.bundles().iter().enumerate() {
        for &good in bundle {
            if good >= m {
                return Err(CoreError::GoodOutOfRange { agent, good, m });
            }
            seen[good] += 1;
            all_big_for_owner &= inst.is_big(agent, good);
        }
    }
    let disjoint = seen.iter().all(|&c| c <= 1);
    let complete = seen.iter().all(|&c| c >= 1);
    let big = inst.globally_big();
    let covers_b = (0..m).all(|g| (seen[g] > 0) == big[g]);
    Ok(ValidationReport {
        complete,
        disjoint,
        nonwasteful: disjoint && all_big_for_owner && covers_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_one() -> Instance {
        Instance::new(2, 5, 2, 3, vec![vec![0, 1], vec![0, 1]]).unwrap()
    }

    #[test]
    fn phase_one_output_is_nonwasteful_but_incomplete() {
        let alloc = Allocation::from_bundles(vec![vec![0], vec![1]]);
        let r = validate_allocation(&example_one(), &alloc).unwrap();
        assert_eq!(
            r,
            ValidationReport {
                complete: false,
                disjoint: true,
                nonwasteful: true
            }
        );
    }

    #[test]
    fn empty_instance() {
        let inst = Instance::new(1, 0, 1, 2, vec![vec![]]).unwrap();
        let r = validate_allocation(&inst, &Allocation::empty(1)).unwrap();
        assert!(r.complete && r.disjoint && r.nonwasteful);
    }

    #[test]
    fn duplicate_good() {
        let alloc = Allocation::from_bundles(vec![vec![0, 1], vec![1, 2, 3, 4]]);
        let r = validate_allocation(&example_one(), &alloc).unwrap();
        assert!(!r.disjoint);
        assert!(r.complete);
        assert!(!r.nonwasteful);
    }

    #[test]
    fn complete_allocation_with_small_goods_is_wasteful() {
        let alloc = Allocation::from_bundles(vec![vec![0, 2, 4], vec![1, 3]]);
        let r = validate_allocation(&example_one(), &alloc).unwrap();
        assert!(r.complete && r.disjoint && !r.nonwasteful);
    }

    #[test]
    fn out_of_range_is_reported() {
        let alloc = Allocation::from_bundles(vec![vec![0, 7], vec![]]);
        assert_eq!(
            validate_allocation(&example_one(), &alloc),
            Err(CoreError::GoodOutOfRange {
                agent: 0,
                good: 7,
                m: 5
            })
        );
    }
}
