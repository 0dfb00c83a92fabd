//! Nash social welfare allocation for 2-value additive instances.
//!
//! Every agent values each good at either a small value `p` or a big value
//! `q`. The crate provides:
//!
//! * the instance/allocation model with exact NSW products ([`instance`],
//!   [`nsw`], [`validate`], [`format`]),
//! * the optimal big-good allocation for the zero-small-value relaxation
//!   ([`dichotomous`]),
//! * greedy completion plus local search, exact for `p = 1` and within
//!   1.0345 otherwise ([`balance`]),
//! * a brute-force oracle, transformation-graph diagnostics and a ratio
//!   harness ([`oracle`]),
//! * hardness-reduction instance builders and an LP certificate checker
//!   ([`reductions`]).

pub mod balance;
pub mod dichotomous;
pub mod error;
pub mod format;
pub mod generate;
pub mod instance;
pub mod nsw;
pub mod oracle;
pub mod reductions;
pub mod validate;

pub use balance::{two_value_approx, BalanceError};
pub use dichotomous::{solve_dichotomous, BigAllocation};
pub use error::CoreError;
pub use format::{parse_allocation, parse_instance, serialize_allocation, serialize_instance};
pub use instance::{canonicalize, Allocation, Instance, SizeClass, ValuationProfile};
pub use nsw::{nsw_product, NswValue};
pub use oracle::{exact_optimum, OracleConfig, OracleError};
pub use validate::{validate_allocation, ValidationReport};
