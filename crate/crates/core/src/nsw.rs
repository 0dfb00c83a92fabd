//! Exact Nash social welfare values.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::instance::{Allocation, Instance, ValuationProfile};

/// Product of agent values, compared exactly.
///
/// For a fixed agent count the geometric mean is a monotone function of
/// the product, so ordering by product is ordering by NSW. The float view
/// is for display only.
#[derive(Debug, Clone)]
pub struct NswValue {
    n: usize,
    product: BigUint,
    float_scaled: f64,
}

impl NswValue {
    /// `big_value` is the canonical `q`; the float view divides by it so a
    /// big good counts as 1.
    pub fn from_product(n: usize, product: BigUint, big_value: u64) -> Self {
        let float_scaled = if product.is_zero() {
            0.0
        } else {
            (ln_biguint(&product) / n as f64 - (big_value as f64).ln()).exp()
        };
        NswValue {
            n,
            product,
            float_scaled,
        }
    }

    pub fn from_values(values: &[u64], big_value: u64) -> Self {
        let product = values
            .iter()
            .fold(BigUint::from(1u32), |acc, &v| acc * BigUint::from(v));
        Self::from_product(values.len(), product, big_value)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn product(&self) -> &BigUint {
        &self.product
    }

    /// Geometric mean of values, in units where a big good is worth 1.
    pub fn float_scaled(&self) -> f64 {
        self.float_scaled
    }

    pub fn is_zero(&self) -> bool {
        self.product.is_zero()
    }
}

impl PartialEq for NswValue {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.product == other.product
    }
}

impl Eq for NswValue {}

impl PartialOrd for NswValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NswValue {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.n, other.n, "comparing NSW across agent counts");
        self.product.cmp(&other.product)
    }
}

impl fmt::Display for NswValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "product={} nsw_scaled={:.6}",
            self.product, self.float_scaled
        )
    }
}

pub fn nsw_product(inst: &Instance, alloc: &Allocation) -> NswValue {
    let profile = ValuationProfile::of(inst, alloc);
    NswValue::from_values(&profile.values, inst.q())
}

/// Natural log of a positive big integer, accurate to double precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("at most 64 bits after shift");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}
