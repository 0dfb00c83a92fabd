//! Exact verification of the valuation-type LP behind the 4/5 gap bound.
//!
//! Variables: `alpha`, the fraction of vertex goods allocated as small, and
//! `x[i][j]`, the fraction of agents holding `i` big and `j` small goods
//! (value `i + 4j/5`), for `i <= 4`, `j <= 6`. The constraints, with
//! `m = 3n` substituted, are checked in exact rational arithmetic; only the
//! log objective is evaluated in floating point.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ReductionError;
use crate::error::CoreError;
use crate::format::Lines;

pub const CERT_MAGIC: &str = "lpcert 1";
pub const MAX_BIG: usize = 4;
pub const MAX_SMALL: usize = 6;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A candidate LP point. Entries absent from `x` are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpCertificate {
    alpha: BigRational,
    x: BTreeMap<(usize, usize), BigRational>,
}

impl LpCertificate {
    pub fn new(
        alpha: BigRational,
        entries: impl IntoIterator<Item = ((usize, usize), BigRational)>,
    ) -> Result<Self, ReductionError> {
        let mut x = BTreeMap::new();
        for ((i, j), v) in entries {
            if i > MAX_BIG || j > MAX_SMALL {
                return Err(bad_cert(format!("type ({i},{j}) outside 0..=4 x 0..=6")));
            }
            if v.is_negative() {
                return Err(bad_cert(format!("x[{i}][{j}] is negative")));
            }
            if x.insert((i, j), v).is_some() {
                return Err(bad_cert(format!("type ({i},{j}) listed twice")));
            }
        }
        Ok(LpCertificate { alpha, x })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        self.x
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &BigRational)> {
        self.x.iter()
    }
}

fn bad_cert(msg: String) -> ReductionError {
    ReductionError::Core(CoreError::Parse { line: 0, msg })
}

/// The optimal vertex at `eps = 0`: `alpha = 0`, `x40 = 53/162`,
/// `x14 = x31 = 1/162`, `x05 = 107/162`.
pub fn gap4dm_optimal_vertex() -> LpCertificate {
    LpCertificate::new(
        BigRational::zero(),
        [
            ((4, 0), rat(53, 162)),
            ((1, 4), rat(1, 162)),
            ((3, 1), rat(1, 162)),
            ((0, 5), rat(107, 162)),
        ],
    )
    .expect("valid certificate")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `lhs = rhs`
    Eq,
    /// `lhs <= rhs`
    Le,
    /// `lhs >= rhs`
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub kind: ConstraintKind,
    pub lhs: BigRational,
    pub rhs: BigRational,
    /// Distance to the bound in the feasible direction; zero when tight.
    pub slack: BigRational,
}

impl ConstraintCheck {
    fn new(name: &'static str, kind: ConstraintKind, lhs: BigRational, rhs: BigRational) -> Self {
        let slack = match kind {
            ConstraintKind::Eq | ConstraintKind::Le => &rhs - &lhs,
            ConstraintKind::Ge => &lhs - &rhs,
        };
        ConstraintCheck {
            name,
            kind,
            lhs,
            rhs,
            slack,
        }
    }

    pub fn satisfied(&self) -> bool {
        match self.kind {
            ConstraintKind::Eq => self.slack.is_zero(),
            _ => !self.slack.is_negative(),
        }
    }

    pub fn tight(&self) -> bool {
        self.slack.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpReport {
    /// The four LP rows.
    pub constraints: Vec<ConstraintCheck>,
    /// `0 <= alpha <= 1`, kept apart from the rows.
    pub bounds: Vec<ConstraintCheck>,
    pub feasible: bool,
    /// `sum x_ij ln(i + 4j/5)`.
    pub objective: f64,
    /// Implied inapproximability factor `4 / exp(objective)`.
    pub factor: f64,
}

impl LpReport {
    /// Inequality rows holding with equality. Variable bounds are not counted.
    pub fn tight_inequalities(&self) -> usize {
        self.constraints
            .iter()
            .filter(|c| c.kind != ConstraintKind::Eq && c.tight())
            .count()
    }
}

pub fn verify_apx_lp(cert: &LpCertificate, eps: &BigRational) -> LpReport {
    let alpha = cert.alpha.clone();
    let third = rat(1, 3);
    let mut total = BigRational::zero();
    let mut four_big = BigRational::zero();
    let mut big_goods = BigRational::zero();
    let mut small_goods = BigRational::zero();
    let mut objective = 0.0;
    for (&(i, j), v) in &cert.x {
        total += v;
        if i == MAX_BIG {
            four_big += v;
        }
        big_goods += v * BigRational::from_integer(BigInt::from(i));
        small_goods += v * BigRational::from_integer(BigInt::from(j));
        if !v.is_zero() {
            let value = (5 * i + 4 * j) as f64 / 5.0;
            objective += v.to_f64().expect("finite rational") * value.ln();
        }
    }

    let one = BigRational::one();
    let constraints = vec![
        ConstraintCheck::new("types_sum_to_one", ConstraintKind::Eq, total, one.clone()),
        ConstraintCheck::new(
            "matching_cap",
            ConstraintKind::Le,
            four_big,
            &third * (rat(53, 54) + eps),
        ),
        ConstraintCheck::new(
            "big_goods",
            ConstraintKind::Le,
            big_goods,
            rat(4, 3) * (&one - &alpha),
        ),
        ConstraintCheck::new(
            "small_goods",
            ConstraintKind::Le,
            small_goods,
            &third * (rat(10, 1) + rat(5, 1) * eps) + rat(4, 3) * &alpha,
        ),
    ];
    let bounds = vec![
        ConstraintCheck::new(
            "alpha_lower",
            ConstraintKind::Ge,
            alpha.clone(),
            BigRational::zero(),
        ),
        ConstraintCheck::new("alpha_upper", ConstraintKind::Le, alpha, one),
    ];
    let feasible = constraints
        .iter()
        .chain(&bounds)
        .all(ConstraintCheck::satisfied);
    LpReport {
        constraints,
        bounds,
        feasible,
        objective,
        factor: 4.0 / objective.exp(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardnessConstants {
    /// Worst-case approximation factor of the local-search algorithm.
    pub approx_upper: f64,
    /// Inapproximability factor at values 4/5.
    pub apx_lower: f64,
}

pub fn hardness_constants() -> HardnessConstants {
    let approx_upper = 24.0 / 29.0 * (110.0f64 / 493.0).exp();
    let apx_lower = 4.0 / ((4.2f64 * 3.8).powf(1.0 / 162.0) * 4f64.powf(160.0 / 162.0));
    HardnessConstants {
        approx_upper,
        apx_lower,
    }
}

fn parse_rational(tok: &str, line: usize) -> Result<BigRational, ReductionError> {
    let bad = || {
        ReductionError::Core(CoreError::Parse {
            line,
            msg: format!("bad rational {tok:?}"),
        })
    };
    let (num, den) = match tok.split_once('/') {
        Some((a, b)) => (a, b),
        None => (tok, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Parse a rational written `num/den` or as an integer.
pub fn parse_rational_str(tok: &str) -> Result<BigRational, ReductionError> {
    parse_rational(tok, 0)
}

pub fn parse_certificate(text: &str) -> Result<LpCertificate, ReductionError> {
    let mut lines = Lines::new(text);
    lines.expect(CERT_MAGIC)?;
    let line = lines.next("alpha line")?;
    let alpha = match line.split_once(' ') {
        Some(("alpha", v)) => parse_rational(v, lines.line_no())?,
        _ => {
            return Err(ReductionError::Core(CoreError::Parse {
                line: lines.line_no(),
                msg: "expected \"alpha <num>/<den>\"".into(),
            }))
        }
    };
    let mut entries = Vec::new();
    while let Ok(line) = lines.next("entry") {
        if line.trim().is_empty() {
            continue;
        }
        let no = lines.line_no();
        let parts: Vec<&str> = line.split(' ').collect();
        let err = |msg: &str| {
            ReductionError::Core(CoreError::Parse {
                line: no,
                msg: msg.into(),
            })
        };
        if parts.len() != 3 {
            return Err(err("expected \"i j <num>/<den>\""));
        }
        let i: usize = parts[0].parse().map_err(|_| err("bad type index"))?;
        let j: usize = parts[1].parse().map_err(|_| err("bad type index"))?;
        entries.push(((i, j), parse_rational(parts[2], no)?));
    }
    LpCertificate::new(alpha, entries)
}

pub fn serialize_certificate(cert: &LpCertificate) -> String {
    let fmt = |r: &BigRational| format!("{}/{}", r.numer(), r.denom());
    let mut out = String::new();
    writeln!(out, "{CERT_MAGIC}").unwrap();
    writeln!(out, "alpha {}", fmt(&cert.alpha)).unwrap();
    for (&(i, j), v) in &cert.x {
        writeln!(out, "{i} {j} {}", fmt(v)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimal_vertex_is_feasible_and_tight() {
        let report = verify_apx_lp(&gap4dm_optimal_vertex(), &BigRational::zero());
        assert!(report.feasible);
        let by_name = |n: &str| report.constraints.iter().find(|c| c.name == n).unwrap();
        assert!(by_name("types_sum_to_one").tight());
        assert!(by_name("matching_cap").tight());
        assert!(by_name("big_goods").tight());
        assert!(by_name("small_goods").tight());
        assert!(report.bounds[0].tight());
        assert_eq!(report.tight_inequalities(), 3);

        let expected = (4.2f64.ln() + 3.8f64.ln() + 160.0 * 4f64.ln()) / 162.0;
        assert!((report.objective - expected).abs() < 1e-12);
        assert!((report.factor - (16.0f64 / 15.96).powf(1.0 / 162.0)).abs() < 1e-9);
    }

    #[test]
    fn all_zero_is_infeasible() {
        let cert = LpCertificate::new(BigRational::zero(), []).unwrap();
        let report = verify_apx_lp(&cert, &BigRational::zero());
        assert!(!report.feasible);
        assert!(!report.constraints[0].satisfied());
    }

    #[test]
    fn all_mass_on_four_big_is_infeasible() {
        let cert = LpCertificate::new(BigRational::zero(), [((4, 0), rat(1, 1))]).unwrap();
        let report = verify_apx_lp(&cert, &BigRational::zero());
        assert!(!report.feasible);
        let cap = &report.constraints[1];
        assert_eq!(cap.lhs, rat(1, 1));
        assert_eq!(cap.rhs, rat(53, 162));
        assert!(!cap.satisfied());
        let big = &report.constraints[2];
        assert_eq!(big.lhs, rat(4, 1));
        assert_eq!(big.rhs, rat(4, 3));
        assert!(!big.satisfied());
    }

    #[test]
    fn constants() {
        let c = hardness_constants();
        assert!(c.approx_upper > 1.0344 && c.approx_upper < 1.0345);
        assert!(c.apx_lower > 1.0000154 && c.apx_lower < 1.0000155);
        assert!((c.apx_lower - (16.0f64 / 15.96).powf(1.0 / 162.0)).abs() < 1e-12);
    }

    #[test]
    fn certificate_round_trip() {
        let cert = gap4dm_optimal_vertex();
        let text = serialize_certificate(&cert);
        assert!(text.starts_with("lpcert 1\nalpha 0/1\n"));
        assert_eq!(parse_certificate(&text).unwrap(), cert);
    }

    #[test]
    fn certificate_rejects_bad_entries() {
        assert!(parse_certificate("lpcert 1\nalpha 0\n5 0 1/2\n").is_err());
        assert!(parse_certificate("lpcert 1\nalpha 0\n1 1 -1/2\n").is_err());
        assert!(parse_certificate("lpcert 1\nalpha 0\n1 1 1/0\n").is_err());
        assert!(parse_certificate("lpcert 1\nalpha 0\n1 1 1/2\n1 1 1/3\n").is_err());
        assert!(parse_certificate("lpcert 1\nbeta 0\n").is_err());
    }
}
