use bsde_engine::{rate_driver_expectation, At, Driver, DriverFlags, Instant, RateEstimate, SolutionSample};

use crate::error::invalid;
use crate::{Result, ToolkitError};

/// Level in the extended reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AcceptanceLevel {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl AcceptanceLevel {
    fn scaled(self, alpha: f64) -> AcceptanceLevel {
        match self {
            AcceptanceLevel::Finite(a) => AcceptanceLevel::Finite(alpha * a),
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceQuery {
    pub level: AcceptanceLevel,
    pub instant: Instant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    Clear,
    /// The rate lies within 2 standard errors of the level.
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub accepted: bool,
    pub confidence: Confidence,
}

/// Membership of the claim behind `rate` in the set with rate at most `a`.
pub fn is_acceptable(rate: &RateEstimate, query: &AcceptanceQuery) -> Result<Membership> {
    if !rate.value.is_finite() {
        return Err(ToolkitError::UndefinedRate(format!("value {}", rate.value)));
    }
    let same_instant = match (rate.instant, query.instant) {
        (Instant::Time(a), Instant::Time(b)) => (a - b).abs() <= 1e-12 * (1.0 + b.abs()),
        (Instant::Stopping, Instant::Stopping) => true,
        _ => false,
    };
    if !same_instant {
        return Err(invalid("query", "rate was not computed at the queried instant"));
    }
    Ok(match query.level {
        AcceptanceLevel::PosInfinity => Membership { accepted: true, confidence: Confidence::Clear },
        AcceptanceLevel::NegInfinity => Membership { accepted: false, confidence: Confidence::Clear },
        AcceptanceLevel::Finite(a) => Membership {
            accepted: rate.value <= a,
            confidence: if (rate.value - a).abs() <= 2.0 * rate.std_error {
                Confidence::Marginal
            } else {
                Confidence::Clear
            },
        },
    })
}

/// Smallest level whose acceptance set contains the claim.
pub fn min_acceptance_level(rate: &RateEstimate) -> f64 {
    rate.value
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyRow {
    pub level: AcceptanceLevel,
    pub base: Membership,
    /// Membership of `X + h` at the same level.
    pub shifted: Membership,
    /// Membership of `αX` at level `α·a`; `None` unless the driver is positively homogeneous.
    pub scaled: Option<Membership>,
}

impl FamilyRow {
    pub fn cash_insensitive(&self) -> bool {
        self.base.accepted == self.shifted.accepted
    }

    pub fn homogeneous(&self) -> Option<bool> {
        self.scaled.map(|m| m.accepted == self.base.accepted)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub rows: Vec<FamilyRow>,
}

impl FamilyReport {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.cash_insensitive() && r.homogeneous().unwrap_or(true))
    }
}

/// Checks cash-insensitivity (`X` vs `X + h`) and positive homogeneity
/// (`X` at `a` vs `αX` at `αa`) of the acceptance family on the levels
/// `{−∞, −unit, 0, unit, +∞}`, using common random numbers.
pub fn acceptance_family_properties(
    driver: &dyn Driver,
    sol: &SolutionSample,
    at: At<'_>,
    shift: f64,
    alpha: f64,
    unit: f64,
) -> Result<FamilyReport> {
    if !(alpha > 0.0) || !(unit > 0.0) {
        return Err(invalid("family", "alpha and unit must be > 0"));
    }
    let flags = driver.flags();
    if !flags.contains(DriverFlags::Y_INDEPENDENT) {
        return Err(invalid("driver", "cash shifts need a y-independent driver"));
    }
    let base = rate_driver_expectation(driver, sol, at)?;
    let shifted = rate_driver_expectation(driver, &sol.shifted(shift), at)?;
    let scaled = if flags.contains(DriverFlags::POSITIVELY_HOMOGENEOUS) {
        Some(rate_driver_expectation(driver, &sol.scaled(alpha), at)?)
    } else {
        None
    };
    let levels = [
        AcceptanceLevel::NegInfinity,
        AcceptanceLevel::Finite(-unit),
        AcceptanceLevel::Finite(0.0),
        AcceptanceLevel::Finite(unit),
        AcceptanceLevel::PosInfinity,
    ];
    let rows = levels
        .iter()
        .map(|&level| {
            let q = AcceptanceQuery { level, instant: base.instant };
            let qs = AcceptanceQuery { level: level.scaled(alpha), instant: base.instant };
            Ok(FamilyRow {
                level,
                base: is_acceptable(&base, &q)?,
                shifted: is_acceptable(&shifted, &q)?,
                scaled: scaled.as_ref().map(|r| is_acceptable(r, &qs)).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyReport { rows })
}
