//! Rank ranges under distance ties and the ways of collapsing them to a
//! single value.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error};

/// How a rank range `(lower, upper]` is collapsed into one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankMode {
    /// The closed-neighborhood count, ties broken upwards.
    #[default]
    Upper,
    /// The strict-neighborhood count plus one, ties broken downwards.
    LowerPlusOne,
    /// Midpoint of the range.
    Midpoint,
}

impl RankMode {
    pub fn resolve(self, lower: f64, upper: f64) -> f64 {
        match self {
            RankMode::Upper => upper,
            RankMode::LowerPlusOne => lower + 1.0,
            RankMode::Midpoint => (lower + 1.0 + upper) / 2.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RankMode::Upper => "upper",
            RankMode::LowerPlusOne => "lower_plus_one",
            RankMode::Midpoint => "midpoint",
        }
    }
}

impl fmt::Display for RankMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "upper" => Ok(RankMode::Upper),
            "lower_plus_one" | "lower+1" => Ok(RankMode::LowerPlusOne),
            "midpoint" => Ok(RankMode::Midpoint),
            other => Err(invalid(format!("unknown rank mode `{other}`"))),
        }
    }
}

/// A (possibly estimated) rank range `(lower, upper]`.
///
/// `lower` counts rankees strictly closer than the rankee, `upper` counts
/// rankees at most as far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankEstimate {
    pub lower: f64,
    pub upper: f64,
}

impl RankEstimate {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub fn value(&self, mode: RankMode) -> f64 {
        mode.resolve(self.lower, self.upper)
    }

    pub fn midpoint(&self) -> f64 {
        RankMode::Midpoint.resolve(self.lower, self.upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_modes() {
        let r = RankEstimate::new(2.0, 5.0);
        assert_eq!(r.value(RankMode::Upper), 5.0);
        assert_eq!(r.value(RankMode::LowerPlusOne), 3.0);
        assert_eq!(r.midpoint(), 4.0);
    }

    #[test]
    fn parse_modes() {
        for m in [RankMode::Upper, RankMode::LowerPlusOne, RankMode::Midpoint] {
            assert_eq!(m.as_str().parse::<RankMode>().unwrap(), m);
        }
        assert!("bogus".parse::<RankMode>().is_err());
    }
}
