use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::rank::RankMode;

/// Rank decay function `α`: nonincreasing and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub enum Alpha {
    /// 1 up to rank `T`, 0 above.
    Threshold(f64),
    /// `1/x`.
    Reciprocal,
    /// Step function: the value of the last breakpoint at or below `x`, the
    /// first value below the first breakpoint.
    Table(Vec<(f64, f64)>),
}

impl Alpha {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Alpha::Threshold(t) => {
                if x <= *t {
                    1.0
                } else {
                    0.0
                }
            }
            Alpha::Reciprocal => 1.0 / x.max(1.0),
            Alpha::Table(points) => {
                let idx = points.partition_point(|&(b, _)| b <= x);
                points[idx.saturating_sub(1)].1
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Alpha::Threshold(t) if !(*t >= 1.0) => Err(invalid("threshold T must be at least 1")),
            Alpha::Table(points) => {
                if points.is_empty() {
                    return Err(invalid("alpha table is empty"));
                }
                for &(x, v) in points {
                    if !x.is_finite() || !v.is_finite() || v < 0.0 {
                        return Err(invalid("alpha table entries must be finite with nonnegative values"));
                    }
                }
                for w in points.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(invalid("alpha table breakpoints must be strictly increasing"));
                    }
                    if w[1].1 > w[0].1 {
                        return Err(invalid("alpha must be nonincreasing"));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Ranker weight function `β`.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Beta {
    #[default]
    Uniform,
    /// One nonnegative weight per node.
    Weights(Vec<f64>),
}

impl Beta {
    pub fn weight(&self, z: NodeId) -> f64 {
        match self {
            Beta::Uniform => 1.0,
            Beta::Weights(w) => w[z as usize],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceSpec {
    pub alpha: Alpha,
    pub beta: Beta,
    pub rank_mode: RankMode,
}

impl InfluenceSpec {
    /// Threshold `α` at `T`, uniform `β`, upper ranks.
    pub fn threshold(t: f64) -> Self {
        Self {
            alpha: Alpha::Threshold(t),
            beta: Beta::Uniform,
            rank_mode: RankMode::Upper,
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.alpha.validate()?;
        if let Beta::Weights(w) = &self.beta {
            if w.len() != g.node_count() {
                return Err(invalid(format!("{} ranker weights for {} nodes", w.len(), g.node_count())));
            }
            if w.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                return Err(invalid("ranker weights must be finite and nonnegative"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_shapes() {
        assert_eq!(Alpha::Threshold(2.0).eval(2.0), 1.0);
        assert_eq!(Alpha::Threshold(2.0).eval(3.0), 0.0);
        assert_eq!(Alpha::Reciprocal.eval(4.0), 0.25);
        let t = Alpha::Table(vec![(1.0, 1.0), (3.0, 0.5), (10.0, 0.0)]);
        assert_eq!(t.eval(0.5), 1.0);
        assert_eq!(t.eval(2.9), 1.0);
        assert_eq!(t.eval(3.0), 0.5);
        assert_eq!(t.eval(50.0), 0.0);
    }

    #[test]
    fn increasing_table_rejected() {
        assert!(Alpha::Table(vec![(1.0, 0.5), (2.0, 1.0)]).validate().is_err());
        assert!(Alpha::Table(vec![(2.0, 1.0), (1.0, 0.5)]).validate().is_err());
        assert!(Alpha::Table(vec![(1.0, -1.0)]).validate().is_err());
        assert!(Alpha::Threshold(0.5).validate().is_err());
    }
}
