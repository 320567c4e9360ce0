use crate::error::{invalid, Result};

/// Partition of the `r`-sorted rankee sequence into batches whose searches
/// run against a common threshold snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSchedule {
    pub mu: f64,
    /// Exclusive end position of each batch; the last equals `|U|`.
    pub boundaries: Vec<usize>,
}

impl BatchSchedule {
    pub fn batch_count(&self) -> usize {
        self.boundaries.len()
    }

    /// Half-open position ranges of the batches.
    pub fn ranges(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        let starts = std::iter::once(0).chain(self.boundaries.iter().copied());
        starts.zip(self.boundaries.iter().copied()).map(|(a, b)| a..b)
    }
}

/// Batch `j` (1-based) ends at position `ceil((1+mu)^(j-1) * k)`, capped at
/// `|U|`, and at least one past the previous boundary.
pub fn batch_boundaries(u_count: usize, k: usize, mu: f64) -> Result<BatchSchedule> {
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(invalid("mu must be positive"));
    }
    let mut boundaries = Vec::new();
    if u_count == 0 {
        return Ok(BatchSchedule { mu, boundaries });
    }
    let mut prev = 0usize;
    let mut j = 0i32;
    while prev < u_count {
        let raw = (1.0 + mu).powi(j) * k as f64;
        // guard exact products such as 1.5^2 * 16 = 36 against round-up
        let end = (raw * (1.0 - 1e-12)).ceil();
        let end = if end >= u_count as f64 {
            u_count
        } else {
            (end as usize).max(prev + 1)
        };
        boundaries.push(end);
        prev = end;
        j += 1;
    }
    Ok(BatchSchedule { mu, boundaries })
}
