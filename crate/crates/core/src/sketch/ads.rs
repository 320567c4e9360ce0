use crate::graph::NodeId;

/// One sketch entry: a rankee, its `r`-value and its distance from the
/// sketch owner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdsEntry {
    pub node: NodeId,
    pub r: f64,
    pub dist: f64,
    /// Kept only to make the threshold state computable under distance
    /// ties; not a member of the sketch proper.
    pub auxiliary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneDecision {
    Prune,
    Insert,
}

/// The all-distances sketch of one node.
///
/// Entries are kept sorted by decreasing distance, ties by decreasing
/// `(r, id)`. Rankees are offered in increasing `(r, id)` order, so an
/// insertion only ever lands among the last `k + 1` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct AdsSketch {
    k: usize,
    entries: Vec<AdsEntry>,
}

impl AdsSketch {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "k must be at least 1");
        Self {
            k,
            entries: Vec::new(),
        }
    }

    /// Rebuilds a sketch from stored entries (decreasing distance order).
    pub(crate) fn from_entries(k: usize, entries: Vec<AdsEntry>) -> Self {
        Self { k, entries }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Entries by decreasing distance.
    pub fn entries(&self) -> &[AdsEntry] {
        &self.entries
    }

    /// Entries by increasing distance (ties by increasing `r`).
    pub fn entries_by_distance(&self) -> impl Iterator<Item = &AdsEntry> + '_ {
        self.entries.iter().rev()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of non-auxiliary entries.
    pub fn member_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.auxiliary).count()
    }

    /// `Δ`: the `k`-th smallest entry distance, `+∞` while there are fewer
    /// than `k` entries.
    #[inline]
    pub fn threshold(&self) -> f64 {
        let len = self.entries.len();
        if len < self.k {
            f64::INFINITY
        } else {
            self.entries[len - self.k].dist
        }
    }

    /// `*`: whether the `(k+1)`-th smallest entry distance equals `Δ`.
    #[inline]
    pub fn star(&self) -> bool {
        let len = self.entries.len();
        len > self.k && self.entries[len - self.k - 1].dist == self.entries[len - self.k].dist
    }

    /// Whether a rankee with larger `r` than every current entry, at
    /// distance `d`, enters the sketch.
    #[inline]
    pub fn prune_test(&self, d: f64) -> PruneDecision {
        let delta = self.threshold();
        if d > delta || (d == delta && self.star()) {
            PruneDecision::Prune
        } else {
            PruneDecision::Insert
        }
    }

    /// Applies the insertion rule; returns whether the entry was kept.
    ///
    /// `node` must follow every current entry in `(r, id)` order. An entry
    /// below `Δ` becomes a member; one exactly at `Δ` with `*` clear is the
    /// `(k+1)`-th smallest `r` of its ball and is kept as auxiliary.
    pub(crate) fn offer(&mut self, node: NodeId, r: f64, d: f64) -> bool {
        let delta = self.threshold();
        let auxiliary = if d < delta {
            false
        } else if d == delta && !self.star() {
            true
        } else {
            return false;
        };
        let mut pos = self.entries.len();
        while pos > 0 && self.entries[pos - 1].dist <= d {
            pos -= 1;
        }
        self.entries.insert(
            pos,
            AdsEntry {
                node,
                r,
                dist: d,
                auxiliary,
            },
        );
        true
    }
}
