//! Reusable Dijkstra scratch space and heap keys shared by the searches in
//! this crate.

use std::cmp::Ordering;

use crate::graph::NodeId;

/// Min-heap key ordered by `(primary, secondary, node)`.
///
/// Plain Dijkstra uses `primary = distance` and leaves `secondary` at zero;
/// the reverse-rank search orders by `(rank, distance)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MinKey {
    pub primary: f64,
    pub secondary: f64,
    pub node: NodeId,
}

impl MinKey {
    pub fn dist(dist: f64, node: NodeId) -> Self {
        Self {
            primary: dist,
            secondary: 0.0,
            node,
        }
    }
}

impl PartialEq for MinKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MinKey {}

impl PartialOrd for MinKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MinKey {
    // reversed so that `BinaryHeap` pops the smallest key
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .primary
            .total_cmp(&self.primary)
            .then_with(|| other.secondary.total_cmp(&self.secondary))
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Tentative distances plus a settled flag, reset in time proportional to
/// the number of nodes touched since the last reset.
#[derive(Debug, Clone)]
pub(crate) struct Workspace {
    dist: Vec<f64>,
    settled: Vec<bool>,
    touched: Vec<NodeId>,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Self {
            dist: vec![f64::INFINITY; n],
            settled: vec![false; n],
            touched: Vec::new(),
        }
    }

    pub fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v as usize] = f64::INFINITY;
            self.settled[v as usize] = false;
        }
        self.touched.clear();
    }

    #[inline]
    pub fn dist(&self, v: NodeId) -> f64 {
        self.dist[v as usize]
    }

    #[inline]
    pub fn is_settled(&self, v: NodeId) -> bool {
        self.settled[v as usize]
    }

    #[inline]
    pub fn settle(&mut self, v: NodeId) {
        self.settled[v as usize] = true;
    }

    /// Lowers the tentative distance of `v` to `d`; returns whether it improved.
    #[inline]
    pub fn improve(&mut self, v: NodeId, d: f64) -> bool {
        let slot = &mut self.dist[v as usize];
        if d < *slot {
            if slot.is_infinite() {
                self.touched.push(v);
            }
            *slot = d;
            true
        } else {
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BinaryHeap;

    #[test]
    fn heap_pops_smallest_first() {
        let mut h = BinaryHeap::new();
        h.push(MinKey::dist(3.0, 0));
        h.push(MinKey::dist(1.0, 5));
        h.push(MinKey::dist(1.0, 2));
        h.push(MinKey {
            primary: 1.0,
            secondary: -1.0,
            node: 9,
        });
        let order: Vec<_> = std::iter::from_fn(|| h.pop().map(|k| k.node)).collect();
        assert_eq!(order, vec![9, 2, 5, 0]);
    }

    #[test]
    fn reset_restores_touched_nodes() {
        let mut ws = Workspace::new(4);
        assert!(ws.improve(2, 1.5));
        assert!(!ws.improve(2, 2.0));
        ws.settle(2);
        ws.reset();
        assert!(ws.dist(2).is_infinite());
        assert!(!ws.is_settled(2));
    }
}
