use std::collections::{BTreeMap, HashSet, VecDeque};

use super::{Graph, NodeId};

/// Hop count between two nodes, or an explicit marker for different
/// components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Hops(u32),
    Unreachable,
}

impl Distance {
    pub fn hops(self) -> Option<u32> {
        match self {
            Distance::Hops(h) => Some(h),
            Distance::Unreachable => None,
        }
    }
}

/// Breadth-first distances from one source.
#[derive(Clone, Debug)]
pub struct BfsDistances {
    source: NodeId,
    hops: Vec<u32>,
    reached: usize,
}

const UNSEEN: u32 = u32::MAX;

impl BfsDistances {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn get(&self, x: NodeId) -> Distance {
        match self.hops[x as usize] {
            UNSEEN => Distance::Unreachable,
            h => Distance::Hops(h),
        }
    }

    /// Number of nodes reachable from the source, itself included.
    pub fn reached(&self) -> usize {
        self.reached
    }
}

impl Graph {
    pub fn bfs(&self, source: NodeId) -> BfsDistances {
        let mut hops = vec![UNSEEN; self.num_nodes()];
        let mut queue = VecDeque::new();
        hops[source as usize] = 0;
        queue.push_back(source);
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            let next = hops[x as usize] + 1;
            for &y in self.neighbors(x) {
                if hops[y as usize] == UNSEEN {
                    hops[y as usize] = next;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        BfsDistances {
            source,
            hops,
            reached,
        }
    }

    /// Shortest-path edge counts from `source` to each of `targets`. The
    /// search stops as soon as every target has been reached.
    pub fn graph_distance(&self, source: NodeId, targets: &[NodeId]) -> BTreeMap<NodeId, Distance> {
        targets
            .iter()
            .copied()
            .zip(self.distances_to(source, targets))
            .collect()
    }

    /// Like [`Graph::graph_distance`], in the order of `targets`.
    pub fn distances_to(&self, source: NodeId, targets: &[NodeId]) -> Vec<Distance> {
        let mut hops = vec![UNSEEN; self.num_nodes()];
        let mut pending: HashSet<NodeId> = targets.iter().copied().collect();
        let mut queue = VecDeque::new();
        hops[source as usize] = 0;
        pending.remove(&source);
        queue.push_back(source);
        while !pending.is_empty() {
            let Some(x) = queue.pop_front() else { break };
            let next = hops[x as usize] + 1;
            for &y in self.neighbors(x) {
                if hops[y as usize] == UNSEEN {
                    hops[y as usize] = next;
                    pending.remove(&y);
                    queue.push_back(y);
                }
            }
        }
        targets
            .iter()
            .map(|&t| match hops[t as usize] {
                UNSEEN => Distance::Unreachable,
                h => Distance::Hops(h),
            })
            .collect()
    }
}
