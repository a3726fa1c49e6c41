use super::{Graph, NodeId};
use crate::union_find::UnionFind;

/// Connected-component partition of a graph.
///
/// Component ids are assigned in order of each component's smallest node,
/// so node 0 always lies in component 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub labels: Vec<u32>,
    pub sizes: Vec<usize>,
    /// A maximum-size component, ties broken by smallest id; `None` for the
    /// empty graph.
    pub largest: Option<u32>,
}

impl ComponentLabeling {
    pub(crate) fn from_union_find(uf: &mut UnionFind) -> Self {
        let n = uf.len();
        let mut root_label = vec![u32::MAX; n];
        let mut labels = Vec::with_capacity(n);
        let mut sizes: Vec<usize> = Vec::new();
        for x in 0..n as u32 {
            let r = uf.find(x) as usize;
            if root_label[r] == u32::MAX {
                root_label[r] = sizes.len() as u32;
                sizes.push(0);
            }
            let l = root_label[r];
            sizes[l as usize] += 1;
            labels.push(l);
        }
        let mut largest = None;
        let mut best = 0usize;
        for (c, &s) in sizes.iter().enumerate() {
            if s > best {
                best = s;
                largest = Some(c as u32);
            }
        }
        Self {
            labels,
            sizes,
            largest,
        }
    }

    pub fn num_components(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest_size(&self) -> usize {
        self.largest.map_or(0, |c| self.sizes[c as usize])
    }

    pub fn label(&self, x: NodeId) -> u32 {
        self.labels[x as usize]
    }

    pub fn in_largest(&self, x: NodeId) -> bool {
        self.largest == Some(self.labels[x as usize])
    }

    pub fn members(&self, component: u32) -> Vec<NodeId> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == component)
            .map(|(i, _)| i as NodeId)
            .collect()
    }
}

impl Graph {
    pub fn components(&self) -> ComponentLabeling {
        let mut uf = UnionFind::new(self.num_nodes());
        self.for_each_edge(|u, v| {
            uf.union(u, v);
        });
        ComponentLabeling::from_union_find(&mut uf)
    }
}
