use super::Graph;

impl Graph {
    /// Global transitivity `3 * triangles / connected triples` of the simple
    /// graph underlying `self` (self-loops and parallel edges ignored).
    /// Zero when there are no connected triples.
    pub fn clustering_coefficient(&self) -> f64 {
        let (g, _) = self.simplify();
        let n = g.num_nodes();
        let mut mark = vec![u32::MAX; n];
        let mut triangles = 0u64;
        let mut triples = 0u64;
        for u in 0..n as u32 {
            let du = g.degree(u) as u64;
            triples += du * du.saturating_sub(1) / 2;
            for &v in g.neighbors(u) {
                mark[v as usize] = u;
            }
            for &v in g.neighbors(u) {
                if v <= u {
                    continue;
                }
                for &w in g.neighbors(v) {
                    if w > v && mark[w as usize] == u {
                        triangles += 1;
                    }
                }
            }
        }
        if triples == 0 {
            0.0
        } else {
            3.0 * triangles as f64 / triples as f64
        }
    }
}
