//! Finite boxes `{0,…,N−1}^d` of the square lattice.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{NodeId, Positions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Free,
    Torus,
}

impl std::str::FromStr for Boundary {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Boundary::Free),
            "torus" => Ok(Boundary::Torus),
            other => Err(invalid("boundary", format!("`{other}` is not free|torus"))),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Free => "free",
            Boundary::Torus => "torus",
        })
    }
}

/// Sites are enumerated row-major: the first coordinate varies slowest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeBox {
    d: usize,
    side: usize,
    boundary: Boundary,
}

impl LatticeBox {
    pub fn new(d: usize, side: usize, boundary: Boundary) -> Result<Self> {
        if d == 0 {
            return Err(invalid("d", "dimension must be at least 1"));
        }
        let min_side = match boundary {
            Boundary::Free => 2,
            // side 2 would make the two torus neighbours along an axis coincide
            Boundary::Torus => 3,
        };
        if side < min_side {
            return Err(invalid(
                "side",
                format!("must be at least {min_side} for {boundary} boundary"),
            ));
        }
        let sites = (side as u128).checked_pow(d as u32);
        if sites.is_none_or(|s| s > NodeId::MAX as u128) {
            return Err(invalid("side", "box has more than 2^32 - 1 sites"));
        }
        Ok(Self { d, side, boundary })
    }

    pub fn free(d: usize, side: usize) -> Result<Self> {
        Self::new(d, side, Boundary::Free)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn with_boundary(&self, boundary: Boundary) -> Result<Self> {
        Self::new(self.d, self.side, boundary)
    }

    pub fn num_sites(&self) -> usize {
        self.side.pow(self.d as u32)
    }

    pub fn coords_into(&self, idx: NodeId, out: &mut [i64]) {
        let mut rem = idx as usize;
        for k in (0..self.d).rev() {
            out[k] = (rem % self.side) as i64;
            rem /= self.side;
        }
    }

    pub fn coords(&self, idx: NodeId) -> Vec<i64> {
        let mut c = vec![0; self.d];
        self.coords_into(idx, &mut c);
        c
    }

    /// First coordinate of a site.
    pub fn first_coord(&self, idx: NodeId) -> usize {
        idx as usize / self.side.pow(self.d as u32 - 1)
    }

    /// Index of the site at `coords`, or `None` outside the box (coordinates
    /// are wrapped on the torus).
    pub fn index(&self, coords: &[i64]) -> Option<NodeId> {
        let n = self.side as i64;
        let mut idx = 0usize;
        for &c in coords {
            let c = match self.boundary {
                Boundary::Free if (0..n).contains(&c) => c,
                Boundary::Free => return None,
                Boundary::Torus => c.rem_euclid(n),
            };
            idx = idx * self.side + c as usize;
        }
        Some(idx as NodeId)
    }

    /// Per-axis displacement under the boundary convention (minimum image on
    /// the torus).
    pub fn axis_offset(&self, a: i64, b: i64) -> i64 {
        let diff = b - a;
        match self.boundary {
            Boundary::Free => diff,
            Boundary::Torus => {
                let n = self.side as i64;
                let m = diff.rem_euclid(n);
                if m > n / 2 {
                    m - n
                } else {
                    m
                }
            }
        }
    }

    /// Euclidean distance between two sites under the boundary convention.
    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        let (ca, cb) = (self.coords(a), self.coords(b));
        ca.iter()
            .zip(&cb)
            .map(|(&x, &y)| {
                let o = self.axis_offset(x, y) as f64;
                o * o
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn positions(&self) -> Positions {
        let mut coords = Vec::with_capacity(self.num_sites() * self.d);
        let mut c = vec![0i64; self.d];
        for idx in 0..self.num_sites() as NodeId {
            self.coords_into(idx, &mut c);
            coords.extend(c.iter().map(|&x| x as f64));
        }
        Positions::new(self.d, coords).expect("lattice positions are well-formed")
    }

    /// Number of nearest-neighbour pairs.
    pub fn num_nn_pairs(&self) -> usize {
        match self.boundary {
            Boundary::Free => self.d * self.side.pow(self.d as u32 - 1) * (self.side - 1),
            Boundary::Torus => self.d * self.num_sites(),
        }
    }

    /// Visits every nearest-neighbour pair once, in a fixed order: sites in
    /// index order, then axes in order, pairing each site with its successor
    /// along the axis.
    pub fn for_each_nn_pair(&self, mut f: impl FnMut(NodeId, NodeId)) {
        let n = self.side;
        let mut stride = vec![1usize; self.d];
        for k in (0..self.d.saturating_sub(1)).rev() {
            stride[k] = stride[k + 1] * n;
        }
        let mut c = vec![0i64; self.d];
        for x in 0..self.num_sites() {
            self.coords_into(x as NodeId, &mut c);
            for k in 0..self.d {
                let ck = c[k] as usize;
                let y = if ck + 1 < n {
                    x + stride[k]
                } else if self.boundary == Boundary::Torus {
                    x + stride[k] - n * stride[k]
                } else {
                    continue;
                };
                f(x as NodeId, y as NodeId);
            }
        }
    }
}
