//! Semi-clusters of lattice boxes and multi-stage box goodness.
//!
//! Boxes are axis-aligned `[o, o + side)^d` in lattice coordinates. A box's
//! `K`-enlargement is padded by `K` sites per side and clipped to the
//! lattice; wrap-around is never used.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};
use crate::lattice::LatticeBox;
use crate::union_find::UnionFind;

/// A set of box sites that are connected inside the box's enlargement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiCluster {
    /// Lattice coordinates of the box's lowest corner.
    pub anchor: Vec<usize>,
    /// Sorted site ids, all inside the box.
    pub members: Vec<NodeId>,
}

/// Half-open coordinate box clipped to the lattice.
#[derive(Clone, Debug)]
struct Region {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Region {
    fn padded(lattice: &LatticeBox, origin: &[usize], side: usize, pad: usize) -> Self {
        let n = lattice.side() as i64;
        let lo = origin
            .iter()
            .map(|&o| (o as i64 - pad as i64).max(0))
            .collect();
        let hi = origin
            .iter()
            .map(|&o| (o as i64 + (side + pad) as i64).min(n))
            .collect();
        Self { lo, hi }
    }

    fn len(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a) as usize)
            .product()
    }

    /// Position of `coords` in row-major order, if inside.
    fn local(&self, coords: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for ((&c, &a), &b) in coords.iter().zip(&self.lo).zip(&self.hi) {
            if c < a || c >= b {
                return None;
            }
            idx = idx * (b - a) as usize + (c - a) as usize;
        }
        Some(idx)
    }

    fn sites(&self, lattice: &LatticeBox) -> Vec<NodeId> {
        let d = self.lo.len();
        let mut out = Vec::with_capacity(self.len());
        let mut c = self.lo.clone();
        if self.len() == 0 {
            return out;
        }
        loop {
            out.push(lattice.index(&c).expect("region inside lattice"));
            let mut k = d;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                c[k] += 1;
                if c[k] < self.hi[k] {
                    break;
                }
                c[k] = self.lo[k];
            }
        }
    }
}

/// Connected components of the subgraph induced on a region.
struct RegionComponents {
    region: Region,
    uf: UnionFind,
}

impl RegionComponents {
    fn new(g: &Graph, lattice: &LatticeBox, region: Region) -> Self {
        let mut uf = UnionFind::new(region.len());
        let mut cy = vec![0i64; lattice.d()];
        let mut cx = vec![0i64; lattice.d()];
        for x in region.sites(lattice) {
            lattice.coords_into(x, &mut cx);
            let lx = region.local(&cx).expect("site in region");
            for &y in g.neighbors(x) {
                lattice.coords_into(y, &mut cy);
                if let Some(ly) = region.local(&cy) {
                    uf.union(lx as u32, ly as u32);
                }
            }
        }
        Self { region, uf }
    }

    fn root(&mut self, lattice: &LatticeBox, x: NodeId) -> Option<u32> {
        let local = self.region.local(&lattice.coords(x))?;
        Some(self.uf.find(local as u32))
    }
}

fn check_box(lattice: &LatticeBox, origin: &[usize], side: usize) -> Result<()> {
    if origin.len() != lattice.d() {
        return Err(invalid(
            "origin",
            format!(
                "has {} coordinates, lattice has d = {}",
                origin.len(),
                lattice.d()
            ),
        ));
    }
    if side == 0 || origin.iter().any(|&o| o + side > lattice.side()) {
        return Err(invalid(
            "origin",
            format!("box {origin:?} of side {side} leaves the lattice"),
        ));
    }
    Ok(())
}

/// Semi-clusters of at least `ell` sites of the box of side `m` at `origin`:
/// components of the subgraph induced on the `k`-enlargement, intersected
/// with the box. Ordered by smallest member.
pub fn find_semi_clusters(
    g: &Graph,
    lattice: &LatticeBox,
    origin: &[usize],
    m: usize,
    k: usize,
    ell: usize,
) -> Result<Vec<SemiCluster>> {
    check_box(lattice, origin, m)?;
    if ell == 0 {
        return Err(invalid("ell", "must be at least 1"));
    }
    if g.num_nodes() != lattice.num_sites() {
        return Err(invalid("graph", "node count differs from the lattice"));
    }
    let mut comps = RegionComponents::new(g, lattice, Region::padded(lattice, origin, m, k));
    Ok(semi_clusters_in(&mut comps, lattice, origin, m, ell))
}

fn semi_clusters_in(
    comps: &mut RegionComponents,
    lattice: &LatticeBox,
    origin: &[usize],
    m: usize,
    ell: usize,
) -> Vec<SemiCluster> {
    let mut by_root: std::collections::BTreeMap<u32, Vec<NodeId>> = Default::default();
    for x in Region::padded(lattice, origin, m, 0).sites(lattice) {
        let r = comps.root(lattice, x).expect("box inside its enlargement");
        by_root.entry(r).or_default().push(x);
    }
    let mut out: Vec<SemiCluster> = by_root
        .into_values()
        .filter(|v| v.len() >= ell)
        .map(|mut members| {
            members.sort_unstable();
            SemiCluster {
                anchor: origin.to_vec(),
                members,
            }
        })
        .collect();
    out.sort_by_key(|s| s.members[0]);
    out
}

/// Scales of the renormalisation scheme.
///
/// Stage-0 boxes have side `m`. A stage-`n` box (`n ≥ 1`) consists of
/// `a_n^d` stage-`(n−1)` boxes with `a_n = ⌊(n+1)^δ⌋`. The density
/// requirement is `κ_0 = kappa0` at stage 0 and `κ_n = (n+1)^{−θ}` beyond;
/// `u_n = κ_0 ⋯ κ_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenormSchedule {
    pub m: usize,
    pub k: usize,
    pub delta: f64,
    pub theta_renorm: f64,
    pub kappa0: f64,
    pub n_max: usize,
}

impl RenormSchedule {
    pub fn new(
        m: usize,
        k: usize,
        delta: f64,
        theta_renorm: f64,
        kappa0: f64,
        n_max: usize,
    ) -> Result<Self> {
        let s = Self {
            m,
            k,
            delta,
            theta_renorm,
            kappa0,
            n_max,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(invalid("M", "must be at least 1"));
        }
        if !(self.theta_renorm > 1.0) {
            return Err(invalid(
                "theta_renorm",
                format!("{} must exceed 1", self.theta_renorm),
            ));
        }
        if !(self.delta > self.theta_renorm) {
            return Err(invalid(
                "delta",
                format!(
                    "{} must exceed theta_renorm = {}",
                    self.delta, self.theta_renorm
                ),
            ));
        }
        if !(self.kappa0 > 0.0 && self.kappa0 <= 1.0) {
            return Err(invalid(
                "kappa0",
                format!("{} is outside (0, 1]", self.kappa0),
            ));
        }
        Ok(())
    }

    pub fn kappa(&self, n: usize) -> f64 {
        if n == 0 {
            self.kappa0
        } else {
            ((n + 1) as f64).powf(-self.theta_renorm)
        }
    }

    /// Sub-boxes per axis of a stage-`n` box, `n ≥ 1`.
    pub fn a(&self, n: usize) -> usize {
        ((n + 1) as f64).powf(self.delta).floor() as usize
    }

    /// Side `M_n` of a stage-`n` box.
    pub fn side(&self, n: usize) -> usize {
        (1..=n).fold(self.m, |s, i| s * self.a(i))
    }

    pub fn u(&self, n: usize) -> f64 {
        (0..=n).map(|i| self.kappa(i)).product()
    }

    /// Semi-cluster size `M_n^d u_n` that stage-`n` goodness refers to.
    pub fn threshold(&self, n: usize, d: usize) -> f64 {
        (self.side(n) as f64).powi(d as i32) * self.u(n)
    }
}

/// Why a box is good or bad.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenormCertificate {
    pub stage: usize,
    pub origin: Vec<usize>,
    pub good: bool,
    pub detail: CertificateDetail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum CertificateDetail {
    Base {
        threshold: f64,
        /// Sizes of the semi-clusters reaching the threshold.
        large: Vec<usize>,
    },
    Stage {
        /// Good sub-boxes needed, `κ_n a_n^d`.
        required: f64,
        children: Vec<RenormCertificate>,
        /// Whether all large semi-clusters of good sub-boxes share one
        /// component inside the enlargement.
        connected: bool,
    },
}

impl RenormCertificate {
    /// Origins of the good sub-boxes.
    pub fn good_children(&self) -> Vec<&[usize]> {
        match &self.detail {
            CertificateDetail::Base { .. } => Vec::new(),
            CertificateDetail::Stage { children, .. } => children
                .iter()
                .filter(|c| c.good)
                .map(|c| c.origin.as_slice())
                .collect(),
        }
    }
}

/// Goodness of the stage-`stage` box with multi-index `v`, i.e. the box of
/// side `M_n` at lattice origin `v · M_n`.
///
/// Stage 0: good iff exactly one semi-cluster of at least `κ_0 M^d` sites
/// exists. Distinct semi-clusters are never connected inside the
/// enlargement, so this is a literal count. Stage `n`: good iff at least
/// `κ_n a_n^d` sub-boxes are good and all `M_{n−1}^d u_{n−1}`-semi-clusters
/// of the good sub-boxes lie in one component of the subgraph induced on
/// the box's enlargement.
pub fn renorm_goodness(
    g: &Graph,
    lattice: &LatticeBox,
    schedule: &RenormSchedule,
    stage: usize,
    v: &[usize],
) -> Result<RenormCertificate> {
    schedule.validate()?;
    if stage > schedule.n_max {
        return Err(invalid(
            "stage",
            format!("{stage} exceeds n_max = {}", schedule.n_max),
        ));
    }
    if g.num_nodes() != lattice.num_sites() {
        return Err(invalid("graph", "node count differs from the lattice"));
    }
    let side = schedule.side(stage);
    let origin: Vec<usize> = v.iter().map(|&i| i * side).collect();
    check_box(lattice, &origin, side)?;
    Ok(goodness(g, lattice, schedule, stage, origin))
}

fn min_size(threshold: f64) -> usize {
    (threshold.ceil() as usize).max(1)
}

fn goodness(
    g: &Graph,
    lattice: &LatticeBox,
    schedule: &RenormSchedule,
    stage: usize,
    origin: Vec<usize>,
) -> RenormCertificate {
    let d = lattice.d();
    let side = schedule.side(stage);
    let k = schedule.k;
    if stage == 0 {
        let threshold = schedule.threshold(0, d);
        let mut comps =
            RegionComponents::new(g, lattice, Region::padded(lattice, &origin, side, k));
        let large: Vec<usize> =
            semi_clusters_in(&mut comps, lattice, &origin, side, min_size(threshold))
                .iter()
                .map(|s| s.members.len())
                .collect();
        let good = large.len() == 1;
        return RenormCertificate {
            stage,
            origin,
            good,
            detail: CertificateDetail::Base { threshold, large },
        };
    }
    let a = schedule.a(stage);
    let sub = schedule.side(stage - 1);
    let required = schedule.kappa(stage) * (a as f64).powi(d as i32);
    let mut children = Vec::new();
    let mut offset = vec![0usize; d];
    loop {
        let child: Vec<usize> = origin
            .iter()
            .zip(&offset)
            .map(|(o, j)| o + j * sub)
            .collect();
        children.push(goodness(g, lattice, schedule, stage - 1, child));
        let mut axis = d;
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            offset[axis] += 1;
            if offset[axis] < a {
                break;
            }
            offset[axis] = 0;
        }
        if offset.iter().all(|&j| j == 0) {
            break;
        }
    }
    let good_count = children.iter().filter(|c| c.good).count();
    let ell = min_size(schedule.threshold(stage - 1, d));
    let mut comps = RegionComponents::new(g, lattice, Region::padded(lattice, &origin, side, k));
    let mut root = None;
    let mut connected = true;
    'outer: for c in children.iter().filter(|c| c.good) {
        let mut own = RegionComponents::new(g, lattice, Region::padded(lattice, &c.origin, sub, k));
        for sc in semi_clusters_in(&mut own, lattice, &c.origin, sub, ell) {
            let r = comps
                .root(lattice, sc.members[0])
                .expect("sub-box inside the box");
            if *root.get_or_insert(r) != r {
                connected = false;
                break 'outer;
            }
        }
    }
    let good = good_count as f64 >= required && connected;
    RenormCertificate {
        stage,
        origin,
        good,
        detail: CertificateDetail::Stage {
            required,
            children,
            connected,
        },
    }
}

/// Half the largest-component density of `g`, the default for `κ_0`.
pub fn default_kappa0(g: &Graph) -> f64 {
    if g.num_nodes() == 0 {
        return 0.5;
    }
    0.5 * g.components().largest_size() as f64 / g.num_nodes() as f64
}
