use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{Distance, Graph, NodeId};
use crate::lattice::LatticeBox;
use crate::model::ModelSpec;
use crate::rng::{purpose, RngStream};
use crate::stats::quantile_sorted;

/// Relative width of the radius bands `[r, (1 + BAND) r]`.
pub const BAND: f64 = 0.05;

/// Distances between the nodes of a sampled graph.
#[derive(Clone, Copy, Debug)]
pub enum Metric<'a> {
    Lattice(&'a LatticeBox),
    /// Free-space Euclidean distance between the graph's positions.
    Positions,
}

impl Metric<'_> {
    fn distance(&self, g: &Graph, a: NodeId, b: NodeId) -> f64 {
        match self {
            Metric::Lattice(l) => l.distance(a, b),
            Metric::Positions => g
                .positions()
                .expect("graph without positions")
                .euclidean(a as usize, b as usize),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusRow {
    pub radius: f64,
    /// Number of pairs found in the band, at most the requested count.
    pub pairs: usize,
    pub median: Option<f64>,
    pub q1: Option<f64>,
    pub q3: Option<f64>,
    /// Hop counts of the sampled pairs.
    pub hops: Vec<u32>,
}

impl RadiusRow {
    /// Fraction of sampled pairs at most `h` hops apart.
    pub fn fraction_within(&self, h: u32) -> Option<f64> {
        (self.pairs > 0)
            .then(|| self.hops.iter().filter(|&&x| x <= h).count() as f64 / self.pairs as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub rows: Vec<RadiusRow>,
    /// Radii for which no admissible pair was found.
    pub empty_radii: Vec<f64>,
    pub largest_component: usize,
}

/// Samples the model from `rng` and profiles its chemical distances with an
/// analysis substream of it; see [`distance_profile`].
pub fn chemical_distance_profile(
    model: &ModelSpec,
    radii: &[f64],
    pairs_per_radius: usize,
    rng: RngStream,
) -> Result<DistanceProfile> {
    let g = model.sample(rng)?;
    let metric = match model.lattice() {
        Some(l) => Metric::Lattice(l),
        None if g.positions().is_some() => Metric::Positions,
        None => {
            return Err(invalid(
                "model",
                format!("{} has no geometry", model.name()),
            ))
        }
    };
    distance_profile(
        &g,
        metric,
        radii,
        pairs_per_radius,
        rng.substream(purpose::ANALYSIS),
    )
}

/// Hop distances between pairs of the largest component at Euclidean
/// distance in `[r, (1 + BAND) r]`.
///
/// Each round draws a source uniformly from the largest component and, for
/// every radius, a target uniformly among the largest-component nodes in the
/// band around it; one early-stopping breadth-first search then serves all
/// radii. Rounds whose band is empty for some radius simply yield fewer pairs
/// at that radius.
pub fn distance_profile(
    g: &Graph,
    metric: Metric<'_>,
    radii: &[f64],
    pairs_per_radius: usize,
    rng: RngStream,
) -> Result<DistanceProfile> {
    if pairs_per_radius == 0 {
        return Err(invalid("pairs", "must be at least 1"));
    }
    if let Some(&r) = radii.iter().find(|&&r| !(r > 0.0 && r.is_finite())) {
        return Err(invalid("radii", format!("{r} is not a positive radius")));
    }
    if let Metric::Lattice(l) = metric {
        let diameter = (l.side() - 1) as f64 * (l.d() as f64).sqrt();
        if let Some(&r) = radii.iter().find(|&&r| r > diameter) {
            return Err(invalid(
                "radii",
                format!("{r} exceeds the box diameter {diameter:.3}"),
            ));
        }
    }
    let comps = g.components();
    let members: Vec<NodeId> = match comps.largest {
        Some(c) => comps.members(c),
        None => Vec::new(),
    };
    let mut hops: Vec<Vec<u32>> = vec![Vec::new(); radii.len()];
    let mut r = rng.rng();
    if members.len() >= 2 {
        let mut candidates: Vec<Vec<NodeId>> = vec![Vec::new(); radii.len()];
        for _ in 0..pairs_per_radius {
            let source = members[r.random_range(0..members.len())];
            for c in &mut candidates {
                c.clear();
            }
            for &y in &members {
                let dist = metric.distance(g, source, y);
                for (i, &radius) in radii.iter().enumerate() {
                    if dist >= radius && dist <= (1.0 + BAND) * radius {
                        candidates[i].push(y);
                    }
                }
            }
            let mut targets = Vec::new();
            let mut slot = Vec::new();
            for (i, c) in candidates.iter().enumerate() {
                if !c.is_empty() {
                    targets.push(c[r.random_range(0..c.len())]);
                    slot.push(i);
                }
            }
            for (i, d) in slot.into_iter().zip(g.distances_to(source, &targets)) {
                match d {
                    Distance::Hops(h) => hops[i].push(h),
                    Distance::Unreachable => unreachable!("targets lie in the source's component"),
                }
            }
        }
    }
    let mut rows = Vec::new();
    let mut empty_radii = Vec::new();
    for (&radius, h) in radii.iter().zip(hops) {
        if h.is_empty() {
            empty_radii.push(radius);
        }
        let mut sorted: Vec<f64> = h.iter().map(|&x| x as f64).collect();
        sorted.sort_by(f64::total_cmp);
        let q = |p: f64| (!sorted.is_empty()).then(|| quantile_sorted(&sorted, p));
        rows.push(RadiusRow {
            radius,
            pairs: h.len(),
            median: q(0.5),
            q1: q(0.25),
            q3: q(0.75),
            hops: h,
        });
    }
    Ok(DistanceProfile {
        rows,
        empty_radii,
        largest_component: members.len(),
    })
}
