use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::lattice::{Boundary, LatticeBox};
use crate::model::{FreeParam, ModelSpec};
use crate::rng::RngStream;
use crate::stats::{wilson_interval, Z95};
use crate::union_find::UnionFind;

/// Whether some component contains a site with first coordinate 0 and a
/// site with first coordinate `side − 1`.
pub fn crosses(g: &Graph, lattice: &LatticeBox) -> bool {
    let last = lattice.side() - 1;
    let mut uf = UnionFind::new(g.num_nodes());
    g.for_each_edge(|u, v| {
        uf.union(u, v);
    });
    let mut touches_left = vec![false; g.num_nodes()];
    let mut left_any = false;
    for x in 0..g.num_nodes() as u32 {
        if lattice.first_coord(x) == 0 {
            let r = uf.find(x) as usize;
            touches_left[r] = true;
            left_any = true;
        }
    }
    left_any
        && (0..g.num_nodes() as u32)
            .any(|x| lattice.first_coord(x) == last && touches_left[uf.find(x) as usize])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingEstimate {
    pub probability: f64,
    pub successes: u64,
    pub replicates: u64,
    /// 95% Wilson interval.
    pub ci: (f64, f64),
}

impl CrossingEstimate {
    pub fn from_counts(successes: u64, replicates: u64) -> Self {
        Self {
            probability: successes as f64 / replicates as f64,
            successes,
            replicates,
            ci: wilson_interval(successes, replicates, Z95),
        }
    }
}

/// The model on `lattice` with free boundary conditions.
fn on_free_box(model: &ModelSpec, lattice: &LatticeBox) -> Result<ModelSpec> {
    model.with_lattice(lattice.with_boundary(Boundary::Free)?)
}

/// Fraction of replicates with a left-right crossing. Replicate `i` uses
/// stream `rng.replicate(i)`.
pub fn crossing_probability(
    model: &ModelSpec,
    lattice: &LatticeBox,
    replicates: usize,
    rng: RngStream,
) -> Result<CrossingEstimate> {
    if replicates == 0 {
        return Err(invalid("replicates", "must be at least 1"));
    }
    let spec = on_free_box(model, lattice)?;
    let lattice = *spec.lattice().expect("lattice model");
    let hits = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            spec.sample(rng.replicate(i))
                .map(|g| crosses(&g, &lattice) as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossingEstimate::from_counts(
        hits.iter().sum(),
        replicates as u64,
    ))
}

/// Crossing indicators for every replicate (outer) and value of `which`
/// (inner). Each replicate samples once at the largest value and realises
/// the smaller ones from the same randomness, so every row is monotone in
/// the parameter.
pub fn crossing_indicators(
    model: &ModelSpec,
    lattice: &LatticeBox,
    which: FreeParam,
    values: &[f64],
    replicates: usize,
    rng: RngStream,
) -> Result<Vec<Vec<bool>>> {
    if replicates == 0 {
        return Err(invalid("replicates", "must be at least 1"));
    }
    if values.is_empty() {
        return Ok(vec![Vec::new(); replicates]);
    }
    let spec = on_free_box(model, lattice)?;
    let lattice = *spec.lattice().expect("lattice model");
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let base = spec.with_param(which, top)?;
    let specs = values
        .iter()
        .map(|&v| spec.with_param(which, v))
        .collect::<Result<Vec<_>>>()?;
    (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let sample = base.sample_coupled(rng.replicate(i))?;
            specs
                .iter()
                .map(|s| Ok(crosses(&sample.realize(s)?, &lattice)))
                .collect()
        })
        .collect()
}

/// Crossing probabilities at several values of `which` on coupled samples.
pub fn crossing_curve(
    model: &ModelSpec,
    lattice: &LatticeBox,
    which: FreeParam,
    values: &[f64],
    replicates: usize,
    rng: RngStream,
) -> Result<Vec<CrossingEstimate>> {
    let rows = crossing_indicators(model, lattice, which, values, replicates, rng)?;
    Ok((0..values.len())
        .map(|j| {
            CrossingEstimate::from_counts(
                rows.iter().filter(|r| r[j]).count() as u64,
                replicates as u64,
            )
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectResult {
    pub estimate: f64,
    /// Final bracketing interval.
    pub lo: f64,
    pub hi: f64,
    /// Every evaluated parameter value with its estimate, in order.
    pub steps: Vec<(f64, CrossingEstimate)>,
}

/// Bisects for the parameter value where the crossing probability equals
/// `target`, stopping once the bracket is narrower than `tol`.
///
/// All evaluations share replicate streams and are realised from coupled
/// samples at the initial upper end, so the estimates along the way are
/// ordered replicate by replicate.
#[allow(clippy::too_many_arguments)]
pub fn bisect_critical(
    model: &ModelSpec,
    lattice: &LatticeBox,
    which: FreeParam,
    bracket: (f64, f64),
    target: f64,
    tol: f64,
    replicates: usize,
    rng: RngStream,
) -> Result<BisectResult> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(invalid("bracket", format!("[{lo}, {hi}] is empty")));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    if !(target > 0.0 && target < 1.0) {
        return Err(invalid("target", format!("{target} is outside (0, 1)")));
    }
    let base = model.with_param(which, hi)?;
    let eval = |v: f64| -> Result<CrossingEstimate> {
        let rows = crossing_indicators(&base, lattice, which, &[v], replicates, rng)?;
        Ok(CrossingEstimate::from_counts(
            rows.iter().filter(|r| r[0]).count() as u64,
            replicates as u64,
        ))
    };
    let at_lo = eval(lo)?;
    let at_hi = eval(hi)?;
    let mut steps = vec![(lo, at_lo), (hi, at_hi)];
    if at_lo.probability > at_hi.probability {
        return Err(Error::NotMonotone(format!(
            "crossing probability {} at {lo} exceeds {} at {hi}",
            at_lo.probability, at_hi.probability
        )));
    }
    if at_lo.probability > target || at_hi.probability < target {
        return Err(Error::Degenerate(format!(
            "target {target} is not bracketed: {} at {lo}, {} at {hi}",
            at_lo.probability, at_hi.probability
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let est = eval(mid)?;
        steps.push((mid, est));
        if est.probability < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BisectResult {
        estimate: 0.5 * (lo + hi),
        lo,
        hi,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nn(side: usize, p: f64) -> (ModelSpec, LatticeBox) {
        let lattice = LatticeBox::free(2, side).unwrap();
        (ModelSpec::NnBond { lattice, p }, lattice)
    }

    #[test]
    fn extremes() {
        let (m, l) = nn(8, 1.0);
        assert_eq!(
            crossing_probability(&m, &l, 5, RngStream::new(1, 0))
                .unwrap()
                .probability,
            1.0
        );
        let (m, l) = nn(8, 0.0);
        assert_eq!(
            crossing_probability(&m, &l, 5, RngStream::new(1, 0))
                .unwrap()
                .probability,
            0.0
        );
    }

    #[test]
    fn crossing_needs_both_faces() {
        let torus = LatticeBox::new(1, 4, Boundary::Torus).unwrap();
        assert!(crosses(&Graph::from_edges(4, &[(0, 3)]), &torus));
        assert!(!crosses(&Graph::from_edges(4, &[(0, 1), (1, 2)]), &torus));
        let m = ModelSpec::NnBond {
            lattice: torus,
            p: 0.0,
        };
        let spec = on_free_box(&m, &torus).unwrap();
        assert_eq!(spec.lattice().unwrap().boundary(), Boundary::Free);
    }

    #[test]
    fn bisect_rejects_unbracketed_target() {
        let (m, l) = nn(6, 0.5);
        let r = bisect_critical(
            &m,
            &l,
            FreeParam::P,
            (0.0, 0.01),
            0.5,
            0.01,
            20,
            RngStream::new(3, 0),
        );
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }
}
