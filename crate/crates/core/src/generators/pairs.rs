//! Independent pair sampling for the long-range edge law
//! `p(x, y) = 1 − exp(−λ W_x W_y ‖x − y‖^{−α})`, optionally with a fixed
//! probability for pairs at distance exactly one.
//!
//! Two strategies produce the same law. The exhaustive one draws one uniform
//! per pair. The fast one groups points into weight classes (`W` within a
//! factor of two) and grid cells, and for every point walks outward through
//! Chebyshev shells of cells. Within a shell every pair has probability at most
//! a bound `b` computed from the shell's minimum distance and the class's
//! largest weight; candidates are drawn by geometric skipping at rate `b` and
//! accepted with probability `p/b`. Each pair is visited only from its
//! endpoint in the lower class, or from the smaller id within a class.
//!
//! Every accepted pair carries a mark uniform on `[0, p)`: realising the edge
//! set at a smaller probability `p' ≤ p` keeps exactly the pairs with
//! `mark < p'`, which gives monotone couplings across parameters.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{GraphBuilder, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkedEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub mark: f64,
}

/// Receives sampled edges with their marks.
pub trait EdgeSink {
    fn push(&mut self, u: NodeId, v: NodeId, mark: f64);
}

impl EdgeSink for GraphBuilder {
    fn push(&mut self, u: NodeId, v: NodeId, _mark: f64) {
        self.add_edge(u, v);
    }
}

impl EdgeSink for Vec<MarkedEdge> {
    fn push(&mut self, u: NodeId, v: NodeId, mark: f64) {
        Vec::push(self, MarkedEdge { u, v, mark });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairSampling {
    /// Exhaustive up to [`AUTO_EXHAUSTIVE_MAX`] participating points.
    #[default]
    Auto,
    Exhaustive,
    Fast,
}

impl std::str::FromStr for PairSampling {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "exhaustive" => Ok(Self::Exhaustive),
            "fast" => Ok(Self::Fast),
            other => Err(crate::error::invalid(
                "sampling",
                format!("`{other}` is not auto|exhaustive|fast"),
            )),
        }
    }
}

pub const AUTO_EXHAUSTIVE_MAX: usize = 1024;

/// Classes with at most this many points are scanned directly.
const DIRECT_CLASS_MAX: usize = 32;
/// Shells up to this Chebyshev radius are one cell thick; beyond it they grow
/// geometrically by a quarter.
const UNIT_SHELLS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Kernel {
    pub lambda: f64,
    pub alpha: f64,
    /// Probability used instead of the long-range law at distance one.
    pub nn: Option<f64>,
}

impl Kernel {
    pub(crate) fn prob(&self, strength: f64, r: f64) -> f64 {
        if let Some(p) = self.nn {
            if (r - 1.0).abs() < 1e-9 {
                return p;
            }
        }
        self.long_range(strength, r)
    }

    fn long_range(&self, strength: f64, r: f64) -> f64 {
        if self.lambda == 0.0 {
            return 0.0;
        }
        -(-(self.lambda * strength * r.powf(-self.alpha))).exp_m1()
    }

    /// Upper bound on the probability of any pair at distance `≥ dmin` with
    /// strength `≤ strength`.
    fn bound(&self, strength: f64, dmin: f64) -> f64 {
        let mut b = if dmin <= 0.0 {
            1.0
        } else {
            self.long_range(strength, dmin)
        };
        if let Some(p) = self.nn {
            if dmin <= 1.0 {
                b = b.max(p);
            }
        }
        b
    }
}

/// Point locations plus the cell grid used by the fast strategy.
pub(crate) struct Geometry<'a> {
    pub dim: usize,
    /// Row-major `n × dim` coordinates.
    pub coords: &'a [f64],
    /// Side of the periodic box, if distances wrap.
    pub period: Option<f64>,
    /// Lower corner of the bounding box.
    pub origin: f64,
    pub cell: f64,
    pub cells: usize,
    /// Integer coordinates with one site per cell.
    pub lattice: bool,
}

impl<'a> Geometry<'a> {
    pub(crate) fn lattice(dim: usize, coords: &'a [f64], side: usize, periodic: bool) -> Self {
        Self {
            dim,
            coords,
            period: periodic.then_some(side as f64),
            origin: -0.5,
            cell: 1.0,
            cells: side,
            lattice: true,
        }
    }

    /// Free-boundary box `[−side/2, side/2]^dim` with about two points per
    /// cell.
    pub(crate) fn continuum(dim: usize, coords: &'a [f64], side: f64) -> Self {
        let n = coords.len() / dim.max(1);
        let target = (2.0 * side.powi(dim as i32) / n.max(1) as f64).powf(1.0 / dim as f64);
        let max_cells = (1u64 << (26 / dim as u32)) as f64;
        let cells = (side / target).floor().clamp(1.0, max_cells) as usize;
        Self {
            dim,
            coords,
            period: None,
            origin: -side / 2.0,
            cell: side / cells as f64,
            cells,
            lattice: false,
        }
    }

    fn num_points(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub(crate) fn distance(&self, x: usize, y: usize) -> f64 {
        let a = &self.coords[x * self.dim..(x + 1) * self.dim];
        let b = &self.coords[y * self.dim..(y + 1) * self.dim];
        let mut s = 0.0;
        for k in 0..self.dim {
            let mut diff = a[k] - b[k];
            if let Some(p) = self.period {
                diff -= p * (diff / p).round();
            }
            s += diff * diff;
        }
        s.sqrt()
    }

    fn cell_coord(&self, v: f64) -> u32 {
        let c = ((v - self.origin) / self.cell).floor();
        c.clamp(0.0, (self.cells - 1) as f64) as u32
    }

    /// Smallest distance between points whose cells are `c` apart in
    /// Chebyshev distance.
    fn dmin(&self, c: usize) -> f64 {
        if self.lattice {
            c as f64 * self.cell
        } else {
            c.saturating_sub(1) as f64 * self.cell
        }
    }
}

pub(crate) struct PairProblem<'a> {
    pub geometry: Geometry<'a>,
    /// Per-point weights; all one when absent.
    pub weights: Option<&'a [f64]>,
    /// Points that take part; all when absent.
    pub active: Option<&'a [bool]>,
    pub kernel: Kernel,
}

impl PairProblem<'_> {
    fn weight(&self, x: usize) -> f64 {
        self.weights.map_or(1.0, |w| w[x])
    }

    fn participants(&self) -> Vec<usize> {
        let n = self.geometry.num_points();
        match self.active {
            Some(mask) => (0..n).filter(|&x| mask[x]).collect(),
            None => (0..n).collect(),
        }
    }
}

pub(crate) fn sample_pairs<R: Rng + ?Sized, S: EdgeSink>(
    problem: &PairProblem<'_>,
    how: PairSampling,
    rng: &mut R,
    sink: &mut S,
) {
    let ids = problem.participants();
    let exhaustive = match how {
        PairSampling::Exhaustive => true,
        PairSampling::Fast => false,
        PairSampling::Auto => ids.len() <= AUTO_EXHAUSTIVE_MAX,
    };
    if exhaustive {
        sample_exhaustive(problem, &ids, rng, sink);
    } else {
        FastSampler::new(problem, &ids).run(rng, sink);
    }
}

fn sample_exhaustive<R: Rng + ?Sized, S: EdgeSink>(
    problem: &PairProblem<'_>,
    ids: &[usize],
    rng: &mut R,
    sink: &mut S,
) {
    for (i, &x) in ids.iter().enumerate() {
        let wx = problem.weight(x);
        for &y in &ids[i + 1..] {
            let u: f64 = rng.random();
            let p = problem
                .kernel
                .prob(wx * problem.weight(y), problem.geometry.distance(x, y));
            if u < p {
                sink.push(x as NodeId, y as NodeId, u);
            }
        }
    }
}

/// Inclusive cell interval along one axis.
type Interval = (usize, usize);

/// Up to two disjoint intervals, sorted.
#[derive(Clone, Copy, Debug)]
struct AxisSet {
    ivs: [Interval; 2],
    len: usize,
}

impl AxisSet {
    fn around(center: usize, radius: usize, cells: usize, periodic: bool) -> Self {
        let one = |iv| AxisSet {
            ivs: [iv, (0, 0)],
            len: 1,
        };
        if periodic {
            if 2 * radius + 1 >= cells {
                return one((0, cells - 1));
            }
            let lo = center as isize - radius as isize;
            let hi = center + radius;
            if lo < 0 {
                AxisSet {
                    ivs: [(0, hi), ((cells as isize + lo) as usize, cells - 1)],
                    len: 2,
                }
            } else if hi >= cells {
                AxisSet {
                    ivs: [(0, hi - cells), (lo as usize, cells - 1)],
                    len: 2,
                }
            } else {
                one((lo as usize, hi))
            }
        } else {
            one((
                center.saturating_sub(radius),
                (center + radius).min(cells - 1),
            ))
        }
    }

    fn intervals(&self) -> &[Interval] {
        &self.ivs[..self.len]
    }

    fn is_full(&self, cells: usize) -> bool {
        self.len == 1 && self.ivs[0] == (0, cells - 1)
    }

    /// `self \ other`, assuming `other ⊆ self`.
    fn minus(&self, other: &AxisSet, out: &mut Vec<Interval>) {
        out.clear();
        for &(lo, hi) in self.intervals() {
            let mut start = lo;
            for &(a, b) in other.intervals() {
                if b < start || a > hi {
                    continue;
                }
                if a > start {
                    out.push((start, a - 1));
                }
                start = b + 1;
            }
            if start <= hi {
                out.push((start, hi));
            }
        }
    }
}

/// Points of one weight class bucketed by cell, with a summed-area table of
/// cell counts.
struct ClassGrid {
    members: Vec<usize>,
    wmax: f64,
    /// Member ids ordered by cell, then id. Empty for directly scanned classes.
    items: Vec<u32>,
    cell_start: Vec<u32>,
    sat: Vec<u32>,
    /// Every cell holds exactly one member, so counts are box volumes.
    dense: bool,
}

struct FastSampler<'p, 'a> {
    problem: &'p PairProblem<'a>,
    ids: &'p [usize],
    class_of: Vec<u16>,
    classes: Vec<ClassGrid>,
    cell_of: Vec<u32>,
    dim: usize,
    cells: usize,
    periodic: bool,
    /// Strides of the summed-area table, per axis.
    sat_stride: Vec<usize>,
    /// Chebyshev radius ranges `[c_lo, c_hi]` of the shells, innermost first.
    shells: Vec<(usize, usize)>,
    /// Per-shell bounds when all weights are one.
    unit_bounds: Option<Vec<f64>>,
}

impl<'p, 'a> FastSampler<'p, 'a> {
    fn new(problem: &'p PairProblem<'a>, ids: &'p [usize]) -> Self {
        let geo = &problem.geometry;
        let (dim, cells) = (geo.dim, geo.cells);
        let n = geo.num_points();
        let wmin = ids
            .iter()
            .map(|&x| problem.weight(x))
            .fold(f64::INFINITY, f64::min);
        let mut class_of = vec![u16::MAX; n];
        let mut num_classes = 0usize;
        for &x in ids {
            let c = (problem.weight(x) / wmin)
                .log2()
                .floor()
                .clamp(0.0, u16::MAX as f64 - 1.0) as u16;
            class_of[x] = c;
            num_classes = num_classes.max(c as usize + 1);
        }
        let mut cell_of = vec![0u32; n * dim];
        for &x in ids {
            for k in 0..dim {
                cell_of[x * dim + k] = geo.cell_coord(geo.coords[x * dim + k]);
            }
        }
        let mut sat_stride = vec![1usize; dim];
        for k in (0..dim.saturating_sub(1)).rev() {
            sat_stride[k] = sat_stride[k + 1] * (cells + 1);
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
        for &x in ids {
            members[class_of[x] as usize].push(x);
        }
        let mut sampler = Self {
            problem,
            ids,
            class_of,
            classes: Vec::with_capacity(num_classes),
            cell_of,
            dim,
            cells,
            periodic: geo.period.is_some(),
            sat_stride,
            shells: shell_schedule(cells),
            unit_bounds: None,
        };
        if problem.weights.is_none() {
            let table = sampler
                .shells
                .iter()
                .map(|&(c_lo, _)| problem.kernel.bound(1.0, geo.dmin(c_lo)))
                .collect();
            sampler.unit_bounds = Some(table);
        }
        for m in members {
            let grid = sampler.build_class(m);
            sampler.classes.push(grid);
        }
        sampler
    }

    fn cell_index(&self, coords: impl Iterator<Item = usize>) -> usize {
        coords.fold(0, |acc, c| acc * self.cells + c)
    }

    fn build_class(&self, members: Vec<usize>) -> ClassGrid {
        let wmax = members
            .iter()
            .map(|&x| self.problem.weight(x))
            .fold(0.0, f64::max);
        if members.len() <= DIRECT_CLASS_MAX {
            return ClassGrid {
                members,
                wmax,
                items: Vec::new(),
                cell_start: Vec::new(),
                sat: Vec::new(),
                dense: false,
            };
        }
        let dim = self.dim;
        let num_cells = self.cells.pow(dim as u32);
        let mut counts = vec![0u32; num_cells + 1];
        let cell_of_member: Vec<usize> = members
            .iter()
            .map(|&x| self.cell_index((0..dim).map(|k| self.cell_of[x * dim + k] as usize)))
            .collect();
        for &c in &cell_of_member {
            counts[c + 1] += 1;
        }
        let dense = members.len() == num_cells && counts[1..].iter().all(|&c| c == 1);
        if dense {
            let mut items = vec![0u32; num_cells];
            for (&x, &c) in members.iter().zip(&cell_of_member) {
                items[c] = x as u32;
            }
            return ClassGrid {
                members,
                wmax,
                items,
                cell_start: Vec::new(),
                sat: Vec::new(),
                dense,
            };
        }
        let mut sat = vec![0u32; (self.cells + 1).pow(dim as u32)];
        for cell in 0..num_cells {
            let mut idx = 0;
            let mut rem = cell;
            for k in (0..dim).rev() {
                idx += (rem % self.cells + 1) * self.sat_stride[k];
                rem /= self.cells;
            }
            sat[idx] = counts[cell + 1];
        }
        for k in 0..dim {
            let stride = self.sat_stride[k];
            for idx in 0..sat.len() {
                if !(idx / stride).is_multiple_of(self.cells + 1) {
                    sat[idx] += sat[idx - stride];
                }
            }
        }
        for c in 0..num_cells {
            counts[c + 1] += counts[c];
        }
        let cell_start = counts;
        let mut fill = cell_start.clone();
        let mut items = vec![0u32; members.len()];
        // members are in increasing id order, so each cell stays sorted
        for (&x, &c) in members.iter().zip(&cell_of_member) {
            items[fill[c] as usize] = x as u32;
            fill[c] += 1;
        }
        ClassGrid {
            members,
            wmax,
            items,
            cell_start,
            sat,
            dense,
        }
    }

    fn count_box(&self, grid: &ClassGrid, lo: &[usize], hi: &[usize]) -> u64 {
        if grid.dense {
            return lo
                .iter()
                .zip(hi)
                .map(|(&a, &b)| (b + 1 - a) as u64)
                .product();
        }
        let sat = &grid.sat;
        let mut total = 0i64;
        for mask in 0..1usize << self.dim {
            let mut idx = 0;
            let mut lower = 0;
            for k in 0..self.dim {
                if mask >> k & 1 == 1 {
                    idx += (hi[k] + 1) * self.sat_stride[k];
                } else {
                    idx += lo[k] * self.sat_stride[k];
                    lower += 1;
                }
            }
            let v = sat[idx] as i64;
            total += if lower % 2 == 0 { v } else { -v };
        }
        total as u64
    }

    /// Points of a class inside a product of axis sets.
    fn count_set(
        &self,
        grid: &ClassGrid,
        sets: &[AxisSet],
        lo: &mut [usize],
        hi: &mut [usize],
    ) -> u64 {
        let combos: usize = sets.iter().map(|s| s.len).product();
        let mut total = 0;
        for combo in 0..combos {
            let mut rem = combo;
            for k in 0..self.dim {
                let iv = sets[k].ivs[rem % sets[k].len];
                rem /= sets[k].len;
                lo[k] = iv.0;
                hi[k] = iv.1;
            }
            total += self.count_box(grid, lo, hi);
        }
        total
    }

    /// The `t`-th point (in cell order) of a class inside a box.
    fn locate_in_box(
        &self,
        grid: &ClassGrid,
        lo: &mut [usize],
        hi: &mut [usize],
        mut t: u64,
    ) -> usize {
        if grid.dense {
            let mut cell = 0;
            let mut rem = t as usize;
            let mut stride: usize = lo.iter().zip(hi.iter()).map(|(&a, &b)| b + 1 - a).product();
            for k in 0..self.dim {
                stride /= hi[k] + 1 - lo[k];
                cell = cell * self.cells + lo[k] + rem / stride;
                rem %= stride;
            }
            return grid.items[cell] as usize;
        }
        let last = self.dim - 1;
        for k in 0..last {
            let (mut a, mut b) = (lo[k], hi[k]);
            while a < b {
                let mid = (a + b) / 2;
                hi[k] = mid;
                if self.count_box(grid, lo, hi) > t {
                    b = mid;
                } else {
                    a = mid + 1;
                }
            }
            if a > lo[k] {
                hi[k] = a - 1;
                t -= self.count_box(grid, lo, hi);
            }
            lo[k] = a;
            hi[k] = a;
        }
        let first = self.cell_index(lo.iter().copied());
        grid.items[grid.cell_start[first] as usize + t as usize] as usize
    }

    fn run<R: Rng + ?Sized, S: EdgeSink>(&self, rng: &mut R, sink: &mut S) {
        let mut scratch = Scratch::new(self.dim);
        for &x in self.ids {
            let own = self.class_of[x] as usize;
            for j in own..self.classes.len() {
                let grid = &self.classes[j];
                if grid.members.is_empty() {
                    continue;
                }
                if grid.items.is_empty() {
                    self.scan_direct(x, own == j, grid, rng, sink);
                } else {
                    self.scan_shells(x, own == j, grid, &mut scratch, rng, sink);
                }
            }
        }
    }

    fn scan_direct<R: Rng + ?Sized, S: EdgeSink>(
        &self,
        x: usize,
        same_class: bool,
        grid: &ClassGrid,
        rng: &mut R,
        sink: &mut S,
    ) {
        let problem = self.problem;
        let wx = problem.weight(x);
        for &y in &grid.members {
            if y == x || (same_class && y < x) {
                continue;
            }
            let u: f64 = rng.random();
            let p = problem
                .kernel
                .prob(wx * problem.weight(y), problem.geometry.distance(x, y));
            if u < p {
                sink.push(x as NodeId, y as NodeId, u);
            }
        }
    }

    /// Walks the shells around `x` as one Bernoulli sequence with a
    /// piecewise-constant hazard `h = −ln(1 − b)`. The residual of an Exp(1)
    /// variable is carried across positions; a position is a candidate when
    /// the residual falls below its hazard, and `1 − e^{−residual}` is then
    /// the pair's uniform mark on `[0, b)`.
    fn scan_shells<R: Rng + ?Sized, S: EdgeSink>(
        &self,
        x: usize,
        same_class: bool,
        grid: &ClassGrid,
        s: &mut Scratch,
        rng: &mut R,
        sink: &mut S,
    ) {
        let problem = self.problem;
        let geo = &problem.geometry;
        let wx = problem.weight(x);
        let strength = wx * grid.wmax;
        let dim = self.dim;
        for k in 0..dim {
            s.centre[k] = self.cell_of[x * dim + k] as usize;
        }
        let mut residual = exp1(rng);
        for (shell, &(c_lo, c_hi)) in self.shells.iter().enumerate() {
            if c_lo > 0 {
                for k in 0..dim {
                    s.inner[k] = AxisSet::around(s.centre[k], c_lo - 1, self.cells, self.periodic);
                }
                if s.inner.iter().all(|a| a.is_full(self.cells)) {
                    return;
                }
            }
            let dmin = geo.dmin(c_lo);
            let b = match &self.unit_bounds {
                Some(table) => table[shell],
                None => problem.kernel.bound(strength, dmin),
            };
            if b <= 0.0 {
                if dmin > 1.0 {
                    return;
                }
                continue;
            }
            let hazard = -(-b).ln_1p();
            for k in 0..dim {
                s.outer[k] = AxisSet::around(s.centre[k], c_hi, self.cells, self.periodic);
            }
            let outer_count = self.count_set(grid, &s.outer, &mut s.lo, &mut s.hi);
            let inner_count = if c_lo > 0 {
                self.count_set(grid, &s.inner, &mut s.lo, &mut s.hi)
            } else {
                0
            };
            let m = outer_count - inner_count;
            let mut t = 0u64;
            let mut located = false;
            while t < m {
                let jump = (residual / hazard).floor();
                if jump >= (m - t) as f64 {
                    residual -= (m - t) as f64 * hazard;
                    break;
                }
                t += jump as u64;
                // Guards `0 · ∞` when `b = 1`.
                let left = if jump > 0.0 {
                    residual - jump * hazard
                } else {
                    residual
                };
                let mark = -(-left).exp_m1();
                if !located {
                    self.shell_boxes(c_lo > 0, grid, s);
                    located = true;
                }
                let y = self.locate_in_shell(grid, s, t);
                t += 1;
                residual = exp1(rng);
                if y == x || (same_class && y < x) {
                    continue;
                }
                let p = problem
                    .kernel
                    .prob(wx * problem.weight(y), geo.distance(x, y));
                debug_assert!(p <= b * (1.0 + 1e-12), "bound {b} below probability {p}");
                if mark < p {
                    sink.push(x as NodeId, y as NodeId, mark);
                }
            }
        }
    }

    /// Decomposes `outer \ inner` into disjoint boxes with running counts.
    fn shell_boxes(&self, has_inner: bool, grid: &ClassGrid, s: &mut Scratch) {
        let dim = self.dim;
        s.boxes.clear();
        s.cumulative.clear();
        let mut running = 0u64;
        let pieces = if has_inner { dim } else { 1 };
        let mut diff = Vec::new();
        for a in 0..pieces {
            // axes before `a` inside inner, axis `a` in outer \ inner, rest in outer
            let mut axis_ivs: Vec<Vec<Interval>> = Vec::with_capacity(dim);
            for k in 0..dim {
                if !has_inner || k > a {
                    axis_ivs.push(s.outer[k].intervals().to_vec());
                } else if k < a {
                    axis_ivs.push(s.inner[k].intervals().to_vec());
                } else {
                    s.outer[k].minus(&s.inner[k], &mut diff);
                    axis_ivs.push(diff.clone());
                }
            }
            let combos: usize = axis_ivs.iter().map(Vec::len).product();
            for combo in 0..combos {
                let mut rem = combo;
                for k in 0..dim {
                    let iv = axis_ivs[k][rem % axis_ivs[k].len()];
                    rem /= axis_ivs[k].len();
                    s.lo[k] = iv.0;
                    s.hi[k] = iv.1;
                }
                let c = self.count_box(grid, &s.lo, &s.hi);
                if c > 0 {
                    running += c;
                    s.boxes.extend_from_slice(&s.lo);
                    s.boxes.extend_from_slice(&s.hi);
                    s.cumulative.push(running);
                }
            }
        }
    }

    fn locate_in_shell(&self, grid: &ClassGrid, s: &mut Scratch, t: u64) -> usize {
        let dim = self.dim;
        let b = s.cumulative.partition_point(|&c| c <= t);
        let before = if b == 0 { 0 } else { s.cumulative[b - 1] };
        let base = b * 2 * dim;
        s.lo.copy_from_slice(&s.boxes[base..base + dim]);
        s.hi.copy_from_slice(&s.boxes[base + dim..base + 2 * dim]);
        let (lo, hi) = (&mut s.lo, &mut s.hi);
        self.locate_in_box(grid, lo, hi, t - before)
    }
}

/// Shells are one cell thick up to radius [`UNIT_SHELLS`] and then grow by a
/// quarter; the last one reaches the largest possible offset.
fn shell_schedule(cells: usize) -> Vec<(usize, usize)> {
    let mut shells = Vec::new();
    let mut c_lo = 0;
    while c_lo < cells {
        let c_hi = if c_lo <= UNIT_SHELLS {
            c_lo
        } else {
            c_lo + c_lo / 4
        };
        shells.push((c_lo, c_hi.min(cells)));
        c_lo = c_hi + 1;
    }
    shells
}

struct Scratch {
    centre: Vec<usize>,
    inner: Vec<AxisSet>,
    outer: Vec<AxisSet>,
    lo: Vec<usize>,
    hi: Vec<usize>,
    boxes: Vec<usize>,
    cumulative: Vec<u64>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        let empty = AxisSet {
            ivs: [(0, 0); 2],
            len: 1,
        };
        Self {
            centre: vec![0; dim],
            inner: vec![empty; dim],
            outer: vec![empty; dim],
            lo: vec![0; dim],
            hi: vec![0; dim],
            boxes: Vec::new(),
            cumulative: Vec::new(),
        }
    }
}

/// Exp(1) by inversion of a uniform on `(0, 1]`.
fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -(1.0 - rng.random::<f64>()).ln()
}
