#![allow(clippy::needless_range_loop)]

use percolab::generators::{
    gen_continuum, gen_continuum_with, gen_er, gen_het_lrp, gen_het_lrp_with, gen_hom_lrp,
    gen_hom_lrp_with, gen_nn_bond, gen_nsw, gen_site_bond, gen_site_bond_with, molloy_reed,
    nsw_degree_law, stub_matching, ContinuumParams, ErParams, HetLrpParams, HomLrpParams,
    NswParams, PairSampling, SiteBondParams,
};
use percolab::graph::edgelist;
use percolab::stats::{poisson_pmf, total_variation};
use percolab::{Boundary, Graph, LatticeBox, RngStream};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn stream(seed: u64) -> RngStream {
    RngStream::new(seed, 0)
}

fn adjacency_sets(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.num_nodes() as u32)
        .map(|x| {
            let mut v = g.neighbors(x).to_vec();
            v.sort_unstable();
            v
        })
        .collect()
}

#[test]
fn er_tiny_p_is_edgeless() {
    let p = ErParams::new(100, 1e-12).unwrap();
    for s in 0..20 {
        assert_eq!(gen_er(&p, stream(s)).unwrap().num_edges(), 0);
    }
}

#[test]
fn er_edge_count_mean() {
    let n = 200;
    let p = ErParams::new(n, 0.05).unwrap();
    let reps = 400;
    let total: usize = (0..reps)
        .map(|s| gen_er(&p, stream(s)).unwrap().num_edges())
        .sum();
    let pairs = (n * (n - 1) / 2) as f64;
    let mean = total as f64 / reps as f64;
    let sd = (pairs * 0.05 * 0.95 / reps as f64).sqrt();
    assert!((mean - pairs * 0.05).abs() < 4.0 * sd, "mean {mean}");
}

#[test]
fn er_is_simple_and_degree_law_is_poisson() {
    let p = ErParams::from_vartheta(100_000, 2.0).unwrap();
    let g = gen_er(&p, stream(11)).unwrap();
    assert!(g.is_simple());
    let mut hist = vec![0u64; 64];
    for d in g.degrees() {
        hist[d] += 1;
    }
    let tv = total_variation(&hist, |k| poisson_pmf(k, 2.0));
    assert!(tv < 0.01, "tv {tv}");
}

#[test]
fn er_rejects_p_outside_unit_interval() {
    assert!(ErParams::new(10, 1.5).is_err());
    assert!(ErParams::new(10, 0.0).is_err());
    assert!(ErParams::new(0, 0.5).is_err());
}

#[test]
fn er_small_realisations_often_have_a_giant() {
    // n = 12 at ϑ = 2: a large component next to a few isolated particles
    let p = ErParams::from_vartheta(12, 2.0).unwrap();
    let giants = (0..500)
        .filter(|&s| gen_er(&p, stream(s)).unwrap().components().largest_size() >= 8)
        .count();
    assert!(giants > 150, "{giants}");
}

#[test]
fn nsw_mean_matches_series_oracle() {
    let law = nsw_degree_law(&NswParams::new(10, 2.5, 10_000).unwrap()).unwrap();
    // oracle: double-double summation from the smallest terms upwards
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    let (mut zhi, mut zlo) = (0.0f64, 0.0f64);
    let two_sum = |a: f64, b: f64| {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    };
    for k in (1..=10_000u32).rev() {
        let w = (k as f64).powf(-3.5);
        let (s, e) = two_sum(zhi, w);
        zhi = s;
        zlo += e;
        let (s, e) = two_sum(hi, k as f64 * w);
        hi = s;
        lo += e;
    }
    let oracle = (hi + lo) / (zhi + zlo);
    assert!(
        (law.mean() - oracle).abs() < 1e-10,
        "{} vs {oracle}",
        law.mean()
    );
}

#[test]
fn molloy_reed_forced_matching() {
    let mr = molloy_reed(&[1, 1], stream(1)).unwrap();
    assert_eq!(mr.graph.edges(), vec![(0, 1)]);
    assert_eq!(
        (mr.self_loops, mr.parallel_edges, mr.extra_stub),
        (0, 0, None)
    );
}

#[test]
fn molloy_reed_handshake_and_odd_totals() {
    for s in 0..50 {
        let degrees = [3u32, 1, 4, 1, 5, 0, 3];
        let mr = molloy_reed(&degrees, stream(s)).unwrap();
        let total: u32 = degrees.iter().sum();
        let extra = mr.extra_stub.map_or(0, |_| 1);
        assert_eq!(2 * mr.graph.num_edges(), (total + extra) as usize);
        let x = mr.extra_stub.expect("odd total gets an extra stub");
        for (v, &k) in degrees.iter().enumerate() {
            let want = k as usize + usize::from(v as u32 == x);
            assert_eq!(mr.graph.degree(v as u32), want);
        }
    }
    assert!(molloy_reed(&[0, 0, 0], stream(0)).is_err());
    assert!(molloy_reed(&[2], stream(0)).is_err());
}

#[test]
fn molloy_reed_matching_is_uniform() {
    // stubs: 0,1 belong to node 0, stub 2 to node 1, stub 3 to node 2;
    // the three perfect matchings of four stubs
    let matchings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let mut counts = [0u64; 3];
    let draws = 30_000;
    for s in 0..draws {
        let m = stub_matching(&[2, 1, 1], stream(s)).unwrap();
        let mut pairs: Vec<(usize, usize)> =
            m.pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        let idx = matchings
            .iter()
            .position(|mm| mm[..] == pairs[..])
            .expect("a perfect matching");
        counts[idx] += 1;
    }
    let expected = draws as f64 / 3.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let p_value = 1.0 - ChiSquared::new(2.0).unwrap().cdf(chi2);
    assert!(p_value > 0.001, "counts {counts:?}, p {p_value}");
}

#[test]
fn nsw_generator_produces_requested_nodes() {
    let mr = gen_nsw(&NswParams::new(1000, 2.5, 100).unwrap(), stream(3)).unwrap();
    assert_eq!(mr.graph.num_nodes(), 1000);
    assert!(mr.graph.degrees().iter().all(|&k| k >= 1));
}

#[test]
fn nn_bond_full_path() {
    let b = LatticeBox::free(1, 4).unwrap();
    let g = gen_nn_bond(&b, 1.0, stream(0)).unwrap();
    assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3)]);
    assert_eq!(g.positions().unwrap().get(3), &[3.0]);
}

#[test]
fn nn_bond_interior_degrees_are_binomial() {
    for d in [1usize, 2, 3] {
        let side = [2000, 60, 16][d - 1];
        let b = LatticeBox::new(d, side, Boundary::Torus).unwrap();
        let p = 0.3;
        let g = gen_nn_bond(&b, p, stream(d as u64)).unwrap();
        let mut hist = vec![0u64; 2 * d + 1];
        for k in g.degrees() {
            assert!(k <= 2 * d);
            hist[k] += 1;
        }
        let binom = |k: u64| {
            let n = 2 * d as u64;
            let c = (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
            c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
        };
        let tv = total_variation(&hist, binom);
        assert!(tv < 0.02, "d={d} tv={tv}");
    }
}

#[test]
fn nn_bond_mean_edge_count() {
    let b = LatticeBox::free(2, 20).unwrap();
    let pairs = 2 * 20 * 19;
    assert_eq!(b.num_nn_pairs(), pairs);
    let reps = 300;
    let total: usize = (0..reps)
        .map(|s| gen_nn_bond(&b, 0.4, stream(s)).unwrap().num_edges())
        .sum();
    let mean = total as f64 / reps as f64;
    let sd = (pairs as f64 * 0.24 / reps as f64).sqrt();
    assert!((mean - 0.4 * pairs as f64).abs() < 4.0 * sd);
}

#[test]
fn hom_lambda_zero_is_nearest_neighbour_percolation() {
    let b = LatticeBox::free(2, 40).unwrap();
    for sampling in [PairSampling::Exhaustive, PairSampling::Fast] {
        let g = gen_hom_lrp_with(
            &b,
            &HomLrpParams::new(0.5, 0.0, 2.0).unwrap(),
            sampling,
            stream(5),
        )
        .unwrap();
        let pos = g.positions().unwrap();
        g.for_each_edge(|u, v| assert_eq!(pos.euclidean(u as usize, v as usize), 1.0));
        assert!(
            g.num_edges() > 1300 && g.num_edges() < 1800,
            "{}",
            g.num_edges()
        );
    }
}

#[test]
fn hom_edge_frequency_at_distance_ten() {
    let b = LatticeBox::free(1, 2048).unwrap();
    let params = HomLrpParams::new(0.9, 1.0, 1.5).unwrap();
    let reps = 40u64;
    let mut hits = 0u64;
    for s in 0..reps {
        let g = gen_hom_lrp(&b, &params, stream(s)).unwrap();
        g.for_each_edge(|u, v| hits += (u.abs_diff(v) == 10) as u64);
    }
    let trials = reps * (2048 - 10);
    let p = 1.0 - (-(10f64.powf(-1.5))).exp();
    assert!((p - 0.0311).abs() < 1e-4);
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    assert!(
        (hits as f64 - trials as f64 * p).abs() < 3.0 * sd,
        "{hits} vs {}",
        trials as f64 * p
    );
}

#[test]
fn het_weights_at_least_one() {
    let b = LatticeBox::free(1, 5000).unwrap();
    let g = gen_het_lrp(&b, &HetLrpParams::new(1.0, 2.0, 0.75).unwrap(), stream(2)).unwrap();
    assert!(g.weights().unwrap().iter().all(|&w| w >= 1.0));
}

/// Exact per-pair probabilities against empirical edge frequencies, bucketed
/// by probability, accumulated over replicates.
struct LawCheck {
    expected: Vec<f64>,
    variance: Vec<f64>,
    observed: Vec<f64>,
}

impl LawCheck {
    const BUCKETS: usize = 12;

    fn new() -> Self {
        Self {
            expected: vec![0.0; Self::BUCKETS],
            variance: vec![0.0; Self::BUCKETS],
            observed: vec![0.0; Self::BUCKETS],
        }
    }

    fn bucket(p: f64) -> usize {
        if p <= 0.0 {
            return 0;
        }
        // geometric buckets down to 1e-6
        ((-p.log10() * 2.0).floor() as usize).min(Self::BUCKETS - 1)
    }

    fn add(&mut self, g: &Graph, prob: impl Fn(usize, usize) -> f64) {
        let adj = adjacency_sets(g);
        let n = g.num_nodes();
        for x in 0..n {
            for y in x + 1..n {
                let p = prob(x, y);
                let b = Self::bucket(p);
                self.expected[b] += p;
                self.variance[b] += p * (1.0 - p);
                if adj[x].binary_search(&(y as u32)).is_ok() {
                    self.observed[b] += 1.0;
                }
            }
        }
    }

    fn assert_ok(&self, label: &str) {
        for b in 0..Self::BUCKETS {
            let sd = self.variance[b].sqrt();
            let diff = (self.observed[b] - self.expected[b]).abs();
            assert!(
                diff <= 4.5 * sd + 1e-9,
                "{label}: bucket {b} observed {} expected {}",
                self.observed[b],
                self.expected[b]
            );
        }
        assert!(
            self.expected.iter().filter(|&&e| e > 10.0).count() >= 3,
            "{label}: too few informative buckets"
        );
    }
}

fn lattice_distance(b: &LatticeBox) -> impl Fn(usize, usize) -> f64 + '_ {
    move |x, y| b.distance(x as u32, y as u32)
}

#[test]
fn conditional_edge_law_lattice_models() {
    let cases = [
        LatticeBox::free(1, 1500).unwrap(),
        LatticeBox::free(2, 36).unwrap(),
        LatticeBox::new(2, 35, Boundary::Torus).unwrap(),
        LatticeBox::free(3, 11).unwrap(),
    ];
    for b in &cases {
        let dist = lattice_distance(b);
        for sampling in [PairSampling::Exhaustive, PairSampling::Fast] {
            let label = format!("{b:?} {sampling:?}");
            let hom = HomLrpParams::new(0.7, 0.8, 2.5).unwrap();
            let het = HetLrpParams::new(0.3, 2.2, 1.1).unwrap();
            let sb = SiteBondParams::new(0.6, 1.5, 1.5).unwrap();
            let (mut c_hom, mut c_het, mut c_sb) =
                (LawCheck::new(), LawCheck::new(), LawCheck::new());
            for s in 0..6 {
                let g = gen_hom_lrp_with(b, &hom, sampling, stream(100 + s)).unwrap();
                c_hom.add(&g, |x, y| {
                    let r = dist(x, y);
                    if r == 1.0 {
                        hom.p
                    } else {
                        1.0 - (-hom.lambda * r.powf(-hom.alpha)).exp()
                    }
                });
                let g = gen_het_lrp_with(b, &het, sampling, stream(200 + s)).unwrap();
                let w = g.weights().unwrap().to_vec();
                c_het.add(&g, |x, y| {
                    1.0 - (-het.lambda * w[x] * w[y] * dist(x, y).powf(-het.alpha)).exp()
                });
                let g = gen_site_bond_with(b, &sb, sampling, stream(300 + s)).unwrap();
                let occ = g.occupied().unwrap().to_vec();
                c_sb.add(&g, |x, y| {
                    if occ[x] && occ[y] {
                        1.0 - (-sb.lambda_star * dist(x, y).powf(-sb.alpha)).exp()
                    } else {
                        0.0
                    }
                });
            }
            c_hom.assert_ok(&format!("hom {label}"));
            c_het.assert_ok(&format!("het {label}"));
            c_sb.assert_ok(&format!("site-bond {label}"));
        }
    }
}

#[test]
fn conditional_edge_law_continuum() {
    for homogeneous_marks in [true, false] {
        for sampling in [PairSampling::Exhaustive, PairSampling::Fast] {
            let params = ContinuumParams {
                d: 2,
                nu: 1.5,
                side: 30.0,
                lambda: 0.7,
                alpha: 3.0,
                beta: 1.3,
                homogeneous_marks,
                plant_origin: true,
            };
            let mut check = LawCheck::new();
            for s in 0..6 {
                let g = gen_continuum_with(&params, sampling, stream(400 + s)).unwrap();
                let pos = g.positions().unwrap().clone();
                let w = g.weights().map(<[f64]>::to_vec);
                check.add(&g, |x, y| {
                    let s = w.as_ref().map_or(1.0, |w| w[x] * w[y]);
                    1.0 - (-params.lambda * s * pos.euclidean(x, y).powf(-params.alpha)).exp()
                });
            }
            check.assert_ok(&format!("continuum marks={homogeneous_marks} {sampling:?}"));
        }
    }
}

#[test]
fn het_with_huge_beta_matches_homogeneous_law() {
    let b = LatticeBox::free(1, 3000).unwrap();
    let (lambda, alpha) = (1.0, 1.5);
    let mut counts = [[0u64; 4]; 2];
    let reps = 30;
    for s in 0..reps {
        let het = gen_het_lrp(
            &b,
            &HetLrpParams::new(lambda, alpha, 1e6).unwrap(),
            stream(s),
        )
        .unwrap();
        let hom = gen_hom_lrp(
            &b,
            &HomLrpParams::model_one(lambda, alpha).unwrap(),
            stream(1000 + s),
        )
        .unwrap();
        for (i, g) in [het, hom].iter().enumerate() {
            g.for_each_edge(|u, v| {
                let r = u.abs_diff(v) as usize;
                if let Some(k) = [1usize, 2, 5, 20].iter().position(|&t| t == r) {
                    counts[i][k] += 1;
                }
            });
        }
    }
    for (k, r) in [1.0f64, 2.0, 5.0, 20.0].iter().enumerate() {
        let p = 1.0 - (-lambda * r.powf(-alpha)).exp();
        let trials = reps as f64 * (3000.0 - r);
        let sd = (trials * p * (1.0 - p)).sqrt();
        for c in &counts {
            assert!(
                (c[k] as f64 - trials * p).abs() < 4.0 * sd,
                "r={r}: {} vs {}",
                c[k],
                trials * p
            );
        }
    }
}

#[test]
fn continuum_point_count_mean() {
    let params = ContinuumParams {
        d: 2,
        nu: 2.0,
        side: 50.0,
        lambda: 1.0,
        alpha: 3.0,
        beta: 1.0,
        homogeneous_marks: true,
        plant_origin: false,
    };
    let reps = 60;
    let total: usize = (0..reps)
        .map(|s| gen_continuum(&params, stream(s)).unwrap().num_nodes())
        .sum();
    let mean = total as f64 / reps as f64;
    assert!(
        (mean - 5000.0).abs() < 3.0 * (5000.0f64 / reps as f64).sqrt() * 1.5,
        "{mean}"
    );
    let g = gen_continuum(
        &ContinuumParams {
            plant_origin: true,
            ..params
        },
        stream(1),
    )
    .unwrap();
    assert_eq!(g.positions().unwrap().get(0), &[0.0, 0.0]);
    let bad = ContinuumParams {
        side: 0.0,
        ..params
    };
    assert!(gen_continuum(&bad, stream(0)).is_err());
    assert!(gen_continuum(&ContinuumParams { nu: -1.0, ..params }, stream(0)).is_err());
}

#[test]
fn continuum_origin_degree_grows_with_box_when_alpha_at_most_d() {
    let mut means = Vec::new();
    for side in [25.0, 50.0, 100.0, 200.0] {
        let params = ContinuumParams {
            d: 2,
            nu: 0.5,
            side,
            lambda: 1.0,
            alpha: 1.8,
            beta: 1.0,
            homogeneous_marks: true,
            plant_origin: true,
        };
        let reps = 20;
        let total: usize = (0..reps)
            .map(|s| gen_continuum(&params, stream(s)).unwrap().degree(0))
            .sum();
        means.push(total as f64 / reps as f64);
    }
    assert!(means.windows(2).all(|w| w[1] > w[0]), "{means:?}");
}

#[test]
fn site_bond_extremes() {
    let b = LatticeBox::free(2, 30).unwrap();
    let g = gen_site_bond(&b, &SiteBondParams::new(0.0, 2.0, 3.0).unwrap(), stream(0)).unwrap();
    assert_eq!(g.num_edges(), 0);
    let b = LatticeBox::free(2, 64).unwrap();
    let g = gen_site_bond(&b, &SiteBondParams::new(0.6, 1.0, 3.0).unwrap(), stream(1)).unwrap();
    let occ = g.occupied().unwrap();
    let n = occ.len() as f64;
    let frac = occ.iter().filter(|&&o| o).count() as f64 / n;
    assert!((frac - 0.6).abs() < 3.0 * (0.24 / n).sqrt(), "{frac}");
    g.for_each_edge(|u, v| assert!(occ[u as usize] && occ[v as usize]));
}

#[test]
fn site_bond_full_occupation_matches_model_one() {
    let b = LatticeBox::free(1, 2000).unwrap();
    let reps = 30;
    let mut counts = [[0u64; 3]; 2];
    for s in 0..reps {
        let sb =
            gen_site_bond(&b, &SiteBondParams::new(1.0, 1.2, 1.8).unwrap(), stream(s)).unwrap();
        let hom = gen_hom_lrp(
            &b,
            &HomLrpParams::model_one(1.2, 1.8).unwrap(),
            stream(500 + s),
        )
        .unwrap();
        for (i, g) in [sb, hom].iter().enumerate() {
            g.for_each_edge(|u, v| {
                if let Some(k) = [1u32, 3, 10].iter().position(|&t| t == u.abs_diff(v)) {
                    counts[i][k] += 1;
                }
            });
        }
    }
    for (k, r) in [1.0f64, 3.0, 10.0].iter().enumerate() {
        let p = 1.0 - (-1.2 * r.powf(-1.8)).exp();
        let trials = reps as f64 * (2000.0 - r);
        let sd = (trials * p * (1.0 - p)).sqrt();
        for c in &counts {
            assert!((c[k] as f64 - trials * p).abs() < 4.0 * sd);
        }
    }
}

#[test]
fn generators_are_deterministic() {
    let b = LatticeBox::free(2, 40).unwrap();
    let cont = ContinuumParams {
        d: 2,
        nu: 1.0,
        side: 40.0,
        lambda: 1.0,
        alpha: 2.5,
        beta: 1.5,
        homogeneous_marks: false,
        plant_origin: true,
    };
    let gens: Vec<Box<dyn Fn(RngStream) -> Graph>> = vec![
        Box::new(|s| gen_er(&ErParams::new(300, 0.02).unwrap(), s).unwrap()),
        Box::new(|s| {
            gen_nsw(&NswParams::new(300, 1.5, 1000).unwrap(), s)
                .unwrap()
                .graph
        }),
        Box::new(|s| gen_nn_bond(&b, 0.5, s).unwrap()),
        Box::new(|s| gen_hom_lrp(&b, &HomLrpParams::new(0.5, 1.0, 2.5).unwrap(), s).unwrap()),
        Box::new(|s| gen_het_lrp(&b, &HetLrpParams::new(0.5, 2.5, 1.0).unwrap(), s).unwrap()),
        Box::new(|s| gen_continuum(&cont, s).unwrap()),
        Box::new(|s| gen_site_bond(&b, &SiteBondParams::new(0.7, 1.0, 2.5).unwrap(), s).unwrap()),
    ];
    for gen in &gens {
        let a = edgelist::to_string(&gen(RngStream::new(9, 4)));
        let b2 = edgelist::to_string(&gen(RngStream::new(9, 4)));
        let c = edgelist::to_string(&gen(RngStream::new(9, 5)));
        assert_eq!(a, b2);
        assert_ne!(a, c);
    }
}
