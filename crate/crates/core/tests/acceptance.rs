//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Set `ACCEPTANCE_ONLY=1,7,12` to run a subset.

#![allow(clippy::needless_range_loop)]

use std::collections::HashSet;
use std::time::{Duration, Instant};

use percolab::analysis::{
    bisect_critical, box_cluster_scaling, chemical_distance_profile, degree_summary, degree_tail,
};
use percolab::experiments::{distance_regimes, phase_diagram, GrowthLaw, PhaseConfig, RegimeCell};
use percolab::generators::{
    gen_continuum, gen_er, gen_nsw, nsw_degree_law, ContinuumParams, ErParams, HetLrpParams,
    HomLrpParams, NswParams, PairSampling,
};
use percolab::model::FreeParam;
use percolab::rng::{derive_stream, purpose};
use percolab::stats::{poisson_pmf, total_variation};
use percolab::theory::{benjamini_bound, distance_exponent, giant_fraction, DegreeLaw};
use percolab::union_find::UnionFind;
use percolab::{Graph, LatticeBox, ModelSpec, RngStream};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const SEED: u64 = 20_240_601;

type Outcome = Result<(bool, String), String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn stream(i: u64) -> RngStream {
    RngStream::new(SEED, i)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Smallest positive root of `χ = 1 − e^{−ϑχ}` by bisection.
fn poisson_giant(vartheta: f64) -> f64 {
    let (mut lo, mut hi) = (1e-9, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - (-vartheta * mid).exp() > mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn c1_er_poisson() -> Outcome {
    let g = gen_er(
        &ErParams::from_vartheta(100_000, 2.0).map_err(err)?,
        stream(1),
    )
    .map_err(err)?;
    let tv = total_variation(&degree_summary(&g).histogram, |k| poisson_pmf(k, 2.0));
    Ok((tv < 0.01, format!("TV to Poisson(2) = {tv:.4} (< 0.01)")))
}

fn c2_er_giant() -> Outcome {
    let n = 100_000;
    let chi = poisson_giant(2.0);
    let lib = giant_fraction(&DegreeLaw::poisson(2.0, 200).map_err(err)?)
        .map_err(err)?
        .chi;
    let g = gen_er(&ErParams::from_vartheta(n, 2.0).map_err(err)?, stream(2)).map_err(err)?;
    let frac = g.components().largest_size() as f64 / n as f64;
    let bound = 40.0 * (n as f64).ln();
    let sub = ErParams::from_vartheta(n, 0.5).map_err(err)?;
    let mut worst = 0;
    for r in 0..20 {
        let g = gen_er(&sub, stream(1000 + r)).map_err(err)?;
        worst = worst.max(g.components().largest_size());
    }
    let ok = (frac - chi).abs() <= 0.01 && (lib - chi).abs() < 1e-6 && (worst as f64) < bound;
    Ok((
        ok,
        format!(
            "largest fraction {frac:.4} vs χ = {chi:.4} (library {lib:.4}); ϑ=0.5 max largest {worst} < {bound:.0}"
        ),
    ))
}

fn c3_nsw_giant() -> Outcome {
    let params = NswParams::new(100_000, 2.5, 10_000).map_err(err)?;
    let theory = giant_fraction(&nsw_degree_law(&params).map_err(err)?).map_err(err)?;
    let mr = gen_nsw(&params, stream(3)).map_err(err)?;
    let frac = mr.graph.components().largest_size() as f64 / params.n as f64;
    Ok((
        (frac - theory.chi).abs() <= 0.02,
        format!(
            "largest fraction {frac:.4} vs χ = {:.4} (ϑ = {:.3})",
            theory.chi, theory.vartheta
        ),
    ))
}

fn c4_degree_tail() -> Outcome {
    let lattice = LatticeBox::free(1, 100_000).map_err(err)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (beta, lo, hi) in [(0.75, 1.3, 1.7), (1.25, 2.2, 2.8)] {
        let spec = ModelSpec::HetLrp {
            lattice,
            params: HetLrpParams::new(1.0, 2.0, beta).map_err(err)?,
            sampling: PairSampling::Auto,
        };
        let rng = stream(4);
        let g = spec.sample(rng).map_err(err)?;
        let fit = degree_tail(&g, 0.05, rng.substream(purpose::ANALYSIS)).map_err(err)?;
        ok &= fit.tau_hat >= lo && fit.tau_hat <= hi;
        parts.push(format!("β={beta}: τ̂ = {:.3} in [{lo}, {hi}]", fit.tau_hat));
    }
    Ok((ok, parts.join("; ")))
}

fn c5_critical_probability() -> Outcome {
    let lattice = LatticeBox::free(2, 64).map_err(err)?;
    let spec = ModelSpec::NnBond { lattice, p: 0.5 };
    let r = bisect_critical(
        &spec,
        &lattice,
        FreeParam::P,
        (0.3, 0.7),
        0.5,
        0.01,
        2000,
        stream(5),
    )
    .map_err(err)?;
    Ok((
        (0.48..=0.52).contains(&r.estimate),
        format!(
            "p̂ = {:.4} in [0.48, 0.52] after {} evaluations",
            r.estimate,
            r.steps.len()
        ),
    ))
}

fn c6_phase_signatures() -> Outcome {
    // (d, α, β, λ grid, replicates, sides)
    let cells = [
        (
            1,
            1.5,
            1.0,
            vec![0.05, 0.1, 0.2],
            2000,
            vec![256, 512, 1024, 2048],
        ),
        (
            1,
            3.0,
            1.0,
            vec![1.0, 3.0, 10.0],
            1000,
            vec![256, 512, 1024, 2048],
        ),
        (
            2,
            3.0,
            2.0,
            vec![0.01, 0.02, 0.05],
            1000,
            vec![16, 32, 64, 128],
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, alpha, beta, lambdas, replicates, sides) in cells {
        let config = PhaseConfig {
            d,
            alphas: vec![alpha],
            betas: vec![beta],
            lambdas,
            sides,
            replicates,
            seed: SEED,
            level: 0.05,
        };
        let cell = phase_diagram(&config).map_err(err)?.remove(0);
        ok &= cell.agrees == Some(true);
        parts.push(format!(
            "(d={d}, α={alpha}, β={beta}) {:?} vs {:?}",
            cell.signature, cell.predicted
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn c7_distance_exponent() -> Outcome {
    let delta = distance_exponent(2, 2.5).map_err(err)?;
    let value = 1e4f64.ln().powf(delta);
    Ok((
        (delta - 1.4748).abs() <= 1e-4 && (value - 26.43).abs() <= 0.01,
        format!("Δ = {delta:.5}, (ln 10⁴)^Δ = {value:.3}"),
    ))
}

fn c8_bounded_hops() -> Outcome {
    let spec = ModelSpec::HomLrp {
        lattice: LatticeBox::free(2, 512).map_err(err)?,
        params: HomLrpParams::model_one(1.0, 1.0).map_err(err)?,
        sampling: PairSampling::Auto,
    };
    let bound = benjamini_bound(2, 1.0).map_err(err)? as u32;
    let prof =
        chemical_distance_profile(&spec, &[200.0, 250.0, 300.0], 100, stream(8)).map_err(err)?;
    let total: usize = prof.rows.iter().map(|r| r.pairs).sum();
    let within: usize = prof
        .rows
        .iter()
        .map(|r| r.hops.iter().filter(|&&h| h <= bound).count())
        .sum();
    let frac = within as f64 / total.max(1) as f64;
    Ok((
        bound == 2 && total > 0 && frac >= 0.95,
        format!(
            "{within}/{total} far pairs within {bound} hops ({:.1}%)",
            100.0 * frac
        ),
    ))
}

fn c9_regime_separation() -> Outcome {
    let het = ModelSpec::HetLrp {
        lattice: LatticeBox::free(1, 1_000_000).map_err(err)?,
        params: HetLrpParams::new(1.0, 2.0, 0.75).map_err(err)?,
        sampling: PairSampling::Auto,
    };
    let hom = ModelSpec::HomLrp {
        lattice: LatticeBox::free(2, 1024).map_err(err)?,
        params: HomLrpParams::model_one(1.0, 2.5).map_err(err)?,
        sampling: PairSampling::Auto,
    };
    let linear = ModelSpec::HomLrp {
        lattice: LatticeBox::free(1, 100_000).map_err(err)?,
        params: HomLrpParams::new(0.9, 30.0, 4.0).map_err(err)?,
        sampling: PairSampling::Auto,
    };
    let cells = vec![
        RegimeCell {
            label: "het tau=1.5".into(),
            spec: het,
            radii: vec![100.0, 300.0, 1e3, 3e3, 1e4, 3e4, 1e5],
        },
        RegimeCell {
            label: "hom d<alpha<2d".into(),
            spec: hom,
            radii: vec![10.0, 30.0, 100.0, 300.0, 600.0],
        },
        RegimeCell {
            label: "linear".into(),
            spec: linear,
            radii: vec![10.0, 30.0, 100.0, 300.0, 1e3, 3e3],
        },
    ];
    let expected = ["loglog", "polylog", "linear"];
    let fits = distance_regimes(&cells, 100, 1, SEED).map_err(err)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for (fit, want) in fits.iter().zip(expected) {
        ok &= fit.best.map(GrowthLaw::name) == Some(want)
            && fit.strict
            && !fit.insufficient
            && fit.medians.len() >= 3;
        parts.push(format!(
            "{}: {} (strict {})",
            fit.label,
            fit.best.map_or("none", GrowthLaw::name),
            fit.strict
        ));
    }
    Ok((ok, parts.join("; ")))
}

/// `ν ∫_{[−L/2, L/2]²} (1 − e^{−λ‖x‖^{−α}}) dx` by the midpoint rule on one
/// quadrant.
fn origin_degree_mean(nu: f64, lambda: f64, alpha: f64, side: f64) -> f64 {
    let n = 4000;
    let h = side / 2.0 / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        let x = (i as f64 + 0.5) * h;
        for j in 0..n {
            let y = (j as f64 + 0.5) * h;
            s += -(-lambda * (x * x + y * y).powf(-alpha / 2.0)).exp_m1();
        }
    }
    4.0 * nu * s * h * h
}

fn c10_thinned_poisson() -> Outcome {
    let params = ContinuumParams {
        d: 2,
        nu: 2.0,
        side: 60.0,
        lambda: 0.005,
        alpha: 3.0,
        beta: 1.0,
        homogeneous_marks: true,
        plant_origin: true,
    };
    let m = origin_degree_mean(params.nu, params.lambda, params.alpha, params.side);
    let mut hist = Vec::new();
    for r in 0..5000 {
        let g = gen_continuum(&params, RngStream::new(SEED, derive_stream(SEED, 10, r)))
            .map_err(err)?;
        let k = g.degree(0);
        if hist.len() <= k {
            hist.resize(k + 1, 0u64);
        }
        hist[k] += 1;
    }
    let tv = total_variation(&hist, |k| poisson_pmf(k, m));
    Ok((
        tv < 0.02,
        format!("TV to Poisson(m = {m:.4}) = {tv:.4} (< 0.02)"),
    ))
}

fn c11_box_clusters() -> Outcome {
    let lambdas = [1.0, 1.5, 2.0];
    let sides = [128, 256, 512, 1024];
    let report =
        box_cluster_scaling(1, 1.5, None, &lambdas, &sides, 2000, stream(11)).map_err(err)?;
    let mut ok = report.warning.is_none();
    let mut parts = Vec::new();
    for &side in &sides {
        let row: Vec<_> = report.rows.iter().filter(|r| r.side == side).collect();
        ok &= row.windows(2).all(|w| w[0].successes <= w[1].successes);
        let top = row.last().unwrap();
        ok &= top.frequency >= 0.9;
        parts.push(format!("N={side}: {:.3}", top.frequency));
    }
    Ok((
        ok,
        format!("frequency at λ=2 {}; monotone in λ", parts.join(", ")),
    ))
}

fn components_oracle(g: &Graph) -> Vec<usize> {
    let n = g.num_nodes();
    let mut reach = vec![vec![false; n]; n];
    for (x, row) in reach.iter_mut().enumerate() {
        row[x] = true;
        for &y in g.neighbors(x as u32) {
            row[y as usize] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    reach[i][j] |= reach[k][j];
                }
            }
        }
    }
    let mut sizes: Vec<usize> = (0..n)
        .map(|x| reach[x].iter().filter(|&&b| b).count())
        .collect();
    sizes.sort_unstable();
    sizes
}

fn c12_properties() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 500,
        ..Config::default()
    });
    let small = (1usize..13, 0.0..=1.0f64, any::<u64>());
    let mut failures = Vec::new();

    let det = runner.run(&small, |(n, p, seed)| {
        let spec = ModelSpec::Er(ErParams::new(n, p).unwrap());
        let rng = RngStream::new(seed, 0);
        prop_assert_eq!(
            spec.sample(rng).unwrap().edges(),
            spec.sample(rng).unwrap().edges()
        );
        Ok(())
    });
    failures.extend(det.err().map(|e| format!("determinism: {e}")));

    let sym = runner.run(
        &(2usize..13, 0.0..3.0f64, 0.5..4.0f64, any::<u64>()),
        |(side, l, a, seed)| {
            let spec = ModelSpec::HomLrp {
                lattice: LatticeBox::free(1, side).unwrap(),
                params: HomLrpParams::model_one(l, a).unwrap(),
                sampling: PairSampling::Exhaustive,
            };
            let g = spec.sample(RngStream::new(seed, 0)).unwrap();
            for x in 0..g.num_nodes() as u32 {
                for &y in g.neighbors(x) {
                    prop_assert!(y != x && g.neighbors(y).contains(&x));
                }
            }
            Ok(())
        },
    );
    failures.extend(sym.err().map(|e| format!("symmetry: {e}")));

    let mono = runner.run(
        &(
            2usize..13,
            0.01..3.0f64,
            0.5..4.0f64,
            0.3..3.0f64,
            any::<u64>(),
        ),
        |(side, l, a, b, seed)| {
            let lattice = LatticeBox::free(1, side).unwrap();
            let spec = |beta: f64| ModelSpec::HetLrp {
                lattice,
                params: HetLrpParams::new(l, a, beta).unwrap(),
                sampling: PairSampling::Exhaustive,
            };
            let sample = spec(b).sample_coupled(RngStream::new(seed, 0)).unwrap();
            let heavy: HashSet<_> = sample
                .realize(&spec(b))
                .unwrap()
                .edges()
                .into_iter()
                .collect();
            let light = sample.realize(&spec(b + 1.0)).unwrap().edges();
            prop_assert!(light.iter().all(|e| heavy.contains(e)));
            Ok(())
        },
    );
    failures.extend(mono.err().map(|e| format!("coupling: {e}")));

    let comps = runner.run(&small, |(n, p, seed)| {
        let g = ModelSpec::Er(ErParams::new(n, p).unwrap())
            .sample(RngStream::new(seed, 0))
            .unwrap();
        let labels = g.components();
        let mut uf = UnionFind::new(n);
        g.for_each_edge(|u, v| {
            uf.union(u, v);
        });
        let mut sizes: Vec<usize> = (0..n as u32).map(|x| uf.set_size(x)).collect();
        sizes.sort_unstable();
        let oracle = components_oracle(&g);
        prop_assert_eq!(&sizes, &oracle);
        prop_assert_eq!(labels.largest_size(), oracle.last().copied().unwrap_or(0));
        Ok(())
    });
    failures.extend(comps.err().map(|e| format!("components: {e}")));

    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            "determinism, symmetry, coupling and component oracle: 500 cases each".into()
        } else {
            failures.join("; ")
        },
    ))
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "ER Poisson limit",
        budget: Duration::from_secs(5),
        run: c1_er_poisson,
    },
    Criterion {
        id: 2,
        name: "ER giant component",
        budget: Duration::from_secs(30),
        run: c2_er_giant,
    },
    Criterion {
        id: 3,
        name: "NSW giant component",
        budget: Duration::from_secs(60),
        run: c3_nsw_giant,
    },
    Criterion {
        id: 4,
        name: "heavy-tail degree law",
        budget: Duration::from_secs(240),
        run: c4_degree_tail,
    },
    Criterion {
        id: 5,
        name: "critical probability",
        budget: Duration::from_secs(300),
        run: c5_critical_probability,
    },
    Criterion {
        id: 6,
        name: "phase-diagram signatures",
        budget: Duration::from_secs(900),
        run: c6_phase_signatures,
    },
    Criterion {
        id: 7,
        name: "distance exponent",
        budget: Duration::from_secs(1),
        run: c7_distance_exponent,
    },
    Criterion {
        id: 8,
        name: "bounded hops",
        budget: Duration::from_secs(120),
        run: c8_bounded_hops,
    },
    Criterion {
        id: 9,
        name: "regime separation",
        budget: Duration::from_secs(1200),
        run: c9_regime_separation,
    },
    Criterion {
        id: 10,
        name: "thinned Poisson degree",
        budget: Duration::from_secs(300),
        run: c10_thinned_poisson,
    },
    Criterion {
        id: 11,
        name: "box cluster scaling",
        budget: Duration::from_secs(600),
        run: c11_box_clusters,
    },
    Criterion {
        id: 12,
        name: "property suites",
        budget: Duration::from_secs(300),
        run: c12_properties,
    },
];

fn main() {
    let only: Option<HashSet<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut failed = Vec::new();
    for c in CRITERIA {
        if only.as_ref().is_some_and(|o| !o.contains(&c.id)) {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let (pass, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_time, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "criterion {:>2} {}: {}: {detail} [{:.1}s of {}s]",
            c.id,
            c.name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if !pass {
            failed.push(c.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
