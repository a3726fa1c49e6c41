use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use percolab::analysis::{
    bisect_critical, chemical_distance_profile, crossing_probability, default_kappa0,
    degree_summary, degree_tail, find_semi_clusters, renorm_goodness, CertificateDetail,
    RenormSchedule,
};
use percolab::experiments::{
    distance_regimes, phase_diagram, run_sweep, write_phase_csv, ExperimentConfig, PhaseConfig,
    RegimeCell,
};
use percolab::generators::DEFAULT_K_MAX;
use percolab::graph::edgelist;
use percolab::model::FreeParam;
use percolab::rng::purpose;
use percolab::theory::{
    benjamini_bound, classify_regime, distance_exponent, giant_fraction, loglog_upper_coefficient,
    DegreeLaw,
};
use percolab::{LatticeBox, ModelSpec, RngStream};
use serde_json::json;

use crate::model_args::ModelArgs;
use crate::{CliError, Outputs};

#[derive(Args, Debug)]
pub struct SeedArgs {
    /// Base seed of all randomness [default: random, printed]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Stream id under the seed
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

impl SeedArgs {
    fn rng(&self) -> RngStream {
        RngStream::new(resolve_seed(self.seed), self.stream)
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        println!("seed {s} (random)");
        s
    })
}

fn lattice_of(spec: &ModelSpec) -> Result<LatticeBox, CliError> {
    spec.lattice().cloned().ok_or_else(|| {
        CliError::Usage(format!(
            "invalid value for --model: {} is not a lattice model",
            spec.name()
        ))
    })
}

fn json_bytes(value: &impl serde::Serialize) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    v.push(b'\n');
    Ok(v)
}

fn csv_bytes(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Runtime(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn check_coords(flag: &str, coords: Option<Vec<usize>>, d: usize) -> Result<Vec<usize>, CliError> {
    match coords {
        None => Ok(vec![0; d]),
        Some(c) if c.len() == d => Ok(c),
        Some(c) => Err(CliError::Usage(format!(
            "invalid value for {flag}: {} coordinates for d = {d}",
            c.len()
        ))),
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Edge-list output file
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn gen(a: GenArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let spec = a.model.spec()?;
    let rng = a.seed.rng();
    let g = spec.sample(rng)?;
    println!(
        "{}: {} nodes, {} edges (seed {}, stream {})",
        spec.name(),
        g.num_nodes(),
        g.num_edges(),
        rng.seed,
        rng.stream
    );
    if let Some(out) = a.out {
        outputs.write(&out, edgelist::to_string(&g).as_bytes())?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct TheoryArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// JSON output file
    #[arg(long)]
    out: Option<PathBuf>,
}

fn only_keys(params: &BTreeMap<String, String>, allowed: &[&str]) -> Result<(), CliError> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(CliError::Usage(format!(
            "{} does not apply to `theory --model {}`",
            crate::model_args::flag_for(k),
            params["model"]
        ))),
        None => Ok(()),
    }
}

pub fn theory(a: TheoryArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let params = a.model.to_params()?;
    let m = &a.model;
    let report = match params["model"].as_str() {
        "er" | "nsw" => {
            let law = if params["model"] == "er" {
                only_keys(&params, &["model", "n", "p", "vartheta", "k_max"])?;
                let mean = match (m.vartheta, m.p, m.n) {
                    (Some(v), None, _) => v,
                    (None, Some(p), Some(n)) if (0.0..=1.0).contains(&p) => {
                        p * n.saturating_sub(1) as f64
                    }
                    (None, Some(p), Some(_)) => {
                        return Err(CliError::Usage(format!(
                            "invalid value for --p: {p} is outside [0, 1]"
                        )))
                    }
                    _ => {
                        return Err(CliError::Usage(
                            "er theory needs --vartheta, or --p with --n".into(),
                        ))
                    }
                };
                let k_max = m
                    .kmax
                    .unwrap_or_else(|| (mean + 20.0 * mean.sqrt() + 30.0).ceil() as usize);
                DegreeLaw::poisson(mean, k_max).map_err(|_| {
                    CliError::Usage(format!(
                        "invalid value for --vartheta: {mean} must be positive and finite"
                    ))
                })?
            } else {
                only_keys(&params, &["model", "tau", "k_max"])?;
                let tau = m
                    .tau
                    .ok_or_else(|| CliError::Usage("--tau is required for nsw".into()))?;
                DegreeLaw::power_law(tau, m.kmax.unwrap_or(DEFAULT_K_MAX))
                    .map_err(CliError::usage)?
            };
            let r = giant_fraction(&law).map_err(CliError::usage)?;
            println!("k_max   {}", r.k_max);
            println!("mu      {:.6}", r.mu);
            println!("vartheta {:.6}", r.vartheta);
            println!("z0      {:.6}", r.z0);
            println!("chi     {:.6}", r.chi);
            println!("phase   {:?}", r.phase);
            serde_json::to_value(&r).map_err(|e| CliError::Runtime(e.to_string()))?
        }
        "hom-lrp" | "het-lrp" => {
            let het = params["model"] == "het-lrp";
            only_keys(
                &params,
                if het {
                    &["model", "d", "alpha", "beta"]
                } else {
                    &["model", "d", "alpha"]
                },
            )?;
            let d = m.d.unwrap_or(1);
            let alpha = m
                .alpha
                .ok_or_else(|| CliError::Usage("--alpha is required".into()))?;
            let beta = if het {
                m.beta
                    .ok_or_else(|| CliError::Usage("--beta is required for het-lrp".into()))?
            } else {
                f64::INFINITY
            };
            let class = classify_regime(d, alpha, beta).map_err(CliError::usage)?;
            let delta = distance_exponent(d, alpha).ok();
            let hop_bound = benjamini_bound(d, alpha).ok();
            let loglog = loglog_upper_coefficient(d, alpha, beta).ok();
            println!("degree    {:?}", class.degree);
            println!("lambda_c  {:?}", class.lambda_c);
            println!("distance  {:?}", class.distance);
            if let Some(x) = delta {
                println!("Delta     {x:.6}");
            }
            if let Some(x) = hop_bound {
                println!("hop bound {x}");
            }
            if let Some(x) = loglog {
                println!("loglog coefficient bound {x:.6}");
            }
            json!({ "d": d, "alpha": alpha, "beta": if het { json!(beta) } else { json!(null) },
                    "class": class, "delta": delta, "hop_bound": hop_bound, "loglog_bound": loglog })
        }
        other => {
            return Err(CliError::Usage(format!(
            "invalid value for --model: theory supports er, nsw, hom-lrp and het-lrp, not {other}"
        )))
        }
    };
    if let Some(out) = a.out {
        outputs.write(&out, &json_bytes(&report)?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct DegreesArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Fraction of the largest degrees used by the Hill estimator, in (0, 0.2]
    #[arg(long, default_value_t = 0.05)]
    tail_fraction: f64,
    /// CSV output file: degree, count, survival
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn degrees(a: DegreesArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let spec = a.model.spec()?;
    if !(a.tail_fraction > 0.0 && a.tail_fraction <= 0.2) {
        return Err(CliError::Usage(format!(
            "invalid value for --tail-fraction: {} is outside (0, 0.2]",
            a.tail_fraction
        )));
    }
    let rng = a.seed.rng();
    let g = spec.sample(rng)?;
    let s = degree_summary(&g);
    println!(
        "nodes {}, mean degree {:.4}, max degree {}",
        s.num_nodes(),
        s.mean,
        s.max_degree()
    );
    match degree_tail(&g, a.tail_fraction, rng.substream(purpose::ANALYSIS)) {
        Ok(t) => println!(
            "tail exponent {:.4} from the top {} degrees",
            t.tau_hat, t.k_count
        ),
        Err(e) => println!("tail exponent n/a ({e})"),
    }
    if let Some(out) = a.out {
        let rows = s
            .histogram
            .iter()
            .zip(&s.survival)
            .enumerate()
            .map(|(k, (c, sv))| vec![k.to_string(), c.to_string(), sv.to_string()]);
        outputs.write(&out, &csv_bytes(&["degree", "count", "survival"], rows)?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ComponentsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// CSV output file: size, count (largest first)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn components(a: ComponentsArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let spec = a.model.spec()?;
    let g = spec.sample(a.seed.rng())?;
    let c = g.components();
    let n = g.num_nodes().max(1) as f64;
    println!(
        "{} components, largest {} ({:.4} of {} nodes)",
        c.num_components(),
        c.largest_size(),
        c.largest_size() as f64 / n,
        g.num_nodes()
    );
    if let Some(out) = a.out {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &s in &c.sizes {
            *counts.entry(s).or_default() += 1;
        }
        let rows = counts
            .iter()
            .rev()
            .map(|(s, k)| vec![s.to_string(), k.to_string()]);
        outputs.write(&out, &csv_bytes(&["size", "count"], rows)?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Spatial radii, comma separated, in lattice or length units
    #[arg(long, value_delimiter = ',', required = true)]
    radii: Vec<f64>,
    /// Pairs sampled per radius
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    /// CSV output file: radius, pairs, median, q1, q3 (hops)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn distance(a: DistanceArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let spec = a.model.spec()?;
    if a.pairs == 0 {
        return Err(CliError::Usage(
            "invalid value for --pairs: must be at least 1".into(),
        ));
    }
    let prof =
        chemical_distance_profile(&spec, &a.radii, a.pairs, a.seed.rng()).map_err(|e| match e {
            percolab::Error::InvalidParameter { .. } => CliError::usage(e),
            other => other.into(),
        })?;
    println!("largest component {} nodes", prof.largest_component);
    println!(
        "{:>10} {:>6} {:>8} {:>6} {:>6}",
        "radius", "pairs", "median", "q1", "q3"
    );
    for r in &prof.rows {
        println!(
            "{:>10} {:>6} {:>8} {:>6} {:>6}",
            r.radius,
            r.pairs,
            opt(r.median),
            opt(r.q1),
            opt(r.q3)
        );
    }
    if let Some(out) = a.out {
        let rows = prof.rows.iter().map(|r| {
            vec![
                r.radius.to_string(),
                r.pairs.to_string(),
                opt(r.median),
                opt(r.q1),
                opt(r.q3),
            ]
        });
        outputs.write(
            &out,
            &csv_bytes(&["radius", "pairs", "median", "q1", "q3"], rows)?,
        )?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct CrossingArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Independent samples
    #[arg(long, default_value_t = 100)]
    replicates: usize,
    /// JSON output file
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn crossing(a: CrossingArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let spec = a.model.spec()?;
    let lattice = lattice_of(&spec)?;
    if a.replicates == 0 {
        return Err(CliError::Usage(
            "invalid value for --replicates: must be at least 1".into(),
        ));
    }
    let e = crossing_probability(&spec, &lattice, a.replicates, a.seed.rng())?;
    println!(
        "crossing probability {:.4} ({} of {}), 95% CI [{:.4}, {:.4}]",
        e.probability, e.successes, e.replicates, e.ci.0, e.ci.1
    );
    if let Some(out) = a.out {
        outputs.write(&out, &json_bytes(&e)?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct BisectArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Parameter to bisect: p | lambda
    #[arg(long, default_value = "p")]
    param: String,
    /// Lower end of the bracket
    #[arg(long)]
    lo: f64,
    /// Upper end of the bracket
    #[arg(long)]
    hi: f64,
    /// Crossing probability to locate, in (0, 1)
    #[arg(long, default_value_t = 0.5)]
    target: f64,
    /// Stop once the bracket is narrower than this, in parameter units
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    /// Samples per evaluation
    #[arg(long, default_value_t = 200)]
    replicates: usize,
    /// JSON output file
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn bisect(a: BisectArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let which: FreeParam = a.param.parse().map_err(CliError::usage)?;
    // The bisected parameter need not be given; it starts at the upper end.
    let mut model = a.model.clone();
    match which {
        FreeParam::P if model.p.is_none() => model.p = Some(a.hi),
        FreeParam::Lambda if model.lambda.is_none() => model.lambda = Some(a.hi),
        _ => {}
    }
    let spec = model.spec()?;
    let lattice = lattice_of(&spec)?;
    if spec.param(which).is_none() {
        return Err(CliError::Usage(format!(
            "invalid value for --param: {} has no parameter {}",
            spec.name(),
            a.param
        )));
    }
    if a.replicates == 0 {
        return Err(CliError::Usage(
            "invalid value for --replicates: must be at least 1".into(),
        ));
    }
    let r = bisect_critical(
        &spec,
        &lattice,
        which,
        (a.lo, a.hi),
        a.target,
        a.tol,
        a.replicates,
        a.seed.rng(),
    )
    .map_err(|e| match e {
        percolab::Error::InvalidParameter { .. } => CliError::usage(e),
        other => other.into(),
    })?;
    for (v, e) in &r.steps {
        println!("{} = {v:.5}: crossing {:.4}", a.param, e.probability);
    }
    println!("estimate {:.5} in [{:.5}, {:.5}]", r.estimate, r.lo, r.hi);
    if let Some(out) = a.out {
        outputs.write(&out, &json_bytes(&r)?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct SemiclusterArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Box side M, in lattice sites
    #[arg(long = "M")]
    m: usize,
    /// Enlargement K, in lattice sites per side
    #[arg(long = "K", default_value_t = 0)]
    k: usize,
    /// Minimum semi-cluster size ℓ, in sites
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Lowest corner of the box, comma-separated lattice coordinates [default: origin]
    #[arg(long, value_delimiter = ',')]
    origin: Option<Vec<usize>>,
    /// JSON output file
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn semicluster(a: SemiclusterArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let spec = a.model.spec()?;
    let lattice = lattice_of(&spec)?;
    let origin = check_coords("--origin", a.origin, lattice.d())?;
    let g = spec.sample(a.seed.rng())?;
    let clusters =
        find_semi_clusters(&g, &lattice, &origin, a.m, a.k, a.ell).map_err(CliError::usage)?;
    let sizes: Vec<usize> = clusters.iter().map(|c| c.members.len()).collect();
    println!(
        "{} semi-clusters of at least {} sites, sizes {:?}",
        clusters.len(),
        a.ell,
        sizes
    );
    if let Some(out) = a.out {
        outputs.write(&out, &json_bytes(&clusters)?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct RenormArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    /// Stage-0 box side M, in lattice sites
    #[arg(long = "M")]
    m: usize,
    /// Enlargement K, in lattice sites per side
    #[arg(long = "K", default_value_t = 0)]
    k: usize,
    /// Growth exponent δ of the sub-boxes per axis, a_n = ⌊(n+1)^δ⌋
    #[arg(long, default_value_t = 2.0)]
    delta: f64,
    /// Decay exponent ϑ of the density requirement κ_n = (n+1)^{−ϑ}, in (1, δ)
    #[arg(long, default_value_t = 1.5)]
    theta_renorm: f64,
    /// Stage-0 density requirement κ_0 in (0, 1] [default: half the largest-component density]
    #[arg(long)]
    kappa0: Option<f64>,
    /// Number of stages above stage 0
    #[arg(long, default_value_t = 1)]
    stages: usize,
    /// Multi-index of the top-stage box, comma separated [default: origin]
    #[arg(long = "box", value_delimiter = ',')]
    box_index: Option<Vec<usize>>,
    /// JSON output file
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn renorm(a: RenormArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let spec = a.model.spec()?;
    let lattice = lattice_of(&spec)?;
    let v = check_coords("--box", a.box_index, lattice.d())?;
    RenormSchedule::new(
        a.m,
        a.k,
        a.delta,
        a.theta_renorm,
        a.kappa0.unwrap_or(0.5),
        a.stages,
    )
    .map_err(CliError::usage)?;
    let g = spec.sample(a.seed.rng())?;
    let kappa0 = a.kappa0.unwrap_or_else(|| default_kappa0(&g));
    let schedule = RenormSchedule::new(a.m, a.k, a.delta, a.theta_renorm, kappa0, a.stages)?;
    let cert = renorm_goodness(&g, &lattice, &schedule, a.stages, &v).map_err(CliError::usage)?;
    println!(
        "stage {} box at {:?} (side {}): {}",
        cert.stage,
        cert.origin,
        schedule.side(a.stages),
        if cert.good { "good" } else { "bad" }
    );
    match &cert.detail {
        CertificateDetail::Base { threshold, large } => {
            println!("large semi-clusters (>= {threshold:.1} sites): {large:?}")
        }
        CertificateDetail::Stage {
            required,
            children,
            connected,
        } => println!(
            "good sub-boxes {} of {} (need {required:.1}), connected {connected}",
            cert.good_children().len(),
            children.len()
        ),
    }
    if let Some(out) = a.out {
        outputs.write(
            &out,
            &json_bytes(&json!({ "kappa0": kappa0, "schedule": schedule, "certificate": cert }))?,
        )?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Config file of `key = value` lines
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's replicates per grid point
    #[arg(long)]
    replicates: Option<usize>,
    /// Override the config's output prefix; writes <out>.csv and <out>.summary.json
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn sweep(a: SweepArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.config).map_err(|e| {
        CliError::Usage(format!(
            "invalid value for --config: {}: {e}",
            a.config.display()
        ))
    })?;
    let mut map = ExperimentConfig::parse(&text)
        .map_err(CliError::usage)?
        .to_map();
    if let Some(s) = a.seed {
        map.insert("seed".into(), s.to_string());
    }
    if let Some(r) = a.replicates {
        map.insert("replicates".into(), r.to_string());
    }
    if let Some(o) = &a.out {
        map.insert("out".into(), o.display().to_string());
    }
    let config = ExperimentConfig::from_map(map).map_err(CliError::usage)?;
    let prefix = config.out.display().to_string();
    outputs.track(PathBuf::from(format!("{prefix}.csv")));
    outputs.track(PathBuf::from(format!("{prefix}.summary.json")));
    let result = run_sweep(&config)?;
    let na = result.records.iter().filter(|r| r.value.is_none()).count();
    println!(
        "{} grid points x {} replicates: {} rows, {} NA",
        config.num_points(),
        config.replicates,
        result.records.len(),
        na
    );
    println!(
        "wrote {} and {}",
        result.csv_path.display(),
        result.summary_path.display()
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct PhaseArgs {
    /// Lattice dimension
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Distance exponents α, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Weight tail exponents β, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    beta: Vec<f64>,
    /// Intensities λ, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<f64>,
    /// Box sides, comma separated, in lattice sites
    #[arg(long, value_delimiter = ',', required = true)]
    sides: Vec<usize>,
    /// Samples per (cell, side)
    #[arg(long, default_value_t = 200)]
    replicates: usize,
    /// Base seed [default: random, printed]
    #[arg(long)]
    seed: Option<u64>,
    /// One-sided significance level of the size-trend test
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    /// CSV output file, one row per (cell, λ, side)
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn phase(a: PhaseArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    if a.replicates == 0 {
        return Err(CliError::Usage(
            "invalid value for --replicates: must be at least 1".into(),
        ));
    }
    for &alpha in &a.alpha {
        for &beta in &a.beta {
            classify_regime(a.d, alpha, beta).map_err(CliError::usage)?;
        }
    }
    for &l in &a.lambda {
        if !(l > 0.0 && l.is_finite()) {
            return Err(CliError::Usage(format!(
                "invalid value for --lambda: {l} must be positive"
            )));
        }
    }
    if a.sides.len() < 2 || a.sides.contains(&0) {
        return Err(CliError::Usage(
            "invalid value for --sides: need at least two positive sides".into(),
        ));
    }
    let config = PhaseConfig {
        d: a.d,
        alphas: a.alpha,
        betas: a.beta,
        lambdas: a.lambda,
        sides: a.sides,
        replicates: a.replicates,
        seed: resolve_seed(a.seed),
        level: a.level,
    };
    let cells = phase_diagram(&config).map_err(|e| match e {
        percolab::Error::InvalidParameter { .. } => CliError::usage(e),
        other => other.into(),
    })?;
    for c in &cells {
        let agree = match c.agrees {
            Some(true) => "agree",
            Some(false) => "disagree",
            None => "BOUNDARY",
        };
        println!(
            "alpha {} beta {}: signature {:?}, predicted {:?}, {agree}",
            c.alpha, c.beta, c.signature, c.predicted
        );
    }
    if let Some(out) = a.out {
        let mut bytes = Vec::new();
        write_phase_csv(&config, &cells, &mut bytes)?;
        outputs.write(&out, &bytes)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct DistancesArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Spatial radii, comma separated, in lattice units; at least three, all above e
    #[arg(long, value_delimiter = ',', required = true)]
    radii: Vec<f64>,
    /// Pairs sampled per radius and replicate
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    /// Independent samples pooled per radius
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    /// Base seed [default: random, printed]
    #[arg(long)]
    seed: Option<u64>,
    /// JSON output file with medians and fits
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn distances(a: DistancesArgs, outputs: &mut Outputs) -> Result<(), CliError> {
    let spec = a.model.spec()?;
    if a.pairs == 0 || a.replicates == 0 {
        return Err(CliError::Usage(
            "invalid value for --pairs/--replicates: must be at least 1".into(),
        ));
    }
    let cell = RegimeCell {
        label: spec.name().to_string(),
        spec,
        radii: a.radii,
    };
    let fits = distance_regimes(
        std::slice::from_ref(&cell),
        a.pairs,
        a.replicates,
        resolve_seed(a.seed),
    )
    .map_err(|e| match e {
        percolab::Error::InvalidParameter { .. } => CliError::usage(e),
        other => other.into(),
    })?;
    let fit = &fits[0];
    println!(
        "predicted {:?}, polylog exponent {:.4}",
        fit.predicted, fit.delta
    );
    for m in &fit.medians {
        println!(
            "r = {:>10}: {:>5} pairs, median {}",
            m.radius,
            m.pairs,
            opt(m.median)
        );
    }
    if fit.insufficient {
        println!("INSUFFICIENT: fewer than 30 pairs at some radius");
    }
    for f in &fit.fits {
        println!(
            "{:<8} a {:>9.4} b {:>9.4} loo rmse {:.4}",
            f.law.name(),
            f.a,
            f.b,
            f.loo_rmse
        );
    }
    if let Some(best) = fit.best {
        println!(
            "best {} ({}), agrees {:?}",
            best.name(),
            if fit.strict { "strict" } else { "tied" },
            fit.agrees
        );
    }
    if let Some(out) = a.out {
        outputs.write(&out, &json_bytes(fit)?)?;
    }
    Ok(())
}
