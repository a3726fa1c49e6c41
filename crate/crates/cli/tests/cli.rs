use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SUBCOMMANDS: &[&str] = &[
    "gen",
    "theory",
    "degrees",
    "components",
    "distance",
    "crossing",
    "bisect",
    "semicluster",
    "renorm",
    "sweep",
    "phase",
    "distances",
];

fn percolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_percolab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Compares every `--help` page with its golden file. Run with
/// `UPDATE_GOLDEN=1` to rewrite them.
#[test]
fn help_pages_match_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut pages = vec![("percolab".to_string(), vec!["--help"])];
    pages.extend(
        SUBCOMMANDS
            .iter()
            .map(|s| (s.to_string(), vec![*s, "--help"])),
    );
    for (name, args) in pages {
        let o = percolab(&args);
        assert!(o.status.success(), "{name} --help failed");
        let path = dir.join(format!("{name}.txt"));
        if update {
            fs::create_dir_all(&dir).unwrap();
            fs::write(&path, &o.stdout).unwrap();
        }
        let golden = fs::read_to_string(&path)
            .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        assert_eq!(stdout(&o), golden, "help of {name} changed");
    }
}

#[test]
fn help_lists_units_and_defaults() {
    let o = percolab(&["renorm", "--help"]);
    let text = stdout(&o);
    for needle in [
        "--K <K>",
        "--M <M>",
        "--delta",
        "--theta-renorm",
        "--stages",
        "[default: 1.5]",
        "lattice sites",
    ] {
        assert!(text.contains(needle), "renorm help lacks {needle}");
    }
    let text = stdout(&percolab(&["distance", "--help"]));
    assert!(
        text.contains("--radii") && text.contains("--pairs") && text.contains("[default: 100]")
    );
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        let o = percolab(&[
            "gen",
            "--model",
            "er",
            "--n",
            "100",
            "--p",
            "0.05",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert_eq!(a, b);
    assert!(a.starts_with(b"# nodes=100"));
}

#[test]
fn usage_errors_name_the_flag() {
    let o = percolab(&["gen", "--model", "er", "--n", "100", "--p", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--p"), "{}", stderr(&o));

    let o = percolab(&[
        "gen", "--model", "er", "--n", "100", "--p", "0.1", "--kmax", "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--kmax"), "{}", stderr(&o));

    let o = percolab(&[
        "gen", "--model", "er", "--n", "10", "--p", "0.1", "--bogus", "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--bogus"));

    let o = percolab(&[
        "crossing", "--model", "er", "--n", "10", "--p", "0.1", "--seed", "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--model"));

    let o = percolab(&["gen", "--model", "hom-lrp", "--side", "10", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--lambda"), "{}", stderr(&o));
}

#[test]
fn runtime_failure_exits_2_and_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    // The output path is an existing directory, so the final rename fails.
    let out = dir.path().join("taken");
    fs::create_dir(&out).unwrap();
    fs::write(out.join("keep"), b"x").unwrap();
    let o = percolab(&[
        "gen",
        "--model",
        "er",
        "--n",
        "50",
        "--p",
        "0.1",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names, vec![std::ffi::OsString::from("taken")]);
}

#[test]
fn missing_seed_is_drawn_and_printed() {
    let o = percolab(&["components", "--model", "er", "--n", "50", "--p", "0.05"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let seed: u64 = text
        .lines()
        .find_map(|l| {
            l.strip_prefix("seed ")
                .and_then(|r| r.split_whitespace().next())
        })
        .expect("seed line")
        .parse()
        .unwrap();
    let again = percolab(&[
        "components",
        "--model",
        "er",
        "--n",
        "50",
        "--p",
        "0.05",
        "--seed",
        &seed.to_string(),
    ]);
    assert_eq!(text.lines().last(), stdout(&again).lines().last());
}

fn theory_json(args: &[&str]) -> serde_json::Value {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let mut all = vec!["theory"];
    all.extend_from_slice(args);
    all.extend(["--out", out.to_str().unwrap()]);
    let o = percolab(&all);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_slice(&fs::read(out).unwrap()).unwrap()
}

#[test]
fn theory_nsw_matches_series() {
    let v = theory_json(&["--model", "nsw", "--tau", "2.5", "--kmax", "100000"]);
    let g: Vec<f64> = (1..=100_000u32).map(|k| (k as f64).powf(-3.5)).collect();
    let total: f64 = g.iter().sum();
    let mu: f64 = g
        .iter()
        .enumerate()
        .map(|(i, w)| (i + 1) as f64 * w)
        .sum::<f64>()
        / total;
    let second: f64 = g
        .iter()
        .enumerate()
        .map(|(i, w)| ((i + 1) * i) as f64 * w)
        .sum::<f64>()
        / total;
    assert!((v["mu"].as_f64().unwrap() - mu).abs() < 1e-9);
    assert!((v["vartheta"].as_f64().unwrap() - second / mu).abs() < 1e-9);
    // ϑ < 1: no giant component
    assert!(second / mu < 1.0);
    assert_eq!(v["z0"].as_f64(), Some(1.0));
    assert_eq!(v["chi"].as_f64(), Some(0.0));
}

#[test]
fn theory_er_matches_poisson_fixed_point() {
    let v = theory_json(&["--model", "er", "--vartheta", "2"]);
    // χ = 1 − e^{−2χ}, solved by bisection
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if 1.0 - (-2.0 * mid).exp() > mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((v["chi"].as_f64().unwrap() - lo).abs() < 1e-6, "{v}");
    assert!((v["vartheta"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn theory_regime_table() {
    let v = theory_json(&["--model", "hom-lrp", "--d", "2", "--alpha", "2.5"]);
    assert!((v["delta"].as_f64().unwrap() - 1.4748).abs() < 1e-4);
    assert_eq!(v["class"]["distance"]["class"], "poly_log");
}

#[test]
fn sweep_rerun_is_byte_identical_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let prefix = dir.path().join("res/run");
    fs::write(
        &cfg,
        format!(
            "model = er\nn = 60\ngrid.p = 0.02, 0.05\nreplicates = 2\nseed = 3\nobservables = edges, components\nout = {}\n",
            prefix.display()
        ),
    )
    .unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["sweep", "--config", cfg.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = percolab(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(dir.path().join("res/run.csv")).unwrap()
    };
    let first = run(&[]);
    assert_eq!(first, run(&[]));
    assert_eq!(
        String::from_utf8_lossy(&first).lines().count(),
        1 + 2 * 2 * 2
    );
    assert_ne!(first, run(&["--seed", "4"]));
    assert!(dir.path().join("res/run.summary.json").exists());
}

#[test]
fn lattice_commands_run() {
    let cases: &[&[&str]] = &[
        &[
            "crossing",
            "--model",
            "nn-bond",
            "--d",
            "2",
            "--side",
            "16",
            "--p",
            "0.9",
            "--seed",
            "1",
            "--replicates",
            "20",
        ],
        &[
            "semicluster",
            "--model",
            "nn-bond",
            "--d",
            "2",
            "--n",
            "16",
            "--p",
            "0.7",
            "--seed",
            "1",
            "--M",
            "8",
            "--K",
            "2",
        ],
        &[
            "renorm", "--model", "hom-lrp", "--side", "512", "--lambda", "2", "--alpha", "1.5",
            "--seed", "1", "--M", "8",
        ],
        &[
            "distance", "--model", "hom-lrp", "--d", "2", "--side", "64", "--lambda", "1",
            "--alpha", "1", "--seed", "1", "--radii", "20,40",
        ],
        &[
            "degrees", "--model", "nn-bond", "--d", "2", "--side", "16", "--p", "0.5", "--seed",
            "1",
        ],
    ];
    for args in cases {
        let o = percolab(args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    }
    let o = percolab(&[
        "crossing",
        "--model",
        "nn-bond",
        "--d",
        "2",
        "--side",
        "16",
        "--p",
        "1",
        "--seed",
        "1",
        "--replicates",
        "5",
    ]);
    assert!(stdout(&o).contains("crossing probability 1.0000"));
}
