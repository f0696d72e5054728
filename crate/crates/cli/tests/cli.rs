use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const TOY: &str = "2 1 1\n2 3 1\n3 2 9\n3 6 9\n4 1 1\n4 5 1\n5 4 9\n5 6 9\n";

fn bhrank(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhrank"))
        .current_dir(dir)
        .env_remove("BHRANK_OUT_DIR")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// `(label, score)` rows of a rank CSV.
fn scores(path: &Path) -> Vec<(String, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("node_label"))
        .map(|l| {
            let mut f = l.split(',');
            (f.next().unwrap().to_owned(), f.next().unwrap().parse().unwrap())
        })
        .collect()
}

#[test]
fn rank_both_on_toy() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("toy.edges"), TOY).unwrap();
    let out = bhrank(
        dir.path(),
        &[
            "rank",
            "--metric",
            "both",
            "--d",
            "0.85",
            "--bounds",
            "0:10",
            "--integer-ids",
            "toy.edges",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("p_b = 0.2286"));
    assert!(stdout(&out).contains("wariness = 0.8164"));

    let pr = scores(&dir.path().join("pagerank.csv"));
    let expected = [0.208, 0.146, 0.146, 0.146, 0.146, 0.208];
    for ((label, p), (i, e)) in pr.iter().zip(expected.iter().enumerate()) {
        assert_eq!(label, &(i + 1).to_string());
        assert!((p - e).abs() < 1e-3);
    }
    let bh = scores(&dir.path().join("blackhole.csv"));
    let expected = [0.110, 0.138, 0.104, 0.138, 0.104, 0.178];
    for ((_, p), e) in bh.iter().zip(expected) {
        assert!((p - e).abs() < 1e-3);
    }
    let header = fs::read_to_string(dir.path().join("blackhole.csv")).unwrap();
    assert!(header.starts_with("# d=0.85,tol=1e-10,"));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("toy.edges"), TOY).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_bhrank"))
        .current_dir(dir.path())
        .env("BHRANK_OUT_DIR", "ranks")
        .args(["rank", "--metric", "pagerank", "toy.edges"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("ranks/pagerank.csv").exists());
    assert!(!dir.path().join("ranks/blackhole.csv").exists());
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.edges"), "# nothing\n").unwrap();
    fs::write(dir.path().join("heavy.edges"), "a b 12\nb a 3\n").unwrap();

    let out = bhrank(dir.path(), &["rank", "--metric", "pagerank", "empty.edges"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no arcs"));

    let out = bhrank(
        dir.path(),
        &["rank", "--metric", "blackhole", "--bounds", "0:10", "heavy.edges"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("12"), "{}", stderr(&out));

    let out = bhrank(dir.path(), &["rank", "--metric", "blackhole", "heavy.edges"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--bounds"));

    let out = bhrank(dir.path(), &["rank", "--d", "1", "--bounds", "0:20", "heavy.edges"]);
    assert_eq!(out.status.code(), Some(1));

    let out = bhrank(dir.path(), &["rank", "--bounds", "0-10", "heavy.edges"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_convergence_exits_two_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("toy.edges"), TOY).unwrap();
    let out = bhrank(
        dir.path(),
        &["rank", "--bounds", "0:10", "--max-iters", "3", "toy.edges"],
    );
    assert_eq!(out.status.code(), Some(2));
    let csv = fs::read_to_string(dir.path().join("blackhole.csv")).unwrap();
    assert!(csv.contains("converged=false"));
}

#[test]
fn generate_is_deterministic_and_ranks_through_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        [
            "generate",
            "er",
            "--n",
            "1000",
            "--mean-out",
            "10",
            "--weights",
            "0:49",
            "--seed",
            "42",
            "--out",
            out,
        ]
    };
    assert!(bhrank(dir.path(), &args("a.edges")).status.success());
    assert!(bhrank(dir.path(), &args("b.edges")).status.success());
    let a = fs::read(dir.path().join("a.edges")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.edges")).unwrap());
    assert!(!a.is_empty());

    let out = bhrank(
        dir.path(),
        &[
            "rank",
            "--bounds-file",
            "a.edges.meta",
            "--out-dir",
            "r",
            "--zero-strength-as-sink",
            "a.edges",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(scores(&dir.path().join("r/blackhole.csv")).len(), 1000);
}

#[test]
fn generate_sf_rejects_unreachable_spec() {
    let dir = tempfile::tempdir().unwrap();
    let out = bhrank(
        dir.path(),
        &["generate", "sf", "--alpha", "0", "--beta", "1", "--gamma", "0"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cannot add nodes"));
}

#[test]
fn generate_sf_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = bhrank(dir.path(), &["generate", "sf", "--n", "200", "--seed", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().count() > 200);
    assert!(text.lines().all(|l| l.split(' ').count() == 3));
}

#[test]
fn scaling_experiment_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = bhrank(
        dir.path(),
        &[
            "experiment",
            "scaling",
            "--family",
            "er",
            "--n",
            "300",
            "--seed",
            "5",
            "--out-dir",
            "rep",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let rep = dir.path().join("rep");
    for f in [
        "cdf_pr_bh1.csv",
        "cdf_pr_bh2.csv",
        "cdf_bh1_bh2.csv",
        "rank_pr.csv",
        "rank_bh1.csv",
        "rank_bh2.csv",
    ] {
        assert!(rep.join(f).exists(), "{f}");
    }
    let manifest = fs::read_to_string(rep.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"seed\": \"5\""));
    assert!(manifest.contains("\"d\": 0.85"));

    // same flags reproduce the same CDFs
    let again = bhrank(
        dir.path(),
        &[
            "experiment",
            "scaling",
            "--family",
            "er",
            "--n",
            "300",
            "--seed",
            "5",
            "--out-dir",
            "rep2",
        ],
    );
    assert!(again.status.success());
    assert_eq!(
        fs::read(rep.join("cdf_pr_bh2.csv")).unwrap(),
        fs::read(dir.path().join("rep2/cdf_pr_bh2.csv")).unwrap()
    );
}

#[test]
fn scaling_experiment_on_input_needs_factor() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("toy.edges"), TOY).unwrap();
    let out = bhrank(
        dir.path(),
        &["experiment", "scaling", "--input", "toy.edges", "--full-bounds", "0:20"],
    );
    assert_eq!(out.status.code(), Some(1));
    let out = bhrank(
        dir.path(),
        &[
            "experiment",
            "scaling",
            "--input",
            "toy.edges",
            "--full-bounds",
            "0:20",
            "--factor",
            "2",
            "--out-dir",
            "o",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn advogato_on_a_small_konect_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("out.trust"),
        "% sym weighted\n1 2 1.0\n2 1 0.6\n1 3 0.8\n3 1 1.0\n2 3 0.6\n3 3 1.0\n",
    )
    .unwrap();
    fs::write(dir.path().join("names"), "1 ann\n2 bob\n3 cy\n").unwrap();
    let out = bhrank(
        dir.path(),
        &[
            "experiment",
            "advogato",
            "--data",
            "out.trust",
            "--labels",
            "names",
            "--top",
            "3",
            "--out-dir",
            "adv",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("ann") && text.contains("bob") && text.contains("cy"));
    assert!(dir.path().join("adv/cdf_pr_bh.csv").exists());
}

#[test]
fn wariness_prints_a_number() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cycle.edges"), "a b 0\nb a 0\n").unwrap();
    let out = bhrank(dir.path(), &["wariness", "--bounds", "0:1", "cycle.edges"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let w: f64 = stdout(&out).trim().parse().unwrap();
    assert!((w - 1.0).abs() < 1e-9);
}
