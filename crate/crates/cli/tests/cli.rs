//! End-to-end tests of the `mecsize` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mecsize"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_tmp(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mecsize-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn dsep_reports_separation_and_connection() {
    let dir = tmpdir("dsep");
    let chain = write_tmp(&dir, "chain.graph", "# kind=dag n=3\n1 -> 2\n2 -> 3\n");
    let out = run(&["dsep", chain.to_str().unwrap(), "--x", "1", "--y", "3", "--given", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "separated");

    let out = run(&["dsep", chain.to_str().unwrap(), "--x", "1", "--y", "3", "--oracle"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "connected");
}

#[test]
fn equiv_crosses_kinds_and_supports_fast_mode() {
    let dir = tmpdir("equiv");
    let s = write_tmp(&dir, "s.graph", "# kind=admg n=3\n1 -> 2\n2 -> 3\n2 <-> 3\n");
    let sbar = write_tmp(
        &dir,
        "sbar.graph",
        "# kind=admg n=3\n1 -> 2\n1 -> 3\n2 -> 3\n2 <-> 3\n",
    );
    let out = run(&["equiv", s.to_str().unwrap(), sbar.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "equivalent");

    let chain = write_tmp(&dir, "chain.graph", "# kind=dag n=3\n1 -> 2\n2 -> 3\n");
    let collider = write_tmp(&dir, "collider.graph", "# kind=dag n=3\n1 -> 2\n3 -> 2\n");
    let out = run(&["equiv", chain.to_str().unwrap(), collider.to_str().unwrap(), "--fast"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "not-equivalent");
}

#[test]
fn mec_prints_size_and_members() {
    let dir = tmpdir("mec");
    let chain = write_tmp(&dir, "chain.graph", "# kind=dag n=3\n1 -> 2\n2 -> 3\n");
    let out = run(&["mec", chain.to_str().unwrap(), "--members"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("size=3"));
    assert_eq!(text.lines().count(), 4);

    let out = run(&["mec", chain.to_str().unwrap(), "--oracle"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("size=3"));
}

#[test]
fn bound_prints_certificates_per_kind() {
    let dir = tmpdir("bound");
    let dcg = write_tmp(
        &dir,
        "two_triangles.graph",
        "# kind=dcg n=6\n1 -> 2\n2 -> 3\n3 -> 1\n4 -> 5\n5 -> 6\n6 -> 4\n",
    );
    let out = run(&["bound", dcg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("cycle 1,2,3"));
    assert!(text.contains("cycle 4,5,6"));
    assert!(text.contains("log2_mec_lower_bound=2"));

    let sbar = write_tmp(
        &dir,
        "sbar.graph",
        "# kind=admg n=3\n1 -> 2\n1 -> 3\n2 -> 3\n2 <-> 3\n",
    );
    let out = run(&["bound", sbar.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("log2_mec_lower_bound=1"));
}

#[test]
fn reverse_writes_the_transformed_graph() {
    let dir = tmpdir("reverse");
    let g = write_tmp(
        &dir,
        "g.graph",
        "# kind=dcg n=4\n1 -> 2\n2 -> 3\n3 -> 1\n4 -> 2\n",
    );
    let out_path = dir.join("h.graph");
    let out = run(&[
        "reverse",
        g.to_str().unwrap(),
        "--cycle",
        "1,2,3",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(
        written,
        "# kind=dcg n=4\n1 -> 3\n2 -> 1\n3 -> 2\n4 -> 1\n"
    );
}

#[test]
fn sample_single_and_batch_are_reproducible() {
    let dir = tmpdir("sample");
    let single = dir.join("one.graph");
    let out = run(&[
        "sample", "--kind", "dag", "--n", "12", "--p", "0.2", "--seed", "7", "-o",
        single.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let first = std::fs::read_to_string(&single).unwrap();
    let out = run(&[
        "sample", "--kind", "dag", "--n", "12", "--p", "0.2", "--seed", "7", "-o",
        single.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(first, std::fs::read_to_string(&single).unwrap());

    let batch = dir.join("batch");
    let out = run(&[
        "sample", "--kind", "dcg", "--n", "6", "--seed", "3", "--trials", "4", "-o",
        batch.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mut names: Vec<String> = std::fs::read_dir(&batch)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, vec![
        "trial-00000.graph",
        "trial-00001.graph",
        "trial-00002.graph",
        "trial-00003.graph"
    ]);

    // Rejection sampling agrees in distribution; here just check it runs.
    let rej = dir.join("rej.graph");
    let out = run(&[
        "sample", "--kind", "dag", "--n", "6", "--p", "0.3", "--seed", "9", "--method",
        "rejection", "-o", rej.to_str().unwrap(),
    ]);
    assert!(out.status.success());
}

#[test]
fn census_csv_output_is_stable() {
    let dir = tmpdir("census");
    let path = dir.join("census.csv");
    let out = run(&["census", "--max-n", "3", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("# mecsize-census-v1\n"));
    assert!(body.contains("\n3,25,11,"));

    let out = run(&["census", "--max-n", "2", "--format", "json"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"dag_count\": 3"));
}

#[test]
fn scaling_and_tails_run_at_toy_scale() {
    let dir = tmpdir("scaling");
    let path = dir.join("scaling.csv");
    let out = run(&[
        "scaling", "--n", "20,40", "--p-rule", "c/n", "--c", "6", "--trials", "3", "--seed",
        "1", "-o", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("# mecsize-scaling-v1\n"));
    assert_eq!(body.lines().count(), 2 + 6);

    let out = run(&["tails", "--n", "40", "--p", "0.2", "--trials", "10", "--seed", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("h1<=5/p"));
}

#[test]
fn verify_exit_code_reflects_outcomes() {
    let dir = tmpdir("verify");
    let out = bin()
        .current_dir(&dir)
        .args(["verify", "--suite", "dsep-oracle", "--trials", "5", "--seed", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("suite dsep-oracle: PASS"));
}

#[test]
fn env_variable_overrides_the_signature_cap() {
    let dir = tmpdir("envcap");
    let chain = write_tmp(&dir, "chain.graph", "# kind=dag n=3\n1 -> 2\n2 -> 3\n");
    let out = bin()
        .env("MECSIZE_SIGNATURE_CAP", "2")
        .args(["equiv", chain.to_str().unwrap(), chain.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success(), "a 2-vertex cap must reject n=3");
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tmpdir("config");
    let cfg = write_tmp(&dir, "exp.toml", "max_n = 2\nseed = 5\n");
    let out = run(&["census", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("n=2"), "config-supplied max_n ignored: {text}");
    assert!(!text.contains("n=3"));
}
