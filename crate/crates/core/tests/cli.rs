use std::process::{Command, Output};

fn eqschub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqschub")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn coeff_golden_text() {
    let o = eqschub(&["coeff", "--type", "B3", "--u", "3 -2 1", "--v", "-3 -2 1", "--w", "-2 -3 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2*b1*b2^2 + 2*b1*b2*b3 + 2*b2^3 + 3*b2^2*b3 + b2*b3^2\n");
}

#[test]
fn coeff_json_carries_metadata() {
    let o = eqschub(&["--format", "json", "coeff", "--type", "C3", "--u", "3 -2 1", "--v", "-3 -2 1", "--w", "-2 -3 1"]);
    let v = json(&o);
    assert_eq!(v["meta"]["degree_ok"], true);
    assert_eq!(v["meta"]["positive"], true);
    assert_eq!(v["value"]["rank"], 3);
}

#[test]
fn restrict_identity_is_one() {
    let o = eqschub(&["restrict", "--type", "A2", "--w", "", "--v", "s1 s2"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "1\n"));
}

#[test]
fn restrict_word_and_one_line_agree() {
    let a = eqschub(&["restrict", "--type", "B3", "--w", "s2 s1 s2 s3", "--v", "s2 s1 s2 s3"]);
    let b = eqschub(&["restrict", "--type", "B3", "--w", "s2 s1 s2 s3", "--v", "s2 s1 s2 s3", "--no-prune"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("4*b1^3*b2"));
}

#[test]
fn grassmann_og() {
    let o = eqschub(&["grassmann", "--space", "OG", "--n", "3", "--lambda", "3,2", "--mu", "2,1", "--nu", "3,2,1"]);
    assert_eq!(stdout(&o), "6*b1^2 + 10*b1*b2 + 5*b1*b3 + 4*b2^2 + 4*b2*b3 + b3^2\n");
}

#[test]
fn verify_bc_rank_two_exhaustive() {
    let o = eqschub(&["verify", "bc", "--rank", "2", "--exhaustive", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["cases"], 512);
    assert_eq!(v["counterexamples"], serde_json::json!([]));
}

#[test]
fn verify_single_bc_instance() {
    let o = eqschub(&["verify", "bc", "--rank", "3", "--u", "3 -2 1", "--v", "-3 -2 1", "--w", "-2 -3 1", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["exponent"], -1);
    assert_eq!(v["equal"], true);
}

#[test]
fn scan_reports_do_not_depend_on_jobs() {
    let run = |jobs: &str| {
        eqschub(&["scan", "--property", "coeff-properties", "--type", "B2", "--jobs", jobs, "--no-timing", "--format", "json"]).stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn sampled_scans_are_seeded() {
    let run = |seed: &str| {
        eqschub(&["scan", "--property", "interval", "--type", "B3", "--samples", "40", "--seed", seed, "--no-timing", "--format", "json"])
    };
    assert_eq!(run("5").stdout, run("5").stdout);
    assert_ne!(run("5").stdout, run("6").stdout);
    let full = json(&eqschub(&["scan", "--property", "interval", "--type", "B3", "--format", "json"]));
    assert!(json(&run("5"))["cases"].as_u64() < full["cases"].as_u64());
}

#[test]
fn info_reports_group_sizes() {
    let g2 = stdout(&eqschub(&["info", "--type", "G2"]));
    assert!(g2.contains("|W| = 12") && g2.contains("|Phi+| = 6"));
    let f4 = json(&eqschub(&["info", "--type", "F4", "--format", "json"]));
    assert_eq!(f4["order"], 1152);
    assert_eq!(f4["positive_roots"], 24);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["coeff", "--type", "B3"][..],
        &["restrict", "--type", "B3", "--w", "5 1 2", "--v", ""],
        &["scan", "--property", "nonsense", "--type", "B2"],
        &["info", "--type", "E9"],
    ] {
        let o = eqschub(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.starts_with("error"), "{err}");
    }
}

#[test]
fn out_file_is_written_whole() {
    let dir = std::env::temp_dir().join(format!("eqschub-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = eqschub(&["verify", "bc", "--rank", "2", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["cases"], 512);
    let leftovers: Vec<_> = std::fs::read_dir(&dir).unwrap().filter_map(|e| e.ok()).filter(|e| e.path() != path).collect();
    assert!(leftovers.is_empty());
    std::fs::remove_dir_all(&dir).unwrap();
}
