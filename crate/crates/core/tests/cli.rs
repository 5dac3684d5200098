use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torus-harmonics"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn decompose_lists_every_irreducible() {
    let out = run(&["decompose", "--q", "3", "--phi", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "family,params,dim,mult_oracle,mult_table1,match");
    assert_eq!(lines.count(), 8);
    assert!(!text.contains('\r'));
}

#[test]
fn json_mirrors_csv() {
    let csv = stdout(&run(&["decompose", "--q", "5", "--phi", "3"]));
    let json = stdout(&run(&["decompose", "--q", "5", "--phi", "3", "--format", "json"]));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    assert_eq!(rows.len(), csv.lines().count() - 1);
    let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
    assert_eq!(keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","), csv.lines().next().unwrap());
}

#[test]
fn spherical_has_one_row_per_double_coset() {
    let out = run(&["spherical", "--q", "5", "--phi", "0", "--lambda", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 5);
    assert!(text.lines().next().unwrap().starts_with("coset_id,diagonal_as,averaging_re,averaging_im,explicit_re"));
}

#[test]
fn non_constituent_lambda_is_a_user_error() {
    let out = run(&["spherical", "--q", "3", "--phi", "0", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a constituent"));
}

#[test]
fn doublecosets_and_chartable_shapes() {
    let cosets = stdout(&run(&["doublecosets", "--q", "3"]));
    assert_eq!(cosets.lines().next().unwrap(), "coset_id,size,rep_a,rep_b,rep_c,rep_d,diagonal_as");
    assert_eq!(cosets.lines().count(), 4);
    let table = stdout(&run(&["chartable", "--q", "5"]));
    assert_eq!(table.lines().count(), 25);
    assert_eq!(table.lines().next().unwrap().split(',').count(), 3 + 24);
}

#[test]
fn uncertainty_rows() {
    let out = run(&["uncertainty", "--q", "3", "--phi", "1", "--samples", "20", "--seed", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "trial_id,support_size,degree_sum,product,margin,extremal,item");
    assert_eq!(text.lines().count(), 21);
    let exhaustive = stdout(&run(&["uncertainty", "--q", "3", "--phi", "1", "--samples", "20", "--seed", "4", "--exhaustive"]));
    assert!(exhaustive.starts_with(&text));
    assert!(exhaustive.contains(",true,epsilon"));
}

#[test]
fn invalid_configuration_exits_with_two() {
    for args in [
        vec!["field-info", "--q", "4"],
        vec!["decompose", "--q", "9", "--phi", "0"],
        vec!["decompose", "--q", "3", "--phi", "8"],
        vec!["selftest", "--q", "3,4"],
        vec!["selftest", "--q", "3", "--tolerance", "1e-20"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} computed before validating");
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = bin().env("TORUS_HARMONICS_THREADS", "0").args(["field-info", "--q", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn selftest_at_three_passes_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let first = run(&["selftest", "--q", "3", "--out", a.to_str().unwrap()]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let lines = stdout(&first);
    let reported = lines.lines().filter(|l| l.contains(" c")).filter(|l| l.starts_with("PASS") || l.starts_with("REPORTED")).count();
    assert!(reported >= 12, "{lines}");

    let second = bin()
        .env("TORUS_HARMONICS_THREADS", "2")
        .args(["selftest", "--q", "3", "--out", b.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(second.status.success());
    assert_eq!(read_dir_sorted(&a), read_dir_sorted(&b));

    let findings = std::fs::read_to_string(a.join("FINDINGS.md")).unwrap();
    for id in ["table1.onedim", "dcosets.diag-complete", "katz.interp-2", "zeta.a-ne-minus1"] {
        assert_eq!(findings.matches(&format!("\n## {id} (")).count(), 1, "{id}");
    }
    let criteria: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(a.join("criteria.json")).unwrap()).unwrap();
    assert!(criteria.iter().all(|c| c["verdict"] != "fail"));
}

#[test]
fn unwritable_output_reports_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let target = blocker.join("out.csv");
    let out = run(&["decompose", "--q", "3", "--phi", "0", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(target.to_str().unwrap()));
}
