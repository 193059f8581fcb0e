use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn hfrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfrank")).current_dir(root()).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = hfrank(&["validate", "corpus/trefoil_rh.json"]);
    assert_eq!(ok.status.code(), Some(0));
    let broken = hfrank(&["validate", "corpus/invalid/broken.json"]);
    assert_eq!(broken.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&broken.stderr).contains("InvariantViolation"));
    assert_eq!(hfrank(&["validate", "corpus/missing.json"]).status.code(), Some(2));
    assert_eq!(hfrank(&["ranks"]).status.code(), Some(2));
    assert_eq!(hfrank(&["--help"]).status.code(), Some(0));
}

#[test]
fn model_path_without_extension() {
    let a = hfrank(&["ranks", "corpus/t25"]);
    let b = hfrank(&["ranks", "corpus/t25.json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn unknot_lens_ranks_both_routes() {
    for p in 1..=8u32 {
        for q in 1..=8u32 {
            if (1..=p.min(q)).rev().find(|d| p % d == 0 && q % d == 0) != Some(1) {
                continue;
            }
            let o =
                hfrank(&["--format", "json", "surgery", "corpus/unknot", "-p", &p.to_string(), "-q", &q.to_string()]);
            assert_eq!(o.status.code(), Some(0), "{p}/{q}");
            let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
            assert_eq!(v["cone21"], p, "{p}/{q}");
            assert_eq!(v["combinatorial23"], p, "{p}/{q}");
            assert_eq!(v["agree"], true);
        }
    }
}

#[test]
fn invalid_surgery_is_a_usage_error() {
    assert_eq!(hfrank(&["surgery", "corpus/unknot", "-p", "2", "-q", "4"]).status.code(), Some(2));
    assert_eq!(hfrank(&["surgery", "corpus/unknot", "-p", "0"]).status.code(), Some(2));
}

#[test]
fn ranks_csv() {
    let o = hfrank(&["--format", "csv", "ranks", "corpus/trefoil_rh"]);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<(String, String)> = rdr.deserialize().map(Result::unwrap).collect();
    assert!(rows.contains(&("genus".into(), "1".into())));
    assert!(rows.contains(&("HFK^".into(), "{1:1, 0:1, -1:1}".into())));
}

#[test]
fn knot_surgery_conventions() {
    let o = hfrank(&["--format", "json", "knot-surgery", "corpus/trefoil_rh", "-n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let incl = hfrank(&["knot-surgery", "corpus/trefoil_rh", "-n", "1", "--convention", "inclusion"]);
    assert_eq!(incl.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&incl.stderr).contains("ConventionFailure"));
}

#[test]
fn blocks_report() {
    let o = hfrank(&["--format", "json", "blocks", "corpus/trefoil_rh", "-p", "2", "-q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["x_pq"].as_u64(), v["z_pq"].as_u64(), v["y"].as_u64()), (Some(3), Some(4), Some(4)));
}

#[test]
fn verify_corpus_csv_rows() {
    let o = hfrank(&["--format", "csv", "verify", "corpus"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["model", "check", "pass", "lhs", "rhs", "context"]);
    let records: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 5 * 66);
    assert!(records.iter().all(|r| &r[2] == "true"));
}

#[test]
fn verify_is_deterministic() {
    let a = hfrank(&["--format", "json", "verify", "corpus"]);
    let b = hfrank(&["--format", "json", "verify", "corpus"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_reports_invalid_models() {
    let o = hfrank(&["verify", "corpus/unknot.json", "corpus/invalid/broken.json"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("PASS unknot"), "{text}");
    assert!(text.contains("FAIL broken"), "{text}");
}
