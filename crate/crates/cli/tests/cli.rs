use std::path::Path;
use std::process::{Command, Output};

use propchoose::{Graph, ListAssignment};

fn run(args: &[&str], dir: &Path) -> (i32, String) {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_propchoose"))
        .args(args)
        .current_dir(dir)
        .env_remove("PROPCHOOSE_CACHE")
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

#[test]
fn chi_pc_values() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["chi-pc", "K1,3"], dir.path());
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("chi_pc = 3\n"), "{out}");
    let (code, out) = run(&["chi-pc", "K2,3"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("chi_pc = 3 (forced: lower=upper)"), "{out}");
    let (code, out) = run(&["chi-pc", "K9,9", "--kmax", "5"], dir.path());
    assert_eq!(code, 3);
    assert!(out.contains("[10, 14]") && out.contains("guard"), "{out}");
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["chi-pc", "K2,x"], dir.path()).0, 2);
    assert_eq!(run(&["frobnicate"], dir.path()).0, 2);
    assert_eq!(run(&["decide", "K2,2", "0"], dir.path()).0, 2);
    assert_eq!(run(&["decide", "missing-file.txt", "2"], dir.path()).0, 2);
    assert_eq!(run(&["--jobs", "0", "table"], dir.path()).0, 2);
}

#[test]
fn decide_edge_list_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p3.txt"), "p 3\ne 0 1\ne 1 2\n").unwrap();
    let (code, out) = run(&["decide", "p3.txt", "2"], dir.path());
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("choosable"), "{out}");
}

#[test]
fn decide_writes_witness_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["--cache", "c.txt", "decide", "K2,2", "2", "--witness-out", "w.txt"], dir.path());
    assert_eq!(code, 0, "{out}");
    let w = ListAssignment::parse_file(&std::fs::read_to_string(dir.path().join("w.txt")).unwrap()).unwrap();
    let g = Graph::complete_multipartite(&[2, 2]).unwrap();
    assert_eq!(propchoose::solver::find_proportional(&g, &w).unwrap(), None);
    let (code, _) = run(&["--cache", "c.txt", "--jobs", "2", "decide", "K2,2", "2"], dir.path());
    assert_eq!(code, 0);
    let log = std::fs::read_to_string(dir.path().join("c.txt")).unwrap();
    let lines: Vec<&str> = log.lines().collect();
    assert_eq!(lines.len(), 2);
    let hash = |l: &str| l.split_whitespace().find(|f| f.starts_with("witness_hash=")).unwrap().to_string();
    assert_eq!(hash(lines[0]), hash(lines[1]));
    assert!(lines[0].contains("graph=K2,2 k=2 outcome=not-choosable"));
}

#[test]
fn contradicting_cache_aborts() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.txt"),
        "graph=K2,2 k=3 outcome=not-choosable witness_hash=0000000000000001 classes=1 elapsed_ms=0 version=0 timestamp=0 progress=-\n",
    )
    .unwrap();
    let (code, out) = run(&["--cache", "c.txt", "decide", "K2,2", "3"], dir.path());
    assert_eq!(code, 1);
    assert!(out.contains("contradiction"), "{out}");
}

#[test]
fn checkpoint_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["--cache", "c.txt", "--time-limit", "0", "decide", "K2,3", "3"], dir.path());
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("checkpoint: 0/"), "{out}");
    let (code, out) = run(&["--cache", "c.txt", "decide", "K2,3", "3", "--resume"], dir.path());
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("resuming") && out.contains("choosable (4061 classes"), "{out}");
}

#[test]
fn table_uses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["--cache", "c.txt", "table", "--n", "2..3", "--m", "2..4"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("2  4  3      4      open"), "{out}");
    assert_eq!(out.matches("conjecture holds").count(), 3, "{out}");
    let (code, _) = run(&["--cache", "c.txt", "decide", "K2,4", "3"], dir.path());
    assert_eq!(code, 0);
    let (_, out) = run(&["--cache", "c.txt", "--format", "tsv", "table", "--n", "2", "--m", "4"], dir.path());
    assert!(out.contains("2\t4\t3\t4\t3\tconjecture holds\t0.750\tcache"), "{out}");
    let (_, out) = run(&["--format", "tsv", "table", "--n", "1", "--m", "5"], dir.path());
    assert!(out.contains("1\t5\t4\t4\t4\tconjecture holds\t0.800\tstar"), "{out}");
}

#[test]
fn cache_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_propchoose"))
        .args(["decide", "K1,2", "2"])
        .current_dir(dir.path())
        .env("PROPCHOOSE_CACHE", "env-cache.txt")
        .output()
        .unwrap();
    assert!(out.status.success());
    let log = std::fs::read_to_string(dir.path().join("env-cache.txt")).unwrap();
    assert!(log.starts_with("graph=K1,2 k=2 outcome=choosable"), "{log}");
}

#[test]
fn cross_check() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["cross-check", "--max-p", "6"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("0 disagreements / 164 instances"), "{out}");
}

#[test]
fn construct() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["construct", "2", "3", "1", "--seed", "7"], dir.path());
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("1000/1000 verified"), "{out}");
    let (code, out) = run(&["construct", "3", "6", "2", "--samples", "500", "--seed", "7", "--colorings", "f.txt"], dir.path());
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("k=6: 500/500 verified"), "{out}");
    let emitted = std::fs::read_to_string(dir.path().join("f.txt")).unwrap();
    assert_eq!(emitted.matches("# sample").count(), 500);
    let (again, _) = run(&["construct", "3", "6", "2", "--samples", "500", "--seed", "7", "--colorings", "g.txt"], dir.path());
    assert_eq!(again, 0);
    assert_eq!(emitted, std::fs::read_to_string(dir.path().join("g.txt")).unwrap());
    let (code, _) = run(&["construct", "2", "2", "1"], dir.path());
    assert_eq!(code, 2);
}

#[test]
fn witnesses() {
    let dir = tempfile::tempdir().unwrap();
    for (parts, bound, file) in [("2,2", 3, "witness-K2_2.txt"), ("2,2,2", 4, "witness-K2_2_2.txt"), ("2,4", 3, "witness-K2_4.txt")] {
        let (code, out) = run(&["witness", parts], dir.path());
        assert_eq!(code, 0, "{out}");
        assert!(out.contains(&format!("lower bound {bound} certified")), "{out}");
        let text = std::fs::read_to_string(dir.path().join(file)).unwrap();
        let w = ListAssignment::parse_file(&text).unwrap();
        assert_eq!(w.uniform_size(), Some(bound - 1));
    }
    assert_eq!(run(&["witness", "2,,2"], dir.path()).0, 2);
}

#[test]
fn verify_bounds_subset() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["verify-bounds", "--criteria", "3,4,8"], dir.path());
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches("[PASS]").count(), 3, "{out}");
    assert_eq!(run(&["verify-bounds", "--criteria", "12"], dir.path()).0, 2);
}
