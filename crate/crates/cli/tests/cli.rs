use std::process::Command;

use kummerian::fixtures;
use kummerian::format::parse;
use kummerian_cli::corpus::{self, corpus};
use kummerian_cli::report::CheckStatus;
use kummerian_cli::run_corpus;

fn kummerian(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kummerian")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn corpus_files_match_the_generators() {
    let pairs = [
        ("amalgam_0_2.pres", fixtures::amalgam(3, 0, 2, Some("1-p"), 4)),
        ("amalgam_2_0.pres", fixtures::amalgam(3, 2, 0, Some("1-p"), 4)),
        ("amalgam_2_2.pres", fixtures::amalgam(3, 2, 2, Some("1-p"), 4)),
        ("commutator_pair_2_2.pres", fixtures::commutator_pair(3, 2, 2, 4)),
        ("iterated_q0.pres", fixtures::iterated_commutator(3, 3, 2, "0", 4)),
        ("iterated_qp.pres", fixtures::iterated_commutator(3, 3, 2, "p", 4)),
        ("raag_qp.pres", fixtures::raag(3, "p", Some("1+p"), 4)),
        ("cyclic_p.pres", fixtures::cyclic(3, 1, 4)),
        ("cyclic_p2.pres", fixtures::cyclic(3, 2, 4)),
        ("free_1.pres", fixtures::free(3, 1, 4)),
        ("free_2.pres", fixtures::free(3, 2, 4)),
        ("free_3.pres", fixtures::free(3, 3, 4)),
        ("endgame.pres", fixtures::endgame(3, "(1-p)^p", 5)),
    ];
    assert_eq!(pairs.len(), corpus::FILES.len());
    for (name, text) in pairs {
        let bundled = parse(corpus::file(name).unwrap()).unwrap();
        assert_eq!(bundled, parse(&text).unwrap(), "{name}");
    }
    assert_eq!(corpus().len(), corpus::FILES.len());
}

#[test]
fn corpus_has_no_mismatches() {
    let report = run_corpus(4, 1_000_000, 0);
    assert!(report.is_clean(), "{:?}", report.mismatches);
    assert_eq!(report.summary.insufficient_precision, 0);
    assert!(report.flags.is_empty(), "{:?}", report.flags);
}

#[test]
fn report_is_deterministic() {
    assert_eq!(run_corpus(4, 1_000_000, 7).to_json(), run_corpus(4, 1_000_000, 7).to_json());
}

#[test]
fn precision_one_is_flagged() {
    let report = run_corpus(1, 1_000_000, 0);
    assert!(report.summary.insufficient_precision > 0);
    assert!(report.flags.iter().any(|f| f.contains("insufficient precision")));
    let statuses = report.entries.iter().flat_map(|e| e.checks.iter().map(|c| c.status));
    assert!(statuses.into_iter().any(|s| s == CheckStatus::InsufficientPrecision));
}

#[test]
fn exit_codes() {
    assert_eq!(kummerian(&["validate", "corpus:amalgam_2_2.pres"]).0, 0);
    assert_eq!(kummerian(&["kummer-check", "corpus:amalgam_2_2.pres"]).0, 0);
    assert_eq!(kummerian(&["kummer-check", "corpus:endgame.pres"]).0, 1);
    assert_eq!(kummerian(&["torsion", "corpus:iterated_qp.pres"]).0, 1);
    assert_eq!(kummerian(&["orient-search", "corpus:iterated_qp.pres", "--precision", "3"]).0, 1);
    assert_eq!(kummerian(&["no-such-command"]).0, 2);
    assert_eq!(kummerian(&["massey", "corpus:free_2.pres", "--classes", "x1,x2", "--mode", "odd"]).0, 2);
    assert_eq!(kummerian(&["kummer-check", "/nonexistent/file.pres"]).0, 3);

    let dir = std::env::temp_dir().join(format!("kummerian-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.pres");
    std::fs::write(&bad, "prime 3\ngenerators x\nrelator x^p w\n").unwrap();
    assert_eq!(kummerian(&["validate", bad.to_str().unwrap()]).0, 3);
    let unkilled = dir.join("unkilled.pres");
    std::fs::write(&unkilled, "prime 3\nprecision 3\ngenerators x y\nrelator x^3\norientation x = 1+p\n").unwrap();
    assert_eq!(kummerian(&["validate", unkilled.to_str().unwrap()]).0, 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn orient_search_output() {
    let (code, out) = kummerian(&["orient-search", "corpus:amalgam_2_2.pres"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1 Kummerian orientation class"), "{out}");
    assert!(out.contains("θ(x) = 1-p"), "{out}");
}

#[test]
fn subgroup_writes_a_kernel_file() {
    let dir = std::env::temp_dir().join(format!("kummerian-sub-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("kernel.pres");
    let (code, _) = kummerian(&[
        "subgroup",
        "corpus:amalgam_2_2.pres",
        "--map",
        "x:1,0; y0:0,1; z0:0,1",
        "--target",
        "p,p",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let kernel = parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(kernel.ngens(), 9 * 6 + 1);
    assert!(kernel.validate().unwrap().is_valid());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_output_is_written() {
    let dir = std::env::temp_dir().join(format!("kummerian-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let (code, _) = kummerian(&["corpus-report", "--json", path.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    let (ja, jb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(ja, jb);
    let v: serde_json::Value = serde_json::from_str(&ja).unwrap();
    assert_eq!(v["summary"]["mismatches"], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}
