use std::path::PathBuf;

use loose_core::theorems::{run_suite, Manifest, TheoremId, Verdict, VerifyOptions};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/manifest.txt")
}

#[test]
fn corpus_suite() {
    let m = Manifest::read(corpus()).unwrap();
    let rep = run_suite(&m, &[2, 3], &TheoremId::ALL, &VerifyOptions::default()).unwrap();
    assert!(rep.manifest_errors.is_empty(), "{:?}", rep.manifest_errors);
    let mut failed = Vec::new();
    for r in &rep.reports {
        if r.verdict == Verdict::Fail {
            println!("{} {} q={} {:?} {:?}", r.theorem, r.graph, r.q, r.reason, r.witness);
            failed.push((r.theorem, r.graph.as_str(), r.q));
        }
    }
    // S(w) of adjacent inner vertices with loose edges stop commuting once
    // k^x is nontrivial
    let expected: Vec<(TheoremId, &str, usize)> = ["fundament", "spider", "toy"]
        .into_iter()
        .map(|g| (TheoremId::Cenprod, g, 3))
        .collect();
    failed.sort();
    assert_eq!(failed, expected);
}
