mod common;

use common::run_suite;

#[test]
fn matched_group_reproduces_every_certified_contraction() {
    let t = run_suite(240, 11, false);
    println!("{t:?}");
    assert!(t.failures.is_empty(), "{} failures:\n{}", t.failures.len(), t.failures.join("\n"));
    assert!(t.certified >= 200, "only {} certified instances", t.certified);
    assert!(t.per_precision.iter().all(|&c| c > 0), "{:?}", t.per_precision);
    // The certificate must be able to reject: some contractions are not XP.
    assert!(t.non_xp > 0);
}

#[test]
fn x_insertion_matches_the_dense_contraction() {
    let t = run_suite(100, 12, true);
    assert!(t.failures.is_empty(), "{} failures:\n{}", t.failures.len(), t.failures.join("\n"));
    assert!(t.certified >= 100);
}
