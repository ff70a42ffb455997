//! Seed-band parity with scikit-learn on the synthetic UNSW-shaped fixture.
//! The reference values in `tests/data/oracle_synthetic.json` come from
//! `scripts/oracle_sklearn.py`.

mod common;

use common::parity::*;
use flowids::pipeline::ModelKind;

fn oracle() -> Oracle {
    Oracle::load(&common::data_dir().join("oracle_synthetic.json")).unwrap()
}

#[test]
fn forest_matches_reference_band_on_synthetic_flows() {
    let oracle = oracle();
    let runs = seed_runs(&common::synthetic_csv(), ModelKind::Forest).unwrap();
    let (acc_ok, acc) = verdict(
        "accuracy",
        Band::of(runs.iter().map(|r| r.accuracy)),
        oracle.forest.accuracy,
        0.01,
    );
    let (auc_ok, auc) = verdict("auc", Band::of(runs.iter().map(|r| r.auc)), oracle.forest.auc, 0.01);
    assert!(acc_ok && auc_ok, "{acc}; {auc}");
}

#[test]
fn logistic_matches_reference_band_on_synthetic_flows() {
    let oracle = oracle();
    let runs = seed_runs(&common::synthetic_csv(), ModelKind::Logistic).unwrap();
    let (ok, msg) = verdict(
        "accuracy",
        Band::of(runs.iter().map(|r| r.accuracy)),
        oracle.logistic.accuracy,
        0.02,
    );
    assert!(ok, "{msg}");
}
