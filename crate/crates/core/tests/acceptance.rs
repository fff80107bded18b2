//! One test per acceptance criterion; each prints a single PASS/FAIL line.

use lcpforms::verify::{self, Outcome};

const SEED: u64 = 0;

fn check(o: Outcome) {
    println!("{}", o.line());
    assert!(o.passed, "criterion {} failed: {}", o.id, o.detail);
}

#[test]
fn criterion_01_stabilizer_dimensions() {
    check(verify::stabilizer_dimensions());
}

#[test]
fn criterion_02_group_orders() {
    check(verify::group_orders(SEED));
}

#[test]
fn criterion_03_sigma4_elements() {
    check(verify::sigma4_elements());
}

#[test]
fn criterion_04_spin7_membership() {
    check(verify::spin7_membership(SEED));
}

#[test]
fn criterion_05_octonion_identities() {
    check(verify::octonion_identities(SEED));
}

#[test]
fn criterion_06_torsion_formulas() {
    check(verify::torsion_formulas());
}

#[test]
fn criterion_07_lee_constants() {
    check(verify::lee_constants());
}

#[test]
fn criterion_08_scalar_curvature() {
    check(verify::scalar_curvature());
}

#[test]
fn criterion_09_cone_identities() {
    check(verify::cone_identities(SEED));
}

#[test]
fn criterion_10_nearly_kaehler() {
    check(verify::nearly_kaehler(SEED));
}

#[test]
fn criterion_11_lee_closedness() {
    check(verify::lee_closedness(SEED));
}

#[test]
fn criterion_12_dilation_invariance() {
    check(verify::dilation_invariance(SEED));
}

#[test]
fn criterion_13_freeness_engine() {
    check(verify::freeness_engine());
}
