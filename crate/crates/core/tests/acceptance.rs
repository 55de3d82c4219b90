//! One test per acceptance criterion. Each prints its PASS/FAIL line.

use jetgeo::selftest::{run_criterion, RunConfig};

fn criterion(id: usize) {
    let result = run_criterion(id, &RunConfig::default());
    println!("{result}");
    assert!(result.passed, "{result}");
}

#[test]
fn criterion_01_defining_identity() {
    criterion(1);
}

#[test]
fn criterion_02_xi_independence() {
    criterion(2);
}

#[test]
fn criterion_03_projective_invariance() {
    criterion(3);
}

#[test]
fn criterion_04_grassmannian_invariance() {
    criterion(4);
}

#[test]
fn criterion_05_covering_commutation() {
    criterion(5);
}

#[test]
fn criterion_06_quotient_connection() {
    criterion(6);
}

#[test]
fn criterion_07_affine_symmetry_and_quotient() {
    criterion(7);
}

#[test]
fn criterion_08_flat_ground_truth() {
    criterion(8);
}

#[test]
fn criterion_09_sphere_geodesics() {
    criterion(9);
}

#[test]
fn criterion_10_polynomial_degree_bound() {
    criterion(10);
}

#[test]
fn criterion_11_symmetry_checks() {
    criterion(11);
}
