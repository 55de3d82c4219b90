use jetgeo::connections::Connection;
use jetgeo::expr::{CoordinateFrame, Expr};
use jetgeo::jets::{AffineMap, Reparametrization};
use jetgeo::sampling::{random_affine, random_connection, rng_for};
use jetgeo::symmetry::*;
use nalgebra::{DMatrix, DVector};

fn plane() -> CoordinateFrame {
    CoordinateFrame::new(&["u1", "u2"], 1).unwrap()
}

fn cfg(samples: usize) -> CheckConfig {
    CheckConfig { samples, tol: SPAN_TOL, seed: 11 }
}

#[test]
fn identity_map_preserves_distribution() {
    let mut rng = rng_for(3, 0);
    let g = random_connection(&mut rng, &plane(), 2);
    let map = JetMap::identity(JetKind::Subjet, &plane(), 1).unwrap();
    let report = preserves_distribution(&map, &g, &cfg(30)).unwrap();
    assert!(report.holds(), "{}", report.summary());
}

#[test]
fn prolonged_linear_map_of_flat_plane_passes() {
    let flat = Connection::zero(plane());
    let f = parse_point_map(&plane(), &["2*u1 + u2 + 1", "u1 - 3*u2"]).unwrap();
    let map = prolong_point_map(&plane(), 1, &f).unwrap();
    let report = preserves_distribution(&map, &flat, &cfg(50)).unwrap();
    assert!(report.holds(), "{}", report.summary());
}

#[test]
fn prolonged_quadratic_map_of_flat_plane_fails() {
    let flat = Connection::zero(plane());
    let f = parse_point_map(&plane(), &["u1", "u2 + u1^2"]).unwrap();
    let map = prolong_point_map(&plane(), 1, &f).unwrap();
    let report = preserves_distribution(&map, &flat, &cfg(50)).unwrap();
    assert!(!report.holds());
    // the pushed generator gains a vertical part 2 while its base part
    // stays of unit size
    assert!(report.worst() > 0.1, "{}", report.worst());
}

#[test]
fn prolonged_linear_map_in_three_dimensions() {
    let space = CoordinateFrame::new(&["a", "b", "c"], 2).unwrap();
    let flat = Connection::zero(space.clone());
    let f = parse_point_map(&space, &["a + b", "b - c", "2*c + a"]).unwrap();
    for n in [1, 2] {
        let map = prolong_point_map(&space, n, &f).unwrap();
        let report = preserves_distribution(&map, &flat.with_split(n).unwrap(), &cfg(30)).unwrap();
        assert!(report.holds(), "n = {n}: {}", report.summary());
    }
}

#[test]
fn raw_map_breaking_contact_fails() {
    let flat = Connection::zero(plane());
    // moves the base point without touching the slope coordinate
    let map = JetMap::parse(JetKind::Subjet, &plane(), 1, &["u1", "u2 + u1", "u2_u1"]).unwrap();
    assert_eq!(map.origin(), MapOrigin::Raw);
    let report = preserves_distribution(&map, &flat, &cfg(20)).unwrap();
    assert!(!report.holds());
}

#[test]
fn raw_copy_of_prolonged_map_passes() {
    let flat = Connection::zero(plane());
    let f = parse_point_map(&plane(), &["u1 + u2", "u2"]).unwrap();
    let prolonged = prolong_point_map(&plane(), 1, &f).unwrap();
    let raw = JetMap::new(JetKind::Subjet, &plane(), 1, prolonged.components().to_vec()).unwrap();
    let report = preserves_distribution(&raw, &flat, &cfg(20)).unwrap();
    assert!(report.holds(), "{}", report.summary());
}

#[test]
fn euler_field_preserves_flat_distribution() {
    let flat = Connection::zero(plane());
    let euler = prolong_point_field(&plane(), 1, &[Expr::var("u1"), Expr::var("u2")]).unwrap();
    assert!(euler.components()[2].is_zero());
    let report = field_preserves_distribution(&euler, &flat, &cfg(40)).unwrap();
    assert!(report.holds(), "{}", report.summary());
}

#[test]
fn translations_and_vertical_shift() {
    let flat = Connection::zero(plane());
    let translate = JetField::coordinate(&plane(), 1, 0).unwrap();
    assert!(field_preserves_distribution(&translate, &flat, &cfg(20)).unwrap().holds());
    let shift = JetField::coordinate(&plane(), 1, 2).unwrap();
    let report = field_preserves_distribution(&shift, &flat, &cfg(20)).unwrap();
    assert!(!report.holds());
    assert!(report.worst() > 0.1);
}

#[test]
fn distribution_generator_brackets_with_itself() {
    let mut rng = rng_for(5, 1);
    let g = random_connection(&mut rng, &plane(), 1);
    let jet = subjet_frame(&plane()).unwrap();
    let x = symbolic_distribution_fields(&g, &jet).unwrap().remove(0);
    let field = JetField::new(&plane(), 1, x).unwrap();
    let report = field_preserves_distribution(&field, &g, &cfg(20)).unwrap();
    assert!(report.holds(), "{}", report.summary());
}

#[test]
fn affine_action_on_section_jets_with_flat_parameters() {
    let mut rng = rng_for(9, 0);
    let g = random_connection(&mut rng, &plane(), 2);
    let theta = Connection::zero(CoordinateFrame::numbered("x", 1, 1).unwrap());
    let aff = AffineMap::new(DMatrix::from_element(1, 1, 2.0), DVector::from_element(1, 1.0)).unwrap();
    let report = affine_symmetry_check(&g, &theta, &aff, &CheckConfig { samples: 40, tol: 1e-10, seed: 2 }).unwrap();
    assert!(report.holds(), "{}", report.summary());
    let map = JetMap::affine_action(&aff, &plane()).unwrap();
    let pro = preserves_pro_distribution(&map, &g, &theta, &cfg(30)).unwrap();
    assert!(pro.holds(), "{}", pro.summary());
}

#[test]
fn identity_affine_map_is_a_symmetry() {
    let space = CoordinateFrame::new(&["a", "b", "c"], 2).unwrap();
    let mut rng = rng_for(9, 1);
    let g = random_connection(&mut rng, &space, 2);
    let theta = Connection::zero(CoordinateFrame::numbered("x", 2, 2).unwrap());
    let report = affine_symmetry_check(&g, &theta, &AffineMap::identity(2), &CheckConfig { samples: 20, tol: 1e-10, seed: 0 }).unwrap();
    assert!(report.holds());
    assert_eq!(report.worst(), report.rows.iter().map(|r| r.residual).fold(0.0, f64::max));
}

#[test]
fn cubic_reparametrization_is_not_a_symmetry() {
    let mut rng = rng_for(9, 2);
    let g = random_connection(&mut rng, &plane(), 2);
    let theta = Connection::zero(CoordinateFrame::numbered("x", 1, 1).unwrap());
    let rep = Reparametrization::parse(&["x1^3 + x1"]).unwrap();
    let report = reparametrization_check(&g, &theta, &rep, &CheckConfig { samples: 40, tol: 1e-10, seed: 4 }).unwrap();
    assert!(!report.holds());
    assert!(report.worst() > 1e-3);
}

#[test]
fn random_affine_maps_act_as_symmetries_in_two_parameters() {
    let space = CoordinateFrame::new(&["a", "b", "c"], 2).unwrap();
    let g = random_connection(&mut rng_for(1, 0), &space, 2);
    let theta = Connection::zero(CoordinateFrame::numbered("x", 2, 2).unwrap());
    for k in 0..5 {
        let aff = random_affine(&mut rng_for(1, 100 + k), 2);
        let report = affine_symmetry_check(&g, &theta, &aff, &CheckConfig { samples: 20, tol: 1e-10, seed: k }).unwrap();
        assert!(report.holds(), "{}", report.summary());
    }
}

#[test]
fn orbit_quotient_structure() {
    let space = CoordinateFrame::new(&["a", "b", "c"], 1).unwrap();
    let g = random_connection(&mut rng_for(2, 0), &space, 2);
    let report = orbit_quotient_check(&g, 30, 10, 0).unwrap();
    assert!(report.constancy <= 1e-12, "{report:?}");
    assert!(report.preimage_error <= 1e-15, "{report:?}");
    assert!(report.factoring_residual <= 1e-10, "{report:?}");
}

#[test]
fn report_summary_and_csv() {
    let flat = Connection::zero(plane());
    let map = JetMap::identity(JetKind::Subjet, &plane(), 1).unwrap();
    let report = preserves_distribution(&map, &flat, &CheckConfig { samples: 3, tol: 1e-8, seed: 0 }).unwrap();
    assert_eq!(report.summary(), "PASS 3/3 tol=1e-8");
    let names: Vec<String> = map.frame().names().iter().map(|s| s.to_string()).collect();
    let csv = report.to_csv(&names);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,u1,u2,u2_u1,residual,status"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn singular_samples_are_skipped() {
    let flat = Connection::zero(plane());
    // singular everywhere
    let map = JetMap::parse(JetKind::Subjet, &plane(), 1, &["u1", "u2", "u2_u1/(u1 - u1)"]).unwrap();
    let report = preserves_distribution(&map, &flat, &cfg(5)).unwrap();
    assert_eq!(report.skipped(), 5);
    assert!(!report.holds());
    assert!(report.summary().starts_with("FAIL 0/0"));
}

#[test]
fn jet_map_spec_round_trip() {
    let text = r#"{"kind": "subjet", "coords": ["u1", "u2"], "n": 1, "components": ["u1", "u2", "u2_u1"]}"#;
    let map = JetMapSpec::from_json(text).unwrap().build().unwrap();
    assert_eq!(map, JetMap::new(JetKind::Subjet, &plane(), 1, map.components().to_vec()).unwrap());
    assert!(JetMapSpec::from_json(r#"{"kind": "subjet"}"#).is_err());
}
