use jetgeo::connections::{projective_shift, Connection};
use jetgeo::expr::{CoordinateFrame, Expr};
use jetgeo::geodesy::{
    ddot_gamma, ddot_gamma_pro, dot_gamma, dot_gamma_via_xi, grass_equivalent, integrate_geodesic, param_residual2, residual2,
    GeodesicStart, XiTable,
};
use jetgeo::jets::{MultiIndex, SecJet, SubJet};
use jetgeo::sampling::{random_connection, random_one_form, random_secjet, random_subjet, rng_for};
use proptest::prelude::*;

const SPHERE: &str = include_str!("../../../specs/sphere.json");

fn flat_params(n: usize) -> Connection {
    Connection::zero(CoordinateFrame::numbered("x", n, n).unwrap())
}

/// Order-2 jet of the graph `v = f(u)` over the sphere chart.
fn graph_jet(u: f64, v: f64, dv: f64, ddv: f64) -> SubJet {
    SubJet::from_fn(1, 1, 2, vec![u, v], |_, sigma| if sigma.order() == 1 { dv } else { ddv })
}

#[test]
fn flat_residual_is_the_second_derivative() {
    let g = Connection::zero(CoordinateFrame::numbered("u", 4, 2).unwrap());
    let q = random_subjet(&mut rng_for(1, 0), 2, 2, 2, &[]);
    let r = residual2(&g, &q).unwrap();
    for k in 2..4 {
        for lambda in 0..2 {
            for xi in 0..2 {
                assert_eq!(r.get(k, lambda, xi), q.deriv(k, &MultiIndex::pair(lambda, xi)));
            }
        }
    }
}

#[test]
fn great_circles_solve_the_sphere_equation() {
    let g = Connection::from_json(SPHERE).unwrap();
    // lines through the origin
    for (u, k) in [(0.3, 0.5), (-1.2, 2.0), (0.7, -0.25)] {
        assert!(residual2(&g, &graph_jet(u, k * u, k, 0.0)).unwrap().max_abs() <= 1e-15);
    }
    // the unit circle, v = sqrt(1 − u²)
    for u in [-0.5f64, 0.1, 0.6] {
        let v = (1.0 - u * u).sqrt();
        let r = residual2(&g, &graph_jet(u, v, -u / v, -1.0 / (v * v * v))).unwrap();
        assert!(r.max_abs() <= 1e-14, "{}", r.max_abs());
    }
    // a line missing the origin is not a great circle
    assert!(residual2(&g, &graph_jet(0.5, 1.0, 0.0, 0.0)).unwrap().max_abs() > 0.1);
}

#[test]
fn dot_gamma_ignores_the_choice_of_xi() {
    let g = random_connection(&mut rng_for(4, 0), &CoordinateFrame::numbered("u", 4, 2).unwrap(), 1);
    let p = random_subjet(&mut rng_for(4, 1), 2, 2, 1, &[]);
    let direct = dot_gamma(&g, &p).unwrap();
    for i in 0..10 {
        let xi = XiTable::random(&mut rng_for(4, 2 + i), 2, 2, 1.0);
        assert!(dot_gamma_via_xi(&g, &xi, &p).unwrap().max_abs_diff(&direct) <= 1e-12);
    }
}

#[test]
fn geodesics_through_the_origin_stay_on_lines() {
    let g = Connection::from_json(SPHERE).unwrap();
    let start = GeodesicStart { x: 0.0, u: vec![0.0, 0.0], velocity: vec![1.0, 0.5] };
    let traj = integrate_geodesic(&g, &flat_params(1), &start, 1e-3, 1000).unwrap();
    assert!(traj.error.is_none());
    for t in &traj.jets {
        assert!((t.u()[1] - 0.5 * t.u()[0]).abs() <= 1e-12);
    }
    let speeds = traj.speeds(&g).unwrap().unwrap();
    let drift = speeds.iter().map(|s| (s - speeds[0]).abs()).fold(0.0, f64::max);
    assert!(drift <= 1e-10, "{drift}");
}

#[test]
fn integrator_converges_at_fourth_order() {
    // Γ_1^1_1 = −1 gives u'' = u'², solved by u = −ln(1 − t)
    let frame = CoordinateFrame::numbered("u", 2, 1).unwrap();
    let g = Connection::from_components(frame, [(0, 0, 0, Expr::int(-1))]).unwrap();
    let start = GeodesicStart { x: 0.0, u: vec![0.0, 0.0], velocity: vec![1.0, 0.0] };
    let error = |steps: usize| {
        let traj = integrate_geodesic(&g, &flat_params(1), &start, 0.5 / steps as f64, steps).unwrap();
        (traj.jets.last().unwrap().u()[0] - 2f64.ln()).abs()
    };
    let ratio = error(10) / error(20);
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn integration_stops_at_a_branch_point() {
    let frame = CoordinateFrame::numbered("u", 2, 1).unwrap();
    let g = Connection::from_components(frame.clone(), [(0, 0, 0, Expr::parse("-sqrt(1 - u1)", &frame).unwrap())]).unwrap();
    let start = GeodesicStart { x: 0.0, u: vec![0.0, 0.0], velocity: vec![1.0, 0.0] };
    let traj = integrate_geodesic(&g, &flat_params(1), &start, 0.25, 40).unwrap();
    assert!(traj.error.is_some());
    assert!(traj.jets.len() < 41);
    assert!(integrate_geodesic(&g, &flat_params(1), &start, 0.0, 4).is_err());
}

#[test]
fn equivalence_of_a_projective_shift() {
    let frame = CoordinateFrame::numbered("u", 3, 1).unwrap();
    let g = random_connection(&mut rng_for(6, 0), &frame, 1);
    let h = projective_shift(&g, &random_one_form(&mut rng_for(6, 1), &frame, 1)).unwrap();
    let report = grass_equivalent(&g, &h, 1, 50, 1e-10, 0).unwrap();
    assert!(report.equivalent && report.invariants_equal);
    let bumped = g.map_symbols(|(a, c, b), e| if (a, c, b) == (0, 1, 0) { e.clone() + Expr::int(1) } else { e.clone() });
    assert!(!grass_equivalent(&g, &bumped, 1, 50, 1e-10, 0).unwrap().equivalent);
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((1usize, 2usize)), Just((1, 3)), Just((2, 3)), Just((2, 4))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ddot_gamma_solves_the_equation(seed in any::<u64>(), (n, l) in shape()) {
        let g = random_connection(&mut rng_for(seed, 0), &CoordinateFrame::numbered("u", l, n).unwrap(), 1);
        let p = random_subjet(&mut rng_for(seed, 1), n, l - n, 1, &[]);
        let q = ddot_gamma(&g, &p).unwrap();
        prop_assert_eq!(q.truncate(1), p);
        prop_assert!(residual2(&g, &q).unwrap().max_abs() <= 1e-10);
    }

    #[test]
    fn param_equation_is_solved_by_its_section(seed in any::<u64>(), (n, l) in shape()) {
        let g = random_connection(&mut rng_for(seed, 0), &CoordinateFrame::numbered("u", l, n).unwrap(), 1);
        let theta = random_connection(&mut rng_for(seed, 1), &CoordinateFrame::numbered("x", n, n).unwrap(), 1);
        let t: SecJet = random_secjet(&mut rng_for(seed, 2), n, l, 1, &[]);
        let q = ddot_gamma_pro(&g, &theta, &t).unwrap();
        let r = param_residual2(&g, &theta, &q).unwrap();
        prop_assert!(r.max_abs() <= 1e-10, "{}", r.max_abs());
        prop_assert!(r.asymmetry() <= 1e-12);
    }

    #[test]
    fn residual_is_affine_in_second_derivatives(seed in any::<u64>(), (n, l) in shape(), shift in -2.0f64..2.0) {
        let g = random_connection(&mut rng_for(seed, 0), &CoordinateFrame::numbered("u", l, n).unwrap(), 1);
        let q = random_subjet(&mut rng_for(seed, 1), n, l - n, 2, &[]);
        let moved = SubJet::from_fn(n, l - n, 2, q.base().to_vec(), |i, s| q.deriv(i, s) + if s.order() == 2 { shift } else { 0.0 });
        let (a, b) = (residual2(&g, &q).unwrap(), residual2(&g, &moved).unwrap());
        for (x, y) in a.components().iter().zip(b.components()) {
            prop_assert!((y - x - shift).abs() <= 1e-12);
        }
    }
}
