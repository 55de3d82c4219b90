use jetgeo::jets::{
    affine_act, cover1, cover2, jets_to_json, load_jets, AffineMap, Jet, MultiIndex, ParamMap, Reparametrization, SecJet, SubJet,
};
use jetgeo::sampling::{random_affine, random_secjet, random_subjet, rng_for};
use jetgeo::Error;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn cover_of_a_reparametrized_graph() {
    // s(x) = (x + x³, sin(x + x³)) is the graph u2 = sin(u1)
    let s = ParamMap::parse(1, &["x1 + x1^3", "sin(x1 + x1^3)"]).unwrap();
    for x in [-0.7, 0.0, 0.4, 1.1] {
        let q = cover2(&s.prolong(&[x], 2).unwrap()).unwrap();
        let u1 = q.base()[0];
        assert!(close(u1, x + x * x * x, 1e-15));
        assert!(close(q.d1(1, 0), u1.cos(), 1e-13));
        assert!(close(q.d2(1, 0, 0), -u1.sin(), 1e-12));
    }
}

#[test]
fn cover_with_two_parameters() {
    // x1 = u1 − u2², x2 = u2 and u3 = (u1 − u2²) u2
    let s = ParamMap::parse(2, &["x1 + x2^2", "x2", "x1*x2"]).unwrap();
    let t = s.prolong(&[0.3, -0.8], 2).unwrap();
    let q = cover2(&t).unwrap();
    let (u1, u2) = (q.base()[0], q.base()[1]);
    assert!(close(q.d1(2, 0), u2, 1e-14));
    assert!(close(q.d1(2, 1), u1 - 3.0 * u2 * u2, 1e-14));
    assert!(close(q.d2(2, 0, 0), 0.0, 1e-14));
    assert!(close(q.d2(2, 0, 1), 1.0, 1e-14));
    assert!(close(q.d2(2, 1, 1), -6.0 * u2, 1e-13));
    assert_eq!(cover1(&t).unwrap(), q.truncate(1));
}

#[test]
fn cover_of_a_non_immersion_is_singular() {
    let s = ParamMap::parse(1, &["x1^3", "x1"]).unwrap();
    match cover2(&s.prolong(&[0.0], 2).unwrap()) {
        Err(Error::SingularJacobian { .. }) => {}
        other => panic!("expected a singular Jacobian, got {other:?}"),
    }
}

#[test]
fn affine_action_agrees_with_the_general_reparametrization() {
    let aff = AffineMap::new(DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]), DVector::from_vec(vec![1.0, -1.0])).unwrap();
    let rep = Reparametrization::parse(&["2*x1 + x2 + 1", "x2 - 1"]).unwrap();
    for i in 0..10 {
        let t = random_secjet(&mut rng_for(2, i), 2, 3, 2, &[]);
        let a = affine_act(&aff, &t).unwrap();
        let b = rep.act2(&t).unwrap();
        assert_eq!(a.x(), b.x());
        for (k, v) in a.derivs() {
            assert!(close(*v, b.derivs()[k], 1e-13), "{k:?}");
        }
    }
}

#[test]
fn multi_index_enumeration() {
    assert_eq!(MultiIndex::pair(2, 0), MultiIndex::pair(0, 2));
    let second: Vec<_> = MultiIndex::of_order(2, 2).iter().map(|s| s.indices().to_vec()).collect();
    assert_eq!(second, [vec![0, 0], vec![0, 1], vec![1, 1]]);
    assert_eq!(MultiIndex::up_to(2, 2).len(), 5);
    assert!(MultiIndex::empty().split_last().is_none());
}

#[test]
fn jet_file_examples() {
    let text = r#"[{"kind": "subjet", "n": 1, "m": 1, "r": 1, "u": [0.0, 0.0],
                    "derivs": [{"i": 2, "sigma": [1], "value": 3.0}]},
                   {"kind": "secjet", "n": 1, "l": 2, "r": 1, "x": [0.5], "u": [1.0, 2.0],
                    "derivs": [{"A": 1, "sigma": [1], "value": 1.0}, {"A": 2, "sigma": [1], "value": -1.0}]}]"#;
    let jets = load_jets(text).unwrap();
    match (&jets[0], &jets[1]) {
        (Jet::Sub(p), Jet::Sec(t)) => {
            assert_eq!(p.d1(1, 0), 3.0);
            assert_eq!((t.x(), t.d1(1, 0)), (&[0.5][..], -1.0));
        }
        other => panic!("{other:?}"),
    }
    // a missing derivative entry is an error
    let missing = r#"{"kind": "subjet", "n": 1, "m": 1, "r": 2, "u": [0.0, 0.0],
                      "derivs": [{"i": 2, "sigma": [1], "value": 3.0}]}"#;
    assert!(load_jets(missing).is_err());
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn assert_jets_close(a: &[Jet], b: &[Jet]) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        let (vx, vy): (Vec<f64>, Vec<f64>) = match (x, y) {
            (Jet::Sub(p), Jet::Sub(q)) => (p.base().iter().chain(p.derivs().values()).copied().collect(), q.base().iter().chain(q.derivs().values()).copied().collect()),
            (Jet::Sec(p), Jet::Sec(q)) => (p.x().iter().chain(p.u()).chain(p.derivs().values()).copied().collect(), q.x().iter().chain(q.u()).chain(q.derivs().values()).copied().collect()),
            _ => panic!("kind changed"),
        };
        assert_eq!(vx.len(), vy.len());
        for (u, v) in vx.iter().zip(&vy) {
            assert!(close(*u, *v, 1e-15));
        }
    }
}

proptest! {
    #[test]
    fn multi_index_counts(n in 1usize..5, k in 0usize..5) {
        let all = MultiIndex::of_order(n, k);
        prop_assert_eq!(all.len(), binomial(n + k - 1, k));
        prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(all.iter().all(|s| s.order() == k && s.indices().windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn jets_round_trip_through_json(seed in any::<u64>(), n in 1usize..3, extra in 1usize..3, r in 1usize..4) {
        let jets = vec![
            Jet::Sub(random_subjet(&mut rng_for(seed, 0), n, extra, r, &[])),
            Jet::Sec(random_secjet(&mut rng_for(seed, 1), n, n + extra, r, &[])),
        ];
        let back = load_jets(&jets_to_json(&jets)).unwrap();
        assert_jets_close(&jets, &back);
    }

    #[test]
    fn first_order_coordinates_round_trip(seed in any::<u64>(), n in 1usize..3, m in 1usize..3) {
        let p = random_subjet(&mut rng_for(seed, 0), n, m, 1, &[]);
        prop_assert_eq!(SubJet::from_j1_coords(n, m, &p.j1_coords()).unwrap(), p);
        let t = random_secjet(&mut rng_for(seed, 1), n, n + m, 1, &[]);
        prop_assert_eq!(SecJet::from_j1_coords(n, n + m, &t.j1_coords()).unwrap(), t);
    }

    #[test]
    fn affine_action_is_a_group_action(seed in any::<u64>(), n in 1usize..3) {
        let f = random_affine(&mut rng_for(seed, 0), n);
        let g = random_affine(&mut rng_for(seed, 1), n);
        let t = random_secjet(&mut rng_for(seed, 2), n, n + 1, 3, &[]);
        let stepwise = affine_act(&g, &affine_act(&f, &t).unwrap()).unwrap();
        let direct = affine_act(&g.after(&f), &t).unwrap();
        for (k, v) in direct.derivs() {
            prop_assert!(close(*v, stepwise.derivs()[k], 1e-10), "{:?}", k);
        }
        let back = affine_act(&AffineMap::identity(n), &t).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn cover_forgets_affine_reparametrization(seed in any::<u64>(), n in 1usize..3) {
        let t = random_secjet(&mut rng_for(seed, 0), n, n + 2, 2, &[]);
        let g = random_affine(&mut rng_for(seed, 1), n);
        let (Ok(a), Ok(b)) = (cover2(&t), cover2(&affine_act(&g, &t).unwrap())) else {
            return Ok(());
        };
        prop_assert_eq!(a.base(), b.base());
        for (k, v) in a.derivs() {
            prop_assert!(close(*v, b.derivs()[k], 1e-8), "{:?}: {} vs {}", k, v, b.derivs()[k]);
        }
    }
}
