use std::collections::HashMap;

use proptest::prelude::*;

use super::*;

fn frame_uv() -> CoordinateFrame {
    CoordinateFrame::new(&["u", "v", "w"], 1).unwrap()
}

fn at(pairs: &[(&str, f64)]) -> HashMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn parse(text: &str) -> Expr {
    Expr::parse(text, &frame_uv()).unwrap()
}

#[test]
fn derivative_of_product_plus_constant() {
    let e = parse("u*v + 3");
    assert_eq!(e.differentiate("u"), Expr::var("v"));
}

#[test]
fn derivative_of_constant_is_zero() {
    assert_eq!(Expr::rational(7, 3).differentiate("u"), Expr::zero());
    assert_eq!(parse("v*w").differentiate("u"), Expr::zero());
}

#[test]
fn derivative_matches_central_difference() {
    let e = parse("sin(u)*u^2");
    let d = e.differentiate("u");
    let f = |x: f64| e.evaluate(&at(&[("u", x)])).unwrap();
    let h = 1e-6;
    let fd = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
    let exact = 2.0 * 1f64.sin() + 1f64.cos();
    assert!((d.evaluate(&at(&[("u", 1.0)])).unwrap() - fd).abs() <= 1e-8);
    assert!((d.evaluate(&at(&[("u", 1.0)])).unwrap() - exact).abs() <= 1e-14);
}

#[test]
fn evaluation_examples() {
    assert_eq!(parse("u^2 + v").evaluate(&at(&[("u", 2.0), ("v", 1.0)])), Ok(5.0));
    assert!(matches!(
        parse("u/v").evaluate(&at(&[("u", 1.0), ("v", 0.0)])),
        Err(ExprError::Domain(_))
    ));
    assert_eq!(Expr::parse_free("exp(0)+cos(0)").unwrap().evaluate(&HashMap::new()), Ok(2.0));
    assert!(matches!(parse("sqrt(u)").evaluate(&at(&[("u", -1.0)])), Err(ExprError::Domain(_))));
    assert_eq!(
        parse("u + v").evaluate(&at(&[("u", 1.0)])),
        Err(ExprError::MissingSymbol("v".into()))
    );
}

#[test]
fn parse_examples() {
    let frame = CoordinateFrame::numbered("u", 3, 1).unwrap();
    let e = Expr::parse("u1*u2 + 3", &frame).unwrap();
    assert_eq!(
        e,
        Expr::Add(vec![Expr::Mul(vec![Expr::var("u1"), Expr::var("u2")]), Expr::int(3)])
    );
    match Expr::parse("u1^^2", &frame) {
        Err(ExprError::Syntax { position, .. }) => assert_eq!(position, 3),
        other => panic!("expected syntax error, got {other:?}"),
    }
    let q = Expr::parse("sin(u3)/u1", &frame).unwrap();
    let v = frame.eval(&q, &[2.0, 0.0, 0.0]).unwrap();
    assert_eq!(v, 0.0);
    assert_eq!(
        Expr::parse("u4 + 1", &frame),
        Err(ExprError::UnknownSymbol("u4".into()))
    );
}

#[test]
fn rational_and_decimal_literals() {
    assert_eq!(parse("2/3"), Expr::rational(2, 3));
    assert_eq!(parse("-0.25"), Expr::rational(-1, 4));
    assert_eq!(parse("1.5e-3"), Expr::rational(3, 2000));
    // a divisor is never fused into a literal
    assert_eq!(
        parse("u/2/3"),
        Expr::Div(Box::new(Expr::Div(Box::new(Expr::var("u")), Box::new(Expr::int(2)))), Box::new(Expr::int(3)))
    );
    assert_eq!(parse("2/3^2").to_string(), "2/3^2");
}

#[test]
fn printer_examples() {
    assert_eq!(parse("u*(v + 1)").to_string(), "u*(v + 1)");
    assert_eq!(parse("(u*v)*w").to_string(), "(u*v)*w");
    assert_eq!(parse("-u^2").to_string(), "-1*u^2");
    assert_eq!(parse("(-2)^3").to_string(), "(-2)^3");
    assert_eq!(parse("u/(2)").to_string(), "u/(2)");
    assert_eq!(parse("u^-2").to_string(), "u^-2");
}

#[test]
fn simplification_rules() {
    assert_eq!(parse("0*u + 1*v + 0").simplify(), Expr::var("v"));
    assert_eq!(parse("u + u + 2*u").simplify(), parse("4*u").simplify());
    assert_eq!(parse("u*u*v/v^1").simplify().to_string(), "u^2*v/v");
    assert_eq!(parse("(u^2)^3").simplify(), Expr::var("u").pow(6));
    assert_eq!(parse("u - u").simplify(), Expr::zero());
    assert_eq!(parse("2^-2 + 1/4").simplify(), Expr::rational(1, 2));
    assert_eq!(parse("sqrt(1) + exp(0) + sin(0)").simplify(), Expr::int(2));
    assert_eq!(parse("u/4").simplify(), parse("1/4*u"));
}

#[test]
fn frame_validation() {
    assert!(CoordinateFrame::new(&["u", "u"], 1).is_err());
    assert!(CoordinateFrame::new(&["u", "v"], 0).is_err());
    assert!(CoordinateFrame::new(&["u", "v"], 3).is_err());
    assert!(CoordinateFrame::new(&["sin", "v"], 1).is_err());
    assert!(CoordinateFrame::new(&["1u"], 1).is_err());
    let f = CoordinateFrame::new(&["x", "y", "z"], 2).unwrap();
    assert_eq!((f.dim(), f.split(), f.index_of("z")), (3, 2, Some(2)));
}

const VARS: [&str; 3] = ["u", "v", "w"];

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-9i64..=9, 1i64..=4).prop_map(|(p, q)| Expr::rational(p, q)),
        (0usize..3).prop_map(|i| Expr::var(VARS[i])),
        (0usize..3).prop_map(|i| Expr::var(VARS[i])),
    ]
}

/// Trees of the shape the parser produces.
fn arb_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Mul),
            (inner.clone(), -2i64..=3).prop_map(|(b, k)| Expr::Pow(Box::new(b), k)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner, 0usize..4).prop_map(|(a, f)| {
                let func = [Func::Sin, Func::Cos, Func::Exp, Func::Sqrt][f];
                Expr::Func(func, Box::new(a))
            }),
        ]
    })
}

/// Smooth trees: no quotients, square roots or negative powers.
fn arb_smooth() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Mul),
            (inner.clone(), 0i64..=3).prop_map(|(b, k)| Expr::Pow(Box::new(b), k)),
            (inner, 0usize..3).prop_map(|(a, f)| {
                let func = [Func::Sin, Func::Cos, Func::Exp][f];
                Expr::Func(func, Box::new(a))
            }),
        ]
    })
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
}

fn eval3(e: &Expr, p: &[f64; 3]) -> Result<f64, ExprError> {
    e.eval_with(&|name| VARS.iter().position(|v| *v == name).map(|i| p[i]))
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(e in arb_expr()) {
        let text = e.to_string();
        let back = Expr::parse(&text, &frame_uv()).unwrap();
        prop_assert_eq!(back, e, "text: {}", text);
    }

    #[test]
    fn simplify_is_idempotent(e in arb_expr()) {
        let once = e.simplify();
        prop_assert_eq!(once.simplify(), once);
    }

    #[test]
    fn simplify_preserves_value(e in arb_expr(), p in point()) {
        if let (Ok(a), Ok(b)) = (eval3(&e, &p), eval3(&e.simplify(), &p)) {
            prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
        }
    }

    #[test]
    fn derivative_is_linear(
        e1 in arb_smooth(), e2 in arb_smooth(),
        a in (-5i64..=5, 1i64..=3), b in (-5i64..=5, 1i64..=3),
        p in point(),
    ) {
        let (a, b) = (Expr::rational(a.0, a.1), Expr::rational(b.0, b.1));
        let combined = (a.clone() * e1.clone() + b.clone() * e2.clone()).differentiate("u");
        let separate = (a * e1.differentiate("u") + b * e2.differentiate("u")).simplify();
        let (x, y) = (eval3(&combined, &p).unwrap(), eval3(&separate, &p).unwrap());
        prop_assert!(close(x, y, 1e-10), "{} vs {}", x, y);
    }

    #[test]
    fn mixed_partials_commute(e in arb_smooth(), p in point()) {
        let uv = e.differentiate("u").differentiate("v");
        let vu = e.differentiate("v").differentiate("u");
        let (x, y) = (eval3(&uv, &p).unwrap(), eval3(&vu, &p).unwrap());
        prop_assert!(close(x, y, 1e-10), "{} vs {}", x, y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn derivative_matches_finite_differences(e in arb_expr(), p in point(), var in 0usize..3) {
        let h = 1e-6;
        let d = e.differentiate(VARS[var]);
        let shifted = |delta: f64| {
            let mut q = p;
            q[var] += delta;
            eval3(&e, &q)
        };
        let (Ok(exact), Ok(fp), Ok(fm), Ok(f0)) = (eval3(&d, &p), shifted(h), shifted(-h), eval3(&e, &p)) else {
            return Ok(());
        };
        // Stay away from poles and branch points where the difference
        // quotient itself is meaningless.
        let d2 = (fp - 2.0 * f0 + fm) / (h * h);
        if exact.abs() > 1e3 || f0.abs() > 1e2 || d2.abs() > 1e3 {
            return Ok(());
        }
        let fd = (fp - fm) / (2.0 * h);
        prop_assert!(close(exact, fd, 1e-6), "{}: exact {} fd {}", e, exact, fd);
    }
}
