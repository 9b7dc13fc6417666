mod common;

use common::gen::{self, coord_names, Expr};
use common::names;
use contact_geom::scalar::{int, rat, Domain, Interval, Sampler, ZeroTest};
use contact_geom::{parse_expr, Point, Rational, ScalarField, Value, ZeroVerdict};
use proptest::prelude::*;

fn p(coords: &[Rational]) -> Point {
    Point::new(coords.to_vec())
}

fn cube_test(dim: usize, seed: u64) -> ZeroTest {
    ZeroTest::from_sampler(&Sampler::new(Domain::cube(dim), seed, 50), 1e-9)
}

#[test]
fn partial_examples() {
    let n = names(&["x", "y", "z", "u", "v"]);
    let e = parse_expr("exp(-v)", &n).unwrap();
    assert_eq!(e.partial(4), -e.clone());
    let e = parse_expr("x^2 + y^2", &n).unwrap();
    assert_eq!(e.partial(0), parse_expr("2*x", &n).unwrap());
    let e = parse_expr("v*2*x", &n).unwrap();
    assert_eq!(e.partial(4), parse_expr("2*x", &n).unwrap());
}

#[test]
fn eval_examples() {
    let n = names(&["x", "z", "v"]);
    let e = parse_expr("exp(-v)", &n).unwrap();
    assert_eq!(e.eval(&p(&[int(0), int(0), int(0)])).unwrap().to_f64(), 1.0);
    let e = parse_expr("v^2", &n).unwrap();
    assert_eq!(e.eval(&p(&[int(0), int(0), int(3)])).unwrap(), Value::Exact(int(9)));
    // direct substitution: 2·1·e^0
    let e = parse_expr("2*x*exp(2*z)", &n).unwrap();
    assert_eq!(e.eval(&p(&[int(1), int(0), int(5)])).unwrap().to_f64(), 2.0);
}

#[test]
fn eval_reports_division_by_zero() {
    let n = names(&["x"]);
    let e = parse_expr("1/x", &n).unwrap();
    assert!(e.eval(&p(&[int(0)])).is_err());
}

#[test]
fn zero_test_examples() {
    let n = names(&["x", "v"]);
    let t = cube_test(2, 3);
    let e = parse_expr("x - x", &n).unwrap();
    assert_eq!(t.verdict(&e), ZeroVerdict::ProvedZero);
    let e = parse_expr("exp(-v)*exp(v) - 1", &n).unwrap();
    assert!(t.verdict(&e).is_zero());

    let domain = Domain {
        boxes: vec![Interval::new(int(-1), int(1)), Interval::new(int(0), int(2))],
        nonvanishing: vec![],
    };
    let t = ZeroTest::from_sampler(&Sampler::new(domain, 3, 50), 1e-9);
    let e = parse_expr("v^2 - 1", &n).unwrap();
    match t.verdict(&e) {
        ZeroVerdict::NonZero { witness, value } => {
            let v = &witness.coords()[1];
            assert_ne!(*v, int(1));
            assert!(value.abs() >= 1e-9);
        }
        other => panic!("expected NonZero, got {other:?}"),
    }
}

#[test]
fn fraction_arithmetic_is_exact() {
    let n = names(&["x", "y"]);
    let a = parse_expr("1/(x + 1) + 1/(x - 1)", &n).unwrap();
    let b = parse_expr("2*x/(x^2 - 1)", &n).unwrap();
    assert!((a - b).is_zero());
    let q = parse_expr("(x^2 - y^2)/(x - y)", &n).unwrap();
    assert_eq!(q, parse_expr("x + y", &n).unwrap());
}

#[test]
fn parse_errors_carry_columns() {
    let n = names(&["x"]);
    let err = parse_expr("x + $", &n).unwrap_err();
    assert_eq!(err.column, 5);
    let err = parse_expr("x + w", &n).unwrap_err();
    assert_eq!(err.column, 5);
    assert!(parse_expr("(x + 1", &n).is_err());
}

#[test]
fn rational_literals() {
    let n = names(&["x"]);
    assert_eq!(parse_expr("1/3", &n).unwrap(), ScalarField::constant(rat(1, 3)));
    assert_eq!(parse_expr("0.25", &n).unwrap(), ScalarField::constant(rat(1, 4)));
}

/// Central difference with a step scaled to the coordinate.
fn central_difference(e: &ScalarField, pt: &[f64], i: usize) -> f64 {
    let h = 1e-5 * pt[i].abs().max(1.0);
    let at = |d: f64| {
        let mut q = pt.to_vec();
        q[i] += d;
        let point = Point::new(q.iter().map(|&c| Rational::from_float(c).unwrap()).collect());
        e.eval_float(&point).unwrap()
    };
    (at(h) - at(-h)) / (2.0 * h)
}

proptest! {
    #![proptest_config(gen::config(0x5ca1a7))]

    #[test]
    fn partial_is_linear(a in gen::expr(3), b in gen::expr(3), c in -5i64..=5, i in 0usize..3) {
        let n = coord_names(3);
        let (ea, eb) = (a.field(&n), b.field(&n));
        let lhs = (ea.scale(&int(c)) + eb.clone()).partial(i);
        let rhs = ea.partial(i).scale(&int(c)) + eb.partial(i);
        prop_assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn clairaut(e in gen::expr(3), i in 0usize..3, j in 0usize..3) {
        let n = coord_names(3);
        let f = e.field(&n);
        let d = f.partial(i).partial(j) - f.partial(j).partial(i);
        prop_assert!(cube_test(3, 11).verdict(&d).is_zero());
    }

    #[test]
    fn partials_match_finite_differences(
        e in gen::expr(3),
        i in 0usize..3,
        pt in proptest::array::uniform3(-1.5f64..1.5),
    ) {
        let n = coord_names(3);
        let f = e.field(&n);
        let point = Point::new(pt.iter().map(|&c| Rational::from_float(c).unwrap()).collect());
        let exact = f.partial(i).eval_float(&point).unwrap();
        let value = f.eval_float(&point).unwrap();
        let fd = central_difference(&f, &pt, i);
        let scale = exact.abs().max(value.abs()).max(1.0);
        prop_assert!((fd - exact).abs() <= 1e-6 * scale, "fd {fd} exact {exact}");
    }

    #[test]
    fn simplify_is_idempotent(e in gen::expr(3)) {
        let f = e.field(&coord_names(3)).simplify();
        prop_assert_eq!(f.simplify(), f);
    }

    #[test]
    fn display_round_trips(e in gen::expr(3)) {
        let n = coord_names(3);
        let f = e.field(&n);
        let text = f.display(&n).to_string();
        let back = parse_expr(&text, &n).unwrap();
        prop_assert_eq!(back, f, "{}", text);
    }

    #[test]
    fn exact_eval_matches_float_eval(e in gen::poly(3)) {
        let n = coord_names(3);
        let f = e.field(&n);
        for pt in Sampler::new(Domain::cube(3), 5, 5).points() {
            let exact = f.eval(&pt).unwrap();
            prop_assert!(exact.is_exact());
            let fl = f.eval_float(&pt).unwrap();
            prop_assert!((exact.to_f64() - fl).abs() <= 1e-9 * fl.abs().max(1.0));
        }
    }
}

#[test]
fn rendered_expressions_parse() {
    let n = coord_names(2);
    let e = Expr::Div(Box::new(Expr::Var(0)), 2, 1);
    assert_eq!(e.render(&n), "(x / (2 + y^2))");
    assert!(e.field(&n).eval(&p(&[int(1), int(0)])).unwrap() == Value::Exact(rat(1, 2)));
}
