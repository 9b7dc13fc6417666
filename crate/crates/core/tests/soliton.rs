mod common;

use common::gen::{self, coord_names};
use common::*;
use contact_geom::curvature::{Connection, Curvature};
use contact_geom::scalar::{int, rat};
use contact_geom::soliton::*;
use contact_geom::{FrameVec, Manifold, ManifoldData, Rational, ScalarField, Tensor2};
use proptest::prelude::*;
use std::sync::LazyLock;

struct Fixture {
    m: Manifold,
    conn: Connection,
    curv: Curvature,
}

fn build(d: ManifoldData) -> Fixture {
    let m = load(d);
    let conn = Connection::koszul(&m);
    let curv = Curvature::new(&m, &conn);
    Fixture { m, conn, curv }
}

impl Fixture {
    fn problem(&self, potential: Potential) -> SolitonProblem<'_> {
        SolitonProblem {
            manifold: &self.m,
            connection: &self.conn,
            curvature: &self.curv,
            potential,
        }
    }

    fn vector(&self, comps: &[&str]) -> Potential {
        Potential::Vector(self.m.to_frame(&field(comps, self.m.coordinates())))
    }
}

static EX1: LazyLock<Fixture> = LazyLock::new(|| build(example1_data()));
static EX2: LazyLock<Fixture> = LazyLock::new(|| build(example2_data()));
static EX3: LazyLock<Fixture> = LazyLock::new(|| build(example3_data()));
static FLAT: LazyLock<Fixture> = LazyLock::new(|| build(flat_data(3)));

const EX1_V: [&str; 5] = ["x", "y", "z", "u", "1"];
const EX2_V: [&str; 5] = ["2*x", "2*y", "2*z", "2*u", "v"];
const EX3_V: [&str; 3] = ["exp(2*z)", "4*(y + z)", "0"];
const EX2_F: &str = "x^2 + y^2 + z^2 + u^2 + v^2/2";

fn zero(m: &Manifold, t: &Tensor2) -> bool {
    t.components().all(|(_, c)| m.zero_test().verdict(c).is_zero())
}

fn entry(table: &[PairResidual], i: usize, j: usize) -> &PairResidual {
    table.iter().find(|r| (r.i, r.j) == (i, j)).unwrap()
}

#[test]
fn example2_vector_form_solves_exactly() {
    let f = &*EX2;
    let rep = solve_soliton(&f.problem(f.vector(&EX2_V))).unwrap();
    assert_eq!(rep.lambda_tilde.rational, Some(int(0)));
    assert_eq!(rep.mu.rational, Some(int(0)));
    assert_eq!(rep.lambda, "p/2 + 1/5");
    assert!(rep.exact_fit);
    assert!(rep.residual_table.iter().all(|r| r.zero));
}

#[test]
fn example1_solution_with_vanishing_star_ricci() {
    // S* ≡ 0 here and L_V g = 4(g − η⊗η), so 4 + 2λ̃ = 0 and 2μ − 4 = 0
    let f = &*EX1;
    assert!(f.curv.star.is_zero());
    let rep = solve_soliton(&f.problem(f.vector(&EX1_V))).unwrap();
    assert_eq!(rep.lambda_tilde.value, Some(-2.0));
    assert_eq!(rep.mu.value, Some(2.0));
    assert!(rep.exact_fit);
    assert_eq!(rep.lambda, "p/2 - 9/5");

    // the printed constants leave 2(g − η⊗η)
    let v = verify_soliton(&f.problem(f.vector(&EX1_V)), &int(-1), &int(1));
    assert!(!v.passed);
    let expect = [(1, 2.0), (2, 2.0), (3, 2.0), (4, 2.0), (5, 0.0)];
    for (i, abs) in expect {
        assert!((entry(&v.residual_table, i, i).max_abs - abs).abs() < 1e-9, "({i},{i})");
    }
}

#[test]
fn example3_verify_table() {
    let f = &*EX3;
    let v = verify_soliton(&f.problem(f.vector(&EX3_V)), &int(-4), &int(4));
    assert_eq!(v.lambda, "p/2 - 11/3");
    assert!(!v.passed);
    let e11 = entry(&v.residual_table, 1, 1);
    assert_eq!(e11.value, "-8");
    assert!(!e11.zero);
    assert!(entry(&v.residual_table, 2, 2).zero);
    assert!(entry(&v.residual_table, 3, 3).zero);
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        assert!(entry(&v.residual_table, i, j).zero);
    }
    assert_eq!(v.residual_table.len(), 6);
}

#[test]
fn example3_best_fit_matches_normal_equations() {
    // 2λ̃ = 0, 8 + 2λ̃ = 0, 2λ̃ + 2μ = 0 in the least-squares sense
    let rows: [(f64, f64, f64); 3] = [(2.0, 0.0, 0.0), (2.0, 0.0, -8.0), (2.0, 2.0, 0.0)];
    let (mut aa, mut ab, mut bb, mut ay, mut by) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (a, b, y) in rows {
        aa += a * a;
        ab += a * b;
        bb += b * b;
        ay += a * y;
        by += b * y;
    }
    let det = aa * bb - ab * ab;
    let (lt, mu) = ((ay * bb - by * ab) / det, (aa * by - ab * ay) / det);
    let resid = rows
        .iter()
        .map(|(a, b, y)| (a * lt + b * mu - y).abs())
        .fold(0.0, f64::max);

    let f = &*EX3;
    let rep = solve_soliton(&f.problem(f.vector(&EX3_V))).unwrap();
    assert!((rep.lambda_tilde.value.unwrap() - lt).abs() < 1e-9);
    assert!((rep.mu.value.unwrap() - mu).abs() < 1e-9);
    assert!((rep.fit.residual - resid).abs() < 1e-9);
    assert!(rep.fit.residual > 0.0);
    assert!(!rep.exact_fit);
}

#[test]
fn trivial_residuals_vanish() {
    let f = &*FLAT;
    let r = soliton_residual(&f.m, &f.curv, &FrameVec::zero(3), &int(0), &int(0));
    assert!(r.is_zero());
    let g = gradient_soliton_residual(&f.m, &f.conn, &f.curv, &ScalarField::int(5), &int(0), &int(0));
    assert!(g.is_zero());
}

#[test]
fn example2_gradient_form_audit() {
    let f = &*EX2;
    let pot = Potential::Function(ex(EX2_F, f.m.coordinates()));
    let v = verify_soliton(&f.problem(pot), &int(0), &int(0));
    assert!(!v.passed);
    // Hess f(e1,e1) = v², S*(e1,e1) = −1
    let n = f.m.coordinates();
    let r = gradient_soliton_residual(&f.m, &f.conn, &f.curv, &ex(EX2_F, n), &int(0), &int(0));
    assert!(f.m.zero_test().verdict(&(r.get(0, 0).clone() - ex("v^2 - 1", n))).is_zero());
    assert!(f.m.zero_test().verdict(&(r.get(4, 4).clone() - ex("2*v^2", n))).is_zero());

    // the Euclidean field of the printed gradient verifies in vector form
    let rep = verify_soliton(&f.problem(f.vector(&EX2_V)), &int(0), &int(0));
    assert!(rep.passed);
}

#[test]
fn xi_potential_on_kenmotsu_matches_elimination() {
    // L_ξ g = 2g − 2η⊗η and S* = S + 3g + η⊗η reduce the residual to 2λ̃ g + 2μ η⊗η
    let f = &*EX2;
    let p = f.problem(Potential::Vector(f.m.xi().clone()));
    let rep = solve_soliton(&p).unwrap();
    let lemma_star = f.curv.ricci.clone() + f.m.metric().scale_q(&int(3)) + f.m.eta_eta();
    let elim = (f.m.metric().clone() - f.m.eta_eta()).scale_q(&int(2)) + lemma_star.scale_q(&int(2));
    let fit = contact_geom::fit::least_squares(
        &f.m,
        &(0..5)
            .flat_map(|a| (0..5).map(move |b| (a, b)))
            .map(|(a, b)| contact_geom::fit::Equation {
                coeffs: vec![
                    f.m.metric().get(a, b).scale(&int(2)),
                    f.m.eta_eta().get(a, b).scale(&int(2)),
                ],
                rhs: -elim.get(a, b).clone(),
            })
            .collect::<Vec<_>>(),
        2,
    )
    .unwrap();
    assert_eq!(rep.lambda_tilde.rational, fit.params[0].rational);
    assert_eq!(rep.mu.rational, fit.params[1].rational);
    assert_eq!(rep.lambda_tilde.rational, Some(int(0)));
}

#[test]
fn solve_is_stable_under_more_samples_and_permutation() {
    let mut d = example2_data();
    d.samples = 80;
    let more = build(d);
    let rep = solve_soliton(&more.problem(more.vector(&EX2_V))).unwrap();
    assert_eq!(rep.lambda_tilde.rational, Some(int(0)));
    assert_eq!(rep.mu.rational, Some(int(0)));

    let perm = build(example2_data().permute_frame(&[3, 4, 0, 1, 2]));
    let rep = solve_soliton(&perm.problem(perm.vector(&EX2_V))).unwrap();
    assert_eq!(rep.lambda_tilde.rational, Some(int(0)));
    assert_eq!(rep.mu.rational, Some(int(0)));

    let perm = build(example3_data().permute_frame(&[1, 2, 0]));
    let a = solve_soliton(&perm.problem(perm.vector(&EX3_V))).unwrap();
    let b = solve_soliton(&EX3.problem(EX3.vector(&EX3_V))).unwrap();
    assert!((a.lambda_tilde.value.unwrap() - b.lambda_tilde.value.unwrap()).abs() < 1e-9);
    assert!((a.mu.value.unwrap() - b.mu.value.unwrap()).abs() < 1e-9);
}

#[test]
fn theorem_instances() {
    let f = &*EX2;
    let p = f.problem(f.vector(&EX2_V));
    let rep = check_theorem_instances(&p, &Instance::Kenmotsu, &int(0), &int(0));
    assert!(rep.passed(), "{rep:?}");

    let f = &*EX1;
    let p = f.problem(f.vector(&EX1_V));
    let rep = check_theorem_instances(&p, &Instance::Kenmotsu, &int(-1), &int(1));
    assert!(rep.get("lambda_mu").unwrap().passed);
    assert!(rep.get("contact_potential").unwrap().passed);
    assert!(rep.get("strict_contact").unwrap().passed);

    let f = &*EX3;
    let p = f.problem(f.vector(&EX3_V));
    let rep = check_theorem_instances(&p, &Instance::Nullity { kappa: int(-2) }, &int(-4), &int(4));
    assert!(!rep.get("hypothesis").unwrap().passed);
    assert!(rep.get("star_ricci_flat").unwrap().passed);
    assert!(rep.get("kappa").unwrap().passed);
    let rep = check_theorem_instances(&p, &Instance::Nullity { kappa: int(-2) }, &int(-4), &int(3));
    assert!(rep.get("hypothesis").unwrap().passed);
}

#[test]
fn classification_threshold() {
    let c = classify(&int(-1), 2, None);
    assert_eq!(c.threshold, "8/5");
    let c = classify(&int(-1), 2, Some(&int(0)));
    assert_eq!(c.verdict.as_deref(), Some("shrinking"));
    let c = classify(&int(0), 2, Some(&rat(-2, 5)));
    assert_eq!(c.verdict.as_deref(), Some("steady"));
    let c = classify(&int(0), 2, Some(&int(2)));
    assert_eq!(c.verdict.as_deref(), Some("expanding"));
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(a, b)| rat(a, b))
}

proptest! {
    #![proptest_config(gen::config(0x50117))]

    #[test]
    fn residual_is_affine_in_constants(
        l1 in small_rational(), m1 in small_rational(),
        l2 in small_rational(), m2 in small_rational(),
    ) {
        let f = &*EX3;
        let p = f.problem(f.vector(&EX3_V));
        let d = p.residual(&l1, &m1) - p.residual(&l2, &m2);
        let expected = f.m.metric().scale_q(&(int(2) * (&l1 - &l2)))
            + f.m.eta_eta().scale_q(&(int(2) * (&m1 - &m2)));
        prop_assert!((d - expected).is_zero());
    }

    #[test]
    fn vector_form_of_gradient_is_twice_gradient_form(e in gen::poly(5), l in small_rational(), mu in small_rational()) {
        let f = &*EX2;
        let pot = e.field(&coord_names(5));
        let v = soliton_residual(&f.m, &f.curv, &f.m.gradient(&pot), &l, &mu);
        let g = gradient_soliton_residual(&f.m, &f.conn, &f.curv, &pot, &l, &mu);
        prop_assert!(zero(&f.m, &(v - g.scale_q(&int(2)))));
    }
}
