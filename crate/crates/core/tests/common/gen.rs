//! Random expressions and fields for property tests.

use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngSeed};

use contact_geom::scalar::{Domain, Interval};
use contact_geom::{parse_expr, FrameVec, ManifoldData, ScalarField, VectorField};

pub fn config(seed: u64) -> Config {
    Config {
        cases: 100,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..Config::default()
    }
}

/// Expression tree rendered to the manifest grammar.
#[derive(Debug, Clone)]
pub enum Expr {
    Int(i64),
    Frac(i64, i64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `e / (k + x_i^2)`, never singular.
    Div(Box<Expr>, i64, usize),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn render(&self, names: &[String]) -> String {
        match self {
            Expr::Int(n) => format!("({n})"),
            Expr::Frac(a, b) => format!("({a}/{b})"),
            Expr::Var(i) => names[*i].clone(),
            Expr::Add(a, b) => format!("({} + {})", a.render(names), b.render(names)),
            Expr::Sub(a, b) => format!("({} - {})", a.render(names), b.render(names)),
            Expr::Mul(a, b) => format!("({} * {})", a.render(names), b.render(names)),
            Expr::Div(a, k, i) => format!("({} / ({k} + {}^2))", a.render(names), names[*i]),
            Expr::Pow(a, p) => format!("({})^{p}", a.render(names)),
            Expr::Exp(a) => format!("exp({})", a.render(names)),
        }
    }

    pub fn field(&self, names: &[String]) -> ScalarField {
        parse_expr(&self.render(names), names).unwrap()
    }
}

fn atom(vars: usize) -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-3i64..=3).prop_map(Expr::Int),
        (-3i64..=3, 1i64..=4).prop_map(|(a, b)| Expr::Frac(a, b)),
        (0..vars).prop_map(Expr::Var),
        (0..vars).prop_map(Expr::Var),
    ]
}

/// Polynomial expressions: constants, coordinates, `+ - *`, small powers.
pub fn poly(vars: usize) -> impl Strategy<Value = Expr> {
    atom(vars).prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner, 0u32..=3).prop_map(|(a, p)| Expr::Pow(Box::new(a), p)),
        ]
    })
}

/// Exponent arguments: affine in one coordinate.
fn exp_arg(vars: usize) -> impl Strategy<Value = Expr> {
    (-2i64..=2, 0..vars, -1i64..=1).prop_map(|(c, i, d)| {
        Expr::Add(
            Box::new(Expr::Mul(Box::new(Expr::Int(c)), Box::new(Expr::Var(i)))),
            Box::new(Expr::Int(d)),
        )
    })
}

/// The full grammar, with divisions kept away from zero.
pub fn expr(vars: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        3 => atom(vars),
        1 => exp_arg(vars).prop_map(|a| Expr::Exp(Box::new(a))),
    ];
    leaf.prop_recursive(3, 12, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), 1i64..=3, 0..vars).prop_map(|(a, k, i)| Expr::Div(Box::new(a), k, i)),
            (inner, 0u32..=2).prop_map(|(a, p)| Expr::Pow(Box::new(a), p)),
        ]
    })
}

pub fn coord_names(n: usize) -> Vec<String> {
    ["x", "y", "z", "u", "v"][..n].iter().map(|s| s.to_string()).collect()
}

/// Vector field with polynomial coefficients.
pub fn poly_field(vars: usize) -> impl Strategy<Value = Vec<Expr>> {
    proptest::collection::vec(poly(vars), vars)
}

pub fn to_field(comps: &[Expr], names: &[String]) -> VectorField {
    VectorField(comps.iter().map(|c| c.field(names)).collect())
}

/// Warp factor of `diag(a(v), …, a(v), 1)`: always positive on the cube.
#[derive(Debug, Clone)]
pub enum Warp {
    /// `c0 + c1 v^2`
    Quadratic(i64, i64),
    /// `exp(c v)`
    Exp(i64),
    /// `(c0 + v^2)^-1`
    Inverse(i64),
}

impl Warp {
    pub fn render(&self, v: &str) -> String {
        match self {
            Warp::Quadratic(c0, c1) => format!("{c0} + {c1}*{v}^2"),
            Warp::Exp(c) => format!("exp({c}*{v})"),
            Warp::Inverse(c0) => format!("1/({c0} + {v}^2)"),
        }
    }
}

pub fn warp() -> impl Strategy<Value = Warp> {
    prop_oneof![
        (1i64..=4, 0i64..=3).prop_map(|(a, b)| Warp::Quadratic(a, b)),
        (-2i64..=2).prop_map(Warp::Exp),
        (1i64..=3).prop_map(Warp::Inverse),
    ]
}

/// Coordinate frame with metric `diag(a(v), …, a(v), 1)`, `ξ = ∂_v`, `φ = 0`.
pub fn warped_data(dim: usize, w: &Warp) -> ManifoldData {
    let names = coord_names(dim);
    let a = parse_expr(&w.render(&names[dim - 1]), &names).unwrap();
    let metric = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| match (i == j, i == dim - 1) {
                    (false, _) => ScalarField::zero(),
                    (true, true) => ScalarField::one(),
                    (true, false) => a.clone(),
                })
                .collect()
        })
        .collect();
    let mut domain = Domain::cube(dim);
    domain.boxes[dim - 1] = Interval::new(contact_geom::scalar::int(-1), contact_geom::scalar::int(1));
    ManifoldData {
        name: "warped".into(),
        coordinates: names,
        frame: (0..dim).map(|i| VectorField::coordinate(i, dim)).collect(),
        metric,
        phi: vec![FrameVec::zero(dim); dim],
        xi: FrameVec::basis(dim - 1, dim),
        domain,
        seed: 7,
        samples: 20,
        tol: 1e-9,
    }
}
