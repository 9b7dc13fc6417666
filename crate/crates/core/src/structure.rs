//! Structure checks: almost contact axioms, Kenmotsu and almost Kenmotsu
//! conditions, nullity and η-Einstein fits, contact vector fields.

use serde::{Deserialize, Serialize};

use crate::curvature::{
    d2, fundamental_form, max_abs, nijenhuis_pair, wedge_1_2, Connection, Curvature, StructureTensors,
};
use crate::fit::{least_squares, Equation, Fit, FitError, Param};
use crate::geometry::{FrameOp, FrameVec, Manifold, Tensor2};
use crate::scalar::{int, rat, Rational, ScalarField, ZeroVerdict};

/// Salt for the random test fields used by the checkers.
const RANDOM_SALT: u64 = 0x5eed_f1e1d;
const RANDOM_PAIRS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub description: String,
    pub passed: bool,
    /// Max |value| over sample points and arguments.
    pub residual: f64,
    #[serde(flatten)]
    pub verdict: ZeroVerdict,
    /// Arguments at which the first failure was seen.
    pub at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Collects labelled scalar residuals and turns them into a [`Check`].
pub struct Residuals<'a> {
    m: &'a Manifold,
    entries: Vec<(String, ScalarField)>,
}

impl<'a> Residuals<'a> {
    pub fn new(m: &'a Manifold) -> Self {
        Residuals { m, entries: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, f: ScalarField) {
        self.entries.push((label.into(), f));
    }

    pub fn push_vec(&mut self, label: &str, v: &FrameVec) {
        for (k, c) in v.0.iter().enumerate() {
            self.push(format!("{label} component e{}", k + 1), c.clone());
        }
    }

    pub fn push_op(&mut self, label: &str, a: &FrameOp) {
        for (j, col) in a.cols.iter().enumerate() {
            self.push_vec(&format!("{label} on e{}", j + 1), col);
        }
    }

    pub fn finish(self, name: &str, description: &str) -> Check {
        let mut residual: f64 = 0.0;
        let mut verdict = ZeroVerdict::ProvedZero;
        let mut at = None;
        for (label, f) in &self.entries {
            if f.is_zero() {
                continue;
            }
            let v = self.m.zero_test().verdict(f);
            residual = residual.max(match &v {
                ZeroVerdict::NumericallyZero { max_abs } => *max_abs,
                _ => max_abs(self.m, f),
            });
            match (&verdict, v) {
                (ZeroVerdict::NonZero { .. }, _) => {}
                (_, v @ ZeroVerdict::NonZero { .. }) => {
                    verdict = v;
                    at = Some(label.clone());
                }
                (_, ZeroVerdict::NumericallyZero { max_abs }) => {
                    let prev = match verdict {
                        ZeroVerdict::NumericallyZero { max_abs } => max_abs,
                        _ => 0.0,
                    };
                    verdict = ZeroVerdict::NumericallyZero {
                        max_abs: prev.max(max_abs),
                    };
                }
                (_, ZeroVerdict::ProvedZero) => {}
            }
        }
        Check {
            name: name.into(),
            description: description.into(),
            passed: verdict.is_zero(),
            residual,
            verdict,
            at,
        }
    }
}

/// Check on a single numeric value, e.g. one built from eigenvalues.
pub fn scalar_check(m: &Manifold, name: &str, description: &str, value: f64) -> Check {
    let residual = value.abs();
    let verdict = if value == 0.0 {
        ZeroVerdict::ProvedZero
    } else if residual < m.tol() {
        ZeroVerdict::NumericallyZero { max_abs: residual }
    } else {
        ZeroVerdict::NonZero {
            witness: m.points()[0].clone(),
            value,
        }
    };
    Check {
        name: name.into(),
        description: description.into(),
        passed: verdict.is_zero(),
        residual,
        verdict,
        at: None,
    }
}

fn label1(a: usize) -> String {
    format!("e{}", a + 1)
}

/// Frame vectors followed by random fields, with labels.
pub fn test_vectors(m: &Manifold) -> Vec<(String, FrameVec)> {
    let mut out: Vec<_> = (0..m.dim()).map(|a| (label1(a), m.basis(a))).collect();
    for (k, v) in m.random_fields(RANDOM_PAIRS, RANDOM_SALT).into_iter().enumerate() {
        out.push((format!("random field {}", k + 1), v));
    }
    out
}

/// Frame pairs followed by random pairs, with labels.
pub fn test_pairs(m: &Manifold) -> Vec<(String, FrameVec, FrameVec)> {
    let dim = m.dim();
    let mut out = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            out.push((format!("({},{})", label1(a), label1(b)), m.basis(a), m.basis(b)));
        }
    }
    let rnd = m.random_fields(2 * RANDOM_PAIRS, RANDOM_SALT ^ 0xabcd);
    for k in 0..RANDOM_PAIRS {
        out.push((
            format!("random pair {}", k + 1),
            rnd[2 * k].clone(),
            rnd[2 * k + 1].clone(),
        ));
    }
    out
}

fn check_vectors(m: &Manifold, name: &str, desc: &str, f: impl Fn(&FrameVec) -> FrameVec) -> Check {
    let mut r = Residuals::new(m);
    for (label, x) in test_vectors(m) {
        r.push_vec(&label, &f(&x));
    }
    r.finish(name, desc)
}

fn check_scalars(m: &Manifold, name: &str, desc: &str, f: impl Fn(&FrameVec) -> ScalarField) -> Check {
    let mut r = Residuals::new(m);
    for (label, x) in test_vectors(m) {
        r.push(label, f(&x));
    }
    r.finish(name, desc)
}

fn check_pairs_vec(
    m: &Manifold,
    name: &str,
    desc: &str,
    f: impl Fn(&FrameVec, &FrameVec) -> FrameVec,
) -> Check {
    let mut r = Residuals::new(m);
    for (label, x, y) in test_pairs(m) {
        r.push_vec(&label, &f(&x, &y));
    }
    r.finish(name, desc)
}

fn check_pairs(
    m: &Manifold,
    name: &str,
    desc: &str,
    f: impl Fn(&FrameVec, &FrameVec) -> ScalarField,
) -> Check {
    let mut r = Residuals::new(m);
    for (label, x, y) in test_pairs(m) {
        r.push(label, f(&x, &y));
    }
    r.finish(name, desc)
}

fn two() -> Rational {
    int(2)
}

fn n_of(m: &Manifold) -> i64 {
    m.n() as i64
}

/// `(L_V g)(X,Y)` for arbitrary fields.
pub fn lie_metric_pair(m: &Manifold, v: &FrameVec, x: &FrameVec, y: &FrameVec) -> ScalarField {
    m.apply(v, &m.g(x, y)) - m.g(&m.bracket(v, x), y) - m.g(x, &m.bracket(v, y))
}

/// `dη(X,Y) = X(η(Y)) − Y(η(X)) − η([X,Y])`.
pub fn d_eta_pair(m: &Manifold, x: &FrameVec, y: &FrameVec) -> ScalarField {
    m.apply(x, &m.eta(y)) - m.apply(y, &m.eta(x)) - m.eta(&m.bracket(x, y))
}

pub fn check_almost_contact(m: &Manifold) -> CheckReport {
    let xi = m.xi();
    let checks = vec![
        check_vectors(m, "phi_squared", "phi^2 X + X - eta(X) xi = 0", |x| {
            m.phi_of(&m.phi_of(x)) + x.clone() - xi.scale(&m.eta(x))
        }),
        {
            let mut r = Residuals::new(m);
            r.push("xi", m.eta(xi) - ScalarField::one());
            r.finish("eta_xi", "eta(xi) = 1")
        },
        check_pairs(
            m,
            "compatibility",
            "g(phi X, phi Y) - g(X,Y) + eta(X) eta(Y) = 0",
            |x, y| m.g(&m.phi_of(x), &m.phi_of(y)) - m.g(x, y) + m.eta(x) * m.eta(y),
        ),
        {
            let mut r = Residuals::new(m);
            r.push_vec("xi", &m.phi_of(xi));
            r.finish("phi_xi", "phi xi = 0")
        },
        check_scalars(m, "eta_phi", "eta(phi X) = 0", |x| m.eta(&m.phi_of(x))),
        check_scalars(m, "eta_metric", "g(X, xi) - eta(X) = 0", |x| m.g(x, xi) - m.eta(x)),
        check_pairs(m, "phi_skew", "g(phi X, Y) + g(X, phi Y) = 0", |x, y| {
            m.g(&m.phi_of(x), y) + m.g(x, &m.phi_of(y))
        }),
    ];
    CheckReport {
        name: "almost-contact".into(),
        checks,
    }
}

fn d_phi_check(m: &Manifold) -> Check {
    let phi_form = fundamental_form(m);
    let d_phi = d2(m, &phi_form);
    let wedge = wedge_1_2(m.eta_form(), &phi_form);
    let mut r = Residuals::new(m);
    for ((a, b, c), v) in d_phi.components() {
        r.push(
            format!("({},{},{})", label1(a), label1(b), label1(c)),
            v - &wedge.get(a, b, c).scale(&two()),
        );
    }
    r.finish("d_phi", "d Phi - 2 eta ^ Phi = 0")
}

fn closed_eta_check(m: &Manifold) -> Check {
    check_pairs(m, "closed_eta", "d eta = 0", |x, y| d_eta_pair(m, x, y))
}

pub fn check_kenmotsu(m: &Manifold, conn: &Connection, curv: &Curvature) -> CheckReport {
    let xi = m.xi();
    let phi = m.phi();
    let n2 = int(2 * n_of(m));
    let d_eta = crate::curvature::d1(m, m.eta_form());
    let checks = vec![
        check_pairs_vec(
            m,
            "kenmotsu",
            "(nabla_X phi) Y - g(phi X, Y) xi + eta(Y) phi X = 0",
            |x, y| {
                conn.nabla_op_apply(m, phi, x, y) - xi.scale(&m.g(&m.phi_of(x), y))
                    + m.phi_of(x).scale(&m.eta(y))
            },
        ),
        check_vectors(m, "nabla_xi", "nabla_X xi - X + eta(X) xi = 0", |x| {
            conn.nabla(m, x, xi) - x.clone() + xi.scale(&m.eta(x))
        }),
        check_pairs(
            m,
            "nabla_eta",
            "(nabla_X eta) Y - g(X,Y) + eta(X) eta(Y) = 0",
            |x, y| conn.nabla_form(m, m.eta_form(), x, y) - m.g(x, y) + m.eta(x) * m.eta(y),
        ),
        check_pairs_vec(
            m,
            "curvature_xi",
            "R(X,Y) xi - eta(X) Y + eta(Y) X = 0",
            |x, y| curv.apply(x, y, xi) - y.scale(&m.eta(x)) + x.scale(&m.eta(y)),
        ),
        check_scalars(m, "ricci_xi", "S(X, xi) + 2n eta(X) = 0", |x| {
            curv.ricci_of(x, xi) + m.eta(x).scale(&n2)
        }),
        check_pairs(
            m,
            "lie_xi_metric",
            "(L_xi g)(X,Y) - 2 g(X,Y) + 2 eta(X) eta(Y) = 0",
            |x, y| {
                lie_metric_pair(m, xi, x, y) - m.g(x, y).scale(&two())
                    + (m.eta(x) * m.eta(y)).scale(&two())
            },
        ),
        closed_eta_check(m),
        d_phi_check(m),
        check_pairs_vec(m, "normal", "N_phi(X,Y) = 0", |x, y| nijenhuis_pair(m, &d_eta, x, y)),
    ];
    CheckReport {
        name: "kenmotsu".into(),
        checks,
    }
}

pub fn check_almost_kenmotsu(m: &Manifold, conn: &Connection, st: &StructureTensors) -> CheckReport {
    let xi = m.xi();
    let phi = m.phi();
    let hp = &st.h_prime;
    let mut b16 = Residuals::new(m);
    b16.push_vec("h xi", &st.h.apply(xi));
    b16.push_vec("h' xi", &hp.apply(xi));
    let mut b17 = Residuals::new(m);
    b17.push_op("h phi + phi h", &(st.h.compose(phi) + phi.compose(&st.h)));
    let mut tr = Residuals::new(m);
    tr.push("tr h", st.h.trace());
    tr.push("tr h'", hp.trace());
    let checks = vec![
        closed_eta_check(m),
        d_phi_check(m),
        check_vectors(m, "nabla_xi_h", "nabla_X xi - X + eta(X) xi - h'X = 0", |x| {
            conn.nabla(m, x, xi) - x.clone() + xi.scale(&m.eta(x)) - hp.apply(x)
        }),
        b16.finish("h_xi", "h xi = h' xi = 0"),
        b17.finish("h_phi", "h phi + phi h = 0"),
        tr.finish("trace_h", "tr h = tr h' = 0"),
    ];
    CheckReport {
        name: "almost-kenmotsu".into(),
        checks,
    }
}

pub fn check_kenmotsu_lemmas(m: &Manifold, conn: &Connection, curv: &Curvature) -> CheckReport {
    let xi = m.xi();
    let q = &curv.ricci_op;
    let n = n_of(m);
    let checks = vec![
        check_vectors(m, "nabla_q_xi", "(nabla_X Q) xi + QX + 2n X = 0", |x| {
            conn.nabla_op_apply(m, q, x, xi) + q.apply(x) + x.scale_q(&int(2 * n))
        }),
        check_vectors(m, "nabla_xi_q", "(nabla_xi Q) X + 2 QX + 4n X = 0", |x| {
            conn.nabla_op_apply(m, q, xi, x) + q.apply(x).scale_q(&two()) + x.scale_q(&int(4 * n))
        }),
        check_pairs(
            m,
            "star_ricci",
            "S*(X,Y) - S(X,Y) - (2n-1) g(X,Y) - eta(X) eta(Y) = 0",
            |x, y| {
                curv.star.eval(x, y) - curv.ricci_of(x, y) - m.g(x, y).scale(&int(2 * n - 1))
                    - m.eta(x) * m.eta(y)
            },
        ),
    ];
    CheckReport {
        name: "kenmotsu-lemmas".into(),
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullityReport {
    pub kappa: Param,
    pub mu: Param,
    #[serde(flatten)]
    pub fit: Fit,
    pub exact_fit: bool,
    /// `|α|`, the largest absolute eigenvalue of `h′` over the samples.
    pub alpha: Option<f64>,
    pub checks: CheckReport,
}

/// `κ(η(Y)X − η(X)Y)` and `η(Y)h′X − η(X)h′Y`.
fn nullity_terms(m: &Manifold, hp: &FrameOp, x: &FrameVec, y: &FrameVec) -> (FrameVec, FrameVec) {
    let (ex, ey) = (m.eta(x), m.eta(y));
    (
        x.scale(&ey) - y.scale(&ex),
        hp.apply(x).scale(&ey) - hp.apply(y).scale(&ex),
    )
}

/// Least-squares fit of `R(X,Y)ξ = κ(η(Y)X − η(X)Y) + μ(η(Y)h′X − η(X)h′Y)`.
pub fn solve_nullity(
    m: &Manifold,
    conn: &Connection,
    curv: &Curvature,
    st: &StructureTensors,
) -> Result<NullityReport, FitError> {
    let dim = m.dim();
    let xi = m.xi();
    let hp = &st.h_prime;
    let mut eqs = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            let (ka, mu) = nullity_terms(m, hp, &m.basis(a), &m.basis(b));
            let r = curv.apply(&m.basis(a), &m.basis(b), xi);
            for l in 0..dim {
                eqs.push(Equation {
                    coeffs: vec![ka.0[l].clone(), mu.0[l].clone()],
                    rhs: r.0[l].clone(),
                });
            }
        }
    }
    let fit = least_squares(m, &eqs, 2)?;
    let kappa = fit.params[0].clone();
    let mu = fit.params[1].clone();
    let exact_fit = fit.is_exact_fit(m.tol());
    let alpha = st.spectrum.alpha_abs();
    let checks = nullity_checks(m, conn, curv, st, &kappa, &mu, alpha);
    Ok(NullityReport {
        kappa,
        mu,
        fit,
        exact_fit,
        alpha,
        checks,
    })
}

fn nullity_checks(
    m: &Manifold,
    conn: &Connection,
    curv: &Curvature,
    st: &StructureTensors,
    kappa: &Param,
    mu: &Param,
    alpha: Option<f64>,
) -> CheckReport {
    let mut checks = Vec::new();
    let Some(k) = kappa.to_rational() else {
        return CheckReport {
            name: "nullity".into(),
            checks,
        };
    };
    let mu_q = mu.to_rational().unwrap_or_else(|| int(0));
    let xi = m.xi();
    let hp = &st.h_prime;
    let n = n_of(m);
    let one = int(1);
    let k1 = &k + &one;

    checks.push(check_pairs_vec(
        m,
        "nullity",
        "R(X,Y) xi - kappa (eta(Y) X - eta(X) Y) - mu (eta(Y) h'X - eta(X) h'Y) = 0",
        |x, y| {
            let (a, b) = nullity_terms(m, hp, x, y);
            curv.apply(x, y, xi) - a.scale_q(&k) - b.scale_q(&mu_q)
        },
    ));
    checks.push(check_pairs_vec(
        m,
        "curvature_xi_h",
        "R(X,Y) xi - eta(X)(Y + h'Y) + eta(Y)(X + h'X) - (nabla_X h')Y + (nabla_Y h')X = 0",
        |x, y| {
            curv.apply(x, y, xi) - (y.clone() + hp.apply(y)).scale(&m.eta(x))
                + (x.clone() + hp.apply(x)).scale(&m.eta(y))
                - conn.nabla_op_apply(m, hp, x, y)
                + conn.nabla_op_apply(m, hp, y, x)
        },
    ));
    checks.push(check_vectors(
        m,
        "h_prime_squared",
        "h'^2 X + (kappa + 1)(X - eta(X) xi) = 0",
        |x| hp.apply(&hp.apply(x)) + (x.clone() - xi.scale(&m.eta(x))).scale_q(&k1),
    ));
    checks.push(check_pairs_vec(
        m,
        "curvature_xi_first",
        "R(xi,X)Y - kappa (g(X,Y) xi - eta(Y) X) + 2 (g(h'X,Y) xi - eta(Y) h'X) = 0",
        |x, y| {
            curv.apply(xi, x, y) - (xi.scale(&m.g(x, y)) - x.scale(&m.eta(y))).scale_q(&k)
                + (xi.scale(&m.g(&hp.apply(x), y)) - hp.apply(x).scale(&m.eta(y))).scale_q(&two())
        },
    ));
    checks.push(check_vectors(
        m,
        "ricci_operator",
        "QX + 2n X - 2n (kappa + 1) eta(X) xi + 2n h'X = 0",
        |x| {
            let n2 = int(2 * n);
            curv.ricci_op.apply(x) + x.scale_q(&n2) - xi.scale(&m.eta(x)).scale_q(&(&n2 * &k1))
                + hp.apply(x).scale_q(&n2)
        },
    ));
    {
        let mut r = Residuals::new(m);
        let expect = int(2 * n) * (&k - int(2 * n));
        r.push("r", &curv.scalar - &ScalarField::constant(expect));
        checks.push(r.finish("scalar_curvature", "r - 2n (kappa - 2n) = 0"));
    }
    checks.push(check_pairs(
        m,
        "nabla_eta_h",
        "(nabla_X eta) Y - g(X,Y) + eta(X) eta(Y) - g(h'X, Y) = 0",
        |x, y| {
            conn.nabla_form(m, m.eta_form(), x, y) - m.g(x, y) + m.eta(x) * m.eta(y)
                - m.g(&hp.apply(x), y)
        },
    ));
    checks.push(check_pairs(
        m,
        "star_ricci_nullity",
        "S*(X,Y) + (kappa + 2)(g(X,Y) - eta(X) eta(Y)) = 0",
        |x, y| {
            let k2 = &k + int(2);
            curv.star.eval(x, y) + (m.g(x, y) - m.eta(x) * m.eta(y)).scale(&k2)
        },
    ));
    if let (Some(a), Some(kf)) = (alpha, kappa.value) {
        checks.push(scalar_check(
            m,
            "alpha_squared",
            "alpha^2 + kappa + 1 = 0",
            a * a + kf + 1.0,
        ));
    }
    CheckReport {
        name: "nullity".into(),
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaEinsteinReport {
    pub a: Param,
    pub b: Param,
    #[serde(flatten)]
    pub fit: Fit,
    pub exact_fit: bool,
    pub einstein: bool,
    /// `1 + r/2n` and `−(2n + 1 + r/2n)`, rendered.
    pub expected_a: String,
    pub expected_b: String,
    pub checks: CheckReport,
}

pub fn solve_eta_einstein(m: &Manifold, curv: &Curvature) -> Result<EtaEinsteinReport, FitError> {
    fit_eta_einstein(m, &curv.ricci, &curv.scalar)
}

/// Fits `S = a g + b η⊗η` for a given symmetric tensor `s` with trace `r`.
pub fn fit_eta_einstein(m: &Manifold, s: &Tensor2, r: &ScalarField) -> Result<EtaEinsteinReport, FitError> {
    let dim = m.dim();
    let ee = m.eta_eta();
    let mut eqs = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            eqs.push(Equation {
                coeffs: vec![m.metric().get(a, b).clone(), ee.get(a, b).clone()],
                rhs: s.get(a, b).clone(),
            });
        }
    }
    let fit = least_squares(m, &eqs, 2)?;
    let a = fit.params[0].clone();
    let b = fit.params[1].clone();
    let exact_fit = fit.is_exact_fit(m.tol());
    let einstein = exact_fit && b.value.is_some_and(|v| v.abs() < m.tol());
    let n = n_of(m);
    let r2n = r.scale(&rat(1, 2 * n));
    let ea = ScalarField::one() + r2n.clone();
    let eb = -(ScalarField::int(2 * n + 1) + r2n);
    let names = m.coordinates();
    let mut checks = Vec::new();
    if let (Some(qa), Some(qb)) = (a.to_rational(), b.to_rational()) {
        let (fa, fb) = (ScalarField::constant(qa), ScalarField::constant(qb));
        let mut r1 = Residuals::new(m);
        r1.push("a + b", &fa + &fb + ScalarField::int(2 * n));
        checks.push(r1.finish("sum", "a + b + 2n = 0"));
        let mut r2 = Residuals::new(m);
        r2.push("a", &fa - &ea);
        checks.push(r2.finish("a_from_r", "a - (1 + r/2n) = 0"));
        let mut r3 = Residuals::new(m);
        r3.push("b", &fb - &eb);
        checks.push(r3.finish("b_from_r", "b + (2n + 1 + r/2n) = 0"));
    }
    Ok(EtaEinsteinReport {
        a,
        b,
        fit,
        exact_fit,
        einstein,
        expected_a: ea.display(names).to_string(),
        expected_b: eb.display(names).to_string(),
        checks: CheckReport {
            name: "eta-einstein".into(),
            checks,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactReport {
    /// `f = η([V, ξ])`, rendered.
    pub f: String,
    pub is_contact: Check,
    /// `σ = (L_V η)(ξ)`, rendered.
    pub sigma: String,
    pub is_infinitesimal_contact: Check,
    pub is_strict: Check,
}

/// `(L_V η)(X) = V(η(X)) − η([V,X])`.
pub fn lie_eta(m: &Manifold, v: &FrameVec, x: &FrameVec) -> ScalarField {
    m.apply(v, &m.eta(x)) - m.eta(&m.bracket(v, x))
}

pub fn check_contact_field(m: &Manifold, v: &FrameVec) -> ContactReport {
    let xi = m.xi();
    let lv_xi = m.bracket(v, xi);
    let f = m.eta(&lv_xi);
    let mut rc = Residuals::new(m);
    rc.push_vec("[V,xi] - f xi", &(lv_xi - xi.scale(&f)));
    let sigma = lie_eta(m, v, xi);
    let is_infinitesimal_contact = check_scalars(
        m,
        "infinitesimal_contact",
        "(L_V eta)(X) - sigma eta(X) = 0",
        |x| lie_eta(m, v, x) - &sigma * &m.eta(x),
    );
    let is_strict = check_scalars(m, "strict", "(L_V eta)(X) = 0", |x| lie_eta(m, v, x));
    let names = m.coordinates();
    ContactReport {
        f: f.display(names).to_string(),
        is_contact: rc.finish("contact", "[V, xi] - f xi = 0"),
        sigma: sigma.display(names).to_string(),
        is_infinitesimal_contact,
        is_strict,
    }
}
