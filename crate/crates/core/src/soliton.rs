//! *-conformal η-Ricci solitons: residuals, solving and classification.
//!
//! The pressure `p` never appears as a number here. The soliton constant is
//! carried as `λ̃ = λ − p/2 − 1/(2n+1)`, so the vector form reads
//! `L_V g + 2S* + 2λ̃ g + 2μ η⊗η = 0` and the gradient form
//! `Hess f + S* + λ̃ g + μ η⊗η = 0`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::curvature::{hessian, lie_derivative_metric, max_abs, Connection, Curvature};
use crate::fit::{least_squares, Equation, Fit, FitError, Param};
use crate::geometry::{FrameVec, Manifold, Tensor2};
use crate::scalar::{fmt_rational, int, rat, Rational, ScalarField, ZeroVerdict};
use crate::structure::{check_contact_field, scalar_check, Check, CheckReport, Residuals};

/// Potential of the soliton: a vector field, or a function whose gradient is used.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    Vector(FrameVec),
    Function(ScalarField),
}

impl Potential {
    /// `V`, or `Df` for a function potential.
    pub fn field(&self, m: &Manifold) -> FrameVec {
        match self {
            Potential::Vector(v) => v.clone(),
            Potential::Function(f) => m.gradient(f),
        }
    }

    pub fn form(&self) -> Form {
        match self {
            Potential::Vector(_) => Form::Vector,
            Potential::Function(_) => Form::Gradient,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Vector,
    Gradient,
}

/// Everything a soliton computation needs.
pub struct SolitonProblem<'a> {
    pub manifold: &'a Manifold,
    pub connection: &'a Connection,
    pub curvature: &'a Curvature,
    pub potential: Potential,
}

impl SolitonProblem<'_> {
    pub fn n(&self) -> usize {
        self.manifold.n()
    }

    /// The part of the residual that does not depend on the constants:
    /// `L_V g + 2S*` (vector form) or `Hess f + S*` (gradient form).
    pub fn base(&self) -> Tensor2 {
        let m = self.manifold;
        match &self.potential {
            Potential::Vector(v) => {
                lie_derivative_metric(m, v) + self.curvature.star.scale_q(&int(2))
            }
            Potential::Function(f) => hessian(m, self.connection, f) + self.curvature.star.clone(),
        }
    }

    /// Coefficient multiplying both constants: 2 in vector form, 1 in gradient form.
    fn weight(&self) -> Rational {
        match self.potential {
            Potential::Vector(_) => int(2),
            Potential::Function(_) => int(1),
        }
    }

    pub fn residual(&self, lambda_tilde: &Rational, mu: &Rational) -> Tensor2 {
        let m = self.manifold;
        let w = self.weight();
        self.base()
            + m.metric().scale_q(&(&w * lambda_tilde))
            + m.eta_eta().scale_q(&(&w * mu))
    }
}

/// `L_V g + 2S* + 2λ̃ g + 2μ η⊗η`.
pub fn soliton_residual(
    m: &Manifold,
    curv: &Curvature,
    v: &FrameVec,
    lambda_tilde: &Rational,
    mu: &Rational,
) -> Tensor2 {
    lie_derivative_metric(m, v)
        + curv.star.scale_q(&int(2))
        + m.metric().scale_q(&(int(2) * lambda_tilde))
        + m.eta_eta().scale_q(&(int(2) * mu))
}

/// `Hess f + S* + λ̃ g + μ η⊗η`.
pub fn gradient_soliton_residual(
    m: &Manifold,
    conn: &Connection,
    curv: &Curvature,
    f: &ScalarField,
    lambda_tilde: &Rational,
    mu: &Rational,
) -> Tensor2 {
    hessian(m, conn, f)
        + curv.star.clone()
        + m.metric().scale_q(lambda_tilde)
        + m.eta_eta().scale_q(mu)
}

/// One entry of a residual table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairResidual {
    /// 1-based frame indices.
    pub i: usize,
    pub j: usize,
    pub value: String,
    pub max_abs: f64,
    pub zero: bool,
}

pub fn residual_table(m: &Manifold, t: &Tensor2) -> Vec<PairResidual> {
    let names = m.coordinates();
    let dim = t.dim();
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            let f = t.get(i, j);
            out.push(PairResidual {
                i: i + 1,
                j: j + 1,
                value: f.display(names).to_string(),
                max_abs: max_abs(m, f),
                zero: m.zero_test().verdict(f).is_zero(),
            });
        }
    }
    out
}

/// `λ = p/2 + c` with `c = λ̃ + 1/(2n+1)`, rendered.
pub fn render_lambda(lambda_tilde: &Rational, n: usize) -> String {
    let c = lambda_tilde + rat(1, 2 * n as i64 + 1);
    render_p_half_plus(&c)
}

fn render_p_half_plus(c: &Rational) -> String {
    if c.is_zero() {
        "p/2".into()
    } else if c.is_negative() {
        format!("p/2 - {}", fmt_rational(&-c))
    } else {
        format!("p/2 + {}", fmt_rational(c))
    }
}

fn render_lambda_float(lambda_tilde: f64, n: usize) -> String {
    let c = lambda_tilde + 1.0 / (2 * n + 1) as f64;
    if c < 0.0 {
        format!("p/2 - {}", -c)
    } else {
        format!("p/2 + {c}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    /// `p* = −2λ̃ − 2/(2n+1)`: shrinking below, steady at, expanding above.
    pub threshold: String,
    pub rule: String,
    pub p: Option<String>,
    pub lambda: Option<String>,
    pub verdict: Option<String>,
}

/// Shrinking iff `λ < 0`, with `λ = λ̃ + p/2 + 1/(2n+1)`.
pub fn classify(lambda_tilde: &Rational, n: usize, p: Option<&Rational>) -> Classification {
    let k = rat(2, 2 * n as i64 + 1);
    let threshold = -(int(2) * lambda_tilde) - &k;
    let t = fmt_rational(&threshold);
    let rule = format!("shrinking if p < {t}, steady if p = {t}, expanding if p > {t}");
    let (lambda, verdict) = match p {
        Some(p) => {
            let lambda = lambda_tilde + p / int(2) + rat(1, 2 * n as i64 + 1);
            let v = if lambda.is_negative() {
                "shrinking"
            } else if lambda.is_zero() {
                "steady"
            } else {
                "expanding"
            };
            (Some(fmt_rational(&lambda)), Some(v.to_string()))
        }
        None => (None, None),
    };
    Classification {
        threshold: t,
        rule,
        p: p.map(fmt_rational),
        lambda,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolitonReport {
    pub form: Form,
    pub lambda_tilde: Param,
    pub mu: Param,
    /// `λ` as a function of the pressure `p`.
    pub lambda: String,
    #[serde(flatten)]
    pub fit: Fit,
    pub exact_fit: bool,
    pub residual_table: Vec<PairResidual>,
    pub classification: Option<Classification>,
}

/// Least-squares `(λ̃, μ)` over all frame components and sample points.
pub fn solve_soliton(problem: &SolitonProblem) -> Result<SolitonReport, FitError> {
    let m = problem.manifold;
    let dim = m.dim();
    let base = problem.base();
    let w = problem.weight();
    let g = m.metric();
    let ee = m.eta_eta();
    let mut eqs = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            eqs.push(Equation {
                coeffs: vec![g.get(a, b).scale(&w), ee.get(a, b).scale(&w)],
                rhs: -base.get(a, b).clone(),
            });
        }
    }
    let fit = least_squares(m, &eqs, 2)?;
    let lt = fit.params[0].clone();
    let mu = fit.params[1].clone();
    let exact_fit = fit.is_exact_fit(m.tol());
    let n = problem.n();
    let lambda = match (&lt.rational, lt.value) {
        (Some(q), _) => render_lambda(q, n),
        (None, Some(v)) => render_lambda_float(v, n),
        (None, None) => "unconstrained".into(),
    };
    let table = match (lt.to_rational(), mu.to_rational()) {
        (Some(a), b) => residual_table(m, &problem.residual(&a, &b.unwrap_or_else(|| int(0)))),
        (None, _) => Vec::new(),
    };
    let classification = lt.rational.as_ref().map(|q| classify(q, n, None));
    Ok(SolitonReport {
        form: problem.potential.form(),
        lambda_tilde: lt,
        mu,
        lambda,
        fit,
        exact_fit,
        residual_table: table,
        classification,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub form: Form,
    pub lambda_tilde: String,
    pub mu: String,
    pub lambda: String,
    pub residual_table: Vec<PairResidual>,
    pub max_residual: f64,
    pub passed: bool,
}

/// Residual table at user-supplied constants.
pub fn verify_soliton(problem: &SolitonProblem, lambda_tilde: &Rational, mu: &Rational) -> VerifyReport {
    let m = problem.manifold;
    let table = residual_table(m, &problem.residual(lambda_tilde, mu));
    VerifyReport {
        form: problem.potential.form(),
        lambda_tilde: fmt_rational(lambda_tilde),
        mu: fmt_rational(mu),
        lambda: render_lambda(lambda_tilde, problem.n()),
        max_residual: table.iter().map(|r| r.max_abs).fold(0.0, f64::max),
        passed: table.iter().all(|r| r.zero),
        residual_table: table,
    }
}

/// Which theorem family an instance belongs to.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Kenmotsu,
    /// Almost Kenmotsu with `ξ` in the `(κ, μ)′`-nullity distribution.
    Nullity { kappa: Rational },
}

fn inequality_check(m: &Manifold, name: &str, description: &str, value: f64) -> Check {
    let residual = value.abs();
    let passed = residual >= m.tol();
    Check {
        name: name.into(),
        description: description.into(),
        passed,
        residual,
        verdict: if passed {
            ZeroVerdict::NonZero {
                witness: m.points()[0].clone(),
                value,
            }
        } else {
            ZeroVerdict::NumericallyZero { max_abs: residual }
        },
        at: None,
    }
}

/// Evaluates the hypotheses and conclusions of the soliton theorems on one instance.
pub fn check_theorem_instances(
    problem: &SolitonProblem,
    instance: &Instance,
    lambda_tilde: &Rational,
    mu: &Rational,
) -> CheckReport {
    let m = problem.manifold;
    let curv = problem.curvature;
    let sum = lambda_tilde + mu;
    let sum_f = crate::scalar::rational_to_f64(&sum);
    let mut checks = Vec::new();
    match instance {
        Instance::Kenmotsu => {
            let v = problem.potential.field(m);
            let contact = check_contact_field(m, &v);
            let mut hyp = contact.is_contact.clone();
            hyp.name = "contact_potential".into();
            checks.push(hyp);
            checks.push(scalar_check(m, "lambda_mu", "lambda_tilde + mu = 0", sum_f));
            let mut strict = contact.is_strict.clone();
            strict.name = "strict_contact".into();
            checks.push(strict);
            let mut r = Residuals::new(m);
            let q = &curv.ricci_op;
            let n2 = int(2 * m.n() as i64);
            for j in 0..m.dim() {
                let e = m.basis(j);
                r.push_vec(&format!("e{}", j + 1), &(q.apply(&e) + e.scale_q(&n2)));
            }
            checks.push(r.finish("einstein", "QX + 2n X = 0"));
        }
        Instance::Nullity { kappa } => {
            checks.push(inequality_check(
                m,
                "hypothesis",
                "lambda_tilde + mu != 0",
                sum_f,
            ));
            let mut r = Residuals::new(m);
            for ((a, b), f) in curv.star.components() {
                r.push(format!("(e{},e{})", a + 1, b + 1), f.clone());
            }
            checks.push(r.finish("star_ricci_flat", "S* = 0"));
            checks.push(scalar_check(
                m,
                "kappa",
                "kappa + 2 = 0",
                crate::scalar::rational_to_f64(&(kappa + int(2))),
            ));
        }
    }
    CheckReport {
        name: "theorem".into(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_rendering() {
        assert_eq!(render_lambda(&int(-1), 2), "p/2 - 4/5");
        assert_eq!(render_lambda(&int(0), 2), "p/2 + 1/5");
        assert_eq!(render_lambda(&int(-4), 1), "p/2 - 11/3");
        assert_eq!(render_lambda(&rat(-1, 5), 2), "p/2");
    }

    #[test]
    fn classification_examples() {
        let c = classify(&int(-1), 2, Some(&int(0)));
        assert_eq!(c.lambda.as_deref(), Some("-4/5"));
        assert_eq!(c.verdict.as_deref(), Some("shrinking"));
        let c = classify(&int(0), 2, Some(&rat(-2, 5)));
        assert_eq!(c.verdict.as_deref(), Some("steady"));
        let c = classify(&int(0), 2, Some(&int(2)));
        assert_eq!(c.lambda.as_deref(), Some("6/5"));
        assert_eq!(c.verdict.as_deref(), Some("expanding"));
        let c = classify(&int(-1), 2, None);
        assert_eq!(c.threshold, "8/5");
        assert!(c.verdict.is_none());
    }
}
