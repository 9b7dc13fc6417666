//! Levi-Civita connection, curvature and the tensors built from them.

use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{determinant, FrameOp, FrameVec, Manifold, Tensor2};
use crate::scalar::{rat, Rational, ScalarField, ZeroVerdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurvatureError {
    #[error("plane spanned by the given fields is degenerate at every sample point")]
    DegeneratePlane,
}

/// Connection coefficients: `gamma[i][j]` is `∇_{e_i} e_j` in frame components.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub gamma: Vec<Vec<FrameVec>>,
}

impl Connection {
    /// Levi-Civita connection from the Koszul formula in frame form.
    pub fn koszul(m: &Manifold) -> Connection {
        let dim = m.dim();
        let g = m.metric();
        let gb = |a: usize, v: &FrameVec| m.g(&m.basis(a), v);
        // lower[i][j][k] = 2 g(∇_{e_i} e_j, e_k)
        let mut gamma = vec![vec![FrameVec::zero(dim); dim]; dim];
        for (i, row) in gamma.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let lower: Vec<ScalarField> = (0..dim)
                    .map(|k| {
                        m.derive(i, g.get(j, k)) + m.derive(j, g.get(k, i))
                            - m.derive(k, g.get(i, j))
                            - gb(i, m.frame_bracket(j, k))
                            - gb(j, m.frame_bracket(i, k))
                            + gb(k, m.frame_bracket(i, j))
                    })
                    .collect();
                let raised = m.sharp(&lower);
                *out = raised.scale_q(&rat(1, 2));
            }
        }
        Connection { gamma }
    }

    pub fn get(&self, i: usize, j: usize) -> &FrameVec {
        &self.gamma[i][j]
    }

    /// `∇_X Y`.
    pub fn nabla(&self, m: &Manifold, x: &FrameVec, y: &FrameVec) -> FrameVec {
        let dim = m.dim();
        let mut out = FrameVec((0..dim).map(|k| m.apply(x, &y.0[k])).collect());
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.0.iter().enumerate() {
                if yj.is_zero() || self.gamma[i][j].is_zero() {
                    continue;
                }
                out = out + self.gamma[i][j].scale(&(xi * yj));
            }
        }
        out
    }

    /// `(∇_X A)`, the (1,1)-tensor `Y ↦ ∇_X(AY) − A(∇_X Y)`.
    pub fn nabla_op(&self, m: &Manifold, a: &FrameOp, x: &FrameVec) -> FrameOp {
        let dim = m.dim();
        FrameOp {
            cols: (0..dim)
                .map(|j| {
                    let ej = m.basis(j);
                    self.nabla(m, x, &a.apply(&ej)) - a.apply(&self.nabla(m, x, &ej))
                })
                .collect(),
        }
    }

    /// `(∇_X A)Y` evaluated directly on `Y`.
    pub fn nabla_op_apply(&self, m: &Manifold, a: &FrameOp, x: &FrameVec, y: &FrameVec) -> FrameVec {
        self.nabla(m, x, &a.apply(y)) - a.apply(&self.nabla(m, x, y))
    }

    /// `(∇_X ω)(Y) = X(ω(Y)) − ω(∇_X Y)` for a 1-form given by frame components.
    pub fn nabla_form(&self, m: &Manifold, omega: &[ScalarField], x: &FrameVec, y: &FrameVec) -> ScalarField {
        let pair = |v: &FrameVec| -> ScalarField {
            v.0.iter().zip(omega).map(|(a, b)| a * b).sum()
        };
        m.apply(x, &pair(y)) - pair(&self.nabla(m, x, y))
    }

    /// `∇_X Y − ∇_Y X − [X, Y]`.
    pub fn torsion(&self, m: &Manifold, x: &FrameVec, y: &FrameVec) -> FrameVec {
        self.nabla(m, x, y) - self.nabla(m, y, x) - m.bracket(x, y)
    }

    /// `X(g(Y,Z)) − g(∇_X Y, Z) − g(Y, ∇_X Z)`.
    pub fn compatibility(&self, m: &Manifold, x: &FrameVec, y: &FrameVec, z: &FrameVec) -> ScalarField {
        m.apply(x, &m.g(y, z)) - m.g(&self.nabla(m, x, y), z) - m.g(y, &self.nabla(m, x, z))
    }
}

/// Riemann tensor and its contractions.
#[derive(Debug, Clone, PartialEq)]
pub struct Curvature {
    /// `r[i][j][k] = R(e_i, e_j) e_k`.
    pub r: Vec<Vec<Vec<FrameVec>>>,
    pub ricci: Tensor2,
    pub ricci_op: FrameOp,
    pub scalar: ScalarField,
    pub star: Tensor2,
    pub star_scalar: ScalarField,
}

impl Curvature {
    /// `R(e_i,e_j)e_k = ∇_{e_i}∇_{e_j}e_k − ∇_{e_j}∇_{e_i}e_k − ∇_{[e_i,e_j]}e_k`.
    pub fn new(m: &Manifold, conn: &Connection) -> Curvature {
        let dim = m.dim();
        let r: Vec<Vec<Vec<FrameVec>>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        (0..dim)
                            .map(|k| {
                                conn.nabla(m, &m.basis(i), conn.get(j, k))
                                    - conn.nabla(m, &m.basis(j), conn.get(i, k))
                                    - conn.nabla(m, m.frame_bracket(i, j), &m.basis(k))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        // S(X,Y) = trace(Z ↦ R(Z,X)Y)
        let ricci = Tensor2::from_fn(dim, |a, b| (0..dim).map(|l| r[l][a][b].0[l].clone()).sum());
        let ginv = m.metric_inv();
        let ricci_op = FrameOp {
            cols: (0..dim)
                .map(|b| {
                    let col: Vec<ScalarField> = (0..dim).map(|c| ricci.get(c, b).clone()).collect();
                    m.sharp(&col)
                })
                .collect(),
        };
        let contract = |t: &Tensor2| -> ScalarField {
            let mut acc = ScalarField::zero();
            for a in 0..dim {
                for b in 0..dim {
                    if !ginv[a][b].is_zero() && !t.get(a, b).is_zero() {
                        acc = acc + &ginv[a][b] * t.get(a, b);
                    }
                }
            }
            acc
        };
        let scalar = contract(&ricci);

        // S*(X,Y) = ½ trace(Z ↦ φ R(X, φY) Z)
        let phi = m.phi();
        let star = Tensor2::from_fn(dim, |a, b| {
            let phi_b = phi.apply(&m.basis(b));
            let mut acc = ScalarField::zero();
            for k in 0..dim {
                let rz = apply_r(&r, &m.basis(a), &phi_b, &m.basis(k));
                acc = acc + phi.apply(&rz).0[k].clone();
            }
            acc.scale(&rat(1, 2))
        });
        let star_scalar = contract(&star);

        Curvature {
            r,
            ricci,
            ricci_op,
            scalar,
            star,
            star_scalar,
        }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &FrameVec {
        &self.r[i][j][k]
    }

    /// `R(X,Y)Z` for arbitrary frame-component fields.
    pub fn apply(&self, x: &FrameVec, y: &FrameVec, z: &FrameVec) -> FrameVec {
        apply_r(&self.r, x, y, z)
    }

    /// The operator `R(X, Y)`.
    pub fn op(&self, x: &FrameVec, y: &FrameVec) -> FrameOp {
        let dim = x.dim();
        FrameOp {
            cols: (0..dim).map(|k| self.apply(x, y, &FrameVec::basis(k, dim))).collect(),
        }
    }

    /// `S(X, Y)`.
    pub fn ricci_of(&self, x: &FrameVec, y: &FrameVec) -> ScalarField {
        self.ricci.eval(x, y)
    }
}

fn apply_r(r: &[Vec<Vec<FrameVec>>], x: &FrameVec, y: &FrameVec, z: &FrameVec) -> FrameVec {
    let dim = x.dim();
    let mut out = FrameVec::zero(dim);
    for (i, xi) in x.0.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.0.iter().enumerate() {
            if yj.is_zero() || i == j {
                continue;
            }
            let xy = xi * yj;
            for (k, zk) in z.0.iter().enumerate() {
                if zk.is_zero() || r[i][j][k].is_zero() {
                    continue;
                }
                out = out + r[i][j][k].scale(&(&xy * zk));
            }
        }
    }
    out
}

/// `g(R(X,Y)Y, X) / (g(X,X)g(Y,Y) − g(X,Y)²)`.
pub fn sectional_curvature(
    m: &Manifold,
    curv: &Curvature,
    x: &FrameVec,
    y: &FrameVec,
) -> Result<ScalarField, CurvatureError> {
    let den = m.g(x, x) * m.g(y, y) - m.g(x, y).powi(2);
    let degenerate = den.is_zero()
        || m.points().iter().all(|p| match den.eval(p) {
            Ok(v) => v.to_f64().abs() < m.tol(),
            Err(_) => true,
        });
    if degenerate {
        return Err(CurvatureError::DegeneratePlane);
    }
    let num = m.g(&curv.apply(x, y, y), x);
    Ok(num / den)
}

/// One eigenvalue of a real matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

/// Eigenvalues of `h′`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// True when every entry of `h′` is a rational constant.
    pub constant: bool,
    /// Exact eigenvalues, sorted descending, when all are recognized rationals.
    pub exact: Option<Vec<String>>,
    /// Eigenvalues at each sample point, sorted by real part descending.
    pub per_point: Vec<Vec<Eigenvalue>>,
}

impl Spectrum {
    /// Largest absolute real part across all points; the `α` in the spectrum `{0, α, −α}` of `h′`.
    pub fn alpha_abs(&self) -> Option<f64> {
        self.per_point
            .iter()
            .flatten()
            .map(|e| e.re.abs())
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensors {
    pub h: FrameOp,
    pub h_prime: FrameOp,
    /// `ℓ = R(·, ξ)ξ`.
    pub ell: FrameOp,
    pub spectrum: Spectrum,
}

/// `(L_ξ φ)X = [ξ, φX] − φ[ξ, X]`.
pub fn lie_derivative_phi(m: &Manifold) -> FrameOp {
    let xi = m.xi();
    FrameOp {
        cols: (0..m.dim())
            .map(|j| {
                let ej = m.basis(j);
                m.bracket(xi, &m.phi_of(&ej)) - m.phi_of(&m.bracket(xi, &ej))
            })
            .collect(),
    }
}

pub fn h_tensors(m: &Manifold, curv: &Curvature) -> StructureTensors {
    let dim = m.dim();
    let lphi = lie_derivative_phi(m);
    let h = FrameOp {
        cols: lphi.cols.iter().map(|c| c.scale_q(&rat(1, 2))).collect(),
    };
    let h_prime = h.compose(m.phi());
    let xi = m.xi();
    let ell = FrameOp {
        cols: (0..dim).map(|j| curv.apply(&m.basis(j), xi, xi)).collect(),
    };
    let spectrum = spectrum(m, &h_prime);
    StructureTensors {
        h,
        h_prime,
        ell,
        spectrum,
    }
}

fn spectrum(m: &Manifold, a: &FrameOp) -> Spectrum {
    let dim = a.dim();
    let entries = a.matrix();
    let consts: Option<Vec<Vec<Rational>>> = entries
        .iter()
        .map(|row| row.iter().map(ScalarField::as_constant).collect())
        .collect();
    let mut per_point = Vec::new();
    let pts: Vec<_> = if consts.is_some() {
        m.points().iter().take(1).cloned().collect()
    } else {
        m.points().to_vec()
    };
    for p in &pts {
        let vals: Option<Vec<f64>> = entries
            .iter()
            .flatten()
            .map(|e| e.eval_f64(p).ok())
            .collect();
        let Some(vals) = vals else { continue };
        let mat = DMatrix::from_row_slice(dim, dim, &vals);
        let mut ev: Vec<Eigenvalue> = mat
            .complex_eigenvalues()
            .iter()
            .map(|c| Eigenvalue {
                re: clean(c.re),
                im: clean(c.im),
            })
            .collect();
        ev.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
        per_point.push(ev);
    }
    let exact = consts.as_ref().and_then(|c| exact_eigenvalues(c, per_point.first()?));
    Spectrum {
        constant: consts.is_some(),
        exact,
        per_point,
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

/// Rounds each numeric eigenvalue to a small-denominator rational and keeps
/// the result only if it is an exact root of the characteristic polynomial.
fn exact_eigenvalues(a: &[Vec<Rational>], numeric: &[Eigenvalue]) -> Option<Vec<String>> {
    let dim = a.len();
    let mut out = Vec::new();
    for e in numeric {
        if e.im.abs() > 1e-9 {
            return None;
        }
        let q = nearest_rational(e.re, 1000)?;
        let shifted: Vec<Vec<ScalarField>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let d = if i == j { q.clone() } else { Rational::zero() };
                        ScalarField::constant(&a[i][j] - d)
                    })
                    .collect()
            })
            .collect();
        if !determinant(&shifted).is_zero() {
            return None;
        }
        out.push(q);
    }
    out.sort_by(|x, y| y.cmp(x));
    Some(out.iter().map(crate::scalar::fmt_rational).collect())
}

/// Best rational approximation with denominator at most `max_den`, by
/// continued fractions.
pub fn nearest_rational(x: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = a.to_i64()?;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    (k1 != 0).then(|| rat(h1, k1))
}

/// `(L_V g)(X,Y) = V(g(X,Y)) − g([V,X],Y) − g(X,[V,Y])` on frame pairs.
pub fn lie_derivative_metric(m: &Manifold, v: &FrameVec) -> Tensor2 {
    let dim = m.dim();
    let brackets: Vec<FrameVec> = (0..dim).map(|a| m.bracket(v, &m.basis(a))).collect();
    Tensor2::from_fn(dim, |a, b| {
        m.apply(v, m.metric().get(a, b)) - m.g(&brackets[a], &m.basis(b)) - m.g(&m.basis(a), &brackets[b])
    })
}

/// `Hess f(X,Y) = X(Y f) − (∇_X Y) f` on frame pairs.
pub fn hessian(m: &Manifold, conn: &Connection, f: &ScalarField) -> Tensor2 {
    let dim = m.dim();
    let df: Vec<ScalarField> = (0..dim).map(|b| m.derive(b, f)).collect();
    Tensor2::from_fn(dim, |a, b| m.derive(a, &df[b]) - m.apply(conn.get(a, b), f))
}

/// Alternating 3-form in frame components, `c[a][b][d] = ω(e_a, e_b, e_d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form3 {
    pub c: Vec<Vec<Vec<ScalarField>>>,
}

impl Form3 {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> ScalarField) -> Form3 {
        Form3 {
            c: (0..dim)
                .map(|a| (0..dim).map(|b| (0..dim).map(|d| f(a, b, d)).collect()).collect())
                .collect(),
        }
    }

    pub fn get(&self, a: usize, b: usize, d: usize) -> &ScalarField {
        &self.c[a][b][d]
    }

    pub fn scale_q(&self, q: &Rational) -> Form3 {
        let dim = self.c.len();
        Form3::from_fn(dim, |a, b, d| self.c[a][b][d].scale(q))
    }

    pub fn components(&self) -> impl Iterator<Item = ((usize, usize, usize), &ScalarField)> {
        self.c.iter().enumerate().flat_map(|(a, p)| {
            p.iter()
                .enumerate()
                .flat_map(move |(b, q)| q.iter().enumerate().map(move |(d, v)| ((a, b, d), v)))
        })
    }
}

/// `dω(X,Y) = X(ω(Y)) − Y(ω(X)) − ω([X,Y])`.
pub fn d1(m: &Manifold, omega: &[ScalarField]) -> Tensor2 {
    let pair = |v: &FrameVec| -> ScalarField { v.0.iter().zip(omega).map(|(a, b)| a * b).sum() };
    Tensor2::from_fn(m.dim(), |a, b| {
        m.derive(a, &omega[b]) - m.derive(b, &omega[a]) - pair(m.frame_bracket(a, b))
    })
}

/// `dΩ(X,Y,Z) = XΩ(Y,Z) − YΩ(X,Z) + ZΩ(X,Y) − Ω([X,Y],Z) + Ω([X,Z],Y) − Ω([Y,Z],X)`.
pub fn d2(m: &Manifold, omega: &Tensor2) -> Form3 {
    let w = |x: &FrameVec, b: usize| omega.eval(x, &m.basis(b));
    Form3::from_fn(m.dim(), |a, b, c| {
        m.derive(a, omega.get(b, c)) - m.derive(b, omega.get(a, c)) + m.derive(c, omega.get(a, b))
            - w(m.frame_bracket(a, b), c)
            + w(m.frame_bracket(a, c), b)
            - w(m.frame_bracket(b, c), a)
    })
}

/// `(η∧Φ)(X,Y,Z) = η(X)Φ(Y,Z) + η(Y)Φ(Z,X) + η(Z)Φ(X,Y)`.
pub fn wedge_1_2(eta: &[ScalarField], phi: &Tensor2) -> Form3 {
    Form3::from_fn(eta.len(), |a, b, c| {
        &eta[a] * phi.get(b, c) + &eta[b] * phi.get(c, a) + &eta[c] * phi.get(a, b)
    })
}

/// `Φ(X,Y) = g(X, φY)`.
pub fn fundamental_form(m: &Manifold) -> Tensor2 {
    let dim = m.dim();
    Tensor2::from_fn(dim, |a, b| m.g(&m.basis(a), &m.phi_of(&m.basis(b))))
}

/// Exterior data of the structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Exterior {
    pub d_eta: Tensor2,
    pub phi_form: Tensor2,
    pub d_phi: Form3,
    pub eta_wedge_phi: Form3,
}

pub fn exterior(m: &Manifold) -> Exterior {
    let phi_form = fundamental_form(m);
    Exterior {
        d_eta: d1(m, m.eta_form()),
        d_phi: d2(m, &phi_form),
        eta_wedge_phi: wedge_1_2(m.eta_form(), &phi_form),
        phi_form,
    }
}

/// `N(X,Y) = φ²[X,Y] + [φX,φY] − φ[φX,Y] − φ[X,φY] + 2dη(X,Y)ξ` on frame pairs.
pub fn nijenhuis(m: &Manifold) -> Vec<Vec<FrameVec>> {
    let dim = m.dim();
    let d_eta = d1(m, m.eta_form());
    (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| nijenhuis_pair(m, &d_eta, &m.basis(a), &m.basis(b)))
                .collect()
        })
        .collect()
}

pub fn nijenhuis_pair(m: &Manifold, d_eta: &Tensor2, x: &FrameVec, y: &FrameVec) -> FrameVec {
    let px = m.phi_of(x);
    let py = m.phi_of(y);
    let br = m.bracket(x, y);
    m.phi_of(&m.phi_of(&br)) + m.bracket(&px, &py)
        - m.phi_of(&m.bracket(&px, y))
        - m.phi_of(&m.bracket(x, &py))
        + m.xi().scale(&d_eta.eval(x, y).scale(&rat(2, 1)))
}

/// Verdict on a whole family of scalar residuals: the first `NonZero`, else
/// the weakest zero verdict.
pub fn combined_verdict<'a>(m: &Manifold, fields: impl IntoIterator<Item = &'a ScalarField>) -> ZeroVerdict {
    let mut out = ZeroVerdict::ProvedZero;
    for f in fields {
        match m.zero_test().verdict(f) {
            v @ ZeroVerdict::NonZero { .. } => return v,
            ZeroVerdict::NumericallyZero { max_abs } => {
                let prev = match out {
                    ZeroVerdict::NumericallyZero { max_abs } => max_abs,
                    _ => 0.0,
                };
                out = ZeroVerdict::NumericallyZero {
                    max_abs: prev.max(max_abs),
                };
            }
            ZeroVerdict::ProvedZero => {}
        }
    }
    out
}

/// Largest absolute value of `f` over the sample points (evaluation
/// failures are skipped).
pub fn max_abs(m: &Manifold, f: &ScalarField) -> f64 {
    if f.is_zero() {
        return 0.0;
    }
    m.points()
        .iter()
        .filter_map(|p| f.eval_float(p).ok())
        .map(f64::abs)
        .fold(0.0, f64::max)
}

