//! Linear least squares over stacked component equations.
//!
//! Each equation is `Σ_k coeffs[k]·x_k = rhs` with scalar-field entries; it
//! is sampled at every point of the manifold. When every sampled value is an
//! exact rational the normal equations are solved exactly, otherwise the
//! system goes through an SVD.

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::Manifold;
use crate::scalar::{fmt_rational, rational_to_f64, Rational, ScalarField, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
}

/// One stacked equation.
#[derive(Debug, Clone)]
pub struct Equation {
    pub coeffs: Vec<ScalarField>,
    pub rhs: ScalarField,
}

/// A fitted parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Param {
    pub value: Option<f64>,
    /// Exact value when the fit ran in rational arithmetic.
    pub exact: Option<String>,
    /// The parameter's column vanished: every value fits equally well.
    pub unconstrained: bool,
    #[serde(skip)]
    pub rational: Option<Rational>,
}

impl Param {
    fn unconstrained() -> Self {
        Param {
            value: None,
            exact: None,
            unconstrained: true,
            rational: None,
        }
    }

    /// The value as a rational: exact if available, else the float's binary value.
    pub fn to_rational(&self) -> Option<Rational> {
        self.rational
            .clone()
            .or_else(|| self.value.and_then(Rational::from_float))
    }

    pub fn render(&self) -> String {
        match (&self.exact, self.value) {
            _ if self.unconstrained => "unconstrained".into(),
            (Some(s), _) => s.clone(),
            (None, Some(v)) => format!("{v}"),
            (None, None) => "-".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fit {
    pub params: Vec<Param>,
    /// Max |A x − b| over all sampled equations.
    pub residual: f64,
    /// `residual / max(1, max |b|)`.
    pub relative_residual: f64,
    /// True when the rational path was used.
    pub exact_arithmetic: bool,
    pub rows: usize,
}

impl Fit {
    pub fn is_exact_fit(&self, tol: f64) -> bool {
        self.relative_residual < tol
    }
}

enum Sampled {
    Exact(Vec<Vec<Rational>>, Vec<Rational>),
    Float(Vec<Vec<f64>>, Vec<f64>),
}

fn sample(m: &Manifold, eqs: &[Equation], ncols: usize) -> Sampled {
    let mut exact_rows = Vec::new();
    let mut exact_rhs = Vec::new();
    let mut all_exact = true;
    let mut float_rows = Vec::new();
    let mut float_rhs = Vec::new();
    // Rows whose entries are all constants are sampled once.
    for eq in eqs {
        let constant = eq.rhs.as_constant().is_some() && eq.coeffs.iter().all(|c| c.as_constant().is_some());
        let pts: &[_] = if constant { &m.points()[..1] } else { m.points() };
        for p in pts {
            let vals: Result<Vec<Value>, _> = eq
                .coeffs
                .iter()
                .chain(std::iter::once(&eq.rhs))
                .map(|f| f.eval(p))
                .collect();
            let Ok(vals) = vals else { continue };
            float_rows.push(vals[..ncols].iter().map(Value::to_f64).collect());
            float_rhs.push(vals[ncols].to_f64());
            if all_exact {
                if vals.iter().all(Value::is_exact) {
                    exact_rows.push(vals[..ncols].iter().map(|v| v.exact().unwrap().clone()).collect());
                    exact_rhs.push(vals[ncols].exact().unwrap().clone());
                } else {
                    all_exact = false;
                }
            }
        }
    }
    if all_exact {
        Sampled::Exact(exact_rows, exact_rhs)
    } else {
        Sampled::Float(float_rows, float_rhs)
    }
}

/// Solves the stacked system in the least-squares sense.
///
/// Columns that vanish at every sample are reported as unconstrained and
/// dropped; if the remaining columns are still dependent the system is
/// degenerate.
pub fn least_squares(m: &Manifold, eqs: &[Equation], ncols: usize) -> Result<Fit, FitError> {
    assert!(eqs.iter().all(|e| e.coeffs.len() == ncols));
    match sample(m, eqs, ncols) {
        Sampled::Exact(a, b) => solve_exact(&a, &b, ncols),
        Sampled::Float(a, b) => solve_float(&a, &b, ncols, m.tol()),
    }
}

fn solve_exact(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Result<Fit, FitError> {
    let active: Vec<usize> = (0..ncols).filter(|&k| a.iter().any(|r| !r[k].is_zero())).collect();
    let n = active.len();
    // Normal equations AᵀA x = Aᵀb on the active columns.
    let mut ata = vec![vec![Rational::zero(); n + 1]; n];
    for (row, rhs) in a.iter().zip(b) {
        for (p, &i) in active.iter().enumerate() {
            if row[i].is_zero() {
                continue;
            }
            for (q, &j) in active.iter().enumerate() {
                ata[p][q] += &row[i] * &row[j];
            }
            ata[p][n] += &row[i] * rhs;
        }
    }
    let x = gauss_solve(ata).ok_or_else(|| {
        FitError::DegenerateSystem("normal equations are singular".into())
    })?;
    let mut params = vec![Param::unconstrained(); ncols];
    for (p, &i) in active.iter().enumerate() {
        params[i] = Param {
            value: Some(rational_to_f64(&x[p])),
            exact: Some(fmt_rational(&x[p])),
            unconstrained: false,
            rational: Some(x[p].clone()),
        };
    }
    let mut residual = Rational::zero();
    let mut scale = Rational::from_integer(1.into());
    for (row, rhs) in a.iter().zip(b) {
        let mut r = -rhs.clone();
        for (p, &i) in active.iter().enumerate() {
            r += &row[i] * &x[p];
        }
        residual = residual.max(r.abs());
        scale = scale.max(rhs.abs());
    }
    Ok(Fit {
        params,
        residual: rational_to_f64(&residual),
        relative_residual: rational_to_f64(&(residual / scale)),
        exact_arithmetic: true,
        rows: a.len(),
    })
}

/// Gauss-Jordan on an augmented square system; `None` if singular.
fn gauss_solve(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(p, col);
        let pivot = m[col][col].clone();
        for c in col..=n {
            m[col][c] = &m[col][c] / &pivot;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

fn solve_float(a: &[Vec<f64>], b: &[f64], ncols: usize, tol: f64) -> Result<Fit, FitError> {
    let scale_a = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs())).max(1.0);
    let active: Vec<usize> = (0..ncols)
        .filter(|&k| a.iter().any(|r| r[k].abs() > tol * scale_a))
        .collect();
    let rows = a.len();
    let mut params = vec![Param::unconstrained(); ncols];
    let mut x = vec![0.0; active.len()];
    if !active.is_empty() && rows > 0 {
        let mat = DMatrix::from_fn(rows, active.len(), |r, c| a[r][active[c]]);
        let rhs = DVector::from_column_slice(b);
        let svd = mat.svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if smax == 0.0 || smin < 1e-10 * smax {
            return Err(FitError::DegenerateSystem(format!(
                "design matrix is rank-deficient (singular values {smin:e} / {smax:e})"
            )));
        }
        let sol = svd
            .solve(&rhs, 1e-12 * smax)
            .map_err(|e| FitError::DegenerateSystem(e.to_string()))?;
        x = sol.iter().copied().collect();
    }
    for (p, &i) in active.iter().enumerate() {
        params[i] = Param {
            value: Some(x[p]),
            exact: None,
            unconstrained: false,
            rational: None,
        };
    }
    let mut residual: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for (row, rhs) in a.iter().zip(b) {
        let r: f64 = active.iter().enumerate().map(|(p, &i)| row[i] * x[p]).sum::<f64>() - rhs;
        residual = residual.max(r.abs());
        scale = scale.max(rhs.abs());
    }
    Ok(Fit {
        params,
        residual,
        relative_residual: residual / scale,
        exact_arithmetic: false,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn exact_overdetermined() {
        // x = 1, y = 2, x + y = 3 exactly; x + y = 4 perturbs
        let a = vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(1), int(1)]];
        let b = vec![int(1), int(2), int(3)];
        let fit = solve_exact(&a, &b, 2).unwrap();
        assert_eq!(fit.params[0].rational, Some(int(1)));
        assert_eq!(fit.params[1].rational, Some(int(2)));
        assert_eq!(fit.residual, 0.0);

        let b = vec![int(1), int(2), int(4)];
        let fit = solve_exact(&a, &b, 2).unwrap();
        assert_eq!(fit.params[0].rational, Some(rat(4, 3)));
        assert!(fit.residual > 0.0);
    }

    #[test]
    fn zero_column_is_unconstrained() {
        let a = vec![vec![int(2), int(0)], vec![int(1), int(0)]];
        let b = vec![int(4), int(2)];
        let fit = solve_exact(&a, &b, 2).unwrap();
        assert!(fit.params[1].unconstrained);
        assert_eq!(fit.params[0].rational, Some(int(2)));
    }

    #[test]
    fn dependent_columns_are_degenerate() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        let b = vec![int(1), int(2)];
        assert!(solve_exact(&a, &b, 2).is_err());
        let af: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_float(&af, &[1.0, 2.0], 2, 1e-9).is_err());
    }

    #[test]
    fn float_path_matches_exact() {
        let af = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let fit = solve_float(&af, &[1.0, 2.0, 4.0], 2, 1e-9).unwrap();
        assert!((fit.params[0].value.unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!((fit.params[1].value.unwrap() - 7.0 / 3.0).abs() < 1e-12);
    }
}
