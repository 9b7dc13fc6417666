//! Manifold description, vector fields, frames and musical isomorphisms.
//!
//! Everything tensorial is stored in frame components: a [`FrameVec`] holds
//! `c^a` with `X = Σ c^a e_a`, a [`FrameOp`] holds the images of the frame
//! vectors under a (1,1)-tensor, and a [`Tensor2`] holds `T(e_a, e_b)`.
//! Coordinate components ([`VectorField`]) are used only at the boundary.

use std::ops::{Add, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::{Domain, Point, Rational, Sampler, ScalarField, ZeroTest, ZeroVerdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("dimension {0} is not of the form 2n+1 with n >= 1")]
    EvenDimension(usize),
    #[error("metric is not symmetric at frame indices ({0}, {1})")]
    AsymmetricMetric(usize, usize),
    #[error("frame matrix is singular{}", witness_suffix(.0))]
    SingularFrame(Option<Point>),
    #[error("metric is degenerate{}", witness_suffix(.0))]
    SingularMetric(Option<Point>),
    #[error("eta(xi) = {value} != 1 at {witness:?}")]
    EtaXiNotOne { witness: Point, value: f64 },
    #[error("no sample point satisfies the domain constraints")]
    EmptyDomain,
}

fn witness_suffix(p: &Option<Point>) -> String {
    match p {
        Some(p) => format!(" at {:?}", p.to_strings()),
        None => String::new(),
    }
}

/// Vector field in the coordinate basis `∂/∂x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField(pub Vec<ScalarField>);

impl VectorField {
    pub fn zero(dim: usize) -> Self {
        VectorField(vec![ScalarField::zero(); dim])
    }

    /// The coordinate field `∂/∂x_i`.
    pub fn coordinate(i: usize, dim: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = ScalarField::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Derivative of `f` along the field.
    pub fn apply(&self, f: &ScalarField) -> ScalarField {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * &f.partial(i))
            .sum()
    }

    pub fn scale(&self, f: &ScalarField) -> Self {
        VectorField(self.0.iter().map(|c| c * f).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ScalarField::is_zero)
    }
}

impl Add for VectorField {
    type Output = VectorField;
    fn add(self, rhs: VectorField) -> VectorField {
        VectorField(self.0.into_iter().zip(rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for VectorField {
    type Output = VectorField;
    fn sub(self, rhs: VectorField) -> VectorField {
        VectorField(self.0.into_iter().zip(rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// `[X, Y]^k = Σ_i X^i ∂_i Y^k − Y^i ∂_i X^k`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    assert_eq!(x.dim(), y.dim(), "bracket of fields of different dimension");
    VectorField(
        (0..x.dim())
            .map(|k| x.apply(&y.0[k]) - y.apply(&x.0[k]))
            .collect(),
    )
}

/// Frame components of a vector field.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameVec(pub Vec<ScalarField>);

impl FrameVec {
    pub fn zero(dim: usize) -> Self {
        FrameVec(vec![ScalarField::zero(); dim])
    }

    /// The frame vector `e_a`.
    pub fn basis(a: usize, dim: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[a] = ScalarField::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, f: &ScalarField) -> Self {
        FrameVec(self.0.iter().map(|c| c * f).collect())
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        FrameVec(self.0.iter().map(|c| c.scale(q)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ScalarField::is_zero)
    }
}

impl Add for FrameVec {
    type Output = FrameVec;
    fn add(self, rhs: FrameVec) -> FrameVec {
        FrameVec(self.0.into_iter().zip(rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for FrameVec {
    type Output = FrameVec;
    fn sub(self, rhs: FrameVec) -> FrameVec {
        FrameVec(self.0.into_iter().zip(rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for FrameVec {
    type Output = FrameVec;
    fn neg(self) -> FrameVec {
        FrameVec(self.0.into_iter().map(|a| -a).collect())
    }
}

/// (1,1)-tensor in frame components; `cols[j]` is the image of `e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOp {
    pub cols: Vec<FrameVec>,
}

impl FrameOp {
    pub fn zero(dim: usize) -> Self {
        FrameOp {
            cols: vec![FrameVec::zero(dim); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        FrameOp {
            cols: (0..dim).map(|j| FrameVec::basis(j, dim)).collect(),
        }
    }

    /// `X ↦ ω(X) Y` for a covector given by its frame components.
    pub fn outer(omega: &[ScalarField], y: &FrameVec) -> Self {
        FrameOp {
            cols: omega.iter().map(|w| y.scale(w)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Component `i` of `A(e_j)`.
    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        &self.cols[j].0[i]
    }

    pub fn apply(&self, x: &FrameVec) -> FrameVec {
        let dim = self.dim();
        let mut out = FrameVec::zero(dim);
        for (j, c) in x.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for i in 0..dim {
                let a = self.entry(i, j);
                if !a.is_zero() {
                    out.0[i] = &out.0[i] + &(a * c);
                }
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FrameOp) -> FrameOp {
        FrameOp {
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> FrameOp {
        FrameOp {
            cols: self.cols.iter().map(|c| c.scale(f)).collect(),
        }
    }

    pub fn trace(&self) -> ScalarField {
        (0..self.dim()).map(|i| self.entry(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(FrameVec::is_zero)
    }

    /// Row-major matrix of entries, `m[i][j] = (A e_j)^i`.
    pub fn matrix(&self) -> Vec<Vec<ScalarField>> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }
}

impl Add for FrameOp {
    type Output = FrameOp;
    fn add(self, rhs: FrameOp) -> FrameOp {
        FrameOp {
            cols: self.cols.into_iter().zip(rhs.cols).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for FrameOp {
    type Output = FrameOp;
    fn sub(self, rhs: FrameOp) -> FrameOp {
        FrameOp {
            cols: self.cols.into_iter().zip(rhs.cols).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Covariant 2-tensor in frame components, `m[a][b] = T(e_a, e_b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2 {
    pub m: Vec<Vec<ScalarField>>,
}

impl Tensor2 {
    pub fn zero(dim: usize) -> Self {
        Tensor2 {
            m: vec![vec![ScalarField::zero(); dim]; dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> ScalarField) -> Self {
        Tensor2 {
            m: (0..dim).map(|a| (0..dim).map(|b| f(a, b)).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn get(&self, a: usize, b: usize) -> &ScalarField {
        &self.m[a][b]
    }

    pub fn eval(&self, x: &FrameVec, y: &FrameVec) -> ScalarField {
        let mut acc = ScalarField::zero();
        for (a, xa) in x.0.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.0.iter().enumerate() {
                if yb.is_zero() || self.m[a][b].is_zero() {
                    continue;
                }
                acc = acc + xa * &(yb * &self.m[a][b]);
            }
        }
        acc
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        Tensor2 {
            m: self
                .m
                .iter()
                .map(|r| r.iter().map(|c| c.scale(q)).collect())
                .collect(),
        }
    }

    pub fn scale(&self, f: &ScalarField) -> Self {
        Tensor2 {
            m: self.m.iter().map(|r| r.iter().map(|c| c * f).collect()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim();
        Tensor2::from_fn(d, |a, b| self.m[b][a].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(ScalarField::is_zero)
    }

    pub fn components(&self) -> impl Iterator<Item = ((usize, usize), &ScalarField)> {
        self.m
            .iter()
            .enumerate()
            .flat_map(|(a, r)| r.iter().enumerate().map(move |(b, c)| ((a, b), c)))
    }
}

impl Add for Tensor2 {
    type Output = Tensor2;
    fn add(self, rhs: Tensor2) -> Tensor2 {
        Tensor2 {
            m: self
                .m
                .into_iter()
                .zip(rhs.m)
                .map(|(r, s)| r.into_iter().zip(s).map(|(a, b)| a + b).collect())
                .collect(),
        }
    }
}

impl Sub for Tensor2 {
    type Output = Tensor2;
    fn sub(self, rhs: Tensor2) -> Tensor2 {
        self + rhs.scale_q(&crate::scalar::int(-1))
    }
}

/// Determinant by fraction-aware Gaussian elimination.
pub fn determinant(m: &[Vec<ScalarField>]) -> ScalarField {
    let n = m.len();
    let mut a: Vec<Vec<ScalarField>> = m.to_vec();
    let mut det = ScalarField::one();
    for col in 0..n {
        let Some(p) = pick_pivot(&a, col) else {
            return ScalarField::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    det
}

fn pick_pivot(a: &[Vec<ScalarField>], col: usize) -> Option<usize> {
    (col..a.len())
        .filter(|&r| !a[r][col].is_zero())
        .min_by_key(|&r| a[r][col].size())
}

/// Inverse by Gauss-Jordan elimination; `None` if a pivot column is
/// structurally zero.
pub fn inverse(m: &[Vec<ScalarField>]) -> Option<Vec<Vec<ScalarField>>> {
    let n = m.len();
    let mut a: Vec<Vec<ScalarField>> = m.to_vec();
    let mut inv: Vec<Vec<ScalarField>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ScalarField::one() } else { ScalarField::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = pick_pivot(&a, col)?;
        a.swap(p, col);
        inv.swap(p, col);
        let pivot = a[col][col].clone();
        for c in 0..n {
            a[col][c] = &a[col][c] / &pivot;
            inv[col][c] = &inv[col][c] / &pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let t = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &t;
                let t = &factor * &inv[col][c];
                inv[r][c] = &inv[r][c] - &t;
            }
        }
    }
    Some(inv)
}

/// Raw manifold description, before validation.
#[derive(Debug, Clone)]
pub struct ManifoldData {
    pub name: String,
    pub coordinates: Vec<String>,
    /// Frame vectors in coordinate components.
    pub frame: Vec<VectorField>,
    /// `g(e_a, e_b)`.
    pub metric: Vec<Vec<ScalarField>>,
    /// `phi[j]` = frame components of `φ(e_j)`.
    pub phi: Vec<FrameVec>,
    pub xi: FrameVec,
    pub domain: Domain,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

impl ManifoldData {
    /// Relabels the frame so that new `e_j` is old `e_{perm[j]}`.
    pub fn permute_frame(&self, perm: &[usize]) -> ManifoldData {
        let n = perm.len();
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let relabel = |v: &FrameVec| {
            let mut out = FrameVec::zero(n);
            for (old, c) in v.0.iter().enumerate() {
                out.0[inv[old]] = c.clone();
            }
            out
        };
        ManifoldData {
            frame: perm.iter().map(|&o| self.frame[o].clone()).collect(),
            metric: perm
                .iter()
                .map(|&a| perm.iter().map(|&b| self.metric[a][b].clone()).collect())
                .collect(),
            phi: perm.iter().map(|&o| relabel(&self.phi[o])).collect(),
            xi: relabel(&self.xi),
            ..self.clone()
        }
    }
}

/// Validated, immutable almost contact metric manifold on one chart.
#[derive(Debug, Clone)]
pub struct Manifold {
    name: String,
    coordinates: Vec<String>,
    frame: Vec<VectorField>,
    /// `frame_inv[i][a]`: frame component `a` of `∂/∂x_i`.
    frame_inv: Vec<Vec<ScalarField>>,
    metric: Tensor2,
    metric_inv: Vec<Vec<ScalarField>>,
    phi: FrameOp,
    xi: FrameVec,
    eta: Vec<ScalarField>,
    /// Frame components of `[e_a, e_b]`.
    brackets: Vec<Vec<FrameVec>>,
    /// No frame coefficient involves `exp`.
    plain_frame: bool,
    domain: Domain,
    seed: u64,
    zero_test: ZeroTest,
}

impl Manifold {
    pub fn new(data: ManifoldData) -> Result<Self, GeometryError> {
        let dim = data.coordinates.len();
        if dim < 3 || dim % 2 == 0 {
            return Err(GeometryError::EvenDimension(dim));
        }
        let shape_ok = data.frame.len() == dim
            && data.frame.iter().all(|v| v.dim() == dim)
            && data.metric.len() == dim
            && data.metric.iter().all(|r| r.len() == dim)
            && data.phi.len() == dim
            && data.phi.iter().all(|v| v.dim() == dim)
            && data.xi.dim() == dim
            && data.domain.boxes.len() == dim;
        if !shape_ok {
            return Err(GeometryError::Dimension(format!(
                "frame, metric, phi, xi and domain must all be {dim}-dimensional"
            )));
        }
        for a in 0..dim {
            for b in a + 1..dim {
                if data.metric[a][b] != data.metric[b][a] {
                    return Err(GeometryError::AsymmetricMetric(a, b));
                }
            }
        }
        let points = Sampler::new(data.domain.clone(), data.seed, data.samples).points();
        if points.is_empty() {
            return Err(GeometryError::EmptyDomain);
        }
        let zero_test = ZeroTest::new(points, data.tol);

        let e_matrix: Vec<Vec<ScalarField>> = data.frame.iter().map(|v| v.0.clone()).collect();
        nonvanishing_on(&determinant(&e_matrix), &zero_test.points)
            .map_err(GeometryError::SingularFrame)?;
        nonvanishing_on(&determinant(&data.metric), &zero_test.points)
            .map_err(GeometryError::SingularMetric)?;
        let frame_inv = inverse(&e_matrix).ok_or(GeometryError::SingularFrame(None))?;
        let metric_inv = inverse(&data.metric).ok_or(GeometryError::SingularMetric(None))?;
        let metric = Tensor2 { m: data.metric };
        let phi = FrameOp { cols: data.phi };
        let eta: Vec<ScalarField> = (0..dim)
            .map(|a| metric.eval(&FrameVec::basis(a, dim), &data.xi))
            .collect();

        let plain_frame = !data.frame.iter().flat_map(|e| &e.0).any(ScalarField::has_exp);
        let mut m = Manifold {
            name: data.name,
            coordinates: data.coordinates,
            frame: data.frame,
            frame_inv,
            metric,
            metric_inv,
            phi,
            xi: data.xi,
            eta,
            brackets: Vec::new(),
            plain_frame,
            domain: data.domain,
            seed: data.seed,
            zero_test,
        };
        let eta_xi = m.eta(&m.xi) - ScalarField::one();
        if let ZeroVerdict::NonZero { witness, value } = m.zero_test.verdict(&eta_xi) {
            return Err(GeometryError::EtaXiNotOne {
                witness,
                value: value + 1.0,
            });
        }
        m.brackets = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| m.to_frame(&lie_bracket(&m.frame[a], &m.frame[b])))
                    .collect()
            })
            .collect();
        Ok(m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    /// `n` in `dim = 2n + 1`.
    pub fn n(&self) -> usize {
        (self.dim() - 1) / 2
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn points(&self) -> &[Point] {
        &self.zero_test.points
    }

    pub fn tol(&self) -> f64 {
        self.zero_test.tol
    }

    pub fn zero_test(&self) -> &ZeroTest {
        &self.zero_test
    }

    pub fn frame(&self) -> &[VectorField] {
        &self.frame
    }

    pub fn metric(&self) -> &Tensor2 {
        &self.metric
    }

    /// `g^{ab}`.
    pub fn metric_inv(&self) -> &[Vec<ScalarField>] {
        &self.metric_inv
    }

    pub fn phi(&self) -> &FrameOp {
        &self.phi
    }

    pub fn xi(&self) -> &FrameVec {
        &self.xi
    }

    /// `η(e_a)`.
    pub fn eta_form(&self) -> &[ScalarField] {
        &self.eta
    }

    pub fn basis(&self, a: usize) -> FrameVec {
        FrameVec::basis(a, self.dim())
    }

    /// `[e_a, e_b]` in frame components.
    pub fn frame_bracket(&self, a: usize, b: usize) -> &FrameVec {
        &self.brackets[a][b]
    }

    /// `e_a(f)`.
    pub fn derive(&self, a: usize, f: &ScalarField) -> ScalarField {
        self.frame[a].apply(f)
    }

    /// `X(f)` for `X` in frame components.
    pub fn apply(&self, x: &FrameVec, f: &ScalarField) -> ScalarField {
        if self.plain_frame && x.0.iter().filter(|c| !c.is_zero()).count() > 1 {
            return self.to_coords(x).apply(f);
        }
        x.0.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| c * &self.derive(a, f))
            .sum()
    }

    /// Lie bracket of frame-component fields.
    pub fn bracket(&self, x: &FrameVec, y: &FrameVec) -> FrameVec {
        let dim = self.dim();
        let mut out = if self.plain_frame {
            let (xc, yc) = (self.to_coords(x), self.to_coords(y));
            FrameVec(
                (0..dim)
                    .map(|c| xc.apply(&y.0[c]) - yc.apply(&x.0[c]))
                    .collect(),
            )
        } else {
            FrameVec(
                (0..dim)
                    .map(|c| self.apply(x, &y.0[c]) - self.apply(y, &x.0[c]))
                    .collect(),
            )
        };
        for (a, xa) in x.0.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.0.iter().enumerate() {
                if yb.is_zero() || a == b {
                    continue;
                }
                let coef = xa * yb;
                out = out + self.brackets[a][b].scale(&coef);
            }
        }
        out
    }

    pub fn g(&self, x: &FrameVec, y: &FrameVec) -> ScalarField {
        self.metric.eval(x, y)
    }

    pub fn eta(&self, x: &FrameVec) -> ScalarField {
        x.0.iter()
            .zip(&self.eta)
            .filter(|(c, e)| !c.is_zero() && !e.is_zero())
            .map(|(c, e)| c * e)
            .sum()
    }

    pub fn phi_of(&self, x: &FrameVec) -> FrameVec {
        self.phi.apply(x)
    }

    /// `η ⊗ η` as a 2-tensor.
    pub fn eta_eta(&self) -> Tensor2 {
        Tensor2::from_fn(self.dim(), |a, b| &self.eta[a] * &self.eta[b])
    }

    /// `η ⊗ ξ` as a (1,1)-tensor, `X ↦ η(X) ξ`.
    pub fn eta_xi(&self) -> FrameOp {
        FrameOp::outer(&self.eta, &self.xi)
    }

    /// Coordinate components to frame components.
    pub fn to_frame(&self, x: &VectorField) -> FrameVec {
        let dim = self.dim();
        FrameVec(
            (0..dim)
                .map(|a| {
                    x.0.iter()
                        .enumerate()
                        .filter(|(i, c)| !c.is_zero() && !self.frame_inv[*i][a].is_zero())
                        .map(|(i, c)| c * &self.frame_inv[i][a])
                        .sum()
                })
                .collect(),
        )
    }

    /// Frame components back to coordinate components.
    pub fn to_coords(&self, x: &FrameVec) -> VectorField {
        let dim = self.dim();
        VectorField(
            (0..dim)
                .map(|i| {
                    x.0.iter()
                        .enumerate()
                        .filter(|(a, c)| !c.is_zero() && !self.frame[*a].0[i].is_zero())
                        .map(|(a, c)| c * &self.frame[a].0[i])
                        .sum()
                })
                .collect(),
        )
    }

    pub fn metric_apply(&self, x: &VectorField, y: &VectorField) -> ScalarField {
        self.g(&self.to_frame(x), &self.to_frame(y))
    }

    pub fn eta_apply(&self, x: &VectorField) -> ScalarField {
        self.eta(&self.to_frame(x))
    }

    pub fn phi_apply(&self, x: &VectorField) -> VectorField {
        self.to_coords(&self.phi_of(&self.to_frame(x)))
    }

    /// Raises a covector given by its frame components `ω(e_a)`.
    pub fn sharp(&self, omega: &[ScalarField]) -> FrameVec {
        let dim = self.dim();
        FrameVec(
            (0..dim)
                .map(|a| {
                    (0..dim)
                        .filter(|&b| !self.metric_inv[a][b].is_zero() && !omega[b].is_zero())
                        .map(|b| &self.metric_inv[a][b] * &omega[b])
                        .sum()
                })
                .collect(),
        )
    }

    /// Metric gradient `Df` in frame components.
    pub fn gradient(&self, f: &ScalarField) -> FrameVec {
        let df: Vec<ScalarField> = (0..self.dim()).map(|a| self.derive(a, f)).collect();
        self.sharp(&df)
    }

    /// Metric gradient in coordinate components.
    pub fn gradient_field(&self, f: &ScalarField) -> VectorField {
        self.to_coords(&self.gradient(f))
    }

    /// Seeded random fields with affine coordinate components, for catching
    /// non-tensorial mistakes that frame-only checks would miss.
    pub fn random_fields(&self, count: usize, salt: u64) -> Vec<FrameVec> {
        let dim = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        (0..count)
            .map(|_| {
                let comps = (0..dim)
                    .map(|_| {
                        let mut p = ScalarField::int(rng.random_range(-2..=2));
                        for i in 0..dim {
                            let c = rng.random_range(-2..=2i64);
                            if c != 0 {
                                p = p + ScalarField::int(c) * ScalarField::coord(i);
                            }
                        }
                        p
                    })
                    .collect();
                self.to_frame(&VectorField(comps))
            })
            .collect()
    }
}

/// Returns the first sample point where `e` vanishes (or cannot be evaluated).
fn nonvanishing_on(e: &ScalarField, points: &[Point]) -> Result<(), Option<Point>> {
    if e.is_zero() {
        return Err(points.first().cloned());
    }
    for p in points {
        match e.eval(p) {
            Ok(v) if v.to_f64().abs() > 1e-12 => {}
            _ => return Err(Some(p.clone())),
        }
    }
    Ok(())
}
