//! Exact closed-form scalar fields over a coordinate chart.
//!
//! A [`ScalarField`] is stored in a canonical form: a quotient of two
//! Laurent polynomials whose "monomials" are products of integer powers of
//! the coordinates and at most one `exp(..)` factor. Products of
//! exponentials are merged by adding their arguments, so identities such as
//! `exp(-v) * exp(v) = 1` hold structurally. Arithmetic, differentiation and
//! evaluation all work on this form directly.

mod parse;
mod sampling;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use parse::{parse_expr, ParseError};
pub use sampling::{Domain, Interval, Point, Sampler, ZeroTest, ZeroVerdict};

/// Exact rational numbers used for coefficients and sample coordinates.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("point has {got} coordinates, expected at least {needed}")]
    Dimension { needed: usize, got: usize },
}

/// Result of evaluating a field at a point.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => rational_to_f64(q),
            Value::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(q) => Some(q),
            Value::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_zero(),
            Value::Float(x) => *x == 0.0,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => f.write_str(&fmt_rational(q)),
            Value::Float(x) => write!(f, "{x:e}"),
        }
    }
}

/// Product of coordinate powers and an optional exponential factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Monomial {
    /// Sorted by coordinate index; exponents are never zero.
    powers: Vec<(usize, i32)>,
    /// Argument of the `exp` factor; never structurally zero.
    exp_arg: Option<Box<ScalarField>>,
}

impl Monomial {
    fn one() -> Self {
        Monomial {
            powers: Vec::new(),
            exp_arg: None,
        }
    }

    fn is_one(&self) -> bool {
        self.powers.is_empty() && self.exp_arg.is_none()
    }

    fn var(i: usize) -> Self {
        Monomial {
            powers: vec![(i, 1)],
            exp_arg: None,
        }
    }

    fn exp(arg: ScalarField) -> Self {
        Monomial {
            powers: Vec::new(),
            exp_arg: if arg.is_zero() { None } else { Some(Box::new(arg)) },
        }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut powers = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut i, mut j) = (0, 0);
        while i < self.powers.len() || j < other.powers.len() {
            match (self.powers.get(i), other.powers.get(j)) {
                (Some(&(a, p)), Some(&(b, q))) => match a.cmp(&b) {
                    Ordering::Less => {
                        powers.push((a, p));
                        i += 1;
                    }
                    Ordering::Greater => {
                        powers.push((b, q));
                        j += 1;
                    }
                    Ordering::Equal => {
                        if p + q != 0 {
                            powers.push((a, p + q));
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some(&x), None) => {
                    powers.push(x);
                    i += 1;
                }
                (None, Some(&y)) => {
                    powers.push(y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let exp_arg = match (&self.exp_arg, &other.exp_arg) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => {
                let s = (**a).clone() + (**b).clone();
                if s.is_zero() {
                    None
                } else {
                    Some(Box::new(s))
                }
            }
        };
        Monomial { powers, exp_arg }
    }

    fn inv(&self) -> Monomial {
        Monomial {
            powers: self.powers.iter().map(|&(i, p)| (i, -p)).collect(),
            exp_arg: self.exp_arg.as_ref().map(|a| Box::new(-(**a).clone())),
        }
    }

    fn has_exp(&self) -> bool {
        self.exp_arg.is_some()
    }

    fn depends_on(&self, var: usize) -> bool {
        self.powers.iter().any(|&(i, _)| i == var)
            || self.exp_arg.as_ref().is_some_and(|a| a.depends_on(var))
    }

    fn max_var(&self) -> Option<usize> {
        let p = self.powers.last().map(|&(i, _)| i);
        let e = self.exp_arg.as_ref().and_then(|a| a.max_var());
        p.max(e)
    }

    fn eval_exact(&self, pt: &[Rational]) -> Result<Rational, EvalError> {
        debug_assert!(self.exp_arg.is_none());
        let mut acc = Rational::one();
        for &(i, p) in &self.powers {
            let x = pt.get(i).ok_or(EvalError::Dimension {
                needed: i + 1,
                got: pt.len(),
            })?;
            if p < 0 && x.is_zero() {
                return Err(EvalError::DivisionByZero);
            }
            acc *= num_traits::pow::Pow::pow(x, p);
        }
        Ok(acc)
    }

    fn eval_f64(&self, pt: &[Rational], ptf: &[f64]) -> Result<f64, EvalError> {
        let mut acc = 1.0;
        for &(i, p) in &self.powers {
            let x = *ptf.get(i).ok_or(EvalError::Dimension {
                needed: i + 1,
                got: ptf.len(),
            })?;
            if p < 0 && x == 0.0 {
                return Err(EvalError::DivisionByZero);
            }
            acc *= x.powi(p);
        }
        if let Some(arg) = &self.exp_arg {
            acc *= arg.eval_f64_inner(pt, ptf)?.exp();
        }
        Ok(acc)
    }
}

/// Lexicographic comparison of exponent vectors, first coordinate most
/// significant; absent coordinates count as exponent 0.
fn lex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        let x = a.powers.get(i);
        let y = b.powers.get(j);
        let (va, pa, vb, pb) = match (x, y) {
            (None, None) => return Ordering::Equal,
            (Some(&(va, pa)), None) => (va, pa, usize::MAX, 0),
            (None, Some(&(vb, pb))) => (usize::MAX, 0, vb, pb),
            (Some(&(va, pa)), Some(&(vb, pb))) => (va, pa, vb, pb),
        };
        match va.cmp(&vb) {
            Ordering::Equal => {
                match pa.cmp(&pb) {
                    Ordering::Equal => {}
                    o => return o,
                }
                i += 1;
                j += 1;
            }
            Ordering::Less => {
                if pa != 0 {
                    return pa.cmp(&0);
                }
                i += 1;
            }
            Ordering::Greater => {
                if pb != 0 {
                    return 0.cmp(&pb);
                }
                j += 1;
            }
        }
    }
}

/// Finite sum of rational multiples of [`Monomial`]s.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn constant(c: Rational) -> Self {
        Poly::term(Monomial::one(), c)
    }

    fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn lead(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), c1 * c);
        }
        out
    }

    fn has_exp(&self) -> bool {
        self.terms.keys().any(Monomial::has_exp)
    }

    fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.depends_on(var))
    }

    fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    fn partial(&self, var: usize) -> ScalarField {
        let mut plain = Poly::zero();
        let mut rest = ScalarField::zero();
        for (m, c) in &self.terms {
            if let Some(&(_, p)) = m.powers.iter().find(|&&(i, _)| i == var) {
                let lowered = m.mul(&Monomial {
                    powers: vec![(var, -1)],
                    exp_arg: None,
                });
                plain.add_term(lowered, c * int(p as i64));
            }
            if let Some(arg) = &m.exp_arg {
                let d = arg.partial(var);
                if !d.is_zero() {
                    rest = rest + d * ScalarField::from_poly(Poly::term(m.clone(), c.clone()));
                }
            }
        }
        ScalarField::from_poly(plain) + rest
    }

    /// Largest monomial dividing every term: the minimum power of each
    /// coordinate, plus an exp factor when every term carries one.
    fn content(&self) -> Monomial {
        let mut vars: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.powers.iter().map(|&(i, _)| i))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        let powers = vars
            .into_iter()
            .filter_map(|i| {
                let p = self
                    .terms
                    .keys()
                    .map(|m| m.powers.iter().find(|&&(j, _)| j == i).map_or(0, |&(_, p)| p))
                    .min()
                    .unwrap_or(0);
                (p != 0).then_some((i, p))
            })
            .collect();
        let exp_arg = if self.terms.keys().all(Monomial::has_exp) {
            self.terms.keys().next().and_then(|m| m.exp_arg.clone())
        } else {
            None
        };
        Monomial { powers, exp_arg }
    }

    /// Exact quotient `self / den` when `den` divides `self` in the Laurent
    /// polynomial ring. Only attempted without exp factors.
    fn try_div(&self, den: &Poly) -> Option<Poly> {
        if self.has_exp() || den.has_exp() || den.is_zero() {
            return None;
        }
        // Shift both into the ordinary polynomial ring.
        let shift_n = self.content();
        let shift_d = den.content();
        let one = Rational::one();
        let mut r = self.mul_term(&shift_n.inv(), &one);
        let d = den.mul_term(&shift_d.inv(), &one);
        let lt_d = d.lex_lead()?;
        let mut q = Poly::zero();
        let mut steps = 0usize;
        while let Some((m, c)) = r.lex_lead() {
            steps += 1;
            if steps > 4096 {
                return None;
            }
            let qm = m.mul(&lt_d.0.inv());
            if qm.powers.iter().any(|&(_, p)| p < 0) {
                return None;
            }
            let qc = &c / &lt_d.1;
            r = r.add(&d.mul_term(&qm, &-&qc));
            q.add_term(qm, qc);
        }
        let back = shift_n.mul(&shift_d.inv());
        Some(q.mul_term(&back, &one))
    }

    /// Leading term under the dense lexicographic monomial order.
    fn lex_lead(&self) -> Option<(Monomial, Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| lex_cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    fn eval_exact(&self, pt: &[Rational]) -> Result<Rational, EvalError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += m.eval_exact(pt)? * c;
        }
        Ok(acc)
    }

    fn eval_f64(&self, pt: &[Rational], ptf: &[f64]) -> Result<f64, EvalError> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            acc += m.eval_f64(pt, ptf)? * rational_to_f64(c);
        }
        Ok(acc)
    }
}

/// Closed-form function of the chart coordinates, kept in canonical form.
///
/// Values are immutable; all operations return new fields.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalarField {
    num: Poly,
    den: Poly,
}

impl Default for ScalarField {
    fn default() -> Self {
        Self::zero()
    }
}

impl ScalarField {
    pub fn zero() -> Self {
        ScalarField {
            num: Poly::zero(),
            den: Poly::constant(Rational::one()),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        ScalarField {
            num: Poly::constant(c),
            den: Poly::constant(Rational::one()),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(rat(n, d))
    }

    /// The coordinate function `x_i`.
    pub fn coord(i: usize) -> Self {
        Self::from_poly(Poly::term(Monomial::var(i), Rational::one()))
    }

    pub fn exp(arg: ScalarField) -> Self {
        if let Some(c) = arg.as_constant() {
            if c.is_zero() {
                return Self::one();
            }
        }
        Self::from_poly(Poly::term(Monomial::exp(arg), Rational::one()))
    }

    fn from_poly(num: Poly) -> Self {
        ScalarField {
            num,
            den: Poly::constant(Rational::one()),
        }
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "structurally zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let content = den.content();
        let (num, den) = if content.is_one() {
            (num, den)
        } else {
            let ci = content.inv();
            (
                num.mul_term(&ci, &Rational::one()),
                den.mul_term(&ci, &Rational::one()),
            )
        };
        if let Some((_, c)) = den.single_term() {
            return Self::from_poly(num.mul_term(&Monomial::one(), &c.recip()));
        }
        if let Some(q) = num.try_div(&den) {
            return Self::from_poly(q);
        }
        // Scale so the leading denominator coefficient is exactly 1.
        let lc = den.lead().map(|(_, c)| c.recip()).unwrap();
        let one = Monomial::one();
        ScalarField {
            num: num.mul_term(&one, &lc),
            den: den.mul_term(&one, &lc),
        }
    }

    /// True when the canonical form is literally zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn has_exp(&self) -> bool {
        self.num.has_exp() || self.den.has_exp()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.depends_on(var)
    }

    /// Largest coordinate index appearing in the field.
    pub fn max_var(&self) -> Option<usize> {
        self.num.max_var().max(self.den.max_var())
    }

    /// Number of terms in numerator plus denominator; a rough size measure.
    pub fn size(&self) -> usize {
        self.num.terms.len() + self.den.terms.len()
    }

    /// Re-normalizes the canonical form. Idempotent.
    pub fn simplify(&self) -> Self {
        Self::normalize(self.num.clone(), self.den.clone())
    }

    /// Exact partial derivative with respect to coordinate `var`.
    pub fn partial(&self, var: usize) -> Self {
        if !self.depends_on(var) {
            return Self::zero();
        }
        let dn = self.num.partial(var);
        if self.den.is_one() {
            return dn;
        }
        let dd = self.den.partial(var);
        let n = Self::from_poly(self.num.clone());
        let d = Self::from_poly(self.den.clone());
        (dn * d.clone() - n * dd) / (d.clone() * d)
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i32) -> Self {
        if e < 0 {
            return Self::one() / self.powi(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut k = e as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        Some(Self::normalize(
            self.num.mul(&rhs.den),
            self.den.mul(&rhs.num),
        ))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarField {
            num: self.num.mul_term(&Monomial::one(), c),
            den: self.den.clone(),
        }
    }

    /// Evaluates at `pt`. The result is exact whenever no `exp` appears.
    pub fn eval(&self, pt: &Point) -> Result<Value, EvalError> {
        if self.has_exp() {
            let ptf = pt.to_f64();
            self.eval_f64_inner(pt.coords(), &ptf).map(Value::Float)
        } else {
            let n = self.num.eval_exact(pt.coords())?;
            let d = self.den.eval_exact(pt.coords())?;
            if d.is_zero() {
                return Err(EvalError::DivisionByZero);
            }
            Ok(Value::Exact(n / d))
        }
    }

    pub fn eval_f64(&self, pt: &Point) -> Result<f64, EvalError> {
        self.eval(pt).map(|v| v.to_f64())
    }

    /// Evaluates in floating point throughout.
    pub fn eval_float(&self, pt: &Point) -> Result<f64, EvalError> {
        self.eval_f64_inner(pt.coords(), &pt.to_f64())
    }

    fn eval_f64_inner(&self, pt: &[Rational], ptf: &[f64]) -> Result<f64, EvalError> {
        let n = self.num.eval_f64(pt, ptf)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let d = self.den.eval_f64(pt, ptf)?;
        if d == 0.0 {
            return Err(EvalError::DivisionByZero);
        }
        Ok(n / d)
    }

    /// Renders the field in the manifest expression grammar.
    pub fn display<'a>(&'a self, names: &'a [String]) -> FieldDisplay<'a> {
        FieldDisplay { field: self, names }
    }
}

impl From<Rational> for ScalarField {
    fn from(c: Rational) -> Self {
        ScalarField::constant(c)
    }
}

impl From<i64> for ScalarField {
    fn from(n: i64) -> Self {
        ScalarField::int(n)
    }
}

impl Add for ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: ScalarField) -> ScalarField {
        if rhs.is_zero() {
            return self;
        }
        if self.is_zero() {
            return rhs;
        }
        if self.den == rhs.den {
            return ScalarField::normalize(self.num.add(&rhs.num), self.den);
        }
        if let Some(q) = rhs.den.try_div(&self.den) {
            return ScalarField::normalize(self.num.mul(&q).add(&rhs.num), rhs.den);
        }
        if let Some(q) = self.den.try_div(&rhs.den) {
            return ScalarField::normalize(rhs.num.mul(&q).add(&self.num), self.den);
        }
        ScalarField::normalize(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: ScalarField) -> ScalarField {
        self + (-rhs)
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        ScalarField {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Mul for ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: ScalarField) -> ScalarField {
        if self.is_zero() || rhs.is_zero() {
            return ScalarField::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ScalarField::from_poly(self.num.mul(&rhs.num));
        }
        ScalarField::normalize(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for ScalarField {
    type Output = ScalarField;
    /// Panics when `rhs` is structurally zero; use [`ScalarField::checked_div`]
    /// to handle that case.
    fn div(self, rhs: ScalarField) -> ScalarField {
        self.checked_div(&rhs).expect("division by a zero scalar field")
    }
}

macro_rules! ref_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<'a> $tr<&'a ScalarField> for &'a ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: &'a ScalarField) -> ScalarField {
                $tr::$m(self.clone(), rhs.clone())
            }
        }
    )*};
}
ref_ops!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for ScalarField {
    fn sum<I: Iterator<Item = ScalarField>>(iter: I) -> Self {
        iter.fold(ScalarField::zero(), |a, b| a + b)
    }
}

pub struct FieldDisplay<'a> {
    field: &'a ScalarField,
    names: &'a [String],
}

fn var_name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("x{i}"))
}

fn write_monomial(out: &mut String, m: &Monomial, names: &[String]) {
    let mut first = true;
    for &(i, p) in &m.powers {
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(&var_name(names, i));
        if p != 1 {
            out.push_str(&format!("^{p}"));
        }
    }
    if let Some(arg) = &m.exp_arg {
        if !first {
            out.push('*');
        }
        out.push_str("exp(");
        write_field(out, arg, names);
        out.push(')');
    }
}

fn write_poly(out: &mut String, p: &Poly, names: &[String]) {
    if p.is_zero() {
        out.push('0');
        return;
    }
    // Constant term last, higher-order terms first.
    for (k, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&fmt_rational(&a));
        } else {
            if !a.is_one() {
                out.push_str(&fmt_rational(&a));
                out.push('*');
            }
            write_monomial(out, m, names);
        }
    }
}

fn write_field(out: &mut String, f: &ScalarField, names: &[String]) {
    if f.den.is_one() {
        write_poly(out, &f.num, names);
    } else {
        out.push('(');
        write_poly(out, &f.num, names);
        out.push_str(")/(");
        write_poly(out, &f.den, names);
        out.push(')');
    }
}

impl fmt::Display for FieldDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_field(&mut s, self.field, self.names);
        f.write_str(&s)
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_field(&mut s, self, &[]);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> ScalarField {
        ScalarField::coord(0)
    }
    fn y() -> ScalarField {
        ScalarField::coord(1)
    }
    fn v() -> ScalarField {
        ScalarField::coord(4)
    }

    fn pt(vals: &[i64]) -> Point {
        Point::new(vals.iter().map(|&n| int(n)).collect())
    }

    #[test]
    fn exp_derivative() {
        let e = ScalarField::exp(-v());
        assert_eq!(e.partial(4), -ScalarField::exp(-v()));
    }

    #[test]
    fn polynomial_partial() {
        let e = x().powi(2) + y().powi(2);
        assert_eq!(e.partial(0), ScalarField::int(2) * x());
    }

    #[test]
    fn product_partial() {
        let e = v() * (ScalarField::int(2) * x());
        assert_eq!(e.partial(4), ScalarField::int(2) * x());
    }

    #[test]
    fn exp_products_merge() {
        let e = ScalarField::exp(-v()) * ScalarField::exp(v()) - ScalarField::one();
        assert!(e.is_zero());
    }

    #[test]
    fn eval_examples() {
        let e = ScalarField::exp(-v());
        assert_eq!(e.eval(&pt(&[0, 0, 0, 0, 0])).unwrap().to_f64(), 1.0);
        let sq = v().powi(2);
        assert_eq!(sq.eval(&pt(&[0, 0, 0, 0, 3])).unwrap(), Value::Exact(int(9)));
        let z = ScalarField::coord(2);
        let e = ScalarField::int(2) * x() * ScalarField::exp(ScalarField::int(2) * z);
        assert_eq!(e.eval(&pt(&[1, 0, 0])).unwrap().to_f64(), 2.0);
    }

    #[test]
    fn eval_division_by_zero() {
        let e = ScalarField::one() / x();
        assert_eq!(e.eval(&pt(&[0])), Err(EvalError::DivisionByZero));
        let f = ScalarField::one() / (x() - ScalarField::one());
        assert_eq!(f.eval(&pt(&[1])), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn fraction_cancellation() {
        let d = x() + ScalarField::one();
        let e = (x() * d.clone()) / d;
        assert_eq!(e, x());
        let a = ScalarField::one() / (x() + y());
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn laurent_inverse() {
        let e = ScalarField::one() / v();
        assert_eq!(e.clone() * v(), ScalarField::one());
        assert_eq!(e.partial(4), -(ScalarField::one() / v().powi(2)));
    }

    #[test]
    fn simplify_idempotent_on_fraction() {
        let e = (x() + ScalarField::int(3)) / (x() * y() + ScalarField::int(2));
        assert_eq!(e.simplify(), e.simplify().simplify());
    }

    #[test]
    fn display_roundtrip() {
        let names: Vec<String> = ["x", "y", "z", "u", "v"].iter().map(|s| s.to_string()).collect();
        let e = ScalarField::ratio(1, 3) * x().powi(2) - ScalarField::exp(-v()) * y()
            + ScalarField::int(4);
        let s = e.display(&names).to_string();
        assert_eq!(parse_expr(&s, &names).unwrap(), e);
    }
}
