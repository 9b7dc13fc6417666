use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{fmt_rational, rational_to_f64, Rational, ScalarField};

/// Point of the chart, stored exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational_to_f64).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_rational).collect()
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<Rational>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(Point)
    }
}

/// Open coordinate interval `(lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi }
    }
}

/// Sampling region: one interval per coordinate plus expressions that must
/// stay away from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub boxes: Vec<Interval>,
    pub nonvanishing: Vec<ScalarField>,
}

impl Domain {
    /// Default box `(-2, 2)` on every coordinate.
    pub fn cube(dim: usize) -> Self {
        Domain {
            boxes: vec![Interval::new(super::int(-2), super::int(2)); dim],
            nonvanishing: Vec::new(),
        }
    }

    pub fn contains(&self, pt: &Point, margin: f64) -> bool {
        if pt.dim() != self.boxes.len() {
            return false;
        }
        let inside = self
            .boxes
            .iter()
            .zip(pt.coords())
            .all(|(b, x)| *x > b.lo && *x < b.hi);
        inside
            && self.nonvanishing.iter().all(|e| match e.eval(pt) {
                Ok(v) => v.to_f64().abs() >= margin,
                Err(_) => false,
            })
    }
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
const GRID_BITS: u32 = 16;

fn radical_inverse(mut k: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut acc = 0.0;
    while k > 0 {
        acc += (k % base) as f64 * inv;
        k /= base;
        inv /= base as f64;
    }
    acc
}

/// Seeded quasi-random points: a Halton sequence with a random shift,
/// snapped to a dyadic grid so coordinates stay exact and small.
#[derive(Debug, Clone)]
pub struct Sampler {
    pub domain: Domain,
    pub seed: u64,
    pub count: usize,
    /// Points closer than this to a declared singular locus are rejected.
    pub margin: f64,
}

impl Sampler {
    pub fn new(domain: Domain, seed: u64, count: usize) -> Self {
        Sampler {
            domain,
            seed,
            count,
            margin: 1e-3,
        }
    }

    pub fn points(&self) -> Vec<Point> {
        let dim = self.domain.boxes.len();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let grid = (1u64 << GRID_BITS) as f64;
        let mut out = Vec::with_capacity(self.count);
        let mut k = 1u64;
        let limit = 1000 * self.count as u64 + 1000;
        while out.len() < self.count && k < limit {
            let coords: Vec<Rational> = (0..dim)
                .map(|d| {
                    let base = PRIMES[d % PRIMES.len()];
                    // Cycle dimensions beyond the prime table through a scrambled index.
                    let idx = if d < PRIMES.len() { k } else { k.wrapping_mul(2654435761) };
                    let u = (radical_inverse(idx, base) + shift[d]).fract();
                    let q = ((u * grid).round() as i64).clamp(1, (1 << GRID_BITS) - 1);
                    let b = &self.domain.boxes[d];
                    let t = Rational::new(BigInt::from(q), BigInt::from(1i64 << GRID_BITS));
                    &b.lo + (&b.hi - &b.lo) * t
                })
                .collect();
            let pt = Point::new(coords);
            if self.domain.contains(&pt, self.margin) {
                out.push(pt);
            }
            k += 1;
        }
        out
    }
}

/// Outcome of testing a field for identical vanishing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum ZeroVerdict {
    /// The canonical form is literally zero.
    ProvedZero,
    /// Nonzero canonical form, but every sample was below tolerance.
    NumericallyZero { max_abs: f64 },
    NonZero { witness: Point, value: f64 },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ZeroVerdict::ProvedZero => "ProvedZero",
            ZeroVerdict::NumericallyZero { .. } => "NumericallyZero",
            ZeroVerdict::NonZero { .. } => "NonZero",
        }
    }
}

/// Randomized zero test over a fixed set of sample points.
#[derive(Debug, Clone)]
pub struct ZeroTest {
    pub points: Vec<Point>,
    pub tol: f64,
}

impl ZeroTest {
    pub fn new(points: Vec<Point>, tol: f64) -> Self {
        ZeroTest { points, tol }
    }

    pub fn from_sampler(sampler: &Sampler, tol: f64) -> Self {
        ZeroTest::new(sampler.points(), tol)
    }

    /// Points where evaluation fails (e.g. a vanishing denominator) are skipped.
    pub fn verdict(&self, e: &ScalarField) -> ZeroVerdict {
        if e.is_zero() {
            return ZeroVerdict::ProvedZero;
        }
        let mut max_abs: f64 = 0.0;
        for pt in &self.points {
            let Ok(v) = e.eval(pt) else { continue };
            let a = v.to_f64().abs();
            if a.is_nan() || a >= self.tol {
                return ZeroVerdict::NonZero {
                    witness: pt.clone(),
                    value: v.to_f64(),
                };
            }
            max_abs = max_abs.max(a);
        }
        ZeroVerdict::NumericallyZero { max_abs }
    }
}
