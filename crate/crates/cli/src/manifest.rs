//! JSON manifest: a manifold, its almost contact data and an optional potential.

use serde::Deserialize;

use contact_geom::geometry::inverse;
use contact_geom::scalar::{int, Domain, Interval};
use contact_geom::soliton::Potential;
use contact_geom::{parse_expr, FrameVec, Manifold, ManifoldData, Rational, ScalarField, VectorField};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub name: String,
    pub coordinates: Vec<String>,
    /// Row `a` holds the coordinate components of `e_a`.
    pub frame: Vec<Vec<String>>,
    pub metric_frame: Vec<Vec<String>>,
    /// Row `a` holds the frame components of `φ(e_a)`.
    pub phi_frame: Vec<Vec<String>>,
    pub xi: Xi,
    #[serde(default)]
    pub domain: Vec<Constraint>,
    pub potential: Option<PotentialSpec>,
    pub constants: Option<Constants>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Xi {
    /// 0-based frame index.
    Index(usize),
    /// Coordinate components.
    Components(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Constraint {
    Interval { coordinate: String, interval: [Number; 2] },
    Nonvanishing { nonvanishing: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialSpec {
    /// Coordinate components of `V`.
    Vector(Vec<String>),
    Function(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub lambda_tilde: Number,
    pub mu: Number,
}

/// Command-line overrides of the sampling settings.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

/// A manifest after parsing and validation.
pub struct Loaded {
    pub manifest: Manifest,
    pub manifold: Manifold,
    pub potential: Option<Potential>,
    pub constants: Option<(Rational, Rational)>,
    pub settings: Settings,
}

/// 1-based line and column of byte offset `pos`.
fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

struct Source<'a> {
    text: &'a str,
    names: &'a [String],
}

impl Source<'_> {
    fn expr(&self, field: &str, src: &str) -> Result<ScalarField, CliError> {
        parse_expr(src, self.names).map_err(|e| {
            let quoted = serde_json::to_string(src).unwrap_or_default();
            let (line, column) = match self.text.find(&quoted) {
                Some(pos) => {
                    let (l, c) = line_col(self.text, pos);
                    (l, c + e.column)
                }
                None => (0, e.column),
            };
            CliError::Parse {
                line,
                column,
                message: format!("{field}: {}", e.message),
            }
        })
    }

    fn row(&self, field: &str, row: &[String]) -> Result<Vec<ScalarField>, CliError> {
        row.iter().map(|s| self.expr(field, s)).collect()
    }

    fn matrix(&self, field: &str, rows: &[Vec<String>]) -> Result<Vec<Vec<ScalarField>>, CliError> {
        rows.iter()
            .enumerate()
            .map(|(i, r)| self.row(&format!("{field}[{i}]"), r))
            .collect()
    }
}

pub fn parse_rational(field: &str, text: &str) -> Result<Rational, CliError> {
    let invalid = |message: String| CliError::Validation {
        message: format!("{field}: {message}"),
        witness: None,
    };
    let e = parse_expr(text, &[]).map_err(|e| invalid(e.to_string()))?;
    e.as_constant()
        .ok_or_else(|| invalid(format!("`{text}` is not a rational constant")))
}

fn number(field: &str, n: &Number) -> Result<Rational, CliError> {
    match n {
        Number::Int(i) => Ok(int(*i)),
        Number::Float(f) => parse_rational(field, &f.to_string()),
        Number::Text(s) => parse_rational(field, s),
    }
}

fn validation(message: impl Into<String>) -> CliError {
    CliError::Validation {
        message: message.into(),
        witness: None,
    }
}

fn check_identifiers(names: &[String]) -> Result<(), CliError> {
    for (i, n) in names.iter().enumerate() {
        let mut chars = n.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok || n == "exp" {
            return Err(validation(format!("coordinate `{n}` is not a valid identifier")));
        }
        if names[..i].contains(n) {
            return Err(validation(format!("coordinate `{n}` is declared twice")));
        }
    }
    Ok(())
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest, CliError> {
        serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            CliError::Parse {
                line: e.line(),
                column: e.column(),
                message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
            }
        })
    }

    pub fn settings(&self, o: Overrides) -> Settings {
        Settings {
            seed: o.seed.or(self.seed).unwrap_or(DEFAULT_SEED),
            samples: o.samples.or(self.samples).unwrap_or(DEFAULT_SAMPLES),
            tol: o.tol.or(self.tol).unwrap_or(DEFAULT_TOL),
        }
    }

    fn domain(&self, src: &Source) -> Result<Domain, CliError> {
        let mut domain = Domain::cube(self.coordinates.len());
        for c in &self.domain {
            match c {
                Constraint::Interval { coordinate, interval } => {
                    let i = self
                        .coordinates
                        .iter()
                        .position(|n| n == coordinate)
                        .ok_or_else(|| validation(format!("domain: unknown coordinate `{coordinate}`")))?;
                    let lo = number("domain interval", &interval[0])?;
                    let hi = number("domain interval", &interval[1])?;
                    if lo >= hi {
                        return Err(validation(format!("domain: empty interval for `{coordinate}`")));
                    }
                    domain.boxes[i] = Interval::new(lo, hi);
                }
                Constraint::Nonvanishing { nonvanishing } => {
                    domain.nonvanishing.push(src.expr("domain", nonvanishing)?);
                }
            }
        }
        Ok(domain)
    }

    /// Parses every expression and validates the geometry.
    pub fn load(self, text: &str, o: Overrides) -> Result<Loaded, CliError> {
        check_identifiers(&self.coordinates)?;
        let dim = self.coordinates.len();
        let src = Source {
            text,
            names: &self.coordinates,
        };
        let frame: Vec<VectorField> = src.matrix("frame", &self.frame)?.into_iter().map(VectorField).collect();
        let metric = src.matrix("metric_frame", &self.metric_frame)?;
        let phi: Vec<FrameVec> = src.matrix("phi_frame", &self.phi_frame)?.into_iter().map(FrameVec).collect();
        let shape_ok = frame.len() == dim
            && frame.iter().all(|v| v.dim() == dim)
            && metric.len() == dim
            && metric.iter().all(|r| r.len() == dim)
            && phi.len() == dim
            && phi.iter().all(|v| v.dim() == dim);
        if !shape_ok {
            return Err(validation(format!(
                "frame, metric_frame and phi_frame must be {dim} x {dim} matrices"
            )));
        }
        let xi = match &self.xi {
            Xi::Index(i) if *i < dim => FrameVec::basis(*i, dim),
            Xi::Index(i) => return Err(validation(format!("xi: frame index {i} out of range"))),
            Xi::Components(c) => {
                let comps = src.row("xi", c)?;
                if comps.len() != dim {
                    return Err(validation(format!("xi: expected {dim} components")));
                }
                coords_to_frame(&frame, &comps)?
            }
        };
        let domain = self.domain(&src)?;
        let settings = self.settings(o);
        if settings.samples == 0 {
            return Err(validation("samples must be positive"));
        }
        if !(settings.tol > 0.0) {
            return Err(validation("tol must be positive"));
        }
        let data = ManifoldData {
            name: self.name.clone(),
            coordinates: self.coordinates.clone(),
            frame,
            metric,
            phi,
            xi,
            domain,
            seed: settings.seed,
            samples: settings.samples,
            tol: settings.tol,
        };
        let manifold = Manifold::new(data).map_err(CliError::from)?;
        let potential = match &self.potential {
            None => None,
            Some(PotentialSpec::Vector(c)) => {
                let comps = src.row("potential", c)?;
                if comps.len() != dim {
                    return Err(validation(format!("potential: expected {dim} components")));
                }
                Some(Potential::Vector(manifold.to_frame(&VectorField(comps))))
            }
            Some(PotentialSpec::Function(f)) => Some(Potential::Function(src.expr("potential", f)?)),
        };
        let constants = match &self.constants {
            None => None,
            Some(c) => Some((number("lambda_tilde", &c.lambda_tilde)?, number("mu", &c.mu)?)),
        };
        Ok(Loaded {
            manifest: self,
            manifold,
            potential,
            constants,
            settings,
        })
    }
}

/// Frame components of a vector given in coordinates, before the manifold exists.
fn coords_to_frame(frame: &[VectorField], comps: &[ScalarField]) -> Result<FrameVec, CliError> {
    let e: Vec<Vec<ScalarField>> = frame.iter().map(|v| v.0.clone()).collect();
    let inv = inverse(&e).ok_or_else(|| validation("frame matrix is singular"))?;
    let dim = comps.len();
    Ok(FrameVec(
        (0..dim)
            .map(|a| (0..dim).map(|i| &comps[i] * &inv[i][a]).sum())
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
  "name": "r3",
  "coordinates": ["x", "y", "z"],
  "frame": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
  "metric_frame": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
  "phi_frame": [["0", "1", "0"], ["-1", "0", "0"], ["0", "0", "0"]],
  "xi": 2
}"#;

    #[test]
    fn minimal_manifest_loads() {
        let m = Manifest::parse(MINIMAL).unwrap();
        let l = m.load(MINIMAL, Overrides::default()).unwrap();
        assert_eq!(l.settings.samples, DEFAULT_SAMPLES);
        assert_eq!(l.manifold.dim(), 3);
        assert!(l.potential.is_none());
    }

    #[test]
    fn expression_errors_point_into_the_file() {
        let text = MINIMAL.replacen(r#"["0", "0", "1"]]"#, r#"["0", "0", "1 + $"]]"#, 1);
        let err = Manifest::parse(&text).unwrap().load(&text, Overrides::default());
        match err {
            Err(CliError::Parse { line, column, .. }) => {
                assert_eq!(line, 4);
                let row = text.lines().nth(3).unwrap();
                assert_eq!(row.chars().nth(column - 1), Some('$'));
            }
            _ => panic!("expected a parse error"),
        }
    }

    #[test]
    fn json_errors_carry_position() {
        match Manifest::parse("{\n  \"name\": 3\n}") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            _ => panic!("expected a parse error"),
        }
    }

    #[test]
    fn xi_from_components() {
        let text = MINIMAL.replace("\"xi\": 2", "\"xi\": [\"0\", \"0\", \"1\"]");
        let l = Manifest::parse(&text).unwrap().load(&text, Overrides::default()).unwrap();
        assert_eq!(l.manifold.xi(), &FrameVec::basis(2, 3));
    }

    #[test]
    fn overrides_win() {
        let m = Manifest::parse(MINIMAL).unwrap();
        let s = m.settings(Overrides {
            seed: Some(9),
            samples: Some(7),
            tol: None,
        });
        assert_eq!((s.seed, s.samples, s.tol), (9, 7, DEFAULT_TOL));
    }

    #[test]
    fn rejects_bad_coordinates() {
        let text = MINIMAL.replace("\"z\"]", "\"x\"]");
        assert!(matches!(
            Manifest::parse(&text).unwrap().load(&text, Overrides::default()),
            Err(CliError::Validation { .. })
        ));
    }

    #[test]
    fn rational_arguments() {
        assert_eq!(parse_rational("mu", "-4").unwrap(), int(-4));
        assert_eq!(parse_rational("p", "2/5").unwrap(), contact_geom::scalar::rat(2, 5));
        assert!(parse_rational("p", "x").is_err());
    }
}
