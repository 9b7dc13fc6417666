//! Report schema and human-readable rendering.

use std::fmt::Write as _;

use serde::Serialize;

use contact_geom::curvature::Spectrum;
use contact_geom::soliton::{Classification, Form, PairResidual, SolitonReport, VerifyReport};
use contact_geom::structure::{Check, CheckReport, ContactReport, EtaEinsteinReport, NullityReport};

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub manifest: ManifestInfo,
    pub settings: SettingsInfo,
    pub passed: bool,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Tool {
    pub fn current() -> Tool {
        Tool {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestInfo {
    pub name: String,
    /// Hex SHA-256 of the manifest bytes.
    pub sha256: String,
    pub coordinates: Vec<String>,
    pub dimension: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SettingsInfo {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    /// Sample points actually used.
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", content = "result", rename_all = "snake_case")]
pub enum Body {
    Check(CheckBody),
    Tables(TablesBody),
    Soliton(SolitonBody),
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckBody {
    pub sections: Vec<Section>,
    pub nullity: Option<NullityReport>,
    pub eta_einstein: Option<EtaEinsteinReport>,
    pub curvature: CurvatureSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub reports: Vec<CheckReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureSummary {
    pub scalar: String,
    pub star_scalar: String,
    pub ricci: Vec<Entry>,
    pub star_ricci: Vec<Entry>,
    pub ricci_operator: Vec<Entry>,
    pub h_prime: Vec<Entry>,
    pub h_prime_spectrum: Spectrum,
}

/// One table entry; `components` is set for vector-valued entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub label: String,
    /// 1-based frame indices.
    pub indices: Vec<usize>,
    pub value: String,
    pub components: Option<Vec<Component>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub index: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TablesBody {
    pub what: String,
    pub all: bool,
    pub entries: Vec<Entry>,
    pub spectrum: Option<Spectrum>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolitonBody {
    pub mode: String,
    pub form: Form,
    pub solve: Option<SolitonReport>,
    pub verify: Option<VerifyReport>,
    pub classification: Option<Classification>,
    pub contact: Option<ContactReport>,
}

fn status(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "FAIL"
    }
}

fn write_check(out: &mut String, c: &Check) {
    let _ = write!(
        out,
        "    {:<24} {}  residual {:e}",
        c.name,
        status(c.passed),
        c.residual
    );
    if !c.passed {
        if let Some(at) = &c.at {
            let _ = write!(out, "  at {at}");
        }
        if let contact_geom::ZeroVerdict::NonZero { witness, value } = &c.verdict {
            let _ = write!(out, "  value {value} at point ({})", witness.to_strings().join(", "));
        }
    }
    out.push('\n');
}

fn write_entries(out: &mut String, entries: &[Entry]) {
    if entries.is_empty() {
        out.push_str("    (all zero)\n");
    }
    for e in entries {
        let _ = writeln!(out, "    {} = {}", e.label, e.value);
    }
}

fn write_residuals(out: &mut String, table: &[PairResidual]) {
    for r in table {
        let _ = writeln!(
            out,
            "    ({},{})  {:<32} {}",
            r.i,
            r.j,
            r.value,
            if r.zero { "zero" } else { "nonzero" }
        );
    }
}

impl Report {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {}  manifest {} ({})",
            self.tool.name,
            self.tool.version,
            self.manifest.name,
            &self.manifest.sha256[..12]
        );
        let _ = writeln!(
            out,
            "seed {}  samples {}  tol {:e}",
            self.settings.seed, self.settings.samples, self.settings.tol
        );
        match &self.body {
            Body::Check(b) => b.render(&mut out),
            Body::Tables(b) => b.render(&mut out),
            Body::Soliton(b) => b.render(&mut out),
        }
        let _ = writeln!(out, "overall: {}", status(self.passed));
        out
    }
}

impl CheckBody {
    fn render(&self, out: &mut String) {
        for s in &self.sections {
            let _ = writeln!(out, "{}: {}", s.name, s.summary);
            for r in &s.reports {
                for c in &r.checks {
                    write_check(out, c);
                }
            }
        }
        let c = &self.curvature;
        let _ = writeln!(out, "scalar curvature r = {}", c.scalar);
        let _ = writeln!(out, "*-scalar curvature r* = {}", c.star_scalar);
        out.push_str("Ricci S:\n");
        write_entries(out, &c.ricci);
        out.push_str("*-Ricci S*:\n");
        write_entries(out, &c.star_ricci);
        if let Some(ex) = &c.h_prime_spectrum.exact {
            let _ = writeln!(out, "spectrum of h': {{{}}}", ex.join(", "));
        }
    }
}

impl TablesBody {
    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "table {} ({} entries)", self.what, self.entries.len());
        write_entries(out, &self.entries);
        if let Some(ex) = self.spectrum.as_ref().and_then(|s| s.exact.as_ref()) {
            let _ = writeln!(out, "spectrum of h': {{{}}}", ex.join(", "));
        }
    }
}

impl SolitonBody {
    fn render(&self, out: &mut String) {
        let form = match self.form {
            Form::Vector => "vector",
            Form::Gradient => "gradient",
        };
        let _ = writeln!(out, "soliton {} ({form} form)", self.mode);
        if let Some(s) = &self.solve {
            let _ = writeln!(out, "  lambda_tilde = {}", s.lambda_tilde.render());
            let _ = writeln!(out, "  mu = {}", s.mu.render());
            let _ = writeln!(out, "  lambda = {}", s.lambda);
            let _ = writeln!(
                out,
                "  residual = {:e} ({})",
                s.fit.residual,
                if s.exact_fit { "exact fit" } else { "least squares" }
            );
            out.push_str("  residual table at the fitted constants:\n");
            write_residuals(out, &s.residual_table);
        }
        if let Some(v) = &self.verify {
            let _ = writeln!(
                out,
                "  lambda_tilde = {}, mu = {}, lambda = {}",
                v.lambda_tilde, v.mu, v.lambda
            );
            write_residuals(out, &v.residual_table);
            let _ = writeln!(out, "  max residual {:e}", v.max_residual);
        }
        if let Some(c) = &self.classification {
            let _ = writeln!(out, "  {}", c.rule);
            if let (Some(p), Some(l), Some(v)) = (&c.p, &c.lambda, &c.verdict) {
                let _ = writeln!(out, "  p = {p}: lambda = {l}, {v}");
            }
        }
        if let Some(c) = &self.contact {
            let _ = writeln!(out, "  potential: [V, xi] = f xi with f = {}", c.f);
            write_check(out, &c.is_contact);
            write_check(out, &c.is_strict);
        }
    }
}
