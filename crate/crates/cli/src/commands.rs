use contact_geom::curvature::{h_tensors, Connection, Curvature};
use contact_geom::soliton::{classify, solve_soliton, verify_soliton, Potential, SolitonProblem};
use contact_geom::structure::{
    check_almost_contact, check_almost_kenmotsu, check_contact_field, check_kenmotsu,
    check_kenmotsu_lemmas, solve_eta_einstein, solve_nullity,
};
use contact_geom::{FrameOp, FrameVec, Manifold, Rational, ScalarField, Tensor2};

use crate::error::CliError;
use crate::manifest::Loaded;
use crate::report::{Body, CheckBody, Component, CurvatureSummary, Entry, Section, SolitonBody, TablesBody};
use crate::{CheckSection, Table};

fn is_zero(m: &Manifold, f: &ScalarField) -> bool {
    f.is_zero() || m.zero_test().verdict(f).is_zero()
}

fn scalar_text(m: &Manifold, f: &ScalarField) -> String {
    f.display(m.coordinates()).to_string()
}

/// `c e_k` terms joined into a linear combination.
pub fn vector_text(m: &Manifold, v: &FrameVec) -> String {
    let mut out = String::new();
    for (k, c) in v.0.iter().enumerate() {
        if is_zero(m, c) {
            continue;
        }
        let text = scalar_text(m, c);
        let (neg, body) = match c.as_constant() {
            Some(_) => match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            },
            None => (false, format!("({text})")),
        };
        let term = if body == "1" {
            format!("e{}", k + 1)
        } else {
            format!("{body} e{}", k + 1)
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push_str(&format!("-{term}")),
            (true, false) => out.push_str(&term),
            (false, true) => out.push_str(&format!(" - {term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn vector_entry(m: &Manifold, label: String, indices: Vec<usize>, v: &FrameVec) -> Entry {
    Entry {
        label,
        indices,
        value: vector_text(m, v),
        components: Some(
            v.0.iter()
                .enumerate()
                .filter(|(_, c)| !is_zero(m, c))
                .map(|(k, c)| Component {
                    index: k + 1,
                    value: scalar_text(m, c),
                })
                .collect(),
        ),
    }
}

fn scalar_entry(m: &Manifold, label: String, indices: Vec<usize>, f: &ScalarField) -> Entry {
    Entry {
        label,
        indices,
        value: scalar_text(m, f),
        components: None,
    }
}

/// Entries `T(e_a, e_b)` with `a ≤ b`.
fn tensor_entries(m: &Manifold, name: &str, t: &Tensor2, all: bool) -> Vec<Entry> {
    let dim = m.dim();
    let mut out = Vec::new();
    for a in 0..dim {
        for b in a..dim {
            let f = t.get(a, b);
            if all || !is_zero(m, f) {
                out.push(scalar_entry(m, format!("{name}(e{},e{})", a + 1, b + 1), vec![a + 1, b + 1], f));
            }
        }
    }
    out
}

fn op_entries(m: &Manifold, name: &str, op: &FrameOp, all: bool) -> Vec<Entry> {
    (0..m.dim())
        .filter(|&j| all || !op.cols[j].0.iter().all(|c| is_zero(m, c)))
        .map(|j| vector_entry(m, format!("{name} e{}", j + 1), vec![j + 1], &op.cols[j]))
        .collect()
}

fn vector_is_zero(m: &Manifold, v: &FrameVec) -> bool {
    v.0.iter().all(|c| is_zero(m, c))
}

struct Geometry {
    conn: Connection,
    curv: Curvature,
}

impl Geometry {
    fn new(m: &Manifold) -> Self {
        let conn = Connection::koszul(m);
        let curv = Curvature::new(m, &conn);
        Geometry { conn, curv }
    }
}

fn section(name: &str, passed: bool, summary: String, reports: Vec<contact_geom::structure::CheckReport>) -> Section {
    Section {
        name: name.into(),
        passed,
        summary,
        reports,
    }
}

fn pass_text(passed: bool) -> String {
    if passed { "pass" } else { "fail" }.into()
}

pub fn check(loaded: &Loaded, only: &[CheckSection]) -> Result<(bool, Body), CliError> {
    let m = &loaded.manifold;
    let g = Geometry::new(m);
    let st = h_tensors(m, &g.curv);
    let selected = |s: CheckSection| only.is_empty() || only.contains(&s);
    let mut sections = Vec::new();
    let mut nullity = None;
    let mut eta_einstein = None;

    if selected(CheckSection::AlmostContact) {
        let r = check_almost_contact(m);
        sections.push(section("almost-contact", r.passed(), pass_text(r.passed()), vec![r]));
    }
    if selected(CheckSection::Kenmotsu) {
        let k = check_kenmotsu(m, &g.conn, &g.curv);
        let l = check_kenmotsu_lemmas(m, &g.conn, &g.curv);
        let passed = k.passed() && l.passed();
        sections.push(section("kenmotsu", passed, pass_text(passed), vec![k, l]));
    }
    if selected(CheckSection::AlmostKenmotsu) {
        let r = check_almost_kenmotsu(m, &g.conn, &st);
        sections.push(section("almost-kenmotsu", r.passed(), pass_text(r.passed()), vec![r]));
    }
    if selected(CheckSection::Nullity) {
        let r = solve_nullity(m, &g.conn, &g.curv, &st)?;
        let passed = r.exact_fit;
        let summary = format!(
            "{}, kappa = {}, mu = {}, residual {:e}",
            pass_text(passed),
            r.kappa.render(),
            r.mu.render(),
            r.fit.residual
        );
        sections.push(section("nullity", passed, summary, vec![r.checks.clone()]));
        nullity = Some(r);
    }
    if selected(CheckSection::EtaEinstein) {
        let r = solve_eta_einstein(m, &g.curv)?;
        let passed = r.exact_fit;
        let summary = format!(
            "{}, a = {}, b = {}, residual {:e}{}",
            pass_text(passed),
            r.a.render(),
            r.b.render(),
            r.fit.residual,
            if r.einstein { ", Einstein" } else { "" }
        );
        sections.push(section("eta-einstein", passed, summary, vec![r.checks.clone()]));
        eta_einstein = Some(r);
    }

    let curvature = CurvatureSummary {
        scalar: scalar_text(m, &g.curv.scalar),
        star_scalar: scalar_text(m, &g.curv.star_scalar),
        ricci: tensor_entries(m, "S", &g.curv.ricci, false),
        star_ricci: tensor_entries(m, "S*", &g.curv.star, false),
        ricci_operator: op_entries(m, "Q", &g.curv.ricci_op, false),
        h_prime: op_entries(m, "h'", &st.h_prime, false),
        h_prime_spectrum: st.spectrum.clone(),
    };
    let passed = sections.iter().all(|s| s.passed);
    Ok((
        passed,
        Body::Check(CheckBody {
            sections,
            nullity,
            eta_einstein,
            curvature,
        }),
    ))
}

pub fn tables(loaded: &Loaded, what: Table, all: bool) -> Body {
    let m = &loaded.manifold;
    let dim = m.dim();
    let mut spectrum = None;
    let entries = match what {
        Table::Brackets => {
            let mut out = Vec::new();
            for i in 0..dim {
                for j in i + 1..dim {
                    let v = m.frame_bracket(i, j);
                    if all || !vector_is_zero(m, v) {
                        out.push(vector_entry(m, format!("[e{},e{}]", i + 1, j + 1), vec![i + 1, j + 1], v));
                    }
                }
            }
            out
        }
        Table::Conn => {
            let conn = Connection::koszul(m);
            let mut out = Vec::new();
            for i in 0..dim {
                for j in 0..dim {
                    let v = conn.get(i, j);
                    if all || !vector_is_zero(m, v) {
                        out.push(vector_entry(m, format!("nabla_e{} e{}", i + 1, j + 1), vec![i + 1, j + 1], v));
                    }
                }
            }
            out
        }
        Table::Riem => {
            let g = Geometry::new(m);
            let mut out = Vec::new();
            for i in 0..dim {
                for j in i + 1..dim {
                    for k in 0..dim {
                        let v = g.curv.get(i, j, k);
                        if all || !vector_is_zero(m, v) {
                            let label = format!("R(e{},e{})e{}", i + 1, j + 1, k + 1);
                            out.push(vector_entry(m, label, vec![i + 1, j + 1, k + 1], v));
                        }
                    }
                }
            }
            out
        }
        Table::Ricci => {
            let g = Geometry::new(m);
            let mut out = tensor_entries(m, "S", &g.curv.ricci, all);
            out.push(scalar_entry(m, "r".into(), vec![], &g.curv.scalar));
            out
        }
        Table::Star => {
            let g = Geometry::new(m);
            let mut out = tensor_entries(m, "S*", &g.curv.star, all);
            out.push(scalar_entry(m, "r*".into(), vec![], &g.curv.star_scalar));
            out
        }
        Table::H => {
            let g = Geometry::new(m);
            let st = h_tensors(m, &g.curv);
            spectrum = Some(st.spectrum.clone());
            let mut out = op_entries(m, "h", &st.h, all);
            out.extend(op_entries(m, "h'", &st.h_prime, all));
            out
        }
    };
    Body::Tables(TablesBody {
        what: what.name().into(),
        all,
        entries,
        spectrum,
    })
}

pub enum Mode {
    Solve,
    Verify { lambda_tilde: Option<Rational>, mu: Option<Rational> },
}

pub fn soliton(loaded: &Loaded, mode: Mode, p: Option<Rational>) -> Result<(bool, Body), CliError> {
    let m = &loaded.manifold;
    let potential = loaded.potential.clone().ok_or(CliError::MissingPotential)?;
    let g = Geometry::new(m);
    let contact = match &potential {
        Potential::Vector(v) => Some(check_contact_field(m, v)),
        Potential::Function(_) => None,
    };
    let problem = SolitonProblem {
        manifold: m,
        connection: &g.conn,
        curvature: &g.curv,
        potential,
    };
    let form = problem.potential.form();
    let n = m.n();
    match mode {
        Mode::Solve => {
            let mut rep = solve_soliton(&problem)?;
            let classification = match (&p, rep.lambda_tilde.to_rational()) {
                (Some(p), Some(lt)) => Some(classify(&lt, n, Some(p))),
                _ => rep.classification.clone(),
            };
            rep.classification = None;
            let passed = rep.exact_fit;
            Ok((
                passed,
                Body::Soliton(SolitonBody {
                    mode: "solve".into(),
                    form,
                    solve: Some(rep),
                    verify: None,
                    classification,
                    contact,
                }),
            ))
        }
        Mode::Verify { lambda_tilde, mu } => {
            let (lt, mu) = match (lambda_tilde, mu, &loaded.constants) {
                (Some(l), Some(u), _) => (l, u),
                (l, u, Some((cl, cu))) => (l.unwrap_or_else(|| cl.clone()), u.unwrap_or_else(|| cu.clone())),
                _ => return Err(CliError::MissingConstants),
            };
            let rep = verify_soliton(&problem, &lt, &mu);
            let classification = Some(classify(&lt, n, p.as_ref()));
            Ok((
                rep.passed,
                Body::Soliton(SolitonBody {
                    mode: "verify".into(),
                    form,
                    solve: None,
                    verify: Some(rep),
                    classification,
                    contact,
                }),
            ))
        }
    }
}
