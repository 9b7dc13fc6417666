#![allow(dead_code)]

pub mod gen;

use contact_geom::scalar::{int, Domain, Interval};
use contact_geom::{parse_expr, FrameVec, Manifold, ManifoldData, ScalarField, VectorField};

pub fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn ex(src: &str, names: &[String]) -> ScalarField {
    parse_expr(src, names).unwrap()
}

pub fn field(comps: &[&str], names: &[String]) -> VectorField {
    VectorField(comps.iter().map(|c| ex(c, names)).collect())
}

pub fn fv(comps: &[i64]) -> FrameVec {
    FrameVec(comps.iter().map(|&c| ScalarField::int(c)).collect())
}

pub fn diag(entries: &[i64]) -> Vec<Vec<ScalarField>> {
    let n = entries.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ScalarField::int(entries[i]) } else { ScalarField::zero() })
                .collect()
        })
        .collect()
}

/// `phi[j]` given as a list of (source, target, sign): φ(e_src) = sign e_tgt.
pub fn phi_from(dim: usize, maps: &[(usize, usize, i64)]) -> Vec<FrameVec> {
    let mut out = vec![FrameVec::zero(dim); dim];
    for &(s, t, c) in maps {
        out[s].0[t] = ScalarField::int(c);
    }
    out
}

fn data(
    name: &str,
    coords: Vec<String>,
    frame: Vec<VectorField>,
    metric: Vec<Vec<ScalarField>>,
    phi: Vec<FrameVec>,
    xi: usize,
    domain: Domain,
) -> ManifoldData {
    let dim = coords.len();
    ManifoldData {
        name: name.into(),
        coordinates: coords,
        frame,
        metric,
        phi,
        xi: FrameVec::basis(xi, dim),
        domain,
        seed: 20240601,
        samples: 50,
        tol: 1e-9,
    }
}

pub fn example1_data() -> ManifoldData {
    let n = names(&["x", "y", "z", "u", "v"]);
    let frame = vec![
        field(&["exp(-v)", "0", "0", "0", "0"], &n),
        field(&["0", "exp(-v)", "0", "0", "0"], &n),
        field(&["0", "0", "exp(-v)", "0", "0"], &n),
        field(&["0", "0", "0", "exp(-v)", "0"], &n),
        field(&["0", "0", "0", "0", "1"], &n),
    ];
    let phi = phi_from(5, &[(0, 2, 1), (1, 3, 1), (2, 0, -1), (3, 1, -1)]);
    data("example1", n, frame, diag(&[1, 1, -1, -1, 1]), phi, 4, Domain::cube(5))
}

pub fn example2_data() -> ManifoldData {
    let n = names(&["x", "y", "z", "u", "v"]);
    let frame = vec![
        field(&["v", "0", "0", "0", "0"], &n),
        field(&["0", "v", "0", "0", "0"], &n),
        field(&["0", "0", "v", "0", "0"], &n),
        field(&["0", "0", "0", "v", "0"], &n),
        field(&["0", "0", "0", "0", "-v"], &n),
    ];
    let phi = phi_from(5, &[(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)]);
    let mut domain = Domain::cube(5);
    domain.boxes[4] = Interval::new(contact_geom::scalar::rat(1, 4), int(3));
    domain.nonvanishing.push(ScalarField::coord(4));
    data("example2", n, frame, diag(&[1, 1, 1, 1, 1]), phi, 4, domain)
}

pub fn example3_data() -> ManifoldData {
    let n = names(&["x", "y", "z"]);
    let frame = vec![
        field(&["1", "0", "0"], &n),
        field(&["0", "1", "0"], &n),
        field(&["2*x", "-1", "1"], &n),
    ];
    let phi = phi_from(3, &[(0, 1, -1), (1, 0, 1)]);
    let mut domain = Domain::cube(3);
    domain.nonvanishing.push(ScalarField::coord(1));
    data("example3", n, frame, diag(&[1, 1, 1]), phi, 2, domain)
}

pub fn flat_data(dim: usize) -> ManifoldData {
    let n: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    let frame = (0..dim).map(|i| VectorField::coordinate(i, dim)).collect();
    let ones = vec![1; dim];
    data("flat", n, frame, diag(&ones), vec![FrameVec::zero(dim); dim], dim - 1, Domain::cube(dim))
}

pub fn load(d: ManifoldData) -> Manifold {
    Manifold::new(d).unwrap()
}
