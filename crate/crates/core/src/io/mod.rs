//! JSON interchange documents, engine entry points for the command line, and
//! pretty rendering. Every number travels as a string so nothing is rounded.

mod render;
mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::control::{ControlLinearPart, ControlSystem};
use crate::error::{Error, Result};
use crate::homological::LinearPart;
use crate::linalg::Matrix;
use crate::polyalg::{format_rational, parse_rational, HomPolyMap, MultiIndex, Poly, PolySeries};

pub use render::{
    format_poly, render_integrals, render_kernel, render_report, render_verification, variable_names,
};
pub use report::{
    first_integrals_document, run_kernel, run_normalize, verify_report, CertificateDoc, DimensionDoc,
    GeneratorDoc, IntegralDoc, IntegralsDocument, IntegralsSource, KernelDocument, MonomialDoc,
    ReportDocument, Verification,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Ode,
    Control,
}

/// One monomial of one component: `coeff * x^exponents` in component
/// `component` (1-based) of the degree-`degree` term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub degree: u32,
    pub component: usize,
    pub exponents: Vec<u32>,
    pub coeff: String,
}

pub type MatrixDoc = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub kind: SystemKind,
    pub n: usize,
    #[serde(default)]
    pub m: usize,
    #[serde(rename = "A")]
    pub a: MatrixDoc,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixDoc>,
    #[serde(default)]
    pub terms: Vec<TermDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semisimple_part: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotent_part: Option<MatrixDoc>,
}

/// A validated document turned into engine objects.
#[derive(Clone, Debug)]
pub enum ParsedSystem {
    Ode {
        linear: LinearPart,
        series: PolySeries,
        split: Option<(LinearPart, LinearPart)>,
    },
    Control(ControlSystem),
}

fn json_error(e: serde_json::Error) -> Error {
    Error::input(format!("line {} column {}", e.line(), e.column()), e.to_string())
}

/// Parses and validates a system document.
pub fn parse_system(text: &str) -> Result<SystemDocument> {
    let doc: SystemDocument = serde_json::from_str(text).map_err(json_error)?;
    doc.interpret()?;
    Ok(doc)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(json_error)
}

/// Parses a report produced by [`run_normalize`]; semantic checks happen in
/// [`verify_report`].
pub fn parse_report(text: &str) -> Result<ReportDocument> {
    parse_json(text)
}

/// Pretty-printed JSON followed by a newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub(crate) fn matrix_from_doc(rows: &MatrixDoc, n_rows: usize, n_cols: usize, field: &str) -> Result<Matrix> {
    if rows.len() != n_rows {
        return Err(Error::input(field, format!("expected {n_rows} rows, found {}", rows.len())));
    }
    let mut out = Matrix::zeros(n_rows, n_cols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n_cols {
            return Err(Error::input(
                format!("{field}[{i}]"),
                format!("expected {n_cols} entries, found {}", row.len()),
            ));
        }
        for (j, entry) in row.iter().enumerate() {
            out[(i, j)] = parse_rational(entry)
                .map_err(|e| Error::input(format!("{field}[{i}][{j}]"), e.to_string()))?;
        }
    }
    Ok(out)
}

pub fn matrix_to_doc(m: &Matrix) -> MatrixDoc {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(format_rational).collect())
        .collect()
}

/// Groups terms into homogeneous maps from `dim_in` variables to
/// `R^dim_out`; repeated monomials are summed.
pub(crate) fn terms_to_maps(
    terms: &[TermDoc],
    dim_in: usize,
    dim_out: usize,
    field: &str,
) -> Result<BTreeMap<u32, HomPolyMap>> {
    let mut polys: BTreeMap<u32, Vec<Poly>> = BTreeMap::new();
    for (t, term) in terms.iter().enumerate() {
        let at = |part: &str| format!("{field}[{t}].{part}");
        if term.degree < 2 {
            return Err(Error::input(at("degree"), "nonlinear terms must have degree at least 2"));
        }
        if term.exponents.len() != dim_in {
            return Err(Error::input(
                at("exponents"),
                format!("expected {dim_in} exponents, found {}", term.exponents.len()),
            ));
        }
        let total: u32 = term.exponents.iter().sum();
        if total != term.degree {
            return Err(Error::input(
                at("exponents"),
                format!("exponents sum to {total} but degree is {}", term.degree),
            ));
        }
        if term.component == 0 || term.component > dim_out {
            return Err(Error::input(
                at("component"),
                format!("component {} outside 1..={dim_out}", term.component),
            ));
        }
        let coeff = parse_rational(&term.coeff).map_err(|e| Error::input(at("coeff"), e.to_string()))?;
        let comps = polys
            .entry(term.degree)
            .or_insert_with(|| vec![Poly::zero(dim_in); dim_out]);
        comps[term.component - 1].add_term(MultiIndex::new(term.exponents.clone()), coeff);
    }
    polys
        .into_iter()
        .map(|(k, comps)| Ok((k, HomPolyMap::from_polys(k, comps)?)))
        .collect()
}

pub(crate) fn map_to_terms(f: &HomPolyMap) -> Vec<TermDoc> {
    let mut out = Vec::new();
    for (j, c) in f.components().iter().enumerate() {
        for (m, coeff) in c.terms() {
            out.push(TermDoc {
                degree: f.degree(),
                component: j + 1,
                exponents: m.exponents().to_vec(),
                coeff: format_rational(coeff),
            });
        }
    }
    out
}

pub(crate) fn series_to_terms(s: &PolySeries) -> Vec<TermDoc> {
    s.terms().flat_map(map_to_terms).collect()
}

fn series_from_maps(maps: BTreeMap<u32, HomPolyMap>, dim_in: usize, dim_out: usize) -> Result<PolySeries> {
    let top = maps.keys().next_back().copied().unwrap_or(2);
    let mut s = PolySeries::new(dim_in, dim_out, top);
    for f in maps.into_values() {
        s.set_term(f)?;
    }
    Ok(s)
}

impl SystemDocument {
    /// Validates the document and builds the corresponding engine objects.
    pub fn interpret(&self) -> Result<ParsedSystem> {
        let n = self.n;
        if n == 0 {
            return Err(Error::input("n", "state dimension must be at least 1"));
        }
        if self.a.len() == n && self.a.iter().any(|row| row.len() != n) {
            return Err(Error::input("A", format!("A must be square ({n}x{n})")));
        }
        let a = matrix_from_doc(&self.a, n, n, "A")?;
        match self.kind {
            SystemKind::Ode => {
                if self.m != 0 {
                    return Err(Error::input("m", "ODE documents must have m = 0"));
                }
                if self.b.as_ref().is_some_and(|b| b.iter().any(|r| !r.is_empty())) {
                    return Err(Error::input("B", "ODE documents take no input matrix"));
                }
                let maps = terms_to_maps(&self.terms, n, n, "terms")?;
                let series = series_from_maps(maps, n, n)?;
                let split = match (&self.semisimple_part, &self.nilpotent_part) {
                    (None, None) => None,
                    (Some(s), Some(nil)) => Some((
                        LinearPart::new(matrix_from_doc(s, n, n, "semisimple_part")?)?,
                        LinearPart::new(matrix_from_doc(nil, n, n, "nilpotent_part")?)?,
                    )),
                    (Some(_), None) => {
                        return Err(Error::input("nilpotent_part", "required with semisimple_part"))
                    }
                    (None, Some(_)) => {
                        return Err(Error::input("semisimple_part", "required with nilpotent_part"))
                    }
                };
                Ok(ParsedSystem::Ode {
                    linear: LinearPart::new(a)?,
                    series,
                    split,
                })
            }
            SystemKind::Control => {
                if self.semisimple_part.is_some() || self.nilpotent_part.is_some() {
                    return Err(Error::input(
                        "semisimple_part",
                        "Jordan-Chevalley parts apply to ODE documents only",
                    ));
                }
                let b = match &self.b {
                    Some(b) => matrix_from_doc(b, n, self.m, "B")?,
                    None if self.m == 0 => Matrix::zeros(n, 0),
                    None => return Err(Error::input("B", "control documents need B")),
                };
                let lin = ControlLinearPart::new(a, b)?;
                let maps = terms_to_maps(&self.terms, n + self.m, n, "terms")?;
                let series = series_from_maps(maps, n + self.m, n)?;
                Ok(ParsedSystem::Control(ControlSystem::new(lin, series)?))
            }
        }
    }

    pub fn ode(linear: &LinearPart, series: &PolySeries, split: Option<(&LinearPart, &LinearPart)>) -> Self {
        SystemDocument {
            kind: SystemKind::Ode,
            n: linear.dim(),
            m: 0,
            a: matrix_to_doc(linear.matrix()),
            b: None,
            terms: series_to_terms(series),
            semisimple_part: split.map(|(s, _)| matrix_to_doc(s.matrix())),
            nilpotent_part: split.map(|(_, nil)| matrix_to_doc(nil.matrix())),
        }
    }

    pub fn control(sys: &ControlSystem) -> Self {
        SystemDocument {
            kind: SystemKind::Control,
            n: sys.lin.n(),
            m: sys.lin.m(),
            a: matrix_to_doc(sys.lin.a()),
            b: Some(matrix_to_doc(sys.lin.b())),
            terms: series_to_terms(&sys.nonlinear),
            semisimple_part: None,
            nilpotent_part: None,
        }
    }
}

/// Names of the built-in example documents.
pub const EXAMPLE_NAMES: [&str; 2] = ["brunovsky", "uncontrollable"];

/// Built-in example documents: `"brunovsky"` is `x1' = x2 + x2^2`,
/// `x2' = u`; `"uncontrollable"` has `z' = x2`, `x1' = 0`, `x2' = u` over
/// `(z, x1, x2, u)` with a few quadratic terms.
pub fn example_document(name: &str) -> Option<SystemDocument> {
    let s = |v: &str| v.to_string();
    let term = |component, exponents: &[u32], coeff: &str| TermDoc {
        degree: exponents.iter().sum(),
        component,
        exponents: exponents.to_vec(),
        coeff: s(coeff),
    };
    match name {
        "brunovsky" => Some(SystemDocument {
            kind: SystemKind::Control,
            n: 2,
            m: 1,
            a: vec![vec![s("0"), s("1")], vec![s("0"), s("0")]],
            b: Some(vec![vec![s("0")], vec![s("1")]]),
            terms: vec![term(1, &[0, 2, 0], "1")],
            semisimple_part: None,
            nilpotent_part: None,
        }),
        "uncontrollable" => Some(SystemDocument {
            kind: SystemKind::Control,
            n: 3,
            m: 1,
            a: vec![
                vec![s("0"), s("0"), s("1")],
                vec![s("0"), s("0"), s("0")],
                vec![s("0"), s("0"), s("0")],
            ],
            b: Some(vec![vec![s("0")], vec![s("0")], vec![s("1")]]),
            terms: vec![
                term(1, &[0, 0, 2, 0], "1"),
                term(2, &[1, 1, 0, 0], "-1/2"),
                term(3, &[0, 1, 0, 1], "3"),
            ],
            semisimple_part: None,
            nilpotent_part: None,
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests;
