use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use super::report::{IntegralsDocument, KernelDocument, ReportDocument, Verification};
use super::{SystemKind, TermDoc};
use crate::polyalg::{format_rational, parse_rational, Rational};

/// `x1..xn`, then `u` for a single input or `u1..um`.
pub fn variable_names(n: usize, m: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    match m {
        0 => {}
        1 => names.push("u".into()),
        _ => names.extend((1..=m).map(|j| format!("u{j}"))),
    }
    names
}

fn monomial(exponents: &[u32], names: &[String]) -> String {
    exponents
        .iter()
        .zip(names)
        .filter(|(e, _)| **e > 0)
        .map(|(e, name)| if *e == 1 { name.clone() } else { format!("{name}^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

/// Joins signed terms as `a + b - c`, omitting unit coefficients.
pub fn format_poly<'a>(terms: impl IntoIterator<Item = (&'a [u32], Rational)>, names: &[String]) -> String {
    let mut out = String::new();
    for (exponents, coeff) in terms {
        if coeff.is_zero() {
            continue;
        }
        let body = monomial(exponents, names);
        let magnitude = coeff.abs();
        let text = if body.is_empty() {
            format_rational(&magnitude)
        } else if magnitude.is_one() {
            body
        } else {
            format!("{}·{body}", format_rational(&magnitude))
        };
        match (out.is_empty(), coeff.is_negative()) {
            (true, false) => out.push_str(&text),
            (true, true) => write!(out, "-{text}").unwrap(),
            (false, false) => write!(out, " + {text}").unwrap(),
            (false, true) => write!(out, " - {text}").unwrap(),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn coeff(text: &str) -> Rational {
    parse_rational(text).expect("documents hold canonical rationals")
}

fn component_terms(terms: &[TermDoc], component: usize) -> Vec<(&[u32], Rational)> {
    let mut picked: Vec<&TermDoc> = terms.iter().filter(|t| t.component == component).collect();
    picked.sort_by_key(|t| t.degree);
    picked.iter().map(|t| (t.exponents.as_slice(), coeff(&t.coeff))).collect()
}

fn tuple(terms: &[TermDoc], dim_out: usize, names: &[String]) -> String {
    let parts: Vec<String> = (1..=dim_out)
        .map(|j| format_poly(component_terms(terms, j), names))
        .collect();
    format!("({})", parts.join(", "))
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "true",
        Some(false) => "false",
        None => "n/a",
    }
}

pub fn render_report(r: &ReportDocument) -> String {
    let names = variable_names(r.n, r.m);
    let mut out = String::new();
    writeln!(out, "normal form through degree {}", r.order).unwrap();
    if r.normal_form.is_empty() {
        writeln!(out, "  dx_i/dt = (linear) for all i").unwrap();
    } else {
        for i in 0..r.n {
            let mut units: Vec<(Vec<u32>, Rational)> = Vec::new();
            for (j, entry) in r.a[i].iter().enumerate() {
                let mut e = vec![0; r.n + r.m];
                e[j] = 1;
                units.push((e, coeff(entry)));
            }
            if let Some(b) = &r.b {
                for (j, entry) in b[i].iter().enumerate() {
                    let mut e = vec![0; r.n + r.m];
                    e[r.n + j] = 1;
                    units.push((e, coeff(entry)));
                }
            }
            let mut all: Vec<(&[u32], Rational)> =
                units.iter().map(|(e, c)| (e.as_slice(), c.clone())).collect();
            all.extend(component_terms(&r.normal_form, i + 1));
            writeln!(out, "  d{}/dt = {}", names[i], format_poly(all, &names)).unwrap();
        }
    }
    if !r.generators.is_empty() {
        writeln!(out, "generators").unwrap();
    }
    for (k, g) in &r.generators {
        if let Some(xi) = &g.xi {
            writeln!(out, "  degree {k}: xi = {}", tuple(xi, r.n, &names)).unwrap();
        }
        if let Some(px) = &g.p_x {
            writeln!(out, "  degree {k}: p_x = {}", tuple(px, r.n, &names[..r.n])).unwrap();
        }
        if let Some(pu) = &g.p_u {
            writeln!(out, "  degree {k}: p_u = {}", tuple(pu, r.m, &names)).unwrap();
        }
    }
    let c = &r.certificates;
    writeln!(out, "certificates").unwrap();
    writeln!(out, "  kernel_residual_zero: {}", c.kernel_residual_zero).unwrap();
    writeln!(out, "  conjugacy_residual_zero: {}", c.conjugacy_residual_zero).unwrap();
    writeln!(out, "  equivariance_zero: {}", flag(c.equivariance_zero)).unwrap();
    if r.nilpotent_residual_zero.is_some() {
        writeln!(out, "  nilpotent_residual_zero: {}", flag(r.nilpotent_residual_zero)).unwrap();
    }
    writeln!(out, "dimensions").unwrap();
    for (k, d) in &r.dimensions {
        writeln!(
            out,
            "  degree {k}: space {}, range {}, complement {}",
            d.space, d.range, d.complement
        )
        .unwrap();
    }
    out
}

pub fn render_kernel(kd: &KernelDocument) -> String {
    let names = variable_names(kd.n, kd.m);
    let mut out = String::new();
    let what = match kd.kind {
        SystemKind::Ode => "complement",
        SystemKind::Control => "kernel of the characteristic operator",
    };
    writeln!(out, "degree {} {what}: {} element(s)", kd.degree, kd.basis.len()).unwrap();
    for (i, q) in kd.basis.iter().enumerate() {
        writeln!(out, "  [{}] {}", i + 1, tuple(q, kd.n, &names)).unwrap();
    }
    if let Some(rc) = &kd.range_complement {
        writeln!(out, "range complement: {} element(s)", rc.len()).unwrap();
        for (i, q) in rc.iter().enumerate() {
            writeln!(out, "  [{}] {}", i + 1, tuple(q, kd.n, &names)).unwrap();
        }
    }
    let d = kd.dimensions;
    writeln!(out, "space {}, range {}, complement {}", d.space, d.range, d.complement).unwrap();
    out
}

pub fn render_integrals(doc: &IntegralsDocument) -> String {
    let mut out = String::new();
    writeln!(out, "first integrals of {}", doc.system).unwrap();
    for l in &doc.integrals {
        let terms = l.terms.iter().map(|t| (t.exponents.as_slice(), coeff(&t.coeff)));
        let mark = if l.certified { "certified" } else { "NOT certified" };
        writeln!(out, "  l{} = {}  [{mark}]", l.index, format_poly(terms, &doc.variables)).unwrap();
    }
    out
}

pub fn render_verification(v: &Verification) -> String {
    let c = &v.certificates;
    let mut out = String::new();
    writeln!(out, "kernel_residual_zero: {}", c.kernel_residual_zero).unwrap();
    writeln!(out, "conjugacy_residual_zero: {}", c.conjugacy_residual_zero).unwrap();
    writeln!(out, "equivariance_zero: {}", flag(c.equivariance_zero)).unwrap();
    writeln!(out, "claims_match: {}", v.claims_match).unwrap();
    writeln!(out, "dimensions_match: {}", v.dimensions_match).unwrap();
    writeln!(out, "{}", if v.ok() { "verified" } else { "FAILED" }).unwrap();
    out
}
