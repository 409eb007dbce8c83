use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    map_to_terms, matrix_from_doc, matrix_to_doc, series_to_terms, terms_to_maps,
    MatrixDoc, ParsedSystem, SystemDocument, SystemKind, TermDoc,
};
use crate::control::{
    brunovsky_first_integrals, characteristic_field, control_complement, normalize_control,
    range_complement, theorem1_residual, uncontrollable_example, uncontrollable_first_integrals_example,
    verify_control_conjugacy, ControlLinearPart, ControlSolver, ControlSystem, FirstIntegral, SkewGenerator,
};
use crate::error::{Error, Result};
use crate::homological::{lie_derivative, split};
use crate::ode::{normalize_ode, verify_conjugacy, DimensionRecord, HomologicalSolver, TransformationLog};
use crate::polyalg::{HomPolyMap, PolySeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionDoc {
    pub space: usize,
    pub range: usize,
    pub complement: usize,
}

impl From<DimensionRecord> for DimensionDoc {
    fn from(d: DimensionRecord) -> Self {
        DimensionDoc {
            space: d.space,
            range: d.range,
            complement: d.complement,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub kernel_residual_zero: bool,
    pub conjugacy_residual_zero: bool,
    pub equivariance_zero: Option<bool>,
}

impl CertificateDoc {
    pub fn all_pass(&self) -> bool {
        self.kernel_residual_zero && self.conjugacy_residual_zero && self.equivariance_zero != Some(false)
    }
}

/// Generator of one degree: `xi` for ODEs, `p_x` and `p_u` for control systems.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<TermDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_x: Option<Vec<TermDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_u: Option<Vec<TermDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub kind: SystemKind,
    pub n: usize,
    pub m: usize,
    pub order: u32,
    #[serde(rename = "A")]
    pub a: MatrixDoc,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixDoc>,
    pub normal_form: Vec<TermDoc>,
    pub generators: BTreeMap<u32, GeneratorDoc>,
    pub certificates: CertificateDoc,
    /// `L_{A_n^T} g = 0` for every degree; informational, only with a split.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotent_residual_zero: Option<bool>,
    pub dimensions: BTreeMap<u32, DimensionDoc>,
}

/// Complement basis at one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDocument {
    pub kind: SystemKind,
    pub n: usize,
    pub m: usize,
    pub degree: u32,
    /// ODE: `ker L_{A^T}`. Control: polynomial solutions of the
    /// characteristic PDE `Df * A^T x - A^T f = 0`.
    pub basis: Vec<Vec<TermDoc>>,
    /// Control only: orthogonal complement of the range of the control operator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_complement: Option<Vec<Vec<TermDoc>>>,
    pub dimensions: DimensionDoc,
}

fn check_order(order: u32, field: &str) -> Result<()> {
    if order < 2 {
        return Err(Error::input(field, "must be at least 2"));
    }
    Ok(())
}

/// Complement basis and dimension table at `degree`.
pub fn run_kernel(doc: &SystemDocument, degree: u32) -> Result<KernelDocument> {
    check_order(degree, "degree")?;
    let (basis, range, dims) = match doc.interpret()? {
        ParsedSystem::Ode { linear, .. } => {
            let s = split(&linear, degree)?;
            let dims = DimensionDoc {
                space: s.space_dim(),
                range: s.range_basis.len(),
                complement: s.complement_basis.len(),
            };
            (s.complement_basis, None, dims)
        }
        ParsedSystem::Control(sys) => {
            let dims = ControlSolver::new(&sys.lin, degree)?.dimensions().into();
            (
                control_complement(&sys.lin, degree)?,
                Some(range_complement(&sys.lin, degree)?),
                dims,
            )
        }
    };
    let encode = |maps: Vec<HomPolyMap>| maps.iter().map(map_to_terms).collect::<Vec<_>>();
    Ok(KernelDocument {
        kind: doc.kind,
        n: doc.n,
        m: doc.m,
        degree,
        basis: encode(basis),
        range_complement: range.map(encode),
        dimensions: dims,
    })
}

/// Normalizes the document's system through degree `order`.
pub fn run_normalize(doc: &SystemDocument, order: u32) -> Result<ReportDocument> {
    check_order(order, "order")?;
    match doc.interpret()? {
        ParsedSystem::Ode { linear, series, split } => {
            let split_ref = split.as_ref().map(|(s, n)| (s, n));
            let report = normalize_ode(&linear, &series, order, split_ref)?;
            let generators = report
                .log
                .generators
                .iter()
                .map(|(k, xi)| {
                    let g = GeneratorDoc {
                        xi: Some(map_to_terms(xi)),
                        ..GeneratorDoc::default()
                    };
                    (*k, g)
                })
                .collect();
            Ok(ReportDocument {
                kind: SystemKind::Ode,
                n: doc.n,
                m: 0,
                order,
                a: matrix_to_doc(linear.matrix()),
                b: None,
                normal_form: series_to_terms(&report.normal_form),
                generators,
                certificates: CertificateDoc {
                    kernel_residual_zero: report.kernel_ok(),
                    conjugacy_residual_zero: report.conjugacy_ok(),
                    equivariance_zero: report.equivariance_ok(),
                },
                nilpotent_residual_zero: report.nilpotent_kernel_ok(),
                dimensions: report.dimensions.iter().map(|(k, d)| (*k, (*d).into())).collect(),
            })
        }
        ParsedSystem::Control(sys) => {
            let report = normalize_control(&sys, order)?;
            let generators = report
                .log
                .iter()
                .map(|(k, p)| {
                    let g = GeneratorDoc {
                        xi: None,
                        p_x: Some(map_to_terms(p.p_x())),
                        p_u: Some(map_to_terms(p.p_u())),
                    };
                    (*k, g)
                })
                .collect();
            Ok(ReportDocument {
                kind: SystemKind::Control,
                n: doc.n,
                m: doc.m,
                order,
                a: matrix_to_doc(sys.lin.a()),
                b: Some(matrix_to_doc(sys.lin.b())),
                normal_form: series_to_terms(&report.normal_form.nonlinear),
                generators,
                certificates: CertificateDoc {
                    kernel_residual_zero: report.kernel_ok(),
                    conjugacy_residual_zero: report.conjugacy_ok(),
                    equivariance_zero: None,
                },
                nilpotent_residual_zero: None,
                dimensions: report.dimensions.iter().map(|(k, d)| (*k, (*d).into())).collect(),
            })
        }
    }
}

/// Outcome of re-checking a report against its input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub certificates: CertificateDoc,
    /// The report's stated certificates equal the recomputed ones.
    pub claims_match: bool,
    /// The report's dimension table equals the recomputed one.
    pub dimensions_match: bool,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.certificates.all_pass() && self.claims_match && self.dimensions_match
    }
}

fn graded(maps: BTreeMap<u32, HomPolyMap>, dim_in: usize, dim_out: usize, order: u32) -> Result<PolySeries> {
    let mut s = PolySeries::new(dim_in, dim_out, order);
    for (k, f) in maps {
        if k > order {
            return Err(Error::input("normal_form", format!("degree {k} above order {order}")));
        }
        s.set_term(f)?;
    }
    Ok(s)
}

fn single_degree(
    terms: &[TermDoc],
    dim_in: usize,
    dim_out: usize,
    degree: u32,
    field: &str,
) -> Result<HomPolyMap> {
    let mut maps = terms_to_maps(terms, dim_in, dim_out, field)?;
    if maps.keys().any(|&k| k != degree) {
        return Err(Error::input(field, format!("terms must all have degree {degree}")));
    }
    Ok(maps.remove(&degree).unwrap_or_else(|| HomPolyMap::zero(dim_in, dim_out, degree)))
}

fn missing(field: String) -> Error {
    Error::input(field, "missing generator block")
}

/// Recomputes every certificate of `report` from the input system and the
/// logged generators. Malformed or mismatched reports are input errors.
pub fn verify_report(doc: &SystemDocument, report: &ReportDocument) -> Result<Verification> {
    if report.kind != doc.kind || report.n != doc.n || report.m != doc.m {
        return Err(Error::input("report", "kind or dimensions differ from the input system"));
    }
    check_order(report.order, "order")?;
    let order = report.order;
    let (n, m) = (doc.n, doc.m);
    let (certificates, dims) = match doc.interpret()? {
        ParsedSystem::Ode { linear, series, split } => {
            if matrix_from_doc(&report.a, n, n, "report.A")? != *linear.matrix() {
                return Err(Error::input("report.A", "linear part differs from the input"));
            }
            let g = graded(terms_to_maps(&report.normal_form, n, n, "normal_form")?, n, n, order)?
                .with_linear(linear.matrix().clone())?;
            let mut log = TransformationLog::default();
            for (k, gen) in &report.generators {
                let field = format!("generators.{k}.xi");
                let xi = gen.xi.as_ref().ok_or_else(|| missing(field.clone()))?;
                log.generators.insert(*k, single_degree(xi, n, n, *k, &field)?);
            }
            let f = series.retruncate(order).with_linear(linear.matrix().clone())?;
            let conjugacy = verify_conjugacy(&f, &log, &g, order)?.ok();
            let adjoint = linear.adjoint();
            let mut kernel = true;
            let mut equivariance = split.as_ref().map(|_| true);
            let mut dims = BTreeMap::new();
            for k in 2..=order {
                let gk = g.term(k);
                kernel &= lie_derivative(&adjoint, &gk)?.is_zero();
                if let (Some(eq), Some((s, _))) = (equivariance.as_mut(), split.as_ref()) {
                    *eq &= lie_derivative(&s.adjoint(), &gk)?.is_zero();
                }
                dims.insert(k, HomologicalSolver::new(&linear, k)?.dimensions().into());
            }
            let certs = CertificateDoc {
                kernel_residual_zero: kernel,
                conjugacy_residual_zero: conjugacy,
                equivariance_zero: equivariance,
            };
            (certs, dims)
        }
        ParsedSystem::Control(sys) => {
            let b = report.b.as_ref().ok_or_else(|| Error::input("report.B", "missing"))?;
            if matrix_from_doc(&report.a, n, n, "report.A")? != *sys.lin.a()
                || matrix_from_doc(b, n, m, "report.B")? != *sys.lin.b()
            {
                return Err(Error::input("report", "linear part differs from the input"));
            }
            let g = graded(
                terms_to_maps(&report.normal_form, n + m, n, "normal_form")?,
                n + m,
                n,
                order,
            )?;
            let g = ControlSystem::new(sys.lin.clone(), g)?;
            let mut log = BTreeMap::new();
            for (k, gen) in &report.generators {
                let fx = format!("generators.{k}.p_x");
                let fu = format!("generators.{k}.p_u");
                let px = gen.p_x.as_ref().ok_or_else(|| missing(fx.clone()))?;
                let pu = gen.p_u.as_ref().ok_or_else(|| missing(fu.clone()))?;
                let p = SkewGenerator::new(
                    single_degree(px, n, n, *k, &fx)?,
                    single_degree(pu, n + m, m, *k, &fu)?,
                )?;
                log.insert(*k, p);
            }
            let f = ControlSystem::new(sys.lin.clone(), sys.nonlinear.retruncate(order))?;
            let conjugacy = verify_control_conjugacy(&f, &log, &g, order)?.ok();
            let mut kernel = true;
            let mut dims = BTreeMap::new();
            for k in 2..=order {
                kernel &= theorem1_residual(&sys.lin, &g.term(k))?.is_zero();
                dims.insert(k, ControlSolver::new(&sys.lin, k)?.dimensions().into());
            }
            let certs = CertificateDoc {
                kernel_residual_zero: kernel,
                conjugacy_residual_zero: conjugacy,
                equivariance_zero: None,
            };
            (certs, dims)
        }
    };
    Ok(Verification {
        claims_match: certificates == report.certificates,
        dimensions_match: dims == report.dimensions,
        certificates,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialDoc {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralDoc {
    pub index: usize,
    pub terms: Vec<MonomialDoc>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralsDocument {
    pub system: String,
    pub variables: Vec<String>,
    pub integrals: Vec<IntegralDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegralsSource {
    Brunovsky(usize),
    Uncontrollable,
}

/// Certified first integrals of a Brunovsky pair or of the built-in
/// uncontrollable example.
pub fn first_integrals_document(source: IntegralsSource) -> Result<IntegralsDocument> {
    let (system, lin, integrals, variables): (String, ControlLinearPart, Vec<FirstIntegral>, Vec<String>) =
        match source {
            IntegralsSource::Brunovsky(n) => {
                let mut vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
                vars.push("u".into());
                (
                    format!("brunovsky n={n}"),
                    crate::control::brunovsky_pair(n)?,
                    brunovsky_first_integrals(n)?,
                    vars,
                )
            }
            IntegralsSource::Uncontrollable => (
                "uncontrollable".into(),
                uncontrollable_example(),
                uncontrollable_first_integrals_example()?,
                ["z", "x1", "x2", "u"].iter().map(|s| s.to_string()).collect(),
            ),
        };
    let field = characteristic_field(&lin);
    Ok(IntegralsDocument {
        system,
        variables,
        integrals: integrals
            .iter()
            .map(|l| IntegralDoc {
                index: l.index,
                terms: l
                    .poly
                    .terms()
                    .map(|(m, c)| MonomialDoc {
                        exponents: m.exponents().to_vec(),
                        coeff: crate::polyalg::format_rational(c),
                    })
                    .collect(),
                certified: l.certify(&field),
            })
            .collect(),
    })
}
