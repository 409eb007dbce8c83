//! Degree-by-degree normalization of `x' = Ax + f^[2](x) + ... + f^[N](x)`.
//!
//! At each degree `k` the current term is split as `f^[k] = L_A xi + r` with
//! `r` in `ker L_{A^T}` and `xi` orthogonal to `ker L_A`; the time-one flow of
//! `xi` then removes `L_A xi` and only disturbs degrees above `k`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::homological::{lie_derivative, validate_split, LinearPart};
use crate::innerprod::weighted_dot;
use crate::linalg::Matrix;
use crate::polyalg::flow::{conjugacy_residual, pullback};
use crate::polyalg::{HomPolyMap, PolyMap, PolySeries, Rational, VfBasis};

/// Generators `xi^[k]` of the successive time-one flows, by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformationLog {
    pub generators: BTreeMap<u32, HomPolyMap>,
}

impl TransformationLog {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionRecord {
    pub space: usize,
    pub range: usize,
    pub complement: usize,
}

/// Exact residuals recorded for one degree of a normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCertificate {
    pub degree: u32,
    /// `L_{A^T} g^[k]`.
    pub kernel_residual: HomPolyMap,
    /// Degree-`k` part of the conjugacy identity residual.
    pub conjugacy_residual: HomPolyMap,
    /// `L_{A_s^T} g^[k]`, when a semisimple part was supplied.
    pub equivariance_residual: Option<HomPolyMap>,
    /// `L_{A_n^T} g^[k]`, informational; may be nonzero.
    pub nilpotent_residual: Option<HomPolyMap>,
}

/// Per-degree conjugacy residuals, degrees `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub residuals: BTreeMap<u32, HomPolyMap>,
}

impl ConjugacyReport {
    pub fn ok(&self) -> bool {
        self.residuals.values().all(HomPolyMap::is_zero)
    }

    /// Degrees with a nonzero residual.
    pub fn failing_degrees(&self) -> Vec<u32> {
        self.residuals
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(k, _)| *k)
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct NormalFormReport {
    pub linear_part: LinearPart,
    pub normal_form: PolySeries,
    pub log: TransformationLog,
    pub certificates: Vec<DegreeCertificate>,
    pub dimensions: BTreeMap<u32, DimensionRecord>,
}

impl NormalFormReport {
    pub fn kernel_ok(&self) -> bool {
        self.certificates.iter().all(|c| c.kernel_residual.is_zero())
    }

    pub fn conjugacy_ok(&self) -> bool {
        self.certificates.iter().all(|c| c.conjugacy_residual.is_zero())
    }

    /// `None` when no Jordan-Chevalley split was supplied.
    pub fn equivariance_ok(&self) -> Option<bool> {
        self.certificates
            .iter()
            .map(|c| c.equivariance_residual.as_ref().map(HomPolyMap::is_zero))
            .try_fold(true, |acc, ok| ok.map(|ok| acc && ok))
    }

    pub fn nilpotent_kernel_ok(&self) -> Option<bool> {
        self.certificates
            .iter()
            .map(|c| c.nilpotent_residual.as_ref().map(HomPolyMap::is_zero))
            .try_fold(true, |acc, ok| ok.map(|ok| acc && ok))
    }
}

/// Orthogonal projection of coordinate vector `v` onto `span(family)` under a
/// diagonal Gram matrix; `family` must be linearly independent.
pub(crate) fn project_coords(
    weights: &[Rational],
    v: &[Rational],
    family: &[Vec<Rational>],
) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::zero(); v.len()];
    if family.is_empty() {
        return Ok(out);
    }
    let r = family.len();
    let mut gram = Matrix::zeros(r, r);
    let mut rhs = Vec::with_capacity(r);
    for i in 0..r {
        for j in i..r {
            let g = weighted_dot(weights, &family[i], &family[j]);
            gram[(j, i)] = g.clone();
            gram[(i, j)] = g;
        }
        rhs.push(weighted_dot(weights, &family[i], v));
    }
    let c = gram.solve(&rhs).ok_or(Error::DependentSubspace)?;
    for (ci, f) in c.iter().zip(family) {
        if ci.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(f) {
            *o += ci * x;
        }
    }
    Ok(out)
}

/// Precomputed data for solving the homological equation at one degree.
#[derive(Clone, Debug)]
pub struct HomologicalSolver {
    degree: u32,
    basis: VfBasis,
    weights: Vec<Rational>,
    matrix: Matrix,
    /// Coordinates spanning `ker L_A`.
    kernel: Vec<Vec<Rational>>,
    /// Coordinates spanning `ker L_{A^T}`, the complement of the range.
    complement: Vec<Vec<Rational>>,
}

impl HomologicalSolver {
    pub fn new(a: &LinearPart, k: u32) -> Result<Self> {
        let split = crate::homological::split(a, k)?;
        let basis = VfBasis::new(a.dim(), a.dim(), k);
        let matrix = crate::homological::homological_matrix(a, k)?.matrix;
        let complement = split
            .complement_basis
            .iter()
            .map(|q| basis.coords(q))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomologicalSolver {
            degree: k,
            weights: basis.gram_weights(),
            kernel: matrix.kernel(),
            complement,
            matrix,
            basis,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dimensions(&self) -> DimensionRecord {
        DimensionRecord {
            space: self.basis.len(),
            range: self.basis.len() - self.complement.len(),
            complement: self.complement.len(),
        }
    }

    pub fn kernel_basis(&self) -> Vec<HomPolyMap> {
        self.kernel.iter().map(|v| self.basis.from_coords(v)).collect()
    }

    /// Returns `(xi, residual)` with `fk = L_A xi + residual`.
    pub fn solve(&self, fk: &HomPolyMap) -> Result<(HomPolyMap, HomPolyMap)> {
        let c = self.basis.coords(fk)?;
        let residual = project_coords(&self.weights, &c, &self.complement)?;
        let removable: Vec<Rational> = c.iter().zip(&residual).map(|(a, b)| a - b).collect();
        let particular = self.matrix.solve(&removable).ok_or_else(|| {
            Error::Verification(format!(
                "degree {} term minus its complement part is not in the range",
                self.degree
            ))
        })?;
        let drift = project_coords(&self.weights, &particular, &self.kernel)?;
        let xi: Vec<Rational> = particular.iter().zip(&drift).map(|(a, b)| a - b).collect();
        Ok((self.basis.from_coords(&xi), self.basis.from_coords(&residual)))
    }
}

/// Splits `fk = L_A xi + residual` with `residual` in `ker L_{A^T}` and `xi`
/// orthogonal to `ker L_A`.
pub fn solve_homological(a: &LinearPart, fk: &HomPolyMap) -> Result<(HomPolyMap, HomPolyMap)> {
    if fk.degree() < 2 {
        return Err(Error::shape("homological equation needs degree >= 2"));
    }
    HomologicalSolver::new(a, fk.degree())?.solve(fk)
}

fn check_square(n: usize, xi: &HomPolyMap) -> Result<()> {
    if xi.dim_in() != n || xi.dim_out() != n {
        return Err(Error::shape(format!(
            "generator {}->{} for a field in {n} dimensions",
            xi.dim_in(),
            xi.dim_out()
        )));
    }
    if xi.degree() < 2 {
        return Err(Error::shape("generator degree must be at least 2"));
    }
    Ok(())
}

/// Transforms `f` by the time-one flow of `xi`, keeping degrees up to `max_degree`.
pub fn pushforward_ode(f: &PolySeries, xi: &HomPolyMap, max_degree: u32) -> Result<PolySeries> {
    let n = f.dim_in();
    if f.dim_out() != n {
        return Err(Error::shape("ODE series must be square"));
    }
    check_square(n, xi)?;
    let g = pullback(&f.to_poly_map(), &xi.to_poly_map(), n, max_degree);
    PolySeries::from_poly_map(&g, max_degree)
}

/// Recomputes the composed coordinate change from `log` and checks
/// `D psi(y) g(y) = f(psi(y))` degree by degree through `max_degree`.
pub fn verify_conjugacy(
    f: &PolySeries,
    log: &TransformationLog,
    g: &PolySeries,
    max_degree: u32,
) -> Result<ConjugacyReport> {
    let n = f.dim_in();
    if f.dim_out() != n || g.dim_in() != n || g.dim_out() != n {
        return Err(Error::shape("conjugacy check needs square series of equal size"));
    }
    for xi in log.generators.values() {
        check_square(n, xi)?;
    }
    let gens: Vec<PolyMap> = log.generators.values().map(HomPolyMap::to_poly_map).collect();
    let residual = conjugacy_residual(&f.to_poly_map(), &gens, &g.to_poly_map(), n, max_degree);
    Ok(ConjugacyReport {
        residuals: (1..=max_degree)
            .map(|k| (k, residual.homogeneous_part(k)))
            .collect(),
    })
}

/// Normal form of `x' = Ax + f(x)` through degree `max_degree`.
///
/// The linear part of `f` must be zero or equal to `A`. When `split` carries
/// `(A_s, A_n)` it is validated and the report records the equivariance
/// residuals `L_{A_s^T} g^[k]`.
pub fn normalize_ode(
    a: &LinearPart,
    f: &PolySeries,
    max_degree: u32,
    split: Option<(&LinearPart, &LinearPart)>,
) -> Result<NormalFormReport> {
    let n = a.dim();
    if f.dim_in() != n || f.dim_out() != n {
        return Err(Error::shape(format!(
            "series {}->{} for a {n}x{n} linear part",
            f.dim_in(),
            f.dim_out()
        )));
    }
    if !f.linear().is_zero() && f.linear() != a.matrix() {
        return Err(Error::shape("series linear part differs from A"));
    }
    if let Some((s, nil)) = split {
        let report = validate_split(a, s, nil)?;
        if !report.passed() {
            return Err(Error::InvalidSplit(report.failures()));
        }
    }

    let original = f.retruncate(max_degree).with_linear(a.matrix().clone())?;
    let mut current = original.clone();
    let mut log = TransformationLog::default();
    let mut dimensions = BTreeMap::new();
    for k in 2..=max_degree {
        let solver = HomologicalSolver::new(a, k)?;
        dimensions.insert(k, solver.dimensions());
        let (xi, residual) = solver.solve(&current.term(k))?;
        if xi.is_zero() {
            continue;
        }
        current = pushforward_ode(&current, &xi, max_degree)?;
        if current.term(k) != residual {
            return Err(Error::Verification(format!(
                "degree {k} term after transformation is not the complement residual"
            )));
        }
        log.generators.insert(k, xi);
    }

    let conjugacy = verify_conjugacy(&original, &log, &current, max_degree)?;
    let adjoint = a.adjoint();
    let certificates = (2..=max_degree)
        .map(|k| {
            let gk = current.term(k);
            let equivariance = split
                .map(|(s, _)| lie_derivative(&s.adjoint(), &gk))
                .transpose()?;
            let nilpotent = split
                .map(|(_, nil)| lie_derivative(&nil.adjoint(), &gk))
                .transpose()?;
            Ok(DegreeCertificate {
                degree: k,
                kernel_residual: lie_derivative(&adjoint, &gk)?,
                conjugacy_residual: conjugacy.residuals[&k].clone(),
                equivariance_residual: equivariance,
                nilpotent_residual: nilpotent,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if !conjugacy.residuals.get(&1).map_or(true, HomPolyMap::is_zero) {
        return Err(Error::Verification("linear part changed under normalization".into()));
    }

    Ok(NormalFormReport {
        linear_part: a.clone(),
        normal_form: current,
        log,
        certificates,
        dimensions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{int, MultiIndex};

    fn mono(n: usize, j: usize, e: &[u32]) -> HomPolyMap {
        HomPolyMap::monomial(n, j, MultiIndex::new(e.to_vec()), int(1))
    }

    fn diag12() -> LinearPart {
        LinearPart::diagonal(&[int(1), int(2)])
    }

    #[test]
    fn solve_examples() {
        let (xi, r) = solve_homological(&diag12(), &mono(2, 1, &[1, 1])).unwrap();
        assert_eq!(xi, mono(2, 1, &[1, 1]));
        assert!(r.is_zero());

        let (xi, r) = solve_homological(&diag12(), &mono(2, 1, &[2, 0])).unwrap();
        assert!(xi.is_zero());
        assert_eq!(r, mono(2, 1, &[2, 0]));

        let (xi, r) = solve_homological(&diag12(), &HomPolyMap::zero(2, 2, 3)).unwrap();
        assert!(xi.is_zero() && r.is_zero());
    }

    #[test]
    fn pushforward_cancels_degree_k() {
        let a = diag12();
        let f = PolySeries::new(2, 2, 2)
            .with_linear(a.matrix().clone())
            .unwrap()
            .with_term(mono(2, 1, &[1, 1]))
            .unwrap();
        let (xi, _) = solve_homological(&a, &f.term(2)).unwrap();
        let g = pushforward_ode(&f, &xi, 2).unwrap();
        assert!(g.term(2).is_zero());
        assert_eq!(g.linear(), a.matrix());
        assert_eq!(pushforward_ode(&f, &HomPolyMap::zero(2, 2, 2), 2).unwrap(), f);
    }

    #[test]
    fn pushforward_of_linear_field_is_minus_lie_derivative() {
        let a = LinearPart::new(Matrix::from_i64(&[&[0, 1], &[-1, 0]])).unwrap();
        let f = PolySeries::new(2, 2, 5).with_linear(a.matrix().clone()).unwrap();
        let xi = mono(2, 0, &[1, 1]).add(&mono(2, 1, &[0, 2])).unwrap();
        let g = pushforward_ode(&f, &xi, 5).unwrap();
        assert_eq!(g.term(2), lie_derivative(&a, &xi).unwrap().scale(&int(-1)));
    }

    #[test]
    fn normalize_resonant_example() {
        let a = diag12();
        let f = PolySeries::new(2, 2, 2)
            .with_term(mono(2, 1, &[2, 0]).add(&mono(2, 1, &[1, 1])).unwrap())
            .unwrap();
        let report = normalize_ode(&a, &f, 2, None).unwrap();
        assert_eq!(report.normal_form.term(2), mono(2, 1, &[2, 0]));
        assert!(report.kernel_ok() && report.conjugacy_ok());
        assert_eq!(report.equivariance_ok(), None);
    }

    #[test]
    fn normalize_zero_field() {
        let report = normalize_ode(&diag12(), &PolySeries::new(2, 2, 4), 4, None).unwrap();
        assert!(report.normal_form.is_nonlinear_zero());
        assert!(report.log.is_empty());
        assert!(report.conjugacy_ok());
    }

    #[test]
    fn degenerate_order_returns_linear_system() {
        let f = PolySeries::new(2, 2, 3).with_term(mono(2, 0, &[0, 2])).unwrap();
        let report = normalize_ode(&diag12(), &f, 1, None).unwrap();
        assert!(report.log.is_empty());
        assert!(report.normal_form.is_nonlinear_zero());
        assert_eq!(report.normal_form.linear(), diag12().matrix());
    }

    #[test]
    fn invalid_split_rejected() {
        let tb = LinearPart::new(Matrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        let zero = LinearPart::new(Matrix::zeros(2, 2)).unwrap();
        let err = normalize_ode(&tb, &PolySeries::new(2, 2, 2), 2, Some((&tb, &zero))).unwrap_err();
        assert!(matches!(err, Error::InvalidSplit(_)));
    }

    #[test]
    fn tampering_detected() {
        let a = LinearPart::new(Matrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        let f = PolySeries::new(2, 2, 3).with_term(mono(2, 0, &[0, 2])).unwrap();
        let report = normalize_ode(&a, &f, 3, None).unwrap();
        let mut g = report.normal_form.clone();
        let bumped = g.term(3).add(&mono(2, 0, &[3, 0])).unwrap();
        g.set_term(bumped).unwrap();
        let original = f.with_linear(a.matrix().clone()).unwrap();
        let check = verify_conjugacy(&original, &report.log, &g, 3).unwrap();
        assert_eq!(check.failing_degrees(), vec![3]);
    }

    #[test]
    fn empty_log_identity() {
        let a = diag12();
        let f = PolySeries::new(2, 2, 3)
            .with_linear(a.matrix().clone())
            .unwrap()
            .with_term(mono(2, 0, &[1, 2]))
            .unwrap();
        assert!(verify_conjugacy(&f, &TransformationLog::default(), &f, 3).unwrap().ok());
    }
}
