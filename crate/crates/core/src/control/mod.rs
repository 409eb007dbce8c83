//! Normal forms of control systems `x' = Ax + Bu + f(x, u)` under skew
//! coordinate-and-feedback changes `x = y + p_x(y)`, `u = v + p_u(y, v)`.

mod integrals;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::homological::{lie_operator, tabulate, BasisDescriptor, LinearPart, OperatorMatrix};
use crate::linalg::Matrix;
use crate::ode::{project_coords, ConjugacyReport, DimensionRecord};
use crate::polyalg::flow::{conjugacy_residual, pullback};
use crate::polyalg::{HomPolyMap, PolyMap, PolySeries, Rational, VfBasis};

pub use integrals::{
    brunovsky_first_integrals, brunovsky_pair, characteristic_field, uncontrollable_example,
    uncontrollable_first_integrals_example, FirstIntegral,
};

/// The pair `(A, B)`; `A` is `n x n`, `B` is `n x m` (`m = 0` allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlLinearPart {
    a: Matrix,
    b: Matrix,
}

impl ControlLinearPart {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::shape(format!("A must be square and nonempty, got {}x{}", a.rows(), a.cols())));
        }
        if b.rows() != a.rows() {
            return Err(Error::shape(format!("B has {} rows, A has {}", b.rows(), a.rows())));
        }
        Ok(ControlLinearPart { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.b.cols()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn state_part(&self) -> LinearPart {
        LinearPart::new(self.a.clone()).expect("validated at construction")
    }

    /// `(A B)`, `n x (n + m)`.
    pub fn script_a(&self) -> Matrix {
        let (n, m) = (self.n(), self.m());
        let mut out = Matrix::zeros(n, n + m);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.a[(i, j)].clone();
            }
            for j in 0..m {
                out[(i, n + j)] = self.b[(i, j)].clone();
            }
        }
        out
    }

    /// `[[A, B], [0, 0]]`, `(n + m) x (n + m)`.
    pub fn augmented(&self) -> Matrix {
        let (n, m) = (self.n(), self.m());
        let top = self.script_a();
        let mut out = Matrix::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..n + m {
                out[(i, j)] = top[(i, j)].clone();
            }
        }
        out
    }
}

/// Homogeneous skew generator: `p_x` on the state variables, `p_u` on all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewGenerator {
    degree: u32,
    p_x: HomPolyMap,
    p_u: HomPolyMap,
}

impl SkewGenerator {
    pub fn new(p_x: HomPolyMap, p_u: HomPolyMap) -> Result<Self> {
        let n = p_x.dim_in();
        if p_x.dim_out() != n {
            return Err(Error::shape("p_x must map the n state variables to R^n"));
        }
        if p_u.dim_in() != n + p_u.dim_out() {
            return Err(Error::shape(format!(
                "p_u maps {} variables to R^{}, expected {} variables",
                p_u.dim_in(),
                p_u.dim_out(),
                n + p_u.dim_out()
            )));
        }
        if p_x.degree() != p_u.degree() {
            return Err(Error::shape("p_x and p_u degrees differ"));
        }
        Ok(SkewGenerator {
            degree: p_x.degree(),
            p_x,
            p_u,
        })
    }

    pub fn zero(n: usize, m: usize, degree: u32) -> Self {
        SkewGenerator {
            degree,
            p_x: HomPolyMap::zero(n, n, degree),
            p_u: HomPolyMap::zero(n + m, m, degree),
        }
    }

    /// Splits a field on `n + m` variables; fails if its state part involves a control.
    pub fn from_embedded(f: &HomPolyMap, n: usize) -> Result<Self> {
        let d = f.dim_in();
        if f.dim_out() != d || n > d {
            return Err(Error::shape("embedded generator must be square with n <= dim"));
        }
        let state = f.project(n);
        let p_x_polys = state
            .components()
            .iter()
            .map(|c| {
                c.poly()
                    .restrict_vars(n)
                    .ok_or_else(|| Error::shape("state part of a skew generator depends on a control"))
            })
            .collect::<Result<Vec<_>>>()?;
        let p_x = HomPolyMap::from_polys(f.degree(), p_x_polys)?;
        let p_u = HomPolyMap::new(f.components()[n..].to_vec())
            .unwrap_or_else(|_| HomPolyMap::zero(d, 0, f.degree()));
        SkewGenerator::new(p_x, p_u)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.p_x.dim_in()
    }

    pub fn m(&self) -> usize {
        self.p_u.dim_out()
    }

    pub fn p_x(&self) -> &HomPolyMap {
        &self.p_x
    }

    pub fn p_u(&self) -> &HomPolyMap {
        &self.p_u
    }

    pub fn is_zero(&self) -> bool {
        self.p_x.is_zero() && self.p_u.is_zero()
    }

    /// `(p_x, p_u)` as one field on `n + m` variables.
    pub fn embed(&self) -> HomPolyMap {
        let mut comps = self.p_x.extend_vars(self.m()).components().to_vec();
        comps.extend(self.p_u.components().iter().cloned());
        HomPolyMap::new(comps).unwrap_or_else(|_| HomPolyMap::zero(self.n() + self.m(), 0, self.degree))
    }
}

fn skew_bases(n: usize, m: usize, k: u32) -> (VfBasis, VfBasis) {
    (VfBasis::new(n, n, k), VfBasis::new(n + m, m, k))
}

/// Basis of `S^k`: the `p_x` block, then the `p_u` block.
pub fn skew_basis(n: usize, m: usize, k: u32) -> Vec<SkewGenerator> {
    let (bx, bu) = skew_bases(n, m, k);
    let x_block = bx.elements().into_iter().map(|p_x| SkewGenerator {
        degree: k,
        p_x,
        p_u: HomPolyMap::zero(n + m, m, k),
    });
    let u_block = bu.elements().into_iter().map(|p_u| SkewGenerator {
        degree: k,
        p_x: HomPolyMap::zero(n, n, k),
        p_u,
    });
    x_block.chain(u_block).collect()
}

/// Coordinates of `p` in the [`skew_basis`] order.
pub fn skew_coords(p: &SkewGenerator) -> Result<Vec<Rational>> {
    let (bx, bu) = skew_bases(p.n(), p.m(), p.degree);
    let mut c = bx.coords(&p.p_x)?;
    c.extend(bu.coords(&p.p_u)?);
    Ok(c)
}

fn skew_from_coords(n: usize, m: usize, k: u32, c: &[Rational]) -> SkewGenerator {
    let (bx, bu) = skew_bases(n, m, k);
    SkewGenerator {
        degree: k,
        p_x: bx.from_coords(&c[..bx.len()]),
        p_u: bu.from_coords(&c[bx.len()..]),
    }
}

fn skew_weights(n: usize, m: usize, k: u32) -> Vec<Rational> {
    let (bx, bu) = skew_bases(n, m, k);
    let mut w = bx.gram_weights();
    w.extend(bu.gram_weights());
    w
}

fn check_generator(lin: &ControlLinearPart, p: &SkewGenerator) -> Result<()> {
    if p.n() != lin.n() || p.m() != lin.m() {
        return Err(Error::shape(format!(
            "generator for (n, m) = ({}, {}) used with ({}, {})",
            p.n(),
            p.m(),
            lin.n(),
            lin.m()
        )));
    }
    Ok(())
}

/// `L_A p_x + Dp_x * Bu - B p_u`, a map from `n + m` variables to `R^n`.
pub fn control_homological(lin: &ControlLinearPart, p: &SkewGenerator) -> Result<HomPolyMap> {
    check_generator(lin, p)?;
    let px = p.p_x.extend_vars(lin.m());
    let state = lie_operator(&lin.augmented(), &lin.a, &px)?;
    if lin.m() == 0 {
        return Ok(state);
    }
    state.sub(&p.p_u.left_mul(&lin.b))
}

fn image_descriptor(lin: &ControlLinearPart, k: u32) -> BasisDescriptor {
    BasisDescriptor::VectorField {
        dim_in: lin.n() + lin.m(),
        dim_out: lin.n(),
        degree: k,
    }
}

/// Matrix of the control homological operator from `S^k` to `H^k_{n+m,n}`.
pub fn control_homological_matrix(lin: &ControlLinearPart, k: u32) -> Result<OperatorMatrix> {
    let (n, m) = (lin.n(), lin.m());
    let codomain = VfBasis::new(n + m, n, k);
    let columns = skew_basis(n, m, k)
        .iter()
        .map(|p| codomain.coords(&control_homological(lin, p)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorMatrix {
        matrix: Matrix::from_columns(codomain.len(), &columns),
        domain: BasisDescriptor::Skew { n, m, degree: k },
        codomain: image_descriptor(lin, k),
    })
}

/// Matrix of `L_{A0}` on `H^k_{n+m,n+m}` with `A0 = [[A, B], [0, 0]]`.
///
/// Checked at construction: on every skew basis element the first `n`
/// components of the image reproduce [`control_homological`]. The remaining
/// `m` components are `Dp_u * A0 x` and are generally nonzero.
pub fn augmented_matrix_operator(lin: &ControlLinearPart, k: u32) -> Result<OperatorMatrix> {
    let d = lin.n() + lin.m();
    let a0 = lin.augmented();
    let basis = VfBasis::new(d, d, k);
    let matrix = tabulate(&basis, &basis, |f| lie_operator(&a0, &a0, f))?;
    for p in skew_basis(lin.n(), lin.m(), k) {
        let image = basis.from_coords(&matrix.mul_vec(&basis.coords(&p.embed())?));
        if image.project(lin.n()) != control_homological(lin, &p)? {
            return Err(Error::Verification(format!(
                "augmented operator disagrees with the control operator at degree {k}"
            )));
        }
    }
    let descriptor = BasisDescriptor::VectorField {
        dim_in: d,
        dim_out: d,
        degree: k,
    };
    Ok(OperatorMatrix {
        matrix,
        domain: descriptor.clone(),
        codomain: descriptor,
    })
}

/// `Df * A^T x - A^T f` on maps from `n + m` variables to `R^n`, where the
/// field `A^T x` has the state block `A^T x` and the control block `B^T x`.
pub fn hat_operator(lin: &ControlLinearPart, f: &HomPolyMap) -> Result<HomPolyMap> {
    let d = lin.n() + lin.m();
    if f.dim_in() != d || f.dim_out() != lin.n() {
        return Err(Error::shape(format!(
            "expected a map from {d} variables to R^{}, got {}->{}",
            lin.n(),
            f.dim_in(),
            f.dim_out()
        )));
    }
    lie_operator(&lin.augmented().transpose(), &lin.a.transpose(), f)
}

/// [`hat_operator`] with the controls set to zero. Vanishes on normal-form terms.
pub fn theorem1_residual(lin: &ControlLinearPart, fk: &HomPolyMap) -> Result<HomPolyMap> {
    Ok(hat_operator(lin, fk)?.zero_from(lin.n()))
}

/// Basis of `ker` [`hat_operator`] on `H^k_{n+m,n}`: the polynomial solutions
/// of the characteristic PDE, whose components are built from first integrals.
pub fn control_complement(lin: &ControlLinearPart, k: u32) -> Result<Vec<HomPolyMap>> {
    let basis = VfBasis::new(lin.n() + lin.m(), lin.n(), k);
    let m = tabulate(&basis, &basis, |f| hat_operator(lin, f))?;
    Ok(m.kernel().iter().map(|v| basis.from_coords(v)).collect())
}

/// Orthogonal complement of the range of the control operator in
/// `H^k_{n+m,n}`. Its dimension plus the operator rank is `dim H^k_{n+m,n}`.
pub fn range_complement(lin: &ControlLinearPart, k: u32) -> Result<Vec<HomPolyMap>> {
    let m = control_homological_matrix(lin, k)?;
    let basis = VfBasis::new(lin.n() + lin.m(), lin.n(), k);
    Ok(range_complement_coords(&m.matrix, &basis.gram_weights())
        .iter()
        .map(|v| basis.from_coords(v))
        .collect())
}

fn range_complement_coords(m: &Matrix, w: &[Rational]) -> Vec<Vec<Rational>> {
    // q is orthogonal to every column of M iff (M^T W) q = 0
    m.transpose().mul(&Matrix::diagonal(w)).kernel()
}

/// Alternative complement: `q` in `H^k_{n+m,n+m}` whose image under
/// `L_{A0^T}` has no control-free monomials, cut down to the first `n`
/// components. Kept as a diagnostic; it is larger than [`range_complement`].
pub fn augmented_complement(lin: &ControlLinearPart, k: u32) -> Result<Vec<HomPolyMap>> {
    let (n, d) = (lin.n(), lin.n() + lin.m());
    let a0t = lin.augmented().transpose();
    let basis = VfBasis::new(d, d, k);
    let full = tabulate(&basis, &basis, |f| lie_operator(&a0t, &a0t, f))?;
    let rows: Vec<usize> = (0..basis.len())
        .filter(|&i| basis.label(i).1.exponents()[n..].iter().all(|&e| e == 0))
        .collect();
    let target = VfBasis::new(d, n, k);
    let projected: Vec<Vec<Rational>> = full
        .select_rows(&rows)
        .kernel()
        .iter()
        .map(|v| target.coords(&basis.from_coords(v).project(n)))
        .collect::<Result<_>>()?;
    if projected.is_empty() {
        return Ok(Vec::new());
    }
    let span = Matrix::from_columns(target.len(), &projected);
    Ok(span
        .rref()
        .pivots
        .iter()
        .map(|&j| target.from_coords(&span.column(j)))
        .collect())
}

/// Precomputed splitting for one degree of the control normalization.
#[derive(Clone, Debug)]
pub struct ControlSolver {
    n: usize,
    m: usize,
    degree: u32,
    basis: VfBasis,
    weights: Vec<Rational>,
    skew_weights: Vec<Rational>,
    matrix: Matrix,
    kernel: Vec<Vec<Rational>>,
    complement: Vec<Vec<Rational>>,
}

impl ControlSolver {
    pub fn new(lin: &ControlLinearPart, k: u32) -> Result<Self> {
        let (n, m) = (lin.n(), lin.m());
        let matrix = control_homological_matrix(lin, k)?.matrix;
        let basis = VfBasis::new(n + m, n, k);
        let weights = basis.gram_weights();
        let complement = range_complement_coords(&matrix, &weights);
        if complement.len() + matrix.rank() != basis.len() {
            return Err(Error::Verification(format!("rank-nullity fails at degree {k}")));
        }
        Ok(ControlSolver {
            n,
            m,
            degree: k,
            skew_weights: skew_weights(n, m, k),
            kernel: matrix.kernel(),
            complement,
            weights,
            matrix,
            basis,
        })
    }

    pub fn dimensions(&self) -> DimensionRecord {
        DimensionRecord {
            space: self.basis.len(),
            range: self.basis.len() - self.complement.len(),
            complement: self.complement.len(),
        }
    }

    /// Returns `(p, r)` with `fk = L p + r`, `r` orthogonal to the range and
    /// `p` the minimal-norm preimage in `S^k`.
    pub fn solve(&self, fk: &HomPolyMap) -> Result<(SkewGenerator, HomPolyMap)> {
        let c = self.basis.coords(fk)?;
        let r = project_coords(&self.weights, &c, &self.complement)?;
        let removable: Vec<Rational> = c.iter().zip(&r).map(|(a, b)| a - b).collect();
        let particular = self.matrix.solve(&removable).ok_or_else(|| {
            Error::Verification(format!("degree {} remainder not in the range", self.degree))
        })?;
        let drift = project_coords(&self.skew_weights, &particular, &self.kernel)?;
        let p: Vec<Rational> = particular.iter().zip(&drift).map(|(a, b)| a - b).collect();
        Ok((
            skew_from_coords(self.n, self.m, self.degree, &p),
            self.basis.from_coords(&r),
        ))
    }
}

/// `x' = Ax + Bu + f(x, u)` with `f` of degrees `2..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlSystem {
    pub lin: ControlLinearPart,
    /// Map from `n + m` variables to `R^n`; its linear part is ignored.
    pub nonlinear: PolySeries,
}

impl ControlSystem {
    pub fn new(lin: ControlLinearPart, nonlinear: PolySeries) -> Result<Self> {
        if nonlinear.dim_in() != lin.n() + lin.m() || nonlinear.dim_out() != lin.n() {
            return Err(Error::shape(format!(
                "nonlinear part {}->{} for (n, m) = ({}, {})",
                nonlinear.dim_in(),
                nonlinear.dim_out(),
                lin.n(),
                lin.m()
            )));
        }
        let d = nonlinear.dim_in();
        let nonlinear = nonlinear.with_linear(Matrix::zeros(lin.n(), d))?;
        Ok(ControlSystem { lin, nonlinear })
    }

    pub fn linear_only(lin: ControlLinearPart, max_degree: u32) -> Self {
        let nonlinear = PolySeries::new(lin.n() + lin.m(), lin.n(), max_degree);
        ControlSystem { lin, nonlinear }
    }

    pub fn max_degree(&self) -> u32 {
        self.nonlinear.max_degree()
    }

    pub fn term(&self, k: u32) -> HomPolyMap {
        self.nonlinear.term(k)
    }

    /// The whole right-hand side `(A B) x~ + f(x~)`.
    pub fn full(&self) -> PolySeries {
        self.nonlinear
            .clone()
            .with_linear(self.lin.script_a())
            .expect("shape checked at construction")
    }

    fn from_full(lin: ControlLinearPart, full: PolySeries) -> Result<Self> {
        if full.linear() != &lin.script_a() {
            return Err(Error::Verification("linear part changed under a skew transformation".into()));
        }
        ControlSystem::new(lin, full)
    }
}

/// Transforms `sys` by the time-one flow of the skew field `p`.
pub fn pushforward_control(sys: &ControlSystem, p: &SkewGenerator, max_degree: u32) -> Result<ControlSystem> {
    check_generator(&sys.lin, p)?;
    if p.degree < 2 {
        return Err(Error::shape("generator degree must be at least 2"));
    }
    let g = pullback(
        &sys.full().to_poly_map(),
        &p.embed().to_poly_map(),
        sys.lin.n(),
        max_degree,
    );
    ControlSystem::from_full(sys.lin.clone(), PolySeries::from_poly_map(&g, max_degree)?)
}

/// Checks `D psi_x(y) g(y, v) = f(psi(y, v))` degree by degree, with `psi`
/// the composition of the logged skew flows in ascending degree.
pub fn verify_control_conjugacy(
    f: &ControlSystem,
    log: &BTreeMap<u32, SkewGenerator>,
    g: &ControlSystem,
    max_degree: u32,
) -> Result<ConjugacyReport> {
    if f.lin != g.lin {
        return Err(Error::shape("systems have different linear parts"));
    }
    for p in log.values() {
        check_generator(&f.lin, p)?;
    }
    let gens: Vec<PolyMap> = log.values().map(|p| p.embed().to_poly_map()).collect();
    let residual = conjugacy_residual(
        &f.full().to_poly_map(),
        &gens,
        &g.full().to_poly_map(),
        f.lin.n(),
        max_degree,
    );
    Ok(ConjugacyReport {
        residuals: (1..=max_degree)
            .map(|k| (k, residual.homogeneous_part(k)))
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlDegreeCertificate {
    pub degree: u32,
    pub theorem1_residual: HomPolyMap,
    pub conjugacy_residual: HomPolyMap,
}

#[derive(Clone, Debug)]
pub struct ControlNormalFormReport {
    pub normal_form: ControlSystem,
    pub log: BTreeMap<u32, SkewGenerator>,
    pub certificates: Vec<ControlDegreeCertificate>,
    pub dimensions: BTreeMap<u32, DimensionRecord>,
}

impl ControlNormalFormReport {
    pub fn kernel_ok(&self) -> bool {
        self.certificates.iter().all(|c| c.theorem1_residual.is_zero())
    }

    pub fn conjugacy_ok(&self) -> bool {
        self.certificates.iter().all(|c| c.conjugacy_residual.is_zero())
    }
}

/// Normal form of a control system through degree `max_degree`: each
/// `f^[k]` is reduced to its component orthogonal to the range of the control
/// operator by the minimal-norm skew generator.
pub fn normalize_control(sys: &ControlSystem, max_degree: u32) -> Result<ControlNormalFormReport> {
    let original = ControlSystem::new(sys.lin.clone(), sys.nonlinear.retruncate(max_degree))?;
    let mut current = original.clone();
    let mut log = BTreeMap::new();
    let mut dimensions = BTreeMap::new();
    for k in 2..=max_degree {
        let solver = ControlSolver::new(&sys.lin, k)?;
        dimensions.insert(k, solver.dimensions());
        let (p, r) = solver.solve(&current.term(k))?;
        if p.is_zero() {
            continue;
        }
        current = pushforward_control(&current, &p, max_degree)?;
        if current.term(k) != r {
            return Err(Error::Verification(format!(
                "degree {k} term after transformation is not the complement residual"
            )));
        }
        log.insert(k, p);
    }
    let conjugacy = verify_control_conjugacy(&original, &log, &current, max_degree)?;
    let certificates = (2..=max_degree)
        .map(|k| {
            Ok(ControlDegreeCertificate {
                degree: k,
                theorem1_residual: theorem1_residual(&sys.lin, &current.term(k))?,
                conjugacy_residual: conjugacy.residuals[&k].clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if !conjugacy.residuals.get(&1).map_or(true, HomPolyMap::is_zero) {
        return Err(Error::Verification("linear part changed under normalization".into()));
    }
    Ok(ControlNormalFormReport {
        normal_form: current,
        log,
        certificates,
        dimensions,
    })
}

#[cfg(test)]
mod tests;
