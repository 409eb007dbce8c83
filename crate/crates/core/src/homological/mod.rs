//! Homological (Lie-derivative) operators as exact matrices on graded bases.
//!
//! For a linear part `A`, the operator `L_A f = Df * Ax - A f` maps the space
//! `H^k` of degree-`k` vector fields into itself. Its range `R^k` and the
//! kernel of the adjoint `L_{A^T}` give the orthogonal splitting
//! `H^k = R^k + C^k` under the weighted monomial inner product.

mod jordan;

pub use jordan::{jordan_split, validate_split, SplitReport};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::innerprod::inner_product;
use crate::linalg::Matrix;
use crate::polyalg::{monomial_basis, HomPolyMap, Rational, VfBasis};

/// Linear part `A` of a vector field at the equilibrium. Any rational square
/// matrix is accepted; Jordan form is only needed by [`jordan_split`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearPart {
    a: Matrix,
}

impl LinearPart {
    pub fn new(a: Matrix) -> Result<Self> {
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::shape(format!(
                "linear part must be a nonempty square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        Ok(LinearPart { a })
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        LinearPart {
            a: Matrix::diagonal(entries),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    /// The adjoint with respect to the standard inner product, i.e. `A^T`.
    pub fn adjoint(&self) -> LinearPart {
        LinearPart {
            a: self.a.transpose(),
        }
    }
}

/// Which ordered basis the rows or columns of an [`OperatorMatrix`] refer to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisDescriptor {
    /// `x^l e_j` maps from `dim_in` to `dim_out` dimensions, component-major.
    VectorField {
        dim_in: usize,
        dim_out: usize,
        degree: u32,
    },
    /// Skew generators: the state block (maps of the `n` state variables into
    /// `R^n`) followed by the feedback block (maps of all `n + m` variables
    /// into `R^m`).
    Skew { n: usize, m: usize, degree: u32 },
}

impl BasisDescriptor {
    pub fn len(&self) -> usize {
        match *self {
            BasisDescriptor::VectorField {
                dim_in,
                dim_out,
                degree,
            } => VfBasis::new(dim_in, dim_out, degree).len(),
            BasisDescriptor::Skew { n, m, degree } => {
                VfBasis::new(n, n, degree).len() + VfBasis::new(n + m, m, degree).len()
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Decodes a coordinate vector. Skew coordinates decode to the embedded
    /// field `(p_x, p_u)` on `n + m` variables.
    pub fn decode(&self, coords: &[Rational]) -> HomPolyMap {
        match *self {
            BasisDescriptor::VectorField {
                dim_in,
                dim_out,
                degree,
            } => VfBasis::new(dim_in, dim_out, degree).from_coords(coords),
            BasisDescriptor::Skew { n, m, degree } => {
                let bx = VfBasis::new(n, n, degree);
                let bu = VfBasis::new(n + m, m, degree);
                let px = bx.from_coords(&coords[..bx.len()]).extend_vars(m);
                let pu = bu.from_coords(&coords[bx.len()..]);
                let mut comps = px.components().to_vec();
                comps.extend(pu.components().iter().cloned());
                HomPolyMap::new(comps).expect("consistent skew blocks")
            }
        }
    }
}

/// Coordinate representation: entry `(i, j)` is the coefficient of codomain
/// basis element `i` in the image of domain basis element `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub matrix: Matrix,
    pub domain: BasisDescriptor,
    pub codomain: BasisDescriptor,
}

impl OperatorMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

/// Range/complement splitting of `H^k` for a linear part.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub degree: u32,
    pub range_basis: Vec<HomPolyMap>,
    pub complement_basis: Vec<HomPolyMap>,
    /// `preimage_map[i]` is mapped by `L_A` onto `range_basis[i]`.
    pub preimage_map: Vec<HomPolyMap>,
}

impl Splitting {
    pub fn space_dim(&self) -> usize {
        self.range_basis.len() + self.complement_basis.len()
    }
}

/// `Df * (field x) - out * f` for constant matrices `field` (on the input
/// space) and `out` (on the output space). Every linear homological operator
/// in this crate is an instance.
pub fn lie_operator(field: &Matrix, out: &Matrix, f: &HomPolyMap) -> Result<HomPolyMap> {
    if field.rows() != f.dim_in() || !field.is_square() {
        return Err(Error::shape(format!(
            "field matrix {}x{} on a map with {} inputs",
            field.rows(),
            field.cols(),
            f.dim_in()
        )));
    }
    if out.rows() != f.dim_out() || !out.is_square() {
        return Err(Error::shape(format!(
            "output matrix {}x{} on a map with {} outputs",
            out.rows(),
            out.cols(),
            f.dim_out()
        )));
    }
    f.along_linear_field(field).sub(&f.left_mul(out))
}

/// `(L_A f)(x) = Df(x) A x - A f(x)`.
pub fn lie_derivative(a: &LinearPart, f: &HomPolyMap) -> Result<HomPolyMap> {
    if f.dim_in() != a.dim() || f.dim_out() != a.dim() {
        return Err(Error::shape(format!(
            "Lie derivative of a {}->{} map by a {}x{} linear part",
            f.dim_in(),
            f.dim_out(),
            a.dim(),
            a.dim()
        )));
    }
    lie_operator(a.matrix(), a.matrix(), f)
}

/// Column-by-column matrix of a linear operator between two vector-field bases.
pub(crate) fn tabulate(
    domain: &VfBasis,
    codomain: &VfBasis,
    op: impl Fn(&HomPolyMap) -> Result<HomPolyMap>,
) -> Result<Matrix> {
    let columns = (0..domain.len())
        .map(|j| codomain.coords(&op(&domain.element(j))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(codomain.len(), &columns))
}

fn vf_descriptor(n: usize, k: u32) -> BasisDescriptor {
    BasisDescriptor::VectorField {
        dim_in: n,
        dim_out: n,
        degree: k,
    }
}

/// Matrix of `L_A` on `H^k` in the canonical basis order.
pub fn homological_matrix(a: &LinearPart, k: u32) -> Result<OperatorMatrix> {
    let basis = VfBasis::new(a.dim(), a.dim(), k);
    let matrix = tabulate(&basis, &basis, |f| lie_derivative(a, f))?;
    Ok(OperatorMatrix {
        matrix,
        domain: vf_descriptor(a.dim(), k),
        codomain: vf_descriptor(a.dim(), k),
    })
}

/// `W^{-1} M^T W` for a diagonal Gram matrix `W` (the same weights on both sides).
pub(crate) fn gram_conjugate_transpose(m: &Matrix, w_dom: &[Rational], w_cod: &[Rational]) -> Matrix {
    // adjoint maps codomain -> domain: entry (j, i) = M(i, j) * w_cod[i] / w_dom[j]
    let mut t = Matrix::zeros(m.cols(), m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = &m[(i, j)];
            if !v.is_zero() {
                t[(j, i)] = v * &w_cod[i] / &w_dom[j];
            }
        }
    }
    t
}

/// Matrix of the adjoint of `L_A` under the weighted inner product.
///
/// Computed twice, as `L_{A^T}` and as the Gram-conjugated transpose of
/// `L_A`; disagreement is reported as [`Error::Verification`].
pub fn adjoint_matrix(a: &LinearPart, k: u32) -> Result<OperatorMatrix> {
    let direct = homological_matrix(&a.adjoint(), k)?;
    let m = homological_matrix(a, k)?;
    let w = VfBasis::new(a.dim(), a.dim(), k).gram_weights();
    let conjugated = gram_conjugate_transpose(&m.matrix, &w, &w);
    if conjugated != direct.matrix {
        return Err(Error::Verification(format!(
            "adjoint of L_A at degree {k} disagrees with L_(A^T)"
        )));
    }
    Ok(direct)
}

/// Null-space basis of an operator matrix, decoded through its domain basis.
pub fn kernel_basis(m: &OperatorMatrix) -> Vec<HomPolyMap> {
    m.matrix
        .kernel()
        .iter()
        .map(|v| m.domain.decode(v))
        .collect()
}

/// The splitting `H^k = R^k + C^k` with `C^k = ker L_{A^T}`, verified exactly.
pub fn split(a: &LinearPart, k: u32) -> Result<Splitting> {
    let basis = VfBasis::new(a.dim(), a.dim(), k);
    let m = homological_matrix(a, k)?;
    let adj = adjoint_matrix(a, k)?;
    let complement_basis = kernel_basis(&adj);
    let pivots = m.matrix.rref().pivots;
    let range_basis: Vec<HomPolyMap> = pivots
        .iter()
        .map(|&j| basis.from_coords(&m.matrix.column(j)))
        .collect();
    let preimage_map: Vec<HomPolyMap> = pivots.iter().map(|&j| basis.element(j)).collect();

    let splitting = Splitting {
        degree: k,
        range_basis,
        complement_basis,
        preimage_map,
    };
    verify_splitting(a, &splitting, basis.len())?;
    Ok(splitting)
}

fn verify_splitting(a: &LinearPart, s: &Splitting, dim: usize) -> Result<()> {
    if s.space_dim() != dim {
        return Err(Error::Verification(format!(
            "rank {} + nullity {} != dim H^{} = {dim}",
            s.range_basis.len(),
            s.complement_basis.len(),
            s.degree
        )));
    }
    let adjoint = a.adjoint();
    for q in &s.complement_basis {
        if !lie_derivative(&adjoint, q)?.is_zero() {
            return Err(Error::Verification("complement element outside ker L_(A^T)".into()));
        }
        for r in &s.range_basis {
            if !inner_product(r, q)?.is_zero() {
                return Err(Error::Verification("range and complement not orthogonal".into()));
            }
        }
    }
    for (p, r) in s.preimage_map.iter().zip(&s.range_basis) {
        if lie_derivative(a, p)? != *r {
            return Err(Error::Verification("preimage does not map onto range vector".into()));
        }
    }
    Ok(())
}

/// Monomial fields `x^l e_j` with `<l, lambda> = lambda_j` and `|l| = k`: the
/// resonant terms for a diagonal linear part with eigenvalues `lambda`.
pub fn resonant_kernel_basis(lambda: &[Rational], k: u32) -> Vec<HomPolyMap> {
    let n = lambda.len();
    let monomials = monomial_basis(n, k);
    let mut out = Vec::new();
    for (j, lj) in lambda.iter().enumerate() {
        for m in &monomials {
            let pairing = m
                .exponents()
                .iter()
                .zip(lambda)
                .fold(Rational::zero(), |acc, (&e, l)| acc + Rational::from_integer(e.into()) * l);
            if &pairing == lj {
                out.push(HomPolyMap::monomial(n, j, m.clone(), Rational::from_integer(1.into())));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::same_span;
    use crate::polyalg::{int, MultiIndex};

    fn mono(n: usize, j: usize, e: &[u32]) -> HomPolyMap {
        HomPolyMap::monomial(n, j, MultiIndex::new(e.to_vec()), int(1))
    }

    fn coords(maps: &[HomPolyMap], n: usize, k: u32) -> Vec<Vec<Rational>> {
        let b = VfBasis::new(n, n, k);
        maps.iter().map(|m| b.coords(m).unwrap()).collect()
    }

    fn diag(l: &[i64]) -> LinearPart {
        LinearPart::diagonal(&l.iter().map(|&v| int(v)).collect::<Vec<_>>())
    }

    #[test]
    fn lie_derivative_examples() {
        let a = diag(&[1, 2]);
        assert!(lie_derivative(&a, &mono(2, 1, &[2, 0])).unwrap().is_zero());

        let id = LinearPart::new(Matrix::identity(2)).unwrap();
        let f = mono(2, 0, &[1, 2]).add(&mono(2, 1, &[3, 0]).scale(&int(-4))).unwrap();
        assert_eq!(lie_derivative(&id, &f).unwrap(), f.scale(&int(2)));

        let zero = LinearPart::new(Matrix::zeros(2, 2)).unwrap();
        assert!(lie_derivative(&zero, &f).unwrap().is_zero());

        assert!(lie_derivative(&a, &HomPolyMap::zero(3, 2, 2)).is_err());
    }

    #[test]
    fn homological_matrix_diagonal_eigenvalues() {
        let a = diag(&[1, 2]);
        let m = homological_matrix(&a, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 6));
        let basis = VfBasis::new(2, 2, 2);
        for i in 0..6 {
            let (j, l) = basis.label(i);
            let lambda = [1, 2];
            let expect = l.exponents()[0] as i64 * lambda[0] + l.exponents()[1] as i64 * lambda[1]
                - lambda[j];
            for c in 0..6 {
                let want = if c == i { int(expect) } else { int(0) };
                assert_eq!(m.matrix[(c, i)], want);
            }
        }
        let zero = LinearPart::new(Matrix::zeros(2, 2)).unwrap();
        assert!(homological_matrix(&zero, 3).unwrap().matrix.is_zero());
    }

    #[test]
    fn adjoint_examples() {
        let sym = LinearPart::new(Matrix::from_i64(&[&[1, 2], &[2, -1]])).unwrap();
        assert_eq!(
            adjoint_matrix(&sym, 2).unwrap().matrix,
            homological_matrix(&sym, 2).unwrap().matrix
        );
        let d = diag(&[1, 2]);
        assert_eq!(
            adjoint_matrix(&d, 2).unwrap().matrix,
            homological_matrix(&d, 2).unwrap().matrix
        );
        let tb = LinearPart::new(Matrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        let tbt = LinearPart::new(Matrix::from_i64(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(
            adjoint_matrix(&tb, 2).unwrap().matrix,
            homological_matrix(&tbt, 2).unwrap().matrix
        );
    }

    #[test]
    fn kernel_examples() {
        let zero = LinearPart::new(Matrix::zeros(2, 2)).unwrap();
        assert_eq!(kernel_basis(&homological_matrix(&zero, 2).unwrap()).len(), 6);
        let id = LinearPart::new(Matrix::identity(2)).unwrap();
        assert!(kernel_basis(&homological_matrix(&id, 2).unwrap()).is_empty());
        let k = kernel_basis(&adjoint_matrix(&diag(&[1, 2]), 2).unwrap());
        assert_eq!(k, vec![mono(2, 1, &[2, 0])]);
    }

    #[test]
    fn takens_bogdanov_split() {
        let tb = LinearPart::new(Matrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        let s = split(&tb, 2).unwrap();
        assert_eq!(s.complement_basis.len(), 2);
        let expected = vec![
            mono(2, 1, &[2, 0]),
            mono(2, 0, &[2, 0]).add(&mono(2, 1, &[1, 1])).unwrap(),
        ];
        assert!(same_span(6, &coords(&s.complement_basis, 2, 2), &coords(&expected, 2, 2)));
    }

    #[test]
    fn diagonal_and_center_splits() {
        let s = split(&diag(&[1, 2]), 2).unwrap();
        assert_eq!(s.complement_basis, vec![mono(2, 1, &[2, 0])]);
        assert_eq!(s.range_basis.len(), 5);

        let center = LinearPart::new(Matrix::from_i64(&[&[0, -1], &[1, 0]])).unwrap();
        let s = split(&center, 3).unwrap();
        assert_eq!(s.complement_basis.len(), 2);
        assert_eq!(s.range_basis.len(), 6);
    }

    #[test]
    fn resonance_examples() {
        assert_eq!(resonant_kernel_basis(&[int(1), int(2)], 2), vec![mono(2, 1, &[2, 0])]);
        assert!(resonant_kernel_basis(&[int(1), int(3)], 2).is_empty());
        assert_eq!(resonant_kernel_basis(&vec![int(0); 3], 2).len(), 18);
    }
}
