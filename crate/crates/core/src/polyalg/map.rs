use std::collections::HashMap;

use num_traits::Zero;

use super::monomial::{monomial_basis, MultiIndex};
use super::poly::{HomPoly, Poly};
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Homogeneous polynomial map of degree `k` from `dim_in` to `dim_out` dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPolyMap {
    degree: u32,
    dim_in: usize,
    components: Vec<HomPoly>,
}

impl HomPolyMap {
    pub fn zero(dim_in: usize, dim_out: usize, degree: u32) -> Self {
        HomPolyMap {
            degree,
            dim_in,
            components: vec![HomPoly::zero(dim_in, degree); dim_out],
        }
    }

    pub fn new(components: Vec<HomPoly>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::shape("a polynomial map needs at least one component"));
        };
        let (degree, dim_in) = (first.degree(), first.n_vars());
        if components
            .iter()
            .any(|c| c.degree() != degree || c.n_vars() != dim_in)
        {
            return Err(Error::shape("components disagree on degree or arity"));
        }
        Ok(HomPolyMap {
            degree,
            dim_in,
            components,
        })
    }

    /// Builds a map from loose polynomials, checking homogeneity.
    pub fn from_polys(degree: u32, components: Vec<Poly>) -> Result<Self> {
        let comps = components
            .into_iter()
            .map(|p| HomPoly::new(degree, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    /// `coeff * x^m * e_j`.
    pub fn monomial(dim_out: usize, component: usize, m: MultiIndex, coeff: Rational) -> Self {
        let mut out = HomPolyMap::zero(m.n_vars(), dim_out, m.degree());
        let degree = m.degree();
        out.components[component] = HomPoly::from_poly_unchecked(degree, Poly::monomial(m, coeff));
        out
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[HomPoly] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &HomPoly {
        &self.components[j]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(HomPoly::is_zero)
    }

    pub fn same_shape(&self, other: &HomPolyMap) -> bool {
        self.degree == other.degree
            && self.dim_in == other.dim_in
            && self.dim_out() == other.dim_out()
    }

    fn check_shape(&self, other: &HomPolyMap) -> Result<()> {
        if !self.same_shape(other) {
            return Err(Error::shape(format!(
                "maps of shape (deg {}, {}->{}) and (deg {}, {}->{})",
                self.degree,
                self.dim_in,
                self.dim_out(),
                other.degree,
                other.dim_in,
                other.dim_out()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HomPolyMap) -> Result<HomPolyMap> {
        self.check_shape(other)?;
        Ok(self.zip(other, Poly::add))
    }

    pub fn sub(&self, other: &HomPolyMap) -> Result<HomPolyMap> {
        self.check_shape(other)?;
        Ok(self.zip(other, Poly::sub))
    }

    fn zip(&self, other: &HomPolyMap, op: impl Fn(&Poly, &Poly) -> Poly) -> HomPolyMap {
        HomPolyMap {
            degree: self.degree,
            dim_in: self.dim_in,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| HomPoly::from_poly_unchecked(self.degree, op(a.poly(), b.poly())))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> HomPolyMap {
        HomPolyMap {
            degree: self.degree,
            dim_in: self.dim_in,
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// `M * f` for a constant `dim_out' x dim_out` matrix.
    pub fn left_mul(&self, m: &Matrix) -> HomPolyMap {
        assert_eq!(m.cols(), self.dim_out());
        let components = (0..m.rows())
            .map(|i| {
                let mut acc = Poly::zero(self.dim_in);
                for (j, c) in self.components.iter().enumerate() {
                    let a = &m[(i, j)];
                    if !a.is_zero() {
                        acc = acc.add(&c.poly().scale(a));
                    }
                }
                HomPoly::from_poly_unchecked(self.degree, acc)
            })
            .collect();
        HomPolyMap {
            degree: self.degree,
            dim_in: self.dim_in,
            components,
        }
    }

    /// `Df(x) * (M x)`: derivative of `f` along the linear field with matrix `M`.
    pub fn along_linear_field(&self, m: &Matrix) -> HomPolyMap {
        assert!(m.is_square() && m.rows() == self.dim_in);
        let field: Vec<Poly> = (0..m.rows()).map(|i| Poly::linear(m.row(i))).collect();
        HomPolyMap {
            degree: self.degree,
            dim_in: self.dim_in,
            components: self
                .components
                .iter()
                .map(|c| HomPoly::from_poly_unchecked(self.degree, c.poly().directional(&field, u32::MAX)))
                .collect(),
        }
    }

    /// Keeps the first `n` components.
    pub fn project(&self, n: usize) -> HomPolyMap {
        HomPolyMap {
            degree: self.degree,
            dim_in: self.dim_in,
            components: self.components[..n].to_vec(),
        }
    }

    /// Appends `extra` zero components.
    pub fn pad_components(&self, extra: usize) -> HomPolyMap {
        let mut components = self.components.clone();
        components.extend(std::iter::repeat(HomPoly::zero(self.dim_in, self.degree)).take(extra));
        HomPolyMap {
            degree: self.degree,
            dim_in: self.dim_in,
            components,
        }
    }

    /// Adds `extra` trailing input variables the map does not depend on.
    pub fn extend_vars(&self, extra: usize) -> HomPolyMap {
        HomPolyMap {
            degree: self.degree,
            dim_in: self.dim_in + extra,
            components: self.components.iter().map(|c| c.extend_vars(extra)).collect(),
        }
    }

    /// Sets every input variable from index `first` on to zero.
    pub fn zero_from(&self, first: usize) -> HomPolyMap {
        HomPolyMap {
            degree: self.degree,
            dim_in: self.dim_in,
            components: self
                .components
                .iter()
                .map(|c| HomPoly::from_poly_unchecked(self.degree, c.poly().zero_from(first)))
                .collect(),
        }
    }

    pub fn to_poly_map(&self) -> PolyMap {
        PolyMap::new(
            self.dim_in,
            self.components.iter().map(|c| c.poly().clone()).collect(),
        )
    }

    pub fn evaluate(&self, point: &[Rational]) -> Vec<Rational> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }
}

/// Inhomogeneous polynomial map, used for flows, compositions and series work.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    dim_in: usize,
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(dim_in: usize, components: Vec<Poly>) -> Self {
        assert!(components.iter().all(|c| c.n_vars() == dim_in));
        PolyMap { dim_in, components }
    }

    pub fn zero(dim_in: usize, dim_out: usize) -> Self {
        PolyMap {
            dim_in,
            components: vec![Poly::zero(dim_in); dim_out],
        }
    }

    pub fn identity(n: usize) -> Self {
        PolyMap {
            dim_in: n,
            components: (0..n).map(|i| Poly::var(n, i)).collect(),
        }
    }

    /// The linear map `x -> M x`.
    pub fn linear(m: &Matrix) -> Self {
        PolyMap {
            dim_in: m.cols(),
            components: (0..m.rows()).map(|i| Poly::linear(m.row(i))).collect(),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &PolyMap) -> PolyMap {
        assert_eq!(self.dim_out(), other.dim_out());
        PolyMap::new(
            self.dim_in,
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &PolyMap) -> PolyMap {
        assert_eq!(self.dim_out(), other.dim_out());
        PolyMap::new(
            self.dim_in,
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> PolyMap {
        PolyMap::new(self.dim_in, self.components.iter().map(|c| c.scale(s)).collect())
    }

    pub fn truncate(&self, max_degree: u32) -> PolyMap {
        PolyMap::new(
            self.dim_in,
            self.components.iter().map(|c| c.truncate(max_degree)).collect(),
        )
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Poly::min_degree).min()
    }

    pub fn homogeneous_part(&self, degree: u32) -> HomPolyMap {
        HomPolyMap {
            degree,
            dim_in: self.dim_in,
            components: self
                .components
                .iter()
                .map(|c| HomPoly::from_poly_unchecked(degree, c.homogeneous_part(degree)))
                .collect(),
        }
    }

    /// `Dh * field`, with `field` a map on the same input space.
    pub fn directional(&self, field: &PolyMap, max_degree: u32) -> PolyMap {
        assert_eq!(field.dim_out(), self.dim_in);
        PolyMap::new(
            self.dim_in,
            self.components
                .iter()
                .map(|c| c.directional(&field.components, max_degree))
                .collect(),
        )
    }

    /// `Dh * v` where only the derivatives in the first `v.dim_out()` variables are used.
    pub fn partial_directional(&self, v: &PolyMap, max_degree: u32) -> PolyMap {
        assert_eq!(v.dim_in(), self.dim_in);
        let mut field = v.components.clone();
        field.resize(self.dim_in, Poly::zero(self.dim_in));
        self.directional(&PolyMap::new(self.dim_in, field), max_degree)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Vec<Rational> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }
}

/// Canonical basis `x^l e_j` of the space of degree-`k` maps, ordered by
/// component first and then graded-lex monomial order.
#[derive(Clone, Debug)]
pub struct VfBasis {
    dim_in: usize,
    dim_out: usize,
    degree: u32,
    monomials: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

impl VfBasis {
    pub fn new(dim_in: usize, dim_out: usize, degree: u32) -> Self {
        let monomials = monomial_basis(dim_in, degree);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        VfBasis {
            dim_in,
            dim_out,
            degree,
            monomials,
            index,
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.dim_out * self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of `x^m e_j`.
    pub fn position(&self, component: usize, m: &MultiIndex) -> usize {
        component * self.monomials.len() + self.index[m]
    }

    /// `(component, monomial)` of basis element `i`.
    pub fn label(&self, i: usize) -> (usize, &MultiIndex) {
        let per = self.monomials.len();
        (i / per, &self.monomials[i % per])
    }

    pub fn element(&self, i: usize) -> HomPolyMap {
        let (j, m) = self.label(i);
        HomPolyMap::monomial(self.dim_out, j, m.clone(), Rational::from_integer(1.into()))
    }

    pub fn elements(&self) -> Vec<HomPolyMap> {
        (0..self.len()).map(|i| self.element(i)).collect()
    }

    pub fn coords(&self, f: &HomPolyMap) -> Result<Vec<Rational>> {
        if f.dim_in() != self.dim_in || f.dim_out() != self.dim_out || f.degree() != self.degree {
            return Err(Error::shape(format!(
                "map (deg {}, {}->{}) outside basis (deg {}, {}->{})",
                f.degree(),
                f.dim_in(),
                f.dim_out(),
                self.degree,
                self.dim_in,
                self.dim_out
            )));
        }
        let mut v = vec![Rational::zero(); self.len()];
        for (j, c) in f.components().iter().enumerate() {
            for (m, coeff) in c.terms() {
                v[self.position(j, m)] = coeff.clone();
            }
        }
        Ok(v)
    }

    pub fn from_coords(&self, v: &[Rational]) -> HomPolyMap {
        assert_eq!(v.len(), self.len());
        let per = self.monomials.len();
        let components = (0..self.dim_out)
            .map(|j| {
                let poly = Poly::from_terms(
                    self.dim_in,
                    self.monomials
                        .iter()
                        .zip(&v[j * per..(j + 1) * per])
                        .map(|(m, c)| (m.clone(), c.clone())),
                );
                HomPoly::from_poly_unchecked(self.degree, poly)
            })
            .collect();
        HomPolyMap {
            degree: self.degree,
            dim_in: self.dim_in,
            components,
        }
    }

    /// Diagonal of the inner product Gram matrix in this basis.
    pub fn gram_weights(&self) -> Vec<Rational> {
        let per: Vec<Rational> = self
            .monomials
            .iter()
            .map(|m| Rational::from_integer(m.factorial_weight().into()))
            .collect();
        (0..self.dim_out).flat_map(|_| per.iter().cloned()).collect()
    }
}

/// Basis maps `x^l e_j` of degree-`degree` maps from `dim_in` to `dim_out` dimensions.
pub fn vf_basis(dim_in: usize, dim_out: usize, degree: u32) -> Vec<HomPolyMap> {
    VfBasis::new(dim_in, dim_out, degree).elements()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_counts_and_order() {
        let b = vf_basis(2, 2, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(
            b[0],
            HomPolyMap::monomial(2, 0, MultiIndex::new(vec![2, 0]), Rational::from_integer(1.into()))
        );
        let lin = vf_basis(3, 1, 1);
        assert_eq!(lin.len(), 3);
        for (i, e) in lin.iter().enumerate() {
            assert_eq!(e.component(0).poly(), &Poly::var(3, i));
        }
        assert_eq!(vf_basis(2, 2, 3).len(), 8);
    }

    #[test]
    fn coords_round_trip() {
        let basis = VfBasis::new(3, 2, 2);
        for i in 0..basis.len() {
            let e = basis.element(i);
            let c = basis.coords(&e).unwrap();
            assert_eq!(c.iter().filter(|v| !v.is_zero()).count(), 1);
            assert_eq!(basis.from_coords(&c), e);
        }
    }

    #[test]
    fn construction_is_deterministic() {
        assert_eq!(vf_basis(3, 3, 3), vf_basis(3, 3, 3));
    }
}
