use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::monomial::MultiIndex;
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Sparse multivariate polynomial over the rationals, of any degree.
///
/// No stored coefficient is zero; the zero polynomial has an empty term map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    n_vars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Poly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zeros(n_vars), c)
    }

    pub fn var(n_vars: usize, var: usize) -> Self {
        Self::monomial(MultiIndex::unit(n_vars, var), Rational::one())
    }

    pub fn monomial(exponents: MultiIndex, coeff: Rational) -> Self {
        let mut p = Poly::zero(exponents.n_vars());
        p.add_term(exponents, coeff);
        p
    }

    /// Linear form `sum_j row[j] * x_j`.
    pub fn linear(row: &[Rational]) -> Self {
        let mut p = Poly::zero(row.len());
        for (j, c) in row.iter().enumerate() {
            p.add_term(MultiIndex::unit(row.len(), j), c.clone());
        }
        p
    }

    pub fn from_terms(
        n_vars: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Self {
        let mut p = Poly::zero(n_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `coeff * x^m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: MultiIndex, coeff: Rational) {
        assert_eq!(m.n_vars(), self.n_vars, "monomial arity");
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Highest total degree present, `None` for the zero polynomial.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(MultiIndex::degree)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(MultiIndex::degree)
    }

    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        Poly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, max_degree: u32) -> Poly {
        Poly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.n_vars);
        }
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_truncated(other, u32::MAX)
    }

    /// Product with every term of degree above `max_degree` discarded.
    pub fn mul_truncated(&self, other: &Poly, max_degree: u32) -> Poly {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = Poly::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > max_degree {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn partial(&self, var: usize) -> Poly {
        assert!(var < self.n_vars, "variable index out of range");
        let mut out = Poly::zero(self.n_vars);
        for (m, c) in &self.terms {
            if let Some(lowered) = m.lower(var) {
                out.add_term(lowered, c * Rational::from_integer(m.exponents()[var].into()));
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.n_vars);
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Embeds into a ring with `extra` additional trailing variables.
    pub fn extend_vars(&self, extra: usize) -> Poly {
        Poly {
            n_vars: self.n_vars + extra,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.extend(extra), c.clone()))
                .collect(),
        }
    }

    /// Drops trailing variables. Fails if a dropped variable actually occurs.
    pub fn restrict_vars(&self, n_vars: usize) -> Option<Poly> {
        let mut out = Poly::zero(n_vars);
        for (m, c) in &self.terms {
            let (keep, drop) = m.exponents().split_at(n_vars);
            if drop.iter().any(|&e| e > 0) {
                return None;
            }
            out.add_term(MultiIndex::new(keep.to_vec()), c.clone());
        }
        Some(out)
    }

    /// Sets every variable with index `>= first` to zero.
    pub fn zero_from(&self, first: usize) -> Poly {
        Poly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponents()[first..].iter().all(|&e| e == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Directional derivative `sum_i dp/dx_i * field[i]`, truncated at `max_degree`.
    pub fn directional(&self, field: &[Poly], max_degree: u32) -> Poly {
        assert_eq!(field.len(), self.n_vars);
        let mut out = Poly::zero(self.n_vars);
        for (i, v) in field.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let d = self.partial(i);
            if !d.is_zero() {
                out = out.add(&d.mul_truncated(v, max_degree));
            }
        }
        out
    }

    /// Substitutes `x = T y`, i.e. returns `p(T y)`.
    pub fn compose_linear(&self, t: &Matrix) -> Poly {
        assert_eq!(t.rows(), self.n_vars);
        let images: Vec<Poly> = (0..t.rows()).map(|i| Poly::linear(t.row(i))).collect();
        let mut out = Poly::zero(t.cols());
        for (m, c) in &self.terms {
            let mut term = Poly::constant(t.cols(), c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&images[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

/// Homogeneous polynomial of a fixed degree; the zero polynomial keeps its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    degree: u32,
    poly: Poly,
}

impl HomPoly {
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        HomPoly {
            degree,
            poly: Poly::zero(n_vars),
        }
    }

    /// Wraps `poly`, checking every term has total degree `degree`.
    pub fn new(degree: u32, poly: Poly) -> Result<Self> {
        if let Some((m, _)) = poly.terms().find(|(m, _)| m.degree() != degree) {
            return Err(Error::shape(format!(
                "monomial {m} has degree {} in a degree-{degree} polynomial",
                m.degree()
            )));
        }
        Ok(HomPoly { degree, poly })
    }

    pub fn from_terms(
        n_vars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        Self::new(degree, Poly::from_terms(n_vars, terms))
    }

    pub(crate) fn from_poly_unchecked(degree: u32, poly: Poly) -> Self {
        debug_assert!(poly.is_homogeneous_of(degree));
        HomPoly { degree, poly }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n_vars(&self) -> usize {
        self.poly.n_vars()
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.poly.terms()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Rational {
        self.poly.coeff(m)
    }

    pub fn add(&self, other: &HomPoly) -> Result<HomPoly> {
        self.check_same(other)?;
        Ok(HomPoly::from_poly_unchecked(self.degree, self.poly.add(&other.poly)))
    }

    pub fn sub(&self, other: &HomPoly) -> Result<HomPoly> {
        self.check_same(other)?;
        Ok(HomPoly::from_poly_unchecked(self.degree, self.poly.sub(&other.poly)))
    }

    pub fn scale(&self, s: &Rational) -> HomPoly {
        HomPoly::from_poly_unchecked(self.degree, self.poly.scale(s))
    }

    fn check_same(&self, other: &HomPoly) -> Result<()> {
        if self.degree != other.degree || self.n_vars() != other.n_vars() {
            return Err(Error::shape(format!(
                "degree/arity ({}, {}) vs ({}, {})",
                self.degree,
                self.n_vars(),
                other.degree,
                other.n_vars()
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.poly.evaluate(point)
    }

    pub fn extend_vars(&self, extra: usize) -> HomPoly {
        HomPoly::from_poly_unchecked(self.degree, self.poly.extend_vars(extra))
    }

    pub fn compose_linear(&self, t: &Matrix) -> HomPoly {
        HomPoly::from_poly_unchecked(self.degree, self.poly.compose_linear(t))
    }
}

/// Exact formal partial derivative; the degree drops by one (saturating at zero).
pub fn partial_derivative(p: &HomPoly, var: usize) -> HomPoly {
    HomPoly::from_poly_unchecked(p.degree.saturating_sub(1), p.poly.partial(var))
}

pub fn multiply(p: &HomPoly, q: &HomPoly) -> Result<HomPoly> {
    if p.n_vars() != q.n_vars() {
        return Err(Error::shape("multiply: variable counts differ"));
    }
    Ok(HomPoly::from_poly_unchecked(
        p.degree + q.degree,
        p.poly.mul(&q.poly),
    ))
}

pub fn evaluate(p: &HomPoly, point: &[Rational]) -> Result<Rational> {
    if point.len() != p.n_vars() {
        return Err(Error::shape(format!(
            "point has {} coordinates, polynomial has {} variables",
            point.len(),
            p.n_vars()
        )));
    }
    Ok(p.evaluate(point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rational::{int, rat};

    fn term(e: &[u32], c: Rational) -> (MultiIndex, Rational) {
        (MultiIndex::new(e.to_vec()), c)
    }

    fn hp(n: usize, d: u32, terms: &[(&[u32], i64)]) -> HomPoly {
        HomPoly::from_terms(n, d, terms.iter().map(|(e, c)| term(e, int(*c)))).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let p = hp(2, 3, &[(&[2, 1], 1)]);
        assert_eq!(partial_derivative(&p, 0), hp(2, 2, &[(&[1, 1], 2)]));
        let q = hp(2, 3, &[(&[0, 3], 1)]);
        assert!(partial_derivative(&q, 0).is_zero());
        let r = hp(3, 3, &[(&[1, 1, 1], 1)]);
        assert_eq!(partial_derivative(&r, 2), hp(3, 2, &[(&[1, 1, 0], 1)]));
    }

    #[test]
    fn multiply_examples() {
        let x1 = hp(2, 1, &[(&[1, 0], 1)]);
        let x2 = hp(2, 1, &[(&[0, 1], 1)]);
        assert_eq!(multiply(&x1, &x2).unwrap(), hp(2, 2, &[(&[1, 1], 1)]));
        let s = x1.add(&x2).unwrap();
        let d = x1.sub(&x2).unwrap();
        assert_eq!(
            multiply(&s, &d).unwrap(),
            hp(2, 2, &[(&[2, 0], 1), (&[0, 2], -1)])
        );
        let z = HomPoly::zero(2, 4);
        assert!(multiply(&z, &s).unwrap().is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let p = hp(2, 2, &[(&[1, 1], 1)]);
        assert_eq!(evaluate(&p, &[int(2), int(3)]).unwrap(), int(6));
        let q = hp(2, 2, &[(&[2, 0], 1)]);
        assert_eq!(evaluate(&q, &[int(0), int(5)]).unwrap(), int(0));
        let r = Poly::from_terms(2, [term(&[2, 0], int(2)), term(&[0, 1], int(-1))]);
        assert_eq!(r.evaluate(&[rat(1, 2), rat(1, 4)]), rat(1, 4));
        assert!(evaluate(&q, &[int(1)]).is_err());
    }

    #[test]
    fn rejects_inhomogeneous() {
        let p = Poly::from_terms(2, [term(&[1, 0], int(1)), term(&[2, 0], int(1))]);
        assert!(HomPoly::new(2, p).is_err());
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let mut p = Poly::var(2, 0);
        p.add_term(MultiIndex::unit(2, 0), int(-1));
        assert!(p.is_zero());
    }
}
