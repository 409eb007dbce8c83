use std::collections::BTreeMap;

use num_traits::One;

use super::map::{HomPolyMap, PolyMap};
use super::monomial::MultiIndex;
use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Truncated graded expansion `L x + f^[2](x) + ... + f^[N](x)`.
///
/// Only nonzero graded terms are stored; [`PolySeries::term`] returns the zero
/// map for missing degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySeries {
    dim_in: usize,
    dim_out: usize,
    max_degree: u32,
    linear: Matrix,
    terms: BTreeMap<u32, HomPolyMap>,
}

impl PolySeries {
    pub fn new(dim_in: usize, dim_out: usize, max_degree: u32) -> Self {
        PolySeries {
            dim_in,
            dim_out,
            max_degree,
            linear: Matrix::zeros(dim_out, dim_in),
            terms: BTreeMap::new(),
        }
    }

    pub fn with_linear(mut self, linear: Matrix) -> Result<Self> {
        self.set_linear(linear)?;
        Ok(self)
    }

    pub fn set_linear(&mut self, linear: Matrix) -> Result<()> {
        if linear.rows() != self.dim_out || linear.cols() != self.dim_in {
            return Err(Error::shape(format!(
                "linear part {}x{} for a {}->{} series",
                linear.rows(),
                linear.cols(),
                self.dim_in,
                self.dim_out
            )));
        }
        self.linear = linear;
        Ok(())
    }

    /// Replaces the graded term of `term.degree()`.
    pub fn set_term(&mut self, term: HomPolyMap) -> Result<()> {
        let k = term.degree();
        if k < 2 || k > self.max_degree {
            return Err(Error::shape(format!(
                "degree {k} outside 2..={}",
                self.max_degree
            )));
        }
        if term.dim_in() != self.dim_in || term.dim_out() != self.dim_out {
            return Err(Error::shape(format!(
                "term {}->{} in a {}->{} series",
                term.dim_in(),
                term.dim_out(),
                self.dim_in,
                self.dim_out
            )));
        }
        if term.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, term);
        }
        Ok(())
    }

    pub fn with_term(mut self, term: HomPolyMap) -> Result<Self> {
        self.set_term(term)?;
        Ok(self)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn linear(&self) -> &Matrix {
        &self.linear
    }

    pub fn term(&self, k: u32) -> HomPolyMap {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| HomPolyMap::zero(self.dim_in, self.dim_out, k))
    }

    /// Nonzero graded terms in ascending degree.
    pub fn terms(&self) -> impl Iterator<Item = &HomPolyMap> {
        self.terms.values()
    }

    pub fn is_nonlinear_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same series with a different truncation order (higher terms dropped).
    pub fn retruncate(&self, max_degree: u32) -> PolySeries {
        PolySeries {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            max_degree,
            linear: self.linear.clone(),
            terms: self
                .terms
                .range(..=max_degree)
                .map(|(k, t)| (*k, t.clone()))
                .collect(),
        }
    }

    pub fn to_poly_map(&self) -> PolyMap {
        let mut map = PolyMap::linear(&self.linear);
        for t in self.terms.values() {
            map = map.add(&t.to_poly_map());
        }
        map
    }

    /// Regrades a map without constant term; degrees above `max_degree` are dropped.
    pub fn from_poly_map(map: &PolyMap, max_degree: u32) -> Result<Self> {
        if map.min_degree() == Some(0) {
            return Err(Error::shape("series must vanish at the origin"));
        }
        let (dim_in, dim_out) = (map.dim_in(), map.dim_out());
        let mut linear = Matrix::zeros(dim_out, dim_in);
        let lin = map.homogeneous_part(1);
        for (i, c) in lin.components().iter().enumerate() {
            for (m, coeff) in c.terms() {
                let j = m.exponents().iter().position(|&e| e == 1).unwrap();
                linear[(i, j)] = coeff.clone();
            }
        }
        let mut s = PolySeries::new(dim_in, dim_out, max_degree).with_linear(linear)?;
        for k in 2..=max_degree {
            s.set_term(map.homogeneous_part(k))?;
        }
        Ok(s)
    }
}

/// Substitutes `phi` into a polynomial map, dropping every term of degree above
/// `max_degree`. `phi` must vanish at the origin.
pub fn compose_maps(f: &PolyMap, phi: &PolyMap, max_degree: u32) -> PolyMap {
    assert_eq!(phi.dim_out(), f.dim_in());
    assert!(phi.min_degree().map_or(true, |d| d >= 1));
    let n = phi.dim_in();
    // powers[i][e] = phi_i^e truncated
    let mut powers: Vec<Vec<Poly>> = phi
        .components()
        .iter()
        .map(|c| vec![Poly::constant(n, Rational::one()), c.truncate(max_degree)])
        .collect();
    let mut out = Vec::with_capacity(f.dim_out());
    for comp in f.components() {
        let mut acc = Poly::zero(n);
        for (m, coeff) in comp.terms() {
            if m.degree() > max_degree {
                continue;
            }
            let mut term = Poly::constant(n, coeff.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i]
                        .last()
                        .unwrap()
                        .mul_truncated(&powers[i][1], max_degree);
                    powers[i].push(next);
                }
                term = term.mul_truncated(&powers[i][e as usize], max_degree);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.add(&term);
        }
        out.push(acc);
    }
    PolyMap::new(n, out)
}

/// Graded expansion of `f o phi` up to degree `max_degree`, where `phi` is a
/// near-identity coordinate change (identity linear part).
pub fn compose_truncated(f: &PolySeries, phi: &PolySeries, max_degree: u32) -> Result<PolySeries> {
    if phi.dim_out() != f.dim_in() {
        return Err(Error::shape(format!(
            "cannot substitute a map into {} variables into a series in {} variables",
            phi.dim_out(),
            f.dim_in()
        )));
    }
    if !phi.linear().is_square() || *phi.linear() != Matrix::identity(phi.dim_in()) {
        return Err(Error::shape("coordinate change must have identity linear part"));
    }
    let composed = compose_maps(&f.to_poly_map(), &phi.to_poly_map(), max_degree);
    PolySeries::from_poly_map(&composed, max_degree)
}

/// Convenience: the scalar monomial term `coeff * x^exponents`.
pub fn scalar_term(exponents: &[u32], coeff: Rational) -> HomPolyMap {
    HomPolyMap::monomial(1, 0, MultiIndex::new(exponents.to_vec()), coeff)
}

impl PolySeries {
    /// Per-degree difference `self - other`, degrees `1..=max_degree`; degree 1
    /// compares the linear parts.
    pub fn graded_difference(&self, other: &PolySeries) -> Result<BTreeMap<u32, HomPolyMap>> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(Error::shape("series dimensions differ"));
        }
        let n = self.max_degree.max(other.max_degree);
        let a = self.to_poly_map();
        let b = other.to_poly_map();
        let diff = a.sub(&b);
        Ok((1..=n).map(|k| (k, diff.homogeneous_part(k))).collect())
    }
}
