//! The weighted monomial inner product `<p, q> = sum_m m! p_m q_m`, where
//! `m! = m_1! ... m_n!`, extended to vector-valued maps by summing over
//! components. Distinct monomials are orthogonal, so the Gram matrix is
//! diagonal in the monomial basis.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polyalg::{monomial_basis, HomPolyMap, MultiIndex, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramWeight {
    pub multi_index: MultiIndex,
    pub weight: BigUint,
}

impl GramWeight {
    pub fn of(multi_index: MultiIndex) -> Self {
        let weight = multi_index.factorial_weight();
        GramWeight {
            multi_index,
            weight,
        }
    }
}

pub fn inner_product(p: &HomPolyMap, q: &HomPolyMap) -> Result<Rational> {
    if !p.same_shape(q) {
        return Err(Error::shape("inner product of maps with different shapes"));
    }
    let mut total = Rational::zero();
    for (pc, qc) in p.components().iter().zip(q.components()) {
        for (m, a) in pc.terms() {
            let b = qc.coeff(m);
            if !b.is_zero() {
                total += a * b * Rational::from_integer(m.factorial_weight().into());
            }
        }
    }
    Ok(total)
}

/// Weights `m!` aligned with [`monomial_basis`] order.
pub fn gram_diagonal(n_vars: usize, degree: u32) -> Vec<BigUint> {
    monomial_basis(n_vars, degree)
        .into_iter()
        .map(|m| GramWeight::of(m).weight)
        .collect()
}

/// Inner product of two coordinate vectors under a diagonal Gram matrix.
pub fn weighted_dot(weights: &[Rational], a: &[Rational], b: &[Rational]) -> Rational {
    weights
        .iter()
        .zip(a.iter().zip(b))
        .filter(|(_, (x, y))| !x.is_zero() && !y.is_zero())
        .map(|(w, (x, y))| w * x * y)
        .fold(Rational::zero(), |acc, t| acc + t)
}

/// Splits `v` into its orthogonal projection onto `span(subspace)` and the
/// remainder, by solving the normal equations exactly.
pub fn project_orthogonal(
    v: &HomPolyMap,
    subspace: &[HomPolyMap],
) -> Result<(HomPolyMap, HomPolyMap)> {
    if let Some(s) = subspace.iter().find(|s| !s.same_shape(v)) {
        return Err(Error::shape(format!(
            "subspace element of degree {} ({}->{}) against vector of degree {} ({}->{})",
            s.degree(),
            s.dim_in(),
            s.dim_out(),
            v.degree(),
            v.dim_in(),
            v.dim_out()
        )));
    }
    let zero = HomPolyMap::zero(v.dim_in(), v.dim_out(), v.degree());
    if subspace.is_empty() {
        return Ok((zero, v.clone()));
    }
    let r = subspace.len();
    let mut gram = Matrix::zeros(r, r);
    let mut rhs = Vec::with_capacity(r);
    for i in 0..r {
        for j in i..r {
            let g = inner_product(&subspace[i], &subspace[j])?;
            gram[(j, i)] = g.clone();
            gram[(i, j)] = g;
        }
        rhs.push(inner_product(&subspace[i], v)?);
    }
    if gram.rank() < r {
        return Err(Error::DependentSubspace);
    }
    let coeffs = gram
        .solve(&rhs)
        .ok_or_else(|| Error::Verification("Gram system inconsistent".into()))?;
    let mut inside = zero;
    for (c, s) in coeffs.iter().zip(subspace) {
        if !c.is_zero() {
            inside = inside.add(&s.scale(c))?;
        }
    }
    let perp = v.sub(&inside)?;
    Ok((inside, perp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::int;

    fn mono(dim_out: usize, j: usize, e: &[u32]) -> HomPolyMap {
        HomPolyMap::monomial(dim_out, j, MultiIndex::new(e.to_vec()), int(1))
    }

    #[test]
    fn inner_product_examples() {
        let a = mono(1, 0, &[2, 0]);
        let b = mono(1, 0, &[1, 1]);
        assert_eq!(inner_product(&a, &a).unwrap(), int(2));
        assert_eq!(inner_product(&b, &b).unwrap(), int(1));
        assert_eq!(inner_product(&a, &b).unwrap(), int(0));
        assert!(inner_product(&a, &mono(2, 0, &[2, 0])).is_err());
    }

    #[test]
    fn gram_examples() {
        let to = |v: &[u32]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
        assert_eq!(gram_diagonal(2, 2), to(&[2, 1, 2]));
        assert_eq!(gram_diagonal(1, 4), to(&[24]));
        assert_eq!(gram_diagonal(3, 1), to(&[1, 1, 1]));
    }

    #[test]
    fn projection_examples() {
        let s = mono(1, 0, &[2, 0]);
        let t = mono(1, 0, &[1, 1]);
        let v = s.add(&t).unwrap();
        let (inside, perp) = project_orthogonal(&v, &[s.clone()]).unwrap();
        assert_eq!(inside, s);
        assert_eq!(perp, t);

        let (inside, perp) = project_orthogonal(&s, &[s.clone()]).unwrap();
        assert_eq!(inside, s);
        assert!(perp.is_zero());

        let (inside, perp) = project_orthogonal(&t, &[s.clone()]).unwrap();
        assert!(inside.is_zero());
        assert_eq!(perp, t);
    }

    #[test]
    fn dependent_subspace_rejected() {
        let s = mono(1, 0, &[2, 0]);
        let err = project_orthogonal(&s, &[s.clone(), s.scale(&int(3))]).unwrap_err();
        assert_eq!(err, Error::DependentSubspace);
    }
}
