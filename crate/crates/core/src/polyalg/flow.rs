//! Time-one flows of homogeneous generators, as truncated Lie series.
//!
//! Two independent routes are provided: [`pullback`] transforms a vector field
//! through the operator series `sum ad^j f / j!`, while [`flow_map`] builds the
//! coordinate change itself. The conjugacy certificates check one against the
//! other.

use num_traits::One;

use super::map::PolyMap;
use super::rational::Rational;

/// Pulls the field `f` back through the time-one flow of `generator`.
///
/// `f` maps `D = generator.dim_out()` variables to its first `n_state`
/// coordinates. The first `n_state` generator components must depend on the
/// first `n_state` variables only (skew structure); the remaining `D - n_state`
/// variables are controls that `f` may depend on but that carry no dynamics.
/// With `n_state == D` this is the ordinary pullback of a vector field.
///
/// Uses `h_{j+1} = Dh_j * gen - D(gen_state) * h_j`, summed with weights `1/j!`
/// and truncated above `max_degree`. The generator must have no terms below
/// degree two so the series terminates.
pub fn pullback(f: &PolyMap, generator: &PolyMap, n_state: usize, max_degree: u32) -> PolyMap {
    let dim = generator.dim_out();
    assert_eq!(generator.dim_in(), dim);
    assert_eq!(f.dim_in(), dim);
    assert_eq!(f.dim_out(), n_state);
    assert!(generator.min_degree().map_or(true, |d| d >= 2));
    if generator.is_zero() {
        return f.truncate(max_degree);
    }
    let state_part = PolyMap::new(dim, generator.components()[..n_state].to_vec());
    let mut h = f.truncate(max_degree);
    let mut total = h.clone();
    let mut factorial = Rational::one();
    let mut j: u32 = 0;
    loop {
        j += 1;
        let along = h.directional(generator, max_degree);
        let twist = state_part.partial_directional(&h, max_degree);
        h = along.sub(&twist);
        if h.is_zero() {
            break;
        }
        factorial *= Rational::from_integer(j.into());
        total = total.add(&h.scale(&factorial.recip()));
    }
    total
}

/// Time-one flow map `y -> exp(generator)(y)` truncated above `max_degree`,
/// computed as `sum L^j(id) / j!` with `L h = Dh * generator`.
pub fn flow_map(generator: &PolyMap, max_degree: u32) -> PolyMap {
    let dim = generator.dim_out();
    assert_eq!(generator.dim_in(), dim);
    assert!(generator.min_degree().map_or(true, |d| d >= 2));
    let mut h = PolyMap::identity(dim);
    let mut total = h.clone();
    let mut factorial = Rational::one();
    let mut j: u32 = 0;
    loop {
        j += 1;
        h = h.directional(generator, max_degree);
        if h.is_zero() {
            break;
        }
        factorial *= Rational::from_integer(j.into());
        total = total.add(&h.scale(&factorial.recip()));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::monomial::MultiIndex;
    use crate::polyalg::poly::Poly;
    use crate::polyalg::rational::int;

    #[test]
    fn scalar_flow_of_square() {
        // y' = y^2 has time-one flow y / (1 - y) = y + y^2 + y^3 + ...
        let gen = PolyMap::new(1, vec![Poly::monomial(MultiIndex::new(vec![2]), int(1))]);
        let phi = flow_map(&gen, 5);
        for d in 1..=5 {
            assert_eq!(phi.components()[0].coeff(&MultiIndex::new(vec![d])), int(1));
        }
    }

    #[test]
    fn pullback_of_linear_scalar() {
        // f = x, gen = x^2: pullback = (1 - y) ... with flow x = y/(1-y):
        // g(y) = f(x)/x'(y) = (y/(1-y)) (1-y)^2 = y - y^2 exactly.
        let f = PolyMap::new(1, vec![Poly::var(1, 0)]);
        let gen = PolyMap::new(1, vec![Poly::monomial(MultiIndex::new(vec![2]), int(1))]);
        let g = pullback(&f, &gen, 1, 6);
        let expect = Poly::from_terms(
            1,
            [
                (MultiIndex::new(vec![1]), int(1)),
                (MultiIndex::new(vec![2]), int(-1)),
            ],
        );
        assert_eq!(g.components()[0], expect);
    }
}

/// Residual `D(psi_state) * g - f o psi` of the conjugacy identity, where
/// `psi` is the composition of the time-one flows of `generators` in order
/// (`psi = phi_1 o phi_2 o ...`). Zero through `max_degree` certifies that the
/// coordinate change maps `f` to `g` up to that order.
///
/// `f` and `g` map `D` variables to `n_state` coordinates; the generators are
/// skew fields on `D` variables as in [`pullback`].
pub fn conjugacy_residual(
    f: &PolyMap,
    generators: &[PolyMap],
    g: &PolyMap,
    n_state: usize,
    max_degree: u32,
) -> PolyMap {
    let dim = f.dim_in();
    assert_eq!(g.dim_in(), dim);
    assert_eq!(f.dim_out(), n_state);
    assert_eq!(g.dim_out(), n_state);
    let mut psi = PolyMap::identity(dim);
    for gen in generators {
        let phi = flow_map(gen, max_degree);
        psi = super::series::compose_maps(&psi, &phi, max_degree);
    }
    let psi_state = PolyMap::new(dim, psi.components()[..n_state].to_vec());
    let lhs = psi_state.partial_directional(&g.truncate(max_degree), max_degree);
    let rhs = super::series::compose_maps(f, &psi, max_degree);
    lhs.sub(&rhs)
}
