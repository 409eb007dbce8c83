use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

/// Exponent vector of a monomial. Variables are ordered `x1 < ... < xn < u1 < ... < um`.
///
/// The ordering is graded: lower total degree first, then within a degree the
/// monomial with the larger leading exponent comes first, so that
/// `x1^2, x1*x2, x2^2` is the ascending sequence for two variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(n_vars: usize) -> Self {
        MultiIndex(vec![0; n_vars])
    }

    pub fn unit(n_vars: usize, var: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Lowers the exponent of `var` by one, or `None` if it is already zero.
    pub fn lower(&self, var: usize) -> Option<MultiIndex> {
        if self.0[var] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[var] -= 1;
        Some(MultiIndex(e))
    }

    pub fn raise(&self, var: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e[var] += 1;
        MultiIndex(e)
    }

    /// Appends `extra` zero exponents.
    pub fn extend(&self, extra: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e.resize(e.len() + extra, 0);
        MultiIndex(e)
    }

    /// `l1! * l2! * ... * ln!`, the weight of this monomial in the inner product.
    pub fn factorial_weight(&self) -> BigUint {
        let mut w = BigUint::from(1u32);
        for &e in &self.0 {
            for i in 2..=e {
                w *= i;
            }
        }
        w
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All multi-indices of total degree `degree` in `n_vars` variables, ascending.
pub fn monomial_basis(n_vars: usize, degree: u32) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, remaining - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n_vars == 0 {
        if degree == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    fill(&mut Vec::with_capacity(n_vars), degree, n_vars, &mut out);
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out
}

/// `C(n_vars + degree - 1, degree)`.
pub fn monomial_count(n_vars: usize, degree: u32) -> usize {
    if n_vars == 0 {
        return usize::from(degree == 0);
    }
    let (n, k) = (n_vars as u128 + degree as u128 - 1, degree as u128);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c as usize
}
