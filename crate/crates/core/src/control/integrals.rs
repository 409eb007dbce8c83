//! Brunovsky pairs, characteristic fields and their polynomial first integrals.

use super::ControlLinearPart;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polyalg::{int, rat, MultiIndex, Poly, PolyMap};

/// Single-input Brunovsky pair: `A` the upper shift, `B = e_n`.
pub fn brunovsky_pair(n: usize) -> Result<ControlLinearPart> {
    if n == 0 {
        return Err(Error::shape("Brunovsky pair needs n >= 1"));
    }
    let mut a = Matrix::zeros(n, n);
    for i in 0..n - 1 {
        a[(i, i + 1)] = int(1);
    }
    let mut b = Matrix::zeros(n, 1);
    b[(n - 1, 0)] = int(1);
    ControlLinearPart::new(a, b)
}

/// The linear field `x~ -> A0^T x~` on `(x, u)`: state block `A^T x`,
/// control block `B^T x`.
pub fn characteristic_field(lin: &ControlLinearPart) -> PolyMap {
    PolyMap::linear(&lin.augmented().transpose())
}

/// Polynomial on `(x, u)` constant along a characteristic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstIntegral {
    pub index: usize,
    pub poly: Poly,
}

impl FirstIntegral {
    /// Directional derivative of the integral along `field`.
    pub fn derivative_along(&self, field: &PolyMap) -> Poly {
        self.poly.directional(field.components(), u32::MAX)
    }

    pub fn certify(&self, field: &PolyMap) -> bool {
        self.derivative_along(field).is_zero()
    }
}

fn certified(field: &PolyMap, integrals: Vec<FirstIntegral>) -> Result<Vec<FirstIntegral>> {
    for l in &integrals {
        if !l.certify(field) {
            return Err(Error::Verification(format!(
                "first integral {} is not annihilated by the characteristic field",
                l.index
            )));
        }
    }
    Ok(integrals)
}

fn product(vars: usize, i: usize, j: usize) -> MultiIndex {
    let mut e = vec![0; vars];
    e[i] += 1;
    e[j] += 1;
    MultiIndex::new(e)
}

/// `l_1 = x_1` and, for `2 <= i <= r + 1`,
/// `l_i = x_i^2 / 2 + sum_k (-1)^k x_{i-k} x_{i+k}` over all `k >= 1` with
/// `i - k >= 1` and `i + k <= n + 1`, where `x_{n+1} = u` and `r = floor(n/2)`.
pub fn brunovsky_first_integrals(n: usize) -> Result<Vec<FirstIntegral>> {
    let lin = brunovsky_pair(n)?;
    let vars = n + 1;
    let mut out = vec![FirstIntegral {
        index: 1,
        poly: Poly::var(vars, 0),
    }];
    for i in 2..=n / 2 + 1 {
        let mut terms = vec![(product(vars, i - 1, i - 1), rat(1, 2))];
        for k in 1..i {
            if i + k > n + 1 {
                break;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            terms.push((product(vars, i - k - 1, i + k - 1), int(sign)));
        }
        out.push(FirstIntegral {
            index: i,
            poly: Poly::from_terms(vars, terms),
        });
    }
    certified(&characteristic_field(&lin), out)
}

/// Linear part over `(z, x1, x2, u)`: `z' = x2`, `x1' = 0`, `x2' = u`.
///
/// Its characteristic field is `z d/dx2 + x2 d/du` and the kernel PDE for
/// `f = (f_z, f_x1, f_x2)` reads `V f_z = 0`, `V f_x1 = 0`, `V f_x2 = f_z`.
pub fn uncontrollable_example() -> ControlLinearPart {
    let a = Matrix::from_i64(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]);
    let b = Matrix::from_i64(&[&[0], &[0], &[1]]);
    ControlLinearPart::new(a, b).expect("fixed example")
}

/// `{z, x1, x2^2 - 2 z u}` for [`uncontrollable_example`].
pub fn uncontrollable_first_integrals_example() -> Result<Vec<FirstIntegral>> {
    let lin = uncontrollable_example();
    let vars = 4;
    let l3 = Poly::from_terms(
        vars,
        vec![(product(vars, 2, 2), int(1)), (product(vars, 0, 3), int(-2))],
    );
    let out = vec![
        FirstIntegral {
            index: 1,
            poly: Poly::var(vars, 0),
        },
        FirstIntegral {
            index: 2,
            poly: Poly::var(vars, 1),
        },
        FirstIntegral { index: 3, poly: l3 },
    ];
    certified(&characteristic_field(&lin), out)
}
