use num_traits::{One, Zero};

use super::LinearPart;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polyalg::Rational;

/// Outcome of checking a proposed Jordan-Chevalley split `A = A_s + A_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub sums_to_a: bool,
    pub commute: bool,
    pub nilpotent: bool,
    pub semisimple: bool,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.sums_to_a && self.commute && self.nilpotent && self.semisimple
    }

    pub fn failures(&self) -> Vec<String> {
        [
            (self.sums_to_a, "A = A_s + A_n"),
            (self.commute, "A_s A_n = A_n A_s"),
            (self.nilpotent, "A_n nilpotent"),
            (self.semisimple, "A_s semisimple"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name.to_string())
        .collect()
    }
}

/// Splits a matrix in Jordan form into its diagonal and strictly upper parts
/// and validates the result.
pub fn jordan_split(a: &LinearPart) -> Result<(LinearPart, LinearPart)> {
    let m = a.matrix();
    let n = a.dim();
    let mut s = Matrix::zeros(n, n);
    let mut nil = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = &m[(i, j)];
            if v.is_zero() {
                continue;
            }
            if i == j {
                s[(i, j)] = v.clone();
            } else if j == i + 1 {
                nil[(i, j)] = v.clone();
            } else {
                return Err(Error::InvalidSplit(vec![format!(
                    "entry ({i}, {j}) outside the Jordan band"
                )]));
            }
        }
    }
    let (s, nil) = (LinearPart::new(s)?, LinearPart::new(nil)?);
    let report = validate_split(a, &s, &nil)?;
    if !report.passed() {
        return Err(Error::InvalidSplit(report.failures()));
    }
    Ok((s, nil))
}

/// Checks sum, commutation, nilpotency (`A_n^n = 0`) and semisimplicity.
///
/// `A_s` is semisimple iff its minimal polynomial is squarefree, which holds iff
/// the squarefree part `chi / gcd(chi, chi')` of its characteristic polynomial
/// annihilates it.
pub fn validate_split(a: &LinearPart, s: &LinearPart, nil: &LinearPart) -> Result<SplitReport> {
    if a.dim() != s.dim() || a.dim() != nil.dim() {
        return Err(Error::shape("split parts differ in size"));
    }
    let (am, sm, nm) = (a.matrix(), s.matrix(), nil.matrix());
    let chi = charpoly(sm);
    let sqfree = chi.div(&chi.gcd(&chi.derivative()));
    Ok(SplitReport {
        sums_to_a: sm.add(nm) == *am,
        commute: sm.mul(nm) == nm.mul(sm),
        nilpotent: nm.pow(a.dim() as u32).is_zero(),
        semisimple: sqfree.eval_matrix(sm).is_zero(),
    })
}

/// Characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier.
fn charpoly(m: &Matrix) -> UniPoly {
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&Matrix::identity(n).scale(&coeffs[n - k + 1]));
        let am = m.mul(&mk);
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + &am[(i, i)]);
        coeffs[n - k] = -trace / Rational::from_integer((k as i64).into());
    }
    UniPoly::new(coeffs)
}

/// Dense univariate polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
struct UniPoly(Vec<Rational>);

impl UniPoly {
    fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UniPoly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero());
        let mut rem = self.0.clone();
        if self.is_zero() || self.degree() < d.degree() {
            return (UniPoly(Vec::new()), self.clone());
        }
        let mut quot = vec![Rational::zero(); self.degree() - d.degree() + 1];
        for shift in (0..quot.len()).rev() {
            let c = &rem[shift + d.degree()] / d.lead();
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.0.iter().enumerate() {
                rem[shift + i] -= &c * dc;
            }
            quot[shift] = c;
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    fn div(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).0
    }

    fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.lead().clone();
        UniPoly(a.0.iter().map(|c| c / &lead).collect())
    }

    fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(m).add(&Matrix::identity(n).scale(c));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::int;

    fn lp(rows: &[&[i64]]) -> LinearPart {
        LinearPart::new(Matrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn splits_of_jordan_matrices() {
        let tb = lp(&[&[0, 1], &[0, 0]]);
        let (s, n) = jordan_split(&tb).unwrap();
        assert!(s.matrix().is_zero());
        assert_eq!(n, tb);

        let d = lp(&[&[1, 0], &[0, 2]]);
        let (s, n) = jordan_split(&d).unwrap();
        assert_eq!(s, d);
        assert!(n.matrix().is_zero());

        let block = lp(&[&[2, 1], &[0, 2]]);
        let (s, n) = jordan_split(&block).unwrap();
        assert_eq!(s, lp(&[&[2, 0], &[0, 2]]));
        assert_eq!(n, lp(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn non_jordan_input_rejected() {
        assert!(jordan_split(&lp(&[&[1, 1], &[0, 2]])).is_err());
        assert!(jordan_split(&lp(&[&[0, 0], &[1, 0]])).is_err());
    }

    #[test]
    fn validate_examples() {
        let d = lp(&[&[1, 0], &[0, 2]]);
        let zero = lp(&[&[0, 0], &[0, 0]]);
        assert!(validate_split(&d, &d, &zero).unwrap().passed());

        let tb = lp(&[&[0, 1], &[0, 0]]);
        let r = validate_split(&tb, &tb, &zero).unwrap();
        assert!(!r.semisimple);
        assert!(r.sums_to_a && r.commute && r.nilpotent);

        let j = lp(&[&[1, 1], &[0, 1]]);
        let id = lp(&[&[1, 0], &[0, 1]]);
        assert!(validate_split(&j, &id, &tb).unwrap().passed());
    }

    #[test]
    fn charpoly_of_companion() {
        // x^2 - 3x + 2
        let m = Matrix::from_i64(&[&[0, -2], &[1, 3]]);
        assert_eq!(charpoly(&m), UniPoly::new(vec![int(2), int(-3), int(1)]));
    }

    #[test]
    fn rotation_is_semisimple() {
        let r = lp(&[&[0, -1], &[1, 0]]);
        let zero = lp(&[&[0, 0], &[0, 0]]);
        assert!(validate_split(&r, &r, &zero).unwrap().semisimple);
    }
}
