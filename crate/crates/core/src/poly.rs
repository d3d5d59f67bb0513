use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::{format_ratio, from_int};

/// Univariate polynomial with exact rational coefficients, lowest degree first.
/// Trailing zeros are always trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "PolyRepr", into = "PolyRepr")]
pub struct ExactPolynomial {
    coefficients: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    #[serde(with = "crate::exact::serde_ratio_vec")]
    coefficients: Vec<BigRational>,
}

impl From<PolyRepr> for ExactPolynomial {
    fn from(repr: PolyRepr) -> Self {
        Self::new(repr.coefficients)
    }
}

impl From<ExactPolynomial> for PolyRepr {
    fn from(p: ExactPolynomial) -> Self {
        PolyRepr { coefficients: p.coefficients }
    }
}

impl ExactPolynomial {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// `x + c`.
    pub fn linear(c: BigRational) -> Self {
        Self::new(vec![c, BigRational::one()])
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn coefficient(&self, power: usize) -> BigRational {
        self.coefficients.get(power).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coefficients.last()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coefficients.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&from_int(x))
    }

    /// Cauchy bound `1 + max_i |a_i / a_lead|`: every real root lies strictly below it
    /// in absolute value. `None` for constant or zero polynomials.
    pub fn cauchy_bound(&self) -> Option<BigRational> {
        let lead = self.leading_coefficient()?;
        let n = self.degree()?;
        if n == 0 {
            return None;
        }
        let max = self.coefficients[..n]
            .iter()
            .map(|a| (a / lead).abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        Some(BigRational::one() + max)
    }
}

impl std::fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coefficients.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let (sep, mag) = match (first, a.is_negative()) {
                (true, true) => ("-", -a.clone()),
                (true, false) => ("", a.clone()),
                (false, true) => (" - ", -a.clone()),
                (false, false) => (" + ", a.clone()),
            };
            let coeff = if mag.is_one() && i > 0 { String::new() } else { format_ratio(&mag) };
            let mag_str = if coeff.contains('/') && i > 0 { format!("({coeff})") } else { coeff };
            match i {
                0 => write!(f, "{sep}{mag_str}")?,
                1 => write!(f, "{sep}{mag_str}h")?,
                _ => write!(f, "{sep}{mag_str}h^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &ExactPolynomial {
    type Output = ExactPolynomial;

    fn add(self, rhs: Self) -> ExactPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        ExactPolynomial::new((0..n).map(|i| self.coefficient(i) + rhs.coefficient(i)).collect())
    }
}

impl Sub for &ExactPolynomial {
    type Output = ExactPolynomial;

    fn sub(self, rhs: Self) -> ExactPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &ExactPolynomial {
    type Output = ExactPolynomial;

    fn neg(self) -> ExactPolynomial {
        ExactPolynomial::new(self.coefficients.iter().map(|a| -a).collect())
    }
}

impl Mul for &ExactPolynomial {
    type Output = ExactPolynomial;

    fn mul(self, rhs: Self) -> ExactPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ExactPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ExactPolynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn p(cs: &[i64]) -> ExactPolynomial {
        ExactPolynomial::new(cs.iter().map(|&c| from_int(c)).collect())
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[]).is_zero());
    }

    #[test]
    fn arithmetic() {
        // (h + 1)(h − 1) = h² − 1
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(&a - &a, ExactPolynomial::zero());
        assert_eq!((&a + &b).eval_int(3), from_int(6));
        assert_eq!(p(&[-40, 80]).eval(&ratio(1, 2)), from_int(0));
    }

    #[test]
    fn cauchy() {
        assert_eq!(p(&[-40, 80]).cauchy_bound(), Some(ratio(3, 2)));
        assert_eq!(p(&[0, -3]).cauchy_bound(), Some(from_int(1)));
        assert_eq!(p(&[5]).cauchy_bound(), None);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-40, 80]).to_string(), "80h - 40");
        assert_eq!(ExactPolynomial::new(vec![ratio(1, 2), from_int(0), from_int(-1)]).to_string(), "-h^2 + 1/2");
        assert_eq!(ExactPolynomial::zero().to_string(), "0");
    }
}
