//! Numerical Chow ring of `P = P_B(E)` for a rank-`r`, degree-`d` bundle `E`
//! on a curve: `Z[H, Σ] / (Σ², H^r − d·H^{r−1}Σ)`, with `H^{r−1}Σ` the class
//! of a point.
//!
//! In each codimension `j` the ring is spanned by `H^j` and `H^{j−1}Σ`, so a
//! homogeneous class is just a pair of rationals. This is the oracle every
//! closed-form intersection number elsewhere in the crate is checked against.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{from_int, ratio};

/// Rank, degree and genus of the base data `(E, B)`.
///
/// The genus is carried for bookkeeping only; no invariant computed here
/// depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientData {
    pub r: i64,
    pub d: i64,
    #[serde(default)]
    pub genus: i64,
}

impl AmbientData {
    pub fn new(r: i64, d: i64) -> Result<Self> {
        Self::with_genus(r, d, 0)
    }

    pub fn with_genus(r: i64, d: i64, genus: i64) -> Result<Self> {
        if r < 3 {
            return Err(Error::RankTooSmall(r));
        }
        Ok(Self { r, d, genus })
    }

    /// `μ(E) = d / r`.
    pub fn slope(&self) -> BigRational {
        ratio(self.d, self.r)
    }
}

/// `a·H^j + b·H^{j−1}Σ` in codimension `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousClass {
    ambient: AmbientData,
    codim: i64,
    h_coeff: BigRational,
    sigma_coeff: BigRational,
}

impl HomogeneousClass {
    /// Builds and reduces a class. Codimension `r` classes have `H^r`
    /// rewritten as `d·H^{r−1}Σ`; codimension above `r` collapses to zero.
    pub fn new(
        ambient: AmbientData,
        codim: i64,
        h_coeff: BigRational,
        sigma_coeff: BigRational,
    ) -> Result<Self> {
        if codim < 0 {
            return Err(Error::InvalidClass(format!("negative codimension {codim}")));
        }
        if codim == 0 && !sigma_coeff.is_zero() {
            return Err(Error::InvalidClass("codimension 0 has no Σ component".into()));
        }
        Ok(Self::reduced(ambient, codim, h_coeff, sigma_coeff))
    }

    fn reduced(
        ambient: AmbientData,
        codim: i64,
        h_coeff: BigRational,
        sigma_coeff: BigRational,
    ) -> Self {
        let (h_coeff, sigma_coeff) = if codim > ambient.r {
            (BigRational::zero(), BigRational::zero())
        } else if codim == ambient.r {
            let sigma = sigma_coeff + &h_coeff * from_int(ambient.d);
            (BigRational::zero(), sigma)
        } else {
            (h_coeff, sigma_coeff)
        };
        Self { ambient, codim, h_coeff, sigma_coeff }
    }

    pub fn one(ambient: AmbientData) -> Self {
        Self::reduced(ambient, 0, BigRational::one(), BigRational::zero())
    }

    /// `H`, the tautological class.
    pub fn hyperplane(ambient: AmbientData) -> Self {
        Self::reduced(ambient, 1, BigRational::one(), BigRational::zero())
    }

    /// `Σ`, the class of a fibre of `P → B`.
    pub fn fibre(ambient: AmbientData) -> Self {
        Self::reduced(ambient, 1, BigRational::zero(), BigRational::one())
    }

    /// `H^j`.
    pub fn h_power(ambient: AmbientData, j: i64) -> Self {
        Self::reduced(ambient, j.max(0), BigRational::one(), BigRational::zero())
    }

    /// `H^{j−1}Σ` for `j >= 1`.
    pub fn h_power_sigma(ambient: AmbientData, j: i64) -> Self {
        debug_assert!(j >= 1);
        Self::reduced(ambient, j, BigRational::zero(), BigRational::one())
    }

    /// `k·H − y·Σ`, the class of a relative hypersurface in `|kH − π*M|`, `deg M = y`.
    pub fn divisor(ambient: AmbientData, k: i64, y: i64) -> Self {
        Self::reduced(ambient, 1, from_int(k), from_int(-y))
    }

    pub fn ambient(&self) -> AmbientData {
        self.ambient
    }

    pub fn codim(&self) -> i64 {
        self.codim
    }

    pub fn h_coeff(&self) -> &BigRational {
        &self.h_coeff
    }

    pub fn sigma_coeff(&self) -> &BigRational {
        &self.sigma_coeff
    }

    pub fn is_zero(&self) -> bool {
        self.h_coeff.is_zero() && self.sigma_coeff.is_zero()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::reduced(
            self.ambient,
            self.codim,
            &self.h_coeff * factor,
            &self.sigma_coeff * factor,
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        if self.codim != other.codim {
            return Err(Error::CodimMismatch { expected: self.codim, found: other.codim });
        }
        Ok(Self::reduced(
            self.ambient,
            self.codim,
            &self.h_coeff + &other.h_coeff,
            &self.sigma_coeff + &other.sigma_coeff,
        ))
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        // (a H^i + b H^{i-1}Σ)(a' H^j + b' H^{j-1}Σ), Σ² = 0
        let h = &self.h_coeff * &other.h_coeff;
        let sigma = &self.h_coeff * &other.sigma_coeff + &self.sigma_coeff * &other.h_coeff;
        Ok(Self::reduced(self.ambient, self.codim + other.codim, h, sigma))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.ambient);
        for _ in 0..exp {
            acc = acc.multiply(self).expect("same ambient");
        }
        acc
    }

    /// Degree of a zero-cycle (`H^{r−1}Σ ↦ 1`).
    pub fn degree(&self) -> Result<BigRational> {
        if self.codim != self.ambient.r {
            return Err(Error::CodimMismatch { expected: self.ambient.r, found: self.codim });
        }
        Ok(self.sigma_coeff.clone())
    }
}

pub fn multiply(x: &HomogeneousClass, y: &HomogeneousClass) -> Result<HomogeneousClass> {
    x.multiply(y)
}

pub fn degree(x: &HomogeneousClass) -> Result<BigRational> {
    x.degree()
}

/// One relative hypersurface `X_i ∈ |k_i H − π*M_i|` with `deg M_i = y_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CiFactor {
    pub k: i64,
    pub y: i64,
}

/// The ordered list of factors `(k_i, y_i)` cutting out `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<CiFactor>", into = "Vec<CiFactor>")]
pub struct CompleteIntersectionSpec {
    factors: Vec<CiFactor>,
}

impl TryFrom<Vec<CiFactor>> for CompleteIntersectionSpec {
    type Error = Error;

    fn try_from(factors: Vec<CiFactor>) -> Result<Self> {
        Self::new(factors)
    }
}

impl From<CompleteIntersectionSpec> for Vec<CiFactor> {
    fn from(spec: CompleteIntersectionSpec) -> Self {
        spec.factors
    }
}

impl CompleteIntersectionSpec {
    pub fn new(factors: Vec<CiFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("at least one hypersurface is required".into()));
        }
        if let Some(f) = factors.iter().find(|f| f.k < 2) {
            return Err(Error::InvalidSpec(format!("hypersurface degree k = {} must be >= 2", f.k)));
        }
        Ok(Self { factors })
    }

    /// Shorthand for tests and examples: `from_pairs(&[(2, 1), (2, 0)])`.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(k, y)| CiFactor { k, y }).collect())
    }

    /// Checks `c <= r − 1`.
    pub fn validate_for(&self, ambient: &AmbientData) -> Result<()> {
        let c = self.codim();
        if c > ambient.r - 1 {
            return Err(Error::CodimOutOfRange { codim: c, max: ambient.r - 1 });
        }
        Ok(())
    }

    pub fn factors(&self) -> &[CiFactor] {
        &self.factors
    }

    /// Number of hypersurfaces `c`.
    pub fn codim(&self) -> i64 {
        self.factors.len() as i64
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.factors.iter().map(|f| f.k)
    }

    pub fn sum_k(&self) -> i64 {
        self.degrees().sum()
    }

    pub fn sum_y(&self) -> i64 {
        self.factors.iter().map(|f| f.y).sum()
    }

    pub fn min_k(&self) -> i64 {
        self.degrees().min().expect("non-empty")
    }

    /// `∏ k_i`.
    pub fn k_product(&self) -> BigInt {
        self.degrees().map(BigInt::from).product()
    }

    /// `Σ_i (∏_{j≠i} k_j) y_i`, the `H^{c−1}Σ` weight of `[X]` up to sign.
    pub fn weighted_y(&self) -> BigInt {
        (0..self.factors.len())
            .map(|i| {
                let others: BigInt = self
                    .factors
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, f)| BigInt::from(f.k))
                    .product();
                others * self.factors[i].y
            })
            .sum()
    }

    /// `Σ y_i / k_i`.
    pub fn slope_sum(&self) -> BigRational {
        self.factors.iter().map(|f| ratio(f.y, f.k)).sum()
    }

    /// Concatenation `A ⧺ B`: the complete intersection of both lists.
    pub fn concat(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self { factors }
    }
}

/// `[X] = ∏ (k_i H − y_i Σ) = (∏k_i) H^c − (Σ_i ∏_{j≠i}k_j y_i) H^{c−1}Σ`.
pub fn class_of_ci(spec: &CompleteIntersectionSpec, ambient: AmbientData) -> Result<HomogeneousClass> {
    spec.validate_for(&ambient)?;
    HomogeneousClass::new(
        ambient,
        spec.codim(),
        BigRational::from_integer(spec.k_product()),
        -BigRational::from_integer(spec.weighted_y()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amb(r: i64, d: i64) -> AmbientData {
        AmbientData::new(r, d).unwrap()
    }

    fn q(n: i64) -> BigRational {
        from_int(n)
    }

    #[test]
    fn generator_product() {
        let a = amb(4, 6);
        let p = HomogeneousClass::hyperplane(a).multiply(&HomogeneousClass::fibre(a)).unwrap();
        assert_eq!(p.codim(), 2);
        assert_eq!(*p.h_coeff(), q(0));
        assert_eq!(*p.sigma_coeff(), q(1));
    }

    #[test]
    fn top_power_is_rewritten() {
        let a = amb(3, 5);
        let p = HomogeneousClass::h_power(a, 2).multiply(&HomogeneousClass::hyperplane(a)).unwrap();
        assert_eq!(p.codim(), 3);
        assert_eq!(*p.h_coeff(), q(0));
        assert_eq!(*p.sigma_coeff(), q(5));
        assert_eq!(p.degree().unwrap(), q(5));
    }

    #[test]
    fn two_quadrics_class() {
        let a = amb(4, 6);
        let prod = HomogeneousClass::divisor(a, 2, 1)
            .multiply(&HomogeneousClass::divisor(a, 2, 0))
            .unwrap();
        assert_eq!((prod.h_coeff().clone(), prod.sigma_coeff().clone()), (q(4), q(-2)));
        let spec = CompleteIntersectionSpec::from_pairs(&[(2, 1), (2, 0)]).unwrap();
        assert_eq!(class_of_ci(&spec, a).unwrap(), prod);
    }

    #[test]
    fn degree_of_point_and_of_h_squared_x() {
        let a = amb(4, 6);
        assert_eq!(HomogeneousClass::h_power_sigma(a, 4).degree().unwrap(), q(1));
        let spec = CompleteIntersectionSpec::from_pairs(&[(2, 1), (2, 0)]).unwrap();
        let x = class_of_ci(&spec, a).unwrap();
        let top = HomogeneousClass::h_power(a, 2).multiply(&x).unwrap();
        assert_eq!(top.degree().unwrap(), q(22));
    }

    #[test]
    fn class_of_ci_examples() {
        let x = class_of_ci(&CompleteIntersectionSpec::from_pairs(&[(2, 0)]).unwrap(), amb(3, 0)).unwrap();
        assert_eq!((x.codim(), x.h_coeff().clone(), x.sigma_coeff().clone()), (1, q(2), q(0)));

        // (2H − Σ)(3H + Σ) = 6H² + (2 − 3)HΣ
        let spec = CompleteIntersectionSpec::from_pairs(&[(2, 1), (3, -1)]).unwrap();
        let x = class_of_ci(&spec, amb(5, 0)).unwrap();
        assert_eq!((x.h_coeff().clone(), x.sigma_coeff().clone()), (q(6), q(-1)));
    }

    #[test]
    fn overflowing_codimension_is_zero() {
        let a = amb(3, 2);
        let p = HomogeneousClass::h_power(a, 3).multiply(&HomogeneousClass::hyperplane(a)).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.codim(), 4);
    }

    #[test]
    fn errors() {
        assert_eq!(AmbientData::new(2, 0), Err(Error::RankTooSmall(2)));
        let a = amb(3, 1);
        let b = amb(4, 1);
        assert_eq!(
            HomogeneousClass::hyperplane(a).multiply(&HomogeneousClass::hyperplane(b)),
            Err(Error::AmbientMismatch)
        );
        assert!(matches!(HomogeneousClass::hyperplane(a).degree(), Err(Error::CodimMismatch { .. })));
        assert!(CompleteIntersectionSpec::from_pairs(&[(1, 0)]).is_err());
        assert!(CompleteIntersectionSpec::from_pairs(&[]).is_err());
        let spec = CompleteIntersectionSpec::from_pairs(&[(2, 0), (2, 0), (2, 0)]).unwrap();
        assert!(matches!(class_of_ci(&spec, a), Err(Error::CodimOutOfRange { .. })));
        assert!(HomogeneousClass::new(a, 0, q(1), q(1)).is_err());
    }
}
