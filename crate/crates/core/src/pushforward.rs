//! Koszul-resolution arithmetic for `f: X → B`.
//!
//! Pushing the Koszul resolution of `I_X(h)` forward along `π` turns both the
//! fibre Hilbert function `h⁰(F, O_F(h))` and `deg f_*O_X(h)` into alternating
//! sums over subsets `I ⊆ {1..c}` of symmetric-power data. Those sums are
//! evaluated term by term here; [`hilbert_rank_oracle`] recomputes the ranks
//! from the power series `∏(1 − t^{k_i}) / (1 − t)^r` without any binomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chowring::CompleteIntersectionSpec;
use crate::error::{Error, Result};

/// Subset enumeration refuses more factors than this.
pub const MAX_FACTORS: usize = 20;

/// `(|I|, k_I, y_I)` for one subset `I` of the factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsetTerm {
    pub length: usize,
    pub k_sum: i64,
    pub y_sum: i64,
}

impl SubsetTerm {
    /// `(−1)^{|I|}`.
    pub fn sign(&self) -> i64 {
        if self.length.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// `C(n, m)` with the convention `C(n, m) = 0` whenever `n < m`.
pub fn binom0(n: i64, m: i64) -> Result<BigInt> {
    if m < 0 {
        return Err(Error::NegativeBinomialIndex(m));
    }
    if n < m {
        return Ok(BigInt::zero());
    }
    let m = m.min(n - m);
    let mut acc = BigInt::one();
    for i in 0..m {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// All `2^c` subsets, in binary-counter order (bit `i` selects factor `i`).
pub fn subset_terms(spec: &CompleteIntersectionSpec) -> Result<Vec<SubsetTerm>> {
    let factors = spec.factors();
    if factors.len() > MAX_FACTORS {
        return Err(Error::TooManyFactors { count: factors.len(), limit: MAX_FACTORS });
    }
    Ok((0u32..1 << factors.len())
        .map(|mask| {
            let mut term = SubsetTerm { length: 0, k_sum: 0, y_sum: 0 };
            for (i, f) in factors.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    term.length += 1;
                    term.k_sum += f.k;
                    term.y_sum += f.y;
                }
            }
            term
        })
        .collect())
}

/// `deg(Sym^a E ⊗ O_B(−M)) = C(a+r−1, r−1)·(a·d − y·r)/r`, zero for `a < 0`.
pub fn deg_sym(a: i64, r: i64, d: i64, y: i64) -> Result<BigRational> {
    if r < 1 {
        return Err(Error::RankTooSmall(r));
    }
    if a < 0 {
        return Ok(BigRational::zero());
    }
    let b = binom0(a + r - 1, r - 1)?;
    Ok(BigRational::new(b * (a * d - y * r), BigInt::from(r)))
}

/// `h⁰(F, O_F(h)) = rank f_*O_X(h)` by inclusion–exclusion over the Koszul terms.
pub fn rank_fiber(spec: &CompleteIntersectionSpec, r: i64, h: i64) -> Result<BigInt> {
    if h < 0 {
        return Err(Error::TwistOutOfRange { h, min: 0 });
    }
    let mut total = BigInt::zero();
    for term in subset_terms(spec)? {
        total += binom0(h - term.k_sum + r - 1, r - 1)? * term.sign();
    }
    Ok(total)
}

/// Coefficient of `t^h` in `∏(1 − t^{k_i}) / (1 − t)^r`, by truncated series arithmetic.
pub fn hilbert_rank_oracle(spec: &CompleteIntersectionSpec, r: i64, h: i64) -> Result<BigInt> {
    if h < 0 {
        return Err(Error::TwistOutOfRange { h, min: 0 });
    }
    let len = h as usize + 1;
    let mut series = vec![BigInt::zero(); len];
    series[0] = BigInt::one();
    // multiplying by 1/(1 − t) is a running sum
    for _ in 0..r {
        for i in 1..len {
            let prev = series[i - 1].clone();
            series[i] += prev;
        }
    }
    for k in spec.degrees() {
        let k = k as usize;
        for i in (k..len).rev() {
            let shifted = series[i - k].clone();
            series[i] -= shifted;
        }
    }
    Ok(series.swap_remove(h as usize))
}

/// `deg f_*O_X(h)` for `h >= 1`:
/// `Σ_I (−1)^{|I|} C(h−k_I+r−1, r−1)·((h−k_I)d + y_I r)/r`.
///
/// The result is the degree of a vector bundle on `B`; a non-integral value
/// is reported as [`Error::NonIntegralDegree`].
pub fn deg_pushforward(spec: &CompleteIntersectionSpec, r: i64, d: i64, h: i64) -> Result<BigInt> {
    if h < 1 {
        return Err(Error::TwistOutOfRange { h, min: 1 });
    }
    let mut numer = BigInt::zero();
    for term in subset_terms(spec)? {
        let a = h - term.k_sum;
        let b = binom0(a + r - 1, r - 1)?;
        numer += b * (a * d + term.y_sum * r) * term.sign();
    }
    let (q, rem) = numer.div_rem(&BigInt::from(r));
    if !rem.is_zero() {
        return Err(Error::NonIntegralDegree(format!("{numer}/{r}")));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{from_int, ratio};

    fn spec(pairs: &[(i64, i64)]) -> CompleteIntersectionSpec {
        CompleteIntersectionSpec::from_pairs(pairs).unwrap()
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binom0(5, 3).unwrap(), BigInt::from(10));
        assert_eq!(binom0(2, 3).unwrap(), BigInt::zero());
        assert_eq!(binom0(-2, 2).unwrap(), BigInt::zero());
        assert_eq!(binom0(7, 0).unwrap(), BigInt::one());
        assert_eq!(binom0(3, -1), Err(Error::NegativeBinomialIndex(-1)));
    }

    #[test]
    fn subsets() {
        let one = subset_terms(&spec(&[(2, 1)])).unwrap();
        assert_eq!(
            one,
            vec![
                SubsetTerm { length: 0, k_sum: 0, y_sum: 0 },
                SubsetTerm { length: 1, k_sum: 2, y_sum: 1 }
            ]
        );
        let two = subset_terms(&spec(&[(2, 1), (2, 0)])).unwrap();
        let triples: Vec<_> = two.iter().map(|t| (t.length, t.k_sum, t.y_sum)).collect();
        assert_eq!(triples, vec![(0, 0, 0), (1, 2, 1), (1, 2, 0), (2, 4, 1)]);

        let three = subset_terms(&spec(&[(2, 0), (3, 0), (4, 0)])).unwrap();
        let mut by_len = [0; 4];
        for t in &three {
            by_len[t.length] += 1;
        }
        assert_eq!(by_len, [1, 3, 3, 1]);

        let big = CompleteIntersectionSpec::from_pairs(&[(2, 0); 21]).unwrap();
        assert!(matches!(subset_terms(&big), Err(Error::TooManyFactors { .. })));
    }

    #[test]
    fn symmetric_power_degrees() {
        assert_eq!(deg_sym(1, 3, 5, 0).unwrap(), from_int(5));
        assert_eq!(deg_sym(-1, 3, 5, 2).unwrap(), from_int(0));
        assert_eq!(deg_sym(2, 3, 5, 0).unwrap(), from_int(20));
        assert_eq!(deg_sym(1, 2, 3, 0).unwrap(), ratio(3, 1));
        assert_eq!(deg_sym(0, 3, 5, 2).unwrap(), from_int(-2));
    }

    #[test]
    fn fibre_ranks() {
        assert_eq!(rank_fiber(&spec(&[(2, 0)]), 3, 1).unwrap(), BigInt::from(3));
        assert_eq!(rank_fiber(&spec(&[(2, 0)]), 3, 2).unwrap(), BigInt::from(5));
        assert_eq!(rank_fiber(&spec(&[(2, 1), (2, 0)]), 4, 1).unwrap(), BigInt::from(4));
        assert!(rank_fiber(&spec(&[(2, 0)]), 3, -1).is_err());
    }

    #[test]
    fn series_oracle() {
        assert_eq!(hilbert_rank_oracle(&spec(&[(2, 0)]), 3, 0).unwrap(), BigInt::one());
        assert_eq!(hilbert_rank_oracle(&spec(&[(2, 1), (2, 0)]), 4, 2).unwrap(), BigInt::from(8));
        assert_eq!(hilbert_rank_oracle(&spec(&[(5, 0), (3, 0)]), 7, 0).unwrap(), BigInt::one());
        assert_eq!(hilbert_rank_oracle(&spec(&[(2, 0)]), 3, 2).unwrap(), BigInt::from(5));
    }

    #[test]
    fn pushforward_degrees() {
        assert_eq!(deg_pushforward(&spec(&[(2, 1)]), 3, 5, 1).unwrap(), BigInt::from(5));
        assert_eq!(deg_pushforward(&spec(&[(2, 1)]), 3, 5, 2).unwrap(), BigInt::from(19));
        assert_eq!(deg_pushforward(&spec(&[(2, 1), (2, 0)]), 4, 6, 1).unwrap(), BigInt::from(6));
        assert_eq!(
            deg_pushforward(&spec(&[(2, 1)]), 3, 5, 0),
            Err(Error::TwistOutOfRange { h: 0, min: 1 })
        );
    }
}
