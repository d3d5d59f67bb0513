//! f-positivity of `O_X(h)` for a relative complete intersection `f: X → B`.
//!
//! For a line bundle `L` on the `n`-dimensional total space, f-positivity is
//! `L^n >= n·(L_F^{n−1} / h⁰(F, L_F))·deg f_*L`. With `L = O_X(h)` every
//! ingredient has a closed form:
//!
//! - `L^n = h^n·(∏k_i·d − Σ_i ∏_{j≠i}k_j·y_i)`
//! - `L_F^{n−1} = h^{n−1}·∏k_i`
//! - `h⁰(F, L_F)` and `deg f_*L` from [`crate::pushforward`].
//!
//! The margin is reported cleared of the `h⁰` denominator. Grouping terms and
//! dividing by `h^{n−1}` gives the "grouped" margin
//!
//! ```text
//! (h/r)·h⁰(F,O_F(h))·[c∏k·d − r·Σ∏_{j≠i}k_j·y_i]
//!   + (n∏k/r)·Σ_I (−1)^{|I|} C(h−k_I+r−1, r−1)·(k_I·d − y_I·r)
//! ```
//!
//! whose second term dies for `h < min k_i`, so there the sign is the sign of
//! the bracket, i.e. of the slope condition `Σ y_i/k_i <= c·μ`.
//!
//! For large `h` the grouped margin is a polynomial ([`margin_polynomial`]).
//! Its degree-`(r−c)` terms cancel identically, and for `c >= 2` the sign of
//! the surviving leading coefficient is not always that of the bracket, so the
//! asymptotic verdict of [`asymptotic_classification`] follows the slope
//! condition while [`asymptotic_threshold`] reports what the polynomial
//! actually does.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::chowring::{AmbientData, CompleteIntersectionSpec};
use crate::error::{Error, Result};
use crate::exact::{from_bigint, from_int, ratio, sign};
use crate::poly::ExactPolynomial;
use crate::pushforward::{binom0, deg_pushforward, rank_fiber, subset_terms};

/// One evaluation of the cleared f-positivity inequality for `O_X(h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityMargin {
    pub h: i64,
    /// `L^n · h⁰(F, L_F)`
    #[serde(with = "crate::exact::serde_ratio")]
    pub lhs: BigRational,
    /// `n · L_F^{n−1} · deg f_*L`
    #[serde(with = "crate::exact::serde_ratio")]
    pub rhs: BigRational,
    #[serde(with = "crate::exact::serde_ratio")]
    pub margin: BigRational,
    /// `margin >= 0`; equality counts as f-positive.
    pub positive: bool,
}

impl PositivityMargin {
    fn new(h: i64, lhs: BigRational, rhs: BigRational) -> Self {
        let margin = &lhs - &rhs;
        let positive = !margin.is_negative();
        Self { h, lhs, rhs, margin, positive }
    }

    pub fn is_boundary(&self) -> bool {
        self.margin.is_zero()
    }
}

/// `c·μ − Σ y_i/k_i` and whether it is non-negative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeCondition {
    pub holds: bool,
    #[serde(with = "crate::exact::serde_ratio")]
    pub margin: BigRational,
}

/// How a given twist `h` relates to what the equivalence theorem covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HRegime {
    /// `1 <= h < min k_i`: the verdict equals the slope condition.
    BelowMinDegree,
    /// Neither below `min k_i` nor past a certified threshold; the verdict is
    /// whatever direct evaluation gives.
    InstanceSpecific,
    /// At or beyond a certified threshold: the sign is that of the margin
    /// polynomial's leading coefficient.
    Asymptotic,
}

/// Result of [`asymptotic_threshold`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticThreshold {
    /// Least `h >= 1` found such that the margin has sign `leading_sign` for every `h' >= h`.
    pub h0: i64,
    /// Where the root bound alone certifies the sign.
    pub certified_start: i64,
    pub leading_sign: i8,
}

/// Per-instance check of the four equivalent conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    /// (1) `Σ y_i/k_i <= c·μ`
    pub slope_condition_holds: bool,
    #[serde(with = "crate::exact::serde_ratio")]
    pub slope_margin: BigRational,
    /// (2) `O_X(1)` is f-positive
    pub f_positive_at_one: bool,
    /// (3) evaluations for every `1 <= h < min k_i`
    pub low_h_results: Vec<PositivityMargin>,
    pub low_h_positive: bool,
    /// (4) asymptotic f-positivity, as classified by [`asymptotic_classification`]
    pub asymptotic_positive: bool,
    pub consistent: bool,
    /// `c = r − 1`: fibres are finite schemes.
    pub zero_dimensional_fibres: bool,
    /// Sign of the leading coefficient of [`margin_polynomial`] (0 if it vanishes
    /// identically). Diagnostic only; not part of `consistent`.
    pub polynomial_leading_sign: i8,
}

fn checked(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> Result<i64> {
    spec.validate_for(ambient)?;
    Ok(ambient.r - spec.codim())
}

fn require_positive_h(h: i64) -> Result<()> {
    if h < 1 {
        return Err(Error::TwistOutOfRange { h, min: 1 });
    }
    Ok(())
}

fn big_pow(base: i64, exp: i64) -> BigInt {
    Pow::pow(BigInt::from(base), exp as u64)
}

/// `H_X^{r−c} = ∏k_i·d − Σ_i ∏_{j≠i}k_j·y_i`.
pub fn ci_top_degree(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> BigInt {
    spec.k_product() * ambient.d - spec.weighted_y()
}

/// `c·∏k_i·d − r·Σ_i ∏_{j≠i}k_j·y_i`; same sign as the slope-condition margin.
pub fn slope_bracket(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> BigInt {
    spec.k_product() * spec.codim() * ambient.d - spec.weighted_y() * ambient.r
}

/// `(h·H_X)^{r−c}`.
pub fn top_self_intersection(
    spec: &CompleteIntersectionSpec,
    ambient: &AmbientData,
    h: i64,
) -> Result<BigInt> {
    let n = checked(spec, ambient)?;
    require_positive_h(h)?;
    Ok(big_pow(h, n) * ci_top_degree(spec, ambient))
}

/// `H_F^{r−c−1} = ∏ k_i`, the degree of a fibre in `P^{r−1}`.
pub fn fiber_degree(spec: &CompleteIntersectionSpec) -> BigInt {
    spec.k_product()
}

pub fn f_positive_at(
    spec: &CompleteIntersectionSpec,
    ambient: &AmbientData,
    h: i64,
) -> Result<PositivityMargin> {
    margin_with_twist(spec, ambient, h, 0)
}

fn margin_with_twist(
    spec: &CompleteIntersectionSpec,
    ambient: &AmbientData,
    h: i64,
    m: i64,
) -> Result<PositivityMargin> {
    let n = checked(spec, ambient)?;
    require_positive_h(h)?;
    let rank = rank_fiber(spec, ambient.r, h)?;
    let deg = deg_pushforward(spec, ambient.r, ambient.d, h)?;
    let fibre_power = big_pow(h, n - 1) * fiber_degree(spec);
    // L' = L + m·F: L'^n = L^n + n·m·L_F^{n−1}, deg f_*L' = deg f_*L + m·h⁰
    let top = top_self_intersection(spec, ambient, h)? + &fibre_power * n * m;
    let deg = deg + &rank * m;
    let lhs = from_bigint(top * &rank);
    let rhs = from_bigint(fibre_power * n * deg);
    Ok(PositivityMargin::new(h, lhs, rhs))
}

/// Cleared margin of `O_X(h) ⊗ f*O_B(M)` with `deg M = m`. Independent of `m`.
pub fn margin_twisted(
    spec: &CompleteIntersectionSpec,
    ambient: &AmbientData,
    h: i64,
    m: i64,
) -> Result<BigRational> {
    Ok(margin_with_twist(spec, ambient, h, m)?.margin)
}

/// The grouped form of the margin (the cleared margin divided by `h^{r−c−1}`),
/// evaluated directly with the `C(n, m) = 0 for n < m` convention.
pub fn grouped_margin(spec: &CompleteIntersectionSpec, ambient: &AmbientData, h: i64) -> Result<BigRational> {
    let n = checked(spec, ambient)?;
    require_positive_h(h)?;
    let (r, d) = (ambient.r, ambient.d);
    let rank = rank_fiber(spec, r, h)?;
    let first = BigRational::new(rank * h * slope_bracket(spec, ambient), BigInt::from(r));
    let mut second = BigInt::zero();
    for term in subset_terms(spec)? {
        let b = binom0(h - term.k_sum + r - 1, r - 1)?;
        second += b * (term.k_sum * d - term.y_sum * r) * term.sign();
    }
    let second = BigRational::new(second * spec.k_product() * n, BigInt::from(r));
    Ok(first + second)
}

pub fn slope_condition(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> Result<SlopeCondition> {
    spec.validate_for(ambient)?;
    let margin = from_int(spec.codim()) * ambient.slope() - spec.slope_sum();
    Ok(SlopeCondition { holds: !margin.is_negative(), margin })
}

/// `C(x − k + r − 1, r − 1)` as a polynomial in `x`.
fn shifted_binomial(k: i64, r: i64) -> ExactPolynomial {
    let mut p = ExactPolynomial::constant(BigRational::one());
    let mut factorial = BigInt::one();
    for j in 1..r {
        p = &p * &ExactPolynomial::linear(from_int(j - k));
        factorial *= j;
    }
    p.scale(&BigRational::new(BigInt::one(), factorial))
}

/// The grouped margin as an exact polynomial in `h`, equal to
/// [`grouped_margin`] for every `h >= Σ k_i`.
pub fn margin_polynomial(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> Result<ExactPolynomial> {
    let n = checked(spec, ambient)?;
    let (r, d) = (ambient.r, ambient.d);
    let mut cache: HashMap<i64, ExactPolynomial> = HashMap::new();
    let mut rank = ExactPolynomial::zero();
    let mut second = ExactPolynomial::zero();
    for term in subset_terms(spec)? {
        let b = cache.entry(term.k_sum).or_insert_with(|| shifted_binomial(term.k_sum, r));
        let signed = b.scale(&from_int(term.sign()));
        rank = &rank + &signed;
        second = &second + &signed.scale(&from_int(term.k_sum * d - term.y_sum * r));
    }
    let first = (&ExactPolynomial::x() * &rank)
        .scale(&BigRational::new(slope_bracket(spec, ambient), BigInt::from(r)));
    let second = second.scale(&BigRational::new(spec.k_product() * n, BigInt::from(r)));
    Ok(&first + &second)
}

/// Asymptotic f-positivity of `O_X(1)`, decided by the slope condition.
pub fn asymptotic_classification(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> Result<bool> {
    Ok(slope_condition(spec, ambient)?.holds)
}

/// Sign of the leading coefficient of [`margin_polynomial`], `0` if the polynomial vanishes.
pub fn polynomial_leading_sign(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> Result<i8> {
    Ok(margin_polynomial(spec, ambient)?.leading_coefficient().map_or(0, sign))
}

/// Least `H0 >= 1` beyond which the margin keeps the sign of the polynomial's
/// leading coefficient.
///
/// The sign is certified from `max(Σk_i, ⌊Cauchy bound⌋ + 1)` upward by the root
/// bound, then pushed down by exact evaluation, at most `max_scan` steps.
pub fn asymptotic_threshold(
    spec: &CompleteIntersectionSpec,
    ambient: &AmbientData,
    max_scan: i64,
) -> Result<AsymptoticThreshold> {
    let poly = margin_polynomial(spec, ambient)?;
    let lead = poly.leading_coefficient().ok_or(Error::DegenerateLeadingCoefficient)?;
    let leading_sign = sign(lead);
    let root_bound = match poly.cauchy_bound() {
        Some(b) => b.floor().to_integer() + 1,
        None => BigInt::one(),
    };
    let root_bound = root_bound
        .to_i64()
        .ok_or_else(|| Error::ThresholdOverflow(root_bound.to_string()))?;
    let certified_start = root_bound.max(spec.sum_k()).max(1);

    let mut h0 = certified_start;
    let mut steps = 0;
    while h0 > 1 && steps < max_scan {
        if sign(&grouped_margin(spec, ambient, h0 - 1)?) != leading_sign {
            break;
        }
        h0 -= 1;
        steps += 1;
    }
    Ok(AsymptoticThreshold { h0, certified_start, leading_sign })
}

pub fn regime(spec: &CompleteIntersectionSpec, h: i64, threshold: Option<&AsymptoticThreshold>) -> HRegime {
    if h < spec.min_k() {
        HRegime::BelowMinDegree
    } else if threshold.is_some_and(|t| h >= t.h0) {
        HRegime::Asymptotic
    } else {
        HRegime::InstanceSpecific
    }
}

pub fn verify_theorem(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> Result<TheoremReport> {
    let slope = slope_condition(spec, ambient)?;
    let at_one = f_positive_at(spec, ambient, 1)?;
    let low_h_results = (1..spec.min_k())
        .map(|h| f_positive_at(spec, ambient, h))
        .collect::<Result<Vec<_>>>()?;
    let low_h_positive = low_h_results.iter().all(|m| m.positive);
    let asymptotic_positive = asymptotic_classification(spec, ambient)?;
    let consistent = at_one.positive == slope.holds
        && low_h_positive == slope.holds
        && asymptotic_positive == slope.holds;
    Ok(TheoremReport {
        slope_condition_holds: slope.holds,
        slope_margin: slope.margin,
        f_positive_at_one: at_one.positive,
        low_h_results,
        low_h_positive,
        asymptotic_positive,
        consistent,
        zero_dimensional_fibres: spec.codim() == ambient.r - 1,
        polynomial_leading_sign: polynomial_leading_sign(spec, ambient)?,
    })
}

/// `K_f ≡ a·H_X + m·F` with `a = Σk_i − r`, `m = d − Σy_i`.
pub fn canonical_class(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> Result<(i64, i64)> {
    spec.validate_for(ambient)?;
    Ok((spec.sum_k() - ambient.r, -(spec.sum_y() - ambient.d)))
}

/// f-positivity of `K_f`, when `K_f` is a positive multiple of `H_X` up to a
/// pullback from `B` (`Σk_i − r >= 1`). The pullback part does not change the
/// margin, so this is the margin of `O_X(Σk_i − r)`.
pub fn slope_inequality_check(
    spec: &CompleteIntersectionSpec,
    ambient: &AmbientData,
) -> Result<Option<PositivityMargin>> {
    let (a, _) = canonical_class(spec, ambient)?;
    if a < 1 {
        return Ok(None);
    }
    f_positive_at(spec, ambient, a).map(Some)
}

/// Slope condition on `μ(E)` rewritten over the integers; convenient for callers
/// that want `c·μ` itself.
pub fn c_mu(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> BigRational {
    ratio(spec.codim() * ambient.d, ambient.r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(pairs: &[(i64, i64)]) -> CompleteIntersectionSpec {
        CompleteIntersectionSpec::from_pairs(pairs).unwrap()
    }

    fn amb(r: i64, d: i64) -> AmbientData {
        AmbientData::new(r, d).unwrap()
    }

    fn worked() -> (CompleteIntersectionSpec, AmbientData) {
        (spec(&[(2, 1), (2, 0)]), amb(4, 6))
    }

    #[test]
    fn top_intersections() {
        let (s, a) = worked();
        assert_eq!(top_self_intersection(&s, &a, 1).unwrap(), BigInt::from(22));
        assert_eq!(top_self_intersection(&s, &a, 2).unwrap(), BigInt::from(88));
        assert_eq!(top_self_intersection(&spec(&[(2, 0)]), &amb(3, 5), 1).unwrap(), BigInt::from(10));
    }

    #[test]
    fn fibre_degrees() {
        assert_eq!(fiber_degree(&spec(&[(2, 1), (2, 0)])), BigInt::from(4));
        assert_eq!(fiber_degree(&spec(&[(3, 5)])), BigInt::from(3));
        assert_eq!(fiber_degree(&spec(&[(2, 0), (3, 0), (2, 0)])), BigInt::from(12));
    }

    #[test]
    fn margins_at_single_h() {
        let (s, a) = worked();
        let m = f_positive_at(&s, &a, 1).unwrap();
        assert_eq!(m.lhs, from_int(88));
        assert_eq!(m.rhs, from_int(48));
        assert_eq!(m.margin, from_int(40));
        assert!(m.positive);

        let m = f_positive_at(&spec(&[(2, 1)]), &amb(3, 0), 1).unwrap();
        assert_eq!(m.margin, from_int(-3));
        assert!(!m.positive);

        let m = f_positive_at(&spec(&[(2, 0)]), &amb(3, 0), 1).unwrap();
        assert!(m.is_boundary() && m.positive);
    }

    #[test]
    fn slope_conditions() {
        let (s, a) = worked();
        assert_eq!(slope_condition(&s, &a).unwrap(), SlopeCondition { holds: true, margin: ratio(5, 2) });
        let z = slope_condition(&spec(&[(2, 0), (3, 0)]), &amb(5, 0)).unwrap();
        assert!(z.holds && z.margin.is_zero());
        let f = slope_condition(&spec(&[(2, 1)]), &amb(3, 0)).unwrap();
        assert_eq!(f, SlopeCondition { holds: false, margin: ratio(-1, 2) });
    }

    #[test]
    fn polynomial_examples() {
        let (s, a) = worked();
        let p = margin_polynomial(&s, &a).unwrap();
        assert_eq!(p.eval_int(5), grouped_margin(&s, &a, 5).unwrap());
        assert_eq!(p.eval_int(5) * from_int(5), f_positive_at(&s, &a, 5).unwrap().margin);
        assert_eq!(p, ExactPolynomial::new(vec![from_int(-40), from_int(80)]));

        assert!(margin_polynomial(&spec(&[(3, 0), (2, 0)]), &amb(6, 0)).unwrap().is_zero());

        let p = margin_polynomial(&spec(&[(2, 1)]), &amb(3, 0)).unwrap();
        assert!(p.leading_coefficient().unwrap().is_negative());
        assert_eq!(p, ExactPolynomial::new(vec![from_int(0), from_int(-3)]));
    }

    #[test]
    fn asymptotics() {
        let (s, a) = worked();
        assert!(asymptotic_classification(&s, &a).unwrap());
        assert!(asymptotic_classification(&spec(&[(2, 0)]), &amb(3, 0)).unwrap());
        assert!(!asymptotic_classification(&spec(&[(2, 1)]), &amb(3, 0)).unwrap());

        let t = asymptotic_threshold(&s, &a, 100).unwrap();
        assert_eq!(t.leading_sign, 1);
        assert_eq!(t.h0, 1);
        for h in t.h0..t.h0 + 50 {
            assert!(f_positive_at(&s, &a, h).unwrap().margin.is_positive());
        }
        let t = asymptotic_threshold(&spec(&[(2, 1)]), &amb(3, 0), 100).unwrap();
        assert_eq!(t.leading_sign, -1);
        for h in t.h0..t.h0 + 50 {
            assert!(f_positive_at(&spec(&[(2, 1)]), &amb(3, 0), h).unwrap().margin.is_negative());
        }
        assert_eq!(
            asymptotic_threshold(&spec(&[(2, 0)]), &amb(3, 0), 100),
            Err(Error::DegenerateLeadingCoefficient)
        );
    }

    #[test]
    fn theorem_reports() {
        let (s, a) = worked();
        let rep = verify_theorem(&s, &a).unwrap();
        assert!(rep.slope_condition_holds && rep.f_positive_at_one && rep.low_h_positive && rep.asymptotic_positive);
        assert!(rep.consistent);
        assert_eq!(rep.low_h_results.len(), 1);

        let rep = verify_theorem(&spec(&[(2, 1)]), &amb(3, 0)).unwrap();
        assert!(!rep.slope_condition_holds && !rep.f_positive_at_one && !rep.low_h_positive && !rep.asymptotic_positive);
        assert!(rep.consistent);
    }

    #[test]
    fn canonical_classes() {
        let (s, a) = worked();
        assert_eq!(canonical_class(&s, &a).unwrap(), (0, 5));
        assert_eq!(canonical_class(&spec(&[(4, 2)]), &amb(3, 5)).unwrap(), (1, 3));
        assert_eq!(AmbientData::new(2, 0), Err(Error::RankTooSmall(2)));
    }

    #[test]
    fn slope_inequality() {
        let m = slope_inequality_check(&spec(&[(4, 2)]), &amb(3, 5)).unwrap().unwrap();
        assert_eq!(m.h, 1);
        assert!(m.positive);
        let (s, a) = worked();
        assert_eq!(slope_inequality_check(&s, &a).unwrap(), None);
        let m = slope_inequality_check(&spec(&[(3, 0), (3, 0)]), &amb(4, 0)).unwrap().unwrap();
        assert_eq!(m.h, 2);
        assert!(m.positive && m.is_boundary());
    }

    #[test]
    fn twists_cancel() {
        let (s, a) = worked();
        assert_eq!(margin_twisted(&s, &a, 1, 0).unwrap(), f_positive_at(&s, &a, 1).unwrap().margin);
        assert_eq!(margin_twisted(&s, &a, 1, 7).unwrap(), from_int(40));
        assert_eq!(margin_twisted(&spec(&[(2, 1)]), &amb(3, 0), 1, -3).unwrap(), from_int(-3));
    }

    #[test]
    fn regimes() {
        let (s, a) = worked();
        let t = asymptotic_threshold(&s, &a, 10).unwrap();
        assert_eq!(regime(&s, 1, Some(&t)), HRegime::BelowMinDegree);
        assert_eq!(regime(&s, 3, Some(&t)), HRegime::Asymptotic);
        assert_eq!(regime(&s, 3, None), HRegime::InstanceSpecific);
    }

    #[test]
    fn invalid_inputs() {
        let (s, a) = worked();
        assert!(matches!(f_positive_at(&s, &a, 0), Err(Error::TwistOutOfRange { .. })));
        let too_many = spec(&[(2, 0), (2, 0), (2, 0)]);
        assert!(matches!(slope_condition(&too_many, &amb(3, 0)), Err(Error::CodimOutOfRange { .. })));
    }
}
