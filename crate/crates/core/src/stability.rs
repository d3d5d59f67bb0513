//! Hilbert–Mumford arithmetic with degrees of contact.
//!
//! A subvariety `T ⊂ P^n` is (semi)stable against a weighted filtration with
//! weights `r_0..r_n` when `e_F(T) / ((dim T + 1)·deg T)` is `<` (`<=`) the
//! average weight `Σr_i / (n+1)`. Degrees of contact are supplied, not
//! computed; this module checks verdicts for the supplied filtration and
//! propagates them through the Bézout-type formula
//! `e_F(Y·Z) = deg Y·e_F(Z) + deg Z·e_F(Y) − deg Y·deg Z·Σr_i`.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::chowring::{AmbientData, CompleteIntersectionSpec};
use crate::error::{Error, Result};
use crate::exact::from_int;
use crate::positivity::{asymptotic_threshold, slope_condition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedFiltration {
    /// Ambient projective dimension `n`.
    pub n: i64,
    #[serde(with = "crate::exact::serde_ratio_vec")]
    pub weights: Vec<BigRational>,
}

impl WeightedFiltration {
    pub fn new(n: i64, weights: Vec<BigRational>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidFiltration(format!("ambient dimension {n} must be >= 1")));
        }
        if weights.len() as i64 != n + 1 {
            return Err(Error::InvalidFiltration(format!(
                "expected {} weights for P^{n}, got {}",
                n + 1,
                weights.len()
            )));
        }
        Ok(Self { n, weights })
    }

    pub fn from_ints(weights: &[i64]) -> Result<Self> {
        Self::new(weights.len() as i64 - 1, weights.iter().map(|&w| from_int(w)).collect())
    }

    pub fn weight_sum(&self) -> BigRational {
        self.weights.iter().sum()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self { n: self.n, weights: self.weights.iter().map(|w| w * factor).collect() }
    }
}

/// `(dim T, deg T, e_F(T))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactDatum {
    pub dim: i64,
    pub deg: i64,
    #[serde(with = "crate::exact::serde_ratio")]
    pub e: BigRational,
}

impl ContactDatum {
    pub fn new(dim: i64, deg: i64, e: BigRational) -> Result<Self> {
        if dim < 0 {
            return Err(Error::InvalidContact(format!("negative dimension {dim}")));
        }
        if deg < 1 {
            return Err(Error::InvalidContact(format!("degree {deg} must be >= 1")));
        }
        Ok(Self { dim, deg, e })
    }

    pub fn from_ints(dim: i64, deg: i64, e: i64) -> Result<Self> {
        Self::new(dim, deg, from_int(e))
    }

    pub fn check_in(&self, filtration: &WeightedFiltration) -> Result<()> {
        Self::new(self.dim, self.deg, self.e.clone())?;
        if self.dim > filtration.n {
            return Err(Error::InvalidContact(format!(
                "dimension {} exceeds ambient dimension {}",
                self.dim, filtration.n
            )));
        }
        Ok(())
    }
}

/// Verdict against one weighted filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stable,
    SemistableBoundary,
    Unstable,
}

impl Verdict {
    pub fn is_unstable(self) -> bool {
        self == Verdict::Unstable
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "stable",
            Verdict::SemistableBoundary => "semistable (boundary)",
            Verdict::Unstable => "unstable",
        })
    }
}

/// `e / ((dim + 1)·deg)`.
pub fn hm_slope(datum: &ContactDatum) -> BigRational {
    &datum.e / from_int((datum.dim + 1) * datum.deg)
}

/// `Σr_i / (n + 1)`.
pub fn hm_bound(filtration: &WeightedFiltration) -> BigRational {
    filtration.weight_sum() / from_int(filtration.n + 1)
}

pub fn is_semistable(datum: &ContactDatum, filtration: &WeightedFiltration) -> Verdict {
    match hm_slope(datum).cmp(&hm_bound(filtration)) {
        Ordering::Less => Verdict::Stable,
        Ordering::Equal => Verdict::SemistableBoundary,
        Ordering::Greater => Verdict::Unstable,
    }
}

fn intersection_dim(yd: &ContactDatum, zd: &ContactDatum, filtration: &WeightedFiltration) -> Result<i64> {
    let dim = yd.dim + zd.dim - filtration.n;
    if dim < 0 {
        return Err(Error::ImproperIntersection { y: yd.dim, z: zd.dim, n: filtration.n });
    }
    Ok(dim)
}

/// Contact datum of the intersection cycle `Y·Z`.
pub fn bezout_contact(
    yd: &ContactDatum,
    zd: &ContactDatum,
    filtration: &WeightedFiltration,
) -> Result<ContactDatum> {
    yd.check_in(filtration)?;
    zd.check_in(filtration)?;
    let dim = intersection_dim(yd, zd, filtration)?;
    let (dy, dz) = (from_int(yd.deg), from_int(zd.deg));
    let e = &dy * &zd.e + &dz * &yd.e - dy * dz * filtration.weight_sum();
    ContactDatum::new(dim, yd.deg * zd.deg, e)
}

/// Each line of the slope computation for `Y·Z`, with `m = dim(Y·Z) + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationChain {
    /// `e_F(Y·Z) / (m·deg(Y·Z))`
    #[serde(with = "crate::exact::serde_ratio")]
    pub intersection_slope: BigRational,
    /// `e_F(Y) / (m·deg Y)`
    #[serde(with = "crate::exact::serde_ratio")]
    pub y_term: BigRational,
    /// `e_F(Z) / (m·deg Z)`
    #[serde(with = "crate::exact::serde_ratio")]
    pub z_term: BigRational,
    /// `Σr_i / m`
    #[serde(with = "crate::exact::serde_ratio")]
    pub weight_term: BigRational,
    /// `((y+1) + (z+1))·Σr_i / (m·(n+1)) − Σr_i / m`, the value the terms are
    /// bounded by when both inputs are semistable.
    #[serde(with = "crate::exact::serde_ratio")]
    pub semistable_upper_bound: BigRational,
    #[serde(with = "crate::exact::serde_ratio")]
    pub bound: BigRational,
    /// `intersection_slope = y_term + z_term − weight_term`
    pub decomposition_balances: bool,
    /// `semistable_upper_bound = bound`
    pub upper_bound_collapses: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationReport {
    pub y_verdict: Verdict,
    pub z_verdict: Verdict,
    pub intersection: ContactDatum,
    pub intersection_verdict: Verdict,
    pub chain: PropagationChain,
    /// Both inputs are at worst boundary-semistable.
    pub semistable_clause_applies: bool,
    /// ...and at least one is strictly stable.
    pub stable_clause_applies: bool,
    /// Every clause that applies is satisfied and the chain identities balance.
    pub holds: bool,
}

pub fn propagation_check(
    yd: &ContactDatum,
    zd: &ContactDatum,
    filtration: &WeightedFiltration,
) -> Result<PropagationReport> {
    let intersection = bezout_contact(yd, zd, filtration)?;
    let y_verdict = is_semistable(yd, filtration);
    let z_verdict = is_semistable(zd, filtration);
    let intersection_verdict = is_semistable(&intersection, filtration);

    let n = filtration.n;
    let m = from_int(intersection.dim + 1);
    let sum = filtration.weight_sum();
    let y_term = &yd.e / (&m * from_int(yd.deg));
    let z_term = &zd.e / (&m * from_int(zd.deg));
    let weight_term = &sum / &m;
    let intersection_slope = hm_slope(&intersection);
    let semistable_upper_bound =
        from_int(yd.dim + zd.dim + 2) * &sum / (&m * from_int(n + 1)) - &weight_term;
    let bound = hm_bound(filtration);
    let chain = PropagationChain {
        decomposition_balances: intersection_slope == &y_term + &z_term - &weight_term,
        upper_bound_collapses: semistable_upper_bound == bound,
        intersection_slope,
        y_term,
        z_term,
        weight_term,
        semistable_upper_bound,
        bound,
    };

    let semistable_clause_applies = !y_verdict.is_unstable() && !z_verdict.is_unstable();
    let stable_clause_applies =
        semistable_clause_applies && (y_verdict == Verdict::Stable || z_verdict == Verdict::Stable);
    let holds = chain.decomposition_balances
        && chain.upper_bound_collapses
        && (!semistable_clause_applies || !intersection_verdict.is_unstable())
        && (!stable_clause_applies || intersection_verdict == Verdict::Stable);
    Ok(PropagationReport {
        y_verdict,
        z_verdict,
        intersection,
        intersection_verdict,
        chain,
        semistable_clause_applies,
        stable_clause_applies,
        holds,
    })
}

/// What can be said about large `h` once the slope condition fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum AsymptoticInstability {
    /// The margin is negative for every `h >= from_h`, so fibres are Chow
    /// unstable there.
    Certified { from_h: i64 },
    /// The margin polynomial is eventually non-negative; no instability follows.
    NotCertified { leading_sign: i8 },
    /// The margin polynomial vanishes identically.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstabilityReport {
    pub slope_condition_holds: bool,
    #[serde(with = "crate::exact::serde_ratio")]
    pub slope_margin: BigRational,
    /// Inclusive range `[1, min k_i − 1]` of twists with Chow-unstable fibres.
    pub unstable_low_range: Option<(i64, i64)>,
    pub asymptotic: Option<AsymptoticInstability>,
}

impl InstabilityReport {
    pub fn has_conclusion(&self) -> bool {
        self.unstable_low_range.is_some()
    }
}

/// Chow instability of the fibres under `O_{P^{r−1}}(h)`, read off from a
/// failing slope condition: a semistable general fibre would force
/// f-positivity, which fails for `h < min k_i` and, when the margin
/// polynomial's leading coefficient is negative, for every `h` past the
/// certified threshold.
pub fn instability_report(
    spec: &CompleteIntersectionSpec,
    ambient: &AmbientData,
    max_scan: i64,
) -> Result<InstabilityReport> {
    let slope = slope_condition(spec, ambient)?;
    if slope.holds {
        return Ok(InstabilityReport {
            slope_condition_holds: true,
            slope_margin: slope.margin,
            unstable_low_range: None,
            asymptotic: None,
        });
    }
    let asymptotic = match asymptotic_threshold(spec, ambient, max_scan) {
        Ok(t) if t.leading_sign < 0 => AsymptoticInstability::Certified { from_h: t.h0 },
        Ok(t) => AsymptoticInstability::NotCertified { leading_sign: t.leading_sign },
        Err(Error::DegenerateLeadingCoefficient) => AsymptoticInstability::Degenerate,
        Err(e) => return Err(e),
    };
    Ok(InstabilityReport {
        slope_condition_holds: false,
        slope_margin: slope.margin,
        unstable_low_range: Some((1, spec.min_k() - 1)),
        asymptotic: Some(asymptotic),
    })
}

/// Verdict invariance helper: both sides of the criterion scale by `λ`.
pub fn scale_datum(datum: &ContactDatum, factor: &BigRational) -> ContactDatum {
    ContactDatum { dim: datum.dim, deg: datum.deg, e: &datum.e * factor }
}

pub fn is_zero_weight(filtration: &WeightedFiltration) -> bool {
    filtration.weights.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::positivity::f_positive_at;
    use num_traits::Signed;

    fn cd(dim: i64, deg: i64, e: i64) -> ContactDatum {
        ContactDatum::from_ints(dim, deg, e).unwrap()
    }

    fn uniform3() -> WeightedFiltration {
        WeightedFiltration::from_ints(&[1, 1, 1, 1]).unwrap()
    }

    #[test]
    fn slopes_and_bounds() {
        assert_eq!(hm_slope(&cd(2, 2, 6)), from_int(1));
        assert_eq!(hm_slope(&cd(0, 1, 0)), from_int(0));
        assert_eq!(hm_slope(&cd(1, 4, 8)), from_int(1));
        assert_eq!(hm_bound(&uniform3()), from_int(1));
        assert_eq!(hm_bound(&WeightedFiltration::from_ints(&[0, 0, 0]).unwrap()), from_int(0));
        assert_eq!(hm_bound(&WeightedFiltration::from_ints(&[0, 1, 2, 3]).unwrap()), ratio(3, 2));
    }

    #[test]
    fn verdicts() {
        assert_eq!(is_semistable(&cd(2, 2, 6), &uniform3()), Verdict::SemistableBoundary);
        assert_eq!(is_semistable(&cd(2, 2, 5), &uniform3()), Verdict::Stable);
        assert_eq!(is_semistable(&cd(2, 2, 7), &uniform3()), Verdict::Unstable);
    }

    #[test]
    fn bezout() {
        let f = uniform3();
        assert_eq!(bezout_contact(&cd(2, 2, 6), &cd(2, 2, 6), &f).unwrap(), cd(1, 4, 8));
        assert_eq!(bezout_contact(&cd(2, 2, 5), &cd(2, 2, 6), &f).unwrap(), cd(1, 4, 6));
        let zero = WeightedFiltration::from_ints(&[0, 0, 0]).unwrap();
        assert_eq!(bezout_contact(&cd(1, 1, 0), &cd(1, 1, 0), &zero).unwrap(), cd(0, 1, 0));
        assert_eq!(
            bezout_contact(&cd(1, 1, 0), &cd(1, 1, 0), &f),
            Err(Error::ImproperIntersection { y: 1, z: 1, n: 3 })
        );
    }

    #[test]
    fn propagation() {
        let f = uniform3();
        let rep = propagation_check(&cd(2, 2, 6), &cd(2, 2, 6), &f).unwrap();
        assert_eq!(rep.intersection_verdict, Verdict::SemistableBoundary);
        assert_eq!(rep.chain.intersection_slope, from_int(1));
        assert!(rep.holds && rep.semistable_clause_applies && !rep.stable_clause_applies);

        let rep = propagation_check(&cd(2, 2, 5), &cd(2, 2, 6), &f).unwrap();
        assert_eq!(rep.intersection_verdict, Verdict::Stable);
        assert_eq!(rep.chain.intersection_slope, ratio(6, 8));
        assert!(rep.holds && rep.stable_clause_applies);

        let rep = propagation_check(&cd(2, 2, 9), &cd(2, 2, 6), &f).unwrap();
        assert!(!rep.semistable_clause_applies);
        assert!(rep.holds);
    }

    #[test]
    fn invalid_data() {
        assert!(ContactDatum::from_ints(1, 0, 0).is_err());
        assert!(ContactDatum::from_ints(-1, 1, 0).is_err());
        assert!(WeightedFiltration::new(0, vec![from_int(1)]).is_err());
        assert!(WeightedFiltration::new(2, vec![from_int(1)]).is_err());
        assert!(bezout_contact(&cd(4, 1, 0), &cd(3, 1, 0), &uniform3()).is_err());
    }

    #[test]
    fn instability() {
        let spec = CompleteIntersectionSpec::from_pairs(&[(2, 1)]).unwrap();
        let amb = AmbientData::new(3, 0).unwrap();
        let rep = instability_report(&spec, &amb, 100).unwrap();
        assert_eq!(rep.unstable_low_range, Some((1, 1)));
        let Some(AsymptoticInstability::Certified { from_h }) = rep.asymptotic else {
            panic!("expected a certified range, got {:?}", rep.asymptotic);
        };
        for h in from_h..from_h + 50 {
            assert!(f_positive_at(&spec, &amb, h).unwrap().margin.is_negative());
        }

        let spec = CompleteIntersectionSpec::from_pairs(&[(2, 1), (2, 0)]).unwrap();
        let rep = instability_report(&spec, &AmbientData::new(4, 6).unwrap(), 100).unwrap();
        assert!(!rep.has_conclusion() && rep.asymptotic.is_none());

        let spec = CompleteIntersectionSpec::from_pairs(&[(2, 1)]).unwrap();
        let rep = instability_report(&spec, &AmbientData::new(4, 2).unwrap(), 100).unwrap();
        assert!(rep.slope_margin.is_zero() && !rep.has_conclusion());
    }
}
