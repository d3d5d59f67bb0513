//! Cones of codimension-`c` classes in the two-dimensional space `N^c(P)`.
//!
//! Every cone here is spanned by `H^{c−1}Σ` and `H^c − ν·H^{c−1}Σ` for a
//! single rational `ν`, so a cone is just `ν` and membership of
//! `a·H^c + b·H^{c−1}Σ` is `a >= 0 && b + a·ν >= 0`. Larger `ν` means a
//! larger cone.
//!
//! The pseudoeffective and nef cones come from the virtual slopes of `E`
//! (Harder–Narasimhan slopes repeated by rank): `ν_pseff(c)` is the sum of the
//! `c` largest, `ν_nef(c)` the sum of the `c` smallest. The intermediate cone
//! `B` has `ν = c·μ(E)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chowring::{class_of_ci, AmbientData, CompleteIntersectionSpec, HomogeneousClass};
use crate::error::{Error, Result};
use crate::exact::{from_int, ratio};
use crate::positivity::slope_condition;

/// One graded piece `E_j / E_{j−1}` of the Harder–Narasimhan filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HNPiece {
    pub rank: i64,
    pub degree: i64,
}

impl HNPiece {
    pub fn slope(&self) -> BigRational {
        ratio(self.degree, self.rank)
    }
}

/// Harder–Narasimhan data of `E`: graded pieces with strictly decreasing slopes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<HNPiece>", into = "Vec<HNPiece>")]
pub struct HNData {
    pieces: Vec<HNPiece>,
}

impl TryFrom<Vec<HNPiece>> for HNData {
    type Error = Error;

    fn try_from(pieces: Vec<HNPiece>) -> Result<Self> {
        Self::new(pieces)
    }
}

impl From<HNData> for Vec<HNPiece> {
    fn from(hn: HNData) -> Self {
        hn.pieces
    }
}

impl HNData {
    pub fn new(pieces: Vec<HNPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidHarderNarasimhan("no pieces".into()));
        }
        if let Some(p) = pieces.iter().find(|p| p.rank < 1) {
            return Err(Error::InvalidHarderNarasimhan(format!("piece rank {} is not positive", p.rank)));
        }
        for w in pieces.windows(2) {
            if w[1].slope() >= w[0].slope() {
                return Err(Error::InvalidHarderNarasimhan(format!(
                    "slopes must strictly decrease, got {} then {}",
                    w[0].slope(),
                    w[1].slope()
                )));
            }
        }
        Ok(Self { pieces })
    }

    /// Pieces given as `(rank, slope)`; each `rank·slope` must be an integer.
    pub fn from_slopes(pieces: &[(i64, BigRational)]) -> Result<Self> {
        let pieces = pieces
            .iter()
            .map(|(rank, slope)| {
                let deg = slope * from_int(*rank);
                if !deg.is_integer() {
                    return Err(Error::InvalidHarderNarasimhan(format!(
                        "rank {rank} times slope {slope} is not an integer degree"
                    )));
                }
                Ok(HNPiece { rank: *rank, degree: deg.to_integer().try_into().map_err(|_| {
                    Error::InvalidHarderNarasimhan("degree out of range".into())
                })? })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pieces)
    }

    /// The semistable case: a single piece.
    pub fn semistable(r: i64, d: i64) -> Result<Self> {
        Self::new(vec![HNPiece { rank: r, degree: d }])
    }

    pub fn pieces(&self) -> &[HNPiece] {
        &self.pieces
    }

    /// `ℓ`, the number of graded pieces.
    pub fn length(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_semistable(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn rank(&self) -> i64 {
        self.pieces.iter().map(|p| p.rank).sum()
    }

    pub fn degree(&self) -> i64 {
        self.pieces.iter().map(|p| p.degree).sum()
    }

    pub fn ambient(&self) -> Result<AmbientData> {
        AmbientData::new(self.rank(), self.degree())
    }

    /// Ranks must sum to `r` and degrees to `d`.
    pub fn check_against(&self, ambient: &AmbientData) -> Result<()> {
        if self.rank() != ambient.r {
            return Err(Error::InvalidHarderNarasimhan(format!(
                "piece ranks sum to {}, bundle rank is {}",
                self.rank(),
                ambient.r
            )));
        }
        if self.degree() != ambient.d {
            return Err(Error::InvalidHarderNarasimhan(format!(
                "piece degrees sum to {}, bundle degree is {}",
                self.degree(),
                ambient.d
            )));
        }
        Ok(())
    }
}

/// `<H^{c−1}Σ, H^c − ν·H^{c−1}Σ>` in `N^c(P)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub ambient: AmbientData,
    pub codim: i64,
    #[serde(with = "crate::exact::serde_ratio")]
    pub nu: BigRational,
}

impl ConeSpec {
    pub fn sigma_generator(&self) -> HomogeneousClass {
        HomogeneousClass::h_power_sigma(self.ambient, self.codim)
    }

    pub fn mixed_generator(&self) -> HomogeneousClass {
        HomogeneousClass::new(self.ambient, self.codim, BigRational::from_integer(BigInt::from(1)), -self.nu.clone())
            .expect("codim >= 1")
    }

    /// Coordinates of `class` in the generator basis: `(mixed, sigma)`.
    pub fn coordinates(&self, class: &HomogeneousClass) -> Result<(BigRational, BigRational)> {
        if class.codim() != self.codim {
            return Err(Error::CodimMismatch { expected: self.codim, found: class.codim() });
        }
        if class.ambient() != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        let a = class.h_coeff().clone();
        let b = class.sigma_coeff() + &a * &self.nu;
        Ok((a, b))
    }

    pub fn contains(&self, class: &HomogeneousClass) -> Result<bool> {
        let (a, b) = self.coordinates(class)?;
        Ok(!a.is_negative() && !b.is_negative())
    }
}

fn check_codim(r: i64, c: i64) -> Result<()> {
    if !(1..r).contains(&c) {
        return Err(Error::CodimOutOfRange { codim: c, max: r - 1 });
    }
    Ok(())
}

/// Harder–Narasimhan slopes repeated by rank, largest first; they sum to `d`.
pub fn virtual_slopes(hn: &HNData) -> Vec<BigRational> {
    hn.pieces
        .iter()
        .flat_map(|p| std::iter::repeat_n(p.slope(), p.rank as usize))
        .collect()
}

pub fn pseff_cone(hn: &HNData, c: i64) -> Result<ConeSpec> {
    let ambient = hn.ambient()?;
    check_codim(ambient.r, c)?;
    let nu = virtual_slopes(hn).into_iter().take(c as usize).sum();
    Ok(ConeSpec { ambient, codim: c, nu })
}

pub fn nef_cone(hn: &HNData, c: i64) -> Result<ConeSpec> {
    let ambient = hn.ambient()?;
    check_codim(ambient.r, c)?;
    let nu = virtual_slopes(hn).into_iter().rev().take(c as usize).sum();
    Ok(ConeSpec { ambient, codim: c, nu })
}

/// The cone `B`, `ν = c·d/r`.
pub fn b_cone(r: i64, d: i64, c: i64) -> Result<ConeSpec> {
    let ambient = AmbientData::new(r, d)?;
    check_codim(r, c)?;
    Ok(ConeSpec { ambient, codim: c, nu: ratio(c * d, r) })
}

pub fn in_cone(class: &HomogeneousClass, cone: &ConeSpec) -> Result<bool> {
    cone.contains(class)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeChainReport {
    pub codim: i64,
    #[serde(with = "crate::exact::serde_ratio")]
    pub nu_nef: BigRational,
    #[serde(with = "crate::exact::serde_ratio")]
    pub nu_b: BigRational,
    #[serde(with = "crate::exact::serde_ratio")]
    pub nu_pseff: BigRational,
    /// `ν_nef <= ν_B <= ν_pseff`
    pub ordered: bool,
    pub nef_strictly_inside_b: bool,
    pub b_strictly_inside_pseff: bool,
    pub semistable: bool,
    /// Ordered, and both inclusions strict exactly when `E` is not semistable.
    pub consistent: bool,
}

pub fn cone_chain_report(hn: &HNData, c: i64) -> Result<ConeChainReport> {
    let ambient = hn.ambient()?;
    let nef = nef_cone(hn, c)?;
    let b = b_cone(ambient.r, ambient.d, c)?;
    let pseff = pseff_cone(hn, c)?;
    let ordered = nef.nu <= b.nu && b.nu <= pseff.nu;
    let nef_strict = nef.nu < b.nu;
    let pseff_strict = b.nu < pseff.nu;
    let semistable = hn.is_semistable();
    Ok(ConeChainReport {
        codim: c,
        consistent: ordered && nef_strict != semistable && pseff_strict != semistable,
        nu_nef: nef.nu,
        nu_b: b.nu,
        nu_pseff: pseff.nu,
        ordered,
        nef_strictly_inside_b: nef_strict,
        b_strictly_inside_pseff: pseff_strict,
        semistable,
    })
}

/// `[X] ∈ B` against the slope condition. The two must agree; a disagreement is
/// returned as [`Error::Inconsistency`].
pub fn membership_equivalence_check(spec: &CompleteIntersectionSpec, ambient: &AmbientData) -> Result<bool> {
    let class = class_of_ci(spec, *ambient)?;
    let in_b = b_cone(ambient.r, ambient.d, spec.codim())?.contains(&class)?;
    let slope = slope_condition(spec, ambient)?.holds;
    if in_b != slope {
        return Err(Error::Inconsistency(format!(
            "[X] in B is {in_b} but the slope condition is {slope}"
        )));
    }
    Ok(in_b)
}

/// Where `[X]` sits relative to one cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub cone: String,
    #[serde(with = "crate::exact::serde_ratio")]
    pub nu: BigRational,
    pub inside: bool,
    /// Coefficient on `H^c − ν·H^{c−1}Σ`.
    #[serde(with = "crate::exact::serde_ratio")]
    pub mixed_coordinate: BigRational,
    /// Coefficient on `H^{c−1}Σ`.
    #[serde(with = "crate::exact::serde_ratio")]
    pub sigma_coordinate: BigRational,
}

/// Membership of `[X]` in the nef, `B` and pseudoeffective cones, in that order.
pub fn class_memberships(spec: &CompleteIntersectionSpec, hn: &HNData) -> Result<Vec<Membership>> {
    let ambient = hn.ambient()?;
    let class = class_of_ci(spec, ambient)?;
    let c = spec.codim();
    let cones = [
        ("nef", nef_cone(hn, c)?),
        ("B", b_cone(ambient.r, ambient.d, c)?),
        ("pseff", pseff_cone(hn, c)?),
    ];
    cones
        .into_iter()
        .map(|(name, cone)| {
            let (a, b) = cone.coordinates(&class)?;
            Ok(Membership {
                cone: name.to_string(),
                inside: !a.is_negative() && !b.is_negative(),
                nu: cone.nu,
                mixed_coordinate: a,
                sigma_coordinate: b,
            })
        })
        .collect()
}

/// `ν_pseff(c) + ν_nef(r − c) − d`, zero for every valid `c`.
pub fn duality_defect(hn: &HNData, c: i64) -> Result<BigRational> {
    let r = hn.rank();
    let d = from_int(hn.degree());
    Ok(pseff_cone(hn, c)?.nu + nef_cone(hn, r - c)?.nu - d)
}

pub fn is_zero_defect(q: &BigRational) -> bool {
    q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hn(pieces: &[(i64, i64)]) -> HNData {
        HNData::new(pieces.iter().map(|&(rank, degree)| HNPiece { rank, degree }).collect()).unwrap()
    }

    // pieces [(rank 1, slope 3), (rank 2, slope 1)]
    fn unstable() -> HNData {
        hn(&[(1, 3), (2, 2)])
    }

    #[test]
    fn virtual_slope_lists() {
        let s = HNData::semistable(4, 6).unwrap();
        assert_eq!(virtual_slopes(&s), vec![ratio(3, 2); 4]);
        assert_eq!(virtual_slopes(&unstable()), vec![from_int(3), from_int(1), from_int(1)]);
        let other = HNData::from_slopes(&[(2, from_int(2)), (1, from_int(-1))]).unwrap();
        assert_eq!(virtual_slopes(&other), vec![from_int(2), from_int(2), from_int(-1)]);
        assert_eq!(virtual_slopes(&other).into_iter().sum::<BigRational>(), from_int(3));
    }

    #[test]
    fn fulger_cones() {
        let s = HNData::semistable(5, 3).unwrap();
        for c in 1..5 {
            assert_eq!(pseff_cone(&s, c).unwrap().nu, ratio(3 * c, 5));
            assert_eq!(nef_cone(&s, c).unwrap().nu, ratio(3 * c, 5));
        }
        let u = unstable();
        assert_eq!(pseff_cone(&u, 1).unwrap().nu, from_int(3));
        assert_eq!(pseff_cone(&u, 2).unwrap().nu, from_int(4));
        assert_eq!(nef_cone(&u, 1).unwrap().nu, from_int(1));
        assert_eq!(nef_cone(&u, 2).unwrap().nu, from_int(2));
        assert!(matches!(pseff_cone(&u, 3), Err(Error::CodimOutOfRange { .. })));
        assert!(matches!(nef_cone(&u, 0), Err(Error::CodimOutOfRange { .. })));
    }

    #[test]
    fn b_cones() {
        assert_eq!(b_cone(4, 6, 2).unwrap().nu, from_int(3));
        for c in 1..6 {
            assert_eq!(b_cone(6, 0, c).unwrap().nu, from_int(0));
        }
        assert_eq!(b_cone(3, 5, 1).unwrap().nu, ratio(5, 3));
    }

    #[test]
    fn memberships() {
        let a = AmbientData::new(4, 6).unwrap();
        let b = b_cone(4, 6, 2).unwrap();
        assert!(in_cone(&HomogeneousClass::h_power_sigma(a, 2), &b).unwrap());
        let u = unstable();
        for cone in [nef_cone(&u, 1).unwrap(), pseff_cone(&u, 1).unwrap()] {
            assert!(in_cone(&cone.sigma_generator(), &cone).unwrap());
            assert!(in_cone(&cone.mixed_generator(), &cone).unwrap());
        }
        let x = class_of_ci(&CompleteIntersectionSpec::from_pairs(&[(2, 1), (2, 0)]).unwrap(), a).unwrap();
        assert!(in_cone(&x, &b).unwrap());
        let bad = HomogeneousClass::new(a, 2, from_int(4), from_int(-13)).unwrap();
        assert!(!in_cone(&bad, &b).unwrap());
        assert!(matches!(in_cone(&HomogeneousClass::hyperplane(a), &b), Err(Error::CodimMismatch { .. })));
    }

    #[test]
    fn chain_reports() {
        let s = cone_chain_report(&HNData::semistable(4, 6).unwrap(), 2).unwrap();
        assert!(s.consistent && s.semistable && !s.nef_strictly_inside_b && !s.b_strictly_inside_pseff);
        assert_eq!(s.nu_nef, s.nu_pseff);

        let u = cone_chain_report(&unstable(), 1).unwrap();
        assert_eq!((u.nu_nef, u.nu_b, u.nu_pseff), (from_int(1), ratio(5, 3), from_int(3)));
        assert!(u.consistent);

        let v = cone_chain_report(&hn(&[(2, 4), (1, -1)]), 2).unwrap();
        assert_eq!((v.nu_nef, v.nu_b, v.nu_pseff), (from_int(1), from_int(2), from_int(4)));
        assert!(v.consistent && v.nef_strictly_inside_b && v.b_strictly_inside_pseff);
    }

    #[test]
    fn membership_equivalence() {
        let spec = CompleteIntersectionSpec::from_pairs(&[(2, 1), (2, 0)]).unwrap();
        assert!(membership_equivalence_check(&spec, &AmbientData::new(4, 6).unwrap()).unwrap());
        let spec = CompleteIntersectionSpec::from_pairs(&[(2, 1)]).unwrap();
        assert!(!membership_equivalence_check(&spec, &AmbientData::new(3, 0).unwrap()).unwrap());
    }

    #[test]
    fn duality() {
        let u = unstable();
        for c in 1..3 {
            assert!(duality_defect(&u, c).unwrap().is_zero());
        }
    }

    #[test]
    fn invalid_hn() {
        assert!(HNData::new(vec![]).is_err());
        assert!(HNData::new(vec![HNPiece { rank: 1, degree: 1 }, HNPiece { rank: 2, degree: 2 }]).is_err());
        assert!(HNData::new(vec![HNPiece { rank: 0, degree: 1 }]).is_err());
        assert!(HNData::from_slopes(&[(2, ratio(1, 3))]).is_err());
        let a = AmbientData::new(4, 6).unwrap();
        assert!(unstable().check_against(&a).is_err());
    }

    #[test]
    fn scaling_keeps_membership() {
        let a = AmbientData::new(4, 6).unwrap();
        let b = b_cone(4, 6, 2).unwrap();
        let x = HomogeneousClass::new(a, 2, from_int(4), from_int(-12)).unwrap();
        for s in [ratio(1, 3), from_int(7)] {
            assert_eq!(in_cone(&x.scale(&s), &b).unwrap(), in_cone(&x, &b).unwrap());
        }
    }
}
