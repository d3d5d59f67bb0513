//! Seeded randomized cross-checks.
//!
//! Instance `i` of a sweep draws from its own ChaCha stream (`seed`, stream
//! `i`), so results do not depend on how the work is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;

use crate::chowring::{class_of_ci, AmbientData, CiFactor, CompleteIntersectionSpec, HomogeneousClass};
use crate::cones::{cone_chain_report, duality_defect, membership_equivalence_check, virtual_slopes, HNData, HNPiece};
use crate::error::{Error, Result};
use crate::exact::{from_bigint, from_int};
use crate::positivity::{
    fiber_degree, grouped_margin, margin_polynomial, margin_twisted, top_self_intersection, verify_theorem,
};
use crate::pushforward::{deg_pushforward, hilbert_rank_oracle, rank_fiber};
use num_rational::BigRational;

/// Parameter ranges for random fibration instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRanges {
    pub r: RangeInclusive<i64>,
    pub k: RangeInclusive<i64>,
    pub y: RangeInclusive<i64>,
    pub d: RangeInclusive<i64>,
}

impl Default for InstanceRanges {
    fn default() -> Self {
        Self { r: 3..=8, k: 2..=5, y: -10..=10, d: -20..=20 }
    }
}

/// A complete intersection in a projective bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub ambient: AmbientData,
    pub ci: CompleteIntersectionSpec,
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_instance<R: Rng>(rng: &mut R, ranges: &InstanceRanges) -> Instance {
    let r = rng.random_range(ranges.r.clone());
    let d = rng.random_range(ranges.d.clone());
    let c = rng.random_range(1..=r - 1);
    let factors = (0..c)
        .map(|_| CiFactor { k: rng.random_range(ranges.k.clone()), y: rng.random_range(ranges.y.clone()) })
        .collect();
    Instance {
        ambient: AmbientData::new(r, d).expect("range starts at 3"),
        ci: CompleteIntersectionSpec::new(factors).expect("k range starts at 2"),
    }
}

/// Random Harder–Narasimhan data with `1..=max_pieces` pieces and total rank in `3..=max_rank`.
pub fn random_hn<R: Rng>(rng: &mut R, max_pieces: usize, max_rank: i64) -> HNData {
    loop {
        let total = rng.random_range(3..=max_rank);
        let pieces = rng.random_range(1..=max_pieces.min(total as usize));
        // random composition of `total` into `pieces` positive parts
        let mut cuts: Vec<i64> = (1..total).collect();
        for i in (1..cuts.len()).rev() {
            cuts.swap(i, rng.random_range(0..=i));
        }
        let mut cuts: Vec<i64> = cuts.into_iter().take(pieces - 1).collect();
        cuts.sort_unstable();
        cuts.push(total);
        let mut prev = 0;
        let mut list: Vec<HNPiece> = cuts
            .into_iter()
            .map(|cut| {
                let rank = cut - prev;
                prev = cut;
                HNPiece { rank, degree: rng.random_range(-20..=20) }
            })
            .collect();
        list.sort_by_key(|p| std::cmp::Reverse(p.slope()));
        if let Ok(hn) = HNData::new(list) {
            return hn;
        }
    }
}

/// Independent route for `(h·H_X)^{r−c}`: reduce `(hH)^{r−c}·[X]` in the Chow ring.
pub fn chow_top_self_intersection(inst: &Instance, h: i64) -> Result<BigRational> {
    let a = inst.ambient;
    let x = class_of_ci(&inst.ci, a)?;
    let n = a.r - inst.ci.codim();
    HomogeneousClass::hyperplane(a)
        .scale(&from_int(h))
        .pow(n as u32)
        .multiply(&x)?
        .degree()
}

/// Independent route for the fibre degree: `H^{r−c−1}·Σ·[X]`.
pub fn chow_fiber_degree(inst: &Instance) -> Result<BigRational> {
    let a = inst.ambient;
    let x = class_of_ci(&inst.ci, a)?;
    let n = a.r - inst.ci.codim();
    HomogeneousClass::h_power(a, n - 1)
        .multiply(&HomogeneousClass::fibre(a))?
        .multiply(&x)?
        .degree()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Slope condition, `O_X(1)`, all `h < min k_i` and the asymptotic verdict agree.
    TheoremEquivalence,
    /// `[X] ∈ B` iff the slope condition holds.
    ConeMembership,
    /// Margins unchanged by pullback twists `m ∈ [−10, 10]`.
    TwistInvariance,
    /// Closed-form intersection numbers match Chow-ring reduction.
    ChowOracle,
    /// Koszul ranks match the Hilbert series for `0 <= h <= Σk + r`; degrees are integers.
    RankOracle,
    /// The margin polynomial matches direct evaluation for `h >= Σk`.
    PolynomialAgreement,
    /// Cone chain ordering/strictness, virtual slope sum and duality.
    ConeChain,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::TheoremEquivalence,
        Check::ConeMembership,
        Check::TwistInvariance,
        Check::ChowOracle,
        Check::RankOracle,
        Check::PolynomialAgreement,
        Check::ConeChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::TheoremEquivalence => "theorem-equivalence",
            Check::ConeMembership => "cone-membership",
            Check::TwistInvariance => "twist-invariance",
            Check::ChowOracle => "chow-oracle",
            Check::RankOracle => "rank-oracle",
            Check::PolynomialAgreement => "polynomial-agreement",
            Check::ConeChain => "cone-chain",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: u64,
    pub check: Check,
    pub detail: String,
    pub instance: Option<Instance>,
    pub hn: Option<HNData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub check: Check,
    pub passed: u64,
    pub failed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub count: u64,
    pub tallies: Vec<CheckTally>,
    pub failures: Vec<Failure>,
    /// Instances whose margin polynomial has a leading sign opposite to the
    /// slope-condition verdict (or vanishes while the condition is strict).
    /// Informational; these are not failures.
    pub asymptotic_sign_disagreements: u64,
    pub zero_dimensional_fibre_instances: u64,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn outcome(check: Check, ok: Result<bool>) -> (Check, std::result::Result<(), String>) {
    match ok {
        Ok(true) => (check, Ok(())),
        Ok(false) => (check, Err("identity violated".into())),
        Err(e) => (check, Err(e.to_string())),
    }
}

pub fn check_theorem(inst: &Instance) -> Result<bool> {
    Ok(verify_theorem(&inst.ci, &inst.ambient)?.consistent)
}

pub fn check_membership(inst: &Instance) -> Result<bool> {
    membership_equivalence_check(&inst.ci, &inst.ambient).map(|_| true)
}

pub fn check_twists(inst: &Instance, m_range: RangeInclusive<i64>) -> Result<bool> {
    for h in [1, inst.ci.min_k(), inst.ci.sum_k()] {
        let base = margin_twisted(&inst.ci, &inst.ambient, h, 0)?;
        for m in m_range.clone() {
            if margin_twisted(&inst.ci, &inst.ambient, h, m)? != base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn check_chow(inst: &Instance) -> Result<bool> {
    for h in [1, 2, 3] {
        let closed = from_bigint(top_self_intersection(&inst.ci, &inst.ambient, h)?);
        if closed != chow_top_self_intersection(inst, h)? {
            return Ok(false);
        }
    }
    Ok(from_bigint(fiber_degree(&inst.ci)) == chow_fiber_degree(inst)?)
}

pub fn check_ranks(inst: &Instance) -> Result<bool> {
    let r = inst.ambient.r;
    for h in 0..=inst.ci.sum_k() + r {
        if rank_fiber(&inst.ci, r, h)? != hilbert_rank_oracle(&inst.ci, r, h)? {
            return Ok(false);
        }
        if h >= 1 {
            // integrality is enforced inside; an error propagates
            deg_pushforward(&inst.ci, r, inst.ambient.d, h)?;
        }
    }
    Ok(true)
}

pub fn check_polynomial(inst: &Instance) -> Result<bool> {
    let p = margin_polynomial(&inst.ci, &inst.ambient)?;
    let start = inst.ci.sum_k();
    for h in start..start + 4 {
        if p.eval_int(h) != grouped_margin(&inst.ci, &inst.ambient, h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_cone_chain(hn: &HNData) -> Result<bool> {
    let r = hn.rank();
    let slope_sum: BigRational = virtual_slopes(hn).into_iter().sum();
    if slope_sum != from_int(hn.degree()) {
        return Ok(false);
    }
    for c in 1..r {
        if !cone_chain_report(hn, c)?.consistent {
            return Ok(false);
        }
        if duality_defect(hn, c)? != from_int(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

struct IndexOutcome {
    index: u64,
    instance: Instance,
    hn: HNData,
    results: Vec<(Check, std::result::Result<(), String>)>,
    disagreement: bool,
    zero_dim: bool,
}

fn run_one(seed: u64, index: u64, ranges: &InstanceRanges) -> IndexOutcome {
    let mut rng = rng_for(seed, index);
    let instance = random_instance(&mut rng, ranges);
    let hn = random_hn(&mut rng, 4, 8);
    let results = vec![
        outcome(Check::TheoremEquivalence, check_theorem(&instance)),
        outcome(Check::ConeMembership, check_membership(&instance)),
        outcome(Check::TwistInvariance, check_twists(&instance, -10..=10)),
        outcome(Check::ChowOracle, check_chow(&instance)),
        outcome(Check::RankOracle, check_ranks(&instance)),
        outcome(Check::PolynomialAgreement, check_polynomial(&instance)),
        outcome(Check::ConeChain, check_cone_chain(&hn)),
    ];
    let report = verify_theorem(&instance.ci, &instance.ambient).ok();
    let disagreement = report.as_ref().is_some_and(|rep| {
        let lead = rep.polynomial_leading_sign;
        let strict = rep.slope_margin != from_int(0);
        (strict && lead == 0) || (lead > 0 && !rep.slope_condition_holds) || (lead < 0 && rep.slope_condition_holds)
    });
    let zero_dim = report.is_some_and(|rep| rep.zero_dimensional_fibres);
    IndexOutcome { index, instance, hn, results, disagreement, zero_dim }
}

/// Runs every check on `count` instances drawn from `seed`.
pub fn run_sweep(seed: u64, count: u64, ranges: &InstanceRanges) -> Result<SweepReport> {
    if count == 0 {
        return Err(Error::InvalidSpec("sweep count must be at least 1".into()));
    }
    let outcomes: Vec<IndexOutcome> = (0..count).into_par_iter().map(|i| run_one(seed, i, ranges)).collect();

    let mut tallies: Vec<CheckTally> =
        Check::ALL.iter().map(|&check| CheckTally { check, passed: 0, failed: 0 }).collect();
    let mut failures = Vec::new();
    let mut disagreements = 0;
    let mut zero_dim = 0;
    for o in outcomes {
        disagreements += u64::from(o.disagreement);
        zero_dim += u64::from(o.zero_dim);
        for (check, res) in o.results {
            let tally = tallies.iter_mut().find(|t| t.check == check).expect("all checks tallied");
            match res {
                Ok(()) => tally.passed += 1,
                Err(detail) => {
                    tally.failed += 1;
                    let cone = check == Check::ConeChain;
                    failures.push(Failure {
                        index: o.index,
                        check,
                        detail,
                        instance: (!cone).then(|| o.instance.clone()),
                        hn: cone.then(|| o.hn.clone()),
                    });
                }
            }
        }
    }
    Ok(SweepReport {
        seed,
        count,
        tallies,
        failures,
        asymptotic_sign_disagreements: disagreements,
        zero_dimensional_fibre_instances: zero_dim,
    })
}
