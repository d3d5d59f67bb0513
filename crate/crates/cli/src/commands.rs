//! The five subcommands. Each returns a [`Run`]; only malformed input is an error.

use fibrepos::cones::{
    class_memberships, cone_chain_report, duality_defect, membership_equivalence_check, virtual_slopes,
    ConeChainReport, Membership,
};
use fibrepos::exact::{format_ratio, from_int, serde_int, serde_ratio_vec, sign};
use fibrepos::positivity::{
    asymptotic_threshold, canonical_class, f_positive_at, fiber_degree, margin_polynomial, margin_twisted, regime,
    slope_condition, slope_inequality_check, top_self_intersection, verify_theorem, AsymptoticThreshold, HRegime,
    PositivityMargin, SlopeCondition,
};
use fibrepos::pushforward::{deg_pushforward, hilbert_rank_oracle, rank_fiber};
use fibrepos::stability::{
    bezout_contact, hm_bound, instability_report, propagation_check, AsymptoticInstability, ContactDatum,
    InstabilityReport, PropagationReport, Verdict,
};
use fibrepos::sweep::{chow_fiber_degree, chow_top_self_intersection, run_sweep, InstanceRanges, SweepReport};
use fibrepos::{BigInt, BigRational, Error, ExactPolynomial, TheoremReport};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::input::{ContactFile, ContactInput, Instance, InstanceFile};
use crate::report::{to_value, CheckOutcome, Report, Run};
use crate::CliError;

fn sweep_instance(inst: &Instance) -> fibrepos::sweep::Instance {
    fibrepos::sweep::Instance { ambient: inst.ambient, ci: inst.spec.clone() }
}

fn echo(file: &InstanceFile, h: Option<i64>) -> serde_json::Value {
    let mut v = to_value(file);
    if let Some(h) = h {
        v["h"] = json!(h);
    }
    v
}

fn describe(inst: &Instance) -> String {
    let ci: Vec<String> = inst.spec.factors().iter().map(|f| format!("({}, {})", f.k, f.y)).collect();
    format!("instance: r = {}, d = {}, (k, y) = {}", inst.ambient.r, inst.ambient.d, ci.join(" "))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalClass {
    /// Coefficient of `H_X`.
    pub a: i64,
    /// Degree of the pulled-back part.
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsResults {
    pub h: i64,
    #[serde(with = "serde_int")]
    pub rank_fiber: BigInt,
    #[serde(with = "serde_int")]
    pub deg_pushforward: BigInt,
    #[serde(with = "serde_int")]
    pub top_self_intersection: BigInt,
    #[serde(with = "serde_int")]
    pub fiber_degree: BigInt,
    pub canonical_class: CanonicalClass,
}

pub fn invariants(file: &InstanceFile, inst: &Instance, h: Option<i64>) -> Result<Run, CliError> {
    let h = h.or(inst.h).ok_or_else(|| CliError::Input("invariants needs h (in the file or via --h)".into()))?;
    let (r, d) = (inst.ambient.r, inst.ambient.d);
    let (a, m) = canonical_class(&inst.spec, &inst.ambient)?;
    let res = InvariantsResults {
        h,
        rank_fiber: rank_fiber(&inst.spec, r, h)?,
        deg_pushforward: deg_pushforward(&inst.spec, r, d, h)?,
        top_self_intersection: top_self_intersection(&inst.spec, &inst.ambient, h)?,
        fiber_degree: fiber_degree(&inst.spec),
        canonical_class: CanonicalClass { a, m },
    };

    let oracle = sweep_instance(inst);
    let checks = vec![
        CheckOutcome::new("rank-oracle", hilbert_rank_oracle(&inst.spec, r, h)? == res.rank_fiber),
        CheckOutcome::new(
            "chow-top-self-intersection",
            chow_top_self_intersection(&oracle, h)? == BigRational::from(res.top_self_intersection.clone()),
        ),
        CheckOutcome::new("chow-fiber-degree", chow_fiber_degree(&oracle)? == BigRational::from(res.fiber_degree.clone())),
    ];
    let n = r - inst.spec.codim();
    let text = vec![
        describe(inst),
        format!("h = {h}"),
        format!("rank f_*O_X(h)        = {}", res.rank_fiber),
        format!("deg f_*O_X(h)         = {}", res.deg_pushforward),
        format!("L^{n} with L = O_X(h)    = {}", res.top_self_intersection),
        format!("fibre degree          = {}", res.fiber_degree),
        format!("canonical class K_f   = {} H + {} F", a, m),
    ];
    Ok(Run {
        report: Report { command: "invariants".into(), input: echo(file, Some(h)), results: to_value(&res), checks, seed: None },
        text,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositivityVerdict {
    #[serde(rename = "f-positive")]
    FPositive,
    #[serde(rename = "f-positive (boundary)")]
    Boundary,
    #[serde(rename = "not f-positive")]
    NotFPositive,
}

impl PositivityVerdict {
    fn from_slope(s: &SlopeCondition) -> Self {
        match sign(&s.margin) {
            1 => Self::FPositive,
            0 => Self::Boundary,
            _ => Self::NotFPositive,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Self::FPositive => "f-positive",
            Self::Boundary => "f-positive (boundary)",
            Self::NotFPositive => "not f-positive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedMargin {
    pub h: i64,
    pub m: i64,
    #[serde(with = "fibrepos::exact::serde_ratio")]
    pub margin: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityResults {
    pub verdict: PositivityVerdict,
    pub theorem: TheoremReport,
    pub margin_polynomial: ExactPolynomial,
    /// `None` when the margin polynomial vanishes identically.
    pub threshold: Option<AsymptoticThreshold>,
    pub at_h: Option<PositivityMargin>,
    pub regime: Option<HRegime>,
    pub twisted: Option<TwistedMargin>,
    /// Margin of `K_f` when it is a positive multiple of `H_X` up to pullback.
    pub slope_inequality: Option<PositivityMargin>,
}

fn threshold_or_none(
    inst: &Instance,
    max_h: i64,
) -> Result<Option<AsymptoticThreshold>, CliError> {
    match asymptotic_threshold(&inst.spec, &inst.ambient, max_h) {
        Ok(t) => Ok(Some(t)),
        Err(Error::DegenerateLeadingCoefficient) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn positivity(file: &InstanceFile, inst: &Instance, h: Option<i64>, max_h: i64) -> Result<Run, CliError> {
    let (spec, amb) = (&inst.spec, &inst.ambient);
    let h = h.or(inst.h);
    let theorem = verify_theorem(spec, amb)?;
    let slope = slope_condition(spec, amb)?;
    let threshold = threshold_or_none(inst, max_h)?;
    let at_h = h.map(|h| f_positive_at(spec, amb, h)).transpose()?;
    let twisted = match inst.twist {
        Some(m) => {
            let th = h.unwrap_or(1);
            Some(TwistedMargin { h: th, m, margin: margin_twisted(spec, amb, th, m)? })
        }
        None => None,
    };
    let res = PositivityResults {
        verdict: PositivityVerdict::from_slope(&slope),
        margin_polynomial: margin_polynomial(spec, amb)?,
        at_h,
        regime: h.map(|h| regime(spec, h, threshold.as_ref())),
        twisted,
        slope_inequality: slope_inequality_check(spec, amb)?,
        threshold,
        theorem,
    };

    let mut checks = vec![CheckOutcome::new("theorem-equivalence", res.theorem.consistent)];
    if let (Some(m), Some(rg)) = (&res.at_h, res.regime) {
        let s = sign(&m.margin);
        match rg {
            HRegime::BelowMinDegree => checks.push(CheckOutcome::new("low-h-verdict", m.positive == slope.holds)),
            HRegime::Asymptotic => {
                let lead = res.threshold.as_ref().map_or(0, |t| t.leading_sign);
                checks.push(CheckOutcome::new("asymptotic-sign", s == lead));
            }
            HRegime::InstanceSpecific => {}
        }
    }
    if let Some(t) = &res.twisted {
        let plain = f_positive_at(spec, amb, t.h)?.margin;
        checks.push(CheckOutcome::new("twist-invariance", plain == t.margin));
    }

    let mut text = vec![
        describe(inst),
        format!("verdict: {}", res.verdict.label()),
        format!("slope margin c·d/r − Σ y_i/k_i = {}", format_ratio(&res.theorem.slope_margin)),
        format!("consistent = {}", res.theorem.consistent),
        format!("margin polynomial (divided by h^(n−1)): {}", res.margin_polynomial),
    ];
    for m in &res.theorem.low_h_results {
        text.push(format!("  h = {}: margin {} ({})", m.h, format_ratio(&m.margin), sign_word(&m.margin)));
    }
    match &res.threshold {
        Some(t) => text.push(format!(
            "asymptotic threshold H0 = {} (root bound certifies from {}, leading sign {})",
            t.h0, t.certified_start, t.leading_sign
        )),
        None => text.push("asymptotic threshold: undefined (margin polynomial is zero)".into()),
    }
    if let Some(m) = &res.at_h {
        text.push(format!("at h = {}: margin {} ({})", m.h, format_ratio(&m.margin), sign_word(&m.margin)));
    }
    if let Some(t) = &res.twisted {
        text.push(format!("twisted by deg M = {} at h = {}: margin {}", t.m, t.h, format_ratio(&t.margin)));
    }
    match &res.slope_inequality {
        Some(m) => text.push(format!("slope inequality for K_f: margin {} ({})", format_ratio(&m.margin), sign_word(&m.margin))),
        None => text.push("slope inequality for K_f: not applicable (Σk_i − r < 1)".into()),
    }
    if res.theorem.zero_dimensional_fibres {
        text.push("note: fibres are zero-dimensional".into());
    }
    Ok(Run {
        report: Report { command: "positivity".into(), input: echo(file, h), results: to_value(&res), checks, seed: None },
        text,
    })
}

fn sign_word(q: &BigRational) -> &'static str {
    match sign(q) {
        1 => "positive",
        0 => "zero",
        _ => "negative",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConesResults {
    pub codim: i64,
    #[serde(with = "serde_ratio_vec")]
    pub virtual_slopes: Vec<BigRational>,
    pub chain: ConeChainReport,
    pub memberships: Vec<Membership>,
    pub identical_membership: bool,
    pub slope_condition: SlopeCondition,
}

pub fn cones(file: &InstanceFile, inst: &Instance) -> Result<Run, CliError> {
    let hn = inst
        .hn
        .as_ref()
        .ok_or_else(|| CliError::Input("cones needs Harder-Narasimhan data ([[bundle.hn]])".into()))?;
    let c = inst.spec.codim();
    let chain = cone_chain_report(hn, c)?;
    let memberships = class_memberships(&inst.spec, hn)?;
    let slope = slope_condition(&inst.spec, &inst.ambient)?;
    let identical = memberships.windows(2).all(|w| w[0].inside == w[1].inside);
    let slopes = virtual_slopes(hn);
    let res = ConesResults {
        codim: c,
        virtual_slopes: slopes.clone(),
        chain,
        memberships,
        identical_membership: identical,
        slope_condition: slope,
    };

    let equivalence = match membership_equivalence_check(&inst.spec, &inst.ambient) {
        Ok(_) => CheckOutcome::new("b-membership-vs-slope", true),
        Err(e) if e.is_inconsistency() => CheckOutcome::with_detail("b-membership-vs-slope", false, e.to_string()),
        Err(e) => return Err(e.into()),
    };
    let b_inside = res.memberships.iter().find(|m| m.cone == "B").is_some_and(|m| m.inside);
    let checks = vec![
        CheckOutcome::new("cone-chain", res.chain.consistent),
        CheckOutcome::new("virtual-slope-sum", slopes.iter().sum::<BigRational>() == from_int(hn.degree())),
        CheckOutcome::new("duality", duality_defect(hn, c)? == from_int(0)),
        equivalence,
        CheckOutcome::new("b-membership-matches-report", b_inside == res.slope_condition.holds),
    ];

    let ch = &res.chain;
    let mut text = vec![
        describe(inst),
        format!(
            "nu_nef = {}, nu_B = {}, nu_pseff = {}",
            format_ratio(&ch.nu_nef),
            format_ratio(&ch.nu_b),
            format_ratio(&ch.nu_pseff)
        ),
        format!(
            "ordered = {}, Nef strictly inside B = {}, B strictly inside Pseff = {}",
            ch.ordered, ch.nef_strictly_inside_b, ch.b_strictly_inside_pseff
        ),
    ];
    for m in &res.memberships {
        let word = if m.inside { "in" } else { "not in" };
        text.push(format!(
            "[X] {word} {} (nu = {}): sigma coordinate {}, mixed coordinate {}",
            m.cone,
            format_ratio(&m.nu),
            format_ratio(&m.sigma_coordinate),
            format_ratio(&m.mixed_coordinate)
        ));
    }
    if ch.semistable {
        text.push("E is semistable: the cones all coincide".into());
    }
    if identical {
        text.push("[X] membership identical in all cones".into());
    }
    Ok(Run {
        report: Report { command: "cones".into(), input: echo(file, None), results: to_value(&res), checks, seed: None },
        text,
    })
}

pub fn stability_instance(file: &InstanceFile, inst: &Instance, max_h: i64) -> Result<Run, CliError> {
    let (spec, amb) = (&inst.spec, &inst.ambient);
    let rep: InstabilityReport = instability_report(spec, amb, max_h)?;
    let mut checks = Vec::new();
    let mut text = vec![describe(inst), format!("slope margin = {}", format_ratio(&rep.slope_margin))];
    if rep.slope_condition_holds {
        text.push("slope condition holds: no instability conclusion".into());
    }
    if let Some((lo, hi)) = rep.unstable_low_range {
        let negative = (lo..=hi).map(|h| f_positive_at(spec, amb, h)).collect::<Result<Vec<_>, _>>()?;
        checks.push(CheckOutcome::new("low-range-margins-negative", negative.iter().all(|m| sign(&m.margin) < 0)));
        if lo <= hi {
            text.push(format!("fibres Chow unstable under O(h) for h in [{lo}, {hi}]"));
        } else {
            text.push("no twist below min k_i to report".into());
        }
    }
    match &rep.asymptotic {
        Some(AsymptoticInstability::Certified { from_h }) => {
            let ok = (*from_h..from_h + 10).all(|h| f_positive_at(spec, amb, h).is_ok_and(|m| sign(&m.margin) < 0));
            checks.push(CheckOutcome::new("asymptotic-margins-negative", ok));
            text.push(format!("fibres Chow unstable under O(h) for all h >= {from_h}"));
        }
        Some(AsymptoticInstability::NotCertified { leading_sign }) => text.push(format!(
            "asymptotic range not certified: margin polynomial has leading sign {leading_sign}"
        )),
        Some(AsymptoticInstability::Degenerate) => text.push("asymptotic range not certified: margin polynomial is zero".into()),
        None => {}
    }
    Ok(Run {
        report: Report { command: "stability".into(), input: echo(file, None), results: to_value(&rep), checks, seed: None },
        text,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactResults {
    #[serde(with = "fibrepos::exact::serde_ratio")]
    pub bound: BigRational,
    pub intersection: ContactDatum,
    pub propagation: PropagationReport,
}

pub fn stability_contact(file: &ContactFile, input: &ContactInput) -> Result<Run, CliError> {
    let intersection = bezout_contact(&input.y, &input.z, &input.filtration)?;
    let propagation = propagation_check(&input.y, &input.z, &input.filtration)?;
    let res = ContactResults { bound: hm_bound(&input.filtration), intersection, propagation };
    let p = &res.propagation;
    let checks = vec![
        CheckOutcome::new("bezout-agrees", res.intersection == p.intersection),
        CheckOutcome::new("chain-balances", p.chain.decomposition_balances),
        CheckOutcome::new("propagation", p.holds),
    ];
    let verdict = |v: Verdict| v.to_string();
    let text = vec![
        format!(
            "filtration on P^{} with Hilbert-Mumford bound {}",
            input.filtration.n,
            format_ratio(&res.bound)
        ),
        format!("Y: {}", verdict(p.y_verdict)),
        format!("Z: {}", verdict(p.z_verdict)),
        format!(
            "Y·Z: dim {}, deg {}, e = {}, slope {} -> {}",
            res.intersection.dim,
            res.intersection.deg,
            format_ratio(&res.intersection.e),
            format_ratio(&p.chain.intersection_slope),
            verdict(p.intersection_verdict)
        ),
    ];
    Ok(Run {
        report: Report { command: "stability".into(), input: to_value(file), results: to_value(&res), checks, seed: None },
        text,
    })
}

pub fn verify(seed: u64, count: u64) -> Result<Run, CliError> {
    if count == 0 {
        return Err(CliError::Input("--count must be at least 1".into()));
    }
    let ranges = InstanceRanges::default();
    let rep: SweepReport = run_sweep(seed, count, &ranges)?;
    let checks: Vec<CheckOutcome> = rep
        .tallies
        .iter()
        .map(|t| CheckOutcome::with_detail(t.check.name(), t.failed == 0, format!("{}/{} passed", t.passed, t.passed + t.failed)))
        .collect();
    let mut text = vec![
        format!("seed {seed}, {count} instances"),
        format!("ranges: r {:?}, k {:?}, y {:?}, d {:?}", ranges.r, ranges.k, ranges.y, ranges.d),
        format!("zero-dimensional fibres: {} instances", rep.zero_dimensional_fibre_instances),
        format!(
            "leading sign of margin polynomial differs from slope verdict: {} instances (informational)",
            rep.asymptotic_sign_disagreements
        ),
    ];
    for f in &rep.failures {
        text.push(format!(
            "FAILED {} at index {}: {}\n  instance: {}",
            f.check.name(),
            f.index,
            f.detail,
            serde_json::to_string(&f.instance).expect("instances serialize")
        ));
    }
    Ok(Run {
        report: Report {
            command: "verify".into(),
            input: json!({ "count": count, "ranges": ranges }),
            results: to_value(&rep),
            checks,
            seed: Some(seed),
        },
        text,
    })
}
