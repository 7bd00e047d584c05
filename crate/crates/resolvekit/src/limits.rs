//! Lower bounds for the limits of the four degrees along powers, with
//! exactness certificates where the dual-side decision applies.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree::{degrees, DegreeReport, Ext};
use crate::error::{internal, Result};
use crate::rule::Endomorphism;
use crate::textile::expansiveness_situation;

pub const DEFAULT_MAX_POWER: usize = 6;

/// A rational number or minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtRatio {
    NegInf,
    Fin(Ratio<i64>),
}

impl ExtRatio {
    fn of(x: Ext, s: usize) -> Self {
        match x {
            Ext::Fin(v) => ExtRatio::Fin(Ratio::new(v, s as i64)),
            Ext::NegInf => ExtRatio::NegInf,
        }
    }
}

impl std::fmt::Display for ExtRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtRatio::NegInf => write!(f, "-inf"),
            ExtRatio::Fin(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for ExtRatio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtRatio {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "-inf" {
            return Ok(ExtRatio::NegInf);
        }
        s.parse::<Ratio<i64>>().map(ExtRatio::Fin).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    /// The limit equals the degree of φ itself.
    Exact,
    /// The limit is strictly larger than the degree of φ itself.
    AboveDegree,
    /// No decision applies; only the lower bound is known.
    LowerBoundOnly,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitEstimate {
    /// max over s ≤ S of degree(φ^s)/s.
    pub lower_bound: ExtRatio,
    pub best_power: usize,
    pub exactness: Exactness,
    /// The shift s at which the expansiveness of φσ^s was decided.
    pub decided_at: Option<i64>,
    /// degree(φ^s)/s for s = 1..S.
    pub by_power: Vec<ExtRatio>,
}

impl LimitEstimate {
    pub fn certified(&self) -> bool {
        self.exactness == Exactness::Exact
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitReport {
    pub max_power: usize,
    pub p_l: LimitEstimate,
    pub p_r: LimitEstimate,
    pub q_r: LimitEstimate,
    pub q_l: LimitEstimate,
}

fn estimate(values: &[Ext]) -> LimitEstimate {
    let by_power: Vec<ExtRatio> = values.iter().enumerate().map(|(i, &v)| ExtRatio::of(v, i + 1)).collect();
    let (best, lower_bound) = by_power
        .iter()
        .enumerate()
        .fold((0, by_power[0]), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    LimitEstimate { lower_bound, best_power: best + 1, exactness: Exactness::LowerBoundOnly, decided_at: None, by_power }
}

/// Scans φ^1 … φ^S and certifies exactness where a decision branch applies.
pub fn limit_estimates(e: &Endomorphism, max_power: usize) -> Result<LimitReport> {
    e.require_onto()?;
    let max_power = max_power.max(1);
    let reports: Vec<DegreeReport> = (1..=max_power)
        .into_par_iter()
        .map(|s| if s == 1 { degrees(e) } else { degrees(&e.power(s)?) })
        .collect::<Result<_>>()?;
    let col = |f: fn(&DegreeReport) -> Ext| -> Vec<Ext> { reports.iter().map(f).collect() };
    let mut p_l = estimate(&col(|d| Ext::Fin(d.p_l)));
    let mut p_r = estimate(&col(|d| Ext::Fin(d.p_r)));
    let mut q_r = estimate(&col(|d| d.q_r));
    let mut q_l = estimate(&col(|d| d.q_l));
    let d = &reports[0];

    // (estimate, degree of φ, shift to decide, use left side of the decision)
    let mut jobs: Vec<(&mut LimitEstimate, i64, i64, bool)> = Vec::new();
    let both = |qr: i64, ql: i64| ql >= -qr;
    if let Ext::Fin(qr) = d.q_r {
        if -d.p_l >= -qr {
            jobs.push((&mut p_l, d.p_l, -d.p_l, false));
        }
    }
    if let Ext::Fin(qr) = d.q_r {
        if -d.p_l <= -qr || d.q_l.finite().is_some_and(|ql| both(qr, ql)) {
            jobs.push((&mut q_r, qr, -qr, true));
        }
    }
    if let Ext::Fin(ql) = d.q_l {
        if d.p_r <= ql {
            jobs.push((&mut p_r, d.p_r, d.p_r, true));
        }
        if d.p_r >= ql || d.q_r.finite().is_some_and(|qr| both(qr, ql)) {
            jobs.push((&mut q_l, ql, ql, false));
        }
    }
    for (est, degree, s, left) in jobs {
        let sit = expansiveness_situation(e, s)?;
        let expansive = if left { sit.left_expansive } else { sit.right_expansive };
        est.decided_at = Some(s);
        let at_degree = ExtRatio::Fin(Ratio::from_integer(degree));
        if expansive {
            est.exactness = Exactness::AboveDegree;
        } else {
            if est.lower_bound != at_degree {
                return internal(format!("limit certified at {degree} but a power reaches {}", est.lower_bound));
            }
            est.exactness = Exactness::Exact;
        }
    }
    Ok(LimitReport { max_power, p_l, p_r, q_r, q_l })
}
