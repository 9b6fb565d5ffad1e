use std::fmt;

use serde::{Deserialize, Serialize};

use super::estimate::Estimate;
use super::session::SessionReport;
use crate::attack::StrategyKind;

/// Floor on the pass band so large sessions do not fail on sub-percent noise.
pub const MIN_TOLERANCE: f64 = 0.005;
pub const SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    BerAb,
    PE,
    PiE,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::BerAb => "ber_ab",
            Metric::PE => "p_e",
            Metric::PiE => "pi_e",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub metric: Metric,
    #[serde(serialize_with = "super::sig::option::serialize")]
    pub estimate: Option<f64>,
    #[serde(serialize_with = "super::sig::serialize")]
    pub std_err: f64,
    #[serde(serialize_with = "super::sig::serialize")]
    pub theory: f64,
    #[serde(serialize_with = "super::sig::option::serialize")]
    pub z_score: Option<f64>,
    /// Theory is 0 or 1, so only exact agreement passes.
    pub exact: bool,
    pub pass: bool,
}

/// Judges one estimate: exact agreement when `theory` is 0 or 1, otherwise
/// `|estimate - theory| <= max(3 se, 0.005)`. A missing estimate fails.
pub fn judge(metric: Metric, estimate: Option<f64>, std_err: f64, theory: f64) -> Verdict {
    let exact = theory == 0.0 || theory == 1.0;
    let pass = match estimate {
        None => false,
        Some(e) if exact => e == theory,
        Some(e) => (e - theory).abs() <= (SIGMAS * std_err).max(MIN_TOLERANCE),
    };
    let z_score = estimate
        .filter(|_| std_err > 0.0)
        .map(|e| (e - theory) / std_err);
    Verdict {
        metric,
        estimate,
        std_err,
        theory,
        z_score,
        exact,
        pass,
    }
}

fn split(e: Option<Estimate>) -> (Option<f64>, f64) {
    (e.map(|e| e.value), e.map_or(0.0, |e| e.std_err))
}

/// Verdicts for BER, guess success and error-prediction success.
///
/// For attacking strategies the guess metric is `p_e_attacked · ζ`, which
/// counts certain and guessed bits on attacked rounds only. For the honest
/// relay it is `p_e_overall` against ½ and no prediction metric exists.
pub fn compare(report: &SessionReport) -> Vec<Verdict> {
    let theory = &report.theory;
    let (ber, ber_se) = split(report.ber_ab);
    let mut out = vec![judge(Metric::BerAb, ber, ber_se, theory.ber_ab)];

    if report.strategy == StrategyKind::Honest {
        let (pe, pe_se) = split(report.p_e_overall);
        out.push(judge(Metric::PE, pe, pe_se, theory.p_e));
        return out;
    }

    let zeta = report.zeta;
    let (pe, pe_se) = match report.p_e_attacked {
        Some(e) => (Some(e.value * zeta), e.std_err * zeta),
        // nothing attacked: the attacked-only success is identically zero
        None if zeta == 0.0 => (Some(0.0), 0.0),
        None => (None, 0.0),
    };
    out.push(judge(Metric::PE, pe, pe_se, theory.p_e));

    if let Some(pi_theory) = theory.pi_e {
        let (pi, pi_se) = split(report.pi_e);
        out.push(judge(Metric::PiE, pi, pi_se, pi_theory));
    }
    out
}

pub fn all_pass(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.pass)
}
