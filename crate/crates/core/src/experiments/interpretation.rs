use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{ReferenceRow, LBT_REFERENCE};
use crate::model::{ModelParams, SenseRelease, ThresholdMode};
use crate::solver::{solve, Method};

/// One reading of the phase-controller gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interpretation {
    pub threshold_mode: ThresholdMode,
    pub sense_release: SenseRelease,
}

const fn mk(threshold_mode: ThresholdMode, sense_release: SenseRelease) -> Interpretation {
    Interpretation {
        threshold_mode,
        sense_release,
    }
}

impl Interpretation {
    pub const ALL: [Interpretation; 6] = {
        use SenseRelease::*;
        use ThresholdMode::*;
        [
            mk(NonStrict, WifiHeld),
            mk(NonStrict, ChannelBusy),
            mk(NonStrict, ThresholdOnly),
            mk(Strict, WifiHeld),
            mk(Strict, ChannelBusy),
            mk(Strict, ThresholdOnly),
        ]
    };

    pub fn apply(&self, params: &ModelParams) -> ModelParams {
        ModelParams {
            threshold_mode: self.threshold_mode,
            sense_release: self.sense_release,
            ..*params
        }
    }

    pub fn label(&self) -> String {
        let mode = match self.threshold_mode {
            ThresholdMode::Strict => "strict",
            ThresholdMode::NonStrict => "non-strict",
        };
        let release = match self.sense_release {
            SenseRelease::WifiHeld => "release-on-wifi",
            SenseRelease::ChannelBusy => "release-on-busy",
            SenseRelease::ThresholdOnly => "release-on-threshold",
        };
        alloc::format!("{mode}/{release}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpretationOutcome {
    pub interpretation: Interpretation,
    /// `(λ_ℓ, P_b,ℓ, P_b,w)` per reference load, or the solver error
    /// (typically a reducible chain).
    pub values: Result<Vec<(f64, f64, f64)>, String>,
    /// Largest relative deviation from the reference analytic values.
    pub max_rel_error: Option<f64>,
}

/// Solves the LBT grid under every [`Interpretation`] and ranks them by
/// their worst relative deviation from the reference analytic columns.
/// Interpretations that cannot be solved sort last.
pub fn interpretation_report(base: &ModelParams) -> Vec<InterpretationOutcome> {
    let mut out: Vec<InterpretationOutcome> = Interpretation::ALL
        .iter()
        .map(|&interpretation| evaluate(interpretation, base, &LBT_REFERENCE))
        .collect();
    out.sort_by(|a, b| match (a.max_rel_error, b.max_rel_error) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => core::cmp::Ordering::Less,
        (None, Some(_)) => core::cmp::Ordering::Greater,
        (None, None) => core::cmp::Ordering::Equal,
    });
    out
}

fn evaluate(
    interpretation: Interpretation,
    base: &ModelParams,
    reference: &[ReferenceRow],
) -> InterpretationOutcome {
    let values: Result<Vec<_>, String> = reference
        .iter()
        .map(|r| {
            let p = interpretation.apply(&ModelParams {
                lambda_laa: r.lambda_laa,
                ..*base
            });
            solve(&p, Method::Direct)
                .map(|(_, s)| (r.lambda_laa, s.p_block_laa, s.p_block_wifi))
                .map_err(|e| e.to_string())
        })
        .collect();
    let max_rel_error = values.as_ref().ok().map(|vals| {
        vals.iter()
            .zip(reference)
            .flat_map(|(&(_, laa, wifi), r)| {
                [
                    libm::fabs(laa - r.analytic_laa) / r.analytic_laa,
                    libm::fabs(wifi - r.analytic_wifi) / r.analytic_wifi,
                ]
            })
            .fold(0.0, f64::max)
    });
    InterpretationOutcome {
        interpretation,
        values,
        max_rel_error,
    }
}
