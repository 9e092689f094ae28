use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use super::ExperimentError;
use crate::model::ModelParams;
use crate::solver::{solve, Method};

/// Largest queue capacity accepted by the sweep.
pub const MAX_SWEEP_QUEUE: u32 = 20;

/// The four `{LBT} × {buffering}` configurations of the queue-size sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Variant {
    LbtBuffering,
    /// LBT without a queue; the phase controller behaves as if `Q_θ = 0`.
    LbtOnly,
    BufferingOnly,
    Neither,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::LbtBuffering,
        Variant::LbtOnly,
        Variant::BufferingOnly,
        Variant::Neither,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Variant::LbtBuffering => "lbt+buffering",
            Variant::LbtOnly => "lbt-only",
            Variant::BufferingOnly => "buffering-only",
            Variant::Neither => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        Variant::ALL.into_iter().find(|v| v.label() == s)
    }

    pub fn lbt(self) -> bool {
        matches!(self, Variant::LbtBuffering | Variant::LbtOnly)
    }

    pub fn buffering(self) -> bool {
        matches!(self, Variant::LbtBuffering | Variant::BufferingOnly)
    }

    pub fn params(self, queue_capacity: u32) -> ModelParams {
        ModelParams::sweep_point(queue_capacity, self.lbt(), self.buffering())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub queue_capacity: u32,
    pub p_block_laa: f64,
    pub p_block_wifi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub variant: Variant,
    pub points: Vec<SweepPoint>,
}

impl SweepCurve {
    fn at(&self, q: u32) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.queue_capacity == q)
    }
}

/// Analytic dropping probabilities against queue capacity `Q` with `μ_w`
/// normalised to 1.
pub fn fig3_sweep(
    queue_range: RangeInclusive<u32>,
    variants: &[Variant],
) -> Result<Vec<SweepCurve>, ExperimentError> {
    let (from, to) = (*queue_range.start(), *queue_range.end());
    let threshold = ModelParams::sweep_point(MAX_SWEEP_QUEUE, true, true).queue_threshold;
    if variants.iter().any(|v| v.buffering())
        && (from < threshold || to > MAX_SWEEP_QUEUE || from > to)
    {
        return Err(ExperimentError::QueueRange {
            from,
            to,
            min: threshold,
        });
    }
    variants
        .iter()
        .map(|&variant| {
            let points = queue_range
                .clone()
                .map(|q| {
                    let (_, r) = solve(&variant.params(q), Method::Direct)?;
                    Ok(SweepPoint {
                        queue_capacity: q,
                        p_block_laa: r.p_block_laa,
                        p_block_wifi: r.p_block_wifi,
                    })
                })
                .collect::<Result<Vec<_>, ExperimentError>>()?;
            Ok(SweepCurve { variant, points })
        })
        .collect()
}

/// One ordinal property of the sweep, evaluated at every queue size.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Queue sizes at which the property fails.
    pub failing: Vec<u32>,
    pub detail: String,
}

/// The four expected curve orderings:
///
/// * (a) `none` has the lowest LAA dropping probability;
/// * (b) `lbt+buffering` has the lowest Wi-Fi dropping probability;
/// * (c) each buffered variant has lower Wi-Fi dropping than its
///   unbuffered counterpart;
/// * (d) LAA dropping of the buffered variants does not increase with `Q`.
///
/// Requires curves for all four variants over the same range.
pub fn check_orderings(curves: &[SweepCurve]) -> Vec<OrderingCheck> {
    let curve = |v: Variant| curves.iter().find(|c| c.variant == v);
    let qs: Vec<u32> = curves
        .first()
        .map(|c| c.points.iter().map(|p| p.queue_capacity).collect())
        .unwrap_or_default();
    let all = Variant::ALL.map(curve);
    let complete = all.iter().all(Option::is_some);

    let pointwise = |name, pred: &dyn Fn(u32) -> Option<bool>, detail: String| {
        let failing: Vec<u32> = qs
            .iter()
            .copied()
            .filter(|&q| pred(q) != Some(true))
            .collect();
        OrderingCheck {
            name,
            passed: complete && !qs.is_empty() && failing.is_empty(),
            failing,
            detail,
        }
    };
    let min_of = |target: Variant, pick: fn(&SweepPoint) -> f64, q: u32| -> Option<bool> {
        let own = pick(curve(target)?.at(q)?);
        let mut ok = true;
        for v in Variant::ALL {
            if v != target {
                ok &= own < pick(curve(v)?.at(q)?);
            }
        }
        Some(ok)
    };

    let mut out = Vec::new();
    out.push(pointwise(
        "(a) none minimises LAA dropping",
        &|q| min_of(Variant::Neither, |p| p.p_block_laa, q),
        String::from("P_b,laa(none) < P_b,laa(other variants)"),
    ));
    out.push(pointwise(
        "(b) lbt+buffering minimises Wi-Fi dropping",
        &|q| min_of(Variant::LbtBuffering, |p| p.p_block_wifi, q),
        String::from("P_b,wifi(lbt+buffering) < P_b,wifi(other variants)"),
    ));
    out.push(pointwise(
        "(c) buffering lowers Wi-Fi dropping",
        &|q| {
            let lbt = curve(Variant::LbtBuffering)?.at(q)?.p_block_wifi
                < curve(Variant::LbtOnly)?.at(q)?.p_block_wifi;
            let plain = curve(Variant::BufferingOnly)?.at(q)?.p_block_wifi
                < curve(Variant::Neither)?.at(q)?.p_block_wifi;
            Some(lbt && plain)
        },
        String::from("P_b,wifi(buffered) < P_b,wifi(unbuffered counterpart)"),
    ));
    let mut failing = Vec::new();
    for v in [Variant::LbtBuffering, Variant::BufferingOnly] {
        if let Some(c) = curve(v) {
            for w in c.points.windows(2) {
                if w[1].p_block_laa > w[0].p_block_laa {
                    failing.push(w[1].queue_capacity);
                }
            }
        }
    }
    failing.sort_unstable();
    failing.dedup();
    out.push(OrderingCheck {
        name: "(d) buffered LAA dropping non-increasing in Q",
        passed: complete && failing.is_empty(),
        failing,
        detail: String::from("P_b,laa(Q+1) <= P_b,laa(Q) for buffered variants"),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for v in Variant::ALL {
            assert_eq!(Variant::parse(v.label()), Some(v));
        }
        assert_eq!(Variant::parse("both"), None);
    }

    #[test]
    fn range_checked() {
        assert!(fig3_sweep(1..=5, &[Variant::LbtBuffering]).is_err());
        assert!(fig3_sweep(2..=21, &Variant::ALL).is_err());
        assert!(fig3_sweep(0..=3, &[Variant::Neither]).is_ok());
    }

    #[test]
    fn unbuffered_curves_are_flat() {
        let curves = fig3_sweep(2..=10, &[Variant::Neither, Variant::LbtOnly]).unwrap();
        for c in curves {
            let first = c.points[0];
            assert!(c.points.iter().all(
                |p| p.p_block_laa == first.p_block_laa && p.p_block_wifi == first.p_block_wifi
            ));
        }
    }

    #[test]
    fn unbuffered_no_lbt_point() {
        // two-class loss system with λ = μ = 1 for LAA and 0.5/1 for Wi-Fi:
        // π(idle) = 1/(1 + 0.5 + 0.5) = 0.5
        let curves = fig3_sweep(2..=2, &[Variant::Neither]).unwrap();
        let p = curves[0].points[0];
        assert!((p.p_block_laa - 0.5).abs() < 1e-12);
        assert!((p.p_block_wifi - 0.25).abs() < 1e-12);
    }
}
