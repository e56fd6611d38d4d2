//! What-if variations on a derived design: ancilla pipelining, redundant
//! readout ions and the qubit-count scaling with gate noise.

use serde::{Deserialize, Serialize};

use crate::budget::{self, LogicalBudget};
use crate::error::{Error, Result};
use crate::pipeline::DerivedDesign;

/// Upper edge (exclusive) of the gate-noise range where the qubit-count rule holds.
pub const RULE_OF_THUMB_LIMIT: f64 = 0.003;
pub const RULE_OF_THUMB_EXPONENT: f64 = 2.5;

/// Machine resources that grow with the amount of parallel hardware.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resources {
    pub n_pbits: f64,
    pub n_parallel: f64,
    pub n_beams: f64,
    pub n_electrodes: f64,
    pub total_laser_power: f64,
}

impl Resources {
    pub fn of(d: &DerivedDesign) -> Self {
        Resources {
            n_pbits: d.config.encoding.n_pbits as f64,
            n_parallel: d.encoding.n_parallel as f64,
            n_beams: 2.0 * d.encoding.n_parallel as f64,
            n_electrodes: d.electrical.n_electrodes as f64,
            total_laser_power: d.raman.total_power,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Resources {
            n_pbits: self.n_pbits * s,
            n_parallel: self.n_parallel * s,
            n_beams: self.n_beams * s,
            n_electrodes: self.n_electrodes * s,
            total_laser_power: self.total_laser_power * s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelinedBudget {
    pub scale: f64,
    /// Gate-time cost of the ancilla preparation per recovery, s.
    pub recovery_time: f64,
    pub budget: LogicalBudget,
    pub resources: Resources,
}

/// Prepares ancillas in `s` staggered pipelines so the `2w` serial gates of a
/// recovery shrink to `max(2w tau_g / s, tau_g)`, at `s` times the hardware.
pub fn scenario_ancilla_pipelining(d: &DerivedDesign, s: f64) -> Result<PipelinedBudget> {
    let width = d.config.encoding.ancilla_width;
    let max_scale = 2.0 * width as f64;
    if !(1.0..=max_scale).contains(&s) {
        return Err(Error::invalid(
            "scenario.pipelining_scale",
            format!("must lie in [1, {max_scale}]"),
        ));
    }
    let b = &d.budget;
    let recovery_time = (2.0 * width as f64 * b.gate_time / s).max(b.gate_time);
    let rate = 1.0
        / (recovery_time + 2.0 * d.readout.measurement_time + d.config.encoding.syndrome_time_s);
    let budget = LogicalBudget {
        logical_gate_time: 1.0 / rate,
        logical_rate: rate,
        ..b.clone()
    };
    Ok(PipelinedBudget {
        scale: s,
        recovery_time,
        budget,
        resources: Resources::of(d).scaled(s),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedundantReadout {
    pub copies: u64,
    pub measurement_time: f64,
    pub p_meas_error: f64,
    pub budget: LogicalBudget,
}

/// Readout time when `k` ions share the fluorescence budget after `k - 1`
/// serial coupling gates.
pub fn redundant_measurement_time(measurement_time: f64, phase_gate_time: f64, k: u64) -> f64 {
    measurement_time / k as f64 + (k as f64 - 1.0) * phase_gate_time
}

/// Copies each measured bit onto `k` ions and reads them together. The total
/// mean count, and so the threshold error, is unchanged.
pub fn scenario_measurement_redundancy(d: &DerivedDesign, k: u64) -> Result<RedundantReadout> {
    if k == 0 || k.is_multiple_of(2) {
        return Err(Error::invalid(
            "scenario.redundancy_k",
            "must be odd and >= 1 (majority vote)",
        ));
    }
    let t_m = redundant_measurement_time(d.readout.measurement_time, d.config.optics.tau_p_s, k);
    let e = &d.config.encoding;
    let rate =
        budget::logical_gate_rate(e.ancilla_width, d.budget.gate_time, t_m, e.syndrome_time_s);
    let budget = LogicalBudget {
        logical_gate_time: 1.0 / rate,
        logical_rate: rate,
        ..d.budget.clone()
    };
    Ok(RedundantReadout {
        copies: k,
        measurement_time: t_m,
        p_meas_error: d.readout.p_meas_error,
        budget,
    })
}

/// Odd `k` in `1..=k_max` minimising the redundant readout time.
pub fn optimal_redundancy(measurement_time: f64, phase_gate_time: f64, k_max: u64) -> u64 {
    (1..=k_max)
        .step_by(2)
        .min_by(|&a, &b| {
            redundant_measurement_time(measurement_time, phase_gate_time, a).total_cmp(
                &redundant_measurement_time(measurement_time, phase_gate_time, b),
            )
        })
        .unwrap_or(1)
}

/// Nearest odd integer to the continuous optimum `sqrt(t_m / tau_p)`.
pub fn redundancy_estimate(measurement_time: f64, phase_gate_time: f64) -> u64 {
    let k = (measurement_time / phase_gate_time).sqrt();
    let lower = ((k - 1.0) / 2.0).floor().max(0.0) as u64 * 2 + 1;
    if (k - lower as f64).abs() <= (lower as f64 + 2.0 - k).abs() {
        lower
    } else {
        lower + 2
    }
}

/// Qubit count at gate noise `gamma`, scaled from a reference count at `gamma_ref`.
pub fn noise_scaling_rule(gamma: f64, gamma_ref: f64, n_ref: f64) -> Result<f64> {
    for g in [gamma, gamma_ref] {
        if g >= RULE_OF_THUMB_LIMIT {
            return Err(Error::OutsideRuleOfThumb(g));
        }
        if g.is_nan() || g <= 0.0 {
            return Err(Error::invalid("scenario.noise_gamma", "must be > 0"));
        }
    }
    if n_ref.is_nan() || n_ref <= 0.0 {
        return Err(Error::invalid("scenario.noise_n_ref", "must be > 0"));
    }
    Ok(n_ref * (gamma / gamma_ref).powf(RULE_OF_THUMB_EXPONENT))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::DesignConfig;
    use crate::pipeline::derive;

    fn design() -> DerivedDesign {
        derive(&DesignConfig::cd_default()).unwrap()
    }

    #[test]
    fn pipelining_identity_and_limit() {
        let d = design();
        let one = scenario_ancilla_pipelining(&d, 1.0).unwrap();
        assert_eq!(one.budget, d.budget);
        assert_eq!(one.resources, Resources::of(&d));
        let full = scenario_ancilla_pipelining(&d, 94.0).unwrap();
        assert_eq!(full.recovery_time, d.budget.gate_time);
        assert!(
            (full.budget.logical_rate / 48.4e3 - 1.0).abs() < 0.01,
            "{}",
            full.budget.logical_rate
        );
        let ten = scenario_ancilla_pipelining(&d, 10.0).unwrap();
        assert!((ten.budget.logical_rate / 32.4e3 - 1.0).abs() < 0.01);
        assert_eq!(
            ten.resources.n_electrodes,
            10.0 * d.electrical.n_electrodes as f64
        );
        assert!(scenario_ancilla_pipelining(&d, 0.5).is_err());
        assert!(scenario_ancilla_pipelining(&d, 95.0).is_err());
    }

    #[test]
    fn redundancy() {
        let d = design();
        assert_eq!(
            scenario_measurement_redundancy(&d, 1).unwrap().budget,
            d.budget
        );
        let three = scenario_measurement_redundancy(&d, 3).unwrap();
        assert!((three.measurement_time / 3.41e-6 - 1.0).abs() < 0.01);
        assert!(three.budget.logical_rate > d.budget.logical_rate);
        assert!(scenario_measurement_redundancy(&d, 2).is_err());
        assert!(scenario_measurement_redundancy(&d, 0).is_err());
        let t_m = d.readout.measurement_time;
        assert_eq!(optimal_redundancy(t_m, 0.5e-6, 15), 3);
        assert_eq!(redundancy_estimate(t_m, 0.5e-6), 3);
        assert_eq!(redundancy_estimate(121.0, 1.0), 11);
        assert_eq!(redundancy_estimate(0.5, 1.0), 1);
    }

    #[test]
    fn noise_rule() {
        assert_eq!(noise_scaling_rule(1e-4, 1e-4, 6444.0).unwrap(), 6444.0);
        let n = noise_scaling_rule(2e-4, 1e-4, 6444.0).unwrap();
        assert!((n / 36452.7 - 1.0).abs() < 1e-4, "{n}");
        assert_eq!(
            noise_scaling_rule(0.003, 1e-4, 6444.0),
            Err(Error::OutsideRuleOfThumb(0.003))
        );
        assert!(noise_scaling_rule(1e-4, 0.0, 6444.0).is_err());
    }
}
