use serde::{Deserialize, Serialize};

use crate::design::Relation;
use crate::optics::MAX_READOUT_SCATTER_FRACTION;
use crate::pipeline::DerivedDesign;
use crate::trapchip::E_MAX_LIMIT;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintEntry {
    pub name: String,
    pub relation: Relation,
    pub bound: f64,
    pub actual: f64,
    pub pass: bool,
    pub rationale: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub entries: Vec<ConstraintEntry>,
}

impl ConstraintReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConstraintEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    /// Summed relative violation of the failing entries.
    pub fn violation(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.relation.violation(e.actual, e.bound))
            .sum()
    }

    fn push(&mut self, name: &str, relation: Relation, bound: f64, actual: f64, rationale: &str) {
        self.entries.push(ConstraintEntry {
            name: name.to_string(),
            relation,
            bound,
            actual,
            pass: relation.holds(actual, bound),
            rationale: rationale.to_string(),
        });
    }
}

/// Feasibility limits applied by [`check_constraints`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintLimits {
    pub split_heating_max: f64,
    pub gate_heating_max: f64,
    pub readout_scatter_max: f64,
    pub e_max: f64,
    /// Minimum gate-zone electrode distance in wavelengths.
    pub gate_rho_over_wavelength: f64,
    pub gamma1_max: f64,
    pub gamma_m_max: f64,
}

impl Default for ConstraintLimits {
    fn default() -> Self {
        ConstraintLimits {
            split_heating_max: 1.0,
            gate_heating_max: 0.01,
            readout_scatter_max: MAX_READOUT_SCATTER_FRACTION,
            e_max: E_MAX_LIMIT,
            gate_rho_over_wavelength: 10.0,
            gamma1_max: 1e-3,
            gamma_m_max: 1e-3,
        }
    }
}

pub fn check_constraints(d: &DerivedDesign) -> ConstraintReport {
    check_constraints_with(d, &ConstraintLimits::default())
}

pub fn check_constraints_with(d: &DerivedDesign, limits: &ConstraintLimits) -> ConstraintReport {
    let c = &d.config;
    let mut report = ConstraintReport::default();
    report.push(
        "split_heating",
        Relation::AtMost,
        limits.split_heating_max,
        d.thermal.heating_during_split,
        "phonons gained during one split/recombine",
    );
    report.push(
        "gate_heating",
        Relation::AtMost,
        limits.gate_heating_max,
        d.thermal.heating_during_gate,
        "phonons gained during the phase gate must be negligible",
    );
    report.push(
        "readout_scatter",
        Relation::AtMost,
        limits.readout_scatter_max,
        d.readout.scatter_fraction,
        "scattered readout light must stay well below the fluorescence",
    );
    report.push(
        "field_emission",
        Relation::AtMost,
        limits.e_max,
        c.geometry.e_max_v_per_m,
        "d.c. surface field below the field-emission region",
    );
    report.push(
        "gate_zone_clearance",
        Relation::AtLeast,
        limits.gate_rho_over_wavelength * c.species.wavelength_m,
        c.geometry.gate_zone_rho(),
        "gate-zone electrodes well clear of the laser beams",
    );
    let floor = d.raman.eta * d.raman.p0;
    report.push(
        "raman_feasibility",
        Relation::Above,
        floor,
        c.optics.eps_s_target,
        "scattering target above the motional-heating floor eta P0",
    );
    report.push(
        "gamma1",
        Relation::AtMost,
        limits.gamma1_max,
        c.encoding.gamma1,
        "single-p-bit gate error",
    );
    report.push(
        "gamma_m",
        Relation::AtMost,
        limits.gamma_m_max,
        c.encoding.gamma_m,
        "measurement error",
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::DesignConfig;
    use crate::pipeline::derive;

    #[test]
    fn default_design_passes() {
        let r = check_constraints(&derive(&DesignConfig::cd_default()).unwrap());
        assert!(r.pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.violation(), 0.0);
    }

    #[test]
    fn small_rho_fails_split_heating() {
        let mut c = DesignConfig::cd_default();
        c.geometry.rho_m = 1e-6;
        let r = check_constraints(&derive(&c).unwrap());
        let failed: Vec<_> = r.failures().map(|e| e.name.as_str()).collect();
        assert!(failed.contains(&"split_heating"), "{failed:?}");
    }

    #[test]
    fn high_field_fails_field_emission() {
        let mut c = DesignConfig::cd_default();
        c.geometry.e_max_v_per_m = 3e8;
        let r = check_constraints(&derive(&c).unwrap());
        let failed: Vec<_> = r.failures().map(|e| e.name.as_str()).collect();
        assert_eq!(failed, ["field_emission"]);
    }
}
