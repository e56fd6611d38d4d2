//! Trap electrostatics, chip electrical accounting, anomalous heating and the
//! thermal gate error.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::atomdata::constants;
use crate::error::{ensure, Error, Result};

/// Exponent of the empirical `S = a / rho^4` field-noise law.
pub const NOISE_DISTANCE_EXPONENT: i32 = 4;

/// d.c. field at the electrode surface above which field emission becomes a risk.
pub const E_MAX_LIMIT: f64 = 2e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapGeometry {
    /// Nearest ion-electrode distance in splitting/transport zones, m.
    pub rho_m: f64,
    /// Electrode distance multiplier in gate zones.
    pub gate_zone_factor: f64,
    /// Octopole geometric factor.
    pub mu8: f64,
    /// r.f. quadrupole geometric factor.
    pub mu4: f64,
    /// Maximum d.c. field at the electrode surface, V/m.
    pub e_max_v_per_m: f64,
    /// r.f. field amplitude, V/m.
    pub e_rf_v_per_m: f64,
    pub mathieu_q: f64,
    pub loss_tangent: f64,
}

impl TrapGeometry {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.rho_m > 0.0 && self.rho_m.is_finite(),
            "geometry.rho_m",
            "must be > 0",
        )?;
        ensure(
            self.gate_zone_factor >= 1.0,
            "geometry.gate_zone_factor",
            "must be >= 1",
        )?;
        ensure(
            self.mu8 > 0.0 && self.mu8 < 1.0,
            "geometry.mu8",
            "must lie in (0, 1)",
        )?;
        ensure(
            self.mu4 > 0.0 && self.mu4 < 1.0,
            "geometry.mu4",
            "must lie in (0, 1)",
        )?;
        ensure(
            self.e_max_v_per_m > 0.0,
            "geometry.e_max_v_per_m",
            "must be > 0",
        )?;
        ensure(
            self.e_rf_v_per_m > 0.0,
            "geometry.e_rf_v_per_m",
            "must be > 0",
        )?;
        ensure(
            self.mathieu_q > 0.0 && self.mathieu_q < 0.9,
            "geometry.mathieu_q",
            "must lie in (0, 0.9)",
        )?;
        ensure(
            self.loss_tangent > 0.0,
            "geometry.loss_tangent",
            "must be > 0",
        )
    }

    pub fn gate_zone_rho(&self) -> f64 {
        self.rho_m * self.gate_zone_factor
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatingModel {
    /// Field-noise coefficient `a` in `S = a / rho^4`, (V m)^2/Hz.
    pub noise_coefficient: f64,
    /// Mean vibrational quantum number reached by cooling.
    pub n_bar_target: f64,
}

impl HeatingModel {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.noise_coefficient >= 0.0,
            "geometry.noise_coefficient",
            "must be >= 0",
        )?;
        ensure(self.n_bar_target > 0.0, "encoding.n_bar", "must be > 0")
    }

    /// Whether `a` lies inside the experimentally observed decade band around 1e-26.
    pub fn noise_in_observed_band(&self) -> bool {
        (1e-27..=1e-25).contains(&self.noise_coefficient)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChipElectrical {
    /// m^2
    pub area: f64,
    pub n_electrodes: u64,
    /// per m^2
    pub electrode_density: f64,
    /// F
    pub capacitance_per_pbit: f64,
    /// W, evaluated with the drive frequency in rad/s.
    pub rf_power: f64,
    pub v_rms: f64,
    /// r.f. drive, rad/s.
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialChain {
    /// Radial secular frequency, Hz.
    pub nu_r: f64,
    /// r.f. drive frequency, rad/s.
    pub omega: f64,
    pub v_rms: f64,
}

/// Centre-of-mass frequency at the point where the double well appears,
/// `840 / (2 pi sqrt(A)) (mu8 E_max / rho^3)^(3/10)`, evaluated in SI.
pub fn split_frequency(mass_number: f64, mu8: f64, e_max: f64, rho: f64) -> f64 {
    840.0 / (2.0 * PI * mass_number.sqrt()) * (mu8 * e_max / rho.powi(3)).powf(0.3)
}

pub fn radial_chain(mass_number: f64, q: f64, mu4: f64, e_rf: f64, rho: f64) -> RadialChain {
    let k = constants();
    let nu_r = (q * k.elementary_charge / (2.0 * mass_number * k.atomic_mass_unit) * mu4 * e_rf
        / rho)
        .sqrt()
        / (2.0 * PI);
    RadialChain {
        nu_r,
        omega: 2.0 * PI * (2.0 * SQRT_2 * nu_r / q),
        v_rms: mu4 * rho * e_rf / SQRT_2,
    }
}

/// 30 electrodes per gate zone plus 20 per p-bit.
pub fn electrode_count(n_pbits: u64, n_parallel: u64) -> u64 {
    30 * n_parallel + 20 * n_pbits
}

pub fn electrical_architecture(
    n_pbits: u64,
    n_parallel: u64,
    rho: f64,
    loss_tangent: f64,
    v_rms: f64,
    omega: f64,
) -> Result<ChipElectrical> {
    ensure(n_pbits >= 1, "encoding.n_pbits", "must be >= 1")?;
    ensure(n_parallel >= 1, "n_parallel", "must be >= 1")?;
    ensure(rho > 0.0, "geometry.rho_m", "must be > 0")?;
    let area = 50.0 * n_pbits as f64 * rho * rho;
    let n_electrodes = electrode_count(n_pbits, n_parallel);
    let capacitance = 20.0 * rho * constants().vacuum_permittivity;
    Ok(ChipElectrical {
        area,
        n_electrodes,
        electrode_density: n_electrodes as f64 / area,
        capacitance_per_pbit: capacitance,
        rf_power: n_pbits as f64 * v_rms * v_rms * omega * capacitance * loss_tangent,
        v_rms,
        omega,
    })
}

/// `dn/dt = e^2 S(nu) / (4 m h nu)` with `S = a / rho^4`. `nu` in Hz, `mass` in kg.
pub fn heating_rate(rho: f64, noise_coefficient: f64, nu: f64, mass: f64) -> f64 {
    let k = constants();
    let spectral_density = noise_coefficient / rho.powi(NOISE_DISTANCE_EXPONENT);
    k.elementary_charge.powi(2) * spectral_density / (4.0 * mass * k.planck_h * nu)
}

/// `0.3 pi^2 eta^4 n (n + 1)`.
pub fn thermal_gate_error(eta: f64, n_bar: f64) -> f64 {
    0.3 * PI * PI * eta.powi(4) * n_bar * (n_bar + 1.0)
}

pub fn cooling_time(n_bar: f64, nu_com: f64) -> Result<f64> {
    if n_bar <= 0.0 {
        return Err(Error::invalid(
            "n_bar",
            "cooling to n = 0 takes unbounded time",
        ));
    }
    ensure(nu_com > 0.0, "nu_com", "must be > 0")?;
    Ok(1.0 / (n_bar * nu_com))
}

pub fn heating_during(duration: f64, rate: f64) -> f64 {
    duration * rate
}

/// Mean phonons gained during one split-and-recombine at distance `rho`, with
/// the mode sitting at the split frequency the whole time.
pub fn split_heating(rho: f64, split_hz: f64, noise_coefficient: f64, mass: f64) -> f64 {
    heating_during(
        2.0 / split_hz,
        heating_rate(rho, noise_coefficient, split_hz, mass),
    )
}

/// Which of a formula/anchored pair feeds downstream calculations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueSource {
    Formula,
    Anchored,
}

/// A quantity whose formula evaluation disagrees with the tabulated design
/// value. The anchored value is the formula times a fixed calibration factor,
/// chosen so the two agree at the reference design point; it therefore keeps
/// every scaling of the formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchored {
    pub formula: f64,
    pub anchored: f64,
    pub source: ValueSource,
}

impl Anchored {
    pub fn new(formula: f64, calibration: f64, source: ValueSource) -> Self {
        Anchored {
            formula,
            anchored: formula * calibration,
            source,
        }
    }

    pub fn value(&self) -> f64 {
        match self.source {
            ValueSource::Formula => self.formula,
            ValueSource::Anchored => self.anchored,
        }
    }
}

/// The reference trap design against which anchored values are calibrated.
pub mod reference {
    use super::*;

    pub const MASS_NUMBER: f64 = 111.0;
    pub const RHO: f64 = 10e-6;
    pub const MU8: f64 = 0.02;
    pub const E_MAX: f64 = 2e8;
    pub const MU4: f64 = 0.15;
    pub const E_RF: f64 = 1e8;
    pub const Q: f64 = 0.3;
    pub const LOSS_TANGENT: f64 = 5e-4;
    pub const N_PBITS: u64 = 6444;
    pub const GATE_ZONE_FACTOR: f64 = 10.0;
    pub const NOISE: f64 = 1e-26;
    /// Stretch frequency at the reference gate time of 0.5 us.
    pub const NU_STR: f64 = 8e6;

    pub fn split_frequency() -> f64 {
        super::split_frequency(MASS_NUMBER, MU8, E_MAX, RHO)
    }

    pub fn gate_heating_rate() -> f64 {
        let mass = MASS_NUMBER * constants().atomic_mass_unit;
        heating_rate(RHO * GATE_ZONE_FACTOR, NOISE, NU_STR, mass)
    }

    pub fn rf_power() -> f64 {
        let radial = radial_chain(MASS_NUMBER, Q, MU4, E_RF, RHO);
        let c = 20.0 * RHO * constants().vacuum_permittivity;
        N_PBITS as f64 * radial.v_rms.powi(2) * radial.omega * c * LOSS_TANGENT
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    const CD_MASS: f64 = 111.0 * 1.660_539_066_60e-27;

    #[test]
    fn split_frequency_si_evaluation() {
        let f = split_frequency(111.0, 0.02, 2e8, 1e-5);
        assert!(rel(f, 38375666.00769059) < 1e-10);
        let doubled = split_frequency(111.0, 0.02, 4e8, 1e-5);
        assert!(rel(doubled / f, 2f64.powf(0.3)) < 1e-14);
    }

    #[test]
    fn radial_values() {
        let r = radial_chain(111.0, 0.3, 0.15, 1e8, 1e-5);
        assert!(rel(r.nu_r, 70e6) < 0.01);
        assert!(rel(r.nu_r, 70385070.41709703) < 1e-10);
        assert!(rel(r.omega / (2.0 * PI), 660e6) < 0.01);
        assert!(rel(r.v_rms, 106.0) < 0.001);
        let strong = radial_chain(111.0, 0.3, 0.15, 4e8, 1e-5);
        assert!(rel(strong.nu_r, 2.0 * r.nu_r) < 1e-14);
    }

    #[test]
    fn electrical_values() {
        let r = radial_chain(111.0, 0.3, 0.15, 1e8, 1e-5);
        let e = electrical_architecture(6444, 990, 1e-5, 5e-4, r.v_rms, r.omega).unwrap();
        assert_eq!(e.n_electrodes, 158_580);
        assert!(rel(e.area * 1e4, 0.3222) < 1e-10);
        assert!(rel(e.electrode_density * 1e-4, 4.9e5) < 0.01);
        assert!(rel(e.capacitance_per_pbit, 1.77e-15) < 0.001);
        assert!(rel(e.rf_power, 0.26763378779116237) < 1e-10);
        assert!(electrical_architecture(0, 0, 1e-5, 5e-4, r.v_rms, r.omega).is_err());
    }

    #[test]
    fn heating_values() {
        let gate = heating_rate(1e-4, 1e-26, 8e6, CD_MASS);
        assert!(rel(gate, 656.8144571333826) < 1e-10);
        assert!(rel(heating_rate(2e-4, 1e-26, 8e6, CD_MASS), gate / 16.0) < 1e-14);
        assert!(rel(heating_rate(1e-4, 1e-25, 8e6, CD_MASS), gate * 10.0) < 1e-14);
    }

    #[test]
    fn thermal_values() {
        assert!(rel(thermal_gate_error(0.07, 0.5), 5.3e-5) < 0.01);
        assert_eq!(thermal_gate_error(0.07, 0.0), 0.0);
        assert!(rel(thermal_gate_error(0.06, 0.5), 2.877976643357656e-05) < 1e-12);
    }

    #[test]
    fn cooling_values() {
        let t = cooling_time(0.5, 4.6e6).unwrap();
        assert!(rel(t, 4.35e-7) < 0.001);
        assert!(rel(cooling_time(1.0, 4.6e6).unwrap(), t / 2.0) < 1e-14);
        assert!(cooling_time(0.0, 4.6e6).is_err());
    }

    #[test]
    fn heating_during_values() {
        assert!(rel(heating_during(0.5e-6, 1e3), 5e-4) < 1e-14);
        assert_eq!(heating_during(0.0, 1e3), 0.0);
        // split at rho = 5 um using both sub-formulas directly
        let nu = split_frequency(111.0, 0.02, 2e8, 5e-6);
        let dn = heating_during(2.0 / nu, heating_rate(5e-6, 1e-26, nu, CD_MASS));
        assert!(dn > 0.1 && dn < 10.0, "{dn}");
    }

    #[test]
    fn default_split_heating_below_one() {
        let nu = split_frequency(111.0, 0.02, 2e8, 1e-5) * 15e6 / reference::split_frequency();
        assert!(split_heating(1e-5, nu, 1e-26, CD_MASS) < 1.0);
    }

    #[test]
    fn anchored_selection() {
        let a = Anchored::new(38e6, 15.0 / 38.0, ValueSource::Anchored);
        assert!(rel(a.value(), 15e6) < 1e-14);
        assert_eq!(
            Anchored {
                source: ValueSource::Formula,
                ..a
            }
            .value(),
            38e6
        );
    }

    #[test]
    fn reference_rf_power_matches_direct_evaluation() {
        assert!(rel(reference::rf_power(), 0.26763378779116237) < 1e-10);
    }
}
