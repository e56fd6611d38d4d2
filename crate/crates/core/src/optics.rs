//! Laser-side budgets: fluorescence readout and the Raman gate chain.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::atomdata::{constants, IonSpecies};
use crate::error::{ensure, Error, Result};

/// Largest fraction of the readout beam power that may be scattered into the
/// detector without swamping the fluorescence signal.
pub const MAX_READOUT_SCATTER_FRACTION: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutConfig {
    /// Combined collection and detection efficiency.
    pub collection_efficiency: f64,
    pub mean_counts: f64,
    /// A bright ion is misread if it yields fewer counts than this.
    pub count_threshold: u32,
    pub beam_radius_m: f64,
    /// Fraction of the readout beam scattered by the chip into the detector.
    pub scatter_fraction: f64,
}

impl ReadoutConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.collection_efficiency > 0.0 && self.collection_efficiency <= 1.0,
            "optics.collection_efficiency",
            "must lie in (0, 1]",
        )?;
        ensure(
            self.mean_counts >= 0.0 && self.mean_counts.is_finite(),
            "optics.mean_counts",
            "must be >= 0",
        )?;
        ensure(
            self.count_threshold >= 1,
            "optics.count_threshold",
            "must be >= 1",
        )?;
        ensure(
            self.beam_radius_m > 0.0,
            "optics.beam_radius_m",
            "must be > 0",
        )?;
        ensure(
            (0.0..1.0).contains(&self.scatter_fraction),
            "optics.readout_scatter_fraction",
            "must lie in [0, 1)",
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamanConfig {
    pub phase_gate_time_s: f64,
    /// Target infidelity from photon scattering per two-ion gate.
    pub scattering_target: f64,
    pub beam_radius_m: f64,
    /// Number of gate zones driven simultaneously (beam pairs).
    pub n_parallel: u64,
}

impl RamanConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.phase_gate_time_s > 0.0,
            "optics.tau_p_s",
            "must be > 0",
        )?;
        ensure(
            self.scattering_target > 0.0 && self.scattering_target < 1.0,
            "optics.eps_s_target",
            "must lie in (0, 1)",
        )?;
        ensure(
            self.beam_radius_m > 0.0,
            "optics.beam_radius_m",
            "must be > 0",
        )?;
        ensure(self.n_parallel >= 1, "n_parallel", "must be >= 1")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamanDerived {
    /// Stretch-mode frequency, Hz.
    pub nu_str: f64,
    /// Centre-of-mass mode frequency, Hz.
    pub nu_com: f64,
    /// Stretch-mode Lamb-Dicke parameter.
    pub eta: f64,
    /// Carrier Raman Rabi frequency, rad/s.
    pub rabi_rad_per_s: f64,
    pub saturation_intensity: f64,
    /// Recoil frequency, Hz.
    pub recoil_hz: f64,
    /// Scattered photons per carrier pi-pulse at the inter-fine-structure minimum.
    pub p0: f64,
    /// Intensity that would give the gate rate at the scattering minimum, W/m^2.
    pub intensity_p0: f64,
    /// Operating intensity per beam, W/m^2.
    pub intensity: f64,
    pub beam_power: f64,
    pub total_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutDerived {
    pub measurement_time: f64,
    pub p_meas_error: f64,
    pub fluorescence_power: f64,
    pub readout_beam_power: f64,
    pub max_scatter_fraction: f64,
    pub scatter_fraction: f64,
    /// Scattered readout light relative to the fluorescence of one ion.
    pub background_ratio: f64,
}

/// `I0 = 4 pi^2 Gamma hbar c / (3 lambda^3)`, W/m^2.
pub fn saturation_intensity(species: &IonSpecies) -> f64 {
    let k = constants();
    4.0 * PI * PI * species.linewidth_rad_per_s * k.hbar * k.c
        / (3.0 * species.wavelength_m.powi(3))
}

/// `R = h / (2 A u lambda^2)`, Hz.
pub fn recoil_frequency(species: &IonSpecies) -> f64 {
    let k = constants();
    k.planck_h / (2.0 * species.mass_number * k.atomic_mass_unit * species.wavelength_m.powi(2))
}

/// Probability that a fluorescing ion gives fewer than `threshold` counts when
/// the mean is `mean_counts` (Poisson lower tail). For a threshold of 2 this
/// is `(1 + c) exp(-c)`.
pub fn measurement_error(mean_counts: f64, threshold: u32) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 0..threshold {
        if j > 0 {
            term *= mean_counts / f64::from(j);
        }
        sum += term;
    }
    (sum * (-mean_counts).exp()).clamp(0.0, 1.0)
}

/// `t_m = 4 c / (epsilon Gamma)`; the 4 is the inverse excited-state fraction
/// of a saturated ion.
pub fn measurement_time(mean_counts: f64, efficiency: f64, species: &IonSpecies) -> f64 {
    4.0 * mean_counts / (efficiency * species.linewidth_rad_per_s)
}

pub fn readout_budget(species: &IonSpecies, cfg: &ReadoutConfig) -> ReadoutDerived {
    let k = constants();
    let fluorescence_power =
        species.linewidth_rad_per_s * k.planck_h * k.c / (2.0 * species.wavelength_m);
    let readout_beam_power = PI * cfg.beam_radius_m.powi(2) * saturation_intensity(species);
    ReadoutDerived {
        measurement_time: measurement_time(cfg.mean_counts, cfg.collection_efficiency, species),
        p_meas_error: measurement_error(cfg.mean_counts, cfg.count_threshold),
        fluorescence_power,
        readout_beam_power,
        max_scatter_fraction: MAX_READOUT_SCATTER_FRACTION,
        scatter_fraction: cfg.scatter_fraction,
        background_ratio: cfg.scatter_fraction * readout_beam_power / fluorescence_power,
    }
}

/// `P0 = 2 sqrt(2) pi Gamma / omega_F`.
pub fn scattering_floor(species: &IonSpecies) -> f64 {
    2.0 * SQRT_2 * PI * species.linewidth_rad_per_s / species.fine_structure_rad_per_s
}

pub fn derive_raman(species: &IonSpecies, cfg: &RamanConfig) -> Result<RamanDerived> {
    cfg.validate()?;
    let tau = cfg.phase_gate_time_s;
    let gamma = species.linewidth_rad_per_s;

    let nu_str = 4.0 / tau;
    let nu_com = nu_str / 3f64.sqrt();
    let recoil_hz = recoil_frequency(species);
    let eta = (recoil_hz / nu_str).sqrt();
    let rabi = PI / (eta * tau);
    let i_sat = saturation_intensity(species);
    let p0 = scattering_floor(species);
    let intensity_p0 = 6.0 * species.fine_structure_rad_per_s * (3.0 * SQRT_2 - 4.0) * rabi * i_sat
        / (gamma * gamma);

    let denominator = eta * cfg.scattering_target - eta * eta * p0;
    if denominator <= 0.0 {
        return Err(Error::InfeasibleScattering {
            target: cfg.scattering_target,
            minimum: eta * p0,
        });
    }
    let intensity = intensity_p0 * p0 / denominator;
    let beam_power = PI * cfg.beam_radius_m.powi(2) * intensity;

    Ok(RamanDerived {
        nu_str,
        nu_com,
        eta,
        rabi_rad_per_s: rabi,
        saturation_intensity: i_sat,
        recoil_hz,
        p0,
        intensity_p0,
        intensity,
        beam_power,
        total_power: 2.0 * cfg.n_parallel as f64 * beam_power,
    })
}

/// Forward scattering model `(I_P0 / I + eta^2) P0 / eta`.
pub fn scattering_infidelity(intensity: f64, derived: &RamanDerived) -> f64 {
    (derived.intensity_p0 / intensity + derived.eta * derived.eta) * derived.p0 / derived.eta
}

/// A known operating point for the gate-time scaling law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GatePoint {
    pub phase_gate_time_s: f64,
    pub intensity: f64,
    pub wavelength_m: f64,
    pub scattering_target: f64,
    /// kg
    pub mass: f64,
}

impl GatePoint {
    fn drive(&self) -> f64 {
        self.intensity * self.wavelength_m * self.scattering_target / self.mass
    }
}

/// Rescales the gate time with `tau_p ~ (I lambda eps_s / m)^(-1/2)`. Only the
/// `phase_gate_time_s` of `target` is ignored; the other fields describe the new
/// operating point.
pub fn gate_time_scaling(reference: &GatePoint, target: &GatePoint) -> f64 {
    reference.phase_gate_time_s * (reference.drive() / target.drive()).sqrt()
}
