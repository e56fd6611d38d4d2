//! Design configuration and the TOML design-file format.
//!
//! A design file has four required sections (`species`, `geometry`, `optics`,
//! `encoding`) and three optional ones (`overrides`, `scenario`, `sweep`).
//! All quantities are SI; the unit is part of the key name where it is not
//! dimensionless. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::atomdata::{load_species, DataProvenance, IonSpecies, SpeciesSpec};
use crate::budget::{CodeParams, CrashModel, EncodingParams};
use crate::error::{ensure, Error, Result};
use crate::optics::{RamanConfig, ReadoutConfig};
use crate::trapchip::{HeatingModel, TrapGeometry, ValueSource};

/// Laser and detection inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticsParams {
    pub collection_efficiency: f64,
    pub mean_counts: f64,
    #[serde(default = "default_threshold")]
    pub count_threshold: u32,
    /// Beam radius shared by readout and Raman beams, m.
    pub beam_radius_m: f64,
    pub tau_p_s: f64,
    pub eps_s_target: f64,
    #[serde(default = "default_scatter_fraction")]
    pub readout_scatter_fraction: f64,
}

fn default_threshold() -> u32 {
    2
}

fn default_scatter_fraction() -> f64 {
    1e-5
}

impl OpticsParams {
    pub fn readout(&self) -> ReadoutConfig {
        ReadoutConfig {
            collection_efficiency: self.collection_efficiency,
            mean_counts: self.mean_counts,
            count_threshold: self.count_threshold,
            beam_radius_m: self.beam_radius_m,
            scatter_fraction: self.readout_scatter_fraction,
        }
    }

    pub fn raman(&self, n_parallel: u64) -> RamanConfig {
        RamanConfig {
            phase_gate_time_s: self.tau_p_s,
            scattering_target: self.eps_s_target,
            beam_radius_m: self.beam_radius_m,
            n_parallel,
        }
    }
}

/// Anchoring of quantities whose formula value disagrees with the tabulated
/// design, plus the crash-law anchor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Overrides {
    pub split_frequency_source: ValueSource,
    /// Split frequency at the reference geometry, Hz.
    pub split_frequency_anchor_hz: f64,
    pub gate_heating_source: ValueSource,
    /// Gate-zone heating rate at the reference design, 1/s.
    pub gate_heating_anchor_per_s: f64,
    /// r.f. dissipation at the reference design, W. Reported only.
    pub rf_power_anchor_w: f64,
    pub crash_anchor_gamma2: f64,
    pub crash_anchor_probability: f64,
    pub crash_exponent: i32,
}

impl Default for Overrides {
    fn default() -> Self {
        let crash = CrashModel::default();
        Overrides {
            split_frequency_source: ValueSource::Anchored,
            split_frequency_anchor_hz: 15e6,
            gate_heating_source: ValueSource::Anchored,
            gate_heating_anchor_per_s: 1e3,
            rf_power_anchor_w: 24e-3,
            crash_anchor_gamma2: crash.anchor_gamma2,
            crash_anchor_probability: crash.anchor_probability,
            crash_exponent: crash.exponent,
        }
    }
}

impl Overrides {
    pub fn crash_model(&self) -> CrashModel {
        CrashModel {
            anchor_gamma2: self.crash_anchor_gamma2,
            anchor_probability: self.crash_anchor_probability,
            exponent: self.crash_exponent,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.split_frequency_anchor_hz > 0.0,
            "overrides.split_frequency_anchor_hz",
            "must be > 0",
        )?;
        ensure(
            self.gate_heating_anchor_per_s > 0.0,
            "overrides.gate_heating_anchor_per_s",
            "must be > 0",
        )?;
        ensure(
            self.rf_power_anchor_w > 0.0,
            "overrides.rf_power_anchor_w",
            "must be > 0",
        )?;
        self.crash_model().validate()
    }
}

/// Every free parameter of a machine design, validated.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignConfig {
    pub species: IonSpecies,
    pub geometry: TrapGeometry,
    pub heating: HeatingModel,
    pub optics: OpticsParams,
    pub encoding: EncodingParams,
    pub overrides: Overrides,
}

impl DesignConfig {
    /// The reference Cd+ design point.
    pub fn cd_default() -> Self {
        DesignConfig {
            species: load_species(&SpeciesSpec::Name("Cd+".into())).expect("registry entry"),
            geometry: TrapGeometry {
                rho_m: 10e-6,
                gate_zone_factor: 10.0,
                mu8: 0.02,
                mu4: 0.15,
                e_max_v_per_m: 2e8,
                e_rf_v_per_m: 1e8,
                mathieu_q: 0.3,
                loss_tangent: 5e-4,
            },
            heating: HeatingModel {
                noise_coefficient: 1e-26,
                n_bar_target: 0.5,
            },
            optics: OpticsParams {
                collection_efficiency: 0.02,
                mean_counts: 10.0,
                count_threshold: 2,
                beam_radius_m: 2e-6,
                tau_p_s: 0.5e-6,
                eps_s_target: 4e-5,
                readout_scatter_fraction: 1e-5,
            },
            encoding: EncodingParams {
                n_pbits: 6444,
                code: CodeParams {
                    n: 127,
                    k: 29,
                    d: 15,
                },
                ancilla_size: 1939,
                ancilla_width: 47,
                syndrome_time_s: 5e-6,
                memory_quality: 1e6,
                gamma1: 1e-3,
                gamma_m: 1e-3,
            },
            overrides: Overrides::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.species.validate()?;
        self.geometry.validate()?;
        self.heating.validate()?;
        self.optics.readout().validate()?;
        self.optics.raman(1).validate()?;
        self.encoding.validate()?;
        self.overrides.validate()
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        let g = &self.geometry;
        let o = &self.optics;
        let e = &self.encoding;
        let v = match key {
            "geometry.rho_m" => g.rho_m,
            "geometry.gate_zone_factor" => g.gate_zone_factor,
            "geometry.mu8" => g.mu8,
            "geometry.mu4" => g.mu4,
            "geometry.e_max_v_per_m" => g.e_max_v_per_m,
            "geometry.e_rf_v_per_m" => g.e_rf_v_per_m,
            "geometry.mathieu_q" => g.mathieu_q,
            "geometry.loss_tangent" => g.loss_tangent,
            "geometry.noise_coefficient" => self.heating.noise_coefficient,
            "optics.collection_efficiency" => o.collection_efficiency,
            "optics.mean_counts" => o.mean_counts,
            "optics.count_threshold" => f64::from(o.count_threshold),
            "optics.beam_radius_m" => o.beam_radius_m,
            "optics.tau_p_s" => o.tau_p_s,
            "optics.eps_s_target" => o.eps_s_target,
            "optics.readout_scatter_fraction" => o.readout_scatter_fraction,
            "encoding.n_pbits" => e.n_pbits as f64,
            "encoding.ancilla_size" => e.ancilla_size as f64,
            "encoding.ancilla_width" => e.ancilla_width as f64,
            "encoding.t_sp_s" => e.syndrome_time_s,
            "encoding.memory_quality" => e.memory_quality,
            "encoding.gamma1" => e.gamma1,
            "encoding.gamma_m" => e.gamma_m,
            "encoding.n_bar" => self.heating.n_bar_target,
            "species.linewidth_rad_per_s" => self.species.linewidth_rad_per_s,
            "species.wavelength_m" => self.species.wavelength_m,
            "species.mass_number" => self.species.mass_number,
            "species.fine_structure_rad_per_s" => self.species.fine_structure_rad_per_s,
            _ => return Err(Error::UnknownParameter(key.to_string())),
        };
        Ok(v)
    }

    /// Sets a numeric parameter by its design-file key. Integer parameters are
    /// rounded to the nearest count. The result is not re-validated.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let count = |v: f64| -> Result<u64> {
            if v.is_finite() && v >= 0.0 {
                Ok(v.round() as u64)
            } else {
                Err(Error::invalid(key, "must be a non-negative count"))
            }
        };
        let species_edit = key.starts_with("species.");
        match key {
            "geometry.rho_m" => self.geometry.rho_m = value,
            "geometry.gate_zone_factor" => self.geometry.gate_zone_factor = value,
            "geometry.mu8" => self.geometry.mu8 = value,
            "geometry.mu4" => self.geometry.mu4 = value,
            "geometry.e_max_v_per_m" => self.geometry.e_max_v_per_m = value,
            "geometry.e_rf_v_per_m" => self.geometry.e_rf_v_per_m = value,
            "geometry.mathieu_q" => self.geometry.mathieu_q = value,
            "geometry.loss_tangent" => self.geometry.loss_tangent = value,
            "geometry.noise_coefficient" => self.heating.noise_coefficient = value,
            "optics.collection_efficiency" => self.optics.collection_efficiency = value,
            "optics.mean_counts" => self.optics.mean_counts = value,
            "optics.count_threshold" => {
                self.optics.count_threshold =
                    u32::try_from(count(value)?).map_err(|_| Error::invalid(key, "out of range"))?
            }
            "optics.beam_radius_m" => self.optics.beam_radius_m = value,
            "optics.tau_p_s" => self.optics.tau_p_s = value,
            "optics.eps_s_target" => self.optics.eps_s_target = value,
            "optics.readout_scatter_fraction" => self.optics.readout_scatter_fraction = value,
            "encoding.n_pbits" => self.encoding.n_pbits = count(value)?,
            "encoding.ancilla_size" => self.encoding.ancilla_size = count(value)?,
            "encoding.ancilla_width" => self.encoding.ancilla_width = count(value)?,
            "encoding.t_sp_s" => self.encoding.syndrome_time_s = value,
            "encoding.memory_quality" => self.encoding.memory_quality = value,
            "encoding.gamma1" => self.encoding.gamma1 = value,
            "encoding.gamma_m" => self.encoding.gamma_m = value,
            "encoding.n_bar" => self.heating.n_bar_target = value,
            "species.linewidth_rad_per_s" => self.species.linewidth_rad_per_s = value,
            "species.wavelength_m" => self.species.wavelength_m = value,
            "species.mass_number" => self.species.mass_number = value,
            "species.fine_structure_rad_per_s" => self.species.fine_structure_rad_per_s = value,
            _ => return Err(Error::UnknownParameter(key.to_string())),
        }
        if species_edit {
            self.species.provenance = DataProvenance::Custom;
        }
        Ok(())
    }
}

/// Keys accepted by [`DesignConfig::get`] and [`DesignConfig::set`].
pub const PARAMETER_KEYS: &[&str] = &[
    "geometry.rho_m",
    "geometry.gate_zone_factor",
    "geometry.mu8",
    "geometry.mu4",
    "geometry.e_max_v_per_m",
    "geometry.e_rf_v_per_m",
    "geometry.mathieu_q",
    "geometry.loss_tangent",
    "geometry.noise_coefficient",
    "optics.collection_efficiency",
    "optics.mean_counts",
    "optics.count_threshold",
    "optics.beam_radius_m",
    "optics.tau_p_s",
    "optics.eps_s_target",
    "optics.readout_scatter_fraction",
    "encoding.n_pbits",
    "encoding.ancilla_size",
    "encoding.ancilla_width",
    "encoding.t_sp_s",
    "encoding.memory_quality",
    "encoding.gamma1",
    "encoding.gamma_m",
    "encoding.n_bar",
    "species.linewidth_rad_per_s",
    "species.wavelength_m",
    "species.mass_number",
    "species.fine_structure_rad_per_s",
];

// ---------------------------------------------------------------------------
// File format

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesSection {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linewidth_rad_per_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavelength_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_number: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fine_structure_rad_per_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<DataProvenance>,
}

impl SpeciesSection {
    fn spec(&self) -> Result<SpeciesSpec> {
        let fields = [
            self.linewidth_rad_per_s,
            self.wavelength_m,
            self.mass_number,
            self.fine_structure_rad_per_s,
        ];
        match fields {
            [None, None, None, None] => Ok(SpeciesSpec::Name(self.name.clone())),
            [Some(linewidth), Some(wavelength), Some(mass), Some(fine)] => Ok(SpeciesSpec::Record(IonSpecies {
                name: self.name.clone(),
                linewidth_rad_per_s: linewidth,
                wavelength_m: wavelength,
                mass_number: mass,
                fine_structure_rad_per_s: fine,
                provenance: self.provenance.unwrap_or(DataProvenance::Custom),
            })),
            _ => Err(Error::invalid(
                "species",
                "give either a registry name only or all of linewidth_rad_per_s, wavelength_m, mass_number, fine_structure_rad_per_s",
            )),
        }
    }

    fn from_species(s: &IonSpecies) -> Self {
        if let Some(name) = s.registry_name() {
            return SpeciesSection {
                name: name.to_string(),
                linewidth_rad_per_s: None,
                wavelength_m: None,
                mass_number: None,
                fine_structure_rad_per_s: None,
                provenance: None,
            };
        }
        SpeciesSection {
            name: s.name.clone(),
            linewidth_rad_per_s: Some(s.linewidth_rad_per_s),
            wavelength_m: Some(s.wavelength_m),
            mass_number: Some(s.mass_number),
            fine_structure_rad_per_s: Some(s.fine_structure_rad_per_s),
            provenance: Some(s.provenance),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub rho_m: f64,
    pub gate_zone_factor: f64,
    pub mu8: f64,
    pub mu4: f64,
    pub e_max_v_per_m: f64,
    pub e_rf_v_per_m: f64,
    pub mathieu_q: f64,
    pub loss_tangent: f64,
    pub noise_coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodingSection {
    pub n_pbits: u64,
    pub code_n: u64,
    pub code_k: u64,
    pub code_d: u64,
    pub ancilla_size: u64,
    pub ancilla_width: u64,
    pub t_sp_s: f64,
    pub memory_quality: f64,
    pub gamma1: f64,
    pub gamma_m: f64,
    pub n_bar: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    /// Ancilla-pipelining resource multiplier `s`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pipelining_scale: Option<f64>,
    /// Number of ions read out per measured p-bit (odd).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub redundancy_k: Option<u64>,
    /// Physical gate error for the size-versus-noise rule of thumb.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_gamma: Option<f64>,
    /// Reference error for the rule of thumb; defaults to the design's gamma2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_gamma_ref: Option<f64>,
}

impl ScenarioSection {
    pub fn is_empty(&self) -> bool {
        self == &ScenarioSection::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default = "linear")]
    pub scale: AxisScale,
}

fn linear() -> AxisScale {
    AxisScale::Linear
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
}

impl Relation {
    pub fn holds(self, actual: f64, bound: f64) -> bool {
        match self {
            Relation::AtMost => actual <= bound,
            Relation::AtLeast => actual >= bound,
            Relation::Below => actual < bound,
            Relation::Above => actual > bound,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Below => "<",
            Relation::Above => ">",
        }
    }

    /// How far `actual` is from satisfying the relation, relative to the bound;
    /// zero when it holds.
    pub fn violation(self, actual: f64, bound: f64) -> f64 {
        if self.holds(actual, bound) {
            return 0.0;
        }
        if actual.is_nan() {
            return f64::INFINITY;
        }
        let scale = if bound != 0.0 { bound.abs() } else { 1.0 };
        // strict relations failing at equality still count as a violation
        ((actual - bound).abs() / scale).max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConstraint {
    pub field: String,
    pub relation: Relation,
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Goal {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub objective: String,
    #[serde(default = "minimize")]
    pub goal: Goal,
    pub axes: Vec<SweepAxis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<FieldConstraint>,
}

fn minimize() -> Goal {
    Goal::Minimize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignFile {
    pub species: SpeciesSection,
    pub geometry: GeometrySection,
    pub optics: OpticsParams,
    pub encoding: EncodingSection,
    #[serde(default)]
    pub overrides: Overrides,
    #[serde(default, skip_serializing_if = "ScenarioSection::is_empty")]
    pub scenario: ScenarioSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl DesignFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| toml_error(text, &e))
    }

    /// Parses `text`, applies `key=value` overrides (`section.key` paths), and
    /// deserializes the result.
    pub fn parse_with_overrides(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        if overrides.is_empty() {
            return Self::parse(text);
        }
        let mut table: toml::Table = text.parse().map_err(|e| toml_error(text, &e))?;
        for (key, value) in overrides {
            apply_override(&mut table, key, value)?;
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Parse {
                location: None,
                message: e.message().to_string(),
            })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("design file serializes")
    }

    pub fn config(&self) -> Result<DesignConfig> {
        let species = load_species(&self.species.spec()?)?;
        let g = &self.geometry;
        let e = &self.encoding;
        let config = DesignConfig {
            species,
            geometry: TrapGeometry {
                rho_m: g.rho_m,
                gate_zone_factor: g.gate_zone_factor,
                mu8: g.mu8,
                mu4: g.mu4,
                e_max_v_per_m: g.e_max_v_per_m,
                e_rf_v_per_m: g.e_rf_v_per_m,
                mathieu_q: g.mathieu_q,
                loss_tangent: g.loss_tangent,
            },
            heating: HeatingModel {
                noise_coefficient: g.noise_coefficient,
                n_bar_target: e.n_bar,
            },
            optics: self.optics.clone(),
            encoding: EncodingParams {
                n_pbits: e.n_pbits,
                code: CodeParams {
                    n: e.code_n,
                    k: e.code_k,
                    d: e.code_d,
                },
                ancilla_size: e.ancilla_size,
                ancilla_width: e.ancilla_width,
                syndrome_time_s: e.t_sp_s,
                memory_quality: e.memory_quality,
                gamma1: e.gamma1,
                gamma_m: e.gamma_m,
            },
            overrides: self.overrides.clone(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_config(c: &DesignConfig) -> Self {
        let g = &c.geometry;
        let e = &c.encoding;
        DesignFile {
            species: SpeciesSection::from_species(&c.species),
            geometry: GeometrySection {
                rho_m: g.rho_m,
                gate_zone_factor: g.gate_zone_factor,
                mu8: g.mu8,
                mu4: g.mu4,
                e_max_v_per_m: g.e_max_v_per_m,
                e_rf_v_per_m: g.e_rf_v_per_m,
                mathieu_q: g.mathieu_q,
                loss_tangent: g.loss_tangent,
                noise_coefficient: c.heating.noise_coefficient,
            },
            optics: c.optics.clone(),
            encoding: EncodingSection {
                n_pbits: e.n_pbits,
                code_n: e.code.n,
                code_k: e.code.k,
                code_d: e.code.d,
                ancilla_size: e.ancilla_size,
                ancilla_width: e.ancilla_width,
                t_sp_s: e.syndrome_time_s,
                memory_quality: e.memory_quality,
                gamma1: e.gamma1,
                gamma_m: e.gamma_m,
                n_bar: c.heating.n_bar_target,
            },
            overrides: c.overrides.clone(),
            scenario: ScenarioSection::default(),
            sweep: None,
        }
    }
}

fn toml_error(text: &str, e: &toml::de::Error) -> Error {
    let location = e.span().map(|span| {
        let before = &text[..span.start.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        format!("line {line}, column {col}")
    });
    Error::Parse {
        location,
        message: e.message().trim().to_string(),
    }
}

fn parse_scalar(raw: &str) -> toml::Value {
    let raw = raw.trim();
    if let Ok(i) = raw.parse::<i64>() {
        toml::Value::Integer(i)
    } else if let Ok(f) = raw.parse::<f64>() {
        toml::Value::Float(f)
    } else if let Ok(b) = raw.parse::<bool>() {
        toml::Value::Boolean(b)
    } else {
        toml::Value::String(raw.trim_matches('"').to_string())
    }
}

fn apply_override(table: &mut toml::Table, key: &str, raw: &str) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    let (last, path) = parts
        .split_last()
        .filter(|_| !key.is_empty())
        .ok_or_else(|| Error::UnknownParameter(key.to_string()))?;
    let mut cursor = table;
    for part in path {
        cursor = cursor
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| Error::UnknownParameter(key.to_string()))?;
    }
    let mut value = parse_scalar(raw);
    // integers written into float-typed keys are fine for serde, but a float
    // written where a count is expected must stay a float so it is rejected
    if let (Some(toml::Value::Float(_)), toml::Value::Integer(i)) = (cursor.get(*last), &value) {
        value = toml::Value::Float(*i as f64);
    }
    cursor.insert(last.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips_through_file() {
        let c = DesignConfig::cd_default();
        let text = DesignFile::from_config(&c).to_toml();
        let back = DesignFile::parse(&text).unwrap().config().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn missing_species_names_key() {
        let mut text = DesignFile::from_config(&DesignConfig::cd_default()).to_toml();
        let start = text.find("[species]").unwrap();
        let end = text[start..].find("\n\n").unwrap() + start;
        text.replace_range(start..end, "");
        let err = DesignFile::parse(&text).unwrap_err();
        assert!(err.to_string().contains("species"), "{err}");
    }

    #[test]
    fn unknown_key_rejected_with_location() {
        let text = DesignFile::from_config(&DesignConfig::cd_default())
            .to_toml()
            .replace("mu8 =", "mu9 =");
        match DesignFile::parse(&text) {
            Err(Error::Parse {
                location: Some(loc),
                message,
            }) => {
                assert!(loc.starts_with("line "), "{loc}");
                assert!(message.contains("mu9"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn partial_species_record_rejected() {
        let text = DesignFile::from_config(&DesignConfig::cd_default())
            .to_toml()
            .replace("name = \"Cd+\"", "name = \"X\"\nmass_number = 9.0");
        assert!(DesignFile::parse(&text).unwrap().config().is_err());
    }

    #[test]
    fn overrides_apply_on_top() {
        let text = DesignFile::from_config(&DesignConfig::cd_default()).to_toml();
        let f = DesignFile::parse_with_overrides(
            &text,
            &[
                ("geometry.rho_m".into(), "2e-5".into()),
                ("species.name".into(), "Ca+".into()),
            ],
        )
        .unwrap();
        let c = f.config().unwrap();
        assert_eq!(c.geometry.rho_m, 2e-5);
        assert_eq!(c.species.name, "Ca+");
        let f = DesignFile::parse_with_overrides(
            &text,
            &[("geometry.gate_zone_factor".into(), "5".into())],
        )
        .unwrap();
        assert_eq!(f.geometry.gate_zone_factor, 5.0);
    }

    #[test]
    fn set_and_get_agree() {
        let mut c = DesignConfig::cd_default();
        for key in PARAMETER_KEYS {
            let v = c.get(key).unwrap();
            c.set(key, v).unwrap();
            assert_eq!(c.get(key).unwrap(), v, "{key}");
        }
        assert!(c.set("optics.nope", 1.0).is_err());
        assert!(c.get("optics.nope").is_err());
    }

    #[test]
    fn species_edit_marks_custom() {
        let mut c = DesignConfig::cd_default();
        c.set("species.mass_number", 112.0).unwrap();
        assert_eq!(c.species.provenance, DataProvenance::Custom);
        let text = DesignFile::from_config(&c).to_toml();
        assert_eq!(DesignFile::parse(&text).unwrap().config().unwrap(), c);
    }
}
