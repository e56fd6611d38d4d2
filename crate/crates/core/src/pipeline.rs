//! The full parameter chain, from species constants to algorithm capacity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::budget::{self, EncodingDerived, LogicalBudget, PhysicalTiming};
use crate::design::DesignConfig;
use crate::error::Result;
use crate::optics::{self, RamanDerived, ReadoutDerived};
use crate::trapchip::{self, reference, Anchored, ChipElectrical, RadialChain};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalDerived {
    pub gate_error: f64,
    pub cooling_time: f64,
    pub gate_heating_rate: Anchored,
    pub heating_during_gate: f64,
    pub split_heating_rate: f64,
    pub heating_during_split: f64,
}

/// Every derived quantity of one design point.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedDesign {
    pub config: DesignConfig,
    pub encoding: EncodingDerived,
    pub readout: ReadoutDerived,
    pub raman: RamanDerived,
    pub split_frequency: Anchored,
    pub radial: RadialChain,
    pub electrical: ChipElectrical,
    pub rf_power: Anchored,
    pub thermal: ThermalDerived,
    pub budget: LogicalBudget,
}

pub fn derive(config: &DesignConfig) -> Result<DerivedDesign> {
    config.validate()?;
    let species = &config.species;
    let geometry = &config.geometry;
    let heating = &config.heating;
    let overrides = &config.overrides;
    let mass = species.mass();

    let encoding = budget::encoding_derived(&config.encoding)?;
    let raman = optics::derive_raman(species, &config.optics.raman(encoding.n_parallel))?;
    let readout = optics::readout_budget(species, &config.optics.readout());

    let split_frequency = Anchored::new(
        trapchip::split_frequency(
            species.mass_number,
            geometry.mu8,
            geometry.e_max_v_per_m,
            geometry.rho_m,
        ),
        overrides.split_frequency_anchor_hz / reference::split_frequency(),
        overrides.split_frequency_source,
    );
    let radial = trapchip::radial_chain(
        species.mass_number,
        geometry.mathieu_q,
        geometry.mu4,
        geometry.e_rf_v_per_m,
        geometry.rho_m,
    );
    let electrical = trapchip::electrical_architecture(
        config.encoding.n_pbits,
        encoding.n_parallel,
        geometry.rho_m,
        geometry.loss_tangent,
        radial.v_rms,
        radial.omega,
    )?;
    let rf_power = Anchored::new(
        electrical.rf_power,
        overrides.rf_power_anchor_w / reference::rf_power(),
        trapchip::ValueSource::Formula,
    );

    let gate_heating_rate = Anchored::new(
        trapchip::heating_rate(
            geometry.gate_zone_rho(),
            heating.noise_coefficient,
            raman.nu_str,
            mass,
        ),
        overrides.gate_heating_anchor_per_s / reference::gate_heating_rate(),
        overrides.gate_heating_source,
    );
    let split_hz = split_frequency.value();
    let split_heating_rate =
        trapchip::heating_rate(geometry.rho_m, heating.noise_coefficient, split_hz, mass);
    let thermal = ThermalDerived {
        gate_error: trapchip::thermal_gate_error(raman.eta, heating.n_bar_target),
        cooling_time: trapchip::cooling_time(heating.n_bar_target, raman.nu_com)?,
        gate_heating_rate,
        heating_during_gate: trapchip::heating_during(
            config.optics.tau_p_s,
            gate_heating_rate.value(),
        ),
        split_heating_rate,
        heating_during_split: trapchip::heating_during(2.0 / split_hz, split_heating_rate),
    };

    let gate_time = budget::physical_gate_time(
        split_hz,
        radial.nu_r,
        thermal.cooling_time,
        config.optics.tau_p_s,
    );
    let timing = PhysicalTiming {
        gate_time,
        measurement_time: readout.measurement_time,
        gamma2: budget::gate_error_budget(config.optics.eps_s_target, thermal.gate_error),
    };
    let budget = budget::logical_budget(&config.encoding, timing, &overrides.crash_model())?;

    Ok(DerivedDesign {
        config: config.clone(),
        encoding,
        readout,
        raman,
        split_frequency,
        radial,
        electrical,
        rf_power,
        thermal,
        budget,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Input,
    Formula,
    AnchoredOverride,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Input => "input",
            Provenance::Formula => "formula",
            Provenance::AnchoredOverride => "anchored",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Table {
    #[serde(rename = "table1")]
    Logical,
    #[serde(rename = "table2")]
    Physical,
    #[serde(rename = "scenario")]
    Scenario,
}

impl Table {
    pub fn title(self) -> &'static str {
        match self {
            Table::Logical => "Logical parameters",
            Table::Physical => "Physical parameters",
            Table::Scenario => "Improvement scenarios",
        }
    }
}

/// One named value of a derived design with its trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub table: Table,
    pub block: String,
    pub key: String,
    pub label: String,
    pub symbol: String,
    /// SI value; `None` when the quantity is unbounded at this model's resolution.
    pub value: Option<f64>,
    pub unit: String,
    pub provenance: Provenance,
    /// Operation (or input) that produced the value.
    pub source: String,
}

struct RecordBuilder {
    table: Table,
    block: &'static str,
    out: Vec<Record>,
}

impl RecordBuilder {
    fn block(&mut self, table: Table, block: &'static str) {
        self.table = table;
        self.block = block;
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        key: &str,
        label: &str,
        symbol: &str,
        value: Option<f64>,
        unit: &str,
        provenance: Provenance,
        source: &str,
    ) {
        self.out.push(Record {
            table: self.table,
            block: self.block.to_string(),
            key: key.to_string(),
            label: label.to_string(),
            symbol: symbol.to_string(),
            value,
            unit: unit.to_string(),
            provenance,
            source: source.to_string(),
        });
    }

    fn input(
        &mut self,
        key: &str,
        label: &str,
        symbol: &str,
        value: f64,
        unit: &str,
        source: &str,
    ) {
        self.push(
            key,
            label,
            symbol,
            Some(value),
            unit,
            Provenance::Input,
            source,
        );
    }

    fn formula(
        &mut self,
        key: &str,
        label: &str,
        symbol: &str,
        value: f64,
        unit: &str,
        source: &str,
    ) {
        self.push(
            key,
            label,
            symbol,
            Some(value),
            unit,
            Provenance::Formula,
            source,
        );
    }

    fn anchored(
        &mut self,
        key: &str,
        label: &str,
        symbol: &str,
        a: &Anchored,
        unit: &str,
        source: &str,
    ) {
        self.formula(
            &format!("{key}_formula"),
            &format!("{label} (formula)"),
            symbol,
            a.formula,
            unit,
            source,
        );
        self.push(
            &format!("{key}_anchored"),
            &format!("{label} (anchored)"),
            symbol,
            Some(a.anchored),
            unit,
            Provenance::AnchoredOverride,
            source,
        );
    }
}

impl DerivedDesign {
    /// All rows of both tables, in table order.
    pub fn records(&self) -> Vec<Record> {
        let c = &self.config;
        let s = &c.species;
        let g = &c.geometry;
        let o = &c.optics;
        let e = &c.encoding;
        let r = &self.raman;
        let ro = &self.readout;
        let th = &self.thermal;
        let el = &self.electrical;
        let b = &self.budget;
        let mut rb = RecordBuilder {
            table: Table::Logical,
            block: "",
            out: Vec::new(),
        };

        rb.block(Table::Logical, "Encoding");
        rb.input(
            "n_pbits",
            "n. ion pairs (p-bits)",
            "N",
            e.n_pbits as f64,
            "1",
            "input",
        );
        rb.formula(
            "physical_ion_count",
            "n. qubit ions",
            "2N",
            e.physical_ion_count() as f64,
            "1",
            "budget::EncodingParams::physical_ion_count",
        );
        rb.input(
            "code_n",
            "block code length",
            "n",
            e.code.n as f64,
            "1",
            "input",
        );
        rb.input(
            "code_k",
            "block code logical qubits",
            "k",
            e.code.k as f64,
            "1",
            "input",
        );
        rb.input(
            "code_d",
            "block code distance",
            "d",
            e.code.d as f64,
            "1",
            "input",
        );
        rb.input(
            "ancilla_size",
            "ancilla bits",
            "N_A",
            e.ancilla_size as f64,
            "1",
            "input",
        );
        rb.input(
            "ancilla_width",
            "ancilla width",
            "w",
            e.ancilla_width as f64,
            "1",
            "input",
        );
        rb.formula(
            "bits_per_block",
            "data+anc. bits per block",
            "4n+k",
            self.encoding.bits_per_block as f64,
            "1",
            "budget::encoding_derived",
        );
        rb.formula(
            "n_blocks",
            "n. blocks",
            "b = N/(4n+k)",
            self.encoding.blocks as f64,
            "1",
            "budget::encoding_derived",
        );
        rb.formula(
            "n_parallel_ops",
            "n. parallel operations",
            "N_P = 2bN_A/w",
            self.encoding.n_parallel as f64,
            "1",
            "budget::encoding_derived",
        );
        rb.formula(
            "n_parallel_meas",
            "n. parallel measurements",
            "bn",
            self.encoding.parallel_meas as f64,
            "1",
            "budget::encoding_derived",
        );

        rb.block(Table::Logical, "Overall performance");
        rb.formula(
            "physical_gate_time",
            "physical gate time",
            "tau_g",
            b.gate_time,
            "s",
            "budget::physical_gate_time",
        );
        rb.input(
            "syndrome_time",
            "syndrome processing time",
            "t_sp",
            e.syndrome_time_s,
            "s",
            "input",
        );
        rb.formula(
            "logical_gate_rate",
            "logical gate rate",
            "1/(2w tau_g + 2t_m + t_sp)",
            b.logical_rate,
            "Hz",
            "budget::logical_gate_rate",
        );
        rb.formula(
            "gamma2",
            "2-p-bit gate error",
            "gamma_2 = eps_s + P_n",
            b.gamma2,
            "1",
            "budget::gate_error_budget",
        );
        rb.input(
            "gamma1",
            "1-p-bit gate error",
            "gamma_1",
            e.gamma1,
            "1",
            "input",
        );
        rb.input(
            "gamma_m",
            "measurement error",
            "gamma_m",
            e.gamma_m,
            "1",
            "input",
        );
        rb.input(
            "memory_quality",
            "memory quality factor",
            "Q",
            e.memory_quality,
            "1",
            "input",
        );
        rb.formula(
            "memory_error",
            "memory error",
            "eps = 1/Q",
            b.memory_error,
            "1",
            "budget::memory_error",
        );
        rb.formula(
            "crash_probability",
            "recovery crash probability",
            "p",
            b.crash_probability,
            "1",
            "budget::crash_probability",
        );
        rb.push(
            "n_logical_gates",
            "n. logical gates",
            "1/(bp)",
            b.n_logical_gates,
            "1",
            Provenance::Formula,
            "budget::logical_capacity",
        );

        rb.block(Table::Physical, "Optical");
        rb.input(
            "linewidth",
            "linewidth",
            "Gamma",
            s.linewidth_rad_per_s,
            "rad/s",
            "atomdata::IonSpecies",
        );
        rb.input(
            "collection_efficiency",
            "collection efficiency",
            "epsilon",
            o.collection_efficiency,
            "1",
            "input",
        );
        rb.input(
            "mean_counts",
            "mean counts per ion",
            "c",
            o.mean_counts,
            "1",
            "input",
        );
        rb.formula(
            "p_meas_error",
            "P(< threshold counts)",
            "(1+c)exp(-c)",
            ro.p_meas_error,
            "1",
            "optics::measurement_error",
        );
        rb.formula(
            "measurement_time",
            "measurement time",
            "t_m = 4c/(epsilon Gamma)",
            ro.measurement_time,
            "s",
            "optics::measurement_time",
        );
        rb.input(
            "wavelength",
            "wavelength",
            "lambda",
            s.wavelength_m,
            "m",
            "atomdata::IonSpecies",
        );
        rb.formula(
            "saturation_intensity",
            "saturation intensity",
            "I_0",
            r.saturation_intensity,
            "W/m^2",
            "optics::saturation_intensity",
        );
        rb.input(
            "mass_number",
            "mass number",
            "A",
            s.mass_number,
            "1",
            "atomdata::IonSpecies",
        );
        rb.formula(
            "recoil_frequency",
            "recoil frequency",
            "R = h/(2Au lambda^2)",
            r.recoil_hz,
            "Hz",
            "optics::recoil_frequency",
        );
        rb.input(
            "fine_structure",
            "fine structure",
            "omega_F",
            s.fine_structure_rad_per_s,
            "rad/s",
            "atomdata::IonSpecies",
        );
        rb.formula(
            "p0",
            "scattered photons at local minimum",
            "P_0",
            r.p0,
            "1",
            "optics::scattering_floor",
        );
        rb.input(
            "eps_s",
            "infidelity from photon scattering",
            "eps_s",
            o.eps_s_target,
            "1",
            "input",
        );
        rb.input(
            "phase_gate_time",
            "phase-gate time",
            "tau_p",
            o.tau_p_s,
            "s",
            "input",
        );
        rb.formula(
            "stretch_frequency",
            "stretch mode frequency",
            "nu_str = 4/tau_p",
            r.nu_str,
            "Hz",
            "optics::derive_raman",
        );
        rb.formula(
            "com_frequency",
            "c.o.m. mode frequency",
            "nu_com = nu_str/sqrt(3)",
            r.nu_com,
            "Hz",
            "optics::derive_raman",
        );
        rb.formula(
            "eta",
            "stretch-mode Lamb-Dicke param.",
            "eta = sqrt(R/nu_str)",
            r.eta,
            "1",
            "optics::derive_raman",
        );
        rb.formula(
            "rabi_frequency",
            "carrier Raman Rabi frequency",
            "Omega_R = pi/(eta tau_p)",
            r.rabi_rad_per_s,
            "rad/s",
            "optics::derive_raman",
        );
        rb.formula(
            "intensity_p0",
            "laser intensity for P_0",
            "I_P0",
            r.intensity_p0,
            "W/m^2",
            "optics::derive_raman",
        );
        rb.formula(
            "intensity",
            "intensity per laser beam",
            "I",
            r.intensity,
            "W/m^2",
            "optics::derive_raman",
        );
        rb.input(
            "beam_diameter",
            "beam diameter",
            "2r",
            2.0 * o.beam_radius_m,
            "m",
            "input",
        );
        rb.formula(
            "beam_power",
            "power per beam",
            "pi r^2 I",
            r.beam_power,
            "W",
            "optics::derive_raman",
        );
        rb.formula(
            "total_laser_power",
            "total laser power",
            "2 N_P pi r^2 I",
            r.total_power,
            "W",
            "optics::derive_raman",
        );

        rb.block(Table::Physical, "Readout");
        rb.formula(
            "fluorescence_power",
            "fluorescence power per ion",
            "Gamma hc/(2 lambda)",
            ro.fluorescence_power,
            "W",
            "optics::readout_budget",
        );
        rb.formula(
            "readout_beam_power",
            "readout beam power",
            "pi r^2 I_0",
            ro.readout_beam_power,
            "W",
            "optics::readout_budget",
        );
        rb.input(
            "readout_scatter_fraction",
            "scattered fraction of readout beam",
            "f_sc",
            ro.scatter_fraction,
            "1",
            "input",
        );
        rb.formula(
            "readout_background_ratio",
            "scattered background / fluorescence",
            "f_sc pi r^2 I_0 / P_fl",
            ro.background_ratio,
            "1",
            "optics::readout_budget",
        );

        rb.block(Table::Physical, "Trapping: axial (d.c.)");
        rb.input(
            "rho",
            "nearest distance to electrode",
            "rho",
            g.rho_m,
            "m",
            "input",
        );
        rb.input(
            "e_max",
            "d.c. electric field at electrode",
            "E_max",
            g.e_max_v_per_m,
            "V/m",
            "input",
        );
        rb.input(
            "mu8",
            "octopole geometric factor",
            "mu_8",
            g.mu8,
            "1",
            "input",
        );
        rb.anchored(
            "split_frequency",
            "c.o.m. frequency at split",
            "nu_spl",
            &self.split_frequency,
            "Hz",
            "trapchip::split_frequency",
        );

        rb.block(Table::Physical, "Trapping: radial (r.f.)");
        rb.input(
            "mathieu_q",
            "Mathieu q-parameter",
            "q_r",
            g.mathieu_q,
            "1",
            "input",
        );
        rb.input(
            "mu4",
            "r.f. quadrupole geometric factor",
            "mu_4",
            g.mu4,
            "1",
            "input",
        );
        rb.input(
            "e_rf",
            "r.f. electric field amplitude",
            "E_rf",
            g.e_rf_v_per_m,
            "V/m",
            "input",
        );
        rb.formula(
            "v_rms",
            "r.m.s. voltage",
            "V_rms = mu_4 rho E_rf/sqrt(2)",
            self.radial.v_rms,
            "V",
            "trapchip::radial_chain",
        );
        rb.formula(
            "radial_frequency",
            "radial secular freq.",
            "nu_r",
            self.radial.nu_r,
            "Hz",
            "trapchip::radial_chain",
        );
        rb.formula(
            "rf_frequency",
            "r.f. frequency",
            "Omega = 2pi 2sqrt(2) nu_r/q_r",
            self.radial.omega,
            "rad/s",
            "trapchip::radial_chain",
        );

        rb.block(Table::Physical, "Electrical architecture");
        rb.formula(
            "total_area",
            "total area",
            "50 N rho^2",
            el.area,
            "m^2",
            "trapchip::electrical_architecture",
        );
        rb.formula(
            "n_electrodes",
            "n. d.c. electrodes",
            "30 N_P + 20 N",
            el.n_electrodes as f64,
            "1",
            "trapchip::electrical_architecture",
        );
        rb.formula(
            "electrode_density",
            "electrode density",
            "n/area",
            el.electrode_density,
            "1/m^2",
            "trapchip::electrical_architecture",
        );
        rb.formula(
            "capacitance",
            "capacitance per p-bit",
            "C = 20 rho eps_0",
            el.capacitance_per_pbit,
            "F",
            "trapchip::electrical_architecture",
        );
        rb.input(
            "loss_tangent",
            "loss tangent",
            "tan delta",
            g.loss_tangent,
            "1",
            "input",
        );
        rb.anchored(
            "rf_power",
            "total r.f. power dissipated",
            "N V_rms^2 Omega C tan delta",
            &self.rf_power,
            "W",
            "trapchip::electrical_architecture",
        );

        rb.block(Table::Physical, "Thermal");
        rb.input(
            "n_bar",
            "mean vibration number",
            "n",
            c.heating.n_bar_target,
            "1",
            "input",
        );
        rb.formula(
            "thermal_gate_error",
            "Lamb-Dicke gate error",
            "P_n = 0.3 pi^2 eta^4 n(n+1)",
            th.gate_error,
            "1",
            "trapchip::thermal_gate_error",
        );
        rb.formula(
            "cooling_time",
            "cooling time",
            "tau_cool = 1/(n nu_com)",
            th.cooling_time,
            "s",
            "trapchip::cooling_time",
        );
        rb.input(
            "noise_coefficient",
            "field-noise coefficient",
            "a",
            c.heating.noise_coefficient,
            "(V m)^2/Hz",
            "input",
        );
        rb.anchored(
            "gate_heating_rate",
            "heating rate in gate zone",
            "dn/dt",
            &th.gate_heating_rate,
            "1/s",
            "trapchip::heating_rate",
        );
        rb.formula(
            "heating_during_gate",
            "heating during phase gate",
            "tau_p dn/dt",
            th.heating_during_gate,
            "1",
            "trapchip::heating_during",
        );
        rb.formula(
            "split_heating_rate",
            "heating rate at split",
            "dn/dt (split)",
            th.split_heating_rate,
            "1/s",
            "trapchip::heating_rate",
        );
        rb.formula(
            "heating_during_split",
            "heating during split",
            "(2/nu_spl) dn/dt",
            th.heating_during_split,
            "1",
            "trapchip::heating_during",
        );

        rb.out
    }

    /// Value of a named output field (a record key).
    pub fn field(&self, key: &str) -> Option<f64> {
        match key {
            "split_frequency" => Some(self.split_frequency.value()),
            "gate_heating_rate" => Some(self.thermal.gate_heating_rate.value()),
            "rf_power" => Some(self.rf_power.value()),
            "rf_frequency_hz" => Some(self.radial.omega / (2.0 * PI)),
            _ => self
                .records()
                .into_iter()
                .find(|r| r.key == key)
                .and_then(|r| r.value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_design_derives() {
        let d = derive(&DesignConfig::cd_default()).unwrap();
        assert_eq!(d.encoding.n_parallel, 990);
        assert!((d.split_frequency.value() - 15e6).abs() < 1e-3);
        assert!((d.budget.gate_time / 1.2e-6 - 1.0).abs() < 0.05);
    }

    #[test]
    fn record_keys_unique() {
        let d = derive(&DesignConfig::cd_default()).unwrap();
        let recs = d.records();
        let mut keys: Vec<_> = recs.iter().map(|r| r.key.as_str()).collect();
        keys.sort_unstable();
        let n = keys.len();
        keys.dedup();
        assert_eq!(keys.len(), n);
    }

    #[test]
    fn field_lookup() {
        let d = derive(&DesignConfig::cd_default()).unwrap();
        assert_eq!(d.field("total_laser_power"), Some(d.raman.total_power));
        assert_eq!(d.field("split_frequency"), Some(d.split_frequency.anchored));
        assert_eq!(d.field("nope"), None);
    }
}
