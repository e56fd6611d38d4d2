//! Physical constants, the ion-species registry and the frequency-unit convention.
//!
//! Everything inside the engine is SI. Frequencies come in two flavours and the
//! split is fixed by [`UNIT_CONVENTION`]: linewidth, fine-structure splitting,
//! Rabi frequency and r.f. drive are angular (rad/s); mode frequencies, the
//! recoil frequency and the split frequency are ordinary (Hz).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// J s
    pub planck_h: f64,
    /// J s
    pub hbar: f64,
    /// m/s
    pub c: f64,
    /// C
    pub elementary_charge: f64,
    /// kg
    pub atomic_mass_unit: f64,
    /// F/m
    pub vacuum_permittivity: f64,
}

const CODATA_2018: PhysicalConstants = PhysicalConstants {
    planck_h: 6.626_070_15e-34,
    hbar: 6.626_070_15e-34 / (2.0 * PI),
    c: 299_792_458.0,
    elementary_charge: 1.602_176_634e-19,
    atomic_mass_unit: 1.660_539_066_60e-27,
    vacuum_permittivity: 8.854_187_812_8e-12,
};

/// CODATA 2018 values.
pub const fn constants() -> PhysicalConstants {
    CODATA_2018
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataProvenance {
    /// Values taken from the reference design tables.
    DesignTable,
    /// Values taken from standard atomic-data compilations.
    ExternalReference,
    /// Supplied by the user.
    Custom,
}

/// Atomic constants of a qubit ion. The mass is always `mass_number * u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonSpecies {
    pub name: String,
    /// Natural linewidth of the cooling/readout transition, rad/s.
    pub linewidth_rad_per_s: f64,
    /// Wavelength of that transition, m.
    pub wavelength_m: f64,
    pub mass_number: f64,
    /// Fine-structure splitting of the excited P level, rad/s.
    pub fine_structure_rad_per_s: f64,
    #[serde(default = "custom_provenance")]
    pub provenance: DataProvenance,
}

fn custom_provenance() -> DataProvenance {
    DataProvenance::Custom
}

impl IonSpecies {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.linewidth_rad_per_s,
            self.wavelength_m,
            self.mass_number,
            self.fine_structure_rad_per_s,
        ]
        .iter()
        .all(|v| v.is_finite());
        ensure(finite, "species", "all constants must be finite")?;
        ensure(
            self.linewidth_rad_per_s > 0.0,
            "species.linewidth_rad_per_s",
            "must be > 0",
        )?;
        ensure(
            self.wavelength_m > 0.0,
            "species.wavelength_m",
            "must be > 0",
        )?;
        ensure(
            self.mass_number >= 1.0,
            "species.mass_number",
            "must be >= 1",
        )?;
        ensure(
            self.fine_structure_rad_per_s > self.linewidth_rad_per_s,
            "species.fine_structure_rad_per_s",
            "must exceed the linewidth",
        )
    }

    /// Ion mass in kg.
    pub fn mass(&self) -> f64 {
        self.mass_number * constants().atomic_mass_unit
    }

    /// Returns the registry name if this record is exactly a built-in entry.
    pub fn registry_name(&self) -> Option<&'static str> {
        REGISTRY_NAMES
            .iter()
            .copied()
            .find(|name| builtin(name).as_ref() == Some(self))
    }
}

const REGISTRY_NAMES: [&str; 2] = ["Cd+", "Ca+"];

fn builtin(name: &str) -> Option<IonSpecies> {
    match name {
        // 111Cd+, the reference design ion.
        "Cd+" | "Cd" | "111Cd+" => Some(IonSpecies {
            name: "Cd+".into(),
            linewidth_rad_per_s: 2.0 * PI * 44.0e6,
            wavelength_m: 214.0e-9,
            mass_number: 111.0,
            fine_structure_rad_per_s: 2.0 * PI * 74.0e12,
            provenance: DataProvenance::DesignTable,
        }),
        // 40Ca+: 4s 2S1/2 - 4p 2P1/2 at 396.959 nm (vacuum), A = 1.40e8 s^-1,
        // 4p 2P fine structure 222.89 cm^-1 = 6.682 THz (NIST ASD).
        "Ca+" | "Ca" | "40Ca+" => Some(IonSpecies {
            name: "Ca+".into(),
            linewidth_rad_per_s: 1.40e8,
            wavelength_m: 396.959e-9,
            mass_number: 40.0,
            fine_structure_rad_per_s: 2.0 * PI * 6.682e12,
            provenance: DataProvenance::ExternalReference,
        }),
        _ => None,
    }
}

/// Either a registry name or a full record.
#[derive(Debug, Clone, PartialEq)]
pub enum SpeciesSpec {
    Name(String),
    Record(IonSpecies),
}

pub fn load_species(spec: &SpeciesSpec) -> Result<IonSpecies> {
    let species = match spec {
        SpeciesSpec::Name(name) => {
            builtin(name.trim()).ok_or_else(|| Error::UnknownSpecies(name.clone()))?
        }
        SpeciesSpec::Record(record) => record.clone(),
    };
    species.validate()?;
    Ok(species)
}

pub fn registry() -> Vec<IonSpecies> {
    REGISTRY_NAMES.iter().filter_map(|n| builtin(n)).collect()
}

/// Which frequency symbols are carried as angular frequencies and which as
/// ordinary ones.
#[derive(Debug, Clone, Copy)]
pub struct UnitConvention {
    pub angular_symbols: &'static [&'static str],
    pub ordinary_symbols: &'static [&'static str],
}

pub const UNIT_CONVENTION: UnitConvention = UnitConvention {
    angular_symbols: &["Gamma", "omega_F", "Omega_R", "Omega"],
    ordinary_symbols: &["nu_spl", "nu_com", "nu_str", "nu_r", "R"],
};

impl UnitConvention {
    pub fn is_angular(&self, symbol: &str) -> Option<bool> {
        if self.angular_symbols.contains(&symbol) {
            Some(true)
        } else if self.ordinary_symbols.contains(&symbol) {
            Some(false)
        } else {
            None
        }
    }
}
