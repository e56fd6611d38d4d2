//! Report assembly and rendering.
//!
//! The machine format is pretty-printed JSON with SI values; the human format
//! is an aligned text table with display units.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::atomdata::DataProvenance;
use crate::design::ScenarioSection;
use crate::error::{Error, Result};
use crate::explorer::{self, ConstraintReport};
use crate::pipeline::{DerivedDesign, Provenance, Record, Table};
use crate::trapchip::{reference, ValueSource};

pub const REPORT_FORMAT: &str = "ion-forge-report/1";
/// Upper end of the odd redundancy scan in the scenario block.
pub const REDUNDANCY_SCAN_MAX: u64 = 15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Footnote {
    pub id: String,
    pub text: String,
    /// Record keys the note applies to.
    pub keys: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub format: String,
    pub species: String,
    pub records: Vec<Record>,
    pub constraints: ConstraintReport,
    pub pass: bool,
    pub footnotes: Vec<Footnote>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "human" => Ok(Format::Human),
            "machine" => Ok(Format::Machine),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn scenario_record(
    block: &str,
    key: &str,
    label: &str,
    symbol: &str,
    value: f64,
    unit: &str,
    prov: Provenance,
    source: &str,
) -> Record {
    Record {
        table: Table::Scenario,
        block: block.to_string(),
        key: key.to_string(),
        label: label.to_string(),
        symbol: symbol.to_string(),
        value: Some(value),
        unit: unit.to_string(),
        provenance: prov,
        source: source.to_string(),
    }
}

/// Rows of the scenario block for the scenarios requested in `section`.
pub fn scenario_records(d: &DerivedDesign, section: &ScenarioSection) -> Result<Vec<Record>> {
    use Provenance::{Formula as F, Input as I};
    let mut out = Vec::new();
    if let Some(s) = section.pipelining_scale {
        let p = explorer::scenario_ancilla_pipelining(d, s)?;
        let src = "explorer::scenario_ancilla_pipelining";
        let blk = "Ancilla pipelining";
        let r = &p.resources;
        out.extend([
            scenario_record(
                blk,
                "pipelining_scale",
                "pipelining scale",
                "s",
                s,
                "1",
                I,
                "input",
            ),
            scenario_record(
                blk,
                "pipelined_recovery_time",
                "ancilla gate time per recovery",
                "max(2w tau_g/s, tau_g)",
                p.recovery_time,
                "s",
                F,
                src,
            ),
            scenario_record(
                blk,
                "pipelined_logical_gate_rate",
                "logical gate rate",
                "rate'",
                p.budget.logical_rate,
                "Hz",
                F,
                src,
            ),
            scenario_record(
                blk,
                "pipelined_n_pbits",
                "n. ion pairs (p-bits)",
                "sN",
                r.n_pbits,
                "1",
                F,
                src,
            ),
            scenario_record(
                blk,
                "pipelined_n_parallel_ops",
                "n. parallel operations",
                "sN_P",
                r.n_parallel,
                "1",
                F,
                src,
            ),
            scenario_record(
                blk,
                "pipelined_n_beams",
                "n. laser beams",
                "2sN_P",
                r.n_beams,
                "1",
                F,
                src,
            ),
            scenario_record(
                blk,
                "pipelined_n_electrodes",
                "n. d.c. electrodes",
                "s n_el",
                r.n_electrodes,
                "1",
                F,
                src,
            ),
            scenario_record(
                blk,
                "pipelined_total_laser_power",
                "total laser power",
                "s P_tot",
                r.total_laser_power,
                "W",
                F,
                src,
            ),
        ]);
    }
    if let Some(k) = section.redundancy_k {
        let m = explorer::scenario_measurement_redundancy(d, k)?;
        let src = "explorer::scenario_measurement_redundancy";
        let blk = "Measurement redundancy";
        let t_m = d.readout.measurement_time;
        let tau = d.config.optics.tau_p_s;
        out.extend([
            scenario_record(
                blk,
                "redundancy_k",
                "ions read per p-bit",
                "k",
                k as f64,
                "1",
                I,
                "input",
            ),
            scenario_record(
                blk,
                "redundant_measurement_time",
                "measurement time",
                "t_m/k + (k-1) tau_p",
                m.measurement_time,
                "s",
                F,
                src,
            ),
            scenario_record(
                blk,
                "redundant_p_meas_error",
                "P(< threshold counts)",
                "unchanged",
                m.p_meas_error,
                "1",
                F,
                src,
            ),
            scenario_record(
                blk,
                "redundant_logical_gate_rate",
                "logical gate rate",
                "rate'",
                m.budget.logical_rate,
                "Hz",
                F,
                src,
            ),
            scenario_record(
                blk,
                "redundancy_optimal_k",
                "optimal odd k (scan 1..15)",
                "k*",
                explorer::optimal_redundancy(t_m, tau, REDUNDANCY_SCAN_MAX) as f64,
                "1",
                F,
                "explorer::optimal_redundancy",
            ),
            scenario_record(
                blk,
                "redundancy_estimate_k",
                "nearest odd sqrt(t_m/tau_p)",
                "k~",
                explorer::redundancy_estimate(t_m, tau) as f64,
                "1",
                F,
                "explorer::redundancy_estimate",
            ),
        ]);
    }
    if let Some(gamma) = section.noise_gamma {
        let gamma_ref = section.noise_gamma_ref.unwrap_or(d.budget.gamma2);
        let n_ref = d.config.encoding.n_pbits as f64;
        let n = explorer::noise_scaling_rule(gamma, gamma_ref, n_ref)?;
        let blk = "Noise scaling";
        out.extend([
            scenario_record(
                blk,
                "noise_gamma",
                "physical gate error",
                "gamma",
                gamma,
                "1",
                I,
                "input",
            ),
            scenario_record(
                blk,
                "noise_gamma_ref",
                "reference gate error",
                "gamma_ref",
                gamma_ref,
                "1",
                if section.noise_gamma_ref.is_some() {
                    I
                } else {
                    F
                },
                if section.noise_gamma_ref.is_some() {
                    "input"
                } else {
                    "budget::gate_error_budget"
                },
            ),
            scenario_record(
                blk,
                "noise_scaled_n_pbits",
                "n. ion pairs needed",
                "N (gamma/gamma_ref)^2.5",
                n,
                "1",
                F,
                "explorer::noise_scaling_rule",
            ),
        ]);
    }
    Ok(out)
}

fn bound_records(d: &DerivedDesign) -> Vec<Record> {
    let value = explorer::rho_heating_bound(&d.config).ok();
    vec![Record {
        table: Table::Physical,
        block: "Feasibility bounds".into(),
        key: "rho_heating_bound".into(),
        label: "min. electrode distance (split)".into(),
        symbol: "rho_min".into(),
        value,
        unit: "m".into(),
        provenance: Provenance::Formula,
        source: "explorer::solve_rho_heating_bound".into(),
    }]
}

fn source_word(s: ValueSource) -> &'static str {
    match s {
        ValueSource::Formula => "formula",
        ValueSource::Anchored => "anchored",
    }
}

fn footnotes(d: &DerivedDesign) -> Vec<Footnote> {
    let c = &d.config;
    let o = &c.overrides;
    let note = |id: &str, keys: &[&str], text: String| Footnote {
        id: id.to_string(),
        text,
        keys: keys.iter().map(|k| k.to_string()).collect(),
    };
    let mut out = vec![
        note(
            "split-frequency",
            &["split_frequency_formula", "split_frequency_anchored"],
            format!(
                "The split-frequency formula evaluates to {} in SI units; the tabulated design value is {}. \
                 The anchored value is the formula scaled to that reference point. The gate time uses the {} value.",
                human_hz(d.split_frequency.formula),
                human_hz(o.split_frequency_anchor_hz),
                source_word(d.split_frequency.source),
            ),
        ),
        note(
            "rf-power",
            &["rf_power_formula", "rf_power_anchored"],
            format!(
                "The r.f. dissipation formula evaluates to {} with the r.f. frequency in rad/s; the tabulated design value is {}. \
                 Both are shown. Neither feeds any other quantity.",
                human_si(d.rf_power.formula, "W"),
                human_si(o.rf_power_anchor_w, "W"),
            ),
        ),
        note(
            "gate-heating",
            &["gate_heating_rate_formula", "gate_heating_rate_anchored", "heating_during_gate"],
            format!(
                "The gate-zone heating formula gives {} per ms at the reference trap point; the tabulated design value is {} per ms. \
                 Heating during the gate uses the {} value.",
                sig(reference::gate_heating_rate() * 1e-3, 3),
                sig(o.gate_heating_anchor_per_s * 1e-3, 3),
                source_word(d.thermal.gate_heating_rate.source),
            ),
        ),
        note(
            "measurement-time",
            &["measurement_time"],
            format!(
                "The measurement time uses 4c/(epsilon Gamma) = {}. Round-number estimates of about 10 µs for this \
                 readout are superseded by this value.",
                human_si(d.readout.measurement_time, "s"),
            ),
        ),
        note(
            "leakage",
            &["p_meas_error"],
            "Population leaking out of the qubit levels is assumed to be repumped perfectly; no leakage error term is included.".into(),
        ),
        note(
            "crash-law",
            &["crash_probability", "n_logical_gates"],
            format!(
                "The crash probability follows p = {} (gamma2/{})^{}. The memory error is reported but not coupled into p.",
                sig(o.crash_anchor_probability, 3),
                sig(o.crash_anchor_gamma2, 3),
                o.crash_exponent,
            ),
        ),
    ];
    if !c.heating.noise_in_observed_band() {
        out.push(note(
            "noise-band",
            &["noise_coefficient"],
            format!(
                "The field-noise coefficient {} lies outside the observed band 1e-27 to 1e-25 (V m)^2/Hz; heating results are extrapolated.",
                sig(c.heating.noise_coefficient, 3),
            ),
        ));
    }
    match c.species.provenance {
        DataProvenance::DesignTable => {}
        DataProvenance::ExternalReference => out.push(note(
            "species-data",
            &["linewidth", "wavelength", "mass_number", "fine_structure"],
            format!("Atomic constants for {} come from standard reference compilations, not the design tables.", c.species.name),
        )),
        DataProvenance::Custom => out.push(note(
            "species-data",
            &["linewidth", "wavelength", "mass_number", "fine_structure"],
            format!("Atomic constants for {} are user supplied.", c.species.name),
        )),
    }
    out
}

impl Report {
    pub fn new(d: &DerivedDesign, scenario: &ScenarioSection) -> Result<Report> {
        let mut records = d.records();
        records.extend(bound_records(d));
        records.extend(scenario_records(d, scenario)?);
        let constraints = explorer::check_constraints(d);
        Ok(Report {
            format: REPORT_FORMAT.to_string(),
            species: d.config.species.name.clone(),
            pass: constraints.pass(),
            records,
            constraints,
            footnotes: footnotes(d),
        })
    }

    pub fn from_machine(text: &str) -> Result<Report> {
        let report: Report = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: Some(format!("line {}, column {}", e.line(), e.column())),
            message: e.to_string(),
        })?;
        if report.format != REPORT_FORMAT {
            return Err(Error::UnknownFormat(report.format));
        }
        Ok(report)
    }

    pub fn record(&self, key: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.key == key)
    }
}

/// Renders `report` as `"human"` or `"machine"` text.
pub fn render_report(report: &Report, format: &str) -> Result<String> {
    Ok(match format.parse::<Format>()? {
        Format::Machine => render_machine(report),
        Format::Human => render_human(report),
    })
}

pub fn render_machine(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialises");
    s.push('\n');
    s
}

/// `v` to `n` significant figures; plain notation between 1e-3 and 1e6.
pub fn sig(v: f64, n: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{v:.prec$e}", prec = n - 1)
        .parse()
        .expect("float round trip");
    let e = rounded.abs().log10().floor() as i32;
    if (-3..6).contains(&e) {
        let decimals = (n as i32 - 1 - e).max(0) as usize;
        format!("{rounded:.decimals$}")
    } else {
        format!("{rounded:.prec$e}", prec = n - 1)
    }
}

const PREFIXES: [(f64, &str); 9] = [
    (1e12, "T"),
    (1e9, "G"),
    (1e6, "M"),
    (1e3, "k"),
    (1.0, ""),
    (1e-3, "m"),
    (1e-6, "µ"),
    (1e-9, "n"),
    (1e-12, "p"),
];

fn prefixed(v: f64) -> (f64, &'static str) {
    if v == 0.0 || !v.is_finite() {
        return (v, "");
    }
    let a = v.abs();
    for &(scale, p) in &PREFIXES {
        if a >= scale * 0.9995 {
            return (v / scale, p);
        }
    }
    let (scale, p) = PREFIXES[PREFIXES.len() - 1];
    (v / scale, p)
}

fn human_si(v: f64, unit: &str) -> String {
    let (m, p) = prefixed(v);
    format!("{} {p}{unit}", sig(m, 4))
}

fn human_hz(v: f64) -> String {
    human_si(v, "Hz")
}

const COUNT_KEYS: [&str; 16] = [
    "n_pbits",
    "physical_ion_count",
    "code_n",
    "code_k",
    "code_d",
    "ancilla_size",
    "ancilla_width",
    "bits_per_block",
    "n_blocks",
    "n_parallel_ops",
    "n_parallel_meas",
    "n_electrodes",
    "redundancy_k",
    "redundancy_optimal_k",
    "redundancy_estimate_k",
    "mass_number",
];

/// Value and unit columns of one record in display units.
pub fn display_value(r: &Record) -> (String, String) {
    let Some(v) = r.value else {
        return ("unbounded".into(), String::new());
    };
    let int = |v: f64| format!("{}", v.round() as i64);
    match r.unit.as_str() {
        "1" if COUNT_KEYS.contains(&r.key.as_str()) || r.key.starts_with("pipelined_n_") => {
            (int(v), String::new())
        }
        "1" => (sig(v, 4), String::new()),
        "rad/s" => {
            let (m, p) = prefixed(v / (2.0 * PI));
            (sig(m, 4), format!("2π×{p}Hz"))
        }
        "W/m^2" if r.key.starts_with("intensity") => (sig(v * 1e-9, 4), "mW/µm²".into()),
        "W/m^2" => (sig(v, 4), "W/m²".into()),
        "m^2" => (sig(v * 1e4, 4), "cm²".into()),
        "1/m^2" => (sig(v * 1e-4, 4), "cm⁻²".into()),
        "V/m" => (sig(v * 1e-6, 4), "V/µm".into()),
        "1/s" => (sig(v * 1e-3, 4), "/ms".into()),
        "V" => (sig(v, 4), "V".into()),
        "Hz" | "s" | "W" | "m" | "F" => {
            let (m, p) = prefixed(v);
            (sig(m, 4), format!("{p}{}", r.unit))
        }
        other => (sig(v, 4), other.to_string()),
    }
}

fn pad(s: &str, width: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(width.saturating_sub(n)))
}

fn lpad(s: &str, width: usize) -> String {
    let n = s.chars().count();
    format!("{}{s}", " ".repeat(width.saturating_sub(n)))
}

pub fn render_human(report: &Report) -> String {
    let mut out = String::new();
    let marks = |key: &str| -> String {
        report
            .footnotes
            .iter()
            .enumerate()
            .filter(|(_, f)| f.keys.iter().any(|k| k == key))
            .map(|(i, _)| format!("[{}]", i + 1))
            .collect()
    };
    let _ = writeln!(out, "ion-forge design report: {}", report.species);

    for table in [Table::Logical, Table::Physical, Table::Scenario] {
        let rows: Vec<&Record> = report.records.iter().filter(|r| r.table == table).collect();
        if rows.is_empty() {
            continue;
        }
        let cells: Vec<(String, String, String, String)> = rows
            .iter()
            .map(|r| {
                let (v, u) = display_value(r);
                (
                    r.label.clone(),
                    v,
                    u,
                    format!("{} {}", r.provenance.tag(), marks(&r.key))
                        .trim_end()
                        .to_string(),
                )
            })
            .collect();
        let w_label = cells.iter().map(|c| c.0.chars().count()).max().unwrap_or(0);
        let w_val = cells.iter().map(|c| c.1.chars().count()).max().unwrap_or(0);
        let w_unit = cells.iter().map(|c| c.2.chars().count()).max().unwrap_or(0);

        let _ = writeln!(out, "\n{}", table.title());
        let _ = writeln!(out, "{}", "=".repeat(table.title().chars().count()));
        let mut block = "";
        for (r, c) in rows.iter().zip(&cells) {
            if r.block != block {
                block = &r.block;
                let _ = writeln!(out, "  {block}");
            }
            let line = format!(
                "    {}  {}  {}  {}",
                pad(&c.0, w_label),
                lpad(&c.1, w_val),
                pad(&c.2, w_unit),
                c.3
            );
            let _ = writeln!(out, "{}", line.trim_end());
        }
    }

    let _ = writeln!(
        out,
        "\nConstraints ({})",
        if report.pass { "all pass" } else { "FAIL" }
    );
    let w_name = report
        .constraints
        .entries
        .iter()
        .map(|e| e.name.len())
        .max()
        .unwrap_or(0);
    for e in &report.constraints.entries {
        let _ = writeln!(
            out,
            "  {}  {}  {:>2} {:<10}  {}",
            pad(&e.name, w_name),
            lpad(&sig(e.actual, 4), 10),
            e.relation.symbol(),
            sig(e.bound, 4),
            if e.pass { "pass" } else { "FAIL" }
        );
    }

    if !report.footnotes.is_empty() {
        let _ = writeln!(out, "\nNotes");
        for (i, f) in report.footnotes.iter().enumerate() {
            let _ = writeln!(out, "  [{}] {}", i + 1, f.text);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::DesignConfig;
    use crate::pipeline::derive;

    fn report(section: &ScenarioSection) -> Report {
        Report::new(&derive(&DesignConfig::cd_default()).unwrap(), section).unwrap()
    }

    #[test]
    fn sig_figures() {
        assert_eq!(sig(441.569, 3), "442");
        assert_eq!(sig(0.0700436, 3), "0.0700");
        assert_eq!(sig(5.346e-5, 3), "5.35e-5");
        assert_eq!(sig(9.9996, 4), "10.00");
        assert_eq!(sig(158580.0, 4), "158600");
        assert_eq!(sig(-2.5, 2), "-2.5");
    }

    #[test]
    fn human_has_power_row_and_footnotes() {
        let text = render_report(&report(&ScenarioSection::default()), "human").unwrap();
        let line = text
            .lines()
            .find(|l| l.contains("total laser power"))
            .unwrap();
        assert!(line.contains("441.6") && line.contains(" W "), "{line}");
        assert!(text.contains("mW/µm²"));
        assert!(text.contains("2π×MHz"));
        assert!(!text.contains("Improvement scenarios"));
        assert!(text.contains("[1]"));
    }

    #[test]
    fn scenario_block_present_when_requested() {
        let section = ScenarioSection {
            pipelining_scale: Some(94.0),
            redundancy_k: Some(3),
            noise_gamma: Some(2e-4),
            noise_gamma_ref: Some(1e-4),
        };
        let r = report(&section);
        let text = render_human(&r);
        assert!(text.contains("Improvement scenarios"));
        assert_eq!(r.record("redundancy_optimal_k").unwrap().value, Some(3.0));
        let n = r.record("noise_scaled_n_pbits").unwrap().value.unwrap();
        assert!((n / 36452.7 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn machine_round_trip() {
        let r = report(&ScenarioSection {
            redundancy_k: Some(5),
            ..Default::default()
        });
        let a = render_machine(&r);
        let back = Report::from_machine(&a).unwrap();
        assert_eq!(back, r);
        assert_eq!(render_machine(&back), a);
    }

    #[test]
    fn unknown_format() {
        assert_eq!(
            render_report(&report(&ScenarioSection::default()), "pdf"),
            Err(Error::UnknownFormat("pdf".into()))
        );
    }

    #[test]
    fn every_record_has_trace() {
        let r = report(&ScenarioSection::default());
        assert!(r.records.iter().all(|x| !x.source.is_empty()));
        for key in [
            "split_frequency_formula",
            "split_frequency_anchored",
            "rf_power_formula",
            "rf_power_anchored",
        ] {
            assert!(
                r.footnotes.iter().any(|f| f.keys.iter().any(|k| k == key)),
                "{key}"
            );
        }
    }
}
