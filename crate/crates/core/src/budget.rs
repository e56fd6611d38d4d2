//! Logical layer: block-code bookkeeping, physical and logical gate times, and
//! the error/capacity budget.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// `[[n, k, d]]` quantum block code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: u64,
    pub k: u64,
    pub d: u64,
}

impl CodeParams {
    /// Data plus ancilla bits held per block, `4n + k`.
    pub fn bits_per_block(&self) -> u64 {
        4 * self.n + self.k
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingParams {
    /// Number of pair-encoded logical bits (two ions each).
    pub n_pbits: u64,
    pub code: CodeParams,
    pub ancilla_size: u64,
    pub ancilla_width: u64,
    /// Classical syndrome-processing latency, s.
    pub syndrome_time_s: f64,
    pub memory_quality: f64,
    pub gamma1: f64,
    pub gamma_m: f64,
}

impl EncodingParams {
    pub fn validate(&self) -> Result<()> {
        let c = self.code;
        ensure(c.n >= 1, "encoding.code_n", "must be >= 1")?;
        ensure(c.d % 2 == 1, "encoding.code_d", "must be odd")?;
        ensure(c.k <= c.n, "encoding.code_k", "must not exceed n")?;
        ensure(
            self.ancilla_size >= 1,
            "encoding.ancilla_size",
            "must be >= 1",
        )?;
        ensure(
            self.ancilla_width >= 1,
            "encoding.ancilla_width",
            "must be >= 1",
        )?;
        ensure(
            self.syndrome_time_s >= 0.0,
            "encoding.t_sp_s",
            "must be >= 0",
        )?;
        ensure(
            self.memory_quality > 0.0,
            "encoding.memory_quality",
            "must be > 0",
        )?;
        ensure(
            (0.0..1.0).contains(&self.gamma1),
            "encoding.gamma1",
            "must lie in [0, 1)",
        )?;
        ensure(
            (0.0..1.0).contains(&self.gamma_m),
            "encoding.gamma_m",
            "must lie in [0, 1)",
        )?;
        encoding_derived(self).map(|_| ())
    }

    /// Qubit ions, two per p-bit (coolant ions not counted).
    pub fn physical_ion_count(&self) -> u64 {
        2 * self.n_pbits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingDerived {
    pub blocks: u64,
    pub n_parallel: u64,
    pub parallel_meas: u64,
    pub bits_per_block: u64,
}

/// Integer block bookkeeping; fractional blocks and operations are floored.
pub fn encoding_derived(p: &EncodingParams) -> Result<EncodingDerived> {
    let bits_per_block = p.code.bits_per_block();
    if p.n_pbits < bits_per_block {
        return Err(Error::InsufficientPbits {
            required: bits_per_block,
            available: p.n_pbits,
        });
    }
    let blocks = p.n_pbits / bits_per_block;
    Ok(EncodingDerived {
        blocks,
        n_parallel: 2 * blocks * p.ancilla_size / p.ancilla_width,
        parallel_meas: blocks * p.code.n,
        bits_per_block,
    })
}

/// Split + recombine, move, cool, operate.
pub fn physical_gate_time(
    split_hz: f64,
    radial_hz: f64,
    cooling_time: f64,
    phase_gate_time: f64,
) -> f64 {
    2.0 / split_hz + 10.0 / radial_hz + cooling_time + phase_gate_time
}

/// One recovery costs `2w` gate times, two measurements and one syndrome decode.
pub fn logical_gate_rate(
    width: u64,
    gate_time: f64,
    measurement_time: f64,
    syndrome_time: f64,
) -> f64 {
    1.0 / (2.0 * width as f64 * gate_time + 2.0 * measurement_time + syndrome_time)
}

pub fn gate_error_budget(scattering: f64, thermal: f64) -> f64 {
    (scattering + thermal).min(1.0 - f64::EPSILON)
}

/// Recovery crash probability as a power law in the two-p-bit gate error,
/// pinned to one anchor point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrashModel {
    pub anchor_gamma2: f64,
    pub anchor_probability: f64,
    pub exponent: i32,
}

impl Default for CrashModel {
    fn default() -> Self {
        CrashModel {
            anchor_gamma2: 1e-4,
            anchor_probability: 1e-10,
            exponent: 7,
        }
    }
}

impl CrashModel {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.anchor_gamma2 > 0.0,
            "overrides.crash_anchor_gamma2",
            "must be > 0",
        )?;
        ensure(
            self.anchor_probability > 0.0 && self.anchor_probability < 1.0,
            "overrides.crash_anchor_probability",
            "must lie in (0, 1)",
        )?;
        ensure(
            self.exponent >= 1,
            "overrides.crash_exponent",
            "must be >= 1",
        )
    }
}

pub fn crash_probability(gamma2: f64, model: &CrashModel) -> f64 {
    model.anchor_probability * (gamma2 / model.anchor_gamma2).powi(model.exponent)
}

/// Number of logical gates before a crash is expected, `1 / (b p)`. `None`
/// when `p = 0`: the model cannot resolve a limit.
pub fn logical_capacity(blocks: u64, crash: f64) -> Option<f64> {
    (crash > 0.0).then(|| 1.0 / (blocks as f64 * crash))
}

pub fn memory_error(quality: f64) -> f64 {
    1.0 / quality
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogicalBudget {
    pub blocks: u64,
    pub n_parallel: u64,
    pub parallel_meas: u64,
    pub bits_per_block: u64,
    pub gate_time: f64,
    /// Time for one logical gate (one recovery), s.
    pub logical_gate_time: f64,
    pub logical_rate: f64,
    pub gamma2: f64,
    pub memory_error: f64,
    pub crash_probability: f64,
    pub n_logical_gates: Option<f64>,
}

/// Inputs to [`logical_budget`] that come from the physical layer.
#[derive(Debug, Clone, Copy)]
pub struct PhysicalTiming {
    pub gate_time: f64,
    pub measurement_time: f64,
    pub gamma2: f64,
}

pub fn logical_budget(
    p: &EncodingParams,
    timing: PhysicalTiming,
    crash: &CrashModel,
) -> Result<LogicalBudget> {
    let enc = encoding_derived(p)?;
    let rate = logical_gate_rate(
        p.ancilla_width,
        timing.gate_time,
        timing.measurement_time,
        p.syndrome_time_s,
    );
    let crash_p = crash_probability(timing.gamma2, crash);
    Ok(LogicalBudget {
        blocks: enc.blocks,
        n_parallel: enc.n_parallel,
        parallel_meas: enc.parallel_meas,
        bits_per_block: enc.bits_per_block,
        gate_time: timing.gate_time,
        logical_gate_time: 1.0 / rate,
        logical_rate: rate,
        gamma2: timing.gamma2,
        memory_error: memory_error(p.memory_quality),
        crash_probability: crash_p,
        n_logical_gates: logical_capacity(enc.blocks, crash_p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    pub(crate) fn table1() -> EncodingParams {
        EncodingParams {
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
        }
    }

    #[test]
    fn encoding_table1() {
        let e = encoding_derived(&table1()).unwrap();
        assert_eq!(
            e,
            EncodingDerived {
                blocks: 12,
                n_parallel: 990,
                parallel_meas: 1524,
                bits_per_block: 537
            }
        );
        assert_eq!(table1().physical_ion_count(), 12888);
    }

    #[test]
    fn encoding_single_block() {
        let e = encoding_derived(&EncodingParams {
            n_pbits: 537,
            ..table1()
        })
        .unwrap();
        assert_eq!((e.blocks, e.n_parallel), (1, 82));
        assert_eq!(
            encoding_derived(&EncodingParams {
                n_pbits: 536,
                ..table1()
            }),
            Err(Error::InsufficientPbits {
                required: 537,
                available: 536
            })
        );
    }

    #[test]
    fn encoding_validation() {
        let mut p = table1();
        p.code.d = 14;
        assert!(p.validate().is_err());
        let mut p = table1();
        p.code.k = 200;
        assert!(p.validate().is_err());
        assert!(table1().validate().is_ok());
    }

    #[test]
    fn gate_time_values() {
        let t = physical_gate_time(15e6, 70e6, 0.43e-6, 0.5e-6);
        assert!(rel(t, 1.2062e-6) < 0.001);
        assert!(
            rel(
                physical_gate_time(f64::INFINITY, f64::INFINITY, 0.0, 0.5e-6),
                0.5e-6
            ) < 1e-15
        );
    }

    #[test]
    fn logical_rate_values() {
        let r = logical_gate_rate(47, 1.2e-6, 7.2e-6, 5e-6);
        assert!(rel(r, 1.0 / 132.2e-6) < 1e-12);
        assert!(rel(r, 7.56e3) < 0.001);
        assert!(logical_gate_rate(47, 1.2e-6, 7.2e-6, 0.0) > r);
    }

    #[test]
    fn gamma2_budget() {
        assert!(rel(gate_error_budget(4e-5, 5e-5), 9e-5) < 1e-12);
        assert_eq!(gate_error_budget(0.0, 0.0), 0.0);
        assert!(rel(gate_error_budget(4e-5, 5.33e-5), 9.33e-5) < 1e-12);
        assert!(gate_error_budget(0.7, 0.7) < 1.0);
    }

    #[test]
    fn crash_law() {
        let m = CrashModel::default();
        assert_eq!(crash_probability(1e-4, &m), 1e-10);
        assert_eq!(crash_probability(0.0, &m), 0.0);
        assert!(rel(crash_probability(2e-4, &m), 1.28e-8) < 1e-12);
    }

    #[test]
    fn capacity() {
        assert!(rel(logical_capacity(12, 1e-10).unwrap(), 8.333e8) < 1e-3);
        assert!(rel(logical_capacity(12, 1e-9).unwrap(), 8.333e7) < 1e-3);
        assert_eq!(logical_capacity(12, 0.0), None);
    }

    #[test]
    fn memory() {
        assert_eq!(memory_error(1e6), 1e-6);
        assert_eq!(memory_error(f64::INFINITY), 0.0);
        assert_eq!(memory_error(2e6), 5e-7);
    }
}
