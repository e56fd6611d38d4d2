//! Lower bound on the electrode distance from heating during the split.

use crate::atomdata::IonSpecies;
use crate::design::DesignConfig;
use crate::error::{Error, Result};
use crate::trapchip::{self, reference, ValueSource};

/// Search bracket for the electrode distance, m.
pub const RHO_BRACKET: (f64, f64) = (0.1e-6, 1e-3);
pub const RHO_REL_TOL: f64 = 1e-6;

/// Bisection for a root of `f` in `[lo, hi]`, stopping once the bracket is
/// narrower than `rel_tol * lo`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    for _ in 0..200 {
        if hi - lo <= rel_tol * lo.abs() {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Split-frequency model used when the electrode distance changes: the SI
/// formula times `calibration` (1 for the bare formula).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitModel {
    pub calibration: f64,
}

impl SplitModel {
    pub const FORMULA: SplitModel = SplitModel { calibration: 1.0 };

    pub fn of(config: &DesignConfig) -> Self {
        match config.overrides.split_frequency_source {
            ValueSource::Formula => Self::FORMULA,
            ValueSource::Anchored => SplitModel {
                calibration: config.overrides.split_frequency_anchor_hz
                    / reference::split_frequency(),
            },
        }
    }
}

/// Phonons gained during one split/recombine at distance `rho`.
pub fn split_heating_at(
    species: &IonSpecies,
    mu8: f64,
    e_max: f64,
    noise: f64,
    split: SplitModel,
    rho: f64,
) -> f64 {
    let nu = split.calibration * trapchip::split_frequency(species.mass_number, mu8, e_max, rho);
    trapchip::split_heating(rho, nu, noise, species.mass())
}

/// Smallest electrode distance for which the split adds at most one phonon.
pub fn solve_rho_heating_bound(
    species: &IonSpecies,
    mu8: f64,
    e_max: f64,
    noise: f64,
    split: SplitModel,
) -> Result<f64> {
    if !(mu8 > 0.0 && e_max > 0.0 && noise >= 0.0 && split.calibration > 0.0) {
        return Err(Error::invalid(
            "solve_rho_heating_bound",
            "inputs must be positive",
        ));
    }
    let (lo, hi) = RHO_BRACKET;
    bisect(
        |rho| split_heating_at(species, mu8, e_max, noise, split, rho) - 1.0,
        lo,
        hi,
        RHO_REL_TOL,
    )
    .ok_or(Error::BoundNotBinding { lo, hi })
}

/// [`solve_rho_heating_bound`] at a design's own species, field and noise.
pub fn rho_heating_bound(config: &DesignConfig) -> Result<f64> {
    solve_rho_heating_bound(
        &config.species,
        config.geometry.mu8,
        config.geometry.e_max_v_per_m,
        config.heating.noise_coefficient,
        SplitModel::of(config),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-11);
        assert_eq!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9), None);
    }

    #[test]
    fn bound_residual_small() {
        let c = DesignConfig::cd_default();
        let rho = rho_heating_bound(&c).unwrap();
        let dn = split_heating_at(&c.species, 0.02, 2e8, 1e-26, SplitModel::of(&c), rho);
        assert!((dn - 1.0).abs() < 1e-4, "{dn}");
    }

    #[test]
    fn vanishing_noise_pushes_bound_to_bracket_edge() {
        let c = DesignConfig::cd_default();
        let split = SplitModel::of(&c);
        let mut last = f64::INFINITY;
        for noise in [1e-26, 1e-28, 1e-30] {
            let rho = solve_rho_heating_bound(&c.species, 0.02, 2e8, noise, split).unwrap();
            assert!(rho < last);
            last = rho;
        }
        assert!(last < 1.2 * RHO_BRACKET.0, "{last}");
        assert!(matches!(
            solve_rho_heating_bound(&c.species, 0.02, 2e8, 0.0, split),
            Err(Error::BoundNotBinding { .. })
        ));
    }
}
