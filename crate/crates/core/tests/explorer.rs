use ion_forge::design::{AxisScale, DesignConfig, Goal, SweepAxis, SweepSpec};
use ion_forge::explorer::{
    check_constraints, optimal_redundancy, rho_heating_bound, scenario_ancilla_pipelining,
    solve_rho_heating_bound, split_heating_at, sweep, Resources, SplitModel,
};
use ion_forge::pipeline::derive;
use proptest::prelude::*;

fn rho_spec(min: f64, max: f64, steps: usize) -> SweepSpec {
    SweepSpec {
        objective: "physical_gate_time".into(),
        goal: Goal::Minimize,
        axes: vec![SweepAxis {
            name: "geometry.rho_m".into(),
            min,
            max,
            steps,
            scale: AxisScale::Log,
        }],
        constraints: vec![],
    }
}

#[test]
fn rho_sweep_mask_matches_bisection_root() {
    let base = DesignConfig::cd_default();
    let root = rho_heating_bound(&base).unwrap();
    let r = sweep(&base, &rho_spec(2e-6, 50e-6, 60)).unwrap();
    for p in &r.points {
        let rho = p.params[0];
        let split_ok = p
            .evaluation
            .design()
            .map(|d| {
                check_constraints(d)
                    .entries
                    .iter()
                    .find(|e| e.name == "split_heating")
                    .unwrap()
                    .pass
            })
            .unwrap();
        assert_eq!(split_ok, rho >= root, "rho = {rho:e}, root = {root:e}");
    }
    assert!(!r.feasible_mask()[0]);
    assert!(r.feasible_mask()[59]);
}

#[test]
fn sweep_mask_agrees_with_check_constraints() {
    let base = DesignConfig::cd_default();
    let spec = SweepSpec {
        objective: "total_laser_power".into(),
        goal: Goal::Minimize,
        axes: vec![
            SweepAxis {
                name: "geometry.rho_m".into(),
                min: 1e-6,
                max: 30e-6,
                steps: 7,
                scale: AxisScale::Log,
            },
            SweepAxis {
                name: "optics.tau_p_s".into(),
                min: 0.1e-6,
                max: 2e-6,
                steps: 6,
                scale: AxisScale::Log,
            },
            SweepAxis {
                name: "geometry.e_max_v_per_m".into(),
                min: 1e8,
                max: 3e8,
                steps: 3,
                scale: AxisScale::Linear,
            },
        ],
        constraints: vec![],
    };
    let r = sweep(&base, &spec).unwrap();
    assert_eq!(r.points.len(), 7 * 6 * 3);
    let mask = r.feasible_mask();
    assert!(mask.iter().any(|&m| m) && mask.iter().any(|&m| !m));
    for (p, m) in r.points.iter().zip(mask) {
        let mut c = base.clone();
        for (axis, &v) in spec.axes.iter().zip(&p.params) {
            c.set(&axis.name, v).unwrap();
        }
        let direct = derive(&c)
            .map(|d| check_constraints(&d).pass())
            .unwrap_or(false);
        assert_eq!(m, direct, "{:?}", p.params);
    }
}

#[test]
fn sweep_is_deterministic() {
    let base = DesignConfig::cd_default();
    let spec = rho_spec(2e-6, 50e-6, 40);
    assert_eq!(sweep(&base, &spec).unwrap(), sweep(&base, &spec).unwrap());
}

#[test]
fn pipelining_monotone_and_linear() {
    let d = derive(&DesignConfig::cd_default()).unwrap();
    let base = Resources::of(&d);
    let mut last = 0.0;
    for i in 0..=93 {
        let s = 1.0 + i as f64;
        let p = scenario_ancilla_pipelining(&d, s).unwrap();
        assert!(p.budget.logical_rate >= last);
        last = p.budget.logical_rate;
        assert_eq!(p.resources, base.scaled(s));
        assert_eq!(p.resources.n_electrodes, base.n_electrodes * s);
    }
}

#[test]
fn redundancy_scan_matches_brute_force() {
    let t_m = 7.234315595086152e-6;
    for tau in [0.05e-6, 0.1e-6, 0.5e-6, 1e-6, 3e-6] {
        let best = (1..=15u64)
            .step_by(2)
            .map(|k| (k, t_m / k as f64 + (k as f64 - 1.0) * tau))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .0;
        assert_eq!(optimal_redundancy(t_m, tau, 15), best);
    }
}

proptest! {
    #[test]
    fn rho_bound_residual(mu8_e in 1e5f64..1e8, a in 1e-28f64..1e-24, cal in 0.2f64..2.0) {
        let c = DesignConfig::cd_default();
        let split = SplitModel { calibration: cal };
        let rho = solve_rho_heating_bound(&c.species, 0.02, mu8_e / 0.02, a, split).unwrap();
        let dn = split_heating_at(&c.species, 0.02, mu8_e / 0.02, a, split, rho);
        prop_assert!((dn - 1.0).abs() < 1e-4, "dn = {}", dn);
    }
}
