use ion_forge::atomdata::{load_species, DataProvenance, IonSpecies, SpeciesSpec};
use ion_forge::budget::{crash_probability, logical_gate_rate, CrashModel};
use ion_forge::design::{DesignConfig, DesignFile};
use ion_forge::optics::{self, derive_raman, scattering_infidelity, RamanConfig};
use ion_forge::trapchip;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn cd() -> IonSpecies {
    load_species(&SpeciesSpec::Name("Cd+".into())).unwrap()
}

prop_compose! {
    fn species()(
        linewidth in 1e7f64..1e9,
        wavelength in 150e-9f64..900e-9,
        mass_number in 6.0f64..220.0,
        fine_ratio in 1e3f64..1e7,
    ) -> IonSpecies {
        IonSpecies {
            name: "X+".into(),
            linewidth_rad_per_s: linewidth,
            wavelength_m: wavelength,
            mass_number,
            fine_structure_rad_per_s: linewidth * fine_ratio,
            provenance: DataProvenance::Custom,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scattering_round_trip(s in species(), tau in 0.05e-6f64..5e-6, margin in 1.01f64..1e4) {
        let floor = (optics::recoil_frequency(&s) * tau / 4.0).sqrt() * optics::scattering_floor(&s);
        let target = (floor * margin).min(0.5);
        prop_assume!(target > floor * 1.001);
        let cfg = RamanConfig { phase_gate_time_s: tau, scattering_target: target, beam_radius_m: 2e-6, n_parallel: 1 };
        let d = derive_raman(&s, &cfg).unwrap();
        prop_assert!(rel(scattering_infidelity(d.intensity, &d), target) < 1e-12);
    }
}

proptest! {
    #[test]
    fn species_serde_round_trip(s in species()) {
        let json = serde_json::to_string(&s).unwrap();
        let back: IonSpecies = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &s);

        let mut c = DesignConfig::cd_default();
        c.species = s;
        let text = DesignFile::from_config(&c).to_toml();
        prop_assert_eq!(DesignFile::parse(&text).unwrap().config().unwrap(), c);
    }

    #[test]
    fn optical_power_laws(s in species(), k in 0.2f64..5.0) {
        let mut t = s.clone();
        t.wavelength_m *= k;
        prop_assert!(rel(optics::saturation_intensity(&t), optics::saturation_intensity(&s) / k.powi(3)) < 1e-12);
        prop_assert!(rel(optics::recoil_frequency(&t), optics::recoil_frequency(&s) / (k * k)) < 1e-12);
        let mut h = s.clone();
        h.mass_number *= k;
        prop_assert!(rel(optics::recoil_frequency(&h), optics::recoil_frequency(&s) / k) < 1e-12);
        let t_m = optics::measurement_time(10.0, 0.02, &s);
        prop_assert!(rel(optics::measurement_time(10.0, 0.02 * k, &s), t_m / k) < 1e-12);
        let mut f = s.clone();
        f.fine_structure_rad_per_s *= k;
        prop_assert!(rel(optics::scattering_floor(&f), optics::scattering_floor(&s) / k) < 1e-12);
    }

    #[test]
    fn trap_power_laws(rho in 1e-6f64..1e-4, a in 1e-28f64..1e-24, nu in 1e5f64..1e8, k in 0.2f64..5.0) {
        let m = cd().mass();
        let base = trapchip::heating_rate(rho, a, nu, m);
        prop_assert!(rel(trapchip::heating_rate(rho * k, a, nu, m), base / k.powi(4)) < 1e-12);
        prop_assert!(rel(trapchip::heating_rate(rho, a * k, nu, m), base * k) < 1e-12);
        prop_assert!(rel(trapchip::heating_rate(rho, a, nu * k, m), base / k) < 1e-12);
        prop_assert!(rel(trapchip::heating_rate(rho, a, nu, m * k), base / k) < 1e-12);
        let split = trapchip::split_frequency(111.0, 0.02, 2e8, rho);
        prop_assert!(rel(trapchip::split_frequency(111.0, 0.02, 2e8, rho * k), split * k.powf(-0.9)) < 1e-12);
        prop_assert!(rel(trapchip::split_frequency(111.0 * k, 0.02, 2e8, rho), split / k.sqrt()) < 1e-12);
        let r = trapchip::radial_chain(111.0, 0.3, 0.15, 1e8, rho);
        let r2 = trapchip::radial_chain(111.0, 0.3, 0.15, 1e8, rho * k);
        prop_assert!(rel(r2.nu_r, r.nu_r / k.sqrt()) < 1e-12);
        prop_assert!(rel(r2.v_rms, r.v_rms * k) < 1e-12);
    }

    #[test]
    fn logical_rate_monotone(
        w in 1u64..200,
        tau_g in 0.1e-6f64..10e-6,
        t_m in 0.1e-6f64..50e-6,
        t_sp in 0.0f64..50e-6,
        bump in 1.001f64..3.0,
    ) {
        let r = logical_gate_rate(w, tau_g, t_m, t_sp);
        prop_assert!(logical_gate_rate(w + 1, tau_g, t_m, t_sp) < r);
        prop_assert!(logical_gate_rate(w, tau_g * bump, t_m, t_sp) < r);
        prop_assert!(logical_gate_rate(w, tau_g, t_m * bump, t_sp) < r);
        prop_assert!(logical_gate_rate(w, tau_g, t_m, t_sp + 1e-6 * bump) < r);
    }

    #[test]
    fn crash_doubling_is_128(gamma2 in 1e-7f64..1e-3) {
        let m = CrashModel::default();
        prop_assert!(rel(crash_probability(2.0 * gamma2, &m), 128.0 * crash_probability(gamma2, &m)) < 1e-12);
    }
}
