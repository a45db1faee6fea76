use nalgebra::SMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ccars::config::RunConfig;
use ccars::dynamics::{evolve, relaxation_derivative, DensityMatrix, RelaxationRates, TimeGrid};
use ccars::phase::{classify, generate_sample, regress, PhaseKind, PhaseSuiteConfig};
use ccars::pulse::{chirped_duration, from_duration_and_rate, spectral_to_temporal_chirp};

type M3 = SMatrix<C64, 3, 3>;
type M4 = SMatrix<C64, 4, 4>;

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn hermitian4() -> impl Strategy<Value = M4> {
    prop::collection::vec(complex(), 16).prop_map(|v| {
        let a = M4::from_iterator(v);
        (a + a.adjoint()) * C64::new(0.5, 0.0)
    })
}

fn rates() -> impl Strategy<Value = RelaxationRates> {
    prop::collection::vec(0.0..0.5f64, 12).prop_map(|r| {
        let mut rates = RelaxationRates::none();
        let pairs = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)];
        for (k, &(u, l)) in pairs.iter().enumerate() {
            rates = rates.with_decay(u, l, r[k]).with_dephasing(u, l, r[k + 6]);
        }
        rates
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chirp_relations_invert(tau0 in 0.5..20.0f64, ratio in -10.0..10.0f64) {
        let alpha_prime = ratio * tau0 * tau0;
        let tau = chirped_duration(alpha_prime, tau0).unwrap();
        let alpha = spectral_to_temporal_chirp(alpha_prime, tau0).unwrap();
        let (t0, ap) = from_duration_and_rate(tau, alpha).unwrap();
        prop_assert!((t0 - tau0).abs() <= 1e-9 * tau0);
        prop_assert!((ap - alpha_prime).abs() <= 1e-9 * tau0 * tau0 * (1.0 + ratio.abs()));
        prop_assert!(tau >= tau0);
    }

    #[test]
    fn relaxation_preserves_trace_and_hermiticity(rho in hermitian4(), rates in rates()) {
        let d = relaxation_derivative::<4>(&rho, &rates);
        prop_assert!(d.trace().norm() < 1e-12);
        prop_assert!((d - d.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn coherent_evolution_stays_pure(
        amps in prop::array::uniform3(complex()),
        couplings in prop::array::uniform3(complex()),
        detunings in prop::array::uniform2(-1.0..1.0f64),
        width in 1.0..4.0f64,
    ) {
        prop_assume!(amps.iter().map(|a| a.norm_sqr()).sum::<f64>() > 0.1);
        let h = move |t: f64| {
            let g = (-t * t / (2.0 * width * width)).exp();
            let mut m = M3::zeros();
            m[(1, 1)] = C64::new(detunings[0], 0.0);
            m[(2, 2)] = C64::new(detunings[1], 0.0);
            for (k, &(i, j)) in [(0, 1), (1, 2), (0, 2)].iter().enumerate() {
                m[(i, j)] = couplings[k] * g;
                m[(j, i)] = couplings[k].conj() * g;
            }
            m
        };
        let grid = TimeGrid::new(-4.0 * width, 4.0 * width, 8000).unwrap();
        let traj = evolve(&h, DensityMatrix::pure(amps), &grid, &RelaxationRates::none(), 50).unwrap();
        for s in &traj.states {
            prop_assert!((s.trace() - 1.0).abs() < 1e-10);
            prop_assert!(s.hermiticity_error() < 1e-10);
            prop_assert!((s.purity() - 1.0).abs() < 1e-8);
            prop_assert!(s.min_eigenvalue() > -1e-8);
            let p = s.populations();
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert!(s.get(i, j).norm_sqr() <= p[i] * p[j] + 1e-8);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_analysis_ignores_amplitude(seed in any::<u64>(), kind in 0..3usize, scale in 0.01..100.0f64) {
        let suite = PhaseSuiteConfig::pinned();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = PhaseKind::ALL[kind];
        let model = suite.draw(kind, &mut rng);
        let sample = generate_sample(model, &suite.grid(), 0.3, 0.0, &mut rng).unwrap();
        let scaled = sample.scaled(scale);
        prop_assert_eq!(classify(&sample).unwrap(), classify(&scaled).unwrap());
        let a = regress(&sample, kind).unwrap();
        let b = regress(&scaled, kind).unwrap();
        for (x, y) in a.params.iter().zip(&b.params) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn config_echo_round_trips(
        omega in 0.1..5.0f64,
        delta in 0.5..3.0f64,
        tau0 in 1.0..20.0f64,
        ratio in -8.0..8.0f64,
        four in any::<bool>(),
    ) {
        let scenario = if four { "ccars4" } else { "ccars2" };
        let text = format!(
            r#"{{"version": 1, "run": {{"scenario": "{scenario}", "omega3_0": {omega}, "delta": {delta},
            "tau0": {tau0}, "chirp_ratio": {ratio}}}}}"#
        );
        let cfg = RunConfig::from_json(&text, false).unwrap();
        let echoed = serde_json::to_string(&cfg).unwrap();
        prop_assert_eq!(RunConfig::from_json(&echoed, false).unwrap(), cfg);
    }
}
