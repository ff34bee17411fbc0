use num_complex::Complex64;
use shape_resonances::gamow::{gamow_state, gamow_wavefunction, survival_probability, DecayLaw};
use shape_resonances::model::potential_value;
use shape_resonances::poles::{find_poles, Resonance, SearchConfig};
use shape_resonances::ModelSpec;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn poles_of(spec: &ModelSpec) -> Vec<Resonance> {
    find_poles(spec, &SearchConfig::window(1.0, 30.0)).unwrap()
}

fn models() -> Vec<ModelSpec> {
    vec![
        ModelSpec::delta_wall(5.0, 1.0).unwrap(),
        ModelSpec::exp_two_piece(5.0, 0.5, 5.0).unwrap(),
        ModelSpec::exp_two_piece(5.0, 0.0, 5.0).unwrap(),
    ]
}

/// Coefficients (A, B) of ψ = A e^{ikx} + B e^{-ikx} read off at one point.
fn plane_wave_parts(k: Complex64, x: f64, psi: Complex64, dpsi: Complex64) -> (Complex64, Complex64) {
    let a = (-I * k * x).exp() * (I * k * psi + dpsi) / (2.0 * I * k);
    let b = (I * k * x).exp() * (I * k * psi - dpsi) / (2.0 * I * k);
    (a, b)
}

#[test]
fn only_the_outgoing_wave_on_the_exit_side() {
    for spec in models() {
        let flat_edge = match spec {
            ModelSpec::ExpTwoPiece { c, .. } if c > 0.0 => -24.0 * c,
            ModelSpec::DeltaWall { a, .. } => -a,
            _ => 0.0,
        };
        for pole in poles_of(&spec) {
            let k = pole.k_pole;
            for x in [flat_edge - 0.5, flat_edge - 2.0, flat_edge - 4.0] {
                let (psi, dpsi) = gamow_state(&spec, k, x).unwrap();
                let (a, b) = plane_wave_parts(k, x, psi, dpsi);
                assert!(
                    a.norm() < 1e-8 * b.norm(),
                    "{spec:?} n={} x={x}: |A/B| = {:e}",
                    pole.n,
                    a.norm() / b.norm()
                );
            }
        }
    }
}

#[test]
fn satisfies_the_schrodinger_equation_at_the_complex_energy() {
    let h = 1e-3;
    for spec in models() {
        let pole = poles_of(&spec)[0];
        let k = pole.k_pole;
        let energy = k * k;
        let xs: Vec<f64> = match spec {
            ModelSpec::DeltaWall { .. } => vec![-6.0, -3.0, -1.5, -0.5],
            // deeper under the barrier the stencil's own h²q⁴/12 error dominates
            _ => vec![-6.0, -2.0, -0.3, 0.4, 1.2, 2.0],
        };
        for x in xs {
            let psi = |x: f64| gamow_state(&spec, k, x).unwrap().0;
            let second = (psi(x + h) - 2.0 * psi(x) + psi(x - h)) / (h * h);
            // the delta model is free away from x = -a
            let v = potential_value(&spec, x).unwrap_or(0.0);
            let scale = second.norm() + (v * psi(x)).norm() + (energy * psi(x)).norm();
            let residual = (-second + v * psi(x) - energy * psi(x)).norm() / scale;
            assert!(residual < 1e-6, "{spec:?} x={x}: residual {residual:e}");
        }
    }
}

#[test]
fn two_piece_profiles_join_at_the_peak() {
    for spec in models().into_iter().skip(1) {
        for pole in poles_of(&spec) {
            let k = pole.k_pole;
            let (left, _) = gamow_state(&spec, k, -1e-12).unwrap();
            let (right, _) = gamow_state(&spec, k, 1e-12).unwrap();
            assert!((left - right).norm() < 1e-9 * right.norm(), "{spec:?} n={}", pole.n);
        }
    }
}

#[test]
fn envelope_grows_at_rate_beta() {
    for spec in models().into_iter().skip(1) {
        let c = match spec {
            ModelSpec::ExpTwoPiece { c, .. } => c,
            _ => unreachable!(),
        };
        for pole in poles_of(&spec) {
            let profile = gamow_wavefunction(&spec, &pole, -20.0, 3.0, 2301).unwrap();
            assert_eq!(profile.psi[0], Complex64::new(1.0, 0.0));
            let hi = if c > 0.0 { -10.0 * c } else { -0.5 };
            let slope = profile.envelope_slope(-20.0, hi.min(-5.0 * c)).unwrap();
            assert!(
                (slope + pole.beta()).abs() < 1e-6,
                "{spec:?} n={}: slope {slope} beta {}",
                pole.n,
                pole.beta()
            );
        }
    }
}

#[test]
fn derivative_samples_match_the_profile() {
    let spec = ModelSpec::exp_two_piece(5.0, 0.5, 5.0).unwrap();
    let pole = poles_of(&spec)[1];
    let profile = gamow_wavefunction(&spec, &pole, -10.0, 3.0, 1301).unwrap();
    let h = profile.x[1] - profile.x[0];
    for i in (100..1200).step_by(97) {
        let fd = (profile.psi[i + 1] - profile.psi[i - 1]) / (2.0 * h);
        let scale = profile.dpsi[i].norm().max(1e-300);
        assert!(
            (fd - profile.dpsi[i]).norm() < 1e-3 * scale.max(profile.psi[i].norm()),
            "x = {}",
            profile.x[i]
        );
    }
}

#[test]
fn survival_examples() {
    let law = DecayLaw::new(1.9296);
    assert!((law.mean_lifetime - 0.51824).abs() < 1e-5);
    assert!((survival_probability(&law, 0.51824) - (-1.0f64).exp()).abs() < 1e-5);
    assert!((survival_probability(&law, 1.0) - (-1.9296f64).exp()).abs() < 1e-15);

    let spec = ModelSpec::delta_wall(5.0, 1.0).unwrap();
    let pole = poles_of(&spec)[0];
    let from_pole = DecayLaw::from_resonance(&pole);
    assert!((from_pole.gamma - 1.9296).abs() < 1e-3);
    assert!((from_pole.gamma * from_pole.mean_lifetime - 1.0).abs() < 1e-15);
}

#[test]
fn one_piece_has_no_gamow_state() {
    let spec = ModelSpec::exp_one_piece(5.0, 0.5).unwrap();
    let fake = Resonance::from_momentum(0, Complex64::new(3.0, -0.2)).unwrap();
    assert!(gamow_wavefunction(&spec, &fake, -8.0, 3.0, 100).is_err());
    assert!(gamow_state(&spec, fake.k_pole, 0.0).is_err());
}
