//! Optimizers against the brute-force grid references.

use qcap::c11::{optimize_measurement, MeasurementOptions};
use qcap::c1inf::{c1inf, C1InfProblem};
use qcap::channels::{amplitude_damping, dephasing, depolarizing, random_channel, trine_states, two_state_signals};
use qcap::ea::{c_ea, coherent_info_max, CeOptions};
use qcap::entropy::binary_entropy;
use qcap::info::holevo_chi;
use qcap::linalg::haar_vector;
use qcap::oracles::{
    chi_at, grid_accessible_info_2d, grid_density_objective, simplex_enumerate_chi, DensityObjective, SLACK_PER_STEP,
};
use qcap::quantum::{Ensemble, PureState, QuantumChannel, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_states(rng: &mut ChaCha8Rng, n: usize) -> Vec<PureState> {
    (0..n).map(|_| PureState::normalized(haar_vector(rng, 2)).unwrap()).collect()
}

#[test]
fn restricted_c1inf_matches_simplex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases: Vec<(QuantumChannel, Vec<PureState>)> = vec![
        (dephasing(0.25).unwrap(), trine_states()),
        (amplitude_damping(0.3).unwrap(), trine_states()),
        (QuantumChannel::identity(2), two_state_signals(0.7)),
    ];
    for n in 2..=4 {
        let ch = random_channel(&mut rng, 2, 2, 2);
        cases.push((ch, random_states(&mut rng, n)));
    }
    for (ch, signals) in cases {
        let r = c1inf(&C1InfProblem::new(ch.clone()).with_signals(signals.clone()).unwrap()).unwrap();
        let (oracle, p) = simplex_enumerate_chi(&ch, &signals, 0.01).unwrap();
        assert!((r.value - oracle).abs() < 2e-3, "{} vs {oracle}", r.value);
        // The optimizer is at least as good as every grid point.
        assert!(r.value >= oracle - 1e-9, "{} < {oracle}", r.value);
        assert!((chi_at(&ch, &signals, &p).unwrap() - oracle).abs() < 1e-12);
    }
}

#[test]
fn dephasing_capacity_against_oracles() {
    // Dephasing leaves the computational basis untouched, so C1inf = 1.
    let ch = dephasing(0.25).unwrap();
    let r = c1inf(&C1InfProblem::new(ch.clone())).unwrap();
    assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
    let basis = [PureState::basis(2, 0), PureState::basis(2, 1)];
    let (oracle, p) = simplex_enumerate_chi(&ch, &basis, 0.05).unwrap();
    assert!((oracle - 1.0).abs() < 1e-12 && (p[0] - 0.5).abs() < 1e-12);
}

#[test]
fn measurement_matches_accessible_information_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let step = 0.02;
    let mut ensembles = vec![Ensemble::uniform(trine_states()).unwrap(), Ensemble::uniform(two_state_signals(0.4)).unwrap()];
    for n in 2..=4 {
        let states = random_states(&mut rng, n);
        let items = states.into_iter().map(|s| (rng.random_range(0.1..1.0), s)).collect();
        ensembles.push(Ensemble::normalized(items).unwrap());
    }
    for ens in ensembles {
        let out = ens.to_mixed();
        let r = optimize_measurement(&out, &MeasurementOptions::default()).unwrap();
        let grid = grid_accessible_info_2d(&ens, step).unwrap();
        assert!(r.value >= grid - 1e-4, "{} < grid {grid}", r.value);
        assert!((r.value - grid).abs() <= 1e-4 + SLACK_PER_STEP * step, "{} vs {grid}", r.value);
        assert!(r.value <= holevo_chi(&out) + 1e-9);
    }
}

#[test]
fn two_state_accessible_information_formula() {
    for k in 1..8 {
        let theta = k as f64 * std::f64::consts::FRAC_PI_2 / 8.0;
        let ens = Ensemble::uniform(two_state_signals(theta)).unwrap().to_mixed();
        let r = optimize_measurement(&ens, &MeasurementOptions::default()).unwrap();
        let exact = 1.0 - binary_entropy(0.5 - theta.sin() / 2.0);
        assert!((r.value - exact).abs() < 1e-6, "theta={theta}: {} vs {exact}", r.value);
    }
}

#[test]
fn entanglement_assisted_matches_bloch_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let step = 0.05;
    let mut channels = vec![depolarizing(0.3).unwrap(), amplitude_damping(0.3).unwrap()];
    channels.push(random_channel(&mut rng, 2, 2, 2));
    for ch in channels {
        let ce = c_ea(&ch, &CeOptions::default()).unwrap();
        let (grid, _) = grid_density_objective(&ch, &DensityObjective::MutualInformation, step).unwrap();
        assert!(ce.value >= grid - 1e-9, "{} < {grid}", ce.value);
        assert!(ce.value - grid <= SLACK_PER_STEP * step, "{} vs {grid}", ce.value);
        assert!(ce.fw_gap < 1e-6);

        let q = coherent_info_max(&ch, 2, 0).unwrap();
        let (grid, _) = grid_density_objective(&ch, &DensityObjective::CoherentInformation, step).unwrap();
        assert!(q.value >= grid - 1e-6, "{} < {grid}", q.value);
        assert!(q.value - grid <= SLACK_PER_STEP * step);
    }
}

#[test]
fn depolarizing_entanglement_assisted_exact() {
    // For a unital covariant qubit channel the optimum is I/2 and
    // C_E = 2 - H(Bell-diagonal weights).
    let p = 0.3;
    let ce = c_ea(&depolarizing(p).unwrap(), &CeOptions::default()).unwrap();
    let w = [1.0 - p, p / 3.0, p / 3.0, p / 3.0];
    let exact = 2.0 + w.iter().map(|x| x * x.log2()).sum::<f64>();
    assert!((ce.value - exact).abs() < 1e-8, "{} vs {exact}", ce.value);
}

#[test]
fn product_ensembles_are_additive() {
    // chi of a product ensemble through N (x) N is twice chi, so the
    // two-use capacity is at least twice the one-use capacity.
    let ch = amplitude_damping(0.3).unwrap();
    let r = c1inf(&C1InfProblem::new(ch.clone())).unwrap();
    let items: Vec<(f64, PureState)> = r
        .ensemble
        .items()
        .iter()
        .flat_map(|(p, a)| r.ensemble.items().iter().map(move |(q, b)| (p * q, a.tensor(b))))
        .collect();
    let product = Ensemble::normalized(items).unwrap();
    let two = ch.tensor(&ch);
    let chi2 = holevo_chi(&product.through(&two).unwrap());
    assert!(chi2 >= 2.0 * r.value - 1e-6, "{chi2} < 2 x {}", r.value);
    assert!((chi2 - 2.0 * r.value).abs() < 1e-9);
}

#[test]
fn two_use_capacity_is_at_least_twice_one_use() {
    let ch = depolarizing(0.3).unwrap();
    let one = c1inf(&C1InfProblem::new(ch.clone())).unwrap();
    let two = c1inf(&C1InfProblem::new(ch.tensor(&ch))).unwrap();
    assert!(two.value >= 2.0 * one.value - 1e-6, "{} < 2 x {}", two.value, one.value);
    // Depolarizing channels are additive, so there is no gain either.
    assert!(two.value <= 2.0 * one.value + 1e-6);
}
