use ibm_qds::harmonic::{fit_harmonic, gaussian_profile, harmonic_be2};
use ibm_qds::observables::{
    be2_first_excited, coherence_overlap, diagonalize, excitation_spectrum, n_distribution,
    o6_decomposition,
};
use ibm_qds::ModelParams;

fn params(n: u32, alpha: f64) -> ModelParams {
    ModelParams::new(n, alpha).unwrap()
}

#[test]
fn be2_grows_monotonically_towards_o6() {
    for n in [20, 60] {
        let values: Vec<f64> = (0..=20)
            .map(|i| be2_first_excited(&params(n, i as f64 / 20.0)).unwrap())
            .collect();
        assert!(
            values.windows(2).all(|w| w[1] > w[0]),
            "N = {n}: {values:?}"
        );
    }
    // O(6) value 100 * 2 (N + 4) / 10 (N = 60)
    assert!((be2_first_excited(&params(60, 1.0)).unwrap() - 1280.0).abs() < 1e-8);
}

#[test]
fn limits_are_pure_in_their_own_basis() {
    let u5 = n_distribution(&diagonalize(&params(30, 0.0), 0).unwrap(), 0).unwrap();
    assert_eq!(u5.peak(), 0);
    assert!((u5.ipr - 1.0).abs() < 1e-12 && u5.entropy < 1e-12);

    let o6 = o6_decomposition(&params(30, 1.0), 0, 0).unwrap();
    assert_eq!(o6.peak(), 30);
    assert!((o6.ipr - 1.0).abs() < 1e-10);
}

#[test]
fn decompositions_are_normalized() {
    for alpha in [0.2, 0.5, 0.7] {
        let p = params(24, alpha);
        for v in [0, 1, 3] {
            for k in 0..3 {
                let o6 = o6_decomposition(&p, v, k).unwrap();
                let u5 = n_distribution(&diagonalize(&p, v).unwrap(), k).unwrap();
                assert!((o6.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
                assert!((u5.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn coherent_mixing_strengthens_with_n() {
    // at alpha = 0.8 the ground state spreads over many O(6) irreps, yet its
    // n-profile is shared ever more closely by the v = 1 sector
    let sizes = [20, 40, 80, 160];
    let ipr: Vec<f64> = sizes
        .iter()
        .map(|&n| o6_decomposition(&params(n, 0.8), 0, 0).unwrap().ipr)
        .collect();
    let coherence: Vec<f64> = sizes
        .iter()
        .map(|&n| coherence_overlap(&params(n, 0.8), 0, 1, 0).unwrap())
        .collect();
    assert!(ipr.windows(2).all(|w| w[1] < w[0]), "{ipr:?}");
    assert!(coherence.windows(2).all(|w| w[1] > w[0]), "{coherence:?}");
    assert!(coherence[3] > 0.99);
    assert!(ipr[3] < 0.25);
}

#[test]
fn excitation_spectrum_layout() {
    let levels = excitation_spectrum(&params(10, 0.4), 3, 2).unwrap();
    assert_eq!(levels.len(), 8);
    assert_eq!(levels[0].excitation, 0.0);
    assert!(levels.iter().all(|l| l.excitation >= 0.0));
    // capped by the sector dimension
    let short = excitation_spectrum(&params(3, 0.4), 3, 4).unwrap();
    assert_eq!(short.iter().filter(|l| l.v == 3).count(), 1);
}

#[test]
fn harmonic_tracks_exact_at_large_n() {
    let p = params(200, 0.9);
    let model = fit_harmonic(&p, 0).unwrap();
    let dec = diagonalize(&p, 0).unwrap();
    let exact_gap = dec.eigenvalues()[1] - dec.eigenvalues()[0];
    assert!((model.omega - exact_gap).abs() / exact_gap < 0.02);
    let g = gaussian_profile(&model, 0);
    let overlap: f64 = g
        .iter()
        .zip(dec.eigenvector(0).unwrap())
        .map(|(a, b)| a * b)
        .sum();
    assert!(overlap * overlap > 0.999);
    let exact = be2_first_excited(&p).unwrap();
    let approx = harmonic_be2(&p).unwrap();
    assert!((approx - exact).abs() / exact < 0.02);
}
