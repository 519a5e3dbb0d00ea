use ibm_qds::observables::{be2_first_excited, diagonalize};
use ibm_qds::oracle::{build_full_h, q_strength_ratio, so5_multiplicity};
use ibm_qds::sector::build_h;
use ibm_qds::ModelParams;

const ALPHAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn sector_union(params: &ModelParams) -> Vec<f64> {
    let mut all = Vec::new();
    for v in 0..=params.n_bosons() {
        let dec = diagonalize(params, v).unwrap();
        for &e in dec.eigenvalues() {
            all.extend(std::iter::repeat_n(e, so5_multiplicity(v)));
        }
    }
    all.sort_by(f64::total_cmp);
    all
}

#[test]
fn full_spectrum_equals_sector_union() {
    for nb in 1..=6 {
        for alpha in ALPHAS {
            let p = ModelParams::new(nb, alpha).unwrap();
            let full = build_full_h(&p).unwrap();
            assert!(full.max_asymmetry() < 1e-12);
            let spec = full.spectrum();
            let union = sector_union(&p);
            assert_eq!(spec.len(), union.len(), "N = {nb}");
            let dev = spec
                .iter()
                .zip(&union)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(dev <= 1e-8, "N = {nb}, alpha = {alpha}: deviation {dev:e}");
        }
    }
}

#[test]
fn trace_identity() {
    for nb in [3, 5, 7] {
        let p = ModelParams::new(nb, 0.37).unwrap();
        let full = build_full_h(&p).unwrap().trace();
        let sectors: f64 = (0..=nb)
            .map(|v| build_h(&p, v).unwrap().trace() * so5_multiplicity(v) as f64)
            .sum();
        assert!((full - sectors).abs() < 1e-9 * (1.0 + full.abs()));
    }
}

#[test]
fn quadrupole_strength_matches_sector_amplitudes() {
    for nb in 1..=6 {
        for alpha in ALPHAS {
            let p = ModelParams::new(nb, alpha).unwrap();
            let oracle = q_strength_ratio(&p).unwrap();
            let sector = be2_first_excited(&p).unwrap();
            assert!(
                (oracle - sector).abs() <= 1e-8,
                "N = {nb}, alpha = {alpha}: oracle {oracle}, sector {sector}"
            );
        }
    }
    let p = ModelParams::new(6, 0.3).unwrap();
    assert!((q_strength_ratio(&p).unwrap() - be2_first_excited(&p).unwrap()).abs() <= 1e-8);
}
