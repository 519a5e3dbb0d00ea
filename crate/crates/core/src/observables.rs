//! Spectra, transition strengths, state decompositions and phase diagnostics
//! built on exact sector diagonalization.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::{solve, EigenDecomposition};
use crate::error::{Error, Result};
use crate::harmonic::{self, fit_harmonic};
use crate::rpa::{rpa_be2, rpa_solve};
use crate::sector::{build_h, build_h2, quad_matrix_element, ModelParams};

/// Tolerance for matching `S+S-/N` eigenvalues to O(6) labels.
pub const SIGMA_MATCH_TOL: f64 = 1e-6;

/// Exact decomposition of `H(alpha)` on the seniority-`v` sector.
pub fn diagonalize(params: &ModelParams, seniority: u32) -> Result<EigenDecomposition> {
    solve(&build_h(params, seniority)?)
}

/// O(6) energy `(1/4N)[N(N+4) - sigma(sigma+4)]` of `S+S-/N`.
pub fn o6_energy(n_bosons: u32, sigma: u32) -> f64 {
    let (nb, s) = (n_bosons as f64, sigma as f64);
    (nb * (nb + 4.0) - s * (s + 4.0)) / (4.0 * nb)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumLevel {
    pub v: u32,
    pub k: u32,
    pub energy: f64,
    pub excitation: f64,
}

/// Lowest `k_max` levels of every sector `v <= v_max`, measured from the
/// lowest v = 0 level.
pub fn excitation_spectrum(
    params: &ModelParams,
    v_max: u32,
    k_max: u32,
) -> Result<Vec<SpectrumLevel>> {
    if v_max > params.n_bosons() {
        return Err(Error::Domain(format!(
            "v_max = {v_max} exceeds N = {}",
            params.n_bosons()
        )));
    }
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let decomps = (0..=v_max)
        .map(|v| diagonalize(params, v))
        .collect::<Result<Vec<_>>>()?;
    let ground = decomps[0].lowest();
    let tiny = 1e-9 * (1.0 + ground.abs());
    let mut levels = Vec::new();
    for (v, dec) in decomps.iter().enumerate() {
        for (k, &energy) in dec.eigenvalues().iter().take(k_max as usize).enumerate() {
            let mut excitation = energy - ground;
            // degenerate partners of the ground state land a few ulps below it
            if excitation < 0.0 && excitation > -tiny {
                excitation = 0.0;
            }
            levels.push(SpectrumLevel {
                v: v as u32,
                k: k as u32,
                energy,
                excitation,
            });
        }
    }
    Ok(levels)
}

/// `B(E2)` from the lowest v = 1 state to the ground state, in units where
/// the U(5) limit gives 100.
pub fn be2_first_excited(params: &ModelParams) -> Result<f64> {
    let ground = diagonalize(params, 0)?;
    let excited = diagonalize(params, 1)?;
    let m = quad_matrix_element(
        params.n_bosons(),
        ground.eigenvector(0)?,
        excited.eigenvector(0)?,
    )?;
    Ok(100.0 * m * m)
}

/// Probability distribution of one state over basis labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    /// `n` for U(5) decompositions, `sigma` for O(6).
    pub labels: Vec<u32>,
    pub weights: Vec<f64>,
    /// Shannon entropy in nats.
    pub entropy: f64,
    /// Inverse participation ratio `sum w^2`.
    pub ipr: f64,
}

impl DecompositionReport {
    fn from_amplitudes(labels: Vec<u32>, amplitudes: impl Iterator<Item = f64>) -> Self {
        let weights: Vec<f64> = amplitudes.map(|c| c * c).collect();
        let entropy = -weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| w * w.ln())
            .sum::<f64>();
        let ipr = weights.iter().map(|w| w * w).sum();
        Self {
            labels,
            weights,
            entropy: entropy.max(0.0),
            ipr,
        }
    }

    /// Label carrying the largest weight.
    pub fn peak(&self) -> u32 {
        let i = self
            .weights
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.labels[i]
    }
}

/// U(5) content (squared coefficients over `n`) of eigenstate `k`.
pub fn n_distribution(decomp: &EigenDecomposition, k: usize) -> Result<DecompositionReport> {
    let vector = decomp.eigenvector(k)?;
    let labels = decomp.sector().n_values().collect();
    Ok(DecompositionReport::from_amplitudes(
        labels,
        vector.iter().copied(),
    ))
}

/// O(6) content of eigenstate `k` of `H(alpha)` in sector `v`, obtained by
/// projecting onto the `S+S-/N` eigenbasis of the same sector.
pub fn o6_decomposition(
    params: &ModelParams,
    seniority: u32,
    k: usize,
) -> Result<DecompositionReport> {
    let state = diagonalize(params, seniority)?;
    let vector = state.eigenvector(k)?;
    let sector = params.sector(seniority)?;
    let o6 = solve(&build_h2(sector))?;
    let nb = params.n_bosons();

    let mut labels = Vec::with_capacity(o6.dimension());
    for &lambda in o6.eigenvalues() {
        let sigma = assign_sigma(nb, seniority, lambda)?;
        if labels.contains(&sigma) {
            return Err(Error::Ambiguous(format!(
                "sigma = {sigma} assigned twice in sector v = {seniority}"
            )));
        }
        labels.push(sigma);
    }
    let amplitudes = o6
        .eigenvectors()
        .iter()
        .map(|u| u.iter().zip(vector).map(|(a, b)| a * b).sum::<f64>());
    Ok(DecompositionReport::from_amplitudes(labels, amplitudes))
}

fn assign_sigma(n_bosons: u32, seniority: u32, lambda: f64) -> Result<u32> {
    let nb = n_bosons as f64;
    // sigma(sigma + 4) = N(N + 4) - 4N lambda
    let disc = 4.0 + nb * (nb + 4.0) - 4.0 * nb * lambda;
    let estimate = disc.max(0.0).sqrt() - 2.0;
    let parity = n_bosons % 2;
    let mut best = None;
    let mut best_err = f64::INFINITY;
    let centre = estimate.round().max(0.0) as i64;
    for s in (centre - 2)..=(centre + 2) {
        if s < seniority as i64 || s > n_bosons as i64 || (s as u32) % 2 != parity {
            continue;
        }
        let err = (o6_energy(n_bosons, s as u32) - lambda).abs();
        if err < best_err {
            best_err = err;
            best = Some(s as u32);
        }
    }
    match best {
        Some(sigma) if best_err <= SIGMA_MATCH_TOL => Ok(sigma),
        _ => Err(Error::Ambiguous(format!(
            "eigenvalue {lambda} of S+S-/N matches no O(6) label within {SIGMA_MATCH_TOL}"
        ))),
    }
}

/// Squared overlap of the n-profiles of the `k`-th states of two sectors,
/// each ladder shifted to start at its own bottom, truncated to the common
/// length and renormalized.
pub fn coherence_overlap(params: &ModelParams, v_a: u32, v_b: u32, k: usize) -> Result<f64> {
    let a = diagonalize(params, v_a)?;
    let b = diagonalize(params, v_b)?;
    let (pa, pb) = (a.eigenvector(k)?, b.eigenvector(k)?);
    let len = pa.len().min(pb.len());
    let norm = |p: &[f64]| p[..len].iter().map(|x| x * x).sum::<f64>().sqrt();
    let (na, nb) = (norm(pa), norm(pb));
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    let dot: f64 = pa[..len].iter().zip(&pb[..len]).map(|(x, y)| x * y).sum();
    Ok(((dot / (na * nb)).powi(2)).min(1.0))
}

/// Knobs of the phase classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifierConfig {
    /// Relative accuracy below which a model counts as indistinguishable.
    pub tolerance: f64,
    /// Number of low-lying excited levels compared.
    pub levels: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            tolerance: 0.05,
            levels: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseLabel {
    #[serde(rename = "U5-phase")]
    U5,
    #[serde(rename = "O6-phase")]
    O6,
    #[serde(rename = "transition")]
    Transition,
}

impl PhaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::U5 => "U5-phase",
            PhaseLabel::O6 => "O6-phase",
            PhaseLabel::Transition => "transition",
        }
    }
}

impl std::fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseVerdict {
    pub label: PhaseLabel,
    pub u5_deviation: f64,
    pub o6_deviation: f64,
    pub tolerance: f64,
}

fn relative(exact: f64, model: f64) -> f64 {
    if exact > 0.0 {
        (exact - model).abs() / exact
    } else {
        f64::INFINITY
    }
}

/// Largest relative deviation of the lowest `levels` excitations and of
/// `B(E2)` from the RPA (U(5)-chain) model, whose level `(v, k)` sits at
/// `(v + 2k) eps`. Infinite where the RPA does not exist.
pub fn u5_deviation(params: &ModelParams, levels: usize) -> Result<f64> {
    let Ok(rpa) = rpa_solve(params.alpha()) else {
        return Ok(f64::INFINITY);
    };
    let v_max = (levels as u32).min(params.n_bosons());
    let mut spectrum: Vec<SpectrumLevel> =
        excitation_spectrum(params, v_max, levels.max(1) as u32)?
            .into_iter()
            .filter(|l| !(l.v == 0 && l.k == 0))
            .collect();
    spectrum.sort_by(|a, b| {
        a.excitation
            .total_cmp(&b.excitation)
            .then((a.v, a.k).cmp(&(b.v, b.k)))
    });
    let mut dev = spectrum
        .iter()
        .take(levels)
        .map(|l| relative(l.excitation, rpa.level(l.v, l.k)))
        .fold(0.0, f64::max);
    let model_be2 = rpa_be2(params.alpha())?;
    dev = dev.max((be2_first_excited(params)? - model_be2).abs() / model_be2);
    Ok(dev)
}

/// Reference energy of the `k`-th v = 0 level of the O(6)-chain model set
/// up by the harmonic approximation: the oscillator ladder plus the
/// curvature `-alpha k(k+1)/N` carried by the O(6) Casimir term.
pub fn o6_reference_level(model: &harmonic::HarmonicModel, k: u32) -> f64 {
    let k = k as f64;
    k * model.omega - model.alpha * k * (k + 1.0) / model.n_bosons as f64
}

/// Largest relative deviation of the lowest `levels` v = 0 excitations and
/// of `B(E2)` from the harmonic O(6)-chain model. Infinite where the
/// harmonic approximation does not exist or breaks down.
pub fn o6_deviation(params: &ModelParams, levels: usize) -> Result<f64> {
    if params.alpha() <= 0.5 {
        return Ok(f64::INFINITY);
    }
    let model = match fit_harmonic(params, 0) {
        Ok(m) => m,
        Err(Error::HarmonicBreakdown { .. }) => return Ok(f64::INFINITY),
        Err(e) => return Err(e),
    };
    let model_be2 = match harmonic::harmonic_be2(params) {
        Ok(b) => b,
        Err(Error::HarmonicBreakdown { .. }) => return Ok(f64::INFINITY),
        Err(e) => return Err(e),
    };
    let exact = diagonalize(params, 0)?;
    let e = exact.eigenvalues();
    let mut dev = (1..e.len().min(levels + 1))
        .map(|k| relative(e[k] - e[0], o6_reference_level(&model, k as u32)))
        .fold(0.0, f64::max);
    dev = dev.max((be2_first_excited(params)? - model_be2).abs() / model_be2);
    Ok(dev)
}

pub fn classify_phase(params: &ModelParams, config: &ClassifierConfig) -> Result<PhaseVerdict> {
    if !(config.tolerance > 0.0 && config.tolerance < 1.0) {
        return Err(Error::Domain(format!(
            "tolerance {} outside (0, 1)",
            config.tolerance
        )));
    }
    if config.levels == 0 {
        return Err(Error::Domain("classifier needs at least one level".into()));
    }
    let u5 = u5_deviation(params, config.levels)?;
    let o6 = o6_deviation(params, config.levels)?;
    let tol = config.tolerance;
    let label = match (u5 <= tol, o6 <= tol) {
        (true, true) if o6 < u5 => PhaseLabel::O6,
        (true, _) => PhaseLabel::U5,
        (false, true) => PhaseLabel::O6,
        (false, false) => PhaseLabel::Transition,
    };
    Ok(PhaseVerdict {
        label,
        u5_deviation: u5,
        o6_deviation: o6,
        tolerance: tol,
    })
}

/// Evenly spaced alpha grid on [0, 1] with spacing at most `step`.
pub fn alpha_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.01) {
        return Err(Error::Domain(format!(
            "grid step {step} must lie in (0, 0.01]"
        )));
    }
    let m = (1.0 / step - 1e-9).ceil() as usize;
    Ok((0..=m).map(|i| i as f64 / m as f64).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionWidth {
    pub n_bosons: u32,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub width: f64,
    pub tolerance: f64,
    pub verdicts: Vec<(f64, PhaseVerdict)>,
}

/// Extent of the transition region on an alpha grid.
///
/// `alpha_lo` is the upper end of the U(5) phase grown from alpha = 0 and
/// `alpha_hi` the lower end of the O(6) phase grown from alpha = 1; isolated
/// accidental agreements inside the transition region do not count.
pub fn transition_width(
    n_bosons: u32,
    config: &ClassifierConfig,
    step: f64,
) -> Result<TransitionWidth> {
    let grid = alpha_grid(step)?;
    let verdicts = grid
        .par_iter()
        .map(|&alpha| {
            classify_phase(&ModelParams::new(n_bosons, alpha)?, config).map(|v| (alpha, v))
        })
        .collect::<Result<Vec<_>>>()?;

    let u5_run = verdicts
        .iter()
        .take_while(|(_, v)| v.label == PhaseLabel::U5)
        .count();
    let o6_run = verdicts
        .iter()
        .rev()
        .take_while(|(_, v)| v.label == PhaseLabel::O6)
        .count();
    if u5_run == 0 {
        return Err(Error::NoPhase(format!(
            "N = {n_bosons}: alpha = 0 not in the U5 phase (u5 deviation {:.3e}, tolerance {})",
            verdicts[0].1.u5_deviation, config.tolerance
        )));
    }
    if o6_run == 0 {
        let last = verdicts.last().expect("grid is non-empty").1;
        return Err(Error::NoPhase(format!(
            "N = {n_bosons}: alpha = 1 not in the O6 phase (o6 deviation {:.3e}, tolerance {})",
            last.o6_deviation, config.tolerance
        )));
    }
    let alpha_lo = verdicts[u5_run - 1].0;
    let alpha_hi = verdicts[verdicts.len() - o6_run].0;
    Ok(TransitionWidth {
        n_bosons,
        alpha_lo,
        alpha_hi,
        width: alpha_hi - alpha_lo,
        tolerance: config.tolerance,
        verdicts,
    })
}
