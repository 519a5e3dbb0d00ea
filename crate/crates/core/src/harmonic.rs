//! Harmonic approximation of the deformed phase (alpha > 1/2).
//!
//! The sector operator couples `n` to `n ± 2`. Expanding
//! `psi(n ± 2) ≈ psi ± 2 psi' + 2 psi''` turns it into a one-dimensional
//! Schrödinger operator
//!
//! ```text
//! T psi ≈ U(n) psi + 4 b̄(n) psi'',     U(n) = a(n) + 2 b̄(n)
//! ```
//!
//! where `a` is the diagonal and `b̄(n)` the mean of the two couplings that
//! meet at `n`, continued analytically off the lattice. Around the minimum
//! `n0` of `U` this is an oscillator with frequency
//! `omega = sqrt(8 |b̄(n0)| U''(n0))` and Gaussian width
//! `s^2 = 8 |b̄(n0)| / omega`. For large N, `n0 / N -> (2 alpha - 1) / (2 alpha)`
//! and `omega -> sqrt(2 alpha - 1)`.

use crate::error::{Error, Result};
use crate::sector::{
    pairing_coupling, pairing_diag, quad_matrix_element, ModelParams, ModelSector,
};

const GOLDEN_TOL: f64 = 1e-8;
const CURVATURE_STEP: f64 = 1e-2;
const BRACKET_POINTS_PER_UNIT: usize = 4;

/// Oscillator fitted to one seniority sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicModel {
    pub alpha: f64,
    pub n_bosons: u32,
    pub seniority: u32,
    /// Equilibrium d-boson number (continuous).
    pub n0: f64,
    /// `4 |b̄(n0)|`, coefficient of `-d^2/dn^2`.
    pub kinetic: f64,
    /// `U''(n0)`.
    pub curvature: f64,
    pub omega: f64,
    /// `U(n0)`.
    pub u_min: f64,
}

impl HarmonicModel {
    /// Gaussian width in units of d-boson number.
    pub fn width(&self) -> f64 {
        (2.0 * self.kinetic / self.omega).sqrt()
    }

    /// Absolute energy `U(n0) + (k + 1/2) omega`.
    pub fn energy(&self, k: u32) -> f64 {
        self.u_min + (k as f64 + 0.5) * self.omega
    }

    pub fn sector(&self) -> ModelSector {
        ModelSector::new(self.n_bosons, self.seniority).expect("validated at fit time")
    }
}

struct Landscape {
    alpha: f64,
    n_bosons: u32,
    seniority: u32,
}

impl Landscape {
    fn mean_coupling(&self, n: f64) -> f64 {
        let b = |m| self.alpha * pairing_coupling(self.n_bosons, self.seniority, m);
        0.5 * (b(n - 2.0) + b(n))
    }

    fn diag(&self, n: f64) -> f64 {
        (1.0 - self.alpha) * n + self.alpha * pairing_diag(self.n_bosons, self.seniority, n)
    }

    fn potential(&self, n: f64) -> f64 {
        self.diag(n) + 2.0 * self.mean_coupling(n)
    }
}

fn breakdown(params: &ModelParams, seniority: u32, reason: impl Into<String>) -> Error {
    Error::HarmonicBreakdown {
        alpha: params.alpha(),
        n_bosons: params.n_bosons(),
        seniority,
        reason: reason.into(),
    }
}

/// Fits the oscillator to the seniority-`v` sector of `H(alpha)`.
///
/// Fails with [`Error::HarmonicBreakdown`] unless `U` has an interior
/// minimum with positive curvature at least one unit above the bottom of
/// the ladder; as alpha falls to 1/2 the minimum slides onto `n = v`.
pub fn fit_harmonic(params: &ModelParams, seniority: u32) -> Result<HarmonicModel> {
    let alpha = params.alpha();
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "harmonic approximation requires 0.5 < alpha <= 1 (got {alpha})"
        )));
    }
    let sector = params.sector(seniority)?;
    let nb = params.n_bosons();
    let land = Landscape {
        alpha,
        n_bosons: nb,
        seniority,
    };
    let (lo, hi) = (seniority as f64, nb as f64);
    if hi - lo < 2.0 {
        return Err(breakdown(
            params,
            seniority,
            "sector too short for a continuum fit",
        ));
    }

    // coarse scan to bracket the global minimum, then golden section
    let points = BRACKET_POINTS_PER_UNIT * (nb - seniority) as usize;
    let grid = |i: usize| lo + (hi - lo) * i as f64 / points as f64;
    let best = (0..=points)
        .min_by(|&i, &j| land.potential(grid(i)).total_cmp(&land.potential(grid(j))))
        .expect("non-empty grid");
    if best == 0 || best == points {
        return Err(breakdown(
            params,
            seniority,
            "potential minimum lies on the ladder boundary",
        ));
    }
    let n0 = golden_section(|n| land.potential(n), grid(best - 1), grid(best + 1));

    let h = CURVATURE_STEP;
    let curvature =
        (land.potential(n0 + h) - 2.0 * land.potential(n0) + land.potential(n0 - h)) / (h * h);
    if curvature.is_nan() || curvature <= 0.0 {
        return Err(breakdown(
            params,
            seniority,
            "non-positive curvature at the minimum",
        ));
    }
    if n0 - lo < 1.0 {
        return Err(breakdown(
            params,
            seniority,
            format!("minimum n0 = {n0:.4} within one unit of the ladder bottom"),
        ));
    }
    let kinetic = 4.0 * land.mean_coupling(n0).abs();
    let omega = (2.0 * kinetic * curvature).sqrt();
    if omega.is_nan() || omega <= 0.0 {
        return Err(breakdown(
            params,
            seniority,
            "vanishing oscillator frequency",
        ));
    }
    debug_assert_eq!(sector.seniority(), seniority);
    Ok(HarmonicModel {
        alpha,
        n_bosons: nb,
        seniority,
        n0,
        kinetic,
        curvature,
        omega,
        u_min: land.potential(n0),
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Oscillator ladder `k omega`, `k = 1..=k_max`.
pub fn harmonic_spectrum(model: &HarmonicModel, k_max: u32) -> Vec<(u32, f64)> {
    (1..=k_max).map(|k| (k, k as f64 * model.omega)).collect()
}

/// `k`-th oscillator eigenfunction sampled on the sector ladder and
/// normalized on the lattice; largest component positive.
pub fn gaussian_profile(model: &HarmonicModel, k: u32) -> Vec<f64> {
    let s = model.width();
    let mut profile: Vec<f64> = model
        .sector()
        .n_values()
        .map(|n| {
            let xi = (n as f64 - model.n0) / s;
            hermite(k, xi) * (-0.5 * xi * xi).exp()
        })
        .collect();
    let norm = profile.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        profile.iter_mut().for_each(|x| *x /= norm);
    }
    crate::eigen::fix_sign(&mut profile);
    profile
}

/// Physicists' Hermite polynomial scaled by `1 / sqrt(2^k k!)` to keep
/// high orders in range; the scale is removed by normalization anyway.
fn hermite(k: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 2f64.sqrt() * x;
    for j in 1..k {
        let j = j as f64;
        let next = (2.0 / (j + 1.0)).sqrt() * x * cur - (j / (j + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `B(E2; 1 -> 0)` with both states replaced by ground-state Gaussians of the
/// v = 0 and v = 1 oscillators, in units where the U(5) limit gives 100.
pub fn harmonic_be2(params: &ModelParams) -> Result<f64> {
    let ground = gaussian_profile(&fit_harmonic(params, 0)?, 0);
    let excited = gaussian_profile(&fit_harmonic(params, 1)?, 0);
    let m = quad_matrix_element(params.n_bosons(), &ground, &excited)?;
    Ok(100.0 * m * m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(nb: u32, alpha: f64, v: u32) -> Result<HarmonicModel> {
        fit_harmonic(&ModelParams::new(nb, alpha).unwrap(), v)
    }

    #[test]
    fn o6_point_centred_at_half_filling() {
        let m = fit(60, 1.0, 0).unwrap();
        assert!((m.n0 - 30.0).abs() <= 1.0, "n0 = {}", m.n0);
        assert!((m.omega - 1.0).abs() < 0.06);
    }

    #[test]
    fn omega_tends_to_large_n_limit() {
        let errs: Vec<f64> = [100, 400, 1600]
            .iter()
            .map(|&nb| (fit(nb, 1.0, 0).unwrap().omega - 1.0).abs())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!(errs[2] < 0.005);
        let m = fit(2000, 0.75, 0).unwrap();
        assert!((m.omega - 0.5f64.sqrt()).abs() < 0.005);
        assert!((m.n0 / 2000.0 - 1.0 / 3.0).abs() < 0.005);
    }

    #[test]
    fn three_quarter_equilibrium() {
        let m = fit(60, 0.75, 0).unwrap();
        assert!((m.n0 - 20.0).abs() < 2.0, "n0 = {}", m.n0);
    }

    #[test]
    fn equilibrium_monotone_in_alpha() {
        let mut prev = 0.0;
        for i in 0..=40 {
            let alpha = 0.6 + 0.01 * i as f64;
            let m = fit(200, alpha, 0).unwrap();
            assert!(m.n0 > prev);
            prev = m.n0;
        }
    }

    #[test]
    fn omega_vanishes_toward_half() {
        let a = fit(4000, 0.52, 0).unwrap().omega;
        let b = fit(4000, 0.505, 0).unwrap().omega;
        assert!(b < a && a < 0.25);
    }

    #[test]
    fn breakdown_near_half() {
        assert!(matches!(
            fit(20, 0.52, 0),
            Err(Error::HarmonicBreakdown { .. })
        ));
        assert!(fit(500, 0.52, 0).is_ok());
        assert!(matches!(fit(20, 0.5, 0), Err(Error::Domain(_))));
        assert!(matches!(fit(20, 0.3, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn profile_shapes() {
        let m = fit(60, 0.8, 0).unwrap();
        let p0 = gaussian_profile(&m, 0);
        assert!(p0.iter().all(|&x| x > 0.0));
        let peak = p0
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(p0[..peak].windows(2).all(|w| w[1] >= w[0]));
        assert!(p0[peak..].windows(2).all(|w| w[1] <= w[0]));
        let p1 = gaussian_profile(&m, 1);
        let changes = p1
            .windows(2)
            .filter(|w| w[0].signum() != w[1].signum())
            .count();
        assert_eq!(changes, 1);
        for p in [&p0, &p1] {
            let norm: f64 = p.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scaled_hermite_matches_explicit_polynomials() {
        // H_2 = 4x^2 - 2, H_3 = 8x^3 - 12x, scaled by 1/sqrt(2^k k!)
        for x in [-1.3, 0.0, 0.4, 2.2] {
            let h2 = (4.0 * x * x - 2.0) / (8f64).sqrt();
            let h3 = (8.0 * x * x * x - 12.0 * x) / (48f64).sqrt();
            assert!((hermite(2, x) - h2).abs() < 1e-12);
            assert!((hermite(3, x) - h3).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder() {
        let m = fit(60, 1.0, 0).unwrap();
        let l = harmonic_spectrum(&m, 3);
        assert_eq!(l.len(), 3);
        assert!((l[2].1 - 3.0 * m.omega).abs() < 1e-15);
    }
}
