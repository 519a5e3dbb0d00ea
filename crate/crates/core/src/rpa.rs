//! Random phase approximation about the s-boson condensate.
//!
//! The quasi-boson `D+_m = (x d+_m s - y s+ d_m) / sqrt(N)` diagonalizes the
//! double-commutator equations of motion, whose A and B blocks are scalar
//! multiples of the 5 x 5 identity:
//!
//! ```text
//! A = 1 - 3 alpha / 2,   B = -alpha / 2,   eps^2 = A^2 - B^2 = (1 - alpha)(1 - 2 alpha)
//! ```
//!
//! so the 10 x 10 problem collapses to scalars. For large N this is the
//! Bogolyubov transformation `d+ -> x d+ - y d`, obtained by replacing `s`
//! and `s+` with `sqrt(N)`. The frequency reaches zero at alpha = 1/2, where
//! the spherical condensate loses stability.

use crate::error::{Error, Result};

/// Scalar solution of the degenerate RPA problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpaSolution {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub epsilon: f64,
    pub x: f64,
    pub y: f64,
}

impl RpaSolution {
    /// Excitation of the state with `v` quasi-bosons of maximal seniority
    /// plus `k` seniority-zero quasi-boson pairs.
    pub fn level(&self, seniority: u32, k: u32) -> f64 {
        (seniority + 2 * k) as f64 * self.epsilon
    }
}

fn check_domain(alpha: f64) -> Result<()> {
    if !(0.0..0.5).contains(&alpha) {
        return Err(Error::Domain(format!(
            "RPA requires 0 <= alpha < 0.5 (got {alpha}); the quasi-boson energy \
             collapses to zero at alpha = 0.5"
        )));
    }
    Ok(())
}

pub fn rpa_solve(alpha: f64) -> Result<RpaSolution> {
    check_domain(alpha)?;
    let a = 1.0 - 1.5 * alpha;
    let b = -0.5 * alpha;
    let epsilon = ((1.0 - alpha) * (1.0 - 2.0 * alpha)).sqrt();
    // y / x = -B / (A + eps), normalized to x^2 - y^2 = 1
    let ratio = -b / (a + epsilon);
    let x = 1.0 / (1.0 - ratio * ratio).sqrt();
    Ok(RpaSolution {
        alpha,
        a,
        b,
        epsilon,
        x,
        y: ratio * x,
    })
}

/// Harmonic ladder `k eps`, `k = 1..=k_max`.
pub fn rpa_ladder(alpha: f64, k_max: u32) -> Result<Vec<(u32, f64)>> {
    let sol = rpa_solve(alpha)?;
    Ok((1..=k_max).map(|k| (k, k as f64 * sol.epsilon)).collect())
}

/// `B(E2; 1 -> 0)` in units where the U(5) limit gives 100.
pub fn rpa_be2(alpha: f64) -> Result<f64> {
    check_domain(alpha)?;
    Ok(100.0 * ((1.0 - alpha) / (1.0 - 2.0 * alpha)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u5_limit() {
        let s = rpa_solve(0.0).unwrap();
        assert_eq!((s.a, s.b, s.epsilon, s.x, s.y), (1.0, 0.0, 1.0, 1.0, 0.0));
        let ladder = rpa_ladder(0.0, 4).unwrap();
        assert_eq!(ladder, vec![(1, 1.0), (2, 2.0), (3, 3.0), (4, 4.0)]);
        assert_eq!(rpa_be2(0.0).unwrap(), 100.0);
    }

    #[test]
    fn quarter_point() {
        let s = rpa_solve(0.25).unwrap();
        assert!((s.epsilon - 0.375f64.sqrt()).abs() < 1e-15);
        assert!((s.epsilon - 0.612372).abs() < 1e-6);
        assert!((rpa_ladder(0.25, 2).unwrap()[1].1 - 1.224745).abs() < 1e-6);
        assert!((rpa_be2(0.25).unwrap() - 122.4745).abs() < 1e-4);
        let s = rpa_solve(0.4).unwrap();
        assert!((s.epsilon - 0.346410).abs() < 1e-6);
    }

    #[test]
    fn amplitude_identities() {
        for i in 0..50 {
            let alpha = i as f64 / 100.0;
            let s = rpa_solve(alpha).unwrap();
            assert!((s.a - (1.0 - 1.5 * alpha)).abs() < 1e-15);
            assert!((s.b + 0.5 * alpha).abs() < 1e-15);
            assert!((s.x * s.x - s.y * s.y - 1.0).abs() < 1e-12);
            assert!((s.y / s.x + s.b / (s.a + s.epsilon)).abs() < 1e-14);
            assert!(((s.x + s.y).powi(2) * (s.x - s.y).powi(2) - 1.0).abs() < 1e-12);
            assert!((100.0 * (s.x + s.y).powi(2) - rpa_be2(alpha).unwrap()).abs() < 1e-10);
            assert!(s.x > 0.0);
        }
    }

    #[test]
    fn collapse_at_half() {
        assert!(rpa_solve(0.4999).unwrap().epsilon < 0.02);
        assert!(rpa_be2(0.4999).unwrap() > 5000.0);
        for bad in [0.5, 0.7, 1.0, -0.1] {
            assert!(matches!(rpa_solve(bad), Err(Error::Domain(_))));
            assert!(matches!(rpa_be2(bad), Err(Error::Domain(_))));
            assert!(matches!(rpa_ladder(bad, 2), Err(Error::Domain(_))));
        }
    }
}
