//! Seniority sectors and the sector matrices of `n_d`, `S+S-/N` and `H(alpha)`.
//!
//! Inside the sector `(N, v)` the basis states `|N, n, v>` are labelled by the
//! d-boson number `n = v, v + 2, ..., <= N`. They are generated from the
//! seniority-`v` d-boson state by the d-pair raising operator and from the
//! s-boson vacuum by s-pair raising, with the standard SU(1,1) ladder actions
//!
//! ```text
//! S^d_- |n v>  = 1/2 sqrt((n - v)(n + v + 3))  |n - 2, v>
//! S^s_- |n_s>  = 1/2 sqrt(n_s (n_s - 1))       |n_s - 2>
//! ```
//!
//! With `S_± = S^d_± - S^s_±` the operator `S+S-` is tridiagonal along the
//! n-ladder. All arrays are indexed by ladder position, n ascending.

use crate::error::{Error, Result};

/// One `(N, v)` block of the U(6) irrep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelSector {
    n_bosons: u32,
    seniority: u32,
}

impl ModelSector {
    pub fn new(n_bosons: u32, seniority: u32) -> Result<Self> {
        if n_bosons == 0 {
            return Err(Error::Domain("boson number N must be at least 1".into()));
        }
        if seniority > n_bosons {
            return Err(Error::Domain(format!(
                "seniority v = {seniority} exceeds N = {n_bosons}"
            )));
        }
        Ok(Self {
            n_bosons,
            seniority,
        })
    }

    pub fn n_bosons(&self) -> u32 {
        self.n_bosons
    }

    pub fn seniority(&self) -> u32 {
        self.seniority
    }

    pub fn dimension(&self) -> usize {
        ((self.n_bosons - self.seniority) / 2 + 1) as usize
    }

    /// d-boson number of ladder position `i`.
    pub fn n_at(&self, i: usize) -> u32 {
        self.seniority + 2 * i as u32
    }

    pub fn n_values(&self) -> impl ExactSizeIterator<Item = u32> + '_ {
        (0..self.dimension()).map(|i| self.n_at(i))
    }

    /// Ladder position of d-boson number `n`, if it lies in this sector.
    pub fn position_of(&self, n: u32) -> Option<usize> {
        if n < self.seniority || n > self.n_bosons || !(n - self.seniority).is_multiple_of(2) {
            None
        } else {
            Some(((n - self.seniority) / 2) as usize)
        }
    }
}

/// Number of states in the `(N, v)` sector.
pub fn sector_dimension(n_bosons: u32, seniority: u32) -> Result<usize> {
    ModelSector::new(n_bosons, seniority).map(|s| s.dimension())
}

/// Boson number, control parameter and quadrupole norm factor.
///
/// `z_charge` never enters a Hamiltonian entry and cancels in every
/// normalized transition strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n_bosons: u32,
    alpha: f64,
    z_charge: f64,
}

impl ModelParams {
    pub fn new(n_bosons: u32, alpha: f64) -> Result<Self> {
        Self::with_charge(n_bosons, alpha, 1.0)
    }

    pub fn with_charge(n_bosons: u32, alpha: f64, z_charge: f64) -> Result<Self> {
        if n_bosons == 0 {
            return Err(Error::Domain("boson number N must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain(format!(
                "control parameter alpha = {alpha} outside [0, 1]"
            )));
        }
        if !z_charge.is_finite() {
            return Err(Error::Domain(
                "quadrupole norm factor must be finite".into(),
            ));
        }
        Ok(Self {
            n_bosons,
            alpha,
            z_charge,
        })
    }

    pub fn n_bosons(&self) -> u32 {
        self.n_bosons
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn z_charge(&self) -> f64 {
        self.z_charge
    }

    pub fn sector(&self, seniority: u32) -> Result<ModelSector> {
        ModelSector::new(self.n_bosons, seniority)
    }
}

/// Symmetric tridiagonal matrix on the n-ladder of one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    sector: ModelSector,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalOperator {
    /// Builds an operator from raw entries; `offdiag` must be one shorter
    /// than `diag`, which must match the sector dimension.
    pub fn new(sector: ModelSector, diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.len() != sector.dimension() {
            return Err(Error::Domain(format!(
                "diagonal length {} does not match sector dimension {}",
                diag.len(),
                sector.dimension()
            )));
        }
        Self::from_entries(sector, diag, offdiag)
    }

    /// Like [`TridiagonalOperator::new`] but without tying the length to the
    /// sector; used for generic tridiagonal problems.
    pub fn from_entries(sector: ModelSector, diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Domain("empty tridiagonal operator".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "off-diagonal length {} must be diagonal length {} minus one",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite matrix entry".into()));
        }
        Ok(Self {
            sector,
            diag,
            offdiag,
        })
    }

    pub fn sector(&self) -> ModelSector {
        self.sector
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    /// `y = T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        assert_eq!(x.len(), n, "vector length must match operator dimension");
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.offdiag[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.offdiag[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// `wa * self + wb * other`, entrywise.
    fn combine(&self, wa: f64, other: &Self, wb: f64) -> Self {
        debug_assert_eq!(self.sector, other.sector);
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| wa * x + wb * y).collect();
        Self {
            sector: self.sector,
            diag: zip(&self.diag, &other.diag),
            offdiag: zip(&self.offdiag, &other.offdiag),
        }
    }
}

/// Diagonal of `S+S-/N` at (possibly non-integer) d-boson number `n`.
pub(crate) fn pairing_diag(n_bosons: u32, seniority: u32, n: f64) -> f64 {
    let nb = n_bosons as f64;
    let v = seniority as f64;
    ((n - v) * (n + v + 3.0) + (nb - n) * (nb - n - 1.0)) / (4.0 * nb)
}

/// Coupling `<n + 2, v| S+S-/N |n, v>`, continued to real `n`; zero wherever
/// the radicand is negative.
pub(crate) fn pairing_coupling(n_bosons: u32, seniority: u32, n: f64) -> f64 {
    let nb = n_bosons as f64;
    let v = seniority as f64;
    let radicand = (n + 2.0 - v) * (n + v + 5.0) * (nb - n) * (nb - n - 1.0);
    -radicand.max(0.0).sqrt() / (4.0 * nb)
}

/// `H1 = n_d`.
pub fn build_h1(sector: ModelSector) -> TridiagonalOperator {
    TridiagonalOperator {
        sector,
        diag: sector.n_values().map(f64::from).collect(),
        offdiag: vec![0.0; sector.dimension() - 1],
    }
}

/// `H2 = S+S-/N`.
pub fn build_h2(sector: ModelSector) -> TridiagonalOperator {
    let (nb, v) = (sector.n_bosons(), sector.seniority());
    let dim = sector.dimension();
    TridiagonalOperator {
        sector,
        diag: sector
            .n_values()
            .map(|n| pairing_diag(nb, v, n as f64))
            .collect(),
        offdiag: (0..dim - 1)
            .map(|i| pairing_coupling(nb, v, sector.n_at(i) as f64))
            .collect(),
    }
}

/// `H(alpha) = (1 - alpha) H1 + alpha H2` on the seniority-`v` sector.
pub fn build_h(params: &ModelParams, seniority: u32) -> Result<TridiagonalOperator> {
    let sector = params.sector(seniority)?;
    let alpha = params.alpha();
    Ok(build_h1(sector).combine(1.0 - alpha, &build_h2(sector), alpha))
}

/// Reduced v = 0 -> v = 1 amplitudes of `(d+ s + s+ d~) / sqrt(N)`, per
/// quadrupole component, with the norm factor divided out.
///
/// Indexed by the ladder position of the v = 0 state `n`: `up[i]` couples
/// `|N, n, 0>` to `|N, n + 1, 1>` and `down[i]` couples it to `|N, n - 1, 1>`.
/// Both are taken non-negative, which is the sign the m-scheme construction
/// gives for `d~_m = (-1)^m d_{-m}` with pair states built from
/// `d+.d+ = sum_m (-1)^m d+_m d+_{-m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadAmplitudes {
    pub up: Vec<f64>,
    pub down: Vec<f64>,
}

pub fn quad_amplitude_up(n_bosons: u32, n: u32) -> f64 {
    let (nb, n) = (n_bosons as f64, n as f64);
    ((nb - n).max(0.0) * (n + 5.0) / (5.0 * nb)).sqrt()
}

pub fn quad_amplitude_down(n_bosons: u32, n: u32) -> f64 {
    let (nb, n) = (n_bosons as f64, n as f64);
    (n * (nb - n + 1.0).max(0.0) / (5.0 * nb)).sqrt()
}

pub fn quad_amplitudes_v0_v1(n_bosons: u32) -> Result<QuadAmplitudes> {
    let sector = ModelSector::new(n_bosons, 0)?;
    Ok(QuadAmplitudes {
        up: sector
            .n_values()
            .map(|n| quad_amplitude_up(n_bosons, n))
            .collect(),
        down: sector
            .n_values()
            .map(|n| quad_amplitude_down(n_bosons, n))
            .collect(),
    })
}

/// `<e| Q |g>` per quadrupole component for a v = 0 state `g` and a v = 1
/// state `e`, both given as ladder amplitudes, with `Z` divided out.
pub fn quad_matrix_element(n_bosons: u32, ground: &[f64], excited: &[f64]) -> Result<f64> {
    let s0 = ModelSector::new(n_bosons, 0)?;
    let s1 = ModelSector::new(n_bosons, 1)?;
    if ground.len() != s0.dimension() || excited.len() != s1.dimension() {
        return Err(Error::Domain(format!(
            "amplitude lengths ({}, {}) do not match sectors ({}, {})",
            ground.len(),
            excited.len(),
            s0.dimension(),
            s1.dimension()
        )));
    }
    let amps = quad_amplitudes_v0_v1(n_bosons)?;
    let mut m = 0.0;
    for (i, n) in s0.n_values().enumerate() {
        if let Some(j) = s1.position_of(n + 1) {
            m += ground[i] * amps.up[i] * excited[j];
        }
        if n >= 1 {
            if let Some(j) = s1.position_of(n - 1) {
                m += ground[i] * amps.down[i] * excited[j];
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn sector_dimensions() {
        assert_eq!(sector_dimension(2, 0).unwrap(), 2);
        assert_eq!(sector_dimension(5, 5).unwrap(), 1);
        // n = 1, 3, ..., 59
        let enumerated = (1..=60).filter(|n| n % 2 == 1).count();
        assert_eq!(sector_dimension(60, 1).unwrap(), enumerated);
        assert_eq!(enumerated, 30);
    }

    #[test]
    fn invalid_sectors_are_domain_errors() {
        assert!(matches!(sector_dimension(3, 4), Err(Error::Domain(_))));
        assert!(matches!(sector_dimension(0, 0), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::new(10, 1.5), Err(Error::Domain(_))));
        assert!(matches!(ModelParams::new(10, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn n_ladder_parity_and_bounds() {
        for nb in 1..12 {
            for v in 0..=nb {
                let s = ModelSector::new(nb, v).unwrap();
                for n in s.n_values() {
                    assert_eq!(n % 2, v % 2);
                    assert!(v <= n && n <= nb);
                }
                assert_eq!(s.n_values().len(), s.dimension());
            }
        }
    }

    #[test]
    fn h1_is_number_operator() {
        let h = build_h1(ModelSector::new(2, 0).unwrap());
        assert_eq!(h.diag(), &[0.0, 2.0]);
        assert_eq!(h.offdiag(), &[0.0]);
        let h = build_h1(ModelSector::new(3, 1).unwrap());
        assert_eq!(h.diag(), &[1.0, 3.0]);
        let h = build_h1(ModelSector::new(60, 0).unwrap());
        let expected: Vec<f64> = (0..=30).map(|i| 2.0 * i as f64).collect();
        assert_eq!(h.diag(), expected.as_slice());
    }

    #[test]
    fn h2_two_boson_block() {
        let h = build_h2(ModelSector::new(2, 0).unwrap());
        assert!(close(h.diag()[0], 0.25, 1e-15));
        assert!(close(h.diag()[1], 1.25, 1e-15));
        assert!(close(h.offdiag()[0], -(5f64).sqrt() / 4.0, 1e-15));
        // eigenvalues {0, 3/2} from trace and determinant
        let tr = h.trace();
        let det = h.diag()[0] * h.diag()[1] - h.offdiag()[0].powi(2);
        assert!(close(tr, 1.5, 1e-15));
        assert!(close(det, 0.0, 1e-15));
    }

    #[test]
    fn h2_top_of_seniority_ladder_vanishes() {
        for nb in 1..10 {
            let h = build_h2(ModelSector::new(nb, nb).unwrap());
            assert_eq!(h.dimension(), 1);
            assert!(close(h.diag()[0], 0.0, 1e-15));
        }
    }

    #[test]
    fn h2_signs() {
        for nb in 1..30 {
            for v in 0..=nb {
                let h = build_h2(ModelSector::new(nb, v).unwrap());
                assert!(h.diag().iter().all(|&x| x >= 0.0));
                assert!(h.offdiag().iter().all(|&x| x <= 0.0));
            }
        }
    }

    #[test]
    fn h_interpolates() {
        let p0 = ModelParams::new(7, 0.0).unwrap();
        let p1 = ModelParams::new(7, 1.0).unwrap();
        for v in 0..=7 {
            let s = ModelSector::new(7, v).unwrap();
            assert_eq!(build_h(&p0, v).unwrap(), build_h1(s));
            assert_eq!(build_h(&p1, v).unwrap(), build_h2(s));
        }
        let h = build_h(&ModelParams::new(2, 0.5).unwrap(), 0).unwrap();
        assert!(close(h.diag()[0], 1.0 / 8.0, 1e-15));
        assert!(close(h.diag()[1], 13.0 / 8.0, 1e-15));
        assert!(close(h.offdiag()[0], -(5f64).sqrt() / 8.0, 1e-15));
    }

    #[test]
    fn charge_does_not_enter_hamiltonian() {
        let a = ModelParams::with_charge(9, 0.3, 1.0).unwrap();
        let b = ModelParams::with_charge(9, 0.3, 7.5).unwrap();
        for v in 0..=9 {
            assert_eq!(build_h(&a, v).unwrap(), build_h(&b, v).unwrap());
        }
    }

    #[test]
    fn quadrupole_amplitudes() {
        for nb in [1, 2, 7, 60] {
            let amps = quad_amplitudes_v0_v1(nb).unwrap();
            assert_eq!(amps.down[0], 0.0);
            assert!(close(amps.up[0], 1.0, 1e-15));
            if nb % 2 == 0 {
                assert_eq!(*amps.up.last().unwrap(), 0.0);
            }
            assert!(close(quad_amplitude_down(nb, 1), 1.0 / 5f64.sqrt(), 1e-15));
        }
        assert_eq!(quad_amplitude_up(9, 9), 0.0);
    }

    #[test]
    fn u5_limit_matrix_element_is_one() {
        let nb = 8;
        let mut g = vec![0.0; 5];
        g[0] = 1.0;
        let mut e = vec![0.0; 4];
        e[0] = 1.0;
        assert!(close(quad_matrix_element(nb, &g, &e).unwrap(), 1.0, 1e-15));
    }
}
