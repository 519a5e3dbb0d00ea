//! Brute-force m-scheme construction of the full N-boson Fock space.
//!
//! Six modes: `s` and `d_m`, `m = -2..=2`. Operators are assembled from the
//! elementary `sqrt(occupation)` ladder actions, with the scalar pair
//! products `d+.d+ = sum_m (-1)^m d+_m d+_{-m}` and the spherical annihilator
//! `d~_m = (-1)^m d_{-m}`. Dense matrices, so N is capped at 8.
//!
//! Seniority in this basis comes from `v(v + 3) = n(n + 3) - 4 S^d_+ S^d_-`,
//! built from the same boson algebra, never from the reduced formulas.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::sector::ModelParams;

pub const MAX_ORACLE_BOSONS: u32 = 8;
/// Gap below which eigenvalues count as one multiplet.
pub const MULTIPLET_GAP: f64 = 1e-6;

const S: usize = 0;

/// Occupations `(n_s, n_{d,-2}, n_{d,-1}, n_{d,0}, n_{d,+1}, n_{d,+2})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    pub occupations: [u32; 6],
}

impl FockState {
    pub fn total(&self) -> u32 {
        self.occupations.iter().sum()
    }

    pub fn d_count(&self) -> u32 {
        self.occupations[1..].iter().sum()
    }
}

fn d_mode(m: i32) -> usize {
    (m + 3) as usize
}

fn parity(m: i32) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_size(n_bosons: u32) -> Result<()> {
    if n_bosons == 0 || n_bosons > MAX_ORACLE_BOSONS {
        return Err(Error::Domain(format!(
            "m-scheme oracle supports 1 <= N <= {MAX_ORACLE_BOSONS} (got {n_bosons})"
        )));
    }
    Ok(())
}

/// All occupations of six modes summing to `n_bosons`, lexicographic.
pub fn enumerate_fock(n_bosons: u32) -> Result<Vec<FockState>> {
    check_size(n_bosons)?;
    Ok(compositions(n_bosons))
}

fn compositions(total: u32) -> Vec<FockState> {
    fn rec(mode: usize, left: u32, cur: &mut [u32; 6], out: &mut Vec<FockState>) {
        if mode == 5 {
            cur[5] = left;
            out.push(FockState { occupations: *cur });
            return;
        }
        for k in 0..=left {
            cur[mode] = k;
            rec(mode + 1, left - k, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, total, &mut [0; 6], &mut out);
    out
}

/// A term of an operator acting on one Fock state: amplitude and image.
type Image = (f64, FockState);

fn annihilate(state: FockState, mode: usize) -> Option<Image> {
    let occ = state.occupations[mode];
    if occ == 0 {
        return None;
    }
    let mut next = state;
    next.occupations[mode] -= 1;
    Some(((occ as f64).sqrt(), next))
}

fn create(state: FockState, mode: usize) -> Image {
    let mut next = state;
    next.occupations[mode] += 1;
    (((state.occupations[mode] + 1) as f64).sqrt(), next)
}

/// Basis of a fixed boson number with index lookup.
struct Space {
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl Space {
    fn new(total: u32) -> Self {
        let states = compositions(total);
        let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Self { states, index }
    }

    fn dim(&self) -> usize {
        self.states.len()
    }
}

/// Matrix of an operator from `from` to `to`, given its action on states.
fn matrix_of(from: &Space, to: &Space, action: impl Fn(FockState) -> Vec<Image>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(to.dim(), from.dim());
    for (j, &state) in from.states.iter().enumerate() {
        for (amp, image) in action(state) {
            let i = to.index[&image];
            m[(i, j)] += amp;
        }
    }
    m
}

/// `1/2 d.d`, two d quanta removed.
fn d_pair_lowering(state: FockState) -> Vec<Image> {
    let mut out = Vec::new();
    for m in -2..=2 {
        if let Some((a1, s1)) = annihilate(state, d_mode(-m)) {
            if let Some((a2, s2)) = annihilate(s1, d_mode(m)) {
                out.push((0.5 * parity(m) * a1 * a2, s2));
            }
        }
    }
    out
}

/// `1/2 s s`.
fn s_pair_lowering(state: FockState) -> Vec<Image> {
    annihilate(state, S)
        .and_then(|(a1, s1)| annihilate(s1, S).map(|(a2, s2)| vec![(0.5 * a1 * a2, s2)]))
        .unwrap_or_default()
}

/// Dense m-scheme operator on the `N`-boson space.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    pub states: Vec<FockState>,
    pub entries: DMatrix<f64>,
}

impl DenseOperator {
    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    pub fn max_asymmetry(&self) -> f64 {
        (&self.entries - self.entries.transpose()).amax()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// Eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Pair lowering `S^d_-` and `S^s_-` from N to N - 2 bosons, or `None` for N < 2.
fn pair_lowering(n_bosons: u32, space: &Space) -> Option<(DMatrix<f64>, DMatrix<f64>)> {
    (n_bosons >= 2).then(|| {
        let lower = Space::new(n_bosons - 2);
        (
            matrix_of(space, &lower, d_pair_lowering),
            matrix_of(space, &lower, s_pair_lowering),
        )
    })
}

fn d_number(space: &Space) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(
        space.dim(),
        space.states.iter().map(|s| s.d_count() as f64),
    ))
}

/// `(1 - alpha) n_d + (alpha / N) S+ S-` in the m-scheme basis.
pub fn build_full_h(params: &ModelParams) -> Result<DenseOperator> {
    let nb = params.n_bosons();
    check_size(nb)?;
    let space = Space::new(nb);
    let alpha = params.alpha();
    let mut h = d_number(&space) * (1.0 - alpha);
    if let Some((sd, ss)) = pair_lowering(nb, &space) {
        let s_minus = sd - ss;
        h += s_minus.transpose() * &s_minus * (alpha / nb as f64);
    }
    Ok(DenseOperator {
        states: space.states,
        entries: h,
    })
}

/// `n(n + 3) - 4 S^d_+ S^d_-`, diagonal with eigenvalue `v(v + 3)` on
/// seniority-`v` states.
fn seniority_operator(n_bosons: u32, space: &Space) -> DMatrix<f64> {
    let mut w = DMatrix::from_diagonal(&DVector::from_iterator(
        space.dim(),
        space.states.iter().map(|s| {
            let n = s.d_count() as f64;
            n * (n + 3.0)
        }),
    ));
    if let Some((sd, _)) = pair_lowering(n_bosons, space) {
        w -= sd.transpose() * &sd * 4.0;
    }
    w
}

/// `Q_m = d+_m s + s+ d~_m` for `m = -2..=2`, without the `Z / sqrt(N)` factor.
fn quadrupole_components(space: &Space) -> Vec<DMatrix<f64>> {
    (-2..=2)
        .map(|m| {
            matrix_of(space, space, |state| {
                let mut out = Vec::new();
                if let Some((a1, s1)) = annihilate(state, S) {
                    let (a2, s2) = create(s1, d_mode(m));
                    out.push((a1 * a2, s2));
                }
                if let Some((a1, s1)) = annihilate(state, d_mode(-m)) {
                    let (a2, s2) = create(s1, S);
                    out.push((parity(m) * a1 * a2, s2));
                }
                out
            })
        })
        .collect()
}

fn seniority_of(w: f64) -> Result<u32> {
    // v(v + 3) = w
    let v = ((9.0 + 4.0 * w).max(0.0).sqrt() - 3.0) / 2.0;
    let r = v.round();
    if (v - r).abs() > 1e-6 || r < 0.0 {
        return Err(Error::Ambiguous(format!(
            "seniority expectation {w} is not of the form v(v + 3)"
        )));
    }
    Ok(r as u32)
}

/// Eigenstates of `H` labelled by seniority, from the m-scheme space.
struct LabelledSpectrum {
    energies: Vec<f64>,
    seniorities: Vec<u32>,
    vectors: DMatrix<f64>,
}

fn labelled_spectrum(
    params: &ModelParams,
    space: &Space,
    h: &DMatrix<f64>,
) -> Result<LabelledSpectrum> {
    // a small seniority term splits cross-sector degeneracies, making every
    // eigenvector a seniority eigenstate
    let shift = 1e-3 * std::f64::consts::SQRT_2;
    let w = seniority_operator(params.n_bosons(), space);
    let eig = SymmetricEigen::new(h + &w * shift);
    let mut energies = Vec::with_capacity(space.dim());
    let mut seniorities = Vec::with_capacity(space.dim());
    for j in 0..space.dim() {
        let col = eig.eigenvectors.column(j);
        let wexp = col.dot(&(&w * col));
        energies.push(col.dot(&(h * col)));
        seniorities.push(seniority_of(wexp)?);
    }
    Ok(LabelledSpectrum {
        energies,
        seniorities,
        vectors: eig.eigenvectors,
    })
}

/// Summed `|<e_i| Q_m |g>|^2` over components and the lowest v = 1 multiplet,
/// with `Z = 1` and the `1/N` prefactor included.
fn raw_strength(params: &ModelParams) -> Result<f64> {
    let nb = params.n_bosons();
    let space = Space::new(nb);
    let h = build_full_h(params)?.entries;
    let spec = labelled_spectrum(params, &space, &h)?;

    let lowest_with = |v: u32| {
        (0..space.dim())
            .filter(|&j| spec.seniorities[j] == v)
            .min_by(|&a, &b| spec.energies[a].total_cmp(&spec.energies[b]))
    };
    let g = lowest_with(0).ok_or_else(|| Error::Ambiguous("no v = 0 state".into()))?;
    let e0 = lowest_with(1).ok_or_else(|| Error::Ambiguous("no v = 1 state".into()))?;
    let ground_partners = (0..space.dim())
        .filter(|&j| {
            spec.seniorities[j] == 0 && (spec.energies[j] - spec.energies[g]).abs() < MULTIPLET_GAP
        })
        .count();
    if ground_partners != 1 {
        return Err(Error::Ambiguous(format!(
            "v = 0 ground state is {ground_partners}-fold degenerate"
        )));
    }
    let multiplet: Vec<usize> = (0..space.dim())
        .filter(|&j| {
            spec.seniorities[j] == 1 && (spec.energies[j] - spec.energies[e0]).abs() < MULTIPLET_GAP
        })
        .collect();
    if multiplet.len() != 5 {
        return Err(Error::Ambiguous(format!(
            "lowest v = 1 multiplet has {} members, expected 5",
            multiplet.len()
        )));
    }

    let ground = spec.vectors.column(g);
    let mut total = 0.0;
    for q in quadrupole_components(&space) {
        let qg = q * ground;
        for &j in &multiplet {
            total += spec.vectors.column(j).dot(&qg).powi(2);
        }
    }
    Ok(total * params.z_charge().powi(2) / nb as f64)
}

/// `B(E2)` of the lowest v = 1 multiplet to the ground state, relative to
/// its U(5)-limit value, times 100.
pub fn q_strength_ratio(params: &ModelParams) -> Result<f64> {
    let reference = ModelParams::with_charge(params.n_bosons(), 0.0, params.z_charge())?;
    Ok(100.0 * raw_strength(params)? / raw_strength(&reference)?)
}

/// SO(5) multiplicity `(v + 1)(v + 2)(2v + 3) / 6`.
pub fn so5_multiplicity(v: u32) -> usize {
    let v = v as usize;
    (v + 1) * (v + 2) * (2 * v + 3) / 6
}
