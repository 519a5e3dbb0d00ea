#![allow(dead_code)]

use ibm_qds::{solve, ModelSector, TridiagonalOperator};
use rand::rngs::StdRng;
use rand::RngExt;

pub const PROPERTY_TOL: f64 = 1e-10;

pub fn generic(diag: Vec<f64>, off: Vec<f64>) -> TridiagonalOperator {
    TridiagonalOperator::from_entries(ModelSector::new(1, 0).unwrap(), diag, off).unwrap()
}

/// Random symmetric tridiagonal matrix. One in four draws has clustered
/// diagonal entries and a few vanishing couplings to stress deflation.
pub fn random_tridiagonal(rng: &mut StdRng, max_dim: usize) -> TridiagonalOperator {
    let n = rng.random_range(1..=max_dim);
    let clustered = rng.random_range(0..4) == 0;
    let diag = (0..n)
        .map(|_| {
            if clustered {
                rng.random_range(0..3) as f64
            } else {
                rng.random_range(-10.0..10.0)
            }
        })
        .collect();
    let off = (1..n)
        .map(|_| {
            if clustered && rng.random_range(0..5) == 0 {
                0.0
            } else {
                rng.random_range(-5.0..5.0)
            }
        })
        .collect();
    generic(diag, off)
}

/// `(max residual ||T v - lambda v||, max |V^T V - I|)`.
pub fn residual_and_orthonormality(op: &TridiagonalOperator) -> (f64, f64) {
    let dec = solve(op).unwrap();
    let vecs = dec.eigenvectors();
    let mut residual = 0.0f64;
    for (lambda, v) in dec.eigenvalues().iter().zip(vecs) {
        let tv = op.apply(v);
        let r = tv
            .iter()
            .zip(v)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        residual = residual.max(r);
    }
    let mut orth = 0.0f64;
    for i in 0..vecs.len() {
        for j in i..vecs.len() {
            let dot: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            orth = orth.max((dot - target).abs());
        }
    }
    (residual, orth)
}

/// Eigenvalues of the leading principal block interlace those of the full matrix.
pub fn interlaces(op: &TridiagonalOperator) -> bool {
    let n = op.dimension();
    if n < 2 {
        return true;
    }
    let full = solve(op).unwrap();
    let sub = solve(&generic(
        op.diag()[..n - 1].to_vec(),
        op.offdiag()[..n - 2].to_vec(),
    ))
    .unwrap();
    let slack = PROPERTY_TOL * (1.0 + op.norm1());
    let (l, m) = (full.eigenvalues(), sub.eigenvalues());
    (0..n - 1).all(|i| l[i] <= m[i] + slack && m[i] <= l[i + 1] + slack)
}
