//! Symmetric tridiagonal eigensolver.
//!
//! Implicit QL iteration with Wilkinson-type shifts, accumulating the
//! rotations into the eigenvector matrix (the EISPACK `tql2` scheme). Output
//! is sorted ascending and every eigenvector's largest-magnitude component
//! is made positive, so identical inputs give bit-identical outputs.

use crate::error::{Error, Result};
use crate::sector::{ModelSector, TridiagonalOperator};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and unit eigenvectors of one sector operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    sector: ModelSector,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    pub fn sector(&self) -> ModelSector {
        self.sector
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvector `k` in the n-ladder basis.
    pub fn eigenvector(&self, k: usize) -> Result<&[f64]> {
        self.eigenvectors
            .get(k)
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange {
                index: k,
                len: self.eigenvectors.len(),
            })
    }

    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lowest(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Full eigendecomposition of a symmetric tridiagonal operator.
pub fn solve(op: &TridiagonalOperator) -> Result<EigenDecomposition> {
    let n = op.dimension();
    let mut d = op.diag().to_vec();
    // e[i] couples i and i + 1; the trailing slot is scratch
    let mut e = op.offdiag().to_vec();
    e.push(0.0);
    // z[k][i]: component i of eigenvector k
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut col = vec![0.0; n];
            col[k] = 1.0;
            col
        })
        .collect();

    tql2(&mut d, &mut e, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| {
            let mut v = std::mem::take(&mut z[k]);
            fix_sign(&mut v);
            v
        })
        .collect();

    Ok(EigenDecomposition {
        sector: op.sector(),
        eigenvalues,
        eigenvectors,
    })
}

/// Flips `v` so its largest-magnitude component (first on ties) is positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [Vec<f64>]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;

    for l in 0..n {
        let mut iter = 0;
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        // smallest m >= l with negligible e[m]
        let mut m = l;
        while m < n - 1 {
            if tst1 + e[m].abs() == tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            loop {
                iter += 1;
                if iter > MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations: MAX_SWEEPS,
                    });
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = z.split_at_mut(i + 1);
                    let zi = &mut lo[i];
                    let zi1 = &mut hi[0];
                    for k in 0..n {
                        let t = zi1[k];
                        zi1[k] = s * zi[k] + c * t;
                        zi[k] = c * zi[k] - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if tst1 + e[l].abs() <= tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
