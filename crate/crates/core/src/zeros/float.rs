//! Floating-point backend for matrices with transcendental entries.
//!
//! Structure mirrors the exact backend: supports are enumerated by
//! increasing cardinality, a support is accepted when its principal
//! submatrix is PSD with corank 1 and a strictly positive kernel generator,
//! under a tolerance `tau`. Eigenvalues come from a cyclic Jacobi sweep.

use crate::families::{cmp_masks, mask_to_list, SupportFamily};
use thiserror::Error;

/// Default eigenvalue tolerance for PSD and corank decisions.
pub const DEFAULT_TAU: f64 = 1e-9;

/// Off-diagonal convergence threshold for the Jacobi sweep, relative to the
/// Frobenius norm.
const JACOBI_OFF_THRESHOLD: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 60;

/// Dense symmetric matrix over `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatF64 {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl SymMatF64 {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        assert!(n >= 1);
        for r in &rows {
            assert_eq!(r.len(), n, "matrix must be square");
        }
        for i in 0..n {
            for j in i + 1..n {
                assert!(
                    (rows[i][j] - rows[j][i]).abs() < 1e-12,
                    "matrix must be symmetric"
                );
            }
        }
        Self { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let rows = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.rows[i][j]).collect())
            .collect();
        Self {
            n: idx.len(),
            rows,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.rows[i][j] * x[j]).sum())
            .collect()
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        let ax = self.mul_vec(x);
        x.iter().zip(ax.iter()).map(|(a, b)| a * b).sum()
    }
}

/// Eigendecomposition by cyclic Jacobi rotations. Returns unsorted
/// eigenvalues and the matching eigenvectors as columns.
pub fn jacobi_eigen(m: &SymMatF64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.n();
    let mut a: Vec<Vec<f64>> = m.rows.clone();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let fro: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let stop = JACOBI_OFF_THRESHOLD * fro.max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let eigvals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    let eigvecs: Vec<Vec<f64>> = (0..n).map(|c| (0..n).map(|r| v[r][c]).collect()).collect();
    (eigvals, eigvecs)
}

/// PSD verdict under a tolerance: PSD when the smallest eigenvalue is at
/// least `-tau`; corank counts eigenvalues within `tau` of zero.
#[derive(Debug, Clone)]
pub struct FloatPsdStatus {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub corank: usize,
    pub kernel: Vec<Vec<f64>>,
}

pub fn psd_status_f64(m: &SymMatF64, tau: f64) -> FloatPsdStatus {
    let (vals, vecs) = jacobi_eigen(m);
    let min_eigenvalue = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let psd = min_eigenvalue >= -tau;
    let kernel: Vec<Vec<f64>> = vals
        .iter()
        .zip(vecs.iter())
        .filter(|(l, _)| l.abs() <= tau)
        .map(|(_, v)| v.clone())
        .collect();
    FloatPsdStatus {
        psd,
        min_eigenvalue,
        corank: kernel.len(),
        kernel,
    }
}

/// A zero found by the float backend, normalized so its largest entry is 1.
#[derive(Debug, Clone)]
pub struct FloatZero {
    pub vector: Vec<f64>,
    pub support: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FloatMinimalZeroSet {
    n: usize,
    pub zeros: Vec<FloatZero>,
}

impl FloatMinimalZeroSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support_family(&self) -> SupportFamily {
        SupportFamily::new(
            self.n,
            &self.zeros.iter().map(|z| z.support.clone()).collect::<Vec<_>>(),
        )
        .expect("supports are valid index sets")
    }
}

#[derive(Debug, Clone, Error)]
#[error("matrix is not copositive within tolerance: witness with x^T A x = {value:.6e}")]
pub struct FloatEvidence {
    pub witness: Vec<f64>,
    pub value: f64,
}

/// Float-backend minimal zero search. Same pruning and acceptance logic as
/// the exact backend, with eigenvalue decisions at tolerance `tau`.
pub fn find_minimal_zeros_f64(
    m: &SymMatF64,
    tau: f64,
) -> Result<FloatMinimalZeroSet, FloatEvidence> {
    let n = m.n();
    assert!(n <= 16);
    let full: u16 = if n == 16 { u16::MAX } else { (1 << n) - 1 };
    let mut accepted: Vec<u16> = Vec::new();
    let mut zeros = Vec::new();
    for card in 1..=n {
        let mut masks: Vec<u16> = (1..=full)
            .filter(|m| m.count_ones() as usize == card)
            .collect();
        masks.sort_by(|&x, &y| cmp_masks(x, y));
        for mask in masks {
            if accepted.iter().any(|&s| s & mask == s) {
                continue;
            }
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub = m.principal_submatrix(&idx);
            let st = psd_status_f64(&sub, tau);
            if !st.psd {
                // A sign-uniform eigenvector with negative eigenvalue is
                // copositivity counter-evidence.
                let (vals, vecs) = jacobi_eigen(&sub);
                for (l, v) in vals.iter().zip(vecs.iter()) {
                    if *l < -tau {
                        let uniform = v.iter().all(|x| *x >= -tau) || v.iter().all(|x| *x <= tau);
                        if uniform {
                            let mut w = vec![0.0; n];
                            for (pos, &i) in idx.iter().enumerate() {
                                w[i] = v[pos].abs();
                            }
                            let value = m.quad_form(&w);
                            return Err(FloatEvidence { witness: w, value });
                        }
                    }
                }
                continue;
            }
            if st.corank != 1 {
                continue;
            }
            let gen = &st.kernel[0];
            // Normalize so the entry of largest magnitude is +1.
            let (imax, _) = gen
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
                .unwrap();
            let scale = gen[imax];
            let normd: Vec<f64> = gen.iter().map(|x| x / scale).collect();
            if normd.iter().all(|&x| x > tau) {
                let mut u = vec![0.0; n];
                for (pos, &i) in idx.iter().enumerate() {
                    u[i] = normd[pos];
                }
                accepted.push(mask);
                zeros.push(FloatZero {
                    vector: u,
                    support: mask_to_list(mask),
                });
            }
        }
    }
    Ok(FloatMinimalZeroSet { n, zeros })
}
