//! Empirical width estimation: midpoint grids, snapshot matrices, singular
//! values (POD), and projection distances onto explicit trigonometric bases.

use crate::signals::{Field2, Signal};
use crate::widths::Parity;
use crate::{Error, Result};
use ndarray::{Array2, ArrayView1};
use ndarray_linalg::{JobSvd, SVDDC};
use rayon::prelude::*;

/// Midpoint-rule nodes `(2i - 1) / (2n)`, i = 1..=n, on `(0, 1)`.
pub fn midpoint_grid(n: usize) -> Vec<f64> {
    assert!(n >= 1);
    (1..=n)
        .map(|i| (2.0 * i as f64 - 1.0) / (2.0 * n as f64))
        .collect()
}

/// Snapshot matrix `X_{ij} = g(x_i - mu_j)` over midpoint grids, together
/// with the quadrature weight that converts squared singular values into
/// squared widths. Jumps are sampled by their right-sided limit so that the
/// matrix carries the almost-everywhere values of the datum.
#[derive(Debug, Clone)]
pub struct SnapshotMatrix {
    pub data: Array2<f64>,
    pub n_space: usize,
    pub n_mu: usize,
    /// Product of the spatial and parameter quadrature weights
    /// (`1/(n_x n_mu)` in 1D).
    pub weight: f64,
}

/// Assemble the 1D snapshot matrix; columns (one per `mu_j`) in parallel.
pub fn snapshot_matrix(g: &Signal, n_x: usize, n_mu: usize) -> SnapshotMatrix {
    let xs = midpoint_grid(n_x);
    let mus = midpoint_grid(n_mu);
    let cols: Vec<Vec<f64>> = mus
        .par_iter()
        .map(|&mu| xs.iter().map(|&x| g.eval_right(x - mu)).collect())
        .collect();
    let mut data = Array2::zeros((n_x, n_mu));
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            data[(i, j)] = v;
        }
    }
    SnapshotMatrix {
        data,
        n_space: n_x,
        n_mu,
        weight: 1.0 / (n_x as f64 * n_mu as f64),
    }
}

/// Snapshot matrix for a bivariate field: rows run over the tensor midpoint
/// grid of `Omega x (0,1)` flattened x-fastest (row `i + n_x * i_y`), columns
/// over `mu_j`.
pub fn snapshot_matrix_2d(f: &Field2, n_x: usize, n_y: usize, n_mu: usize) -> SnapshotMatrix {
    let xs = midpoint_grid(n_x);
    let ys = midpoint_grid(n_y);
    let mus = midpoint_grid(n_mu);
    let cols: Vec<Vec<f64>> = mus
        .par_iter()
        .map(|&mu| {
            let mut col = Vec::with_capacity(n_x * n_y);
            for &y in &ys {
                for &x in &xs {
                    col.push(f.eval_shifted(x, y, mu));
                }
            }
            col
        })
        .collect();
    let mut data = Array2::zeros((n_x * n_y, n_mu));
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            data[(i, j)] = v;
        }
    }
    SnapshotMatrix {
        data,
        n_space: n_x * n_y,
        n_mu,
        weight: 1.0 / (n_x as f64 * n_y as f64 * n_mu as f64),
    }
}

/// All singular values of the snapshot matrix, nonincreasing.
///
/// Uses the LAPACK divide-and-conquer driver with singular values only; the
/// orthogonality/accuracy contract is inherited from the backend and spot
/// checked in the test suite against analytic spectra.
pub fn singular_values(x: &SnapshotMatrix) -> Result<Vec<f64>> {
    let (_, sigma, _) = x
        .data
        .svddc(JobSvd::None)
        .map_err(|e| Error::SvdFailed(format!("LAPACK gesdd: {e}")))?;
    Ok(sigma.to_vec())
}

/// Empirical L2-average width curve from singular values:
/// `delta_N^2 = weight * sum_{k > N} sigma_k^2` for `N = 0..=n_max`.
///
/// The quadrature weight makes the discrete value approximate the continuous
/// width (at `N = 0` it reproduces `int_P ||u_mu||^2 dmu`).
pub fn pod_width_curve(sigma: &[f64], weight: f64, n_max: usize) -> Vec<f64> {
    // suffix sums accumulated from the small end
    let mut suffix = vec![0.0; sigma.len() + 1];
    for i in (0..sigma.len()).rev() {
        suffix[i] = suffix[i + 1] + sigma[i] * sigma[i];
    }
    (0..=n_max)
        .map(|n| {
            (weight * suffix.get(n).copied().unwrap_or(0.0))
                .max(0.0)
                .sqrt()
        })
        .collect()
}

/// Node values of the orthonormal-on-`Omega` trigonometric basis at the grid.
///
/// Odd parity: columns `sqrt(2) cos((2k-1) pi x), sqrt(2) sin((2k-1) pi x)`
/// interleaved for k = 1..=K (N = 2K columns). Even parity: the constant
/// column 1 followed by the same interleaving at frequencies `2k`
/// (N = 2K + 1 columns).
pub fn basis_matrix(parity: Parity, k_blocks: usize, grid: &[f64]) -> Result<Array2<f64>> {
    if k_blocks == 0 {
        return Err(Error::InvalidParameter(
            "need at least one basis block".into(),
        ));
    }
    let f_max = match parity {
        Parity::Odd => 2 * k_blocks - 1,
        Parity::Even => 2 * k_blocks,
    };
    // at least 4 nodes per period of the fastest mode: f <= n/2
    if 2 * f_max > grid.len() {
        return Err(Error::InvalidParameter(format!(
            "frequency {f_max} unresolvable on a {}-node grid (needs >= {} nodes)",
            grid.len(),
            2 * f_max
        )));
    }
    let n_cols = match parity {
        Parity::Odd => 2 * k_blocks,
        Parity::Even => 2 * k_blocks + 1,
    };
    let mut psi = Array2::zeros((grid.len(), n_cols));
    let mut col = 0;
    if parity == Parity::Even {
        for i in 0..grid.len() {
            psi[(i, 0)] = 1.0;
        }
        col = 1;
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    for k in 1..=k_blocks {
        let freq = match parity {
            Parity::Odd => 2 * k - 1,
            Parity::Even => 2 * k,
        } as f64;
        let om = freq * std::f64::consts::PI;
        for (i, &x) in grid.iter().enumerate() {
            psi[(i, col)] = sqrt2 * (om * x).cos();
            psi[(i, col + 1)] = sqrt2 * (om * x).sin();
        }
        col += 2;
    }
    Ok(psi)
}

/// Projection distances of the snapshots onto the span of the basis columns:
/// per-parameter squared error `e_j = (1/n_x) sum_i (X - (1/n_x) Psi Psi^T X)^2`,
/// returned as `(dist_L2, dist_Linf)` with `dist_Linf = max_j sqrt(e_j)` and
/// `dist_L2 = sqrt(mean_j e_j)`.
pub fn projection_distances(x: &SnapshotMatrix, psi: &Array2<f64>) -> Result<(f64, f64)> {
    if psi.nrows() != x.data.nrows() {
        return Err(Error::InvalidParameter(format!(
            "basis has {} rows but snapshots have {}",
            psi.nrows(),
            x.data.nrows()
        )));
    }
    let n_x = x.data.nrows() as f64;
    let coeffs = psi.t().dot(&x.data); // Psi^T X
    let projected = psi.dot(&coeffs).mapv(|v| v / n_x);
    let residual = &x.data - &projected;
    let mut sum_e = 0.0;
    let mut max_e: f64 = 0.0;
    for j in 0..x.n_mu {
        let col: ArrayView1<f64> = residual.column(j);
        let e = col.iter().map(|v| v * v).sum::<f64>() / n_x;
        sum_e += e;
        max_e = max_e.max(e);
    }
    Ok(((sum_e / x.n_mu as f64).sqrt(), max_e.sqrt()))
}
