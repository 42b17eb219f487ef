use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::coeff::rational_to_f64;
use crate::reduction::LinearFrameMap;

use super::config::{AxisBox, GridModel};
use super::davidson::{davidson, DavidsonOptions, Eigenpairs, SymmetricOperator};
use super::kernels::{KineticScheme, Kernels};
use super::SpectralError;

/// Internal Hamiltonian of three particles on a line in the two internal
/// coordinates of a frame map:
/// `H = −½ Σ_ik G_ik ∂_i ∂_k + V`, `G = T M⁻¹ Tᵀ` restricted to internal rows.
///
/// Wavefunctions are `n0 × n1` column-major arrays; axis `a` samples
/// `x = (i − n_a/2)·h_a`.
pub struct InternalGrid {
    n: [usize; 2],
    h: [f64; 2],
    g: [[f64; 2]; 2],
    v: DMatrix<f64>,
    d2: [DMatrix<f64>; 2],
    d1: [DMatrix<f64>; 2],
    /// Per axis-0 point: eigen-decomposition of the axis-1 operator
    /// `−½G₁₁D₁² + V(x₀, ·)`, eigenvector signs aligned between neighbours.
    rows: Vec<(DVector<f64>, DMatrix<f64>)>,
    /// Eigen-decomposition of the single-channel adiabatic Hamiltonian for
    /// the lowest channels.
    channels: Vec<(DVector<f64>, DMatrix<f64>)>,
    /// Eigen-decomposition of the axis-0 kinetic, used for the remaining
    /// channels with their level averaged over axis 0.
    kinetic0: (DVector<f64>, DMatrix<f64>),
}

/// Channels treated exactly by the preconditioner.
const COUPLED_CHANNELS: usize = 8;

/// Internal-coordinate combination giving `z_b − z_a`.
fn separation_weights(map: &LinearFrameMap, a: usize, b: usize) -> [f64; 2] {
    let tinv = map.t_inverse();
    let rows = map.internal_rows();
    let mut w = [0.0; 2];
    for (slot, &i) in rows.iter().enumerate() {
        w[slot] = rational_to_f64(&(&tinv[b][i - 1] - &tinv[a][i - 1]));
    }
    w
}

impl InternalGrid {
    pub fn new(model: &GridModel, map: &LinearFrameMap) -> Result<Self, SpectralError> {
        if model.particles() != 3 || map.n() != 3 {
            return Err(SpectralError::InvalidModel("internal 2D grid needs 3 particles".into()));
        }
        if map.masses() != model.masses.as_slice() {
            return Err(SpectralError::InvalidModel("frame map masses differ from the model".into()));
        }
        let boxes = model.internal_boxes();
        let rows = map.internal_rows();
        let metric = map.kinetic_metric();
        let mut g = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                g[a][b] = rational_to_f64(&metric[rows[a] - 1][rows[b] - 1]);
            }
        }
        let weights: Vec<([f64; 2], usize)> = model
            .pairs
            .iter()
            .enumerate()
            .map(|(k, p)| (separation_weights(map, p.a, p.b), k))
            .collect();
        let potential = |x0: f64, x1: f64| -> f64 {
            weights
                .iter()
                .map(|(w, k)| model.pairs[*k].potential.eval(w[0] * x0 + w[1] * x1))
                .sum()
        };
        Ok(InternalGrid::from_parts(boxes[0], boxes[1], g, potential, model.kinetic))
    }

    /// Grid from an explicit inverse metric and potential.
    pub fn from_parts(
        b0: AxisBox,
        b1: AxisBox,
        g: [[f64; 2]; 2],
        potential: impl Fn(f64, f64) -> f64 + Sync,
        scheme: KineticScheme,
    ) -> Self {
        let n = [b0.npts, b1.npts];
        let h = [b0.h(), b1.h()];
        let k = [Kernels::new(n[0], h[0], scheme), Kernels::new(n[1], h[1], scheme)];
        let coord = |a: usize, i: usize| (i as f64 - (n[a] / 2) as f64) * h[a];
        let v = DMatrix::from_fn(n[0], n[1], |i, j| potential(coord(0, i), coord(1, j)));
        let d2 = [k[0].d2_matrix(), k[1].d2_matrix()];
        let d1 = [k[0].d1_matrix(), k[1].d1_matrix()];
        let t1 = &d2[1] * (-0.5 * g[1][1]);
        let mut rows: Vec<(DVector<f64>, DMatrix<f64>)> = (0..n[0])
            .into_par_iter()
            .map(|i| {
                let mut a = t1.clone();
                for j in 0..n[1] {
                    a[(j, j)] += v[(i, j)];
                }
                sorted_eigen(a)
            })
            .collect();
        for i in 1..n[0] {
            let (prev, cur) = rows.split_at_mut(i);
            let (p, c) = (&prev[i - 1].1, &mut cur[0].1);
            for m in 0..n[1] {
                if c.column(m).dot(&p.column(m)) < 0.0 {
                    c.column_mut(m).neg_mut();
                }
            }
        }
        let t0 = &d2[0] * (-0.5 * g[0][0]);
        let channels = (0..COUPLED_CHANNELS.min(n[1]))
            .into_par_iter()
            .map(|m| {
                sorted_eigen(DMatrix::from_fn(n[0], n[0], |i, j| {
                    let base = if i == j { rows[i].0[m] } else { 0.0 };
                    base + t0[(i, j)] * rows[i].1.column(m).dot(&rows[j].1.column(m))
                }))
            })
            .collect();
        let kinetic0 = sorted_eigen(t0);
        InternalGrid { n, h, g, v, d2, d1, rows, channels, kinetic0 }
    }

    pub fn shape(&self) -> [usize; 2] {
        self.n
    }

    pub fn spacing(&self) -> [f64; 2] {
        self.h
    }

    pub fn metric(&self) -> [[f64; 2]; 2] {
        self.g
    }

    pub fn potential(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        (i as f64 - (self.n[axis] / 2) as f64) * self.h[axis]
    }

    /// Eigenvalues and vectors of the axis-1 operator at axis-0 point `i`.
    pub fn row_eigen(&self, i: usize) -> (&DVector<f64>, &DMatrix<f64>) {
        (&self.rows[i].0, &self.rows[i].1)
    }

    /// Axis-0 kinetic matrix `−½G₀₀D₀²`.
    pub fn axis0_kinetic(&self) -> DMatrix<f64> {
        &self.d2[0] * (-0.5 * self.g[0][0])
    }

    pub fn apply_grid(&self, psi: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = &self.d2[0] * psi * (-0.5 * self.g[0][0]);
        out += psi * &self.d2[1] * (-0.5 * self.g[1][1]);
        if self.g[0][1] != 0.0 {
            out += &self.d1[0] * psi * self.d1[1].transpose() * (-self.g[0][1]);
        }
        out += psi.component_mul(&self.v);
        out
    }

    /// Dense matrix in the column-major flattening; small grids only.
    pub fn assemble_dense(&self) -> DMatrix<f64> {
        let [n0, n1] = self.n;
        let dim = n0 * n1;
        DMatrix::from_fn(dim, dim, |row, col| {
            let (i0, i1) = (row % n0, row / n0);
            let (j0, j1) = (col % n0, col / n0);
            let mut x = 0.0;
            if i1 == j1 {
                x += -0.5 * self.g[0][0] * self.d2[0][(i0, j0)];
            }
            if i0 == j0 {
                x += -0.5 * self.g[1][1] * self.d2[1][(i1, j1)];
            }
            x += -self.g[0][1] * self.d1[0][(i0, j0)] * self.d1[1][(i1, j1)];
            if row == col {
                x += self.v[(i0, i1)];
            }
            x
        })
    }

    /// Adiabatic product guesses `χ_n(x₀)·u_{x₀,m}(x₁)` for the lowest channels.
    pub fn adiabatic_guesses(&self, count: usize) -> Vec<DVector<f64>> {
        let [n0, n1] = self.n;
        let per_channel = (count + 2).min(n0);
        let mut candidates: Vec<(f64, DVector<f64>)> = Vec::new();
        for (m, (vals, vecs)) in self.channels.iter().enumerate().take(3) {
            for k in 0..per_channel {
                let chi = vecs.column(k);
                let psi = DVector::from_fn(n0 * n1, |idx, _| {
                    let (i0, i1) = (idx % n0, idx / n0);
                    chi[i0] * self.rows[i0].1[(i1, m)]
                });
                candidates.push((vals[k], psi));
            }
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
        candidates.into_iter().take(count + 4).map(|c| c.1).collect()
    }

    /// Lowest `count` eigenpairs by Davidson iteration.
    pub fn lowest(&self, count: usize, tol: f64) -> Result<Eigenpairs, SpectralError> {
        davidson(self, self.adiabatic_guesses(count), &DavidsonOptions::new(count, tol))
    }
}

impl SymmetricOperator for InternalGrid {
    fn dim(&self) -> usize {
        self.n[0] * self.n[1]
    }

    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        let psi = DMatrix::from_column_slice(self.n[0], self.n[1], x.as_slice());
        let out = self.apply_grid(&psi);
        DVector::from_column_slice(out.as_slice())
    }

    /// Inverse of the adiabatic Hamiltonian with non-adiabatic couplings
    /// dropped: exact within each of the lowest channels; above them the
    /// channel level is replaced by its mean over axis 0.
    fn precondition(&self, r: &DVector<f64>, theta: f64) -> DVector<f64> {
        let [n0, n1] = self.n;
        let inv = |d: f64| 1.0 / if d.abs() < 1e-8 { 1e-8f64.copysign(d) } else { d };
        let mut c = DMatrix::zeros(n0, n1);
        for i in 0..n0 {
            let row = DVector::from_fn(n1, |j, _| r[i + n0 * j]);
            c.row_mut(i).copy_from(&self.rows[i].1.tr_mul(&row).transpose());
        }
        for (m, (w, q)) in self.channels.iter().enumerate() {
            let mut y = q.tr_mul(&c.column(m));
            for (k, yk) in y.iter_mut().enumerate() {
                *yk *= inv(w[k] - theta);
            }
            c.set_column(m, &(q * y));
        }
        let first = self.channels.len();
        if first < n1 {
            let (tau, q0) = &self.kinetic0;
            let mut y = q0.tr_mul(&c.columns(first, n1 - first));
            for (col, m) in (first..n1).enumerate() {
                let level = (0..n0).map(|i| self.rows[i].0[m]).sum::<f64>() / n0 as f64;
                for k in 0..n0 {
                    y[(k, col)] *= inv(tau[k] + level - theta);
                }
            }
            c.columns_mut(first, n1 - first).copy_from(&(q0 * y));
        }
        let mut out = DVector::zeros(n0 * n1);
        for i in 0..n0 {
            let t = &self.rows[i].1 * c.row(i).transpose();
            for j in 0..n1 {
                out[i + n0 * j] = t[j];
            }
        }
        out
    }
}

/// Eigen-decomposition with ascending eigenvalues.
pub fn sorted_eigen(a: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let eig = SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let vals = DVector::from_fn(n, |i, _| eig.eigenvalues[order[i]]);
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(g01: f64) -> InternalGrid {
        let b = AxisBox { l: 8.0, npts: 12 };
        InternalGrid::from_parts(b, b, [[1.0, g01], [g01, 0.7]], |x, y| 0.5 * x * x + 0.3 * y * y + 0.1 * x * y, KineticScheme::Spectral)
    }

    #[test]
    fn dense_matrix_is_exactly_symmetric_and_matches_apply() {
        let grid = small(0.2);
        let a = grid.assemble_dense();
        assert_eq!(a, a.transpose());
        let x = DVector::from_fn(144, |i, _| ((i * 7919) % 101) as f64 / 101.0 - 0.5);
        let diff = (&a * &x - grid.apply(&x)).amax();
        assert!(diff < 1e-11, "{diff}");
    }

    #[test]
    fn davidson_matches_dense() {
        let grid = small(0.2);
        let (vals, _) = sorted_eigen(grid.assemble_dense());
        let res = grid.lowest(5, 1e-10).unwrap();
        for k in 0..5 {
            assert!((res.values[k] - vals[k]).abs() < 1e-9);
        }
    }
}
