use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use super::config::{GridModel, PairPotential};
use super::kernels::{KineticScheme, Kernels};
use super::SpectralError;

/// Two particles on a periodic line, block-diagonal in total quasi-momentum.
///
/// The sector basis is `|r;K⟩ = N^{-1/2} Σ_c e^{iKhc} |c, c+r⟩` with
/// `K = 2πk/L`, `k ∈ [−N/2, N/2)`; the relative index `r` runs over the
/// grid with minimum-image coordinate.
#[derive(Clone, Debug)]
pub struct TwoBodyGrid {
    m1: f64,
    m2: f64,
    l: f64,
    n: usize,
    kernels: Kernels,
    /// Pair potential at each relative index.
    v: Vec<f64>,
}

/// Sorted eigenpairs of one Hermitian block.
#[derive(Clone, Debug)]
pub struct SectorEigen {
    pub k: isize,
    pub values: Vec<f64>,
    /// Columns are eigenvectors over the relative index.
    pub vectors: DMatrix<Complex<f64>>,
}

impl TwoBodyGrid {
    /// Any `n ≥ 2`; model-level validation (`Npts ≥ 64`, power of two) is
    /// enforced by [`GridModel`].
    pub fn new(m1: f64, m2: f64, l: f64, n: usize, potential: impl Fn(f64) -> f64, scheme: KineticScheme) -> Self {
        let h = l / n as f64;
        let mut grid = TwoBodyGrid { m1, m2, l, n, kernels: Kernels::new(n, h, scheme), v: vec![] };
        grid.v = (0..n).map(|c| potential(grid.relative_coordinate(c))).collect();
        grid
    }

    pub fn from_model(model: &GridModel) -> Result<Self, SpectralError> {
        if model.particles() != 2 {
            return Err(SpectralError::InvalidModel(format!(
                "two-particle grid needs 2 particles, got {}",
                model.particles()
            )));
        }
        let m = model.masses_f64();
        let pairs: Vec<PairPotential> = model.pairs.iter().map(|p| p.potential).collect();
        Ok(TwoBodyGrid::new(
            m[0],
            m[1],
            model.box_.l,
            model.box_.npts,
            move |r| pairs.iter().map(|p| p.eval(r)).sum(),
            model.kinetic,
        ))
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.l
    }

    pub fn spacing(&self) -> f64 {
        self.l / self.n as f64
    }

    pub fn total_mass(&self) -> f64 {
        self.m1 + self.m2
    }

    pub fn reduced_mass(&self) -> f64 {
        self.m1 * self.m2 / (self.m1 + self.m2)
    }

    /// Minimum-image separation for relative index `c`.
    pub fn relative_coordinate(&self, c: usize) -> f64 {
        let h = self.spacing();
        if c < self.n.div_ceil(2) {
            c as f64 * h
        } else {
            (c as f64 - self.n as f64) * h
        }
    }

    pub fn potential(&self) -> &[f64] {
        &self.v
    }

    /// Potential at the largest separation the box allows; states below it
    /// cannot spread over the box.
    pub fn continuum_threshold(&self) -> f64 {
        self.v[self.n / 2]
    }

    pub fn sectors(&self) -> impl Iterator<Item = isize> {
        let half = (self.n / 2) as isize;
        -half..(self.n as isize - half)
    }

    pub fn check_sector(&self, k: isize) -> Result<(), SpectralError> {
        let half = (self.n / 2) as isize;
        if k < -half || k >= self.n as isize - half {
            return Err(SpectralError::SectorOutOfRange { k, points: self.n });
        }
        Ok(())
    }

    pub fn sector_momentum(&self, k: isize) -> f64 {
        2.0 * PI * k as f64 / self.l
    }

    fn hop(&self, mass: f64, delta: isize) -> f64 {
        -self.kernels.d2_at(delta) / (2.0 * mass)
    }

    /// `H_K[r', r] = δ V(r) + t₁(r'−r) e^{iKh(r'−r)} + t₂(r−r')`, upper
    /// triangle filled and mirrored so the block is Hermitian by construction.
    pub fn sector_block(&self, k: isize) -> Result<DMatrix<Complex<f64>>, SpectralError> {
        self.check_sector(k)?;
        let n = self.n;
        let mut h = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
        for i in 0..n {
            h[(i, i)] = Complex::new(self.v[i] + self.hop(self.m1, 0) + self.hop(self.m2, 0), 0.0);
            for j in i + 1..n {
                let d = i as isize - j as isize;
                let turns = (k * d).rem_euclid(n as isize) as f64 / n as f64;
                let phase = Complex::from_polar(1.0, 2.0 * PI * turns);
                let z = phase * self.hop(self.m1, d) + Complex::new(self.hop(self.m2, -d), 0.0);
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        Ok(h)
    }

    pub fn sector_eigen(&self, k: isize) -> Result<SectorEigen, SpectralError> {
        let eig = SymmetricEigen::new(self.sector_block(k)?);
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.n, self.n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(SectorEigen { k, values, vectors })
    }

    /// The zero-momentum block, real symmetric: the relative-coordinate
    /// Hamiltonian `−D²/(2μ) + V`.
    pub fn reduced_block(&self) -> DMatrix<f64> {
        let mu = self.reduced_mass();
        DMatrix::from_fn(self.n, self.n, |i, j| {
            let d = j as isize - i as isize;
            let diag = if i == j { self.v[i] } else { 0.0 };
            diag + self.hop(mu, d)
        })
    }

    /// Ascending eigenvalues and eigenvectors (columns) of the relative problem.
    pub fn reduced_eigen(&self) -> (Vec<f64>, DMatrix<f64>) {
        let eig = SymmetricEigen::new(self.reduced_block());
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.n, self.n, |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    /// Full two-particle Hamiltonian on `|c₁, c₂⟩` (index `c₁·N + c₂`), for
    /// cross-checks on small grids.
    pub fn unsectored_matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n * n, n * n, |row, col| {
            let (a1, a2) = (row / n, row % n);
            let (b1, b2) = (col / n, col % n);
            let mut x = 0.0;
            if a2 == b2 {
                x += self.hop(self.m1, b1 as isize - a1 as isize);
            }
            if a1 == b1 {
                x += self.hop(self.m2, b2 as isize - a2 as isize);
            }
            if row == col {
                x += self.v[(a2 + n - a1) % n];
            }
            x
        })
    }
}

/// Indices of eigenvalues strictly below the continuum threshold.
pub fn bound_states(grid: &TwoBodyGrid, eigenvalues: &[f64]) -> Vec<usize> {
    let threshold = grid.continuum_threshold();
    eigenvalues.iter().enumerate().filter(|(_, e)| **e < threshold).map(|(i, _)| i).collect()
}

/// Probability of eigenvector column `col` inside `|r| < radius`.
pub fn weight_within(grid: &TwoBodyGrid, vectors: &DMatrix<f64>, col: usize, radius: f64) -> f64 {
    (0..grid.points())
        .filter(|&c| grid.relative_coordinate(c).abs() < radius)
        .map(|c| vectors[(c, col)].powi(2))
        .sum()
}

/// Real column as a vector; convenience for probes.
pub fn column(m: &DMatrix<f64>, c: usize) -> DVector<f64> {
    m.column(c).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(n: usize, l: f64) -> TwoBodyGrid {
        TwoBodyGrid::new(1.0, 1.0, l, n, |r| 0.5 * r * r, KineticScheme::Spectral)
    }

    #[test]
    fn blocks_are_exactly_hermitian() {
        let g = TwoBodyGrid::new(1.0, 2.5, 10.0, 16, |r| -1.0 / (r * r + 1.0).sqrt(), KineticScheme::Spectral);
        for k in g.sectors() {
            let b = g.sector_block(k).unwrap();
            assert_eq!(b, b.adjoint());
        }
    }

    #[test]
    fn zero_sector_is_the_relative_problem() {
        let g = TwoBodyGrid::new(1.0, 3.0, 12.0, 32, |r| 0.25 * r * r, KineticScheme::Spectral);
        let b = g.sector_block(0).unwrap();
        let r = g.reduced_block();
        for i in 0..32 {
            for j in 0..32 {
                assert!((b[(i, j)].re - r[(i, j)]).abs() < 1e-12);
                assert_eq!(b[(i, j)].im, 0.0);
            }
        }
    }

    #[test]
    fn sector_range() {
        let g = harmonic(16, 10.0);
        assert!(g.sector_block(-8).is_ok());
        assert!(g.sector_block(7).is_ok());
        assert!(matches!(g.sector_block(8), Err(SpectralError::SectorOutOfRange { .. })));
    }

    #[test]
    fn oscillator_ladder() {
        let g = harmonic(128, 20.0);
        let (e, _) = g.reduced_eigen();
        let omega = 2f64.sqrt();
        for n in 0..4 {
            assert!((e[n] - omega * (n as f64 + 0.5)).abs() < 1e-10, "{n}: {}", e[n]);
        }
    }
}
