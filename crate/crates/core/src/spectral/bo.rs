use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::reduction::LinearFrameMap;
use crate::symmetry::ParticleSystem;

use super::config::{GridModel, PairTerm, Role};
use super::internal::{sorted_eigen, InternalGrid};
use super::SpectralError;

/// Largest accepted residual `‖H_e φ − ε φ‖` of an electronic eigenpair.
pub const ELECTRONIC_RESIDUAL_LIMIT: f64 = 1e-10;

/// A one-light, two-heavy model in Jacobi coordinates
/// `s = z_h2 − z_h1` (axis 0) and `y = z_l − CM(h1, h2)` (axis 1).
pub struct BoSetup {
    pub model: GridModel,
    pub grid: InternalGrid,
    /// Heavy-heavy interaction at each `s` sample.
    pub heavy_potential: Vec<f64>,
}

impl BoSetup {
    pub fn new(model: &GridModel) -> Result<Self, SpectralError> {
        if model.particles() != 3 {
            return Err(SpectralError::InvalidModel("Born-Oppenheimer model needs 3 particles".into()));
        }
        let light: Vec<usize> = (0..3).filter(|&i| model.roles[i] == Some(Role::Light)).collect();
        let heavy: Vec<usize> = (0..3).filter(|&i| model.roles[i] == Some(Role::Heavy)).collect();
        if light.len() != 1 || heavy.len() != 2 {
            return Err(SpectralError::InvalidModel("Born-Oppenheimer model needs one light and two heavy particles".into()));
        }
        let order = [heavy[0], heavy[1], light[0]];
        let slot = |p: usize| order.iter().position(|&q| q == p).expect("every particle is placed");
        let permuted = GridModel {
            masses: order.iter().map(|&p| model.masses[p].clone()).collect(),
            roles: order.iter().map(|&p| model.roles[p]).collect(),
            pairs: model.pairs.iter().map(|t| PairTerm { a: slot(t.a), b: slot(t.b), potential: t.potential }).collect(),
            ..model.clone()
        };
        let system = ParticleSystem::new(1, permuted.masses.clone())
            .map_err(|e| SpectralError::InvalidModel(e.to_string()))?;
        let map = LinearFrameMap::jacobi(&system);
        let grid = InternalGrid::new(&permuted, &map)?;
        let heavy_potential = (0..grid.shape()[0]).map(|i| permuted.pair_energy(0, 1, grid.coordinate(0, i))).collect();
        Ok(BoSetup { model: permuted, grid, heavy_potential })
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoResult {
    pub mass_ratio: f64,
    pub separations: Vec<f64>,
    /// Electronic ground energy at clamped separation.
    pub surface: Vec<f64>,
    pub heavy_potential: Vec<f64>,
    #[serde(skip)]
    pub electronic_states: Vec<DVector<f64>>,
    pub max_electronic_residual: f64,
    pub nuclear_levels: Vec<f64>,
    #[serde(skip)]
    pub nuclear_states: DMatrix<f64>,
    pub exact_levels: Vec<f64>,
    pub exact_residuals: Vec<f64>,
}

impl BoResult {
    pub fn ground_error(&self) -> f64 {
        (self.nuclear_levels[0] - self.exact_levels[0]).abs()
    }

    pub fn relative_ground_error(&self) -> f64 {
        self.ground_error() / self.exact_levels[0].abs()
    }
}

/// Clamped-nuclei electronic problem on every `s` sample, the nuclear
/// problem on the resulting surface, and the exact internal spectrum on the
/// same grid.
pub fn bo_solve(model: &GridModel, mass_ratio: f64) -> Result<BoResult, SpectralError> {
    bo_solve_masses(&model.with_mass_ratio(mass_ratio)?, true)
}

/// Same as [`bo_solve`] with the masses as given; the exact reference is
/// skipped when `exact` is false.
pub fn bo_solve_masses(scaled: &GridModel, exact: bool) -> Result<BoResult, SpectralError> {
    let setup = BoSetup::new(scaled)?;
    let grid = &setup.grid;
    let [n0, _] = grid.shape();
    let g11 = grid.metric()[1][1];
    let d2 = super::kernels::Kernels::new(grid.shape()[1], grid.spacing()[1], scaled.kinetic).d2_matrix();

    let mut surface = Vec::with_capacity(n0);
    let mut electronic_states = Vec::with_capacity(n0);
    let mut adiabatic = Vec::with_capacity(n0);
    let mut max_residual: f64 = 0.0;
    for i in 0..n0 {
        let (vals, vecs) = grid.row_eigen(i);
        let phi = vecs.column(0).into_owned();
        let mut he = &d2 * (-0.5 * g11);
        for j in 0..grid.shape()[1] {
            he[(j, j)] += grid.potential()[(i, j)];
        }
        let residual = (&he * &phi - &phi * vals[0]).norm();
        max_residual = max_residual.max(residual);
        adiabatic.push(vals[0]);
        surface.push(vals[0] - setup.heavy_potential[i]);
        electronic_states.push(phi);
    }
    if max_residual > ELECTRONIC_RESIDUAL_LIMIT {
        return Err(SpectralError::ElectronicResidual { residual: max_residual });
    }

    let mut hn = grid.axis0_kinetic();
    for i in 0..n0 {
        hn[(i, i)] += adiabatic[i];
    }
    let (levels, states) = sorted_eigen(hn);
    let count = scaled.count.min(n0);
    let (exact_levels, exact_residuals) = if exact {
        let res = grid.lowest(scaled.count, scaled.tol)?;
        (res.values, res.residuals)
    } else {
        (vec![], vec![])
    };
    let m = setup.model.masses_f64();
    Ok(BoResult {
        mass_ratio: m[0] / m[2],
        separations: (0..n0).map(|i| grid.coordinate(0, i)).collect(),
        surface,
        heavy_potential: setup.heavy_potential.clone(),
        electronic_states,
        max_electronic_residual: max_residual,
        nuclear_levels: levels.iter().take(count).copied().collect(),
        nuclear_states: states.columns(0, count).into_owned(),
        exact_levels,
        exact_residuals,
    })
}
