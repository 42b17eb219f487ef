//! Grid spectra, normal modes, Born-Oppenheimer surfaces and Lehmann
//! spectral functions for few particles on a line.

pub mod bo;
pub mod config;
pub mod davidson;
pub mod harmonic;
pub mod internal;
pub mod kernels;
pub mod lehmann;
pub mod scaling;
pub mod twobody;

use serde::Serialize;
use thiserror::Error;

use crate::reduction::LinearFrameMap;
use crate::symmetry::ParticleSystem;

pub use bo::{bo_solve, BoResult};
pub use config::{GridDoc, GridModel, PairPotential, Role};
pub use harmonic::{normal_modes, remove_acoustic_modes, HarmonicModel, NormalModes};
pub use kernels::KineticScheme;
pub use lehmann::{spectral_function, Probe, SpectralFunction, SpectralOptions, Variant};
pub use scaling::{cm_ladder_scaling, ScalingResult};

use config::GridDoc as ModelEcho;
use internal::InternalGrid;
use twobody::TwoBodyGrid;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("sector {k} is outside [-{half}, {half}) for Npts = {points}", half = points / 2)]
    SectorOutOfRange { k: isize, points: usize },
    #[error("force constants are not positive semidefinite (omega^2 = {eigenvalue:e})")]
    UnstableModel { eigenvalue: f64 },
    #[error("{what} did not converge in {iterations} iterations")]
    Unconverged { what: String, iterations: usize },
    #[error("electronic residual {residual:e} exceeds the limit")]
    ElectronicResidual { residual: f64 },
    #[error("degenerate fit: {0}")]
    FitDegenerate(String),
    #[error("probe {probe} is not defined for the {variant} variant")]
    ProbeIncompatible { probe: String, variant: String },
}

impl SpectralError {
    /// True for errors caused by the input rather than the numerics.
    pub fn is_model_error(&self) -> bool {
        matches!(
            self,
            SpectralError::InvalidModel(_)
                | SpectralError::SectorOutOfRange { .. }
                | SpectralError::UnstableModel { .. }
                | SpectralError::ProbeIncompatible { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum SectorLabel {
    /// Total quasi-momentum `2πk/L`.
    Momentum { k: isize, momentum: f64 },
    Reduced,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Real eigenvectors on the grid, only filled on request.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub sector: SectorLabel,
    /// Eigen residuals for iterative solves; empty for dense ones.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<f64>,
    pub method: &'static str,
    pub model: ModelEcho,
}

/// Lowest `count` levels of the two-particle Hamiltonian in sector `k`.
pub fn full_grid_spectrum(model: &GridModel, k: isize, count: usize) -> Result<SpectrumResult, SpectralError> {
    let grid = TwoBodyGrid::from_model(model)?;
    let eig = grid.sector_eigen(k)?;
    Ok(SpectrumResult {
        eigenvalues: eig.values.into_iter().take(count).collect(),
        eigenvectors: None,
        sector: SectorLabel::Momentum { k, momentum: grid.sector_momentum(k) },
        residuals: vec![],
        method: "dense-sector",
        model: model.to_doc(),
    })
}

/// Lowest `count` levels of the internal Hamiltonian; three-particle models
/// use Jacobi coordinates.
pub fn reduced_grid_spectrum(model: &GridModel, count: usize) -> Result<SpectrumResult, SpectralError> {
    match model.particles() {
        2 => {
            let grid = TwoBodyGrid::from_model(model)?;
            let (values, vectors) = grid.reduced_eigen();
            let keep = count.min(values.len());
            Ok(SpectrumResult {
                eigenvalues: values[..keep].to_vec(),
                eigenvectors: Some((0..keep).map(|c| vectors.column(c).iter().copied().collect()).collect()),
                sector: SectorLabel::Reduced,
                residuals: vec![],
                method: "dense-relative",
                model: model.to_doc(),
            })
        }
        _ => {
            let system = ParticleSystem::new(1, model.masses.clone()).map_err(|e| SpectralError::InvalidModel(e.to_string()))?;
            reduced_grid_spectrum_with_map(model, &LinearFrameMap::jacobi(&system), count)
        }
    }
}

/// Three-particle internal spectrum in the internal coordinates of `map`.
pub fn reduced_grid_spectrum_with_map(
    model: &GridModel,
    map: &LinearFrameMap,
    count: usize,
) -> Result<SpectrumResult, SpectralError> {
    let grid = InternalGrid::new(model, map)?;
    let res = grid.lowest(count, model.tol)?;
    Ok(SpectrumResult {
        eigenvalues: res.values,
        eigenvectors: Some(res.vectors.iter().map(|v| v.iter().copied().collect()).collect()),
        sector: SectorLabel::Reduced,
        residuals: res.residuals,
        method: "davidson-internal",
        model: model.to_doc(),
    })
}

impl SpectrumResult {
    /// `E_n − E_0` for `n ≥ 1`.
    pub fn gaps(&self) -> Vec<f64> {
        self.eigenvalues.iter().skip(1).map(|e| e - self.eigenvalues[0]).collect()
    }

    pub fn without_vectors(mut self) -> Self {
        self.eigenvectors = None;
        self
    }
}
