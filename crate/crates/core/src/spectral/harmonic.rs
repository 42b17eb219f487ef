use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::SpectralError;

/// Frequencies with `|ω| <` this are translational (acoustic) zero modes.
pub const ZERO_MODE_THRESHOLD: f64 = 1e-10;
/// Tolerance on force-constant row sums when the sum rule is enforced.
pub const ASR_TOLERANCE: f64 = 1e-12;
/// Dynamical-matrix eigenvalues within this band of zero are set to zero;
/// below `-EIGENVALUE_CLIP` the model is unstable.
pub const EIGENVALUE_CLIP: f64 = 1e-12;

/// One-dimensional chain of masses coupled by a force-constant matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicModel {
    masses: Vec<f64>,
    k: DMatrix<f64>,
    asr_enforced: bool,
}

impl HarmonicModel {
    pub fn new(masses: Vec<f64>, k: DMatrix<f64>, asr_enforced: bool) -> Result<Self, SpectralError> {
        let n = masses.len();
        if n == 0 || masses.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(SpectralError::InvalidModel("masses must be finite and positive".into()));
        }
        if k.nrows() != n || k.ncols() != n {
            return Err(SpectralError::InvalidModel(format!("force constants must be {n}x{n}")));
        }
        if k.iter().any(|x| !x.is_finite()) {
            return Err(SpectralError::InvalidModel("force constants must be finite".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if k[(i, j)] != k[(j, i)] {
                    return Err(SpectralError::InvalidModel(format!("force constants not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        if asr_enforced {
            for i in 0..n {
                let s: f64 = k.row(i).sum();
                if s.abs() > ASR_TOLERANCE {
                    return Err(SpectralError::InvalidModel(format!("row {} sums to {s:e}, sum rule violated", i + 1)));
                }
            }
        }
        Ok(HarmonicModel { masses, k, asr_enforced })
    }

    /// Ring of `n` equal masses with nearest-neighbour springs `c`; the
    /// diagonal optionally carries an extra on-site term that breaks the sum rule.
    pub fn ring(n: usize, mass: f64, c: f64, onsite: f64) -> Result<Self, SpectralError> {
        let mut k = DMatrix::zeros(n, n);
        for i in 0..n {
            let j = (i + 1) % n;
            if i != j {
                k[(i, i)] += c;
                k[(j, j)] += c;
                k[(i, j)] -= c;
                k[(j, i)] -= c;
            }
            k[(i, i)] += onsite;
        }
        HarmonicModel::new(vec![mass; n], k, onsite == 0.0)
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn force_constants(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn asr_enforced(&self) -> bool {
        self.asr_enforced
    }

    /// Largest absolute row sum of the force constants.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.masses.len()).map(|i| self.k.row(i).sum().abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct HarmonicDoc {
    pub masses: Vec<f64>,
    #[serde(rename = "K")]
    pub k: Vec<Vec<f64>>,
    #[serde(default)]
    pub asr_enforced: bool,
}

impl HarmonicDoc {
    pub fn into_model(self) -> Result<HarmonicModel, SpectralError> {
        let n = self.masses.len();
        if self.k.len() != n || self.k.iter().any(|r| r.len() != n) {
            return Err(SpectralError::InvalidModel(format!("K must be {n}x{n}")));
        }
        let k = DMatrix::from_fn(n, n, |i, j| self.k[i][j]);
        HarmonicModel::new(self.masses, k, self.asr_enforced)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalModes {
    /// Ascending.
    pub frequencies: Vec<f64>,
    /// Mass-weighted eigenvectors, one per frequency.
    pub vectors: Vec<DVector<f64>>,
}

/// Eigen-decomposition of `M^{-1/2} K M^{-1/2}`.
pub fn normal_modes(model: &HarmonicModel) -> Result<NormalModes, SpectralError> {
    let n = model.masses.len();
    let s: Vec<f64> = model.masses.iter().map(|m| 1.0 / m.sqrt()).collect();
    let d = DMatrix::from_fn(n, n, |i, j| s[i] * model.k[(i, j)] * s[j]);
    let eig = SymmetricEigen::new(d);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut frequencies = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for i in order {
        let lambda = eig.eigenvalues[i];
        if lambda < -EIGENVALUE_CLIP {
            return Err(SpectralError::UnstableModel { eigenvalue: lambda });
        }
        let lambda = if lambda.abs() <= EIGENVALUE_CLIP { 0.0 } else { lambda };
        frequencies.push(lambda.sqrt());
        vectors.push(eig.eigenvectors.column(i).into_owned());
    }
    Ok(NormalModes { frequencies, vectors })
}

pub fn is_acoustic(omega: f64) -> bool {
    omega.abs() < ZERO_MODE_THRESHOLD
}

pub fn remove_acoustic_modes(modes: &NormalModes) -> NormalModes {
    let keep: Vec<usize> = (0..modes.frequencies.len()).filter(|&i| !is_acoustic(modes.frequencies[i])).collect();
    NormalModes {
        frequencies: keep.iter().map(|&i| modes.frequencies[i]).collect(),
        vectors: keep.iter().map(|&i| modes.vectors[i].clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diatomic_frequencies() {
        let k = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let modes = normal_modes(&HarmonicModel::new(vec![1.0, 1.0], k, true).unwrap()).unwrap();
        assert_eq!(modes.frequencies[0], 0.0);
        assert_abs_diff_eq!(modes.frequencies[1], 2f64.sqrt(), epsilon = 1e-14);
        let optical = remove_acoustic_modes(&modes);
        assert_eq!(optical.frequencies.len(), 1);
        assert_abs_diff_eq!(optical.frequencies[0], 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn ring_has_one_zero_mode() {
        let modes = normal_modes(&HarmonicModel::ring(8, 1.0, 1.0, 0.0).unwrap()).unwrap();
        assert_eq!(modes.frequencies.iter().filter(|w| is_acoustic(**w)).count(), 1);
        assert_eq!(remove_acoustic_modes(&modes).frequencies.len(), 7);
        // ω_q = 2 sin(πq/8)
        assert_abs_diff_eq!(modes.frequencies[7], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn broken_sum_rule_has_no_zero_mode() {
        let model = HarmonicModel::ring(8, 1.0, 1.0, 0.1).unwrap();
        assert!(!model.asr_enforced());
        let modes = normal_modes(&model).unwrap();
        assert_eq!(modes.frequencies.iter().filter(|w| is_acoustic(**w)).count(), 0);
        assert_abs_diff_eq!(modes.frequencies[0], 0.1f64.sqrt(), epsilon = 1e-12);
        assert_eq!(remove_acoustic_modes(&modes).frequencies.len(), 8);
    }

    #[test]
    fn unstable_and_invalid_models() {
        let k = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        let m = HarmonicModel::new(vec![1.0, 1.0], k, false).unwrap();
        assert!(matches!(normal_modes(&m), Err(SpectralError::UnstableModel { .. })));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -0.5, 1.0]);
        assert!(HarmonicModel::new(vec![1.0, 1.0], asym, false).is_err());
        let off = DMatrix::from_row_slice(2, 2, &[1.0, -0.5, -0.5, 1.0]);
        assert!(HarmonicModel::new(vec![1.0, 1.0], off, true).is_err());
    }
}
