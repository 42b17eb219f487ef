use rayon::prelude::*;
use serde::Serialize;

use super::config::GridModel;
use super::twobody::TwoBodyGrid;
use super::SpectralError;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalingResult {
    pub lengths: Vec<f64>,
    /// `E₀(k=1) − E₀(k=0)`: one step of the center-of-mass ladder.
    pub cm_spacings: Vec<f64>,
    /// `E₁(k=0) − E₀(k=0)`.
    pub internal_gaps: Vec<f64>,
    pub cm_exponent: f64,
    pub internal_exponent: f64,
}

/// Fits `log ΔE` against `log L` for the center-of-mass ladder and the
/// lowest internal gap of a two-particle model.
pub fn cm_ladder_scaling(model: &GridModel, lengths: &[f64]) -> Result<ScalingResult, SpectralError> {
    if lengths.len() < 3 {
        return Err(SpectralError::FitDegenerate(format!("need at least 3 lengths, got {}", lengths.len())));
    }
    let ratio = lengths[1] / lengths[0];
    let geometric = lengths.windows(2).all(|w| ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-9);
    if !geometric || !ratio.is_finite() || ratio <= 0.0 || ratio == 1.0 {
        return Err(SpectralError::FitDegenerate("lengths must form a non-constant geometric progression".into()));
    }
    let per_length: Vec<Result<(f64, f64), SpectralError>> = lengths
        .par_iter()
        .map(|&l| {
            let scaled = model.with_length(l);
            scaled.validate()?;
            let grid = TwoBodyGrid::from_model(&scaled)?;
            let zero = grid.sector_eigen(0)?;
            let one = grid.sector_eigen(1)?;
            Ok((one.values[0] - zero.values[0], zero.values[1] - zero.values[0]))
        })
        .collect();
    let mut cm_spacings = Vec::with_capacity(lengths.len());
    let mut internal_gaps = Vec::with_capacity(lengths.len());
    for r in per_length {
        let (cm, gap) = r?;
        cm_spacings.push(cm);
        internal_gaps.push(gap);
    }
    Ok(ScalingResult {
        cm_exponent: loglog_slope(lengths, &cm_spacings)?,
        internal_exponent: loglog_slope(lengths, &internal_gaps)?,
        lengths: lengths.to_vec(),
        cm_spacings,
        internal_gaps,
    })
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64, SpectralError> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(SpectralError::FitDegenerate("need at least 3 paired samples".into()));
    }
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(SpectralError::FitDegenerate("log-log fit needs positive samples".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(SpectralError::FitDegenerate("abscissae have no spread".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-2.0)).collect();
        assert!((loglog_slope(&x, &y).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_fits() {
        assert!(matches!(loglog_slope(&[1.0], &[1.0]), Err(SpectralError::FitDegenerate(_))));
        assert!(matches!(loglog_slope(&[2.0; 3], &[1.0, 2.0, 3.0]), Err(SpectralError::FitDegenerate(_))));
        assert!(matches!(loglog_slope(&[1.0, 2.0, 4.0], &[1.0, 0.0, 1.0]), Err(SpectralError::FitDegenerate(_))));
    }
}
