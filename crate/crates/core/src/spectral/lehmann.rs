use std::fmt;
use std::str::FromStr;

use nalgebra::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::reduction::LinearFrameMap;
use crate::symmetry::ParticleSystem;

use super::bo::bo_solve_masses;
use super::config::GridModel;
use super::internal::InternalGrid;
use super::twobody::TwoBodyGrid;
use super::SpectralError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Variant {
    Unreduced,
    Reduced,
    Bo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Probe {
    /// First internal coordinate (`z₂ − z₁`; heavy separation for BO models).
    RelPosition,
    /// Position of particle 1; only meaningful without reduction.
    AbsPosition,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Unreduced => "unreduced",
            Variant::Reduced => "reduced",
            Variant::Bo => "bo",
        })
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unreduced" | "full" => Ok(Variant::Unreduced),
            "reduced" => Ok(Variant::Reduced),
            "bo" => Ok(Variant::Bo),
            _ => Err(format!("unknown variant `{s}`")),
        }
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Probe::RelPosition => "rel-position",
            Probe::AbsPosition => "abs-position",
        })
    }
}

impl FromStr for Probe {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rel-position" => Ok(Probe::RelPosition),
            "abs-position" => Ok(Probe::AbsPosition),
            _ => Err(format!("unknown probe `{s}`")),
        }
    }
}

/// One Lehmann pole: excitation energy `E_n − E_0` and `|⟨n|probe|0⟩|²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pole {
    pub omega: f64,
    pub weight: f64,
    /// Total-momentum sector of `|n⟩` for unreduced spectra.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<isize>,
    pub state: usize,
}

impl Pole {
    fn is_elastic(&self) -> bool {
        self.state == 0 && self.sector.unwrap_or(0) == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectralOptions {
    /// Gaussian width; defaults to 1% of the pole span.
    pub eta: Option<f64>,
    /// Upper end of the window; defaults to (and is capped at) the highest pole.
    pub omega_max: Option<f64>,
    /// Number of ω samples.
    pub points: Option<usize>,
    /// States per sector; defaults to the model's solver count.
    pub count: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralFunction {
    pub variant: Variant,
    pub probe: Probe,
    pub eta: f64,
    pub omega: Vec<f64>,
    pub density: Vec<f64>,
    pub poles: Vec<Pole>,
    /// `Σ_n |⟨n|probe|0⟩|²` over the poles inside the window.
    pub total_weight: f64,
    /// Weight of poles above the window.
    pub excluded_weight: f64,
}

impl SpectralFunction {
    pub fn step(&self) -> f64 {
        if self.omega.len() < 2 {
            0.0
        } else {
            (self.omega[self.omega.len() - 1] - self.omega[0]) / (self.omega.len() - 1) as f64
        }
    }

    /// `Σ A(ω_i) Δω`.
    pub fn integrated_weight(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.step()
    }

    /// Strongest inelastic pole.
    pub fn dominant_peak(&self) -> Option<&Pole> {
        self.poles.iter().filter(|p| !p.is_elastic()).max_by(|a, b| a.weight.total_cmp(&b.weight))
    }

    /// Lowest pole of sector `k`.
    pub fn sector_edge(&self, k: isize) -> Option<f64> {
        self.poles.iter().filter(|p| p.sector == Some(k)).map(|p| p.omega).min_by(f64::total_cmp)
    }

    /// Spacing of the center-of-mass satellites, `ω(k=2) − ω(k=1)`.
    pub fn satellite_spacing(&self) -> Option<f64> {
        Some(self.sector_edge(2)? - self.sector_edge(1)?)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("omega,A\n");
        for (w, a) in self.omega.iter().zip(&self.density) {
            s.push_str(&format!("{w:.12e},{a:.12e}\n"));
        }
        s
    }
}

/// Gaussian broadening normalized on the discrete grid, so the sum rule holds
/// sample by sample.
pub fn broaden(
    mut poles: Vec<Pole>,
    variant: Variant,
    probe: Probe,
    opts: &SpectralOptions,
) -> Result<SpectralFunction, SpectralError> {
    poles.retain(|p| p.weight > 0.0);
    poles.sort_by(|a, b| a.omega.total_cmp(&b.omega).then(a.sector.cmp(&b.sector)).then(a.state.cmp(&b.state)));
    let lo_pole = poles.iter().map(|p| p.omega).fold(0.0, f64::min);
    let hi_pole = poles.iter().map(|p| p.omega).fold(0.0, f64::max);
    let span = hi_pole - lo_pole;
    let eta = opts.eta.unwrap_or(if span > 0.0 { 0.01 * span } else { 0.01 });
    if !(eta.is_finite() && eta > 0.0) {
        return Err(SpectralError::InvalidModel(format!("broadening {eta} must be positive")));
    }
    let omega_max = opts.omega_max.map_or(hi_pole, |w| w.min(hi_pole));
    let points = opts.points.unwrap_or(4001).max(2);
    let lo = lo_pole - 6.0 * eta;
    let hi = omega_max + 6.0 * eta;
    let dw = (hi - lo) / (points - 1) as f64;
    let omega: Vec<f64> = (0..points).map(|i| lo + i as f64 * dw).collect();
    let mut density = vec![0.0; points];
    let (inside, outside): (Vec<Pole>, Vec<Pole>) = poles.into_iter().partition(|p| p.omega <= omega_max);
    for p in &inside {
        let g: Vec<f64> = omega.iter().map(|w| (-(w - p.omega).powi(2) / (2.0 * eta * eta)).exp()).collect();
        let norm: f64 = g.iter().sum::<f64>() * dw;
        for (d, gi) in density.iter_mut().zip(&g) {
            *d += p.weight * gi / norm;
        }
    }
    Ok(SpectralFunction {
        variant,
        probe,
        eta,
        omega,
        density,
        total_weight: inside.iter().map(|p| p.weight).sum(),
        excluded_weight: outside.iter().map(|p| p.weight).sum(),
        poles: inside,
    })
}

/// Lehmann poles for the requested variant and probe.
pub fn poles(model: &GridModel, variant: Variant, probe: Probe, count: usize) -> Result<Vec<Pole>, SpectralError> {
    let incompatible = || SpectralError::ProbeIncompatible { probe: probe.to_string(), variant: variant.to_string() };
    match (model.particles(), variant, probe) {
        (_, Variant::Reduced | Variant::Bo, Probe::AbsPosition) => Err(incompatible()),
        (2, Variant::Bo, _) => Err(SpectralError::InvalidModel("Born-Oppenheimer variant needs 3 particles".into())),
        (3, Variant::Unreduced, _) => Err(SpectralError::InvalidModel("unreduced spectra need 2 particles".into())),
        (2, Variant::Reduced, Probe::RelPosition) => {
            let grid = TwoBodyGrid::from_model(model)?;
            let (vals, vecs) = grid.reduced_eigen();
            let x = relative_probe(&grid);
            Ok((0..count.min(vals.len()))
                .map(|n| {
                    let amp: f64 = (0..grid.points()).map(|c| vecs[(c, n)] * x[c] * vecs[(c, 0)]).sum();
                    Pole { omega: vals[n] - vals[0], weight: amp * amp, sector: None, state: n }
                })
                .collect())
        }
        (2, Variant::Unreduced, _) => unreduced_poles(&TwoBodyGrid::from_model(model)?, probe, count),
        (3, Variant::Reduced, Probe::RelPosition) => {
            let system = ParticleSystem::new(1, model.masses.clone()).map_err(|e| SpectralError::InvalidModel(e.to_string()))?;
            let grid = InternalGrid::new(model, &LinearFrameMap::jacobi(&system))?;
            let res = grid.lowest(count, model.tol)?;
            Ok(axis0_poles(&grid, &res.values, |n, i0, i1| res.vectors[n][i0 + grid.shape()[0] * i1]))
        }
        (3, Variant::Bo, Probe::RelPosition) => {
            let res = bo_solve_masses(model, false)?;
            let s = centered_probe(&res.separations);
            Ok((0..res.nuclear_levels.len().min(count))
                .map(|n| {
                    let amp: f64 = (0..s.len()).map(|i| res.nuclear_states[(i, n)] * s[i] * res.nuclear_states[(i, 0)]).sum();
                    Pole { omega: res.nuclear_levels[n] - res.nuclear_levels[0], weight: amp * amp, sector: None, state: n }
                })
                .collect())
        }
        _ => Err(incompatible()),
    }
}

fn axis0_poles(grid: &InternalGrid, values: &[f64], psi: impl Fn(usize, usize, usize) -> f64) -> Vec<Pole> {
    let [n0, n1] = grid.shape();
    let x = centered_probe(&(0..n0).map(|i| grid.coordinate(0, i)).collect::<Vec<_>>());
    (0..values.len())
        .map(|n| {
            let mut amp = 0.0;
            for i1 in 0..n1 {
                for i0 in 0..n0 {
                    amp += psi(n, i0, i1) * x[i0] * psi(0, i0, i1);
                }
            }
            Pole { omega: values[n] - values[0], weight: amp * amp, sector: None, state: n }
        })
        .collect()
}

/// Relative position at each minimum-image index. The point `r = ±L/2` is
/// its own mirror image, so the probe takes the mean of both images (zero)
/// there and stays exactly odd.
fn relative_probe(grid: &TwoBodyGrid) -> Vec<f64> {
    let n = grid.points();
    let mut x: Vec<f64> = (0..n).map(|c| grid.relative_coordinate(c)).collect();
    if n.is_multiple_of(2) {
        x[n / 2] = 0.0;
    }
    x
}

/// Same convention for an axis sampled at `(i − n/2)·h`, where index 0 is
/// the edge point.
fn centered_probe(coords: &[f64]) -> Vec<f64> {
    let mut x = coords.to_vec();
    if x.len().is_multiple_of(2) {
        x[0] = 0.0;
    }
    x
}

/// Poles from the momentum-sector eigenstates. Relative probes conserve
/// total momentum; `x₁` connects the ground state to sector `K` with
/// amplitude `X̃(K)·⟨φ_n^K|φ_0⟩`, `X̃(K) = (1/N) Σ_c e^{−iKhc} x(c)`.
pub fn unreduced_poles(grid: &TwoBodyGrid, probe: Probe, count: usize) -> Result<Vec<Pole>, SpectralError> {
    let n = grid.points();
    let ground = grid.sector_eigen(0)?;
    let e0 = ground.values[0];
    let phi0 = ground.vectors.column(0).into_owned();
    match probe {
        Probe::RelPosition => {
            let x = relative_probe(grid);
            Ok((0..count.min(n))
                .map(|s| {
                    let amp: Complex<f64> = (0..n).map(|c| ground.vectors[(c, s)].conj() * x[c] * phi0[c]).sum();
                    Pole { omega: ground.values[s] - e0, weight: amp.norm_sqr(), sector: Some(0), state: s }
                })
                .collect())
        }
        Probe::AbsPosition => {
            let h = grid.spacing();
            let x: Vec<f64> = (0..n).map(|c| (c as f64 - (n / 2) as f64) * h).collect();
            let sectors: Vec<isize> = grid.sectors().collect();
            let per_sector: Vec<Result<Vec<Pole>, SpectralError>> = sectors
                .par_iter()
                .map(|&k| {
                    let eig = grid.sector_eigen(k)?;
                    let xk: Complex<f64> = (0..n)
                        .map(|c| {
                            let turns = (k * c as isize).rem_euclid(n as isize) as f64 / n as f64;
                            Complex::from_polar(x[c], -2.0 * std::f64::consts::PI * turns)
                        })
                        .sum::<Complex<f64>>()
                        / n as f64;
                    Ok((0..count.min(n))
                        .map(|s| {
                            let overlap: Complex<f64> = (0..n).map(|c| eig.vectors[(c, s)].conj() * phi0[c]).sum();
                            Pole {
                                omega: eig.values[s] - e0,
                                weight: xk.norm_sqr() * overlap.norm_sqr(),
                                sector: Some(k),
                                state: s,
                            }
                        })
                        .collect())
                })
                .collect();
            let mut out = Vec::new();
            for p in per_sector {
                out.extend(p?);
            }
            Ok(out)
        }
    }
}

pub fn spectral_function(
    model: &GridModel,
    variant: Variant,
    probe: Probe,
    opts: &SpectralOptions,
) -> Result<SpectralFunction, SpectralError> {
    let count = opts.count.unwrap_or(model.count);
    broaden(poles(model, variant, probe, count)?, variant, probe, opts)
}
