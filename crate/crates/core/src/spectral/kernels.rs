use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Discretization of the kinetic operator on a periodic grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum KineticScheme {
    /// Fourier-collocation derivatives, exact for band-limited functions.
    #[default]
    Spectral,
    /// Second-order central differences.
    FiniteDifference,
}

/// Translation-invariant derivative kernels on an `n`-point periodic grid
/// with spacing `h`: `(Dψ)_i = Σ_Δ k(Δ) ψ_{i+Δ}`, indices mod `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernels {
    pub n: usize,
    pub h: f64,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

impl Kernels {
    pub fn new(n: usize, h: f64, scheme: KineticScheme) -> Self {
        match scheme {
            KineticScheme::Spectral => Kernels { n, h, d1: spectral_d1(n, h), d2: spectral_d2(n, h) },
            KineticScheme::FiniteDifference => {
                let mut d1 = vec![0.0; n];
                let mut d2 = vec![0.0; n];
                d2[0] = -2.0 / (h * h);
                d2[1 % n] += 1.0 / (h * h);
                d2[n - 1] += 1.0 / (h * h);
                if n > 2 {
                    d1[1] = 0.5 / h;
                    d1[n - 1] = -0.5 / h;
                }
                Kernels { n, h, d1, d2 }
            }
        }
    }

    /// Kernel value at signed offset `delta`.
    pub fn d2_at(&self, delta: isize) -> f64 {
        self.d2[delta.rem_euclid(self.n as isize) as usize]
    }

    pub fn d1_at(&self, delta: isize) -> f64 {
        self.d1[delta.rem_euclid(self.n as isize) as usize]
    }

    /// Dense `n×n` second-derivative matrix, `M[i][j] = d2(j − i)`.
    pub fn d2_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.d2_at(j as isize - i as isize))
    }

    pub fn d1_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.d1_at(j as isize - i as isize))
    }
}

fn wavenumber(j: isize, n: usize, h: f64) -> f64 {
    2.0 * PI * j as f64 / (n as f64 * h)
}

/// `(1/n) Σ_j −k_j² cos(k_j Δ h)` over `j ∈ [−n/2, n/2)`, mirrored so the
/// kernel is exactly even.
fn spectral_d2(n: usize, h: f64) -> Vec<f64> {
    let half = (n / 2) as isize;
    let mut out = vec![0.0; n];
    for delta in 0..=n / 2 {
        let mut s = 0.0;
        for j in -half..(n as isize - half) {
            let k = wavenumber(j, n, h);
            s -= k * k * (2.0 * PI * (j * delta as isize) as f64 / n as f64).cos();
        }
        out[delta] = s / n as f64;
        out[(n - delta) % n] = s / n as f64;
    }
    out
}

/// `(2/n) Σ_{j=1}^{n/2−1} k_j sin(k_j Δ h)`; the Nyquist mode is dropped so
/// the kernel is exactly odd.
fn spectral_d1(n: usize, h: f64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for delta in 1..n.div_ceil(2) {
        let mut s = 0.0;
        for j in 1..n.div_ceil(2) {
            let k = wavenumber(j as isize, n, h);
            s += k * (2.0 * PI * (j * delta) as f64 / n as f64).sin();
        }
        out[delta] = 2.0 * s / n as f64;
        out[n - delta] = -2.0 * s / n as f64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn apply(kernel: &[f64], f: &[f64]) -> Vec<f64> {
        let n = f.len();
        (0..n).map(|i| (0..n).map(|d| kernel[d] * f[(i + d) % n]).sum()).collect()
    }

    #[test]
    fn spectral_derivatives_are_exact_on_modes() {
        let (n, l) = (32usize, 7.0);
        let h = l / n as f64;
        let k = Kernels::new(n, h, KineticScheme::Spectral);
        let q = 2.0 * PI * 3.0 / l;
        let f: Vec<f64> = (0..n).map(|i| (q * i as f64 * h).sin()).collect();
        let d1 = apply(&k.d1, &f);
        let d2 = apply(&k.d2, &f);
        for i in 0..n {
            let x = i as f64 * h;
            assert_abs_diff_eq!(d1[i], q * (q * x).cos(), epsilon = 1e-11);
            assert_abs_diff_eq!(d2[i], -q * q * (q * x).sin(), epsilon = 1e-10);
        }
    }

    #[test]
    fn kernels_have_exact_symmetry() {
        for n in [8usize, 64, 65] {
            let k = Kernels::new(n, 0.3, KineticScheme::Spectral);
            for d in 0..n {
                assert_eq!(k.d2[d], k.d2[(n - d) % n]);
                assert_eq!(k.d1[d], -k.d1[(n - d) % n]);
            }
        }
    }

    #[test]
    fn finite_difference_stencil() {
        let k = Kernels::new(16, 0.5, KineticScheme::FiniteDifference);
        assert_eq!(k.d2_at(0), -8.0);
        assert_eq!(k.d2_at(1), 4.0);
        assert_eq!(k.d2_at(-1), 4.0);
        assert_eq!(k.d2_at(2), 0.0);
        assert_eq!(k.d1_at(1), 1.0);
        assert_eq!(k.d1_at(-1), -1.0);
    }
}
