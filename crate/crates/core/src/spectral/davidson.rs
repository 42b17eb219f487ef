use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SpectralError;

/// Real symmetric operator applied matrix-free.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &DVector<f64>) -> DVector<f64>;
    /// Approximate `(A − θ)⁻¹ r`.
    fn precondition(&self, r: &DVector<f64>, theta: f64) -> DVector<f64>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct DavidsonOptions {
    pub count: usize,
    /// Residual 2-norm required for every requested pair.
    pub tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl DavidsonOptions {
    pub fn new(count: usize, tol: f64) -> Self {
        DavidsonOptions { count, tol, max_iterations: 400, seed: 0x5eed }
    }
}

#[derive(Clone, Debug)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<DVector<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Block Davidson iteration for the lowest `count` eigenpairs, started from
/// `guesses` (padded with seeded random vectors when too few are given).
pub fn davidson<A: SymmetricOperator>(
    op: &A,
    guesses: Vec<DVector<f64>>,
    opts: &DavidsonOptions,
) -> Result<Eigenpairs, SpectralError> {
    let n = op.dim();
    let count = opts.count.min(n);
    let block = (count + 4).min(n);
    let max_basis = (8 * block).max(48).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut images: Vec<DVector<f64>> = Vec::new();
    let mut pending = guesses;
    while pending.len() < block {
        pending.push(DVector::from_fn(n, |_, _| rng.gen::<f64>() - 0.5));
    }
    extend_basis(op, &mut basis, &mut images, pending);

    for iteration in 1..=opts.max_iterations {
        let k = basis.len();
        let projected = DMatrix::from_fn(k, k, |i, j| 0.5 * (basis[i].dot(&images[j]) + basis[j].dot(&images[i])));
        let eig = SymmetricEigen::new(projected);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let wanted = block.min(k);
        let mut ritz = Vec::with_capacity(wanted);
        for &c in order.iter().take(wanted) {
            let y = eig.eigenvectors.column(c);
            let mut x = DVector::zeros(n);
            let mut ax = DVector::zeros(n);
            for j in 0..k {
                x.axpy(y[j], &basis[j], 1.0);
                ax.axpy(y[j], &images[j], 1.0);
            }
            let theta = eig.eigenvalues[c];
            let r = &ax - &x * theta;
            ritz.push((theta, x, ax, r));
        }
        let residuals: Vec<f64> = ritz.iter().map(|(_, _, _, r)| r.norm()).collect();
        if ritz.len() >= count && residuals[..count].iter().all(|r| *r <= opts.tol) {
            return Ok(Eigenpairs {
                values: ritz[..count].iter().map(|t| t.0).collect(),
                vectors: ritz[..count].iter().map(|t| t.1.clone()).collect(),
                residuals: residuals[..count].to_vec(),
                iterations: iteration,
            });
        }
        let corrections: Vec<DVector<f64>> = ritz
            .iter()
            .zip(&residuals)
            .filter(|(_, r)| **r > opts.tol)
            .map(|((theta, x, _, r), _)| olsen_correction(op, x, r, *theta))
            .collect();
        if basis.len() + corrections.len() > max_basis {
            let keep = block.min(ritz.len());
            basis = ritz[..keep].iter().map(|t| t.1.clone()).collect();
            images = ritz[..keep].iter().map(|t| t.2.clone()).collect();
            reorthonormalize(&mut basis, &mut images);
        }
        let before = basis.len();
        extend_basis(op, &mut basis, &mut images, corrections);
        if basis.len() == before {
            // Stagnation: inject a fresh random direction.
            let v = DVector::from_fn(n, |_, _| rng.gen::<f64>() - 0.5);
            extend_basis(op, &mut basis, &mut images, vec![v]);
            if basis.len() == before {
                break;
            }
        }
    }
    Err(SpectralError::Unconverged { what: "Davidson eigensolver".into(), iterations: opts.max_iterations })
}

/// `M⁻¹r − ε M⁻¹x` with `ε` chosen so the correction is orthogonal to `x`
/// in the preconditioned sense; stays useful when `M` is nearly exact.
fn olsen_correction<A: SymmetricOperator>(op: &A, x: &DVector<f64>, r: &DVector<f64>, theta: f64) -> DVector<f64> {
    let t = op.precondition(r, theta);
    let u = op.precondition(x, theta);
    let denom = x.dot(&u);
    if denom.abs() < f64::MIN_POSITIVE || !denom.is_finite() {
        return t;
    }
    let eps = x.dot(&t) / denom;
    t - u * eps
}

/// Orthogonalizes candidates against the basis (two Gram-Schmidt passes) and
/// appends those that keep a meaningful norm.
fn extend_basis<A: SymmetricOperator>(
    op: &A,
    basis: &mut Vec<DVector<f64>>,
    images: &mut Vec<DVector<f64>>,
    candidates: Vec<DVector<f64>>,
) {
    for mut v in candidates {
        let norm0 = v.norm();
        if norm0 == 0.0 || !norm0.is_finite() {
            continue;
        }
        v /= norm0;
        for _ in 0..2 {
            for b in basis.iter() {
                let c = b.dot(&v);
                v.axpy(-c, b, 1.0);
            }
        }
        let norm = v.norm();
        if norm < 1e-10 {
            continue;
        }
        v /= norm;
        images.push(op.apply(&v));
        basis.push(v);
    }
}

fn reorthonormalize(basis: &mut [DVector<f64>], images: &mut [DVector<f64>]) {
    for i in 0..basis.len() {
        for j in 0..i {
            let c = basis[j].dot(&basis[i]);
            let (bj, ij) = (basis[j].clone(), images[j].clone());
            basis[i].axpy(-c, &bj, 1.0);
            images[i].axpy(-c, &ij, 1.0);
        }
        let norm = basis[i].norm();
        basis[i] /= norm;
        images[i] /= norm;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dense(DMatrix<f64>);

    impl SymmetricOperator for Dense {
        fn dim(&self) -> usize {
            self.0.nrows()
        }
        fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
            &self.0 * x
        }
        fn precondition(&self, r: &DVector<f64>, theta: f64) -> DVector<f64> {
            DVector::from_fn(r.len(), |i, _| {
                let d = self.0[(i, i)] - theta;
                r[i] / if d.abs() < 1e-8 { 1e-8 } else { d }
            })
        }
    }

    #[test]
    fn matches_dense_eigenvalues() {
        let n = 200;
        let a = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                i as f64 + 1.0
            } else {
                0.3 / (1.0 + (i as f64 - j as f64).abs())
            }
        });
        let mut exact: Vec<f64> = SymmetricEigen::new(a.clone()).eigenvalues.iter().copied().collect();
        exact.sort_by(f64::total_cmp);
        let res = davidson(&Dense(a), vec![], &DavidsonOptions::new(5, 1e-10)).unwrap();
        for (got, want) in res.values.iter().zip(&exact) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        assert!(res.residuals.iter().all(|r| *r <= 1e-10));
    }

    #[test]
    fn deterministic() {
        let n = 60;
        let a = DMatrix::from_fn(n, n, |i, j| if i == j { (i * i) as f64 } else { 0.1 });
        let x = davidson(&Dense(a.clone()), vec![], &DavidsonOptions::new(3, 1e-9)).unwrap();
        let y = davidson(&Dense(a), vec![], &DavidsonOptions::new(3, 1e-9)).unwrap();
        assert_eq!(x.values, y.values);
    }
}
