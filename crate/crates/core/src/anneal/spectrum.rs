use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TransverseFieldOperator;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    /// Largest qubit count solved by full dense diagonalization.
    pub dense_max_qubits: usize,
    /// Residual tolerance for Lanczos Ritz pairs.
    pub tol: f64,
    /// Krylov basis size before an explicit restart.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            dense_max_qubits: 8,
            tol: 1e-10,
            krylov_dim: 80,
            max_restarts: 200,
            seed: 0x5eed,
        }
    }
}

/// The `k` smallest eigenvalues of `op`, ascending.
pub fn low_spectrum(
    op: &TransverseFieldOperator<'_>,
    k: usize,
    opts: &SpectrumOptions,
) -> Result<Vec<f64>> {
    if k < 1 {
        return Err(invalid("need at least one eigenvalue"));
    }
    let k = k.min(op.dim());
    let t = op.transverse();
    if t == 0.0 {
        let mut d: Vec<f64> = (0..op.dim()).map(|x| op.diagonal(x)).collect();
        d.sort_by(f64::total_cmp);
        d.truncate(k);
        return Ok(d);
    }
    if op.s() == 0.0 {
        return Ok(transverse_ladder(op.n(), t, k));
    }
    if op.n() <= opts.dense_max_qubits {
        let mut ev: Vec<f64> = op
            .to_dense()?
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev.truncate(k);
        return Ok(ev);
    }
    lanczos_lowest(op, k, opts)
}

/// Eigenvalues t·(2j − n) of t·Σσx with multiplicity C(n, j).
fn transverse_ladder(n: usize, t: f64, k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k);
    let mut binom = 1usize;
    for j in 0..=n {
        let level = t * (2.0 * j as f64 - n as f64);
        out.extend(std::iter::repeat_n(level, binom.min(k - out.len())));
        if out.len() == k {
            break;
        }
        binom = binom * (n - j) / (j + 1);
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    // Two passes keep the basis orthogonal to machine precision.
    for _ in 0..2 {
        for u in basis {
            let c = dot(w, u);
            axpy(-c, u, w);
        }
    }
}

/// Lowest `k` eigenvalues by Lanczos with full reorthogonalization, locking
/// each converged vector and deflating it from later runs.
fn lanczos_lowest(
    op: &TransverseFieldOperator<'_>,
    k: usize,
    opts: &SpectrumOptions,
) -> Result<Vec<f64>> {
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..k {
        let start: Vec<f64> = (0..op.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (val, vec) = lanczos_one(op, &locked, start, opts)?;
        values.push(val);
        locked.push(vec);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn lanczos_one(
    op: &TransverseFieldOperator<'_>,
    locked: &[Vec<f64>],
    mut start: Vec<f64>,
    opts: &SpectrumOptions,
) -> Result<(f64, Vec<f64>)> {
    let dim = op.dim();
    let free = dim - locked.len();
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_restarts {
        orthogonalize(&mut start, locked);
        if normalize(&mut start) == 0.0 {
            return Err(invalid("lanczos start vector vanished"));
        }
        let mut basis: Vec<Vec<f64>> = vec![start];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        loop {
            let j = basis.len() - 1;
            op.apply(&basis[j], &mut w);
            let alpha = dot(&w, &basis[j]);
            axpy(-alpha, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            orthogonalize(&mut w, locked);
            orthogonalize(&mut w, &basis);
            alphas.push(alpha);
            let beta = dot(&w, &w).sqrt();

            let m = alphas.len();
            let exhausted = beta < 1e-13 || m == free;
            let full = m >= opts.krylov_dim;
            if exhausted || full || m.is_multiple_of(4) {
                let (theta, y) = lowest_ritz(&alphas, &betas);
                residual = beta * y[m - 1].abs();
                if exhausted || residual < opts.tol * theta.abs().max(1.0) || full {
                    let mut v = vec![0.0; dim];
                    for (yi, b) in y.iter().zip(&basis) {
                        axpy(*yi, b, &mut v);
                    }
                    normalize(&mut v);
                    if exhausted || residual < opts.tol * theta.abs().max(1.0) {
                        return Ok((theta, v));
                    }
                    start = v;
                    break;
                }
            }
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }
    }
    Err(Error::NoConvergence { residual })
}

fn lowest_ritz(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (
        theta,
        eig.eigenvectors.column(idx).iter().copied().collect(),
    )
}
