use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{dense_eigh, fix_sign, Eigenpairs, LinearOperator};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct DavidsonSettings {
    /// Convergence threshold on every residual norm `‖A x − θ x‖`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Subspace size at which the search space is collapsed onto the current
    /// Ritz vectors. Zero picks `max(8k, 40)`.
    pub max_subspace: usize,
}

impl Default for DavidsonSettings {
    fn default() -> Self {
        DavidsonSettings {
            tolerance: 1e-9,
            max_iterations: 1000,
            max_subspace: 0,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonalizes `v` against `basis` (two Gram-Schmidt passes) and
/// normalizes it. Returns `false` if nothing independent is left.
fn orthonormalize_against(v: &mut [f64], basis: &[Vec<f64>]) -> bool {
    let start = dot(v, v).sqrt();
    if start == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
    let norm = dot(v, v).sqrt();
    if norm < 1e-8 * start || norm < 1e-14 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

/// Davidson iteration with diagonal preconditioning for the `k` lowest
/// eigenpairs of a symmetric operator.
pub fn davidson(op: &dyn LinearOperator, k: usize, settings: &DavidsonSettings) -> Result<Eigenpairs> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("requested {k} eigenpairs of a {n}-dimensional matrix")));
    }
    let diag = op.diagonal();
    let max_sub = if settings.max_subspace == 0 {
        (8 * k).max(40)
    } else {
        settings.max_subspace.max(2 * k)
    }
    .min(n);
    let block = (2 * k).max(k + 2).min(n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]).then(a.cmp(&b)));
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for &i in order.iter().take(block) {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        basis.push(e);
    }
    let mut images: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| {
            let mut y = vec![0.0; n];
            op.apply(b, &mut y);
            y
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = f64::INFINITY;

    for _iter in 0..settings.max_iterations {
        let m = basis.len();
        let mut t = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let v = 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i]));
                t[(i, j)] = v;
                t[(j, i)] = v;
            }
        }
        let small = dense_eigh(&t);
        let n_ritz = k.min(m);
        let mut ritz = Vec::with_capacity(n_ritz);
        let mut residuals = Vec::with_capacity(n_ritz);
        worst = 0.0;
        for r in 0..n_ritz {
            let theta = small.values[r];
            let y = small.vectors.column(r);
            let mut x = vec![0.0; n];
            let mut ax = vec![0.0; n];
            for (c, (b, w)) in basis.iter().zip(&images).enumerate() {
                let yc = y[c];
                for i in 0..n {
                    x[i] += yc * b[i];
                    ax[i] += yc * w[i];
                }
            }
            let res: Vec<f64> = ax.iter().zip(&x).map(|(a, xi)| a - theta * xi).collect();
            worst = worst.max(dot(&res, &res).sqrt());
            ritz.push((theta, x));
            residuals.push(res);
        }
        if worst < settings.tolerance || m == n {
            let mut vectors = DMatrix::zeros(n, k);
            let mut values = Vec::with_capacity(k);
            for (c, (theta, mut x)) in ritz.into_iter().enumerate() {
                fix_sign(&mut x);
                vectors.set_column(c, &nalgebra::DVector::from_vec(x));
                values.push(theta);
            }
            return Ok(Eigenpairs { values, vectors });
        }

        let mut fresh: Vec<Vec<f64>> = Vec::new();
        for (r, res) in residuals.iter().enumerate() {
            if dot(res, res).sqrt() < settings.tolerance {
                continue;
            }
            let theta = ritz[r].0;
            let mut t: Vec<f64> = res
                .iter()
                .zip(&diag)
                .map(|(ri, di)| {
                    let d = theta - di;
                    let d = if d.abs() < 1e-8 { 1e-8_f64.copysign(d) } else { d };
                    ri / d
                })
                .collect();
            let all: Vec<Vec<f64>> = basis.iter().chain(fresh.iter()).cloned().collect();
            if orthonormalize_against(&mut t, &all) {
                fresh.push(t);
            } else {
                let mut t = res.clone();
                if orthonormalize_against(&mut t, &all) {
                    fresh.push(t);
                }
            }
        }
        if fresh.is_empty() {
            let all = basis.clone();
            for _ in 0..8 {
                let mut t: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
                if orthonormalize_against(&mut t, &all) {
                    fresh.push(t);
                    break;
                }
            }
        }

        if basis.len() + fresh.len() > max_sub {
            // collapse onto the current Ritz vectors
            let keep = block.min(m);
            let mut collapsed: Vec<Vec<f64>> = Vec::with_capacity(keep + fresh.len());
            for r in 0..keep {
                let y = small.vectors.column(r);
                let mut x = vec![0.0; n];
                for (c, b) in basis.iter().enumerate() {
                    let yc = y[c];
                    x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += yc * bi);
                }
                if orthonormalize_against(&mut x, &collapsed) {
                    collapsed.push(x);
                }
            }
            for mut f in fresh {
                if orthonormalize_against(&mut f, &collapsed) {
                    collapsed.push(f);
                }
            }
            basis = collapsed;
            images = basis
                .iter()
                .map(|b| {
                    let mut y = vec![0.0; n];
                    op.apply(b, &mut y);
                    y
                })
                .collect();
        } else {
            for f in fresh {
                let mut y = vec![0.0; n];
                op.apply(&f, &mut y);
                basis.push(f);
                images.push(y);
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: settings.max_iterations,
        residual: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{lowest_eigenpairs, Solver};

    fn random_symmetric(n: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.random::<f64>() * 2.0 - 1.0;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
            m[(i, i)] += i as f64 * 0.1;
        }
        m
    }

    #[test]
    fn dense_and_davidson_agree_on_random_matrix() {
        let m = random_symmetric(50, 11);
        let dense = lowest_eigenpairs(&m, 5, Solver::Dense).unwrap();
        let dav = lowest_eigenpairs(&m, 5, Solver::Davidson).unwrap();
        for (a, b) in dense.values.iter().zip(&dav.values) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        assert!(dav.max_residual(&m) < 1e-8);
    }

    #[test]
    fn davidson_full_spectrum() {
        let m = random_symmetric(12, 3);
        let dense = lowest_eigenpairs(&m, 12, Solver::Dense).unwrap();
        let dav = lowest_eigenpairs(&m, 12, Solver::Davidson).unwrap();
        for (a, b) in dense.values.iter().zip(&dav.values) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn davidson_on_sparse_operator() {
        use crate::linalg::CsrMatrix;
        let n = 400;
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![(i, i as f64 * 0.01 - 1.0)];
                if i > 0 {
                    r.push((i - 1, 0.3));
                }
                if i + 1 < n {
                    r.push((i + 1, 0.3));
                }
                r
            })
            .collect();
        let csr = CsrMatrix::from_rows(n, rows);
        let dense = lowest_eigenpairs(&csr, 3, Solver::Dense).unwrap();
        let dav = davidson(&csr, 3, &DavidsonSettings::default()).unwrap();
        for (a, b) in dense.values.iter().zip(&dav.values) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}
