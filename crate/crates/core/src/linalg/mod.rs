//! Real symmetric eigensolvers: a dense path over nalgebra and a Davidson
//! iteration over any [`LinearOperator`].

mod davidson;
mod sparse;

pub use davidson::{davidson, DavidsonSettings};
pub use sparse::CsrMatrix;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A real symmetric operator that can be applied to vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    fn diagonal(&self) -> Vec<f64>;

    /// `y = A x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            for i in 0..n {
                m[(i, j)] = col[i];
            }
            e[j] = 0.0;
        }
        m
    }
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows()).map(|i| self[(i, i)]).collect()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.nrows();
        y[..n].iter_mut().for_each(|v| *v = 0.0);
        // column-major storage: accumulate column by column
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            let col = self.column(j);
            for i in 0..n {
                y[i] += col[i] * xj;
            }
        }
    }

    fn to_dense(&self) -> DMatrix<f64> {
        self.clone()
    }
}

/// Lowest eigenpairs, eigenvalues ascending, eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl Eigenpairs {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i).iter().copied().collect()
    }

    /// Largest `‖A c − E c‖` over the stored pairs.
    pub fn max_residual(&self, op: &dyn LinearOperator) -> f64 {
        let n = op.dim();
        let mut y = vec![0.0; n];
        let mut worst: f64 = 0.0;
        for (k, &e) in self.values.iter().enumerate() {
            let c = self.vector(k);
            op.apply(&c, &mut y);
            let r: f64 = y.iter().zip(&c).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(r);
        }
        worst
    }
}

/// Full spectrum of a dense symmetric matrix, ascending.
pub fn dense_eigh(m: &DMatrix<f64>) -> Eigenpairs {
    let n = m.nrows();
    if n == 0 {
        return Eigenpairs {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col: DVector<f64> = eig.eigenvectors.column(src).into();
        fix_sign(col.as_mut_slice());
        vectors.set_column(dst, &col);
    }
    Eigenpairs { values, vectors }
}

/// Makes the largest-magnitude component positive (first one on ties).
pub(crate) fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Which solver [`lowest_eigenpairs`] should use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Dense,
    Davidson,
    /// Dense up to [`DENSE_SOLVER_THRESHOLD`], Davidson above.
    Auto,
}

pub const DENSE_SOLVER_THRESHOLD: usize = 2000;

/// The `k` smallest eigenpairs of `op`.
pub fn lowest_eigenpairs(op: &dyn LinearOperator, k: usize, solver: Solver) -> Result<Eigenpairs> {
    let n = op.dim();
    if k == 0 || k > n {
        return Err(Error::invalid(format!("requested {k} eigenpairs of a {n}-dimensional matrix")));
    }
    let use_dense = match solver {
        Solver::Dense => true,
        Solver::Davidson => false,
        Solver::Auto => n <= DENSE_SOLVER_THRESHOLD,
    };
    if use_dense {
        let full = dense_eigh(&op.to_dense());
        Ok(Eigenpairs {
            values: full.values[..k].to_vec(),
            vectors: full.vectors.columns(0, k).into_owned(),
        })
    } else {
        davidson(op, k, &DavidsonSettings::default())
    }
}
