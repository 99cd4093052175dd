//! Lowest eigenpairs of a sparse symmetric matrix with Davidson, checked
//! against the dense solver.
//!
//! cargo run --example davidson

use qsci::linalg::{davidson, dense_eigh, CsrMatrix, DavidsonSettings, LinearOperator};

fn main() -> qsci::Result<()> {
    // diagonally dominant, CI-like: growing diagonal, weak couplings
    let n = 400;
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i: usize| {
            let mut r = vec![(i, 0.05 * i as f64 + 0.2 * (i as f64 * 0.37).sin())];
            for j in [i.wrapping_sub(1), i + 1, i.wrapping_sub(7), i + 7] {
                if j < n {
                    r.push((j, -0.05));
                }
            }
            r
        })
        .collect();
    let m = CsrMatrix::from_rows(n, rows);
    let d = davidson(&m, 4, &DavidsonSettings::default())?;
    let exact = dense_eigh(&m.to_dense()).values;
    for (k, v) in d.values.iter().enumerate() {
        println!("lambda_{k} = {v:.12}  dense {:.12}", exact[k]);
    }
    println!("max residual {:.2e}, {} nonzeros", d.max_residual(&m), m.nnz());
    Ok(())
}
