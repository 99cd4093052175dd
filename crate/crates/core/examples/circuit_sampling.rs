//! Build a small circuit, simulate it, sample it with and without device noise.
//!
//! cargo run --example circuit_sampling

use qsci::circuit::{noisy_sample, ry_ansatz, sample, simulate, NoiseModel};
use qsci::variational::initial_params;
use qsci::Determinant;

fn main() -> qsci::Result<()> {
    let c = ry_ansatz(4, 2)?;
    print!("{}", c.to_text());
    let params: Vec<f64> = initial_params(c.n_params(), 1).iter().map(|x| x * 10.0).collect();
    let init: Determinant = "0011".parse()?;
    let s = simulate(&c, &params, &init)?;
    println!("norm {:.12}", s.norm());
    let clean = sample(&s, 10_000, 5)?;
    let noisy = noisy_sample(&c, &params, &init, &NoiseModel::device(), 10_000, 5)?;
    println!("outcome  exact p  clean  noisy");
    let p = s.probabilities();
    for (d, k) in clean.iter().take(8) {
        println!("{d}   {:.4}  {k:>5}  {:>5}", p[d.bits() as usize], noisy.count(d.bits()));
    }
    Ok(())
}
