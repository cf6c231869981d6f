// Comparing more than two branches. Each branch is measured against the
// weighted mixture of the others.
//
//     cargo run --example branch_comparison

use macrolens::distinguishability::{
    complement_mixture, distinguishability, error_probability, BranchSet,
};
use macrolens::error::Result;
use macrolens::fock::coherent_state;
use macrolens::measurement::DetectorModel;
use num_complex::Complex64;

pub struct ThreeWay {
    pub complement_weights: Vec<f64>,
    pub d_bc: f64,
    pub d_kd: f64,
    pub error_probability: f64,
}

pub fn run_example() -> Result<ThreeWay> {
    let third = Complex64::new((1.0f64 / 3.0).sqrt(), 0.0);
    let branches = [-3.0, 0.0, 3.0]
        .into_iter()
        .map(|x| coherent_state(Complex64::new(x, 0.0), 1e-12))
        .collect::<Result<Vec<_>>>()?;
    let set = BranchSet::new(vec![third; 3], branches)?;
    let rest = complement_mixture(&set, 1)?;
    let d = distinguishability(&set, &DetectorModel::homodyne(0.0, 0.5)?)?;
    Ok(ThreeWay {
        complement_weights: rest.components().iter().map(|(w, _)| *w).collect(),
        d_bc: d.bc,
        d_kd: d.kd,
        error_probability: error_probability(d.kd),
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let t = run_example()?;
    println!(
        "complement of the middle branch: weights {:?}",
        t.complement_weights
    );
    println!(
        "D_BC = {:.6}, D_KD = {:.6}, error probability {:.2e}",
        t.d_bc, t.d_kd, t.error_probability
    );
    Ok(())
}
