// Detector resolution washes out distinguishability. For displaced Fock
// superpositions photon counting degrades more gracefully than homodyne
// detection at large displacement (σ is in different units for each detector).
//
//     cargo run --release --example noisy_detectors

use macrolens::catalog::dfs;
use macrolens::distinguishability::BranchDistributions;
use macrolens::error::Result;
use macrolens::measurement::DetectorKind;

pub struct NoiseRow {
    pub sigma: f64,
    pub homodyne: f64,
    pub pnrd: f64,
}

pub fn run_example() -> Result<Vec<NoiseRow>> {
    let state = dfs(3.0, 1e-12)?;
    // Compute the ideal distributions once and blur them per resolution.
    let homodyne =
        BranchDistributions::ideal(&state.branch_set, DetectorKind::Homodyne { angle: 0.0 })?;
    let pnrd = BranchDistributions::ideal(&state.branch_set, DetectorKind::Pnrd)?;
    [0.0, 0.25, 0.5, 1.0, 2.0, 4.0]
        .into_iter()
        .map(|sigma| {
            Ok(NoiseRow {
                sigma,
                homodyne: homodyne.at_sigma(sigma)?.measures()?.kd,
                pnrd: pnrd.at_sigma(sigma)?.measures()?.kd,
            })
        })
        .collect()
}

#[allow(dead_code)]
fn main() -> Result<()> {
    println!("sigma  homodyne  pnrd");
    for r in run_example()? {
        println!("{:5.2}  {:.5}   {:.5}", r.sigma, r.homodyne, r.pnrd);
    }
    Ok(())
}
