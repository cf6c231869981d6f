// A cat state and the matching classical mixture look alike in x but not in
// phase space: only the superposition has negative Wigner regions.
//
//     cargo run --example wigner_cat

use macrolens::catalog::css;
use macrolens::error::Result;
use macrolens::fock::{Ensemble, Truncation};
use macrolens::macroscopicity::n_fluct;
use macrolens::measurement::{wigner, PhaseSpaceGrid};

pub struct WignerSummary {
    pub cat_min: f64,
    pub mixture_min: f64,
    pub cat_integral: f64,
    pub cat_n_fluct: f64,
}

pub fn run_example() -> Result<WignerSummary> {
    // Phase-space quantities are linear in the amplitudes, so truncate more tightly.
    let state = css(1.5, Truncation::new(1e-12).for_phase_space())?;
    let branches = state.branch_set.branches();
    let mixture = Ensemble::new(vec![(0.5, branches[0].clone()), (0.5, branches[1].clone())])?;
    let grid = PhaseSpaceGrid::square(5.0, 121)?;
    let cat = wigner(&state.psi_minus, grid)?;
    let mix = wigner(&mixture, grid)?;
    Ok(WignerSummary {
        cat_min: cat.min(),
        mixture_min: mix.min(),
        cat_integral: cat.integral(),
        cat_n_fluct: n_fluct(&state.psi_minus)?,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let s = run_example()?;
    println!("min W (superposition) = {:.4}", s.cat_min);
    println!("min W (mixture)       = {:.3e}", s.mixture_min);
    println!("integral              = {:.6}", s.cat_integral);
    println!("N of the odd cat      = {:.5}", s.cat_n_fluct);
    Ok(())
}
