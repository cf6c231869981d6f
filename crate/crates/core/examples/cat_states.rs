// Coherent-state superpositions: size and distinguishability against amplitude.
// Homodyne detection separates the branches; photon counting cannot.
//
//     cargo run --example cat_states

use macrolens::catalog::css;
use macrolens::error::Result;
use macrolens::fock::Sign;
use macrolens::macroscopicity::report;
use macrolens::measurement::DetectorModel;

pub struct CatRow {
    pub alpha: f64,
    pub n_even: f64,
    pub n_odd: f64,
    pub d_kd: f64,
    pub d_bc: f64,
    pub d_pnrd: f64,
}

pub fn run_example() -> Result<Vec<CatRow>> {
    let homodyne = DetectorModel::homodyne(0.0, 0.0)?;
    let pnrd = DetectorModel::pnrd(0.0)?;
    [0.25, 0.5, 1.0, 1.5, 2.0, 3.0]
        .into_iter()
        .map(|alpha| {
            let state = css(alpha, 1e-12)?;
            let even = report(&state, Sign::Plus, homodyne)?;
            let odd = report(&state, Sign::Minus, homodyne)?;
            let counted = report(&state, Sign::Minus, pnrd)?;
            Ok(CatRow {
                alpha,
                n_even: even.n_fluct,
                n_odd: odd.n_fluct,
                d_kd: odd.d_kd,
                d_bc: odd.d_bc,
                d_pnrd: counted.d_kd,
            })
        })
        .collect()
}

#[allow(dead_code)]
fn main() -> Result<()> {
    println!("alpha   N(+)      N(-)      D_KD      D_BC      D_pnrd");
    for r in run_example()? {
        println!(
            "{:5.2}  {:8.5}  {:8.5}  {:8.6}  {:8.6}  {:.1e}",
            r.alpha, r.n_even, r.n_odd, r.d_kd, r.d_bc, r.d_pnrd
        );
    }
    Ok(())
}
