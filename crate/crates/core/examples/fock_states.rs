// Building states in a truncated Fock basis and reading off their moments.
//
//     cargo run --example fock_states

use macrolens::error::Result;
use macrolens::fock::{coherent_state, displace, squeezed_vacuum, subtract_photons, FockVector};
use macrolens::macroscopicity::n_fluct;
use num_complex::Complex64;

pub struct StateSummary {
    pub label: &'static str,
    pub cutoff: usize,
    pub tail_mass: f64,
    pub mean_n: f64,
    pub n_fluct: f64,
}

fn summarize(label: &'static str, state: &FockVector) -> Result<StateSummary> {
    Ok(StateSummary {
        label,
        cutoff: state.cutoff(),
        tail_mass: state.tail_mass(),
        mean_n: state.moments().mean_n,
        n_fluct: n_fluct(state)?,
    })
}

pub fn run_example() -> Result<Vec<StateSummary>> {
    let coherent = coherent_state(Complex64::new(2.0, 1.0), 1e-12)?;
    let squeezed = squeezed_vacuum(0.7, 1e-12)?;
    let (subtracted, norm) = subtract_photons(&squeezed, 1)?;
    log::info!("subtraction norm {norm:.6}");
    // Displacement adds photons but no fluctuations.
    let shifted = displace(&subtracted, Complex64::new(3.0, 0.0))?;

    Ok(vec![
        summarize("coherent 2+1i", &coherent)?,
        summarize("squeezed r=0.7", &squeezed)?,
        summarize("subtracted", &subtracted)?,
        summarize("subtracted, displaced by 3", &shifted)?,
    ])
}

#[allow(dead_code)]
fn main() -> Result<()> {
    println!(
        "{:<28} {:>6} {:>10} {:>10} {:>10}",
        "state", "cutoff", "tail", "<n>", "N"
    );
    for s in run_example()? {
        println!(
            "{:<28} {:>6} {:>10.2e} {:>10.5} {:>10.5}",
            s.label, s.cutoff, s.tail_mass, s.mean_n, s.n_fluct
        );
    }
    Ok(())
}
