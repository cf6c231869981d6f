// Quadrature distribution of an odd cat and what a noisy homodyne detector sees.
//
//     cargo run --example homodyne_blur

use macrolens::catalog::css;
use macrolens::error::Result;
use macrolens::measurement::{blur_pdf, homodyne_pdf_auto};

pub struct BlurRow {
    pub sigma: f64,
    pub integral: f64,
    pub variance: f64,
    /// Density at the origin, where the two lobes meet.
    pub centre: f64,
}

pub fn run_example() -> Result<Vec<BlurRow>> {
    let cat = css(2.0, 1e-12)?;
    let ideal = homodyne_pdf_auto(&cat.psi_minus, 0.0)?;
    [0.0, 0.5, 1.0, 2.0]
        .into_iter()
        .map(|sigma| {
            let pdf = blur_pdf(&ideal, sigma)?;
            let centre_index = pdf
                .points()
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .map_or(0, |(i, _)| i);
            Ok(BlurRow {
                sigma,
                integral: pdf.integral(),
                variance: pdf.variance(),
                centre: pdf.values()[centre_index],
            })
        })
        .collect()
}

#[allow(dead_code)]
fn main() -> Result<()> {
    println!("sigma  integral    variance   P(0)");
    for r in run_example()? {
        println!(
            "{:5.2}  {:.8}  {:9.5}  {:.5}",
            r.sigma, r.integral, r.variance, r.centre
        );
    }
    Ok(())
}
