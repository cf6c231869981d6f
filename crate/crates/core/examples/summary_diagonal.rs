// Subjective size against total photon number for all three families. No point
// lies above the diagonal M = ⟨n⟩, and a coarser detector only pushes points down.
//
//     cargo run --release --example summary_diagonal

use macrolens::error::Result;
use macrolens::figures::{run_figure, FigureOptions};

pub struct Diagonal {
    pub rows: usize,
    /// Largest `M_KD / ⟨n⟩` over rows with ⟨n⟩ > 0.
    pub max_ratio: f64,
}

pub fn run_example() -> Result<Diagonal> {
    let options = FigureOptions {
        points: 11,
        ..FigureOptions::default()
    };
    let table = run_figure("fig-summary", &options)?;
    let mean_n = table.column_index("mean_n").expect("column");
    let m_kd = table.column_index("m_kd").expect("column");
    let max_ratio = table
        .rows()
        .iter()
        .filter(|r| r[mean_n] > 0.0)
        .map(|r| r[m_kd] / r[mean_n])
        .fold(0.0, f64::max);
    Ok(Diagonal {
        rows: table.rows().len(),
        max_ratio,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let d = run_example()?;
    println!("{} rows, max M_KD/<n> = {:.5}", d.rows, d.max_ratio);
    Ok(())
}
