// Describing a sweep in the same key = value format the CLI reads.
//
//     cargo run --example sweep_config

use macrolens::error::Result;
use macrolens::sweep::{sweep, SweepSpec};
use macrolens::table::ResultTable;

const CONFIG: &str = "
# displaced Fock superpositions, both detectors
family   = dfs
start    = 0.5
stop     = 2.0
steps    = 4
detector = homodyne, pnrd
sigma    = 0, 1
measures = d_kd, m_kd
";

pub fn run_example() -> Result<ResultTable> {
    sweep(&SweepSpec::parse(CONFIG)?)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run_example()?.to_csv());
    Ok(())
}
