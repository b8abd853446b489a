//! Sweep a two-pulse sequence over a 10x10 grid of first flip angle and
//! second phase, printing the x readout as CSV.

use std::f64::consts::PI;

use nmr_logic::cli::grid_csv;
use nmr_logic::spin::two_pulse_grid;

fn main() -> nmr_logic::Result<()> {
    for phi1 in [PI / 2.0, 1.5 * PI] {
        let grid = two_pulse_grid(10, phi1, PI / 2.0)?;
        println!("# phi1 = {phi1}");
        print!("{}", grid_csv(&grid));
    }
    Ok(())
}
