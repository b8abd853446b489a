//! Two peaks, a frequency-selective pi/2 pulse and a free-precession delay.
//! The delay picks the sign of peak A, the pulse frequency picks which
//! peak is excited.

use std::f64::consts::PI;

use nmr_logic::gate_search::{evaluate_table, pc_of_experiment, selective_delay_table, Quantizer};
use nmr_logic::npn::orbit;
use nmr_logic::spin::ExperimentTemplate;

fn main() -> nmr_logic::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/selective_delay.json");
    let template = ExperimentTemplate::from_json(&std::fs::read_to_string(path)?)?;
    let omega = template.peaks[0].offset_rad_s;

    let delays = [0.0, PI / (2.0 * omega), PI / omega];
    let targets = [omega, 1.5 * omega, 2.0 * omega];
    let table = evaluate_table(&template, delays, targets, &Quantizer::default())?;

    println!("delays {delays:?}\ntargets {targets:?}");
    println!("{}", table.logic);
    println!("pc signature {}", pc_of_experiment(&table));
    println!(
        "matches reference table: {}",
        table.logic == selective_delay_table()
    );
    println!("NPN class canonical {}", orbit(table.logic.encode()).canonical);
    Ok(())
}
