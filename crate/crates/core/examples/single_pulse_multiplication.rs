//! One hard pulse on a single spin: with flip angle and phase each drawn
//! from {pi/2, pi, 3pi/2}, the quantized x readout is ternary multiplication.

use std::f64::consts::PI;

use nmr_logic::gate_search::{evaluate_table, pc_of_experiment, Quantizer};
use nmr_logic::spin::ExperimentTemplate;
use nmr_logic::TernaryFunction;

fn main() -> nmr_logic::Result<()> {
    let template = ExperimentTemplate::single_pulse();
    let angles = [PI / 2.0, PI, 1.5 * PI];
    let table = evaluate_table(&template, angles, angles, &Quantizer::default())?;

    println!("raw mx (rows: flip angle, cols: phase)");
    for row in &table.raw {
        println!("  {:>7.3} {:>7.3} {:>7.3}", row[0], row[1], row[2]);
    }
    println!("quantized:\n{}", table.logic);
    println!("pc signature {}", pc_of_experiment(&table));
    println!(
        "equals multiplication: {}",
        table.logic == TernaryFunction::multiplication()
    );
    Ok(())
}
