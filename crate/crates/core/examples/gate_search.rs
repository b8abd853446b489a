//! Exhaustive search for parameter triples that realise a target class,
//! and a census of every class the single-pulse experiment can reach.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nmr_logic::gate_search::{selective_delay_table, GateSearch, Quantizer};
use nmr_logic::spin::ExperimentTemplate;
use nmr_logic::TernaryFunction;

fn main() -> nmr_logic::Result<()> {
    let grid: Vec<f64> = (0..16).map(|k| k as f64 * 2.0 * PI / 16.0).collect();
    let template = ExperimentTemplate::single_pulse();
    let search = GateSearch::new(&template, Quantizer::default())?;

    let mul = BTreeSet::from([TernaryFunction::multiplication().encode()]);
    let hits = search.search(&grid, &grid, &mul)?;
    println!("multiplication class: {} triple pairs", hits.len());
    if let Some(h) = hits.first() {
        println!("  first: flip {:?} phase {:?}", h.triple_a, h.triple_b);
    }

    let sel = BTreeSet::from([selective_delay_table().encode()]);
    println!(
        "selective-delay class: {} triple pairs",
        search.search(&grid, &grid, &sel)?.len()
    );

    let census = search.achievability(&grid, &grid)?;
    let reached: Vec<_> = census.iter().filter(|(_, &n)| n > 0).collect();
    println!("\nreachable classes: {} of {}", reached.len(), census.len());
    for (canonical, n) in reached {
        println!("  {:>5} {:>6}", canonical.get(), n);
    }
    Ok(())
}
