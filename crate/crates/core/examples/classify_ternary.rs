//! Partition all 19683 two-input ternary functions into NPN classes and
//! confirm the count with Burnside's lemma.

use std::collections::BTreeMap;

use nmr_logic::npn::{burnside_count, fixed_point_total, orbit, stabilizer, NpnClassification, GROUP_ORDER};
use nmr_logic::TernaryFunction;

fn main() {
    let npn = NpnClassification::compute();
    println!("{} classes under a group of order {}", npn.len(), GROUP_ORDER);
    println!(
        "burnside: {} fixed points / {} = {}",
        fixed_point_total(),
        GROUP_ORDER,
        burnside_count()
    );

    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for c in npn.classes() {
        *sizes.entry(c.size()).or_default() += 1;
    }
    for (size, n) in sizes {
        println!("  size {size:>3}: {n} classes");
    }

    let mul = TernaryFunction::multiplication().encode();
    let class = orbit(mul);
    println!("\nmultiplication is {mul}, canonical {}", class.canonical);
    println!(
        "orbit {} x stabilizer {} = {}",
        class.size(),
        stabilizer(mul).len(),
        GROUP_ORDER
    );
    println!("{}", class.canonical_function());
}
