//! The binary case as a sanity check: 16 functions, 4 classes, and the
//! parameter-centric signature separates them exactly.

use nmr_logic::npn::{binary_burnside_count, classify_binary};
use nmr_logic::pc::{binary_pc_signature, pc_binary_check};

fn main() {
    for class in classify_binary() {
        let members: Vec<String> = class
            .members
            .iter()
            .map(|m| format!("{:04b}", m.bits()))
            .collect();
        println!(
            "canonical {:04b}  size {}  pc {}  [{}]",
            class.canonical.bits(),
            class.size(),
            binary_pc_signature(class.canonical),
            members.join(" ")
        );
    }
    println!("burnside count: {}", binary_burnside_count());
    let report = pc_binary_check();
    println!(
        "pc classes: {}, same partition as NPN: {}",
        report.classes.len(),
        report.matches_npn
    );
}
