//! Which parameter-centric signatures pin down a single NPN class, and
//! which ones lump several classes together.

use nmr_logic::npn::NpnClassification;
use nmr_logic::pc::{pc_classify_with, pc_signature};
use nmr_logic::TernaryFunction;

fn main() {
    let npn = NpnClassification::compute();
    let pcs = pc_classify_with(&npn);
    let single = pcs.iter().filter(|p| p.is_single()).count();
    println!(
        "{} signatures, {} single, {} overlapping",
        pcs.len(),
        single,
        pcs.len() - single
    );

    let mut worst: Vec<_> = pcs.iter().filter(|p| !p.is_single()).collect();
    worst.sort_by_key(|p| std::cmp::Reverse(p.npn_classes.len()));
    for p in worst.iter().take(5) {
        println!(
            "  {:<16} {} NPN classes, {} functions",
            p.signature.to_string(),
            p.npn_classes.len(),
            p.size()
        );
    }

    let mul = TernaryFunction::multiplication();
    let sig = pc_signature(&mul);
    let own = pcs
        .iter()
        .find(|p| p.signature == sig)
        .expect("multiplication has a signature");
    println!(
        "\nmultiplication: {} ({})",
        sig,
        if own.is_single() { "single" } else { "overlap" }
    );
}
