//! Parameter-centric (PC) classification.
//!
//! The signature of a function is the number of distinct outputs in each row
//! and in each column, each taken as a multiset, with the (rows, columns)
//! pair itself unordered. Output relabelling keeps every distinct count,
//! input relabelling permutes rows or columns, and swapping inputs exchanges
//! the two multisets, so the signature is constant on NPN classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::npn::{classify_binary, BinaryFunction, NpnClassification};
use crate::ternary::{FunctionIndex, TernaryFunction, Trit};

/// Sorted distinct-output counts, one per row or column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LineCounts(Vec<u8>);

impl LineCounts {
    pub fn new(mut counts: Vec<u8>) -> Self {
        counts.sort_unstable();
        LineCounts(counts)
    }

    pub fn counts(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for LineCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Unordered pair of row and column counts, stored smaller multiset first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PcSignature {
    first: LineCounts,
    second: LineCounts,
}

impl PcSignature {
    pub fn new(rows: LineCounts, cols: LineCounts) -> Self {
        if rows <= cols {
            PcSignature {
                first: rows,
                second: cols,
            }
        } else {
            PcSignature {
                first: cols,
                second: rows,
            }
        }
    }

    pub fn pair(&self) -> (&LineCounts, &LineCounts) {
        (&self.first, &self.second)
    }

    /// True when the pair is `{a, b}` in either order.
    pub fn matches(&self, a: &[u8], b: &[u8]) -> bool {
        *self == PcSignature::new(LineCounts::new(a.to_vec()), LineCounts::new(b.to_vec()))
    }
}

impl fmt::Display for PcSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.first, self.second)
    }
}

fn distinct<T: Ord + Copy>(line: &[T]) -> u8 {
    line.iter().collect::<BTreeSet<_>>().len() as u8
}

pub fn pc_signature(f: &TernaryFunction) -> PcSignature {
    let rows = Trit::ALL.iter().map(|&a| distinct(&f.row(a))).collect();
    let cols = Trit::ALL.iter().map(|&b| distinct(&f.column(b))).collect();
    PcSignature::new(LineCounts::new(rows), LineCounts::new(cols))
}

pub fn binary_pc_signature(f: BinaryFunction) -> PcSignature {
    let rows = [false, true].iter().map(|&a| distinct(&f.row(a))).collect();
    let cols = [false, true].iter().map(|&b| distinct(&f.column(b))).collect();
    PcSignature::new(LineCounts::new(rows), LineCounts::new(cols))
}

/// All ternary functions sharing one signature.
#[derive(Debug, Clone, Serialize)]
pub struct PcClass {
    pub signature: PcSignature,
    pub members: Vec<FunctionIndex>,
    /// Canonical indices of the NPN classes inside this PC class, ascending.
    pub npn_classes: Vec<FunctionIndex>,
}

impl PcClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// True when the PC class coincides with a single NPN class.
    pub fn is_single(&self) -> bool {
        self.npn_classes.len() == 1
    }
}

/// PC classes sorted by signature.
pub fn pc_classify_all() -> Vec<PcClass> {
    pc_classify_with(&NpnClassification::compute())
}

pub fn pc_classify_with(npn: &NpnClassification) -> Vec<PcClass> {
    let mut groups: BTreeMap<PcSignature, (Vec<FunctionIndex>, BTreeSet<FunctionIndex>)> = BTreeMap::new();
    for idx in crate::ternary::enumerate_all() {
        let sig = pc_signature(&TernaryFunction::decode(idx));
        let entry = groups.entry(sig).or_default();
        entry.0.push(idx);
        entry.1.insert(npn.canonical_of(idx));
    }
    groups
        .into_iter()
        .map(|(signature, (members, npn))| PcClass {
            signature,
            members,
            npn_classes: npn.into_iter().collect(),
        })
        .collect()
}

/// Outcome of applying the PC measures to the 16 binary functions.
#[derive(Debug, Clone, Serialize)]
pub struct BinaryPcReport {
    pub classes: Vec<(PcSignature, Vec<BinaryFunction>)>,
    pub npn_partition: Vec<Vec<BinaryFunction>>,
    /// The PC partition equals the binary NPN partition.
    pub matches_npn: bool,
}

pub fn pc_binary_check() -> BinaryPcReport {
    let mut groups: BTreeMap<PcSignature, Vec<BinaryFunction>> = BTreeMap::new();
    for f in BinaryFunction::all() {
        groups.entry(binary_pc_signature(f)).or_default().push(f);
    }
    let classes: Vec<_> = groups.into_iter().collect();
    let npn_partition: Vec<Vec<BinaryFunction>> = classify_binary().into_iter().map(|c| c.members).collect();

    let as_set = |parts: &mut dyn Iterator<Item = &Vec<BinaryFunction>>| {
        parts
            .map(|p| p.iter().copied().collect::<BTreeSet<_>>())
            .collect::<BTreeSet<_>>()
    };
    let matches_npn = as_set(&mut classes.iter().map(|(_, m)| m)) == as_set(&mut npn_partition.iter());

    BinaryPcReport {
        classes,
        npn_partition,
        matches_npn,
    }
}
