//! Reading logic tables off simulated experiments and searching parameter
//! grids for implementations of NPN classes.
//!
//! A template with slots `$A` and `$B` is run for three values of each
//! parameter. Row `i` of the resulting table uses the `i`-th value of `$A`,
//! column `j` the `j`-th value of `$B`, and each readout is quantised to a
//! ternary value.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::npn::NpnClassification;
use crate::pc::{pc_signature, PcSignature};
use crate::spin::{scan, ExperimentTemplate, Slot};
use crate::ternary::{FunctionIndex, TernaryFunction, Trit};

/// Threshold rule mapping a readout in `[-1, 1]` to a ternary value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantizer {
    /// Readouts with `|x| < epsilon` are 0.
    pub epsilon: f64,
    /// Largest admissible `|x|`; anything beyond is a simulator fault.
    pub saturation: f64,
}

impl Quantizer {
    pub const DEFAULT_EPSILON: f64 = 0.25;

    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        Ok(Quantizer {
            epsilon,
            saturation: 1.0 + 1e-9,
        })
    }

    #[inline]
    pub fn quantize(&self, x: f64) -> Trit {
        if x >= self.epsilon {
            Trit::Pos
        } else if x <= -self.epsilon {
            Trit::Neg
        } else {
            Trit::Zero
        }
    }

    /// Quantises after checking `x` is a physical readout.
    pub fn quantize_checked(&self, x: f64) -> Result<Trit> {
        if x.is_nan() || x.abs() > self.saturation {
            return Err(Error::RawOutOfRange(x));
        }
        Ok(self.quantize(x))
    }
}

impl Default for Quantizer {
    fn default() -> Self {
        Quantizer::new(Self::DEFAULT_EPSILON).expect("default epsilon is valid")
    }
}

pub fn quantize(x: f64, q: &Quantizer) -> Trit {
    q.quantize(x)
}

/// Nine experiments laid out as a logic table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentTable {
    pub param_a: [f64; 3],
    pub param_b: [f64; 3],
    pub raw: [[f64; 3]; 3],
    pub logic: TernaryFunction,
}

fn check_template(template: &ExperimentTemplate) -> Result<()> {
    let slots = template.slots();
    if slots != BTreeSet::from([Slot::A, Slot::B]) {
        let found: Vec<String> = slots.iter().map(Slot::to_string).collect();
        return Err(Error::TemplateArity(format!("[{}]", found.join(", "))));
    }
    Ok(())
}

pub fn evaluate_table(
    template: &ExperimentTemplate,
    a_vals: [f64; 3],
    b_vals: [f64; 3],
    q: &Quantizer,
) -> Result<ExperimentTable> {
    check_template(template)?;
    let grid = scan(template, &a_vals, &b_vals)?;
    let mut raw = [[0.0; 3]; 3];
    let mut outputs = [Trit::Zero; 9];
    for i in 0..3 {
        for j in 0..3 {
            raw[i][j] = grid.cells[i][j];
            outputs[3 * i + j] = q.quantize_checked(raw[i][j])?;
        }
    }
    Ok(ExperimentTable {
        param_a: a_vals,
        param_b: b_vals,
        raw,
        logic: TernaryFunction::from_outputs(outputs),
    })
}

pub fn pc_of_experiment(t: &ExperimentTable) -> PcSignature {
    pc_signature(&t.logic)
}

/// The logic table read off the two-peak selective-pulse/delay experiment.
pub fn selective_delay_table() -> TernaryFunction {
    TernaryFunction::from_rows([[1, 0, 1], [0, 0, -1], [-1, 0, 1]]).expect("valid table")
}

/// A parameter choice realising a target class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchHit {
    /// Positions of the chosen values in the `$A` and `$B` grids.
    pub index_a: [usize; 3],
    pub index_b: [usize; 3],
    pub triple_a: [f64; 3],
    pub triple_b: [f64; 3],
    pub logic: TernaryFunction,
    /// Canonical index of the NPN class of `logic`.
    pub class: FunctionIndex,
}

/// Exhaustive search over ascending value triples drawn from two grids.
///
/// Reordering a triple only permutes rows or columns, which never leaves
/// the NPN class, so ascending triples cover every class reachable from the
/// grids.
pub struct GateSearch<'a> {
    template: &'a ExperimentTemplate,
    quantizer: Quantizer,
    npn: NpnClassification,
}

impl<'a> GateSearch<'a> {
    pub fn new(template: &'a ExperimentTemplate, quantizer: Quantizer) -> Result<Self> {
        Self::with_classification(template, quantizer, NpnClassification::compute())
    }

    pub fn with_classification(
        template: &'a ExperimentTemplate,
        quantizer: Quantizer,
        npn: NpnClassification,
    ) -> Result<Self> {
        check_template(template)?;
        template.system()?;
        Ok(GateSearch {
            template,
            quantizer,
            npn,
        })
    }

    pub fn classification(&self) -> &NpnClassification {
        &self.npn
    }

    /// Visits every triple pair in lexicographic order and keeps those for
    /// which `keep` accepts the class canonical.
    fn sweep(
        &self,
        grid_a: &[f64],
        grid_b: &[f64],
        keep: impl Fn(FunctionIndex) -> bool + Sync,
    ) -> Result<Vec<SearchHit>> {
        if grid_a.len() < 3 || grid_b.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "search grids need at least 3 values each, got {} and {}",
                grid_a.len(),
                grid_b.len()
            )));
        }
        let raw = scan(self.template, grid_a, grid_b)?;
        let digits = raw
            .cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| self.quantizer.quantize_checked(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let triples_a = ascending_triples(grid_a.len());
        let triples_b = ascending_triples(grid_b.len());
        let hits = triples_a
            .par_iter()
            .flat_map_iter(|ia| {
                let digits = &digits;
                let keep = &keep;
                triples_b.iter().filter_map(move |ib| {
                    let mut outputs = [Trit::Zero; 9];
                    for (r, &i) in ia.iter().enumerate() {
                        for (c, &j) in ib.iter().enumerate() {
                            outputs[3 * r + c] = digits[i][j];
                        }
                    }
                    let logic = TernaryFunction::from_outputs(outputs);
                    let class = self.npn.canonical_of(logic.encode());
                    keep(class).then(|| SearchHit {
                        index_a: *ia,
                        index_b: *ib,
                        triple_a: ia.map(|i| grid_a[i]),
                        triple_b: ib.map(|j| grid_b[j]),
                        logic,
                        class,
                    })
                })
            })
            .collect();
        Ok(hits)
    }

    pub fn search(
        &self,
        grid_a: &[f64],
        grid_b: &[f64],
        targets: &BTreeSet<FunctionIndex>,
    ) -> Result<Vec<SearchHit>> {
        if targets.is_empty() {
            return Ok(Vec::new());
        }
        let targets: BTreeSet<FunctionIndex> = targets.iter().map(|t| self.npn.canonical_of(*t)).collect();
        self.sweep(grid_a, grid_b, |c| targets.contains(&c))
    }

    /// Number of triple pairs landing in each NPN class, for all 84 classes.
    pub fn achievability(&self, grid_a: &[f64], grid_b: &[f64]) -> Result<BTreeMap<FunctionIndex, usize>> {
        let mut counts: BTreeMap<FunctionIndex, usize> =
            self.npn.classes().iter().map(|c| (c.canonical, 0)).collect();
        for hit in self.sweep(grid_a, grid_b, |_| true)? {
            *counts.get_mut(&hit.class).expect("known class") += 1;
        }
        Ok(counts)
    }
}

fn ascending_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// One-shot search; `targets` may be any member of each wanted class.
pub fn search(
    template: &ExperimentTemplate,
    grid_a: &[f64],
    grid_b: &[f64],
    q: &Quantizer,
    targets: &BTreeSet<FunctionIndex>,
) -> Result<Vec<SearchHit>> {
    GateSearch::new(template, *q)?.search(grid_a, grid_b, targets)
}
