//! NPN equivalence of two-input logic functions.
//!
//! For ternary functions the transformation group is generated by the six
//! permutations of `{-1, 0, 1}` applied independently to each input and to
//! the output, plus exchanging the two inputs: `6 * 6 * 2 * 6 = 432`
//! elements. The binary case is the classic negate/permute/negate group of
//! order 16.
//!
//! A transform `t` maps `f` to
//! `g(a, b) = perm_out(f(perm_a^-1(a'), perm_b^-1(b')))`, where
//! `(a', b') = (b, a)` when the inputs are swapped. With this convention
//! [`NpnTransform::compose`] is an honest group product.
//!
//! Classes are computed by explicit closure under the whole group and are
//! identified by their smallest member index.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ternary::{FunctionIndex, TernaryFunction, Trit, FUNCTION_COUNT};

/// Order of the ternary NPN group.
pub const GROUP_ORDER: usize = 432;
/// Order of the binary NPN group.
pub const BINARY_GROUP_ORDER: usize = 16;

/// A bijection of the ternary values, stored as the image of each digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValuePermutation([u8; 3]);

impl ValuePermutation {
    pub const IDENTITY: ValuePermutation = ValuePermutation([0, 1, 2]);

    /// All six permutations, identity first, in lexicographic order of images.
    pub const ALL: [ValuePermutation; 6] = [
        ValuePermutation([0, 1, 2]),
        ValuePermutation([0, 2, 1]),
        ValuePermutation([1, 0, 2]),
        ValuePermutation([1, 2, 0]),
        ValuePermutation([2, 0, 1]),
        ValuePermutation([2, 1, 0]),
    ];

    /// Builds the permutation sending `-1, 0, 1` to the given images.
    pub fn from_images(images: [Trit; 3]) -> Option<Self> {
        let digits = images.map(Trit::digit);
        let mut seen = [false; 3];
        for d in digits {
            if std::mem::replace(&mut seen[d as usize], true) {
                return None;
            }
        }
        Some(ValuePermutation(digits))
    }

    /// Exchanges `x` and `y`, fixing the third value.
    pub fn transposition(x: Trit, y: Trit) -> Self {
        let mut images = [0, 1, 2];
        images.swap(x.digit() as usize, y.digit() as usize);
        ValuePermutation(images)
    }

    /// Value negation, `-1 <-> 1`.
    pub fn negation() -> Self {
        ValuePermutation([2, 1, 0])
    }

    #[inline]
    pub fn apply(self, t: Trit) -> Trit {
        Trit::from_digit(self.0[t.digit() as usize])
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 3];
        for (i, &img) in self.0.iter().enumerate() {
            inv[img as usize] = i as u8;
        }
        ValuePermutation(inv)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(self, first: ValuePermutation) -> Self {
        ValuePermutation(first.0.map(|d| self.0[d as usize]))
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }
}

impl fmt::Display for ValuePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let img = |d: u8| Trit::from_digit(d).value();
        write!(
            f,
            "{{-1,0,1}}->{{{},{},{}}}",
            img(self.0[0]),
            img(self.0[1]),
            img(self.0[2])
        )
    }
}

/// An element of the ternary NPN group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NpnTransform {
    pub perm_a: ValuePermutation,
    pub perm_b: ValuePermutation,
    pub swap_inputs: bool,
    pub perm_out: ValuePermutation,
}

impl NpnTransform {
    pub const IDENTITY: NpnTransform = NpnTransform {
        perm_a: ValuePermutation::IDENTITY,
        perm_b: ValuePermutation::IDENTITY,
        swap_inputs: false,
        perm_out: ValuePermutation::IDENTITY,
    };

    /// The 432 group elements in a fixed order, identity first.
    pub fn all() -> Vec<NpnTransform> {
        let mut out = Vec::with_capacity(GROUP_ORDER);
        for swap_inputs in [false, true] {
            for perm_a in ValuePermutation::ALL {
                for perm_b in ValuePermutation::ALL {
                    for perm_out in ValuePermutation::ALL {
                        out.push(NpnTransform {
                            perm_a,
                            perm_b,
                            swap_inputs,
                            perm_out,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn swap() -> Self {
        NpnTransform {
            swap_inputs: true,
            ..Self::IDENTITY
        }
    }

    pub fn apply(&self, f: &TernaryFunction) -> TernaryFunction {
        let inv_a = self.perm_a.inverse();
        let inv_b = self.perm_b.inverse();
        TernaryFunction::from_fn(|a, b| {
            let (x, y) = if self.swap_inputs { (b, a) } else { (a, b) };
            self.perm_out.apply(f.eval(inv_a.apply(x), inv_b.apply(y)))
        })
    }

    /// `self ∘ first`, so that `self.apply(&first.apply(f)) == self.compose(first).apply(f)`.
    pub fn compose(self, first: NpnTransform) -> NpnTransform {
        let (perm_a, perm_b) = if first.swap_inputs {
            (
                self.perm_b.compose(first.perm_a),
                self.perm_a.compose(first.perm_b),
            )
        } else {
            (
                self.perm_a.compose(first.perm_a),
                self.perm_b.compose(first.perm_b),
            )
        };
        NpnTransform {
            perm_a,
            perm_b,
            swap_inputs: self.swap_inputs ^ first.swap_inputs,
            perm_out: self.perm_out.compose(first.perm_out),
        }
    }
}

/// One NPN equivalence class of ternary functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NpnClass {
    /// Smallest member index.
    pub canonical: FunctionIndex,
    /// Members in ascending order.
    pub members: Vec<FunctionIndex>,
}

impl NpnClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, f: FunctionIndex) -> bool {
        self.members.binary_search(&f).is_ok()
    }

    pub fn canonical_function(&self) -> TernaryFunction {
        TernaryFunction::decode(self.canonical)
    }
}

fn act_ternary(t: &NpnTransform, f: u32) -> u32 {
    let f = TernaryFunction::decode(FunctionIndex::new(f).expect("index in range"));
    t.apply(&f).encode().get()
}

fn orbit_by<T>(group: &[T], act: impl Fn(&T, u32) -> u32, f: u32) -> Vec<u32> {
    let mut members: Vec<u32> = group.iter().map(|t| act(t, f)).collect();
    members.sort_unstable();
    members.dedup();
    members
}

/// Partitions `0..n` into orbits, ordered by smallest member.
fn partition_by<T>(n: u32, group: &[T], act: impl Fn(&T, u32) -> u32) -> Vec<Vec<u32>> {
    let mut seen = vec![false; n as usize];
    let mut classes = Vec::new();
    for f in 0..n {
        if seen[f as usize] {
            continue;
        }
        let members = orbit_by(group, &act, f);
        for &m in &members {
            seen[m as usize] = true;
        }
        // every smaller index is already placed, so f is the orbit minimum
        debug_assert_eq!(members[0], f);
        classes.push(members);
    }
    classes
}

fn ternary_class(members: Vec<u32>) -> NpnClass {
    let members: Vec<FunctionIndex> = members
        .into_iter()
        .map(|m| FunctionIndex::new(m).expect("index in range"))
        .collect();
    NpnClass {
        canonical: members[0],
        members,
    }
}

pub fn apply_transform(t: &NpnTransform, f: &TernaryFunction) -> TernaryFunction {
    t.apply(f)
}

pub fn orbit(f: FunctionIndex) -> NpnClass {
    ternary_class(orbit_by(&NpnTransform::all(), act_ternary, f.get()))
}

/// Group elements fixing `f`.
pub fn stabilizer(f: FunctionIndex) -> Vec<NpnTransform> {
    let func = TernaryFunction::decode(f);
    NpnTransform::all()
        .into_iter()
        .filter(|t| t.apply(&func) == func)
        .collect()
}

/// All ternary NPN classes sorted by canonical index.
pub fn classify_all() -> Vec<NpnClass> {
    partition_by(FUNCTION_COUNT, &NpnTransform::all(), act_ternary)
        .into_iter()
        .map(ternary_class)
        .collect()
}

/// Sum over the group of the number of functions each element fixes.
pub fn fixed_point_total() -> u64 {
    let functions: Vec<TernaryFunction> = crate::ternary::enumerate_all()
        .map(TernaryFunction::decode)
        .collect();
    NpnTransform::all()
        .par_iter()
        .map(|t| functions.iter().filter(|f| t.apply(f) == **f).count() as u64)
        .sum()
}

/// Number of orbits by Burnside's lemma, counted independently of
/// [`classify_all`].
pub fn burnside_count() -> u64 {
    fixed_point_total() / GROUP_ORDER as u64
}

/// The ternary classification with a reverse lookup from function to class.
#[derive(Debug, Clone)]
pub struct NpnClassification {
    classes: Vec<NpnClass>,
    class_of: Vec<u16>,
}

impl NpnClassification {
    pub fn compute() -> Self {
        Self::from_classes(classify_all())
    }

    pub fn from_classes(classes: Vec<NpnClass>) -> Self {
        let mut class_of = vec![u16::MAX; FUNCTION_COUNT as usize];
        for (k, class) in classes.iter().enumerate() {
            for m in &class.members {
                class_of[m.get() as usize] = k as u16;
            }
        }
        NpnClassification { classes, class_of }
    }

    pub fn classes(&self) -> &[NpnClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, f: FunctionIndex) -> &NpnClass {
        &self.classes[self.class_of[f.get() as usize] as usize]
    }

    pub fn canonical_of(&self, f: FunctionIndex) -> FunctionIndex {
        self.class_of(f).canonical
    }

    /// Position of `f`'s class in [`classes`](Self::classes).
    pub fn position_of(&self, f: FunctionIndex) -> usize {
        self.class_of[f.get() as usize] as usize
    }
}

/// A two-input binary function; bit `2a + b` holds `f(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryFunction(u8);

impl BinaryFunction {
    pub const COUNT: u8 = 16;
    pub const XOR: BinaryFunction = BinaryFunction(0b0110);
    pub const AND: BinaryFunction = BinaryFunction(0b1000);

    pub fn new(bits: u8) -> Option<Self> {
        (bits < Self::COUNT).then_some(BinaryFunction(bits))
    }

    pub fn from_fn(f: impl Fn(bool, bool) -> bool) -> Self {
        let mut bits = 0;
        for a in [false, true] {
            for b in [false, true] {
                if f(a, b) {
                    bits |= 1 << (2 * a as u8 + b as u8);
                }
            }
        }
        BinaryFunction(bits)
    }

    pub fn all() -> impl Iterator<Item = BinaryFunction> {
        (0..Self::COUNT).map(BinaryFunction)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn eval(self, a: bool, b: bool) -> bool {
        (self.0 >> (2 * a as u8 + b as u8)) & 1 == 1
    }

    pub fn row(self, a: bool) -> [bool; 2] {
        [self.eval(a, false), self.eval(a, true)]
    }

    pub fn column(self, b: bool) -> [bool; 2] {
        [self.eval(false, b), self.eval(true, b)]
    }
}

/// An element of the binary NPN group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryTransform {
    pub neg_a: bool,
    pub neg_b: bool,
    pub swap_inputs: bool,
    pub neg_out: bool,
}

impl BinaryTransform {
    pub fn all() -> Vec<BinaryTransform> {
        (0..BINARY_GROUP_ORDER as u8)
            .map(|k| BinaryTransform {
                neg_a: k & 1 != 0,
                neg_b: k & 2 != 0,
                swap_inputs: k & 4 != 0,
                neg_out: k & 8 != 0,
            })
            .collect()
    }

    pub fn apply(&self, f: BinaryFunction) -> BinaryFunction {
        BinaryFunction::from_fn(|a, b| {
            let (x, y) = if self.swap_inputs { (b, a) } else { (a, b) };
            f.eval(x ^ self.neg_a, y ^ self.neg_b) ^ self.neg_out
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryClass {
    pub canonical: BinaryFunction,
    pub members: Vec<BinaryFunction>,
}

impl BinaryClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Burnside orbit count for the binary group.
pub fn binary_burnside_count() -> u64 {
    let fixed: usize = BinaryTransform::all()
        .iter()
        .map(|t| BinaryFunction::all().filter(|&f| t.apply(f) == f).count())
        .sum();
    fixed as u64 / BINARY_GROUP_ORDER as u64
}

/// The binary NPN classes, sorted by canonical function.
pub fn classify_binary() -> Vec<BinaryClass> {
    let act = |t: &BinaryTransform, f: u32| t.apply(BinaryFunction(f as u8)).0 as u32;
    partition_by(BinaryFunction::COUNT as u32, &BinaryTransform::all(), act)
        .into_iter()
        .map(|members| {
            let members: Vec<_> = members.into_iter().map(|m| BinaryFunction(m as u8)).collect();
            BinaryClass {
                canonical: members[0],
                members,
            }
        })
        .collect()
}
