//! Balanced ternary values and two-input truth tables.
//!
//! A [`TernaryFunction`] is a 3x3 table with input A selecting the row and
//! input B the column. Every table has a dense [`FunctionIndex`] in
//! `0..19683`: the nine outputs, read row-major, are the little-endian base-3
//! digits of the index with digit `value + 1`. The constant `-1` table is
//! index 0 and the constant `+1` table is index 19682.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of two-input ternary functions, `3^9`.
pub const FUNCTION_COUNT: u32 = 19_683;

/// A balanced ternary logic value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trit {
    Neg,
    Zero,
    Pos,
}

impl Trit {
    pub const ALL: [Trit; 3] = [Trit::Neg, Trit::Zero, Trit::Pos];

    pub const fn value(self) -> i8 {
        match self {
            Trit::Neg => -1,
            Trit::Zero => 0,
            Trit::Pos => 1,
        }
    }

    /// Digit in `0..3`, equal to `value + 1`.
    pub const fn digit(self) -> u8 {
        match self {
            Trit::Neg => 0,
            Trit::Zero => 1,
            Trit::Pos => 2,
        }
    }

    pub const fn from_digit(d: u8) -> Trit {
        match d {
            0 => Trit::Neg,
            1 => Trit::Zero,
            2 => Trit::Pos,
            _ => panic!("ternary digit out of range"),
        }
    }

    pub fn from_value(v: i64) -> Result<Trit> {
        match v {
            -1 => Ok(Trit::Neg),
            0 => Ok(Trit::Zero),
            1 => Ok(Trit::Pos),
            other => Err(Error::InvalidTrit(other)),
        }
    }
}

impl std::ops::Neg for Trit {
    type Output = Trit;

    fn neg(self) -> Trit {
        match self {
            Trit::Neg => Trit::Pos,
            Trit::Zero => Trit::Zero,
            Trit::Pos => Trit::Neg,
        }
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for Trit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Trit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Trit::from_value(v).map_err(serde::de::Error::custom)
    }
}

/// Position of the `(a, b)` cell in the row-major table.
#[inline]
pub const fn flat(a: Trit, b: Trit) -> usize {
    3 * a.digit() as usize + b.digit() as usize
}

/// Dense index of a ternary function, in `0..FUNCTION_COUNT`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FunctionIndex(u16);

impl FunctionIndex {
    pub fn new(index: u32) -> Result<Self> {
        if index < FUNCTION_COUNT {
            Ok(FunctionIndex(index as u16))
        } else {
            Err(Error::IndexOutOfRange(index))
        }
    }

    pub const fn get(self) -> u32 {
        self.0 as u32
    }
}

impl fmt::Display for FunctionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A two-input, one-output ternary function as its full truth table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryFunction {
    outputs: [Trit; 9],
}

impl Serialize for TernaryFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl TernaryFunction {
    pub const fn from_outputs(outputs: [Trit; 9]) -> Self {
        TernaryFunction { outputs }
    }

    /// Builds a table from rows of integer values (row = input A).
    pub fn from_rows(rows: [[i64; 3]; 3]) -> Result<Self> {
        let mut outputs = [Trit::Zero; 9];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                outputs[3 * i + j] = Trit::from_value(v)?;
            }
        }
        Ok(TernaryFunction { outputs })
    }

    pub fn from_fn(f: impl Fn(Trit, Trit) -> Trit) -> Self {
        let mut outputs = [Trit::Zero; 9];
        for a in Trit::ALL {
            for b in Trit::ALL {
                outputs[flat(a, b)] = f(a, b);
            }
        }
        TernaryFunction { outputs }
    }

    pub const fn constant(v: Trit) -> Self {
        TernaryFunction { outputs: [v; 9] }
    }

    /// Ternary multiplication, `a * b`.
    pub fn multiplication() -> Self {
        Self::from_fn(|a, b| match (a, b) {
            (Trit::Zero, _) | (_, Trit::Zero) => Trit::Zero,
            _ if a == b => Trit::Pos,
            _ => Trit::Neg,
        })
    }

    pub fn outputs(&self) -> &[Trit; 9] {
        &self.outputs
    }

    #[inline]
    pub fn eval(&self, a: Trit, b: Trit) -> Trit {
        self.outputs[flat(a, b)]
    }

    pub fn row(&self, a: Trit) -> [Trit; 3] {
        let i = 3 * a.digit() as usize;
        [self.outputs[i], self.outputs[i + 1], self.outputs[i + 2]]
    }

    pub fn column(&self, b: Trit) -> [Trit; 3] {
        let j = b.digit() as usize;
        [self.outputs[j], self.outputs[j + 3], self.outputs[j + 6]]
    }

    pub fn rows(&self) -> [[i8; 3]; 3] {
        let mut out = [[0i8; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.outputs[3 * i + j].value();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|a, b| self.eval(b, a))
    }

    pub fn encode(&self) -> FunctionIndex {
        let index = self
            .outputs
            .iter()
            .rev()
            .fold(0u16, |acc, t| acc * 3 + t.digit() as u16);
        FunctionIndex(index)
    }

    pub fn decode(index: FunctionIndex) -> Self {
        let mut n = index.0;
        let mut outputs = [Trit::Zero; 9];
        for out in outputs.iter_mut() {
            *out = Trit::from_digit((n % 3) as u8);
            n /= 3;
        }
        TernaryFunction { outputs }
    }
}

impl fmt::Display for TernaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{:>2} {:>2} {:>2}", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

pub fn encode(f: &TernaryFunction) -> FunctionIndex {
    f.encode()
}

/// Decodes a raw index, rejecting values outside `0..FUNCTION_COUNT`.
pub fn decode(index: u32) -> Result<TernaryFunction> {
    FunctionIndex::new(index).map(TernaryFunction::decode)
}

pub fn eval(f: &TernaryFunction, a: Trit, b: Trit) -> Trit {
    f.eval(a, b)
}

/// Every function index in ascending order.
pub fn enumerate_all() -> impl Iterator<Item = FunctionIndex> + Clone {
    (0..FUNCTION_COUNT as u16).map(FunctionIndex)
}
