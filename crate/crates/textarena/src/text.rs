//! Fundamental text values: 16-bit code units, text scalars, padded char
//! matrices, and number-to-text conversion.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A single 16-bit code unit. Every unit occupies exactly two bytes in all
/// byte accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeUnit(u16);

impl CodeUnit {
    /// Size of one code unit in bytes.
    pub const BYTES: usize = 2;
    /// The pad character used when rows of a char matrix are extended.
    pub const SPACE: CodeUnit = CodeUnit(0x20);

    pub const fn new(value: u16) -> Self {
        CodeUnit(value)
    }

    pub const fn value(self) -> u16 {
        self.0
    }
}

impl From<u16> for CodeUnit {
    fn from(value: u16) -> Self {
        CodeUnit(value)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    /// Raised when a char matrix is requested from zero input rows.
    #[error("empty matrix source")]
    EmptyMatrixSource,
}

/// An immutable sequence of 16-bit code units with value semantics: clones
/// are independent and equality is unit-by-unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TextScalar {
    units: Vec<CodeUnit>,
}

impl TextScalar {
    pub fn new() -> Self {
        TextScalar { units: Vec::new() }
    }

    pub fn from_units(units: Vec<CodeUnit>) -> Self {
        TextScalar { units }
    }

    pub fn units(&self) -> &[CodeUnit] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Bytes of character data: two per code unit.
    pub fn raw_bytes(&self) -> usize {
        self.units.len() * CodeUnit::BYTES
    }

    /// Heap bytes currently reserved for the unit buffer.
    pub(crate) fn capacity_bytes(&self) -> usize {
        self.units.capacity() * CodeUnit::BYTES
    }

    /// Appends `other` in place.
    pub fn append(&mut self, other: &TextScalar) {
        self.units.extend_from_slice(&other.units);
    }

    /// Returns `self ++ other` as a new scalar.
    pub fn concat(&self, other: &TextScalar) -> TextScalar {
        let mut units = Vec::with_capacity(self.len() + other.len());
        units.extend_from_slice(&self.units);
        units.extend_from_slice(&other.units);
        TextScalar { units }
    }

    /// Index of the first occurrence of `needle`, or `None`. An empty needle
    /// matches at position 0.
    pub fn find(&self, needle: &TextScalar) -> Option<usize> {
        if needle.is_empty() {
            return Some(0);
        }
        if needle.len() > self.len() {
            return None;
        }
        self.units
            .windows(needle.len())
            .position(|w| w == needle.units())
    }
}

impl From<&str> for TextScalar {
    fn from(s: &str) -> Self {
        TextScalar {
            units: s.encode_utf16().map(CodeUnit).collect(),
        }
    }
}

impl From<String> for TextScalar {
    fn from(s: String) -> Self {
        TextScalar::from(s.as_str())
    }
}

impl From<char> for TextScalar {
    fn from(c: char) -> Self {
        let mut buf = [0u16; 2];
        TextScalar {
            units: c
                .encode_utf16(&mut buf)
                .iter()
                .copied()
                .map(CodeUnit)
                .collect(),
        }
    }
}

impl fmt::Display for TextScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let raw: Vec<u16> = self.units.iter().map(|u| u.value()).collect();
        f.write_str(&String::from_utf16_lossy(&raw))
    }
}

impl Serialize for TextScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TextScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(TextScalar::from(String::deserialize(deserializer)?))
    }
}

/// A rectangular rows x cols character block stored column-major. Shorter
/// source rows are right-padded with spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharMatrix {
    rows: usize,
    cols: usize,
    units: Vec<CodeUnit>,
}

impl CharMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Units in storage (column-major) order.
    pub fn units(&self) -> &[CodeUnit] {
        &self.units
    }

    /// Row `r` read left to right, including pad characters.
    pub fn row(&self, r: usize) -> TextScalar {
        assert!(r < self.rows, "row {r} out of range for {} rows", self.rows);
        let units = (0..self.cols)
            .map(|c| self.units[c * self.rows + r])
            .collect();
        TextScalar::from_units(units)
    }
}

/// Stacks `texts` into a rectangular char matrix, right-padding shorter rows
/// with spaces. Storage is column-major.
pub fn pad_to_char_matrix(texts: &[TextScalar]) -> Result<CharMatrix, TextError> {
    if texts.is_empty() {
        return Err(TextError::EmptyMatrixSource);
    }
    let rows = texts.len();
    let cols = texts.iter().map(TextScalar::len).max().unwrap_or(0);
    let mut units = Vec::with_capacity(rows * cols);
    for c in 0..cols {
        for text in texts {
            units.push(text.units().get(c).copied().unwrap_or(CodeUnit::SPACE));
        }
    }
    Ok(CharMatrix { rows, cols, units })
}

/// Reads a char matrix out in storage order: down each column, left to right.
pub fn column_major_readout(matrix: &CharMatrix) -> TextScalar {
    TextScalar::from_units(matrix.units.to_vec())
}

/// Converts a double to text.
///
/// Integers with magnitude below 2^53 render as plain decimal digits with an
/// optional leading minus. Other finite values render as the shortest decimal
/// string that parses back to the identical double. Non-finite values render
/// as `Inf`, `-Inf`, or `NaN`.
pub fn num_to_text(value: f64) -> TextScalar {
    const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53

    if value.is_nan() {
        return TextScalar::from("NaN");
    }
    if value.is_infinite() {
        return TextScalar::from(if value < 0.0 { "-Inf" } else { "Inf" });
    }
    if value == value.trunc() && value.abs() < EXACT_INT_LIMIT {
        return TextScalar::from((value as i64).to_string());
    }
    TextScalar::from(value.to_string())
}

/// Data type tag for uniformity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataType {
    Double,
    Text,
    Char,
}

/// A value carrying both a data type and a shape, as seen by the uniformity
/// predicate. Text scalars are always 1x1; char vectors are 1xL; numeric
/// vectors are 1xN.
#[derive(Debug, Clone, PartialEq)]
pub enum TypedValue {
    Double(f64),
    DoubleVector(Vec<f64>),
    Text(TextScalar),
    CharVector(TextScalar),
}

impl TypedValue {
    pub fn data_type(&self) -> DataType {
        match self {
            TypedValue::Double(_) | TypedValue::DoubleVector(_) => DataType::Double,
            TypedValue::Text(_) => DataType::Text,
            TypedValue::CharVector(_) => DataType::Char,
        }
    }

    /// Whether the value is 1x1.
    pub fn is_scalar_shaped(&self) -> bool {
        match self {
            TypedValue::Double(_) => true,
            TypedValue::DoubleVector(v) => v.len() == 1,
            TypedValue::Text(_) => true,
            TypedValue::CharVector(t) => t.len() == 1,
        }
    }
}

/// True iff every value shares one data type and every value is 1x1, so the
/// collection can be concatenated into a plain array. Vacuously true for an
/// empty sequence.
pub fn is_uniform(values: &[TypedValue]) -> bool {
    let mut types = values.iter().map(TypedValue::data_type);
    let first = match types.next() {
        Some(t) => t,
        None => return true,
    };
    types.all(|t| t == first) && values.iter().all(TypedValue::is_scalar_shaped)
}
