//! The two rival text containers.
//!
//! [`BoxedTextArray`] keeps one independently allocated buffer per element,
//! the layout of a MATLAB cell array of char vectors. [`UniformStringArray`]
//! keeps every element in a single contiguous code-unit buffer addressed
//! through a monotone offset table, the layout of a MATLAB string array.
//! Both containers count the allocation work they perform so the difference
//! can be asserted, not just argued.

use std::mem;
use std::ops::RangeInclusive;

use thiserror::Error;

use crate::text::{num_to_text, CodeUnit, TextScalar};

/// Vector orientation. Containers here are 1-D; the flag records whether the
/// vector reads as a row or a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Row,
    Column,
}

/// The simulated per-element variable header charged by the fixed-cost
/// accounting model: the size MATLAB reports for a 1x1 cell husk `{[]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementHeader;

impl ElementHeader {
    pub const SIMULATED_BYTES: usize = 104;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContainerError {
    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Positional access shared by both container kinds. `get` hands back an
/// independent value, never a view into container storage.
pub trait TextCollection {
    fn len(&self) -> usize;

    /// Code units of element `index`. Panics if out of range; use [`Self::get`]
    /// for a checked lookup.
    fn element_units(&self, index: usize) -> &[CodeUnit];

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, index: usize) -> Result<TextScalar, ContainerError> {
        if index >= self.len() {
            return Err(ContainerError::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(TextScalar::from_units(self.element_units(index).to_vec()))
    }

    /// Total code units across all elements.
    fn total_units(&self) -> usize {
        (0..self.len()).map(|i| self.element_units(i).len()).sum()
    }

    fn to_texts(&self) -> Vec<TextScalar> {
        (0..self.len())
            .map(|i| TextScalar::from_units(self.element_units(i).to_vec()))
            .collect()
    }
}

/// N text elements, each owning a distinct heap buffer.
///
/// Equality compares content and orientation; the allocation counter is
/// build history, not value.
#[derive(Debug, Clone, Default)]
pub struct BoxedTextArray {
    elements: Vec<TextScalar>,
    orientation: Orientation,
    element_allocations: u64,
}

impl BoxedTextArray {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        BoxedTextArray {
            elements: Vec::with_capacity(capacity),
            orientation: Orientation::Row,
            element_allocations: 0,
        }
    }

    pub fn from_texts(texts: Vec<TextScalar>) -> Self {
        let mut boxed = BoxedTextArray::with_capacity(texts.len());
        for text in texts {
            boxed.push(text);
        }
        boxed
    }

    /// Appends an element, taking ownership of its buffer.
    pub fn push(&mut self, text: TextScalar) {
        if text.capacity_bytes() > 0 {
            self.element_allocations += 1;
        }
        self.elements.push(text);
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn set_orientation(&mut self, orientation: Orientation) {
        self.orientation = orientation;
    }

    /// Element-buffer allocations observed while this array was populated.
    pub fn element_allocations(&self) -> u64 {
        self.element_allocations
    }

    pub fn elements(&self) -> &[TextScalar] {
        &self.elements
    }

    /// In-memory footprint: the struct, the element table, and every
    /// element's own buffer.
    pub(crate) fn held_bytes(&self) -> usize {
        mem::size_of::<Self>()
            + self.elements.capacity() * mem::size_of::<TextScalar>()
            + self
                .elements
                .iter()
                .map(TextScalar::capacity_bytes)
                .sum::<usize>()
    }
}

impl TextCollection for BoxedTextArray {
    fn len(&self) -> usize {
        self.elements.len()
    }

    fn element_units(&self, index: usize) -> &[CodeUnit] {
        self.elements[index].units()
    }
}

const MIN_BUFFER_CAPACITY_UNITS: usize = 8;

/// Text elements packed into one contiguous code-unit buffer plus an offset
/// table with n+1 entries. Element `i` lives at
/// `buffer[offsets[i]..offsets[i + 1]]`.
///
/// Equality compares content and orientation; the reallocation counter is
/// build history, not value.
#[derive(Debug, Clone)]
pub struct UniformStringArray {
    buffer: Vec<CodeUnit>,
    offsets: Vec<usize>,
    orientation: Orientation,
    buffer_reallocations: u64,
}

impl Default for UniformStringArray {
    fn default() -> Self {
        UniformStringArray {
            buffer: Vec::new(),
            offsets: vec![0],
            orientation: Orientation::Row,
            buffer_reallocations: 0,
        }
    }
}

impl UniformStringArray {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_texts(texts: &[TextScalar]) -> Self {
        let mut array = UniformStringArray::new();
        for text in texts {
            array.push(text);
        }
        array.shrink_to_fit();
        array
    }

    /// Appends one element to the contiguous buffer, growing geometrically
    /// when capacity runs out.
    pub fn push(&mut self, text: &TextScalar) {
        self.reserve_units(text.len());
        self.buffer.extend_from_slice(text.units());
        self.offsets.push(self.buffer.len());
        self.debug_check();
    }

    /// Appends `prefix` followed by the decimal digits of `index` without
    /// materializing a temporary element.
    fn push_prefixed_index(&mut self, prefix: &TextScalar, index: u64) {
        let digits = DigitBuffer::format(index);
        self.reserve_units(prefix.len() + digits.units().len());
        self.buffer.extend_from_slice(prefix.units());
        self.buffer.extend_from_slice(digits.units());
        self.offsets.push(self.buffer.len());
        self.debug_check();
    }

    fn reserve_units(&mut self, additional: usize) {
        let needed = self.buffer.len() + additional;
        if needed <= self.buffer.capacity() {
            return;
        }
        // Geometric doubling keeps the reallocation count logarithmic in the
        // final byte size.
        let target = needed
            .max(self.buffer.capacity() * 2)
            .max(MIN_BUFFER_CAPACITY_UNITS);
        self.buffer.reserve_exact(target - self.buffer.len());
        self.buffer_reallocations += 1;
    }

    /// Releases growth slack. Counted as a reallocation when the buffer moves.
    pub fn shrink_to_fit(&mut self) {
        if self.buffer.capacity() > self.buffer.len() {
            self.buffer.shrink_to_fit();
            self.buffer_reallocations += 1;
        }
        self.offsets.shrink_to_fit();
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn set_orientation(&mut self, orientation: Orientation) {
        self.orientation = orientation;
    }

    /// Code-unit buffer reallocations performed while this array was built.
    /// The offset table is excluded; only the character buffer counts.
    pub fn buffer_reallocations(&self) -> u64 {
        self.buffer_reallocations
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn buffer(&self) -> &[CodeUnit] {
        &self.buffer
    }

    pub(crate) fn held_bytes(&self) -> usize {
        mem::size_of::<Self>()
            + self.buffer.capacity() * CodeUnit::BYTES
            + self.offsets.capacity() * mem::size_of::<usize>()
    }

    // O(1): only the tail pair needs checking after a push.
    fn debug_check(&self) {
        debug_assert_eq!(self.offsets.first(), Some(&0));
        debug_assert_eq!(self.offsets.last(), Some(&self.buffer.len()));
        let n = self.offsets.len();
        debug_assert!(n < 2 || self.offsets[n - 2] <= self.offsets[n - 1]);
    }
}

impl TextCollection for UniformStringArray {
    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    fn element_units(&self, index: usize) -> &[CodeUnit] {
        &self.buffer[self.offsets[index]..self.offsets[index + 1]]
    }
}

impl PartialEq for BoxedTextArray {
    fn eq(&self, other: &Self) -> bool {
        self.orientation == other.orientation && content_equals(self, other)
    }
}

impl Eq for BoxedTextArray {}

impl PartialEq for UniformStringArray {
    fn eq(&self, other: &Self) -> bool {
        self.orientation == other.orientation && content_equals(self, other)
    }
}

impl Eq for UniformStringArray {}

/// Stack-formatted decimal digits of a u64.
struct DigitBuffer {
    units: [CodeUnit; 20],
    len: usize,
}

impl DigitBuffer {
    fn format(mut value: u64) -> Self {
        let mut units = [CodeUnit::new(0); 20];
        let mut pos = units.len();
        loop {
            pos -= 1;
            units[pos] = CodeUnit::new(b'0' as u16 + (value % 10) as u16);
            value /= 10;
            if value == 0 {
                break;
            }
        }
        units.copy_within(pos.., 0);
        DigitBuffer {
            units,
            len: 20 - pos,
        }
    }

    fn units(&self) -> &[CodeUnit] {
        &self.units[..self.len]
    }
}

/// Builds `prefix ++ "1"`, `prefix ++ "2"`, ..., `prefix ++ "n"` the boxed
/// way: one fresh element allocation per entry.
pub fn build_boxed_per_element(prefix: &TextScalar, count: usize) -> BoxedTextArray {
    let mut boxed = BoxedTextArray::with_capacity(count);
    for i in 1..=count {
        boxed.push(prefix.concat(&num_to_text(i as f64)));
    }
    boxed
}

/// Builds the same logical content as [`build_boxed_per_element`] by
/// broadcasting `prefix` across the index range and writing every element
/// into one growing contiguous buffer.
pub fn build_uniform_broadcast(
    prefix: &TextScalar,
    range: RangeInclusive<u64>,
) -> UniformStringArray {
    let mut array = UniformStringArray::new();
    for i in range {
        array.push_prefixed_index(prefix, i);
    }
    array.shrink_to_fit();
    array
}

/// Concatenates all elements with `delimiter` between consecutive elements.
pub fn join_all<C: TextCollection + ?Sized>(collection: &C, delimiter: &TextScalar) -> TextScalar {
    let total = collection.total_units() + delimiter.len() * collection.len().saturating_sub(1);
    let mut units = Vec::with_capacity(total);
    for i in 0..collection.len() {
        if i > 0 {
            units.extend_from_slice(delimiter.units());
        }
        units.extend_from_slice(collection.element_units(i));
    }
    TextScalar::from_units(units)
}

/// Deep element-by-element comparison across container kinds.
pub fn content_equals<A, B>(a: &A, b: &B) -> bool
where
    A: TextCollection + ?Sized,
    B: TextCollection + ?Sized,
{
    a.len() == b.len() && (0..a.len()).all(|i| a.element_units(i) == b.element_units(i))
}

/// Repacks a boxed array into one contiguous buffer. Content and orientation
/// are preserved exactly.
pub fn boxed_to_uniform(boxed: &BoxedTextArray) -> UniformStringArray {
    let mut uniform = UniformStringArray::new();
    for element in boxed.elements() {
        uniform.push(element);
    }
    uniform.shrink_to_fit();
    uniform.set_orientation(boxed.orientation());
    uniform
}

/// Explodes a uniform array into independently allocated elements. Content
/// and orientation are preserved exactly.
pub fn uniform_to_boxed(uniform: &UniformStringArray) -> BoxedTextArray {
    let mut boxed = BoxedTextArray::with_capacity(uniform.len());
    for i in 0..uniform.len() {
        boxed.push(TextScalar::from_units(uniform.element_units(i).to_vec()));
    }
    boxed.set_orientation(uniform.orientation());
    boxed
}
