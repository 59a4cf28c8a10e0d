//! printf-family format strings: parsing and rendering.
//!
//! The grammar is the classic `%[flags][width][.precision]conversion` with
//! `%%` as the escape. Rendering follows C printf semantics for numeric
//! conversions but is stricter about argument types: handing a non-integral
//! value to `%d`, or text to a numeric conversion, is reported as an error
//! instead of producing surprise output.

mod render;

pub use render::{render, sprintf, FormatArg, FormatError, RenderError};

use thiserror::Error;

use crate::text::{CodeUnit, TextScalar};

/// Upper bound for parsed widths and precisions.
pub const MAX_WIDTH_OR_PRECISION: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("dangling '%' at end of format string")]
    DanglingPercent,
    #[error("unknown conversion character '{0}'")]
    UnknownConversion(char),
    #[error("width exceeds {MAX_WIDTH_OR_PRECISION}")]
    WidthOverflow,
    #[error("precision exceeds {MAX_WIDTH_OR_PRECISION}")]
    PrecisionOverflow,
}

/// Flag characters accepted between '%' and the width.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Flags {
    pub minus: bool,
    pub plus: bool,
    pub space: bool,
    pub zero: bool,
    pub hash: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conversion {
    /// `d` and `i`.
    Decimal,
    /// `u`. Negative arguments are an error, not wraparound.
    Unsigned,
    /// `f`.
    Fixed,
    /// `e`.
    Scientific,
    /// `E`.
    ScientificUpper,
    /// `g`: shortest of fixed/exponential, default precision 6.
    General,
    /// `G`.
    GeneralUpper,
    /// `x`.
    HexLower,
    /// `X`.
    HexUpper,
    /// `o`.
    Octal,
    /// `s`.
    Str,
    /// `c`: one code unit, or an integer code point.
    Char,
}

impl Conversion {
    pub fn symbol(self) -> char {
        match self {
            Conversion::Decimal => 'd',
            Conversion::Unsigned => 'u',
            Conversion::Fixed => 'f',
            Conversion::Scientific => 'e',
            Conversion::ScientificUpper => 'E',
            Conversion::General => 'g',
            Conversion::GeneralUpper => 'G',
            Conversion::HexLower => 'x',
            Conversion::HexUpper => 'X',
            Conversion::Octal => 'o',
            Conversion::Str => 's',
            Conversion::Char => 'c',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        Some(match c {
            'd' | 'i' => Conversion::Decimal,
            'u' => Conversion::Unsigned,
            'f' => Conversion::Fixed,
            'e' => Conversion::Scientific,
            'E' => Conversion::ScientificUpper,
            'g' => Conversion::General,
            'G' => Conversion::GeneralUpper,
            'x' => Conversion::HexLower,
            'X' => Conversion::HexUpper,
            'o' => Conversion::Octal,
            's' => Conversion::Str,
            'c' => Conversion::Char,
            _ => return None,
        })
    }
}

/// One placeholder: flags, optional width, optional precision, conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConversionSpec {
    pub flags: Flags,
    pub width: Option<usize>,
    pub precision: Option<usize>,
    pub conversion: Conversion,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatToken {
    Literal(TextScalar),
    Spec(ConversionSpec),
}

/// A parsed format string: an ordered token sequence whose arity is the
/// number of conversion specs (escaped `%%` does not count).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatString {
    tokens: Vec<FormatToken>,
}

impl FormatString {
    pub fn tokens(&self) -> &[FormatToken] {
        &self.tokens
    }

    pub fn arity(&self) -> usize {
        self.tokens
            .iter()
            .filter(|t| matches!(t, FormatToken::Spec(_)))
            .count()
    }
}

const PERCENT: u16 = b'%' as u16;

/// Single-pass tokenization of `source`.
pub fn parse_format(source: &TextScalar) -> Result<FormatString, ParseError> {
    let units = source.units();
    let mut tokens = Vec::new();
    let mut literal: Vec<CodeUnit> = Vec::new();
    let mut i = 0;

    let flush = |literal: &mut Vec<CodeUnit>, tokens: &mut Vec<FormatToken>| {
        if !literal.is_empty() {
            tokens.push(FormatToken::Literal(TextScalar::from_units(
                std::mem::take(literal),
            )));
        }
    };

    while i < units.len() {
        if units[i].value() != PERCENT {
            literal.push(units[i]);
            i += 1;
            continue;
        }
        if i + 1 >= units.len() {
            return Err(ParseError::DanglingPercent);
        }
        flush(&mut literal, &mut tokens);
        if units[i + 1].value() == PERCENT {
            tokens.push(FormatToken::Literal(TextScalar::from("%")));
            i += 2;
            continue;
        }
        i += 1;

        let mut flags = Flags::default();
        loop {
            match units.get(i).map(|u| u.value()) {
                Some(v) if v == b'-' as u16 => flags.minus = true,
                Some(v) if v == b'+' as u16 => flags.plus = true,
                Some(v) if v == b' ' as u16 => flags.space = true,
                Some(v) if v == b'0' as u16 => flags.zero = true,
                Some(v) if v == b'#' as u16 => flags.hash = true,
                _ => break,
            }
            i += 1;
        }

        let width = parse_number(units, &mut i, ParseError::WidthOverflow)?;
        let precision = if units.get(i).map(|u| u.value()) == Some(b'.' as u16) {
            i += 1;
            // A bare '.' means precision zero.
            Some(parse_number(units, &mut i, ParseError::PrecisionOverflow)?.unwrap_or(0))
        } else {
            None
        };

        let unit = *units.get(i).ok_or(ParseError::DanglingPercent)?;
        i += 1;
        let symbol = char::from_u32(unit.value() as u32).unwrap_or(char::REPLACEMENT_CHARACTER);
        let conversion =
            Conversion::from_symbol(symbol).ok_or(ParseError::UnknownConversion(symbol))?;
        tokens.push(FormatToken::Spec(ConversionSpec {
            flags,
            width,
            precision,
            conversion,
        }));
    }

    flush(&mut literal, &mut tokens);
    Ok(FormatString { tokens })
}

fn parse_number(
    units: &[CodeUnit],
    i: &mut usize,
    overflow: ParseError,
) -> Result<Option<usize>, ParseError> {
    let mut value: Option<usize> = None;
    while let Some(unit) = units.get(*i) {
        let v = unit.value();
        if !(b'0' as u16..=b'9' as u16).contains(&v) {
            break;
        }
        let digit = (v - b'0' as u16) as usize;
        let next = value.unwrap_or(0) * 10 + digit;
        if next > MAX_WIDTH_OR_PRECISION {
            return Err(overflow);
        }
        value = Some(next);
        *i += 1;
    }
    Ok(value)
}
