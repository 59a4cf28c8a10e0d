//! Rendering of parsed format strings.
//!
//! Digit generation for floats leans on the standard library's exact decimal
//! conversion (correctly rounded, ties to even, same as the C library's), so
//! fixed/scientific/general output is byte-compatible with C printf for
//! finite doubles. Everything around the digits - signs, alternate forms,
//! zero padding, width - is assembled here.

use thiserror::Error;

use super::{parse_format, Conversion, ConversionSpec, FormatString, FormatToken, ParseError};
use crate::text::{CodeUnit, TextScalar};

/// An argument bound to one conversion spec.
#[derive(Debug, Clone, PartialEq)]
pub enum FormatArg {
    Int(i64),
    Float(f64),
    Text(TextScalar),
}

impl FormatArg {
    fn description(&self) -> &'static str {
        match self {
            FormatArg::Int(_) => "an integer",
            FormatArg::Float(_) => "a double",
            FormatArg::Text(_) => "text",
        }
    }
}

impl From<i64> for FormatArg {
    fn from(v: i64) -> Self {
        FormatArg::Int(v)
    }
}

impl From<f64> for FormatArg {
    fn from(v: f64) -> Self {
        FormatArg::Float(v)
    }
}

impl From<&str> for FormatArg {
    fn from(v: &str) -> Self {
        FormatArg::Text(TextScalar::from(v))
    }
}

impl From<TextScalar> for FormatArg {
    fn from(v: TextScalar) -> Self {
        FormatArg::Text(v)
    }
}

impl From<char> for FormatArg {
    fn from(v: char) -> Self {
        FormatArg::Text(TextScalar::from(v))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("arity mismatch: format expects {expected} arguments, {given} given")]
    ArityMismatch { expected: usize, given: usize },
    #[error(
        "type mismatch at argument {position}: conversion '{conversion}' requires {requirement}, got {found}"
    )]
    TypeMismatch {
        position: usize,
        conversion: char,
        requirement: &'static str,
        found: &'static str,
    },
    #[error("argument {position} is negative: conversion '{conversion}' takes nonnegative values")]
    NegativeUnsigned { position: usize, conversion: char },
    #[error("argument {position} is not a valid code point for conversion 'c'")]
    InvalidCodePoint { position: usize },
}

/// Parse-or-render error from the one-shot [`sprintf`].
#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Render(#[from] RenderError),
}

/// Substitutes `args` into `format` left to right.
pub fn render(format: &FormatString, args: &[FormatArg]) -> Result<TextScalar, RenderError> {
    let expected = format.arity();
    if args.len() != expected {
        return Err(RenderError::ArityMismatch {
            expected,
            given: args.len(),
        });
    }

    let mut out: Vec<CodeUnit> = Vec::new();
    let mut next_arg = 0usize;
    for token in format.tokens() {
        match token {
            FormatToken::Literal(text) => out.extend_from_slice(text.units()),
            FormatToken::Spec(spec) => {
                next_arg += 1;
                render_spec(spec, &args[next_arg - 1], next_arg, &mut out)?;
            }
        }
    }
    Ok(TextScalar::from_units(out))
}

/// Parses `source` and renders `args` in one call.
pub fn sprintf(source: &TextScalar, args: &[FormatArg]) -> Result<TextScalar, FormatError> {
    Ok(render(&parse_format(source)?, args)?)
}

fn render_spec(
    spec: &ConversionSpec,
    arg: &FormatArg,
    position: usize,
    out: &mut Vec<CodeUnit>,
) -> Result<(), RenderError> {
    match spec.conversion {
        Conversion::Decimal
        | Conversion::Unsigned
        | Conversion::HexLower
        | Conversion::HexUpper
        | Conversion::Octal => {
            let value = integer_argument(spec, arg, position)?;
            push_ascii(out, &format_integer(value, spec));
            Ok(())
        }
        Conversion::Fixed
        | Conversion::Scientific
        | Conversion::ScientificUpper
        | Conversion::General
        | Conversion::GeneralUpper => {
            let value = float_argument(spec, arg, position)?;
            push_ascii(out, &format_float(value, spec));
            Ok(())
        }
        Conversion::Str => {
            let text = match arg {
                FormatArg::Text(t) => t,
                other => {
                    return Err(RenderError::TypeMismatch {
                        position,
                        conversion: 's',
                        requirement: "text",
                        found: other.description(),
                    })
                }
            };
            let shown = match spec.precision {
                Some(p) if p < text.len() => &text.units()[..p],
                _ => text.units(),
            };
            push_padded_units(out, shown, spec);
            Ok(())
        }
        Conversion::Char => {
            let units = char_argument(arg, position)?;
            push_padded_units(out, &units, spec);
            Ok(())
        }
    }
}

fn integer_argument(
    spec: &ConversionSpec,
    arg: &FormatArg,
    position: usize,
) -> Result<i64, RenderError> {
    let symbol = spec.conversion.symbol();
    let value = match arg {
        FormatArg::Int(v) => *v,
        FormatArg::Float(f) if f.is_finite() && f.fract() == 0.0 && in_i64_range(*f) => *f as i64,
        other => {
            return Err(RenderError::TypeMismatch {
                position,
                conversion: symbol,
                requirement: "an integer-valued number",
                found: other.description(),
            })
        }
    };
    if value < 0 && spec.conversion != Conversion::Decimal {
        return Err(RenderError::NegativeUnsigned {
            position,
            conversion: symbol,
        });
    }
    Ok(value)
}

fn in_i64_range(f: f64) -> bool {
    // Exact bounds: -(2^63) is representable, 2^63 is the first excluded value.
    (-9_223_372_036_854_775_808.0..9_223_372_036_854_775_808.0).contains(&f)
}

fn float_argument(
    spec: &ConversionSpec,
    arg: &FormatArg,
    position: usize,
) -> Result<f64, RenderError> {
    match arg {
        FormatArg::Float(f) => Ok(*f),
        FormatArg::Int(v) => Ok(*v as f64),
        other => Err(RenderError::TypeMismatch {
            position,
            conversion: spec.conversion.symbol(),
            requirement: "a number",
            found: other.description(),
        }),
    }
}

fn char_argument(arg: &FormatArg, position: usize) -> Result<Vec<CodeUnit>, RenderError> {
    match arg {
        FormatArg::Text(t) if t.len() == 1 => Ok(t.units().to_vec()),
        FormatArg::Text(other) => Err(RenderError::TypeMismatch {
            position,
            conversion: 'c',
            requirement: "a single character",
            found: if other.is_empty() {
                "empty text"
            } else {
                "longer text"
            },
        }),
        FormatArg::Int(v) => {
            let c = u32::try_from(*v)
                .ok()
                .and_then(char::from_u32)
                .ok_or(RenderError::InvalidCodePoint { position })?;
            Ok(TextScalar::from(c).units().to_vec())
        }
        FormatArg::Float(_) => Err(RenderError::TypeMismatch {
            position,
            conversion: 'c',
            requirement: "a single character",
            found: "a double",
        }),
    }
}

/// Sign, alternate-form prefix, precision zero-padding, then width.
fn format_integer(value: i64, spec: &ConversionSpec) -> String {
    let magnitude = value.unsigned_abs();
    let mut digits = match spec.conversion {
        Conversion::Decimal | Conversion::Unsigned => magnitude.to_string(),
        Conversion::HexLower => format!("{magnitude:x}"),
        Conversion::HexUpper => format!("{magnitude:X}"),
        Conversion::Octal => format!("{magnitude:o}"),
        _ => unreachable!("integer conversion"),
    };

    if let Some(p) = spec.precision {
        if p == 0 && magnitude == 0 {
            digits.clear();
        } else if digits.len() < p {
            digits = "0".repeat(p - digits.len()) + &digits;
        }
    }

    let mut head = String::new();
    if value < 0 {
        head.push('-');
    } else if spec.conversion == Conversion::Decimal {
        // '+' and ' ' apply to signed conversions only.
        if spec.flags.plus {
            head.push('+');
        } else if spec.flags.space {
            head.push(' ');
        }
    }
    if spec.flags.hash {
        match spec.conversion {
            Conversion::HexLower if magnitude != 0 => head.push_str("0x"),
            Conversion::HexUpper if magnitude != 0 => head.push_str("0X"),
            // Alternate octal guarantees a leading zero digit.
            Conversion::Octal if !digits.starts_with('0') => digits.insert(0, '0'),
            _ => {}
        }
    }

    // The zero flag is ignored for integers once a precision is given.
    let zero_pad = spec.flags.zero && spec.precision.is_none();
    assemble(&head, &digits, spec, zero_pad)
}

fn format_float(value: f64, spec: &ConversionSpec) -> String {
    let precision = spec.precision.unwrap_or(6);
    let rendered = if value.is_finite() {
        match spec.conversion {
            Conversion::Fixed => fixed_digits(value, precision, spec.flags.hash),
            Conversion::Scientific => exponential_digits(value, precision, spec.flags.hash, false),
            Conversion::ScientificUpper => {
                exponential_digits(value, precision, spec.flags.hash, true)
            }
            Conversion::General => general_digits(value, precision, spec.flags.hash, false),
            Conversion::GeneralUpper => general_digits(value, precision, spec.flags.hash, true),
            _ => unreachable!("float conversion"),
        }
    } else {
        non_finite_digits(value, spec.conversion)
    };

    let (negative, body) = match rendered.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, rendered),
    };
    let mut head = String::new();
    if negative {
        head.push('-');
    } else if spec.flags.plus {
        head.push('+');
    } else if spec.flags.space {
        head.push(' ');
    }

    // Zero padding never applies to inf/nan.
    let zero_pad = spec.flags.zero && value.is_finite();
    assemble(&head, &body, spec, zero_pad)
}

/// `%f` body (sign included by the std formatter).
fn fixed_digits(value: f64, precision: usize, alternate: bool) -> String {
    let mut s = format!("{value:.precision$}");
    if alternate && precision == 0 {
        s.push('.');
    }
    s
}

/// `%e` body: reshape std's `dEn` exponent into `d.dde+NN`.
fn exponential_digits(value: f64, precision: usize, alternate: bool, upper: bool) -> String {
    let formatted = format!("{value:.precision$e}");
    let (mantissa, exponent) = formatted
        .split_once('e')
        .expect("std exponential format always contains 'e'");
    let mut out = String::with_capacity(formatted.len() + 3);
    out.push_str(mantissa);
    if alternate && precision == 0 {
        out.push('.');
    }
    out.push(if upper { 'E' } else { 'e' });
    let (sign, digits) = match exponent.strip_prefix('-') {
        Some(rest) => ('-', rest),
        None => ('+', exponent),
    };
    out.push(sign);
    if digits.len() < 2 {
        out.push('0');
    }
    out.push_str(digits);
    out
}

/// `%g`: pick fixed or exponential from the decimal exponent after rounding
/// to the significant precision, then drop trailing fraction zeros unless
/// the alternate flag keeps them.
fn general_digits(value: f64, precision: usize, alternate: bool, upper: bool) -> String {
    let significant = precision.max(1);
    let exponent = if value == 0.0 {
        0
    } else {
        decimal_exponent(value, significant - 1)
    };

    let mut s = if exponent >= -4 && exponent < significant as i64 {
        let fixed_precision = (significant as i64 - 1 - exponent) as usize;
        fixed_digits(value, fixed_precision, false)
    } else {
        exponential_digits(value, significant - 1, false, upper)
    };

    if alternate {
        ensure_point(&mut s);
    } else {
        strip_trailing_fraction_zeros(&mut s);
    }
    s
}

/// Exponent of `value` once rounded to `mantissa_precision` fraction digits
/// of scientific notation. Read back from the std formatter so rounding that
/// carries into the next decade (9.99... -> 1e+1) is accounted for.
fn decimal_exponent(value: f64, mantissa_precision: usize) -> i64 {
    let formatted = format!("{value:.mantissa_precision$e}");
    let (_, exponent) = formatted
        .split_once('e')
        .expect("std exponential format always contains 'e'");
    exponent.parse().expect("std exponent is an integer")
}

fn ensure_point(s: &mut String) {
    let mantissa_end = s.find(['e', 'E']).unwrap_or(s.len());
    if !s[..mantissa_end].contains('.') {
        s.insert(mantissa_end, '.');
    }
}

fn strip_trailing_fraction_zeros(s: &mut String) {
    let mantissa_end = s.find(['e', 'E']).unwrap_or(s.len());
    if !s[..mantissa_end].contains('.') {
        return;
    }
    let tail = s.split_off(mantissa_end);
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    s.push_str(&tail);
}

fn non_finite_digits(value: f64, conversion: Conversion) -> String {
    let upper = matches!(
        conversion,
        Conversion::ScientificUpper | Conversion::GeneralUpper
    );
    let body = if value.is_nan() {
        if upper {
            "NAN"
        } else {
            "nan"
        }
    } else if value < 0.0 {
        if upper {
            "-INF"
        } else {
            "-inf"
        }
    } else if upper {
        "INF"
    } else {
        "inf"
    };
    body.to_string()
}

/// Width assembly: `head` is sign plus any base prefix, `body` the digits.
fn assemble(head: &str, body: &str, spec: &ConversionSpec, zero_pad: bool) -> String {
    let width = spec.width.unwrap_or(0);
    let content = head.len() + body.len();
    if content >= width {
        return format!("{head}{body}");
    }
    let pad = width - content;
    if spec.flags.minus {
        format!("{head}{body}{}", " ".repeat(pad))
    } else if zero_pad {
        format!("{head}{}{body}", "0".repeat(pad))
    } else {
        format!("{}{head}{body}", " ".repeat(pad))
    }
}

fn push_ascii(out: &mut Vec<CodeUnit>, s: &str) {
    debug_assert!(s.is_ascii());
    out.extend(s.bytes().map(|b| CodeUnit::new(b as u16)));
}

/// Space-padded unit output for `%s` and `%c` (the zero flag does not apply).
fn push_padded_units(out: &mut Vec<CodeUnit>, units: &[CodeUnit], spec: &ConversionSpec) {
    let width = spec.width.unwrap_or(0);
    let pad = width.saturating_sub(units.len());
    if spec.flags.minus {
        out.extend_from_slice(units);
        out.extend(std::iter::repeat_n(CodeUnit::SPACE, pad));
    } else {
        out.extend(std::iter::repeat_n(CodeUnit::SPACE, pad));
        out.extend_from_slice(units);
    }
}
