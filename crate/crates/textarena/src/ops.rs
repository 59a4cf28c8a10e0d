//! Vectorized string operations: broadcast `+` concatenation with implicit
//! numeric conversion, bracket concatenation, and delimiter extraction.

use thiserror::Error;

use crate::containers::{TextCollection, UniformStringArray};
use crate::text::{num_to_text, CodeUnit, TextScalar};

/// One operand of a vectorized operation. `Text`/`TextArray` are string-kind
/// values; `CharText` is text tagged as a char vector; numeric operands
/// convert through [`num_to_text`] when concatenated.
#[derive(Debug, Clone, PartialEq)]
pub enum Operand {
    Text(TextScalar),
    TextArray(UniformStringArray),
    Number(f64),
    NumberVector(Vec<f64>),
    CharText(TextScalar),
}

impl Operand {
    pub fn text(s: &str) -> Self {
        Operand::Text(TextScalar::from(s))
    }

    pub fn char_text(s: &str) -> Self {
        Operand::CharText(TextScalar::from(s))
    }

    fn is_string_kind(&self) -> bool {
        matches!(self, Operand::Text(_) | Operand::TextArray(_))
    }

    /// Element count when the operand is vector-shaped.
    fn vector_len(&self) -> Option<usize> {
        match self {
            Operand::TextArray(a) => Some(a.len()),
            Operand::NumberVector(v) => Some(v.len()),
            _ => None,
        }
    }

    /// Textual form of scalar operands.
    fn scalar_text(&self) -> Option<TextScalar> {
        match self {
            Operand::Text(t) | Operand::CharText(t) => Some(t.clone()),
            Operand::Number(n) => Some(num_to_text(*n)),
            _ => None,
        }
    }

    fn element_text(&self, index: usize) -> TextScalar {
        match self {
            Operand::TextArray(a) => a.get(index).expect("index checked by caller"),
            Operand::NumberVector(v) => num_to_text(v[index]),
            _ => self.scalar_text().expect("scalar operand"),
        }
    }
}

impl From<TextScalar> for Operand {
    fn from(t: TextScalar) -> Self {
        Operand::Text(t)
    }
}

impl From<f64> for Operand {
    fn from(n: f64) -> Self {
        Operand::Number(n)
    }
}

impl From<Vec<f64>> for Operand {
    fn from(v: Vec<f64>) -> Self {
        Operand::NumberVector(v)
    }
}

impl From<UniformStringArray> for Operand {
    fn from(a: UniformStringArray) -> Self {
        Operand::TextArray(a)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum OpsError {
    #[error("shape mismatch ({left} vs {right})")]
    ShapeMismatch { left: usize, right: usize },
    #[error(
        "'+' concatenation requires a string operand; char and numeric values alone are arithmetic"
    )]
    NoStringOperand,
    #[error("bracket concatenation requires text; convert numerics first")]
    BracketNeedsText,
    #[error("delimiter must not be empty")]
    EmptyDelimiter,
    #[error("element {element} does not contain the delimiter")]
    DelimiterNotFound { element: usize },
    #[error("'+' chain needs at least one operand")]
    EmptyChain,
}

/// Elementwise `left + right`.
///
/// When at least one side is string-kind, `+` concatenates: numerics and
/// char text convert implicitly, scalars broadcast across vectors, and two
/// vectors must agree on length. When both sides are numeric, `+` stays
/// arithmetic addition. Char text without a string operand is an error; this
/// library does not do arithmetic on character codes.
pub fn plus_broadcast(left: &Operand, right: &Operand) -> Result<Operand, OpsError> {
    if !left.is_string_kind() && !right.is_string_kind() {
        return numeric_plus(left, right);
    }

    match (left.vector_len(), right.vector_len()) {
        (None, None) => {
            let l = left.scalar_text().expect("string-kind scalar");
            let r = right.scalar_text().expect("string-kind scalar");
            Ok(Operand::Text(l.concat(&r)))
        }
        (Some(n), None) | (None, Some(n)) => {
            Ok(Operand::TextArray(concat_elements(left, right, n)))
        }
        (Some(l), Some(r)) => {
            if l != r {
                return Err(OpsError::ShapeMismatch { left: l, right: r });
            }
            Ok(Operand::TextArray(concat_elements(left, right, l)))
        }
    }
}

fn concat_elements(left: &Operand, right: &Operand, len: usize) -> UniformStringArray {
    let mut out = UniformStringArray::new();
    for i in 0..len {
        out.push(&left.element_text(i).concat(&right.element_text(i)));
    }
    out.shrink_to_fit();
    out
}

fn numeric_plus(left: &Operand, right: &Operand) -> Result<Operand, OpsError> {
    let add = |l: f64, r: f64| l + r;
    match (left, right) {
        (Operand::Number(l), Operand::Number(r)) => Ok(Operand::Number(add(*l, *r))),
        (Operand::Number(l), Operand::NumberVector(r)) => Ok(Operand::NumberVector(
            r.iter().map(|v| add(*l, *v)).collect(),
        )),
        (Operand::NumberVector(l), Operand::Number(r)) => Ok(Operand::NumberVector(
            l.iter().map(|v| add(*v, *r)).collect(),
        )),
        (Operand::NumberVector(l), Operand::NumberVector(r)) => {
            if l.len() != r.len() {
                return Err(OpsError::ShapeMismatch {
                    left: l.len(),
                    right: r.len(),
                });
            }
            Ok(Operand::NumberVector(
                l.iter().zip(r).map(|(a, b)| add(*a, *b)).collect(),
            ))
        }
        _ => Err(OpsError::NoStringOperand),
    }
}

/// Left-associative `+` over a chain of operands.
pub fn plus_chain(operands: &[Operand]) -> Result<Operand, OpsError> {
    let (first, rest) = operands.split_first().ok_or(OpsError::EmptyChain)?;
    let mut acc = first.clone();
    for operand in rest {
        acc = plus_broadcast(&acc, operand)?;
    }
    Ok(acc)
}

/// Plain left-to-right concatenation of already-textual parts. Numeric parts
/// are rejected; callers convert them first.
pub fn concat_brackets(parts: &[Operand]) -> Result<TextScalar, OpsError> {
    let mut out = TextScalar::new();
    for part in parts {
        match part {
            Operand::Text(t) | Operand::CharText(t) => out.append(t),
            _ => return Err(OpsError::BracketNeedsText),
        }
    }
    Ok(out)
}

/// Per element, the prefix strictly before the first occurrence of
/// `delimiter`. Every element must contain the delimiter.
pub fn extract_before(
    array: &UniformStringArray,
    delimiter: &TextScalar,
) -> Result<UniformStringArray, OpsError> {
    extract_with(array, delimiter, |units, at, _| &units[..at])
}

/// Per element, the suffix strictly after the first occurrence of
/// `delimiter`.
pub fn extract_after(
    array: &UniformStringArray,
    delimiter: &TextScalar,
) -> Result<UniformStringArray, OpsError> {
    extract_with(array, delimiter, |units, at, len| &units[at + len..])
}

fn extract_with<'a>(
    array: &'a UniformStringArray,
    delimiter: &TextScalar,
    slice: impl Fn(&'a [CodeUnit], usize, usize) -> &'a [CodeUnit],
) -> Result<UniformStringArray, OpsError> {
    if delimiter.is_empty() {
        return Err(OpsError::EmptyDelimiter);
    }
    let mut out = UniformStringArray::new();
    for i in 0..array.len() {
        let element = array.get(i).expect("index in range");
        let at = element
            .find(delimiter)
            .ok_or(OpsError::DelimiterNotFound { element: i + 1 })?;
        out.push(&TextScalar::from_units(
            slice(array.element_units(i), at, delimiter.len()).to_vec(),
        ));
    }
    out.shrink_to_fit();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::containers::UniformStringArray;

    fn array(items: &[&str]) -> UniformStringArray {
        UniformStringArray::from_texts(
            &items
                .iter()
                .map(|s| TextScalar::from(*s))
                .collect::<Vec<_>>(),
        )
    }

    fn as_strings(op: &Operand) -> Vec<String> {
        match op {
            Operand::TextArray(a) => a.to_texts().iter().map(|t| t.to_string()).collect(),
            Operand::Text(t) => vec![t.to_string()],
            other => panic!("expected text result, got {other:?}"),
        }
    }

    #[test]
    fn scalar_broadcasts_across_numeric_vector() {
        let result = plus_broadcast(
            &Operand::text("TestResult"),
            &Operand::NumberVector(vec![1.0, 2.0, 3.0]),
        )
        .unwrap();
        assert_eq!(
            as_strings(&result),
            ["TestResult1", "TestResult2", "TestResult3"]
        );
    }

    #[test]
    fn chain_matches_the_concat_workload() {
        let result = plus_chain(&[
            Operand::Number(1.0),
            Operand::text(" "),
            Operand::char_text("a"),
        ])
        .unwrap();
        assert_eq!(as_strings(&result), ["1 a"]);
    }

    #[test]
    fn empty_plus_empty_is_identity() {
        let result = plus_broadcast(&Operand::text(""), &Operand::text("")).unwrap();
        assert_eq!(result, Operand::Text(TextScalar::new()));
    }

    #[test]
    fn mismatched_vector_lengths_error() {
        let err = plus_broadcast(
            &Operand::NumberVector(vec![1.0, 2.0]),
            &Operand::TextArray(array(&["a", "b", "c"])),
        )
        .unwrap_err();
        assert_eq!(err, OpsError::ShapeMismatch { left: 2, right: 3 });
        assert_eq!(err.to_string(), "shape mismatch (2 vs 3)");
    }

    #[test]
    fn numeric_plus_is_arithmetic() {
        assert_eq!(
            plus_broadcast(&Operand::Number(1.0), &Operand::Number(2.0)).unwrap(),
            Operand::Number(3.0)
        );
        assert_eq!(
            plus_broadcast(
                &Operand::Number(1.0),
                &Operand::NumberVector(vec![1.0, 2.0])
            )
            .unwrap(),
            Operand::NumberVector(vec![2.0, 3.0])
        );
        // 1 + 2 + "a": arithmetic first, then concatenation.
        let chained = plus_chain(&[
            Operand::Number(1.0),
            Operand::Number(2.0),
            Operand::text("a"),
        ])
        .unwrap();
        assert_eq!(as_strings(&chained), ["3a"]);
    }

    #[test]
    fn char_without_string_is_rejected() {
        let err = plus_broadcast(&Operand::Number(1.0), &Operand::char_text("a")).unwrap_err();
        assert_eq!(err, OpsError::NoStringOperand);
    }

    #[test]
    fn vector_vector_concatenation() {
        let result = plus_broadcast(
            &Operand::TextArray(array(&["a", "b"])),
            &Operand::TextArray(array(&["1", "2"])),
        )
        .unwrap();
        assert_eq!(as_strings(&result), ["a1", "b2"]);
    }

    #[test]
    fn plus_is_associative_on_text_scalars() {
        let samples = ["", "a", "xy", "hello world"];
        for a in samples {
            for b in samples {
                for c in samples {
                    let left = plus_broadcast(
                        &plus_broadcast(&Operand::text(a), &Operand::text(b)).unwrap(),
                        &Operand::text(c),
                    )
                    .unwrap();
                    let right = plus_broadcast(
                        &Operand::text(a),
                        &plus_broadcast(&Operand::text(b), &Operand::text(c)).unwrap(),
                    )
                    .unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn brackets_concatenate_textual_parts() {
        let result = concat_brackets(&[
            Operand::CharText(num_to_text(1.0)),
            Operand::char_text(" "),
            Operand::char_text("a"),
        ])
        .unwrap();
        assert_eq!(result.to_string(), "1 a");

        let greeting =
            concat_brackets(&[Operand::char_text("hello, "), Operand::char_text("world")]).unwrap();
        assert_eq!(greeting.to_string(), "hello, world");

        assert_eq!(concat_brackets(&[]).unwrap(), TextScalar::new());
    }

    #[test]
    fn brackets_reject_numerics() {
        let err = concat_brackets(&[Operand::Number(1.0)]).unwrap_err();
        assert_eq!(err, OpsError::BracketNeedsText);
        assert_eq!(
            err.to_string(),
            "bracket concatenation requires text; convert numerics first"
        );
    }

    #[test]
    fn extract_before_returns_prefixes() {
        let images = array(&["10_img.jpg", "11_img.jpg"]);
        let numbers = extract_before(&images, &TextScalar::from("_")).unwrap();
        assert_eq!(
            numbers
                .to_texts()
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>(),
            ["10", "11"]
        );
    }

    #[test]
    fn extract_boundary_cases() {
        let leading = extract_before(&array(&["_x"]), &TextScalar::from("_")).unwrap();
        assert_eq!(leading.get(0).unwrap(), TextScalar::new());

        let trailing = extract_after(&array(&["x_"]), &TextScalar::from("_")).unwrap();
        assert_eq!(trailing.get(0).unwrap(), TextScalar::new());

        let after = extract_after(&array(&["10_img.jpg"]), &TextScalar::from("_")).unwrap();
        assert_eq!(after.get(0).unwrap().to_string(), "img.jpg");
    }

    #[test]
    fn extraction_names_the_offending_element() {
        let err = extract_before(&array(&["abc"]), &TextScalar::from("z")).unwrap_err();
        assert_eq!(err, OpsError::DelimiterNotFound { element: 1 });

        let err = extract_after(&array(&["a_b", "nope"]), &TextScalar::from("_")).unwrap_err();
        assert_eq!(err, OpsError::DelimiterNotFound { element: 2 });

        let err = extract_before(&array(&["abc"]), &TextScalar::new()).unwrap_err();
        assert_eq!(err, OpsError::EmptyDelimiter);
    }

    #[test]
    fn extraction_parts_reconstruct_single_occurrence_elements() {
        let delim = TextScalar::from("_");
        let source = array(&["10_img.jpg", "a_b", "_tail", "head_"]);
        let before = extract_before(&source, &delim).unwrap();
        let after = extract_after(&source, &delim).unwrap();
        for i in 0..source.len() {
            let rebuilt = before
                .get(i)
                .unwrap()
                .concat(&delim)
                .concat(&after.get(i).unwrap());
            assert_eq!(rebuilt, source.get(i).unwrap());
        }
    }
}
