//! Text format for user-supplied coefficients.
//!
//! One `k,p/q` entry per line, indices strictly increasing, missing indices
//! are zero. Lines starting with `#` are comments and empty lines are
//! skipped. Input must be UTF-8 with LF line endings.

use std::collections::BTreeMap;

use crate::exact::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, byte {offset}: {kind}")]
pub struct SeriesFileError {
    pub line: usize,
    /// Byte offset into the whole input.
    pub offset: usize,
    pub kind: SeriesFileErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesFileErrorKind {
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("carriage return found; line endings must be LF")]
    CarriageReturn,
    #[error("expected `k,p/q`")]
    MissingComma,
    #[error("index must be a non-negative decimal integer")]
    BadIndex,
    #[error("bad coefficient: {0}")]
    BadCoefficient(ParseRationalError),
    #[error("index {got} does not increase on previous index {previous}")]
    NonIncreasingIndex { previous: u64, got: u64 },
}

/// Sparse coefficient table read from a series file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeriesCoefficients {
    entries: BTreeMap<u64, Rational>,
}

impl SeriesCoefficients {
    pub fn get(&self, k: u64) -> Rational {
        self.entries.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Highest listed index.
    pub fn max_index(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    /// Renders back into the file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

pub fn parse_series_bytes(bytes: &[u8]) -> Result<SeriesCoefficients, SeriesFileError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_series_file(text),
        Err(e) => {
            let offset = e.valid_up_to();
            let line = bytes[..offset].iter().filter(|&&b| b == b'\n').count() + 1;
            Err(SeriesFileError {
                line,
                offset,
                kind: SeriesFileErrorKind::InvalidUtf8,
            })
        }
    }
}

pub fn parse_series_file(text: &str) -> Result<SeriesCoefficients, SeriesFileError> {
    let mut entries = BTreeMap::new();
    let mut previous: Option<u64> = None;
    let mut line_start = 0usize;
    for (idx, line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let err = |offset: usize, kind| SeriesFileError {
            line: line_no,
            offset: line_start + offset,
            kind,
        };
        if let Some(pos) = line.find('\r') {
            return Err(err(pos, SeriesFileErrorKind::CarriageReturn));
        }
        if line.is_empty() || line.starts_with('#') {
            line_start += line.len() + 1;
            continue;
        }
        let Some(comma) = line.find(',') else {
            return Err(err(line.len(), SeriesFileErrorKind::MissingComma));
        };
        let (index_text, coeff_text) = (&line[..comma], &line[comma + 1..]);
        if index_text.is_empty() || !index_text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(0, SeriesFileErrorKind::BadIndex));
        }
        let k: u64 = index_text
            .parse()
            .map_err(|_| err(0, SeriesFileErrorKind::BadIndex))?;
        let value: Rational = coeff_text.parse().map_err(|e| {
            let at = match &e {
                ParseRationalError::InvalidDigit(i) => comma + 1 + i,
                _ => comma + 1,
            };
            err(at, SeriesFileErrorKind::BadCoefficient(e))
        })?;
        if let Some(prev) = previous {
            if k <= prev {
                return Err(err(
                    0,
                    SeriesFileErrorKind::NonIncreasingIndex {
                        previous: prev,
                        got: k,
                    },
                ));
            }
        }
        previous = Some(k);
        if !value.is_zero() {
            entries.insert(k, value);
        }
        line_start += line.len() + 1;
    }
    Ok(SeriesCoefficients { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_gaps() {
        let text = "# exp truncated\n0,1\n1,1\n3,1/6\n\n10,-2/4\n";
        let c = parse_series_file(text).unwrap();
        assert_eq!(c.get(0), Rational::one());
        assert_eq!(c.get(2), Rational::zero());
        assert_eq!(c.get(3), Rational::new(1, 6));
        assert_eq!(c.get(10), Rational::new(-1, 2));
        assert_eq!(c.max_index(), Some(10));
        assert_eq!(c.to_file_string(), "0,1\n1,1\n3,1/6\n10,-1/2\n");
    }

    #[test]
    fn empty_input_is_the_zero_series() {
        assert!(parse_series_file("").unwrap().is_empty());
        assert!(parse_series_file("# nothing\n").unwrap().is_empty());
    }

    #[test]
    fn rejects_non_increasing_indices() {
        let e = parse_series_file("1,1\n1,2\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.offset, 4);
        assert_eq!(
            e.kind,
            SeriesFileErrorKind::NonIncreasingIndex {
                previous: 1,
                got: 1
            }
        );
    }

    #[test]
    fn positioned_errors() {
        let e = parse_series_file("0,1\n1;2\n").unwrap_err();
        assert_eq!(
            (e.line, e.kind.clone()),
            (2, SeriesFileErrorKind::MissingComma)
        );
        let e = parse_series_file("-1,2\n").unwrap_err();
        assert_eq!(e.kind, SeriesFileErrorKind::BadIndex);
        let e = parse_series_file("0,1/x\n").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(matches!(e.kind, SeriesFileErrorKind::BadCoefficient(_)));
        let e = parse_series_file("0,1/0\n").unwrap_err();
        assert_eq!(
            e.kind,
            SeriesFileErrorKind::BadCoefficient(ParseRationalError::ZeroDenominator)
        );
        let e = parse_series_file("0,1\r\n").unwrap_err();
        assert_eq!((e.offset, e.kind), (3, SeriesFileErrorKind::CarriageReturn));
        let e = parse_series_file("99999999999999999999999,1\n").unwrap_err();
        assert_eq!(e.kind, SeriesFileErrorKind::BadIndex);
    }

    #[test]
    fn invalid_utf8_is_reported() {
        let e = parse_series_bytes(b"0,1\n\xff").unwrap_err();
        assert_eq!(
            (e.line, e.offset, e.kind),
            (2, 4, SeriesFileErrorKind::InvalidUtf8)
        );
    }
}
