//! Plain-text matrix file format for problem interchange.
//!
//! A file carries one `K` matrix together with the split point `n` that
//! partitions it into the four Riccati blocks:
//!
//! ```text
//! mare 1
//! 2 2
//! 2 -1 0 -1
//! -1 2 0 -1
//! 0 0 2 -1
//! 0 -1 -1 2
//! ```
//!
//! The first significant line is the literal header `mare 1`, the second
//! holds the block dimensions `n m`, and the remaining lines carry the
//! `(n + m)^2` entries of `K` in row-major order, whitespace-separated
//! with no significance to line breaks. Lines starting with `#` and blank
//! lines are ignored anywhere. Numbers render in shortest round-trip
//! decimal form, so a write followed by a read reproduces every entry
//! exactly (negative zero normalizes to zero).

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::matrix::DenseMatrix;
use crate::riccati::{RiccatiError, RiccatiProblem};

/// A parsed or to-be-written matrix file: the matrix `K` and the leading
/// block size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub k: DenseMatrix,
    pub n: usize,
}

/// Parse failures, each pointing at the offending 1-based line.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: expected header \"mare 1\", found {found:?}")]
    BadHeader { line: usize, found: String },
    #[error("line {line}: expected dimensions \"n m\", found {found:?}")]
    BadDimensions { line: usize, found: String },
    #[error("line {line}: dimensions give an empty matrix")]
    EmptyMatrix { line: usize },
    #[error("line {line}: invalid matrix entry {token:?}")]
    BadEntry { line: usize, token: String },
    #[error("line {line}: expected {expected} matrix entries, found more")]
    TooManyEntries { line: usize, expected: usize },
    #[error("line {line}: expected {expected} matrix entries, found {found}")]
    TooFewEntries {
        line: usize,
        expected: usize,
        found: usize,
    },
}

/// Errors from reading or writing files on disk.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
}

impl MatrixFile {
    /// Wraps a square matrix with its split point.
    pub fn new(k: DenseMatrix, n: usize) -> Self {
        assert!(k.is_square(), "K must be square");
        assert!(n <= k.rows(), "split point exceeds the order of K");
        Self { k, n }
    }

    /// Captures a problem's `K` and split point.
    pub fn from_problem(p: &RiccatiProblem) -> Self {
        Self::new(p.k(), p.n())
    }

    /// Splits the stored matrix into a problem.
    pub fn to_problem(&self) -> Result<RiccatiProblem, RiccatiError> {
        RiccatiProblem::from_k(&self.k, self.n)
    }

    /// Parses the file grammar from text.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut significant = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let last_line = text.lines().count().max(1);

        let (line, header) = significant.next().unwrap_or((last_line, ""));
        if header.split_whitespace().collect::<Vec<_>>() != ["mare", "1"] {
            return Err(ParseError::BadHeader {
                line,
                found: header.to_string(),
            });
        }

        let (line, dims) = significant.next().unwrap_or((last_line, ""));
        let parts: Vec<&str> = dims.split_whitespace().collect();
        let (n, m) = match parts.as_slice() {
            [a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
                (Ok(n), Ok(m)) => (n, m),
                _ => {
                    return Err(ParseError::BadDimensions {
                        line,
                        found: dims.to_string(),
                    })
                }
            },
            _ => {
                return Err(ParseError::BadDimensions {
                    line,
                    found: dims.to_string(),
                })
            }
        };
        let total = n + m;
        if total == 0 {
            return Err(ParseError::EmptyMatrix { line });
        }

        let expected = total * total;
        let mut entries = Vec::with_capacity(expected);
        for (line, text) in significant {
            for token in text.split_whitespace() {
                if entries.len() == expected {
                    return Err(ParseError::TooManyEntries { line, expected });
                }
                let value: f64 = token.parse().map_err(|_| ParseError::BadEntry {
                    line,
                    token: token.to_string(),
                })?;
                entries.push(value);
            }
        }
        if entries.len() < expected {
            return Err(ParseError::TooFewEntries {
                line: last_line,
                expected,
                found: entries.len(),
            });
        }

        let mut k = DenseMatrix::zeros(total, total);
        for i in 0..total {
            for j in 0..total {
                k[(i, j)] = entries[i * total + j];
            }
        }
        Ok(Self { k, n })
    }

    /// Renders the file grammar, one matrix row per line.
    pub fn render(&self) -> String {
        let total = self.k.rows();
        let m = total - self.n;
        let mut out = String::new();
        out.push_str("mare 1\n");
        let _ = writeln!(out, "{} {}", self.n, m);
        for i in 0..total {
            for j in 0..total {
                if j > 0 {
                    out.push(' ');
                }
                let entry = self.k[(i, j)];
                let entry = if entry == 0.0 { 0.0 } else { entry };
                let _ = write!(out, "{entry}");
            }
            out.push('\n');
        }
        out
    }

    /// Reads and parses a file from disk.
    pub fn read(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text).map_err(|source| FileError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    /// Writes the rendered file to disk.
    pub fn write(&self, path: &Path) -> Result<(), FileError> {
        std::fs::write(path, self.render()).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, random_generator_k, FixtureId, GenCategory, GenSpec};

    #[test]
    fn renders_the_documented_layout() {
        let f = fixture(FixtureId::Ex1);
        let rendered = MatrixFile::from_problem(&f.problem).render();
        let lines: Vec<&str> = rendered.lines().collect();
        assert_eq!(lines[0], "mare 1");
        assert_eq!(lines[1], "2 2");
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[2], "2 -1 -1 0");
    }

    #[test]
    fn round_trip_is_bitwise_exact() {
        let spec = GenSpec::for_category(GenCategory::IrreducibleSingular, 3, 2, 11);
        let k = random_generator_k(&spec).unwrap();
        let original = MatrixFile::new(k, 3);
        let reparsed = MatrixFile::parse(&original.render()).unwrap();
        assert_eq!(reparsed.n, 3);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(
                    original.k[(i, j)].to_bits(),
                    reparsed.k[(i, j)].to_bits(),
                    "entry ({i}, {j})"
                );
            }
        }
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# a fixture\n\nmare 1\n# dims\n2 2\n2 -1 -1 0\n0 2 -1 -1\n\n0 0 2 -1\n# trailing rows\n0 -1 -1 2\n";
        let file = MatrixFile::parse(text).unwrap();
        assert_eq!(file.n, 2);
        assert_eq!(file.k.rows(), 4);
        assert_eq!(file.k[(0, 0)], 2.0);
        assert!(file.to_problem().is_ok());
    }

    #[test]
    fn entries_may_break_lines_anywhere() {
        let text = "mare 1\n1 1\n1 -0.5\n-0.25 1\n";
        let one_line = "mare 1\n1 1\n1 -0.5 -0.25 1\n";
        assert_eq!(
            MatrixFile::parse(text).unwrap(),
            MatrixFile::parse(one_line).unwrap()
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        match MatrixFile::parse("hello\n1 1\n0 0 0 0\n") {
            Err(ParseError::BadHeader { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match MatrixFile::parse("mare 1\ntwo two\n") {
            Err(ParseError::BadDimensions { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match MatrixFile::parse("mare 1\n1 1\n1 2 x 4\n") {
            Err(ParseError::BadEntry { line: 3, ref token }) if token == "x" => {}
            other => panic!("unexpected {other:?}"),
        }
        match MatrixFile::parse("mare 1\n1 1\n1 2 3\n") {
            Err(ParseError::TooFewEntries {
                line: 3,
                expected: 4,
                found: 3,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match MatrixFile::parse("mare 1\n1 1\n1 2 3 4\n5\n") {
            Err(ParseError::TooManyEntries {
                line: 4,
                expected: 4,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match MatrixFile::parse("mare 1\n0 0\n") {
            Err(ParseError::EmptyMatrix { line: 2 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(MatrixFile::parse("").is_err());
    }

    #[test]
    fn disk_round_trip() {
        let dir = std::env::temp_dir().join("mare-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ex2.mare");
        let f = fixture(FixtureId::Ex2);
        let file = MatrixFile::from_problem(&f.problem);
        file.write(&path).unwrap();
        let back = MatrixFile::read(&path).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_problem().unwrap(), f.problem);
        std::fs::remove_file(&path).unwrap();
        assert!(matches!(
            MatrixFile::read(&path),
            Err(FileError::Io { .. })
        ));
    }
}
