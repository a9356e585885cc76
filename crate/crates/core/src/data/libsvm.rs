//! LIBSVM / SVMlight text format:
//!
//! ```text
//! <label> <index>:<value> <index>:<value> ...
//! ```
//!
//! Indices are 1-based and strictly increasing within a line. Labels are
//! mapped to `+1` when positive and `-1` otherwise, which covers both the
//! `{-1, +1}` and `{0, 1}` conventions. Anything after `#` is ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::problems::{LogisticProblem, Problem};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct LibsvmOptions {
    /// Lower bound on the feature dimension; the observed maximum index wins
    /// when larger.
    pub min_dim: Option<usize>,
    /// Fit an unregularized intercept.
    pub bias: bool,
}

impl Default for LibsvmOptions {
    fn default() -> Self {
        Self { min_dim: None, bias: true }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_libsvm<F: Real>(reader: impl BufRead, opts: LibsvmOptions) -> Result<LogisticProblem<F>> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut max_index = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label_tok = tokens.next().expect("nonempty line has a token");
        let label: f64 =
            label_tok.parse().map_err(|_| parse_err(lineno, format!("malformed label '{label_tok}'")))?;
        if label.is_nan() {
            return Err(parse_err(lineno, "label is NaN"));
        }
        let mut row = Vec::new();
        let mut prev = 0usize;
        for tok in tokens {
            let (idx, val) =
                tok.split_once(':').ok_or_else(|| parse_err(lineno, format!("malformed feature '{tok}'")))?;
            let idx: usize =
                idx.parse().map_err(|_| parse_err(lineno, format!("malformed feature index '{idx}'")))?;
            if idx < 1 {
                return Err(parse_err(lineno, "feature indices are 1-based"));
            }
            if idx <= prev {
                return Err(parse_err(lineno, format!("feature index {idx} not increasing after {prev}")));
            }
            let val: f64 =
                val.parse().map_err(|_| parse_err(lineno, format!("malformed feature value '{val}'")))?;
            prev = idx;
            row.push((idx - 1, F::lit(val)));
        }
        max_index = max_index.max(prev);
        labels.push(if label > 0.0 { F::one() } else { -F::one() });
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::NoInstances);
    }
    let n = max_index.max(opts.min_dim.unwrap_or(0)).max(1);
    LogisticProblem::from_rows(rows, labels, n, opts.bias)
}

pub fn read_libsvm_file<F: Real>(path: impl AsRef<Path>, opts: LibsvmOptions) -> Result<LogisticProblem<F>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::File { path: path.to_path_buf(), source })?;
    parse_libsvm(BufReader::new(file), opts)
}

/// Serializes a problem back to LIBSVM text with shortest round-trip
/// decimal values and `+1` / `-1` labels.
pub fn write_libsvm<F: Real>(problem: &LogisticProblem<F>, mut w: impl Write) -> Result<()> {
    for i in 0..problem.num_instances() {
        let label = if problem.labels()[i] > F::zero() { "+1" } else { "-1" };
        write!(w, "{label}")?;
        let (cols, vals) = problem.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            write!(w, " {}:{}", j + 1, v.as_f64())?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<LogisticProblem<f64>> {
        parse_libsvm(text.as_bytes(), LibsvmOptions::default())
    }

    #[test]
    fn parses_basic_line() {
        let p = parse("+1 1:0.5 3:-2\n").unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.labels(), &[1.0]);
        let (cols, vals) = p.row(0);
        assert_eq!(cols, &[0, 2]);
        assert_eq!(vals, &[0.5, -2.0]);
    }

    #[test]
    fn zero_label_maps_to_negative() {
        let p = parse("0 2:1\n").unwrap();
        assert_eq!(p.labels(), &[-1.0]);
        assert_eq!(p.row(0).0, &[1]);
    }

    #[test]
    fn tolerates_blank_lines_comments_and_trailing_space() {
        let p = parse("\n1 1:1   \n\n-1 2:2 # note\n   \n").unwrap();
        assert_eq!(p.num_instances(), 2);
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn dimension_override_only_grows() {
        let opts = LibsvmOptions { min_dim: Some(10), bias: true };
        let p: LogisticProblem<f64> = parse_libsvm("1 2:1\n".as_bytes(), opts).unwrap();
        assert_eq!(p.dim(), 10);
        let opts = LibsvmOptions { min_dim: Some(1), bias: true };
        let p: LogisticProblem<f64> = parse_libsvm("1 2:1\n".as_bytes(), opts).unwrap();
        assert_eq!(p.dim(), 2);
    }

    #[test]
    fn reports_line_numbers() {
        match parse("1 1:1\n1 2:x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("1 1:1\n\n1 3:1 2:1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("1 0:1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("abc 1:1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("1 1-1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("1 2:1 2:3\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input_has_no_instances() {
        let err = parse("\n\n").unwrap_err();
        assert!(matches!(err, Error::NoInstances));
        assert_eq!(err.to_string(), "no instances");
    }

    proptest! {
        #[test]
        fn serialize_round_trip(
            rows in prop::collection::vec(
                (any::<bool>(), prop::collection::btree_map(0usize..40, -1e6f64..1e6, 0..8)),
                1..20,
            )
        ) {
            let mut text = String::new();
            for (pos, feats) in &rows {
                text.push_str(if *pos { "1" } else { "-1" });
                for (j, v) in feats { text.push_str(&format!(" {}:{}", j + 1, v)); }
                text.push('\n');
            }
            let p = parse(&text).unwrap();
            let mut out = Vec::new();
            write_libsvm(&p, &mut out).unwrap();
            let q: LogisticProblem<f64> = parse_libsvm(out.as_slice(), LibsvmOptions::default()).unwrap();
            prop_assert_eq!(p.num_instances(), q.num_instances());
            prop_assert_eq!(p.labels(), q.labels());
            for i in 0..p.num_instances() {
                prop_assert_eq!(p.row(i).0, q.row(i).0);
                prop_assert_eq!(p.row(i).1, q.row(i).1);
            }
        }
    }
}
