//! Case-record input.
//!
//! One case per line: an identifier followed by three or four nominal
//! labels, comma separated. Any field may be wrapped in one pair of double
//! quotes; quotes are optional and carry no meaning.
//!
//! ```text
//! "id1", "1", "b", "region1", "2"
//! 459695,1901,5,3
//! ```
//!
//! This is deliberately not RFC 4180: commas and quotes cannot appear inside
//! a label.

use crate::dims::{Arity, Dim};
use crate::error::{Error, Result};
use std::io::BufRead;

/// One parsed input line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRecord {
    pub id: String,
    labels: Vec<String>,
    pub line_number: u64,
}

impl CaseRecord {
    /// Fails unless there are three or four labels.
    pub fn new(id: impl Into<String>, labels: Vec<String>, line_number: u64) -> Result<Self> {
        if Arity::from_len(labels.len()).is_none() {
            return Err(Error::format(
                line_number,
                format!("expected 3 or 4 variables after the identifier, found {}", labels.len()),
            ));
        }
        Ok(CaseRecord {
            id: id.into(),
            labels,
            line_number,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, dim: Dim) -> Option<&str> {
        self.labels.get(dim.index()).map(String::as_str)
    }

    pub fn arity(&self) -> Arity {
        Arity::from_len(self.labels.len()).expect("validated in constructor")
    }

    pub fn has_empty_label(&self) -> bool {
        self.labels.iter().any(String::is_empty)
    }

    /// Writes the record back out with every field quoted.
    pub fn to_quoted_line(&self) -> String {
        std::iter::once(&self.id)
            .chain(&self.labels)
            .map(|f| format!("\"{f}\""))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn parse_field(raw: &str, line_number: u64) -> Result<&str> {
    let field = raw.trim();
    let inner = match field.strip_prefix('"') {
        Some(rest) => rest
            .strip_suffix('"')
            .ok_or_else(|| Error::format(line_number, format!("unmatched quote in field `{field}`")))?,
        None => field,
    };
    if inner.contains('"') {
        return Err(Error::format(
            line_number,
            format!("stray quote in field `{field}`"),
        ));
    }
    Ok(inner)
}

/// Parses one physical line. Blank lines yield `Ok(None)`.
pub fn parse_line(text: &str, line_number: u64) -> Result<Option<CaseRecord>> {
    if text.trim().is_empty() {
        return Ok(None);
    }
    let fields: Vec<&str> = text.split(',').collect();
    if !(4..=5).contains(&fields.len()) {
        return Err(Error::format(
            line_number,
            format!(
                "expected an identifier and 3 or 4 variables (4 or 5 fields), found {} fields",
                fields.len()
            ),
        ));
    }
    let id = parse_field(fields[0], line_number)?.to_string();
    let labels = fields[1..]
        .iter()
        .map(|f| parse_field(f, line_number).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    CaseRecord::new(id, labels, line_number).map(Some)
}

/// A validated, non-empty list of records of uniform arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    records: Vec<CaseRecord>,
    arity: Arity,
    source_label: String,
}

impl Dataset {
    pub fn new(source_label: impl Into<String>, records: Vec<CaseRecord>) -> Result<Self> {
        let source_label = source_label.into();
        let first = records
            .first()
            .ok_or_else(|| Error::EmptyDataset(source_label.clone()))?;
        let arity = first.arity();
        if let Some(bad) = records.iter().find(|r| r.arity() != arity) {
            return Err(Error::MixedArity {
                first_line: first.line_number,
                line: bad.line_number,
                expected: arity.get(),
                found: bad.arity().get(),
            });
        }
        Ok(Dataset {
            records,
            arity,
            source_label,
        })
    }

    pub fn records(&self) -> &[CaseRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<CaseRecord> {
        self.records
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Drops every record with an empty-string label. Fails if none remain.
    pub fn without_empty_labels(self) -> Result<Dataset> {
        let Dataset {
            records,
            source_label,
            ..
        } = self;
        let kept = records.into_iter().filter(|r| !r.has_empty_label()).collect();
        Dataset::new(source_label, kept)
    }
}

/// Parses a sequence of lines. Line numbers start at 1.
pub fn parse_dataset<I, S>(lines: I, source_label: impl Into<String>) -> Result<Dataset>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut records = Vec::new();
    for (i, line) in lines.into_iter().enumerate() {
        if let Some(rec) = parse_line(line.as_ref(), i as u64 + 1)? {
            records.push(rec);
        }
    }
    Dataset::new(source_label, records)
}

/// Reads a whole dataset from a byte stream.
pub fn read_dataset<R: BufRead>(reader: R, source_label: impl Into<String>) -> Result<Dataset> {
    let records = RecordReader::new(reader).collect::<Result<Vec<_>>>()?;
    Dataset::new(source_label, records)
}

/// Streams records from a byte stream without holding the file in memory.
///
/// Lines must be UTF-8; a leading byte-order mark is ignored. Arity is fixed
/// by the first record and every later record is checked against it.
pub struct RecordReader<R> {
    reader: R,
    buf: Vec<u8>,
    line_number: u64,
    first: Option<(Arity, u64)>,
    done: bool,
}

impl<R: BufRead> RecordReader<R> {
    pub fn new(reader: R) -> Self {
        RecordReader {
            reader,
            buf: Vec::new(),
            line_number: 0,
            first: None,
            done: false,
        }
    }

    /// Arity of the first record read so far.
    pub fn arity(&self) -> Option<Arity> {
        self.first.map(|(a, _)| a)
    }

    fn next_record(&mut self) -> Result<Option<CaseRecord>> {
        loop {
            self.buf.clear();
            if self.reader.read_until(b'\n', &mut self.buf)? == 0 {
                return Ok(None);
            }
            self.line_number += 1;
            let mut bytes = self.buf.as_slice();
            if self.line_number == 1 {
                bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
            }
            let text = std::str::from_utf8(bytes)
                .map_err(|e| Error::format(self.line_number, format!("invalid UTF-8: {e}")))?;
            let Some(rec) = parse_line(text, self.line_number)? else {
                continue;
            };
            match self.first {
                None => self.first = Some((rec.arity(), rec.line_number)),
                Some((arity, first_line)) if arity != rec.arity() => {
                    return Err(Error::MixedArity {
                        first_line,
                        line: rec.line_number,
                        expected: arity.get(),
                        found: rec.arity().get(),
                    })
                }
                Some(_) => {}
            }
            return Ok(Some(rec));
        }
    }
}

impl<R: BufRead> Iterator for RecordReader<R> {
    type Item = Result<CaseRecord>;

    /// Stops after the first error.
    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.next_record().transpose();
        if !matches!(item, Some(Ok(_))) {
            self.done = true;
        }
        item
    }
}
