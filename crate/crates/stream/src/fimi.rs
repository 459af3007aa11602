//! FIMI transaction files: one transaction per line, items separated by
//! whitespace.

use std::io::{self, BufRead};

use cistream_core::{Dictionary, Itemset};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {source}")]
    Io { line: usize, source: io::Error },
    #[error("line {line}: input is not valid UTF-8")]
    Utf8 { line: usize },
    #[error("line {line}: invalid item token {token:?}")]
    Token { line: usize, token: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Io { line, .. }
            | ParseError::Utf8 { line }
            | ParseError::Token { line, .. } => *line,
        }
    }
}

/// Line-oriented transaction reader. Tokens are interned into a
/// [`Dictionary`] in first-seen order; a blank line is an empty basket.
#[derive(Debug)]
pub struct StreamSource<R> {
    reader: R,
    dict: Dictionary,
    line: usize,
    duplicates: usize,
    buf: Vec<u8>,
    done: bool,
}

impl<R: BufRead> StreamSource<R> {
    pub fn new(reader: R) -> Self {
        StreamSource {
            reader,
            dict: Dictionary::new(),
            line: 0,
            duplicates: 0,
            buf: Vec::new(),
            done: false,
        }
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    pub fn into_dictionary(self) -> Dictionary {
        self.dict
    }

    /// Lines read so far.
    pub fn line(&self) -> usize {
        self.line
    }

    /// Repeated tokens collapsed within a line, summed over all lines.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    fn parse_line(&mut self) -> Result<Itemset, ParseError> {
        let line = self.line;
        let text = std::str::from_utf8(&self.buf).map_err(|_| ParseError::Utf8 { line })?;
        let mut count = 0;
        let mut items = Vec::new();
        for token in text.split_whitespace() {
            if token.chars().any(char::is_control) {
                return Err(ParseError::Token {
                    line,
                    token: token.to_string(),
                });
            }
            items.push(self.dict.intern(token));
            count += 1;
        }
        let itemset = Itemset::new(items);
        self.duplicates += count - itemset.len();
        Ok(itemset)
    }
}

impl<R: BufRead> Iterator for StreamSource<R> {
    type Item = Result<Itemset, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        self.buf.clear();
        match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(0) => {
                self.done = true;
                None
            }
            Ok(_) => {
                self.line += 1;
                let r = self.parse_line();
                self.done = r.is_err();
                Some(r)
            }
            Err(source) => {
                self.done = true;
                Some(Err(ParseError::Io {
                    line: self.line + 1,
                    source,
                }))
            }
        }
    }
}

/// A fully read FIMI file.
#[derive(Debug, Clone)]
pub struct Fimi {
    pub transactions: Vec<Itemset>,
    pub dictionary: Dictionary,
    pub duplicates: usize,
}

pub fn read_fimi<R: BufRead>(reader: R) -> Result<Fimi, ParseError> {
    let mut src = StreamSource::new(reader);
    let transactions = src.by_ref().collect::<Result<Vec<_>, _>>()?;
    let duplicates = src.duplicates();
    Ok(Fimi {
        transactions,
        dictionary: src.into_dictionary(),
        duplicates,
    })
}
