//! Streaming JSONL reading and writing.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::document::{Document, RawDocument};
use super::labels::LabelPolicy;
use crate::{Error, Result};

/// A malformed line. Non-fatal unless the reader is strict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineError {
    pub path: PathBuf,
    pub line: usize,
    pub message: String,
}

impl From<LineError> for Error {
    fn from(e: LineError) -> Self {
        Error::Parse {
            path: e.path,
            line: e.line,
            message: e.message,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReadOptions {
    /// Fail on the first malformed line instead of collecting it.
    pub strict: bool,
    pub labels: LabelPolicy,
}

/// Streams documents from JSONL files in file order.
///
/// Every path is checked up front so a missing file fails before any
/// document is produced. Blank lines are skipped; every other line yields
/// either a document or a [`LineError`]. Ids already seen become errors.
pub struct DocumentReader {
    paths: Vec<PathBuf>,
    next_path: usize,
    current: Option<(PathBuf, Lines<BufReader<File>>, usize)>,
    seen: HashSet<String>,
    options: ReadOptions,
}

impl DocumentReader {
    pub fn open<P: AsRef<Path>>(paths: &[P], options: ReadOptions) -> Result<Self> {
        let paths: Vec<PathBuf> = paths.iter().map(|p| p.as_ref().to_path_buf()).collect();
        for p in &paths {
            if !p.is_file() {
                return Err(Error::io(
                    p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
                ));
            }
        }
        Ok(DocumentReader {
            paths,
            next_path: 0,
            current: None,
            seen: HashSet::new(),
            options,
        })
    }

    fn parse_line(&mut self, path: &Path, line_no: usize, line: &str) -> Result<Document, LineError> {
        let err = |message: String| LineError {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let raw: RawDocument = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let doc = raw
            .into_document(self.options.labels)
            .map_err(|e| err(e.to_string()))?;
        if !self.seen.insert(doc.id.clone()) {
            return Err(err(format!("duplicate id `{}`", doc.id)));
        }
        Ok(doc)
    }
}

impl Iterator for DocumentReader {
    type Item = Result<Result<Document, LineError>>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.current.is_none() {
                let path = self.paths.get(self.next_path)?.clone();
                self.next_path += 1;
                let file = match File::open(&path) {
                    Ok(f) => f,
                    Err(e) => return Some(Err(Error::io(path, e))),
                };
                self.current = Some((path, BufReader::new(file).lines(), 0));
            }
            let (path, lines, line_no) = self.current.as_mut().expect("file open");
            match lines.next() {
                None => self.current = None,
                Some(Err(e)) => {
                    let path = path.clone();
                    self.current = None;
                    return Some(Err(Error::io(path, e)));
                }
                Some(Ok(line)) => {
                    *line_no += 1;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let (path, n) = (path.clone(), *line_no);
                    return Some(Ok(self.parse_line(&path, n, &line)));
                }
            }
        }
    }
}

#[derive(Debug, Default)]
pub struct ReadOutcome {
    pub documents: Vec<Document>,
    pub errors: Vec<LineError>,
}

/// Reads all documents, collecting malformed lines (or failing on the first
/// one when `options.strict`).
pub fn read_corpus<P: AsRef<Path>>(paths: &[P], options: ReadOptions) -> Result<ReadOutcome> {
    let mut out = ReadOutcome::default();
    for item in DocumentReader::open(paths, options)? {
        match item? {
            Ok(doc) => out.documents.push(doc),
            Err(e) if options.strict => return Err(e.into()),
            Err(e) => {
                log::warn!("{}:{}: {}", e.path.display(), e.line, e.message);
                out.errors.push(e);
            }
        }
    }
    Ok(out)
}

/// Writes one JSON object per line.
pub fn write_jsonl<'a, T, I, W>(writer: W, items: I) -> Result<()>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
    W: Write,
{
    let mut w = BufWriter::new(writer);
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl_file<'a, T, I>(path: &Path, items: I) -> Result<()>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_jsonl(file, items)
}

/// Reads a whole JSONL file; any malformed line is an error.
pub fn read_jsonl_file<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}
