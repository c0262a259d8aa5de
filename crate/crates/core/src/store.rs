//! Append-only sign database and the live co-occurrence table derived from it.
//!
//! One record per line:
//!
//! ```text
//! <id> <saved_at ISO-8601Z> <SWT1 string>[ L"<label>"]
//! ```
//!
//! Ids are zero-padded 8-digit decimals assigned in increasing order. The
//! hint table is never persisted: it is rebuilt from the records on open and
//! updated together with every append.

use std::fs::{File, OpenOptions};
use std::io::{self, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, SecondsFormat, Timelike, Utc};
use serde::Serialize;
use thiserror::Error;

use crate::catalog::Catalog;
use crate::hints::{CooccurrenceTable, HintError};
use crate::id::GlyphId;
use crate::notation::{parse_text, serialize_text, NotationError};
use crate::sign::{Sign, SignError};

pub const ID_WIDTH: usize = 8;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("storage failure: {0}")]
    Io(#[from] io::Error),
    #[error("sign `{0}` not found")]
    NotFound(String),
    #[error("record `{id}` is corrupt: {reason}")]
    Corrupt { id: String, reason: String },
    #[error("line {line} of the store has no readable record id")]
    Unreadable { line: usize },
    #[error("invalid sign: {0}")]
    InvalidSign(#[from] SignError),
    #[error(transparent)]
    Hint(#[from] HintError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignRecord {
    pub id: String,
    pub sign: Sign,
    pub saved_at: DateTime<Utc>,
    pub glyph_list: Vec<GlyphId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignSummary {
    pub id: String,
    pub label: Option<String>,
    pub saved_at: DateTime<Utc>,
    pub glyph_count: usize,
}

/// Where store lines live. The file-backed log is the production one.
pub trait RecordLog: Send {
    /// Appends one complete line (including its newline) durably.
    fn append(&mut self, line: &str) -> io::Result<()>;
}

/// Append-only file. Opening discards a torn final line left by a crash.
pub struct FileLog {
    path: PathBuf,
    file: File,
}

impl FileLog {
    pub fn open(path: impl AsRef<Path>) -> io::Result<(Self, String)> {
        let path = path.as_ref().to_path_buf();
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)?;
        let mut content = String::new();
        file.read_to_string(&mut content)?;
        if !content.is_empty() && !content.ends_with('\n') {
            let keep = content.rfind('\n').map_or(0, |i| i + 1);
            content.truncate(keep);
            file.set_len(keep as u64)?;
            file.sync_all()?;
        }
        file.seek(SeekFrom::End(0))?;
        Ok((FileLog { path, file }, content))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl RecordLog for FileLog {
    fn append(&mut self, line: &str) -> io::Result<()> {
        let before = self.file.metadata()?.len();
        let written = self
            .file
            .write_all(line.as_bytes())
            .and_then(|_| self.file.sync_data());
        if let Err(e) = written {
            // Best effort: drop whatever part of the line reached the file.
            let _ = self.file.set_len(before);
            return Err(e);
        }
        Ok(())
    }
}

/// In-memory log, for tests and ephemeral servers.
#[derive(Debug, Default, Clone)]
pub struct MemoryLog {
    pub lines: String,
}

impl RecordLog for MemoryLog {
    fn append(&mut self, line: &str) -> io::Result<()> {
        self.lines.push_str(line);
        Ok(())
    }
}

enum Entry {
    Valid(SignRecord),
    Corrupt { id: String, reason: String },
}

impl Entry {
    fn id(&self) -> &str {
        match self {
            Entry::Valid(r) => &r.id,
            Entry::Corrupt { id, .. } => id,
        }
    }
}

pub struct SignStore {
    log: Box<dyn RecordLog>,
    entries: Vec<Entry>,
    next_id: u64,
    table: Arc<CooccurrenceTable>,
}

impl std::fmt::Debug for SignStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SignStore")
            .field("records", &self.entries.len())
            .field("next_id", &self.next_id)
            .finish()
    }
}

pub fn format_id(n: u64) -> String {
    format!("{n:0width$}", width = ID_WIDTH)
}

fn parse_id(s: &str) -> Option<u64> {
    if s.len() == ID_WIDTH && s.bytes().all(|b| b.is_ascii_digit()) {
        s.parse().ok()
    } else {
        None
    }
}

pub fn format_time(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn escape_label(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

fn unescape_label(body: &str) -> Result<String, String> {
    let mut out = String::with_capacity(body.len());
    let mut chars = body.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some('\\') => out.push('\\'),
                Some('"') => out.push('"'),
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                other => return Err(format!("bad label escape {other:?}")),
            },
            '"' => return Err("unescaped quote in label".into()),
            _ => out.push(c),
        }
    }
    Ok(out)
}

/// Renders one store line, newline included.
pub fn format_record(record: &SignRecord) -> String {
    let mut line = format!(
        "{} {} {}",
        record.id,
        format_time(&record.saved_at),
        serialize_text(&record.sign)
    );
    if let Some(label) = &record.sign.label {
        line.push_str(&format!(" L\"{}\"", escape_label(label)));
    }
    line.push('\n');
    line
}

fn parse_record(id: &str, rest: &str, catalog: &Catalog) -> Result<SignRecord, String> {
    let (stamp, rest) = rest
        .split_once(' ')
        .ok_or_else(|| "missing SWT1 field".to_string())?;
    let saved_at = DateTime::parse_from_rfc3339(stamp)
        .map_err(|e| format!("bad timestamp `{stamp}`: {e}"))?
        .with_timezone(&Utc);
    let (swt, label) = match rest.split_once(' ') {
        None => (rest, None),
        Some((swt, tail)) => {
            let body = tail
                .strip_prefix("L\"")
                .and_then(|t| t.strip_suffix('"'))
                .ok_or_else(|| format!("unexpected trailing field `{tail}`"))?;
            (swt, Some(unescape_label(body)?))
        }
    };
    let mut sign = parse_text(swt, catalog).map_err(|e: NotationError| e.to_string())?;
    sign.id = id.to_string();
    sign.label = label;
    Ok(SignRecord {
        id: id.to_string(),
        glyph_list: sign.glyph_ids(),
        sign,
        saved_at,
    })
}

impl SignStore {
    /// Opens (or creates) a file-backed store and rebuilds the hint table.
    pub fn open(path: impl AsRef<Path>, catalog: &Catalog) -> Result<Self, StoreError> {
        let (log, content) = FileLog::open(path)?;
        Self::from_log(Box::new(log), &content, catalog)
    }

    pub fn in_memory() -> Self {
        SignStore {
            log: Box::new(MemoryLog::default()),
            entries: Vec::new(),
            next_id: 1,
            table: Arc::default(),
        }
    }

    /// Replays existing `content` and continues appending to `log`.
    pub fn from_log(
        log: Box<dyn RecordLog>,
        content: &str,
        catalog: &Catalog,
    ) -> Result<Self, StoreError> {
        let mut entries = Vec::new();
        let mut last_id = 0;
        for (n, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (id, rest) = line.split_once(' ').unwrap_or((line, ""));
            let num = parse_id(id).ok_or(StoreError::Unreadable { line: n + 1 })?;
            last_id = last_id.max(num);
            entries.push(match parse_record(id, rest, catalog) {
                Ok(record) => Entry::Valid(record),
                Err(reason) => Entry::Corrupt {
                    id: id.to_string(),
                    reason,
                },
            });
        }
        let table = CooccurrenceTable::rebuild(
            entries.iter().filter_map(|e| match e {
                Entry::Valid(r) => Some(&r.sign),
                Entry::Corrupt { .. } => None,
            }),
            catalog,
        )?;
        Ok(SignStore {
            log,
            entries,
            next_id: last_id + 1,
            table: Arc::new(table),
        })
    }

    pub fn save(&mut self, sign: &Sign, catalog: &Catalog) -> Result<SignRecord, StoreError> {
        let now = Utc::now().with_nanosecond(0).expect("zero nanoseconds is valid");
        self.save_at(sign, catalog, now)
    }

    /// Persists `sign` and counts it in the hint table. Either both happen or,
    /// on error, neither.
    pub fn save_at(
        &mut self,
        sign: &Sign,
        catalog: &Catalog,
        saved_at: DateTime<Utc>,
    ) -> Result<SignRecord, StoreError> {
        sign.validate()?;
        sign.resolve(catalog)?;
        let id = format_id(self.next_id);
        let mut stored = sign.clone();
        stored.id = id.clone();
        let record = SignRecord {
            id,
            glyph_list: stored.glyph_ids(),
            sign: stored,
            saved_at: saved_at.with_nanosecond(0).unwrap_or(saved_at),
        };
        let next_table = self.table.record_sign(&record.sign, catalog)?;
        self.log.append(&format_record(&record))?;
        self.table = Arc::new(next_table);
        self.next_id += 1;
        self.entries.push(Entry::Valid(record.clone()));
        Ok(record)
    }

    pub fn load(&self, id: &str) -> Result<SignRecord, StoreError> {
        match self.entries.iter().rev().find(|e| e.id() == id) {
            None => Err(StoreError::NotFound(id.to_string())),
            Some(Entry::Valid(r)) => Ok(r.clone()),
            Some(Entry::Corrupt { id, reason }) => Err(StoreError::Corrupt {
                id: id.clone(),
                reason: reason.clone(),
            }),
        }
    }

    /// Valid records by ascending id, paged.
    pub fn list_signs(&self, offset: usize, limit: usize) -> Vec<SignSummary> {
        self.records()
            .skip(offset)
            .take(limit)
            .map(|r| SignSummary {
                id: r.id.clone(),
                label: r.sign.label.clone(),
                saved_at: r.saved_at,
                glyph_count: r.glyph_list.len(),
            })
            .collect()
    }

    pub fn records(&self) -> impl Iterator<Item = &SignRecord> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Valid(r) => Some(r),
            Entry::Corrupt { .. } => None,
        })
    }

    pub fn corrupt_ids(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| matches!(e, Entry::Corrupt { .. }))
            .map(Entry::id)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.records().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// A consistent snapshot of the live hint table.
    pub fn table(&self) -> Arc<CooccurrenceTable> {
        Arc::clone(&self.table)
    }
}
