//! On-disk scan cache.
//!
//! Layout: one JSON header line, then binary records. Each record is
//! `len: u32 LE | payload | sha256(payload)[..8]`, and the payload is
//! `p: u64 | split: u8 | n: u8 | n × (a, b, c, norm, class, f: u64 | surjective: u8)`.
//! A record whose checksum or shape is wrong is ignored and recomputed; the
//! file is then rewritten. A header for another format version, field or
//! class-group generator invalidates the whole file.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use euclid_core::ideals::SplitType;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{SurveyError, SurveyResult};
use crate::scan::{IdealEntry, ScanRecord};
use crate::Survey;

pub const FORMAT: &str = "euclid-scan-cache";
pub const VERSION: u32 = 1;
const ENTRY_LEN: usize = 6 * 8 + 1;
const FIXED_LEN: usize = 8 + 1 + 1;
const CHECK_LEN: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub d: i64,
    pub generator: String,
}

impl Header {
    pub fn for_survey(s: &Survey) -> Header {
        let gen = s.g.generator().ideal();
        Header {
            format: FORMAT.into(),
            version: VERSION,
            d: s.d(),
            generator: format!("{},{},{}", gen.a(), gen.b(), gen.c()),
        }
    }
}

/// Result of decoding a cache file.
#[derive(Clone, Debug, Default)]
pub struct Decoded {
    pub header: Option<Header>,
    pub records: Vec<ScanRecord>,
    /// Records dropped for a bad checksum or malformed payload.
    pub corrupt: usize,
    /// True if the file ends inside a record.
    pub truncated: bool,
}

fn checksum(payload: &[u8]) -> [u8; CHECK_LEN] {
    let digest = Sha256::digest(payload);
    let mut out = [0u8; CHECK_LEN];
    out.copy_from_slice(&digest[..CHECK_LEN]);
    out
}

fn split_code(s: SplitType) -> u8 {
    match s {
        SplitType::Split => 0,
        SplitType::Inert => 1,
        SplitType::Ramified => 2,
    }
}

pub fn encode_record(r: &ScanRecord) -> Vec<u8> {
    let mut payload = Vec::with_capacity(FIXED_LEN + r.entries.len() * ENTRY_LEN);
    payload.extend_from_slice(&r.p.to_le_bytes());
    payload.push(split_code(r.split));
    payload.push(r.entries.len() as u8);
    for e in &r.entries {
        for v in [e.hnf.0, e.hnf.1, e.hnf.2, e.norm, e.class, e.f] {
            payload.extend_from_slice(&v.to_le_bytes());
        }
        payload.push(e.surjective as u8);
    }
    let mut out = Vec::with_capacity(4 + payload.len() + CHECK_LEN);
    out.extend_from_slice(&(payload.len() as u32).to_le_bytes());
    out.extend_from_slice(&payload);
    out.extend_from_slice(&checksum(&payload));
    out
}

fn u64_at(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().expect("8 bytes"))
}

fn decode_payload(b: &[u8]) -> Option<ScanRecord> {
    if b.len() < FIXED_LEN {
        return None;
    }
    let p = u64_at(b, 0);
    let split = match b[8] {
        0 => SplitType::Split,
        1 => SplitType::Inert,
        2 => SplitType::Ramified,
        _ => return None,
    };
    let n = b[9] as usize;
    let expected_n = if split == SplitType::Split { 2 } else { 1 };
    if p < 2 || n != expected_n || b.len() != FIXED_LEN + n * ENTRY_LEN {
        return None;
    }
    let entries = (0..n)
        .map(|i| {
            let at = FIXED_LEN + i * ENTRY_LEN;
            IdealEntry {
                hnf: (u64_at(b, at), u64_at(b, at + 8), u64_at(b, at + 16)),
                norm: u64_at(b, at + 24),
                class: u64_at(b, at + 32),
                f: u64_at(b, at + 40),
                surjective: b[at + 48] == 1,
            }
        })
        .collect();
    Some(ScanRecord { p, split, entries })
}

/// Decodes a whole cache file. Never panics on malformed input.
pub fn decode(bytes: &[u8]) -> Decoded {
    let mut out = Decoded::default();
    let Some(nl) = bytes.iter().position(|&b| b == b'\n') else {
        out.truncated = !bytes.is_empty();
        return out;
    };
    out.header = serde_json::from_slice(&bytes[..nl]).ok();
    let mut rest = &bytes[nl + 1..];
    while !rest.is_empty() {
        if rest.len() < 4 {
            out.truncated = true;
            break;
        }
        let len = u32::from_le_bytes(rest[..4].try_into().expect("4 bytes")) as usize;
        let Some(total) = len.checked_add(4 + CHECK_LEN).filter(|&t| t <= rest.len()) else {
            out.truncated = true;
            break;
        };
        let payload = &rest[4..4 + len];
        let stored = &rest[4 + len..total];
        match decode_payload(payload) {
            Some(r) if stored == checksum(payload) => out.records.push(r),
            _ => out.corrupt += 1,
        }
        rest = &rest[total..];
    }
    out
}

/// Cache bound to one survey's field and class-group generator.
#[derive(Debug)]
pub struct ScanCache {
    path: PathBuf,
    header: Header,
    records: BTreeMap<u64, ScanRecord>,
    needs_rewrite: bool,
}

impl ScanCache {
    pub fn open(path: &Path, s: &Survey) -> SurveyResult<ScanCache> {
        let header = Header::for_survey(s);
        let mut cache = ScanCache { path: path.to_path_buf(), header, records: BTreeMap::new(), needs_rewrite: true };
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(SurveyError::io(path, e)),
        };
        let decoded = decode(&bytes);
        if decoded.header.as_ref() != Some(&cache.header) {
            return Ok(cache);
        }
        let mut duplicates = false;
        for r in decoded.records {
            duplicates |= cache.records.insert(r.p, r).is_some();
        }
        cache.needs_rewrite = decoded.corrupt > 0 || decoded.truncated || duplicates;
        Ok(cache)
    }

    pub fn get(&self, p: u64) -> Option<&ScanRecord> {
        self.records.get(&p)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Adds records and persists them: appended when the file is sound,
    /// otherwise the file is rewritten from the in-memory map.
    pub fn insert_all(&mut self, mut fresh: Vec<ScanRecord>) -> SurveyResult<()> {
        fresh.sort_by_key(|r| r.p);
        if self.needs_rewrite {
            for r in fresh {
                self.records.insert(r.p, r);
            }
            self.rewrite()?;
            self.needs_rewrite = false;
            return Ok(());
        }
        if fresh.is_empty() {
            return Ok(());
        }
        let mut bytes = Vec::new();
        for r in &fresh {
            bytes.extend(encode_record(r));
        }
        let mut file = OpenOptions::new().append(true).open(&self.path).map_err(|e| SurveyError::io(&self.path, e))?;
        file.write_all(&bytes).map_err(|e| SurveyError::io(&self.path, e))?;
        for r in fresh {
            self.records.insert(r.p, r);
        }
        Ok(())
    }

    fn rewrite(&self) -> SurveyResult<()> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| SurveyError::io(dir, e))?;
        }
        let mut bytes = serde_json::to_vec(&self.header).expect("header serializes");
        bytes.push(b'\n');
        for r in self.records.values() {
            bytes.extend(encode_record(r));
        }
        let tmp = self.path.with_extension("tmp");
        fs::write(&tmp, &bytes).map_err(|e| SurveyError::io(&tmp, e))?;
        fs::rename(&tmp, &self.path).map_err(|e| SurveyError::io(&self.path, e))
    }
}
