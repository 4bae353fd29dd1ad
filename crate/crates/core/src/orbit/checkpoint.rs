//! Binary BFS checkpoints.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic "TSORBIT1" | version u32
//! block*: tag u32 | len u64 | payload | crc32(payload) u32
//! ```
//!
//! Blocks are `HEAD` (JSON metadata), `VSTD` (visited keys, 16 bytes each,
//! followed by one parity byte) and `FRNT` (frontier keys). A checkpoint is
//! written to a temporary sibling, synced and renamed over the target, so a
//! crash leaves either the old or the new snapshot.

use std::fs::{self, File};
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"TSORBIT1";
pub const VERSION: u32 = 1;

const TAG_HEAD: u32 = u32::from_le_bytes(*b"HEAD");
const TAG_VISITED: u32 = u32::from_le_bytes(*b"VSTD");
const TAG_FRONTIER: u32 = u32::from_le_bytes(*b"FRNT");

/// Search metadata stored in the `HEAD` block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Head {
    pub d: usize,
    pub start: Vec<u8>,
    pub generator_set: super::GeneratorSet,
    pub depth: u32,
    pub parity_consistent: bool,
    pub elapsed_secs: f64,
}

/// A full snapshot of a layered BFS between two layers.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub head: Head,
    /// Visited keys with their parity bit, sorted by key.
    pub visited: Vec<(u128, u8)>,
    /// The next layer to expand, in expansion order.
    pub frontier: Vec<u128>,
}

fn write_block(out: &mut Vec<u8>, tag: u32, payload: &[u8]) {
    out.extend_from_slice(&tag.to_le_bytes());
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(payload);
    out.extend_from_slice(&crc32fast::hash(payload).to_le_bytes());
}

pub fn encode(s: &Snapshot) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(12 + s.visited.len() * 17 + s.frontier.len() * 16 + 256);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    write_block(&mut out, TAG_HEAD, &serde_json::to_vec(&s.head)?);
    let mut visited = Vec::with_capacity(s.visited.len() * 17);
    for &(k, parity) in &s.visited {
        visited.extend_from_slice(&k.to_le_bytes());
        visited.push(parity);
    }
    write_block(&mut out, TAG_VISITED, &visited);
    let mut frontier = Vec::with_capacity(s.frontier.len() * 16);
    for &k in &s.frontier {
        frontier.extend_from_slice(&k.to_le_bytes());
    }
    write_block(&mut out, TAG_FRONTIER, &frontier);
    Ok(out)
}

fn bad(msg: &str) -> Error {
    Error::Checkpoint(msg.to_string())
}

pub fn decode(bytes: &[u8]) -> Result<Snapshot> {
    if bytes.len() < 12 || &bytes[..8] != MAGIC {
        return Err(bad("missing TSORBIT1 header"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let mut rest = &bytes[12..];
    let (mut head, mut visited, mut frontier) = (None, None, None);
    while !rest.is_empty() {
        if rest.len() < 12 {
            return Err(bad("truncated block header"));
        }
        let tag = u32::from_le_bytes(rest[..4].try_into().unwrap());
        let len = u64::from_le_bytes(rest[4..12].try_into().unwrap()) as usize;
        if rest.len() < 12 + len + 4 {
            return Err(bad("truncated block"));
        }
        let payload = &rest[12..12 + len];
        let crc = u32::from_le_bytes(rest[12 + len..16 + len].try_into().unwrap());
        if crc != crc32fast::hash(payload) {
            return Err(bad("block checksum mismatch"));
        }
        match tag {
            TAG_HEAD => head = Some(serde_json::from_slice::<Head>(payload)?),
            TAG_VISITED => {
                if !len.is_multiple_of(17) {
                    return Err(bad("visited block length"));
                }
                visited = Some(
                    payload
                        .chunks_exact(17)
                        .map(|c| (u128::from_le_bytes(c[..16].try_into().unwrap()), c[16]))
                        .collect(),
                );
            }
            TAG_FRONTIER => {
                if !len.is_multiple_of(16) {
                    return Err(bad("frontier block length"));
                }
                frontier = Some(
                    payload
                        .chunks_exact(16)
                        .map(|c| u128::from_le_bytes(c.try_into().unwrap()))
                        .collect(),
                );
            }
            _ => {}
        }
        rest = &rest[16 + len..];
    }
    Ok(Snapshot {
        head: head.ok_or_else(|| bad("no HEAD block"))?,
        visited: visited.ok_or_else(|| bad("no visited block"))?,
        frontier: frontier.ok_or_else(|| bad("no frontier block"))?,
    })
}

/// Atomically replaces `path` with the snapshot.
pub fn save(path: &Path, s: &Snapshot) -> Result<()> {
    let bytes = encode(s)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut f = File::create(&tmp)?;
        f.write_all(&bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        // directory sync is best effort; not every platform supports it
        if let Ok(d) = File::open(dir) {
            let _ = d.sync_all();
        }
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<Snapshot> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    decode(&bytes)
}
