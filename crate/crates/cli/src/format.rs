//! `MDAGv1` binary files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic       "MDAGv1"
//! header      n_x u32, n_y u32, sigma u32, node_count u32, edge_count u32, flags u8
//! nodes       node_count × (id u32, l i32, m i32, t i32, b i32)
//! edges       edge_count × (from u32, to u32, len u32, label[len])
//! checksum    SHA-256 of everything above
//! ```
//!
//! Flag bit 0 marks a compacted graph, bit 1 a graph whose output passed
//! verification. Positions use `-1` for "before the string" and `-2` for
//! infinity; the sink has no key and is written as four `-2`. Node records
//! follow the canonical numbering, edges are grouped by source node in label
//! order, so equal graphs give identical files.

use std::fs;
use std::path::Path;

use mdag_core::{Edge, Mdag, NodeId, Pos, Quadruple, Stage, StructureError};
use sha2::{Digest, Sha256};

pub const MAGIC: &[u8; 6] = b"MDAGv1";

const FLAG_COMPACTED: u8 = 1;
const FLAG_VERIFIED: u8 = 2;
const HEADER_LEN: usize = 6 + 5 * 4 + 1;
const NODE_LEN: usize = 5 * 4;
const DIGEST_LEN: usize = 32;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read file: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt file: {0}")]
    Corrupt(&'static str),
    #[error("checksum mismatch")]
    Checksum,
    #[error("file holds an invalid graph: {0}")]
    Invariant(#[from] StructureError),
}

pub fn encode(g: &Mdag) -> Vec<u8> {
    assert!(g.stage() >= Stage::Pruned, "only pruned graphs are saved");
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    for v in [g.x_len(), g.y_len(), g.sigma(), g.node_count(), g.edge_count()] {
        put_u32(&mut buf, v);
    }
    let mut flags = 0;
    if g.stage() == Stage::Compacted {
        flags |= FLAG_COMPACTED;
    }
    if g.is_verified() {
        flags |= FLAG_VERIFIED;
    }
    buf.push(flags);

    for u in g.nodes() {
        put_u32(&mut buf, u.index());
        let fields = match g.key(u) {
            Some(q) => [q.x_end, q.y_end, q.top, q.bottom].map(Pos::to_signed),
            None => [-2; 4],
        };
        for f in fields {
            buf.extend_from_slice(&(f as i32).to_le_bytes());
        }
    }
    for (u, e) in g.edges() {
        put_u32(&mut buf, u.index());
        put_u32(&mut buf, e.to.index());
        put_u32(&mut buf, e.label.len());
        buf.extend_from_slice(&e.label);
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

pub fn decode(bytes: &[u8]) -> Result<Mdag, LoadError> {
    let mut r = Reader { bytes, at: 0 };
    if r.take(MAGIC.len())? != MAGIC {
        return Err(LoadError::Corrupt("bad magic"));
    }
    let x_len = r.u32()? as usize;
    let y_len = r.u32()? as usize;
    let sigma = r.u32()? as usize;
    let node_count = r.u32()? as usize;
    let edge_count = r.u32()? as usize;
    let flags = r.take(1)?[0];
    if flags & !(FLAG_COMPACTED | FLAG_VERIFIED) != 0 {
        return Err(LoadError::Corrupt("unknown flags"));
    }
    // a node record is 20 bytes and an edge at least 12; reject absurd
    // counts before allocating
    let room = bytes.len().saturating_sub(HEADER_LEN + DIGEST_LEN);
    if node_count.saturating_mul(NODE_LEN) > room || edge_count.saturating_mul(12) > room {
        return Err(LoadError::Corrupt("counts exceed file size"));
    }

    let mut keys = Vec::with_capacity(node_count);
    for expected in 0..node_count {
        if r.u32()? as usize != expected {
            return Err(LoadError::Corrupt("node records out of order"));
        }
        let f = [r.i32()?, r.i32()?, r.i32()?, r.i32()?];
        let key = if expected == NodeId::SINK.index() {
            if f != [-2; 4] {
                return Err(LoadError::Corrupt("sink record must be all -2"));
            }
            None
        } else {
            let [l, m, t, b] = f.map(i64::from);
            Some(Quadruple::from_signed(l, m, t, b).ok_or(LoadError::Corrupt("bad position"))?)
        };
        keys.push(key);
    }

    let mut out: Vec<Vec<Edge>> = vec![Vec::new(); node_count];
    let mut last_from = 0;
    for _ in 0..edge_count {
        let from = r.u32()? as usize;
        let to = r.u32()? as usize;
        let len = r.u32()? as usize;
        let label = r.take(len)?;
        if from >= node_count || to >= node_count {
            return Err(LoadError::Corrupt("edge endpoint out of range"));
        }
        if from < last_from {
            return Err(LoadError::Corrupt("edge records out of order"));
        }
        last_from = from;
        out[from].push(Edge::new(NodeId(to as u32), label));
    }

    let body_end = r.at;
    let digest = r.take(DIGEST_LEN)?;
    if r.at != bytes.len() {
        return Err(LoadError::Corrupt("trailing bytes"));
    }
    if Sha256::digest(&bytes[..body_end]).as_slice() != digest {
        return Err(LoadError::Checksum);
    }

    let stage = if flags & FLAG_COMPACTED != 0 {
        Stage::Compacted
    } else {
        Stage::Pruned
    };
    let mut g = Mdag::from_parts(keys, out, stage, (x_len, y_len, sigma))?;
    g.set_verified(flags & FLAG_VERIFIED != 0);
    Ok(g)
}

pub fn save(g: &Mdag, path: &Path) -> std::io::Result<()> {
    fs::write(path, encode(g))
}

pub fn load(path: &Path) -> Result<Mdag, LoadError> {
    decode(&fs::read(path)?)
}

fn put_u32(buf: &mut Vec<u8>, v: usize) {
    let v = u32::try_from(v).expect("value fits the file format");
    buf.extend_from_slice(&v.to_le_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], LoadError> {
        let end = self.at.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or(LoadError::Corrupt("truncated"))?;
        let s = &self.bytes[self.at..end];
        self.at = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, LoadError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn i32(&mut self) -> Result<i32, LoadError> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}
