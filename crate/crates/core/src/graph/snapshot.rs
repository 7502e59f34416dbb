//! Binary snapshot of both graphs.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic     8 bytes  "TDGRAPH\0"
//! version   u32      currently 1
//! -- collaboration graph --
//! cap       u64
//! authors   u64 count, then per author: u32 byte length + UTF-8 bytes (sorted)
//! edges     u64 count, then per edge sorted by (a, b):
//!           u32 a, u32 b, u32 year count, i32 years...
//! skipped   u64 count, then strings as above
//! -- citation graph --
//! nodes     u64 count, then per node: string, i32 year, u8 discipline index
//!           (year i32::MIN and discipline 255 mark a dangling node)
//! backward  per node: u32 count + u32 node indices
//! ```
//!
//! Forward lists and the anomaly count are rebuilt on load.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::discipline::Discipline;
use crate::error::{CoreError, Result};
use crate::graph::{CitationGraph, CollabGraph};

pub const MAGIC: &[u8; 8] = b"TDGRAPH\0";
pub const VERSION: u32 = 1;

struct Out<W: Write>(W);

impl<W: Write> Out<W> {
    fn u8(&mut self, v: u8) -> Result<()> {
        Ok(self.0.write_all(&[v])?)
    }
    fn u32(&mut self, v: u32) -> Result<()> {
        Ok(self.0.write_all(&v.to_le_bytes())?)
    }
    fn i32(&mut self, v: i32) -> Result<()> {
        Ok(self.0.write_all(&v.to_le_bytes())?)
    }
    fn u64(&mut self, v: u64) -> Result<()> {
        Ok(self.0.write_all(&v.to_le_bytes())?)
    }
    fn str(&mut self, s: &str) -> Result<()> {
        self.u32(s.len() as u32)?;
        Ok(self.0.write_all(s.as_bytes())?)
    }
}

struct In<R: Read>(R);

impl<R: Read> In<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut b = [0; N];
        self.0
            .read_exact(&mut b)
            .map_err(|e| CoreError::Snapshot(format!("truncated: {e}")))?;
        Ok(b)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.bytes::<1>()?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }
    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(self.bytes()?))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }
    fn str(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let mut buf = vec![0; len];
        self.0
            .read_exact(&mut buf)
            .map_err(|e| CoreError::Snapshot(format!("truncated: {e}")))?;
        String::from_utf8(buf).map_err(|e| CoreError::Snapshot(e.to_string()))
    }
    fn count(&mut self, limit: usize, what: &str) -> Result<usize> {
        let n = self.u64()? as usize;
        if n > limit {
            return Err(CoreError::Snapshot(format!("{what} count {n} is implausible")));
        }
        Ok(n)
    }
}

const MAX_ITEMS: usize = 1 << 34;

pub fn write_snapshot<W: Write>(collab: &CollabGraph, citation: &CitationGraph, out: W) -> Result<()> {
    let mut w = Out(out);
    w.0.write_all(MAGIC)?;
    w.u32(VERSION)?;
    w.u64(collab.team_size_cap as u64)?;
    w.u64(collab.authors.len() as u64)?;
    for a in &collab.authors {
        w.str(a)?;
    }
    let mut keys: Vec<&(u32, u32)> = collab.edges.keys().collect();
    keys.sort_unstable();
    w.u64(keys.len() as u64)?;
    for k in keys {
        let years = &collab.edges[k];
        w.u32(k.0)?;
        w.u32(k.1)?;
        w.u32(years.len() as u32)?;
        for &y in years {
            w.i32(y)?;
        }
    }
    w.u64(collab.skipped.len() as u64)?;
    for s in &collab.skipped {
        w.str(s)?;
    }
    w.u64(citation.ids.len() as u64)?;
    for (i, id) in citation.ids.iter().enumerate() {
        w.str(id)?;
        w.i32(citation.year[i].unwrap_or(i32::MIN))?;
        w.u8(citation.discipline[i].map_or(255, |d| d.index() as u8))?;
    }
    for refs in &citation.backward {
        w.u32(refs.len() as u32)?;
        for &r in refs {
            w.u32(r)?;
        }
    }
    w.0.flush()?;
    Ok(())
}

pub fn read_snapshot<R: Read>(input: R) -> Result<(CollabGraph, CitationGraph)> {
    let mut r = In(input);
    if &r.bytes::<8>()? != MAGIC {
        return Err(CoreError::Snapshot("bad magic".into()));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(CoreError::Snapshot(format!("unsupported version {version}")));
    }
    let team_size_cap = r.u64()? as usize;
    let n_authors = r.count(MAX_ITEMS, "author")?;
    let authors = (0..n_authors).map(|_| r.str()).collect::<Result<Vec<_>>>()?;
    let index = authors.iter().enumerate().map(|(i, a)| (a.clone(), i as u32)).collect();
    let n_edges = r.count(MAX_ITEMS, "edge")?;
    let mut edges = HashMap::with_capacity(n_edges);
    for _ in 0..n_edges {
        let (a, b) = (r.u32()?, r.u32()?);
        if a >= b || b as usize >= n_authors {
            return Err(CoreError::Snapshot(format!("bad edge ({a}, {b})")));
        }
        let k = r.u32()? as usize;
        let years = (0..k).map(|_| r.i32()).collect::<Result<Vec<_>>>()?;
        edges.insert((a, b), years);
    }
    let n_skipped = r.count(MAX_ITEMS, "skipped paper")?;
    let skipped = (0..n_skipped).map(|_| r.str()).collect::<Result<Vec<_>>>()?;
    let collab = CollabGraph {
        authors,
        index,
        edges,
        skipped,
        team_size_cap,
    };

    let n = r.count(MAX_ITEMS, "node")?;
    let mut ids = Vec::with_capacity(n);
    let mut year = Vec::with_capacity(n);
    let mut discipline = Vec::with_capacity(n);
    for _ in 0..n {
        ids.push(r.str()?);
        let y = r.i32()?;
        year.push((y != i32::MIN).then_some(y));
        let d = r.u8()?;
        discipline.push(match d {
            255 => None,
            d if (d as usize) < Discipline::ALL.len() => Some(Discipline::ALL[d as usize]),
            d => return Err(CoreError::Snapshot(format!("bad discipline index {d}"))),
        });
    }
    let mut backward = Vec::with_capacity(n);
    for _ in 0..n {
        let k = r.u32()? as usize;
        let refs = (0..k).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
        if refs.iter().any(|&x| x as usize >= n) {
            return Err(CoreError::Snapshot("reference index out of range".into()));
        }
        backward.push(refs);
    }
    Ok((collab, CitationGraph::from_parts(ids, year, discipline, backward)))
}
