//! Binary sketch file: header, `r`-values, per-node sketch entries, then
//! estimator-tagged sections of estimation lists. All integers and floats
//! are little-endian; see the README for the full layout.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};
use crate::estimate::{EstimationList, EstimationLists, Estimator};
use crate::graph::NodeId;
use crate::sketch::{AdsEntry, AdsSketch, RankAssignMode, RankAssignment, SketchSet};

pub const MAGIC: &[u8; 4] = b"ADSF";
pub const FORMAT_VERSION: u32 = 1;

/// Contents of a sketch file.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredSketches {
    pub set: SketchSet,
    pub lists: Vec<EstimationLists>,
}

impl StoredSketches {
    pub fn lists_for(&self, estimator: Estimator) -> Option<&EstimationLists> {
        self.lists.iter().find(|l| l.estimator() == estimator)
    }
}

pub fn write_sketches<W: Write>(mut w: W, set: &SketchSet, lists: &[&EstimationLists]) -> Result<()> {
    for l in lists {
        if l.k() != set.k() || l.u_count() != set.u_count() || l.node_count() != set.node_count() {
            return Err(Error::Mismatch(format!("{} lists were not built from this sketch set", l.estimator())));
        }
    }
    let ranks = set.ranks();
    w.write_all(MAGIC)?;
    w.write_u32::<LE>(FORMAT_VERSION)?;
    w.write_u64::<LE>(set.node_count() as u64)?;
    w.write_u64::<LE>(set.u_count() as u64)?;
    w.write_u32::<LE>(set.k() as u32)?;
    w.write_u8(ranks.mode().code())?;
    w.write_u64::<LE>(ranks.seed())?;
    for &r in ranks.values() {
        w.write_f64::<LE>(r)?;
    }
    for s in set.sketches() {
        w.write_u32::<LE>(s.len() as u32)?;
        for e in s.entries() {
            w.write_u32::<LE>(e.node)?;
            w.write_f64::<LE>(e.r)?;
            w.write_f64::<LE>(e.dist)?;
            w.write_u8(e.auxiliary as u8)?;
        }
    }
    w.write_u32::<LE>(lists.len() as u32)?;
    for l in lists {
        w.write_u8(l.estimator().code())?;
        for list in l.lists() {
            w.write_u32::<LE>(list.pairs.len() as u32)?;
            for &(d, est) in &list.pairs {
                w.write_f64::<LE>(d)?;
                w.write_f64::<LE>(est)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn format(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn count<R: Read>(r: &mut R, what: &str, limit: u64) -> Result<usize> {
    let c = r.read_u32::<LE>()? as u64;
    if c > limit {
        return Err(format(format!("{what} count {c} exceeds {limit}")));
    }
    Ok(c as usize)
}

pub fn read_sketches<R: Read>(mut r: R) -> Result<StoredSketches> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(format("not a sketch file"));
    }
    let version = r.read_u32::<LE>()?;
    if version != FORMAT_VERSION {
        return Err(format(format!("unsupported format version {version}")));
    }
    let n = r.read_u64::<LE>()?;
    if n > NodeId::MAX as u64 {
        return Err(format("node count too large"));
    }
    let n = n as usize;
    let u_count = r.read_u64::<LE>()? as usize;
    let k = r.read_u32::<LE>()? as usize;
    if k == 0 {
        return Err(format("k is zero"));
    }
    let mode = RankAssignMode::from_code(r.read_u8()?).ok_or_else(|| format("unknown rank assignment mode"))?;
    let seed = r.read_u64::<LE>()?;
    let mut values = Vec::with_capacity(n.min(1 << 24));
    for _ in 0..n {
        values.push(r.read_f64::<LE>()?);
    }
    let ranks = RankAssignment::from_values(mode, seed, values).map_err(|e| format(e.to_string()))?;
    if ranks.rankee_count() != u_count {
        return Err(format("rankee count does not match the r-values"));
    }
    let mut sketches = Vec::with_capacity(n.min(1 << 24));
    for _ in 0..n {
        let c = count(&mut r, "entry", u_count as u64)?;
        let mut entries = Vec::with_capacity(c);
        for _ in 0..c {
            let node = r.read_u32::<LE>()?;
            if node as usize >= n {
                return Err(format(format!("entry node {node} out of range")));
            }
            entries.push(AdsEntry {
                node,
                r: r.read_f64::<LE>()?,
                dist: r.read_f64::<LE>()?,
                auxiliary: match r.read_u8()? {
                    0 => false,
                    1 => true,
                    b => return Err(format(format!("bad auxiliary flag {b}"))),
                },
            });
        }
        sketches.push(AdsSketch::from_entries(k, entries));
    }
    let set = SketchSet::from_parts(k, ranks, sketches)?;
    let sections = count(&mut r, "section", 16)?;
    let mut lists = Vec::with_capacity(sections);
    for _ in 0..sections {
        let estimator = Estimator::from_code(r.read_u8()?).ok_or_else(|| format("unknown estimator tag"))?;
        let mut per_node = Vec::with_capacity(n.min(1 << 24));
        for _ in 0..n {
            let c = count(&mut r, "pair", u_count as u64)?;
            let mut pairs = Vec::with_capacity(c);
            for _ in 0..c {
                pairs.push((r.read_f64::<LE>()?, r.read_f64::<LE>()?));
            }
            per_node.push(EstimationList { estimator, pairs });
        }
        lists.push(EstimationLists::from_parts(estimator, k, u_count, per_node));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(format("trailing bytes after the last section"));
    }
    Ok(StoredSketches { set, lists })
}

pub fn save_sketches(path: impl AsRef<Path>, set: &SketchSet, lists: &[&EstimationLists]) -> Result<()> {
    write_sketches(BufWriter::new(File::create(path)?), set, lists)
}

pub fn load_sketches(path: impl AsRef<Path>) -> Result<StoredSketches> {
    read_sketches(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{erdos_renyi, Lengths};
    use crate::sketch::{assign_ranks, build_ads, BuildSchedule};

    #[test]
    fn round_trip() {
        let g = erdos_renyi(60, 3.0, true, Lengths::Integer(1, 4), 2)
            .unwrap()
            .with_rankees((0..60).map(|v| v % 3 != 0).collect())
            .unwrap();
        let ranks = assign_ranks(&g, RankAssignMode::Hash, 11);
        let (set, _) = build_ads(&g, 3, &ranks, BuildSchedule::Sequential).unwrap();
        let bk = EstimationLists::build(&set, Estimator::BottomK);
        let hip = EstimationLists::build(&set, Estimator::Hip);
        let mut buf = Vec::new();
        write_sketches(&mut buf, &set, &[&bk, &hip]).unwrap();
        let back = read_sketches(buf.as_slice()).unwrap();
        assert_eq!(back.set, set);
        assert_eq!(back.lists, vec![bk, hip]);
    }

    #[test]
    fn rejects_garbage_and_truncation() {
        assert!(matches!(read_sketches(&b"NOPE0000"[..]), Err(Error::Format(_))));
        let g = erdos_renyi(10, 2.0, false, Lengths::Unit, 1).unwrap();
        let ranks = assign_ranks(&g, RankAssignMode::Permutation, 1);
        let (set, _) = build_ads(&g, 2, &ranks, BuildSchedule::Sequential).unwrap();
        let mut buf = Vec::new();
        write_sketches(&mut buf, &set, &[]).unwrap();
        assert!(read_sketches(&buf[..buf.len() - 3]).is_err());
        buf.push(0);
        assert!(read_sketches(buf.as_slice()).is_err());
    }
}
