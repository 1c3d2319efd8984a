//! Deterministic sharding of an expansion across independent processes.
//!
//! Shard `j` of `S` owns the admissible partitions whose position in the
//! canonical enumeration is congruent to `j` mod `S`. A shard file is JSONL:
//! one `{"manifest":{…}}` line followed by that shard's records. Merging
//! checks that the manifests agree and that every position is covered
//! exactly once, then emits the records in canonical order.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coefficients::compute_many;
use crate::engine::EngineConfig;
use crate::error::{Error, Result};
use crate::partitions::{enumerate_admissible, Partition};
use crate::records::ResultRecord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardManifest {
    pub n: usize,
    pub k: usize,
    pub shards: usize,
    pub index: usize,
    pub count: usize,
    pub checksum: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShardFile {
    pub manifest: ShardManifest,
    pub records: Vec<ResultRecord>,
}

#[derive(Serialize, Deserialize)]
struct ManifestLine {
    manifest: ShardManifest,
}

/// SHA-256 (hex) of the canonical enumeration, one space-separated
/// partition per line.
pub fn enumeration_checksum(n: usize, k: usize) -> Result<String> {
    let mut h = Sha256::new();
    for p in enumerate_admissible(n, k)? {
        let line: Vec<String> = p.parts().iter().map(i64::to_string).collect();
        h.update(line.join(" ").as_bytes());
        h.update(b"\n");
    }
    Ok(hex::encode(h.finalize()))
}

/// Partitions at enumeration positions `≡ index (mod shards)`.
pub fn shard_partitions(n: usize, k: usize, shards: usize, index: usize) -> Result<Vec<Partition>> {
    if shards == 0 || index >= shards {
        return Err(Error::InvalidParameter(format!("need 0 <= index < shards, got index {index} of {shards}")));
    }
    Ok(enumerate_admissible(n, k)?.skip(index).step_by(shards).collect())
}

pub fn run_shard(
    n: usize,
    k: usize,
    shards: usize,
    index: usize,
    workers: usize,
    config: EngineConfig,
) -> Result<ShardFile> {
    let parts = shard_partitions(n, k, shards, index)?;
    let values = compute_many(&parts, n, k, workers, config)?;
    let records: Vec<ResultRecord> = parts
        .into_iter()
        .zip(values)
        .map(|(p, coeff)| ResultRecord { n, k, lambda: p.parts().to_vec(), coeff })
        .collect();
    let manifest = ShardManifest { n, k, shards, index, count: records.len(), checksum: enumeration_checksum(n, k)? };
    Ok(ShardFile { manifest, records })
}

pub fn write_shard<W: Write>(mut w: W, shard: &ShardFile) -> Result<()> {
    writeln!(w, "{}", serde_json::to_string(&ManifestLine { manifest: shard.manifest.clone() })?)?;
    for r in &shard.records {
        writeln!(w, "{}", r.to_jsonl())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_shard<R: BufRead>(r: R) -> Result<ShardFile> {
    let mut lines = r.lines();
    let first = lines.next().ok_or_else(|| Error::Shard("empty shard file".into()))??;
    let ManifestLine { manifest } =
        serde_json::from_str(&first).map_err(|e| Error::Shard(format!("first line is not a manifest: {e}")))?;
    let mut records = Vec::new();
    for line in lines {
        let line = line?;
        if !line.is_empty() {
            records.push(ResultRecord::from_jsonl(&line)?);
        }
    }
    Ok(ShardFile { manifest, records })
}

/// Validates a set of shards and reassembles the canonical record list.
pub fn merge(shards: &[ShardFile]) -> Result<Vec<ResultRecord>> {
    let Some(first) = shards.first() else {
        return Err(Error::Shard("no shard files given".into()));
    };
    let (n, k, total_shards) = (first.manifest.n, first.manifest.k, first.manifest.shards);
    let expected: Vec<Partition> = enumerate_admissible(n, k)?.collect();
    let checksum = enumeration_checksum(n, k)?;
    let position: HashMap<&[i64], usize> = expected.iter().enumerate().map(|(i, p)| (p.parts(), i)).collect();

    let mut slots: Vec<Option<&ResultRecord>> = vec![None; expected.len()];
    let mut duplicated = Vec::new();
    for shard in shards {
        let m = &shard.manifest;
        if (m.n, m.k, m.shards) != (n, k, total_shards) {
            return Err(Error::Shard(format!(
                "manifest (n={}, k={}, shards={}) disagrees with (n={n}, k={k}, shards={total_shards})",
                m.n, m.k, m.shards
            )));
        }
        if m.checksum != checksum {
            return Err(Error::Shard(format!("shard {} was cut from a different enumeration", m.index)));
        }
        if m.index >= m.shards {
            return Err(Error::Shard(format!("shard index {} out of range for {} shards", m.index, m.shards)));
        }
        if m.count != shard.records.len() {
            return Err(Error::Shard(format!(
                "shard {} declares {} records but holds {}",
                m.index,
                m.count,
                shard.records.len()
            )));
        }
        for r in &shard.records {
            let pos = match position.get(r.lambda.as_slice()) {
                Some(&pos) if r.n == n && r.k == k => pos,
                _ => return Err(Error::Shard(format!("record {:?} is not admissible for n={n}, k={k}", r.lambda))),
            };
            if pos % total_shards != m.index {
                return Err(Error::Shard(format!("record {:?} does not belong to shard {}", r.lambda, m.index)));
            }
            if slots[pos].is_some() {
                duplicated.push(r.lambda.clone());
            } else {
                slots[pos] = Some(r);
            }
        }
    }
    let missing: Vec<Vec<i64>> =
        slots.iter().zip(&expected).filter(|(s, _)| s.is_none()).map(|(_, p)| p.parts().to_vec()).collect();
    if !missing.is_empty() || !duplicated.is_empty() {
        return Err(Error::Incomplete { missing, duplicated, total: expected.len() });
    }
    Ok(slots.into_iter().map(|s| s.expect("checked complete").clone()).collect())
}
