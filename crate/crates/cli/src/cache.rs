// SPDX-License-Identifier: Apache-2.0

//! On-disk cache of count tables, keyed by `(N, variant)` and guarded by a
//! SHA-256 of the file contents.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use divrank_core::{DivisorCountTable, ModelVariant};

use crate::error::CliResult;

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn table_path(dir: &Path, n: u64, variant: ModelVariant) -> PathBuf {
    dir.join(format!("table_{n}_{}.bin", variant.name()))
}

fn hash_path(bin: &Path) -> PathBuf {
    bin.with_extension("sha256")
}

/// Cached table if the file, its hash and its header all match.
fn load(dir: &Path, n: u64, variant: ModelVariant) -> Option<DivisorCountTable> {
    let bin = table_path(dir, n, variant);
    let bytes = fs::read(&bin).ok()?;
    let want = fs::read_to_string(hash_path(&bin)).ok()?;
    if hex(&Sha256::digest(&bytes)) != want.trim() {
        return None;
    }
    let t = DivisorCountTable::read_from(bytes.as_slice()).ok()?;
    (t.n_max() as u64 == n && t.variant() == variant).then_some(t)
}

fn store(dir: &Path, table: &DivisorCountTable) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    let mut bytes = Vec::with_capacity(17 + 4 * table.n_max());
    table.write_to(&mut bytes)?;
    let bin = table_path(dir, table.n_max() as u64, table.variant());
    fs::write(&bin, &bytes)?;
    fs::write(hash_path(&bin), hex(&Sha256::digest(&bytes)))?;
    Ok(())
}

/// Builds the table, going through the cache when a directory is given.
pub fn table(cache: Option<&Path>, n: u64, variant: ModelVariant) -> CliResult<DivisorCountTable> {
    let Some(dir) = cache else {
        return Ok(DivisorCountTable::build(n, variant)?);
    };
    if let Some(t) = load(dir, n, variant) {
        eprintln!("cache hit: {}", table_path(dir, n, variant).display());
        return Ok(t);
    }
    let t = DivisorCountTable::build(n, variant)?;
    store(dir, &t)?;
    eprintln!("cache stored: {}", table_path(dir, n, variant).display());
    Ok(t)
}
