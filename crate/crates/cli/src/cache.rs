use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use curvecensus::census::{CensusOptions, CensusTable};
use curvecensus::models::ModelSpace;
use curvecensus::FieldSpec;

use crate::report::SCHEMA_VERSION;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    table: CensusTable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    Hit,
    Computed,
}

pub fn cache_path(dir: &Path, f: &FieldSpec) -> PathBuf {
    dir.join(format!("census_p{}_e{}.json", f.characteristic(), f.degree()))
}

/// Returns the cached table if it was written by this schema version for
/// the same field, modulus and model form and covers `max_n`.
pub fn load(dir: &Path, f: &FieldSpec, max_n: u64) -> Option<CensusTable> {
    let text = fs::read_to_string(cache_path(dir, f)).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    let t = file.table;
    let space = ModelSpace::canonical(f);
    let fresh = file.schema_version == SCHEMA_VERSION
        && t.p == f.characteristic()
        && t.e == f.degree()
        && t.modulus == f.modulus()
        && t.form == space.form()
        && t.gamma == space.gamma()
        && t.max_n >= max_n;
    fresh.then_some(t)
}

pub fn store(dir: &Path, table: &CensusTable) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
    let path = dir.join(format!("census_p{}_e{}.json", table.p, table.e));
    let file = CacheFile {
        schema_version: SCHEMA_VERSION,
        table: table.clone(),
    };
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(&file)?).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Loads the table for `f` from the cache or computes and stores it.
pub fn table_for(dir: &Path, f: &FieldSpec, max_n: u64) -> Result<(CensusTable, CacheStatus)> {
    if let Some(t) = load(dir, f, max_n) {
        return Ok((t, CacheStatus::Hit));
    }
    let opts = CensusOptions {
        max_n,
        ..Default::default()
    };
    let t = CensusTable::compute(&ModelSpace::canonical(f), &opts)
        .with_context(|| format!("census over F_{}", f.order()))?;
    store(dir, &t)?;
    Ok((t, CacheStatus::Computed))
}
