//! On-disk cache for the quadrature table, keyed by a hash of everything
//! that goes into building it.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use lacuna_core::bessel::BesselConfig;
use lacuna_core::integrals::{QuadratureTable, TABLE_NODES};
use sha2::{Digest, Sha256};

use crate::error::CliResult;

pub const CACHE_ENV: &str = "LACUNA_CACHE_DIR";
const KEY_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct TableCache {
    dir: Option<PathBuf>,
}

fn default_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d).join("lacuna"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("lacuna"))
}

pub fn config_key(bessel: &BesselConfig, order_cap: u32) -> String {
    let mut h = Sha256::new();
    h.update(format!("lacuna-table v{KEY_VERSION} nodes={TABLE_NODES} order_cap={order_cap}\n"));
    // Debug output prints floats round-trip exactly.
    h.update(format!("{bessel:?}"));
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl TableCache {
    /// `enabled = false` always rebuilds and never touches the disk.
    pub fn from_env(enabled: bool) -> Self {
        Self { dir: if enabled { default_dir() } else { None } }
    }

    pub fn path_for(&self, bessel: &BesselConfig, order_cap: u32) -> Option<PathBuf> {
        let key = config_key(bessel, order_cap);
        self.dir.as_ref().map(|d| d.join(format!("table-{}.bin", &key[..32])))
    }

    pub fn load_or_build(&self, bessel: &BesselConfig, order_cap: u32) -> CliResult<QuadratureTable> {
        let Some(path) = self.path_for(bessel, order_cap) else {
            return Ok(QuadratureTable::build(bessel, order_cap)?);
        };
        if let Some(t) = read(&path).filter(|t| t.order_cap() == order_cap) {
            return Ok(t);
        }
        let table = QuadratureTable::build(bessel, order_cap)?;
        // A cache that cannot be written is not an error.
        if let Err(e) = write_atomic(&path, &table) {
            eprintln!("warning: could not write table cache {}: {e}", path.display());
        }
        Ok(table)
    }
}

fn read(path: &Path) -> Option<QuadratureTable> {
    let f = File::open(path).ok()?;
    match QuadratureTable::read_from(BufReader::new(f)) {
        Ok(t) => Some(t),
        Err(e) => {
            eprintln!("warning: ignoring unreadable table cache {}: {e}", path.display());
            None
        }
    }
}

fn write_atomic(path: &Path, table: &QuadratureTable) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{}.{}.tmp", path.file_name().unwrap_or_default().to_string_lossy(), std::process::id()));
    let res = (|| {
        let mut w = BufWriter::new(File::create(&tmp)?);
        table.write_to(&mut w)?;
        w.flush()?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_depends_on_config() {
        let b = BesselConfig::default();
        assert_eq!(config_key(&b, 532), config_key(&b, 532));
        assert_ne!(config_key(&b, 532), config_key(&b, 531));
        let other = BesselConfig { zero_tol: 1e-12, ..b };
        assert_ne!(config_key(&b, 532), config_key(&other, 532));
    }

    #[test]
    fn disabled_cache_has_no_path() {
        assert!(TableCache::from_env(false).path_for(&BesselConfig::default(), 8).is_none());
    }
}
